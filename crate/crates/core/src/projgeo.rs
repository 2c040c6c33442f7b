//! Exact projective geometry in P⁴ over K: points, lines, forms,
//! hypersurface membership and tritangent-plane residuation.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclo::FieldElement;
use crate::error::{Error, Result};
use crate::linalg::{dot_k, kernel_basis, MatrixK, VectorK};

/// Sparse multivariate polynomial over K.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, FieldElement::one());
        p
    }

    /// Σ cᵢ xᵢ
    pub fn linear(coeffs: &[FieldElement]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElement)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: FieldElement) {
        assert_eq!(exps.len(), self.nvars, "exponent length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count");
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, FieldElement::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn total_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| e.iter().sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == degree)
    }

    pub fn eval(&self, x: &[FieldElement]) -> FieldElement {
        assert_eq!(x.len(), self.nvars, "point dimension");
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(c.clone(), |acc, (&k, xi)| &acc * &xi.pow(k)))
            .sum()
    }

    /// Replaces variable i by `images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars, "substitution arity");
        let m = images.first().map_or(0, Poly::nvars);
        let mut cache: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = cache.entry((i, k)).or_insert_with(|| images[i].pow(k)).clone();
                term = term.mul(&p);
            }
            out = out.add(&term);
        }
        out
    }

    /// Coefficient vector of a linear form.
    pub fn linear_coefficients(&self) -> Option<VectorK> {
        if !self.is_homogeneous(1) {
            return None;
        }
        let mut v = vec![FieldElement::zero(); self.nvars];
        for (e, c) in &self.terms {
            let i = e.iter().position(|&k| k == 1)?;
            v[i] = c.clone();
        }
        Some(v)
    }

    /// Division by a nonzero linear form: returns (quotient, remainder) with
    /// the remainder free of the form's leading variable.
    pub fn div_linear(&self, l: &Poly) -> Result<(Poly, Poly)> {
        let coeffs = l
            .linear_coefficients()
            .ok_or_else(|| Error::Invariant("divisor is not a linear form".into()))?;
        let j = coeffs.iter().position(|c| !c.is_zero()).ok_or(Error::DivisionByZero)?;
        let lead_inv = coeffs[j].inv()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((e, c)) = rem
            .terms
            .iter()
            .filter(|(e, _)| e[j] > 0)
            .max_by_key(|(e, _)| e[j])
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            let mut qe = e;
            qe[j] -= 1;
            let mut q = Poly::zero(self.nvars);
            q.add_term(qe, &c * &lead_inv);
            rem = rem.sub(&q.mul(l));
            quot = quot.add(&q);
        }
        Ok((quot, rem))
    }
}

/// A homogeneous form of fixed degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousForm {
    degree: u32,
    poly: Poly,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponents: Vec<u32>,
    coefficient: FieldElement,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    variables: usize,
    degree: u32,
    terms: Vec<TermRepr>,
}

impl HomogeneousForm {
    pub fn new(poly: Poly, degree: u32) -> Result<Self> {
        if !poly.is_homogeneous(degree) {
            return Err(Error::NotHomogeneous(degree));
        }
        Ok(HomogeneousForm { degree, poly })
    }

    /// Σ aᵢ xᵢᵈ
    pub fn diagonal(coeffs: &[FieldElement], degree: u32) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = degree;
            p.add_term(e, c.clone());
        }
        HomogeneousForm { degree, poly: p }
    }

    /// Σ xᵢᵈ in n variables.
    pub fn power_sum(n: usize, degree: u32) -> Self {
        Self::diagonal(&vec![FieldElement::one(); n], degree)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn eval(&self, x: &[FieldElement]) -> FieldElement {
        self.poly.eval(x)
    }

    /// The coefficients aᵢ when the form is Σ aᵢ xᵢᵈ.
    pub fn diagonal_coefficients(&self) -> Option<VectorK> {
        let n = self.nvars();
        let mut v = vec![FieldElement::zero(); n];
        for (e, c) in self.poly.terms() {
            let i = e.iter().position(|&k| k == self.degree)?;
            v[i] = c.clone();
        }
        Some(v)
    }

    /// Symmetric Gram matrix of a quadratic form.
    pub fn quadratic_gram(&self) -> Option<MatrixK> {
        if self.degree != 2 {
            return None;
        }
        let n = self.nvars();
        let half = FieldElement::from_ratio(1, 2);
        let mut g = MatrixK::zeros(n, n);
        for (e, c) in self.poly.terms() {
            let idx: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
            match idx.as_slice() {
                [i] => g.set(*i, *i, c.clone()),
                [i, j] => {
                    g.set(*i, *j, c * &half);
                    g.set(*j, *i, c * &half);
                }
                _ => return None,
            }
        }
        Some(g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

impl Serialize for HomogeneousForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormRepr {
            variables: self.nvars(),
            degree: self.degree,
            terms: self
                .poly
                .terms()
                .map(|(e, c)| TermRepr {
                    exponents: e.clone(),
                    coefficient: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogeneousForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = FormRepr::deserialize(d)?;
        let mut p = Poly::zero(repr.variables);
        for t in repr.terms {
            if t.exponents.len() != repr.variables {
                return Err(D::Error::custom("exponent length"));
            }
            p.add_term(t.exponents, t.coefficient);
        }
        HomogeneousForm::new(p, repr.degree).map_err(D::Error::custom)
    }
}

/// A point of projective space, normalized so the first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: Vec<FieldElement>,
}

impl ProjPoint {
    pub fn new(coords: Vec<FieldElement>) -> Result<Self> {
        let lead = coords.iter().find(|c| !c.is_zero()).ok_or(Error::ZeroPoint)?;
        let inv = lead.inv()?;
        Ok(ProjPoint {
            coords: coords.iter().map(|c| c * &inv).collect(),
        })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| FieldElement::from_integer(c)).collect())
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn conj(&self) -> ProjPoint {
        ProjPoint::new(self.coords.iter().map(FieldElement::conj).collect()).expect("nonzero")
    }

    pub fn galois_apply(&self, k: i64) -> Result<ProjPoint> {
        ProjPoint::new(
            self.coords
                .iter()
                .map(|c| c.galois_apply(k))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let coords = Vec::<FieldElement>::deserialize(d)?;
        ProjPoint::new(coords).map_err(D::Error::custom)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// True iff every form vanishes at p.
pub fn membership(p: &ProjPoint, forms: &[HomogeneousForm]) -> bool {
    forms.iter().all(|f| f.eval(p.coords()).is_zero())
}

/// A line of projective space, stored as the reduced row-echelon basis of
/// its 2-dimensional linear span.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    basis: MatrixK,
}

impl ProjLine {
    /// The line spanned by two vectors.
    pub fn from_vectors(a: &[FieldElement], b: &[FieldElement]) -> Result<Self> {
        let m = MatrixK::from_rows(vec![a.to_vec(), b.to_vec()]);
        let basis = m.row_space_basis();
        if basis.rows() != 2 {
            return Err(Error::NotALine("spanning vectors are dependent".into()));
        }
        Ok(ProjLine { basis })
    }

    /// The common zero set of linear forms (given by coefficient rows).
    pub fn from_equations(equations: &[VectorK]) -> Result<Self> {
        let ker = kernel_basis(&MatrixK::from_rows(equations.to_vec()));
        if ker.len() != 2 {
            return Err(Error::NotALine(format!(
                "equations cut out a space of projective dimension {}",
                ker.len() as isize - 1
            )));
        }
        Self::from_vectors(&ker[0], &ker[1])
    }

    pub fn from_int_equations(equations: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<VectorK> = equations
            .iter()
            .map(|r| r.iter().map(|&x| FieldElement::from_integer(x)).collect())
            .collect();
        Self::from_equations(&rows)
    }

    pub fn basis(&self) -> &MatrixK {
        &self.basis
    }

    pub fn rows(&self) -> [VectorK; 2] {
        [self.basis.row(0).to_vec(), self.basis.row(1).to_vec()]
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// The point s·A + t·B.
    pub fn point_at(&self, s: &FieldElement, t: &FieldElement) -> Result<ProjPoint> {
        let [a, b] = self.rows();
        ProjPoint::new(a.iter().zip(&b).map(|(x, y)| &(s * x) + &(t * y)).collect())
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.basis.vstack(&MatrixK::from_rows(vec![p.coords().to_vec()])).rank() == 2
    }

    /// Rank of the stacked 4×n coordinate matrix: 2 for equal lines,
    /// 3 for distinct meeting lines, 4 for skew lines.
    pub fn joint_rank(&self, other: &ProjLine) -> usize {
        self.basis.vstack(&other.basis).rank()
    }

    /// True iff the lines are distinct and intersect.
    pub fn meets(&self, other: &ProjLine) -> bool {
        self.joint_rank(other) == 3
    }

    /// The intersection point of two distinct meeting lines.
    pub fn intersection(&self, other: &ProjLine) -> Option<ProjPoint> {
        if !self.meets(other) {
            return None;
        }
        // a·A + b·B = c·C + d·D
        let [a, b] = self.rows();
        let [c, d] = other.rows();
        let neg_c: VectorK = c.iter().map(|x| -x).collect();
        let neg_d: VectorK = d.iter().map(|x| -x).collect();
        let m = MatrixK::from_columns(&[a.clone(), b.clone(), neg_c, neg_d]);
        let ker = kernel_basis(&m);
        let v = ker.first()?;
        self.point_at(&v[0], &v[1]).ok()
    }

    /// Every basis row lies in the hyperplane given by `h`.
    pub fn lies_in(&self, h: &HomogeneousForm) -> bool {
        line_in_surface(self, h)
    }

    pub fn to_strings(&self) -> Vec<Vec<Vec<String>>> {
        self.basis.to_strings()
    }
}

impl Serialize for ProjLine {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.row_vectors().serialize(s)
    }
}

impl fmt::Debug for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.rows();
        let fmt_row = |r: &VectorK| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "Line[<{}>, <{}>]", fmt_row(&a), fmt_row(&b))
    }
}

/// The line through two distinct points.
pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    if p == q {
        return Err(Error::CoincidentPoints);
    }
    ProjLine::from_vectors(p.coords(), q.coords())
}

/// The restriction f(s·A + t·B) as a binary form in (s, t).
pub fn restrict_to_line(l: &ProjLine, f: &HomogeneousForm) -> Poly {
    let [a, b] = l.rows();
    let images: Vec<Poly> = a
        .iter()
        .zip(&b)
        .map(|(x, y)| Poly::linear(&[x.clone(), y.clone()]))
        .collect();
    f.poly().substitute(&images)
}

/// True iff f vanishes identically on the line.
pub fn line_in_surface(l: &ProjLine, f: &HomogeneousForm) -> bool {
    restrict_to_line(l, f).is_zero()
}

/// The hyperplane form x₀ + … + x₄.
pub fn hyperplane_form(n: usize) -> HomogeneousForm {
    HomogeneousForm::power_sum(n, 1)
}

/// Given two distinct meeting lines on the cubic {Σx = 0, f = 0}, the third
/// line of the plane section they span.
pub fn residual_line(f: &HomogeneousForm, a: &ProjLine, b: &ProjLine) -> Result<ProjLine> {
    if f.degree() != 3 {
        return Err(Error::UnsupportedShape(format!(
            "residuation needs a cubic, got degree {}",
            f.degree()
        )));
    }
    let hyper = hyperplane_form(f.nvars());
    for l in [a, b] {
        if !line_in_surface(l, f) || !l.lies_in(&hyper) {
            return Err(Error::NotOnSurface);
        }
    }
    match a.joint_rank(b) {
        2 => return Err(Error::CoincidentLines),
        4 => return Err(Error::SkewLines),
        _ => {}
    }
    let (plane, pivots) = a.basis.vstack(&b.basis).rref();
    let plane_rows: Vec<VectorK> = (0..3).map(|r| plane.row(r).to_vec()).collect();
    // plane coordinates of a vector in the span are its pivot entries
    let in_plane = |v: &[FieldElement]| -> VectorK { pivots.iter().map(|&c| v[c].clone()).collect() };
    let line_form = |l: &ProjLine| -> Result<Poly> {
        let [r0, r1] = l.rows();
        let ker = kernel_basis(&MatrixK::from_rows(vec![in_plane(&r0), in_plane(&r1)]));
        match ker.as_slice() {
            [w] => Ok(Poly::linear(w)),
            _ => Err(Error::Invariant("line does not span a line in the plane".into())),
        }
    };
    let la = line_form(a)?;
    let lb = line_form(b)?;
    let images: Vec<Poly> = (0..f.nvars())
        .map(|j| Poly::linear(&plane_rows.iter().map(|r| r[j].clone()).collect::<Vec<_>>()))
        .collect();
    let restricted = f.poly().substitute(&images);
    if restricted.is_zero() {
        return Err(Error::FactorizationFailure);
    }
    let (q1, r1) = restricted.div_linear(&la)?;
    if !r1.is_zero() {
        return Err(Error::FactorizationFailure);
    }
    let (q2, r2) = q1.div_linear(&lb)?;
    if !r2.is_zero() {
        return Err(Error::FactorizationFailure);
    }
    let lc = q2
        .linear_coefficients()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .ok_or(Error::FactorizationFailure)?;
    if la.mul(&lb).mul(&q2) != restricted {
        return Err(Error::FactorizationFailure);
    }
    let ker = kernel_basis(&MatrixK::from_rows(vec![lc]));
    let lift = |w: &VectorK| -> VectorK {
        (0..f.nvars())
            .map(|j| dot_k(w, &plane_rows.iter().map(|r| r[j].clone()).collect::<Vec<_>>()))
            .collect()
    };
    ProjLine::from_vectors(&lift(&ker[0]), &lift(&ker[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_integer(n)
    }

    fn clebsch_forms() -> Vec<HomogeneousForm> {
        vec![hyperplane_form(5), HomogeneousForm::power_sum(5, 3)]
    }

    fn o_point(k: i64) -> ProjPoint {
        ProjPoint::new((0..5).map(|j| FieldElement::zeta_pow(4 * j * k)).collect()).unwrap()
    }

    #[test]
    fn normalization_is_idempotent() {
        let p = ProjPoint::new(vec![fe(0), fe(3), fe(-6), fe(3), fe(0)]).unwrap();
        assert_eq!(p.coords()[1], fe(1));
        assert_eq!(ProjPoint::new(p.coords().to_vec()).unwrap(), p);
        assert_eq!(ProjPoint::from_ints(&[0, 0, 0, 0, 0]), Err(Error::ZeroPoint));
    }

    #[test]
    fn membership_examples() {
        let forms = clebsch_forms();
        assert!(membership(&o_point(1), &forms));
        assert!(!membership(&ProjPoint::from_ints(&[-4, 1, 1, 1, 1]).unwrap(), &forms));
        let quadric = vec![hyperplane_form(5), HomogeneousForm::power_sum(5, 2)];
        let v1 = ProjPoint::from_ints(&[0, -1, 1, 1, -1]).unwrap();
        assert!(!membership(&v1, &quadric));
        assert_eq!(quadric[1].eval(v1.coords()), fe(4));
    }

    #[test]
    fn line_through_u1_w1_is_l1() {
        let i = FieldElement::i();
        let u1 = ProjPoint::new(vec![fe(0), -&i, fe(-1), fe(1), i.clone()]).unwrap();
        let w1 = ProjPoint::new(vec![fe(0), i.clone(), fe(-1), fe(1), -&i]).unwrap();
        let l = line_through(&u1, &w1).unwrap();
        let l1 =
            ProjLine::from_int_equations(&[vec![0, 1, 0, 0, 1], vec![0, 0, 1, 1, 0], vec![1, 1, 1, 1, 1]]).unwrap();
        assert_eq!(l, l1);
        assert_eq!(line_through(&w1, &u1).unwrap(), l);
        assert_eq!(line_through(&u1, &u1), Err(Error::CoincidentPoints));
        assert!(line_in_surface(&l1, &clebsch_forms()[1]));
        assert!(!line_in_surface(&l1, &HomogeneousForm::power_sum(5, 2)));
    }

    #[test]
    fn o_pair_lines_on_the_cubic() {
        // (1:ζ₅ᵏʲ) and (1:ζ₅ᵐʲ) span a line on Σx³ iff 2k+m and k+2m are
        // both nonzero mod 5, i.e. iff k + m ≡ 0: only conjugate pairs.
        let cubic = &clebsch_forms()[1];
        let l13 = line_through(&o_point(1), &o_point(3)).unwrap();
        assert!(!line_in_surface(&l13, cubic));
        let l14 = line_through(&o_point(1), &o_point(4)).unwrap();
        assert!(line_in_surface(&l14, cubic));
        let l23 = line_through(&o_point(2), &o_point(3)).unwrap();
        assert!(line_in_surface(&l23, cubic));
        assert!(!l14.meets(&l23));
    }

    #[test]
    fn residual_of_two_coordinate_lines() {
        let cubic = &clebsch_forms()[1];
        let a = ProjLine::from_int_equations(&[vec![1, 1, 0, 0, 0], vec![0, 0, 0, 1, 1], vec![1; 5]]).unwrap();
        let b = ProjLine::from_int_equations(&[vec![1, 1, 0, 0, 0], vec![0, 0, 1, 1, 0], vec![1; 5]]).unwrap();
        let c = ProjLine::from_int_equations(&[vec![1, 1, 0, 0, 0], vec![0, 0, 1, 0, 1], vec![1; 5]]).unwrap();
        assert_eq!(residual_line(cubic, &a, &b).unwrap(), c);
        assert_eq!(residual_line(cubic, &b, &a).unwrap(), c);
        assert_eq!(residual_line(cubic, &a, &a), Err(Error::CoincidentLines));
    }

    #[test]
    fn residual_of_skew_lines_fails() {
        let cubic = &clebsch_forms()[1];
        let l14 = line_through(&o_point(1), &o_point(4)).unwrap();
        let l23 = line_through(&o_point(2), &o_point(3)).unwrap();
        assert_eq!(residual_line(cubic, &l14, &l23), Err(Error::SkewLines));
        let off = ProjLine::from_int_equations(&[vec![1, 0, 0, 0, 0], vec![0, 1, 0, 0, 0], vec![1; 5]]).unwrap();
        assert_eq!(residual_line(cubic, &l14, &off), Err(Error::NotOnSurface));
    }

    #[test]
    fn residual_of_pair_line_and_coordinate_line() {
        let cubic = &clebsch_forms()[1];
        let e = line_through(&o_point(1), &o_point(4)).unwrap();
        let mut found = 0;
        for skip in 0..5 {
            let rest: Vec<usize> = (0..5).filter(|&x| x != skip).collect();
            for pairing in [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]] {
                let mut r1 = vec![0; 5];
                r1[rest[pairing[0]]] = 1;
                r1[rest[pairing[1]]] = 1;
                let mut r2 = vec![0; 5];
                r2[rest[pairing[2]]] = 1;
                r2[rest[pairing[3]]] = 1;
                let l = ProjLine::from_int_equations(&[r1, r2, vec![1; 5]]).unwrap();
                if l.meets(&e) {
                    let r = residual_line(cubic, &e, &l).unwrap();
                    assert!(line_in_surface(&r, cubic));
                    assert!(r.meets(&e) && r.meets(&l));
                    // irrational: neither a coordinate line nor an O-pair line
                    assert!(r.basis().row_vectors().iter().flatten().any(|x| !x.is_rational()));
                    assert_ne!(r, e);
                    found += 1;
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn points_of_on_surface_lines_are_members() {
        let forms = clebsch_forms();
        let l = line_through(&o_point(2), &o_point(3)).unwrap();
        for (s, t) in [(1, 0), (0, 1), (1, 1), (2, -3), (5, 7)] {
            let p = l.point_at(&fe(s), &fe(t)).unwrap();
            assert!(membership(&p, &forms));
        }
    }

    #[test]
    fn form_serialization_round_trip() {
        let f = HomogeneousForm::power_sum(5, 3);
        let s = serde_json::to_string(&f).unwrap();
        let back: HomogeneousForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
