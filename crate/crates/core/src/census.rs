//! Orbits, lines and general-position facts on the Clebsch cubic and on the
//! quadric Σx = Σx² = 0, both inside the hyperplane Σx = 0 of P⁴.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::FieldElement;
use crate::error::{Error, Result};
use crate::groups::{c5, fixed_locus, orbit_and_stabilizer, FiniteGroup, Permutation};
use crate::linalg::{kernel_basis, MatrixK};
use crate::projgeo::{
    hyperplane_form, line_in_surface, line_through, membership, residual_line, HomogeneousForm, ProjLine, ProjPoint,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Surface {
    pub name: String,
    /// The hyperplane first, then the form of the surface inside it.
    pub forms: Vec<HomogeneousForm>,
}

impl Surface {
    pub fn new(name: &str, form: HomogeneousForm) -> Self {
        Surface {
            name: name.to_string(),
            forms: vec![hyperplane_form(5), form],
        }
    }

    /// Σx = Σx³ = 0.
    pub fn clebsch() -> Self {
        Self::new("clebsch", HomogeneousForm::power_sum(5, 3))
    }

    /// Σx = Σx² = 0.
    pub fn quadric() -> Self {
        Self::new("quadric", HomogeneousForm::power_sum(5, 2))
    }

    pub fn form(&self) -> &HomogeneousForm {
        &self.forms[1]
    }

    pub fn degree(&self) -> u32 {
        self.form().degree()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        membership(p, &self.forms)
    }

    pub fn contains_line(&self, l: &ProjLine) -> bool {
        self.forms.iter().all(|f| line_in_surface(l, f))
    }
}

fn fe(n: i64) -> FieldElement {
    FieldElement::from_integer(n)
}

fn point(coords: Vec<FieldElement>) -> ProjPoint {
    ProjPoint::new(coords).expect("nonzero point")
}

/// P_k = (1 : ζ₅ᵏ : ζ₅²ᵏ : ζ₅³ᵏ : ζ₅⁴ᵏ) for k = 1..4.
pub fn o_point(k: i64) -> ProjPoint {
    point((0..5).map(|j| FieldElement::zeta_pow(4 * j * k)).collect())
}

pub fn o_points() -> Vec<ProjPoint> {
    (1..=4).map(o_point).collect()
}

/// The five points obtained from R by the powers of (12345).
fn five_cycle_orbit(r: Vec<FieldElement>) -> Vec<ProjPoint> {
    let sigma = Permutation::parse("(12345)").expect("valid cycle");
    let mut out = Vec::new();
    let mut p = point(r);
    for _ in 0..5 {
        out.push(p.clone());
        p = sigma.act_on_point(&p);
    }
    out
}

/// V₁…V₅.
pub fn v_points() -> Vec<ProjPoint> {
    five_cycle_orbit(vec![fe(0), fe(-1), fe(1), fe(1), fe(-1)])
}

/// U₁…U₅.
pub fn u_points() -> Vec<ProjPoint> {
    let i = FieldElement::i();
    five_cycle_orbit(vec![fe(0), -&i, fe(-1), fe(1), i])
}

/// W₁…W₅.
pub fn w_points() -> Vec<ProjPoint> {
    let i = FieldElement::i();
    five_cycle_orbit(vec![fe(0), i.clone(), fe(-1), fe(1), -&i])
}

/// L₁…L₅ as pairs of index pairs {a,b},{c,d} with x_a+x_b = x_c+x_d = 0.
pub const L_LINES: [[[usize; 2]; 2]; 5] = [
    [[1, 4], [2, 3]],
    [[0, 2], [3, 4]],
    [[0, 4], [1, 3]],
    [[0, 1], [2, 4]],
    [[0, 3], [1, 2]],
];

pub fn coordinate_line(pairs: [[usize; 2]; 2]) -> ProjLine {
    let mut eqs = vec![vec![1i64; 5]];
    for [a, b] in pairs {
        let mut e = vec![0i64; 5];
        e[a] = 1;
        e[b] = 1;
        eqs.push(e);
    }
    ProjLine::from_int_equations(&eqs).expect("coordinate lines are lines")
}

pub fn l_lines() -> Vec<ProjLine> {
    L_LINES.iter().map(|p| coordinate_line(*p)).collect()
}

/// E₁ = P₁P₄ and E₂ = P₂P₃.
pub fn e_lines() -> Vec<ProjLine> {
    vec![
        line_through(&o_point(1), &o_point(4)).expect("distinct"),
        line_through(&o_point(2), &o_point(3)).expect("distinct"),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Orbit {
    pub points: Vec<ProjPoint>,
    pub stabilizer_order: usize,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// What a single subgroup contributed to a census.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusArtifact {
    pub subgroup_order: usize,
    pub generators: Vec<Permutation>,
    pub conjugates: usize,
    pub fixed_points: Vec<ProjPoint>,
    pub on_surface: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitCensus {
    pub surface: String,
    pub group_order: usize,
    pub bound: usize,
    pub orbits: BTreeMap<usize, Vec<Orbit>>,
    pub artifacts: Vec<CensusArtifact>,
}

impl OrbitCensus {
    pub fn orbits_of_length(&self, r: usize) -> &[Orbit] {
        self.orbits.get(&r).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn lengths(&self) -> BTreeMap<usize, usize> {
        self.orbits.iter().map(|(r, v)| (*r, v.len())).collect()
    }

    pub fn all_points(&self) -> BTreeSet<ProjPoint> {
        self.orbits
            .values()
            .flatten()
            .flat_map(|o| o.points.iter().cloned())
            .collect()
    }
}

/// All g-orbits of length below `bound` on s, via fixed loci of one subgroup
/// per conjugacy class of each relevant order.
pub fn orbit_census(s: &Surface, g: &FiniteGroup, bound: usize) -> Result<OrbitCensus> {
    if bound > g.order() {
        return Err(Error::Invariant(format!(
            "bound {bound} exceeds group order {}",
            g.order()
        )));
    }
    let mut work = Vec::new();
    for r in (1..bound).filter(|r| g.order().is_multiple_of(*r)) {
        for class in g.subgroups_of_order(g.order() / r) {
            work.push((r, class.representative().clone(), class.members.len()));
        }
    }
    let results: Vec<Result<(usize, CensusArtifact, Vec<Orbit>)>> = work
        .par_iter()
        .map(|(r, h, conjugates)| {
            let comps = fixed_locus(h, true)?;
            let mut artifact = CensusArtifact {
                subgroup_order: h.order(),
                generators: h.generators().to_vec(),
                conjugates: *conjugates,
                fixed_points: Vec::new(),
                on_surface: Vec::new(),
            };
            let mut orbits = Vec::new();
            for comp in comps {
                if comp.positive_dimensional {
                    return Err(Error::PositiveDimensionalFixedLocus(format!(
                        "subgroup of order {} generated by {:?}",
                        h.order(),
                        h.generators()
                    )));
                }
                let p = comp.point().expect("zero-dimensional");
                let on = s.contains(&p);
                artifact.fixed_points.push(p.clone());
                artifact.on_surface.push(on);
                if !on {
                    continue;
                }
                let (orbit, stab) = orbit_and_stabilizer(g, &p);
                if stab.order() == h.order() {
                    orbits.push(Orbit {
                        points: orbit.into_iter().collect(),
                        stabilizer_order: stab.order(),
                    });
                }
            }
            Ok((*r, artifact, orbits))
        })
        .collect();
    let mut census = OrbitCensus {
        surface: s.name.clone(),
        group_order: g.order(),
        bound,
        orbits: BTreeMap::new(),
        artifacts: Vec::new(),
    };
    for res in results {
        let (r, artifact, orbits) = res?;
        census.artifacts.push(artifact);
        let slot = census.orbits.entry(r).or_default();
        for o in orbits {
            if !slot.contains(&o) {
                slot.push(o);
            }
        }
    }
    for v in census.orbits.values_mut() {
        v.sort_by(|a, b| a.points.cmp(&b.points));
    }
    census.orbits.retain(|_, v| !v.is_empty());
    Ok(census)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineOrigin {
    Coordinate,
    PairLine,
    Residuation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineConfiguration {
    pub lines: Vec<ProjLine>,
    pub origins: Vec<LineOrigin>,
    /// 1 where two distinct lines meet; the diagonal is 0.
    pub incidence: Vec<Vec<u8>>,
}

impl LineConfiguration {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn index_of(&self, l: &ProjLine) -> Option<usize> {
        self.lines.iter().position(|m| m == l)
    }

    pub fn meets(&self, a: usize, b: usize) -> bool {
        self.incidence[a][b] == 1
    }

    /// The permutation of line indices induced by a coordinate permutation.
    pub fn line_permutation(&self, p: &Permutation) -> Result<Vec<usize>> {
        self.lines
            .iter()
            .map(|l| {
                self.index_of(&p.act_on_line(l))
                    .ok_or_else(|| Error::ActionNotClosed(p.to_string()))
            })
            .collect()
    }

    /// Orbits of g on line indices, each sorted, ordered by smallest member.
    pub fn line_orbits(&self, g: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
        let perms = g
            .elements()
            .iter()
            .map(|p| self.line_permutation(p))
            .collect::<Result<Vec<_>>>()?;
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let orbit: BTreeSet<usize> = perms.iter().map(|p| p[start]).collect();
            for &k in &orbit {
                seen[k] = true;
            }
            out.push(orbit.into_iter().collect());
        }
        Ok(out)
    }
}

/// The 27 lines of a smooth cubic in Σx = 0, by residuation from seed lines.
pub fn lines27(s: &Surface) -> Result<LineConfiguration> {
    if s.degree() != 3 {
        return Err(Error::UnsupportedShape(format!(
            "degree {} surface has no line census",
            s.degree()
        )));
    }
    let mut lines: Vec<ProjLine> = Vec::new();
    let mut origins = Vec::new();
    fn push(l: ProjLine, o: LineOrigin, lines: &mut Vec<ProjLine>, origins: &mut Vec<LineOrigin>) {
        if !lines.contains(&l) {
            lines.push(l);
            origins.push(o);
        }
    }
    for single in 0..5 {
        let rest: Vec<usize> = (0..5).filter(|&k| k != single).collect();
        for partner in 1..4 {
            let a = [rest[0], rest[partner]];
            let others: Vec<usize> = rest[1..].iter().copied().filter(|&k| k != rest[partner]).collect();
            let l = coordinate_line([a, [others[0], others[1]]]);
            if s.contains_line(&l) {
                push(l, LineOrigin::Coordinate, &mut lines, &mut origins);
            }
        }
    }
    let c5_points: Vec<ProjPoint> = fixed_locus(&c5(), true)?
        .iter()
        .filter_map(|c| c.point())
        .filter(|p| s.contains(p))
        .collect();
    for (k, p) in c5_points.iter().enumerate() {
        for q in &c5_points[k + 1..] {
            let l = line_through(p, q)?;
            if s.contains_line(&l) {
                push(l, LineOrigin::PairLine, &mut lines, &mut origins);
            }
        }
    }
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    loop {
        let n = lines.len();
        let mut fresh = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !done.insert((a, b)) || !lines[a].meets(&lines[b]) {
                    continue;
                }
                fresh.push(residual_line(s.form(), &lines[a], &lines[b])?);
            }
        }
        for l in fresh {
            push(l, LineOrigin::Residuation, &mut lines, &mut origins);
        }
        if lines.len() == n || lines.len() > 27 {
            break;
        }
    }
    if lines.len() != 27 {
        return Err(Error::EnumerationIncomplete(lines.len()));
    }
    let incidence = (0..27)
        .map(|a| (0..27).map(|b| u8::from(a != b && lines[a].meets(&lines[b]))).collect())
        .collect();
    Ok(LineConfiguration {
        lines,
        origins,
        incidence,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkewFamily {
    pub lines: Vec<usize>,
    pub orbit_sizes: Vec<usize>,
    pub maximal: bool,
}

/// Every nonempty g-stable union of line orbits whose lines are pairwise
/// disjoint.
pub fn invariant_skew_families(cfg: &LineConfiguration, g: &FiniteGroup) -> Result<Vec<SkewFamily>> {
    let orbits = cfg.line_orbits(g)?;
    let skew = |xs: &[usize], ys: &[usize]| xs.iter().all(|&a| ys.iter().all(|&b| a == b || !cfg.meets(a, b)));
    let good: Vec<usize> = (0..orbits.len()).filter(|&k| skew(&orbits[k], &orbits[k])).collect();
    let mut families: Vec<Vec<usize>> = Vec::new();
    for mask in 1u64..(1u64 << good.len()) {
        let chosen: Vec<usize> = (0..good.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| good[k])
            .collect();
        let ok = chosen
            .iter()
            .enumerate()
            .all(|(i, &a)| chosen[i + 1..].iter().all(|&b| skew(&orbits[a], &orbits[b])));
        if ok {
            families.push(chosen);
        }
    }
    let mut out: Vec<SkewFamily> = families
        .iter()
        .map(|f| {
            let maximal = !families
                .iter()
                .any(|other| other.len() > f.len() && f.iter().all(|x| other.contains(x)));
            let mut lines: Vec<usize> = f.iter().flat_map(|&k| orbits[k].iter().copied()).collect();
            lines.sort_unstable();
            SkewFamily {
                lines,
                orbit_sizes: f.iter().map(|&k| orbits[k].len()).collect(),
                maximal,
            }
        })
        .collect();
    out.sort_by(|a, b| (a.lines.len(), &a.lines).cmp(&(b.lines.len(), &b.lines)));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneralPosition {
    pub passed: bool,
    /// Index pairs whose joining line lies in the surface.
    pub pairs_on_surface: Vec<[usize; 2]>,
    /// Index quadruples spanning less than a P³.
    pub coplanar_quadruples: Vec<[usize; 4]>,
}

/// No two of the points on a line of q, no four of them in a plane.
pub fn general_position_on_quadric(points: &[ProjPoint], q: &Surface) -> Result<GeneralPosition> {
    let distinct: BTreeSet<&ProjPoint> = points.iter().collect();
    if distinct.len() != points.len() {
        return Err(Error::DuplicatePoints);
    }
    if let Some(p) = points.iter().find(|p| !q.contains(p)) {
        return Err(Error::InconsistentIncidence(format!("{p} is not on {}", q.name)));
    }
    let n = points.len();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if q.contains_line(&line_through(&points[a], &points[b])?) {
                pairs.push([a, b]);
            }
        }
    }
    let mut quads = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let rows = [a, b, c, d].iter().map(|&k| points[k].coords().to_vec()).collect();
                    if MatrixK::from_rows(rows).rank() < 4 {
                        quads.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    Ok(GeneralPosition {
        passed: pairs.is_empty() && quads.is_empty(),
        pairs_on_surface: pairs,
        coplanar_quadruples: quads,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessCertificate {
    pub surface: String,
    pub method: String,
    pub smooth: bool,
    pub patterns_checked: usize,
    /// Sign patterns ε with Σ εᵢ/√aᵢ = 0; each gives a singular point.
    pub singular_patterns: Vec<Vec<i8>>,
    pub restricted_determinant: Option<FieldElement>,
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// Smoothness of the surface inside Σx = 0, for quadrics and diagonal cubics.
pub fn smoothness_check(s: &Surface) -> Result<SmoothnessCertificate> {
    match s.degree() {
        2 => {
            let gram = s
                .form()
                .quadratic_gram()
                .ok_or_else(|| Error::UnsupportedShape("quadratic form without gram".into()))?;
            let basis = kernel_basis(&MatrixK::from_rows(vec![vec![fe(1); 5]]));
            let b = MatrixK::from_columns(&basis);
            let det = b.transpose().mul(&gram).mul(&b).determinant()?;
            Ok(SmoothnessCertificate {
                surface: s.name.clone(),
                method: "restricted-gram".into(),
                smooth: !det.is_zero(),
                patterns_checked: 0,
                singular_patterns: Vec::new(),
                restricted_determinant: Some(det),
            })
        }
        3 => {
            let diag = s
                .form()
                .diagonal_coefficients()
                .ok_or_else(|| Error::UnsupportedShape("cubic is not diagonal".into()))?;
            // singular points: 3aᵢxᵢ² = λ for all i, so xᵢ = εᵢ·c/√aᵢ
            let mut roots = Vec::new();
            for a in &diag {
                let q = a
                    .to_rational()
                    .filter(|q| !q.is_zero())
                    .ok_or_else(|| Error::UnsupportedShape("coefficients must be nonzero rationals".into()))?;
                let r = rational_sqrt(&(BigRational::one() / q))
                    .ok_or_else(|| Error::UnsupportedShape("1/a is not a rational square".into()))?;
                roots.push(r);
            }
            let n = roots.len();
            let mut singular = Vec::new();
            for mask in 0u32..(1 << n) {
                let signs: Vec<i8> = (0..n).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
                let sum: BigRational = roots
                    .iter()
                    .zip(&signs)
                    .map(|(r, &e)| r * BigRational::from_integer(BigInt::from(e)))
                    .sum();
                // Σx = 0 and f = c³·Σεᵢ/√aᵢ both reduce to this sum
                if sum.is_zero() {
                    singular.push(signs);
                }
            }
            Ok(SmoothnessCertificate {
                surface: s.name.clone(),
                method: "diagonal-sign-patterns".into(),
                smooth: singular.is_empty(),
                patterns_checked: 1 << n,
                singular_patterns: singular,
                restricted_determinant: None,
            })
        }
        d => Err(Error::UnsupportedShape(format!("degree {d}"))),
    }
}

/// Collapse of the length-4 orbit under the contraction of E₁, E₂.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DescentCertificate {
    pub e_orbit_size: usize,
    pub o_points_on_e: Vec<usize>,
    pub other_orbits_below_five: usize,
    /// Orbit lengths below 5 on the contracted surface.
    pub image_lengths: Vec<usize>,
}

impl DescentCertificate {
    pub fn unique_orbit_of_length_two(&self) -> bool {
        self.image_lengths == [2]
    }
}

pub fn descent_certificate(
    census: &OrbitCensus,
    cfg: &LineConfiguration,
    g: &FiniteGroup,
) -> Result<DescentCertificate> {
    let e = e_lines();
    let idx: Vec<usize> = e
        .iter()
        .map(|l| {
            cfg.index_of(l)
                .ok_or_else(|| Error::InconsistentIncidence("E-line not among the 27".into()))
        })
        .collect::<Result<_>>()?;
    let orbits = cfg.line_orbits(g)?;
    let e_orbit = orbits
        .iter()
        .find(|o| o.contains(&idx[0]))
        .expect("every line lies in an orbit");
    let short: Vec<&Orbit> = census.orbits.range(..5).flat_map(|(_, v)| v.iter()).collect();
    let mut on_e = vec![0; 2];
    let mut others = 0;
    let mut image_lengths = Vec::new();
    for o in &short {
        let counts: Vec<usize> = e
            .iter()
            .map(|l| o.points.iter().filter(|p| l.contains(p)).count())
            .collect();
        if counts.iter().sum::<usize>() == o.len() {
            for k in 0..2 {
                on_e[k] += counts[k];
            }
            image_lengths.push(counts.iter().filter(|&&c| c > 0).count());
        } else {
            others += 1;
            image_lengths.push(o.len());
        }
    }
    image_lengths.sort_unstable();
    Ok(DescentCertificate {
        e_orbit_size: if e_orbit.contains(&idx[1]) { e_orbit.len() } else { 0 },
        o_points_on_e: on_e,
        other_orbits_below_five: others,
        image_lengths,
    })
}
