//! Picard lattices of the surfaces in the link: the cubic reconstructed from
//! its 27 lines, its contractions, and blow-ups of P¹×P¹.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::census::{e_lines, general_position_on_quadric, l_lines, LineConfiguration, Surface};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Permutation};
use crate::linalg::{int_vector_strings, ivec, orthogonal_complement, IntLattice, IntMatrix, IntVector};
use crate::projgeo::{line_through, ProjPoint};

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn add(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(k: i64, a: &[BigInt]) -> IntVector {
    a.iter().map(|x| x * k).collect()
}

fn strings(v: &[BigInt]) -> Vec<String> {
    int_vector_strings(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedClass {
    pub label: String,
    #[serde(serialize_with = "ser_vec")]
    pub class: IntVector,
}

fn ser_vec<S: Serializer>(v: &IntVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    strings(v).serialize(s)
}

/// A Picard lattice with its anticanonical class, marked (−1)-classes and the
/// action matrix of every group element.
#[derive(Clone, Debug)]
pub struct PicardLattice {
    pub name: String,
    pub lattice: IntLattice,
    pub anticanonical: IntVector,
    pub marked: Vec<MarkedClass>,
    pub group: FiniteGroup,
    actions: BTreeMap<Permutation, IntMatrix>,
}

impl PicardLattice {
    /// Validates isometry, invariance of −K and the marked classes.
    pub fn new(
        name: &str,
        lattice: IntLattice,
        anticanonical: IntVector,
        marked: Vec<MarkedClass>,
        group: FiniteGroup,
        actions: BTreeMap<Permutation, IntMatrix>,
    ) -> Result<Self> {
        let l = PicardLattice {
            name: name.to_string(),
            lattice,
            anticanonical,
            marked,
            group,
            actions,
        };
        l.check_invariants()?;
        Ok(l)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let n = self.rank();
        if self.anticanonical.len() != n {
            return Err(Error::DimensionMismatch("anticanonical class".into()));
        }
        for x in self.group.elements() {
            let m = self
                .actions
                .get(x)
                .ok_or_else(|| Error::Invariant(format!("no action matrix for {x}")))?;
            if m.transpose().mul(&self.lattice.gram).mul(m) != self.lattice.gram {
                return Err(Error::Invariant(format!("{x} is not an isometry of {}", self.name)));
            }
            if m.mul_vec(&self.anticanonical) != self.anticanonical {
                return Err(Error::Invariant(format!("{x} moves -K on {}", self.name)));
            }
        }
        for c in &self.marked {
            if self.square(&c.class) != big(-1) || self.pair(&c.class, &self.anticanonical) != big(1) {
                return Err(Error::Invariant(format!("{} is not a (-1)-class", c.label)));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn degree(&self) -> BigInt {
        self.square(&self.anticanonical)
    }

    pub fn pair(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        self.lattice.pair(a, b)
    }

    pub fn square(&self, a: &[BigInt]) -> BigInt {
        self.lattice.square(a)
    }

    pub fn action(&self, p: &Permutation) -> &IntMatrix {
        &self.actions[p]
    }

    pub fn class(&self, label: &str) -> Option<&IntVector> {
        self.marked.iter().find(|c| c.label == label).map(|c| &c.class)
    }

    pub fn basis_vector(&self, label: &str) -> Option<IntVector> {
        self.lattice.label_index(label).map(|k| self.lattice.basis_vector(k))
    }

    /// Orbit of a class under the group, sorted.
    pub fn orbit(&self, v: &[BigInt]) -> Vec<IntVector> {
        let set: BTreeSet<IntVector> = self
            .group
            .elements()
            .iter()
            .map(|x| self.action(x).mul_vec(v))
            .collect();
        set.into_iter().collect()
    }
}

#[derive(Serialize)]
struct PicardRepr<'a> {
    name: &'a str,
    lattice: &'a IntLattice,
    anticanonical: Vec<String>,
    degree: String,
    marked: &'a [MarkedClass],
    generator_actions: Vec<(String, Vec<Vec<String>>)>,
}

impl Serialize for PicardLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PicardRepr {
            name: &self.name,
            lattice: &self.lattice,
            anticanonical: strings(&self.anticanonical),
            degree: self.degree().to_string(),
            marked: &self.marked,
            generator_actions: self
                .group
                .generators()
                .iter()
                .map(|g| (g.to_string(), self.action(g).to_strings()))
                .collect(),
        }
        .serialize(s)
    }
}

/// Dimension of the common fixed space of the action.
pub fn invariant_rank(l: &PicardLattice) -> usize {
    let n = l.rank();
    let gens = l.group.generators();
    if gens.is_empty() {
        return n;
    }
    let mut stacked = l.action(&gens[0]).sub(&IntMatrix::identity(n));
    for g in &gens[1..] {
        stacked = stacked.vstack(&l.action(g).sub(&IntMatrix::identity(n)));
    }
    n - stacked.rank()
}

/// All sets of six pairwise disjoint lines, as sorted index lists in
/// lexicographic order.
pub fn sixers(cfg: &LineConfiguration) -> Vec<[usize; 6]> {
    fn extend(cfg: &LineConfiguration, chosen: &mut Vec<usize>, out: &mut Vec<[usize; 6]>) {
        if chosen.len() == 6 {
            out.push(chosen.as_slice().try_into().expect("six"));
            return;
        }
        let start = chosen.last().map_or(0, |&k| k + 1);
        for k in start..cfg.len() {
            if chosen.iter().all(|&c| !cfg.meets(c, k)) {
                chosen.push(k);
                extend(cfg, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(cfg, &mut Vec::new(), &mut out);
    out
}

/// Labels E1, E2, L1…L5 on the named lines, `line-k` elsewhere.
pub fn line_labels(cfg: &LineConfiguration) -> Vec<String> {
    let mut labels: Vec<String> = (0..cfg.len()).map(|k| format!("line-{k}")).collect();
    for (k, l) in e_lines().iter().enumerate() {
        if let Some(i) = cfg.index_of(l) {
            labels[i] = format!("E{}", k + 1);
        }
    }
    for (k, l) in l_lines().iter().enumerate() {
        if let Some(i) = cfg.index_of(l) {
            labels[i] = format!("L{}", k + 1);
        }
    }
    labels
}

pub fn reconstruct_picard(cfg: &LineConfiguration, g: &FiniteGroup) -> Result<PicardLattice> {
    let six = *sixers(cfg).first().ok_or(Error::NoSixer)?;
    reconstruct_picard_with_sixer(cfg, g, &six)
}

/// The rank-7 lattice in the basis h, e₁…e₆ of the given sixer.
pub fn reconstruct_picard_with_sixer(
    cfg: &LineConfiguration,
    g: &FiniteGroup,
    six: &[usize; 6],
) -> Result<PicardLattice> {
    if cfg.len() != 27 {
        return Err(Error::EnumerationIncomplete(cfg.len()));
    }
    for (a, &x) in six.iter().enumerate() {
        if six[a + 1..].iter().any(|&y| cfg.meets(x, y)) {
            return Err(Error::NoSixer);
        }
    }
    let mut classes: Vec<IntVector> = Vec::with_capacity(27);
    for k in 0..27 {
        let mut c = vec![BigInt::zero(); 7];
        if let Some(i) = six.iter().position(|&s| s == k) {
            c[i + 1] = big(1);
        } else {
            let hits: Vec<usize> = (0..6).filter(|&i| cfg.meets(k, six[i])).collect();
            match hits.len() {
                2 => {
                    c[0] = big(1);
                    for i in hits {
                        c[i + 1] = big(-1);
                    }
                }
                5 => {
                    c[0] = big(2);
                    for i in hits {
                        c[i + 1] = big(-1);
                    }
                }
                n => {
                    return Err(Error::InconsistentIncidence(format!(
                        "line {k} meets {n} lines of the sixer"
                    )))
                }
            }
        }
        classes.push(c);
    }
    let gram = IntMatrix::diagonal(&[1, -1, -1, -1, -1, -1, -1]);
    let labels = ["h", "e1", "e2", "e3", "e4", "e5", "e6"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let lattice = IntLattice::new(gram, labels)?;
    for a in 0..27 {
        for b in 0..27 {
            let expected = if a == b {
                big(-1)
            } else {
                big(cfg.incidence[a][b] as i64)
            };
            if lattice.pair(&classes[a], &classes[b]) != expected {
                return Err(Error::InconsistentIncidence(format!("lines {a} and {b}")));
            }
        }
    }
    // e₁…e₆ together with h − e₁ − e₂ form a Z-basis
    let c12 = (0..27)
        .find(|&k| classes[k] == ivec(&[1, -1, -1, 0, 0, 0, 0]))
        .ok_or_else(|| Error::InconsistentIncidence("no line of class h-e1-e2".into()))?;
    let basis_lines: Vec<usize> = six.iter().copied().chain([c12]).collect();
    let b = IntMatrix::from_columns(&basis_lines.iter().map(|&k| classes[k].clone()).collect::<Vec<_>>(), 7);
    let b_inv = b.integer_inverse()?;
    let mut actions = BTreeMap::new();
    for x in g.elements() {
        let perm = cfg.line_permutation(x)?;
        let bp = IntMatrix::from_columns(
            &basis_lines
                .iter()
                .map(|&k| classes[perm[k]].clone())
                .collect::<Vec<_>>(),
            7,
        );
        let m = bp.mul(&b_inv);
        for k in 0..27 {
            if m.mul_vec(&classes[k]) != classes[perm[k]] {
                return Err(Error::InconsistentIncidence(format!("{x} is not linear on line {k}")));
            }
        }
        actions.insert(*x, m);
    }
    let marked = line_labels(cfg)
        .into_iter()
        .zip(classes)
        .map(|(label, class)| MarkedClass { label, class })
        .collect();
    PicardLattice::new(
        "cubic",
        lattice,
        ivec(&[3, -1, -1, -1, -1, -1, -1]),
        marked,
        g.clone(),
        actions,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MorphismKind {
    Pullback,
    Pushforward,
    ContractionComplement,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeMorphism {
    pub kind: MorphismKind,
    pub source: String,
    pub target: String,
    pub matrix: IntMatrix,
}

impl LatticeMorphism {
    pub fn apply(&self, v: &[BigInt]) -> IntVector {
        self.matrix.mul_vec(v)
    }

    /// M_source·J = J·M_target for every group element.
    pub fn is_equivariant(&self, source: &PicardLattice, target: &PicardLattice) -> bool {
        source
            .group
            .elements()
            .iter()
            .all(|x| source.action(x).mul(&self.matrix) == self.matrix.mul(target.action(x)))
    }
}

/// A contraction: the target lattice is the orthogonal complement of the
/// contracted classes and `pullback` is its embedding into the source.
#[derive(Clone, Debug, Serialize)]
pub struct Contraction {
    pub family: Vec<String>,
    #[serde(serialize_with = "ser_vecs")]
    pub family_classes: Vec<IntVector>,
    pub target: PicardLattice,
    pub pullback: LatticeMorphism,
}

fn ser_vecs<S: Serializer>(v: &[IntVector], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|x| strings(x)).collect::<Vec<_>>().serialize(s)
}

impl Contraction {
    /// Target coordinates of v + Σ (v·c)c, the projection away from the
    /// contracted classes.
    pub fn pushforward(&self, source: &PicardLattice, v: &[BigInt]) -> Result<IntVector> {
        let mut w = v.to_vec();
        for c in &self.family_classes {
            w = add(&w, &scale(source.pair(v, c).to_i64().expect("small"), c));
        }
        self.pullback
            .matrix
            .solve_integer(&w)
            .ok_or_else(|| Error::Invariant("projection is not in the complement".into()))
    }

    /// Replaces the target basis by the columns of `t` (target coordinates).
    pub fn rebase(&self, t: &IntMatrix, labels: Vec<String>) -> Result<Contraction> {
        let t_inv = t.integer_inverse()?;
        let tgt = &self.target;
        let lattice = IntLattice::new(t.transpose().mul(&tgt.lattice.gram).mul(t), labels)?;
        let actions = tgt
            .group
            .elements()
            .iter()
            .map(|x| (*x, t_inv.mul(tgt.action(x)).mul(t)))
            .collect();
        let marked = tgt
            .marked
            .iter()
            .map(|c| MarkedClass {
                label: c.label.clone(),
                class: t_inv.mul_vec(&c.class),
            })
            .collect();
        let target = PicardLattice::new(
            &tgt.name,
            lattice,
            t_inv.mul_vec(&tgt.anticanonical),
            marked,
            tgt.group.clone(),
            actions,
        )?;
        Ok(Contraction {
            family: self.family.clone(),
            family_classes: self.family_classes.clone(),
            target,
            pullback: LatticeMorphism {
                matrix: self.pullback.matrix.mul(t),
                ..self.pullback.clone()
            },
        })
    }
}

/// Contracts a group-stable family of disjoint (−1)-classes.
pub fn contract(l: &PicardLattice, family: &[&str], target_name: &str) -> Result<Contraction> {
    let classes: Vec<IntVector> = family
        .iter()
        .map(|lab| {
            l.class(lab)
                .cloned()
                .ok_or_else(|| Error::NotContractible(format!("{lab} is not a marked class")))
        })
        .collect::<Result<_>>()?;
    for (a, ca) in classes.iter().enumerate() {
        if l.square(ca) != big(-1) {
            return Err(Error::NotContractible(format!(
                "{} has square {}",
                family[a],
                l.square(ca)
            )));
        }
        for (b, cb) in classes.iter().enumerate().skip(a + 1) {
            if !l.pair(ca, cb).is_zero() {
                return Err(Error::NotContractible(format!(
                    "{}·{} = {}",
                    family[a],
                    family[b],
                    l.pair(ca, cb)
                )));
            }
        }
    }
    let set: BTreeSet<&IntVector> = classes.iter().collect();
    for x in l.group.elements() {
        for (a, c) in classes.iter().enumerate() {
            if !set.contains(&l.action(x).mul_vec(c)) {
                return Err(Error::NotContractible(format!(
                    "{x} moves {} out of the family",
                    family[a]
                )));
            }
        }
    }
    let comp = orthogonal_complement(&l.lattice, &classes)?;
    let emb = comp.embedding;
    let solve = |v: &[BigInt]| {
        emb.solve_integer(v)
            .ok_or_else(|| Error::Invariant("vector not in the complement".into()))
    };
    let mut antican = l.anticanonical.clone();
    for c in &classes {
        antican = add(&antican, c);
    }
    let antican = solve(&antican)?;
    let mut actions = BTreeMap::new();
    for x in l.group.elements() {
        let cols = emb
            .columns()
            .iter()
            .map(|col| solve(&l.action(x).mul_vec(col)))
            .collect::<Result<Vec<_>>>()?;
        actions.insert(*x, IntMatrix::from_columns(&cols, emb.cols()));
    }
    let marked = l
        .marked
        .iter()
        .filter(|m| classes.iter().all(|c| l.pair(&m.class, c).is_zero()))
        .map(|m| {
            Ok(MarkedClass {
                label: m.label.clone(),
                class: solve(&m.class)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let target = PicardLattice::new(target_name, comp.lattice, antican, marked, l.group.clone(), actions)?;
    let expected = l.degree() + BigInt::from(classes.len());
    if target.degree() != expected {
        return Err(Error::Invariant(format!(
            "degree {} after contraction, expected {expected}",
            target.degree()
        )));
    }
    Ok(Contraction {
        family: family.iter().map(|s| s.to_string()).collect(),
        family_classes: classes,
        pullback: LatticeMorphism {
            kind: MorphismKind::Pullback,
            source: target.name.clone(),
            target: l.name.clone(),
            matrix: emb,
        },
        target,
    })
}

/// The two primitive isotropic classes f with f·(−K) > 0 of a rank-2
/// lattice with even unimodular indefinite form.
pub fn isotropic_classes(l: &PicardLattice) -> Result<[IntVector; 2]> {
    if l.rank() != 2 {
        return Err(Error::DimensionMismatch(format!("rank {} is not 2", l.rank())));
    }
    let g = &l.lattice.gram;
    let (a, b, c) = (g.get(0, 0).clone(), g.get(0, 1).clone(), g.get(1, 1).clone());
    let disc = &b * &b - &a * &c;
    if disc.is_negative() || disc.is_zero() {
        return Err(Error::Invariant("form is definite or degenerate".into()));
    }
    let s = disc.sqrt();
    if &s * &s != disc {
        return Err(Error::Invariant("form is not split".into()));
    }
    // q(x, y) = a x² + 2b xy + c y²
    let mut dirs: Vec<IntVector> = if a.is_zero() {
        vec![vec![big(1), big(0)], vec![c.clone(), -big(2) * &b]]
    } else {
        vec![vec![-&b + &s, a.clone()], vec![-&b - &s, a.clone()]]
    };
    for d in dirs.iter_mut() {
        let gcd = d[0].gcd(&d[1]);
        *d = d.iter().map(|x| x / &gcd).collect();
        if l.pair(d, &l.anticanonical).is_negative() {
            *d = scale(-1, d);
        }
        if !l.square(d).is_zero() {
            return Err(Error::Invariant("isotropic search failed".into()));
        }
    }
    Ok([dirs[0].clone(), dirs[1].clone()])
}

/// The F-contraction rewritten in the ruling basis f₁, f₂, where f₁ is the
/// ruling with E₁·σ*f₁ = 1.
#[derive(Clone, Debug, Serialize)]
pub struct RulingBasis {
    pub contraction: Contraction,
    pub labeling: String,
}

pub fn ruling_basis(cubic: &PicardLattice, f: &Contraction, reference: &str) -> Result<RulingBasis> {
    let [u, v] = isotropic_classes(&f.target)?;
    let e = cubic
        .class(reference)
        .ok_or_else(|| Error::Invariant(format!("no class {reference}")))?;
    let deg = |w: &IntVector| cubic.pair(e, &f.pullback.apply(w));
    let (f1, f2) = match (deg(&u).to_i64(), deg(&v).to_i64()) {
        (Some(1), Some(2)) => (u, v),
        (Some(2), Some(1)) => (v, u),
        other => {
            return Err(Error::Invariant(format!("{reference} has ruling degrees {other:?}")));
        }
    };
    let t = IntMatrix::from_columns(&[f1, f2], 2);
    let contraction = f.rebase(&t, vec!["f1".into(), "f2".into()])?;
    let tgt = &contraction.target;
    let hyperbolic = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
    if tgt.lattice.gram != hyperbolic || tgt.anticanonical != ivec(&[2, 2]) {
        return Err(Error::Invariant(
            "ruling basis is not hyperbolic with -K = 2f1 + 2f2".into(),
        ));
    }
    Ok(RulingBasis {
        contraction,
        labeling: format!("f1 is the ruling with {reference}·σ*f1 = 1; swapping f1, f2 exchanges the bidegrees"),
    })
}

impl RulingBasis {
    /// Whether x exchanges the two rulings.
    pub fn swaps(&self, x: &Permutation) -> Result<bool> {
        let m = self.contraction.target.action(x);
        if *m == IntMatrix::identity(2) {
            Ok(false)
        } else if *m == IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]) {
            Ok(true)
        } else {
            Err(Error::Invariant(format!(
                "{x} acts on the rulings by {:?}",
                m.to_strings()
            )))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCertificate {
    pub pi_star_anticanonical: Vec<String>,
    pub sigma_star_h: Vec<String>,
    pub sum_f: Vec<String>,
    /// σ*(H) − (2π*(−K) − 3(E₁+E₂)), zero when the relation holds.
    pub first_difference: Vec<String>,
    pub second_difference: Vec<String>,
    pub e_bidegrees: Vec<[i64; 2]>,
    pub f_anticanonical_degrees: Vec<i64>,
    pub labeling: String,
}

/// σ*(H) = 2π*(−K_{S₅}) − 3(E₁+E₂) and ΣFᵢ = 3π*(−K_{S₅}) − 5(E₁+E₂), with
/// Fᵢ = Lᵢ and H = f₁ + f₂.
pub fn divisor_relation_check(
    cubic: &PicardLattice,
    e: &Contraction,
    rulings: &RulingBasis,
) -> Result<RelationCertificate> {
    let get = |lab: &str| {
        cubic
            .class(lab)
            .cloned()
            .ok_or_else(|| Error::Invariant(format!("no class {lab}")))
    };
    let e_sum = add(&get("E1")?, &get("E2")?);
    let pi_k = add(&cubic.anticanonical, &e_sum);
    if e.pullback.apply(&e.target.anticanonical) != pi_k {
        return Err(Error::RelationFailed {
            name: "pi*(-K) = -K + E1 + E2".into(),
            difference: strings(&sub(&e.pullback.apply(&e.target.anticanonical), &pi_k)),
        });
    }
    let f = &rulings.contraction;
    let sigma_h = f.pullback.apply(&ivec(&[1, 1]));
    let first = sub(&sigma_h, &sub(&scale(2, &pi_k), &scale(3, &e_sum)));
    let mut sum_f = vec![BigInt::zero(); cubic.rank()];
    let mut f_degrees = Vec::new();
    for k in 1..=5 {
        let c = get(&format!("L{k}"))?;
        f_degrees.push(cubic.pair(&c, &pi_k).to_i64().expect("small"));
        sum_f = add(&sum_f, &c);
    }
    let second = sub(&sum_f, &sub(&scale(3, &pi_k), &scale(5, &e_sum)));
    for (name, diff) in [("sigma*H", &first), ("sum F", &second)] {
        if diff.iter().any(|x| !x.is_zero()) {
            return Err(Error::RelationFailed {
                name: name.into(),
                difference: strings(diff),
            });
        }
    }
    let mut e_bidegrees = Vec::new();
    for lab in ["E1", "E2"] {
        let p = f.pushforward(cubic, &get(lab)?)?;
        e_bidegrees.push([p[0].to_i64().expect("small"), p[1].to_i64().expect("small")]);
    }
    Ok(RelationCertificate {
        pi_star_anticanonical: strings(&pi_k),
        sigma_star_h: strings(&sigma_h),
        sum_f: strings(&sum_f),
        first_difference: strings(&first),
        second_difference: strings(&second),
        e_bidegrees,
        f_anticanonical_degrees: f_degrees,
        labeling: rulings.labeling.clone(),
    })
}

/// Integer vectors in the box [−bound, bound]ⁿ with the given square and
/// pairing with −K. Small-rank exhaustive search in machine integers.
pub fn classes_with(l: &PicardLattice, square: i64, degree: i64, bound: i64) -> Vec<IntVector> {
    let n = l.rank();
    let gram: Vec<Vec<i64>> = l.lattice.gram.to_i64_rows().expect("small gram");
    let k: Vec<i64> = l.anticanonical.iter().map(|x| x.to_i64().expect("small")).collect();
    let kg: Vec<i64> = (0..n).map(|j| (0..n).map(|i| k[i] * gram[i][j]).sum()).collect();
    let mut out = Vec::new();
    let mut x = vec![-bound; n];
    loop {
        let d: i64 = x.iter().zip(&kg).map(|(a, b)| a * b).sum();
        if d == degree {
            let mut s = 0;
            for i in 0..n {
                for j in 0..n {
                    s += x[i] * gram[i][j] * x[j];
                }
            }
            if s == square {
                out.push(ivec(&x));
            }
        }
        let mut i = 0;
        while i < n && x[i] == bound {
            x[i] = -bound;
            i += 1;
        }
        if i == n {
            break;
        }
        x[i] += 1;
    }
    out.sort();
    out
}

/// Permutation of point indices induced by x.
pub fn point_permutation(x: &Permutation, points: &[ProjPoint]) -> Result<Vec<usize>> {
    points
        .iter()
        .map(|p| {
            let q = x.act_on_point(p);
            points
                .iter()
                .position(|r| *r == q)
                .ok_or_else(|| Error::ActionNotClosed(x.to_string()))
        })
        .collect()
}

/// Basis f₁, f₂, then one exceptional class per blown-up point of each
/// listed point set; the group swaps f₁, f₂ when `swaps` says so and permutes
/// the exceptional classes like the points.
pub fn blowup_lattice(
    name: &str,
    orbits: &[(&str, &[ProjPoint])],
    g: &FiniteGroup,
    swaps: &dyn Fn(&Permutation) -> Result<bool>,
) -> Result<PicardLattice> {
    let total: usize = orbits.iter().map(|(_, p)| p.len()).sum();
    let n = 2 + total;
    let mut gram = IntMatrix::zeros(n, n);
    gram.set(0, 1, big(1));
    gram.set(1, 0, big(1));
    let mut labels = vec!["f1".to_string(), "f2".to_string()];
    let mut antican = vec![big(2), big(2)];
    for (prefix, pts) in orbits {
        for k in 0..pts.len() {
            labels.push(format!("{prefix}{}", k + 1));
            antican.push(big(-1));
        }
    }
    for k in 2..n {
        gram.set(k, k, big(-1));
    }
    let mut actions = BTreeMap::new();
    for x in g.elements() {
        let mut m = IntMatrix::zeros(n, n);
        if swaps(x)? {
            m.set(1, 0, big(1));
            m.set(0, 1, big(1));
        } else {
            m.set(0, 0, big(1));
            m.set(1, 1, big(1));
        }
        let mut offset = 2;
        for (_, pts) in orbits {
            for (k, j) in point_permutation(x, pts)?.into_iter().enumerate() {
                m.set(offset + j, offset + k, big(1));
            }
            offset += pts.len();
        }
        actions.insert(*x, m);
    }
    PicardLattice::new(
        name,
        IntLattice::new(gram, labels)?,
        antican,
        Vec::new(),
        g.clone(),
        actions,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RulingCertificate {
    /// Proper transforms f − gₐ − g_b of the rulings through two blown-up points.
    pub ruling_classes: BTreeMap<String, Vec<String>>,
    pub squares: Vec<i64>,
    pub anticanonical_degrees: Vec<i64>,
    pub general_position_pairs: usize,
    pub exceptional_count_k1: usize,
    pub root_count_k1: usize,
}

impl RulingCertificate {
    pub fn obstructed(&self) -> bool {
        !self.squares.is_empty()
            && self.squares.iter().all(|&s| s == -2)
            && self.anticanonical_degrees.iter().all(|&d| d == 0)
    }
}

/// Blowing up the length-4 orbit puts (−2)-classes on the rulings through
/// pairs of its points; blowing up a length-5 orbit in general position
/// gives a cubic lattice.
pub fn ruling_blowup_check(
    q: &Surface,
    k: &[ProjPoint],
    k1: &[ProjPoint],
    g: &FiniteGroup,
    rulings: &RulingBasis,
) -> Result<RulingCertificate> {
    let gp = general_position_on_quadric(k, q)?;
    let lines: Vec<_> = gp
        .pairs_on_surface
        .iter()
        .map(|[a, b]| line_through(&k[*a], &k[*b]))
        .collect::<Result<_>>()?;
    // lines of one ruling are pairwise skew; f₁ is the ruling of the first pair
    let family: Vec<usize> = lines
        .iter()
        .map(|l| usize::from(l != &lines[0] && l.meets(&lines[0])))
        .collect();
    let lat = blowup_lattice("blowup-K", &[("g", k)], &FiniteGroup::closure(&[]), &|_| Ok(false))?;
    let mut ruling_classes = BTreeMap::new();
    let mut squares = Vec::new();
    let mut degrees = Vec::new();
    for (&[a, b], &r) in gp.pairs_on_surface.iter().zip(&family) {
        let mut c = vec![BigInt::zero(); lat.rank()];
        c[r] = big(1);
        c[2 + a] = big(-1);
        c[2 + b] = big(-1);
        squares.push(lat.square(&c).to_i64().expect("small"));
        degrees.push(lat.pair(&c, &lat.anticanonical).to_i64().expect("small"));
        ruling_classes.insert(format!("f{}-g{}-g{}", r + 1, a + 1, b + 1), strings(&c));
    }
    let gp1 = general_position_on_quadric(k1, q)?;
    let lat1 = blowup_lattice("blowup-K1", &[("g", k1)], g, &|x| rulings.swaps(x))?;
    Ok(RulingCertificate {
        ruling_classes,
        squares,
        anticanonical_degrees: degrees,
        general_position_pairs: gp1.pairs_on_surface.len(),
        exceptional_count_k1: classes_with(&lat1, -1, 1, 3).len(),
        root_count_k1: classes_with(&lat1, -2, 0, 3).len(),
    })
}

/// The unique orbit of size 2 among the (−1)-classes.
pub fn e_classes(l: &PicardLattice) -> Result<[IntVector; 2]> {
    let mut seen = BTreeSet::new();
    let mut pairs = Vec::new();
    for c in classes_with(l, -1, 1, 3) {
        if seen.contains(&c) {
            continue;
        }
        let orbit = l.orbit(&c);
        seen.extend(orbit.iter().cloned());
        if orbit.len() == 2 {
            pairs.push([orbit[0].clone(), orbit[1].clone()]);
        }
    }
    match pairs.len() {
        1 => Ok(pairs.pop().expect("one")),
        n => Err(Error::Invariant(format!("{n} orbits of size 2 among (-1)-classes"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfMapAssignment {
    pub left: String,
    pub right: String,
    pub left_pullback: Vec<String>,
    pub right_pullback: Vec<String>,
    pub pairing: i64,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfMapCertificate {
    pub gram_rank: usize,
    pub assignments: Vec<SelfMapAssignment>,
    pub identity_pairing: i64,
    pub identity_degree: i64,
    pub equivariant: bool,
    pub not_biregular: bool,
}

/// Degree of the composite S₅ ⇢ P¹×P¹ ⇢ S₅ on the common resolution that
/// blows up both length-5 orbits.
pub fn selfmap_degree(
    k1: &[ProjPoint],
    k2: &[ProjPoint],
    g: &FiniteGroup,
    rulings: &RulingBasis,
) -> Result<SelfMapCertificate> {
    if k1.iter().any(|p| k2.contains(p)) {
        return Err(Error::OrbitsNotDisjoint);
    }
    let swaps = |x: &Permutation| rulings.swaps(x);
    let common = blowup_lattice("common", &[("g", k1), ("h", k2)], g, &swaps)?;
    let sides = [("K1", k1, 2usize), ("K2", k2, 7usize)];
    let mut pullbacks = Vec::new();
    let mut equivariant = true;
    for (name, pts, offset) in sides {
        let x = blowup_lattice(name, &[("g", pts)], g, &swaps)?;
        let [e1, e2] = e_classes(&x)?;
        let pi_k = add(&add(&x.anticanonical, &e1), &e2);
        // f₁, f₂ ↦ f₁, f₂ and gₖ ↦ the k-th exceptional class of this side
        let mut j = IntMatrix::zeros(common.rank(), x.rank());
        j.set(0, 0, big(1));
        j.set(1, 1, big(1));
        for k in 0..pts.len() {
            j.set(offset + k, 2 + k, big(1));
        }
        let emb = LatticeMorphism {
            kind: MorphismKind::Pullback,
            source: name.into(),
            target: "common".into(),
            matrix: j,
        };
        equivariant &= emb.is_equivariant(&common, &x);
        let v = emb.apply(&pi_k);
        equivariant &= common.orbit(&v).len() == 1;
        pullbacks.push((name, v));
    }
    let mut assignments = Vec::new();
    for (l, r) in [(0, 1), (1, 0)] {
        let pairing = common.pair(&pullbacks[r].1, &pullbacks[l].1).to_i64().expect("small");
        assignments.push(SelfMapAssignment {
            left: pullbacks[l].0.into(),
            right: pullbacks[r].0.into(),
            left_pullback: strings(&pullbacks[l].1),
            right_pullback: strings(&pullbacks[r].1),
            pairing,
            degree: pairing / 5,
        });
    }
    let identity_pairing = common.square(&pullbacks[0].1).to_i64().expect("small");
    Ok(SelfMapCertificate {
        gram_rank: common.rank(),
        not_biregular: assignments.iter().all(|a| a.degree > 1 && a.pairing % 5 == 0),
        assignments,
        identity_pairing,
        identity_degree: identity_pairing / 5,
        equivariant,
    })
}

/// Roots r² = −2, r·K = 0 of a lattice, by box search.
pub fn root_count(l: &PicardLattice, bound: i64) -> usize {
    classes_with(l, -2, 0, bound).len()
}

/// Whether the degree-d lattice has exactly `expected` (−1)-classes in the box.
pub fn exceptional_count(l: &PicardLattice, bound: i64) -> usize {
    classes_with(l, -1, 1, bound).len()
}

/// Helper for reports: the lattice with a permutation-independent summary.
pub fn summary(l: &PicardLattice) -> BTreeMap<&'static str, String> {
    BTreeMap::from([
        ("name", l.name.clone()),
        ("rank", l.rank().to_string()),
        ("degree", l.degree().to_string()),
        (
            "determinant",
            l.lattice.determinant().map(|d| d.to_string()).unwrap_or_default(),
        ),
        ("invariant_rank", invariant_rank(l).to_string()),
        ("marked", l.marked.len().to_string()),
    ])
}
