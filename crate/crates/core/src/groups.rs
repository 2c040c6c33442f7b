//! Permutation groups on five letters acting on P⁴ by permuting coordinates.
//!
//! Index convention: the letter j ∈ {1,…,5} of cycle notation acts on the
//! coordinate x_{j−1}. A permutation σ sends the point x to y with
//! y_{σ(k)} = x_k, so its matrix P satisfies P·e_k = e_{σ(k)} and
//! σ ↦ P(σ) is a homomorphism.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclo::{FieldElement, RootOfUnity};
use crate::error::{Error, Result};
use crate::linalg::{eigenspaces_of_permutation, kernel_basis, MatrixK, VectorK};
use crate::projgeo::{ProjLine, ProjPoint};

pub const LETTERS: usize = 5;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: [u8; LETTERS],
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation {
            images: [0, 1, 2, 3, 4],
        }
    }

    /// From the images of the coordinate indices 0..5.
    pub fn from_images(images: [u8; LETTERS]) -> Result<Self> {
        let mut seen = [false; LETTERS];
        for &i in &images {
            if i as usize >= LETTERS || seen[i as usize] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation over the letters 1..5, e.g. "(12345)" or
    /// "(25)(34)". Cycles are composed right to left.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "()" || s == "id" {
            return Ok(Self::identity());
        }
        let mut acc = Self::identity();
        let mut rest = s;
        let mut cycles = Vec::new();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::InvalidPermutation(s.to_string()))?;
            cycles.push(body.0);
            rest = body.1.trim_start();
        }
        for cyc in cycles.iter().rev() {
            let letters: Vec<u8> = cyc
                .chars()
                .filter(|c| !c.is_whitespace() && *c != ',')
                .map(|c| match c.to_digit(10) {
                    Some(d @ 1..=5) => Ok(d as u8 - 1),
                    _ => Err(Error::InvalidPermutation(s.to_string())),
                })
                .collect::<Result<_>>()?;
            let distinct: BTreeSet<u8> = letters.iter().copied().collect();
            if distinct.len() != letters.len() {
                return Err(Error::InvalidPermutation(s.to_string()));
            }
            let mut images = [0, 1, 2, 3, 4];
            for (k, &l) in letters.iter().enumerate() {
                images[l as usize] = letters[(k + 1) % letters.len()];
            }
            acc = Permutation { images }.compose(&acc);
        }
        Ok(acc)
    }

    pub fn apply_index(&self, k: usize) -> usize {
        self.images[k] as usize
    }

    pub fn images(&self) -> [u8; LETTERS] {
        self.images
    }

    /// self ∘ other: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut images = [0; LETTERS];
        for (k, img) in images.iter_mut().enumerate() {
            *img = self.images[other.images[k] as usize];
        }
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = [0; LETTERS];
        for k in 0..LETTERS {
            images[self.images[k] as usize] = k as u8;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn order(&self) -> usize {
        let mut p = *self;
        let mut n = 1;
        while !p.is_identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; LETTERS];
        let mut out = Vec::new();
        for start in 0..LETTERS {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut k = self.apply_index(start);
            while k != start {
                seen[k] = true;
                cyc.push(k);
                k = self.apply_index(k);
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths, including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    /// The coordinate permutation matrix, P·e_k = e_{σ(k)}.
    pub fn matrix(&self) -> MatrixK {
        let mut m = MatrixK::zeros(LETTERS, LETTERS);
        for k in 0..LETTERS {
            m.set(self.apply_index(k), k, FieldElement::one());
        }
        m
    }

    pub fn act_on_vector<T: Clone>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), LETTERS, "vector length");
        let mut y = x.to_vec();
        for k in 0..LETTERS {
            y[self.apply_index(k)] = x[k].clone();
        }
        y
    }

    pub fn act_on_point(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(self.act_on_vector(p.coords())).expect("permutation preserves nonzero points")
    }

    pub fn act_on_line(&self, l: &ProjLine) -> ProjLine {
        let [a, b] = l.rows();
        ProjLine::from_vectors(&self.act_on_vector(&a), &self.act_on_vector(&b)).expect("permutation preserves lines")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return write!(f, "()");
        }
        for c in nontrivial {
            write!(f, "(")?;
            for k in c {
                write!(f, "{}", k + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        Permutation::parse(&s).map_err(D::Error::custom)
    }
}

/// A finite group of permutations with its full element list. Equality and
/// ordering look at the elements only.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for FiniteGroup {}

impl std::hash::Hash for FiniteGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl PartialOrd for FiniteGroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteGroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.order(), &self.elements).cmp(&(other.order(), &other.elements))
    }
}

impl FiniteGroup {
    /// The group generated by `gens`, by breadth-first closure.
    pub fn closure(gens: &[Permutation]) -> Self {
        let mut seen = BTreeSet::from([Permutation::identity()]);
        let mut queue = VecDeque::from([Permutation::identity()]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = g.compose(&x);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        FiniteGroup {
            generators: gens.iter().copied().filter(|g| !g.is_identity()).collect(),
            elements: seen.into_iter().collect(),
        }
    }

    pub fn parse(gens: &[&str]) -> Result<Self> {
        let g = gens.iter().map(|s| Permutation::parse(s)).collect::<Result<Vec<_>>>()?;
        Ok(Self::closure(&g))
    }

    /// A group from a closed element set, with a small greedy generating set.
    pub fn from_elements(elements: &[Permutation]) -> Result<Self> {
        let set: BTreeSet<Permutation> = elements.iter().copied().collect();
        if !set.contains(&Permutation::identity()) {
            return Err(Error::Invariant("element set lacks the identity".into()));
        }
        for a in &set {
            for b in &set {
                if !set.contains(&a.compose(b)) {
                    return Err(Error::Invariant("element set not closed".into()));
                }
            }
        }
        let mut gens = Vec::new();
        let mut current = FiniteGroup::closure(&[]);
        // prefer high-order elements so cyclic groups get one generator
        let mut by_order: Vec<Permutation> = set.iter().copied().collect();
        by_order.sort_by_key(|p| (std::cmp::Reverse(p.order()), *p));
        for x in by_order {
            if !current.contains(&x) {
                gens.push(x);
                current = FiniteGroup::closure(&gens);
            }
        }
        Ok(current)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &FiniteGroup) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// g·H·g⁻¹
    pub fn conjugate_by(&self, g: &Permutation) -> FiniteGroup {
        let gi = g.inverse();
        let gens: Vec<Permutation> = self.generators.iter().map(|h| g.compose(h).compose(&gi)).collect();
        FiniteGroup::closure(&gens)
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        g.generators.iter().all(|x| self.conjugate_by(x) == *self)
    }

    /// Every subgroup, by joining cyclic subgroups until no new group appears.
    pub fn all_subgroups(&self) -> Vec<FiniteGroup> {
        let mut found: BTreeSet<Vec<Permutation>> = BTreeSet::new();
        let mut groups: Vec<FiniteGroup> = Vec::new();
        for x in &self.elements {
            let c = FiniteGroup::closure(&[*x]);
            if found.insert(c.elements.clone()) {
                groups.push(c);
            }
        }
        let mut frontier = 0;
        while frontier < groups.len() {
            let end = groups.len();
            for i in frontier..end {
                for j in 0..end {
                    let mut gens = groups[i].generators.clone();
                    gens.extend_from_slice(&groups[j].generators);
                    let joined = FiniteGroup::closure(&gens);
                    if found.insert(joined.elements.clone()) {
                        groups.push(joined);
                    }
                }
            }
            frontier = end;
        }
        groups.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        groups
            .into_iter()
            .map(|g| FiniteGroup::from_elements(&g.elements).expect("closed"))
            .collect()
    }

    /// All subgroups of order n, grouped into conjugacy classes.
    pub fn subgroups_of_order(&self, n: usize) -> Vec<ConjugacyClass> {
        if n == 0 || !self.order().is_multiple_of(n) {
            return Vec::new();
        }
        let mut classes: Vec<ConjugacyClass> = Vec::new();
        for h in self.all_subgroups().into_iter().filter(|h| h.order() == n) {
            if classes.iter().any(|c| c.members.contains(&h)) {
                continue;
            }
            let mut members: Vec<FiniteGroup> = Vec::new();
            for g in &self.elements {
                let c = h.conjugate_by(g);
                let c = FiniteGroup::from_elements(&c.elements).expect("closed");
                if !members.contains(&c) {
                    members.push(c);
                }
            }
            members.sort();
            classes.push(ConjugacyClass { members });
        }
        classes
    }

    /// The unique representative element list of each coset gK, for K ◁ G.
    pub fn coset_of(&self, g: &Permutation, normal: &FiniteGroup) -> Vec<Permutation> {
        let mut c: Vec<Permutation> = normal.elements.iter().map(|k| g.compose(k)).collect();
        c.sort();
        c
    }
}

/// A conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub members: Vec<FiniteGroup>,
}

impl ConjugacyClass {
    pub fn representative(&self) -> &FiniteGroup {
        &self.members[0]
    }
}

/// G₂₀ = ⟨(12345), (2354)⟩.
pub fn g20() -> FiniteGroup {
    FiniteGroup::parse(&["(12345)", "(2354)"]).expect("valid cycles")
}

/// C₅ = ⟨(12345)⟩.
pub fn c5() -> FiniteGroup {
    FiniteGroup::parse(&["(12345)"]).expect("valid cycles")
}

/// C₄ = ⟨(2354)⟩.
pub fn c4() -> FiniteGroup {
    FiniteGroup::parse(&["(2354)"]).expect("valid cycles")
}

/// D₁₀ = ⟨(12345), (25)(34)⟩.
pub fn d10() -> FiniteGroup {
    FiniteGroup::parse(&["(12345)", "(25)(34)"]).expect("valid cycles")
}

pub fn symmetric_group() -> FiniteGroup {
    FiniteGroup::parse(&["(12345)", "(12)"]).expect("valid cycles")
}

/// Orbit of a point (as a sorted set of normalized points) and its stabilizer.
pub fn orbit_and_stabilizer(g: &FiniteGroup, p: &ProjPoint) -> (BTreeSet<ProjPoint>, FiniteGroup) {
    let mut orbit = BTreeSet::new();
    let mut stab = Vec::new();
    for x in g.elements() {
        let q = x.act_on_point(p);
        if q == *p {
            stab.push(*x);
        }
        orbit.insert(q);
    }
    let stab = FiniteGroup::from_elements(&stab).expect("stabilizers are subgroups");
    (orbit, stab)
}

/// One simultaneous eigenspace of the generators of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedLocusComponent {
    /// Scalar by which each generator acts.
    pub character: Vec<(Permutation, RootOfUnity)>,
    pub basis: Vec<VectorK>,
    pub projective_dim: usize,
    pub positive_dimensional: bool,
}

impl FixedLocusComponent {
    /// The point, for a zero-dimensional component.
    pub fn point(&self) -> Option<ProjPoint> {
        match self.basis.as_slice() {
            [v] => ProjPoint::new(v.clone()).ok(),
            _ => None,
        }
    }
}

/// Fixed locus of h in P⁴ (optionally inside Σx = 0) as the union of the
/// projectivized simultaneous eigenspaces of its generators.
pub fn fixed_locus(h: &FiniteGroup, restrict_to_hyperplane: bool) -> Result<Vec<FixedLocusComponent>> {
    let gens = h.generators();
    let mut spectra = Vec::with_capacity(gens.len());
    for g in gens {
        spectra.push(eigenspaces_of_permutation(g)?.into_keys().collect::<Vec<_>>());
    }
    let base = if restrict_to_hyperplane {
        MatrixK::from_rows(vec![vec![FieldElement::one(); LETTERS]])
    } else {
        MatrixK::zeros(0, LETTERS)
    };
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    search(gens, &spectra, &base, &mut chosen, &mut out);
    Ok(out)
}

fn search(
    gens: &[Permutation],
    spectra: &[Vec<RootOfUnity>],
    constraints: &MatrixK,
    chosen: &mut Vec<(Permutation, RootOfUnity)>,
    out: &mut Vec<FixedLocusComponent>,
) {
    let basis = kernel_basis(constraints);
    if basis.is_empty() {
        return;
    }
    let k = chosen.len();
    if k == gens.len() {
        let dim = basis.len() - 1;
        out.push(FixedLocusComponent {
            character: chosen.clone(),
            basis,
            projective_dim: dim,
            positive_dimensional: dim >= 1,
        });
        return;
    }
    let m = gens[k].matrix();
    for lambda in &spectra[k] {
        let block = m.sub(&MatrixK::scalar(LETTERS, &lambda.value()));
        chosen.push((gens[k], *lambda));
        search(gens, spectra, &constraints.vstack(&block), chosen, out);
        chosen.pop();
    }
}

/// Conjugacy class representatives keyed by order, for reports.
pub fn subgroup_census(g: &FiniteGroup) -> BTreeMap<usize, (usize, usize)> {
    let mut out = BTreeMap::new();
    for d in 1..=g.order() {
        let classes = g.subgroups_of_order(d);
        if !classes.is_empty() {
            let total = classes.iter().map(|c| c.members.len()).sum();
            out.insert(d, (total, classes.len()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::FieldElement;
    use crate::projgeo::membership;
    use proptest::prelude::*;

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_integer(n)
    }

    #[test]
    fn cycle_notation_round_trip() {
        for s in ["(12345)", "(2354)", "(25)(34)", "()", "(12)"] {
            assert_eq!(Permutation::parse(s).unwrap().to_string(), s);
        }
        let p = Permutation::parse("(2354)").unwrap();
        assert_eq!(p.images(), [0, 2, 4, 1, 3]);
        assert!(Permutation::parse("(16)").is_err());
        assert!(Permutation::parse("(122)").is_err());
    }

    #[test]
    fn matrix_is_homomorphism() {
        let a = Permutation::parse("(12345)").unwrap();
        let b = Permutation::parse("(2354)").unwrap();
        assert_eq!(a.compose(&b).matrix(), a.matrix().mul(&b.matrix()));
        let x: Vec<FieldElement> = (1..=5).map(fe).collect();
        assert_eq!(a.act_on_vector(&x), a.matrix().mul_vec(&x));
    }

    #[test]
    fn group_orders() {
        assert_eq!(g20().order(), 20);
        assert_eq!(d10().order(), 10);
        assert_eq!(FiniteGroup::closure(&[]).order(), 1);
        assert_eq!(symmetric_group().order(), 120);
        assert!(d10().is_subgroup_of(&g20()));
        assert!(c5().is_normal_in(&g20()));
        assert!(d10().is_normal_in(&g20()));
        assert!(!c4().is_normal_in(&g20()));
    }

    #[test]
    fn subgroups_of_g20() {
        let g = g20();
        let c4s = g.subgroups_of_order(4);
        assert_eq!(c4s.len(), 1);
        assert_eq!(c4s[0].members.len(), 5);
        let c5s = g.subgroups_of_order(5);
        assert_eq!(c5s.len(), 1);
        assert_eq!(c5s[0].members, vec![c5()]);
        assert!(g.subgroups_of_order(3).is_empty());
        let nonempty: Vec<usize> = (1..=20).filter(|&n| !g.subgroups_of_order(n).is_empty()).collect();
        assert_eq!(nonempty, vec![1, 2, 4, 5, 10, 20]);
        assert_eq!(g.subgroups_of_order(10)[0].members, vec![d10()]);
    }

    #[test]
    fn orbit_of_zeta_point() {
        let p = ProjPoint::new((0..5).map(|j| FieldElement::zeta_pow(4 * j)).collect()).unwrap();
        let (orbit, stab) = orbit_and_stabilizer(&g20(), &p);
        assert_eq!(orbit.len(), 4);
        assert_eq!(stab, c5());
    }

    #[test]
    fn orbit_of_u1() {
        let i = FieldElement::i();
        let u1 = ProjPoint::new(vec![fe(0), -&i, fe(-1), fe(1), i.clone()]).unwrap();
        let (orbit, stab) = orbit_and_stabilizer(&g20(), &u1);
        assert_eq!(orbit.len(), 5);
        assert_eq!(stab.order(), 4);
        assert_eq!(stab, c4());
    }

    #[test]
    fn generic_orbit() {
        let p = ProjPoint::from_ints(&[1, 2, 3, 4, -10]).unwrap();
        let (orbit, stab) = orbit_and_stabilizer(&g20(), &p);
        // oracle: apply each of the 20 elements by hand and count distinct images
        let mut brute = BTreeSet::new();
        for x in g20().elements() {
            let mut y = vec![fe(0); 5];
            for k in 0..5 {
                y[x.apply_index(k)] = fe([1, 2, 3, 4, -10][k]);
            }
            brute.insert(ProjPoint::new(y).unwrap());
        }
        assert_eq!(orbit, brute);
        assert_eq!(orbit.len(), 20);
        assert_eq!(stab.order(), 1);
    }

    #[test]
    fn c4_fixes_r1_to_r4() {
        let comps = fixed_locus(&c4(), true).unwrap();
        assert!(comps.iter().all(|c| !c.positive_dimensional));
        let pts: BTreeSet<ProjPoint> = comps.iter().filter_map(FixedLocusComponent::point).collect();
        let i = FieldElement::i();
        let expected: BTreeSet<ProjPoint> = [
            vec![fe(0), fe(-1), fe(1), fe(1), fe(-1)],
            vec![fe(0), -&i, fe(-1), fe(1), i.clone()],
            vec![fe(0), i.clone(), fe(-1), fe(1), -&i],
            vec![fe(-4), fe(1), fe(1), fe(1), fe(1)],
        ]
        .into_iter()
        .map(|v| ProjPoint::new(v).unwrap())
        .collect();
        assert_eq!(pts, expected);
    }

    #[test]
    fn d10_has_no_fixed_points_in_hyperplane() {
        assert!(fixed_locus(&d10(), true).unwrap().is_empty());
        assert!(fixed_locus(&g20(), true).unwrap().is_empty());
    }

    #[test]
    fn trivial_group_fixes_everything() {
        let comps = fixed_locus(&FiniteGroup::closure(&[]), true).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].projective_dim, 3);
        assert!(comps[0].positive_dimensional);
    }

    #[test]
    fn projector_oracle_agrees_for_cyclic_groups() {
        // independent route: the χ-isotypic projector (1/|h|) Σ χ(t)⁻¹ ρ(t)
        for h in [c4(), c5()] {
            let g = h.generators()[0];
            let n = h.order() as u32;
            let mut from_projectors = BTreeSet::new();
            for lambda in RootOfUnity::all_of_order_dividing(n) {
                let mut proj = MatrixK::zeros(5, 5);
                let mut t = Permutation::identity();
                let mut chi = RootOfUnity::one();
                for _ in 0..n {
                    proj = proj.add(&t.matrix().scale(&chi.inverse().value()));
                    t = g.compose(&t);
                    chi = chi.mul(&lambda);
                }
                // image of the projector intersected with Σx = 0
                let image = proj.transpose().row_space_basis();
                if image.rows() == 0 {
                    continue;
                }
                let hyper = MatrixK::from_rows(vec![vec![fe(1); 5]]).mul(&image.transpose());
                for w in kernel_basis(&hyper) {
                    let v = image.transpose().mul_vec(&w);
                    from_projectors.insert(ProjPoint::new(v).unwrap());
                }
            }
            let from_eigen: BTreeSet<ProjPoint> = fixed_locus(&h, true)
                .unwrap()
                .iter()
                .filter_map(FixedLocusComponent::point)
                .collect();
            assert_eq!(from_eigen, from_projectors);
        }
    }

    #[test]
    fn fixed_points_are_fixed() {
        let g = g20();
        for class in g.subgroups_of_order(4).iter().chain(g.subgroups_of_order(5).iter()) {
            for h in &class.members {
                for comp in fixed_locus(h, true).unwrap() {
                    let p = comp.point().unwrap();
                    assert!(membership(&p, &[crate::projgeo::hyperplane_form(5)]));
                    for x in h.elements() {
                        assert_eq!(x.act_on_point(&p), p);
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_permutes_fixed_loci() {
        let g = g20();
        let h = c4();
        let pts = |grp: &FiniteGroup| -> BTreeSet<ProjPoint> {
            fixed_locus(grp, true)
                .unwrap()
                .iter()
                .filter_map(FixedLocusComponent::point)
                .collect()
        };
        let base = pts(&h);
        for x in g.elements() {
            let moved: BTreeSet<ProjPoint> = base.iter().map(|p| x.act_on_point(p)).collect();
            assert_eq!(moved, pts(&h.conjugate_by(x)));
        }
    }

    proptest! {
        #[test]
        fn orbit_stabilizer_identity(c in proptest::collection::vec(-3i64..=3, 5)) {
            prop_assume!(c.iter().any(|&x| x != 0));
            let p = ProjPoint::from_ints(&c).unwrap();
            for g in [g20(), d10(), c4(), c5()] {
                let (orbit, stab) = orbit_and_stabilizer(&g, &p);
                prop_assert_eq!(orbit.len() * stab.order(), g.order());
            }
        }
    }
}
