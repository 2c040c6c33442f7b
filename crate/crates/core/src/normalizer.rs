//! The projective normalizer of G₂₀ acting on the quadric Σx = Σx² = 0,
//! assembled from intertwiners of the 4-dimensional representation on the
//! hyperplane Σx = 0.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::cyclo::{FieldElement, RootOfUnity};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Permutation};
use crate::linalg::MatrixK;
use crate::projgeo::{HomogeneousForm, ProjPoint};

pub const CLOSURE_CAP: usize = 400;

/// Columns e_{k+1} − e₀, k = 0..3.
pub fn hyperplane_basis() -> MatrixK {
    let mut b = MatrixK::zeros(5, 4);
    for k in 0..4 {
        b.set(0, k, FieldElement::from_integer(-1));
        b.set(k + 1, k, FieldElement::one());
    }
    b
}

/// Left inverse of the hyperplane basis: drop x₀.
fn coordinates() -> MatrixK {
    let mut l = MatrixK::zeros(4, 5);
    for k in 0..4 {
        l.set(k, k + 1, FieldElement::one());
    }
    l
}

/// ρ(σ) on the hyperplane in the basis above.
pub fn restricted(p: &Permutation) -> MatrixK {
    coordinates().mul(&p.matrix()).mul(&hyperplane_basis())
}

/// Gram matrix of Σx² restricted to the hyperplane.
pub fn restricted_quadric_gram() -> MatrixK {
    let b = hyperplane_basis();
    b.transpose().mul(&b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Character {
    /// λ((2354)) as a power of i.
    pub index: u32,
    pub values: BTreeMap<Permutation, RootOfUnity>,
}

impl Character {
    pub fn value(&self, p: &Permutation) -> &RootOfUnity {
        &self.values[p]
    }

    pub fn order(&self) -> u32 {
        self.values.values().map(RootOfUnity::order).max().unwrap_or(1)
    }
}

/// The four characters of G₂₀, through the quotient by its normal C₅.
pub fn characters_of_g20(g: &FiniteGroup) -> Result<Vec<Character>> {
    if g.order() != 20 {
        return Err(Error::WrongGroup(format!("order {}", g.order())));
    }
    let c5 = g
        .subgroups_of_order(5)
        .into_iter()
        .find(|c| c.members.len() == 1 && c.representative().is_normal_in(g))
        .map(|c| c.representative().clone())
        .ok_or_else(|| Error::WrongGroup("no normal subgroup of order 5".into()))?;
    let preferred = Permutation::parse("(2354)").expect("valid cycle");
    let t = if g.contains(&preferred) {
        preferred
    } else {
        *g.elements()
            .iter()
            .find(|x| x.order() == 4)
            .ok_or_else(|| Error::WrongGroup("no element of order 4".into()))?
    };
    // every element is t^k·c with c ∈ C₅
    let mut coset_index = BTreeMap::new();
    let mut tk = Permutation::identity();
    for k in 0..4u32 {
        for c in c5.elements() {
            coset_index.insert(tk.compose(c), k);
        }
        tk = t.compose(&tk);
    }
    if coset_index.len() != 20 {
        return Err(Error::WrongGroup("G/C5 is not cyclic of order 4".into()));
    }
    let mut out = Vec::new();
    for j in 0..4u32 {
        let values: BTreeMap<Permutation, RootOfUnity> = coset_index
            .iter()
            .map(|(x, &k)| (*x, RootOfUnity::new(5 * (j * k) as i64)))
            .collect();
        for a in g.elements() {
            for b in g.elements() {
                if values[&a.compose(b)] != values[a].mul(&values[b]) {
                    return Err(Error::WrongGroup("quotient map is not a homomorphism".into()));
                }
            }
        }
        out.push(Character { index: j, values });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Intertwiner {
    pub character: u32,
    pub matrix: MatrixK,
    pub seed: [usize; 2],
    pub invertible: bool,
    pub preserves_quadric: bool,
    pub square_is_scalar: bool,
    pub unique_up_to_scalar: bool,
}

fn average(g: &FiniteGroup, lambda: &Character, x: &MatrixK) -> MatrixK {
    let mut t = MatrixK::zeros(4, 4);
    for h in g.elements() {
        let r = restricted(h);
        let ri = restricted(&h.inverse());
        t = t.add(&r.mul(x).mul(&ri).scale(&lambda.value(h).value()));
    }
    t
}

fn elementary(r: usize, c: usize) -> MatrixK {
    let mut m = MatrixK::zeros(4, 4);
    m.set(r, c, FieldElement::one());
    m
}

/// T with T·ρ(h) = λ(h)·ρ(h)·T, by averaging Σ λ(h)ρ(h)Xρ(h)⁻¹ over
/// elementary seeds in row-major order.
pub fn intertwiner(g: &FiniteGroup, lambda: &Character) -> Result<Option<Intertwiner>> {
    let mut found: Vec<([usize; 2], MatrixK)> = Vec::new();
    for r in 0..4 {
        for c in 0..4 {
            let t = average(g, lambda, &elementary(r, c));
            if !t.is_zero() {
                found.push(([r, c], t));
                if found.len() == 2 {
                    break;
                }
            }
        }
        if found.len() == 2 {
            break;
        }
    }
    let Some((seed, t)) = found.first().cloned() else {
        return Ok(None);
    };
    for h in g.elements() {
        let r = restricted(h);
        if t.mul(&r) != r.mul(&t).scale(&lambda.value(h).value()) {
            return Err(Error::Invariant(format!("intertwining fails at {h}")));
        }
    }
    let unique = found
        .get(1)
        .is_none_or(|(_, t2)| t2.projective_normalize() == t.projective_normalize());
    let q = restricted_quadric_gram();
    let transported = t.transpose().mul(&q).mul(&t);
    let preserves_quadric = q
        .inverse()
        .ok()
        .and_then(|qi| transported.mul(&qi).scalar_value())
        .is_some_and(|c| !c.is_zero());
    Ok(Some(Intertwiner {
        character: lambda.index,
        seed,
        invertible: !t.determinant()?.is_zero(),
        preserves_quadric,
        square_is_scalar: t.mul(&t).scalar_value().is_some(),
        unique_up_to_scalar: unique,
        matrix: t,
    }))
}

/// Applies a hyperplane matrix to a point with Σx = 0.
pub fn act_on_point(t: &MatrixK, p: &ProjPoint) -> Result<ProjPoint> {
    let y = coordinates().mul_vec(p.coords());
    ProjPoint::new(hyperplane_basis().mul_vec(&t.mul_vec(&y)))
}

fn canonical(m: &MatrixK) -> Result<MatrixK> {
    m.projective_normalize().ok_or(Error::SingularMatrix)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizerResult {
    pub order: usize,
    pub hyperplane_basis: MatrixK,
    pub generators: Vec<MatrixK>,
    pub characters: Vec<BTreeMap<String, String>>,
    pub intertwiners: Vec<Intertwiner>,
    pub image_order: usize,
    pub index: usize,
    pub central_involution: Option<MatrixK>,
    pub direct_product: bool,
    pub swaps_k1_k2: bool,
    pub quadric_points_checked: usize,
    pub quadric_preserved: bool,
}

impl NormalizerResult {
    pub fn is_c2_times_g20(&self) -> bool {
        self.order == 40 && self.image_order == 20 && self.direct_product
    }
}

/// Closure of projective classes of 4×4 matrices.
pub fn projective_closure(gens: &[MatrixK]) -> Result<BTreeSet<MatrixK>> {
    let id = MatrixK::identity(4);
    let gens: Vec<MatrixK> = gens.iter().map(canonical).collect::<Result<_>>()?;
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = canonical(&g.mul(&x))?;
            if seen.insert(y.clone()) {
                if seen.len() > CLOSURE_CAP {
                    return Err(Error::ClosureExplosion(CLOSURE_CAP));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// ρ(G₂₀) together with every quadric-preserving intertwiner.
pub fn assemble_normalizer(
    g: &FiniteGroup,
    k1: &[ProjPoint],
    k2: &[ProjPoint],
    quadric_sample: &[ProjPoint],
) -> Result<NormalizerResult> {
    let chars = characters_of_g20(g)?;
    let mut intertwiners = Vec::new();
    for lambda in &chars {
        if let Some(t) = intertwiner(g, lambda)? {
            intertwiners.push(t);
        }
    }
    let image = projective_closure(&g.generators().iter().map(restricted).collect::<Vec<_>>())?;
    let mut generators: Vec<MatrixK> = g.generators().iter().map(restricted).collect();
    let mut extras = Vec::new();
    for t in intertwiners.iter().filter(|t| t.preserves_quadric && t.invertible) {
        let c = canonical(&t.matrix)?;
        if !image.contains(&c) {
            generators.push(t.matrix.clone());
            extras.push(t.matrix.clone());
        }
    }
    let group = projective_closure(&generators)?;
    let central = extras.first().cloned();
    let mut direct = false;
    let mut swaps = false;
    let mut preserved = true;
    if let Some(z) = &central {
        let zi = z.inverse()?;
        let commutes = generators
            .iter()
            .all(|x| canonical(&z.mul(x).mul(&zi)).ok() == canonical(x).ok());
        let involution = z.mul(z).scalar_value().is_some();
        let outside = !image.contains(&canonical(z)?);
        direct = commutes && involution && outside && group.len() == 2 * image.len();
        let moved: BTreeSet<ProjPoint> = k1.iter().map(|p| act_on_point(z, p)).collect::<Result<_>>()?;
        swaps = moved == k2.iter().cloned().collect();
        let quadric = HomogeneousForm::power_sum(5, 2);
        for p in quadric_sample {
            let q = act_on_point(z, p)?;
            preserved &= quadric.eval(q.coords()).is_zero();
        }
    }
    let t = Permutation::parse("(2354)").expect("valid cycle");
    let characters = chars
        .iter()
        .map(|c| {
            g.generators()
                .iter()
                .chain(std::iter::once(&t))
                .map(|x| (x.to_string(), c.value(x).to_string()))
                .collect()
        })
        .collect();
    Ok(NormalizerResult {
        order: group.len(),
        hyperplane_basis: hyperplane_basis(),
        generators,
        characters,
        index: group.len() / image.len(),
        image_order: image.len(),
        intertwiners,
        central_involution: central,
        direct_product: direct,
        swaps_k1_k2: swaps,
        quadric_points_checked: quadric_sample.len(),
        quadric_preserved: preserved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{o_point, o_points, u_points, w_points, Surface};
    use crate::groups::{d10, g20};
    use crate::projgeo::line_through;

    fn sample() -> Vec<ProjPoint> {
        let mut pts: Vec<ProjPoint> = o_points().into_iter().chain(u_points()).chain(w_points()).collect();
        // two more points on each of the four rulings through pairs of O
        let one = FieldElement::one();
        for (a, b) in [(1, 2), (1, 3), (2, 4), (3, 4)] {
            let l = line_through(&o_point(a), &o_point(b)).unwrap();
            pts.push(l.point_at(&one, &one).unwrap());
            pts.push(l.point_at(&one, &FieldElement::from_integer(-2)).unwrap());
        }
        pts
    }

    #[test]
    fn characters() {
        let chars = characters_of_g20(&g20()).unwrap();
        assert_eq!(chars.len(), 4);
        let t = Permutation::parse("(2354)").unwrap();
        let values: BTreeSet<RootOfUnity> = chars.iter().map(|c| *c.value(&t)).collect();
        assert_eq!(values, (0..4).map(|k| RootOfUnity::new(5 * k)).collect());
        assert!(chars
            .iter()
            .any(|c| c.values.values().all(|v| *v == RootOfUnity::one())));
        for c in &chars {
            for x in g20().elements().iter().filter(|x| x.order() == 5) {
                assert_eq!(*c.value(x), RootOfUnity::one());
            }
        }
        assert!(matches!(characters_of_g20(&d10()), Err(Error::WrongGroup(_))));
    }

    #[test]
    fn restricted_rep_is_a_homomorphism() {
        let g = g20();
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(restricted(&a.compose(b)), restricted(a).mul(&restricted(b)));
            }
        }
        assert_eq!(
            projective_closure(&g.generators().iter().map(restricted).collect::<Vec<_>>())
                .unwrap()
                .len(),
            20
        );
    }

    #[test]
    fn intertwiners() {
        let g = g20();
        let chars = characters_of_g20(&g).unwrap();
        let ts: Vec<Intertwiner> = chars.iter().map(|c| intertwiner(&g, c).unwrap().unwrap()).collect();
        for t in &ts {
            assert!(t.invertible);
            assert!(t.unique_up_to_scalar);
        }
        assert!(ts[0].matrix.scalar_value().is_some());
        assert!(ts[2].square_is_scalar);
        let preserving: Vec<u32> = ts.iter().filter(|t| t.preserves_quadric).map(|t| t.character).collect();
        assert_eq!(preserving, vec![0, 2]);
    }

    #[test]
    fn normalizer_has_order_40() {
        let r = assemble_normalizer(&g20(), &u_points(), &w_points(), &sample()).unwrap();
        assert_eq!(r.order, 40);
        assert_eq!(r.index, 2);
        assert!(r.is_c2_times_g20());
        assert!(r.swaps_k1_k2);
        assert!(r.quadric_preserved);
        assert_eq!(r.quadric_points_checked, 22);
    }

    #[test]
    fn sample_points_are_on_the_quadric() {
        let q = Surface::quadric();
        assert!(sample().iter().all(|p| q.contains(p)));
    }

    #[test]
    fn involution_exchanges_the_conjugate_orbits() {
        let r = assemble_normalizer(&g20(), &u_points(), &w_points(), &sample()).unwrap();
        let z = r.central_involution.unwrap();
        let conj_u: BTreeSet<ProjPoint> = u_points().iter().map(ProjPoint::conj).collect();
        assert_eq!(conj_u, w_points().into_iter().collect());
        let back: BTreeSet<ProjPoint> = w_points().iter().map(|p| act_on_point(&z, p).unwrap()).collect();
        assert_eq!(back, u_points().into_iter().collect());
    }
}
