//! Check catalog, shared computation context and report rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::census::{
    descent_certificate, e_lines, general_position_on_quadric, invariant_skew_families, l_lines, lines27, o_point,
    o_points, orbit_census, smoothness_check, u_points, v_points, w_points, LineConfiguration, OrbitCensus, Surface,
};
use crate::cyclo::FieldElement;
use crate::error::{Error, Result};
use crate::groups::{c4, c5, d10, fixed_locus, g20, orbit_and_stabilizer, FiniteGroup};
use crate::linalg::IntMatrix;
use crate::normalizer::assemble_normalizer;
use crate::picard::{
    blowup_lattice, contract, divisor_relation_check, exceptional_count, invariant_rank, line_labels,
    reconstruct_picard, reconstruct_picard_with_sixer, root_count, ruling_basis, ruling_blowup_check, selfmap_degree,
    sixers, Contraction, PicardLattice, RulingBasis,
};
use crate::projgeo::{line_through, ProjPoint};

pub const SCHEMA_VERSION: u32 = 1;

/// Lazily computed objects shared by the checks.
#[derive(Default)]
pub struct Context {
    clebsch_census: OnceLock<Result<OrbitCensus>>,
    quadric_census: OnceLock<Result<OrbitCensus>>,
    lines: OnceLock<Result<LineConfiguration>>,
    cubic: OnceLock<Result<PicardLattice>>,
    e_contraction: OnceLock<Result<Contraction>>,
    rulings: OnceLock<Result<RulingBasis>>,
}

fn cached<T>(cell: &OnceLock<Result<T>>, f: impl FnOnce() -> Result<T>) -> Result<&T> {
    cell.get_or_init(f).as_ref().map_err(Clone::clone)
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clebsch_census(&self) -> Result<&OrbitCensus> {
        cached(&self.clebsch_census, || orbit_census(&Surface::clebsch(), &g20(), 8))
    }

    pub fn quadric_census(&self) -> Result<&OrbitCensus> {
        cached(&self.quadric_census, || orbit_census(&Surface::quadric(), &g20(), 8))
    }

    pub fn lines(&self) -> Result<&LineConfiguration> {
        cached(&self.lines, || lines27(&Surface::clebsch()))
    }

    pub fn cubic(&self) -> Result<&PicardLattice> {
        cached(&self.cubic, || reconstruct_picard(self.lines()?, &g20()))
    }

    pub fn e_contraction(&self) -> Result<&Contraction> {
        cached(&self.e_contraction, || contract(self.cubic()?, &["E1", "E2"], "S5"))
    }

    pub fn rulings(&self) -> Result<&RulingBasis> {
        cached(&self.rulings, || {
            let cubic = self.cubic()?;
            let f = contract(cubic, &["L1", "L2", "L3", "L4", "L5"], "P1xP1")?;
            ruling_basis(cubic, &f, "E1")
        })
    }
}

type CheckFn = fn(&Context) -> Result<(bool, Value)>;

pub struct CatalogEntry {
    pub id: &'static str,
    pub statement: &'static str,
    /// Sarkisov link type the certificate belongs to, if any.
    pub link: Option<&'static str>,
    run: CheckFn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link: Option<String>,
    pub status: Status,
    pub certificate: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: Value,
    pub conventions: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
    pub overall: Status,
}

fn points(p: &[ProjPoint]) -> Value {
    serde_json::to_value(p).expect("points serialize")
}

fn readable(p: &[ProjPoint]) -> Vec<String> {
    p.iter().map(ToString::to_string).collect()
}

fn set(v: Vec<ProjPoint>) -> Vec<ProjPoint> {
    let mut v = v;
    v.sort();
    v
}

fn check_clebsch_smooth(_: &Context) -> Result<(bool, Value)> {
    let c = smoothness_check(&Surface::clebsch())?;
    let q = smoothness_check(&Surface::quadric())?;
    Ok((c.smooth && q.smooth, json!({ "clebsch": c, "quadric": q })))
}

fn check_orbit_4(ctx: &Context) -> Result<(bool, Value)> {
    let census = ctx.clebsch_census()?;
    let orbits = census.orbits_of_length(4);
    let (_, stab) = orbit_and_stabilizer(&g20(), &o_point(1));
    let ok = orbits.len() == 1 && orbits[0].points == set(o_points()) && stab == c5();
    Ok((
        ok,
        json!({
            "orbits_of_length_4": orbits.len(),
            "points": points(&orbits.first().map(|o| o.points.clone()).unwrap_or_default()),
            "readable": readable(&o_points()),
            "stabilizer": stab.generators(),
            "stabilizer_order": stab.order(),
        }),
    ))
}

fn check_orbit_5(ctx: &Context) -> Result<(bool, Value)> {
    let census = ctx.clebsch_census()?;
    let found: Vec<Vec<ProjPoint>> = census.orbits_of_length(5).iter().map(|o| o.points.clone()).collect();
    let expected = [("V", v_points()), ("U", u_points()), ("W", w_points())];
    let matched: BTreeMap<&str, bool> = expected
        .iter()
        .map(|(n, p)| (*n, found.contains(&set(p.clone()))))
        .collect();
    let comps = fixed_locus(&c4(), true)?;
    let fixed: Vec<ProjPoint> = comps.iter().filter_map(|c| c.point()).collect();
    let r4 = ProjPoint::from_ints(&[-4, 1, 1, 1, 1])?;
    let r4_fixed = fixed.contains(&r4);
    let r4_on_cubic = Surface::clebsch().contains(&r4);
    let ok = found.len() == 3 && matched.values().all(|&b| b) && fixed.len() == 4 && r4_fixed && !r4_on_cubic;
    Ok((
        ok,
        json!({
            "orbits_of_length_5": found.len(),
            "matches_listed_points": matched,
            "c4_fixed_points": readable(&fixed),
            "r4": { "point": r4.to_string(), "fixed_by_c4": r4_fixed, "on_cubic": r4_on_cubic,
                    "sum_of_cubes": Surface::clebsch().form().eval(r4.coords()) },
            "orbits": found.iter().map(|o| points(o)).collect::<Vec<_>>(),
        }),
    ))
}

fn check_census_lt8(ctx: &Context) -> Result<(bool, Value)> {
    let census = ctx.clebsch_census()?;
    let small = orbit_census(&Surface::clebsch(), &g20(), 4)?;
    let d10_fixed = fixed_locus(&d10(), true)?.len();
    let g20_fixed = fixed_locus(&g20(), true)?.len();
    let lengths = census.lengths();
    let ok = lengths == BTreeMap::from([(4, 1), (5, 3)]) && small.orbits.is_empty() && d10_fixed == 0 && g20_fixed == 0;
    Ok((
        ok,
        json!({
            "lengths": lengths,
            "bound": census.bound,
            "census_below_4_empty": small.orbits.is_empty(),
            "d10_fixed_components": d10_fixed,
            "g20_fixed_components": g20_fixed,
            "artifacts": census.artifacts,
        }),
    ))
}

fn check_lines_27(ctx: &Context) -> Result<(bool, Value)> {
    let cfg = ctx.lines()?;
    let degrees: Vec<usize> = cfg
        .incidence
        .iter()
        .map(|r| r.iter().map(|&x| x as usize).sum())
        .collect();
    let ls = l_lines();
    let idx: Vec<Option<usize>> = ls.iter().map(|l| cfg.index_of(l)).collect();
    let through: Vec<bool> = (0..5)
        .map(|k| ls[k].contains(&u_points()[k]) && ls[k].contains(&w_points()[k]))
        .collect();
    let mut disjoint = true;
    for a in 0..5 {
        for b in a + 1..5 {
            disjoint &= !ls[a].meets(&ls[b]);
        }
    }
    let o = o_points();
    let mut o_pairs = BTreeMap::new();
    for a in 0..4 {
        for b in a + 1..4 {
            let on = cfg.index_of(&line_through(&o[a], &o[b])?).is_some();
            o_pairs.insert(format!("P{}P{}", a + 1, b + 1), on);
        }
    }
    let ok = cfg.len() == 27
        && degrees.iter().all(|&d| d == 10)
        && idx.iter().all(Option::is_some)
        && through.iter().all(|&b| b)
        && disjoint;
    Ok((
        ok,
        json!({
            "count": cfg.len(),
            "meets_per_line": degrees,
            "origins": cfg.origins,
            "l_lines": ls,
            "l_indices": idx,
            "l_through_u_and_w": through,
            "l_pairwise_disjoint": disjoint,
            "o_pair_lines_on_cubic": o_pairs,
            "lines": cfg.lines,
        }),
    ))
}

fn check_skew_families(ctx: &Context) -> Result<(bool, Value)> {
    let cfg = ctx.lines()?;
    let fams = invariant_skew_families(cfg, &g20())?;
    let labels = line_labels(cfg);
    let maximal: Vec<Vec<String>> = fams
        .iter()
        .filter(|f| f.maximal)
        .map(|f| f.lines.iter().map(|&k| labels[k].clone()).collect())
        .collect();
    let sizes: Vec<usize> = maximal.iter().map(Vec::len).collect();
    let e_idx: Vec<usize> = e_lines().iter().filter_map(|l| cfg.index_of(l)).collect();
    let l_idx: Vec<usize> = l_lines().iter().filter_map(|l| cfg.index_of(l)).collect();
    let e_meets_each_l = e_idx.iter().all(|&a| l_idx.iter().all(|&b| cfg.meets(a, b)));
    let e_skew = e_idx.len() == 2 && !cfg.meets(e_idx[0], e_idx[1]);
    let orbit_sizes: Vec<usize> = cfg.line_orbits(&g20())?.iter().map(Vec::len).collect();
    let ok = sizes == [2, 5]
        && maximal[0] == ["E1", "E2"]
        && maximal[1] == ["L1", "L2", "L3", "L4", "L5"]
        && e_meets_each_l
        && e_skew;
    Ok((
        ok,
        json!({
            "line_orbit_sizes": orbit_sizes,
            "families": fams,
            "maximal": maximal,
            "e1_e2_skew": e_skew,
            "each_e_meets_each_l": e_meets_each_l,
        }),
    ))
}

fn check_quadric_census(ctx: &Context) -> Result<(bool, Value)> {
    let census = ctx.quadric_census()?;
    let q = Surface::quadric();
    let fives: Vec<Vec<ProjPoint>> = census.orbits_of_length(5).iter().map(|o| o.points.clone()).collect();
    let k_is_o = census.orbits_of_length(4).first().map(|o| o.points.clone()) == Some(set(o_points()));
    let k1 = fives.contains(&set(u_points()));
    let k2 = fives.contains(&set(w_points()));
    let v_off = v_points().iter().all(|p| !q.contains(p));
    let ok = census.lengths() == BTreeMap::from([(4, 1), (5, 2)]) && k_is_o && k1 && k2 && v_off;
    Ok((
        ok,
        json!({
            "lengths": census.lengths(),
            "k_equals_o": k_is_o,
            "k1_equals_u_orbit": k1,
            "k2_equals_w_orbit": k2,
            "v_orbit_off_quadric": v_off,
            "artifacts": census.artifacts,
        }),
    ))
}

fn check_general_position(_: &Context) -> Result<(bool, Value)> {
    let q = Surface::quadric();
    let k1 = general_position_on_quadric(&u_points(), &q)?;
    let k2 = general_position_on_quadric(&w_points(), &q)?;
    let k = general_position_on_quadric(&o_points(), &q)?;
    let ok = k1.passed && k2.passed && !k.passed && k.pairs_on_surface.len() == 4;
    Ok((ok, json!({ "k1": k1, "k2": k2, "k": k })))
}

fn check_ruling_minus2(ctx: &Context) -> Result<(bool, Value)> {
    let cert = ruling_blowup_check(&Surface::quadric(), &o_points(), &u_points(), &g20(), ctx.rulings()?)?;
    let ok =
        cert.obstructed() && cert.squares.len() == 4 && cert.exceptional_count_k1 == 27 && cert.root_count_k1 == 72;
    Ok((ok, serde_json::to_value(&cert).expect("serialize")))
}

fn check_blowup_smooth(ctx: &Context) -> Result<(bool, Value)> {
    // Bl_{K₁}(P¹×P¹) is the Clebsch cubic as G-lattices; the cubic is smooth and
    // −K is its hyperplane class, so no root is effective
    let cubic = ctx.cubic()?;
    let rulings = ctx.rulings()?;
    let smooth = smoothness_check(&Surface::clebsch())?.smooth;
    let swaps = |x: &crate::groups::Permutation| rulings.swaps(x);
    let x = blowup_lattice("K1", &[("g", &u_points())], &g20(), &swaps)?;
    let mut cols = rulings.contraction.pullback.matrix.columns();
    for k in 1..=5 {
        cols.push(
            cubic
                .class(&format!("L{k}"))
                .cloned()
                .ok_or_else(|| Error::Invariant("no L".into()))?,
        );
    }
    let t = IntMatrix::from_columns(&cols, 7);
    let basis = t.integer_inverse().is_ok();
    let isometric = t.transpose().mul(&cubic.lattice.gram).mul(&t) == x.lattice.gram;
    let equivariant = g20()
        .elements()
        .iter()
        .all(|p| cubic.action(p).mul(&t) == t.mul(x.action(p)));
    let roots = root_count(cubic, 3);
    let lines = exceptional_count(cubic, 3);
    let ok = smooth && basis && isometric && equivariant && roots == 72 && lines == 27;
    Ok((
        ok,
        json!({
            "clebsch_smooth": smooth,
            "ruling_and_l_classes_form_basis": basis,
            "isometric_to_blowup_of_k1": isometric,
            "equivariant": equivariant,
            "roots": roots,
            "exceptional_classes": lines,
        }),
    ))
}

fn check_picard(ctx: &Context) -> Result<(bool, Value)> {
    let cfg = ctx.lines()?;
    let cubic = ctx.cubic()?;
    let all = sixers(cfg);
    let mut stable = Vec::new();
    for six in [all[0], all[all.len() / 2], all[all.len() - 1]] {
        let other = reconstruct_picard_with_sixer(cfg, &g20(), &six)?;
        stable.push(json!({
            "sixer": six,
            "degree": other.degree().to_string(),
            "invariant_rank": invariant_rank(&other),
        }));
    }
    let mut incidence_ok = true;
    for a in 0..27 {
        for b in 0..27 {
            let want = if a == b { -1 } else { cfg.incidence[a][b] as i64 };
            incidence_ok &= cubic.pair(&cubic.marked[a].class, &cubic.marked[b].class) == want.into();
        }
    }
    let ok = cubic.rank() == 7
        && cubic.degree() == 3.into()
        && cubic.marked.len() == 27
        && incidence_ok
        && all.len() == 72
        && stable.iter().all(|s| s["invariant_rank"] == 2 && s["degree"] == "3");
    Ok((
        ok,
        json!({
            "rank": cubic.rank(),
            "degree": cubic.degree().to_string(),
            "sixers": all.len(),
            "incidence_reproduced": incidence_ok,
            "basis_stability": stable,
            "lattice": cubic,
        }),
    ))
}

fn check_invariant_ranks(ctx: &Context) -> Result<(bool, Value)> {
    let cubic = invariant_rank(ctx.cubic()?);
    let s5 = invariant_rank(&ctx.e_contraction()?.target);
    let p1p1 = invariant_rank(&ctx.rulings()?.contraction.target);
    Ok((
        cubic == 2 && s5 == 1 && p1p1 == 1,
        json!({ "cubic": cubic, "S5": s5, "P1xP1": p1p1 }),
    ))
}

fn check_contractions(ctx: &Context) -> Result<(bool, Value)> {
    let cubic = ctx.cubic()?;
    let e = ctx.e_contraction()?;
    let r = ctx.rulings()?;
    let f = &r.contraction;
    let bad = contract(cubic, &["E1", "L1"], "none");
    let hyperbolic = f.target.lattice.gram == IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
    let eq_e = e.pullback.is_equivariant(cubic, &e.target);
    let eq_f = f.pullback.is_equivariant(cubic, &f.target);
    let ok = e.target.rank() == 5
        && e.target.degree() == 5.into()
        && f.target.rank() == 2
        && f.target.degree() == 8.into()
        && hyperbolic
        && matches!(bad, Err(Error::NotContractible(_)))
        && eq_e
        && eq_f;
    Ok((
        ok,
        json!({
            "pair": { "family": e.family, "rank": e.target.rank(), "degree": e.target.degree().to_string(),
                      "pullback": e.pullback, "equivariant": eq_e },
            "five": { "family": f.family, "rank": f.target.rank(), "degree": f.target.degree().to_string(),
                      "gram": f.target.lattice.gram, "hyperbolic": hyperbolic, "pullback": f.pullback,
                      "equivariant": eq_f, "labeling": r.labeling },
            "e1_l1": bad.err().map(|e| e.to_string()),
        }),
    ))
}

fn check_divisor_relations(ctx: &Context) -> Result<(bool, Value)> {
    let cert = divisor_relation_check(ctx.cubic()?, ctx.e_contraction()?, ctx.rulings()?)?;
    let mut bideg = cert.e_bidegrees.clone();
    bideg.sort_unstable();
    let ok = bideg == [[1, 2], [2, 1]] && cert.f_anticanonical_degrees == [3; 5];
    Ok((ok, serde_json::to_value(&cert).expect("serialize")))
}

fn check_selfmap(ctx: &Context) -> Result<(bool, Value)> {
    let cert = selfmap_degree(&u_points(), &w_points(), &g20(), ctx.rulings()?)?;
    let ok = cert.gram_rank == 12
        && cert.assignments.iter().all(|a| a.pairing == 50 && a.degree == 10)
        && cert.identity_pairing == 5
        && cert.equivariant
        && cert.not_biregular;
    Ok((ok, serde_json::to_value(&cert).expect("serialize")))
}

fn check_dp5_descent(ctx: &Context) -> Result<(bool, Value)> {
    let d = descent_certificate(ctx.clebsch_census()?, ctx.lines()?, &g20())?;
    let s5_lines = ctx.e_contraction()?.target.marked.len();
    let ok = d.e_orbit_size == 2
        && d.o_points_on_e == [2, 2]
        && d.other_orbits_below_five == 0
        && d.unique_orbit_of_length_two()
        && s5_lines == 10;
    Ok((
        ok,
        json!({
            "descent": d,
            "lines_on_s5": s5_lines,
            "length_3_excluded": 20 % 3 != 0,
        }),
    ))
}

fn quadric_sample() -> Result<Vec<ProjPoint>> {
    let mut pts: Vec<ProjPoint> = o_points().into_iter().chain(u_points()).chain(w_points()).collect();
    let one = FieldElement::one();
    let two = FieldElement::from_integer(-2);
    for (a, b) in [(1, 2), (1, 3), (2, 4), (3, 4)] {
        let l = line_through(&o_point(a), &o_point(b))?;
        pts.push(l.point_at(&one, &one)?);
        pts.push(l.point_at(&one, &two)?);
    }
    Ok(pts)
}

fn check_g40(_: &Context) -> Result<(bool, Value)> {
    let r = assemble_normalizer(&g20(), &u_points(), &w_points(), &quadric_sample()?)?;
    let ok = r.order == 40 && r.is_c2_times_g20() && r.swaps_k1_k2 && r.quadric_preserved;
    Ok((ok, serde_json::to_value(&r).expect("serialize")))
}

fn check_main(ctx: &Context) -> Result<(bool, Value)> {
    let parts = [
        "invariant-ranks",
        "skew-families",
        "dp5-orbit-descent",
        "quadric-census-lt8",
        "ruling-minus2",
        "blowup-smooth-dp",
        "selfmap-degree",
        "thm-g40",
    ];
    let mut statuses = BTreeMap::new();
    for id in parts {
        let entry = catalog().iter().find(|c| c.id == id).expect("catalogued");
        let status = match (entry.run)(ctx) {
            Ok((true, _)) => Status::Pass,
            Ok((false, _)) => Status::Fail,
            Err(_) => Status::Error,
        };
        statuses.insert(id, status);
    }
    let ok = statuses.values().all(|s| *s == Status::Pass);
    let s5 = ctx.e_contraction()?;
    Ok((
        ok,
        json!({
            "invariant_picard_rank_s5": invariant_rank(&s5.target),
            "links_from_s5": ["S5 <- cubic -> P1xP1", "P1xP1 <- cubic -> S5 (blow-up of K1: inverse link)", "P1xP1 <- cubic -> S5 (blow-up of K2: composite self-map)"],
            "birational_automorphism_group_order": 40,
            "depends_on": statuses,
        }),
    ))
}

static CATALOG: &[CatalogEntry] = &[
    CatalogEntry { id: "blowup-smooth-dp", statement: "Blowing up K1 on P1xP1 gives a smooth cubic: lattice isometric to the smooth Clebsch cubic, 27 lines, 72 roots none effective", link: Some("II"), run: check_blowup_smooth },
    CatalogEntry { id: "clebsch-census-lt8", statement: "G20-orbits of length below 8 on the Clebsch cubic: lengths 4 and 5 only, none of length 1 or 2", link: None, run: check_census_lt8 },
    CatalogEntry { id: "clebsch-orbit-4", statement: "The Clebsch cubic has a unique G20-orbit of length 4, the four fifth-root-of-unity points, with stabilizer C5", link: None, run: check_orbit_4 },
    CatalogEntry { id: "clebsch-orbit-5", statement: "The Clebsch cubic has exactly three G20-orbits of length 5 (V, U, W); R4 is C4-fixed but off the cubic", link: None, run: check_orbit_5 },
    CatalogEntry { id: "clebsch-smooth", statement: "The Clebsch cubic and the quadric are smooth inside the hyperplane", link: None, run: check_clebsch_smooth },
    CatalogEntry { id: "contractions-two", statement: "Contracting E1, E2 gives degree 5; contracting L1..L5 gives degree 8 with hyperbolic Picard lattice", link: Some("II"), run: check_contractions },
    CatalogEntry { id: "divisor-relations", statement: "sigma*H = 2 pi*(-K) - 3(E1+E2) and sum F = 3 pi*(-K) - 5(E1+E2); E-lines push forward to bidegrees (2,1), (1,2)", link: Some("II"), run: check_divisor_relations },
    CatalogEntry { id: "dp5-orbit-descent", statement: "S5 has a unique G20-orbit of length below 5, of length 2, coming from the length-4 orbit on E1 and E2", link: None, run: check_dp5_descent },
    CatalogEntry { id: "general-position-k1-k2", statement: "K1 and K2 are in general position on the quadric; K is not (four of its pair-lines are rulings)", link: None, run: check_general_position },
    CatalogEntry { id: "invariant-ranks", statement: "Invariant Picard ranks: 2 on the cubic, 1 on S5, 1 on P1xP1", link: None, run: check_invariant_ranks },
    CatalogEntry { id: "lines-27", statement: "The Clebsch cubic carries 27 lines, each meeting 10 others; L1..L5 are disjoint and pass through U_i and W_i", link: None, run: check_lines_27 },
    CatalogEntry { id: "main-theorem", statement: "S5 with G20 is G-birationally rigid up to the link to P1xP1 and its birational automorphism group has order 40", link: Some("II"), run: check_main },
    CatalogEntry { id: "picard-reconstruct", statement: "The Picard lattice of the cubic from its lines: rank 7, degree 3, independent of the chosen sixer", link: None, run: check_picard },
    CatalogEntry { id: "quadric-census-lt8", statement: "G20-orbits of length below 8 on the quadric: K of length 4 and K1, K2 of length 5", link: None, run: check_quadric_census },
    CatalogEntry { id: "ruling-minus2", statement: "Blowing up K turns the four rulings through its points into (-2)-classes, so the result is not del Pezzo", link: None, run: check_ruling_minus2 },
    CatalogEntry { id: "selfmap-degree", statement: "Blowing up K2 and contracting E1', E2' gives a self-map of S5 of degree 10, not biregular", link: Some("II"), run: check_selfmap },
    CatalogEntry { id: "skew-families", statement: "The only G20-stable families of disjoint lines on the cubic are {E1, E2} and {L1..L5}", link: None, run: check_skew_families },
    CatalogEntry { id: "thm-g40", statement: "The normalizer of G20 in the automorphisms of the quadric has order 40 and is C2 x G20", link: None, run: check_g40 },
];

/// All checks, sorted by id.
pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

pub fn check_ids() -> Vec<&'static str> {
    CATALOG.iter().map(|c| c.id).collect()
}

pub fn conventions() -> BTreeMap<String, String> {
    [
        ("permutations", "letter j in cycle notation acts on coordinate x_{j-1}; sigma sends x to y with y_{sigma(k)} = x_k"),
        ("field", "elements of Q(zeta_20) as 8 rational coefficients in the power basis of zeta = exp(2 pi i/20); zeta5 = zeta^4, i = zeta^5"),
        ("points", "projective points scaled so the first nonzero coordinate is 1"),
        ("e-lines", "E1 = P1P4 and E2 = P2P3 with P_k = (zeta5^(k j))_j"),
        ("f-lines", "F_i = L_i"),
        ("rulings", "f1 is the ruling class with E1 . sigma*f1 = 1; H = f1 + f2"),
        ("k-orbits", "K = length-4 orbit, K1 = U-orbit, K2 = W-orbit"),
        ("intertwiners", "T rho(h) = lambda(h) rho(h) T with lambda(2354) = i^index"),
    ]
    .iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

/// Resolves a selection ("all" or ids) in catalog order.
pub fn select(ids: &[String]) -> Result<Vec<&'static CatalogEntry>> {
    if ids.is_empty() || ids.iter().any(|s| s == "all") {
        return Ok(CATALOG.iter().collect());
    }
    let mut out = Vec::new();
    for id in ids {
        let entry = CATALOG
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::UnknownCheckId(id.clone()))?;
        if !out.iter().any(|c: &&CatalogEntry| c.id == entry.id) {
            out.push(entry);
        }
    }
    out.sort_by_key(|c| c.id);
    Ok(out)
}

pub fn run_check(ctx: &Context, entry: &CatalogEntry, timings: bool) -> CheckResult {
    let start = Instant::now();
    let (status, certificate) = match (entry.run)(ctx) {
        Ok((true, cert)) => (Status::Pass, cert),
        Ok((false, cert)) => (Status::Fail, cert),
        Err(e) => (Status::Error, json!({ "error": e.to_string() })),
    };
    let status = if status == Status::Pass && certificate.as_object().is_none_or(|m| m.is_empty()) {
        Status::Fail
    } else {
        status
    };
    CheckResult {
        id: entry.id.to_string(),
        statement: entry.statement.to_string(),
        link: entry.link.map(|l| format!("type-{l}")),
        status,
        certificate,
        wall_time_ms: timings.then(|| start.elapsed().as_millis()),
    }
}

/// Runs the selected checks on `jobs` threads; results keep catalog order.
pub fn run_checks(ids: &[String], jobs: usize, timings: bool) -> Result<Report> {
    let entries = select(ids)?;
    let ctx = Context::new();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Invariant(e.to_string()))?;
    let checks: Vec<CheckResult> = pool.install(|| entries.par_iter().map(|s| run_check(&ctx, s, timings)).collect());
    let overall = if checks.iter().all(|c| c.status == Status::Pass) {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Report {
        version: json!({ "tool": env!("CARGO_PKG_VERSION"), "schema": SCHEMA_VERSION }),
        conventions: conventions(),
        checks,
        overall,
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let status = |st: Status| match st {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        let _ = writeln!(s, "# G20 link verification report\n");
        let _ = writeln!(s, "Overall: **{}**\n", status(self.overall));
        let _ = writeln!(s, "## Conventions\n");
        for (k, v) in &self.conventions {
            let _ = writeln!(s, "- {k}: {v}");
        }
        let _ = writeln!(
            s,
            "\n## Summary\n\n| id | status | link | statement |\n|---|---|---|---|"
        );
        for c in &self.checks {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                c.id,
                status(c.status),
                c.link.as_deref().unwrap_or(""),
                c.statement
            );
        }
        for c in &self.checks {
            let _ = writeln!(s, "\n## {}\n\n{}\n\nStatus: {}", c.id, c.statement, status(c.status));
            if let Some(ms) = c.wall_time_ms {
                let _ = writeln!(s, "\nTime: {ms} ms");
            }
            let body = serde_json::to_string_pretty(&c.certificate).expect("certificate serializes");
            let _ = writeln!(s, "\n```json\n{body}\n```");
        }
        s
    }
}

/// The fixed-point data of small subgroups, for the Python bindings.
pub fn fixed_points_of(g: &FiniteGroup) -> Result<Vec<String>> {
    Ok(fixed_locus(g, true)?
        .iter()
        .filter_map(|c| c.point())
        .map(|p| p.to_string())
        .collect())
}
