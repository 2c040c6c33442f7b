//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::collections::BTreeSet;
use std::process::Command;

use g20_links::census::{
    general_position_on_quadric, invariant_skew_families, lines27, o_points, orbit_census, u_points, w_points, Surface,
};
use g20_links::cyclo::FieldElement;
use g20_links::groups::{c4, fixed_locus, g20, orbit_and_stabilizer, FiniteGroup};
use g20_links::linalg::IntVector;
use g20_links::normalizer::{act_on_point, assemble_normalizer};
use g20_links::picard::{
    blowup_lattice, contract, divisor_relation_check, invariant_rank, line_labels, reconstruct_picard, ruling_basis,
    ruling_blowup_check, selfmap_degree, PicardLattice,
};
use g20_links::projgeo::{line_in_surface, line_through, ProjLine, ProjPoint};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn z5(k: i64) -> FieldElement {
    FieldElement::zeta5().pow(k.rem_euclid(5) as u32)
}

fn int(n: i64) -> FieldElement {
    FieldElement::from_integer(n)
}

fn pt(c: Vec<FieldElement>) -> ProjPoint {
    ProjPoint::new(c).unwrap()
}

fn ipt(c: [i64; 5]) -> ProjPoint {
    ProjPoint::from_ints(&c).unwrap()
}

/// Gaussian-integer coordinates a + b i.
fn gpt(c: [(i64, i64); 5]) -> ProjPoint {
    let i = FieldElement::i();
    pt(c.iter().map(|&(a, b)| &int(a) + &(&int(b) * &i)).collect())
}

fn o_list() -> BTreeSet<ProjPoint> {
    [[0, 1, 2, 3, 4], [0, 2, 4, 1, 3], [0, 3, 1, 4, 2], [0, 4, 3, 2, 1]]
        .iter()
        .map(|e| pt(e.iter().map(|&k| z5(k)).collect()))
        .collect()
}

fn v_list() -> BTreeSet<ProjPoint> {
    [
        [0, -1, 1, 1, -1],
        [-1, 0, -1, 1, 1],
        [1, -1, 0, -1, 1],
        [1, 1, -1, 0, -1],
        [-1, 1, 1, -1, 0],
    ]
    .into_iter()
    .map(ipt)
    .collect()
}

/// U₁…U₅ in the listed order.
fn u_vec() -> Vec<ProjPoint> {
    [
        [(0, 0), (0, -1), (-1, 0), (1, 0), (0, 1)],
        [(0, 1), (0, 0), (0, -1), (-1, 0), (1, 0)],
        [(1, 0), (0, 1), (0, 0), (0, -1), (-1, 0)],
        [(-1, 0), (1, 0), (0, 1), (0, 0), (0, -1)],
        [(0, -1), (-1, 0), (1, 0), (0, 1), (0, 0)],
    ]
    .into_iter()
    .map(gpt)
    .collect()
}

fn u_list() -> BTreeSet<ProjPoint> {
    u_vec().into_iter().collect()
}

// W_k is the complex conjugate of U_k
fn w_list() -> BTreeSet<ProjPoint> {
    u_vec().iter().map(ProjPoint::conj).collect()
}

/// x_a + x_b = x_c + x_d = 0 inside the hyperplane.
fn l_line(a: usize, b: usize, c: usize, d: usize) -> ProjLine {
    let mut e1 = vec![0i64; 5];
    e1[a] = 1;
    e1[b] = 1;
    let mut e2 = vec![0i64; 5];
    e2[c] = 1;
    e2[d] = 1;
    ProjLine::from_int_equations(&[vec![1; 5], e1, e2]).unwrap()
}

fn listed_l_lines() -> Vec<ProjLine> {
    vec![
        l_line(1, 4, 2, 3),
        l_line(0, 2, 3, 4),
        l_line(0, 4, 1, 3),
        l_line(0, 1, 2, 4),
        l_line(0, 3, 1, 2),
    ]
}

fn orbit_sets(s: &Surface, r: usize) -> Result<Vec<BTreeSet<ProjPoint>>, String> {
    let census = orbit_census(s, &g20(), 8).map_err(|e| e.to_string())?;
    Ok(census
        .orbits_of_length(r)
        .iter()
        .map(|o| o.points.iter().cloned().collect())
        .collect())
}

fn criterion_1() -> Outcome {
    let census = orbit_census(&Surface::clebsch(), &g20(), 8).map_err(|e| e.to_string())?;
    let lengths: Vec<usize> = census.orbits.keys().copied().collect();
    ensure(lengths == [4, 5], format!("lengths {lengths:?}"))?;
    let fours = orbit_sets(&Surface::clebsch(), 4)?;
    ensure(fours == [o_list()], "length-4 orbit differs from the listed points")?;
    let fives: BTreeSet<BTreeSet<ProjPoint>> = orbit_sets(&Surface::clebsch(), 5)?.into_iter().collect();
    let expected: BTreeSet<BTreeSet<ProjPoint>> = [v_list(), u_list(), w_list()].into_iter().collect();
    ensure(fives == expected, "length-5 orbits differ from V, U, W")
}

fn criterion_2() -> Outcome {
    let r4 = ipt([-4, 1, 1, 1, 1]);
    let fixed: Vec<ProjPoint> = fixed_locus(&c4(), true)
        .map_err(|e| e.to_string())?
        .iter()
        .filter_map(|c| c.point())
        .collect();
    ensure(fixed.len() == 4, format!("{} C4-fixed points", fixed.len()))?;
    ensure(fixed.contains(&r4), "R4 not fixed")?;
    let cubes: FieldElement = r4.coords().iter().map(|x| x.pow(3)).sum();
    ensure(!cubes.is_zero() && !Surface::clebsch().contains(&r4), "R4 on the cubic")
}

fn criterion_3() -> Outcome {
    let cfg = lines27(&Surface::clebsch()).map_err(|e| e.to_string())?;
    ensure(cfg.len() == 27, format!("{} lines", cfg.len()))?;
    for a in 0..27 {
        let meets = (0..27).filter(|&b| b != a && cfg.lines[a].meets(&cfg.lines[b])).count();
        ensure(meets == 10, format!("line {a} meets {meets}"))?;
        for b in 0..a {
            ensure(cfg.lines[a] != cfg.lines[b], "duplicate line")?;
        }
    }
    let ls = listed_l_lines();
    for (k, (l, u)) in ls.iter().zip(u_vec()).enumerate() {
        ensure(cfg.lines.contains(l), format!("L{} missing", k + 1))?;
        ensure(
            l.contains(&u) && l.contains(&u.conj()),
            format!("L{} misses U/W", k + 1),
        )?;
        for m in &ls[..k] {
            ensure(!l.meets(m), "L lines meet")?;
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let cfg = lines27(&Surface::clebsch()).map_err(|e| e.to_string())?;
    let fams = invariant_skew_families(&cfg, &g20()).map_err(|e| e.to_string())?;
    let labels = line_labels(&cfg);
    let mut maximal: Vec<Vec<&str>> = fams
        .iter()
        .filter(|f| f.maximal)
        .map(|f| f.lines.iter().map(|&k| labels[k].as_str()).collect())
        .collect();
    maximal.sort_by_key(Vec::len);
    ensure(
        maximal == [vec!["E1", "E2"], vec!["L1", "L2", "L3", "L4", "L5"]],
        format!("maximal families {maximal:?}"),
    )
}

struct Lattices {
    cubic: PicardLattice,
    s5: PicardLattice,
    p1p1: PicardLattice,
    e: g20_links::picard::Contraction,
    rulings: g20_links::picard::RulingBasis,
}

fn lattices() -> Result<Lattices, String> {
    let cfg = lines27(&Surface::clebsch()).map_err(|e| e.to_string())?;
    let cubic = reconstruct_picard(&cfg, &g20()).map_err(|e| e.to_string())?;
    let e = contract(&cubic, &["E1", "E2"], "S5").map_err(|e| e.to_string())?;
    let f = contract(&cubic, &["L1", "L2", "L3", "L4", "L5"], "P1xP1").map_err(|e| e.to_string())?;
    let rulings = ruling_basis(&cubic, &f, "E1").map_err(|e| e.to_string())?;
    Ok(Lattices {
        s5: e.target.clone(),
        p1p1: rulings.contraction.target.clone(),
        cubic,
        e,
        rulings,
    })
}

fn criterion_5(l: &Lattices) -> Outcome {
    ensure(l.cubic.rank() == 7, "rank")?;
    ensure(l.cubic.square(&l.cubic.anticanonical) == BigInt::from(3), "(-K)^2")?;
    let ranks = [invariant_rank(&l.cubic), invariant_rank(&l.s5), invariant_rank(&l.p1p1)];
    ensure(ranks == [2, 1, 1], format!("invariant ranks {ranks:?}"))
}

fn add(a: &[BigInt], b: &[BigInt], ka: i64, kb: i64) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x * ka + y * kb).collect()
}

fn criterion_6(l: &Lattices) -> Outcome {
    let pi_k = l.e.pullback.apply(&l.s5.anticanonical);
    let e_sum = add(l.cubic.class("E1").ok_or("E1")?, l.cubic.class("E2").ok_or("E2")?, 1, 1);
    let h = vec![BigInt::from(1), BigInt::from(1)];
    let sigma_h = l.rulings.contraction.pullback.apply(&h);
    ensure(sigma_h == add(&pi_k, &e_sum, 2, -3), "sigma*H relation")?;
    let mut f_sum = vec![BigInt::from(0); 7];
    for k in 1..=5 {
        f_sum = add(&f_sum, l.cubic.class(&format!("L{k}")).ok_or("L")?, 1, 1);
    }
    ensure(f_sum == add(&pi_k, &e_sum, 3, -5), "sum F relation")?;
    let cert = divisor_relation_check(&l.cubic, &l.e, &l.rulings).map_err(|e| e.to_string())?;
    let bideg: BTreeSet<[i64; 2]> = cert.e_bidegrees.iter().copied().collect();
    ensure(
        bideg == BTreeSet::from([[2, 1], [1, 2]]),
        format!("bidegrees {:?}", cert.e_bidegrees),
    )
}

fn criterion_7(l: &Lattices) -> Outcome {
    let q = Surface::quadric();
    let fours = orbit_sets(&q, 4)?;
    let fives = orbit_sets(&q, 5)?;
    ensure(fours.len() == 1 && fours[0] == o_list(), "quadric length-4 orbit")?;
    ensure(
        fives.len() == 2 && fives.contains(&u_list()) && fives.contains(&w_list()),
        "quadric length-5 orbits",
    )?;
    for k in [u_points(), w_points()] {
        let gp = general_position_on_quadric(&k, &q).map_err(|e| e.to_string())?;
        ensure(gp.passed, "general position")?;
    }
    let o: Vec<ProjPoint> = o_list().into_iter().collect();
    let mut on_q = 0;
    for a in 0..4 {
        for b in a + 1..4 {
            let line = line_through(&o[a], &o[b]).map_err(|e| e.to_string())?;
            on_q += usize::from(line_in_surface(&line, q.form()));
        }
    }
    ensure(on_q == 4, format!("{on_q} pair-lines on Q"))?;
    let cert = ruling_blowup_check(&q, &o_points(), &u_points(), &g20(), &l.rulings).map_err(|e| e.to_string())?;
    ensure(cert.squares == [-2; 4], format!("squares {:?}", cert.squares))
}

fn criterion_8(l: &Lattices) -> Outcome {
    let cert = selfmap_degree(&u_points(), &w_points(), &g20(), &l.rulings).map_err(|e| e.to_string())?;
    ensure(cert.gram_rank == 12, "resolution rank")?;
    ensure(cert.assignments.iter().all(|a| a.pairing == 50), "pairing != 50")?;
    ensure(cert.identity_pairing == 5, "identity pairing != 5")?;
    ensure(cert.not_biregular, "biregular")
}

fn quadric_sample() -> Vec<ProjPoint> {
    let mut pts: Vec<ProjPoint> = o_list().into_iter().chain(u_list()).chain(w_list()).collect();
    let o: Vec<ProjPoint> = o_list().into_iter().collect();
    let q = Surface::quadric();
    for a in 0..4 {
        for b in a + 1..4 {
            let line = line_through(&o[a], &o[b]).unwrap();
            if line_in_surface(&line, q.form()) {
                pts.push(line.point_at(&int(1), &int(1)).unwrap());
                pts.push(line.point_at(&int(2), &int(-1)).unwrap());
            }
        }
    }
    pts
}

fn criterion_9() -> Outcome {
    let r = assemble_normalizer(&g20(), &u_points(), &w_points(), &quadric_sample()).map_err(|e| e.to_string())?;
    ensure(r.order == 40, format!("order {}", r.order))?;
    ensure(r.is_c2_times_g20(), "not C2 x G20")?;
    ensure(r.quadric_preserved, "quadric not preserved")?;
    let z = r.central_involution.ok_or("no involution")?;
    let image: BTreeSet<ProjPoint> = u_list().iter().map(|p| act_on_point(&z, p).unwrap()).collect();
    ensure(image == w_list(), "involution does not map K1 onto K2")
}

fn small_elem() -> impl Strategy<Value = FieldElement> {
    (proptest::collection::vec(-5i64..=5, 8), 1i64..=4).prop_map(|(c, d)| {
        let z = FieldElement::zeta();
        c.iter()
            .enumerate()
            .map(|(k, &a)| &int(a) * &z.pow(k as u32))
            .sum::<FieldElement>()
            .checked_div(&int(d))
            .unwrap()
    })
}

fn field_properties() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        ..Config::default()
    });
    runner
        .run(&(small_elem(), small_elem(), small_elem()), |(a, b, c)| {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a + &(-&a)).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
            Ok(())
        })
        .map_err(|e| format!("field axioms: {e}"))?;
    let units = prop::sample::select(vec![1i64, 3, 7, 9, 11, 13, 17, 19]);
    runner
        .run(&(small_elem(), small_elem(), units), |(a, b, k)| {
            let fa = a.galois_apply(k).unwrap();
            let fb = b.galois_apply(k).unwrap();
            prop_assert_eq!((&a * &b).galois_apply(k).unwrap(), &fa * &fb);
            prop_assert_eq!((&a + &b).galois_apply(k).unwrap(), &fa + &fb);
            Ok(())
        })
        .map_err(|e| format!("galois: {e}"))
}

fn orbit_stabilizer_everywhere() -> Outcome {
    let g: FiniteGroup = g20();
    for s in [Surface::clebsch(), Surface::quadric()] {
        let census = orbit_census(&s, &g, 8).map_err(|e| e.to_string())?;
        for orbit in census.orbits.values().flatten() {
            for p in &orbit.points {
                let (orb, stab) = orbit_and_stabilizer(&g, p);
                ensure(orb.len() * stab.order() == g.order(), "orbit-stabilizer")?;
                ensure(orb.len() == orbit.points.len(), "orbit size")?;
            }
        }
    }
    Ok(())
}

fn isometries(l: &Lattices) -> Outcome {
    let swaps = |x: &g20_links::groups::Permutation| l.rulings.swaps(x);
    let k1 = blowup_lattice("K1", &[("g", &u_points())], &g20(), &swaps).map_err(|e| e.to_string())?;
    let both = blowup_lattice("K1+K2", &[("g", &u_points()), ("h", &w_points())], &g20(), &swaps)
        .map_err(|e| e.to_string())?;
    for lat in [&l.cubic, &l.s5, &l.p1p1, &k1, &both] {
        let gram = &lat.lattice.gram;
        for p in g20().elements() {
            let m = lat.action(p);
            ensure(
                &m.transpose().mul(gram).mul(m) == gram,
                format!("{}: not an isometry", lat.name),
            )?;
            ensure(
                m.mul_vec(&lat.anticanonical) == lat.anticanonical,
                format!("{}: moves -K", lat.name),
            )?;
        }
    }
    Ok(())
}

fn deterministic_cli() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_g20-verify"))
            .args(["verify", "all", "--format", "json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run()?;
    let b = run()?;
    ensure(a.status.code() == Some(0), format!("exit {:?}", a.status.code()))?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, "outputs differ")?;
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    let checks = v["checks"].as_array().ok_or("no checks")?;
    ensure(checks.len() >= 15 && v["overall"] == "pass", "report incomplete")?;
    let bad = Command::new(env!("CARGO_BIN_EXE_g20-verify"))
        .args(["verify", "no-such-check"])
        .output();
    ensure(
        bad.map_err(|e| e.to_string())?.status.code() == Some(2),
        "unknown id exit code",
    )
}

fn criterion_10(l: &Lattices) -> Outcome {
    field_properties()?;
    orbit_stabilizer_everywhere()?;
    isometries(l)?;
    deterministic_cli()
}

fn main() {
    let lat = lattices();
    let with = |f: fn(&Lattices) -> Outcome| -> Outcome { lat.as_ref().map_err(Clone::clone).and_then(f) };
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "Clebsch orbit census below 8", criterion_1()),
        (2, "R4 fixed by C4 but off the cubic", criterion_2()),
        (3, "27 lines, incidence, L1..L5", criterion_3()),
        (4, "two maximal invariant skew families", criterion_4()),
        (5, "Picard rank, degree, invariant ranks", with(criterion_5)),
        (6, "divisor relations and bidegrees", with(criterion_6)),
        (7, "quadric census, general position, (-2)-rulings", with(criterion_7)),
        (8, "self-map pairing 50, identity 5", with(criterion_8)),
        (9, "normalizer of order 40", criterion_9()),
        (10, "property suites and deterministic CLI", with(criterion_10)),
    ];
    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(()) => println!("PASS criterion {n}: {name}"),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {n}: {name}: {e}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
