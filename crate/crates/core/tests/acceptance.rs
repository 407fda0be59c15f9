//! Acceptance suite: one PASS/FAIL line per criterion.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::sync::Arc;

use common::*;
use credal::betting::{booked_in_expectation, expectation_polynomial, expectation_under, fair_price_cents};
use credal::decision::{e_admissible, group_minimax, optimal_actions, pareto_optimal};
use credal::hull::hull_of;
use credal::inference::{
    belief_from_mass, check_conditional_independence, check_conditional_independence_weights, envelope,
    mobius_report,
};
use credal::lp::{hull_membership, HullMembership};
use credal::pooling::{
    independence_preserved, linear_pool, marginalization_commutes, nixon_experts, nixon_scenario,
};
use credal::tolerance::{approx_eq, PAPER};
use credal::{
    iid_coin, mixture, BetBook, Cents, Constraint, CredalSet, Distribution, Event, Extremum, Generator,
    IntervalDistribution, LinearSystem, MassFunction, OutcomeSpace, ParametricFamily, PoolingProblem,
    Relation, Side, Ticket, UtilityMatrix, Variable, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

const UTIL: [[f64; 3]; 3] = [[3.0, 3.0, 4.0], [2.5, 3.5, 5.0], [1.0, 5.0, 4.0]];

fn states() -> Arc<OutcomeSpace> {
    OutcomeSpace::from_atoms(["c1", "c2", "c3"]).unwrap()
}

fn matrix() -> UtilityMatrix {
    UtilityMatrix::new(
        &states(),
        vec!["a1", "a2", "a3"],
        UTIL.iter().map(|r| r.to_vec()).collect(),
    )
    .unwrap()
}

fn dist(p: &[f64]) -> Distribution {
    Distribution::new(&states(), p.to_vec()).unwrap()
}

fn names(idx: &[usize]) -> Vec<String> {
    idx.iter().map(|i| format!("a{}", i + 1)).collect()
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

fn e_admissibility() -> Outcome {
    let u = matrix();
    let p1 = [0.125, 0.75, 0.125];
    let p2 = [0.75, 0.125, 0.125];
    for (a, p, want) in [(1, p1, 3.5625), (2, p1, 4.375), (1, p2, 2.9375), (0, p2, 3.125)] {
        let got = u.expectations(&dist(&p)).map_err(err)?[a];
        ensure!(got == want, "eu(a{}, ·) = {got}, expected {want}", a + 1);
        ensure!(expected(&UTIL[a], &p) == want, "oracle disagrees at a{}", a + 1);
    }
    // Oracle for S: the union of each member's argmax.
    let mut oracle_s: Vec<usize> = [p1, p2]
        .iter()
        .flat_map(|p| argmax_set(&UTIL.map(|r| expected(&r, p)), 1e-12))
        .collect();
    oracle_s.sort();
    oracle_s.dedup();
    let s = CredalSet::vertices(vec![dist(&p1), dist(&p2)]).map_err(err)?;
    let got = sorted(
        e_admissible(&u, &s)
            .map_err(err)?
            .admissible()
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    ensure!(
        got == names(&oracle_s) && got == ["a1", "a3"],
        "E-admissible(S) = {got:?}"
    );

    // Oracle for the hull: scan the segment between the two members.
    let mut oracle_h: Vec<usize> = (0..=1024)
        .flat_map(|k| {
            let l = k as f64 / 1024.0;
            let p: Vec<f64> = (0..3).map(|i| l * p1[i] + (1.0 - l) * p2[i]).collect();
            argmax_set(&UTIL.map(|r| expected(&r, &p)), 1e-12)
        })
        .collect();
    oracle_h.sort();
    oracle_h.dedup();
    let hull: CredalSet = hull_of(&[dist(&p1), dist(&p2)]).map_err(err)?.into();
    let got = sorted(
        e_admissible(&u, &hull)
            .map_err(err)?
            .admissible()
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    ensure!(
        got == names(&oracle_h) && got == ["a1", "a2", "a3"],
        "E-admissible(conv S) = {got:?}"
    );
    Ok(())
}

fn group_decision() -> Outcome {
    let u = matrix();
    let g = [[0.125, 0.75, 0.125], [0.25, 0.5, 0.25], [0.375, 0.375, 0.25]];
    let members: Vec<Distribution> = g.iter().map(|p| dist(p)).collect();
    let gm = group_minimax(&u, &members).map_err(err)?;
    let (oracle, oracle_loss) = minimax_index(
        &UTIL.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
        &g.iter().map(|p| p.to_vec()).collect::<Vec<_>>(),
    );
    ensure!(
        gm.action == "a3" && gm.index == oracle,
        "group minimax {} (oracle a{})",
        gm.action,
        oracle + 1
    );
    for (a, b) in gm.max_loss.iter().zip(&oracle_loss) {
        ensure!((a - b).abs() <= 1e-9, "max loss {a} vs oracle {b}");
    }

    let mix: Vec<f64> = (0..3)
        .map(|i| g[0][i] / 8.0 + g[1][i] / 8.0 + 0.75 * g[2][i])
        .collect();
    let m = mixture(&[0.125, 0.125, 0.75], &members).map_err(err)?;
    ensure!(
        m.probs().iter().zip(&mix).all(|(a, b)| (a - b).abs() <= 1e-12),
        "mixture arithmetic"
    );
    let opt = optimal_actions(&m, &u).map_err(err)?;
    ensure!(
        opt == ["a2"] && names(&argmax_set(&UTIL.map(|r| expected(&r, &mix)), 1e-9)) == opt,
        "mixture optimum {opt:?}"
    );

    let pp = [1.0 / 3.0, 0.5, 1.0 / 6.0];
    // Oracle: barycentric coordinates of p' with respect to p1, p2, p3.
    let a: Vec<Vec<f64>> = vec![
        vec![g[0][0], g[1][0], g[2][0]],
        vec![g[0][1], g[1][1], g[2][1]],
        vec![1.0, 1.0, 1.0],
    ];
    let lambda = solve_square(a, vec![pp[0], pp[1], 1.0]).ok_or("degenerate group")?;
    let oracle_inside = lambda.iter().all(|l| *l >= -1e-9);
    let inside = hull_membership(&dist(&pp), &members).map_err(err)?.is_inside();
    ensure!(
        !inside && !oracle_inside,
        "p' in hull: engine {inside}, oracle {oracle_inside} ({lambda:?})"
    );
    let opt = optimal_actions(&dist(&pp), &u).map_err(err)?;
    ensure!(opt == ["a3"], "optimal for p' = {opt:?}");
    Ok(())
}

fn coin_book() -> BetBook {
    let s = OutcomeSpace::coin_tosses(2).unwrap();
    BetBook::new(vec![
        Ticket::new(
            Side::AgentBuys,
            Cents(1300),
            Cents(10000),
            Event::from_labels(&s, &["HH"]).unwrap(),
        )
        .unwrap(),
        Ticket::new(
            Side::AgentSells,
            Cents(2550),
            Cents(15000),
            Event::from_labels(&s, &["HT"]).unwrap(),
        )
        .unwrap(),
    ])
    .unwrap()
}

fn dutch_book() -> Outcome {
    let book = coin_book();
    // Oracle: antagonist nets by hand, expanded in p.
    let net = [-87.0 - 25.5, 13.0 + 124.5, 13.0 - 25.5, 13.0 - 25.5];
    let oracle = [
        net[3],
        net[1] + net[2] - 2.0 * net[3],
        net[0] - net[1] - net[2] + net[3],
    ];
    let poly = expectation_polynomial(&book, Generator::IidCoin { tosses: 2 }).map_err(err)?;
    ensure!(
        poly.coeffs() == oracle && oracle == [-12.5, 150.0, -250.0],
        "coefficients {:?}",
        poly.coeffs()
    );
    ensure!(
        (poly.eval(0.3) - 10.0).abs() <= 1e-12,
        "value at 0.3 = {}",
        poly.eval(0.3)
    );

    let disc = (oracle[1] * oracle[1] - 4.0 * oracle[2] * oracle[0]).sqrt();
    let mut roots = [
        (-oracle[1] + disc) / (2.0 * oracle[2]),
        (-oracle[1] - disc) / (2.0 * oracle[2]),
    ];
    roots.sort_by(f64::total_cmp);
    let fam: CredalSet = ParametricFamily::iid_coin(2, 0.1, 0.5).map_err(err)?.into();
    let a = booked_in_expectation(&book, &fam).map_err(err)?;
    let zeros: Vec<f64> = a.zeros.iter().map(|z| z.1).collect();
    ensure!(zeros.len() == 2, "zeros {zeros:?}");
    for (z, r) in zeros.iter().zip(roots) {
        ensure!(
            (z - r).abs() <= 1e-9 && (r == 0.1 || (r - 0.1).abs() < 1e-12 || (r - 0.5).abs() < 1e-12),
            "root {z} vs {r}"
        );
    }
    ensure!(a.verdict == Verdict::Booked, "verdict {}", a.verdict);

    let q = mixture(
        &[0.5, 0.5],
        &[iid_coin(0.1, 2).map_err(err)?, iid_coin(0.5, 2).map_err(err)?],
    )
    .map_err(err)?;
    for (got, want) in q.probs().iter().zip([0.13, 0.17, 0.17, 0.53]) {
        ensure!((got - want).abs() <= 1e-12, "q entry {got} vs {want}");
    }
    let e = expectation_under(&book, &q).map_err(err)?;
    ensure!(
        e.abs() <= 1e-9 && dot(&net, q.probs()).abs() <= 1e-9,
        "expectation under q = {e}"
    );
    let t = book.tickets();
    let fa = fair_price_cents(t[0].payout, &t[0].event, &q).map_err(err)?;
    let fb = fair_price_cents(t[1].payout, &t[1].event, &q).map_err(err)?;
    ensure!(
        fa == Cents(1300) && fb == Cents(2550),
        "fair prices {fa} and {fb}"
    );
    ensure!(
        (100.0f64 * 0.13 * 100.0).round() as i64 == 1300 && (150.0f64 * 0.17 * 100.0).round() as i64 == 2550,
        "oracle prices"
    );
    Ok(())
}

fn bounds_table() -> Outcome {
    let s = OutcomeSpace::coin_tosses(2).unwrap();
    let fam: CredalSet = ParametricFamily::iid_coin(2, 0.1, 0.5).map_err(err)?.into();
    let expect = [
        ("HH", 0.01, 0.25),
        ("HT", 0.09, 0.25),
        ("TH", 0.09, 0.25),
        ("TT", 0.25, 0.81),
    ];
    for (k, (atom, lo, hi)) in expect.into_iter().enumerate() {
        // Oracle: dense grid over p.
        let f = |p: f64| [p * p, p * (1.0 - p), (1.0 - p) * p, (1.0 - p) * (1.0 - p)][k];
        let grid: Vec<f64> = (0..=40000).map(|i| f(0.1 + 0.4 * i as f64 / 40000.0)).collect();
        let gmin = grid.iter().copied().fold(f64::INFINITY, f64::min);
        let gmax = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let env = envelope(&fam, &Event::from_labels(&s, &[atom]).map_err(err)?).map_err(err)?;
        ensure!(
            (env.lower - lo).abs() <= 1e-6 && (env.upper - hi).abs() <= 1e-6,
            "{atom}: [{}, {}]",
            env.lower,
            env.upper
        );
        ensure!(
            (gmin - lo).abs() <= 1e-6 && (gmax - hi).abs() <= 1e-6,
            "{atom}: grid oracle [{gmin}, {gmax}]"
        );
    }
    Ok(())
}

fn belief_gap() -> Outcome {
    let s = OutcomeSpace::from_atoms(["w1", "w2", "w3", "w4"]).unwrap();
    let iv = IntervalDistribution::new(&s, vec![0.15; 4], vec![0.40; 4]).map_err(err)?;
    let set = credal::interval_to_linear_system(&iv).map_err(err)?;
    let r = mobius_report(&set).map_err(err)?;
    // Oracle: the lower envelope of the box in closed form, then Möbius by
    // subset enumeration.
    let bel: Vec<f64> = (0..16u32)
        .map(|m| {
            let k = m.count_ones() as f64;
            if m == 0 {
                0.0
            } else {
                (0.15 * k).max(1.0 - 0.40 * (4.0 - k))
            }
        })
        .collect();
    for (mask, (a, b)) in r.belief.iter().zip(&bel).enumerate() {
        ensure!((a - b).abs() <= 1e-9, "Bel({mask:04b}) = {a}, oracle {b}");
    }
    ensure!(
        approx_eq(bel[1], 0.15, 1e-12) && approx_eq(bel[3], 0.30, 1e-12) && approx_eq(bel[7], 0.60, 1e-12),
        "oracle levels"
    );
    let m = mobius_by_subsets(&bel);
    ensure!((m[15] + 0.2).abs() <= 1e-9, "oracle m(W) = {}", m[15]);
    ensure!((r.mass[15] + 0.2).abs() <= 1e-9, "m(W) = {}", r.mass[15]);
    ensure!(!r.envelope_is_belief, "envelope reported as a belief function");
    Ok(())
}

fn die_nonconvex() -> Outcome {
    let s = OutcomeSpace::die();
    let sixth = 1.0 / 6.0;
    let a: Vec<f64> = vec![1.0 / 12.0, 3.0 / 12.0, sixth, sixth, sixth, sixth];
    let b: Vec<f64> = vec![3.0 / 12.0, 1.0 / 12.0, sixth, sixth, sixth, sixth];
    let one = Event::from_labels(&s, &["1"]).unwrap();
    let fam: CredalSet = ParametricFamily::die_bias(0.0).map_err(err)?.into();
    let env = envelope(&fam, &one).map_err(err)?;
    ensure!(
        (env.lower - a[0].min(b[0])).abs() <= 1e-12 && (env.upper - a[0].max(b[0])).abs() <= 1e-12,
        "envelope [{}, {}]",
        env.lower,
        env.upper
    );
    ensure!(
        (env.lower - 1.0 / 12.0).abs() <= 1e-12 && (env.upper - 0.25).abs() <= 1e-12,
        "envelope values"
    );

    let fair = Distribution::uniform(&s);
    let da = Distribution::new(&s, a.clone()).map_err(err)?;
    let db = Distribution::new(&s, b.clone()).map_err(err)?;
    match hull_membership(&fair, &[da.clone(), db.clone()]).map_err(err)? {
        HullMembership::Inside { weights } => {
            ensure!(
                (weights[0] - 0.5).abs() <= 1e-9 && (weights[1] - 0.5).abs() <= 1e-9,
                "weights {weights:?}"
            )
        }
        HullMembership::Outside { .. } => return Err("fair die outside the hull".into()),
    }
    ensure!(
        (0..6).all(|i| (0.5 * a[i] + 0.5 * b[i] - sixth).abs() <= 1e-15),
        "midpoint oracle"
    );
    ensure!(
        !fam.contains(&fair, 1e-9).map_err(err)?,
        "fair die in the two-point family"
    );
    let wide: CredalSet = ParametricFamily::die_bias(1.0 / 48.0).map_err(err)?.into();
    ensure!(
        !wide.contains(&fair, 1e-9).map_err(err)?,
        "fair die in the ε-family"
    );
    // Oracle: reaching p(1) = 1/6 needs |ε| = 1/12, outside [−1/48, 1/48].
    ensure!(sixth - 1.0 / 12.0 > 1.0 / 48.0, "branch oracle");

    let entries: Vec<(Vec<&str>, f64)> = vec![
        (vec!["1"], 1.0 / 12.0),
        (vec!["2"], 1.0 / 12.0),
        (vec!["1", "2"], sixth),
        (vec!["3"], sixth),
        (vec!["4"], sixth),
        (vec!["5"], sixth),
        (vec!["6"], sixth),
    ];
    let bel = belief_from_mass(&MassFunction::from_labeled(&s, &entries).map_err(err)?).map_err(err)?;
    let b1 = bel.of(&one).map_err(err)?;
    let b12 = bel
        .of(&Event::from_labels(&s, &["1", "2"]).unwrap())
        .map_err(err)?;
    let oracle12: f64 = entries[..3].iter().map(|e| e.1).sum();
    ensure!(b1 == 1.0 / 12.0, "Bel({{1}}) = {b1}");
    ensure!(
        (b12 - 1.0 / 3.0).abs() <= 1e-15 && (oracle12 - 1.0 / 3.0).abs() <= 1e-15,
        "Bel({{1,2}}) = {b12}"
    );
    Ok(())
}

fn xyz() -> Arc<OutcomeSpace> {
    OutcomeSpace::product(vec![
        Variable::new("X", &["x", "~x"]),
        Variable::new("Y", &["y", "~y"]),
        Variable::new("Z", &["z", "~z"]),
    ])
    .unwrap()
}

fn conditional_independence() -> Outcome {
    let s = xyz();
    // Printed columns; p sums to 0.98 and is used as raw weights.
    let p = [0.1, 0.1, 0.03, 0.06, 0.1, 0.1, 0.16, 0.33];
    let pp = [0.05, 0.05, 0.1, 0.1, 0.15, 0.15, 0.2, 0.2];
    let q: Vec<f64> = p.iter().zip(&pp).map(|(a, b)| 0.5 * a + 0.5 * b).collect();

    let r = check_conditional_independence(
        &Distribution::new(&s, pp.to_vec()).map_err(err)?,
        "X",
        "Z",
        "Y",
        1e-9,
    )
    .map_err(err)?;
    ensure!(r.passed, "p' fails with violation {}", r.max_violation);
    // Oracle on p': x ⫫ z within each y slice, by hand (index = 4x + 2y + z).
    for y in 0..2 {
        let w = |x: usize, z: usize| pp[4 * x + 2 * y + z];
        let py: f64 = (0..2)
            .flat_map(|x| (0..2).map(move |z| (x, z)))
            .map(|(x, z)| w(x, z))
            .sum();
        for x in 0..2 {
            for z in 0..2 {
                let f = (w(x, 0) + w(x, 1)) * (w(0, z) + w(1, z)) / py;
                ensure!((w(x, z) - f).abs() <= 1e-12, "oracle: p' not CI at ({x},{y},{z})");
            }
        }
    }

    let r = check_conditional_independence_weights(&s, &q, "X", "Z", "Y", 1e-9).map_err(err)?;
    ensure!(!r.passed, "q passes");
    let worst = r.worst.as_ref().ok_or("no cells")?;
    ensure!(worst.cell == ["x", "~y", "z"], "worst cell {:?}", worst.cell);
    // Oracle arithmetic for the cell.
    let joint = (0.03 + 0.1) / 2.0;
    let qxy = (0.03 + 0.06 + 0.1 + 0.1) / 2.0;
    let qyz = (0.03 + 0.16 + 0.1 + 0.2) / 2.0;
    let qy = (0.03 + 0.06 + 0.16 + 0.33 + 0.1 + 0.1 + 0.2 + 0.2) / 2.0;
    ensure!(
        (worst.joint - joint).abs() <= 1e-12 && (joint - 0.065f64).abs() <= 1e-12,
        "q(x~yz) = {}",
        worst.joint
    );
    ensure!(
        (worst.factorized - qxy * qyz / qy).abs() <= 1e-12,
        "factorized {}",
        worst.factorized
    );
    ensure!(
        approx_eq(worst.joint, 0.06, PAPER),
        "printed 0.06 vs {}",
        worst.joint
    );
    ensure!(
        approx_eq(worst.factorized, 0.0625, PAPER),
        "printed 0.0625 vs {}",
        worst.factorized
    );
    ensure!(
        (worst.joint - worst.factorized).abs() > PAPER / 10.0,
        "inequality not visible"
    );
    println!(
        "    q(x,~y,z) = {} vs {:.6} (printed 0.06 vs 0.0625)",
        worst.joint, worst.factorized
    );
    Ok(())
}

fn random_dist(rng: &mut impl Rng, space: &Arc<OutcomeSpace>) -> Distribution {
    let w: Vec<f64> = (0..space.len()).map(|_| rng.gen_range(0.01..1.0)).collect();
    let t: f64 = w.iter().sum();
    Distribution::new(space, w.iter().map(|x| x / t).collect()).unwrap()
}

fn pooling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..200 {
        let nvars = rng.gen_range(2..=3);
        let vars: Vec<Variable> = (0..nvars)
            .map(|i| {
                let k = rng.gen_range(2..=3);
                let vals: Vec<String> = (0..k).map(|v| format!("{i}{v}")).collect();
                Variable::new(
                    format!("V{i}"),
                    &vals.iter().map(String::as_str).collect::<Vec<_>>(),
                )
            })
            .collect();
        let space = OutcomeSpace::product(vars).unwrap();
        let k = rng.gen_range(2..=4);
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0)).collect();
        let t: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|x| x / t).collect();
        let experts: Vec<(String, Distribution)> = (0..k)
            .map(|i| (format!("e{i}"), random_dist(&mut rng, &space)))
            .collect();
        let prob = PoolingProblem::new(experts.clone(), w.clone()).map_err(err)?;
        let keep = ["V0"];
        let c = marginalization_commutes(&prob, &keep).map_err(err)?;
        ensure!(c.deviation <= 1e-12, "case {case}: deviation {}", c.deviation);
        // Oracle: pool the marginals by hand.
        let margs: Vec<Distribution> = experts
            .iter()
            .map(|(_, d)| d.marginalize(&keep).unwrap())
            .collect();
        let pooled = linear_pool(&prob).map_err(err)?.marginalize(&keep).map_err(err)?;
        for i in 0..pooled.probs().len() {
            let by_hand: f64 = margs.iter().zip(&w).map(|(m, wi)| wi * m.get(i)).sum();
            ensure!(
                (by_hand - pooled.get(i)).abs() <= 1e-12,
                "case {case}: oracle mismatch"
            );
        }
    }

    let r = nixon_scenario([1.0, 0.0]).map_err(err)?;
    let (p, _) = nixon_experts();
    ensure!(
        r.pooled_joint.probs() == p.probs(),
        "pooled {:?}",
        r.pooled_joint.probs()
    );

    let s = OutcomeSpace::coin_tosses(2).unwrap();
    let prob = PoolingProblem::equal_weights(vec![
        ("a".into(), iid_coin(0.1, 2).map_err(err)?),
        ("b".into(), iid_coin(0.5, 2).map_err(err)?),
    ])
    .map_err(err)?;
    let r = independence_preserved(&prob, "toss1", "toss2", None, 1e-9).map_err(err)?;
    ensure!(!r.preserved(), "independence preserved");
    // Oracle: P(HH) = 0.13 but P(H·)P(·H) = 0.3² = 0.09.
    let hh = r
        .pooled
        .prob(&Event::from_labels(&s, &["HH"]).unwrap())
        .map_err(err)?;
    ensure!(
        (hh - 0.13).abs() <= 1e-12 && (0.13f64 - 0.09).abs() > 1e-9,
        "pooled HH {hh}"
    );
    Ok(())
}

fn random_matrix(rng: &mut impl Rng, actions: usize, n: usize) -> Vec<Vec<f64>> {
    (0..actions)
        .map(|_| (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect())
        .collect()
}

fn utility(space: &Arc<OutcomeSpace>, rows: &[Vec<f64>]) -> UtilityMatrix {
    let names: Vec<String> = (0..rows.len()).map(|a| format!("a{}", a + 1)).collect();
    UtilityMatrix::new(space, names, rows.to_vec()).unwrap()
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    // (a) group minimax ⇒ Pareto-optimal.
    for case in 0..500 {
        let n = rng.gen_range(2..=5);
        let space = OutcomeSpace::from_atoms((0..n).map(|i| format!("s{i}"))).unwrap();
        let actions = rng.gen_range(2..=5);
        let rows = random_matrix(&mut rng, actions, n);
        let members: Vec<Distribution> = (0..rng.gen_range(1..=4))
            .map(|_| random_dist(&mut rng, &space))
            .collect();
        let u = utility(&space, &rows);
        let gm = group_minimax(&u, &members).map_err(err)?;
        let pareto = pareto_optimal(&u, &members).map_err(err)?;
        let m: Vec<Vec<f64>> = members.iter().map(|d| d.probs().to_vec()).collect();
        ensure!(
            pareto.optimal[gm.index],
            "(a) case {case}: minimax action not Pareto-optimal"
        );
        ensure!(
            !dominated(&rows, &m, gm.index, 1e-8),
            "(a) case {case}: oracle finds domination"
        );
    }

    // (b) E-admissible(S) ⊆ E-admissible(conv S).
    let space = states();
    for case in 0..200 {
        let actions = rng.gen_range(2..=4);
        let rows = random_matrix(&mut rng, actions, 3);
        let members: Vec<Distribution> = (0..rng.gen_range(2..=4))
            .map(|_| random_dist(&mut rng, &space))
            .collect();
        let u = utility(&space, &rows);
        let s = e_admissible(&u, &CredalSet::vertices(members.clone()).map_err(err)?).map_err(err)?;
        let h = e_admissible(&u, &CredalSet::Linear(hull_of(&members).map_err(err)?)).map_err(err)?;
        let ha = h.admissible();
        for a in s.admissible() {
            ensure!(ha.contains(&a), "(b) case {case}: {a} admissible for S only");
        }
    }

    // (c) simplex optimum vs vertex enumeration.
    for case in 0..100 {
        let n = rng.gen_range(2..=6);
        let space = OutcomeSpace::from_atoms((0..n).map(|i| format!("s{i}"))).unwrap();
        let center = random_dist(&mut rng, &space);
        let cons: Vec<Constraint> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let at = dot(&a, center.probs());
                if rng.gen_bool(0.5) {
                    Constraint::new(a, Relation::Le, at + rng.gen_range(0.0..0.3))
                } else {
                    Constraint::new(a, Relation::Ge, at - rng.gen_range(0.0..0.3))
                }
            })
            .collect();
        let sys = LinearSystem::new(&space, cons.clone()).map_err(err)?;
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let verts = polytope_vertices(n, &cons);
        ensure!(!verts.is_empty(), "(c) case {case}: oracle found no vertices");
        for ext in [Extremum::Max, Extremum::Min] {
            let (v, _) = sys.optimize(&c, ext).map_err(err)?;
            let vals = verts.iter().map(|p| dot(&c, p));
            let oracle = match ext {
                Extremum::Max => vals.fold(f64::NEG_INFINITY, f64::max),
                Extremum::Min => vals.fold(f64::INFINITY, f64::min),
            };
            ensure!(
                (v - oracle).abs() <= 1e-8,
                "(c) case {case}: simplex {v} vs enumeration {oracle}"
            );
        }
    }

    // (d) expectation polynomial ≡ expectation under iid_coin.
    let coin = OutcomeSpace::coin_tosses(2).unwrap();
    for case in 0..100 {
        let tickets: Vec<Ticket> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let payout = rng.gen_range(0..50000);
                let price = rng.gen_range(0..=payout);
                let atoms: Vec<usize> = (0..4).filter(|_| rng.gen_bool(0.5)).collect();
                let side = if rng.gen_bool(0.5) {
                    Side::AgentBuys
                } else {
                    Side::AgentSells
                };
                Ticket::new(
                    side,
                    Cents(price),
                    Cents(payout),
                    Event::new(&coin, &atoms).unwrap(),
                )
                .unwrap()
            })
            .collect();
        let book = BetBook::new(tickets).map_err(err)?;
        let poly = expectation_polynomial(&book, Generator::IidCoin { tosses: 2 }).map_err(err)?;
        let p: f64 = rng.gen_range(0.0..=1.0);
        let direct = expectation_under(&book, &iid_coin(p, 2).map_err(err)?).map_err(err)?;
        ensure!(
            (poly.eval(p) - direct).abs() <= 1e-10,
            "(d) case {case}: {} vs {direct}",
            poly.eval(p)
        );
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 E-admissibility of a set vs its hull", e_admissibility),
        ("2 group minimax outside the hull", group_decision),
        ("3 Dutch book in expectation", dutch_book),
        ("4 coin family bounds table", bounds_table),
        ("5 belief gap of the 0.15-0.40 box", belief_gap),
        ("6 nonconvex die biases", die_nonconvex),
        (
            "7 conditional independence lost by mixing",
            conditional_independence,
        ),
        ("8 pooling properties", pooling),
        ("9 property suites", property_suites),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = std::time::Instant::now();
        match run() {
            Ok(()) => println!("PASS criterion {name} ({:.0?})", start.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name}: {e}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
