//! Replayable worked examples with expected values.
//!
//! Printed values (rounded in their source tables) are compared at
//! `tolerance::PAPER`; values obtained by exact arithmetic at [`EXACT`].

use std::fmt::Write;

use credal::betting::{
    booked_in_expectation, expectation_polynomial, expectation_under, fair_price_cents, payoff_table,
};
use credal::decision::{e_admissible, group_minimax, optimal_actions, pareto_optimal};
use credal::hull::hull_of;
use credal::inference::{
    belief_from_mass, check_conditional_independence, check_conditional_independence_weights, envelope,
    mobius_report,
};
use credal::lp::{hull_membership, HullMembership};
use credal::pooling::{marginalization_commutes, nixon_scenario, PoolingProblem};
use credal::{
    iid_coin, mixture, tolerance, BetBook, Cents, CredalSet, Distribution, Event, Generator,
    IntervalDistribution, MassFunction, OutcomeSpace, ParametricFamily, Result, Side, Ticket, UtilityMatrix,
    Variable,
};
use serde::Serialize;

use crate::render;

pub const EXACT: f64 = 1e-9;
pub const PRINTED: f64 = tolerance::PAPER;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Num(f64),
    Flag(bool),
    Names(Vec<String>),
    Text(String),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Num(x) if *x != 0.0 && x.abs() < 1e-6 => write!(f, "{x:e}"),
            Value::Num(x) => write!(f, "{x}"),
            Value::Flag(b) => write!(f, "{b}"),
            Value::Names(n) => f.write_str(&render::names(n)),
            Value::Text(t) => f.write_str(t),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub label: String,
    pub expected: Value,
    pub actual: Value,
    pub tolerance: f64,
}

impl Check {
    /// Numeric checks use `tol` in place of their own tolerance when given.
    pub fn passed(&self, tol: Option<f64>) -> bool {
        match (&self.expected, &self.actual) {
            (Value::Num(e), Value::Num(a)) => tolerance::approx_eq(*a, *e, tol.unwrap_or(self.tolerance)),
            (e, a) => e == a,
        }
    }
}

#[derive(Debug, Default)]
pub struct CaseRun {
    pub checks: Vec<Check>,
    /// Tables and remarks printed before the checks.
    pub notes: String,
}

impl CaseRun {
    fn num(&mut self, label: &str, expected: f64, actual: f64, tol: f64) {
        self.push(label, Value::Num(expected), Value::Num(actual), tol);
    }

    fn flag(&mut self, label: &str, expected: bool, actual: bool) {
        self.push(label, Value::Flag(expected), Value::Flag(actual), 0.0);
    }

    fn names<S: AsRef<str>>(&mut self, label: &str, expected: &[&str], actual: &[S]) {
        let mut e: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        let mut a: Vec<String> = actual.iter().map(|s| s.as_ref().to_string()).collect();
        e.sort();
        a.sort();
        self.push(label, Value::Names(e), Value::Names(a), 0.0);
    }

    fn text(&mut self, label: &str, expected: &str, actual: String) {
        self.push(label, Value::Text(expected.into()), Value::Text(actual), 0.0);
    }

    fn push(&mut self, label: &str, expected: Value, actual: Value, tolerance: f64) {
        self.checks.push(Check {
            label: label.into(),
            expected,
            actual,
            tolerance,
        });
    }
}

pub struct Case {
    pub name: &'static str,
    pub description: &'static str,
    pub run: fn() -> Result<CaseRun>,
}

pub fn registry() -> Vec<Case> {
    vec![
        Case {
            name: "die-nonconvex",
            description: "Two biased-die hypotheses: envelope, hull membership of the fair die, closest mass function",
            run: die_nonconvex,
        },
        Case {
            name: "ci-nonconvex",
            description: "Mixing two conditionally independent joints over X, Y, Z breaks the independence",
            run: ci_nonconvex,
        },
        Case {
            name: "belief-gap",
            description: "Lower envelope of 0.15 <= p(w) <= 0.40 on four atoms is not a belief function",
            run: belief_gap,
        },
        Case {
            name: "coin-dutch-book",
            description: "Two fair-looking bets on a pair of tosses, booked in expectation over iid coins with p in [0.1, 0.5]",
            run: coin_dutch_book,
        },
        Case {
            name: "hull-admissibility",
            description: "An action E-admissible for the convex hull but not for the two-point set",
            run: hull_admissibility,
        },
        Case {
            name: "group-minimax",
            description: "Group minimax picks an action that no mixture of member opinions selects",
            run: group_minimax_case,
        },
        Case {
            name: "nixon-pool",
            description: "Linear pooling of two joints; residence marginals discard the reliability signal",
            run: nixon_pool,
        },
    ]
}

pub fn find(name: &str) -> Option<Case> {
    registry().into_iter().find(|c| c.name == name)
}

pub fn die_points() -> (Distribution, Distribution) {
    let s = OutcomeSpace::die();
    let sixth = 1.0 / 6.0;
    let a = Distribution::new(&s, vec![1.0 / 12.0, 3.0 / 12.0, sixth, sixth, sixth, sixth]).expect("valid");
    let b = Distribution::new(&s, vec![3.0 / 12.0, 1.0 / 12.0, sixth, sixth, sixth, sixth]).expect("valid");
    (a, b)
}

fn die_nonconvex() -> Result<CaseRun> {
    let mut run = CaseRun::default();
    let s = OutcomeSpace::die();
    let (a, b) = die_points();
    let one = Event::from_labels(&s, &["1"])?;

    let fam: CredalSet = ParametricFamily::die_bias(0.0)?.into();
    let env = envelope(&fam, &one)?;
    run.num("lower p({1})", 1.0 / 12.0, env.lower, EXACT);
    run.num("upper p({1})", 3.0 / 12.0, env.upper, EXACT);

    let fair = Distribution::uniform(&s);
    match hull_membership(&fair, &[a.clone(), b.clone()])? {
        HullMembership::Inside { weights } => {
            run.flag("fair die in hull", true, true);
            run.num("hull weight on first point", 0.5, weights[0], EXACT);
            run.num("hull weight on second point", 0.5, weights[1], EXACT);
        }
        HullMembership::Outside { .. } => run.flag("fair die in hull", true, false),
    }
    run.flag(
        "fair die in the two-point set",
        false,
        fam.contains(&fair, EXACT)?,
    );
    let wide: CredalSet = ParametricFamily::die_bias(1.0 / 48.0)?.into();
    run.flag("fair die in the ε-family", false, wide.contains(&fair, EXACT)?);

    let m = MassFunction::from_labeled(
        &s,
        &[
            (vec!["1"], 1.0 / 12.0),
            (vec!["2"], 1.0 / 12.0),
            (vec!["1", "2"], 1.0 / 6.0),
            (vec!["3"], 1.0 / 6.0),
            (vec!["4"], 1.0 / 6.0),
            (vec!["5"], 1.0 / 6.0),
            (vec!["6"], 1.0 / 6.0),
        ],
    )?;
    let bel = belief_from_mass(&m)?;
    run.num("Bel({1})", 1.0 / 12.0, bel.of(&one)?, EXACT);
    run.num(
        "Bel({1,2})",
        1.0 / 3.0,
        bel.of(&Event::from_labels(&s, &["1", "2"])?)?,
        EXACT,
    );

    let report = mobius_report(&CredalSet::vertices(vec![a.clone(), b.clone()])?)?;
    run.flag(
        "envelope of the two points is a belief function",
        true,
        report.envelope_is_belief,
    );
    run.flag(
        "hull equals the core",
        true,
        report.hull_equals_core == Some(true),
    );
    run.flag("two-point set equals the core", false, report.set_equals_core);

    run.notes = render::distributions(&[("favor 2", &a), ("favor 1", &b), ("fair", &fair)]);
    Ok(run)
}

pub fn xyz_space() -> std::sync::Arc<OutcomeSpace> {
    OutcomeSpace::product(vec![
        Variable::new("X", &["x", "~x"]),
        Variable::new("Y", &["y", "~y"]),
        Variable::new("Z", &["z", "~z"]),
    ])
    .expect("valid product space")
}

/// `p_XYZ` and `p'_XYZ` as printed. The printed `p_XYZ` column sums to
/// 0.98, so it is kept as raw weights rather than a distribution.
pub fn xyz_columns() -> (Vec<f64>, Distribution) {
    let p = vec![0.1, 0.1, 0.03, 0.06, 0.1, 0.1, 0.16, 0.33];
    let pp =
        Distribution::new(&xyz_space(), vec![0.05, 0.05, 0.1, 0.1, 0.15, 0.15, 0.2, 0.2]).expect("valid");
    (p, pp)
}

fn ci_nonconvex() -> Result<CaseRun> {
    let mut run = CaseRun::default();
    let s = xyz_space();
    let (p, pp) = xyz_columns();
    let q: Vec<f64> = p.iter().zip(pp.probs()).map(|(a, b)| 0.5 * a + 0.5 * b).collect();

    let r = check_conditional_independence(&pp, "X", "Z", "Y", EXACT)?;
    run.flag("p' has X ⫫ Z | Y", true, r.passed);
    let r = check_conditional_independence_weights(&s, &p, "X", "Z", "Y", PRINTED)?;
    run.flag("p has X ⫫ Z | Y up to rounding", true, r.passed);
    let r = check_conditional_independence_weights(&s, &p, "X", "Z", "Y", EXACT)?;
    run.flag("p has X ⫫ Z | Y exactly", false, r.passed);

    let r = check_conditional_independence_weights(&s, &q, "X", "Z", "Y", EXACT)?;
    run.flag("q has X ⫫ Z | Y", false, r.passed);
    let cell = r.cell(&["x", "~y", "z"]).expect("cell exists");
    let worst = r.worst.as_ref().map(|w| w.cell.join(",")).unwrap_or_default();
    run.text("violated cell", "x,~y,z", worst);
    run.num("q(x ~y z)", 0.065, cell.joint, EXACT);
    run.num(
        "q(x ~y) q(~y z) / q(~y)",
        0.145 * 0.245 / 0.59,
        cell.factorized,
        EXACT,
    );
    run.num("q(x ~y z) as printed", 0.06, cell.joint, PRINTED);
    run.num(
        "q(x ~y) q(~y z) / q(~y) as printed",
        0.0625,
        cell.factorized,
        PRINTED,
    );

    let xy = IntervalDistribution::new(
        &OutcomeSpace::product(vec![
            Variable::new("X", &["x", "~x"]),
            Variable::new("Y", &["y", "~y"]),
        ])?,
        vec![0.0, 0.1, 0.2, 0.3],
        vec![0.2, 0.3, 0.4, 0.5],
    )?;
    let yz = IntervalDistribution::new(
        &OutcomeSpace::product(vec![
            Variable::new("Y", &["y", "~y"]),
            Variable::new("Z", &["z", "~z"]),
        ])?,
        vec![0.0, 0.1, 0.2, 0.3],
        vec![0.2, 0.3, 0.4, 0.5],
    )?;
    let ok = xy.contains(&pp.marginalize(&["X", "Y"])?.rebase(xy.space())?, EXACT)
        && yz.contains(&pp.marginalize(&["Y", "Z"])?.rebase(yz.space())?, EXACT);
    run.flag("p' marginals within the interval tables", true, ok);

    let rows: Vec<Vec<String>> = (0..s.len())
        .map(|i| {
            vec![
                s.atom(i).to_string(),
                render::num(p[i]),
                render::num(pp.get(i)),
                render::num(q[i]),
            ]
        })
        .collect();
    run.notes = render::table(&["atom".into(), "p".into(), "p'".into(), "q".into()], &rows);
    run.notes += "p as printed sums to 0.98; q is the exact average of the printed columns\n";
    Ok(run)
}

fn belief_gap() -> Result<CaseRun> {
    let mut run = CaseRun::default();
    let s = OutcomeSpace::from_atoms(["w1", "w2", "w3", "w4"])?;
    let set =
        credal::interval_to_linear_system(&IntervalDistribution::new(&s, vec![0.15; 4], vec![0.40; 4])?)?;
    let env = envelope(&set, &Event::from_labels(&s, &["w1"])?)?;
    run.num("lower p({w1})", 0.15, env.lower, EXACT);
    run.num("upper p({w1})", 0.40, env.upper, EXACT);
    let r = mobius_report(&set)?;
    let ev = |l: &[&str]| Event::from_labels(&s, l);
    run.num("Bel(singleton)", 0.15, r.belief_of(&ev(&["w1"])?), EXACT);
    run.num("Bel(pair)", 0.30, r.belief_of(&ev(&["w1", "w2"])?), EXACT);
    run.num("Bel(triple)", 0.60, r.belief_of(&ev(&["w1", "w2", "w3"])?), EXACT);
    run.num("m(W)", -0.2, r.mass_of(&Event::full(&s)), EXACT);
    run.flag("lower envelope is a belief function", false, r.envelope_is_belief);

    let mut rows = Vec::new();
    for k in 1..=4usize {
        let e = Event::new(&s, &(0..k).collect::<Vec<_>>())?;
        rows.push(vec![
            format!("|A| = {k}"),
            render::num(r.belief_of(&e)),
            render::num(r.mass_of(&e)),
        ]);
    }
    run.notes = render::table(&["subset".into(), "Bel".into(), "m".into()], &rows);
    Ok(run)
}

/// Ticket (a): the agent buys $100 on HH for $13. Ticket (b): the agent
/// sells $150 on HT for $25.50.
pub fn coin_book() -> BetBook {
    let s = OutcomeSpace::coin_tosses(2).expect("valid");
    let hh = Event::from_labels(&s, &["HH"]).expect("atom");
    let ht = Event::from_labels(&s, &["HT"]).expect("atom");
    BetBook::new(vec![
        Ticket::new(Side::AgentBuys, Cents(1300), Cents(10000), hh).expect("valid"),
        Ticket::new(Side::AgentSells, Cents(2550), Cents(15000), ht).expect("valid"),
    ])
    .expect("valid")
}

fn coin_dutch_book() -> Result<CaseRun> {
    let mut run = CaseRun::default();
    let s = OutcomeSpace::coin_tosses(2)?;
    let fam: CredalSet = ParametricFamily::iid_coin(2, 0.1, 0.5)?.into();

    let bounds = [
        ("HH", 0.01, 0.25),
        ("HT", 0.09, 0.25),
        ("TH", 0.09, 0.25),
        ("TT", 0.25, 0.81),
    ];
    for (atom, lo, hi) in bounds {
        let env = envelope(&fam, &Event::from_labels(&s, &[atom])?)?;
        run.num(&format!("lower p({atom})"), lo, env.lower, 1e-6);
        run.num(&format!("upper p({atom})"), hi, env.upper, 1e-6);
    }

    let p1 = iid_coin(0.1, 2)?;
    let p2 = iid_coin(0.5, 2)?;
    let q = mixture(&[0.5, 0.5], &[p1.clone(), p2.clone()])?;
    for (atom, v) in [("HH", 0.13), ("HT", 0.17), ("TH", 0.17), ("TT", 0.53)] {
        run.num(
            &format!("q({atom})"),
            v,
            q.prob(&Event::from_labels(&s, &[atom])?)?,
            EXACT,
        );
    }
    run.flag("q in the coin family", false, fam.contains(&q, EXACT)?);

    let book = coin_book();
    let t = &book.tickets();
    run.num(
        "fair price of (a), cents",
        1300.0,
        fair_price_cents(t[0].payout, &t[0].event, &q)?.0 as f64,
        0.0,
    );
    run.num(
        "fair price of (b), cents",
        2550.0,
        fair_price_cents(t[1].payout, &t[1].event, &q)?.0 as f64,
        0.0,
    );
    run.num(
        "antagonist expectation under q",
        0.0,
        expectation_under(&book, &q)?,
        EXACT,
    );

    let poly = expectation_polynomial(&book, Generator::IidCoin { tosses: 2 })?;
    let c = poly.coeffs();
    run.num("polynomial constant", -12.5, c[0], 0.0);
    run.num("polynomial p coefficient", 150.0, c[1], 0.0);
    run.num(
        "polynomial p^2 coefficient",
        -250.0,
        c.get(2).copied().unwrap_or(0.0),
        0.0,
    );
    run.num("antagonist expectation at p = 0.3", 10.0, poly.eval(0.3), EXACT);

    let a = booked_in_expectation(&book, &fam)?;
    run.text("verdict", "BOOKED", a.verdict.to_string());
    let zeros: Vec<f64> = a.zeros.iter().map(|z| z.1).collect();
    run.num("number of zeros", 2.0, zeros.len() as f64, 0.0);
    if zeros.len() == 2 {
        run.num("first zero", 0.1, zeros[0], EXACT);
        run.num("second zero", 0.5, zeros[1], EXACT);
    }
    run.num("agent's largest expectation", 0.0, a.max_agent, EXACT);

    // Prices fair under an independent q' leave the antagonist nothing.
    let qp = iid_coin(0.3, 2)?;
    let fair = BetBook::new(
        t.iter()
            .map(|x| {
                Ticket::new(
                    x.side,
                    fair_price_cents(x.payout, &x.event, &qp)?,
                    x.payout,
                    x.event.clone(),
                )
            })
            .collect::<Result<_>>()?,
    )?;
    run.num(
        "expectation of the book repriced under iid(0.3)",
        0.0,
        expectation_under(&fair, &qp)?,
        EXACT,
    );

    let table = payoff_table(&book);
    let mut rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .zip(["(a)", "(b)"])
        .map(|(r, n)| {
            std::iter::once(n.to_string())
                .chain(r.iter().map(|c| c.to_string()))
                .collect()
        })
        .collect();
    rows.push(
        std::iter::once("net".to_string())
            .chain(table.net.iter().map(|c| c.to_string()))
            .collect(),
    );
    let mut header = vec!["ticket".to_string()];
    header.extend(s.atoms().iter().cloned());
    run.notes = render::table(&header, &rows);
    let _ = writeln!(run.notes, "antagonist expectation: {poly}");
    Ok(run)
}

pub fn decision_matrix() -> UtilityMatrix {
    let s = OutcomeSpace::from_atoms(["c1", "c2", "c3"]).expect("valid");
    UtilityMatrix::new(
        &s,
        vec!["a1", "a2", "a3"],
        vec![vec![3.0, 3.0, 4.0], vec![2.5, 3.5, 5.0], vec![1.0, 5.0, 4.0]],
    )
    .expect("valid")
}

fn states(p: [f64; 3]) -> Distribution {
    Distribution::new(decision_matrix().space(), p.to_vec()).expect("valid")
}

fn hull_admissibility() -> Result<CaseRun> {
    let mut run = CaseRun::default();
    let u = decision_matrix();
    let p1 = states([0.125, 0.75, 0.125]);
    let p2 = states([0.75, 0.125, 0.125]);
    let eu = |a: usize, p: &Distribution| u.expectations(p).map(|v| v[a]);
    run.num("eu(a2, p1)", 3.5625, eu(1, &p1)?, 0.0);
    run.num("eu(a3, p1)", 4.375, eu(2, &p1)?, 0.0);
    run.num("eu(a2, p2)", 2.9375, eu(1, &p2)?, 0.0);
    run.num("eu(a1, p2)", 3.125, eu(0, &p2)?, 0.0);

    let s = CredalSet::vertices(vec![p1.clone(), p2.clone()])?;
    run.names(
        "E-admissible for S",
        &["a1", "a3"],
        &e_admissible(&u, &s)?.admissible(),
    );
    let hull: CredalSet = hull_of(&[p1.clone(), p2.clone()])?.into();
    let report = e_admissible(&u, &hull)?;
    run.names(
        "E-admissible for conv(S)",
        &["a1", "a2", "a3"],
        &report.admissible(),
    );
    let mid = mixture(&[0.5, 0.5], &[p1, p2])?;
    run.names("optimal for the midpoint", &["a2"], &optimal_actions(&mid, &u)?);

    let rows: Vec<Vec<String>> = report
        .actions
        .iter()
        .map(|a| {
            vec![
                a.action.clone(),
                a.admissible.to_string(),
                a.witness
                    .as_ref()
                    .map(|w| {
                        w.probs()
                            .iter()
                            .map(|x| render::num(*x))
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .unwrap_or_else(|| "-".into()),
            ]
        })
        .collect();
    run.notes = render::table(
        &["action".into(), "admissible (hull)".into(), "witness".into()],
        &rows,
    );
    Ok(run)
}

fn group_minimax_case() -> Result<CaseRun> {
    let mut run = CaseRun::default();
    let u = decision_matrix();
    let g = [
        states([0.125, 0.75, 0.125]),
        states([0.25, 0.5, 0.25]),
        states([0.375, 0.375, 0.25]),
    ];
    for (i, best) in [["a3"], ["a3"], ["a2"]].iter().enumerate() {
        run.names(
            &format!("optimal for p{}", i + 1),
            best,
            &optimal_actions(&g[i], &u)?,
        );
    }
    let gm = group_minimax(&u, &g)?;
    run.text("group minimax", "a3", gm.action.clone());
    run.num("max loss a1", 1.25, gm.max_loss[0], EXACT);
    run.num("max loss a2", 0.8125, gm.max_loss[1], EXACT);
    run.num("max loss a3", 0.25, gm.max_loss[2], EXACT);

    let mix = mixture(&[0.125, 0.125, 0.75], &g)?;
    run.names(
        "optimal for 1/8 p1 + 1/8 p2 + 3/4 p3",
        &["a2"],
        &optimal_actions(&mix, &u)?,
    );
    let outside = states([1.0 / 3.0, 0.5, 1.0 / 6.0]);
    run.flag(
        "p' in conv(p1, p2, p3)",
        false,
        hull_membership(&outside, &g)?.is_inside(),
    );
    run.names("optimal for p'", &["a3"], &optimal_actions(&outside, &u)?);

    let pareto = pareto_optimal(&u, &g)?;
    run.flag("a2 Pareto-optimal", true, pareto.optimal[1]);
    run.flag("a3 Pareto-optimal", true, pareto.optimal[2]);

    let rows: Vec<Vec<String>> = (0..u.len())
        .map(|a| {
            let mut r = vec![u.actions()[a].clone()];
            r.extend(gm.loss[a].iter().map(|x| render::num(*x)));
            r.push(render::num(gm.max_loss[a]));
            r
        })
        .collect();
    run.notes = render::table(
        &["loss".into(), "p1".into(), "p2".into(), "p3".into(), "max".into()],
        &rows,
    );
    Ok(run)
}

fn nixon_pool() -> Result<CaseRun> {
    let mut run = CaseRun::default();
    let r = nixon_scenario([1.0, 0.0])?;
    run.num(
        "pooled joint vs p_RE, max difference",
        0.0,
        r.pooled_joint.max_abs_diff(&r.joint_p)?,
        0.0,
    );
    run.num("pooled p_R(NJ)", 0.85, r.pooled_marginal.get(0), EXACT);
    run.num("q_R(NJ)", 0.9, r.marginal_q.get(0), EXACT);
    run.num("total variation p_R vs q_R", 0.05, r.marginal_distance, EXACT);

    let half = nixon_scenario([0.5, 0.5])?;
    run.num(
        "equal-weight pooled p_R(NJ)",
        0.875,
        half.pooled_marginal.get(0),
        EXACT,
    );
    let prob = PoolingProblem::new(
        vec![("P".into(), r.joint_p.clone()), ("Q".into(), r.joint_q.clone())],
        vec![0.3, 0.7],
    )?;
    let c = marginalization_commutes(&prob, &["Residence"])?;
    run.flag(
        "pooling commutes with marginalization",
        true,
        c.deviation <= 1e-12,
    );

    run.notes = render::distributions(&[
        ("p_RE", &r.joint_p),
        ("q_RE", &r.joint_q),
        ("pooled (1,0)", &r.pooled_joint),
    ]);
    run.notes += &render::distributions(&[("p_R", &r.marginal_p), ("q_R", &r.marginal_q)]);
    run.notes += "The joints show that Q gives positive probability to an extraterrestrial;\n\
                  the residence marginals alone hide this, so pooling marginals wastes it.\n";
    Ok(run)
}
