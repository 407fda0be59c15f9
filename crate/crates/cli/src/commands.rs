//! Subcommand bodies. Each returns an [`Output`] holding both renderings.

use std::fmt::Write;

use credal::betting::{
    booked_in_expectation, expectation_polynomial, expectation_under, fair_price_cents, format_dollars,
    payoff_table,
};
use credal::decision::{e_admissible, group_minimax, pareto_optimal};
use credal::inference::{
    belief_from_mass, conditional_envelope, conditionalize, envelope, mobius_report, IndependenceReport,
};
use credal::io::{CredalSpec, FamilyDoc, IntervalSpec, SpaceSpec};
use credal::pooling::{independence_preserved, linear_pool, marginalization_commutes};
use credal::{
    BetBook, CredalSet, Distribution, Document, Error, Event, FamilyPiece, Generator, ParametricFamily,
    PoolingProblem, Ticket,
};
use serde_json::{json, Value};

use crate::cases::{self, Check};
use crate::properties;
use crate::render;

#[derive(Debug)]
pub struct Output {
    pub text: String,
    /// Structured form: a document whose `report` holds the results.
    pub doc: Document,
    /// A checked expectation failed.
    pub failed: bool,
}

impl Output {
    fn new(text: String, mut doc: Document, report: Value) -> Output {
        doc.report = Some(report);
        Output {
            text,
            doc,
            failed: false,
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Domain(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

pub type Outcome = std::result::Result<Output, Failure>;

fn probs(d: &Distribution) -> Value {
    json!(d.probs())
}

fn event(doc: &Document, labels: &[String]) -> Result<Event, Failure> {
    Ok(Event::from_labels(&doc.credal_set()?.space().clone(), labels)?)
}

pub fn envelope_cmd(doc: &Document, events: &[Vec<String>]) -> Outcome {
    let set = doc.credal_set()?;
    let space = set.space().clone();
    let events: Vec<Event> = if events.is_empty() {
        (0..space.len())
            .map(|i| Event::new(&space, &[i]))
            .collect::<Result<_, _>>()?
    } else {
        events
            .iter()
            .map(|l| Event::from_labels(&space, l))
            .collect::<Result<_, _>>()?
    };
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for e in &events {
        let env = envelope(&set, e)?;
        rows.push(vec![
            e.to_string(),
            render::num(env.lower),
            render::num(env.upper),
        ]);
        out.push(json!({
            "event": e.labels(),
            "lower": env.lower,
            "upper": env.upper,
            "lower_witness": probs(&env.lower_witness),
            "upper_witness": probs(&env.upper_witness),
        }));
    }
    let text = format!(
        "{} over {}\n{}",
        set.kind(),
        render::names(space.atoms()),
        render::table(&["event".into(), "lower".into(), "upper".into()], &rows)
    );
    Ok(Output::new(
        text,
        doc.clone(),
        json!({ "kind": set.kind(), "envelopes": out }),
    ))
}

const FULL_TABLE_ATOMS: usize = 6;

pub fn belief_cmd(doc: &Document) -> Outcome {
    let (space, bel, mass, flags) = if doc.masses.is_some() {
        let m = doc.mass_function()?;
        let bel = belief_from_mass(&m)?;
        (m.space().clone(), bel.values().to_vec(), m.dense(), json!({}))
    } else {
        let r = mobius_report(&doc.credal_set()?)?;
        let flags = json!({
            "envelope_is_belief": r.envelope_is_belief,
            "set_equals_core": r.set_equals_core,
            "hull_equals_core": r.hull_equals_core,
        });
        (r.space.clone(), r.belief, r.mass, flags)
    };
    let n = space.len();
    let mut rows = Vec::new();
    let mut subsets = Vec::new();
    for mask in 1..bel.len() {
        if n > FULL_TABLE_ATOMS && mass[mask].abs() <= credal::tolerance::ZERO {
            continue;
        }
        let e = Event::from_mask(&space, mask as u64)?;
        rows.push(vec![
            e.to_string(),
            render::num(bel[mask]),
            render::num(mass[mask]),
        ]);
        subsets.push(json!({ "set": e.labels(), "bel": bel[mask], "m": mass[mask] }));
    }
    let mut text = render::table(&["subset".into(), "Bel".into(), "m".into()], &rows);
    if let Some(obj) = flags.as_object() {
        for (k, v) in obj {
            let _ = writeln!(text, "{k}: {v}");
        }
    }
    let negative: Vec<String> = (1..mass.len())
        .filter(|&m| mass[m] < -credal::tolerance::LP)
        .map(|m| Event::from_mask(&space, m as u64).map(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if !negative.is_empty() {
        let _ = writeln!(text, "negative masses on {}", negative.join(", "));
    }
    Ok(Output::new(
        text,
        doc.clone(),
        json!({ "subsets": subsets, "flags": flags }),
    ))
}

pub fn condition_cmd(doc: &Document, given: &[String], target: Option<&[String]>) -> Outcome {
    let set = doc.credal_set()?;
    let e = event(doc, given)?;
    let mut text = String::new();
    let mut report = json!({ "given": e.labels() });
    if let Some(t) = target {
        let a = event(doc, t)?;
        let (lo, hi) = conditional_envelope(&set, &a, &e)?;
        let _ = writeln!(text, "p({a} | {e}) in [{}, {}]", render::num(lo), render::num(hi));
        report["target"] = json!({ "event": a.labels(), "lower": lo, "upper": hi });
    }
    let c = conditionalize(&set, &e)?;
    let space = c.set.space().clone();
    let mut out = Document {
        space: Some(SpaceSpec::of(&space)),
        ..Document::default()
    };
    match &c.set {
        CredalSet::Vertices(v) => {
            let names: Vec<String> = (1..=v.len()).map(|i| format!("c{i}")).collect();
            for (n, d) in names.iter().zip(v.members()) {
                out.distributions.insert(n.clone(), d.probs().to_vec());
            }
            let named: Vec<(&str, &Distribution)> =
                names.iter().map(String::as_str).zip(v.members()).collect();
            text += &render::distributions(&named);
            out.credal = Some(CredalSpec::Vertices(names));
        }
        CredalSet::Linear(_) => {
            let b = c.bounds.as_ref().expect("linear conditioning yields bounds");
            out.intervals.insert(
                "conditional".into(),
                IntervalSpec {
                    lo: b.lo().to_vec(),
                    hi: b.hi().to_vec(),
                },
            );
            out.credal = Some(CredalSpec::Intervals("conditional".into()));
            let rows: Vec<Vec<String>> = (0..space.len())
                .map(|i| {
                    vec![
                        space.atom(i).to_string(),
                        render::num(b.lo()[i]),
                        render::num(b.hi()[i]),
                    ]
                })
                .collect();
            text += &render::table(&["atom".into(), "lower".into(), "upper".into()], &rows);
            if !c.exact {
                text += "per-atom bounds are tight, but their box may contain points outside the conditioned set\n";
            }
        }
        CredalSet::Family(f) => {
            let Some(CredalSpec::Family(orig)) = &doc.credal else {
                return Err(Failure::Usage(
                    "family sets come from a \"family\" section".into(),
                ));
            };
            out.credal = Some(CredalSpec::Family(FamilyDoc {
                spec: orig.spec.clone(),
                given: f
                    .conditioning()
                    .map(|ev| ev.labels().iter().map(|s| s.to_string()).collect()),
            }));
            let rows = (0..space.len())
                .map(|i| {
                    let env = envelope(&c.set, &Event::new(&space, &[i])?)?;
                    Ok(vec![
                        space.atom(i).to_string(),
                        render::num(env.lower),
                        render::num(env.upper),
                    ])
                })
                .collect::<Result<Vec<_>, Error>>()?;
            text += &render::table(&["atom".into(), "lower".into(), "upper".into()], &rows);
        }
    }
    if c.dropped > 0 {
        let _ = writeln!(
            text,
            "dropped {} member(s) giving {e} zero probability",
            c.dropped
        );
    }
    report["exact"] = json!(c.exact);
    report["dropped"] = json!(c.dropped);
    Ok(Output::new(text, out, report))
}

pub struct PoolArgs<'a> {
    pub weights: Option<Vec<f64>>,
    pub marginal: Option<&'a [String]>,
    pub independence: Option<(&'a str, &'a str)>,
    pub given: Option<&'a str>,
    pub tolerance: f64,
}

pub fn pool_cmd(doc: &Document, args: PoolArgs<'_>) -> Outcome {
    let experts = doc.members()?;
    let prob = match args.weights.or_else(|| doc.weights.clone()) {
        Some(w) => PoolingProblem::new(experts, w)?,
        None => PoolingProblem::equal_weights(experts)?,
    };
    let pooled = linear_pool(&prob)?;
    let mut named: Vec<(&str, &Distribution)> = prob.experts().iter().map(|(n, d)| (n.as_str(), d)).collect();
    named.push(("pooled", &pooled));
    let mut text = render::distributions(&named);
    let w: Vec<String> = prob.weights().iter().map(|x| render::num(*x)).collect();
    let _ = writeln!(text, "weights {}", w.join(" "));
    let mut report = json!({ "weights": prob.weights() });

    if let Some(vars) = args.marginal {
        let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
        let c = marginalization_commutes(&prob, &refs)?;
        text += &render::distributions(&[("pooled marginal", &c.pooled_then_marginalized)]);
        let _ = writeln!(
            text,
            "pool-then-marginalize vs marginalize-then-pool: max difference {:.3e}",
            c.deviation
        );
        report["marginal"] = json!({
            "variables": vars,
            "atoms": c.pooled_then_marginalized.space().atoms(),
            "probs": c.pooled_then_marginalized.probs(),
            "deviation": c.deviation,
        });
    }
    if let Some((x, z)) = args.independence {
        let r = independence_preserved(&prob, x, z, args.given, args.tolerance)?;
        let cond = args.given.map(|g| format!(" | {g}")).unwrap_or_default();
        let verdict = if r.preserved() {
            "preserved"
        } else {
            "not preserved"
        };
        let _ = writeln!(
            text,
            "{x} ⫫ {z}{cond}: {verdict} (max violation {:.3e})",
            r.report.max_violation
        );
        if let Some(w) = &r.report.worst {
            let _ = writeln!(
                text,
                "worst cell {}: joint {} vs factorized {}",
                w.cell.join(","),
                render::num(w.joint),
                render::num(w.factorized)
            );
        }
        report["independence"] = independence_json(&r.report);
    }
    let out = Document::with_distributions(prob.space(), &[("pooled", &pooled)]);
    Ok(Output::new(text, out, report))
}

fn independence_json(r: &IndependenceReport) -> Value {
    let cell = |c: &credal::inference::CellCheck| json!({ "cell": c.cell, "joint": c.joint, "factorized": c.factorized, "violation": c.violation });
    json!({
        "passed": r.passed,
        "tolerance": r.tolerance,
        "max_violation": r.max_violation,
        "worst": r.worst.as_ref().map(cell),
        "cells": r.cells.iter().map(cell).collect::<Vec<_>>(),
        "skipped": r.skipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    EAdmissible,
    GroupMinimax,
    Pareto,
}

fn group_members(doc: &Document) -> Result<Vec<(String, Distribution)>, Failure> {
    let names = match &doc.credal {
        Some(CredalSpec::Vertices(names)) => names.clone(),
        _ => doc.member_names(),
    };
    if names.is_empty() {
        return Err(Failure::Usage("group criteria need named distributions".into()));
    }
    Ok(names
        .into_iter()
        .map(|n| doc.distribution(&n).map(|d| (n, d)))
        .collect::<Result<_, _>>()?)
}

pub fn decide_cmd(doc: &Document, criterion: Criterion) -> Outcome {
    let u = doc.utilities()?;
    let mut text = String::new();
    let report = match criterion {
        Criterion::EAdmissible => {
            let set = doc.credal_set()?;
            let r = e_admissible(&u, &set)?;
            let rows: Vec<Vec<String>> = r
                .actions
                .iter()
                .map(|a| {
                    vec![
                        a.action.clone(),
                        if a.admissible { "yes" } else { "no" }.into(),
                        render::num(a.margin),
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
            text += &render::table(
                &[
                    "action".into(),
                    "admissible".into(),
                    "margin".into(),
                    "witness".into(),
                ],
                &rows,
            );
            let _ = writeln!(text, "E-admissible: {}", render::names(&r.admissible()));
            if let Some(res) = r.resolution {
                let _ = writeln!(text, "family scanned at parameter resolution {res:e}");
            }
            json!({
                "criterion": "e-admissible",
                "admissible": r.admissible(),
                "approximate": r.approximate,
                "actions": r.actions.iter().map(|a| json!({
                    "action": a.action,
                    "admissible": a.admissible,
                    "margin": a.margin,
                    "witness": a.witness.as_ref().map(probs),
                })).collect::<Vec<_>>(),
            })
        }
        Criterion::GroupMinimax | Criterion::Pareto => {
            let members = group_members(doc)?;
            let dists: Vec<Distribution> = members.iter().map(|(_, d)| d.clone()).collect();
            let mut header = vec!["eu".to_string()];
            header.extend(members.iter().map(|(n, _)| n.clone()));
            let eus = dists
                .iter()
                .map(|d| u.expectations(d))
                .collect::<Result<Vec<_>, _>>()?;
            let rows: Vec<Vec<String>> = (0..u.len())
                .map(|a| {
                    std::iter::once(u.actions()[a].clone())
                        .chain(eus.iter().map(|e| render::num(e[a])))
                        .collect()
                })
                .collect();
            text += &render::table(&header, &rows);
            if criterion == Criterion::GroupMinimax {
                let g = group_minimax(&u, &dists)?;
                header[0] = "loss".into();
                header.push("max".into());
                let rows: Vec<Vec<String>> = (0..u.len())
                    .map(|a| {
                        std::iter::once(u.actions()[a].clone())
                            .chain(g.loss[a].iter().map(|x| render::num(*x)))
                            .chain(std::iter::once(render::num(g.max_loss[a])))
                            .collect()
                    })
                    .collect();
                text += &render::table(&header, &rows);
                let _ = writeln!(text, "group minimax: {}", g.action);
                if !g.tied.is_empty() {
                    let _ = writeln!(text, "tied: {}", g.tied.join(", "));
                }
                json!({
                    "criterion": "group-minimax",
                    "action": g.action,
                    "tied": g.tied,
                    "loss": g.loss,
                    "max_loss": g.max_loss,
                })
            } else {
                let p = pareto_optimal(&u, &dists)?;
                let optimal: Vec<&str> = (0..u.len())
                    .filter(|&a| p.optimal[a])
                    .map(|a| u.actions()[a].as_str())
                    .collect();
                for (a, by) in p.dominated_by.iter().enumerate() {
                    if let Some(b) = by {
                        let _ = writeln!(text, "{} is dominated by {}", u.actions()[a], u.actions()[*b]);
                    }
                }
                let _ = writeln!(text, "Pareto-optimal: {}", render::names(&optimal));
                json!({
                    "criterion": "pareto",
                    "optimal": optimal,
                    "dominated_by": p.dominated_by.iter().map(|b| b.map(|i| u.actions()[i].clone())).collect::<Vec<_>>(),
                })
            }
        }
    };
    Ok(Output::new(text, doc.clone(), report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Coin,
    Square,
}

fn family_for(book: &BetBook, kind: FamilyKind, lo: f64, hi: f64) -> Result<ParametricFamily, Failure> {
    let n = book.space().len();
    let generator = match kind {
        FamilyKind::Coin if n.is_power_of_two() && n >= 2 => Generator::IidCoin {
            tosses: n.trailing_zeros() as usize,
        },
        FamilyKind::Square => Generator::IndependentSquare,
        FamilyKind::Coin => return Err(Failure::Usage(format!("no coin family has {n} outcomes"))),
    };
    Ok(ParametricFamily::new(vec![FamilyPiece::new(generator, lo, hi)?])?)
}

fn payoff_text(book: &BetBook) -> String {
    let t = payoff_table(book);
    let mut header = vec!["ticket".to_string()];
    header.extend(t.space.atoms().iter().cloned());
    let mut rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .zip(book.tickets())
        .enumerate()
        .map(|(i, (r, tk))| {
            let side = match tk.side {
                credal::Side::AgentBuys => "agent buys",
                credal::Side::AgentSells => "agent sells",
            };
            std::iter::once(format!("{} {side} {} for {}", i + 1, tk.event, tk.price))
                .chain(r.iter().map(|c| c.to_string()))
                .collect()
        })
        .collect();
    rows.push(
        std::iter::once("net".to_string())
            .chain(t.net.iter().map(|c| c.to_string()))
            .collect(),
    );
    format!("antagonist payoffs\n{}", render::table(&header, &rows))
}

pub fn bet_eval_cmd(doc: &Document, family: Option<(FamilyKind, f64, f64)>, under: Option<&str>) -> Outcome {
    let mut book = doc.book()?;
    let mut text = payoff_text(&book);
    let net: Vec<f64> = payoff_table(&book).net_dollars();
    let mut report = json!({ "antagonist_net": net });
    if let Some(name) = under {
        let d = doc.distribution(name)?;
        let v = expectation_under(&book, &d)?;
        let _ = writeln!(text, "antagonist expectation under {name}: {}", format_dollars(v));
        report["expectation_under"] = json!({ "distribution": name, "antagonist": v });
    }
    let set = match family {
        Some((kind, lo, hi)) => {
            let fam = family_for(&book, kind, lo, hi)?;
            book = book.rebase(fam.space())?;
            Some(CredalSet::Family(fam))
        }
        None if doc.credal.is_some() || !doc.intervals.is_empty() => Some(doc.credal_set()?),
        None if under.is_none() && !doc.distributions.is_empty() => Some(doc.credal_set()?),
        None => None,
    };
    let Some(set) = set else {
        if under.is_none() {
            return Err(Failure::Usage(
                "nothing to evaluate against: pass --family or --under".into(),
            ));
        }
        return Ok(Output::new(text, doc.clone(), report));
    };
    if let CredalSet::Family(f) = &set {
        if f.conditioning().is_none() && f.pieces().len() == 1 {
            let g = f.pieces()[0].generator;
            let poly = expectation_polynomial(&book, g)?;
            let var = if g == Generator::IndependentSquare {
                "√w"
            } else {
                "p"
            };
            let _ = writeln!(
                text,
                "antagonist expectation: {}  (in {var})",
                poly.to_string().replace('p', var)
            );
            report["antagonist_polynomial"] = json!(poly.coeffs());
        }
    }
    let a = booked_in_expectation(&book, &set)?;
    let _ = writeln!(
        text,
        "agent expectation over the set: min {}, max {}",
        format_dollars(a.min_agent),
        format_dollars(a.max_agent)
    );
    if !a.zeros.is_empty() {
        let z: Vec<String> = a.zeros.iter().map(|(_, t)| render::num(*t)).collect();
        let what = if matches!(set, CredalSet::Vertices(_)) {
            "members"
        } else {
            "parameters"
        };
        let _ = writeln!(text, "zero agent expectation at {what} {}", z.join(", "));
    }
    let _ = writeln!(text, "{}", a.verdict);
    report["verdict"] = json!(a.verdict);
    report["agent_max"] = json!(a.max_agent);
    report["agent_min"] = json!(a.min_agent);
    report["witness"] = probs(&a.witness);
    report["zeros"] = json!(a.zeros.iter().map(|z| z.1).collect::<Vec<_>>());
    Ok(Output::new(text, doc.clone(), report))
}

/// The book repriced at fair prices under a named distribution.
pub fn bet_fair_cmd(doc: &Document, under: &str) -> Outcome {
    let book = doc.book()?;
    let q = doc.distribution(under)?;
    let fair = BetBook::new(
        book.tickets()
            .iter()
            .map(|t| {
                Ticket::new(
                    t.side,
                    fair_price_cents(t.payout, &t.event, &q)?,
                    t.payout,
                    t.event.clone(),
                )
            })
            .collect::<Result<_, _>>()?,
    )?;
    let mut text = payoff_text(&fair);
    let v = expectation_under(&fair, &q)?;
    let _ = writeln!(
        text,
        "antagonist expectation under {under}: {}",
        format_dollars(v)
    );
    let mut out = Document::book_document(&fair);
    out.distributions = doc.distributions.clone();
    Ok(Output::new(
        text,
        out,
        json!({ "priced_under": under, "antagonist": v }),
    ))
}

pub fn examples_list() -> Outcome {
    let reg = cases::registry();
    let rows: Vec<Vec<String>> = reg
        .iter()
        .map(|c| vec![c.name.to_string(), c.description.to_string()])
        .collect();
    let text = render::table(&["name".into(), "description".into()], &rows);
    let report = json!(reg
        .iter()
        .map(|c| json!({"name": c.name, "description": c.description}))
        .collect::<Vec<_>>());
    Ok(Output::new(text, Document::default(), report))
}

fn check_line(c: &Check, tol: Option<f64>) -> String {
    let mark = if c.passed(tol) { "PASS" } else { "FAIL" };
    let t = match c.expected {
        cases::Value::Num(_) => match tol.unwrap_or(c.tolerance) {
            0.0 => " (exact)".to_string(),
            t => format!(" (tol {t:e})"),
        },
        _ => String::new(),
    };
    format!(
        "  {mark}  {}: actual {}, expected {}{t}\n",
        c.label, c.actual, c.expected
    )
}

/// Runs one case, or every case followed by the property suites.
pub fn examples_run(name: Option<&str>, tol: Option<f64>, seed: u64) -> Outcome {
    let selected: Vec<cases::Case> = match name {
        Some(n) => vec![cases::find(n).ok_or_else(|| Failure::Usage(format!("unknown example {n:?}")))?],
        None => cases::registry(),
    };
    let mut text = String::new();
    let mut failed = false;
    let mut case_reports = Vec::new();
    for case in &selected {
        let _ = writeln!(text, "== {}: {}", case.name, case.description);
        match (case.run)() {
            Ok(run) => {
                text += &run.notes;
                let mut ok = true;
                for c in &run.checks {
                    text += &check_line(c, tol);
                    ok &= c.passed(tol);
                }
                let _ = writeln!(text, "{} {}", if ok { "PASS" } else { "FAIL" }, case.name);
                failed |= !ok;
                case_reports.push(json!({ "name": case.name, "passed": ok, "checks": run.checks }));
            }
            Err(e) => {
                let _ = writeln!(text, "FAIL {}: {e}", case.name);
                failed = true;
                case_reports.push(json!({ "name": case.name, "passed": false, "error": e.to_string() }));
            }
        }
    }
    let mut report = json!({ "cases": case_reports });
    if name.is_none() {
        let suites = properties::run_all(seed);
        text += &suites_text(&suites, seed);
        failed |= suites.iter().any(|s| !s.passed());
        report["properties"] = json!({ "seed": seed, "suites": suites });
    }
    let _ = writeln!(text, "{}", if failed { "FAILED" } else { "ALL PASSED" });
    let mut out = Output::new(text, Document::default(), report);
    out.failed = failed;
    Ok(out)
}

fn suites_text(suites: &[properties::Suite], seed: u64) -> String {
    let mut text = format!("== property suites (seed {seed})\n");
    for s in suites {
        let mark = if s.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            text,
            "  {mark}  {}: {} cases, {} failures",
            s.name, s.cases, s.failures
        );
        if let Some(f) = &s.first_failure {
            let _ = writeln!(text, "        {f}");
        }
    }
    text
}

pub fn properties_cmd(seed: u64) -> Outcome {
    let suites = properties::run_all(seed);
    let failed = suites.iter().any(|s| !s.passed());
    let mut out = Output::new(
        suites_text(&suites, seed),
        Document::default(),
        json!({ "seed": seed, "suites": suites }),
    );
    out.failed = failed;
    Ok(out)
}
