//! Runs every acceptance criterion once and prints one line per criterion.
//! Exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use galois_points::suite::{run, Report, RunConfig, Selector, Status};
use proptest::test_runner::{Config, TestRunner};
use rayon::prelude::*;
use serde_json::Value;

struct Run {
    label: String,
    report: Result<Report, String>,
    elapsed: Duration,
}

fn run_all(cfgs: Vec<(String, RunConfig)>) -> Vec<Run> {
    cfgs.into_par_iter()
        .map(|(label, cfg)| {
            let t = Instant::now();
            let report = run(&cfg).map_err(|e| e.to_string());
            Run { label, report, elapsed: t.elapsed() }
        })
        .collect()
}

fn thm1_runs(sel: Selector, grid: &[(u64, u32, u64)]) -> Vec<Run> {
    run_all(
        grid.iter()
            .map(|&(p, n, m)| {
                let q = p.pow(n);
                (format!("q={q} m={m}"), RunConfig::new(p, n, sel).with_m(m))
            })
            .collect(),
    )
}

fn thm2_runs() -> Vec<Run> {
    run_all(
        THM2_GRID
            .iter()
            .map(|&(p, n, r)| {
                let q = p.pow(n);
                (format!("q={q} r={r}"), RunConfig::new(p, n, Selector::Thm2).with_r(r))
            })
            .collect(),
    )
}

/// Every listed check is present and passes, and the whole report passes.
fn require(runs: &[Run], names: &[&str], budget: Duration) -> Result<String, String> {
    let mut slowest = Duration::ZERO;
    for r in runs {
        let rep = r.report.as_ref().map_err(|e| format!("{}: {e}", r.label))?;
        for name in names {
            match rep.check(name) {
                Some(c) if c.status == Status::Pass => {}
                Some(c) => return Err(format!("{}: {name} is {:?} ({})", r.label, c.status, c.witness)),
                None => return Err(format!("{}: {name} missing", r.label)),
            }
        }
        if !rep.passed() {
            let bad: Vec<_> = rep.checks.iter().filter(|c| c.status == Status::Fail).map(|c| &c.name).collect();
            return Err(format!("{}: failing checks {bad:?}", r.label));
        }
        if r.elapsed > budget {
            return Err(format!("{}: took {:.1?}, budget {budget:?}", r.label, r.elapsed));
        }
        slowest = slowest.max(r.elapsed);
    }
    Ok(format!("{} tuples, slowest {:.2?}", runs.len(), slowest))
}

fn witness<'a>(rep: &'a Report, name: &str) -> &'a Value {
    &rep.check(name).expect("check present").witness
}

fn criterion5(runs: &[Run]) -> Result<String, String> {
    require(
        runs,
        &[
            "phi(W) on Z = 0",
            "tangent multiplicity at phi(P_inf)",
            "valuation of 1/y at P_inf",
            "ramification at phi(Q)",
        ],
        Duration::from_secs(60),
    )?;
    for (r, &(p, n, m)) in runs.iter().zip(&THM1_GRID[1..]) {
        let rep = r.report.as_ref().unwrap();
        let q = p.pow(n);
        let w = witness(rep, "phi(W) on Z = 0");
        let mut a: Vec<_> = w["phi(W)"].as_array().unwrap().clone();
        let mut b: Vec<_> = w["image cap Z=0"].as_array().unwrap().clone();
        a.sort_by_key(|v| v.to_string());
        b.sort_by_key(|v| v.to_string());
        if a != b {
            return Err(format!("{}: phi(W) differs from the line section", r.label));
        }
        let t = witness(rep, "tangent multiplicity at phi(P_inf)");
        if t["multiplicity"].as_u64() != Some(q + 1) {
            return Err(format!("{}: tangent multiplicity {}", r.label, t["multiplicity"]));
        }
        if witness(rep, "valuation of 1/y at P_inf")["valuation"].as_u64() != Some(q) {
            return Err(format!("{}: valuation of 1/y", r.label));
        }
        let pts = witness(rep, "ramification at phi(Q)")["points"].as_array().unwrap();
        if pts.len() as u64 != q - 1 {
            return Err(format!("{}: {} non-distinguished points, want {}", r.label, pts.len(), q - 1));
        }
        for pt in pts {
            if pt["e"].as_u64() != Some(m - 1) || m - 1 >= q || pt["certified"] != Value::Bool(false) {
                return Err(format!("{}: {pt}", r.label));
            }
        }
    }
    Ok(format!("{} tuples", runs.len()))
}

/// Collects every `{eliminant, fiber}` pair with the function it belongs to.
fn degree_pairs(v: &Value, owner: Option<&str>, out: &mut Vec<(String, u64, u64)>) {
    match v {
        Value::Object(map) => {
            let owner = map
                .get("generator")
                .or_else(|| map.get("base_function"))
                .and_then(Value::as_str)
                .or(owner);
            if let (Some(e), Some(f)) = (map.get("eliminant"), map.get("fiber")) {
                out.push((owner.unwrap_or("?").to_string(), e.as_u64().unwrap_or(0), f.as_u64().unwrap_or(u64::MAX)));
            }
            for x in map.values() {
                degree_pairs(x, owner, out);
            }
        }
        Value::Array(xs) => xs.iter().for_each(|x| degree_pairs(x, owner, out)),
        _ => {}
    }
}

fn criterion6(groups: &[&[Run]]) -> Result<String, String> {
    let mut seen = BTreeSet::new();
    for runs in groups {
        for r in *runs {
            let Ok(rep) = &r.report else { continue };
            let mut pairs = Vec::new();
            for c in &rep.checks {
                degree_pairs(&c.witness, None, &mut pairs);
            }
            for (f, e, fib) in pairs {
                if e != fib {
                    return Err(format!("{} {:?}: {f}: eliminant {e}, fiber {fib}", r.label, rep.config.check));
                }
                seen.insert((r.label.clone(), format!("{:?}", rep.config.check), f));
            }
        }
    }
    if seen.len() < 18 {
        return Err(format!("only {} function/curve pairs", seen.len()));
    }
    Ok(format!("{} function/curve pairs agree", seen.len()))
}

fn criterion7() -> Result<String, String> {
    let setups = small_setups();
    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    let props: [(&str, fn(&Setup, u64) -> Result<(), String>); 3] = [
        ("normal form", normal_form_idempotent),
        ("pullback", pullback_contravariant),
        ("valuation", valuation_stable),
    ];
    for (name, prop) in props {
        runner
            .run(&(0usize..setups.len(), proptest::num::u64::ANY), |(i, seed)| {
                prop(&setups[i], seed).map_err(proptest::test_runner::TestCaseError::fail)
            })
            .map_err(|e| format!("{name}: {e}"))?;
    }
    for s in &setups {
        latin_square(&s.g1)?;
        latin_square(&s.g2)?;
        alpha_involution(s)?;
    }
    Ok(format!("{} setups, 100 cases per property", setups.len()))
}

fn main() -> ExitCode {
    let t1a = thm1_runs(Selector::Thm1a, &THM1_GRID);
    let lem = thm1_runs(Selector::Lemma1, &THM1_GRID);
    let t1b = thm1_runs(Selector::Thm1b, &THM1_GRID);
    let t2 = thm2_runs();
    let prop = thm1_runs(Selector::Prop1, &THM1_GRID[1..]);

    let results = [
        require(
            &t1a,
            &[
                "alpha identity",
                "G1 order",
                "G2 order",
                "G1 and G2 intersect trivially",
                "orbit W",
                "fixed field of G1",
                "fixed field of G2",
                "phi image degree",
                "two distinct inner points",
                "Galois point phi(P_inf)",
                "Galois point phi(P_0)",
            ],
            Duration::from_secs(60),
        ),
        require(
            &lem,
            &["lemma 1 chain", "lemma 1 first stage", "lemma 1 middle identity", "lemma 1 target"],
            Duration::from_secs(60),
        ),
        require(
            &t1b,
            &[
                "beta numerator identity",
                "beta inverse",
                "G1 transitive on X",
                "G1 and G2 intersect trivially",
                "orbit of (1:0:1)",
                "fixed field of G1",
                "fixed field of G2",
                "psi image degree",
                "two distinct outer points",
                "Galois point (0:1:0)",
                "Galois point (1:0:0)",
            ],
            Duration::from_secs(60),
        ),
        require(
            &t2,
            &[
                "constants b, c, c'",
                "g_b properties",
                "gamma identity",
                "gamma inverse",
                "G1 and G2 intersect trivially",
                "divisor condition",
                "fixed field of G1",
                "fixed field of G2",
                "xi image degree",
                "two distinct outer points",
                "Galois point (0:1:0)",
                "Galois point (1:0:0)",
            ],
            Duration::from_secs(120),
        ),
        criterion5(&prop),
        criterion6(&[&t1a, &t1b, &t2]),
        criterion7(),
    ];

    let mut ok = true;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("PASS criterion {}: {msg}", i + 1),
            Err(msg) => {
                ok = false;
                println!("FAIL criterion {}: {msg}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
