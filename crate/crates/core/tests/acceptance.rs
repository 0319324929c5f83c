//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines always print; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use su2ym::numerics::integrate;
use su2ym::report::{Check, Status};
use su2ym::suites::{
    balance_checks, commute_checks, curve_checks, genus_checks, integration_checks, quadrature_checks,
    separation_checks, separation_refinement_checks, NumericSetup,
};
use su2ym::systems::suite::exact_identity_suite;
use su2ym::systems::SystemId;

const SEED: u64 = 20_261_016;

struct Criterion {
    id: &'static str,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Vec<Check>,
}

fn exact() -> Vec<Check> {
    exact_identity_suite()
}

fn balances() -> Vec<Check> {
    let mut v = balance_checks(&SystemId::Sys4.definition());
    v.extend(balance_checks(&SystemId::Sys5.definition()));
    v
}

fn curves() -> Vec<Check> {
    curve_checks(&SystemId::Sys4.definition(), &SystemId::Sys5.definition())
}

fn genus() -> Vec<Check> {
    genus_checks(SEED, 3)
}

fn numerics() -> Vec<Check> {
    integration_checks(&NumericSetup::default(), &SystemId::Sys4.definition(), &SystemId::Sys5.definition())
}

fn separation() -> Vec<Check> {
    let setup = NumericSetup::default();
    let s4 = SystemId::Sys4.definition();
    let mut v = Vec::new();
    match integrate(&s4, &setup.state4, setup.a, &setup.span, &setup.config) {
        Ok(tr) => v.extend(separation_checks(&tr)),
        Err(e) => v.push(Check::error("separation.p6_residual", &e)),
    }
    match integrate(&s4, &setup.quadrature_state4, setup.a, &setup.span, &setup.config) {
        Ok(tr) => v.extend(quadrature_checks(&tr)),
        Err(e) => v.push(Check::error("quadrature.xi1", &e)),
    }
    v.extend(separation_refinement_checks(&setup, &s4));
    v
}

fn commutation() -> Vec<Check> {
    commute_checks(&NumericSetup::default())
}

const CRITERIA: [Criterion; 7] = [
    Criterion {
        id: "1",
        title: "exact identity suite",
        limit: Some(Duration::from_secs(60)),
        run: exact,
    },
    Criterion {
        id: "2",
        title: "balance coefficients, residual to order 16, free parameters",
        limit: None,
        run: balances,
    },
    Criterion {
        id: "3",
        title: "curve elimination, quotient and flip",
        limit: None,
        run: curves,
    },
    Criterion {
        id: "4",
        title: "genus counts over seeded draws and cluster tolerances",
        limit: Some(Duration::from_secs(5)),
        run: genus,
    },
    Criterion {
        id: "5",
        title: "invariant drift and convergence order",
        limit: Some(Duration::from_secs(10)),
        run: numerics,
    },
    Criterion {
        id: "6",
        title: "separation sextic and Abel-map linearity",
        limit: None,
        run: separation,
    },
    Criterion {
        id: "7",
        title: "numerical commutation of the two flows",
        limit: None,
        run: commutation,
    },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let checks = (c.run)();
        let elapsed = start.elapsed();
        let bad: Vec<&Check> = checks.iter().filter(|k| !k.passed()).collect();
        let slow = c.limit.is_some_and(|l| elapsed > l);
        let ok = bad.is_empty() && !slow && !checks.is_empty();
        let skipped = checks.iter().filter(|k| k.status == Status::Skip).count();
        println!(
            "criterion {}: {} {} ({} checks, {} skipped, {:.2} s{})",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            checks.len(),
            skipped,
            elapsed.as_secs_f64(),
            c.limit.map_or(String::new(), |l| format!(" of {} s allowed", l.as_secs())),
        );
        for k in bad {
            println!("    {} {:?} {}", k.name, k.residual, k.witness.as_deref().unwrap_or(""));
        }
        if !ok {
            failed += 1;
        }
    }
    println!("criterion 8: OUT OF SCOPE compactification and divisor statements have no computational check");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
