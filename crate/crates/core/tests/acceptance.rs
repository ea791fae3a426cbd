//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use sfcalc_core::operator::random;
use sfcalc_core::par::Execution;
use sfcalc_core::spectrum::{f_spectrum, s_spectrum};
use sfcalc_core::verify::{identity, run_suite, Record, Report, SuiteConfig};
use std::process::ExitCode;
use std::time::Instant;

struct Outcome {
    criterion: u8,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn from_records(report: &Report, criterion: u8, title: &'static str) -> Outcome {
    let recs: Vec<&Record> = report
        .records
        .iter()
        .filter(|r| identity(&r.identity).is_some_and(|i| i.criterion == criterion))
        .collect();
    let failed: Vec<&&Record> = recs.iter().filter(|r| !r.pass).collect();
    let worst = recs
        .iter()
        .max_by(|a, b| (a.residual / a.tol).total_cmp(&(b.residual / b.tol)))
        .expect("records for every criterion");
    let mut detail = format!(
        "{} records, worst {} seed {}: residual {:.3e} vs tol {:.3e}",
        recs.len(),
        worst.identity,
        worst.seed,
        worst.residual,
        worst.tol
    );
    for f in failed.iter().take(5) {
        detail.push_str(&format!(
            "\n    failed {} seed {}: {:.3e} > {:.3e}",
            f.identity, f.seed, f.residual, f.tol
        ));
    }
    Outcome {
        criterion,
        title,
        pass: failed.is_empty() && !recs.is_empty(),
        detail,
    }
}

fn commuting_spectra() -> Outcome {
    let mut worst = 0.0_f64;
    for k in 0..50u64 {
        let (n, d) = (1 + (k % 3) as usize, 2 + ((k / 3) % 3) as usize);
        let t = random::commuting_operator(1000 + k, n, d);
        let gap = s_spectrum(&t).unwrap().mismatch(&f_spectrum(&t).unwrap());
        worst = worst.max(gap);
    }
    Outcome {
        criterion: 6,
        title: "F-spectrum equals S-spectrum on 50 commuting instances",
        pass: worst <= 1e-8,
        detail: format!("worst mismatch {worst:.3e} vs tol 1e-8"),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cfg = SuiteConfig::default();
    let report = run_suite(&cfg, Execution::Auto).expect("suite runs");
    let mut out = vec![
        from_records(&report, 1, "classical S-resolvent equations, left and right"),
        from_records(&report, 2, "new resolvent equation, forms I and II and their agreement"),
        from_records(&report, 3, "kernel form I equals form II over 1000 pairs"),
        from_records(&report, 4, "series against closed form, finite-sum identity"),
        from_records(&report, 5, "pseudo-resolvent commutation"),
        from_records(&report, 6, "spectrum norm bound, grid scan, S/F agreement"),
    ];
    let extra = commuting_spectra();
    out[5].pass &= extra.pass;
    out[5].detail.push_str(&format!("; {}: {}", extra.title, extra.detail));
    out.push(from_records(&report, 7, "functional calculus exactness and independence"));
    out.push(from_records(&report, 8, "Riesz projectors on two-group spectra"));
    out.push(from_records(&report, 9, "lemma integrals"));
    out.push(from_records(&report, 10, "product rule"));
    out.push(from_records(&report, 11, "Laplace representation, Clifford and quaternionic"));

    let repeat = SuiteConfig {
        seed: 42,
        ..SuiteConfig::default()
    };
    let a = run_suite(&repeat, Execution::Auto).expect("suite runs").to_json().unwrap();
    let b = run_suite(&repeat, Execution::Sequential).expect("suite runs").to_json().unwrap();
    out.push(Outcome {
        criterion: 12,
        title: "verify reports are byte-identical across runs",
        pass: a == b,
        detail: format!("seed 42, parallel vs sequential run, {} bytes", a.len()),
    });

    let mut all = true;
    for o in &out {
        all &= o.pass;
        println!(
            "{} criterion {:>2}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.criterion,
            o.title,
            o.detail
        );
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
