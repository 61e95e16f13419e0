//! Acceptance criteria, one verdict line each. Exits non-zero if any criterion fails.

use std::process::ExitCode;

use norden_core::contact_norden::{ClassTag, ContactNordenPoint};
use norden_core::hypersurface::{gauss_induced_r, scalar_curvatures, shape_from_class};
use norden_core::main_class::{
    solve_theta, solver_radicand, theorem31, Cor32Reading, NuPair, SolverBranch,
};
use norden_core::report::Report;
use norden_core::sample;
use norden_core::suite::{run_battery, Battery, SuiteConfig};
use norden_core::tolerance::relative_error;
use norden_core::Tolerance;
use rand::Rng;

type Criterion<'a> = Box<dyn Fn() -> Verdict + 'a>;

struct Verdict {
    ok: bool,
    detail: String,
}

fn battery(b: Battery, config: &SuiteConfig) -> Verdict {
    let r = run_battery(b, config);
    verdict_of(&r)
}

fn verdict_of(r: &Report) -> Verdict {
    let failed: Vec<String> = r
        .failures()
        .map(|c| format!("{} ({:.3e} > {:.1e})", c.name, c.residual, c.threshold))
        .collect();
    Verdict {
        ok: r.passed,
        detail: if failed.is_empty() {
            format!("{} checks", r.checks.len())
        } else {
            failed.join(", ")
        },
    }
}

fn and(mut a: Verdict, ok: bool, detail: String) -> Verdict {
    a.ok &= ok;
    if !ok {
        a.detail = format!("{}; {detail}", a.detail);
    }
    a
}

/// F0 data calibration against the closed forms with the `-2n nu' tan t` term in `tau~`.
fn criterion4() -> Verdict {
    let tol = Tolerance::default();
    let mut rng = sample::rng(4);
    let mut worst_tau: f64 = 0.0;
    let mut worst_tilde: f64 = 0.0;
    for trial in 0..50 {
        let n = 1 + trial % 3;
        let (p, _) = sample::random_contact_point(&mut rng, n);
        let sc = sample::random_scalars(&mut rng);
        let (nu, nut) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let a = shape_from_class(&p, ClassTag::F0, &sc, &tol).expect("F0 shape");
        let s = scalar_curvatures(&gauss_induced_r(&p, &a, &sc, nu, nut), &p).expect("contraction");
        let nf = n as f64;
        let tan = sc.t.tan();
        let tau = 4.0 * nf * nf * nu - 4.0 * nf * nut * tan;
        let tau_tilde = -2.0 * nf * nu * tan + 2.0 * nf * (2.0 * nf - 1.0) * nut;
        worst_tau = worst_tau.max(relative_error(s.tau, tau));
        worst_tilde = worst_tilde.max(relative_error(s.tau_tilde, tau_tilde));
    }
    Verdict {
        ok: worst_tau <= 1e-8 && worst_tilde <= 1e-8,
        detail: format!("tau rel err {worst_tau:.3e}, tau~ rel err {worst_tilde:.3e}"),
    }
}

/// Hand anchors and the `theta theta* / 2n` value of `tau~` for constant `t`.
fn criterion9(config: &SuiteConfig) -> Verdict {
    let tol = Tolerance::default();
    let mut v = battery(Battery::Solver, config);
    let p = ContactNordenPoint::standard(1);

    let (th, ths) = solve_theta(
        NuPair {
            nu: 1.0,
            nu_tilde: 0.0,
        },
        0.0,
        SolverBranch::Plus,
        1,
        &tol,
    )
    .expect("solvable");
    let t = theorem31(&p, 0.0, th, ths, Cor32Reading::Squared).expect("theorem");
    let ok = (th - 2.0).abs() < 1e-9
        && ths.abs() < 1e-9
        && (t.tau - 2.0).abs() < 1e-9
        && (t.k_phi_hol + 1.0).abs() < 1e-9;
    v = and(
        v,
        ok,
        format!(
            "anchor 1 gave theta={th}, theta*={ths}, tau={}, k_phi_hol={}",
            t.tau, t.k_phi_hol
        ),
    );

    let (th, ths) = solve_theta(
        NuPair {
            nu: 0.0,
            nu_tilde: 2.0,
        },
        0.0,
        SolverBranch::Plus,
        1,
        &tol,
    )
    .expect("solvable");
    let t = theorem31(&p, 0.0, th, ths, Cor32Reading::Squared).expect("theorem");
    let ok = (th - 2.0).abs() < 1e-9 && (ths - 2.0).abs() < 1e-9;
    v = and(v, ok, format!("anchor 2 gave theta={th}, theta*={ths}"));
    let contracted = t.tau_contracted.tau_tilde;
    v = and(
        v,
        (contracted - 2.0).abs() < 1e-9,
        format!("anchor 2 contraction gives tau~={contracted}, expected 2"),
    );

    // tau~ = theta theta* / 2n against contraction over random data
    let mut rng = sample::rng(9);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n = 1 + trial % 3;
        let (p, _) = sample::random_contact_point(&mut rng, n);
        let nu = NuPair {
            nu: rng.gen_range(-3.0..3.0),
            nu_tilde: rng.gen_range(-3.0..3.0),
        };
        let t: f64 = rng.gen_range(-1.2..1.2);
        if solver_radicand(nu, t) <= 0.01 {
            continue;
        }
        for branch in [SolverBranch::Plus, SolverBranch::Minus] {
            let (th, ths) = solve_theta(nu, t, branch, n, &tol).expect("solvable");
            let res = theorem31(&p, t, th, ths, Cor32Reading::Squared).expect("theorem");
            worst = worst.max(relative_error(
                th * ths / (2.0 * n as f64),
                res.tau_contracted.tau_tilde,
            ));
        }
    }
    and(
        v,
        worst <= 1e-8,
        format!("tau~ = theta theta*/2n rel err {worst:.3e}"),
    )
}

fn criterion11(config: &SuiteConfig) -> Verdict {
    let faulty = SuiteConfig {
        fault_inject: true,
        ..config.clone()
    };
    let missed: Vec<&str> = Battery::ALL
        .iter()
        .filter(|b| run_battery(**b, &faulty).passed)
        .map(|b| b.name())
        .collect();
    Verdict {
        ok: missed.is_empty(),
        detail: if missed.is_empty() {
            format!("{} batteries detect the fault", Battery::ALL.len())
        } else {
            format!("undetected in {}", missed.join(", "))
        },
    }
}

fn main() -> ExitCode {
    let config = SuiteConfig::default();
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "axiom induction",
            Box::new(|| battery(Battery::Induction, &config)),
        ),
        (
            "kaehlerity of pi combinations",
            Box::new(|| battery(Battery::Kaehler, &config)),
        ),
        (
            "model curvature",
            Box::new(|| battery(Battery::ModelCurvature, &config)),
        ),
        (
            "scalar calibration",
            Box::new(|| {
                let v = battery(Battery::ScalarCalibration, &config);
                let c = criterion4();
                and(v, c.ok, c.detail)
            }),
        ),
        (
            "scalar and sectional closed forms",
            Box::new(|| battery(Battery::ClosedForms, &config)),
        ),
        (
            "canonical curvature",
            Box::new(|| battery(Battery::CanonicalCurvature, &config)),
        ),
        (
            "main class curvature",
            Box::new(|| battery(Battery::MainClassCurvature, &config)),
        ),
        (
            "canonical connection",
            Box::new(|| battery(Battery::CanonicalConnection, &config)),
        ),
        (
            "solver and constant-t curvature",
            Box::new(|| criterion9(&config)),
        ),
        (
            "canonical curvature reading",
            Box::new(|| {
                let r = run_battery(Battery::Reading, &config);
                let mut v = verdict_of(&r);
                if let Some(reading) = r.findings.get("reading.consistent_reading") {
                    v.detail = format!("{}; consistent reading: {reading}", v.detail);
                }
                v
            }),
        ),
        ("negative controls", Box::new(|| criterion11(&config))),
    ];

    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        all &= v.ok;
        println!(
            "criterion {:>2} {:<36} {}  {}",
            i + 1,
            name,
            if v.ok { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
