//! Scenario documents and their dispatch to the library.

use norden_core::contact_norden::{
    class_form, class_residual, classify_section, is_curvature_like, one_forms,
    validate_contact_axioms, ClassTag, ContactNordenPoint, OneForms,
};
use norden_core::hypersurface::{
    canonical_k_from_r, canonical_k_model, check_angle, closed_form_scalars,
    gauss_identities_residual, gauss_induced_r, induce, pi_relations_residual, scalar_curvatures,
    shape_from_class,
};
use norden_core::io::{
    matrix_to_rows, ComplexPointJson, ContactPointJson, FTensorJson, HypersurfaceScenario,
    MainClassScenario,
};
use norden_core::main_class::{
    canonical_difference_f45, nu_from_scalars, solve_theta, solver_radicand, theorem31,
    Cor32Reading, MainClassData,
};
use norden_core::multilinear::Vector;
use norden_core::report::{Check, Report};
use norden_core::suite::{suite, SuiteConfig};
use norden_core::tolerance::relative_error;
use norden_core::{Error, Tolerance};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Validate,
    Induce,
    Classify,
    Curvature,
    Canonical,
    Solve,
    Theorem31,
    Suite,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = serde_json::to_value(self).map_err(|_| std::fmt::Error)?;
        f.write_str(v.as_str().unwrap_or_default())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverride {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: Kind,
    #[serde(default)]
    pub payload: Value,
    #[serde(default)]
    pub tolerance: ToleranceOverride,
}

/// Settings taken from the command line; `None` leaves the scenario's value alone.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tolerance: ToleranceOverride,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub n_values: Option<Vec<usize>>,
    pub fault_inject: bool,
    pub cor32_reading: Option<Cor32Reading>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Output {
    #[serde(flatten)]
    pub report: Report,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

/// Everything that maps to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot parse scenario: {0}")]
    Parse(serde_json::Error),
    #[error("payload does not match kind {kind}: {source}")]
    Schema {
        kind: Kind,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(#[from] Error),
}

pub fn parse(text: &str) -> Result<Scenario, InputError> {
    serde_json::from_str(text).map_err(InputError::Parse)
}

fn payload<T: for<'de> Deserialize<'de>>(s: &Scenario) -> Result<T, InputError> {
    serde_json::from_value(s.payload.clone()).map_err(|source| InputError::Schema {
        kind: s.kind,
        source,
    })
}

fn tolerance(s: &Scenario, o: &Overrides) -> Result<Tolerance, InputError> {
    let d = Tolerance::default();
    let abs = o
        .tolerance
        .abs_tol
        .or(s.tolerance.abs_tol)
        .unwrap_or(d.abs_tol);
    let rel = o
        .tolerance
        .rel_tol
        .or(s.tolerance.rel_tol)
        .unwrap_or(d.rel_tol);
    Ok(Tolerance::new(abs, rel)?)
}

pub fn run(s: &Scenario, o: &Overrides) -> Result<Output, InputError> {
    let tol = tolerance(s, o)?;
    match s.kind {
        Kind::Validate => validate(&payload(s)?, &tol),
        Kind::Induce => induce_kind(&payload(s)?, &tol),
        Kind::Classify => classify(&payload(s)?, &tol),
        Kind::Curvature => curvature(&payload(s)?, &tol),
        Kind::Canonical => canonical(&payload(s)?, &tol),
        Kind::Solve => solve(&payload(s)?, &tol),
        Kind::Theorem31 => theorem(
            &payload(s)?,
            o.cor32_reading.unwrap_or(Cor32Reading::Squared),
            &tol,
        ),
        Kind::Suite => {
            let p: SuitePayload = if s.payload.is_null() {
                SuitePayload::default()
            } else {
                payload(s)?
            };
            Ok(run_suite(p.config(tol, o)))
        }
    }
}

fn output(report: Report, data: Option<Value>) -> Result<Output, InputError> {
    Ok(Output {
        report: report.finish(),
        data,
    })
}

fn validate(p: &ContactPointJson, tol: &Tolerance) -> Result<Output, InputError> {
    let point = p.to_point()?;
    let mut r = Report::new("validate");
    r.extend("contact", &validate_contact_axioms(&point, tol));
    output(r, None)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InducePayload {
    ambient: ComplexPointJson,
    #[serde(rename = "N")]
    normal: Vec<f64>,
}

fn induce_kind(p: &InducePayload, tol: &Tolerance) -> Result<Output, InputError> {
    let frame = norden_core::hypersurface::TimelikeNormalFrame::new(
        p.ambient.to_point()?,
        Vector::from_vec(p.normal.clone()),
        tol,
    )?;
    let s = induce(&frame, tol)?;
    let mut r = Report::new("induce");
    r.extend("induced", &s.validate(tol));
    r.push(Check::new(
        "pi_relations",
        pi_relations_residual(&s),
        tol.threshold(1.0),
    ));
    r.value("t", s.t);
    let data = serde_json::json!({
        "point": ContactPointJson::from_point(&s.point),
        "tangent_basis": matrix_to_rows(&s.tangent_basis),
    });
    output(r, Some(data))
}

#[derive(Debug, Deserialize)]
struct ClassifyPayload {
    #[serde(flatten)]
    point: ContactPointJson,
    #[serde(flatten)]
    f: FTensorJson,
    #[serde(default)]
    class: Option<ClassTag>,
    #[serde(default)]
    section: Option<[Vec<f64>; 2]>,
}

fn classify(p: &ClassifyPayload, tol: &Tolerance) -> Result<Output, InputError> {
    let point = p.point.to_point()?;
    let f = p.f.to_tensor(point.dim())?;
    let mut r = Report::new("classify");
    let forms = one_forms(&f, &point);
    r.value("theta_xi", forms.theta_xi);
    r.value("theta_star_xi", forms.theta_star_xi);
    let threshold = tol.threshold(f.form().max_abs());
    let mut members = Vec::new();
    for tag in ClassTag::ALL {
        let res = class_residual(&f, &point, tag);
        r.value(format!("residual.{tag}"), res);
        if res <= threshold {
            members.push(tag.to_string());
        }
    }
    r.finding(
        "members",
        if members.is_empty() {
            "none".to_string()
        } else {
            members.join(", ")
        },
    );
    if let Some(tag) = p.class {
        r.push(Check::new(
            format!("class.{tag}"),
            class_residual(&f, &point, tag),
            threshold,
        ));
    }
    if let Some([x, y]) = &p.section {
        let kind = classify_section(
            &point,
            &Vector::from_vec(x.clone()),
            &Vector::from_vec(y.clone()),
            tol,
        )?;
        r.finding("section", format!("{kind:?}"));
    }
    output(r, None)
}

struct Hypersurface {
    structure: norden_core::hypersurface::InducedStructure,
    point: ContactNordenPoint,
    shape: norden_core::hypersurface::ShapeOperator,
}

fn hypersurface(p: &HypersurfaceScenario, tol: &Tolerance) -> Result<Hypersurface, InputError> {
    let structure = induce(&p.frame(tol)?, tol)?;
    check_angle(&structure, &p.scalars, tol)?;
    let point = structure.point.clone();
    let shape = shape_from_class(&point, p.class, &p.scalars, tol)?;
    Ok(Hypersurface {
        structure,
        point,
        shape,
    })
}

fn curvature(p: &HypersurfaceScenario, tol: &Tolerance) -> Result<Output, InputError> {
    let h = hypersurface(p, tol)?;
    let pt = &h.point;
    let rr = gauss_induced_r(pt, &h.shape, &p.scalars, p.nu, p.nu_tilde);
    let mut r = Report::new("curvature");
    r.extend("induced", &h.structure.validate(tol));
    let scale = 1f64.max(rr.max_abs());
    r.push(Check::new(
        "curvature_like",
        is_curvature_like(&rr),
        tol.threshold(scale),
    ));
    r.push(Check::new(
        "gauss_identities",
        gauss_identities_residual(pt, &rr, &h.shape, &p.scalars, p.nu, p.nu_tilde),
        tol.threshold(scale),
    ));
    let cf = closed_form_scalars(&h.shape, &p.scalars, p.nu, p.nu_tilde, pt);
    let s = scalar_curvatures(&rr, pt)?;
    r.push(Check::new(
        "tau",
        relative_error(s.tau, cf.tau),
        tol.rel_tol,
    ));
    r.push(Check::new(
        "tau_tilde",
        relative_error(s.tau_tilde, cf.tau_tilde),
        tol.rel_tol,
    ));
    r.value("tau", s.tau);
    r.value("tau_tilde", s.tau_tilde);
    r.value("t", h.structure.t);
    output(r, None)
}

fn canonical(p: &HypersurfaceScenario, tol: &Tolerance) -> Result<Output, InputError> {
    let h = hypersurface(p, tol)?;
    let pt = &h.point;
    let rr = gauss_induced_r(pt, &h.shape, &p.scalars, p.nu, p.nu_tilde);
    let from_r = canonical_k_from_r(pt, &rr, &h.shape, p.scalars.t);
    let model = canonical_k_model(pt, &h.shape, &p.scalars, p.nu, p.nu_tilde)?;
    let mut r = Report::new("canonical");
    let scale = 1f64.max(from_r.max_abs()).max(model.k.max_abs());
    r.push(Check::new(
        "k_from_r_equals_model",
        from_r.max_abs_diff(&model.k) / scale,
        tol.rel_tol,
    ));
    r.push(Check::new(
        "k_kaehler",
        norden_core::contact_norden::kaehler_residual(&from_r, pt),
        tol.threshold(scale),
    ));
    r.push(Check::new(
        "tau_k",
        relative_error(model.closed.tau, model.contracted.tau),
        tol.rel_tol,
    ));
    r.push(Check::new(
        "tau_k_tilde",
        relative_error(model.closed.tau_tilde, model.contracted.tau_tilde),
        tol.rel_tol,
    ));
    r.value("tau_k", model.contracted.tau);
    r.value("tau_k_tilde", model.contracted.tau_tilde);
    if p.class == ClassTag::F4F5 {
        let params = OneForms::from_scalars(
            pt,
            p.scalars.theta_xi,
            p.scalars.theta_star_xi,
            &Vector::zeros(pt.dim()),
        );
        let f = class_form(ClassTag::F4F5, pt, &params)?;
        let t = norden_core::contact_norden::canonical_difference(&f, pt, tol)?;
        let data = MainClassData::new(pt.clone(), p.scalars.clone())?;
        r.push(Check::new(
            "difference_tensor",
            t.max_abs_diff(&canonical_difference_f45(&data)),
            tol.threshold(1f64.max(t.max_abs())),
        ));
    }
    output(r, None)
}

fn solve(p: &MainClassScenario, tol: &Tolerance) -> Result<Output, InputError> {
    let nupair = p.nupair();
    let mut r = Report::new("solve");
    r.value("radicand", solver_radicand(nupair, p.t));
    let (th, ths) = match solve_theta(nupair, p.t, p.branch()?, p.n, tol) {
        Ok(v) => v,
        Err(Error::DegenerateFlat {
            resolution: Some(v),
            ..
        }) => {
            r.finding(
                "flat",
                "flat ambient: the F0 hypersurface theta = theta* = 0 is the solution",
            );
            v
        }
        Err(Error::DegenerateFlat { radicand, .. }) => {
            r.push(Check::new(
                "radicand_positive",
                -radicand,
                -100.0 * tol.abs_tol,
            ));
            return output(r, None);
        }
        Err(e) => return Err(e.into()),
    };
    r.value("theta_xi", th);
    r.value("theta_star_xi", ths);
    let data = MainClassData::new(
        ContactNordenPoint::standard(p.n),
        p.scalars()?
            .with_dt(0.0)
            .with_xi_derivatives(0.0, 0.0)
            .with_thetas(th, ths),
    )?;
    let back = nu_from_scalars(&data);
    r.push(Check::new(
        "round_trip",
        relative_error(back.nu, nupair.nu).max(relative_error(back.nu_tilde, nupair.nu_tilde)),
        tol.rel_tol,
    ));
    output(r, None)
}

fn theorem(
    p: &MainClassScenario,
    reading: Cor32Reading,
    tol: &Tolerance,
) -> Result<Output, InputError> {
    let (th, ths) = match solve_theta(p.nupair(), p.t, p.branch()?, p.n, tol) {
        Ok(v) => v,
        Err(Error::DegenerateFlat {
            resolution: Some(v),
            ..
        }) => v,
        Err(e) => return Err(e.into()),
    };
    let point = ContactNordenPoint::standard(p.n);
    let t = theorem31(&point, p.t, th, ths, reading)?;
    let mut r = Report::new("theorem31");
    let scale =
        1.0 + (th * th + ths * ths) / (4.0 * (p.n * p.n) as f64) + p.nu.abs() + p.nu_tilde.abs();
    r.push(Check::new("k_residual", t.k_residual / scale, tol.rel_tol));
    r.push(Check::new(
        "tau",
        relative_error(t.tau, t.tau_contracted.tau),
        tol.rel_tol,
    ));
    r.push(Check::new(
        "tau_tilde",
        relative_error(t.tau_tilde, t.tau_contracted.tau_tilde),
        tol.rel_tol,
    ));
    r.value("theta_xi", th);
    r.value("theta_star_xi", ths);
    r.value("tau", t.tau);
    r.value("tau_tilde", t.tau_tilde);
    r.value("k_phi_holomorphic", t.k_phi_hol);
    r.value("k_totally_real", t.k_totally_real);
    r.finding("reading", reading.name());
    output(r, None)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuitePayload {
    seed: Option<u64>,
    trials: Option<usize>,
    n_values: Option<Vec<usize>>,
    #[serde(default)]
    fault_inject: bool,
    cor32_reading: Option<Cor32Reading>,
}

impl SuitePayload {
    fn config(self, tolerance: Tolerance, o: &Overrides) -> SuiteConfig {
        let d = SuiteConfig::default();
        SuiteConfig {
            seed: o.seed.or(self.seed).unwrap_or(d.seed),
            trials: o.trials.or(self.trials).unwrap_or(d.trials),
            n_values: o.n_values.clone().or(self.n_values).unwrap_or(d.n_values),
            tolerance,
            fault_inject: o.fault_inject || self.fault_inject,
            cor32_reading: o.cor32_reading.or(self.cor32_reading),
        }
    }
}

pub fn suite_config(o: &Overrides) -> Result<SuiteConfig, InputError> {
    let d = Tolerance::default();
    let tol = Tolerance::new(
        o.tolerance.abs_tol.unwrap_or(d.abs_tol),
        o.tolerance.rel_tol.unwrap_or(d.rel_tol),
    )?;
    Ok(SuitePayload::default().config(tol, o))
}

pub fn run_suite(config: SuiteConfig) -> Output {
    Output {
        report: suite(&config),
        data: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_json(v: Value) -> Result<Output, InputError> {
        let s = parse(&v.to_string())?;
        run(&s, &Overrides::default())
    }

    #[test]
    fn solve_anchor() {
        let out = run_json(serde_json::json!({
            "kind": "solve", "payload": {"n": 1, "t": 0.0, "nu": 1.0, "nu_tilde": 0.0, "epsilon": 1}
        }))
        .unwrap();
        assert!(out.report.passed);
        assert!((out.report.values["theta_xi"] - 2.0).abs() < 1e-12);
        assert!(out.report.values["theta_star_xi"].abs() < 1e-12);
    }

    #[test]
    fn validate_standard_and_riemannian() {
        let mut p = ContactPointJson::from_point(&ContactNordenPoint::standard(1));
        let ok = run_json(serde_json::json!({"kind": "validate", "payload": p})).unwrap();
        assert!(ok.report.passed);
        p.g = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let bad = run_json(serde_json::json!({"kind": "validate", "payload": p})).unwrap();
        assert!(!bad.report.passed);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse("{"), Err(InputError::Parse(_))));
        assert!(matches!(
            run_json(serde_json::json!({"kind": "solve", "payload": {"t": 0.0}})),
            Err(InputError::Schema { .. })
        ));
        assert!(matches!(
            parse(r#"{"kind": "plot"}"#),
            Err(InputError::Parse(_))
        ));
    }

    #[test]
    fn flat_solve_resolves_to_f0() {
        let out =
            run_json(serde_json::json!({"kind": "solve", "payload": {"n": 2, "t": 0.3}})).unwrap();
        assert!(out.report.passed);
        assert!(out.report.findings.contains_key("flat"));
    }

    #[test]
    fn hypersurface_kinds() {
        let amb = ComplexPointJson::from_point(
            &norden_core::complex_norden::ComplexNordenPoint::standard(3),
        );
        let s: f64 = 0.4;
        let normal = vec![s.sinh(), 0.0, 0.0, s.cosh(), 0.0, 0.0];
        let induced = run_json(
            serde_json::json!({"kind": "induce", "payload": {"ambient": amb, "N": normal}}),
        )
        .unwrap();
        assert!(
            induced.report.passed,
            "{:?}",
            induced.report.failures().collect::<Vec<_>>()
        );
        let t = induced.report.values["t"];
        for class in ["F0", "F4", "F5", "F4+F5", "F11"] {
            for kind in ["curvature", "canonical"] {
                let v = serde_json::json!({
                    "kind": kind,
                    "payload": {"ambient": amb, "N": normal, "class": class,
                        "scalars": {"t": t, "dt_xi": 0.2, "theta_xi": 0.7, "theta_star_xi": -0.4}, "nu": 1.3, "nu_tilde": -0.5}
                });
                let out = run_json(v.clone()).unwrap();
                assert!(
                    out.report.passed,
                    "{kind} {class}: {:?}",
                    out.report.failures().collect::<Vec<_>>()
                );
                let mut v = v;
                v["payload"]["scalars"]["t"] = (t + 0.1).into();
                assert!(matches!(
                    run_json(v),
                    Err(InputError::Invalid(Error::AngleMismatch { .. }))
                ));
            }
        }
    }
}
