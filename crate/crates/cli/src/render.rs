//! Label-oriented JSON views of library reports.
//!
//! The library speaks point indices; everything leaving the CLI speaks
//! labels, matching the document schemas, so reports can be read without
//! the original point order at hand.

use metricfix_core::games::{CertifyReport, Game};
use metricfix_core::setvalued::{ContractionCertificate, SolveOutcome, SolveTrace};
use metricfix_core::space::{index_to_profile, ConvexityReport, ValidationReport};
use serde_json::{json, Value};

pub type Labeler<'a> = &'a dyn Fn(usize) -> String;

/// Product-space label of a flat profile index, in the same form the
/// product space itself uses: per-player labels joined by commas.
pub fn profile_label(game: &Game, flat: usize) -> String {
    index_to_profile(game.sizes(), flat)
        .iter()
        .enumerate()
        .map(|(p, &s)| game.strategy_space(p).label(s).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn validation_json(report: &ValidationReport, label: Labeler) -> Value {
    json!({
        "passed": report.passed,
        "tol": report.tol,
        "violations": report.violations.iter().map(|v| json!({
            "axiom": v.axiom,
            "witness": v.witness.iter().map(|&i| label(i)).collect::<Vec<_>>(),
            "magnitude": v.magnitude,
        })).collect::<Vec<_>>(),
    })
}

pub fn convexity_json(report: &ConvexityReport, label: Labeler) -> Value {
    json!({
        "all_pass": report.all_pass,
        "tol": report.tol,
        "pairs": report.pairs.iter().map(|p| json!({
            "i": label(p.i),
            "j": label(p.j),
            "passed": p.passed,
            "witness": p.witness.map(label),
            "best_gap": p.best_gap,
        })).collect::<Vec<_>>(),
    })
}

pub fn components_json(classes: &[Vec<usize>], label: Labeler) -> Value {
    Value::Array(
        classes
            .iter()
            .map(|class| json!(class.iter().map(|&i| label(i)).collect::<Vec<_>>()))
            .collect(),
    )
}

/// `per_point` stays index-aligned with the input point order; everything
/// else is labeled.
pub fn certificate_json(c: &ContractionCertificate, label: Labeler) -> Value {
    json!({
        "kind": c.kind,
        "modulus": c.modulus,
        "holds": c.holds,
        "boundary": c.boundary,
        "radius": c.radius,
        "neighborhood": c.neighborhood,
        "per_point": c.per_point,
        "worst_pair": c.worst_pair.as_ref().map(|w| json!({
            "x": label(w.x),
            "y": label(w.y),
            "ratio": w.ratio,
        })),
        "unevaluable": c.unevaluable.iter()
            .map(|&(a, b)| json!([label(a), label(b)]))
            .collect::<Vec<_>>(),
        "isolated": c.isolated.iter().map(|&i| label(i)).collect::<Vec<_>>(),
    })
}

pub fn certificate_summary(name: &str, c: &ContractionCertificate) -> String {
    let mut line = format!(
        "{}: modulus {}, {}",
        name,
        c.modulus,
        if c.holds { "holds" } else { "fails" }
    );
    if c.boundary {
        line.push_str(" (at the boundary)");
    }
    if !c.unevaluable.is_empty() {
        line.push_str(&format!(", {} unevaluable pair(s)", c.unevaluable.len()));
    }
    line
}

pub fn trace_json(t: &SolveTrace, label: Labeler) -> Value {
    let outcome = match &t.outcome {
        SolveOutcome::FixedPoint { at } => json!({"kind": "fixed-point", "at": label(*at)}),
        SolveOutcome::CycleDetected { revisited } => {
            json!({"kind": "cycle-detected", "revisited": label(*revisited)})
        }
        SolveOutcome::MaxIterReached => json!({"kind": "max-iter-reached"}),
    };
    json!({
        "iterates": t.iterates.iter().map(|&i| label(i)).collect::<Vec<_>>(),
        "gaps": t.gaps,
        "steps": t.steps(),
        "outcome": outcome,
    })
}

pub fn trace_summary(t: &SolveTrace, label: Labeler) -> String {
    match &t.outcome {
        SolveOutcome::FixedPoint { at } => {
            format!("fixed point at '{}' after {} step(s)", label(*at), t.steps())
        }
        SolveOutcome::CycleDetected { revisited } => format!(
            "cycle detected, '{}' revisited after {} step(s)",
            label(*revisited),
            t.steps()
        ),
        SolveOutcome::MaxIterReached => {
            format!("no fixed point within {} step(s)", t.steps())
        }
    }
}

pub fn certify_json(report: &CertifyReport, label: Labeler) -> Value {
    json!({
        "condition": report.condition,
        "space_checks": report.space_checks,
        "br_certificate": certificate_json(&report.br_certificate, label),
        "verdict": report.verdict,
    })
}
