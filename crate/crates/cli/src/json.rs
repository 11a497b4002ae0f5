//! JSON encodings of core results.

use fbc_core::dynamics::{PeriodicOrbit, StretchEstimate, StretchPair};
use fbc_core::{AbelianInvariants, Fingerprint};
use serde_json::{json, Value};

/// Torsion coefficients as numbers, or as strings when they overflow.
pub(crate) fn torsion(inv: &AbelianInvariants) -> Value {
    match inv.torsion_u64() {
        Some(t) => json!(t),
        None => json!(inv.torsion.iter().map(ToString::to_string).collect::<Vec<_>>()),
    }
}

fn estimate(e: &StretchEstimate) -> Value {
    json!({
        "lambda_hat": e.lambda_hat,
        "converged": e.converged,
        "truncated": e.truncated,
        "seed": e.seed().to_string(),
        "window": e.window(),
    })
}

pub(crate) fn stretch_pair(p: &StretchPair) -> Value {
    json!({
        "forward": estimate(&p.forward),
        "backward": estimate(&p.backward),
        "min": p.min(),
        "max": p.max(),
    })
}

pub(crate) fn runs(e: &StretchEstimate) -> Value {
    e.runs
        .iter()
        .map(|r| {
            json!({
                "seed": r.seed.to_string(),
                "estimate": r.estimate,
                "window": r.window,
                "converged": r.converged,
                "truncated": r.truncated,
                "iterations": r.lengths.len() - 1,
                "final_length": r.lengths.last(),
            })
        })
        .collect()
}

pub(crate) fn orbits(orbits: &[PeriodicOrbit]) -> Value {
    orbits
        .iter()
        .map(|o| json!({ "class": o.rep.to_word().to_string(), "period": o.period }))
        .collect()
}

pub(crate) fn fingerprint(fp: &Fingerprint) -> Value {
    fp.entries
        .iter()
        .map(|e| json!({ "group": e.label, "order": e.order, "homs": e.homs, "epis": e.epis }))
        .collect()
}
