//! Report payloads for the artifact format.
//!
//! Every report carries an anchor naming the property it certifies, an
//! overall verdict and the per-degree residual term counts behind it.

use serde_json::{json, Value};

use crate::artifact::{encode_hseries, encode_scalar, report_payload, Artifact, Kind};
use crate::associator::{Associator, AssociatorReport};
use crate::cohomology::CohomReport;
use crate::selftest::Check;
use crate::specialize::{BialgebraReport, FlatnessReport, Quantization, QuantizeReport};
use crate::twist::{FormReport, QuasiReport, QybeReport, Twist};
use crate::ualg::{make_r, UElement};
use crate::Scalar;

pub const ASSOCIATOR: &str = "associator.relations";
pub const TWIST: &str = "twist.coboundary";
pub const RMATRIX: &str = "rmatrix.quasitriangular";
pub const COHOMOLOGY: &str = "cohomology.dimensions";
pub const BIALGEBRA: &str = "bialgebra.axioms";
pub const QUANTIZE: &str = "quantize.hopf_structure";
pub const SELFTEST: &str = "selftest.fixtures";

fn zeros(v: &[usize]) -> bool {
    v.iter().all(|&k| k == 0)
}

fn report(anchor: &str, ok: bool, checks: Value) -> Artifact {
    Artifact::new(Kind::Report, report_payload(anchor, ok, checks))
}

pub fn associator(a: &Associator, rep: &AssociatorReport) -> Artifact {
    let checks = json!({
        "duality": rep.duality,
        "hexagon": rep.hexagon,
        "order": rep.order,
        "pentagon": rep.pentagon,
        "phi1_zero": a.order < 1 || a.phi.comp(1).is_zero(),
        "phi2_coefficient": a.phi2_coefficient().as_ref().map(encode_scalar),
    });
    report(ASSOCIATOR, rep.ok() && (a.order < 1 || a.phi.comp(1).is_zero()), checks)
}

/// Residuals of `d̃(J) = Φ`, of `J_0 = 1` and of `J_1 = −r/2`.
pub fn twist(t: &Twist, residual: &[usize]) -> Artifact {
    let unit = t.j.comp(0).sub(&UElement::one(2)).len();
    let first = if t.order >= 1 { t.j.comp(1).sub(&make_r().scale(&Scalar::frac(-1, 2))).len() } else { 0 };
    let checks = json!({
        "coboundary": residual,
        "first_order": first,
        "lambda_corrections": t.log.iter().filter(|l| l.lambda_nonzero).count(),
        "order": t.order,
        "solution_space_dims": t.log.iter().map(|l| l.solution_space_dim).collect::<Vec<_>>(),
        "unit": unit,
    });
    report(TWIST, zeros(residual) && unit == 0 && first == 0, checks)
}

/// `rebuilt` is the term count of `R − R(J)` when a twist was supplied.
pub fn rmatrix(q: &QybeReport, form: &FormReport, quasi: Option<&QuasiReport>, rebuilt: Option<usize>) -> Artifact {
    let mut checks = json!({
        "form_first_slot_a": form.first_slot_a,
        "form_second_slot_b": form.second_slot_b,
        "qybe": q.qybe,
        "qybe_recursion": q.recursion,
    });
    let m = checks.as_object_mut().expect("object");
    if let Some(x) = quasi {
        m.insert("quasi_first".into(), json!(x.first));
        m.insert("quasi_second".into(), json!(x.second));
        m.insert("twisted_associator".into(), json!(x.twisted_associator));
        m.insert("phi_invariance".into(), json!(x.phi_invariance));
    }
    if let Some(n) = rebuilt {
        m.insert("matches_twist".into(), json!(n));
    }
    let ok = q.ok() && form.ok() && quasi.map_or(true, QuasiReport::ok) && rebuilt.map_or(true, |n| n == 0);
    report(RMATRIX, ok, checks)
}

/// Cohomology reports are informational; `expected` turns them into a check.
pub fn cohomology(rep: &CohomReport, expected: Option<usize>) -> Artifact {
    let checks = json!({
        "complex": rep.complex.name(),
        "degree": rep.degree,
        "dim_cohomology": rep.dim_cohomology,
        "dim_kernel": rep.dim_kernel,
        "dim_space": rep.dim_space,
        "expected": expected,
        "generators": rep.generators.iter().map(crate::artifact::encode_uelement).collect::<Vec<_>>(),
        "h": rep.h,
        "rank_in": rep.rank_in,
        "rank_out": rep.rank_out,
    });
    report(COHOMOLOGY, expected.map_or(true, |e| e == rep.dim_cohomology), checks)
}

pub fn bialgebra(rep: &BialgebraReport) -> Artifact {
    let checks = json!({
        "antisym_bracket": rep.antisym_bracket,
        "antisym_cobracket": rep.antisym_cobracket,
        "cocycle": rep.cocycle,
        "cojacobi": rep.cojacobi,
        "jacobi": rep.jacobi,
    });
    report(BIALGEBRA, rep.ok(), checks)
}

/// Quantization and flatness residuals, plus the truncated R-matrix and generator coproducts.
pub fn quantize(q: &Quantization, rep: &QuantizeReport, flat: &FlatnessReport) -> Artifact {
    let d = &q.double;
    let names: Vec<String> = (0..2 * d.dim()).map(|g| d.generator_name(g as u8)).collect();
    let coproducts: Vec<Value> = (0..2 * d.dim()).map(|g| encode_hseries(&q.coproduct(&d.generator(g as u8, q.order)), &names)).collect();
    let checks = json!({
        "braiding": rep.braiding,
        "coassociativity": rep.coassociativity,
        "cobracket_limit": rep.cobracket_limit,
        "convention": [rep.convention.0, rep.convention.1],
        "coproducts": coproducts,
        "flatness": {
            "associativity": flat.associativity,
            "bracket_limit": flat.bracket_limit,
            "coassociativity": flat.coassociativity,
            "cobracket_limit": flat.cobracket_limit,
            "counit": flat.counit,
            "degree_cap": flat.degree_cap,
            "ell_b_linear": flat.ell_b_linear,
            "ell_counit": flat.ell_counit,
            "ell_kills_a_duals": flat.ell_kills_a_duals,
            "lambda_not_onto": flat.lambda_not_onto,
            "lambda_valuation": flat.lambda_valuation,
            "multiplicativity": flat.multiplicativity,
            "transport_failures": flat.transport_failures,
            "unit": flat.unit,
        },
        "flatness_hypothesis": rep.flatness_hypothesis,
        "input_cobracket_limit": rep.input_cobracket_limit,
        "order": rep.order,
        "quasi_first": rep.quasi_first,
        "quasi_second": rep.quasi_second,
        "qybe": rep.qybe,
        "r_linear": rep.r_linear,
        "r_matrix": encode_hseries(&q.r, &names),
        "twist_inverse": rep.twist_inverse,
    });
    report(QUANTIZE, rep.ok() && flat.ok(), checks)
}

pub fn selftest(checks: &[Check]) -> Artifact {
    let list: Vec<Value> = checks.iter().map(|c| json!({"detail": c.detail, "name": c.name, "ok": c.ok})).collect();
    report(SELFTEST, checks.iter().all(|c| c.ok), Value::Array(list))
}

/// Human-readable lines for a report's scalar and array entries.
pub fn summary_lines(a: &Artifact) -> Vec<String> {
    let mut out = Vec::new();
    let anchor = a.payload.get("anchor").and_then(Value::as_str).unwrap_or("?");
    let ok = a.payload.get("ok").and_then(Value::as_bool).unwrap_or(false);
    out.push(format!("{anchor}: {}", if ok { "ok" } else { "FAILED" }));
    match a.payload.get("checks") {
        Some(Value::Object(m)) => {
            for (k, v) in m {
                if matches!(k.as_str(), "coproducts" | "r_matrix" | "generators") {
                    continue;
                }
                if let Value::Object(inner) = v {
                    for (k2, v2) in inner {
                        out.push(format!("  {k}.{k2}: {v2}"));
                    }
                } else {
                    out.push(format!("  {k}: {v}"));
                }
            }
        }
        Some(Value::Array(items)) => {
            for it in items {
                let name = it.get("name").and_then(Value::as_str).unwrap_or("?");
                let ok = it.get("ok").and_then(Value::as_bool).unwrap_or(false);
                let detail = it.get("detail").and_then(Value::as_str).unwrap_or("");
                out.push(format!("  [{}] {name}: {detail}", if ok { "ok" } else { "FAIL" }));
            }
        }
        _ => {}
    }
    out
}
