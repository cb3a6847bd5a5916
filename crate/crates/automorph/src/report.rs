//! Text form of a [`VerifyReport`]: `key: value` lines in a fixed order.
//!
//! ```text
//! jacobian: 1
//! jacobian_constant: true
//! constant_value: 1
//! keller: true
//! E1: 0
//! E2: 0
//! minor_equations: 3
//! minor_equations_failed: 0
//! ```
//!
//! Each failed minor equation adds a line `failed: {1,3} residual: ...`
//! with 1-based retained indices.

use std::fmt::Write;

use automorph_core::verify::VerifyReport;

pub fn render_report(report: &VerifyReport) -> String {
    let mut out = String::new();
    let constant = report.constant_value.as_ref().map_or_else(|| "none".to_string(), ToString::to_string);
    writeln!(out, "jacobian: {}", report.jacobian).unwrap();
    writeln!(out, "jacobian_constant: {}", report.jacobian_is_constant).unwrap();
    writeln!(out, "constant_value: {constant}").unwrap();
    writeln!(out, "keller: {}", report.is_keller()).unwrap();
    for (k, e) in report.minor_sums.iter().enumerate() {
        writeln!(out, "E{}: {e}", k + 1).unwrap();
    }
    writeln!(out, "minor_equations: {}", report.minor_equations.len()).unwrap();
    writeln!(out, "minor_equations_failed: {}", report.failed_minor_equations().count()).unwrap();
    for eq in report.failed_minor_equations() {
        let set: Vec<String> = eq.retained.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(out, "failed: {{{}}} residual: {}", set.join(","), eq.residual).unwrap();
    }
    out
}
