//! F-nef verdicts for the classic divisor classes on M̄_g: the
//! Cornalba–Harris class fails on the elliptic tail once g ≥ 3, while
//! 11λ − δ and 10λ − 2δ + δ_irr pass and satisfy the nefness criterion.
//!
//! ```text
//! cargo run --example named_classes
//! ```

use fabercone::divisor::{ch_gamma, eleven_lambda_minus_delta, ten_lambda_minus_two_delta};
use fabercone::intersection::{is_f_nef, nef_criterion_61};
use fabercone::rational::format_rational;

pub fn run() -> fabercone::Result<Vec<String>> {
    let mut lines = Vec::new();
    for g in 2..=6 {
        for (name, d) in [
            ("Cornalba-Harris", ch_gamma(g)?),
            ("11 lambda - delta", eleven_lambda_minus_delta(g)?),
            ("10 lambda - 2 delta + delta_irr", ten_lambda_minus_two_delta(g)?),
        ] {
            let report = is_f_nef(&d)?;
            let nef = nef_criterion_61(&d)?;
            let mut line = format!(
                "g = {g}  {name:<32} F-nef: {:<5} nef by criterion: {:<5} tight rank {}",
                report.verdict, nef.holds, report.tight_rank
            );
            for (s, v) in &report.violated {
                line.push_str(&format!("  [{s} = {}]", format_rational(v)));
            }
            lines.push(line);
        }
    }
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> fabercone::Result<()> {
    for line in run()? {
        println!("{line}");
    }
    Ok(())
}
