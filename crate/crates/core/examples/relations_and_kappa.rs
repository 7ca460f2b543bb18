//! The quotient V(n) of boundary coordinates on M̄_{0,n} by the four-point
//! relations, the κ class in it, and its symmetric part.
//!
//! ```text
//! cargo run --example relations_and_kappa
//! ```

use fabercone::cone::membership;
use fabercone::fulton::{build_e, build_v, expected_dimension, kappa_class, quotient_dimension, symmetric_invariants};
use fabercone::rational::format_vector;

pub fn run() -> fabercone::Result<Vec<String>> {
    let mut lines = Vec::new();
    for n in 4..=7 {
        lines.push(format!("n = {n}: dim V = {} (closed form {})", quotient_dimension(n)?, expected_dimension(n)));
    }
    for n in 4..=6 {
        let v = build_v(n)?;
        let kappa = v.project(&kappa_class(&v));
        let effective = membership(&kappa, &build_e(&v)?)?.is_member();
        lines.push(format!("n = {n}: kappa = {} effective: {effective}", format_vector(&kappa)));
    }
    let v6 = build_v(6)?;
    lines.push(format!("symmetric invariants in V(6): {}", symmetric_invariants(&v6)?.len()));
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> fabercone::Result<()> {
    for line in run()? {
        println!("{line}");
    }
    Ok(())
}
