//! κ plus corrections e_T δ_T over unions T of the blocks of a partition
//! stays an effective combination of boundary divisors.
//!
//! ```text
//! cargo run --example lemma44
//! ```

use std::collections::BTreeMap;

use fabercone::fulton::{build_v, lemma44_check, BlockPartition};
use fabercone::rational::{format_rational, int, Rational};
use fabercone::MarkSet;

pub fn run() -> fabercone::Result<Vec<String>> {
    let mut lines = Vec::new();
    for (n, partition, corrections) in [
        (4, "12|34", vec![("12", int(-1)), ("13", int(-1))]),
        (5, "12|345", vec![("12", int(-1))]),
        (6, "123|456", vec![("123", int(-1))]),
        (6, "12|34|56", vec![("12", int(-1)), ("34", int(2)), ("56", int(-1))]),
    ] {
        let v = build_v(n)?;
        let p = BlockPartition::parse(n, partition)?;
        let e: BTreeMap<MarkSet, Rational> = corrections
            .iter()
            .map(|(t, x)| (MarkSet::from_marks(t.chars().map(|c| c.to_digit(10).unwrap())), x.clone()))
            .filter(|(t, _)| p.is_coarser(*t))
            .collect();
        let outcome = lemma44_check(&v, &p, &e)?;
        outcome.certificate.verify(&outcome.target, &outcome.effective_cone)?;
        let shown: Vec<String> = e.iter().map(|(t, x)| format!("e_{t} = {}", format_rational(x))).collect();
        lines.push(format!(
            "n = {n}, P = {partition}, {}: {}",
            if shown.is_empty() { "no corrections".to_string() } else { shown.join(", ") },
            if outcome.certificate.is_member() { "effective" } else { "not effective" }
        ));
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
