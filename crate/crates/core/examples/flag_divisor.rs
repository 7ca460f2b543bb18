//! The flag divisor on M̄_{g,n}: zero on every stratum of the last family
//! and positive on all others once a and b_irr are large enough.
//!
//! ```text
//! cargo run --example flag_divisor
//! ```

use fabercone::divisor::flag_divisor;
use fabercone::intersection::verify_flag_divisor;
use fabercone::rational::{frac, int, Rational};

pub fn run() -> fabercone::Result<Vec<String>> {
    let cases: [(u32, u32, Rational, Rational); 4] = [
        (1, 2, int(23), int(2)),
        (2, 1, int(17), frac(3, 2)),
        (3, 1, int(40), int(3)),
        (4, 0, int(100), int(13)),
    ];
    let mut lines = Vec::new();
    for (g, n, a, b) in cases {
        let d = flag_divisor(g, n, a.clone(), b.clone())?;
        let report = verify_flag_divisor(g, n, a, b)?;
        lines.push(d.to_json_string());
        lines.push(format!(
            "  conditions met: {}, zero on type 6: {}, positive elsewhere: {}",
            report.conditions_met, report.zero_on_t6, report.positive_on_rest
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
