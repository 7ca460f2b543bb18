//! Lists the one-dimensional boundary strata of M̄_{g,n} with the linear
//! functional each one imposes on divisor coefficients.
//!
//! ```text
//! cargo run --example strata -- 2 1
//! ```

use fabercone::cli::format_functional;
use fabercone::combinat::{enumerate_strata_with_merges, ModuliSig};
use fabercone::intersection::stratum_functional;

pub fn run(g: u32, n: u32) -> fabercone::Result<Vec<String>> {
    let sig = ModuliSig::with_strata(g, n)?;
    let mut lines = vec![format!("{sig}: dimension {}, {} coordinates", sig.dimension(), sig.coordinates().len())];
    for m in enumerate_strata_with_merges(sig)? {
        let f = stratum_functional(&m.representative);
        lines.push(format!("{}  :  {} >= 0", m.representative, format_functional(&f)));
        for other in &m.merged {
            lines.push(format!("    same functional as {other}"));
        }
    }
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> fabercone::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (g, n) = match args[..] {
        [g, n] => (g, n),
        _ => (2, 1),
    };
    for line in run(g, n)? {
        println!("{line}");
    }
    Ok(())
}
