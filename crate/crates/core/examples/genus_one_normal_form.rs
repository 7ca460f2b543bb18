//! On M̄_{1,n} the λ and ψ classes are boundary combinations; the shipped
//! relation table rewrites a class without them, leaving every stratum
//! value unchanged.
//!
//! ```text
//! cargo run --example genus_one_normal_form
//! ```

use fabercone::combinat::{enumerate_strata, ClassIndex, ModuliSig};
use fabercone::divisor::{genus_one_normal_form, DivisorClass};
use fabercone::intersection::stratum_functional;
use fabercone::rational::int;

pub fn run() -> fabercone::Result<Vec<String>> {
    let sig = ModuliSig::new(1, 3)?;
    let d = DivisorClass::from_coeffs(
        sig,
        [(ClassIndex::Lambda, int(3)), (ClassIndex::Psi(1), int(2)), (ClassIndex::Psi(3), int(-1)), (ClassIndex::DeltaIrr, int(1))],
    )?;
    let normal = genus_one_normal_form(&d)?;
    let same = enumerate_strata(sig)?.iter().map(stratum_functional).all(|f| f.evaluate(&d) == f.evaluate(&normal));
    Ok(vec![
        format!("input:       {}", d.to_json_string()),
        format!("normal form: {}", normal.to_json_string()),
        format!("equal on every stratum: {same}"),
    ])
}

#[allow(dead_code)]
fn main() -> fabercone::Result<()> {
    for line in run()? {
        println!("{line}");
    }
    Ok(())
}
