//! The exact polyhedral kernel on its own: inequalities to rays and back,
//! and membership with a certificate that can be checked independently.
//!
//! ```text
//! cargo run --example cone_kernel
//! ```

use fabercone::cone::{extremal_rays, facets, membership, Certificate};
use fabercone::rational::{format_vector, frac, int};
use fabercone::ConeH;

pub fn run() -> fabercone::Result<Vec<String>> {
    // x ≥ 0, y ≥ 0, z ≥ 0, x + y ≥ 2z, with one equation y = x
    let h = ConeH::new(
        3,
        vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(1)],
            vec![int(1), int(1), int(-2)],
        ],
        vec![vec![int(1), int(-1), int(0)]],
    )?;
    let v = extremal_rays(&h)?;
    let mut lines: Vec<String> = v.rays.iter().map(|r| format!("ray {}", format_vector(r))).collect();
    let back = facets(&v)?;
    lines.push(format!("{} facets, {} equations", back.inequalities.len(), back.equations.len()));
    for target in [vec![int(2), int(2), int(1)], vec![frac(1, 2), frac(1, 2), int(1)]] {
        let cert = membership(&target, &v)?;
        cert.verify(&target, &v)?;
        let verdict = match &cert {
            Certificate::Member { coefficients, .. } => format!("member with {} generators", coefficients.len()),
            Certificate::Separated { functional, value_on_target } => {
                format!("separated by {} with value {value_on_target}", format_vector(functional))
            }
        };
        lines.push(format!("{}: {verdict}", format_vector(&target)));
        lines.push(format!("  {}", serde_json::to_string(&cert)?));
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
