//! The class 30λ − 3δ_irr − 6δ_1 − 6δ_2 − 2δ_3 − 4δ_4 − 6δ_5 on M̄_10 is an
//! extremal ray of the F-nef cone: six independent strata are tight.
//!
//! ```text
//! cargo run --example genus_ten_vertex
//! ```

use fabercone::cone::extremal_rays;
use fabercone::divisor::genus_ten_vertex;
use fabercone::intersection::{divisor_from_b_vector, faber_cone, is_f_nef, nef_criterion_61};
use fabercone::rational::{format_vector, primitive};

pub fn run() -> fabercone::Result<Vec<String>> {
    let d = genus_ten_vertex();
    let report = is_f_nef(&d)?;
    let mut lines = vec![
        format!("F-nef: {}", report.verdict),
        format!("tight strata: {}, tight rank {} in dimension {}", report.tight.len(), report.tight_rank, d.sig.coordinates().len()),
    ];
    for s in &report.tight {
        lines.push(format!("  tight on {s}"));
    }
    let fc = faber_cone(d.sig)?;
    let rays = extremal_rays(&fc.cone)?;
    let position = rays.rays.iter().position(|r| {
        let c = divisor_from_b_vector(d.sig, r).expect("ray has the cone's dimension");
        primitive(&c.to_vector()) == primitive(&d.to_vector())
    });
    match position {
        Some(k) => lines.push(format!("ray {k} of {}: {}", rays.rays.len(), format_vector(&rays.rays[k]))),
        None => lines.push("not among the extremal rays".into()),
    }
    lines.push(format!("nef by the coefficient criterion: {}", nef_criterion_61(&d)?.holds));
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> fabercone::Result<()> {
    for line in run()? {
        println!("{line}");
    }
    Ok(())
}
