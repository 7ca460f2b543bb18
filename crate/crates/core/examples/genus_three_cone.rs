//! The F-nef cone of M̄_3 in coordinates (a, b_irr, b_1): four inequalities
//! and three extremal rays.
//!
//! ```text
//! cargo run --example genus_three_cone
//! ```

use fabercone::cli::format_functional;
use fabercone::combinat::ModuliSig;
use fabercone::cone::{extremal_rays, facets};
use fabercone::intersection::faber_cone;
use fabercone::rational::format_vector;

pub fn run() -> fabercone::Result<Vec<String>> {
    let fc = faber_cone(ModuliSig::new(3, 0)?)?;
    let mut lines: Vec<String> = fc.functionals.iter().map(|f| format!("{}: {} >= 0", f.label, format_functional(f))).collect();
    let rays = extremal_rays(&fc.cone)?;
    lines.extend(rays.rays.iter().map(|r| format!("ray {}", format_vector(r))));
    let irredundant = facets(&rays)?;
    lines.push(format!("{} of {} inequalities are facets", irredundant.inequalities.len(), fc.cone.inequalities.len()));
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> fabercone::Result<()> {
    for line in run()? {
        println!("{line}");
    }
    Ok(())
}
