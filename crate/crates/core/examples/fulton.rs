//! Asks whether every F-nef class on M̄_{0,n} is an effective sum of
//! boundary divisors, with an exact certificate per extremal ray.
//!
//! ```text
//! cargo run --release --example fulton -- 6 /tmp/fulton-certificates
//! ```

use std::path::Path;

use fabercone::fulton::{fulton_question, write_certificates, CertificateFile, FultonOptions};

pub fn run(n: u32, certificates: Option<&Path>) -> fabercone::Result<Vec<String>> {
    let answer = fulton_question(n, &FultonOptions::default())?;
    let mut lines = vec![
        format!("dim V({n}) = {}", answer.dim),
        format!("N: {} inequalities, {} extremal rays", answer.n_cone.inequalities.len(), answer.n_rays.rays.len()),
        format!("E: {} generators", answer.e_cone.rays.len()),
    ];
    for (c, target) in answer.certificates.iter().zip(answer.targets()) {
        c.verify(&target, &answer.e_cone)?;
    }
    lines.push(format!("all {} certificates re-verified", answer.certificates.len()));
    if let Some(dir) = certificates {
        let paths = write_certificates(dir, &answer)?;
        for p in &paths {
            let file: CertificateFile = serde_json::from_str(&std::fs::read_to_string(p)?)?;
            file.verify()?;
        }
        lines.push(format!("wrote and re-read {} files in {}", paths.len(), dir.display()));
    }
    lines.push(if answer.answer { "YES" } else { "NO" }.into());
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> fabercone::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|a| a.parse().ok()).unwrap_or(5);
    let dir = args.next();
    for line in run(n, dir.as_deref().map(Path::new))? {
        println!("{line}");
    }
    Ok(())
}
