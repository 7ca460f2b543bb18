//! Command line front end. [`run`] parses arguments, writes to the given
//! streams and returns the process exit code:
//! `0` success, `1` negative verdict, `2` input error, `3` resource limit.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed, Zero};

use crate::cache::Cache;
use crate::combinat::{enumerate_strata_with_merges, ClassIndex, MarkSet, ModuliSig};
use crate::cone::{extremal_rays, facets, membership, Certificate, ConeV, MatrixFile};
use crate::divisor::{
    ch_gamma, eleven_lambda_minus_delta, flag_divisor, genus_one_normal_form, genus_ten_vertex, ten_lambda_minus_two_delta,
    DivisorClass,
};
use crate::error::{Error, Result};
use crate::fulton::{self, BlockPartition, CertificateFile, FultonOptions};
use crate::intersection::{faber_cone, is_f_nef, nef_criterion_61, stratum_functional, verify_flag_divisor, LinearFunctional};
use crate::rational::{format_rational, format_vector, parse_rational, parse_vector, Rational};

#[derive(Parser, Debug)]
#[command(name = "fabercone", version, about = "Exact F-nef cones of moduli spaces of pointed curves")]
struct Cli {
    /// Worker threads for the parallel parts (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the one-dimensional boundary strata and their functionals.
    Strata {
        #[arg(short)]
        g: u32,
        #[arg(short)]
        n: u32,
        #[arg(long)]
        json: bool,
        /// Also list parameter strata merged because of equal functionals.
        #[arg(long)]
        verbose: bool,
    },
    /// Decide whether a divisor (JSON file, `-` for stdin) is F-nef.
    Fnef {
        file: PathBuf,
        /// Print the full report as JSON.
        #[arg(long)]
        report: bool,
        /// For genus one, rewrite in the normal form without λ and ψ first.
        #[arg(long)]
        normalize: bool,
    },
    /// Extremal rays of the F-nef cone in coordinates (a, b_irr, c_k, b_{i|S}).
    FaberCone {
        #[arg(short)]
        g: u32,
        #[arg(short)]
        n: u32,
        #[arg(long)]
        rays: bool,
        /// Print the ray description as a matrix file instead.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        no_cache: bool,
    },
    /// Is N contained in E in genus zero?
    Fulton {
        #[arg(short)]
        n: u32,
        /// Write one certificate file per extremal ray of N into this directory.
        #[arg(long)]
        certificates: Option<PathBuf>,
        /// Wall-clock budget for the ray enumeration, in seconds.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        max_rays: Option<usize>,
        /// Save and resume partial ray enumeration progress here.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = fulton::DEFAULT_MAX_N)]
        max_n: u32,
    },
    /// Decide membership of a vector in a cone, or re-verify a certificate file.
    Membership {
        /// Matrix file of the cone (generators, or inequalities with --h).
        #[arg(long, required_unless_present = "verify")]
        cone: Option<PathBuf>,
        /// The vector, e.g. "(1,2,1/3)".
        #[arg(long, required_unless_present = "verify", allow_hyphen_values = true)]
        vector: Option<String>,
        /// Read the cone file as an inequality description.
        #[arg(long)]
        h: bool,
        /// Write a self-contained certificate file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["cone", "vector"])]
        verify: Option<PathBuf>,
    },
    /// Effectivity of κ + Σ e_T δ_T over unions T of the blocks of a partition.
    Lemma44 {
        #[arg(short)]
        n: u32,
        /// Blocks separated by '|', e.g. "12|345" or "1,2|3,4,5".
        #[arg(long)]
        partition: String,
        /// Correction coefficients "T=value", e.g. "12=-1" (repeatable).
        #[arg(long = "e", allow_hyphen_values = true)]
        e: Vec<String>,
    },
    /// The flag divisor with its checks.
    FlagDivisor {
        #[arg(short)]
        g: u32,
        #[arg(short)]
        n: u32,
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        verify: bool,
    },
    /// Boundary expansion of κ on M̄_{0,n} and its membership in E.
    Kappa {
        #[arg(short)]
        n: u32,
    },
    /// Dimension of the relation quotient V(n).
    Relations {
        #[arg(short)]
        n: u32,
        #[arg(long)]
        verbose: bool,
    },
    /// Print a named divisor class as JSON.
    Divisor {
        #[arg(long, value_enum)]
        named: Named,
        #[arg(short, default_value_t = 10)]
        g: u32,
    },
    /// Extremal rays of an inequality matrix file.
    ExtremalRays { file: PathBuf },
    /// Facets of a generator matrix file.
    Facets { file: PathBuf },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Named {
    /// (8g+4)λ - g δ_irr - 2g Σ δ_i
    CornalbaHarris,
    /// 11λ - δ
    ElevenLambda,
    /// 10λ - 2δ + δ_irr
    TenLambda,
    /// 30λ - 3δ_irr - 6δ_1 - 6δ_2 - 2δ_3 - 4δ_4 - 6δ_5 on M̄_10
    GenusTenVertex,
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::ResourceLimit(_) => 3,
                _ => 2,
            }
        }
    }
}

fn pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(k) => {
            let p = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::parse(format!("cannot start thread pool: {e}")))?;
            Ok(p.install(f))
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn read_matrix(path: &Path) -> Result<MatrixFile> {
    Ok(serde_json::from_str(&read_input(path)?)?)
}

/// Name of a coordinate in `b`-notation.
pub fn coordinate_name(idx: &ClassIndex) -> String {
    match idx {
        ClassIndex::Lambda => "a".into(),
        ClassIndex::DeltaIrr => "b_irr".into(),
        ClassIndex::Psi(k) => format!("c_{k}"),
        ClassIndex::Boundary(i, s) => format!("b_{{{}}}", ClassIndex::boundary_key(*i, *s)),
    }
}

/// `a - 12 b_irr + b_{1|}` style rendering of a functional in `b`-notation.
pub fn format_functional(f: &LinearFunctional) -> String {
    let mut s = String::new();
    for (idx, w) in f.sig.coordinates().iter().zip(f.to_b_vector()) {
        if w.is_zero() {
            continue;
        }
        let name = coordinate_name(idx);
        let mag = w.abs();
        let term = if mag.is_one() { name } else { format!("{} {name}", format_rational(&mag)) };
        if s.is_empty() {
            s = if w.is_negative() { format!("-{term}") } else { term };
        } else {
            s.push_str(if w.is_negative() { " - " } else { " + " });
            s.push_str(&term);
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let threads = cli.threads;
    match cli.command {
        Command::Strata { g, n, json, verbose } => cmd_strata(out, threads, g, n, json, verbose),
        Command::Fnef { file, report, normalize } => cmd_fnef(out, threads, &file, report, normalize),
        Command::FaberCone { g, n, rays, json, no_cache } => cmd_faber_cone(out, threads, g, n, rays, json, no_cache),
        Command::Fulton { n, certificates, budget, max_rays, checkpoint, max_n } => {
            let budget = match budget {
                Some(b) if !(b.is_finite() && b >= 0.0) => return Err(Error::parse(format!("invalid budget {b}"))),
                Some(b) => Some(Duration::from_secs_f64(b)),
                None => None,
            };
            let opts = FultonOptions { max_n: Some(max_n), budget, max_rays, checkpoint, checkpoint_every: 8 };
            cmd_fulton(out, threads, n, certificates.as_deref(), &opts)
        }
        Command::Membership { cone, vector, h, out: cert_out, verify } => match verify {
            Some(path) => cmd_verify(out, &path),
            None => cmd_membership(
                out,
                threads,
                cone.as_deref().expect("required by clap"),
                vector.as_deref().expect("required by clap"),
                h,
                cert_out.as_deref(),
            ),
        },
        Command::Lemma44 { n, partition, e } => cmd_lemma44(out, n, &partition, &e),
        Command::FlagDivisor { g, n, a, b, verify } => cmd_flag_divisor(out, threads, g, n, &a, &b, verify),
        Command::Kappa { n } => cmd_kappa(out, n),
        Command::Relations { n, verbose } => cmd_relations(out, n, verbose),
        Command::Divisor { named, g } => {
            let d = match named {
                Named::CornalbaHarris => ch_gamma(g)?,
                Named::ElevenLambda => eleven_lambda_minus_delta(g)?,
                Named::TenLambda => ten_lambda_minus_two_delta(g)?,
                Named::GenusTenVertex => genus_ten_vertex(),
            };
            writeln!(out, "{}", d.to_json_string())?;
            Ok(0)
        }
        Command::ExtremalRays { file } => {
            let h = read_matrix(&file)?.into_h()?;
            let v = pool(threads, || extremal_rays(&h))??;
            writeln!(out, "{}", serde_json::to_string(&v.to_file())?)?;
            Ok(0)
        }
        Command::Facets { file } => {
            let v = read_matrix(&file)?.into_v()?;
            let h = pool(threads, || facets(&v))??;
            writeln!(out, "{}", serde_json::to_string(&h.to_file())?)?;
            Ok(0)
        }
    }
}

fn cmd_strata(out: &mut dyn Write, threads: Option<usize>, g: u32, n: u32, json: bool, verbose: bool) -> Result<i32> {
    let sig = ModuliSig::with_strata(g, n)?;
    let merged = pool(threads, || enumerate_strata_with_merges(sig))??;
    if json {
        let items: Vec<serde_json::Value> = merged
            .iter()
            .map(|m| {
                let f = stratum_functional(&m.representative);
                let mut v = serde_json::to_value(m.representative.to_json()).expect("stratum serializes");
                let covector = DivisorClass::from_coeffs(sig, f.covector.clone()).expect("functional keys are canonical");
                v["functional"] = serde_json::to_value(&covector).expect("divisor serializes");
                if verbose {
                    v["merged"] = serde_json::to_value(m.merged.iter().map(|s| s.to_json()).collect::<Vec<_>>()).expect("serializes");
                }
                v
            })
            .collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&items)?)?;
        return Ok(0);
    }
    writeln!(out, "{sig}: {} strata", merged.len())?;
    for m in &merged {
        let f = stratum_functional(&m.representative);
        writeln!(out, "{}  :  {} >= 0", m.representative, format_functional(&f))?;
        if verbose {
            for s in &m.merged {
                writeln!(out, "    same functional: {s}")?;
            }
        }
    }
    Ok(0)
}

fn cmd_fnef(out: &mut dyn Write, threads: Option<usize>, file: &Path, report: bool, normalize: bool) -> Result<i32> {
    let mut d = DivisorClass::from_json_str(&read_input(file)?)?;
    if normalize && d.sig.g == 1 {
        d = genus_one_normal_form(&d)?;
    }
    let (rep, nef) = pool(threads, || -> Result<_> {
        let rep = is_f_nef(&d)?;
        let nef = if d.sig.n == 0 && d.sig.g >= 2 { Some(nef_criterion_61(&d)?) } else { None };
        Ok((rep, nef))
    })??;
    if report {
        writeln!(out, "{}", serde_json::to_string_pretty(&rep.to_json_value())?)?;
    } else {
        writeln!(out, "F-nef: {}", if rep.verdict { "yes" } else { "no" })?;
        for (s, v) in &rep.violated {
            writeln!(out, "violated: {s} value {}", format_rational(v))?;
        }
        writeln!(out, "tight strata: {}, tight rank: {}", rep.tight.len(), rep.tight_rank)?;
        if let Some(c) = nef {
            if c.holds {
                writeln!(out, "nef: yes (sufficient criterion, characteristic zero)")?;
            } else {
                writeln!(out, "nef: not decided (sufficient criterion does not apply)")?;
            }
        }
    }
    Ok(if rep.verdict { 0 } else { 1 })
}

fn cmd_faber_cone(
    out: &mut dyn Write,
    threads: Option<usize>,
    g: u32,
    n: u32,
    rays: bool,
    json: bool,
    no_cache: bool,
) -> Result<i32> {
    let sig = ModuliSig::with_strata(g, n)?;
    let fc = pool(threads, || faber_cone(sig))??;
    let cache = Cache::from_env();
    let cached = if no_cache { None } else { cache.load(g, n, "faber-cone", &fc.cone) };
    let v = match cached {
        Some(v) => v,
        None => {
            let v = pool(threads, || extremal_rays(&fc.cone))??;
            if !no_cache {
                // a cache that cannot be written is not an error
                let _ = cache.store(g, n, "faber-cone", &fc.cone, &v);
            }
            v
        }
    };
    if json {
        writeln!(out, "{}", serde_json::to_string(&v.to_file())?)?;
        return Ok(0);
    }
    let names: Vec<String> = fc.coordinates.iter().map(coordinate_name).collect();
    writeln!(
        out,
        "{sig}: {} inequalities, {} extremal rays, lineality dimension {}",
        fc.cone.inequalities.len(),
        v.rays.len(),
        v.lineality.len()
    )?;
    writeln!(out, "coordinates: ({})", names.join(","))?;
    if rays {
        for r in &v.rays {
            writeln!(out, "{}", format_vector(r))?;
        }
        for l in &v.lineality {
            writeln!(out, "lineality {}", format_vector(l))?;
        }
    }
    Ok(0)
}

fn cmd_fulton(out: &mut dyn Write, threads: Option<usize>, n: u32, certificates: Option<&Path>, opts: &FultonOptions) -> Result<i32> {
    let answer = pool(threads, || fulton::fulton_question(n, opts))??;
    writeln!(
        out,
        "n = {n}: dim V = {}, N has {} inequalities and {} extremal rays (lineality {}), E has {} generators",
        answer.dim,
        answer.n_cone.inequalities.len(),
        answer.n_rays.rays.len(),
        answer.n_rays.lineality.len(),
        answer.e_cone.rays.len()
    )?;
    let members = answer.certificates.iter().filter(|c| c.is_member()).count();
    writeln!(out, "member certificates: {members} of {}", answer.certificates.len())?;
    if let Some(dir) = certificates {
        let paths = fulton::write_certificates(dir, &answer)?;
        writeln!(out, "wrote {} certificate files to {}", paths.len(), dir.display())?;
    }
    writeln!(out, "{}", if answer.answer { "YES" } else { "NO" })?;
    Ok(if answer.answer { 0 } else { 1 })
}

fn cmd_membership(
    out: &mut dyn Write,
    threads: Option<usize>,
    cone: &Path,
    vector: &str,
    h: bool,
    cert_out: Option<&Path>,
) -> Result<i32> {
    let m = read_matrix(cone)?;
    let c: ConeV = if h { pool(threads, || extremal_rays(&m.into_h()?))?? } else { m.into_v()? };
    let target = parse_vector(vector)?;
    let cert = membership(&target, &c)?;
    let verdict = if cert.is_member() { "member" } else { "separated" };
    writeln!(out, "{verdict}")?;
    writeln!(out, "{}", serde_json::to_string(&cert)?)?;
    if let Some(path) = cert_out {
        let file = CertificateFile::new(format!("membership of {}", format_vector(&target)), target, &c, cert.clone())?;
        std::fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
    }
    Ok(if cert.is_member() { 0 } else { 1 })
}

fn cmd_verify(out: &mut dyn Write, path: &Path) -> Result<i32> {
    let file: CertificateFile = serde_json::from_str(&read_input(path)?)?;
    match file.verify() {
        Ok(()) => {
            let kind = match file.certificate {
                Certificate::Member { .. } => "member",
                Certificate::Separated { .. } => "separated",
            };
            writeln!(out, "verified: {kind} ({})", file.label)?;
            Ok(0)
        }
        Err(Error::CertificateRejected(msg)) => {
            writeln!(out, "rejected: {msg}")?;
            Ok(1)
        }
        Err(e) => Err(e),
    }
}

fn parse_subset(n: u32, s: &str) -> Result<MarkSet> {
    let marks: Option<Vec<u32>> = if s.contains(',') {
        s.split(',').map(|m| m.trim().parse().ok()).collect()
    } else {
        s.trim().chars().map(|c| c.to_digit(10)).collect()
    };
    match marks {
        Some(m) if m.iter().all(|&k| k >= 1 && k <= n) => Ok(MarkSet::from_marks(m)),
        _ => Err(Error::parse(format!("cannot parse mark set {s:?} for n = {n}"))),
    }
}

fn cmd_lemma44(out: &mut dyn Write, n: u32, partition: &str, e: &[String]) -> Result<i32> {
    let v = fulton::build_v(n)?;
    let p = BlockPartition::parse(n, partition)?;
    let mut coeffs: BTreeMap<MarkSet, Rational> = BTreeMap::new();
    for item in e {
        let (t, x) = item.split_once('=').ok_or_else(|| Error::parse(format!("expected T=value, got {item:?}")))?;
        *coeffs.entry(parse_subset(n, t)?).or_insert_with(Rational::zero) += parse_rational(x.trim())?;
    }
    let outcome = fulton::lemma44_check(&v, &p, &coeffs)?;
    let admissible: Vec<String> = p.admissible(&v).iter().map(|t| t.to_string()).collect();
    writeln!(out, "admissible classes: {}", admissible.join(" "))?;
    writeln!(out, "class in V({n}): {}", format_vector(&outcome.target))?;
    writeln!(out, "{}", if outcome.certificate.is_member() { "member" } else { "separated" })?;
    writeln!(out, "{}", serde_json::to_string(&outcome.certificate)?)?;
    Ok(if outcome.certificate.is_member() { 0 } else { 1 })
}

fn cmd_flag_divisor(
    out: &mut dyn Write,
    threads: Option<usize>,
    g: u32,
    n: u32,
    a: &str,
    b: &str,
    verify: bool,
) -> Result<i32> {
    let a = parse_rational(a)?;
    let b = parse_rational(b)?;
    let d = flag_divisor(g, n, a.clone(), b.clone())?;
    writeln!(out, "{}", d.to_json_string())?;
    if !verify {
        return Ok(0);
    }
    let rep = pool(threads, || verify_flag_divisor(g, n, a, b))??;
    let yn = |x: bool| if x { "yes" } else { "no" };
    writeln!(out, "strict conditions on a and b_irr: {}", yn(rep.conditions_met))?;
    writeln!(out, "zero on every type 6 stratum: {}", yn(rep.zero_on_t6))?;
    writeln!(out, "positive on every other stratum: {}", yn(rep.positive_on_rest))?;
    for (s, v) in &rep.values {
        writeln!(out, "  {s}: {}", format_rational(v))?;
    }
    if rep.all_pass() {
        writeln!(out, "all checks pass")?;
        Ok(0)
    } else {
        writeln!(out, "some checks fail")?;
        Ok(1)
    }
}

fn cmd_kappa(out: &mut dyn Write, n: u32) -> Result<i32> {
    let v = fulton::build_v(n)?;
    let k = fulton::kappa_class(&v);
    for (t, x) in v.coords.iter().zip(&k) {
        writeln!(out, "delta_{t}: {}", format_rational(x))?;
    }
    let target = v.project(&k);
    let cert = membership(&target, &fulton::build_e(&v)?)?;
    writeln!(out, "image in V({n}): {}", format_vector(&target))?;
    writeln!(out, "effective: {}", if cert.is_member() { "yes" } else { "no" })?;
    Ok(if cert.is_member() { 0 } else { 1 })
}

fn cmd_relations(out: &mut dyn Write, n: u32, verbose: bool) -> Result<i32> {
    let dim = fulton::quotient_dimension(n)?;
    if verbose {
        let v = fulton::build_v(n)?;
        writeln!(out, "coordinates: {}", v.coords.len())?;
        writeln!(out, "relation rows: {}", v.relations.len())?;
        writeln!(out, "relation rank: {}", v.coords.len() - dim)?;
        let basis: Vec<String> = v.quotient_basis.iter().map(|&c| v.coords[c].to_string()).collect();
        writeln!(out, "quotient basis: {}", basis.join(" "))?;
    }
    writeln!(out, "dim V = {dim}")?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["fabercone"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn strata_counts() {
        for (g, n, k) in [("0", "5", 10), ("2", "0", 2), ("1", "1", 1)] {
            let (code, out, _) = run_ok(&["strata", "-g", g, "-n", n]);
            assert_eq!(code, 0);
            assert!(out.starts_with(&format!("M_{{{g},{n}}}: {k} strata")), "{out}");
        }
        assert_eq!(run_ok(&["strata", "-g", "0", "-n", "2"]).0, 2);
    }

    #[test]
    fn functional_rendering() {
        let (_, out, _) = run_ok(&["strata", "-g", "3", "-n", "0"]);
        assert!(out.contains("a - 12 b_irr + b_{1|} >= 0"), "{out}");
    }

    #[test]
    fn relations_and_flag() {
        assert_eq!(run_ok(&["relations", "-n", "6"]).1, "dim V = 16\n");
        let (code, out, _) = run_ok(&["flag-divisor", "-g", "2", "-n", "1", "-a", "17", "-b", "3/2", "--verify"]);
        assert_eq!(code, 0);
        assert!(out.contains("all checks pass"));
    }

    #[test]
    fn bad_input_exit_code() {
        assert_eq!(run_ok(&["fnef", "/nonexistent/file.json"]).0, 2);
        assert_eq!(run_ok(&["nonsense"]).0, 2);
        assert_eq!(run_ok(&["--help"]).0, 0);
    }
}
