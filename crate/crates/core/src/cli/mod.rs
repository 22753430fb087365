//! Command-line front end. [`run`] takes the argument list and output
//! streams and returns the process exit code: 0 on success, 1 on errors or
//! failed verification, 2 on usage errors.

pub mod cache;
pub mod verify;

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{fmt_rational, int, parse_rational, Monomial, Polynomial, Rational};
use crate::cusp::Triplet;
use crate::error::{Error, Result};
use crate::intersection::{intersection_form, IdentityViolation, IntersectionForm};
use crate::quotient::JacobianResidue;
use crate::wdvv::{required_t_degree, solve, Potential, ReconstructionConfig};
use crate::weyl::{cartan_matrix, gram_check};

pub use verify::{run_verify, Suite, VerifyReport, VerifySettings};

#[derive(Parser, Debug)]
#[command(name = "cusp-frobenius", version, about = "Frobenius potentials of cusp polynomials, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Milnor number, orbifold Euler characteristic and exponents.
    Info(Common),
    /// Solve for the potential through q-order K.
    Potential(Common),
    /// Intersection form entries and the mu-row identities.
    Intersection(Common),
    /// Residues of 1, x_i^j and x1x2x3.
    Residue(Common),
    /// Cartan matrix, fundamental coweights and Gram data.
    Weyl(Common),
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// The triplet a1 a2 a3.
    #[arg(num_args = 3, value_names = ["A1", "A2", "A3"], required = true)]
    a: Vec<u32>,
    /// Maximal q-power K.
    #[arg(long, default_value_t = 2)]
    q_order: u32,
    /// Maximal t-degree D; defaults to max(8, the smallest admissible value).
    #[arg(long)]
    t_degree: Option<u32>,
    #[arg(long)]
    json: bool,
    /// Seed for sample points.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Recompute instead of reading or writing the potential cache.
    #[arg(long)]
    no_cache: bool,
    /// s_mu as p or p/q.
    #[arg(long)]
    smu: Option<String>,
}

struct Usage(String);

impl Common {
    fn triplet(&self, err: &mut dyn Write) -> std::result::Result<Triplet, Usage> {
        let arr = [self.a[0], self.a[1], self.a[2]];
        let (t, moved) = Triplet::sorted(arr).map_err(|e| Usage(e.to_string()))?;
        if moved {
            let _ = writeln!(err, "warning: triplet reordered to {t}");
        }
        Ok(t)
    }

    fn smu(&self) -> std::result::Result<Option<Rational>, Usage> {
        match &self.smu {
            None => Ok(None),
            Some(s) => parse_rational(s).map(Some).map_err(|e| Usage(format!("--smu: {e}"))),
        }
    }

    fn config(&self, a: Triplet) -> ReconstructionConfig {
        let d = self.t_degree.unwrap_or_else(|| required_t_degree(a, self.q_order).max(8));
        ReconstructionConfig::new(self.q_order, d)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Module(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

enum Failure {
    Usage(String),
    Module(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Self {
        Failure::Usage(u.0)
    }
}

fn emit(out: &mut dyn Write, v: &Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match cmd {
        Command::Info(c) => {
            let a = c.triplet(err)?;
            emit(out, &info_json(a));
            Ok(0)
        }
        Command::Potential(c) => {
            let a = c.triplet(err)?;
            let p = obtain_potential(a, &c.config(a), !c.no_cache, err)?;
            if c.json {
                let _ = writeln!(out, "{}", p.to_json());
            } else {
                let (k, d) = p.truncation();
                let _ = writeln!(out, "A = {a}, K = {k}, D = {d}, {} terms", p.series().len());
                let _ = writeln!(out, "F = {}", p.series().display());
            }
            Ok(0)
        }
        Command::Intersection(c) => {
            let a = c.triplet(err)?;
            let p = obtain_potential(a, &c.config(a), !c.no_cache, err)?;
            let g = intersection_form(&p);
            let violations = g.verify_flat_identities();
            let idx = a.flat_indices();
            if c.json {
                emit(out, &intersection_json(&p, &g, &violations));
            } else {
                for (x, &i) in idx.iter().enumerate() {
                    for &j in &idx[x..] {
                        let _ = writeln!(out, "g^{{{i},{j}}} = {}", g.entry(i, j).display());
                    }
                }
                if violations.is_empty() {
                    let _ = writeln!(out, "mu-row identities: pass");
                }
                for v in &violations {
                    let _ = writeln!(out, "mu-row identity failed: {} at ({},{}): {}", v.identity, v.i, v.j, v.difference);
                }
            }
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
        Command::Residue(c) => {
            let a = c.triplet(err)?;
            let smu = c.smu()?.unwrap_or_else(|| int(1));
            let v = residue_json(a, &smu)?;
            if c.json {
                emit(out, &v);
            } else {
                let _ = writeln!(out, "A = {a}, s_mu = {}, sign constant {}", v["s_mu"].as_str().unwrap_or(""), v["sign_constant"].as_str().unwrap_or(""));
                for e in v["entries"].as_array().into_iter().flatten() {
                    let _ = writeln!(out, "Res({}) = {}", e["g"].as_str().unwrap_or(""), e["raw"].as_str().unwrap_or(""));
                }
            }
            Ok(0)
        }
        Command::Weyl(c) => {
            let a = c.triplet(err)?;
            let v = weyl_json(a)?;
            if c.json {
                emit(out, &v);
            } else {
                let cm = cartan_matrix(a);
                let _ = writeln!(out, "vertices: {}", cm.label_strings().join(" "));
                for row in &cm.matrix {
                    let _ = writeln!(out, "{}", row.iter().map(|x| format!("{x:>3}")).collect::<String>());
                }
                let _ = writeln!(out, "determinant: {}", cm.determinant());
                let _ = writeln!(out, "corner: {} x {}", v["gram"]["corner"].as_str().unwrap_or(""), v["gram"]["tag"].as_str().unwrap_or(""));
            }
            Ok(0)
        }
        Command::Verify { suite, common: c } => {
            let a = c.triplet(err)?;
            let cfg = c.config(a);
            let settings = VerifySettings { a, cfg: cfg.clone(), seed: c.seed, s_mu: c.smu()?, points: 5 };
            let use_cache = !c.no_cache;
            let mut get = || obtain_potential(a, &cfg, use_cache, err);
            let report = run_verify(suite, settings, &mut get);
            if c.json {
                emit(out, &report.to_json());
            } else {
                let _ = write!(out, "{}", report.to_text());
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

pub fn intersection_json(p: &Potential, g: &IntersectionForm, violations: &[IdentityViolation]) -> Value {
    let a = p.triplet();
    let idx = a.flat_indices();
    let mut entries = Vec::new();
    for (x, &i) in idx.iter().enumerate() {
        for &j in &idx[x..] {
            entries.push(json!({ "i": i.to_string(), "j": j.to_string(), "terms": g.entry(i, j).to_json_terms() }));
        }
    }
    let (k, d) = p.truncation();
    json!({
        "A": a, "K": k, "D": d,
        "entries": entries,
        "identities": {
            "passed": violations.is_empty(),
            "violations": violations.iter().map(|v| json!({
                "identity": v.identity, "i": v.i.to_string(), "j": v.j.to_string(), "difference": v.difference,
            })).collect::<Vec<_>>(),
        },
    })
}

pub fn info_json(a: Triplet) -> Value {
    let (mu, chi) = a.invariants();
    let idx = a.flat_indices();
    let exps = a.exponents();
    json!({
        "A": a,
        "mu": mu,
        "chi": fmt_rational(&chi),
        "exponents": idx.iter().zip(&exps).map(|(i, e)| json!({ "index": i.to_string(), "exponent": fmt_rational(e) })).collect::<Vec<_>>(),
    })
}

/// Residues of 1, every x_i^j and x1x2x3, raw and divided by the sign constant −1.
pub fn residue_json(a: Triplet, smu: &Rational) -> Result<Value> {
    let r = JacobianResidue::for_cusp(a, smu)?;
    let sign = int(-1);
    let mut gs = vec![Monomial::one()];
    for (i, j) in a.arm_indices() {
        let mut e = [0; 3];
        e[i as usize - 1] = j as i32;
        gs.push(Monomial::x(e));
    }
    gs.push(Monomial::x([1, 1, 1]));
    let entries: Vec<Value> = gs
        .into_iter()
        .map(|m| {
            let raw = r.residue(&Polynomial::term(m.clone(), int(1)));
            json!({ "g": m.to_string(), "raw": fmt_rational(&raw), "normalized": fmt_rational(&(&raw / &sign)) })
        })
        .collect();
    Ok(json!({
        "A": a,
        "s_mu": fmt_rational(smu),
        "s_mu_cubed": fmt_rational(&(smu * smu * smu)),
        "sign_constant": fmt_rational(&sign),
        "dimension": r.dimension(),
        "entries": entries,
    }))
}

pub fn weyl_json(a: Triplet) -> Result<Value> {
    let c = cartan_matrix(a);
    let w = c.fundamental_coweights()?;
    let gram = gram_check(a)?;
    let mut v = c.to_json();
    v["coweights"] = json!(w.iter().map(|col| col.iter().map(fmt_rational).collect::<Vec<_>>()).collect::<Vec<_>>());
    v["gram"] = gram.to_json();
    Ok(v)
}

/// Reads the potential from the cache or solves and stores it; reports
/// `cached: true|false` on `err`.
pub fn obtain_potential(a: Triplet, cfg: &ReconstructionConfig, use_cache: bool, err: &mut dyn Write) -> Result<Potential> {
    let dir = if use_cache { cache::cache_dir() } else { None };
    let key = cache::cache_key(a, cfg);
    if let Some(d) = &dir {
        match cache::lookup(d, &key) {
            cache::Lookup::Hit(p) => {
                let _ = writeln!(err, "cached: true");
                return Ok(p);
            }
            cache::Lookup::Corrupt(why) => {
                let _ = writeln!(err, "warning: ignoring corrupt cache entry {why}; recomputing");
            }
            cache::Lookup::Miss => {}
        }
    }
    let p = solve(a, cfg)?;
    if let Some(d) = &dir {
        if let Err(e) = cache::store(d, &key, &p) {
            let _ = writeln!(err, "warning: could not write cache entry: {e}");
        }
    }
    let _ = writeln!(err, "cached: false");
    Ok(p)
}
