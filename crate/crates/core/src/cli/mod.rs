//! Command-line front end: per-weight computations, the verification suite
//! and deterministic JSON or Markdown reports.

pub mod cache;
pub mod checks;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::cartan::{build_hhat, build_w1_subalgebra, Weight};
use crate::primefield::Fp;
use crate::repstructure::{
    canonical_class, catalog, composition_series, hhat_acting, maximal_shapes, normalize, realize_simple,
    CatalogEntry, Factor, Shape,
};
use crate::wittrestrict::{
    balanced_toral_check, chang_signatures, direct_factors, expected_restriction, grade_by_tags, graded_factors,
    restrict_to_w, BalancedReport, Pick,
};
use crate::Error;
use checks::Check;

/// Environment variable overriding `--cache-dir`.
pub const CACHE_ENV: &str = "HAMREP_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Classify,
    Induce,
    Factors,
    Restrict,
    Balanced,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Parser)]
#[command(name = "hamrep", version, about = "Restricted representations of the non-graded Hamiltonian algebra")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Characteristic, a prime at least 5.
    #[arg(long)]
    pub p: u32,
    /// Weight `a,b`; signed (`-1,-1`) or canonical (`4,4`).
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// A validated job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub p: u32,
    pub command: Command,
    pub weight: Option<Weight>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
}

/// Parses `a,b` with signed or canonical components.
pub fn parse_weight(p: u32, s: &str) -> Result<Weight, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("weight must be `a,b`, got `{s}`"));
    }
    let n = |t: &str| t.parse::<i64>().map_err(|_| format!("bad weight component `{t}`"));
    Ok(normalize(p, (n(parts[0])?, n(parts[1])?)))
}

impl JobSpec {
    pub fn from_args(a: Args) -> Result<Self, String> {
        Fp::new(a.p).map_err(|e| e.to_string())?;
        let needs = matches!(a.command, Command::Induce | Command::Factors | Command::Restrict);
        let weight = match (&a.weight, needs) {
            (Some(w), true) => Some(parse_weight(a.p, w)?),
            (None, true) => return Err(format!("{:?} requires --weight", a.command).to_lowercase()),
            (Some(_), false) => return Err(format!("{:?} takes no --weight", a.command).to_lowercase()),
            (None, false) => None,
        };
        let cache_dir = std::env::var_os(CACHE_ENV).map(PathBuf::from).or(a.cache_dir);
        Ok(JobSpec { p: a.p, command: a.command, weight, format: a.format, cache_dir, seed: a.seed })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalEntry {
    pub weight: Weight,
    pub shape: Shape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleSummary {
    pub label: String,
    pub dim: usize,
    pub weight_spaces: usize,
    pub maximal: Vec<MaximalEntry>,
}

/// The report; field order is the serialized key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub prime: u32,
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<Weight>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<Vec<CatalogEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<Factor>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witt: Option<BTreeMap<String, u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balanced: Option<BalancedReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<Check>>,
    pub version: String,
    pub seed: u64,
}

impl Report {
    fn new(job: &JobSpec) -> Self {
        Report {
            prime: job.p,
            command: job.command,
            weight: job.weight,
            catalog: None,
            series: None,
            witt: None,
            module: None,
            balanced: None,
            checks: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: job.seed,
        }
    }

    /// True unless some check failed.
    pub fn passed(&self) -> bool {
        self.checks.as_ref().is_none_or(|c| c.iter().all(|c| c.pass))
    }
}

fn check(name: &str, r: Result<String, String>) -> Check {
    match r {
        Ok(detail) => Check { name: name.into(), pass: true, detail },
        Err(detail) => Check { name: name.into(), pass: false, detail },
    }
}

/// Executes a job.
pub fn run(job: &JobSpec) -> Result<Report, Error> {
    let start = Instant::now();
    let alg = build_hhat(job.p)?;
    let mut rep = Report::new(job);
    let cache = job.cache_dir.as_deref();
    match job.command {
        Command::Classify => rep.catalog = Some(catalog(&alg)?),
        Command::Induce => {
            let w = job.weight.expect("validated");
            let z = cache::induced_cached(&alg, w, cache)?;
            let shapes = maximal_shapes(&z, &hhat_acting(&alg))?;
            rep.module = Some(ModuleSummary {
                label: z.module.label().to_string(),
                dim: z.module.dim(),
                weight_spaces: z.module.weight_spaces().len(),
                maximal: shapes.into_iter().map(|(weight, shape)| MaximalEntry { weight, shape }).collect(),
            });
            rep.checks = Some(vec![
                check("homomorphism", z.module.check_homomorphism(&alg).map(|_| "ok".into()).map_err(|e| e.to_string())),
                check("restricted", z.module.check_restricted(&alg).map(|_| "ok".into()).map_err(|e| e.to_string())),
            ]);
        }
        Command::Factors => {
            let w = job.weight.expect("validated");
            let z = cache::induced_cached(&alg, w, cache)?;
            rep.series = Some(composition_series(&z.module, &hhat_acting(&alg), Some(w))?.sorted());
        }
        Command::Restrict => {
            let w = canonical_class(job.p, job.weight.expect("validated"));
            let wa = build_w1_subalgebra(&alg)?;
            let m = realize_simple(&alg, w)?;
            let r = restrict_to_w(&m, &wa)?;
            let graded = graded_factors::<rand_chacha::ChaCha8Rng>(&grade_by_tags(&r)?, &mut Pick::Largest)?;
            let direct = direct_factors(&r, &wa.alg, &chang_signatures(&wa.alg)?)?;
            let want = expected_restriction(job.p, w);
            let eq = |a: &BTreeMap<u32, u32>, name: &str| {
                if a == &graded {
                    Ok(format!("{name} agrees"))
                } else {
                    Err(format!("{name} gives {a:?}, graded gives {graded:?}"))
                }
            };
            rep.checks = Some(vec![check("direct method", eq(&direct, "direct")), check("expected", eq(&want, "expected"))]);
            rep.witt = Some(checks::witt_report(&graded));
        }
        Command::Balanced => {
            let h = alg.named_coords("h")?;
            let b = balanced_toral_check(&alg, &h, 1)?;
            rep.checks = Some(vec![check("balanced", checks::balanced(&alg))]);
            rep.balanced = Some(b);
        }
        Command::Verify => rep.checks = Some(checks::run_checks(job.p, job.seed)?),
    }
    log::info!("{:?} at p = {} took {:.2?}", job.command, job.p, start.elapsed());
    Ok(rep)
}

fn fmt_weight(w: Weight) -> String {
    format!("({},{})", w.0, w.1)
}

/// Renders a report as Markdown.
pub fn to_markdown(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# hamrep {:?}, p = {}", r.command, r.prime);
    if let Some(w) = r.weight {
        let _ = writeln!(s, "\nweight {}", fmt_weight(w));
    }
    if let Some(cat) = &r.catalog {
        let _ = writeln!(s, "\n{} simple modules\n\n| weight | dim | aliases | realization |\n|---|---|---|---|", cat.len());
        for e in cat {
            let al: Vec<String> = e.aliases.iter().map(|&w| fmt_weight(w)).collect();
            let _ = writeln!(s, "| {} | {} | {} | {} |", fmt_weight(e.weight), e.dim, al.join(" "), e.realization);
        }
    }
    if let Some(series) = &r.series {
        let _ = writeln!(s, "\n| factor | dim |\n|---|---|");
        for f in series {
            let _ = writeln!(s, "| L{} | {} |", fmt_weight(f.weight), f.dim);
        }
    }
    if let Some(w) = &r.witt {
        let _ = writeln!(s, "\n| L_W(r) | multiplicity |\n|---|---|");
        for (k, v) in w {
            let _ = writeln!(s, "| {k} | {v} |");
        }
    }
    if let Some(m) = &r.module {
        let _ = writeln!(s, "\n{}: dim {}, {} weight spaces\n", m.label, m.dim, m.weight_spaces);
        for e in &m.maximal {
            let _ = writeln!(s, "- maximal vector {:?} of weight {}", e.shape, fmt_weight(e.weight));
        }
    }
    if let Some(b) = &r.balanced {
        let _ = writeln!(s, "\neigenspace dims {:?}, common {:?}", b.eigendims, b.common);
    }
    if let Some(cs) = &r.checks {
        let _ = writeln!(s, "\n| check | result | detail |\n|---|---|---|");
        for c in cs {
            let _ = writeln!(s, "| {} | {} | {} |", c.name, if c.pass { "pass" } else { "FAIL" }, c.detail);
        }
    }
    let _ = writeln!(s, "\nversion {}, seed {}", r.version, r.seed);
    s
}

/// Renders a report in the requested format.
pub fn render(r: &Report, f: Format) -> String {
    match f {
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        Format::Markdown => to_markdown(r),
    }
}

/// Entry point for the binary: returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let job = match JobSpec::from_args(args) {
        Ok(j) => j,
        Err(msg) => {
            eprintln!("usage error: {msg}");
            return 2;
        }
    };
    match run(&job) {
        Ok(r) => {
            print!("{}", render(&r, job.format));
            if r.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
