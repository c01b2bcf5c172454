//! Command-line front end for `supercoinv`.

pub mod cache;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use supercoinv::artin::{artin_hilbert, enumerate_artin};
use supercoinv::groebner::{as_reduced, buchberger, is_groebner_basis, is_reduced, paper_basis, paper_leading_monomials, CommPoly, GroebnerBasis};
use supercoinv::groups::{build_group, GroupData, GroupSpec};
use supercoinv::harmonics::{derivative_closure, harmonic_cell, sh_dim_table, DimTable, DEFAULT_CELL_BUDGET};
use supercoinv::superpoly::SuperPoly;
use supercoinv::verify::{run_suite, summary, to_jsonl, SuiteArgs, SUITES};
use supercoinv::Error;

use cache::{Cache, CacheKey, Lookup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "supercoinv", version, about = "Super coinvariants and harmonics of G(m,p,n)")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    #[arg(long, global = true)]
    pub m: Option<u32>,
    #[arg(long, global = true)]
    pub p: Option<u32>,
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Cache directory (default: $SUPERCOINV_CACHE, else the platform cache directory).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest elimination, in dense matrix entries, attempted before refusing.
    #[arg(long, global = true, default_value_t = DEFAULT_CELL_BUDGET)]
    pub cell_budget: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degrees, co-exponents and polynomial data of the group.
    GroupInfo,
    /// Artin monomial basis of the classical coinvariant ring.
    Artin {
        #[arg(long)]
        count: bool,
        #[arg(long)]
        hilbert: bool,
        #[arg(long)]
        enumerate: bool,
    },
    /// Lex Gröbner basis of the classical coinvariant ideal.
    Groebner {
        #[arg(long)]
        show_basis: bool,
        #[arg(long)]
        verify_paper_basis: bool,
        #[arg(long)]
        standard_monomials: bool,
    },
    /// Bigraded Hilbert series of the super harmonics.
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        z_at: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        q_at: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Basis of the harmonics in one bidegree.
    Harmonics {
        #[arg(long, num_args = 2, value_names = ["I", "K"], required = true)]
        bidegree: Vec<u32>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Jsonl)]
        format: ReportFormat,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Latex,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Jsonl,
    Summary,
}

/// Failure of a command, mapped onto an exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
    Infeasible(String),
    /// The reader went away, as with `| head`; not an error.
    OutputClosed,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Check(_) => EXIT_CHECK_FAILED,
            Failure::Infeasible(_) => EXIT_INFEASIBLE,
            Failure::OutputClosed => EXIT_OK,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            Failure::Usage(s) | Failure::Check(s) | Failure::Infeasible(s) => Some(s),
            Failure::OutputClosed => None,
        }
    }

    fn output(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            Failure::OutputClosed
        } else {
            Failure::Usage(format!("cannot write output: {e}"))
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible { .. } => Failure::Infeasible(e.to_string()),
            Error::Integrity(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Parses `argv`, runs the command writing to `out`, reports diagnostics on
/// standard error and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.global.threads {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            if let Some(msg) = f.message() {
                eprintln!("supercoinv: {msg}");
            }
            f.exit_code()
        }
    }
}

struct Context<'a> {
    global: &'a Global,
    cache: Option<Cache>,
}

impl Context<'_> {
    fn spec(&self) -> Result<GroupSpec, Failure> {
        let (Some(m), Some(p), Some(n)) = (self.global.m, self.global.p, self.global.n) else {
            return Err(Failure::Usage("this command needs --m, --p and --n".into()));
        };
        Ok(GroupSpec::new(m, p, n)?)
    }

    fn group(&self) -> Result<GroupData, Failure> {
        let s = self.spec()?;
        Ok(build_group(s.m, s.p, s.n)?)
    }

    /// Cached value of `kind` for the group, computing and storing on miss.
    fn cached<T, F>(&self, spec: &GroupSpec, kind: &str, compute: F) -> Result<T, Failure>
    where
        T: Serialize + serde::de::DeserializeOwned,
        F: FnOnce() -> Result<T, Failure>,
    {
        let key = CacheKey::new(spec.m, spec.p, spec.n, kind);
        if let Some(c) = &self.cache {
            match c.get::<T>(&key) {
                Lookup::Hit(v) => return Ok(v),
                Lookup::Miss => {}
                Lookup::Stale(why) => eprintln!("supercoinv: ignoring cache entry {}: {why}", c.path(&key).display()),
            }
        }
        let v = compute()?;
        if let Some(c) = &self.cache {
            if let Err(e) = c.put(&key, &v) {
                eprintln!("supercoinv: cannot write cache in {}: {e}", c.dir().display());
            }
        }
        Ok(v)
    }

    fn sh_table(&self, gd: &GroupData) -> Result<DimTable, Failure> {
        self.cached(&gd.spec, "sh-table", || Ok(sh_dim_table(gd, self.global.cell_budget)?))
    }

    fn closure_table(&self, gd: &GroupData) -> Result<DimTable, Failure> {
        self.cached(&gd.spec, "closure-table", || Ok(derivative_closure(gd)?))
    }

    fn groebner(&self, spec: &GroupSpec) -> Result<GroebnerBasis, Failure> {
        let strings: Vec<String> = self.cached(spec, "groebner", || {
            let gb = buchberger(&paper_basis(spec.m, spec.p, spec.n)?)?;
            Ok(gb.generators().iter().map(|g| g.to_string()).collect())
        })?;
        let n = spec.nvars();
        let gens = strings
            .iter()
            .map(|s| CommPoly::from_super(&SuperPoly::parse(s, n)?))
            .collect::<supercoinv::Result<Vec<_>>>()?;
        Ok(as_reduced(gens))
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let g = &cli.global;
    let cache = if g.no_cache { None } else { g.cache_dir.clone().or_else(Cache::default_dir).map(Cache::new) };
    let ctx = Context { global: g, cache };
    let w = |out: &mut dyn Write, s: &str| -> Outcome {
        writeln!(out, "{s}").map_err(Failure::output)
    };
    match &cli.command {
        Command::GroupInfo => {
            let gd = ctx.group()?;
            let s = &gd.spec;
            let name = s.name();
            if name == s.to_string() {
                w(out, &format!("group: {s}"))?;
            } else {
                w(out, &format!("group: {s} ({name})"))?;
            }
            w(out, &format!("order: {}", s.order))?;
            w(out, &format!("rank: {}", s.rank))?;
            w(out, &format!("degrees: {:?}", s.degrees))?;
            w(out, &format!("coexponents: {:?}", s.coexponents))?;
            w(out, &format!("reflecting hyperplanes: {}", s.hyperplane_count()))?;
            w(out, &format!("deg vandermondian: {}", s.deg_vandermondian))?;
            w(out, &format!("vandermondian: {}", gd.vandermondian))?;
            w(out, &format!("covandermondian: {}", gd.covandermondian))?;
            for (i, f) in gd.basic_invariants.iter().enumerate() {
                w(out, &format!("f{}: {}", i + 1, f))?;
            }
            for (i, row) in gd.coefficient_matrix.iter().enumerate() {
                let terms: Vec<String> = row.iter().map(|g| format!("({g})")).collect();
                w(out, &format!("d{} coefficients: {}", i + 1, terms.join(" ")))?;
            }
            Ok(())
        }
        Command::Artin { count, hilbert, enumerate } => {
            let s = ctx.spec()?;
            let (m, p, n) = (s.m, s.p, s.n);
            if *hilbert {
                w(out, &artin_hilbert(m, p, n)?.to_string_in("q"))?;
            }
            if *enumerate {
                for a in enumerate_artin(m, p, n)? {
                    let row: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                    w(out, &row.join(" "))?;
                }
            }
            if *count || !(*hilbert || *enumerate) {
                w(out, &enumerate_artin(m, p, n)?.len().to_string())?;
            }
            Ok(())
        }
        Command::Groebner { show_basis, verify_paper_basis, standard_monomials } => {
            let s = ctx.spec()?;
            let gb = ctx.groebner(&s)?;
            if *show_basis || !(*verify_paper_basis || *standard_monomials) {
                for g in gb.generators() {
                    w(out, &g.to_string())?;
                }
            }
            if *standard_monomials {
                for e in gb.standard_monomials()? {
                    let row: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                    w(out, &row.join(" "))?;
                }
            }
            if *verify_paper_basis {
                let explicit = paper_basis(s.m, s.p, s.n)?;
                let mut lms = paper_leading_monomials(s.m, s.p, s.n);
                lms.sort_by(|a, b| b.cmp(a));
                let checks = [
                    ("groebner basis", is_groebner_basis(&explicit)),
                    ("reduced", is_reduced(&explicit)),
                    ("equals completion", as_reduced(explicit.clone()) == gb),
                    ("leading monomials", gb.leading_monomials() == lms),
                ];
                for (name, ok) in checks {
                    w(out, &format!("{name}: {}", if ok { "yes" } else { "no" }))?;
                }
                if checks.iter().any(|c| !c.1) {
                    return Err(Failure::Check("explicit basis check failed".into()));
                }
            }
            Ok(())
        }
        Command::Hilbert { z_at, q_at, format } => {
            let gd = ctx.group()?;
            let table = ctx.sh_table(&gd)?;
            let h = table.hilbert();
            match format {
                Format::Latex => {
                    if z_at.is_some() || q_at.is_some_and(|q| q != 1) {
                        return Err(Failure::Usage("LaTeX rows are always the q = 1 specialisation in z".into()));
                    }
                    let closure = ctx.closure_table(&gd)?;
                    w(out, &table.latex_row(Some(&closure)))
                }
                Format::Json => {
                    let text = match (q_at, z_at) {
                        (None, None) => serde_json::to_string(&table),
                        (Some(q), None) => serde_json::to_string(&serde_json::json!({
                            "group": table.group, "q": q, "coefficients": h.at_q(*q).terms().map(|(e, c)| (e, c.to_string())).collect::<Vec<_>>()
                        })),
                        (None, Some(z)) => serde_json::to_string(&serde_json::json!({
                            "group": table.group, "z": z, "coefficients": h.at_z(*z).terms().map(|(e, c)| (e, c.to_string())).collect::<Vec<_>>()
                        })),
                        (Some(q), Some(z)) => serde_json::to_string(&serde_json::json!({
                            "group": table.group, "q": q, "z": z, "value": h.at_q(*q).eval(*z).to_string()
                        })),
                    };
                    w(out, &text.expect("JSON output"))
                }
                Format::Text => match (q_at, z_at) {
                    (None, None) => w(out, &h.to_string()),
                    (Some(q), None) => w(out, &h.at_q(*q).to_string_in("z")),
                    (None, Some(z)) => w(out, &h.at_z(*z).to_string_in("q")),
                    (Some(q), Some(z)) => w(out, &h.at_q(*q).eval(*z).to_string()),
                },
            }
        }
        Command::Harmonics { bidegree } => {
            let gd = ctx.group()?;
            let cell = harmonic_cell(&gd, bidegree[0], bidegree[1], g.cell_budget)?;
            eprintln!("dimension {}", cell.dim());
            for f in cell.basis_polys() {
                w(out, &f.to_string())?;
            }
            Ok(())
        }
        Command::Verify { suite, format } => {
            let args = SuiteArgs { m: g.m, p: g.p, n: g.n, cell_budget: g.cell_budget };
            let reports = run_suite(suite, &args)?;
            let text = match format {
                ReportFormat::Jsonl => to_jsonl(&reports),
                ReportFormat::Summary => summary(&reports),
            };
            write!(out, "{text}").map_err(Failure::output)?;
            let failed = reports.iter().filter(|r| r.verdict.is_failure()).count();
            if failed > 0 {
                return Err(Failure::Check(format!("{failed} of {} checks failed", reports.len())));
            }
            Ok(())
        }
    }
}
