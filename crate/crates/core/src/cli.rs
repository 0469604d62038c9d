//! Command-line front end.
//!
//! Parameters come from `--config FILE` (`key = value` lines, `#` comments)
//! and flags; flags win. Every output is CSV with `#` metadata lines, written
//! to `--out` or stdout.
//!
//! Exit status: 0 success, 1 I/O failure, 2 usage or parse error, 3
//! numerical failure. Failures print one line `error: kind=<tag> <message>`
//! on stderr.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cmx::{cmx_sweep, CmxFormula};
use crate::error::Error;
use crate::moments::{default_basis, krylov_moments, krylov_moments_with_basis};
use crate::params::ModelParams;
use crate::rational::{parse_rational, to_fixed, to_fraction_string};
use crate::reference::ground_energy;
use crate::report::{
    cmx_convergence, cmx_csv, diag_csv, moments_csv, moments_needed, ratio_series, rrk_convergence_from, rrk_csv,
    series_csv, Method, LOG_BASE,
};
use crate::rrk::rrk_sweep;
use crate::scalar::Real;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rabi-moments", version, about = "Moment methods for the quantum Rabi model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact moments and connected moments up to --order (default 99).
    Moments(Flags),
    /// CMX estimates for m = 1 ..= --orders (default 49).
    Cmx(Flags),
    /// RRK ground-state bounds for N = 1 ..= --orders (default 49).
    Rrk(Flags),
    /// Reference ground energy of the --basis truncation (default 1000).
    Diag(Flags),
    /// Ratio and convergence series for --orders (default 49).
    Report(Flags),
}

#[derive(Args, Debug, Default, Clone)]
struct Flags {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    omega0: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long, visible_alias = "orders")]
    order: Option<String>,
    #[arg(long)]
    basis: Option<String>,
    #[arg(long)]
    digits: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    formula: Option<FormulaArg>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FormulaArg {
    Knowles,
    Cioslowski,
}

impl FormulaArg {
    fn parse(s: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(s, true).ok()
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub params: ModelParams,
    /// Moment order, or the sweep ceiling `m_max` / `N_max`.
    pub order: usize,
    pub basis: Option<usize>,
    pub digits: u32,
    pub out: Option<PathBuf>,
    pub formula: CmxFormula,
}

impl RunConfig {
    /// Metadata lines recorded at the top of every output file.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut m = vec![
            ("command".to_string(), self.command.clone()),
            ("omega0".to_string(), to_fraction_string(self.params.omega0())),
            ("omega".to_string(), to_fraction_string(self.params.omega())),
            ("g".to_string(), to_fraction_string(self.params.g())),
            ("order".to_string(), self.order.to_string()),
        ];
        if let Some(n) = self.basis {
            m.push(("basis".to_string(), n.to_string()));
        }
        m.push(("digits".to_string(), self.digits.to_string()));
        if self.command == "cmx" || self.command == "report" {
            let f = match self.formula {
                CmxFormula::Knowles => "knowles",
                CmxFormula::Cioslowski => "cioslowski",
            };
            m.push(("formula".to_string(), f.to_string()));
        }
        if self.command == "report" {
            m.push(("log_base".to_string(), LOG_BASE.to_string()));
        }
        m
    }
}

enum Failure {
    Usage(String),
    Io(String),
    Numerical(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e)
        } else {
            Failure::Usage(format!("kind={} {e}", e.kind()))
        }
    }
}

const CONFIG_KEYS: [&str; 8] = ["omega0", "omega", "g", "order", "orders", "basis", "digits", "formula"];

/// Parse a `key = value` configuration file.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, Error> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", lineno + 1)))?;
        let k = k.trim();
        if !CONFIG_KEYS.contains(&k) && k != "out" {
            return Err(Error::Parse(format!("config line {}: unknown key {k:?}", lineno + 1)));
        }
        let k = if k == "orders" { "order" } else { k };
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn resolve(command: &str, flags: Flags) -> Result<RunConfig, Failure> {
    let mut file = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("kind=io cannot read {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    let out = flags.out.or_else(|| file.remove("out").map(PathBuf::from));
    let mut pick = |key: &str, flag: Option<String>| flag.or_else(|| file.remove(key));
    let omega0 = pick("omega0", flags.omega0).unwrap_or_else(|| "1".into());
    let omega = pick("omega", flags.omega).unwrap_or_else(|| "1".into());
    let g = pick("g", flags.g).ok_or_else(|| Failure::Usage("kind=usage missing --g".into()))?;
    let order = pick("order", flags.order);
    let basis = pick("basis", flags.basis);
    let digits = pick("digits", flags.digits);
    let formula = pick("formula", flags.formula.map(|f| format!("{f:?}").to_lowercase()));

    let params = ModelParams::new(parse_rational(&omega0)?, parse_rational(&omega)?, parse_rational(&g)?)?;
    let count = |name: &str, s: Option<String>| -> Result<Option<usize>, Failure> {
        s.map(|s| {
            s.parse::<usize>()
                .map_err(|_| Failure::Usage(format!("kind=parse --{name} expects a non-negative integer, got {s:?}")))
        })
        .transpose()
    };
    let (default_order, default_digits) = match command {
        "moments" => (99, 50),
        "diag" => (0, 45),
        _ => (49, 20),
    };
    let order = count("order", order)?.unwrap_or(default_order);
    let basis = count("basis", basis)?;
    let digits = count("digits", digits)?.unwrap_or(default_digits) as u32;
    let formula = match formula.as_deref().map(FormulaArg::parse) {
        None | Some(Some(FormulaArg::Knowles)) => CmxFormula::Knowles,
        Some(Some(FormulaArg::Cioslowski)) => CmxFormula::Cioslowski,
        Some(None) => return Err(Failure::Usage("kind=parse unknown formula".into())),
    };
    let basis = match command {
        "diag" => Some(basis.unwrap_or(1000)),
        "moments" => Some(basis.unwrap_or(default_basis(order))),
        _ => basis,
    };
    if digits == 0 {
        return Err(Failure::Usage("kind=usage --digits must be positive".into()));
    }
    Ok(RunConfig {
        command: command.to_string(),
        params,
        order,
        basis,
        digits,
        out,
        formula,
    })
}

struct Output {
    /// CSV destined for `--out` or stdout.
    csv: String,
    /// Printed on stdout in addition when the CSV goes to a file.
    summary: Option<String>,
}

fn execute(cfg: &RunConfig) -> Result<Output, Failure> {
    let meta = cfg.metadata();
    Ok(match cfg.command.as_str() {
        "moments" => {
            let basis = cfg.basis.unwrap_or(default_basis(cfg.order));
            let table = krylov_moments_with_basis(&cfg.params, cfg.order, basis)?;
            Output {
                csv: moments_csv(&table, meta).render(),
                summary: None,
            }
        }
        "cmx" => {
            let table = krylov_moments(&cfg.params, moments_needed(Method::Cmx, cfg.order))?;
            let sweep = cmx_sweep(table.connected(), cfg.order, cfg.formula);
            Output {
                csv: cmx_csv(&sweep, meta).render(),
                summary: None,
            }
        }
        "rrk" => {
            if cfg.order == 0 {
                return Err(Error::InvalidOrder(0).into());
            }
            let table = krylov_moments(&cfg.params, moments_needed(Method::Rrk, cfg.order))?;
            let sweep = rrk_sweep(table.mu(), cfg.order, cfg.digits);
            Output {
                csv: rrk_csv(&sweep, cfg.digits, meta).render(),
                summary: None,
            }
        }
        "diag" => {
            let n = cfg.basis.unwrap_or(1000);
            let e = ground_energy(&cfg.params, n, cfg.digits + 5)?;
            let energy = to_fixed(&e.value.to_rational(), cfg.digits);
            Output {
                csv: diag_csv(&e, &energy, meta).render(),
                summary: Some(energy),
            }
        }
        "report" => {
            if cfg.order < 2 {
                return Err(Error::InvalidOrder(cfg.order).into());
            }
            let table = krylov_moments(&cfg.params, moments_needed(Method::Cmx, cfg.order))?;
            let (mu, i) = ratio_series(&table);
            let lw_cmx = cmx_convergence(&table, cfg.order, cfg.formula)?;
            let lw_rrk = rrk_convergence_from(&rrk_sweep(table.mu(), cfg.order, cfg.digits));
            Output {
                csv: series_csv(&[mu, i, lw_cmx, lw_rrk], meta).render(),
                summary: None,
            }
        }
        other => return Err(Failure::Usage(format!("kind=usage unknown command {other:?}"))),
    })
}

fn emit(cfg: &RunConfig, out: Output) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("kind=io {e}"));
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &out.csv)
                .map_err(|e| Failure::Io(format!("kind=io cannot write {}: {e}", path.display())))?;
            if let Some(s) = out.summary {
                println!("{s}");
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match out.summary {
                Some(s) => writeln!(stdout, "{s}").map_err(io)?,
                None => stdout.write_all(out.csv.as_bytes()).map_err(io)?,
            }
        }
    }
    Ok(())
}

/// Run the tool on `argv` (including the program name) and return the exit status.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            eprint!("{e}");
            eprintln!("error: kind=usage {}", e.kind());
            return EXIT_USAGE;
        }
    };
    let (name, flags) = match cli.command {
        Command::Moments(f) => ("moments", f),
        Command::Cmx(f) => ("cmx", f),
        Command::Rrk(f) => ("rrk", f),
        Command::Diag(f) => ("diag", f),
        Command::Report(f) => ("report", f),
    };
    let result = resolve(name, flags).and_then(|cfg| execute(&cfg).and_then(|out| emit(&cfg, out)));
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_IO
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("error: kind={} {e}", e.kind());
            EXIT_NUMERICAL
        }
    }
}
