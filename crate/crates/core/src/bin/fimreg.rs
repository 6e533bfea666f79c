use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fimreg::campaign::{self, CampaignConfig, CampaignReport};
use fimreg::homology::{homology_with, tor_oracle, Engine, OracleBudget};
use fimreg::linalg::{Field, FieldConfig, PrimeField, Rationals};
use fimreg::module::{from_presentation, random_presentation, validate, InputFile, ModuleFile, PresentationFile, Window};
use fimreg::rho::{self, RhoEngine};
use fimreg::{Error, Result};

const FIELD_VAR: &str = "FIMREG_FIELD";

macro_rules! input_err {
    ($($arg:tt)*) => { Error::Input(format!($($arg)*)) };
}

/// Exact homology of truncated FI^m-modules and regularity-bound checks.
#[derive(Parser)]
#[command(name = "fimreg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate rho_m(d, r), or dump a table of values.
    Rho(RhoArgs),
    /// Write a seeded random presentation file.
    Build(BuildArgs),
    /// Check the functor relations of a presentation or module file.
    Validate { file: PathBuf },
    /// Compute the homology table of a presentation or module file.
    Homology(HomologyArgs),
    /// Run a single functor check on a presentation or module file.
    Functors(FunctorArgs),
    /// Run a named verification campaign.
    Verify(VerifyArgs),
    /// Compare the homology engine against the Tor oracle on seeded instances.
    CompareOracle(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct RhoArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<i64>,
    /// Dump the grid 1..=m, -1..=DMAX, -1..=RMAX.
    #[arg(long, num_args = 2, value_names = ["DMAX", "RMAX"])]
    table: Option<Vec<i64>>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, allow_negative_numbers = true)]
    d: i64,
    #[arg(long, allow_negative_numbers = true)]
    r: i64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Window size; defaults to max(d, r) + 2.
    #[arg(long = "n", short = 'N')]
    top: Option<usize>,
    #[arg(long, default_value_t = 3)]
    gens: usize,
    #[arg(long, default_value_t = 2)]
    rels: usize,
    /// `p=<prime>` or `rationals`; defaults to FIMREG_FIELD, then p=101.
    #[arg(long)]
    field: Option<String>,
    /// Write the materialized module instead of the presentation.
    #[arg(long)]
    module: bool,
}

#[derive(Args)]
struct HomologyArgs {
    file: PathBuf,
    #[arg(long)]
    max_i: usize,
    /// Also compute the Tor oracle and require exact agreement.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value = "resolution")]
    engine: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FunctorArgs {
    file: PathBuf,
    #[arg(long)]
    check: String,
    #[arg(long, default_value_t = 3)]
    max_i: usize,
    #[arg(long, default_value = "resolution")]
    engine: String,
}

#[derive(Args)]
struct CampaignFlags {
    /// JSON campaign config; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<i64>,
    #[arg(long = "n", short = 'N')]
    top: Option<usize>,
    #[arg(long = "max-i", short = 'I')]
    max_i: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    engine: Option<String>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long)]
    rels: Option<usize>,
    #[arg(long)]
    max_total_dim: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    campaign: Option<String>,
    #[command(flatten)]
    flags: CampaignFlags,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    flags: CampaignFlags,
}

macro_rules! with_field {
    ($cfg:expr, $f:ident => $body:expr) => {
        match $cfg {
            FieldConfig::Prime { p } => {
                let $f = PrimeField::new(p)?;
                $body
            }
            FieldConfig::Rationals => {
                let $f = Rationals;
                $body
            }
        }
    };
}

fn with_path(e: std::io::Error, path: &Path) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| with_path(e, path))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| with_path(e, path))
}

fn env_field() -> Result<Option<FieldConfig>> {
    match std::env::var(FIELD_VAR) {
        Ok(s) if !s.trim().is_empty() => {
            FieldConfig::parse(s.trim()).map(Some).map_err(|e| match e {
                Error::Input(msg) => input_err!("{FIELD_VAR}: {msg}"),
                other => other,
            })
        }
        _ => Ok(None),
    }
}

fn pick_field(flag: Option<&str>) -> Result<FieldConfig> {
    match flag {
        Some(s) => FieldConfig::parse(s),
        None => Ok(env_field()?.unwrap_or_default()),
    }
}

fn rho_cmd(a: &RhoArgs) -> Result<bool> {
    if let Some(t) = &a.table {
        let table = rho::rho_table(a.m, t[0], t[1])?;
        match a.format {
            Format::Json => println!("{}", table.to_json()),
            _ => print!("{}", table.to_csv()),
        }
        return Ok(table.dprime_not_above_prime.is_empty() && table.undecided.is_empty());
    }
    let (d, r) = match (a.d, a.r) {
        (Some(d), Some(r)) => (d, r),
        _ => return Err(input_err!("--d and --r are required without --table")),
    };
    let mut e = RhoEngine::new();
    let v = e.rho(a.m, d, r)?;
    let (p1, p2) = if a.m >= 2 && d >= 0 {
        (Some(e.rho_prime(a.m, d, r)?), Some(e.rho_dprime(a.m, d, r)?))
    } else {
        (None, None)
    };
    match a.format {
        Format::Json => {
            let out = serde_json::json!({
                "m": a.m,
                "d": d,
                "r": r,
                "rho": v.to_string(),
                "rho_prime": p1.as_ref().map(|x| x.to_string()),
                "rho_dprime": p2.as_ref().map(|x| x.to_string()),
                "atoms": e.atoms(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Format::Csv => {
            println!("m,d,r,rho,rho_prime,rho_dprime");
            let opt = |x: &Option<rho::RhoValue>| x.as_ref().map(|x| x.to_string()).unwrap_or_default();
            println!("{},{},{},{},{},{}", a.m, d, r, v, opt(&p1), opt(&p2));
        }
        Format::Text => {
            println!("rho_{}({d}, {r}) = {v}", a.m);
            if let (Some(p1), Some(p2)) = (&p1, &p2) {
                println!("rho'_{}({d}, {r}) = {p1}", a.m);
                println!("rho''_{}({d}, {r}) = {p2}", a.m);
            }
            for atom in e.atoms() {
                println!("A{} = rho_{}({}, {}) >= {}", atom.id, atom.m, atom.d, atom.r, atom.lower);
            }
        }
    }
    Ok(true)
}

fn build_cmd(a: &BuildArgs) -> Result<bool> {
    let top = a.top.unwrap_or(a.d.max(a.r).max(0) as usize + 2);
    let text = with_field!(pick_field(a.field.as_deref())?, f => {
        let pres = random_presentation(&f, a.m, a.d, a.r, a.gens, a.rels, a.seed)?;
        let (v, _) = from_presentation(&pres, Window::new(a.m, top), &f)?;
        if a.module {
            ModuleFile::new(&v).to_json()
        } else {
            PresentationFile::new(&pres, top, &f).to_json()
        }
    });
    write(&a.out, &text)?;
    println!("wrote {}", a.out.display());
    Ok(true)
}

fn validate_cmd(path: &Path) -> Result<bool> {
    let file = InputFile::from_json(&read(path)?)?;
    with_field!(file.field(), f => {
        let (v, _) = file.load(&f)?;
        let bad = validate(&v);
        for x in &bad {
            println!("violation: {x}");
        }
        println!(
            "m={} N={} field {} total dimension {}: {}",
            v.m(),
            v.top(),
            f.config().label(),
            v.total_dim(),
            if bad.is_empty() { "ok" } else { "invalid" }
        );
        Ok(bad.is_empty())
    })
}

fn homology_cmd(a: &HomologyArgs) -> Result<bool> {
    let engine = Engine::parse(&a.engine)?;
    let file = InputFile::from_json(&read(&a.file)?)?;
    with_field!(file.field(), f => {
        let (v, _) = file.load(&f)?;
        let table = homology_with(&v, a.max_i, engine)?;
        if a.json {
            println!("{}", table.to_json());
        } else {
            print!("{}", table.render());
        }
        let oracle = if a.oracle { Some(tor_oracle(&v, a.max_i, OracleBudget::default())?) } else { None };
        match oracle {
            Some(o) if o != table => {
                eprintln!("oracle disagrees");
                eprintln!("{}", o.to_json());
                Ok(false)
            }
            Some(_) => {
                eprintln!("oracle agrees");
                Ok(true)
            }
            None => Ok(true),
        }
    })
}

fn functors_cmd(a: &FunctorArgs) -> Result<bool> {
    let engine = Engine::parse(&a.engine)?;
    let file = InputFile::from_json(&read(&a.file)?)?;
    with_field!(file.field(), f => {
        let (v, pres) = file.load(&f)?;
        let report = campaign::module_check(&v, pres.as_ref(), &a.check, a.max_i, engine, 0)?;
        println!("{}", report.to_json());
        Ok(report.passed())
    })
}

fn campaign_config(name: Option<&str>, fl: &CampaignFlags) -> Result<CampaignConfig> {
    let mut cfg = match &fl.config {
        Some(path) => {
            let text = read(path)?;
            let mut cfg = CampaignConfig::from_json(&text)?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| input_err!("campaign config: {e}"))?;
            if value.get("field").is_none() {
                if let Some(field) = env_field()? {
                    cfg.field = field;
                }
            }
            cfg
        }
        None => {
            fn need<T>(x: Option<T>, flag: &str) -> Result<T> {
                x.ok_or_else(|| input_err!("--{flag} is required without --config"))
            }
            let mut cfg = CampaignConfig::new(
                name.unwrap_or("compare-oracle"),
                need(fl.m, "m")?,
                need(fl.d, "d")?,
                need(fl.r, "r")?,
                need(fl.top, "n")?,
                need(fl.max_i, "max-i")?,
                fl.count.unwrap_or(10),
                fl.seed.unwrap_or(0),
            );
            cfg.field = pick_field(None)?;
            cfg
        }
    };
    if let Some(n) = name {
        cfg.campaign = n.to_string();
    }
    macro_rules! set {
        ($($flag:ident => $field:ident),*) => { $(if let Some(x) = fl.$flag.clone() { cfg.$field = x; })* };
    }
    set!(m => m, d => d, r => r, top => top, max_i => max_i, count => count, seed => seed,
        engine => engine, gens => generators, rels => relations, max_total_dim => max_total_dim);
    if let Some(s) = &fl.field {
        cfg.field = FieldConfig::parse(s)?;
    }
    Ok(cfg)
}

fn emit(report: &CampaignReport, fl: &CampaignFlags) -> Result<bool> {
    let json = report.to_json();
    if let Some(out) = &fl.out {
        write(out, &json)?;
    }
    if fl.json {
        println!("{json}");
    } else {
        print!("{}", report.render());
    }
    Ok(report.passed())
}

fn verify_cmd(a: &VerifyArgs) -> Result<bool> {
    if a.campaign.is_none() && a.flags.config.is_none() {
        return Err(input_err!("--campaign is required without --config"));
    }
    let cfg = campaign_config(a.campaign.as_deref(), &a.flags)?;
    emit(&campaign::run_campaign(&cfg)?, &a.flags)
}

fn compare_cmd(a: &CompareArgs) -> Result<bool> {
    let cfg = campaign_config(None, &a.flags)?;
    emit(&campaign::compare_oracle(&cfg)?, &a.flags)
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Rho(a) => rho_cmd(a),
        Command::Build(a) => build_cmd(a),
        Command::Validate { file } => validate_cmd(file),
        Command::Homology(a) => homology_cmd(a),
        Command::Functors(a) => functors_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::CompareOracle(a) => compare_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
