use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;
use yangkit::cli::{emit_translation_table, run_suite, ConfigError, Format, Suite, SuiteConfig};
use yangkit::liealg::{build_lie_algebra, Series};
use yangkit::scalar::{parse_q, DEFAULT_ORDER, Q};
use yangkit::yangrep::DEFAULT_RS_MAX;

/// Relative --out paths resolve under this directory when it is set.
const REPORT_DIR_VAR: &str = "YANGKIT_REPORT_DIR";

#[derive(Parser, Debug)]
#[command(name = "yangkit", version, about = "Exact checks for orthogonal and symplectic Yangians")]
struct Args {
    /// B (so_{2n+1}), C (sp_{2n}) or D (so_{2n}); repeatable
    #[arg(long, required = true)]
    series: Vec<String>,
    /// Rank n; repeatable, combined with every --series
    #[arg(long, required = true)]
    n: Vec<usize>,
    /// Deformation parameter as p/q; repeatable
    #[arg(long, default_values = ["1"])]
    zeta: Vec<String>,
    /// Truncation order for series
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Bound on r, s in the current-presentation suite
    #[arg(long, default_value_t = DEFAULT_RS_MAX)]
    rmax: usize,
    /// liealg, pbw-identities, qybe, presentations, isomorphisms, drinfeld; repeatable
    #[arg(long)]
    suite: Vec<String>,
    /// Print only the tuple translation table of each spec
    #[arg(long)]
    translation_table: bool,
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config(args: &Args) -> Result<SuiteConfig, String> {
    let mut specs = Vec::new();
    for s in &args.series {
        let series = Series::parse(s).ok_or_else(|| format!("unknown series {s:?} (expected B, C or D)"))?;
        for &n in &args.n {
            specs.push((series, n));
        }
    }
    let zetas =
        args.zeta.iter().map(|z| parse_q(z).map_err(|e| format!("zeta {z:?}: {e}"))).collect::<Result<Vec<Q>, _>>()?;
    let suites = args.suite.iter().map(|s| s.parse::<Suite>()).collect::<Result<Vec<_>, ConfigError>>();
    let format = args.format.parse::<Format>().map_err(|e| e.to_string())?;
    Ok(SuiteConfig {
        specs,
        zetas,
        order: args.order,
        rs_max: args.rmax,
        suites: suites.map_err(|e| e.to_string())?,
        format,
    })
}

fn output_path(out: &PathBuf) -> PathBuf {
    match std::env::var_os(REPORT_DIR_VAR) {
        Some(dir) if out.is_relative() => PathBuf::from(dir).join(out),
        _ => out.clone(),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => {
            let p = output_path(p);
            std::fs::write(&p, text).map_err(|e| format!("cannot write {}: {e}", p.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: &Args) -> Result<bool, (u8, String)> {
    let cfg = config(args).map_err(|e| (2, e))?;
    if args.translation_table {
        let mut text = String::new();
        for &(s, n) in &cfg.specs {
            let spec = build_lie_algebra(s, n).map_err(|e| (2, e.to_string()))?;
            let t = emit_translation_table(&spec);
            text.push_str(&match cfg.format {
                Format::Json => t.to_json(),
                Format::Text => t.to_text(),
            });
        }
        emit(&text, &args.out).map_err(|e| (2, e))?;
        return Ok(true);
    }
    let report = run_suite(&cfg).map_err(|e| (2, e.to_string()))?;
    emit(&report.render(cfg.format), &args.out).map_err(|e| (2, e))?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err((code, msg)) => {
            eprintln!("yangkit: {msg}");
            ExitCode::from(code)
        }
    }
}
