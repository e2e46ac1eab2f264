use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use netcone_core::chambers::{initial_chamber, nefify};
use netcone_core::arith::rational_json;
use netcone_core::mw::normalized_alpha;
use netcone_core::verifier::{
    build_k0, covering_experiment, error_certificate, nef_symmetries, saturation_check,
    single_flop_states, verify_curv_cone, verify_effectivity_on_nef_rays, verify_k0,
    verify_k_negative_bound, walk_states, CoveringParams, CurvData,
};
use netcone_core::{
    act, normalize_to_pi, pair, parse_class, parse_divisor, relative_project, CurveClass, Error,
    MWElement, NamedClass, NetConfig, Report,
};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "netcone", version, about = "Exact cone computations for the blowup of P^3 in the base points of a net of quadrics")]
struct Cli {
    /// Net configuration JSON; defaults to a rank-7 net with no reducible quadrics.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    #[arg(long = "samples", global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    sample_count: u64,

    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_flops: u64,

    #[arg(long = "format", global = true, value_enum, default_value_t = Format::Json)]
    output_format: Format,

    /// Include per-certificate runtimes (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Echo the configuration and its Mordell-Weil rank; with --class, describe a class.
    Model {
        #[arg(long)]
        class: Option<String>,
    },
    /// Curv(X) and Nef(X), the K-trivial slice, and effectivity of the Nef rays.
    VerifyNef,
    /// K0, the K-negative bound over flopped chambers.
    VerifyMovable,
    /// Apply the transvection of y to a divisor class.
    MwAct {
        /// Seven integers, e.g. "[1,0,0,0,0,0,0]".
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Translate a divisor class into the fundamental domain.
    Normalize {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Flop until the divisor class is nef.
    Nefify {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Covering experiment plus a saturation rerun with seed + 1.
    CoverCheck,
    Symmetries,
    /// Every certificate.
    All,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Model { .. } => "model",
            Command::VerifyNef => "verify-nef",
            Command::VerifyMovable => "verify-movable",
            Command::MwAct { .. } => "mw-act",
            Command::Normalize { .. } => "normalize",
            Command::Nefify { .. } => "nefify",
            Command::CoverCheck => "cover-check",
            Command::Symmetries => "symmetries",
            Command::All => "all",
        }
    }

    fn needs_rank7(&self) -> bool {
        !matches!(self, Command::Model { .. } | Command::VerifyNef | Command::Symmetries)
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<NetConfig, Error> {
    match path {
        None => Ok(NetConfig::generic()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", p.display())))?;
            NetConfig::from_json(&text)
        }
    }
}

fn describe(class: &NamedClass) -> Value {
    match class {
        NamedClass::Divisor(d) => json!({
            "kind": "divisor",
            "class": d.to_string(),
            "coords": d,
            "fibre_degree": rational_json(&pair(d, &CurveClass::fiber())),
            "relative": relative_project(d).beta.iter().map(rational_json).collect::<Vec<_>>(),
        }),
        NamedClass::Curve(c) => json!({
            "kind": "curve",
            "class": c.to_string(),
            "coords": c,
            "canonical_degree": rational_json(&pair(&netcone_core::DivisorClass::canonical(), c)),
        }),
    }
}

fn covering_params(cli: &Cli, seed: u64) -> CoveringParams {
    CoveringParams {
        samples: cli.sample_count as usize,
        seed,
        max_flops: cli.max_flops as usize,
        ..CoveringParams::default()
    }
}

/// The nef cone does not depend on the configuration.
fn nef_certificates(report: &mut Report) -> Result<(), Error> {
    report.certificates.push(verify_curv_cone());
    let data = CurvData::compute();
    let start = initial_chamber(&NetConfig::generic())?;
    report.certificates.push(verify_effectivity_on_nef_rays(&data.nef_rays(), &start));
    Ok(())
}

fn movable_certificates(report: &mut Report, cli: &Cli, config: &NetConfig) -> Result<(), Error> {
    let k0 = build_k0(config)?;
    report.certificates.push(verify_k0(&k0));
    let mut states = single_flop_states();
    states.extend(walk_states(100, 10, cli.seed));
    report.certificates.push(verify_k_negative_bound(&states));
    Ok(())
}

fn cover_certificates(report: &mut Report, cli: &Cli, config: &NetConfig) -> Result<(), Error> {
    let k0 = build_k0(config)?;
    let (first, c1) = covering_experiment(config, &k0, &covering_params(cli, cli.seed))?;
    let (second, _) = covering_experiment(config, &k0, &covering_params(cli, cli.seed.wrapping_add(1)))?;
    report.certificates.push(c1);
    report.certificates.push(saturation_check(&first, &second));
    Ok(())
}

fn execute(cli: &Cli, config: &NetConfig, report: &mut Report) -> Result<(), Error> {
    match &cli.command {
        Command::Model { class } => {
            let mut v = json!({"rank": config.rank()});
            if let Some(text) = class {
                v["class"] = describe(&parse_class(text, config)?);
            }
            report.result = Some(v);
        }
        Command::VerifyNef => nef_certificates(report)?,
        Command::VerifyMovable => movable_certificates(report, cli, config)?,
        Command::MwAct { y, d } => {
            let y = MWElement::from_json(y)?;
            let d = parse_divisor(d, config)?;
            let image = act(&y, &d);
            report.result = Some(json!({
                "y": y,
                "d": d.to_string(),
                "image": image.to_string(),
                "image_coords": image,
            }));
        }
        Command::Normalize { d } => {
            let d = parse_divisor(d, config)?;
            match normalize_to_pi(&d) {
                Ok((y, dn)) => {
                    let alpha = normalized_alpha(&dn)?;
                    report.result = Some(json!({
                        "d": d.to_string(),
                        "y": y,
                        "normalized": dn.to_string(),
                        "normalized_coords": dn,
                        "alpha": alpha.iter().map(rational_json).collect::<Vec<_>>(),
                    }));
                }
                Err(e) => report.certificates.push(error_certificate("normalize", &e)),
            }
        }
        Command::Nefify { d } => {
            let d = parse_divisor(d, config)?;
            match nefify(&d, config, cli.max_flops as usize) {
                Ok(out) => {
                    report.result = Some(json!({
                        "d": d.to_string(),
                        "flops": out.word.len(),
                        "flop_word": out.word,
                        "chamber": out.state,
                    }));
                }
                Err(e @ (Error::RequiresRank7(_) | Error::InvalidConfig(_))) => return Err(e),
                Err(e) => report.certificates.push(error_certificate("nefify", &e)),
            }
        }
        Command::CoverCheck => cover_certificates(report, cli, config)?,
        Command::Symmetries => report.certificates.push(nef_symmetries()),
        Command::All => {
            nef_certificates(report)?;
            movable_certificates(report, cli, config)?;
            cover_certificates(report, cli, config)?;
            report.certificates.push(nef_symmetries());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = match load_config(cli.config.as_ref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.command.needs_rank7() {
        if let Err(e) = config.require_rank7() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut report = Report::new(cli.command.name(), &config, cli.seed);
    report.timings = cli.timings;
    if let Err(e) = execute(&cli, &config, &mut report) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let text = match cli.output_format {
        Format::Json => report.to_json_string() + "\n",
        Format::Markdown => report.to_markdown(),
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
