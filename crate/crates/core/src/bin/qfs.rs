use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qfs_core::cocycle::{darboux_residual, symplectic_gram, SymplecticGram};
use qfs_core::config::{parse_config, SurfaceConfig};
use qfs_core::limit_set::limit_set;
use qfs_core::schwarzian::property_suite;
use qfs_core::surface::{twist_flow, Representation, Surface};
use qfs_core::{Error, Moebius, C64};

const RELATOR_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "qfs", version, about = "Quasi-Fuchsian holonomy and Goldman symplectic checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generator matrices and relator residual.
    Holonomy { config: PathBuf },
    /// Complex lengths of the decomposition curves, one curve, or a word.
    Lengths {
        config: PathBuf,
        #[arg(long, conflicts_with = "word")]
        curve: Option<String>,
        #[arg(long)]
        word: Option<String>,
    },
    /// Goldman pairing on the Fenchel-Nielsen frame.
    Gram {
        config: PathBuf,
        /// Overrides options.fd_step.
        #[arg(long)]
        fd_step: Option<f64>,
    },
    /// Compare the Gram matrix with the canonical symplectic form.
    DarbouxCheck {
        config: PathBuf,
        #[arg(long)]
        fd_step: Option<f64>,
    },
    /// Apply the twist flow along one curve and print the new config.
    Twist {
        config: PathBuf,
        #[arg(long)]
        curve: String,
        /// Complex time as `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Limit-set point cloud.
    Limitset {
        config: PathBuf,
        /// Maximal word length; defaults to options.word_length.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Seeded property checks of the Schwarzian derivative (seed from QFS_SEED).
    SchwarzianSelftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

enum Failure {
    Input(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

fn c(z: C64) -> Value {
    json!([z.re, z.im])
}

fn matrix(m: &Moebius) -> Value {
    json!([[c(m.a), c(m.b)], [c(m.c), c(m.d)]])
}

fn load(path: &Path) -> Result<(SurfaceConfig, Surface), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let config = parse_config(&text)?;
    let surface = Surface::new(config.graph()?)?;
    Ok((config, surface))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print(v: &Value) {
    emit(&(serde_json::to_string_pretty(v).expect("json") + "\n"));
}

fn gram_json(config: &SurfaceConfig, g: &SymplecticGram) -> Value {
    let names: Vec<String> = ["l", "tau"]
        .iter()
        .flat_map(|p| config.gluings.iter().map(move |e| format!("{p}_{}", e.curve)))
        .collect();
    let scale = g.fitted_scale();
    json!({
        "basis": names,
        "matrix": g.matrix.iter().map(|r| r.iter().map(|z| c(*z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "darboux_residual": darboux_residual(g),
        "fitted_scale": c(scale),
        "scaled_residual": g.residual_against(scale),
        "block_residual": g.block_residual(),
        "twist_row_residual": g.twist_row_residual(),
        "raw_asymmetry": g.raw_asymmetry,
        "max_cocycle_residual": g.max_cocycle_residual,
        "fd_step": g.fd_step,
    })
}

fn holonomy_json(config: &SurfaceConfig, rep: &Representation) -> Value {
    let pres = rep.presentation();
    let names = pres.generator_names();
    let gens: serde_json::Map<String, Value> = names
        .iter()
        .zip(rep.images())
        .map(|(n, m)| (n.clone(), matrix(m)))
        .collect();
    let markings: serde_json::Map<String, Value> = config
        .gluings
        .iter()
        .zip(pres.markings())
        .map(|(g, w)| (g.curve.clone(), json!(w.display(names).to_string())))
        .collect();
    json!({
        "generators": gens,
        "relator": pres.relator().display(names).to_string(),
        "markings": markings,
        "relator_residual": rep.relator_residual(),
        "fuchsian_residual": rep.fuchsian_residual(),
    })
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Holonomy { config } => {
            let (cfg, surface) = load(&config)?;
            let rep = surface.holonomy(&cfg.fn_)?;
            print(&holonomy_json(&cfg, &rep));
            Ok(rep.relator_residual() <= RELATOR_TOL)
        }
        Command::Lengths { config, curve, word } => {
            let (cfg, surface) = load(&config)?;
            let rep = surface.holonomy(&cfg.fn_)?;
            let out = if let Some(w) = word {
                let parsed = rep.presentation().parse_word(&w)?;
                let l = rep.complex_length_of_curve(&parsed)?;
                json!({ w: c(l.value()) })
            } else {
                let lengths = rep.decomposition_lengths()?;
                let mut out = serde_json::Map::new();
                for (g, l) in cfg.gluings.iter().zip(&lengths) {
                    if curve.as_deref().is_none_or(|name| name == g.curve) {
                        out.insert(g.curve.clone(), c(l.value()));
                    }
                }
                if let Some(name) = curve {
                    if out.is_empty() {
                        return Err(Failure::Input(format!("no curve labelled `{name}`")));
                    }
                }
                Value::Object(out)
            };
            print(&out);
            Ok(true)
        }
        Command::Gram { config, fd_step } => {
            let (cfg, surface) = load(&config)?;
            let g = symplectic_gram(&surface, &cfg.fn_, fd_step.unwrap_or(cfg.options.fd_step))?;
            print(&gram_json(&cfg, &g));
            Ok(true)
        }
        Command::DarbouxCheck { config, fd_step } => {
            let (cfg, surface) = load(&config)?;
            let g = symplectic_gram(&surface, &cfg.fn_, fd_step.unwrap_or(cfg.options.fd_step))?;
            let residual = darboux_residual(&g);
            let pass = residual <= cfg.options.tol;
            let scale = g.fitted_scale();
            print(&json!({
                "pass": pass,
                "darboux_residual": residual,
                "tolerance": cfg.options.tol,
                "fitted_scale": c(scale),
                "scaled_residual": g.residual_against(scale),
                "fd_step": g.fd_step,
            }));
            Ok(pass)
        }
        Command::Twist { config, curve, t } => {
            let (mut cfg, _) = load(&config)?;
            let i = cfg
                .gluings
                .iter()
                .position(|g| g.curve == curve)
                .ok_or_else(|| Failure::Input(format!("no curve labelled `{curve}`")))?;
            let t = parse_complex(&t)?;
            cfg.fn_ = twist_flow(&cfg.fn_, i, t);
            emit(&(cfg.to_json_string() + "\n"));
            Ok(true)
        }
        Command::Limitset {
            config,
            depth,
            format,
            output,
        } => {
            let (cfg, surface) = load(&config)?;
            let depth = depth.unwrap_or(cfg.options.word_length);
            if depth == 0 {
                return Err(Failure::Input("--depth must be at least 1".into()));
            }
            let rep = surface.holonomy(&cfg.fn_)?;
            let cloud = limit_set(&rep, depth);
            let text = match format {
                Format::Csv => cloud.to_csv(),
                Format::Svg => cloud.to_svg(),
            };
            match output {
                Some(p) => fs::write(&p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
                None => emit(&text),
            }
            Ok(true)
        }
        Command::SchwarzianSelftest => {
            let seed = match std::env::var("QFS_SEED") {
                Ok(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Input(format!("QFS_SEED must be an unsigned integer, got `{s}`")))?,
                Err(_) => 0,
            };
            let report = property_suite(seed)?;
            let mut v = serde_json::to_value(report).expect("json");
            v["pass"] = json!(report.passes());
            print(&v);
            Ok(report.passes())
        }
    }
}

fn parse_complex(s: &str) -> Result<C64, Failure> {
    let bad = || Failure::Input(format!("expected `re,im`, got `{s}`"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    Ok(C64::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
