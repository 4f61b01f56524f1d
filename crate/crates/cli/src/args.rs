use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use puhyp::{Execution, Mode, NormKind, PowerSide, SearchConfig};

use crate::commands::{self, parse_point, Outcome, Settings, TestMapSource, TransportArgs};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "puhyp",
    version,
    about = "Isometries of complex hyperbolic space and discreteness certificates"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON file with default search settings.
    #[arg(long, global = true, env = "PUHYP_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tol_unitary: Option<f64>,
    #[arg(long, global = true)]
    pub tol_eig: Option<f64>,
    #[arg(long, global = true)]
    pub tol_null: Option<f64>,
    #[arg(long, global = true)]
    pub tol_identity: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub norm: Option<NormArg>,
    /// Which argument carries the powers in the elliptic branch: [f, g^i] or [f^i, g].
    #[arg(long, global = true, value_enum)]
    pub elliptic_power_side: Option<SideArg>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    #[arg(long, global = true)]
    pub max_states: Option<usize>,
    #[arg(long, global = true)]
    pub max_depth: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the machine-readable dump (or the point cloud for `limitset`) here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the machine-readable dump instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Rescale every input matrix to determinant 1 before use.
    #[arg(long, global = true)]
    pub canonical_phase: bool,
    /// Disable data parallelism.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NormArg {
    Operator,
    Frobenius,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    G,
    F,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    TestMap,
    TwoLoxodromic,
    Stabilizer,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one element and list its fixed points.
    Classify { file: PathBuf, element: String },
    /// Evaluate the Jørgensen-type statistic for a pair.
    Jorgensen { file: PathBuf, f: String, g: String },
    /// Search the group for certificates of non-discreteness.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Test map by name, from the group file or from --test-map-file.
        #[arg(long)]
        test_map: Option<String>,
        #[arg(long)]
        test_map_file: Option<PathBuf>,
    },
    /// Sample the limit set as a boundary point cloud.
    Limitset {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Interior point as comma-separated reals `re1,im1,…`; defaults to the origin.
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Build an element with one fixed point in each of two boundary balls.
    Transport {
        file: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        o1: String,
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        o2: String,
        #[arg(long)]
        r2: f64,
        #[arg(long, default_value_t = 64)]
        m_max: usize,
        #[arg(long, default_value_t = 64)]
        r_max: usize,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
    },
    /// Fraction of random perturbations that stay loxodromic.
    Stability {
        file: PathBuf,
        element: String,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Scan for torsion with infinite fixed sets approaching the identity.
    Conditiona {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

impl GlobalArgs {
    pub fn settings(&self) -> Result<Settings, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    source: e,
                })?;
                serde_json::from_str::<SearchConfig>(&text).map_err(|e| CliError::Parse {
                    origin: path.display().to_string(),
                    line: e.line(),
                    column: e.column(),
                    message: e.to_string(),
                })?
            }
            None => SearchConfig::default(),
        };
        if let Some(v) = self.tol_unitary {
            cfg.tol.tol_unitary = v;
        }
        if let Some(v) = self.tol_eig {
            cfg.tol.tol_eig = v;
        }
        if let Some(v) = self.tol_null {
            cfg.tol.tol_null = v;
        }
        if let Some(v) = self.tol_identity {
            cfg.tol.tol_identity = v;
        }
        if let Some(n) = self.norm {
            cfg.norm = match n {
                NormArg::Operator => NormKind::Operator,
                NormArg::Frobenius => NormKind::Frobenius,
            };
        }
        if let Some(side) = self.elliptic_power_side {
            cfg.power_side = match side {
                SideArg::G => PowerSide::G,
                SideArg::F => PowerSide::F,
            };
        }
        if let Some(v) = self.epsilon {
            cfg.epsilon = v;
        }
        if let Some(v) = self.k_max {
            cfg.k_max = v;
        }
        if let Some(v) = self.max_states {
            cfg.max_states = v;
        }
        if let Some(v) = self.max_depth {
            cfg.max_depth = v;
        }
        cfg.execution = if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        };
        cfg.validate()?;
        Ok(Settings {
            search: cfg,
            canonical_phase: self.canonical_phase,
            seed: self.seed,
        })
    }
}

fn positive_depth(depth: usize) -> Result<usize, CliError> {
    if depth == 0 {
        return Err(CliError::Validation("--depth must be at least 1".into()));
    }
    Ok(depth)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let s = cli.global.settings()?;
    match &cli.command {
        Command::Classify { file, element } => commands::classify(file, element, &s),
        Command::Jorgensen { file, f, g } => commands::jorgensen(file, f, g, &s),
        Command::Analyze {
            file,
            mode,
            depth,
            test_map,
            test_map_file,
        } => {
            let mode = match mode {
                ModeArg::TestMap => Mode::TestMap,
                ModeArg::TwoLoxodromic => Mode::TwoLoxodromic,
                ModeArg::Stabilizer => Mode::Stabilizer,
            };
            let src = TestMapSource {
                name: test_map.clone(),
                file: test_map_file.clone(),
            };
            commands::analyze(file, mode, positive_depth(*depth)?, &src, &s)
        }
        Command::Limitset {
            file,
            depth,
            basepoint,
        } => {
            let p = match basepoint {
                Some(text) => parse_point(text)?,
                None => {
                    let g = crate::groupfile::GroupFile::read(file)?;
                    puhyp::BallPoint::new(vec![puhyp::Complexd::new(0.0, 0.0); g.dim_n.max(1)])?
                }
            };
            commands::limitset(file, positive_depth(*depth)?, &p, &s)
        }
        Command::Transport {
            file,
            p,
            q,
            f,
            o1,
            r1,
            o2,
            r2,
            m_max,
            r_max,
            n_max,
        } => {
            let args = TransportArgs {
                p: p.clone(),
                q: q.clone(),
                f: f.clone(),
                o1: parse_point(o1)?,
                r1: *r1,
                o2: parse_point(o2)?,
                r2: *r2,
                m_max: *m_max,
                r_max: *r_max,
                n_max: *n_max,
            };
            commands::transport(file, &args, &s)
        }
        Command::Stability {
            file,
            element,
            delta,
            trials,
        } => {
            if delta.is_nan() || *delta < 0.0 || *trials == 0 {
                return Err(CliError::Validation(
                    "--delta must be ≥ 0 and --trials positive".into(),
                ));
            }
            commands::stability(file, element, *delta, *trials, &s)
        }
        Command::Conditiona { file, depth } => {
            commands::condition_a(file, positive_depth(*depth)?, &s)
        }
    }
}
