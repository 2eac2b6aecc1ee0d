//! `trifs`: conversions, orbits, limits, addresses and checks for the
//! medial subdivision maps.
//!
//! Exit codes: 0 success, 1 domain error, 2 failed verification, 64 usage.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use triangle_ifs::fmt::{self, sig17};
use triangle_ifs::plane_model::DiskModel;
use triangle_ifs::render::{self, RenderMode, RenderSpec};
use triangle_ifs::subdivision::{self, DEFAULT_TOL};
use triangle_ifs::symbolic::{self, Prop31Witness, DEFAULT_HORIZON};
use triangle_ifs::verify;
use triangle_ifs::{ShapeRecord, SymbolSequence};

const EXIT_DOMAIN: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "trifs",
    version,
    about = "Medial subdivision of hyperbolic triangles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Angles, edges and area of one triangle, as JSON.
    Shape(ShapeArgs),
    /// Apply a finite word and print every step as CSV.
    Orbit {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        word: String,
    },
    /// Euclidean limit shape of an eventually periodic word.
    Limit {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        seq: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Barycentric address of a word in the reference triangle.
    Address {
        #[arg(long)]
        seq: String,
        /// Exact rational fixed point instead of a truncated word.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 40)]
        depth: usize,
    },
    /// Whether two words address the same point.
    Equiv {
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Run numerical verification suites; one JSON report per line.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Limit shapes over an interior grid of hyperbolic angle triples.
    Sweep {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Draw the triangle and its subdivision cells as SVG.
    Render {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, conflicts_with = "word", required_unless_present = "word")]
        depth: Option<usize>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, value_enum, default_value_t = Model::Klein)]
        model: Model,
        #[arg(long, default_value_t = render::DEFAULT_SIZE)]
        size: u32,
        #[arg(long, default_value_t = render::DEFAULT_ARC_SAMPLES as u32,
              value_parser = clap::value_parser!(u32).range(2..))]
        arc_samples: u32,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ShapeArgs {
    /// Edge lengths `a,b,c`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    edges: Option<[f64; 3]>,
    /// Angles `A,B,C` in radians.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    angles: Option<[f64; 3]>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Lemma21,
    Area,
    Ratiolimit,
    Cauchy,
    Angleratio,
    Noncontraction,
    Eq1probe,
    Continuity,
    Surjectivity,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Klein,
    Poincare,
}

fn parse_triple(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!(
            "expected three comma-separated numbers, got {text:?}"
        ));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| format!("not a number: {p:?}"))?;
    }
    Ok(out)
}

enum Failure {
    Domain(String),
    Verify(String),
}

impl From<triangle_ifs::Error> for Failure {
    fn from(e: triangle_ifs::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl ShapeArgs {
    fn record(&self) -> Result<ShapeRecord, Failure> {
        Ok(match (self.edges, self.angles) {
            (Some([a, b, c]), _) => ShapeRecord::from_edges(a, b, c)?,
            (_, Some([a, b, c])) => ShapeRecord::from_angles(a, b, c)?,
            (None, None) => unreachable!("clap enforces the group"),
        })
    }
}

#[derive(Serialize)]
struct ExactAddress<'a> {
    seq: String,
    bary: &'a [String; 3],
}

#[derive(Serialize)]
struct ApproxAddressOut {
    seq: String,
    depth: usize,
    #[serde(serialize_with = "fmt::ser_f64x3")]
    bary: [f64; 3],
    #[serde(serialize_with = "fmt::ser_f64")]
    error_bound: f64,
}

#[derive(Serialize)]
struct EquivOut {
    equivalent: bool,
    prop31_form: Option<Prop31Witness>,
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("output serializes")
}

fn seq(text: &str) -> Result<SymbolSequence, Failure> {
    Ok(SymbolSequence::parse(text)?)
}

fn run(cmd: Command, out: &mut String) -> Result<(), Failure> {
    match cmd {
        Command::Shape(s) => {
            out.push_str(&s.record()?.to_json());
            out.push('\n');
        }
        Command::Orbit { shape, word } => {
            let word = subdivision::parse_word(&word)?;
            out.push_str(&subdivision::orbit(&word, &shape.record()?)?.to_csv());
        }
        Command::Limit {
            shape,
            seq: text,
            tol,
        } => {
            let r = subdivision::limit_shape(&seq(&text)?, &shape.record()?, tol)?;
            out.push_str(&json(&r));
            out.push('\n');
        }
        Command::Address {
            seq: text,
            exact,
            depth,
        } => {
            let s = seq(&text)?;
            let line = if exact {
                json(&ExactAddress {
                    seq: s.to_string(),
                    bary: &symbolic::address_exact(&s).to_fraction_strings(),
                })
            } else {
                let a = symbolic::address_approx(&s, depth);
                json(&ApproxAddressOut {
                    seq: s.to_string(),
                    depth,
                    bary: a.point,
                    error_bound: a.error_bound,
                })
            };
            out.push_str(&line);
            out.push('\n');
        }
        Command::Equiv { s, t, horizon } => {
            let (s, t) = (seq(&s)?, seq(&t)?);
            out.push_str(&json(&EquivOut {
                equivalent: symbolic::equivalent(&s, &t),
                prop31_form: symbolic::match_prop31(&s, &t, horizon),
            }));
            out.push('\n');
        }
        Command::Verify {
            suite,
            seed,
            samples,
        } => {
            let names: Vec<&str> = match suite {
                Suite::All => verify::SUITES.to_vec(),
                one => vec![verify::SUITES[one as usize]],
            };
            let mut failed = Vec::new();
            for name in names {
                let r = verify::run_suite(name, seed, samples).expect("known suite");
                if r.asserting && !r.pass {
                    failed.push(name);
                }
                out.push_str(&r.to_json());
                out.push('\n');
            }
            if !failed.is_empty() {
                return Err(Failure::Verify(format!(
                    "failed suites: {}",
                    failed.join(", ")
                )));
            }
        }
        Command::Sweep {
            seq: text,
            grid,
            tol,
        } => {
            let s = seq(&text)?;
            out.push_str("A0,B0,C0,Alim,Blim,Clim\n");
            let step = std::f64::consts::PI / (grid + 1) as f64;
            for i in 1..=grid {
                for j in 1..=grid.saturating_sub(i + 1) {
                    for k in 1..=grid.saturating_sub(i + j) {
                        let (a, b, c) = (i as f64 * step, j as f64 * step, k as f64 * step);
                        let lim =
                            subdivision::limit_shape(&s, &ShapeRecord::from_angles(a, b, c)?, tol)?;
                        let row: Vec<String> = [a, b, c]
                            .iter()
                            .chain(&lim.angles.0)
                            .map(|&x| sig17(x))
                            .collect();
                        out.push_str(&row.join(","));
                        out.push('\n');
                    }
                }
            }
        }
        Command::Render {
            shape,
            depth,
            word,
            model,
            size,
            arc_samples,
            output,
        } => {
            let mode = match (depth, word) {
                (Some(d), _) => RenderMode::Depth(d),
                (None, Some(w)) => RenderMode::Word(subdivision::parse_word(&w)?),
                (None, None) => unreachable!("clap requires one"),
            };
            let model = match model {
                Model::Klein => DiskModel::Klein,
                Model::Poincare => DiskModel::Poincare,
            };
            let spec = RenderSpec {
                size,
                arc_samples: arc_samples as usize,
                ..RenderSpec::new(model, mode)
            };
            let svg = render::render_svg(&shape.record()?, &spec)?;
            std::fs::write(&output, svg)
                .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", output.display())))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    let _ = std::io::stdout().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
