use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exzero::algebra::parse_poly;
use exzero::cochains::NewformOptions;
use exzero::elliptic::{scan, EllipticCurve, ScanBounds};
use exzero::harness::{
    export_graph, measure_table, resolve_fixture, symbol_report, verify, Pipeline, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "exzero",
    version,
    about = "Exceptional-zero verifier over F_q(T)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the exceptional-zero identity for a curve and print a JSON report.
    Verify {
        /// Fixture path, or a name looked up in $EXZERO_FIXTURES.
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 32)]
        prec: u32,
        /// Ball level (default 12 for deg p = 1, else 8).
        #[arg(long)]
        level: Option<u32>,
        /// Ball level of the raw double integral.
        #[arg(long)]
        raw_level: Option<u32>,
        #[arg(long, default_value_t = 3)]
        degree_bound: usize,
        /// Run with the negated cochain.
        #[arg(long)]
        negate: bool,
    },
    /// Search small Weierstrass models for candidate fixtures.
    Scan {
        #[arg(long)]
        qmax: u32,
        #[arg(long, default_value_t = 1)]
        coeff_degree: usize,
        #[arg(long, default_value_t = 3)]
        min_level: usize,
        #[arg(long, default_value_t = 4)]
        max_level: usize,
        #[arg(long, default_value_t = 2)]
        max_p_degree: usize,
        #[arg(long, default_value_t = 20)]
        max_hits: usize,
    },
    /// Print the Hecke eigenvalues and the cochain table of a curve's newform.
    Newform {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 3)]
        degree_bound: usize,
    },
    /// Write the quotient graph of level POLY as Graphviz.
    Graph {
        #[arg(long)]
        level: String,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The modular symbol [r, inf] by both routes.
    Symbol {
        #[arg(long)]
        r: String,
        #[arg(long)]
        curve: String,
    },
    /// Axis and Teitelbaum measures on balls up to a depth.
    Measure {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 2)]
        depth: u32,
    },
}

fn load(name: &str) -> exzero::Result<EllipticCurve> {
    EllipticCurve::load(&resolve_fixture(name))
}

fn pipeline(name: &str, degree_bound: usize) -> exzero::Result<Pipeline> {
    let opts = NewformOptions {
        degree_bound,
        ..Default::default()
    };
    Pipeline::build(load(name)?, opts, false)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(cli: Cli) -> exzero::Result<bool> {
    match cli.cmd {
        Cmd::Verify {
            curve,
            prec,
            level,
            raw_level,
            degree_bound,
            negate,
        } => {
            let opts = VerifyOptions {
                level,
                prec,
                raw_level,
                newform: NewformOptions {
                    degree_bound,
                    ..Default::default()
                },
                negate,
            };
            let report = verify(load(&curve)?, &opts)?;
            println!("{}", report.to_json());
            for c in &report.checks {
                eprintln!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            Ok(report.passed())
        }
        Cmd::Scan {
            qmax,
            coeff_degree,
            min_level,
            max_level,
            max_p_degree,
            max_hits,
        } => {
            for q in [2u32, 3, 5, 7].into_iter().filter(|&q| q <= qmax) {
                let bounds = ScanBounds {
                    q,
                    max_coeff_degree: coeff_degree,
                    short_form: q > 3,
                    level_degrees: (min_level, max_level),
                    p_degrees: (1, max_p_degree),
                    max_hits,
                };
                for hit in scan(&bounds)? {
                    println!(
                        "# level degree {}, m_p {}, m_inf {}, bad places {}",
                        hit.level_degree,
                        hit.m_p,
                        hit.m_inf,
                        hit.bad_places.join(" ")
                    );
                    println!("{}", hit.fixture);
                }
            }
            Ok(true)
        }
        Cmd::Newform {
            curve,
            degree_bound,
        } => {
            let p = pipeline(&curve, degree_bound)?;
            let out = serde_json::json!({
                "curve": p.curve.name,
                "cuspidal_dimension": p.space.dim(),
                "degree_bound": p.newform.degree_bound,
                "eigenvalues": p.newform.eigenvalues,
                "cochain": p.newform.cochain.table(),
            });
            println!("{}", json(&out));
            Ok(true)
        }
        Cmd::Graph { level, q, out } => {
            let dot = export_graph(&parse_poly(&level, q)?)?;
            match out {
                Some(path) => std::fs::write(path, dot)?,
                None => print!("{dot}"),
            }
            Ok(true)
        }
        Cmd::Symbol { r, curve } => {
            let rep = symbol_report(&pipeline(&curve, 3)?, &r)?;
            println!("{}", json(&rep));
            Ok(rep.manin == rep.path)
        }
        Cmd::Measure { curve, depth } => {
            let rows = measure_table(&pipeline(&curve, 3)?, depth)?;
            println!("{}", json(&rows));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
