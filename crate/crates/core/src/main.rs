use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use globop::algebra::{check_all, LawBounds};
use globop::coherence::{verify, Axiom};
use globop::collections::build_cn;
use globop::enumerate::enumerate_cells;
use globop::models::{parse_algebra, StrictAlgebra, TableAlgebra};
use globop::pasting::StarOrder;
use globop::term::Operad;

#[derive(Parser)]
#[command(name = "globop", version, about = "Colored globular operads of non-strict cells")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Orientation {
    Diagrammatic,
    Applicative,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the collection C^n truncated at max-dim.
    Collection {
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the normal forms of one dimension up to a size.
    Enumerate {
        #[arg(long, default_value_t = 0)]
        operad: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the AD or CAD coherence cells and check the bracket obligations.
    Verify {
        #[arg(long)]
        axiom: Axiom,
        #[arg(long, value_enum, default_value_t = Orientation::Both)]
        orientation: Orientation,
    },
    /// Run every algebra check on an algebra file.
    CheckAlgebra {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 2)]
        leaves: usize,
    },
    /// Print the built-in strict example as a table file.
    ExportStrict {
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Fail {
    Check(String),
    Input(String),
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| Fail::Input(e.to_string()))
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Fail {
    Fail::Input(e.to_string())
}

fn run(cmd: Cmd) -> Result<(), Fail> {
    match cmd {
        Cmd::Collection { n, max_dim, out } => emit(&out, &build_cn(n, max_dim).map_err(input)?.to_text()),
        Cmd::Enumerate { operad, dim, size, max_dim, out } => {
            let op = Operad::new(Arc::new(build_cn(operad, max_dim).map_err(input)?));
            let text: String = enumerate_cells(&op, dim, size).iter().map(|t| format!("{t}\n")).collect();
            emit(&out, &text)
        }
        Cmd::Verify { axiom, orientation } => {
            let orders = match orientation {
                Orientation::Diagrammatic => vec![StarOrder::Diagrammatic],
                Orientation::Applicative => vec![StarOrder::Applicative],
                Orientation::Both => vec![StarOrder::Diagrammatic, StarOrder::Applicative],
            };
            let v = verify(axiom, &orders).map_err(input)?;
            emit(&None, &v.report())?;
            if v.passed() {
                Ok(())
            } else {
                let first = v.attempts.iter().flat_map(|a| &a.built).find_map(|b| b.error.clone());
                Err(Fail::Check(first.unwrap_or_else(|| "a bracket obligation is not parallel".into())))
            }
        }
        Cmd::CheckAlgebra { file, size, leaves } => {
            if size == 0 || leaves == 0 {
                return Err(Fail::Input("bounds must be at least 1".into()));
            }
            let text = fs::read_to_string(&file).map_err(|e| Fail::Input(format!("{}: {e}", file.display())))?;
            let alg = parse_algebra(&text).map_err(input)?;
            let rep = check_all(alg.as_dyn(), LawBounds { size, leaves }).map_err(input)?;
            let mut s: String = rep.lines.iter().map(|l| format!("{l}\n")).collect();
            for w in &rep.witnesses {
                s.push_str(&format!("witness {w}\n"));
            }
            s.push_str(if rep.ok { "algebra ok\n" } else { "algebra failed\n" });
            emit(&None, &s)?;
            if rep.ok {
                Ok(())
            } else {
                Err(Fail::Check(rep.witnesses.first().cloned().unwrap_or_default()))
            }
        }
        Cmd::ExportStrict { level, max_dim, out } => {
            let op = Operad::new(Arc::new(build_cn(level, max_dim).map_err(input)?));
            emit(&out, &TableAlgebra::tabulate(&StrictAlgebra::example(level, max_dim), &op).to_text())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Check(m)) => {
            eprintln!("failed: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
