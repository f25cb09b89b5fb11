use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lagbgg::bgg::{check_equivalence, default_l_window, functor_l, functor_r, SymComplex};
use lagbgg::io::{IoError, ModuleDoc, ModuleKind, TableDoc, TableEntry};
use lagbgg::torus_model::{self as torus, TorusFibration};
use serde_json::json;

mod suites;

const PASS: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;
const IO: u8 = 3;

#[derive(Parser)]
#[command(name = "lagbgg", version, about = "Exact checks for BGG, Lefschetz and torus-model computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Hexagon,
    Dodecahedron,
    Hodge,
}

#[derive(Clone, Copy, ValueEnum)]
enum Functor {
    L,
    R,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exit 0 iff every check passes.
    Verify {
        /// koszul, bgg-roundtrip, weil, contraction, commutators, serre-sl3, serre-sl4,
        /// hexagon, dodecahedron, hl-all or splitting
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
    },
    /// Print a dimension table of the torus model.
    Table {
        #[arg(value_enum)]
        table: TableKind,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Apply L to an exterior module complex or R to a symmetric one.
    Bgg {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        functor: Functor,
        /// Internal-degree window "lo,hi"; for L it truncates the output, for R it is the
        /// range on which the input is known.
        #[arg(long, env = "LAGBGG_WINDOW", value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
        /// With L: also check that the unit M -> R(L(M)) is a quasi-isomorphism.
        #[arg(long)]
        check_unit: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: i64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err("lo must not exceed hi".into());
    }
    Ok((lo, hi))
}

fn emit(text: &str, output: &Option<PathBuf>) -> u8 {
    match output {
        Some(p) => match fs::write(p, text) {
            Ok(()) => PASS,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", p.display());
                IO
            }
        },
        None => {
            print!("{text}");
            PASS
        }
    }
}

fn verify(suite: &str, n: usize, format: Format) -> u8 {
    match suites::run(suite, n) {
        Err(suites::SuiteError::Usage(msg)) => {
            eprintln!("error: {msg}");
            USAGE
        }
        Err(suites::SuiteError::Failed(msg)) => {
            eprintln!("check failed: {msg}");
            FAILED
        }
        Ok(rep) => {
            match format {
                Format::Json => println!("{}", json!({ "suite": suite, "n": n, "checks": rep.checks, "passed": rep.all_pass() })),
                Format::Ascii | Format::Csv => {
                    for c in &rep.checks {
                        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
                    }
                }
            }
            if rep.all_pass() {
                PASS
            } else {
                FAILED
            }
        }
    }
}

/// Homology dimensions of `G_{i,k}` in degrees `-2n..=n`, which contains every amplitude.
fn hexagon_doc(t: &TorusFibration) -> Result<TableDoc, torus::TorusError> {
    let n = t.n() as i64;
    let entries = torus::hexagon_table(t)?
        .into_iter()
        .map(|((i, k), p)| TableEntry { index: vec![i, k], dims: (-2 * n..=n).map(|m| p.get(&m).copied().unwrap_or(0)).collect() })
        .collect();
    Ok(TableDoc::new(t.n(), entries))
}

/// Rows `k = n..-n`, cells at horizontal position `2i - k`, each showing the total homology of `G_{i,k}`.
fn hexagon_ascii(doc: &TableDoc) -> String {
    let n = doc.n as i64;
    let mut out = String::new();
    for k in (-n..=n).rev() {
        let mut line = format!("k={k:>2} ");
        for x in -2 * n..=2 * n {
            let cell = if (x + k) % 2 == 0 {
                let i = (x + k) / 2;
                doc.entries.iter().find(|e| e.index == [i, k]).map(|e| e.dims.iter().sum::<usize>().to_string())
            } else {
                None
            };
            line += &format!("{:>3}", cell.unwrap_or_default());
        }
        out += line.trim_end();
        out.push('\n');
    }
    out
}

fn table(kind: TableKind, n: usize, format: Format, output: &Option<PathBuf>) -> u8 {
    let t = match TorusFibration::build(n) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let doc = match kind {
        TableKind::Hexagon => match hexagon_doc(&t) {
            Ok(d) => d,
            Err(e) => {
                eprintln!("error: {e}");
                return FAILED;
            }
        },
        TableKind::Dodecahedron => {
            let c = t.tri_grading();
            TableDoc::new(n, c.nonzero().map(|(d, m)| TableEntry { index: d.clone(), dims: vec![m] }).collect())
        }
        TableKind::Hodge => TableDoc::new(
            n,
            torus::hodge_numbers(n).into_iter().map(|((p, q), h)| TableEntry { index: vec![p, q], dims: vec![h] }).collect(),
        ),
    };
    let text = match (format, kind) {
        (Format::Json, _) => doc.to_json() + "\n",
        (Format::Csv, _) => doc.to_csv(),
        (Format::Ascii, TableKind::Hexagon) => hexagon_ascii(&doc),
        (Format::Ascii, TableKind::Hodge) => {
            let top = 2 * n as i64;
            let mut s = String::new();
            for p in (0..=top).rev() {
                let row: Vec<String> = (0..=top)
                    .map(|q| doc.entries.iter().find(|e| e.index == [p, q]).map_or(0, |e| e.dims[0]))
                    .map(|h| format!("{h:>4}"))
                    .collect();
                s += &format!("h^{p},* {}\n", row.concat());
            }
            s
        }
        (Format::Ascii, TableKind::Dodecahedron) => {
            doc.entries.iter().map(|e| format!("H^{:?} = {}\n", e.index, e.dims[0])).collect()
        }
    };
    emit(&text, output)
}

fn bgg(input: &PathBuf, functor: Functor, window: Option<(i64, i64)>, check_unit: bool, output: &Option<PathBuf>) -> u8 {
    let text = match fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", input.display());
            return IO;
        }
    };
    let doc = match ModuleDoc::from_json(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let report = |e: IoError| match e {
        IoError::Parse(_) => {
            eprintln!("error: {e}");
            USAGE
        }
        IoError::Module(_) => {
            eprintln!("check failed: {e}");
            FAILED
        }
    };
    match functor {
        Functor::L => {
            let m = match doc.to_exterior() {
                Ok(m) => m,
                Err(e) => return report(e),
            };
            let w = window.unwrap_or_else(|| default_l_window(&m));
            let out = ModuleDoc::from_symmetric(&functor_l(&m).truncate(w));
            let code = emit(&(out.to_json() + "\n"), output);
            if code != PASS || !check_unit {
                return code;
            }
            match check_equivalence(&m) {
                Ok(true) => {
                    eprintln!("unit M -> R(L(M)) is a quasi-isomorphism");
                    PASS
                }
                Ok(false) => {
                    eprintln!("check failed: unit M -> R(L(M)) is not a quasi-isomorphism");
                    FAILED
                }
                Err(e) => {
                    eprintln!("check failed: {e}");
                    FAILED
                }
            }
        }
        Functor::R => {
            if doc.kind != ModuleKind::Symmetric {
                eprintln!("error: R needs a symmetric module complex");
                return USAGE;
            }
            let mut doc = doc;
            if window.is_some() {
                doc.window = window;
            }
            let c: SymComplex = match doc.to_symmetric() {
                Ok(c) => c,
                Err(e) => return report(e),
            };
            match functor_r(&c) {
                Ok(r) => emit(&(ModuleDoc::from_exterior(&r).to_json() + "\n"), output),
                Err(e) => {
                    eprintln!("error: {e}");
                    USAGE
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify { suite, n, format } => verify(&suite, n, format),
        Command::Table { table: kind, n, format, output } => table(kind, n, format, &output),
        Command::Bgg { input, functor, window, check_unit, output } => bgg(&input, functor, window, check_unit, &output),
    };
    ExitCode::from(code)
}
