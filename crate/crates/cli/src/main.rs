use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use smallcover_core::bier::bier_instance;
use smallcover_core::catalog;
use smallcover_core::fuzz::run_fuzz;
use smallcover_core::instance::{emit_instance, parse_complex, parse_instance, parse_order, Instance};
use smallcover_core::report::{analyze, render_json, render_table, table1, AnalyzeOptions};
use smallcover_core::shelling::{find_shelling, verify_shelling, Shelling};
use smallcover_core::{Error, Result};

/// Cohomology and characteristic-map analysis of small covers.
#[derive(Parser)]
#[command(name = "smallcover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for an instance file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// `all`, or a comma-separated list of condition numbers such as `1,4,7`.
        #[arg(long, default_value = "all")]
        conditions: String,
        /// Append wall-clock timings (makes output vary between runs).
        #[arg(long)]
        timings: bool,
    },
    /// Betti numbers of the 9-point Bier sphere example against the expected rows.
    Table1,
    /// Evaluate the seven conditions on random characteristic matrices.
    Fuzz {
        #[arg(long)]
        complex: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Built-in complexes and instances.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Verify a facet order, or search for a shelling.
    Shelling {
        file: PathBuf,
        /// JSON array of facets giving the order to verify.
        #[arg(long)]
        order: Option<PathBuf>,
    },
    /// Bier sphere of a complex on 1..=l, emitted as an instance file.
    Bier { file: PathBuf },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Emit { name: String },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(Error::from)
}

fn parse_conditions(list: &str) -> Result<Option<Vec<usize>>> {
    if list == "all" {
        return Ok(None);
    }
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Semantic(format!("`{s}` is not a condition number")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn render_shelling(s: &Shelling) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>5}  facet / restriction face", "i");
    for (i, (f, r)) in s.facets().iter().zip(s.restrictions()).enumerate() {
        let _ = writeln!(out, "{:>5}  {f:?} / {r:?}", i + 1);
    }
    let _ = writeln!(out, "faces covered by restriction intervals: {}", s.interval_face_count());
    out
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Analyze {
            file,
            format,
            conditions,
            timings,
        } => {
            let instance = parse_instance(&read(&file)?)?;
            let options = AnalyzeOptions {
                conditions: parse_conditions(&conditions)?,
                timings,
            };
            let report = analyze(&instance, &options)?;
            print!(
                "{}",
                match format {
                    Format::Json => render_json(&report),
                    Format::Table => render_table(&report),
                }
            );
            Ok(if report.verdict == Some(false) { 2 } else { 0 })
        }
        Command::Table1 => {
            let t = table1()?;
            print!("{}", t.render());
            Ok(if t.rational_matches() && t.mod2_matches() { 0 } else { 2 })
        }
        Command::Fuzz {
            complex,
            samples,
            seed,
        } => {
            let k = catalog::complex(&complex)?;
            let s = run_fuzz(&complex, &k, samples, seed)?;
            println!("complex            {}", s.complex);
            println!("seed               {}", s.seed);
            println!("samples            {}", s.samples);
            println!("rejected draws     {}", s.rejections);
            println!("simplex pullbacks  {} (linear model {})", s.simplex_pullbacks, s.linear_models);
            println!("not asserted       {}", s.skipped);
            println!(
                "agreements         {}/{}",
                s.agreements,
                s.samples - s.skipped
            );
            for d in &s.disagreements {
                let rows: Vec<String> = d
                    .lambda
                    .rows()
                    .iter()
                    .map(|r| r.to_bits().iter().map(u8::to_string).collect())
                    .collect();
                println!(
                    "DISAGREEMENT at sample {}: lambda {} conditions {:?}",
                    d.sample,
                    rows.join(" "),
                    d.conditions
                );
            }
            Ok(if s.disagreements.is_empty() { 0 } else { 2 })
        }
        Command::Catalog { action } => {
            match action {
                CatalogAction::List => {
                    println!("instances:");
                    for name in catalog::instance_names() {
                        println!("  {name}");
                    }
                    println!("complexes:");
                    for name in catalog::complex_names() {
                        println!("  {name}");
                    }
                }
                CatalogAction::Emit { name } => print!("{}", emit_instance(&catalog::instance(&name)?)),
            }
            Ok(0)
        }
        Command::Shelling { file, order } => {
            let (_, k) = parse_complex(&read(&file)?)?;
            match order {
                Some(path) => {
                    let order = parse_order(&read(&path)?)?;
                    let s = verify_shelling(&k, &order)?;
                    println!("valid shelling");
                    print!("{}", render_shelling(&s));
                }
                None => match find_shelling(&k)? {
                    Some(s) => {
                        println!("shelling found");
                        print!("{}", render_shelling(&s));
                    }
                    None => println!("no shelling found"),
                },
            }
            Ok(0)
        }
        Command::Bier { file } => {
            let (name, k) = parse_complex(&read(&file)?)?;
            let (complex, lambda) = bier_instance(&k)?;
            let name = if name.is_empty() { "bier".to_string() } else { format!("bier-{name}") };
            print!(
                "{}",
                emit_instance(&Instance {
                    name,
                    complex,
                    lambda
                })
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
