use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use isoscreen::degrees::DegreeTable;
use isoscreen::genus::{genus_of_image, genus_x1};
use isoscreen::pipeline::{
    screen, screen_batch, BatchItem, BatchOutcome, MultiplicityMode, ScreenOptions, ScreeningReport,
};
use isoscreen::record::{parse_records, ImageRecord};

/// Screen elliptic curves over Q for isolated points on X1(n), given their
/// adelic Galois image.
#[derive(Parser)]
#[command(name = "isoscreen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Screen the single record in FILE. Exits 10 when witnesses remain.
    Screen {
        file: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include every primitive entry and the filter that removed it.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Multiplicity::AllPoints)]
        multiplicity: Multiplicity,
    },
    /// Screen every record in FILE, writing reports.jsonl and summary.json to DIR.
    Batch {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Multiplicity::AllPoints)]
        multiplicity: Multiplicity,
    },
    /// Genus of X1(N), or of the modular curve of the image in FILE reduced mod N.
    Genus {
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        image: Option<PathBuf>,
    },
    /// Orbits of <G, -I> on (Z/m)^2 for the image in FILE.
    Orbits {
        file: PathBuf,
        #[arg(long = "mod")]
        modulus: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Multiplicity {
    AllPoints,
    PrimitiveOnly,
}

impl From<Multiplicity> for ScreenOptions {
    fn from(m: Multiplicity) -> ScreenOptions {
        ScreenOptions {
            multiplicity: match m {
                Multiplicity::AllPoints => MultiplicityMode::AllPoints,
                Multiplicity::PrimitiveOnly => MultiplicityMode::PrimitiveOnly,
            },
        }
    }
}

const EXIT_WITNESSES: u8 = 10;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Screen {
            file,
            out,
            trace,
            multiplicity,
        } => {
            let record = single_record(&file)?;
            let g = record.image()?;
            let mut report = screen(&g, &record.label, multiplicity.into())?;
            report.j = record.j;
            let mut text = serde_json::to_string_pretty(&report_value(&report, trace))?;
            text.push('\n');
            match out {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
                }
                None => print!("{text}"),
            }
            Ok(if report.witnesses.is_empty() {
                0
            } else {
                EXIT_WITNESSES
            })
        }
        Command::Batch {
            file,
            jobs,
            out,
            trace,
            multiplicity,
        } => batch(&file, jobs, &out, trace, multiplicity.into()),
        Command::Genus { level, image } => {
            let genus = match (level, image) {
                (Some(n), None) => genus_x1(n)?,
                (level, Some(path)) => {
                    let g = single_record(&path)?.image()?;
                    let g = match level {
                        Some(n) => g.reduce_mod(n)?,
                        None => g,
                    };
                    genus_of_image(&g)?.genus
                }
                (None, None) => bail!("give --level N, --image FILE, or both"),
            };
            println!("{genus}");
            Ok(0)
        }
        Command::Orbits { file, modulus } => {
            let g = single_record(&file)?.image()?.reduce_mod(modulus)?;
            let table = DegreeTable::new(&g)?;
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            writeln!(w, "id\trepresentative\tsize\torder\tdegree")?;
            for (o, c) in table.table().orbits().iter().zip(table.classes()) {
                let (x, y) = (o.representative.x, o.representative.y);
                writeln!(
                    w,
                    "{}\t({x},{y})\t{}\t{}\t{}",
                    o.id, o.size, o.order, c.degree
                )?;
            }
            w.flush()?;
            Ok(0)
        }
    }
}

/// The first record of a file, which must hold exactly one.
fn single_record(path: &Path) -> anyhow::Result<ImageRecord> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut records = parse_records(&text).into_iter();
    let (_, first) = records
        .next()
        .ok_or_else(|| anyhow!("{}: no records", path.display()))?;
    if records.next().is_some() {
        bail!(
            "{}: expected one record, use `batch` for several",
            path.display()
        );
    }
    Ok(first?)
}

/// Report as JSON; without `trace` the per-entry trace is dropped.
fn report_value(report: &ScreeningReport, trace: bool) -> Value {
    let mut v = serde_json::to_value(report).expect("plain data");
    if !trace {
        let obj = v.as_object_mut().expect("struct");
        obj.remove("entries");
        obj.remove("retained");
        obj.insert(
            "eliminated".into(),
            serde_json::to_value(report.elimination_counts()).expect("plain data"),
        );
    }
    v
}

fn batch(
    file: &Path,
    jobs: usize,
    out: &Path,
    trace: bool,
    options: ScreenOptions,
) -> anyhow::Result<u8> {
    if jobs == 0 {
        bail!("--jobs must be positive");
    }
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let items = parse_records(&text)
        .into_iter()
        .map(|(line, parsed)| match parsed {
            Ok(r) => BatchItem {
                image: r.image().map_err(|e| e.to_string()),
                label: r.label,
                j: r.j,
            },
            Err(e) => BatchItem {
                label: format!("line {line}"),
                j: None,
                image: Err(e.to_string()),
            },
        });

    let reports_path = out.join("reports.jsonl");
    let mut w = BufWriter::new(
        fs::File::create(&reports_path)
            .with_context(|| format!("creating {}", reports_path.display()))?,
    );
    let mut write_error = None;
    let summary = screen_batch(items, jobs, options, |outcome| {
        if write_error.is_some() {
            return;
        }
        let value = match outcome {
            BatchOutcome::Report(r) => report_value(r, trace),
            BatchOutcome::Error { .. } => serde_json::to_value(outcome).expect("plain data"),
        };
        let line = serde_json::to_string(&value).expect("plain data");
        if let Err(e) = writeln!(w, "{line}") {
            write_error = Some(e);
        }
    })?;
    if let Some(e) = write_error {
        return Err(e).with_context(|| format!("writing {}", reports_path.display()));
    }
    w.flush()?;

    let summary_path = out.join("summary.json");
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    fs::write(&summary_path, text)
        .with_context(|| format!("writing {}", summary_path.display()))?;
    eprintln!(
        "{} records, {} with witnesses, {} errors",
        summary.records,
        summary.with_witnesses.len(),
        summary.errors.len()
    );
    Ok(if summary.with_witnesses.is_empty() {
        0
    } else {
        EXIT_WITNESSES
    })
}
