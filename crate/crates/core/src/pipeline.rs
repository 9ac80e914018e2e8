//! The screening algorithm end to end, for one image or a batch.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degrees::{primitive_degrees, PrimitiveEntry};
use crate::error::{Error, Result};
use crate::genus::{genus_of_image, genus_x1};
use crate::gl2::ImageGroup;
use crate::levels::{reduce_level, LevelReduction};

/// How `mu` is counted for a surviving pair `(a, d)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplicityMode {
    /// Every closed point of degree `d` on `X1(a)` above this `j`.
    #[default]
    AllPoints,
    /// Only points on `X1(a)` that are their own primitive target.
    PrimitiveOnly,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ScreenOptions {
    pub multiplicity: MultiplicityMode,
}

/// Why an entry of `D` does not reach the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Elimination {
    /// `d > genus(X1(a))`.
    RiemannRoch { genus: u64 },
    /// The image mod `a` has genus 0.
    GenusZeroImage,
}

#[derive(Debug, Clone, Serialize)]
pub struct TracedEntry {
    #[serde(flatten)]
    pub entry: PrimitiveEntry,
    pub eliminated: Option<Elimination>,
}

/// A pair `(a, d)` that passed the Riemann-Roch filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub level: u32,
    pub degree: u64,
    pub multiplicity: u64,
    pub image_genus: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotIsolated,
    Witnesses,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScreeningReport {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<String>,
    pub modulus: u32,
    pub generator_count: usize,
    pub levels: LevelReduction,
    pub multiplicity_mode: MultiplicityMode,
    /// `D`, with the fate of each entry.
    pub entries: Vec<TracedEntry>,
    /// `D'` as indices into `entries`.
    pub retained: Vec<usize>,
    pub candidates: Vec<Candidate>,
    /// `M`.
    pub witnesses: Vec<Candidate>,
    pub genus_x1: BTreeMap<u32, u64>,
    pub image_genus: BTreeMap<u32, u64>,
    pub verdict: Verdict,
}

impl ScreeningReport {
    /// `M` as `(level, degree, multiplicity)` triples.
    pub fn witness_pairs(&self) -> Vec<(u32, u64, u64)> {
        self.witnesses
            .iter()
            .map(|w| (w.level, w.degree, w.multiplicity))
            .collect()
    }
}

pub fn screen(g: &ImageGroup, label: &str, options: ScreenOptions) -> Result<ScreeningReport> {
    let levels = reduce_level(g)?;
    let m0 = levels.m0;
    let d = primitive_degrees(&levels.group)?;

    let mut genus_cache = BTreeMap::new();
    let mut entries = Vec::with_capacity(d.entries.len());
    let mut retained = Vec::new();
    for (i, e) in d.entries.into_iter().enumerate() {
        let a = e.target_level;
        let genus = match genus_cache.get(&a) {
            Some(&g) => g,
            None => {
                let g = genus_x1(a)?;
                genus_cache.insert(a, g);
                g
            }
        };
        let eliminated = if e.target_degree <= genus {
            retained.push(i);
            None
        } else {
            Some(Elimination::RiemannRoch { genus })
        };
        entries.push(TracedEntry {
            entry: e,
            eliminated,
        });
    }

    let mut pairs: Vec<(u32, u64)> = retained
        .iter()
        .map(|&i| {
            (
                entries[i].entry.target_level,
                entries[i].entry.target_degree,
            )
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();

    let mut image_genus = BTreeMap::new();
    let mut candidates = Vec::new();
    for (a, deg) in pairs {
        if m0 % a != 0 {
            return Err(Error::Invariant(format!(
                "target level {a} does not divide m0 = {m0}"
            )));
        }
        let sinks = entries
            .iter()
            .filter(|t| {
                t.entry.is_sink() && (t.entry.target_level, t.entry.target_degree) == (a, deg)
            })
            .count() as u64;
        let multiplicity = match options.multiplicity {
            MultiplicityMode::AllPoints => {
                d.table.classes_at(a).filter(|c| c.degree == deg).count() as u64
            }
            MultiplicityMode::PrimitiveOnly => sinks,
        };
        if multiplicity < sinks {
            return Err(Error::Invariant(format!(
                "multiplicity {multiplicity} of ({a}, {deg}) is below its {sinks} primitive points"
            )));
        }
        let genus = match image_genus.get(&a) {
            Some(&g) => g,
            None => {
                let g = genus_of_image(&levels.group.reduce_mod(a)?)?.genus;
                image_genus.insert(a, g);
                g
            }
        };
        candidates.push(Candidate {
            level: a,
            degree: deg,
            multiplicity,
            image_genus: genus,
        });
    }

    for &i in &retained {
        let a = entries[i].entry.target_level;
        if image_genus[&a] == 0 {
            entries[i].eliminated = Some(Elimination::GenusZeroImage);
        }
    }
    let witnesses: Vec<Candidate> = candidates
        .iter()
        .filter(|c| c.image_genus > 0 && c.multiplicity > 0)
        .cloned()
        .collect();
    let verdict = if witnesses.is_empty() {
        Verdict::NotIsolated
    } else {
        Verdict::Witnesses
    };
    Ok(ScreeningReport {
        label: label.to_string(),
        j: None,
        modulus: g.modulus(),
        generator_count: g.generators().len(),
        levels,
        multiplicity_mode: options.multiplicity,
        entries,
        retained,
        candidates,
        witnesses,
        genus_x1: genus_cache,
        image_genus,
        verdict,
    })
}

/// One input of a batch. `image` carries the record's own parse or
/// validation failure, if any.
#[derive(Debug, Clone)]
pub struct BatchItem {
    pub label: String,
    pub j: Option<String>,
    pub image: std::result::Result<ImageGroup, String>,
}

/// One output of a batch, in input order.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum BatchOutcome {
    Report(Box<ScreeningReport>),
    Error { label: String, error: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<String>,
    pub witnesses: Vec<Candidate>,
    pub eliminated: EliminationCounts,
}

/// How many entries of `D` each filter removed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EliminationCounts {
    pub riemann_roch: usize,
    pub genus_zero_image: usize,
}

impl ScreeningReport {
    pub fn elimination_counts(&self) -> EliminationCounts {
        let mut c = EliminationCounts::default();
        for e in &self.entries {
            match e.eliminated {
                Some(Elimination::RiemannRoch { .. }) => c.riemann_roch += 1,
                Some(Elimination::GenusZeroImage) => c.genus_zero_image += 1,
                None => {}
            }
        }
        c
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorRow {
    pub label: String,
    pub error: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BatchSummary {
    pub records: usize,
    pub with_witnesses: Vec<SummaryRow>,
    pub errors: Vec<ErrorRow>,
}

const CHUNK: usize = 1024;

/// Screens `items` on a pool of `jobs` threads, handing outcomes to `sink`
/// in input order. A failing record becomes an error outcome; the batch
/// itself only fails if the pool cannot be built.
pub fn screen_batch<I, F>(
    items: I,
    jobs: usize,
    options: ScreenOptions,
    mut sink: F,
) -> std::result::Result<BatchSummary, rayon::ThreadPoolBuildError>
where
    I: IntoIterator<Item = BatchItem>,
    F: FnMut(&BatchOutcome),
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?;
    let mut summary = BatchSummary::default();
    let mut iter = items.into_iter().peekable();
    while iter.peek().is_some() {
        let chunk: Vec<BatchItem> = iter.by_ref().take(CHUNK).collect();
        let outcomes: Vec<BatchOutcome> = pool.install(|| {
            chunk
                .into_par_iter()
                .map(|item| run_one(item, options))
                .collect()
        });
        for outcome in &outcomes {
            summary.records += 1;
            match outcome {
                BatchOutcome::Report(r) if !r.witnesses.is_empty() => {
                    summary.with_witnesses.push(SummaryRow {
                        label: r.label.clone(),
                        j: r.j.clone(),
                        witnesses: r.witnesses.clone(),
                        eliminated: r.elimination_counts(),
                    })
                }
                BatchOutcome::Report(_) => {}
                BatchOutcome::Error { label, error } => summary.errors.push(ErrorRow {
                    label: label.clone(),
                    error: error.clone(),
                }),
            }
            sink(outcome);
        }
    }
    Ok(summary)
}

fn run_one(item: BatchItem, options: ScreenOptions) -> BatchOutcome {
    let result = item
        .image
        .and_then(|g| screen(&g, &item.label, options).map_err(|e| e.to_string()));
    match result {
        Ok(mut report) => {
            report.j = item.j;
            BatchOutcome::Report(Box::new(report))
        }
        Err(error) => BatchOutcome::Error {
            label: item.label,
            error,
        },
    }
}
