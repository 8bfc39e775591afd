//! Benchmark harness: per-image bitrates of several variants against the
//! unmodified DWT, grouped into image subsets.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::coding::Evaluator;
use crate::container::{compress, compress_selected, CompressConfig, Compressed, ContainerError};
use crate::corpus::Label;
use crate::search::{classify, Heuristic, ImageClass, SearchConfig, SearchError, Variant};
use crate::transform::DecisionSet;
use crate::{container, Configuration, CostCounters, Mode, SampleGrid};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },
    #[error("unknown variant '{0}'")]
    UnknownVariant(String),
    #[error(transparent)]
    Container(#[from] ContainerError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One column group of the bench.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchVariant {
    Fixed(Variant),
    AllSkip,
    StepA,
    Search(Heuristic, usize),
    /// Best of FIX1, FIX2 and DWT under the bench estimator.
    Select,
}

impl fmt::Display for BenchVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchVariant::Fixed(v) => write!(f, "{v}"),
            BenchVariant::AllSkip => f.write_str("allskip"),
            BenchVariant::StepA => f.write_str("stepa"),
            BenchVariant::Search(h, n) => write!(f, "{h}{n}"),
            BenchVariant::Select => f.write_str("select"),
        }
    }
}

impl FromStr for BenchVariant {
    type Err = BenchError;

    /// `dwt`, `nodwt`, `fix1`, `fix2`, `allskip`, `stepa`, `select`, or a
    /// heuristic name followed by its iteration count (`bh2`, `rh1`,
    /// `bh-tr1`, `rdls1`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "allskip" => return Ok(BenchVariant::AllSkip),
            "stepa" => return Ok(BenchVariant::StepA),
            "select" => return Ok(BenchVariant::Select),
            _ => {}
        }
        if let Ok(v) = s.parse::<Variant>() {
            return Ok(BenchVariant::Fixed(v));
        }
        let digits = s.len() - s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (name, n) = s.split_at(s.len() - digits);
        match (name.parse::<Heuristic>(), n.parse::<usize>()) {
            (Ok(h), Ok(n)) => Ok(BenchVariant::Search(h, n)),
            _ => Err(BenchError::UnknownVariant(s)),
        }
    }
}

pub fn parse_variants(list: &str) -> Result<Vec<BenchVariant>, BenchError> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchOptions {
    pub variants: Vec<BenchVariant>,
    pub levels: usize,
    pub evaluator: Evaluator,
    /// Wall-clock columns stay zero unless set, keeping output reproducible.
    pub timing: bool,
}

impl BenchOptions {
    pub fn new(variants: Vec<BenchVariant>) -> Self {
        Self {
            variants,
            levels: 3,
            evaluator: Evaluator::ActualBitrate,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantResult {
    pub variant: BenchVariant,
    pub bpp: f64,
    /// Percent change against the DWT reference.
    pub delta: f64,
    pub side_info_bpp: f64,
    pub seconds: f64,
    pub counters: CostCounters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub path: String,
    pub label: Label,
    pub class: ImageClass,
    pub pixels: usize,
    pub reference_bpp: f64,
    pub results: Vec<VariantResult>,
}

impl BenchRecord {
    pub fn class_name(&self) -> &'static str {
        match (self.label, self.class) {
            (Label::Photo, _) => "photo",
            (Label::NonPhoto, ImageClass::NoPhotoA) => "nonphoto-a",
            (Label::NonPhoto, ImageClass::Other) => "nonphoto-b",
        }
    }
}

pub fn delta_percent(bpp: f64, reference: f64) -> f64 {
    100.0 * (bpp - reference) / reference
}

fn run_variant(
    image: &SampleGrid,
    variant: BenchVariant,
    opts: &BenchOptions,
    counters: &mut CostCounters,
) -> Result<Compressed, BenchError> {
    let t = opts.levels;
    let out = match variant {
        BenchVariant::Fixed(v) => {
            let mode = match v {
                Variant::Fix1 => Mode::Fix1,
                Variant::Fix2 => Mode::Fix2,
                Variant::Dwt => Mode::Dwt,
                Variant::NoDwt => Mode::NoDwt,
            };
            compress(image, &CompressConfig::fixed(mode, t), counters)?
        }
        BenchVariant::AllSkip => {
            let configuration = Configuration::Ssdwt(DecisionSet::skip_all(t));
            let bytes = container::encode(image, &configuration, counters)?;
            Compressed {
                bytes,
                configuration,
                pixels: image.len(),
                search: None,
            }
        }
        BenchVariant::StepA => {
            let search = SearchConfig::new(Heuristic::Bh, 0, opts.evaluator, t);
            compress(
                image,
                &CompressConfig::searched(Mode::Ssdwt, search),
                counters,
            )?
        }
        BenchVariant::Search(h, n) => {
            let mode = if h == Heuristic::HSsRdls {
                Mode::RdlsSsdwt
            } else {
                Mode::Ssdwt
            };
            let search = SearchConfig::new(h, n, opts.evaluator, t);
            compress(image, &CompressConfig::searched(mode, search), counters)?
        }
        BenchVariant::Select => {
            let candidates = [Variant::Fix1, Variant::Fix2, Variant::Dwt];
            compress_selected(image, t, &candidates, opts.evaluator, counters)?.1
        }
    };
    Ok(out)
}

/// Runs every variant on one image.
pub fn bench_image(
    path: &str,
    label: Label,
    image: &SampleGrid,
    opts: &BenchOptions,
) -> Result<BenchRecord, BenchError> {
    let class = classify(image, opts.levels, opts.evaluator)?;
    let reference = run_variant(
        image,
        BenchVariant::Fixed(Variant::Dwt),
        opts,
        &mut CostCounters::default(),
    )?;
    let reference_bpp = reference.bpp();
    let mut results = Vec::with_capacity(opts.variants.len());
    for &variant in &opts.variants {
        let mut counters = CostCounters::default();
        let (out, seconds) = if opts.timing {
            run_variant(image, variant, opts, &mut CostCounters::default())?;
            let start = Instant::now();
            let out = run_variant(image, variant, opts, &mut counters)?;
            (out, start.elapsed().as_secs_f64())
        } else {
            (run_variant(image, variant, opts, &mut counters)?, 0.0)
        };
        let bpp = out.bpp();
        results.push(VariantResult {
            variant,
            bpp,
            delta: delta_percent(bpp, reference_bpp),
            side_info_bpp: out.side_info_bpp(),
            seconds,
            counters,
        });
    }
    Ok(BenchRecord {
        path: path.to_string(),
        label,
        class,
        pixels: image.len(),
        reference_bpp,
        results,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: Label,
}

/// Parses `path,label` lines. Blank lines and `#` comments are skipped;
/// relative paths resolve against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, BenchError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        if row.len() == 1 && row[0].is_empty() {
            continue;
        }
        if row.len() != 2 {
            return Err(BenchError::Manifest {
                line,
                reason: format!("expected 'path,label', got {} fields", row.len()),
            });
        }
        let label = row[1]
            .parse()
            .map_err(|reason| BenchError::Manifest { line, reason })?;
        out.push(ManifestEntry {
            path: base.join(&row[0]),
            label,
        });
    }
    Ok(out)
}

pub fn write_csv<W: Write>(
    records: &[BenchRecord],
    variants: &[BenchVariant],
    out: W,
) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["path", "label", "class", "p", "ref_r"]
        .map(String::from)
        .to_vec();
    for v in variants {
        for field in [
            "r",
            "dr",
            "side",
            "time",
            "lifting_steps",
            "encoded_symbols",
        ] {
            header.push(format!("{v}_{field}"));
        }
    }
    w.write_record(&header)?;
    for rec in records {
        let mut row = vec![
            rec.path.clone(),
            rec.label.to_string(),
            rec.class_name().to_string(),
            rec.pixels.to_string(),
            rec.reference_bpp.to_string(),
        ];
        for r in &rec.results {
            row.push(r.bpp.to_string());
            row.push(r.delta.to_string());
            row.push(r.side_info_bpp.to_string());
            row.push(r.seconds.to_string());
            row.push(r.counters.lifting_steps.to_string());
            row.push(r.counters.encoded_symbols.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-subset averages.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSummary {
    pub name: &'static str,
    pub images: usize,
    pub mean_reference_bpp: f64,
    /// Per variant, in option order.
    pub mean_bpp: Vec<f64>,
    pub mean_delta: Vec<f64>,
}

pub const SUBSETS: [&str; 5] = ["photo", "nonphoto", "nonphoto-a", "nonphoto-b", "all"];

fn in_subset(rec: &BenchRecord, subset: &str) -> bool {
    match subset {
        "photo" => rec.label == Label::Photo,
        "nonphoto" => rec.label == Label::NonPhoto,
        "all" => true,
        other => rec.class_name() == other,
    }
}

pub fn summarize(records: &[BenchRecord], variants: usize) -> Vec<SubsetSummary> {
    SUBSETS
        .iter()
        .map(|&name| {
            let members: Vec<&BenchRecord> =
                records.iter().filter(|r| in_subset(r, name)).collect();
            let n = members.len();
            let mean = |f: &dyn Fn(&BenchRecord) -> f64| {
                if n == 0 {
                    f64::NAN
                } else {
                    members.iter().map(|r| f(r)).sum::<f64>() / n as f64
                }
            };
            SubsetSummary {
                name,
                images: n,
                mean_reference_bpp: mean(&|r| r.reference_bpp),
                mean_bpp: (0..variants).map(|i| mean(&|r| r.results[i].bpp)).collect(),
                mean_delta: (0..variants)
                    .map(|i| mean(&|r| r.results[i].delta))
                    .collect(),
            }
        })
        .collect()
}

/// Plain-text table of [`summarize`] output.
pub fn format_summary(summary: &[SubsetSummary], variants: &[BenchVariant]) -> String {
    let mut s = format!("{:<12}{:>7}{:>10}", "subset", "images", "ref_r");
    for v in variants {
        s.push_str(&format!("{:>12}{:>10}", format!("{v}_r"), "dr%"));
    }
    s.push('\n');
    for row in summary {
        s.push_str(&format!(
            "{:<12}{:>7}{:>10.4}",
            row.name, row.images, row.mean_reference_bpp
        ));
        for (b, d) in row.mean_bpp.iter().zip(&row.mean_delta) {
            s.push_str(&format!("{b:>12.4}{d:>10.3}"));
        }
        s.push('\n');
    }
    s
}
