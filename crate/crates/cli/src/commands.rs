use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use ssdwt::bench::{
    bench_image, format_summary, parse_manifest, summarize, write_csv, BenchOptions, BenchVariant,
};
use ssdwt::coding::{encode_samples, h0_estimate, Evaluator};
use ssdwt::search::{predicted_cost, run_search, CostHeuristic, Heuristic, SearchConfig};
use ssdwt::transform::nominal_regions;
use ssdwt::{
    compress as compress_image, corpus, decompress as decompress_bytes, read_pgm, write_pgm,
};
use ssdwt::{CompressConfig, Configuration, CostCounters, Mode, SampleGrid};

use crate::{BenchArgs, CompressArgs, CorpusArgs, CostArgs, DecompressArgs};

fn load_pgm(path: &Path) -> Result<SampleGrid> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    read_pgm(&bytes).with_context(|| format!("parsing {}", path.display()))
}

pub fn compress(a: CompressArgs) -> Result<bool> {
    let image = load_pgm(&a.input)?;
    if a.filters.is_some() && a.mode != Mode::RdlsSsdwt {
        bail!("--filters only applies to --mode rdls-ss");
    }
    let search = |h: Heuristic| SearchConfig::new(h, a.search.iters, a.search.estimator, a.levels);
    let config = match a.mode {
        Mode::Ssdwt => CompressConfig::searched(Mode::Ssdwt, search(a.search.heuristic)),
        Mode::RdlsSsdwt => {
            let mut s = search(Heuristic::HSsRdls);
            if let Some(f) = a.filters {
                s.filters = f;
            }
            CompressConfig::searched(Mode::RdlsSsdwt, s)
        }
        m => CompressConfig::fixed(m, a.levels),
    };
    let mut counters = CostCounters::default();
    let out = compress_image(&image, &config, &mut counters)?;
    fs::write(&a.output, &out.bytes).with_context(|| format!("writing {}", a.output.display()))?;
    println!(
        "{}: {} bytes, r = {:.4} bpp, side info = {:.6} bpp",
        a.output.display(),
        out.bytes.len(),
        out.bpp(),
        out.side_info_bpp()
    );
    if a.stats {
        println!(
            "mode {} levels {}",
            out.configuration.mode(),
            out.configuration.levels()
        );
        if let Some(s) = &out.search {
            println!(
                "search: start {:?}, {} trials, {} accepted, estimate {:.4} bpp",
                s.start,
                s.trials.len(),
                s.accepted(),
                s.bpp
            );
        }
        for (i, lvl) in out.configuration.decisions().as_slice().iter().enumerate() {
            let bits: String = lvl
                .to_bits()
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            println!("level {} skip bits {bits}", i + 1);
        }
        println!(
            "lifting_steps {} encoded_symbols {} entropy_evals {}",
            counters.lifting_steps, counters.encoded_symbols, counters.entropy_evals
        );
    }
    Ok(true)
}

pub fn decompress(a: DecompressArgs) -> Result<bool> {
    if a.output.is_none() && a.verify.is_none() {
        bail!("nothing to do: give --out and/or --verify");
    }
    let bytes = fs::read(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let image =
        decompress_bytes(&bytes).with_context(|| format!("decoding {}", a.input.display()))?;
    if let Some(out) = &a.output {
        fs::write(out, write_pgm(&image)?).with_context(|| format!("writing {}", out.display()))?;
    }
    if let Some(orig) = &a.verify {
        let original = load_pgm(orig)?;
        if (original.width(), original.height()) != (image.width(), image.height()) {
            eprintln!(
                "verify: size {}x{} differs from original {}x{}",
                image.width(),
                image.height(),
                original.width(),
                original.height()
            );
            return Ok(false);
        }
        if let Some(i) = (0..image.len()).find(|&i| image.samples()[i] != original.samples()[i]) {
            eprintln!(
                "verify: first difference at ({}, {})",
                i % image.width(),
                i / image.width()
            );
            return Ok(false);
        }
        println!("verify: identical to {}", orig.display());
    }
    Ok(true)
}

/// Gives bare heuristic names the default pass count.
fn variants_with_default(list: &str, iters: usize) -> Result<Vec<BenchVariant>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let s = if s.parse::<Heuristic>().is_ok() {
                format!("{s}{iters}")
            } else {
                s.to_string()
            };
            Ok(s.parse::<BenchVariant>()?)
        })
        .collect()
}

pub fn bench(a: BenchArgs) -> Result<bool> {
    let text = fs::read_to_string(&a.manifest)
        .with_context(|| format!("reading {}", a.manifest.display()))?;
    let base = a.manifest.parent().unwrap_or(Path::new("."));
    let entries = parse_manifest(&text, base)?;
    let variants = variants_with_default(&a.variants, a.iters)?;
    let opts = BenchOptions {
        variants: variants.clone(),
        levels: a.levels,
        evaluator: a.estimator,
        timing: a.timing,
    };
    let mut ok = true;
    let mut records = Vec::new();
    for e in &entries {
        let image = match load_pgm(&e.path) {
            Ok(g) => g,
            Err(err) => {
                eprintln!("skipped {}: {err:#}", e.path.display());
                ok = false;
                continue;
            }
        };
        let shown = e
            .path
            .strip_prefix(base)
            .unwrap_or(&e.path)
            .display()
            .to_string();
        records.push(bench_image(&shown, e.label, &image, &opts)?);
    }
    let summary = format_summary(&summarize(&records, variants.len()), &variants);
    match &a.output {
        Some(path) => {
            let file =
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&records, &variants, file)?;
            print!("{summary}");
        }
        None => {
            write_csv(&records, &variants, io::stdout().lock())?;
            eprint!("{summary}");
        }
    }
    Ok(ok)
}

struct UnitTimes {
    td: f64,
    te: f64,
    tr: f64,
    th0: f64,
}

fn best_of<F: FnMut()>(runs: usize, mut f: F) -> f64 {
    (0..runs)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

fn calibrate(image: &SampleGrid, t: usize) -> Result<UnitTimes> {
    let dwt = Configuration::Dwt(t);
    let mut transformed = image.clone();
    dwt.forward(&mut transformed, &mut CostCounters::default())?;
    let regions = nominal_regions(image.width(), image.height(), t);
    let td = best_of(5, || {
        let mut g = image.clone();
        dwt.forward(&mut g, &mut CostCounters::default()).unwrap();
    });
    let te = best_of(5, || {
        for r in &regions {
            encode_samples(&transformed.extract(r.x, r.y, r.w, r.h), r.w.max(1));
        }
    });
    let th0 = best_of(5, || {
        h0_estimate(&transformed, t, &mut CostCounters::default());
    });
    let total = best_of(5, || {
        compress_image(
            image,
            &CompressConfig::fixed(Mode::Dwt, t),
            &mut CostCounters::default(),
        )
        .unwrap();
    });
    Ok(UnitTimes {
        td,
        te,
        tr: (total - td - te).max(0.0),
        th0,
    })
}

pub fn cost(a: CostArgs) -> Result<bool> {
    if let Some(t) = a.levels {
        if !(1..=12).contains(&t) {
            bail!("--levels must be in 1..=12");
        }
    }
    let h = match a.heuristic {
        Heuristic::Bh => CostHeuristic::Bh,
        _ => CostHeuristic::Rh,
    };
    let c = predicted_cost(h, a.iters, a.levels);
    let (te, td) = (ratio(c.te), ratio(c.td));
    let levels = a.levels.map_or("unlimited".to_string(), |t| t.to_string());
    match a.estimator {
        Evaluator::ActualBitrate => println!(
            "{}({}) levels {levels}: <= {te:.2}*T_E + {td:.2}*T_D + T_R",
            a.heuristic, a.iters
        ),
        Evaluator::EntropyH0 => println!(
            "{}({}) levels {levels}: <= {te:.2}*T_H0 + 1.00*T_E + {td:.2}*T_D + T_R",
            a.heuristic, a.iters
        ),
    }
    println!(
        "per pixel: <= {:.4} coded symbols, <= {:.4} lifting steps",
        ratio(c.symbols_per_pixel),
        ratio(c.lifting_per_pixel)
    );
    let t = a.levels.unwrap_or(3);
    if let Some(path) = &a.calibrate {
        let image = load_pgm(path)?;
        let u = calibrate(&image, t)?;
        let search = match a.estimator {
            Evaluator::ActualBitrate => te * u.te,
            Evaluator::EntropyH0 => te * u.th0 + u.te,
        };
        let predicted = search + td * u.td + u.tr;
        println!(
            "unit times: T_D {:.3} ms, T_E {:.3} ms, T_R {:.3} ms, T_H0 {:.3} ms",
            1e3 * u.td,
            1e3 * u.te,
            1e3 * u.tr,
            1e3 * u.th0
        );
        println!(
            "predicted time relative to DWT compression: {:.2}",
            predicted / (u.td + u.te + u.tr)
        );
    }
    if let Some(path) = &a.run {
        let image = load_pgm(path)?;
        let p = image.len() as f64;
        let config = SearchConfig::new(a.heuristic, a.iters, a.estimator, t);
        let mut counters = CostCounters::default();
        run_search(&image, &config, &mut counters)?;
        let bound = predicted_cost(h, a.iters, Some(t));
        let symbols = match a.estimator {
            Evaluator::ActualBitrate => counters.encoded_symbols,
            Evaluator::EntropyH0 => counters.entropy_evals,
        } as f64;
        let sym_bound = ratio(bound.symbols_per_pixel) * p;
        let lift_bound = ratio(bound.lifting_per_pixel) * p;
        println!(
            "measured at t={t}: symbols {symbols} of {sym_bound:.0} ({:.3}), lifting steps {} of {lift_bound:.0} ({:.3})",
            symbols / sym_bound,
            counters.lifting_steps,
            counters.lifting_steps as f64 / lift_bound
        );
    }
    Ok(true)
}

fn ratio(q: num_rational::Ratio<i64>) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub fn corpus(a: CorpusArgs) -> Result<bool> {
    if a.width == 0 || a.height == 0 {
        bail!("image size must be positive");
    }
    fs::create_dir_all(&a.output).with_context(|| format!("creating {}", a.output.display()))?;
    let images = corpus::generate(a.seed, a.per_kind, a.width, a.height);
    let mut manifest = Vec::new();
    for img in &images {
        let file = format!("{}.pgm", img.name);
        fs::write(a.output.join(&file), write_pgm(&img.image)?)?;
        writeln!(manifest, "{file},{}", img.kind.label())?;
    }
    let path = a.output.join("manifest.txt");
    fs::write(&path, manifest)?;
    println!("wrote {} images and {}", images.len(), path.display());
    Ok(true)
}
