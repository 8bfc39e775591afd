use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;
use ssdwt::coding::Evaluator;
use ssdwt::corpus::Kind;
use ssdwt::search::{run_search, Heuristic, SearchConfig};
use ssdwt::{compress, decompress, CompressConfig, CostCounters, Mode};

fn pools(c: &mut Criterion) {
    let image = Kind::PhotoLike.generate(256, 256, 8, 7);
    let bytes = compress(
        &image,
        &CompressConfig::fixed(Mode::Dwt, 3),
        &mut CostCounters::default(),
    )
    .unwrap()
    .bytes;
    let search = SearchConfig::new(Heuristic::Rh, 1, Evaluator::ActualBitrate, 3);
    let mut threads = vec![1, rayon::current_num_threads()];
    threads.dedup();
    let mut group = c.benchmark_group(if ssdwt::is_parallel() {
        "parallel"
    } else {
        "sequential"
    });
    group.sample_size(10);
    for n in threads {
        let pool = ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        group.bench_with_input(BenchmarkId::new("compress_dwt", n), &n, |b, _| {
            b.iter(|| {
                pool.install(|| {
                    compress(
                        &image,
                        &CompressConfig::fixed(Mode::Dwt, 3),
                        &mut CostCounters::default(),
                    )
                })
                .unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("decompress", n), &n, |b, _| {
            b.iter(|| pool.install(|| decompress(&bytes)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("rh1_search", n), &n, |b, _| {
            b.iter(|| {
                pool.install(|| run_search(&image, &search, &mut CostCounters::default()))
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, pools);
criterion_main!(benches);
