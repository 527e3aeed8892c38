use std::time::Instant;
use sublin_csp::gen::gen_random_regular;
use sublin_csp::oracle::{GraphOracle, QueryGraph};
use sublin_csp::rng::stream;
use sublin_csp::walks::lazy_walk;

fn main() {
    let g = gen_random_regular(2000, 8, 2, None, 4096).unwrap().graph;
    let o = GraphOracle::new(&g);
    let mut rng = stream(1, "bench");
    let t = Instant::now();
    let walks = 200_000usize;
    let len = 50usize;
    let mut sink = 0usize;
    for _ in 0..walks {
        sink ^= lazy_walk(&o, 7, len, &mut rng).unwrap().endpoint;
    }
    let dt = t.elapsed();
    let steps = walks * len;
    println!(
        "{} steps in {:?} -> {:.1} M steps/s, {:.1} M queries/s (sink {sink}, q={})",
        steps,
        dt,
        steps as f64 / dt.as_secs_f64() / 1e6,
        o.query_count() as f64 / dt.as_secs_f64() / 1e6,
        o.query_count()
    );
}
