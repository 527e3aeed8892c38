use std::time::Instant;
use sublin_csp::gen::{gen_hardness_3col, Cnf3, Lit};
use sublin_csp::exact::exact_3colorable;

fn main() {
    // time one layer-expansion style scan
    let g = sublin_csp::gen::gen_random_regular(24, 3, 1, None, 64).unwrap().graph;
    let t = Instant::now();
    let mut nb = vec![0u32; 24];
    for v in 0..24 {
        for &w in g.neighbors(v) {
            nb[v] |= 1 << w;
        }
    }
    let mut ok = true;
    for mask in 1u32..(1 << 24) {
        if mask.count_ones() as usize > 12 { continue; }
        let mut gamma = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            gamma |= nb[v];
        }
        if gamma.count_ones() < mask.count_ones() { ok = false; break; }
    }
    println!("scan: {:?} ok={ok}", t.elapsed());

    let mut clauses = Vec::new();
    for s in 0..8u32 {
        clauses.push([
            Lit::new(0, s & 1 != 0),
            Lit::new(1, s & 2 != 0),
            Lit::new(2, s & 4 != 0),
        ]);
    }
    let f = Cnf3::new(3, clauses).unwrap();
    let t0 = Instant::now();
    let h = gen_hardness_3col(&f, 3, 23, 4096).unwrap();
    println!("build: {:?}  n={} m={}", t0.elapsed(), h.graph.n(), h.graph.m());
    let t1 = Instant::now();
    let col = exact_3colorable(&h.graph).unwrap();
    println!("color: {:?} -> {col}", t1.elapsed());
}
