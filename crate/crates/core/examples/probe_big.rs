use std::time::Instant;
use sublin_csp::exact::matrix::{normalized_laplacian, tridiagonal_eigen};
use sublin_csp::gen::{gen_planted_maxcut, gen_random_regular};

fn main() {
    let t = Instant::now();
    let p = gen_planted_maxcut(2000, 8, 0.01, 1, Some(0.05), 4096).unwrap();
    println!(
        "planted n=2000: {:?}, cert lambda2/2 = {:.4}, violations = {}",
        t.elapsed(),
        p.certificate.unwrap().phi_lower_bound,
        p.violations
    );
    let t = Instant::now();
    let s = gen_random_regular(2000, 8, 2, Some(0.05), 4096).unwrap();
    println!(
        "regular n=2000: {:?}, cert = {:.4}",
        t.elapsed(),
        s.certificate.unwrap().phi_lower_bound
    );
    let t = Instant::now();
    let l = normalized_laplacian(&s.graph, 4096).unwrap();
    let prof = tridiagonal_eigen(l, false).unwrap().profile;
    println!(
        "eigen n=2000: {:?}, l2={:.4} lmax={:.4} trace_err={:.2e}",
        t.elapsed(),
        prof.eigenvalues[1],
        prof.lambda_max(),
        (prof.eigenvalues.iter().sum::<f64>() - 2000.0).abs()
    );
}
