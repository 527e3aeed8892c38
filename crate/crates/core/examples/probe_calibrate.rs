use sublin_csp::corpus::desk_corpus;
use sublin_csp::exact::{
    exact_bipartiteness_ratio, exact_conductance_profile, exact_delta, exact_maxcut,
};

fn main() {
    // criterion-3 configuration: promises (phi, rho) and completeness eps
    let phi = 0.5f64;
    let rho = 0.25f64;
    let eps = 3.0e-4f64;
    for c_mc in [0.04f64, 0.06, 0.08, 0.12, 0.2, 0.5, 1.0] {
        let x = 1.0 / (16.0 * c_mc * phi * phi * rho);
        let mut sound_ok = 0;
        let mut sound_bad = Vec::new();
        let mut comp_ok = 0;
        let mut comp_bad = Vec::new();
        for (name, g) in desk_corpus() {
            let mu = g.volume() as f64;
            let mc = exact_maxcut(&g).unwrap();
            let phi_g = exact_conductance_profile(&g, 2).unwrap();
            let ell = (x * mu.ln()).ceil() as usize;
            let xi_trm = 1.0 / (3600.0 * mu.powf(1.0 + eps / (2.0 * c_mc * phi * phi * rho)));
            if phi_g >= phi && mc <= 1.0 - rho {
                let worst = (0..g.n())
                    .map(|v| exact_delta(&g, v, ell))
                    .fold(0.0f64, f64::max);
                if worst <= xi_trm / 4.0 {
                    sound_ok += 1;
                } else {
                    sound_bad.push(format!("{name}: {worst:.2e} > {:.2e}", xi_trm / 4.0));
                }
            }
            if mc >= 1.0 - eps {
                let vol_hit: u64 = (0..g.n())
                    .filter(|&v| exact_delta(&g, v, ell) >= xi_trm)
                    .map(|v| g.degree(v) as u64)
                    .sum();
                if (vol_hit as f64) >= mu / 8.0 {
                    comp_ok += 1;
                } else {
                    comp_bad.push(name.clone());
                }
            }
            let _ = exact_bipartiteness_ratio(&g);
        }
        println!(
            "c_mc={c_mc}: sound {sound_ok} ok / {} bad {:?}; comp {comp_ok} ok / {} bad {:?}",
            sound_bad.len(),
            &sound_bad[..sound_bad.len().min(3)],
            comp_bad.len(),
            comp_bad
        );
    }
}
