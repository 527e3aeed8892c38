//! Exact lazy-walk distributions with hop-parity tracking, and the signed
//! walk statistic Delta_t(v).
//!
//! The lazy walk W = (I + D^{-1}A)/2 splits by hop-length parity into
//! p_{v,e}^t and p_{v,o}^t; the signed operator M = (I - D^{-1}A)/2 gives
//! q_v^t = 1_v M^t = p_{v,e}^t - p_{v,o}^t, and
//! Delta_t(v) = || q_v^t D^{-1/2} ||_2^2.

use crate::graph::Graph;

/// One parity-tracking step: mass stays with weight 1/2 (parity unchanged)
/// or moves to a uniform neighbor with weight 1/2 (parity flips).
fn parity_step(g: &Graph, even: &[f64], odd: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = g.n();
    let mut ne = vec![0.0; n];
    let mut no = vec![0.0; n];
    for v in 0..n {
        ne[v] += 0.5 * even[v];
        no[v] += 0.5 * odd[v];
        let push_e = 0.5 * even[v] / g.degree(v) as f64;
        let push_o = 0.5 * odd[v] / g.degree(v) as f64;
        for &w in g.neighbors(v) {
            let w = w as usize;
            no[w] += push_e;
            ne[w] += push_o;
        }
    }
    (ne, no)
}

/// Exact parity-split endpoint distributions (p_{v,e}^t, p_{v,o}^t) of a
/// t-step lazy walk from v.
pub fn exact_walk_distributions(g: &Graph, v: usize, t: usize) -> (Vec<f64>, Vec<f64>) {
    let n = g.n();
    let mut even = vec![0.0; n];
    let mut odd = vec![0.0; n];
    even[v] = 1.0;
    for _ in 0..t {
        let (e, o) = parity_step(g, &even, &odd);
        even = e;
        odd = o;
    }
    (even, odd)
}

/// q_v^t = 1_v M^t with M = (I - D^{-1}A)/2, by repeated vector-matrix
/// products.
pub fn signed_walk_vector(g: &Graph, v: usize, t: usize) -> Vec<f64> {
    let n = g.n();
    let mut q = vec![0.0; n];
    q[v] = 1.0;
    for _ in 0..t {
        let mut next = vec![0.0; n];
        for u in 0..n {
            next[u] += 0.5 * q[u];
            let push = 0.5 * q[u] / g.degree(u) as f64;
            for &w in g.neighbors(u) {
                next[w as usize] -= push;
            }
        }
        q = next;
    }
    q
}

/// Delta_t(v) = || 1_v M^t D^{-1/2} ||_2^2.
pub fn exact_delta(g: &Graph, v: usize, t: usize) -> f64 {
    let q = signed_walk_vector(g, v, t);
    degree_weighted_norm_sq(g, &q)
}

/// || x D^{-1/2} ||_2^2 = sum_u x(u)^2 / d(u).
pub fn degree_weighted_norm_sq(g: &Graph, x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(u, &xu)| xu * xu / g.degree(u) as f64)
        .sum()
}

/// || p_v^t D^{-1/2} ||_2^2 for the unconditioned lazy walk law.
pub fn walk_norm_sq(g: &Graph, v: usize, t: usize) -> f64 {
    let (e, o) = exact_walk_distributions(g, v, t);
    let p: Vec<f64> = e.iter().zip(&o).map(|(a, b)| a + b).collect();
    degree_weighted_norm_sq(g, &p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn zero_steps_is_point_mass_with_even_parity() {
        let g = corpus::petersen();
        let (e, o) = exact_walk_distributions(&g, 3, 0);
        assert_eq!(e[3], 1.0);
        assert!(o.iter().all(|&x| x == 0.0));
        assert!((exact_delta(&g, 3, 0) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn k2_single_step() {
        let g = corpus::complete(2);
        let (e, o) = exact_walk_distributions(&g, 0, 1);
        assert_eq!((e[0], e[1]), (0.5, 0.0));
        assert_eq!((o[0], o[1]), (0.0, 0.5));
        // Delta stays 1/2 on K_2 for every t >= 1
        for t in 1..10 {
            assert!((exact_delta(&g, 0, t) - 0.5).abs() < 1e-13, "t={t}");
        }
    }

    #[test]
    fn parity_masses_are_half_each() {
        for (name, g) in [
            ("petersen", corpus::petersen()),
            ("wheel6", corpus::wheel(6)),
            ("gnp", corpus::gnp_connected(9, 0.5, 3)),
        ] {
            for t in 1..=20 {
                let (e, o) = exact_walk_distributions(&g, 1, t);
                let se: f64 = e.iter().sum();
                let so: f64 = o.iter().sum();
                assert!((se - 0.5).abs() < 1e-12, "{name} t={t} even mass {se}");
                assert!((so - 0.5).abs() < 1e-12, "{name} t={t} odd mass {so}");
            }
        }
    }

    #[test]
    fn signed_vector_equals_parity_difference() {
        let g = corpus::gnp_connected(11, 0.45, 8);
        for v in [0usize, 5] {
            for t in [0usize, 1, 3, 9, 25] {
                let q = signed_walk_vector(&g, v, t);
                let (e, o) = exact_walk_distributions(&g, v, t);
                for u in 0..g.n() {
                    assert!(
                        (q[u] - (e[u] - o[u])).abs() < 1e-12,
                        "v={v} t={t} u={u}"
                    );
                }
            }
        }
    }
}
