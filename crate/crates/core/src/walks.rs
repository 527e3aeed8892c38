//! Lazy random walks with hop-length parity tracking, and the
//! parity-conditioned endpoint samplers used by the Max Cut tester.
//!
//! A lazy walk stays put with probability 1/2 (parity unchanged) or moves to
//! a uniform neighbor (parity flips; one degree query plus one neighbor
//! query). Since each parity class carries total mass exactly 1/2,
//! rejection sampling gives the conditioned laws with expected two attempts.

use crate::error::Error;
use crate::oracle::QueryGraph;
use crate::Result;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const PARITY_ATTEMPT_CAP: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug)]
pub struct WalkOutcome {
    pub endpoint: usize,
    pub hop_parity: Parity,
    pub steps_taken: usize,
}

/// One lazy walk of length `len` from `v`.
pub fn lazy_walk(
    oracle: &impl QueryGraph,
    v: usize,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> Result<WalkOutcome> {
    if v >= oracle.vertex_count() {
        return Err(Error::InvalidVertex {
            vertex: v,
            n: oracle.vertex_count(),
        });
    }
    let mut at = v;
    let mut hops = 0usize;
    for _ in 0..len {
        if rng.gen_bool(0.5) {
            continue;
        }
        let d = oracle.degree(at)?;
        at = oracle.neighbor(at, rng.gen_range(0..d))?;
        hops += 1;
    }
    Ok(WalkOutcome {
        endpoint: at,
        hop_parity: if hops % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        },
        steps_taken: len,
    })
}

/// Endpoint of a lazy walk conditioned on its hop-length parity, by
/// rejection. The conditional law is exactly 2 p_{v,e}^len (resp. odd).
pub fn sample_parity_conditioned(
    oracle: &impl QueryGraph,
    v: usize,
    len: usize,
    parity: Parity,
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    if len == 0 {
        return Err(Error::param("parity conditioning needs len >= 1"));
    }
    for _ in 0..PARITY_ATTEMPT_CAP {
        let out = lazy_walk(oracle, v, len, rng)?;
        if out.hop_parity == parity {
            return Ok(out.endpoint);
        }
    }
    Err(Error::Internal(format!(
        "parity rejection exceeded {PARITY_ATTEMPT_CAP} attempts; rng is broken"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::exact::exact_walk_distributions;
    use crate::oracle::GraphOracle;
    use crate::rng::stream;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    /// Chi-square goodness-of-fit p-value of observed counts against exact
    /// probabilities (bins with tiny mass folded together).
    fn chi_square_p(counts: &[u64], probs: &[f64], draws: u64) -> f64 {
        let mut stat = 0.0;
        let mut dof = 0i64;
        let mut rest_obs = 0.0;
        let mut rest_exp = 0.0;
        for (c, p) in counts.iter().zip(probs) {
            let expected = p * draws as f64;
            if expected >= 5.0 {
                stat += (*c as f64 - expected).powi(2) / expected;
                dof += 1;
            } else {
                rest_obs += *c as f64;
                rest_exp += expected;
            }
        }
        if rest_exp > 5.0 {
            stat += (rest_obs - rest_exp).powi(2) / rest_exp;
            dof += 1;
        }
        dof -= 1;
        if dof <= 0 {
            return 1.0;
        }
        1.0 - ChiSquared::new(dof as f64).unwrap().cdf(stat)
    }

    #[test]
    fn zero_length_walk() {
        let g = corpus::cycle(4);
        let o = GraphOracle::new(&g);
        let mut rng = stream(1, "w");
        let out = lazy_walk(&o, 2, 0, &mut rng).unwrap();
        assert_eq!(out.endpoint, 2);
        assert_eq!(out.hop_parity, Parity::Even);
        assert_eq!(o.query_count(), 0);
    }

    #[test]
    fn k2_single_step_parity() {
        let g = corpus::complete(2);
        let o = GraphOracle::new(&g);
        let mut rng = stream(2, "w");
        for _ in 0..200 {
            let out = lazy_walk(&o, 0, 1, &mut rng).unwrap();
            // parity is even iff the walk stayed home
            assert_eq!(out.hop_parity == Parity::Even, out.endpoint == 0);
        }
        // conditioned samplers are deterministic on K_2 at len 1
        for _ in 0..20 {
            assert_eq!(
                sample_parity_conditioned(&o, 0, 1, Parity::Even, &mut rng).unwrap(),
                0
            );
            assert_eq!(
                sample_parity_conditioned(&o, 0, 1, Parity::Odd, &mut rng).unwrap(),
                1
            );
        }
    }

    #[test]
    fn query_cost_at_most_two_per_step() {
        let g = corpus::petersen();
        let o = GraphOracle::new(&g);
        let mut rng = stream(3, "w");
        let len = 50;
        let walks = 100;
        for _ in 0..walks {
            lazy_walk(&o, 0, len, &mut rng).unwrap();
        }
        assert!(o.query_count() <= (2 * len * walks) as u64);
    }

    #[test]
    fn endpoint_law_matches_exact_dp() {
        let g = corpus::cycle(4);
        let o = GraphOracle::new(&g);
        let mut rng = stream(4, "w");
        let len = 3;
        let draws = 100_000u64;
        let mut counts = vec![0u64; 4];
        for _ in 0..draws {
            counts[lazy_walk(&o, 0, len, &mut rng).unwrap().endpoint] += 1;
        }
        let (e, od) = exact_walk_distributions(&g, 0, len);
        let probs: Vec<f64> = e.iter().zip(&od).map(|(a, b)| a + b).collect();
        let p = chi_square_p(&counts, &probs, draws);
        assert!(p > 0.01, "chi-square p = {p}");
    }

    #[test]
    fn conditioned_law_matches_doubled_parity_distribution() {
        let g = corpus::petersen();
        let o = GraphOracle::new(&g);
        let mut rng = stream(5, "w");
        let len = 4;
        let draws = 60_000u64;
        let (e, od) = exact_walk_distributions(&g, 0, len);
        for (parity, dist) in [(Parity::Even, &e), (Parity::Odd, &od)] {
            let mut counts = vec![0u64; g.n()];
            for _ in 0..draws {
                counts[sample_parity_conditioned(&o, 0, len, parity, &mut rng).unwrap()] += 1;
            }
            let probs: Vec<f64> = dist.iter().map(|x| 2.0 * x).collect();
            let p = chi_square_p(&counts, &probs, draws);
            assert!(p > 0.01, "{parity:?}: chi-square p = {p}");
        }
    }

    #[test]
    fn mixture_of_conditioned_laws_is_unconditioned() {
        // (1/2) D_e + (1/2) D_o = 1_v W^len at the exact DP level
        let g = corpus::gnp_connected(12, 0.4, 6);
        for len in [1usize, 2, 5, 9] {
            let (e, od) = exact_walk_distributions(&g, 3, len);
            let se: f64 = e.iter().sum();
            let so: f64 = od.iter().sum();
            assert!((se - 0.5).abs() < 1e-12 && (so - 0.5).abs() < 1e-12);
        }
    }
}
