//! Unique Label Cover stack: the f(r) threshold schedule (log-space, since
//! the exponents 4^{2-r} underflow doubles), a clustering-oracle interface
//! with an exact spectral reference implementation, the outer-conductance
//! estimator, and the end-to-end driver.
//!
//! The driver estimates the base volume by degree sampling, then for each
//! candidate cluster count r asks the clustering oracle for memberships of
//! sampled extension vertices, checks whether some part has volume close to
//! mu_{G'}/q, and accepts iff that part also shows small outer conductance.

use crate::error::Error;
use crate::exact::brute::set_conductance;
use crate::exact::matrix::{eigen_with_vectors, normalized_laplacian_unchecked};
use crate::extend::UlcExtended;
use crate::oracle::{materialize, QueryGraph, UlcOracle};
use crate::rng::{stream, StreamTree};
use crate::verdict::{Decision, Verdict};
use crate::Result;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// log-space reals and the f(r) schedule
// ---------------------------------------------------------------------------

/// Nonnegative real carried as its natural log (0 encoded as -inf).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogVal {
    pub ln: f64,
}

impl LogVal {
    pub fn from_value(x: f64) -> Self {
        debug_assert!(x >= 0.0);
        LogVal { ln: x.ln() }
    }

    pub fn from_ln(ln: f64) -> Self {
        LogVal { ln }
    }

    /// Back to f64; may underflow to 0 or overflow to inf.
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    pub fn mul(&self, other: LogVal) -> LogVal {
        LogVal {
            ln: self.ln + other.ln,
        }
    }

    pub fn div(&self, other: LogVal) -> LogVal {
        LogVal {
            ln: self.ln - other.ln,
        }
    }

    pub fn powf(&self, e: f64) -> LogVal {
        LogVal { ln: self.ln * e }
    }
}

/// f(r) = (eps / 2q^20)^{4^{2-r}} * q^{100-40r} * phi^{(r-2)/(q-1)},
/// evaluated in log space. Defined for 2 <= r <= q+1.
pub fn f_schedule(r: u32, q: u32, eps: f64, phi: f64) -> Result<LogVal> {
    if q < 2 {
        return Err(Error::param("f schedule needs q >= 2"));
    }
    if r < 2 || r > q + 1 {
        return Err(Error::param(format!("r = {r} outside [2, {}]", q + 1)));
    }
    if !(eps > 0.0 && phi > 0.0) {
        return Err(Error::param("eps and phi must be positive"));
    }
    let qf = q as f64;
    let base_ln = eps.ln() - (2.0f64).ln() - 20.0 * qf.ln();
    let exp4 = 4.0f64.powi(2 - r as i32);
    let ln = exp4 * base_ln + (100.0 - 40.0 * r as f64) * qf.ln()
        + ((r as f64 - 2.0) / (qf - 1.0)) * phi.ln();
    Ok(LogVal::from_ln(ln))
}

/// alpha(r) = f(r+1) / (30 r).
pub fn alpha_of(r: u32, q: u32, eps: f64, phi: f64) -> Result<LogVal> {
    Ok(f_schedule(r + 1, q, eps, phi)?.div(LogVal::from_value(30.0 * r as f64)))
}

/// beta(r) = r * f(r).
pub fn beta_of(r: u32, q: u32, eps: f64, phi: f64) -> Result<LogVal> {
    Ok(f_schedule(r, q, eps, phi)?.mul(LogVal::from_value(r as f64)))
}

// ---------------------------------------------------------------------------
// clustering oracle
// ---------------------------------------------------------------------------

/// Consistent membership-query access to a partition of the extension's
/// vertex set into `r` parts.
#[derive(Clone, Debug)]
pub struct ClusteringOracle {
    pub r: usize,
    membership: Vec<u32>,
    /// base-oracle queries spent building (materialization)
    pub build_queries: u64,
}

impl ClusteringOracle {
    pub fn membership(&self, v: usize) -> usize {
        self.membership[v] as usize
    }

    pub fn part(&self, i: usize) -> Vec<bool> {
        self.membership.iter().map(|&m| m as usize == i).collect()
    }
}

/// Per-part conductance report of a built clustering.
#[derive(Clone, Debug)]
pub struct ClusteringReport {
    pub outer_conductance: Vec<f64>,
    /// exact inner conductance when the part is small enough to enumerate
    pub inner_conductance: Vec<Option<f64>>,
    pub part_volumes: Vec<u64>,
}

/// Exact spectral reference implementation of the clustering-oracle
/// contract: bottom-r eigenvectors, degree-normalized embedding,
/// farthest-point seeding and Lloyd refinement with a fixed seed.
pub fn build_reference_clustering_oracle(
    ext: &impl QueryGraph,
    r: usize,
    dense_limit: usize,
    kmeans_rounds: usize,
    seed: u64,
) -> Result<(ClusteringOracle, ClusteringReport)> {
    if r == 0 {
        return Err(Error::param("r must be at least 1"));
    }
    let n = ext.vertex_count();
    if n > dense_limit {
        return Err(Error::BruteForceLimit(format!(
            "reference clustering oracle needs n = {n} <= {dense_limit}"
        )));
    }
    let before = ext.query_count();
    let g = materialize(ext)?;
    let build_queries = ext.query_count() - before;
    g.check_min_degree()?;

    let membership = if r == 1 {
        vec![0u32; n]
    } else {
        let l = normalized_laplacian_unchecked(&g);
        let out = eigen_with_vectors(&l)?;
        let vecs = out.vectors.unwrap();
        // embedding row per vertex: bottom-r eigenvector entries / sqrt(d)
        let emb: Vec<Vec<f64>> = (0..n)
            .map(|v| {
                let d = (g.degree(v) as f64).sqrt();
                (0..r).map(|j| vecs[j][v] / d).collect()
            })
            .collect();
        kmeans(&emb, r, kmeans_rounds, seed)
    };

    let oracle = ClusteringOracle {
        r,
        membership,
        build_queries,
    };
    let mut outer = Vec::with_capacity(r);
    let mut inner = Vec::with_capacity(r);
    let mut vols = Vec::with_capacity(r);
    for i in 0..r {
        let part = oracle.part(i);
        outer.push(set_conductance(&g, &part));
        inner.push(inner_conductance_exact(&g, &part));
        vols.push(
            part.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(v, _)| g.degree(v) as u64)
                .sum(),
        );
    }
    Ok((
        oracle,
        ClusteringReport {
            outer_conductance: outer,
            inner_conductance: inner,
            part_volumes: vols,
        },
    ))
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Farthest-point seeding + Lloyd iterations; returns memberships.
fn kmeans(emb: &[Vec<f64>], r: usize, rounds: usize, seed: u64) -> Vec<u32> {
    let n = emb.len();
    let dim = emb[0].len();
    let mut rng = stream(seed, "kmeans");
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(r);
    centers.push(emb[rng.gen_range(0..n)].clone());
    while centers.len() < r {
        let far = (0..n)
            .max_by(|&a, &b| {
                let da = centers.iter().map(|c| dist_sq(&emb[a], c)).fold(f64::MAX, f64::min);
                let db = centers.iter().map(|c| dist_sq(&emb[b], c)).fold(f64::MAX, f64::min);
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        centers.push(emb[far].clone());
    }
    let mut membership = vec![0u32; n];
    for _ in 0..rounds {
        for (v, m) in membership.iter_mut().enumerate() {
            *m = centers
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    dist_sq(&emb[v], a).partial_cmp(&dist_sq(&emb[v], b)).unwrap()
                })
                .unwrap()
                .0 as u32;
        }
        let mut sums = vec![vec![0.0; dim]; r];
        let mut counts = vec![0usize; r];
        for v in 0..n {
            let m = membership[v] as usize;
            counts[m] += 1;
            for j in 0..dim {
                sums[m][j] += emb[v][j];
            }
        }
        for i in 0..r {
            if counts[i] == 0 {
                // reseed an empty cluster at the globally farthest point
                let far = (0..n)
                    .max_by(|&a, &b| {
                        let da = dist_sq(&emb[a], &centers[membership[a] as usize]);
                        let db = dist_sq(&emb[b], &centers[membership[b] as usize]);
                        da.partial_cmp(&db).unwrap()
                    })
                    .unwrap();
                centers[i] = emb[far].clone();
            } else {
                for j in 0..dim {
                    centers[i][j] = sums[i][j] / counts[i] as f64;
                }
            }
        }
    }
    membership
}

/// Exact inner conductance of G[C] with degree-preserving self-loops, by
/// subset enumeration when |C| <= 20.
pub fn inner_conductance_exact(g: &crate::graph::Graph, part: &[bool]) -> Option<f64> {
    let members: Vec<usize> = (0..g.n()).filter(|&v| part[v]).collect();
    let c = members.len();
    if c == 0 || c > 20 {
        return None;
    }
    if c == 1 {
        return Some(0.0);
    }
    let idx: std::collections::HashMap<usize, usize> =
        members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let vol_c: u64 = members.iter().map(|&v| g.degree(v) as u64).sum();
    let mut best = f64::INFINITY;
    for mask in 1u32..((1u32 << c) - 1) {
        let mut cut = 0u64;
        let mut vol = 0u64;
        for (i, &v) in members.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            vol += g.degree(v) as u64;
            for &w in g.neighbors(v) {
                if let Some(&j) = idx.get(&(w as usize)) {
                    if mask & (1 << j) == 0 {
                        cut += 1;
                    }
                }
            }
        }
        if 2 * vol <= vol_c {
            best = best.min(cut as f64 / vol as f64);
        }
    }
    Some(best)
}

// ---------------------------------------------------------------------------
// TestOuterConductance
// ---------------------------------------------------------------------------

/// Sample-size and clamping constants for the outer-conductance estimator.
#[derive(Clone, Copy, Debug)]
pub struct OuterConductanceConfig {
    pub c_samples: f64,
    pub s_min: usize,
    pub s_max: usize,
}

impl Default for OuterConductanceConfig {
    fn default() -> Self {
        OuterConductanceConfig {
            c_samples: 1.0,
            s_min: 2000,
            s_max: 200_000,
        }
    }
}

/// Outer-conductance estimate of part `i`: sample uniform vertices, take a
/// lazy self-loop with probability 1 - deg(x)/d, and return the fraction of
/// in-part samples whose partner left the part. Membership queries go to
/// the clustering oracle; degree and neighbor queries are counted on the
/// graph oracle.
#[allow(clippy::too_many_arguments)]
pub fn test_outer_conductance(
    ext: &impl QueryGraph,
    d: usize,
    q: u32,
    alpha: LogVal,
    beta: LogVal,
    oracle: &ClusteringOracle,
    i: usize,
    cfg: &OuterConductanceConfig,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let n = ext.vertex_count();
    // s = Theta(alpha^2 q d log(n) / beta), clamped into a runnable window
    let s_ln = alpha.powf(2.0).div(beta).ln
        + ((q as f64) * d as f64 * (n as f64).ln() * cfg.c_samples).ln();
    let s_raw = if s_ln > (cfg.s_max as f64).ln() {
        cfg.s_max
    } else {
        (s_ln.exp().ceil() as usize).clamp(cfg.s_min, cfg.s_max)
    };
    let mut a = 0u64;
    let mut b = 0u64;
    for _ in 0..s_raw {
        let x = rng.gen_range(0..n);
        let dx = ext.degree(x)?;
        if dx > d {
            return Err(Error::param(format!(
                "degree bound violated: deg({x}) = {dx} > d = {d}"
            )));
        }
        let y = if rng.gen_range(0..d) < dx {
            ext.neighbor(x, rng.gen_range(0..dx))?
        } else {
            x
        };
        if oracle.membership(x) == i {
            b += 1;
            if oracle.membership(y) != i {
                a += 1;
            }
        }
    }
    if b == 0 {
        return Err(Error::Internal(
            "cluster too small: no sampled vertex landed in it".into(),
        ));
    }
    Ok(a as f64 / b as f64)
}

// ---------------------------------------------------------------------------
// the driver
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct UlcConfig {
    pub phi: f64,
    pub eps: f64,
    pub rho: f64,
    /// degree bound of the base graph
    pub d: usize,
    /// hypothesis-shape constants (log-space comparisons)
    pub c_eps_hyp: f64,
    pub c_rho_hyp: f64,
    /// volume-estimate sample: |T| = clamp(ceil(c_big_t d q ln n / xi0^2), ..)
    pub c_big_t: f64,
    pub big_t_cap: usize,
    /// xi0 clamp window (the formula collapses at desk scale)
    pub xi0_min: f64,
    pub xi0_max: f64,
    pub c_xi0: f64,
    /// membership sample: s = clamp(ceil(c_s d q ln n), 1, s_cap)
    pub c_s: f64,
    pub s_cap: usize,
    /// volume-window width xi = min(c_xi * beta q^10 / alpha^3, xi_max)
    pub c_xi: f64,
    pub xi_max: f64,
    /// explicit outer-conductance acceptance threshold (stands in for the
    /// O_d(q^{85q} eps^{4^{1-r}} / phi^{(2r-1)/(q-1)}) expression)
    pub theta_outer: f64,
    pub outer: OuterConductanceConfig,
    pub dense_limit: usize,
    pub kmeans_rounds: usize,
}

impl Default for UlcConfig {
    fn default() -> Self {
        UlcConfig {
            phi: 0.3,
            eps: 1e-130,
            rho: 0.4,
            d: 4,
            c_eps_hyp: 1.0,
            c_rho_hyp: 1e-25,
            c_big_t: 4.0,
            big_t_cap: 100_000,
            xi0_min: 0.05,
            xi0_max: 0.25,
            c_xi0: 1.0,
            c_s: 8.0,
            s_cap: 100_000,
            c_xi: 1.0,
            xi_max: 0.25,
            theta_outer: 0.05,
            outer: OuterConductanceConfig::default(),
            dense_limit: 4096,
            kmeans_rounds: 20,
        }
    }
}

impl UlcConfig {
    /// Hypothesis-shape validation, carried out in log space because the
    /// bounds underflow doubles for q >= 3.
    pub fn validate(&self, q: u32) -> Result<()> {
        if q < 2 {
            return Err(Error::param("ULC driver needs q >= 2"));
        }
        for (name, x) in [("phi", self.phi), ("eps", self.eps), ("rho", self.rho)] {
            if !(0.0 < x && x < 1.0) {
                return Err(Error::param(format!("{name} must lie in (0, 1)")));
            }
        }
        if self.d < 1 {
            return Err(Error::param("d must be at least 1"));
        }
        let qf = q as f64;
        // eps <= c * (phi^2 / q^100)^{4^{q-1}}
        let bound_ln =
            self.c_eps_hyp.ln() + 4.0f64.powi(q as i32 - 1) * (2.0 * self.phi.ln() - 100.0 * qf.ln());
        if self.eps.ln() > bound_ln {
            return Err(Error::param(format!(
                "eps hypothesis violated: ln eps = {:.2} > {:.2}",
                self.eps.ln(),
                bound_ln
            )));
        }
        // rho >= c * q^{86q} eps^{4^{1-q}} / phi^4
        let floor_ln = self.c_rho_hyp.ln() + 86.0 * qf * qf.ln()
            + 4.0f64.powi(1 - q as i32) * self.eps.ln()
            - 4.0 * self.phi.ln();
        if self.rho.ln() < floor_ln {
            return Err(Error::param(format!(
                "rho hypothesis violated: ln rho = {:.2} < {:.2}",
                self.rho.ln(),
                floor_ln
            )));
        }
        Ok(())
    }

    /// xi0 from the paper's shape, evaluated at r = q (the formula references
    /// r outside the loop) and clamped.
    pub fn xi0(&self, q: u32) -> f64 {
        let qf = q as f64;
        let ln = self.c_xi0.ln() + 50.0 * qf.ln() + 4.0f64.powi(1 - q as i32) * self.eps.ln()
            - ((2.0 * qf - 1.0) / (qf - 1.0)) * self.phi.ln();
        ln.exp().clamp(self.xi0_min, self.xi0_max)
    }

    /// Volume-window width for round r, clamped.
    pub fn xi(&self, r: u32, q: u32) -> Result<f64> {
        let alpha = alpha_of(r, q, self.eps, self.phi)?;
        let beta = beta_of(r, q, self.eps, self.phi)?;
        let ln = self.c_xi.ln() + beta.ln + 10.0 * (q as f64).ln() - 3.0 * alpha.ln;
        Ok(if ln > self.xi_max.ln() {
            self.xi_max
        } else {
            ln.exp().min(self.xi_max)
        })
    }
}

/// The end-to-end tester (exact reference clustering oracle).
pub fn unique_label_cover_test(
    oracle: &UlcOracle,
    config: &UlcConfig,
    streams: &StreamTree,
) -> Result<Verdict> {
    let q = oracle.q();
    config.validate(q)?;
    let n = oracle.vertex_count();
    let ext = UlcExtended::new(oracle);
    let n_ext = ext.vertex_count();

    // volume estimate x ~= mu_G from degree sampling
    let xi0 = config.xi0(q);
    let t_size = ((config.c_big_t * config.d as f64 * q as f64 * (n as f64).ln() / (xi0 * xi0))
        .ceil() as usize)
        .clamp(1, config.big_t_cap);
    let mut t_rng = streams.fork("volume").rng();
    let mut deg_sum = 0u64;
    for _ in 0..t_size {
        let v = t_rng.gen_range(0..n);
        deg_sum += oracle.degree(v)? as u64;
    }
    let x = n as f64 / t_size as f64 * deg_sum as f64;

    let mut rounds = Vec::new();
    let mut decision = Decision::Reject;
    'outer: for r in 2..=q {
        let alpha = alpha_of(r, q, config.eps, config.phi)?;
        let beta = beta_of(r, q, config.eps, config.phi)?;
        let xi = config.xi(r, q)?;
        let (cluster, report) = build_reference_clustering_oracle(
            &ext,
            r as usize,
            config.dense_limit,
            config.kmeans_rounds,
            streams.fork_idx("oracle", r as usize).seed(),
        )?;

        // volume estimates of each part from uniform extension samples
        let s = ((config.c_s * config.d as f64 * q as f64 * (n as f64).ln()).ceil() as usize)
            .clamp(1, config.s_cap);
        let mut s_rng = streams.fork_idx("members", r as usize).rng();
        let mut f = vec![0u64; r as usize];
        for _ in 0..s {
            let v = s_rng.gen_range(0..n_ext);
            let d = ext.degree(v)?;
            f[cluster.membership(v)] += d as u64;
        }
        let s_est: Vec<f64> = f.iter().map(|&fi| n_ext as f64 / s as f64 * fi as f64).collect();

        let floor = x * q as f64 / (4.0 * (q as f64 + 1.0));
        let all_big = s_est.iter().all(|&si| si >= floor);
        let mut accepted_part = None;
        if all_big {
            for i in 0..r as usize {
                if s_est[i] >= (1.0 - xi) * x && s_est[i] <= (1.0 + xi) * x {
                    let eta = test_outer_conductance(
                        &ext,
                        config.d,
                        q,
                        alpha,
                        beta,
                        &cluster,
                        i,
                        &config.outer,
                        &mut streams.fork(&format!("outer/{r}/{i}")).rng(),
                    )?;
                    if eta <= config.theta_outer {
                        accepted_part = Some((i, eta));
                        break;
                    }
                }
            }
        }
        rounds.push(serde_json::json!({
            "r": r,
            "xi": xi,
            "part_volume_estimates": s_est,
            "volume_floor": floor,
            "outer_conductances_exact": report.outer_conductance,
            "accepted_part": accepted_part.map(|(i, eta)| serde_json::json!({"part": i, "eta": eta})),
            "oracle_build_queries": cluster.build_queries,
        }));
        if accepted_part.is_some() {
            decision = Decision::Accept;
            break 'outer;
        }
    }

    let mut v = Verdict::new(decision);
    v.put("x_volume_estimate", x);
    v.put("mu_exact", oracle.volume());
    v.put("xi0", xi0);
    v.put("t_size", t_size as u64);
    v.put("theta_outer", config.theta_outer);
    v.put("rounds", serde_json::Value::Array(rounds));
    v.put("query_count", oracle.query_count());
    Ok(v)
}
