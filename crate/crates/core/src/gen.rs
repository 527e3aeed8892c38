//! Seeded instance generation: certified random regular expanders, planted
//! near-optimal Max Cut / E2Lin / ULC instances, and the 3-CNF to
//! 3-colorability reduction graph.
//!
//! Corruption re-randomizes constraints (or swaps edge pairs) rather than
//! deleting edges, so the degree sequence and the expansion certificate
//! survive sweeps over the corruption rate.

use crate::error::Error;
use crate::exact::matrix::{eigenvalues_symmetric, normalized_laplacian};
use crate::graph::{E2LinInstance, Graph, Perm, UlcInstance};
use crate::rng::stream;
use crate::Result;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const MAX_ATTEMPTS: usize = 100;

/// Spectral expansion certificate: phi_G >= lambda_2 / 2 by Cheeger.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct Certificate {
    pub lambda2: f64,
    pub phi_lower_bound: f64,
}

/// A generated graph plus its certificate (when spectral certification was
/// requested and n is within the dense limit).
#[derive(Clone, Debug)]
pub struct GeneratedGraph {
    pub graph: Graph,
    pub certificate: Option<Certificate>,
    pub attempts: usize,
}

fn certify(g: &Graph, dense_limit: usize) -> Result<Certificate> {
    let l = normalized_laplacian(g, dense_limit)?;
    let profile = eigenvalues_symmetric(&l)?;
    let lambda2 = profile.eigenvalues[1];
    Ok(Certificate {
        lambda2,
        phi_lower_bound: lambda2 / 2.0,
    })
}

/// One pairing-model draw of a simple d-regular graph: repeatedly match two
/// random unpaired stubs whose edge is legal, restarting when stuck
/// (Steger-Wormald style).
fn random_regular_once(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let mut seen = std::collections::HashSet::with_capacity(n * d / 2);
    let mut edges = Vec::with_capacity(n * d / 2);
    while !stubs.is_empty() {
        let mut tries = 0;
        loop {
            tries += 1;
            if tries > 500 {
                return None; // stuck near the end; resample from scratch
            }
            let i = rng.gen_range(0..stubs.len());
            let j = rng.gen_range(0..stubs.len());
            if i == j {
                continue;
            }
            let (u, v) = (stubs[i], stubs[j]);
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if seen.contains(&key) {
                continue;
            }
            seen.insert(key);
            edges.push((u as usize, v as usize));
            let (hi, lo) = (i.max(j), i.min(j));
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
            break;
        }
    }
    Graph::from_edges(n, &edges).ok()
}

/// Random d-regular expander, resampled until simple, connected, and (when
/// `phi_min` is given and n fits the dense limit) spectrally certified with
/// lambda_2 / 2 >= phi_min.
pub fn gen_random_regular(
    n: usize,
    d: usize,
    seed: u64,
    phi_min: Option<f64>,
    dense_limit: usize,
) -> Result<GeneratedGraph> {
    if n * d % 2 != 0 {
        return Err(Error::param("n * d must be even"));
    }
    if d < 3 || d >= n {
        return Err(Error::param("need 3 <= d < n"));
    }
    if phi_min.is_some() && n > dense_limit {
        return Err(Error::param(format!(
            "cannot certify expansion at n = {n} > dense limit {dense_limit}; \
             drop phi_min to generate uncertified"
        )));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = stream(seed, &format!("regular/{attempt}"));
        let Some(g) = random_regular_once(n, d, &mut rng) else {
            continue;
        };
        if !g.is_connected() {
            continue;
        }
        match phi_min {
            None => {
                return Ok(GeneratedGraph {
                    graph: g,
                    certificate: None,
                    attempts: attempt + 1,
                })
            }
            Some(min) => {
                let cert = certify(&g, dense_limit)?;
                if cert.phi_lower_bound >= min {
                    return Ok(GeneratedGraph {
                        graph: g,
                        certificate: Some(cert),
                        attempts: attempt + 1,
                    });
                }
            }
        }
    }
    Err(Error::Generation(format!(
        "cannot certify expansion after {MAX_ATTEMPTS} attempts (n={n}, d={d}, phi_min={phi_min:?})"
    )))
}

/// Planted Max Cut instance: bipartite d-regular base with a known side
/// assignment, corrupted by degree-preserving edge-pair swaps.
#[derive(Clone, Debug)]
pub struct PlantedMaxCut {
    pub graph: Graph,
    /// planted bipartition: side[v] in {false, true}
    pub side: Vec<bool>,
    /// exact number of edges violating the planted cut
    pub violations: usize,
    pub certificate: Option<Certificate>,
}

impl PlantedMaxCut {
    /// Certified lower bound on MC(G) from the planted solution.
    pub fn maxcut_lower_bound(&self) -> f64 {
        1.0 - self.violations as f64 / self.graph.m() as f64
    }
}

fn random_bipartite_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let half = n / 2;
    let mut left: Vec<u32> = (0..half as u32).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let mut right: Vec<u32> = (0..half as u32)
        .flat_map(|v| std::iter::repeat(half as u32 + v).take(d))
        .collect();
    let mut seen = std::collections::HashSet::with_capacity(half * d);
    let mut edges = Vec::with_capacity(half * d);
    while !left.is_empty() {
        let mut tries = 0;
        loop {
            tries += 1;
            if tries > 500 {
                return None;
            }
            let i = rng.gen_range(0..left.len());
            let j = rng.gen_range(0..right.len());
            let (u, v) = (left[i], right[j]);
            if seen.contains(&(u, v)) {
                continue;
            }
            seen.insert((u, v));
            edges.push((u as usize, v as usize));
            left.swap_remove(i);
            right.swap_remove(j);
            break;
        }
    }
    Graph::from_edges(n, &edges).ok()
}

/// Planted Max Cut generator. `eps` controls corruption: about eps * m edges
/// are re-paired by double swaps, half of which land inside a side.
pub fn gen_planted_maxcut(
    n: usize,
    d: usize,
    eps: f64,
    seed: u64,
    phi_min: Option<f64>,
    dense_limit: usize,
) -> Result<PlantedMaxCut> {
    if n % 2 != 0 {
        return Err(Error::param("n must be even"));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::param("eps must lie in [0, 1]"));
    }
    if d < 3 || d > n / 2 {
        return Err(Error::param("need 3 <= d <= n/2"));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = stream(seed, &format!("planted-mc/{attempt}"));
        let Some(g) = random_bipartite_regular(n, d, &mut rng) else {
            continue;
        };
        let mut edges = g.edges();
        let m = edges.len();
        let swaps = (eps * m as f64 / 2.0).ceil() as usize;
        if !swap_edge_pairs(&mut edges, swaps, &mut rng) {
            continue;
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.check_simple().is_err() || !g.is_connected() {
            continue;
        }
        let side: Vec<bool> = (0..n).map(|v| v >= n / 2).collect();
        let violations = edges.iter().filter(|&&(u, v)| side[u] == side[v]).count();
        let certificate = match phi_min {
            None => None,
            Some(min) => {
                let cert = certify(&g, dense_limit)?;
                if cert.phi_lower_bound < min {
                    continue;
                }
                Some(cert)
            }
        };
        return Ok(PlantedMaxCut {
            graph: g,
            side,
            violations,
            certificate,
        });
    }
    Err(Error::Generation(
        "planted max-cut generation failed".into(),
    ))
}

/// Degree-preserving corruption: `swaps` random pairs of edges have their
/// endpoints re-paired (orientation chosen by coin), skipping swaps that
/// would create loops or parallel edges.
fn swap_edge_pairs(
    edges: &mut [(usize, usize)],
    swaps: usize,
    rng: &mut ChaCha8Rng,
) -> bool {
    use std::collections::HashSet;
    let mut present: HashSet<(usize, usize)> =
        edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let key = |u: usize, v: usize| (u.min(v), u.max(v));
    let m = edges.len();
    let mut done = 0;
    let mut tries = 0;
    while done < swaps {
        tries += 1;
        if tries > 200 * swaps.max(1) {
            return false;
        }
        let i = rng.gen_range(0..m);
        let j = rng.gen_range(0..m);
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (c, dd) = edges[j];
        // two re-pairings; pick one uniformly
        let ((p1, q1), (p2, q2)) = if rng.gen_bool(0.5) {
            ((a, c), (b, dd))
        } else {
            ((a, dd), (b, c))
        };
        if p1 == q1 || p2 == q2 {
            continue;
        }
        if present.contains(&key(p1, q1)) || present.contains(&key(p2, q2)) {
            continue;
        }
        present.remove(&key(a, b));
        present.remove(&key(c, dd));
        present.insert(key(p1, q1));
        present.insert(key(p2, q2));
        edges[i] = (p1, q1);
        edges[j] = (p2, q2);
        done += 1;
    }
    true
}

/// Planted E2Lin(q) instance with its hidden assignment.
#[derive(Clone, Debug)]
pub struct PlantedE2Lin {
    pub instance: E2LinInstance,
    pub assignment: Vec<u32>,
    pub violations: usize,
    pub certificate: Option<Certificate>,
}

impl PlantedE2Lin {
    pub fn opt_lower_bound(&self) -> f64 {
        1.0 - self.violations as f64 / self.instance.graph.m() as f64
    }
}

/// Planted ULC instance with its hidden labelling.
#[derive(Clone, Debug)]
pub struct PlantedUlc {
    pub instance: UlcInstance,
    pub assignment: Vec<u16>,
    pub violations: usize,
    pub certificate: Option<Certificate>,
}

impl PlantedUlc {
    pub fn opt_lower_bound(&self) -> f64 {
        1.0 - self.violations as f64 / self.instance.graph.m() as f64
    }
}

/// Planted E2Lin(q): certified expander, hidden psi, offsets
/// c_uv = psi(v) - psi(u), then an eps-fraction of constraints re-randomized.
pub fn gen_planted_e2lin(
    n: usize,
    d: usize,
    q: u32,
    eps: f64,
    seed: u64,
    phi_min: Option<f64>,
    dense_limit: usize,
) -> Result<PlantedE2Lin> {
    if q == 0 {
        return Err(Error::param("q must be positive"));
    }
    let base = gen_random_regular(n, d, seed, phi_min, dense_limit)?;
    let mut rng = stream(seed, "planted-e2lin");
    let psi: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q)).collect();
    let mut edges: Vec<(usize, usize, u32)> = base
        .graph
        .edges()
        .into_iter()
        .map(|(u, v)| (u, v, (psi[v] + q - psi[u]) % q))
        .collect();
    let count = (eps * edges.len() as f64).round() as usize;
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(&mut rng);
    for &i in order.iter().take(count) {
        edges[i].2 = rng.gen_range(0..q);
    }
    let instance = E2LinInstance::from_edges(n, q, &edges)?;
    let violations = edges
        .iter()
        .filter(|&&(u, v, c)| (psi[u] + c) % q != psi[v])
        .count();
    Ok(PlantedE2Lin {
        instance,
        assignment: psi,
        violations,
        certificate: base.certificate,
    })
}

/// Random permutation over [q] fixing p[from] = to, uniform among such.
fn random_perm_fixing(q: u32, from: u16, to: u16, rng: &mut ChaCha8Rng) -> Perm {
    let mut rest: Vec<u16> = (0..q as u16).filter(|&x| x != to).collect();
    rest.shuffle(rng);
    let mut p = vec![0u16; q as usize];
    let mut it = rest.into_iter();
    for (i, slot) in p.iter_mut().enumerate() {
        *slot = if i as u16 == from {
            to
        } else {
            it.next().expect("enough labels")
        };
    }
    p.into_boxed_slice()
}

fn random_perm(q: u32, rng: &mut ChaCha8Rng) -> Perm {
    let mut p: Vec<u16> = (0..q as u16).collect();
    p.shuffle(rng);
    p.into_boxed_slice()
}

/// Planted ULC: permutations consistent with a hidden labelling
/// (pi(psi(u)) = psi(v)), completed uniformly, then eps-fraction
/// re-randomized.
pub fn gen_planted_ulc(
    n: usize,
    d: usize,
    q: u32,
    eps: f64,
    seed: u64,
    phi_min: Option<f64>,
    dense_limit: usize,
) -> Result<PlantedUlc> {
    if q == 0 {
        return Err(Error::param("q must be positive"));
    }
    let base = gen_random_regular(n, d, seed, phi_min, dense_limit)?;
    let mut rng = stream(seed, "planted-ulc");
    let psi: Vec<u16> = (0..n).map(|_| rng.gen_range(0..q) as u16).collect();
    let plain = base.graph.edges();
    let mut edges: Vec<(usize, usize, Perm)> = plain
        .iter()
        .map(|&(u, v)| (u, v, random_perm_fixing(q, psi[u], psi[v], &mut rng)))
        .collect();
    let count = (eps * edges.len() as f64).round() as usize;
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(&mut rng);
    for &i in order.iter().take(count) {
        edges[i].2 = random_perm(q, &mut rng);
    }
    let violations = edges
        .iter()
        .filter(|(u, v, p)| p[psi[*u] as usize] != psi[*v])
        .count();
    let instance = UlcInstance::from_edges(n, q, &edges)?;
    Ok(PlantedUlc {
        instance,
        assignment: psi,
        violations,
        certificate: base.certificate,
    })
}

// ---------------------------------------------------------------------------
// 3-CNF machinery and the hardness construction
// ---------------------------------------------------------------------------

/// A signed literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn new(var: usize, negated: bool) -> Self {
        Lit { var, negated }
    }
    pub fn pos(var: usize) -> Self {
        Lit::new(var, false)
    }
    pub fn neg(var: usize) -> Self {
        Lit::new(var, true)
    }
}

/// 3-CNF with exactly three distinct variables per clause and a bound on how
/// often any literal occurs.
#[derive(Clone, Debug)]
pub struct Cnf3 {
    pub n_vars: usize,
    pub clauses: Vec<[Lit; 3]>,
    /// max occurrences of any single literal, computed at construction
    pub k_bound: usize,
}

impl Cnf3 {
    pub fn new(n_vars: usize, clauses: Vec<[Lit; 3]>) -> Result<Self> {
        let mut occurrences = vec![0usize; 2 * n_vars];
        for cl in &clauses {
            let vars: Vec<usize> = cl.iter().map(|l| l.var).collect();
            if vars[0] == vars[1] || vars[0] == vars[2] || vars[1] == vars[2] {
                return Err(Error::param("clause variables must be distinct"));
            }
            for l in cl {
                if l.var >= n_vars {
                    return Err(Error::param("literal variable out of range"));
                }
                occurrences[2 * l.var + l.negated as usize] += 1;
            }
        }
        let k_bound = occurrences.iter().copied().max().unwrap_or(0).max(1);
        Ok(Cnf3 {
            n_vars,
            clauses,
            k_bound,
        })
    }
}

/// Seeded random 3-CNF respecting a literal bound.
pub fn random_cnf3(n_vars: usize, n_clauses: usize, k_bound: usize, seed: u64) -> Result<Cnf3> {
    if n_vars < 3 {
        return Err(Error::param("need at least 3 variables"));
    }
    let mut rng = stream(seed, "cnf");
    let mut occurrences = vec![0usize; 2 * n_vars];
    let mut clauses = Vec::new();
    let mut guard = 0;
    while clauses.len() < n_clauses {
        guard += 1;
        if guard > 10_000 * n_clauses {
            return Err(Error::Generation("cannot respect literal bound".into()));
        }
        let mut vars = rand::seq::index::sample(&mut rng, n_vars, 3).into_vec();
        vars.sort_unstable();
        let lits: Vec<Lit> = vars
            .into_iter()
            .map(|v| Lit::new(v, rng.gen_bool(0.5)))
            .collect();
        if lits
            .iter()
            .any(|l| occurrences[2 * l.var + l.negated as usize] + 1 > k_bound)
        {
            continue;
        }
        for l in &lits {
            occurrences[2 * l.var + l.negated as usize] += 1;
        }
        clauses.push([lits[0], lits[1], lits[2]]);
    }
    Cnf3::new(n_vars, clauses)
}

/// Output of the CNF-to-graph reduction.
#[derive(Clone, Debug)]
pub struct HardnessGraph {
    pub graph: Graph,
    pub d_exp: usize,
    /// recorded degree bound d' = max(2 d_exp + 3, 2k + 1)
    pub degree_bound: usize,
    pub max_degree: usize,
    pub layer_size: usize,
    /// true when |Gamma(S)| >= |S| was verified exhaustively on each layer
    pub layer_expansion_checked: bool,
    /// lambda_2 / 2 of the full construction when it fits the dense limit
    pub lambda2_half: Option<f64>,
    /// index of the first vertex of each block, for reproducibility
    pub blocks: HardnessLayout,
}

/// Vertex layout of the construction: three color layers, literal vertices,
/// then gadget vertices.
#[derive(Clone, Copy, Debug)]
pub struct HardnessLayout {
    pub layer: usize, // layer size L = 2kn
    pub d_start: usize,
    pub t_start: usize,
    pub f_start: usize,
    pub lit_start: usize,
    pub gadget_start: usize,
}

impl HardnessLayout {
    /// Index of literal vertex copy `j` of variable `i` with the given sign.
    pub fn lit(&self, k: usize, var: usize, copy: usize, negated: bool) -> usize {
        self.lit_start + var * 2 * k + if negated { k + copy } else { copy }
    }
}

struct Builder {
    edges: Vec<(usize, usize)>,
    next: usize,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        let v = self.next;
        self.next += 1;
        v
    }
    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }
    /// Equality gadget: a proper 3-coloring forces color(y1) = color(y2).
    fn equality(&mut self, y1: usize, y2: usize) {
        let w1 = self.fresh();
        let w2 = self.fresh();
        self.edge(w1, w2);
        self.edge(y1, w1);
        self.edge(y1, w2);
        self.edge(y2, w1);
        self.edge(y2, w2);
    }
    /// Clause gadget on literal vertices l1..l3 with helper color-T vertices
    /// t1..t3: extendable iff not all three literals carry the F color.
    fn clause(&mut self, l: [usize; 3], t: [usize; 3]) {
        let w: Vec<usize> = (0..3).map(|_| self.fresh()).collect();
        let a = self.fresh();
        let b = self.fresh();
        let c = self.fresh();
        for j in 0..3 {
            self.edge(w[j], l[j]);
            self.edge(w[j], t[j]);
        }
        self.edge(a, b);
        self.edge(a, c);
        self.edge(b, c);
        self.edge(a, w[1]);
        self.edge(b, w[0]);
        self.edge(c, w[2]);
    }
}

/// Exhaustive neighbor-set expansion check |Gamma(S)| >= |S| for every
/// nonempty S with |S| <= n/2 (bitmask scan; n <= 24).
fn vertex_expansion_holds(g: &Graph) -> bool {
    let n = g.n();
    debug_assert!(n <= 24);
    let mut nb = vec![0u32; n];
    for v in 0..n {
        for &w in g.neighbors(v) {
            nb[v] |= 1 << w;
        }
    }
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize > n / 2 {
            continue;
        }
        let mut gamma = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            gamma |= nb[v];
        }
        if gamma.count_ones() < mask.count_ones() {
            return false;
        }
    }
    true
}

/// Build the reduction graph psi(f): three expander layers of color-class
/// vertices whose edges are equality gadgets, pairwise layer matchings,
/// literal vertices wired by equality gadgets and complement edges, a
/// literal-to-D matching, and one clause gadget per clause.
pub fn gen_hardness_3col(
    f: &Cnf3,
    d_exp: usize,
    seed: u64,
    dense_limit: usize,
) -> Result<HardnessGraph> {
    let k = f.k_bound;
    let n = f.n_vars;
    let layer = 2 * k * n;
    if layer <= d_exp {
        return Err(Error::param(format!(
            "layer size {layer} too small for a {d_exp}-regular expander"
        )));
    }
    if 3 * f.clauses.len() > layer {
        return Err(Error::Internal(
            "clause slots exceed layer size despite the literal bound".into(),
        ));
    }

    // one expander topology per layer, with the neighbor-expansion property
    // checked exhaustively when the layer is small enough
    let mut layers = Vec::new();
    let mut checked = true;
    for name in ["layer-d", "layer-t", "layer-f"] {
        let mut found = None;
        for attempt in 0..MAX_ATTEMPTS {
            let mut rng = stream(seed, &format!("hardness/{name}/{attempt}"));
            let Some(g) = random_regular_once(layer, d_exp, &mut rng) else {
                continue;
            };
            if !g.is_connected() {
                continue;
            }
            if layer <= 24 {
                if vertex_expansion_holds(&g) {
                    found = Some(g);
                    break;
                }
            } else {
                checked = false;
                found = Some(g);
                break;
            }
        }
        layers.push(found.ok_or_else(|| {
            Error::Generation(format!("no expander layer of size {layer} found"))
        })?);
    }

    let layout = HardnessLayout {
        layer,
        d_start: 0,
        t_start: layer,
        f_start: 2 * layer,
        lit_start: 3 * layer,
        gadget_start: 3 * layer + 2 * k * n,
    };
    let mut b = Builder {
        edges: Vec::new(),
        next: layout.gadget_start,
    };

    // expander edges inside each layer are equality gadgets
    for (li, start) in [layout.d_start, layout.t_start, layout.f_start]
        .iter()
        .enumerate()
    {
        for (u, v) in layers[li].edges() {
            b.equality(start + u, start + v);
        }
    }
    // pairwise matchings between the layers pin three distinct colors
    for i in 0..layer {
        b.edge(layout.d_start + i, layout.t_start + i);
        b.edge(layout.t_start + i, layout.f_start + i);
        b.edge(layout.f_start + i, layout.d_start + i);
    }
    // same-literal copies agree
    for var in 0..n {
        for negated in [false, true] {
            for a in 0..k {
                for bb in a + 1..k {
                    b.equality(
                        layout.lit(k, var, a, negated),
                        layout.lit(k, var, bb, negated),
                    );
                }
            }
        }
    }
    // complementary literals differ
    for var in 0..n {
        for copy in 0..k {
            b.edge(
                layout.lit(k, var, copy, false),
                layout.lit(k, var, copy, true),
            );
        }
    }
    // literal <-> D matching in index order (the fixed correspondence)
    for lidx in 0..2 * k * n {
        b.edge(layout.lit_start + lidx, layout.d_start + lidx);
    }
    // clause gadgets; occurrence j of a literal uses its j-th copy, and the
    // T helpers are distinct per (clause, slot)
    let mut used = vec![0usize; 2 * n];
    for (ci, cl) in f.clauses.iter().enumerate() {
        let mut lverts = [0usize; 3];
        for (slot, lit) in cl.iter().enumerate() {
            let key = 2 * lit.var + lit.negated as usize;
            let copy = used[key];
            used[key] += 1;
            debug_assert!(copy < k);
            lverts[slot] = layout.lit(k, lit.var, copy, lit.negated);
        }
        let t = [
            layout.t_start + 3 * ci,
            layout.t_start + 3 * ci + 1,
            layout.t_start + 3 * ci + 2,
        ];
        b.clause(lverts, t);
    }

    let graph = Graph::from_edges(b.next, &b.edges)?;
    graph.check_simple()?;
    let max_degree = (0..graph.n()).map(|v| graph.degree(v)).max().unwrap_or(0);
    let degree_bound = (2 * d_exp + 3).max(2 * k + 1);
    let lambda2_half = if graph.n() <= dense_limit {
        let l = normalized_laplacian(&graph, dense_limit)?;
        Some(eigenvalues_symmetric(&l)?.eigenvalues[1] / 2.0)
    } else {
        None
    };
    Ok(HardnessGraph {
        graph,
        d_exp,
        degree_bound,
        max_degree,
        layer_size: layer,
        layer_expansion_checked: checked,
        lambda2_half,
        blocks: layout,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_3colorable, exact_maxcut, exact_opt_e2lin, exact_opt_ulc, sat_brute};

    #[test]
    fn regular_generator_parity_error() {
        assert!(matches!(
            gen_random_regular(7, 3, 1, None, 64),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn k4_is_the_only_3_regular_graph_on_4_vertices() {
        let out = gen_random_regular(4, 3, 5, Some(0.5), 64).unwrap();
        assert_eq!(out.graph.m(), 6);
        let cert = out.certificate.unwrap();
        assert!((cert.phi_lower_bound - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn regular_generator_certifies() {
        let out = gen_random_regular(16, 4, 9, Some(0.1), 64).unwrap();
        assert!(out.certificate.unwrap().phi_lower_bound >= 0.1);
        out.graph.check_simple().unwrap();
        for v in 0..16 {
            assert_eq!(out.graph.degree(v), 4);
        }
    }

    #[test]
    fn planted_maxcut_zero_eps_is_bipartite() {
        let p = gen_planted_maxcut(16, 4, 0.0, 3, Some(0.05), 64).unwrap();
        assert_eq!(p.violations, 0);
        assert_eq!(exact_maxcut(&p.graph).unwrap(), 1.0);
    }

    #[test]
    fn planted_maxcut_respects_bound() {
        let p = gen_planted_maxcut(16, 4, 0.1, 11, None, 64).unwrap();
        let stored = p.maxcut_lower_bound();
        let exact = exact_maxcut(&p.graph).unwrap();
        assert!(exact >= stored - 1e-12, "exact {exact} < stored {stored}");
        // recount matches the stored violation count
        let recount = p
            .graph
            .edges()
            .iter()
            .filter(|&&(u, v)| p.side[u] == p.side[v])
            .count();
        assert_eq!(recount, p.violations);
        // degree sequence preserved by corruption
        for v in 0..16 {
            assert_eq!(p.graph.degree(v), 4);
        }
    }

    #[test]
    fn planted_e2lin_bounds() {
        let p = gen_planted_e2lin(8, 3, 2, 0.0, 2, Some(0.05), 64).unwrap();
        assert_eq!(p.violations, 0);
        assert_eq!(exact_opt_e2lin(&p.instance).unwrap(), 1.0);

        let p = gen_planted_e2lin(8, 3, 2, 0.1, 7, None, 64).unwrap();
        let exact = exact_opt_e2lin(&p.instance).unwrap();
        assert!(exact >= p.opt_lower_bound() - 1e-12);
        assert!(exact >= 0.9 - 1e-12);
    }

    #[test]
    fn planted_ulc_bounds() {
        let p = gen_planted_ulc(8, 3, 2, 0.0, 4, Some(0.05), 64).unwrap();
        assert_eq!(p.violations, 0);
        assert_eq!(exact_opt_ulc(&p.instance).unwrap(), 1.0);
        // hidden assignment satisfies everything
        assert_eq!(p.instance.violated_fraction(&p.assignment), 0.0);
    }

    #[test]
    fn equality_gadget_forces_equal_colors() {
        // enumerate all proper 3-colorings of the 4-vertex gadget
        let mut b = Builder {
            edges: Vec::new(),
            next: 2,
        };
        b.equality(0, 1);
        let g = Graph::from_edges(b.next, &b.edges).unwrap();
        let n = g.n();
        let mut proper_with_equal = 0;
        let mut proper_with_diff = 0;
        for code in 0..3usize.pow(n as u32) {
            let mut c = code;
            let colors: Vec<usize> = (0..n)
                .map(|_| {
                    let x = c % 3;
                    c /= 3;
                    x
                })
                .collect();
            let proper = g
                .edges()
                .iter()
                .all(|&(u, v)| colors[u] != colors[v]);
            if proper {
                if colors[0] == colors[1] {
                    proper_with_equal += 1;
                } else {
                    proper_with_diff += 1;
                }
            }
        }
        assert!(proper_with_equal > 0);
        assert_eq!(proper_with_diff, 0);
    }

    #[test]
    fn clause_gadget_excludes_all_false() {
        // l1,l2,l3 are vertices 0..3, t1..t3 are 3..6; gadget fills the rest
        let mut b = Builder {
            edges: Vec::new(),
            next: 6,
        };
        b.clause([0, 1, 2], [3, 4, 5]);
        let g = Graph::from_edges(b.next, &b.edges).unwrap();
        let gadget = g.n() - 6;
        // colors: 0 = D, 1 = T, 2 = F; T helpers pinned to 1
        for pattern in 0..8usize {
            let lit_colors: Vec<usize> = (0..3).map(|j| 1 + ((pattern >> j) & 1)).collect();
            let mut extendable = false;
            for code in 0..3usize.pow(gadget as u32) {
                let mut c = code;
                let mut colors = vec![0usize; g.n()];
                colors[..3].copy_from_slice(&lit_colors);
                colors[3..6].fill(1);
                for slot in colors.iter_mut().skip(6) {
                    *slot = c % 3;
                    c /= 3;
                }
                if g.edges().iter().all(|&(u, v)| colors[u] != colors[v]) {
                    extendable = true;
                    break;
                }
            }
            let all_false = lit_colors.iter().all(|&c| c == 2);
            assert_eq!(extendable, !all_false, "pattern {pattern:03b}");
        }
    }

    #[test]
    fn hardness_construction_satisfiable_is_colorable() {
        let f = Cnf3::new(
            3,
            vec![[Lit::pos(0), Lit::pos(1), Lit::pos(2)]],
        )
        .unwrap();
        assert!(sat_brute(&f).unwrap());
        let h = gen_hardness_3col(&f, 3, 17, 4096).unwrap();
        assert!(h.max_degree <= h.degree_bound);
        assert!(h.degree_bound <= h.d_exp + 6);
        assert!(h.layer_expansion_checked);
        assert!(h.lambda2_half.unwrap() > 0.0);
        assert!(exact_3colorable(&h.graph).unwrap());
    }

    #[test]
    fn hardness_construction_unsat_is_not_colorable() {
        let mut clauses = Vec::new();
        for s in 0..8u32 {
            clauses.push([
                Lit::new(0, s & 1 != 0),
                Lit::new(1, s & 2 != 0),
                Lit::new(2, s & 4 != 0),
            ]);
        }
        let f = Cnf3::new(3, clauses).unwrap();
        assert!(!sat_brute(&f).unwrap());
        let h = gen_hardness_3col(&f, 3, 23, 4096).unwrap();
        assert!(!exact_3colorable(&h.graph).unwrap());
    }
}
