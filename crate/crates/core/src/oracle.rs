//! Query-counted adjacency-list oracles.
//!
//! Testers see a graph only through this interface: degree queries, i-th
//! neighbor queries and degree-weighted vertex sampling, each bumping an
//! atomic counter by exactly one. Annotated oracles additionally return the
//! payload of the traversed directed edge with the same single query.

use crate::error::Error;
use crate::graph::{E2LinInstance, Graph, UlcInstance};
use crate::Result;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

/// How degree-weighted sampling is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// Sample v with probability d(v)/mu exactly, from the stored degree
    /// array (one query per sample).
    Exact,
    /// Rejection sampling without global preprocessing: draw a uniform
    /// vertex, accept with probability d(v)/d_max. Every attempt issues one
    /// degree query.
    Rejection { d_max: usize },
}

/// The oracle interface all testers run against.
pub trait QueryGraph: Sync {
    /// Number of vertices (known to the algorithm, not a counted query).
    fn vertex_count(&self) -> usize;

    /// Total volume 2m (the model assumes mu_G is known; not a counted query).
    fn volume(&self) -> u64;

    /// Degree of `v`. Counts one query.
    fn degree(&self, v: usize) -> Result<usize>;

    /// The i-th neighbor of `v`. Counts one query.
    fn neighbor(&self, v: usize, i: usize) -> Result<usize>;

    /// A vertex drawn with probability d(v)/mu. Counts one query per
    /// sampling attempt (exactly one in exact mode).
    fn sample_degree_weighted(&self, rng: &mut ChaCha8Rng) -> usize;

    /// Current query tally.
    fn query_count(&self) -> u64;
}

/// Monotone atomic query tally.
#[derive(Debug, Default)]
pub struct QueryCounter(AtomicU64);

impl QueryCounter {
    pub fn new() -> Self {
        QueryCounter(AtomicU64::new(0))
    }

    #[inline]
    pub fn bump(&self) {
        self.0.fetch_add(1, Ordering::Relaxed);
    }

    #[inline]
    pub fn add(&self, k: u64) {
        self.0.fetch_add(k, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

/// Cumulative-degree table for exact degree-weighted sampling.
struct CumDegrees(Vec<u64>);

impl CumDegrees {
    fn build(g: &Graph) -> Self {
        let mut acc = 0u64;
        let mut cum = Vec::with_capacity(g.n());
        for v in 0..g.n() {
            acc += g.degree(v) as u64;
            cum.push(acc);
        }
        CumDegrees(cum)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.0.last().expect("nonempty graph");
        let x = rng.gen_range(0..total);
        self.0.partition_point(|&c| c <= x)
    }
}

macro_rules! bounds_checks {
    ($g:expr, $v:expr) => {{
        let n = $g.n();
        if $v >= n {
            return Err(Error::InvalidVertex { vertex: $v, n });
        }
    }};
}

fn sample_impl(
    g: &Graph,
    cum: &OnceLock<CumDegrees>,
    counter: &QueryCounter,
    mode: SampleMode,
    rng: &mut ChaCha8Rng,
) -> usize {
    match mode {
        SampleMode::Exact => {
            counter.bump();
            cum.get_or_init(|| CumDegrees::build(g)).sample(rng)
        }
        SampleMode::Rejection { d_max } => loop {
            let v = rng.gen_range(0..g.n());
            counter.bump(); // degree query for the acceptance coin
            let d = g.degree(v);
            if rng.gen_range(0..d_max) < d {
                return v;
            }
        },
    }
}

macro_rules! impl_query_graph {
    ($ty:ident) => {
        impl QueryGraph for $ty<'_> {
            fn vertex_count(&self) -> usize {
                self.graph().n()
            }

            fn volume(&self) -> u64 {
                self.graph().volume()
            }

            fn degree(&self, v: usize) -> Result<usize> {
                bounds_checks!(self.graph(), v);
                self.counter.bump();
                Ok(self.graph().degree(v))
            }

            fn neighbor(&self, v: usize, i: usize) -> Result<usize> {
                bounds_checks!(self.graph(), v);
                let d = self.graph().degree(v);
                if i >= d {
                    return Err(Error::IndexOutOfRange {
                        vertex: v,
                        index: i,
                        degree: d,
                    });
                }
                self.counter.bump();
                Ok(self.graph().neighbors(v)[i] as usize)
            }

            fn sample_degree_weighted(&self, rng: &mut ChaCha8Rng) -> usize {
                sample_impl(self.graph(), &self.cum, &self.counter, self.mode, rng)
            }

            fn query_count(&self) -> u64 {
                self.counter.get()
            }
        }
    };
}

/// Counting oracle over a plain graph.
pub struct GraphOracle<'g> {
    graph: &'g Graph,
    counter: QueryCounter,
    cum: OnceLock<CumDegrees>,
    mode: SampleMode,
}

impl<'g> GraphOracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        GraphOracle {
            graph,
            counter: QueryCounter::new(),
            cum: OnceLock::new(),
            mode: SampleMode::Exact,
        }
    }

    pub fn with_mode(graph: &'g Graph, mode: SampleMode) -> Self {
        GraphOracle {
            graph,
            counter: QueryCounter::new(),
            cum: OnceLock::new(),
            mode,
        }
    }

    fn graph(&self) -> &Graph {
        self.graph
    }
}

impl_query_graph!(GraphOracle);

/// Counting oracle over an E2Lin instance; neighbor queries also return the
/// traversed edge's offset.
pub struct E2LinOracle<'g> {
    pub instance: &'g E2LinInstance,
    counter: QueryCounter,
    cum: OnceLock<CumDegrees>,
    mode: SampleMode,
}

impl<'g> E2LinOracle<'g> {
    pub fn new(instance: &'g E2LinInstance) -> Self {
        E2LinOracle {
            instance,
            counter: QueryCounter::new(),
            cum: OnceLock::new(),
            mode: SampleMode::Exact,
        }
    }

    fn graph(&self) -> &Graph {
        &self.instance.graph
    }

    pub fn q(&self) -> u32 {
        self.instance.q
    }

    /// i-th neighbor of v together with the offset on (v, neighbor).
    pub fn neighbor_annotated(&self, v: usize, i: usize) -> Result<(usize, u32)> {
        bounds_checks!(self.graph(), v);
        let d = self.graph().degree(v);
        if i >= d {
            return Err(Error::IndexOutOfRange {
                vertex: v,
                index: i,
                degree: d,
            });
        }
        self.counter.bump();
        Ok((
            self.graph().neighbors(v)[i] as usize,
            self.instance.offset(v, i),
        ))
    }
}

impl_query_graph!(E2LinOracle);

/// Counting oracle over a ULC instance; neighbor queries also return the
/// traversed edge's permutation (v's label to the neighbor's label).
pub struct UlcOracle<'g> {
    pub instance: &'g UlcInstance,
    counter: QueryCounter,
    cum: OnceLock<CumDegrees>,
    mode: SampleMode,
}

impl<'g> UlcOracle<'g> {
    pub fn new(instance: &'g UlcInstance) -> Self {
        UlcOracle {
            instance,
            counter: QueryCounter::new(),
            cum: OnceLock::new(),
            mode: SampleMode::Exact,
        }
    }

    fn graph(&self) -> &Graph {
        &self.instance.graph
    }

    pub fn q(&self) -> u32 {
        self.instance.q
    }

    /// i-th neighbor of v together with the label permutation on (v, neighbor).
    pub fn neighbor_annotated(&self, v: usize, i: usize) -> Result<(usize, &[u16])> {
        bounds_checks!(self.graph(), v);
        let d = self.graph().degree(v);
        if i >= d {
            return Err(Error::IndexOutOfRange {
                vertex: v,
                index: i,
                degree: d,
            });
        }
        self.counter.bump();
        Ok((
            self.graph().neighbors(v)[i] as usize,
            self.instance.perm(v, i),
        ))
    }
}

impl_query_graph!(UlcOracle);

/// Read a whole oracle into a concrete graph by issuing degree and neighbor
/// queries (used by exact reference paths; the cost shows up in the counter).
pub fn materialize(oracle: &impl QueryGraph) -> Result<Graph> {
    let n = oracle.vertex_count();
    let mut g = Graph::empty(n);
    for v in 0..n {
        let d = oracle.degree(v)?;
        for i in 0..d {
            let w = oracle.neighbor(v, i)?;
            if v < w {
                g.add_edge(v, w)?;
            } else if v == w {
                return Err(Error::NotSimple(format!("self-loop at {v}")));
            }
        }
    }
    // parallel edges survive materialization; symmetry is by construction
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::rng::stream;

    #[test]
    fn degree_and_neighbor_examples() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let o = GraphOracle::new(&k2);
        assert_eq!(o.degree(0).unwrap(), 1);
        assert_eq!(o.neighbor(0, 0).unwrap(), 1);

        let c4 = corpus::cycle(4);
        let o = GraphOracle::new(&c4);
        assert_eq!(o.degree(2).unwrap(), 2);

        let pet = corpus::petersen();
        let o = GraphOracle::new(&pet);
        for v in 0..10 {
            assert_eq!(o.degree(v).unwrap(), 3);
        }
    }

    #[test]
    fn query_counter_tracks_every_call() {
        let c4 = corpus::cycle(4);
        let o = GraphOracle::new(&c4);
        assert_eq!(o.query_count(), 0);
        o.degree(0).unwrap();
        assert_eq!(o.query_count(), 1);
        for i in 0..2 {
            o.neighbor(1, i).unwrap();
        }
        assert_eq!(o.query_count(), 3);
        // failed precondition does not count
        assert!(o.neighbor(1, 5).is_err());
        assert!(o.degree(99).is_err());
        assert_eq!(o.query_count(), 3);
    }

    #[test]
    fn annotated_neighbor_returns_inverse_on_reverse_edge() {
        let inst = E2LinInstance::from_edges(2, 3, &[(0, 1, 2)]).unwrap();
        let o = E2LinOracle::new(&inst);
        assert_eq!(o.neighbor_annotated(0, 0).unwrap(), (1, 2));
        assert_eq!(o.neighbor_annotated(1, 0).unwrap(), (0, 1));
        assert_eq!(o.query_count(), 2);
    }

    #[test]
    fn exact_sampling_matches_degree_ratios() {
        // star S_3: center 0 with 3 leaves; center probability 3/6
        let star = corpus::star(3);
        let o = GraphOracle::new(&star);
        let mut rng = stream(11, "sampling");
        let trials = 60_000;
        let mut center = 0u32;
        for _ in 0..trials {
            if o.sample_degree_weighted(&mut rng) == 0 {
                center += 1;
            }
        }
        let p = center as f64 / trials as f64;
        assert!((p - 0.5).abs() < 0.01, "center frequency {p}");
        assert_eq!(o.query_count(), trials as u64);
    }

    #[test]
    fn rejection_sampling_matches_exact_law() {
        let p3 = corpus::path(3);
        let exact = GraphOracle::new(&p3);
        let reject = GraphOracle::with_mode(&p3, SampleMode::Rejection { d_max: 2 });
        let mut r1 = stream(5, "a");
        let mut r2 = stream(5, "b");
        let trials = 40_000;
        let (mut mid_e, mut mid_r) = (0u32, 0u32);
        for _ in 0..trials {
            if exact.sample_degree_weighted(&mut r1) == 1 {
                mid_e += 1;
            }
            if reject.sample_degree_weighted(&mut r2) == 1 {
                mid_r += 1;
            }
        }
        // both should see the middle vertex with probability 2/4
        assert!((mid_e as f64 / trials as f64 - 0.5).abs() < 0.012);
        assert!((mid_r as f64 / trials as f64 - 0.5).abs() < 0.012);
        // rejection mode pays more than one query per sample on average
        assert!(reject.query_count() > exact.query_count());
    }

    #[test]
    fn materialize_round_trips() {
        let pet = corpus::petersen();
        let o = GraphOracle::new(&pet);
        let copy = materialize(&o).unwrap();
        assert_eq!(copy.n(), 10);
        assert_eq!(copy.m(), 15);
        assert_eq!(o.query_count(), (10 + 30) as u64);
    }
}
