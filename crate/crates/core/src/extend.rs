//! Label-extended graph views.
//!
//! The label-extended graph of an E2Lin instance has vertex set V x Z_q and
//! edges ((u,i),(v,i+c_uv)); the ULC version routes labels through each
//! edge's permutation. These views answer oracle queries on the extension
//! by making exactly one query to the base oracle, without materializing
//! anything. Extended vertices are encoded as `base * q + label`.

use crate::error::Error;
use crate::oracle::{E2LinOracle, QueryGraph, UlcOracle};
use crate::Result;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[inline]
pub fn encode(base: usize, label: u32, q: u32) -> usize {
    base * q as usize + label as usize
}

#[inline]
pub fn decode(idx: usize, q: u32) -> (usize, u32) {
    (idx / q as usize, (idx % q as usize) as u32)
}

/// Label-extended view of an E2Lin oracle.
pub struct E2LinExtended<'a, 'g> {
    base: &'a E2LinOracle<'g>,
}

impl<'a, 'g> E2LinExtended<'a, 'g> {
    pub fn new(base: &'a E2LinOracle<'g>) -> Self {
        E2LinExtended { base }
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }
}

impl QueryGraph for E2LinExtended<'_, '_> {
    fn vertex_count(&self) -> usize {
        self.base.vertex_count() * self.base.q() as usize
    }

    fn volume(&self) -> u64 {
        self.base.volume() * self.base.q() as u64
    }

    fn degree(&self, v: usize) -> Result<usize> {
        let (b, _) = self.check(v)?;
        self.base.degree(b)
    }

    fn neighbor(&self, v: usize, i: usize) -> Result<usize> {
        let (b, label) = self.check(v)?;
        let q = self.base.q();
        let (u, c) = self.base.neighbor_annotated(b, i)?;
        Ok(encode(u, (label + c) % q, q))
    }

    fn sample_degree_weighted(&self, rng: &mut ChaCha8Rng) -> usize {
        let b = self.base.sample_degree_weighted(rng);
        let label = rng.gen_range(0..self.base.q());
        encode(b, label, self.base.q())
    }

    fn query_count(&self) -> u64 {
        self.base.query_count()
    }
}

impl E2LinExtended<'_, '_> {
    fn check(&self, v: usize) -> Result<(usize, u32)> {
        let n = self.vertex_count();
        if v >= n {
            return Err(Error::InvalidVertex { vertex: v, n });
        }
        Ok(decode(v, self.base.q()))
    }
}

/// Label-extended view of a ULC oracle; traversing (u,i) -> (v, pi_uv(i)).
pub struct UlcExtended<'a, 'g> {
    base: &'a UlcOracle<'g>,
}

impl<'a, 'g> UlcExtended<'a, 'g> {
    pub fn new(base: &'a UlcOracle<'g>) -> Self {
        UlcExtended { base }
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }
}

impl QueryGraph for UlcExtended<'_, '_> {
    fn vertex_count(&self) -> usize {
        self.base.vertex_count() * self.base.q() as usize
    }

    fn volume(&self) -> u64 {
        self.base.volume() * self.base.q() as u64
    }

    fn degree(&self, v: usize) -> Result<usize> {
        let (b, _) = self.check(v)?;
        self.base.degree(b)
    }

    fn neighbor(&self, v: usize, i: usize) -> Result<usize> {
        let (b, label) = self.check(v)?;
        let q = self.base.q();
        let (u, perm) = self.base.neighbor_annotated(b, i)?;
        Ok(encode(u, perm[label as usize] as u32, q))
    }

    fn sample_degree_weighted(&self, rng: &mut ChaCha8Rng) -> usize {
        let b = self.base.sample_degree_weighted(rng);
        let label = rng.gen_range(0..self.base.q());
        encode(b, label, self.base.q())
    }

    fn query_count(&self) -> u64 {
        self.base.query_count()
    }
}

impl UlcExtended<'_, '_> {
    fn check(&self, v: usize) -> Result<(usize, u32)> {
        let n = self.vertex_count();
        if v >= n {
            return Err(Error::InvalidVertex { vertex: v, n });
        }
        Ok(decode(v, self.base.q()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_planted_e2lin;
    use crate::graph::{E2LinInstance, Perm, UlcInstance};
    use crate::oracle::materialize;
    use crate::rng::stream;

    #[test]
    fn single_edge_e2lin_expands_to_two_disjoint_edges() {
        let inst = E2LinInstance::from_edges(2, 2, &[(0, 1, 1)]).unwrap();
        let o = E2LinOracle::new(&inst);
        let ext = E2LinExtended::new(&o);
        assert_eq!(ext.vertex_count(), 4);
        assert_eq!(ext.volume(), 4);
        // (u=0,l=0) -- (v=1,l=1) and (0,1) -- (1,0)
        assert_eq!(ext.neighbor(encode(0, 0, 2), 0).unwrap(), encode(1, 1, 2));
        assert_eq!(ext.neighbor(encode(0, 1, 2), 0).unwrap(), encode(1, 0, 2));
        assert_eq!(ext.neighbor(encode(1, 1, 2), 0).unwrap(), encode(0, 0, 2));
    }

    #[test]
    fn q_one_extension_is_isomorphic_to_base() {
        let inst = E2LinInstance::from_edges(3, 1, &[(0, 1, 0), (1, 2, 0)]).unwrap();
        let o = E2LinOracle::new(&inst);
        let ext = E2LinExtended::new(&o);
        assert_eq!(ext.vertex_count(), 3);
        let g = materialize(&ext).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn ulc_swap_edge_crosses_labels() {
        let swap: Perm = vec![1u16, 0].into_boxed_slice();
        let inst = UlcInstance::from_edges(2, 2, &[(0, 1, swap)]).unwrap();
        let o = UlcOracle::new(&inst);
        let ext = UlcExtended::new(&o);
        assert_eq!(ext.neighbor(encode(0, 0, 2), 0).unwrap(), encode(1, 1, 2));
        assert_eq!(ext.neighbor(encode(1, 0, 2), 0).unwrap(), encode(0, 1, 2));
    }

    #[test]
    fn planted_extension_splits_into_q_components() {
        let p = gen_planted_e2lin(8, 3, 3, 0.0, 21, None, 64).unwrap();
        let o = E2LinOracle::new(&p.instance);
        let ext = E2LinExtended::new(&o);
        let g = materialize(&ext).unwrap();
        let comp = g.components();
        let distinct = comp.iter().collect::<std::collections::HashSet<_>>().len();
        assert_eq!(distinct, 3);
        // each shifted copy of the planted assignment lies in one component
        for shift in 0..3u32 {
            let ids: std::collections::HashSet<usize> = (0..8)
                .map(|v| comp[encode(v, (p.assignment[v] + shift) % 3, 3)])
                .collect();
            assert_eq!(ids.len(), 1, "shift {shift} spans components");
        }
    }

    #[test]
    fn volume_identity_and_degree_preservation() {
        let p = gen_planted_e2lin(10, 4, 2, 0.2, 22, None, 64).unwrap();
        let o = E2LinOracle::new(&p.instance);
        let ext = E2LinExtended::new(&o);
        assert_eq!(ext.volume(), 2 * p.instance.graph.volume());
        for v in 0..ext.vertex_count() {
            let (b, _) = decode(v, 2);
            assert_eq!(
                ext.degree(v).unwrap(),
                p.instance.graph.degree(b),
                "extended degree mismatch"
            );
        }
    }

    #[test]
    fn sampling_uses_one_base_query() {
        let inst = E2LinInstance::from_edges(2, 2, &[(0, 1, 1)]).unwrap();
        let o = E2LinOracle::new(&inst);
        let ext = E2LinExtended::new(&o);
        let mut rng = stream(9, "ext");
        ext.sample_degree_weighted(&mut rng);
        assert_eq!(ext.query_count(), 1);
    }
}
