//! Exact 3-colorability by propagation-heavy backtracking, and brute-force
//! SAT for small 3-CNF formulas.

use crate::error::Error;
use crate::gen::Cnf3;
use crate::graph::Graph;
use crate::Result;

const COLOR_LIMIT: usize = 4000;
const ALL: u8 = 0b111;

/// Exact 3-colorability decision: diamond contraction to a fixpoint, then
/// backtracking with unit propagation.
///
/// The contraction step applies a sound inference: for an edge (a, b), every
/// common neighbor of a and b must take the one color outside {c(a), c(b)},
/// so all common neighbors are equal in every proper 3-coloring (and an edge
/// between two of them is a contradiction). Gadget-style graphs collapse
/// dramatically under this rule.
pub fn exact_3colorable(g: &Graph) -> Result<bool> {
    if g.n() > COLOR_LIMIT {
        return Err(Error::BruteForceLimit(format!(
            "n = {} > {COLOR_LIMIT} for 3-coloring",
            g.n()
        )));
    }
    g.check_simple()?;
    if g.n() == 0 {
        return Ok(true);
    }
    let g = match diamond_contract(g) {
        None => return Ok(false),
        Some(contracted) => contracted,
    };
    let n = g.n();
    if n == 0 {
        return Ok(true);
    }
    let mut avail = vec![ALL; n];
    let mut colored = vec![false; n];

    // break color symmetry: pin vertex 0, and one neighbor if present
    if !assign(&g, &mut avail, &mut colored, 0, 0b001) {
        return Ok(false);
    }
    if let Some(&w) = g.neighbors(0).first() {
        let w = w as usize;
        if !colored[w] {
            if avail[w] & 0b010 == 0 {
                return Ok(false);
            }
            if !assign(&g, &mut avail, &mut colored, w, 0b010) {
                return Ok(false);
            }
        }
    }
    Ok(search(&g, &mut avail, &mut colored))
}

/// Merge classes of provably-equal vertices until no diamond rule fires.
/// Returns None when a contradiction (an edge inside an equal class) shows
/// the graph is not 3-colorable.
fn diamond_contract(g: &Graph) -> Option<Graph> {
    let mut current = simple_copy(g);
    loop {
        let n = current.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            let mut root = x;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = x;
            while parent[cur] != root {
                let next = parent[cur];
                parent[cur] = root;
                cur = next;
            }
            root
        }
        let mut merged = false;
        let neighbor_sets: Vec<std::collections::HashSet<u32>> = (0..n)
            .map(|v| current.neighbors(v).iter().copied().collect())
            .collect();
        for a in 0..n {
            for &b in current.neighbors(a) {
                let b = b as usize;
                if a >= b {
                    continue;
                }
                let common: Vec<usize> = current
                    .neighbors(a)
                    .iter()
                    .filter(|w| neighbor_sets[b].contains(w))
                    .map(|&w| w as usize)
                    .collect();
                for pair in common.windows(2) {
                    let (u, v) = (find(&mut parent, pair[0]), find(&mut parent, pair[1]));
                    if u != v {
                        parent[u] = v;
                        merged = true;
                    }
                }
            }
        }
        if !merged {
            return Some(current);
        }
        // rebuild the contracted graph; an intra-class edge is a conflict
        let mut label = vec![usize::MAX; n];
        let mut next = 0usize;
        for v in 0..n {
            let root = find(&mut parent, v);
            if label[root] == usize::MAX {
                label[root] = next;
                next += 1;
            }
            label[v] = label[root];
        }
        let mut edges = std::collections::HashSet::new();
        for u in 0..n {
            for &w in current.neighbors(u) {
                let (a, b) = (label[u], label[w as usize]);
                if a == b {
                    return None;
                }
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let edge_list: Vec<(usize, usize)> = edges.into_iter().collect();
        current = Graph::from_edges(next, &edge_list).expect("contracted graph");
    }
}

/// Copy without parallel edges (the contraction loop assumes set semantics).
fn simple_copy(g: &Graph) -> Graph {
    let mut edges = std::collections::HashSet::new();
    for u in 0..g.n() {
        for &w in g.neighbors(u) {
            let w = w as usize;
            if u != w {
                edges.insert((u.min(w), u.max(w)));
            }
        }
    }
    let list: Vec<(usize, usize)> = edges.into_iter().collect();
    Graph::from_edges(g.n(), &list).expect("simple copy")
}

/// Assign a color bit to v and propagate singleton domains. Returns false on
/// a wipe-out. Mutates avail/colored; callers snapshot for backtracking.
fn assign(g: &Graph, avail: &mut [u8], colored: &mut [bool], v: usize, color_bit: u8) -> bool {
    let mut queue = vec![(v, color_bit)];
    while let Some((v, bit)) = queue.pop() {
        if colored[v] {
            if avail[v] != bit {
                return false;
            }
            continue;
        }
        if avail[v] & bit == 0 {
            return false;
        }
        avail[v] = bit;
        colored[v] = true;
        for &w in g.neighbors(v) {
            let w = w as usize;
            if colored[w] {
                if avail[w] == bit {
                    return false;
                }
                continue;
            }
            let before = avail[w];
            let after = before & !bit;
            if after == 0 {
                return false;
            }
            avail[w] = after;
            if after.count_ones() == 1 && before.count_ones() != 1 {
                queue.push((w, after));
            }
        }
    }
    true
}

fn search(g: &Graph, avail: &mut [u8], colored: &mut [bool], ) -> bool {
    // most-constrained uncolored vertex, degree as tiebreak
    let mut pick = usize::MAX;
    let mut pick_key = (u32::MAX, 0usize);
    for v in 0..g.n() {
        if !colored[v] {
            let key = (avail[v].count_ones(), usize::MAX - g.degree(v));
            if key < pick_key {
                pick_key = key;
                pick = v;
            }
        }
    }
    if pick == usize::MAX {
        return true; // everything colored
    }
    let choices = avail[pick];
    for c in 0..3u8 {
        let bit = 1 << c;
        if choices & bit == 0 {
            continue;
        }
        let snap_avail = avail.to_vec();
        let snap_colored = colored.to_vec();
        if assign(g, avail, colored, pick, bit) && search(g, avail, colored) {
            return true;
        }
        avail.copy_from_slice(&snap_avail);
        colored.copy_from_slice(&snap_colored);
    }
    false
}

/// Brute-force satisfiability of a 3-CNF with at most 20 variables.
pub fn sat_brute(f: &Cnf3) -> Result<bool> {
    if f.n_vars > 20 {
        return Err(Error::BruteForceLimit(format!(
            "{} variables > 20 for SAT enumeration",
            f.n_vars
        )));
    }
    for bits in 0u32..(1u32 << f.n_vars) {
        if f.clauses.iter().all(|cl| {
            cl.iter()
                .any(|lit| (bits >> lit.var) & 1 == u32::from(!lit.negated))
        }) {
            return Ok(true);
        }
    }
    Ok(f.clauses.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::gen::{Cnf3, Lit};

    #[test]
    fn coloring_basics() {
        assert!(exact_3colorable(&corpus::complete(3)).unwrap());
        assert!(!exact_3colorable(&corpus::complete(4)).unwrap());
        assert!(exact_3colorable(&corpus::petersen()).unwrap());
        assert!(exact_3colorable(&corpus::cycle(5)).unwrap());
        // odd wheel W_5 needs 4 colors
        assert!(!exact_3colorable(&corpus::wheel(5)).unwrap());
        assert!(exact_3colorable(&corpus::wheel(6)).unwrap());
    }

    #[test]
    fn sat_brute_basics() {
        let f = Cnf3::new(3, vec![[Lit::pos(0), Lit::pos(1), Lit::pos(2)]]).unwrap();
        assert!(sat_brute(&f).unwrap());
        // all eight sign patterns over three variables: unsatisfiable
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
    }
}
