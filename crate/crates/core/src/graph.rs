//! Graph storage: plain graphs plus E2Lin / Unique Label Cover instances
//! (per-directed-edge offsets in Z_q or permutations over the label set),
//! and the text file format used by the CLI.
//!
//! Adjacency is symmetric by construction: an undirected edge (u,v) occupies
//! one slot in each endpoint's neighbor list, and annotated instances store
//! the payload of direction u->v on u's slot and its inverse on v's slot.

use crate::error::Error;
use crate::Result;
use std::fmt::Write as _;

/// Permutation over labels `0..q`, stored as an image list.
pub type Perm = Box<[u16]>;

/// Invert a permutation given as an image list.
pub fn invert_perm(p: &[u16]) -> Perm {
    let mut inv = vec![0u16; p.len()];
    for (i, &img) in p.iter().enumerate() {
        inv[img as usize] = i as u16;
    }
    inv.into_boxed_slice()
}

/// Undirected graph on dense vertices `0..n` with ordered neighbor lists.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Empty graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Build from an undirected edge list. Self-loops and parallel edges are
    /// accepted in storage; use [`Graph::check_simple`] to reject them.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Add one undirected edge.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        let check = |w: usize| -> Result<()> {
            if w >= n {
                Err(Error::InvalidVertex { vertex: w, n })
            } else {
                Ok(())
            }
        };
        check(u)?;
        check(v)?;
        self.adj[u].push(v as u32);
        if u != v {
            self.adj[v].push(u as u32);
        } else {
            // a self-loop occupies two slots of its endpoint
            self.adj[u].push(v as u32);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.volume() as usize / 2
    }

    /// Total volume `sum_v d(v) = 2m`.
    pub fn volume(&self) -> u64 {
        self.adj.iter().map(|l| l.len() as u64).sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    /// Undirected edge list with u <= v, one entry per edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n() {
            let mut loops = 0;
            for &w in &self.adj[u] {
                let w = w as usize;
                if u < w {
                    out.push((u, w));
                } else if u == w {
                    loops += 1;
                }
            }
            for _ in 0..loops / 2 {
                out.push((u, u));
            }
        }
        out
    }

    /// Error unless every vertex has degree at least one.
    pub fn check_min_degree(&self) -> Result<()> {
        match (0..self.n()).find(|&v| self.degree(v) == 0) {
            Some(v) => Err(Error::Generation(format!("vertex {v} has degree 0"))),
            None => Ok(()),
        }
    }

    /// Error if the graph has a self-loop or a parallel edge.
    pub fn check_simple(&self) -> Result<()> {
        for v in 0..self.n() {
            let mut seen = self.adj[v].clone();
            seen.sort_unstable();
            for w in seen.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::NotSimple(format!(
                        "parallel edge ({v},{})",
                        w[0]
                    )));
                }
            }
            if self.adj[v].iter().any(|&w| w as usize == v) {
                return Err(Error::NotSimple(format!("self-loop at {v}")));
            }
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n()
    }

    /// Connected component ids, numbered in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut next = 0;
        for start in 0..self.n() {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    let w = w as usize;
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }
}

/// Max E2Lin(q) instance: a graph plus an offset in Z_q per directed edge.
/// `offsets[v][i]` annotates the directed edge from `v` to its i-th neighbor;
/// the reverse direction carries the negated offset. Offsets compose along
/// traversal: the edge (u, v) with offset c is satisfied by psi iff
/// psi(v) = psi(u) + c, which is what makes label-extended sections of a
/// satisfying assignment close up.
#[derive(Clone, Debug)]
pub struct E2LinInstance {
    pub graph: Graph,
    pub q: u32,
    offsets: Vec<Vec<u32>>,
}

impl E2LinInstance {
    /// Build from an edge list with one offset per undirected edge (read as
    /// the constraint psi(v) = psi(u) + c on edge (u, v)).
    pub fn from_edges(n: usize, q: u32, edges: &[(usize, usize, u32)]) -> Result<Self> {
        if q == 0 {
            return Err(Error::param("q must be positive"));
        }
        let mut graph = Graph::empty(n);
        let mut offsets = vec![Vec::new(); n];
        for &(u, v, c) in edges {
            if c >= q {
                return Err(Error::param(format!("offset {c} out of Z_{q}")));
            }
            if u == v {
                return Err(Error::NotSimple(format!("self-loop at {u}")));
            }
            graph.add_edge(u, v)?;
            offsets[u].push(c);
            offsets[v].push((q - c) % q);
        }
        Ok(E2LinInstance { graph, q, offsets })
    }

    /// Offset on the directed edge (v, i-th neighbor of v).
    pub fn offset(&self, v: usize, i: usize) -> u32 {
        self.offsets[v][i]
    }

    /// Replace the constraint on the i-th undirected edge (per `graph.edges()`
    /// order is not stable, so callers pass explicit endpoints + slots).
    pub fn set_offset_slot(&mut self, v: usize, i: usize, back: usize, j: usize, c: u32) {
        self.offsets[v][i] = c;
        self.offsets[back][j] = (self.q - c) % self.q;
    }

    /// Fraction of constraints violated by an assignment
    /// (edge (v, w) with offset c is satisfied iff psi(w) = psi(v) + c).
    pub fn violated_fraction(&self, assignment: &[u32]) -> f64 {
        let mut bad = 0usize;
        let mut total = 0usize;
        for v in 0..self.graph.n() {
            for (i, &w) in self.graph.neighbors(v).iter().enumerate() {
                let w = w as usize;
                if v < w {
                    total += 1;
                    let c = self.offsets[v][i];
                    if (assignment[v] + c) % self.q != assignment[w] {
                        bad += 1;
                    }
                }
            }
        }
        bad as f64 / total as f64
    }
}

/// Unique Label Cover instance: a permutation over `[q]` per directed edge.
/// `perms[v][i]` maps v's label to the matching label of its i-th neighbor;
/// the reverse direction stores the inverse permutation, so the constraint on
/// (u, v) reads psi(v) = pi_{uv}(psi(u)).
#[derive(Clone, Debug)]
pub struct UlcInstance {
    pub graph: Graph,
    pub q: u32,
    perms: Vec<Vec<Perm>>,
}

impl UlcInstance {
    /// Build from an edge list carrying the permutation of direction u -> v.
    pub fn from_edges(n: usize, q: u32, edges: &[(usize, usize, Perm)]) -> Result<Self> {
        if q == 0 {
            return Err(Error::param("q must be positive"));
        }
        let mut graph = Graph::empty(n);
        let mut perms: Vec<Vec<Perm>> = vec![Vec::new(); n];
        for (u, v, p) in edges {
            let (u, v) = (*u, *v);
            if u == v {
                return Err(Error::NotSimple(format!("self-loop at {u}")));
            }
            check_perm(p, q)?;
            graph.add_edge(u, v)?;
            perms[u].push(p.clone());
            perms[v].push(invert_perm(p));
        }
        Ok(UlcInstance { graph, q, perms })
    }

    /// Permutation on the directed edge (v, i-th neighbor of v).
    pub fn perm(&self, v: usize, i: usize) -> &[u16] {
        &self.perms[v][i]
    }

    pub fn set_perm_slot(&mut self, v: usize, i: usize, back: usize, j: usize, p: Perm) {
        self.perms[back][j] = invert_perm(&p);
        self.perms[v][i] = p;
    }

    /// Fraction of constraints violated by an assignment (labels in `0..q`).
    pub fn violated_fraction(&self, assignment: &[u16]) -> f64 {
        let mut bad = 0usize;
        let mut total = 0usize;
        for v in 0..self.graph.n() {
            for (i, &w) in self.graph.neighbors(v).iter().enumerate() {
                let w = w as usize;
                if v < w {
                    total += 1;
                    if self.perms[v][i][assignment[v] as usize] != assignment[w] {
                        bad += 1;
                    }
                }
            }
        }
        bad as f64 / total as f64
    }
}

fn check_perm(p: &[u16], q: u32) -> Result<()> {
    if p.len() != q as usize {
        return Err(Error::param(format!(
            "permutation has {} entries, expected {q}",
            p.len()
        )));
    }
    let mut seen = vec![false; q as usize];
    for &img in p {
        if img as u32 >= q || seen[img as usize] {
            return Err(Error::param("image list is not a permutation"));
        }
        seen[img as usize] = true;
    }
    Ok(())
}

/// A parsed instance file: plain graph or annotated CSP instance.
#[derive(Clone, Debug)]
pub enum Instance {
    Plain(Graph),
    E2Lin(E2LinInstance),
    Ulc(UlcInstance),
}

impl Instance {
    pub fn graph(&self) -> &Graph {
        match self {
            Instance::Plain(g) => g,
            Instance::E2Lin(i) => &i.graph,
            Instance::Ulc(i) => &i.graph,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Plain(_) => "plain",
            Instance::E2Lin(_) => "e2lin",
            Instance::Ulc(_) => "ulc",
        }
    }
}

/// Parse the text format. Header `graph <n> <m> plain|e2lin <q>|ulc <q>`,
/// then one line per undirected edge: `u v`, `u v <offset>`, or
/// `u v <q 0-based images>` for the direction u -> v.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::Parse {
            line: 0,
            msg: "empty file".into(),
        })?;
    let err = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.into(),
    };
    let tok: Vec<&str> = header.split_whitespace().collect();
    if tok.len() < 4 || tok[0] != "graph" {
        return Err(err(hline, "expected header `graph <n> <m> <kind>`"));
    }
    let n: usize = tok[1].parse().map_err(|_| err(hline, "bad vertex count"))?;
    let m: usize = tok[2].parse().map_err(|_| err(hline, "bad edge count"))?;
    let parse_q = |t: Option<&&str>| -> Result<u32> {
        t.ok_or_else(|| err(hline, "missing q"))?
            .parse()
            .map_err(|_| err(hline, "bad q"))
    };

    enum Kind {
        Plain,
        E2Lin(u32),
        Ulc(u32),
    }
    let kind = match tok[3] {
        "plain" => Kind::Plain,
        "e2lin" => Kind::E2Lin(parse_q(tok.get(4))?),
        "ulc" => Kind::Ulc(parse_q(tok.get(4))?),
        other => return Err(err(hline, &format!("unknown kind `{other}`"))),
    };

    let mut plain_edges = Vec::new();
    let mut lin_edges = Vec::new();
    let mut ulc_edges = Vec::new();
    let mut count = 0usize;
    for (lno, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() < 2 {
            return Err(err(lno, "expected at least `u v`"));
        }
        let u: usize = f[0].parse().map_err(|_| err(lno, "bad endpoint"))?;
        let v: usize = f[1].parse().map_err(|_| err(lno, "bad endpoint"))?;
        if u >= n || v >= n {
            return Err(err(lno, "endpoint out of range"));
        }
        match &kind {
            Kind::Plain => {
                if f.len() != 2 {
                    return Err(err(lno, "plain edge takes no annotation"));
                }
                plain_edges.push((u, v));
            }
            Kind::E2Lin(q) => {
                if f.len() != 3 {
                    return Err(err(lno, "e2lin edge needs exactly one offset"));
                }
                let c: u32 = f[2].parse().map_err(|_| err(lno, "bad offset"))?;
                if c >= *q {
                    return Err(err(lno, "offset out of Z_q"));
                }
                lin_edges.push((u, v, c));
            }
            Kind::Ulc(q) => {
                if f.len() != 2 + *q as usize {
                    return Err(err(lno, "ulc edge needs q image entries"));
                }
                let mut img = Vec::with_capacity(*q as usize);
                for t in &f[2..] {
                    img.push(t.parse::<u16>().map_err(|_| err(lno, "bad image"))?);
                }
                let p: Perm = img.into_boxed_slice();
                check_perm(&p, *q).map_err(|e| err(lno, &e.to_string()))?;
                ulc_edges.push((u, v, p));
            }
        }
        count += 1;
    }
    if count != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {count}"),
        });
    }
    match kind {
        Kind::Plain => Ok(Instance::Plain(Graph::from_edges(n, &plain_edges)?)),
        Kind::E2Lin(q) => Ok(Instance::E2Lin(E2LinInstance::from_edges(n, q, &lin_edges)?)),
        Kind::Ulc(q) => Ok(Instance::Ulc(UlcInstance::from_edges(n, q, &ulc_edges)?)),
    }
}

/// Serialize an instance in the text format accepted by [`parse_instance`].
pub fn write_instance(inst: &Instance) -> String {
    let g = inst.graph();
    let mut out = String::new();
    match inst {
        Instance::Plain(_) => {
            let _ = writeln!(out, "graph {} {} plain", g.n(), g.m());
            for (u, v) in g.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
        }
        Instance::E2Lin(i) => {
            let _ = writeln!(out, "graph {} {} e2lin {}", g.n(), g.m(), i.q);
            for u in 0..g.n() {
                for (s, &w) in g.neighbors(u).iter().enumerate() {
                    let w = w as usize;
                    if u < w {
                        let _ = writeln!(out, "{u} {w} {}", i.offset(u, s));
                    }
                }
            }
        }
        Instance::Ulc(i) => {
            let _ = writeln!(out, "graph {} {} ulc {}", g.n(), g.m(), i.q);
            for u in 0..g.n() {
                for (s, &w) in g.neighbors(u).iter().enumerate() {
                    let w = w as usize;
                    if u < w {
                        let images: Vec<String> =
                            i.perm(u, s).iter().map(|x| x.to_string()).collect();
                        let _ = writeln!(out, "{u} {w} {}", images.join(" "));
                    }
                }
            }
        }
    }
    out
}
