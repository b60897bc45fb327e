//! Cut and metric polytopes of graphs, cycle inequalities and the lifting
//! of inequalities on `K_n` along edge-disjoint path systems.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactla::{primitive, rat, IntVec, Rat};
use crate::hypfamilies::{pairs, BInequality};
use crate::polyhedra::{hull, PolyError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0},{1}) is a loop or out of range")]
    BadEdge(usize, usize),
    #[error("edge ({0},{1}) listed twice")]
    DuplicateEdge(usize, usize),
    #[error("|F| = {0} is even")]
    EvenF(usize),
    #[error("edge ({0},{1}) is not on the cycle")]
    NotOnCycle(usize, usize),
    #[error("cycle is not a closed simple walk in the graph")]
    BadCycle,
    #[error("path for pair ({0},{1}) is not a simple path between its terminals")]
    BadPath(usize, usize),
    #[error("paths for pairs ({0},{1}) and ({2},{3}) share an edge")]
    SharedEdge(usize, usize, usize, usize),
    #[error("pair ({0},{1}) has a positive coefficient but its path is not a single edge")]
    PositiveNotEdge(usize, usize),
    #[error("pair ({0},{1}) has a nonzero coefficient but no path")]
    MissingPath(usize, usize),
    #[error("terminals must be distinct vertices of the graph")]
    BadTerminals,
    #[error("graph has {0} vertices; brute force is limited to {1}")]
    Budget(usize, usize),
    #[error("coefficients too large for exact 64-bit evaluation")]
    Overflow,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub const CHECK_BUDGET: usize = 24;
pub const CYCLE_BUDGET: usize = 10;

pub type Edge = (usize, usize);

fn norm(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph; edges stored as `(u, v)` with `u < v`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(GraphError::BadEdge(u, v));
            }
            if !seen.insert(norm(u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        Ok(Graph {
            n,
            edges: seen.into_iter().collect(),
        })
    }

    pub fn complete(n: usize) -> Self {
        Graph {
            n,
            edges: pairs(n).collect(),
        }
    }

    pub fn cycle(n: usize) -> Self {
        let e: Vec<Edge> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &e).unwrap()
    }

    pub fn path(n: usize) -> Self {
        let e: Vec<Edge> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &e).unwrap()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&norm(u, v)).is_ok()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&norm(u, v)).ok()
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort();
        out
    }

    /// Replaces the edge `uv` by a path `u–w–v` through the new vertex
    /// `w = n`.
    pub fn subdivide(&self, u: usize, v: usize) -> Result<(Graph, usize), GraphError> {
        let Some(k) = self.edge_index(u, v) else {
            return Err(GraphError::BadEdge(u, v));
        };
        let w = self.n;
        let mut edges = self.edges.clone();
        edges.remove(k);
        edges.push((u, w));
        edges.push((w, v));
        Ok((Graph::new(self.n + 1, &edges)?, w))
    }
}

/// Restrictions of all cut semimetrics to the edges, deduplicated, sorted.
pub fn graph_cuts(g: &Graph) -> Vec<Vec<u8>> {
    let mut out: BTreeSet<Vec<u8>> = BTreeSet::new();
    let count = if g.n == 0 { 1 } else { 1u64 << (g.n - 1) };
    for m in 0..count {
        let set = m << 1;
        out.insert(
            g.edges
                .iter()
                .map(|&(u, v)| ((set >> u & 1) ^ (set >> v & 1)) as u8)
                .collect(),
        );
    }
    out.into_iter().collect()
}

/// `Σ a_e x_e ≤ rhs` on edges `e = (u, v)`, `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeIneq {
    pub coef: BTreeMap<Edge, Rat>,
    pub rhs: Rat,
}

impl EdgeIneq {
    pub fn new(terms: impl IntoIterator<Item = (Edge, Rat)>, rhs: Rat) -> Self {
        let mut coef = BTreeMap::new();
        for ((u, v), a) in terms {
            *coef.entry(norm(u, v)).or_insert_with(Rat::zero) += a;
        }
        coef.retain(|_, a: &mut Rat| !a.is_zero());
        EdgeIneq { coef, rhs }
    }

    /// `Σ b_i b_j x_ij ≤ s(s+1)` on `K_n`.
    pub fn from_b(b: &BInequality) -> Self {
        let n = b.n();
        EdgeIneq::new(
            pairs(n).map(|(i, j)| ((i, j), rat(b.b[i] * b.b[j]))),
            rat(b.rhs),
        )
    }

    pub fn get(&self, u: usize, v: usize) -> Rat {
        self.coef.get(&norm(u, v)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn lhs_on_set(&self, set: u64) -> Rat {
        self.coef
            .iter()
            .filter(|((u, v), _)| (set >> u & 1) != (set >> v & 1))
            .map(|(_, a)| a.clone())
            .sum()
    }

    /// Primitive integer `(rhs, −a)`: the same form as homogenised hull
    /// facets `a₀ + a·x ≥ 0`, over the given edge order.
    pub fn homogeneous(&self, edges: &[Edge]) -> IntVec {
        let mut l = self.rhs.denom().clone();
        for a in self.coef.values() {
            l = l.lcm(a.denom());
        }
        let s = Rat::from_integer(l);
        let mut v = vec![(&self.rhs * &s).to_integer()];
        for &(u, w) in edges {
            v.push(-(self.get(u, w) * &s).to_integer());
        }
        primitive(v)
    }
}

/// `x(F) − x(C ∖ F) ≤ |F| − 1` for a cycle given by its vertex sequence.
pub fn cycle_ineq(cycle: &[usize], f: &[Edge]) -> Result<EdgeIneq, GraphError> {
    let k = cycle.len();
    if k < 3 || cycle.iter().collect::<HashSet<_>>().len() != k {
        return Err(GraphError::BadCycle);
    }
    let cedges: Vec<Edge> = (0..k).map(|i| norm(cycle[i], cycle[(i + 1) % k])).collect();
    let fset: BTreeSet<Edge> = f.iter().map(|&(u, v)| norm(u, v)).collect();
    for &(u, v) in &fset {
        if !cedges.contains(&(u, v)) {
            return Err(GraphError::NotOnCycle(u, v));
        }
    }
    if fset.len() % 2 == 0 {
        return Err(GraphError::EvenF(fset.len()));
    }
    Ok(EdgeIneq::new(
        cedges
            .iter()
            .map(|e| (*e, if fset.contains(e) { rat(1) } else { rat(-1) })),
        rat(fset.len() as i64 - 1),
    ))
}

/// Terminals `v_0…v_{n−1}` in `G` and a path (vertex sequence from
/// `v_i` to `v_j`) for pairs `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSystem {
    pub terminals: Vec<usize>,
    pub paths: BTreeMap<Edge, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifted {
    pub ineq: EdgeIneq,
    pub source: EdgeIneq,
    pub system: PathSystem,
}

/// `Σ a_ij x(P_ij) ≤ C` on `G`.
pub fn lift_ineq(f: &EdgeIneq, sys: &PathSystem, g: &Graph) -> Result<Lifted, GraphError> {
    let t = &sys.terminals;
    if t.iter().any(|&v| v >= g.n) || t.iter().collect::<HashSet<_>>().len() != t.len() {
        return Err(GraphError::BadTerminals);
    }
    let mut used: BTreeMap<Edge, Edge> = BTreeMap::new();
    let mut terms = Vec::new();
    for (&(i, j), a) in &f.coef {
        let Some(path) = sys.paths.get(&(i, j)) else {
            return Err(GraphError::MissingPath(i, j));
        };
        let ok_ends = path.first() == Some(&t[i]) && path.last() == Some(&t[j]);
        let simple = path.iter().collect::<HashSet<_>>().len() == path.len();
        if !ok_ends || !simple || path.len() < 2 {
            return Err(GraphError::BadPath(i, j));
        }
        if a.is_positive() && path.len() != 2 {
            return Err(GraphError::PositiveNotEdge(i, j));
        }
        for w in path.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(GraphError::BadPath(i, j));
            }
            let e = norm(w[0], w[1]);
            if let Some(&(p, q)) = used.get(&e) {
                return Err(GraphError::SharedEdge(p, q, i, j));
            }
            used.insert(e, (i, j));
            terms.push((e, a.clone()));
        }
    }
    Ok(Lifted {
        ineq: EdgeIneq::new(terms, f.rhs.clone()),
        source: f.clone(),
        system: sys.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validity {
    pub valid: bool,
    pub max_lhs: Rat,
    /// A cut (bitmask, vertex 0 outside) attaining `max_lhs`; least mask on
    /// ties.
    pub argmax: u64,
}

/// Maximises the left-hand side over all cuts of `g`.
pub fn check_valid(ineq: &EdgeIneq, g: &Graph) -> Result<Validity, GraphError> {
    if g.n > CHECK_BUDGET {
        return Err(GraphError::Budget(g.n, CHECK_BUDGET));
    }
    for &(u, v) in ineq.coef.keys() {
        if !g.has_edge(u, v) {
            return Err(GraphError::BadEdge(u, v));
        }
    }
    let mut l = BigInt::one();
    for a in ineq.coef.values() {
        l = l.lcm(a.denom());
    }
    let scale = Rat::from_integer(l.clone());
    let to_i64 = |r: &Rat| i64::try_from((r * &scale).to_integer()).map_err(|_| GraphError::Overflow);
    let terms: Vec<(u32, u32, i64)> = ineq
        .coef
        .iter()
        .map(|(&(u, v), a)| Ok((u as u32, v as u32, to_i64(a)?)))
        .collect::<Result<_, GraphError>>()?;
    let bound: i64 = terms.iter().map(|t| t.2.abs()).sum();
    if bound > i64::MAX / 2 {
        return Err(GraphError::Overflow);
    }
    let count = if g.n == 0 { 1u64 } else { 1u64 << (g.n - 1) };
    let eval = |m: u64| -> i64 {
        let set = m << 1;
        terms
            .iter()
            .filter(|(u, v, _)| (set >> u & 1) != (set >> v & 1))
            .map(|t| t.2)
            .sum()
    };
    let (best, arg) = (0..count)
        .into_par_iter()
        .map(|m| (eval(m), std::cmp::Reverse(m)))
        .max()
        .unwrap();
    let max_lhs = Rat::new(BigInt::from(best), l);
    Ok(Validity {
        valid: max_lhs <= ineq.rhs,
        max_lhs,
        argmax: arg.0 << 1,
    })
}

/// Induced (chordless) cycles of length ≥ 3, each as a vertex sequence
/// starting at its least vertex with `second < last`; sorted.
pub fn chordless_cycles(g: &Graph) -> Result<Vec<Vec<usize>>, GraphError> {
    if g.n > CYCLE_BUDGET {
        return Err(GraphError::Budget(g.n, CYCLE_BUDGET));
    }
    let nb: Vec<Vec<usize>> = (0..g.n).map(|v| g.neighbours(v)).collect();
    let mut out = Vec::new();
    for s in 0..g.n {
        let mut path = vec![s];
        extend_cycles(g, &nb, s, &mut path, &mut out);
    }
    out.sort();
    Ok(out)
}

fn extend_cycles(g: &Graph, nb: &[Vec<usize>], s: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *path.last().unwrap();
    for &w in &nb[last] {
        if w <= s || path.contains(&w) {
            continue;
        }
        // a chord from w to an interior path vertex can never be removed
        let interior = &path[1.min(path.len() - 1)..path.len() - 1];
        if interior.iter().any(|&p| g.has_edge(p, w)) {
            continue;
        }
        path.push(w);
        if path.len() >= 3 && g.has_edge(w, s) {
            if path[1] < w {
                out.push(path.clone());
            }
        } else {
            extend_cycles(g, nb, s, path, out);
        }
        path.pop();
    }
}

/// Cycle inequalities over chordless cycles, then `−x_e ≤ 0` and
/// `x_e ≤ 1` for every edge.
pub fn metp_graph(g: &Graph) -> Result<Vec<EdgeIneq>, GraphError> {
    let mut out = Vec::new();
    for c in chordless_cycles(g)? {
        let k = c.len();
        let ce: Vec<Edge> = (0..k).map(|i| norm(c[i], c[(i + 1) % k])).collect();
        for mask in 0..1u32 << k {
            if mask.count_ones() % 2 == 1 {
                let f: Vec<Edge> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| ce[i]).collect();
                out.push(cycle_ineq(&c, &f)?);
            }
        }
    }
    for &e in &g.edges {
        out.push(EdgeIneq::new([(e, rat(-1))], rat(0)));
        out.push(EdgeIneq::new([(e, rat(1))], rat(1)));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullComparison {
    pub equal: bool,
    pub hull_facets: usize,
    /// Hull facets missing from the cycle description, as `(a₀, a)`.
    pub missing: Vec<IntVec>,
}

/// Compares the facets of the hull of the graph cuts with the cycle
/// description.
pub fn cutp_equals_metp(g: &Graph) -> Result<HullComparison, GraphError> {
    let metp: HashSet<IntVec> = metp_graph(g)?
        .iter()
        .map(|f| f.homogeneous(&g.edges))
        .collect();
    let pts: Vec<Vec<Rat>> = graph_cuts(g)
        .iter()
        .map(|c| c.iter().map(|&x| rat(x as i64)).collect())
        .collect();
    if g.edges.is_empty() {
        return Ok(HullComparison {
            equal: true,
            hull_facets: 0,
            missing: vec![],
        });
    }
    let p = hull(&pts)?;
    let missing: Vec<IntVec> = p
        .homogeneous_facets()
        .iter()
        .filter(|f| !metp.contains(*f))
        .cloned()
        .collect();
    Ok(HullComparison {
        equal: missing.is_empty() && p.equations().is_empty(),
        hull_facets: p.homogeneous_facets().len(),
        missing,
    })
}

/// Left-hand side at a 0/1 edge vector.
pub fn eval_on_edges(ineq: &EdgeIneq, edges: &[Edge], x: &[u8]) -> Rat {
    edges
        .iter()
        .zip(x)
        .filter(|(_, &b)| b == 1)
        .map(|(&(u, v), _)| ineq.get(u, v))
        .sum()
}
