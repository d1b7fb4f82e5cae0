//! Exact clique number of P_q.
//!
//! The affine maps x -> a*x + b with a a nonzero square act transitively on the
//! edges of P_q, so some maximum clique contains the edge {0, 1}. The search
//! therefore runs on the subgraph induced by N(0) ∩ N(1) and adds two.
//!
//! The search has two phases. The first is a branch-and-bound over bitset
//! candidate sets, pruned by greedy colouring, which fixes the clique number.
//! The second walks candidates in ascending order and returns the
//! lexicographically smallest clique of that size, so the witness does not
//! depend on how the first phase was scheduled.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::paley::PaleyGraph;

/// Largest order accepted by [`max_clique_naive`] unless a cap is given.
pub const NAIVE_CAP: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    BranchAndBound,
    NaiveOracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueResult {
    pub s: usize,
    /// Lexicographically smallest maximum clique, ascending.
    pub witness: Vec<usize>,
    /// Search-tree nodes over both phases. Deterministic only for a single worker.
    pub nodes_explored: u64,
    pub method: Method,
}

pub fn is_clique(b: &[usize], g: &PaleyGraph) -> bool {
    b.iter()
        .enumerate()
        .all(|(i, &x)| b[i + 1..].iter().all(|&y| x != y && g.adjacent(x, y)))
}

/// True iff no vertex outside `b` is adjacent to every vertex of `b`.
pub fn is_maximal(b: &[usize], g: &PaleyGraph) -> Result<bool> {
    if !is_clique(b, g) {
        return Err(Error::NotAClique);
    }
    let mut common = BitSet::full(g.order());
    for &x in b {
        common.intersect_with(g.neighbors(x));
    }
    Ok(common.is_empty())
}

/// Single-worker exact search; `nodes_explored` is reproducible.
pub fn max_clique(g: &PaleyGraph) -> CliqueResult {
    max_clique_with(g, 1)
}

/// Exact search with top-level branches spread over `workers` threads.
/// `s` and `witness` do not depend on `workers`.
pub fn max_clique_with(g: &PaleyGraph, workers: usize) -> CliqueResult {
    debug_assert!(g.order() >= 5 && g.adjacent(0, 1));
    // ascending, so local index order is vertex order
    let local: Vec<usize> = g.neighbors(0).intersection(g.neighbors(1)).iter().collect();
    let adj = induced(g, &local);

    let omega = clique_number(g, &local, &adj, workers);
    let phase2 = Search::new(&adj);
    let mut found = Vec::with_capacity(omega.size);
    let ok = phase2.lex_first(&mut found, BitSet::full(local.len()), omega.size);
    assert!(ok, "a clique of the optimal size must exist");

    let mut witness = vec![0, 1];
    witness.extend(found.iter().map(|&i| local[i]));
    CliqueResult {
        s: witness.len(),
        witness,
        nodes_explored: omega.nodes + phase2.nodes.load(Ordering::Relaxed),
        method: Method::BranchAndBound,
    }
}

fn induced(g: &PaleyGraph, vertices: &[usize]) -> Vec<BitSet> {
    vertices
        .iter()
        .map(|&x| {
            BitSet::from_indices(
                vertices.len(),
                (0..vertices.len()).filter(|&j| g.adjacent(x, vertices[j])),
            )
        })
        .collect()
}

struct Omega {
    size: usize,
    nodes: u64,
}

/// Clique number of the subgraph on `local` (the common neighbours of 0 and 1).
///
/// Every ordered triple (a, b, c) of a clique maps to (0, 1, y) under the
/// automorphism x -> (x - a)/(b - a), with y = (c - a)/(b - a), and affine maps
/// preserve every such ratio. So some maximum clique contains 0, 1 and m, where
/// m is the smallest ratio over all its ordered triples, and every ratio among
/// its members is at least m. Branch m is restricted to those members.
fn clique_number(g: &PaleyGraph, local: &[usize], adj: &[BitSet], workers: usize) -> Omega {
    let n = local.len();
    if n == 0 {
        return Omega { size: 0, nodes: 0 };
    }
    let field = g.field();
    let inverses: Vec<usize> = (0..field.order())
        .map(|x| if x == 0 { 0 } else { field.inv_idx(x) })
        .collect();
    let ratio = |u: usize, v: usize, w: usize| {
        field.mul_idx(field.sub_idx(w, u), inverses[field.sub_idx(v, u)])
    };
    let all_ratios_at_least = |pts: &[usize], m: usize| {
        pts.iter().all(|&u| {
            pts.iter()
                .all(|&v| v == u || pts.iter().all(|&w| w == u || w == v || ratio(u, v, w) >= m))
        })
    };

    // bit order for the search: descending local degree, ties by vertex
    let mut rank: Vec<usize> = (0..n).collect();
    rank.sort_by_key(|&i| (std::cmp::Reverse(adj[i].count()), i));
    let ordered: Vec<usize> = rank.iter().map(|&i| local[i]).collect();
    let search_adj = induced(g, &ordered);
    let search = Search::new(&search_adj);

    let branch = |(pos, &m): (usize, &usize)| {
        let _ = pos;
        if !all_ratios_at_least(&[0, 1, m], m) {
            return;
        }
        search.nodes.fetch_add(1, Ordering::Relaxed);
        let candidates = (0..n).filter(|&j| {
            let z = ordered[j];
            z > m && g.adjacent(m, z) && {
                let pts = [0, 1, m, z];
                // triples avoiding z were checked above
                all_ratios_at_least(&pts, m)
            }
        });
        let p = BitSet::from_indices(n, candidates);
        search.expand(1, p);
    };
    if workers <= 1 {
        local.iter().enumerate().for_each(branch);
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| local.par_iter().enumerate().for_each(branch));
    }
    Omega {
        size: search.best.load(Ordering::Relaxed),
        nodes: search.nodes.load(Ordering::Relaxed),
    }
}

struct Search<'a> {
    adj: &'a [BitSet],
    best: AtomicUsize,
    nodes: AtomicU64,
}

impl<'a> Search<'a> {
    fn new(adj: &'a [BitSet]) -> Self {
        Search {
            adj,
            best: AtomicUsize::new(0),
            nodes: AtomicU64::new(0),
        }
    }

    /// Greedy colouring of `p` in bit order: colour classes are grown one at a
    /// time as maximal independent sets. Only vertices whose colour is at least
    /// `kmin` are returned, grouped by ascending colour (1-based); the others
    /// cannot complete a clique that beats the incumbent.
    fn color_sort(&self, p: &BitSet, kmin: usize) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = p.clone();
        let mut class = BitSet::new(p.len());
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            class.clone_from(&uncolored);
            while let Some(v) = class.first() {
                uncolored.remove(v);
                class.remove(v);
                class.difference_with(&self.adj[v]);
                if color >= kmin {
                    order.push(v);
                    colors.push(color);
                }
            }
        }
        (order, colors)
    }

    fn color_count(&self, p: &BitSet) -> usize {
        let mut uncolored = p.clone();
        let mut class = BitSet::new(p.len());
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            class.clone_from(&uncolored);
            while let Some(v) = class.first() {
                uncolored.remove(v);
                class.remove(v);
                class.difference_with(&self.adj[v]);
            }
        }
        color
    }

    fn expand(&self, depth: usize, mut p: BitSet) {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        if p.is_empty() {
            self.best.fetch_max(depth, Ordering::Relaxed);
            return;
        }
        let kmin = (self.best.load(Ordering::Relaxed) + 1).saturating_sub(depth);
        let (order, colors) = self.color_sort(&p, kmin);
        for i in (0..order.len()).rev() {
            if depth + colors[i] <= self.best.load(Ordering::Relaxed) {
                return;
            }
            let v = order[i];
            let next = p.intersection(&self.adj[v]);
            self.expand(depth + 1, next);
            p.remove(v);
        }
    }

    /// Lexicographically smallest clique of size `need` inside `p`, appended to `cur`.
    fn lex_first(&self, cur: &mut Vec<usize>, mut p: BitSet, need: usize) -> bool {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        if need == 0 {
            return true;
        }
        if p.count() < need || self.color_count(&p) < need {
            return false;
        }
        let candidates: Vec<usize> = p.iter().collect();
        for v in candidates {
            if p.count() < need {
                return false;
            }
            p.remove(v);
            cur.push(v);
            if self.lex_first(cur, p.intersection(&self.adj[v]), need - 1) {
                return true;
            }
            cur.pop();
        }
        false
    }
}

/// Plain enumeration of every clique in ascending-vertex DFS order, with no
/// bounding and no symmetry reduction. Reference oracle for [`max_clique`].
pub fn max_clique_naive(g: &PaleyGraph, cap: u64) -> Result<CliqueResult> {
    let q = g.order() as u64;
    if q > cap {
        return Err(Error::TooLarge { q, cap });
    }
    let mut state = Naive {
        g,
        best: Vec::new(),
        nodes: 0,
    };
    let mut cur = Vec::new();
    state.extend(&mut cur, BitSet::full(g.order()));
    Ok(CliqueResult {
        s: state.best.len(),
        witness: state.best,
        nodes_explored: state.nodes,
        method: Method::NaiveOracle,
    })
}

struct Naive<'a> {
    g: &'a PaleyGraph,
    best: Vec<usize>,
    nodes: u64,
}

impl Naive<'_> {
    // Preorder with ascending children visits cliques in lexicographic order,
    // so the first clique of each new record size is the smallest one.
    fn extend(&mut self, cur: &mut Vec<usize>, candidates: BitSet) {
        self.nodes += 1;
        if cur.len() > self.best.len() {
            self.best = cur.clone();
        }
        let mut rest = candidates.clone();
        for v in candidates.iter() {
            rest.remove(v);
            cur.push(v);
            self.extend(cur, rest.intersection(self.g.neighbors(v)));
            cur.pop();
        }
    }
}
