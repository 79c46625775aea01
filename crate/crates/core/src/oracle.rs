//! Exhaustive `χ_la` for tiny graphs by enumerating edge-label bijections.
//!
//! The search works on plain index arrays and never calls into the graph
//! verifier, so the two can be checked against each other.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{verify_local_antimagic, GraphError, Label, LabeledGraph, PartClass, VertexId};

pub const DEFAULT_EDGE_BUDGET: usize = 10;
pub const HARD_EDGE_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {q} edges, over the budget of {budget} ({q}! labelings)")]
    OverBudget { q: usize, budget: usize },
    #[error("edge budget {0} exceeds the hard limit of {HARD_EDGE_LIMIT}")]
    BudgetTooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub budget: usize,
    /// Abandon partial labelings as soon as two adjacent vertices have
    /// equal final sums.
    pub prune: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { budget: DEFAULT_EDGE_BUDGET, prune: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Absent when no bijection is local antimagic.
    pub chi_la: Option<usize>,
    /// Labels in the graph's edge order; lexicographically smallest among
    /// labelings attaining `chi_la`.
    pub witness: Option<Vec<Label>>,
    /// Complete labelings evaluated. Equals `q!` without pruning.
    pub labelings_tried: u64,
    /// Complete labelings that are local antimagic.
    pub valid_labelings: u64,
}

impl OracleResult {
    /// `g` relabeled with the witness.
    pub fn witness_graph(&self, g: &LabeledGraph) -> Option<LabeledGraph> {
        let labels = self.witness.as_ref()?;
        let mut w = g.clone();
        w.relabel(labels);
        Some(w)
    }
}

/// Index form of a graph: edges as vertex-index pairs in edge order.
struct Indexed {
    order: usize,
    edges: Vec<(usize, usize)>,
}

impl Indexed {
    fn new(g: &LabeledGraph) -> Self {
        let index: BTreeMap<VertexId, usize> = g.vertices().enumerate().map(|(i, (v, _))| (v, i)).collect();
        let edges = g
            .edges()
            .map(|(e, _)| {
                let (a, b) = e.endpoints();
                (index[&a], index[&b])
            })
            .collect();
        Indexed { order: index.len(), edges }
    }

    /// Bijection onto `1..=q` and a proper induced coloring, checked directly.
    fn judge(&self, labels: &[Label]) -> bool {
        let q = self.edges.len();
        let mut seen = vec![false; q + 1];
        for &l in labels {
            if l == 0 || l as usize > q || seen[l as usize] {
                return false;
            }
            seen[l as usize] = true;
        }
        let mut sums = vec![0u64; self.order];
        for (&(a, b), &l) in self.edges.iter().zip(labels) {
            sums[a] += l;
            sums[b] += l;
        }
        self.edges.iter().all(|&(a, b)| sums[a] != sums[b])
    }
}

/// Best labeling found so far: color count, then labels in edge order.
type Best = Option<(usize, Vec<Label>)>;

#[derive(Default)]
struct Tally {
    best: Best,
    tried: u64,
    valid: u64,
}

impl Tally {
    fn offer(&mut self, colors: usize, labels: &[Label]) {
        let better = match &self.best {
            None => true,
            Some((c, l)) => (colors, labels) < (*c, l.as_slice()),
        };
        if better {
            self.best = Some((colors, labels.to_vec()));
        }
    }

    fn combine(mut self, other: Tally) -> Tally {
        self.tried += other.tried;
        self.valid += other.valid;
        if let Some((c, l)) = other.best {
            self.offer(c, &l);
        }
        self
    }
}

struct Search<'a> {
    graph: &'a Indexed,
    prune: bool,
    /// Edge indices in assignment order.
    sequence: Vec<usize>,
    /// For each vertex, the edges incident to it.
    incident: Vec<Vec<usize>>,
    // Mutable state.
    labels: Vec<Label>,
    sums: Vec<u64>,
    remaining: Vec<usize>,
    used: u32,
    tally: Tally,
}

impl<'a> Search<'a> {
    fn new(graph: &'a Indexed, prune: bool) -> Self {
        let mut incident = vec![Vec::new(); graph.order];
        for (e, &(a, b)) in graph.edges.iter().enumerate() {
            incident[a].push(e);
            incident[b].push(e);
        }
        let degree: Vec<usize> = incident.iter().map(Vec::len).collect();
        let mut sequence: Vec<usize> = (0..graph.edges.len()).collect();
        // Decreasing endpoint degree saturates hubs early.
        sequence.sort_by_key(|&e| {
            let (a, b) = graph.edges[e];
            let (hi, lo) = (degree[a].max(degree[b]), degree[a].min(degree[b]));
            (std::cmp::Reverse(hi), std::cmp::Reverse(lo), e)
        });
        Search {
            graph,
            prune,
            sequence,
            labels: vec![0; graph.edges.len()],
            sums: vec![0; graph.order],
            remaining: degree,
            incident,
            used: 0,
            tally: Tally::default(),
        }
    }

    /// Whether saturating vertex `w` clashes with a saturated neighbor.
    fn clashes(&self, w: usize) -> bool {
        self.incident[w].iter().any(|&e| {
            let (a, b) = self.graph.edges[e];
            let other = if a == w { b } else { a };
            self.remaining[other] == 0 && self.sums[other] == self.sums[w]
        })
    }

    fn assign(&mut self, depth: usize, label: Label) -> bool {
        let e = self.sequence[depth];
        let (a, b) = self.graph.edges[e];
        self.labels[e] = label;
        self.used |= 1 << label;
        self.sums[a] += label;
        self.sums[b] += label;
        self.remaining[a] -= 1;
        self.remaining[b] -= 1;
        !self.prune
            || !((self.remaining[a] == 0 && self.clashes(a)) || (self.remaining[b] == 0 && self.clashes(b)))
    }

    fn unassign(&mut self, depth: usize, label: Label) {
        let e = self.sequence[depth];
        let (a, b) = self.graph.edges[e];
        self.used &= !(1 << label);
        self.sums[a] -= label;
        self.sums[b] -= label;
        self.remaining[a] += 1;
        self.remaining[b] += 1;
    }

    fn leaf(&mut self) {
        self.tally.tried += 1;
        if !self.graph.judge(&self.labels) {
            return;
        }
        self.tally.valid += 1;
        let mut colors = self.sums.clone();
        colors.sort_unstable();
        colors.dedup();
        let labels = std::mem::take(&mut self.labels);
        self.tally.offer(colors.len(), &labels);
        self.labels = labels;
    }

    fn descend(&mut self, depth: usize) {
        let q = self.sequence.len();
        if depth == q {
            self.leaf();
            return;
        }
        for label in 1..=q as Label {
            if self.used & (1 << label) != 0 {
                continue;
            }
            if self.assign(depth, label) {
                self.descend(depth + 1);
            }
            self.unassign(depth, label);
        }
    }
}

/// Minimum color count over all local antimagic labelings of `g`'s edges.
/// Existing labels on `g` are ignored.
pub fn exhaustive_chi_la(g: &LabeledGraph, options: OracleOptions) -> Result<OracleResult, OracleError> {
    if options.budget > HARD_EDGE_LIMIT {
        return Err(OracleError::BudgetTooLarge(options.budget));
    }
    let q = g.size();
    if q > options.budget {
        return Err(OracleError::OverBudget { q, budget: options.budget });
    }
    let graph = Indexed::new(g);
    let tally = if q == 0 {
        let mut t = Tally { tried: 1, ..Tally::default() };
        // The empty labeling; every vertex has color 0.
        if graph.judge(&[]) {
            t.valid = 1;
            t.offer(usize::from(graph.order > 0), &[]);
        }
        t
    } else {
        // One worker per label of the first edge in search order.
        (1..=q as Label)
            .into_par_iter()
            .map(|first| {
                let mut search = Search::new(&graph, options.prune);
                if search.assign(0, first) {
                    search.descend(1);
                }
                search.tally
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Tally::default(), Tally::combine)
    };
    let (chi_la, witness) = match tally.best {
        Some((c, labels)) => (Some(c), Some(labels)),
        None => (None, None),
    };
    Ok(OracleResult { chi_la, witness, labelings_tried: tally.tried, valid_labelings: tally.valid })
}

/// Compares the verifier's judgment with the oracle's own check on `g`'s
/// labeling and on `samples` random relabelings (every fifth one with a
/// duplicated label). Returns whether all judgments agree.
pub fn cross_check(g: &LabeledGraph, samples: usize, seed: u64, budget: usize) -> Result<bool, OracleError> {
    if budget > HARD_EDGE_LIMIT {
        return Err(OracleError::BudgetTooLarge(budget));
    }
    if g.size() > budget {
        return Err(OracleError::OverBudget { q: g.size(), budget });
    }
    let graph = Indexed::new(g);
    let agree = |h: &LabeledGraph| -> Result<bool, OracleError> {
        let verdict = verify_local_antimagic(h)?.is_local_antimagic;
        Ok(verdict == graph.judge(&h.labels()?))
    };
    if !agree(g)? {
        return Ok(false);
    }
    let q = g.size() as Label;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = g.clone();
    for sample in 0..samples {
        let mut labels: Vec<Label> = (1..=q).collect();
        labels.shuffle(&mut rng);
        if sample % 5 == 4 && q >= 2 {
            let (i, j) = (rng.gen_range(0..labels.len()), rng.gen_range(0..labels.len()));
            labels[i] = labels[j];
        }
        h.relabel(&labels);
        if !agree(&h)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `aP_2 ∨ O_m`: edges `u_i v_i` for `i ≤ a`, joined to shared leaves
/// `x_{1,j}`, `j ≤ m`. Unlabeled.
pub fn book(a: u32, m: u32) -> LabeledGraph {
    let mut g = LabeledGraph::new();
    for j in 1..=m {
        g.add_vertex(VertexId::x(1, j), PartClass::THREE).expect("fresh vertex");
    }
    for i in 1..=a {
        let (u, v) = (VertexId::u(i), VertexId::v(i));
        g.add_vertex(u, PartClass::ONE).expect("fresh vertex");
        g.add_vertex(v, PartClass::TWO).expect("fresh vertex");
        g.add_edge(u, v, None).expect("fresh edge");
        for j in 1..=m {
            g.add_edge(u, VertexId::x(1, j), None).expect("fresh edge");
            g.add_edge(v, VertexId::x(1, j), None).expect("fresh edge");
        }
    }
    g
}

/// `K_3 = P_2 ∨ O_1`.
pub fn triangle() -> LabeledGraph {
    book(1, 1)
}

/// A single edge.
pub fn single_edge() -> LabeledGraph {
    book(1, 0)
}
