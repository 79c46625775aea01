//! Label matrices and the graph families built from them.
//!
//! A matrix has `2k+1` columns, one per copy of `P_2 ∨ O_m`, and rows
//! `UX(1..=m)`, `UV`, `VX(1..=m)` giving the labels of `u_i x_{i,j}`,
//! `u_i v_i` and `v_i x_{i,j}`. Family `M2` has `m = 2n` leaves per copy,
//! family `M3` has `m = 2n+1`.
//!
//! Pipeline: [`build_matrix`] → [`build_base_graph`] → [`apply_crossing`]
//! → [`apply_merge`] → any number of [`apply_swap`] steps.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    component_map, Edge, GraphError, Label, LabeledGraph, PartClass, Role, VertexId,
};

/// Largest accepted `n`, `k`, `r` or `s`. Keeps every closed form well
/// inside `i64`.
pub const MAX_PARAM: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("merge requires a factorization 2k+1 = (2r+1)(2s+1)")]
    MissingFactorization,
    #[error("graph is not a {expected} graph for these parameters: {detail}")]
    WrongStage { expected: &'static str, detail: String },
    #[error("matrix column {column} sums to ({u_sum}, {v_sum}), column 1 to ({u_first}, {v_first})")]
    UnevenColumns { column: u32, u_sum: u64, v_sum: u64, u_first: u64, v_first: u64 },
    #[error("label matrix cell {row} column {column} evaluates to {value}")]
    BadCell { row: RowRole, column: u32, value: i64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Swap(#[from] SwapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `(4n+1) × (2k+1)` matrix, `2n` leaves per copy.
    M2,
    /// `(4n+3) × (2k+1)` matrix, `2n+1` leaves per copy.
    M3,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::M2 => "m2",
            Family::M3 => "m3",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "m2" => Ok(Family::M2),
            "m3" => Ok(Family::M3),
            _ => Err(ConstructionError::InvalidParams(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factorization {
    pub r: u32,
    pub s: u32,
}

/// Validated family parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct FamilyParams {
    family: Family,
    n: u32,
    k: u32,
    factorization: Option<Factorization>,
}

#[derive(Deserialize)]
struct RawParams {
    family: Family,
    n: u32,
    k: u32,
    factorization: Option<Factorization>,
}

impl TryFrom<RawParams> for FamilyParams {
    type Error = ConstructionError;

    fn try_from(raw: RawParams) -> Result<Self, Self::Error> {
        let p = FamilyParams::new(raw.family, raw.n, raw.k)?;
        match raw.factorization {
            Some(f) => p.with_factorization(f.r, f.s),
            None => Ok(p),
        }
    }
}

fn check_range(name: &str, value: u32) -> Result<(), ConstructionError> {
    if value == 0 || value > MAX_PARAM {
        Err(ConstructionError::InvalidParams(format!("{name} must be in [1, {MAX_PARAM}], got {value}")))
    } else {
        Ok(())
    }
}

impl FamilyParams {
    pub fn new(family: Family, n: u32, k: u32) -> Result<Self, ConstructionError> {
        check_range("n", n)?;
        check_range("k", k)?;
        Ok(FamilyParams { family, n, k, factorization: None })
    }

    /// Parameters for a merged family; `k` follows from `2k+1 = (2r+1)(2s+1)`.
    pub fn merged(family: Family, n: u32, r: u32, s: u32) -> Result<Self, ConstructionError> {
        check_range("r", r)?;
        check_range("s", s)?;
        let k = 2 * r * s + r + s;
        if k > MAX_PARAM {
            return Err(ConstructionError::InvalidParams(format!("r={r}, s={s} give k={k} > {MAX_PARAM}")));
        }
        FamilyParams::new(family, n, k)?.with_factorization(r, s)
    }

    pub fn with_factorization(mut self, r: u32, s: u32) -> Result<Self, ConstructionError> {
        check_range("r", r)?;
        check_range("s", s)?;
        if (2 * r as u64 + 1) * (2 * s as u64 + 1) != 2 * self.k as u64 + 1 {
            return Err(ConstructionError::InvalidParams(format!(
                "(2r+1)(2s+1) = {} but 2k+1 = {}",
                (2 * r as u64 + 1) * (2 * s as u64 + 1),
                2 * self.k + 1
            )));
        }
        self.factorization = Some(Factorization { r, s });
        Ok(self)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn factorization(&self) -> Option<Factorization> {
        self.factorization
    }

    /// Leaves per copy: `2n` for `M2`, `2n+1` for `M3`.
    pub fn leaves(&self) -> u32 {
        match self.family {
            Family::M2 => 2 * self.n,
            Family::M3 => 2 * self.n + 1,
        }
    }

    pub fn columns(&self) -> u32 {
        2 * self.k + 1
    }

    /// Number of edges, `(2m+1)(2k+1)`.
    pub fn size(&self) -> u64 {
        (2 * self.leaves() as u64 + 1) * self.columns() as u64
    }

    /// Copy paired with copy `i` by the crossing step.
    pub fn mirror(&self, i: u32) -> u32 {
        2 * self.k + 2 - i
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} k={}", self.family, self.n, self.k)?;
        if let Some(Factorization { r, s }) = self.factorization {
            write!(f, " r={r} s={s}")?;
        }
        Ok(())
    }
}

/// Row of a label matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RowRole {
    /// Labels of `u_i x_{i,j}`.
    UX(u32),
    /// Labels of `u_i v_i`.
    UV,
    /// Labels of `v_i x_{i,j}`.
    VX(u32),
}

impl fmt::Display for RowRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowRole::UX(j) => write!(f, "UX({j})"),
            RowRole::UV => f.write_str("UV"),
            RowRole::VX(j) => write!(f, "VX({j})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMatrix {
    params: FamilyParams,
    rows: Vec<RowRole>,
    /// `cells[row][i - 1]`.
    cells: Vec<Vec<Label>>,
}

impl LabelMatrix {
    pub fn params(&self) -> FamilyParams {
        self.params
    }

    /// Rows in display order: `UX(1..=m)`, `UV`, `VX(1..=m)`.
    pub fn rows(&self) -> &[RowRole] {
        &self.rows
    }

    /// Cell values of one row, columns `1..=2k+1`.
    pub fn row(&self, idx: usize) -> &[Label] {
        &self.cells[idx]
    }

    fn row_index(&self, role: RowRole) -> Option<usize> {
        let m = self.params.leaves() as usize;
        match role {
            RowRole::UX(j) if (1..=m).contains(&(j as usize)) => Some(j as usize - 1),
            RowRole::UV => Some(m),
            RowRole::VX(j) if (1..=m).contains(&(j as usize)) => Some(m + j as usize),
            _ => None,
        }
    }

    /// Label in `role`'s row at column `i` (1-based).
    pub fn cell(&self, role: RowRole, i: u32) -> Option<Label> {
        let r = self.row_index(role)?;
        self.cells[r].get((i as usize).checked_sub(1)?).copied()
    }

    pub fn values(&self) -> impl Iterator<Item = Label> + '_ {
        self.cells.iter().flatten().copied()
    }
}

/// Closed form of one matrix cell, before range checking.
fn cell_formula(p: &FamilyParams, role: RowRole, i: u32) -> i64 {
    let (n, k, i) = (p.n as i64, p.k as i64, i as i64);
    match p.family {
        Family::M2 => {
            let m = n * (8 * k + 4);
            let left_u = i <= k;
            let left_v = i <= k + 1;
            match role {
                RowRole::UV => i,
                RowRole::UX(1) => if left_u { m + k + 1 + i } else { m + (i - k) },
                RowRole::UX(2) => if left_u { m - 2 * k - 2 * i } else { m - 2 * k + 1 - 2 * (i - k) },
                RowRole::VX(1) => if left_v { 3 * k + 1 + i } else { k + i },
                RowRole::VX(2) => if left_v { 8 * k + 6 - 2 * i } else { 8 * k + 3 - 2 * (i - k - 2) },
                RowRole::UX(row) => {
                    let j = (row as i64 + 1) / 2;
                    let w = (n - j) * (8 * k + 4);
                    match (row % 2 == 1, left_u) {
                        (true, true) => w + 9 * k + 5 + i,
                        (true, false) => w + 8 * k + 4 + (i - k),
                        (false, true) => w + 5 * k + 3 - i,
                        (false, false) => w + 6 * k + 4 - (i - k),
                    }
                }
                RowRole::VX(row) => {
                    let j = (row as i64 + 1) / 2;
                    let t = j * (8 * k + 4);
                    match (row % 2 == 1, left_v) {
                        (true, true) => t - 5 * k - 3 + i,
                        (true, false) => t - 6 * k - 2 + (i - k - 2),
                        (false, true) => t - k + 1 - i,
                        (false, false) => t - (i - k - 2),
                    }
                }
            }
        }
        Family::M3 => {
            let b = 4 * k + 2;
            match role {
                RowRole::UV => i,
                RowRole::UX(row) if row as i64 == 2 * n + 1 => (n + 1) * b + 2 * k + 2 - i,
                RowRole::UX(row) => {
                    let j = (row as i64 + 1) / 2;
                    let w = (2 * n - j) * b;
                    if row % 2 == 1 { w + 10 * k + 6 - i } else { w + 6 * k + 3 + i }
                }
                RowRole::VX(1) => 4 * k + 3 - i,
                RowRole::VX(row) => {
                    let j = row as i64 / 2;
                    let t = (j - 1) * b;
                    if row % 2 == 0 { t + 4 * k + 2 + i } else { t + 8 * k + 5 - i }
                }
            }
        }
    }
}

/// Builds the label matrix of the family.
pub fn build_matrix(params: FamilyParams) -> Result<LabelMatrix, ConstructionError> {
    let m = params.leaves();
    let rows: Vec<RowRole> = (1..=m)
        .map(RowRole::UX)
        .chain([RowRole::UV])
        .chain((1..=m).map(RowRole::VX))
        .collect();
    let q = params.size() as i64;
    let mut cells = Vec::with_capacity(rows.len());
    for &row in &rows {
        let mut line = Vec::with_capacity(params.columns() as usize);
        for column in 1..=params.columns() {
            let value = cell_formula(&params, row, column);
            if value < 1 || value > q {
                return Err(ConstructionError::BadCell { row, column, value });
            }
            line.push(value as Label);
        }
        cells.push(line);
    }
    Ok(LabelMatrix { params, rows, cells })
}

/// Per-column sums of the u-block (`UX(*)` and `UV`) and of the v-block
/// (`UV` and `VX(*)`). These are the colors of `u_i` and `v_i` and are the
/// same in every column.
pub fn matrix_column_sums(mat: &LabelMatrix) -> Result<(u64, u64), ConstructionError> {
    let m = mat.params.leaves() as usize;
    let sums = |col: usize| {
        let u: u64 = (0..=m).map(|r| mat.cells[r][col]).sum();
        let v: u64 = (m..=2 * m).map(|r| mat.cells[r][col]).sum();
        (u, v)
    };
    let (u_first, v_first) = sums(0);
    for col in 1..mat.params.columns() as usize {
        let (u_sum, v_sum) = sums(col);
        if (u_sum, v_sum) != (u_first, v_first) {
            return Err(ConstructionError::UnevenColumns {
                column: col as u32 + 1,
                u_sum,
                v_sum,
                u_first,
                v_first,
            });
        }
    }
    Ok((u_first, v_first))
}

/// `2k+1` disjoint copies of `P_2 ∨ O_m`; copy `i` is labeled by column `i`.
/// Parts: `u` vertices 1, `v` vertices 2, leaves 3.
pub fn build_base_graph(mat: &LabelMatrix) -> Result<LabeledGraph, ConstructionError> {
    let p = mat.params;
    let mut g = LabeledGraph::new();
    for i in 1..=p.columns() {
        let (u, v) = (VertexId::u(i), VertexId::v(i));
        g.add_vertex(u, PartClass::ONE)?;
        g.add_vertex(v, PartClass::TWO)?;
        g.add_edge(u, v, mat.cell(RowRole::UV, i))?;
        for j in 1..=p.leaves() {
            let x = VertexId::x(i, j);
            g.add_vertex(x, PartClass::THREE)?;
            g.add_edge(u, x, mat.cell(RowRole::UX(j), i))?;
            g.add_edge(v, x, mat.cell(RowRole::VX(j), i))?;
        }
    }
    Ok(g)
}

fn wrong_stage(expected: &'static str, detail: impl Into<String>) -> ConstructionError {
    ConstructionError::WrongStage { expected, detail: detail.into() }
}

/// Exchanges the `v`-to-leaf edges of copies `i` and `2k+2-i` for every
/// `i ≤ k`, then renames `x_{i,j}` to `y_{i,j}` and `x_{2k+2-i,j}` to
/// `z_{i,j}`. Every `v` vertex keeps its labels, so `u`/`v` colors are
/// unchanged and each `y`/`z` sees a complementary label pair.
pub fn apply_crossing(g: &LabeledGraph, params: &FamilyParams) -> Result<LabeledGraph, ConstructionError> {
    let k = params.k();
    let m = params.leaves();
    for (v, _) in g.vertices() {
        if !matches!(v.role(), Role::U | Role::V | Role::X) {
            return Err(wrong_stage("base", format!("already transformed (found {v})")));
        }
    }
    for i in 1..=params.columns() {
        for j in 1..=m {
            for (a, b) in [(VertexId::u(i), VertexId::x(i, j)), (VertexId::v(i), VertexId::x(i, j))] {
                if !g.contains_edge(&Edge::new(a, b)?) {
                    return Err(wrong_stage("base", format!("missing edge {a}{b}")));
                }
            }
        }
    }

    let mut rename: HashMap<VertexId, VertexId> = HashMap::new();
    // v-leaf edges to drop, and the re-homed replacements with their labels.
    let mut dropped = BTreeSet::new();
    let mut added = Vec::new();
    for i in 1..=k {
        let i2 = params.mirror(i);
        for j in 1..=m {
            let (xi, xi2) = (VertexId::x(i, j), VertexId::x(i2, j));
            let e1 = Edge::new(VertexId::v(i), xi)?;
            let e2 = Edge::new(VertexId::v(i2), xi2)?;
            let l1 = g.label(&e1);
            let l2 = g.label(&e2);
            dropped.insert(e1);
            dropped.insert(e2);
            added.push((VertexId::v(i2), xi, l2));
            added.push((VertexId::v(i), xi2, l1));
            rename.insert(xi, VertexId::y(i, j));
            rename.insert(xi2, VertexId::z(i, j));
        }
    }
    let map = |v: VertexId| rename.get(&v).copied().unwrap_or(v);

    let mut out = LabeledGraph::new();
    for (v, part) in g.vertices() {
        out.add_vertex(map(v), part)?;
    }
    for (e, l) in g.edges() {
        if dropped.contains(&e) {
            continue;
        }
        let (a, b) = e.endpoints();
        out.add_edge(map(a), map(b), l)?;
    }
    for (a, b, l) in added {
        out.add_edge(map(a), map(b), l)?;
    }
    Ok(out)
}

/// The vertex groups identified by [`apply_merge`], with the name each group
/// receives. Group `b`-members are listed in constituent order.
pub fn merge_groups(params: &FamilyParams) -> Result<Vec<(VertexId, Vec<VertexId>)>, ConstructionError> {
    let Factorization { r, s } = params.factorization().ok_or(ConstructionError::MissingFactorization)?;
    let k = params.k();
    let block = 2 * s + 1;
    let mut groups = Vec::new();
    for j in 1..=params.leaves() {
        for a in 1..=r {
            let first = (a - 1) * block + 1;
            let ys = (0..block).map(|b| VertexId::y(first + b, j)).collect();
            let zs = (0..block).map(|b| VertexId::z(first + b, j)).collect();
            groups.push((VertexId::new(Role::MergedY, first, j)?, ys));
            groups.push((VertexId::new(Role::MergedZ, first, j)?, zs));
        }
        let middle = (r * block + 1..=(r + 1) * block)
            .map(|i| match i.cmp(&(k + 1)) {
                std::cmp::Ordering::Less => VertexId::y(i, j),
                std::cmp::Ordering::Equal => VertexId::x(i, j),
                std::cmp::Ordering::Greater => VertexId::z(params.mirror(i), j),
            })
            .collect();
        groups.push((VertexId::new(Role::MergedX, k + 1, j)?, middle));
    }
    Ok(groups)
}

/// Identifies groups of `2s+1` equally colored leaves of a crossed graph.
/// Edges and labels are untouched; each merged vertex has degree
/// `2(2s+1)` and color `(2s+1)` times the per-pair constant.
pub fn apply_merge(g: &LabeledGraph, params: &FamilyParams) -> Result<LabeledGraph, ConstructionError> {
    let groups = merge_groups(params)?;
    if g.vertices().any(|(v, _)| matches!(v.role(), Role::MergedX | Role::MergedY | Role::MergedZ)) {
        return Err(wrong_stage("crossed", "already merged"));
    }
    let mut out = g.clone();
    for (name, members) in groups {
        for &v in &members {
            if !out.contains_vertex(v) {
                return Err(wrong_stage("crossed", format!("missing leaf {v}")));
            }
        }
        // A parallel edge here would mean the construction itself is wrong.
        out.identify_vertices(&members, name)?;
    }
    Ok(out)
}

/// Which intermediate graph of the pipeline to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Base,
    Crossed,
    Merged,
}

impl std::str::FromStr for Stage {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base" => Ok(Stage::Base),
            "crossed" => Ok(Stage::Crossed),
            "merged" => Ok(Stage::Merged),
            _ => Err(ConstructionError::InvalidParams(format!("unknown stage `{s}`"))),
        }
    }
}

/// Runs the pipeline up to `stage`.
pub fn build_family(params: FamilyParams, stage: Stage) -> Result<LabeledGraph, ConstructionError> {
    if stage == Stage::Merged && params.factorization().is_none() {
        return Err(ConstructionError::MissingFactorization);
    }
    let mat = build_matrix(params)?;
    let base = build_base_graph(&mat)?;
    if stage == Stage::Base {
        return Ok(base);
    }
    let crossed = apply_crossing(&base, &params)?;
    if stage == Stage::Crossed {
        return Ok(crossed);
    }
    apply_merge(&crossed, &params)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SwapError {
    #[error("both pairs sit at the same center {0}")]
    SameCenter(VertexId),
    #[error("edge {0} is not in the graph")]
    MissingEdge(Edge),
    #[error("edge {edge} is not incident to center {center}")]
    NotIncident { edge: Edge, center: VertexId },
    #[error("pair at {0} repeats an edge")]
    RepeatedEdge(VertexId),
    #[error("edge {0} is unlabeled")]
    Unlabeled(Edge),
    #[error("pair sums differ: {sum_a} at {center_a}, {sum_b} at {center_b}")]
    PairSumMismatch { center_a: VertexId, sum_a: u64, center_b: VertexId, sum_b: u64 },
    #[error("re-homing would create a loop at {0}")]
    Loop(VertexId),
    #[error("re-homing would create a parallel edge {0}")]
    ParallelEdge(Edge),
    #[error("center {center} and far endpoint {far} share part {part}")]
    SamePart { center: VertexId, far: VertexId, part: PartClass },
    #[error("no pair of edges with labels {labels:?} meets at a common vertex")]
    NoSuchPair { labels: [Label; 2] },
}

/// Two equal-sum edge pairs at two centers. Applying the move re-homes
/// `pair_a` to `center_b` and `pair_b` to `center_a`, keeping far endpoints
/// and labels, so every induced color is unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SwapMove {
    pub center_a: VertexId,
    pub center_b: VertexId,
    pub pair_a: [Edge; 2],
    pub pair_b: [Edge; 2],
}

/// A swap as written in a move file: either explicit edges or just the two
/// label pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SwapSpec {
    Explicit(SwapMove),
    Labels { labels_a: [Label; 2], labels_b: [Label; 2] },
}

/// The unique vertex where the edges labeled `labels` meet.
fn pair_by_labels(g: &LabeledGraph, labels: [Label; 2]) -> Result<(VertexId, [Edge; 2]), SwapError> {
    let find = |l: Label| {
        g.edges()
            .find(|(_, x)| *x == Some(l))
            .map(|(e, _)| e)
            .ok_or(SwapError::NoSuchPair { labels })
    };
    let (e1, e2) = (find(labels[0])?, find(labels[1])?);
    let (a, b) = e1.endpoints();
    let center = [a, b]
        .into_iter()
        .find(|&c| e2.contains(c) && e1 != e2)
        .ok_or(SwapError::NoSuchPair { labels })?;
    Ok((center, [e1, e2]))
}

impl SwapSpec {
    pub fn resolve(&self, g: &LabeledGraph) -> Result<SwapMove, SwapError> {
        match *self {
            SwapSpec::Explicit(mv) => Ok(mv.canonical()),
            SwapSpec::Labels { labels_a, labels_b } => {
                let (center_a, pair_a) = pair_by_labels(g, labels_a)?;
                let (center_b, pair_b) = pair_by_labels(g, labels_b)?;
                Ok(SwapMove { center_a, center_b, pair_a, pair_b }.canonical())
            }
        }
    }
}

impl SwapMove {
    /// Same move with `center_a < center_b` and each pair in edge order.
    pub fn canonical(mut self) -> Self {
        if self.center_b < self.center_a {
            std::mem::swap(&mut self.center_a, &mut self.center_b);
            std::mem::swap(&mut self.pair_a, &mut self.pair_b);
        }
        self.pair_a.sort_unstable();
        self.pair_b.sort_unstable();
        self
    }

    /// Labels of `pair_a` and `pair_b` in `g`.
    pub fn labels(&self, g: &LabeledGraph) -> Option<([Label; 2], [Label; 2])> {
        let l = |e: &Edge| g.label(e);
        Some(([l(&self.pair_a[0])?, l(&self.pair_a[1])?], [l(&self.pair_b[0])?, l(&self.pair_b[1])?]))
    }
}

/// Applies a 2-swap, checking every move invariant first.
pub fn apply_swap(g: &LabeledGraph, mv: &SwapMove) -> Result<LabeledGraph, SwapError> {
    if mv.center_a == mv.center_b {
        return Err(SwapError::SameCenter(mv.center_a));
    }
    let mut sums = [0u64; 2];
    let mut fars = [[mv.center_a; 2]; 2];
    for (side, (center, pair)) in [(mv.center_a, mv.pair_a), (mv.center_b, mv.pair_b)].into_iter().enumerate() {
        if pair[0] == pair[1] {
            return Err(SwapError::RepeatedEdge(center));
        }
        for (slot, e) in pair.iter().enumerate() {
            if !g.contains_edge(e) {
                return Err(SwapError::MissingEdge(*e));
            }
            fars[side][slot] = e.other(center).ok_or(SwapError::NotIncident { edge: *e, center })?;
            sums[side] += g.label(e).ok_or(SwapError::Unlabeled(*e))?;
        }
    }
    if sums[0] != sums[1] {
        return Err(SwapError::PairSumMismatch {
            center_a: mv.center_a,
            sum_a: sums[0],
            center_b: mv.center_b,
            sum_b: sums[1],
        });
    }

    let mut out = g.clone();
    let mut moved = Vec::with_capacity(4);
    for (side, pair) in [mv.pair_a, mv.pair_b].into_iter().enumerate() {
        let target = if side == 0 { mv.center_b } else { mv.center_a };
        let target_part = g.part(target).expect("center is an edge endpoint");
        for (slot, e) in pair.iter().enumerate() {
            let far = fars[side][slot];
            if far == target {
                return Err(SwapError::Loop(target));
            }
            let far_part = g.part(far).expect("endpoint exists");
            if far_part == target_part {
                return Err(SwapError::SamePart { center: target, far, part: far_part });
            }
            let label = out.remove_edge(e).expect("edge checked above");
            moved.push((target, far, label));
        }
    }
    for (target, far, label) in moved {
        out.add_edge(target, far, label).map_err(|err| match err {
            GraphError::ParallelEdge(e) => SwapError::ParallelEdge(e),
            other => unreachable!("endpoints exist and differ: {other}"),
        })?;
    }
    Ok(out)
}

/// How removing two edges at a center splits its component: class ids
/// (0, 1 or 2) of the center and of the two far endpoints. Every piece of
/// the remainder contains one of these three vertices.
fn split_classes(adj: &[Vec<usize>], center: usize, fars: [usize; 2], seen: &mut [u32], stamp: &mut u32) -> [u8; 3] {
    let reach = |from: usize, seen: &mut [u32], stamp: u32| {
        seen[from] = stamp;
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                let removed = (v == center && fars.contains(&w)) || (w == center && fars.contains(&v));
                if !removed && seen[w] != stamp {
                    seen[w] = stamp;
                    stack.push(w);
                }
            }
        }
    };
    *stamp += 1;
    reach(center, seen, *stamp);
    let c1 = if seen[fars[0]] == *stamp { 0 } else { 1 };
    let c2 = if seen[fars[1]] == *stamp {
        0
    } else if c1 == 1 {
        *stamp += 1;
        reach(fars[0], seen, *stamp);
        if seen[fars[1]] == *stamp { 1 } else { 2 }
    } else {
        1
    };
    [0, c1, c2]
}

/// Whether the swap joins the two components: pieces `0..3` belong to the
/// first component, `3..6` to the second.
fn joins(split_a: [u8; 3], split_b: [u8; 3]) -> bool {
    let mut parent = [0usize, 1, 2, 3, 4, 5];
    fn find(p: &mut [usize; 6], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut union = |a: usize, b: usize| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    };
    // pair_a's far endpoints move to center_b and vice versa.
    for far in [split_a[1], split_a[2]] {
        union(3, far as usize);
    }
    for far in [split_b[1], split_b[2]] {
        union(0, 3 + far as usize);
    }
    let pieces_a = *split_a.iter().max().expect("three entries") as usize + 1;
    let pieces_b = *split_b.iter().max().expect("three entries") as usize + 1;
    let root = find(&mut parent, 0);
    (0..pieces_a).chain(3..3 + pieces_b).all(|x| find(&mut parent, x) == root)
}

/// Valid swaps between leaf-side centers (part 3) of equal degree lying in
/// different components, restricted to those that lower the component
/// count. Moves are canonical and sorted by `(center_a, center_b, labels_a,
/// labels_b)`.
pub fn find_connecting_swaps(g: &LabeledGraph) -> Vec<SwapMove> {
    let comp = component_map(g);
    let index: BTreeMap<VertexId, usize> = comp.keys().enumerate().map(|(i, &v)| (v, i)).collect();
    let ids: Vec<VertexId> = comp.keys().copied().collect();
    let parts: Vec<PartClass> = ids.iter().map(|&v| g.part(v).expect("vertex exists")).collect();
    let mut adj = vec![Vec::new(); ids.len()];
    let mut labeled = vec![Vec::new(); ids.len()];
    for (e, l) in g.edges() {
        let (a, b) = e.endpoints();
        let (ia, ib) = (index[&a], index[&b]);
        adj[ia].push(ib);
        adj[ib].push(ia);
        if let Some(l) = l {
            labeled[ia].push((l, ib));
            labeled[ib].push((l, ia));
        }
    }

    struct Pair {
        labels: [Label; 2],
        fars: [usize; 2],
        split: [u8; 3],
    }
    // Pairs at each candidate center, grouped by label sum.
    let mut seen = vec![0u32; ids.len()];
    let mut stamp = 0;
    let mut centers: Vec<(usize, BTreeMap<u64, Vec<Pair>>)> = Vec::new();
    for c in 0..ids.len() {
        if parts[c] != PartClass::THREE || adj[c].len() < 2 || labeled[c].len() != adj[c].len() {
            continue;
        }
        let mut edges = labeled[c].clone();
        edges.sort_unstable();
        let mut by_sum: BTreeMap<u64, Vec<Pair>> = BTreeMap::new();
        for x in 0..edges.len() {
            for y in x + 1..edges.len() {
                let ((l1, f1), (l2, f2)) = (edges[x], edges[y]);
                let split = split_classes(&adj, c, [f1, f2], &mut seen, &mut stamp);
                by_sum.entry(l1 + l2).or_default().push(Pair { labels: [l1, l2], fars: [f1, f2], split });
            }
        }
        centers.push((c, by_sum));
    }

    let mut moves = Vec::new();
    for (ai, (ca, pairs_a)) in centers.iter().enumerate() {
        for (cb, pairs_b) in &centers[ai + 1..] {
            let (ca, cb) = (*ca, *cb);
            // Different components, so re-homed edges can neither loop nor
            // run parallel to an existing edge.
            if adj[ca].len() != adj[cb].len() || comp[&ids[ca]] == comp[&ids[cb]] {
                continue;
            }
            for (sum, list_a) in pairs_a {
                let Some(list_b) = pairs_b.get(sum) else { continue };
                for pa in list_a {
                    if pa.fars.iter().any(|&f| parts[f] == parts[cb]) {
                        continue;
                    }
                    for pb in list_b {
                        if pb.fars.iter().any(|&f| parts[f] == parts[ca]) || !joins(pa.split, pb.split) {
                            continue;
                        }
                        let edge = |c: usize, f: usize| Edge::new(ids[c], ids[f]).expect("no loops");
                        let mv = SwapMove {
                            center_a: ids[ca],
                            center_b: ids[cb],
                            pair_a: [edge(ca, pa.fars[0]), edge(ca, pa.fars[1])],
                            pair_b: [edge(cb, pb.fars[0]), edge(cb, pb.fars[1])],
                        };
                        moves.push(((ids[ca], ids[cb], pa.labels, pb.labels), mv.canonical()));
                    }
                }
            }
        }
    }
    moves.sort_by_key(|x| x.0);
    moves.into_iter().map(|(_, mv)| mv).collect()
}

/// A member of an ℛ family: a merged graph followed by swaps, applied in
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapSequence {
    pub params: FamilyParams,
    pub swaps: Vec<SwapSpec>,
}

impl SwapSequence {
    /// Builds the merged graph and applies every swap. The error carries the
    /// index of the failing move.
    pub fn build(&self) -> Result<LabeledGraph, (Option<usize>, ConstructionError)> {
        let mut g = build_family(self.params, Stage::Merged).map_err(|e| (None, e))?;
        for (idx, spec) in self.swaps.iter().enumerate() {
            let mv = spec.resolve(&g).map_err(|e| (Some(idx), e.into()))?;
            g = apply_swap(&g, &mv).map_err(|e| (Some(idx), e.into()))?;
        }
        Ok(g)
    }
}
