//! Labeled simple graphs with a stored tripartition, induced vertex colors,
//! and the local antimagic verifier.
//!
//! Vertices are identified structurally by `(role, copy, leaf)` so that the
//! crossing, merge and swap transforms can be audited edge by edge. All maps
//! are ordered, which makes every iteration order (and therefore every
//! serialized artifact) deterministic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Edge label. Labels of a fully labeled graph are a bijection onto `1..=q`.
pub type Label = u64;

/// Induced vertex color, the sum of incident labels.
pub type Color = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid vertex id `{0}`")]
    InvalidVertexId(String),
    #[error("part class must be 1, 2 or 3, got {0}")]
    InvalidPart(u8),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("vertex {0} already exists with part {1}")]
    DuplicateVertex(VertexId, PartClass),
    #[error("loop at {0}")]
    Loop(VertexId),
    #[error("parallel edge {0}")]
    ParallelEdge(Edge),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("edge {0} carries no label")]
    UnlabeledEdge(Edge),
    #[error("edge {0} joins two vertices of part {1}")]
    ImproperPartition(Edge, PartClass),
    #[error("cannot identify vertices of different parts ({0} and {1})")]
    MixedParts(VertexId, VertexId),
    #[error("color sum overflow at {0}")]
    Overflow(VertexId),
}

/// Which symbol of the constructions a vertex stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    U,
    V,
    X,
    Y,
    Z,
    MergedY,
    MergedZ,
    MergedX,
}

impl Role {
    fn prefix(self) -> &'static str {
        match self {
            Role::U => "u",
            Role::V => "v",
            Role::X => "x",
            Role::Y => "y",
            Role::Z => "z",
            Role::MergedY => "my",
            Role::MergedZ => "mz",
            Role::MergedX => "mx",
        }
    }

    fn from_prefix(s: &str) -> Option<Role> {
        Some(match s {
            "u" => Role::U,
            "v" => Role::V,
            "x" => Role::X,
            "y" => Role::Y,
            "z" => Role::Z,
            "my" => Role::MergedY,
            "mz" => Role::MergedZ,
            "mx" => Role::MergedX,
            _ => return None,
        })
    }

    /// `U` and `V` are the path endpoints and carry no leaf index.
    pub fn is_path_vertex(self) -> bool {
        matches!(self, Role::U | Role::V)
    }
}

/// Structural vertex identity. Text form is `u_3`, `v_3`, `x_3_2`, `y_3_2`,
/// `z_3_2`, `my_1_2`, `mz_1_2`, `mx_5_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    role: Role,
    copy: u32,
    leaf: u32,
}

impl VertexId {
    pub fn new(role: Role, copy: u32, leaf: u32) -> Result<Self, GraphError> {
        let id = VertexId { role, copy, leaf };
        let ok = copy >= 1 && (role.is_path_vertex() == (leaf == 0));
        if ok {
            Ok(id)
        } else {
            Err(GraphError::InvalidVertexId(format!("{role:?}({copy},{leaf})")))
        }
    }

    pub fn u(i: u32) -> Self {
        Self::new(Role::U, i, 0).expect("u index must be positive")
    }

    pub fn v(i: u32) -> Self {
        Self::new(Role::V, i, 0).expect("v index must be positive")
    }

    pub fn x(i: u32, j: u32) -> Self {
        Self::leaf_vertex(Role::X, i, j)
    }

    pub fn y(i: u32, j: u32) -> Self {
        Self::leaf_vertex(Role::Y, i, j)
    }

    pub fn z(i: u32, j: u32) -> Self {
        Self::leaf_vertex(Role::Z, i, j)
    }

    fn leaf_vertex(role: Role, i: u32, j: u32) -> Self {
        Self::new(role, i, j).expect("leaf vertex indices must be positive")
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn copy_index(&self) -> u32 {
        self.copy
    }

    pub fn leaf_index(&self) -> u32 {
        self.leaf
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.role.is_path_vertex() {
            write!(f, "{}_{}", self.role.prefix(), self.copy)
        } else {
            write!(f, "{}_{}_{}", self.role.prefix(), self.copy, self.leaf)
        }
    }
}

impl FromStr for VertexId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::InvalidVertexId(s.to_string());
        let mut parts = s.split('_');
        let role = parts.next().and_then(Role::from_prefix).ok_or_else(bad)?;
        let copy: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let leaf: u32 = match parts.next() {
            Some(p) => p.parse().map_err(|_| bad())?,
            None => 0,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        // `u_1_0` is not a valid spelling of `u_1`.
        if role.is_path_vertex() && s.matches('_').count() != 1 {
            return Err(bad());
        }
        VertexId::new(role, copy, leaf).map_err(|_| bad())
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One of the three classes of the tripartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PartClass(u8);

impl PartClass {
    pub const ONE: PartClass = PartClass(1);
    pub const TWO: PartClass = PartClass(2);
    pub const THREE: PartClass = PartClass(3);

    pub fn new(value: u8) -> Result<Self, GraphError> {
        if (1..=3).contains(&value) {
            Ok(PartClass(value))
        } else {
            Err(GraphError::InvalidPart(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for PartClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for PartClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        PartClass::new(u8::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// Unordered vertex pair, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    a: VertexId,
    b: VertexId,
}

impl Edge {
    pub fn new(x: VertexId, y: VertexId) -> Result<Self, GraphError> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok(Edge { a: x, b: y }),
            std::cmp::Ordering::Greater => Ok(Edge { a: y, b: x }),
            std::cmp::Ordering::Equal => Err(GraphError::Loop(x)),
        }
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.a, self.b)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(&self, v: VertexId) -> Option<VertexId> {
        if self.a == v {
            Some(self.b)
        } else if self.b == v {
            Some(self.a)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.a, self.b)
    }
}

/// A simple undirected graph with a part class per vertex and an optional
/// label per edge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledGraph {
    vertices: BTreeMap<VertexId, PartClass>,
    edges: BTreeMap<Edge, Option<Label>>,
}

impl LabeledGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: VertexId, part: PartClass) -> Result<(), GraphError> {
        if let Some(&existing) = self.vertices.get(&id) {
            return Err(GraphError::DuplicateVertex(id, existing));
        }
        self.vertices.insert(id, part);
        Ok(())
    }

    pub fn add_edge(
        &mut self,
        x: VertexId,
        y: VertexId,
        label: Option<Label>,
    ) -> Result<Edge, GraphError> {
        let edge = Edge::new(x, y)?;
        for v in [x, y] {
            if !self.vertices.contains_key(&v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        if self.edges.contains_key(&edge) {
            return Err(GraphError::ParallelEdge(edge));
        }
        self.edges.insert(edge, label);
        Ok(edge)
    }

    /// Removes an edge and returns its label slot.
    pub fn remove_edge(&mut self, edge: &Edge) -> Result<Option<Label>, GraphError> {
        self.edges.remove(edge).ok_or(GraphError::UnknownEdge(*edge))
    }

    pub fn set_label(&mut self, edge: &Edge, label: Label) -> Result<(), GraphError> {
        let slot = self.edges.get_mut(edge).ok_or(GraphError::UnknownEdge(*edge))?;
        *slot = Some(label);
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    /// Number of edges, `q`.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn contains_edge(&self, edge: &Edge) -> bool {
        self.edges.contains_key(edge)
    }

    pub fn part(&self, v: VertexId) -> Option<PartClass> {
        self.vertices.get(&v).copied()
    }

    pub fn label(&self, edge: &Edge) -> Option<Label> {
        self.edges.get(edge).copied().flatten()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, PartClass)> + '_ {
        self.vertices.iter().map(|(&v, &p)| (v, p))
    }

    pub fn edges(&self) -> impl Iterator<Item = (Edge, Option<Label>)> + '_ {
        self.edges.iter().map(|(&e, &l)| (e, l))
    }

    /// Edges incident to `v`, in edge order.
    pub fn incident(&self, v: VertexId) -> Vec<(Edge, Option<Label>)> {
        self.edges().filter(|(e, _)| e.contains(v)).collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.keys().filter(|e| e.contains(v)).count()
    }

    /// Neighbor lists for every vertex, including isolated ones.
    pub fn adjacency(&self) -> BTreeMap<VertexId, Vec<(VertexId, Option<Label>)>> {
        let mut adj: BTreeMap<_, Vec<_>> =
            self.vertices.keys().map(|&v| (v, Vec::new())).collect();
        for (e, l) in self.edges() {
            let (a, b) = e.endpoints();
            adj.get_mut(&a).expect("endpoint exists").push((b, l));
            adj.get_mut(&b).expect("endpoint exists").push((a, l));
        }
        adj
    }

    pub fn is_fully_labeled(&self) -> bool {
        self.edges.values().all(Option::is_some)
    }

    /// Labels in edge order. Errors on the first unlabeled edge.
    pub fn labels(&self) -> Result<Vec<Label>, GraphError> {
        self.edges()
            .map(|(e, l)| l.ok_or(GraphError::UnlabeledEdge(e)))
            .collect()
    }

    /// Replaces every label, in edge order.
    pub fn relabel(&mut self, labels: &[Label]) {
        assert_eq!(labels.len(), self.edges.len(), "one label per edge");
        for (slot, &l) in self.edges.values_mut().zip(labels) {
            *slot = Some(l);
        }
    }

    /// Renames a vertex, keeping its part and incident edges.
    pub fn rename_vertex(&mut self, from: VertexId, to: VertexId) -> Result<(), GraphError> {
        self.identify_vertices(&[from], to)
    }

    /// Replaces every vertex of `group` by the single vertex `into`, which
    /// inherits all incident edges and labels. All members must share a part.
    /// Fails without modifying the graph if the identification would create
    /// a loop or a parallel edge.
    pub fn identify_vertices(
        &mut self,
        group: &[VertexId],
        into: VertexId,
    ) -> Result<(), GraphError> {
        let first = *group.first().ok_or(GraphError::UnknownVertex(into))?;
        let part = self.part(first).ok_or(GraphError::UnknownVertex(first))?;
        for &v in group {
            let p = self.part(v).ok_or(GraphError::UnknownVertex(v))?;
            if p != part {
                return Err(GraphError::MixedParts(first, v));
            }
        }
        let members: BTreeSet<VertexId> = group.iter().copied().collect();
        if self.vertices.contains_key(&into) && !members.contains(&into) {
            return Err(GraphError::DuplicateVertex(into, self.vertices[&into]));
        }

        let mut rewired = BTreeMap::new();
        for (&e, &l) in &self.edges {
            let (a, b) = e.endpoints();
            let a2 = if members.contains(&a) { into } else { a };
            let b2 = if members.contains(&b) { into } else { b };
            let e2 = Edge::new(a2, b2)?;
            if rewired.insert(e2, l).is_some() {
                return Err(GraphError::ParallelEdge(e2));
            }
        }
        for v in &members {
            self.vertices.remove(v);
        }
        self.vertices.insert(into, part);
        self.edges = rewired;
        Ok(())
    }

    /// First edge whose endpoints share a part class, if any.
    pub fn partition_violation(&self) -> Option<(Edge, PartClass)> {
        self.edges.keys().find_map(|e| {
            let (a, b) = e.endpoints();
            let pa = self.vertices[&a];
            (pa == self.vertices[&b]).then_some((*e, pa))
        })
    }
}

/// `f⁺(u)`: the sum of labels on edges incident to `u`, for every vertex.
pub fn induced_colors(g: &LabeledGraph) -> Result<BTreeMap<VertexId, Color>, GraphError> {
    let mut colors: BTreeMap<VertexId, Color> = g.vertices.keys().map(|&v| (v, 0)).collect();
    for (e, l) in g.edges() {
        let l = l.ok_or(GraphError::UnlabeledEdge(e))?;
        let (a, b) = e.endpoints();
        for v in [a, b] {
            let c = colors.get_mut(&v).expect("endpoint exists");
            *c = c.checked_add(l).ok_or(GraphError::Overflow(v))?;
        }
    }
    Ok(colors)
}

/// A reason a labeling fails to be local antimagic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The label is used on more than one edge.
    DuplicateLabel { label: Label, edges: Vec<Edge> },
    /// The label lies outside `1..=q`.
    OutOfRange { label: Label, edge: Edge },
    /// The label in `1..=q` is not used by any edge.
    MissingLabel { label: Label },
    /// Adjacent vertices share an induced color.
    AdjacentCollision { edge: Edge, color: Color },
}

/// Bracket on `χ_la`: the lower bound is the chromatic number of the graph,
/// the upper bound is `c(f)` of a verified labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiBracket {
    pub lower: usize,
    pub upper: Option<usize>,
}

impl ChiBracket {
    /// Whether the bracket pins `χ_la` to a single value.
    pub fn exact(&self) -> Option<usize> {
        self.upper.filter(|&u| u == self.lower)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorReport {
    pub color_of: BTreeMap<VertexId, Color>,
    pub distinct_colors: Vec<Color>,
    pub c_f: usize,
    pub is_bijection: bool,
    pub is_local_antimagic: bool,
    pub violations: Vec<Violation>,
    pub chi_lower: usize,
    pub chi_la_bracket: ChiBracket,
}

/// Checks that the labels are a bijection onto `1..=q` and that the induced
/// coloring is proper. Structural problems (unlabeled edges, an improper
/// stored tripartition) are errors; labeling problems are listed in the
/// report's violations.
pub fn verify_local_antimagic(g: &LabeledGraph) -> Result<ColorReport, GraphError> {
    let color_of = induced_colors(g)?;
    let chi_lower = chromatic_lower_bound(g)?;
    let q = g.size() as Label;

    let mut violations = Vec::new();
    let mut uses: BTreeMap<Label, Vec<Edge>> = BTreeMap::new();
    for (e, l) in g.edges() {
        let l = l.expect("labels checked by induced_colors");
        if l == 0 || l > q {
            violations.push(Violation::OutOfRange { label: l, edge: e });
        } else {
            uses.entry(l).or_default().push(e);
        }
    }
    for (&label, edges) in &uses {
        if edges.len() > 1 {
            violations.push(Violation::DuplicateLabel { label, edges: edges.clone() });
        }
    }
    for label in 1..=q {
        if !uses.contains_key(&label) {
            violations.push(Violation::MissingLabel { label });
        }
    }
    let is_bijection = violations.is_empty();

    for (e, _) in g.edges() {
        let (a, b) = e.endpoints();
        if color_of[&a] == color_of[&b] {
            violations.push(Violation::AdjacentCollision { edge: e, color: color_of[&a] });
        }
    }
    let is_local_antimagic = violations.is_empty();

    let distinct: BTreeSet<Color> = color_of.values().copied().collect();
    let distinct_colors: Vec<Color> = distinct.into_iter().collect();
    let c_f = distinct_colors.len();
    Ok(ColorReport {
        color_of,
        distinct_colors,
        c_f,
        is_bijection,
        is_local_antimagic,
        violations,
        chi_lower,
        chi_la_bracket: ChiBracket {
            lower: chi_lower,
            upper: is_local_antimagic.then_some(c_f),
        },
    })
}

/// Chromatic number restricted to the `{1, 2, 3}` bracket: 1 when edgeless,
/// 2 when bipartite, otherwise 3, witnessed by the stored tripartition.
pub fn chromatic_lower_bound(g: &LabeledGraph) -> Result<usize, GraphError> {
    if let Some((e, p)) = g.partition_violation() {
        return Err(GraphError::ImproperPartition(e, p));
    }
    if g.size() == 0 {
        return Ok(1);
    }
    let adj = g.adjacency();
    let mut side: BTreeMap<VertexId, bool> = BTreeMap::new();
    for &start in adj.keys() {
        if side.contains_key(&start) {
            continue;
        }
        side.insert(start, false);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let s = side[&v];
            for &(w, _) in &adj[&v] {
                match side.get(&w) {
                    Some(&t) if t == s => return Ok(3),
                    Some(_) => {}
                    None => {
                        side.insert(w, !s);
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    Ok(2)
}

/// Component index of every vertex. Components are numbered in order of
/// their smallest vertex.
pub fn component_map(g: &LabeledGraph) -> BTreeMap<VertexId, usize> {
    let adj = g.adjacency();
    let mut comp = BTreeMap::new();
    let mut next = 0;
    for &start in adj.keys() {
        if comp.contains_key(&start) {
            continue;
        }
        comp.insert(start, next);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[&v] {
                if let std::collections::btree_map::Entry::Vacant(slot) = comp.entry(w) {
                    slot.insert(next);
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub order: usize,
    pub size: usize,
    pub components: usize,
    /// Non-increasing.
    pub degree_sequence: Vec<usize>,
    /// The common degree when every vertex has the same degree.
    pub regular: Option<usize>,
}

pub fn graph_stats(g: &LabeledGraph) -> GraphStats {
    let components = component_map(g).values().max().map_or(0, |&c| c + 1);
    let mut degree_sequence: Vec<usize> = g.adjacency().values().map(Vec::len).collect();
    degree_sequence.sort_unstable_by(|a, b| b.cmp(a));
    let regular = match (degree_sequence.first(), degree_sequence.last()) {
        (Some(&hi), Some(&lo)) if hi == lo => Some(hi),
        _ => None,
    };
    GraphStats { order: g.order(), size: g.size(), components, degree_sequence, regular }
}
