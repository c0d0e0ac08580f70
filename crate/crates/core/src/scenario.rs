//! Contextuality scenarios and their Foulis–Randall composition.
//!
//! A scenario is a hypergraph: vertices are measurement outcomes, hyperedges
//! are the complete outcome sets of individual measurement contexts. Vertices
//! are stored as integer ids; for the composite two-party scenario the id of
//! outcome `ab|xy` is `8x + 4y + 2a + b` (see [`vertex_index`]).
//!
//! Local (single-party) scenarios follow one convention throughout: edge `i`
//! is the context for setting `i`, and the vertex at position `k` inside an
//! edge is the outcome with value `k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ScenarioError;

/// Number of vertices in the composite binary two-party scenario.
pub const JOINT_VERTICES: usize = 16;
/// Number of hyperedges in the composite binary two-party scenario.
pub const JOINT_EDGES: usize = 12;
/// Number of hyperedges containing each vertex of the composite scenario.
pub const EDGES_PER_VERTEX: usize = 3;

fn check_bit(name: &'static str, value: u8) -> Result<u8, ScenarioError> {
    if value > 1 {
        return Err(ScenarioError::NotABit { name, value });
    }
    Ok(value)
}

/// A single party's outcome `value|setting`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome {
    value: u8,
    setting: u8,
}

impl Outcome {
    pub fn new(value: u8, setting: u8) -> Result<Self, ScenarioError> {
        Ok(Self {
            value: check_bit("value", value)?,
            setting: check_bit("setting", setting)?,
        })
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn setting(self) -> u8 {
        self.setting
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.value, self.setting)
    }
}

/// A joint outcome `ab|xy` of the two-party experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointVertex {
    a: u8,
    b: u8,
    x: u8,
    y: u8,
}

impl JointVertex {
    pub fn new(a: u8, b: u8, x: u8, y: u8) -> Result<Self, ScenarioError> {
        Ok(Self {
            a: check_bit("a", a)?,
            b: check_bit("b", b)?,
            x: check_bit("x", x)?,
            y: check_bit("y", y)?,
        })
    }

    /// Decodes a vertex id in `0..16`.
    pub fn from_index(index: usize) -> Result<Self, ScenarioError> {
        if index >= JOINT_VERTICES {
            return Err(ScenarioError::VertexOutOfRange {
                vertex: index,
                vertex_count: JOINT_VERTICES,
            });
        }
        let bit = |shift: usize| ((index >> shift) & 1) as u8;
        Ok(Self {
            a: bit(1),
            b: bit(0),
            x: bit(3),
            y: bit(2),
        })
    }

    pub fn a(self) -> u8 {
        self.a
    }

    pub fn b(self) -> u8 {
        self.b
    }

    pub fn x(self) -> u8 {
        self.x
    }

    pub fn y(self) -> u8 {
        self.y
    }

    pub fn index(self) -> usize {
        8 * self.x as usize + 4 * self.y as usize + 2 * self.a as usize + self.b as usize
    }

    /// Measurement context `(x, y)` as an index `2x + y`, which is also the
    /// index of the corresponding context edge in the composite scenario.
    pub fn context(self) -> usize {
        2 * self.x as usize + self.y as usize
    }

    /// Every joint vertex, in id order.
    pub fn all() -> impl Iterator<Item = JointVertex> {
        (0..JOINT_VERTICES).map(|i| JointVertex::from_index(i).expect("index in range"))
    }
}

impl fmt::Display for JointVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}|{}{}", self.a, self.b, self.x, self.y)
    }
}

/// Vertex id of the joint outcome `ab|xy`: `8x + 4y + 2a + b`.
///
/// ```
/// use bellgraph::scenario::vertex_index;
/// assert_eq!(vertex_index(1, 0, 0, 1).unwrap(), 6);
/// assert!(vertex_index(2, 0, 0, 0).is_err());
/// ```
pub fn vertex_index(a: u8, b: u8, x: u8, y: u8) -> Result<usize, ScenarioError> {
    Ok(JointVertex::new(a, b, x, y)?.index())
}

/// Whether a hyperedge is a real measurement context or one of the extra
/// edges the product adds to enforce no-signalling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Context,
    #[serde(rename = "nosignal")]
    NoSignal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperedge {
    pub kind: EdgeKind,
    pub vertices: Vec<usize>,
}

impl Hyperedge {
    pub fn context(vertices: Vec<usize>) -> Self {
        Self {
            kind: EdgeKind::Context,
            vertices,
        }
    }

    pub fn contains(&self, vertex: usize) -> bool {
        self.vertices.contains(&vertex)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A structural problem found by [`ScenarioStats::inspect`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptyEdge { edge: usize },
    DuplicateVertex { edge: usize, vertex: usize },
    DanglingVertex { edge: usize, vertex: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyEdge { edge } => write!(f, "edge {edge} is empty"),
            Violation::DuplicateVertex { edge, vertex } => {
                write!(f, "edge {edge} lists vertex {vertex} more than once")
            }
            Violation::DanglingVertex { edge, vertex } => {
                write!(f, "edge {edge} references unknown vertex {vertex}")
            }
        }
    }
}

/// Counts and cardinalities of a scenario, plus any structural violations.
///
/// `edges_per_vertex` only counts in-range ids, so the two cardinality sums
/// agree exactly when there are no dangling references.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioStats {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub edge_cardinalities: Vec<usize>,
    pub edges_per_vertex: Vec<usize>,
    pub violations: Vec<Violation>,
}

impl ScenarioStats {
    /// Inspects raw scenario parts without requiring them to be valid.
    pub fn inspect(vertex_count: usize, edges: &[Hyperedge]) -> Self {
        let mut edges_per_vertex = vec![0; vertex_count];
        let mut violations = Vec::new();
        for (e, edge) in edges.iter().enumerate() {
            if edge.is_empty() {
                violations.push(Violation::EmptyEdge { edge: e });
            }
            let mut seen = Vec::with_capacity(edge.len());
            for &v in &edge.vertices {
                if seen.contains(&v) {
                    violations.push(Violation::DuplicateVertex { edge: e, vertex: v });
                    continue;
                }
                seen.push(v);
                match edges_per_vertex.get_mut(v) {
                    Some(count) => *count += 1,
                    None => violations.push(Violation::DanglingVertex { edge: e, vertex: v }),
                }
            }
        }
        Self {
            n_vertices: vertex_count,
            n_edges: edges.len(),
            edge_cardinalities: edges.iter().map(Hyperedge::len).collect(),
            edges_per_vertex,
            violations,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An immutable, validated contextuality scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scenario {
    vertex_count: usize,
    edges: Vec<Hyperedge>,
}

impl Scenario {
    pub fn new(vertex_count: usize, edges: Vec<Hyperedge>) -> Result<Self, ScenarioError> {
        let stats = ScenarioStats::inspect(vertex_count, &edges);
        if let Some(first) = stats.violations.into_iter().next() {
            return Err(ScenarioError::Invalid(first));
        }
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Option<&Hyperedge> {
        self.edges.get(index)
    }

    /// Indices, in edge order, of every edge containing `vertex`.
    pub fn edges_containing(&self, vertex: usize) -> Result<Vec<usize>, ScenarioError> {
        if vertex >= self.vertex_count {
            return Err(ScenarioError::VertexOutOfRange {
                vertex,
                vertex_count: self.vertex_count,
            });
        }
        Ok(self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains(vertex))
            .map(|(i, _)| i)
            .collect())
    }

    /// `edges_containing` for every vertex at once.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut incidence = vec![Vec::new(); self.vertex_count];
        for (i, edge) in self.edges.iter().enumerate() {
            for &v in &edge.vertices {
                incidence[v].push(i);
            }
        }
        incidence
    }

    pub fn stats(&self) -> ScenarioStats {
        ScenarioStats::inspect(self.vertex_count, &self.edges)
    }

    /// Whether this is the 16-vertex, 12-edge binary two-party composite.
    pub fn is_binary_composite(&self) -> bool {
        self.vertex_count == JOINT_VERTICES
            && self.edges.len() == JOINT_EDGES
            && self.incidence().iter().all(|e| e.len() == EDGES_PER_VERTEX)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"vertex_count\": {},\n", self.vertex_count));
        out.push_str("  \"edges\": [");
        for (i, edge) in self.edges.iter().enumerate() {
            let kind = match edge.kind {
                EdgeKind::Context => "context",
                EdgeKind::NoSignal => "nosignal",
            };
            let ids: Vec<String> = edge.vertices.iter().map(usize::to_string).collect();
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            out.push_str(&format!(
                "    {{ \"kind\": \"{kind}\", \"vertices\": [{}] }}",
                ids.join(", ")
            ));
        }
        out.push_str(if self.edges.is_empty() { "]\n" } else { "\n  ]\n" });
        out.push_str("}\n");
        out
    }

    /// Parses the document written by [`Scenario::to_json`] and validates it.
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        #[derive(Deserialize)]
        struct Raw {
            vertex_count: usize,
            edges: Vec<Hyperedge>,
        }
        let raw: Raw =
            serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        Self::new(raw.vertex_count, raw.edges)
    }
}

/// The single-party scenario: outcomes `{0|0, 1|0, 0|1, 1|1}` with one edge
/// per setting. Vertex id of `value|setting` is `2 * setting + value`.
pub fn make_local_scenario() -> Scenario {
    Scenario::new(
        4,
        vec![Hyperedge::context(vec![0, 1]), Hyperedge::context(vec![2, 3])],
    )
    .expect("local scenario is well formed")
}

/// Checks the local-scenario convention and returns the outcome table
/// `[setting][value] -> local vertex id`.
fn binary_local_layout(s: &Scenario, party: &'static str) -> Result<[[usize; 2]; 2], ScenarioError> {
    let unsupported = |reason: String| ScenarioError::UnsupportedComposition { party, reason };
    if s.vertex_count() != 4 {
        return Err(unsupported(format!("expected 4 vertices, found {}", s.vertex_count())));
    }
    if s.edges().len() != 2 {
        return Err(unsupported(format!("expected 2 contexts, found {}", s.edges().len())));
    }
    let mut layout = [[0; 2]; 2];
    for (setting, edge) in s.edges().iter().enumerate() {
        if edge.len() != 2 {
            return Err(unsupported(format!(
                "context {setting} has {} outcomes, expected 2",
                edge.len()
            )));
        }
        layout[setting] = [edge.vertices[0], edge.vertices[1]];
    }
    if s.incidence().iter().any(|e| e.len() != 1) {
        return Err(unsupported("contexts must partition the outcomes".into()));
    }
    Ok(layout)
}

/// Foulis–Randall product of two binary local scenarios.
///
/// Returns the 16-vertex composite with 12 edges of four vertices each, in
/// this order:
///
/// * edges 0..4: the measurement contexts `(x, y)` at index `2x + y`, with
///   vertices listed `a`-major then `b`;
/// * edges 4..12: the no-signalling edges. For the directing party (A first,
///   then B), each of its contexts `s`, and each non-constant assignment
///   `j` of its two outcomes to the other party's two contexts, the edge is
///   `{value |i - j| of the director in context s} × {both outcomes of the
///   other party in context i}` for `i = 0, 1`.
///
/// The constant assignments reproduce the context edges, so they are not
/// repeated. Scenarios other than two binary contexts per party are
/// rejected.
pub fn foulis_randall_product(sa: &Scenario, sb: &Scenario) -> Result<Scenario, ScenarioError> {
    binary_local_layout(sa, "A")?;
    binary_local_layout(sb, "B")?;

    let id = |a: usize, b: usize, x: usize, y: usize| 8 * x + 4 * y + 2 * a + b;
    let mut edges = Vec::with_capacity(JOINT_EDGES);

    for x in 0..2 {
        for y in 0..2 {
            let vertices = (0..2)
                .flat_map(|a| (0..2).map(move |b| id(a, b, x, y)))
                .collect();
            edges.push(Hyperedge::context(vertices));
        }
    }

    for director in 0..2 {
        for setting in 0..2 {
            for j in 0..2usize {
                let mut vertices = Vec::with_capacity(4);
                for other_setting in 0..2usize {
                    let own = other_setting.abs_diff(j);
                    for other in 0..2 {
                        vertices.push(if director == 0 {
                            id(own, other, setting, other_setting)
                        } else {
                            id(other, own, other_setting, setting)
                        });
                    }
                }
                edges.push(Hyperedge {
                    kind: EdgeKind::NoSignal,
                    vertices,
                });
            }
        }
    }

    Scenario::new(JOINT_VERTICES, edges)
}

/// The composite scenario for the EPR experiment: the product of two copies
/// of [`make_local_scenario`].
pub fn epr_scenario() -> Scenario {
    let local = make_local_scenario();
    foulis_randall_product(&local, &local).expect("binary local scenarios compose")
}
