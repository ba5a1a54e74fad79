//! Edge-linear point dynamics of a graph map and finite-depth truncations
//! of its inverse limit.
//!
//! Positions along an edge are exact rationals in `[0, 1]`, measured along
//! the edge orientation. The metric assigns each edge a positive length; an
//! edge is cut into consecutive intervals proportional to the lengths of
//! the letters of its image and each interval is mapped affinely onto its
//! letter. With the Perron-Frobenius metric every interval is stretched by
//! the same factor.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::graph_map::GraphMap;
use crate::manifold::{BranchedManifold, EdgeId, VertexId};
use crate::matrix::{TransitionMatrix, PF_REPORT_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("{0} is a vertex; preimages are only enumerated for interior points")]
    VertexPoint(String),
    #[error("transition matrix is not irreducible, no positive Perron metric")]
    NotIrreducible,
    #[error("position {0} is outside [0, 1]")]
    OutOfRange(String),
    #[error("expected {expected} edge lengths, got {got}")]
    WrongLengthCount { expected: usize, got: usize },
    #[error("edge lengths must be positive")]
    NonPositiveLength,
    #[error("malformed point `{0}`")]
    BadPoint(String),
    #[error("sequence is not a backward orbit: g(a{}) != a{index}", index + 1)]
    NotAnOrbit { index: usize },
}

/// A point of the graph: a vertex, or an interior point of an edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphPoint {
    Vertex(VertexId),
    Edge { edge: EdgeId, pos: BigRational },
}

impl GraphPoint {
    /// Point at `pos` along `edge`; the endpoints normalise to vertices.
    pub fn on_edge(m: &BranchedManifold, edge: EdgeId, pos: BigRational) -> Result<Self, SimError> {
        if pos.is_negative() || pos > BigRational::one() {
            return Err(SimError::OutOfRange(pos.to_string()));
        }
        Ok(if pos.is_zero() {
            GraphPoint::Vertex(m.edge(edge).from)
        } else if pos.is_one() {
            GraphPoint::Vertex(m.edge(edge).to)
        } else {
            GraphPoint::Edge { edge, pos }
        })
    }

    /// Parses `K1@1/3`, `K1 1/3` or a vertex name.
    pub fn parse(m: &BranchedManifold, text: &str) -> Result<Self, SimError> {
        let text = text.trim();
        let bad = || SimError::BadPoint(text.to_string());
        let parts: Vec<&str> = text.split(|c: char| c == '@' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        match parts.as_slice() {
            [name] => m.vertex_by_name(name).map(GraphPoint::Vertex).ok_or_else(bad),
            [edge, pos] => {
                let edge = m.edge_by_name(edge).ok_or_else(bad)?;
                let pos: BigRational = pos.parse().map_err(|_| bad())?;
                GraphPoint::on_edge(m, edge, pos)
            }
            _ => Err(bad()),
        }
    }

    pub fn edge(&self) -> Option<EdgeId> {
        match self {
            GraphPoint::Vertex(_) => None,
            GraphPoint::Edge { edge, .. } => Some(*edge),
        }
    }

    pub fn is_vertex(&self) -> bool {
        matches!(self, GraphPoint::Vertex(_))
    }

    pub fn display(&self, m: &BranchedManifold) -> String {
        match self {
            GraphPoint::Vertex(v) => m.vertex_name(*v).to_string(),
            GraphPoint::Edge { edge, pos } => format!("{}@{}", m.edge_name(*edge), pos),
        }
    }
}

/// Positive length per edge, normalised so the longest edge has length 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    lengths: Vec<BigRational>,
    lambda: f64,
    exact: bool,
}

impl Metric {
    /// The Perron-Frobenius metric: lengths from the positive right
    /// eigenvector of the transition matrix. Exact when the eigenvalue is an
    /// integer with a rational eigenvector; otherwise the floating
    /// eigenvector is converted to exact rationals and the eigen-equation
    /// holds to the power-iteration tolerance.
    pub fn perron_frobenius(g: &GraphMap) -> Result<Self, SimError> {
        let x = g.transition_matrix();
        let (lambda, vector) = x.perron_vector().ok_or(SimError::NotIrreducible)?;
        let rounded = lambda.round();
        if (lambda - rounded).abs() < PF_REPORT_TOLERANCE && rounded >= 1.0 {
            if let Some(lengths) = rational_kernel_vector(&x, rounded as i64) {
                return Ok(Metric { lengths, lambda: rounded, exact: true });
            }
        }
        let lengths = vector
            .iter()
            .map(|&v| BigRational::from_f64(v).expect("finite eigenvector entry"))
            .collect();
        Ok(Metric { lengths, lambda, exact: false })
    }

    pub fn from_lengths(g: &GraphMap, lengths: Vec<BigRational>) -> Result<Self, SimError> {
        let n = g.domain().edge_count();
        if lengths.len() != n {
            return Err(SimError::WrongLengthCount { expected: n, got: lengths.len() });
        }
        if lengths.iter().any(|l| !l.is_positive()) {
            return Err(SimError::NonPositiveLength);
        }
        let max = lengths.iter().max().cloned().expect("nonempty");
        let lengths = lengths.into_iter().map(|l| l / &max).collect();
        Ok(Metric { lengths, lambda: g.transition_matrix().pf_eigenvalue(), exact: false })
    }

    pub fn lengths(&self) -> &[BigRational] {
        &self.lengths
    }

    pub fn length(&self, e: EdgeId) -> &BigRational {
        &self.lengths[e.0]
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Whether the eigen-equation holds exactly in rational arithmetic.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Largest `|λ ℓ_i - Σ_j X_ij ℓ_j|` over the edges.
    pub fn eigen_residual(&self, x: &TransitionMatrix) -> f64 {
        (0..x.dim())
            .map(|i| {
                let lhs = self.lambda * self.lengths[i].to_f64().unwrap_or(f64::NAN);
                let rhs: f64 = (0..x.dim())
                    .map(|j| x.get(i, j) as f64 * self.lengths[j].to_f64().unwrap_or(f64::NAN))
                    .sum();
                (lhs - rhs).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Kernel of `X - λI` over the rationals when it is one-dimensional and
/// spanned by a positive vector, normalised to max entry 1.
fn rational_kernel_vector(x: &TransitionMatrix, lambda: i64) -> Option<Vec<BigRational>> {
    let n = x.dim();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = x.get(i, j) as i64 - if i == j { lambda } else { 0 };
                    BigRational::from_integer(BigInt::from(v))
                })
                .collect()
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for c in 0..n {
            a[row][c] = &a[row][c] * &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..n {
                    let delta = &factor * &a[row][c];
                    a[r][c] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if pivot_cols.len() != n - 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![BigRational::zero(); n];
    v[free] = BigRational::one();
    for (r, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -a[r][free].clone();
    }
    if v.iter().all(|c| c.is_negative()) {
        v = v.into_iter().map(|c| -c).collect();
    }
    if !v.iter().all(|c| c.is_positive()) {
        return None;
    }
    let max = v.iter().max().cloned()?;
    Some(v.into_iter().map(|c| c / &max).collect())
}

/// Cumulative metric lengths along the image of `e`: `cuts[i]` is where
/// letter `i` begins, `cuts[len]` the total.
fn cuts(g: &GraphMap, metric: &Metric, e: EdgeId) -> Vec<BigRational> {
    let mut acc = BigRational::zero();
    let mut out = vec![acc.clone()];
    for l in g.image(e).letters() {
        acc += metric.length(l.edge);
        out.push(acc.clone());
    }
    out
}

/// Image of a point under the edge-linear map.
pub fn forward(g: &GraphMap, metric: &Metric, p: &GraphPoint) -> GraphPoint {
    let (edge, pos) = match p {
        GraphPoint::Vertex(v) => return GraphPoint::Vertex(g.vertex_image(*v)),
        GraphPoint::Edge { edge, pos } => (*edge, pos),
    };
    let m = g.domain();
    let letters = g.image(edge).letters();
    let cuts = cuts(g, metric, edge);
    let s = pos * &cuts[letters.len()];
    // First letter whose interval ends at or beyond s.
    let i = (0..letters.len()).find(|&i| s <= cuts[i + 1]).expect("position within the edge");
    let letter = letters[i];
    if s == cuts[i + 1] {
        return GraphPoint::Vertex(letter.target(m));
    }
    let t = (&s - &cuts[i]) / metric.length(letter.edge);
    let pos = if letter.inverse { BigRational::one() - t } else { t };
    GraphPoint::Edge { edge: letter.edge, pos }
}

/// All preimages of an interior point, one per occurrence of its edge in
/// the image words, ordered by (source edge, letter index).
pub fn preimages(g: &GraphMap, metric: &Metric, p: &GraphPoint) -> Result<Vec<GraphPoint>, SimError> {
    let (target, pos) = match p {
        GraphPoint::Vertex(_) => return Err(SimError::VertexPoint(p.display(g.domain()))),
        GraphPoint::Edge { edge, pos } => (*edge, pos),
    };
    let mut out = Vec::new();
    for e in g.domain().edge_ids() {
        let letters = g.image(e).letters();
        let cuts = cuts(g, metric, e);
        let total = &cuts[letters.len()];
        for (i, l) in letters.iter().enumerate() {
            if l.edge != target {
                continue;
            }
            let t = if l.inverse { BigRational::one() - pos } else { pos.clone() };
            let s = &cuts[i] + t * metric.length(l.edge);
            out.push(GraphPoint::Edge { edge: e, pos: s / total });
        }
    }
    Ok(out)
}

/// Truncation `(a0, a1, ..., an)` of a point of the inverse limit, with
/// `g(a_{k+1}) = a_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BackwardOrbit {
    points: Vec<GraphPoint>,
}

impl BackwardOrbit {
    pub fn root(p: GraphPoint) -> Self {
        BackwardOrbit { points: vec![p] }
    }

    pub fn new(g: &GraphMap, metric: &Metric, points: Vec<GraphPoint>) -> Result<Self, SimError> {
        if points.is_empty() {
            return Err(SimError::BadPoint("empty orbit".into()));
        }
        for (k, pair) in points.windows(2).enumerate() {
            if forward(g, metric, &pair[1]) != pair[0] {
                return Err(SimError::NotAnOrbit { index: k });
            }
        }
        Ok(BackwardOrbit { points })
    }

    pub fn depth(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[GraphPoint] {
        &self.points
    }

    pub fn deepest(&self) -> &GraphPoint {
        self.points.last().expect("orbits are nonempty")
    }

    pub fn is_valid(&self, g: &GraphMap, metric: &Metric) -> bool {
        self.points.windows(2).all(|pair| forward(g, metric, &pair[1]) == pair[0])
    }
}

/// Every depth-`n+1` orbit extending `orbit`, in preimage order.
pub fn extend_backward(
    g: &GraphMap,
    metric: &Metric,
    orbit: &BackwardOrbit,
) -> Result<Vec<BackwardOrbit>, SimError> {
    Ok(preimages(g, metric, orbit.deepest())?
        .into_iter()
        .map(|q| {
            let mut points = orbit.points.clone();
            points.push(q);
            BackwardOrbit { points }
        })
        .collect())
}

/// `(a0, ..., an) -> (g(a0), a0, ..., a_{n-1})`: depth is kept and the
/// deepest entry dropped.
pub fn shift(g: &GraphMap, metric: &Metric, orbit: &BackwardOrbit) -> BackwardOrbit {
    let mut points = Vec::with_capacity(orbit.points.len());
    points.push(forward(g, metric, &orbit.points[0]));
    points.extend_from_slice(&orbit.points[..orbit.points.len() - 1]);
    BackwardOrbit { points }
}

/// `(a0, ..., an) -> (a1, ..., an)`; `None` at depth 0.
pub fn drop_shift(orbit: &BackwardOrbit) -> Option<BackwardOrbit> {
    (orbit.points.len() > 1).then(|| BackwardOrbit { points: orbit.points[1..].to_vec() })
}

/// One node of a backward-orbit tree: a preimage and its parent index in
/// the previous level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub point: GraphPoint,
    pub parent: Option<usize>,
}

/// Levels `0..=depth` of the tree of backward orbits from `seed`; level `k`
/// holds the `a_k` of every depth-`k` orbit.
pub fn backward_tree(
    g: &GraphMap,
    metric: &Metric,
    seed: &GraphPoint,
    depth: usize,
) -> Result<Vec<Vec<TreeNode>>, SimError> {
    let mut levels = vec![vec![TreeNode { point: seed.clone(), parent: None }]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (i, node) in levels.last().expect("nonempty").iter().enumerate() {
            for q in preimages(g, metric, &node.point)? {
                next.push(TreeNode { point: q, parent: Some(i) });
            }
        }
        levels.push(next);
    }
    Ok(levels)
}

/// Edges visited by `p, g(p), ..., g^{n-1}(p)`.
pub fn itinerary(g: &GraphMap, metric: &Metric, p: &GraphPoint, n: usize) -> Result<Vec<EdgeId>, SimError> {
    let mut out = Vec::with_capacity(n);
    let mut q = p.clone();
    for _ in 0..n {
        let edge = q.edge().ok_or_else(|| SimError::VertexPoint(q.display(g.domain())))?;
        out.push(edge);
        q = forward(g, metric, &q);
    }
    Ok(out)
}

/// Number of length-`n` walks in the transition digraph, i.e. the sum of
/// the entries of `X^{n-1}`. Zero for `n = 0`.
pub fn cylinder_count(g: &GraphMap, n: usize) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    g.transition_matrix().power_entry_sum(n - 1)
}

/// Topological entropy `ln λ`.
pub fn entropy(g: &GraphMap) -> f64 {
    g.transition_matrix().pf_eigenvalue().ln()
}

pub struct OrbitDisplay<'a>(pub &'a BranchedManifold, pub &'a BackwardOrbit);

impl fmt::Display for OrbitDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.1.points.iter().map(|p| p.display(self.0)).collect();
        write!(f, "({})", parts.join(", "))
    }
}
