//! The four Williams axioms, checked combinatorially.
//!
//! * Axiom 1 (expansion): the transition matrix is irreducible with
//!   spectral radius above one. Re-metrising the edges by the positive
//!   Perron eigenvector makes the edge-linear map expand uniformly by that
//!   factor.
//! * Axiom 2 (nonwandering set is everything): the transition matrix is
//!   irreducible.
//! * Axiom 3 (local arcs map to arcs): every edge image is a legal path and
//!   the derivative on half-edges respects gates.
//! * Axiom 4 (finite invariant set containing the branch set): vertices map
//!   to vertices, so the forward orbit of the branch set is finite. The
//!   rational mode follows arbitrary points with exact arithmetic.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::dynamics::{forward, GraphPoint, Metric};
use crate::graph_map::GraphMap;
use crate::manifold::{Gate, HalfEdge, VertexId};
use crate::matrix::PF_REPORT_TOLERANCE;

pub const DEFAULT_ORBIT_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WilliamsError {
    #[error("orbit of {seed} did not close within {cap} steps")]
    OrbitCapExceeded { seed: String, cap: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomVerdict {
    pub passed: bool,
    pub witness: String,
}

impl AxiomVerdict {
    fn pass(witness: impl Into<String>) -> Self {
        AxiomVerdict { passed: true, witness: witness.into() }
    }

    fn fail(witness: impl Into<String>) -> Self {
        AxiomVerdict { passed: false, witness: witness.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WilliamsReport {
    pub axiom1: AxiomVerdict,
    pub axiom2: AxiomVerdict,
    pub axiom3: AxiomVerdict,
    pub axiom4: AxiomVerdict,
    pub pf_eigenvalue: f64,
    pub irreducible: bool,
}

impl WilliamsReport {
    pub fn passed(&self) -> bool {
        self.axioms().iter().all(|a| a.passed)
    }

    pub fn axioms(&self) -> [&AxiomVerdict; 4] {
        [&self.axiom1, &self.axiom2, &self.axiom3, &self.axiom4]
    }

    /// Machine-readable `key=value` lines.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.axioms().iter().enumerate() {
            out.push_str(&format!("axiom{}={}\n", i + 1, if a.passed { "pass" } else { "fail" }));
            out.push_str(&format!("axiom{}.witness={}\n", i + 1, a.witness));
        }
        out.push_str(&format!("pf_eigenvalue={:.12}\n", self.pf_eigenvalue));
        out.push_str(&format!("irreducible={}\n", self.irreducible));
        out.push_str(&format!("williams={}\n", if self.passed() { "pass" } else { "fail" }));
        out
    }
}

impl fmt::Display for WilliamsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["expansion", "nonwandering", "arc images", "finite invariant set"];
        for (i, (a, name)) in self.axioms().iter().zip(names).enumerate() {
            writeln!(
                f,
                "Axiom {} ({name}): {} - {}",
                i + 1,
                if a.passed { "PASS" } else { "FAIL" },
                a.witness
            )?;
        }
        writeln!(f, "Perron-Frobenius eigenvalue: {:.9}", self.pf_eigenvalue)?;
        writeln!(f, "Transition matrix irreducible: {}", self.irreducible)?;
        write!(f, "Williams expansion map: {}", if self.passed() { "yes" } else { "no" })
    }
}

pub fn check_axiom1(g: &GraphMap) -> (AxiomVerdict, f64) {
    let x = g.transition_matrix();
    let lambda = x.pf_eigenvalue();
    let verdict = if !x.is_irreducible() {
        AxiomVerdict::fail(format!("transition matrix is reducible (lambda = {lambda:.9})"))
    } else if lambda > 1.0 + PF_REPORT_TOLERANCE {
        AxiomVerdict::pass(format!("irreducible with lambda = {lambda:.9} > 1"))
    } else {
        AxiomVerdict::fail(format!("lambda = {lambda:.9} is not greater than 1"))
    };
    (verdict, lambda)
}

pub fn check_axiom2(g: &GraphMap) -> AxiomVerdict {
    let x = g.transition_matrix();
    if x.is_irreducible() {
        return AxiomVerdict::pass("transition matrix is irreducible");
    }
    let m = g.domain();
    let reach = x.successors();
    // Name one unreachable ordered pair.
    for i in 0..x.dim() {
        let mut seen = vec![false; x.dim()];
        let mut stack = reach[i].clone();
        while let Some(j) = stack.pop() {
            if !seen[j] {
                seen[j] = true;
                stack.extend(&reach[j]);
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return AxiomVerdict::fail(format!(
                "no iterate of {} covers {}",
                m.edge_name(crate::manifold::EdgeId(i)),
                m.edge_name(crate::manifold::EdgeId(j))
            ));
        }
    }
    AxiomVerdict::fail("transition matrix is empty")
}

/// Direction in which the image of `h` leaves the image vertex.
pub fn half_edge_image(g: &GraphMap, h: HalfEdge) -> HalfEdge {
    let image = g.image(h.edge).letters();
    match h.end {
        crate::manifold::End::Start => image[0].departing(),
        crate::manifold::End::End => image[image.len() - 1].arriving(),
    }
}

pub fn check_axiom3(g: &GraphMap) -> AxiomVerdict {
    let m = g.domain();
    for e in m.edge_ids() {
        if let Some(turn) = g.image(e).first_illegal_turn(m) {
            return AxiomVerdict::fail(format!(
                "image of {} has illegal turn {}",
                m.edge_name(e),
                turn.describe(m)
            ));
        }
    }
    for v in m.vertex_ids() {
        let mut image_gates = [None::<Gate>; 2];
        for gate in [Gate(0), Gate(1)] {
            for h in m.gate_members(v, gate) {
                let target = half_edge_image(g, h);
                let tg = m.gate_of(target);
                match image_gates[gate.0 as usize] {
                    None => image_gates[gate.0 as usize] = Some(tg),
                    Some(existing) if existing == tg => {}
                    Some(_) => {
                        return AxiomVerdict::fail(format!(
                            "gate {} at {} is split by the derivative ({} -> {})",
                            gate.0,
                            m.vertex_name(v),
                            m.half_edge_name(h),
                            m.half_edge_name(target)
                        ))
                    }
                }
            }
        }
        if image_gates[0] == image_gates[1] {
            return AxiomVerdict::fail(format!(
                "both gates at {} map into one gate at {}",
                m.vertex_name(v),
                m.vertex_name(g.vertex_image(v))
            ));
        }
    }
    AxiomVerdict::pass("edge images are legal and the derivative respects gates")
}

/// Axiom 4 for maps sending vertices to vertices: the forward orbit of the
/// branch set is a finite set of vertices.
pub fn check_axiom4(g: &GraphMap, orbit_cap: usize) -> Result<AxiomVerdict, WilliamsError> {
    let m = g.domain();
    let mut invariant: BTreeSet<VertexId> = BTreeSet::new();
    for b in m.branch_set() {
        let mut v = b;
        let mut steps = 0;
        while invariant.insert(v) {
            steps += 1;
            if steps > orbit_cap {
                return Err(WilliamsError::OrbitCapExceeded {
                    seed: m.vertex_name(b).to_string(),
                    cap: orbit_cap,
                });
            }
            v = g.vertex_image(v);
        }
    }
    let names: Vec<&str> = invariant.iter().map(|&v| m.vertex_name(v)).collect();
    Ok(AxiomVerdict::pass(format!("A = {{{}}} contains the branch set and is invariant", names.join(", "))))
}

/// Axiom 4 for edge-linear maps whose distinguished points may sit inside
/// edges: iterates each seed with exact arithmetic until its orbit repeats.
/// Exceeding `orbit_cap` is an error, not a failed verdict.
pub fn check_axiom4_rational(
    g: &GraphMap,
    metric: &Metric,
    seeds: &[GraphPoint],
    orbit_cap: usize,
) -> Result<AxiomVerdict, WilliamsError> {
    let m = g.domain();
    let mut invariant: BTreeSet<GraphPoint> = BTreeSet::new();
    for b in m.branch_set() {
        invariant.insert(GraphPoint::Vertex(b));
    }
    let mut pending: Vec<GraphPoint> = invariant.iter().cloned().collect();
    pending.extend(seeds.iter().cloned());
    for seed in pending {
        let mut p = seed.clone();
        let mut steps = 0;
        loop {
            let next = forward(g, metric, &p);
            invariant.insert(p);
            if invariant.contains(&next) {
                break;
            }
            steps += 1;
            if steps >= orbit_cap {
                return Err(WilliamsError::OrbitCapExceeded { seed: seed.display(m), cap: orbit_cap });
            }
            p = next;
        }
    }
    Ok(AxiomVerdict::pass(format!("finite invariant set of {} points", invariant.len())))
}

pub fn check_williams(g: &GraphMap) -> Result<WilliamsReport, WilliamsError> {
    check_williams_with_cap(g, DEFAULT_ORBIT_CAP)
}

pub fn check_williams_with_cap(g: &GraphMap, orbit_cap: usize) -> Result<WilliamsReport, WilliamsError> {
    let (axiom1, pf_eigenvalue) = check_axiom1(g);
    Ok(WilliamsReport {
        axiom1,
        axiom2: check_axiom2(g),
        axiom3: check_axiom3(g),
        axiom4: check_axiom4(g, orbit_cap)?,
        pf_eigenvalue,
        irreducible: g.transition_matrix().is_irreducible(),
    })
}
