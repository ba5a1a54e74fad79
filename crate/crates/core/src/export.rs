//! Graphviz DOT and CSV renderings.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::dynamics::{cylinder_count, GraphPoint, TreeNode};
use crate::graph_map::GraphMap;
use crate::manifold::{BranchedManifold, EdgeId, Gate, VertexId};

/// Quoted DOT identifier.
pub fn dot_id(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn gate_label(m: &BranchedManifold, v: VertexId, gate: Gate) -> String {
    m.gate_members(v, gate).into_iter().map(|h| m.half_edge_name(h)).collect::<Vec<_>>().join(" ")
}

/// The branched manifold: one node per vertex labelled with its gates, one
/// arc per edge labelled with the edge and its image.
pub fn manifold_dot(g: &GraphMap) -> String {
    let m = g.domain();
    let mut out = String::from("digraph manifold {\n  node [shape=box];\n");
    for v in m.vertex_ids() {
        let label = format!(
            "{}\n{{{}}} | {{{}}}",
            m.vertex_name(v),
            gate_label(m, v, Gate(0)),
            gate_label(m, v, Gate(1))
        );
        writeln!(out, "  {} [label={}];", dot_id(m.vertex_name(v)), dot_id(&label)).expect("string write");
    }
    for e in m.edge_ids() {
        let edge = m.edge(e);
        let label = format!("{} -> {}", m.edge_name(e), g.image(e).display(m));
        writeln!(
            out,
            "  {} -> {} [label={}];",
            dot_id(m.vertex_name(edge.from)),
            dot_id(m.vertex_name(edge.to)),
            dot_id(&label)
        )
        .expect("string write");
    }
    out.push_str("}\n");
    out
}

/// The transition digraph: an arc `e -> f` labelled with the number of
/// times the image of `e` crosses `f`.
pub fn transition_dot(g: &GraphMap) -> String {
    let m = g.domain();
    let x = g.transition_matrix();
    let mut out = String::from("digraph transitions {\n");
    for e in m.edge_ids() {
        writeln!(out, "  {};", dot_id(m.edge_name(e))).expect("string write");
    }
    for i in 0..x.dim() {
        for j in 0..x.dim() {
            let count = x.get(i, j);
            if count > 0 {
                writeln!(
                    out,
                    "  {} -> {} [label=\"{count}\"];",
                    dot_id(m.edge_name(EdgeId(i))),
                    dot_id(m.edge_name(EdgeId(j)))
                )
                .expect("string write");
            }
        }
    }
    out.push_str("}\n");
    out
}

/// A backward-orbit tree, arcs from each point to its preimages.
pub fn orbit_tree_dot(m: &BranchedManifold, levels: &[Vec<TreeNode>]) -> String {
    let mut out = String::from("digraph orbits {\n  rankdir=LR;\n");
    for (k, level) in levels.iter().enumerate() {
        for (i, node) in level.iter().enumerate() {
            let id = dot_id(&format!("n{k}_{i}"));
            writeln!(out, "  {id} [label={}];", dot_id(&node.point.display(m))).expect("string write");
            if let Some(p) = node.parent {
                writeln!(out, "  {} -> {id};", dot_id(&format!("n{}_{p}", k - 1))).expect("string write");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `seed,step,edge` rows.
pub fn itinerary_csv(m: &BranchedManifold, rows: &[(GraphPoint, Vec<EdgeId>)]) -> String {
    let mut out = String::from("seed,step,edge\n");
    for (seed, edges) in rows {
        let seed = csv_field(&seed.display(m));
        for (step, e) in edges.iter().enumerate() {
            writeln!(out, "{seed},{step},{}", csv_field(m.edge_name(*e))).expect("string write");
        }
    }
    out
}

/// `depth,points` rows for a backward-orbit tree.
pub fn tree_sizes_csv(levels: &[Vec<TreeNode>]) -> String {
    let mut out = String::from("depth,points\n");
    for (k, level) in levels.iter().enumerate() {
        writeln!(out, "{k},{}", level.len()).expect("string write");
    }
    out
}

/// `n,cylinders` rows for `n = 1..=max_n`.
pub fn cylinder_csv(g: &GraphMap, max_n: usize) -> String {
    let mut out = String::from("n,cylinders\n");
    for n in 1..=max_n {
        let count: BigUint = cylinder_count(g, n);
        writeln!(out, "{n},{count}").expect("string write");
    }
    out
}

/// Accepts the DOT subset emitted here: `digraph ID { stmt* }` where a
/// statement is `ID attrs? ;`, `ID -> ID attrs? ;` or `ID = ID ;` and
/// IDs are bare alphanumerics, numerals or quoted strings.
pub fn is_valid_dot(text: &str) -> bool {
    let Some(tokens) = lex(text) else { return false };
    let mut p = Parser { tokens, pos: 0 };
    p.graph() && p.pos == p.tokens.len()
}

#[derive(Debug, PartialEq, Clone)]
enum Tok {
    Id(String),
    Sym(&'static str),
}

fn lex(text: &str) -> Option<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Tok::Sym("->"));
            i += 2;
        } else if let Some(s) = ["{", "}", "[", "]", ";", ",", "="].iter().find(|s| s.starts_with(c)) {
            out.push(Tok::Sym(s));
            i += 1;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i)? {
                    '"' => break,
                    '\\' => {
                        s.push(*chars.get(i + 1)?);
                        i += 2;
                    }
                    &ch => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(Tok::Id(s));
        } else if c.is_alphanumeric() || c == '_' || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                i += 1;
            }
            out.push(Tok::Id(chars[start..i].iter().collect()));
        } else {
            return None;
        }
    }
    Some(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn eat(&mut self, t: &Tok) -> bool {
        if self.tokens.get(self.pos) == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn id(&mut self) -> bool {
        if matches!(self.tokens.get(self.pos), Some(Tok::Id(_))) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn graph(&mut self) -> bool {
        if !self.eat(&Tok::Id("digraph".into())) {
            return false;
        }
        self.id();
        if !self.eat(&Tok::Sym("{")) {
            return false;
        }
        while !self.eat(&Tok::Sym("}")) {
            if !self.stmt() {
                return false;
            }
        }
        true
    }

    fn attrs(&mut self) -> bool {
        if !self.eat(&Tok::Sym("[")) {
            return true;
        }
        loop {
            if self.eat(&Tok::Sym("]")) {
                return true;
            }
            if !(self.id() && self.eat(&Tok::Sym("=")) && self.id()) {
                return false;
            }
            self.eat(&Tok::Sym(","));
            self.eat(&Tok::Sym(";"));
        }
    }

    fn stmt(&mut self) -> bool {
        if !self.id() {
            return false;
        }
        if self.eat(&Tok::Sym("=")) {
            return self.id() && self.eat(&Tok::Sym(";"));
        }
        while self.eat(&Tok::Sym("->")) {
            if !self.id() {
                return false;
            }
        }
        self.attrs() && self.eat(&Tok::Sym(";"))
    }
}
