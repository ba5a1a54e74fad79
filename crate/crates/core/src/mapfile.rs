//! Line-oriented text format for graph maps.
//!
//! ```text
//! vertex u
//! vertex v
//! edge K1 u u
//! edge K2 v v
//! edge K3 u v
//! gate u : K1.start K1.end | K3.start
//! gate v : K2.start K2.end | K3.end
//! map K1 -> K3^-1 K1 K3
//! map K2 -> K3 K2 K3^-1
//! map K3 -> K2 K3^-1 K1
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::graph_map::{GraphMap, GraphMapError};
use crate::manifold::{BranchedManifold, End, ManifoldBuilder, ManifoldError};
use crate::text::{content_lines, keyword, ParseError};
use crate::word::EdgeWord;

/// Parses `K1.start` or `K1.end`.
pub fn parse_half_edge(token: &str) -> Result<(&str, End), String> {
    match token.rsplit_once('.') {
        Some((name, "start")) if !name.is_empty() => Ok((name, End::Start)),
        Some((name, "end")) if !name.is_empty() => Ok((name, End::End)),
        _ => Err(format!("malformed half-edge `{token}` (expected NAME.start or NAME.end)")),
    }
}

/// Parses the body of a gate line, `u : K1.start K1.end | K3.start`.
pub fn parse_gate_spec(rest: &str) -> Result<(&str, Vec<(&str, End)>, Vec<(&str, End)>), String> {
    let (vertex, sides) = rest.split_once(':').ok_or("expected `gate VERTEX : A B | C D`")?;
    let vertex = vertex.trim();
    if vertex.is_empty() || vertex.contains(char::is_whitespace) {
        return Err(format!("bad vertex name `{vertex}`"));
    }
    let (first, second) = sides.split_once('|').ok_or("gate line needs exactly one `|`")?;
    if second.contains('|') {
        return Err("gate line needs exactly one `|`".into());
    }
    let (first, second) = (gate_side(first)?, gate_side(second)?);
    if first.is_empty() || second.is_empty() {
        return Err(format!("vertex `{vertex}` has an empty gate"));
    }
    Ok((vertex, first, second))
}

fn gate_side(s: &str) -> Result<Vec<(&str, End)>, String> {
    s.split_whitespace().map(parse_half_edge).collect()
}

fn manifold_error_line(err: &ManifoldError, lines: &HashMap<String, usize>, fallback: usize) -> usize {
    let key = match err {
        ManifoldError::DuplicateVertex(n) | ManifoldError::DuplicateEdge(n) | ManifoldError::MissingGates(n) => {
            Some(n.clone())
        }
        ManifoldError::DuplicateGates(n) => Some(format!("gate:{n}")),
        ManifoldError::UnknownVertex(n) => Some(format!("vref:{n}")),
        ManifoldError::EmptyGate { vertex } | ManifoldError::NotIncident { vertex, .. } => {
            Some(format!("gate:{vertex}"))
        }
        ManifoldError::RepeatedHalfEdge(h) => Some(format!("gate-edge:{h}")),
        ManifoldError::UnassignedHalfEdge(h) => h.rsplit_once('.').map(|(e, _)| e.to_string()),
        ManifoldError::UnknownEdge(n) => Some(format!("gate-edge:{n}")),
        ManifoldError::Disconnected | ManifoldError::Empty => None,
    };
    key.and_then(|k| lines.get(&k).copied()).unwrap_or(fallback)
}

/// Parses a map file. Errors carry the 1-based line they refer to, or the
/// line after the last one for problems with the file as a whole.
pub fn parse_map_file(text: &str) -> Result<GraphMap, ParseError> {
    let end_line = text.lines().count() + 1;
    let mut builder = ManifoldBuilder::default();
    let mut lines: HashMap<String, usize> = HashMap::new();
    let mut maps: Vec<(usize, String, String)> = Vec::new();
    for (line, content) in content_lines(text) {
        match keyword(content) {
            ("vertex", rest) => {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                let [name] = fields[..] else {
                    return Err(ParseError::new(line, "expected `vertex NAME`"));
                };
                if lines.contains_key(name) {
                    return Err(ParseError::new(line, format!("duplicate name `{name}`")));
                }
                lines.insert(name.to_string(), line);
                builder.vertex(name);
            }
            ("edge", rest) => {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                let [name, from, to] = fields[..] else {
                    return Err(ParseError::new(line, "expected `edge NAME FROM TO`"));
                };
                if lines.contains_key(name) {
                    return Err(ParseError::new(line, format!("duplicate name `{name}`")));
                }
                lines.insert(name.to_string(), line);
                for v in [from, to] {
                    lines.entry(format!("vref:{v}")).or_insert(line);
                }
                builder.edge(name, from, to);
            }
            ("gate", rest) => {
                let (vertex, first, second) = parse_gate_spec(rest).map_err(|m| ParseError::new(line, m))?;
                lines.entry(format!("gate:{vertex}")).or_insert(line);
                for (edge, end) in first.iter().chain(&second) {
                    lines.insert(format!("gate-edge:{edge}"), line);
                    lines.insert(format!("gate-edge:{edge}.{}", end.as_str()), line);
                }
                builder
                    .gates_by_name(vertex, &first, &second)
                    .map_err(|e| ParseError::new(line, e.to_string()))?;
            }
            ("map", rest) => {
                let (edge, image) = rest
                    .split_once("->")
                    .ok_or_else(|| ParseError::new(line, "expected `map EDGE -> WORD`"))?;
                maps.push((line, edge.trim().to_string(), image.trim().to_string()));
            }
            (k, _) => return Err(ParseError::new(line, format!("unknown keyword `{k}`"))),
        }
    }
    let domain = builder
        .build()
        .map_err(|e| ParseError::new(manifold_error_line(&e, &lines, end_line), e.to_string()))?;
    parse_images(domain, &maps, end_line)
}

fn parse_images(
    domain: BranchedManifold,
    maps: &[(usize, String, String)],
    end_line: usize,
) -> Result<GraphMap, ParseError> {
    let mut images: Vec<Option<EdgeWord>> = vec![None; domain.edge_count()];
    let mut map_lines = vec![end_line; domain.edge_count()];
    for (line, edge, image) in maps {
        let e = domain
            .edge_by_name(edge)
            .ok_or_else(|| ParseError::new(*line, format!("unknown edge `{edge}`")))?;
        if images[e.0].is_some() {
            return Err(ParseError::new(*line, format!("edge `{edge}` mapped twice")));
        }
        let word = EdgeWord::parse(&domain, image).map_err(|err| ParseError::new(*line, err.to_string()))?;
        images[e.0] = Some(word);
        map_lines[e.0] = *line;
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            w.ok_or_else(|| {
                ParseError::new(end_line, format!("no `map` line for edge `{}`", domain.edge_name(crate::EdgeId(i))))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let line_of = |edge: &str| domain.edge_by_name(edge).map_or(end_line, |e| map_lines[e.0]);
    GraphMap::new(domain.clone(), images).map_err(|err| {
        let line = match &err {
            GraphMapError::EmptyImage { edge }
            | GraphMapError::NotComposable { edge, .. }
            | GraphMapError::InconsistentVertexImage { edge, .. }
            | GraphMapError::WrongEndpoints { edge, .. } => line_of(edge),
            GraphMapError::WrongImageCount { .. } => end_line,
        };
        ParseError::new(line, err.to_string())
    })
}

/// Emits a map file that [`parse_map_file`] reads back to an equal map.
pub fn emit_map_file(g: &GraphMap) -> String {
    let m = g.domain();
    let mut out = m.to_string();
    for e in m.edge_ids() {
        writeln!(out, "map {} -> {}", m.edge_name(e), g.image(e).display(m)).expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::manifold::EdgeId;
    use crate::word::Letter;
    use proptest::prelude::*;

    const EXAMPLE: &str = "\
# barbell
vertex u
vertex v
edge K1 u u
edge K2 v v
edge K3 u v
gate u : K1.start K1.end | K3.start
gate v : K2.start K2.end | K3.end
map K1 -> K3^-1 K1 K3
map K2 -> K3 K2 K3^-1
map K3 -> K2 K3^-1 K1
";

    #[test]
    fn parses_the_example() {
        assert_eq!(parse_map_file(EXAMPLE).unwrap(), fixtures::example_k_map());
    }

    #[test]
    fn emitted_files_round_trip() {
        for g in [
            fixtures::example_k_map(),
            fixtures::doubling_map(),
            fixtures::identity_rose(),
            fixtures::block_diagonal_rose(),
            fixtures::positive_three_edge_rose_map(),
        ] {
            let text = emit_map_file(&g);
            assert_eq!(parse_map_file(&text).unwrap(), g, "{text}");
        }
    }

    fn error_line(text: &str) -> usize {
        parse_map_file(text).unwrap_err().line
    }

    #[test]
    fn errors_point_at_the_offending_line() {
        let swap = |from: &str, to: &str| EXAMPLE.replace(from, to);
        assert_eq!(error_line(&swap("gate u : K1.start K1.end | K3.start", "gate u : K1.start K1.end K3.start")), 7);
        assert_eq!(error_line(&swap("gate u : K1.start K1.end | K3.start", "gate u : K1.start K1.end | K3.middle")), 7);
        assert_eq!(error_line(&swap("gate u : K1.start K1.end | K3.start", "gate u : K1.start K1.end | K2.start")), 7);
        assert_eq!(error_line(&swap("map K3 -> K2 K3^-1 K1", "map K3 -> K2 K1")), 11);
        assert_eq!(error_line(&swap("map K3 -> K2 K3^-1 K1", "map K3 -> K2 K9")), 11);
        assert_eq!(error_line(&swap("map K2 -> K3 K2 K3^-1", "map K2 -> K3 K2")), 10);
        assert_eq!(error_line(&swap("edge K3 u v", "edge K3 u w")), 6);
        assert_eq!(error_line(&swap("| K3.end", "| K9.end")), 8);
        assert_eq!(error_line(&swap("| K3.end", "| K3.end K2.end")), 8);
        assert_eq!(error_line(&swap("vertex v", "vertx v")), 3);
        assert_eq!(error_line(&swap("map K3 -> K2 K3^-1 K1\n", "")), 11);
        assert_eq!(error_line(&format!("{EXAMPLE}map K1 -> K1\n")), 12);
    }

    #[test]
    fn half_edge_tokens() {
        assert_eq!(parse_half_edge("e.start"), Ok(("e", End::Start)));
        assert_eq!(parse_half_edge("a.b.end"), Ok(("a.b", End::End)));
        assert!(parse_half_edge(".end").is_err());
        assert!(parse_half_edge("e").is_err());
    }

    fn random_rose_map(images: Vec<Vec<(usize, bool)>>) -> Option<GraphMap> {
        let m = fixtures::three_loop_rose();
        let words = images
            .into_iter()
            .map(|w| EdgeWord::new(w.into_iter().map(|(e, inv)| Letter { edge: EdgeId(e), inverse: inv }).collect()))
            .collect();
        GraphMap::new(m, words).ok()
    }

    proptest! {
        #[test]
        fn random_maps_round_trip(
            images in proptest::collection::vec(
                proptest::collection::vec((0usize..3, any::<bool>()), 1..6),
                3,
            )
        ) {
            if let Some(g) = random_rose_map(images) {
                prop_assert_eq!(parse_map_file(&emit_map_file(&g)).unwrap(), g);
            }
        }
    }
}
