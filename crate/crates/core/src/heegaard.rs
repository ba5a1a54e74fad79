//! Genus-two Heegaard diagrams as signed cyclic intersection words, the
//! alternating conditions, and the spine maps they induce.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::free_group::{FreeWord, GenLetter};
use crate::graph_map::GraphMap;
use crate::group::Presentation;
use crate::manifold::{BranchedManifold, EdgeId, End};
use crate::mapfile::parse_gate_spec;
use crate::text::{content_lines, keyword, ParseError};
use crate::word::{EdgeWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeegaardError {
    #[error("curve word is empty")]
    EmptyCurve,
    #[error("malformed curve letter `{0}`")]
    BadLetter(String),
    #[error("intersection counts disagree: c{i} meets D{j} {c_count} times but d{j} meets C{i} {d_count} times")]
    InconsistentCounts { i: usize, j: usize, c_count: usize, d_count: usize },
    #[error("curve {curve} is not alternating at position {position}")]
    NotAlternating { curve: String, position: usize },
    #[error("attachment ({spine_offset}, {curve_entry}) is out of range")]
    BadAttachment { spine_offset: usize, curve_entry: usize },
    #[error("slide segment of length {len} exceeds the image of `{along}` ({available} letters)")]
    SegmentTooLong { along: String, len: usize, available: usize },
    #[error("unknown spine edge `{0}`")]
    UnknownEdge(String),
    #[error("not a graph map: {0}")]
    NotComposable(String),
    #[error("type II spines need `gate` lines for both vertices")]
    MissingGates,
    #[error("invalid spine: {0}")]
    BadSpine(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplittingType {
    /// Disk 3 separates the handlebody.
    I,
    /// No disk separates.
    II,
}

impl FromStr for SplittingType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "I" | "1" => Ok(SplittingType::I),
            "II" | "2" => Ok(SplittingType::II),
            _ => Err(format!("unknown splitting type `{s}` (expected I or II)")),
        }
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplittingType::I => "I",
            SplittingType::II => "II",
        })
    }
}

/// Three ordered disks and the splitting type they realise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiskSystem {
    pub kind: SplittingType,
}

impl DiskSystem {
    pub fn separating_disk(&self) -> Option<u8> {
        match self.kind {
            SplittingType::I => Some(3),
            SplittingType::II => None,
        }
    }
}

/// One crossing of a curve with disk `disk` (1, 2 or 3), with sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DiskLetter {
    pub disk: u8,
    pub positive: bool,
}

impl DiskLetter {
    pub fn new(disk: u8, positive: bool) -> Self {
        assert!((1..=3).contains(&disk), "disk index out of range");
        DiskLetter { disk, positive }
    }

    fn inv(self) -> Self {
        DiskLetter { disk: self.disk, positive: !self.positive }
    }
}

impl FromStr for DiskLetter {
    type Err = HeegaardError;

    /// `3+`, `3-` or a bare `3` (positive).
    fn from_str(s: &str) -> Result<Self, HeegaardError> {
        let (digit, positive) = match s.as_bytes() {
            [d] => (*d, true),
            [d, b'+'] => (*d, true),
            [d, b'-'] => (*d, false),
            _ => return Err(HeegaardError::BadLetter(s.to_string())),
        };
        match digit {
            b'1'..=b'3' => Ok(DiskLetter::new(digit - b'0', positive)),
            _ => Err(HeegaardError::BadLetter(s.to_string())),
        }
    }
}

impl fmt::Display for DiskLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.disk, if self.positive { '+' } else { '-' })
    }
}

/// Cyclic sequence of signed disk crossings. Equality is up to rotation.
#[derive(Clone, Debug)]
pub struct CurveWord(Vec<DiskLetter>);

impl CurveWord {
    pub fn new(letters: Vec<DiskLetter>) -> Result<Self, HeegaardError> {
        if letters.is_empty() {
            return Err(HeegaardError::EmptyCurve);
        }
        Ok(CurveWord(letters))
    }

    pub fn parse(text: &str) -> Result<Self, HeegaardError> {
        CurveWord::new(text.split_whitespace().map(str::parse).collect::<Result<_, _>>()?)
    }

    pub fn letters(&self) -> &[DiskLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn disks(&self) -> Vec<u8> {
        self.0.iter().map(|l| l.disk).collect()
    }

    /// Occurrences of disks 1, 2, 3.
    pub fn counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for l in &self.0 {
            counts[usize::from(l.disk) - 1] += 1;
        }
        counts
    }

    /// The same cyclic word read from position `k`.
    pub fn rotated(&self, k: usize) -> CurveWord {
        let k = k % self.0.len();
        CurveWord([&self.0[k..], &self.0[..k]].concat())
    }

    /// The curve traversed backwards.
    pub fn reversed(&self) -> CurveWord {
        CurveWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }
}

impl PartialEq for CurveWord {
    fn eq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && (0..self.0.len()).any(|k| self.rotated(k).0 == other.0)
    }
}

impl Eq for CurveWord {}

impl fmt::Display for CurveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(DiskLetter::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// First cyclic position at which `w` breaks the alternating pattern for
/// type `t`, or `None` if it is alternating.
pub fn alternation_violation(w: &CurveWord, t: SplittingType) -> Option<usize> {
    let d = w.disks();
    let n = d.len();
    if n == 0 {
        return Some(0);
    }
    if let Some(i) = (0..n).find(|&i| (d[i] == 3) == (d[(i + 1) % n] == 3)) {
        return Some(i);
    }
    if t == SplittingType::I {
        return (0..n).find(|&i| d[i] != 3 && d[i] * d[(i + 2) % n] != 2);
    }
    None
}

/// True when the crossings with disk 3 interleave with crossings of disks
/// 1 and 2 and, for type I, the latter alternate between 1 and 2.
pub fn is_alternating(w: &CurveWord, t: SplittingType) -> bool {
    alternation_violation(w, t).is_none()
}

/// Which handlebody a spine lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Spine dual to the disks `D1, D2, D3`; images come from the `c` curves.
    N1,
    /// Spine dual to the disks `C1, C2, C3`; images come from the `d` curves.
    N2,
}

impl Side {
    pub fn edge_names(self) -> [&'static str; 3] {
        match self {
            Side::N1 => ["J1", "J2", "J3"],
            Side::N2 => ["L1", "L2", "L3"],
        }
    }

    fn curve_prefix(self) -> char {
        match self {
            Side::N1 => 'c',
            Side::N2 => 'd',
        }
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "n1" | "1" => Ok(Side::N1),
            "n2" | "2" => Ok(Side::N2),
            _ => Err(format!("unknown side `{s}` (expected N1 or N2)")),
        }
    }
}

/// A genus-two diagram: `c[i]` is the boundary of `C_(i+1)` read against
/// the disks `D1, D2, D3`, and `d[j]` the boundary of `D_(j+1)` read
/// against `C1, C2, C3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeegaardDiagram {
    pub n1: DiskSystem,
    pub n2: DiskSystem,
    pub c: [CurveWord; 3],
    pub d: [CurveWord; 3],
}

impl HeegaardDiagram {
    pub fn new(kind: SplittingType, c: [CurveWord; 3], d: [CurveWord; 3]) -> Self {
        HeegaardDiagram { n1: DiskSystem { kind }, n2: DiskSystem { kind }, c, d }
    }

    pub fn kind(&self) -> SplittingType {
        self.n1.kind
    }

    fn curves(&self, side: Side) -> &[CurveWord; 3] {
        match side {
            Side::N1 => &self.c,
            Side::N2 => &self.d,
        }
    }

    /// Entry `(i, j)`: crossings of `c_(i+1)` with `D_(j+1)`.
    pub fn c_count_table(&self) -> [[usize; 3]; 3] {
        [self.c[0].counts(), self.c[1].counts(), self.c[2].counts()]
    }

    /// Entry `(j, i)`: crossings of `d_(j+1)` with `C_(i+1)`.
    pub fn d_count_table(&self) -> [[usize; 3]; 3] {
        [self.d[0].counts(), self.d[1].counts(), self.d[2].counts()]
    }

    /// Both tables count the points of `c_i ∩ d_j`, so one must be the
    /// transpose of the other. Reports the first mismatch, 1-based.
    pub fn check_counts(&self) -> Result<(), HeegaardError> {
        let tc = self.c_count_table();
        let td = self.d_count_table();
        for i in 0..3 {
            for j in 0..3 {
                if tc[i][j] != td[j][i] {
                    return Err(HeegaardError::InconsistentCounts {
                        i: i + 1,
                        j: j + 1,
                        c_count: tc[i][j],
                        d_count: td[j][i],
                    });
                }
            }
        }
        Ok(())
    }

    /// First curve, in the order `c1 c2 c3 d1 d2 d3`, that is not
    /// alternating, with the position of the break.
    pub fn first_violation(&self) -> Option<(String, usize)> {
        let named = self
            .c
            .iter()
            .enumerate()
            .map(|(i, w)| (format!("c{}", i + 1), w, self.n1.kind))
            .chain(self.d.iter().enumerate().map(|(i, w)| (format!("d{}", i + 1), w, self.n2.kind)));
        for (name, w, kind) in named {
            if let Some(position) = alternation_violation(w, kind) {
                return Some((name, position));
            }
        }
        None
    }
}

/// True when all six curve words alternate; errors if the intersection
/// counts are inconsistent.
pub fn is_alternating_splitting(h: &HeegaardDiagram) -> Result<bool, HeegaardError> {
    h.check_counts()?;
    Ok(h.first_violation().is_none())
}

/// Where a band move attaches: the letter boundary of the spine word at
/// which the curve is spliced in, and the curve position it enters at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BandAttachment {
    pub spine_offset: usize,
    pub curve_entry: usize,
}

/// The spine letter dual to each crossing: disk `k` is edge `k - 1`.
pub fn curve_to_edge_word(w: &CurveWord) -> EdgeWord {
    w.letters()
        .iter()
        .map(|l| Letter { edge: EdgeId(usize::from(l.disk) - 1), inverse: !l.positive })
        .collect()
}

/// Reroutes the spine word along the curve: the curve's letters, read from
/// `curve_entry`, are spliced in at `spine_offset`. With `half_twist` the
/// curve is traversed backwards.
pub fn band_move(
    spine: &EdgeWord,
    curve: &CurveWord,
    attach: BandAttachment,
    half_twist: bool,
) -> Result<EdgeWord, HeegaardError> {
    if attach.spine_offset > spine.len() || attach.curve_entry >= curve.len() {
        return Err(HeegaardError::BadAttachment {
            spine_offset: attach.spine_offset,
            curve_entry: attach.curve_entry,
        });
    }
    let mut route = curve_to_edge_word(&curve.rotated(attach.curve_entry));
    if half_twist {
        route = route.inverse();
    }
    let letters = spine.letters();
    Ok(EdgeWord::new(
        [&letters[..attach.spine_offset], route.letters(), &letters[attach.spine_offset..]].concat(),
    ))
}

/// Removes the `curve_len` letters spliced in at `spine_offset`.
pub fn band_unmove(word: &EdgeWord, spine_offset: usize, curve_len: usize) -> Result<EdgeWord, HeegaardError> {
    if spine_offset + curve_len > word.len() {
        return Err(HeegaardError::BadAttachment { spine_offset, curve_entry: curve_len });
    }
    let letters = word.letters();
    Ok(EdgeWord::new([&letters[..spine_offset], &letters[spine_offset + curve_len..]].concat()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Segment {
    /// The first `k` letters of the image.
    Prefix(usize),
    /// The last `k` letters of the image.
    Suffix(usize),
}

/// Slide one end of `moved` along part of the image of `along`.
///
/// With `P` the chosen prefix and `S` the chosen suffix of the image of
/// `along`, the image `w` of `moved` becomes `w P` (end, prefix),
/// `w S^-1` (end, suffix), `P^-1 w` (start, prefix) or `S w` (start, suffix).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlideSpec {
    pub moved: String,
    pub end: End,
    pub along: String,
    pub segment: Segment,
}

impl FromStr for SlideSpec {
    type Err = String;

    /// `J2 end along J1 prefix 2`.
    fn from_str(s: &str) -> Result<Self, String> {
        let fields: Vec<&str> = s.split_whitespace().collect();
        let [moved, end, "along", along, kind, k] = fields[..] else {
            return Err("expected `slide EDGE start|end along EDGE prefix|suffix K`".into());
        };
        let end = match end {
            "start" => End::Start,
            "end" => End::End,
            other => return Err(format!("expected start or end, got `{other}`")),
        };
        let k: usize = k.parse().map_err(|_| format!("bad segment length `{k}`"))?;
        let segment = match kind {
            "prefix" => Segment::Prefix(k),
            "suffix" => Segment::Suffix(k),
            other => return Err(format!("expected prefix or suffix, got `{other}`")),
        };
        Ok(SlideSpec { moved: moved.to_string(), end, along: along.to_string(), segment })
    }
}

impl fmt::Display for SlideSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, k) = match self.segment {
            Segment::Prefix(k) => ("prefix", k),
            Segment::Suffix(k) => ("suffix", k),
        };
        write!(f, "{} {} along {} {kind} {k}", self.moved, self.end.as_str(), self.along)
    }
}

/// Word-level slide on a list of edge images; composability is not checked.
pub fn slide_images(
    domain: &BranchedManifold,
    images: &[EdgeWord],
    spec: &SlideSpec,
) -> Result<Vec<EdgeWord>, HeegaardError> {
    let lookup = |name: &str| domain.edge_by_name(name).ok_or_else(|| HeegaardError::UnknownEdge(name.to_string()));
    let moved = lookup(&spec.moved)?;
    let along = images[lookup(&spec.along)?.0].letters();
    let (Segment::Prefix(k) | Segment::Suffix(k)) = spec.segment;
    if k > along.len() {
        return Err(HeegaardError::SegmentTooLong { along: spec.along.clone(), len: k, available: along.len() });
    }
    let piece = match spec.segment {
        Segment::Prefix(k) => EdgeWord::new(along[..k].to_vec()),
        Segment::Suffix(k) => EdgeWord::new(along[along.len() - k..].to_vec()),
    };
    let old = &images[moved.0];
    let new = match (spec.end, spec.segment) {
        (End::End, Segment::Prefix(_)) => old.concat(&piece),
        (End::End, Segment::Suffix(_)) => old.concat(&piece.inverse()),
        (End::Start, Segment::Prefix(_)) => piece.inverse().concat(old),
        (End::Start, Segment::Suffix(_)) => piece.concat(old),
    };
    let mut out = images.to_vec();
    out[moved.0] = new;
    Ok(out)
}

/// Applies a slide and re-validates the result as a graph map.
pub fn slide(g: &GraphMap, spec: &SlideSpec) -> Result<GraphMap, HeegaardError> {
    let images = slide_images(g.domain(), g.images(), spec)?;
    GraphMap::new(g.domain().clone(), images).map_err(|e| HeegaardError::NotComposable(e.to_string()))
}

/// Gate line contents: vertex, then the two gates as `(edge, end)` lists.
pub type GateSpec = (String, Vec<(String, End)>, Vec<(String, End)>);

/// Everything `induced_spine_map` needs beyond the diagram itself.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpineRecipe {
    /// Curve names (`c1`, `d2`, ...) whose band move uses the half twist.
    pub twists: Vec<String>,
    pub slides: Vec<SlideSpec>,
    /// Gate declarations replacing the defaults; required for type II.
    pub gates: Vec<GateSpec>,
}

/// Spine of the chosen side: the barbell for type I (loops dual to disks 1
/// and 2, arc dual to the separating disk 3), the theta graph for type II.
pub fn spine(kind: SplittingType, side: Side, gates: &[GateSpec]) -> Result<BranchedManifold, HeegaardError> {
    let names = side.edge_names();
    if kind == SplittingType::I && gates.is_empty() {
        return Ok(BranchedManifold::barbell(names));
    }
    if gates.is_empty() {
        return Err(HeegaardError::MissingGates);
    }
    let mut b = BranchedManifold::builder();
    b.vertex("u").vertex("v");
    match kind {
        SplittingType::I => b.edge(names[0], "u", "u").edge(names[1], "v", "v").edge(names[2], "u", "v"),
        SplittingType::II => b.edge(names[0], "u", "v").edge(names[1], "u", "v").edge(names[2], "u", "v"),
    };
    for (vertex, first, second) in gates {
        b.gates_by_name(vertex, &borrowed(first), &borrowed(second))
            .map_err(|e| HeegaardError::BadSpine(e.to_string()))?;
    }
    b.build().map_err(|e| match e {
        crate::manifold::ManifoldError::MissingGates(_) => HeegaardError::MissingGates,
        other => HeegaardError::BadSpine(other.to_string()),
    })
}

fn borrowed(side: &[(String, End)]) -> Vec<(&str, End)> {
    side.iter().map(|(e, end)| (e.as_str(), *end)).collect()
}

/// The spine map of an alternating diagram: each spine edge is band-moved
/// onto its curve (image = the curve word in spine letters, reversed if
/// twisted), then the slides are applied in order.
pub fn induced_spine_map(h: &HeegaardDiagram, side: Side, recipe: &SpineRecipe) -> Result<GraphMap, HeegaardError> {
    h.check_counts()?;
    if let Some((curve, position)) = h.first_violation() {
        return Err(HeegaardError::NotAlternating { curve, position });
    }
    let domain = spine(h.kind(), side, &recipe.gates)?;
    let images = h
        .curves(side)
        .iter()
        .enumerate()
        .map(|(i, curve)| {
            let twisted = recipe.twists.iter().any(|t| *t == format!("{}{}", side.curve_prefix(), i + 1));
            band_move(&EdgeWord::empty(), curve, BandAttachment { spine_offset: 0, curve_entry: 0 }, twisted)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut g = GraphMap::new(domain, images).map_err(|e| HeegaardError::NotComposable(e.to_string()))?;
    for spec in &recipe.slides {
        g = slide(&g, spec)?;
    }
    Ok(g)
}

/// Presentation of the fundamental group from the spine of `side`: the tree
/// edge dual to disk 3 is collapsed, leaving generators `x1, x2` dual to
/// disks 1 and 2, and each curve of the other handlebody's disks gives a
/// relator. Relators that reduce to the identity are dropped.
pub fn pi1_presentation(h: &HeegaardDiagram, side: Side) -> Presentation {
    let relators = h
        .curves(side)
        .iter()
        .map(|w| {
            FreeWord(
                w.letters()
                    .iter()
                    .filter(|l| l.disk != 3)
                    .map(|l| GenLetter::new(usize::from(l.disk) - 1, !l.positive))
                    .collect(),
            )
            .reduce()
        })
        .filter(|r| !r.is_empty())
        .collect();
    Presentation::new(vec!["x1".into(), "x2".into()], relators)
}

/// A parsed diagram file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramFile {
    pub diagram: HeegaardDiagram,
    pub recipe: SpineRecipe,
}

/// Parses a diagram file:
///
/// ```text
/// type I
/// curve c1 : 3- 1+ 3+ 2+
/// ...
/// curve d3 : ...
/// twist c2
/// slide J2 end along J1 prefix 2
/// gate u : J1.start J1.end | J3.start
/// ```
pub fn parse_diagram_file(text: &str) -> Result<DiagramFile, ParseError> {
    let end_line = text.lines().count() + 1;
    let mut kind = None;
    let mut curves: [[Option<CurveWord>; 3]; 2] = Default::default();
    let mut recipe = SpineRecipe::default();
    for (line, content) in content_lines(text) {
        let err = |m: String| ParseError::new(line, m);
        match keyword(content) {
            ("type", rest) => {
                if kind.is_some() {
                    return Err(err("duplicate `type` line".into()));
                }
                kind = Some(rest.parse::<SplittingType>().map_err(err)?);
            }
            ("curve", rest) => {
                let (name, word) = rest.split_once(':').ok_or_else(|| err("expected `curve NAME : WORD`".into()))?;
                let (family, index) = curve_slot(name.trim()).ok_or_else(|| err(format!("unknown curve `{}`", name.trim())))?;
                if curves[family][index].is_some() {
                    return Err(err(format!("curve `{}` given twice", name.trim())));
                }
                curves[family][index] = Some(CurveWord::parse(word).map_err(|e| err(e.to_string()))?);
            }
            ("twist", rest) => {
                for name in rest.split_whitespace() {
                    curve_slot(name).ok_or_else(|| err(format!("unknown curve `{name}`")))?;
                    recipe.twists.push(name.to_string());
                }
            }
            ("slide", rest) => recipe.slides.push(rest.parse().map_err(err)?),
            ("gate", rest) => {
                let (vertex, first, second) = parse_gate_spec(rest).map_err(err)?;
                let own = |side: Vec<(&str, End)>| side.into_iter().map(|(e, end)| (e.to_string(), end)).collect();
                recipe.gates.push((vertex.to_string(), own(first), own(second)));
            }
            (k, _) => return Err(err(format!("unknown keyword `{k}`"))),
        }
    }
    let kind = kind.ok_or_else(|| ParseError::new(end_line, "missing `type` line"))?;
    let take = |family: usize, prefix: char| -> Result<[CurveWord; 3], ParseError> {
        let mut out = Vec::with_capacity(3);
        for (i, slot) in curves[family].iter().enumerate() {
            out.push(slot.clone().ok_or_else(|| ParseError::new(end_line, format!("missing curve {prefix}{}", i + 1)))?);
        }
        Ok(out.try_into().expect("three curves"))
    };
    let diagram = HeegaardDiagram::new(kind, take(0, 'c')?, take(1, 'd')?);
    Ok(DiagramFile { diagram, recipe })
}

fn curve_slot(name: &str) -> Option<(usize, usize)> {
    let family = match name.chars().next()? {
        'c' => 0,
        'd' => 1,
        _ => return None,
    };
    match &name[1..] {
        "1" => Some((family, 0)),
        "2" => Some((family, 1)),
        "3" => Some((family, 2)),
        _ => None,
    }
}
