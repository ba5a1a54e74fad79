//! Free group words, endomorphisms induced on the fundamental group of a
//! graph, and the commutator test for a non-abelian image.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::graph_map::GraphMap;
use crate::manifold::{BranchedManifold, EdgeId, VertexId};
use crate::word::{EdgeWord, Letter};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenLetter {
    pub gen: usize,
    pub inverse: bool,
}

impl GenLetter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        GenLetter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        GenLetter { gen: self.gen, inverse: !self.inverse }
    }

    fn cancels(self, other: GenLetter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGroupError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed token `{0}`")]
    BadToken(String),
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("tree edges do not form a spanning tree: {0}")]
    InvalidTree(String),
    #[error("connector must run from {expected_from} to {expected_to}")]
    InvalidConnector { expected_from: String, expected_to: String },
    #[error("expected generators {{x, y}}, got {0} generators")]
    RankMismatch(usize),
}

/// A word over generators `0..rank`, not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord(pub Vec<GenLetter>);

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn gen(g: usize) -> Self {
        FreeWord(vec![GenLetter::new(g, false)])
    }

    pub fn letters(&self) -> &[GenLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &FreeWord) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        FreeWord(letters)
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            out.extend_from_slice(&base.0);
        }
        FreeWord(out)
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn reduce(&self) -> Self {
        let mut stack: Vec<GenLetter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        FreeWord(stack)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| !p[0].cancels(p[1]))
    }

    /// Signed exponent sum of each generator.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut sums = vec![0i64; rank];
        for l in &self.0 {
            sums[l.gen] += if l.inverse { -1 } else { 1 };
        }
        sums
    }

    /// Parses `x y^-1 (x y)^2 x^3`; names are looked up in `names`.
    pub fn parse(names: &[String], text: &str) -> Result<Self, FreeGroupError> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let word = parse_sequence(names, &tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(FreeGroupError::Unbalanced);
        }
        Ok(word)
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("{}^-1", names[l.gen])
                } else {
                    names[l.gen].clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn free_reduce(w: &FreeWord) -> FreeWord {
    w.reduce()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Name(String),
    Power(i64),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>, FreeGroupError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '*' || c == '.' {
            i += 1;
        } else if c == '(' {
            tokens.push(Token::Open);
            i += 1;
        } else if c == ')' {
            tokens.push(Token::Close);
            i += 1;
        } else if c == '^' {
            let start = i + 1;
            let mut j = start;
            if j < chars.len() && (chars[j] == '-' || chars[j] == '+') {
                j += 1;
            }
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[start..j].iter().collect();
            let k = s.parse().map_err(|_| FreeGroupError::BadToken(format!("^{s}")))?;
            tokens.push(Token::Power(k));
            i = j;
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            tokens.push(Token::Name(chars[start..i].iter().collect()));
        } else {
            return Err(FreeGroupError::BadToken(c.to_string()));
        }
    }
    Ok(tokens)
}

/// A name, or a juxtaposition such as `ab` of single-character names.
fn lookup_name(names: &[String], n: &str) -> Result<FreeWord, FreeGroupError> {
    if let Some(g) = names.iter().position(|x| x == n) {
        return Ok(FreeWord::gen(g));
    }
    let mut letters = Vec::new();
    for c in n.chars() {
        let g = names
            .iter()
            .position(|x| x.len() == c.len_utf8() && x.starts_with(c))
            .ok_or_else(|| FreeGroupError::UnknownGenerator(n.to_string()))?;
        letters.push(GenLetter::new(g, false));
    }
    Ok(FreeWord(letters))
}

fn parse_sequence(names: &[String], tokens: &[Token], pos: &mut usize) -> Result<FreeWord, FreeGroupError> {
    let mut word = FreeWord::empty();
    while *pos < tokens.len() {
        let mut atom = match &tokens[*pos] {
            Token::Name(n) => {
                *pos += 1;
                lookup_name(names, n)?
            }
            Token::Open => {
                *pos += 1;
                let inner = parse_sequence(names, tokens, pos)?;
                if tokens.get(*pos) != Some(&Token::Close) {
                    return Err(FreeGroupError::Unbalanced);
                }
                *pos += 1;
                inner
            }
            Token::Close => return Ok(word),
            Token::Power(k) => return Err(FreeGroupError::BadToken(format!("^{k}"))),
        };
        while let Some(Token::Power(k)) = tokens.get(*pos) {
            atom = atom.pow(*k);
            *pos += 1;
        }
        word = word.concat(&atom);
    }
    Ok(word)
}

/// An endomorphism of a free group, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeEndomorphism {
    names: Vec<String>,
    images: Vec<FreeWord>,
}

impl FreeEndomorphism {
    pub fn new(names: Vec<String>, images: Vec<FreeWord>) -> Self {
        assert_eq!(names.len(), images.len(), "one image per generator");
        FreeEndomorphism { names, images }
    }

    pub fn identity(names: Vec<String>) -> Self {
        let images = (0..names.len()).map(FreeWord::gen).collect();
        FreeEndomorphism { names, images }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn image(&self, gen: usize) -> &FreeWord {
        &self.images[gen]
    }

    /// Image of a word, reduced.
    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        let mut out = Vec::new();
        for l in w.letters() {
            let img = &self.images[l.gen];
            if l.inverse {
                out.extend(img.letters().iter().rev().map(|x| x.inv()));
            } else {
                out.extend_from_slice(img.letters());
            }
        }
        FreeWord(out).reduce()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeEndomorphism) -> FreeEndomorphism {
        FreeEndomorphism {
            names: self.names.clone(),
            images: other.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    /// Entry `(i, j)`: exponent sum of generator `j` in the image of
    /// generator `i`.
    pub fn abelianization_matrix(&self) -> Vec<Vec<i64>> {
        self.images.iter().map(|w| w.exponent_sums(self.rank())).collect()
    }
}

impl fmt::Display for FreeEndomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, image) in self.names.iter().zip(&self.images) {
            writeln!(f, "{name} -> {}", image.display(&self.names))?;
        }
        Ok(())
    }
}

pub fn abelianization_matrix(phi: &FreeEndomorphism) -> Vec<Vec<i64>> {
    phi.abelianization_matrix()
}

/// True when `[φ(x), φ(y)]` is a nontrivial reduced word, i.e. the image
/// of `φ` is not abelian.
pub fn commutator_obstruction(phi: &FreeEndomorphism) -> Result<bool, FreeGroupError> {
    if phi.rank() != 2 {
        return Err(FreeGroupError::RankMismatch(phi.rank()));
    }
    Ok(!commutator_image(phi).is_empty())
}

/// Reduced form of `φ(x) φ(y) φ(x)^-1 φ(y)^-1`.
pub fn commutator_image(phi: &FreeEndomorphism) -> FreeWord {
    let x = phi.image(0);
    let y = phi.image(1);
    x.concat(y).concat(&x.inverse()).concat(&y.inverse()).reduce()
}

/// Generators and tree paths for the fundamental group of a graph at a
/// basepoint, relative to a spanning tree.
#[derive(Clone, Debug)]
pub struct TreeBasis {
    basepoint: VertexId,
    in_tree: Vec<bool>,
    /// Tree path from the basepoint to each vertex.
    paths: Vec<EdgeWord>,
    /// Non-tree edges in declaration order; generator `k` is `generators[k]`.
    generators: Vec<EdgeId>,
}

impl TreeBasis {
    pub fn new(m: &BranchedManifold, tree: &[EdgeId], basepoint: VertexId) -> Result<Self, FreeGroupError> {
        let mut in_tree = vec![false; m.edge_count()];
        for &e in tree {
            if e.0 >= m.edge_count() {
                return Err(FreeGroupError::InvalidTree(format!("no edge #{}", e.0)));
            }
            if in_tree[e.0] {
                return Err(FreeGroupError::InvalidTree(format!("{} listed twice", m.edge_name(e))));
            }
            in_tree[e.0] = true;
        }
        if tree.len() + 1 != m.vertex_count() {
            return Err(FreeGroupError::InvalidTree(format!(
                "{} edges cannot span {} vertices",
                tree.len(),
                m.vertex_count()
            )));
        }
        let mut paths: Vec<Option<EdgeWord>> = vec![None; m.vertex_count()];
        paths[basepoint.0] = Some(EdgeWord::empty());
        let mut queue = VecDeque::from([basepoint]);
        while let Some(v) = queue.pop_front() {
            let here = paths[v.0].clone().expect("visited");
            for &e in tree {
                let edge = m.edge(e);
                let step = if edge.from == v {
                    Some((edge.to, Letter::forward(e)))
                } else if edge.to == v {
                    Some((edge.from, Letter::backward(e)))
                } else {
                    None
                };
                if let Some((w, letter)) = step {
                    if paths[w.0].is_none() {
                        paths[w.0] = Some(here.concat(&EdgeWord::single(letter)));
                        queue.push_back(w);
                    }
                }
            }
        }
        let paths = paths
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.ok_or_else(|| {
                    FreeGroupError::InvalidTree(format!("vertex {} is not reached", m.vertex_name(VertexId(i))))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let generators = m.edge_ids().filter(|e| !in_tree[e.0]).collect();
        Ok(TreeBasis { basepoint, in_tree, paths, generators })
    }

    pub fn basepoint(&self) -> VertexId {
        self.basepoint
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_edges(&self) -> &[EdgeId] {
        &self.generators
    }

    pub fn tree_path(&self, v: VertexId) -> &EdgeWord {
        &self.paths[v.0]
    }

    /// Loop at the basepoint through the `k`-th non-tree edge.
    pub fn generator_loop(&self, m: &BranchedManifold, k: usize) -> EdgeWord {
        let e = self.generators[k];
        let edge = m.edge(e);
        self.paths[edge.from.0]
            .concat(&EdgeWord::single(Letter::forward(e)))
            .concat(&self.paths[edge.to.0].inverse())
    }

    /// Rewrites a closed path at the basepoint in the generators: tree
    /// letters vanish, non-tree letters become generators.
    pub fn rewrite(&self, w: &EdgeWord) -> FreeWord {
        FreeWord(
            w.letters()
                .iter()
                .filter(|l| !self.in_tree[l.edge.0])
                .map(|l| {
                    let k = self.generators.iter().position(|&e| e == l.edge).expect("non-tree edge");
                    GenLetter::new(k, l.inverse)
                })
                .collect(),
        )
        .reduce()
    }
}

/// Generator names `x, y, z, ...` for small ranks, `x1, x2, ...` otherwise.
pub fn default_generator_names(rank: usize) -> Vec<String> {
    const SHORT: [&str; 4] = ["x", "y", "z", "w"];
    if rank <= SHORT.len() {
        SHORT[..rank].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=rank).map(|i| format!("x{i}")).collect()
    }
}

/// Unique tree path from the basepoint to its image.
pub fn default_connector(g: &GraphMap, tree: &[EdgeId], basepoint: VertexId) -> Result<EdgeWord, FreeGroupError> {
    let basis = TreeBasis::new(g.domain(), tree, basepoint)?;
    Ok(basis.tree_path(g.vertex_image(basepoint)).clone())
}

/// Endomorphism of `π1(domain, basepoint)` induced by `g`: each generator
/// loop is mapped by edge substitution, conjugated back to the basepoint by
/// `connector` (a path from the basepoint to its image), rewritten in the
/// generators and reduced.
pub fn induced_pi1_endomorphism(
    g: &GraphMap,
    tree: &[EdgeId],
    basepoint: VertexId,
    connector: &EdgeWord,
) -> Result<FreeEndomorphism, FreeGroupError> {
    let m = g.domain();
    let basis = TreeBasis::new(m, tree, basepoint)?;
    let target = g.vertex_image(basepoint);
    let connector_ok = if connector.is_empty() {
        target == basepoint
    } else {
        connector.endpoints(m).map(|ends| ends == (basepoint, target)).unwrap_or(false)
    };
    if !connector_ok {
        return Err(FreeGroupError::InvalidConnector {
            expected_from: m.vertex_name(basepoint).to_string(),
            expected_to: m.vertex_name(target).to_string(),
        });
    }
    let images = (0..basis.rank())
        .map(|k| {
            let image = g.apply(&basis.generator_loop(m, k));
            basis.rewrite(&connector.concat(&image).concat(&connector.inverse()))
        })
        .collect();
    Ok(FreeEndomorphism::new(default_generator_names(basis.rank()), images))
}
