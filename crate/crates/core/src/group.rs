//! Finite presentations, coset enumeration and Smith normal form.

use std::fmt;

use thiserror::Error;

use crate::free_group::{FreeWord, GenLetter};
use crate::text::{content_lines, keyword, ParseError};

pub const DEFAULT_MAX_COSETS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("coset table overflow: {live} live cosets, {defined} defined (cap {cap})")]
    Overflow { live: usize, defined: usize, cap: usize },
}

/// Generators and relators of a finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<FreeWord>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<FreeWord>) -> Self {
        let rank = generators.len();
        assert!(
            relators.iter().all(|r| r.letters().iter().all(|l| l.gen < rank)),
            "relator letters must be declared generators"
        );
        Presentation { generators, relators }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Parses `gens a b` followed by `rel ...` lines. A relation
    /// `u = v = w` contributes the relators `u v^-1` and `u w^-1`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut generators: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        for (line, content) in content_lines(text) {
            match keyword(content) {
                ("gens", rest) => {
                    if generators.is_some() {
                        return Err(ParseError::new(line, "duplicate `gens` line"));
                    }
                    let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                    for (i, n) in names.iter().enumerate() {
                        if !n.chars().all(|c| c.is_alphanumeric() || c == '_') {
                            return Err(ParseError::new(line, format!("bad generator name `{n}`")));
                        }
                        if names[..i].contains(n) {
                            return Err(ParseError::new(line, format!("generator `{n}` declared twice")));
                        }
                    }
                    generators = Some(names);
                }
                ("rel", rest) => {
                    let names = generators
                        .as_ref()
                        .ok_or_else(|| ParseError::new(line, "`rel` before `gens`"))?;
                    let sides = rest
                        .split('=')
                        .map(|side| FreeWord::parse(names, side))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| ParseError::new(line, e.to_string()))?;
                    if sides.len() == 1 {
                        if sides[0].is_empty() {
                            return Err(ParseError::new(line, "empty relator"));
                        }
                        relators.push(sides[0].clone());
                    } else {
                        for other in &sides[1..] {
                            relators.push(sides[0].concat(&other.inverse()));
                        }
                    }
                }
                (k, _) => return Err(ParseError::new(line, format!("unknown keyword `{k}`"))),
            }
        }
        let generators = generators.ok_or_else(|| ParseError::new(0, "missing `gens` line"))?;
        Ok(Presentation { generators, relators })
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn relation_matrix(&self) -> IntegerMatrix {
        let rows: Vec<Vec<i64>> = self.relators.iter().map(|r| r.exponent_sums(self.rank())).collect();
        IntegerMatrix::from_rows(self.rank(), &rows)
    }

    /// Same group with generator `i` renamed and renumbered to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut generators = vec![String::new(); self.rank()];
        for (i, &p) in perm.iter().enumerate() {
            generators[p] = self.generators[i].clone();
        }
        let relators = self
            .relators
            .iter()
            .map(|r| FreeWord(r.letters().iter().map(|l| GenLetter::new(perm[l.gen], l.inverse)).collect()))
            .collect();
        Presentation { generators, relators }
    }

    pub fn with_relators(&self, relators: Vec<FreeWord>) -> Self {
        Presentation::new(self.generators.clone(), relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens {}", self.generators.join(" "))?;
        for r in &self.relators {
            writeln!(f, "rel {}", r.display(&self.generators))?;
        }
        Ok(())
    }
}

const UNDEFINED: usize = usize::MAX;

/// A completed coset table for the trivial subgroup.
#[derive(Clone, Debug)]
pub struct CosetTable {
    /// `table[c][2g]` is `c·g`, `table[c][2g + 1]` is `c·g^-1`.
    table: Vec<Vec<usize>>,
    /// Total cosets defined during enumeration, including ones later merged.
    pub defined: usize,
    /// Largest number of simultaneously live cosets.
    pub max_live: usize,
}

impl CosetTable {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    /// Coset reached from coset 0 by reading `w`.
    pub fn trace(&self, w: &FreeWord) -> usize {
        self.act(0, w)
    }

    pub fn act(&self, coset: usize, w: &FreeWord) -> usize {
        w.letters().iter().fold(coset, |c, l| self.table[c][column(*l)])
    }

    /// True when `w` represents the identity.
    pub fn is_trivial(&self, w: &FreeWord) -> bool {
        (0..self.order()).all(|c| self.act(c, w) == c)
    }

    /// Permutation of the cosets induced by generator `g`.
    pub fn generator_permutation(&self, g: usize) -> Vec<usize> {
        self.table.iter().map(|row| row[2 * g]).collect()
    }
}

fn column(l: GenLetter) -> usize {
    2 * l.gen + usize::from(l.inverse)
}

fn inverse_column(x: usize) -> usize {
    x ^ 1
}

struct Enumerator {
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    live: usize,
    max_live: usize,
    cap: usize,
    columns: usize,
    queue: Vec<usize>,
}

impl Enumerator {
    fn new(columns: usize, cap: usize) -> Self {
        Enumerator {
            table: vec![vec![UNDEFINED; columns]],
            parent: vec![0],
            live: 1,
            max_live: 1,
            cap,
            columns,
            queue: Vec::new(),
        }
    }

    fn overflow(&self) -> GroupError {
        GroupError::Overflow { live: self.live, defined: self.table.len(), cap: self.cap }
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), GroupError> {
        if self.live >= self.cap || self.table.len() >= self.cap.saturating_mul(16) {
            return Err(self.overflow());
        }
        let d = self.table.len();
        self.table.push(vec![UNDEFINED; self.columns]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][inverse_column(x)] = c;
        self.live += 1;
        self.max_live = self.max_live.max(self.live);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut k = c;
        while self.parent[k] != root {
            let next = self.parent[k];
            self.parent[k] = root;
            k = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop] = keep;
        self.live -= 1;
        self.queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.columns {
                let f = self.table[e][x];
                if f == UNDEFINED {
                    continue;
                }
                let ix = inverse_column(x);
                if self.table[f][ix] == e {
                    self.table[f][ix] = UNDEFINED;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.table[e1][x] != UNDEFINED {
                    let t = self.table[e1][x];
                    self.merge(f1, t);
                } else if self.table[f1][ix] != UNDEFINED {
                    let t = self.table[f1][ix];
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][ix] = e1;
                }
            }
        }
    }

    /// Scans `word` from coset `c` in both directions, defining new cosets
    /// for the first undefined forward entry until the relator closes.
    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> Result<(), GroupError> {
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = word.len();
        loop {
            while i < j && self.table[f][word[i]] != UNDEFINED {
                f = self.table[f][word[i]];
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.table[b][inverse_column(word[j - 1])] != UNDEFINED {
                b = self.table[b][inverse_column(word[j - 1])];
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.table[f][word[i]] = b;
                self.table[b][inverse_column(word[i])] = f;
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }

    fn finish(mut self) -> CosetTable {
        let live: Vec<usize> = (0..self.table.len()).filter(|&c| self.is_live(c)).collect();
        let mut index = vec![UNDEFINED; self.table.len()];
        for (k, &c) in live.iter().enumerate() {
            index[c] = k;
        }
        let table = live
            .iter()
            .map(|&c| {
                (0..self.columns)
                    .map(|x| {
                        let t = self.table[c][x];
                        index[self.rep(t)]
                    })
                    .collect()
            })
            .collect();
        CosetTable { table, defined: self.parent.len(), max_live: self.max_live }
    }
}

/// Enumerates the cosets of the trivial subgroup. Live cosets are visited
/// in order of definition; each relator is scanned at the coset with
/// undefined entries filled by new cosets, then any remaining undefined
/// entries in the coset's row are defined left to right.
pub fn todd_coxeter_table(p: &Presentation, max_cosets: usize) -> Result<CosetTable, GroupError> {
    assert!(max_cosets >= 1, "max_cosets must be positive");
    let columns = 2 * p.rank();
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| r.reduce().letters().iter().map(|&l| column(l)).collect())
        .collect();
    let mut e = Enumerator::new(columns, max_cosets);
    let mut c = 0;
    while c < e.table.len() {
        for r in &relators {
            if !e.is_live(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        for x in 0..columns {
            if !e.is_live(c) {
                break;
            }
            if e.table[c][x] == UNDEFINED {
                e.define(c, x)?;
            }
        }
        c += 1;
    }
    Ok(e.finish())
}

/// Order of the presented group, or `Overflow` if the enumeration needs
/// more than `max_cosets` live cosets.
pub fn todd_coxeter(p: &Presentation, max_cosets: usize) -> Result<usize, GroupError> {
    todd_coxeter_table(p, max_cosets).map(|t| t.order())
}

/// Rectangular matrix of integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// `cols` is needed for matrices with no rows.
    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntegerMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Determinant by fraction-free elimination; square matrices only.
    pub fn determinant(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<i128>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| a[i][k] != 0) else { return 0 };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        if n == 0 {
            return 1;
        }
        (sign * a[n - 1][n - 1]) as i64
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += k * row[source]`.
    fn add_row(&mut self, target: usize, source: usize, k: i64) {
        for j in 0..self.cols {
            let v = self.get(source, j);
            self.data[target * self.cols + j] += k * v;
        }
    }

    fn add_col(&mut self, target: usize, source: usize, k: i64) {
        for i in 0..self.rows {
            let v = self.get(i, source);
            self.data[i * self.cols + target] += k * v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self.data[r * self.cols + j] = -self.data[r * self.cols + j];
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `left * m * right = diagonal`, with `left` and `right` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: IntegerMatrix,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithForm {
    /// Diagonal entries `d1 | d2 | ...`, zeros last.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.diagonal.rows.min(self.diagonal.cols)).map(|i| self.diagonal.get(i, i)).collect()
    }
}

pub fn smith_form(m: &IntegerMatrix) -> SmithForm {
    let mut d = m.clone();
    let mut left = IntegerMatrix::identity(m.rows);
    let mut right = IntegerMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        let pivot = (t..d.rows)
            .flat_map(|i| (t..d.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| d.get(i, j) != 0)
            .min_by_key(|&(i, j)| d.get(i, j).abs());
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);
        let p = d.get(t, t);
        let mut clean = true;
        for i in t + 1..d.rows {
            let q = d.get(i, t).div_euclid(p);
            if q != 0 {
                d.add_row(i, t, -q);
                left.add_row(i, t, -q);
            }
            clean &= d.get(i, t) == 0;
        }
        for j in t + 1..d.cols {
            let q = d.get(t, j).div_euclid(p);
            if q != 0 {
                d.add_col(j, t, -q);
                right.add_col(j, t, -q);
            }
            clean &= d.get(t, j) == 0;
        }
        if !clean {
            continue;
        }
        let offender = (t + 1..d.rows)
            .flat_map(|i| (t + 1..d.cols).map(move |j| (i, j)))
            .find(|&(i, j)| d.get(i, j) % p != 0);
        if let Some((i, _)) = offender {
            d.add_row(t, i, 1);
            left.add_row(t, i, 1);
            continue;
        }
        if p < 0 {
            d.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    SmithForm { diagonal: d, left, right }
}

/// Invariant factors of `m`.
pub fn smith_normal_form(m: &IntegerMatrix) -> Vec<i64> {
    smith_form(m).invariant_factors()
}

/// Finitely generated abelian group `Z^rank ⊕ Z/t1 ⊕ Z/t2 ⊕ ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub torsion: Vec<u64>,
    pub rank: usize,
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Abelianization of the presented group.
pub fn h1(p: &Presentation) -> AbelianInvariants {
    let factors = smith_normal_form(&p.relation_matrix());
    let nonzero = factors.iter().filter(|&&d| d != 0).count();
    AbelianInvariants {
        torsion: factors.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect(),
        rank: p.rank() - nonzero,
    }
}
