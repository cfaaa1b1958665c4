//! Coxeter systems given by a Coxeter matrix.
//!
//! Elements are identified by their ShortLex-least reduced word. A
//! [`GroupTable`] enumerates every element up to a length cap, interns each
//! one to an [`ElementId`], and stores the left and right multiplication
//! tables by generators together with the Bruhat order.
//!
//! Generators are 0-based in the API and 1-based in every textual form.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Order of `st` for an infinite bond.
pub const INF: u32 = u32::MAX;

/// Default bound on the number of enumerated elements.
pub const DEFAULT_MAX_ELEMENTS: usize = 2_000_000;

/// A generator index, 0-based.
pub type Generator = usize;

/// Which side a generator multiplies from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// The symmetric matrix of orders `m_{st}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterMatrix {
    name: String,
    rank: usize,
    m: Vec<u32>,
}

impl CoxeterMatrix {
    /// Builds a matrix from off-diagonal bonds `(s, t, m_st)` (0-based);
    /// unspecified pairs commute.
    pub fn from_bonds(name: impl Into<String>, rank: usize, bonds: &[(usize, usize, u32)]) -> Result<Self> {
        if rank == 0 {
            return Err(Error::MalformedMatrix("rank must be positive".into()));
        }
        if rank > 64 {
            return Err(Error::MalformedMatrix("rank above 64 is not supported".into()));
        }
        let mut m = vec![2u32; rank * rank];
        let mut set = vec![false; rank * rank];
        for s in 0..rank {
            m[s * rank + s] = 1;
        }
        for &(s, t, order) in bonds {
            if s >= rank || t >= rank {
                return Err(Error::MalformedMatrix(format!(
                    "entry ({}, {}) outside rank {rank}",
                    s + 1,
                    t + 1
                )));
            }
            if s == t {
                return Err(Error::MalformedMatrix(format!(
                    "diagonal entry ({}, {}) given",
                    s + 1,
                    t + 1
                )));
            }
            if order < 2 {
                return Err(Error::MalformedMatrix(format!(
                    "m[{}][{}] = {order} is below 2",
                    s + 1,
                    t + 1
                )));
            }
            for (a, b) in [(s, t), (t, s)] {
                if set[a * rank + b] && m[a * rank + b] != order {
                    return Err(Error::MalformedMatrix(format!(
                        "asymmetric or conflicting entries for ({}, {})",
                        s + 1,
                        t + 1
                    )));
                }
                m[a * rank + b] = order;
                set[a * rank + b] = true;
            }
        }
        Ok(CoxeterMatrix {
            name: name.into(),
            rank,
            m,
        })
    }

    /// Parses a type string such as `A3`, `I2(inf)`, `Aff-A2`, or
    /// `file:PATH`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(path) = spec.strip_prefix("file:") {
            let text = std::fs::read_to_string(path)?;
            let mut matrix = Self::parse_matrix_text(&text)?;
            matrix.name = spec.to_string();
            return Ok(matrix);
        }
        let unknown = || Error::UnknownType(spec.to_string());
        if let Some(rest) = spec.strip_prefix("Aff-A") {
            let n: usize = rest.parse().map_err(|_| unknown())?;
            return match n {
                0 => Err(unknown()),
                1 => Self::from_bonds(spec, 2, &[(0, 1, INF)]),
                _ => {
                    let bonds: Vec<_> = (0..=n).map(|i| (i, (i + 1) % (n + 1), 3)).collect();
                    Self::from_bonds(spec, n + 1, &bonds)
                }
            };
        }
        if let Some(rest) = spec.strip_prefix("I2(") {
            let inner = rest.strip_suffix(')').ok_or_else(unknown)?;
            let order = if inner == "inf" {
                INF
            } else {
                inner.parse::<u32>().map_err(|_| unknown())?
            };
            if order < 2 {
                return Err(Error::MalformedMatrix(format!("I2({inner}) needs m >= 2")));
            }
            return Self::from_bonds(spec, 2, &[(0, 1, order)]);
        }
        let (family, n) = spec.split_at(spec.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?);
        let n: usize = n.parse().map_err(|_| unknown())?;
        let path = |n: usize| -> Vec<(usize, usize, u32)> { (0..n.saturating_sub(1)).map(|i| (i, i + 1, 3)).collect() };
        let bonds = match (family, n) {
            ("A", n) if n >= 1 => path(n),
            ("B", n) if n >= 2 => {
                let mut b = path(n);
                b[n - 2].2 = 4;
                b
            }
            ("D", n) if n >= 4 => {
                let mut b = path(n - 1);
                b.push((n - 3, n - 1, 3));
                b
            }
            ("E", n) if (6..=8).contains(&n) => {
                let mut b = vec![(0, 2, 3), (1, 3, 3)];
                b.extend((2..n - 1).map(|i| (i, i + 1, 3)));
                b
            }
            ("F", 4) => vec![(0, 1, 3), (1, 2, 4), (2, 3, 3)],
            ("G", 2) => vec![(0, 1, 6)],
            ("H", 3) => vec![(0, 1, 5), (1, 2, 3)],
            ("H", 4) => vec![(0, 1, 5), (1, 2, 3), (2, 3, 3)],
            _ => return Err(unknown()),
        };
        Self::from_bonds(spec, n, &bonds)
    }

    /// Parses the line-oriented matrix format: `rank N` followed by
    /// `s t m` lines (1-based, `m` an integer >= 2 or `inf`). Blank lines
    /// and `#` comments are ignored.
    pub fn parse_matrix_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedMatrix("empty matrix file".into()))?;
        let rank: usize = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["rank", n] => n
                .parse()
                .map_err(|_| Error::MalformedMatrix(format!("bad rank line {header:?}")))?,
            _ => return Err(Error::MalformedMatrix(format!("expected `rank N`, got {header:?}"))),
        };
        let mut bonds = Vec::new();
        for line in lines {
            let bad = || Error::MalformedMatrix(format!("bad entry line {line:?}"));
            let fields: Vec<_> = line.split_whitespace().collect();
            let [s, t, m] = fields[..] else { return Err(bad()) };
            let s: usize = s.parse().map_err(|_| bad())?;
            let t: usize = t.parse().map_err(|_| bad())?;
            if s == 0 || t == 0 {
                return Err(bad());
            }
            let m = if m == "inf" {
                INF
            } else {
                m.parse::<u32>().map_err(|_| bad())?
            };
            bonds.push((s - 1, t - 1, m));
        }
        Self::from_bonds("file", rank, &bonds)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `m_{st}`, with [`INF`] for infinite bonds.
    pub fn order(&self, s: Generator, t: Generator) -> u32 {
        self.m[s * self.rank + t]
    }

    pub fn has_infinite_bond(&self) -> bool {
        self.m.contains(&INF)
    }

    /// Whether the group is finite, decided by positive definiteness of the
    /// cosine form `B(s, t) = -cos(π / m_st)`.
    pub fn is_finite(&self) -> bool {
        if self.has_infinite_bond() {
            return false;
        }
        let n = self.rank;
        let mut a: Vec<f64> = self
            .m
            .iter()
            .map(|&m| -(std::f64::consts::PI / m as f64).cos())
            .collect();
        // Cholesky; an affine form is only semidefinite and gives a ~0 pivot.
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= a[j * n + k] * a[j * n + k];
            }
            if d <= 1e-9 {
                return false;
            }
            let d = d.sqrt();
            a[j * n + j] = d;
            for i in j + 1..n {
                let mut x = a[i * n + j];
                for k in 0..j {
                    x -= a[i * n + k] * a[j * n + k];
                }
                a[i * n + j] = x / d;
            }
        }
        true
    }

    /// If the Coxeter graph is a path with every edge of order 3 (type
    /// `A_n`), returns its nodes in path order.
    pub fn type_a_path(&self) -> Option<Vec<Generator>> {
        let n = self.rank;
        let mut neighbours = vec![Vec::new(); n];
        for (s, nb) in neighbours.iter_mut().enumerate() {
            for t in 0..n {
                match self.order(s, t) {
                    1 | 2 => {}
                    3 => nb.push(t),
                    _ => return None,
                }
            }
        }
        if n == 1 {
            return Some(vec![0]);
        }
        let start = (0..n).find(|&s| neighbours[s].len() == 1)?;
        if neighbours.iter().any(|nb| nb.len() > 2) {
            return None;
        }
        let mut path = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = neighbours[cur].iter().find(|&&t| t != prev) {
            if path.contains(&next) {
                return None;
            }
            path.push(next);
            prev = cur;
            cur = next;
        }
        (path.len() == n).then_some(path)
    }

    fn check_generator(&self, s: Generator) -> Result<()> {
        if s >= self.rank {
            Err(Error::InvalidGenerator {
                generator: s + 1,
                rank: self.rank,
            })
        } else {
            Ok(())
        }
    }

    /// All words reachable from `word` by braid moves (including
    /// commutations); `word` itself is included.
    pub fn braid_closure(&self, word: &[Generator]) -> Result<BTreeSet<Vec<Generator>>> {
        for &s in word {
            self.check_generator(s)?;
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(word.to_vec());
        queue.push_back(word.to_vec());
        while let Some(w) = queue.pop_front() {
            for i in 0..w.len().saturating_sub(1) {
                let (s, t) = (w[i], w[i + 1]);
                if s == t {
                    continue;
                }
                let m = self.order(s, t);
                if m == INF || i + m as usize > w.len() {
                    continue;
                }
                let m = m as usize;
                let alternating = (0..m).all(|j| w[i + j] == if j % 2 == 0 { s } else { t });
                if !alternating {
                    continue;
                }
                let mut u = w.clone();
                for j in 0..m {
                    u[i + j] = if j % 2 == 0 { t } else { s };
                }
                if seen.insert(u.clone()) {
                    queue.push_back(u);
                }
            }
        }
        Ok(seen)
    }

    /// The canonical (ShortLex-least reduced) word of the element
    /// represented by `word`, computed purely by word rewriting: cancel
    /// adjacent repeats, and search the braid closure for further
    /// cancellations until none exist.
    pub fn canonical_form(&self, word: &[Generator]) -> Result<Vec<Generator>> {
        let mut w = free_reduce(word);
        loop {
            let closure = self.braid_closure(&w)?;
            match closure.iter().find(|u| u.windows(2).any(|p| p[0] == p[1])) {
                Some(u) => w = free_reduce(u),
                None => return Ok(closure.into_iter().next().unwrap_or_default()),
            }
        }
    }

    /// All reduced words of the element represented by `word`.
    pub fn reduced_words(&self, word: &[Generator]) -> Result<BTreeSet<Vec<Generator>>> {
        let canonical = self.canonical_form(word)?;
        self.braid_closure(&canonical)
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

fn free_reduce(word: &[Generator]) -> Vec<Generator> {
    let mut out: Vec<Generator> = Vec::with_capacity(word.len());
    for &s in word {
        if out.last() == Some(&s) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    out
}

/// A subset of the generators, as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GeneratorSet(u64);

impl GeneratorSet {
    pub fn empty() -> Self {
        GeneratorSet(0)
    }

    pub fn all(rank: usize) -> Self {
        GeneratorSet(if rank >= 64 { u64::MAX } else { (1u64 << rank) - 1 })
    }

    pub fn from_bits(bits: u64) -> Self {
        GeneratorSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn from_generators<I: IntoIterator<Item = Generator>>(gens: I) -> Self {
        GeneratorSet(gens.into_iter().fold(0, |acc, s| acc | (1 << s)))
    }

    /// Parses `1,3` (1-based); `""`, `none` and `e` give the empty set.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "none" || text == "e" {
            return Ok(Self::empty());
        }
        let mut set = 0u64;
        for part in text.split(',') {
            let s: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::MalformedMatrix(format!("bad generator {part:?}")))?;
            if s == 0 || s > rank {
                return Err(Error::InvalidGenerator { generator: s, rank });
            }
            set |= 1 << (s - 1);
        }
        Ok(GeneratorSet(set))
    }

    pub fn contains(self, s: Generator) -> bool {
        self.0 >> s & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn intersects(self, other: GeneratorSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn iter(self) -> impl Iterator<Item = Generator> {
        (0..64).filter(move |&s| self.contains(s))
    }

    /// 1-based generator list.
    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|s| s + 1).collect()
    }

    /// Every subset of `{0, .., rank-1}`, ordered by size then bits.
    pub fn all_subsets(rank: usize) -> Vec<GeneratorSet> {
        let mut subsets: Vec<_> = (0..1u64 << rank).map(GeneratorSet).collect();
        subsets.sort_by_key(|s| (s.len(), s.0));
        subsets
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|s| (s + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Interned handle to an enumerated element. Ids are assigned in
/// length-then-ShortLex order, so comparing ids compares in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(pub u32);

impl ElementId {
    pub const IDENTITY: ElementId = ElementId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

const NONE: u32 = u32::MAX;

/// Every element of a Coxeter group up to a length cap, with memoized
/// products and Bruhat order. Frozen after construction.
#[derive(Debug)]
pub struct GroupTable {
    matrix: CoxeterMatrix,
    cap: Option<usize>,
    complete: bool,
    words: Vec<Vec<Generator>>,
    lengths: Vec<u32>,
    right: Vec<u32>,
    left: Vec<u32>,
    right_desc: Vec<u64>,
    left_desc: Vec<u64>,
    level_starts: Vec<usize>,
    by_word: HashMap<Vec<Generator>, ElementId>,
    bruhat: OnceLock<Vec<Vec<u64>>>,
}

impl GroupTable {
    /// Enumerates all elements of length at most `cap` (or the whole group
    /// when `cap` is `None`, which requires a finite group).
    pub fn enumerate(matrix: CoxeterMatrix, cap: Option<usize>) -> Result<Self> {
        Self::enumerate_with_limit(matrix, cap, DEFAULT_MAX_ELEMENTS)
    }

    /// As [`GroupTable::enumerate`], failing with
    /// [`Error::ResourceLimit`] once more than `max_elements` exist.
    pub fn enumerate_with_limit(matrix: CoxeterMatrix, cap: Option<usize>, max_elements: usize) -> Result<Self> {
        if cap.is_none() && !matrix.is_finite() {
            return Err(Error::CapRequired(matrix.name().to_string()));
        }
        let rank = matrix.rank();
        let cap_len = cap.unwrap_or(usize::MAX);

        // Products are filled level by level. A new element z = x·s learns
        // all of its right descents at creation from the dihedral subgroup
        // <s, t>: t is a descent iff x has an alternating descent chain
        // t, s, t, ... of length m_st - 1.
        let mut right: Vec<Vec<u32>> = vec![vec![NONE; rank]];
        let mut left: Vec<Vec<u32>> = vec![vec![NONE; rank]];
        let mut len: Vec<u32> = vec![0];
        let mut levels: Vec<Vec<usize>> = vec![vec![0]];

        let is_down = |right: &Vec<Vec<u32>>, len: &Vec<u32>, x: usize, a: usize| {
            let y = right[x][a];
            y != NONE && len[y as usize] < len[x]
        };

        let mut level = 1usize;
        while level <= cap_len {
            let mut next = Vec::new();
            for &x in &levels[level - 1] {
                for s in 0..rank {
                    if right[x][s] != NONE {
                        continue;
                    }
                    let mut descents: Vec<(usize, usize)> = Vec::new();
                    for t in (0..rank).filter(|&t| t != s) {
                        let m = matrix.order(s, t);
                        if m == INF {
                            continue;
                        }
                        let steps = m as usize - 1;
                        let mut cur = x;
                        let mut k = 0;
                        while k < steps {
                            let a = if k % 2 == 0 { t } else { s };
                            if !is_down(&right, &len, cur, a) {
                                break;
                            }
                            cur = right[cur][a] as usize;
                            k += 1;
                        }
                        if k < steps {
                            continue;
                        }
                        // z·t = cur · (alternating word of length m-1 ending in s)
                        let mut y = cur;
                        for i in 0..steps {
                            let a = if (steps - 1 - i).is_multiple_of(2) { s } else { t };
                            let up = right[y][a];
                            debug_assert!(up != NONE && len[up as usize] == len[y] + 1);
                            y = up as usize;
                        }
                        descents.push((t, y));
                    }
                    let z = len.len();
                    if z >= max_elements {
                        return Err(Error::ResourceLimit(max_elements));
                    }
                    right.push(vec![NONE; rank]);
                    left.push(vec![NONE; rank]);
                    len.push(level as u32);
                    right[x][s] = z as u32;
                    right[z][s] = x as u32;
                    for (t, y) in descents {
                        debug_assert_eq!(right[y][t], NONE);
                        right[y][t] = z as u32;
                        right[z][t] = y as u32;
                    }
                    next.push(z);
                }
            }
            // Left products into the new level: t·x = ((t·(x r))·r) for a
            // right descent r of x.
            for &x in &levels[level - 1] {
                for t in 0..rank {
                    if left[x][t] != NONE {
                        continue;
                    }
                    let z = if x == 0 {
                        right[0][t] as usize
                    } else {
                        let r = (0..rank)
                            .find(|&r| is_down(&right, &len, x, r))
                            .expect("nonidentity has a descent");
                        let shorter = right[x][r] as usize;
                        let a = left[shorter][t];
                        debug_assert!(a != NONE);
                        let z = right[a as usize][r];
                        debug_assert!(z != NONE);
                        z as usize
                    };
                    debug_assert_eq!(len[z], level as u32);
                    left[x][t] = z as u32;
                    left[z][t] = x as u32;
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
            level += 1;
        }

        // Canonical words: the least left descent, then the canonical word
        // of the remainder.
        let n = len.len();
        let mut words: Vec<Vec<Generator>> = vec![Vec::new(); n];
        for lvl in levels.iter().skip(1) {
            for &z in lvl {
                let s0 = (0..rank)
                    .find(|&t| left[z][t] != NONE && len[left[z][t] as usize] < len[z])
                    .expect("nonidentity has a left descent");
                let mut w = Vec::with_capacity(len[z] as usize);
                w.push(s0);
                w.extend_from_slice(&words[left[z][s0] as usize]);
                words[z] = w;
            }
        }

        // Renumber in length-then-ShortLex order.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| len[a].cmp(&len[b]).then_with(|| words[a].cmp(&words[b])));
        let mut new_id = vec![0u32; n];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new as u32;
        }
        let remap = |v: u32| if v == NONE { NONE } else { new_id[v as usize] };
        let mut flat_right = vec![NONE; n * rank];
        let mut flat_left = vec![NONE; n * rank];
        let mut right_desc = vec![0u64; n];
        let mut left_desc = vec![0u64; n];
        let mut lengths = vec![0u32; n];
        let mut new_words = vec![Vec::new(); n];
        for (new, &old) in order.iter().enumerate() {
            lengths[new] = len[old];
            new_words[new] = std::mem::take(&mut words[old]);
            for s in 0..rank {
                flat_right[new * rank + s] = remap(right[old][s]);
                flat_left[new * rank + s] = remap(left[old][s]);
                if right[old][s] != NONE && len[right[old][s] as usize] < len[old] {
                    right_desc[new] |= 1 << s;
                }
                if left[old][s] != NONE && len[left[old][s] as usize] < len[old] {
                    left_desc[new] |= 1 << s;
                }
            }
        }
        let mut level_starts = vec![0usize];
        for (i, w) in lengths.windows(2).enumerate() {
            if w[0] != w[1] {
                level_starts.push(i + 1);
            }
        }
        level_starts.push(n);
        let complete = flat_right.iter().all(|&p| p != NONE);
        let by_word = new_words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), ElementId(i as u32)))
            .collect();

        Ok(GroupTable {
            matrix,
            cap,
            complete,
            words: new_words,
            lengths,
            right: flat_right,
            left: flat_left,
            right_desc,
            left_desc,
            level_starts,
            by_word,
            bruhat: OnceLock::new(),
        })
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    /// True when every product of enumerated elements is enumerated, i.e.
    /// the table is the whole (finite) group.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The largest length present.
    pub fn max_length(&self) -> usize {
        self.lengths.last().copied().unwrap_or(0) as usize
    }

    /// Effective cap: the explicit cap, or the longest length for a
    /// complete table.
    pub fn effective_cap(&self) -> usize {
        self.cap.unwrap_or_else(|| self.max_length())
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = ElementId> + ExactSizeIterator {
        (0..self.words.len() as u32).map(ElementId)
    }

    /// Elements of length exactly `l`.
    pub fn elements_of_length(&self, l: usize) -> impl Iterator<Item = ElementId> {
        let (a, b) = if l + 1 < self.level_starts.len() {
            (self.level_starts[l], self.level_starts[l + 1])
        } else {
            (0, 0)
        };
        (a as u32..b as u32).map(ElementId)
    }

    /// Number of elements of each length, from 0 up.
    pub fn length_counts(&self) -> Vec<usize> {
        self.level_starts.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn length(&self, x: ElementId) -> usize {
        self.lengths[x.index()] as usize
    }

    /// The canonical reduced word (0-based generators).
    pub fn word(&self, x: ElementId) -> &[Generator] {
        &self.words[x.index()]
    }

    /// The id of an element given by its canonical word.
    pub fn lookup_canonical(&self, word: &[Generator]) -> Option<ElementId> {
        self.by_word.get(word).copied()
    }

    /// `x` rendered as comma-separated 1-based generators, `e` for the
    /// identity.
    pub fn display(&self, x: ElementId) -> String {
        let w = self.word(x);
        if w.is_empty() {
            "e".to_string()
        } else {
            w.iter().map(|s| (s + 1).to_string()).collect::<Vec<_>>().join(",")
        }
    }

    /// Parses `e` or a comma-separated 1-based word (not necessarily
    /// reduced) into an element.
    pub fn parse_element(&self, text: &str) -> Result<ElementId> {
        let text = text.trim();
        if text == "e" || text.is_empty() {
            return Ok(ElementId::IDENTITY);
        }
        let word = text
            .split(',')
            .map(|p| {
                let s: usize = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::MalformedMatrix(format!("bad element {text:?}")))?;
                if s == 0 {
                    return Err(Error::InvalidGenerator {
                        generator: 0,
                        rank: self.rank(),
                    });
                }
                Ok(s - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        self.element_from_word(&word)
    }

    /// The element represented by an arbitrary word, by successive right
    /// multiplication.
    pub fn element_from_word(&self, word: &[Generator]) -> Result<ElementId> {
        word.iter()
            .try_fold(ElementId::IDENTITY, |x, &s| self.mult_gen(x, s, Side::Right))
    }

    /// `s·x` or `x·s`.
    pub fn mult_gen(&self, x: ElementId, s: Generator, side: Side) -> Result<ElementId> {
        self.matrix.check_generator(s)?;
        let table = match side {
            Side::Right => &self.right,
            Side::Left => &self.left,
        };
        let p = table[x.index() * self.rank() + s];
        if p == NONE {
            Err(Error::OutOfRange {
                element: self.display(x),
                generator: s + 1,
                cap: self.effective_cap(),
            })
        } else {
            Ok(ElementId(p))
        }
    }

    /// Descent set as a bitmask.
    pub fn descent_set(&self, x: ElementId, side: Side) -> GeneratorSet {
        GeneratorSet::from_bits(match side {
            Side::Right => self.right_desc[x.index()],
            Side::Left => self.left_desc[x.index()],
        })
    }

    /// The descents of `x` on the given side, ascending.
    pub fn descents(&self, x: ElementId, side: Side) -> Vec<Generator> {
        self.descent_set(x, side).iter().collect()
    }

    pub fn is_descent(&self, x: ElementId, s: Generator, side: Side) -> bool {
        self.descent_set(x, side).contains(s)
    }

    fn bruhat_rows(&self) -> &Vec<Vec<u64>> {
        self.bruhat.get_or_init(|| {
            let n = self.len();
            let words = n.div_ceil(64);
            let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
            for y in 0..n {
                let mut row = vec![0u64; words];
                if y == 0 {
                    row[0] = 1;
                } else {
                    let yid = ElementId(y as u32);
                    let s = self.descent_set(yid, Side::Right).iter().next().expect("descent");
                    let ys = self.right[y * self.rank() + s] as usize;
                    let below = &rows[ys];
                    let end = self.level_starts[self.length(yid) + 1];
                    for x in 0..end {
                        let xs = if self.right_desc[x] >> s & 1 == 1 {
                            self.right[x * self.rank() + s] as usize
                        } else {
                            x
                        };
                        if below[xs / 64] >> (xs % 64) & 1 == 1 {
                            row[x / 64] |= 1 << (x % 64);
                        }
                    }
                }
                rows.push(row);
            }
            rows
        })
    }

    /// Bruhat order `x ≤ y`, via the recursion: for a right descent `s` of
    /// `y`, `x ≤ y` iff `min(x, xs) ≤ ys`. Computed once for all pairs on
    /// first use.
    pub fn bruhat_leq(&self, x: ElementId, y: ElementId) -> bool {
        let row = &self.bruhat_rows()[y.index()];
        row[x.index() / 64] >> (x.index() % 64) & 1 == 1
    }

    /// All `x ≤ y`, ascending.
    pub fn lower_interval(&self, y: ElementId) -> Vec<ElementId> {
        let row = &self.bruhat_rows()[y.index()];
        let mut out = Vec::new();
        for (i, &w) in row.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(ElementId((i * 64 + b) as u32));
                bits &= bits - 1;
            }
        }
        out
    }

    /// Minimal length representatives of `W_I \ W`: elements with no left
    /// descent in `subset`, in length-then-ShortLex order.
    pub fn min_coset_reps(&self, subset: GeneratorSet) -> Vec<ElementId> {
        self.elements()
            .filter(|&x| !self.descent_set(x, Side::Left).intersects(subset))
            .collect()
    }

    /// Splits `w = u·x` with `u ∈ W_I` and `x` a minimal coset
    /// representative, returning `(x, ℓ(u))`.
    pub fn coset_decompose(&self, w: ElementId, subset: GeneratorSet) -> (ElementId, usize) {
        let mut x = w;
        let mut steps = 0;
        loop {
            let common = self.left_desc[x.index()] & subset.bits();
            if common == 0 {
                return (x, steps);
            }
            let t = common.trailing_zeros() as usize;
            x = ElementId(self.left[x.index() * self.rank() + t]);
            steps += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(spec: &str) -> GroupTable {
        GroupTable::enumerate(CoxeterMatrix::parse_spec(spec).unwrap(), None).unwrap()
    }

    fn el(t: &GroupTable, w: &str) -> ElementId {
        t.parse_element(w).unwrap()
    }

    #[test]
    fn presets() {
        let a2 = CoxeterMatrix::parse_spec("A2").unwrap();
        assert_eq!(a2.rank(), 2);
        assert_eq!(a2.order(0, 1), 3);
        let inf = CoxeterMatrix::parse_spec("I2(inf)").unwrap();
        assert_eq!(inf.order(0, 1), INF);
        assert_eq!(CoxeterMatrix::parse_spec("G2").unwrap().order(0, 1), 6);
        let b3 = CoxeterMatrix::parse_spec("B3").unwrap();
        assert_eq!((b3.order(0, 1), b3.order(1, 2), b3.order(0, 2)), (3, 4, 2));
        let d4 = CoxeterMatrix::parse_spec("D4").unwrap();
        assert_eq!(
            (d4.order(0, 1), d4.order(1, 2), d4.order(1, 3), d4.order(2, 3)),
            (3, 3, 3, 2)
        );
        let h3 = CoxeterMatrix::parse_spec("H3").unwrap();
        assert_eq!((h3.order(0, 1), h3.order(1, 2)), (5, 3));
        let f4 = CoxeterMatrix::parse_spec("F4").unwrap();
        assert_eq!((f4.order(0, 1), f4.order(1, 2), f4.order(2, 3)), (3, 4, 3));
        let aff = CoxeterMatrix::parse_spec("Aff-A2").unwrap();
        assert_eq!((aff.rank(), aff.order(0, 2)), (3, 3));
        for bad in ["X3", "A0", "I2(1)", "I2(x)", "D3", "Aff-A", "H5", ""] {
            assert!(CoxeterMatrix::parse_spec(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn finiteness() {
        for spec in ["A1", "A3", "B3", "D4", "F4", "G2", "H3", "H4", "I2(7)", "E8"] {
            assert!(CoxeterMatrix::parse_spec(spec).unwrap().is_finite(), "{spec}");
        }
        for spec in ["I2(inf)", "Aff-A1", "Aff-A2", "Aff-A3"] {
            assert!(!CoxeterMatrix::parse_spec(spec).unwrap().is_finite(), "{spec}");
        }
        let hyperbolic = CoxeterMatrix::from_bonds("t", 3, &[(0, 1, 3), (1, 2, 3), (0, 2, 4)]).unwrap();
        assert!(!hyperbolic.is_finite());
    }

    #[test]
    fn matrix_file_format() {
        let m = CoxeterMatrix::parse_matrix_text("rank 3\n1 2 3\n# comment\n2 3 inf\n").unwrap();
        assert_eq!(
            (m.order(0, 1), m.order(1, 2), m.order(0, 2), m.order(2, 1)),
            (3, INF, 2, INF)
        );
        assert!(CoxeterMatrix::parse_matrix_text("rank 2\n1 2 1\n").is_err());
        assert!(CoxeterMatrix::parse_matrix_text("rank 2\n1 2 3\n2 1 4\n").is_err());
        assert!(CoxeterMatrix::parse_matrix_text("rank 2\n1 3 3\n").is_err());
        assert!(CoxeterMatrix::parse_matrix_text("rank 2\n1 1 3\n").is_err());
        assert!(CoxeterMatrix::parse_matrix_text("2\n").is_err());
        assert!(CoxeterMatrix::parse_matrix_text("rank 2\n1 2\n").is_err());
        // A consistent repeat is fine.
        assert!(CoxeterMatrix::parse_matrix_text("rank 2\n1 2 3\n2 1 3\n").is_ok());
    }

    #[test]
    fn canonical_form_examples() {
        let a2 = CoxeterMatrix::parse_spec("A2").unwrap();
        assert_eq!(
            a2.canonical_form(&[0, 1, 0]).unwrap(),
            a2.canonical_form(&[1, 0, 1]).unwrap()
        );
        assert_eq!(a2.canonical_form(&[0, 1, 0]).unwrap(), vec![0, 1, 0]);
        assert_eq!(a2.canonical_form(&[0, 0]).unwrap(), Vec::<usize>::new());
        assert_eq!(a2.canonical_form(&[0, 1, 0, 1]).unwrap(), vec![1, 0]);
        assert!(matches!(
            a2.canonical_form(&[2]),
            Err(Error::InvalidGenerator { generator: 3, rank: 2 })
        ));
        let inf = CoxeterMatrix::parse_spec("I2(inf)").unwrap();
        assert_eq!(inf.canonical_form(&[0, 1, 0, 1, 1, 0]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(table("A2").len(), 6);
        assert_eq!(table("B2").len(), 8);
        assert_eq!(table("G2").len(), 12);
        assert_eq!(table("A3").len(), 24);
        assert_eq!(table("B3").len(), 48);
        assert_eq!(table("H3").len(), 120);
        assert_eq!(table("D4").len(), 192);
        let inf = GroupTable::enumerate(CoxeterMatrix::parse_spec("I2(inf)").unwrap(), Some(5)).unwrap();
        assert_eq!(inf.len(), 11);
        assert!(!inf.is_complete());
        assert!(table("A3").is_complete());
        assert_eq!(table("A3").max_length(), 6);
        assert_eq!(table("A3").length_counts(), vec![1, 3, 5, 6, 5, 3, 1]);
    }

    #[test]
    fn cap_and_limits() {
        let m = CoxeterMatrix::parse_spec("Aff-A1").unwrap();
        assert!(matches!(
            GroupTable::enumerate(m.clone(), None),
            Err(Error::CapRequired(_))
        ));
        assert!(matches!(
            GroupTable::enumerate_with_limit(CoxeterMatrix::parse_spec("A4").unwrap(), None, 50),
            Err(Error::ResourceLimit(50))
        ));
        let t = GroupTable::enumerate(m, Some(3)).unwrap();
        let top = t.elements_of_length(3).next().unwrap();
        let up = (0..2).find(|&s| !t.is_descent(top, s, Side::Right)).unwrap();
        assert!(matches!(
            t.mult_gen(top, up, Side::Right),
            Err(Error::OutOfRange { cap: 3, .. })
        ));
        // A cap at or above the longest length yields the full group.
        let full = GroupTable::enumerate(CoxeterMatrix::parse_spec("A2").unwrap(), Some(3)).unwrap();
        assert!(full.is_complete());
        assert_eq!(full.len(), 6);
    }

    #[test]
    fn multiplication_examples() {
        let t = table("A2");
        let e = ElementId::IDENTITY;
        assert_eq!(t.word(t.mult_gen(e, 0, Side::Right).unwrap()), &[0]);
        let s1 = el(&t, "1");
        assert_eq!(t.mult_gen(s1, 0, Side::Right).unwrap(), e);
        let s1s2 = el(&t, "1,2");
        let w0 = t.mult_gen(s1s2, 0, Side::Right).unwrap();
        assert_eq!(t.word(w0), &[0, 1, 0]);
        assert_eq!(t.length(w0), 3);
        assert_eq!(t.mult_gen(s1s2, 1, Side::Left).unwrap(), w0);
        assert!(matches!(
            t.mult_gen(e, 5, Side::Right),
            Err(Error::InvalidGenerator { .. })
        ));
    }

    #[test]
    fn descent_examples() {
        let t = table("A2");
        assert!(t.descents(ElementId::IDENTITY, Side::Right).is_empty());
        let s1 = el(&t, "1");
        assert_eq!(t.descents(s1, Side::Right), vec![0]);
        assert_eq!(t.descents(s1, Side::Left), vec![0]);
        let s1s2 = el(&t, "1,2");
        assert_eq!(t.descents(s1s2, Side::Right), vec![1]);
        assert_eq!(t.descents(s1s2, Side::Left), vec![0]);
    }

    #[test]
    fn bruhat_examples() {
        let t = table("A2");
        for x in t.elements() {
            assert!(t.bruhat_leq(ElementId::IDENTITY, x));
            assert!(t.bruhat_leq(x, x));
        }
        assert!(!t.bruhat_leq(el(&t, "1"), el(&t, "2")));
        assert!(t.bruhat_leq(el(&t, "1"), el(&t, "2,1")));
        assert!(!t.bruhat_leq(el(&t, "1,2"), el(&t, "2,1")));
        assert_eq!(t.lower_interval(el(&t, "1,2")).len(), 4);
    }

    #[test]
    fn coset_rep_examples() {
        let t = table("A2");
        assert_eq!(t.min_coset_reps(GeneratorSet::empty()).len(), 6);
        let reps: Vec<String> = t
            .min_coset_reps(GeneratorSet::from_generators([0]))
            .into_iter()
            .map(|x| t.display(x))
            .collect();
        assert_eq!(reps, vec!["e", "2", "2,1"]);
        assert_eq!(t.min_coset_reps(GeneratorSet::all(2)), vec![ElementId::IDENTITY]);
        let w0 = el(&t, "1,2,1");
        assert_eq!(
            t.coset_decompose(w0, GeneratorSet::from_generators([0])),
            (el(&t, "2,1"), 1)
        );
    }

    #[test]
    fn type_a_detection() {
        assert_eq!(
            CoxeterMatrix::parse_spec("A3").unwrap().type_a_path(),
            Some(vec![0, 1, 2])
        );
        assert_eq!(CoxeterMatrix::parse_spec("A1").unwrap().type_a_path(), Some(vec![0]));
        assert_eq!(CoxeterMatrix::parse_spec("B3").unwrap().type_a_path(), None);
        assert_eq!(CoxeterMatrix::parse_spec("D4").unwrap().type_a_path(), None);
        assert_eq!(CoxeterMatrix::parse_spec("Aff-A2").unwrap().type_a_path(), None);
        let shuffled = CoxeterMatrix::from_bonds("p", 3, &[(0, 2, 3), (2, 1, 3)]).unwrap();
        assert_eq!(shuffled.type_a_path(), Some(vec![0, 2, 1]));
    }

    #[test]
    fn generator_sets() {
        let s = GeneratorSet::parse("1,3", 3).unwrap();
        assert_eq!(s.to_one_based(), vec![1, 3]);
        assert_eq!(s.to_string(), "[1,3]");
        assert!(GeneratorSet::parse("", 3).unwrap().is_empty());
        assert!(GeneratorSet::parse("4", 3).is_err());
        assert!(GeneratorSet::parse("0", 3).is_err());
        assert_eq!(GeneratorSet::all_subsets(2).len(), 4);
    }
}
