//! Coxeter matrices, generator subsets, components and bipartitions.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Default bound on the number of generators.
pub const MAX_RANK: usize = 64;

/// An entry of a Coxeter matrix. `Infinite` orders above every finite label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl Label {
    pub fn is_finite(self) -> bool {
        matches!(self, Label::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinite => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Label::Finite(m) => s.serialize_u32(*m),
            Label::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("matrix is asymmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("diagonal entry {i} is not 1")]
    BadDiagonal { i: usize },
    #[error("off-diagonal entry ({i}, {j}) is {label}, must be >= 2")]
    EntryTooSmall { i: usize, j: usize, label: Label },
    #[error("rank {rank} exceeds the limit {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("{0} names given for a matrix of rank {1}")]
    NameCount(usize, usize),
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("empty generator subset")]
    EmptySubset,
    #[error("odd cycle: component is not bipartite")]
    OddCycle,
    #[error("generator index {0} out of range")]
    OutOfRange(usize),
}

/// A set of generators as a bitmask over dense indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GenSet(pub u64);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn all(rank: usize) -> GenSet {
        if rank == 64 {
            GenSet(u64::MAX)
        } else {
            GenSet((1u64 << rank) - 1)
        }
    }

    pub fn singleton(i: usize) -> GenSet {
        GenSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    pub fn union(self, other: GenSet) -> GenSet {
        GenSet(self.0 | other.0)
    }

    pub fn intersection(self, other: GenSet) -> GenSet {
        GenSet(self.0 & other.0)
    }

    pub fn difference(self, other: GenSet) -> GenSet {
        GenSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl FromIterator<usize> for GenSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = GenSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A word in the generators, as dense indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

/// `u w u w ...` with `m` factors, starting with `u`.
pub fn alternating_word(u: &Word, w: &Word, m: usize) -> Word {
    let mut out = Vec::with_capacity(m * (u.len() + w.len()) / 2 + u.len());
    for k in 0..m {
        out.extend_from_slice(if k % 2 == 0 { &u.0 } else { &w.0 });
    }
    Word(out)
}

/// A validated Coxeter matrix with generator names in declaration order.
#[derive(Clone, PartialEq, Eq)]
pub struct CoxeterMatrix {
    names: Vec<String>,
    entries: Vec<Label>,
}

impl fmt::Debug for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterMatrix {:?} [", self.names)?;
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                let m = self.get(i, j);
                if m != Label::Finite(2) {
                    write!(f, " {}-{}:{}", self.names[i], self.names[j], m)?;
                }
            }
        }
        write!(f, " ]")
    }
}

/// Checks the Coxeter-matrix invariants on raw rows.
pub fn validate(rows: &[Vec<Label>]) -> Result<(), CoxeterError> {
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(CoxeterError::NotSquare { rows: n, row: i, len: row.len() });
        }
    }
    for i in 0..n {
        if rows[i][i] != Label::Finite(1) {
            return Err(CoxeterError::BadDiagonal { i });
        }
        for j in 0..n {
            if rows[i][j] != rows[j][i] {
                return Err(CoxeterError::Asymmetric { i: i.min(j), j: i.max(j) });
            }
            if i != j && rows[i][j] < Label::Finite(2) {
                return Err(CoxeterError::EntryTooSmall { i, j, label: rows[i][j] });
            }
        }
    }
    Ok(())
}

impl CoxeterMatrix {
    pub fn new(names: Vec<String>, rows: Vec<Vec<Label>>) -> Result<Self, CoxeterError> {
        Self::with_max_rank(names, rows, MAX_RANK)
    }

    pub fn with_max_rank(
        names: Vec<String>,
        rows: Vec<Vec<Label>>,
        max_rank: usize,
    ) -> Result<Self, CoxeterError> {
        validate(&rows)?;
        let n = rows.len();
        if n > max_rank.min(MAX_RANK) {
            return Err(CoxeterError::RankTooLarge { rank: n, max: max_rank.min(MAX_RANK) });
        }
        if names.len() != n {
            return Err(CoxeterError::NameCount(names.len(), n));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(CoxeterError::DuplicateName(a.clone()));
            }
        }
        Ok(CoxeterMatrix {
            names,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from edges; absent pairs get label 2.
    pub fn from_edges<S: AsRef<str>>(
        names: &[S],
        edges: &[(usize, usize, Label)],
    ) -> Result<Self, CoxeterError> {
        let n = names.len();
        let mut rows = vec![vec![Label::Finite(2); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Label::Finite(1);
        }
        for &(i, j, m) in edges {
            if i >= n {
                return Err(CoxeterError::OutOfRange(i));
            }
            if j >= n {
                return Err(CoxeterError::OutOfRange(j));
            }
            rows[i][j] = m;
            rows[j][i] = m;
        }
        Self::new(names.iter().map(|s| s.as_ref().to_string()).collect(), rows)
    }

    /// Convenience constructor: `edges` as `(name, name, label)` triples.
    pub fn from_named_edges(names: &[&str], edges: &[(&str, &str, Label)]) -> Result<Self, CoxeterError> {
        let idx = |s: &str| names.iter().position(|n| *n == s).expect("unknown name");
        let edges: Vec<_> = edges.iter().map(|&(a, b, m)| (idx(a), idx(b), m)).collect();
        Self::from_edges(names, &edges)
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, i: usize, j: usize) -> Label {
        self.entries[i * self.rank() + j]
    }

    pub fn rows(&self) -> Vec<Vec<Label>> {
        self.entries.chunks(self.rank()).map(|r| r.to_vec()).collect()
    }

    pub fn all(&self) -> GenSet {
        GenSet::all(self.rank())
    }

    /// Every label occurring off the diagonal.
    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        let n = self.rank();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| self.get(i, j)))
    }

    pub fn commute(&self, i: usize, j: usize) -> bool {
        i == j || self.get(i, j) == Label::Finite(2)
    }

    /// Pairwise-commuting check for a set of generators.
    pub fn is_commuting(&self, set: GenSet) -> bool {
        set.iter().all(|i| set.iter().all(|j| self.commute(i, j)))
    }

    pub fn neighbours(&self, i: usize, within: GenSet) -> GenSet {
        within
            .iter()
            .filter(|&j| j != i && self.get(i, j) > Label::Finite(2))
            .collect()
    }

    /// Connected components of the whole Coxeter graph, ordered by least member.
    pub fn components(&self) -> Vec<GenSet> {
        self.components_of(self.all())
    }

    /// Connected components of the graph induced on `within`.
    pub fn components_of(&self, within: GenSet) -> Vec<GenSet> {
        let mut seen = GenSet::EMPTY;
        let mut out = Vec::new();
        for start in within.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = GenSet::singleton(start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for w in self.neighbours(v, within).iter() {
                    if !comp.contains(w) {
                        comp.insert(w);
                        stack.push(w);
                    }
                }
            }
            seen = seen.union(comp);
            out.push(comp);
        }
        out
    }

    /// Two-colouring of a connected component; the least generator gets the first class.
    pub fn bipartition(&self, component: GenSet) -> Result<(GenSet, GenSet), CoxeterError> {
        let Some(start) = component.first() else {
            return Err(CoxeterError::EmptySubset);
        };
        let mut colour = vec![None; self.rank()];
        colour[start] = Some(false);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let c = colour[v].unwrap();
            for w in self.neighbours(v, component).iter() {
                match colour[w] {
                    None => {
                        colour[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return Err(CoxeterError::OddCycle),
                    Some(_) => {}
                }
            }
        }
        let first = component.iter().filter(|&i| colour[i] == Some(false)).collect();
        let second = component.iter().filter(|&i| colour[i] == Some(true)).collect();
        Ok((first, second))
    }

    /// The parabolic submatrix on `subset`.
    pub fn restrict(&self, subset: GenSet) -> Result<Restriction, CoxeterError> {
        if subset.is_empty() {
            return Err(CoxeterError::EmptySubset);
        }
        if let Some(bad) = subset.iter().find(|&i| i >= self.rank()) {
            return Err(CoxeterError::OutOfRange(bad));
        }
        let parent: Vec<usize> = subset.iter().collect();
        let rows = parent
            .iter()
            .map(|&i| parent.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        let names = parent.iter().map(|&i| self.names[i].clone()).collect();
        let matrix = CoxeterMatrix::new(names, rows)?;
        Ok(Restriction { matrix, parent })
    }

    pub fn format_set(&self, set: GenSet) -> String {
        let names: Vec<&str> = set.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn format_word(&self, word: &Word) -> String {
        word.0.iter().map(|&i| self.name(i)).collect::<Vec<_>>().join(" ")
    }
}

/// A parabolic restriction with its map back to parent indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub matrix: CoxeterMatrix,
    pub parent: Vec<usize>,
}

impl Restriction {
    pub fn to_parent_set(&self, set: GenSet) -> GenSet {
        set.iter().map(|i| self.parent[i]).collect()
    }

    pub fn to_parent_word(&self, word: &Word) -> Word {
        Word(word.0.iter().map(|&i| self.parent[i]).collect())
    }

    /// Maps a parent word whose letters all lie in the restriction.
    pub fn from_parent_word(&self, word: &Word) -> Option<Word> {
        word.0
            .iter()
            .map(|&p| self.parent.iter().position(|&q| q == p))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }
}
