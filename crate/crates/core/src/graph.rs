//! Bit-row graphs and vertex sets.
//!
//! Every vertex set carries the size of its universe so that set algebra
//! between sets of different graphs is caught early. Rows are stored as
//! little-endian `u64` words; graphs with at most 64 vertices never touch
//! the heap for a single row.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

type Words = SmallVec<[u64; 1]>;

#[inline]
fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

/// A subset of `{0, ..., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Words,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: smallvec::smallvec![0; word_count(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(n);
            let bits = hi - lo;
            *w = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        }
        s
    }

    /// `{0, ..., k-1}` inside a universe of size `n`.
    pub fn prefix(n: usize, k: usize) -> Self {
        assert!(k <= n, "prefix {k} exceeds universe {n}");
        Self::full(k).resized(n)
    }

    pub fn singleton(n: usize, v: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(v);
        s
    }

    /// Builds a set from vertex indices, rejecting indices outside the universe.
    pub fn try_from_iter<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Result<Self> {
        let mut s = Self::empty(n);
        for v in it {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Panicking variant of [`VertexSet::try_from_iter`] for literals in code and tests.
    pub fn from_iter_in<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        Self::try_from_iter(n, it).expect("vertex index out of range")
    }

    /// Single-word constructor; bits at or above `n` must be clear.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64);
        assert!(n == 64 || mask >> n == 0, "mask has bits outside the universe");
        let mut s = Self::empty(n);
        if n > 0 {
            s.words[0] = mask;
        }
        s
    }

    /// Low word of the set; only meaningful for universes of at most 64 vertices.
    pub fn mask(&self) -> u64 {
        debug_assert!(self.n <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    /// Same members in a universe of a different size (members must fit).
    pub fn resized(&self, n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in self.iter() {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} outside universe {}", self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    /// Smallest member.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn same_universe(&self, other: &Self) {
        debug_assert_eq!(self.n, other.n, "vertex sets over different universes");
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.same_universe(other);
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &Self) -> Self {
        self.same_universe(other);
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.same_universe(other);
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.same_universe(other);
        let mut s = self.clone();
        for (a, b) in s.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        s
    }

    pub fn intersect_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Drops every member `<= v`.
    pub fn retain_above(&mut self, v: usize) {
        let wi = v / 64;
        for w in self.words.iter_mut().take(wi) {
            *w = 0;
        }
        if wi < self.words.len() {
            let b = v % 64;
            self.words[wi] &= if b == 63 { 0 } else { !((2u64 << b) - 1) };
        }
    }

    /// `{0..n} \ self`.
    pub fn complement(&self) -> Self {
        Self::full(self.n).difference(self)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Compares the sorted member lists lexicographically.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    rows: Vec<VertexSet>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            rows: vec![VertexSet::empty(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 0..n {
            let mut row = VertexSet::full(n);
            row.remove(v);
            g.rows[v] = row;
        }
        g
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows, validating symmetry and loops.
    pub fn from_rows(rows: Vec<VertexSet>) -> Result<Self> {
        let n = rows.len();
        for (v, row) in rows.iter().enumerate() {
            if row.universe() != n {
                return Err(Error::SizeMismatch {
                    left: row.universe(),
                    right: n,
                });
            }
            if row.contains(v) {
                return Err(Error::SelfLoop(v));
            }
            for u in row.iter() {
                if !rows[u].contains(v) {
                    return Err(Error::Asymmetric { u: v, v: u });
                }
            }
        }
        Ok(Graph { rows })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n {
            return Err(Error::VertexOutOfRange { vertex: u, n });
        }
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.try_add_edge(u, v).expect("invalid edge");
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u].remove(v);
        self.rows[v].remove(u);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Number of edges with both ends in `set`.
    pub fn edges_within(&self, set: &VertexSet) -> usize {
        set.iter()
            .map(|v| self.rows[v].intersection_len(set))
            .sum::<usize>()
            / 2
    }

    /// Replaces the neighbourhood of `v` and returns the number of edge edits.
    pub fn set_neighbourhood(&mut self, v: usize, new: &VertexSet) -> usize {
        assert!(!new.contains(v), "neighbourhood of {v} contains itself");
        let old = self.rows[v].clone();
        for u in old.difference(new).iter() {
            self.rows[u].remove(v);
        }
        for u in new.difference(&old).iter() {
            self.rows[u].insert(v);
        }
        self.rows[v] = new.clone();
        old.symmetric_difference(new).len()
    }

    /// The graph whose vertex `perm[v]` plays the role of `v`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n());
        let mut g = Graph::empty(self.n());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn induced(&self, set: &VertexSet) -> Graph {
        let verts = set.to_vec();
        let mut g = Graph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n());
        for v in 0..self.n() {
            let mut row = self.rows[v].complement();
            row.remove(v);
            g.rows[v] = row;
        }
        g
    }

    /// Checks symmetry, irreflexivity and row universes.
    pub fn validate(&self) -> Result<()> {
        Graph::from_rows(self.rows.clone()).map(|_| ())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n())?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}
