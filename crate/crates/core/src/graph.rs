//! Undirected simple graphs and the metric primitives used throughout the
//! crate: degrees, balls, girth, vertex deletion and induced subgraphs.
//!
//! Vertices are the integers `0..n`. Adjacency lists are kept sorted, which
//! makes edge queries a binary search and keeps every traversal deterministic.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A length that may be infinite: graph distances between different
/// components, and the girth of a forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<usize> {
        match self {
            Length::Finite(l) => Some(l),
            Length::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Length::Infinite)
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(l) => write!(f, "{l}"),
            Length::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Length::Finite(l) => s.serialize_u64(*l as u64),
            Length::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Length {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(n) => Ok(Length::Finite(n as usize)),
            Repr::Str(s) if s == "infinite" => Ok(Length::Infinite),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("bad length {s:?}"))),
        }
    }
}

/// A sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Builds a set from arbitrary ids, checking range against a host graph of
    /// `n` vertices and rejecting duplicates.
    pub fn new(mut ids: Vec<usize>, n: usize) -> Result<Self> {
        ids.sort_unstable();
        if let Some(&v) = ids.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("duplicate vertex {} in set", w[0])));
        }
        Ok(VertexSet(ids))
    }

    /// Wraps ids that are already sorted and unique.
    pub(crate) fn from_sorted(ids: Vec<usize>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        VertexSet(ids)
    }

    /// Sorts and deduplicates; no range check.
    pub(crate) fn from_unsorted(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Undirected simple graph with sorted adjacency lists. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

/// A graph derived from another by keeping a subset of vertices, together with
/// the map from new ids back to the original ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    /// `original_ids[new] = old`; strictly increasing.
    pub original_ids: Vec<usize>,
}

impl Subgraph {
    /// New id of an original vertex, if it was kept.
    pub fn local_id(&self, original: usize) -> Option<usize> {
        self.original_ids.binary_search(&original).ok()
    }
}

impl Graph {
    /// Graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicate edges
    /// (in either orientation) and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::input(format!("duplicate edge {{{u}, {}}}", w[0])));
            }
        }
        Ok(Graph { adj, m: edges.len() })
    }

    /// Builds a graph from a possibly redundant edge list: both orientations of
    /// an edge and repeats collapse to one edge. Self-loops are still an error.
    pub fn from_edges_dedup(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut twice_m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            twice_m += list.len();
        }
        Ok(Graph { adj, m: twice_m / 2 })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        Ok(self.adj[v].len())
    }

    /// Sorted neighbor list. Panics on an out-of-range vertex.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Neighbor list as a set, after a range check.
    pub fn friends(&self, v: usize) -> Result<VertexSet> {
        self.check(v)?;
        Ok(VertexSet::from_sorted(self.adj[v].clone()))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Walks the adjacency structure and reports every broken invariant:
    /// sortedness, self-loops, duplicates, asymmetry and the edge count.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        let mut twice_m = 0;
        for (u, list) in self.adj.iter().enumerate() {
            twice_m += list.len();
            if list.windows(2).any(|w| w[0] >= w[1]) {
                problems.push(format!("adjacency of {u} is not strictly increasing"));
            }
            for &v in list {
                if v == u {
                    problems.push(format!("self-loop at {u}"));
                } else if v >= self.n() || !self.has_edge(v, u) {
                    problems.push(format!("edge {u}->{v} has no reverse"));
                }
            }
        }
        if twice_m != 2 * self.m {
            problems.push(format!("edge count {} but degree sum {twice_m}", self.m));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    /// BFS distances from `src`; `None` for unreachable vertices. Exploration
    /// stops past `max_depth`.
    pub fn bfs_distances(&self, src: usize, max_depth: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if du == max_depth {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<Length> {
        self.check(u)?;
        self.check(v)?;
        Ok(match self.bfs_distances(u, usize::MAX)[v] {
            Some(d) => Length::Finite(d),
            None => Length::Infinite,
        })
    }

    /// The ball of radius `r` around `v`: every vertex at distance at most `r`.
    pub fn neighborhood(&self, v: usize, r: usize) -> Result<VertexSet> {
        self.check(v)?;
        Ok(self.ball(v, r))
    }

    pub(crate) fn ball(&self, v: usize, r: usize) -> VertexSet {
        let mut seen = vec![false; self.n()];
        seen[v] = true;
        let mut out = vec![v];
        let mut frontier = vec![v];
        for _ in 0..r {
            let mut next = Vec::new();
            for &u in &frontier {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            out.extend_from_slice(&next);
            frontier = next;
        }
        VertexSet::from_unsorted(out)
    }

    /// Largest distance from `v` to a vertex in its component.
    pub fn eccentricity(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        Ok(self.bfs_distances(v, usize::MAX).into_iter().flatten().max().unwrap_or(0))
    }

    /// Largest finite distance between two vertices (the maximum over
    /// components). Zero for graphs without edges.
    pub fn diameter(&self) -> usize {
        (0..self.n()).map(|v| self.eccentricity(v).unwrap()).max().unwrap_or(0)
    }

    /// Length of the shortest cycle.
    ///
    /// One BFS per root; a non-tree edge `(u, w)` closes a walk of length
    /// `dist[u] + dist[w] + 1` through the root, which contains a cycle at
    /// most that long, and the shortest cycle is recovered exactly from any
    /// root on it. Each BFS stops once it cannot beat the best cycle so far.
    pub fn girth(&self) -> Length {
        let n = self.n();
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            for &t in &touched {
                dist[t] = usize::MAX;
                parent[t] = usize::MAX;
            }
            touched.clear();
            queue.clear();
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                let du = dist[u];
                if 2 * du >= best {
                    break;
                }
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = du + 1;
                        parent[w] = u;
                        touched.push(w);
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(du + dist[w] + 1);
                        if best == 3 {
                            break 'bfs;
                        }
                    }
                }
            }
            if best == 3 {
                break;
            }
        }
        if best == usize::MAX {
            Length::Infinite
        } else {
            Length::Finite(best)
        }
    }

    /// Connected component labels, numbered in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n()];
        let mut next = 0;
        for s in 0..self.n() {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// A proper 2-coloring if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.n()];
        for s in 0..self.n() {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = color[u].unwrap();
                for &w in &self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// `G \ v`: the subgraph induced by every vertex except `v`.
    pub fn delete_vertex(&self, v: usize) -> Result<Subgraph> {
        self.check(v)?;
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        Ok(self.induce(keep))
    }

    /// The subgraph induced by `keep`, re-indexed contiguously in increasing
    /// order of original id.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<Subgraph> {
        if let Some(v) = keep.iter().find(|&v| v >= self.n()) {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
        }
        Ok(self.induce(keep.as_slice().to_vec()))
    }

    fn induce(&self, keep: Vec<usize>) -> Subgraph {
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let mut m = 0;
        let adj: Vec<Vec<usize>> = keep
            .iter()
            .map(|&v| {
                let list: Vec<usize> =
                    self.adj[v].iter().filter_map(|&w| (new_id[w] != usize::MAX).then(|| new_id[w])).collect();
                m += list.len();
                list
            })
            .collect();
        Subgraph { graph: Graph { adj, m: m / 2 }, original_ids: keep }
    }

    /// Returns `(beta, good_fraction)`: `beta` is the fraction of vertices with
    /// degree below `threshold`, and `good_fraction` the fraction having at
    /// least `ceil(threshold / 2)` friends of degree at least `ceil(threshold / 2)`.
    pub fn high_degree_friend_fraction(&self, threshold: usize) -> Result<(f64, f64)> {
        if threshold == 0 {
            return Err(Error::input("degree threshold must be at least 1"));
        }
        let n = self.n();
        if n == 0 {
            return Ok((0.0, 1.0));
        }
        let half = threshold.div_ceil(2);
        let low = self.adj.iter().filter(|l| l.len() < threshold).count();
        let good = self
            .adj
            .iter()
            .filter(|l| l.iter().filter(|&&u| self.adj[u].len() >= half).count() >= half)
            .count();
        Ok((low as f64 / n as f64, good as f64 / n as f64))
    }

    /// Parses the text format: a header `n m`, then `m` lines `u v` with
    /// `0 <= u < v < n`. Blank lines and lines starting with `#` are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        let mut seen = std::collections::HashSet::with_capacity(m);
        for (line, text) in lines {
            let (u, v) = parse_pair(line, text)?;
            if u == v {
                return Err(Error::Parse { line, message: format!("self-loop {u} {v}") });
            }
            if u > v || v >= n {
                return Err(Error::Parse { line, message: format!("edge {u} {v} must satisfy u < v < {n}") });
            }
            if !seen.insert((u, v)) {
                return Err(Error::Parse { line, message: format!("duplicate edge {u} {v}") });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("header declares {m} edges but {} were listed", edges.len()),
            });
        }
        Graph::from_edges(n, &edges)
    }

    /// Canonical text form: header, then edges in lexicographic order.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::with_capacity(12 * (self.m + 1));
        writeln!(s, "{} {}", self.n(), self.m).unwrap();
        for (u, v) in self.edges() {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse { line, message: "expected two integers".into() })?;
        tok.parse().map_err(|_| Error::Parse { line, message: format!("not a non-negative integer: {tok:?}") })
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(Error::Parse { line, message: "trailing tokens".into() });
    }
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen;

    #[test]
    fn degree_examples() {
        let k4 = netgen::clique(4).unwrap();
        assert!((0..4).all(|v| k4.degree(v).unwrap() == 3));
        let c7 = netgen::cycle(7).unwrap();
        assert!((0..7).all(|v| c7.degree(v).unwrap() == 2));
        let star = netgen::star(5).unwrap();
        assert_eq!(star.degree(0).unwrap(), 5);
        assert!(matches!(star.degree(6), Err(Error::VertexOutOfRange { vertex: 6, n: 6 })));
    }

    #[test]
    fn neighborhood_examples() {
        let c6 = netgen::cycle(6).unwrap();
        assert_eq!(c6.neighborhood(3, 0).unwrap().as_slice(), &[3]);
        assert_eq!(c6.neighborhood(0, 1).unwrap().as_slice(), &[0, 1, 5]);
        let pet = netgen::petersen();
        for v in 0..10 {
            assert_eq!(pet.neighborhood(v, 1).unwrap().len(), 4);
        }
        assert!(c6.neighborhood(6, 1).is_err());
    }

    #[test]
    fn girth_examples() {
        assert_eq!(netgen::clique(4).unwrap().girth(), Length::Finite(3));
        assert_eq!(netgen::cycle(9).unwrap().girth(), Length::Finite(9));
        assert_eq!(netgen::path(5).unwrap().girth(), Length::Infinite);
        assert_eq!(netgen::petersen().girth(), Length::Finite(5));
        assert_eq!(Graph::empty(0).girth(), Length::Infinite);
    }

    #[test]
    fn deletion_examples() {
        let k3 = netgen::clique(3).unwrap();
        for v in 0..4 {
            assert_eq!(netgen::clique(4).unwrap().delete_vertex(v).unwrap().graph, k3);
        }
        let leaves = netgen::star(5).unwrap().delete_vertex(0).unwrap();
        assert_eq!((leaves.graph.n(), leaves.graph.m()), (5, 0));
        assert_eq!(leaves.original_ids, vec![1, 2, 3, 4, 5]);
        let p4 = netgen::cycle(5).unwrap().delete_vertex(2).unwrap();
        assert_eq!(p4.graph.girth(), Length::Infinite);
        assert_eq!(p4.graph.m(), 3);
        assert_eq!(p4.local_id(3), Some(2));
        assert_eq!(p4.local_id(2), None);
    }

    #[test]
    fn induced_examples() {
        let c6 = netgen::cycle(6).unwrap();
        let all = VertexSet::new((0..6).collect(), 6).unwrap();
        assert_eq!(c6.induced_subgraph(&all).unwrap().graph, c6);
        let p3 = c6.induced_subgraph(&VertexSet::new(vec![0, 1, 2], 6).unwrap()).unwrap();
        assert_eq!(p3.graph, netgen::path(3).unwrap());
        let b = netgen::celebrity(10, 3).unwrap();
        let commoners = VertexSet::new((0..10).collect(), 13).unwrap();
        assert_eq!(b.graph.induced_subgraph(&commoners).unwrap().graph.m(), 0);
        assert!(VertexSet::new(vec![1, 1], 6).is_err());
        assert!(VertexSet::new(vec![7], 6).is_err());
    }

    #[test]
    fn high_degree_friend_examples() {
        let pet = netgen::petersen();
        assert_eq!(pet.high_degree_friend_fraction(3).unwrap(), (0.0, 1.0));
        assert_eq!(netgen::clique(5).unwrap().high_degree_friend_fraction(4).unwrap(), (0.0, 1.0));
        // Star with 9 leaves, threshold 2: leaves fall below the threshold; every
        // vertex still has ceil(2/2) = 1 friend of degree >= 1.
        let star = netgen::star(9).unwrap();
        let (beta, good) = star.high_degree_friend_fraction(2).unwrap();
        assert!((beta - 0.9).abs() < 1e-15);
        assert_eq!(good, 1.0);
        // Threshold 4: no leaf has 2 friends and the center's friends have degree 1.
        let (beta, good) = star.high_degree_friend_fraction(4).unwrap();
        assert!((beta - 0.9).abs() < 1e-15);
        assert_eq!(good, 0.0);
    }

    #[test]
    fn text_format_round_trip_and_errors() {
        let g = netgen::petersen();
        let text = g.to_text();
        assert!(text.starts_with("10 15\n"));
        assert_eq!(Graph::from_text(&text).unwrap(), g);
        let commented = "# a comment\n3 2\n0 1\n# another\n1 2\n";
        assert_eq!(Graph::from_text(commented).unwrap(), netgen::path(3).unwrap());
        for (bad, line) in [("3 2\n0 1\n0 1\n", 3), ("3 1\n1 1\n", 2), ("3 1\n0 3\n", 2), ("3 2\n0 1\n", 1), ("3 1\n0 x\n", 2)] {
            match Graph::from_text(bad) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{bad:?}"),
                other => panic!("{bad:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn from_edges_rejects_duplicates_and_loops() {
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(2, 2)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
        let g = Graph::from_edges_dedup(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        g.validate().unwrap();
    }

    #[test]
    fn distance_is_infinite_across_components() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.distance(0, 1).unwrap(), Length::Finite(1));
        assert_eq!(g.distance(0, 3).unwrap(), Length::Infinite);
        assert_eq!(serde_json::to_string(&Length::Infinite).unwrap(), "\"infinite\"");
        assert_eq!(serde_json::from_str::<Length>("4").unwrap(), Length::Finite(4));
    }
}
