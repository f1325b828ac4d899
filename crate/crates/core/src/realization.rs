//! Random arrival times and the realized network they induce.
//!
//! Agent `v` observes friend `u` iff `t_u < t_v`, so the realized network
//! orients every edge from the later endpoint to the earlier one. The realized
//! subnetwork of `v` is everything reachable from `v` along such edges, i.e.
//! along paths with strictly decreasing arrival times.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph, VertexSet};

/// One draw of arrival times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub times: Vec<f64>,
    /// Vertices in arrival order.
    pub order: Vec<usize>,
    /// `rank[v]` is the arrival position of `v`, starting at 0.
    pub rank: Vec<usize>,
}

impl Realization {
    /// Builds a realization from explicit times. Times must be distinct and
    /// lie in `[0, 1]`.
    pub fn from_times(times: Vec<f64>) -> Result<Self> {
        if let Some(t) = times.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(Error::input(format!("arrival time {t} outside [0, 1]")));
        }
        let order = sorted_order(&times);
        if order.windows(2).any(|w| times[w[0]] == times[w[1]]) {
            return Err(Error::input("arrival times must be distinct"));
        }
        Ok(Self::with_order(times, order))
    }

    /// Realization whose arrival order is `order` (first arrival first), with
    /// evenly spaced times.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut times = vec![f64::NAN; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || !times[v].is_nan() {
                return Err(Error::input("arrival order must be a permutation"));
            }
            times[v] = (i + 1) as f64 / (n + 1) as f64;
        }
        Ok(Self::with_order(times, order.to_vec()))
    }

    fn with_order(times: Vec<f64>, order: Vec<usize>) -> Self {
        let mut rank = vec![0; times.len()];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        Realization { times, order, rank }
    }

    pub fn n(&self) -> usize {
        self.times.len()
    }

    pub fn arrived_before(&self, u: usize, v: usize) -> bool {
        self.times[u] < self.times[v]
    }
}

fn sorted_order(times: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    order
}

/// Draws `n` independent uniform arrival times. Exact ties are redrawn.
pub fn sample_arrivals<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Realization> {
    if n == 0 {
        return Err(Error::input("need at least one agent"));
    }
    let mut times: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    loop {
        let order = sorted_order(&times);
        let tied: Vec<usize> = order.windows(2).filter(|w| times[w[0]] == times[w[1]]).map(|w| w[1]).collect();
        if tied.is_empty() {
            return Ok(Realization::with_order(times, order));
        }
        log::debug!("redrawing {} tied arrival times", tied.len());
        for v in tied {
            times[v] = rng.random::<f64>();
        }
    }
}

/// What agent `v` sees under a realization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizedView {
    /// Friends who arrived before `v`.
    pub observed_friends: VertexSet,
    /// Vertex set of the realized subnetwork of `v`, including `v`.
    pub reachable: VertexSet,
}

/// Vertices reachable from `v` along strictly decreasing arrival times.
pub fn reachable_set(g: &Graph, times: &[f64], v: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    seen[v] = true;
    let mut out = vec![v];
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if !seen[w] && times[w] < times[u] {
                seen[w] = true;
                out.push(w);
                stack.push(w);
            }
        }
    }
    out
}

fn check_sizes(g: &Graph, real: &Realization, v: usize) -> Result<()> {
    if real.n() != g.n() {
        return Err(Error::input(format!("realization has {} agents, graph has {}", real.n(), g.n())));
    }
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    Ok(())
}

pub fn realized_view(g: &Graph, real: &Realization, v: usize) -> Result<RealizedView> {
    check_sizes(g, real, v)?;
    let observed = g.neighbors(v).iter().copied().filter(|&u| real.arrived_before(u, v)).collect();
    Ok(RealizedView {
        observed_friends: VertexSet::from_sorted(observed),
        reachable: VertexSet::from_unsorted(reachable_set(g, &real.times, v)),
    })
}

/// Whether the realized subnetwork of `v` stays inside the ball of radius
/// `r - 1` around `v`.
pub fn localization_event(g: &Graph, real: &Realization, v: usize, r: usize) -> Result<bool> {
    check_sizes(g, real, v)?;
    if r == 0 {
        return Err(Error::input("radius must be at least 1"));
    }
    Ok(LocalizationProbe::new(g, v, r - 1).contained(&real.times, r - 1))
}

/// Repeated localization checks around a fixed vertex. Distances up to
/// `max_radius + 1` are precomputed; a search stops as soon as it leaves the
/// ball of radius `limit`.
#[derive(Debug, Clone)]
pub struct LocalizationProbe<'g> {
    g: &'g Graph,
    v: usize,
    dist: Vec<Option<usize>>,
    max_radius: usize,
}

impl<'g> LocalizationProbe<'g> {
    pub fn new(g: &'g Graph, v: usize, max_radius: usize) -> Self {
        let dist = g.bfs_distances(v, max_radius.saturating_add(1));
        LocalizationProbe { g, v, dist, max_radius }
    }

    pub fn vertex(&self) -> usize {
        self.v
    }

    /// Largest distance from `v` over the realized subnetwork, or `None` when
    /// that subnetwork leaves the ball of radius `limit`.
    pub fn max_distance(&self, times: &[f64], limit: usize) -> Option<usize> {
        assert!(limit <= self.max_radius, "limit beyond precomputed radius");
        let mut seen = vec![false; self.g.n()];
        seen[self.v] = true;
        let mut stack = vec![self.v];
        let mut far = 0;
        while let Some(u) = stack.pop() {
            for &w in self.g.neighbors(u) {
                if seen[w] || times[w] >= times[u] {
                    continue;
                }
                match self.dist[w] {
                    Some(d) if d <= limit => far = far.max(d),
                    _ => return None,
                }
                seen[w] = true;
                stack.push(w);
            }
        }
        Some(far)
    }

    pub fn contained(&self, times: &[f64], limit: usize) -> bool {
        self.max_distance(times, limit).is_some()
    }
}

/// The event that every designated friend of `v` who arrived before `v` has a
/// realized subnetwork in `G \ v` confined to its own ball of radius `r - 1`
/// in `G \ v`.
pub fn w_event(g: &Graph, real: &Realization, v: usize, designated: &VertexSet, r: usize) -> Result<bool> {
    check_sizes(g, real, v)?;
    Ok(WEvent::new(g, v, designated, r)?.holds(&real.times))
}

/// Precomputed [`w_event`] checker: `G \ v` and the balls around each
/// designated friend are built once.
#[derive(Debug, Clone)]
pub struct WEvent {
    v: usize,
    sub: Subgraph,
    /// `(original id, local id, membership mask of the ball)` per designated friend.
    friends: Vec<(usize, usize, Vec<bool>)>,
}

impl WEvent {
    pub fn new(g: &Graph, v: usize, designated: &VertexSet, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::input("radius must be at least 1"));
        }
        let friends = g.friends(v)?;
        if !designated.is_subset(&friends) {
            return Err(Error::input(format!("designated set is not a subset of the friends of {v}")));
        }
        let sub = g.delete_vertex(v)?;
        let friends = designated
            .iter()
            .map(|u| {
                let local = sub.local_id(u).expect("friend of v survives deletion of v");
                let mut mask = vec![false; sub.graph.n()];
                for w in sub.graph.ball(local, r - 1).iter() {
                    mask[w] = true;
                }
                (u, local, mask)
            })
            .collect();
        Ok(WEvent { v, sub, friends })
    }

    /// Evaluates the event; `times` is indexed by original vertex id.
    pub fn holds(&self, times: &[f64]) -> bool {
        let local_times: Vec<f64> = self.sub.original_ids.iter().map(|&o| times[o]).collect();
        self.friends.iter().filter(|(u, _, _)| times[*u] < times[self.v]).all(|(_, local, mask)| {
            reachable_set(&self.sub.graph, &local_times, *local).into_iter().all(|w| mask[w])
        })
    }
}
