//! Local learning requirement certificates.
//!
//! A certificate for `v` names `d` friends of `v`, each of degree at least `d`,
//! whose radius-`r` balls in `G \ v` are pairwise disjoint and contain only
//! vertices of degree at most `D`. Degrees are measured in `G`.

use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundReport};
use crate::error::{Error, Result};
use crate::graph::{Graph, Length, Subgraph, VertexSet};

/// Search for a maximum disjoint family is exact up to this many candidates.
pub const EXACT_CANDIDATES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlrCertificate {
    pub v: usize,
    pub d: usize,
    pub r: usize,
    pub cap_d: usize,
    pub designated: VertexSet,
}

impl LlrCertificate {
    /// The error bound this certificate yields at precision `p`; `None` when
    /// `d < 2`, where the bound is undefined.
    pub fn bound(&self, p: f64) -> Result<Option<BoundReport>> {
        if self.d < 2 {
            return Ok(None);
        }
        bounds::delta_bound(p, self.d as u64, self.r as u64, self.cap_d as u64).map(Some)
    }
}

/// Balls of radius `r` in `G \ v` around each friend, in original ids.
fn friend_balls(sub: &Subgraph, friends: &[usize], r: usize) -> Vec<VertexSet> {
    friends
        .iter()
        .map(|&u| {
            let local = sub.local_id(u).expect("friend survives deletion of v");
            let ids = sub.graph.ball(local, r).iter().map(|w| sub.original_ids[w]).collect();
            VertexSet::from_sorted(ids)
        })
        .collect()
}

/// Whether every condition of the certificate holds in `g`.
pub fn verify_certificate(g: &Graph, cert: &LlrCertificate) -> Result<bool> {
    let friends = g.friends(cert.v)?;
    if let Some(u) = cert.designated.iter().find(|&u| u >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: u, n: g.n() });
    }
    if cert.designated.len() != cert.d || !cert.designated.is_subset(&friends) {
        return Ok(false);
    }
    if cert.designated.iter().any(|u| g.neighbors(u).len() < cert.d) {
        return Ok(false);
    }
    let sub = g.delete_vertex(cert.v)?;
    let balls = friend_balls(&sub, cert.designated.as_slice(), cert.r);
    let mut owner = vec![false; g.n()];
    for ball in &balls {
        for w in ball.iter() {
            if owner[w] || g.neighbors(w).len() > cert.cap_d {
                return Ok(false);
            }
            owner[w] = true;
        }
    }
    Ok(true)
}

/// Largest `d` such that at least `d` of the values are at least `d`.
pub fn h_index(values: &[usize]) -> usize {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted.iter().enumerate().take_while(|(i, &x)| x > *i).count()
}

/// The certificate forced by the girth: with `r = floor((g - 3) / 2)` the
/// balls around distinct friends cannot meet, or they would close a cycle
/// shorter than `g`. Acyclic graphs use the diameter as radius.
pub fn girth_certificate(g: &Graph, v: usize) -> Result<LlrCertificate> {
    let friends = g.friends(v)?;
    let r = match g.girth() {
        Length::Finite(_) => bounds::girth_radius(g.girth()) as usize,
        Length::Infinite => g.diameter(),
    };
    let degrees: Vec<usize> = friends.iter().map(|u| g.neighbors(u).len()).collect();
    let d = h_index(&degrees);
    let designated: Vec<usize> = friends.iter().filter(|&u| g.neighbors(u).len() >= d).take(d).collect();
    Ok(LlrCertificate { v, d, r, cap_d: g.max_degree(), designated: VertexSet::from_sorted(designated) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSearch {
    pub certificate: LlrCertificate,
    /// False when a greedy disjoint family was used for some candidate `d`,
    /// so a larger `d` might exist.
    pub exact: bool,
}

/// Maximum-size pairwise non-conflicting subset of up to 64 items, by branch
/// and bound. `conflict[i]` is the bitmask of items clashing with `i`.
fn max_disjoint_exact(conflict: &[u64]) -> Vec<usize> {
    fn go(cand: u64, chosen: u64, conflict: &[u64], best: &mut u64) {
        if cand == 0 {
            if chosen.count_ones() > best.count_ones() {
                *best = chosen;
            }
            return;
        }
        if chosen.count_ones() + cand.count_ones() <= best.count_ones() {
            return;
        }
        let i = cand.trailing_zeros() as usize;
        let bit = 1u64 << i;
        go(cand & !bit & !conflict[i], chosen | bit, conflict, best);
        if conflict[i] & cand & !bit != 0 {
            go(cand & !bit, chosen, conflict, best);
        }
    }
    let all = if conflict.len() == 64 { u64::MAX } else { (1u64 << conflict.len()) - 1 };
    let mut best = 0;
    go(all, 0, conflict, &mut best);
    (0..conflict.len()).filter(|i| best >> i & 1 == 1).collect()
}

/// Greedy disjoint family, smallest ball first.
fn max_disjoint_greedy(balls: &[&VertexSet], n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..balls.len()).collect();
    idx.sort_by_key(|&i| balls[i].len());
    let mut used = vec![false; n];
    let mut out = vec![];
    for i in idx {
        if balls[i].iter().all(|w| !used[w]) {
            balls[i].iter().for_each(|w| used[w] = true);
            out.push(i);
        }
    }
    out.sort_unstable();
    out
}

/// Certificate with the largest `d` for the given radius.
pub fn search_certificate(g: &Graph, v: usize, r: usize) -> Result<CertificateSearch> {
    let friends = g.friends(v)?.into_vec();
    let sub = g.delete_vertex(v)?;
    let balls = friend_balls(&sub, &friends, r);
    let mut exact = true;
    // Friends (indices into `friends`) forming a disjoint family among those of
    // degree at least `d`.
    let mut family = |d: usize| -> Vec<usize> {
        let cand: Vec<usize> = (0..friends.len()).filter(|&i| g.neighbors(friends[i]).len() >= d).collect();
        if cand.len() <= EXACT_CANDIDATES {
            let conflict: Vec<u64> = cand
                .iter()
                .map(|&i| {
                    cand.iter()
                        .enumerate()
                        .filter(|&(_, &j)| j != i && !balls[i].is_disjoint(&balls[j]))
                        .fold(0u64, |m, (k, _)| m | 1 << k)
                })
                .collect();
            max_disjoint_exact(&conflict).into_iter().map(|k| cand[k]).collect()
        } else {
            exact = false;
            let picked: Vec<&VertexSet> = cand.iter().map(|&i| &balls[i]).collect();
            max_disjoint_greedy(&picked, g.n()).into_iter().map(|k| cand[k]).collect()
        }
    };
    // Feasibility is monotone in d: a family for d also serves d - 1.
    let (mut lo, mut hi) = (0, friends.len());
    let mut best = vec![];
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        let f = family(mid);
        if f.len() >= mid {
            lo = mid;
            best = f;
        } else {
            hi = mid - 1;
        }
    }
    let d = lo;
    let chosen: Vec<usize> = best.into_iter().take(d).collect();
    let cap_d = chosen.iter().flat_map(|&i| balls[i].iter()).map(|w| g.neighbors(w).len()).max().unwrap_or(0);
    let designated = VertexSet::from_unsorted(chosen.iter().map(|&i| friends[i]).collect());
    Ok(CertificateSearch { certificate: LlrCertificate { v, d, r, cap_d, designated }, exact })
}
