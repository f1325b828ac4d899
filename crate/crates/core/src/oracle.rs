//! Exact Bayesian learning quality on small graphs.
//!
//! Agents see their signal, the actions of earlier friends, and the vertex set
//! of their realized subnetwork. With that extra information the equilibrium
//! becomes sequential: an agent's information set determines which agents can
//! possibly have influenced it, and every one of those has a strictly smaller
//! realized subnetwork. So decisions can be fixed level by level in the size of
//! the realized subnetwork, each agent playing the Bayes action and following
//! its own signal when indifferent.
//!
//! Scenarios are `(theta, signals, arrival order)`. Only the orientation of
//! each edge matters, so arrival orders are collapsed into acyclic orientations
//! weighted by how many orders produce them. With `p = num / den`, a scenario
//! has integer weight `count * num^correct * (den - num)^wrong` and the total
//! weight is `2 * n! * den^n`; all accumulation is exact in `u128`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::decision::{DecisionRule, InformationSet, Precision};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const MAX_AGENTS: usize = 9;
/// Upper limit on stored `(orientation, theta, signals)` triples.
pub const MAX_SCENARIOS: u64 = 1 << 27;

/// Exact equilibrium policy: information-set key to action.
#[derive(Debug, Clone)]
pub struct PolicyTable {
    n: usize,
    map: HashMap<u32, bool>,
}

fn pack(v: usize, own: bool, seen: u32, acts: u32, reach: u32) -> u32 {
    v as u32 | (own as u32) << 4 | seen << 5 | (acts & seen) << 14 | reach << 23
}

impl PolicyTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Action for an information set given as bitmasks over vertex ids:
    /// observed friends, their actions, and the realized subnetwork.
    /// Information sets that never occur fall back to the own signal.
    pub fn act_masks(&self, v: usize, own: bool, seen: u32, acts: u32, reach: u32) -> bool {
        self.map.get(&pack(v, own, seen, acts, reach)).copied().unwrap_or(own)
    }

    pub fn act(&self, v: usize, info: &InformationSet) -> bool {
        let Some(reachable) = &info.reachable_ids else {
            log::warn!("oracle policy consulted without a realized subnetwork; following the signal");
            return info.own_signal;
        };
        let (mut seen, mut acts) = (0u32, 0u32);
        for &(u, a) in &info.observed {
            seen |= 1 << u;
            acts |= (a as u32) << u;
        }
        let reach = reachable.iter().fold(0u32, |m, u| m | 1 << u);
        self.act_masks(v, info.own_signal, seen, acts, reach)
    }

    /// Flipping the signal and all observed actions flips the action.
    pub fn is_state_symmetric(&self) -> bool {
        self.map.iter().all(|(&key, &a)| {
            let seen = (key >> 5) & 0x1ff;
            let flipped = key ^ (1 << 4) ^ (seen << 14);
            self.map.get(&flipped) == Some(&!a)
        })
    }
}

struct Orientation {
    count: u64,
    order: Vec<usize>,
    observed: Vec<u32>,
    reach: Vec<u32>,
}

/// Every acyclic orientation reachable by an arrival order, with multiplicity.
pub struct ScenarioSpace {
    n: usize,
    orientations: Vec<Orientation>,
    permutations: u64,
}

impl ScenarioSpace {
    pub fn new(g: &Graph) -> Result<Self> {
        let n = g.n();
        if n == 0 {
            return Err(Error::input("exact oracle needs at least one vertex"));
        }
        if n > MAX_AGENTS {
            return Err(Error::Budget(format!("exact oracle supports at most {MAX_AGENTS} agents, got {n}")));
        }
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let mut index: HashMap<u64, usize> = HashMap::new();
        let mut orientations: Vec<Orientation> = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rank = vec![0usize; n];
        let mut permutations = 0u64;
        loop {
            permutations += 1;
            for (i, &v) in perm.iter().enumerate() {
                rank[v] = i;
            }
            let code = edges.iter().enumerate().fold(0u64, |c, (i, &(u, v))| c | ((rank[u] < rank[v]) as u64) << i);
            match index.get(&code) {
                Some(&i) => orientations[i].count += 1,
                None => {
                    index.insert(code, orientations.len());
                    orientations.push(Self::orient(g, &perm, &rank));
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let scenarios = orientations.len() as u64 * (1u64 << (n + 1));
        if scenarios > MAX_SCENARIOS {
            return Err(Error::Budget(format!(
                "{} orientations x {} signal profiles exceeds {MAX_SCENARIOS} scenarios",
                orientations.len(),
                1u64 << (n + 1)
            )));
        }
        Ok(ScenarioSpace { n, orientations, permutations })
    }

    fn orient(g: &Graph, perm: &[usize], rank: &[usize]) -> Orientation {
        let n = perm.len();
        let mut observed = vec![0u32; n];
        let mut reach = vec![0u32; n];
        for &v in perm {
            reach[v] = 1 << v;
            for &u in g.neighbors(v) {
                if rank[u] < rank[v] {
                    observed[v] |= 1 << u;
                    reach[v] |= reach[u];
                }
            }
        }
        Orientation { count: 1, order: perm.to_vec(), observed, reach }
    }

    pub fn orientation_count(&self) -> usize {
        self.orientations.len()
    }

    /// `n!`, the number of arrival orders.
    pub fn permutation_count(&self) -> u64 {
        self.permutations
    }

    /// Number of `(theta, signals, arrival order)` scenarios.
    pub fn scenario_count(&self) -> u64 {
        self.permutations * (1u64 << (self.n + 1))
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Integer scenario weights for precision `p`.
struct Weights {
    /// `by_correct[c] = num^c * (den - num)^(n - c)`.
    by_correct: Vec<u128>,
    total: u128,
}

impl Weights {
    fn new(n: usize, p: Precision, permutations: u64) -> Result<Self> {
        let overflow = || Error::Budget(format!("exact weights for p = {p} and n = {n} overflow 128 bits"));
        let (a, b) = (p.num() as u128, (p.den() - p.num()) as u128);
        let pow = |x: u128, k: usize| -> Option<u128> { (0..k).try_fold(1u128, |acc, _| acc.checked_mul(x)) };
        let by_correct =
            (0..=n).map(|c| pow(a, c)?.checked_mul(pow(b, n - c)?)).collect::<Option<Vec<_>>>().ok_or_else(overflow)?;
        let total = pow(p.den() as u128, n)
            .and_then(|d| d.checked_mul(permutations as u128))
            .and_then(|t| t.checked_mul(2))
            .ok_or_else(overflow)?;
        Ok(Weights { by_correct, total })
    }

    fn of(&self, n: usize, theta: bool, signals: u32) -> u128 {
        let ones = signals.count_ones() as usize;
        self.by_correct[if theta { ones } else { n - ones }]
    }
}

/// Output of [`exact_oracle`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleResult {
    pub n: usize,
    pub p: Precision,
    /// `l(v)` per vertex.
    pub per_vertex: Vec<f64>,
    /// `l(v)` as reduced fractions.
    pub per_vertex_exact: Vec<String>,
    pub learning_quality: f64,
    pub learning_quality_exact: String,
    pub scenarios: u64,
    pub orientations: usize,
    pub information_sets: usize,
    #[serde(skip)]
    pub exact: Vec<BigRational>,
    /// `P(a_v = theta | theta)` for `theta = 0` and `theta = 1`.
    #[serde(skip)]
    pub conditional: [Vec<BigRational>; 2],
    #[serde(skip)]
    pub policy: Option<Arc<PolicyTable>>,
}

impl OracleResult {
    pub fn exact_learning_quality(&self) -> BigRational {
        self.exact.iter().fold(BigRational::zero(), |s, x| s + x) / BigInt::from(self.n)
    }

    pub fn policy(&self) -> Arc<PolicyTable> {
        self.policy.clone().expect("oracle result carries its policy")
    }

    pub fn rule(&self) -> DecisionRule {
        DecisionRule::OraclePolicy(self.policy())
    }
}

fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact learning qualities of the canonical equilibrium.
pub fn exact_oracle(g: &Graph, p: Precision) -> Result<OracleResult> {
    let space = ScenarioSpace::new(g)?;
    let n = space.n;
    let w = Weights::new(n, p, space.permutations)?;
    let profiles = 1usize << (n + 1);
    let mask = (1u32 << n) - 1;
    let mut actions = vec![0u16; space.orientations.len() * profiles];
    let mut policy = HashMap::new();
    for level in 1..=n as u32 {
        let mut posterior: HashMap<u32, [u128; 2]> = HashMap::new();
        for (oi, o) in space.orientations.iter().enumerate() {
            let acts = &actions[oi * profiles..(oi + 1) * profiles];
            for v in (0..n).filter(|&v| o.reach[v].count_ones() == level) {
                for (s, &a) in acts.iter().enumerate() {
                    let (theta, signals) = (s >> n == 1, s as u32 & mask);
                    let key = pack(v, signals >> v & 1 == 1, o.observed[v], a as u32, o.reach[v]);
                    posterior.entry(key).or_default()[theta as usize] += o.count as u128 * w.of(n, theta, signals);
                }
            }
        }
        for (key, [w0, w1]) in posterior {
            let own = key >> 4 & 1 == 1;
            policy.insert(key, if w1 == w0 { own } else { w1 > w0 });
        }
        for (oi, o) in space.orientations.iter().enumerate() {
            let acts = &mut actions[oi * profiles..(oi + 1) * profiles];
            for v in (0..n).filter(|&v| o.reach[v].count_ones() == level) {
                for (s, a) in acts.iter_mut().enumerate() {
                    let own = s >> v & 1 == 1;
                    if policy[&pack(v, own, o.observed[v], *a as u32, o.reach[v])] {
                        *a |= 1 << v;
                    }
                }
            }
        }
    }
    let table = PolicyTable { n, map: policy };
    let mut hits = [vec![0u128; n], vec![0u128; n]];
    for (oi, o) in space.orientations.iter().enumerate() {
        for (s, &a) in actions[oi * profiles..(oi + 1) * profiles].iter().enumerate() {
            let (theta, signals) = (s >> n == 1, s as u32 & mask);
            let weight = o.count as u128 * w.of(n, theta, signals);
            for (v, h) in hits[theta as usize].iter_mut().enumerate() {
                if (a >> v & 1 == 1) == theta {
                    *h += weight;
                }
            }
        }
    }
    Ok(assemble(n, p, &space, &w, hits, Some(Arc::new(table))))
}

fn assemble(
    n: usize,
    p: Precision,
    space: &ScenarioSpace,
    w: &Weights,
    hits: [Vec<u128>; 2],
    policy: Option<Arc<PolicyTable>>,
) -> OracleResult {
    let half = w.total / 2;
    let exact: Vec<BigRational> = (0..n).map(|v| ratio(hits[0][v] + hits[1][v], w.total)).collect();
    let conditional = [hits[0].iter().map(|&h| ratio(h, half)).collect(), hits[1].iter().map(|&h| ratio(h, half)).collect()];
    let total = exact.iter().fold(BigRational::zero(), |s, x| s + x) / BigInt::from(n);
    OracleResult {
        n,
        p,
        per_vertex: exact.iter().map(to_f64).collect(),
        per_vertex_exact: exact.iter().map(|x| x.to_string()).collect(),
        learning_quality: to_f64(&total),
        learning_quality_exact: total.to_string(),
        scenarios: space.scenario_count(),
        orientations: space.orientation_count(),
        information_sets: policy.as_ref().map_or(0, |t| t.len()),
        exact,
        conditional,
        policy,
    }
}

/// Exact learning qualities when every agent follows `rule`, given full
/// information sets (including the realized subnetwork).
pub fn evaluate_rule(g: &Graph, p: Precision, rule: &dyn Fn(usize, &InformationSet) -> bool) -> Result<OracleResult> {
    let space = ScenarioSpace::new(g)?;
    let n = space.n;
    let w = Weights::new(n, p, space.permutations)?;
    let mut hits = [vec![0u128; n], vec![0u128; n]];
    let mut actions = vec![false; n];
    for o in &space.orientations {
        for s in 0..1u32 << (n + 1) {
            let (theta, signals) = (s >> n == 1, s & ((1 << n) - 1));
            for &v in &o.order {
                let info = InformationSet {
                    own_signal: signals >> v & 1 == 1,
                    observed: (0..n).filter(|&u| o.observed[v] >> u & 1 == 1).map(|u| (u, actions[u])).collect(),
                    reachable_ids: Some(VertexSet::from_sorted((0..n).filter(|&u| o.reach[v] >> u & 1 == 1).collect())),
                };
                actions[v] = rule(v, &info);
            }
            let weight = o.count as u128 * w.of(n, theta, signals);
            for (v, h) in hits[theta as usize].iter_mut().enumerate() {
                if actions[v] == theta {
                    *h += weight;
                }
            }
        }
    }
    Ok(assemble(n, p, &space, &w, hits, None))
}

/// Exact `l(v)` when `v` alone switches from the equilibrium policy to
/// `deviation` and everyone else keeps playing `policy`.
pub fn deviation_quality(
    g: &Graph,
    p: Precision,
    policy: &PolicyTable,
    v: usize,
    deviation: &DecisionRule,
) -> Result<BigRational> {
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let r = evaluate_rule(g, p, &|u, info| if u == v { deviation.act(u, info) } else { policy.act(u, info) })?;
    Ok(r.exact[v].clone())
}
