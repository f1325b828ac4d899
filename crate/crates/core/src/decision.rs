//! Signals, information sets and decision rules.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::oracle::PolicyTable;
use crate::realization::Realization;

/// Signal precision `p = num / den`, kept as an integer ratio so the exact
/// oracle can use exact arithmetic. Always reduced, with `1/2 < p <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Precision {
    num: u64,
    den: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Precision {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::input("precision denominator is zero"));
        }
        if 2 * num <= den || num > den {
            return Err(Error::validation(format!("precision {num}/{den} must lie in (1/2, 1]")));
        }
        let g = gcd(num, den);
        Ok(Precision { num: num / g, den: den / g })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Draws a Bernoulli(p) outcome exactly.
    pub fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> bool {
        rng.random_range(0..self.den) < self.num
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Precision {
    type Err = Error;

    /// Accepts `num/den` or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::input(format!("cannot parse precision {s:?}; expected num/den"));
        let (a, b) = match s.trim().split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        Precision::new(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?)
    }
}

impl TryFrom<String> for Precision {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Precision> for String {
    fn from(p: Precision) -> String {
        p.to_string()
    }
}

/// The state of the world and everyone's private signal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldState {
    pub theta: bool,
    pub signals: Vec<bool>,
    pub p: Precision,
}

pub fn sample_world<R: Rng + ?Sized>(n: usize, p: Precision, rng: &mut R) -> WorldState {
    let theta = rng.random_bool(0.5);
    let signals = (0..n).map(|_| if p.draw(rng) { theta } else { !theta }).collect();
    WorldState { theta, signals, p }
}

/// What an agent knows when acting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InformationSet {
    pub own_signal: bool,
    /// `(friend, action)` for friends who arrived earlier, by friend id.
    pub observed: Vec<(usize, bool)>,
    /// The vertex set of the realized subnetwork, when agents observe it.
    pub reachable_ids: Option<VertexSet>,
}

pub fn rule_signal(info: &InformationSet) -> bool {
    info.own_signal
}

fn count_vote(own: bool, ones: usize, zeros: usize, margin: usize) -> bool {
    if ones >= zeros + margin {
        true
    } else if zeros >= ones + margin {
        false
    } else {
        own
    }
}

/// Follows the observed majority once it leads by at least two; otherwise the
/// own signal.
pub fn rule_cascade(info: &InformationSet) -> bool {
    let ones = info.observed.iter().filter(|(_, a)| *a).count();
    count_vote(info.own_signal, ones, info.observed.len() - ones, 2)
}

/// Majority among observed designated friends; ties and no observation fall
/// back to the own signal.
pub fn rule_designated_majority(info: &InformationSet, designated: &VertexSet) -> bool {
    let (mut ones, mut zeros) = (0, 0);
    for &(u, a) in &info.observed {
        if designated.contains(u) {
            if a {
                ones += 1;
            } else {
                zeros += 1;
            }
        }
    }
    count_vote(info.own_signal, ones, zeros, 1)
}

/// A deterministic decision rule, shared by all agents.
#[derive(Debug, Clone)]
pub enum DecisionRule {
    Signal,
    Cascade,
    /// Designated friends per vertex.
    DesignatedMajority(Arc<Vec<VertexSet>>),
    /// Exact equilibrium policy for the graph it was computed on.
    OraclePolicy(Arc<PolicyTable>),
}

impl DecisionRule {
    pub fn name(&self) -> &'static str {
        match self {
            DecisionRule::Signal => "signal",
            DecisionRule::Cascade => "cascade",
            DecisionRule::DesignatedMajority(_) => "designated_majority",
            DecisionRule::OraclePolicy(_) => "oracle",
        }
    }

    /// Whether the rule needs the realized subnetwork in the information set.
    pub fn needs_reachable(&self) -> bool {
        matches!(self, DecisionRule::OraclePolicy(_))
    }

    pub fn act(&self, v: usize, info: &InformationSet) -> bool {
        match self {
            DecisionRule::Signal => rule_signal(info),
            DecisionRule::Cascade => rule_cascade(info),
            DecisionRule::DesignatedMajority(sets) => rule_designated_majority(info, &sets[v]),
            DecisionRule::OraclePolicy(table) => table.act(v, info),
        }
    }

    fn check(&self, g: &Graph) -> Result<()> {
        match self {
            DecisionRule::DesignatedMajority(sets) if sets.len() != g.n() => Err(Error::input(format!(
                "designated sets given for {} vertices, graph has {}",
                sets.len(),
                g.n()
            ))),
            DecisionRule::OraclePolicy(t) if t.n() != g.n() => {
                Err(Error::input(format!("policy table is for {} vertices, graph has {}", t.n(), g.n())))
            }
            _ => Ok(()),
        }
    }
}

/// Plays one round: agents act in arrival order, each on the information set
/// available at arrival. Returns every agent's action.
pub fn run_trial(g: &Graph, rule: &DecisionRule, world: &WorldState, real: &Realization) -> Result<Vec<bool>> {
    let n = g.n();
    if world.signals.len() != n || real.n() != n {
        return Err(Error::input(format!(
            "graph has {n} vertices but {} signals and {} arrival times",
            world.signals.len(),
            real.n()
        )));
    }
    rule.check(g)?;
    let mut actions = world.signals.clone();
    match rule {
        DecisionRule::Signal => {}
        DecisionRule::Cascade => {
            for &v in &real.order {
                let (mut ones, mut zeros) = (0, 0);
                for &u in g.neighbors(v) {
                    if real.rank[u] < real.rank[v] {
                        if actions[u] {
                            ones += 1;
                        } else {
                            zeros += 1;
                        }
                    }
                }
                actions[v] = count_vote(world.signals[v], ones, zeros, 2);
            }
        }
        DecisionRule::DesignatedMajority(sets) => {
            for &v in &real.order {
                let (mut ones, mut zeros) = (0, 0);
                for u in sets[v].iter() {
                    if real.rank[u] < real.rank[v] {
                        if actions[u] {
                            ones += 1;
                        } else {
                            zeros += 1;
                        }
                    }
                }
                actions[v] = count_vote(world.signals[v], ones, zeros, 1);
            }
        }
        DecisionRule::OraclePolicy(table) => {
            let mut reach = vec![0u32; n];
            for &v in &real.order {
                let (mut seen, mut acts) = (0u32, 0u32);
                reach[v] = 1 << v;
                for &u in g.neighbors(v) {
                    if real.rank[u] < real.rank[v] {
                        seen |= 1 << u;
                        acts |= (actions[u] as u32) << u;
                        reach[v] |= reach[u];
                    }
                }
                actions[v] = table.act_masks(v, world.signals[v], seen, acts, reach[v]);
            }
        }
    }
    Ok(actions)
}

/// The information set of `v` given the actions of earlier agents.
pub fn information_set(
    g: &Graph,
    real: &Realization,
    world: &WorldState,
    actions: &[bool],
    v: usize,
    with_reachable: bool,
) -> Result<InformationSet> {
    let view = crate::realization::realized_view(g, real, v)?;
    Ok(InformationSet {
        own_signal: world.signals[v],
        observed: view.observed_friends.iter().map(|u| (u, actions[u])).collect(),
        reachable_ids: with_reachable.then_some(view.reachable),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen;
    use crate::rng::trial_rng;

    fn info(own: bool, observed: &[bool]) -> InformationSet {
        InformationSet {
            own_signal: own,
            observed: observed.iter().enumerate().map(|(i, &a)| (i, a)).collect(),
            reachable_ids: None,
        }
    }

    #[test]
    fn precision_parsing() {
        let p: Precision = "7/10".parse().unwrap();
        assert_eq!((p.num(), p.den()), (7, 10));
        assert_eq!("6/8".parse::<Precision>().unwrap(), Precision::new(3, 4).unwrap());
        assert_eq!("1".parse::<Precision>().unwrap().value(), 1.0);
        for bad in ["1/2", "2/10", "11/10", "x/3", "3/0", ""] {
            assert!(bad.parse::<Precision>().is_err(), "{bad}");
        }
        assert_eq!(serde_json::to_string(&p).unwrap(), "\"7/10\"");
        assert_eq!(serde_json::from_str::<Precision>("\"3/4\"").unwrap(), Precision::new(3, 4).unwrap());
    }

    #[test]
    fn world_sampling() {
        let one = Precision::new(1, 1).unwrap();
        let w = sample_world(20, one, &mut trial_rng(1, 0));
        assert!(w.signals.iter().all(|&s| s == w.theta));
        let p = Precision::new(7, 10).unwrap();
        assert_eq!(sample_world(5, p, &mut trial_rng(3, 3)), sample_world(5, p, &mut trial_rng(3, 3)));
        let mut rng = trial_rng(5, 0);
        let trials = 100_000;
        let correct = (0..trials).filter(|_| {
            let w = sample_world(1, p, &mut rng);
            w.signals[0] == w.theta
        });
        let frac = correct.count() as f64 / trials as f64;
        assert!((frac - 0.7).abs() < 0.005, "{frac}");
    }

    #[test]
    fn rule_examples() {
        assert!(rule_signal(&info(true, &[])));
        assert!(!rule_signal(&info(false, &[true, true, true])));
        assert!(rule_cascade(&info(false, &[true, true])));
        assert!(rule_cascade(&info(true, &[])));
        assert!(!rule_cascade(&info(false, &[true, false])));
        assert!(!rule_cascade(&info(true, &[false, false, true, false])));
        let all = VertexSet::new(vec![0, 1, 2], 5).unwrap();
        assert!(rule_designated_majority(&info(false, &[true, true, false]), &all));
        assert!(!rule_designated_majority(&info(false, &[]), &all));
        assert!(rule_designated_majority(&info(true, &[true, false]), &all));
        assert!(!rule_designated_majority(&info(false, &[true, false]), &all));
        // Non-designated observations are ignored.
        let only3 = VertexSet::new(vec![3], 5).unwrap();
        assert!(!rule_designated_majority(&info(false, &[true, true, true]), &only3));
    }

    #[test]
    fn clique_cascade_trace() {
        let g = netgen::clique(3).unwrap();
        let p = Precision::new(7, 10).unwrap();
        let world = WorldState { theta: true, signals: vec![true, true, false], p };
        let real = Realization::from_order(&[0, 1, 2]).unwrap();
        assert_eq!(run_trial(&g, &DecisionRule::Cascade, &world, &real).unwrap(), vec![true, true, true]);
        assert_eq!(run_trial(&g, &DecisionRule::Signal, &world, &real).unwrap(), world.signals);
    }

    #[test]
    fn fast_paths_match_information_sets() {
        let g = netgen::random_regular(30, 4, 8).unwrap();
        let p = Precision::new(3, 4).unwrap();
        let sets: Vec<VertexSet> = (0..30).map(|v| g.friends(v).unwrap()).collect();
        let rules = [DecisionRule::Cascade, DecisionRule::DesignatedMajority(Arc::new(sets))];
        for t in 0..50 {
            let mut rng = trial_rng(77, t);
            let world = sample_world(30, p, &mut rng);
            let real = crate::realization::sample_arrivals(30, &mut rng).unwrap();
            for rule in &rules {
                let fast = run_trial(&g, rule, &world, &real).unwrap();
                let mut slow = world.signals.clone();
                for &v in &real.order {
                    let i = information_set(&g, &real, &world, &slow, v, false).unwrap();
                    slow[v] = rule.act(v, &i);
                }
                assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn edgeless_graph_actions_are_signals() {
        let g = Graph::empty(6);
        let p = Precision::new(9, 10).unwrap();
        let sets = Arc::new(vec![VertexSet::empty(); 6]);
        for t in 0..20 {
            let mut rng = trial_rng(4, t);
            let world = sample_world(6, p, &mut rng);
            let real = crate::realization::sample_arrivals(6, &mut rng).unwrap();
            for rule in [DecisionRule::Signal, DecisionRule::Cascade, DecisionRule::DesignatedMajority(sets.clone())] {
                assert_eq!(run_trial(&g, &rule, &world, &real).unwrap(), world.signals);
            }
        }
    }

    #[test]
    fn rules_are_state_symmetric() {
        let g = netgen::celebrity(5, 2).unwrap().graph;
        let p = Precision::new(7, 10).unwrap();
        let sets: Vec<VertexSet> = (0..7).map(|v| g.friends(v).unwrap()).collect();
        let rules = [DecisionRule::Signal, DecisionRule::Cascade, DecisionRule::DesignatedMajority(Arc::new(sets))];
        for t in 0..100 {
            let mut rng = trial_rng(6, t);
            let world = sample_world(7, p, &mut rng);
            let flipped = WorldState { theta: !world.theta, signals: world.signals.iter().map(|s| !s).collect(), p };
            let real = crate::realization::sample_arrivals(7, &mut rng).unwrap();
            for rule in &rules {
                let a = run_trial(&g, rule, &world, &real).unwrap();
                let b = run_trial(&g, rule, &flipped, &real).unwrap();
                assert!(a.iter().zip(&b).all(|(x, y)| x != y));
            }
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let g = netgen::path(3).unwrap();
        let p = Precision::new(3, 4).unwrap();
        let world = sample_world(2, p, &mut trial_rng(0, 0));
        let real = Realization::from_order(&[0, 1, 2]).unwrap();
        assert!(run_trial(&g, &DecisionRule::Signal, &world, &real).is_err());
        let world = sample_world(3, p, &mut trial_rng(0, 0));
        let rule = DecisionRule::DesignatedMajority(Arc::new(vec![VertexSet::empty()]));
        assert!(run_trial(&g, &rule, &world, &real).is_err());
    }
}
