//! Monte Carlo estimation of learning quality, the clique cascade chain,
//! elimination strategies and robustness experiments.

use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::bounds::{self, LocalizationBound, Lemma3Report};
use crate::decision::{run_trial, sample_world, DecisionRule, Precision};
use crate::error::{Error, Result};
use crate::graph::{Graph, Length, VertexSet};
use crate::llr;
use crate::netgen::Part;
use crate::oracle;
use crate::realization::{sample_arrivals, LocalizationProbe, Realization};
use crate::rng::trial_rng;

/// Trials handed to one rayon task.
const CHUNK: u64 = 256;

/// Everything that determines a simulation except the graph.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub rule: DecisionRule,
    pub p: Precision,
    pub trials: u64,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub rule: String,
    pub p: Precision,
    pub seed: u64,
    pub trials: u64,
    /// Per vertex, the number of trials in which it acted correctly.
    pub correct: Vec<u64>,
    pub l_hat: Vec<f64>,
    pub learning_quality: f64,
    /// `sqrt(L (1 - L) / trials)`.
    pub se: f64,
}

impl SimResult {
    fn from_counts(rule: &str, p: Precision, seed: u64, trials: u64, correct: Vec<u64>) -> Self {
        let t = trials.max(1) as f64;
        let l_hat: Vec<f64> = correct.iter().map(|&c| c as f64 / t).collect();
        let learning_quality = if correct.is_empty() {
            0.0
        } else {
            correct.iter().sum::<u64>() as f64 / (t * correct.len() as f64)
        };
        let se = (learning_quality * (1.0 - learning_quality) / t).sqrt();
        SimResult { rule: rule.to_string(), p, seed, trials, correct, l_hat, learning_quality, se }
    }

    /// Combines results of disjoint trial ranges from the same configuration.
    pub fn merge(&self, other: &SimResult) -> Result<SimResult> {
        if self.correct.len() != other.correct.len() || self.p != other.p || self.seed != other.seed || self.rule != other.rule
        {
            return Err(Error::input("merging results from different configurations"));
        }
        let correct = self.correct.iter().zip(&other.correct).map(|(a, b)| a + b).collect();
        Ok(SimResult::from_counts(&self.rule, self.p, self.seed, self.trials + other.trials, correct))
    }
}

fn check_config(g: &Graph, cfg: &SimConfig) -> Result<()> {
    if cfg.trials == 0 {
        return Err(Error::validation("trials must be at least 1"));
    }
    if g.n() == 0 {
        return Err(Error::input("graph has no vertices"));
    }
    Ok(())
}

/// Plays trial `t`: world and arrivals both come from stream `t` of the seed.
pub fn play_trial(g: &Graph, rule: &DecisionRule, p: Precision, seed: u64, t: u64) -> Result<(bool, Vec<bool>, Realization)> {
    let mut rng = trial_rng(seed, t);
    let world = sample_world(g.n(), p, &mut rng);
    let real = sample_arrivals(g.n(), &mut rng)?;
    let actions = run_trial(g, rule, &world, &real)?;
    Ok((world.theta, actions, real))
}

/// Runs the trials with indices in `range`.
pub fn estimate_range(g: &Graph, cfg: &SimConfig, range: Range<u64>) -> Result<SimResult> {
    let n = g.n();
    let chunks: Vec<Range<u64>> =
        (range.start..range.end).step_by(CHUNK as usize).map(|s| s..(s + CHUNK).min(range.end)).collect();
    let correct = chunks
        .into_par_iter()
        .map(|chunk| -> Result<Vec<u64>> {
            let mut counts = vec![0u64; n];
            for t in chunk {
                let (theta, actions, _) = play_trial(g, &cfg.rule, cfg.p, cfg.master_seed, t)?;
                for (c, &a) in counts.iter_mut().zip(&actions) {
                    *c += (a == theta) as u64;
                }
            }
            Ok(counts)
        })
        .try_reduce(|| vec![0u64; n], |a, b| Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect()))?;
    Ok(SimResult::from_counts(cfg.rule.name(), cfg.p, cfg.master_seed, range.end - range.start, correct))
}

pub fn estimate_learning(g: &Graph, cfg: &SimConfig) -> Result<SimResult> {
    check_config(g, cfg)?;
    estimate_range(g, cfg, 0..cfg.trials)
}

/// Exact learning quality of the cascade rule on the clique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueExact {
    pub n: usize,
    pub p: Precision,
    /// Probability that the agent at each arrival position acts correctly.
    pub per_position: Vec<f64>,
    pub learning_quality: f64,
    pub learning_quality_exact: String,
    #[serde(skip)]
    pub exact: BigRational,
}

/// The cascade rule on `K_n` only depends on the difference between revealed
/// ones and zeros. Until that difference reaches two in absolute value every
/// action reveals its signal; afterwards everyone herds.
pub fn clique_exact(n: usize, p: Precision) -> Result<CliqueExact> {
    if n == 0 {
        return Err(Error::input("clique needs at least one vertex"));
    }
    let pr = BigRational::new(BigInt::from(p.num()), BigInt::from(p.den()));
    let qr = BigRational::one() - &pr;
    // Conditional on theta = 1: states -2 (wrong herd), -1, 0, 1, 2 (right herd).
    let mut dist = vec![BigRational::zero(); 5];
    dist[2] = BigRational::one();
    let mut per_position = Vec::with_capacity(n);
    let mut total = BigRational::zero();
    for _ in 0..n {
        let correct = &dist[4] + (&dist[1] + &dist[2] + &dist[3]) * &pr;
        total += &correct;
        per_position.push(correct.to_f64().unwrap_or(f64::NAN));
        let mut next = vec![BigRational::zero(); 5];
        next[0] = dist[0].clone();
        next[4] = dist[4].clone();
        for s in 1..=3 {
            next[s + 1] += &dist[s] * &pr;
            next[s - 1] += &dist[s] * &qr;
        }
        dist = next;
    }
    let exact = total / BigInt::from(n);
    Ok(CliqueExact {
        n,
        p,
        per_position,
        learning_quality: exact.to_f64().unwrap_or(f64::NAN),
        learning_quality_exact: exact.to_string(),
        exact,
    })
}

/// How to pick the surviving vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum EliminationSpec {
    /// Uniformly random survivors.
    Random { alpha: f64, seed: u64 },
    KeepList { ids: Vec<usize> },
    /// Removes every vertex of the given part.
    DropPart { part: Part },
    /// Removes the lowest-degree vertices, keeping the highest.
    LowestDegree { alpha: f64 },
    /// Removes the highest-degree vertices, keeping the lowest.
    HighestDegree { alpha: f64 },
    /// Keeps the earliest arrivals.
    EarliestArrivals { alpha: f64 },
}

impl EliminationSpec {
    pub fn alpha(&self) -> Option<f64> {
        match *self {
            EliminationSpec::Random { alpha, .. }
            | EliminationSpec::LowestDegree { alpha }
            | EliminationSpec::HighestDegree { alpha }
            | EliminationSpec::EarliestArrivals { alpha } => Some(alpha),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            EliminationSpec::Random { alpha, seed } => format!("random(alpha={alpha}, seed={seed})"),
            EliminationSpec::KeepList { ids } => format!("keep_list({} ids)", ids.len()),
            EliminationSpec::DropPart { part } => format!("drop_part({part:?})").to_lowercase(),
            EliminationSpec::LowestDegree { alpha } => format!("lowest_degree(alpha={alpha})"),
            EliminationSpec::HighestDegree { alpha } => format!("highest_degree(alpha={alpha})"),
            EliminationSpec::EarliestArrivals { alpha } => format!("earliest_arrivals(alpha={alpha})"),
        }
    }
}

/// Data some strategies need beyond the graph.
#[derive(Debug, Clone, Copy, Default)]
pub struct EliminationContext<'a> {
    pub realization: Option<&'a Realization>,
    pub parts: Option<&'a [Part]>,
}

#[derive(Debug, Clone)]
pub struct Elimination {
    pub kept: VertexSet,
    pub sub: Graph,
}

/// `ceil(alpha n)`, guarded against floating-point noise in `alpha n`.
pub fn kept_count(alpha: f64, n: usize) -> Result<usize> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::validation(format!("alpha {alpha} must lie in (0, 1]")));
    }
    Ok(((alpha * n as f64 - 1e-9).ceil() as usize).clamp(n.min(1), n))
}

pub fn eliminate(g: &Graph, spec: &EliminationSpec, ctx: EliminationContext<'_>) -> Result<Elimination> {
    let n = g.n();
    let by_degree = |alpha: f64, keep_high: bool| -> Result<Vec<usize>> {
        let k = kept_count(alpha, n)?;
        let mut ids: Vec<usize> = (0..n).collect();
        if keep_high {
            ids.sort_by_key(|&v| (std::cmp::Reverse(g.neighbors(v).len()), v));
        } else {
            ids.sort_by_key(|&v| (g.neighbors(v).len(), v));
        }
        ids.truncate(k);
        Ok(ids)
    };
    let kept: Vec<usize> = match spec {
        EliminationSpec::Random { alpha, seed } => {
            let k = kept_count(*alpha, n)?;
            sample(&mut ChaCha8Rng::seed_from_u64(*seed), n, k).into_vec()
        }
        EliminationSpec::KeepList { ids } => VertexSet::new(ids.clone(), n)?.into_vec(),
        EliminationSpec::DropPart { part } => {
            let parts = ctx.parts.ok_or_else(|| Error::input("drop_part needs part labels"))?;
            if parts.len() != n {
                return Err(Error::input(format!("{} part labels for {n} vertices", parts.len())));
            }
            (0..n).filter(|&v| parts[v] != *part).collect()
        }
        EliminationSpec::LowestDegree { alpha } => by_degree(*alpha, true)?,
        EliminationSpec::HighestDegree { alpha } => by_degree(*alpha, false)?,
        EliminationSpec::EarliestArrivals { alpha } => {
            let real = ctx.realization.ok_or_else(|| Error::input("earliest_arrivals needs a realization"))?;
            if real.n() != n {
                return Err(Error::input(format!("realization has {} agents, graph has {n}", real.n())));
            }
            real.order[..kept_count(*alpha, n)?].to_vec()
        }
    };
    let kept = VertexSet::from_unsorted(kept);
    let sub = g.induced_subgraph(&kept)?.graph;
    Ok(Elimination { kept, sub })
}

/// Rule family for experiments that rebuild the rule on each subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Signal,
    Cascade,
    DesignatedMajority,
}

impl std::str::FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signal" => Ok(RuleKind::Signal),
            "cascade" => Ok(RuleKind::Cascade),
            "designated_majority" | "designated-majority" => Ok(RuleKind::DesignatedMajority),
            _ => Err(Error::input(format!("unknown rule {s:?}"))),
        }
    }
}

/// Designated sets from [`llr::search_certificate`] at the girth radius.
pub fn designated_sets(g: &Graph) -> Result<Vec<VertexSet>> {
    let r = match g.girth() {
        Length::Finite(_) => bounds::girth_radius(g.girth()) as usize,
        Length::Infinite => g.diameter(),
    };
    (0..g.n()).into_par_iter().map(|v| Ok(llr::search_certificate(g, v, r)?.certificate.designated)).collect()
}

impl RuleKind {
    pub fn build(self, g: &Graph) -> Result<DecisionRule> {
        Ok(match self {
            RuleKind::Signal => DecisionRule::Signal,
            RuleKind::Cascade => DecisionRule::Cascade,
            RuleKind::DesignatedMajority => DecisionRule::DesignatedMajority(Arc::new(designated_sets(g)?)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub spec: EliminationSpec,
    pub label: String,
    pub kept: usize,
    pub sub_edges: usize,
    pub result: SimResult,
    /// Present when the original graph is regular and its spectrum was given.
    pub lemma3: Option<Lemma3Report>,
}

/// Inputs of [`robustness_sweep`] beyond the graph and strategies.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub rule: RuleKind,
    pub p: Precision,
    pub trials: u64,
    pub seed: u64,
    /// `|lambda_2|` of the original graph, for the subnetwork bound.
    pub lambda2_abs: Option<f64>,
}

/// Eliminates, rebuilds the rule on the surviving subgraph, and estimates its
/// learning quality, once per strategy. Every row simulates with the same
/// master seed. Earliest-arrival selection draws its realization from a seed
/// derived from the master seed and the row index.
pub fn robustness_sweep(
    g: &Graph,
    specs: &[EliminationSpec],
    parts: Option<&[Part]>,
    cfg: &SweepConfig,
) -> Result<Vec<SweepRow>> {
    let girth = g.girth();
    specs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let real = sample_arrivals(g.n(), &mut trial_rng(crate::rng::derive_seed(cfg.seed, i as u64), 0))?;
            let e = eliminate(g, spec, EliminationContext { realization: Some(&real), parts })?;
            let sim = SimConfig { rule: cfg.rule.build(&e.sub)?, p: cfg.p, trials: cfg.trials, master_seed: cfg.seed };
            let result = estimate_learning(&e.sub, &sim)?;
            let lemma3 = match (g.regular_degree(), cfg.lambda2_abs) {
                (Some(d), Some(lam)) if d >= 2 => {
                    let alpha = e.kept.len() as f64 / g.n() as f64;
                    Some(bounds::lemma3_bound(alpha, d as u64, girth, lam, cfg.p.value())?)
                }
                _ => None,
            };
            Ok(SweepRow { label: spec.label(), spec: spec.clone(), kept: e.kept.len(), sub_edges: e.sub.m(), result, lemma3 })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Exact oracle on every subset of the right size.
    Exact,
    /// Cascade-rule simulation; the first arrivals of the full game form the
    /// subgame on the earliest arrivals.
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessCheck {
    pub mode: CheckMode,
    pub alpha: f64,
    pub kept: usize,
    /// `1 - L(G)`.
    pub delta: f64,
    /// Expected error rate on the subnetwork of the earliest arrivals.
    pub lhs: f64,
    /// `delta / alpha`.
    pub rhs: f64,
    /// Standard error of `lhs - rhs` in Monte Carlo mode, 0 otherwise.
    pub se: f64,
    pub holds: bool,
    pub subsets: u64,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Checks that the subnetwork of the `ceil(alpha n)` earliest arrivals errs,
/// on average, at most `delta / alpha` where `delta = 1 - L(G)`.
pub fn randomized_robustness_check(
    g: &Graph,
    alpha: f64,
    p: Precision,
    mode: CheckMode,
    trials: u64,
    seed: u64,
) -> Result<RobustnessCheck> {
    let n = g.n();
    let k = kept_count(alpha, n)?;
    match mode {
        CheckMode::Exact => {
            let full = oracle::exact_oracle(g, p)?;
            let delta = BigRational::one() - full.exact_learning_quality();
            // Earliest arrivals form a uniformly random k-subset.
            let all = subsets(n, k);
            let count = all.len() as u64;
            let errors = all
                .into_par_iter()
                .map(|s| {
                    let sub = g.induced_subgraph(&VertexSet::from_sorted(s))?.graph;
                    Ok(BigRational::one() - oracle::exact_oracle(&sub, p)?.exact_learning_quality())
                })
                .collect::<Result<Vec<_>>>()?;
            let lhs = errors.into_iter().fold(BigRational::zero(), |a, b| a + b) / BigInt::from(count);
            let (lhs, delta) = (lhs.to_f64().unwrap_or(f64::NAN), delta.to_f64().unwrap_or(f64::NAN));
            let rhs = delta / alpha;
            Ok(RobustnessCheck { mode, alpha, kept: k, delta, lhs, rhs, se: 0.0, holds: lhs <= rhs + 1e-12, subsets: count })
        }
        CheckMode::MonteCarlo => {
            if trials == 0 {
                return Err(Error::validation("trials must be at least 1"));
            }
            // Per trial: full error rate and error rate among the first k.
            let (sum_d, sum_l, sum_diff2) = (0..trials)
                .into_par_iter()
                .map(|t| -> Result<(f64, f64, f64)> {
                    let (theta, actions, real) = play_trial(g, &DecisionRule::Cascade, p, seed, t)?;
                    let err = actions.iter().filter(|&&a| a != theta).count() as f64 / n as f64;
                    let early = real.order[..k].iter().filter(|&&v| actions[v] != theta).count() as f64 / k as f64;
                    let diff = early - err / alpha;
                    Ok((err, early, diff * diff))
                })
                .try_reduce(|| (0.0, 0.0, 0.0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
            let t = trials as f64;
            let (delta, lhs) = (sum_d / t, sum_l / t);
            let rhs = delta / alpha;
            let mean_diff = lhs - rhs;
            let se = ((sum_diff2 / t - mean_diff * mean_diff).max(0.0) / t).sqrt();
            Ok(RobustnessCheck { mode, alpha, kept: k, delta, lhs, rhs, se, holds: mean_diff <= 3.0 * se, subsets: 0 })
        }
    }
}

/// Empirical localization probability at one radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationRow {
    pub r: usize,
    /// Largest degree in the ball of radius `r` around the vertex.
    pub cap_d: usize,
    pub bound: LocalizationBound,
    pub successes: u64,
    pub p_hat: f64,
    pub se: f64,
    /// `(successes, trials)` per decile of the vertex's own arrival time.
    pub deciles: Vec<(u64, u64)>,
}

/// Estimates the probability that the realized subnetwork of `v` stays within
/// distance `r - 1`, for each radius, overall and binned by `t_v`.
pub fn localization_experiment(g: &Graph, v: usize, radii: &[usize], trials: u64, seed: u64) -> Result<Vec<LocalizationRow>> {
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    if radii.contains(&0) || radii.is_empty() {
        return Err(Error::validation("radii must be non-empty and at least 1"));
    }
    let rmax = *radii.iter().max().unwrap();
    let probe = LocalizationProbe::new(g, v, rmax - 1);
    let n = g.n();
    let nr = radii.len();
    // counts[i * 10 + decile] = (successes, trials)
    let zero = || vec![(0u64, 0u64); nr * 10];
    let counts = (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = zero();
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let mut rng = trial_rng(seed, t);
                let times: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                let far = probe.max_distance(&times, rmax - 1);
                let decile = ((times[v] * 10.0) as usize).min(9);
                for (i, &r) in radii.iter().enumerate() {
                    let slot = &mut acc[i * 10 + decile];
                    slot.1 += 1;
                    slot.0 += far.is_some_and(|f| f < r) as u64;
                }
            }
            acc
        })
        .reduce(zero, |a, b| a.iter().zip(&b).map(|(x, y)| (x.0 + y.0, x.1 + y.1)).collect());
    radii
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let deciles = counts[i * 10..(i + 1) * 10].to_vec();
            let successes: u64 = deciles.iter().map(|d| d.0).sum();
            let p_hat = successes as f64 / trials as f64;
            let cap_d = g.ball(v, r).iter().map(|w| g.neighbors(w).len()).max().unwrap_or(0);
            Ok(LocalizationRow {
                r,
                cap_d,
                bound: bounds::localization_bound(r as u64, cap_d as u64)?,
                successes,
                p_hat,
                se: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
                deciles,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen;

    fn p(s: &str) -> Precision {
        s.parse().unwrap()
    }

    fn cfg(rule: DecisionRule, pr: &str, trials: u64, seed: u64) -> SimConfig {
        SimConfig { rule, p: p(pr), trials, master_seed: seed }
    }

    #[test]
    fn signal_rule_recovers_precision() {
        let g = netgen::cycle(7).unwrap();
        let r = estimate_learning(&g, &cfg(DecisionRule::Signal, "4/5", 20_000, 3)).unwrap();
        assert!((r.learning_quality - 0.8).abs() <= 3.0 * r.se);
        let mean: f64 = r.l_hat.iter().sum::<f64>() / 7.0;
        assert!((mean - r.learning_quality).abs() < 1e-12);
    }

    #[test]
    fn results_are_reproducible_and_mergeable() {
        let g = netgen::celebrity(6, 2).unwrap().graph;
        let c = cfg(DecisionRule::Cascade, "7/10", 3_000, 42);
        let a = estimate_learning(&g, &c).unwrap();
        assert_eq!(a, estimate_learning(&g, &c).unwrap());
        let left = estimate_range(&g, &c, 0..1_111).unwrap();
        let right = estimate_range(&g, &c, 1_111..3_000).unwrap();
        assert_eq!(left.merge(&right).unwrap(), a);
        let other = estimate_learning(&g, &cfg(DecisionRule::Cascade, "7/10", 10, 43)).unwrap();
        assert!(a.merge(&other).is_err());
        assert!(estimate_learning(&g, &cfg(DecisionRule::Cascade, "7/10", 0, 1)).is_err());
    }

    #[test]
    fn clique_chain_small_cases() {
        let one = clique_exact(1, p("7/10")).unwrap();
        assert_eq!(one.learning_quality_exact, "7/10");
        let two = clique_exact(2, p("7/10")).unwrap();
        assert_eq!(two.learning_quality_exact, "7/10");
        let three = clique_exact(3, p("7/10")).unwrap();
        // Third agent: herds right w.p. p^2, wrong w.p. q^2, else follows signal.
        let third = 0.49 + 2.0 * 0.21 * 0.7;
        assert!((three.per_position[2] - third).abs() < 1e-15);
        assert!(clique_exact(0, p("7/10")).is_err());
    }

    #[test]
    fn clique_chain_matches_exact_rule_evaluation() {
        for n in 1..=6 {
            for pr in ["7/10", "3/4", "9/10"] {
                let chain = clique_exact(n, p(pr)).unwrap();
                let g = netgen::clique(n).unwrap();
                let direct = oracle::evaluate_rule(&g, p(pr), &|_, info| crate::decision::rule_cascade(info)).unwrap();
                assert_eq!(chain.exact, direct.exact_learning_quality(), "K{n} p={pr}");
            }
        }
        let ten = clique_exact(10, p("7/10")).unwrap();
        assert!(ten.learning_quality <= 0.91);
    }

    #[test]
    fn oracle_replay_matches_exact() {
        let g = netgen::path(4).unwrap();
        let exact = oracle::exact_oracle(&g, p("3/4")).unwrap();
        let r = estimate_learning(&g, &cfg(exact.rule(), "3/4", 40_000, 9)).unwrap();
        assert!((r.learning_quality - exact.learning_quality).abs() <= 3.0 * r.se);
    }

    #[test]
    fn elimination_strategies() {
        let c10 = netgen::cycle(10).unwrap();
        let all = eliminate(&c10, &EliminationSpec::Random { alpha: 1.0, seed: 1 }, Default::default()).unwrap();
        assert_eq!(all.sub, c10);
        let a = eliminate(&c10, &EliminationSpec::Random { alpha: 0.5, seed: 7 }, Default::default()).unwrap();
        let b = eliminate(&c10, &EliminationSpec::Random { alpha: 0.5, seed: 7 }, Default::default()).unwrap();
        assert_eq!(a.kept.len(), 5);
        assert_eq!(a.kept, b.kept);
        let cel = netgen::celebrity(200, 5).unwrap();
        let ctx = EliminationContext { realization: None, parts: Some(&cel.parts) };
        let e = eliminate(&cel.graph, &EliminationSpec::DropPart { part: Part::Celebrity }, ctx).unwrap();
        assert_eq!((e.sub.n(), e.sub.m()), (200, 0));
        let e = eliminate(&cel.graph, &EliminationSpec::LowestDegree { alpha: 0.02 }, ctx).unwrap();
        assert_eq!(e.kept.as_slice(), &[200, 201, 202, 203, 204]);
        let e = eliminate(&cel.graph, &EliminationSpec::HighestDegree { alpha: 0.5 }, ctx).unwrap();
        assert_eq!(e.kept.len(), 103);
        assert!(e.kept.iter().all(|v| v < 200));
        assert!(eliminate(&cel.graph, &EliminationSpec::DropPart { part: Part::Celebrity }, Default::default()).is_err());
        let real = Realization::from_order(&[3, 1, 4, 0, 2]).unwrap();
        let p5 = netgen::path(5).unwrap();
        let ctx = EliminationContext { realization: Some(&real), parts: None };
        let e = eliminate(&p5, &EliminationSpec::EarliestArrivals { alpha: 0.6 }, ctx).unwrap();
        assert_eq!(e.kept.as_slice(), &[1, 3, 4]);
        assert!(eliminate(&p5, &EliminationSpec::EarliestArrivals { alpha: 0.6 }, Default::default()).is_err());
        assert!(eliminate(&p5, &EliminationSpec::KeepList { ids: vec![7] }, Default::default()).is_err());
        assert!(eliminate(&p5, &EliminationSpec::Random { alpha: 0.0, seed: 0 }, Default::default()).is_err());
        assert!(eliminate(&p5, &EliminationSpec::Random { alpha: 1.5, seed: 0 }, Default::default()).is_err());
    }

    #[test]
    fn kept_counts() {
        assert_eq!(kept_count(0.6, 5).unwrap(), 3);
        assert_eq!(kept_count(1.0 / 3.0, 6).unwrap(), 2);
        assert_eq!(kept_count(0.5, 5).unwrap(), 3);
        assert_eq!(kept_count(1e-6, 5).unwrap(), 1);
    }

    #[test]
    fn elimination_spec_json() {
        let s = EliminationSpec::DropPart { part: Part::Celebrity };
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"strategy":"drop_part","part":"celebrity"}"#);
        let r: EliminationSpec = serde_json::from_str(r#"{"strategy":"random","alpha":0.5,"seed":3}"#).unwrap();
        assert_eq!(r, EliminationSpec::Random { alpha: 0.5, seed: 3 });
    }

    #[test]
    fn sweep_on_celebrity_collapse() {
        let cel = netgen::celebrity(60, 3).unwrap();
        let cfg = SweepConfig { rule: RuleKind::Cascade, p: p("7/10"), trials: 4_000, seed: 5, lambda2_abs: None };
        let rows = robustness_sweep(
            &cel.graph,
            &[EliminationSpec::DropPart { part: Part::Celebrity }, EliminationSpec::Random { alpha: 1.0, seed: 0 }],
            Some(&cel.parts),
            &cfg,
        )
        .unwrap();
        assert_eq!(rows[0].sub_edges, 0);
        assert!((rows[0].result.learning_quality - 0.7).abs() <= 3.0 * rows[0].result.se);
        assert!(rows[1].result.learning_quality > rows[0].result.learning_quality);
        assert!(rows[0].lemma3.is_none());
    }

    #[test]
    fn sweep_reports_subnetwork_bound_on_regular_graphs() {
        let g = netgen::petersen();
        let cfg = SweepConfig { rule: RuleKind::DesignatedMajority, p: p("9/10"), trials: 500, seed: 2, lambda2_abs: Some(2.0) };
        let rows = robustness_sweep(&g, &[EliminationSpec::Random { alpha: 0.5, seed: 1 }], None, &cfg).unwrap();
        let l3 = rows[0].lemma3.unwrap();
        assert_eq!(l3.alpha, 0.5);
        assert!(l3.vacuous);
    }

    #[test]
    fn theorem4_exact_small_cases() {
        let k4 = netgen::clique(4).unwrap();
        let one = randomized_robustness_check(&k4, 1.0, p("7/10"), CheckMode::Exact, 0, 0).unwrap();
        assert!((one.lhs - one.delta).abs() < 1e-15 && one.rhs == one.delta && one.holds);
        assert!(randomized_robustness_check(&k4, 0.5, p("7/10"), CheckMode::Exact, 0, 0).unwrap().holds);
        let p5 = netgen::path(5).unwrap();
        let c = randomized_robustness_check(&p5, 0.6, p("3/4"), CheckMode::Exact, 0, 0).unwrap();
        assert_eq!((c.kept, c.subsets), (3, 10));
        assert!(c.holds);
        assert!(randomized_robustness_check(&Graph::empty(10), 0.5, p("3/4"), CheckMode::Exact, 0, 0).is_err());
    }

    #[test]
    fn theorem4_monte_carlo_mode() {
        let g = netgen::random_regular(40, 3, 1).unwrap();
        let c = randomized_robustness_check(&g, 0.5, p("7/10"), CheckMode::MonteCarlo, 5_000, 3).unwrap();
        assert_eq!(c.kept, 20);
        assert!(c.holds);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(5, 5), vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(subsets(3, 1), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn localization_on_a_cycle() {
        // On a cycle the realized subnetwork is two monotone runs; at r = 4 the
        // failure probability is bounded by 2 (2e/4)^4.
        let g = netgen::cycle(30).unwrap();
        let rows = localization_experiment(&g, 0, &[4, 6], 20_000, 8).unwrap();
        for row in &rows {
            assert_eq!(row.cap_d, 2);
            assert!(row.p_hat >= 1.0 - row.bound.failure - 3.0 * row.se);
            assert_eq!(row.deciles.iter().map(|d| d.1).sum::<u64>(), 20_000);
        }
        // Escaping means t_0 > t_1 > ... > t_r along one side; both sides at
        // once additionally needs t_0 to be the largest of the 2r + 1 times.
        let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
        for row in &rows {
            let r = row.r as u32;
            let escape = 2.0 / fact(r + 1) - 1.0 / (f64::from(2 * r + 1) * fact(r) * fact(r));
            assert!((row.p_hat - (1.0 - escape)).abs() <= 4.0 * row.se.max(1e-4));
        }
    }
}
