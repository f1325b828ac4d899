//! Adjacency spectra: the two largest eigenvalues in absolute value, the
//! Ramanujan bound and the expander mixing lemma.
//!
//! Graphs with at most [`DENSE_LIMIT`] vertices go through a dense cyclic
//! Jacobi eigensolver. Larger graphs must be connected and regular; for those
//! the top eigenvalue is `D` with the all-ones eigenvector, and the next one is
//! found by Lanczos iteration in the orthogonal complement of the all-ones
//! vector (and of the bipartition sign vector, when there is one).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const DENSE_LIMIT: usize = 512;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Lanczos step limit.
pub const ITERATION_CAP: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dense,
    Iterative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub lambda1_abs: f64,
    pub lambda2_abs: f64,
    pub method: Method,
    /// Jacobi sweeps, or Lanczos steps.
    pub iterations: usize,
    /// Dense: remaining off-diagonal norm. Iterative: residual bound of the
    /// reported Ritz value.
    pub residual: f64,
    /// Set when `|lambda2|` equals `lambda1` on a connected regular graph,
    /// i.e. `-D` is an eigenvalue and the graph is bipartite.
    pub bipartite_note: bool,
    /// Largest `|lambda|` once the trivial eigenvalues are removed: `D` always,
    /// and `-D` as well when `bipartite_note` is set. Equals `lambda2_abs` for
    /// non-bipartite graphs.
    pub lambda_nontrivial_abs: f64,
    pub tolerance: f64,
}

/// Every eigenvalue of a symmetric matrix stored row-major, by cyclic Jacobi
/// rotations. Returns the eigenvalues (unsorted), the sweep count and the final
/// off-diagonal Frobenius norm.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> (Vec<f64>, usize, f64) {
    assert_eq!(a.len(), n * n);
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off > 1e-15 * scale && sweeps < 100 {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    a[r * n + p] = c * arp - s * arq;
                    a[r * n + q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = a[p * n + r];
                    let aqr = a[q * n + r];
                    a[p * n + r] = c * apr - s * aqr;
                    a[q * n + r] = s * apr + c * aqr;
                }
            }
        }
        off = off_norm(&a);
    }
    ((0..n).map(|i| a[i * n + i]).collect(), sweeps, off)
}

/// Full adjacency spectrum in decreasing order. Dense, so keep `n` modest.
pub fn dense_spectrum(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut a = vec![0.0; n * n];
    for (u, v) in g.edges() {
        a[u * n + v] = 1.0;
        a[v * n + u] = 1.0;
    }
    let mut eig = jacobi_eigenvalues(a, n).0;
    eig.sort_by(|x, y| y.total_cmp(x));
    eig
}

/// `|lambda_1|` and `|lambda_2|` of the adjacency matrix.
pub fn top_two_eigenvalues(g: &Graph, tol: f64) -> Result<SpectralReport> {
    if g.n() == 0 {
        return Err(Error::input("spectrum of the empty graph"));
    }
    if !(tol > 0.0) {
        return Err(Error::input("tolerance must be positive"));
    }
    if g.n() <= DENSE_LIMIT {
        Ok(dense_report(g, tol))
    } else {
        iterative_report(g, tol, ITERATION_CAP)
    }
}

fn dense_report(g: &Graph, tol: f64) -> SpectralReport {
    let n = g.n();
    let mut a = vec![0.0; n * n];
    for (u, v) in g.edges() {
        a[u * n + v] = 1.0;
        a[v * n + u] = 1.0;
    }
    let (eig, sweeps, off) = jacobi_eigenvalues(a, n);
    let mut by_abs = eig.clone();
    by_abs.sort_by(|x, y| y.abs().total_cmp(&x.abs()));
    let mut lambda1 = by_abs[0].abs();
    let lambda2 = by_abs.get(1).map_or(0.0, |x| x.abs());
    let regular = g.regular_degree().filter(|_| g.is_connected());
    let mut bipartite_note = false;
    let mut nontrivial = lambda2;
    if let Some(d) = regular {
        let d = d as f64;
        lambda1 = d;
        bipartite_note = n > 1 && (lambda2 - d).abs() <= tol.max(1e-9 * d);
        let mut rest = eig;
        rest.sort_by(|x, y| y.total_cmp(x));
        // Drop the largest (= D) and, for bipartite graphs, the smallest (= -D).
        rest.remove(0);
        if bipartite_note {
            rest.pop();
        }
        nontrivial = rest.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    }
    SpectralReport {
        lambda1_abs: lambda1,
        lambda2_abs: lambda2.min(lambda1),
        method: Method::Dense,
        iterations: sweeps,
        residual: off,
        bipartite_note,
        lambda_nontrivial_abs: nontrivial,
        tolerance: tol,
    }
}

fn apply(g: &Graph, x: &[f64], y: &mut [f64]) {
    for (u, yu) in y.iter_mut().enumerate() {
        *yu = g.neighbors(u).iter().map(|&w| x[w]).sum();
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn project_out(x: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(x, b);
        x.iter_mut().zip(b).for_each(|(a, bi)| *a -= c * bi);
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i + 1`), by implicit QL. Also
/// returns the last component of each normalized eigenvector, which is all the
/// Lanczos residual estimate needs.
pub fn tridiagonal_eigen(d: &[f64], e: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = d.len();
    let mut d = d.to_vec();
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::repeat(0.0)).take(n).collect();
    let mut z = vec![0.0; n];
    if n > 0 {
        z[n - 1] = 1.0;
    }
    for l in 0..n {
        for _ in 0..200 {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    (d, z)
}

struct LanczosOutcome {
    value: f64,
    steps: usize,
    residual: f64,
}

/// Largest `|lambda|` of the adjacency matrix restricted to the orthogonal
/// complement of `basis` (orthonormal), by Lanczos with full
/// reorthogonalization. Stops when the Ritz value of largest magnitude has
/// residual bound `beta_k |s_k|` below `tol`.
fn lanczos_in_complement(g: &Graph, basis: &[Vec<f64>], tol: f64, cap: usize) -> Result<LanczosOutcome> {
    let n = g.n();
    let dim = n.saturating_sub(basis.len());
    if dim == 0 {
        return Ok(LanczosOutcome { value: 0.0, steps: 0, residual: 0.0 });
    }
    let mut rng = crate::rng::trial_rng(0x5EED_5EC7, 0);
    let mut q: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    project_out(&mut q, basis);
    let nq = dot(&q, &q).sqrt();
    q.iter_mut().for_each(|a| *a /= nq);
    let mut qs: Vec<Vec<f64>> = vec![q];
    let (mut alpha, mut beta): (Vec<f64>, Vec<f64>) = (vec![], vec![]);
    let mut w = vec![0.0; n];
    let steps = cap.min(dim);
    let mut last = (0.0, f64::INFINITY);
    for k in 0..steps {
        apply(g, &qs[k], &mut w);
        let a = dot(&w, &qs[k]);
        alpha.push(a);
        // Two passes of Gram-Schmidt keep the basis orthogonal to working
        // precision.
        for _ in 0..2 {
            project_out(&mut w, basis);
            for qi in &qs {
                let c = dot(&w, qi);
                w.iter_mut().zip(qi).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = dot(&w, &w).sqrt();
        let exhausted = b <= 1e-12 * a.abs().max(1.0) || k + 1 == dim;
        if k % 5 == 4 || exhausted || k + 1 == steps {
            let (vals, last_row) = tridiagonal_eigen(&alpha, &beta);
            let i = (0..vals.len()).max_by(|&i, &j| vals[i].abs().total_cmp(&vals[j].abs())).unwrap();
            let residual = if exhausted { 0.0 } else { b * last_row[i].abs() };
            last = (vals[i].abs(), residual);
            if residual <= tol * vals[i].abs().max(1.0) {
                return Ok(LanczosOutcome { value: vals[i].abs(), steps: k + 1, residual });
            }
        }
        if exhausted {
            break;
        }
        beta.push(b);
        qs.push(w.iter().map(|x| x / b).collect());
    }
    Err(Error::NonConvergence { iterations: steps, last_change: last.1 })
}

fn iterative_report(g: &Graph, tol: f64, cap: usize) -> Result<SpectralReport> {
    let d = g
        .regular_degree()
        .filter(|_| g.is_connected())
        .ok_or_else(|| Error::validation("iterative eigensolver needs a connected regular graph"))?;
    let d = d as f64;
    let n = g.n();
    let s = 1.0 / (n as f64).sqrt();
    let mut basis = vec![vec![s; n]];
    // A connected regular graph has -D in its spectrum iff it is bipartite,
    // with the signed indicator of the two sides as eigenvector.
    let bipartite_note = match g.bipartition() {
        Some(side) => {
            basis.push(side.iter().map(|&b| if b { s } else { -s }).collect());
            true
        }
        None => false,
    };
    let out = lanczos_in_complement(g, &basis, tol, cap)?;
    Ok(SpectralReport {
        lambda1_abs: d,
        lambda2_abs: if bipartite_note { d } else { out.value },
        method: Method::Iterative,
        iterations: out.steps,
        residual: out.residual,
        bipartite_note,
        lambda_nontrivial_abs: out.value,
        tolerance: tol,
    })
}

/// Same as [`top_two_eigenvalues`] but always uses the iterative solver
/// (the graph must be connected and regular).
pub fn top_two_iterative(g: &Graph, tol: f64) -> Result<SpectralReport> {
    iterative_report(g, tol, ITERATION_CAP)
}

/// Verdict of the Ramanujan check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RamanujanVerdict {
    pub ramanujan: bool,
    /// `2 * sqrt(D - 1)`.
    pub bound: f64,
    /// The eigenvalue compared with the bound.
    pub lambda_checked: f64,
    /// How the checked eigenvalue was chosen.
    pub convention: String,
    pub report: SpectralReport,
}

/// Checks `|lambda_2| <= 2 sqrt(D - 1)` on a connected `D`-regular graph. For
/// bipartite graphs the forced eigenvalue `-D` is excluded and the next one is
/// checked instead.
pub fn ramanujan_check(g: &Graph, tol: f64) -> Result<RamanujanVerdict> {
    let d = g.regular_degree().ok_or_else(|| Error::validation("Ramanujan check needs a regular graph"))?;
    if !g.is_connected() {
        return Err(Error::validation("Ramanujan check needs a connected graph"));
    }
    let report = top_two_eigenvalues(g, tol)?;
    let bound = 2.0 * ((d as f64) - 1.0).max(0.0).sqrt();
    let lambda_checked = report.lambda_nontrivial_abs;
    let convention = if report.bipartite_note {
        "bipartite: -D excluded, next eigenvalue checked"
    } else {
        "second eigenvalue by absolute value"
    };
    Ok(RamanujanVerdict {
        ramanujan: lambda_checked <= bound + 10.0 * tol,
        bound,
        lambda_checked,
        convention: convention.to_string(),
        report,
    })
}

/// Both sides of the mixing-lemma inequality for disjoint `v1`, `v2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingCheck {
    /// `| |E(V1, V2)| - D |V1| |V2| / |V| |`.
    pub lhs: f64,
    /// `|lambda_2| sqrt(|V1| |V2|)`.
    pub rhs: f64,
    pub holds: bool,
}

pub fn crossing_edges(g: &Graph, v1: &VertexSet, v2: &VertexSet) -> usize {
    v1.iter().map(|u| g.neighbors(u).iter().filter(|&&w| v2.contains(w)).count()).sum()
}

pub fn mixing_discrepancy(g: &Graph, v1: &VertexSet, v2: &VertexSet, lambda2_abs: f64) -> Result<MixingCheck> {
    let d = g.regular_degree().ok_or_else(|| Error::validation("mixing lemma needs a regular graph"))?;
    if !v1.is_disjoint(v2) {
        return Err(Error::input("vertex sets overlap"));
    }
    if let Some(v) = v1.iter().chain(v2.iter()).find(|&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let (a, b) = (v1.len() as f64, v2.len() as f64);
    let expected = d as f64 * a * b / g.n() as f64;
    let lhs = (crossing_edges(g, v1, v2) as f64 - expected).abs();
    let rhs = lambda2_abs * (a * b).sqrt();
    Ok(MixingCheck { lhs, rhs, holds: lhs <= rhs + 1e-9 * rhs.max(1.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen;
    use std::f64::consts::PI;

    /// Closed-form cycle spectrum `2 cos(2 pi k / n)`.
    fn cycle_spectrum(n: usize) -> Vec<f64> {
        let mut s: Vec<f64> = (0..n).map(|k| 2.0 * (2.0 * PI * k as f64 / n as f64).cos()).collect();
        s.sort_by(|x, y| y.total_cmp(x));
        s
    }

    #[test]
    fn jacobi_matches_closed_forms() {
        for n in [3, 4, 5, 8, 13] {
            let got = dense_spectrum(&netgen::cycle(n).unwrap());
            for (a, b) in got.iter().zip(cycle_spectrum(n)) {
                assert!((a - b).abs() < 1e-12, "C{n}: {a} vs {b}");
            }
        }
        // K_n = J - I: n - 1 once, -1 with multiplicity n - 1.
        let k6 = dense_spectrum(&netgen::clique(6).unwrap());
        assert!((k6[0] - 5.0).abs() < 1e-12);
        assert!(k6[1..].iter().all(|x| (x + 1.0).abs() < 1e-12));
        // Petersen: 3, 1 (x5), -2 (x4).
        let pet = dense_spectrum(&netgen::petersen());
        assert!((pet[0] - 3.0).abs() < 1e-12);
        assert!(pet[1..6].iter().all(|x| (x - 1.0).abs() < 1e-12));
        assert!(pet[6..].iter().all(|x| (x + 2.0).abs() < 1e-12));
    }

    #[test]
    fn tridiagonal_solver_matches_jacobi() {
        let mut rng = crate::rng::trial_rng(12, 0);
        for n in [1, 2, 5, 17, 40] {
            let d: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            let e: Vec<f64> = (1..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                a[i * n + i] = d[i];
                if i + 1 < n {
                    a[i * n + i + 1] = e[i];
                    a[(i + 1) * n + i] = e[i];
                }
            }
            let mut want = jacobi_eigenvalues(a.clone(), n).0;
            let (mut got, last) = tridiagonal_eigen(&d, &e);
            // Each last component squared sums to one over the eigenbasis.
            assert!((last.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
            want.sort_by(f64::total_cmp);
            got.sort_by(f64::total_cmp);
            for (x, y) in got.iter().zip(&want) {
                assert!((x - y).abs() < 1e-12, "n={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn top_two_examples() {
        let k4 = top_two_eigenvalues(&netgen::clique(4).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(k4.lambda1_abs, 3.0);
        assert!((k4.lambda2_abs - 1.0).abs() < 1e-12);
        assert!(!k4.bipartite_note);
        let c5 = top_two_eigenvalues(&netgen::cycle(5).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(c5.lambda1_abs, 2.0);
        assert!((c5.lambda2_abs - 1.618_033_988_749_895).abs() < 1e-8);
        let c4 = top_two_eigenvalues(&netgen::cycle(4).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!((c4.lambda1_abs, c4.lambda2_abs), (2.0, 2.0));
        assert!(c4.bipartite_note);
        assert!(c4.lambda_nontrivial_abs.abs() < 1e-12);
        assert!(top_two_eigenvalues(&Graph::empty(0), 1e-8).is_err());
        assert!(top_two_eigenvalues(&netgen::clique(3).unwrap(), 0.0).is_err());
    }

    #[test]
    fn non_regular_graphs_use_the_dense_spectrum() {
        // Star K_{1,4}: eigenvalues +-2 and 0 (x3).
        let r = top_two_eigenvalues(&netgen::star(4).unwrap(), DEFAULT_TOL).unwrap();
        assert!((r.lambda1_abs - 2.0).abs() < 1e-12 && (r.lambda2_abs - 2.0).abs() < 1e-12);
        assert!(!r.bipartite_note);
    }

    #[test]
    fn ramanujan_examples() {
        let k4 = ramanujan_check(&netgen::clique(4).unwrap(), DEFAULT_TOL).unwrap();
        assert!(k4.ramanujan);
        assert!((k4.bound - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        let c12 = ramanujan_check(&netgen::cycle(12).unwrap(), DEFAULT_TOL).unwrap();
        assert!(c12.ramanujan && c12.report.bipartite_note);
        assert!((c12.lambda_checked - 3f64.sqrt()).abs() < 1e-12);
        assert!(ramanujan_check(&netgen::star(3).unwrap(), DEFAULT_TOL).is_err());
        let two_triangles = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(ramanujan_check(&two_triangles, DEFAULT_TOL).is_err());
    }

    #[test]
    fn mixing_examples() {
        let k4 = netgen::clique(4).unwrap();
        let e = VertexSet::empty();
        let any = VertexSet::new(vec![1, 2], 4).unwrap();
        assert_eq!(mixing_discrepancy(&k4, &e, &any, 1.0).unwrap(), MixingCheck { lhs: 0.0, rhs: 0.0, holds: true });
        let m = mixing_discrepancy(&k4, &VertexSet::new(vec![0], 4).unwrap(), &VertexSet::new(vec![1], 4).unwrap(), 1.0)
            .unwrap();
        assert!((m.lhs - 0.25).abs() < 1e-15 && m.rhs == 1.0 && m.holds);
        // C5: vertex 0 has no neighbor among {2, 3}, so |0 - 2*2/5| = 0.8.
        let c5 = netgen::cycle(5).unwrap();
        let lam = 1.618_033_988_749_895;
        let m = mixing_discrepancy(&c5, &VertexSet::new(vec![0], 5).unwrap(), &VertexSet::new(vec![2, 3], 5).unwrap(), lam)
            .unwrap();
        assert!((m.lhs - 0.8).abs() < 1e-15);
        assert!((m.rhs - lam * 2f64.sqrt()).abs() < 1e-12 && m.holds);
        let overlap = mixing_discrepancy(&c5, &VertexSet::new(vec![0, 1], 5).unwrap(), &VertexSet::new(vec![1], 5).unwrap(), 1.0);
        assert!(overlap.is_err());
        assert!(mixing_discrepancy(&netgen::star(3).unwrap(), &e, &e, 1.0).is_err());
    }

    #[test]
    fn iterative_agrees_with_dense_on_regular_graphs() {
        for (n, d, seed) in [(60, 3, 1), (200, 4, 2), (300, 5, 3), (400, 6, 4)] {
            let g = netgen::random_regular(n, d, seed).unwrap();
            if !g.is_connected() {
                continue;
            }
            let dense = top_two_eigenvalues(&g, DEFAULT_TOL).unwrap();
            let iter = top_two_iterative(&g, DEFAULT_TOL).unwrap();
            assert_eq!(dense.bipartite_note, iter.bipartite_note);
            assert!(
                (dense.lambda2_abs - iter.lambda2_abs).abs() <= 10.0 * DEFAULT_TOL * d as f64,
                "n={n} d={d}: dense {} iterative {}",
                dense.lambda2_abs,
                iter.lambda2_abs
            );
        }
    }

    #[test]
    fn iterative_detects_bipartite_graphs() {
        let c = netgen::cycle(40).unwrap();
        let r = top_two_iterative(&c, DEFAULT_TOL).unwrap();
        assert!(r.bipartite_note);
        assert_eq!(r.lambda2_abs, 2.0);
        assert!((r.lambda_nontrivial_abs - 2.0 * (2.0 * PI / 40.0).cos()).abs() < 1e-6);
    }
}
