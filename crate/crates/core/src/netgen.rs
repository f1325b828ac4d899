//! Network families: cliques, complete bipartite "celebrity" graphs, simple
//! fixtures, random regular graphs and LPS Ramanujan expanders.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Length};

/// Side of a celebrity graph a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Commoner,
    Celebrity,
}

/// A celebrity graph with its part labels. Commoners are `0..k`, celebrities
/// `k..k+m`.
#[derive(Debug, Clone)]
pub struct Celebrity {
    pub graph: Graph,
    pub parts: Vec<Part>,
}

pub fn clique(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::input("clique needs at least one vertex"));
    }
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, &edges)
}

/// Complete bipartite graph between `k` commoners and `m` celebrities.
pub fn celebrity(k: usize, m: usize) -> Result<Celebrity> {
    if k == 0 || m == 0 {
        return Err(Error::input("celebrity graph needs both parts non-empty"));
    }
    let edges: Vec<_> = (0..k).flat_map(|c| (k..k + m).map(move |s| (c, s))).collect();
    let mut parts = vec![Part::Commoner; k];
    parts.resize(k + m, Part::Celebrity);
    Ok(Celebrity { graph: Graph::from_edges(k + m, &edges)?, parts })
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::input("cycle needs at least 3 vertices"));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::input("path needs at least 1 vertex"));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

/// Star with center 0 and leaves `1..=leaves`.
pub fn star(leaves: usize) -> Result<Graph> {
    if leaves == 0 {
        return Err(Error::input("star needs at least one leaf"));
    }
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &edges)
}

/// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
pub fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("petersen edges are simple")
}

/// Restarts allowed in [`random_regular`] before giving up.
pub const PAIRING_RETRIES: usize = 1_000_000;

/// Uniform simple `d`-regular graph from the pairing model: pair up the
/// `n*d` half-edges uniformly at random and restart whenever a self-loop or a
/// repeated edge appears. Pairs are drawn one at a time, so a failed attempt
/// stops at its first collision.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if (n * d) % 2 != 0 {
        return Err(Error::validation(format!("n*d = {} is odd", n * d)));
    }
    if d >= n.max(1) && !(d == 0 && n == 0) {
        return Err(Error::validation(format!("degree {d} must be below n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let len = points.len();
    let mut seen = std::collections::HashSet::with_capacity(len / 2);
    'attempt: for _ in 0..PAIRING_RETRIES {
        seen.clear();
        let mut edges = Vec::with_capacity(len / 2);
        for i in (0..len).step_by(2) {
            let j = rng.random_range(i..len);
            points.swap(i, j);
            let k = rng.random_range(i + 1..len);
            points.swap(i + 1, k);
            let (u, v) = (points[i].min(points[i + 1]), points[i].max(points[i + 1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        return Graph::from_edges(n, &edges);
    }
    Err(Error::Budget(format!("pairing model failed {PAIRING_RETRIES} times for n={n}, d={d}")))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Legendre symbol `(a / q)` for an odd prime `q`: 1, -1, or 0.
pub fn legendre(a: u64, q: u64) -> i8 {
    match pow_mod(a % q, (q - 1) / 2, q) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Validated parameters of an LPS graph `X^{p,q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpsParams {
    pub p: u64,
    pub q: u64,
}

/// Derived facts about an LPS graph, recorded alongside the generated file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LpsMeta {
    pub p: u64,
    pub q: u64,
    pub degree: usize,
    pub legendre_p_q: i8,
    pub bipartite: bool,
    pub vertex_count: usize,
    /// `ceil((2/3) * log_{p}(|V|))`.
    pub girth_lower_bound: usize,
}

impl LpsParams {
    /// Checks every condition and names each one that fails.
    ///
    /// Requiring `p = 1 (mod 4)` already makes `D - 2 = p - 1` divisible by 4.
    pub fn new(p: u64, q: u64) -> Result<Self> {
        let mut problems = Vec::new();
        if !is_prime(p) {
            problems.push(format!("p = {p} is not prime"));
        }
        if !is_prime(q) {
            problems.push(format!("q = {q} is not prime"));
        }
        if p == q {
            problems.push("p and q must differ".to_string());
        }
        if p % 4 != 1 {
            problems.push(format!("p = {p} is not 1 mod 4"));
        }
        if q % 4 != 1 {
            problems.push(format!("q = {q} is not 1 mod 4"));
        }
        if (q as u128) * (q as u128) <= 4 * p as u128 {
            problems.push(format!("q = {q} does not exceed 2*sqrt(p)"));
        }
        if problems.is_empty() {
            Ok(LpsParams { p, q })
        } else {
            Err(Error::Validation(problems))
        }
    }

    pub fn degree(&self) -> usize {
        self.p as usize + 1
    }

    pub fn legendre(&self) -> i8 {
        legendre(self.p, self.q)
    }

    pub fn is_bipartite(&self) -> bool {
        self.legendre() == -1
    }

    pub fn vertex_count(&self) -> usize {
        let q = self.q as usize;
        let pgl = q * (q * q - 1);
        if self.is_bipartite() {
            pgl
        } else {
            pgl / 2
        }
    }

    pub fn girth_lower_bound(&self) -> usize {
        let bound = 2.0 / 3.0 * (self.vertex_count() as f64).ln() / (self.p as f64).ln();
        // Guard against 3.0000000001 style rounding pushing the ceiling up.
        (bound - 1e-9).ceil() as usize
    }

    pub fn meta(&self) -> LpsMeta {
        LpsMeta {
            p: self.p,
            q: self.q,
            degree: self.degree(),
            legendre_p_q: self.legendre(),
            bipartite: self.is_bipartite(),
            vertex_count: self.vertex_count(),
            girth_lower_bound: self.girth_lower_bound(),
        }
    }
}

/// Integer quaternions `(a0, a1, a2, a3)` with `a0` odd and positive and norm
/// `p`. For a prime `p = 1 (mod 4)` there are exactly `p + 1` of them.
pub fn lps_quaternions(p: u64) -> Vec<[i64; 4]> {
    let p = p as i64;
    let bound = (p as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for a0 in (1..=bound).step_by(2) {
        for a1 in -bound..=bound {
            for a2 in -bound..=bound {
                for a3 in -bound..=bound {
                    if a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 == p {
                        out.push([a0, a1, a2, a3]);
                    }
                }
            }
        }
    }
    out
}

/// 2x2 matrix over `Z/q`, stored row-major.
type Mat = [u64; 4];

struct Field {
    q: u64,
}

impl Field {
    fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    fn inv(&self, x: u64) -> u64 {
        pow_mod(x, self.q - 2, self.q)
    }

    fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let q = self.q;
        [
            (a[0] * b[0] + a[1] * b[2]) % q,
            (a[0] * b[1] + a[1] * b[3]) % q,
            (a[2] * b[0] + a[3] * b[2]) % q,
            (a[2] * b[1] + a[3] * b[3]) % q,
        ]
    }

    fn det(&self, a: &Mat) -> u64 {
        let q = self.q;
        (a[0] * a[3] % q + q - a[1] * a[2] % q) % q
    }

    /// Projective normal form: scale so the first nonzero entry is 1.
    fn canonical(&self, a: &Mat) -> Mat {
        let lead = *a.iter().find(|&&x| x != 0).expect("nonsingular matrix");
        let s = self.inv(lead);
        a.map(|x| x * s % self.q)
    }

    fn encode(&self, a: &Mat) -> u64 {
        a.iter().fold(0, |acc, &x| acc * self.q + x)
    }
}

/// The LPS Ramanujan graph: the Cayley graph of `PSL(2, q)` (when `p` is a
/// square mod `q`) or `PGL(2, q)` (otherwise, bipartite) with the `p + 1`
/// generators coming from norm-`p` quaternions. Vertices are numbered in
/// lexicographic order of the projective normal form of their matrix.
pub fn lps(params: LpsParams) -> Result<Graph> {
    let LpsParams { p, q } = params;
    let f = Field { q };
    let i = (1..q).find(|&x| x * x % q == q - 1).expect("q = 1 mod 4 has a square root of -1");

    let quats = lps_quaternions(p);
    if quats.len() as u64 != p + 1 {
        return Err(Error::validation(format!("found {} quaternions of norm {p}, expected {}", quats.len(), p + 1)));
    }
    let generators: Vec<Mat> = quats
        .iter()
        .map(|&[a0, a1, a2, a3]| {
            let im = |re: i64, im: i64| (f.reduce(re) + f.reduce(im) * i) % q;
            f.canonical(&[im(a0, a1), im(a2, a3), im(-a2, a3), im(a0, -a1)])
        })
        .collect();

    let psl = !params.is_bipartite();
    let mut vertices: Vec<Mat> = Vec::with_capacity(params.vertex_count());
    for a in 0..q.min(2) {
        // Normal forms start with 1, or with 0 followed by 1.
        let rest: Box<dyn Iterator<Item = Mat>> = if a == 1 {
            Box::new((0..q).flat_map(move |b| (0..q).flat_map(move |c| (0..q).map(move |d| [1, b, c, d]))))
        } else {
            Box::new((0..q).flat_map(move |c| (0..q).map(move |d| [0, 1, c, d])))
        };
        for m in rest {
            let det = f.det(&m);
            if det != 0 && (!psl || legendre(det, q) == 1) {
                vertices.push(m);
            }
        }
    }
    // [0, 1, ..] sorts before [1, ..]; the loop above already emits them first.
    debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
    if vertices.len() != params.vertex_count() {
        return Err(Error::validation(format!(
            "enumerated {} group elements, expected {}",
            vertices.len(),
            params.vertex_count()
        )));
    }

    let index: HashMap<u64, usize> = vertices.iter().enumerate().map(|(id, m)| (f.encode(m), id)).collect();
    let mut edges = Vec::with_capacity(vertices.len() * generators.len());
    for (id, x) in vertices.iter().enumerate() {
        for s in &generators {
            let y = f.canonical(&f.mul(x, s));
            let j = *index.get(&f.encode(&y)).ok_or_else(|| Error::validation("product left the vertex set"))?;
            edges.push((id, j));
        }
    }
    let g = Graph::from_edges_dedup(vertices.len(), edges)?;
    if g.regular_degree() != Some(params.degree()) {
        return Err(Error::validation(format!("LPS({p},{q}) is not {}-regular", params.degree())));
    }
    Ok(g)
}

/// A named recipe for building a graph, as stored in generated sidecars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GenRecipe {
    Clique { n: usize },
    Celebrity { k: usize, m: usize },
    Cycle { n: usize },
    Path { n: usize },
    Star { leaves: usize },
    Petersen,
    RandomRegular { n: usize, d: usize, seed: u64 },
    Lps { p: u64, q: u64 },
}

/// Output of a recipe: the graph plus whatever structure the family carries.
#[derive(Debug, Clone)]
pub struct Generated {
    pub recipe: GenRecipe,
    pub graph: Graph,
    pub parts: Option<Vec<Part>>,
    pub lps: Option<LpsMeta>,
}

impl Generated {
    pub fn bipartite(&self) -> bool {
        self.graph.is_bipartite()
    }

    pub fn girth(&self) -> Length {
        self.graph.girth()
    }
}

impl GenRecipe {
    pub fn build(&self) -> Result<Generated> {
        let mut parts = None;
        let mut lps_meta = None;
        let graph = match *self {
            GenRecipe::Clique { n } => clique(n)?,
            GenRecipe::Celebrity { k, m } => {
                let c = celebrity(k, m)?;
                parts = Some(c.parts);
                c.graph
            }
            GenRecipe::Cycle { n } => cycle(n)?,
            GenRecipe::Path { n } => path(n)?,
            GenRecipe::Star { leaves } => star(leaves)?,
            GenRecipe::Petersen => petersen(),
            GenRecipe::RandomRegular { n, d, seed } => random_regular(n, d, seed)?,
            GenRecipe::Lps { p, q } => {
                let params = LpsParams::new(p, q)?;
                lps_meta = Some(params.meta());
                lps(params)?
            }
        };
        Ok(Generated { recipe: self.clone(), graph, parts, lps: lps_meta })
    }

    /// Short name such as `K5`, `C9` or `celebrity(4,2)`.
    pub fn label(&self) -> String {
        match *self {
            GenRecipe::Clique { n } => format!("K{n}"),
            GenRecipe::Celebrity { k, m } => format!("celebrity({k},{m})"),
            GenRecipe::Cycle { n } => format!("C{n}"),
            GenRecipe::Path { n } => format!("P{n}"),
            GenRecipe::Star { leaves } => format!("star{leaves}"),
            GenRecipe::Petersen => "petersen".to_string(),
            GenRecipe::RandomRegular { n, d, seed } => format!("rr({n},{d},seed={seed})"),
            GenRecipe::Lps { p, q } => format!("lps({p},{q})"),
        }
    }
}

/// Fixture graphs shared by the test suites: small cliques, paths, cycles,
/// stars and celebrity graphs, the Petersen graph and two random regular
/// graphs.
pub fn corpus() -> Vec<GenRecipe> {
    use GenRecipe::*;
    let mut out = vec![];
    out.extend((2..=6).map(|n| Clique { n }));
    out.push(Clique { n: 10 });
    out.extend((3..=6).map(|n| Path { n }));
    out.extend((4..=9).map(|n| Cycle { n }));
    out.extend((3..=5).map(|leaves| Star { leaves }));
    out.extend([Celebrity { k: 4, m: 1 }, Celebrity { k: 4, m: 2 }, Celebrity { k: 20, m: 3 }]);
    out.push(Petersen);
    out.push(RandomRegular { n: 20, d: 3, seed: 7 });
    out.push(RandomRegular { n: 60, d: 4, seed: 11 });
    out
}
