//! Bundles over the unordered configuration graph built from the relabeling
//! that each quotient edge induces on canonical (sorted) representatives.
//!
//! For a quotient edge `q → r`, lifting the hop from the sorted tuple `c_q`
//! lands on `a·c_r` for a unique aligning permutation `a`; the holonomy of a
//! loop is then a product over the aligning permutations of its edges, whose
//! composition is the loop permutation `σ_α`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DiscreteBundle;
use crate::confspace::ConfigGraphPair;
use crate::error::{Error, Result};
use crate::graph::DirEdge;
use crate::linalg::{cis, diff_norm, unitarity_residual, CMat, CVec, C64, ONE, ZERO};
use crate::perm::{binomial, factorial, Permutation};

fn forward(e: usize) -> DirEdge {
    DirEdge { edge: e, forward: true }
}

/// The two one-dimensional representations of `S_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Character {
    Trivial,
    Alternating,
}

impl Character {
    pub fn value(self, sigma: &Permutation) -> f64 {
        match self {
            Character::Trivial => 1.0,
            Character::Alternating => sigma.sign() as f64,
        }
    }
}

/// Rank-1 bundle whose edge phase is the character of the aligning permutation.
pub fn bundle_from_character(pair: &ConfigGraphPair, character: Character) -> DiscreteBundle {
    let q = pair.quotient();
    let links = (0..q.n_edges())
        .map(|e| CMat::from_element(1, 1, C64::from(character.value(&pair.alignment(forward(e))))))
        .collect();
    DiscreteBundle { graph: pair.shared_quotient(), rank: 1, links }
}

/// A unitary representation `S_N → U(dim)`.
#[derive(Clone)]
pub struct Representation {
    n: usize,
    dim: usize,
    name: String,
    map: Arc<dyn Fn(&Permutation) -> CMat + Send + Sync>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation({}, S_{} -> U({}))", self.name, self.n, self.dim)
    }
}

impl Representation {
    /// Wraps an arbitrary map; nothing is checked until [`Representation::validate`].
    pub fn from_fn<F>(n: usize, dim: usize, name: &str, f: F) -> Self
    where
        F: Fn(&Permutation) -> CMat + Send + Sync + 'static,
    {
        Self { n, dim, name: name.to_string(), map: Arc::new(f) }
    }

    pub fn trivial(n: usize) -> Self {
        Self::from_fn(n, 1, "trivial", |_| CMat::identity(1, 1))
    }

    pub fn alternating(n: usize) -> Self {
        Self::from_fn(n, 1, "alternating", |s| CMat::from_element(1, 1, C64::from(s.sign() as f64)))
    }

    /// `P(σ) e_k = e_{σ(k)}`.
    pub fn permutation(n: usize) -> Self {
        Self::from_fn(n, n, "permutation", permutation_matrix)
    }

    /// The `(n−1)`-dimensional standard representation: the permutation
    /// representation restricted to vectors with zero coordinate sum.
    pub fn standard(n: usize) -> Self {
        assert!(n >= 2, "standard representation needs n >= 2");
        // Helmert basis of the complement of (1, …, 1)
        let basis = CMat::from_fn(n, n - 1, |i, j| {
            let j1 = (j + 1) as f64;
            let norm = (j1 * (j1 + 1.0)).sqrt();
            if i <= j {
                C64::from(1.0 / norm)
            } else if i == j + 1 {
                C64::from(-j1 / norm)
            } else {
                ZERO
            }
        });
        Self::from_fn(n, n - 1, "standard", move |s| basis.adjoint() * permutation_matrix(s) * &basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, sigma: &Permutation) -> CMat {
        (self.map)(sigma)
    }

    /// Checks unitarity, `ρ(id) = I`, and `ρ(s_i ∘ σ) = ρ(s_i)ρ(σ)` for every
    /// adjacent transposition `s_i`, over all of `S_N` when `N ≤ 6` and a fixed
    /// random sample otherwise. Since the `s_i` generate, this forces the
    /// homomorphism property.
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-10;
        let n = self.n;
        let id = self.eval(&Permutation::identity(n));
        if id.shape() != (self.dim, self.dim) {
            return Err(Error::InvalidRepresentation(format!(
                "{}: matrices have shape {:?}, declared dimension {}",
                self.name,
                id.shape(),
                self.dim
            )));
        }
        if diff_norm(&id, &CMat::identity(self.dim, self.dim)) > tol {
            return Err(Error::InvalidRepresentation(format!("{}: identity is not mapped to I", self.name)));
        }
        let sample: Vec<Permutation> = if n <= 6 {
            Permutation::all(n)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..500).map(|_| Permutation::random(n, &mut rng)).collect()
        };
        let generators: Vec<(Permutation, CMat)> = (1..n)
            .map(|i| {
                let s = Permutation::transposition(n, i, i + 1).unwrap();
                let m = self.eval(&s);
                (s, m)
            })
            .collect();
        for sigma in &sample {
            let m = self.eval(sigma);
            if m.shape() != (self.dim, self.dim) || unitarity_residual(&m) > tol {
                return Err(Error::InvalidRepresentation(format!("{}: image of {sigma} is not unitary", self.name)));
            }
            for (s, ms) in &generators {
                let lhs = self.eval(&s.compose(sigma)?);
                let r = diff_norm(&lhs, &(ms * &m));
                if r > tol {
                    return Err(Error::InvalidRepresentation(format!(
                        "{}: rho({s} * {sigma}) != rho({s}) rho({sigma}) (residual {r:.3e})",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

fn permutation_matrix(s: &Permutation) -> CMat {
    let n = s.len();
    let mut m = CMat::zeros(n, n);
    for k in 0..n {
        m[(s.zero_based()[k], k)] = ONE;
    }
    m
}

/// Edge unitary `ρ(a)` for the aligning permutation `a` of each edge; the
/// holonomy of a loop is `ρ(σ_α)`.
pub fn bundle_from_representation(pair: &ConfigGraphPair, rep: &Representation) -> Result<DiscreteBundle> {
    if rep.n() != pair.particles() {
        return Err(Error::InvalidRepresentation(format!(
            "representation of S_{} used with {} particles",
            rep.n(),
            pair.particles()
        )));
    }
    rep.validate()?;
    let mut cache: HashMap<Vec<usize>, CMat> = HashMap::new();
    let links = (0..pair.quotient().n_edges())
        .map(|e| {
            let a = pair.alignment(forward(e));
            cache.entry(a.zero_based().to_vec()).or_insert_with(|| rep.eval(&a)).clone()
        })
        .collect();
    DiscreteBundle::new(pair.shared_quotient(), rep.dim(), links)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Sorts in place and returns the parity sign of the sorting permutation.
fn sort_with_sign(v: &mut [usize]) -> f64 {
    let mut sign = 1.0;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

/// Fibers `Λᴺ W` with `dim W = w_dim`, in the wedge-monomial basis
/// `w_{s_1} ∧ … ∧ w_{s_N}`, `s_1 < … < s_N`. Along an edge the vector carried
/// by particle slot `k` moves to slot `a(k)`, and reordering the wedge back to
/// increasing indices contributes the sign of that reordering.
pub fn exterior_power_bundle(pair: &ConfigGraphPair, w_dim: usize) -> Result<DiscreteBundle> {
    let n = pair.particles();
    if w_dim < n {
        return Err(Error::EmptyFiber { w_dim, particles: n });
    }
    let monomials = combinations(w_dim, n);
    debug_assert_eq!(monomials.len(), binomial(w_dim, n));
    let index: HashMap<&[usize], usize> = monomials.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let rank = monomials.len();
    let mut cache: HashMap<Vec<usize>, CMat> = HashMap::new();
    let links = (0..pair.quotient().n_edges())
        .map(|e| {
            let a = pair.alignment(forward(e));
            cache
                .entry(a.zero_based().to_vec())
                .or_insert_with(|| {
                    let mut m = CMat::zeros(rank, rank);
                    let mut moved = vec![0usize; n];
                    for (col, s) in monomials.iter().enumerate() {
                        for k in 0..n {
                            moved[a.zero_based()[k]] = s[k];
                        }
                        let sign = sort_with_sign(&mut moved);
                        m[(index[moved.as_slice()], col)] = C64::from(sign);
                    }
                    m
                })
                .clone()
        })
        .collect();
    DiscreteBundle::new(pair.shared_quotient(), rank, links)
}

/// Edge sign `block_sign(a, d)`: the sign of `a` acting on the `N·d`
/// coordinates as a permutation of `d`-blocks. Only odd `d` gives a fermionic
/// bundle; even `d` is refused.
pub fn pseudoscalar_bundle(pair: &ConfigGraphPair) -> Result<DiscreteBundle> {
    let d = pair.lattice().dim();
    if d.is_multiple_of(2) {
        return Err(Error::DimensionParity { d });
    }
    let links = (0..pair.quotient().n_edges())
        .map(|e| CMat::from_element(1, 1, C64::from(pair.alignment(forward(e)).block_sign(d) as f64)))
        .collect();
    DiscreteBundle::new(pair.shared_quotient(), 1, links)
}

struct OrderingIndex {
    perms: Vec<Permutation>,
}

impl OrderingIndex {
    fn new(n: usize) -> Self {
        Self { perms: Permutation::all(n) }
    }

    /// `e_σ ↦ e_{a∘σ}`: a representative `σ·c_q` lifts to `(a∘σ)·c_r`.
    fn transport(&self, a: &Permutation) -> CMat {
        let k = self.perms.len();
        let mut m = CMat::zeros(k, k);
        for (i, s) in self.perms.iter().enumerate() {
            let target = a.compose(s).unwrap().lexicographic_rank();
            m[(target, i)] = ONE;
        }
        m
    }

    /// `Σ_σ sign(σ) e_σ / √N!`.
    fn antisymmetric(&self) -> CVec {
        let norm = (self.perms.len() as f64).sqrt();
        CVec::from_iterator(self.perms.len(), self.perms.iter().map(|s| C64::from(s.sign() as f64 / norm)))
    }
}

/// Rank-`N!` bundle: the fiber over `q` is the direct sum over its `N!`
/// ordered representatives, transported by relabeling them.
pub fn directsum_ambient_bundle(pair: &ConfigGraphPair) -> Result<DiscreteBundle> {
    let idx = OrderingIndex::new(pair.particles());
    let links = (0..pair.quotient().n_edges()).map(|e| idx.transport(&pair.alignment(forward(e)))).collect();
    DiscreteBundle::new(pair.shared_quotient(), factorial(pair.particles()), links)
}

/// The line subbundle of [`directsum_ambient_bundle`] cut out by
/// `w_{σq̂} = sign(σ) w_{q̂}`. Each ambient edge unitary is checked to map the
/// constrained line into itself before its restriction is taken.
pub fn directsum_antisym_bundle(pair: &ConfigGraphPair) -> Result<DiscreteBundle> {
    let idx = OrderingIndex::new(pair.particles());
    let u = idx.antisymmetric();
    let mut cache: HashMap<Vec<usize>, C64> = HashMap::new();
    let mut links = Vec::with_capacity(pair.quotient().n_edges());
    for e in 0..pair.quotient().n_edges() {
        let a = pair.alignment(forward(e));
        let key = a.zero_based().to_vec();
        let z = match cache.get(&key) {
            Some(&z) => z,
            None => {
                let moved = idx.transport(&a) * &u;
                let z = u.dotc(&moved);
                let leak = (&moved - &u * z).norm();
                if leak > 1e-12 {
                    return Err(Error::Invariant(format!(
                        "ambient transport leaves the antisymmetric line on edge {e} (residual {leak:.3e})"
                    )));
                }
                cache.insert(key, z);
                z
            }
        };
        links.push(CMat::from_element(1, 1, z));
    }
    DiscreteBundle::new(pair.shared_quotient(), 1, links)
}

/// Planar anyons: a hop of one particle from `x` to `x'` with the others at
/// sites `y` has phase `exp(i (β/π) Σ_y Δθ_y)`, where `Δθ_y` is the
/// principal-value change of `arg(x − y)`. A loop's holonomy is then
/// `exp(i β W / π)` with `W` the total winding of all pair angles.
pub fn anyon_bundle(pair: &ConfigGraphPair, beta: f64) -> Result<DiscreteBundle> {
    let lat = pair.lattice();
    if lat.dim() != 2 {
        return Err(Error::Dimension(format!("anyon bundles need d = 2, got d = {}", lat.dim())));
    }
    if lat.is_periodic() {
        return Err(Error::UnsupportedTopology("pair angles are undefined on a periodic box".into()));
    }
    let point = |s: usize| {
        let c = lat.coords(s);
        C64::new(c[0] as f64, c[1] as f64)
    };
    let q = pair.quotient();
    let mut links = Vec::with_capacity(q.n_edges());
    for e in 0..q.n_edges() {
        let d = forward(e);
        let (from, to) = pair.moved_sites(d);
        let (x, x2) = (point(from), point(to));
        let mut total = 0.0;
        for &y in pair.quotient_tuple(q.tail(d)) {
            if y == from {
                continue;
            }
            let y = point(y);
            let dtheta = ((x2 - y) / (x - y)).arg();
            if dtheta.abs() >= PI - 1e-9 {
                return Err(Error::Invariant(format!("pair angle jumps by {dtheta} along edge {e}")));
            }
            total += dtheta;
        }
        links.push(CMat::from_element(1, 1, cis(beta / PI * total)));
    }
    DiscreteBundle::new(pair.shared_quotient(), 1, links)
}
