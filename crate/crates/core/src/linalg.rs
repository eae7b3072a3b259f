//! Dense and sparse complex linear algebra used across the crate.
//!
//! Dense work goes through `nalgebra`; the Hamiltonians of lattice graphs are
//! sparse, so they are held in a small compressed-row matrix that only knows
//! the handful of operations the rest of the crate needs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Frobenius norm of `a - b`.
pub fn diff_norm(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `‖M†M − I‖_F`; zero for unitaries and for isometries with orthonormal columns.
pub fn isometry_residual(m: &CMat) -> f64 {
    let g = m.adjoint() * m;
    diff_norm(&g, &CMat::identity(m.ncols(), m.ncols()))
}

/// `max(‖M†M − I‖_F, ‖MM† − I‖_F)`.
pub fn unitarity_residual(m: &CMat) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let left = isometry_residual(m);
    let right = diff_norm(&(m * m.adjoint()), &CMat::identity(m.nrows(), m.nrows()));
    left.max(right)
}

pub fn hermiticity_residual(m: &CMat) -> f64 {
    diff_norm(m, &m.adjoint())
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in ascending order.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Largest absolute difference between two sorted spectra of equal length.
pub fn spectrum_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    cis(rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn random_cvec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    CVec::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

pub fn random_unit_cvec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    let v = random_cvec(n, rng);
    let norm = v.norm();
    v / C64::from(norm)
}

/// Unitary factor of the polar decomposition `X = V·P`.
pub fn polar_unitary(x: &CMat) -> CMat {
    let svd = x.clone().svd(true, true);
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    u * v_t
}

/// Compressed-row complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    /// Builds from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { nrows, ncols, row_ptr, col_idx, values }
    }

    /// Keeps every entry that is not exactly zero.
    pub fn from_dense(m: &CMat) -> Self {
        let mut triplets = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if v != ZERO {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), triplets)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.row(r).find(|&(j, _)| j == c).map(|(_, v)| v).unwrap_or(ZERO)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }

    pub fn mul_vec(&self, x: &CVec) -> CVec {
        assert_eq!(x.len(), self.ncols);
        CVec::from_fn(self.nrows, |r, _| self.row(r).map(|(c, v)| v * x[c]).sum())
    }

    pub fn hermiticity_residual(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        self.triplets()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest absolute row sum, an upper bound on the spectral norm of a Hermitian matrix.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.nrows)
            .map(|r| self.row(r).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 5, 9] {
            let u = random_unitary(n, &mut rng);
            assert!(unitarity_residual(&u) < 1e-12);
        }
    }

    #[test]
    fn csr_round_trip_and_duplicates() {
        let t = vec![(0, 1, ONE), (1, 0, ONE), (0, 1, ONE), (1, 1, C64::new(2.0, 0.0))];
        let m = CsrMatrix::from_triplets(2, 2, t);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(0, 1), C64::new(2.0, 0.0));
        let d = m.to_dense();
        assert_eq!(CsrMatrix::from_dense(&d), m);
        let x = CVec::from_vec(vec![ONE, I]);
        let y = m.mul_vec(&x);
        assert_eq!(y, &d * &x);
    }

    #[test]
    fn eigh_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_unitary(6, &mut rng);
        let h = &a + a.adjoint();
        let (vals, vecs) = eigh(&h);
        let diag = CMat::from_diagonal(&CVec::from_iterator(6, vals.iter().map(|&v| C64::from(v))));
        let rebuilt = &vecs * diag * vecs.adjoint();
        assert!(diff_norm(&rebuilt, &h) < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn polar_factor_of_scaled_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unitary(4, &mut rng);
        let p = CMat::from_diagonal(&CVec::from_vec(vec![
            C64::from(1.0),
            C64::from(2.0),
            C64::from(0.5),
            C64::from(3.0),
        ]));
        let x = &u * &p;
        assert!(diff_norm(&polar_unitary(&x), &u) < 1e-12);
    }
}
