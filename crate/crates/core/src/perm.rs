//! Permutations of `{1..N}` and braid words on `N` strands.
//!
//! The public interface is 1-based; images are stored 0-based. Composition
//! follows the function convention: `compose(p, q)` maps `k ↦ p(q(k))`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cis, C64};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// From 1-based images: `images[k-1]` is the image of `k`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let zero_based: Vec<usize> = images
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| Error::InvalidPermutation("images are 1-based".into()))
            })
            .collect::<Result<_>>()?;
        Self::from_zero_based(zero_based)
    }

    pub fn from_zero_based(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "{:?} is not a bijection of {{1..{n}}}",
                    images.iter().map(|i| i + 1).collect::<Vec<_>>()
                )));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// The transposition exchanging `i` and `j` (1-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n || i == j {
            return Err(Error::InvalidPermutation(format!("transposition ({i} {j}) on {n} letters")));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i - 1, j - 1);
        Ok(Self { images })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Self { images }
    }

    /// All of `S_n` in lexicographic order of the image sequence.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self { images: current.clone() });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &i)| k == i)
    }

    /// Image of `k` (1-based in, 1-based out).
    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1] + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn zero_based(&self) -> &[usize] {
        &self.images
    }

    /// `k ↦ self(other(k))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch { expected: self.len(), found: other.len() });
        }
        Ok(Self { images: other.images.iter().map(|&k| self.images[k]).collect() })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (k, &i) in self.images.iter().enumerate() {
            inv[i] = k;
        }
        Self { images: inv }
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut cycles = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.images[k];
            }
        }
        cycles
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i32 {
        if (self.len() - self.cycle_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Sign of the permutation of `N·d` letters that moves `N` blocks of `d`
    /// letters rigidly, i.e. `sign^d`.
    pub fn block_sign(&self, d: usize) -> i32 {
        if d.is_multiple_of(2) {
            1
        } else {
            self.sign()
        }
    }

    /// Reorders a tuple: `(σ·x)_k = x_{σ(k)}`.
    pub fn permute_entries<T: Clone>(&self, tuple: &[T]) -> Vec<T> {
        assert_eq!(tuple.len(), self.len());
        self.images.iter().map(|&i| tuple[i].clone()).collect()
    }

    /// Dense index of this permutation within [`Permutation::all`].
    pub fn lexicographic_rank(&self) -> usize {
        let n = self.len();
        let mut rank = 0;
        let mut factorial = (1..n).product::<usize>().max(1);
        let mut remaining: Vec<usize> = (0..n).collect();
        for (pos, &img) in self.images.iter().enumerate() {
            let idx = remaining.iter().position(|&r| r == img).unwrap();
            rank += idx * factorial;
            remaining.remove(idx);
            if pos + 1 < n {
                factorial /= n - 1 - pos;
            }
        }
        rank
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<usize>) -> Result<Self> {
        Self::from_images(&images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images()
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, e.g. `(1 2)(3 4)`; the identity prints as `id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.len()];
        let mut wrote = false;
        for start in 0..self.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut k = start;
            let mut first = true;
            while !seen[k] {
                seen[k] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", k + 1)?;
                first = false;
                k = self.images[k];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "id")?;
        }
        Ok(())
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// One letter `σ_i^{±1}` of a braid word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidLetter {
    /// Generator index in `1..N`.
    pub generator: usize,
    /// `+1` or `-1`.
    pub exponent: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<(usize, i8)>) -> Result<Self> {
        let letters = letters
            .into_iter()
            .map(|(generator, exponent)| {
                if generator == 0 || generator >= strands {
                    return Err(Error::InvalidBraid(format!(
                        "generator {generator} outside 1..{}",
                        strands.saturating_sub(1)
                    )));
                }
                if exponent != 1 && exponent != -1 {
                    return Err(Error::InvalidBraid(format!("exponent {exponent} is not ±1")));
                }
                Ok(BraidLetter { generator, exponent })
            })
            .collect::<Result<_>>()?;
        Ok(Self { strands, letters })
    }

    pub fn empty(strands: usize) -> Self {
        Self { strands, letters: Vec::new() }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.exponent as i64).sum()
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::SizeMismatch { expected: self.strands, found: other.strands });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Self { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> Self {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| BraidLetter { generator: l.generator, exponent: -l.exponent })
            .collect();
        Self { strands: self.strands, letters }
    }

    /// Cancels adjacent `σ_i σ_i^{-1}` pairs until none remain.
    pub fn freely_reduced(&self) -> Self {
        let mut stack: Vec<BraidLetter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match stack.last() {
                Some(top) if top.generator == l.generator && top.exponent == -l.exponent => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Self { strands: self.strands, letters: stack }
    }

    /// Letters act in word order, so the result is `t_last ∘ … ∘ t_first`
    /// with `t` the transposition `(i, i+1)` of each letter.
    pub fn to_permutation(&self) -> Permutation {
        let mut images: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            let (a, b) = (l.generator - 1, l.generator);
            for img in images.iter_mut() {
                if *img == a {
                    *img = b;
                } else if *img == b {
                    *img = a;
                }
            }
        }
        Permutation { images }
    }

    /// The braid-group character `exp(i·β·exponent_sum)`.
    pub fn character(&self, beta: f64) -> C64 {
        cis(beta * self.exponent_sum() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    /// Sign by counting inversions, independent of the cycle-count route.
    fn inversion_sign(images: &[usize]) -> i32 {
        let mut inv = 0;
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if images[i] > images[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(&[1, 1]).is_err());
        assert!(Permutation::from_images(&[0, 1]).is_err());
        assert!(Permutation::from_images(&[1, 3]).is_err());
    }

    #[test]
    fn compose_identity_and_involution() {
        let q = p(&[3, 1, 2]);
        assert_eq!(Permutation::identity(3).compose(&q).unwrap(), q);
        let t = p(&[2, 1]);
        assert!(t.compose(&t).unwrap().is_identity());
        assert!(matches!(
            q.compose(&t),
            Err(Error::SizeMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn compose_matches_index_chasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let n = rng.random_range(1..9);
            let a = Permutation::random(n, &mut rng);
            let b = Permutation::random(n, &mut rng);
            let ia = a.images();
            let ib = b.images();
            let table: Vec<usize> = (1..=n).map(|k| ia[ib[k - 1] - 1]).collect();
            assert_eq!(a.compose(&b).unwrap().images(), table);
        }
    }

    #[test]
    fn sign_examples() {
        assert_eq!(Permutation::identity(4).sign(), 1);
        assert_eq!(Permutation::transposition(2, 1, 2).unwrap().sign(), -1);
        assert_eq!(p(&[2, 3, 1]).sign(), 1);
    }

    #[test]
    fn sign_is_homomorphism_exhaustive_small_n() {
        for n in 1..=4 {
            let all = Permutation::all(n);
            assert_eq!(all.len(), factorial(n));
            for a in &all {
                assert_eq!(a.sign(), inversion_sign(&a.images()));
                for b in &all {
                    assert_eq!(a.compose(b).unwrap().sign(), a.sign() * b.sign());
                }
            }
        }
    }

    #[test]
    fn sign_is_homomorphism_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.random_range(1..=8);
            let a = Permutation::random(n, &mut rng);
            let b = Permutation::random(n, &mut rng);
            assert_eq!(a.compose(&b).unwrap().sign(), a.sign() * b.sign());
        }
    }

    /// Expands `σ` to the permutation of `N·d` letters moving whole blocks.
    fn letter_level_block_permutation(perm: &Permutation, d: usize) -> Vec<usize> {
        let mut images = Vec::new();
        for k in 0..perm.len() {
            let target_block = perm.zero_based()[k];
            for j in 0..d {
                images.push(target_block * d + j + 1);
            }
        }
        images
    }

    #[test]
    fn block_sign_matches_letter_level_oracle() {
        for perm in Permutation::all(3) {
            for d in 1..=3 {
                let expanded = letter_level_block_permutation(&perm, d);
                assert_eq!(perm.block_sign(d), inversion_sign(&expanded), "{perm} d={d}");
            }
        }
        let swap = Permutation::transposition(2, 1, 2).unwrap();
        assert_eq!(swap.block_sign(3), -1);
        assert_eq!(swap.block_sign(2), 1);
        assert_eq!(Permutation::identity(5).block_sign(7), 1);
    }

    #[test]
    fn braid_to_permutation_examples() {
        let s1 = BraidWord::new(2, vec![(1, 1)]).unwrap();
        assert_eq!(s1.to_permutation(), p(&[2, 1]));
        let s1s1 = BraidWord::new(2, vec![(1, 1), (1, 1)]).unwrap();
        assert!(s1s1.to_permutation().is_identity());

        // (12) first, then (23): the later factor acts on the left.
        let t12 = p(&[2, 1, 3]);
        let t23 = p(&[1, 3, 2]);
        let table = t23.compose(&t12).unwrap();
        let w = BraidWord::new(3, vec![(1, 1), (2, 1)]).unwrap();
        assert_eq!(w.to_permutation(), table);
        assert_eq!(table.images(), vec![3, 1, 2]);
    }

    #[test]
    fn braid_character_examples() {
        let beta = 0.731;
        let s1 = BraidWord::new(2, vec![(1, 1)]).unwrap();
        assert!((s1.character(beta) - cis(beta)).norm() < 1e-15);
        assert!((s1.character(std::f64::consts::PI) - C64::from(-1.0)).norm() < 1e-15);
        assert_eq!(BraidWord::empty(3).character(beta), C64::from(1.0));
    }

    #[test]
    fn invalid_braids_rejected() {
        assert!(BraidWord::new(3, vec![(3, 1)]).is_err());
        assert!(BraidWord::new(3, vec![(0, 1)]).is_err());
        assert!(BraidWord::new(3, vec![(1, 2)]).is_err());
    }

    #[test]
    fn lexicographic_rank_indexes_all() {
        for n in 0..=5 {
            for (k, perm) in Permutation::all(n).iter().enumerate() {
                assert_eq!(perm.lexicographic_rank(), k);
            }
        }
    }

    #[test]
    fn display_cycles() {
        assert_eq!(p(&[2, 1, 4, 3]).to_string(), "(1 2)(3 4)");
        assert_eq!(Permutation::identity(3).to_string(), "id");
    }

    fn braid_strategy() -> impl Strategy<Value = BraidWord> {
        (2usize..6).prop_flat_map(|n| {
            prop::collection::vec((1..n, prop::bool::ANY), 0..20).prop_map(move |ls| {
                BraidWord::new(n, ls.into_iter().map(|(g, s)| (g, if s { 1 } else { -1 })).collect())
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn character_is_multiplicative(w1 in braid_strategy(), extra in prop::collection::vec((1usize..2, prop::bool::ANY), 0..10), beta in -7.0f64..7.0) {
            let n = w1.strands();
            let w2 = BraidWord::new(n, extra.into_iter().map(|(g, s)| (g, if s { 1 } else { -1 })).collect()).unwrap();
            let joined = w1.concat(&w2).unwrap();
            let lhs = joined.character(beta);
            let rhs = w1.character(beta) * w2.character(beta);
            prop_assert!((lhs - rhs).norm() < 1e-12);
            prop_assert_eq!(
                joined.to_permutation(),
                w2.to_permutation().compose(&w1.to_permutation()).unwrap()
            );
        }

        #[test]
        fn free_reduction_preserves_invariants(w in braid_strategy()) {
            let r = w.freely_reduced();
            prop_assert_eq!(r.exponent_sum(), w.exponent_sum());
            prop_assert_eq!(r.to_permutation(), w.to_permutation());
            let id = w.concat(&w.inverse()).unwrap().freely_reduced();
            prop_assert!(id.letters().is_empty());
        }
    }
}
