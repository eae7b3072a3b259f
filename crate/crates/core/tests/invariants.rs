//! Property tests spanning several modules.

use fermibundle::bohm::{Evolution, Orbital, SlaterState};
use fermibundle::bundle::{bundle_from_character, is_gauge_equivalent, Character, Section};
use fermibundle::confspace::{build_pair, loop_permutation, random_loop, LatticeBox};
use fermibundle::iso::{exchange_residual, Correspondence};
use fermibundle::linalg::{random_cvec, C64};
use fermibundle::perm::Permutation;
use fermibundle::triple::Symmetry;
use fermibundle::PhysicalParams;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lattice(sides: &[usize]) -> LatticeBox {
    LatticeBox::open(sides).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn holonomy_is_sign_of_loop_permutation(seed in any::<u64>(), n in 2usize..=3, steps in 1usize..60) {
        let pair = build_pair(&lattice(&[3, 3]), n).unwrap();
        let bundle = bundle_from_character(&pair, Character::Alternating);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = (seed % pair.n_quotient() as u64) as usize;
        let l = random_loop(pair.quotient(), q, steps, &mut rng);
        let base = pair.ordered().config(pair.canonical_vertex(q));
        let sigma = loop_permutation(&pair, &l, &base).unwrap();
        let phase = bundle.holonomy_phase(&l).unwrap();
        prop_assert!((phase - C64::from(sigma.sign() as f64)).norm() <= 1e-12);
    }

    #[test]
    fn random_regauge_stays_equivalent(seed in any::<u64>()) {
        let pair = build_pair(&lattice(&[3, 2]), 2).unwrap();
        let bundle = bundle_from_character(&pair, Character::Alternating);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (regauged, _) = bundle.random_regauge(&mut rng);
        let c = is_gauge_equivalent(&bundle, &regauged).unwrap();
        prop_assert!(c.equivalent);
        let bosonic = bundle_from_character(&pair, Character::Trivial);
        prop_assert!(!is_gauge_equivalent(&bosonic, &regauged).unwrap().equivalent);
    }

    #[test]
    fn correspondence_preserves_norm_and_antisymmetry(seed in any::<u64>(), n in 2usize..=3) {
        let pair = build_pair(&lattice(&[3, 3]), n).unwrap();
        let bundle = bundle_from_character(&pair, Character::Alternating);
        let u = Correspondence::new(&pair, &bundle).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = Section::from_values(1, random_cvec(pair.n_quotient(), &mut rng)).unwrap();
        let f = u.apply(&s).unwrap();
        prop_assert!((f.norm_sqr(1.0) - s.norm_sqr(1.0)).abs() <= 1e-12 * s.norm_sqr(1.0));
        prop_assert!(exchange_residual(pair.ordered(), &f, Symmetry::Anti).unwrap() <= 1e-12);
        let back = u.invert(&f).unwrap();
        prop_assert!((&back.values - &s.values).norm() <= 1e-12 * s.values.norm());
    }

    #[test]
    fn slater_velocity_is_permutation_covariant(
        xs in proptest::collection::vec(-2.0f64..2.0, 6),
        t in 0.0f64..2.0,
        seed in any::<u64>(),
    ) {
        let orbitals = vec![
            Orbital::isotropic(vec![-1.0, 0.0], vec![0.4, 0.1], 0.9, Evolution::Harmonic { omega: 0.8 }).unwrap(),
            Orbital::isotropic(vec![0.5, 0.5], vec![-0.2, 0.3], 0.7, Evolution::Harmonic { omega: 0.8 }).unwrap(),
            Orbital::isotropic(vec![0.9, -0.8], vec![0.0, -0.5], 1.1, Evolution::Harmonic { omega: 0.8 }).unwrap(),
        ];
        let state = SlaterState::new(orbitals, PhysicalParams::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = Permutation::random(3, &mut rng);
        let relabel = |q: &[f64]| -> Vec<f64> {
            sigma.zero_based().iter().flat_map(|&s| q[2 * s..2 * s + 2].to_vec()).collect()
        };
        let (Ok(v), Ok(w)) = (state.velocity(&xs, t), state.velocity(&relabel(&xs), t)) else {
            return Ok(());
        };
        for (a, b) in w.iter().zip(relabel(&v)) {
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
        }
    }
}
