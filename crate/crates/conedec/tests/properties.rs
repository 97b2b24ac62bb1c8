//! Property tests for the exact kernel and the polyhedral layer.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conedec::polyhedra::{convex_hull, polytope_intersect_halfspaces, AffineFunctional, Cone};
use conedec::ratlin::{rat, QMatrix, QVector, Rational, SolveOutcome};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

fn arb_vector(dim: usize) -> impl Strategy<Value = QVector> {
    prop::collection::vec(arb_rational(), dim).prop_map(QVector::new)
}

fn arb_square(dim: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(arb_rational(), dim * dim)
        .prop_map(move |data| QMatrix::new(dim, dim, data))
}

proptest! {
    #[test]
    fn solve_substitutes_back(a in arb_square(3), b in arb_vector(3)) {
        match a.solve_linear(&b).unwrap() {
            SolveOutcome::Unique(x) => prop_assert_eq!(a.mul_vec(&x), b),
            SolveOutcome::Singular { kernel } => {
                prop_assert!(!kernel.is_zero());
                prop_assert!(a.mul_vec(&kernel).is_zero());
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate(rows in 1usize..4, data in prop::collection::vec(arb_rational(), 12)) {
        let cols = 3;
        let m = QMatrix::new(rows, cols, data[..rows * cols].to_vec());
        let basis = m.kernel_basis();
        for v in &basis {
            prop_assert!(m.mul_vec(v).is_zero());
        }
        if !basis.is_empty() {
            prop_assert_eq!(QMatrix::from_rows(&basis).rank(), basis.len());
        }
        prop_assert_eq!(basis.len(), cols - m.rank());
    }

    #[test]
    fn hull_is_idempotent_and_order_insensitive(
        pts in prop::collection::vec(arb_vector(2), 1..8),
        seed in 0u64..1000,
    ) {
        let hull = convex_hull(&pts);
        let mut shuffled = pts.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.gen_range(0..=i));
        }
        prop_assert_eq!(convex_hull(&shuffled), hull.clone());
        prop_assert_eq!(convex_hull(hull.vertices()), hull.clone());
        for p in &pts {
            prop_assert!(hull.contains(p));
        }
    }

    #[test]
    fn dual_is_involutive(gens in prop::collection::vec(arb_vector(3), 0..5)) {
        let c = Cone::from_generators(3, gens.clone());
        let dd = c.dual().dual();
        prop_assert!(c.canonical_eq(&dd));
        // Duality inequality: every generator pairs nonnegatively with every
        // dual generator.
        for g in &gens {
            for h in c.dual().generators() {
                prop_assert!(g.dot(&h) >= Rational::from_integer(0.into()));
            }
            prop_assert!(c.contains(g));
        }
    }

    #[test]
    fn clipping_stays_inside(
        pts in prop::collection::vec(arb_vector(2), 1..6),
        normal in arb_vector(2),
        offset in arb_rational(),
    ) {
        let p = convex_hull(&pts);
        let h = AffineFunctional::new(normal, offset);
        let clipped = polytope_intersect_halfspaces(&p, std::slice::from_ref(&h));
        for v in clipped.vertices() {
            prop_assert!(h.eval(v) >= Rational::from_integer(0.into()));
            prop_assert!(p.contains(v));
        }
        // Kept original vertices survive the clip.
        for v in p.vertices() {
            if h.eval(v) >= Rational::from_integer(0.into()) {
                prop_assert!(clipped.contains(v));
            }
        }
    }
}

/// Definiteness agrees with exhaustive sign checks of the quadratic form
/// over a deterministic set of 1000 random rational vectors.
#[test]
fn negative_definiteness_matches_quadratic_form_sampling() {
    let suite: Vec<QMatrix> = vec![
        QMatrix::from_int_rows(&[&[-1]]),
        QMatrix::from_int_rows(&[&[-2, 1], &[1, -2]]),
        QMatrix::from_int_rows(&[&[-1, 1], &[1, -1]]),
        QMatrix::from_int_rows(&[&[-3, 1, 0], &[1, -2, 1], &[0, 1, -2]]),
        QMatrix::from_int_rows(&[&[-2, 1, 1], &[1, -2, 1], &[1, 1, -2]]),
        QMatrix::from_int_rows(&[&[2, 0], &[0, 2]]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for g in &suite {
        let n = g.rows();
        let verdict = g.is_negative_definite().unwrap();
        let mut all_negative = true;
        for _ in 0..1000 {
            let x = QVector::new(
                (0..n)
                    .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                    .collect(),
            );
            if x.is_zero() {
                continue;
            }
            let form = x.dot(&g.mul_vec(&x));
            if form >= Rational::from_integer(0.into()) {
                all_negative = false;
            }
        }
        // Necessary condition: a definite verdict forces negative samples.
        if verdict {
            assert!(all_negative, "definite matrix with nonnegative sample: {g:?}");
        }
    }
}
