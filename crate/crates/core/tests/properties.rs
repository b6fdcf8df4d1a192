use std::sync::LazyLock;

use proptest::prelude::*;

use ford_spheres::arith;
use ford_spheres::farey::{self, GFraction};
use ford_spheres::moment;
use ford_spheres::region::{self, OmegaSpec};
use ford_spheres::{CanonicalGInt, GInt};

fn gint(bound: i64) -> impl Strategy<Value = GInt> {
    (-bound..=bound, -bound..=bound).prop_map(|(a, b)| GInt::new(a, b))
}

fn nonzero(bound: i64) -> impl Strategy<Value = GInt> {
    gint(bound).prop_filter("nonzero", |z| !z.is_zero())
}

fn canonical(bound: i64) -> impl Strategy<Value = CanonicalGInt> {
    nonzero(bound).prop_map(|z| CanonicalGInt::associate(z).unwrap())
}

/// A canonical `s` together with an `S` with `|s| <= S <= 24`.
fn spec() -> impl Strategy<Value = OmegaSpec> {
    canonical(12).prop_flat_map(|s| {
        let lo = (s.norm() as f64).sqrt().ceil() as u64;
        (lo.max(1)..=24).prop_map(move |big| OmegaSpec::new(s, big).unwrap())
    })
}

static ADJACENT: LazyLock<Vec<(GFraction, GFraction)>> = LazyLock::new(|| {
    let g = farey::enumerate_gs(5);
    let mut out = Vec::new();
    for (i, f1) in g.iter().enumerate() {
        for f2 in &g[i + 1..] {
            if farey::is_adjacent(f1, f2) {
                out.push((*f1, *f2));
            }
        }
    }
    out
});

proptest! {
    #[test]
    fn div_rem_reconstructs(a in gint(10_000), b in nonzero(10_000)) {
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(q * b + r, a);
        prop_assert!(2 * r.norm() <= b.norm());
    }

    #[test]
    fn gcd_divides_and_bezout_holds(a in nonzero(2_000), b in nonzero(2_000)) {
        let g = a.gcd(&b).unwrap();
        prop_assert!(g.get().divides(&a) && g.get().divides(&b));
        let (h, x, y) = a.gcd_ext(&b).unwrap();
        prop_assert_eq!(x * a + y * b, h);
        prop_assert_eq!(CanonicalGInt::associate(h).unwrap(), g);
    }

    #[test]
    fn factorization_reconstructs(z in nonzero(3_000)) {
        let f = z.factor().unwrap();
        prop_assert_eq!(f.reconstruct(), z);
        prop_assert!(f.unit.is_unit());
    }

    #[test]
    fn norm_is_multiplicative(a in gint(30_000), b in gint(30_000)) {
        prop_assert_eq!((a * b).norm(), a.norm() * b.norm());
    }

    #[test]
    fn display_parse_round_trip(z in gint(1_000_000)) {
        prop_assert_eq!(z.to_string().parse::<GInt>().unwrap(), z);
    }

    #[test]
    fn phi_multiplicative_on_coprime(a in canonical(60), b in canonical(60)) {
        prop_assume!(a.get().is_coprime(&b.get()).unwrap());
        let ab = CanonicalGInt::associate(a.get() * b.get()).unwrap();
        prop_assert_eq!(arith::phi_i(&ab), arith::phi_i(&a) * arith::phi_i(&b));
    }

    #[test]
    fn divisor_sums(q in canonical(80)) {
        let phi_sum: i64 = arith::divisors(&q).iter().map(arith::phi_i).sum();
        prop_assert_eq!(phi_sum, q.norm());
        prop_assert_eq!(arith::mobius_divisor_sum(&q), i64::from(q.is_one()));
        let count = arith::divisor_sum_multiplicative(|_, _| 1u64, &q);
        prop_assert_eq!(count as usize, arith::divisors(&q).len());
    }

    #[test]
    fn fractions_are_reduced_and_canonical(r in gint(200), s in nonzero(200)) {
        let f = GFraction::new(r, s).unwrap();
        let d = f.den().get();
        prop_assert!(d.re > 0 && d.im >= 0);
        prop_assert!(f.num().is_coprime(&d).unwrap());
        // same value: r * d == num * s
        prop_assert_eq!(r * d, f.num() * s);
        prop_assert_eq!(f.to_string().parse::<GFraction>().unwrap(), f);
    }

    #[test]
    fn adjacency_matches_tangency(i in 0usize..653, j in 0usize..653) {
        prop_assume!(i != j);
        let g = farey::enumerate_gs(7);
        let (f1, f2) = (&g[i], &g[j]);
        prop_assert_eq!(farey::is_adjacent(f1, f2), farey::spheres_tangent(f1, f2).unwrap());
    }

    #[test]
    fn mediant_children_adjacent_to_parents(k in any::<prop::sample::Index>()) {
        let (f1, f2) = k.get(&ADJACENT);
        for child in farey::mediant_children(f1, f2).unwrap() {
            prop_assert!(child.in_unit_square());
            prop_assert!(farey::is_adjacent(&child, f1) && farey::is_adjacent(&child, f2));
        }
    }

    #[test]
    fn region_invariant_under_units(spec in spec(), z in gint(24)) {
        let inside = region::omega_contains(z, &spec);
        for u in GInt::units() {
            prop_assert_eq!(region::omega_contains(z * u, &spec), inside);
        }
    }

    #[test]
    fn region_counts_and_area(spec in spec()) {
        let all = region::omega_lattice_count(&spec, false);
        let coprime = region::omega_lattice_count(&spec, true);
        prop_assert!(coprime <= all);
        prop_assert_eq!(all, 4 * region::omega_lattice_count_canonical(&spec, false));
        prop_assert_eq!(coprime, 4 * region::omega_lattice_count_canonical(&spec, true));
        let abs_s = (spec.s().norm() as f64).sqrt();
        let big = spec.s_max() as f64;
        let closed = region::omega_area(&spec);
        let polar = region::omega_area_by_polar_integral(abs_s, big).unwrap();
        prop_assert!((closed - polar).abs() <= 1e-9 * closed.max(1.0));
        prop_assert!(region::omega_area_bounds_check(&spec));
    }

    #[test]
    fn main_term_is_quadratic(s in 1u64..10_000, k in 1u64..8) {
        let a = moment::main_term(s).unwrap();
        let b = moment::main_term(s * k).unwrap();
        prop_assert!((b / a - (k * k) as f64).abs() <= 1e-9 * (k * k) as f64);
    }
}
