use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ciupm::circle::wrapped_cdf;
use ciupm::oracle::{build_system, lift_witness, verify_witness};
use ciupm::scalar::sqrt_scalar;
use ciupm::{
    fat_family, is_ciupm, ks_mod1, minimal_ciupm, solve_feasibility, threshold_c, wrap, AffineMap, FeasibilityOutcome,
    PiecewiseDensity, Scalar,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat() -> impl Strategy<Value = BigRational> {
    (-200i64..200, 1i64..40).prop_map(|(n, d)| q(n, d))
}

fn pos_rat() -> impl Strategy<Value = BigRational> {
    (1i64..60, 1i64..20).prop_map(|(n, d)| q(n, d))
}

/// Random normalized step density.
fn step_density() -> impl Strategy<Value = PiecewiseDensity> {
    (rat(), prop::collection::vec((pos_rat(), 0i64..6), 1..5)).prop_filter_map("all-zero", |(start, parts)| {
        let total: BigRational = parts.iter().map(|(len, w)| len * BigRational::from_integer(BigInt::from(*w))).sum();
        if total == q(0, 1) {
            return None;
        }
        let mut breaks = vec![Scalar::Exact(start.clone())];
        let mut x = start;
        let mut values = Vec::new();
        for (len, w) in parts {
            x += len;
            breaks.push(Scalar::Exact(x.clone()));
            values.push(Scalar::Exact(BigRational::from_integer(BigInt::from(w)) / &total));
        }
        PiecewiseDensity::step(breaks, values).ok()
    })
}

/// Rational slopes `±p/q` with `q ≥ 2`, `p/q > 1`, optionally inverted.
fn rational_slope() -> impl Strategy<Value = Scalar> {
    (2i64..6, 1i64..4, any::<bool>(), any::<bool>()).prop_filter_map("not coprime", |(qd, mult, neg, inv)| {
        let p = qd * mult + 1 + (mult % 2);
        if num_integer::gcd(p, qd) != 1 || p <= qd {
            return None;
        }
        let b = Scalar::ratio(if neg { -p } else { p }, qd);
        Some(if inv { b.recip().unwrap() } else { b })
    })
}

fn grid_sum(mu: &PiecewiseDensity, t: &Scalar) -> Scalar {
    let lo: BigInt = mu.support_min().floor().unwrap() - 1;
    let hi = mu.support_max().floor().unwrap() + 1;
    let mut acc = Scalar::zero();
    let mut k = lo;
    while k <= hi {
        acc = &acc + &mu.eval(&(t + &Scalar::from_big(k.clone()))).unwrap();
        k += 1;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn interval_sqrt_brackets_the_root(n in 1i64..10_000, d in 1i64..500, bits in 16u32..200) {
        let x = q(n, d);
        let r = sqrt_scalar(&Scalar::Exact(x.clone()), bits).unwrap();
        let (lo, hi) = (r.lower(), r.upper());
        prop_assert!(&lo * &lo <= x && x <= &hi * &hi);
        if !r.is_exact() {
            let width = &hi - &lo;
            prop_assert!(width <= BigRational::new(BigInt::from(1), BigInt::from(2).pow(bits)));
        }
    }

    #[test]
    fn interval_arithmetic_contains_exact_result(a in rat(), b in rat(), bits in 24u32..160) {
        // wrap exact values in tiny intervals and check containment
        let wa = Scalar::approx(a.clone(), q(1, 1 << 20), bits).unwrap();
        let wb = Scalar::approx(b.clone(), q(1, 1 << 20), bits).unwrap();
        for (r, exact) in [(&wa + &wb, &a + &b), (&wa - &wb, &a - &b), (&wa * &wb, &a * &b)] {
            prop_assert!(r.lower() <= exact && exact <= r.upper());
        }
    }

    #[test]
    fn mass_is_conserved(mu in step_density(), g in rat(), b in rat(), w in 1i64..9) {
        prop_assume!(b != q(0, 1));
        let one = Scalar::one();
        prop_assert_eq!(mu.mass(), one.clone());
        prop_assert_eq!(mu.translate(&Scalar::Exact(g.clone())).mass(), one.clone());
        let map = AffineMap::new(Scalar::Exact(g), Scalar::Exact(b)).unwrap();
        prop_assert_eq!(mu.pushforward(&map).mass(), one.clone());
        prop_assert_eq!(mu.reflect().mass(), one.clone());
        let wt = Scalar::ratio(w, 10);
        let mixed = PiecewiseDensity::mix(&[wt.clone(), &one - &wt], &[mu.clone(), mu.reflect()]).unwrap();
        prop_assert_eq!(mixed.mass(), one.clone());
        prop_assert_eq!(wrap(&mu).unwrap().mass(), one);
    }

    #[test]
    fn pushforward_then_inverse_is_identity(mu in step_density(), a in rat(), b in rat()) {
        prop_assume!(b != q(0, 1));
        let map = AffineMap::new(Scalar::Exact(a), Scalar::Exact(b)).unwrap();
        prop_assert_eq!(mu.pushforward(&map).pushforward(&map.inverse()), mu);
    }

    #[test]
    fn wrap_matches_pointwise_sum(mu in step_density(), num in 0i64..97) {
        let w = wrap(&mu).unwrap();
        let t = Scalar::ratio(2 * num + 1, 194);
        prop_assert_eq!(w.eval(&t).unwrap(), grid_sum(&mu, &t));
        prop_assert_eq!(wrapped_cdf(&mu, &Scalar::one()).unwrap(), Scalar::one());
    }

    #[test]
    fn invariance_properties(beta in rational_slope(), g in rat(), a in rat(), extra in 0i64..5, w in 1i64..5) {
        let c = &threshold_c(&beta).unwrap() + &Scalar::ratio(extra, 3);
        let mu = fat_family(&beta, &c, &[Scalar::ratio(w, 5), Scalar::ratio(5 - w, 5)], &[Scalar::zero(), Scalar::one()])
            .unwrap_or_else(|_| minimal_ciupm(&beta).unwrap());
        let zero = Scalar::zero();
        let t = AffineMap::linear(beta.clone()).unwrap();
        prop_assert!(is_ciupm(&mu, &t, &zero).unwrap().ok);
        let ta = AffineMap::new(Scalar::Exact(a), beta.clone()).unwrap();
        prop_assert!(is_ciupm(&mu.translate(&Scalar::Exact(g)), &ta, &zero).unwrap().ok);
        let other = minimal_ciupm(&beta).unwrap().translate(&Scalar::ratio(extra, 7));
        let mixed = PiecewiseDensity::mix(&[Scalar::ratio(1, 3), Scalar::ratio(2, 3)], &[mu.clone(), other]).unwrap();
        prop_assert!(is_ciupm(&mixed, &t, &zero).unwrap().ok);
        let neg = AffineMap::linear(-&beta).unwrap();
        prop_assert!(is_ciupm(&mu.reflect(), &neg, &zero).unwrap().ok);
        let inv = AffineMap::linear(beta.recip().unwrap()).unwrap();
        prop_assert!(is_ciupm(&mu.pushforward(&t), &inv, &zero).unwrap().ok);
    }

    #[test]
    fn minimal_density_is_symmetric_and_bounded(beta in rational_slope()) {
        let mu = minimal_ciupm(&beta).unwrap();
        prop_assert_eq!(mu.reflect_about_center(), mu.clone());
        prop_assert_eq!(mu.support_metrics().0, threshold_c(&beta).unwrap());
        let bound = q(1, 1);
        for f in mu.pieces() {
            prop_assert!(f.c0.midpoint() >= q(0, 1) && f.c0.midpoint() <= bound);
        }
    }

    #[test]
    fn refinement_preserves_feasibility(p in 3i64..9, qd in 2i64..4, extra in 0i64..3) {
        prop_assume!(num_integer::gcd(p, qd) == 1 && p > qd);
        let beta = Scalar::ratio(p, qd);
        let c = &threshold_c(&beta).unwrap() + &Scalar::ratio(extra, p);
        let sys = build_system(&beta, &c, 1).unwrap();
        let FeasibilityOutcome::Feasible { witness } = solve_feasibility(&sys).unwrap() else {
            return Err(TestCaseError::fail("c ≥ c_β must be grid-feasible"));
        };
        let t = AffineMap::linear(beta.clone()).unwrap();
        prop_assert!(is_ciupm(&lift_witness(&sys, &witness).unwrap(), &t, &Scalar::zero()).unwrap().ok);
        for m in 2..=3usize {
            let fine = build_system(&beta, &c, m as u32).unwrap();
            let split: Vec<BigRational> = witness.iter().flat_map(|v| std::iter::repeat_n(v.clone(), m)).collect();
            prop_assert!(verify_witness(&fine, &split));
        }
    }

    #[test]
    fn below_threshold_is_infeasible(p in 3i64..9, qd in 2i64..4, k in 1u32..3, back in 1i64..4) {
        prop_assume!(num_integer::gcd(p, qd) == 1 && p > qd);
        let beta = Scalar::ratio(p, qd);
        let c = &threshold_c(&beta).unwrap() - &Scalar::ratio(back, p * k as i64);
        prop_assume!(c.as_exact().unwrap() > &q(0, 1));
        let sys = build_system(&beta, &c, k).unwrap();
        prop_assert!(!solve_feasibility(&sys).unwrap().is_feasible());
    }

    #[test]
    fn ks_matches_brute_force(pts in prop::collection::vec((-300i64..300, 1i64..24), 1..40)) {
        let xs: Vec<Scalar> = pts.iter().map(|(n, d)| Scalar::ratio(*n, *d)).collect();
        let fr: Vec<BigRational> = xs.iter().map(|x| x.frac().unwrap().midpoint()).collect();
        let n = BigRational::from_integer(BigInt::from(fr.len()));
        let mut best = q(0, 1);
        for t in &fr {
            let le = BigRational::from_integer(BigInt::from(fr.iter().filter(|x| *x <= t).count())) / &n;
            let lt = BigRational::from_integer(BigInt::from(fr.iter().filter(|x| *x < t).count())) / &n;
            for d in [&le - t, t - &lt] {
                if d > best {
                    best = d;
                }
            }
        }
        prop_assert_eq!(ks_mod1(&xs).unwrap(), Scalar::Exact(best));
    }
}
