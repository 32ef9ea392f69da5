use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use orbicalc_core::poly::{factor, IntPoly};
use proptest::prelude::*;

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(1);
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out
}

/// Rational roots by the rational root theorem.
fn rational_roots(f: &IntPoly) -> Vec<BigRational> {
    let c = f.coeffs();
    if c[0].is_zero() {
        return vec![BigRational::zero()];
    }
    let mut roots = Vec::new();
    for p in divisors(&c[0]) {
        for q in divisors(f.coeffs().last().unwrap()) {
            for sign in [1, -1] {
                let x = BigRational::new(&p * sign, q.clone());
                if f.eval(&x).is_zero() && !roots.contains(&x) {
                    roots.push(x);
                }
            }
        }
    }
    roots
}

fn poly_strategy() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-6i64..=6, 2..=4)
        .prop_filter("positive degree", |c| *c.last().unwrap() != 0)
        .prop_map(|c| IntPoly::from_i64s(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorization_expands_back(
        parts in prop::collection::vec((poly_strategy(), 1u32..=2), 1..=4),
        scale in prop_oneof![Just(1i64), Just(-3), Just(10)],
    ) {
        let f = parts
            .iter()
            .fold(IntPoly::constant(scale.into()), |acc, (g, e)| acc.mul(&g.pow(*e)));
        let fact = factor(&f);
        let expanded = fact.expand();
        let original: Vec<BigRational> =
            f.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
        prop_assert_eq!(expanded, original);
        let total: usize = fact.factors.iter().map(|(g, e)| g.deg() * *e as usize).sum();
        prop_assert_eq!(total, f.deg());
        for (g, _) in &fact.factors {
            prop_assert!(g.deg() >= 1);
            prop_assert!(g.lc() > BigInt::zero());
            prop_assert_eq!(g.content(), BigInt::from(1));
            if (2..=3).contains(&g.deg()) {
                prop_assert!(rational_roots(g).is_empty(), "{} has a rational root", g);
            }
        }
        // Distinct factors.
        for (i, (a, _)) in fact.factors.iter().enumerate() {
            for (b, _) in &fact.factors[i + 1..] {
                prop_assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn planted_linear_factors_are_found(roots in prop::collection::vec((-9i64..=9, 1i64..=5), 1..=5)) {
        let f = roots
            .iter()
            .fold(IntPoly::one(), |acc, &(p, q)| acc.mul(&IntPoly::from_i64s(&[-p, q])));
        let fact = factor(&f);
        let linear: usize = fact.factors.iter().filter(|(g, _)| g.deg() == 1).map(|(_, e)| *e as usize).sum();
        prop_assert_eq!(linear, roots.len());
    }
}

#[test]
fn swinnerton_dyer_style_polynomial_stays_irreducible() {
    // x^8 - 40x^6 + 352x^4 - 960x^2 + 576, minimal polynomial of sqrt2+sqrt3+sqrt5.
    let f = IntPoly::from_i64s(&[576, 0, -960, 0, 352, 0, -40, 0, 1]);
    let fact = factor(&f);
    assert_eq!(fact.factors.len(), 1);
    assert_eq!(fact.factors[0].0.deg(), 8);
}

#[test]
fn cyclotomic_products() {
    // x^30 - 1 splits into the cyclotomic polynomials of the divisors of 30.
    let mut c = vec![0i64; 31];
    c[0] = -1;
    c[30] = 1;
    let fact = factor(&IntPoly::from_i64s(&c));
    let mut degrees: Vec<usize> = fact.factors.iter().map(|(g, _)| g.deg()).collect();
    degrees.sort_unstable();
    assert_eq!(degrees, vec![1, 1, 2, 2, 4, 4, 8, 8]);
}
