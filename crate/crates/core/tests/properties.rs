//! Property tests for the algebraic invariants.

use catalog_derivations::arrangement::{braid, catalan_cone, member, Arrangement};
use catalog_derivations::basis::{braid_odd_basis, eta, sigma, zeta};
use catalog_derivations::discrete::{
    antiderivative, definite_sum, difference, falling_power, indefinite_sum,
};
use catalog_derivations::field::DerivationField;
use catalog_derivations::matrix::{determinant_bareiss, determinant_cofactor};
use catalog_derivations::poly::{int, rat, LinearDivision, Poly, VarId};
use catalog_derivations::verify::saito_check;
use proptest::prelude::*;

const L: usize = 2;

/// Polynomials in `x1, x2, t` of modest degree with small rational coefficients.
fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u16..3, 0u16..3, 0u16..4), -6i64..7, 1i64..4), 0..6).prop_map(
        |terms| {
            Poly::from_terms(
                L,
                terms
                    .into_iter()
                    .map(|((a, b, c), n, d)| (vec![a, b, c, 0], rat(n, d))),
            )
            .unwrap()
        },
    )
}

/// A degree-one polynomial in `x1, x2, t`, possibly with a constant term.
fn linear() -> impl Strategy<Value = Poly> {
    (-3i64..4, -3i64..4, -3i64..4, -3i64..4)
        .prop_filter("needs a variable", |(a, b, c, _)| (*a, *b, *c) != (0, 0, 0))
        .prop_map(|(a, b, c, d)| {
            &(&(&Poly::x(L, 1).scale(&int(a)) + &Poly::x(L, 2).scale(&int(b)))
                + &Poly::t(L).scale(&int(c)))
                + &Poly::integer(L, d)
        })
}

/// Solve `form = 0` for its lowest-slot variable and substitute into `p`.
fn restrict(p: &Poly, form: &Poly) -> Poly {
    let v = [VarId::X(1), VarId::X(2), VarId::T]
        .into_iter()
        .find(|&v| !form.partial_derivative(v).unwrap().is_zero())
        .unwrap();
    let lead = form
        .partial_derivative(v)
        .unwrap()
        .constant_value()
        .unwrap();
    let rest = form.substitute(v, &Poly::zero(L)).unwrap();
    p.substitute(v, &rest.scale(&(-lead.recip()))).unwrap()
}

fn swap_x12(p: &Poly) -> Poly {
    let tmp = Poly::z(L);
    p.substitute(VarId::X(1), &tmp)
        .and_then(|q| q.substitute(VarId::X(2), &Poly::x(L, 1)))
        .and_then(|q| q.substitute(VarId::Z, &Poly::x(L, 2)))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p + &q) - &q, p.clone());
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &Poly::one(L), p);
    }

    #[test]
    fn linear_division_inverts_multiplication(q in poly(), form in linear()) {
        let product = &form * &q;
        prop_assert_eq!(product.exact_div_linear(&form).unwrap(), LinearDivision::Exact(q));
    }

    #[test]
    fn divisibility_matches_restriction(p in poly(), form in linear()) {
        let divisible = p.divisible_by_power(&form, 1).unwrap();
        prop_assert_eq!(divisible, restrict(&p, &form).is_zero());
        if let LinearDivision::Remainder(r) = p.exact_div_linear(&form).unwrap() {
            prop_assert_eq!(restrict(&r, &form), restrict(&p, &form));
        }
    }

    #[test]
    fn power_division_counts_factors(q in poly(), form in linear(), k in 0usize..3) {
        prop_assume!(!q.is_zero());
        let p = &form.pow(k as u32) * &q;
        let d = p.divide_out_power(&form, k).unwrap();
        prop_assert_eq!(d.achieved, k);
        prop_assert_eq!(d.quotient, q);
    }

    #[test]
    fn general_division(p in poly(), q in poly()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).div_exact(&q).unwrap(), Some(p));
    }

    #[test]
    fn determinant_algorithms_agree(
        n in 1usize..5,
        entries in prop::collection::vec(poly(), 16),
    ) {
        let m: Vec<Vec<Poly>> = (0..n).map(|i| entries[i * n..i * n + n].to_vec()).collect();
        prop_assert_eq!(determinant_bareiss(&m).unwrap(), determinant_cofactor(&m).unwrap());
    }

    #[test]
    fn determinant_is_alternating(entries in prop::collection::vec(poly(), 9)) {
        let m: Vec<Vec<Poly>> = entries.chunks(3).map(<[Poly]>::to_vec).collect();
        let mut swapped = m.clone();
        swapped.swap(0, 2);
        prop_assert_eq!(determinant_cofactor(&swapped).unwrap(), -determinant_cofactor(&m).unwrap());
    }

    #[test]
    fn difference_inverts_summation(p in poly()) {
        prop_assert_eq!(difference(&indefinite_sum(&p, VarId::T).unwrap(), VarId::T).unwrap(), p.clone());
        let d = antiderivative(&p, VarId::T).unwrap().partial_derivative(VarId::T).unwrap();
        prop_assert_eq!(d, p);
    }

    #[test]
    fn summation_is_additive_and_antisymmetric(p in poly(), c in -3i64..4) {
        let (a, b) = (Poly::x(L, 1), Poly::x(L, 2));
        let mid = Poly::integer(L, c);
        let ab = definite_sum(&p, VarId::T, &a, &b).unwrap();
        let ba = definite_sum(&p, VarId::T, &b, &a).unwrap();
        prop_assert_eq!(&ab + &ba, Poly::zero(L));
        let split = &definite_sum(&p, VarId::T, &a, &mid).unwrap()
            + &definite_sum(&p, VarId::T, &mid, &b).unwrap();
        prop_assert_eq!(split, ab);
    }

    #[test]
    fn falling_power_product_law(p in poly(), a in 0usize..3, b in 0usize..3) {
        let shifted = falling_power(&p, VarId::T, b)
            .unwrap()
            .substitute(VarId::T, &(&Poly::t(L) - &Poly::integer(L, a as i64)))
            .unwrap();
        let lhs = falling_power(&p, VarId::T, a + b).unwrap();
        prop_assert_eq!(lhs, &falling_power(&p, VarId::T, a).unwrap() * &shifted);
    }

    #[test]
    fn derivation_rules(p in poly(), q in poly()) {
        let v = VarId::X(1);
        let lhs = (&p * &q).partial_derivative(v).unwrap();
        let rhs = &(&p.partial_derivative(v).unwrap() * &q) + &(&p * &q.partial_derivative(v).unwrap());
        prop_assert_eq!(lhs, rhs);
        let chain = p.substitute(VarId::T, &q).unwrap().partial_derivative(v).unwrap();
        let expected = &p.partial_derivative(v).unwrap().substitute(VarId::T, &q).unwrap()
            + &(&p.partial_derivative(VarId::T).unwrap().substitute(VarId::T, &q).unwrap()
                * &q.partial_derivative(v).unwrap());
        prop_assert_eq!(chain, expected);
    }

    #[test]
    fn module_closure(p in poly(), i in 0usize..2, j in 0usize..2, mult in 1usize..4) {
        // Coefficients in x1, x2 only: drop t.
        let p = p.substitute(VarId::T, &Poly::zero(L)).unwrap();
        let basis = braid_odd_basis(L, 1).unwrap();
        let a = braid(L, 3).unwrap();
        let combo = basis[i].mul_poly(&p).unwrap().checked_add(&basis[j]).unwrap();
        prop_assert!(member(&combo, &a).unwrap().is_member());
        let weaker = a.with_uniform_multiplicity(mult.min(3)).unwrap();
        prop_assert!(member(&combo, &weaker).unwrap().is_member());
    }

    #[test]
    fn membership_is_monotone(k in 0usize..2, m in 0usize..3, mult in 1usize..8) {
        let f = eta(L, m, k).unwrap();
        let inside = |mu: usize| member(&f, &braid(L, mu).unwrap()).unwrap().is_member();
        if inside(mult) {
            for lower in 1..mult {
                prop_assert!(inside(lower));
            }
        }
    }
}

#[test]
fn integral_fields_are_symmetric() {
    // Swapping x1 and x2 inside the coefficients swaps the coefficients of
    // the image field; sigma also trades its index.
    let pairs = [
        (eta(L, 1, 0).unwrap(), eta(L, 1, 0).unwrap()),
        (eta(L, 2, 1).unwrap(), eta(L, 2, 1).unwrap()),
        (zeta(L, 1, 0).unwrap(), zeta(L, 1, 0).unwrap()),
        (sigma(L, 2, 1).unwrap(), sigma(L, 2, 2).unwrap()),
    ];
    for (f, image) in &pairs {
        let swapped: Vec<Poly> = f.coeffs().iter().map(swap_x12).collect();
        assert_eq!(swapped[0], image.coeffs()[1]);
        assert_eq!(swapped[1], image.coeffs()[0]);
    }
}

#[test]
fn saito_constant_flips_under_transposition() {
    let a: Arrangement = catalan_cone(3, 1).unwrap();
    let fields = catalog_derivations::basis::catalan_basis(3, 1).unwrap();
    let r = saito_check(&a, &fields).unwrap();
    let mut swapped: Vec<DerivationField> = fields.clone();
    swapped.swap(1, 3);
    let s = saito_check(&a, &swapped).unwrap();
    assert!(r.overall && s.overall);
    assert_eq!(s.saito_constant().unwrap(), -r.saito_constant().unwrap());
    let degrees: usize = fields
        .iter()
        .map(|f| f.homogeneous_degree().unwrap() as usize)
        .sum();
    assert_eq!(degrees, a.total_multiplicity());
    assert_eq!(saito_check(&a, &fields).unwrap(), r);
}
