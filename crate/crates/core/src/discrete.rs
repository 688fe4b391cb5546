//! Difference calculus in one variable: the forward difference, Bernoulli
//! polynomials, antidifferences, definite sums, falling powers, and the
//! matching continuous integral.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{int, Poly, Rational, VarId};

fn table() -> &'static RwLock<Vec<Poly>> {
    static TABLE: OnceLock<RwLock<Vec<Poly>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Poly::one(0)]))
}

/// `B_0, ..., B_n` in `t`, over the ring with no x-variables.
///
/// Built from `sum_{k<n} C(n, k) B_k(t) = n t^(n-1)` and cached process-wide.
pub fn bernoulli_table(n: usize) -> Vec<Poly> {
    {
        let cached = table().read().expect("bernoulli table poisoned");
        if cached.len() > n {
            return cached[..=n].to_vec();
        }
    }
    let mut cached = table().write().expect("bernoulli table poisoned");
    let t = Poly::t(0);
    while cached.len() <= n {
        // Solve the recurrence at order n' = len + 1 for B_len.
        let k_new = cached.len();
        let order = k_new + 1;
        let mut acc = t.pow(k_new as u32).scale(&int(order as i64));
        for (k, b) in cached.iter().enumerate() {
            let c = Rational::from_integer(binomial(BigInt::from(order), BigInt::from(k)));
            acc = &acc - &b.scale(&c);
        }
        // C(order, order - 1) = order
        let b_new = acc.scale(&Rational::new(BigInt::one(), BigInt::from(order)));
        cached.push(b_new);
    }
    cached[..=n].to_vec()
}

pub fn bernoulli(n: usize) -> Poly {
    bernoulli_table(n).pop().expect("table is nonempty")
}

/// `B_n` rewritten in the variable `wrt` of the ring with `l` x-variables.
fn bernoulli_in(n: usize, l: usize, wrt: VarId) -> Result<Poly> {
    let b = bernoulli(n).embed(l)?;
    if wrt == VarId::T {
        Ok(b)
    } else {
        b.substitute(VarId::T, &Poly::var(l, wrt)?)
    }
}

/// `p(wrt + 1) - p(wrt)`.
pub fn difference(p: &Poly, wrt: VarId) -> Result<Poly> {
    let shift = &Poly::var(p.l(), wrt)? + &Poly::one(p.l());
    Ok(&p.substitute(wrt, &shift)? - p)
}

/// The antidifference normalized by `wrt^n -> B_{n+1}(wrt) / (n + 1)`.
pub fn indefinite_sum(p: &Poly, wrt: VarId) -> Result<Poly> {
    let l = p.l();
    let parts = p.coefficients_in_var(wrt)?;
    let mut out = Poly::zero(l);
    for (n, coeff) in parts.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let antidiff =
            bernoulli_in(n + 1, l, wrt)?.scale(&Rational::new(BigInt::one(), BigInt::from(n + 1)));
        out = &out + &(coeff * &antidiff);
    }
    Ok(out)
}

fn check_bound(bound: &Poly, wrt: VarId) -> Result<()> {
    if bound.contains_var(wrt) {
        Err(Error::InvalidBound(wrt.to_string()))
    } else {
        Ok(())
    }
}

/// An antidifference together with its variable, so that many definite sums
/// of one summand can share the work.
#[derive(Clone, Debug)]
pub struct Antidifference {
    wrt: VarId,
    primitive: Poly,
}

impl Antidifference {
    pub fn new(p: &Poly, wrt: VarId) -> Result<Self> {
        Ok(Antidifference {
            wrt,
            primitive: indefinite_sum(p, wrt)?,
        })
    }

    pub fn primitive(&self) -> &Poly {
        &self.primitive
    }

    /// `F(bound)`.
    pub fn at(&self, bound: &Poly) -> Result<Poly> {
        check_bound(bound, self.wrt)?;
        self.primitive.substitute(self.wrt, bound)
    }

    /// `F(b) - F(a)`.
    pub fn between(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(&self.at(b)? - &self.at(a)?)
    }
}

/// `F(b) - F(a)` for an antidifference `F` of `p`; equals `p(a) + ... + p(b - 1)`
/// when `b - a` is a nonnegative integer.
pub fn definite_sum(p: &Poly, wrt: VarId, a: &Poly, b: &Poly) -> Result<Poly> {
    check_bound(a, wrt)?;
    check_bound(b, wrt)?;
    Antidifference::new(p, wrt)?.between(a, b)
}

/// `p(wrt) p(wrt - 1) ... p(wrt - n + 1)`; the empty product for `n = 0`.
pub fn falling_power(p: &Poly, wrt: VarId, n: usize) -> Result<Poly> {
    let l = p.l();
    let v = Poly::var(l, wrt)?;
    let mut acc = Poly::one(l);
    for s in 0..n {
        let shifted = if s == 0 {
            p.clone()
        } else {
            p.substitute(wrt, &(&v - &Poly::integer(l, s as i64)))?
        };
        acc = &acc * &shifted;
    }
    Ok(acc)
}

/// Antiderivative under `wrt^n -> wrt^(n+1) / (n + 1)`.
pub fn antiderivative(p: &Poly, wrt: VarId) -> Result<Poly> {
    let l = p.l();
    let slot = wrt
        .slot(l)
        .ok_or_else(|| Error::UnknownVariable(wrt.to_string()))?;
    let terms = p.terms().map(|(m, c)| {
        let mut exps = m.exponents().to_vec();
        let e = exps[slot] + 1;
        exps[slot] = e;
        (exps, c / int(e as i64))
    });
    Poly::from_terms(l, terms.collect::<Vec<_>>())
}

pub fn definite_integral(p: &Poly, wrt: VarId, a: &Poly, b: &Poly) -> Result<Poly> {
    check_bound(a, wrt)?;
    check_bound(b, wrt)?;
    let f = antiderivative(p, wrt)?;
    Ok(&f.substitute(wrt, b)? - &f.substitute(wrt, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn t() -> Poly {
        Poly::t(2)
    }

    fn c(n: i64, d: i64) -> Poly {
        Poly::constant(2, rat(n, d))
    }

    fn tt(e: u32) -> Poly {
        Poly::t(0).pow(e)
    }

    #[test]
    fn bernoulli_low_orders() {
        let k = |n, d| Poly::constant(0, rat(n, d));
        assert_eq!(bernoulli(0), Poly::one(0));
        assert_eq!(bernoulli(1), &tt(1) - &k(1, 2));
        assert_eq!(bernoulli(2), &(&tt(2) - &tt(1)) + &k(1, 6));
        assert_eq!(
            bernoulli(3),
            &(&tt(3) - &tt(2).scale(&rat(3, 2))) + &tt(1).scale(&rat(1, 2))
        );
        assert_eq!(
            bernoulli(4),
            &(&(&tt(4) - &tt(3).scale(&int(2))) + &tt(2)) - &k(1, 30)
        );
    }

    #[test]
    fn differences() {
        assert_eq!(
            difference(&t().pow(2), VarId::T).unwrap(),
            &t().scale(&int(2)) + &Poly::one(2)
        );
        assert_eq!(
            difference(&bernoulli(3), VarId::T).unwrap(),
            tt(2).scale(&int(3))
        );
        assert!(difference(&c(5, 3), VarId::T).unwrap().is_zero());
    }

    #[test]
    fn antidifference_examples() {
        assert_eq!(
            indefinite_sum(&Poly::one(2), VarId::T).unwrap(),
            &t() - &c(1, 2)
        );
        let s = indefinite_sum(&t(), VarId::T).unwrap();
        assert_eq!(s, &(&t().pow(2) - &t()).scale(&rat(1, 2)) + &c(1, 12));
        assert_eq!(difference(&s, VarId::T).unwrap(), t());
    }

    #[test]
    fn definite_sum_examples() {
        let zero = Poly::zero(2);
        let four = Poly::integer(2, 4);
        assert_eq!(
            definite_sum(&t(), VarId::T, &zero, &four).unwrap(),
            Poly::integer(2, 6)
        );
        let x1 = Poly::x(2, 1);
        assert!(definite_sum(&t().pow(3), VarId::T, &x1, &x1)
            .unwrap()
            .is_zero());
        let g = &(&t() - &x1) * &(&t() - &Poly::x(2, 2));
        let u = &Poly::x(2, 2) - &x1;
        let expected = (&u - &u.pow(3)).scale(&rat(1, 6));
        assert_eq!(
            definite_sum(&g, VarId::T, &x1, &Poly::x(2, 2)).unwrap(),
            expected
        );
    }

    #[test]
    fn bound_containing_t_is_rejected() {
        let r = definite_sum(&t(), VarId::T, &Poly::zero(2), &t());
        assert_eq!(r, Err(Error::InvalidBound("t".into())));
        let r = definite_integral(&t(), VarId::T, &t(), &Poly::zero(2));
        assert_eq!(r, Err(Error::InvalidBound("t".into())));
    }

    #[test]
    fn falling_powers() {
        assert_eq!(
            falling_power(&t(), VarId::T, 2).unwrap(),
            &t().pow(2) - &t()
        );
        assert_eq!(
            falling_power(&t(), VarId::T, 3).unwrap(),
            &(&t().pow(3) - &t().pow(2).scale(&int(3))) + &t().scale(&int(2))
        );
        let g = &(&t() - &Poly::x(2, 1)) * &(&t() - &Poly::x(2, 2));
        assert_eq!(falling_power(&g, VarId::T, 1).unwrap(), g);
        assert_eq!(falling_power(&g, VarId::T, 0).unwrap(), Poly::one(2));
    }

    #[test]
    fn integral_examples() {
        let (x1, x2) = (Poly::x(2, 1), Poly::x(2, 2));
        let g = &(&t() - &x1) * &(&t() - &x2);
        assert_eq!(
            definite_integral(&g, VarId::T, &x1, &x2).unwrap(),
            (&x1 - &x2).pow(3).scale(&rat(1, 6))
        );
        assert!(definite_integral(&g, VarId::T, &x2, &x2).unwrap().is_zero());
        assert_eq!(
            definite_integral(&Poly::one(2), VarId::T, &x1, &x2).unwrap(),
            &x2 - &x1
        );
    }
}
