//! Exact sparse multivariate polynomials over the rationals.
//!
//! Every polynomial lives in the ring `Q[x1, ..., xl, t, z]` for some `l`.
//! The exponent vector of a term always has `l + 2` slots, in the order
//! `x1, ..., xl, t, z`. Terms are kept in a `BTreeMap` keyed by graded
//! lexicographic order (total degree first, then `z > t > xl > ... > x1`),
//! so structural equality coincides with mathematical equality.
//!
//! A polynomial over `l = 0` (only `t` and `z`) embeds into every other
//! ring; any other combination of distinct `l` is an ambient mismatch.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exact rational coefficient. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

/// `n / d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A coordinate symbol of the ambient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    /// `x_i`, 1-based.
    X(usize),
    T,
    Z,
}

impl VarId {
    /// Position of this variable in an exponent vector of a ring with `l` x-variables.
    pub fn slot(self, l: usize) -> Option<usize> {
        match self {
            VarId::X(i) if (1..=l).contains(&i) => Some(i - 1),
            VarId::X(_) => None,
            VarId::T => Some(l),
            VarId::Z => Some(l + 1),
        }
    }

    pub fn from_slot(slot: usize, l: usize) -> VarId {
        match slot.cmp(&l) {
            Ordering::Less => VarId::X(slot + 1),
            Ordering::Equal => VarId::T,
            Ordering::Greater => VarId::Z,
        }
    }

    /// All variables of the ring with `l` x-variables, in slot order.
    pub fn ambient(l: usize) -> Vec<VarId> {
        (0..l + 2).map(|s| VarId::from_slot(s, l)).collect()
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::X(i) => write!(f, "x{i}"),
            VarId::T => f.write_str("t"),
            VarId::Z => f.write_str("z"),
        }
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<VarId> {
        match s {
            "t" => Ok(VarId::T),
            "z" => Ok(VarId::Z),
            _ => s
                .strip_prefix('x')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .map(VarId::X)
                .ok_or_else(|| Error::Parse(format!("unknown variable name {s:?}"))),
        }
    }
}

/// Total degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

/// Exponent vector with its cached total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            deg: 0,
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial {
            deg: exps.iter().map(|&e| e as u32).sum(),
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exponent(&self, slot: usize) -> u16 {
        self.exps[slot]
    }

    fn with_exponent(&self, slot: usize, e: u16) -> Self {
        let mut exps = self.exps.clone();
        let old = exps[slot];
        exps[slot] = e;
        Monomial {
            deg: self.deg - old as u32 + e as u32,
            exps,
        }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial {
            deg: self.deg + other.deg,
            exps,
        }
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: other.deg - self.deg,
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Outcome of dividing by a linear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearDivision {
    Exact(Poly),
    /// The nonzero remainder: the dividend evaluated on the hyperplane.
    Remainder(Poly),
}

/// Outcome of dividing out as many copies of a linear form as requested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerDivision {
    /// How many factors were removed before stopping.
    pub achieved: usize,
    pub quotient: Poly,
    /// Remainder witness of the first failed division, if any.
    pub remainder: Option<Poly>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    l: usize,
    terms: BTreeMap<Monomial, Rational>,
}

fn join_ambient(a: usize, b: usize) -> Result<usize> {
    if a == b || b == 0 {
        Ok(a)
    } else if a == 0 {
        Ok(b)
    } else {
        Err(Error::AmbientMismatch { left: a, right: b })
    }
}

impl Poly {
    pub fn zero(l: usize) -> Self {
        Poly {
            l,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(l: usize) -> Self {
        Self::constant(l, Rational::one())
    }

    pub fn constant(l: usize, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(l + 2), c);
        }
        Poly { l, terms }
    }

    pub fn integer(l: usize, n: i64) -> Self {
        Self::constant(l, int(n))
    }

    /// The variable `v` as a polynomial.
    pub fn var(l: usize, v: VarId) -> Result<Self> {
        let slot = v
            .slot(l)
            .ok_or_else(|| Error::UnknownVariable(v.to_string()))?;
        let mono = Monomial::one(l + 2).with_exponent(slot, 1);
        Ok(Poly {
            l,
            terms: BTreeMap::from([(mono, Rational::one())]),
        })
    }

    /// `x_i`. Panics when `i` is outside `1..=l`.
    pub fn x(l: usize, i: usize) -> Self {
        Self::var(l, VarId::X(i)).expect("x index out of range")
    }

    pub fn t(l: usize) -> Self {
        Self::var(l, VarId::T).expect("t is always present")
    }

    pub fn z(l: usize) -> Self {
        Self::var(l, VarId::Z).expect("z is always present")
    }

    /// Build from `(exponent vector, coefficient)` pairs; zero coefficients are dropped
    /// and repeated exponents are summed.
    pub fn from_terms<I>(l: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u16>, Rational)>,
    {
        let mut out = Poly::zero(l);
        for (exps, c) in terms {
            if exps.len() != l + 2 {
                return Err(Error::Shape(format!(
                    "exponent vector of length {} in a ring with {} variables",
                    exps.len(),
                    l + 2
                )));
            }
            out.add_term(Monomial::from_exponents(&exps), c);
        }
        Ok(out)
    }

    fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Number of x-variables of the ambient ring.
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn nvars(&self) -> usize {
        self.l + 2
    }

    pub fn ambient(&self) -> Vec<VarId> {
        VarId::ambient(self.l)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.deg == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, exps: &[u16]) -> Rational {
        self.terms
            .get(&Monomial::from_exponents(exps))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Degree {
        match self.leading_term() {
            None => Degree::NegInfinity,
            Some((m, _)) => Degree::Finite(m.deg),
        }
    }

    /// The common degree of all terms, if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let first = self.terms.keys().next()?.deg;
        let last = self.terms.keys().next_back()?.deg;
        (first == last).then_some(first)
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            l: self.l,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.deg == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        match v.slot(self.l) {
            Some(s) => self.terms.keys().any(|m| m.exps[s] > 0),
            None => false,
        }
    }

    /// Re-express a polynomial over `l = 0` (or over `l` itself) in the ring with `l` x-variables.
    pub fn embed(&self, l: usize) -> Result<Poly> {
        if self.l == l {
            return Ok(self.clone());
        }
        if self.l != 0 {
            return Err(Error::AmbientMismatch {
                left: self.l,
                right: l,
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps: SmallVec<[u16; 8]> = SmallVec::from_elem(0, l + 2);
                exps[l] = m.exps[0];
                exps[l + 1] = m.exps[1];
                (Monomial { deg: m.deg, exps }, c.clone())
            })
            .collect();
        Ok(Poly { l, terms })
    }

    fn aligned<'a>(
        &'a self,
        other: &'a Poly,
    ) -> Result<(std::borrow::Cow<'a, Poly>, std::borrow::Cow<'a, Poly>)> {
        use std::borrow::Cow;
        let l = join_ambient(self.l, other.l)?;
        let a = if self.l == l {
            Cow::Borrowed(self)
        } else {
            Cow::Owned(self.embed(l)?)
        };
        let b = if other.l == l {
            Cow::Borrowed(other)
        } else {
            Cow::Owned(other.embed(l)?)
        };
        Ok((a, b))
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        let (a, b) = self.aligned(other)?;
        let (big, small) = if a.terms.len() >= b.terms.len() {
            (a, b)
        } else {
            (b, a)
        };
        let mut out = big.into_owned();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        let (a, b) = self.aligned(other)?;
        let l = a.l;
        if a.is_zero() || b.is_zero() {
            return Ok(Poly::zero(l));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let c = ca * cb;
                acc.entry(ma.mul(mb)).and_modify(|e| *e += &c).or_insert(c);
            }
        }
        Ok(Poly {
            l,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.l);
        }
        Poly {
            l: self.l,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one(self.l);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn slot_of(&self, v: VarId) -> Result<usize> {
        v.slot(self.l)
            .ok_or_else(|| Error::UnknownVariable(v.to_string()))
    }

    /// Coefficients of `1, v, v^2, ...`; each coefficient is free of `v`.
    pub fn coefficients_in_var(&self, v: VarId) -> Result<Vec<Poly>> {
        Ok(self.coefficients_in(self.slot_of(v)?))
    }

    fn coefficients_in(&self, slot: usize) -> Vec<Poly> {
        let max = self.terms.keys().map(|m| m.exps[slot]).max().unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(self.l); max + 1];
        for (m, c) in &self.terms {
            let e = m.exps[slot] as usize;
            out[e].terms.insert(m.with_exponent(slot, 0), c.clone());
        }
        out
    }

    /// Replace every occurrence of `v` by `q`.
    pub fn substitute(&self, v: VarId, q: &Poly) -> Result<Poly> {
        let l = join_ambient(self.l, q.l)?;
        let p = self.embed(l)?;
        let q = q.embed(l)?;
        let slot = p.slot_of(v)?;

        // Renaming to another variable only moves exponents.
        if let Some((m, c)) = q.leading_term() {
            if q.terms.len() == 1 && m.deg == 1 && c.is_one() {
                let target = m.exps.iter().position(|&e| e == 1).unwrap();
                let mut out = Poly::zero(l);
                for (mono, coef) in &p.terms {
                    let e = mono.exps[slot];
                    let moved = mono.with_exponent(slot, 0);
                    let moved = if e == 0 {
                        moved
                    } else {
                        let te = moved.exps[target] + e;
                        moved.with_exponent(target, te)
                    };
                    out.add_term(moved, coef.clone());
                }
                return Ok(out);
            }
        }

        let coeffs = p.coefficients_in(slot);
        let mut out = Poly::zero(l);
        let mut power = Poly::one(l);
        for (e, c) in coeffs.iter().enumerate() {
            if e > 0 {
                power = &power * &q;
            }
            if !c.is_zero() {
                out = &out + &(c * &power);
            }
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, v: VarId) -> Result<Poly> {
        let slot = self.slot_of(v)?;
        let mut out = Poly::zero(self.l);
        for (m, c) in &self.terms {
            let e = m.exps[slot];
            if e > 0 {
                out.terms.insert(
                    m.with_exponent(slot, e - 1),
                    c * Rational::from_integer(e.into()),
                );
            }
        }
        Ok(out)
    }

    /// Evaluate at a point given in slot order (`x1, ..., xl, t, z`).
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars() {
            return Err(Error::Shape(format!(
                "point of length {} for a ring with {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Divide by a polynomial `divisor` of total degree one, pivoting on its
    /// lowest-slot variable.
    pub fn exact_div_linear(&self, divisor: &Poly) -> Result<LinearDivision> {
        if divisor.total_degree() != Degree::Finite(1) {
            return Err(Error::InvalidDivisor(format!(
                "expected a polynomial of total degree 1, got {divisor}"
            )));
        }
        let l = join_ambient(self.l, divisor.l)?;
        let p = self.embed(l)?;
        let divisor = divisor.embed(l)?;
        let slot = (0..l + 2)
            .find(|&s| divisor.terms.keys().any(|m| m.exps[s] == 1))
            .expect("a degree-1 polynomial has a variable");
        let parts = divisor.coefficients_in(slot);
        let rest = parts[0].clone();
        let lead = parts[1]
            .constant_value()
            .expect("linear coefficient is a constant");
        let inv = lead.recip();

        let mut coeffs = p.coefficients_in(slot);
        let n = coeffs.len() - 1;
        let mut quotient = Poly::zero(l);
        for e in (1..=n).rev() {
            let q_e = coeffs[e].scale(&inv);
            if q_e.is_zero() {
                continue;
            }
            coeffs[e - 1] = &coeffs[e - 1] - &(&rest * &q_e);
            for (m, c) in q_e.terms {
                quotient
                    .terms
                    .insert(m.with_exponent(slot, (e - 1) as u16), c);
            }
        }
        let remainder = std::mem::replace(&mut coeffs[0], Poly::zero(l));
        if remainder.is_zero() {
            Ok(LinearDivision::Exact(quotient))
        } else {
            Ok(LinearDivision::Remainder(remainder))
        }
    }

    /// Divide out `divisor` up to `m` times, stopping at the first inexact division.
    pub fn divide_out_power(&self, divisor: &Poly, m: usize) -> Result<PowerDivision> {
        if divisor.total_degree() != Degree::Finite(1) {
            return Err(Error::InvalidDivisor(format!(
                "expected a polynomial of total degree 1, got {divisor}"
            )));
        }
        let mut current = self.clone();
        for achieved in 0..m {
            match current.exact_div_linear(divisor)? {
                LinearDivision::Exact(q) => current = q,
                LinearDivision::Remainder(r) => {
                    return Ok(PowerDivision {
                        achieved,
                        quotient: current,
                        remainder: Some(r),
                    })
                }
            }
        }
        Ok(PowerDivision {
            achieved: m,
            quotient: current,
            remainder: None,
        })
    }

    /// Whether `divisor^m` divides `self`.
    pub fn divisible_by_power(&self, divisor: &Poly, m: usize) -> Result<bool> {
        Ok(self.divide_out_power(divisor, m)?.remainder.is_none())
    }

    /// Exact multivariate division by an arbitrary nonzero polynomial.
    /// Returns `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Option<Poly>> {
        let l = join_ambient(self.l, divisor.l)?;
        let divisor = divisor.embed(l)?;
        let (lead_m, lead_c) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::InvalidDivisor("division by zero".into())),
        };
        let lead_inv = lead_c.recip();
        let mut rem = self.embed(l)?;
        let mut quotient = Poly::zero(l);
        while let Some((m, c)) = rem.leading_term() {
            if !lead_m.divides(m) {
                return Ok(None);
            }
            let qm = lead_m.quotient_of(m);
            let qc = c * &lead_inv;
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quotient.terms.insert(qm, qc);
        }
        Ok(Some(quotient))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[l={}]({})", self.l, self)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, l: usize) -> fmt::Result {
    let mut first = true;
    for (slot, &e) in m.exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "{}", VarId::from_slot(slot, l))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Text rendering: descending graded-lex order, explicit rational coefficients.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.deg == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, m, self.l)?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("ambient mismatch")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            l: self.l,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}
