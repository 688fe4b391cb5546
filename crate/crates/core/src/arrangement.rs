//! Hyperplane (multi)arrangements of type A and membership in `D(A, m)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{coordinates, DerivationField};
use crate::poly::{Degree, Poly, Rational, VarId};

/// A hyperplane `ker(form)` with a multiplicity.
///
/// Forms are normalized to coprime integer coefficients whose first nonzero
/// coefficient, in variable order `x1, ..., xl, t, z`, is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    form: Poly,
    multiplicity: usize,
}

fn normalize_form(form: &Poly) -> Result<Poly> {
    if form.total_degree() != Degree::Finite(1) {
        return Err(Error::InvalidParameter(format!(
            "hyperplane form must have total degree 1, got {form}"
        )));
    }
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for (_, c) in form.terms() {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let scaled = form.scale(&Rational::from_integer(denom_lcm));
    for (_, c) in scaled.terms() {
        numer_gcd = numer_gcd.gcd(c.numer());
    }
    // Sign of the first nonzero linear coefficient in slot order.
    let first_sign = (0..form.nvars())
        .find_map(|slot| {
            scaled
                .terms()
                .find(|(m, _)| m.degree() == 1 && m.exponent(slot) == 1)
                .map(|(_, c)| c.is_negative())
        })
        .unwrap_or(false);
    let mut factor = Rational::new(BigInt::one(), numer_gcd);
    if first_sign {
        factor = -factor;
    }
    Ok(scaled.scale(&factor))
}

impl Hyperplane {
    pub fn new(form: Poly, multiplicity: usize) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::InvalidParameter(
                "hyperplane multiplicity must be at least 1".into(),
            ));
        }
        Ok(Hyperplane {
            form: normalize_form(&form)?,
            multiplicity,
        })
    }

    pub fn form(&self) -> &Poly {
        &self.form
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }
}

/// The first hyperplane on which a field fails the divisibility condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipFailure {
    /// Position of the hyperplane in the arrangement.
    pub index: usize,
    pub form: Poly,
    pub multiplicity: usize,
    /// Largest power of the form that was divided out.
    pub achieved: usize,
    pub remainder: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember(MembershipFailure),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }

    pub fn failure(&self) -> Option<&MembershipFailure> {
        match self {
            Membership::Member => None,
            Membership::NotMember(f) => Some(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    l: usize,
    coords: Vec<VarId>,
    hyperplanes: Vec<Hyperplane>,
    label: String,
}

impl Arrangement {
    pub fn new(
        l: usize,
        coords: Vec<VarId>,
        hyperplanes: Vec<Hyperplane>,
        label: impl Into<String>,
    ) -> Result<Self> {
        for v in &coords {
            if v.slot(l).is_none() {
                return Err(Error::UnknownVariable(v.to_string()));
            }
        }
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.form.l() != l {
                return Err(Error::AmbientMismatch {
                    left: l,
                    right: h.form.l(),
                });
            }
            if let Some(v) = h
                .form
                .ambient()
                .into_iter()
                .find(|v| h.form.contains_var(*v) && !coords.contains(v))
            {
                return Err(Error::InvalidParameter(format!(
                    "hyperplane {} uses {v}, which is not a coordinate of the arrangement",
                    h.form
                )));
            }
            if hyperplanes[..i].iter().any(|o| o.form == h.form) {
                return Err(Error::InvalidParameter(format!(
                    "hyperplane {} appears twice; carry multiplicity on the hyperplane instead",
                    h.form
                )));
            }
        }
        Ok(Arrangement {
            l,
            coords,
            hyperplanes,
            label: label.into(),
        })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn coords(&self) -> &[VarId] {
        &self.coords
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Sum of multiplicities, the degree of the defining polynomial.
    pub fn total_multiplicity(&self) -> usize {
        self.hyperplanes.iter().map(|h| h.multiplicity).sum()
    }

    /// The same hyperplanes with every multiplicity replaced by `mult`.
    pub fn with_uniform_multiplicity(&self, mult: usize) -> Result<Arrangement> {
        let hyperplanes = self
            .hyperplanes
            .iter()
            .map(|h| Hyperplane::new(h.form.clone(), mult))
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(self.l, self.coords.clone(), hyperplanes, self.label.clone())
    }
}

fn check_dimension(l: usize) -> Result<()> {
    if l < 2 {
        Err(Error::InvalidDimension(l))
    } else {
        Ok(())
    }
}

/// `x_i - x_j - k z`.
fn shifted_root(l: usize, i: usize, j: usize, k: i64) -> Poly {
    let base = &Poly::x(l, i) - &Poly::x(l, j);
    if k == 0 {
        base
    } else {
        &base - &Poly::z(l).scale(&Rational::from_integer(k.into()))
    }
}

fn pairs(l: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=l).flat_map(move |i| (i + 1..=l).map(move |j| (i, j)))
}

/// The braid arrangement `x_i = x_j` with uniform multiplicity `mult`.
pub fn braid(l: usize, mult: usize) -> Result<Arrangement> {
    check_dimension(l)?;
    if mult == 0 {
        return Err(Error::InvalidParameter(
            "multiplicity must be at least 1".into(),
        ));
    }
    let hyperplanes = pairs(l)
        .map(|(i, j)| Hyperplane::new(shifted_root(l, i, j, 0), mult))
        .collect::<Result<Vec<_>>>()?;
    Arrangement::new(
        l,
        coordinates(l, false),
        hyperplanes,
        format!("braid(l={l}, mult={mult})"),
    )
}

fn cone(l: usize, ks: std::ops::RangeInclusive<i64>, label: String) -> Result<Arrangement> {
    let mut hyperplanes = Vec::new();
    for (i, j) in pairs(l) {
        for k in ks.clone() {
            hyperplanes.push(Hyperplane::new(shifted_root(l, i, j, k), 1)?);
        }
    }
    hyperplanes.push(Hyperplane::new(Poly::z(l), 1)?);
    Arrangement::new(l, coordinates(l, true), hyperplanes, label)
}

/// Cone of the extended Catalan arrangement: `z` and `x_i - x_j - k z` for `-m <= k <= m`.
pub fn catalan_cone(l: usize, m: usize) -> Result<Arrangement> {
    check_dimension(l)?;
    let m = m as i64;
    cone(l, -m..=m, format!("cCat(l={l}, m={m})"))
}

/// Cone of the extended Shi arrangement: `z` and `x_i - x_j - k z` for `1 - m <= k <= m`.
pub fn shi_cone(l: usize, m: usize) -> Result<Arrangement> {
    check_dimension(l)?;
    if m < 1 {
        return Err(Error::InvalidParameter(format!(
            "the Shi cone requires m >= 1, got m = {m}"
        )));
    }
    let m = m as i64;
    cone(l, 1 - m..=m, format!("cShi(l={l}, m={m})"))
}

/// `prod_H form(H)^mult(H)`.
pub fn defining_polynomial(a: &Arrangement) -> Poly {
    a.hyperplanes.iter().fold(Poly::one(a.l), |acc, h| {
        &acc * &h.form.pow(h.multiplicity as u32)
    })
}

pub fn field_apply(field: &DerivationField, p: &Poly) -> Result<Poly> {
    field.apply(p)
}

/// Whether `field(form(H))` is divisible by `form(H)^mult(H)` for every hyperplane.
/// Reports the first failing hyperplane in arrangement order.
pub fn member(field: &DerivationField, a: &Arrangement) -> Result<Membership> {
    if field.l() != a.l {
        return Err(Error::AmbientMismatch {
            left: field.l(),
            right: a.l,
        });
    }
    let outcomes = a
        .hyperplanes
        .par_iter()
        .enumerate()
        .map(|(index, h)| -> Result<Option<MembershipFailure>> {
            let value = field.apply(&h.form)?;
            let div = value.divide_out_power(&h.form, h.multiplicity)?;
            Ok(div.remainder.map(|remainder| MembershipFailure {
                index,
                form: h.form.clone(),
                multiplicity: h.multiplicity,
                achieved: div.achieved,
                remainder,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match outcomes.into_iter().flatten().next() {
        Some(f) => Membership::NotMember(f),
        None => Membership::Member,
    })
}
