//! Polynomial vector fields `sum_v f_v d/dv`.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rational, VarId};

/// A derivation of the polynomial ring, stored as one coefficient per coordinate.
///
/// Coordinates are `x1, ..., xl` and, on the coned ambient, `z`. Coordinates
/// that are not listed have zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationField {
    l: usize,
    coords: Vec<VarId>,
    coeffs: Vec<Poly>,
}

/// `x1, ..., xl`, followed by `z` when `coned`.
pub fn coordinates(l: usize, coned: bool) -> Vec<VarId> {
    let mut out: Vec<VarId> = (1..=l).map(VarId::X).collect();
    if coned {
        out.push(VarId::Z);
    }
    out
}

impl DerivationField {
    pub fn new(l: usize, coords: Vec<VarId>, coeffs: Vec<Poly>) -> Result<Self> {
        if coords.len() != coeffs.len() {
            return Err(Error::Shape(format!(
                "{} coordinates but {} coefficients",
                coords.len(),
                coeffs.len()
            )));
        }
        for (i, v) in coords.iter().enumerate() {
            if v.slot(l).is_none() {
                return Err(Error::UnknownVariable(v.to_string()));
            }
            if coords[..i].contains(v) {
                return Err(Error::Shape(format!("coordinate {v} listed twice")));
            }
        }
        let coeffs = coeffs
            .into_iter()
            .map(|p| p.embed(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(DerivationField { l, coords, coeffs })
    }

    /// A field on `x1, ..., xl` (plus `z` with zero coefficient when `coned`).
    pub fn on_x(l: usize, coeffs: Vec<Poly>, coned: bool) -> Result<Self> {
        let mut coeffs = coeffs;
        if coned {
            coeffs.push(Poly::zero(l));
        }
        Self::new(l, coordinates(l, coned), coeffs)
    }

    pub fn zero(l: usize, coords: Vec<VarId>) -> Self {
        let coeffs = vec![Poly::zero(l); coords.len()];
        DerivationField { l, coords, coeffs }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn coords(&self) -> &[VarId] {
        &self.coords
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_coned(&self) -> bool {
        self.coords.contains(&VarId::Z)
    }

    pub fn coeff(&self, v: VarId) -> Poly {
        self.coords
            .iter()
            .position(|&c| c == v)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_else(|| Poly::zero(self.l))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// `sum_v f_v * dp/dv`.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        if p.l() != self.l && p.l() != 0 {
            return Err(Error::AmbientMismatch {
                left: self.l,
                right: p.l(),
            });
        }
        let mut acc = Poly::zero(self.l);
        for (v, f) in self.coords.iter().zip(&self.coeffs) {
            if f.is_zero() {
                continue;
            }
            let d = p.embed(self.l)?.partial_derivative(*v)?;
            if !d.is_zero() {
                acc = &acc + &(f * &d);
            }
        }
        Ok(acc)
    }

    /// Largest total degree among the coefficients; `None` for the zero field.
    pub fn max_degree(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .filter_map(|p| p.total_degree().finite())
            .max()
    }

    /// Common degree when every nonzero coefficient is homogeneous of one degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degree = None;
        for p in self.coeffs.iter().filter(|p| !p.is_zero()) {
            let d = p.homogeneous_degree()?;
            match degree {
                None => degree = Some(d),
                Some(e) if e == d => {}
                Some(_) => return None,
            }
        }
        degree
    }

    pub fn map_coeffs<F>(&self, f: F) -> Result<DerivationField>
    where
        F: FnMut(&Poly) -> Result<Poly>,
    {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        DerivationField::new(self.l, self.coords.clone(), coeffs)
    }

    pub fn scale(&self, c: &Rational) -> DerivationField {
        DerivationField {
            l: self.l,
            coords: self.coords.clone(),
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `p * self`.
    pub fn mul_poly(&self, p: &Poly) -> Result<DerivationField> {
        self.map_coeffs(|f| f.checked_mul(p))
    }

    /// Coefficients listed in the order of `target`; fails when the field has a
    /// nonzero coefficient on a coordinate missing from `target`.
    pub fn coefficients_on(&self, target: &[VarId]) -> Result<Vec<Poly>> {
        for (v, f) in self.coords.iter().zip(&self.coeffs) {
            if !f.is_zero() && !target.contains(v) {
                return Err(Error::Shape(format!(
                    "field has a nonzero coefficient on {v}, which is not a coordinate here"
                )));
            }
        }
        Ok(target.iter().map(|&v| self.coeff(v)).collect())
    }

    fn combine(&self, other: &DerivationField, subtract: bool) -> Result<DerivationField> {
        if self.l != other.l {
            return Err(Error::AmbientMismatch {
                left: self.l,
                right: other.l,
            });
        }
        let mut coords = self.coords.clone();
        for v in &other.coords {
            if !coords.contains(v) {
                coords.push(*v);
            }
        }
        let coeffs = coords
            .iter()
            .map(|&v| {
                let (a, b) = (self.coeff(v), other.coeff(v));
                if subtract {
                    &a - &b
                } else {
                    &a + &b
                }
            })
            .collect();
        DerivationField::new(self.l, coords, coeffs)
    }

    pub fn checked_add(&self, other: &DerivationField) -> Result<DerivationField> {
        self.combine(other, false)
    }

    pub fn checked_sub(&self, other: &DerivationField) -> Result<DerivationField> {
        self.combine(other, true)
    }
}

impl Add for &DerivationField {
    type Output = DerivationField;
    fn add(self, rhs: &DerivationField) -> DerivationField {
        self.checked_add(rhs).expect("ambient mismatch")
    }
}

impl Sub for &DerivationField {
    type Output = DerivationField;
    fn sub(self, rhs: &DerivationField) -> DerivationField {
        self.checked_sub(rhs).expect("ambient mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    #[test]
    fn apply_is_a_derivation() {
        let l = 2;
        let x1 = Poly::x(l, 1);
        let field = DerivationField::on_x(l, vec![x1.clone(), Poly::zero(l)], false).unwrap();
        assert_eq!(field.apply(&x1.pow(2)).unwrap(), x1.pow(2).scale(&int(2)));
    }

    #[test]
    fn coefficients_on_reorders_and_pads() {
        let l = 2;
        let f = DerivationField::on_x(l, vec![Poly::x(l, 2), Poly::one(l)], false).unwrap();
        let coned = coordinates(l, true);
        let row = f.coefficients_on(&coned).unwrap();
        assert_eq!(row, vec![Poly::x(l, 2), Poly::one(l), Poly::zero(l)]);
        let g = DerivationField::new(l, vec![VarId::Z], vec![Poly::one(l)]).unwrap();
        assert!(g.coefficients_on(&coordinates(l, false)).is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(DerivationField::new(2, vec![VarId::X(3)], vec![Poly::one(2)]).is_err());
        assert!(DerivationField::new(2, vec![VarId::X(1)], vec![]).is_err());
        assert!(DerivationField::new(
            2,
            vec![VarId::X(1), VarId::X(1)],
            vec![Poly::one(2), Poly::one(2)]
        )
        .is_err());
    }
}
