//! Named, runtime-selectable families: bases of arrangements and single fields.

use crate::arrangement::{braid, catalan_cone, shi_cone, Arrangement};
use crate::basis;
use crate::error::{Error, Result};
use crate::field::DerivationField;
use crate::verify::{
    exponent_check, saito_check, ziegler_restriction_check, ConeKind, VerificationReport,
};

pub trait Named {
    fn name(&self) -> &'static str;
}

/// An arrangement together with its explicit basis.
pub trait BasisFamily: Named + Send + Sync {
    fn check_params(&self, l: usize, m: usize) -> Result<()>;
    fn arrangement(&self, l: usize, m: usize) -> Result<Arrangement>;
    fn basis(&self, l: usize, m: usize) -> Result<Vec<DerivationField>>;
    /// Expected degrees of the basis, as a multiset.
    fn exponents(&self, l: usize, m: usize) -> Vec<usize>;
    /// The cone type, for families whose restriction to `z = 0` is certified too.
    fn cone_kind(&self) -> Option<ConeKind> {
        None
    }
}

/// A single vector field indexed by `(l, m, k)`.
pub trait FieldFamily: Named + Send + Sync {
    fn build(&self, l: usize, m: usize, k: usize) -> Result<DerivationField>;
}

fn check_dimension(l: usize) -> Result<()> {
    if l < 2 {
        Err(Error::InvalidDimension(l))
    } else {
        Ok(())
    }
}

fn check_m_positive(m: usize) -> Result<()> {
    if m < 1 {
        Err(Error::InvalidParameter(format!(
            "m >= 1 is required, got m = {m}"
        )))
    } else {
        Ok(())
    }
}

pub struct CatalanCone;
pub struct ShiCone;
pub struct BraidOdd;
pub struct BraidEven;

impl Named for CatalanCone {
    fn name(&self) -> &'static str {
        "cat"
    }
}

impl BasisFamily for CatalanCone {
    fn check_params(&self, l: usize, _m: usize) -> Result<()> {
        check_dimension(l)
    }

    fn arrangement(&self, l: usize, m: usize) -> Result<Arrangement> {
        catalan_cone(l, m)
    }

    fn basis(&self, l: usize, m: usize) -> Result<Vec<DerivationField>> {
        basis::catalan_basis(l, m)
    }

    fn exponents(&self, l: usize, m: usize) -> Vec<usize> {
        let mut e = vec![0, 1];
        e.extend((1..l).map(|i| m * l + i));
        e
    }

    fn cone_kind(&self) -> Option<ConeKind> {
        Some(ConeKind::Catalan)
    }
}

impl Named for ShiCone {
    fn name(&self) -> &'static str {
        "shi"
    }
}

impl BasisFamily for ShiCone {
    fn check_params(&self, l: usize, m: usize) -> Result<()> {
        check_dimension(l)?;
        check_m_positive(m)
    }

    fn arrangement(&self, l: usize, m: usize) -> Result<Arrangement> {
        shi_cone(l, m)
    }

    fn basis(&self, l: usize, m: usize) -> Result<Vec<DerivationField>> {
        basis::shi_basis(l, m)
    }

    fn exponents(&self, l: usize, m: usize) -> Vec<usize> {
        let mut e = vec![0, 1];
        e.extend(std::iter::repeat_n(m * l, l - 1));
        e
    }

    fn cone_kind(&self) -> Option<ConeKind> {
        Some(ConeKind::Shi)
    }
}

impl Named for BraidOdd {
    fn name(&self) -> &'static str {
        "braid-odd"
    }
}

/// Braid arrangement with multiplicity `2m + 1`.
impl BasisFamily for BraidOdd {
    fn check_params(&self, l: usize, _m: usize) -> Result<()> {
        check_dimension(l)
    }

    fn arrangement(&self, l: usize, m: usize) -> Result<Arrangement> {
        braid(l, 2 * m + 1)
    }

    fn basis(&self, l: usize, m: usize) -> Result<Vec<DerivationField>> {
        basis::braid_odd_basis(l, m)
    }

    fn exponents(&self, l: usize, m: usize) -> Vec<usize> {
        let mut e = vec![0];
        e.extend((0..l - 1).map(|k| k + m * l + 1));
        e
    }
}

impl Named for BraidEven {
    fn name(&self) -> &'static str {
        "braid-even"
    }
}

/// Braid arrangement with multiplicity `2m`.
impl BasisFamily for BraidEven {
    fn check_params(&self, l: usize, m: usize) -> Result<()> {
        check_dimension(l)?;
        check_m_positive(m)
    }

    fn arrangement(&self, l: usize, m: usize) -> Result<Arrangement> {
        braid(l, 2 * m)
    }

    fn basis(&self, l: usize, m: usize) -> Result<Vec<DerivationField>> {
        basis::braid_even_basis(l, m)
    }

    fn exponents(&self, l: usize, m: usize) -> Vec<usize> {
        let mut e = vec![0];
        e.extend(std::iter::repeat_n(m * l, l - 1));
        e
    }
}

macro_rules! field_family {
    ($ty:ident, $name:literal, $build:path) => {
        pub struct $ty;

        impl Named for $ty {
            fn name(&self) -> &'static str {
                $name
            }
        }

        impl FieldFamily for $ty {
            fn build(&self, l: usize, m: usize, k: usize) -> Result<DerivationField> {
                $build(l, m, k)
            }
        }
    };
}

field_family!(Eta, "eta", basis::eta);
field_family!(Sigma, "sigma", basis::sigma);
field_family!(Zeta, "zeta", basis::zeta);
field_family!(Tau, "tau", basis::tau);

/// Name-keyed collection of trait objects, kept in registration order.
pub struct Registry<T: ?Sized + Named> {
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Default for Registry<T> {
    fn default() -> Self {
        Registry {
            entries: Vec::new(),
        }
    }
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, entry: Box<T>) -> Result<()> {
        if self.get(entry.name()).is_some() {
            return Err(Error::InvalidParameter(format!(
                "{} is already registered",
                entry.name()
            )));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}

impl Registry<dyn BasisFamily> {
    pub fn builtin() -> Self {
        let mut r = Self::new();
        for f in [
            Box::new(CatalanCone) as Box<dyn BasisFamily>,
            Box::new(ShiCone),
            Box::new(BraidOdd),
            Box::new(BraidEven),
        ] {
            r.register(f).expect("builtin names are distinct");
        }
        r
    }
}

impl Registry<dyn FieldFamily> {
    pub fn builtin() -> Self {
        let mut r = Self::new();
        for f in [
            Box::new(Eta) as Box<dyn FieldFamily>,
            Box::new(Sigma),
            Box::new(Zeta),
            Box::new(Tau),
        ] {
            r.register(f).expect("builtin names are distinct");
        }
        r
    }
}

pub type BasisRegistry = Registry<dyn BasisFamily>;
pub type FieldRegistry = Registry<dyn FieldFamily>;

/// Saito's criterion and the exponent comparison for a family, plus the
/// restriction check for cone families.
pub fn verify_family(
    family: &dyn BasisFamily,
    l: usize,
    m: usize,
) -> Result<Vec<VerificationReport>> {
    family.check_params(l, m)?;
    let arrangement = family.arrangement(l, m)?;
    let fields = family.basis(l, m)?;
    let mut reports = vec![
        saito_check(&arrangement, &fields)?,
        exponent_check(&fields, &family.exponents(l, m))?,
    ];
    if let Some(kind) = family.cone_kind() {
        reports.push(ziegler_restriction_check(l, m, kind)?);
    }
    Ok(reports)
}
