//! Certification of bases and identities.
//!
//! Every routine returns a [`VerificationReport`]: a list of named checks,
//! each with a pass flag and a witness, whose conjunction is the verdict.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arrangement::{braid, catalan_cone, member, shi_cone, Arrangement, Membership};
use crate::basis::{
    catalan_basis, eta, invariant_coordinates, restrict_z0, shi_basis, sigma, tau, zeta,
};
use crate::error::{Error, Result};
use crate::field::DerivationField;
use crate::matrix::determinant;
use crate::poly::{Poly, Rational, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    None,
    Poly(Poly),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            checks: Vec::new(),
            overall: true,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, witness: Witness) {
        self.overall &= pass;
        self.checks.push(Check {
            name: name.into(),
            pass,
            witness,
        });
    }

    /// Append the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for c in other.checks {
            self.push(format!("{prefix}{}", c.name), c.pass, c.witness);
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// The Saito constant `c` recorded by [`saito_check`], when it was found.
    pub fn saito_constant(&self) -> Option<Rational> {
        match &self.check("determinant_ratio")?.witness {
            Witness::Poly(p) if self.check("determinant_ratio")?.pass => p.constant_value(),
            _ => None,
        }
    }

    pub fn determinant(&self) -> Option<&Poly> {
        match &self.check("determinant")?.witness {
            Witness::Poly(p) => Some(p),
            _ => None,
        }
    }
}

fn describe_failure(m: &Membership) -> Witness {
    match m.failure() {
        None => Witness::None,
        Some(f) => Witness::Text(format!(
            "hyperplane #{} ({}) with multiplicity {}: divisible only to power {}, remainder {}",
            f.index, f.form, f.multiplicity, f.achieved, f.remainder
        )),
    }
}

/// Saito's criterion: every field lies in `D(A)` and the coefficient
/// determinant is a nonzero constant multiple of the defining polynomial.
///
/// Rows of the matrix are the fields, columns the coordinates of `A` in order.
/// The constant is found by dividing the determinant by each form as many
/// times as its multiplicity.
pub fn saito_check(a: &Arrangement, fields: &[DerivationField]) -> Result<VerificationReport> {
    let n = a.coords().len();
    if fields.len() != n {
        return Err(Error::Shape(format!(
            "Saito's criterion needs {n} fields for {}, got {}",
            a.label(),
            fields.len()
        )));
    }
    if let Some(f) = fields.iter().find(|f| f.l() != a.l()) {
        return Err(Error::AmbientMismatch {
            left: a.l(),
            right: f.l(),
        });
    }
    let rows = fields
        .iter()
        .map(|f| f.coefficients_on(a.coords()))
        .collect::<Result<Vec<_>>>()?;

    let mut report = VerificationReport::new(format!("saito {}", a.label()));
    let memberships = fields
        .par_iter()
        .map(|f| member(f, a))
        .collect::<Result<Vec<_>>>()?;
    for (i, m) in memberships.iter().enumerate() {
        report.push(format!("member[{i}]"), m.is_member(), describe_failure(m));
    }

    let degrees: Option<Vec<u32>> = fields.iter().map(|f| f.homogeneous_degree()).collect();
    let total = a.total_multiplicity();
    match degrees {
        Some(d) => {
            let sum: u32 = d.iter().sum();
            report.push(
                "degree_audit",
                sum as usize == total,
                Witness::Text(format!(
                    "field degrees {d:?} sum to {sum}; multiplicities sum to {total}"
                )),
            );
        }
        None => report.push(
            "degree_audit",
            false,
            Witness::Text("some field is zero or not homogeneous".into()),
        ),
    }

    let det = determinant(&rows)?;
    report.push("determinant", !det.is_zero(), Witness::Poly(det.clone()));

    let mut quotient = det;
    let mut ratio_failure = None;
    if !quotient.is_zero() {
        for (idx, h) in a.hyperplanes().iter().enumerate() {
            let div = quotient.divide_out_power(h.form(), h.multiplicity())?;
            if let Some(r) = div.remainder {
                ratio_failure = Some(format!(
                    "determinant not divisible by ({})^{} at hyperplane #{idx}: remainder {r}",
                    h.form(),
                    h.multiplicity()
                ));
                break;
            }
            quotient = div.quotient;
        }
    }
    match ratio_failure {
        Some(text) => report.push("determinant_ratio", false, Witness::Text(text)),
        None => {
            let is_constant = is_nonzero_constant(&quotient);
            report.push("determinant_ratio", is_constant, Witness::Poly(quotient));
        }
    }
    Ok(report)
}

/// Compare the multiset of field degrees with `expected`.
pub fn exponent_check(
    fields: &[DerivationField],
    expected: &[usize],
) -> Result<VerificationReport> {
    let mut found = Vec::with_capacity(fields.len());
    for (index, f) in fields.iter().enumerate() {
        let d = f
            .homogeneous_degree()
            .ok_or(Error::NonHomogeneous { index })?;
        found.push(d as usize);
    }
    let mut sorted_found = found.clone();
    sorted_found.sort_unstable();
    let mut sorted_expected = expected.to_vec();
    sorted_expected.sort_unstable();
    let mut report = VerificationReport::new("exponents");
    report.push(
        "exponents",
        sorted_found == sorted_expected,
        Witness::Text(format!(
            "degrees {found:?}; expected multiset {sorted_expected:?}"
        )),
    );
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeKind {
    Catalan,
    Shi,
}

impl ConeKind {
    fn label(self) -> &'static str {
        match self {
            ConeKind::Catalan => "cat",
            ConeKind::Shi => "shi",
        }
    }
}

/// For cone bases: the non-Euler fields lie in the cone arrangement, and
/// their restrictions to `z = 0` satisfy Saito's criterion for the braid
/// arrangement with multiplicity `2m + 1` (Catalan) or `2m` (Shi).
pub fn ziegler_restriction_check(l: usize, m: usize, kind: ConeKind) -> Result<VerificationReport> {
    let (cone, basis, mult) = match kind {
        ConeKind::Catalan => (catalan_cone(l, m)?, catalan_basis(l, m)?, 2 * m + 1),
        ConeKind::Shi => (shi_cone(l, m)?, shi_basis(l, m)?, 2 * m),
    };
    let mut report =
        VerificationReport::new(format!("ziegler restriction {} l={l} m={m}", kind.label()));
    // basis[0] is the Euler field.
    let non_euler = &basis[1..];
    let memberships = non_euler
        .par_iter()
        .map(|f| member(f, &cone))
        .collect::<Result<Vec<_>>>()?;
    for (i, ms) in memberships.iter().enumerate() {
        report.push(
            format!("cone_member[{i}]"),
            ms.is_member(),
            describe_failure(ms),
        );
    }
    let restricted = non_euler
        .iter()
        .map(restrict_z0)
        .collect::<Result<Vec<_>>>()?;
    let sub = saito_check(&braid(l, mult)?, &restricted)?;
    report.absorb("restriction/", sub);
    Ok(report)
}

/// `M[a][b] = dP_a/dx_b`, its determinant `Q`, and the adjugate with `M adj = Q I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianData {
    pub l: usize,
    pub matrix: Vec<Vec<Poly>>,
    pub q: Poly,
    pub adjugate: Vec<Vec<Poly>>,
}

/// Column convention of the lifted coordinate fields.
pub const INVERSE_JACOBIAN_CONVENTION: &str =
    "M[a][b] = dP_a/dx_b; (M^-1)[b][j] = dx_b/dP_j = adj[b][j] / Q";

impl JacobianData {
    /// `M * adj - Q * I`, entrywise; all zero when the data is consistent.
    pub fn identity_defect(&self) -> Vec<Vec<Poly>> {
        let l = self.l;
        (0..l)
            .map(|a| {
                (0..l)
                    .map(|c| {
                        let prod = (0..l).fold(Poly::zero(l), |acc, b| {
                            &acc + &(&self.matrix[a][b] * &self.adjugate[b][c])
                        });
                        if a == c {
                            &prod - &self.q
                        } else {
                            prod
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn identity_holds(&self) -> bool {
        self.identity_defect().iter().flatten().all(Poly::is_zero)
    }

    /// `Q * d/dP_j` (1-based `j`) applied to `p`: `sum_b adj[b][j] dp/dx_b`.
    pub fn cleared_lift(&self, j: usize, p: &Poly) -> Result<Poly> {
        (0..self.l).try_fold(Poly::zero(self.l), |acc, b| {
            let entry = &self.adjugate[b][j - 1];
            if entry.is_zero() {
                return Ok(acc);
            }
            Ok(&acc + &(entry * &p.partial_derivative(VarId::X(b + 1))?))
        })
    }
}

fn check_dimension(l: usize) -> Result<()> {
    if l < 2 {
        Err(Error::InvalidDimension(l))
    } else {
        Ok(())
    }
}

pub fn jacobian_data(l: usize) -> Result<JacobianData> {
    check_dimension(l)?;
    let ps = invariant_coordinates(l);
    let matrix = ps
        .iter()
        .map(|p| {
            (1..=l)
                .map(|b| p.partial_derivative(VarId::X(b)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let q = determinant(&matrix)?;
    let cofactor = |a: usize, b: usize| -> Result<Poly> {
        let minor: Vec<Vec<Poly>> = (0..l)
            .filter(|&r| r != a)
            .map(|r| {
                (0..l)
                    .filter(|&c| c != b)
                    .map(|c| matrix[r][c].clone())
                    .collect()
            })
            .collect();
        let det = determinant(&minor)?;
        Ok(if (a + b).is_multiple_of(2) { det } else { -det })
    };
    // adj[b][a] is the (a, b) cofactor.
    let adjugate = (0..l)
        .map(|b| (0..l).map(|a| cofactor(a, b)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(JacobianData {
        l,
        matrix,
        q,
        adjugate,
    })
}

fn check_range(name: &str, v: usize, lo: usize, hi: usize) -> Result<()> {
    if (lo..=hi).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} = {v} outside {lo}..={hi}"
        )))
    }
}

fn compare_coefficients(report: &mut VerificationReport, lhs: &[Poly], rhs: &[Poly]) {
    for (i, (a, b)) in lhs.iter().zip(rhs).enumerate() {
        let diff = a - b;
        let witness = if diff.is_zero() {
            Witness::None
        } else {
            Witness::Poly(diff.clone())
        };
        report.push(format!("coefficient[{}]", i + 1), diff.is_zero(), witness);
    }
}

/// `Q * d/dP_j (eta_k^m) = Q * m * eta_{k+l-j}^{m-1}`, coefficient by coefficient.
pub fn bibun_check(l: usize, m: usize, k: usize, j: usize) -> Result<VerificationReport> {
    check_dimension(l)?;
    check_range("m", m, 1, usize::MAX)?;
    check_range("j", j, 1, l)?;
    let jac = jacobian_data(l)?;
    let mut report = VerificationReport::new(format!("bibun l={l} m={m} k={k} j={j}"));
    report.push(
        "adjugate_identity",
        jac.identity_holds(),
        Witness::Text(INVERSE_JACOBIAN_CONVENTION.into()),
    );
    let source = eta(l, m, k)?;
    let target = eta(l, m - 1, k + l - j)?;
    let scale = Rational::from_integer(BigInt::from(m));
    let lhs = source
        .coeffs()
        .par_iter()
        .map(|c| jac.cleared_lift(j, c))
        .collect::<Result<Vec<_>>>()?;
    let rhs: Vec<Poly> = target
        .coeffs()
        .iter()
        .map(|c| (&jac.q * c).scale(&scale))
        .collect();
    compare_coefficients(&mut report, &lhs, &rhs);
    Ok(report)
}

/// Apply the primitive derivation `d/dP_l` to `eta_k^m` `m` times, dividing by
/// `Q` after each step, and compare with `m! eta_k^0`.
pub fn primitive_power_check(l: usize, m: usize, k: usize) -> Result<VerificationReport> {
    check_dimension(l)?;
    let jac = jacobian_data(l)?;
    let mut report = VerificationReport::new(format!("primitive power l={l} m={m} k={k}"));
    let mut current: Vec<Poly> = eta(l, m, k)?.coeffs().to_vec();
    for step in 1..=m {
        let next = current
            .par_iter()
            .map(|c| -> Result<Option<Poly>> { jac.cleared_lift(l, c)?.div_exact(&jac.q) })
            .collect::<Result<Vec<_>>>()?;
        let exact = next.iter().all(Option::is_some);
        report.push(
            format!("step[{step}]"),
            exact,
            if exact {
                Witness::None
            } else {
                Witness::Text("lifted derivative not divisible by Q".into())
            },
        );
        if !exact {
            return Ok(report);
        }
        current = next.into_iter().map(Option::unwrap).collect();
    }
    let factorial = (1..=m).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    let expected: Vec<Poly> = eta(l, 0, k)?
        .coeffs()
        .iter()
        .map(|c| c.scale(&Rational::from_integer(factorial.clone())))
        .collect();
    compare_coefficients(&mut report, &current, &expected);
    Ok(report)
}

/// `d/dx_k` applied to the coefficients of `eta_0^m` equals `-m sigma_k^m`.
pub fn differentiate2_check(l: usize, m: usize, k: usize) -> Result<VerificationReport> {
    check_dimension(l)?;
    check_range("m", m, 1, usize::MAX)?;
    check_range("k", k, 1, l)?;
    let mut report = VerificationReport::new(format!("differentiate l={l} m={m} k={k}"));
    let lhs = eta(l, m, 0)?
        .coeffs()
        .iter()
        .map(|c| c.partial_derivative(VarId::X(k)))
        .collect::<Result<Vec<_>>>()?;
    let factor = -Rational::from_integer(BigInt::from(m));
    let rhs: Vec<Poly> = sigma(l, m, k)?
        .coeffs()
        .iter()
        .map(|c| c.scale(&factor))
        .collect();
    compare_coefficients(&mut report, &lhs, &rhs);
    Ok(report)
}

/// Substitute `x_u = x_v + p` into `field(x_u - x_v)` for every pair `u < v`
/// and every offset in `offsets`, recording whether each result vanishes.
fn vanishing_checks(
    report: &mut VerificationReport,
    tag: &str,
    field: &DerivationField,
    offsets: &[i64],
) -> Result<()> {
    let l = field.l();
    for u in 1..=l {
        for v in u + 1..=l {
            let form = &Poly::x(l, u) - &Poly::x(l, v);
            let value = field.apply(&form)?;
            for &p in offsets {
                let shifted = &Poly::x(l, v) + &Poly::integer(l, p);
                let r = value.substitute(VarId::X(u), &shifted)?;
                let witness = if r.is_zero() {
                    Witness::None
                } else {
                    Witness::Poly(r.clone())
                };
                report.push(format!("{tag} u={u} v={v} p={p}"), r.is_zero(), witness);
            }
        }
    }
    Ok(())
}

/// `zeta_k^m (x_u - x_v)` vanishes on `x_u = x_v + p` for `0 < |p| <= m`.
pub fn catalan_vanishing_check(l: usize, m: usize, k: usize) -> Result<VerificationReport> {
    let field = zeta(l, m, k)?;
    let mi = m as i64;
    let offsets: Vec<i64> = (-mi..=mi).filter(|&p| p != 0).collect();
    let mut report = VerificationReport::new(format!("catalan vanishing l={l} m={m} k={k}"));
    vanishing_checks(&mut report, "zeta", &field, &offsets)?;
    Ok(report)
}

/// `(tau_k^m - tau_{k+1}^m)(x_u - x_v)` vanishes on `x_u = x_v + p` for
/// `1 - m <= p <= m`, `p != 0`.
pub fn shi_vanishing_check(l: usize, m: usize, k: usize) -> Result<VerificationReport> {
    check_range("k", k, 1, l.saturating_sub(1))?;
    let field = tau(l, m, k)?.checked_sub(&tau(l, m, k + 1)?)?;
    let mi = m as i64;
    let offsets: Vec<i64> = (1 - mi..=mi).filter(|&p| p != 0).collect();
    let mut report = VerificationReport::new(format!("shi vanishing l={l} m={m} k={k}"));
    vanishing_checks(&mut report, "tau", &field, &offsets)?;
    Ok(report)
}

fn is_nonzero_constant(p: &Poly) -> bool {
    p.constant_value().is_some_and(|c| !c.is_zero())
}
