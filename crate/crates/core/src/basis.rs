//! The vector fields built from integrals and discrete integrals of `g(t)`,
//! together with the bases they assemble into.
//!
//! All four families share one shape: the `i`-th coefficient is
//! `sum_j (F(x_j) - F(x_i))` where `F` is an antiderivative (continuous
//! families) or an antidifference (discrete families) in `t` of some
//! integrand. Diagonal terms vanish, so the coefficient is evaluated as
//! `sum_j F(x_j) - l F(x_i)`.

use rayon::prelude::*;

use crate::discrete::{antiderivative, falling_power, indefinite_sum};
use crate::error::{Error, Result};
use crate::field::{coordinates, DerivationField};
use crate::poly::{Poly, VarId};

fn check_dimension(l: usize) -> Result<()> {
    if l < 2 {
        Err(Error::InvalidDimension(l))
    } else {
        Ok(())
    }
}

fn check_index(k: usize, lo: usize, hi: usize) -> Result<()> {
    if (lo..=hi).contains(&k) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: k, lo, hi })
    }
}

fn check_m_positive(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidParameter("m >= 1 is required".into()))
    } else {
        Ok(())
    }
}

/// `g(t) = (t - x1) ... (t - xl)`.
pub fn g_poly(l: usize) -> Poly {
    let t = Poly::t(l);
    (1..=l).fold(Poly::one(l), |acc, p| &acc * &(&t - &Poly::x(l, p)))
}

/// `g(t) / (t - x_k)`.
pub fn g_k_poly(l: usize, k: usize) -> Result<Poly> {
    check_index(k, 1, l)?;
    let t = Poly::t(l);
    Ok((1..=l)
        .filter(|&p| p != k)
        .fold(Poly::one(l), |acc, p| &acc * &(&t - &Poly::x(l, p))))
}

/// `P_1, ..., P_l`: the coefficients of `t^(l-1), ..., t^0` in `g(t)`.
pub fn invariant_coordinates(l: usize) -> Vec<Poly> {
    let by_power = g_poly(l)
        .coefficients_in_var(VarId::T)
        .expect("t is a variable of every ring");
    (1..=l).map(|i| by_power[l - i].clone()).collect()
}

/// `g(t)^{(m-1) falling} * prod_{i<k} (t - x_i + 1) * prod_{i>k} (t - x_i - m + 1)`.
pub fn g_km_poly(l: usize, m: usize, k: usize) -> Result<Poly> {
    check_m_positive(m)?;
    check_index(k, 0, l)?;
    let t = Poly::t(l);
    let one = Poly::one(l);
    let shift = Poly::integer(l, m as i64 - 1);
    let mut acc = falling_power(&g_poly(l), VarId::T, m - 1)?;
    for i in 1..=l {
        let base = &t - &Poly::x(l, i);
        if i < k {
            acc = &acc * &(&base + &one);
        } else if i > k {
            acc = &acc * &(&base - &shift);
        }
    }
    Ok(acc)
}

/// `d/dx1 + ... + d/dxl`.
pub fn theta_0(l: usize, coned: bool) -> DerivationField {
    DerivationField::on_x(l, vec![Poly::one(l); l], coned).expect("valid shape")
}

/// The Euler field `z d/dz + x1 d/dx1 + ... + xl d/dxl` on the coned ambient.
pub fn theta_e(l: usize) -> DerivationField {
    let mut coeffs: Vec<Poly> = (1..=l).map(|i| Poly::x(l, i)).collect();
    coeffs.push(Poly::z(l));
    DerivationField::new(l, coordinates(l, true), coeffs).expect("valid shape")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Calculus {
    Continuous,
    Discrete,
}

/// The field whose `i`-th coefficient is `sum_j [F]_{x_i}^{x_j}`.
fn integral_field(l: usize, integrand: &Poly, calculus: Calculus) -> Result<DerivationField> {
    let primitive = match calculus {
        Calculus::Continuous => antiderivative(integrand, VarId::T)?,
        Calculus::Discrete => indefinite_sum(integrand, VarId::T)?,
    };
    let at: Vec<Poly> = (1..=l)
        .map(|j| primitive.substitute(VarId::T, &Poly::x(l, j)))
        .collect::<Result<_>>()?;
    let total = at.iter().fold(Poly::zero(l), |acc, p| &acc + p);
    let ell = crate::poly::int(l as i64);
    let coeffs = at.iter().map(|f| &total - &f.scale(&ell)).collect();
    DerivationField::on_x(l, coeffs, false)
}

/// `eta_k^m`: coefficients `sum_j int_{x_i}^{x_j} t^k g(t)^m dt`.
pub fn eta(l: usize, m: usize, k: usize) -> Result<DerivationField> {
    check_dimension(l)?;
    let integrand = &Poly::t(l).pow(k as u32) * &g_poly(l).pow(m as u32);
    integral_field(l, &integrand, Calculus::Continuous)
}

/// `sigma_k^m`: coefficients `sum_j int_{x_i}^{x_j} g(t)^(m-1) g_k(t) dt`.
pub fn sigma(l: usize, m: usize, k: usize) -> Result<DerivationField> {
    check_dimension(l)?;
    check_m_positive(m)?;
    let integrand = &g_poly(l).pow(m as u32 - 1) * &g_k_poly(l, k)?;
    integral_field(l, &integrand, Calculus::Continuous)
}

/// `zeta_k^m`: the discrete analogue of `eta_k^m`, summing `t^k` times the
/// `m`-th falling power of `g`. Not homogeneous in general.
pub fn zeta(l: usize, m: usize, k: usize) -> Result<DerivationField> {
    check_dimension(l)?;
    let integrand = &Poly::t(l).pow(k as u32) * &falling_power(&g_poly(l), VarId::T, m)?;
    integral_field(l, &integrand, Calculus::Discrete)
}

/// `tau_k^m`: the discrete analogue of `sigma_k^m`, with summand `g_k^(m)`.
pub fn tau(l: usize, m: usize, k: usize) -> Result<DerivationField> {
    check_dimension(l)?;
    let integrand = g_km_poly(l, m, k)?;
    integral_field(l, &integrand, Calculus::Discrete)
}

/// `z^d f_i(x / z)` coefficient-wise, with `d` the largest coefficient degree
/// (zero for the zero field). The result lives on the coned ambient.
pub fn homogenize(field: &DerivationField) -> Result<DerivationField> {
    let l = field.l();
    if !field.coeff(VarId::Z).is_zero() || field.coeffs().iter().any(|p| p.contains_var(VarId::Z)) {
        return Err(Error::InvalidParameter(
            "homogenize expects a field without z".into(),
        ));
    }
    let d = field.max_degree().unwrap_or(0);
    let z_slot = VarId::Z.slot(l).expect("z is always present");
    let coords = coordinates(l, true);
    let coeffs = coords
        .iter()
        .map(|&v| {
            let f = field.coeff(v);
            let terms: Vec<_> = f
                .terms()
                .map(|(mono, c)| {
                    let mut exps = mono.exponents().to_vec();
                    exps[z_slot] = (d - mono.degree()) as u16;
                    (exps, c.clone())
                })
                .collect();
            Poly::from_terms(l, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    DerivationField::new(l, coords, coeffs)
}

/// Set `z = 0` in every coefficient and drop the `z` coordinate.
pub fn restrict_z0(field: &DerivationField) -> Result<DerivationField> {
    let l = field.l();
    let zero = Poly::zero(l);
    let coords = coordinates(l, false);
    let coeffs = coords
        .iter()
        .map(|&v| field.coeff(v).substitute(VarId::Z, &zero))
        .collect::<Result<Vec<_>>>()?;
    DerivationField::new(l, coords, coeffs)
}

/// `theta_E, theta_0, homogenized zeta_0^m, ..., zeta_{l-2}^m`.
pub fn catalan_basis(l: usize, m: usize) -> Result<Vec<DerivationField>> {
    check_dimension(l)?;
    let mut out = vec![theta_e(l), theta_0(l, true)];
    let zetas = (0..=l - 2)
        .into_par_iter()
        .map(|k| homogenize(&zeta(l, m, k)?))
        .collect::<Result<Vec<_>>>()?;
    out.extend(zetas);
    Ok(out)
}

/// `theta_E, theta_0`, and the differences of consecutive homogenized `tau_k^m`.
pub fn shi_basis(l: usize, m: usize) -> Result<Vec<DerivationField>> {
    check_dimension(l)?;
    check_m_positive(m)?;
    let taus = (1..=l)
        .into_par_iter()
        .map(|k| homogenize(&tau(l, m, k)?))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![theta_e(l), theta_0(l, true)];
    for pair in taus.windows(2) {
        out.push(pair[0].checked_sub(&pair[1])?);
    }
    Ok(out)
}

/// `theta_0, eta_0^m, ..., eta_{l-2}^m`, for multiplicity `2m + 1`.
pub fn braid_odd_basis(l: usize, m: usize) -> Result<Vec<DerivationField>> {
    check_dimension(l)?;
    let mut out = vec![theta_0(l, false)];
    let etas = (0..=l - 2)
        .into_par_iter()
        .map(|k| eta(l, m, k))
        .collect::<Result<Vec<_>>>()?;
    out.extend(etas);
    Ok(out)
}

/// `theta_0, sigma_1^m - sigma_2^m, ..., sigma_{l-1}^m - sigma_l^m`, for multiplicity `2m`.
pub fn braid_even_basis(l: usize, m: usize) -> Result<Vec<DerivationField>> {
    check_dimension(l)?;
    check_m_positive(m)?;
    let sigmas = (1..=l)
        .into_par_iter()
        .map(|k| sigma(l, m, k))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![theta_0(l, false)];
    for pair in sigmas.windows(2) {
        out.push(pair[0].checked_sub(&pair[1])?);
    }
    Ok(out)
}
