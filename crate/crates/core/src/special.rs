//! Numeric evaluation of the Dedekind eta function, the Jacobi theta
//! function, the crank generating function C(x;q), the auxiliary double
//! series C(a,b,c;q), and the half-integer Bessel kernel, together with
//! residual checks for the modular transformation identities they satisfy.

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::modular::{chi_multiplier, l_shift, modular_datum};
use crate::util::{pairwise_sum_c64, unit_phase_2pi, unit_phase_pi};

const PI: f64 = std::f64::consts::PI;

fn i_c() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// A point in the upper half plane, either given directly or through the
/// (h, k, z) chart tau = (h + iz)/k with Re(z) > 0.
#[derive(Debug, Clone, Copy)]
pub struct UpperHalfPoint {
    tau: Complex64,
}

impl UpperHalfPoint {
    pub fn from_tau(tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::domain(format!("tau must have Im > 0, got {tau}")));
        }
        Ok(UpperHalfPoint { tau })
    }

    /// tau = (h + iz)/k. Requires Re(z) > 0, which puts tau in the upper
    /// half plane.
    pub fn from_chart(h: i64, k: i64, z: Complex64) -> Result<Self> {
        if k < 1 {
            return Err(Error::domain(format!("chart needs k >= 1, got {k}")));
        }
        if !(z.re > 0.0) {
            return Err(Error::domain(format!("chart needs Re(z) > 0, got {z}")));
        }
        let tau = (Complex64::new(h as f64, 0.0) + i_c() * z) / k as f64;
        Ok(UpperHalfPoint { tau })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// q = e^{2*pi*i*tau}, always inside the unit disk.
    pub fn q(&self) -> Complex64 {
        (2.0 * PI * i_c() * self.tau).exp()
    }
}

/// Truncation control for the series and products in this module. Evaluation
/// stops at `series_terms` terms or once the certified geometric tail bound
/// drops below `target_abs_tol`, whichever comes first.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    pub series_terms: usize,
    pub target_abs_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { series_terms: 64, target_abs_tol: 1e-16 }
    }
}

/// (q)_infinity = prod_{n>=1} (1 - q^n), truncated per policy. The dropped
/// tail multiplies the result by 1 + O(|q|^{N+1}/(1-|q|)).
pub fn pochhammer_infinite(q: Complex64, policy: &TruncationPolicy) -> Complex64 {
    let rho = q.norm();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..=policy.series_terms {
        qn *= q;
        prod *= Complex64::new(1.0, 0.0) - qn;
        if rho.powi(n as i32 + 1) / (1.0 - rho) < policy.target_abs_tol {
            break;
        }
    }
    prod
}

/// eta(tau) = e^{pi*i*tau/12} prod_{n>=1} (1 - e^{2*pi*i*n*tau}).
pub fn eta(tau: &UpperHalfPoint, policy: &TruncationPolicy) -> Complex64 {
    (PI * i_c() * tau.tau() / 12.0).exp() * pochhammer_infinite(tau.q(), policy)
}

/// theta(u; tau) = sum over nu in Z + 1/2 of e^{pi*i*nu^2*tau +
/// 2*pi*i*nu*(u + 1/2)}, summed symmetrically in nu.
pub fn theta(u: Complex64, tau: &UpperHalfPoint, policy: &TruncationPolicy) -> Result<Complex64> {
    let t = tau.tau();
    if (-PI * t.im).exp() > 0.999 {
        return Err(Error::domain(format!(
            "theta series diverges too slowly at Im(tau) = {}",
            t.im
        )));
    }
    let shifted = u + 0.5;
    let mut terms = Vec::new();
    for m in 0..policy.series_terms {
        let nu = m as f64 + 0.5;
        let plus = (PI * i_c() * nu * nu * t + 2.0 * PI * i_c() * nu * shifted).exp();
        let minus = (PI * i_c() * nu * nu * t - 2.0 * PI * i_c() * nu * shifted).exp();
        terms.push(plus);
        terms.push(minus);
        if m >= 4 && plus.norm().max(minus.norm()) < policy.target_abs_tol {
            break;
        }
    }
    Ok(pairwise_sum_c64(&terms))
}

/// C(x;q) = (q)_inf / ((xq)_inf (x^{-1}q)_inf) with x = e^{2*pi*i*u}.
/// The x = 1 case degenerates to 1/(q)_inf with no special handling.
pub fn crank_gf_numeric(u: Complex64, q: Complex64, policy: &TruncationPolicy) -> Result<Complex64> {
    let rho = q.norm();
    if !(rho < 1.0) {
        return Err(Error::domain(format!("crank_gf_numeric needs |q| < 1, got |q| = {rho}")));
    }
    let x = (2.0 * PI * i_c() * u).exp();
    let xi = x.inv();
    let one = Complex64::new(1.0, 0.0);
    let mut num = one;
    let mut den = one;
    let mut qn = one;
    let mut min_dist = f64::INFINITY;
    let scale = x.norm().max(xi.norm());
    for n in 1..=policy.series_terms {
        qn *= q;
        num *= one - qn;
        let f1 = one - x * qn;
        let f2 = one - xi * qn;
        min_dist = min_dist.min(f1.norm()).min(f2.norm());
        den *= f1 * f2;
        if scale * rho.powi(n as i32 + 1) / (1.0 - rho) < policy.target_abs_tol {
            break;
        }
    }
    if min_dist < 1e-8 {
        return Err(Error::Conditioning { distance: min_dist });
    }
    Ok(num / den)
}

/// The auxiliary double series
/// C(a,b,c;q) = (i / (2 (q)_inf)) * (S0 - S1) with
/// S0 = sum_{m>=0} (-1)^m e^{-pi*i*a/c} q^{m(m+1)/2 + b/2c} / (1 - e^{-2*pi*i*a/c} q^{m + b/c}),
/// S1 = sum_{m>=1} (-1)^m e^{+pi*i*a/c} q^{m(m+1)/2 - b/2c} / (1 - e^{+2*pi*i*a/c} q^{m - b/c}).
pub fn c_abc_numeric(
    a: i64,
    b: i64,
    c: i64,
    q1: Complex64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    c_abc_from_log(a, b, c, q1.ln(), policy)
}

/// Same series with fractional powers taken as e^{s * log_q1} for the given
/// branch of log q1. The transformation checks pass 2*pi*i*tau' here so the
/// branch matches the modular chart instead of the principal logarithm.
pub(crate) fn c_abc_from_log(
    a: i64,
    b: i64,
    c: i64,
    log_q1: Complex64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    if c < 1 || b <= 0 || b >= c {
        return Err(Error::domain(format!("c_abc needs 0 < b < c, got b={b}, c={c}")));
    }
    let q1 = log_q1.exp();
    let rho = q1.norm();
    if !(rho < 1.0) {
        return Err(Error::domain(format!("c_abc needs |q1| < 1, got |q1| = {rho}")));
    }
    let qpow = |e: f64| (log_q1 * e).exp();
    let bc = b as f64 / c as f64;
    let em = unit_phase_pi(-(a as i128), c as i128);
    let em2 = unit_phase_2pi(-(a as i128), c as i128);
    let ep = unit_phase_pi(a as i128, c as i128);
    let ep2 = unit_phase_2pi(a as i128, c as i128);
    let one = Complex64::new(1.0, 0.0);
    let mut terms = Vec::new();
    for m in 0..policy.series_terms as i64 {
        let sign = if m.is_even() { 1.0 } else { -1.0 };
        let tri = (m * (m + 1) / 2) as f64;
        let t0 = sign * em * qpow(tri + bc / 2.0) / (one - em2 * qpow(m as f64 + bc));
        terms.push(t0);
        if m >= 1 {
            let t1 = sign * ep * qpow(tri - bc / 2.0) / (one - ep2 * qpow(m as f64 - bc));
            terms.push(-t1);
        }
        if m >= 2 && rho.powf(tri - 0.5) / (1.0 - rho) < policy.target_abs_tol {
            break;
        }
    }
    Ok(i_c() / 2.0 / pochhammer_infinite(q1, policy) * pairwise_sum_c64(&terms))
}

/// I_{3/2}(x) = sqrt(2/(pi*x)) * (cosh x - sinh x / x).
pub fn bessel_i_3_2(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("bessel_i_3_2 needs x > 0, got {x}")));
    }
    Ok((2.0 / (PI * x)).sqrt() * (x.cosh() - x.sinh() / x))
}

fn sin_pi_ratio(num: i64, den: i64) -> f64 {
    // sin(pi * num / den) with the angle reduced exactly first
    let r = num.rem_euclid(2 * den);
    (PI * r as f64 / den as f64).sin()
}

/// Relative residual of the modular identity relating C(e^{2*pi*i*a/c}; q)
/// at tau = (h+iz)/k to C at tau' = (h'+i/z)/k, for c | k.
pub fn transform_check_divisible(
    a: i64,
    c: i64,
    h: i64,
    k: i64,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    if c < 1 || c.is_even() || a <= 0 || a >= c || a.gcd(&c) != 1 {
        return Err(Error::domain(format!("need 0 < a < c coprime with c odd, got ({a},{c})")));
    }
    if k % c != 0 {
        return Err(Error::domain(format!("divisible case needs c | k, got c={c}, k={k}")));
    }
    if !(z.re > 0.0) {
        return Err(Error::domain(format!("need Re(z) > 0, got {z}")));
    }
    let d = modular_datum(h, k)?;
    let kf = k as f64;
    let q = UpperHalfPoint::from_chart(h, k, z)?.q();
    let lhs = crank_gf_numeric(Complex64::new(a as f64 / c as f64, 0.0), q, policy)?;

    let tau_p = (Complex64::new(d.h_prime as f64, 0.0) + i_c() / z) / kf;
    let q1 = (2.0 * PI * i_c() * tau_p).exp();
    let u1 = Complex64::new(((a * d.h_prime).rem_euclid(c)) as f64 / c as f64, 0.0);
    let sign = if (a * k + 1).is_even() { 1.0 } else { -1.0 };
    let front = i_c() * (PI * a as f64 / c as f64).sin()
        / (z.sqrt() * sin_pi_ratio(a * d.h_prime, c))
        * sign
        * d.omega
        * ((z.inv() - z) * PI / (12.0 * kf)).exp()
        * unit_phase_pi(
            -(a as i128) * a as i128 * k as i128 * d.h_prime as i128,
            (c as i128) * (c as i128),
        );
    let rhs = front * crank_gf_numeric(u1, q1, policy)?;
    Ok((lhs - rhs).norm() / lhs.norm())
}

/// Relative residual of the companion identity for c not dividing k, with
/// the right side built from C(a*h', l, c; q1).
pub fn transform_check_nondivisible(
    a: i64,
    c: i64,
    h: i64,
    k: i64,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    if c < 1 || c.is_even() || a <= 0 || a >= c || a.gcd(&c) != 1 {
        return Err(Error::domain(format!("need 0 < a < c coprime with c odd, got ({a},{c})")));
    }
    if k % c == 0 {
        return Err(Error::domain(format!("nondivisible case needs c not dividing k, got c={c}, k={k}")));
    }
    if !(z.re > 0.0) {
        return Err(Error::domain(format!("need Re(z) > 0, got {z}")));
    }
    let d = modular_datum(h, k)?;
    let l = l_shift(a, c, k)?;
    let kf = k as f64;
    let q = UpperHalfPoint::from_chart(h, k, z)?.q();
    let lhs = crank_gf_numeric(Complex64::new(a as f64 / c as f64, 0.0), q, policy)?;

    let tau_p = (Complex64::new(d.h_prime as f64, 0.0) + i_c() / z) / kf;
    let log_q1 = 2.0 * PI * i_c() * tau_p;
    let sign = if (a * k + l + 1).is_even() { 1.0 } else { -1.0 };
    let c2 = (c as i128) * (c as i128);
    let front = 4.0 * i_c() * (PI * a as f64 / c as f64).sin() * d.omega * sign / z.sqrt()
        * unit_phase_pi(-(a as i128) * a as i128 * k as i128 * d.h_prime as i128, c2)
        * unit_phase_2pi(d.h_prime as i128 * l as i128 * a as i128, c2)
        * (log_q1 * (-((l * l) as f64) / (2.0 * (c * c) as f64))).exp()
        * ((z.inv() - z) * PI / (12.0 * kf)).exp();
    let rhs = front * c_abc_from_log(a * d.h_prime, l, c, log_q1, policy)?;
    Ok((lhs - rhs).norm() / lhs.norm())
}

/// Relative residual of eta((h+iz)/k) = sqrt(i/z) chi(h,h',k) eta((h'+i/z)/k).
pub fn eta_transform_residual(h: i64, k: i64, z: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    if !(z.re > 0.0) {
        return Err(Error::domain(format!("need Re(z) > 0, got {z}")));
    }
    let d = modular_datum(h, k)?;
    let lhs = eta(&UpperHalfPoint::from_chart(h, k, z)?, policy);
    let tau_p = (Complex64::new(d.h_prime as f64, 0.0) + i_c() / z) / k as f64;
    let rhs = (i_c() / z).sqrt()
        * chi_multiplier(&d)
        * eta(&UpperHalfPoint::from_tau(tau_p)?, policy);
    Ok((lhs - rhs).norm() / lhs.norm())
}

/// Relative residual of
/// theta(w; (h+iz)/k) = chi^3 sqrt(i/z) e^{-pi*k*w^2/z} theta(iw/z; (h'+i/z)/k).
pub fn theta_transform_residual(
    w: Complex64,
    h: i64,
    k: i64,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    if !(z.re > 0.0) {
        return Err(Error::domain(format!("need Re(z) > 0, got {z}")));
    }
    let d = modular_datum(h, k)?;
    let lhs = theta(w, &UpperHalfPoint::from_chart(h, k, z)?, policy)?;
    let tau_p = (Complex64::new(d.h_prime as f64, 0.0) + i_c() / z) / k as f64;
    let chi = chi_multiplier(&d);
    let rhs = chi.powu(3)
        * (i_c() / z).sqrt()
        * (-PI * k as f64 * w * w / z).exp()
        * theta(i_c() * w / z, &UpperHalfPoint::from_tau(tau_p)?, policy)?;
    Ok((lhs - rhs).norm() / lhs.norm().max(1e-300))
}

/// Relative residual of the triple product identity
/// theta(u; tau) = -2 sin(pi*u) q^{1/8} (q)_inf (xq)_inf (x^{-1}q)_inf.
pub fn triple_product_residual(
    u: Complex64,
    tau: &UpperHalfPoint,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let lhs = theta(u, tau, policy)?;
    let q = tau.q();
    let x = (2.0 * PI * i_c() * u).exp();
    let one = Complex64::new(1.0, 0.0);
    let mut prod = one;
    let mut qn = one;
    let rho = q.norm();
    for n in 1..=policy.series_terms {
        qn *= q;
        prod *= (one - qn) * (one - x * qn) * (one - x.inv() * qn);
        if (1.0 + x.norm() + x.inv().norm()) * rho.powi(n as i32 + 1) / (1.0 - rho)
            < policy.target_abs_tol
        {
            break;
        }
    }
    let rhs = -2.0 * (PI * u).sin() * (PI * i_c() * tau.tau() / 4.0).exp() * prod;
    Ok((lhs - rhs).norm() / lhs.norm().max(1e-300))
}
