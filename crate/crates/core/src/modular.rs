//! Exact modular arithmetic substrate: saw-tooth sums, Dedekind sums, the
//! eta multiplier omega_{h,k}, the chi multiplier, Farey sequences, and the
//! residue shift l used by the non-divisible transformation branch.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::util::unit_phase_pi;

pub type Rational = Ratio<i64>;

/// ((x)) = x - floor(x) - 1/2 for non-integer x, and 0 for integer x.
pub fn sawtooth(x: Rational) -> Rational {
    if x.is_integer() {
        Rational::new(0, 1)
    } else {
        x - x.floor() - Rational::new(1, 2)
    }
}

/// Dedekind sum s(h,k) = sum over residues mu mod k of ((mu/k))((h*mu/k)),
/// computed by direct summation in exact rationals. Reciprocity is used as
/// a test of this function, never as its implementation.
pub fn dedekind_sum(h: i64, k: i64) -> Result<Rational> {
    if k < 1 {
        return Err(Error::domain(format!("dedekind_sum needs k >= 1, got {k}")));
    }
    if h.rem_euclid(k).gcd(&k) != 1 {
        return Err(Error::domain(format!("dedekind_sum needs gcd(h,k)=1, got ({h},{k})")));
    }
    let mut acc = Rational::new(0, 1);
    for mu in 1..k {
        acc += sawtooth(Rational::new(mu, k)) * sawtooth(Rational::new(h * mu, k));
    }
    Ok(acc)
}

/// A primitive residue pair (h, h') mod k together with the exact Dedekind
/// sum and the eta multiplier omega_{h,k} = exp(pi*i*s(h,k)).
///
/// h' is the least non-negative solution of h*h' = -1 mod k when k is odd,
/// and mod 2k when k is even. Any representative of that class gives the
/// same exponential sums; one is fixed for determinism.
#[derive(Debug, Clone)]
pub struct ModularDatum {
    pub h: i64,
    pub k: i64,
    pub h_prime: i64,
    pub s_hk: Rational,
    pub omega: Complex64,
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    // extended Euclid; returns the least non-negative inverse of a mod m
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        None
    } else {
        Some(old_s.rem_euclid(m))
    }
}

/// Builds the [`ModularDatum`] for a primitive pair (h, k).
pub fn modular_datum(h: i64, k: i64) -> Result<ModularDatum> {
    if k < 1 {
        return Err(Error::domain(format!("modular_datum needs k >= 1, got {k}")));
    }
    let h = h.rem_euclid(k.max(1));
    if h.gcd(&k) != 1 {
        return Err(Error::domain(format!("modular_datum needs gcd(h,k)=1, got ({h},{k})")));
    }
    let h_prime = if k == 1 {
        0
    } else if k.is_odd() {
        mod_inverse(h, k).map(|inv| (-inv).rem_euclid(k)).unwrap()
    } else {
        // k even: h is odd, so h is invertible mod 2k
        mod_inverse(h, 2 * k).map(|inv| (-inv).rem_euclid(2 * k)).unwrap()
    };
    let s_hk = dedekind_sum(h, k)?;
    let omega = unit_phase_pi(*s_hk.numer() as i128, *s_hk.denom() as i128);
    Ok(ModularDatum { h, k, h_prime, s_hk, omega })
}

/// chi(h,h',k) = i^{-1/2} * omega_{h,k}^{-1} * e^{-pi*i*(h'-h)/(12k)},
/// with i^{-1/2} = e^{-pi*i/4} (principal branch).
pub fn chi_multiplier(d: &ModularDatum) -> Complex64 {
    let i_pow = unit_phase_pi(-1, 4);
    let omega_inv = d.omega.conj(); // |omega| = 1
    let tail = unit_phase_pi(-(d.h_prime as i128 - d.h as i128), 12 * d.k as i128);
    i_pow * omega_inv * tail
}

/// One arc of the Farey dissection of order N: the reduced fraction h/k with
/// the denominators of its two Farey neighbours and the exact arc endpoints
/// theta' = 1/(k(k1+k)), theta'' = 1/(k(k2+k)).
#[derive(Debug, Clone)]
pub struct FareyArc {
    pub h: i64,
    pub k: i64,
    /// denominator of the left neighbour
    pub k1: i64,
    /// denominator of the right neighbour
    pub k2: i64,
    pub theta_minus: Rational,
    pub theta_plus: Rational,
}

/// All reduced fractions h/k with 0 <= h < k <= N, in increasing order, with
/// neighbour data. The 0/1 arc wraps: its left neighbour is (N-1)/N - 1 and
/// the last fraction's right neighbour is 1/1, so the arcs tile a full
/// period exactly.
pub fn farey_sequence(n_order: i64) -> Result<Vec<FareyArc>> {
    if n_order < 1 {
        return Err(Error::domain(format!("farey order must be >= 1, got {n_order}")));
    }
    // standard next-term recurrence for Farey fractions
    let mut fracs: Vec<(i64, i64)> = vec![(0, 1)];
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, n_order);
    while (c, d) != (1, 1) {
        fracs.push((c, d));
        let q = (n_order + b) / d;
        let (e, f) = (q * c - a, q * d - b);
        (a, b, c, d) = (c, d, e, f);
    }
    let m = fracs.len();
    let mut arcs = Vec::with_capacity(m);
    for (idx, &(h, k)) in fracs.iter().enumerate() {
        let k1 = if idx == 0 { n_order } else { fracs[idx - 1].1 };
        let k2 = if idx + 1 < m { fracs[idx + 1].1 } else { 1 };
        arcs.push(FareyArc {
            h,
            k,
            k1,
            k2,
            theta_minus: Rational::new(1, k * (k1 + k)),
            theta_plus: Rational::new(1, k * (k2 + k)),
        });
    }
    Ok(arcs)
}

/// The unique l with 0 < l < c and l = a*k mod c; undefined when c | k.
pub fn l_shift(a: i64, c: i64, k: i64) -> Result<i64> {
    if c < 1 || c.is_even() {
        return Err(Error::domain(format!("l_shift needs odd c >= 1, got {c}")));
    }
    if a <= 0 || a >= c || a.gcd(&c) != 1 {
        return Err(Error::domain(format!("l_shift needs 0 < a < c coprime, got ({a},{c})")));
    }
    let l = (a * k).rem_euclid(c);
    if l == 0 {
        return Err(Error::domain(format!("l_shift undefined for c | k: c={c}, k={k}")));
    }
    Ok(l)
}
