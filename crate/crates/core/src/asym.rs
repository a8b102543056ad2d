//! The asymptotic engine: enumeration of the (delta, m) exponent data, the
//! circle-method expansion of the crank coefficients A~(a/c;n), the
//! truncated Rademacher series for p(n), the class counts M(a,c;n), and the
//! j-indexed crank difference decomposition.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::{l_shift, Rational};
use crate::special::bessel_i_3_2;
use crate::sums::{btilde, d_sum, kloosterman_a};
use crate::util::{pairwise_sum_c64, unit_phase_2pi};

const PI: f64 = std::f64::consts::PI;

/// Trial-division primality for the small moduli used here.
pub fn is_prime(c: i64) -> bool {
    if c < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= c {
        if c % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TermSign {
    Plus,
    Minus,
}

/// One retained term of the c-nondivisible branch: exact exponent delta > 0
/// and the integer shift m fed to the D sum.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaTerm {
    pub k: i64,
    pub r: i64,
    pub sign: TermSign,
    pub l: i64,
    #[serde(serialize_with = "serialize_rational")]
    pub delta: Rational,
    pub m_shift: i64,
}

fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// All (r, sign) with delta > 0 for the given (a, c, k), c not dividing k.
/// The m shifts are exact integers; the minus-sign shift uses the closed
/// form -beta(beta-1)/2 + 1 + r(1+beta) with beta = (ak-l)/c, which is the
/// integral completion of the series expansion (the printed expansion form
/// fails integrality when beta is odd).
pub fn enumerate_delta_terms(a: i64, c: i64, k: i64) -> Result<Vec<DeltaTerm>> {
    if c < 3 || c.is_even() {
        return Err(Error::domain(format!("need odd c >= 3, got {c}")));
    }
    let a_red = a.rem_euclid(c);
    if a_red == 0 || a_red.gcd(&c) != 1 {
        return Err(Error::domain(format!("need gcd(a,c)=1 with c not dividing a, got ({a},{c})")));
    }
    if k < 1 || k % c == 0 {
        return Err(Error::domain(format!("need c not dividing k, got c={c}, k={k}")));
    }
    let l = l_shift(a_red, c, k)?;
    debug_assert_eq!((a * k - l).rem_euclid(c), 0);
    let beta = (a * k - l) / c;
    let lc = Ratio::new(l, c);
    let mut terms = Vec::new();
    // delta^+ = 1/24 + (l/c)^2/2 - (1/2 + r) l/c, decreasing in r
    for r in 0.. {
        let delta = Ratio::new(1, 24) + lc * lc / 2 - (Ratio::new(1, 2) + Ratio::from_integer(r)) * lc;
        if delta <= Ratio::from_integer(0) {
            break;
        }
        let m_shift = -beta * (beta + 1) / 2 - r * beta;
        terms.push(DeltaTerm { k, r, sign: TermSign::Plus, l, delta, m_shift });
    }
    // delta^- = l/(2c) + (l/c)^2/2 - 23/24 - r(1 - l/c), decreasing in r
    for r in 0.. {
        let delta =
            lc / 2 + lc * lc / 2 - Ratio::new(23, 24) - Ratio::from_integer(r) * (Ratio::from_integer(1) - lc);
        if delta <= Ratio::from_integer(0) {
            break;
        }
        let m_shift = -beta * (beta - 1) / 2 + 1 + r * (1 + beta);
        terms.push(DeltaTerm { k, r, sign: TermSign::Minus, l, delta, m_shift });
    }
    Ok(terms)
}

/// delta_0 = 1/(2c^2) + 1/24 - 1/(2c), the supremum of all retained
/// exponents for a given c.
pub fn delta_zero(c: i64) -> Rational {
    Ratio::new(1, 2 * c * c) + Ratio::new(1, 24) - Ratio::new(1, 2 * c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AsymTarget {
    CrankCoeff,
    Partition,
    ClassCount,
    CrankDifference,
}

/// Evaluated expansion with its per-k decomposition. `main_value` is the
/// real part of the assembled sum; `residual_estimate` is the magnitude of
/// the imaginary part, which would vanish in exact arithmetic.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticBreakdown {
    pub target: AsymTarget,
    pub a: i64,
    pub b: Option<i64>,
    pub c: i64,
    pub n: u64,
    pub main_value: f64,
    pub per_k_terms: Vec<(i64, f64)>,
    pub cutoff: i64,
    pub residual_estimate: f64,
}

fn isqrt(n: u64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while (r + 1) * (r + 1) <= n as i64 {
        r += 1;
    }
    while r * r > n as i64 {
        r -= 1;
    }
    r
}

/// The assembled right side of the expansion of A~(a/c;n): the c|k branch
/// weighted by 4*sqrt(3)*i/sqrt(24n-1) with kernel sinh(pi*sqrt(24n-1)/6k),
/// and the c-nondivisible branch weighted by 8*sqrt(3)*sin(pi*a/c)/sqrt(24n-1)
/// with kernel sinh(pi*sqrt(2*delta*(24n-1))/(sqrt(3)*k)). Returns the per-k
/// complex contributions in k order.
fn expansion_terms(a: i64, c: i64, n: u64, cutoff: i64) -> Result<Vec<(i64, Complex64)>> {
    let nf = 24.0 * n as f64 - 1.0;
    let root = nf.sqrt();
    let sin_ac = (PI * a.rem_euclid(c) as f64 / c as f64).sin();
    let i_c = Complex64::new(0.0, 1.0);
    (1..=cutoff)
        .into_par_iter()
        .map(|k| {
            let kf = k as f64;
            let term = if k % c == 0 {
                let b = btilde(a, c, k, -(n as i64), 0)?;
                4.0 * 3.0f64.sqrt() * i_c / root * b / kf.sqrt() * (PI * root / (6.0 * kf)).sinh()
            } else {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in enumerate_delta_terms(a, c, k)? {
                    let d = d_sum(a, c, k, -(n as i64), t.m_shift)?;
                    let delta = t.delta.to_f64().expect("small rational");
                    acc += d / kf.sqrt() * (PI * (2.0 * delta * nf).sqrt() / (3.0f64.sqrt() * kf)).sinh();
                }
                8.0 * 3.0f64.sqrt() * sin_ac / root * acc
            };
            Ok((k, term))
        })
        .collect()
}

/// A~(a/c;n) by the truncated expansion with Farey cutoff floor(sqrt(n)).
pub fn crank_coeff_asym(a: i64, c: i64, n: u64) -> Result<AsymptoticBreakdown> {
    if !is_prime(c) || c.is_even() {
        return Err(Error::domain(format!("need an odd prime c, got {c}")));
    }
    if a <= 0 || a >= c {
        return Err(Error::domain(format!("need 0 < a < c, got a={a}")));
    }
    if n < 1 {
        return Err(Error::domain("need n >= 1"));
    }
    let cutoff = isqrt(n);
    let terms = expansion_terms(a, c, n, cutoff)?;
    let complex_terms: Vec<Complex64> = terms.iter().map(|&(_, t)| t).collect();
    let total = pairwise_sum_c64(&complex_terms);
    Ok(AsymptoticBreakdown {
        target: AsymTarget::CrankCoeff,
        a,
        b: None,
        c,
        n,
        main_value: total.re,
        per_k_terms: terms.into_iter().map(|(k, t)| (k, t.re)).collect(),
        cutoff,
        residual_estimate: total.im.abs(),
    })
}

/// Truncated Rademacher series
/// p(n) ~ 2*pi*(24n-1)^{-3/4} sum_{k<=k_max} A_k(n)/k * I_{3/2}(pi*sqrt(24n-1)/6k).
pub fn partition_asym(n: u64, k_max: i64) -> Result<AsymptoticBreakdown> {
    if n < 1 || k_max < 1 {
        return Err(Error::domain(format!("need n >= 1 and k_max >= 1, got n={n}, k_max={k_max}")));
    }
    let nf = 24.0 * n as f64 - 1.0;
    let front = 2.0 * PI * nf.powf(-0.75);
    let terms: Vec<(i64, Complex64)> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let ak = kloosterman_a(k, n as i64)?;
            let kernel = bessel_i_3_2(PI * nf.sqrt() / (6.0 * k as f64))?;
            Ok((k, front * ak / k as f64 * kernel))
        })
        .collect::<Result<_>>()?;
    let complex_terms: Vec<Complex64> = terms.iter().map(|&(_, t)| t).collect();
    let total = pairwise_sum_c64(&complex_terms);
    Ok(AsymptoticBreakdown {
        target: AsymTarget::Partition,
        a: 0,
        b: None,
        c: 1,
        n,
        main_value: total.re,
        per_k_terms: terms.into_iter().map(|(k, t)| (k, t.re)).collect(),
        cutoff: k_max,
        residual_estimate: total.im.abs(),
    })
}

/// |truncated Rademacher series - p(n)| evaluated in multi-precision
/// arithmetic. f64 runs out of mantissa near n = 330 (p(n) > 2^53), so the
/// rounding claim |series - p(n)| < 1/2 is checked here with working
/// precision scaled to the leading term e^{pi sqrt(24n-1)/6} plus 96 guard
/// bits. The phase of each A_k(n) summand is an exact rational multiple of
/// pi (Dedekind sum minus 2nh/k), reduced mod 2 in integers before any
/// rounding happens.
pub fn rademacher_gap(n: u64, k_max: i64) -> Result<f64> {
    use astro_float::{BigFloat, Consts, Radix, RoundingMode};

    if n < 1 || k_max < 1 {
        return Err(Error::domain(format!("need n >= 1 and k_max >= 1, got n={n}, k_max={k_max}")));
    }
    let rm = RoundingMode::ToEven;
    let nf_int = 24i128 * n as i128 - 1;
    let x1 = PI * (nf_int as f64).sqrt() / 6.0;
    // from_i128 needs at least 128 bits of precision to hold its input
    let p = ((x1 * std::f64::consts::LOG2_E).ceil() as usize + 96).max(128);
    let mut cc = Consts::new()
        .map_err(|e| Error::capacity(format!("constants cache allocation failed: {e:?}")))?;
    let pi = cc.pi(p, rm);
    let nf = BigFloat::from_i128(nf_int, p);
    let sqrt_nf = nf.sqrt(p, rm);
    // front = 2 pi nf^{-3/4}; nf^{3/4} = sqrt(nf * sqrt(nf))
    let front = BigFloat::from_i8(2, p)
        .mul(&pi, p, rm)
        .div(&nf.mul(&sqrt_nf, p, rm).sqrt(p, rm), p, rm);
    let mut total = BigFloat::from_i8(0, p);
    for k in 1..=k_max {
        // A_k(n) = sum_h cos(pi r_h), r_h = s(h,k) - 2nh/k as exact rational
        let mut ak = BigFloat::from_i8(0, p);
        for h in 0..k.max(1) {
            if k > 1 && (h == 0 || h.gcd(&k) != 1) {
                continue;
            }
            let s = crate::modular::dedekind_sum(h, k)?;
            let den = (*s.denom() as i128) * k as i128;
            let num = (*s.numer() as i128) * k as i128
                - 2 * n as i128 * h as i128 * (*s.denom() as i128);
            let num = num.rem_euclid(2 * den);
            let r = BigFloat::from_i128(num, p).div(&BigFloat::from_i128(den, p), p, rm);
            ak = ak.add(&r.mul(&pi, p, rm).cos(p, rm, &mut cc), p, rm);
        }
        let x = pi.mul(&sqrt_nf, p, rm).div(&BigFloat::from_i64(6 * k, p), p, rm);
        // I_{3/2}(x) = sqrt(2/(pi x)) (cosh x - sinh x / x)
        let bracket = x.cosh(p, rm, &mut cc).sub(&x.sinh(p, rm, &mut cc).div(&x, p, rm), p, rm);
        let kernel = BigFloat::from_i8(2, p)
            .div(&pi.mul(&x, p, rm), p, rm)
            .sqrt(p, rm)
            .mul(&bracket, p, rm);
        let term = front
            .mul(&ak, p, rm)
            .div(&BigFloat::from_i64(k, p), p, rm)
            .mul(&kernel, p, rm);
        total = total.add(&term, p, rm);
    }
    let exact = BigFloat::parse(
        &crate::exact::partition_number(n).to_string(),
        Radix::Dec,
        p,
        rm,
        &mut cc,
    );
    let gap = total.sub(&exact, p, rm).abs();
    // the gap itself is small, so its decimal rendering fits f64
    Ok(format!("{gap}").parse::<f64>().unwrap_or(f64::INFINITY))
}

/// M(a,c;n) ~ (1/c) p(n) + (1/c) sum_{j=1}^{c-1} zeta_c^{-aj} A~(j/c;n),
/// with p(n) from the truncated Rademacher series at the same cutoff.
pub fn class_count_asym(a: i64, c: i64, n: u64) -> Result<AsymptoticBreakdown> {
    if !is_prime(c) || c.is_even() {
        return Err(Error::domain(format!("need an odd prime c, got {c}")));
    }
    if a < 0 || a >= c {
        return Err(Error::domain(format!("need 0 <= a < c, got a={a}")));
    }
    let cutoff = isqrt(n);
    let p_part = partition_asym(n, cutoff)?;
    let mut per_k: Vec<(i64, Complex64)> = p_part
        .per_k_terms
        .iter()
        .map(|&(k, t)| (k, Complex64::new(t / c as f64, 0.0)))
        .collect();
    for j in 1..c {
        let zeta = unit_phase_2pi(-(a as i128) * j as i128, c as i128);
        for (idx, (_, t)) in expansion_terms(j, c, n, cutoff)?.into_iter().enumerate() {
            per_k[idx].1 += zeta * t / c as f64;
        }
    }
    let complex_terms: Vec<Complex64> = per_k.iter().map(|&(_, t)| t).collect();
    let total = pairwise_sum_c64(&complex_terms);
    Ok(AsymptoticBreakdown {
        target: AsymTarget::ClassCount,
        a,
        b: None,
        c,
        n,
        main_value: total.re,
        per_k_terms: per_k.into_iter().map(|(k, t)| (k, t.re)).collect(),
        cutoff,
        residual_estimate: total.im.abs(),
    })
}

/// rho_j(a,b,c) = cos(2*pi*a*j/c) - cos(2*pi*b*j/c).
pub fn rho_weight(a: i64, b: i64, c: i64, j: i64) -> f64 {
    (2.0 * PI * ((a * j).rem_euclid(c)) as f64 / c as f64).cos()
        - (2.0 * PI * ((b * j).rem_euclid(c)) as f64 / c as f64).cos()
}

/// The j-indexed pieces of M(a,c;n) - M(b,c;n): the c|k branch S_j and the
/// two signed c-nondivisible branches T_j^+ and T_j^-.
#[derive(Debug, Clone, Serialize)]
pub struct DifferenceSplit {
    pub j: i64,
    pub s_j: f64,
    pub t_j_plus: f64,
    pub t_j_minus: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrankDifferenceBreakdown {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub n: u64,
    pub splits: Vec<DifferenceSplit>,
    pub main_value: f64,
    pub cutoff: i64,
    pub residual_estimate: f64,
}

/// M(a,c;n) - M(b,c;n) as sum_j (S_j + T_j^+ + T_j^-) with weights rho_j.
/// S_j carries 8*sqrt(3)*i/(c*sqrt(24n-1)) and T_j^i carries
/// 16*sqrt(3)*sin(pi*j/c)/(c*sqrt(24n-1)).
pub fn crank_difference_asym(a: i64, b: i64, c: i64, n: u64) -> Result<CrankDifferenceBreakdown> {
    if !is_prime(c) || c.is_even() {
        return Err(Error::domain(format!("need an odd prime c, got {c}")));
    }
    if !(0 <= a && a < b || a == b) || b > (c - 1) / 2 || a < 0 {
        return Err(Error::domain(format!(
            "need 0 <= a <= b <= (c-1)/2, got a={a}, b={b}, c={c}"
        )));
    }
    let cutoff = isqrt(n);
    let nf = 24.0 * n as f64 - 1.0;
    let root = nf.sqrt();
    let mut splits = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    for j in 1..=(c - 1) / 2 {
        let rho = rho_weight(a, b, c, j);
        let mut s_terms = Vec::new();
        let mut tp_terms = Vec::new();
        let mut tm_terms = Vec::new();
        let sin_jc = (PI * j as f64 / c as f64).sin();
        for k in 1..=cutoff {
            let kf = k as f64;
            if k % c == 0 {
                let bt = btilde(j, c, k, -(n as i64), 0)?;
                s_terms.push(
                    rho * 8.0 * 3.0f64.sqrt() * Complex64::new(0.0, 1.0) / (c as f64 * root) * bt
                        / kf.sqrt()
                        * (PI * root / (6.0 * kf)).sinh(),
                );
            } else {
                for t in enumerate_delta_terms(j, c, k)? {
                    let d = d_sum(j, c, k, -(n as i64), t.m_shift)?;
                    let delta = t.delta.to_f64().expect("small rational");
                    let v = rho * 16.0 * 3.0f64.sqrt() * sin_jc / (c as f64 * root) * d / kf.sqrt()
                        * (PI * (2.0 * delta * nf).sqrt() / (3.0f64.sqrt() * kf)).sinh();
                    match t.sign {
                        TermSign::Plus => tp_terms.push(v),
                        TermSign::Minus => tm_terms.push(v),
                    }
                }
            }
        }
        let s = pairwise_sum_c64(&s_terms);
        let tp = pairwise_sum_c64(&tp_terms);
        let tm = pairwise_sum_c64(&tm_terms);
        total += s + tp + tm;
        splits.push(DifferenceSplit { j, s_j: s.re, t_j_plus: tp.re, t_j_minus: tm.re });
    }
    Ok(CrankDifferenceBreakdown {
        a,
        b,
        c,
        n,
        splits,
        main_value: total.re,
        cutoff,
        residual_estimate: total.im.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{crank_class_count, crank_coeff_exact, crank_table, Convention};
    use num_traits::ToPrimitive;

    #[test]
    fn delta_terms_c13_k1_contain_delta_zero() {
        let terms = enumerate_delta_terms(1, 13, 1).unwrap();
        let plus0 = terms.iter().find(|t| t.sign == TermSign::Plus && t.r == 0).unwrap();
        assert_eq!(plus0.delta, delta_zero(13));
        assert!(plus0.delta > Ratio::from_integer(0));
    }

    #[test]
    fn delta_terms_c5_k1_no_plus_terms() {
        // delta_0(5) < 0, so the k=1 list is empty for both signs
        let terms = enumerate_delta_terms(1, 5, 1).unwrap();
        assert!(terms.is_empty(), "got {terms:?}");
        assert!(delta_zero(5) < Ratio::from_integer(0));
    }

    #[test]
    fn m_shifts_integral_and_deltas_bounded_exhaustively() {
        for c in [3i64, 5, 7, 9, 11, 13] {
            let d0 = delta_zero(c);
            for a in 1..c {
                if num_integer::Integer::gcd(&a, &c) != 1 {
                    continue;
                }
                for k in 1..=60i64 {
                    if k % c == 0 {
                        continue;
                    }
                    let terms = enumerate_delta_terms(a, c, k).unwrap();
                    let mut plus0 = None;
                    let mut minus0 = None;
                    for t in &terms {
                        // exact recomputation of delta from the definition
                        let lc = Ratio::new(t.l, c);
                        let expect = match t.sign {
                            TermSign::Plus => {
                                Ratio::new(1, 24) + lc * lc / 2
                                    - (Ratio::new(1, 2) + Ratio::from_integer(t.r)) * lc
                            }
                            TermSign::Minus => {
                                lc / 2 + lc * lc / 2
                                    - Ratio::new(23, 24)
                                    - Ratio::from_integer(t.r) * (Ratio::from_integer(1) - lc)
                            }
                        };
                        assert_eq!(t.delta, expect);
                        assert!(t.delta <= d0, "delta exceeds delta_0 at c={c} a={a} k={k}");
                        // integrality of the m shift against the rational form
                        let half = Ratio::new(1, 2 * c * c);
                        let l = t.l;
                        let m_rat = match t.sign {
                            TermSign::Plus => {
                                half * Ratio::from_integer(
                                    -a * a * k * k + 2 * l * a * k
                                        - a * k * c
                                        - l * l
                                        + l * c
                                        - 2 * a * t.r * k * c
                                        + 2 * l * c * t.r,
                                )
                            }
                            TermSign::Minus => {
                                half * Ratio::from_integer(
                                    -a * a * k * k + 2 * l * a * k - l * l
                                        + 2 * c * c
                                        - l * c
                                        + 2 * t.r * c * c
                                        - 2 * t.r * l * c
                                        + a * k * c
                                        + 2 * t.r * k * a * c,
                                )
                            }
                        };
                        assert!(m_rat.is_integer(), "c={c} a={a} k={k} r={} {:?}", t.r, t.sign);
                        assert_eq!(m_rat.to_integer(), t.m_shift);
                        if t.r == 0 {
                            match t.sign {
                                TermSign::Plus => plus0 = Some(t.delta),
                                TermSign::Minus => minus0 = Some(t.delta),
                            }
                        }
                    }
                    if let (Some(p), Some(m)) = (plus0, minus0) {
                        assert!(m < p, "delta^-(0) >= delta^+(0) at c={c} a={a} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn coeff_asym_tracks_exact_c3() {
        let t = crank_table(200, Convention::GeneratingFunction).unwrap();
        // n = 50: the exact coefficient is only -8, so the O(n^eps)
        // truncation error is checked against the coefficient scale
        let exact50 = crank_coeff_exact(1, 3, 50, &t).unwrap();
        let asym50 = crank_coeff_asym(1, 3, 50).unwrap();
        assert!(
            (asym50.main_value - exact50).abs() < 0.5 * exact50.abs(),
            "exact {exact50}, asym {}",
            asym50.main_value
        );
        let exact = crank_coeff_exact(1, 3, 200, &t).unwrap();
        let asym = crank_coeff_asym(1, 3, 200).unwrap();
        let rel = (asym.main_value - exact).abs() / exact.abs();
        assert!(rel < 0.01, "exact {exact}, asym {}, rel {rel}", asym.main_value);
        assert!(asym.residual_estimate < 1e-6 * exact.abs());
    }

    #[test]
    fn coeff_asym_congruence_row_stays_small() {
        // exact coefficient at (1,5,4) is 0; the truncation error must be
        // far below the main-term scale of a neighboring non-congruence n
        let asym = crank_coeff_asym(1, 5, 4).unwrap();
        let neighbor = crank_coeff_asym(1, 5, 6).unwrap();
        assert!(asym.main_value.abs() < 0.5 * neighbor.main_value.abs().max(1.0));
    }

    #[test]
    fn coeff_asym_conjugate_symmetry() {
        let lhs = crank_coeff_asym(2, 7, 100).unwrap();
        let rhs = crank_coeff_asym(5, 7, 100).unwrap();
        assert!((lhs.main_value - rhs.main_value).abs() < 1e-9);
        assert!(lhs.residual_estimate < 1e-6 * lhs.main_value.abs().max(1.0));
    }

    #[test]
    fn partition_asym_rounds_to_exact() {
        for (n, k_max, expect) in [(10u64, 5i64, 42.0), (100, 10, 190569292.0), (1, 1, 1.0)] {
            let v = partition_asym(n, k_max).unwrap();
            assert!((v.main_value - expect).abs() < 0.5, "n={n}: got {}", v.main_value);
        }
    }

    #[test]
    fn rademacher_gap_beyond_f64_mantissa() {
        // p(400) ~ 6.7e21 overflows 2^53; the multi-precision path must
        // still certify rounding to the exact value
        for (n, tol) in [(50u64, 0.05), (400, 0.05), (664, 0.05)] {
            let k_max = ((n as f64).sqrt().floor() as i64).max(1);
            let gap = rademacher_gap(n, k_max).unwrap();
            assert!(gap < tol, "n={n}: gap {gap}");
        }
        assert!(rademacher_gap(0, 1).is_err());
        // agreement with the f64 evaluation where f64 is trustworthy
        let f64_gap = (partition_asym(100, 10).unwrap().main_value - 190569292.0).abs();
        let hp_gap = rademacher_gap(100, 10).unwrap();
        assert!((f64_gap - hp_gap).abs() < 1e-6, "{f64_gap} vs {hp_gap}");
    }

    #[test]
    fn class_count_asym_small_case() {
        let v = class_count_asym(0, 5, 4).unwrap();
        assert!((v.main_value - 1.0).abs() < 0.3, "got {}", v.main_value);
    }

    #[test]
    fn class_count_asym_resums_to_partition() {
        for c in [5i64, 7, 11, 13] {
            for n in [50u64, 200] {
                let p = partition_asym(n, isqrt(n)).unwrap().main_value;
                let total: f64 = (0..c).map(|a| class_count_asym(a, c, n).unwrap().main_value).sum();
                assert!((total - p).abs() < 1e-9 * p.abs().max(1.0), "c={c} n={n}: {total} vs {p}");
            }
        }
    }

    #[test]
    fn class_count_asym_matches_exact_c7() {
        let t = crank_table(200, Convention::GeneratingFunction).unwrap();
        let exact = crank_class_count(2, 7, 200, &t).unwrap().to_f64().unwrap();
        let asym = class_count_asym(2, 7, 200).unwrap().main_value;
        assert!((asym - exact).abs() / exact < 1e-4, "exact {exact}, asym {asym}");
    }

    #[test]
    fn difference_zero_when_a_equals_b() {
        let v = crank_difference_asym(1, 1, 7, 60).unwrap();
        assert_eq!(v.main_value, 0.0);
        for s in &v.splits {
            assert_eq!(s.s_j, 0.0);
            assert_eq!(s.t_j_plus, 0.0);
        }
    }

    #[test]
    fn difference_sign_matches_exact_c5() {
        let t = crank_table(30, Convention::GeneratingFunction).unwrap();
        // d = 4 rows are congruence rows: the exact difference is 0
        let e24 = crank_class_count(0, 5, 24, &t).unwrap() - crank_class_count(1, 5, 24, &t).unwrap();
        assert_eq!(e24.to_f64().unwrap(), 0.0);
        // d = 0 row: exact difference positive, asymptotic sign agrees
        let e25 = (crank_class_count(0, 5, 25, &t).unwrap()
            - crank_class_count(1, 5, 25, &t).unwrap())
        .to_f64()
        .unwrap();
        assert!(e25 > 0.0);
        let asym = crank_difference_asym(0, 1, 5, 25).unwrap();
        assert!(asym.main_value > 0.0, "got {}", asym.main_value);
    }

    #[test]
    fn difference_matches_class_count_difference() {
        // consistency of the two assembly routes at moderate n
        let n = 150u64;
        let direct = crank_difference_asym(0, 2, 7, n).unwrap().main_value;
        let count0 = class_count_asym(0, 7, n).unwrap().main_value;
        let count2 = class_count_asym(2, 7, n).unwrap().main_value;
        // subtracting the two class counts cancels the giant p(n)/c parts,
        // so the achievable agreement scales with the count magnitude
        assert!(
            (direct - (count0 - count2)).abs() < 1e-12 * count0.abs(),
            "direct {direct}, via counts {}",
            count0 - count2
        );
    }

    #[test]
    fn relative_error_decreases_with_n() {
        let t = crank_table(400, Convention::GeneratingFunction).unwrap();
        let mut rels = Vec::new();
        for n in [100usize, 225, 400] {
            let exact = crank_coeff_exact(1, 3, n, &t).unwrap();
            let asym = crank_coeff_asym(1, 3, n as u64).unwrap().main_value;
            rels.push((asym - exact).abs() / exact.abs());
        }
        assert!(rels[0] > rels[1] && rels[1] > rels[2], "rels {rels:?}");
    }

    #[test]
    fn per_k_bound_monotone_beyond_c() {
        // the envelope sinh(pi*sqrt(24n-1)/(6k)) * k/sqrt(k) decreases; the
        // phi(k) count is bounded by k since phi itself jumps around
        let n = 400u64;
        let nf = 24.0 * n as f64 - 1.0;
        let mut prev = f64::INFINITY;
        for k in 3..=20i64 {
            let bound = (PI * nf.sqrt() / (6.0 * k as f64)).sinh() * (k as f64).sqrt();
            assert!(
                crate::sums::euler_phi(k) as f64 / (k as f64).sqrt()
                    * (PI * nf.sqrt() / (6.0 * k as f64)).sinh()
                    <= bound
            );
            assert!(bound <= prev, "k={k}");
            prev = bound;
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(crank_coeff_asym(1, 9, 50).is_err()); // 9 is not prime
        assert!(crank_coeff_asym(0, 5, 50).is_err());
        assert!(class_count_asym(5, 5, 50).is_err());
        assert!(crank_difference_asym(2, 1, 7, 50).is_err());
        assert!(enumerate_delta_terms(1, 5, 10).is_err());
    }
}
