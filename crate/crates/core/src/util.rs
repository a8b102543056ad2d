//! Small numeric helpers: deterministic reductions and exact-angle phases.

use num_complex::Complex64;

/// Pairwise (tree) summation. The reduction order depends only on the input
/// order, never on thread count, so results are bit-reproducible.
pub fn pairwise_sum_c64(terms: &[Complex64]) -> Complex64 {
    match terms.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => terms[0],
        2 => terms[0] + terms[1],
        n => {
            let (lo, hi) = terms.split_at(n / 2);
            pairwise_sum_c64(lo) + pairwise_sum_c64(hi)
        }
    }
}

/// Pairwise summation for reals, same reduction tree as [`pairwise_sum_c64`].
pub fn pairwise_sum_f64(terms: &[f64]) -> f64 {
    match terms.len() {
        0 => 0.0,
        1 => terms[0],
        2 => terms[0] + terms[1],
        n => {
            let (lo, hi) = terms.split_at(n / 2);
            pairwise_sum_f64(lo) + pairwise_sum_f64(hi)
        }
    }
}

/// e^{pi*i*num/den} with the angle reduced exactly modulo 2 before any
/// floating-point work. Large num*den products would otherwise lose the
/// angle to rounding.
pub fn unit_phase_pi(num: i128, den: i128) -> Complex64 {
    assert!(den != 0, "zero denominator in phase");
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let modulus = 2 * den;
    let r = num.rem_euclid(modulus);
    let angle = std::f64::consts::PI * (r as f64) / (den as f64);
    Complex64::from_polar(1.0, angle)
}

/// e^{2*pi*i*num/den}, reduced exactly modulo 1.
pub fn unit_phase_2pi(num: i128, den: i128) -> Complex64 {
    unit_phase_pi(2 * num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (1..=101).map(|i| 1.0 / i as f64).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum_f64(&xs) - naive).abs() < 1e-12);
    }

    #[test]
    fn phase_periodicity() {
        let a = unit_phase_2pi(3, 7);
        let b = unit_phase_2pi(3 + 7 * 1_000_000_007, 7);
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn phase_unit_modulus() {
        for num in [-5i128, 0, 1, 17, 123456789] {
            assert!((unit_phase_pi(num, 36).norm() - 1.0).abs() < 1e-15);
        }
    }
}
