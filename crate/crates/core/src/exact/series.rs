use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Dense truncated Laurent series in x and q: integer coefficients indexed
/// by (m, n) with m in [-max_n, max_n] and 0 <= n <= q_trunc. The x-window
/// is tight because every factor used here couples |delta m| <= delta n.
#[derive(Debug, Clone)]
pub struct LaurentSeries {
    q_trunc: usize,
    /// rows[n][m + q_trunc]
    rows: Vec<Vec<BigInt>>,
}

impl LaurentSeries {
    /// The constant series 1.
    pub fn one(q_trunc: usize) -> Self {
        let width = 2 * q_trunc + 1;
        let mut rows = vec![vec![BigInt::zero(); width]; q_trunc + 1];
        rows[0][q_trunc] = BigInt::one();
        LaurentSeries { q_trunc, rows }
    }

    pub fn q_trunc(&self) -> usize {
        self.q_trunc
    }

    pub fn x_range(&self) -> (i64, i64) {
        (-(self.q_trunc as i64), self.q_trunc as i64)
    }

    pub fn coeff(&self, m: i64, n: usize) -> BigInt {
        if n > self.q_trunc || m.unsigned_abs() as usize > self.q_trunc {
            return BigInt::zero();
        }
        self.rows[n][(m + self.q_trunc as i64) as usize].clone()
    }

    pub(crate) fn coeff_ref(&self, m: i64, n: usize) -> &BigInt {
        &self.rows[n][(m + self.q_trunc as i64) as usize]
    }

    pub(crate) fn add_to_coeff(&mut self, m: i64, n: usize, delta: i64) {
        self.rows[n][(m + self.q_trunc as i64) as usize] += delta;
    }

    /// Multiplies in place by 1/(1 - x^s q^j) with s in {-1, +1}, j >= 1,
    /// using B(m,n) = A(m,n) + B(m - s, n - j). Exact, no truncation loss.
    pub fn mul_geometric_inverse(&mut self, s: i64, j: usize) {
        assert!(s == 1 || s == -1);
        assert!(j >= 1);
        let center = self.q_trunc as i64;
        for n in j..=self.q_trunc {
            let (earlier, current) = self.rows.split_at_mut(n);
            let src = &earlier[n - j];
            let dst = &mut current[0];
            // support is |m| <= n
            let lo = -(n as i64);
            let hi = n as i64;
            for m in lo..=hi {
                let sm = m - s;
                if sm.unsigned_abs() as usize <= n - j {
                    let add = src[(sm + center) as usize].clone();
                    if !add.is_zero() {
                        dst[(m + center) as usize] += add;
                    }
                }
            }
        }
    }

    /// Multiplies in place by the truncated (q)_infinity via the pentagonal
    /// number theorem: sum_j (-1)^j q^{j(3j-1)/2} over both signs of j.
    pub fn mul_euler_product(&mut self) {
        let mut pent: Vec<(usize, bool)> = vec![(0, true)];
        let mut j = 1usize;
        loop {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > self.q_trunc {
                break;
            }
            let neg = j % 2 == 1;
            pent.push((g1, !neg));
            let g2 = j * (3 * j + 1) / 2;
            if g2 <= self.q_trunc {
                pent.push((g2, !neg));
            }
            j += 1;
        }
        let center = self.q_trunc as i64;
        let mut out = vec![vec![BigInt::zero(); 2 * self.q_trunc + 1]; self.q_trunc + 1];
        for n in 0..=self.q_trunc {
            for &(g, positive) in &pent {
                if g > n {
                    continue;
                }
                let src = &self.rows[n - g];
                let bound = (n - g) as i64;
                for m in -bound..=bound {
                    let v = &src[(m + center) as usize];
                    if v.is_zero() {
                        continue;
                    }
                    if positive {
                        out[n][(m + center) as usize] += v;
                    } else {
                        out[n][(m + center) as usize] -= v;
                    }
                }
            }
        }
        self.rows = out;
    }
}
