use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Hard cap for brute-force partition enumeration. Enumeration is an oracle,
/// not a production path; the recurrence and series paths have no cap.
pub const ENUMERATION_CAP: u64 = 80;

/// An integer partition: parts sorted non-increasing, all parts >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::domain("partition parts must be >= 1"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn n(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Number of ones, o(lambda).
    pub fn ones(&self) -> u64 {
        self.parts.iter().filter(|&&p| p == 1).count() as u64
    }

    /// Number of parts strictly larger than o(lambda), mu(lambda).
    pub fn mu(&self) -> u64 {
        let o = self.ones();
        self.parts.iter().filter(|&&p| p > o).count() as u64
    }

    /// crank(lambda): largest part when there are no ones, otherwise
    /// mu(lambda) - o(lambda).
    pub fn crank(&self) -> Result<i64> {
        if self.parts.is_empty() {
            return Err(Error::domain("crank of the empty partition is undefined"));
        }
        let o = self.ones();
        if o == 0 {
            Ok(self.parts[0] as i64)
        } else {
            Ok(self.mu() as i64 - o as i64)
        }
    }
}

/// p(0), p(1), ..., p(max_n) by the Euler pentagonal-number recurrence.
pub fn partition_numbers_upto(max_n: u64) -> Vec<BigInt> {
    let max_n = max_n as usize;
    let mut p = vec![BigInt::zero(); max_n + 1];
    p[0] = BigInt::one();
    for n in 1..=max_n {
        let mut acc = BigInt::zero();
        let mut j = 1i64;
        loop {
            let g1 = (j * (3 * j - 1) / 2) as usize;
            if g1 > n {
                break;
            }
            let sign_pos = j % 2 == 1;
            if sign_pos {
                acc += &p[n - g1];
            } else {
                acc -= &p[n - g1];
            }
            let g2 = (j * (3 * j + 1) / 2) as usize;
            if g2 <= n {
                if sign_pos {
                    acc += &p[n - g2];
                } else {
                    acc -= &p[n - g2];
                }
            }
            j += 1;
        }
        p[n] = acc;
    }
    p
}

/// p(n) via the pentagonal recurrence.
pub fn partition_number(n: u64) -> BigInt {
    partition_numbers_upto(n).pop().unwrap()
}

/// Visits every partition of n in lexicographically descending order.
/// Errors above [`ENUMERATION_CAP`].
pub fn enumerate_partitions<F: FnMut(&[u64])>(n: u64, mut visit: F) -> Result<()> {
    if n > ENUMERATION_CAP {
        return Err(Error::capacity(format!(
            "partition enumeration capped at n <= {ENUMERATION_CAP}, got {n}"
        )));
    }
    let mut stack: Vec<u64> = Vec::new();
    fn descend<F: FnMut(&[u64])>(remaining: u64, max_part: u64, stack: &mut Vec<u64>, visit: &mut F) {
        if remaining == 0 {
            visit(stack);
            return;
        }
        let top = max_part.min(remaining);
        for part in (1..=top).rev() {
            stack.push(part);
            descend(remaining - part, part, stack, visit);
            stack.pop();
        }
    }
    descend(n, n.max(1), &mut stack, &mut visit);
    Ok(())
}
