//! Sieved arithmetic functions: μ(n), d(n) and the mollifier coefficients
//! λ_X(n).

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_X: u64 = 10_000_000;
pub const MAX_N: usize = 100_000_000;

/// μ(n) and d(n) for 0 <= n <= n (index 0 unused) by a linear sieve.
pub fn mobius_and_divisors(n: usize) -> (Vec<i8>, Vec<u16>) {
    let mut mu = vec![0i8; n + 1];
    let mut d = vec![0u16; n + 1];
    // exponent of the smallest prime factor
    let mut e = vec![0u8; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    if n >= 1 {
        mu[1] = 1;
        d[1] = 1;
    }
    for i in 2..=n {
        if d[i] == 0 {
            primes.push(i as u32);
            mu[i] = -1;
            d[i] = 2;
            e[i] = 1;
        }
        for &p in &primes {
            let p = p as usize;
            let m = i * p;
            if m > n {
                break;
            }
            if i % p == 0 {
                mu[m] = 0;
                e[m] = e[i] + 1;
                d[m] = d[i] / (e[i] as u16 + 1) * (e[i] as u16 + 2);
                break;
            }
            mu[m] = -mu[i];
            e[m] = 1;
            d[m] = d[i] * 2;
        }
    }
    (mu, d)
}

/// d(n) for n <= 1e7, shared by the divisor-sum checks.
pub(crate) fn shared_divisor_counts() -> &'static [u16] {
    static TABLE: OnceLock<Vec<u16>> = OnceLock::new();
    TABLE.get_or_init(|| mobius_and_divisors(super::DIVISOR_CAP).1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArithmeticTables {
    pub x: u64,
    pub n_max: usize,
    /// μ(n) for n <= max(X, n_max).
    pub mobius: Vec<i8>,
    /// λ_X(n) for n <= n_max: zero for n <= X, otherwise the sum of μ(d)
    /// over divisors d <= X.
    pub lambda: Vec<i16>,
    pub divisor_counts: Vec<u16>,
}

pub fn build_tables(x: u64, n_max: usize) -> Result<ArithmeticTables> {
    if !(1..=MAX_X).contains(&x) {
        return Err(Error::Budget(format!("X = {x} outside [1, {MAX_X}]")));
    }
    if n_max > MAX_N {
        return Err(Error::Budget(format!("n_max = {n_max} exceeds {MAX_N}")));
    }
    let size = n_max.max(x as usize);
    let (mobius, divisor_counts) = mobius_and_divisors(size);
    let mut lambda = vec![0i16; n_max + 1];
    let xs = x as usize;
    for dd in 1..=xs.min(n_max) {
        let m = mobius[dd] as i16;
        if m == 0 {
            continue;
        }
        // first multiple of dd above X
        let start = (xs / dd + 1) * dd;
        let mut k = start;
        while k <= n_max {
            lambda[k] += m;
            k += dd;
        }
    }
    Ok(ArithmeticTables { x, n_max, mobius, lambda, divisor_counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_mu(n: usize) -> i8 {
        let mut m = n;
        let mut sign = 1;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                m /= p;
                if m.is_multiple_of(p) {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if m > 1 {
            sign = -sign;
        }
        sign
    }

    #[test]
    fn sieve_matches_trial_division() {
        let (mu, d) = mobius_and_divisors(2000);
        for n in 1..=2000 {
            assert_eq!(mu[n], naive_mu(n), "mu({n})");
            let count = (1..=n).filter(|k| n % k == 0).count();
            assert_eq!(d[n] as usize, count, "d({n})");
        }
        assert_eq!(d[6], 4);
    }

    #[test]
    fn lambda_small_cases() {
        let t = build_tables(2, 20).unwrap();
        assert_eq!(t.lambda[1], 0);
        assert_eq!(t.lambda[2], 0);
        assert_eq!(t.lambda[3], 1);
        assert_eq!(t.lambda[4], 0);
        assert_eq!(t.lambda[6], 0);
    }

    #[test]
    fn budget_caps() {
        assert!(matches!(build_tables(0, 10), Err(Error::Budget(_))));
        assert!(matches!(build_tables(MAX_X + 1, 10), Err(Error::Budget(_))));
        assert!(matches!(build_tables(10, MAX_N + 1), Err(Error::Budget(_))));
    }
}
