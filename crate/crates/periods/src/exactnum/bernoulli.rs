//! Bernoulli numbers in the positive even-index convention.
//!
//! `bernoulli(k)` returns the k-th entry of the sequence 1/6, 1/30, 1/42, ...
//! that appears in the even zeta-value identity
//! `zeta(2k) = 2^(2k-1)/(2k)! * B_k * pi^(2k)`. In terms of the signed
//! convention `B'_n` (with `B'_1 = -1/2`) this is `B_k = (-1)^(k+1) * B'_2k`.
//! The convention matters: other sources index or sign these differently.

use std::sync::OnceLock;

use num_bigint::BigInt;

use super::{NumError, Rational};

pub(crate) const MAX_INDEX: u32 = 64;

/// k-th Bernoulli number, positive convention (`B_1 = 1/6`), for 1 <= k <= 64.
pub fn bernoulli(k: u32) -> Result<Rational, NumError> {
    if k == 0 || k > MAX_INDEX {
        return Err(NumError::BernoulliRange(k));
    }
    let table = signed_table();
    let signed = &table[2 * k as usize];
    // (-1)^(k+1) * B'_2k is always positive.
    Ok(if k % 2 == 0 { -signed } else { signed.clone() })
}

/// Signed Bernoulli numbers B'_0 .. B'_(2*MAX_INDEX) by the defining
/// recurrence sum_{j=0}^{m} C(m+1, j) B'_j = 0, computed once.
fn signed_table() -> &'static Vec<Rational> {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = (2 * MAX_INDEX + 1) as usize;
        let mut values = Vec::with_capacity(n);
        values.push(Rational::one());
        for m in 1..n {
            let mut acc = Rational::zero();
            for (j, b) in values.iter().enumerate() {
                acc = &acc + &(&binomial(m as u64 + 1, j as u64) * b);
            }
            let div = Rational::from(BigInt::from(m as u64 + 1));
            values.push(-acc.checked_div(&div).expect("m+1 > 0"));
        }
        values
    })
}

pub(crate) fn binomial(n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k.min(n - k) {
        num *= n - i;
        den *= i + 1;
    }
    Rational::new(num, den).expect("binomial denominator positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn first_values() {
        assert_eq!(bernoulli(1).unwrap(), r("1/6"));
        assert_eq!(bernoulli(2).unwrap(), r("1/30"));
        assert_eq!(bernoulli(3).unwrap(), r("1/42"));
        assert_eq!(bernoulli(4).unwrap(), r("1/30"));
        assert_eq!(bernoulli(5).unwrap(), r("5/66"));
    }

    #[test]
    fn range_errors() {
        assert_eq!(bernoulli(0), Err(NumError::BernoulliRange(0)));
        assert_eq!(bernoulli(65), Err(NumError::BernoulliRange(65)));
        assert!(bernoulli(64).is_ok());
    }

    #[test]
    fn defining_recurrence_holds() {
        // sum_{j=0}^{m} C(m+1, j) B'_j = 0 for 1 <= m <= 40, reconstructing
        // the signed values from the positive-convention output.
        let signed = |n: usize| -> Rational {
            match n {
                0 => Rational::one(),
                1 => r("-1/2"),
                n if n % 2 == 1 => Rational::zero(),
                n => {
                    let k = (n / 2) as u32;
                    let b = bernoulli(k).unwrap();
                    if k % 2 == 0 {
                        -b
                    } else {
                        b
                    }
                }
            }
        };
        for m in 1..=40u64 {
            let mut acc = Rational::zero();
            for j in 0..=m {
                acc = &acc + &(&binomial(m + 1, j) * &signed(j as usize));
            }
            assert!(acc.is_zero(), "recurrence failed at m = {m}: {acc}");
        }
    }

    #[test]
    fn zeta_even_prefactors() {
        // zeta(2) = pi^2/6 and zeta(4) = pi^4/90 force the first two values.
        let z2 = &r("2/2") * &bernoulli(1).unwrap();
        assert_eq!(z2, r("1/6"));
        let z4 = &r("8/24") * &bernoulli(2).unwrap();
        assert_eq!(z4, r("1/90"));
    }
}
