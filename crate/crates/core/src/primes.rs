//! Deterministic primality and prime selection.

use crate::error::{invalid, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

/// `base^exp mod modulus` by square-and-multiply.
pub fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

// The first twelve primes are a deterministic Miller-Rabin witness set for
// every n < 3.3e24, which covers u64.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Exact primality test for any `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime closest to `target`; on a tie the larger prime wins.
pub fn nearest_prime(target: u64) -> Result<u64> {
    if target < 2 {
        return Err(invalid("nearest_prime needs a target of at least 2"));
    }
    let mut offset = 0u64;
    loop {
        if let Some(up) = target.checked_add(offset) {
            if is_prime(up) {
                return Ok(up);
            }
        }
        if let Some(down) = target.checked_sub(offset) {
            if is_prime(down) {
                return Ok(down);
            }
        }
        offset += 1;
    }
}

/// Smallest prime `≥ n`.
pub fn prime_at_least(n: u64) -> u64 {
    let mut p = n.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn known_values() {
        assert!(is_prime(997));
        assert!(!is_prime(1));
        assert!(is_prime(2309));
        // Strong pseudoprime to bases 2..=37 would be needed to fool this; check
        // a few classic composites and a large prime.
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(is_prime((1 << 61) - 1));
    }

    #[test]
    fn nearest_prime_examples() {
        assert_eq!(nearest_prime(100).unwrap(), 101);
        assert_eq!(nearest_prime(7).unwrap(), 7);
        assert_eq!(nearest_prime(2304).unwrap(), 2309);
        assert_eq!(nearest_prime(2).unwrap(), 2);
        // 4: 3 and 5 are both at distance 1.
        assert_eq!(nearest_prime(4).unwrap(), 5);
        assert!(nearest_prime(1).is_err());
    }

    #[test]
    fn prime_at_least_examples() {
        assert_eq!(prime_at_least(64), 67);
        assert_eq!(prime_at_least(4096), 4099);
        assert_eq!(prime_at_least(9216), 9221);
        assert_eq!(prime_at_least(0), 2);
    }

    #[test]
    fn pow_mod_matches_naive() {
        for m in [2u64, 7, 11, 97, 1009] {
            for b in 0..m {
                let mut naive = 1 % m;
                for e in 0..8 {
                    assert_eq!(pow_mod(b, e, m), naive);
                    naive = naive * b % m;
                }
            }
        }
    }
}
