//! Arithmetic in `Z_N`.

use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("{value} is not a unit modulo {modulus}")]
    NotUnit { value: u64, modulus: u64 },
    #[error("residue {value} is out of range for modulus {modulus}")]
    OutOfRange { value: u64, modulus: u64 },
}

pub fn check_modulus(n: u64) -> Result<(), RingError> {
    if n < 2 {
        Err(RingError::BadModulus(n))
    } else {
        Ok(())
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `true` iff `r` is invertible in `Z_n`.
pub fn is_unit(r: u64, n: u64) -> Result<bool, RingError> {
    check_modulus(n)?;
    if r >= n {
        return Err(RingError::OutOfRange { value: r, modulus: n });
    }
    Ok(gcd(r, n) == 1)
}

/// The units of `Z_n` in increasing order.
pub fn units(n: u64) -> Vec<u64> {
    (1..n).filter(|&r| gcd(r, n) == 1).collect()
}

pub fn inverse(r: u64, n: u64) -> Option<u64> {
    let (g, s, _) = ext_gcd(r as i128, n as i128);
    if g != 1 {
        return None;
    }
    Some(s.rem_euclid(n as i128) as u64)
}

/// Extended Euclid on integers: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Reduce a signed integer into `[0, n)`.
pub fn reduce(v: i128, n: u64) -> u64 {
    v.rem_euclid(n as i128) as u64
}

/// A unit `u` with `u * a == gcd(a, n) (mod n)`; `a` must be nonzero mod `n`.
pub(crate) fn normalizing_unit(a: u64, n: u64) -> u64 {
    let g = gcd(a, n);
    let m = n / g;
    if m == 1 {
        return 1;
    }
    // a/g is invertible mod n/g; lift its inverse to a unit mod n.
    let base = inverse((a / g) % m, m).expect("a/g is coprime to n/g");
    let mut u = base;
    while gcd(u, n) != 1 {
        u += m;
    }
    u % n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_examples() {
        assert_eq!(is_unit(2, 3), Ok(true));
        assert_eq!(is_unit(2, 8), Ok(false));
        assert_eq!(is_unit(5, 8), Ok(true));
        assert_eq!(is_unit(0, 1), Err(RingError::BadModulus(1)));
        assert!(is_unit(9, 8).is_err());
    }

    #[test]
    fn inverses() {
        for n in 2..30u64 {
            for r in units(n) {
                let inv = inverse(r, n).unwrap();
                assert_eq!(r * inv % n, 1 % n);
            }
        }
        assert_eq!(inverse(4, 8), None);
    }

    #[test]
    fn normalizing_unit_hits_gcd() {
        for n in 2..40u64 {
            for a in 1..n {
                let u = normalizing_unit(a, n);
                assert_eq!(gcd(u, n), 1, "u={u} n={n}");
                assert_eq!(u * a % n, gcd(a, n) % n, "a={a} n={n}");
            }
        }
    }
}
