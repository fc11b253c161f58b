//! Arithmetic in the prime field `F_p`.
//!
//! A [`PrimeField`] is a validated modulus; [`Fp`] is a bare residue in
//! `[0, p)`. The modulus lives in the context, never in the element.

use std::fmt;

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive). Keeps every product below 2^62.
pub const MODULUS_LIMIT: u64 = 1 << 31;

/// A residue modulo the prime of some [`PrimeField`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(u32);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    /// Wraps a value already known to be reduced.
    #[inline]
    pub(crate) fn from_raw(v: u32) -> Fp {
        Fp(v)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MODULUS_LIMIT || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn elem(self, v: u64) -> Fp {
        Fp((v % self.p as u64) as u32)
    }

    #[inline]
    pub fn from_i64(self, v: i64) -> Fp {
        Fp(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_i128(self, v: i128) -> Fp {
        Fp(v.rem_euclid(self.p as i128) as u32)
    }

    #[inline]
    pub fn add(self, a: Fp, b: Fp) -> Fp {
        let s = a.0 as u64 + b.0 as u64;
        let p = self.p as u64;
        Fp(if s >= p { s - p } else { s } as u32)
    }

    #[inline]
    pub fn sub(self, a: Fp, b: Fp) -> Fp {
        if a.0 >= b.0 {
            Fp(a.0 - b.0)
        } else {
            Fp(a.0 + (self.p - b.0))
        }
    }

    #[inline]
    pub fn neg(self, a: Fp) -> Fp {
        if a.0 == 0 {
            a
        } else {
            Fp(self.p - a.0)
        }
    }

    #[inline]
    pub fn mul(self, a: Fp, b: Fp) -> Fp {
        Fp(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    pub fn pow(self, mut base: Fp, mut e: u64) -> Fp {
        let mut acc = Fp::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: Fp) -> Option<Fp> {
        if a.0 == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.from_i64(t0))
    }

    /// `C(n, k) mod p` by Lucas' theorem: the product of digit-wise binomials
    /// in base `p`.
    pub fn binomial(self, mut n: u64, mut k: u64) -> Fp {
        if k > n {
            return Fp::ZERO;
        }
        let p = self.p as u64;
        let mut acc = Fp::ONE;
        while k > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return Fp::ZERO;
            }
            acc = self.mul(acc, self.small_binomial(nd, kd));
            n /= p;
            k /= p;
        }
        acc
    }

    // C(n, k) for 0 <= k <= n < p; every factor is a unit.
    fn small_binomial(self, n: u64, k: u64) -> Fp {
        let k = k.min(n - k);
        let mut num = Fp::ONE;
        let mut den = Fp::ONE;
        for t in 0..k {
            num = self.mul(num, self.elem(n - t));
            den = self.mul(den, self.elem(t + 1));
        }
        self.mul(num, self.inv(den).expect("factorials below p are units"))
    }
}

/// `C(n, k) mod p`, validating `p`.
pub fn lucas_binomial(n: u64, k: u64, p: u64) -> Result<Fp> {
    Ok(PrimeField::new(p)?.binomial(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lucas_matches_exact_binomials() {
        use num_bigint::BigUint;
        for p in [2u64, 3, 5, 7, 11, 13] {
            for n in 0..=40u64 {
                let mut exact = BigUint::from(1u32);
                for k in 0..=n {
                    let expected = (&exact % p).to_u64_digits().first().copied().unwrap_or(0);
                    assert_eq!(
                        lucas_binomial(n, k, p).unwrap().value() as u64,
                        expected,
                        "C({n},{k}) mod {p}"
                    );
                    exact = exact * (n - k) / (k + 1);
                }
                assert_eq!(lucas_binomial(n, n + 1, p).unwrap(), Fp::ZERO);
            }
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(lucas_binomial(4, 2, 5).unwrap(), Fp(1));
        assert_eq!(lucas_binomial(7, 3, 5).unwrap(), Fp(0));
        assert_eq!(lucas_binomial(3, 5, 7).unwrap(), Fp(0));
        let row: Vec<u32> = (0..=6)
            .map(|h| lucas_binomial(6, h, 7).unwrap().value())
            .collect();
        assert_eq!(row, vec![1, 6, 1, 6, 1, 6, 1]);
    }

    #[test]
    fn rejects_composite_and_tiny_moduli() {
        for bad in [0, 1, 4, 9, 91, 1 << 31] {
            assert!(matches!(
                lucas_binomial(3, 1, bad),
                Err(Error::InvalidModulus(_))
            ));
        }
        assert!(PrimeField::new(2_147_483_647).is_ok());
    }

    #[test]
    fn inverse_and_pow() {
        let f = PrimeField::new(13).unwrap();
        for a in 1..13 {
            let inv = f.inv(f.elem(a)).unwrap();
            assert_eq!(f.mul(f.elem(a), inv), Fp::ONE);
            assert_eq!(f.pow(f.elem(a), 12), Fp::ONE);
        }
        assert_eq!(f.inv(Fp::ZERO), None);
    }

    proptest! {
        #[test]
        fn add_sub_neg_consistent(a in 0u64..1000, b in 0u64..1000) {
            let f = PrimeField::new(997).unwrap();
            let (x, y) = (f.elem(a), f.elem(b));
            prop_assert_eq!(f.sub(f.add(x, y), y), x);
            prop_assert_eq!(f.add(x, f.neg(x)), Fp::ZERO);
        }
    }
}
