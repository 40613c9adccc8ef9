use std::fmt;

use crate::error::{Error, Result};

/// An element of the prime field `F_q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldScalar {
    value: u32,
    modulus: u32,
}

/// Trial-division primality check; moduli here are tiny.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_modulus(q: u32) -> Result<()> {
    if !is_prime(q) || q >= 1 << 16 {
        return Err(Error::InvalidInput(format!(
            "field size {q} must be a prime below 65536"
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, q: u32) -> u32 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, q: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 * b as u64) % q as u64) as u32
}

pub(crate) fn pow_mod(mut a: u32, mut e: u64, q: u32) -> u32 {
    let mut r = 1 % q;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, q);
        }
        a = mul_mod(a, a, q);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo the prime `q`.
#[inline]
pub(crate) fn inv_mod(a: u32, q: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(q));
    pow_mod(a, (q - 2) as u64, q)
}

/// Reduce a signed integer into `[0, q)`.
pub(crate) fn reduce_i64(v: i64, q: u32) -> u32 {
    v.rem_euclid(q as i64) as u32
}

impl FieldScalar {
    pub fn new(value: i64, modulus: u32) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self {
            value: reduce_i64(value, modulus),
            modulus,
        })
    }

    pub(crate) fn raw(value: u32, modulus: u32) -> Self {
        Self { value, modulus }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, o: Self) -> Self {
        Self::raw(add_mod(self.value, o.value, self.modulus), self.modulus)
    }

    pub fn sub(self, o: Self) -> Self {
        Self::raw(sub_mod(self.value, o.value, self.modulus), self.modulus)
    }

    pub fn mul(self, o: Self) -> Self {
        Self::raw(mul_mod(self.value, o.value, self.modulus), self.modulus)
    }

    pub fn neg(self) -> Self {
        Self::raw(sub_mod(0, self.value, self.modulus), self.modulus)
    }

    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::raw(inv_mod(self.value, self.modulus), self.modulus))
    }

    pub fn pow(self, e: u64) -> Self {
        Self::raw(pow_mod(self.value, e, self.modulus), self.modulus)
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let a = FieldScalar::new(-1, 5).unwrap();
        assert_eq!(a.value(), 4);
        assert_eq!(a.mul(a).value(), 1);
        assert_eq!(a.inv().unwrap(), a);
        assert!(FieldScalar::new(1, 4).is_err());
        assert_eq!(
            FieldScalar::new(0, 7).unwrap().inv(),
            Err(Error::DivisionByZero)
        );
    }
}
