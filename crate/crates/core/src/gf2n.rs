//! Arithmetic in GF(2^n) in a polynomial basis.
//!
//! Elements are plain `u64` words: bit `i` is the coefficient of `x^i` in the
//! residue polynomial. Moduli are `u128` words holding the full degree-`n`
//! polynomial, so the top bit sits at position `n` (up to 64).

use std::fmt;

use crate::error::{Error, Result};

/// Largest degree for which exhaustive loops over the field are allowed.
pub const EXHAUSTIVE_CAP: u32 = 24;

/// Largest supported degree for formula-only paths.
pub const MAX_DEGREE: u32 = 64;

/// An element of GF(2^n); only the low `n` bits may be set.
pub type Elem = u64;

/// The field GF(2^n) = GF(2)[x] / (modulus).
///
/// Immutable once built; every operation is a pure function of its inputs.
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    n: u32,
    modulus: u128,
    mask: u64,
    trace_mask: u64,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {}", self.n, self.modulus_hex())
    }
}

impl Field {
    /// Builds GF(2^n). Without a modulus the lexicographically smallest
    /// irreducible polynomial of degree `n` is used.
    pub fn new(n: u32, modulus: Option<u128>) -> Result<Self> {
        if !(2..=MAX_DEGREE).contains(&n) {
            return Err(Error::UnsupportedDegree(n));
        }
        let modulus = match modulus {
            Some(m) => {
                if poly_degree(m) != Some(n) {
                    return Err(Error::DegreeMismatch {
                        modulus: m,
                        expected: n,
                    });
                }
                if !is_irreducible(m) {
                    return Err(Error::ReducibleModulus { modulus: m });
                }
                m
            }
            None => default_modulus(n),
        };
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut field = Field {
            n,
            modulus,
            mask,
            trace_mask: 0,
        };
        // Tr is linear, so it is the parity of x masked by the traces of the basis.
        field.trace_mask = (0..n)
            .filter(|&i| field.trace_by_sum(1u64 << i) == 1)
            .fold(0, |acc, i| acc | (1u64 << i));
        Ok(field)
    }

    /// Builds the field from a hexadecimal modulus such as `"0x13"`.
    pub fn with_hex_modulus(n: u32, modulus: &str) -> Result<Self> {
        Field::new(n, Some(parse_modulus_hex(modulus)?))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn modulus_hex(&self) -> String {
        format!("{:#x}", self.modulus)
    }

    /// Mask of the valid element bits.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// `2^n - 1`, the order of the multiplicative group.
    pub fn group_order(&self) -> u64 {
        self.mask
    }

    /// Number of elements, for fields small enough to enumerate.
    pub fn size(&self) -> usize {
        assert!(self.n < usize::BITS, "field too large to enumerate");
        1usize << self.n
    }

    pub fn contains(&self, x: Elem) -> bool {
        x & !self.mask == 0
    }

    /// Fails unless the field is small enough for exhaustive enumeration.
    pub fn require_exhaustive(&self) -> Result<()> {
        require_exhaustive(self.n)
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        x ^ y
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.reduce(clmul(x, y))
    }

    #[inline]
    pub fn square(&self, x: Elem) -> Elem {
        self.reduce(clmul(x, x))
    }

    #[inline]
    fn reduce(&self, mut p: u128) -> Elem {
        let n = self.n;
        while p >> n != 0 {
            let top = 127 - p.leading_zeros();
            p ^= self.modulus << (top - n);
        }
        p as Elem
    }

    /// `x^e` by square-and-multiply, with `x^0 = 1` for every `x`.
    pub fn pow(&self, x: Elem, mut e: u64) -> Elem {
        let mut base = x;
        let mut acc = 1;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `x^(2^k)`.
    pub fn frobenius(&self, mut x: Elem, k: u32) -> Elem {
        for _ in 0..k % self.n {
            x = self.square(x);
        }
        x
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, x: Elem) -> Option<Elem> {
        (x != 0).then(|| self.pow(x, self.group_order() - 1))
    }

    /// `x / y`; panics on division by zero.
    pub fn div(&self, x: Elem, y: Elem) -> Elem {
        self.mul(x, self.inv(y).expect("division by zero in GF(2^n)"))
    }

    /// Absolute trace `Tr(x) = x + x^2 + ... + x^(2^(n-1))`.
    #[inline]
    pub fn trace(&self, x: Elem) -> u8 {
        ((x & self.trace_mask).count_ones() & 1) as u8
    }

    fn trace_by_sum(&self, x: Elem) -> u8 {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.n {
            acc ^= y;
            y = self.square(y);
        }
        debug_assert!(acc <= 1);
        acc as u8
    }

    /// Trace from GF(2^m) down to GF(2) of an element of the subfield GF(2^m).
    pub fn subfield_trace(&self, x: Elem, m: u32) -> Result<u8> {
        if m == 0 || self.n % m != 0 {
            return Err(Error::NotASubfield { m, n: self.n });
        }
        if self.frobenius(x, m) != x {
            return Err(Error::NotInSubfield { x, m });
        }
        let mut acc = 0;
        let mut y = x;
        for _ in 0..m {
            acc ^= y;
            y = self.square(y);
        }
        debug_assert!(acc <= 1, "subfield trace left GF(2)");
        Ok(acc as u8)
    }

    /// The smallest generator of the multiplicative group.
    pub fn primitive_element(&self) -> Result<Elem> {
        if self.n > 32 {
            return Err(Error::FieldTooLarge { n: self.n, cap: 32 });
        }
        let order = self.group_order();
        let primes = prime_factors(order);
        let g = (2..=self.mask)
            .find(|&g| primes.iter().all(|&p| self.pow(g, order / p) != 1))
            .expect("multiplicative group of a field is cyclic");
        Ok(g)
    }

    /// Table of `x^d` for every `x`, indexed by `x`.
    ///
    /// Walks the cyclic group with a generator so each entry costs two
    /// multiplications.
    pub fn power_table(&self, d: u64) -> Result<Vec<Elem>> {
        self.require_exhaustive()?;
        let size = self.size();
        let mut table = vec![0; size];
        table[0] = if d == 0 { 1 } else { 0 };
        let g = self.primitive_element()?;
        let gd = self.pow(g, d);
        let (mut x, mut y) = (1, 1);
        for _ in 0..self.group_order() {
            table[x as usize] = y;
            x = self.mul(x, g);
            y = self.mul(y, gd);
        }
        Ok(table)
    }
}

pub(crate) fn require_exhaustive(n: u32) -> Result<()> {
    if n > EXHAUSTIVE_CAP {
        Err(Error::FieldTooLarge {
            n,
            cap: EXHAUSTIVE_CAP,
        })
    } else {
        Ok(())
    }
}

/// Parses `"0x13"` (or `"13"`) as a polynomial encoding.
pub fn parse_modulus_hex(s: &str) -> Result<u128> {
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    u128::from_str_radix(digits, 16).map_err(|_| Error::InvalidModulus(s.to_string()))
}

/// Carry-less product of two 64-bit polynomials.
#[inline]
pub fn clmul(a: u64, mut b: u64) -> u128 {
    let a = a as u128;
    let mut r = 0u128;
    while b != 0 {
        r ^= a << b.trailing_zeros();
        b &= b - 1;
    }
    r
}

fn poly_degree(p: u128) -> Option<u32> {
    (p != 0).then(|| 127 - p.leading_zeros())
}

fn poly_rem(mut a: u128, b: u128) -> u128 {
    let db = poly_degree(b).expect("division by the zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility over GF(2): `f` has no factor of degree `k <= deg/2`,
/// tested as `gcd(x^(2^k) - x mod f, f) = 1` for every such `k`.
pub fn is_irreducible(f: u128) -> bool {
    let Some(n) = poly_degree(f) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if f & 1 == 0 {
        return n == 1;
    }
    if n > 64 {
        return false;
    }
    let sqr_mod = |h: u128| {
        let lo = h as u64;
        poly_rem(clmul(lo, lo), f)
    };
    let x = poly_rem(2, f);
    let mut h = x;
    for _ in 1..=n / 2 {
        h = sqr_mod(h);
        if poly_gcd(f, h ^ x) != 1 {
            return false;
        }
    }
    true
}

/// Smallest irreducible polynomial of degree `n` by integer encoding.
pub fn default_modulus(n: u32) -> u128 {
    let top = 1u128 << n;
    (0..top >> 1)
        .map(|mid| top | (mid << 1) | 1)
        .find(|&f| is_irreducible(f))
        .expect("irreducible polynomials exist in every degree")
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    primes
}
