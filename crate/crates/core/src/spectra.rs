//! Differential spectra of power functions `x -> x^d`.
//!
//! For a power function every row `a != 0` of the difference table is a
//! rescaling of the row `a = 1`, so the spectrum is the histogram of
//! `delta(b) = #{x : (x+1)^d + x^d = b}`.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2n::{Elem, Field};
use crate::linmaps::{kernel_dims_with_fault, Fault};

/// The multiset `{omega_i}` with the boundary values `delta(0)`, `delta(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferentialSpectrum {
    pub n: u32,
    /// Exponent reduced into `1..=2^n - 1`.
    pub d: u64,
    /// Hex modulus of the field the spectrum was computed in; `None` for
    /// closed forms, which do not depend on it.
    pub modulus: Option<String>,
    /// `i -> omega_i`, nonzero entries only.
    pub omega: BTreeMap<u64, u64>,
    pub delta_max: u64,
    pub delta0: u64,
    pub delta1: u64,
    pub locally_apn: bool,
}

impl DifferentialSpectrum {
    /// Builds a spectrum from the full table `b -> delta(b)`.
    pub fn from_deltas(field: &Field, d: u64, deltas: &[u32]) -> Self {
        let mut omega = BTreeMap::new();
        for &v in deltas {
            *omega.entry(v as u64).or_insert(0) += 1;
        }
        let restricted_max = deltas[2..].iter().copied().max().unwrap_or(0);
        DifferentialSpectrum {
            n: field.n(),
            d: reduce_exponent(field.n(), d),
            modulus: Some(field.modulus_hex()),
            delta_max: *omega.keys().next_back().expect("nonempty field"),
            omega,
            delta0: deltas[0] as u64,
            delta1: deltas[1] as u64,
            locally_apn: restricted_max <= 2,
        }
    }

    /// Builds a spectrum from its histogram and boundary values; local APN-ness
    /// follows by removing one occurrence each of `delta(0)` and `delta(1)`.
    pub fn from_omega(n: u32, d: u64, omega: BTreeMap<u64, u64>, delta0: u64, delta1: u64) -> Self {
        let omega: BTreeMap<u64, u64> = omega.into_iter().filter(|&(_, c)| c != 0).collect();
        let mut restricted = omega.clone();
        for v in [delta0, delta1] {
            if let Some(c) = restricted.get_mut(&v) {
                *c -= 1;
            }
        }
        let restricted_max = restricted
            .iter()
            .filter(|&(_, &c)| c > 0)
            .map(|(&i, _)| i)
            .max()
            .unwrap_or(0);
        DifferentialSpectrum {
            n,
            d: reduce_exponent(n, d),
            modulus: None,
            delta_max: omega.keys().next_back().copied().unwrap_or(0),
            omega,
            delta0,
            delta1,
            locally_apn: restricted_max <= 2,
        }
    }

    pub fn omega(&self, i: u64) -> u64 {
        self.omega.get(&i).copied().unwrap_or(0)
    }

    pub fn is_apn(&self) -> bool {
        self.delta_max == 2
    }

    /// The same spectrum with the field tag dropped, for comparing against
    /// closed forms.
    pub fn without_modulus(mut self) -> Self {
        self.modulus = None;
        self
    }

    /// `sum omega_k = 2^n`, `sum k omega_k = 2^n` and `omega_odd = 0`.
    pub fn satisfies_identities(&self) -> bool {
        let total: u128 = self.omega.values().map(|&c| c as u128).sum();
        let weighted: u128 = self.omega.iter().map(|(&i, &c)| i as u128 * c as u128).sum();
        let size = 1u128 << self.n;
        total == size && weighted == size && self.omega.keys().all(|i| i % 2 == 0)
    }
}

/// Histogram of `delta(b)` over `b` outside GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictedMultiset {
    pub n: u32,
    pub d: u64,
    pub values: BTreeMap<u64, u64>,
}

impl RestrictedMultiset {
    pub fn total(&self) -> u64 {
        self.values.values().sum()
    }

    fn from_deltas(n: u32, d: u64, deltas: &[u32]) -> Self {
        let mut values = BTreeMap::new();
        for &v in &deltas[2..] {
            *values.entry(v as u64).or_insert(0) += 1;
        }
        RestrictedMultiset {
            n,
            d: reduce_exponent(n, d),
            values,
        }
    }
}

/// Canonical exponent: `d` reduced into `1..=2^n - 1` (0 stays 0).
pub fn reduce_exponent(n: u32, d: u64) -> u64 {
    let order = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    if d == 0 {
        0
    } else {
        (d - 1) % order + 1
    }
}

fn check_exponent(d: u64) -> Result<()> {
    if d == 0 {
        Err(Error::UnsupportedParams("exponent must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `#{x : (x+1)^d + x^d = b}` by direct enumeration.
pub fn delta_point(field: &Field, d: u64, b: Elem) -> Result<u32> {
    check_exponent(d)?;
    field.require_exhaustive()?;
    let count = (0..field.size() as u64)
        .filter(|&x| field.pow(x ^ 1, d) ^ field.pow(x, d) == b)
        .count();
    Ok(count as u32)
}

/// The table `b -> delta(b)` from one pass over the derivative `D_1 F`.
pub fn delta_table(field: &Field, d: u64) -> Result<Vec<u32>> {
    check_exponent(d)?;
    let powers = field.power_table(d)?;
    let mut deltas = vec![0u32; powers.len()];
    for x in 0..powers.len() {
        deltas[(powers[x ^ 1] ^ powers[x]) as usize] += 1;
    }
    Ok(deltas)
}

pub fn spectrum_bruteforce(field: &Field, d: u64) -> Result<DifferentialSpectrum> {
    let deltas = delta_table(field, d)?;
    Ok(DifferentialSpectrum::from_deltas(field, d, &deltas))
}

/// The `b` attaining the differential uniformity.
pub fn delta_max_attainers(field: &Field, d: u64) -> Result<Vec<Elem>> {
    let deltas = delta_table(field, d)?;
    let max = deltas.iter().copied().max().unwrap_or(0);
    Ok((0..deltas.len() as u64)
        .filter(|&b| deltas[b as usize] == max)
        .collect())
}

/// `delta(b)` for every `b` of `x^(2^t - 1)` from kernel dimensions:
/// `2^r - 2` for `b != 1`, and `2^r` for `b = 1` where the solutions
/// `x = 0, 1` also count.
pub fn kernel_deltas(field: &Field, t: u32) -> Result<Vec<u32>> {
    kernel_deltas_with_fault(field, t, None)
}

pub(crate) fn kernel_deltas_with_fault(
    field: &Field,
    t: u32,
    fault: Option<Fault>,
) -> Result<Vec<u32>> {
    let dims = kernel_dims_with_fault(field, t, fault)?;
    Ok(dims
        .iter()
        .enumerate()
        .map(|(b, &r)| {
            let roots = 1u32 << r;
            if b == 1 {
                roots
            } else {
                roots.saturating_sub(2)
            }
        })
        .collect())
}

/// Spectrum of `x^(2^t - 1)` through the linearized polynomials `P(t,b)`.
pub fn spectrum_kernel(field: &Field, t: u32) -> Result<DifferentialSpectrum> {
    spectrum_kernel_with_fault(field, t, None)
}

pub(crate) fn spectrum_kernel_with_fault(
    field: &Field,
    t: u32,
    fault: Option<Fault>,
) -> Result<DifferentialSpectrum> {
    let deltas = kernel_deltas_with_fault(field, t, fault)?;
    Ok(DifferentialSpectrum::from_deltas(field, (1u64 << t) - 1, &deltas))
}

/// `delta(0) = gcd(d, 2^n - 1) - 1`.
pub fn delta_zero(field: &Field, d: u64) -> Result<u64> {
    check_exponent(d)?;
    Ok(d.gcd(&field.group_order()) - 1)
}

/// `delta(b) <= 2` for every `b` outside GF(2).
pub fn is_locally_apn(field: &Field, d: u64) -> Result<bool> {
    let deltas = delta_table(field, d)?;
    Ok(deltas[2..].iter().all(|&v| v <= 2))
}

pub fn restricted_multiset(field: &Field, d: u64) -> Result<RestrictedMultiset> {
    let deltas = delta_table(field, d)?;
    Ok(RestrictedMultiset::from_deltas(field.n(), d, &deltas))
}

pub(crate) fn restricted_from_deltas(n: u32, d: u64, deltas: &[u32]) -> RestrictedMultiset {
    RestrictedMultiset::from_deltas(n, d, deltas)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: u32) -> Field {
        Field::new(n, None).unwrap()
    }

    fn omega(pairs: &[(u64, u64)]) -> BTreeMap<u64, u64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn point_examples() {
        for n in [5, 7, 9] {
            let f = field(n);
            for b in 0..1u64 << n {
                assert!(delta_point(&f, 3, b).unwrap() <= 2);
            }
        }
        assert_eq!(delta_point(&field(4), 7, 1).unwrap(), 4);
        assert_eq!(delta_point(&field(6), 7, 0).unwrap(), 6);
        assert!(delta_point(&field(6), 0, 0).is_err());
    }

    #[test]
    fn points_agree_with_table_and_are_even() {
        let f = field(7);
        for d in [3, 5, 11, 13, 63] {
            let table = delta_table(&f, d).unwrap();
            for b in 0..128u64 {
                let v = delta_point(&f, d, b).unwrap();
                assert_eq!(v, table[b as usize]);
                assert_eq!(v % 2, 0);
            }
        }
    }

    #[test]
    fn bruteforce_examples() {
        let s = spectrum_bruteforce(&field(4), 7).unwrap();
        assert_eq!(s.omega, omega(&[(0, 9), (2, 6), (4, 1)]));
        let s = spectrum_bruteforce(&field(5), 7).unwrap();
        assert_eq!(s.omega, omega(&[(0, 16), (2, 16)]));
        assert!(s.is_apn());
        let s = spectrum_bruteforce(&field(6), 7).unwrap();
        assert_eq!(s.omega, omega(&[(0, 35), (2, 27), (4, 1), (6, 1)]));
        assert_eq!((s.delta0, s.delta1, s.delta_max), (6, 4, 6));
    }

    #[test]
    fn field_too_large() {
        let f = Field::new(25, None).unwrap();
        assert!(matches!(
            spectrum_bruteforce(&f, 3),
            Err(Error::FieldTooLarge { n: 25, .. })
        ));
        assert!(is_locally_apn(&f, 3).is_err());
        assert!(restricted_multiset(&f, 3).is_err());
    }

    #[test]
    fn kernel_boundary_values() {
        use num_integer::Integer;
        for n in 3..=12u32 {
            let f = field(n);
            for t in 2..n {
                let s = spectrum_kernel(&f, t).unwrap();
                assert_eq!(s.delta0, (1 << t.gcd(&n)) - 2);
                assert_eq!(s.delta1, 1 << (t - 1).gcd(&n));
                assert!(s.satisfies_identities());
            }
        }
    }

    #[test]
    fn kernel_equals_bruteforce() {
        for n in 3..=12u32 {
            let f = field(n);
            for t in 2..n {
                let k = spectrum_kernel(&f, t).unwrap();
                let b = spectrum_bruteforce(&f, (1 << t) - 1).unwrap();
                assert_eq!(k, b, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn inverse_function_spectra() {
        for n in 3..=12u32 {
            let s = spectrum_kernel(&field(n), n - 1).unwrap();
            let half = 1u64 << (n - 1);
            if n % 2 == 0 {
                assert_eq!(s.omega, omega(&[(0, half + 1), (2, half - 2), (4, 1)]));
            } else {
                assert_eq!(s.omega, omega(&[(0, half), (2, half)]));
            }
            assert!(s.locally_apn);
            assert!(is_locally_apn(&field(n), (1 << n) - 2).unwrap());
        }
    }

    #[test]
    fn delta_zero_examples() {
        for n in (2..=12).step_by(2) {
            assert_eq!(delta_zero(&field(n), 3).unwrap(), 2);
        }
        assert_eq!(delta_zero(&field(8), 5).unwrap(), 4);
        assert_eq!(delta_zero(&field(7), 5).unwrap(), 0);
        for n in 3..=9 {
            let f = field(n);
            for d in 1..(1u64 << n) {
                assert_eq!(delta_zero(&f, d).unwrap(), delta_point(&f, d, 0).unwrap() as u64);
            }
        }
    }

    #[test]
    fn locally_apn_examples() {
        for n in [6, 8, 10, 12] {
            assert!(is_locally_apn(&field(n), (1 << (n / 2)) - 1).unwrap(), "n={n}");
        }
        // The 6 of x^7 over GF(64) sits at b = 0 and the 4 at b = 1.
        let f = field(6);
        assert_eq!(delta_max_attainers(&f, 7).unwrap(), vec![0]);
        assert_eq!(delta_point(&f, 7, 1).unwrap(), 4);
        assert!(is_locally_apn(&f, 7).unwrap());
        assert!(!is_locally_apn(&field(7), 7).unwrap());
    }

    #[test]
    fn locally_apn_from_omega_matches_table() {
        for n in 4..=9u32 {
            let f = field(n);
            for d in 1..(1u64 << n) {
                let s = spectrum_bruteforce(&f, d).unwrap();
                let derived = DifferentialSpectrum::from_omega(n, d, s.omega.clone(), s.delta0, s.delta1);
                assert_eq!(derived, s.clone().without_modulus());
                assert_eq!(s.locally_apn, is_locally_apn(&f, d).unwrap());
            }
        }
    }

    #[test]
    fn restricted_examples() {
        for n in 4..=12u32 {
            let f = field(n);
            for t in 2..n {
                let s = n - t + 1;
                let a = restricted_multiset(&f, (1 << t) - 1).unwrap();
                let b = restricted_multiset(&f, (1 << s) - 1).unwrap();
                assert_eq!(a.values, b.values, "n={n} t={t}");
                assert_eq!(a.total(), (1 << n) - 2);
            }
        }
        let r = restricted_multiset(&field(6), 7).unwrap();
        assert_eq!(r.values, omega(&[(0, 35), (2, 27)]));
    }

    #[test]
    fn identities_for_all_exponents() {
        for n in 2..=8u32 {
            let f = field(n);
            for d in 1..(1u64 << (n + 1)) {
                let s = spectrum_bruteforce(&f, d).unwrap();
                assert!(s.satisfies_identities(), "n={n} d={d}");
                assert_eq!(s.delta_max, *s.omega.keys().last().unwrap());
            }
        }
    }

    #[test]
    fn modulus_independence() {
        let a = Field::new(8, Some(0x11b)).unwrap();
        let b = Field::new(8, Some(0x11d)).unwrap();
        for d in 1..255 {
            let sa = spectrum_bruteforce(&a, d).unwrap().without_modulus();
            let sb = spectrum_bruteforce(&b, d).unwrap().without_modulus();
            assert_eq!(sa, sb, "d={d}");
        }
    }

    #[test]
    fn cyclotomic_and_inverse_equivalence() {
        for n in 3..=10u32 {
            let f = field(n);
            let order = f.group_order();
            for d in 1..order {
                let s = spectrum_bruteforce(&f, d).unwrap();
                let doubled = spectrum_bruteforce(&f, 2 * d % order).unwrap();
                assert_eq!(s.omega, doubled.omega, "n={n} d={d}");
                if d.gcd(&order) == 1 {
                    let inv = (1..order).find(|&e| e * d % order == 1).unwrap();
                    let si = spectrum_bruteforce(&f, inv).unwrap();
                    assert_eq!(s.omega, si.omega, "n={n} d={d} inverse {inv}");
                }
            }
        }
    }

    #[test]
    fn uniformity_of_form_two_power_appears_once() {
        for n in 3..=12u32 {
            let f = field(n);
            for t in 2..n {
                let s = spectrum_kernel(&f, t).unwrap();
                let m = s.delta_max;
                if !(m + 2).is_power_of_two() {
                    assert!(m.is_power_of_two());
                    assert_eq!(s.omega(m), 1);
                    assert_eq!(m, 1 << (t - 1).gcd(&n));
                }
            }
        }
    }

    #[test]
    fn exponent_reduction() {
        assert_eq!(reduce_exponent(4, 15), 15);
        assert_eq!(reduce_exponent(4, 16), 1);
        assert_eq!(reduce_exponent(4, 0), 0);
        assert_eq!(reduce_exponent(64, u64::MAX), u64::MAX);
        assert_eq!(spectrum_bruteforce(&field(4), 22).unwrap().d, 7);
    }
}
