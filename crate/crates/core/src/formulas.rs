//! Closed forms for the family `x -> x^(2^t - 1)` and the number theory
//! behind them: the Kloosterman sum `K(1)`, the cubic `x^3 + x + a`, weights
//! of the cyclic code with defining set {1, 7}, and the APN scan.
//!
//! All formula arithmetic is done on big integers and every division is
//! checked to be exact.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2n::{Elem, Field};
use crate::linmaps::kernel_dims;
use crate::spectra::{kernel_deltas, spectrum_kernel, DifferentialSpectrum};

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

fn exact_div(num: BigInt, den: impl Into<BigInt>, context: &'static str) -> Result<BigInt> {
    let (q, r) = num.div_rem(&den.into());
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::NonIntegerResult { context })
    }
}

fn to_count(x: BigInt, context: &'static str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::OracleMismatch(format!("{context}: {x} is not a valid count")))
}

fn sign(odd: bool) -> BigInt {
    if odd {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KloostermanMethod {
    /// Summation over the field.
    Direct,
    /// Carlitz's binomial expression.
    Carlitz,
}

/// `K(1) = sum_x (-1)^Tr(1/x + x)`, with the `x = 0` term counted as `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KloostermanValue {
    pub n: u32,
    pub value: i64,
}

impl KloostermanValue {
    /// `-2^(n/2+1) + 1 <= K(1) <= 2^(n/2+1) + 1`, i.e. `(K - 1)^2 <= 2^(n+2)`.
    pub fn within_weil_interval(&self) -> bool {
        let dev = BigInt::from(self.value - 1);
        &dev * &dev <= pow2(self.n + 2)
    }
}

pub fn kloosterman(field: &Field, method: KloostermanMethod) -> Result<KloostermanValue> {
    let value = match method {
        KloostermanMethod::Direct => kloosterman_direct(field)?,
        KloostermanMethod::Carlitz => kloosterman_carlitz(field.n())?,
    };
    Ok(KloostermanValue {
        n: field.n(),
        value,
    })
}

/// Walks `x = g^i` and `1/x = g^-i` together over the multiplicative group.
fn kloosterman_direct(field: &Field) -> Result<i64> {
    field.require_exhaustive()?;
    let g = field.primitive_element()?;
    let g_inv = field.inv(g).expect("generator is nonzero");
    let (mut x, mut x_inv) = (1, 1);
    let mut sum = 1i64;
    for _ in 0..field.group_order() {
        sum += if field.trace(x ^ x_inv) == 0 { 1 } else { -1 };
        x = field.mul(x, g);
        x_inv = field.mul(x_inv, g_inv);
    }
    Ok(sum)
}

/// `K(1) = 1 + (-1)^(n-1) / 2^(n-1) * sum_i (-1)^i C(n, 2i) 7^i`.
pub fn kloosterman_carlitz(n: u32) -> Result<i64> {
    if n == 0 {
        return Err(Error::UnsupportedParams("n must be positive".into()));
    }
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one(); // C(n, k)
    let mut seven = BigInt::one();
    for k in 0..=n {
        if k % 2 == 0 {
            let i = k / 2;
            sum += sign(i % 2 == 1) * &binom * &seven;
            seven *= 7;
        }
        binom = binom * (n - k) / (k + 1);
    }
    let tail = exact_div(sign(n % 2 == 0) * sum, pow2(n - 1), "Carlitz sum")?;
    (tail + BigInt::one())
        .to_i64()
        .ok_or(Error::NonIntegerResult { context: "Carlitz sum" })
}

/// Numbers of `a != 0` for which `x^3 + x + a` has 0, 1 or 3 roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CubicCensus {
    pub n: u32,
    pub m0: u64,
    pub m1: u64,
    pub m3: u64,
}

/// All roots of `x^3 + a x + b`, `b != 0`, in increasing order.
pub fn cubic_roots(field: &Field, a: Elem, b: Elem) -> Result<Vec<Elem>> {
    if b == 0 {
        return Err(Error::ZeroConstant);
    }
    field.require_exhaustive()?;
    let roots: Vec<Elem> = (0..field.size() as u64)
        .filter(|&x| field.mul(field.square(x), x) ^ field.mul(a, x) ^ b == 0)
        .collect();
    debug_assert!(roots.len() != 2, "two roots force a third");
    Ok(roots)
}

/// Closed-form census (no field needed).
pub fn cubic_census_closed_form(n: u32) -> Result<CubicCensus> {
    if !(2..=64).contains(&n) {
        return Err(Error::UnsupportedParams(format!("cubic census needs 2 <= n <= 64, got {n}")));
    }
    let (m0, m1, m3) = if n % 2 == 1 {
        (
            exact_div(pow2(n) + 1, 3, "M0")?,
            pow2(n - 1) - 1,
            exact_div(pow2(n - 1) - 1, 3, "M3")?,
        )
    } else {
        (
            exact_div(pow2(n) - 1, 3, "M0")?,
            pow2(n - 1),
            exact_div(pow2(n - 1) - 2, 3, "M3")?,
        )
    };
    Ok(CubicCensus {
        n,
        m0: to_count(m0, "M0")?,
        m1: to_count(m1, "M1")?,
        m3: to_count(m3, "M3")?,
    })
}

/// Census by tabulating `a = x^3 + x` over every `x`.
pub fn cubic_census_exhaustive(field: &Field) -> Result<CubicCensus> {
    field.require_exhaustive()?;
    let mut roots = vec![0u8; field.size()];
    for x in 0..field.size() as u64 {
        let a = field.mul(field.square(x), x) ^ x;
        roots[a as usize] += 1;
    }
    let mut counts = [0u64; 4];
    for &r in &roots[1..] {
        counts[r as usize] += 1;
    }
    debug_assert_eq!(counts[2], 0);
    Ok(CubicCensus {
        n: field.n(),
        m0: counts[0],
        m1: counts[1],
        m3: counts[3],
    })
}

/// The closed-form census, cross-checked by enumeration for `n <= 16`.
pub fn cubic_census(field: &Field) -> Result<CubicCensus> {
    let census = cubic_census_closed_form(field.n())?;
    if field.n() <= 16 {
        let counted = cubic_census_exhaustive(field)?;
        if counted != census {
            return Err(Error::OracleMismatch(format!(
                "cubic census {census:?} vs enumeration {counted:?}"
            )));
        }
    }
    Ok(census)
}

/// Number of `b != 1` for which `x^8 + b x^2 + (b+1) x` has no roots besides
/// 0 and 1: `(2^n + (-1)^(n+1))/3 + 2^(n-2) + (-1)^n K(1)/4`.
pub fn nu0_closed_form(n: u32) -> Result<u64> {
    if !(4..=64).contains(&n) {
        return Err(Error::UnsupportedParams(format!("nu0 needs 4 <= n <= 64, got {n}")));
    }
    let k = BigInt::from(kloosterman_carlitz(n)?);
    // common denominator 12
    let num = 4 * (pow2(n) + sign(n % 2 == 0)) + 3 * pow2(n) + 3 * sign(n % 2 == 1) * k;
    to_count(exact_div(num, 12, "nu0")?, "nu0")
}

/// Root-free `P(3,b)`, `b != 1`, counted from kernel dimensions.
pub fn nu0_exhaustive(field: &Field) -> Result<u64> {
    let dims = kernel_dims(field, 3)?;
    Ok(dims
        .iter()
        .enumerate()
        .filter(|&(b, &r)| b != 1 && r == 1)
        .count() as u64)
}

/// `nu0` by formula, cross-checked by enumeration for `n <= 14`.
pub fn nu0(field: &Field) -> Result<u64> {
    let value = nu0_closed_form(field.n())?;
    if field.n() <= 14 {
        let counted = nu0_exhaustive(field)?;
        if counted != value {
            return Err(Error::OracleMismatch(format!("nu0 {value} vs enumeration {counted}")));
        }
    }
    Ok(value)
}

/// Exponents `2^t - 1` with a closed-form spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `t = 3`
    X7,
    /// `t = n - 2`
    NMinus2,
    /// `t = n / 2`, even `n`
    Half,
    /// `t = n / 2 + 1`, even `n`
    HalfPlus1,
    /// `t = n - 1`
    Inverse,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::X7,
        Family::NMinus2,
        Family::Half,
        Family::HalfPlus1,
        Family::Inverse,
    ];

    pub fn t(self, n: u32) -> u32 {
        match self {
            Family::X7 => 3,
            Family::NMinus2 => n - 2,
            Family::Half => n / 2,
            Family::HalfPlus1 => n / 2 + 1,
            Family::Inverse => n - 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::X7 => "x7",
            Family::NMinus2 => "n-2",
            Family::Half => "half",
            Family::HalfPlus1 => "half+1",
            Family::Inverse => "inverse",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }

    fn supports(self, n: u32) -> bool {
        match self {
            Family::X7 => n >= 4,
            Family::NMinus2 => n >= 6,
            Family::Half | Family::HalfPlus1 => n % 2 == 0 && n > 4,
            Family::Inverse => n >= 3,
        }
    }
}

/// `omega_6` of `x^7` over GF(2^n).
fn x7_omega6(n: u32, k: &BigInt) -> Result<BigInt> {
    // (2^(n-2)+1)/6 - K/8 for odd n, (2^(n-2)-4)/6 + K/8 for even n
    let num = if n % 2 == 1 {
        4 * (pow2(n - 2) + 1) - 3 * k
    } else {
        4 * (pow2(n - 2) - 4) + 3 * k
    };
    exact_div(num, 24, "omega_6 of x^7")
}

fn gcd_pow(a: u32, n: u32) -> u64 {
    1u64 << a.gcd(&n)
}

/// Exact spectrum of a family member from its closed form.
pub fn closed_form_spectrum(n: u32, family: Family) -> Result<DifferentialSpectrum> {
    if n > 64 || !family.supports(n) {
        return Err(Error::UnsupportedParams(format!(
            "family {} is not defined for n = {n}",
            family.name()
        )));
    }
    let t = family.t(n);
    let half = pow2(n - 1);
    let mut omega: BTreeMap<u64, BigInt> = BTreeMap::new();
    let mut put = |i: u64, c: BigInt| *omega.entry(i).or_default() += c;
    match family {
        Family::X7 => {
            let k = BigInt::from(kloosterman_carlitz(n)?);
            let w6 = x7_omega6(n, &k)?;
            if n % 2 == 1 {
                put(2, &half - 3 * &w6);
                put(0, &half + 2 * &w6);
            } else {
                put(4, BigInt::one());
                put(2, &half - 3 * &w6 - 2);
                put(0, &half + 2 * &w6 + 1);
            }
            put(6, w6);
        }
        Family::NMinus2 => {
            let k = BigInt::from(kloosterman_carlitz(n)?);
            if n % 3 != 0 {
                let w6 = x7_omega6(n, &k)?;
                put(2, &half - 3 * &w6);
                put(0, &half + 2 * &w6);
                put(6, w6);
            } else {
                let num = if n % 2 == 1 {
                    4 * (pow2(n - 2) - 5) - 3 * &k
                } else {
                    4 * (pow2(n - 2) - 10) + 3 * &k
                };
                let w6 = exact_div(num, 24, "omega_6 of x^(2^(n-2)-1)")?;
                put(8, BigInt::one());
                put(2, &half - 3 * &w6 - 4);
                put(0, &half + 2 * &w6 + 3);
                put(6, w6);
            }
        }
        Family::Half => {
            let h = pow2(t - 1);
            put((1u64 << t) - 2, BigInt::one());
            if n % 4 == 0 {
                put(2, &half - &h + 1);
                put(0, &half + &h - 2);
            } else {
                put(4, BigInt::one());
                put(2, &half - &h - 1);
                put(0, &half + &h - 1);
            }
        }
        Family::HalfPlus1 => {
            let h = pow2(n / 2 - 1);
            put(1u64 << (n / 2), BigInt::one());
            put(2, &half - &h);
            put(0, &half + &h - 1);
        }
        Family::Inverse => {
            if n % 2 == 1 {
                put(2, half.clone());
                put(0, half);
            } else {
                put(4, BigInt::one());
                put(2, &half - 2);
                put(0, &half + 1);
            }
        }
    }
    let omega = omega
        .into_iter()
        .map(|(i, c)| to_count(c, "omega").map(|c| (i, c)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let delta0 = gcd_pow(t, n) - 2;
    let delta1 = gcd_pow(t - 1, n);
    let spectrum = DifferentialSpectrum::from_omega(n, (1u64 << t) - 1, omega, delta0, delta1);
    if !spectrum.satisfies_identities() {
        return Err(Error::OracleMismatch(format!(
            "closed form for {} at n = {n} violates the spectrum identities",
            family.name()
        )));
    }
    Ok(spectrum)
}

/// Value-set certificate for `x^(2^t - 1)`, `t = (n-1)/2`, odd `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfOddReport {
    pub n: u32,
    pub t: u32,
    pub delta0: u64,
    pub delta1: u64,
    /// Empirical spectrum; no closed form is claimed.
    pub omega: BTreeMap<u64, u64>,
    /// Distinct `delta(b)` over `b` outside GF(2).
    pub restricted_values: BTreeSet<u64>,
    /// `delta(0) = 0`, `delta(1) = 8` if `3 | n` else 2, and every other
    /// value in {0, 2, 6}.
    pub certified: bool,
}

pub fn half_odd_valueset(field: &Field) -> Result<HalfOddReport> {
    let n = field.n();
    if n % 2 == 0 || n <= 3 {
        return Err(Error::UnsupportedParams(format!(
            "the (n-1)/2 exponent needs odd n > 3, got {n}"
        )));
    }
    let t = (n - 1) / 2;
    let deltas = kernel_deltas(field, t)?;
    let spectrum = DifferentialSpectrum::from_deltas(field, (1u64 << t) - 1, &deltas);
    let restricted_values: BTreeSet<u64> = deltas[2..].iter().map(|&v| v as u64).collect();
    let expected_delta1 = if n % 3 == 0 { 8 } else { 2 };
    let certified = spectrum.delta0 == 0
        && spectrum.delta1 == expected_delta1
        && restricted_values.iter().all(|v| [0, 2, 6].contains(v));
    Ok(HalfOddReport {
        n,
        t,
        delta0: spectrum.delta0,
        delta1: spectrum.delta1,
        omega: spectrum.omega,
        restricted_values,
        certified,
    })
}

/// For `n = 2t` and `b` outside GF(2): whether `x^(2^t) + b x^2 + (b+1) x`
/// has 4 roots, decided by `Tr_t(b^-(2^t+1)) = 1` and `(b+1)^(2^t+1) != 1`.
pub fn four_root_criterion(field: &Field, b: Elem) -> Result<bool> {
    let n = field.n();
    if n % 2 == 1 {
        return Err(Error::UnsupportedParams(format!("the criterion needs even n, got {n}")));
    }
    if b <= 1 {
        return Err(Error::UnsupportedParams("b must lie outside GF(2)".into()));
    }
    let t = n / 2;
    let e = (1u64 << t) + 1;
    let norm_inv = field.inv(field.pow(b, e)).expect("b is nonzero");
    let in_subgroup = field.pow(b ^ 1, e) == 1;
    Ok(field.subfield_trace(norm_inv, t)? == 1 && !in_subgroup)
}

/// Codewords of weight 3 and 4 in the binary cyclic code of length `2^n - 1`
/// with defining set {1, 7}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodeWeightCounts {
    pub n: u32,
    pub b3: u128,
    pub b4: u128,
}

/// Closed forms: `B3 = 0` (odd `n`) or `(2^n - 1)/3` (even `n`), and
/// `B4 = (2^n - 1) omega_6(x^7)`.
pub fn code_weights_closed_form(n: u32) -> Result<CodeWeightCounts> {
    if !(4..=64).contains(&n) {
        return Err(Error::UnsupportedParams(format!("code weights need 4 <= n <= 64, got {n}")));
    }
    let len: BigInt = pow2(n) - 1;
    let b3 = if n % 2 == 1 {
        BigInt::zero()
    } else {
        exact_div(len.clone(), 3, "B3")?
    };
    let k = BigInt::from(kloosterman_carlitz(n)?);
    let b4 = len * x7_omega6(n, &k)?;
    let to_u128 = |x: BigInt| {
        x.to_u128()
            .ok_or_else(|| Error::OracleMismatch(format!("code weight {x} out of range")))
    };
    Ok(CodeWeightCounts {
        n,
        b3: to_u128(b3)?,
        b4: to_u128(b4)?,
    })
}

/// Largest degree accepted by [`code_weights_exhaustive`].
pub const CODE_WEIGHT_ENUMERATION_CAP: u32 = 12;

/// Counts low-weight codewords directly. A weight-3 word is a set of distinct
/// nonzero `{x, y, z}` with `x + y + z = 0` and `x^7 + y^7 + z^7 = 0`; ordered
/// triples are divided by 6. A weight-4 word `{x, y, z, w}` splits into two
/// pairs with equal `(x + y, x^7 + y^7)` in exactly 3 ways, so pairs are
/// grouped by that key and the matched pairs divided by 3.
pub fn code_weights_exhaustive(field: &Field) -> Result<CodeWeightCounts> {
    let n = field.n();
    if n > CODE_WEIGHT_ENUMERATION_CAP {
        return Err(Error::FieldTooLarge {
            n,
            cap: CODE_WEIGHT_ENUMERATION_CAP,
        });
    }
    let p7 = field.power_table(7)?;
    let q = field.size() as u64;

    let mut ordered_triples = 0u64;
    for x in 1..q {
        for y in 1..q {
            let z = x ^ y;
            if x != y && z != x && z != y && p7[x as usize] ^ p7[y as usize] ^ p7[z as usize] == 0 {
                ordered_triples += 1;
            }
        }
    }

    let mut keys = Vec::with_capacity((q * q / 2) as usize);
    for x in 1..q {
        for y in x + 1..q {
            keys.push(((x ^ y) << n) | (p7[x as usize] ^ p7[y as usize]));
        }
    }
    keys.sort_unstable();
    let mut matched = 0u64;
    for run in keys.chunk_by(|a, b| a == b) {
        let c = run.len() as u64;
        matched += c * (c - 1) / 2;
    }

    let b3 = exact_div(ordered_triples.into(), 6, "weight-3 orderings")?;
    let b4 = exact_div(matched.into(), 3, "weight-4 pairings")?;
    Ok(CodeWeightCounts {
        n,
        b3: b3.to_u128().expect("small count"),
        b4: b4.to_u128().expect("small count"),
    })
}

/// Closed forms, cross-checked by enumeration for `n <= 10`.
pub fn code_weights(n: u32) -> Result<CodeWeightCounts> {
    let counts = code_weights_closed_form(n)?;
    if n <= 10 {
        let counted = code_weights_exhaustive(&Field::new(n, None)?)?;
        if counted != counts {
            return Err(Error::OracleMismatch(format!(
                "code weights {counts:?} vs enumeration {counted:?}"
            )));
        }
    }
    Ok(counts)
}

/// Interval `[log2(2^(n/4) + 5.6), n + 1 - log2(2^(n/4) + 5.6)]` that must
/// contain every `3 <= t <= n-2` with `delta(x^(2^t-1)) <= 4`.
pub fn uniformity_window(n: u32) -> Result<(f64, f64)> {
    if n < 4 {
        return Err(Error::UnsupportedParams(format!("window needs n >= 4, got {n}")));
    }
    let lo = (2f64.powf(n as f64 / 4.0) + 5.6).log2();
    Ok((lo, n as f64 + 1.0 - lo))
}

/// Whether `(n, t)` is an APN case the conjecture allows:
/// `t = 2`, or odd `n` with `t` in {(n+1)/2, n-1}.
pub fn conjectured_apn(n: u32, t: u32) -> bool {
    t == 2 || (n % 2 == 1 && (t == (n + 1) / 2 || t == n - 1))
}

/// One `(n, t)` row of the APN scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanFinding {
    pub n: u32,
    pub t: u32,
    pub delta: u64,
    pub apn: bool,
    /// APN outside the conjectured set.
    pub counterexample: bool,
}

/// Largest degree accepted by [`conjecture_scan`].
pub const SCAN_CAP: u32 = 20;

/// Differential uniformity of every `x^(2^t - 1)`, `2 <= t <= n-1`, for
/// `n_min <= n <= n_max`, via kernel dimensions.
pub fn conjecture_scan(n_min: u32, n_max: u32) -> Result<Vec<ScanFinding>> {
    if n_max > SCAN_CAP {
        return Err(Error::FieldTooLarge {
            n: n_max,
            cap: SCAN_CAP,
        });
    }
    if n_min < 4 || n_min > n_max {
        return Err(Error::UnsupportedParams(format!(
            "scan needs 4 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    let mut findings = Vec::new();
    for n in n_min..=n_max {
        let field = Field::new(n, None)?;
        for t in 2..n {
            let delta = kernel_deltas(&field, t)?.into_iter().max().unwrap_or(0) as u64;
            let apn = delta == 2;
            findings.push(ScanFinding {
                n,
                t,
                delta,
                apn,
                counterexample: apn && !conjectured_apn(n, t),
            });
        }
    }
    Ok(findings)
}

/// Spectrum of `x^(2^s - 1)`, `s = n - t + 1`, forced by `x^(2^t - 1)` being
/// APN or differentially 4-uniform.
pub fn apn_consequence_spectrum(n: u32, t: u32) -> Result<DifferentialSpectrum> {
    let field = Field::new(n, None)?;
    let source = spectrum_kernel(&field, t)?;
    let s = n - t + 1;
    let half = 1u64 << (n - 1);
    let apn_spectrum = |delta0| {
        let omega = BTreeMap::from([(0, half), (2, half)]);
        DifferentialSpectrum::from_omega(n, (1u64 << s) - 1, omega, delta0, 2)
    };
    match source.delta_max {
        2 if n % 2 == 0 => {
            let omega = BTreeMap::from([(0, half + 1), (2, half - 2), (4, 1)]);
            Ok(DifferentialSpectrum::from_omega(n, (1u64 << s) - 1, omega, 0, 4))
        }
        2 => Ok(apn_spectrum(0)),
        4 => Ok(apn_spectrum(2)),
        other => Err(Error::PreconditionNotMet(format!(
            "x^(2^{t}-1) over GF(2^{n}) is differentially {other}-uniform, need 2 or 4"
        ))),
    }
}
