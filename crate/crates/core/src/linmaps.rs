//! GF(2)-linear maps of GF(2^n) given by linearized polynomials.
//!
//! The central family is `P(t,b): x -> x^(2^t) + b x^2 + (b+1) x`, whose
//! kernel dimension `r` gives `delta(b) = 2^r - 2` for the power function
//! `x^(2^t - 1)`, together with its adjoint
//! `P*(t,b): x -> x^(2^s) + (b+1)^2 x^2 + b x` where `s = n - t + 1`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2n::{require_exhaustive, Elem, Field};

/// Where a materialized map came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapLabel {
    /// `x^(2^t) + b x^2 + (b+1) x`
    P { t: u32, b: Elem },
    /// `x^(2^s) + (b+1)^2 x^2 + b x`, `s = n - t + 1`
    Adjoint { t: u32, b: Elem },
    /// `sum_i c_i x^(2^i)`
    Coefficients(Vec<Elem>),
    Custom(&'static str),
}

/// An n x n matrix over GF(2).
///
/// Stored column-wise: `images[j]` is the image of the basis element `x^j`,
/// packed into one word. Rank is the same for rows or columns so kernel
/// computations work on the columns directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedMap {
    n: u32,
    images: Vec<u64>,
    label: MapLabel,
}

impl LinearizedMap {
    /// Materializes `map` by evaluating it on the polynomial basis. `map`
    /// must be GF(2)-linear.
    pub fn from_fn(field: &Field, label: MapLabel, map: impl Fn(Elem) -> Elem) -> Self {
        let images = (0..field.n()).map(|j| map(1u64 << j)).collect();
        LinearizedMap {
            n: field.n(),
            images,
            label,
        }
    }

    /// The 2-polynomial `sum_i coeffs[i] x^(2^i)`.
    pub fn from_coefficients(field: &Field, coeffs: &[Elem]) -> Self {
        let label = MapLabel::Coefficients(coeffs.to_vec());
        Self::from_fn(field, label, |x| {
            let mut acc = 0;
            let mut y = x;
            for &c in coeffs {
                acc ^= field.mul(c, y);
                y = field.square(y);
            }
            acc
        })
    }

    pub fn identity(field: &Field) -> Self {
        Self::from_fn(field, MapLabel::Custom("identity"), |x| x)
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_fn(field, MapLabel::Custom("zero"), |_| 0)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn label(&self) -> &MapLabel {
        &self.label
    }

    /// Column `j` is the image of `x^j`.
    pub fn images(&self) -> &[u64] {
        &self.images
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: Elem) -> Elem {
        apply_columns(&self.images, x)
    }

    pub fn rank(&self) -> u32 {
        rank(&self.images)
    }

    /// `n - rank`.
    pub fn kernel_dim(&self) -> u32 {
        self.n - self.rank()
    }

    /// Flips entry (`row`, `column`) of the matrix.
    pub fn flip_bit(&mut self, row: u32, column: u32) {
        self.images[column as usize] ^= 1u64 << row;
    }

    /// Number of `x` with `map(x) = 0` that satisfy `keep`, by walking every
    /// `x` in Gray-code order.
    pub fn count_zeros(&self, keep: impl Fn(Elem) -> bool) -> u64 {
        count_zeros(&self.images, keep)
    }
}

fn apply_columns(images: &[u64], mut x: Elem) -> Elem {
    let mut acc = 0;
    while x != 0 {
        acc ^= images[x.trailing_zeros() as usize];
        x &= x - 1;
    }
    acc
}

/// Rank over GF(2) of a set of packed bit vectors.
pub fn rank(vectors: &[u64]) -> u32 {
    // basis[i] has leading bit i
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &v in vectors {
        let mut v = v;
        while v != 0 {
            let lead = 63 - v.leading_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = v;
                rank += 1;
                break;
            }
            v ^= basis[lead];
        }
    }
    rank
}

pub(crate) fn count_zeros(images: &[u64], keep: impl Fn(Elem) -> bool) -> u64 {
    let n = images.len() as u32;
    assert!(n <= crate::gf2n::EXHAUSTIVE_CAP);
    let mut x = 0u64;
    let mut y = 0u64;
    let mut count = u64::from(keep(0));
    for i in 1u64..1 << n {
        let k = i.trailing_zeros();
        x ^= 1 << k;
        y ^= images[k as usize];
        if y == 0 && keep(x) {
            count += 1;
        }
    }
    count
}

pub(crate) fn check_t(field: &Field, t: u32) -> Result<()> {
    let n = field.n();
    if t < 2 || t + 1 > n {
        Err(Error::TOutOfRange { n, t })
    } else {
        Ok(())
    }
}

/// Direct evaluation of `P(t,b)(x) = x^(2^t) + b x^2 + (b+1) x`.
pub fn eval_p(field: &Field, t: u32, b: Elem, x: Elem) -> Elem {
    field.frobenius(x, t) ^ field.mul(b, field.square(x)) ^ field.mul(b ^ 1, x)
}

/// Direct evaluation of `P*(t,b)(x) = x^(2^s) + (b+1)^2 x^2 + b x`.
pub fn eval_adjoint(field: &Field, t: u32, b: Elem, x: Elem) -> Elem {
    let s = field.n() - t + 1;
    field.frobenius(x, s) ^ field.mul(field.square(b ^ 1), field.square(x)) ^ field.mul(b, x)
}

pub fn p_poly(field: &Field, t: u32, b: Elem) -> Result<LinearizedMap> {
    check_t(field, t)?;
    Ok(LinearizedMap::from_fn(field, MapLabel::P { t, b }, |x| {
        eval_p(field, t, b, x)
    }))
}

pub fn adjoint(field: &Field, t: u32, b: Elem) -> Result<LinearizedMap> {
    check_t(field, t)?;
    Ok(LinearizedMap::from_fn(
        field,
        MapLabel::Adjoint { t, b },
        |x| eval_adjoint(field, t, b, x),
    ))
}

/// `pi(a, b) = (a^(2^s), a b / a^(2^s) + 1)` on `GF(2^n)* x GF(2^n)`.
pub fn pi_map(field: &Field, s: u32, a: Elem, b: Elem) -> Result<(Elem, Elem)> {
    if a == 0 {
        return Err(Error::ZeroInput);
    }
    let alpha = field.frobenius(a, s);
    Ok((alpha, field.div(field.mul(a, b), alpha) ^ 1))
}

/// Inverse of [`pi_map`]: `(alpha^(2^(n-s)), alpha (beta+1) / alpha^(2^(n-s)))`.
pub fn pi_inverse(field: &Field, s: u32, alpha: Elem, beta: Elem) -> Result<(Elem, Elem)> {
    if alpha == 0 {
        return Err(Error::ZeroInput);
    }
    let a = field.frobenius(alpha, field.n() - s % field.n());
    Ok((a, field.div(field.mul(alpha, beta ^ 1), a)))
}

/// A single flipped matrix entry, applied whenever the map for parameter
/// `b` is materialized. Used to show the verification checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fault {
    pub b: Elem,
    pub row: u32,
    pub column: u32,
}

impl Fault {
    /// A deterministic fault for GF(2^n) drawn from `seed`.
    pub fn from_seed(n: u32, seed: u64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let b = if n >= 64 {
            rng.gen()
        } else {
            rng.gen_range(0..1u64 << n)
        };
        Fault {
            b,
            row: rng.gen_range(0..n),
            column: rng.gen_range(0..n),
        }
    }
}

/// Maps `b -> M(b)` where `M(b)` depends affinely on `b` over GF(2):
/// `M(b) = M(0) + sum_k b_k (M(e_k) - M(0))`. Holds for `P`, `P*` and the
/// other families used here since `b -> b^2` is GF(2)-linear.
pub(crate) struct AffineFamily {
    n: u32,
    base: Vec<u64>,
    // steps[k * n + j]: change of column j when bit k of b flips
    steps: Vec<u64>,
}

impl AffineFamily {
    pub(crate) fn new(field: &Field, eval: impl Fn(Elem, Elem) -> Elem) -> Self {
        let n = field.n();
        let base: Vec<u64> = (0..n).map(|j| eval(0, 1 << j)).collect();
        let mut steps = Vec::with_capacity((n * n) as usize);
        for k in 0..n {
            for j in 0..n {
                steps.push(eval(1 << k, 1 << j) ^ base[j as usize]);
            }
        }
        AffineFamily { n, base, steps }
    }

    pub(crate) fn p(field: &Field, t: u32) -> Self {
        Self::new(field, |b, x| eval_p(field, t, b, x))
    }

    pub(crate) fn adjoint(field: &Field, t: u32) -> Self {
        Self::new(field, |b, x| eval_adjoint(field, t, b, x))
    }

    fn step(&self, k: u32) -> &[u64] {
        let n = self.n as usize;
        &self.steps[k as usize * n..(k as usize + 1) * n]
    }

    pub(crate) fn at(&self, b: Elem) -> Vec<u64> {
        let mut cols = self.base.clone();
        let mut bits = b;
        while bits != 0 {
            let k = bits.trailing_zeros();
            for (c, s) in cols.iter_mut().zip(self.step(k)) {
                *c ^= s;
            }
            bits &= bits - 1;
        }
        cols
    }

    /// Evaluates `per_b` on the matrix of every `b`, returning results indexed
    /// by `b`. Chunks run in parallel; each walks its low bits in Gray-code
    /// order so moving to the next `b` costs one column update.
    pub(crate) fn sweep<T, F>(&self, fault: Option<Fault>, per_b: F) -> Vec<T>
    where
        T: Send + Default + Clone,
        F: Fn(Elem, &[u64]) -> T + Sync,
    {
        let n = self.n;
        let low = n.min(10);
        let mut out = vec![T::default(); 1usize << n];
        out.par_chunks_mut(1 << low)
            .enumerate()
            .for_each(|(chunk, slot)| {
                let b0 = (chunk as u64) << low;
                let mut cols = self.at(b0);
                let mut scratch = cols.clone();
                let mut gray = 0u64;
                for i in 0..1u64 << low {
                    if i > 0 {
                        let k = i.trailing_zeros();
                        gray ^= 1 << k;
                        for (c, s) in cols.iter_mut().zip(self.step(k)) {
                            *c ^= s;
                        }
                    }
                    let b = b0 | gray;
                    let view = match fault {
                        Some(f) if f.b == b => {
                            scratch.copy_from_slice(&cols);
                            scratch[f.column as usize] ^= 1 << f.row;
                            &scratch[..]
                        }
                        _ => &cols[..],
                    };
                    slot[gray as usize] = per_b(b, view);
                }
            });
        out
    }

    pub(crate) fn kernel_dims(&self, fault: Option<Fault>) -> Vec<u8> {
        let n = self.n;
        self.sweep(fault, |_, cols| (n - rank(cols)) as u8)
    }
}

/// `dim Ker P(t,b)` for every `b`, indexed by `b`.
pub fn kernel_dims(field: &Field, t: u32) -> Result<Vec<u8>> {
    kernel_dims_with_fault(field, t, None)
}

pub(crate) fn kernel_dims_with_fault(
    field: &Field,
    t: u32,
    fault: Option<Fault>,
) -> Result<Vec<u8>> {
    check_t(field, t)?;
    require_exhaustive(field.n())?;
    Ok(AffineFamily::p(field, t).kernel_dims(fault))
}

/// `dim Ker P*(t,b)` for every `b`, indexed by `b`.
pub fn adjoint_kernel_dims(field: &Field, t: u32) -> Result<Vec<u8>> {
    check_t(field, t)?;
    require_exhaustive(field.n())?;
    Ok(AffineFamily::adjoint(field, t).kernel_dims(None))
}

/// Histogram `i -> #{b : dim Ker P(t,b) = i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelProfile {
    pub n: u32,
    pub t: u32,
    pub counts: BTreeMap<u32, u64>,
}

impl KernelProfile {
    pub(crate) fn from_dims(n: u32, t: u32, dims: &[u8]) -> Self {
        let mut counts = BTreeMap::new();
        for &d in dims {
            *counts.entry(d as u32).or_insert(0) += 1;
        }
        KernelProfile { n, t, counts }
    }

    pub fn count(&self, i: u32) -> u64 {
        self.counts.get(&i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

pub fn kernel_profile(field: &Field, t: u32) -> Result<KernelProfile> {
    let dims = kernel_dims(field, t)?;
    let profile = KernelProfile::from_dims(field.n(), t, &dims);
    assert_eq!(profile.count(0), 0, "P(t,b) always vanishes on GF(2)");
    Ok(profile)
}
