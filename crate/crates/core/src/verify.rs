//! Exhaustive verification of the structural results over a range of degrees.
//!
//! Every check is a pure function of `(n, modulus, t)` and the optional
//! fault; checks run in parallel and the report is sorted afterwards, so the
//! output does not depend on scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::{
    closed_form_spectrum, code_weights_closed_form, code_weights_exhaustive,
    cubic_census_closed_form, cubic_census_exhaustive, half_odd_valueset, kloosterman,
    nu0_closed_form, Family, KloostermanMethod,
};
use crate::gf2n::{Elem, Field};
use crate::linmaps::{count_zeros, eval_p, kernel_dims_with_fault, AffineFamily, Fault, KernelProfile};
use crate::spectra::{delta_table, kernel_deltas_with_fault, restricted_from_deltas, DifferentialSpectrum};

/// Ranges and caps for [`run_all`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub n_min: u32,
    pub n_max: u32,
    pub modulus: Option<u128>,
    /// Seed of a single-bit fault injected into every `P(t,b)` sweep.
    pub fault_seed: Option<u64>,
    pub n_cap: u32,
    pub system_cap: u32,
    pub bruteforce_cap: u32,
    pub code_weight_cap: u32,
}

impl VerifyConfig {
    pub fn new(n_min: u32, n_max: u32) -> Self {
        VerifyConfig {
            n_min,
            n_max,
            modulus: None,
            fault_seed: None,
            n_cap: 14,
            system_cap: 10,
            bruteforce_cap: 12,
            code_weight_cap: 10,
        }
    }

    fn fault(&self, n: u32) -> Option<Fault> {
        self.fault_seed.map(|seed| Fault::from_seed(n, seed))
    }
}

/// Outcome of one check at one `(n, t)`; `t` is absent for per-degree checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub n: u32,
    pub t: Option<u32>,
    pub passed: bool,
    /// First failing witness.
    pub counterexample: Option<String>,
}

impl CheckResult {
    fn new(name: impl Into<String>, n: u32, t: Option<u32>, witness: Option<String>) -> Self {
        CheckResult {
            name: name.into(),
            n,
            t,
            passed: witness.is_none(),
            counterexample: witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub range: (u32, u32),
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `(x^2 + x)(G(x+1) + G(x) + 1) = (x^(2^(t-1)) + x)^2` for `x` outside GF(2).
pub fn check_identity_u1(field: &Field, t: u32) -> CheckResult {
    let d = (1u64 << t) - 1;
    let witness = (2..field.size() as u64).find_map(|x| {
        let lhs = field.mul(
            field.square(x) ^ x,
            field.pow(x ^ 1, d) ^ field.pow(x, d) ^ 1,
        );
        let rhs = field.square(field.frobenius(x, t - 1) ^ x);
        (lhs != rhs).then(|| format!("x={x:#x}"))
    });
    CheckResult::new("identity_u1", field.n(), Some(t), witness)
}

/// `N_b = 2 M_b` for every `b`, where `N_b` counts roots of `P(t,b)` outside
/// GF(2) and `M_b` counts nonzero trace-zero roots of
/// `y^(2^(t-1)) + ... + y^2 + (b+1) y`.
pub fn check_system_equivalence(field: &Field, t: u32, fault: Option<Fault>) -> CheckResult {
    let n_b = AffineFamily::p(field, t).sweep(fault, |_, cols| count_zeros(cols, |x| x > 1));
    let l = AffineFamily::new(field, |b, y| {
        (1..t).fold(field.mul(b ^ 1, y), |acc, i| acc ^ field.frobenius(y, i))
    });
    let m_b = l.sweep(None, |_, cols| {
        count_zeros(cols, |y| y != 0 && field.trace(y) == 0)
    });
    let witness = n_b
        .iter()
        .zip(&m_b)
        .enumerate()
        .find(|(_, (n, m))| **n != 2 * **m)
        .map(|(b, (n, m))| format!("b={b:#x} N={n} M={m}"));
    CheckResult::new("system_equivalence", field.n(), Some(t), witness)
}

/// `dim Ker P(t,b) = dim Ker P*(t,b)` for every `b`.
pub fn check_adjoint_duality(field: &Field, t: u32, fault: Option<Fault>) -> Result<CheckResult> {
    let p = kernel_dims_with_fault(field, t, fault)?;
    let q = AffineFamily::adjoint(field, t).kernel_dims(None);
    let witness = first_difference(&p, &q).map(|(b, x, y)| format!("b={b:#x} P={x} P*={y}"));
    Ok(CheckResult::new("adjoint_duality", field.n(), Some(t), witness))
}

/// Kernel profiles and restricted multisets of `t` and `s = n - t + 1`
/// coincide, and the boundary values swap with a shift of 2.
pub fn check_symmetry(field: &Field, t: u32, fault: Option<Fault>) -> Result<CheckResult> {
    let n = field.n();
    let s = n - t + 1;
    let dims_t = kernel_dims_with_fault(field, t, fault)?;
    let dims_s = kernel_dims_with_fault(field, s, None)?;
    let deltas_t = kernel_deltas_with_fault(field, t, fault)?;
    let deltas_s = kernel_deltas_with_fault(field, s, None)?;

    let profile_t = KernelProfile::from_dims(n, t, &dims_t);
    let profile_s = KernelProfile::from_dims(n, s, &dims_s);
    let rest_t = restricted_from_deltas(n, (1 << t) - 1, &deltas_t);
    let rest_s = restricted_from_deltas(n, (1 << s) - 1, &deltas_s);
    let (t0, t1) = (deltas_t[0] as i64, deltas_t[1] as i64);
    let (s0, s1) = (deltas_s[0] as i64, deltas_s[1] as i64);

    let witness = if profile_t.counts != profile_s.counts {
        Some(format!("profiles {:?} vs {:?}", profile_t.counts, profile_s.counts))
    } else if rest_t.values != rest_s.values {
        Some(format!("restricted {:?} vs {:?}", rest_t.values, rest_s.values))
    } else if s0 != t1 - 2 || s1 != t0 + 2 {
        Some(format!("boundary t:({t0},{t1}) s:({s0},{s1})"))
    } else {
        None
    };
    Ok(CheckResult::new("symmetry", n, Some(t), witness))
}

/// Every swept matrix of `P(t,b)` agrees with direct evaluation on the basis.
pub fn check_matrix_evaluation(field: &Field, t: u32, fault: Option<Fault>) -> CheckResult {
    let n = field.n();
    let bad = AffineFamily::p(field, t).sweep(fault, |b, cols| {
        (0..n)
            .find(|&j| cols[j as usize] != eval_p(field, t, b, 1 << j))
            .map(|j| (b, j))
    });
    let witness = bad
        .into_iter()
        .flatten()
        .next()
        .map(|(b, j)| format!("b={b:#x} x={:#x}", 1u64 << j));
    CheckResult::new("matrix_evaluation", n, Some(t), witness)
}

/// Kernel-derived `delta(b)` equals the brute-force count for every `b`.
pub fn check_kernel_vs_bruteforce(field: &Field, t: u32, fault: Option<Fault>) -> Result<CheckResult> {
    let kernel = kernel_deltas_with_fault(field, t, fault)?;
    let brute = delta_table(field, (1 << t) - 1)?;
    let witness =
        first_difference(&kernel, &brute).map(|(b, k, d)| format!("b={b:#x} kernel={k} brute={d}"));
    Ok(CheckResult::new("kernel_vs_bruteforce", field.n(), Some(t), witness))
}

fn first_difference<T: PartialEq + Copy>(a: &[T], b: &[T]) -> Option<(usize, T, T)> {
    a.iter()
        .zip(b)
        .enumerate()
        .find(|(_, (x, y))| x != y)
        .map(|(i, (&x, &y))| (i, x, y))
}

fn kernel_spectrum(field: &Field, t: u32, fault: Option<Fault>) -> Result<DifferentialSpectrum> {
    let deltas = kernel_deltas_with_fault(field, t, fault)?;
    Ok(DifferentialSpectrum::from_deltas(field, (1 << t) - 1, &deltas).without_modulus())
}

fn compare<T: PartialEq + std::fmt::Debug>(closed: &T, counted: &T) -> Option<String> {
    (closed != counted).then(|| format!("closed form {closed:?} vs count {counted:?}"))
}

/// Per-degree checks of the closed forms against enumeration.
fn degree_checks(field: &Field, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let n = field.n();
    let fault = cfg.fault(n);
    let mut out = Vec::new();

    let direct = kloosterman(field, KloostermanMethod::Direct)?;
    let carlitz = kloosterman(field, KloostermanMethod::Carlitz)?;
    let witness = compare(&carlitz.value, &direct.value)
        .or_else(|| (!direct.within_weil_interval()).then(|| format!("K={} outside Weil", direct.value)));
    out.push(CheckResult::new("kloosterman", n, None, witness));

    for family in Family::ALL {
        if let Ok(closed) = closed_form_spectrum(n, family) {
            let counted = kernel_spectrum(field, family.t(n), fault)?;
            let witness = compare(&closed.omega, &counted.omega)
                .or_else(|| compare(&(closed.delta0, closed.delta1), &(counted.delta0, counted.delta1)));
            out.push(CheckResult::new(format!("closed_form_{}", family.name()), n, None, witness));
        }
    }

    let dims = kernel_dims_with_fault(field, 3, fault)?;
    let counted = dims.iter().enumerate().filter(|&(b, &r)| b != 1 && r == 1).count() as u64;
    out.push(CheckResult::new("nu0", n, None, compare(&nu0_closed_form(n)?, &counted)));

    let witness = compare(&cubic_census_closed_form(n)?, &cubic_census_exhaustive(field)?);
    out.push(CheckResult::new("cubic_census", n, None, witness));

    if n <= cfg.code_weight_cap {
        let witness = compare(&code_weights_closed_form(n)?, &code_weights_exhaustive(field)?);
        out.push(CheckResult::new("code_weights", n, None, witness));
    }

    if n >= 5 {
        let (lo, hi) = crate::formulas::uniformity_window(n)?;
        let mut witness = None;
        for t in 3..=n - 2 {
            let delta = kernel_deltas_with_fault(field, t, fault)?.into_iter().max().unwrap_or(0);
            if delta <= 4 && !(lo..=hi).contains(&(t as f64)) {
                witness = Some(format!("t={t} delta={delta} outside [{lo:.3}, {hi:.3}]"));
                break;
            }
        }
        out.push(CheckResult::new("uniformity_window", n, None, witness));
    }

    if n % 2 == 1 {
        let report = half_odd_valueset(field)?;
        let witness = (!report.certified).then(|| {
            format!(
                "delta0={} delta1={} values={:?}",
                report.delta0, report.delta1, report.restricted_values
            )
        });
        out.push(CheckResult::new("half_odd_valueset", n, None, witness));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
enum Job {
    Degree(u32),
    Pair(u32, u32),
}

fn run_job(job: Job, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    match job {
        Job::Degree(n) => degree_checks(&Field::new(n, cfg.modulus)?, cfg),
        Job::Pair(n, t) => {
            let field = Field::new(n, cfg.modulus)?;
            let fault = cfg.fault(n);
            let mut out = vec![
                check_identity_u1(&field, t),
                check_matrix_evaluation(&field, t, fault),
                check_adjoint_duality(&field, t, fault)?,
                check_symmetry(&field, t, fault)?,
            ];
            if n <= cfg.system_cap {
                out.push(check_system_equivalence(&field, t, fault));
            }
            if n <= cfg.bruteforce_cap {
                out.push(check_kernel_vs_bruteforce(&field, t, fault)?);
            }
            Ok(out)
        }
    }
}

/// Runs every check for `n_min <= n <= n_max`. An empty range gives an empty,
/// passing report.
pub fn run_all(cfg: &VerifyConfig) -> Result<VerificationReport> {
    if cfg.n_max > cfg.n_cap && cfg.n_min <= cfg.n_max {
        return Err(Error::FieldTooLarge {
            n: cfg.n_max,
            cap: cfg.n_cap,
        });
    }
    if cfg.n_min < 4 && cfg.n_min <= cfg.n_max {
        return Err(Error::UnsupportedParams(format!(
            "verification needs n_min >= 4, got {}",
            cfg.n_min
        )));
    }
    let mut jobs = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        jobs.push(Job::Degree(n));
        jobs.extend((2..n).map(|t| Job::Pair(n, t)));
    }
    let results: Vec<Vec<CheckResult>> = jobs
        .into_par_iter()
        .map(|job| run_job(job, cfg))
        .collect::<Result<_>>()?;
    let mut checks: Vec<CheckResult> = results.into_iter().flatten().collect();
    checks.sort_by(|a, b| (a.n, a.t, &a.name).cmp(&(b.n, b.t, &b.name)));
    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        range: (cfg.n_min, cfg.n_max),
        checks,
        all_passed,
    })
}

/// Parameter `b` whose matrix the fault drawn from `seed` corrupts.
pub fn fault_target(n: u32, seed: u64) -> Elem {
    Fault::from_seed(n, seed).b
}
