//! Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. All comparisons are exact.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use diffspec::formulas::{
    closed_form_spectrum, code_weights_closed_form, code_weights_exhaustive,
    conjecture_scan, conjectured_apn, cubic_census_closed_form, cubic_census_exhaustive,
    kloosterman, nu0_closed_form, nu0_exhaustive, uniformity_window, Family, KloostermanMethod,
};
use diffspec::linmaps::{kernel_profile, LinearizedMap, MapLabel};
use diffspec::spectra::{restricted_multiset, spectrum_bruteforce, spectrum_kernel};
use diffspec::verify::{check_symmetry, check_system_equivalence, run_all, VerifyConfig};
use diffspec::{DifferentialSpectrum, Field};

/// Failed sub-claims of one criterion.
type Outcome = Vec<String>;

fn field(n: u32) -> Field {
    Field::new(n, None).unwrap()
}

fn claim(failures: &mut Outcome, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn omega(pairs: &[(u64, u64)]) -> BTreeMap<u64, u64> {
    pairs.iter().copied().collect()
}

fn lemma1(s: &DifferentialSpectrum) -> bool {
    let size = 1u128 << s.n;
    let total: u128 = s.omega.values().map(|&c| c as u128).sum();
    let weighted: u128 = s.omega.iter().map(|(&i, &c)| i as u128 * c as u128).sum();
    total == size && weighted == size && s.omega.keys().all(|i| i % 2 == 0)
}

fn oracle_equivalence() -> Outcome {
    let mut f = Vec::new();
    for n in 4..=12 {
        let field = field(n);
        for t in 2..n {
            let kernel = spectrum_kernel(&field, t).unwrap();
            let brute = spectrum_bruteforce(&field, (1 << t) - 1).unwrap();
            claim(&mut f, kernel == brute, || format!("n={n} t={t} kernel != brute"));
            claim(&mut f, lemma1(&kernel) && lemma1(&brute), || format!("n={n} t={t} sums"));
        }
    }
    f
}

fn x7_reproduction() -> Outcome {
    let mut f = Vec::new();
    for n in 4..=16 {
        let closed = closed_form_spectrum(n, Family::X7).unwrap();
        let brute = spectrum_bruteforce(&field(n), 7).unwrap().without_modulus();
        claim(&mut f, closed == brute, || format!("n={n}: {:?} vs {:?}", closed.omega, brute.omega));
    }
    let n5 = closed_form_spectrum(5, Family::X7).unwrap();
    claim(&mut f, n5.omega == omega(&[(0, 16), (2, 16)]), || format!("n=5 {:?}", n5.omega));
    let n6 = closed_form_spectrum(6, Family::X7).unwrap();
    claim(&mut f, n6.omega == omega(&[(0, 35), (2, 27), (4, 1), (6, 1)]), || {
        format!("n=6 {:?}", n6.omega)
    });
    f
}

/// `K(1)` by the definition, computing inverses with Fermat.
fn kloosterman_oracle(field: &Field) -> i64 {
    1 + (1..1u64 << field.n())
        .map(|x| {
            let inv = field.pow(x, field.group_order() - 1);
            if field.trace(inv ^ x) == 0 {
                1
            } else {
                -1
            }
        })
        .sum::<i64>()
}

fn kloosterman_consistency() -> Outcome {
    let mut f = Vec::new();
    for n in 4..=18 {
        let field = field(n);
        let direct = kloosterman(&field, KloostermanMethod::Direct).unwrap();
        let carlitz = kloosterman(&field, KloostermanMethod::Carlitz).unwrap();
        claim(&mut f, direct == carlitz, || format!("n={n}: {} vs {}", direct.value, carlitz.value));
        claim(&mut f, direct.within_weil_interval(), || format!("n={n}: outside Weil"));
    }
    for (n, k) in [(4, 0), (5, 12), (6, -8)] {
        let field = field(n);
        let oracle = kloosterman_oracle(&field);
        let direct = kloosterman(&field, KloostermanMethod::Direct).unwrap().value;
        claim(&mut f, oracle == k && direct == k, || format!("n={n}: {direct}, oracle {oracle}"));
    }
    f
}

fn symmetry_suite() -> Outcome {
    let mut f = Vec::new();
    for n in 3..=12 {
        let field = field(n);
        for t in 2..n {
            let s = n - t + 1;
            let check = check_symmetry(&field, t, None).unwrap();
            claim(&mut f, check.passed, || format!("n={n} t={t}: {:?}", check.counterexample));
            // brute-force restricted multisets and boundary values, independently
            let rt = restricted_multiset(&field, (1 << t) - 1).unwrap();
            let rs = restricted_multiset(&field, (1 << s) - 1).unwrap();
            claim(&mut f, rt.values == rs.values, || format!("n={n} t={t}: restricted"));
            let bt = spectrum_bruteforce(&field, (1 << t) - 1).unwrap();
            let bs = spectrum_bruteforce(&field, (1 << s) - 1).unwrap();
            claim(
                &mut f,
                bs.delta0 + 2 == bt.delta1 && bs.delta1 == bt.delta0 + 2,
                || format!("n={n} t={t}: boundary swap"),
            );
            let pt = kernel_profile(&field, t).unwrap();
            let ps = kernel_profile(&field, s).unwrap();
            claim(&mut f, pt.counts == ps.counts, || format!("n={n} t={t}: profiles"));
        }
    }
    f
}

fn system_equivalence() -> Outcome {
    let mut f = Vec::new();
    for n in 3..=10 {
        let field = field(n);
        for t in 2..n {
            let check = check_system_equivalence(&field, t, None);
            claim(&mut f, check.passed, || format!("n={n} t={t}: {:?}", check.counterexample));
        }
    }
    f
}

fn nu0_and_census() -> Outcome {
    let mut f = Vec::new();
    for n in 4..=14 {
        let field = field(n);
        let closed = nu0_closed_form(n).unwrap();
        // independent count: b != 1 with x^8 + b x^2 + (b+1) x injective off {0, 1}
        let counted = (0..1u64 << n)
            .filter(|&b| b != 1)
            .filter(|&b| {
                let map = LinearizedMap::from_fn(&field, MapLabel::P { t: 3, b }, |x| {
                    field.frobenius(x, 3) ^ field.mul(b, field.square(x)) ^ field.mul(b ^ 1, x)
                });
                map.kernel_dim() == 1
            })
            .count() as u64;
        claim(&mut f, closed == counted && counted == nu0_exhaustive(&field).unwrap(), || {
            format!("nu0 n={n}: {closed} vs {counted}")
        });
    }
    for n in 2..=16 {
        let closed = cubic_census_closed_form(n).unwrap();
        let counted = cubic_census_exhaustive(&field(n)).unwrap();
        claim(&mut f, closed == counted, || format!("census n={n}: {closed:?} vs {counted:?}"));
    }
    f
}

fn half_exponents() -> Outcome {
    let mut f = Vec::new();
    for n in [6, 8, 10, 12, 14, 16] {
        for family in [Family::Half, Family::HalfPlus1] {
            let closed = closed_form_spectrum(n, family).unwrap();
            let brute = spectrum_bruteforce(&field(n), (1 << family.t(n)) - 1)
                .unwrap()
                .without_modulus();
            claim(&mut f, closed == brute, || format!("n={n} {}", family.name()));
        }
    }
    let half = closed_form_spectrum(8, Family::Half).unwrap();
    claim(&mut f, half.omega == omega(&[(14, 1), (2, 121), (0, 134)]), || format!("{:?}", half.omega));
    let half1 = closed_form_spectrum(8, Family::HalfPlus1).unwrap();
    claim(&mut f, half1.omega == omega(&[(16, 1), (2, 120), (0, 135)]), || format!("{:?}", half1.omega));
    f
}

/// Weight-4 words by plain 4-subset enumeration.
fn weight4_by_subsets(field: &Field) -> u128 {
    let q = field.size() as u64;
    let p7: Vec<u64> = (0..q).map(|x| field.pow(x, 7)).collect();
    let mut count = 0;
    for x in 1..q {
        for y in x + 1..q {
            for z in y + 1..q {
                let w = x ^ y ^ z;
                if w > z && p7[x as usize] ^ p7[y as usize] ^ p7[z as usize] == p7[w as usize] {
                    count += 1;
                }
            }
        }
    }
    count
}

fn code_weights() -> Outcome {
    let mut f = Vec::new();
    for n in 4..=64 {
        let c = code_weights_closed_form(n).unwrap();
        let expected = if n % 2 == 1 { 0 } else { ((1u128 << n) - 1) / 3 };
        claim(&mut f, c.b3 == expected, || format!("n={n}: B3 = {}", c.b3));
    }
    for n in 4..=10 {
        let field = field(n);
        let closed = code_weights_closed_form(n).unwrap();
        let counted = code_weights_exhaustive(&field).unwrap();
        claim(&mut f, closed == counted, || format!("n={n}: {closed:?} vs enumeration {counted:?}"));
        let omega6 = spectrum_bruteforce(&field, 7).unwrap().omega(6) as u128;
        let len = (1u128 << n) - 1;
        claim(&mut f, counted.b3 + counted.b4 == len * omega6, || {
            format!(
                "n={n}: B3 + B4 = {} but (2^n-1) omega_6 = {}",
                counted.b3 + counted.b4,
                len * omega6
            )
        });
        if n <= 7 {
            let b4 = weight4_by_subsets(&field);
            claim(&mut f, b4 == counted.b4, || format!("n={n}: subsets give B4 = {b4}"));
        }
    }
    let n6 = code_weights_exhaustive(&field(6)).unwrap();
    claim(&mut f, n6.b3 == 21, || format!("n=6: B3 = {}", n6.b3));
    claim(&mut f, n6.b4 == 42, || format!("n=6: B4 = {} (expected 42)", n6.b4));
    f
}

fn conjecture() -> Outcome {
    let mut f = Vec::new();
    let findings = conjecture_scan(4, 16).unwrap();
    for finding in &findings {
        let (n, t) = (finding.n, finding.t);
        claim(&mut f, finding.apn == conjectured_apn(n, t), || {
            format!("n={n} t={t}: apn={} delta={}", finding.apn, finding.delta)
        });
        if finding.delta <= 4 && t >= 3 && t + 2 <= n {
            let (lo, hi) = uniformity_window(n).unwrap();
            claim(&mut f, (lo..=hi).contains(&(t as f64)), || {
                format!("n={n} t={t}: delta={} outside [{lo:.3}, {hi:.3}]", finding.delta)
            });
        }
    }
    // the scan agrees with brute force where that is cheap
    for finding in findings.iter().filter(|x| x.n <= 10) {
        let brute = spectrum_bruteforce(&field(finding.n), (1 << finding.t) - 1).unwrap();
        claim(&mut f, brute.delta_max == finding.delta, || {
            format!("n={} t={}: scan delta", finding.n, finding.t)
        });
    }
    f
}

fn modulus_independence() -> Outcome {
    let mut f = Vec::new();
    let a = Field::new(8, Some(0x11b)).unwrap();
    let b = Field::new(8, Some(0x11d)).unwrap();
    for d in 1..255 {
        let sa = spectrum_bruteforce(&a, d).unwrap().without_modulus();
        let sb = spectrum_bruteforce(&b, d).unwrap().without_modulus();
        claim(&mut f, sa == sb, || format!("d={d}"));
    }
    f
}

fn non_vacuity() -> Outcome {
    let mut f = Vec::new();
    for seed in 0..8 {
        let mut cfg = VerifyConfig::new(4, 8);
        cfg.fault_seed = Some(seed);
        let report = run_all(&cfg).unwrap();
        claim(&mut f, !report.all_passed, || format!("seed {seed}: fault undetected"));
    }
    claim(&mut f, run_all(&VerifyConfig::new(4, 8)).unwrap().all_passed, || {
        "clean run fails".into()
    });
    f
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("oracle equivalence", oracle_equivalence),
        ("x^7 closed form", x7_reproduction),
        ("Kloosterman consistency", kloosterman_consistency),
        ("symmetry suite", symmetry_suite),
        ("system equivalence", system_equivalence),
        ("nu0 and cubic census", nu0_and_census),
        ("half-exponent closed forms", half_exponents),
        ("code weights", code_weights),
        ("conjecture scan", conjecture),
        ("modulus independence", modulus_independence),
        ("non-vacuity", non_vacuity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let failures = run();
        let secs = start.elapsed().as_secs_f64();
        if failures.is_empty() {
            println!("criterion {:>2} PASS  {name} ({secs:.1}s)", i + 1);
        } else {
            failed += 1;
            println!(
                "criterion {:>2} FAIL  {name} ({secs:.1}s): {} failed claim(s): {}",
                i + 1,
                failures.len(),
                failures.join("; ")
            );
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
