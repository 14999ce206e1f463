//! Seeded invariant suites behind `permwalk verify`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coins::{
    coin_from_rational, coin_from_theta, coin_from_xyz, decompose_linear_sum, grover_type,
    multiply, perm_matrix, Basis, Coin3, CoinFamily, PermIndex, Sign,
};
use crate::error::Result;
use crate::exactnum::{dense_eigenvalues, multiset_distance, ComplexF, Rational};
use crate::period::{cross_validate, Method, IDENTITY_TOL};
use crate::walk::{evolution_operator, spectrum, WalkSpec};

pub const SUITES: [&str; 6] = [
    "orthogonality",
    "closure",
    "decompose-roundtrip",
    "spectrum-symmetry",
    "blockdiag-equivalence",
    "period-consistency",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub passed: usize,
    pub total: usize,
    pub first_failure: Option<String>,
}

impl SuiteOutcome {
    fn from_checks(checks: impl IntoIterator<Item = std::result::Result<(), String>>) -> Self {
        let mut out = SuiteOutcome {
            passed: 0,
            total: 0,
            first_failure: None,
        };
        for c in checks {
            out.total += 1;
            match c {
                Ok(()) => out.passed += 1,
                Err(msg) => {
                    out.first_failure.get_or_insert(msg);
                }
            }
        }
        out
    }
}

fn family(rng: &mut ChaCha8Rng) -> CoinFamily {
    CoinFamily::ALL[rng.gen_range(0..4)]
}

fn sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-60..=60), rng.gen_range(1..=60)).expect("positive denominator")
}

/// A random coin: usually `θ`-parametrized, sometimes exact rational.
fn random_coin(rng: &mut ChaCha8Rng) -> Result<Coin3> {
    let f = family(rng);
    if rng.gen_bool(0.25) {
        let r = rational(rng);
        let (s1, s2) = (sign(rng), sign(rng));
        coin_from_rational(f, r, s1, s2)
    } else {
        Ok(coin_from_theta(f, rng.gen_range(0.0..TAU)))
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs one suite; `tmax` and `qmax` only matter for period checks.
pub fn run_suite(name: &str, seed: u64, samples: usize, tmax: u64, qmax: u64) -> Result<SuiteOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = match name {
        "orthogonality" => orthogonality(&mut rng, samples)?,
        "closure" => closure(&mut rng, samples)?,
        "decompose-roundtrip" => roundtrip(&mut rng, samples)?,
        "spectrum-symmetry" => symmetry(&mut rng, samples)?,
        "blockdiag-equivalence" => blockdiag(&mut rng, samples)?,
        "period-consistency" => period_consistency(tmax, qmax)?,
        other => unreachable!("unknown suite {other}"),
    };
    Ok(outcome)
}

fn orthogonality(rng: &mut ChaCha8Rng, samples: usize) -> Result<SuiteOutcome> {
    let mut checks = Vec::with_capacity(samples);
    for _ in 0..samples {
        let coin = random_coin(rng)?;
        let fam = coin.family().expect("family constructors classify");
        let defect = coin.matrix().orthogonality_defect();
        let exact_ok = coin.matrix().is_exactly_orthogonal().unwrap_or(true);
        let det = coin.matrix().det();
        let det_ok = (det - ComplexF::new(fam.det_sign() as f64, 0.0)).norm() <= 1e-10;
        checks.push(check(defect <= 1e-12 && exact_ok && det_ok, || {
            format!("{fam} coin with defect {defect:.3e}, det {det}")
        }));
    }
    Ok(SuiteOutcome::from_checks(checks))
}

fn closure(rng: &mut ChaCha8Rng, samples: usize) -> Result<SuiteOutcome> {
    let mut checks = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (a, b) = (random_coin(rng)?, random_coin(rng)?);
        let (fa, fb) = (a.family().unwrap(), b.family().unwrap());
        let basis = if fa.basis() == fb.basis() {
            Basis::Cyclic
        } else {
            Basis::Transposition
        };
        let want = CoinFamily::from_parts(basis, fa.sum_sign() * fb.sum_sign());
        checks.push(match multiply(&a, &b) {
            Ok(p) => check(p.family() == Some(want), || format!("{fa}·{fb} gave {:?}", p.family())),
            Err(e) => Err(format!("{fa}·{fb}: {e}")),
        });
    }
    Ok(SuiteOutcome::from_checks(checks))
}

fn roundtrip(rng: &mut ChaCha8Rng, samples: usize) -> Result<SuiteOutcome> {
    let mut checks = Vec::with_capacity(samples);
    for _ in 0..samples {
        let source = random_coin(rng)?;
        let fam = source.family().unwrap();
        let [x, y, z] = source.params().unwrap();
        let rebuilt = coin_from_xyz(fam, x, y, z, false)?;
        checks.push(match decompose_linear_sum(rebuilt.matrix()) {
            Ok(d) => check(d.basis == fam.basis() && d.xyz() == [x, y, z], || {
                format!("{fam} ({x:?}, {y:?}, {z:?}) came back as {d:?}")
            }),
            Err(e) => Err(format!("{fam}: {e}")),
        });
    }
    Ok(SuiteOutcome::from_checks(checks))
}

fn block_values(s: &[crate::walk::SpectrumEntry], l: usize) -> Vec<ComplexF> {
    s.iter().filter(|e| e.l == l).map(|e| e.eigenvalue).collect()
}

fn symmetry(rng: &mut ChaCha8Rng, samples: usize) -> Result<SuiteOutcome> {
    let mut checks = Vec::with_capacity(samples);
    for _ in 0..samples {
        let n = rng.gen_range(2..=12);
        let theta = rng.gen_range(0.0..TAU);
        let spec = WalkSpec::new(n, 0, coin_from_theta(CoinFamily::X, theta))?;
        let s = spectrum(&spec)?;
        let worst = (1..n)
            .map(|l| multiset_distance(&block_values(&s, l), &block_values(&s, n - l)))
            .fold(0.0, f64::max);
        checks.push(check(worst <= 1e-10, || {
            format!("n = {n}, θ = {theta}: blocks k and 2π − k differ by {worst:.3e}")
        }));
    }
    Ok(SuiteOutcome::from_checks(checks))
}

fn blockdiag(rng: &mut ChaCha8Rng, samples: usize) -> Result<SuiteOutcome> {
    let specs = (0..samples)
        .map(|_| {
            let n = rng.gen_range(2..=12);
            let a = rng.gen_range(0..=n / 2);
            WalkSpec::new(n, a, random_coin(rng)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let checks = specs
        .par_iter()
        .map(|spec| -> Result<std::result::Result<(), String>> {
            let blocks: Vec<_> = spectrum(spec)?.iter().map(|e| e.eigenvalue).collect();
            let dense = dense_eigenvalues(&evolution_operator(spec)?)?;
            let d = multiset_distance(&blocks, &dense);
            Ok(check(d <= 1e-8, || {
                format!("n = {}, a = {}: block and dense spectra differ by {d:.3e}", spec.n(), spec.a())
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteOutcome::from_checks(checks))
}

/// All ± permutation and ± Grover-type coins.
pub(crate) fn special_coins() -> Vec<(String, Coin3)> {
    let mut out = Vec::new();
    for p in PermIndex::ALL {
        let perm = perm_matrix(p);
        out.push((format!("{p}"), perm.clone()));
        out.push((format!("-{p}"), perm.neg().expect("small entries")));
        out.push((format!("(2/3)J-{p}"), grover_type(p, false)));
        out.push((format!("{p}-(2/3)J"), grover_type(p, true)));
    }
    out
}

fn period_consistency(tmax: u64, qmax: u64) -> Result<SuiteOutcome> {
    let mut cases = Vec::new();
    for n in 2..=8 {
        for (label, coin) in special_coins() {
            cases.push((n, label, coin));
        }
    }
    let methods = [Method::Analytic, Method::Spectral, Method::BruteForce];
    let checks = cases
        .par_iter()
        .map(|(n, label, coin)| -> Result<std::result::Result<(), String>> {
            let spec = WalkSpec::new(*n, 0, coin.clone())?;
            let r = cross_validate(&spec, tmax, qmax, &methods, IDENTITY_TOL)?;
            Ok(check(r.agreement, || format!("n = {n}, C = {label}: {:?}", r.results)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteOutcome::from_checks(checks))
}
