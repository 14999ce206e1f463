//! The three-state lively walk `U = S(C ⊗ I)` on the cycle `C_n`.
//!
//! States are indexed coin-major: amplitude `c·n + v` belongs to coin state
//! `c` at vertex `v`. Coin state 0 steps to `v − 1`, state 1 to `v + 1` and
//! state 2 jumps to `v + a` (all mod `n`).

use std::f64::consts::TAU;
use std::io::Write;

use rayon::prelude::*;

use crate::coins::{Coin3, CoinFamily};
use crate::error::{Error, Result};
use crate::exactnum::{eig3_unitary, ComplexF, DenseMatrix, Mat3, C3, DEFAULT_TOL};

/// Largest `n` for which a dense `3n × 3n` operator may be built.
pub const DENSE_GUARD: usize = 4096;
/// Normalization tolerance for states.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct WalkSpec {
    n: usize,
    a: usize,
    coin: Coin3,
    c: C3,
}

impl WalkSpec {
    /// Requires `n ≥ 2`, `0 ≤ a ≤ ⌊n/2⌋` and a real coin that classifies into a family.
    pub fn new(n: usize, a: usize, coin: Coin3) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidWalk(format!("cycle length n = {n} < 2")));
        }
        if a > n / 2 {
            return Err(Error::InvalidWalk(format!("liveliness a = {a} > ⌊{n}/2⌋")));
        }
        if coin.family().is_none() {
            return Err(Error::NotPermutative);
        }
        if coin.matrix().max_imag() > 0.0 {
            return Err(Error::InvalidWalk("coin has complex entries".into()));
        }
        let c = coin.matrix().to_c3();
        Ok(WalkSpec { n, a, coin, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn coin(&self) -> &Coin3 {
        &self.coin
    }

    pub fn family(&self) -> CoinFamily {
        self.coin.family().expect("checked on construction")
    }

    pub fn dim(&self) -> usize {
        3 * self.n
    }

    /// Applies `U` to a length-`3n` amplitude vector.
    pub fn apply(&self, psi: &[ComplexF]) -> Vec<ComplexF> {
        let mut out = vec![ComplexF::new(0.0, 0.0); psi.len()];
        self.apply_into(psi, &mut out);
        out
    }

    pub(crate) fn apply_into(&self, psi: &[ComplexF], out: &mut [ComplexF]) {
        let n = self.n;
        let shift = ShiftOperator::new(n, self.a);
        for c in 0..3 {
            let row = self.c[c];
            for v in 0..n {
                let amp = row[0] * psi[v] + row[1] * psi[n + v] + row[2] * psi[2 * n + v];
                out[c * n + shift.position(c, v)] = amp;
            }
        }
    }
}

/// The conditional shift `S^{(n,a)}`, a permutation of the `3n` basis states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftOperator {
    n: usize,
    a: usize,
}

impl ShiftOperator {
    pub fn new(n: usize, a: usize) -> Self {
        ShiftOperator { n, a }
    }

    /// Vertex reached from `v` in coin state `c`.
    pub fn position(&self, c: usize, v: usize) -> usize {
        let n = self.n;
        match c {
            0 => (v + n - 1) % n,
            1 => (v + 1) % n,
            _ => (v + self.a) % n,
        }
    }

    /// Flat index that basis state `idx` is sent to.
    pub fn target(&self, idx: usize) -> usize {
        let (c, v) = (idx / self.n, idx % self.n);
        c * self.n + self.position(c, v)
    }

    pub fn apply(&self, psi: &[ComplexF]) -> Vec<ComplexF> {
        let mut out = vec![ComplexF::new(0.0, 0.0); psi.len()];
        for (i, &amp) in psi.iter().enumerate() {
            out[self.target(i)] = amp;
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let d = 3 * self.n;
        let mut m = DenseMatrix::zeros(d, d);
        for j in 0..d {
            m[(self.target(j), j)] = ComplexF::new(1.0, 0.0);
        }
        m
    }
}

pub fn shift_operator(n: usize, a: usize) -> ShiftOperator {
    ShiftOperator::new(n, a)
}

/// Dense `S(C ⊗ I_n)`.
pub fn evolution_operator(spec: &WalkSpec) -> Result<DenseMatrix> {
    if spec.n > DENSE_GUARD {
        return Err(Error::GuardExceeded {
            n: spec.n,
            limit: DENSE_GUARD,
        });
    }
    let n = spec.n;
    let shift = ShiftOperator::new(n, spec.a);
    let mut u = DenseMatrix::zeros(3 * n, 3 * n);
    for c in 0..3 {
        for d in 0..3 {
            for v in 0..n {
                u[(c * n + shift.position(c, v), d * n + v)] = spec.c[c][d];
            }
        }
    }
    Ok(u)
}

/// A normalized amplitude vector over coin ⊗ position.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<ComplexF>,
}

impl StateVector {
    pub fn new(n: usize, amps: Vec<ComplexF>) -> Result<Self> {
        if amps.len() != 3 * n {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for n = {n} (need {})",
                amps.len(),
                3 * n
            )));
        }
        let s = StateVector { n, amps };
        let norm = s.norm_sqr();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(Error::NotNormalized(norm));
        }
        Ok(s)
    }

    /// `|coin⟩ ⊗ |vertex⟩`.
    pub fn localized(n: usize, coin: usize, vertex: usize) -> Result<Self> {
        if coin >= 3 || vertex >= n {
            return Err(Error::DimensionMismatch(format!(
                "basis state ({coin}, {vertex}) outside 3 × {n}"
            )));
        }
        let mut amps = vec![ComplexF::new(0.0, 0.0); 3 * n];
        amps[coin * n + vertex] = ComplexF::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[ComplexF] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Euclidean distance to another state of the same size.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

fn check_state(spec: &WalkSpec, psi: &StateVector) -> Result<()> {
    if psi.n != spec.n {
        return Err(Error::DimensionMismatch(format!(
            "state for n = {} on a walk with n = {}",
            psi.n, spec.n
        )));
    }
    let norm = psi.norm_sqr();
    if !((norm - 1.0).abs() <= NORM_TOL) {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

/// `Ψ(t) = Uᵗ Ψ₀` by `t` sequential steps.
pub fn evolve(spec: &WalkSpec, psi0: &StateVector, t: u64) -> Result<StateVector> {
    let mut out = psi0.clone();
    evolve_each(spec, psi0, t, |_, psi| out = psi.clone())?;
    Ok(out)
}

/// Runs `t` steps, calling `visit` on `Ψ(0), Ψ(1), …, Ψ(t)`.
pub fn evolve_each(
    spec: &WalkSpec,
    psi0: &StateVector,
    t: u64,
    mut visit: impl FnMut(u64, &StateVector),
) -> Result<()> {
    check_state(spec, psi0)?;
    let mut cur = psi0.clone();
    let mut next = vec![ComplexF::new(0.0, 0.0); cur.amps.len()];
    visit(0, &cur);
    for step in 1..=t {
        spec.apply_into(&cur.amps, &mut next);
        std::mem::swap(&mut cur.amps, &mut next);
        visit(step, &cur);
    }
    Ok(())
}

/// Vertex probabilities `Σ_c |ψ(c·n + v)|²`.
pub fn distribution(psi: &StateVector) -> Vec<f64> {
    let n = psi.n;
    (0..n)
        .map(|v| (0..3).map(|c| psi.amps[c * n + v].norm_sqr()).sum())
        .collect()
}

/// Writes `t,position,probability` rows for `t = 0..=tmax`.
pub fn write_distribution_csv<W: Write>(
    out: &mut W,
    spec: &WalkSpec,
    psi0: &StateVector,
    tmax: u64,
) -> Result<()> {
    let mut io_err = None;
    writeln!(out, "t,position,probability").map_err(io_error)?;
    evolve_each(spec, psi0, tmax, |t, psi| {
        if io_err.is_some() {
            return;
        }
        for (v, p) in distribution(psi).into_iter().enumerate() {
            if let Err(e) = writeln!(out, "{t},{v},{p:.16e}") {
                io_err = Some(e);
                return;
            }
        }
    })?;
    match io_err {
        Some(e) => Err(io_error(e)),
        None => Ok(()),
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::NumericalFailure(format!("write failed: {e}"))
}

/// One momentum block: `U_k = D_k C` with `D_k = diag(e^{ik}, e^{−ik}, e^{−ika})`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedBlock {
    pub l: usize,
    pub k: f64,
    pub dk: Mat3,
    pub uk: Mat3,
}

pub fn reduced_block(spec: &WalkSpec, l: usize) -> Result<ReducedBlock> {
    if l >= spec.n {
        return Err(Error::InvalidWalk(format!("block l = {l} outside 0..{}", spec.n)));
    }
    let k = TAU * l as f64 / spec.n as f64;
    let phases = block_phases(spec.n, spec.a, l);
    let zero = ComplexF::new(0.0, 0.0);
    let mut dk = [[zero; 3]; 3];
    let mut uk = [[zero; 3]; 3];
    for i in 0..3 {
        dk[i][i] = phases[i];
        for j in 0..3 {
            uk[i][j] = phases[i] * spec.c[i][j];
        }
    }
    Ok(ReducedBlock {
        l,
        k,
        dk: Mat3::Float(dk),
        uk: Mat3::Float(uk),
    })
}

/// `(e^{ik}, e^{−ik}, e^{−ika})` at `k = 2πl/n`, with each phase reduced
/// through its integer multiple of `l` so that exact roots of unity stay exact
/// where the floating point allows.
fn block_phases(n: usize, a: usize, l: usize) -> [ComplexF; 3] {
    let unit = |m: usize| ComplexF::from_polar(1.0, TAU * (m % n) as f64 / n as f64);
    [unit(l), unit(n - l % n), unit((n - (l * a) % n) % n)]
}

/// `φ_k ⊗`-lift of a coin vector: amplitude `ν_c e^{ikv}/√n` at `c·n + v`.
pub fn momentum_lift(n: usize, l: usize, nu: &[ComplexF; 3]) -> Vec<ComplexF> {
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = Vec::with_capacity(3 * n);
    for &c in nu {
        for v in 0..n {
            let phase = ComplexF::from_polar(scale, TAU * ((l * v) % n) as f64 / n as f64);
            out.push(c * phase);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub l: usize,
    pub eigenvalue: ComplexF,
}

/// All `3n` eigenvalues, block by block in ascending `l`.
pub fn spectrum(spec: &WalkSpec) -> Result<Vec<SpectrumEntry>> {
    let blocks: Vec<Vec<SpectrumEntry>> = (0..spec.n)
        .into_par_iter()
        .map(|l| {
            let b = reduced_block(spec, l)?;
            let vals = eig3_unitary(&b.uk.to_c3(), DEFAULT_TOL)?;
            Ok(vals.iter().map(|&eigenvalue| SpectrumEntry { l, eigenvalue }).collect())
        })
        .collect::<Result<_>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// `{1, λ⁺, λ⁻}` for an X coin with parameter `x` on a block where `e^{−ika} = 1`:
/// `λ^± = (x − 1)/2 + x cos k ± √((x + 2x cos k + 1)(x + 2x cos k − 3))/2`.
pub fn eigenvalues_closed_form(x: f64, k: f64) -> [ComplexF; 3] {
    let ck = k.cos();
    let u = x + 2.0 * x * ck;
    let disc = ComplexF::new((u + 1.0) * (u - 3.0), 0.0).sqrt();
    let mid = ComplexF::new((x - 1.0) / 2.0 + x * ck, 0.0);
    [ComplexF::new(1.0, 0.0), mid + disc / 2.0, mid - disc / 2.0]
}

/// [`eigenvalues_closed_form`] for block `l` of `spec`, refusing blocks where
/// `n ∤ l·a`.
pub fn eigenvalues_closed_form_checked(spec: &WalkSpec, l: usize) -> Result<[ComplexF; 3]> {
    if spec.family() != CoinFamily::X {
        return Err(Error::InvalidWalk(format!(
            "closed form needs an X coin, got {}",
            spec.family()
        )));
    }
    if (l * spec.a) % spec.n != 0 {
        return Err(Error::PhaseConditionViolated {
            n: spec.n,
            a: spec.a,
            l,
        });
    }
    let x = spec.coin.params().expect("classified")[0].re();
    Ok(eigenvalues_closed_form(x, TAU * l as f64 / spec.n as f64))
}
