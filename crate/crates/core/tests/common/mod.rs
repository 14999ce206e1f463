//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls the library's walk or period code: the walk step is
//! written straight from the shift rule and periods come from powering the
//! operator column by column.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use permwalk::coins::Coin3;

pub fn entries(coin: &Coin3) -> [[C; 3]; 3] {
    coin.matrix().to_c3()
}

/// One step `S (C ⊗ I)` on a coin-major state: coin 0 moves `v → v − 1`,
/// coin 1 moves `v → v + 1`, coin 2 moves `v → v + a`.
pub fn step(c: &[[C; 3]; 3], n: usize, a: usize, psi: &[C]) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); 3 * n];
    for v in 0..n {
        for i in 0..3 {
            let amp: C = (0..3).map(|j| c[i][j] * psi[j * n + v]).sum();
            let w = match i {
                0 => (v + n - 1) % n,
                1 => (v + 1) % n,
                _ => (v + a) % n,
            };
            out[i * n + w] += amp;
        }
    }
    out
}

/// `‖Uᵗ − I‖_F` for `t = 1..=tmax`, stopping early once `stop` returns true.
pub fn defects(coin: &Coin3, n: usize, a: usize, tmax: u64, mut stop: impl FnMut(f64) -> bool) -> Vec<f64> {
    let c = entries(coin);
    let dim = 3 * n;
    let mut cols: Vec<Vec<C>> = (0..dim)
        .map(|j| {
            let mut e = vec![C::new(0.0, 0.0); dim];
            e[j] = C::new(1.0, 0.0);
            e
        })
        .collect();
    let mut out = Vec::new();
    for _ in 0..tmax {
        for col in cols.iter_mut() {
            *col = step(&c, n, a, col);
        }
        let mut s = 0.0;
        for (j, col) in cols.iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                s += (z - C::new(target, 0.0)).norm_sqr();
            }
        }
        let d = s.sqrt();
        out.push(d);
        if stop(d) {
            break;
        }
    }
    out
}

/// First `t ≤ tmax` with `‖Uᵗ − I‖_F ≤ 1e−8`.
pub fn oracle_period(coin: &Coin3, n: usize, a: usize, tmax: u64) -> Option<u64> {
    let d = defects(coin, n, a, tmax, |d| d <= 1e-8);
    match d.last() {
        Some(&last) if last <= 1e-8 => Some(d.len() as u64),
        _ => None,
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn frob(a: &[[C; 3]; 3], b: &[[C; 3]; 3]) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += (a[i][j] - b[i][j]).norm_sqr();
        }
    }
    s.sqrt()
}

pub fn mul(a: &[[C; 3]; 3], b: &[[C; 3]; 3]) -> [[C; 3]; 3] {
    let mut m = [[C::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}
