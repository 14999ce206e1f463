//! Eigenvalues of 3×3 unitary matrices.
//!
//! Roots of the characteristic polynomial come from Cardano's formula and
//! are Newton-polished. Repeated roots are ill-conditioned in coefficient
//! space, so the two roots that remain after the most isolated one are
//! recomputed from a unitary deflation of the matrix itself, which keeps
//! every eigenvalue accurate to a few ulps even at exact degeneracies.

use std::f64::consts::TAU;

use super::mat3::{c3_identity, det3, mat_vec, trace3, unitarity_defect, ComplexF, C3};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-12;
const POLISH_TARGET: f64 = 1e-13;
const MAX_NEWTON: usize = 50;

/// Monic characteristic polynomial `λ³ + c2 λ² + c1 λ + c0`.
#[derive(Clone, Copy, Debug)]
pub struct CharPoly {
    pub c2: ComplexF,
    pub c1: ComplexF,
    pub c0: ComplexF,
}

impl CharPoly {
    pub fn of(m: &C3) -> Self {
        let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2]
            - m[0][2] * m[2][0]
            + m[1][1] * m[2][2]
            - m[1][2] * m[2][1];
        CharPoly {
            c2: -trace3(m),
            c1: minors,
            c0: -det3(m),
        }
    }

    pub fn eval(&self, z: ComplexF) -> ComplexF {
        ((z + self.c2) * z + self.c1) * z + self.c0
    }

    fn deriv(&self, z: ComplexF) -> ComplexF {
        (z * 3.0 + self.c2 * 2.0) * z + self.c1
    }

    /// Closed-form roots of the cubic.
    pub fn cardano(&self) -> [ComplexF; 3] {
        let shift = self.c2 / 3.0;
        let p = self.c1 - self.c2 * self.c2 / 3.0;
        let q = self.c2 * self.c2 * self.c2 * (2.0 / 27.0) - self.c2 * self.c1 / 3.0 + self.c0;
        let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
        let sq = disc.sqrt();
        // take the larger-magnitude branch to avoid cancellation
        let w = if (-q / 2.0 + sq).norm() >= (-q / 2.0 - sq).norm() {
            -q / 2.0 + sq
        } else {
            -q / 2.0 - sq
        };
        let omega = ComplexF::from_polar(1.0, TAU / 3.0);
        let u = w.cbrt();
        let mut roots = [ComplexF::new(0.0, 0.0); 3];
        let mut rot = ComplexF::new(1.0, 0.0);
        for r in roots.iter_mut() {
            let uk = u * rot;
            let t = if uk.norm() < 1e-300 { uk } else { uk - p / (uk * 3.0) };
            *r = t - shift;
            rot *= omega;
        }
        roots
    }

    /// Newton iteration; stops once the residual is below the polish target.
    pub fn polish(&self, mut z: ComplexF) -> ComplexF {
        for _ in 0..MAX_NEWTON {
            let f = self.eval(z);
            if f.norm() < POLISH_TARGET {
                break;
            }
            let d = self.deriv(z);
            if d.norm() < 1e-300 {
                break;
            }
            z -= f / d;
        }
        z
    }
}

/// Unitary reduction `M ≅ diag(λ₀, B)` around one eigenvector.
struct Deflation {
    lambda0: ComplexF,
    v0: [ComplexF; 3],
    basis: [[ComplexF; 3]; 2],
    block: [[ComplexF; 2]; 2],
}

fn check_unitary(m: &C3, tol: f64) -> Result<()> {
    let defect = unitarity_defect(m);
    if !defect.is_finite() || defect > tol {
        return Err(Error::NotUnitary { defect, tol });
    }
    Ok(())
}

fn cross(a: &[ComplexF; 3], b: &[ComplexF; 3]) -> [ComplexF; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(v: &[ComplexF; 3]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn normalized(v: [ComplexF; 3]) -> [ComplexF; 3] {
    let n = norm(&v);
    v.map(|c| c / n)
}

/// Hermitian inner product ⟨a, b⟩ = Σ conj(a_i) b_i.
fn inner(a: &[ComplexF; 3], b: &[ComplexF; 3]) -> ComplexF {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A vector in the null space of `a`, chosen from the largest row cross product.
fn null_vector(a: &C3) -> [ComplexF; 3] {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let best = pairs
        .iter()
        .map(|&(i, j)| cross(&a[i], &a[j]))
        .max_by(|x, y| norm(x).total_cmp(&norm(y)))
        .unwrap();
    let scale = a.iter().map(norm).fold(0.0, f64::max);
    if norm(&best) > (1e-8 * scale * scale).max(1e-14) {
        return normalized(best);
    }
    // rank ≤ 1: any vector bilinear-orthogonal to the dominant row
    let row = *a.iter().max_by(|x, y| norm(x).total_cmp(&norm(y))).unwrap();
    if norm(&row) < 1e-14 {
        return [ComplexF::new(1.0, 0.0), ComplexF::new(0.0, 0.0), ComplexF::new(0.0, 0.0)];
    }
    let e = c3_identity();
    let cand = (0..3)
        .map(|k| cross(&row, &e[k]))
        .max_by(|x, y| norm(x).total_cmp(&norm(y)))
        .unwrap();
    normalized(cand)
}

fn deflate(m: &C3) -> Result<Deflation> {
    let poly = CharPoly::of(m);
    let roots = poly.cardano().map(|z| poly.polish(z));
    let isolation = |i: usize| {
        (0..3)
            .filter(|&j| j != i)
            .map(|j| (roots[i] - roots[j]).norm())
            .fold(f64::INFINITY, f64::min)
    };
    let idx = (0..3).max_by(|&i, &j| isolation(i).total_cmp(&isolation(j))).unwrap();
    let lambda0 = roots[idx];
    if !lambda0.re.is_finite() || !lambda0.im.is_finite() {
        return Err(Error::NumericalFailure("non-finite cubic root".into()));
    }

    let mut shifted = *m;
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= lambda0;
    }
    let v0 = null_vector(&shifted);
    // the Rayleigh quotient of a normal matrix is second-order accurate,
    // which repairs the slow Newton convergence at a triple root
    let lambda0 = inner(&v0, &mat_vec(m, &v0));

    // complete v0 to an orthonormal basis {v0, u1, u2}
    let e = c3_identity();
    let k = (0..3).min_by(|&i, &j| v0[i].norm().total_cmp(&v0[j].norm())).unwrap();
    let proj = inner(&v0, &e[k]);
    let u1 = normalized([0, 1, 2].map(|i| e[k][i] - v0[i] * proj));
    let u2 = normalized(cross(&v0, &u1).map(|c| c.conj()));

    let mu1 = mat_vec(m, &u1);
    let mu2 = mat_vec(m, &u2);
    let block = [
        [inner(&u1, &mu1), inner(&u1, &mu2)],
        [inner(&u2, &mu1), inner(&u2, &mu2)],
    ];
    Ok(Deflation {
        lambda0,
        v0,
        basis: [u1, u2],
        block,
    })
}

fn block_eigenvalues(b: &[[ComplexF; 2]; 2]) -> [ComplexF; 2] {
    let mean = (b[0][0] + b[1][1]) / 2.0;
    let half = (b[0][0] - b[1][1]) / 2.0;
    let d = (half * half + b[0][1] * b[1][0]).sqrt();
    [mean + d, mean - d]
}

/// Principal argument folded into `[0, 2π)`, snapping values within 1e-12 of 2π to 0.
pub fn arg_2pi(z: ComplexF) -> f64 {
    let mut a = z.arg();
    if a < 0.0 {
        a += TAU;
    }
    if a >= TAU - 1e-12 {
        a = 0.0;
    }
    a
}

fn finish(poly: &CharPoly, m: &C3, vals: [ComplexF; 3], tol: f64) -> Result<()> {
    let scale = 1.0 + m.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    for v in vals {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NumericalFailure("non-finite eigenvalue".into()));
        }
        let r = poly.eval(v).norm();
        if r > RESIDUAL_TOL * scale * scale {
            return Err(Error::NumericalFailure(format!(
                "eigenvalue {v} has residual {r:.3e}"
            )));
        }
        if (v.norm() - 1.0).abs() > tol.max(1e-12) {
            return Err(Error::NumericalFailure(format!("eigenvalue {v} is off the unit circle")));
        }
    }
    Ok(())
}

/// The three eigenvalues of a unitary 3×3 matrix, sorted by argument in `[0, 2π)`.
pub fn eig3_unitary(m: &C3, tol: f64) -> Result<[ComplexF; 3]> {
    check_unitary(m, tol)?;
    let d = deflate(m)?;
    let [l1, l2] = block_eigenvalues(&d.block);
    let mut vals = [d.lambda0, l1, l2];
    finish(&CharPoly::of(m), m, vals, tol)?;
    vals.sort_by(|a, b| arg_2pi(*a).total_cmp(&arg_2pi(*b)));
    Ok(vals)
}

/// Eigenvalues with an orthonormal set of eigenvectors, sorted like [`eig3_unitary`].
pub fn eigenpairs3_unitary(m: &C3, tol: f64) -> Result<[(ComplexF, [ComplexF; 3]); 3]> {
    check_unitary(m, tol)?;
    let d = deflate(m)?;
    let b = d.block;
    let [l1, l2] = block_eigenvalues(&b);
    finish(&CharPoly::of(m), m, [d.lambda0, l1, l2], tol)?;

    let lift = |w: [ComplexF; 2]| -> [ComplexF; 3] {
        let n = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        [0, 1, 2].map(|i| (d.basis[0][i] * w[0] + d.basis[1][i] * w[1]) / n)
    };
    let one = ComplexF::new(1.0, 0.0);
    let zero = ComplexF::new(0.0, 0.0);
    let (w1, w2) = if (l1 - l2).norm() < 1e-9 {
        ([one, zero], [zero, one])
    } else {
        let vec_for = |l: ComplexF| -> [ComplexF; 2] {
            let a = [b[0][1], l - b[0][0]];
            let c = [l - b[1][1], b[1][0]];
            let na = a[0].norm() + a[1].norm();
            let nc = c[0].norm() + c[1].norm();
            if na.max(nc) < 1e-12 {
                if (l - b[0][0]).norm() < (l - b[1][1]).norm() {
                    [one, zero]
                } else {
                    [zero, one]
                }
            } else if na >= nc {
                a
            } else {
                c
            }
        };
        let w1 = vec_for(l1);
        // the second vector is the orthogonal complement of the first in the block
        let w2 = [-w1[1].conj(), w1[0].conj()];
        (w1, w2)
    };
    let mut pairs = [(d.lambda0, d.v0), (l1, lift(w1)), (l2, lift(w2))];
    pairs.sort_by(|a, b| arg_2pi(a.0).total_cmp(&arg_2pi(b.0)));
    Ok(pairs)
}

/// Sanity helper used in tests: ‖M v − λ v‖.
pub fn eigen_residual(m: &C3, lambda: ComplexF, v: &[ComplexF; 3]) -> f64 {
    let mv = mat_vec(m, v);
    (0..3).map(|i| (mv[i] - lambda * v[i]).norm_sqr()).sum::<f64>().sqrt()
}
