//! Fixed-size 3×3 matrices in exact-rational or complex floating form.

use num_complex::Complex64;

use super::rational::Rational;
use crate::error::Result;

pub type ComplexF = Complex64;

/// Row-major 3×3 complex matrix.
pub type C3 = [[ComplexF; 3]; 3];

/// Row-major 3×3 rational matrix.
pub type Q3 = [[Rational; 3]; 3];

#[derive(Clone, Debug, PartialEq)]
pub enum Mat3 {
    Exact(Q3),
    Float(C3),
}

impl Mat3 {
    pub fn identity() -> Self {
        Mat3::Exact(q3_identity())
    }

    pub fn from_real(rows: [[f64; 3]; 3]) -> Self {
        Mat3::Float(rows.map(|r| r.map(|v| ComplexF::new(v, 0.0))))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Mat3::Exact(_))
    }

    pub fn to_c3(&self) -> C3 {
        match self {
            Mat3::Exact(q) => q3_to_c3(q),
            Mat3::Float(c) => *c,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> ComplexF {
        match self {
            Mat3::Exact(q) => ComplexF::new(q[i][j].to_f64(), 0.0),
            Mat3::Float(c) => c[i][j],
        }
    }

    /// Exact product when both sides are exact, floating otherwise.
    pub fn mul(&self, rhs: &Mat3) -> Result<Mat3> {
        match (self, rhs) {
            (Mat3::Exact(a), Mat3::Exact(b)) => Ok(Mat3::Exact(q3_mul(a, b)?)),
            _ => Ok(Mat3::Float(c3_mul(&self.to_c3(), &rhs.to_c3()))),
        }
    }

    pub fn transpose(&self) -> Mat3 {
        match self {
            Mat3::Exact(q) => Mat3::Exact(transpose(q)),
            Mat3::Float(c) => Mat3::Float(transpose(c)),
        }
    }

    pub fn neg(&self) -> Result<Mat3> {
        Ok(match self {
            Mat3::Exact(q) => {
                let mut out = *q;
                for row in out.iter_mut() {
                    for v in row.iter_mut() {
                        *v = v.checked_neg()?;
                    }
                }
                Mat3::Exact(out)
            }
            Mat3::Float(c) => Mat3::Float(c.map(|r| r.map(|v| -v))),
        })
    }

    /// ‖MᵀM − I‖_F with the plain (bilinear) transpose.
    pub fn orthogonality_defect(&self) -> f64 {
        let c = self.to_c3();
        frobenius_from_identity(&c3_mul(&transpose(&c), &c))
    }

    /// `MᵀM == I` in exact arithmetic; `None` for floating matrices.
    pub fn is_exactly_orthogonal(&self) -> Option<bool> {
        match self {
            Mat3::Exact(q) => Some(
                q3_mul(&transpose(q), q)
                    .map(|p| p == q3_identity())
                    .unwrap_or(false),
            ),
            Mat3::Float(_) => None,
        }
    }

    pub fn det(&self) -> ComplexF {
        det3(&self.to_c3())
    }

    pub fn max_imag(&self) -> f64 {
        match self {
            Mat3::Exact(_) => 0.0,
            Mat3::Float(c) => c.iter().flatten().map(|v| v.im.abs()).fold(0.0, f64::max),
        }
    }

    /// Frobenius distance between the two matrices.
    pub fn distance(&self, other: &Mat3) -> f64 {
        let (a, b) = (self.to_c3(), other.to_c3());
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += (a[i][j] - b[i][j]).norm_sqr();
            }
        }
        s.sqrt()
    }
}

pub fn q3_identity() -> Q3 {
    let mut m = [[Rational::ZERO; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::ONE;
    }
    m
}

pub fn q3_to_c3(q: &Q3) -> C3 {
    q.map(|r| r.map(|v| ComplexF::new(v.to_f64(), 0.0)))
}

pub fn q3_mul(a: &Q3, b: &Q3) -> Result<Q3> {
    let mut out = [[Rational::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Rational::ZERO;
            for k in 0..3 {
                acc = acc.checked_add(&a[i][k].checked_mul(&b[k][j])?)?;
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

pub fn c3_identity() -> C3 {
    let mut m = [[ComplexF::new(0.0, 0.0); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ComplexF::new(1.0, 0.0);
    }
    m
}

pub fn c3_mul(a: &C3, b: &C3) -> C3 {
    let mut out = [[ComplexF::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    out
}

pub fn transpose<T: Copy>(m: &[[T; 3]; 3]) -> [[T; 3]; 3] {
    let mut out = *m;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[j][i];
        }
    }
    out
}

pub fn adjoint(m: &C3) -> C3 {
    transpose(m).map(|r| r.map(|v| v.conj()))
}

pub fn det3(m: &C3) -> ComplexF {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn trace3(m: &C3) -> ComplexF {
    m[0][0] + m[1][1] + m[2][2]
}

/// ‖M − I‖_F.
pub fn frobenius_from_identity(m: &C3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let target = if i == j { 1.0 } else { 0.0 };
            s += (m[i][j] - target).norm_sqr();
        }
    }
    s.sqrt()
}

/// ‖M†M − I‖_F.
pub fn unitarity_defect(m: &C3) -> f64 {
    frobenius_from_identity(&c3_mul(&adjoint(m), m))
}

pub fn mat_vec(m: &C3, v: &[ComplexF; 3]) -> [ComplexF; 3] {
    [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}
