mod common;

use std::f64::consts::TAU;

use common::{frob, mul};
use num_complex::Complex64 as C;
use permwalk::coins::{
    classify, coin_from_rational, coin_from_theta, coin_from_xyz, decompose_linear_sum, is_permutative, multiply,
    pell_discriminant, pell_point, perm_matrix, solve_y_complex, Basis, Coin3, CoinFamily, PermIndex, Scalar, Sign,
};
use permwalk::exactnum::{Mat3, Rational};
use permwalk::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-200..=200), rng.gen_range(1..=200)).unwrap()
}

fn random_coin(rng: &mut ChaCha8Rng, family: CoinFamily) -> Coin3 {
    if rng.gen_bool(0.3) {
        let r = random_rational(rng);
        coin_from_rational(family, r, SIGNS[rng.gen_range(0..2)], SIGNS[rng.gen_range(0..2)]).unwrap()
    } else {
        coin_from_theta(family, rng.gen_range(0.0..TAU))
    }
}

fn transpose(m: &[[C; 3]; 3]) -> [[C; 3]; 3] {
    let mut t = *m;
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

fn identity() -> [[C; 3]; 3] {
    Mat3::identity().to_c3()
}

/// `det` computed from the entries, independently of the library.
fn det(m: &[[C; 3]; 3]) -> C {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Permutation matrix with `p_ij = 1` iff `π(i) = j`, built from the image list.
fn perm(images: [usize; 3]) -> [[C; 3]; 3] {
    let mut m = [[C::new(0.0, 0.0); 3]; 3];
    for (i, &j) in images.iter().enumerate() {
        m[i][j] = C::new(1.0, 0.0);
    }
    m
}

const IMAGES: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [1, 0, 2], [2, 1, 0]];

#[test]
fn permutation_convention() {
    for (p, images) in PermIndex::ALL.into_iter().zip(IMAGES) {
        assert_eq!(perm_matrix(p).matrix().to_c3(), perm(images), "{p}");
    }
}

#[test]
fn constructors_are_orthogonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for family in CoinFamily::ALL {
        for _ in 0..1000 {
            let coin = random_coin(&mut rng, family);
            let m = coin.matrix().to_c3();
            assert!(frob(&mul(&transpose(&m), &m), &identity()) <= 1e-12, "{family}");
            if coin.is_exact() {
                assert_eq!(coin.matrix().is_exactly_orthogonal(), Some(true));
            }
        }
    }
}

#[test]
fn decompose_inverts_construct() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for family in CoinFamily::ALL {
        for _ in 0..1000 {
            let [x, y, z] = random_coin(&mut rng, family).params().unwrap();
            let coin = coin_from_xyz(family, x, y, z, false).unwrap();
            let d = decompose_linear_sum(coin.matrix()).unwrap();
            assert_eq!((d.basis, d.xyz()), (family.basis(), [x, y, z]));
        }
    }
}

#[test]
fn sum_constraint_is_exactly_one_of_the_two_varieties() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for family in CoinFamily::ALL {
        for _ in 0..500 {
            let r = classify(random_coin(&mut rng, family).matrix()).unwrap();
            let [x, y, z] = r.params.map(Scalar::re);
            let on = |s: f64| (x + y + z - s).abs() <= 1e-10 && (x * x + y * y + z * z - 1.0).abs() <= 1e-10;
            assert!(on(1.0) != on(-1.0));
            assert!(on(family.sum_sign() as f64));
        }
    }
}

/// `det P4 = −1` and `Z = P4·X`, so Z carries determinant −1 and W carries +1.
#[test]
fn determinant_follows_basis_and_sum_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for family in CoinFamily::ALL {
        let basis_sign = if family.basis() == Basis::Cyclic { 1.0 } else { -1.0 };
        let want = basis_sign * family.sum_sign() as f64;
        assert_eq!(family.det_sign() as f64, want);
        for _ in 0..1000 {
            let coin = random_coin(&mut rng, family);
            let d = det(&coin.matrix().to_c3());
            assert!((d - C::new(want, 0.0)).norm() <= 1e-10, "{family}: det {d}");
        }
    }
    assert_eq!(det(&perm(IMAGES[3])), C::new(-1.0, 0.0));
}

#[test]
fn closure_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..1000 {
        let (fa, fb) = (CoinFamily::ALL[rng.gen_range(0..4)], CoinFamily::ALL[rng.gen_range(0..4)]);
        let (a, b) = (random_coin(&mut rng, fa), random_coin(&mut rng, fb));
        let p = multiply(&a, &b).unwrap();
        let report = classify(p.matrix()).unwrap();
        let basis = if fa.basis() == fb.basis() { Basis::Cyclic } else { Basis::Transposition };
        assert_eq!(report.family.basis(), basis);
        assert_eq!(report.family.sum_sign(), fa.sum_sign() * fb.sum_sign());
    }
}

#[test]
fn x_family_is_a_homomorphic_image_of_the_circle() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..1000 {
        let (s, t) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
        let p = multiply(&coin_from_theta(CoinFamily::X, s), &coin_from_theta(CoinFamily::X, t)).unwrap();
        let want = coin_from_theta(CoinFamily::X, (s + t) % TAU);
        assert!(p.matrix().distance(want.matrix()) <= 1e-10);
    }
}

#[test]
fn delta_squares_to_grover() {
    let grover = permwalk::coins::grover_type(PermIndex::P1, false).matrix().to_c3();
    for theta in [TAU / 4.0, 3.0 * TAU / 4.0] {
        let d = coin_from_theta(CoinFamily::X, theta).matrix().to_c3();
        assert!(frob(&mul(&d, &d), &grover) <= 1e-12);
    }
}

/// Rotation by `t` about the unit axis `u` (Rodrigues).
fn rotation(u: [f64; 3], t: f64) -> [[f64; 3]; 3] {
    let (s, c) = t.sin_cos();
    let mut m = [[0.0; 3]; 3];
    let k = [[0.0, -u[2], u[1]], [u[2], 0.0, -u[0]], [-u[1], u[0], 0.0]];
    for i in 0..3 {
        for j in 0..3 {
            let id = if i == j { 1.0 } else { 0.0 };
            m[i][j] = c * id + s * k[i][j] + (1.0 - c) * u[i] * u[j];
        }
    }
    m
}

/// A matrix lies in the span of the permutation matrices iff all its row
/// and column sums are equal.
fn in_permutation_span(m: &[[f64; 3]; 3]) -> bool {
    let s = m[0].iter().sum::<f64>();
    (0..3).all(|i| (m[i].iter().sum::<f64>() - s).abs() < 1e-9)
        && (0..3).all(|j| ((0..3).map(|i| m[i][j]).sum::<f64>() - s).abs() < 1e-9)
}

#[test]
fn orthogonal_linear_sums_are_exactly_the_permutative_ones() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let perms: Vec<_> = IMAGES.iter().map(|&i| perm(i)).collect();
    for _ in 0..500 {
        // (i) an orthogonal linear sum over all six permutations, with the
        // redundancy P1 + P2 + P3 = P4 + P5 + P6 = J used to mix the bases
        let family = CoinFamily::ALL[rng.gen_range(0..4)];
        let [x, y, z] = random_coin(&mut rng, family).params().unwrap().map(Scalar::re);
        let t = rng.gen_range(-2.0..2.0);
        let coeffs = match family.basis() {
            Basis::Cyclic => [x - t, y - t, z - t, t, t, t],
            Basis::Transposition => [t, t, t, x - t, y - t, z - t],
        };
        let mut m = [[C::new(0.0, 0.0); 3]; 3];
        for (a, p) in coeffs.iter().zip(&perms) {
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] += p[i][j] * *a;
                }
            }
        }
        assert!(frob(&mul(&transpose(&m), &m), &identity()) <= 1e-10);
        let mat = Mat3::Float(m);
        assert!(is_permutative(&mat, 1e-10));
        assert!(decompose_linear_sum(&mat).is_ok());

        // (ii) a permutative orthogonal matrix obtained by permuting rows
        let coin = random_coin(&mut rng, family).matrix().to_c3();
        let q = mul(&perms[rng.gen_range(0..6)], &coin);
        let real = q.map(|r| r.map(|z| z.re));
        let permutative = (1..3).all(|i| {
            let (mut a, mut b) = (real[0], real[i]);
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            (0..3).all(|j| (a[j] - b[j]).abs() < 1e-10)
        });
        assert!(permutative);
        assert!(decompose_linear_sum(&Mat3::Float(q)).is_ok());

        // (iii) a generic rotation: decomposes iff it lies in the span
        let axis = if rng.gen_bool(0.2) {
            [1.0, 1.0, 1.0]
        } else {
            [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]
        };
        let norm = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
        let r = rotation(axis.map(|v| v / norm), rng.gen_range(0.1..3.0));
        let res = decompose_linear_sum(&Mat3::from_real(r));
        if in_permutation_span(&r) {
            assert!(res.is_ok());
        } else {
            assert_eq!(res, Err(Error::NotPermutative));
        }
    }
}

#[test]
fn complex_parameters_stay_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let complex_coin = |rng: &mut ChaCha8Rng, family: CoinFamily| {
        let x = C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
        let (y, _) = solve_y_complex(family, x);
        let z = C::new(family.sum_sign() as f64, 0.0) - x - y;
        coin_from_xyz(family, x, y, z, true).unwrap()
    };
    for _ in 0..500 {
        let (fa, fb) = (CoinFamily::ALL[rng.gen_range(0..4)], CoinFamily::ALL[rng.gen_range(0..4)]);
        let (a, b) = (complex_coin(&mut rng, fa), complex_coin(&mut rng, fb));
        let m = mul(&a.matrix().to_c3(), &b.matrix().to_c3());
        let scale = m.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        assert!(frob(&mul(&transpose(&m), &m), &identity()) <= 1e-8 * scale * scale);
        let sum: C = m[0].iter().sum();
        let want = (fa.sum_sign() * fb.sum_sign()) as f64;
        assert!((sum - C::new(want, 0.0)).norm() <= 1e-8 * scale);
    }
}

#[test]
fn rational_coins_use_all_four_sign_choices() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..100 {
        let r = random_rational(&mut rng);
        let (x, y) = pell_point(r).unwrap();
        let lhs = x.checked_mul(&x).unwrap().checked_sub(&Rational::from_integer(3).checked_mul(&y.checked_mul(&y).unwrap()).unwrap()).unwrap();
        assert_eq!(lhs, Rational::ONE, "r = {r}");
        for family in CoinFamily::ALL {
            for s1 in SIGNS {
                for s2 in SIGNS {
                    let coin = coin_from_rational(family, r, s1, s2).unwrap();
                    assert_eq!(coin.matrix().is_exactly_orthogonal(), Some(true));
                    let x = coin.params().unwrap()[0].exact().unwrap();
                    assert!(pell_discriminant(family, x).unwrap().sqrt_exact().is_some());
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn classify_agrees_with_the_constructor(family in 0usize..4, theta in 0.0..TAU) {
        let family = CoinFamily::ALL[family];
        let coin = coin_from_theta(family, theta);
        let r = classify(coin.matrix()).unwrap();
        prop_assert_eq!(r.family, family);
        prop_assert!(r.params.iter().zip(coin.params().unwrap()).all(|(a, b)| (a.re() - b.re()).abs() < 1e-12));
    }
}
