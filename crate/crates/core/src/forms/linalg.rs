//! Pointwise 4×4 linear algebra for antisymmetric component matrices.

use crate::Real;

pub type Mat4<T> = [[T; 4]; 4];

/// Pfaffian `a01 a23 − a02 a13 + a03 a12` of an antisymmetric matrix.
pub fn pfaffian<T: Real>(a: &Mat4<T>) -> T {
    a[0][1] * a[2][3] - a[0][2] * a[1][3] + a[0][3] * a[1][2]
}

/// Gauss–Jordan inverse with partial pivoting. `None` when a pivot falls
/// below `eps` times the largest entry.
pub fn invert<T: Real>(m: &Mat4<T>, eps: T) -> Option<Mat4<T>> {
    let scale = m.iter().flatten().fold(T::zero(), |acc, v| acc.max(v.abs()));
    if scale == T::zero() {
        return None;
    }
    let mut a = *m;
    let mut inv = identity::<T>();
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
        if !(a[pivot][col].abs() > eps * scale) {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for k in 0..4 {
            a[col][k] = a[col][k] / d;
            inv[col][k] = inv[col][k] / d;
        }
        for row in 0..4 {
            if row == col {
                continue;
            }
            let f = a[row][col];
            if f == T::zero() {
                continue;
            }
            for k in 0..4 {
                a[row][k] = a[row][k] - f * a[col][k];
                inv[row][k] = inv[row][k] - f * inv[col][k];
            }
        }
    }
    Some(inv)
}

pub fn identity<T: Real>() -> Mat4<T> {
    let mut m = [[T::zero(); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn matmul<T: Real>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut out = [[T::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).fold(T::zero(), |acc, k| acc + a[i][k] * b[k][j]);
        }
    }
    out
}

pub fn max_abs_diff<T: Real>(a: &Mat4<T>, b: &Mat4<T>) -> T {
    let mut m = T::zero();
    for i in 0..4 {
        for j in 0..4 {
            let d = (a[i][j] - b[i][j]).abs();
            if d.is_nan() || d > m {
                m = d;
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn antisym(a01: f64, a02: f64, a03: f64, a12: f64, a13: f64, a23: f64) -> Mat4<f64> {
        [[0.0, a01, a02, a03], [-a01, 0.0, a12, a13], [-a02, -a12, 0.0, a23], [-a03, -a13, -a23, 0.0]]
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = antisym(1.0, -2.0, 0.5, 3.0, 0.25, -1.5);
        let inv = invert(&m, 1e-14).unwrap();
        assert!(max_abs_diff(&matmul(&m, &inv), &identity()) < 1e-13);
    }

    #[test]
    fn pfaffian_squares_to_determinant_sign() {
        // det = pf² for antisymmetric 4x4; pf = 1*1 for dt∧dx + dy∧dz
        let m = antisym(1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert_eq!(pfaffian(&m), 1.0);
        assert!(invert(&antisym(1.0, 0.0, 0.0, 0.0, 0.0, 0.0), 1e-12).is_none());
    }

    #[test]
    fn single_precision_inverse() {
        let m: Mat4<f32> = [[0.0, 2.0, 0.0, 0.0], [-2.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 4.0], [0.0, 0.0, -4.0, 0.0]];
        let inv = invert(&m, 1e-6).unwrap();
        assert!((inv[0][1] + 0.5).abs() < 1e-6);
    }
}
