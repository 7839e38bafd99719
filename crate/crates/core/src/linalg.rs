//! Small exact linear algebra over ℚ: determinants, inverses and characteristic
//! polynomials of integer matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::RationalPolynomial;

/// Dense square matrix of rationals, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(n: usize) -> RatMatrix {
        RatMatrix { n, data: vec![BigRational::zero(); n * n] }
    }

    pub fn from_integers(n: usize, entries: &[i64]) -> RatMatrix {
        assert_eq!(entries.len(), n * n);
        RatMatrix {
            n,
            data: entries.iter().map(|&e| BigRational::from_integer(BigInt::from(e))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.n + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.data.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.n {
                self.data.swap(i * self.n + a, i * self.n + b);
            }
        }
    }

    pub fn determinant(&self) -> BigRational {
        let mut m = self.clone();
        let n = self.n;
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return BigRational::zero();
            };
            if pivot != col {
                m.swap_rows(pivot, col);
                det = -det;
            }
            let p = m.get(col, col).clone();
            det *= &p;
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) / &p;
                for c in col..n {
                    let v = m.get(r, c) - &factor * m.get(col, c);
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = RatMatrix::zeros(n);
        for i in 0..n {
            inv.set(i, i, BigRational::one());
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a.get(col, col).clone();
            for c in 0..n {
                let v = a.get(col, c) / &p;
                a.set(col, c, v);
                let v = inv.get(col, c) / &p;
                inv.set(col, c, v);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for c in 0..n {
                    let v = a.get(r, c) - &factor * a.get(col, c);
                    a.set(r, c, v);
                    let v = inv.get(r, c) - &factor * inv.get(col, c);
                    inv.set(r, c, v);
                }
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(uI - M)` via reduction to upper Hessenberg form.
    pub fn characteristic_polynomial(&self) -> RationalPolynomial {
        let n = self.n;
        let mut h = self.clone();
        // similarity transform to upper Hessenberg form
        for col in 0..n.saturating_sub(2) {
            let Some(pivot) = (col + 1..n).find(|&r| !h.get(r, col).is_zero()) else {
                continue;
            };
            h.swap_rows(pivot, col + 1);
            h.swap_cols(pivot, col + 1);
            let p = h.get(col + 1, col).clone();
            for r in col + 2..n {
                if h.get(r, col).is_zero() {
                    continue;
                }
                let factor = h.get(r, col) / &p;
                for c in 0..n {
                    let v = h.get(r, c) - &factor * h.get(col + 1, c);
                    h.set(r, c, v);
                }
                for i in 0..n {
                    let v = h.get(i, col + 1) + &factor * h.get(i, r);
                    h.set(i, col + 1, v);
                }
            }
        }
        // p_m(u) = (u - h_mm) p_{m-1} - sum_i h_im (prod_{j=i+1}^m h_{j,j-1}) p_{i-1}
        let x = RationalPolynomial::x();
        let mut polys: Vec<RationalPolynomial> = vec![RationalPolynomial::one()];
        for m in 0..n {
            let mut pm = &(&x - &RationalPolynomial::constant(h.get(m, m).clone())) * &polys[m];
            let mut prod = BigRational::one();
            for i in (0..m).rev() {
                prod *= h.get(i + 1, i);
                if prod.is_zero() {
                    break;
                }
                let coeff = &prod * h.get(i, m);
                if !coeff.is_zero() {
                    pm = &pm - &polys[i].scale(&coeff);
                }
            }
            polys.push(pm);
        }
        polys.pop().unwrap()
    }
}

/// Inverse of an integer matrix, either over ℤ (`modulus = None`, requires
/// determinant ±1) or over ℤ/m.
pub fn integer_matrix_inverse(n: usize, entries: &[i64], modulus: Option<i64>) -> Option<Vec<i64>> {
    let m = RatMatrix::from_integers(n, entries);
    let det = m.determinant();
    if det.is_zero() {
        return None;
    }
    let inv = m.inverse()?;
    let det_int = det.to_integer();
    // adjugate = det * inverse is integral
    let adj: Vec<BigInt> = inv.data.iter().map(|v| (v * &det).to_integer()).collect();
    match modulus {
        None => {
            if !det_int.abs().is_one() {
                return None;
            }
            adj.iter().map(|a| i64::try_from(a * &det_int).ok()).collect()
        }
        Some(md) => {
            let md_big = BigInt::from(md);
            let d = ((det_int % &md_big) + &md_big) % &md_big;
            let d_inv = mod_inverse(&d, &md_big)?;
            adj.iter()
                .map(|a| {
                    let v = ((a * &d_inv) % &md_big + &md_big) % &md_big;
                    i64::try_from(v).ok()
                })
                .collect()
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let egcd = num_integer::Integer::extended_gcd(a, m);
    if !egcd.gcd.is_one() {
        return None;
    }
    Some(((egcd.x % m) + m) % m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Faddeev–LeVerrier, used as an independent oracle for the Hessenberg route.
    fn faddeev_leverrier(m: &RatMatrix) -> Vec<BigRational> {
        let n = m.dim();
        let mul = |a: &RatMatrix, b: &RatMatrix| {
            let mut c = RatMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    let mut s = BigRational::zero();
                    for k in 0..n {
                        s += a.get(i, k) * b.get(k, j);
                    }
                    c.set(i, j, s);
                }
            }
            c
        };
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut mk = RatMatrix::zeros(n);
        for k in 1..=n {
            let mut prev = mul(m, &mk);
            for i in 0..n {
                let v = prev.get(i, i) + &coeffs[n - k + 1];
                prev.set(i, i, v);
            }
            mk = prev;
            let am = mul(m, &mk);
            let tr: BigRational = (0..n).map(|i| am.get(i, i).clone()).sum();
            coeffs[n - k] = -tr / q(k as i64);
        }
        coeffs
    }

    #[test]
    fn charpoly_matches_faddeev_leverrier() {
        let cases: Vec<(usize, Vec<i64>)> = vec![
            (1, vec![4]),
            (2, vec![2, 1, 1, 1]),
            (3, vec![0, 2, 2, 2, 0, 2, 2, 2, 0]),
            (4, vec![1, 2, 0, 3, 0, 0, 1, 4, 5, 1, 0, 0, 2, 0, 7, 1]),
            (4, vec![0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0]),
            (5, vec![0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 3, 0, 0, 1, 2]),
        ];
        for (n, e) in cases {
            let m = RatMatrix::from_integers(n, &e);
            let hess = m.characteristic_polynomial();
            let fl = faddeev_leverrier(&m);
            assert_eq!(hess.coeffs(), &fl[..], "matrix {e:?}");
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let m = RatMatrix::from_integers(2, &[2, 1, 1, 1]);
        assert_eq!(m.determinant(), q(1));
        assert_eq!(integer_matrix_inverse(2, &[2, 1, 1, 1], None), Some(vec![1, -1, -1, 2]));
        assert_eq!(integer_matrix_inverse(2, &[2, 0, 0, 1], None), None);
        // 2 is invertible mod 5 with inverse 3
        assert_eq!(integer_matrix_inverse(2, &[2, 0, 0, 1], Some(5)), Some(vec![3, 0, 0, 1]));
        assert_eq!(integer_matrix_inverse(2, &[1, 1, 1, 1], Some(7)), None);
    }
}
