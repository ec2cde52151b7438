//! Dense exact matrices over a [`Field`], with fraction-free determinants,
//! kernels, characteristic polynomials and inverses.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Clone, PartialEq)]
pub struct Mat<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}{}", self.at(r, c), if c + 1 < self.cols { ", " } else { "" })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Mat<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// 2x2 convenience constructor.
    pub fn mat2(a: F, b: F, c: F, d: F) -> Self {
        Mat { rows: 2, cols: 2, data: vec![a, b, c, d] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut F {
        &mut self.data[r * self.cols + c]
    }

    pub fn entries(&self) -> impl Iterator<Item = &F> {
        self.data.iter()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c).add(rhs.at(r, c)))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c).sub(rhs.at(r, c)))
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|e| e.mul(s))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mat_mul");
        Mat::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = F::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.at(r, k).mul(rhs.at(k, c)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.at(r, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> F {
        assert!(self.is_square());
        let mut acc = F::zero();
        for i in 0..self.rows {
            acc = acc.add(self.at(i, i));
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(self.rows)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return F::one();
        }
        let mut m = self.clone();
        let mut prev = F::one();
        let mut sign = 1i32;
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                match (k + 1..n).find(|&r| !m.at(r, k).is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return F::zero(),
                }
            }
            let prev_inv = prev.inv().expect("previous pivot is nonzero");
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = m.at(i, j).mul(m.at(k, k)).sub(&m.at(i, k).mul(m.at(k, j)));
                    *m.at_mut(i, j) = t.mul(&prev_inv);
                }
                *m.at_mut(i, k) = F::zero();
            }
            prev = m.at(k, k).clone();
        }
        let d = m.at(n - 1, n - 1).clone();
        if sign < 0 {
            d.neg()
        } else {
            d
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form; returns pivot column indices.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.at(row, col).inv().expect("pivot nonzero");
            for c in col..self.cols {
                let t = self.at(row, c).mul(&inv);
                *self.at_mut(row, c) = t;
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let f = self.at(r, col).clone();
                    for c in col..self.cols {
                        let t = self.at(r, c).sub(&f.mul(self.at(row, c)));
                        *self.at_mut(r, c) = t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right null space. Exact; empty when the matrix has full
    /// column rank.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.sort_unstable();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![F::zero(); self.cols];
            v[fc] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.at(r, fc).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inv(&self) -> Result<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Mat::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.at(r, c).clone()
            } else if c - n == r {
                F::one()
            } else {
                F::zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularMatrix);
        }
        Ok(Mat::from_fn(n, n, |r, c| aug.at(r, n + c).clone()))
    }

    /// Characteristic polynomial coefficients [c_0, ..., c_n] with
    /// p(t) = c_0 + c_1 t + ... + c_n t^n and c_n = 1 (Faddeev-LeVerrier).
    pub fn charpoly(&self) -> Vec<F> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = F::one();
        let mut m = Mat::<F>::zero(n, n);
        let mut c_prev = F::one();
        for k in 1..=n {
            // M_k = A * M_{k-1} + c_{n-k+1} I
            let mut am = self.mul(&m);
            for i in 0..n {
                *am.at_mut(i, i) = am.at(i, i).add(&c_prev);
            }
            m = am;
            let prod = self.mul(&m);
            let k_inv = F::from_int(k as i64).inv().expect("char 0");
            let c = prod.trace().mul(&k_inv).neg();
            coeffs[n - k] = c.clone();
            c_prev = c;
        }
        coeffs
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": F::field_tag(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.data.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::JsonDecode(format!("expected matrix object, got {v}")))?;
        let tag = obj.get("field").and_then(Value::as_str).unwrap_or_default();
        if tag != F::field_tag() {
            return Err(Error::JsonDecode(format!(
                "field tag mismatch: expected {:?}, got {tag:?}",
                F::field_tag()
            )));
        }
        let rows = obj.get("rows").and_then(Value::as_u64).ok_or_else(|| {
            Error::JsonDecode("missing rows".into())
        })? as usize;
        let cols = obj.get("cols").and_then(Value::as_u64).ok_or_else(|| {
            Error::JsonDecode("missing cols".into())
        })? as usize;
        let ents = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::JsonDecode("missing entries".into()))?;
        if ents.len() != rows * cols {
            return Err(Error::JsonDecode("entry count mismatch".into()));
        }
        let data = ents.iter().map(F::from_json).collect::<Result<Vec<_>>>()?;
        Ok(Mat { rows, cols, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational, Sqrt2};
    use proptest::prelude::*;

    fn rmat(rows: Vec<Vec<i64>>) -> Mat<Rational> {
        Mat::from_rows(rows.into_iter().map(|r| r.into_iter().map(|e| rat(e, 1)).collect()).collect())
    }

    #[test]
    fn det_examples() {
        assert_eq!(Mat::<Rational>::identity(3).det(), rat(1, 1));
        assert_eq!(rmat(vec![vec![1, 2], vec![3, 4]]).det(), rat(-2, 1));
        assert_eq!(rmat(vec![vec![1, 1], vec![2, 2]]).det(), rat(0, 1));
        // needs a row swap
        assert_eq!(rmat(vec![vec![0, 1], vec![1, 0]]).det(), rat(-1, 1));
    }

    #[test]
    fn kernel_examples() {
        assert!(Mat::<Rational>::identity(3).kernel_basis().is_empty());
        assert_eq!(Mat::<Rational>::zero(2, 2).kernel_basis().len(), 2);
        let k = rmat(vec![vec![1, 1], vec![2, 2]]).kernel_basis();
        assert_eq!(k.len(), 1);
        // span{(1,-1)} up to scale
        let v = &k[0];
        assert_eq!(v[0].add(&v[1]), rat(0, 1));
    }

    #[test]
    fn inverse_round_trip() {
        let m = rmat(vec![vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        let inv = m.inv().unwrap();
        assert!(inv.mul(&m).is_identity());
        assert!(rmat(vec![vec![1, 1], vec![2, 2]]).inv().is_err());
    }

    #[test]
    fn charpoly_examples() {
        // identity2: t^2 - 2t + 1
        let cp = Mat::<Rational>::identity(2).charpoly();
        assert_eq!(cp, vec![rat(1, 1), rat(-2, 1), rat(1, 1)]);
        // x from the triangle group: t^2 - t + 1
        let x = rmat(vec![vec![0, -1], vec![1, 1]]);
        assert_eq!(x.charpoly(), vec![rat(1, 1), rat(-1, 1), rat(1, 1)]);
    }

    #[test]
    fn charpoly_of_xy_over_sqrt2() {
        // xy has trace -sqrt2 and det 1: t^2 + sqrt2 t + 1
        let x = Mat::mat2(
            Sqrt2::from_ints(0, 0),
            Sqrt2::from_ints(-1, 0),
            Sqrt2::from_ints(1, 0),
            Sqrt2::from_ints(1, 0),
        );
        let y = Mat::mat2(
            Sqrt2::from_ints(0, 0),
            Sqrt2::from_ints(-1, -1),
            Sqrt2::from_ints(-1, 1),
            Sqrt2::from_ints(0, 1),
        );
        let xy = x.mul(&y);
        assert_eq!(
            xy.charpoly(),
            vec![Sqrt2::from_ints(1, 0), Sqrt2::from_ints(0, 1), Sqrt2::from_ints(1, 0)]
        );
    }

    fn arb_mat3() -> impl Strategy<Value = Mat<Rational>> {
        proptest::collection::vec(-9i64..10, 9).prop_map(|v| {
            Mat::from_fn(3, 3, |r, c| rat(v[r * 3 + c], 1))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn det_is_multiplicative(a in arb_mat3(), b in arb_mat3()) {
            prop_assert_eq!(a.mul(&b).det(), a.det().mul(&b.det()));
        }

        #[test]
        fn kernel_vectors_annihilate(a in arb_mat3()) {
            for v in a.kernel_basis() {
                for e in a.mul_vec(&v) {
                    prop_assert!(e.is_zero());
                }
            }
        }

        #[test]
        fn inverse_involution(a in arb_mat3()) {
            prop_assume!(!a.det().is_zero());
            let inv = a.inv().unwrap();
            prop_assert!(inv.mul(&a).is_identity());
            prop_assert_eq!(inv.inv().unwrap(), a);
        }

        #[test]
        fn rank_plus_nullity(a in arb_mat3()) {
            prop_assert_eq!(a.rank() + a.kernel_basis().len(), 3);
        }
    }
}
