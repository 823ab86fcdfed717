//! Dense matrices over the Gaussian rationals and the row-reduction routines
//! the rest of the crate is built on.

use std::fmt;

use thiserror::Error;

use super::{GaussianRational, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("row {row} has {got} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("matrix shapes do not match: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
}

/// A dense `rows x cols` matrix over Q(i), stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

/// Entries that can serve as pivots without introducing new denominators.
fn is_unit_entry(v: &GaussianRational) -> bool {
    (v.im.is_zero() && (v.re.is_one() || (-&v.re).is_one()))
        || (v.re.is_zero() && (v.im.is_one() || (-&v.im).is_one()))
}

/// A cheap size estimate for pivot selection; smaller entries keep the
/// numbers in the elimination small.
fn entry_weight(v: &GaussianRational) -> u128 {
    fn part(r: &Rational) -> u128 {
        match r.small_parts() {
            Some((n, d)) => n.unsigned_abs() as u128 + d as u128,
            None => u128::MAX / 4,
        }
    }
    part(&v.re) + part(&v.im)
}

/// Rescale `row` by the positive rational that clears all denominators and
/// divides out the common integer factor. The scalar is nonzero, so the row
/// span is unchanged.
fn make_row_primitive(row: &mut [GaussianRational]) {
    let mut content = Rational::zero();
    for v in row.iter() {
        if !v.re.is_zero() {
            content = content.ideal_gcd(&v.re);
        }
        if !v.im.is_zero() {
            content = content.ideal_gcd(&v.im);
        }
    }
    if content.is_zero() || content.is_one() {
        return;
    }
    let inv = content.recip();
    for v in row.iter_mut() {
        if !v.is_zero() {
            *v = v.scale(&inv);
        }
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussianRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Matrix, MatrixError> {
        let cols = rows.first().map_or(0, |r| r.len());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(MatrixError::Ragged {
                    row: i,
                    expected: cols,
                    got: r.len(),
                });
            }
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &GaussianRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussianRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[GaussianRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<GaussianRational> {
        self.row(r).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Row-reduce in place to reduced row echelon form; returns the pivot
    /// columns (their count is the rank).
    ///
    /// The echelon phase is a sparse fraction-free elimination: rows are
    /// first scaled to primitive form, every update is the cross-multiplied
    /// `row_i <- (p * row_i - f * row_r) / d_i` with `d_i` the pivot from the
    /// step that last touched row i, and untouched rows are left alone. The
    /// divisions are exact by the Sylvester determinant identity, so entries
    /// stay minor-sized instead of growing exponentially. Per-row scale
    /// factors are irrelevant because the final normalization makes every
    /// pivot 1; the result is the unique reduced echelon form a textbook
    /// single-pass reduction produces.
    pub fn rref(&mut self) -> Vec<usize> {
        for i in 0..self.rows {
            make_row_primitive(&mut self.data[i * self.cols..(i + 1) * self.cols]);
        }
        let mut divisors = vec![GaussianRational::one(); self.rows];
        let mut pivots = Vec::new();
        let mut scratch: Vec<GaussianRational> = Vec::with_capacity(self.cols);
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Prefer pivots that are units in Z[i]; they keep entries small.
            // Otherwise take the smallest candidate.
            let mut choice: Option<(usize, u128)> = None;
            for i in r..self.rows {
                let v = self.at(i, c);
                if !v.is_zero() {
                    if is_unit_entry(v) {
                        choice = Some((i, 0));
                        break;
                    }
                    let w = entry_weight(v);
                    if choice.as_ref().map_or(true, |(_, best)| w < *best) {
                        choice = Some((i, w));
                    }
                }
            }
            let Some((pi, _)) = choice else { continue };
            self.swap_rows(r, pi);
            divisors.swap(r, pi);
            let pivot = self.at(r, c).clone();
            scratch.clear();
            scratch.extend_from_slice(&self.row(r)[c..]);
            for i in (r + 1)..self.rows {
                let f = self.at(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                let back = if divisors[i].is_one() {
                    None
                } else {
                    Some(divisors[i].inverse())
                };
                // Rows below the pivot are zero left of column c, so only
                // the tail needs touching.
                for (k, s) in scratch.iter().enumerate() {
                    let idx = i * self.cols + c + k;
                    let mut val = if self.data[idx].is_zero() || pivot.is_one() {
                        self.data[idx].clone()
                    } else {
                        &self.data[idx] * &pivot
                    };
                    if !s.is_zero() {
                        let delta = &f * s;
                        val -= &delta;
                    }
                    if let (Some(inv), false) = (&back, val.is_zero()) {
                        val *= inv;
                    }
                    self.data[idx] = val;
                }
                divisors[i] = pivot.clone();
            }
            pivots.push(c);
            r += 1;
        }
        for (i, &c) in pivots.iter().enumerate() {
            let pivot = self.at(i, c).clone();
            if !pivot.is_one() {
                let inv = pivot.inverse();
                for k in c..self.cols {
                    let idx = i * self.cols + k;
                    if !self.data[idx].is_zero() {
                        self.data[idx] *= &inv;
                    }
                }
            }
        }
        for (i, &c) in pivots.iter().enumerate().rev() {
            scratch.clear();
            scratch.extend_from_slice(&self.row(i)[c..]);
            for j in 0..i {
                let f = self.at(j, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (k, s) in scratch.iter().enumerate() {
                    if s.is_zero() {
                        continue;
                    }
                    let idx = j * self.cols + c + k;
                    let delta = &f * s;
                    self.data[idx] -= &delta;
                }
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of `{x : self * x = 0}` (columns as unknowns), one solution per
    /// returned row.
    pub fn kernel(&self) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &p in &pivots {
                s[p] = true;
            }
            s
        };
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set[*c]).collect();
        let mut out = Matrix::zeros(free.len(), self.cols);
        for (row, &f) in free.iter().enumerate() {
            out.set(row, f, GaussianRational::one());
            for (i, &p) in pivots.iter().enumerate() {
                out.set(row, p, -m.at(i, f));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    let delta = a * b;
                    out.data[idx] += &delta;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![GaussianRational::zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.at(r, c);
                if a.is_zero() || v[c].is_zero() {
                    continue;
                }
                let delta = a * &v[c];
                out[r] += &delta;
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<Matrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, n + r, GaussianRational::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(MatrixError::Singular);
        }
        let mut out = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.at(r, n + c).clone());
            }
        }
        Ok(out)
    }

    /// Express `target` as a linear combination of the rows of `self`.
    /// Returns the coefficients with respect to the original rows, or `None`
    /// if `target` lies outside their span.
    pub fn express_in_rows(&self, target: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        assert_eq!(target.len(), self.cols, "target length mismatch");
        // Augment with an identity block that records the row operations, so
        // coefficients come out in terms of the original rows.
        let mut aug = Matrix::zeros(self.rows, self.cols + self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols + r, GaussianRational::one());
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == aug.rows {
                break;
            }
            let mut choice: Option<usize> = None;
            for i in r..aug.rows {
                let v = aug.at(i, c);
                if !v.is_zero() {
                    if is_unit_entry(v) {
                        choice = Some(i);
                        break;
                    }
                    if choice.is_none() {
                        choice = Some(i);
                    }
                }
            }
            let Some(pi) = choice else { continue };
            aug.swap_rows(r, pi);
            let pivot = aug.at(r, c).clone();
            if !pivot.is_one() {
                let inv = pivot.inverse();
                for k in c..aug.cols {
                    let idx = r * aug.cols + k;
                    if !aug.data[idx].is_zero() {
                        aug.data[idx] *= &inv;
                    }
                }
            }
            for i in 0..aug.rows {
                if i == r {
                    continue;
                }
                let f = aug.at(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for k in c..aug.cols {
                    let s = aug.at(r, k).clone();
                    if s.is_zero() {
                        continue;
                    }
                    let idx = i * aug.cols + k;
                    let delta = &f * &s;
                    aug.data[idx] -= &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut residual = target.to_vec();
        let mut coeffs = vec![GaussianRational::zero(); self.rows];
        for (i, &p) in pivots.iter().enumerate() {
            let f = residual[p].clone();
            if f.is_zero() {
                continue;
            }
            for c in p..self.cols {
                let s = aug.at(i, c);
                if s.is_zero() {
                    continue;
                }
                let delta = &f * s;
                residual[c] -= &delta;
            }
            for j in 0..self.rows {
                let m = aug.at(i, self.cols + j);
                if m.is_zero() {
                    continue;
                }
                let delta = &f * m;
                coeffs[j] += &delta;
            }
        }
        if residual.iter().all(|v| v.is_zero()) {
            Some(coeffs)
        } else {
            None
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use proptest::prelude::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::new(Rational::from(a), Rational::from(b))
    }

    fn m(rows: Vec<Vec<GaussianRational>>) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = Matrix::from_rows(vec![vec![g(1, 0)], vec![g(1, 0), g(2, 0)]]).unwrap_err();
        assert_eq!(
            err,
            MatrixError::Ragged {
                row: 1,
                expected: 1,
                got: 2
            }
        );
    }

    #[test]
    fn rref_simple() {
        let mut a = m(vec![
            vec![g(2, 0), g(4, 0)],
            vec![g(1, 0), g(2, 0)],
        ]);
        let pivots = a.rref();
        assert_eq!(pivots, vec![0]);
        assert_eq!(a.row(0), &[g(1, 0), g(2, 0)]);
        assert!(a.row(1).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn rref_complex_pivot() {
        let mut a = m(vec![vec![g(0, 1), g(1, 0)]]);
        let pivots = a.rref();
        assert_eq!(pivots, vec![0]);
        // Row scaled by 1/i = -i.
        assert_eq!(a.row(0), &[g(1, 0), g(0, -1)]);
    }

    #[test]
    fn kernel_of_rank_one_row() {
        let a = m(vec![vec![g(1, 0), g(2, 0)]]);
        let k = a.kernel();
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0), &[g(-2, 0), g(1, 0)]);
    }

    #[test]
    fn express_in_rows_finds_combination() {
        let a = m(vec![
            vec![g(1, 0), g(1, 0), g(0, 0)],
            vec![g(0, 0), g(1, 0), g(0, 0)],
        ]);
        let coeffs = a.express_in_rows(&[g(1, 0), g(0, 0), g(0, 0)]).unwrap();
        assert_eq!(coeffs, vec![g(1, 0), g(-1, 0)]);
        assert!(a.express_in_rows(&[g(0, 0), g(0, 0), g(1, 0)]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(vec![
            vec![g(1, 1), g(2, 0)],
            vec![g(0, 0), g(0, 3)],
        ]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(inv.mul(&a).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn singular_inverse_rejected() {
        let a = m(vec![
            vec![g(1, 0), g(2, 0)],
            vec![g(2, 0), g(4, 0)],
        ]);
        assert_eq!(a.inverse().unwrap_err(), MatrixError::Singular);
    }

    /// Classic single-pass Gauss-Jordan with first-nonzero pivots and
    /// immediate normalization, as an independent oracle for `rref`: the
    /// reduced echelon form is unique, so both must agree exactly.
    fn reference_rref(a: &mut Matrix) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols() {
            if r == a.rows() {
                break;
            }
            let Some(pi) = (r..a.rows()).find(|&i| !a.at(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, pi);
            let inv = a.at(r, c).inverse();
            for k in c..a.cols() {
                let v = a.at(r, k).clone();
                a.set(r, k, &v * &inv);
            }
            for i in 0..a.rows() {
                if i == r {
                    continue;
                }
                let f = a.at(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for k in c..a.cols() {
                    let mut v = a.at(i, k).clone();
                    let delta = &f * a.at(r, k);
                    v -= &delta;
                    a.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn any_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                proptest::collection::vec((-3i64..4, -3i64..4).prop_map(|(a, b)| g(a, b)), c),
                r,
            )
            .prop_map(|rows| Matrix::from_rows(rows).unwrap())
        })
    }

    fn fraction_matrix() -> impl Strategy<Value = Matrix> {
        let entry = (-5i64..6, 1i64..4, -5i64..6, 1i64..4)
            .prop_map(|(a, b, c, d)| GaussianRational::new(Rational::new(a, b), Rational::new(c, d)));
        (1usize..6, 1usize..7).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(proptest::collection::vec(entry.clone(), c), r)
                .prop_map(|rows| Matrix::from_rows(rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rref_matches_the_textbook_reduction(a in any_matrix()) {
            let mut fast = a.clone();
            let fast_pivots = fast.rref();
            let mut slow = a.clone();
            let slow_pivots = reference_rref(&mut slow);
            prop_assert_eq!(fast_pivots, slow_pivots);
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn rref_matches_the_textbook_reduction_on_fractions(a in fraction_matrix()) {
            let mut fast = a.clone();
            let fast_pivots = fast.rref();
            let mut slow = a.clone();
            let slow_pivots = reference_rref(&mut slow);
            prop_assert_eq!(fast_pivots, slow_pivots);
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn rref_is_idempotent(a in any_matrix()) {
            let mut once = a.clone();
            once.rref();
            let mut twice = once.clone();
            twice.rref();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn kernel_vectors_annihilate(a in any_matrix()) {
            let k = a.kernel();
            prop_assert_eq!(k.rows() + a.rank(), a.cols());
            for r in 0..k.rows() {
                let out = a.mul_vec(k.row(r));
                prop_assert!(out.iter().all(|v| v.is_zero()));
            }
        }

        #[test]
        fn expressed_combinations_reconstruct(a in any_matrix()) {
            // Any combination of rows must be recognized and reconstructed.
            let mut target = vec![GaussianRational::zero(); a.cols()];
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    let delta = a.at(r, c) * &g(1 + r as i64, 0);
                    target[c] += &delta;
                }
            }
            let coeffs = a.express_in_rows(&target);
            prop_assert!(coeffs.is_some());
            let coeffs = coeffs.unwrap();
            let mut rebuilt = vec![GaussianRational::zero(); a.cols()];
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    let delta = &coeffs[r] * a.at(r, c);
                    rebuilt[c] += &delta;
                }
            }
            prop_assert_eq!(rebuilt, target);
        }
    }
}
