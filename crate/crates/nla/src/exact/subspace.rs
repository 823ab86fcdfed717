//! Subspaces of the complexified coordinate spaces the library works in,
//! kept in a canonical reduced row echelon basis so equality is structural.

use super::{GaussianRational, Matrix};

/// The coordinate space a subspace lives in, for an algebra with `n`
/// holomorphic coframe elements.
///
/// `OneForms(n)` is the complexified dual space with ordered basis
/// `w^1..w^n, conj(w^1)..conj(w^n)` (dimension `2n`). `DualVectors(n)` is the
/// complexified algebra itself with the dual basis of (1,0) and (0,1) vectors.
/// `TwoForms(n)` is the second exterior power of the dual, coordinatized by
/// strictly increasing index pairs (dimension `n(2n - 1)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    OneForms(usize),
    TwoForms(usize),
    DualVectors(usize),
}

impl Ambient {
    pub fn dim(self) -> usize {
        match self {
            Ambient::OneForms(n) | Ambient::DualVectors(n) => 2 * n,
            Ambient::TwoForms(n) => n * (2 * n - 1).max(0),
        }
    }

    fn flipped(self) -> Ambient {
        match self {
            Ambient::OneForms(n) => Ambient::DualVectors(n),
            Ambient::DualVectors(n) => Ambient::OneForms(n),
            Ambient::TwoForms(n) => Ambient::TwoForms(n),
        }
    }
}

/// A linear subspace with a canonical (RREF, zero rows dropped) basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: Ambient,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient: Ambient) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient.dim()),
        }
    }

    pub fn full(ambient: Ambient) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient.dim()),
        }
    }

    pub fn span(ambient: Ambient, rows: Vec<Vec<GaussianRational>>) -> Subspace {
        for r in &rows {
            assert_eq!(r.len(), ambient.dim(), "generator has wrong length");
        }
        let mut m = Matrix::from_rows(rows).expect("generators checked above");
        let rank = m.rref().len();
        let mut basis = Matrix::zeros(rank, ambient.dim());
        for r in 0..rank {
            for c in 0..ambient.dim() {
                basis.set(r, c, m.at(r, c).clone());
            }
        }
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[GaussianRational]> {
        (0..self.basis.rows()).map(|r| self.basis.row(r))
    }

    pub fn contains_vec(&self, v: &[GaussianRational]) -> bool {
        assert_eq!(v.len(), self.ambient.dim(), "vector has wrong length");
        // The basis is kept in reduced echelon form with unit pivots, so one
        // reduction pass against it settles membership.
        let cols = self.basis.cols();
        let mut residual = v.to_vec();
        for row in self.basis_rows() {
            let p = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("canonical basis rows are nonzero");
            let f = residual[p].clone();
            if f.is_zero() {
                continue;
            }
            for k in p..cols {
                if row[k].is_zero() {
                    continue;
                }
                let delta = &f * &row[k];
                residual[k] -= &delta;
            }
        }
        residual.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        other.basis_rows().all(|r| self.contains_vec(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let rows = self
            .basis_rows()
            .chain(other.basis_rows())
            .map(|r| r.to_vec())
            .collect();
        Subspace::span(self.ambient, rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let (k1, k2) = (self.dim(), other.dim());
        let dim = self.ambient.dim();
        // Solve c*B1 = d*B2: kernel of the column-stacked [B1^T | -B2^T].
        let mut m = Matrix::zeros(dim, k1 + k2);
        for j in 0..k1 {
            for r in 0..dim {
                m.set(r, j, self.basis.at(j, r).clone());
            }
        }
        for j in 0..k2 {
            for r in 0..dim {
                m.set(r, k1 + j, -other.basis.at(j, r));
            }
        }
        let ker = m.kernel();
        let mut rows = Vec::with_capacity(ker.rows());
        for s in 0..ker.rows() {
            let mut v = vec![GaussianRational::zero(); dim];
            for j in 0..k1 {
                let c = ker.at(s, j);
                if c.is_zero() {
                    continue;
                }
                for r in 0..dim {
                    let delta = c * self.basis.at(j, r);
                    v[r] += &delta;
                }
            }
            rows.push(v);
        }
        Subspace::span(self.ambient, rows)
    }

    /// The annihilator under the standard pairing of coordinates. For 1-forms
    /// it lives among dual vectors and vice versa.
    pub fn annihilator(&self) -> Subspace {
        let ker = self.basis.kernel();
        let mut rows = Vec::with_capacity(ker.rows());
        for r in 0..ker.rows() {
            rows.push(ker.row(r).to_vec());
        }
        Subspace::span(self.ambient.flipped(), rows)
    }

    /// Complex conjugation, swapping the holomorphic and antiholomorphic
    /// halves of the coordinates.
    pub fn conjugate(&self) -> Subspace {
        let n = match self.ambient {
            Ambient::OneForms(n) | Ambient::DualVectors(n) => n,
            Ambient::TwoForms(_) => {
                panic!("conjugate is only defined for 1-form and dual-vector ambients")
            }
        };
        let rows = self
            .basis_rows()
            .map(|row| {
                let mut v = vec![GaussianRational::zero(); 2 * n];
                for (p, entry) in row.iter().enumerate() {
                    if entry.is_zero() {
                        continue;
                    }
                    let q = if p < n { p + n } else { p - n };
                    v[q] = entry.conj();
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, rows)
    }

    /// Image under the complex structure operator, which acts as `i` on the
    /// holomorphic half of the coordinates and `-i` on the antiholomorphic
    /// half.
    pub fn j_image(&self) -> Subspace {
        let n = match self.ambient {
            Ambient::OneForms(n) | Ambient::DualVectors(n) => n,
            Ambient::TwoForms(_) => {
                panic!("j_image is only defined for 1-form and dual-vector ambients")
            }
        };
        let i = GaussianRational::i();
        let neg_i = -&i;
        let rows = self
            .basis_rows()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(p, entry)| if p < n { &i * entry } else { &neg_i * entry })
                    .collect()
            })
            .collect();
        Subspace::span(self.ambient, rows)
    }

    /// Whether the subspace is stable under complex conjugation, i.e. is the
    /// complexification of a real subspace.
    pub fn is_conjugation_stable(&self) -> bool {
        self.conjugate() == *self
    }

    pub fn is_j_invariant(&self) -> bool {
        self.j_image() == *self
    }
}
