//! Validated structure-equation algebras: the differential, bracket
//! extraction, coframe changes, and quotient/subalgebra constructions.

use std::fmt;

use thiserror::Error;

use crate::dsl::{print_canonical, ParsedPresentation};
use crate::exact::{Ambient, GaussianRational, Matrix, Subspace};
use crate::forms::{conj_flat, pair_index, DualVector, OneForm, ThreeForm, TwoForm};

/// Where an algebra value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Parsed,
    Generated,
    Transformed,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Parsed => "parsed",
            Provenance::Generated => "generated",
            Provenance::Transformed => "transformed",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("d w{k} has a nonzero (0,2) part: {part02}")]
    NotIntegrable { k: usize, part02: TwoForm },
    #[error("d(d w{k}) is nonzero: {residual}")]
    JacobiViolation { k: usize, residual: ThreeForm },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("coframe change matrix is singular")]
    Singular,
    #[error("coframe change matrix must be {n}x{n}")]
    WrongShape { n: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("subspace is not stable under conjugation")]
    NotConjugationStable,
    #[error("subspace is not invariant under the complex structure")]
    NotJInvariant,
    #[error("subspace does not absorb brackets: [v, g] leaves it")]
    NotAnIdeal,
    #[error("subspace is not closed under the bracket")]
    NotBracketClosed,
}

/// A presentation that passed the integrability and d²=0 checks, with the
/// conjugate differentials cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoframeAlgebra {
    name: Option<String>,
    provenance: Provenance,
    n: usize,
    d_table: Vec<TwoForm>,
    d_conj_table: Vec<TwoForm>,
}

/// Check a parsed presentation and promote it to an algebra. Integrability
/// (no (0,2) part) is checked on every generator first, then d²=0.
pub fn validate(p: &ParsedPresentation) -> Result<CoframeAlgebra, ValidationError> {
    let alg = CoframeAlgebra::from_table(
        p.name.clone(),
        Provenance::Parsed,
        p.equations.iter().map(|(_, d)| d.clone()).collect(),
    );
    for (k, d) in &p.equations {
        let (_, _, part02) = d.bidegree_split();
        if !part02.is_zero() {
            return Err(ValidationError::NotIntegrable { k: *k, part02 });
        }
    }
    for (k, d) in &p.equations {
        let residual = alg.d_two(d);
        if !residual.is_zero() {
            return Err(ValidationError::JacobiViolation { k: *k, residual });
        }
    }
    Ok(alg)
}

impl CoframeAlgebra {
    pub(crate) fn from_table(
        name: Option<String>,
        provenance: Provenance,
        d_table: Vec<TwoForm>,
    ) -> CoframeAlgebra {
        let n = d_table.len();
        for d in &d_table {
            assert_eq!(d.n(), n, "differential over wrong coframe size");
        }
        let d_conj_table = d_table.iter().map(|d| d.conjugate()).collect();
        CoframeAlgebra {
            name,
            provenance,
            n,
            d_table,
            d_conj_table,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The differential of `wK`, 1-indexed.
    pub fn d(&self, k: usize) -> &TwoForm {
        &self.d_table[k - 1]
    }

    pub fn d_table(&self) -> &[TwoForm] {
        &self.d_table
    }

    /// The differential of the flat-indexed basis 1-form (conjugated table
    /// for the antiholomorphic half).
    pub fn d_flat(&self, p: usize) -> &TwoForm {
        if p < self.n {
            &self.d_table[p]
        } else {
            &self.d_conj_table[p - self.n]
        }
    }

    pub fn to_presentation(&self) -> ParsedPresentation {
        ParsedPresentation::from_differentials(self.name.clone(), self.d_table.clone())
    }

    pub fn canonical_text(&self) -> String {
        print_canonical(&self.to_presentation())
    }

    /// The Chevalley-Eilenberg differential on 1-forms.
    pub fn d_one(&self, f: &OneForm) -> TwoForm {
        assert_eq!(f.n(), self.n, "form over wrong coframe size");
        let mut out = TwoForm::zero(self.n);
        for (p, c) in f.iter() {
            out = out.add(&self.d_flat(p).scale(c));
        }
        out
    }

    /// The Chevalley-Eilenberg differential on 2-forms.
    pub fn d_two(&self, f: &TwoForm) -> ThreeForm {
        assert_eq!(f.n(), self.n, "form over wrong coframe size");
        let mut out = ThreeForm::zero(self.n);
        for ((p, q), c) in f.iter() {
            // d(e_p ^ e_q) = d(e_p) ^ e_q - d(e_q) ^ e_p, using that 2-forms
            // commute with 1-forms.
            let ep = OneForm::basis(self.n, p);
            let eq = OneForm::basis(self.n, q);
            let term = self
                .d_flat(p)
                .wedge(&eq)
                .sub(&self.d_flat(q).wedge(&ep))
                .scale(c);
            out = out.add(&term);
        }
        out
    }

    pub fn brackets(&self) -> BracketTable {
        bracket_table_from_differentials(self.n, |p| self.d_flat(p))
    }

    /// Rewrite the presentation in the coframe `w' = M w`.
    pub fn change_coframe(&self, m: &Matrix) -> Result<CoframeAlgebra, TransformError> {
        let n = self.n;
        if m.rows() != n || m.cols() != n {
            return Err(TransformError::WrongShape { n });
        }
        let m_inv = m.inverse().map_err(|_| TransformError::Singular)?;
        // Old basis 1-forms written in the new coframe: e_j = sum_k
        // (M^-1)[j][k] e'_k, conjugated coefficients on the other block.
        let mut old_in_new = Vec::with_capacity(2 * n);
        for j in 0..n {
            let mut v = vec![GaussianRational::zero(); 2 * n];
            for k in 0..n {
                v[k] = m_inv.at(j, k).clone();
            }
            old_in_new.push(OneForm::from_coord_vec(n, &v));
        }
        for j in 0..n {
            old_in_new.push(old_in_new[j].conjugate());
        }
        let mut d_table = Vec::with_capacity(n);
        for k in 0..n {
            // d w'_k = sum_j M[k][j] d w_j, then substitute the old basis.
            let mut d_new = TwoForm::zero(n);
            for j in 0..n {
                let c = m.at(k, j);
                if c.is_zero() {
                    continue;
                }
                for ((p, q), v) in self.d_table[j].iter() {
                    let w = old_in_new[p].wedge(&old_in_new[q]).scale(&(c * v));
                    d_new = d_new.add(&w);
                }
            }
            d_table.push(d_new);
        }
        Ok(CoframeAlgebra::from_table(
            self.name.clone(),
            Provenance::Transformed,
            d_table,
        ))
    }

    /// The quotient by a J-invariant ideal, built on the holomorphic part of
    /// the ideal's annihilator.
    pub fn quotient_by_ideal(&self, ideal: &Subspace) -> Result<CoframeAlgebra, HierarchyError> {
        let n = self.n;
        assert_eq!(
            ideal.ambient(),
            Ambient::DualVectors(n),
            "ideal must live among dual vectors"
        );
        if !ideal.is_conjugation_stable() {
            return Err(HierarchyError::NotConjugationStable);
        }
        if !ideal.is_j_invariant() {
            return Err(HierarchyError::NotJInvariant);
        }
        let table = self.brackets();
        for row in ideal.basis_rows() {
            let v = DualVector::from_coord_vec(n, row);
            for a in 0..2 * n {
                let b = table.bracket(&v, &DualVector::basis(n, a));
                if !ideal.contains_vec(&b.to_coord_vec()) {
                    return Err(HierarchyError::NotAnIdeal);
                }
            }
        }
        let hol = holomorphic_half(Ambient::OneForms(n));
        let ann_hol = ideal.annihilator().intersect(&hol);
        let zeta: Vec<OneForm> = ann_hol
            .basis_rows()
            .map(|r| OneForm::from_coord_vec(n, r))
            .collect();
        let new_n = zeta.len();
        let d_table = express_differentials_in_coframe(self, &zeta, new_n)
            .expect("differential descends to the quotient of a checked ideal");
        Ok(CoframeAlgebra::from_table(
            self.name.clone(),
            Provenance::Transformed,
            d_table,
        ))
    }

    /// The algebra structure restricted to a J-invariant subalgebra, with the
    /// structure equations re-derived from the restricted brackets.
    pub fn subalgebra_restrict(&self, sub: &Subspace) -> Result<CoframeAlgebra, HierarchyError> {
        let n = self.n;
        assert_eq!(
            sub.ambient(),
            Ambient::DualVectors(n),
            "subalgebra must live among dual vectors"
        );
        if !sub.is_conjugation_stable() {
            return Err(HierarchyError::NotConjugationStable);
        }
        if !sub.is_j_invariant() {
            return Err(HierarchyError::NotJInvariant);
        }
        let table = self.brackets();
        for u in sub.basis_rows() {
            let u = DualVector::from_coord_vec(n, u);
            for v in sub.basis_rows() {
                let v = DualVector::from_coord_vec(n, v);
                let b = table.bracket(&u, &v);
                if !sub.contains_vec(&b.to_coord_vec()) {
                    return Err(HierarchyError::NotBracketClosed);
                }
            }
        }
        // Basis (Z_1..Z_m, conj Z_1..conj Z_m) of the subalgebra, holomorphic
        // half first.
        let hol = holomorphic_half(Ambient::DualVectors(n));
        let z: Vec<DualVector> = sub
            .intersect(&hol)
            .basis_rows()
            .map(|r| DualVector::from_coord_vec(n, r))
            .collect();
        let m = z.len();
        debug_assert_eq!(2 * m, sub.dim(), "J-invariant subspace splits in half");
        let frame: Vec<DualVector> = z
            .iter()
            .cloned()
            .chain(z.iter().map(|v| v.conjugate()))
            .collect();
        let frame_matrix = Matrix::from_rows(frame.iter().map(|v| v.to_coord_vec()).collect())
            .expect("frame rows have uniform length");
        let mut d_table = vec![TwoForm::zero(m); m];
        for a in 0..2 * m {
            for b in (a + 1)..2 * m {
                let w = table.bracket(&frame[a], &frame[b]);
                let comps = frame_matrix
                    .express_in_rows(&w.to_coord_vec())
                    .expect("bracket closure was checked");
                for (c, d_c) in d_table.iter_mut().enumerate() {
                    let coeff = -&comps[c];
                    if !coeff.is_zero() {
                        *d_c = d_c.add(&TwoForm::basis(m, a, b).scale(&coeff));
                    }
                }
            }
        }
        Ok(CoframeAlgebra::from_table(
            self.name.clone(),
            Provenance::Transformed,
            d_table,
        ))
    }
}

/// The holomorphic half of a 1-form or dual-vector ambient.
pub fn holomorphic_half(ambient: Ambient) -> Subspace {
    let n = match ambient {
        Ambient::OneForms(n) | Ambient::DualVectors(n) => n,
        Ambient::TwoForms(_) => panic!("no holomorphic half of the 2-form ambient"),
    };
    let mut rows = Vec::with_capacity(n);
    for p in 0..n {
        let mut v = vec![GaussianRational::zero(); 2 * n];
        v[p] = GaussianRational::one();
        rows.push(v);
    }
    Subspace::span(ambient, rows)
}

/// Express the differentials of the 1-forms `zeta` (a coframe of a
/// subquotient) in the coframe spanned by `zeta` and its conjugates. Returns
/// `None` when some differential does not lie in that wedge span.
fn express_differentials_in_coframe(
    alg: &CoframeAlgebra,
    zeta: &[OneForm],
    new_n: usize,
) -> Option<Vec<TwoForm>> {
    let frame: Vec<OneForm> = zeta
        .iter()
        .cloned()
        .chain(zeta.iter().map(|f| f.conjugate()))
        .collect();
    let mut wedge_rows = Vec::new();
    for p in 0..2 * new_n {
        for q in (p + 1)..2 * new_n {
            wedge_rows.push(frame[p].wedge(&frame[q]).to_coord_vec());
        }
    }
    let wedge_matrix = if wedge_rows.is_empty() {
        Matrix::zeros(0, Ambient::TwoForms(alg.n()).dim())
    } else {
        Matrix::from_rows(wedge_rows).expect("wedge rows have uniform length")
    };
    let mut d_table = Vec::with_capacity(new_n);
    for f in zeta {
        let df = alg.d_one(f);
        let coeffs = wedge_matrix.express_in_rows(&df.to_coord_vec())?;
        d_table.push(TwoForm::from_coord_vec(new_n, &coeffs));
    }
    Some(d_table)
}

/// The brackets of the dual frame, one entry per unordered basis pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTable {
    n: usize,
    table: Vec<DualVector>,
}

fn bracket_table_from_differentials<'a>(
    n: usize,
    d_flat: impl Fn(usize) -> &'a TwoForm,
) -> BracketTable {
    let mut table = vec![DualVector::zero(n); Ambient::TwoForms(n).dim()];
    for k in 0..2 * n {
        let d = d_flat(k);
        for ((a, b), c) in d.iter() {
            // <e_k, [t_a, t_b]> = -d(e_k)(t_a, t_b).
            let idx = pair_index(n, a, b);
            let updated = table[idx].add(&DualVector::basis(n, k).scale(&-c));
            table[idx] = updated;
        }
    }
    BracketTable { n, table }
}

/// Bracket extraction straight from a presentation; validity is not required,
/// so the table of a Jacobi-violating input can still be inspected.
pub fn bracket_table(p: &ParsedPresentation) -> BracketTable {
    let n = p.n;
    let conj: Vec<TwoForm> = p.equations.iter().map(|(_, d)| d.conjugate()).collect();
    bracket_table_from_differentials(n, |q| {
        if q < n {
            p.d_of(q + 1)
        } else {
            &conj[q - n]
        }
    })
}

impl BracketTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `[t_a, t_b]` for flat basis indices, any order.
    pub fn basis_bracket(&self, a: usize, b: usize) -> DualVector {
        if a == b {
            return DualVector::zero(self.n);
        }
        if a < b {
            self.table[pair_index(self.n, a, b)].clone()
        } else {
            self.table[pair_index(self.n, b, a)].neg()
        }
    }

    /// Bilinear extension of the basis brackets.
    pub fn bracket(&self, u: &DualVector, v: &DualVector) -> DualVector {
        let mut out = DualVector::zero(self.n);
        for (a, x) in u.iter() {
            for (b, y) in v.iter() {
                if a == b {
                    continue;
                }
                let c = x * y;
                let term = if a < b {
                    self.table[pair_index(self.n, a, b)].scale(&c)
                } else {
                    self.table[pair_index(self.n, b, a)].scale(&-&c)
                };
                out = out.add(&term);
            }
        }
        out
    }

    /// First basis triple violating the Jacobi identity, if any.
    pub fn jacobi_residual(&self) -> Option<(usize, usize, usize, DualVector)> {
        let m = 2 * self.n;
        for a in 0..m {
            for b in (a + 1)..m {
                let ab = self.basis_bracket(a, b);
                for c in (b + 1)..m {
                    let bc = self.basis_bracket(b, c);
                    let ca = self.basis_bracket(c, a);
                    let mut sum = self.bracket(&ab, &DualVector::basis(self.n, c));
                    sum = sum.add(&self.bracket(&bc, &DualVector::basis(self.n, a)));
                    sum = sum.add(&self.bracket(&ca, &DualVector::basis(self.n, b)));
                    if !sum.is_zero() {
                        return Some((a, b, c, sum));
                    }
                }
            }
        }
        None
    }

    pub fn jacobi_ok(&self) -> bool {
        self.jacobi_residual().is_none()
    }

    /// conj([u, v]) = [conj(u), conj(v)] on all basis pairs.
    pub fn is_conjugation_equivariant(&self) -> bool {
        let m = 2 * self.n;
        for a in 0..m {
            for b in (a + 1)..m {
                let lhs = self.basis_bracket(a, b).conjugate();
                let rhs = self.basis_bracket(conj_flat(self.n, a), conj_flat(self.n, b));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::exact::Rational;
    use proptest::prelude::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::new(Rational::from(a), Rational::from(b))
    }

    fn w(n: usize, k: usize) -> OneForm {
        OneForm::omega(n, k)
    }

    fn wb(n: usize, k: usize) -> OneForm {
        OneForm::omega_bar(n, k)
    }

    /// The differentials of the type-I model in dimension n.
    fn type_i_table(n: usize) -> Vec<TwoForm> {
        let mut table = vec![TwoForm::zero(n)];
        if n >= 2 {
            table.push(w(n, 1).wedge(&wb(n, 1)));
        }
        for k in 3..=n {
            let d = if k % 2 == 1 {
                w(n, k - 1)
                    .wedge(&wb(n, 1))
                    .sub(&w(n, 1).wedge(&wb(n, k - 1)))
                    .scale(&g(0, 1))
            } else {
                w(n, 1)
                    .wedge(&w(n, k - 1))
                    .add(&w(n, 1).wedge(&wb(n, k - 1)))
            };
            table.push(d);
        }
        table
    }

    /// The differentials of the type-II model in dimension n.
    fn type_ii_table(n: usize) -> Vec<TwoForm> {
        let mut table = vec![TwoForm::zero(n)];
        if n >= 2 {
            table.push(w(n, 1).wedge(&wb(n, 1)));
        }
        for k in 3..=n {
            let d = if k % 2 == 1 {
                w(n, 1)
                    .wedge(&w(n, k - 1))
                    .add(&w(n, 1).wedge(&wb(n, k - 1)))
            } else {
                w(n, k - 1)
                    .wedge(&wb(n, 1))
                    .sub(&w(n, 1).wedge(&wb(n, k - 1)))
                    .scale(&g(0, 1))
            };
            table.push(d);
        }
        table
    }

    fn presentation(table: Vec<TwoForm>) -> ParsedPresentation {
        ParsedPresentation::from_differentials(None, table)
    }

    const CFGU: &str = "n = 5\n\
        d w1 = 0\n\
        d w2 = w1^c(w1)\n\
        d w3 = -w1^c(w1)\n\
        d w4 = w1^w2 + w1^c(w2)\n\
        d w5 = -1/2*w1^w2 - 1/2*w1^w3 + w1^w4 + 1/2*w1^c(w2) + 1/2*w1^c(w3)\n";

    fn cfgu() -> CoframeAlgebra {
        validate(&parse(CFGU).unwrap()).unwrap()
    }

    #[test]
    fn type_i_and_ii_validate() {
        for n in 1..=7 {
            assert!(validate(&presentation(type_i_table(n))).is_ok(), "I n={n}");
            assert!(validate(&presentation(type_ii_table(n))).is_ok(), "II n={n}");
        }
    }

    #[test]
    fn cfgu_validates() {
        let alg = cfgu();
        assert_eq!(alg.n(), 5);
    }

    #[test]
    fn jacobi_violation_detected() {
        let mut table = type_i_table(5);
        table[3] = w(5, 2).wedge(&w(5, 3));
        let p = presentation(table.clone());
        let err = validate(&p).unwrap_err();
        // Expected residual: d(w2 ^ w3) = d(w2)^w3 - d(w3)^w2, expanded by
        // hand from the unmodified lower differentials.
        let expected = table[1]
            .wedge(&w(5, 3))
            .sub(&table[2].wedge(&w(5, 2)));
        assert!(!expected.is_zero());
        assert_eq!(
            err,
            ValidationError::JacobiViolation {
                k: 4,
                residual: expected.clone()
            }
        );
        // Spot-check one coordinate: the w1^w3^c(w1) term of d(w2)^w3 is
        // -w1^w3^c(w1).
        assert_eq!(expected.coeff(0, 2, 5), g(-1, 0));
        // The bracket-side route must agree that Jacobi fails.
        assert!(!bracket_table(&p).jacobi_ok());
        assert!(bracket_table(&presentation(type_i_table(5))).jacobi_ok());
    }

    #[test]
    fn integrability_violation_detected() {
        let table = vec![
            TwoForm::zero(3),
            w(3, 1).wedge(&wb(3, 1)),
            wb(3, 1).wedge(&wb(3, 2)),
        ];
        let err = validate(&presentation(table)).unwrap_err();
        assert_eq!(
            err,
            ValidationError::NotIntegrable {
                k: 3,
                part02: wb(3, 1).wedge(&wb(3, 2))
            }
        );
    }

    #[test]
    fn d_of_closed_combinations() {
        let alg = validate(&presentation(type_i_table(4))).unwrap();
        assert!(alg.d_one(&w(4, 1)).is_zero());
        // w2 + c(w2) is closed for type-I.
        assert!(alg.d_one(&w(4, 2).add(&wb(4, 2))).is_zero());
        assert!(!alg.d_one(&w(4, 2)).is_zero());
    }

    #[test]
    fn cfgu_brackets_match_known_values() {
        let alg = cfgu();
        let t = alg.brackets();
        // [X1, conj(X1)] = -X2 + conj(X2) + X3 - conj(X3).
        let x1_x1bar = t.basis_bracket(0, 5);
        let expected = DualVector::basis(5, 1)
            .neg()
            .add(&DualVector::basis(5, 6))
            .add(&DualVector::basis(5, 2))
            .sub(&DualVector::basis(5, 7));
        assert_eq!(x1_x1bar, expected);
        // [X1, X4] = -X5.
        assert_eq!(t.basis_bracket(0, 3), DualVector::basis(5, 4).neg());
        assert!(t.jacobi_ok());
        assert!(t.is_conjugation_equivariant());
    }

    #[test]
    fn abelian_brackets_vanish() {
        let alg = validate(&presentation(vec![TwoForm::zero(3); 3])).unwrap();
        let t = alg.brackets();
        for a in 0..6 {
            for b in 0..6 {
                assert!(t.basis_bracket(a, b).is_zero());
            }
        }
    }

    #[test]
    fn identity_coframe_change_is_identity() {
        let alg = cfgu();
        let back = alg.change_coframe(&Matrix::identity(5)).unwrap();
        assert_eq!(back.canonical_text(), alg.canonical_text());
    }

    #[test]
    fn coframe_change_round_trip() {
        let alg = validate(&presentation(type_i_table(6))).unwrap();
        let mut m = Matrix::identity(6);
        m.set(4, 2, g(7, 0)); // w'5 = w5 + 7 w3
        m.set(0, 5, g(0, 2)); // w'1 = w1 + 2i w6
        let inv = m.inverse().unwrap();
        let there = alg.change_coframe(&m).unwrap();
        let back = there.change_coframe(&inv).unwrap();
        assert_eq!(back.canonical_text(), alg.canonical_text());
        assert_ne!(there.canonical_text(), alg.canonical_text());
    }

    #[test]
    fn diagonal_change_normalizes_w2() {
        let table = vec![TwoForm::zero(2), w(2, 1).wedge(&wb(2, 1)).scale(&g(3, 0))];
        let alg = validate(&presentation(table)).unwrap();
        let mut m = Matrix::identity(2);
        m.set(1, 1, GaussianRational::from_ratio(1, 3));
        let fixed = alg.change_coframe(&m).unwrap();
        assert_eq!(fixed.canonical_text(), "n = 2\nd w1 = 0\nd w2 = w1^c(w1)\n");
    }

    #[test]
    fn singular_change_rejected() {
        let alg = cfgu();
        let err = alg.change_coframe(&Matrix::zeros(5, 5)).unwrap_err();
        assert_eq!(err, TransformError::Singular);
    }

    fn dual_span(n: usize, flats: &[usize]) -> Subspace {
        Subspace::span(
            Ambient::DualVectors(n),
            flats
                .iter()
                .map(|&p| DualVector::basis(n, p).to_coord_vec())
                .collect(),
        )
    }

    #[test]
    fn quotient_by_zero_ideal_is_identity() {
        let alg = cfgu();
        let q = alg
            .quotient_by_ideal(&Subspace::zero(Ambient::DualVectors(5)))
            .unwrap();
        assert_eq!(q.canonical_text(), alg.canonical_text());
    }

    #[test]
    fn type_i_quotient_drops_to_smaller_model() {
        let alg = validate(&presentation(type_i_table(5))).unwrap();
        let ideal = dual_span(5, &[3, 4, 8, 9]);
        let q = alg.quotient_by_ideal(&ideal).unwrap();
        let expected = validate(&presentation(type_i_table(3))).unwrap();
        assert_eq!(q.canonical_text(), expected.canonical_text());
    }

    #[test]
    fn non_ideal_rejected() {
        let alg = validate(&presentation(type_i_table(4))).unwrap();
        // span{X1, conj X1} is J-invariant and conjugation stable but not an
        // ideal: [X1, conj X1] has an X2 component.
        let not_ideal = dual_span(4, &[0, 4]);
        assert_eq!(
            alg.quotient_by_ideal(&not_ideal).unwrap_err(),
            HierarchyError::NotAnIdeal
        );
        // A conjugation-unstable input is reported as such.
        let unstable = dual_span(4, &[3]);
        assert_eq!(
            alg.quotient_by_ideal(&unstable).unwrap_err(),
            HierarchyError::NotConjugationStable
        );
    }

    #[test]
    fn full_subalgebra_restriction_is_identity() {
        let alg = cfgu();
        let full = Subspace::full(Ambient::DualVectors(5));
        let r = alg.subalgebra_restrict(&full).unwrap();
        assert_eq!(r.canonical_text(), alg.canonical_text());
    }

    #[test]
    fn tail_subalgebra_restricts_to_abelian() {
        // For the type-II model every bracket involves X1 or conj(X1), so the
        // span of X3..X6 and conjugates is an abelian subalgebra.
        let alg = validate(&presentation(type_ii_table(6))).unwrap();
        let sub = dual_span(6, &[2, 3, 4, 5, 8, 9, 10, 11]);
        let r = alg.subalgebra_restrict(&sub).unwrap();
        assert_eq!(r.n(), 4);
        assert!(r.d_table().iter().all(|d| d.is_zero()));
    }

    #[test]
    fn non_closed_subalgebra_rejected() {
        let alg = cfgu();
        // span{X1, conj X1}: [X1, conj X1] leaves the span.
        let sub = dual_span(5, &[0, 5]);
        assert_eq!(
            alg.subalgebra_restrict(&sub).unwrap_err(),
            HierarchyError::NotBracketClosed
        );
    }

    fn any_one_form(n: usize) -> impl Strategy<Value = OneForm> {
        proptest::collection::vec((-2i64..3, -2i64..3).prop_map(|(a, b)| g(a, b)), 2 * n)
            .prop_map(move |v| OneForm::from_coord_vec(n, &v))
    }

    fn any_dual_vector(n: usize) -> impl Strategy<Value = DualVector> {
        proptest::collection::vec((-2i64..3, -2i64..3).prop_map(|(a, b)| g(a, b)), 2 * n)
            .prop_map(move |v| DualVector::from_coord_vec(n, &v))
    }

    proptest! {
        #[test]
        fn d_squared_vanishes_on_all_one_forms(f in any_one_form(5)) {
            let alg = cfgu();
            prop_assert!(alg.d_two(&alg.d_one(&f)).is_zero());
        }

        #[test]
        fn brackets_are_antisymmetric_and_equivariant(
            u in any_dual_vector(5),
            v in any_dual_vector(5),
        ) {
            let t = cfgu().brackets();
            let uv = t.bracket(&u, &v);
            prop_assert_eq!(uv.neg(), t.bracket(&v, &u));
            prop_assert_eq!(
                uv.conjugate(),
                t.bracket(&u.conjugate(), &v.conjugate())
            );
        }

        #[test]
        fn differential_pairs_with_brackets(
            f in any_one_form(5),
            u in any_dual_vector(5),
            v in any_dual_vector(5),
        ) {
            // df(u, v) = -f([u, v]).
            let alg = cfgu();
            let t = alg.brackets();
            let lhs = alg.d_one(&f).apply(&u, &v);
            let rhs = -&f.apply(&t.bracket(&u, &v));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
