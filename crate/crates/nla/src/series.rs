//! The six canonical series attached to a pair (g, J) and their joint
//! classification.
//!
//! Three of the chains live in the algebra itself (descending central,
//! ascending central, and the a-series compatible with J), one lives in the
//! holomorphic coframe (the W-series), and two live in the dual (the V-series
//! of forms and the h-series of J-invariant ideals).  [`classify`] computes
//! all six and cross-checks every relation that is supposed to hold between
//! them; a failed cross-check is an implementation bug, never a property of
//! the input, so it panics instead of returning an error.

use thiserror::Error;

use crate::algebra::{holomorphic_half, BracketTable, CoframeAlgebra};
use crate::exact::{Ambient, GaussianRational, Matrix, Subspace};
use crate::forms::{wedge_span, DualVector};

/// Which of the six chains a [`SeriesChain`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    DescendingCentral,
    AscendingCentral,
    V,
    W,
    A,
    H,
}

/// One computed chain: the terms from index 0 up to the first stable one.
///
/// Terms strictly grow (or strictly shrink, for the descending kinds) until
/// the chain stabilizes; the repeated value is stored once, so
/// `terms[stabilized_at]` is the stable subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesChain {
    pub kind: SeriesKind,
    pub terms: Vec<Subspace>,
    pub stabilized_at: usize,
}

impl SeriesChain {
    /// The k-th term, with indices past stabilization clamped to the stable
    /// value.
    pub fn term(&self, k: usize) -> &Subspace {
        &self.terms[k.min(self.stabilized_at)]
    }

    pub fn last(&self) -> &Subspace {
        &self.terms[self.stabilized_at]
    }

    /// Complexified dimensions of all stored terms, index 0 included.
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.dim()).collect()
    }
}

/// The descending central series failed to reach zero, so the algebra is not
/// nilpotent.  The computed chain is kept for reporting.
#[derive(Debug, Clone, Error)]
#[error("not nilpotent: the descending central series stabilizes at complexified dimension {dim}")]
pub struct NotNilpotent {
    pub chain: SeriesChain,
    pub dim: usize,
}

/// The invariants extracted from the six series.
///
/// `nu_g` is `None` exactly when the algebra is not nilpotent, and `mu_j`,
/// `nu_j` are `None` exactly when the complex structure is not nilpotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub nu_g: Option<usize>,
    pub mu_j: Option<usize>,
    pub nu_j: Option<usize>,
    pub nilpotent_j: bool,
    pub maxn: bool,
}

/// All six chains of one pair, in the order they are usually read.
#[derive(Clone, Debug)]
pub struct SeriesSet {
    pub descending_central: SeriesChain,
    pub ascending_central: SeriesChain,
    pub v: SeriesChain,
    pub w: SeriesChain,
    pub a: SeriesChain,
    pub h: SeriesChain,
}

/// Result of [`classify`].
#[derive(Clone, Debug)]
pub struct ClassifyOutcome {
    pub classification: Classification,
    pub series: SeriesSet,
    /// Indices k with Ann(a_{nu-k}) strictly inside W^k + conj(W^k); empty
    /// when the complex structure is not nilpotent.
    pub strict_inclusions: Vec<usize>,
    pub warnings: Vec<String>,
}

fn grow(
    kind: SeriesKind,
    first: Subspace,
    cutoff: usize,
    mut step: impl FnMut(&Subspace) -> Subspace,
) -> SeriesChain {
    let mut terms = vec![first];
    loop {
        let next = step(terms.last().expect("chain is never empty"));
        if &next == terms.last().expect("chain is never empty") {
            break;
        }
        terms.push(next);
        assert!(
            terms.len() <= cutoff + 1,
            "series failed to stabilize within the ambient dimension"
        );
    }
    let stabilized_at = terms.len() - 1;
    SeriesChain {
        kind,
        terms,
        stabilized_at,
    }
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<GaussianRational>> {
    (0..m.rows()).map(|r| m.row_vec(r)).collect()
}

/// span { [v, basis] : v in s }, the bracket of a subspace with the whole
/// algebra.
fn bracket_span(table: &BracketTable, s: &Subspace) -> Subspace {
    let n = table.n();
    let mut rows = Vec::new();
    for r in s.basis_rows() {
        let v = DualVector::from_coord_vec(n, r);
        for a in 0..2 * n {
            let w = table.bracket(&v, &DualVector::basis(n, a));
            if !w.is_zero() {
                rows.push(w.to_coord_vec());
            }
        }
    }
    Subspace::span(Ambient::DualVectors(n), rows)
}

/// { X : [X, g] in target }, optionally also requiring [JX, g] in target.
fn vectors_bracketing_into(table: &BracketTable, target: &Subspace, with_j: bool) -> Subspace {
    let n = table.n();
    let m = 2 * n;
    let ann = target.annihilator();
    if ann.dim() == 0 {
        return Subspace::full(Ambient::DualVectors(n));
    }
    let bra: Vec<Vec<Vec<GaussianRational>>> = (0..m)
        .map(|p| {
            (0..m)
                .map(|a| table.basis_bracket(p, a).to_coord_vec())
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for a in 0..m {
        for phi in ann.basis_rows() {
            let mut row = vec![GaussianRational::zero(); m];
            for (p, entry) in row.iter_mut().enumerate() {
                let mut acc = GaussianRational::zero();
                for q in 0..m {
                    if !phi[q].is_zero() && !bra[p][a][q].is_zero() {
                        acc = acc + &phi[q] * &bra[p][a][q];
                    }
                }
                *entry = acc;
            }
            if with_j {
                let mut jrow = row.clone();
                for (p, entry) in jrow.iter_mut().enumerate() {
                    let f = if p < n {
                        GaussianRational::i()
                    } else {
                        -GaussianRational::i()
                    };
                    *entry = &*entry * &f;
                }
                rows.push(jrow);
            }
            rows.push(row);
        }
    }
    let kern = Matrix::from_rows(rows).expect("condition rows share a length").kernel();
    Subspace::span(Ambient::DualVectors(n), matrix_rows(&kern))
}

/// Coordinates of every d(e_p) as the columns of one matrix.
fn differential_matrix(alg: &CoframeAlgebra, cols: usize) -> Matrix {
    let n = alg.n();
    let m = 2 * n;
    let pair_dim = m * (m - 1) / 2;
    let mut mat = Matrix::zeros(pair_dim, cols);
    for p in 0..cols {
        let coords = alg.d_flat(p).to_coord_vec();
        for (r, c) in coords.into_iter().enumerate() {
            if !c.is_zero() {
                mat.set(r, p, c);
            }
        }
    }
    mat
}

/// { alpha : d(alpha) in span l }, over all complexified 1-forms.
fn forms_with_differential_in(n: usize, dmat: &Matrix, l: &Subspace) -> Subspace {
    let ann = l.annihilator();
    if ann.dim() == 0 {
        return Subspace::full(Ambient::OneForms(n));
    }
    let cond = ann.basis().mul(dmat).expect("conformable shapes");
    Subspace::span(Ambient::OneForms(n), matrix_rows(&cond.kernel()))
}

fn embed_holomorphic_rows(n: usize, kern: &Matrix) -> Vec<Vec<GaussianRational>> {
    (0..kern.rows())
        .map(|r| {
            let mut row = vec![GaussianRational::zero(); 2 * n];
            for (p, entry) in row.iter_mut().take(n).enumerate() {
                *entry = kern.at(r, p).clone();
            }
            row
        })
        .collect()
}

/// Descending central series; the step is the first index whose term is zero.
pub fn descending_central(alg: &CoframeAlgebra) -> Result<(SeriesChain, usize), NotNilpotent> {
    let n = alg.n();
    let table = alg.brackets();
    let chain = grow(
        SeriesKind::DescendingCentral,
        Subspace::full(Ambient::DualVectors(n)),
        2 * n,
        |prev| bracket_span(&table, prev),
    );
    let dim = chain.last().dim();
    if dim == 0 {
        let step = chain.stabilized_at;
        Ok((chain, step))
    } else {
        Err(NotNilpotent { chain, dim })
    }
}

/// Ascending central series, starting from zero; the first term is the
/// center.
pub fn ascending_central(alg: &CoframeAlgebra) -> SeriesChain {
    let n = alg.n();
    let table = alg.brackets();
    grow(
        SeriesKind::AscendingCentral,
        Subspace::zero(Ambient::DualVectors(n)),
        2 * n,
        |prev| vectors_bracketing_into(&table, prev, false),
    )
}

/// Coordinates of the contraction of d(e_p) against every basis direction,
/// indexed by direction then flat index.
fn contraction_table(alg: &CoframeAlgebra, cols: usize) -> Vec<Vec<Vec<GaussianRational>>> {
    let n = alg.n();
    let m = 2 * n;
    (0..m)
        .map(|a| {
            let theta = DualVector::basis(n, a);
            (0..cols)
                .map(|p| alg.d_flat(p).contract(&theta).to_coord_vec())
                .collect()
        })
        .collect()
}

/// Kernel of { x over the first `cols` flats : d(x) in the second wedge of u }.
///
/// A 2-form lies in the second wedge of u exactly when all its contractions
/// lie in u, so one condition row pairs an annihilator functional of u with a
/// basis contraction.  Everything stays in the 1-form ambient, which keeps the
/// elimination small even on dense coframes; u must be a proper subspace.
fn forms_with_contractions_into(
    table: &[Vec<Vec<GaussianRational>>],
    u: &Subspace,
    cols: usize,
) -> Matrix {
    let ann = u.annihilator();
    let m = table.len();
    let mut rows = Vec::new();
    for contracted in table {
        for psi in ann.basis_rows() {
            let mut row = vec![GaussianRational::zero(); cols];
            for (p, entry) in row.iter_mut().enumerate() {
                let mut acc = GaussianRational::zero();
                for q in 0..m {
                    if !psi[q].is_zero() && !contracted[p][q].is_zero() {
                        acc = acc + &psi[q] * &contracted[p][q];
                    }
                }
                *entry = acc;
            }
            rows.push(row);
        }
    }
    Matrix::from_rows(rows).expect("condition rows share a length").kernel()
}

/// Ascending series of form spaces: V^0 = 0 and V^k is everything whose
/// differential lies in the second wedge of V^{k-1}.
pub fn v_series(alg: &CoframeAlgebra) -> SeriesChain {
    let n = alg.n();
    let table = contraction_table(alg, 2 * n);
    grow(
        SeriesKind::V,
        Subspace::zero(Ambient::OneForms(n)),
        2 * n,
        |prev| {
            if prev.dim() == 2 * n {
                return Subspace::full(Ambient::OneForms(n));
            }
            let kern = forms_with_contractions_into(&table, prev, 2 * n);
            Subspace::span(Ambient::OneForms(n), matrix_rows(&kern))
        },
    )
}

/// Second route to the V-series through an explicit basis of each second
/// wedge.  Slower than [`v_series`] on dense coframes and kept for
/// cross-checking.
pub fn v_series_wedge(alg: &CoframeAlgebra) -> SeriesChain {
    let n = alg.n();
    let dmat = differential_matrix(alg, 2 * n);
    grow(
        SeriesKind::V,
        Subspace::zero(Ambient::OneForms(n)),
        2 * n,
        |prev| {
            if prev.dim() == 2 * n {
                return Subspace::full(Ambient::OneForms(n));
            }
            forms_with_differential_in(n, &dmat, &wedge_span(prev, prev))
        },
    )
}

/// The first two terms `(V^1, V^2)` without growing the whole chain.
///
/// The normalization loops only ever consult these two, and recompute them
/// after every coframe change, so skipping the tail of the chain matters.
pub fn v_two(alg: &CoframeAlgebra) -> (Subspace, Subspace) {
    let n = alg.n();
    let table = contraction_table(alg, 2 * n);
    let zero = Subspace::zero(Ambient::OneForms(n));
    let v1 = Subspace::span(
        Ambient::OneForms(n),
        matrix_rows(&forms_with_contractions_into(&table, &zero, 2 * n)),
    );
    if v1.dim() == 2 * n {
        return (v1.clone(), v1);
    }
    let v2 = Subspace::span(
        Ambient::OneForms(n),
        matrix_rows(&forms_with_contractions_into(&table, &v1, 2 * n)),
    );
    (v1, v2)
}

/// Ascending series inside the holomorphic half, together with its step when
/// it exhausts the half.
///
/// W^k collects the holomorphic forms whose differential involves only
/// W^{k-1} and its conjugate: every contraction of the differential has to
/// fall back into that span.  The returned step is `None` when the chain
/// stabilizes short of the full holomorphic half, which happens exactly when
/// the complex structure is not nilpotent.
pub fn w_series(alg: &CoframeAlgebra) -> (SeriesChain, Option<usize>) {
    let n = alg.n();
    let table = contraction_table(alg, n);
    let chain = grow(
        SeriesKind::W,
        Subspace::zero(Ambient::OneForms(n)),
        2 * n,
        |prev| {
            let u = prev.sum(&prev.conjugate());
            if u.dim() == 2 * n {
                return holomorphic_half(Ambient::OneForms(n));
            }
            let kern = forms_with_contractions_into(&table, &u, n);
            Subspace::span(Ambient::OneForms(n), embed_holomorphic_rows(n, &kern))
        },
    );
    let step = (chain.last().dim() == n).then_some(chain.stabilized_at);
    (chain, step)
}

/// Second route to the W-series through an explicit basis of each second
/// wedge.  Slower than [`w_series`] on dense coframes and kept for
/// cross-checking.
pub fn w_series_wedge(alg: &CoframeAlgebra) -> SeriesChain {
    let n = alg.n();
    let dmat = differential_matrix(alg, n);
    grow(
        SeriesKind::W,
        Subspace::zero(Ambient::OneForms(n)),
        2 * n,
        |prev| {
            let u = prev.sum(&prev.conjugate());
            if u.dim() == 2 * n {
                return holomorphic_half(Ambient::OneForms(n));
            }
            let l = wedge_span(&u, &u);
            let ann = l.annihilator();
            if ann.dim() == 0 {
                return holomorphic_half(Ambient::OneForms(n));
            }
            let cond = ann.basis().mul(&dmat).expect("conformable shapes");
            Subspace::span(Ambient::OneForms(n), embed_holomorphic_rows(n, &cond.kernel()))
        },
    )
}

/// Ascending series compatible with J, together with its step when it
/// exhausts the algebra.
///
/// a_k collects the vectors X with both [X, g] and [JX, g] inside a_{k-1}.
/// The returned step is `None` exactly when the complex structure is not
/// nilpotent.
pub fn a_series(alg: &CoframeAlgebra) -> (SeriesChain, Option<usize>) {
    let n = alg.n();
    let table = alg.brackets();
    let chain = grow(
        SeriesKind::A,
        Subspace::zero(Ambient::DualVectors(n)),
        2 * n,
        |prev| vectors_bracketing_into(&table, prev, true),
    );
    let step = (chain.last().dim() == 2 * n).then_some(chain.stabilized_at);
    (chain, step)
}

/// Descending series of J-invariant ideals: h^0 = g and h^k is the bracket
/// of h^{k-1} with g, made J-invariant.
pub fn h_series(alg: &CoframeAlgebra) -> SeriesChain {
    let n = alg.n();
    let table = alg.brackets();
    grow(
        SeriesKind::H,
        Subspace::full(Ambient::DualVectors(n)),
        2 * n,
        |prev| {
            let b = bracket_span(&table, prev);
            b.sum(&b.j_image())
        },
    )
}

/// Computes all six series and the classification they induce, cross-checking
/// every relation between the chains along the way.
///
/// On a non-nilpotent algebra the chains are still reported, but the checks
/// that only hold for nilpotent algebras are skipped with a warning.
pub fn classify(alg: &CoframeAlgebra) -> ClassifyOutcome {
    let n = alg.n();
    let m = 2 * n;
    let mut warnings = Vec::new();

    let (desc, nu_g) = match descending_central(alg) {
        Ok((chain, step)) => (chain, Some(step)),
        Err(NotNilpotent { chain, .. }) => (chain, None),
    };
    let asc = ascending_central(alg);
    let v = v_series(alg);
    let (w, mu_j) = w_series(alg);
    let (a, nu_j) = a_series(alg);
    let h = h_series(alg);
    let h_step = (h.last().dim() == 0).then_some(h.stabilized_at);

    let mut strict_inclusions = Vec::new();
    if let Some(nug) = nu_g {
        assert!(
            asc.last().dim() == m && asc.stabilized_at == nug,
            "internal consistency violated: ascending central series disagrees with the step"
        );
        assert!(
            v.last().dim() == m && v.stabilized_at == nug,
            "internal consistency violated: V-series disagrees with the step"
        );
        for k in 0..=m {
            assert!(
                *v.term(k) == desc.term(k).annihilator(),
                "internal consistency violated: V^{k} is not the annihilator of the central term"
            );
            let w_line = w.term(k).sum(&w.term(k).conjugate());
            assert!(
                v.term(k).contains(&w_line),
                "internal consistency violated: W^{k} + conj leaves V^{k}"
            );
            assert!(
                w_line.annihilator() == *h.term(k),
                "internal consistency violated: Ann(W^{k} + conj) differs from h^{k}"
            );
            let central_j = desc.term(k).sum(&desc.term(k).j_image());
            assert!(
                h.term(k).contains(&central_j),
                "internal consistency violated: g^{k} + J g^{k} leaves h^{k}"
            );
            assert!(
                asc.term(k).contains(a.term(k)),
                "internal consistency violated: a_{k} leaves the ascending central term"
            );
        }
        assert!(
            nu_j == mu_j && nu_j == h_step,
            "internal consistency violated: the a-, W- and h-steps disagree"
        );
        if let Some(nuj) = nu_j {
            assert!(
                nug <= nuj && nuj <= n,
                "internal consistency violated: step {nuj} of J outside [{nug}, {n}]"
            );
            if nug == 1 {
                assert!(
                    nuj == 1,
                    "internal consistency violated: abelian algebra with step of J {nuj}"
                );
            }
            if nug == 2 {
                assert!(
                    nuj == 2 || nuj == 3,
                    "internal consistency violated: 2-step algebra with step of J {nuj}"
                );
            }
            for k in 0..=nuj {
                let w_line = w.term(k).sum(&w.term(k).conjugate());
                let ann = a.term(nuj - k).annihilator();
                assert!(
                    w_line.contains(&ann),
                    "internal consistency violated: Ann(a_{}) leaves W^{k} + conj",
                    nuj - k
                );
                if ann.dim() < w_line.dim() {
                    strict_inclusions.push(k);
                }
                assert!(
                    a.term(nuj - k).contains(h.term(k)),
                    "internal consistency violated: h^{k} leaves a_{}",
                    nuj - k
                );
                if k < nuj {
                    let next_ann = a.term(nuj - k - 1).annihilator();
                    assert!(
                        !w_line.contains(&next_ann),
                        "internal consistency violated: Ann(a_{}) already inside W^{k} + conj",
                        nuj - k - 1
                    );
                }
                if nuj == n {
                    assert!(
                        *a.term(nuj - k) == *h.term(k),
                        "internal consistency violated: maximal pair with h^{k} != a_{}",
                        nuj - k
                    );
                }
            }
        } else {
            assert!(
                nug > 2,
                "internal consistency violated: step {nug} algebra with non-nilpotent J"
            );
        }
    } else {
        warnings.push(
            "the algebra is not nilpotent; series are reported but the classification \
             theorems do not apply"
                .to_string(),
        );
        assert!(
            nu_j.is_none(),
            "internal consistency violated: a-series reached g on a non-nilpotent algebra"
        );
    }

    let classification = Classification {
        nu_g,
        mu_j,
        nu_j,
        nilpotent_j: nu_j.is_some(),
        maxn: nu_j == Some(n) && nu_g.is_some(),
    };
    ClassifyOutcome {
        classification,
        series: SeriesSet {
            descending_central: desc,
            ascending_central: asc,
            v,
            w,
            a,
            h,
        },
        strict_inclusions,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{validate, CoframeAlgebra};
    use crate::dsl::{parse, ParsedPresentation};
    use crate::exact::Rational;
    use crate::forms::{OneForm, TwoForm};
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

    fn from_table(table: Vec<TwoForm>) -> CoframeAlgebra {
        validate(&ParsedPresentation::from_differentials(None, table)).expect("model validates")
    }

    fn type_i(n: usize) -> CoframeAlgebra {
        from_table(type_i_table(n))
    }

    fn type_ii(n: usize) -> CoframeAlgebra {
        from_table(type_ii_table(n))
    }

    fn abelian(n: usize) -> CoframeAlgebra {
        from_table(vec![TwoForm::zero(n); n])
    }

    const CFGU: &str = "n = 5\n\
        d w1 = 0\n\
        d w2 = w1^c(w1)\n\
        d w3 = -w1^c(w1)\n\
        d w4 = w1^w2 + w1^c(w2)\n\
        d w5 = -1/2*w1^w2 - 1/2*w1^w3 + w1^w4 + 1/2*w1^c(w2) + 1/2*w1^c(w3)\n";

    fn cfgu() -> CoframeAlgebra {
        validate(&parse(CFGU).expect("fixture parses")).expect("fixture validates")
    }

    fn solvable_line() -> CoframeAlgebra {
        validate(&parse("n = 1\nd w1 = w1^c(w1)\n").expect("parses")).expect("validates")
    }

    fn e(n: usize, flat: usize) -> Vec<GaussianRational> {
        DualVector::basis(n, flat).to_coord_vec()
    }

    #[test]
    fn steps_of_the_model_families() {
        assert_eq!(descending_central(&type_i(3)).unwrap().1, 3);
        assert_eq!(descending_central(&type_i(5)).unwrap().1, 3);
        assert_eq!(descending_central(&type_ii(3)).unwrap().1, 2);
        assert_eq!(descending_central(&type_ii(6)).unwrap().1, 3);
        assert_eq!(descending_central(&abelian(2)).unwrap().1, 1);
    }

    #[test]
    fn non_nilpotent_algebra_is_detected() {
        let err = descending_central(&solvable_line()).unwrap_err();
        assert!(err.dim > 0);
        assert_eq!(err.chain.last().dim(), err.dim);
    }

    #[test]
    fn center_of_the_dimension_four_model() {
        let n = 4;
        let asc = ascending_central(&type_i(n));
        let mixed = DualVector::basis(n, 2).sub(&DualVector::basis(n, 6));
        let expected = Subspace::span(
            Ambient::DualVectors(n),
            vec![e(n, 3), e(n, 7), mixed.to_coord_vec()],
        );
        assert_eq!(*asc.term(1), expected);
        assert_eq!(asc.last().dim(), 2 * n);
    }

    #[test]
    fn ascending_series_stabilizes_at_the_step() {
        let asc = ascending_central(&type_ii(5));
        assert_eq!(asc.stabilized_at, 3);
        let dims = asc.dims();
        assert!(dims.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn closed_one_forms_of_the_type_ii_model() {
        let n = 4;
        let v = v_series(&type_ii(n));
        let expected = Subspace::span(
            Ambient::OneForms(n),
            vec![
                w(n, 1).to_coord_vec(),
                wb(n, 1).to_coord_vec(),
                w(n, 2).add(&wb(n, 2)).to_coord_vec(),
                w(n, 4).add(&wb(n, 4)).to_coord_vec(),
            ],
        );
        assert_eq!(*v.term(1), expected);
        assert_eq!(v.term(2).dim(), 7);
        assert_eq!(v.term(3).dim(), 8);
    }

    #[test]
    fn v_two_matches_the_chain_prefix() {
        for alg in [type_i(5), type_ii(6), cfgu(), solvable_line()] {
            let chain = v_series(&alg);
            let (v1, v2) = v_two(&alg);
            assert_eq!(&v1, chain.term(1));
            assert_eq!(&v2, chain.term(2));
        }
    }

    #[test]
    fn top_form_escapes_v2_in_the_minimal_model() {
        let n = 3;
        let v = v_series(&type_i(n));
        let top = w(n, 3).to_coord_vec();
        assert!(v.term(3).contains_vec(&top));
        assert!(!v.term(2).contains_vec(&top));
    }

    #[test]
    fn w_series_of_the_cfgu_example() {
        let n = 5;
        let (w_chain, mu) = w_series(&cfgu());
        assert_eq!(w_chain.dims(), vec![0, 2, 3, 4, 5]);
        assert_eq!(mu, Some(4));
        let expected = Subspace::span(
            Ambient::OneForms(n),
            vec![w(n, 1).to_coord_vec(), w(n, 2).add(&w(n, 3)).to_coord_vec()],
        );
        assert_eq!(*w_chain.term(1), expected);
    }

    #[test]
    fn w_series_of_the_models_grows_by_one() {
        let (w_chain, mu) = w_series(&type_i(6));
        assert_eq!(w_chain.dims(), vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(mu, Some(6));
        let (w_chain, mu) = w_series(&abelian(2));
        assert_eq!(w_chain.dims(), vec![0, 2]);
        assert_eq!(mu, Some(1));
    }

    #[test]
    fn contraction_route_agrees_with_the_wedge_route() {
        for alg in [type_i(4), type_ii(5), cfgu(), abelian(3), solvable_line()] {
            let (by_contraction, _) = w_series(&alg);
            let by_wedge = w_series_wedge(&alg);
            assert_eq!(by_contraction, by_wedge);
        }
    }

    #[test]
    fn v_contraction_route_agrees_with_the_wedge_route() {
        for alg in [type_i(4), type_ii(5), cfgu(), abelian(3), solvable_line()] {
            assert_eq!(v_series(&alg), v_series_wedge(&alg));
        }
    }

    #[test]
    fn a_series_of_the_cfgu_example() {
        let n = 5;
        let (a_chain, nu) = a_series(&cfgu());
        assert_eq!(a_chain.dims(), vec![0, 2, 6, 8, 10]);
        assert_eq!(nu, Some(4));
        let expected = Subspace::span(Ambient::DualVectors(n), vec![e(n, 4), e(n, 9)]);
        assert_eq!(*a_chain.term(1), expected);
    }

    #[test]
    fn a_series_of_the_models_is_maximal() {
        let (a_chain, nu) = a_series(&type_i(7));
        assert_eq!(nu, Some(7));
        let j_dims: Vec<usize> = a_chain.dims().iter().map(|d| d / 2).collect();
        assert_eq!(j_dims, vec![0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(a_series(&type_ii(6)).1, Some(6));
        assert_eq!(a_series(&abelian(3)).1, Some(1));
    }

    #[test]
    fn h_series_mirrors_the_a_series_on_a_maximal_pair() {
        let h_chain = h_series(&type_ii(6));
        let j_dims: Vec<usize> = h_chain.dims().iter().map(|d| d / 2).collect();
        assert_eq!(j_dims, vec![6, 5, 4, 3, 2, 1, 0]);
        let (a_chain, nu) = a_series(&type_ii(6));
        let nu = nu.expect("nilpotent");
        for k in 0..=nu {
            assert_eq!(h_chain.term(k), a_chain.term(nu - k));
        }
        assert_eq!(h_series(&abelian(2)).term(1).dim(), 0);
    }

    #[test]
    fn annihilator_duality_between_w_and_h() {
        let alg = cfgu();
        let (w_chain, _) = w_series(&alg);
        let h_chain = h_series(&alg);
        for k in 0..=4 {
            let line = w_chain.term(k).sum(&w_chain.term(k).conjugate());
            assert_eq!(line.annihilator(), *h_chain.term(k));
        }
    }

    #[test]
    fn classification_of_the_models() {
        let out = classify(&type_i(3));
        assert_eq!(out.classification.nu_g, Some(3));
        assert_eq!(out.classification.nu_j, Some(3));
        assert!(out.classification.maxn);

        let out = classify(&type_ii(3));
        assert_eq!(out.classification.nu_g, Some(2));
        assert_eq!(out.classification.nu_j, Some(3));
        assert!(out.classification.maxn);

        let out = classify(&type_i(6));
        assert_eq!(out.classification.nu_g, Some(3));
        assert_eq!(out.classification.mu_j, Some(6));
        assert!(out.classification.maxn);

        let out = classify(&abelian(4));
        assert_eq!(out.classification.nu_g, Some(1));
        assert_eq!(out.classification.nu_j, Some(1));
        assert!(!out.classification.maxn);

        let out = classify(&abelian(1));
        assert!(out.classification.maxn);
    }

    #[test]
    fn classification_of_the_cfgu_example() {
        let out = classify(&cfgu());
        assert_eq!(out.classification.nu_g, Some(3));
        assert_eq!(out.classification.mu_j, Some(4));
        assert_eq!(out.classification.nu_j, Some(4));
        assert!(out.classification.nilpotent_j);
        assert!(!out.classification.maxn);
        assert_eq!(out.strict_inclusions, vec![1, 2]);
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn non_nilpotent_classification_is_partial() {
        let out = classify(&solvable_line());
        assert_eq!(out.classification.nu_g, None);
        assert_eq!(out.classification.nu_j, None);
        assert!(!out.classification.nilpotent_j);
        assert!(!out.classification.maxn);
        assert!(!out.warnings.is_empty());
    }

    fn scramble_ops(n: usize) -> impl Strategy<Value = Vec<(usize, usize, usize)>> {
        prop::collection::vec((0..n, 0..n, 0..5usize), 0..6)
    }

    fn scramble_matrix(n: usize, ops: &[(usize, usize, usize)]) -> Matrix {
        let off_diag = [g(1, 0), g(-1, 0), g(0, 1), g(1, 1), g(2, 0)];
        let diag = [g(2, 0), g(0, 1), g(-1, 0), g(1, 1), g(3, 0)];
        let mut m = Matrix::identity(n);
        for &(i, j, c) in ops {
            let mut e = Matrix::identity(n);
            if i == j {
                e.set(i, i, diag[c].clone());
            } else {
                e.set(i, j, off_diag[c].clone());
            }
            m = m.mul(&e).expect("square");
        }
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn series_dimensions_survive_coframe_changes(ops in scramble_ops(5)) {
            let base = cfgu();
            let moved = base.change_coframe(&scramble_matrix(5, &ops)).expect("invertible");
            let out = classify(&base);
            let out_moved = classify(&moved);
            prop_assert_eq!(&out.classification, &out_moved.classification);
            prop_assert_eq!(out.series.descending_central.dims(), out_moved.series.descending_central.dims());
            prop_assert_eq!(out.series.ascending_central.dims(), out_moved.series.ascending_central.dims());
            prop_assert_eq!(out.series.v.dims(), out_moved.series.v.dims());
            prop_assert_eq!(out.series.w.dims(), out_moved.series.w.dims());
            prop_assert_eq!(out.series.a.dims(), out_moved.series.a.dims());
            prop_assert_eq!(out.series.h.dims(), out_moved.series.h.dims());
            prop_assert_eq!(&out.strict_inclusions, &out_moved.strict_inclusions);
        }
    }
}
