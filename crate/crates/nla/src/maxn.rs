//! Constructive coframe normal forms for maximally nilpotent pairs.
//!
//! A pair (g, J) with `nu(J) = dim_C g` admits a triangular coframe adapted
//! to the W filtration, and on top of that an *admissible* coframe in which
//! every index is either dependent (`d w^k + d conj(w^k) = 0`) or has its
//! differential pair independent of everything below. The set of dependent
//! indices, `Dpt(J)`, is a basis-free invariant and `|Dpt| + 1` is the
//! complex dimension of the closed 1-forms.
//!
//! For 3-step algebras of complex dimension at least five there is a further
//! *strictly admissible* normal form: between index 3 and n-2 the
//! independent coframe elements can be pushed into `V^2`, membership in
//! `V^2` is controlled by a parity pattern on `Dpt`, and the last two
//! indices fall into a short list of terminal shapes. [`strictly_admissible`]
//! carries out that construction and reports which terminal shape occurred
//! together with an explicit labeled basis of `V^2` and the Betti-number
//! bookkeeping of [`structure_report`].

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::algebra::CoframeAlgebra;
use crate::exact::{Ambient, GaussianRational, Matrix, Subspace};
use crate::forms::{flat_omega, flat_omega_bar, OneForm};
use crate::series::{descending_central, v_two, w_series};

#[derive(Debug, Error)]
pub enum MaxnError {
    #[error("the pair is not maximally nilpotent")]
    NotMaxN,
    /// A rank test produced data the normalization theorem rules out. This
    /// is a bug trap: it cannot fire on a genuinely maximally nilpotent
    /// input.
    #[error("internal contradiction during normalization: {0}")]
    InternalContradiction(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    /// The structure theorem guarantees each construction step succeeds;
    /// reaching this variant means the implementation disagrees with it.
    #[error("structure theorem violated: {0}")]
    StructureTheoremViolation(String),
}

/// Per-index disposition of the differential pair `{d w^k, d conj(w^k)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    /// `d w^k + d conj(w^k) = 0` exactly.
    Dependent,
    /// No nontrivial combination of the pair lands in the span of the lower
    /// differentials.
    Independent,
}

/// An algebra rewritten in an admissible coframe, together with the
/// dependence flag of every index. Indices 1 and 2 are always dependent.
#[derive(Debug, Clone)]
pub struct AdmissibleCoframe {
    base: CoframeAlgebra,
    flags: Vec<Flag>,
}

impl AdmissibleCoframe {
    pub fn base(&self) -> &CoframeAlgebra {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn flag(&self, k: usize) -> Flag {
        self.flags[k - 1]
    }

    /// The dependent index set, 1-based.
    pub fn dpt(&self) -> BTreeSet<usize> {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, f)| **f == Flag::Dependent)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// A basis vector with a printable name.
#[derive(Debug, Clone)]
pub struct LabeledForm {
    pub label: String,
    pub form: OneForm,
}

impl LabeledForm {
    fn new(form: OneForm) -> LabeledForm {
        LabeledForm {
            label: format!("{}", form),
            form,
        }
    }
}

impl fmt::Display for LabeledForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Dimension bookkeeping for a normalized pair. Reports are *full* when the
/// pair is maximally nilpotent with a 3-step algebra of dimension at least
/// five, and partial (counts only) otherwise.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub dpt: BTreeSet<usize>,
    /// Whether `n - 2` is a dependent index; `None` on partial reports.
    pub parity_anchor: Option<bool>,
    /// `dim_C V^1`, the first Betti number of any associated nilmanifold.
    pub b1: usize,
    pub dim_g1: usize,
    pub dim_g2: usize,
    pub bounds_ok: Option<bool>,
    pub v2_basis: Vec<LabeledForm>,
    /// Terminal shape of the last two coframe indices, as
    /// `"<penult>/<top>"`; `None` on partial reports.
    pub case_tag: Option<String>,
    /// Exactly 1 for maximally nilpotent pairs, otherwise the generic upper
    /// bound `dim_C W^1`.
    pub algebraic_dimension: usize,
}

struct Gate {
    nu_g: Option<usize>,
    maxn: bool,
    w1_dim: usize,
}

fn gate(alg: &CoframeAlgebra) -> Gate {
    let (w_chain, w_step) = w_series(alg);
    let nu_g = descending_central(alg).ok().map(|(_, step)| step);
    Gate {
        maxn: nu_g.is_some() && w_step == Some(alg.n()),
        nu_g,
        w1_dim: w_chain.term(1).dim(),
    }
}

fn coframe_index(n: usize, flat: usize) -> usize {
    if flat < n {
        flat + 1
    } else {
        flat - n + 1
    }
}

/// Reorder the coframe so that `span{w^1..w^k} = W^k` for every `k`. In the
/// result each `d w^k` is supported on indices below `k` and its index-(k-1)
/// coefficients are not all zero.
pub fn triangular_coframe(alg: &CoframeAlgebra) -> Result<CoframeAlgebra, MaxnError> {
    let n = alg.n();
    let (w_chain, w_step) = w_series(alg);
    if w_step != Some(n) || descending_central(alg).is_err() {
        return Err(MaxnError::NotMaxN);
    }
    let mut chosen: Vec<Vec<GaussianRational>> = Vec::with_capacity(n);
    for k in 1..=n {
        let term = w_chain.term(k);
        let mut found = false;
        for row in term.basis_rows() {
            assert!(
                row[n..].iter().all(GaussianRational::is_zero),
                "internal consistency violated: W term leaves the holomorphic half"
            );
            let mut rows = chosen.clone();
            rows.push(row[..n].to_vec());
            let m = Matrix::from_rows(rows).expect("uniform row length");
            if m.rank() == chosen.len() + 1 {
                chosen.push(row[..n].to_vec());
                found = true;
                break;
            }
        }
        if !found {
            return Err(MaxnError::InternalContradiction(format!(
                "W^{k} has no direction outside W^{}",
                k - 1
            )));
        }
    }
    let m = Matrix::from_rows(chosen).expect("uniform row length");
    let out = alg
        .change_coframe(&m)
        .map_err(|e| MaxnError::InternalContradiction(format!("coframe change failed: {e}")))?;
    for k in 1..=n {
        let mut top = false;
        for ((p, q), _) in out.d(k).iter() {
            let (a, b) = (coframe_index(n, p), coframe_index(n, q));
            if a.max(b) > k - 1 {
                return Err(MaxnError::InternalContradiction(format!(
                    "d w{k} is not supported below index {k}"
                )));
            }
            top |= a.max(b) == k - 1;
        }
        if k >= 2 && !top {
            return Err(MaxnError::InternalContradiction(format!(
                "d w{k} has no index-{} coefficient",
                k - 1
            )));
        }
    }
    Ok(out)
}

/// The subspace of pairs `(a, b)` with `a x + b y` inside the row span of
/// `lower`, reported as (rank, leading rref row).
fn pair_space(
    x: &[GaussianRational],
    y: &[GaussianRational],
    lower: &[Vec<GaussianRational>],
) -> (usize, Option<(GaussianRational, GaussianRational)>) {
    let mut rows = vec![x.to_vec(), y.to_vec()];
    rows.extend(lower.iter().cloned());
    let stacked = Matrix::from_rows(rows).expect("uniform row length");
    let kern = stacked.transpose().kernel();
    let mut pairs = Vec::with_capacity(kern.rows());
    for r in 0..kern.rows() {
        pairs.push(vec![kern.at(r, 0).clone(), kern.at(r, 1).clone()]);
    }
    if pairs.is_empty() {
        return (0, None);
    }
    let mut m = Matrix::from_rows(pairs).expect("two columns");
    m.rref();
    let rank = m.rank();
    if rank == 0 {
        (0, None)
    } else {
        (rank, Some((m.at(0, 0).clone(), m.at(0, 1).clone())))
    }
}

/// A Gaussian rational `c` with `conj(c)/c = u`, for unit-modulus `u`. The
/// choice `c = 1 + conj(u)` (or `i` at the excluded point `u = -1`) keeps
/// the rescaling inside the field; any nonzero solution works.
fn unit_ratio_scale(u: &GaussianRational) -> GaussianRational {
    debug_assert!(u.is_unit_modulus());
    if u.is_one() {
        GaussianRational::one()
    } else if *u == -GaussianRational::one() {
        GaussianRational::i()
    } else {
        GaussianRational::one() + u.conj()
    }
}

/// Rewrite a maximally nilpotent pair in an admissible coframe: ascending
/// over `k`, the pair `{d w^k, d conj(w^k)}` is rank-tested against the
/// lower differentials; dependent indices are rescaled and shifted until
/// `d w^k + d conj(w^k) = 0` exactly. Afterwards `d w^2` is scaled to
/// `w1 ^ c(w1)` and that summand is stripped from every higher
/// differential.
pub fn admissible_normalize(alg: &CoframeAlgebra) -> Result<AdmissibleCoframe, MaxnError> {
    let mut cur = triangular_coframe(alg)?;
    let n = cur.n();
    let mut flags = vec![Flag::Independent; n];
    if n >= 1 {
        flags[0] = Flag::Dependent;
        if !cur.d(1).is_zero() {
            return Err(MaxnError::InternalContradiction(
                "d w1 does not vanish in triangular form".into(),
            ));
        }
    }
    for k in 2..=n {
        if cur.d(k).add(&cur.d(k).conjugate()).is_zero() {
            flags[k - 1] = Flag::Dependent;
            continue;
        }
        let lower: Vec<Vec<GaussianRational>> = (1..k)
            .flat_map(|i| {
                [
                    cur.d(i).to_coord_vec(),
                    cur.d(i).conjugate().to_coord_vec(),
                ]
            })
            .collect();
        let x = cur.d(k).to_coord_vec();
        let y = cur.d(k).conjugate().to_coord_vec();
        let (rank, lead) = pair_space(&x, &y, &lower);
        match rank {
            0 => continue,
            1 => {}
            _ => {
                return Err(MaxnError::InternalContradiction(format!(
                    "d w{k} alone lies in the lower differential span"
                )))
            }
        }
        let (a, b) = lead.expect("rank one has a leading row");
        if a.is_zero() || b.is_zero() {
            return Err(MaxnError::InternalContradiction(format!(
                "one-sided dependence at index {k}"
            )));
        }
        let u = &b / &a;
        if !u.is_unit_modulus() {
            return Err(MaxnError::InternalContradiction(format!(
                "dependence ratio at index {k} has modulus squared {}",
                u.norm_sqr()
            )));
        }
        flags[k - 1] = Flag::Dependent;
        let c = unit_ratio_scale(&u);
        // Coordinates of c * d w^k + conj(c) * d conj(w^k), the
        // conjugation-fixed combination that lands in the lower span.
        let mut target = Vec::with_capacity(x.len());
        for (xv, yv) in x.iter().zip(&y) {
            target.push(&c * xv + &c.conj() * yv);
        }
        let lower_m = Matrix::from_rows(lower).expect("uniform row length");
        let coeffs = lower_m.express_in_rows(&target).ok_or_else(|| {
            MaxnError::InternalContradiction(format!(
                "dependent combination at index {k} missed the lower span"
            ))
        })?;
        let half = GaussianRational::from_ratio(1, 2);
        let mut m = Matrix::identity(n);
        m.set(k - 1, k - 1, c.clone());
        for i in 1..k {
            let a_i = &coeffs[2 * (i - 1)];
            let b_i = &coeffs[2 * (i - 1) + 1];
            let sym = &(a_i + &b_i.conj()) * &half;
            if !sym.is_zero() {
                m.set(k - 1, i - 1, -sym);
            }
        }
        cur = cur
            .change_coframe(&m)
            .map_err(|e| MaxnError::InternalContradiction(format!("coframe change failed: {e}")))?;
    }
    if n >= 2 {
        let b11 = cur.d(2).coeff(flat_omega(1), flat_omega_bar(n, 1));
        if b11.is_zero() || !b11.is_real() {
            return Err(MaxnError::InternalContradiction(format!(
                "d w2 coefficient at w1 ^ c(w1) is {b11}"
            )));
        }
        let mut m = Matrix::identity(n);
        m.set(1, 1, b11.inverse());
        cur = cur
            .change_coframe(&m)
            .map_err(|e| MaxnError::InternalContradiction(format!("coframe change failed: {e}")))?;
        let mut m = Matrix::identity(n);
        let mut dirty = false;
        for k in 3..=n {
            let c_k = cur.d(k).coeff(flat_omega(1), flat_omega_bar(n, 1));
            if !c_k.is_zero() {
                m.set(k - 1, 1, -&c_k);
                dirty = true;
            }
        }
        if dirty {
            cur = cur.change_coframe(&m).map_err(|e| {
                MaxnError::InternalContradiction(format!("coframe change failed: {e}"))
            })?;
        }
    }
    for k in 1..=n {
        if flags[k - 1] == Flag::Dependent
            && !cur.d(k).add(&cur.d(k).conjugate()).is_zero()
        {
            return Err(MaxnError::InternalContradiction(format!(
                "index {k} lost its dependence during cleanup"
            )));
        }
    }
    Ok(AdmissibleCoframe { base: cur, flags })
}

/// The dependent index set. Basis independent: any coframe change of the
/// same pair yields the same set.
pub fn dpt(alg: &CoframeAlgebra) -> Result<BTreeSet<usize>, MaxnError> {
    Ok(admissible_normalize(alg)?.dpt())
}

/// The canonical basis of `V^1` attached to an admissible coframe:
/// `{w^1, c(w^1)}` plus `w^k + c(w^k)` for every dependent `k >= 2`.
pub fn v1_basis(adm: &AdmissibleCoframe) -> Vec<LabeledForm> {
    let n = adm.n();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    out.push(LabeledForm::new(OneForm::omega(n, 1)));
    out.push(LabeledForm::new(OneForm::omega_bar(n, 1)));
    for k in 2..=n {
        if adm.flag(k) == Flag::Dependent {
            out.push(LabeledForm::new(
                OneForm::omega(n, k).add(&OneForm::omega_bar(n, k)),
            ));
        }
    }
    let v1 = v_two(adm.base()).0;
    let span = Subspace::span(
        Ambient::OneForms(n),
        out.iter().map(|f| f.form.to_coord_vec()).collect(),
    );
    assert_eq!(
        span, v1,
        "internal consistency violated: labeled V^1 basis does not span the closed forms"
    );
    assert_eq!(out.len(), v1.dim(), "internal consistency violated: V^1 dimension");
    out
}

/// A representative of `v2` supported on `w^1..w^hi` (holomorphic only)
/// with a nonzero coefficient at `w^target`, normalized to 1 there.
fn holomorphic_solve(
    v2: &Subspace,
    n: usize,
    hi: usize,
    target: usize,
) -> Option<Vec<GaussianRational>> {
    let rows = (0..hi)
        .map(|i| {
            let mut v = vec![GaussianRational::zero(); 2 * n];
            v[i] = GaussianRational::one();
            v
        })
        .collect();
    let section = v2.intersect(&Subspace::span(Ambient::OneForms(n), rows));
    let t = flat_omega(target);
    for row in section.basis_rows() {
        if !row[t].is_zero() {
            let inv = row[t].inverse();
            return Some(row.iter().map(|v| v * &inv).collect());
        }
    }
    None
}

/// Rank and leading direction of a subspace's projection onto the
/// coordinate plane `(c0, c1)`.
fn plane_projection(
    sub: &Subspace,
    c0: usize,
    c1: usize,
) -> (usize, Option<(GaussianRational, GaussianRational)>) {
    let mut rows = Vec::new();
    for row in sub.basis_rows() {
        if !row[c0].is_zero() || !row[c1].is_zero() {
            rows.push(vec![row[c0].clone(), row[c1].clone()]);
        }
    }
    if rows.is_empty() {
        return (0, None);
    }
    let mut m = Matrix::from_rows(rows).expect("two columns");
    m.rref();
    (m.rank(), Some((m.at(0, 0).clone(), m.at(0, 1).clone())))
}

/// From a `v2` element with unit-ratio components at index `idx`, build the
/// holomorphic replacement row making `w~^idx + c(w~^idx)` a `v2` member.
fn pair_replacement_row(
    n: usize,
    v2: &Subspace,
    rep: &[GaussianRational],
    idx: usize,
) -> Result<Vec<GaussianRational>, MaxnError> {
    let a = &rep[flat_omega(idx)];
    let b = &rep[flat_omega_bar(n, idx)];
    if a.is_zero() || b.is_zero() {
        return Err(MaxnError::StructureTheoremViolation(format!(
            "one-sided V^2 component at index {idx}"
        )));
    }
    let u = b / a;
    if !u.is_unit_modulus() {
        return Err(MaxnError::StructureTheoremViolation(format!(
            "V^2 component ratio at index {idx} has modulus squared {}",
            u.norm_sqr()
        )));
    }
    let c = unit_ratio_scale(&u);
    let f = OneForm::from_coord_vec(n, rep).scale(&(&c / a));
    let sym = f
        .add(&f.conjugate())
        .scale(&GaussianRational::from_ratio(1, 2));
    if !v2.contains_vec(&sym.to_coord_vec()) {
        return Err(MaxnError::StructureTheoremViolation(format!(
            "symmetrized index-{idx} combination left V^2"
        )));
    }
    let coords = sym.to_coord_vec();
    let mut row = coords[..n].to_vec();
    row[idx - 1] = c;
    // Drop the w2 shift: w2 is a V^2 member, and keeping it out of the
    // replacement keeps w1 ^ c(w1) out of the rewritten differential.
    row[1] = GaussianRational::zero();
    Ok(row)
}

fn replace_row(cur: &CoframeAlgebra, idx: usize, row: Vec<GaussianRational>) -> Result<CoframeAlgebra, MaxnError> {
    let n = cur.n();
    let mut m = Matrix::identity(n);
    for (j, v) in row.into_iter().enumerate() {
        m.set(idx - 1, j, v);
    }
    cur.change_coframe(&m)
        .map_err(|e| MaxnError::InternalContradiction(format!("coframe change failed: {e}")))
}

/// Coordinates of a subspace after the single-row coframe change of
/// [`replace_row`].  `V^2` itself does not move under a coframe change, so
/// rewriting its basis is much cheaper than recomputing it: with
/// `w~^idx = sum_j row_j w^j` the old covector `w^idx` is back-substituted
/// into every basis row, and likewise for the conjugate block.
fn rebase_after_replace(
    space: &Subspace,
    n: usize,
    idx: usize,
    row: &[GaussianRational],
) -> Subspace {
    let d = &row[idx - 1];
    assert!(!d.is_zero(), "replacement rows keep a nonzero diagonal");
    let rows: Vec<Vec<GaussianRational>> = space
        .basis_rows()
        .map(|r| {
            let mut out = r.to_vec();
            let ck = &r[idx - 1] / d;
            let ckb = &r[n + idx - 1] / &d.conj();
            out[idx - 1] = ck.clone();
            out[n + idx - 1] = ckb.clone();
            for (j, m) in row.iter().enumerate() {
                if j == idx - 1 || m.is_zero() {
                    continue;
                }
                out[j] = &out[j] - &(&ck * m);
                out[n + j] = &out[n + j] - &(&ckb * &m.conj());
            }
            out
        })
        .collect();
    Subspace::span(Ambient::OneForms(n), rows)
}

fn omega_vec(n: usize, k: usize) -> Vec<GaussianRational> {
    OneForm::omega(n, k).to_coord_vec()
}

fn pair_vec(n: usize, k: usize) -> Vec<GaussianRational> {
    OneForm::omega(n, k)
        .add(&OneForm::omega_bar(n, k))
        .to_coord_vec()
}

/// The differential shape forced on a `V^2` member of an admissible
/// coframe: a combination of `w1 ^ (w^j + c(w^j))` over dependent `j < k`
/// with a nonzero term at `j = k - 1`.
fn check_v2_member_shape(
    cur: &CoframeAlgebra,
    dpt_set: &BTreeSet<usize>,
    k: usize,
) -> Result<(), MaxnError> {
    let n = cur.n();
    let d = cur.d(k);
    let mut top = false;
    let mut seen: Vec<(usize, GaussianRational, GaussianRational)> = Vec::new();
    for ((p, q), v) in d.iter() {
        if p != flat_omega(1) {
            return Err(MaxnError::StructureTheoremViolation(format!(
                "d w{k} has a term not led by w1"
            )));
        }
        let j = coframe_index(n, q);
        if j >= k || !dpt_set.contains(&j) {
            return Err(MaxnError::StructureTheoremViolation(format!(
                "d w{k} touches index {j} outside the dependent range"
            )));
        }
        top |= j == k - 1;
        if q < n {
            seen.push((j, v.clone(), GaussianRational::zero()));
        } else {
            seen.push((j, GaussianRational::zero(), v.clone()));
        }
    }
    if !top {
        return Err(MaxnError::StructureTheoremViolation(format!(
            "d w{k} misses index {}",
            k - 1
        )));
    }
    let mut holo = vec![GaussianRational::zero(); n + 1];
    let mut anti = vec![GaussianRational::zero(); n + 1];
    for (j, h, a) in seen {
        holo[j] += &h;
        anti[j] += &a;
    }
    for j in 1..=n {
        if holo[j] != anti[j] {
            return Err(MaxnError::StructureTheoremViolation(format!(
                "d w{k} is not a combination of w1 ^ (w^j + c(w^j)) terms"
            )));
        }
    }
    Ok(())
}

/// Push every independent index in `3..=n-2` into `V^2`, verify the parity
/// pattern of the dependent set, and resolve the last two indices by the
/// terminal case analysis. Returns the rewritten coframe and the full
/// structure report.
pub fn strictly_admissible(
    adm: &AdmissibleCoframe,
) -> Result<(AdmissibleCoframe, StructureReport), MaxnError> {
    let n = adm.n();
    // An AdmissibleCoframe is only built from a MaxN pair, so only the
    // algebra step needs re-checking here.
    let nu_g = descending_central(adm.base()).ok().map(|(_, step)| step);
    if nu_g != Some(3) {
        return Err(MaxnError::PreconditionFailed(format!(
            "the algebra step is {nu_g:?}, not 3"
        )));
    }
    if n < 5 {
        return Err(MaxnError::PreconditionFailed(format!(
            "dimension {n} is below 5"
        )));
    }
    let dpt_set = adm.dpt();
    let anchor = dpt_set.contains(&(n - 2));
    for k in 3..=n - 2 {
        let same_parity = k % 2 == (n - 2) % 2;
        if dpt_set.contains(&k) != (same_parity == anchor) {
            return Err(MaxnError::StructureTheoremViolation(format!(
                "dependent set parity breaks at index {k}"
            )));
        }
    }
    let mut cur = adm.base().clone();
    let mut v2 = v_two(&cur).1;
    for k in 3..=n - 2 {
        if dpt_set.contains(&k) {
            continue;
        }
        if !v2.contains_vec(&omega_vec(n, k)) {
            let mut row = holomorphic_solve(&v2, n, k, k).ok_or_else(|| {
                MaxnError::StructureTheoremViolation(format!(
                    "w{k} has no V^2 representative with lower-index shifts"
                ))
            })?;
            row[1] = GaussianRational::zero();
            v2 = rebase_after_replace(&v2, n, k, &row[..n]);
            cur = replace_row(&cur, k, row[..n].to_vec())?;
        }
    }
    {
        for k in 3..=n - 2 {
            if !dpt_set.contains(&k) {
                if !v2.contains_vec(&omega_vec(n, k)) {
                    return Err(MaxnError::StructureTheoremViolation(format!(
                        "w{k} still escapes V^2 after its shift"
                    )));
                }
                check_v2_member_shape(&cur, &dpt_set, k)?;
            } else if v2.contains_vec(&omega_vec(n, k)) {
                return Err(MaxnError::StructureTheoremViolation(format!(
                    "dependent w{k} lies in V^2"
                )));
            }
        }
    }

    // Index n-1: either it can be shifted into V^2 ("split") or only the
    // conjugation-fixed combination can ("pair").
    let penult;
    {
        let split = if v2.contains_vec(&omega_vec(n, n - 1)) {
            Some(None)
        } else {
            holomorphic_solve(&v2, n, n - 1, n - 1).map(Some)
        };
        if !anchor && split.is_some() {
            return Err(MaxnError::StructureTheoremViolation(
                "index n-1 entered V^2 without the n-2 anchor".into(),
            ));
        }
        if !anchor && dpt_set.contains(&n) {
            return Err(MaxnError::StructureTheoremViolation(
                "top index is dependent without the n-2 anchor".into(),
            ));
        }
        if anchor && dpt_set.contains(&(n - 1)) {
            return Err(MaxnError::StructureTheoremViolation(
                "indices n-2 and n-1 are both dependent".into(),
            ));
        }
        match split {
            Some(None) => penult = "penult-split",
            Some(Some(mut row)) => {
                row[1] = GaussianRational::zero();
                v2 = rebase_after_replace(&v2, n, n - 1, &row[..n]);
                cur = replace_row(&cur, n - 1, row[..n].to_vec())?;
                penult = "penult-split";
            }
            None => {
                if anchor && dpt_set.contains(&n) {
                    return Err(MaxnError::StructureTheoremViolation(
                        "dependent top index forces index n-1 into V^2".into(),
                    ));
                }
                if dpt_set.contains(&(n - 1)) {
                    if !v2.contains_vec(&pair_vec(n, n - 1)) {
                        return Err(MaxnError::StructureTheoremViolation(
                            "dependent index n-1 escapes V^2 as a pair".into(),
                        ));
                    }
                } else if !v2.contains_vec(&pair_vec(n, n - 1)) {
                    let keep: Vec<Vec<GaussianRational>> = (0..2 * n)
                        .filter(|p| *p != flat_omega(n) && *p != flat_omega_bar(n, n))
                        .map(|p| {
                            let mut v = vec![GaussianRational::zero(); 2 * n];
                            v[p] = GaussianRational::one();
                            v
                        })
                        .collect();
                    let t = v2.intersect(&Subspace::span(Ambient::OneForms(n), keep));
                    let (rank, _) =
                        plane_projection(&t, flat_omega(n - 1), flat_omega_bar(n, n - 1));
                    match rank {
                        0 => {
                            return Err(MaxnError::StructureTheoremViolation(
                                "index n-1 has no V^2 combination at all".into(),
                            ))
                        }
                        1 => {}
                        _ => {
                            return Err(MaxnError::StructureTheoremViolation(
                                "split solve missed a full n-1 plane".into(),
                            ))
                        }
                    }
                    let rep = t
                        .basis_rows()
                        .find(|row| !row[flat_omega(n - 1)].is_zero())
                        .map(<[GaussianRational]>::to_vec)
                        .ok_or_else(|| {
                            MaxnError::StructureTheoremViolation(
                                "no usable index n-1 representative".into(),
                            )
                        })?;
                    let row = pair_replacement_row(n, &v2, &rep, n - 1)?;
                    v2 = rebase_after_replace(&v2, n, n - 1, &row);
                    cur = replace_row(&cur, n - 1, row)?;
                }
                penult = "penult-pair";
            }
        }
    }

    // Index n: dependent tops pair off through V^1; otherwise the V^2
    // projection onto the top coordinate plane decides the shape.
    let top;
    {
        let (rank, lead) = plane_projection(&v2, flat_omega(n), flat_omega_bar(n, n));
        if dpt_set.contains(&n) {
            if !anchor {
                return Err(MaxnError::StructureTheoremViolation(
                    "top index is dependent without the n-2 anchor".into(),
                ));
            }
            if rank != 1 {
                return Err(MaxnError::StructureTheoremViolation(format!(
                    "dependent top index has V^2 plane rank {rank}"
                )));
            }
            if !v2.contains_vec(&pair_vec(n, n)) {
                return Err(MaxnError::StructureTheoremViolation(
                    "dependent top pair escapes V^2".into(),
                ));
            }
            top = "top-dependent";
        } else {
            let penult_dependent = dpt_set.contains(&(n - 1));
            match rank {
                0 => top = "top-absent",
                1 => {
                    if penult == "penult-pair" && anchor {
                        return Err(MaxnError::StructureTheoremViolation(
                            "anchored pair case admits no top component".into(),
                        ));
                    }
                    if !anchor && !penult_dependent {
                        return Err(MaxnError::StructureTheoremViolation(
                            "top component appeared with a free index n-1".into(),
                        ));
                    }
                    let (a, b) = lead.expect("rank one has a leading row");
                    if a.is_zero() || b.is_zero() || a.norm_sqr() != b.norm_sqr() {
                        return Err(MaxnError::StructureTheoremViolation(
                            "top plane direction is not unit ratio".into(),
                        ));
                    }
                    if !v2.contains_vec(&pair_vec(n, n)) {
                        let rep = v2
                            .basis_rows()
                            .find(|row| !row[flat_omega(n)].is_zero())
                            .map(<[GaussianRational]>::to_vec)
                            .ok_or_else(|| {
                                MaxnError::StructureTheoremViolation(
                                    "no usable top representative".into(),
                                )
                            })?;
                        let row = pair_replacement_row(n, &v2, &rep, n)?;
                        v2 = rebase_after_replace(&v2, n, n, &row);
                        cur = replace_row(&cur, n, row)?;
                    }
                    top = "top-pair";
                }
                _ => {
                    if anchor || !penult_dependent {
                        return Err(MaxnError::StructureTheoremViolation(
                            "full top plane outside the split case".into(),
                        ));
                    }
                    if !v2.contains_vec(&omega_vec(n, n)) {
                        let mut row = holomorphic_solve(&v2, n, n, n).ok_or_else(|| {
                            MaxnError::StructureTheoremViolation(
                                "full top plane without a holomorphic representative".into(),
                            )
                        })?;
                        row[1] = GaussianRational::zero();
                        v2 = rebase_after_replace(&v2, n, n, &row[..n]);
                        cur = replace_row(&cur, n, row[..n].to_vec())?;
                    }
                    top = "top-split";
                }
            }
        }
    }

    let mut basis = Vec::new();
    match top {
        "top-dependent" | "top-pair" => basis.push(LabeledForm::new(
            OneForm::omega(n, n).add(&OneForm::omega_bar(n, n)),
        )),
        "top-split" => {
            basis.push(LabeledForm::new(OneForm::omega(n, n)));
            basis.push(LabeledForm::new(OneForm::omega_bar(n, n)));
        }
        _ => {}
    }
    if penult == "penult-split" {
        basis.push(LabeledForm::new(OneForm::omega(n, n - 1)));
        basis.push(LabeledForm::new(OneForm::omega_bar(n, n - 1)));
    } else {
        basis.push(LabeledForm::new(
            OneForm::omega(n, n - 1).add(&OneForm::omega_bar(n, n - 1)),
        ));
    }
    for k in (3..=n - 2).rev() {
        if dpt_set.contains(&k) {
            basis.push(LabeledForm::new(
                OneForm::omega(n, k).add(&OneForm::omega_bar(n, k)),
            ));
        } else {
            basis.push(LabeledForm::new(OneForm::omega(n, k)));
            basis.push(LabeledForm::new(OneForm::omega_bar(n, k)));
        }
    }
    for k in [2, 1] {
        basis.push(LabeledForm::new(OneForm::omega(n, k)));
        basis.push(LabeledForm::new(OneForm::omega_bar(n, k)));
    }
    let span = Subspace::span(
        Ambient::OneForms(n),
        basis.iter().map(|f| f.form.to_coord_vec()).collect(),
    );
    if span != v2 || basis.len() != v2.dim() {
        return Err(MaxnError::StructureTheoremViolation(format!(
            "terminal V^2 basis spans {} of {} dimensions",
            span.dim(),
            v2.dim()
        )));
    }

    let v1_dim = v_two(&cur).0.dim();
    assert_eq!(
        v1_dim,
        dpt_set.len() + 1,
        "internal consistency violated: dim V^1 is not |Dpt| + 1"
    );
    let b1 = v1_dim;
    let dim_g1 = 2 * n - v1_dim;
    let dim_g2 = 2 * n - v2.dim();
    let bounds_ok = (3 * n - 4) / 2 <= dim_g1
        && dim_g1 <= (3 * n - 1) / 2
        && (n - 2) / 2 <= dim_g2
        && dim_g2 <= (n + 3) / 2
        && (n + 2) / 2 <= b1
        && b1 <= (n + 5) / 2;
    let report = StructureReport {
        dpt: dpt_set,
        parity_anchor: Some(anchor),
        b1,
        dim_g1,
        dim_g2,
        bounds_ok: Some(bounds_ok),
        v2_basis: basis,
        case_tag: Some(format!("{penult}/{top}")),
        algebraic_dimension: 1,
    };
    Ok((
        AdmissibleCoframe {
            base: cur,
            flags: adm.flags.clone(),
        },
        report,
    ))
}

/// Dimension report for any valid algebra. Full (with `Dpt`, the `V^2`
/// basis, the terminal tag and the bound checks) when the pair is maximally
/// nilpotent with a 3-step algebra of dimension at least five; otherwise
/// only the counts are filled in.
pub fn structure_report(alg: &CoframeAlgebra) -> StructureReport {
    let n = alg.n();
    let g = gate(alg);
    if g.maxn && g.nu_g == Some(3) && n >= 5 {
        let adm = admissible_normalize(alg).expect("maximally nilpotent pairs normalize");
        let (_, report) = strictly_admissible(&adm).expect("structure theorem applies");
        return report;
    }
    let (v1_space, v2_space) = v_two(alg);
    let v1 = v1_space.dim();
    let v2 = v2_space.dim();
    StructureReport {
        dpt: BTreeSet::new(),
        parity_anchor: None,
        b1: v1,
        dim_g1: 2 * n - v1,
        dim_g2: 2 * n - v2,
        bounds_ok: None,
        v2_basis: Vec::new(),
        case_tag: None,
        algebraic_dimension: if g.maxn { 1 } else { g.w1_dim },
    }
}
