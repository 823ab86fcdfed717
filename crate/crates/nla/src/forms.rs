//! Sparse exterior forms and dual vectors over the complexified coframe.
//!
//! For an algebra with holomorphic coframe `w1..wn` the complexified dual
//! space has the ordered basis `w1, .., wn, c(w1), .., c(wn)`; a basis element
//! is addressed by its flat index `0..2n`. Two- and three-forms are kept as
//! sparse maps over strictly increasing index tuples.

use std::collections::BTreeMap;
use std::fmt;

use crate::exact::{Ambient, GaussianRational, Subspace};

/// Flat index of `w^k` (1-indexed `k`).
pub fn flat_omega(k: usize) -> usize {
    k - 1
}

/// Flat index of `c(w^k)` (1-indexed `k`).
pub fn flat_omega_bar(n: usize, k: usize) -> usize {
    n + k - 1
}

/// Flat index of the conjugate basis element.
pub fn conj_flat(n: usize, p: usize) -> usize {
    if p < n {
        p + n
    } else {
        p - n
    }
}

/// Whether the flat index addresses a (1,0) basis form.
pub fn is_holomorphic(n: usize, p: usize) -> bool {
    p < n
}

/// Position of the pair `(p, q)` with `p < q` in the lexicographic ordering
/// of strictly increasing pairs drawn from `0..2n`.
pub fn pair_index(n: usize, p: usize, q: usize) -> usize {
    let m = 2 * n;
    debug_assert!(p < q && q < m);
    p * (2 * m - p - 1) / 2 + q - p - 1
}

fn fmt_basis(f: &mut fmt::Formatter<'_>, n: usize, p: usize) -> fmt::Result {
    if p < n {
        write!(f, "w{}", p + 1)
    } else {
        write!(f, "c(w{})", p - n + 1)
    }
}

fn fmt_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coeff: &GaussianRational,
) -> Result<bool, fmt::Error> {
    let mut c = coeff.clone();
    let negative = c.im.is_zero() && c.re.is_negative()
        || c.re.is_zero() && c.im.is_negative();
    if negative {
        c = -&c;
        f.write_str(if first { "-" } else { " - " })?;
    } else if !first {
        f.write_str(" + ")?;
    }
    if !c.is_one() {
        if c.is_real() || c.re.is_zero() {
            write!(f, "{}*", c)?;
        } else {
            write!(f, "({})*", c)?;
        }
    }
    Ok(false)
}

fn add_coeff<K: Ord>(map: &mut BTreeMap<K, GaussianRational>, key: K, delta: GaussianRational) {
    if delta.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(delta);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &delta;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

macro_rules! linear_impls {
    ($t:ident) => {
        impl $t {
            pub fn zero(n: usize) -> $t {
                $t {
                    n,
                    coords: BTreeMap::new(),
                }
            }

            pub fn n(&self) -> usize {
                self.n
            }

            pub fn is_zero(&self) -> bool {
                self.coords.is_empty()
            }

            pub fn add(&self, other: &$t) -> $t {
                assert_eq!(self.n, other.n, "mixed coframe sizes");
                let mut out = self.clone();
                for (k, v) in &other.coords {
                    add_coeff(&mut out.coords, k.clone(), v.clone());
                }
                out
            }

            pub fn sub(&self, other: &$t) -> $t {
                self.add(&other.neg())
            }

            pub fn neg(&self) -> $t {
                $t {
                    n: self.n,
                    coords: self.coords.iter().map(|(k, v)| (k.clone(), -v)).collect(),
                }
            }

            pub fn scale(&self, c: &GaussianRational) -> $t {
                if c.is_zero() {
                    return $t::zero(self.n);
                }
                $t {
                    n: self.n,
                    coords: self
                        .coords
                        .iter()
                        .map(|(k, v)| (k.clone(), c * v))
                        .collect(),
                }
            }
        }
    };
}

/// A complex 1-form, a linear combination of the `2n` basis coframe elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    n: usize,
    coords: BTreeMap<usize, GaussianRational>,
}

linear_impls!(OneForm);

impl OneForm {
    pub fn basis(n: usize, p: usize) -> OneForm {
        assert!(p < 2 * n, "flat index out of range");
        let mut coords = BTreeMap::new();
        coords.insert(p, GaussianRational::one());
        OneForm { n, coords }
    }

    /// The coframe element `w^k`, 1-indexed.
    pub fn omega(n: usize, k: usize) -> OneForm {
        OneForm::basis(n, flat_omega(k))
    }

    /// The conjugate coframe element `c(w^k)`, 1-indexed.
    pub fn omega_bar(n: usize, k: usize) -> OneForm {
        OneForm::basis(n, flat_omega_bar(n, k))
    }

    pub fn coeff(&self, p: usize) -> GaussianRational {
        self.coords.get(&p).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &GaussianRational)> {
        self.coords.iter().map(|(k, v)| (*k, v))
    }

    pub fn conjugate(&self) -> OneForm {
        let n = self.n;
        OneForm {
            n,
            coords: self
                .coords
                .iter()
                .map(|(p, v)| (conj_flat(n, *p), v.conj()))
                .collect(),
        }
    }

    /// Split into the (1,0) and (0,1) parts.
    pub fn bidegree_split(&self) -> (OneForm, OneForm) {
        let mut hol = OneForm::zero(self.n);
        let mut anti = OneForm::zero(self.n);
        for (p, v) in &self.coords {
            if is_holomorphic(self.n, *p) {
                hol.coords.insert(*p, v.clone());
            } else {
                anti.coords.insert(*p, v.clone());
            }
        }
        (hol, anti)
    }

    pub fn wedge(&self, other: &OneForm) -> TwoForm {
        assert_eq!(self.n, other.n, "mixed coframe sizes");
        let mut out = TwoForm::zero(self.n);
        for (p, a) in &self.coords {
            for (q, b) in &other.coords {
                if p == q {
                    continue;
                }
                let c = a * b;
                if p < q {
                    add_coeff(&mut out.coords, (*p, *q), c);
                } else {
                    add_coeff(&mut out.coords, (*q, *p), -&c);
                }
            }
        }
        out
    }

    /// Pairing with a dual vector.
    pub fn apply(&self, v: &DualVector) -> GaussianRational {
        assert_eq!(self.n, v.n, "mixed coframe sizes");
        let mut out = GaussianRational::zero();
        for (p, a) in &self.coords {
            if let Some(b) = v.coords.get(p) {
                out += &(a * b);
            }
        }
        out
    }

    pub fn to_coord_vec(&self) -> Vec<GaussianRational> {
        let mut v = vec![GaussianRational::zero(); 2 * self.n];
        for (p, c) in &self.coords {
            v[*p] = c.clone();
        }
        v
    }

    pub fn from_coord_vec(n: usize, v: &[GaussianRational]) -> OneForm {
        assert_eq!(v.len(), 2 * n, "coordinate vector has wrong length");
        let mut out = OneForm::zero(n);
        for (p, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.coords.insert(p, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.coords {
            fmt_term(f, first, c)?;
            fmt_basis(f, self.n, *p)?;
            first = false;
        }
        Ok(())
    }
}

/// A complex 2-form over strictly increasing flat index pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForm {
    n: usize,
    coords: BTreeMap<(usize, usize), GaussianRational>,
}

linear_impls!(TwoForm);

impl TwoForm {
    /// The basis 2-form for flat indices `p < q`.
    pub fn basis(n: usize, p: usize, q: usize) -> TwoForm {
        assert!(p < q && q < 2 * n, "flat pair out of range");
        let mut coords = BTreeMap::new();
        coords.insert((p, q), GaussianRational::one());
        TwoForm { n, coords }
    }

    pub fn coeff(&self, p: usize, q: usize) -> GaussianRational {
        debug_assert!(p < q);
        self.coords
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &GaussianRational)> {
        self.coords.iter().map(|(k, v)| (*k, v))
    }

    pub fn conjugate(&self) -> TwoForm {
        let n = self.n;
        let mut out = TwoForm::zero(n);
        for ((p, q), v) in &self.coords {
            let (a, b) = (conj_flat(n, *p), conj_flat(n, *q));
            if a < b {
                add_coeff(&mut out.coords, (a, b), v.conj());
            } else {
                add_coeff(&mut out.coords, (b, a), -&v.conj());
            }
        }
        out
    }

    /// Split into the (2,0), (1,1) and (0,2) parts.
    pub fn bidegree_split(&self) -> (TwoForm, TwoForm, TwoForm) {
        let n = self.n;
        let mut parts = (TwoForm::zero(n), TwoForm::zero(n), TwoForm::zero(n));
        for ((p, q), v) in &self.coords {
            let holes = is_holomorphic(n, *p) as usize + is_holomorphic(n, *q) as usize;
            let target = match holes {
                2 => &mut parts.0,
                1 => &mut parts.1,
                _ => &mut parts.2,
            };
            target.coords.insert((*p, *q), v.clone());
        }
        parts
    }

    pub fn wedge(&self, other: &OneForm) -> ThreeForm {
        assert_eq!(self.n, other.n, "mixed coframe sizes");
        let mut out = ThreeForm::zero(self.n);
        for ((p, q), a) in &self.coords {
            for (r, b) in &other.coords {
                let c = a * b;
                out.add_wedge_term(*p, *q, *r, c);
            }
        }
        out
    }

    /// Contraction with a dual vector in the first slot.
    pub fn contract(&self, v: &DualVector) -> OneForm {
        assert_eq!(self.n, v.n, "mixed coframe sizes");
        let mut out = OneForm::zero(self.n);
        for ((p, q), a) in &self.coords {
            if let Some(b) = v.coords.get(p) {
                add_coeff(&mut out.coords, *q, a * b);
            }
            if let Some(b) = v.coords.get(q) {
                add_coeff(&mut out.coords, *p, -&(a * b));
            }
        }
        out
    }

    /// Evaluation on a pair of dual vectors.
    pub fn apply(&self, u: &DualVector, v: &DualVector) -> GaussianRational {
        self.contract(u).apply(v)
    }

    pub fn to_coord_vec(&self) -> Vec<GaussianRational> {
        let n = self.n;
        let mut out = vec![GaussianRational::zero(); Ambient::TwoForms(n).dim()];
        for ((p, q), c) in &self.coords {
            out[pair_index(n, *p, *q)] = c.clone();
        }
        out
    }

    pub fn from_coord_vec(n: usize, v: &[GaussianRational]) -> TwoForm {
        assert_eq!(
            v.len(),
            Ambient::TwoForms(n).dim(),
            "coordinate vector has wrong length"
        );
        let mut out = TwoForm::zero(n);
        let mut idx = 0;
        for p in 0..2 * n {
            for q in (p + 1)..2 * n {
                if !v[idx].is_zero() {
                    out.coords.insert((p, q), v[idx].clone());
                }
                idx += 1;
            }
        }
        out
    }
}

impl fmt::Display for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((p, q), c) in &self.coords {
            fmt_term(f, first, c)?;
            fmt_basis(f, self.n, *p)?;
            write!(f, "^")?;
            fmt_basis(f, self.n, *q)?;
            first = false;
        }
        Ok(())
    }
}

/// A complex 3-form over strictly increasing flat index triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeForm {
    n: usize,
    coords: BTreeMap<(usize, usize, usize), GaussianRational>,
}

linear_impls!(ThreeForm);

impl ThreeForm {
    fn add_wedge_term(&mut self, p: usize, q: usize, r: usize, c: GaussianRational) {
        if p == r || q == r {
            return;
        }
        // (p, q) already strictly increasing; sort r in with the right sign.
        let (key, sign_flip) = if r < p {
            ((r, p, q), false)
        } else if r < q {
            ((p, r, q), true)
        } else {
            ((p, q, r), false)
        };
        add_coeff(&mut self.coords, key, if sign_flip { -&c } else { c });
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), &GaussianRational)> {
        self.coords.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, p: usize, q: usize, r: usize) -> GaussianRational {
        debug_assert!(p < q && q < r);
        self.coords
            .get(&(p, q, r))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Contraction with a dual vector in the first slot.
    pub fn contract(&self, v: &DualVector) -> TwoForm {
        assert_eq!(self.n, v.n, "mixed coframe sizes");
        let mut out = TwoForm::zero(self.n);
        for ((p, q, r), a) in &self.coords {
            if let Some(b) = v.coords.get(p) {
                add_coeff(&mut out.coords, (*q, *r), a * b);
            }
            if let Some(b) = v.coords.get(q) {
                add_coeff(&mut out.coords, (*p, *r), -&(a * b));
            }
            if let Some(b) = v.coords.get(r) {
                add_coeff(&mut out.coords, (*p, *q), a * b);
            }
        }
        out
    }
}

impl fmt::Display for ThreeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((p, q, r), c) in &self.coords {
            fmt_term(f, first, c)?;
            fmt_basis(f, self.n, *p)?;
            write!(f, "^")?;
            fmt_basis(f, self.n, *q)?;
            write!(f, "^")?;
            fmt_basis(f, self.n, *r)?;
            first = false;
        }
        Ok(())
    }
}

/// An element of the complexified algebra in the basis dual to the coframe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualVector {
    n: usize,
    coords: BTreeMap<usize, GaussianRational>,
}

linear_impls!(DualVector);

impl DualVector {
    /// The (1,0) vector dual to `w^k` for `p = k - 1 < n`, or the (0,1)
    /// vector dual to `c(w^k)` for `p = n + k - 1`.
    pub fn basis(n: usize, p: usize) -> DualVector {
        assert!(p < 2 * n, "flat index out of range");
        let mut coords = BTreeMap::new();
        coords.insert(p, GaussianRational::one());
        DualVector { n, coords }
    }

    pub fn coeff(&self, p: usize) -> GaussianRational {
        self.coords.get(&p).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &GaussianRational)> {
        self.coords.iter().map(|(k, v)| (*k, v))
    }

    pub fn conjugate(&self) -> DualVector {
        let n = self.n;
        DualVector {
            n,
            coords: self
                .coords
                .iter()
                .map(|(p, v)| (conj_flat(n, *p), v.conj()))
                .collect(),
        }
    }

    /// Image under the complex structure operator: `i` on the (1,0) half,
    /// `-i` on the (0,1) half.
    pub fn j_apply(&self) -> DualVector {
        let n = self.n;
        let i = GaussianRational::i();
        DualVector {
            n,
            coords: self
                .coords
                .iter()
                .map(|(p, v)| {
                    let c = if *p < n { &i * v } else { -&(&i * v) };
                    (*p, c)
                })
                .collect(),
        }
    }

    pub fn to_coord_vec(&self) -> Vec<GaussianRational> {
        let mut v = vec![GaussianRational::zero(); 2 * self.n];
        for (p, c) in &self.coords {
            v[*p] = c.clone();
        }
        v
    }

    pub fn from_coord_vec(n: usize, v: &[GaussianRational]) -> DualVector {
        assert_eq!(v.len(), 2 * n, "coordinate vector has wrong length");
        let mut out = DualVector::zero(n);
        for (p, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.coords.insert(p, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.coords {
            fmt_term(f, first, c)?;
            if *p < self.n {
                write!(f, "X{}", p + 1)?;
            } else {
                write!(f, "c(X{})", p - self.n + 1)?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Span of all pairwise wedges of the two 1-form subspaces, as a subspace of
/// 2-forms.
pub fn wedge_span(u: &Subspace, v: &Subspace) -> Subspace {
    let n = match (u.ambient(), v.ambient()) {
        (Ambient::OneForms(a), Ambient::OneForms(b)) if a == b => a,
        (ua, va) => panic!("wedge_span needs matching 1-form ambients, got {ua:?} and {va:?}"),
    };
    let u_forms: Vec<OneForm> = u
        .basis_rows()
        .map(|r| OneForm::from_coord_vec(n, r))
        .collect();
    let v_forms: Vec<OneForm> = v
        .basis_rows()
        .map(|r| OneForm::from_coord_vec(n, r))
        .collect();
    let mut rows = Vec::new();
    for a in &u_forms {
        for b in &v_forms {
            let w = a.wedge(b);
            if !w.is_zero() {
                rows.push(w.to_coord_vec());
            }
        }
    }
    Subspace::span(Ambient::TwoForms(n), rows)
}

/// True iff `f` lies in `U ∧ U`.
///
/// Decided twice: once by expanding the pairwise wedges of a basis of `U`,
/// once by the contraction criterion `ι_θ f ∈ U` over all basis dual
/// vectors.  The two routes must agree; a mismatch is a bug in one of them.
pub fn in_wedge_square(f: &TwoForm, u: &Subspace) -> bool {
    let n = f.n();
    assert_eq!(
        u.ambient(),
        Ambient::OneForms(n),
        "membership is tested against a 1-form subspace of the same n"
    );
    let by_expansion = wedge_span(u, u).contains_vec(&f.to_coord_vec());
    let by_contraction = (0..2 * n).all(|p| {
        let cut = f.contract(&DualVector::basis(n, p));
        u.contains_vec(&cut.to_coord_vec())
    });
    assert_eq!(
        by_expansion, by_contraction,
        "wedge-square membership routes disagree"
    );
    by_expansion
}
