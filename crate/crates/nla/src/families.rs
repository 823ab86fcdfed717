//! Generators for the two model families, the CFGU fixture, and a seeded
//! coframe-change fuzzer.
//!
//! The families come in two flavours that differ only in which parity gets
//! the `i (w^{k-1} ^ c(w1) - w1 ^ c(w^{k-1}))` equation and which gets
//! `w1 ^ (w^{k-1} + c(w^{k-1}))`. Both are maximally nilpotent in every
//! dimension, 3-step from n = 4 on, and in odd dimensions the two flavours
//! have different numbers of closed forms, so they are never isomorphic.
//!
//! The fuzzer never invents structure constants: it replays a known algebra
//! through random invertible coframe changes, which preserves validity by
//! construction and every basis-independent invariant by definition. That
//! makes it a cheap oracle battery for the normalization code.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{validate, CoframeAlgebra, Provenance};
use crate::dsl::ParsedPresentation;
use crate::exact::{GaussianRational, Matrix};
use crate::forms::{OneForm, TwoForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    I,
    II,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::I => "I",
            Family::II => "II",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Family::I),
            "II" | "2" => Ok(Family::II),
            other => Err(format!("unknown family {other:?}, expected I or II")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilyTag {
    pub family: Family,
    pub n: usize,
}

impl FamilyTag {
    pub fn new(family: Family, n: usize) -> FamilyTag {
        FamilyTag { family, n }
    }
}

fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(re.into(), im.into())
}

fn family_table(tag: FamilyTag) -> Vec<TwoForm> {
    let n = tag.n;
    let w = |k| OneForm::omega(n, k);
    let wb = |k| OneForm::omega_bar(n, k);
    let mut table = vec![TwoForm::zero(n)];
    if n >= 2 {
        table.push(w(1).wedge(&wb(1)));
    }
    for k in 3..=n {
        let odd = k % 2 == 1;
        let hermitian = match tag.family {
            Family::I => odd,
            Family::II => !odd,
        };
        let d = if hermitian {
            w(k - 1)
                .wedge(&wb(1))
                .sub(&w(1).wedge(&wb(k - 1)))
                .scale(&g(0, 1))
        } else {
            w(1).wedge(&w(k - 1)).add(&w(1).wedge(&wb(k - 1)))
        };
        table.push(d);
    }
    table
}

/// The model algebra for a family tag. For n = 1, 2 the defining equations
/// truncate to the abelian line and the Heisenberg-type core; from n = 3 on
/// each new generator feeds on the previous one, alternating between the
/// two equation shapes.
pub fn gen_family(tag: FamilyTag) -> CoframeAlgebra {
    assert!(tag.n >= 1, "families need at least one generator");
    let name = format!("type-{}-{}", tag.family, tag.n);
    let table = family_table(tag);
    validate(&ParsedPresentation::from_differentials(
        Some(name.clone()),
        table.clone(),
    ))
    .expect("family equations close");
    CoframeAlgebra::from_table(Some(name), Provenance::Generated, table)
}

/// The five-dimensional fixture with a nilpotent but not maximally
/// nilpotent complex structure: every ascending term grows by one except
/// the first, and the classification lands at step 4 out of 5.
pub fn fixture_cfgu_example4() -> CoframeAlgebra {
    let n = 5;
    let w = |k| OneForm::omega(n, k);
    let wb = |k| OneForm::omega_bar(n, k);
    let corr = w(2)
        .scale(&g(-1, 0))
        .add(&w(3).scale(&g(-1, 0)))
        .add(&w(4).scale(&g(2, 0)))
        .add(&wb(2))
        .add(&wb(3))
        .scale(&GaussianRational::from_ratio(1, 2));
    let table = vec![
        TwoForm::zero(n),
        w(1).wedge(&wb(1)),
        w(1).wedge(&wb(1)).scale(&g(-1, 0)),
        w(1).wedge(&w(2)).add(&w(1).wedge(&wb(2))),
        w(1).wedge(&corr),
    ];
    validate(&ParsedPresentation::from_differentials(
        Some("cfgu".into()),
        table.clone(),
    ))
    .expect("fixture equations close");
    CoframeAlgebra::from_table(Some("cfgu".into()), Provenance::Generated, table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// Lower triangular with invertible diagonal; always invertible.
    Triangular,
    /// Dense matrices over the pool, rejection-sampled for invertibility.
    FullGl,
}

/// A reproducible recipe for a stream of coframe changes.
#[derive(Debug, Clone)]
pub struct FuzzPlan {
    pub seed: u64,
    pub iterations: usize,
    pub transform_kind: TransformKind,
    pub coefficient_pool: Vec<GaussianRational>,
}

impl FuzzPlan {
    pub fn new(seed: u64, iterations: usize, transform_kind: TransformKind) -> FuzzPlan {
        FuzzPlan {
            seed,
            iterations,
            transform_kind,
            coefficient_pool: default_pool(),
        }
    }

    /// A plan whose matrices are all the identity: the pool offers nothing
    /// but zero, so off-diagonal entries vanish and diagonals fall back
    /// to one.
    pub fn identity(iterations: usize) -> FuzzPlan {
        FuzzPlan {
            seed: 0,
            iterations,
            transform_kind: TransformKind::Triangular,
            coefficient_pool: vec![GaussianRational::zero()],
        }
    }
}

/// Entries stay small under row reduction: zero, units, 2, 1 +- i and a
/// half keep numerators and denominators from compounding.
pub fn default_pool() -> Vec<GaussianRational> {
    vec![
        GaussianRational::zero(),
        g(1, 0),
        g(-1, 0),
        g(2, 0),
        g(-2, 0),
        g(0, 1),
        g(0, -1),
        g(1, 1),
        g(1, -1),
        g(-1, 1),
        g(-1, -1),
        GaussianRational::from_ratio(1, 2),
        GaussianRational::from_ratio(-1, 2),
    ]
}

fn sample(rng: &mut ChaCha8Rng, pool: &[GaussianRational]) -> GaussianRational {
    pool[rng.gen_range(0..pool.len())].clone()
}

fn random_invertible(
    rng: &mut ChaCha8Rng,
    n: usize,
    kind: TransformKind,
    pool: &[GaussianRational],
) -> Matrix {
    let units: Vec<GaussianRational> = pool.iter().filter(|c| !c.is_zero()).cloned().collect();
    let unit = |rng: &mut ChaCha8Rng| {
        if units.is_empty() {
            GaussianRational::one()
        } else {
            units[rng.gen_range(0..units.len())].clone()
        }
    };
    let triangular = |rng: &mut ChaCha8Rng| {
        let mut m = Matrix::identity(n);
        for r in 0..n {
            m.set(r, r, unit(rng));
            for c in 0..r {
                m.set(r, c, sample(rng, pool));
            }
        }
        m
    };
    match kind {
        TransformKind::Triangular => triangular(rng),
        TransformKind::FullGl => {
            for _ in 0..64 {
                let rows = (0..n)
                    .map(|_| (0..n).map(|_| sample(rng, pool)).collect())
                    .collect();
                let m = Matrix::from_rows(rows).expect("square sample");
                if m.rank() == n {
                    return m;
                }
            }
            triangular(rng)
        }
    }
}

/// A lazy stream of transformed copies of one algebra.
pub struct FuzzStream {
    base: CoframeAlgebra,
    rng: ChaCha8Rng,
    kind: TransformKind,
    pool: Vec<GaussianRational>,
    seed: u64,
    produced: usize,
    iterations: usize,
}

impl Iterator for FuzzStream {
    type Item = CoframeAlgebra;

    fn next(&mut self) -> Option<CoframeAlgebra> {
        if self.produced >= self.iterations {
            return None;
        }
        let m = random_invertible(&mut self.rng, self.base.n(), self.kind, &self.pool);
        let mut out = self
            .base
            .change_coframe(&m)
            .expect("sampled matrices are invertible");
        let stem = self.base.name().unwrap_or("algebra").to_string();
        out.set_name(Some(format!(
            "{stem}/fuzz-{}-{}",
            self.seed, self.produced
        )));
        self.produced += 1;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.iterations - self.produced;
        (left, Some(left))
    }
}

/// Replay `alg` through the plan's random coframe changes. Every output is
/// a valid presentation of the same underlying pair, so all
/// basis-independent invariants agree with the input's; the seed and the
/// iteration index are recorded in each output's name.
pub fn fuzz_transform(alg: &CoframeAlgebra, plan: &FuzzPlan) -> FuzzStream {
    FuzzStream {
        base: alg.clone(),
        rng: ChaCha8Rng::seed_from_u64(plan.seed),
        kind: plan.transform_kind,
        pool: plan.coefficient_pool.clone(),
        seed: plan.seed,
        produced: 0,
        iterations: plan.iterations,
    }
}
