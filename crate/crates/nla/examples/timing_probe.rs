use std::time::Instant;

use nla::families::{fuzz_transform, gen_family, Family, FamilyTag, FuzzPlan, TransformKind};
use nla::maxn::{admissible_normalize, dpt, strictly_admissible};
use nla::series::classify;

fn main() {
    for (family, n, kind, iters) in [
        (Family::I, 6, TransformKind::FullGl, 5usize),
        (Family::II, 7, TransformKind::FullGl, 5),
        (Family::I, 9, TransformKind::FullGl, 5),
        (Family::I, 12, TransformKind::Triangular, 3),
        (Family::II, 12, TransformKind::Triangular, 3),
        (Family::I, 9, TransformKind::Triangular, 3),
    ] {
        let base = gen_family(FamilyTag::new(family, n));
        let scrambles: Vec<_> =
            fuzz_transform(&base, &FuzzPlan::new(901, iters, kind)).collect();

        let t = Instant::now();
        for s in &scrambles {
            let _ = classify(s);
        }
        let classify_each = t.elapsed() / iters as u32;

        let t = Instant::now();
        for s in &scrambles {
            let _ = dpt(s).unwrap();
        }
        let dpt_each = t.elapsed() / iters as u32;

        let t = Instant::now();
        let mut strict_total = std::time::Duration::ZERO;
        for s in &scrambles {
            let adm = admissible_normalize(s).unwrap();
            let t2 = Instant::now();
            let _ = strictly_admissible(&adm).unwrap();
            strict_total += t2.elapsed();
        }
        let adm_each = (t.elapsed() - strict_total) / iters as u32;
        let strict_each = strict_total / iters as u32;

        println!(
            "({family},{n}) {kind:?}: classify {classify_each:?}  dpt {dpt_each:?}  adm {adm_each:?}  strict {strict_each:?}"
        );
    }
}
