use std::time::Instant;

use nla::exact::Subspace;
use nla::families::{fuzz_transform, gen_family, Family, FamilyTag, FuzzPlan, TransformKind};
use nla::series::{ascending_central, v_two};

fn span_stats(label: &str, s: &Subspace) {
    let mut max_len = 0;
    let mut total = 0usize;
    let mut nonzero = 0usize;
    for row in s.basis_rows() {
        for v in row {
            total += 1;
            if !v.is_zero() {
                nonzero += 1;
                let txt = format!("{v}");
                max_len = max_len.max(txt.len());
            }
        }
    }
    println!("{label}: dim {} fill {}/{} max_entry_chars {}", s.dim(), nonzero, total, max_len);
}

fn main() {
    let base = gen_family(FamilyTag::new(Family::I, 9));
    let alg = fuzz_transform(&base, &FuzzPlan::new(901, 1, TransformKind::FullGl))
        .next()
        .unwrap();

    let t = Instant::now();
    let (v1, v2) = v_two(&alg);
    println!("v_two took {:?}", t.elapsed());
    span_stats("v1", &v1);
    span_stats("v2", &v2);

    let t = Instant::now();
    let asc = ascending_central(&alg);
    println!("ascending took {:?}", t.elapsed());
    for k in 1..=3 {
        span_stats(&format!("asc{k}"), asc.term(k));
    }

    let table = alg.brackets();
    let mut max_len = 0;
    for a in 0..18 {
        for b in 0..18 {
            for v in table.basis_bracket(a, b).to_coord_vec() {
                if !v.is_zero() {
                    max_len = max_len.max(format!("{v}").len());
                }
            }
        }
    }
    println!("bracket table max_entry_chars {max_len}");
}
