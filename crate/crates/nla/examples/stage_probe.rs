use std::time::Instant;

use nla::families::{fuzz_transform, gen_family, Family, FamilyTag, FuzzPlan, TransformKind};
use nla::series::{
    a_series, ascending_central, classify, descending_central, h_series, v_series, v_two, w_series,
};

fn main() {
    let base = gen_family(FamilyTag::new(Family::I, 9));
    let alg = fuzz_transform(&base, &FuzzPlan::new(901, 1, TransformKind::FullGl))
        .next()
        .unwrap();

    let t = Instant::now();
    let table = alg.brackets();
    println!("brackets        {:?}", t.elapsed());
    drop(table);

    let t = Instant::now();
    let _ = descending_central(&alg).unwrap();
    println!("descending      {:?}", t.elapsed());

    let t = Instant::now();
    let _ = ascending_central(&alg);
    println!("ascending       {:?}", t.elapsed());

    let t = Instant::now();
    let _ = v_series(&alg);
    println!("v_series        {:?}", t.elapsed());

    let t = Instant::now();
    let _ = v_two(&alg);
    println!("v_two           {:?}", t.elapsed());

    let t = Instant::now();
    let _ = w_series(&alg);
    println!("w_series        {:?}", t.elapsed());

    let t = Instant::now();
    let _ = a_series(&alg);
    println!("a_series        {:?}", t.elapsed());

    let t = Instant::now();
    let _ = h_series(&alg);
    println!("h_series        {:?}", t.elapsed());

    let t = Instant::now();
    let _ = classify(&alg);
    println!("classify        {:?}", t.elapsed());
}
