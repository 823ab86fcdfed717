use std::time::Instant;
use nla::exact::{GaussianRational, Matrix};
use nla::families::{gen_family, Family, FamilyTag};
use nla::series::*;

fn main() {
    let n = 9;
    let alg = gen_family(FamilyTag::new(Family::I, n));
    let mut rows = vec![vec![GaussianRational::zero(); n]; n];
    for (r, row) in rows.iter_mut().enumerate() {
        row[r] = GaussianRational::from_int(1);
        for c in 0..r {
            row[c] = GaussianRational::new((((r + c) % 3) as i64 - 1).into(), ((c % 2) as i64).into());
        }
    }
    let alg = alg.change_coframe(&Matrix::from_rows(rows).unwrap()).unwrap();
    let t = Instant::now(); let _ = descending_central(&alg); println!("descending {:?}", t.elapsed());
    let t = Instant::now(); let _ = ascending_central(&alg); println!("ascending  {:?}", t.elapsed());
    let t = Instant::now(); let _ = v_series(&alg); println!("v_series   {:?}", t.elapsed());
    let t = Instant::now(); let _ = w_series(&alg); println!("w_series   {:?}", t.elapsed());
    let t = Instant::now(); let _ = a_series(&alg); println!("a_series   {:?}", t.elapsed());
    let t = Instant::now(); let _ = h_series(&alg); println!("h_series   {:?}", t.elapsed());
    let t = Instant::now(); let _ = classify(&alg); println!("classify   {:?}", t.elapsed());
}
