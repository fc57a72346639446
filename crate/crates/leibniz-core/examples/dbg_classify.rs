use leibniz_core::catalog::{instantiate, parse_params};
use leibniz_core::iso::{search_isomorphism, verify_isomorphism, SearchOutcome};
use leibniz_core::linalg::Matrix;
use leibniz_core::Budget;
use std::time::Instant;

fn main() {
    let a = instantiate("L20", &parse_params("mu2=2,mu3=3").unwrap()).unwrap();
    // trivial shear within N
    let p1 = Matrix::from_i64(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    let b1 = a.change_basis(&p1).unwrap();
    let t = Instant::now();
    println!("shear: {:?} in {:?}", tag(&search_isomorphism(&a, &b1, Budget::default())), t.elapsed());

    // permutation within N
    let p2 = Matrix::from_i64(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    let b2 = a.change_basis(&p2).unwrap();
    let t = Instant::now();
    println!("perm: {:?} in {:?}", tag(&search_isomorphism(&a, &b2, Budget::default())), t.elapsed());

    // x shift
    let p3 = Matrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[1, 0, 0, 1]]);
    let b3 = a.change_basis(&p3).unwrap();
    let t = Instant::now();
    println!("xshift: {:?} in {:?}", tag(&search_isomorphism(&a, &b3, Budget::default())), t.elapsed());

    // full mix, and verify p inverse works as certificate
    let p = Matrix::from_i64(&[&[1, 0, 1, 0], &[2, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 2, 1]]);
    let moved = a.change_basis(&p).unwrap();
    let pinv = p.inverse().unwrap();
    println!("pinv certificate valid: {}", verify_isomorphism(&moved, &a, &pinv).unwrap());
    let t = Instant::now();
    println!("full reverse: {:?} in {:?}", tag(&search_isomorphism(&moved, &a, Budget::default())), t.elapsed());
}

fn tag(o: &SearchOutcome) -> &'static str {
    match o { SearchOutcome::Found(_) => "FOUND", SearchOutcome::Incompatible(_) => "INCOMPAT", SearchOutcome::NotFound => "NOTFOUND" }
}
