use leibniz_core::catalog::{instantiate, parse_params};
use leibniz_core::iso::{search_isomorphism, SearchOutcome};
use leibniz_core::linalg::Matrix;
use leibniz_core::Budget;
use std::time::Instant;

fn main() {
    let a = instantiate("L9", &parse_params("gamma=3").unwrap()).unwrap();
    let p = Matrix::from_i64(&[
        &[1, 0, 2, 0],
        &[1, 1, 0, 0],
        &[0, 0, 1, 0],
        &[0, 2, 0, 1],
    ]);
    let b = a.change_basis(&p).unwrap();
    let t = Instant::now();
    let out = search_isomorphism(&a, &b, Budget::default());
    match out {
        SearchOutcome::Found(_) => println!("FOUND in {:?}", t.elapsed()),
        other => println!("{:?} in {:?}", other, t.elapsed()),
    }
}
