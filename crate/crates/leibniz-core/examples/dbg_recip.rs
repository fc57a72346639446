use leibniz_core::catalog::{instantiate, parse_params};
use leibniz_core::iso::{search_isomorphism, verify_isomorphism, SearchOutcome};
use leibniz_core::linalg::Matrix;
use leibniz_core::scalar::Scalar;
use leibniz_core::Budget;
use std::time::Instant;

fn main() {
    let a = instantiate("L1", &parse_params("gamma=1/2").unwrap()).unwrap();
    let b = instantiate("L1", &parse_params("gamma=2").unwrap()).unwrap();
    // expected certificate: e1'=e2, e2'=e1, e3'=-e3, x'=x/gamma with gamma=2 (b->a direction?)
    let half = Scalar::from_frac(1, 2);
    let p = Matrix::from_rows(vec![
        vec![Scalar::zero(), Scalar::one(), Scalar::zero(), Scalar::zero()],
        vec![Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero()],
        vec![Scalar::zero(), Scalar::zero(), -Scalar::one(), Scalar::zero()],
        vec![Scalar::zero(), Scalar::zero(), Scalar::zero(), half],
    ]);
    println!("swap cert a->b: {:?}", verify_isomorphism(&a, &b, &p));
    println!("swap cert b->a: {:?}", verify_isomorphism(&b, &a, &p));
    let t = Instant::now();
    match search_isomorphism(&a, &b, Budget::default()) {
        SearchOutcome::Found(c) => println!("FOUND in {:?}: {:?}", t.elapsed(), c.p),
        o => println!("{:?} in {:?}", o, t.elapsed()),
    }
}
