use leibniz_core::catalog::{instantiate, parse_params};
use leibniz_core::iso::debug_system_residual;
use leibniz_core::linalg::Matrix;
use leibniz_core::scalar::Scalar;
use rand_core::{RngCore, SeedableRng};

fn random_invertible(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| {
            let num = (rng.next_u32() % 9) as i64 - 4;
            let den = 1 + (rng.next_u32() % 2) as i64;
            Scalar::from_frac(num, den)
        });
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn main() {
    let a = instantiate("sl2c", &parse_params("").unwrap()).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let p = random_invertible(&mut rng, 4);
    let moved = a.change_basis(&p).unwrap();
    // known certificate moved -> a is p^{-1}... direction: cb(moved, P)=a with P = p.
    // cb(moved, p) = cb(cb(a,p), p)?? no: compute directly both:
    let pinv = p.inverse().unwrap();
    println!("pinv works: {}", leibniz_core::iso::verify_isomorphism(&moved, &a, &pinv).unwrap());
    println!("p works: {}", leibniz_core::iso::verify_isomorphism(&moved, &a, &p).unwrap());
    let known = if leibniz_core::iso::verify_isomorphism(&moved, &a, &pinv).unwrap() { pinv } else { p };
    debug_system_residual(&moved, &a, &known);
}
