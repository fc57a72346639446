use leibniz_core::catalog::{self, instantiate, parse_params};
use leibniz_core::classify::classify;
use leibniz_core::iso::search_family_symbolic;
use leibniz_core::linalg::Matrix;
use leibniz_core::scalar::Scalar;
use leibniz_core::Budget;
use rand_core::{RngCore, SeedableRng};
use std::time::Instant;

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
    for (fam, pstr, trials) in [("L15", "lambda=2", 5), ("L16", "", 5), ("sl2c", "", 5)] {
        let a = instantiate(fam, &parse_params(pstr).unwrap()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..trials {
            let p = random_invertible(&mut rng, 4);
            let moved = a.change_basis(&p).unwrap();
            let t = Instant::now();
            let r = classify(&moved, Budget::default()).unwrap();
            println!("{} trial {}: {:?} in {:?}", fam, trial, r.matched_family(), t.elapsed());
        }
    }
    // direct symbolic search on normalized L15
    let spec = catalog::family("L15").unwrap();
    let a = instantiate("L15", &parse_params("lambda=2").unwrap()).unwrap();
    let t = Instant::now();
    let direct = search_family_symbolic(&a, spec, Budget::default());
    println!("symbolic on standard L15: {:?} in {:?}", direct.as_ref().map(|(p, _)| p.clone()), t.elapsed());
}
