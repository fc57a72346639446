use leibniz_core::catalog::{self, canonical_params, instantiate};
use leibniz_core::classify::{classify, Verdict};
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
    let t0 = Instant::now();
    let mut failures = 0;
    let mut total = 0;
    for spec in catalog::list_families() {
        let params = spec.sample.clone();
        let table = match instantiate(&spec.id, &params) {
            Ok(t) => t,
            Err(e) => { println!("instantiate {} failed: {}", spec.id, e); continue }
        };
        let expected_family: &str = match spec.id.as_str() {
            "lambda4" => "lambda4p_beta",
            "lambda1" => "lambda1",
            _ => &spec.id,
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..5 {
            total += 1;
            let p = random_invertible(&mut rng, table.dim());
            let moved = table.change_basis(&p).unwrap();
            let t = Instant::now();
            let r = classify(&moved, Budget::default()).unwrap();
            let elapsed = t.elapsed();
            let ok = match (&r.verdict, spec.id.as_str()) {
                (Verdict::NonSolvable { family, .. }, "sl2c") => family == "sl2c",
                (Verdict::Matched { family, canonical_params: cp, .. }, _) => {
                    family == expected_family
                        && (spec.id == "lambda4"
                            || cp == &canonical_params(&spec.id, &params))
                }
                _ => false,
            };
            if !ok || elapsed.as_millis() > 1500 {
                failures += 1;
                println!("{} trial {}: ok={} in {:?} verdict={:?}", spec.id, trial, ok, elapsed, r.matched_family());
            }
        }
    }
    println!("total {} classifications, {} problems, {:?}", total, failures, t0.elapsed());
}
