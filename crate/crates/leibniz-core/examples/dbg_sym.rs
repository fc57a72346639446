use leibniz_core::catalog::{self, instantiate, parse_params};
use leibniz_core::classify::classify_nilpotent_small;
use leibniz_core::iso::search_family_symbolic;
use leibniz_core::linalg::{Matrix, Subspace};
use leibniz_core::scalar::Scalar;
use leibniz_core::structure;
use leibniz_core::Budget;
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
    let a = instantiate("L15", &parse_params("lambda=2").unwrap()).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let p = random_invertible(&mut rng, 4); // trial 0
    let moved = a.change_basis(&p).unwrap();
    let nr = structure::nilradical(&moved).unwrap();
    let restr = moved.restrict_to(&nr).unwrap();
    let (fam, _, cert) = classify_nilpotent_small(&restr).unwrap();
    println!("nr family {}", fam);
    let mut rows: Vec<Vec<Scalar>> = (0..3)
        .map(|r| {
            let mut v = vec![Scalar::zero(); 4];
            for (c, base) in cert.row(r).iter().zip(nr.basis()) {
                for (t, x) in v.iter_mut().zip(base) {
                    *t += &(c * x);
                }
            }
            v
        })
        .collect();
    rows.extend(nr.complement_basis());
    let u = Matrix::from_rows(rows);
    let a_norm = moved.change_basis(&u).unwrap();
    println!("a_norm = {:?}", a_norm);
    let spec = catalog::family("L15").unwrap();
    let t = std::time::Instant::now();
    let r = search_family_symbolic(&a_norm, spec, Budget::default());
    println!("symbolic: {:?} in {:?}", r.map(|(p, _)| p), t.elapsed());
    // concrete search against the right target
    let target = instantiate("L15", &parse_params("lambda=2").unwrap()).unwrap();
    let t = std::time::Instant::now();
    let out = leibniz_core::iso::search_isomorphism(&a_norm, &target, Budget::with_nodes(3000));
    println!("concrete: {:?} in {:?}", matches!(out, leibniz_core::iso::SearchOutcome::Found(_)), t.elapsed());
    let known = u.mul(&p).inverse().unwrap();
    println!("known cert valid: {}", leibniz_core::iso::verify_isomorphism(&a_norm, &target, &known).unwrap());
    leibniz_core::iso::debug_system_residual(&a_norm, &target, &known);
}
// appended second stage via env var
