use leibniz_core::census::{census, default_grid, Verdict};
use leibniz_core::Budget;
use std::time::Instant;

fn main() {
    let t = Instant::now();
    let budget = Budget::with_nodes(
        std::env::var("NODES").ok().and_then(|s| s.parse().ok()).unwrap_or(4000),
    );
    let grid = default_grid();
    let report = census(&grid, budget, 0);
    println!("summary: {:?}", report.summary);
    println!("elapsed: {:?}", t.elapsed());
    let mut iso_within = std::collections::BTreeMap::new();
    for r in &report.records {
        match &r.verdict {
            Verdict::Isomorphic { .. } => {
                let fa = r.pair[0].split('[').next().unwrap().to_string();
                let fb = r.pair[1].split('[').next().unwrap().to_string();
                if fa == fb {
                    *iso_within.entry(fa).or_insert(0usize) += 1;
                } else {
                    println!("ISO CROSS: {} ~ {}", r.pair[0], r.pair[1]);
                }
            }
            Verdict::Undecided => {
                println!("UNDECIDED: {} vs {}", r.pair[0], r.pair[1]);
            }
            _ => {}
        }
    }
    println!("within-family isomorphic counts: {:?}", iso_within);
}
