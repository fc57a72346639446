use leibniz_core::catalog;
use std::time::Instant;

fn main() {
    let t = Instant::now();
    let mut total = 0;
    let mut failures = 0;
    for spec in catalog::list_families() {
        for params in spec.grid() {
            total += 1;
            match catalog::verify_entry(&spec.id, &params) {
                Ok(report) => {
                    if !report.passed {
                        failures += 1;
                        let bad: Vec<String> = report
                            .checks
                            .iter()
                            .filter(|c| !c.passed)
                            .map(|c| format!("{}: {}", c.name, c.detail))
                            .collect();
                        println!("FAIL {} {:?}: {}", spec.id, report.params, bad.join("; "));
                    }
                }
                Err(e) => {
                    failures += 1;
                    println!("ERROR {} {:?}: {}", spec.id, params, e);
                }
            }
        }
    }
    println!("total {} entries, {} failures, {:?}", total, failures, t.elapsed());
}
