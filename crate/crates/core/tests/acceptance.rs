use weylcm::suite::{all_passed, run_suite, SuiteConfig};

fn main() {
    let results = run_suite(&SuiteConfig::default());
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status}  {} ({:.2}s): {}",
            r.id, r.name, r.seconds, r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if !all_passed(&results) {
        std::process::exit(1);
    }
}
