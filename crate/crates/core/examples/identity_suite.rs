//! A full identity suite with scans, as text and JSON.

use kllab::coxeter::GeneratorSet;
use kllab::verify::{run_suite, SuiteConfig};

fn main() {
    let report = run_suite(&SuiteConfig::new("B2").subsets(GeneratorSet::all_subsets(2)));
    print!("{}", report.to_text());

    let capped = run_suite(
        &SuiteConfig::new("Aff-A1")
            .cap(Some(10))
            .subsets(vec![GeneratorSet::empty()]),
    );
    println!("{}", serde_json::to_string_pretty(&capped.checks[0]).unwrap());
    std::process::exit(if report.passed && capped.passed { 0 } else { 1 });
}
