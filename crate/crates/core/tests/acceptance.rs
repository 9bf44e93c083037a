//! Runs the acceptance criteria and prints one line per criterion.

use lagindex::acceptance::run_all;

fn main() {
    let results = run_all();
    for r in &results {
        println!("{} ({:.2} s)", r.line(), r.seconds);
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", results.len(), results.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
