//! Full verification suite, one line per criterion. Runs without the libtest
//! harness so the lines are always shown.

use std::process::ExitCode;

use bordered_gue::acceptance::{run_all, Mode};

fn main() -> ExitCode {
    let results = run_all(Mode::Full, 2024);
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", results.len(), results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
