//! Runs every acceptance criterion without the libtest harness, so each
//! prints its line; exits non-zero if any criterion fails.

use cone_systole_acceptance::criteria;

fn main() {
    let criteria = criteria();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "acceptance {:>2} {:<5} {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
