//! Run every verification suite at n = 2 and print a summary.

use qgl::convolution::Convolution;
use qgl::verify::{run_suite, Suite, SuiteParams};

fn main() -> qgl::Result<()> {
    let k = Convolution::new(2)?;
    let params = SuiteParams::new(2, 2);
    for s in Suite::ALL {
        let r = run_suite(s, &k, &params)?;
        let status = if r.passed() { "ok" } else { "FAILED" };
        println!("{:<16} {:>5} instances  {status}", s.name(), r.instances);
    }
    Ok(())
}
