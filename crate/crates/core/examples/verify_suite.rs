//! The exact identity suite at reduced size.

use cornergrowth::verify::run_exact_suite;

fn main() -> cornergrowth::Result<()> {
    let realizations = std::env::args().nth(1).map_or(50, |a| a.parse().expect("realizations"));
    for c in run_exact_suite(&[50, 200], realizations, 0, 0)? {
        println!("{:<34} N={:<4} cases {:>7}  violations {}", c.name, c.n, c.cases, c.violations);
    }
    Ok(())
}
