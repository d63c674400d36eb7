//! Certifies a seeded general mapping: every catalogue invariant is computed
//! in the source and the image space and compared exactly.

use geoinv::mappings::{generate, Flags, GenOptions, MappingKind};
use geoinv::report::check_instance;
use geoinv::residual::Tolerance;
use geoinv::Rational;

fn main() -> geoinv::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    for flags in [
        Flags::new(false, false, false),
        Flags::new(true, true, true),
    ] {
        let inst = generate::<Rational>(GenOptions {
            dim: 4,
            seed,
            flags,
            kind: MappingKind::General,
        })?;
        let report = check_instance(&inst, Tolerance::default())?;
        print!("{}", report.render_table());
        let failing: Vec<_> = report.failures().map(|r| r.name.as_str()).collect();
        println!("failing rows: {failing:?}\n");
    }
    Ok(())
}
