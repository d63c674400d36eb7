//! Instance files, batch checks and the identity suite: save an instance,
//! reload it in either arithmetic, and run the parallel suites.

use geoinv::io::{AnyInstance, InstanceFile};
use geoinv::mappings::Flags;
use geoinv::report::check_instance;
use geoinv::residual::Tolerance;
use geoinv::suite::{check_cases, identity_suite, Case};
use geoinv::Rational;

fn main() -> geoinv::Result<()> {
    let inst = Case::general(3, 9, Flags::new(true, true, false)).generate::<Rational>()?;
    let file = InstanceFile::from_instance(&inst);
    let path = std::env::temp_dir().join("geoinv_example_instance.json");
    file.save(&path)?;
    println!(
        "wrote {} ({} bytes)",
        path.display(),
        file.to_json_string().len()
    );

    let loaded = InstanceFile::load(&path)?;
    let AnyInstance::Rational(back) = loaded.to_any()? else {
        unreachable!("the file declares rational mode")
    };
    let a = check_instance(&inst, Tolerance::default())?;
    let b = check_instance(&back, Tolerance::default())?;
    println!("reloaded report identical: {}", a == b);

    // a file declares its arithmetic; asking for the other one is an error
    if let Err(e) = loaded.to_instance::<f64>() {
        println!("float view of a rational file: {e}");
    }
    let float = Case::general(3, 9, Flags::new(true, true, false)).generate::<f64>()?;
    let fr = check_instance(&float, Tolerance::default())?;
    println!("float instance: {} failing rows", fr.failures().count());

    let cases: Vec<Case> = (0..4)
        .flat_map(|s| [Case::general(3, s, Flags::default()), Case::agm3(3, s, 1)])
        .collect();
    for (case, report) in check_cases::<Rational>(&cases, Tolerance::default(), false)? {
        let failing: Vec<_> = report.failures().map(|r| r.name.clone()).collect();
        println!(
            "{:<8} seed {} failing {failing:?}",
            case.kind.as_str(),
            case.seed
        );
    }

    let ids = identity_suite::<Rational>(&[3, 4], 1, 3, Tolerance::default())?;
    print!("{}", ids.render_table());
    let _ = std::fs::remove_file(&path);
    Ok(())
}
