//! Index-notation expressions evaluated against the objects of one space.
//! Repeated indices are summed, `cd` is the covariant derivative with the
//! symmetric part of the connection, and `alt`/`sym` act on an index pair.

use geoinv::index_expr::{eval_str, parse, Env};
use geoinv::mappings::{generate, Flags, GenOptions, MappingKind};
use geoinv::Rational;

fn main() -> geoinv::Result<()> {
    let flags = Flags::new(true, false, true);
    let inst = generate::<Rational>(GenOptions {
        dim: 3,
        seed: 2,
        flags,
        kind: MappingKind::General,
    })?;
    let source = Env::for_space(&inst.source, flags, Some(&inst.xi), None)?;
    let target = Env::for_space(&inst.target, flags, Some(&inst.xi), None)?;

    let ricci = eval_str("R{a;ija}", &source)?;
    println!(
        "R^a_{{ija}} equals the bound Ricci tensor: {}",
        &ricci.tensor == inst.source.connection.ricci()
    );

    let expr = parse("alt(R{;ij}; i, j) / 2")?;
    println!("parsed and printed: {expr}");

    for src in [
        "alt(R{;ij}; i, j)",
        "alt(rho{;ij}; i, j)",
        "R{i;jmn} - R{i;jmn}",
        "d{i;i}",
    ] {
        let a = eval_str(src, &source)?;
        let b = eval_str(src, &target)?;
        println!(
            "{src:<22} free {:?}/{:?}, same in both spaces: {}",
            a.upper,
            a.lower,
            a.tensor == b.tensor
        );
    }

    match eval_str("R{i;jk} + d{i;j}", &source) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
