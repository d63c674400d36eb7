//! The (X, Y, Z) recursion: from one decomposition of a Weyl-type invariant
//! it builds W⁽¹⁾, W⁽²⁾, W⁽⁴⁾ and compares them across a mapping.

use geoinv::invariants::derived::{xyz_weyl_basic, xyz_weyl_first_over, xyz_weyl_fourth};
use geoinv::invariants::{derived_invariants, weyl_factored, FactoredObjects, XyzDecomposition};
use geoinv::mappings::{generate, Flags, GenOptions, MappingKind, SpaceFields};
use geoinv::{Rational, Tensor};

/// Builds a decomposition from the factored objects and the symmetric Ricci tensor.
type Pick = fn(&FactoredObjects<Rational>, &Tensor<Rational>) -> XyzDecomposition<Rational>;

fn derived(
    fields: &SpaceFields<Rational>,
    flags: Flags,
    pick: Pick,
) -> geoinv::Result<[Tensor<Rational>; 3]> {
    let space = &fields.connection;
    let obj = FactoredObjects::compute(fields, flags)?;
    let d = pick(&obj, &space.ricci_sym());
    let w = derived_invariants(&d, space.curvature(), &space.ricci_sym())?;
    Ok([w.w1, w.w2, w.w4])
}

fn main() -> geoinv::Result<()> {
    let flags = Flags::new(true, true, true);
    let inst = generate::<Rational>(GenOptions {
        dim: 4,
        seed: 3,
        flags,
        kind: MappingKind::General,
    })?;

    let picks: [(&str, Pick); 3] = [
        ("basic", |o, _| xyz_weyl_basic(o)),
        ("first_over", |o, _| xyz_weyl_first_over(o)),
        ("fourth", |o, r| xyz_weyl_fourth(o, r)),
    ];
    for (name, pick) in picks {
        let src = derived(&inst.source, flags, pick)?;
        let tgt = derived(&inst.target, flags, pick)?;
        let same: Vec<bool> = src.iter().zip(&tgt).map(|(a, b)| a == b).collect();
        println!("XYZ({name}): W1, W2, W4 invariant = {same:?}");
    }

    let obj = FactoredObjects::compute(&inst.source, flags)?;
    let space = &inst.source.connection;
    let w = derived(&inst.source, flags, |o, _| xyz_weyl_basic(o))?;
    println!(
        "W1 == factored Weyl form: {}",
        w[0] == weyl_factored(space, &obj)
    );
    println!("W2 == W1: {}", w[1] == w[0]);
    Ok(())
}
