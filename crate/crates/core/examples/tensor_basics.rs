//! Dense tensors over exact rationals and floats: construction, index
//! operations, and the same computation in both arithmetics.

use geoinv::{Rational, Scalar, Slot, Symmetrization, Tensor, Valence};

fn main() -> geoinv::Result<()> {
    let n = 3;
    let delta = Tensor::<Rational>::delta(n);
    println!(
        "trace of the Kronecker delta in N={n}: {:?}",
        delta.contract(0, 0)?.as_scalar()
    );

    // a_{ij} = (i + 2j) / 4
    let a = Tensor::<Rational>::from_fn(n, Valence::new(0, 2), |ix| {
        Rational::ratio((ix[0] + 2 * ix[1]) as i64, 4)
    });
    let skew = a.alternate(Slot::Lower(0), Slot::Lower(1))?;
    let sym = a.sym_pair(Slot::Lower(0), Slot::Lower(1), Symmetrization::Half)?;
    println!(
        "a_[01] = {:?}, a_(01) = {:?}",
        skew.get(&[0, 1]),
        sym.get(&[0, 1])
    );

    // the exact split a = a_(ij) + a_[ij]/2 holds entry by entry
    let rebuilt = sym.add(&skew.scale(&Rational::ratio(1, 2)));
    println!("a == a_(ij) + a_[ij]/2: {}", rebuilt == a);

    // v^i a_{ij} through an outer product and a contraction
    let v =
        Tensor::<Rational>::from_fn(n, Valence::new(1, 0), |ix| Rational::from_usize(ix[0] + 1));
    let va = v.outer(&a)?.contract(0, 0)?;
    println!("v^α a_{{αj}} = {}", va.to_nested_json());

    // the float image of the same data agrees to rounding
    let af = a.map(|x| x.to_f64());
    println!(
        "max |a - float(a)| = {:.1e}",
        af.max_abs_diff(&a.map(|x| x.to_f64()))
    );
    Ok(())
}
