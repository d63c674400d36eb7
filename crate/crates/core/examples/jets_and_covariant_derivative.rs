//! First-order jets: a field's value and partial derivatives at one point.
//! Products follow the Leibniz rule and covariant derivatives only need the
//! jet of the field and the value of the connection.

use geoinv::jet::covariant_derivative;
use geoinv::{Jet, Rational, Scalar, Slot, Symmetrization, Tensor, Valence};

fn field(n: usize, valence: Valence, shift: i64) -> Jet<Rational> {
    let entry = |ix: &[usize]| {
        let k: usize = ix.iter().enumerate().map(|(p, v)| (p + 1) * v).sum();
        Rational::ratio((k as i64 + shift) % 5 - 2, 4)
    };
    let value = Tensor::from_fn(n, valence, entry);
    let grad = Tensor::from_fn(n, Valence::new(valence.upper, valence.lower + 1), entry);
    Jet::new(value, grad).expect("matching shapes")
}

fn main() -> geoinv::Result<()> {
    let n = 3;
    let u = field(n, Valence::new(0, 1), 1);
    let v = field(n, Valence::new(1, 0), 2);

    // (u_j v^i)_{,k} = u_{j,k} v^i + u_j v^i_{,k}
    let uv = u.mul(&v)?;
    println!("jet of u ⊗ v has valence {}", uv.valence());

    // a symmetric connection and the covariant derivative of a vector
    let lsym = field(n, Valence::new(1, 2), 0).sym_pair(
        Slot::Lower(0),
        Slot::Lower(1),
        Symmetrization::Half,
    )?;
    let dv = covariant_derivative(&v, &lsym)?;
    println!("v^i_{{|k}} = {}", dv.to_nested_json());

    // exterior derivative u_{j,k} - u_{k,j} of a covector
    let du = u.exterior_derivative()?;
    println!(
        "du is antisymmetric: {}",
        du.add(&du.swap_slots(Slot::Lower(0), Slot::Lower(1))?)
            .is_zero()
    );
    Ok(())
}
