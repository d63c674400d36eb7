//! Curvature of a random non-symmetric connection and the trace identities
//! that tie its Ricci tensor to the connection trace.

use geoinv::connection::curvature_trace;
use geoinv::mappings::{generate, Flags, GenOptions, MappingKind};
use geoinv::{Rational, Scalar, Slot};

fn main() -> geoinv::Result<()> {
    let inst = generate::<Rational>(GenOptions {
        dim: 4,
        seed: 11,
        flags: Flags::default(),
        kind: MappingKind::General,
    })?;
    let space = &inst.source.connection;
    let r = space.curvature();
    println!("N = {}, curvature valence {}", space.dim(), r.valence());

    // R^i_{jmn} = -R^i_{jnm}
    let swapped = r.swap_slots(Slot::Lower(1), Slot::Lower(2))?;
    println!(
        "antisymmetric in the last pair: {}",
        r.add(&swapped).is_zero()
    );

    // R^α_{αij} = -R_[ij]
    let trace = curvature_trace(r)?;
    println!(
        "R^α_{{αij}} + R_[ij] = 0: {}",
        trace.add(space.skew_ricci()).is_zero()
    );

    // θ_[m|n] = -R_[mn]
    let dtheta = space.trace_derivative();
    let skew = dtheta.sub(&dtheta.swap_slots(Slot::Lower(0), Slot::Lower(1))?);
    println!(
        "θ_[m|n] + R_[mn] = 0: {}",
        skew.add(space.skew_ricci()).is_zero()
    );

    println!("|R_(jn)|∞ = {:.4}", space.ricci_sym().max_abs());
    println!("R_01 = {}", space.ricci().get(&[0, 1]));
    println!("θ_0 = {}", space.theta().value().get(&[0]).to_f64());
    Ok(())
}
