//! The projective specialization `s2 = s3 = 0` and the classical Weyl
//! projective tensor.

use super::{delta_bracket, delta_bracket_rev, delta_j, inv, skew};
use crate::connection::{self, ConnectionSpace};
use crate::error::{Error, Result};
use crate::jet::{covariant_derivative, Jet};
use crate::scalar::Scalar;
use crate::tensor::{Tensor, Valence};

/// `T^i_{jk} = L^i_{(jk)} - (δ^i_j θ_k + δ^i_k θ_j) / (N+1)` for the symmetric
/// connection value `lsym`.
pub fn geodesic_thomas<S: Scalar>(lsym: &Tensor<S>) -> Result<Tensor<S>> {
    if lsym.valence() != Valence::new(1, 2) {
        return Err(Error::Shape(format!(
            "connection must be (1,2), got {}",
            lsym.valence()
        )));
    }
    let n = lsym.dim();
    let theta = lsym.contract(0, 1)?;
    let c = inv::<S>(n + 1);
    Ok(Tensor::from_fn(n, lsym.valence(), |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        let mut t = S::zero();
        if i == j {
            t = t + theta.get(&[k]);
        }
        if i == k {
            t = t + theta.get(&[j]);
        }
        lsym.get(ix).clone() - c.clone() * t
    }))
}

/// The geodesic Thomas form with its second trace taken as printed,
/// `δ^i_k θ_k` with `k` repeated; kept only for diagnostics.
pub fn geodesic_thomas_printed<S: Scalar>(lsym: &Tensor<S>) -> Result<Tensor<S>> {
    let n = lsym.dim();
    let theta = lsym.contract(0, 1)?;
    let c = inv::<S>(n + 1);
    Ok(Tensor::from_fn(n, lsym.valence(), |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        let mut t = S::zero();
        if i == j {
            t = t + theta.get(&[k]);
        }
        if i == k {
            t = t + theta.get(&[k]);
        }
        lsym.get(ix).clone() - c.clone() * t
    }))
}

/// `R + δ^i_j T_{[mn]}/(N+1) - δ^i_m((N+1)T_{jn} + θ_jθ_n)/(N+1)² + (m ↔ n)`
/// with the supplied trace derivative `T_{jn}`.
fn geodesic_weyl_with<S: Scalar>(space: &ConnectionSpace<S>, t: &Tensor<S>) -> Result<Tensor<S>> {
    let n = space.dim();
    let theta = space.theta().value();
    let np1 = S::from_usize(n + 1);
    let y = Tensor::from_fn(n, Valence::new(0, 2), |ix| {
        np1.clone() * t.get(ix) + theta.get(&[ix[0]]).clone() * theta.get(&[ix[1]])
    });
    Ok(space
        .curvature()
        .add(&delta_j(&skew(t))?.scale(&inv(n + 1)))
        .sub(&delta_bracket(&y)?.scale(&inv((n + 1) * (n + 1)))))
}

/// The Weyl-type form with `L^α_{jα|n}` taken by the special connection
/// derivative rule. It is not an invariant of geodesic mappings in general.
pub fn geodesic_weyl<S: Scalar>(space: &ConnectionSpace<S>) -> Result<Tensor<S>> {
    geodesic_weyl_with(space, &connection::trace_cov_derivative(space.sym())?)
}

/// The same form with `L^α_{jα|n}` read as the covariant derivative `θ_{j|n}`.
pub fn geodesic_weyl_covector<S: Scalar>(space: &ConnectionSpace<S>) -> Result<Tensor<S>> {
    geodesic_weyl_with(space, &covariant_derivative(space.theta(), space.sym())?)
}

/// `W = R + δ^i_j R_{[mn]}/(N+1) + N δ^i_{[m}R_{jn]}/(N²-1) + δ^i_{[m}R_{n]j}/(N²-1)`
/// built from the Ricci tensor `R_{jm} = R^α_{jmα}`.
pub fn weyl_projective<S: Scalar>(curvature: &Tensor<S>, ricci: &Tensor<S>) -> Result<Tensor<S>> {
    let n = curvature.dim();
    if n < 2 {
        return Err(Error::Degenerate(
            "Weyl projective tensor needs N >= 2".into(),
        ));
    }
    let c = inv::<S>(n * n - 1);
    Ok(curvature
        .try_add(&delta_j(&skew(ricci))?.scale(&inv(n + 1)))?
        .add(&delta_bracket(ricci)?.scale(&(S::from_usize(n) * c.clone())))
        .add(&delta_bracket_rev(ricci)?.scale(&c)))
}

/// `L^α_{jα|n}` by the special rule, re-exported for expression bindings.
pub fn trace_derivative<S: Scalar>(lsym: &Jet<S>) -> Result<Tensor<S>> {
    connection::trace_cov_derivative(lsym)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{weyl_basic, FactoredObjects};
    use crate::mappings::{generate, Flags, GenOptions, MappingKind, SpaceFields};
    use crate::Rational as Q;

    fn geodesic_instance(dim: usize, seed: u64) -> crate::mappings::MappingInstance<Q> {
        generate(GenOptions {
            dim,
            seed,
            flags: Flags::geodesic(),
            kind: MappingKind::Geodesic,
        })
        .unwrap()
    }

    #[test]
    fn thomas_is_invariant() {
        for seed in 0..4 {
            let inst = geodesic_instance(3, seed);
            let a = geodesic_thomas(inst.source.connection.sym().value()).unwrap();
            let b = geodesic_thomas(inst.target.connection.sym().value()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn printed_thomas_differs() {
        let inst = geodesic_instance(3, 9);
        let l = inst.source.connection.sym().value();
        assert_ne!(
            geodesic_thomas(l).unwrap(),
            geodesic_thomas_printed(l).unwrap()
        );
    }

    #[test]
    fn covector_reading_is_weyl_basic_plus_trace_term() {
        let inst = geodesic_instance(4, 2);
        let space = &inst.source.connection;
        let fields = SpaceFields::bare(space.clone());
        let obj = FactoredObjects::compute(&fields, Flags::geodesic()).unwrap();
        let wb = weyl_basic(space, &obj.omega).unwrap();
        let theta_d = covariant_derivative(space.theta(), space.sym()).unwrap();
        let want = wb.add(
            &delta_j(&skew(&theta_d))
                .unwrap()
                .scale(&(Q::from_i64(2) * inv::<Q>(5))),
        );
        assert_eq!(geodesic_weyl_covector(space).unwrap(), want);
    }

    #[test]
    fn projective_tensor_is_trace_free() {
        let inst = geodesic_instance(4, 3);
        let space = &inst.source.connection;
        let w = weyl_projective(space.curvature(), space.ricci()).unwrap();
        // For a symmetric connection the Weyl projective tensor has vanishing Ricci trace.
        let sym_space = ConnectionSpace::new(space.sym().clone()).unwrap();
        let ws = weyl_projective(sym_space.curvature(), sym_space.ricci()).unwrap();
        assert!(ws.contract(0, 2).unwrap().is_zero());
        assert_eq!(w.valence(), Valence::new(1, 3));
    }
}
