//! The `(X, Y, Z)` recursion producing derived Weyl-type invariants.
//!
//! An invariant of the shape `W = R + δ^i_j X_{[mn]} + δ^i_{[m}Y_{jn]} + Z`
//! with `Z^i_{jmn} = -Z^i_{jnm}` yields the derived objects `W⁽¹⁾`, `W⁽²⁾`
//! and `W⁽⁴⁾` computed by [`derived_invariants`].

use super::{
    delta_bracket, delta_bracket_rev, delta_j, first_trace, inv, last_trace, skew, FactoredObjects,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{Slot, Tensor, Valence};

/// The three tensors of a decomposition `W = R + δX + δY + Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct XyzDecomposition<S: Scalar> {
    pub x: Tensor<S>,
    pub y: Tensor<S>,
    pub z: Tensor<S>,
}

impl<S: Scalar> XyzDecomposition<S> {
    /// Validates valences and the antisymmetry `Z^i_{jmn} = -Z^i_{jnm}`.
    pub fn new(x: Tensor<S>, y: Tensor<S>, z: Tensor<S>) -> Result<Self> {
        let v02 = Valence::new(0, 2);
        if x.valence() != v02 || y.valence() != v02 || z.valence() != Valence::new(1, 3) {
            return Err(Error::Decomposition(format!(
                "expected X, Y of type (0,2) and Z of type (1,3), got {}, {}, {}",
                x.valence(),
                y.valence(),
                z.valence()
            )));
        }
        if x.dim() != y.dim() || x.dim() != z.dim() {
            return Err(Error::Decomposition(
                "X, Y, Z have different dimensions".into(),
            ));
        }
        let swapped = z.swap_slots(Slot::Lower(1), Slot::Lower(2))?;
        if !z.add(&swapped).is_zero() {
            return Err(Error::Decomposition(format!(
                "Z is not antisymmetric in its last two indices (defect {:.3e})",
                z.add(&swapped).max_abs()
            )));
        }
        Ok(Self { x, y, z })
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    /// `R + δ^i_j X_{[mn]} + δ^i_{[m}Y_{jn]} + Z`.
    pub fn assemble(&self, curvature: &Tensor<S>) -> Result<Tensor<S>> {
        Ok(curvature
            .try_add(&delta_j(&skew(&self.x))?)?
            .add(&delta_bracket(&self.y)?)
            .add(&self.z))
    }
}

/// The derived invariants `W⁽¹⁾`, `W⁽²⁾`, `W⁽⁴⁾`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedInvariants<S: Scalar> {
    pub w1: Tensor<S>,
    pub w2: Tensor<S>,
    pub w4: Tensor<S>,
}

/// Applies the recursion to a decomposition, given the curvature `R` and
/// the symmetrized Ricci tensor `R_(jn)` of the same space.
pub fn derived_invariants<S: Scalar>(
    d: &XyzDecomposition<S>,
    curvature: &Tensor<S>,
    ricci_sym: &Tensor<S>,
) -> Result<DerivedInvariants<S>> {
    let n = d.dim();
    if n < 2 {
        return Err(Error::Degenerate("derived invariants need N >= 2".into()));
    }
    if curvature.dim() != n || curvature.valence() != Valence::new(1, 3) {
        return Err(Error::Shape(
            "curvature must be (1,3) in the decomposition's dimension".into(),
        ));
    }
    let y_skew = skew(&d.y);
    let dy = delta_bracket(&d.y)?;
    let base = curvature.add(&dy).add(&d.z);

    // W1 = R - δ^i_j (Y_[mn] + Z^α_{αmn}) / N + δ_[m Y_jn] + Z
    let w1 = base.sub(&delta_j(&y_skew.add(&first_trace(&d.z)?))?.scale(&inv(n)));

    // W2 = R - δ^i_j ((N-1) Y_[mn] - Z^α_{[mn]α}) / 2 + δ_[m Y_jn] + Z
    let z_last = last_trace(&d.z)?;
    let inner = y_skew.scale(&S::from_usize(n - 1)).sub(&skew(&z_last));
    let w2 = base.sub(&delta_j(&inner)?.scale(&S::ratio(1, 2)));

    // W4 = R + δ_[m R_(jn)]/(N-1) + δ^i_j X_[mn] + Z
    //      - (δ_[m X_jn] - δ_[m X_n]j)/(N-1) + δ_[m Z^α_{jn]α}/(N-1)
    let c = inv::<S>(n - 1);
    let x_part = delta_bracket(&d.x)?.sub(&delta_bracket_rev(&d.x)?);
    let w4 = curvature
        .add(&delta_bracket(ricci_sym)?.scale(&c))
        .add(&delta_j(&skew(&d.x))?)
        .add(&d.z)
        .sub(&x_part.scale(&c))
        .add(&delta_bracket(&z_last)?.scale(&c));

    Ok(DerivedInvariants { w1, w2, w4 })
}

/// `X = 0`, `Y = -((N+1)(θ_{i|j} - ρ_{ij}) + S̃_{ij}) / (N+1)²`, `Z = 𝒜`.
/// The same triple is read off the final factored form and `W̃`.
pub fn xyz_weyl_basic<S: Scalar>(obj: &FactoredObjects<S>) -> XyzDecomposition<S> {
    let n = obj.dim;
    let y = obj
        .theta_derivative
        .sub(&obj.rho)
        .scale(&S::from_usize(n + 1))
        .add(&obj.s_tilde)
        .scale(&-inv::<S>((n + 1) * (n + 1)));
    XyzDecomposition {
        x: Tensor::zeros(n, Valence::new(0, 2)),
        y,
        z: obj.a_tensor.clone(),
    }
}

/// `X = 0`, `Y = (R_(ij) + 𝒜^α_{(ij)α}) / (N-1)`, `Z = 𝒜`.
pub fn xyz_weyl_fourth<S: Scalar>(
    obj: &FactoredObjects<S>,
    ricci_sym: &Tensor<S>,
) -> XyzDecomposition<S> {
    let n = obj.dim;
    XyzDecomposition {
        x: Tensor::zeros(n, Valence::new(0, 2)),
        y: ricci_sym.add(&obj.a_trace_sym()).scale(&inv(n - 1)),
        z: obj.a_tensor.clone(),
    }
}

/// `X = 0`, `Y = -θ_{i|j}/(N+1) + ρ_{ij}/(N+1) - 𝒜^α_{(ij)α}/(N+1)²`, `Z = 𝒜`.
pub fn xyz_weyl_first_over<S: Scalar>(obj: &FactoredObjects<S>) -> XyzDecomposition<S> {
    let n = obj.dim;
    let y = obj
        .rho
        .sub(&obj.theta_derivative)
        .scale(&inv(n + 1))
        .sub(&obj.a_trace_sym().scale(&inv((n + 1) * (n + 1))));
    XyzDecomposition {
        x: Tensor::zeros(n, Valence::new(0, 2)),
        y,
        z: obj.a_tensor.clone(),
    }
}
