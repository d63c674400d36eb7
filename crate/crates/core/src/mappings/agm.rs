//! Equitorsion almost geodesic mappings of the third type.
//!
//! The symmetric parts are related by
//! `L̄^i_{(jk)} = L^i_{(jk)} + δ^i_j ψ_k + δ^i_k ψ_j + σ_{jk} φ^i`, and the vector
//! `φ` obeys `φ^i_{p|j} = ν_j φ^i + μ δ^i_j` with
//! `φ^i_{1|j} = φ^i_{,j} + L^i_{αj} φ^α` and `φ^i_{2|j} = φ^i_{,j} + L^i_{jα} φ^α`
//! (full, non-symmetric coefficients). The mapping is expressed through the
//! general rule with `s1 = 1, s2 = 0, s3 = 1`, `φ^i_{jk} = -σ_{jk}φ^i / 2` and
//! `φ̄^i_{jk} = +σ_{jk}φ^i / 2`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    random_jet, random_tensor, symmetrize_pair, target_full_connection, Flags, MappingInstance,
    MappingKind, SpaceFields, V01, V02, V10, V11, V12,
};
use crate::connection::ConnectionSpace;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg;
use crate::scalar::Scalar;
use crate::tensor::{Slot, Symmetrization, Tensor, Valence};

/// The almost geodesic data attached to an instance (source-space values).
#[derive(Clone, Debug)]
pub struct AgmBlock<S: Scalar> {
    pub p: u8,
    /// Evaluate the second-kind derivative as printed, `φ^i_{,j} + Σ_α L^i_{jα}`,
    /// without the factor `φ^α`.
    pub literal_p2: bool,
    pub phi: Jet<S>,
    pub nu: Tensor<S>,
    pub mu: S,
    pub sigma: Jet<S>,
}

/// Almost geodesic data as seen from one space. In the image space `σ` enters
/// with the opposite sign and `(ν, μ)` are the fitted image parameters.
#[derive(Clone, Debug)]
pub struct AgmSpaceData<S: Scalar> {
    pub p: u8,
    pub phi: Jet<S>,
    pub nu: Tensor<S>,
    pub mu: S,
    pub sigma: Jet<S>,
}

/// Result of fitting `M = ν ⊗ φ + μ δ`; `residual` is `M - ν ⊗ φ - μ δ`.
#[derive(Clone, Debug)]
pub struct AgmFit<S: Scalar> {
    pub nu: Tensor<S>,
    pub mu: S,
    pub residual: Tensor<S>,
}

fn check_kind(p: u8) -> Result<()> {
    if p == 1 || p == 2 {
        Ok(())
    } else {
        Err(Error::Instance(format!(
            "almost geodesic kind must be 1 or 2, got {p}"
        )))
    }
}

/// Connection term of `φ^i_{p|j}` built from the full coefficients.
fn connection_term<S: Scalar>(
    phi: &Tensor<S>,
    full: &Tensor<S>,
    p: u8,
    literal_p2: bool,
) -> Tensor<S> {
    let n = phi.dim();
    Tensor::from_fn(n, V11, |ix| {
        let (i, j) = (ix[0], ix[1]);
        (0..n).fold(S::zero(), |acc, a| match (p, literal_p2) {
            (1, _) => acc + full.get(&[i, a, j]).clone() * phi.get(&[a]),
            (_, false) => acc + full.get(&[i, j, a]).clone() * phi.get(&[a]),
            (_, true) => acc + full.get(&[i, j, a]),
        })
    })
}

/// `M^i_j = φ^i_{p|j}`.
pub fn kind_derivative<S: Scalar>(
    phi: &Jet<S>,
    full: &Jet<S>,
    p: u8,
    literal_p2: bool,
) -> Result<Tensor<S>> {
    check_kind(p)?;
    if phi.valence() != V10 {
        return Err(Error::Shape(format!(
            "φ must be a (1,0) jet, got {}",
            phi.valence()
        )));
    }
    Ok(phi
        .grad()
        .add(&connection_term(phi.value(), full.value(), p, literal_p2)))
}

fn pattern<S: Scalar>(phi: &Tensor<S>, nu: &Tensor<S>, mu: &S) -> Tensor<S> {
    Tensor::from_fn(phi.dim(), V11, |ix| {
        let base = nu.get(&[ix[1]]).clone() * phi.get(&[ix[0]]);
        if ix[0] == ix[1] {
            base + mu
        } else {
            base
        }
    })
}

/// `φ^i_{p|j} - ν_j φ^i - μ δ^i_j` for given parameters.
pub fn constraint_residual<S: Scalar>(
    phi: &Jet<S>,
    full: &Jet<S>,
    nu: &Tensor<S>,
    mu: &S,
    p: u8,
    literal_p2: bool,
) -> Result<Tensor<S>> {
    let m = kind_derivative(phi, full, p, literal_p2)?;
    Ok(m.sub(&pattern(phi.value(), nu, mu)))
}

/// Least-squares fit of `(ν, μ)` in `φ^i_{p|j} = ν_j φ^i + μ δ^i_j`.
pub fn fit_agm_parameters<S: Scalar>(
    phi: &Jet<S>,
    space: &ConnectionSpace<S>,
    p: u8,
    literal_p2: bool,
) -> Result<AgmFit<S>> {
    let m = kind_derivative(phi, space.full(), p, literal_p2)?;
    let v = phi.value();
    if v.is_zero() {
        return Err(Error::Degenerate(
            "φ vanishes; (ν, μ) are not determined".into(),
        ));
    }
    let n = phi.dim();
    // Unknowns (ν_0 .. ν_{N-1}, μ); one equation per entry (i, j).
    let cols = n + 1;
    let mut a = vec![S::zero(); n * n * cols];
    let mut b = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            a[row * cols + j] = v.get(&[i]).clone();
            if i == j {
                a[row * cols + n] = S::one();
            }
            b.push(m.get(&[i, j]).clone());
        }
    }
    let x = linalg::least_squares(&a, &b, n * n, cols)?;
    let nu = Tensor::new(n, V01, x[..n].to_vec())?;
    let mu = x[n].clone();
    let residual = m.sub(&pattern(v, &nu, &mu));
    Ok(AgmFit { nu, mu, residual })
}

/// Raw ingredients of an almost geodesic instance, before `φ`'s gradient is
/// fixed by the constraint.
#[derive(Clone, Debug)]
pub struct Agm3Parts<S: Scalar> {
    /// Full source coefficients.
    pub connection: Jet<S>,
    pub u: Jet<S>,
    /// `ψ = ū - u`; expected closed.
    pub psi: Jet<S>,
    /// Symmetric `(0,2)` jet.
    pub sigma: Jet<S>,
    pub phi: Tensor<S>,
    pub nu: Tensor<S>,
    pub mu: S,
    pub p: u8,
    pub literal_p2: bool,
    pub seed: u64,
}

/// Builds the instance: sets `∂_j φ^i` from the constraint, makes `σ_{kα}φ^α`
/// closed by correcting the gradient of `σ`, and forms the image connection.
pub fn assemble_agm3<S: Scalar>(parts: Agm3Parts<S>) -> Result<MappingInstance<S>> {
    check_kind(parts.p)?;
    let n = parts.connection.dim();
    if parts.sigma.valence() != V02 {
        return Err(Error::Instance("AGM σ must be a (0,2) jet".into()));
    }
    let skew = parts.sigma.alternate(Slot::Lower(0), Slot::Lower(1))?;
    if !(skew.value().is_zero() && skew.grad().is_zero()) {
        return Err(Error::Instance("AGM σ must be symmetric".into()));
    }
    let full = parts.connection.value();
    let phi_grad = pattern(&parts.phi, &parts.nu, &parts.mu).sub(&connection_term(
        &parts.phi,
        full,
        parts.p,
        parts.literal_p2,
    ));
    let phi = Jet::new(parts.phi.clone(), phi_grad)?;
    let sigma = close_sigma_phi(&parts.sigma, &phi)?;

    let product = sigma.mul(&phi)?;
    let half = S::ratio(1, 2);
    let zero_f = Jet::zeros(n, V11);
    let zero_sigma = Jet::zeros(n, V01);
    let source = SpaceFields::new(
        ConnectionSpace::new(parts.connection.clone())?,
        parts.u.clone(),
        zero_sigma.clone(),
        zero_f.clone(),
        product.scale(&-half.clone()),
    )?;
    let u_bar = parts.u.add(&parts.psi);
    let mut target = SpaceFields::new(
        source.connection.clone(),
        u_bar,
        zero_sigma,
        zero_f,
        product.scale(&half),
    )?;
    let xi = Jet::zeros(n, V12);
    let flags = Flags::agm3();
    target.connection =
        ConnectionSpace::new(target_full_connection(&source, &target, &xi, flags)?)?;
    Ok(MappingInstance {
        dim: n,
        flags,
        kind: MappingKind::Agm3,
        seed: parts.seed,
        source,
        target,
        xi,
        agm: Some(AgmBlock {
            p: parts.p,
            literal_p2: parts.literal_p2,
            phi,
            nu: parts.nu,
            mu: parts.mu,
            sigma,
        }),
    })
}

/// Adds `c_{kαl}` to `∂_l σ_{kα}` so that `∂_l(σ_{kα}φ^α)` becomes symmetric
/// in `(k, l)`, keeping `σ` symmetric. With `w = φ / |φ|²` and `a` minus half
/// the antisymmetric part: `c_{kαl} = a_{kl} w_α + w_k a_{αl} - w_k w_α a_{βl} φ^β`.
fn close_sigma_phi<S: Scalar>(sigma: &Jet<S>, phi: &Jet<S>) -> Result<Jet<S>> {
    let n = sigma.dim();
    let v = phi.value();
    let norm = (0..n).fold(S::zero(), |acc, a| acc + v.get(&[a]).clone() * v.get(&[a]));
    if norm.is_zero() {
        return Ok(sigma.clone());
    }
    let contracted = sigma.mul(phi)?.contract(0, 1)?;
    let a = contracted
        .grad()
        .alternate(Slot::Lower(0), Slot::Lower(1))?
        .scale(&S::ratio(-1, 2));
    let w: Vec<S> = (0..n).map(|k| v.get(&[k]).clone() / norm.clone()).collect();
    let a_phi: Vec<S> = (0..n)
        .map(|l| {
            (0..n).fold(S::zero(), |acc, b| {
                acc + a.get(&[b, l]).clone() * v.get(&[b])
            })
        })
        .collect();
    let c = Tensor::from_fn(n, Valence::new(0, 3), |ix| {
        let (k, al, l) = (ix[0], ix[1], ix[2]);
        a.get(&[k, l]).clone() * &w[al] + w[k].clone() * a.get(&[al, l])
            - w[k].clone() * &w[al] * &a_phi[l]
    });
    Jet::new(sigma.value().clone(), sigma.grad().add(&c))
}

/// Seeded almost geodesic instance of kind `p`.
pub fn generate_agm3<S: Scalar>(
    dim: usize,
    seed: u64,
    p: u8,
    literal_p2: bool,
) -> Result<MappingInstance<S>> {
    if dim < 2 {
        return Err(Error::Shape(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    check_kind(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let connection = random_jet::<S>(&mut rng, dim, V12);
    let u = random_jet::<S>(&mut rng, dim, V01);
    let psi_raw = random_jet::<S>(&mut rng, dim, V01);
    let psi = Jet::new(
        psi_raw.value().clone(),
        psi_raw
            .grad()
            .sym_pair(Slot::Lower(0), Slot::Lower(1), Symmetrization::Half)?,
    )?;
    let sigma = symmetrize_pair(&random_jet::<S>(&mut rng, dim, V02));
    let mut phi = random_tensor::<S>(&mut rng, dim, V10);
    while phi.is_zero() {
        phi = random_tensor::<S>(&mut rng, dim, V10);
    }
    let nu = random_tensor::<S>(&mut rng, dim, V01);
    let mu = S::sample(&mut rng);
    assemble_agm3(Agm3Parts {
        connection,
        u,
        psi,
        sigma,
        phi,
        nu,
        mu,
        p,
        literal_p2,
        seed,
    })
}

impl<S: Scalar> AgmBlock<S> {
    /// Constraint residual in the source space with the stored `(ν, μ)`.
    pub fn source_residual(&self, source: &ConnectionSpace<S>) -> Result<Tensor<S>> {
        constraint_residual(
            &self.phi,
            source.full(),
            &self.nu,
            &self.mu,
            self.p,
            self.literal_p2,
        )
    }

    /// Fit of `(ν̄, μ̄)` in the image space.
    pub fn target_fit(&self, target: &ConnectionSpace<S>) -> Result<AgmFit<S>> {
        fit_agm_parameters(&self.phi, target, self.p, self.literal_p2)
    }

    pub fn source_data(&self) -> AgmSpaceData<S> {
        AgmSpaceData {
            p: self.p,
            phi: self.phi.clone(),
            nu: self.nu.clone(),
            mu: self.mu.clone(),
            sigma: self.sigma.clone(),
        }
    }

    /// Image-space data: `σ → -σ`, fitted `(ν̄, μ̄)`. When `φ = 0` no fit is
    /// possible and no formula depends on `ν`; the source values are kept.
    pub fn target_data(&self, target: &ConnectionSpace<S>) -> Result<AgmSpaceData<S>> {
        let (nu, mu) = match self.target_fit(target) {
            Ok(fit) => (fit.nu, fit.mu),
            Err(Error::Degenerate(_)) => (self.nu.clone(), self.mu.clone()),
            Err(e) => return Err(e),
        };
        Ok(AgmSpaceData {
            p: self.p,
            phi: self.phi.clone(),
            nu,
            mu,
            sigma: self.sigma.scale(&-S::one()),
        })
    }
}
