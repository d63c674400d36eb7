//! Pairs of connection spaces related by the general transformation rule
//!
//! ```text
//! L̄^i_{jk} = L^i_{jk} + s1 (δ^i_j ψ_k + δ^i_k ψ_j)
//!          + s2 ((f̄^i_j σ̄_k + f̄^i_k σ̄_j) - (f^i_j σ_k + f^i_k σ_j))
//!          + s3 (φ̄^i_{jk} - φ^i_{jk}) + ξ^i_{jk},      ψ = ū - u,
//! ```
//!
//! together with seeded random generators for such pairs and for equitorsion
//! almost geodesic mappings of the third type (see [`agm`]).

pub mod agm;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::connection::ConnectionSpace;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg;
use crate::scalar::Scalar;
use crate::tensor::{Slot, Symmetrization, Tensor, Valence};

pub use agm::{
    assemble_agm3, fit_agm_parameters, generate_agm3, Agm3Parts, AgmBlock, AgmFit, AgmSpaceData,
};

pub(crate) const V01: Valence = Valence::new(0, 1);
pub(crate) const V02: Valence = Valence::new(0, 2);
pub(crate) const V10: Valence = Valence::new(1, 0);
pub(crate) const V11: Valence = Valence::new(1, 1);
pub(crate) const V12: Valence = Valence::new(1, 2);

/// The switches `s1, s2, s3` of the transformation rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Flags {
    pub s1: bool,
    pub s2: bool,
    pub s3: bool,
}

impl Flags {
    pub const fn new(s1: bool, s2: bool, s3: bool) -> Self {
        Self { s1, s2, s3 }
    }

    /// All eight combinations, ordered as the binary number `s1 s2 s3`.
    pub fn all() -> [Flags; 8] {
        std::array::from_fn(|k| Flags::new(k & 4 != 0, k & 2 != 0, k & 1 != 0))
    }

    pub fn geodesic() -> Self {
        Self::new(true, false, false)
    }

    pub fn agm3() -> Self {
        Self::new(true, false, true)
    }

    pub(crate) fn coef<S: Scalar>(on: bool) -> S {
        if on {
            S::one()
        } else {
            S::zero()
        }
    }
}

impl std::fmt::Display for Flags {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "s1={} s2={} s3={}",
            self.s1 as u8, self.s2 as u8, self.s3 as u8
        )
    }
}

impl Serialize for Flags {
    fn serialize<Ser: serde::Serializer>(
        &self,
        ser: Ser,
    ) -> std::result::Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeMap;
        let mut map = ser.serialize_map(Some(3))?;
        map.serialize_entry("s1", &(self.s1 as u8))?;
        map.serialize_entry("s2", &(self.s2 as u8))?;
        map.serialize_entry("s3", &(self.s3 as u8))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Flags {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            s1: u8,
            s2: u8,
            s3: u8,
        }
        let raw = Raw::deserialize(de)?;
        let bit = |v: u8, name: &str| match v {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(serde::de::Error::custom(format!(
                "flag {name} must be 0 or 1"
            ))),
        };
        Ok(Flags::new(
            bit(raw.s1, "s1")?,
            bit(raw.s2, "s2")?,
            bit(raw.s3, "s3")?,
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MappingKind {
    General,
    Geodesic,
    Agm3,
}

impl std::str::FromStr for MappingKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "general" => Ok(Self::General),
            "geodesic" => Ok(Self::Geodesic),
            "agm3" => Ok(Self::Agm3),
            other => Err(format!(
                "unknown mapping kind `{other}` (general, geodesic, agm3)"
            )),
        }
    }
}

impl MappingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::General => "general",
            Self::Geodesic => "geodesic",
            Self::Agm3 => "agm3",
        }
    }
}

/// The single-space inputs of the factored invariants.
///
/// `u` and `sigma` are covector jets, `f` an affinor jet and `phi` a `(1,2)`
/// jet symmetric in its lower pair.
#[derive(Clone, Debug)]
pub struct SpaceFields<S: Scalar> {
    pub connection: ConnectionSpace<S>,
    pub u: Jet<S>,
    pub sigma: Jet<S>,
    pub f: Jet<S>,
    pub phi: Jet<S>,
}

impl<S: Scalar> SpaceFields<S> {
    pub fn new(
        connection: ConnectionSpace<S>,
        u: Jet<S>,
        sigma: Jet<S>,
        f: Jet<S>,
        phi: Jet<S>,
    ) -> Result<Self> {
        let n = connection.dim();
        for (name, jet, valence) in [
            ("u", &u, V01),
            ("sigma", &sigma, V01),
            ("f", &f, V11),
            ("phi", &phi, V12),
        ] {
            if jet.valence() != valence || jet.dim() != n {
                return Err(Error::Instance(format!(
                    "field `{name}` must be a {valence} jet over N={n}, got {} over N={}",
                    jet.valence(),
                    jet.dim()
                )));
            }
        }
        check_symmetric_lower(&phi, "phi")?;
        Ok(Self {
            connection,
            u,
            sigma,
            f,
            phi,
        })
    }

    /// Fields of a space with every auxiliary object equal to zero.
    pub fn bare(connection: ConnectionSpace<S>) -> Self {
        let n = connection.dim();
        Self {
            connection,
            u: Jet::zeros(n, V01),
            sigma: Jet::zeros(n, V01),
            f: Jet::zeros(n, V11),
            phi: Jet::zeros(n, V12),
        }
    }

    pub fn dim(&self) -> usize {
        self.connection.dim()
    }
}

/// A source space, its image, and the data of the rule that relates them.
///
/// The image connection is stored rather than recomputed, so that a file whose
/// target connection disagrees with its fields can be detected by
/// [`target_connection_residual`].
#[derive(Clone, Debug)]
pub struct MappingInstance<S: Scalar> {
    pub dim: usize,
    pub flags: Flags,
    pub kind: MappingKind,
    pub seed: u64,
    pub source: SpaceFields<S>,
    pub target: SpaceFields<S>,
    pub xi: Jet<S>,
    pub agm: Option<AgmBlock<S>>,
}

pub fn check_symmetric_lower<S: Scalar>(jet: &Jet<S>, name: &str) -> Result<()> {
    let v = jet.valence();
    let (a, b) = (Slot::Lower(v.lower - 2), Slot::Lower(v.lower - 1));
    let skew = jet.alternate(a, b)?;
    if skew.value().is_zero() && skew.grad().is_zero() {
        Ok(())
    } else {
        Err(Error::Instance(format!(
            "field `{name}` must be symmetric in its lower pair"
        )))
    }
}

pub fn check_antisymmetric_lower<S: Scalar>(jet: &Jet<S>, name: &str) -> Result<()> {
    let sym = jet.sym_pair(Slot::Lower(0), Slot::Lower(1), Symmetrization::Plain)?;
    if sym.value().is_zero() && sym.grad().is_zero() {
        Ok(())
    } else {
        Err(Error::Instance(format!(
            "field `{name}` must be antisymmetric in its lower pair"
        )))
    }
}

/// `δ^i_j c_k + δ^i_k c_j` for a covector jet `c`.
pub fn delta_sym<S: Scalar>(c: &Jet<S>) -> Result<Jet<S>> {
    let d = Jet::constant(Tensor::delta(c.dim())).mul(c)?;
    Ok(d.add(&d.swap_slots(Slot::Lower(0), Slot::Lower(1))?))
}

/// `f^i_j σ_k + f^i_k σ_j`.
pub fn affinor_product<S: Scalar>(f: &Jet<S>, sigma: &Jet<S>) -> Result<Jet<S>> {
    let fs = f.mul(sigma)?;
    Ok(fs.add(&fs.swap_slots(Slot::Lower(0), Slot::Lower(1))?))
}

/// `Ω^i_{jk} = s2 (f^i_j σ_k + f^i_k σ_j) + s3 φ^i_{jk}`: the part of `ω`
/// that does not involve the connection.
pub fn deformation_object<S: Scalar>(fields: &SpaceFields<S>, flags: Flags) -> Result<Jet<S>> {
    let fs = affinor_product(&fields.f, &fields.sigma)?.scale(&Flags::coef(flags.s2));
    Ok(fs.add(&fields.phi.scale(&Flags::coef(flags.s3))))
}

/// `τ_k = θ_k - s2 (f^α_k σ_α + f σ_k) - s3 φ^α_{kα}`: the bracket that
/// appears with `1/(N+1)` throughout the factored forms. As a jet.
pub fn reduced_trace<S: Scalar>(fields: &SpaceFields<S>, flags: Flags) -> Result<Jet<S>> {
    let omega_trace = deformation_object(fields, flags)?.contract(0, 1)?;
    Ok(fields.connection.theta().sub(&omega_trace))
}

/// `ω^i_{jk} = Ω^i_{jk} + (δ^i_j τ_k + δ^i_k τ_j) / (N+1)`, as a jet.
pub fn omega<S: Scalar>(fields: &SpaceFields<S>, flags: Flags) -> Result<Jet<S>> {
    let n = fields.dim();
    let big = deformation_object(fields, flags)?;
    let tau = reduced_trace(fields, flags)?;
    let inv = S::one() / S::from_usize(n + 1);
    Ok(big.add(&delta_sym(&tau)?.scale(&inv)))
}

/// The image connection of the general rule, built by jet algebra.
pub fn build_target_connection<S: Scalar>(inst: &MappingInstance<S>) -> Result<ConnectionSpace<S>> {
    ConnectionSpace::new(target_full_connection(
        &inst.source,
        &inst.target,
        &inst.xi,
        inst.flags,
    )?)
}

/// Full image coefficients `L̄^i_{jk}` from source fields, target auxiliaries
/// and `ξ`.
pub fn target_full_connection<S: Scalar>(
    source: &SpaceFields<S>,
    target: &SpaceFields<S>,
    xi: &Jet<S>,
    flags: Flags,
) -> Result<Jet<S>> {
    if xi.valence() != V12 {
        return Err(Error::Instance("xi must be a (1,2) jet".into()));
    }
    check_antisymmetric_lower(xi, "xi")?;
    check_symmetric_lower(&source.phi, "phi")?;
    check_symmetric_lower(&target.phi, "phi_bar")?;
    let psi = target.u.sub(&source.u);
    let mut out = source.connection.full().clone();
    out = out.add(&delta_sym(&psi)?.scale(&Flags::coef(flags.s1)));
    let fs_bar = affinor_product(&target.f, &target.sigma)?;
    let fs = affinor_product(&source.f, &source.sigma)?;
    out = out.add(&fs_bar.sub(&fs).scale(&Flags::coef(flags.s2)));
    out = out.add(&target.phi.sub(&source.phi).scale(&Flags::coef(flags.s3)));
    Ok(out.add(xi))
}

/// Largest deviation between the stored image connection and the one the rule
/// produces from the instance's fields. Zero for a consistent instance.
pub fn target_connection_residual<S: Scalar>(
    inst: &MappingInstance<S>,
) -> Result<(Tensor<S>, Tensor<S>)> {
    let rebuilt = target_full_connection(&inst.source, &inst.target, &inst.xi, inst.flags)?;
    let stored = inst.target.connection.full();
    Ok((
        stored.value().sub(rebuilt.value()),
        stored.grad().sub(rebuilt.grad()),
    ))
}

/// `s1 ψ_k - (θ̄_k - θ_k - s2(...) - s3(...)) / (N+1)`, the contracted rule
/// solved for `ψ`. Zero exactly when the image trace agrees with `ū - u`.
pub fn psi_residual<S: Scalar>(inst: &MappingInstance<S>) -> Result<Tensor<S>> {
    if !inst.flags.s1 {
        return Err(Error::NotApplicable("psi residual needs s1 = 1".into()));
    }
    let psi = inst.target.u.value().sub(inst.source.u.value());
    let tau_bar = reduced_trace(&inst.target, inst.flags)?;
    let tau = reduced_trace(&inst.source, inst.flags)?;
    let inv = S::one() / S::from_usize(inst.dim + 1);
    Ok(psi.sub(&tau_bar.value().sub(tau.value()).scale(&inv)))
}

/// Options of the general generator.
#[derive(Clone, Copy, Debug)]
pub struct GenOptions {
    pub dim: usize,
    pub seed: u64,
    pub flags: Flags,
    pub kind: MappingKind,
}

pub(crate) fn random_tensor<S: Scalar>(
    rng: &mut ChaCha8Rng,
    dim: usize,
    valence: Valence,
) -> Tensor<S> {
    Tensor::from_fn(dim, valence, |_| S::sample(rng))
}

pub(crate) fn random_jet<S: Scalar>(rng: &mut ChaCha8Rng, dim: usize, valence: Valence) -> Jet<S> {
    let value = random_tensor(rng, dim, valence);
    let grad = random_tensor(rng, dim, Valence::new(valence.upper, valence.lower + 1));
    Jet::new(value, grad).expect("shapes agree by construction")
}

/// Half-sum over the last two lower value slots, applied to value and gradient.
pub(crate) fn symmetrize_pair<S: Scalar>(jet: &Jet<S>) -> Jet<S> {
    let q = jet.valence().lower;
    jet.sym_pair(Slot::Lower(q - 2), Slot::Lower(q - 1), Symmetrization::Half)
        .expect("jet has two lower slots")
}

fn symmetric_gradient<S: Scalar>(grad: &Tensor<S>) -> Tensor<S> {
    grad.sym_pair(Slot::Lower(0), Slot::Lower(1), Symmetrization::Half)
        .expect("covector gradient is (0,2)")
}

/// Seeded random mapping instance.
///
/// Target auxiliaries are drawn independently of the source ones, then two
/// first-order integrability conditions are imposed on their gradients:
/// `ψ = ū - u` and the change of `Ω^α_{kα}` are made closed (symmetric
/// gradient). Without them the trace parts of the factored Weyl forms are not
/// preserved.
pub fn generate<S: Scalar>(opts: GenOptions) -> Result<MappingInstance<S>> {
    let n = opts.dim;
    if n < 2 {
        return Err(Error::Shape(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    let flags = match opts.kind {
        MappingKind::General => opts.flags,
        MappingKind::Geodesic => Flags::geodesic(),
        MappingKind::Agm3 => {
            return Err(Error::Instance(
                "use generate_agm3 for almost geodesic mappings".into(),
            ))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let l = random_jet::<S>(&mut rng, n, V12);
    let u = random_jet::<S>(&mut rng, n, V01);
    let u_bar_raw = random_jet::<S>(&mut rng, n, V01);
    let psi_grad = symmetric_gradient(&u_bar_raw.grad().sub(u.grad()));
    let u_bar = Jet::new(u_bar_raw.value().clone(), u.grad().add(&psi_grad))?;

    let sigma = random_jet::<S>(&mut rng, n, V01);
    let f = random_jet::<S>(&mut rng, n, V11);
    let phi = symmetrize_pair(&random_jet::<S>(&mut rng, n, V12));
    let mut sigma_bar = random_jet::<S>(&mut rng, n, V01);
    let mut f_bar = random_jet::<S>(&mut rng, n, V11);
    let mut phi_bar = symmetrize_pair(&random_jet::<S>(&mut rng, n, V12));
    let xi = match opts.kind {
        MappingKind::Geodesic => Jet::zeros(n, V12),
        _ => random_jet::<S>(&mut rng, n, V12)
            .alternate(Slot::Lower(0), Slot::Lower(1))?
            .scale(&S::ratio(1, 2)),
    };

    let source = SpaceFields::new(ConnectionSpace::new(l)?, u, sigma, f, phi)?;
    if flags.s2 || flags.s3 {
        // Make grad(ΔΩ^α_{kα}) symmetric: compute its antisymmetric part `a`
        // and absorb -a through φ̄ (s3 = 1) or σ̄ (s2 only).
        let src_trace = deformation_object(&source, flags)?.contract(0, 1)?;
        loop {
            let probe = SpaceFields {
                connection: source.connection.clone(),
                u: u_bar.clone(),
                sigma: sigma_bar.clone(),
                f: f_bar.clone(),
                phi: phi_bar.clone(),
            };
            let delta_trace = deformation_object(&probe, flags)?
                .contract(0, 1)?
                .sub(&src_trace);
            let a = delta_trace
                .grad()
                .alternate(Slot::Lower(0), Slot::Lower(1))?
                .scale(&S::ratio(-1, 2));
            if flags.s3 {
                let inv = S::one() / S::from_usize(n + 1);
                let c = Tensor::from_fn(n, Valence::new(1, 3), |ix| {
                    let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
                    let mut acc = S::zero();
                    if i == j {
                        acc = acc + a.get(&[k, l]);
                    }
                    if i == k {
                        acc = acc + a.get(&[j, l]);
                    }
                    acc * &inv
                });
                phi_bar = Jet::new(phi_bar.value().clone(), phi_bar.grad().add(&c))?;
                break;
            }
            // M[k][α] = f̄^α_k + f̄ δ^α_k acts on the gradient of σ̄.
            let fv = f_bar.value();
            let trace = (0..n).fold(S::zero(), |acc, a| acc + fv.get(&[a, a]));
            let m: Vec<S> = (0..n * n)
                .map(|idx| {
                    let (k, al) = (idx / n, idx % n);
                    let base = fv.get(&[al, k]).clone();
                    if k == al {
                        base + &trace
                    } else {
                        base
                    }
                })
                .collect();
            match linalg::solve(&m, a.data(), n, n) {
                Ok(x) => {
                    let x = Tensor::new(n, V02, x)?;
                    sigma_bar = Jet::new(sigma_bar.value().clone(), sigma_bar.grad().add(&x))?;
                    break;
                }
                Err(Error::Degenerate(_)) => {
                    f_bar = random_jet::<S>(&mut rng, n, V11);
                }
                Err(e) => return Err(e),
            }
        }
    }

    let placeholder = SpaceFields {
        connection: source.connection.clone(),
        u: u_bar,
        sigma: sigma_bar,
        f: f_bar,
        phi: phi_bar,
    };
    let target_full = target_full_connection(&source, &placeholder, &xi, flags)?;
    let target = SpaceFields {
        connection: ConnectionSpace::new(target_full)?,
        ..placeholder
    };
    Ok(MappingInstance {
        dim: n,
        flags,
        kind: opts.kind,
        seed: opts.seed,
        source,
        target,
        xi,
        agm: None,
    })
}

/// Both spaces equal, every auxiliary zero.
pub fn identity_instance<S: Scalar>(
    connection: Jet<S>,
    flags: Flags,
) -> Result<MappingInstance<S>> {
    let n = connection.dim();
    let space = SpaceFields::bare(ConnectionSpace::new(connection)?);
    Ok(MappingInstance {
        dim: n,
        flags,
        kind: MappingKind::General,
        seed: 0,
        source: space.clone(),
        target: space,
        xi: Jet::zeros(n, V12),
        agm: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational as Q;

    fn opts(dim: usize, seed: u64, flags: Flags) -> GenOptions {
        GenOptions {
            dim,
            seed,
            flags,
            kind: MappingKind::General,
        }
    }

    #[test]
    fn flags_enumerate_all_combinations() {
        let all = Flags::all();
        assert_eq!(all[0], Flags::new(false, false, false));
        assert_eq!(all[5], Flags::new(true, false, true));
        assert_eq!(
            all.iter().collect::<std::collections::HashSet<_>>().len(),
            8
        );
    }

    #[test]
    fn flags_serialize_as_bits() {
        let s = serde_json::to_string(&Flags::new(true, false, true)).unwrap();
        assert_eq!(s, r#"{"s1":1,"s2":0,"s3":1}"#);
        assert_eq!(
            serde_json::from_str::<Flags>(&s).unwrap(),
            Flags::new(true, false, true)
        );
        assert!(serde_json::from_str::<Flags>(r#"{"s1":2,"s2":0,"s3":1}"#).is_err());
    }

    #[test]
    fn identity_mapping_keeps_connection() {
        let inst = generate::<Q>(opts(3, 1, Flags::all()[7])).unwrap();
        let id = identity_instance(inst.source.connection.full().clone(), Flags::all()[7]).unwrap();
        let rebuilt = build_target_connection(&id).unwrap();
        assert_eq!(rebuilt.full(), id.source.connection.full());
    }

    #[test]
    fn geodesic_rule_with_constant_psi() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = random_jet::<Q>(&mut rng, 3, V12);
        let psi = Jet::constant(random_tensor::<Q>(&mut rng, 3, V01));
        let source = SpaceFields::bare(ConnectionSpace::new(l).unwrap());
        let mut target = source.clone();
        target.u = psi.clone();
        let full = target_full_connection(&source, &target, &Jet::zeros(3, V12), Flags::geodesic())
            .unwrap();
        let image = ConnectionSpace::new(full).unwrap();
        let diff = image.sym().value().sub(source.connection.sym().value());
        for ix in crate::tensor::multi_indices(3, 3) {
            let (i, j, k) = (ix[0], ix[1], ix[2]);
            let mut want = Q::zero();
            if i == j {
                want += psi.value().get(&[k]);
            }
            if i == k {
                want += psi.value().get(&[j]);
            }
            assert_eq!(diff.get(&ix), &want);
        }
        assert_eq!(image.sym().grad(), source.connection.sym().grad());
    }

    #[test]
    fn symmetrized_rule_is_recovered_by_split() {
        for flags in Flags::all() {
            let inst = generate::<Q>(opts(3, 11, flags)).unwrap();
            let (s, t) = (&inst.source, &inst.target);
            let psi = t.u.sub(&s.u);
            let mut want = s
                .connection
                .sym()
                .add(&delta_sym(&psi).unwrap().scale(&Flags::coef(flags.s1)));
            let fs = affinor_product(&t.f, &t.sigma)
                .unwrap()
                .sub(&affinor_product(&s.f, &s.sigma).unwrap());
            want = want.add(&fs.scale(&Flags::coef(flags.s2)));
            want = want.add(&t.phi.sub(&s.phi).scale(&Flags::coef(flags.s3)));
            assert_eq!(t.connection.sym(), &want, "{flags}");
        }
    }

    #[test]
    fn xi_only_changes_torsion() {
        let inst = generate::<Q>(opts(3, 5, Flags::all()[7])).unwrap();
        let mut no_xi = inst.clone();
        no_xi.xi = Jet::zeros(3, V12);
        let a = build_target_connection(&inst).unwrap();
        let b = build_target_connection(&no_xi).unwrap();
        assert_eq!(a.sym(), b.sym());
        assert_ne!(a.torsion_part(), b.torsion_part());
    }

    #[test]
    fn generator_is_deterministic() {
        let a = generate::<Q>(opts(4, 9, Flags::all()[6])).unwrap();
        let b = generate::<Q>(opts(4, 9, Flags::all()[6])).unwrap();
        assert_eq!(a.target.connection.full(), b.target.connection.full());
        assert_eq!(a.target.phi, b.target.phi);
        let c = generate::<Q>(opts(4, 10, Flags::all()[6])).unwrap();
        assert_ne!(a.source.connection.full(), c.source.connection.full());
    }

    #[test]
    fn generated_fields_have_declared_symmetries() {
        let inst = generate::<Q>(opts(4, 2, Flags::all()[7])).unwrap();
        check_symmetric_lower(&inst.source.phi, "phi").unwrap();
        check_symmetric_lower(&inst.target.phi, "phi_bar").unwrap();
        check_antisymmetric_lower(&inst.xi, "xi").unwrap();
    }

    #[test]
    fn integrability_conditions_hold() {
        for flags in Flags::all() {
            let inst = generate::<Q>(opts(4, 21, flags)).unwrap();
            let psi = inst.target.u.sub(&inst.source.u);
            assert!(psi.exterior_derivative().unwrap().is_zero());
            let d = deformation_object(&inst.target, flags)
                .unwrap()
                .contract(0, 1)
                .unwrap()
                .sub(
                    &deformation_object(&inst.source, flags)
                        .unwrap()
                        .contract(0, 1)
                        .unwrap(),
                );
            assert!(d.exterior_derivative().unwrap().is_zero(), "{flags}");
        }
    }

    #[test]
    fn psi_residual_vanishes_and_detects_perturbation() {
        let inst = generate::<Q>(opts(3, 4, Flags::all()[7])).unwrap();
        assert!(psi_residual(&inst).unwrap().is_zero());
        let mut bad = inst.clone();
        let mut v = bad.target.u.value().clone();
        v.set(&[0], v.get(&[0]).clone() + Q::ratio(1, 3));
        bad.target.u = Jet::new(v, bad.target.u.grad().clone()).unwrap();
        assert!(!psi_residual(&bad).unwrap().is_zero());
        let no_s1 = generate::<Q>(opts(3, 4, Flags::new(false, true, true))).unwrap();
        assert!(matches!(psi_residual(&no_s1), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn omega_geodesic_and_zero_cases() {
        let inst = generate::<Q>(opts(3, 8, Flags::geodesic())).unwrap();
        let w = omega(&inst.source, Flags::geodesic()).unwrap();
        let theta = inst.source.connection.theta();
        let want = delta_sym(theta).unwrap().scale(&Q::ratio(1, 4));
        assert_eq!(w, want);
        let zero = SpaceFields::bare(ConnectionSpace::new(Jet::<Q>::zeros(3, V12)).unwrap());
        let w0 = omega(&zero, Flags::all()[7]).unwrap();
        assert!(w0.value().is_zero() && w0.grad().is_zero());
    }

    #[test]
    fn omega_is_symmetric() {
        let inst = generate::<Q>(opts(4, 12, Flags::all()[7])).unwrap();
        let w = omega(&inst.source, Flags::all()[7]).unwrap();
        check_symmetric_lower(&w, "omega").unwrap();
    }

    #[test]
    fn target_connection_residual_is_zero_for_generated() {
        let inst = generate::<Q>(opts(3, 6, Flags::all()[5])).unwrap();
        let (v, g) = target_connection_residual(&inst).unwrap();
        assert!(v.is_zero() && g.is_zero());
    }

    #[test]
    fn rejects_bad_symmetry() {
        let inst = generate::<Q>(opts(3, 6, Flags::all()[7])).unwrap();
        let mut bad = inst.clone();
        bad.xi = symmetrize_pair(&random_jet::<Q>(&mut ChaCha8Rng::seed_from_u64(1), 3, V12));
        assert!(matches!(
            build_target_connection(&bad),
            Err(Error::Instance(_))
        ));
    }

    #[test]
    fn float_generation_matches_shapes() {
        let inst = generate::<f64>(opts(5, 1, Flags::all()[7])).unwrap();
        assert_eq!(inst.target.connection.dim(), 5);
        assert!(psi_residual(&inst).unwrap().max_abs() < 1e-12);
    }
}
