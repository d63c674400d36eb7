//! Thomas- and Weyl-type invariants, evaluated in a single space.
//!
//! An invariant of a mapping is certified by evaluating it once with the
//! source fields and once with the image fields and comparing the results
//! (see [`crate::report`]). Bracket conventions follow [`crate::tensor`]:
//! `δ^i_{[m}Y_{jn]} = δ^i_m Y_{jn} - δ^i_n Y_{jm}`.

pub mod agm;
pub mod derived;
pub mod diagnostics;
pub mod geodesic;

use crate::connection::ConnectionSpace;
use crate::error::{Error, Result};
use crate::jet::{covariant_derivative, Jet};
use crate::mappings::{self, Flags, SpaceFields};
use crate::scalar::Scalar;
use crate::tensor::{Slot, Symmetrization, Tensor, Valence};

pub use derived::{derived_invariants, DerivedInvariants, XyzDecomposition};

const V02: Valence = Valence::new(0, 2);
const V13: Valence = Valence::new(1, 3);

pub(crate) fn inv<S: Scalar>(k: usize) -> S {
    S::one() / S::from_usize(k)
}

fn check_02<S: Scalar>(t: &Tensor<S>, what: &str) -> Result<()> {
    if t.valence() != V02 {
        return Err(Error::Shape(format!(
            "{what} must be (0,2), got {}",
            t.valence()
        )));
    }
    Ok(())
}

/// `δ^i_m Y_{jn}`.
pub fn delta_m<S: Scalar>(y: &Tensor<S>) -> Result<Tensor<S>> {
    check_02(y, "bracket argument")?;
    Ok(Tensor::from_fn(y.dim(), V13, |ix| {
        if ix[0] == ix[2] {
            y.get(&[ix[1], ix[3]]).clone()
        } else {
            S::zero()
        }
    }))
}

/// `δ^i_{[m}Y_{jn]} = δ^i_m Y_{jn} - δ^i_n Y_{jm}`.
pub fn delta_bracket<S: Scalar>(y: &Tensor<S>) -> Result<Tensor<S>> {
    delta_m(y)?.alternate(Slot::Lower(1), Slot::Lower(2))
}

/// `δ^i_{[m}X_{n]j} = δ^i_m X_{nj} - δ^i_n X_{mj}`.
pub fn delta_bracket_rev<S: Scalar>(x: &Tensor<S>) -> Result<Tensor<S>> {
    check_02(x, "bracket argument")?;
    delta_bracket(&x.swap_slots(Slot::Lower(0), Slot::Lower(1))?)
}

/// `δ^i_j X_{mn}`.
pub fn delta_j<S: Scalar>(x: &Tensor<S>) -> Result<Tensor<S>> {
    check_02(x, "delta_j argument")?;
    Ok(Tensor::from_fn(x.dim(), V13, |ix| {
        if ix[0] == ix[1] {
            x.get(&[ix[2], ix[3]]).clone()
        } else {
            S::zero()
        }
    }))
}

/// `X_{[mn]} = X_{mn} - X_{nm}` for a `(0,2)` tensor.
pub fn skew<S: Scalar>(x: &Tensor<S>) -> Tensor<S> {
    x.alternate(Slot::Lower(0), Slot::Lower(1))
        .expect("(0,2) tensor")
}

/// `X_{(mn)} = (X_{mn} + X_{nm}) / 2` for a `(0,2)` tensor.
pub fn sym_half<S: Scalar>(x: &Tensor<S>) -> Tensor<S> {
    x.sym_pair(Slot::Lower(0), Slot::Lower(1), Symmetrization::Half)
        .expect("(0,2) tensor")
}

/// `Z^α_{jnα}` of a `(1,3)` tensor.
pub fn last_trace<S: Scalar>(z: &Tensor<S>) -> Result<Tensor<S>> {
    z.contract(0, 2)
}

/// `Z^α_{αmn}` of a `(1,3)` tensor.
pub fn first_trace<S: Scalar>(z: &Tensor<S>) -> Result<Tensor<S>> {
    z.contract(0, 0)
}

/// `-w^i_{jm|n} + w^i_{jn|m} + w^α_{jm} w^i_{αn} - w^α_{jn} w^i_{αm}` for a
/// `(1,2)` jet `w`, covariant derivatives taken with `lsym`.
pub fn deformation_curvature<S: Scalar>(w: &Jet<S>, lsym: &Jet<S>) -> Result<Tensor<S>> {
    let dw = covariant_derivative(w, lsym)?;
    let v = w.value();
    let n = w.dim();
    let quad = Tensor::from_fn(n, V13, |ix| {
        let (i, j, m, k) = (ix[0], ix[1], ix[2], ix[3]);
        (0..n).fold(S::zero(), |acc, a| {
            acc + v.get(&[a, j, m]).clone() * v.get(&[i, a, k])
        })
    });
    quad.sub(&dw).alternate(Slot::Lower(1), Slot::Lower(2))
}

/// `T̃₍₂₎ = L^i_{(jk)} - ω^i_{jk}`.
pub fn thomas_basic<S: Scalar>(space: &ConnectionSpace<S>, omega: &Jet<S>) -> Result<Tensor<S>> {
    space.sym().value().try_sub(omega.value())
}

/// `T̃₍₃₎ = (L̄^i_{(jk)} + L^i_{(jk)}) / 2`, a quantity of the pair.
pub fn thomas_third<S: Scalar>(
    source: &ConnectionSpace<S>,
    target: &ConnectionSpace<S>,
) -> Result<Tensor<S>> {
    Ok(source
        .sym()
        .value()
        .try_add(target.sym().value())?
        .scale(&S::ratio(1, 2)))
}

/// `R - ω_{jm|n} + ω_{jn|m} + ω^α_{jm}ω^i_{αn} - ω^α_{jn}ω^i_{αm}`.
pub fn weyl_basic<S: Scalar>(space: &ConnectionSpace<S>, omega: &Jet<S>) -> Result<Tensor<S>> {
    Ok(space
        .curvature()
        .add(&deformation_curvature(omega, space.sym())?))
}

/// Values of `f`, `σ`, `φ` entering the printed single-space formulas.
pub(crate) struct Printed<'a, S: Scalar> {
    n: usize,
    s2: S,
    s3: S,
    f: &'a Tensor<S>,
    sigma: &'a Tensor<S>,
    phi: &'a Tensor<S>,
    trace_f: S,
}

impl<'a, S: Scalar> Printed<'a, S> {
    fn new(fields: &'a SpaceFields<S>, flags: Flags) -> Self {
        let f = fields.f.value();
        let n = fields.dim();
        let trace_f = (0..n).fold(S::zero(), |acc, a| acc + f.get(&[a, a]));
        Self {
            n,
            s2: Flags::coef(flags.s2),
            s3: Flags::coef(flags.s3),
            f,
            sigma: fields.sigma.value(),
            phi: fields.phi.value(),
            trace_f,
        }
    }

    /// `s2(f^i_j σ_k + f^i_k σ_j) + s3 φ^i_{jk}`
    fn big_omega(&self, i: usize, j: usize, k: usize) -> S {
        let fs = self.f.get(&[i, j]).clone() * self.sigma.get(&[k])
            + self.f.get(&[i, k]).clone() * self.sigma.get(&[j]);
        self.s2.clone() * fs + self.s3.clone() * self.phi.get(&[i, j, k])
    }

    /// `s2(f^α_k σ_α + f σ_k) + s3 φ^α_{kα}`
    fn trace_part(&self, k: usize) -> S {
        let mut fs = self.trace_f.clone() * self.sigma.get(&[k]);
        let mut ph = S::zero();
        for a in 0..self.n {
            fs = fs + self.f.get(&[a, k]).clone() * self.sigma.get(&[a]);
            ph = ph + self.phi.get(&[a, k, a]);
        }
        self.s2.clone() * fs + self.s3.clone() * ph
    }
}

/// `θ̃_i = L^α_{(iα)} - s2(f^α_i σ_α + f σ_i) - s3 φ^α_{iα}`.
pub fn theta_tilde<S: Scalar>(fields: &SpaceFields<S>, flags: Flags) -> Tensor<S> {
    let pr = Printed::new(fields, flags);
    let theta = fields.connection.theta().value();
    Tensor::from_fn(pr.n, Valence::new(0, 1), |ix| {
        theta.get(ix).clone() - pr.trace_part(ix[0])
    })
}

/// `T̃* = L^i_{(jk)} - s2(f^i_j σ_k + f^i_k σ_j) - s3 φ^i_{jk}`.
pub fn thomas_star<S: Scalar>(fields: &SpaceFields<S>, flags: Flags) -> Tensor<S> {
    let pr = Printed::new(fields, flags);
    let l = fields.connection.sym().value();
    Tensor::from_fn(pr.n, Valence::new(1, 2), |ix| {
        l.get(ix).clone() - pr.big_omega(ix[0], ix[1], ix[2])
    })
}

/// The factored Thomas invariant transcribed term by term:
/// `L - s2(fσ + fσ) - s3 φ - (δ^i_j[θ_k - ...] + δ^i_k[θ_j - ...]) / (N+1)`.
pub fn thomas_factored<S: Scalar>(fields: &SpaceFields<S>, flags: Flags) -> Tensor<S> {
    let pr = Printed::new(fields, flags);
    let theta_t = theta_tilde(fields, flags);
    let l = fields.connection.sym().value();
    let c = inv::<S>(pr.n + 1);
    Tensor::from_fn(pr.n, Valence::new(1, 2), |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        let mut bracket = S::zero();
        if i == j {
            bracket = bracket + theta_t.get(&[k]);
        }
        if i == k {
            bracket = bracket + theta_t.get(&[j]);
        }
        l.get(ix).clone() - pr.big_omega(i, j, k) - c.clone() * bracket
    })
}

/// The objects shared by the factored Weyl forms, computed once per space.
#[derive(Clone, Debug)]
pub struct FactoredObjects<S: Scalar> {
    pub dim: usize,
    /// `Ω^i_{jk} = s2(f^i_j σ_k + f^i_k σ_j) + s3 φ^i_{jk}`.
    pub big_omega: Jet<S>,
    /// `Ω^α_{kα}`.
    pub omega_trace: Jet<S>,
    /// `τ_k = θ_k - Ω^α_{kα}`, the bracket of the factored forms.
    pub tau: Jet<S>,
    /// `ω^i_{jk}` of the general rule.
    pub omega: Jet<S>,
    /// `θ_{j|n}` by the covector rule.
    pub theta_derivative: Tensor<S>,
    /// `ρ_{ij} = (Ω^α_{iα})_{|j}`.
    pub rho: Tensor<S>,
    /// `S̃_{ij} = (N+1) τ_α Ω^α_{ij} + τ_i τ_j`.
    pub s_tilde: Tensor<S>,
    /// `𝒜^i_{jmn} = -Ω_{jm|n} + Ω_{jn|m} + Ω^α_{jm}Ω^i_{αn} - Ω^α_{jn}Ω^i_{αm}`.
    pub a_tensor: Tensor<S>,
    /// `𝒜^α_{jnα}`.
    pub a_trace: Tensor<S>,
}

impl<S: Scalar> FactoredObjects<S> {
    pub fn compute(fields: &SpaceFields<S>, flags: Flags) -> Result<Self> {
        let n = fields.dim();
        let lsym = fields.connection.sym();
        let big_omega = mappings::deformation_object(fields, flags)?;
        let omega_trace = big_omega.contract(0, 1)?;
        let tau = fields.connection.theta().sub(&omega_trace);
        let omega = big_omega.add(&mappings::delta_sym(&tau)?.scale(&inv(n + 1)));
        let theta_derivative = covariant_derivative(fields.connection.theta(), lsym)?;
        let rho = covariant_derivative(&omega_trace, lsym)?;
        let t = tau.value();
        let bo = big_omega.value();
        let np1 = S::from_usize(n + 1);
        let s_tilde = Tensor::from_fn(n, V02, |ix| {
            let (i, j) = (ix[0], ix[1]);
            let contracted = (0..n).fold(S::zero(), |acc, a| {
                acc + t.get(&[a]).clone() * bo.get(&[a, i, j])
            });
            np1.clone() * contracted + t.get(&[i]).clone() * t.get(&[j])
        });
        let a_tensor = deformation_curvature(&big_omega, lsym)?;
        let a_trace = last_trace(&a_tensor)?;
        Ok(Self {
            dim: n,
            big_omega,
            omega_trace,
            tau,
            omega,
            theta_derivative,
            rho,
            s_tilde,
            a_tensor,
            a_trace,
        })
    }

    /// `𝒜^α_{(jn)α}`.
    pub fn a_trace_sym(&self) -> Tensor<S> {
        sym_half(&self.a_trace)
    }

    /// `-(δ^i_{[m}θ_{j|n]} - δ^i_{[m}ρ_{jn]}) / (N+1)`.
    pub fn theta_rho_term(&self) -> Tensor<S> {
        let y = self.theta_derivative.sub(&self.rho);
        delta_bracket(&y)
            .expect("(0,2)")
            .scale(&-inv::<S>(self.dim + 1))
    }

    /// `-δ^i_{[m}S̃_{jn]} / (N+1)²`.
    pub fn s_term(&self) -> Tensor<S> {
        let c = inv::<S>((self.dim + 1) * (self.dim + 1));
        delta_bracket(&self.s_tilde).expect("(0,2)").scale(&-c)
    }
}

/// `R + 𝒜 - (δ_{[m}θ_{j|n]} - δ_{[m}ρ_{jn]})/(N+1) - δ_{[m}S̃_{jn]}/(N+1)²`.
pub fn weyl_factored<S: Scalar>(space: &ConnectionSpace<S>, obj: &FactoredObjects<S>) -> Tensor<S> {
    space
        .curvature()
        .add(&obj.a_tensor)
        .add(&obj.theta_rho_term())
        .add(&obj.s_term())
}

/// `R + δ_{[m}R_{(jn)]}/(N-1) + 𝒜 + δ_{[m}𝒜^α_{(jn)]α}/(N-1)`.
pub fn weyl_fourth<S: Scalar>(space: &ConnectionSpace<S>, obj: &FactoredObjects<S>) -> Tensor<S> {
    let c = inv::<S>(obj.dim - 1);
    let y = space.ricci_sym().add(&obj.a_trace_sym());
    space
        .curvature()
        .add(&obj.a_tensor)
        .add(&delta_bracket(&y).expect("(0,2)").scale(&c))
}

/// `R - ((N+1)(δ_{[m}θ_{j|n]} - δ_{[m}ρ_{jn]}) + δ_{[m}𝒜^α_{(jn)]α})/(N+1)² + 𝒜`.
pub fn weyl_first_over<S: Scalar>(
    space: &ConnectionSpace<S>,
    obj: &FactoredObjects<S>,
) -> Tensor<S> {
    let c = inv::<S>((obj.dim + 1) * (obj.dim + 1));
    let trace_term = delta_bracket(&obj.a_trace_sym()).expect("(0,2)").scale(&-c);
    space
        .curvature()
        .add(&obj.a_tensor)
        .add(&obj.theta_rho_term())
        .add(&trace_term)
}

/// Every single-space invariant, computed once.
#[derive(Clone, Debug)]
pub struct SpaceInvariants<S: Scalar> {
    pub objects: FactoredObjects<S>,
    pub thomas_basic: Tensor<S>,
    pub thomas_factored: Tensor<S>,
    pub theta_tilde: Tensor<S>,
    pub thomas_star: Tensor<S>,
    pub weyl_basic: Tensor<S>,
    pub weyl_factored: Tensor<S>,
    pub weyl_fourth: Tensor<S>,
    pub weyl_first_over: Tensor<S>,
    pub skew_ricci: Tensor<S>,
    pub rho_skew: Tensor<S>,
    pub derived: DerivedInvariants<S>,
    pub geodesic_thomas: Tensor<S>,
}

impl<S: Scalar> SpaceInvariants<S> {
    pub fn evaluate(fields: &SpaceFields<S>, flags: Flags) -> Result<Self> {
        let space = &fields.connection;
        let objects = FactoredObjects::compute(fields, flags)?;
        let xyz = derived::xyz_weyl_basic(&objects);
        let derived = derived_invariants(&xyz, space.curvature(), &space.ricci_sym())?;
        Ok(Self {
            thomas_basic: thomas_basic(space, &objects.omega)?,
            thomas_factored: thomas_factored(fields, flags),
            theta_tilde: theta_tilde(fields, flags),
            thomas_star: thomas_star(fields, flags),
            weyl_basic: weyl_basic(space, &objects.omega)?,
            weyl_factored: weyl_factored(space, &objects),
            weyl_fourth: weyl_fourth(space, &objects),
            weyl_first_over: weyl_first_over(space, &objects),
            skew_ricci: space.skew_ricci().clone(),
            rho_skew: skew(&objects.rho),
            derived,
            geodesic_thomas: geodesic::geodesic_thomas(space.sym().value())?,
            objects,
        })
    }
}

/// Descriptor of one invariant in the catalogue used by reports and suites.
#[derive(Clone, Copy, Debug)]
pub struct InvariantSpec {
    pub name: &'static str,
    pub tag: &'static str,
    pub applies: fn(Flags) -> bool,
}

fn always(_: Flags) -> bool {
    true
}

fn without_s1(flags: Flags) -> bool {
    !flags.s1
}

fn geodesic_flags(flags: Flags) -> bool {
    !flags.s2 && !flags.s3
}

/// Invariants certified by `check`, sorted by name. `thomas.third` is a
/// quantity of the pair and is not stored in [`SpaceInvariants`].
pub const CATALOGUE: &[InvariantSpec] = &[
    InvariantSpec {
        name: "derived.w1",
        tag: "condinv1",
        applies: always,
    },
    InvariantSpec {
        name: "derived.w2",
        tag: "condinv2",
        applies: always,
    },
    InvariantSpec {
        name: "derived.w4",
        tag: "condinv4",
        applies: always,
    },
    InvariantSpec {
        name: "geodesic.thomas",
        tag: "Thomasprojp",
        applies: geodesic_flags,
    },
    InvariantSpec {
        name: "ricci.skew",
        tag: "R[ij]inv",
        applies: always,
    },
    InvariantSpec {
        name: "rho.skew",
        tag: "i=jWbasicfactor*",
        applies: always,
    },
    InvariantSpec {
        name: "theta_tilde",
        tag: "thetainvantisim",
        applies: without_s1,
    },
    InvariantSpec {
        name: "thomas.basic",
        tag: "basicThomas",
        applies: always,
    },
    InvariantSpec {
        name: "thomas.factored",
        tag: "ThomasBasicsim2factoredsim",
        applies: always,
    },
    InvariantSpec {
        name: "thomas.star",
        tag: "basicthomass1=0",
        applies: without_s1,
    },
    InvariantSpec {
        name: "thomas.third",
        tag: "basicThomas",
        applies: always,
    },
    InvariantSpec {
        name: "weyl.basic",
        tag: "Wbasic",
        applies: always,
    },
    InvariantSpec {
        name: "weyl.factored",
        tag: "Wbasicfactoredfinal",
        applies: always,
    },
    InvariantSpec {
        name: "weyl.first_over",
        tag: "FW1[1]",
        applies: always,
    },
    InvariantSpec {
        name: "weyl.fourth",
        tag: "FW4",
        applies: always,
    },
];

impl<S: Scalar> SpaceInvariants<S> {
    /// The tensor registered under a catalogue name.
    pub fn get(&self, name: &str) -> Option<&Tensor<S>> {
        Some(match name {
            "derived.w1" => &self.derived.w1,
            "derived.w2" => &self.derived.w2,
            "derived.w4" => &self.derived.w4,
            "geodesic.thomas" => &self.geodesic_thomas,
            "ricci.skew" => &self.skew_ricci,
            "rho.skew" => &self.rho_skew,
            "theta_tilde" => &self.theta_tilde,
            "thomas.basic" => &self.thomas_basic,
            "thomas.factored" => &self.thomas_factored,
            "thomas.star" => &self.thomas_star,
            "weyl.basic" => &self.weyl_basic,
            "weyl.factored" => &self.weyl_factored,
            "weyl.first_over" => &self.weyl_first_over,
            "weyl.fourth" => &self.weyl_fourth,
            _ => return None,
        })
    }
}
