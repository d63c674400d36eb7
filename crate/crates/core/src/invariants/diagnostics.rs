//! Term tables comparing transcribed displays against the generic pipeline.
//!
//! The generic pipeline (jets, covariant derivatives, the `ω` rule) is the
//! reference. Each displayed formula is transcribed independently and the
//! residual against its generic counterpart is recorded. Rows are
//! informational and never affect the exit status of a check.

use serde::{Deserialize, Serialize};

use super::agm::{agm_closed_forms, AgmDecomposition};
use super::geodesic::{geodesic_thomas, geodesic_thomas_printed, geodesic_weyl, weyl_projective};
use super::{
    delta_bracket, delta_j, inv, last_trace, skew, sym_half, FactoredObjects, Printed,
    SpaceInvariants,
};
use crate::connection::ConnectionSpace;
use crate::error::Result;
use crate::jet::covariant_derivative;
use crate::mappings::agm::AgmSpaceData;
use crate::mappings::{Flags, MappingInstance, SpaceFields};
use crate::residual::{Residual, Tolerance};
use crate::scalar::{Mode, Scalar};
use crate::tensor::{Tensor, Valence};

/// One compared term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    /// Display the term belongs to.
    pub table: String,
    /// Term or group within the display; `total` for the whole expression.
    pub term: String,
    /// Label of the display in the source text.
    pub tag: String,
    /// `source`, `target`, or `pair` for invariance comparisons.
    pub space: String,
    pub residual: Residual,
    pub matches: bool,
}

/// Accumulates rows for one space.
pub struct Table<'a> {
    space: &'a str,
    mode: Mode,
    tol: Tolerance,
    rows: Vec<DiagnosticRow>,
}

impl<'a> Table<'a> {
    pub fn new(space: &'a str, mode: Mode, tol: Tolerance) -> Self {
        Self {
            space,
            mode,
            tol,
            rows: Vec::new(),
        }
    }

    pub fn compare<S: Scalar>(
        &mut self,
        table: &str,
        term: &str,
        tag: &str,
        printed: &Tensor<S>,
        generic: &Tensor<S>,
    ) -> Result<()> {
        let residual = Residual::between(printed, generic)?;
        self.rows.push(DiagnosticRow {
            table: table.to_string(),
            term: term.to_string(),
            tag: tag.to_string(),
            space: self.space.to_string(),
            matches: residual.passes(self.mode, &self.tol),
            residual,
        });
        Ok(())
    }

    pub fn into_rows(self) -> Vec<DiagnosticRow> {
        self.rows
    }
}

/// Covariant derivatives of the auxiliary fields used by the printed displays.
struct Derivatives<S: Scalar> {
    df: Tensor<S>,
    dsigma: Tensor<S>,
    dphi: Tensor<S>,
    /// `f_{,n}` of the trace `f = f^α_α`.
    trace_grad: Tensor<S>,
    theta_d: Tensor<S>,
}

impl<S: Scalar> Derivatives<S> {
    fn new(fields: &SpaceFields<S>) -> Result<Self> {
        let lsym = fields.connection.sym();
        Ok(Self {
            df: covariant_derivative(&fields.f, lsym)?,
            dsigma: covariant_derivative(&fields.sigma, lsym)?,
            dphi: covariant_derivative(&fields.phi, lsym)?,
            trace_grad: fields.f.contract(0, 0)?.grad().clone(),
            theta_d: covariant_derivative(fields.connection.theta(), lsym)?,
        })
    }
}

fn sum<S: Scalar>(n: usize, f: impl Fn(usize) -> S) -> S {
    (0..n).fold(S::zero(), |acc, a| acc + f(a))
}

/// `ρ_{ij} = s2(f^α_{i|j}σ_α + f_jσ_i + f^α_iσ_{α|j} + fσ_{i|j}) + s3φ^α_{iα|j}`.
fn rho_printed<S: Scalar>(pr: &Printed<S>, d: &Derivatives<S>) -> Tensor<S> {
    let n = pr.n;
    Tensor::from_fn(n, Valence::new(0, 2), |ix| {
        let (i, j) = (ix[0], ix[1]);
        let s2 = sum(n, |a| d.df.get(&[a, i, j]).clone() * pr.sigma.get(&[a]))
            + d.trace_grad.get(&[j]).clone() * pr.sigma.get(&[i])
            + sum(n, |a| pr.f.get(&[a, i]).clone() * d.dsigma.get(&[a, j]))
            + pr.trace_f.clone() * d.dsigma.get(&[i, j]);
        let s3 = sum(n, |a| d.dphi.get(&[a, i, a, j]).clone());
        pr.s2.clone() * s2 + pr.s3.clone() * s3
    })
}

/// The printed expansion of `ω^i_{jm|n}`.
fn omega_derivative_printed<S: Scalar>(
    pr: &Printed<S>,
    d: &Derivatives<S>,
    rho: &Tensor<S>,
) -> Tensor<S> {
    let n = pr.n;
    let c = inv::<S>(n + 1);
    Tensor::from_fn(n, Valence::new(1, 3), |ix| {
        let (i, j, m, k) = (ix[0], ix[1], ix[2], ix[3]);
        let s2 = d.df.get(&[i, j, k]).clone() * pr.sigma.get(&[m])
            + d.df.get(&[i, m, k]).clone() * pr.sigma.get(&[j])
            + pr.f.get(&[i, j]).clone() * d.dsigma.get(&[m, k])
            + pr.f.get(&[i, m]).clone() * d.dsigma.get(&[j, k]);
        let mut t = pr.s2.clone() * s2 + pr.s3.clone() * d.dphi.get(&[i, j, m, k]);
        if i == j {
            t = t + c.clone() * (d.theta_d.get(&[m, k]).clone() - rho.get(&[m, k]));
        }
        if i == m {
            t = t + c.clone() * (d.theta_d.get(&[j, k]).clone() - rho.get(&[j, k]));
        }
        t
    })
}

/// `τ_k` as printed: `L^α_{(kα)} - s2(f^α_kσ_α + fσ_k) - s3φ^α_{kα}`.
fn tau_printed<S: Scalar>(pr: &Printed<S>, theta: &Tensor<S>) -> Vec<S> {
    (0..pr.n)
        .map(|k| theta.get(&[k]).clone() - pr.trace_part(k))
        .collect()
}

/// The eight printed terms of `ω^α_{jm}ω^i_{αn}` with the fourth term read
/// through `Ω^α_{jm}τ_α`.
fn omega_omega_printed<S: Scalar>(pr: &Printed<S>, tau: &[S]) -> Vec<(&'static str, Tensor<S>)> {
    let n = pr.n;
    let c1 = inv::<S>(n + 1);
    let c2 = inv::<S>((n + 1) * (n + 1));
    let v13 = Valence::new(1, 3);
    let d = |a: usize, b: usize| a == b;
    let t = |k: usize| tau[k].clone();
    vec![
        (
            "tau_j tau_m delta_n",
            Tensor::from_fn(n, v13, |ix| {
                if d(ix[0], ix[3]) {
                    S::from_i64(2) * c2.clone() * t(ix[1]) * t(ix[2])
                } else {
                    S::zero()
                }
            }),
        ),
        (
            "tau_j tau_n delta_m",
            Tensor::from_fn(n, v13, |ix| {
                if d(ix[0], ix[2]) {
                    c2.clone() * t(ix[1]) * t(ix[3])
                } else {
                    S::zero()
                }
            }),
        ),
        (
            "tau_m tau_n delta_j",
            Tensor::from_fn(n, v13, |ix| {
                if d(ix[0], ix[1]) {
                    c2.clone() * t(ix[2]) * t(ix[3])
                } else {
                    S::zero()
                }
            }),
        ),
        (
            "Omega_jm tau delta_n",
            Tensor::from_fn(n, v13, |ix| {
                if d(ix[0], ix[3]) {
                    c1.clone() * sum(n, |a| pr.big_omega(a, ix[1], ix[2]) * t(a))
                } else {
                    S::zero()
                }
            }),
        ),
        (
            "tau_n Omega_jm",
            Tensor::from_fn(n, v13, |ix| {
                c1.clone() * t(ix[3]) * pr.big_omega(ix[0], ix[1], ix[2])
            }),
        ),
        (
            "tau_m Omega_jn",
            Tensor::from_fn(n, v13, |ix| {
                c1.clone() * t(ix[2]) * pr.big_omega(ix[0], ix[1], ix[3])
            }),
        ),
        (
            "tau_j Omega_mn",
            Tensor::from_fn(n, v13, |ix| {
                c1.clone() * t(ix[1]) * pr.big_omega(ix[0], ix[2], ix[3])
            }),
        ),
        (
            "Omega Omega",
            Tensor::from_fn(n, v13, |ix| {
                sum(n, |a| {
                    pr.big_omega(a, ix[1], ix[2]) * pr.big_omega(ix[0], a, ix[3])
                })
            }),
        ),
    ]
}

/// `ω^α_{jm}ω^i_{αn}` from the `ω` jet.
fn omega_omega_generic<S: Scalar>(omega: &Tensor<S>) -> Tensor<S> {
    let n = omega.dim();
    Tensor::from_fn(n, Valence::new(1, 3), |ix| {
        sum(n, |a| {
            omega.get(&[a, ix[1], ix[2]]).clone() * omega.get(&[ix[0], a, ix[3]])
        })
    })
}

/// `S̃_{ij} = (N+1)τ_αΩ^α_{ij} + τ_iτ_j` from printed brackets.
fn s_printed<S: Scalar>(pr: &Printed<S>, tau: &[S]) -> Tensor<S> {
    let n = pr.n;
    let np1 = S::from_usize(n + 1);
    Tensor::from_fn(n, Valence::new(0, 2), |ix| {
        let (i, j) = (ix[0], ix[1]);
        np1.clone() * sum(n, |a| tau[a].clone() * pr.big_omega(a, i, j))
            + tau[i].clone() * tau[j].clone()
    })
}

/// The printed `𝒜^i_{jmn}` in terms of `f`, `σ`, `φ` and their derivatives.
fn a_printed<S: Scalar>(pr: &Printed<S>, d: &Derivatives<S>) -> Tensor<S> {
    let n = pr.n;
    Tensor::from_fn(n, Valence::new(1, 3), |ix| {
        let (i, j, m, k) = (ix[0], ix[1], ix[2], ix[3]);
        let f = |a: usize, b: usize| pr.f.get(&[a, b]).clone();
        let sg = |a: usize| pr.sigma.get(&[a]).clone();
        let df = |a: usize, b: usize, c: usize| d.df.get(&[a, b, c]).clone();
        let ds = |a: usize, b: usize| d.dsigma.get(&[a, b]).clone();
        let s2 = (df(i, m, k) - df(i, k, m)) * sg(j) - (df(i, j, m) * sg(k) - df(i, j, k) * sg(m))
            + f(i, j) * (ds(m, k) - ds(k, m))
            + (f(i, m) * ds(j, k) - f(i, k) * ds(j, m));
        let s3 = d.dphi.get(&[i, j, m, k]).clone() - d.dphi.get(&[i, j, k, m]);
        let quad = sum(n, |a| {
            pr.big_omega(a, j, m) * pr.big_omega(i, a, k)
                - pr.big_omega(a, j, k) * pr.big_omega(i, a, m)
        });
        -(pr.s2.clone() * s2) - pr.s3.clone() * s3 + quad
    })
}

/// Rows comparing the displays of the general rule with the generic pipeline
/// in one space.
pub fn general_rows<S: Scalar>(
    fields: &SpaceFields<S>,
    flags: Flags,
    inv: &SpaceInvariants<S>,
    table: &mut Table<'_>,
) -> Result<()> {
    let pr = Printed::new(fields, flags);
    let d = Derivatives::new(fields)?;
    let obj = &inv.objects;
    let space = &fields.connection;
    let rho = rho_printed(&pr, &d);
    table.compare("rho", "total", "Wbasicfactoredrho", &rho, &obj.rho)?;
    let tau = tau_printed(&pr, space.theta().value());
    table.compare(
        "S_tilde",
        "total",
        "WbasicfactoredS",
        &s_printed(&pr, &tau),
        &obj.s_tilde,
    )?;
    table.compare(
        "A",
        "total",
        "WbasicfactoredA",
        &a_printed(&pr, &d),
        &obj.a_tensor,
    )?;
    let dw = covariant_derivative(&obj.omega, space.sym())?;
    table.compare(
        "omega_derivative",
        "total",
        "omegaijm|nfactored",
        &omega_derivative_printed(&pr, &d, &rho),
        &dw,
    )?;
    let terms = omega_omega_printed(&pr, &tau);
    let total = terms
        .iter()
        .skip(1)
        .fold(terms[0].1.clone(), |acc, (_, t)| acc.add(t));
    table.compare(
        "omega_omega",
        "total",
        "omegaomegafactored",
        &total,
        &omega_omega_generic(obj.omega.value()),
    )?;
    // Intermediate form with the extra `δ^i_j ρ_[mn]` bracket term.
    let pre_final = inv
        .weyl_factored
        .sub(&delta_j(&skew(&obj.rho))?.scale(&super::inv(obj.dim + 1)));
    table.compare(
        "weyl_pre_final",
        "total",
        "Wbasicfactored",
        &pre_final,
        &inv.weyl_basic,
    )?;
    table.compare(
        "weyl_final",
        "total",
        "Wbasicfactoredfinal",
        &inv.weyl_factored,
        &inv.weyl_basic,
    )?;
    corollary_rows(
        space,
        obj,
        inv,
        &trivial_decomposition(obj),
        table,
        "generic",
    )?;
    if !flags.s2 && !flags.s3 {
        let lsym = space.sym().value();
        table.compare(
            "geodesic_thomas",
            "total",
            "Thomasprojp",
            &geodesic_thomas_printed(lsym)?,
            &geodesic_thomas(lsym)?,
        )?;
        table.compare(
            "geodesic_thomas",
            "factored",
            "ThomasBasicsim2factoredsim",
            &inv.thomas_factored,
            &geodesic_thomas(lsym)?,
        )?;
        table.compare(
            "geodesic_weyl",
            "total",
            "Weylprojtstart",
            &geodesic_weyl(space)?,
            &inv.weyl_basic,
        )?;
    }
    Ok(())
}

/// `𝒫 = 0`, `𝒬 = 0`, `𝒩 = 𝒜`.
fn trivial_decomposition<S: Scalar>(obj: &FactoredObjects<S>) -> AgmDecomposition<S> {
    AgmDecomposition {
        p: Tensor::zeros(obj.dim, Valence::new(0, 2)),
        q: Tensor::zeros(obj.dim, Valence::new(0, 2)),
        n: obj.a_tensor.clone(),
    }
}

/// The three corollary forms for a decomposition of `𝒜`.
pub struct CorollaryForms<S: Scalar> {
    pub basic: Tensor<S>,
    pub fourth: Tensor<S>,
    pub first_over: Tensor<S>,
}

pub fn corollary_forms<S: Scalar>(
    space: &ConnectionSpace<S>,
    obj: &FactoredObjects<S>,
    dec: &AgmDecomposition<S>,
) -> Result<CorollaryForms<S>> {
    let n = obj.dim;
    let r = space.curvature();
    let pq_n = delta_j(&skew(&dec.p))?
        .add(&delta_bracket(&dec.q)?)
        .add(&dec.n);
    let n_trace = sym_half(&last_trace(&dec.n)?);
    let basic = r.add(&obj.theta_rho_term()).add(&obj.s_term()).add(&pq_n);
    let fourth = r
        .add(&delta_bracket(&space.ricci_sym())?.scale(&inv(n - 1)))
        .add(&delta_j(&skew(&dec.p))?)
        .add(&dec.n)
        .add(&delta_bracket(&n_trace)?.scale(&inv(n - 1)));
    let first_over = r
        .add(&obj.theta_rho_term())
        .add(&pq_n)
        .add(&delta_bracket(&sym_half(&dec.q))?.scale(&inv((n + 1) * (n + 1))))
        .sub(&delta_bracket(&n_trace)?.scale(&inv((n + 1) * (n + 1) * (n - 1))));
    Ok(CorollaryForms {
        basic,
        fourth,
        first_over,
    })
}

fn corollary_rows<S: Scalar>(
    space: &ConnectionSpace<S>,
    obj: &FactoredObjects<S>,
    inv: &SpaceInvariants<S>,
    dec: &AgmDecomposition<S>,
    table: &mut Table<'_>,
    term: &str,
) -> Result<()> {
    let forms = corollary_forms(space, obj, dec)?;
    table.compare(
        "corollary_basic",
        term,
        "FW1(P,Q)",
        &forms.basic,
        &inv.weyl_factored,
    )?;
    table.compare(
        "corollary_fourth",
        term,
        "FW4(P,Q)",
        &forms.fourth,
        &inv.weyl_fourth,
    )?;
    table.compare(
        "corollary_first_over",
        term,
        "FW1[1](P,Q)",
        &forms.first_over,
        &inv.weyl_first_over,
    )?;
    Ok(())
}

/// Rows comparing the almost-geodesic closed forms with the generic pipeline
/// in one space.
pub fn agm_rows<S: Scalar>(
    space: &ConnectionSpace<S>,
    data: &AgmSpaceData<S>,
    inv: &SpaceInvariants<S>,
    table: &mut Table<'_>,
) -> Result<()> {
    let obj = &inv.objects;
    let n = obj.dim;
    let closed = agm_closed_forms(space, data)?;
    let a_gen = &obj.a_tensor;
    let r = space.curvature();

    table.compare("agm_rho", "first", "pi3rhoij", &closed.rho_first, &obj.rho)?;
    table.compare(
        "agm_rho",
        "second",
        "pi3rhoij",
        &closed.rho_second,
        &obj.rho,
    )?;
    table.compare("agm_S", "total", "pi3Sij", &closed.s_tilde, &obj.s_tilde)?;
    table.compare("agm_A", "first", "pi3Aijmn", &closed.a_first, a_gen)?;
    table.compare("agm_A", "second", "pi3Aijmn", &closed.a_second, a_gen)?;
    table.compare("agm_A", "derived", "pi3Aijmn", &closed.a_derived, a_gen)?;
    table.compare(
        "agm_PQN",
        "reconstruction",
        "pi3P,Q,N",
        &closed.decomposition.reconstruct()?,
        &closed.a_second,
    )?;
    table.compare(
        "agm_PQN",
        "trace",
        "A(P,Q)i=nsim",
        &closed.decomposition.trace_sym()?,
        &sym_half(&last_trace(&closed.a_second)?),
    )?;

    let basic = &closed.basic;
    let want: [(&str, Tensor<S>); 4] = [
        ("R", r.clone()),
        ("A", a_gen.clone()),
        ("theta_rho", obj.theta_rho_term()),
        ("S", obj.s_term()),
    ];
    for (term, generic) in &want {
        table.compare(
            "pi3basic",
            term,
            "pi3basic",
            basic.group(term).expect("group"),
            generic,
        )?;
    }
    table.compare(
        "pi3basic",
        "total",
        "pi3basic",
        &basic.total,
        &inv.weyl_factored,
    )?;
    let with_generic_a = basic.total.sub(&closed.a_second).add(a_gen);
    table.compare(
        "pi3basic",
        "total with generic A",
        "pi3basic",
        &with_generic_a,
        &inv.weyl_factored,
    )?;

    let fourth = &closed.fourth;
    let c = super::inv::<S>(n - 1);
    let r4 = r.add(&delta_bracket(&space.ricci_sym())?.scale(&c));
    let a4 = a_gen.add(&delta_bracket(&obj.a_trace_sym())?.scale(&c));
    table.compare(
        "pi3condinv4",
        "R",
        "pi3condinv4",
        fourth.group("R").expect("group"),
        &r4,
    )?;
    table.compare(
        "pi3condinv4",
        "A",
        "pi3condinv4",
        fourth.group("A").expect("group"),
        &a4,
    )?;
    table.compare(
        "pi3condinv4",
        "total",
        "pi3condinv4",
        &fourth.total,
        &inv.weyl_fourth,
    )?;

    let over = &closed.first_over;
    let trace_gen = delta_bracket(&obj.a_trace_sym())?.scale(&-super::inv::<S>((n + 1) * (n + 1)));
    let want: [(&str, Tensor<S>); 4] = [
        ("R", r.clone()),
        ("theta_rho", obj.theta_rho_term()),
        ("A", a_gen.clone()),
        ("A_trace", trace_gen),
    ];
    for (term, generic) in &want {
        table.compare(
            "first_over",
            term,
            "FW1[1]",
            over.group(term).expect("group"),
            generic,
        )?;
    }
    table.compare(
        "first_over",
        "total",
        "FW1[1]",
        &over.total,
        &inv.weyl_first_over,
    )?;

    corollary_rows(space, obj, inv, &closed.decomposition, table, "closed")?;
    let forms = corollary_forms(space, obj, &closed.decomposition)?;
    table.compare(
        "corollary_basic",
        "closed vs pi3basic",
        "FW1(P,Q)",
        &forms.basic,
        &basic.total,
    )?;
    table.compare(
        "corollary_fourth",
        "closed vs pi3condinv4",
        "FW4(P,Q)",
        &forms.fourth,
        &fourth.total,
    )?;
    table.compare(
        "corollary_first_over",
        "closed vs printed",
        "FW1[1](P,Q)",
        &forms.first_over,
        &over.total,
    )?;

    omega_term4_literal(space, data, obj, table)?;
    Ok(())
}

/// The fourth term of the `ω^α_{jm}ω^i_{αn}` display read literally with
/// `s3σ_{jm}φ^α` and `s3σ_{αβ}φ^β` in place of `s3φ^α_{jm}` and `s3φ^β_{αβ}`.
fn omega_term4_literal<S: Scalar>(
    space: &ConnectionSpace<S>,
    data: &AgmSpaceData<S>,
    obj: &FactoredObjects<S>,
    table: &mut Table<'_>,
) -> Result<()> {
    let n = obj.dim;
    let c = inv::<S>(n + 1);
    let phi = data.phi.value();
    let sigma = data.sigma.value();
    let theta = space.theta().value();
    let tau_lit: Vec<S> = (0..n)
        .map(|a| theta.get(&[a]).clone() - sum(n, |b| sigma.get(&[a, b]).clone() * phi.get(&[b])))
        .collect();
    let tau = obj.tau.value();
    let bo = obj.big_omega.value();
    let v13 = Valence::new(1, 3);
    let literal = Tensor::from_fn(n, v13, |ix| {
        if ix[0] != ix[3] {
            return S::zero();
        }
        let s = sigma.get(&[ix[1], ix[2]]).clone();
        c.clone() * sum(n, |a| s.clone() * phi.get(&[a]) * tau_lit[a].clone())
    });
    let generic = Tensor::from_fn(n, v13, |ix| {
        if ix[0] != ix[3] {
            return S::zero();
        }
        c.clone() * sum(n, |a| bo.get(&[a, ix[1], ix[2]]).clone() * tau.get(&[a]))
    });
    table.compare(
        "omega_omega",
        "term 4 literal",
        "omegaomegafactored",
        &literal,
        &generic,
    )
}

/// Source-versus-target residuals of objects that are not certified
/// invariants of the instance's mapping class.
pub fn pair_rows<S: Scalar>(
    inst: &MappingInstance<S>,
    source: &SpaceInvariants<S>,
    target: &SpaceInvariants<S>,
    table: &mut Table<'_>,
) -> Result<()> {
    let (s, t) = (&inst.source.connection, &inst.target.connection);
    if !inst.flags.s2 && !inst.flags.s3 {
        table.compare(
            "geodesic_weyl",
            "invariance",
            "Weylprojtstart",
            &geodesic_weyl(s)?,
            &geodesic_weyl(t)?,
        )?;
        table.compare(
            "weyl_projective",
            "invariance",
            "Weylprojtstart",
            &weyl_projective(s.curvature(), s.ricci())?,
            &weyl_projective(t.curvature(), t.ricci())?,
        )?;
    }
    if inst.flags.s1 {
        table.compare(
            "theta_tilde",
            "invariance",
            "thetainvantisim",
            &source.theta_tilde,
            &target.theta_tilde,
        )?;
        table.compare(
            "thomas_star",
            "invariance",
            "basicthomass1=0",
            &source.thomas_star,
            &target.thomas_star,
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::agm::generate_agm3;
    use crate::mappings::{generate, GenOptions, MappingKind};
    use crate::Rational as Q;

    fn rows_for(inst: &MappingInstance<Q>) -> Vec<DiagnosticRow> {
        let inv = SpaceInvariants::evaluate(&inst.source, inst.flags).unwrap();
        let mut table = Table::new("source", Mode::Rational, Tolerance::default());
        general_rows(&inst.source, inst.flags, &inv, &mut table).unwrap();
        if let Some(agm) = &inst.agm {
            agm_rows(
                &inst.source.connection,
                &agm.source_data(),
                &inv,
                &mut table,
            )
            .unwrap();
        }
        table.into_rows()
    }

    fn find<'a>(rows: &'a [DiagnosticRow], table: &str, term: &str) -> &'a DiagnosticRow {
        rows.iter()
            .find(|r| r.table == table && r.term == term)
            .unwrap_or_else(|| panic!("missing row {table}/{term}"))
    }

    #[test]
    fn general_displays_match() {
        for flags in Flags::all() {
            let inst = generate::<Q>(GenOptions {
                dim: 3,
                seed: 11,
                flags,
                kind: MappingKind::General,
            })
            .unwrap();
            let rows = rows_for(&inst);
            for (table, term) in [
                ("rho", "total"),
                ("S_tilde", "total"),
                ("A", "total"),
                ("omega_derivative", "total"),
                ("omega_omega", "total"),
                ("corollary_basic", "generic"),
                ("corollary_fourth", "generic"),
            ] {
                assert!(find(&rows, table, term).matches, "{flags} {table}/{term}");
            }
        }
    }

    #[test]
    fn agm_rows_flag_the_expected_mismatches() {
        let inst = generate_agm3::<Q>(4, 2, 1, false).unwrap();
        let rows = rows_for(&inst);
        assert!(find(&rows, "agm_rho", "second").matches);
        assert!(find(&rows, "agm_S", "total").matches);
        assert!(find(&rows, "agm_A", "derived").matches);
        assert!(!find(&rows, "agm_A", "second").matches);
        assert!(find(&rows, "agm_PQN", "reconstruction").matches);
        assert!(find(&rows, "pi3basic", "theta_rho").matches);
        assert!(find(&rows, "pi3basic", "S").matches);
        assert!(!find(&rows, "pi3basic", "A").matches);
        assert!(find(&rows, "pi3basic", "total with generic A").matches);
    }
}
