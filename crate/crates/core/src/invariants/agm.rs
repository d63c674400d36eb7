//! Closed forms of the auxiliary objects and Weyl-type invariants for
//! equitorsion almost geodesic mappings of the third type.
//!
//! With `s1 = 1, s2 = 0, s3 = 1` and `φ^i_{jk} = -σ_{jk}φ^i/2`, every object
//! of the general pipeline has a closed form in `σ`, `φ`, `ν`, `μ` and the
//! torsion `L∨`. The closed forms are transcribed term by term so they can be
//! compared against the generic pipeline in [`super::diagnostics`].
//! Throughout, `ε = (-1)^p` and
//! `φ^i_{|j} = ν_jφ^i + μδ^i_j + ε L∨^i_{αj}φ^α`.

use super::{delta_bracket, delta_j, inv, last_trace, skew, sym_half};
use crate::connection::ConnectionSpace;
use crate::error::{Error, Result};
use crate::jet::covariant_derivative;
use crate::mappings::agm::AgmSpaceData;
use crate::scalar::Scalar;
use crate::tensor::{Tensor, Valence};

const V02: Valence = Valence::new(0, 2);
const V13: Valence = Valence::new(1, 3);

/// `𝒜 = δ^i_j 𝒫_{[mn]} + δ^i_{[m}𝒬_{jn]} + 𝒩`.
#[derive(Clone, Debug, PartialEq)]
pub struct AgmDecomposition<S: Scalar> {
    pub p: Tensor<S>,
    pub q: Tensor<S>,
    pub n: Tensor<S>,
}

impl<S: Scalar> AgmDecomposition<S> {
    /// `δ^i_j 𝒫_{[mn]} + δ^i_{[m}𝒬_{jn]} + 𝒩`.
    pub fn reconstruct(&self) -> Result<Tensor<S>> {
        Ok(delta_j(&skew(&self.p))?
            .add(&delta_bracket(&self.q)?)
            .add(&self.n))
    }

    /// `-(N-1)𝒬_{(ij)} + 𝒩^α_{(ij)α}`, the symmetrized `(i, n)` trace.
    pub fn trace_sym(&self) -> Result<Tensor<S>> {
        let k = S::from_usize(self.n.dim() - 1);
        Ok(sym_half(&last_trace(&self.n)?).sub(&sym_half(&self.q).scale(&k)))
    }
}

/// One closed-form invariant split into named groups, together with the
/// total evaluated with the printed coefficients.
#[derive(Clone, Debug)]
pub struct ClosedForm<S: Scalar> {
    pub groups: Vec<(&'static str, Tensor<S>)>,
    pub total: Tensor<S>,
}

impl<S: Scalar> ClosedForm<S> {
    pub fn group(&self, name: &str) -> Option<&Tensor<S>> {
        self.groups.iter().find(|(n, _)| *n == name).map(|(_, t)| t)
    }

    pub fn group_sum(&self) -> Tensor<S> {
        let mut it = self.groups.iter();
        let first = it.next().expect("closed form has groups").1.clone();
        it.fold(first, |acc, (_, t)| acc.add(t))
    }
}

/// Closed forms of every almost-geodesic object in one space.
#[derive(Clone, Debug)]
pub struct AgmClosedForms<S: Scalar> {
    /// `-σ_{iα|j}φ^α/2 - σ_{iα}φ^α_{|j}/2`.
    pub rho_first: Tensor<S>,
    /// The same with `φ_{|j}` expanded through the defining equation.
    pub rho_second: Tensor<S>,
    /// `-(N+1)σ_{ij}φ^ατ_α/2 + τ_iτ_j` with `τ_k = θ_k + σ_{kα}φ^α/2`.
    pub s_tilde: Tensor<S>,
    /// The printed first line of `𝒜`.
    pub a_first: Tensor<S>,
    /// The printed second line `-μδ^i_{[m}σ_{jn]}/4 + 𝒩`.
    pub a_second: Tensor<S>,
    /// `-μδ^i_{[m}σ_{jn]}/2 + (σ_{jm|n} - σ_{jn|m})φ^i/2 + (σσ - σσ)φφ/4
    /// + (σ_{jm}(ν_nφ^i + εL∨φ) - (m ↔ n))/2`, derived from the definition of 𝒜.
    pub a_derived: Tensor<S>,
    pub decomposition: AgmDecomposition<S>,
    pub basic: ClosedForm<S>,
    pub fourth: ClosedForm<S>,
    pub first_over: ClosedForm<S>,
}

struct Ingredients<S: Scalar> {
    n: usize,
    eps: S,
    half: S,
    quarter: S,
    phi: Tensor<S>,
    dphi: Tensor<S>,
    sigma: Tensor<S>,
    dsigma: Tensor<S>,
    tors: Tensor<S>,
    nu: Tensor<S>,
    mu: S,
    theta_d: Tensor<S>,
    sphi: Vec<S>,
    tau: Vec<S>,
    /// `σ_{αβ}φ^αφ^β`
    sphiphi: S,
    /// `ν_αφ^α + ε L∨^β_{αβ}φ^α`
    nu_tors_phi: S,
}

impl<S: Scalar> Ingredients<S> {
    fn new(space: &ConnectionSpace<S>, data: &AgmSpaceData<S>) -> Result<Self> {
        if data.p != 1 && data.p != 2 {
            return Err(Error::Instance(format!(
                "almost geodesic kind must be 1 or 2, got {}",
                data.p
            )));
        }
        let n = space.dim();
        let lsym = space.sym();
        let phi = data.phi.value().clone();
        let sigma = data.sigma.value().clone();
        let tors = space.torsion_part().value().clone();
        let theta = space.theta().value();
        let eps = if data.p == 1 { -S::one() } else { S::one() };
        let sphi: Vec<S> = (0..n)
            .map(|k| {
                (0..n).fold(S::zero(), |acc, a| {
                    acc + sigma.get(&[k, a]).clone() * phi.get(&[a])
                })
            })
            .collect();
        let half = S::ratio(1, 2);
        let tau: Vec<S> = (0..n)
            .map(|k| theta.get(&[k]).clone() + half.clone() * sphi[k].clone())
            .collect();
        let sphiphi = (0..n).fold(S::zero(), |acc, a| acc + sphi[a].clone() * phi.get(&[a]));
        let mut nu_tors_phi = S::zero();
        for a in 0..n {
            let mut t = S::zero();
            for b in 0..n {
                t = t + tors.get(&[b, a, b]);
            }
            nu_tors_phi =
                nu_tors_phi + (data.nu.get(&[a]).clone() + eps.clone() * t) * phi.get(&[a]);
        }
        Ok(Self {
            n,
            eps,
            half,
            quarter: S::ratio(1, 4),
            dphi: covariant_derivative(&data.phi, lsym)?,
            dsigma: covariant_derivative(&data.sigma, lsym)?,
            theta_d: covariant_derivative(space.theta(), lsym)?,
            phi,
            sigma,
            tors,
            nu: data.nu.clone(),
            mu: data.mu.clone(),
            sphi,
            tau,
            sphiphi,
            nu_tors_phi,
        })
    }

    fn m02(&self, f: impl FnMut(&[usize]) -> S) -> Tensor<S> {
        Tensor::from_fn(self.n, V02, f)
    }

    fn m13(&self, f: impl FnMut(&[usize]) -> S) -> Tensor<S> {
        Tensor::from_fn(self.n, V13, f)
    }

    fn sum(&self, f: impl Fn(usize) -> S) -> S {
        (0..self.n).fold(S::zero(), |acc, a| acc + f(a))
    }

    fn phi(&self, i: usize) -> S {
        self.phi.get(&[i]).clone()
    }

    fn sig(&self, j: usize, m: usize) -> S {
        self.sigma.get(&[j, m]).clone()
    }

    /// `ν_nφ^i + ε L∨^i_{αn}φ^α`
    fn nu_tors(&self, i: usize, k: usize) -> S {
        let t = self.sum(|a| self.tors.get(&[i, a, k]).clone() * self.phi(a));
        self.nu.get(&[k]).clone() * self.phi(i) + self.eps.clone() * t
    }

    /// `X2_{jn} = σ_{jα|n}φ^α`
    fn x_dsigma(&self) -> Tensor<S> {
        self.m02(|ix| self.sum(|a| self.dsigma.get(&[ix[0], a, ix[1]]).clone() * self.phi(a)))
    }

    /// `X3_{jn} = σ_{jα}φ^αν_n`
    fn x_nu(&self) -> Tensor<S> {
        self.m02(|ix| self.sphi[ix[0]].clone() * self.nu.get(&[ix[1]]))
    }

    /// `X4_{jn} = σ_{jα}L∨^α_{βn}φ^β`
    fn x_tors(&self) -> Tensor<S> {
        self.m02(|ix| {
            let (j, k) = (ix[0], ix[1]);
            self.sum(|a| {
                self.sig(j, a) * self.sum(|b| self.tors.get(&[a, b, k]).clone() * self.phi(b))
            })
        })
    }

    /// `X5_{jn} = σ_{jn|α}φ^α`
    fn x_dsigma_last(&self) -> Tensor<S> {
        self.m02(|ix| self.sum(|a| self.dsigma.get(&[ix[0], ix[1], a]).clone() * self.phi(a)))
    }

    /// `X6_{jn} = σ_{jα}σ_{nβ}φ^αφ^β`
    fn x_sphi_sphi(&self) -> Tensor<S> {
        self.m02(|ix| self.sphi[ix[0]].clone() * self.sphi[ix[1]].clone())
    }

    fn tau_tau(&self) -> Tensor<S> {
        self.m02(|ix| self.tau[ix[0]].clone() * self.tau[ix[1]].clone())
    }

    fn phi_tau(&self) -> S {
        self.sum(|a| self.phi(a) * self.tau[a].clone())
    }

    /// `δ^i_{[m}σ_{jn]}`
    fn delta_sigma(&self) -> Tensor<S> {
        delta_bracket(&self.sigma).expect("(0,2)")
    }

    fn bracket(&self, x: &Tensor<S>) -> Tensor<S> {
        delta_bracket(x).expect("(0,2)")
    }

    fn rho_first(&self) -> Tensor<S> {
        let h = self.half.clone();
        self.m02(|ix| {
            let (i, j) = (ix[0], ix[1]);
            let a = self.sum(|a| self.dsigma.get(&[i, a, j]).clone() * self.phi(a));
            let b = self.sum(|a| self.sig(i, a) * self.dphi.get(&[a, j]));
            -(h.clone() * a) - h.clone() * b
        })
    }

    fn rho_second(&self) -> Tensor<S> {
        let h = self.half.clone();
        let (x2, x3, x4) = (self.x_dsigma(), self.x_nu(), self.x_tors());
        self.m02(|ix| {
            -(h.clone() * x2.get(ix))
                - h.clone() * x3.get(ix)
                - h.clone() * self.mu.clone() * self.sigma.get(ix)
                - h.clone() * self.eps.clone() * x4.get(ix)
        })
    }

    fn s_tilde(&self) -> Tensor<S> {
        let c = S::ratio(self.n as i64 + 1, 2);
        let pt = self.phi_tau();
        self.m02(|ix| {
            let (i, j) = (ix[0], ix[1]);
            -(c.clone() * self.sig(i, j) * pt.clone()) + self.tau[i].clone() * self.tau[j].clone()
        })
    }

    fn a_first(&self) -> Tensor<S> {
        let (h, q) = (self.half.clone(), self.quarter.clone());
        self.m13(|ix| {
            let (i, j, m, k) = (ix[0], ix[1], ix[2], ix[3]);
            let d = self.dsigma.get(&[j, m, k]).clone() * self.phi(i)
                + self.sig(j, m) * self.dphi.get(&[i, k]);
            let s = (self.sig(j, m) * self.sphi[k].clone() - self.sig(j, k) * self.sphi[m].clone())
                * self.phi(i);
            h.clone() * d + q.clone() * s
        })
    }

    /// `(σ_{jm|n} - σ_{jn|m})φ^i`, `(σσ - σσ)φφ` and `σ_{jm}(νφ + εL∨φ) - (m ↔ n)`.
    fn n_parts(&self) -> [Tensor<S>; 3] {
        let d = self.m13(|ix| {
            let (i, j, m, k) = (ix[0], ix[1], ix[2], ix[3]);
            (self.dsigma.get(&[j, m, k]).clone() - self.dsigma.get(&[j, k, m])) * self.phi(i)
        });
        let s = self.m13(|ix| {
            let (i, j, m, k) = (ix[0], ix[1], ix[2], ix[3]);
            (self.sig(j, m) * self.sphi[k].clone() - self.sig(j, k) * self.sphi[m].clone())
                * self.phi(i)
        });
        let t = self.m13(|ix| {
            let (i, j, m, k) = (ix[0], ix[1], ix[2], ix[3]);
            self.sig(j, m) * self.nu_tors(i, k) - self.sig(j, k) * self.nu_tors(i, m)
        });
        [d, s, t]
    }

    fn n_closed(&self) -> Tensor<S> {
        let [d, s, t] = self.n_parts();
        d.add(&s).add(&t).scale(&self.quarter)
    }

    fn a_derived(&self) -> Tensor<S> {
        let [d, s, t] = self.n_parts();
        let mu_part = self
            .delta_sigma()
            .scale(&(-(self.half.clone() * self.mu.clone())));
        mu_part
            .add(&d.scale(&self.half))
            .add(&s.scale(&self.quarter))
            .add(&t.scale(&self.half))
    }

    /// `δ_{[m}θ_{j|n]} + (δ_{[m}σ_{jα|n]} + δ_{[m}σ_{jα}ν_{n]})φ^α/2 + εδ_{[m}σ_{jα}L∨^α_{βn]}φ^β/2`
    fn theta_bracket(&self) -> Tensor<S> {
        let h = self.half.clone();
        let x = self
            .theta_d
            .add(&self.x_dsigma().scale(&h))
            .add(&self.x_nu().scale(&h))
            .add(&self.x_tors().scale(&(h.clone() * self.eps.clone())));
        self.bracket(&x)
    }
}

fn basic_form<S: Scalar>(g: &Ingredients<S>, r: &Tensor<S>, n_closed: &Tensor<S>) -> ClosedForm<S> {
    let n = g.n;
    let c1 = inv::<S>(n + 1);
    let c2 = inv::<S>((n + 1) * (n + 1));
    let ds = g.delta_sigma();
    let theta_b = g.theta_bracket();
    let s_part = ds
        .scale(&(inv::<S>(2 * (n + 1)) * g.phi_tau()))
        .sub(&g.bracket(&g.tau_tau()).scale(&c2));
    let a_part = ds.scale(&-(g.quarter.clone() * g.mu.clone())).add(n_closed);
    let rho_part = theta_b
        .scale(&-c1.clone())
        .sub(&ds.scale(&(inv::<S>(2 * (n + 1)) * g.mu.clone())));
    let mu_coef = S::ratio(n as i64 + 3, 4 * (n as i64 + 1));
    let total = r
        .sub(&ds.scale(&(mu_coef * g.mu.clone())))
        .add(n_closed)
        .sub(&theta_b.scale(&c1))
        .add(&s_part);
    ClosedForm {
        groups: vec![
            ("R", r.clone()),
            ("A", a_part),
            ("theta_rho", rho_part),
            ("S", s_part),
        ],
        total,
    }
}

fn fourth_form<S: Scalar>(
    g: &Ingredients<S>,
    r: &Tensor<S>,
    ricci: &Tensor<S>,
    n_closed: &Tensor<S>,
) -> ClosedForm<S> {
    let n = g.n;
    let c = inv::<S>(n - 1);
    let c4 = inv::<S>(4 * (n - 1));
    let ds = g.delta_sigma();
    let r_part = r.add(&g.bracket(ricci).scale(&c));
    let a_part = n_closed
        .add(&g.bracket(&g.x_dsigma_last().sub(&g.x_dsigma())).scale(&c4))
        .add(&ds.scale(&(c4.clone() * (g.sphiphi.clone() + g.nu_tors_phi.clone()))))
        .sub(
            &g.bracket(
                &g.x_sphi_sphi()
                    .add(&g.x_nu())
                    .add(&g.x_tors().scale(&g.eps)),
            )
            .scale(&c4),
        );
    let total = r_part.add(&a_part);
    ClosedForm {
        groups: vec![("R", r_part), ("A", a_part)],
        total,
    }
}

fn first_over_form<S: Scalar>(
    g: &Ingredients<S>,
    r: &Tensor<S>,
    n_closed: &Tensor<S>,
) -> ClosedForm<S> {
    let n = g.n;
    let np1 = (n + 1) as i64;
    let ds = g.delta_sigma();
    let c1 = inv::<S>(2 * (n + 1));
    let c = inv::<S>(4 * (n + 1) * (n + 1) * (n - 1));
    let inner = g
        .theta_d
        .scale(&S::from_i64(2))
        .add(&g.x_dsigma())
        .add(&g.x_nu())
        .add(&g.x_tors().scale(&g.eps));
    let theta_b = g.bracket(&inner);
    let rho_part = theta_b
        .scale(&-c1.clone())
        .sub(&ds.scale(&(c1.clone() * g.mu.clone())));
    let a_part = ds.scale(&-(g.quarter.clone() * g.mu.clone())).add(n_closed);
    let line1 = g
        .bracket(&g.x_dsigma_last().sub(&g.x_dsigma()))
        .add(&ds.scale(&g.sphiphi))
        .sub(&g.bracket(&g.x_sphi_sphi()));
    let line2 = ds
        .scale(&g.nu_tors_phi)
        .sub(&g.bracket(&g.x_nu()))
        .sub(&g.bracket(&g.x_tors()).scale(&g.eps));
    let tail = line1.add(&line2).scale(&-c);
    let trace_part = ds
        .scale(&-(S::ratio(1, 4 * np1 * np1) * g.mu.clone()))
        .add(&tail);
    let mu_coef = S::ratio((np1 + 1) * (np1 + 1), 4 * np1 * np1);
    let total = r
        .sub(&theta_b.scale(&c1))
        .sub(&ds.scale(&(mu_coef * g.mu.clone())))
        .add(n_closed)
        .add(&tail);
    ClosedForm {
        groups: vec![
            ("R", r.clone()),
            ("theta_rho", rho_part),
            ("A", a_part),
            ("A_trace", trace_part),
        ],
        total,
    }
}

/// Evaluates every closed form in `space` with the almost-geodesic data `data`
/// of that space.
pub fn agm_closed_forms<S: Scalar>(
    space: &ConnectionSpace<S>,
    data: &AgmSpaceData<S>,
) -> Result<AgmClosedForms<S>> {
    let g = Ingredients::new(space, data)?;
    let n_closed = g.n_closed();
    let q = g.sigma.scale(&-(g.quarter.clone() * g.mu.clone()));
    let decomposition = AgmDecomposition {
        p: Tensor::zeros(g.n, V02),
        q,
        n: n_closed.clone(),
    };
    let a_second = g
        .delta_sigma()
        .scale(&-(g.quarter.clone() * g.mu.clone()))
        .add(&n_closed);
    let r = space.curvature();
    Ok(AgmClosedForms {
        rho_first: g.rho_first(),
        rho_second: g.rho_second(),
        s_tilde: g.s_tilde(),
        a_first: g.a_first(),
        a_second,
        a_derived: g.a_derived(),
        basic: basic_form(&g, r, &n_closed),
        fourth: fourth_form(&g, r, space.ricci(), &n_closed),
        first_over: first_over_form(&g, r, &n_closed),
        decomposition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::FactoredObjects;
    use crate::mappings::agm::generate_agm3;
    use crate::Rational as Q;

    fn setup(
        p: u8,
        seed: u64,
    ) -> (
        crate::mappings::MappingInstance<Q>,
        FactoredObjects<Q>,
        AgmClosedForms<Q>,
    ) {
        let inst = generate_agm3::<Q>(4, seed, p, false).unwrap();
        let obj = FactoredObjects::compute(&inst.source, inst.flags).unwrap();
        let data = inst.agm.as_ref().unwrap().source_data();
        let closed = agm_closed_forms(&inst.source.connection, &data).unwrap();
        (inst, obj, closed)
    }

    #[test]
    fn rho_and_s_match_generic() {
        for p in [1, 2] {
            let (_, obj, closed) = setup(p, 3);
            assert_eq!(closed.rho_first, obj.rho);
            assert_eq!(closed.rho_second, obj.rho);
            assert_eq!(closed.s_tilde, obj.s_tilde);
        }
    }

    #[test]
    fn derived_a_matches_generic_and_printed_lines_do_not() {
        for p in [1, 2] {
            let (_, obj, closed) = setup(p, 4);
            assert_eq!(closed.a_derived, obj.a_tensor);
            assert_ne!(closed.a_second, obj.a_tensor);
            assert_ne!(closed.a_first, obj.a_tensor);
        }
    }

    #[test]
    fn reconstruction_and_trace() {
        let (_, _, closed) = setup(1, 5);
        let d = &closed.decomposition;
        assert_eq!(d.reconstruct().unwrap(), closed.a_second);
        let lhs = sym_half(&last_trace(&closed.a_second).unwrap());
        assert_eq!(lhs, d.trace_sym().unwrap());
    }

    #[test]
    fn group_sums_equal_printed_totals() {
        for p in [1, 2] {
            let (_, _, closed) = setup(p, 6);
            for form in [&closed.basic, &closed.fourth, &closed.first_over] {
                assert_eq!(form.group_sum(), form.total);
            }
        }
    }

    #[test]
    fn basic_groups_other_than_a_match_generic() {
        let (inst, obj, closed) = setup(2, 7);
        let r = inst.source.connection.curvature();
        assert_eq!(closed.basic.group("R").unwrap(), r);
        assert_eq!(
            closed.basic.group("theta_rho").unwrap(),
            &obj.theta_rho_term()
        );
        assert_eq!(closed.basic.group("S").unwrap(), &obj.s_term());
    }
}
