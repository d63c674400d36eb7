//! Evaluation of parsed expressions against named jets and tensors.

use std::collections::BTreeMap;

use super::ast::{Expr, Func};
use crate::error::{Error, Result};
use crate::invariants::FactoredObjects;
use crate::jet::{covariant_derivative, Jet};
use crate::mappings::agm::AgmSpaceData;
use crate::mappings::{Flags, SpaceFields};
use crate::scalar::Scalar;
use crate::tensor::{Slot, Symmetrization, Tensor, Valence};

/// A bound name. Jets carry first derivatives, so `cd` and `pd` accept them;
/// plain tensors only take part in algebraic operations.
#[derive(Clone, Debug, PartialEq)]
pub enum Binding<S: Scalar> {
    Plain(Tensor<S>),
    Jet(Jet<S>),
}

impl<S: Scalar> Binding<S> {
    fn valence(&self) -> Valence {
        match self {
            Binding::Plain(t) => t.valence(),
            Binding::Jet(j) => j.valence(),
        }
    }

    fn dim(&self) -> usize {
        match self {
            Binding::Plain(t) => t.dim(),
            Binding::Jet(j) => j.dim(),
        }
    }

    fn into_plain(self) -> Tensor<S> {
        match self {
            Binding::Plain(t) => t,
            Binding::Jet(j) => j.into_parts().0,
        }
    }

    fn lift(
        &self,
        f: impl Fn(&Tensor<S>) -> Result<Tensor<S>>,
        g: impl Fn(&Jet<S>) -> Result<Jet<S>>,
    ) -> Result<Self> {
        Ok(match self {
            Binding::Plain(t) => Binding::Plain(f(t)?),
            Binding::Jet(j) => Binding::Jet(g(j)?),
        })
    }

    fn contract(&self, upper: usize, lower: usize) -> Result<Self> {
        self.lift(|t| t.contract(upper, lower), |j| j.contract(upper, lower))
    }

    fn swap(&self, a: Slot, b: Slot) -> Result<Self> {
        self.lift(|t| t.swap_slots(a, b), |j| j.swap_slots(a, b))
    }

    fn scale(&self, factor: &S) -> Self {
        match self {
            Binding::Plain(t) => Binding::Plain(t.scale(factor)),
            Binding::Jet(j) => Binding::Jet(j.scale(factor)),
        }
    }

    fn combine(
        self,
        other: Self,
        f: impl Fn(&Tensor<S>, &Tensor<S>) -> Result<Tensor<S>>,
        g: impl Fn(&Jet<S>, &Jet<S>) -> Result<Jet<S>>,
    ) -> Result<Self> {
        Ok(match (self, other) {
            (Binding::Jet(a), Binding::Jet(b)) => Binding::Jet(g(&a, &b)?),
            (a, b) => Binding::Plain(f(&a.into_plain(), &b.into_plain())?),
        })
    }
}

/// Names available to expressions, keyed by name and valence so one name
/// may denote related objects of different type (`R{i;jmn}`, `R{;jm}`).
#[derive(Clone, Debug)]
pub struct Env<S: Scalar> {
    dim: usize,
    bindings: BTreeMap<(String, usize, usize), Binding<S>>,
    connection: Option<Jet<S>>,
}

impl<S: Scalar> Env<S> {
    /// An environment holding only the Kronecker delta `d`.
    pub fn new(dim: usize) -> Self {
        let mut env = Self {
            dim,
            bindings: BTreeMap::new(),
            connection: None,
        };
        env.bindings.insert(
            ("d".into(), 1, 1),
            Binding::Jet(Jet::constant(Tensor::delta(dim))),
        );
        env
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bind(&mut self, name: &str, value: Binding<S>) -> Result<&mut Self> {
        if value.dim() != self.dim {
            return Err(Error::Eval(format!(
                "binding `{name}` has dimension {} but the environment has {}",
                value.dim(),
                self.dim
            )));
        }
        let v = value.valence();
        self.bindings
            .insert((name.to_string(), v.upper, v.lower), value);
        Ok(self)
    }

    pub fn bind_jet(&mut self, name: &str, jet: Jet<S>) -> Result<&mut Self> {
        self.bind(name, Binding::Jet(jet))
    }

    pub fn bind_tensor(&mut self, name: &str, tensor: Tensor<S>) -> Result<&mut Self> {
        self.bind(name, Binding::Plain(tensor))
    }

    /// Sets the symmetric connection used by `cd`.
    pub fn with_connection(&mut self, lsym: Jet<S>) -> Result<&mut Self> {
        if lsym.dim() != self.dim || lsym.valence() != Valence::new(1, 2) {
            return Err(Error::Eval(
                "cd connection must be a (1,2) jet in the environment's dimension".into(),
            ));
        }
        self.connection = Some(lsym);
        Ok(self)
    }

    /// Bound names with their valences, sorted.
    pub fn names(&self) -> Vec<(String, Valence)> {
        self.bindings
            .keys()
            .map(|(n, p, q)| (n.clone(), Valence::new(*p, *q)))
            .collect()
    }

    fn lookup(&self, name: &str, upper: usize, lower: usize) -> Result<&Binding<S>> {
        self.bindings
            .get(&(name.to_string(), upper, lower))
            .ok_or_else(|| {
                let known: Vec<String> = self
                    .bindings
                    .keys()
                    .filter(|(n, _, _)| n == name)
                    .map(|(_, p, q)| format!("({p},{q})"))
                    .collect();
                if known.is_empty() {
                    Error::Eval(format!("unbound name `{name}`"))
                } else {
                    Error::Eval(format!(
                        "`{name}` is not bound with valence ({upper},{lower}); available: {}",
                        known.join(", ")
                    ))
                }
            })
    }

    /// Every object of one space under its conventional name:
    ///
    /// | name | valence | object |
    /// |---|---|---|
    /// | `d` | (1,1) | Kronecker delta |
    /// | `L`, `Ls`, `Lt` | (1,2) | full connection, symmetric part, torsion half |
    /// | `theta` | (0,1) | `L^α_{kα}` of the symmetric part |
    /// | `R` | (1,3) / (0,2) | curvature / Ricci tensor `R^α_{jmα}` |
    /// | `u`, `sigma`, `tau` | (0,1) | auxiliary covectors and `τ = θ - Ω^α_{kα}` |
    /// | `f` | (1,1) | auxiliary affinor |
    /// | `phi`, `Omega`, `omega` | (1,2) | auxiliary tensor, `Ω` and `ω` |
    /// | `rho`, `S` | (0,2) | `ρ_{ij}` and `S̃_{ij}` (no derivatives) |
    /// | `A` | (1,3) | deformation curvature `𝒜` (no derivatives) |
    /// | `xi` | (1,2) | image torsion shift, when given |
    /// | `varphi`, `nu`, `mu`, `agm_sigma` | (1,0), (0,1), (0,0), (0,2) | almost geodesic data, when given |
    ///
    /// `cd` uses the symmetric part of the connection.
    pub fn for_space(
        fields: &SpaceFields<S>,
        flags: Flags,
        xi: Option<&Jet<S>>,
        agm: Option<&AgmSpaceData<S>>,
    ) -> Result<Self> {
        let space = &fields.connection;
        let obj = FactoredObjects::compute(fields, flags)?;
        let mut env = Self::new(space.dim());
        env.with_connection(space.sym().clone())?;
        env.bind_jet("L", space.full().clone())?
            .bind_jet("Ls", space.sym().clone())?
            .bind_jet("Lt", space.torsion_part().clone())?
            .bind_jet("theta", space.theta().clone())?
            .bind_tensor("R", space.curvature().clone())?
            .bind_tensor("R", space.ricci().clone())?
            .bind_jet("u", fields.u.clone())?
            .bind_jet("sigma", fields.sigma.clone())?
            .bind_jet("f", fields.f.clone())?
            .bind_jet("phi", fields.phi.clone())?
            .bind_jet("Omega", obj.big_omega.clone())?
            .bind_jet("omega", obj.omega.clone())?
            .bind_jet("tau", obj.tau.clone())?
            .bind_tensor("rho", obj.rho.clone())?
            .bind_tensor("S", obj.s_tilde.clone())?
            .bind_tensor("A", obj.a_tensor.clone())?;
        if let Some(xi) = xi {
            env.bind_jet("xi", xi.clone())?;
        }
        if let Some(agm) = agm {
            env.bind_jet("varphi", agm.phi.clone())?
                .bind_tensor("nu", agm.nu.clone())?
                .bind_tensor("mu", Tensor::scalar(space.dim(), agm.mu.clone()))?
                .bind_jet("agm_sigma", agm.sigma.clone())?;
        }
        Ok(env)
    }
}

/// Result of an evaluation: the tensor over the free indices, upper letters
/// sorted then lower letters sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated<S: Scalar> {
    pub upper: Vec<char>,
    pub lower: Vec<char>,
    pub tensor: Tensor<S>,
}

#[derive(Clone, Debug)]
struct Value<S: Scalar> {
    upper: Vec<char>,
    lower: Vec<char>,
    data: Binding<S>,
}

impl<S: Scalar> Value<S> {
    /// Contracts every letter that is both upper and lower.
    fn contract_repeated(mut self) -> Result<Self> {
        while let Some((i, j)) = self
            .upper
            .iter()
            .enumerate()
            .find_map(|(i, c)| self.lower.iter().position(|d| d == c).map(|j| (i, j)))
        {
            self.data = self.data.contract(i, j)?;
            self.upper.remove(i);
            self.lower.remove(j);
        }
        Ok(self)
    }

    fn check_labels(&self) -> Result<()> {
        for side in [&self.upper, &self.lower] {
            for (i, c) in side.iter().enumerate() {
                if side[..i].contains(c) {
                    return Err(Error::Eval(format!("index `{c}` repeated on one side")));
                }
            }
        }
        Ok(())
    }

    /// Permutes slots so the labels read `upper` then `lower`.
    fn reorder(mut self, upper: &[char], lower: &[char]) -> Result<Self> {
        let same = |labels: &mut Vec<char>,
                    target: &[char],
                    slot: fn(usize) -> Slot,
                    data: &mut Binding<S>| {
            let mut sorted_have = labels.clone();
            sorted_have.sort_unstable();
            let mut sorted_want = target.to_vec();
            sorted_want.sort_unstable();
            if sorted_have != sorted_want {
                return Err(Error::Eval(format!(
                    "free indices differ: {} vs {}",
                    String::from_iter(labels.iter()),
                    String::from_iter(target)
                )));
            }
            for (i, c) in target.iter().enumerate() {
                let j = labels.iter().position(|x| x == c).expect("same letters");
                if j != i {
                    *data = data.swap(slot(i), slot(j))?;
                    labels.swap(i, j);
                }
            }
            Ok(())
        };
        same(&mut self.upper, upper, Slot::Upper, &mut self.data)?;
        same(&mut self.lower, lower, Slot::Lower, &mut self.data)?;
        Ok(self)
    }

    fn slot_of(&self, c: char) -> Option<Slot> {
        if let Some(i) = self.upper.iter().position(|x| *x == c) {
            return Some(Slot::Upper(i));
        }
        self.lower.iter().position(|x| *x == c).map(Slot::Lower)
    }
}

fn literal<S: Scalar>(s: &str) -> Result<S> {
    S::parse_literal(s).ok_or_else(|| Error::Eval(format!("invalid number `{s}`")))
}

/// Evaluates `expr`; free indices of the result are sorted, uppers first.
pub fn evaluate<S: Scalar>(expr: &Expr, env: &Env<S>) -> Result<Evaluated<S>> {
    let v = eval(expr, env)?;
    let mut upper = v.upper.clone();
    let mut lower = v.lower.clone();
    upper.sort_unstable();
    lower.sort_unstable();
    let v = v.reorder(&upper, &lower)?;
    Ok(Evaluated {
        upper,
        lower,
        tensor: v.data.into_plain(),
    })
}

fn eval<S: Scalar>(expr: &Expr, env: &Env<S>) -> Result<Value<S>> {
    match expr {
        Expr::Number(s) => Ok(Value {
            upper: Vec::new(),
            lower: Vec::new(),
            data: Binding::Jet(Jet::constant(Tensor::scalar(env.dim, literal(s)?))),
        }),
        Expr::Ref { name, upper, lower } => {
            let data = env.lookup(name, upper.len(), lower.len())?.clone();
            let v = Value {
                upper: upper.clone(),
                lower: lower.clone(),
                data,
            };
            v.check_labels()?;
            v.contract_repeated()
        }
        Expr::Neg(a) => {
            let mut v = eval(a, env)?;
            v.data = v.data.scale(&-S::one());
            Ok(v)
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let a = eval(a, env)?;
            let b = eval(b, env)?.reorder(&a.upper, &a.lower)?;
            let data = if matches!(expr, Expr::Add(..)) {
                a.data
                    .combine(b.data, |x, y| x.try_add(y), |x, y| x.try_add(y))?
            } else {
                a.data
                    .combine(b.data, |x, y| x.try_sub(y), |x, y| x.try_sub(y))?
            };
            Ok(Value {
                upper: a.upper,
                lower: a.lower,
                data,
            })
        }
        Expr::Mul(a, b) => {
            let a = eval(a, env)?;
            let b = eval(b, env)?;
            let mut upper = a.upper;
            upper.extend(b.upper);
            let mut lower = a.lower;
            lower.extend(b.lower);
            let v = Value {
                upper,
                lower,
                data: a.data.combine(b.data, |x, y| x.outer(y), |x, y| x.mul(y))?,
            };
            v.check_labels()?;
            v.contract_repeated()
        }
        Expr::Div(a, n) => {
            let d: S = literal(n)?;
            if d.is_zero() {
                return Err(Error::Eval("division by zero".into()));
            }
            let mut v = eval(a, env)?;
            v.data = v.data.scale(&(S::one() / d));
            Ok(v)
        }
        Expr::Call { func, arg, indices } => {
            let v = eval(arg, env)?;
            match func {
                Func::Alt | Func::Sym => {
                    let (a, b) = (indices[0], indices[1]);
                    let (sa, sb) = match (v.slot_of(a), v.slot_of(b)) {
                        (Some(sa), Some(sb)) => (sa, sb),
                        _ => {
                            return Err(Error::Eval(format!(
                                "`{}` indices `{a}`, `{b}` are not free in its argument",
                                func.name()
                            )))
                        }
                    };
                    let data = if *func == Func::Alt {
                        v.data
                            .lift(|t| t.alternate(sa, sb), |j| j.alternate(sa, sb))?
                    } else {
                        v.data.lift(
                            |t| t.sym_pair(sa, sb, Symmetrization::Half),
                            |j| j.sym_pair(sa, sb, Symmetrization::Half),
                        )?
                    };
                    Ok(Value { data, ..v })
                }
                Func::Cd | Func::Pd => {
                    let k = indices[0];
                    let jet = match &v.data {
                        Binding::Jet(j) => j,
                        Binding::Plain(_) => {
                            return Err(Error::Eval(format!(
                                "`{}` needs an operand built from jets; `{arg}` has no derivatives",
                                func.name()
                            )))
                        }
                    };
                    let t = if *func == Func::Cd {
                        let lsym = env.connection.as_ref().ok_or_else(|| {
                            Error::Eval("`cd` needs a connection in the environment".into())
                        })?;
                        covariant_derivative(jet, lsym)?
                    } else {
                        jet.grad().clone()
                    };
                    let mut lower = v.lower;
                    lower.push(k);
                    let out = Value {
                        upper: v.upper,
                        lower,
                        data: Binding::Plain(t),
                    };
                    out.check_labels()?;
                    out.contract_repeated()
                }
            }
        }
    }
}

/// Value of `expr` with its derivative, when every operand carries one.
pub fn evaluate_jet<S: Scalar>(expr: &Expr, env: &Env<S>) -> Result<Option<Jet<S>>> {
    let v = eval(expr, env)?;
    let mut upper = v.upper.clone();
    let mut lower = v.lower.clone();
    upper.sort_unstable();
    lower.sort_unstable();
    Ok(match v.reorder(&upper, &lower)?.data {
        Binding::Jet(j) => Some(j),
        Binding::Plain(_) => None,
    })
}

impl<S: Scalar> Evaluated<S> {
    /// Entry at the given index values, in output order.
    pub fn get(&self, idx: &[usize]) -> &S {
        self.tensor.get(idx)
    }
}
