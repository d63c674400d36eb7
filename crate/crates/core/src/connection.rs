//! Non-symmetric affine connections: symmetric/torsion split, curvature of the
//! associated symmetric connection, Ricci contractions and the two flavours of
//! "derivative of the connection trace".

use crate::error::{Error, Result};
use crate::jet::{covariant_derivative, Jet};
use crate::scalar::Scalar;
use crate::tensor::{Slot, Symmetrization, Tensor, Valence};

const CONNECTION: Valence = Valence::new(1, 2);

fn check_connection<S: Scalar>(l: &Jet<S>) -> Result<()> {
    if l.valence() != CONNECTION {
        return Err(Error::Shape(format!(
            "connection coefficients must have valence (1,2), got {}",
            l.valence()
        )));
    }
    Ok(())
}

/// Half-sum and half-difference over the lower pair, at jet level.
pub fn split<S: Scalar>(full: &Jet<S>) -> Result<(Jet<S>, Jet<S>)> {
    check_connection(full)?;
    let sym = full.sym_pair(Slot::Lower(0), Slot::Lower(1), Symmetrization::Half)?;
    let tor = full
        .alternate(Slot::Lower(0), Slot::Lower(1))?
        .scale(&S::ratio(1, 2));
    Ok((sym, tor))
}

/// `R^i_{jmn} = L^i_{jm,n} - L^i_{jn,m} + L^α_{jm} L^i_{αn} - L^α_{jn} L^i_{αm}`.
pub fn curvature<S: Scalar>(lsym: &Jet<S>) -> Result<Tensor<S>> {
    check_connection(lsym)?;
    let n = lsym.dim();
    let (l, g) = (lsym.value(), lsym.grad());
    Ok(Tensor::from_fn(n, Valence::new(1, 3), |ix| {
        let (i, j, m, k) = (ix[0], ix[1], ix[2], ix[3]);
        let mut acc = g.get(&[i, j, m, k]).clone() - g.get(&[i, j, k, m]);
        for a in 0..n {
            acc = acc + l.get(&[a, j, m]).clone() * l.get(&[i, a, k])
                - l.get(&[a, j, k]).clone() * l.get(&[i, a, m]);
        }
        acc
    }))
}

/// `R_{jm} = R^α_{jmα}`.
pub fn ricci<S: Scalar>(curvature: &Tensor<S>) -> Result<Tensor<S>> {
    check_curvature(curvature)?;
    curvature.contract(0, 2)
}

/// `R_{[ij]} = R_{ij} - R_{ji}`.
pub fn skew_ricci<S: Scalar>(curvature: &Tensor<S>) -> Result<Tensor<S>> {
    ricci(curvature)?.alternate(Slot::Lower(0), Slot::Lower(1))
}

/// `R^α_{αij}`.
pub fn curvature_trace<S: Scalar>(curvature: &Tensor<S>) -> Result<Tensor<S>> {
    check_curvature(curvature)?;
    curvature.contract(0, 0)
}

fn check_curvature<S: Scalar>(r: &Tensor<S>) -> Result<()> {
    if r.valence() != Valence::new(1, 3) {
        return Err(Error::Shape(format!(
            "curvature must be (1,3), got {}",
            r.valence()
        )));
    }
    Ok(())
}

/// The four-term connection derivative used by the geodesic Weyl form:
/// `L^i_{jm,n} + L^i_{αn} L^α_{jm} - L^α_{jn} L^i_{αm} + L^α_{mn} L^i_{jα}`.
///
/// The last sign is `+`, so this is not the tensorial derivative of a `(1,2)`
/// field and its trace does not reduce to [`trace_cov_derivative`].
pub fn special_connection_derivative<S: Scalar>(lsym: &Jet<S>) -> Result<Tensor<S>> {
    check_connection(lsym)?;
    let n = lsym.dim();
    let (l, g) = (lsym.value(), lsym.grad());
    Ok(Tensor::from_fn(n, Valence::new(1, 3), |ix| {
        let (i, j, m, k) = (ix[0], ix[1], ix[2], ix[3]);
        let mut acc = g.get(&[i, j, m, k]).clone();
        for a in 0..n {
            acc = acc + l.get(&[i, a, k]).clone() * l.get(&[a, j, m])
                - l.get(&[a, j, k]).clone() * l.get(&[i, a, m])
                + l.get(&[a, m, k]).clone() * l.get(&[i, j, a]);
        }
        acc
    }))
}

/// Trace `θ_j = L^α_{jα}` of the connection, as a jet.
pub fn connection_trace<S: Scalar>(lsym: &Jet<S>) -> Result<Jet<S>> {
    check_connection(lsym)?;
    lsym.contract(0, 1)
}

/// `θ_{j|n} = θ_{j,n} - L^α_{jn} θ_α`, the covector-rule derivative of the
/// connection trace.
pub fn trace_cov_derivative<S: Scalar>(lsym: &Jet<S>) -> Result<Tensor<S>> {
    covariant_derivative(&connection_trace(lsym)?, lsym)
}

/// A non-symmetric connection with its derived objects computed once.
#[derive(Clone)]
pub struct ConnectionSpace<S> {
    full: Jet<S>,
    sym: Jet<S>,
    torsion: Jet<S>,
    theta: Jet<S>,
    curvature: Tensor<S>,
    ricci: Tensor<S>,
    skew_ricci: Tensor<S>,
}

impl<S: Scalar> std::fmt::Debug for ConnectionSpace<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConnectionSpace")
            .field("dim", &self.dim())
            .field("full", &self.full)
            .finish_non_exhaustive()
    }
}

impl<S: Scalar> ConnectionSpace<S> {
    pub fn new(full: Jet<S>) -> Result<Self> {
        let (sym, torsion) = split(&full)?;
        let theta = connection_trace(&sym)?;
        let curvature = curvature(&sym)?;
        let ricci = ricci(&curvature)?;
        let skew_ricci = ricci.alternate(Slot::Lower(0), Slot::Lower(1))?;
        Ok(Self {
            full,
            sym,
            torsion,
            theta,
            curvature,
            ricci,
            skew_ricci,
        })
    }

    pub fn dim(&self) -> usize {
        self.full.dim()
    }

    /// Full, non-symmetric coefficients `L^i_{jk}`.
    pub fn full(&self) -> &Jet<S> {
        &self.full
    }

    /// Symmetric part `L^i_{(jk)}` (half-sum).
    pub fn sym(&self) -> &Jet<S> {
        &self.sym
    }

    /// Antisymmetric part; twice this is the torsion tensor.
    pub fn torsion_part(&self) -> &Jet<S> {
        &self.torsion
    }

    pub fn theta(&self) -> &Jet<S> {
        &self.theta
    }

    pub fn curvature(&self) -> &Tensor<S> {
        &self.curvature
    }

    pub fn ricci(&self) -> &Tensor<S> {
        &self.ricci
    }

    pub fn skew_ricci(&self) -> &Tensor<S> {
        &self.skew_ricci
    }

    /// Half-sum `R_{(ij)}` of the Ricci tensor.
    pub fn ricci_sym(&self) -> Tensor<S> {
        self.ricci
            .sym_pair(Slot::Lower(0), Slot::Lower(1), Symmetrization::Half)
            .expect("ricci is (0,2)")
    }

    pub fn trace_derivative(&self) -> Tensor<S> {
        covariant_derivative(&self.theta, &self.sym).expect("theta is a covector jet")
    }

    pub fn special_derivative(&self) -> Tensor<S> {
        special_connection_derivative(&self.sym).expect("sym is a connection")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn random_connection(dim: usize, seed: u64) -> Jet<Q> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |v| Tensor::from_fn(dim, v, |_| Q::ratio(rng.gen_range(-8..=8), 8));
        let value = draw(CONNECTION);
        let grad = draw(Valence::new(1, 3));
        Jet::new(value, grad).unwrap()
    }

    #[test]
    fn split_of_symmetric_input_has_no_torsion() {
        let l = split(&random_connection(3, 1)).unwrap().0;
        let (sym, tor) = split(&l).unwrap();
        assert_eq!(sym, l);
        assert!(tor.value().is_zero() && tor.grad().is_zero());
    }

    #[test]
    fn split_arithmetic() {
        let mut v = Tensor::<Q>::zeros(2, CONNECTION);
        v.set(&[0, 0, 1], Q::one());
        let (sym, tor) = split(&Jet::constant(v)).unwrap();
        let half = Q::ratio(1, 2);
        assert_eq!(sym.value().get(&[0, 0, 1]), &half);
        assert_eq!(sym.value().get(&[0, 1, 0]), &half);
        assert_eq!(tor.value().get(&[0, 0, 1]), &half);
        assert_eq!(tor.value().get(&[0, 1, 0]), &-half);
    }

    #[test]
    fn split_recombines() {
        let l = random_connection(4, 2);
        let (sym, tor) = split(&l).unwrap();
        assert_eq!(sym.add(&tor), l);
    }

    #[test]
    fn flat_space_has_no_curvature() {
        let space = ConnectionSpace::new(Jet::<Q>::zeros(3, CONNECTION)).unwrap();
        assert!(space.curvature().is_zero());
        assert!(space.ricci().is_zero());
        assert!(space.skew_ricci().is_zero());
        assert!(space.special_derivative().is_zero());
        assert!(space.trace_derivative().is_zero());
    }

    #[test]
    fn constant_connection_curvature_is_commutator() {
        let l = split(&Jet::constant(random_connection(3, 3).value().clone()))
            .unwrap()
            .0;
        let r = curvature(&l).unwrap();
        let lv = l.value();
        for i in 0..3 {
            for j in 0..3 {
                for m in 0..3 {
                    for n in 0..3 {
                        let mut want = Q::zero();
                        for a in 0..3 {
                            want += lv.get(&[a, j, m]).clone() * lv.get(&[i, a, n]);
                            want -= lv.get(&[a, j, n]).clone() * lv.get(&[i, a, m]);
                        }
                        assert_eq!(r.get(&[i, j, m, n]), &want);
                    }
                }
            }
        }
    }

    #[test]
    fn curvature_is_antisymmetric_and_trace_identity_holds() {
        for seed in 0..5 {
            let space = ConnectionSpace::new(random_connection(4, 10 + seed)).unwrap();
            let r = space.curvature();
            let swapped = r.swap_slots(Slot::Lower(1), Slot::Lower(2)).unwrap();
            assert!(r.add(&swapped).is_zero());
            let trace = curvature_trace(r).unwrap();
            assert!(trace.add(space.skew_ricci()).is_zero());
        }
    }

    #[test]
    fn ricci_matches_loop() {
        let space = ConnectionSpace::new(random_connection(4, 20)).unwrap();
        let r = space.curvature();
        for j in 0..4 {
            for m in 0..4 {
                let want = (0..4).fold(Q::zero(), |acc, a| acc + r.get(&[a, j, m, a]));
                assert_eq!(space.ricci().get(&[j, m]), &want);
            }
        }
    }

    #[test]
    fn special_derivative_of_constant_connection() {
        let l = split(&Jet::constant(random_connection(3, 4).value().clone()))
            .unwrap()
            .0;
        let sp = special_connection_derivative(&l).unwrap();
        let lv = l.value();
        for ix in crate::tensor::multi_indices(3, 4) {
            let (i, j, m, n) = (ix[0], ix[1], ix[2], ix[3]);
            let mut want = Q::zero();
            for a in 0..3 {
                want += lv.get(&[i, a, n]).clone() * lv.get(&[a, j, m]);
                want -= lv.get(&[a, j, n]).clone() * lv.get(&[i, a, m]);
                want += lv.get(&[a, m, n]).clone() * lv.get(&[i, j, a]);
            }
            assert_eq!(sp.get(&ix), &want);
        }
    }

    #[test]
    fn special_derivative_differs_from_tensorial_by_twice_last_term() {
        let l = split(&random_connection(3, 5)).unwrap().0;
        let sp = special_connection_derivative(&l).unwrap();
        let tensorial = covariant_derivative(&l, &l).unwrap();
        let lv = l.value();
        for ix in crate::tensor::multi_indices(3, 4) {
            let (i, j, m, n) = (ix[0], ix[1], ix[2], ix[3]);
            let extra = (0..3).fold(Q::zero(), |acc, a| {
                acc + lv.get(&[a, m, n]).clone() * lv.get(&[i, j, a])
            });
            let diff = sp.get(&ix).clone() - tensorial.get(&ix);
            assert_eq!(diff, extra * Q::from_i64(2));
        }
    }

    #[test]
    fn trace_derivative_alternation_is_exterior_derivative() {
        let l = split(&random_connection(3, 6)).unwrap().0;
        let d = trace_cov_derivative(&l).unwrap();
        let alt = d.alternate(Slot::Lower(0), Slot::Lower(1)).unwrap();
        let theta = connection_trace(&l).unwrap();
        assert_eq!(alt, theta.exterior_derivative().unwrap());
        // loop oracle
        let (lv, tv, tg) = (l.value(), theta.value(), theta.grad());
        for j in 0..3 {
            for n in 0..3 {
                let mut want = tg.get(&[j, n]).clone();
                for a in 0..3 {
                    want -= lv.get(&[a, j, n]).clone() * tv.get(&[a]);
                }
                assert_eq!(d.get(&[j, n]), &want);
            }
        }
    }

    #[test]
    fn rejects_wrong_valence() {
        let bad = Jet::<Q>::zeros(3, Valence::new(1, 1));
        assert!(matches!(ConnectionSpace::new(bad), Err(Error::Shape(_))));
    }
}
