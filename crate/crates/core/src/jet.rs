//! First-order jets: a tensor field's value at a point together with all of
//! its first partial derivatives there.
//!
//! The gradient carries one extra trailing lower slot, the differentiation
//! index: `grad[.., k] = ∂_k value[..]`. Products follow the Leibniz rule, so
//! any expression assembled from jets carries its exact first derivative.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{Slot, Symmetrization, Tensor, Valence};

#[derive(Clone, PartialEq)]
pub struct Jet<S> {
    value: Tensor<S>,
    grad: Tensor<S>,
}

impl<S: Scalar> std::fmt::Debug for Jet<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Jet")
            .field("value", &self.value)
            .field("grad", &self.grad)
            .finish()
    }
}

impl<S: Scalar> Jet<S> {
    pub fn new(value: Tensor<S>, grad: Tensor<S>) -> Result<Self> {
        let v = value.valence();
        let expected = Valence::new(v.upper, v.lower + 1);
        if grad.dim() != value.dim() || grad.valence() != expected {
            return Err(Error::Shape(format!(
                "gradient of a {v} jet must have valence {expected} over N={}, got {} over N={}",
                value.dim(),
                grad.valence(),
                grad.dim()
            )));
        }
        Ok(Self { value, grad })
    }

    /// A field with vanishing first derivatives.
    pub fn constant(value: Tensor<S>) -> Self {
        let v = value.valence();
        let grad = Tensor::zeros(value.dim(), Valence::new(v.upper, v.lower + 1));
        Self { value, grad }
    }

    pub fn zeros(dim: usize, valence: Valence) -> Self {
        Self::constant(Tensor::zeros(dim, valence))
    }

    pub fn value(&self) -> &Tensor<S> {
        &self.value
    }

    pub fn grad(&self) -> &Tensor<S> {
        &self.grad
    }

    pub fn into_parts(self) -> (Tensor<S>, Tensor<S>) {
        (self.value, self.grad)
    }

    pub fn dim(&self) -> usize {
        self.value.dim()
    }

    pub fn valence(&self) -> Valence {
        self.value.valence()
    }

    fn lift(&self, f: impl Fn(&Tensor<S>) -> Result<Tensor<S>>) -> Result<Self> {
        Ok(Self {
            value: f(&self.value)?,
            grad: f(&self.grad)?,
        })
    }

    pub fn contract(&self, upper: usize, lower: usize) -> Result<Self> {
        if lower >= self.valence().lower {
            return Err(Error::Contract(format!(
                "lower slot {lower} out of range for valence {}",
                self.valence()
            )));
        }
        self.lift(|t| t.contract(upper, lower))
    }

    fn check_slot(&self, slot: Slot) -> Result<()> {
        let v = self.valence();
        let ok = match slot {
            Slot::Upper(k) => k < v.upper,
            Slot::Lower(k) => k < v.lower,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Alternation(format!(
                "slot {slot:?} out of range for valence {v}"
            )))
        }
    }

    pub fn alternate(&self, a: Slot, b: Slot) -> Result<Self> {
        self.check_slot(a)?;
        self.check_slot(b)?;
        self.lift(|t| t.alternate(a, b))
    }

    pub fn sym_pair(&self, a: Slot, b: Slot, kind: Symmetrization) -> Result<Self> {
        self.check_slot(a)?;
        self.check_slot(b)?;
        self.lift(|t| t.sym_pair(a, b, kind))
    }

    pub fn swap_slots(&self, a: Slot, b: Slot) -> Result<Self> {
        self.check_slot(a)?;
        self.check_slot(b)?;
        self.lift(|t| t.swap_slots(a, b))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            value: self.value.try_add(&other.value)?,
            grad: self.grad.try_add(&other.grad)?,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            value: self.value.try_sub(&other.value)?,
            grad: self.grad.try_sub(&other.grad)?,
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("jet shapes must agree")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("jet shapes must agree")
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self {
            value: self.value.scale(factor),
            grad: self.grad.scale(factor),
        }
    }

    /// Leibniz product; slot order as in [`Tensor::outer`].
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let value = self.value.outer(&other.value)?;
        let (p1, q1) = (self.valence().upper, self.valence().lower);
        let (p2, q2) = (other.valence().upper, other.valence().lower);
        let out = Valence::new(p1 + p2, q1 + q2 + 1);
        let mut ia = vec![0usize; p1 + q1];
        let mut ib = vec![0usize; p2 + q2];
        let mut ga = vec![0usize; p1 + q1 + 1];
        let mut gb = vec![0usize; p2 + q2 + 1];
        let grad = Tensor::from_fn(self.dim(), out, |ix| {
            let k = ix[ix.len() - 1];
            ia[..p1].copy_from_slice(&ix[..p1]);
            ib[..p2].copy_from_slice(&ix[p1..p1 + p2]);
            ia[p1..].copy_from_slice(&ix[p1 + p2..p1 + p2 + q1]);
            ib[p2..].copy_from_slice(&ix[p1 + p2 + q1..p1 + p2 + q1 + q2]);
            ga[..p1 + q1].copy_from_slice(&ia);
            ga[p1 + q1] = k;
            gb[..p2 + q2].copy_from_slice(&ib);
            gb[p2 + q2] = k;
            self.grad.get(&ga).clone() * other.value.get(&ib)
                + self.value.get(&ia).clone() * other.grad.get(&gb)
        });
        Ok(Self { value, grad })
    }

    /// Gradient entries antisymmetrized in the last value slot and the
    /// differentiation slot; zero exactly when a covector field is closed.
    pub fn exterior_derivative(&self) -> Result<Tensor<S>> {
        let q = self.valence().lower;
        if q == 0 {
            return Err(Error::Shape(
                "exterior derivative needs a lower slot".into(),
            ));
        }
        self.grad.alternate(Slot::Lower(q - 1), Slot::Lower(q))
    }
}

/// Covariant derivative with respect to a symmetric connection: partial
/// derivative, plus one connection term per upper slot, minus one per lower
/// slot. For a `(1,1)` field this is
/// `a^i_{j|k} = a^i_{j,k} + L^i_{αk} a^α_j - L^α_{jk} a^i_α`.
pub fn covariant_derivative<S: Scalar>(t: &Jet<S>, lsym: &Jet<S>) -> Result<Tensor<S>> {
    connection_derivative(t.value(), t.grad(), lsym.value())
}

/// Same rule with the connection given as a plain `(1,2)` tensor.
pub fn connection_derivative<S: Scalar>(
    value: &Tensor<S>,
    grad: &Tensor<S>,
    connection: &Tensor<S>,
) -> Result<Tensor<S>> {
    if connection.valence() != Valence::new(1, 2) {
        return Err(Error::Shape(format!(
            "connection must have valence (1,2), got {}",
            connection.valence()
        )));
    }
    if connection.dim() != value.dim() {
        return Err(Error::Shape(
            "connection and field dimensions differ".into(),
        ));
    }
    let n = value.dim();
    let v = value.valence();
    let p = v.upper;
    let rank = v.rank();
    let mut src = vec![0usize; rank];
    Ok(Tensor::from_fn(
        n,
        Valence::new(v.upper, v.lower + 1),
        |ix| {
            let k = ix[rank];
            let mut acc = grad.get(ix).clone();
            for slot in 0..rank {
                src.copy_from_slice(&ix[..rank]);
                let fixed = ix[slot];
                for a in 0..n {
                    src[slot] = a;
                    let term = if slot < p {
                        connection.get(&[fixed, a, k]).clone() * value.get(&src)
                    } else {
                        connection.get(&[a, fixed, k]).clone() * value.get(&src)
                    };
                    acc = if slot < p { acc + term } else { acc - term };
                }
            }
            acc
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn random_tensor(dim: usize, v: Valence, rng: &mut ChaCha8Rng) -> Tensor<Q> {
        Tensor::from_fn(dim, v, |_| Q::ratio(rng.gen_range(-8..=8), 8))
    }

    fn random_jet(dim: usize, v: Valence, rng: &mut ChaCha8Rng) -> Jet<Q> {
        let value = random_tensor(dim, v, rng);
        let grad = random_tensor(dim, Valence::new(v.upper, v.lower + 1), rng);
        Jet::new(value, grad).unwrap()
    }

    fn symmetric_connection(dim: usize, rng: &mut ChaCha8Rng) -> Jet<Q> {
        random_jet(dim, Valence::new(1, 2), rng)
            .sym_pair(Slot::Lower(0), Slot::Lower(1), Symmetrization::Half)
            .unwrap()
    }

    #[test]
    fn constant_product_has_zero_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = Jet::constant(random_tensor(3, Valence::new(1, 0), &mut rng));
        let b = Jet::constant(random_tensor(3, Valence::new(0, 1), &mut rng));
        assert!(a.mul(&b).unwrap().grad().is_zero());
    }

    #[test]
    fn constant_delta_contracts_to_dimension() {
        let d = Jet::<Q>::constant(Tensor::delta(3));
        let tr = d.contract(0, 0).unwrap();
        assert_eq!(tr.value().as_scalar(), Some(&Q::from_i64(3)));
        assert!(tr.grad().is_zero());
    }

    #[test]
    fn contraction_commutes_with_addition() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_jet(3, Valence::new(1, 2), &mut rng);
        let b = random_jet(3, Valence::new(1, 2), &mut rng);
        let lhs = a.add(&b).contract(0, 1).unwrap();
        let rhs = a.contract(0, 1).unwrap().add(&b.contract(0, 1).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_times_jet_reshapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_jet(3, Valence::new(0, 1), &mut rng);
        let d = Jet::constant(Tensor::delta(3));
        // δ^i_j t_k contracted over (i,k) gives t_j back
        let back = d.mul(&t).unwrap().contract(0, 1).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn flat_connection_derivative_is_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = random_jet(3, Valence::new(1, 1), &mut rng);
        let flat = Jet::zeros(3, Valence::new(1, 2));
        assert_eq!(&covariant_derivative(&t, &flat).unwrap(), t.grad());
    }

    #[test]
    fn delta_is_covariantly_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let l = symmetric_connection(4, &mut rng);
        let d = Jet::constant(Tensor::delta(4));
        assert!(covariant_derivative(&d, &l).unwrap().is_zero());
    }

    #[test]
    fn covariant_derivative_of_one_two_tensor_matches_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let l = symmetric_connection(3, &mut rng);
        let w = random_jet(3, Valence::new(1, 2), &mut rng);
        let cd = covariant_derivative(&w, &l).unwrap();
        let (lv, wv, wg) = (l.value(), w.value(), w.grad());
        for i in 0..3 {
            for j in 0..3 {
                for m in 0..3 {
                    for n in 0..3 {
                        let mut want = wg.get(&[i, j, m, n]).clone();
                        for a in 0..3 {
                            want += lv.get(&[i, a, n]).clone() * wv.get(&[a, j, m]);
                            want -= lv.get(&[a, j, n]).clone() * wv.get(&[i, a, m]);
                            want -= lv.get(&[a, m, n]).clone() * wv.get(&[i, j, a]);
                        }
                        assert_eq!(cd.get(&[i, j, m, n]), &want);
                    }
                }
            }
        }
    }

    #[test]
    fn leibniz_rule_for_covariant_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let l = symmetric_connection(3, &mut rng);
        let a = random_jet(3, Valence::new(1, 1), &mut rng);
        let b = random_jet(3, Valence::new(0, 1), &mut rng);
        let lhs = covariant_derivative(&a.mul(&b).unwrap(), &l).unwrap();
        // cd(a) ⊗ b carries the derivative slot in a's lower block; move it last
        let da = covariant_derivative(&a, &l).unwrap();
        let db = covariant_derivative(&b, &l).unwrap();
        let rhs = Tensor::from_fn(3, Valence::new(1, 3), |ix| {
            let (i, j, k, n) = (ix[0], ix[1], ix[2], ix[3]);
            da.get(&[i, j, n]).clone() * b.value().get(&[k])
                + a.value().get(&[i, j]).clone() * db.get(&[k, n])
        });
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gradient_shape_is_checked() {
        let v = Tensor::<f64>::zeros(3, Valence::new(1, 1));
        let g = Tensor::<f64>::zeros(3, Valence::new(1, 1));
        assert!(matches!(Jet::new(v, g), Err(Error::Shape(_))));
    }
}
