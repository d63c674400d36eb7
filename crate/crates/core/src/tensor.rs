//! Dense multi-index tensors over an `N`-dimensional index range.
//!
//! A tensor of valence `(p, q)` stores `N^(p+q)` scalars in row-major order,
//! with the `p` upper indices written first and the `q` lower indices after
//! them. `T^{ij}_{k}` therefore lives at offset `((i*N)+j)*N + k`. This layout
//! is also the on-disk layout of instance files.
//!
//! Bracket conventions used throughout the crate:
//! * `alternate` is `T_{..a..b..} - T_{..b..a..}`, no factor one half;
//! * `sym_pair` with [`Symmetrization::Half`] is the half-sum (underlined
//!   indices), with [`Symmetrization::Plain`] the factor-free sum.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of upper (contravariant) and lower (covariant) slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Valence {
    pub upper: usize,
    pub lower: usize,
}

impl Valence {
    pub const fn new(upper: usize, lower: usize) -> Self {
        Self { upper, lower }
    }

    pub const fn rank(self) -> usize {
        self.upper + self.lower
    }
}

impl fmt::Display for Valence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.upper, self.lower)
    }
}

/// An index slot, counted within its kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Upper(usize),
    Lower(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetrization {
    /// `(T_ab + T_ba) / 2`
    Half,
    /// `T_ab + T_ba`
    Plain,
}

#[derive(Clone, PartialEq)]
pub struct Tensor<S> {
    dim: usize,
    valence: Valence,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Tensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tensor")
            .field("dim", &self.dim)
            .field("valence", &self.valence)
            .field(
                "data",
                &self.data.iter().map(Scalar::to_f64).collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl<S: Scalar> Tensor<S> {
    pub fn new(dim: usize, valence: Valence, data: Vec<S>) -> Result<Self> {
        check_dim(dim)?;
        let expected = dim.pow(valence.rank() as u32);
        if data.len() != expected {
            return Err(Error::Shape(format!(
                "valence {valence} over N={dim} needs {expected} entries, got {}",
                data.len()
            )));
        }
        Ok(Self { dim, valence, data })
    }

    pub fn zeros(dim: usize, valence: Valence) -> Self {
        let len = dim.pow(valence.rank() as u32);
        Self {
            dim,
            valence,
            data: vec![S::zero(); len],
        }
    }

    pub fn scalar(dim: usize, value: S) -> Self {
        Self {
            dim,
            valence: Valence::new(0, 0),
            data: vec![value],
        }
    }

    /// Builds a tensor entry by entry; the closure receives the multi-index in
    /// written order (upper indices first).
    pub fn from_fn(dim: usize, valence: Valence, mut entry: impl FnMut(&[usize]) -> S) -> Self {
        let rank = valence.rank();
        let len = dim.pow(rank as u32);
        let mut idx = vec![0usize; rank];
        let mut data = Vec::with_capacity(len);
        for _ in 0..len {
            data.push(entry(&idx));
            increment(&mut idx, dim);
        }
        Self { dim, valence, data }
    }

    /// The (1,1) Kronecker delta.
    pub fn delta(dim: usize) -> Self {
        Self::from_fn(dim, Valence::new(1, 1), |ix| {
            if ix[0] == ix[1] {
                S::one()
            } else {
                S::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn valence(&self) -> Valence {
        self.valence
    }

    pub fn rank(&self) -> usize {
        self.valence.rank()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> &S {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: S) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    /// Value of a rank-0 tensor.
    pub fn as_scalar(&self) -> Option<&S> {
        (self.rank() == 0).then(|| &self.data[0])
    }

    fn position(&self, slot: Slot) -> Option<usize> {
        match slot {
            Slot::Upper(k) if k < self.valence.upper => Some(k),
            Slot::Lower(k) if k < self.valence.lower => Some(self.valence.upper + k),
            _ => None,
        }
    }

    /// Sums over a paired upper and lower slot; both slots are removed.
    pub fn contract(&self, upper: usize, lower: usize) -> Result<Self> {
        if upper >= self.valence.upper || lower >= self.valence.lower {
            return Err(Error::Contract(format!(
                "slots (upper {upper}, lower {lower}) out of range for valence {}",
                self.valence
            )));
        }
        let up_pos = upper;
        let low_pos = self.valence.upper + lower;
        let out_valence = Valence::new(self.valence.upper - 1, self.valence.lower - 1);
        let mut full = vec![0usize; self.rank()];
        Ok(Self::from_fn(self.dim, out_valence, |ix| {
            let mut src = ix.iter().copied();
            for (pos, slot) in full.iter_mut().enumerate() {
                if pos != up_pos && pos != low_pos {
                    *slot = src.next().unwrap_or(0);
                }
            }
            let mut acc = S::zero();
            for a in 0..self.dim {
                full[up_pos] = a;
                full[low_pos] = a;
                acc = acc + self.get(&full);
            }
            acc
        }))
    }

    fn pair_positions(&self, a: Slot, b: Slot) -> Result<(usize, usize)> {
        let same_kind = matches!(
            (a, b),
            (Slot::Upper(_), Slot::Upper(_)) | (Slot::Lower(_), Slot::Lower(_))
        );
        match (self.position(a), self.position(b)) {
            (Some(pa), Some(pb)) if same_kind && pa != pb => Ok((pa, pb)),
            _ => Err(Error::Alternation(format!(
                "slots {a:?} and {b:?} are not two distinct slots of one kind in valence {}",
                self.valence
            ))),
        }
    }

    /// Exchanges two slots of the same kind.
    pub fn swap_slots(&self, a: Slot, b: Slot) -> Result<Self> {
        let (pa, pb) = self.pair_positions(a, b)?;
        Ok(self.swapped_positions(pa, pb))
    }

    fn swapped_positions(&self, pa: usize, pb: usize) -> Self {
        let mut src = vec![0usize; self.rank()];
        Self::from_fn(self.dim, self.valence, |ix| {
            src.copy_from_slice(ix);
            src.swap(pa, pb);
            self.get(&src).clone()
        })
    }

    /// `T[..a..b..] - T[..b..a..]`.
    pub fn alternate(&self, a: Slot, b: Slot) -> Result<Self> {
        let (pa, pb) = self.pair_positions(a, b)?;
        let swapped = self.swapped_positions(pa, pb);
        Ok(self.zip_with(&swapped, |x, y| x.clone() - y))
    }

    /// Symmetrization over one slot pair.
    pub fn sym_pair(&self, a: Slot, b: Slot, kind: Symmetrization) -> Result<Self> {
        let (pa, pb) = self.pair_positions(a, b)?;
        let swapped = self.swapped_positions(pa, pb);
        let sum = self.zip_with(&swapped, |x, y| x.clone() + y);
        Ok(match kind {
            Symmetrization::Plain => sum,
            Symmetrization::Half => sum.scale(&S::ratio(1, 2)),
        })
    }

    /// Tensor product; upper slots of `self` precede those of `other`, and
    /// likewise for the lower slots.
    pub fn outer(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let (p1, q1) = (self.valence.upper, self.valence.lower);
        let (p2, q2) = (other.valence.upper, other.valence.lower);
        let valence = Valence::new(p1 + p2, q1 + q2);
        let mut ia = vec![0usize; p1 + q1];
        let mut ib = vec![0usize; p2 + q2];
        Ok(Self::from_fn(self.dim, valence, |ix| {
            ia[..p1].copy_from_slice(&ix[..p1]);
            ib[..p2].copy_from_slice(&ix[p1..p1 + p2]);
            ia[p1..].copy_from_slice(&ix[p1 + p2..p1 + p2 + q1]);
            ib[p2..].copy_from_slice(&ix[p1 + p2 + q1..]);
            self.get(&ia).clone() * other.get(&ib)
        }))
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!(
                "dimension mismatch: N={} vs N={}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        self.check_same_dim(other)?;
        if self.valence != other.valence {
            return Err(Error::Shape(format!(
                "valence mismatch: {} vs {}",
                self.valence, other.valence
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        Self {
            dim: self.dim,
            valence: self.valence,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b))
    }

    /// Addition for tensors known to share a shape; panics otherwise.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("tensor shapes must agree")
    }

    /// Subtraction for tensors known to share a shape; panics otherwise.
    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("tensor shapes must agree")
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self {
            dim: self.dim,
            valence: self.valence,
            data: self.data.iter().map(|x| x.clone() * factor).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            dim: self.dim,
            valence: self.valence,
            data: self.data.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// Largest entrywise difference; `INFINITY` when the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        match self.try_sub(other) {
            Ok(d) => d.max_abs(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Tensor<T> {
        Tensor {
            dim: self.dim,
            valence: self.valence,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Nested JSON arrays, one nesting level per slot in written order.
    pub fn to_nested_json(&self) -> serde_json::Value {
        fn build<S: Scalar>(data: &[S], dim: usize, depth: usize) -> serde_json::Value {
            if depth == 0 {
                return data[0].to_json();
            }
            let stride = data.len() / dim;
            serde_json::Value::Array(
                (0..dim)
                    .map(|k| build(&data[k * stride..(k + 1) * stride], dim, depth - 1))
                    .collect(),
            )
        }
        build(&self.data, self.dim, self.rank())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::Shape(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    Ok(())
}

/// Advances a row-major multi-index in place.
pub(crate) fn increment(idx: &mut [usize], dim: usize) {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < dim {
            return;
        }
        *slot = 0;
    }
}

/// Iterates all multi-indices of the given rank in row-major order.
pub fn multi_indices(dim: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(rank as u32);
    let mut idx = vec![0usize; rank];
    (0..total).map(move |_| {
        let out = idx.clone();
        increment(&mut idx, dim);
        out
    })
}
