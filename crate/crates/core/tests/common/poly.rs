//! Symbolic differentiation oracle: polynomial tensor fields with exact
//! coefficients, differentiated term by term and evaluated at a point.

use std::collections::BTreeMap;

use geoinv::tensor::multi_indices;
use geoinv::{Jet, Rational, Tensor, Valence};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A polynomial in `n` variables: exponent vector to coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

fn q(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Random polynomial of total degree at most 2.
    pub fn random_quadratic(rng: &mut ChaCha8Rng, n: usize) -> Self {
        let mut p = Self::zero(n);
        let mut exps = vec![vec![0; n]];
        for a in 0..n {
            let mut e = vec![0; n];
            e[a] = 1;
            exps.push(e);
            for b in a..n {
                let mut e = vec![0; n];
                e[a] += 1;
                e[b] += 1;
                exps.push(e);
            }
        }
        for e in exps {
            let c = q(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// `∂/∂x_k`.
    pub fn diff(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut e2 = e.clone();
                e2[k] -= 1;
                out.add_term(e2, c * Rational::from_integer(e[k].into()));
            }
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &p) in x.iter().zip(e) {
                for _ in 0..p {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }
}

/// A tensor field with polynomial components, row-major, uppers first.
#[derive(Clone, Debug)]
pub struct PolyField {
    pub dim: usize,
    pub valence: Valence,
    pub comps: Vec<Poly>,
}

impl PolyField {
    pub fn random(rng: &mut ChaCha8Rng, dim: usize, valence: Valence) -> Self {
        let count = dim.pow(valence.rank() as u32);
        Self {
            dim,
            valence,
            comps: (0..count)
                .map(|_| Poly::random_quadratic(rng, dim))
                .collect(),
        }
    }

    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn comp(&self, idx: &[usize]) -> &Poly {
        &self.comps[self.offset(idx)]
    }

    /// Half-sum over the last two lower slots.
    pub fn symmetrize_last_pair(&self) -> Self {
        let r = self.valence.rank();
        let comps = multi_indices(self.dim, r)
            .map(|idx| {
                let mut sw = idx.clone();
                sw.swap(r - 2, r - 1);
                let mut p = self.comp(&idx).add(self.comp(&sw));
                for c in p.terms.values_mut() {
                    *c *= q(1, 2);
                }
                p
            })
            .collect();
        Self {
            comps,
            ..self.clone()
        }
    }

    /// Tensor product with the slot order uppers(a), uppers(b), lowers(a), lowers(b).
    pub fn outer(&self, other: &Self) -> Self {
        let (p1, q1) = (self.valence.upper, self.valence.lower);
        let (p2, q2) = (other.valence.upper, other.valence.lower);
        let valence = Valence::new(p1 + p2, q1 + q2);
        let comps = multi_indices(self.dim, valence.rank())
            .map(|ix| {
                let a: Vec<usize> = ix[..p1]
                    .iter()
                    .chain(&ix[p1 + p2..p1 + p2 + q1])
                    .copied()
                    .collect();
                let b: Vec<usize> = ix[p1..p1 + p2]
                    .iter()
                    .chain(&ix[p1 + p2 + q1..])
                    .copied()
                    .collect();
                self.comp(&a).mul(other.comp(&b))
            })
            .collect();
        Self {
            dim: self.dim,
            valence,
            comps,
        }
    }

    pub fn value_at(&self, x: &[Rational]) -> Tensor<Rational> {
        Tensor::new(
            self.dim,
            self.valence,
            self.comps.iter().map(|p| p.eval(x)).collect(),
        )
        .unwrap()
    }

    /// `∂_k` of every component at `x`, with `k` as a trailing lower slot.
    pub fn grad_at(&self, x: &[Rational]) -> Tensor<Rational> {
        let v = Valence::new(self.valence.upper, self.valence.lower + 1);
        let data = self
            .comps
            .iter()
            .flat_map(|p| (0..self.dim).map(move |k| p.diff(k).eval(x)))
            .collect();
        Tensor::new(self.dim, v, data).unwrap()
    }

    pub fn jet_at(&self, x: &[Rational]) -> Jet<Rational> {
        Jet::new(self.value_at(x), self.grad_at(x)).unwrap()
    }
}

/// A random evaluation point with small rational coordinates.
pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| q(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a^i_{j|k}` of a `(1,1)` polynomial field under a symmetric `(1,2)`
/// polynomial connection, written out from the definition at `x`.
pub fn covariant_derivative_11(a: &PolyField, l: &PolyField, x: &[Rational]) -> Tensor<Rational> {
    let n = a.dim;
    Tensor::from_fn(n, Valence::new(1, 2), |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        let mut acc = a.comp(&[i, j]).diff(k).eval(x);
        for al in 0..n {
            acc += l.comp(&[i, al, k]).eval(x) * a.comp(&[al, j]).eval(x);
            acc -= l.comp(&[al, j, k]).eval(x) * a.comp(&[i, al]).eval(x);
        }
        acc
    })
}
