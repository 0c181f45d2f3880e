use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::StabilityError;
use crate::rational::Q;

/// Dense univariate polynomial, coefficients in ascending degree. The zero
/// polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    coeffs: Vec<Q>,
}

impl UnivariatePoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::rational::q(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn evaluate(&self, t: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Q::zero();
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `g(t + a)`.
    pub fn shift(&self, a: &Q) -> Self {
        let lin = Self::new(vec![a.clone(), Q::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(&lin).add(&Self::new(vec![c.clone()])))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Q::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let factor = &rem[rem.len() - 1] / &lead;
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &factor * c;
            }
            quot[k] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(l) => a.scale(&(Q::one() / l)),
            None => a,
        }
    }

    /// Divides by the positive rational content, so every coefficient
    /// becomes an integer, their gcd is 1, and signs are unchanged.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let content = Q::new(num.abs(), den);
        self.scale(&(Q::one() / content))
    }

    /// `g / gcd(g, g')`: same roots, each with multiplicity one.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.primitive()
    }

    /// Sturm sequence with every member divided by its positive content.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.primitive()];
        let d = self.derivative().primitive();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                return seq;
            }
            seq.push(r.scale(&-Q::one()).primitive());
        }
    }
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut prev = 0i8;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            changes += 1;
        }
        prev = s;
    }
    changes
}

fn sign(q: &Q) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of distinct real roots, via sign variations of the Sturm
/// sequence at `-inf` and `+inf`.
pub fn sturm_real_root_count(g: &UnivariatePoly) -> Result<usize, StabilityError> {
    if g.is_zero() {
        return Err(StabilityError::ZeroPolynomial);
    }
    let seq = g.sturm_sequence();
    let at_pos = sign_changes(seq.iter().map(|p| sign(p.leading().expect("nonzero"))));
    let at_neg = sign_changes(seq.iter().map(|p| {
        let s = sign(p.leading().expect("nonzero"));
        if p.degree().unwrap_or(0) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    Ok(at_neg - at_pos)
}

/// True iff every complex root of `g` is real (multiplicities allowed).
pub fn is_real_rooted(g: &UnivariatePoly) -> Result<bool, StabilityError> {
    if g.is_zero() {
        return Err(StabilityError::ZeroPolynomial);
    }
    let sqf = g.squarefree_part();
    Ok(sturm_real_root_count(&sqf)? == sqf.degree().unwrap_or(0))
}
