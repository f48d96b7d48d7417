//! Rack and quandle chain groups over a finite quandle.
//!
//! A [`Chain`] is a sparse integer combination of equal-length tuples. The
//! rack boundary uses the convention
//!
//! ```text
//! d(x1, .., xn) = sum_{i=2..n} (-1)^i [ (x1, .., ^xi, .., xn)
//!                                     - (x1*xi, .., x(i-1)*xi, x(i+1), .., xn) ]
//! ```
//!
//! and the quandle complex is the quotient by the subcomplex spanned by
//! degenerate tuples (two equal adjacent entries). That quotient is modelled
//! by dropping degenerate generators, see [`project_quandle`].

use std::collections::btree_map::{self, BTreeMap, Entry};
use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::quandle::{Element, Quandle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("boundary needs degree at least 2, got {0}")]
    DegreeTooLow(usize),
    #[error("tuple {tuple} has entry outside 0..{order}")]
    EntryOutOfRange { tuple: Tuple, order: usize },
    #[error("degenerate generator {0} in a quandle chain")]
    Degenerate(Tuple),
    #[error("tuple {0} is not a basis element")]
    NotInBasis(Tuple),
    #[error("invalid coefficient {0:?}")]
    BadCoefficient(String),
}

/// A generator of the chain group: a sequence of quandle elements.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tuple(Vec<Element>);

impl Tuple {
    pub fn new(entries: impl Into<Vec<Element>>) -> Self {
        Tuple(entries.into())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Element] {
        &self.0
    }

    /// True when two adjacent entries coincide.
    pub fn is_degenerate(&self) -> bool {
        self.0.windows(2).any(|w| w[0] == w[1])
    }
}

impl From<Vec<Element>> for Tuple {
    fn from(v: Vec<Element>) -> Self {
        Tuple(v)
    }
}

impl<const N: usize> From<[Element; N]> for Tuple {
    fn from(v: [Element; N]) -> Self {
        Tuple(v.to_vec())
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite integer combination of tuples of a fixed degree.
///
/// Zero coefficients are never stored, so two chains are equal exactly when
/// they have the same terms. Iteration is in lexicographic tuple order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    degree: usize,
    terms: BTreeMap<Tuple, BigInt>,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Chain {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The chain `1 * tuple`.
    pub fn generator(tuple: impl Into<Tuple>) -> Self {
        let tuple = tuple.into();
        let mut c = Chain::zero(tuple.degree());
        c.terms.insert(tuple, BigInt::one());
        c
    }

    /// Builds a chain from `(tuple, coefficient)` pairs; repeated tuples add up.
    pub fn from_terms<T, C>(
        degree: usize,
        terms: impl IntoIterator<Item = (T, C)>,
    ) -> Result<Self, ChainError>
    where
        T: Into<Tuple>,
        C: Into<BigInt>,
    {
        let mut c = Chain::zero(degree);
        for (t, k) in terms {
            c.add_term(t.into(), k.into())?;
        }
        Ok(c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Tuple, BigInt> {
        self.terms.iter()
    }

    /// Coefficient of `tuple`, zero when absent.
    pub fn coeff(&self, tuple: &Tuple) -> BigInt {
        self.terms.get(tuple).cloned().unwrap_or_default()
    }

    /// Adds `coeff * tuple` in place, pruning the entry if it cancels.
    pub fn add_term(&mut self, tuple: Tuple, coeff: BigInt) -> Result<(), ChainError> {
        if tuple.degree() != self.degree {
            return Err(ChainError::DegreeMismatch {
                expected: self.degree,
                found: tuple.degree(),
            });
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.entry(tuple) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
        Ok(())
    }

    fn check_degree(&self, other: &Chain) -> Result<(), ChainError> {
        if self.degree != other.degree {
            return Err(ChainError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn add_assign_chain(&mut self, other: &Chain) -> Result<(), ChainError> {
        self.check_degree(other)?;
        for (t, k) in &other.terms {
            self.add_term(t.clone(), k.clone())?;
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Chain) -> Result<Chain, ChainError> {
        let mut out = self.clone();
        out.add_assign_chain(other)?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Chain) -> Result<Chain, ChainError> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, k: &BigInt) -> Chain {
        if k.is_zero() {
            return Chain::zero(self.degree);
        }
        Chain {
            degree: self.degree,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c * k)).collect(),
        }
    }

    /// Sign-normalized representative of `{c, -c}`: the chain whose
    /// lexicographically first term has a positive coefficient.
    pub fn sign_normalized(&self) -> Chain {
        match self.terms.values().next() {
            Some(k) if k.is_negative() => -self,
            _ => self.clone(),
        }
    }

    pub fn has_degenerate_term(&self) -> Option<&Tuple> {
        self.terms.keys().find(|t| t.is_degenerate())
    }

    pub fn check_entries(&self, q: &Quandle) -> Result<(), ChainError> {
        for t in self.terms.keys() {
            if t.entries().iter().any(|&x| x >= q.order()) {
                return Err(ChainError::EntryOutOfRange {
                    tuple: t.clone(),
                    order: q.order(),
                });
            }
        }
        Ok(())
    }
}

impl Neg for &Chain {
    type Output = Chain;

    fn neg(self) -> Chain {
        Chain {
            degree: self.degree,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }
}

impl Neg for Chain {
    type Output = Chain;

    fn neg(mut self) -> Chain {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl<'a> IntoIterator for &'a Chain {
    type Item = (&'a Tuple, &'a BigInt);
    type IntoIter = btree_map::Iter<'a, Tuple, BigInt>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, k)) in self.terms.iter().enumerate() {
            let (sign, mag) = if k.is_negative() {
                ("-", -k)
            } else {
                ("+", k.clone())
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "{t}")?;
            } else {
                write!(f, "{mag}{t}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain[{}]({})", self.degree, self)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    tuple: Vec<Element>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainRepr {
    degree: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for Chain {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ChainRepr {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(t, k)| TermRepr {
                    tuple: t.0.clone(),
                    coeff: k.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = ChainRepr::deserialize(deserializer)?;
        let mut chain = Chain::zero(repr.degree);
        for term in repr.terms {
            let coeff: BigInt =
                term.coeff.trim().parse().map_err(|_| {
                    D::Error::custom(ChainError::BadCoefficient(term.coeff.clone()))
                })?;
            chain
                .add_term(Tuple(term.tuple), coeff)
                .map_err(D::Error::custom)?;
        }
        Ok(chain)
    }
}

/// Rack boundary of a single generator, accumulated into `out` with weight `k`.
fn boundary_generator_into(q: &Quandle, tuple: &Tuple, k: &BigInt, out: &mut Chain) {
    let x = tuple.entries();
    let n = x.len();
    // i is 1-based in the boundary formula; here idx = i - 1
    for idx in 1..n {
        let positive = idx % 2 == 1; // (-1)^i with i = idx + 1
        let signed = if positive { k.clone() } else { -k };
        let mut face = Vec::with_capacity(n - 1);
        face.extend_from_slice(&x[..idx]);
        face.extend_from_slice(&x[idx + 1..]);
        let mut acted = Vec::with_capacity(n - 1);
        acted.extend(x[..idx].iter().map(|&a| q.act_unchecked(a, x[idx])));
        acted.extend_from_slice(&x[idx + 1..]);
        out.add_term(Tuple(face), signed.clone())
            .expect("face has degree n-1");
        out.add_term(Tuple(acted), -signed)
            .expect("face has degree n-1");
    }
}

/// The rack boundary `C^R_n -> C^R_{n-1}`.
pub fn boundary_rack(c: &Chain, q: &Quandle) -> Result<Chain, ChainError> {
    if c.degree() < 2 {
        return Err(ChainError::DegreeTooLow(c.degree()));
    }
    c.check_entries(q)?;
    let mut out = Chain::zero(c.degree() - 1);
    for (t, k) in c {
        boundary_generator_into(q, t, k, &mut out);
    }
    Ok(out)
}

/// Drops every degenerate generator.
pub fn project_quandle(c: &Chain) -> Chain {
    Chain {
        degree: c.degree,
        terms: c
            .terms
            .iter()
            .filter(|(t, _)| !t.is_degenerate())
            .map(|(t, k)| (t.clone(), k.clone()))
            .collect(),
    }
}

/// The quandle boundary: the rack boundary followed by the projection.
/// The input must already be free of degenerate generators.
pub fn boundary_quandle(c: &Chain, q: &Quandle) -> Result<Chain, ChainError> {
    if let Some(t) = c.has_degenerate_term() {
        return Err(ChainError::Degenerate(t.clone()));
    }
    Ok(project_quandle(&boundary_rack(c, q)?))
}

/// Lexicographically ordered non-degenerate tuples of a given degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuandleBasis {
    degree: usize,
    tuples: Vec<Tuple>,
}

impl QuandleBasis {
    pub fn new(q: &Quandle, degree: usize) -> Self {
        let n = q.order();
        let mut tuples = Vec::new();
        let mut current = Vec::with_capacity(degree);
        fn extend(n: usize, degree: usize, current: &mut Vec<Element>, out: &mut Vec<Tuple>) {
            if current.len() == degree {
                out.push(Tuple(current.clone()));
                return;
            }
            for x in 0..n {
                if current.last() == Some(&x) {
                    continue;
                }
                current.push(x);
                extend(n, degree, current, out);
                current.pop();
            }
        }
        extend(n, degree, &mut current, &mut tuples);
        QuandleBasis { degree, tuples }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn index_of(&self, t: &Tuple) -> Option<usize> {
        self.tuples.binary_search(t).ok()
    }

    /// Coordinates of a quandle chain in this basis.
    pub fn coordinates(&self, c: &Chain) -> Result<Vec<BigInt>, ChainError> {
        if c.degree() != self.degree {
            return Err(ChainError::DegreeMismatch {
                expected: self.degree,
                found: c.degree(),
            });
        }
        let mut v = vec![BigInt::zero(); self.len()];
        for (t, k) in c {
            let i = self.index_of(t).ok_or_else(|| {
                if t.is_degenerate() {
                    ChainError::Degenerate(t.clone())
                } else {
                    ChainError::NotInBasis(t.clone())
                }
            })?;
            v[i] = k.clone();
        }
        Ok(v)
    }

    pub fn chain_from_coordinates(&self, v: &[BigInt]) -> Chain {
        let mut c = Chain::zero(self.degree);
        for (t, k) in self.tuples.iter().zip(v) {
            c.add_term(t.clone(), k.clone())
                .expect("basis tuples share the degree");
        }
        c
    }
}

/// Matrix of the quandle boundary from degree `n` to degree `n - 1`, with
/// columns indexed by the degree-`n` basis.
pub fn matrix_of_boundary(q: &Quandle, n: usize) -> Result<IntMatrix, ChainError> {
    if n < 2 {
        return Err(ChainError::DegreeTooLow(n));
    }
    let domain = QuandleBasis::new(q, n);
    let codomain = QuandleBasis::new(q, n - 1);
    let mut m = IntMatrix::zeros(codomain.len(), domain.len());
    for (j, t) in domain.tuples().iter().enumerate() {
        let image = boundary_quandle(&Chain::generator(t.clone()), q)?;
        for (s, k) in &image {
            let i = codomain
                .index_of(s)
                .expect("projected boundary is non-degenerate");
            m.set(i, j, k.clone());
        }
    }
    Ok(m)
}
