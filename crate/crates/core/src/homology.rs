//! Integral quandle homology and the null-homology decision.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{boundary_quandle, matrix_of_boundary, Chain, ChainError, QuandleBasis};
use crate::linalg::{snf, solve_with, IntMatrix, LinalgError, SmithDecomposition};
use crate::quandle::Quandle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("homology degree must be at least 1")]
    DegreeZero,
    #[error("chain is not a cycle: its boundary is {0}")]
    NotACycle(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A finitely generated abelian group `Z^free_rank + Z/d_1 + .. + Z/d_k`
/// with `d_i >= 2` and `d_i | d_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyGroup {
    pub free_rank: usize,
    #[serde(with = "torsion_serde")]
    pub torsion: Vec<BigInt>,
}

// torsion as plain JSON numbers where they fit, which they always do at
// the scales this crate handles
mod torsion_serde {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::de::Error as _;
    use serde::ser::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let nums = v
            .iter()
            .map(|d| {
                d.to_u64()
                    .ok_or_else(|| S::Error::custom(format!("torsion {d} too large")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        s.collect_seq(nums)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let nums = Vec::<u64>::deserialize(d)?;
        if nums.iter().any(|&x| x < 2) {
            return Err(D::Error::custom("torsion coefficients must be at least 2"));
        }
        Ok(nums.into_iter().map(BigInt::from).collect())
    }
}

impl HomologyGroup {
    pub fn trivial() -> Self {
        HomologyGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion
            .iter()
            .filter_map(ToPrimitive::to_u64)
            .collect()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Quandle boundary `C_n -> C_{n-1}` together with its Smith decomposition.
#[derive(Debug)]
pub struct BoundaryOperator {
    pub degree: usize,
    pub domain: QuandleBasis,
    pub codomain: QuandleBasis,
    pub matrix: IntMatrix,
    pub smith: SmithDecomposition,
}

impl BoundaryOperator {
    fn build(q: &Quandle, degree: usize) -> Result<Self, HomologyError> {
        let matrix = matrix_of_boundary(q, degree)?;
        let smith = snf(&matrix);
        Ok(BoundaryOperator {
            degree,
            domain: QuandleBasis::new(q, degree),
            codomain: QuandleBasis::new(q, degree - 1),
            matrix,
            smith,
        })
    }

    pub fn rank(&self) -> usize {
        self.smith.rank()
    }
}

/// Homology computations over one quandle, caching boundary operators by
/// degree. Cache entries are written once and then shared read-only, so a
/// context may be used from several threads at once.
pub struct HomologyContext {
    quandle: Quandle,
    cache: RwLock<HashMap<usize, Arc<BoundaryOperator>>>,
}

impl HomologyContext {
    pub fn new(quandle: Quandle) -> Self {
        HomologyContext {
            quandle,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn quandle(&self) -> &Quandle {
        &self.quandle
    }

    /// The boundary operator out of degree `degree` (at least 2).
    pub fn boundary(&self, degree: usize) -> Result<Arc<BoundaryOperator>, HomologyError> {
        if let Some(op) = self.cache.read().expect("cache poisoned").get(&degree) {
            return Ok(Arc::clone(op));
        }
        // built outside the lock; a concurrent builder produces the same value
        let built = Arc::new(BoundaryOperator::build(&self.quandle, degree)?);
        let mut cache = self.cache.write().expect("cache poisoned");
        Ok(Arc::clone(cache.entry(degree).or_insert(built)))
    }

    /// `H_n^Q(X; Z) = ker d_n / im d_{n+1}`.
    pub fn homology_group(&self, n: usize) -> Result<HomologyGroup, HomologyError> {
        if n == 0 {
            return Err(HomologyError::DegreeZero);
        }
        let chains = QuandleBasis::new(&self.quandle, n).len();
        // d_1 is the zero map
        let rank_out = if n == 1 { 0 } else { self.boundary(n)?.rank() };
        let incoming = self.boundary(n + 1)?;
        let factors = incoming.smith.invariant_factors();
        let kernel = chains - rank_out;
        Ok(HomologyGroup {
            free_rank: kernel - factors.len(),
            torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
        })
    }

    /// Whether a quandle cycle lies in the image of the next boundary.
    /// Passing a chain that is not a cycle is an error.
    pub fn is_null_homologous(&self, c: &Chain) -> Result<bool, HomologyError> {
        c.check_entries(&self.quandle)?;
        if c.degree() >= 2 {
            let d = boundary_quandle(c, &self.quandle)?;
            if !d.is_zero() {
                return Err(HomologyError::NotACycle(d.to_string()));
            }
        } else if let Some(t) = c.has_degenerate_term() {
            return Err(ChainError::Degenerate(t.clone()).into());
        }
        if c.is_zero() {
            return Ok(true);
        }
        let op = self.boundary(c.degree() + 1)?;
        let target = op.codomain.coordinates(c)?;
        Ok(solve_with(&op.matrix, &op.smith, &target)?.is_some())
    }

    /// A chain `d` of degree `c.degree() + 1` with boundary `c`, when one exists.
    pub fn bounding_chain(&self, c: &Chain) -> Result<Option<Chain>, HomologyError> {
        let op = self.boundary(c.degree() + 1)?;
        let target = op.codomain.coordinates(c)?;
        Ok(solve_with(&op.matrix, &op.smith, &target)?
            .map(|x| op.domain.chain_from_coordinates(&x)))
    }
}

impl fmt::Debug for HomologyContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cached: Vec<usize> = self
            .cache
            .read()
            .map(|c| c.keys().copied().collect())
            .unwrap_or_default();
        f.debug_struct("HomologyContext")
            .field("quandle", &self.quandle)
            .field("cached_degrees", &cached)
            .finish()
    }
}

pub fn homology_group(q: &Quandle, n: usize) -> Result<HomologyGroup, HomologyError> {
    HomologyContext::new(q.clone()).homology_group(n)
}

pub fn is_null_homologous(c: &Chain, q: &Quandle) -> Result<bool, HomologyError> {
    HomologyContext::new(q.clone()).is_null_homologous(c)
}
