//! `Z/m`-valued quandle 3-cocycles and their pairing with 3-chains.
//!
//! A cocycle is stored as its full value table; constructors use formulas
//! only to fill the table. The cocycle condition is checked against this
//! crate's own boundary operator rather than a hand-written identity, so it
//! is consistent with whatever sign convention [`crate::chain`] uses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::chain::{boundary_rack, project_quandle, Chain, ChainError};
use crate::quandle::{Element, Quandle, QuandleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("prime {p} exceeds the supported maximum {max}")]
    PrimeTooLarge { p: u64, max: u64 },
    #[error("value table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("cocycle is defined over a quandle of order {cocycle}, chain is over a different quandle of order {chain}")]
    QuandleMismatch { cocycle: usize, chain: usize },
    #[error("pairing needs a 3-chain, got degree {0}")]
    WrongDegree(usize),
    #[error("constructed table fails the cocycle check: {0}")]
    Invalid(CocycleViolation),
    #[error(transparent)]
    Quandle(#[from] QuandleError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Why a table is not a quandle 3-cocycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CocycleViolation {
    /// Nonzero on a triple with two equal adjacent entries.
    Degenerate { triple: [Element; 3], value: u64 },
    /// Nonzero on the projected boundary of a 4-tuple.
    Condition { quadruple: [Element; 4], value: u64 },
}

impl std::fmt::Display for CocycleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CocycleViolation::Degenerate {
                triple: [a, b, c],
                value,
            } => {
                write!(f, "value {value} on degenerate triple ({a},{b},{c})")
            }
            CocycleViolation::Condition {
                quadruple: [a, b, c, d],
                value,
            } => {
                write!(
                    f,
                    "pairing with the boundary of ({a},{b},{c},{d}) is {value}"
                )
            }
        }
    }
}

/// A function from element triples to `Z/m`, over a fixed quandle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle3 {
    quandle: Quandle,
    modulus: u64,
    // values[(p * n + q) * n + r]
    values: Vec<u64>,
}

impl Cocycle3 {
    /// Fills the table from `f`; values are reduced into `0..modulus`.
    pub fn from_fn(
        quandle: Quandle,
        modulus: u64,
        mut f: impl FnMut(Element, Element, Element) -> i64,
    ) -> Result<Self, CocycleError> {
        if modulus < 2 {
            return Err(CocycleError::BadModulus(modulus));
        }
        let n = quandle.order();
        let m = modulus as i128;
        let mut values = Vec::with_capacity(n * n * n);
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    values.push((f(p, q, r) as i128).rem_euclid(m) as u64);
                }
            }
        }
        Ok(Cocycle3 {
            quandle,
            modulus,
            values,
        })
    }

    pub fn from_values(
        quandle: Quandle,
        modulus: u64,
        values: Vec<u64>,
    ) -> Result<Self, CocycleError> {
        if modulus < 2 {
            return Err(CocycleError::BadModulus(modulus));
        }
        let expected = quandle.order().pow(3);
        if values.len() != expected {
            return Err(CocycleError::TableSize {
                expected,
                found: values.len(),
            });
        }
        let values = values.into_iter().map(|v| v % modulus).collect();
        Ok(Cocycle3 {
            quandle,
            modulus,
            values,
        })
    }

    pub fn zero(quandle: Quandle, modulus: u64) -> Result<Self, CocycleError> {
        Self::from_fn(quandle, modulus, |_, _, _| 0)
    }

    pub fn quandle(&self) -> &Quandle {
        &self.quandle
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Value at `(p, q, r)`. Panics when an entry is out of range.
    pub fn value(&self, p: Element, q: Element, r: Element) -> u64 {
        let n = self.quandle.order();
        assert!(p < n && q < n && r < n, "triple out of range");
        self.values[(p * n + q) * n + r]
    }

    /// Pairs with a 3-chain over `quandle`: `sum coeff * f(tuple) mod m`.
    pub fn pair(&self, quandle: &Quandle, c: &Chain) -> Result<u64, CocycleError> {
        if quandle != &self.quandle {
            return Err(CocycleError::QuandleMismatch {
                cocycle: self.quandle.order(),
                chain: quandle.order(),
            });
        }
        self.pair_unchecked_quandle(c)
    }

    fn pair_unchecked_quandle(&self, c: &Chain) -> Result<u64, CocycleError> {
        if c.degree() != 3 {
            return Err(CocycleError::WrongDegree(c.degree()));
        }
        c.check_entries(&self.quandle)?;
        let m = BigInt::from(self.modulus);
        let mut total = BigInt::zero();
        for (t, k) in c {
            let [p, q, r] = t.entries() else {
                unreachable!("degree checked")
            };
            total += k * BigInt::from(self.value(*p, *q, *r));
        }
        Ok(total.mod_floor(&m).to_u64().expect("reduced below modulus"))
    }

    /// Checks the two defining conditions, returning the first violation.
    pub fn check(&self) -> Result<(), CocycleViolation> {
        let n = self.quandle.order();
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    let value = self.value(p, q, r);
                    if (p == q || q == r) && value != 0 {
                        return Err(CocycleViolation::Degenerate {
                            triple: [p, q, r],
                            value,
                        });
                    }
                }
            }
        }
        // every quadruple, degenerate ones included; their boundaries lie in
        // the degenerate subcomplex and must pair to zero as well
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let g = Chain::generator([a, b, c, d]);
                        let boundary = project_quandle(
                            &boundary_rack(&g, &self.quandle).expect("quadruple is in range"),
                        );
                        let value = self
                            .pair_unchecked_quandle(&boundary)
                            .expect("boundary has degree 3");
                        if value != 0 {
                            return Err(CocycleViolation::Condition {
                                quadruple: [a, b, c, d],
                                value,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of quadruples [`Cocycle3::check`] pairs against.
    pub fn quadruples_checked(&self) -> usize {
        self.quandle.order().pow(4)
    }

    pub fn is_quandle_3cocycle(&self) -> bool {
        self.check().is_ok()
    }

    pub fn table(&self) -> CocycleTable {
        let n = self.quandle.order();
        CocycleTable {
            quandle_order: n,
            modulus: self.modulus,
            values: (0..n)
                .map(|p| {
                    (0..n)
                        .map(|q| (0..n).map(|r| self.value(p, q, r)).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// JSON export of a value table, `values[p][q][r]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleTable {
    pub quandle_order: usize,
    pub modulus: u64,
    pub values: Vec<Vec<Vec<u64>>>,
}

fn is_odd_prime(p: u64) -> bool {
    p >= 3
        && p % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// `(a - b) * ((2c - b)^p + b^p - 2c^p) / p` over the integers, with the
/// canonical representatives `0..p`. The inner division must be exact.
fn mochizuki_value(p: u64, a: Element, b: Element, c: Element) -> BigInt {
    let exp = p as u32;
    let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    let two = BigInt::from(2);
    let inner = (&two * &c - &b).pow(exp) + b.pow(exp) - &two * c.pow(exp);
    let (quot, rem) = inner.div_rem(&BigInt::from(p));
    assert!(
        rem.is_zero(),
        "inexact division by {p} in the Mochizuki formula"
    );
    (a - b) * quot
}

/// Largest prime accepted by [`mochizuki_theta_p`]; validation costs `p^4`.
pub const MAX_MOCHIZUKI_PRIME: u64 = 31;

/// The Mochizuki 3-cocycle on `R_p` with values in `Z/p`, for an odd prime `p`.
///
/// The table is validated with [`Cocycle3::check`] before it is returned.
pub fn mochizuki_theta_p(p: u64) -> Result<Cocycle3, CocycleError> {
    if !is_odd_prime(p) {
        return Err(CocycleError::NotOddPrime(p));
    }
    if p > MAX_MOCHIZUKI_PRIME {
        return Err(CocycleError::PrimeTooLarge {
            p,
            max: MAX_MOCHIZUKI_PRIME,
        });
    }
    let quandle = Quandle::dihedral(p as usize)?;
    let n = quandle.order();
    let m = BigInt::from(p);
    let mut values = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = mochizuki_value(p, a, b, c).mod_floor(&m);
                values.push(v.to_u64().expect("reduced mod p"));
            }
        }
    }
    let cocycle = Cocycle3::from_values(quandle, p, values)?;
    cocycle.check().map_err(CocycleError::Invalid)?;
    Ok(cocycle)
}

/// The Mochizuki 3-cocycle on `R_3` with values in `Z/3`.
pub fn mochizuki_theta() -> Cocycle3 {
    mochizuki_theta_p(3).expect("the order-3 Mochizuki table is a cocycle")
}

/// Parses `mochizuki:<p>`.
pub fn cocycle_from_spec(spec: &str) -> Result<Cocycle3, CocycleSpecError> {
    let (kind, param) = spec
        .split_once(':')
        .ok_or_else(|| CocycleSpecError::Syntax(spec.to_string()))?;
    match kind {
        "mochizuki" => {
            let p: u64 = param
                .trim()
                .parse()
                .map_err(|_| CocycleSpecError::Syntax(spec.to_string()))?;
            Ok(mochizuki_theta_p(p)?)
        }
        other => Err(CocycleSpecError::UnknownKind(other.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleSpecError {
    #[error("malformed cocycle spec {0:?}, expected mochizuki:<p>")]
    Syntax(String),
    #[error("unknown cocycle kind {0:?}")]
    UnknownKind(String),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r3() -> Quandle {
        Quandle::dihedral(3).unwrap()
    }

    fn c1() -> Chain {
        Chain::from_terms(3, [([2, 0, 2], 1), ([2, 1, 0], 1)]).unwrap()
    }

    #[test]
    fn theta_values() {
        let theta = mochizuki_theta();
        assert_eq!(theta.value(2, 0, 2), 2);
        assert_eq!(theta.value(2, 1, 0), 0);
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(theta.value(x, x, y), 0);
            }
        }
    }

    #[test]
    fn theta_pairings() {
        let theta = mochizuki_theta();
        let q = r3();
        assert_eq!(theta.pair(&q, &c1()).unwrap(), 2);
        assert_eq!(theta.pair(&q, &-c1()).unwrap(), 1);
        assert_eq!(theta.pair(&q, &Chain::zero(3)).unwrap(), 0);
        assert_eq!(
            theta.pair(&q, &Chain::generator([0, 1])),
            Err(CocycleError::WrongDegree(2))
        );
    }

    #[test]
    fn theta_is_a_cocycle() {
        assert!(mochizuki_theta().is_quandle_3cocycle());
        assert!(Cocycle3::zero(r3(), 3).unwrap().is_quandle_3cocycle());
    }

    #[test]
    fn first_coordinate_is_not_a_cocycle() {
        let f = Cocycle3::from_fn(r3(), 3, |p, _, _| p as i64).unwrap();
        match f.check() {
            Err(CocycleViolation::Degenerate {
                triple: [p, q, r],
                value,
            }) => {
                assert!(p == q || q == r);
                assert_ne!(p, 0);
                assert_eq!(value, p as u64);
            }
            other => panic!("expected degenerate violation, got {other:?}"),
        }
    }

    #[test]
    fn non_degenerate_violation_reports_quadruple() {
        // supported on one non-degenerate triple only
        let f = Cocycle3::from_fn(r3(), 3, |p, q, r| i64::from((p, q, r) == (0, 1, 0))).unwrap();
        assert!(matches!(f.check(), Err(CocycleViolation::Condition { .. })));
    }

    #[test]
    fn generalized_family() {
        let t3 = mochizuki_theta_p(3).unwrap();
        assert_eq!(t3, mochizuki_theta());
        let t5 = mochizuki_theta_p(5).unwrap();
        assert!(t5.is_quandle_3cocycle());
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(t5.value(x, x, y), 0);
            }
        }
        assert!(t5.values.iter().any(|&v| v != 0));
        assert!(mochizuki_theta_p(7).unwrap().is_quandle_3cocycle());
    }

    #[test]
    fn rejects_non_primes() {
        for p in [0, 1, 2, 4, 9, 15] {
            assert_eq!(mochizuki_theta_p(p), Err(CocycleError::NotOddPrime(p)));
        }
        assert_eq!(
            mochizuki_theta_p(1_000_003),
            Err(CocycleError::PrimeTooLarge {
                p: 1_000_003,
                max: MAX_MOCHIZUKI_PRIME
            })
        );
    }

    #[test]
    fn quandle_mismatch() {
        let t5 = mochizuki_theta_p(5).unwrap();
        assert!(matches!(
            t5.pair(&r3(), &c1()),
            Err(CocycleError::QuandleMismatch { .. })
        ));
    }

    #[test]
    fn exact_divisibility_sweep() {
        for q in -20i64..=20 {
            for r in -20i64..=20 {
                let e = (2 * r - q).pow(3) + q.pow(3) - 2 * r.pow(3);
                assert_eq!(e.rem_euclid(3), 0, "q={q} r={r}");
            }
        }
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(cocycle_from_spec("mochizuki:3").unwrap(), mochizuki_theta());
        assert!(matches!(
            cocycle_from_spec("mochizuki"),
            Err(CocycleSpecError::Syntax(_))
        ));
        assert!(matches!(
            cocycle_from_spec("mochizuki:x"),
            Err(CocycleSpecError::Syntax(_))
        ));
        assert!(matches!(
            cocycle_from_spec("foo:3"),
            Err(CocycleSpecError::UnknownKind(_))
        ));
        assert!(matches!(
            cocycle_from_spec("mochizuki:4"),
            Err(CocycleSpecError::Cocycle(_))
        ));
    }

    #[test]
    fn table_export() {
        let t = mochizuki_theta().table();
        assert_eq!(t.values[2][0][2], 2);
        assert_eq!(t.modulus, 3);
        assert_eq!(t.values.len(), 3);
    }

    #[test]
    fn from_values_checks_size() {
        assert!(matches!(
            Cocycle3::from_values(r3(), 3, vec![0; 26]),
            Err(CocycleError::TableSize {
                expected: 27,
                found: 26
            })
        ));
        assert_eq!(
            Cocycle3::from_values(r3(), 1, vec![0; 27]),
            Err(CocycleError::BadModulus(1))
        );
    }
}
