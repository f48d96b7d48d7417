//! Finite quandles on `{0, .., n-1}`.
//!
//! The operation table is stored row-major with `table[x][y] = x * y`: the
//! row is the *left* operand, the column the right operand that acts on it.
//! Every [`Quandle`] is validated when it is built, so downstream code may
//! assume the three axioms without re-checking them.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An element of a quandle of order `n`, always in `0..n`.
pub type Element = usize;

/// Largest order accepted by the constructors; validation is cubic in the order.
pub const MAX_ORDER: usize = 256;

fn check_order(order: usize) -> Result<(), QuandleError> {
    match order {
        0 => Err(QuandleError::EmptyOrder),
        n if n > MAX_ORDER => Err(QuandleError::OrderTooLarge {
            order: n,
            max: MAX_ORDER,
        }),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuandleError {
    #[error("quandle order must be positive")]
    EmptyOrder,
    #[error("quandle order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("operation table must be square: row {row} has {len} entries, expected {order}")]
    NotSquare {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("table entry {x}*{y} = {value} is outside 0..{order}")]
    EntryOutOfRange {
        x: Element,
        y: Element,
        value: Element,
        order: usize,
    },
    #[error("idempotency fails at x = {x}: x*x = {value}")]
    Idempotency { x: Element, value: Element },
    #[error("right multiplication by y = {y} is not a bijection: {x1}*y = {x2}*y = {value}")]
    RightBijectivity {
        y: Element,
        x1: Element,
        x2: Element,
        value: Element,
    },
    #[error("right self-distributivity fails at (x, y, z) = ({x}, {y}, {z})")]
    Distributivity { x: Element, y: Element, z: Element },
    #[error("element {element} is outside 0..{order}")]
    ElementOutOfRange { element: Element, order: usize },
}

/// A validated finite quandle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quandle {
    order: usize,
    // row-major, table[x * order + y] = x * y
    table: Vec<Element>,
}

impl Quandle {
    /// The dihedral quandle `R_n`: `x * y = 2y - x (mod n)`.
    pub fn dihedral(n: usize) -> Result<Self, QuandleError> {
        check_order(n)?;
        let table = (0..n)
            .flat_map(|x| (0..n).map(move |y| (2 * y + n - x) % n))
            .collect();
        Self::from_flat(n, table)
    }

    /// The trivial quandle of order `n`: `x * y = x`.
    pub fn trivial(n: usize) -> Result<Self, QuandleError> {
        check_order(n)?;
        let table = (0..n).flat_map(|x| std::iter::repeat_n(x, n)).collect();
        Self::from_flat(n, table)
    }

    /// Builds a quandle from a square table with `table[x][y] = x * y`,
    /// reporting the first axiom violation found together with a witness.
    pub fn from_table(table: &[Vec<Element>]) -> Result<Self, QuandleError> {
        let order = table.len();
        check_order(order)?;
        let mut flat = Vec::with_capacity(order * order);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != order {
                return Err(QuandleError::NotSquare {
                    row,
                    len: entries.len(),
                    order,
                });
            }
            flat.extend_from_slice(entries);
        }
        Self::from_flat(order, flat)
    }

    fn from_flat(order: usize, table: Vec<Element>) -> Result<Self, QuandleError> {
        debug_assert_eq!(table.len(), order * order);
        let q = Quandle { order, table };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<(), QuandleError> {
        let n = self.order;
        for x in 0..n {
            for y in 0..n {
                let value = self.op(x, y);
                if value >= n {
                    return Err(QuandleError::EntryOutOfRange {
                        x,
                        y,
                        value,
                        order: n,
                    });
                }
            }
        }
        for x in 0..n {
            let value = self.op(x, x);
            if value != x {
                return Err(QuandleError::Idempotency { x, value });
            }
        }
        for y in 0..n {
            let mut preimage: Vec<Option<Element>> = vec![None; n];
            for x in 0..n {
                let value = self.op(x, y);
                if let Some(x1) = preimage[value] {
                    return Err(QuandleError::RightBijectivity {
                        y,
                        x1,
                        x2: x,
                        value,
                    });
                }
                preimage[value] = Some(x);
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.op(self.op(x, y), z);
                    let rhs = self.op(self.op(x, z), self.op(y, z));
                    if lhs != rhs {
                        return Err(QuandleError::Distributivity { x, y, z });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn op(&self, x: Element, y: Element) -> Element {
        self.table[x * self.order + y]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `x * y`, with range checking.
    pub fn act(&self, x: Element, y: Element) -> Result<Element, QuandleError> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.op(x, y))
    }

    /// `x * y` without range checking. Panics if either operand is out of range.
    #[inline]
    pub fn act_unchecked(&self, x: Element, y: Element) -> Element {
        assert!(x < self.order && y < self.order, "element out of range");
        self.op(x, y)
    }

    pub fn check_element(&self, element: Element) -> Result<(), QuandleError> {
        if element < self.order {
            Ok(())
        } else {
            Err(QuandleError::ElementOutOfRange {
                element,
                order: self.order,
            })
        }
    }

    /// The table as nested rows, `rows()[x][y] = x * y`.
    pub fn rows(&self) -> Vec<Vec<Element>> {
        self.table
            .chunks(self.order)
            .map(<[Element]>::to_vec)
            .collect()
    }

    /// Transports the structure along a bijection `perm` of the underlying
    /// set: the result satisfies `perm(x) * perm(y) = perm(x * y)`.
    pub fn relabel(&self, perm: &[Element]) -> Result<Self, QuandleError> {
        let n = self.order;
        if perm.len() != n {
            return Err(QuandleError::NotSquare {
                row: 0,
                len: perm.len(),
                order: n,
            });
        }
        let mut table = vec![usize::MAX; n * n];
        for x in 0..n {
            for y in 0..n {
                let (px, py) = (perm[x], perm[y]);
                self.check_element(px)?;
                self.check_element(py)?;
                table[px * n + py] = perm[self.op(x, y)];
            }
        }
        if table.contains(&usize::MAX) {
            // perm is not injective, so some cell was never written
            let missing = table.iter().position(|&v| v == usize::MAX).unwrap_or(0);
            return Err(QuandleError::EntryOutOfRange {
                x: missing / n,
                y: missing % n,
                value: usize::MAX,
                order: n,
            });
        }
        Self::from_flat(n, table)
    }

    /// Elements reachable from `start` by repeatedly acting on the right
    /// or by the inverse right action.
    pub fn orbit(&self, start: Element) -> Vec<Element> {
        let n = self.order;
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                let forward = self.op(x, y);
                // inverse action: the unique w with w * y = x
                let backward = (0..n).find(|&w| self.op(w, y) == x).unwrap_or(x);
                for next in [forward, backward] {
                    if !seen[next] {
                        seen[next] = true;
                        stack.push(next);
                    }
                }
            }
        }
        (0..n).filter(|&x| seen[x]).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.orbit(0).len() == self.order
    }
}

/// Every quandle of the given order up to isomorphism, each in its
/// lexicographically least labeling. Brute force over the columns, so only
/// practical for orders up to about 5.
pub fn quandles_up_to_isomorphism(order: usize) -> Vec<Quandle> {
    if order == 0 {
        return Vec::new();
    }
    // candidate columns: permutations of 0..order fixing y
    let columns: Vec<Vec<Vec<Element>>> = (0..order)
        .map(|y| {
            permutations(order)
                .into_iter()
                .filter(|p| p[y] == y)
                .collect()
        })
        .collect();
    let relabelings = permutations(order);
    let mut found = std::collections::BTreeSet::new();
    let mut choice = vec![0usize; order];
    loop {
        let mut table = vec![0; order * order];
        for (y, &k) in choice.iter().enumerate() {
            for x in 0..order {
                table[x * order + y] = columns[y][k][x];
            }
        }
        if let Ok(q) = Quandle::from_flat(order, table) {
            let canonical = relabelings
                .iter()
                .map(|perm| q.relabel(perm).expect("permutation").table)
                .min()
                .expect("at least one relabeling");
            found.insert(canonical);
        }
        // odometer over column choices
        let mut y = 0;
        loop {
            if y == order {
                return found
                    .into_iter()
                    .map(|table| Quandle { order, table })
                    .collect();
            }
            choice[y] += 1;
            if choice[y] < columns[y].len() {
                break;
            }
            choice[y] = 0;
            y += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<Element>> {
    fn go(prefix: &mut Vec<Element>, used: &mut [bool], out: &mut Vec<Vec<Element>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

impl fmt::Debug for Quandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quandle")
            .field("order", &self.order)
            .field("table", &self.rows())
            .finish()
    }
}

/// Quandle description as it appears in dataset files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum QuandleSpec {
    Dihedral { order: usize },
    Trivial { order: usize },
    Table { table: Vec<Vec<Element>> },
}

impl QuandleSpec {
    pub fn build(&self) -> Result<Quandle, QuandleError> {
        match self {
            QuandleSpec::Dihedral { order } => Quandle::dihedral(*order),
            QuandleSpec::Trivial { order } => Quandle::trivial(*order),
            QuandleSpec::Table { table } => Quandle::from_table(table),
        }
    }
}
