//! Colored triple-point data and pseudo-cycles.
//!
//! A set `c` of triple points is a pseudo-cycle when its signed chain
//! `sum_{t in c} sign(t) * (p_t, q_t, r_t)`, read in the quandle complex, is a
//! 3-cycle that is not null-homologous. Triple points with degenerate colors
//! contribute nothing there. [`PseudoCycleFinder`] decides this for single subsets,
//! enumerates all of them, and finds a largest family of pairwise disjoint
//! pseudo-cycles.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use dashmap::DashMap;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{boundary_quandle, project_quandle, Chain, Tuple};
use crate::homology::{HomologyContext, HomologyError};
use crate::quandle::{Element, Quandle, QuandleSpec};

pub const DEFAULT_POINT_CAP: usize = 20;

// bitmasks are u64; the enumeration itself is the practical limit
const HARD_POINT_LIMIT: usize = 63;

/// Sign of a triple point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_i64(s: i64) -> Option<Sign> {
        match s {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePoint {
    pub id: String,
    pub sign: Sign,
    pub colors: [Element; 3],
}

impl TriplePoint {
    pub fn new(id: impl Into<String>, sign: Sign, colors: [Element; 3]) -> Self {
        TriplePoint {
            id: id.into(),
            sign,
            colors,
        }
    }
}

/// Input error with the JSON path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct DatasetError {
    pub path: String,
    pub message: String,
}

impl DatasetError {
    fn new(path: impl Into<String>, message: impl fmt::Display) -> Self {
        DatasetError {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointRepr {
    id: String,
    sign: i64,
    colors: [Element; 3],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetRepr {
    quandle: QuandleSpec,
    triple_points: Vec<PointRepr>,
}

/// Signed, colored triple points over one quandle, with unique ids.
///
/// Points are kept sorted by id; subset bitmasks index into that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePointDataset {
    spec: QuandleSpec,
    quandle: Quandle,
    points: Vec<TriplePoint>,
}

impl TriplePointDataset {
    pub fn new(spec: QuandleSpec, points: Vec<TriplePoint>) -> Result<Self, DatasetError> {
        let quandle = spec.build().map_err(|e| DatasetError::new("quandle", e))?;
        let mut seen = HashMap::new();
        for (i, pt) in points.iter().enumerate() {
            if let Some(first) = seen.insert(pt.id.as_str(), i) {
                return Err(DatasetError::new(
                    format!("triple_points[{i}].id"),
                    format!(
                        "duplicate id {:?} (first used at triple_points[{first}])",
                        pt.id
                    ),
                ));
            }
            for (j, &c) in pt.colors.iter().enumerate() {
                if c >= quandle.order() {
                    return Err(DatasetError::new(
                        format!("triple_points[{i}].colors[{j}]"),
                        format!("color {c} is outside 0..{}", quandle.order()),
                    ));
                }
            }
        }
        let mut points = points;
        points.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(TriplePointDataset {
            spec,
            quandle,
            points,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self, DatasetError> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let repr: DatasetRepr = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            DatasetError::new(
                if path == "." { "$".to_string() } else { path },
                e.into_inner(),
            )
        })?;
        let mut points = Vec::with_capacity(repr.triple_points.len());
        for (i, p) in repr.triple_points.into_iter().enumerate() {
            let sign = Sign::from_i64(p.sign).ok_or_else(|| {
                DatasetError::new(
                    format!("triple_points[{i}].sign"),
                    format!("sign must be 1 or -1, got {}", p.sign),
                )
            })?;
            points.push(TriplePoint {
                id: p.id,
                sign,
                colors: p.colors,
            });
        }
        Self::new(repr.quandle, points)
    }

    pub fn to_json_string(&self) -> String {
        let repr = DatasetRepr {
            quandle: self.spec.clone(),
            triple_points: self
                .points
                .iter()
                .map(|p| PointRepr {
                    id: p.id.clone(),
                    sign: p.sign.as_i64(),
                    colors: p.colors,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&repr).expect("dataset serializes")
    }

    pub fn quandle(&self) -> &Quandle {
        &self.quandle
    }

    pub fn quandle_spec(&self) -> &QuandleSpec {
        &self.spec
    }

    /// Points in id order.
    pub fn points(&self) -> &[TriplePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.binary_search_by(|p| p.id.as_str().cmp(id)).ok()
    }

    /// Same dataset with the points restricted to `ids`.
    pub fn restrict<S: AsRef<str>>(&self, ids: &[S]) -> Result<Self, PseudoCycleError> {
        let points = self
            .indices_of(ids)?
            .into_iter()
            .map(|i| self.points[i].clone())
            .collect();
        Ok(TriplePointDataset {
            spec: self.spec.clone(),
            quandle: self.quandle.clone(),
            points,
        })
    }

    /// Applies `rename` to every id.
    pub fn map_ids(&self, mut rename: impl FnMut(&str) -> String) -> Result<Self, DatasetError> {
        let points = self
            .points
            .iter()
            .map(|p| TriplePoint {
                id: rename(&p.id),
                ..p.clone()
            })
            .collect();
        Self::new(self.spec.clone(), points)
    }

    /// Every sign flipped.
    pub fn sign_flipped(&self) -> Self {
        let mut out = self.clone();
        for p in &mut out.points {
            p.sign = p.sign.flipped();
        }
        out
    }

    /// Sorted, deduplicated point indices of `ids`.
    pub fn indices_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>, PseudoCycleError> {
        let set = ids
            .iter()
            .map(|id| {
                let id = id.as_ref();
                self.index_of(id)
                    .ok_or_else(|| PseudoCycleError::UnknownId(id.to_string()))
            })
            .collect::<Result<BTreeSet<usize>, _>>()?;
        Ok(set.into_iter().collect())
    }

    fn points_of_mask(&self, mask: u64) -> impl Iterator<Item = &TriplePoint> {
        self.points
            .iter()
            .enumerate()
            .filter(move |(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p)
    }

    pub fn ids_of_mask(&self, mask: u64) -> Vec<String> {
        self.points_of_mask(mask).map(|p| p.id.clone()).collect()
    }

    fn signed_chain<'p>(points: impl Iterator<Item = &'p TriplePoint>) -> Chain {
        let mut c = Chain::zero(3);
        for p in points {
            c.add_term(Tuple::from(p.colors), BigInt::from(p.sign.as_i64()))
                .expect("triple has degree 3");
        }
        c
    }

    fn chain_of_mask(&self, mask: u64) -> Chain {
        Self::signed_chain(self.points_of_mask(mask))
    }

    /// The signed chain `sum sign(t) * (p_t, q_t, r_t)` of a subset of points.
    pub fn chain_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<Chain, PseudoCycleError> {
        let idx = self.indices_of(ids)?;
        Ok(Self::signed_chain(idx.into_iter().map(|i| &self.points[i])))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PseudoCycleError {
    #[error("unknown triple point id {0:?}")]
    UnknownId(String),
    #[error("dataset has {points} triple points, above the enumeration cap of {cap}")]
    CapExceeded { points: usize, cap: usize },
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Result of a full pseudo-cycle analysis. Subsets are sorted id lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudoCycleReport {
    pub pseudo_cycles: Vec<Vec<String>>,
    pub distinct_count: usize,
    pub max_disjoint_count: usize,
    pub witness_packing: Vec<Vec<String>>,
}

impl PseudoCycleReport {
    /// Structural invariants: witness subsets are listed pseudo-cycles,
    /// pairwise disjoint, and counted correctly.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.distinct_count != self.pseudo_cycles.len() {
            return Err("distinct_count differs from the number of listed pseudo-cycles".into());
        }
        if self.max_disjoint_count != self.witness_packing.len() {
            return Err("max_disjoint_count differs from the witness size".into());
        }
        let mut used = BTreeSet::new();
        for w in &self.witness_packing {
            if !self.pseudo_cycles.contains(w) {
                return Err(format!("witness subset {w:?} is not a listed pseudo-cycle"));
            }
            for id in w {
                if !used.insert(id) {
                    return Err(format!("witness subsets overlap at {id:?}"));
                }
            }
        }
        Ok(())
    }
}

/// Maximum disjoint family of pseudo-cycles with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub count: usize,
    pub witness: Vec<Vec<String>>,
}

/// Pseudo-cycle queries over one dataset, sharing a homology context and a
/// memo of null-homology verdicts keyed by sign-normalized chain.
pub struct PseudoCycleFinder<'a> {
    dataset: &'a TriplePointDataset,
    homology: HomologyContext,
    memo: DashMap<Chain, bool>,
    cap: usize,
}

impl<'a> PseudoCycleFinder<'a> {
    pub fn new(dataset: &'a TriplePointDataset) -> Self {
        Self::with_cap(dataset, DEFAULT_POINT_CAP)
    }

    pub fn with_cap(dataset: &'a TriplePointDataset, cap: usize) -> Self {
        PseudoCycleFinder {
            dataset,
            homology: HomologyContext::new(dataset.quandle().clone()),
            memo: DashMap::new(),
            cap: cap.min(HARD_POINT_LIMIT),
        }
    }

    pub fn dataset(&self) -> &TriplePointDataset {
        self.dataset
    }

    pub fn homology(&self) -> &HomologyContext {
        &self.homology
    }

    fn check_cap(&self) -> Result<(), PseudoCycleError> {
        let points = self.dataset.len();
        if points > self.cap {
            return Err(PseudoCycleError::CapExceeded {
                points,
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn is_pseudo_cycle_mask(&self, mask: u64) -> Result<bool, PseudoCycleError> {
        self.is_pseudo_cycle_chain(self.dataset.chain_of_mask(mask))
    }

    fn is_pseudo_cycle_chain(&self, c: Chain) -> Result<bool, PseudoCycleError> {
        // degenerate color triples vanish in the quandle complex
        let c = project_quandle(&c);
        if c.is_zero() {
            return Ok(false);
        }
        let boundary = boundary_quandle(&c, self.dataset.quandle()).map_err(HomologyError::from)?;
        if !boundary.is_zero() {
            return Ok(false);
        }
        let key = c.sign_normalized();
        if let Some(null) = self.memo.get(&key) {
            return Ok(!*null);
        }
        let null = self.homology.is_null_homologous(&key)?;
        self.memo.entry(key).or_insert(null);
        Ok(!null)
    }

    pub fn is_pseudo_cycle<S: AsRef<str>>(&self, ids: &[S]) -> Result<bool, PseudoCycleError> {
        self.is_pseudo_cycle_chain(self.dataset.chain_of(ids)?)
    }

    fn enumerate_masks(&self) -> Result<Vec<u64>, PseudoCycleError> {
        self.check_cap()?;
        let n = self.dataset.len();
        let flags: Vec<bool> = (1..1u64 << n)
            .into_par_iter()
            .map(|mask| self.is_pseudo_cycle_mask(mask))
            .collect::<Result<_, _>>()?;
        Ok((1..1u64 << n)
            .zip(flags)
            .filter(|(_, f)| *f)
            .map(|(m, _)| m)
            .collect())
    }

    /// All nonempty pseudo-cycle subsets, in ascending bitmask order.
    pub fn enumerate(&self) -> Result<Vec<Vec<String>>, PseudoCycleError> {
        Ok(self
            .enumerate_masks()?
            .into_iter()
            .map(|m| self.dataset.ids_of_mask(m))
            .collect())
    }

    fn packing_from_masks(&self, masks: &[u64]) -> Packing {
        let mut candidates: Vec<(Vec<String>, u64)> = masks
            .iter()
            .map(|&m| (self.dataset.ids_of_mask(m), m))
            .collect();
        candidates.sort();
        let sets: Vec<u64> = candidates.iter().map(|(_, m)| *m).collect();
        let min_size = sets
            .iter()
            .map(|m| m.count_ones())
            .min()
            .unwrap_or(1)
            .max(1);

        let mut search = PackingSearch {
            sets: &sets,
            min_size,
            best: Vec::new(),
            current: Vec::new(),
        };
        search.descend(0, 0);
        Packing {
            count: search.best.len(),
            witness: search
                .best
                .iter()
                .map(|&i| candidates[i].0.clone())
                .collect(),
        }
    }

    /// Largest family of pairwise disjoint pseudo-cycles. Among families of
    /// that size the witness is the lexicographically least one, comparing
    /// families as sorted lists of sorted id lists.
    pub fn max_disjoint_packing(&self) -> Result<Packing, PseudoCycleError> {
        let masks = self.enumerate_masks()?;
        Ok(self.packing_from_masks(&masks))
    }

    pub fn report(&self) -> Result<PseudoCycleReport, PseudoCycleError> {
        let masks = self.enumerate_masks()?;
        let packing = self.packing_from_masks(&masks);
        let report = PseudoCycleReport {
            pseudo_cycles: masks.iter().map(|&m| self.dataset.ids_of_mask(m)).collect(),
            distinct_count: masks.len(),
            max_disjoint_count: packing.count,
            witness_packing: packing.witness,
        };
        debug_assert_eq!(report.check_invariants(), Ok(()));
        Ok(report)
    }
}

impl fmt::Debug for PseudoCycleFinder<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PseudoCycleFinder")
            .field("points", &self.dataset.len())
            .field("cap", &self.cap)
            .field("memoized", &self.memo.len())
            .finish()
    }
}

/// Depth-first search for a maximum family of pairwise disjoint bitmasks.
/// Candidates are tried in index order and the incumbent is replaced only
/// on strict improvement, so the first maximum found is lexicographically
/// least by index sequence.
struct PackingSearch<'s> {
    sets: &'s [u64],
    min_size: u32,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl PackingSearch<'_> {
    fn descend(&mut self, start: usize, used: u64) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        let compatible = self.sets[start..]
            .iter()
            .filter(|&&s| s & used == 0)
            .count();
        let free_points = self.sets[start..]
            .iter()
            .filter(|&&s| s & used == 0)
            .fold(0u64, |acc, s| acc | s)
            .count_ones();
        let bound = compatible.min((free_points / self.min_size) as usize);
        if self.current.len() + bound <= self.best.len() {
            return;
        }
        for i in start..self.sets.len() {
            let s = self.sets[i];
            if s & used != 0 {
                continue;
            }
            self.current.push(i);
            self.descend(i + 1, used | s);
            self.current.pop();
        }
    }
}

pub fn chain_of<S: AsRef<str>>(
    ids: &[S],
    ds: &TriplePointDataset,
) -> Result<Chain, PseudoCycleError> {
    ds.chain_of(ids)
}

pub fn is_pseudo_cycle<S: AsRef<str>>(
    ids: &[S],
    ds: &TriplePointDataset,
) -> Result<bool, PseudoCycleError> {
    PseudoCycleFinder::new(ds).is_pseudo_cycle(ids)
}

pub fn enumerate_pseudo_cycles(
    ds: &TriplePointDataset,
) -> Result<Vec<Vec<String>>, PseudoCycleError> {
    PseudoCycleFinder::new(ds).enumerate()
}

pub fn max_disjoint_packing(ds: &TriplePointDataset) -> Result<Packing, PseudoCycleError> {
    PseudoCycleFinder::new(ds).max_disjoint_packing()
}
