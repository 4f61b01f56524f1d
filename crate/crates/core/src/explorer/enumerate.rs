//! Breadth-first enumeration of reduced words with PU deduplication.
//!
//! Each level extends the surviving words of the previous level by one letter
//! on the right. Only words whose class is new survive; this never loses the
//! shortlex-minimal witness of a class because `v ≤ w` implies `v·x ≤ w·x`.
//! Matrix products for a level are computed in parallel; deduplication runs
//! sequentially in shortlex order, so the output does not depend on the
//! schedule.

use std::collections::HashMap;

use super::{Element, GroupInput, Letter, Word};
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::isometry::{pu_equal_matrices, Isometry};
use crate::linalg::CMatrix;
use crate::par;

/// Result of a possibly truncated enumeration.
#[derive(Debug, Clone)]
pub struct Enumeration {
    /// Nontrivial classes in shortlex order of their witnesses.
    pub elements: Vec<Element>,
    /// The state budget stopped the search early.
    pub truncated: bool,
}

/// All PU classes reachable by reduced words of length `1..=max_len`, each once
/// with its shortlex-minimal word. The identity class is never yielded.
///
/// Returns [`Error::BudgetExceeded`] carrying the partial list when more than
/// `cfg.max_states` classes are found.
pub fn enumerate_words(
    group: &GroupInput,
    max_len: usize,
    cfg: &SearchConfig,
) -> Result<Vec<Element>> {
    let e = enumerate_partial(group, max_len, cfg)?;
    if e.truncated {
        return Err(Error::BudgetExceeded {
            limit: cfg.max_states,
            partial: Box::new(e.elements),
        });
    }
    Ok(e.elements)
}

pub(crate) fn enumerate_partial(
    group: &GroupInput,
    max_len: usize,
    cfg: &SearchConfig,
) -> Result<Enumeration> {
    if max_len == 0 {
        return Err(Error::InvalidParameter("max_len must be at least 1".into()));
    }
    let size = group.dim_n() + 1;
    let mut letters = Vec::with_capacity(2 * group.len());
    let mut letter_mats = Vec::with_capacity(2 * group.len());
    for (i, (_, g)) in group.generators().iter().enumerate() {
        letters.push(Letter {
            generator: i,
            exponent: 1,
        });
        letter_mats.push(g.matrix().clone());
        letters.push(Letter {
            generator: i,
            exponent: -1,
        });
        letter_mats.push(g.inverse().into_matrix());
    }

    let mut seen = DedupSet::new(cfg.tol.tol_identity);
    seen.insert(CMatrix::identity(size, size));
    let mut out = Vec::new();
    let mut frontier: Vec<(Word, CMatrix)> =
        vec![(Word::identity(), CMatrix::identity(size, size))];

    for _ in 0..max_len {
        if frontier.is_empty() {
            break;
        }
        let expanded: Vec<Vec<(Word, CMatrix, CellKeys)>> =
            par::map(cfg.execution, &frontier, |(w, m)| {
                letters
                    .iter()
                    .zip(&letter_mats)
                    .filter(|(l, _)| w.last() != Some(l.inverse()))
                    .map(|(l, lm)| {
                        let prod = m * lm;
                        let keys = seen.probe_keys(&prod);
                        (w.push(*l), prod, keys)
                    })
                    .collect()
            });
        let mut next = Vec::new();
        for (word, mat, keys) in expanded.into_iter().flatten() {
            if seen.contains(&mat, &keys) {
                continue;
            }
            seen.insert_with(mat.clone(), keys.home);
            out.push(Element {
                word: word.clone(),
                isometry: Isometry::trusted(mat.clone()),
            });
            if out.len() >= cfg.max_states {
                return Ok(Enumeration {
                    elements: out,
                    truncated: true,
                });
            }
            next.push((word, mat));
        }
        frontier = next;
    }
    Ok(Enumeration {
        elements: out,
        truncated: false,
    })
}

type Cell = [i64; 4];

pub(crate) struct CellKeys {
    home: Cell,
    probes: Vec<Cell>,
}

/// Spatial hash over phase-invariant features, with exact `pu_equal` as the
/// final authority.
///
/// Features are `m₀₀·conj(m₁₁)` and `(MM*)₀₁`, each divided by `‖M‖²_F`; they
/// are unchanged by `M ↦ λM` for unit `λ` and move by at most about
/// `4·tol_identity` between PU-equal matrices. A lookup probes every cell
/// within `margin` of the query, so no match is lost at cell boundaries.
pub(crate) struct DedupSet {
    tol: f64,
    cell: f64,
    margin: f64,
    table: HashMap<Cell, Vec<usize>>,
    mats: Vec<CMatrix>,
}

impl DedupSet {
    pub(crate) fn new(tol: f64) -> Self {
        let margin = 8.0 * tol;
        Self {
            tol,
            cell: (64.0 * tol).max(1e-5),
            margin,
            table: HashMap::new(),
            mats: Vec::new(),
        }
    }

    fn features(m: &CMatrix) -> [f64; 4] {
        let s2 = m.norm_squared();
        let f1 = m[(0, 0)] * m[(1, 1)].conj() / s2;
        let mut f2 = nalgebra::Complex::new(0.0, 0.0);
        for j in 0..m.ncols() {
            f2 += m[(0, j)] * m[(1, j)].conj();
        }
        let f2 = f2 / s2;
        [f1.re, f1.im, f2.re, f2.im]
    }

    pub(crate) fn probe_keys(&self, m: &CMatrix) -> CellKeys {
        let f = Self::features(m);
        let mut home = [0i64; 4];
        let mut ranges = [(0i64, 0i64); 4];
        for k in 0..4 {
            home[k] = (f[k] / self.cell).floor() as i64;
            ranges[k] = (
                ((f[k] - self.margin) / self.cell).floor() as i64,
                ((f[k] + self.margin) / self.cell).floor() as i64,
            );
        }
        let mut probes = vec![[0i64; 4]];
        for (k, &(lo, hi)) in ranges.iter().enumerate() {
            let mut grown = Vec::with_capacity(probes.len() * 2);
            for p in &probes {
                for v in lo..=hi {
                    let mut q = *p;
                    q[k] = v;
                    grown.push(q);
                }
            }
            probes = grown;
        }
        CellKeys { home, probes }
    }

    pub(crate) fn contains(&self, m: &CMatrix, keys: &CellKeys) -> bool {
        keys.probes.iter().any(|cell| {
            self.table.get(cell).is_some_and(|ids| {
                ids.iter()
                    .any(|&i| pu_equal_matrices(m, &self.mats[i], self.tol))
            })
        })
    }

    pub(crate) fn insert_with(&mut self, m: CMatrix, home: Cell) {
        self.table.entry(home).or_default().push(self.mats.len());
        self.mats.push(m);
    }

    pub(crate) fn insert(&mut self, m: CMatrix) {
        let keys = self.probe_keys(&m);
        self.insert_with(m, keys.home);
    }
}
