//! The coordinate chart ℝ^{l(l+1)/2} with coordinates `x_i`, `y_[jk]`, and
//! the index bookkeeping for single and pair indices shared by every layer.
//!
//! Internally all indices are 0-based. Pair `[j,k]` with `j < k` occupies
//! position `pair_pos(l, j, k)` in lexicographic order. Frame and coordinate
//! positions put the `l` singles first, then the pairs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chart {
    l: usize,
}

/// A coordinate function, 1-based as in the input language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coordinate {
    X(usize),
    Y(usize, usize),
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coordinate::X(i) => write!(f, "x{i}"),
            Coordinate::Y(j, k) => write!(f, "y[{j},{k}]"),
        }
    }
}

pub fn npairs(l: usize) -> usize {
    l * (l - 1) / 2
}

/// Position of the pair `[j,k]`, `j < k`, among all pairs (0-based).
pub fn pair_pos(l: usize, j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < l);
    j * (2 * l - j - 1) / 2 + (k - j - 1)
}

/// All pairs `(j,k)` with `j < k` in storage order.
pub fn pairs(l: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(npairs(l));
    for j in 0..l {
        for k in j + 1..l {
            out.push((j, k));
        }
    }
    out
}

/// Antisymmetric pair lookup: `[j,k]` for any `j ≠ k` as (position, sign).
pub fn signed_pair(l: usize, j: usize, k: usize) -> Option<(usize, i64)> {
    match j.cmp(&k) {
        std::cmp::Ordering::Less => Some((pair_pos(l, j, k), 1)),
        std::cmp::Ordering::Greater => Some((pair_pos(l, k, j), -1)),
        std::cmp::Ordering::Equal => None,
    }
}

pub fn delta(a: usize, b: usize) -> i64 {
    i64::from(a == b)
}

impl Chart {
    pub fn new(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidArgument(format!("rank l = {l} is too small")));
        }
        Ok(Chart { l })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.l * (self.l + 1) / 2
    }

    pub fn npairs(&self) -> usize {
        npairs(self.l)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        pairs(self.l)
    }

    /// Position of the pair `[j,k]` (0-based, `j < k`) in the full index list.
    pub fn pair_index(&self, j: usize, k: usize) -> usize {
        self.l + pair_pos(self.l, j, k)
    }

    /// Inverse of the full index list: `Ok((j,k))` for a pair position,
    /// `Err(i)` for a single.
    pub fn split_index(&self, idx: usize) -> std::result::Result<(usize, usize), usize> {
        if idx < self.l {
            Err(idx)
        } else {
            Ok(pairs(self.l)[idx - self.l])
        }
    }

    /// Variable index of a normalized coordinate; `y(k,j)` with `k > j` is
    /// rejected here, the sign convention lives in the parser.
    pub fn var_index(&self, c: Coordinate) -> Result<usize> {
        let l = self.l;
        match c {
            Coordinate::X(i) if (1..=l).contains(&i) => Ok(i - 1),
            Coordinate::Y(j, k) if 1 <= j && j < k && k <= l => Ok(self.pair_index(j - 1, k - 1)),
            _ => Err(Error::InvalidArgument(format!("coordinate {c} outside chart with l = {l}"))),
        }
    }

    pub fn coordinate(&self, var: usize) -> Coordinate {
        match self.split_index(var) {
            Err(i) => Coordinate::X(i + 1),
            Ok((j, k)) => Coordinate::Y(j + 1, k + 1),
        }
    }

    pub fn coordinates(&self) -> Vec<Coordinate> {
        (0..self.dim()).map(|v| self.coordinate(v)).collect()
    }

    /// 1-based label of a full index: `3` or `[1,2]`.
    pub fn index_label(&self, idx: usize) -> String {
        match self.split_index(idx) {
            Err(i) => format!("{}", i + 1),
            Ok((j, k)) => format!("[{},{}]", j + 1, k + 1),
        }
    }
}
