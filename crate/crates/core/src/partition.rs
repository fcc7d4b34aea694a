//! Integer partitions and skew shapes.
//!
//! A [`Partition`] is stored with trailing zeros stripped, so `(2,1,0)` and
//! `(2,1)` are the same value and every zero-height rectangle equals the
//! empty partition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Builds a partition from weakly decreasing parts; trailing zeros are
    /// dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    /// Builds a partition from parts already known to be weakly decreasing
    /// and free of trailing zeros.
    pub(crate) fn from_normalized(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.last() != Some(&0));
        Partition(parts)
    }

    /// `(width^height)`; empty when either side is zero.
    pub fn rectangle(height: usize, width: usize) -> Self {
        if height == 0 || width == 0 {
            Partition::empty()
        } else {
            Partition(vec![width; height])
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Number of non-zero parts.
    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn size(&self) -> usize {
        self.0
            .iter()
            .try_fold(0usize, |acc, &p| acc.checked_add(p))
            .expect("partition size overflows a machine word")
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All non-zero parts equal. The empty partition counts as a rectangle.
    pub fn is_rectangular(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(0);
        let cols = (0..width)
            .map(|c| self.0.iter().take_while(|&&p| p > c).count())
            .collect();
        Partition(cols)
    }

    /// True iff `other` fits inside `self` cell-wise.
    pub fn contains(&self, other: &Partition) -> bool {
        other.length() <= self.length() && other.0.iter().zip(&self.0).all(|(o, s)| o <= s)
    }

    /// Dominance order on partitions of equal size: every prefix sum of
    /// `self` is at least the matching prefix sum of `other`.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let n = self.length().max(other.length());
        let (mut a, mut b) = (0usize, 0usize);
        (0..n).all(|i| {
            a += self.part(i);
            b += other.part(i);
            a >= b
        })
    }

    /// Cell-wise union of two diagrams.
    pub fn union(&self, other: &Partition) -> Partition {
        let n = self.length().max(other.length());
        Partition((0..n).map(|i| self.part(i).max(other.part(i))).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

/// Parses `"3,3,1"`; the empty string is the empty partition.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::new(parse_usize_list(s)?)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// Comma-separated non-negative integers; blank input yields an empty list.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}

/// Skew diagram `outer / inner`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::Parse(format!(
                "({inner}) is not contained in ({outer})"
            )));
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn size(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    /// Cells `(row, col)` in row-major order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        (0..self.outer.length())
            .flat_map(|r| (self.inner.part(r)..self.outer.part(r)).map(move |c| (r, c)))
            .collect()
    }
}

/// All partitions of `n` with at most `max_len` parts, each at most
/// `max_part`, in reverse lexicographic order.
pub fn partitions_bounded(n: usize, max_len: usize, max_part: usize) -> Vec<Partition> {
    fn go(rest: usize, cap: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_part, max_len, &mut Vec::new(), &mut out);
    out
}

pub fn partitions_of(n: usize) -> Vec<Partition> {
    partitions_bounded(n, n, n)
}
