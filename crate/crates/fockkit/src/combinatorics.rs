//! Partitions, multipartitions, compositions, and block embeddings.
//!
//! Conventions: a partition is a weakly decreasing tuple of positive
//! integers; a level-`l` multipartition is an `l`-tuple of partitions; a
//! composition is a tuple of nonnegative integers. A composition `nu` of
//! `m` cuts `{1, ..., m}` into consecutive blocks `J_1, ..., J_l` with
//! `|J_p| = nu_p`; an integer tuple of length `m` is "block-decreasing"
//! when it is weakly decreasing inside every block. Multipartitions that
//! fit inside `nu` (at most `nu_p` rows in slot `p`) embed into such
//! tuples by zero-padding each slot.

use crate::{Error, Result};
use std::fmt;

/// An integer partition: weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Build from parts; trailing zeros are stripped, order is validated.
    pub fn new(parts: &[u32]) -> Result<Self> {
        let mut v: Vec<u32> = parts.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        if v.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "parts not weakly decreasing: {parts:?}"
            )));
        }
        if v.iter().any(|&p| p == 0) {
            return Err(Error::InvalidInput(format!(
                "interior zero part in {parts:?}"
            )));
        }
        Ok(Partition { parts: v })
    }

    /// The empty partition.
    pub fn empty() -> Self {
        Partition { parts: vec![] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// The part at 1-based row `i`, zero beyond the last row.
    pub fn part(&self, i: usize) -> u32 {
        if i >= 1 && i <= self.parts.len() {
            self.parts[i - 1]
        } else {
            0
        }
    }

    /// Conjugate (transposed) partition.
    pub fn transpose(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0] as usize;
        let mut t = Vec::with_capacity(cols);
        for c in 1..=cols {
            t.push(self.parts.iter().filter(|&&p| p as usize >= c).count() as u32);
        }
        Partition { parts: t }
    }

    /// The statistic `n(lambda) = sum_i (i-1) * lambda_i` (rows 1-based).
    pub fn n_stat(&self) -> i128 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| (i as i128) * (p as i128))
            .sum()
    }

    /// All partitions of `n`, in deterministic (lexicographically
    /// decreasing) order.
    pub fn all_of(n: u32) -> Vec<Partition> {
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            let hi = rem.min(max);
            for p in (1..=hi).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// A level-`l` multipartition: an ordered `l`-tuple of partitions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiPartition {
    comps: Vec<Partition>,
}

impl MultiPartition {
    pub fn new(comps: Vec<Partition>) -> Self {
        MultiPartition { comps }
    }

    /// Build from plain part lists.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let comps = rows
            .iter()
            .map(|r| Partition::new(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiPartition { comps })
    }

    /// The empty multipartition with `level` slots.
    pub fn empty(level: usize) -> Self {
        MultiPartition {
            comps: vec![Partition::empty(); level],
        }
    }

    pub fn components(&self) -> &[Partition] {
        &self.comps
    }

    pub fn level(&self) -> usize {
        self.comps.len()
    }

    /// Total number of boxes.
    pub fn weight(&self) -> u64 {
        self.comps.iter().map(|p| p.weight()).sum()
    }

    /// Component-reversed multipartition `(lambda_l, ..., lambda_1)`.
    pub fn reversed(&self) -> MultiPartition {
        let mut comps = self.comps.clone();
        comps.reverse();
        MultiPartition { comps }
    }

    /// Transposed multipartition: reverse the components and conjugate
    /// each, i.e. `(t(lambda_l), ..., t(lambda_1))`.
    pub fn transpose(&self) -> MultiPartition {
        let comps = self
            .comps
            .iter()
            .rev()
            .map(|p| p.transpose())
            .collect::<Vec<_>>();
        MultiPartition { comps }
    }

    /// True when component `p` has at most `nu_p` rows for every `p`.
    pub fn fits(&self, nu: &Composition) -> bool {
        self.comps.len() == nu.len()
            && self
                .comps
                .iter()
                .zip(nu.parts())
                .all(|(c, &np)| c.len() <= np as usize)
    }

    /// All multipartitions of `n` with `level` components.
    pub fn all_of(n: u32, level: usize) -> Vec<MultiPartition> {
        fn rec(slots: usize, rem: u32, cur: &mut Vec<Partition>, out: &mut Vec<MultiPartition>) {
            if slots == 0 {
                if rem == 0 {
                    out.push(MultiPartition { comps: cur.clone() });
                }
                return;
            }
            for w in (0..=rem).rev() {
                for p in Partition::all_of(w) {
                    cur.push(p);
                    rec(slots - 1, rem - w, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(level, n, &mut Vec::new(), &mut out);
        out
    }

    /// All multipartitions of `n` fitting inside `nu`.
    pub fn all_fitting(n: u32, nu: &Composition) -> Vec<MultiPartition> {
        MultiPartition::all_of(n, nu.len())
            .into_iter()
            .filter(|mp| mp.fits(nu))
            .collect()
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A composition: ordered tuple of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: &[u32]) -> Self {
        Composition {
            parts: parts.to_vec(),
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts (the level).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts (the ambient rank `m`).
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Reversed composition `(nu_l, ..., nu_1)`.
    pub fn reversed(&self) -> Composition {
        let mut parts = self.parts.clone();
        parts.reverse();
        Composition { parts }
    }

    /// The rotated composition `(nu_{l-1}, ..., nu_1, nu_l)`.
    pub fn bullet(&self) -> Composition {
        let l = self.parts.len();
        if l == 0 {
            return self.clone();
        }
        let mut parts: Vec<u32> = self.parts[..l - 1].to_vec();
        parts.reverse();
        parts.push(self.parts[l - 1]);
        Composition { parts }
    }

    /// 1-based inclusive block intervals `[i_p, j_p]`; an empty block has
    /// `j_p = i_p - 1`.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.parts.len());
        let mut start = 1usize;
        for &p in &self.parts {
            let end = start + p as usize - 1;
            out.push((start, if p == 0 { start - 1 } else { end }));
            start += p as usize;
        }
        out
    }

    /// 1-based start `i_p` of block `p` (1-based `p`).
    pub fn block_start(&self, p: usize) -> usize {
        1 + self.parts[..p - 1].iter().sum::<u32>() as usize
    }

    /// Index of the block (1-based) containing 1-based position `j`.
    pub fn block_of(&self, j: usize) -> Option<usize> {
        for (p, (i, e)) in self.blocks().into_iter().enumerate() {
            if j >= i && j <= e {
                return Some(p + 1);
            }
        }
        None
    }

    /// All compositions of `m` with `len` parts.
    pub fn all_of(m: u32, len: usize) -> Vec<Composition> {
        fn rec(slots: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if slots == 1 {
                cur.push(rem);
                out.push(Composition { parts: cur.clone() });
                cur.pop();
                return;
            }
            for p in (0..=rem).rev() {
                cur.push(p);
                rec(slots - 1, rem - p, cur, out);
                cur.pop();
            }
        }
        assert!(len >= 1);
        let mut out = Vec::new();
        rec(len, m, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// True when `t` is weakly decreasing inside every `nu`-block.
pub fn is_block_weakly_decreasing(t: &[i64], nu: &Composition) -> bool {
    if t.len() != nu.total() as usize {
        return false;
    }
    for (i, j) in nu.blocks() {
        for k in i..j {
            if t[k - 1] < t[k] {
                return false;
            }
        }
    }
    true
}

/// True when `t` is strictly decreasing inside every `nu`-block.
pub fn is_block_strictly_decreasing(t: &[i64], nu: &Composition) -> bool {
    if t.len() != nu.total() as usize {
        return false;
    }
    for (i, j) in nu.blocks() {
        for k in i..j {
            if t[k - 1] <= t[k] {
                return false;
            }
        }
    }
    true
}

/// Embed a multipartition fitting inside `nu` as a block-decreasing
/// nonnegative tuple of length `m = |nu|`, zero-padding each slot.
pub fn embed_weight(mp: &MultiPartition, nu: &Composition) -> Result<Vec<i64>> {
    if !mp.fits(nu) {
        return Err(Error::InvalidInput(format!(
            "multipartition {mp} does not fit inside {nu}"
        )));
    }
    let mut out = Vec::with_capacity(nu.total() as usize);
    for (c, &np) in mp.components().iter().zip(nu.parts()) {
        for i in 1..=np as usize {
            out.push(c.part(i) as i64);
        }
    }
    Ok(out)
}

/// Inverse of [`embed_weight`]: read a nonnegative block-decreasing tuple
/// back as a multipartition.
pub fn unembed_weight(t: &[i64], nu: &Composition) -> Result<MultiPartition> {
    if t.len() != nu.total() as usize {
        return Err(Error::InvalidInput(format!(
            "tuple length {} does not match |nu| = {}",
            t.len(),
            nu.total()
        )));
    }
    if t.iter().any(|&x| x < 0) {
        return Err(Error::InvalidInput(format!(
            "tuple has negative entries: {t:?}"
        )));
    }
    if !is_block_weakly_decreasing(t, nu) {
        return Err(Error::InvalidInput(format!(
            "tuple not weakly decreasing in blocks of {nu}: {t:?}"
        )));
    }
    let mut comps = Vec::with_capacity(nu.len());
    for (i, j) in nu.blocks() {
        let rows: Vec<u32> = t[i - 1..j].iter().map(|&x| x as u32).collect();
        comps.push(Partition::new(&rows)?);
    }
    Ok(MultiPartition::new(comps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_basics() {
        let p = Partition::new(&[3, 1]).unwrap();
        assert_eq!(p.weight(), 4);
        assert_eq!(p.n_stat(), 1); // 0*3 + 1*1
        assert_eq!(p.transpose().parts(), &[2, 1, 1]);
        assert_eq!(p.transpose().transpose(), p);
        assert!(Partition::new(&[1, 3]).is_err());
        assert_eq!(Partition::new(&[2, 0, 0]).unwrap().parts(), &[2]);
    }

    #[test]
    fn n_stat_matches_column_binomials() {
        // n(transpose(mu)) = sum_i binom(mu_i, 2).
        for mu in Partition::all_of(6) {
            let lhs = mu.transpose().n_stat();
            let rhs: i128 = mu
                .parts()
                .iter()
                .map(|&p| (p as i128) * (p as i128 - 1) / 2)
                .sum();
            assert_eq!(lhs, rhs, "mu = {mu}");
        }
    }

    #[test]
    fn multipartition_transpose_example() {
        // ((1,1),(2,1),(1)) transposes to ((1),(2,1),(2)).
        let mp = MultiPartition::from_rows(&[vec![1, 1], vec![2, 1], vec![1]]).unwrap();
        let t = mp.transpose();
        let expect = MultiPartition::from_rows(&[vec![1], vec![2, 1], vec![2]]).unwrap();
        assert_eq!(t, expect);
        // Transpose is an involution.
        assert_eq!(t.transpose(), mp);
    }

    #[test]
    fn composition_blocks_example() {
        // nu = (1,1,4,1): blocks [1,1],[2,2],[3,6],[7,7].
        let nu = Composition::new(&[1, 1, 4, 1]);
        assert_eq!(nu.blocks(), vec![(1, 1), (2, 2), (3, 6), (7, 7)]);
        assert_eq!(nu.total(), 7);
        assert_eq!(nu.block_of(4), Some(3));
        assert_eq!(nu.block_of(7), Some(4));
        // Empty blocks collapse.
        let z = Composition::new(&[2, 0, 1]);
        assert_eq!(z.blocks(), vec![(1, 2), (3, 2), (3, 3)]);
    }

    #[test]
    fn composition_rotations() {
        let nu = Composition::new(&[2, 1, 6, 1]);
        assert_eq!(nu.reversed().parts(), &[1, 6, 1, 2]);
        assert_eq!(nu.bullet().parts(), &[6, 1, 2, 1]);
        let single = Composition::new(&[5]);
        assert_eq!(single.bullet().parts(), &[5]);
    }

    #[test]
    fn embed_example() {
        // lambda = ((1),(),(2,1),()), nu = (1,1,4,1) -> (1,0,2,1,0,0,0).
        let mp =
            MultiPartition::from_rows(&[vec![1], vec![], vec![2, 1], vec![]]).unwrap();
        let nu = Composition::new(&[1, 1, 4, 1]);
        let t = embed_weight(&mp, &nu).unwrap();
        assert_eq!(t, vec![1, 0, 2, 1, 0, 0, 0]);
        assert_eq!(unembed_weight(&t, &nu).unwrap(), mp);
    }

    #[test]
    fn embed_rejects_overflow_rows() {
        // Component with more rows than nu_p must error.
        let mp = MultiPartition::from_rows(&[vec![1, 1], vec![]]).unwrap();
        let nu = Composition::new(&[1, 1]);
        assert!(embed_weight(&mp, &nu).is_err());
    }

    #[test]
    fn embed_round_trip_enumerated() {
        let nu = Composition::new(&[2, 3]);
        for n in 0..=4 {
            for mp in MultiPartition::all_fitting(n, &nu) {
                let t = embed_weight(&mp, &nu).unwrap();
                assert!(is_block_weakly_decreasing(&t, &nu));
                assert_eq!(unembed_weight(&t, &nu).unwrap(), mp);
            }
        }
    }

    #[test]
    fn block_monotonicity_predicates() {
        let nu = Composition::new(&[2, 2]);
        assert!(is_block_weakly_decreasing(&[3, 3, 1, 0], &nu));
        assert!(!is_block_strictly_decreasing(&[3, 3, 1, 0], &nu));
        assert!(is_block_strictly_decreasing(&[3, 2, 1, 0], &nu));
        // Across-block comparisons are unconstrained.
        assert!(is_block_strictly_decreasing(&[1, 0, 9, 5], &nu));
    }

    #[test]
    fn enumerations_have_expected_counts() {
        assert_eq!(Partition::all_of(5).len(), 7);
        assert_eq!(Partition::all_of(0).len(), 1);
        assert_eq!(MultiPartition::all_of(2, 2).len(), 5);
        assert_eq!(Composition::all_of(4, 2).len(), 5);
        // Fitting filter: 2-partitions of 3 with at most 2 and 2 rows.
        let nu = Composition::new(&[2, 2]);
        assert_eq!(MultiPartition::all_fitting(3, &nu).len(), 8);
    }

    #[test]
    fn reversal_is_involution() {
        let mp = MultiPartition::from_rows(&[vec![2], vec![1, 1], vec![]]).unwrap();
        assert_eq!(mp.reversed().reversed(), mp);
        assert_eq!(mp.reversed().components()[0], Partition::empty());
    }
}
