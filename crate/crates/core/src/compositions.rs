//! Exact counting and enumeration of integer compositions.
//!
//! `C_t` is the set of compositions of `t`, `C_{t,D}` those with every part at
//! most `D`, and `C_t^{n,D}` those with exactly `n` parts greater than `D`
//! (all others at most `D`). The empty composition is the unique composition
//! of `0`.

use std::collections::HashMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Range};
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An exact nonnegative count.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    /// Number of bits in the binary expansion.
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for BigCount {
    type Err = Error;

    /// Parses a plain decimal string without sign or separators.
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::ParseCount(s.to_string()));
        }
        BigUint::from_str(s).map(BigCount).map_err(|_| Error::ParseCount(s.to_string()))
    }
}

impl Add for BigCount {
    type Output = BigCount;

    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigCount> for BigCount {
    type Output = BigCount;

    fn add(self, rhs: &'a BigCount) -> BigCount {
        BigCount(self.0 + &rhs.0)
    }
}

impl Mul for BigCount {
    type Output = BigCount;

    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

impl Sum for BigCount {
    fn sum<I: Iterator<Item = BigCount>>(iter: I) -> Self {
        iter.fold(BigCount::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a BigCount> for BigCount {
    fn sum<I: Iterator<Item = &'a BigCount>>(iter: I) -> Self {
        iter.fold(BigCount::zero(), |acc, x| acc + x)
    }
}

/// An ordered sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::ZeroPart);
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts strictly greater than `depth`.
    pub fn parts_above(&self, depth: usize) -> usize {
        self.parts.iter().filter(|&&p| p > depth).count()
    }

    /// Decodes a join mask: bit `i` set means positions `i` and `i + 1`
    /// (0-based) of `0..t` belong to the same part.
    pub fn from_join_mask(t: usize, mask: u64) -> Self {
        assert!(t >= 1, "compositions of 0 have no mask");
        let mut parts = Vec::new();
        let mut run = 1;
        for i in 0..t - 1 {
            if mask >> i & 1 == 1 {
                run += 1;
            } else {
                parts.push(run);
                run = 1;
            }
        }
        parts.push(run);
        Composition { parts }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// `|C_t|`: `2^(t-1)` for `t >= 1`, and `1` for the empty composition.
pub fn count_all(t: usize) -> BigCount {
    if t == 0 {
        BigCount::one()
    } else {
        BigCount(BigUint::one() << (t - 1))
    }
}

/// Exact binomial coefficient, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    BigCount(acc)
}

/// Counts of `C_s^{n,D}` for a fixed depth `D`, grown on demand.
///
/// `layers[n][s] = |C_s^{n,D}|` satisfies
/// `layers[n][s] = sum_{i=1}^{D} layers[n][s-i] + prefix[n-1][s-D-1]`,
/// where the second term places a final part of size `> D` and
/// `prefix[n][j] = sum_{x <= j} layers[n][x]`.
#[derive(Debug, Clone)]
struct DepthTable {
    depth: usize,
    layers: Vec<Vec<BigUint>>,
    prefix: Vec<Vec<BigUint>>,
}

impl DepthTable {
    fn new(depth: usize) -> Self {
        let mut table = DepthTable { depth, layers: Vec::new(), prefix: Vec::new() };
        table.push_layer(0);
        table
    }

    fn len(&self) -> usize {
        self.layers[0].len()
    }

    fn entry(&self, n: usize, s: usize) -> BigUint {
        let d = self.depth;
        let mut v: BigUint = (1..=d.min(s)).map(|i| &self.layers[n][s - i]).sum();
        if s == 0 && n == 0 {
            v = BigUint::one();
        }
        if n > 0 && s > d {
            v += &self.prefix[n - 1][s - d - 1];
        }
        v
    }

    fn push_layer(&mut self, upto: usize) {
        let n = self.layers.len();
        self.layers.push(Vec::with_capacity(upto + 1));
        self.prefix.push(Vec::with_capacity(upto + 1));
        for s in 0..=upto {
            self.push_entry(n, s);
        }
    }

    fn push_entry(&mut self, n: usize, s: usize) {
        let v = self.entry(n, s);
        let p = if s == 0 { v.clone() } else { &self.prefix[n][s - 1] + &v };
        self.layers[n].push(v);
        self.prefix[n].push(p);
    }

    fn ensure(&mut self, t: usize, n: usize) {
        let len = self.len();
        if t >= len {
            for s in len..=t {
                for layer in 0..self.layers.len() {
                    self.push_entry(layer, s);
                }
            }
        }
        let upto = self.len() - 1;
        while self.layers.len() <= n {
            self.push_layer(upto);
        }
    }

    fn get(&self, t: usize, n: usize) -> BigCount {
        BigCount(self.layers[n][t].clone())
    }
}

/// Memo of `|C_{t,D}|` and `|C_t^{n,D}|`, safe to share between threads.
///
/// Entries are keyed by depth; each depth holds a table over `(t, n)` that
/// extends itself when a larger cell is requested.
#[derive(Debug, Default)]
pub struct CountTable {
    tables: RwLock<HashMap<usize, DepthTable>>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    fn lookup(&self, t: usize, n: usize, depth: usize) -> BigCount {
        assert!(depth >= 1, "depth must be positive");
        {
            let tables = self.tables.read().expect("count table lock poisoned");
            if let Some(table) = tables.get(&depth) {
                if t < table.len() && n < table.layers.len() {
                    return table.get(t, n);
                }
            }
        }
        let mut tables = self.tables.write().expect("count table lock poisoned");
        let table = tables.entry(depth).or_insert_with(|| DepthTable::new(depth));
        table.ensure(t, n);
        table.get(t, n)
    }

    /// `|C_{t,D}|`.
    pub fn bounded(&self, t: usize, depth: usize) -> BigCount {
        self.lookup(t, 0, depth)
    }

    /// `|C_t^{n,D}|`; zero whenever `n (D + 1) > t`.
    pub fn exact_excursions(&self, t: usize, n: usize, depth: usize) -> BigCount {
        if n.saturating_mul(depth + 1) > t {
            return BigCount::zero();
        }
        self.lookup(t, n, depth)
    }

    /// `|C_{s,D}|` for `s = 0..=t`, in one lock acquisition.
    pub fn bounded_prefix(&self, t: usize, depth: usize) -> Vec<BigCount> {
        self.lookup(t, 0, depth);
        let tables = self.tables.read().expect("count table lock poisoned");
        tables[&depth].layers[0][..=t].iter().cloned().map(BigCount).collect()
    }
}

/// `|C_{t,D}|` via the bounded-part recursion.
pub fn count_bounded(t: usize, depth: usize) -> BigCount {
    CountTable::new().bounded(t, depth)
}

/// `|C_t^{n,D}|`, the number of compositions of `t` with exactly `n` parts
/// greater than `D`.
pub fn count_exact_excursions(t: usize, n: usize, depth: usize) -> BigCount {
    CountTable::new().exact_excursions(t, n, depth)
}

/// Number of compositions of `t` whose single part above `D` equals `r` and
/// starts at position `k` (1-based) of the underlying tuple:
/// `|C_{k-1,D}| |C_{t-k-r+1,D}|`.
pub fn product_at(t: usize, depth: usize, k: usize, r: usize) -> Result<BigCount> {
    product_at_with(&CountTable::new(), t, depth, k, r)
}

pub fn product_at_with(table: &CountTable, t: usize, depth: usize, k: usize, r: usize) -> Result<BigCount> {
    if depth == 0 || r <= depth || k == 0 || r > t || k > t - r + 1 {
        return Err(Error::Range(format!(
            "need D >= 1, r >= D + 1 and 1 <= k <= t - r + 1; got t = {t}, D = {depth}, k = {k}, r = {r}"
        )));
    }
    Ok(table.bounded(k - 1, depth) * table.bounded(t + 1 - k - r, depth))
}

/// The double sum of [`product_at`] over all admissible `r` and `k`; equals
/// `|C_t^{1,D}|`.
pub fn two_excursion_sum(t: usize, depth: usize) -> BigCount {
    two_excursion_sum_with(&CountTable::new(), t, depth)
}

pub fn two_excursion_sum_with(table: &CountTable, t: usize, depth: usize) -> BigCount {
    if t <= depth {
        return BigCount::zero();
    }
    let bounded = table.bounded_prefix(t, depth);
    let mut total = BigUint::zero();
    for r in depth + 1..=t {
        for k in 1..=t - r + 1 {
            total += bounded[k - 1].as_biguint() * bounded[t + 1 - k - r].as_biguint();
        }
    }
    BigCount(total)
}

/// Filter selecting compositions with exactly `n` parts greater than `depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExcursionFilter {
    pub n: usize,
    pub depth: usize,
}

/// Compositions of `t` in ascending join-mask order (see
/// [`Composition::from_join_mask`]): for `t = 3` the order is
/// `(1,1,1), (2,1), (1,2), (3)`.
#[derive(Debug, Clone)]
pub struct Compositions {
    t: usize,
    masks: Range<u64>,
    filter: Option<ExcursionFilter>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        for mask in self.masks.by_ref() {
            let c = Composition::from_join_mask(self.t, mask);
            match self.filter {
                Some(f) if c.parts_above(f.depth) != f.n => continue,
                _ => return Some(c),
            }
        }
        None
    }
}

pub fn enumerate_compositions(t: usize, filter: Option<ExcursionFilter>) -> Compositions {
    assert!((1..=64).contains(&t), "enumeration supports 1 <= t <= 64");
    enumerate_mask_range(t, 0..1u64 << (t - 1), filter)
}

/// Restricts enumeration to a slice of the mask space, so that parallel
/// workers can split `0..2^(t-1)` deterministically.
pub fn enumerate_mask_range(t: usize, masks: Range<u64>, filter: Option<ExcursionFilter>) -> Compositions {
    Compositions { t, masks, filter }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    /// Recursive enumeration of all compositions, independent of the mask
    /// coding.
    fn brute(t: usize) -> Vec<Vec<usize>> {
        if t == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=t {
            for mut rest in brute(t - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    fn brute_count(t: usize, n: usize, d: usize) -> u64 {
        brute(t).iter().filter(|c| c.iter().filter(|&&p| p > d).count() == n).count() as u64
    }

    #[test]
    fn count_all_examples() {
        assert_eq!(count_all(4), 8u64);
        assert_eq!(count_all(1), 1u64);
        assert_eq!(count_all(0), 1u64);
        assert_eq!(count_all(10), brute(10).len() as u64);
        assert_eq!(count_all(10), 512u64);
    }

    #[test]
    fn count_bounded_examples() {
        assert_eq!(count_bounded(4, 2), 5u64);
        assert_eq!(count_bounded(0, 3), 1u64);
        assert_eq!(count_bounded(3, 3), 4u64);
        assert_eq!(count_bounded(4, 1), 1u64);
    }

    #[test]
    fn exact_excursion_examples() {
        assert_eq!(count_exact_excursions(7, 2, 1), 35u64);
        assert_eq!(count_exact_excursions(5, 1, 2), 8u64);
        assert_eq!(count_exact_excursions(5, 1, 2), brute_count(5, 1, 2));
        assert_eq!(count_exact_excursions(4, 0, 2), count_bounded(4, 2));
        assert_eq!(count_exact_excursions(5, 2, 2), 0u64);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(3, 2), 3u64);
        assert_eq!(binomial(4, 5), 0u64);
        // Pascal oracle
        let mut row = vec![1u64];
        for _ in 0..7 {
            let mut next = vec![1u64; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        assert_eq!(row[4], 35);
        assert_eq!(binomial(7, 4), row[4]);
    }

    #[test]
    fn product_at_examples() {
        assert_eq!(product_at(5, 2, 1, 3).unwrap(), 2u64);
        assert_eq!(product_at(5, 2, 2, 3).unwrap(), 1u64);
        assert_eq!(product_at(5, 2, 3, 3).unwrap(), 2u64);
        assert!(matches!(product_at(5, 2, 4, 3), Err(Error::Range(_))));
        assert!(matches!(product_at(5, 2, 1, 2), Err(Error::Range(_))));
        assert!(matches!(product_at(5, 2, 0, 3), Err(Error::Range(_))));
        assert!(matches!(product_at(5, 2, 1, 6), Err(Error::Range(_))));
    }

    #[test]
    fn product_at_matches_enumeration() {
        // (k, r) fixed: the single large part is r and starts at slot k
        for (k, r, expected) in [(1, 3, 2u64), (2, 3, 1), (3, 3, 2), (1, 4, 1), (2, 4, 1), (1, 5, 1)] {
            let hits = brute(5)
                .into_iter()
                .filter(|c| {
                    let big: Vec<usize> = c.iter().enumerate().filter(|(_, &p)| p > 2).map(|(i, _)| i).collect();
                    big.len() == 1 && c[big[0]] == r && c[..big[0]].iter().sum::<usize>() + 1 == k
                })
                .count() as u64;
            assert_eq!(hits, expected);
            assert_eq!(product_at(5, 2, k, r).unwrap(), expected);
        }
    }

    #[test]
    fn two_excursion_sum_examples() {
        assert_eq!(two_excursion_sum(5, 2), 8u64);
        assert_eq!(two_excursion_sum(3, 2), 1u64);
        assert_eq!(two_excursion_sum(2, 2), 0u64);
    }

    #[test]
    fn enumeration_order() {
        let all: Vec<Vec<usize>> = enumerate_compositions(3, None).map(|c| c.parts().to_vec()).collect();
        assert_eq!(all, vec![vec![1, 1, 1], vec![2, 1], vec![1, 2], vec![3]]);
        let one: Vec<_> = enumerate_compositions(1, None).collect();
        assert_eq!(one, vec![Composition::new(vec![1]).unwrap()]);
        assert_eq!(enumerate_compositions(5, Some(ExcursionFilter { n: 1, depth: 2 })).count(), 8);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for t in 1..=12 {
            let mut ours: Vec<Vec<usize>> = enumerate_compositions(t, None).map(|c| c.parts().to_vec()).collect();
            ours.sort();
            let mut theirs = brute(t);
            theirs.sort();
            assert_eq!(ours, theirs);
        }
    }

    #[test]
    fn oracle_equivalence_small() {
        let table = CountTable::new();
        for t in 1..=14 {
            for d in 1..=5 {
                for n in 0..=t {
                    let filtered = enumerate_compositions(t, Some(ExcursionFilter { n, depth: d })).count() as u64;
                    assert_eq!(table.exact_excursions(t, n, d), filtered, "t={t} n={n} D={d}");
                }
            }
        }
    }

    #[test]
    fn table_growth_is_order_independent() {
        let grown = CountTable::new();
        grown.exact_excursions(5, 0, 2);
        grown.exact_excursions(30, 3, 2);
        grown.exact_excursions(10, 5, 2);
        let fresh = CountTable::new();
        for t in 0..=30 {
            for n in 0..=5 {
                assert_eq!(grown.exact_excursions(t, n, 2), fresh.exact_excursions(t, n, 2));
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        let big = count_all(200);
        assert_eq!(big.to_string().parse::<BigCount>().unwrap(), big);
        assert!("-3".parse::<BigCount>().is_err());
        assert!("".parse::<BigCount>().is_err());
        assert!("1e5".parse::<BigCount>().is_err());
    }

    proptest! {
        #[test]
        fn partition_identity(t in 1usize..60, d in 1usize..6) {
            let table = CountTable::new();
            let total: BigCount = (0..=t).map(|n| table.exact_excursions(t, n, d)).sum();
            prop_assert_eq!(total, count_all(t));
        }

        #[test]
        fn monotone_in_depth(t in 0usize..80, d in 1usize..10) {
            let table = CountTable::new();
            let lo = table.bounded(t, d);
            let hi = table.bounded(t, d + 1);
            prop_assert!(lo <= hi);
            prop_assert!(hi <= count_all(t));
            if d >= t {
                prop_assert_eq!(lo, count_all(t));
            }
        }

        #[test]
        fn depth_one_is_binomial(t in 1usize..200, n in 0usize..20) {
            prop_assert_eq!(count_exact_excursions(t, n, 1), binomial(t, 2 * n));
        }
    }
}
