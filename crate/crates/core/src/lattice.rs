//! Ground-level arithmetic on the Boolean lattice `P(n)`.
//!
//! Subsets of `[n] = {1, ..., n}` are encoded as integers: element `i` is
//! present iff bit `i - 1` is set. A [`Family`] is a dense bit-vector over
//! all `2^n` codes.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;

use crate::error::{domain, resource, Result};

/// Default ceiling on the ground-set size.
pub const DEFAULT_MAX_N: usize = 24;

/// Codes are `u32`; this is the absolute ceiling regardless of overrides.
pub const HARD_MAX_N: usize = 30;

/// Environment variable that overrides [`DEFAULT_MAX_N`].
pub const MAX_N_ENV: &str = "CHAINLATTICE_MAX_N";

/// The active ground-set envelope.
pub fn max_n() -> usize {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.min(HARD_MAX_N))
        .unwrap_or(DEFAULT_MAX_N)
}

pub(crate) fn check_envelope(n: usize) -> Result<()> {
    if n > max_n() {
        return resource(format!(
            "n = {n} exceeds the supported envelope n <= {} (set {MAX_N_ENV} to override)",
            max_n()
        ));
    }
    Ok(())
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `|n - 2s|`, i.e. twice the distance of level `s` from `n/2`.
#[inline]
pub fn twice_distance(n: usize, size: usize) -> usize {
    (2 * size).abs_diff(n)
}

/// Distance of level `s` from `n/2` as an exact rational.
pub fn distance(n: usize, size: usize) -> Ratio<u64> {
    Ratio::new(twice_distance(n, size) as u64, 2)
}

fn ceil_half(x: i64) -> i64 {
    x.div_euclid(2) + i64::from(x.rem_euclid(2) != 0)
}

/// The inclusive level range `[ceil((n-r+1)/2), ceil((n+r-1)/2)]` of the `r`
/// middle layers. Empty (`lo > hi`) when `r = 0`.
pub fn middle_level_range(n: usize, r: usize) -> (i64, i64) {
    let (n, r) = (n as i64, r as i64);
    (ceil_half(n - r + 1), ceil_half(n + r - 1))
}

/// Size of the `r` largest layers of `P(n)`.
pub fn sigma(n: usize, r: usize) -> Result<u64> {
    if r > n + 1 {
        return domain(format!("sigma: r = {r} outside [0, {}]", n + 1));
    }
    if n > HARD_MAX_N {
        return resource(format!("sigma: n = {n} too large"));
    }
    let (lo, hi) = middle_level_range(n, r);
    Ok((lo..=hi)
        .filter(|&i| i >= 0 && i <= n as i64)
        .map(|i| binomial(n as u64, i as u64))
        .sum())
}

/// The unique `r` with `sigma(n, r-1) < m <= sigma(n, r)`.
pub fn threshold_layers(n: usize, m: u64) -> Result<usize> {
    if n > HARD_MAX_N {
        return resource(format!("threshold_layers: n = {n} too large"));
    }
    if m == 0 || m > 1u64 << n {
        return domain(format!("threshold_layers: M = {m} outside [1, 2^{n}]"));
    }
    for r in 1..=n + 1 {
        if m <= sigma(n, r)? {
            return Ok(r);
        }
    }
    unreachable!("sigma(n, n+1) = 2^n")
}

/// A subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetCode {
    bits: u32,
    n: u8,
}

impl SubsetCode {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if n > HARD_MAX_N {
            return resource(format!("n = {n} exceeds {HARD_MAX_N}"));
        }
        if u64::from(bits) >= 1u64 << n {
            return domain(format!("code {bits} is not a subset of [{n}]"));
        }
        Ok(SubsetCode { bits, n: n as u8 })
    }

    /// Builds a subset from 1-based elements.
    pub fn from_elements(n: usize, elements: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > n {
                return domain(format!("element {e} outside [1, {n}]"));
            }
            bits |= 1 << (e - 1);
        }
        SubsetCode::new(n, bits)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    /// 1-based elements in ascending order.
    pub fn elements(self) -> Vec<usize> {
        elements_of(self.bits)
    }
}

impl fmt::Debug for SubsetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// 1-based elements of a code, ascending.
pub fn elements_of(mut bits: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(bits.count_ones() as usize);
    while bits != 0 {
        out.push(bits.trailing_zeros() as usize + 1);
        bits &= bits - 1;
    }
    out
}

/// The lexicographic order on `P(n)`: smaller sets first, and within a layer
/// `A < B` iff the least element of `A Δ B` lies in `A`.
pub fn lex_less(a: SubsetCode, b: SubsetCode) -> Result<bool> {
    if a.n != b.n {
        return domain(format!("lex_less: ground sets differ ({} vs {})", a.n, b.n));
    }
    Ok(lex_cmp(a.bits, b.bits) == Ordering::Less)
}

/// Raw comparator behind [`lex_less`].
#[inline]
pub fn lex_cmp(a: u32, b: u32) -> Ordering {
    match a.count_ones().cmp(&b.count_ones()) {
        Ordering::Equal => {
            let diff = a ^ b;
            if diff == 0 {
                Ordering::Equal
            } else if a & diff & diff.wrapping_neg() != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        other => other,
    }
}

/// Rank of `code` among the sets of its layer under [`lex_less`], via the
/// combinatorial number system.
pub fn lex_rank(n: usize, code: u32) -> u64 {
    let mut remaining = code.count_ones() as u64;
    let mut rank = 0u64;
    for j in 0..n {
        if remaining == 0 {
            break;
        }
        if code >> j & 1 == 1 {
            remaining -= 1;
        } else {
            // every set that takes element j+1 here comes first
            rank += binomial((n - j - 1) as u64, remaining - 1);
        }
    }
    rank
}

/// Sort key realising the centered fill order: closest to `n/2` first,
/// ties toward the larger layer, then lexicographic within a layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CenteredOrderKey {
    /// `|n - 2|A||`; twice the distance from the middle, so exact.
    pub twice_distance: u32,
    /// `-|A|`.
    pub size_desc: i32,
    pub lex_rank: u64,
}

impl CenteredOrderKey {
    pub fn of(n: usize, code: u32) -> Self {
        let size = code.count_ones() as usize;
        CenteredOrderKey {
            twice_distance: twice_distance(n, size) as u32,
            size_desc: -(size as i32),
            lex_rank: lex_rank(n, code),
        }
    }

    pub fn distance(&self) -> Ratio<u64> {
        Ratio::new(u64::from(self.twice_distance), 2)
    }
}

/// Levels `0..=n` in the order the centered fill visits them.
pub fn centered_level_order(n: usize) -> Vec<usize> {
    let mut levels: Vec<usize> = (0..=n).collect();
    levels.sort_by_key(|&s| (twice_distance(n, s), std::cmp::Reverse(s)));
    levels
}

/// A family `F ⊆ P(n)` stored as a dense bit-vector with cached size.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: usize,
    words: Vec<u64>,
    size: usize,
}

impl Family {
    pub fn empty(n: usize) -> Result<Self> {
        check_envelope(n)?;
        let words = vec![0u64; (1usize << n).div_ceil(64)];
        Ok(Family { n, words, size: 0 })
    }

    /// All of `P(n)`.
    pub fn full(n: usize) -> Result<Self> {
        let mut f = Family::empty(n)?;
        let total = 1usize << n;
        for (i, w) in f.words.iter_mut().enumerate() {
            let lo = i * 64;
            let live = (total - lo).min(64);
            *w = if live == 64 {
                u64::MAX
            } else {
                (1u64 << live) - 1
            };
        }
        f.size = total;
        Ok(f)
    }

    /// The layer `binom([n], s)`.
    pub fn layer(n: usize, s: usize) -> Result<Self> {
        let mut f = Family::empty(n)?;
        if s > n {
            return domain(format!("layer {s} outside [0, {n}]"));
        }
        for code in 0..(1u32 << n) {
            if code.count_ones() as usize == s {
                f.insert(code);
            }
        }
        Ok(f)
    }

    pub fn from_codes(n: usize, codes: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut f = Family::empty(n)?;
        for c in codes {
            if u64::from(c) >= 1u64 << n {
                return domain(format!("code {c} is not a subset of [{n}]"));
            }
            f.insert(c);
        }
        Ok(f)
    }

    /// Families on at most 64 codes (n <= 6), as a membership mask.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > 6 {
            return domain("from_mask needs n <= 6");
        }
        if n < 6 && mask >> (1usize << n) != 0 {
            return domain("mask has bits outside P(n)");
        }
        let mut f = Family::empty(n)?;
        f.words[0] = mask;
        f.size = mask.count_ones() as usize;
        Ok(f)
    }

    /// Membership mask; only valid for `n <= 6`.
    pub fn to_mask(&self) -> u64 {
        debug_assert!(self.n <= 6);
        self.words[0]
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn contains(&self, code: u32) -> bool {
        let c = code as usize;
        c >> self.n == 0 && self.words[c >> 6] >> (c & 63) & 1 == 1
    }

    /// Returns whether the code was newly inserted.
    pub fn insert(&mut self, code: u32) -> bool {
        let c = code as usize;
        assert!(c >> self.n == 0, "code {code} outside P({})", self.n);
        let w = &mut self.words[c >> 6];
        let bit = 1u64 << (c & 63);
        if *w & bit == 0 {
            *w |= bit;
            self.size += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, code: u32) -> bool {
        let c = code as usize;
        if c >> self.n != 0 {
            return false;
        }
        let w = &mut self.words[c >> 6];
        let bit = 1u64 << (c & 63);
        if *w & bit != 0 {
            *w &= !bit;
            self.size -= 1;
            true
        } else {
            false
        }
    }

    /// Member codes in increasing numeric order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros();
                    w &= w - 1;
                    Some((i as u32) * 64 + b)
                }
            })
        })
    }

    pub fn codes(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn is_subset_of(&self, other: &Family) -> bool {
        self.n == other.n
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Family) -> Family {
        assert_eq!(self.n, other.n);
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        let size = words.iter().map(|w| w.count_ones() as usize).sum();
        Family {
            n: self.n,
            words,
            size,
        }
    }

    pub fn difference(&self, other: &Family) -> Family {
        assert_eq!(self.n, other.n);
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        let size = words.iter().map(|w| w.count_ones() as usize).sum();
        Family {
            n: self.n,
            words,
            size,
        }
    }

    pub fn union(&self, other: &Family) -> Family {
        assert_eq!(self.n, other.n);
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        let size = words.iter().map(|w| w.count_ones() as usize).sum();
        Family {
            n: self.n,
            words,
            size,
        }
    }

    /// Member counts per level.
    pub fn level_profile(&self) -> Vec<usize> {
        let mut out = vec![0; self.n + 1];
        for c in self.iter() {
            out[c.count_ones() as usize] += 1;
        }
        out
    }

    /// Applies a permutation of the ground set (`perm[i]` is the image of
    /// element `i+1`, 0-based).
    pub fn permuted(&self, perm: &[usize]) -> Family {
        assert_eq!(perm.len(), self.n);
        let mut out = Family::empty(self.n).expect("same envelope");
        for c in self.iter() {
            out.insert(permute_code(c, perm));
        }
        out
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|c| SubsetCode {
                bits: c,
                n: self.n as u8,
            }))
            .finish()
    }
}

/// Image of a code under a 0-based permutation of the ground set.
#[inline]
pub fn permute_code(code: u32, perm: &[usize]) -> u32 {
    let mut out = 0u32;
    let mut c = code;
    while c != 0 {
        let i = c.trailing_zeros() as usize;
        out |= 1 << perm[i];
        c &= c - 1;
    }
    out
}

/// Members of `within` listed in centered fill order.
pub fn centered_order(within: &Family) -> Vec<u32> {
    let n = within.n();
    let mut by_level: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for c in within.iter() {
        by_level[c.count_ones() as usize].push(c);
    }
    let mut out = Vec::with_capacity(within.len());
    for s in centered_level_order(n) {
        let layer = &mut by_level[s];
        layer.sort_unstable_by(|&a, &b| lex_cmp(a, b));
        out.extend_from_slice(layer);
    }
    out
}

/// `G_{P', Q}`: the first `q` members of `within` in centered order.
pub fn centered_family(within: &Family, q: usize) -> Result<Family> {
    if q > within.len() {
        return domain(format!(
            "centered_family: Q = {q} exceeds |P'| = {}",
            within.len()
        ));
    }
    let n = within.n();
    let mut out = Family::empty(n)?;
    let mut need = q;
    for s in centered_level_order(n) {
        if need == 0 {
            break;
        }
        let mut layer: Vec<u32> = within
            .iter()
            .filter(|c| c.count_ones() as usize == s)
            .collect();
        if layer.len() <= need {
            need -= layer.len();
            layer.into_iter().for_each(|c| {
                out.insert(c);
            });
        } else {
            layer.sort_unstable_by(|&a, &b| lex_cmp(a, b));
            layer[..need].iter().for_each(|&c| {
                out.insert(c);
            });
            need = 0;
        }
    }
    Ok(out)
}

/// `G_Q = G_{P(n), Q}`.
pub fn centered(n: usize, q: usize) -> Result<Family> {
    centered_family(&Family::full(n)?, q)
}

/// Whether `f` is centered in `within`.
pub fn is_centered(within: &Family, f: &Family) -> Result<bool> {
    if !f.is_subset_of(within) {
        return domain("is_centered: F is not contained in P'");
    }
    let n = within.n();
    let key = |c: u32| {
        let s = c.count_ones() as usize;
        (twice_distance(n, s), std::cmp::Reverse(s))
    };
    let worst_in = f.iter().map(key).max();
    let best_out = within.difference(f).iter().map(key).min();
    Ok(match (worst_in, best_out) {
        (Some(a), Some(b)) => a <= b,
        _ => true,
    })
}

/// The sets of size `level` containing at least one member of `f`.
///
/// `f` must lie inside a single layer strictly below `level`.
pub fn upper_shadow(f: &Family, level: usize) -> Result<Family> {
    let n = f.n();
    if level > n {
        return domain(format!("upper_shadow: level {level} outside [0, {n}]"));
    }
    let sizes: std::collections::BTreeSet<usize> =
        f.iter().map(|c| c.count_ones() as usize).collect();
    if sizes.len() > 1 {
        return domain("upper_shadow: input family spans several layers");
    }
    if let Some(&s) = sizes.iter().next() {
        if s >= level {
            return domain(format!(
                "upper_shadow: members of size {s} are not below level {level}"
            ));
        }
    }
    let mut out = Family::empty(n)?;
    let full = ((1u64 << n) - 1) as u32;
    for c in f.iter() {
        let add = level - c.count_ones() as usize;
        for_each_submask_of_size(full & !c, add, |extra| {
            out.insert(c | extra);
        });
    }
    Ok(out)
}

/// Calls `visit` on every submask of `mask` with exactly `size` bits.
pub fn for_each_submask_of_size(mask: u32, size: usize, mut visit: impl FnMut(u32)) {
    let bits: Vec<u32> = {
        let mut v = Vec::new();
        let mut m = mask;
        while m != 0 {
            v.push(m & m.wrapping_neg());
            m &= m - 1;
        }
        v
    };
    if size > bits.len() {
        return;
    }
    if size == 0 {
        visit(0);
        return;
    }
    // Gosper over index sets, mapped back onto the bits of `mask`.
    let m = bits.len();
    let mut sel: u64 = (1u64 << size) - 1;
    let limit = 1u64 << m;
    while sel < limit {
        let mut out = 0u32;
        let mut s = sel;
        while s != 0 {
            out |= bits[s.trailing_zeros() as usize];
            s &= s - 1;
        }
        visit(out);
        let c = sel & sel.wrapping_neg();
        let r = sel + c;
        sel = (((r ^ sel) >> 2) / c) | r;
    }
}

/// All sets with `ceil((n-d+1)/2) <= |A| <= ceil((n+d-1)/2)`.
pub fn middle_layers(n: usize, d: usize) -> Result<Family> {
    if d == 0 || d > n + 1 {
        return domain(format!("middle_layers: d = {d} outside [1, {}]", n + 1));
    }
    let (lo, hi) = middle_level_range(n, d);
    let mut f = Family::empty(n)?;
    for code in 0..(1u32 << n) {
        let s = code.count_ones() as i64;
        if s >= lo && s <= hi {
            f.insert(code);
        }
    }
    Ok(f)
}
