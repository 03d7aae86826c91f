//! Chains in `P(n)`: step vectors, exact SCD weights, counting and
//! enumeration of k-chains inside a family.
//!
//! A chain's weight depends only on the sizes of its sets, so most
//! aggregate quantities here are computed per *level profile*: the bitmask
//! over `0..=n` of the sizes a chain visits.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::lattice::{binomial, twice_distance, Family, HARD_MAX_N};

/// Successive step sizes `a_1, ..., a_{k-1}` of a chain, all `>= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct StepVector(Vec<u32>);

impl StepVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.contains(&0) {
            return domain(format!("step sizes must be >= 1, got {entries:?}"));
        }
        Ok(StepVector(entries))
    }

    /// `(1, ..., 1)` of length `k - 1`, the step vector of plain k-chains.
    pub fn ones(k: usize) -> Self {
        StepVector(vec![1; k.saturating_sub(1)])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Number of sets in a chain with these steps.
    pub fn chain_len(&self) -> usize {
        self.0.len() + 1
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self >= other` (same length).
    pub fn dominates(&self, other: &StepVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// All step vectors of `len` entries with total at most `max_total`,
    /// in increasing total, then lexicographic order.
    pub fn all_bounded(len: usize, max_total: u32) -> Vec<StepVector> {
        let mut out = Vec::new();
        if len == 0 {
            out.push(StepVector(Vec::new()));
            return out;
        }
        for total in len as u32..=max_total {
            compositions(total, len, &mut Vec::new(), &mut |v| {
                out.push(StepVector(v.to_vec()))
            });
        }
        out
    }
}

fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if parts == 1 {
        prefix.push(total);
        emit(prefix);
        prefix.pop();
        return;
    }
    for first in 1..=total - (parts as u32 - 1) {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, emit);
        prefix.pop();
    }
}

impl TryFrom<Vec<u32>> for StepVector {
    type Error = crate::Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        StepVector::new(v)
    }
}

impl From<StepVector> for Vec<u32> {
    fn from(s: StepVector) -> Self {
        s.0
    }
}

impl fmt::Debug for StepVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for StepVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for StepVector {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.is_empty() {
            return Ok(StepVector(Vec::new()));
        }
        let v = t
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| crate::Error::Domain(format!("bad step size '{x}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        StepVector::new(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Down,
    Up,
}

/// Orientation of a chain with bottom size `lo` and top size `hi`: downward
/// iff the top is at least as far from the middle as the bottom.
pub fn direction_of(n: usize, lo: usize, hi: usize) -> Direction {
    if twice_distance(n, hi) >= twice_distance(n, lo) {
        Direction::Down
    } else {
        Direction::Up
    }
}

/// A strictly nested sequence of subsets of `[n]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    n: usize,
    sets: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStats {
    pub steps: StepVector,
    pub height: u32,
    pub distance: Ratio<u64>,
    pub direction: Direction,
}

impl Chain {
    pub fn new(n: usize, sets: Vec<u32>) -> Result<Self> {
        if n > HARD_MAX_N {
            return domain(format!("n = {n} too large"));
        }
        if sets.is_empty() {
            return domain("a chain needs at least one set");
        }
        for &c in &sets {
            if u64::from(c) >= 1u64 << n {
                return domain(format!("code {c} is not a subset of [{n}]"));
            }
        }
        for w in sets.windows(2) {
            if w[0] & !w[1] != 0 || w[0] == w[1] {
                return domain(format!(
                    "sets {} and {} are not strictly nested",
                    w[0], w[1]
                ));
            }
        }
        Ok(Chain { n, sets })
    }

    /// No validation; callers guarantee strict nesting.
    pub(crate) fn from_raw(n: usize, sets: Vec<u32>) -> Self {
        debug_assert!(sets.windows(2).all(|w| w[0] & !w[1] == 0 && w[0] != w[1]));
        Chain { n, sets }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[u32] {
        &self.sets
    }

    pub fn into_sets(self) -> Vec<u32> {
        self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bottom(&self) -> u32 {
        self.sets[0]
    }

    pub fn top(&self) -> u32 {
        *self.sets.last().expect("non-empty")
    }

    pub fn sizes(&self) -> Vec<u32> {
        self.sets.iter().map(|c| c.count_ones()).collect()
    }

    /// Bitmask of the levels the chain visits.
    pub fn level_mask(&self) -> u32 {
        self.sets.iter().fold(0, |m, c| m | 1 << c.count_ones())
    }

    pub fn steps(&self) -> StepVector {
        StepVector(
            self.sets
                .windows(2)
                .map(|w| (w[1] & !w[0]).count_ones())
                .collect(),
        )
    }

    pub fn height(&self) -> u32 {
        (self.top() & !self.bottom()).count_ones()
    }

    /// `2 d(A) = max(|n - 2|A_1||, |n - 2|A_l||)`.
    pub fn twice_distance(&self) -> usize {
        twice_distance(self.n, self.bottom().count_ones() as usize)
            .max(twice_distance(self.n, self.top().count_ones() as usize))
    }

    pub fn distance(&self) -> Ratio<u64> {
        Ratio::new(self.twice_distance() as u64, 2)
    }

    pub fn direction(&self) -> Direction {
        direction_of(
            self.n,
            self.bottom().count_ones() as usize,
            self.top().count_ones() as usize,
        )
    }

    pub fn stats(&self) -> ChainStats {
        ChainStats {
            steps: self.steps(),
            height: self.height(),
            distance: self.distance(),
            direction: self.direction(),
        }
    }

    /// Whether every set of the chain belongs to `f`.
    pub fn inside(&self, f: &Family) -> bool {
        self.sets.iter().all(|&c| f.contains(c))
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::io::format_chain(self))
    }
}

/// An exact chain weight in `(0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactWeight(BigRational);

impl ExactWeight {
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }
}

impl fmt::Display for ExactWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn sizes_of_mask(mask: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros());
        m &= m - 1;
    }
    out
}

/// Denominator of the downward-formula weight for ascending sizes.
pub fn downward_denominator(sizes: &[u32]) -> BigUint {
    sizes
        .windows(2)
        .map(|w| BigUint::from(binomial(u64::from(w[1]), u64::from(w[0]))))
        .product()
}

/// Denominator of the upward-formula weight for ascending sizes.
pub fn upward_denominator(n: usize, sizes: &[u32]) -> BigUint {
    let n = n as u64;
    sizes
        .windows(2)
        .map(|w| BigUint::from(binomial(n - u64::from(w[0]), n - u64::from(w[1]))))
        .product()
}

/// Weight of any chain whose sets have the given ascending sizes.
pub fn weight_of_sizes(n: usize, sizes: &[u32]) -> BigRational {
    let den = match direction_of(n, sizes[0] as usize, *sizes.last().unwrap() as usize) {
        Direction::Down => downward_denominator(sizes),
        Direction::Up => upward_denominator(n, sizes),
    };
    BigRational::new(BigInt::one(), BigInt::from(den))
}

/// Weight of every chain visiting exactly the levels in `mask`.
pub fn weight_of_level_mask(n: usize, mask: u32) -> BigRational {
    weight_of_sizes(n, &sizes_of_mask(mask))
}

/// Probability that a uniformly random symmetric chain decomposition of
/// `P(n)` contains the chain.
pub fn weight(chain: &Chain) -> ExactWeight {
    ExactWeight(weight_of_sizes(chain.n, &chain.sizes()))
}

/// Memoized weights keyed by level mask.
#[derive(Debug, Default)]
pub struct WeightTable {
    n: usize,
    cache: HashMap<u32, BigRational>,
}

impl WeightTable {
    pub fn new(n: usize) -> Self {
        WeightTable {
            n,
            cache: HashMap::new(),
        }
    }

    pub fn get(&mut self, mask: u32) -> &BigRational {
        let n = self.n;
        self.cache
            .entry(mask)
            .or_insert_with(|| weight_of_level_mask(n, mask))
    }
}

/// All profile weights of `P(n)` over one common denominator, so weighted
/// sums reduce to integer arithmetic. Only built for small `n`.
#[derive(Clone, Debug)]
pub struct ScaledWeights {
    n: usize,
    denominator: BigUint,
    numerators: Vec<u128>,
}

impl ScaledWeights {
    /// `None` when a scaled numerator does not fit in `u128`.
    pub fn new(n: usize) -> Option<Self> {
        if n > 14 {
            return None;
        }
        let masks = 1u32 << (n + 1);
        let dens: Vec<BigUint> = (1..masks)
            .map(|m| {
                let w = weight_of_level_mask(n, m);
                w.denom().to_biguint().expect("positive")
            })
            .collect();
        let mut lcm = BigUint::one();
        for d in &dens {
            lcm = num_integer::Integer::lcm(&lcm, d);
        }
        let mut numerators = vec![0u128; masks as usize];
        for (i, d) in dens.iter().enumerate() {
            numerators[i + 1] = (&lcm / d).to_u128()?;
        }
        Some(ScaledWeights {
            n,
            denominator: lcm,
            numerators,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    #[inline]
    pub fn numerator(&self, mask: u32) -> u128 {
        self.numerators[mask as usize]
    }

    pub fn to_rational(&self, scaled: u128) -> BigRational {
        BigRational::new(BigInt::from(scaled), BigInt::from(self.denominator.clone()))
    }
}

/// `c_k(F)`: the number of k-chains inside `f`.
///
/// Layered dynamic programme: `cur[X]` holds the number of j-chains with top
/// `X`, and the subset-sum (zeta) transform gives the next layer in
/// `O(n 2^n)` per step.
pub fn count_k_chains(f: &Family, k: usize) -> Result<BigUint> {
    if k == 0 {
        return domain("count_k_chains: k must be >= 1");
    }
    match count_k_chains_u128(f, k) {
        Some(c) => Ok(BigUint::from(c)),
        None => Ok(count_k_chains_big(f, k)),
    }
}

/// Fixed-width variant of [`count_k_chains`]; `None` on overflow.
pub fn count_k_chains_u128(f: &Family, k: usize) -> Option<u128> {
    let n = f.n();
    let size = 1usize << n;
    let mut cur: Vec<u128> = vec![0; size];
    for c in f.iter() {
        cur[c as usize] = 1;
    }
    let mut g = vec![0u128; size];
    for _ in 1..k {
        g.copy_from_slice(&cur);
        for bit in 0..n {
            let b = 1usize << bit;
            for x in 0..size {
                if x & b != 0 {
                    g[x] = g[x].checked_add(g[x ^ b])?;
                }
            }
        }
        for c in 0..size {
            cur[c] = if f.contains(c as u32) {
                g[c] - cur[c]
            } else {
                0
            };
        }
    }
    cur.iter().try_fold(0u128, |acc, &v| acc.checked_add(v))
}

fn count_k_chains_big(f: &Family, k: usize) -> BigUint {
    let n = f.n();
    let size = 1usize << n;
    let mut cur: Vec<BigUint> = (0..size)
        .map(|c| {
            if f.contains(c as u32) {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        })
        .collect();
    for _ in 1..k {
        let mut g = cur.clone();
        for bit in 0..n {
            let b = 1usize << bit;
            for x in 0..size {
                if x & b != 0 {
                    let add = g[x ^ b].clone();
                    g[x] += add;
                }
            }
        }
        for c in 0..size {
            cur[c] = if f.contains(c as u32) {
                &g[c] - &cur[c]
            } else {
                BigUint::zero()
            };
        }
    }
    cur.into_iter().sum()
}

/// Same count by direct submask iteration, `O(3^n)` per layer.
pub fn count_k_chains_by_submasks(f: &Family, k: usize) -> BigUint {
    let members = f.codes();
    let mut cur: HashMap<u32, BigUint> = members.iter().map(|&c| (c, BigUint::one())).collect();
    for _ in 1..k {
        let mut next = HashMap::with_capacity(members.len());
        for &x in &members {
            let mut acc = BigUint::zero();
            // strict submasks of x
            let mut y = x;
            while y != 0 {
                y = (y - 1) & x;
                if let Some(v) = cur.get(&y) {
                    acc += v;
                }
            }
            next.insert(x, acc);
        }
        cur = next;
    }
    cur.into_values().sum()
}

/// Counts of chains inside `f` with exactly `len` sets, grouped by level
/// profile. `step_ok(i, s)` filters the `i`-th step (0-based) by its size.
///
/// For each profile prefix the number of chains ending at every set of the
/// current level is propagated one level up; nothing is enumerated chain by
/// chain.
pub fn profile_counts(
    f: &Family,
    len: usize,
    step_ok: impl Fn(usize, u32) -> bool,
) -> BTreeMap<u32, u128> {
    let mut out = BTreeMap::new();
    if len == 0 {
        return out;
    }
    let n = f.n();
    let mut layers: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for c in f.iter() {
        layers[c.count_ones() as usize].push(c);
    }
    let mut index = vec![u32::MAX; 1usize << n];
    for layer in &layers {
        for (i, &c) in layer.iter().enumerate() {
            index[c as usize] = i as u32;
        }
    }
    let ctx = ProfileCtx {
        n,
        layers: &layers,
        index: &index,
        len,
        step_ok: &step_ok,
    };
    for s in 0..=n {
        if layers[s].is_empty() {
            continue;
        }
        let v = vec![1u128; layers[s].len()];
        ctx.extend(s, &v, 1 << s, 1, &mut out);
    }
    out
}

struct ProfileCtx<'a, F> {
    n: usize,
    layers: &'a [Vec<u32>],
    index: &'a [u32],
    len: usize,
    step_ok: &'a F,
}

impl<F: Fn(usize, u32) -> bool> ProfileCtx<'_, F> {
    fn extend(&self, s: usize, v: &[u128], mask: u32, depth: usize, out: &mut BTreeMap<u32, u128>) {
        if depth == self.len {
            let total: u128 = v.iter().sum();
            if total > 0 {
                *out.entry(mask).or_insert(0) += total;
            }
            return;
        }
        let full = ((1u64 << self.n) - 1) as u32;
        for t in s + 1..=self.n {
            if self.layers[t].is_empty() || !(self.step_ok)(depth - 1, (t - s) as u32) {
                continue;
            }
            let mut w = vec![0u128; self.layers[t].len()];
            let nnz = v.iter().filter(|&&x| x != 0).count() as u64;
            let up_cost = nnz * binomial((self.n - s) as u64, (t - s) as u64);
            let down_cost = self.layers[t].len() as u64 * binomial(t as u64, s as u64);
            if up_cost <= down_cost {
                for (i, &x) in self.layers[s].iter().enumerate() {
                    if v[i] == 0 {
                        continue;
                    }
                    crate::lattice::for_each_submask_of_size(full & !x, t - s, |extra| {
                        let j = self.index[(x | extra) as usize];
                        if j != u32::MAX && ((x | extra).count_ones() as usize) == t {
                            w[j as usize] += v[i];
                        }
                    });
                }
            } else {
                for (j, &y) in self.layers[t].iter().enumerate() {
                    let mut acc = 0u128;
                    crate::lattice::for_each_submask_of_size(y, s, |x| {
                        let i = self.index[x as usize];
                        if i != u32::MAX {
                            acc += v[i as usize];
                        }
                    });
                    w[j] = acc;
                }
            }
            if w.iter().any(|&x| x != 0) {
                self.extend(t, &w, mask | 1 << t, depth + 1, out);
            }
        }
    }
}

/// Lazy depth-first walk over the chains of a family with per-step size
/// bounds. Chains come out ordered by bottom code, then by each successive
/// extension's code.
pub struct ChainWalker<'a> {
    family: &'a Family,
    bounds: Vec<(u32, u32)>,
    bottoms: Vec<u32>,
    next_bottom: usize,
    // frames[i]: candidate sets for position i+1 and a cursor
    frames: Vec<(Vec<u32>, usize)>,
    current: Vec<u32>,
}

impl<'a> ChainWalker<'a> {
    pub fn new(family: &'a Family, bounds: Vec<(u32, u32)>) -> Self {
        ChainWalker {
            family,
            bounds,
            bottoms: family.codes(),
            next_bottom: 0,
            frames: Vec::new(),
            current: Vec::new(),
        }
    }

    fn candidates(&self, x: u32, (lo, hi): (u32, u32)) -> Vec<u32> {
        let n = self.family.n();
        let free = (((1u64 << n) - 1) as u32) & !x;
        let avail = free.count_ones();
        let mut out = Vec::new();
        for add in lo..=hi.min(avail) {
            crate::lattice::for_each_submask_of_size(free, add as usize, |extra| {
                if self.family.contains(x | extra) {
                    out.push(x | extra);
                }
            });
        }
        out.sort_unstable();
        out
    }
}

impl Iterator for ChainWalker<'_> {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        let n = self.family.n();
        loop {
            if self.current.len() == self.bounds.len() + 1 {
                let chain = Chain::from_raw(n, self.current.clone());
                self.current.pop();
                return Some(chain);
            }
            if self.current.is_empty() {
                let &b = self.bottoms.get(self.next_bottom)?;
                self.next_bottom += 1;
                self.current.push(b);
                self.frames.clear();
                continue;
            }
            let depth = self.current.len() - 1;
            if self.frames.len() == depth {
                let x = *self.current.last().unwrap();
                let cands = self.candidates(x, self.bounds[depth]);
                self.frames.push((cands, 0));
            }
            let (cands, cursor) = &mut self.frames[depth];
            if *cursor < cands.len() {
                let y = cands[*cursor];
                *cursor += 1;
                self.current.push(y);
            } else {
                self.frames.pop();
                self.current.pop();
            }
        }
    }
}

/// `Φ*(F, a)`: chains in `f` with step sizes exactly `a`.
pub fn enumerate_phi_star<'a>(f: &'a Family, a: &StepVector) -> ChainWalker<'a> {
    ChainWalker::new(f, a.0.iter().map(|&s| (s, s)).collect())
}

/// `Φ(F, a)`: chains in `f` with step sizes at least `a`.
pub fn enumerate_phi<'a>(f: &'a Family, a: &StepVector) -> ChainWalker<'a> {
    let n = f.n() as u32;
    ChainWalker::new(f, a.0.iter().map(|&s| (s, n)).collect())
}

/// Profile counts of `Φ(F, a)`.
pub fn phi_profiles(f: &Family, a: &StepVector) -> BTreeMap<u32, u128> {
    let steps = a.0.clone();
    profile_counts(f, a.chain_len(), move |i, s| s >= steps[i])
}

/// Profile counts of `Φ*(F, a)`.
pub fn phi_star_profiles(f: &Family, a: &StepVector) -> BTreeMap<u32, u128> {
    let steps = a.0.clone();
    profile_counts(f, a.chain_len(), move |i, s| s == steps[i])
}

pub(crate) fn weigh_profiles(n: usize, profiles: &BTreeMap<u32, u128>) -> BigRational {
    let mut table = WeightTable::new(n);
    let mut acc = BigRational::zero();
    for (&mask, &count) in profiles {
        acc += table.get(mask) * BigRational::from_integer(BigInt::from(count));
    }
    acc
}

/// `W_a(F)`: total weight of the chains in `Φ(F, a)`.
pub fn weighted_sum(f: &Family, a: &StepVector) -> BigRational {
    weigh_profiles(f.n(), &phi_profiles(f, a))
}

/// Total weight of `Φ*(F, a)`.
pub fn weighted_sum_exact(f: &Family, a: &StepVector) -> BigRational {
    weigh_profiles(f.n(), &phi_star_profiles(f, a))
}

/// Number of k-chains with steps at least `a` inside a skipless chain of
/// `p` sets, i.e. position tuples `i_1 < ... < i_k` in `0..p` with
/// `i_{j+1} - i_j >= a_j`.
pub fn path_chain_count(p: usize, a: &StepVector) -> BigUint {
    let k = a.chain_len();
    if p == 0 {
        return BigUint::zero();
    }
    // ways[i]: tuples so far whose last position is i
    let mut ways: Vec<BigUint> = vec![BigUint::one(); p];
    for j in 0..k - 1 {
        let gap = a.0[j] as usize;
        let mut prefix = BigUint::zero();
        let mut next = vec![BigUint::zero(); p];
        for i in 0..p {
            if i >= gap {
                prefix += &ways[i - gap];
            }
            next[i] = prefix.clone();
        }
        ways = next;
    }
    ways.into_iter().sum()
}

/// `w(B) / w(A)` for chains with identical steps and `d(A) > d(B)`.
pub fn ratio_same_steps(a: &Chain, b: &Chain) -> Result<BigRational> {
    if a.n != b.n {
        return domain("ratio_same_steps: chains live in different P(n)");
    }
    if a.steps() != b.steps() {
        return domain(format!(
            "ratio_same_steps: step vectors differ ({} vs {})",
            a.steps(),
            b.steps()
        ));
    }
    if a.twice_distance() <= b.twice_distance() {
        return domain("ratio_same_steps: requires d(A) > d(B)");
    }
    Ok(weight(b).0 / weight(a).0)
}

/// Number of k-chains of `f ∪ {x}` that contain `x`.
pub fn chains_through(f: &Family, x: u32, k: usize) -> u128 {
    if k == 0 {
        return 0;
    }
    let n = f.n();
    let full = ((1u64 << n) - 1) as u32;
    let down = interval_chain_counts(x, k, |y| y == x || f.contains(y));
    let comp = full & !x;
    // reversed: z ⊆ comp stands for x ∪ (comp \ z), so the top z = comp is x
    let up = interval_chain_counts(comp, k, |z| {
        let y = x | (comp & !z);
        y == x || f.contains(y)
    });
    // down[j]: j-chains with top x; up[j]: j-chains with bottom x
    (1..=k).map(|i| down[i] * up[k + 1 - i]).sum()
}

// res[j]: j-chains inside the subsets of `span` that end at `span`, where
// `member` decides membership of each subset.
fn interval_chain_counts(span: u32, k: usize, member: impl Fn(u32) -> bool) -> Vec<u128> {
    let bits: Vec<u32> = {
        let mut v = Vec::new();
        let mut m = span;
        while m != 0 {
            v.push(m & m.wrapping_neg());
            m &= m - 1;
        }
        v
    };
    let m = bits.len();
    let size = 1usize << m;
    let code = |t: usize| -> u32 {
        let mut out = 0;
        let mut s = t;
        while s != 0 {
            out |= bits[s.trailing_zeros() as usize];
            s &= s - 1;
        }
        out
    };
    let inside: Vec<bool> = (0..size).map(|t| member(code(t))).collect();
    let mut res = vec![0u128; k + 1];
    let mut cur: Vec<u128> = inside.iter().map(|&b| u128::from(b)).collect();
    res[1] = cur[size - 1];
    let mut g = vec![0u128; size];
    for j in 2..=k {
        g.copy_from_slice(&cur);
        for bit in 0..m {
            let b = 1usize << bit;
            for t in 0..size {
                if t & b != 0 {
                    g[t] += g[t ^ b];
                }
            }
        }
        for t in 0..size {
            cur[t] = if inside[t] { g[t] - cur[t] } else { 0 };
        }
        res[j] = cur[size - 1];
    }
    res
}
