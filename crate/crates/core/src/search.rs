//! Minimizing the number of k-chains over families of a given size.
//!
//! Three strategies: a plain sweep over all families (`n <= 4`), an orderly
//! generation of one family per orbit of the symmetric group (`n <= 5`),
//! and a seeded local search for anything larger.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::{chains_through, count_k_chains_u128};
use crate::error::{domain, resource, Error, Result};
use crate::lattice::{binomial, centered, check_envelope, permute_code, sigma, Family};
use crate::scd::rng_stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    ExhaustiveCanonical,
    LocalSearch,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "exhaustive-canonical" | "canonical" => Ok(SearchMode::ExhaustiveCanonical),
            "local" | "local-search" => Ok(SearchMode::LocalSearch),
            other => domain(format!("unknown search mode '{other}'")),
        }
    }
}

/// Largest `n` for the plain sweep.
pub const PLAIN_MAX_N: usize = 4;
/// Largest `n` for the orbit sweep.
pub const CANONICAL_MAX_N: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchConfig {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub mode: SearchMode,
    pub restarts: u64,
    /// Swap attempts per restart.
    pub moves: u64,
    pub tabu: usize,
    pub seed: u64,
    /// 0 means the global thread pool.
    pub workers: usize,
    pub witness_cap: usize,
}

impl SearchConfig {
    pub fn new(n: usize, k: usize, m: usize, mode: SearchMode) -> Self {
        SearchConfig {
            n,
            k,
            m,
            mode,
            restarts: 100,
            moves: 2_000,
            tabu: 8,
            seed: 0,
            workers: 0,
            witness_cap: 16,
        }
    }

    fn validate(&self) -> Result<()> {
        check_envelope(self.n)?;
        if self.k == 0 {
            return domain("k must be >= 1");
        }
        if self.m as u64 > 1u64 << self.n {
            return domain(format!("M = {} exceeds 2^{}", self.m, self.n));
        }
        match self.mode {
            SearchMode::Exhaustive if self.n > PLAIN_MAX_N => {
                resource(format!("plain exhaustive search needs n <= {PLAIN_MAX_N}"))
            }
            SearchMode::ExhaustiveCanonical if self.n > CANONICAL_MAX_N => {
                resource(format!("canonical search needs n <= {CANONICAL_MAX_N}"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchResult {
    pub config: SearchConfig,
    pub min_value: u128,
    pub centered_value: u128,
    /// `min == centered`; for local search only a lack of counterexample.
    pub conjecture_holds: bool,
    /// Canonical forms, largest membership vector in (size, code) order
    /// first.
    pub witnesses: Vec<Vec<u32>>,
    pub exhaustive: bool,
    pub families_examined: u64,
    pub elapsed_ms: u128,
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        Ok(job())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Resource(e.to_string()))?;
        Ok(pool.install(job))
    }
}

fn centered_value(n: usize, k: usize, m: usize) -> Result<u128> {
    count_k_chains_u128(&centered(n, m)?, k).ok_or_else(|| Error::Resource("count overflow".into()))
}

/// Minimum of `c_k` over families of size `M`.
pub fn ck_min(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let start = Instant::now();
    let centered_value = centered_value(config.n, config.k, config.m)?;
    let (min_value, witnesses, examined, exhaustive) = match config.mode {
        SearchMode::Exhaustive => {
            let cfg = config.clone();
            let (v, w, e) = with_pool(config.workers, move || plain_min(&cfg))?;
            (v, w, e, true)
        }
        SearchMode::ExhaustiveCanonical => {
            let sweep = with_pool(config.workers, || {
                orbit_sweep(config.n, config.k, config.witness_cap)
            })??;
            let row = &sweep.rows[config.m];
            (row.min, row.witnesses.clone(), sweep.orbits, true)
        }
        SearchMode::LocalSearch => {
            let r = local_search_inner(config)?;
            (r.0, r.1, r.2, false)
        }
    };
    Ok(SearchResult {
        config: config.clone(),
        min_value,
        centered_value,
        conjecture_holds: min_value == centered_value,
        witnesses,
        exhaustive,
        families_examined: examined,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Seeded hill climbing; see [`SearchConfig`].
pub fn local_search(config: &SearchConfig) -> Result<SearchResult> {
    let mut cfg = config.clone();
    cfg.mode = SearchMode::LocalSearch;
    ck_min(&cfg)
}

// ---- plain sweep ----

// chain counts for the family whose members are the set bits of `mask`
// (bit = subset code), via a top-down table over members
fn count_small(n: usize, mask: u64, k: usize, subs: &[Vec<u32>]) -> u128 {
    // chains longer than 7 sets do not exist for n <= 4
    let size = 1usize << n;
    let mut total = 0u128;
    let mut down = vec![[0u128; 8]; size];
    // codes in (size, code) order are a linear extension of inclusion
    for &x in ORDERED[n].iter() {
        if mask >> x & 1 == 0 {
            continue;
        }
        let d = &mut [0u128; 8];
        d[1] = 1;
        for &y in &subs[x as usize] {
            if mask >> y & 1 == 1 {
                for j in 2..=k.min(7) {
                    d[j] += down[y as usize][j - 1];
                }
            }
        }
        down[x as usize] = *d;
        total += d.get(k).copied().unwrap_or(0);
    }
    total
}

static ORDERED: std::sync::LazyLock<Vec<Vec<u32>>> = std::sync::LazyLock::new(|| {
    (0..=CANONICAL_MAX_N)
        .map(|n| {
            let mut v: Vec<u32> = (0..1u32 << n).collect();
            v.sort_by_key(|&c| (c.count_ones(), c));
            v
        })
        .collect()
});

fn strict_subsets(n: usize) -> Vec<Vec<u32>> {
    (0..1u32 << n)
        .map(|x| {
            let mut v = Vec::new();
            let mut y = x;
            while y != 0 {
                y = (y - 1) & x;
                v.push(y);
            }
            v.retain(|&y| y != x);
            v
        })
        .collect()
}

fn plain_min(config: &SearchConfig) -> (u128, Vec<Vec<u32>>, u64) {
    let n = config.n;
    let k = config.k;
    let npos = 1u32 << n;
    let subs = strict_subsets(n);
    let masks: Vec<u64> = gosper_all(npos, config.m as u32);
    let values: Vec<u128> = masks.par_iter().map(|&m| count_small(n, m, k, &subs)).collect();
    let min = values.iter().copied().min().unwrap_or(0);
    let mut wit: Vec<Vec<u32>> = masks
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v == min)
        .map(|(&m, _)| canonical_codes(n, &codes_of_mask(m)))
        .collect();
    sort_witnesses(n, &mut wit);
    wit.truncate(config.witness_cap);
    (min, wit, masks.len() as u64)
}

// largest membership vector in (size, code) order first
fn sort_witnesses(n: usize, wit: &mut Vec<Vec<u32>>) {
    wit.sort_by_cached_key(|w| std::cmp::Reverse(position_vector(n, w)));
    wit.dedup();
}

fn codes_of_mask(mask: u64) -> Vec<u32> {
    (0..64u32).filter(|&c| mask >> c & 1 == 1).collect()
}

/// All `width`-bit masks with `ones` bits set, increasing.
fn gosper_all(width: u32, ones: u32) -> Vec<u64> {
    if ones == 0 {
        return vec![0];
    }
    if ones > width {
        return Vec::new();
    }
    let limit = 1u64 << width;
    let mut out = Vec::new();
    let mut x = (1u64 << ones) - 1;
    while x < limit {
        out.push(x);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

// ---- canonical forms ----

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

// membership in (size, code) position order; the first position is the
// most significant
fn position_vector(n: usize, codes: &[u32]) -> Vec<bool> {
    let mut pos_of = vec![0usize; 1 << n];
    let mut order: Vec<u32> = (0..1u32 << n).collect();
    order.sort_by_key(|&c| (c.count_ones(), c));
    for (i, &c) in order.iter().enumerate() {
        pos_of[c as usize] = i;
    }
    let mut v = vec![false; 1 << n];
    for &c in codes {
        v[pos_of[c as usize]] = true;
    }
    v
}

/// Representative of the orbit of a family under permutations of `[n]`:
/// the image whose membership vector, read in (size, code) order, is
/// lexicographically largest. Returned as sorted codes.
pub fn canonical_form(f: &Family) -> Result<Family> {
    if f.n() > 7 {
        return resource("canonical_form: n > 7 is too many permutations");
    }
    Family::from_codes(f.n(), canonical_codes(f.n(), &f.codes()))
}

fn canonical_codes(n: usize, codes: &[u32]) -> Vec<u32> {
    let mut best: Option<(Vec<bool>, Vec<u32>)> = None;
    for perm in all_permutations(n) {
        let mut img: Vec<u32> = codes.iter().map(|&c| permute_code(c, &perm)).collect();
        let key = position_vector(n, &img);
        if best.as_ref().is_none_or(|(b, _)| key > *b) {
            img.sort_unstable();
            best = Some((key, img));
        }
    }
    best.map(|b| b.1).unwrap_or_default()
}

// ---- orbit sweep ----

/// Minimum over all families of one size, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepRow {
    pub m: usize,
    pub min: u128,
    pub witnesses: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitSweep {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<SweepRow>,
    /// Orbits visited, one family each.
    pub orbits: u64,
}

// chains longer than 7 sets do not exist for n <= 5, so counts stop there
struct OrbitCtx {
    k: usize,
    npos: usize,
    pos_code: Vec<u32>,
    code_pos: Vec<usize>,
    // per non-identity permutation: byte-indexed images of key masks
    tables: Vec<[[u32; 256]; 4]>,
    cap: usize,
}

#[derive(Clone)]
struct Node {
    key: u32,
    last: usize,
    size: usize,
    count: u128,
    down: Vec<[u128; 8]>,
}

#[derive(Clone)]
struct Acc {
    mins: Vec<u128>,
    wits: Vec<Vec<u32>>,
    orbits: u64,
}

impl Acc {
    fn new(npos: usize) -> Self {
        Acc { mins: vec![u128::MAX; npos + 1], wits: vec![Vec::new(); npos + 1], orbits: 0 }
    }

    fn record(&mut self, size: usize, value: u128, key: u32, cap: usize) {
        self.orbits += 1;
        if value < self.mins[size] {
            self.mins[size] = value;
            self.wits[size].clear();
        }
        if value == self.mins[size] {
            // keys kept in decreasing order
            let w = &mut self.wits[size];
            if w.len() < cap || w.last().is_some_and(|&l| key > l) {
                let at = w.partition_point(|&x| x > key);
                w.insert(at, key);
                w.truncate(cap);
            }
        }
    }

    fn merge(mut self, other: Acc, cap: usize) -> Acc {
        self.orbits += other.orbits;
        for s in 0..self.mins.len() {
            match other.mins[s].cmp(&self.mins[s]) {
                std::cmp::Ordering::Less => {
                    self.mins[s] = other.mins[s];
                    self.wits[s] = other.wits[s].clone();
                }
                std::cmp::Ordering::Equal => {
                    self.wits[s].extend(&other.wits[s]);
                    self.wits[s].sort_unstable_by(|a, b| b.cmp(a));
                    self.wits[s].dedup();
                    self.wits[s].truncate(cap);
                }
                std::cmp::Ordering::Greater => {}
            }
        }
        self
    }
}

impl OrbitCtx {
    fn new(n: usize, k: usize, cap: usize) -> Self {
        let npos = 1usize << n;
        let mut pos_code: Vec<u32> = (0..npos as u32).collect();
        pos_code.sort_by_key(|&c| (c.count_ones(), c));
        let mut code_pos = vec![0; npos];
        for (p, &c) in pos_code.iter().enumerate() {
            code_pos[c as usize] = p;
        }
        let bit = |p: usize| 1u32 << (npos - 1 - p);
        let mut tables = Vec::new();
        for perm in all_permutations(n).into_iter().skip(1) {
            let mut t = [[0u32; 256]; 4];
            for (byte, table) in t.iter_mut().enumerate() {
                for (v, slot) in table.iter_mut().enumerate() {
                    let mut img = 0u32;
                    for i in 0..8 {
                        let kb = byte * 8 + i;
                        if v >> i & 1 == 1 && kb < npos {
                            let p = npos - 1 - kb;
                            img |= bit(code_pos[permute_code(pos_code[p], &perm) as usize]);
                        }
                    }
                    *slot = img;
                }
            }
            tables.push(t);
        }
        OrbitCtx { k, npos, pos_code, code_pos, tables, cap }
    }

    fn bit(&self, p: usize) -> u32 {
        1u32 << (self.npos - 1 - p)
    }

    fn is_canonical(&self, key: u32) -> bool {
        let b = key.to_le_bytes();
        self.tables.iter().all(|t| {
            let img = t[0][b[0] as usize] | t[1][b[1] as usize] | t[2][b[2] as usize] | t[3][b[3] as usize];
            img <= key
        })
    }

    fn child(&self, node: &Node, p: usize) -> Option<Node> {
        let key = node.key | self.bit(p);
        if !self.is_canonical(key) {
            return None;
        }
        let x = self.pos_code[p];
        let mut d = [0u128; 8];
        d[1] = 1;
        let mut y = x;
        while y != 0 {
            y = (y - 1) & x;
            if node.key & self.bit(self.code_pos[y as usize]) != 0 {
                for j in 2..=self.k.min(7) {
                    d[j] += node.down[y as usize][j - 1];
                }
            }
        }
        let mut down = node.down.clone();
        down[x as usize] = d;
        let added = d.get(self.k).copied().unwrap_or(0);
        Some(Node { key, last: p, size: node.size + 1, count: node.count + added, down })
    }

    fn explore(&self, node: Node, depth: usize) -> Acc {
        let mut acc = Acc::new(self.npos);
        acc.record(node.size, node.count, node.key, self.cap);
        let first = if node.size == 0 { 0 } else { node.last + 1 };
        if depth < 3 {
            let kids: Vec<Node> = (first..self.npos).filter_map(|p| self.child(&node, p)).collect();
            kids.into_par_iter()
                .map(|c| self.explore(c, depth + 1))
                .reduce(|| Acc::new(self.npos), |a, b| a.merge(b, self.cap))
                .merge(acc, self.cap)
        } else {
            self.explore_seq(&node, &mut acc);
            acc
        }
    }

    fn explore_seq(&self, node: &Node, acc: &mut Acc) {
        for p in node.last + 1..self.npos {
            if let Some(c) = self.child(node, p) {
                acc.record(c.size, c.count, c.key, self.cap);
                self.explore_seq(&c, acc);
            }
        }
    }

    fn codes_of_key(&self, key: u32) -> Vec<u32> {
        let mut v: Vec<u32> =
            (0..self.npos).filter(|&p| key & self.bit(p) != 0).map(|p| self.pos_code[p]).collect();
        v.sort_unstable();
        v
    }
}

/// Minimum of `c_k` for every size `M` at once, visiting one family per
/// orbit of the symmetric group (orderly generation: a family is kept iff
/// its membership vector is the largest in its orbit, and removing its
/// last member keeps that property).
pub fn orbit_sweep(n: usize, k: usize, witness_cap: usize) -> Result<OrbitSweep> {
    if n > CANONICAL_MAX_N {
        return resource(format!("orbit sweep needs n <= {CANONICAL_MAX_N}"));
    }
    if k == 0 {
        return domain("k must be >= 1");
    }
    let ctx = OrbitCtx::new(n, k, witness_cap);
    let root = Node { key: 0, last: 0, size: 0, count: 0, down: vec![[0; 8]; ctx.npos] };
    let acc = ctx.explore(root, 0);
    let rows = (0..=ctx.npos)
        .map(|m| SweepRow {
            m,
            min: acc.mins[m],
            witnesses: acc.wits[m].iter().map(|&key| ctx.codes_of_key(key)).collect(),
        })
        .collect();
    Ok(OrbitSweep { n, k, rows, orbits: acc.orbits })
}

/// Per-size minima by the plain sweep over all `2^(2^n)` families.
pub fn plain_sweep(n: usize, k: usize, witness_cap: usize) -> Result<OrbitSweep> {
    if n > PLAIN_MAX_N {
        return resource(format!("plain sweep needs n <= {PLAIN_MAX_N}"));
    }
    if k == 0 {
        return domain("k must be >= 1");
    }
    let npos = 1usize << n;
    let rows: Vec<SweepRow> = (0..=npos)
        .into_par_iter()
        .map(|m| {
            let mut cfg = SearchConfig::new(n, k, m, SearchMode::Exhaustive);
            cfg.witness_cap = witness_cap;
            let (min, witnesses, _) = plain_min(&cfg);
            SweepRow { m, min, witnesses }
        })
        .collect();
    Ok(OrbitSweep { n, k, rows, orbits: 1u64 << npos })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureRow {
    pub m: usize,
    pub min_value: u128,
    pub centered_value: u128,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureReport {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<ConjectureRow>,
    pub counterexamples: Vec<usize>,
    /// Largest `M` whose minimum is 0.
    pub chain_free_max: usize,
}

/// Compares the exhaustive minimum with the centered family for every `M`.
pub fn verify_conjecture_range(n: usize, k: usize, canonical: bool) -> Result<ConjectureReport> {
    let sweep = if canonical { orbit_sweep(n, k, 1)? } else { plain_sweep(n, k, 1)? };
    let mut rows = Vec::new();
    for r in &sweep.rows {
        let c = centered_value(n, k, r.m)?;
        rows.push(ConjectureRow { m: r.m, min_value: r.min, centered_value: c, holds: r.min == c });
    }
    let counterexamples = rows.iter().filter(|r| !r.holds).map(|r| r.m).collect();
    let chain_free_max = rows.iter().filter(|r| r.min_value == 0).map(|r| r.m).max().unwrap_or(0);
    Ok(ConjectureReport { n, k, rows, counterexamples, chain_free_max })
}

/// `x ⌊1 + n/2⌋`, the number of comparable pairs forced in a family of
/// `C(n, ⌊n/2⌋) + x` sets.
pub fn kleitman_pairs_value(n: usize, x: u64) -> Result<u64> {
    let mid = binomial(n as u64, n as u64 / 2);
    if mid + x > sigma(n, 2)? {
        return domain(format!("x = {x} exceeds the two middle layers"));
    }
    Ok(x * (1 + n as u64 / 2))
}

// ---- local search ----

fn random_family(n: usize, m: usize, rng: &mut impl Rng) -> Family {
    let mut codes: Vec<u32> = (0..1u32 << n).collect();
    codes.shuffle(rng);
    Family::from_codes(n, codes.into_iter().take(m)).expect("valid codes")
}

/// Recount from scratch after this many accepted moves.
pub const RECOUNT_EVERY: u64 = 1_000;

fn climb(config: &SearchConfig, restart: u64) -> (u128, Family) {
    let n = config.n;
    let k = config.k;
    let mut rng = rng_stream(config.seed, restart);
    let mut f = random_family(n, config.m, &mut rng);
    let mut value = count_k_chains_u128(&f, k).expect("fits");
    if config.restarts == 0 || config.m == 0 || config.m as u64 == 1u64 << n {
        return (value, f);
    }
    let mut members = f.codes();
    let mut outside: Vec<u32> = (0..1u32 << n).filter(|&c| !f.contains(c)).collect();
    let mut tabu: std::collections::VecDeque<u32> = std::collections::VecDeque::new();
    let mut accepted = 0u64;
    let mut best = (value, f.clone());
    for _ in 0..config.moves {
        let i = rng.gen_range(0..members.len());
        let j = rng.gen_range(0..outside.len());
        let (x, y) = (members[i], outside[j]);
        if tabu.contains(&y) {
            continue;
        }
        let lose = chains_through(&f, x, k);
        f.remove(x);
        let gain = chains_through(&f, y, k);
        if gain <= lose {
            f.insert(y);
            value = value - lose + gain;
            members[i] = y;
            outside[j] = x;
            tabu.push_back(x);
            if tabu.len() > config.tabu {
                tabu.pop_front();
            }
            accepted += 1;
            if accepted % RECOUNT_EVERY == 0 {
                let fresh = count_k_chains_u128(&f, k).expect("fits");
                assert_eq!(fresh, value, "incremental chain count drifted");
            }
            if value < best.0 {
                best = (value, f.clone());
            }
        } else {
            f.insert(x);
        }
    }
    best
}

fn local_search_inner(config: &SearchConfig) -> Result<(u128, Vec<Vec<u32>>, u64)> {
    let runs = config.restarts.max(1);
    let mut results: Vec<(u128, Family)> =
        with_pool(config.workers, || (0..runs).into_par_iter().map(|r| climb(config, r)).collect())?;
    // the centered family is always a candidate once climbing is enabled
    if config.restarts > 0 {
        let g = centered(config.n, config.m)?;
        results.push((centered_value(config.n, config.k, config.m)?, g));
    }
    let min = results.iter().map(|r| r.0).min().expect("at least one run");
    let mut wit: Vec<Vec<u32>> = results
        .iter()
        .filter(|r| r.0 == min)
        .map(|r| if config.n <= 7 { canonical_codes(config.n, &r.1.codes()) } else { r.1.codes() })
        .collect();
    if config.n <= 7 {
        sort_witnesses(config.n, &mut wit);
    } else {
        wit.sort();
        wit.dedup();
    }
    wit.truncate(config.witness_cap);
    Ok((min, wit, runs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::count_k_chains;

    #[test]
    fn small_minima() {
        let r = ck_min(&SearchConfig::new(4, 2, 7, SearchMode::Exhaustive)).unwrap();
        assert_eq!(r.min_value, 3);
        assert_eq!(r.centered_value, 3);
        assert!(r.conjecture_holds);
        let r = ck_min(&SearchConfig::new(2, 2, 3, SearchMode::Exhaustive)).unwrap();
        assert_eq!(r.min_value, 2);
        for m in 0..=10 {
            let r = ck_min(&SearchConfig::new(4, 3, m, SearchMode::Exhaustive)).unwrap();
            assert_eq!(r.min_value, 0);
        }
        assert!(ck_min(&SearchConfig::new(5, 2, 3, SearchMode::Exhaustive)).is_err());
        assert!(ck_min(&SearchConfig::new(6, 2, 3, SearchMode::ExhaustiveCanonical)).is_err());
    }

    #[test]
    fn witnesses_attain_the_minimum() {
        let r = ck_min(&SearchConfig::new(4, 2, 9, SearchMode::Exhaustive)).unwrap();
        assert!(!r.witnesses.is_empty());
        for w in &r.witnesses {
            let f = Family::from_codes(4, w.iter().copied()).unwrap();
            assert_eq!(count_k_chains_u128(&f, 2).unwrap(), r.min_value);
            assert_eq!(canonical_form(&f).unwrap(), f);
        }
    }

    #[test]
    fn orbit_and_plain_sweeps_agree() {
        for n in 1..=4 {
            for k in 1..=n + 2 {
                let a = orbit_sweep(n, k, 4).unwrap();
                let b = plain_sweep(n, k, 4).unwrap();
                for (x, y) in a.rows.iter().zip(&b.rows) {
                    assert_eq!(x.min, y.min, "n={n} k={k} m={}", x.m);
                    assert_eq!(x.witnesses, y.witnesses, "n={n} k={k} m={}", x.m);
                }
            }
        }
    }

    #[test]
    fn orbit_counts() {
        // families of subsets of [n] up to permutations of [n], by Burnside
        let expected = [2u64, 4, 12, 80, 3984];
        for (n, &e) in expected.iter().enumerate() {
            let s = orbit_sweep(n, 2, 1).unwrap();
            assert_eq!(s.orbits, e, "n={n}");
        }
    }

    #[test]
    fn canonical_form_is_an_orbit_invariant() {
        let f = Family::from_codes(5, [0, 3, 5, 12, 31]).unwrap();
        let c = canonical_form(&f).unwrap();
        for perm in all_permutations(5) {
            assert_eq!(canonical_form(&f.permuted(&perm)).unwrap(), c);
        }
        assert_eq!(count_k_chains(&c, 3).unwrap(), count_k_chains(&f, 3).unwrap());
    }

    #[test]
    fn conjecture_small() {
        for k in 2..=4 {
            let rep = verify_conjecture_range(4, k, false).unwrap();
            assert!(rep.counterexamples.is_empty());
            assert_eq!(rep.rows.len(), 17);
            assert_eq!(rep.chain_free_max as u64, sigma(4, k - 1).unwrap());
        }
    }

    #[test]
    fn pairs_value() {
        assert_eq!(kleitman_pairs_value(4, 1).unwrap(), 3);
        assert_eq!(kleitman_pairs_value(4, 0).unwrap(), 0);
        assert_eq!(kleitman_pairs_value(6, 2).unwrap(), 8);
        assert_eq!(count_k_chains(&centered(6, 22).unwrap(), 2).unwrap(), 8u32.into());
        assert!(kleitman_pairs_value(4, 5).is_err());
    }

    #[test]
    fn local_search_is_deterministic() {
        let mut cfg = SearchConfig::new(5, 2, 14, SearchMode::LocalSearch);
        cfg.restarts = 12;
        cfg.moves = 500;
        cfg.seed = 3;
        cfg.workers = 1;
        let a = local_search(&cfg).unwrap();
        cfg.workers = 3;
        let b = local_search(&cfg).unwrap();
        assert_eq!(a.min_value, b.min_value);
        assert_eq!(a.witnesses, b.witnesses);
        assert!(a.min_value >= a.centered_value);
        assert!(!a.exhaustive);
    }

    #[test]
    fn local_search_without_restarts_returns_initial_value() {
        let mut cfg = SearchConfig::new(5, 2, 14, SearchMode::LocalSearch);
        cfg.restarts = 0;
        cfg.seed = 11;
        let r = local_search(&cfg).unwrap();
        let mut rng = rng_stream(11, 0);
        let f = random_family(5, 14, &mut rng);
        assert_eq!(r.min_value, count_k_chains_u128(&f, 2).unwrap());
    }

    #[test]
    fn incremental_counts_survive_many_moves() {
        let mut cfg = SearchConfig::new(6, 3, 30, SearchMode::LocalSearch);
        cfg.restarts = 2;
        cfg.moves = 20_000;
        cfg.tabu = 0;
        // the recount assertion inside the climb fires on drift
        let r = local_search(&cfg).unwrap();
        assert!(r.min_value >= r.centered_value);
    }
}
