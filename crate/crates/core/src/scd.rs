//! Symmetric chain decompositions of `P(n)`.
//!
//! The canonical decomposition is the bracket construction: a set is read as
//! a word over positions `1..=n` with `)` at members and `(` at non-members.
//! Matched bracket pairs are frozen; the free positions always read `)))(((`
//! and the chain through a set toggles them from left to right.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::Chain;
use crate::error::{domain, resource, Error, Result};
use crate::lattice::{binomial, check_envelope, permute_code};

/// Generator behind every random draw in this crate, recorded in run
/// manifests.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3), seed_from_u64, stream = block index";

/// Monte Carlo draws per RNG stream. Fixed so that results do not depend on
/// the number of worker threads.
pub const MC_BLOCK: u64 = 1 << 14;

/// Deterministic generator for stream `stream` of master seed `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scd {
    n: usize,
    chains: Vec<Chain>,
    index_of: Vec<u32>,
}

impl Scd {
    /// Builds from chains, checking that they form a symmetric chain
    /// decomposition.
    pub fn from_chains(n: usize, chains: Vec<Chain>) -> Result<Self> {
        check_envelope(n)?;
        let mut index_of = vec![u32::MAX; 1usize << n];
        for (id, c) in chains.iter().enumerate() {
            if c.n() != n {
                return domain(format!("chain {id} lives in P({}), not P({n})", c.n()));
            }
            let lo = c.bottom().count_ones() as usize;
            let hi = c.top().count_ones() as usize;
            if lo + hi != n || c.steps().entries().iter().any(|&s| s != 1) {
                return domain(format!("chain {id} is not symmetric and skipless"));
            }
            for &x in c.sets() {
                if index_of[x as usize] != u32::MAX {
                    return domain(format!("set {x} lies on two chains"));
                }
                index_of[x as usize] = id as u32;
            }
        }
        if let Some(x) = index_of.iter().position(|&i| i == u32::MAX) {
            return domain(format!("set {x} is not covered"));
        }
        Ok(Scd { n, chains, index_of })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn chain_id_of(&self, code: u32) -> usize {
        self.index_of[code as usize] as usize
    }

    /// Image under the ground-set permutation `perm` (0-based).
    pub fn permuted(&self, perm: &[usize]) -> Scd {
        let chains: Vec<Chain> = self
            .chains
            .iter()
            .map(|c| Chain::from_raw(self.n, c.sets().iter().map(|&x| permute_code(x, perm)).collect()))
            .collect();
        let mut index_of = vec![0u32; self.index_of.len()];
        for (id, c) in chains.iter().enumerate() {
            for &x in c.sets() {
                index_of[x as usize] = id as u32;
            }
        }
        Scd { n: self.n, chains, index_of }
    }

    /// Checks partition, symmetry, skiplessness and the chain count.
    pub fn validate(&self) -> Result<()> {
        let rebuilt = Scd::from_chains(self.n, self.chains.clone())?;
        let expected = binomial(self.n as u64, self.n as u64 / 2) as usize;
        if rebuilt.chains.len() != expected {
            return domain(format!("{} chains, expected {expected}", rebuilt.chains.len()));
        }
        Ok(())
    }

    pub fn to_doc(&self) -> ScdDoc {
        ScdDoc {
            n: self.n,
            chains: self.chains.iter().map(|c| c.sets().to_vec()).collect(),
        }
    }
}

/// JSON form: `{"n": 4, "chains": [[0, 1, 3, 7, 15], ...]}` with raw codes.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScdDoc {
    pub n: usize,
    pub chains: Vec<Vec<u32>>,
}

pub fn parse_scd_json(text: &str) -> Result<Scd> {
    let doc: ScdDoc = serde_json::from_str(text).map_err(crate::io::json_error)?;
    doc.to_scd()
}

impl ScdDoc {
    pub fn to_scd(&self) -> Result<Scd> {
        let chains = self
            .chains
            .iter()
            .map(|c| Chain::new(self.n, c.clone()))
            .collect::<Result<Vec<_>>>()?;
        Scd::from_chains(self.n, chains)
    }
}

/// Bottom of the canonical chain through `code`: the set minus its
/// unmatched members.
pub fn dbtk_bottom(n: usize, code: u32) -> u32 {
    let mut open = 0u32; // unmatched '(' so far
    let mut bottom = code;
    for i in 0..n {
        if code >> i & 1 == 1 {
            if open > 0 {
                open -= 1;
            } else {
                bottom &= !(1 << i);
            }
        } else {
            open += 1;
        }
    }
    bottom
}

fn free_positions(n: usize, code: u32) -> Vec<u32> {
    // unmatched members, then the unmatched non-members
    let mut stack: Vec<u32> = Vec::new();
    let mut free_members = Vec::new();
    for i in 0..n as u32 {
        if code >> i & 1 == 1 {
            if stack.pop().is_none() {
                free_members.push(i);
            }
        } else {
            stack.push(i);
        }
    }
    free_members.extend(stack);
    free_members
}

/// The canonical chain containing `code`, without building the whole
/// decomposition.
pub fn chain_through(n: usize, code: u32) -> Result<Chain> {
    check_envelope(n)?;
    if u64::from(code) >= 1u64 << n {
        return domain(format!("code {code} is not a subset of [{n}]"));
    }
    let free = free_positions(n, code);
    let mut set = dbtk_bottom(n, code);
    let mut sets = Vec::with_capacity(free.len() + 1);
    sets.push(set);
    for p in free {
        set |= 1 << p;
        sets.push(set);
    }
    Ok(Chain::from_raw(n, sets))
}

/// The canonical bracket-matching decomposition of `P(n)`.
pub fn dbtk_scd(n: usize) -> Result<Scd> {
    if n == 0 {
        return domain("dbtk_scd: n must be >= 1");
    }
    check_envelope(n)?;
    let mut chains = Vec::with_capacity(binomial(n as u64, n as u64 / 2) as usize);
    let mut index_of = vec![0u32; 1usize << n];
    for code in 0..(1u32 << n) {
        if dbtk_bottom(n, code) == code {
            let c = chain_through(n, code)?;
            for &x in c.sets() {
                index_of[x as usize] = chains.len() as u32;
            }
            chains.push(c);
        }
    }
    Ok(Scd { n, chains, index_of })
}

/// Whether a single chain of `scd` contains every set of `c`.
pub fn contains_chain(scd: &Scd, c: &Chain) -> Result<bool> {
    if scd.n != c.n() {
        return domain(format!("decomposition of P({}) vs chain in P({})", scd.n, c.n()));
    }
    let id = scd.chain_id_of(c.bottom());
    Ok(c.sets().iter().all(|&x| scd.chain_id_of(x) == id))
}

pub fn random_permutation(n: usize, rng: &mut impl rand::Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// The canonical decomposition relabeled by a uniformly random permutation
/// of the ground set.
pub fn sample_scd(n: usize, seed: u64) -> Result<Scd> {
    let base = dbtk_scd(n)?;
    let mut rng = rng_stream(seed, 0);
    Ok(base.permuted(&random_permutation(n, &mut rng)))
}

/// Every symmetric chain decomposition of `P(n)`, `n <= 4`.
///
/// Backtracking: the least uncovered set in (size, code) order must start a
/// chain, which is then grown one element at a time through uncovered sets
/// up to the mirror level.
pub fn enumerate_all_scds(n: usize) -> Result<Vec<Scd>> {
    if n > 4 {
        return resource(format!("enumerate_all_scds: n = {n} > 4"));
    }
    let mut order: Vec<u32> = (0..1u32 << n).collect();
    order.sort_by_key(|&c| (c.count_ones(), c));
    let mut out = Vec::new();
    let mut covered = vec![false; 1usize << n];
    let mut chains = Vec::new();
    fill(n, &order, &mut covered, &mut chains, &mut out);
    Ok(out)
}

fn fill(n: usize, order: &[u32], covered: &mut [bool], chains: &mut Vec<Chain>, out: &mut Vec<Scd>) {
    let Some(&start) = order.iter().find(|&&c| !covered[c as usize]) else {
        out.push(Scd::from_chains(n, chains.clone()).expect("backtracking builds valid SCDs"));
        return;
    };
    let s = start.count_ones() as usize;
    if 2 * s > n {
        return;
    }
    covered[start as usize] = true;
    grow(n, order, covered, chains, out, vec![start], n - s);
    covered[start as usize] = false;
}

fn grow(
    n: usize,
    order: &[u32],
    covered: &mut [bool],
    chains: &mut Vec<Chain>,
    out: &mut Vec<Scd>,
    current: Vec<u32>,
    top_level: usize,
) {
    let last = *current.last().unwrap();
    if last.count_ones() as usize == top_level {
        chains.push(Chain::from_raw(n, current));
        fill(n, order, covered, chains, out);
        chains.pop();
        return;
    }
    for i in 0..n {
        let next = last | 1 << i;
        if next == last || covered[next as usize] {
            continue;
        }
        covered[next as usize] = true;
        let mut extended = current.clone();
        extended.push(next);
        grow(n, order, covered, chains, out, extended, top_level);
        covered[next as usize] = false;
    }
}

/// Exact fraction of all decompositions of `P(n)` (`n <= 4`) containing `c`.
pub fn exact_containment_fraction(all: &[Scd], c: &Chain) -> Result<BigRational> {
    if all.is_empty() {
        return domain("no decompositions given");
    }
    let mut hits = 0usize;
    for scd in all {
        if contains_chain(scd, c)? {
            hits += 1;
        }
    }
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(all.len())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub hits: u64,
    pub trials: u64,
    #[serde(serialize_with = "ratio_as_string")]
    pub frequency: Ratio<u64>,
    pub stderr: f64,
}

fn ratio_as_string<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

impl McEstimate {
    pub fn frequency_f64(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }
}

/// Empirical frequency with which a randomly relabeled canonical
/// decomposition contains `c`, with the binomial standard error.
///
/// Draw `t` uses stream `t / MC_BLOCK` of `seed`, so the estimate is the
/// same for every `workers` value (`0` uses the global rayon pool).
pub fn mc_weight(c: &Chain, trials: u64, seed: u64, workers: usize) -> Result<McEstimate> {
    if trials == 0 {
        return domain("mc_weight: trials must be >= 1");
    }
    let n = c.n();
    check_envelope(n)?;
    let blocks = trials.div_ceil(MC_BLOCK);
    let run_block = |b: u64| -> u64 {
        let mut rng = rng_stream(seed, b);
        let count = MC_BLOCK.min(trials - b * MC_BLOCK);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut hits = 0;
        for _ in 0..count {
            perm.shuffle(&mut rng);
            // π(X) contains c iff X contains π⁻¹(c); π⁻¹ is uniform too
            let bottom = dbtk_bottom(n, permute_code(c.bottom(), &perm));
            if c.sets()[1..]
                .iter()
                .all(|&x| dbtk_bottom(n, permute_code(x, &perm)) == bottom)
            {
                hits += 1;
            }
        }
        hits
    };
    let hits: u64 = if workers == 0 {
        (0..blocks).into_par_iter().map(run_block).sum()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Resource(e.to_string()))?
            .install(|| (0..blocks).into_par_iter().map(run_block).sum())
    };
    let p = hits as f64 / trials as f64;
    Ok(McEstimate {
        hits,
        trials,
        frequency: Ratio::new(hits, trials),
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::weight;
    use crate::lattice::SubsetCode;

    #[test]
    fn small_constructions() {
        let s1 = dbtk_scd(1).unwrap();
        assert_eq!(s1.chains().len(), 1);
        assert_eq!(s1.chains()[0].sets(), &[0, 1]);

        let s2 = dbtk_scd(2).unwrap();
        s2.validate().unwrap();
        let mut lens: Vec<usize> = s2.chains().iter().map(Chain::len).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![1, 3]);

        let s4 = dbtk_scd(4).unwrap();
        s4.validate().unwrap();
        let mut lens: Vec<usize> = s4.chains().iter().map(Chain::len).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(lens, vec![5, 3, 3, 3, 1, 1]);
        assert!(dbtk_scd(0).is_err());
    }

    #[test]
    fn start_level_profile() {
        for n in 1..=14usize {
            let scd = dbtk_scd(n).unwrap();
            scd.validate().unwrap();
            for s in 0..=n / 2 {
                let starting = scd
                    .chains()
                    .iter()
                    .filter(|c| c.bottom().count_ones() as usize == s)
                    .count() as u64;
                let below = if s == 0 { 0 } else { binomial(n as u64, s as u64 - 1) };
                assert_eq!(starting, binomial(n as u64, s as u64) - below);
            }
        }
    }

    #[test]
    fn chain_through_agrees_with_construction() {
        let n = 12;
        let scd = dbtk_scd(n).unwrap();
        for code in 0..1u32 << n {
            let c = chain_through(n, code).unwrap();
            assert!(c.sets().contains(&code));
            assert_eq!(&c, &scd.chains()[scd.chain_id_of(code)]);
        }
        let full = chain_through(5, 0).unwrap();
        assert_eq!(full.len(), 6);
        assert_eq!(full.top(), 31);
        let c = chain_through(4, SubsetCode::from_elements(4, &[1, 2]).unwrap().bits()).unwrap();
        assert!(c.sets().contains(&3));
    }

    #[test]
    fn containment_examples() {
        let scd = dbtk_scd(4).unwrap();
        for x in 0..16 {
            assert!(contains_chain(&scd, &Chain::new(4, vec![x]).unwrap()).unwrap());
        }
        assert!(contains_chain(&scd, &Chain::new(4, vec![0, 15]).unwrap()).unwrap());
        // {1} sits on the full chain, {1,3} on the chain starting at {3}
        let split = Chain::new(4, vec![0b0001, 0b0101]).unwrap();
        assert_ne!(scd.chain_id_of(0b0001), scd.chain_id_of(0b0101));
        assert!(!contains_chain(&scd, &split).unwrap());
        assert!(contains_chain(&scd, &Chain::new(3, vec![0]).unwrap()).is_err());
    }

    #[test]
    fn sampled_decompositions_are_valid() {
        let base = dbtk_scd(8).unwrap();
        let identity: Vec<usize> = (0..8).collect();
        assert_eq!(base.permuted(&identity), base);
        for seed in 0..1000 {
            let s = sample_scd(8, seed).unwrap();
            s.validate().unwrap();
            assert!(contains_chain(&s, &Chain::new(8, vec![0, 255]).unwrap()).unwrap());
        }
    }

    #[test]
    fn all_scds_small() {
        assert_eq!(enumerate_all_scds(1).unwrap().len(), 1);
        assert_eq!(enumerate_all_scds(2).unwrap().len(), 2);
        assert!(enumerate_all_scds(5).is_err());
        let all4 = enumerate_all_scds(4).unwrap();
        for s in &all4 {
            s.validate().unwrap();
        }
        // distinct
        let mut keys: Vec<Vec<Vec<u32>>> = all4.iter().map(|s| s.to_doc().chains).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), all4.len());
        assert_eq!(all4.len(), ALL_SCDS_OF_P4);
    }

    // frozen; an independent exact-cover count gives the same value
    const ALL_SCDS_OF_P4: usize = 240;

    #[test]
    fn exact_oracle_weight_example() {
        let all = enumerate_all_scds(4).unwrap();
        let c = Chain::new(4, vec![0b0011, 0b0111]).unwrap();
        let frac = exact_containment_fraction(&all, &c).unwrap();
        assert_eq!(frac, weight(&c).into_inner());
        assert_eq!(frac, BigRational::new(1.into(), 3.into()));
    }

    #[test]
    fn monte_carlo_basics() {
        let top = Chain::new(6, vec![0, 63]).unwrap();
        let est = mc_weight(&top, 5000, 1, 0).unwrap();
        assert_eq!(est.hits, 5000);
        assert_eq!(est.stderr, 0.0);
        assert!(mc_weight(&top, 0, 1, 0).is_err());

        let c = Chain::new(4, vec![0b0011, 0b0111]).unwrap();
        let est = mc_weight(&c, 100_000, 7, 0).unwrap();
        assert!((est.frequency_f64() - 1.0 / 3.0).abs() <= 4.0 * est.stderr);
    }

    #[test]
    fn monte_carlo_independent_of_workers() {
        let c = Chain::new(7, vec![0b1, 0b111, 0b1111]).unwrap();
        let a = mc_weight(&c, 50_000, 99, 1).unwrap();
        let b = mc_weight(&c, 50_000, 99, 3).unwrap();
        let d = mc_weight(&c, 50_000, 99, 0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, d);
    }

    #[test]
    fn json_round_trip() {
        let scd = dbtk_scd(3).unwrap();
        let text = serde_json::to_string(&scd.to_doc()).unwrap();
        let back: ScdDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_scd().unwrap(), scd);
    }
}
