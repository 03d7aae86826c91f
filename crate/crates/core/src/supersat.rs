//! Weighted supersaturation and the compression calculus on measured
//! subhypergraphs of the k-chain hypergraph over the middle layers.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chains::{
    count_k_chains, enumerate_phi_star, weight, weighted_sum, weighted_sum_exact, Chain, StepVector,
};
use crate::error::{domain, Error, Result};
use crate::io::{json_error, FamilyDoc};
use crate::lattice::{
    binomial, centered, centered_order, middle_layers, sigma, threshold_layers, Family,
};

/// The k-uniform hypergraph whose vertices are the sets of the `d` middle
/// layers of `P(n)` and whose edges are the k-chains among them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainHypergraph {
    pub n: usize,
    pub d: usize,
    pub k: usize,
}

impl ChainHypergraph {
    pub fn new(n: usize, d: usize, k: usize) -> Result<Self> {
        if d == 0 || d > n + 1 {
            return domain(format!("d = {d} outside [1, {}]", n + 1));
        }
        if k == 0 {
            return domain("k must be >= 1");
        }
        crate::lattice::check_envelope(n)?;
        Ok(ChainHypergraph { n, d, k })
    }

    /// Inclusive size range of the vertex sets.
    pub fn levels(&self) -> (usize, usize) {
        ((self.n + 2 - self.d) / 2, (self.n + self.d) / 2)
    }

    pub fn vertices(&self) -> Family {
        middle_layers(self.n, self.d).expect("validated")
    }

    pub fn has_vertex(&self, code: u32) -> bool {
        let (lo, hi) = self.levels();
        let s = code.count_ones() as usize;
        lo <= s && s <= hi
    }

    pub fn is_edge(&self, c: &Chain) -> bool {
        c.n() == self.n && c.len() == self.k && c.sets().iter().all(|&x| self.has_vertex(x))
    }
}

/// Measure of chains not listed explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefaultMeasure {
    Zero,
    /// 1 on the edges inside the family, 0 elsewhere.
    Family(Family),
}

/// A function from the edges of a [`ChainHypergraph`] to `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasuredSubhypergraph {
    host: ChainHypergraph,
    default: DefaultMeasure,
    explicit: BTreeMap<Chain, BigRational>,
}

impl MeasuredSubhypergraph {
    pub fn zero(host: ChainHypergraph) -> Self {
        MeasuredSubhypergraph { host, default: DefaultMeasure::Zero, explicit: BTreeMap::new() }
    }

    /// Characteristic function of `f`: every k-chain of `f` inside the
    /// middle layers gets measure 1.
    pub fn indicator(host: ChainHypergraph, f: &Family) -> Result<Self> {
        if f.n() != host.n {
            return domain(format!("family over [{}] for host over [{}]", f.n(), host.n));
        }
        let inside = f.intersection(&host.vertices());
        Ok(MeasuredSubhypergraph {
            host,
            default: DefaultMeasure::Family(inside),
            explicit: BTreeMap::new(),
        })
    }

    pub fn host(&self) -> ChainHypergraph {
        self.host
    }

    pub fn default_measure(&self) -> &DefaultMeasure {
        &self.default
    }

    pub fn explicit(&self) -> &BTreeMap<Chain, BigRational> {
        &self.explicit
    }

    fn base(&self, c: &Chain) -> BigRational {
        match &self.default {
            DefaultMeasure::Family(f) if self.host.is_edge(c) && c.inside(f) => BigRational::one(),
            _ => BigRational::zero(),
        }
    }

    pub fn measure(&self, c: &Chain) -> BigRational {
        match self.explicit.get(c) {
            Some(v) => v.clone(),
            None => self.base(c),
        }
    }

    /// Overrides the measure of one edge.
    pub fn set(&mut self, c: Chain, value: BigRational) -> Result<()> {
        if !self.host.is_edge(&c) {
            return domain(format!("{c:?} is not an edge of the host"));
        }
        if value < BigRational::zero() || value > BigRational::one() {
            return domain(format!("measure {value} outside [0, 1]"));
        }
        if value == self.base(&c) {
            self.explicit.remove(&c);
        } else {
            self.explicit.insert(c, value);
        }
        Ok(())
    }

    /// `|f|`, the total measure.
    pub fn size(&self) -> BigRational {
        let mut total = match &self.default {
            DefaultMeasure::Zero => BigRational::zero(),
            DefaultMeasure::Family(f) => BigRational::from_integer(BigInt::from(
                count_k_chains(f, self.host.k).expect("k >= 1"),
            )),
        };
        for (c, v) in &self.explicit {
            total += v - self.base(c);
        }
        total
    }

    /// `Σ w(e) f(e)` over the edges in `Φ(within, a)`.
    pub fn weighted_phi_sum(&self, within: &Family, a: &StepVector) -> BigRational {
        self.weighted_sum_by(within, a, false)
    }

    /// `Σ w(e) f(e)` over the edges in `Φ*(within, a)`.
    pub fn weighted_phi_star_sum(&self, within: &Family, a: &StepVector) -> BigRational {
        self.weighted_sum_by(within, a, true)
    }

    fn weighted_sum_by(&self, within: &Family, a: &StepVector, exact: bool) -> BigRational {
        if a.chain_len() != self.host.k {
            return BigRational::zero();
        }
        let mut total = match &self.default {
            DefaultMeasure::Zero => BigRational::zero(),
            DefaultMeasure::Family(f) => {
                let g = f.intersection(within);
                if exact {
                    weighted_sum_exact(&g, a)
                } else {
                    weighted_sum(&g, a)
                }
            }
        };
        for (c, v) in &self.explicit {
            let steps = c.steps();
            let hit = if exact { steps == *a } else { steps.dominates(a) };
            if hit && c.inside(within) {
                total += weight(c).into_inner() * (v - self.base(c));
            }
        }
        total
    }

    /// `Σ f(e)` over the edges in `Φ*(within, a)`.
    pub fn class_total(&self, within: &Family, a: &StepVector) -> BigRational {
        let verts = within.intersection(&self.host.vertices());
        enumerate_phi_star(&verts, a)
            .filter(|c| c.len() == self.host.k)
            .map(|c| self.measure(&c))
            .sum()
    }
}

/// The order `<*` on `Φ*(context, a)`.
///
/// Every set of the context family gets its position `ρ` in the centered
/// order of the context. Chains are compared by their lists of `ρ` values
/// sorted in decreasing order, lexicographically; so the chain with the
/// smaller `ρ`-maximal element comes first. Chains inside the first `Q`
/// sets of the centered order thus form a prefix, and a chain farther
/// from the middle always comes later.
#[derive(Clone, Debug)]
pub struct ChainOrder {
    context: Family,
    steps: StepVector,
    rank: Vec<u32>,
}

impl ChainOrder {
    pub fn new(context: &Family, steps: &StepVector) -> Self {
        let mut rank = vec![u32::MAX; 1usize << context.n()];
        for (i, c) in centered_order(context).into_iter().enumerate() {
            rank[c as usize] = i as u32;
        }
        ChainOrder { context: context.clone(), steps: steps.clone(), rank }
    }

    pub fn context(&self) -> &Family {
        &self.context
    }

    pub fn steps(&self) -> &StepVector {
        &self.steps
    }

    fn check(&self, c: &Chain) -> Result<()> {
        if c.n() != self.context.n() || c.steps() != self.steps || !c.inside(&self.context) {
            return domain(format!("{c:?} is not in the ordered chain class"));
        }
        Ok(())
    }

    /// Sort key; chains compare as their keys do.
    pub fn key(&self, c: &Chain) -> Vec<u32> {
        let mut k: Vec<u32> = c.sets().iter().map(|&x| self.rank[x as usize]).collect();
        k.sort_unstable_by(|a, b| b.cmp(a));
        k
    }

    pub fn compare(&self, a: &Chain, b: &Chain) -> Result<Ordering> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.key(a).cmp(&self.key(b)))
    }

    /// All of `Φ*(context, a)`, sorted.
    pub fn sorted_class(&self) -> Vec<Chain> {
        let mut chains: Vec<Chain> = enumerate_phi_star(&self.context, &self.steps).collect();
        chains.sort_by_cached_key(|c| self.key(c));
        chains
    }
}

/// `A <* B` in the order on `Φ*(context, a)`.
pub fn chain_less(a: &Chain, b: &Chain, order: &ChainOrder) -> Result<bool> {
    Ok(order.compare(a, b)? == Ordering::Less)
}

fn class_order(f: &MeasuredSubhypergraph, within: &Family, a: &StepVector) -> Result<ChainOrder> {
    if a.chain_len() != f.host.k {
        return domain(format!("step vector {a} does not describe {}-chains", f.host.k));
    }
    if within.n() != f.host.n {
        return domain("family and host live over different ground sets");
    }
    Ok(ChainOrder::new(&within.intersection(&f.host.vertices()), a))
}

/// `c[f, F, a]`: moves the measure of `f` on `Φ*(F, a)` onto the earliest
/// chains in `<*`, keeping the total. Other edges are untouched.
pub fn compress(
    f: &MeasuredSubhypergraph,
    within: &Family,
    a: &StepVector,
) -> Result<MeasuredSubhypergraph> {
    let order = class_order(f, within, a)?;
    let chains = order.sorted_class();
    let mut remaining: BigRational = chains.iter().map(|c| f.measure(c)).sum();
    let mut out = f.clone();
    for c in chains {
        let v = if remaining >= BigRational::one() {
            BigRational::one()
        } else {
            remaining.clone()
        };
        remaining -= &v;
        out.set(c, v)?;
    }
    Ok(out)
}

/// Whether the measures on `Φ*(F, a)`, read in `<*` order, look like
/// `1, ..., 1, x, 0, ..., 0`.
pub fn is_compressed(f: &MeasuredSubhypergraph, within: &Family, a: &StepVector) -> Result<bool> {
    let order = class_order(f, within, a)?;
    let mut seen_partial = false;
    for c in order.sorted_class() {
        let v = f.measure(&c);
        if seen_partial {
            if !v.is_zero() {
                return Ok(false);
            }
        } else if !v.is_one() {
            seen_partial = true;
        }
    }
    Ok(true)
}

/// Exact step vectors with a possibly non-empty class inside `within`.
pub fn step_classes(within: &Family, k: usize) -> Vec<StepVector> {
    let profile = within.level_profile();
    let lo = profile.iter().position(|&c| c > 0);
    let hi = profile.iter().rposition(|&c| c > 0);
    match (lo, hi) {
        (Some(lo), Some(hi)) => StepVector::all_bounded(k.saturating_sub(1), (hi - lo) as u32),
        _ => Vec::new(),
    }
}

/// Compressed for every step vector.
pub fn is_completely_compressed(f: &MeasuredSubhypergraph, within: &Family) -> Result<bool> {
    for a in step_classes(within, f.host.k) {
        if !is_compressed(f, within, &a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compresses every class `Φ*(P′, a)`; they are disjoint, so one pass
/// suffices.
pub fn fully_compress(f: &MeasuredSubhypergraph, within: &Family) -> Result<MeasuredSubhypergraph> {
    let mut out = f.clone();
    for a in step_classes(within, f.host.k) {
        out = compress(&out, within, &a)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessVerdict {
    pub good: bool,
    /// First violated step vector, if any.
    pub witness: Option<StepVector>,
    pub constraints_checked: usize,
}

/// Q-goodness: `Σ_{Φ(P′,a)} w f >= W_a(G_Q)` for every step vector `a`,
/// with `G_Q` the centered family of size `Q` in `P(n)`.
pub fn is_q_good(f: &MeasuredSubhypergraph, q: usize, within: &Family) -> Result<GoodnessVerdict> {
    let n = f.host.n;
    if q as u64 > 1u64 << n {
        return domain(format!("Q = {q} exceeds 2^{n}"));
    }
    let g = centered(n, q)?;
    let verts = within.intersection(&f.host.vertices());
    let classes = step_classes(&Family::full(n)?, f.host.k);
    let mut checked = 0;
    for a in classes {
        checked += 1;
        let lhs = f.weighted_phi_sum(&verts, &a);
        let rhs = weighted_sum(&g, &a);
        if lhs < rhs {
            return Ok(GoodnessVerdict { good: false, witness: Some(a), constraints_checked: checked });
        }
    }
    Ok(GoodnessVerdict { good: true, witness: None, constraints_checked: checked })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupersatCheck {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub ok: bool,
}

/// `W_a(F)` against `W_a(G_{|F|})`.
pub fn verify_supersat(f: &Family, a: &StepVector) -> Result<SupersatCheck> {
    let lhs = weighted_sum(f, a);
    let rhs = weighted_sum(&centered(f.n(), f.len())?, a);
    let ok = lhs >= rhs;
    Ok(SupersatCheck { lhs, rhs, ok })
}

/// Default number of middle layers, `min(n + 1, ⌊10 k √(n ln n)⌋)`, at
/// least 1.
pub fn d_param(n: usize, k: usize) -> usize {
    let nf = n as f64;
    let raw = (10.0 * k as f64 * (nf * nf.ln()).sqrt()).floor();
    let raw = if raw.is_finite() && raw > 0.0 { raw as usize } else { 1 };
    raw.clamp(1, n + 1)
}

#[derive(Clone, Debug)]
pub struct HatF {
    pub measure: MeasuredSubhypergraph,
    /// `C ⊆ P_{n, r-1}` and `|C| <= C(n, ⌊(n + r)/2⌋)`, where `r` is the
    /// number of layers of `G_M`.
    pub in_regime: bool,
}

/// The greedy measured subhypergraph avoiding `forbidden`: inside
/// `P′ = P_{n,d} \ C`, for every exact step vector it matches the weighted
/// total of the centered family `G_M` on the same class, filling edges in
/// `<*` order (which is decreasing weight) and leaving at most one
/// fractional edge per class.
pub fn hat_f(forbidden: &Family, m: usize, n: usize, d: usize, k: usize) -> Result<HatF> {
    let host = ChainHypergraph::new(n, d, k)?;
    if forbidden.n() != n {
        return domain("forbidden family lives over a different ground set");
    }
    let verts = host.vertices();
    if !forbidden.is_subset_of(&verts) {
        return domain("forbidden family is not inside the middle layers");
    }
    if m as u64 > 1u64 << n {
        return domain(format!("M = {m} exceeds 2^{n}"));
    }
    let r = if m == 0 { 0 } else { threshold_layers(n, m as u64)? };
    let in_regime = r >= 2
        && forbidden.is_subset_of(&middle_layers(n, r - 1)?)
        && forbidden.len() as u64 <= binomial(n as u64, ((n + r) / 2) as u64);

    let allowed = verts.difference(forbidden);
    let target_family = centered(n, m)?.intersection(&verts);
    let mut out = MeasuredSubhypergraph::zero(host);
    for a in step_classes(&verts, k) {
        let mut remaining = weighted_sum_exact(&target_family, &a);
        if remaining.is_zero() {
            continue;
        }
        let order = ChainOrder::new(&allowed, &a);
        for c in order.sorted_class() {
            if remaining.is_zero() {
                break;
            }
            let w = weight(&c).into_inner();
            let v = if remaining >= w { BigRational::one() } else { &remaining / &w };
            remaining -= &w * &v;
            out.set(c, v)?;
        }
        if !remaining.is_zero() {
            return Err(Error::Infeasible(format!(
                "class {a}: {remaining} of weighted measure left after using every chain outside C"
            )));
        }
    }
    Ok(HatF { measure: out, in_regime })
}

/// The lower bound `c_k(G_M) + s / (k n)` derived for families of size `M`
/// inside `P_{n,d}` that miss the sets of `C ⊆ P_{n, r-2}`, where `s` is the
/// total degree of `C` in the k-chain hypergraph on `P_{n, r-2}`.
///
/// Returned as a diagnostic; the bound comes from a proof sketch.
pub fn missing_sets_bound(forbidden: &Family, m: usize, k: usize) -> Result<BigRational> {
    let n = forbidden.n();
    let r = threshold_layers(n, m as u64)?;
    if r < 3 {
        return domain(format!("M = {m} gives r = {r}; need r >= 3"));
    }
    let inner = middle_layers(n, r - 2)?;
    if !forbidden.is_subset_of(&inner) {
        return domain("forbidden family is not inside P_{n, r-2}");
    }
    let s: u128 = forbidden
        .iter()
        .map(|x| crate::chains::chains_through(&inner, x, k))
        .sum();
    let base = count_k_chains(&centered(n, m)?, k)?;
    Ok(BigRational::from_integer(BigInt::from(base))
        + BigRational::new(BigInt::from(s), BigInt::from(k * n)))
}

/// Upper end of the range where `G_M` has no k-chain.
pub fn chain_free_limit(n: usize, k: usize) -> Result<u64> {
    sigma(n, k - 1)
}

// ---- JSON ----

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefaultDoc {
    Zero,
    Family(FamilyDoc),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub chain: Vec<u32>,
    pub measure: String,
}

/// `{"n":…,"d":…,"k":…,"default":"zero"|{"family":…},"edges":[…]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MshDoc {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub default: DefaultDoc,
    pub edges: Vec<EdgeDoc>,
}

pub fn msh_to_json(f: &MeasuredSubhypergraph) -> String {
    let doc = MshDoc {
        n: f.host.n,
        d: f.host.d,
        k: f.host.k,
        default: match &f.default {
            DefaultMeasure::Zero => DefaultDoc::Zero,
            DefaultMeasure::Family(g) => DefaultDoc::Family(FamilyDoc::from_family(g)),
        },
        edges: f
            .explicit
            .iter()
            .map(|(c, v)| EdgeDoc { chain: c.sets().to_vec(), measure: format_ratio(v) })
            .collect(),
    };
    serde_json::to_string(&doc).expect("plain data")
}

pub fn parse_msh_json(text: &str) -> Result<MeasuredSubhypergraph> {
    let doc: MshDoc = serde_json::from_str(text).map_err(json_error)?;
    let host = ChainHypergraph::new(doc.n, doc.d, doc.k)?;
    let mut f = match doc.default {
        DefaultDoc::Zero => MeasuredSubhypergraph::zero(host),
        DefaultDoc::Family(g) => MeasuredSubhypergraph::indicator(host, &g.to_family()?)?,
    };
    for e in doc.edges {
        let c = Chain::new(doc.n, e.chain)?;
        let v = parse_ratio(&e.measure)?;
        f.set(c, v)?;
    }
    Ok(f)
}

pub fn format_ratio(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn parse_ratio(text: &str) -> Result<BigRational> {
    let parsed: BigRational = text
        .trim()
        .parse()
        .map_err(|_| Error::Domain(format!("'{text}' is not a rational p/q")))?;
    Ok(parsed)
}

/// Chains of `F` with exact steps `a`, as a count, for reporting.
pub fn class_size(within: &Family, a: &StepVector) -> BigUint {
    BigUint::from(enumerate_phi_star(within, a).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SubsetCode;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn set(n: usize, el: &[usize]) -> u32 {
        SubsetCode::from_elements(n, el).unwrap().bits()
    }

    fn layers(n: usize, ls: &[usize]) -> Family {
        let mut f = Family::empty(n).unwrap();
        for &s in ls {
            f = f.union(&Family::layer(n, s).unwrap());
        }
        f
    }

    #[test]
    fn host_levels() {
        let h = ChainHypergraph::new(4, 2, 2).unwrap();
        assert_eq!(h.levels(), (2, 3));
        assert_eq!(ChainHypergraph::new(4, 1, 2).unwrap().levels(), (2, 2));
        assert_eq!(ChainHypergraph::new(5, 6, 2).unwrap().levels(), (0, 5));
        assert!(ChainHypergraph::new(4, 0, 2).is_err());
        assert!(ChainHypergraph::new(4, 6, 2).is_err());
    }

    #[test]
    fn size_examples() {
        let host = ChainHypergraph::new(5, 6, 3).unwrap();
        let f = Family::from_codes(5, (0..32u32).filter(|c| c % 3 != 0)).unwrap();
        let ind = MeasuredSubhypergraph::indicator(host, &f).unwrap();
        assert_eq!(
            ind.size(),
            BigRational::from_integer(count_k_chains(&f, 3).unwrap().into())
        );
        let mut z = MeasuredSubhypergraph::zero(host);
        assert!(z.size().is_zero());
        z.set(Chain::new(5, vec![0, 1, 3]).unwrap(), r(1, 2)).unwrap();
        assert_eq!(z.size(), r(1, 2));
        assert!(z.set(Chain::new(5, vec![0, 1]).unwrap(), r(1, 2)).is_err());
        assert!(z.set(Chain::new(5, vec![0, 1, 3]).unwrap(), r(3, 2)).is_err());
    }

    #[test]
    fn order_prefix_property() {
        for n in 2..=6usize {
            let p = Family::full(n).unwrap();
            for k in 2..=3 {
                for a in step_classes(&p, k) {
                    let order = ChainOrder::new(&p, &a);
                    let sorted = order.sorted_class();
                    for q in 0..=(1usize << n) {
                        let g = centered(n, q).unwrap();
                        let inside = sorted.iter().take_while(|c| c.inside(&g)).count();
                        let total = sorted.iter().filter(|c| c.inside(&g)).count();
                        assert_eq!(inside, total, "n={n} a={a} q={q}");
                    }
                    for w in sorted.windows(2) {
                        assert!(w[0].twice_distance() <= w[1].twice_distance());
                        assert!(chain_less(&w[0], &w[1], &order).unwrap());
                        assert!(!chain_less(&w[1], &w[0], &order).unwrap());
                        assert!(!chain_less(&w[0], &w[0], &order).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn order_rejects_foreign_chains() {
        let p = Family::full(4).unwrap();
        let order = ChainOrder::new(&p, &StepVector::ones(2));
        let good = Chain::new(4, vec![3, 7]).unwrap();
        let wrong_steps = Chain::new(4, vec![3, 15]).unwrap();
        assert!(order.compare(&good, &wrong_steps).is_err());
        let middle = Chain::new(4, vec![set(4, &[1, 2]), set(4, &[1, 2, 3])]).unwrap();
        let off = Chain::new(4, vec![set(4, &[1, 2, 3]), 15]).unwrap();
        assert!(chain_less(&middle, &off, &order).unwrap());
    }

    #[test]
    fn centered_indicator_is_good_and_compressed() {
        let n = 5;
        let p = Family::full(n).unwrap();
        for k in 2..=3 {
            let host = ChainHypergraph::new(n, n + 1, k).unwrap();
            for q in 0..=32 {
                let f = MeasuredSubhypergraph::indicator(host, &centered(n, q).unwrap()).unwrap();
                assert!(is_q_good(&f, q, &p).unwrap().good);
                assert!(is_completely_compressed(&f, &p).unwrap());
                assert_eq!(fully_compress(&f, &p).unwrap().size(), f.size());
            }
        }
    }

    #[test]
    fn zero_function_is_not_good_above_limit() {
        let host = ChainHypergraph::new(4, 5, 2).unwrap();
        let z = MeasuredSubhypergraph::zero(host);
        let p = Family::full(4).unwrap();
        let limit = chain_free_limit(4, 2).unwrap() as usize;
        assert!(is_q_good(&z, limit, &p).unwrap().good);
        let v = is_q_good(&z, limit + 1, &p).unwrap();
        assert!(!v.good);
        assert!(v.witness.is_some());
    }

    #[test]
    fn worked_example_verdicts() {
        let n = 10;
        let host = ChainHypergraph::new(n, n + 1, 2).unwrap();
        let p = Family::full(n).unwrap();
        let f1 = layers(n, &[4, 6]);
        let f2 = layers(n, &[4, 6, 7]);
        let f3 = layers(n, &[4, 6, 7, 8]);
        let two = StepVector::new(vec![2]).unwrap();
        let one = StepVector::new(vec![1]).unwrap();
        let m1 = MeasuredSubhypergraph::indicator(host, &f1).unwrap();
        let m2 = MeasuredSubhypergraph::indicator(host, &f2).unwrap();
        let m3 = MeasuredSubhypergraph::indicator(host, &f3).unwrap();
        assert!(is_compressed(&m1, &p, &two).unwrap());
        assert!(is_completely_compressed(&m1, &p).unwrap());
        assert!(is_compressed(&m2, &p, &two).unwrap());
        assert!(!is_compressed(&m2, &p, &one).unwrap());
        assert!(!is_compressed(&m3, &p, &two).unwrap());

        let c = |a: &[usize], b: &[usize]| Chain::new(n, vec![set(n, a), set(n, b)]).unwrap();
        assert!(m2.measure(&c(&[1, 2, 3, 4, 5, 6], &[1, 2, 3, 4, 5, 6, 7])).is_one());
        assert!(m2.measure(&c(&[1, 2, 3, 4], &[1, 2, 3, 4, 5])).is_zero());
        assert!(m3.measure(&c(&[1, 2, 3, 4, 5, 6], &[1, 2, 3, 4, 5, 6, 7, 8])).is_one());
        assert!(m3.measure(&c(&[1, 2, 3, 4, 5], &[1, 2, 3, 4, 5, 6, 7])).is_zero());

        let fixed = compress(&m2, &p, &one).unwrap();
        assert!(is_compressed(&fixed, &p, &one).unwrap());
        assert_eq!(fixed.size(), m2.size());
        // the C(10,6)·4 pairs between layers 6 and 7 move to the middle pairs
        assert_eq!(fixed.class_total(&p, &one), r(840, 1));
        assert!(fixed.measure(&c(&[1, 2, 3, 4, 5], &[1, 2, 3, 4, 5, 6])).is_one());
    }

    #[test]
    fn compress_idempotent_and_fractional() {
        let n = 4;
        let host = ChainHypergraph::new(n, n + 1, 2).unwrap();
        let p = Family::full(n).unwrap();
        let one = StepVector::ones(2);
        let mut f = MeasuredSubhypergraph::zero(host);
        f.set(Chain::new(n, vec![0, 1]).unwrap(), r(2, 3)).unwrap();
        f.set(Chain::new(n, vec![7, 15]).unwrap(), r(1, 2)).unwrap();
        let g = compress(&f, &p, &one).unwrap();
        assert_eq!(g.size(), r(7, 6));
        assert!(is_compressed(&g, &p, &one).unwrap());
        assert_eq!(compress(&g, &p, &one).unwrap(), g);
        let fractional: Vec<&BigRational> =
            g.explicit().values().filter(|v| !v.is_one() && !v.is_zero()).collect();
        assert_eq!(fractional, vec![&r(1, 6)]);
    }

    #[test]
    fn hat_f_without_forbidden_sets_is_centered_indicator() {
        for (n, d, k) in [(5, 4, 2), (6, 4, 2), (6, 7, 3), (5, 6, 3)] {
            let host = ChainHypergraph::new(n, d, k).unwrap();
            let verts = host.vertices();
            for m in 0..=verts.len() {
                let h = hat_f(&Family::empty(n).unwrap(), m, n, d, k).unwrap();
                let ind = MeasuredSubhypergraph::indicator(host, &centered(n, m).unwrap()).unwrap();
                for a in step_classes(&verts, k) {
                    for c in enumerate_phi_star(&verts, &a) {
                        assert_eq!(h.measure.measure(&c), ind.measure(&c), "n={n} m={m} {c:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn hat_f_small_instance() {
        // n = 6, k = 2, all 7 layers; G_21 is the middle layer plus one set
        // of size 4, which pairs with its 4 subsets of size 3 at weight 1/4.
        let n = 6;
        let missing = Family::from_codes(n, [set(n, &[1, 2, 3])]).unwrap();
        let h = hat_f(&missing, 21, n, 7, 2).unwrap();
        let p = Family::full(n).unwrap().difference(&missing);
        let one = StepVector::ones(2);
        assert_eq!(h.measure.weighted_phi_star_sum(&p, &one), r(1, 1));
        assert!(is_compressed(&h.measure, &p, &one).unwrap());
        // the four replacement pairs all have weight 1/4
        let support: Vec<&BigRational> = h.measure.explicit().values().collect();
        assert_eq!(support.len(), 4);
        assert!(support.iter().all(|v| v.is_one()));
        assert!(h.measure.explicit().keys().all(|c| !c.sets().contains(&set(n, &[1, 2, 3]))));
        assert!(h.measure.size() >= BigRational::from_integer(4.into()));
    }

    #[test]
    fn hat_f_reports_infeasibility() {
        // one middle layer: nothing can replace chains through missing sets
        // when the class has no spare chains.
        let n = 4;
        let forbidden = Family::layer(n, 3).unwrap();
        let err = hat_f(&forbidden, 11, n, 2, 2).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)));
    }

    #[test]
    fn supersat_examples() {
        for q in 0..=16 {
            let g = centered(4, q).unwrap();
            let chk = verify_supersat(&g, &StepVector::ones(2)).unwrap();
            assert!(chk.ok);
            assert_eq!(chk.lhs, chk.rhs);
        }
        let n = 6;
        let mid = binomial(6, 3) as usize;
        let f = Family::layer(n, 3)
            .unwrap()
            .union(&Family::from_codes(n, [set(n, &[1]), set(n, &[1, 2, 3, 4, 5])]).unwrap());
        let chk = verify_supersat(&f, &StepVector::ones(2)).unwrap();
        assert!(chk.lhs >= BigRational::from_integer(((f.len() - mid) as i64).into()));
    }

    #[test]
    fn d_param_values() {
        assert_eq!(d_param(10, 2), 11);
        assert_eq!(d_param(1, 2), 1);
        assert!(d_param(1000, 1) < 1001);
        assert_eq!(d_param(1000, 1), (10.0 * (1000.0f64 * 1000f64.ln()).sqrt()) as usize);
    }

    #[test]
    fn msh_round_trip() {
        let host = ChainHypergraph::new(4, 3, 2).unwrap();
        let mut f = MeasuredSubhypergraph::indicator(host, &centered(4, 9).unwrap()).unwrap();
        f.set(Chain::new(4, vec![3, 7]).unwrap(), r(2, 7)).unwrap();
        let text = msh_to_json(&f);
        assert!(text.contains("\"2/7\""));
        assert_eq!(parse_msh_json(&text).unwrap(), f);
        let z = MeasuredSubhypergraph::zero(host);
        let text = msh_to_json(&z);
        assert!(text.contains("\"default\":\"zero\""));
        assert_eq!(parse_msh_json(&text).unwrap(), z);
        assert!(parse_msh_json(r#"{"n":4,"d":3,"k":2,"default":"zero","edges":[{"chain":[3,7],"measure":"3/2"}]}"#).is_err());
    }

    #[test]
    fn missing_sets_bound_needs_room() {
        let n = 6;
        let f = Family::from_codes(n, [set(n, &[1, 2, 3])]).unwrap();
        assert!(missing_sets_bound(&f, 20, 2).is_err());
        let b = missing_sets_bound(&f, 60, 2).unwrap();
        assert!(b > BigRational::from_integer(count_k_chains(&centered(n, 60).unwrap(), 2).unwrap().into()));
    }
}
