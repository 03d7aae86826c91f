//! Degrees in the k-chain hypergraph on the `j` middle layers of `P(n)`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::chains::StepVector;
use crate::error::{domain, Result};
use crate::lattice::{check_envelope, for_each_submask_of_size};

/// Smallest and largest set sizes in the `j` middle layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelBounds {
    pub p_minus: usize,
    pub p_plus: usize,
}

impl LevelBounds {
    pub fn new(n: usize, j: usize) -> Result<Self> {
        if j == 0 || j > n + 1 {
            return domain(format!("j = {j} outside [1, {}]", n + 1));
        }
        Ok(LevelBounds { p_minus: (n + 2 - j) / 2, p_plus: (n + j) / 2 })
    }

    pub fn contains_size(&self, s: usize) -> bool {
        self.p_minus <= s && s <= self.p_plus
    }
}

fn check_vertex(n: usize, code: u32, j: usize) -> Result<LevelBounds> {
    check_envelope(n)?;
    let b = LevelBounds::new(n, j)?;
    if u64::from(code) >= 1u64 << n {
        return domain(format!("code {code} is not a subset of [{n}]"));
    }
    if !b.contains_size(code.count_ones() as usize) {
        return domain(format!(
            "|A| = {} outside the middle layers [{}, {}]",
            code.count_ones(),
            b.p_minus,
            b.p_plus
        ));
    }
    Ok(b)
}

/// Number of k-chains inside the `j` middle layers that contain `code`,
/// by enumerating the chains below and above it.
pub fn degree_brute(n: usize, code: u32, j: usize, k: usize) -> Result<BigUint> {
    let b = check_vertex(n, code, j)?;
    if k == 0 {
        return Ok(BigUint::zero());
    }
    let full = ((1u64 << n) - 1) as u32;
    let mut below = vec![0u64; k + 1];
    let mut above = vec![0u64; k + 1];
    walk_down(code, 1, k, b.p_minus, &mut below);
    walk_up(code, full, 1, k, b.p_plus, &mut above);
    let total: u64 = (1..=k).map(|i| below[i] * above[k + 1 - i]).sum();
    Ok(BigUint::from(total))
}

// counts[len] += chains of `len` sets ending at `top`, sizes >= lo
fn walk_down(top: u32, len: usize, max_len: usize, lo: usize, counts: &mut [u64]) {
    counts[len] += 1;
    if len == max_len {
        return;
    }
    let s = top.count_ones() as usize;
    for t in lo..s {
        for_each_submask_of_size(top, t, |x| walk_down(x, len + 1, max_len, lo, counts));
    }
}

fn walk_up(bottom: u32, full: u32, len: usize, max_len: usize, hi: usize, counts: &mut [u64]) {
    counts[len] += 1;
    if len == max_len {
        return;
    }
    let s = bottom.count_ones() as usize;
    let free = full & !bottom;
    for t in s + 1..=hi {
        for_each_submask_of_size(free, t - s, |extra| {
            walk_up(bottom | extra, full, len + 1, max_len, hi, counts)
        });
    }
}

fn falling(x: u64, m: u64) -> BigUint {
    (0..m).map(|i| BigUint::from(x - i)).product()
}

fn factorial(m: u64) -> BigUint {
    (1..=m).map(BigUint::from).product()
}

/// Degree of a vertex of size `s` from the closed form: sum over the
/// position `q` of the vertex in the chain and over step vectors whose
/// lower part fits below `s` and upper part fits above it, of
/// `s_(lower) (n - s)_(upper) / ∏ a_i!`.
pub fn degree_formula_by_size(n: usize, s: usize, j: usize, k: usize) -> Result<BigUint> {
    let b = LevelBounds::new(n, j)?;
    if !b.contains_size(s) {
        return domain(format!("size {s} outside [{}, {}]", b.p_minus, b.p_plus));
    }
    if k == 0 {
        return Ok(BigUint::zero());
    }
    let room_below = (s - b.p_minus) as u32;
    let room_above = (b.p_plus - s) as u32;
    let mut total = BigUint::zero();
    for q in 1..=k {
        let lower_len = q - 1;
        let upper_len = k - q;
        for lower in StepVector::all_bounded(lower_len, room_below) {
            let lo_sum = u64::from(lower.total());
            for upper in StepVector::all_bounded(upper_len, room_above) {
                let up_sum = u64::from(upper.total());
                let num = falling(s as u64, lo_sum) * falling((n - s) as u64, up_sum);
                let den: BigUint = lower
                    .entries()
                    .iter()
                    .chain(upper.entries())
                    .map(|&a| factorial(u64::from(a)))
                    .product();
                let (quot, rem) = num.div_rem(&den);
                debug_assert!(rem.is_zero());
                total += quot;
            }
        }
    }
    Ok(total)
}

pub fn degree_formula(n: usize, code: u32, j: usize, k: usize) -> Result<BigUint> {
    check_vertex(n, code, j)?;
    degree_formula_by_size(n, code.count_ones() as usize, j, k)
}

/// `Δ_{j,k}` with a vertex attaining it. Degrees depend only on the size of
/// the vertex, so one representative per level is evaluated.
pub fn max_degree(j: usize, k: usize, n: usize) -> Result<(BigUint, u32)> {
    check_envelope(n)?;
    let b = LevelBounds::new(n, j)?;
    let best = (b.p_minus..=b.p_plus)
        .into_par_iter()
        .map(|s| degree_formula_by_size(n, s, j, k).map(|d| (d, s)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)))
        .expect("non-empty level range");
    let witness = ((1u64 << best.1) - 1) as u32;
    Ok((best.0, witness))
}

/// Steps `a*` with entries in `{⌊(j-1)/(k-1)⌋, ⌈(j-1)/(k-1)⌉}` summing to
/// `j - 1`, non-decreasing.
pub fn balanced_steps(j: usize, k: usize) -> Result<StepVector> {
    if k < 2 || j < k {
        return domain(format!("balanced_steps needs j >= k >= 2, got j = {j}, k = {k}"));
    }
    let parts = k - 1;
    let total = j - 1;
    let base = total / parts;
    let extra = total % parts;
    let v: Vec<u32> = (0..parts)
        .map(|i| (base + usize::from(i >= parts - extra)) as u32)
        .collect();
    StepVector::new(v)
}

/// The two sides of the sandwich around `Δ_{j,k}`:
/// `⌈(n+j-1)/2⌉_(j-1) / ∏ a*_i!` and `n^k` times that.
pub fn max_degree_sandwich(j: usize, k: usize, n: usize) -> Result<(BigRational, BigRational)> {
    let a = balanced_steps(j, k)?;
    let top = (n + j) / 2; // ⌈(n+j-1)/2⌉
    let num = falling(top as u64, (j - 1) as u64);
    let den: BigUint = a.entries().iter().map(|&x| factorial(u64::from(x))).product();
    let lower = BigRational::new(num.into(), den.into());
    let upper = &lower * BigRational::from_integer(BigUint::from(n).pow(k as u32).into());
    Ok((lower, upper))
}

/// `n^{k+j}`.
pub fn crude_degree_bound(n: usize, j: usize, k: usize) -> BigUint {
    BigUint::from(n).pow((k + j) as u32)
}

/// Sum of all vertex degrees, from the closed form.
pub fn degree_sum(n: usize, j: usize, k: usize) -> Result<BigUint> {
    let b = LevelBounds::new(n, j)?;
    let mut total = BigUint::zero();
    for s in b.p_minus..=b.p_plus {
        let layer = crate::lattice::binomial(n as u64, s as u64);
        total += degree_formula_by_size(n, s, j, k)? * BigUint::from(layer);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::count_k_chains;
    use crate::lattice::middle_layers;
    use num_traits::One;

    #[test]
    fn bounds() {
        assert_eq!(LevelBounds::new(4, 2).unwrap(), LevelBounds { p_minus: 2, p_plus: 3 });
        assert_eq!(LevelBounds::new(5, 1).unwrap(), LevelBounds { p_minus: 3, p_plus: 3 });
        assert_eq!(LevelBounds::new(5, 6).unwrap(), LevelBounds { p_minus: 0, p_plus: 5 });
        assert!(LevelBounds::new(5, 7).is_err());
    }

    #[test]
    fn brute_examples() {
        assert_eq!(degree_brute(4, 0b0111, 2, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(degree_brute(4, 0b0011, 2, 2).unwrap(), BigUint::from(2u32));
        for code in [0b0011u32, 0b0111] {
            assert_eq!(degree_brute(4, code, 2, 1).unwrap(), BigUint::one());
        }
        assert!(degree_brute(4, 0b0001, 2, 2).is_err());
        assert!(degree_formula(4, 0b1111, 2, 2).is_err());
    }

    #[test]
    fn formula_matches_brute_small() {
        for n in 1..=7usize {
            for j in 1..=n + 1 {
                for k in 1..=4 {
                    let verts = middle_layers(n, j).unwrap();
                    let mut sum = BigUint::zero();
                    for v in verts.iter() {
                        let f = degree_formula(n, v, j, k).unwrap();
                        assert_eq!(f, degree_brute(n, v, j, k).unwrap(), "n={n} j={j} k={k} v={v}");
                        sum += f;
                    }
                    let edges = count_k_chains(&verts, k).unwrap();
                    assert_eq!(sum, edges * BigUint::from(k));
                    assert_eq!(degree_sum(n, j, k).unwrap(), sum);
                }
            }
        }
    }

    #[test]
    fn max_degree_examples() {
        let (d, w) = max_degree(2, 2, 4).unwrap();
        assert_eq!(d, BigUint::from(3u32));
        assert_eq!(degree_brute(4, w, 2, 2).unwrap(), d);
        for n in 2..=10 {
            for j in 1..=n + 1 {
                for k in 1..=4 {
                    let (d, w) = max_degree(j, k, n).unwrap();
                    assert_eq!(degree_formula(n, w, j, k).unwrap(), d);
                    assert!(d <= crude_degree_bound(n, j, k));
                }
            }
        }
    }

    #[test]
    fn balanced_examples() {
        assert_eq!(balanced_steps(5, 3).unwrap().entries(), &[2, 2]);
        assert_eq!(balanced_steps(6, 3).unwrap().entries(), &[2, 3]);
        assert_eq!(balanced_steps(4, 4).unwrap().entries(), &[1, 1, 1]);
        assert_eq!(balanced_steps(9, 4).unwrap().entries(), &[2, 3, 3]);
        assert!(balanced_steps(2, 3).is_err());
        assert!(balanced_steps(3, 1).is_err());
    }
}
