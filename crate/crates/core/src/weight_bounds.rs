//! Checks of how fast chain weights fall as steps grow.
//!
//! Both comparisons are asymptotic in `n`; at desk scale they are reported,
//! with their hypotheses evaluated separately from their conclusions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::chains::weight_of_sizes;
use crate::degrees::LevelBounds;
use crate::error::{domain, Result};
use crate::lattice::twice_distance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub hypotheses: bool,
    pub holds: bool,
}

fn steps(sizes: &[u32]) -> Vec<u32> {
    sizes.windows(2).map(|w| w[1] - w[0]).collect()
}

fn check_sizes(n: usize, d: usize, sizes: &[u32]) -> Result<bool> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) || *sizes.last().unwrap() as usize > n {
        return domain(format!("{sizes:?} are not strictly increasing sizes in [0, {n}]"));
    }
    let b = LevelBounds::new(n, d)?;
    Ok(sizes.iter().all(|&s| b.contains_size(s as usize)))
}

// (w(A) / w(B))^3 >= n^e
fn cube_ratio_at_least(n: usize, a: &[u32], b: &[u32], e: i64) -> bool {
    let ratio = weight_of_sizes(n, a) / weight_of_sizes(n, b);
    let lhs: BigRational = Pow::pow(ratio, 3u32);
    let base = BigRational::from_integer(BigInt::from(n));
    let rhs = if e >= 0 {
        Pow::pow(base, e as u32)
    } else {
        BigRational::one() / Pow::pow(base, (-e) as u32)
    };
    lhs >= rhs
}

/// `w(A) >= w(B) n^{(h(B) - h(A))/3}` where the steps of `B` dominate those
/// of `A` with at least one strict. Hypotheses: `Σ a_i <= √n (ln n)^{2/5}`
/// and both chains inside the `d` middle layers.
pub fn dominated_steps_bound(n: usize, d: usize, a: &[u32], b: &[u32]) -> Result<BoundCheck> {
    let inside = check_sizes(n, d, a)? & check_sizes(n, d, b)?;
    let (sa, sb) = (steps(a), steps(b));
    if sa.len() != sb.len() || sa.iter().zip(&sb).any(|(x, y)| x > y) || sa == sb {
        return domain("steps of the second chain must dominate the first, strictly somewhere");
    }
    let ha: u32 = sa.iter().sum();
    let hb: u32 = sb.iter().sum();
    let nf = n as f64;
    let short = f64::from(ha) <= nf.sqrt() * nf.ln().max(0.0).powf(0.4);
    Ok(BoundCheck {
        hypotheses: inside && short,
        holds: cube_ratio_at_least(n, a, b, i64::from(hb) - i64::from(ha)),
    })
}

/// `w(A) >= w(B) n^{1/3}` where `B` has the steps of `A` with one of them
/// one longer. Hypotheses: `A` is as close to the middle as its height
/// allows, `d(A) <= ⌈(h(A)+1)/2⌉`, and both chains inside the `d` middle
/// layers.
pub fn one_longer_step_bound(n: usize, d: usize, a: &[u32], b: &[u32]) -> Result<BoundCheck> {
    let inside = check_sizes(n, d, a)? & check_sizes(n, d, b)?;
    let (sa, sb) = (steps(a), steps(b));
    let diffs: Vec<i64> = sa.iter().zip(&sb).map(|(x, y)| i64::from(*y) - i64::from(*x)).collect();
    if sa.len() != sb.len() || diffs.iter().filter(|&&x| x != 0).count() != 1 || !diffs.contains(&1) {
        return domain("second chain must repeat the steps of the first with one step one longer");
    }
    let ha: usize = sa.iter().map(|&x| x as usize).sum();
    let twice_d = twice_distance(n, a[0] as usize).max(twice_distance(n, *a.last().unwrap() as usize));
    let central = twice_d <= 2 * (ha + 1).div_ceil(2);
    Ok(BoundCheck { hypotheses: inside && central, holds: cube_ratio_at_least(n, a, b, 1) })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundSweep {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Pairs meeting the hypotheses, and how many of those satisfy the bound.
    pub dominated_pairs: u64,
    pub dominated_holding: u64,
    pub one_longer_pairs: u64,
    pub one_longer_holding: u64,
}

fn size_sequences(lo: u32, hi: u32, len: usize) -> Vec<Vec<u32>> {
    fn go(lo: u32, hi: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let start = cur.last().map_or(lo, |&x| x + 1);
        for s in start..=hi {
            cur.push(s);
            go(lo, hi, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(lo, hi, len, &mut Vec::new(), &mut out);
    out
}

/// Every pair of k-chain size sequences inside the `d` middle layers of
/// `P(n)`, checked against both bounds when their hypotheses hold.
pub fn sweep_bounds(n: usize, k: usize, d: usize) -> Result<BoundSweep> {
    if k < 2 {
        return domain("k must be >= 2");
    }
    let b = LevelBounds::new(n, d)?;
    let seqs = size_sequences(b.p_minus as u32, b.p_plus as u32, k);
    let mut out = BoundSweep { n, k, d, ..Default::default() };
    for a in &seqs {
        let sa = steps(a);
        for bseq in &seqs {
            let sb = steps(bseq);
            if sa.iter().zip(&sb).all(|(x, y)| x <= y) && sa != sb {
                let c = dominated_steps_bound(n, d, a, bseq)?;
                if c.hypotheses {
                    out.dominated_pairs += 1;
                    out.dominated_holding += u64::from(c.holds);
                }
            }
            let diffs: Vec<i64> =
                sa.iter().zip(&sb).map(|(x, y)| i64::from(*y) - i64::from(*x)).collect();
            if diffs.iter().filter(|&&x| x != 0).count() == 1 && diffs.contains(&1) {
                let c = one_longer_step_bound(n, d, a, bseq)?;
                if c.hypotheses {
                    out.one_longer_pairs += 1;
                    out.one_longer_holding += u64::from(c.holds);
                }
            }
        }
    }
    Ok(out)
}
