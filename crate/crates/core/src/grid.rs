//! Chains in the grid poset `[m]^d` under the componentwise order.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::io::json_error;

/// Whether coordinates run over `0..m` or `1..=m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Convention {
    ZeroBased,
    OneBased,
}

impl Convention {
    pub fn offset(self) -> i64 {
        match self {
            Convention::ZeroBased => 0,
            Convention::OneBased => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::ZeroBased => "zeroBased",
            Convention::OneBased => "oneBased",
        }
    }
}

/// Largest grid handled, in points.
pub const MAX_GRID_POINTS: u64 = 1 << 24;

/// A set of points of `[m]^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFamily {
    m: usize,
    d: usize,
    convention: Convention,
    members: Vec<bool>,
    size: usize,
}

impl GridFamily {
    pub fn empty(m: usize, d: usize, convention: Convention) -> Result<Self> {
        if m == 0 || d == 0 {
            return domain("m and d must be >= 1");
        }
        let total = (m as u64).checked_pow(d as u32).filter(|&t| t <= MAX_GRID_POINTS);
        let Some(total) = total else {
            return Err(crate::Error::Resource(format!("grid [{m}]^{d} is too large")));
        };
        Ok(GridFamily { m, d, convention, members: vec![false; total as usize], size: 0 })
    }

    pub fn from_points(
        m: usize,
        d: usize,
        convention: Convention,
        points: &[Vec<i64>],
    ) -> Result<Self> {
        let mut g = GridFamily::empty(m, d, convention)?;
        for p in points {
            if !g.insert(p)? {
                return domain(format!("point {p:?} repeated"));
            }
        }
        Ok(g)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn total_points(&self) -> usize {
        self.members.len()
    }

    fn index_of(&self, p: &[i64]) -> Result<usize> {
        if p.len() != self.d {
            return domain(format!("point {p:?} does not have {} coordinates", self.d));
        }
        let off = self.convention.offset();
        let mut idx = 0usize;
        for &x in p {
            let v = x - off;
            if v < 0 || v >= self.m as i64 {
                return domain(format!(
                    "point {p:?} outside the grid [{}..={}]^{}",
                    off,
                    off + self.m as i64 - 1,
                    self.d
                ));
            }
            idx = idx * self.m + v as usize;
        }
        Ok(idx)
    }

    /// Point with index `idx`, in convention coordinates.
    pub fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut p = vec![0i64; self.d];
        for slot in p.iter_mut().rev() {
            *slot = (idx % self.m) as i64 + self.convention.offset();
            idx /= self.m;
        }
        p
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.index_of(p).is_ok_and(|i| self.members[i])
    }

    pub fn insert(&mut self, p: &[i64]) -> Result<bool> {
        let i = self.index_of(p)?;
        let fresh = !self.members[i];
        if fresh {
            self.members[i] = true;
            self.size += 1;
        }
        Ok(fresh)
    }

    pub fn remove(&mut self, p: &[i64]) -> Result<bool> {
        let i = self.index_of(p)?;
        let was = self.members[i];
        if was {
            self.members[i] = false;
            self.size -= 1;
        }
        Ok(was)
    }

    pub fn points(&self) -> Vec<Vec<i64>> {
        (0..self.members.len()).filter(|&i| self.members[i]).map(|i| self.point(i)).collect()
    }

    pub fn to_doc(&self) -> GridDoc {
        GridDoc { m: self.m, d: self.d, convention: self.convention, points: self.points() }
    }
}

/// `{"m":…,"d":…,"convention":"zeroBased","points":[[…]…]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub m: usize,
    pub d: usize,
    pub convention: Convention,
    pub points: Vec<Vec<i64>>,
}

impl GridDoc {
    pub fn to_family(&self) -> Result<GridFamily> {
        GridFamily::from_points(self.m, self.d, self.convention, &self.points)
    }
}

pub fn parse_grid_json(text: &str) -> Result<GridFamily> {
    let doc: GridDoc = serde_json::from_str(text).map_err(json_error)?;
    doc.to_family()
}

pub fn grid_to_json(g: &GridFamily) -> String {
    serde_json::to_string(&g.to_doc()).expect("plain data")
}

fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Number of k-sets of distinct points that are totally ordered
/// componentwise. Points are processed by coordinate sum, then
/// lexicographically, so every point follows all points below it.
pub fn count_point_chains(points: &[Vec<i64>], k: usize) -> Result<u128> {
    if k == 0 {
        return domain("k must be >= 1");
    }
    let mut pts: Vec<&Vec<i64>> = points.iter().collect();
    pts.sort_by(|a, b| {
        let sa: i64 = a.iter().sum();
        let sb: i64 = b.iter().sum();
        sa.cmp(&sb).then_with(|| a.cmp(b))
    });
    if pts.windows(2).any(|w| w[0] == w[1]) {
        return domain("points must be distinct");
    }
    // ending[j][i]: chains of j+1 points whose largest point is pts[i]
    let mut ending = vec![vec![1u128; pts.len()]];
    for j in 1..k {
        let prev = &ending[j - 1];
        let next: Vec<u128> = (0..pts.len())
            .map(|i| (0..i).filter(|&q| leq(pts[q], pts[i])).map(|q| prev[q]).sum())
            .collect();
        ending.push(next);
    }
    Ok(ending[k - 1].iter().sum())
}

pub fn grid_count_chains(f: &GridFamily, k: usize) -> Result<u128> {
    count_point_chains(&f.points(), k)
}

/// Same count by checking every k-subset; for small families.
pub fn count_point_chains_brute(points: &[Vec<i64>], k: usize) -> u128 {
    fn go(points: &[Vec<i64>], k: usize, start: usize, chosen: &mut Vec<usize>) -> u128 {
        if chosen.len() == k {
            let mut sel: Vec<&Vec<i64>> = chosen.iter().map(|&i| &points[i]).collect();
            sel.sort_by_key(|p| p.iter().sum::<i64>());
            return u128::from(sel.windows(2).all(|w| leq(w[0], w[1])));
        }
        let mut total = 0;
        for i in start..points.len() {
            chosen.push(i);
            total += go(points, k, i + 1, chosen);
            chosen.pop();
        }
        total
    }
    go(points, k, 0, &mut Vec::new())
}

/// The first `Q` points of the grid ordered by distance of the coordinate
/// sum from the middle of its range, larger sums first on ties, then by
/// lexicographically larger coordinates. For `m = 2` this is the centered
/// family of `P(d)` under the bijection point ↦ support.
pub fn m_centered_family(m: usize, d: usize, q: usize, convention: Convention) -> Result<GridFamily> {
    let mut g = GridFamily::empty(m, d, convention)?;
    let total = g.total_points();
    if q > total {
        return domain(format!("Q = {q} exceeds the {total} grid points"));
    }
    // twice the centre of the sum range, in zero-based coordinates
    let twice_mid = (d * (m - 1)) as i64;
    let mut order: Vec<usize> = (0..total).collect();
    let key = |i: usize| {
        let p = g.point(i);
        let s: i64 = p.iter().map(|x| x - convention.offset()).sum();
        ((2 * s - twice_mid).abs(), std::cmp::Reverse(s), std::cmp::Reverse(p))
    };
    order.sort_by_cached_key(|&i| key(i));
    for &i in order.iter().take(q) {
        g.members[i] = true;
    }
    g.size = q;
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CounterexampleSide {
    pub convention: Convention,
    pub size_f: usize,
    pub size_f_prime: usize,
    pub chains_f: u128,
    pub chains_f_prime: u128,
    pub improved: bool,
    /// Set when a point of the construction lies outside the grid.
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CounterexampleReport {
    pub m: usize,
    pub d: usize,
    pub k: usize,
    pub sides: Vec<CounterexampleSide>,
    /// Improvement under at least one convention.
    pub improved_somewhere: bool,
}

/// The band `{a ∈ [16]^2 : |a_1 + a_2 - 16| <= 5}` against the same band
/// with `(5,6)` swapped for `(10,0)`, counting comparable pairs under both
/// coordinate conventions. Points are counted as listed even when one of
/// them falls outside the grid; the report says so.
pub fn counterexample_check() -> Result<CounterexampleReport> {
    let (m, d, k) = (16usize, 2usize, 2usize);
    let removed = vec![5i64, 6];
    let added = vec![10i64, 0];
    let mut sides = Vec::new();
    for conv in [Convention::ZeroBased, Convention::OneBased] {
        let lo = conv.offset();
        let hi = lo + m as i64 - 1;
        let band: Vec<Vec<i64>> = (lo..=hi)
            .flat_map(|a| (lo..=hi).map(move |b| vec![a, b]))
            .filter(|p| (p[0] + p[1] - 16).abs() <= 5)
            .collect();
        let mut changed: Vec<Vec<i64>> = band.iter().filter(|p| **p != removed).cloned().collect();
        let mut notes = Vec::new();
        if !band.contains(&removed) {
            notes.push(format!("{removed:?} is not in the band"));
        }
        if band.contains(&added) {
            notes.push(format!("{added:?} is already in the band"));
        } else {
            changed.push(added.clone());
        }
        if added.iter().any(|&x| x < lo || x > hi) {
            notes.push(format!("{added:?} lies outside [{lo}..={hi}]^2"));
        }
        let chains_f = count_point_chains(&band, k)?;
        let chains_f_prime = count_point_chains(&changed, k)?;
        sides.push(CounterexampleSide {
            convention: conv,
            size_f: band.len(),
            size_f_prime: changed.len(),
            chains_f,
            chains_f_prime,
            improved: chains_f_prime < chains_f,
            note: if notes.is_empty() { None } else { Some(notes.join("; ")) },
        });
    }
    let improved_somewhere = sides.iter().any(|s| s.improved && s.note.is_none());
    Ok(CounterexampleReport { m, d, k, sides, improved_somewhere })
}
