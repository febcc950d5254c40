//! Dyck paths with marked instants and returns to zero, Narayana numbers,
//! and the edge paths of the trace expansion.

mod edgepath;

pub use edgepath::{glue, one_edges, preimage_bound, reconstruct_preimages, EdgePath, Glued};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A ±1 lattice excursion; `steps[t-1]` is the step ending at instant t.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyckPath {
    pub steps: Vec<i8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyckStats {
    /// Up steps ending at an odd instant.
    pub o_x: usize,
    pub e_x: usize,
    /// Returns to 0 strictly inside (0, 2n).
    pub r_x: usize,
    pub max_level: usize,
}

impl DyckPath {
    pub fn new(steps: Vec<i8>) -> Result<Self> {
        let mut h: i64 = 0;
        for &s in &steps {
            if s != 1 && s != -1 {
                return Err(Error::Structure(format!("step {s} is not ±1")));
            }
            h += s as i64;
            if h < 0 {
                return Err(Error::Structure("path goes below zero".into()));
            }
        }
        if h != 0 {
            return Err(Error::Structure("path does not return to zero".into()));
        }
        Ok(DyckPath { steps })
    }

    /// Parses a word over `U` and `D`.
    pub fn parse(word: &str) -> Result<Self> {
        let steps = word
            .chars()
            .map(|c| match c {
                'U' | 'u' => Ok(1),
                'D' | 'd' => Ok(-1),
                other => Err(Error::Structure(format!("unexpected step `{other}`"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(steps)
    }

    pub fn semilength(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn heights(&self) -> Vec<i64> {
        let mut h = vec![0];
        for &s in &self.steps {
            h.push(h.last().unwrap() + s as i64);
        }
        h
    }

    /// Every Dyck path of semilength n, in lexicographic order (U before D).
    pub fn all(n: usize) -> Vec<DyckPath> {
        fn rec(n: usize, h: usize, ups: usize, cur: &mut Vec<i8>, out: &mut Vec<DyckPath>) {
            if cur.len() == 2 * n {
                out.push(DyckPath { steps: cur.clone() });
                return;
            }
            if ups < n {
                cur.push(1);
                rec(n, h + 1, ups + 1, cur, out);
                cur.pop();
            }
            if h > 0 {
                cur.push(-1);
                rec(n, h - 1, ups, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, 0, 0, &mut Vec::new(), &mut out);
        out
    }
}

impl std::fmt::Display for DyckPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &s in &self.steps {
            f.write_str(if s > 0 { "U" } else { "D" })?;
        }
        Ok(())
    }
}

pub fn path_stats(path: &DyckPath) -> DyckStats {
    let (mut o, mut e, mut r, mut h, mut max) = (0, 0, 0, 0i64, 0i64);
    let len = path.steps.len();
    for (i, &s) in path.steps.iter().enumerate() {
        let t = i + 1;
        h += s as i64;
        max = max.max(h);
        if s > 0 {
            if t % 2 == 1 {
                o += 1;
            } else {
                e += 1;
            }
        } else if h == 0 && t < len {
            r += 1;
        }
    }
    DyckStats { o_x: o, e_x: e, r_x: r, max_level: max as usize }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn catalan(n: usize) -> BigUint {
    binomial(2 * n as u64, n as u64) / (n as u64 + 1)
}

/// N(n,k) = C(n,k) C(n,k−1) / n, for 1 ≤ k ≤ n.
pub fn narayana(n: usize, k: usize) -> Result<BigUint> {
    if !(1..=n).contains(&k) {
        return Err(Error::Domain { what: "k", value: k as f64, domain: "1 <= k <= n" });
    }
    Ok(narayana_ext(n, k))
}

/// Narayana numbers extended by N(0,0) = 1 and zero off the triangle.
pub(crate) fn narayana_ext(n: usize, k: usize) -> BigUint {
    if n == 0 {
        return if k == 0 { BigUint::one() } else { BigUint::zero() };
    }
    if k == 0 || k > n {
        return BigUint::zero();
    }
    binomial(n as u64, k as u64) * binomial(n as u64, k as u64 - 1) / n as u64
}

/// `table[k][m]`: Dyck paths of semilength n with k odd marked instants and
/// m returns to zero, the final one included.
pub fn returns_table(n: usize) -> Vec<Vec<BigUint>> {
    // state (height, k, m) packed into a dense array per height
    let mut cur: Vec<Vec<Vec<BigUint>>> = vec![vec![vec![BigUint::zero(); n + 1]; n + 1]; n + 2];
    cur[0][0][0] = BigUint::one();
    for t in 1..=2 * n {
        let mut next: Vec<Vec<Vec<BigUint>>> = vec![vec![vec![BigUint::zero(); n + 1]; n + 1]; n + 2];
        let odd = t % 2 == 1;
        for h in 0..=n.min(t - 1) {
            for k in 0..=n {
                for m in 0..=n {
                    let c = &cur[h][k][m];
                    if c.is_zero() {
                        continue;
                    }
                    if h < n {
                        let k2 = if odd { k + 1 } else { k };
                        if k2 <= n {
                            next[h + 1][k2][m] += c;
                        }
                    }
                    if h > 0 {
                        let m2 = if h == 1 { m + 1 } else { m };
                        if m2 <= n {
                            next[h - 1][k][m2] += c;
                        }
                    }
                }
            }
        }
        cur = next;
    }
    std::mem::take(&mut cur[0])
}

/// Dyck paths of semilength n with k odd marked instants and m returns to 0
/// (the terminal return counted, so UUDD has m = 1 and UDUD has m = 2).
pub fn count_with_returns(n: usize, k: usize, m: usize) -> Result<BigUint> {
    if !(1..=n).contains(&k) {
        return Err(Error::Domain { what: "k", value: k as f64, domain: "1 <= k <= n" });
    }
    if !(1..=n).contains(&m) {
        return Err(Error::Domain { what: "m", value: m as f64, domain: "1 <= m <= n" });
    }
    Ok(returns_table(n)[k][m].clone())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PathCountTable {
    pub narayana: BTreeMap<(usize, usize), BigUint>,
    pub with_returns: BTreeMap<(usize, usize, usize), BigUint>,
}

impl PathCountTable {
    pub fn build(n_max: usize) -> Self {
        let mut t = PathCountTable::default();
        for n in 1..=n_max {
            for k in 1..=n {
                t.narayana.insert((n, k), narayana_ext(n, k));
            }
            let r = returns_table(n);
            for (k, row) in r.iter().enumerate().skip(1) {
                for (m, c) in row.iter().enumerate().skip(1) {
                    t.with_returns.insert((n, k, m), c.clone());
                }
            }
        }
        t
    }

    /// CSV rows `n,k,m,count` of the return-refined table.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["n", "k", "m", "count"]).map_err(crate::limitlaws::curve::csv_err)?;
        for ((n, k, m), c) in &self.with_returns {
            wr.write_record([n.to_string(), k.to_string(), m.to_string(), c.to_string()])
                .map_err(crate::limitlaws::curve::csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }
}
