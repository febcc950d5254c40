//! Edge paths, 1-edges and the first gluing procedure.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

use super::{binomial, DyckPath};
use crate::error::{Error, Result};

/// The closed walk `i₀ j₁ i₁ j₂ … i_{s−1} j_s (i₀)` alternating between the
/// bottom line (`1..=N`) and the top line (`1..=p`).
///
/// Edge `2q` joins `i_q` and `j_{q+1}`, edge `2q+1` joins `i_{q+1}` and
/// `j_{q+1}` (indices mod s). `top[q]` stores `j_{q+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgePath {
    pub bottom: Vec<u32>,
    pub top: Vec<u32>,
}

impl EdgePath {
    pub fn new(bottom: Vec<u32>, top: Vec<u32>) -> Result<Self> {
        if bottom.is_empty() || bottom.len() != top.len() {
            return Err(Error::Structure("bottom and top must have equal positive length".into()));
        }
        if bottom.iter().chain(&top).any(|&v| v == 0) {
            return Err(Error::Structure("vertex labels start at 1".into()));
        }
        Ok(EdgePath { bottom, top })
    }

    /// s_N, half the number of edges.
    pub fn len(&self) -> usize {
        self.bottom.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bottom.is_empty()
    }

    /// `(bottom, top)` of every edge in reading order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let s = self.len();
        (0..s).flat_map(|q| [(self.bottom[q], self.top[q]), (self.bottom[(q + 1) % s], self.top[q])]).collect()
    }

    fn cycle(&self) -> Vec<u32> {
        self.bottom.iter().zip(&self.top).flat_map(|(&b, &t)| [b, t]).collect()
    }

    fn from_cycle(c: &[u32]) -> Self {
        EdgePath { bottom: c.iter().step_by(2).copied().collect(), top: c.iter().skip(1).step_by(2).copied().collect() }
    }

    /// Every edge occurs an even number of times.
    pub fn is_even(&self) -> bool {
        let mut count: HashMap<(u32, u32), usize> = HashMap::new();
        for e in self.edges() {
            *count.entry(e).or_default() += 1;
        }
        count.values().all(|c| c % 2 == 0)
    }

    /// Up when an edge is read an odd number of times so far, down otherwise.
    pub fn trajectory(&self) -> Result<DyckPath> {
        let mut count: HashMap<(u32, u32), usize> = HashMap::new();
        let steps = self
            .edges()
            .into_iter()
            .map(|e| {
                let c = count.entry(e).or_default();
                *c += 1;
                if *c % 2 == 1 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        DyckPath::new(steps).map_err(|_| Error::Structure("edge path is not even".into()))
    }

    /// The same closed walk with origin moved to bottom position `q`.
    pub fn rotate(&self, q: usize) -> Self {
        let s = self.len();
        EdgePath {
            bottom: (0..s).map(|i| self.bottom[(i + q) % s]).collect(),
            top: (0..s).map(|i| self.top[(i + q) % s]).collect(),
        }
    }

    /// All edge paths of length 2s with labels in `1..=n` and `1..=p`.
    pub fn all(n: u32, p: u32, s: usize) -> Vec<EdgePath> {
        fn words(alphabet: u32, len: usize) -> Vec<Vec<u32>> {
            let mut out = vec![vec![]];
            for _ in 0..len {
                out = out
                    .into_iter()
                    .flat_map(|w| {
                        (1..=alphabet).map(move |a| {
                            let mut w = w.clone();
                            w.push(a);
                            w
                        })
                    })
                    .collect();
            }
            out
        }
        let tops = words(p, s);
        words(n, s)
            .into_iter()
            .flat_map(|b| tops.iter().map(move |t| EdgePath { bottom: b.clone(), top: t.clone() }))
            .collect()
    }
}

/// Edge positions whose bottom vertex is `vertex`.
pub fn one_edges(path: &EdgePath, vertex: u32) -> Vec<usize> {
    let s = path.len();
    (0..2 * s)
        .filter(|&e| {
            let q = if e % 2 == 0 { e / 2 } else { (e / 2 + 1) % s };
            path.bottom[q] == vertex
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Glued {
    pub glued: EdgePath,
    /// Pairs of 1-edges in the input.
    pub s: usize,
    /// Clusters.
    pub l: usize,
    /// Returns to zero of the glued trajectory, the final one included.
    pub m: usize,
}

impl Glued {
    /// s₁ with the first return of the glued trajectory at instant 2s₁.
    pub fn first_return(&self) -> usize {
        let x = self.glued.trajectory().expect("glued paths are even");
        let mut h = 0i64;
        for (i, &st) in x.steps.iter().enumerate() {
            h += st as i64;
            if h == 0 {
                return i.div_ceil(2);
            }
        }
        unreachable!("a Dyck path returns to zero")
    }
}

/// Subpaths from one bottom occurrence of 1 to the next, as vertex lists
/// `[1, t, b, …, t, 1]`. The first one contains edge 0.
fn split_at_ones(path: &EdgePath) -> Vec<Vec<u32>> {
    let c = path.cycle();
    let len = c.len();
    let mut occ: Vec<usize> = (0..path.len()).filter(|&q| path.bottom[q] == 1).collect();
    if path.bottom[0] != 1 {
        occ.rotate_right(1);
    }
    let s = occ.len();
    (0..s)
        .map(|a| {
            let start = 2 * occ[a];
            let mut end = 2 * occ[(a + 1) % s];
            if end <= start {
                end += len;
            }
            (start..=end).map(|p| c[p % len]).collect()
        })
        .collect()
}

fn endpoints(sub: &[u32]) -> (u32, u32) {
    (sub[1], sub[sub.len() - 2])
}

/// Smallest traversal, in (index, forward-before-reverse) order, that uses
/// every member once and chains end vertex to start vertex.
fn traverse(subs: &[Vec<u32>], members: &[usize]) -> Vec<(usize, bool)> {
    fn go(
        subs: &[Vec<u32>],
        members: &[usize],
        used: &mut Vec<bool>,
        order: &mut Vec<(usize, bool)>,
        at: u32,
        home: u32,
    ) -> bool {
        if order.len() == members.len() {
            return at == home;
        }
        for (slot, &i) in members.iter().enumerate() {
            if used[slot] {
                continue;
            }
            let (g, h) = endpoints(&subs[i]);
            for (rev, from, to) in [(false, g, h), (true, h, g)] {
                if from != at || (rev && g == h) {
                    continue;
                }
                used[slot] = true;
                order.push((i, rev));
                if go(subs, members, used, order, to, home) {
                    return true;
                }
                order.pop();
                used[slot] = false;
            }
        }
        false
    }
    let (g, h) = endpoints(&subs[members[0]]);
    let mut used = vec![false; members.len()];
    used[0] = true;
    let mut order = vec![(members[0], false)];
    let found = go(subs, members, &mut used, &mut order, h, g);
    assert!(found, "even valency guarantees a closed traversal");
    order
}

fn find(parent: &mut HashMap<u32, u32>, v: u32) -> u32 {
    let p = *parent.entry(v).or_insert(v);
    if p == v {
        return v;
    }
    let r = find(parent, p);
    parent.insert(v, r);
    r
}

/// The first gluing procedure.
pub fn glue(path: &EdgePath) -> Result<Glued> {
    if !path.is_even() {
        return Err(Error::Structure("edge path is not even".into()));
    }
    if !path.bottom.contains(&1) {
        return Err(Error::Structure("edge path has no 1-edges".into()));
    }
    let subs = split_at_ones(path);
    let s = subs.len();

    // graph G on the tops of the 1-edges, one edge per subpath
    let mut parent = HashMap::new();
    for sub in &subs {
        let (g, h) = endpoints(sub);
        let (a, b) = (find(&mut parent, g), find(&mut parent, h));
        if a != b {
            parent.insert(a, b);
        }
    }
    let mut clusters: Vec<(u32, Vec<usize>)> = Vec::new();
    for (i, sub) in subs.iter().enumerate() {
        let root = find(&mut parent, sub[1]);
        match clusters.iter_mut().find(|c| c.0 == root) {
            Some(c) => c.1.push(i),
            None => clusters.push((root, vec![i])),
        }
    }
    let l = clusters.len();

    let mut cycle: Vec<u32> = vec![1];
    for (_, members) in &clusters {
        let order = traverse(&subs, members);
        let mut cur: Vec<u32> = subs[order[0].0].clone();
        for &(i, rev) in &order[1..] {
            let mut seg = subs[i].clone();
            if rev {
                seg.reverse();
            }
            debug_assert_eq!(cur[cur.len() - 2], seg[1]);
            // …x h 1 | 1 h y…  becomes  …x h y…
            cur.pop();
            cur.extend_from_slice(&seg[2..]);
        }
        cycle.pop();
        cycle.extend(cur);
    }
    cycle.pop();
    let glued = EdgePath::from_cycle(&cycle);
    debug_assert_eq!(glued.len(), path.len() - (s - l));
    let m = returns(&glued.trajectory()?);
    Ok(Glued { glued, s, l, m })
}

fn returns(x: &DyckPath) -> usize {
    x.heights().iter().skip(1).filter(|&&h| h == 0).count()
}

/// s₁ · C(s, l) · (2 s_N)^{s−l}.
pub fn preimage_bound(s: usize, l: usize, s1: usize, s_n: usize) -> Result<BigUint> {
    if !(l <= s && s <= s_n) {
        return Err(Error::Domain { what: "s", value: s as f64, domain: "l <= s <= s_N" });
    }
    if s1 == 0 {
        return Err(Error::Domain { what: "s1", value: 0.0, domain: "s1 >= 1" });
    }
    Ok(BigUint::from(s1) * binomial(s as u64, l as u64) * BigUint::from(2 * s_n).pow((s - l) as u32))
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in multisets(n - first, k - 1) {
            for r in &mut rest {
                *r += first;
            }
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every edge path P with `glue(P) == target`, found by re-inserting the
/// erased visits of 1 at top instants, then trying all orders, directions
/// and origins of the resulting subpaths. Exponential; meant for tiny paths.
pub fn reconstruct_preimages(target: &Glued) -> Vec<EdgePath> {
    let c = target.glued.cycle();
    let tops: Vec<usize> = (1..c.len()).step_by(2).collect();
    let extra = target.s - target.l;
    let mut found = BTreeSet::new();
    for ms in multisets(tops.len(), extra) {
        let mut expanded = Vec::with_capacity(c.len() + 2 * extra);
        for (pos, &v) in c.iter().enumerate() {
            expanded.push(v);
            if pos % 2 == 1 {
                let k = ms.iter().filter(|&&t| tops[t] == pos).count();
                for _ in 0..k {
                    expanded.push(1);
                    expanded.push(v);
                }
            }
        }
        let base = EdgePath::from_cycle(&expanded);
        let subs = split_at_ones(&base);
        let s = subs.len();
        for perm in permutations(s) {
            for dirs in 0..(1u32 << s) {
                let mut cyc: Vec<u32> = vec![1];
                for (slot, &i) in perm.iter().enumerate() {
                    let mut seg = subs[i].clone();
                    if dirs >> slot & 1 == 1 {
                        seg.reverse();
                    }
                    cyc.pop();
                    cyc.extend(seg);
                }
                cyc.pop();
                let p = EdgePath::from_cycle(&cyc);
                for q in 0..p.len() {
                    let cand = p.rotate(q);
                    if found.contains(&cand) {
                        continue;
                    }
                    if glue(&cand).map(|g| &g == target).unwrap_or(false) {
                        found.insert(cand);
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(b: &[u32], t: &[u32]) -> EdgePath {
        EdgePath::new(b.to_vec(), t.to_vec()).unwrap()
    }

    #[test]
    fn one_edge_positions() {
        assert!(one_edges(&ep(&[2, 3], &[1, 1]), 1).is_empty());
        assert_eq!(one_edges(&ep(&[1, 1], &[4, 5]), 1), vec![0, 1, 2, 3]);
        // i0 = 1, i1 = 2: the edges adjacent to i0
        assert_eq!(one_edges(&ep(&[1, 2], &[3, 4]), 1), vec![0, 3]);
    }

    #[test]
    fn trajectory_of_a_backtrack() {
        // 1 -> 5 -> 1: edge (1,5) read twice
        let p = ep(&[1], &[5]);
        assert!(p.is_even());
        assert_eq!(p.trajectory().unwrap().to_string(), "UD");
        assert!(!ep(&[1, 2], &[3, 4]).is_even());
    }

    #[test]
    fn returns_at_every_one_edge() {
        // three independent excursions from 1
        let p = ep(&[1, 1, 1], &[2, 3, 4]);
        let g = glue(&p).unwrap();
        assert_eq!((g.s, g.l, g.m), (3, 3, 3));
        assert_eq!(g.glued, p);
        for q in 1..3 {
            let g = glue(&p.rotate(q)).unwrap();
            assert_eq!((g.s, g.l, g.m), (3, 3, 3));
            assert_eq!(g.glued, p.rotate(q));
        }
        // origin off vertex 1: excursions 1 7 2 5 1 and 1 5 2 7 1 share tops
        let r = ep(&[2, 1, 2, 1], &[7, 7, 5, 5]);
        let g = glue(&r).unwrap();
        assert_eq!((g.s, g.l), (2, 1));
        assert_eq!(g.glued.len(), r.len() - 1);
    }

    #[test]
    fn repeated_pair_forms_one_cluster() {
        // 1 a 2 a 1 a: vertex 1 visited twice through the same top a,
        // so both subpaths join at a
        let p = ep(&[1, 2, 1, 3], &[4, 4, 5, 5]);
        let g = glue(&p).unwrap();
        assert_eq!((g.s, g.l), (2, 2));
        let p = ep(&[1, 2, 1, 2], &[4, 4, 4, 4]);
        let g = glue(&p).unwrap();
        assert_eq!((g.s, g.l), (2, 1));
        assert_eq!(g.glued.len(), p.len() - 1);
    }

    #[test]
    fn glue_rejects_odd_paths() {
        assert!(matches!(glue(&ep(&[1, 2], &[3, 4])), Err(Error::Structure(_))));
        assert!(matches!(glue(&ep(&[2], &[3])), Err(Error::Structure(_))));
    }

    #[test]
    fn bound_values() {
        assert_eq!(preimage_bound(3, 3, 2, 5).unwrap(), BigUint::from(2u32));
        assert_eq!(preimage_bound(3, 1, 2, 5).unwrap(), BigUint::from(600u32));
        assert!(preimage_bound(2, 3, 1, 5).is_err());
        assert!(preimage_bound(3, 1, 0, 5).is_err());
    }

    #[test]
    fn length_identity_on_all_small_paths() {
        for p in EdgePath::all(3, 3, 3) {
            if !p.is_even() || !p.bottom.contains(&1) {
                continue;
            }
            let g = glue(&p).unwrap();
            assert_eq!(g.glued.len(), p.len() - (g.s - g.l));
            assert_eq!(g.glued.bottom[0], 1);
            assert_eq!(2 * g.s, one_edges(&p, 1).len());
        }
    }
}
