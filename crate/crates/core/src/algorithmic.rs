//! Bonferroni-type bounds optimized over index subsets (Kounias, lower) and
//! spanning trees (Hunter, upper), each in an exhaustive and a polynomial
//! heuristic form.

use alloc::vec;
use alloc::vec::Vec;

use crate::{BoundKind, BoundResult, Detail, Error, MomentSummary};

pub const DEFAULT_KOUNIAS_CAP: usize = 20;
pub const DEFAULT_HUNTER_CAP: usize = 8;

/// Minimum objective gain for a stepwise move to be accepted.
const STEP_GAIN: f64 = 1e-12;

/// Strictly increasing 0-based event indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSubset(Vec<usize>);

impl IndexSubset {
    /// Sorts and deduplicates `indices`; fails on an index `>= n`.
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self, Error> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        Ok(IndexSubset(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

/// `N − 1` edges `(i, j)`, `i < j`, forming a tree on `0..N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree(Vec<(usize, usize)>);

impl SpanningTree {
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn weight(&self, ms: &MomentSummary) -> f64 {
        self.0.iter().map(|&(i, j)| ms.sigma(i, j)).sum()
    }

    /// Whether the edges connect all `n` vertices without a cycle.
    pub fn spans(&self, n: usize) -> bool {
        if self.0.len() + 1 != n.max(1) {
            return false;
        }
        let mut dsu = DisjointSets::new(n);
        self.0
            .iter()
            .all(|&(i, j)| i < n && j < n && dsu.union(i, j))
    }
}

/// `Σ_{i∈I} α_i − Σ_{i<j∈I} Σ_ij`.
pub fn kounias_objective(ms: &MomentSummary, subset: &[usize]) -> f64 {
    let mut total = 0.0;
    for (pos, &i) in subset.iter().enumerate() {
        total += ms.alpha()[i];
        for &j in &subset[..pos] {
            total -= ms.sigma(j, i);
        }
    }
    total
}

/// Kounias bound by enumeration of all `2^N − 1` non-empty subsets.
///
/// Ties go to the lexicographically smallest index sequence.
pub fn kounias_exhaustive(ms: &MomentSummary, cap: usize) -> Result<BoundResult, Error> {
    let n = ms.n_events();
    if n > cap || n >= usize::BITS as usize {
        return Err(Error::TooLarge { n, cap });
    }
    let alpha = ms.alpha();
    let mut values = vec![0.0f64; 1 << n];
    let mut best_mask = 0usize;
    let mut best = f64::NEG_INFINITY;
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let row = ms.sigma_row(low);
        let overlap: f64 = ones(rest).map(|j| row[j]).sum();
        let v = values[rest] + alpha[low] - overlap;
        values[mask] = v;
        if v > best || (v == best && lex_less(mask, best_mask)) {
            best = v;
            best_mask = mask;
        }
    }
    let subset: Vec<usize> = ones(best_mask).collect();
    Ok(BoundResult::new(BoundKind::Kounias, best).with_detail(Detail::Subset(subset)))
}

fn ones(mask: usize) -> impl Iterator<Item = usize> {
    (0..usize::BITS as usize).filter(move |&i| mask >> i & 1 == 1)
}

/// Lexicographic order of the sorted index sequences encoded by two masks.
fn lex_less(a: usize, b: usize) -> bool {
    let mut ia = ones(a);
    let mut ib = ones(b);
    loop {
        match (ia.next(), ib.next()) {
            (Some(x), Some(y)) if x == y => continue,
            (Some(x), Some(y)) => return x < y,
            (None, Some(_)) => return true,
            _ => return false,
        }
    }
}

/// Kounias bound at a subset found by stepwise local search.
///
/// Starts from the singleton with the largest `α_i` and repeatedly takes
/// the best single move (add one index, remove one, or swap one in for one
/// out) whose gain exceeds `1e-12`. Candidate moves are scanned as adds by
/// ascending index, then removals, then swaps by (out, in); the first
/// strictly best move wins ties. Stops at a local optimum.
pub fn kounias_stepwise(ms: &MomentSummary) -> BoundResult {
    let n = ms.n_events();
    let alpha = ms.alpha();
    let first = (0..n).fold(0, |best, i| if alpha[i] > alpha[best] { i } else { best });
    let mut member = vec![false; n];
    member[first] = true;
    // overlap[j] = Σ_{i ∈ I, i ≠ j} Σ_ij
    let mut overlap: Vec<f64> = (0..n)
        .map(|j| if j == first { 0.0 } else { ms.sigma(first, j) })
        .collect();
    let mut size = 1usize;

    #[derive(Clone, Copy)]
    enum Move {
        Add(usize),
        Remove(usize),
        Swap(usize, usize),
    }

    loop {
        let mut best: Option<(f64, Move)> = None;
        let mut consider = |gain: f64, mv: Move| {
            if gain > STEP_GAIN && best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, mv));
            }
        };
        for j in (0..n).filter(|&j| !member[j]) {
            consider(alpha[j] - overlap[j], Move::Add(j));
        }
        if size > 1 {
            for i in (0..n).filter(|&i| member[i]) {
                consider(overlap[i] - alpha[i], Move::Remove(i));
            }
        }
        for i in (0..n).filter(|&i| member[i]) {
            for j in (0..n).filter(|&j| !member[j]) {
                let gain = overlap[i] - alpha[i] + alpha[j] - (overlap[j] - ms.sigma(i, j));
                consider(gain, Move::Swap(i, j));
            }
        }
        let Some((_, mv)) = best else { break };
        let (removed, added) = match mv {
            Move::Add(j) => (None, Some(j)),
            Move::Remove(i) => (Some(i), None),
            Move::Swap(i, j) => (Some(i), Some(j)),
        };
        if let Some(i) = removed {
            member[i] = false;
            size -= 1;
            for (k, o) in overlap.iter_mut().enumerate() {
                if k != i {
                    *o -= ms.sigma(i, k);
                }
            }
        }
        if let Some(j) = added {
            member[j] = true;
            size += 1;
            for (k, o) in overlap.iter_mut().enumerate() {
                if k != j {
                    *o += ms.sigma(j, k);
                }
            }
        }
    }

    let subset: Vec<usize> = (0..n).filter(|&i| member[i]).collect();
    let value = kounias_objective(ms, &subset);
    BoundResult::new(BoundKind::KouniasStepwise, value).with_detail(Detail::Subset(subset))
}

/// Hunter bound `θ₁ − max_T Σ_{(i,j)∈T} Σ_ij` by enumerating all `N^{N−2}`
/// labelled trees through their Prüfer sequences.
pub fn hunter_exhaustive(ms: &MomentSummary, cap: usize) -> Result<BoundResult, Error> {
    let n = ms.n_events();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let tree = if n < 3 {
        SpanningTree(if n == 2 { vec![(0, 1)] } else { Vec::new() })
    } else {
        let mut seq = vec![0usize; n - 2];
        let mut best_weight = f64::NEG_INFINITY;
        let mut best_tree = Vec::new();
        let mut edges = Vec::with_capacity(n - 1);
        let mut degree = vec![0usize; n];
        loop {
            prufer_decode(&seq, &mut degree, &mut edges);
            let w: f64 = edges.iter().map(|&(i, j)| ms.sigma(i, j)).sum();
            if w > best_weight {
                best_weight = w;
                best_tree.clone_from(&edges);
            }
            if !advance(&mut seq, n) {
                break;
            }
        }
        best_tree.sort_unstable();
        SpanningTree(best_tree)
    };
    let value = ms.theta1() - tree.weight(ms);
    Ok(BoundResult::new(BoundKind::Hunter, value).with_detail(Detail::Tree(tree.0)))
}

/// Base-`n` odometer over Prüfer sequences; false once all have been visited.
fn advance(seq: &mut [usize], n: usize) -> bool {
    for digit in seq.iter_mut().rev() {
        *digit += 1;
        if *digit < n {
            return true;
        }
        *digit = 0;
    }
    false
}

fn prufer_decode(seq: &[usize], degree: &mut [usize], edges: &mut Vec<(usize, usize)>) {
    let n = seq.len() + 2;
    edges.clear();
    degree.iter_mut().for_each(|d| *d = 1);
    for &x in seq {
        degree[x] += 1;
    }
    for &x in seq {
        let leaf = (0..n)
            .find(|&j| degree[j] == 1)
            .expect("a Prüfer sequence always leaves a leaf");
        edges.push((leaf.min(x), leaf.max(x)));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let mut rest = (0..n).filter(|&j| degree[j] == 1);
    let (u, v) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((u, v));
}

/// Hunter bound at the maximum-weight spanning tree found by Kruskal's
/// algorithm. Equal weights are taken in lexicographic edge order.
pub fn hunter_greedy(ms: &MomentSummary) -> BoundResult {
    let tree = kruskal_max(ms);
    let value = ms.theta1() - tree.weight(ms);
    BoundResult::new(BoundKind::HunterGreedy, value).with_detail(Detail::Tree(tree.0))
}

pub fn kruskal_max(ms: &MomentSummary) -> SpanningTree {
    let n = ms.n_events();
    let mut edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    // stable sort keeps lexicographic order among equal weights
    edges.sort_by(|&(a, b), &(c, d)| ms.sigma(c, d).total_cmp(&ms.sigma(a, b)));
    let mut dsu = DisjointSets::new(n);
    let mut tree: Vec<(usize, usize)> = edges
        .into_iter()
        .filter(|&(i, j)| dsu.union(i, j))
        .take(n.saturating_sub(1))
        .collect();
    tree.sort_unstable();
    SpanningTree(tree)
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            core::cmp::Ordering::Less => self.parent[ra] = rb,
            core::cmp::Ordering::Greater => self.parent[rb] = ra,
            core::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}
