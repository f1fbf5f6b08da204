//! Fill-reducing ordering by graph nested dissection.

use super::csr::CsrMatrix;
use crate::scalar::Real;
use std::collections::VecDeque;

const LEAF_SIZE: usize = 200;

/// Nested dissection permutation of the adjacency graph of `a`.
///
/// Returns `perm` with `perm[new] = old`. Separators come from the middle
/// level of a breadth-first level structure rooted at a pseudo-peripheral
/// node; disconnected pieces are ordered independently.
pub fn nested_dissection<T: Real>(a: &CsrMatrix<T>) -> Vec<usize> {
    let n = a.nrows();
    let mut g = Graph {
        row_ptr: a.row_ptr(),
        col_idx: a.col_idx(),
        region: vec![0; n],
        level: vec![usize::MAX; n],
        next_region: 1,
    };
    let mut perm = Vec::with_capacity(n);
    g.dissect((0..n).collect(), &mut perm);
    debug_assert_eq!(perm.len(), n);
    perm
}

struct Graph<'a> {
    row_ptr: &'a [usize],
    col_idx: &'a [usize],
    region: Vec<usize>,
    level: Vec<usize>,
    next_region: usize,
}

impl Graph<'_> {
    fn neighbors(&self, v: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[v]..self.row_ptr[v + 1]]
    }

    fn fresh_region(&mut self, nodes: &[usize]) -> usize {
        let id = self.next_region;
        self.next_region += 1;
        for &v in nodes {
            self.region[v] = id;
        }
        id
    }

    /// Breadth-first levels inside `id` from `root`; returns the levels.
    fn bfs(&mut self, root: usize, id: usize) -> Vec<Vec<usize>> {
        let mut levels: Vec<Vec<usize>> = vec![vec![root]];
        let mut visited = vec![root];
        self.level[root] = 0;
        let mut queue = VecDeque::from([root]);
        let (rp, ci) = (self.row_ptr, self.col_idx);
        while let Some(v) = queue.pop_front() {
            let lv = self.level[v];
            for &w in &ci[rp[v]..rp[v + 1]] {
                if self.region[w] == id && self.level[w] == usize::MAX {
                    self.level[w] = lv + 1;
                    if levels.len() <= lv + 1 {
                        levels.push(Vec::new());
                    }
                    levels[lv + 1].push(w);
                    visited.push(w);
                    queue.push_back(w);
                }
            }
        }
        for v in visited {
            self.level[v] = usize::MAX;
        }
        levels
    }

    fn dissect(&mut self, nodes: Vec<usize>, perm: &mut Vec<usize>) {
        if nodes.len() <= LEAF_SIZE {
            let mut nodes = nodes;
            nodes.sort_unstable();
            perm.extend(nodes);
            return;
        }
        let id = self.fresh_region(&nodes);
        let mut levels = self.bfs(nodes[0], id);
        let reached: usize = levels.iter().map(Vec::len).sum();
        if reached < nodes.len() {
            let mut components = vec![levels.into_iter().flatten().collect::<Vec<_>>()];
            self.fresh_region(&components[0]);
            for &v in &nodes {
                if self.region[v] == id {
                    let comp: Vec<usize> = self.bfs(v, id).into_iter().flatten().collect();
                    self.fresh_region(&comp);
                    components.push(comp);
                }
            }
            for comp in components {
                self.dissect(comp, perm);
            }
            return;
        }
        // pseudo-peripheral root
        for _ in 0..4 {
            let last = levels.last().unwrap();
            let cand = *last
                .iter()
                .min_by_key(|&&v| self.neighbors(v).iter().filter(|&&w| self.region[w] == id).count())
                .unwrap();
            let trial = self.bfs(cand, id);
            if trial.len() > levels.len() {
                levels = trial;
            } else {
                break;
            }
        }
        if levels.len() < 3 {
            let mut nodes = nodes;
            nodes.sort_unstable();
            perm.extend(nodes);
            return;
        }
        // among levels near the middle pick the smallest one
        let total = nodes.len();
        let mut acc = 0;
        let mut best: Option<(usize, usize)> = None;
        for (i, l) in levels.iter().enumerate().take(levels.len() - 1).skip(1) {
            let before = acc + levels[i - 1].len();
            acc = before;
            if 10 * before < 3 * total || 10 * (before + l.len()) > 7 * total {
                continue;
            }
            if best.map_or(true, |(_, sz)| l.len() < sz) {
                best = Some((i, l.len()));
            }
        }
        let mid = match best {
            Some((i, _)) => i,
            None => {
                let mut acc = 0;
                let mut m = 1;
                for (i, l) in levels.iter().enumerate() {
                    acc += l.len();
                    if 2 * acc >= total {
                        m = i.clamp(1, levels.len() - 2);
                        break;
                    }
                }
                m
            }
        };
        // only nodes of the middle level touching the next level separate
        for &v in &levels[mid + 1] {
            self.level[v] = mid + 1;
        }
        let (sep, rest): (Vec<usize>, Vec<usize>) = std::mem::take(&mut levels[mid]).into_iter().partition(|&v| {
            let (rp, ci) = (self.row_ptr, self.col_idx);
            ci[rp[v]..rp[v + 1]].iter().any(|&w| self.level[w] == mid + 1)
        });
        for &v in &levels[mid + 1] {
            self.level[v] = usize::MAX;
        }
        let mut left: Vec<usize> = levels[..mid].iter().flatten().copied().collect();
        left.extend(rest);
        let right: Vec<usize> = levels[mid + 1..].iter().flatten().copied().collect();
        let mut sep = sep;
        self.dissect(left, perm);
        self.dissect(right, perm);
        sep.sort_unstable();
        perm.extend(sep);
    }
}
