//! Fill-reducing ordering by recursive level-structure bisection.
//!
//! Each connected piece of the graph is split by the middle level of a
//! breadth-first search rooted at a pseudo-peripheral vertex. On the
//! structured meshes used here this yields separators of size `O(sqrt(n))`.

use super::CsrMatrix;

const LEAF_SIZE: usize = 96;

enum Task {
    Order(Vec<usize>),
    Emit(Vec<usize>),
}

struct Graph<'a> {
    row_ptr: &'a [usize],
    col_idx: &'a [usize],
}

impl Graph<'_> {
    fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.col_idx[self.row_ptr[v]..self.row_ptr[v + 1]]
            .iter()
            .copied()
            .filter(move |&w| w != v)
    }
}

struct Workspace {
    /// Subset membership: `member[v] == stamp` while `v` is in the current subset.
    member: Vec<u32>,
    stamp: u32,
    level: Vec<u32>,
    visited: Vec<u32>,
    visit_stamp: u32,
}

impl Workspace {
    fn mark_subset(&mut self, nodes: &[usize]) -> u32 {
        self.stamp += 1;
        for &v in nodes {
            self.member[v] = self.stamp;
        }
        self.stamp
    }

    /// BFS restricted to the current subset; returns vertices grouped by level.
    fn bfs(&mut self, g: &Graph, root: usize, stamp: u32) -> Vec<Vec<usize>> {
        self.visit_stamp += 1;
        let vs = self.visit_stamp;
        let mut levels = vec![vec![root]];
        self.visited[root] = vs;
        self.level[root] = 0;
        loop {
            let depth = levels.len() as u32;
            let mut next = Vec::new();
            for &v in levels.last().unwrap() {
                for w in g.neighbours(v) {
                    if self.member[w] == stamp && self.visited[w] != vs {
                        self.visited[w] = vs;
                        self.level[w] = depth;
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        levels
    }
}

/// Returns an elimination order: `perm[k]` is the vertex eliminated `k`-th.
pub fn nested_dissection(a: &CsrMatrix) -> Vec<usize> {
    let n = a.nrows();
    let g = Graph {
        row_ptr: a.row_ptr(),
        col_idx: a.col_idx(),
    };
    let mut ws = Workspace {
        member: vec![0; n],
        stamp: 0,
        level: vec![0; n],
        visited: vec![0; n],
        visit_stamp: 0,
    };
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![Task::Order((0..n).collect())];
    while let Some(task) = stack.pop() {
        let nodes = match task {
            Task::Emit(sep) => {
                order.extend(sep);
                continue;
            }
            Task::Order(nodes) => nodes,
        };
        if nodes.len() <= LEAF_SIZE {
            order.extend(nodes);
            continue;
        }
        let stamp = ws.mark_subset(&nodes);

        // Split into connected components first.
        let first = ws.bfs(&g, nodes[0], stamp);
        let reached: usize = first.iter().map(Vec::len).sum();
        if reached < nodes.len() {
            let vs = ws.visit_stamp;
            let rest: Vec<usize> = nodes.iter().copied().filter(|&v| ws.visited[v] != vs).collect();
            let component: Vec<usize> = first.into_iter().flatten().collect();
            stack.push(Task::Order(rest));
            stack.push(Task::Order(component));
            continue;
        }

        // Pseudo-peripheral root: restart from the farthest vertex of minimal degree.
        let mut levels = first;
        for _ in 0..3 {
            let last = levels.last().unwrap();
            let candidate = *last
                .iter()
                .min_by_key(|&&v| g.neighbours(v).filter(|&w| ws.member[w] == stamp).count())
                .unwrap();
            let trial = ws.bfs(&g, candidate, stamp);
            let deeper = trial.len() > levels.len();
            levels = trial;
            if !deeper {
                break;
            }
        }

        if levels.len() < 3 {
            order.extend(nodes);
            continue;
        }
        let half = nodes.len() / 2;
        let mut acc = 0;
        let mut mid = 1;
        for (i, lv) in levels.iter().enumerate() {
            acc += lv.len();
            if acc >= half {
                mid = i.clamp(1, levels.len() - 2);
                break;
            }
        }
        // Only vertices of the middle level that touch the next level need to
        // be in the separator; the others join the near part.
        let mid_level = mid as u32;
        let mut separator = Vec::new();
        let mut near: Vec<usize> = levels[..mid].iter().flatten().copied().collect();
        for &v in &levels[mid] {
            let touches_far = g
                .neighbours(v)
                .any(|w| ws.member[w] == stamp && ws.level[w] == mid_level + 1);
            if touches_far {
                separator.push(v);
            } else {
                near.push(v);
            }
        }
        let far: Vec<usize> = levels[mid + 1..].iter().flatten().copied().collect();
        stack.push(Task::Emit(separator));
        stack.push(Task::Order(far));
        stack.push(Task::Order(near));
    }
    debug_assert_eq!(order.len(), n);
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Triplet;

    fn grid_laplacian(m: usize) -> CsrMatrix {
        let idx = |i: usize, j: usize| j * m + i;
        let mut t = Vec::new();
        for j in 0..m {
            for i in 0..m {
                t.push(Triplet::new(idx(i, j), idx(i, j), 4.0));
                if i + 1 < m {
                    t.push(Triplet::new(idx(i, j), idx(i + 1, j), -1.0));
                    t.push(Triplet::new(idx(i + 1, j), idx(i, j), -1.0));
                }
                if j + 1 < m {
                    t.push(Triplet::new(idx(i, j), idx(i, j + 1), -1.0));
                    t.push(Triplet::new(idx(i, j + 1), idx(i, j), -1.0));
                }
            }
        }
        CsrMatrix::from_triplets(m * m, m * m, t)
    }

    #[test]
    fn ordering_is_a_permutation() {
        let a = grid_laplacian(37);
        let mut p = nested_dissection(&a);
        p.sort_unstable();
        assert_eq!(p, (0..37 * 37).collect::<Vec<_>>());
    }

    #[test]
    fn disconnected_graph_is_ordered() {
        let n = 300;
        let a = CsrMatrix::identity(n);
        let mut p = nested_dissection(&a);
        p.sort_unstable();
        assert_eq!(p, (0..n).collect::<Vec<_>>());
    }
}
