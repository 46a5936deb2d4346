use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite quiver without oriented cycles. Arrows are `(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidObject("quiver needs at least one vertex".into()));
        }
        for &(s, t) in &arrows {
            if s >= vertices || t >= vertices {
                return Err(Error::InvalidObject(format!("arrow ({s},{t}) out of range")));
            }
        }
        let q = Quiver { vertices, arrows };
        if q.topological_order().is_none() {
            return Err(Error::InvalidObject("quiver has an oriented cycle".into()));
        }
        Ok(q)
    }

    /// `1 -> 2`, written with zero-based vertices `0 -> 1`.
    pub fn a2() -> Self {
        Quiver { vertices: 2, arrows: vec![(0, 1)] }
    }

    /// Equioriented `A_n`.
    pub fn linear(n: usize) -> Self {
        Quiver { vertices: n, arrows: (1..n).map(|i| (i - 1, i)).collect() }
    }

    /// `n` vertices, no arrows.
    pub fn discrete(n: usize) -> Self {
        Quiver { vertices: n, arrows: vec![] }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn opposite(&self) -> Self {
        Quiver { vertices: self.vertices, arrows: self.arrows.iter().map(|&(s, t)| (t, s)).collect() }
    }

    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.vertices];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut ready: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.vertices);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        ready.push(t);
                    }
                }
            }
        }
        (order.len() == self.vertices).then_some(order)
    }

    /// All paths (as arrow index sequences, applied left to right) starting at `v`,
    /// grouped by end vertex. The trivial path is included.
    pub fn paths_from(&self, v: usize) -> Vec<Vec<Vec<usize>>> {
        let mut by_end = vec![Vec::new(); self.vertices];
        let mut stack = vec![(v, Vec::new())];
        while let Some((w, path)) = stack.pop() {
            by_end[w].push(path.clone());
            for (ai, &(s, t)) in self.arrows.iter().enumerate() {
                if s == w {
                    let mut p = path.clone();
                    p.push(ai);
                    stack.push((t, p));
                }
            }
        }
        for paths in &mut by_end {
            paths.sort();
        }
        by_end
    }
}
