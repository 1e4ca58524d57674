//! Small directed-graph toolkit shared by the block graph, the product graph
//! and the solvers: strongly connected components, breadth-first trees and
//! Eulerian circuits.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Directed multigraph on vertices `0..n` with edges stored as `(tail, head)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (id, &(t, h)) in edges.iter().enumerate() {
            out[t].push(id);
            inc[h].push(id);
        }
        Digraph { n, edges, out, inc }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// Edge ids leaving `v`, in insertion order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// Breadth-first out-tree from `root`: `parent[v]` is the edge id used to
    /// reach `v` (None for the root and for unreachable vertices), plus the
    /// visit order.
    pub fn bfs_tree(&self, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut queue = VecDeque::new();
        seen[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &e in &self.out[v] {
                let h = self.edges[e].1;
                if !seen[h] {
                    seen[h] = true;
                    parent[h] = Some(e);
                    queue.push_back(h);
                }
            }
        }
        (parent, order)
    }

    /// Breadth-first in-tree towards `root`: `next[v]` is the first edge of a
    /// shortest path from `v` to `root`.
    pub fn bfs_in_tree(&self, root: usize) -> Vec<Option<usize>> {
        let mut next = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        seen[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &e in &self.inc[v] {
                let t = self.edges[e].0;
                if !seen[t] {
                    seen[t] = true;
                    next[t] = Some(e);
                    queue.push_back(t);
                }
            }
        }
        next
    }

    pub fn reachable_from(&self, root: usize) -> Vec<bool> {
        let (_, order) = self.bfs_tree(root);
        let mut seen = vec![false; self.n];
        for v in order {
            seen[v] = true;
        }
        seen
    }

    /// Edge ids of a shortest path from `from` to `to`, if one exists.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let (parent, _) = self.bfs_tree(from);
        if from != to && parent[to].is_none() {
            return None;
        }
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            let e = parent[v]?;
            path.push(e);
            v = self.edges[e].0;
        }
        path.reverse();
        Some(path)
    }

    /// Strongly connected components (Tarjan, iterative). Components are
    /// returned with their vertices sorted, ordered by smallest vertex.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; self.n];
        let mut low = vec![0usize; self.n];
        let mut on_stack = vec![false; self.n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        for start in 0..self.n {
            if index[start] != UNSEEN {
                continue;
            }
            // (vertex, next out-edge position)
            let mut call = vec![(start, 0usize)];
            index[start] = counter;
            low[start] = counter;
            counter += 1;
            stack.push(start);
            on_stack[start] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < self.out[v].len() {
                    let w = self.edges[self.out[v][*pos]].1;
                    *pos += 1;
                    if index[w] == UNSEEN {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// `None` when strongly connected, otherwise a pair `(from, to)` with
    /// `to` unreachable from `from`.
    pub fn unreachable_pair(&self) -> Option<(usize, usize)> {
        if self.n == 0 {
            return None;
        }
        let fwd = self.reachable_from(0);
        if let Some(v) = fwd.iter().position(|&r| !r) {
            return Some((0, v));
        }
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.inc[v] {
                let t = self.edges[e].0;
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen.iter().position(|&r| !r).map(|v| (v, 0))
    }

    /// Eulerian circuit through a multigraph where edge `e` is used
    /// `mult[e]` times (Hierholzer). The multiplicities must form a
    /// circulation whose support is connected; returns the edge sequence
    /// starting at `start`, or `None` if that fails.
    pub fn euler_circuit(&self, mult: &[u64], start: usize) -> Option<Vec<usize>> {
        let total: u64 = mult.iter().sum();
        let mut left = mult.to_vec();
        let mut cursor = vec![0usize; self.n];
        let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
        let mut circuit = Vec::new();
        while let Some(&(v, via)) = stack.last() {
            let outs = &self.out[v];
            while cursor[v] < outs.len() && left[outs[cursor[v]]] == 0 {
                cursor[v] += 1;
            }
            if cursor[v] < outs.len() {
                let e = outs[cursor[v]];
                left[e] -= 1;
                stack.push((self.edges[e].1, Some(e)));
            } else {
                stack.pop();
                if let Some(e) = via {
                    circuit.push(e);
                }
            }
        }
        circuit.reverse();
        if circuit.len() as u64 != total {
            return None;
        }
        let mut at = start;
        for &e in &circuit {
            if self.edges[e].0 != at {
                return None;
            }
            at = self.edges[e].1;
        }
        (at == start).then_some(circuit)
    }
}
