//! Dinic's algorithm on integer capacities.
//!
//! Arcs are explored in insertion order, so identical inputs give identical
//! flows.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    rev: usize,
    cap: i64,
}

#[derive(Debug, Clone)]
pub struct Dinic {
    graph: Vec<Vec<Edge>>,
    /// (node, position in adjacency) of each forward arc, by arc id.
    arcs: Vec<(usize, usize)>,
    original: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    pub fn new(nodes: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); nodes],
            arcs: Vec::new(),
            original: Vec::new(),
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Adds an arc and returns its id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        debug_assert!(cap >= 0);
        let fwd = self.graph[from].len();
        let bwd = self.graph[to].len() + usize::from(from == to);
        self.graph[from].push(Edge { to, rev: bwd, cap });
        self.graph[to].push(Edge {
            to: from,
            rev: fwd,
            cap: 0,
        });
        self.arcs.push((from, fwd));
        self.original.push(cap);
        self.arcs.len() - 1
    }

    /// Flow currently on arc `id`.
    pub fn flow(&self, id: usize) -> i64 {
        let (node, pos) = self.arcs[id];
        self.original[id] - self.graph[node][pos].cap
    }

    pub fn flows(&self) -> Vec<i64> {
        (0..self.arcs.len()).map(|id| self.flow(id)).collect()
    }

    fn bfs(&mut self, source: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for e in &self.graph[v] {
                if e.cap > 0 && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, sink: usize, limit: i64) -> i64 {
        if v == sink {
            return limit;
        }
        while self.iter[v] < self.graph[v].len() {
            let i = self.iter[v];
            let Edge { to, rev, cap } = self.graph[v][i];
            if cap > 0 && self.level[v] < self.level[to] {
                let pushed = self.dfs(to, sink, limit.min(cap));
                if pushed > 0 {
                    self.graph[v][i].cap -= pushed;
                    self.graph[to][rev].cap += pushed;
                    return pushed;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    /// Runs to completion and returns the flow value.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> i64 {
        let mut total = 0;
        loop {
            self.bfs(source);
            if self.level[sink] < 0 {
                return total;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(source, sink, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }
}
