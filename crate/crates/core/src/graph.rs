//! Adjacency-list graph routines shared by the overlap graph and the
//! Hamiltonian-walk checks: strongly connected components and exact
//! covering-walk search over (covered set, current vertex) states.

use std::collections::HashMap;

use crate::error::{Error, Progress, Result};

/// Tarjan's algorithm, iterative. Components come out in reverse
/// topological order (sinks first).
pub(crate) fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next_index = 0;
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }
    components
}

/// True iff some walk (possibly of length 0) visits every vertex, i.e. the
/// condensation is a path.
pub(crate) fn has_covering_walk(adj: &[Vec<usize>]) -> bool {
    if adj.is_empty() {
        return false;
    }
    let comps = strongly_connected_components(adj);
    let mut comp_of = vec![0; adj.len()];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    // comps[c + 1] must reach comps[c] directly.
    (0..comps.len() - 1).all(|c| {
        comps[c + 1]
            .iter()
            .any(|&v| adj[v].iter().any(|&w| comp_of[w] == c))
    })
}

/// True iff every vertex lies on one closed walk of length at least one.
pub(crate) fn has_closed_covering_walk(adj: &[Vec<usize>]) -> bool {
    if adj.is_empty() {
        return false;
    }
    let comps = strongly_connected_components(adj);
    comps.len() == 1 && adj.iter().any(|s| !s.is_empty())
}

/// Visited/parent table over (covered mask, vertex) states.
enum Parents {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u64>),
}

const DENSE_LIMIT: usize = 18;
const NONE: u32 = u32::MAX;

struct StateSpace {
    vertices: usize,
    parents: Parents,
    visited: u64,
    max_states: u64,
}

impl StateSpace {
    fn new(vertices: usize, max_states: u64) -> Result<StateSpace> {
        if vertices > 56 {
            return Err(Error::OutOfRange {
                what: "covering-walk vertex count",
                value: vertices,
                allowed: "at most 56",
            });
        }
        let parents = if vertices <= DENSE_LIMIT {
            Parents::Dense(vec![NONE; (1usize << vertices) * vertices])
        } else {
            Parents::Sparse(HashMap::new())
        };
        Ok(StateSpace {
            vertices,
            parents,
            visited: 0,
            max_states,
        })
    }

    fn key(&self, mask: u64, v: usize) -> u64 {
        mask * self.vertices as u64 + v as u64
    }

    fn split(&self, key: u64) -> (u64, usize) {
        (
            key / self.vertices as u64,
            (key % self.vertices as u64) as usize,
        )
    }

    /// Records `key` with `parent`; false if it was already seen.
    fn visit(&mut self, key: u64, parent: u64) -> Result<bool> {
        let fresh = match &mut self.parents {
            Parents::Dense(table) => {
                let slot = &mut table[key as usize];
                if *slot == NONE {
                    *slot = parent as u32;
                    true
                } else {
                    false
                }
            }
            Parents::Sparse(map) => match map.entry(key) {
                std::collections::hash_map::Entry::Occupied(_) => false,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(parent);
                    true
                }
            },
        };
        if fresh {
            self.visited += 1;
            if self.visited > self.max_states {
                return Err(Error::BudgetExhausted {
                    what: format!("covering-walk search exceeded {} states", self.max_states),
                    progress: Progress {
                        states_visited: self.visited,
                        ..Progress::default()
                    },
                });
            }
        }
        Ok(fresh)
    }

    fn parent(&self, key: u64) -> u64 {
        match &self.parents {
            Parents::Dense(table) => table[key as usize] as u64,
            Parents::Sparse(map) => map[&key],
        }
    }

    /// Vertex sequence from a root state to `key`.
    fn path_to(&self, mut key: u64) -> Vec<usize> {
        let mut path = vec![self.split(key).1];
        loop {
            let parent = self.parent(key);
            if parent == key {
                break;
            }
            key = parent;
            path.push(self.split(key).1);
        }
        path.reverse();
        path
    }
}

fn full_mask(vertices: usize) -> u64 {
    (1u64 << vertices) - 1
}

/// Shortest walk visiting every vertex. Among shortest walks, returns the
/// first in the order (start vertex, then successor-list order at each
/// step); for the overlap graph that is the lexicographically least word.
pub(crate) fn shortest_covering_walk(
    adj: &[Vec<usize>],
    max_states: u64,
) -> Result<Option<Vec<usize>>> {
    let m = adj.len();
    if m == 0 {
        return Ok(None);
    }
    let full = full_mask(m);
    let mut space = StateSpace::new(m, max_states)?;
    let mut frontier = Vec::with_capacity(m);
    for v in 0..m {
        let key = space.key(1 << v, v);
        space.visit(key, key)?;
        if 1u64 << v == full {
            return Ok(Some(vec![v]));
        }
        frontier.push(key);
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &key in &frontier {
            let (mask, v) = space.split(key);
            for &w in &adj[v] {
                let nmask = mask | 1 << w;
                let nkey = space.key(nmask, w);
                if space.visit(nkey, key)? {
                    if nmask == full {
                        return Ok(Some(space.path_to(nkey)));
                    }
                    next.push(nkey);
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// Shortest closed walk of at least one edge that starts and ends at
/// `start` and visits every vertex. The returned sequence repeats `start`
/// at the end. Walks longer than `max_len` edges are not explored.
pub(crate) fn shortest_closed_covering_walk(
    adj: &[Vec<usize>],
    start: usize,
    max_len: Option<usize>,
    max_states: u64,
) -> Result<Option<Vec<usize>>> {
    let m = adj.len();
    let full = full_mask(m);
    let mut space = StateSpace::new(m, max_states)?;
    let root = space.key(1 << start, start);
    space.visit(root, root)?;
    let mut frontier = vec![root];
    let mut depth = 0;
    while !frontier.is_empty() {
        if max_len.is_some_and(|limit| depth + 1 > limit) {
            break;
        }
        let mut next = Vec::new();
        for &key in &frontier {
            let (mask, v) = space.split(key);
            for &w in &adj[v] {
                let nmask = mask | 1 << w;
                if w == start && nmask == full {
                    let mut path = space.path_to(key);
                    path.push(start);
                    return Ok(Some(path));
                }
                let nkey = space.key(nmask, w);
                if space.visit(nkey, key)? {
                    next.push(nkey);
                }
            }
        }
        frontier = next;
        depth += 1;
    }
    Ok(None)
}

/// Unweighted shortest path from `from` to `to` (vertex sequence, both
/// ends included).
pub(crate) fn shortest_path(adj: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[from] = from;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in &adj[v] {
            if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}
