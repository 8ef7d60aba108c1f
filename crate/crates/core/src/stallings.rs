//! Stallings subgroup graphs for finitely generated subgroups of free groups.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::words::{Generator, Letter, Word};

/// A folded, trimmed core graph with basepoint 0 and vertices numbered in
/// breadth-first order (letters explored in canonical order), which makes
/// equal subgroups produce identical graphs.
#[derive(Clone, PartialEq, Eq)]
pub struct SubgroupGraph {
    vertices: usize,
    /// `(u, g, v)`: an edge `u -> v` reading `g`.
    edges: Vec<(usize, Generator, usize)>,
    adj: Vec<BTreeMap<Letter, usize>>,
    ambient: BTreeSet<Generator>,
}

struct Folder {
    parent: Vec<usize>,
    adj: Vec<BTreeMap<Letter, usize>>,
}

impl Folder {
    fn new() -> Self {
        Folder {
            parent: vec![0],
            adj: vec![BTreeMap::new()],
        }
    }

    fn vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Adds an edge and performs every fold it triggers.
    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        let mut queue = VecDeque::from([(u, l, v)]);
        while let Some((u, l, v)) = queue.pop_front() {
            let (u, v) = (self.find(u), self.find(v));
            match self.adj[u].get(&l).copied() {
                Some(w) => {
                    let w = self.find(w);
                    if w != v {
                        let (keep, gone) = if w < v { (w, v) } else { (v, w) };
                        self.parent[gone] = keep;
                        let moved = std::mem::take(&mut self.adj[gone]);
                        queue.extend(moved.into_iter().map(|(l, t)| (keep, l, t)));
                        // the edge being added is now a duplicate; re-queue to
                        // refresh both directions against the merged vertex
                        queue.push_back((u, l, keep));
                    }
                }
                None => {
                    let inv = l.inv();
                    match self.adj[v].get(&inv).copied() {
                        Some(x) if self.find(x) != u => {
                            let x = self.find(x);
                            let (keep, gone) = if x < u { (x, u) } else { (u, x) };
                            self.parent[gone] = keep;
                            let moved = std::mem::take(&mut self.adj[gone]);
                            queue.extend(moved.into_iter().map(|(l, t)| (keep, l, t)));
                            queue.push_back((keep, l, v));
                        }
                        _ => {
                            self.adj[u].insert(l.clone(), v);
                            self.adj[v].insert(inv, u);
                        }
                    }
                }
            }
        }
    }

    fn edges(&mut self) -> BTreeSet<(usize, Generator, usize)> {
        let mut out = BTreeSet::new();
        for u in 0..self.adj.len() {
            if self.find(u) != u {
                continue;
            }
            let entries: Vec<(Letter, usize)> =
                self.adj[u].iter().map(|(l, v)| (l.clone(), *v)).collect();
            for (l, v) in entries {
                let v = self.find(v);
                if l.inverse {
                    out.insert((v, l.gen, u));
                } else {
                    out.insert((u, l.gen, v));
                }
            }
        }
        out
    }
}

impl SubgroupGraph {
    /// Wedge of loops at the basepoint, folded and trimmed.
    pub fn build(generators: &[Word], ambient: &BTreeSet<Generator>) -> SubgroupGraph {
        let mut f = Folder::new();
        for w in generators {
            let w = w.clone().free_reduce();
            if w.is_empty() {
                continue;
            }
            let mut cur = 0;
            let n = w.len();
            for (i, l) in w.letters().iter().enumerate() {
                let next = if i + 1 == n { 0 } else { f.vertex() };
                f.add_edge(cur, l.clone(), next);
                cur = next;
            }
        }
        let edges = f.edges();
        Self::from_edges(0, edges.into_iter().collect(), ambient.clone())
    }

    /// Trims and relabels a folded edge list rooted at `base`.
    fn from_edges(
        base: usize,
        edges: Vec<(usize, Generator, usize)>,
        ambient: BTreeSet<Generator>,
    ) -> SubgroupGraph {
        let mut edges: BTreeSet<(usize, Generator, usize)> = edges.into_iter().collect();
        // trim degree-1 vertices other than the base
        loop {
            let mut degree: HashMap<usize, usize> = HashMap::new();
            for (u, _, v) in &edges {
                *degree.entry(*u).or_default() += 1;
                *degree.entry(*v).or_default() += 1;
            }
            let leaves: BTreeSet<usize> = degree
                .into_iter()
                .filter(|(v, d)| *d == 1 && *v != base)
                .map(|(v, _)| v)
                .collect();
            if leaves.is_empty() {
                break;
            }
            edges.retain(|(u, _, v)| !leaves.contains(u) && !leaves.contains(v));
        }
        let mut adj: HashMap<usize, BTreeMap<Letter, usize>> = HashMap::new();
        for (u, g, v) in &edges {
            adj.entry(*u).or_default().insert(g.letter(), *v);
            adj.entry(*v).or_default().insert(g.inv_letter(), *u);
        }
        // breadth-first relabelling
        let mut label: HashMap<usize, usize> = HashMap::from([(base, 0)]);
        let mut order = vec![base];
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            if let Some(nbrs) = adj.get(&u) {
                for v in nbrs.values() {
                    if !label.contains_key(v) {
                        label.insert(*v, order.len());
                        order.push(*v);
                    }
                }
            }
        }
        let vertices = order.len();
        let mut new_edges: Vec<(usize, Generator, usize)> = edges
            .iter()
            .filter(|(u, _, _)| label.contains_key(u))
            .map(|(u, g, v)| (label[u], g.clone(), label[v]))
            .collect();
        new_edges.sort();
        let mut new_adj = vec![BTreeMap::new(); vertices];
        for (u, g, v) in &new_edges {
            new_adj[*u].insert(g.letter(), *v);
            new_adj[*v].insert(g.inv_letter(), *u);
        }
        SubgroupGraph {
            vertices,
            edges: new_edges,
            adj: new_adj,
            ambient,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, Generator, usize)] {
        &self.edges
    }

    pub fn ambient(&self) -> &BTreeSet<Generator> {
        &self.ambient
    }

    /// No vertex has two outgoing or two incoming edges with one label.
    pub fn is_folded(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|(u, g, v)| {
            seen.insert((*u, g.letter())) && seen.insert((*v, g.inv_letter()))
        })
    }

    /// Whether `w` reads a closed path at the basepoint.
    pub fn member_free(&self, w: &Word) -> bool {
        let w = w.clone().free_reduce();
        let mut cur = 0;
        for l in w.letters() {
            match self.adj[cur].get(l) {
                Some(v) => cur = *v,
                None => return false,
            }
        }
        cur == 0
    }

    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    /// Free basis read off the chords of a breadth-first spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        let mut path: Vec<Option<Word>> = vec![None; self.vertices];
        path[0] = Some(Word::empty());
        let mut tree: BTreeSet<(usize, Generator, usize)> = BTreeSet::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for (l, v) in &self.adj[u] {
                if path[*v].is_none() {
                    let p = path[u].as_ref().expect("visited").mul(&Word::letter(l.clone()));
                    path[*v] = Some(p);
                    tree.insert(if l.inverse {
                        (*v, l.gen.clone(), u)
                    } else {
                        (u, l.gen.clone(), *v)
                    });
                    queue.push_back(*v);
                }
            }
        }
        self.edges
            .iter()
            .filter(|e| !tree.contains(*e))
            .map(|(u, g, v)| {
                let pu = path[*u].as_ref().expect("connected");
                let pv = path[*v].as_ref().expect("connected");
                pu.mul(&Word::gen(g)).mul(&pv.inverse())
            })
            .collect()
    }

    /// Core graph of the intersection of the two subgroups.
    pub fn intersect(&self, other: &SubgroupGraph) -> SubgroupGraph {
        let mut index: HashMap<(usize, usize), usize> = HashMap::from([((0, 0), 0)]);
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        let mut edges = Vec::new();
        while let Some((p, q)) = queue.pop_front() {
            let from = index[&(p, q)];
            for (l, p2) in &self.adj[p] {
                if let Some(q2) = other.adj[q].get(l) {
                    let key = (*p2, *q2);
                    let to = match index.get(&key) {
                        Some(t) => *t,
                        None => {
                            let t = index.len();
                            index.insert(key, t);
                            queue.push_back(key);
                            t
                        }
                    };
                    if !l.inverse {
                        edges.push((from, l.gen.clone(), to));
                    }
                }
            }
        }
        let ambient = self.ambient.intersection(&other.ambient).cloned().collect();
        Self::from_edges(0, edges, ambient)
    }

    /// Same subgroup (canonical labelling makes this a structural check).
    pub fn same_subgroup(&self, other: &SubgroupGraph) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }

    /// Whether every element of `other` lies in this subgroup.
    pub fn contains_subgroup(&self, other: &SubgroupGraph) -> bool {
        other.basis().iter().all(|b| self.member_free(b))
    }

    /// Text dump: one line per edge.
    pub fn dump(&self) -> String {
        let mut out = format!("vertices {} base 0 rank {}\n", self.vertices, self.rank());
        for (u, g, v) in &self.edges {
            out.push_str(&format!("{u} -{g}-> {v}\n"));
        }
        out
    }
}

impl fmt::Debug for SubgroupGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Root `rho` with every word a power of `rho`, when the words generate a
/// subgroup of rank at most one. The root is normalised so that its
/// cyclically reduced core starts with a positive letter.
pub fn is_cyclic_collection(words: &[Word]) -> Option<Word> {
    let ambient = words.iter().flat_map(|w| w.support()).collect();
    let g = SubgroupGraph::build(words, &ambient);
    match g.rank() {
        0 => Some(Word::empty()),
        1 => {
            let rho = g.basis().remove(0);
            let (core, _) = rho.cyclic_reduce();
            Some(if core.letters()[0].inverse {
                rho.inverse()
            } else {
                rho
            })
        }
        _ => None,
    }
}
