//! Covers of the torus with two branch points built from finite graphs.
//!
//! Each vertex `v` of degree `d_v` contributes a block of `d_v` sheets on
//! which `ρ(a)` is a single `d_v`-cycle and `ρ(b)` is trivial. Every edge
//! joins one free sheet of each endpoint block, and `ρ(c_1) = ρ(c_2)` is the
//! product of these transpositions. Vertices and edges are first put in a
//! canonical order so isomorphic graphs give identical monodromy.

use serde::{Deserialize, Serialize};

use crate::cover::MonodromyCover;
use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverGraph {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    pub vertices: usize,
    /// Multi-edges are allowed; a loop `[v, v]` adds 2 to the degree of `v`.
    pub edges: Vec<[usize; 2]>,
}

impl CoverGraph {
    pub fn new(vertices: usize, edges: Vec<[usize; 2]>) -> Result<Self> {
        let g = CoverGraph {
            format: None,
            vertices,
            edges,
        };
        g.check()?;
        Ok(g)
    }

    pub fn path(vertices: usize) -> Result<Self> {
        Self::new(vertices, (1..vertices).map(|v| [v - 1, v]).collect())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices];
        for &[u, v] in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn check(&self) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::InvalidGraph("edge set is empty".into()));
        }
        if self.vertices > 2 * self.edges.len() {
            return Err(Error::InvalidGraph("graph has an isolated vertex and is not connected".into()));
        }
        if let Some(&[u, v]) = self.edges.iter().find(|e| e.iter().any(|&x| x >= self.vertices)) {
            return Err(Error::InvalidGraph(format!(
                "edge [{u}, {v}] uses a vertex outside 0..{}",
                self.vertices
            )));
        }
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &[u, v] in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        if (1..self.vertices).any(|v| find(&mut parent, v) != root) {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(())
    }

    /// Edge multiset as sorted pairs, after relabeling vertex `v` to `pos[v]`.
    fn relabeled_edges(&self, pos: &[usize]) -> Vec<[usize; 2]> {
        let mut e: Vec<[usize; 2]> = self
            .edges
            .iter()
            .map(|&[u, v]| {
                let (a, b) = (pos[u], pos[v]);
                [a.min(b), a.max(b)]
            })
            .collect();
        e.sort_unstable();
        e
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for &[u, v] in &self.edges {
            adj[u].push(v);
            if u != v {
                adj[v].push(u);
            }
        }
        adj.into_iter()
            .map(|mut ns: Vec<usize>| {
                ns.sort_unstable();
                let mut out: Vec<(usize, usize)> = Vec::new();
                for x in ns {
                    match out.last_mut() {
                        Some((y, m)) if *y == x => *m += 1,
                        _ => out.push((x, 1)),
                    }
                }
                out
            })
            .collect()
    }

    /// Isomorphism-invariant relabeling: the edge list it produces is the
    /// least one over all labelings reached by refinement and individualization.
    pub fn canonical_labeling(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut best: Option<(Vec<[usize; 2]>, Vec<usize>)> = None;
        let start = vec![(0..self.vertices).collect::<Vec<_>>()];
        self.search(&adj, start, &mut best);
        best.map(|(_, pos)| pos).unwrap_or_default()
    }

    fn search(&self, adj: &[Vec<(usize, usize)>], cells: Vec<Vec<usize>>, best: &mut Option<(Vec<[usize; 2]>, Vec<usize>)>) {
        let cells = refine(adj, cells);
        match cells.iter().position(|c| c.len() > 1) {
            None => {
                let mut pos = vec![0; self.vertices];
                for (i, c) in cells.iter().enumerate() {
                    pos[c[0]] = i;
                }
                let cert = self.relabeled_edges(&pos);
                if best.as_ref().is_none_or(|(b, _)| cert < *b) {
                    *best = Some((cert, pos));
                }
            }
            Some(i) => {
                for &v in &cells[i] {
                    let mut next = cells[..i].to_vec();
                    next.push(vec![v]);
                    next.push(cells[i].iter().copied().filter(|&x| x != v).collect());
                    next.extend_from_slice(&cells[i + 1..]);
                    self.search(adj, next, best);
                }
            }
        }
    }

    /// The graph with vertices and edges in canonical order.
    pub fn canonical(&self) -> CoverGraph {
        let pos = self.canonical_labeling();
        CoverGraph {
            format: self.format,
            vertices: self.vertices,
            edges: self.relabeled_edges(&pos),
        }
    }
}

/// Splits cells by the multiset of (neighbor cell, multiplicity) until stable.
fn refine(adj: &[Vec<(usize, usize)>], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let mut cell_of = vec![0; adj.len()];
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = i;
            }
        }
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            let mut keyed: Vec<(Vec<(usize, usize)>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut sig: Vec<(usize, usize)> = adj[v].iter().map(|&(u, m)| (cell_of[u], m)).collect();
                    sig.sort_unstable();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut group: Vec<usize> = Vec::new();
            for (idx, (sig, v)) in keyed.iter().enumerate() {
                if idx > 0 && keyed[idx - 1].0 != *sig {
                    next.push(std::mem::take(&mut group));
                }
                group.push(*v);
            }
            next.push(group);
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

pub fn build_cover(graph: &CoverGraph) -> Result<MonodromyCover> {
    graph.check()?;
    let g = graph.canonical();
    let degrees = g.degrees();
    let n: usize = degrees.iter().sum();
    let mut offset = vec![0; g.vertices];
    for v in 1..g.vertices {
        offset[v] = offset[v - 1] + degrees[v - 1];
    }

    let mut a = vec![0; n];
    for v in 0..g.vertices {
        let d = degrees[v];
        for s in 0..d {
            a[offset[v] + s] = offset[v] + (s + 1) % d;
        }
    }

    let mut next_free = offset.clone();
    let mut c = vec![0; n];
    for &[u, v] in &g.edges {
        let su = next_free[u];
        next_free[u] += 1;
        let sv = next_free[v];
        next_free[v] += 1;
        c[su] = sv;
        c[sv] = su;
    }

    let a = Perm::new(a)?;
    let c = Perm::new(c)?;
    MonodromyCover::from_parts(1, n, &[a], &[Perm::identity(n)], &[c.clone(), c])
}

/// The path on four vertices: a 6-fold cover of the twice-branched torus by
/// a closed surface of genus 4.
pub fn path4_graph() -> CoverGraph {
    CoverGraph::path(4).expect("path graph is connected")
}

pub fn path4_example() -> MonodromyCover {
    build_cover(&path4_graph()).expect("path graph yields a valid cover")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::canonicalize;
    use crate::perm::orbits;
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn check_postconditions(g: &CoverGraph) {
        let cover = build_cover(g).unwrap();
        let e = g.edges.len();
        assert_eq!(cover.degree(), 2 * e);
        let sig = cover.signature();
        assert_eq!((sig.genus, sig.branch_count), (1, 2));
        for i in 1..=2 {
            let c = cover.c_image(i);
            assert!(c.compose(c).unwrap().is_identity());
            assert!(c.fixed_points() == 0);
            assert_eq!(cover.fiber(i).unwrap().preimage_count, e);
        }
        assert_eq!(cover.euler_characteristic_total(), -2 * e as i64);
        assert_eq!(cover.total_genus(), e as i64 + 1);
        assert!(cover.has_property_nu());
        let mut orbit_sizes: Vec<usize> = orbits(cover.degree(), &[cover.images()[0].clone()])
            .unwrap()
            .iter()
            .map(Vec::len)
            .collect();
        let mut degrees = g.degrees();
        orbit_sizes.sort_unstable();
        degrees.sort_unstable();
        assert_eq!(orbit_sizes, degrees);
    }

    /// Every connected multigraph (loops allowed) with `e` edges, no isolated vertices.
    fn all_graphs(e: usize) -> Vec<CoverGraph> {
        fn extend(pairs: &[[usize; 2]], from: usize, e: usize, v: usize, acc: &mut Vec<[usize; 2]>, out: &mut Vec<CoverGraph>) {
            if acc.len() == e {
                if let Ok(g) = CoverGraph::new(v, acc.clone()) {
                    out.push(g);
                }
                return;
            }
            for i in from..pairs.len() {
                acc.push(pairs[i]);
                extend(pairs, i, e, v, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        for v in 1..=e + 1 {
            let pairs: Vec<[usize; 2]> = (0..v).flat_map(|a| (a..v).map(move |b| [a, b])).collect();
            extend(&pairs, 0, e, v, &mut Vec::new(), &mut out);
        }
        out
    }

    #[test]
    fn postconditions_hold_for_small_graphs() {
        let mut count = 0;
        for e in 1..=5 {
            for g in all_graphs(e) {
                check_postconditions(&g);
                count += 1;
            }
        }
        assert!(count > 1000);
    }

    #[test]
    fn graph_examples() {
        let k2 = build_cover(&CoverGraph::new(2, vec![[0, 1]]).unwrap()).unwrap();
        assert_eq!(k2.degree(), 2);
        assert_eq!(k2.total_genus(), 2);
        assert_eq!(k2.c_image(1), &Perm::transposition(2, 0, 1).unwrap());
        assert_eq!(k2.c_image(2), &Perm::transposition(2, 0, 1).unwrap());

        let tri = CoverGraph::new(3, vec![[0, 1], [1, 2], [2, 0]]).unwrap();
        check_postconditions(&tri);
        let cover = build_cover(&tri).unwrap();
        assert_eq!(cover.degree(), 6);
        assert_eq!(cover.total_genus(), 4);

        let path4 = path4_example();
        assert_eq!(path4.degree(), 6);
        assert_eq!(path4.total_genus(), 4);
        assert!(path4.has_property_nu());
        for i in 1..=2 {
            let f = path4.fiber(i).unwrap();
            assert_eq!(f.preimage_count, 3);
            assert_eq!(f.ramification_numbers, vec![2, 2, 2]);
        }

        let star = build_cover(&CoverGraph::new(4, vec![[0, 1], [0, 2], [0, 3]]).unwrap()).unwrap();
        assert!(star.deck_group_order() < star.degree());
        assert!(!star.is_regular());
    }

    #[test]
    fn invalid_graphs_are_rejected() {
        assert!(matches!(CoverGraph::new(2, vec![]), Err(Error::InvalidGraph(_))));
        assert!(matches!(CoverGraph::new(3, vec![[0, 1]]), Err(Error::InvalidGraph(_))));
        assert!(matches!(CoverGraph::new(2, vec![[0, 2]]), Err(Error::InvalidGraph(_))));
        let bad: CoverGraph = serde_json::from_str(r#"{"vertices": 4, "edges": [[0,1],[2,3]]}"#).unwrap();
        assert!(build_cover(&bad).is_err());
        assert!(serde_json::from_str::<CoverGraph>(r#"{"vertices": 2, "edges": [[0]]}"#).is_err());
        let lp = build_cover(&CoverGraph::new(1, vec![[0, 0]]).unwrap()).unwrap();
        assert_eq!(lp.degree(), 2);
    }

    #[test]
    fn isomorphic_graphs_give_identical_covers() {
        let mut rng = StdRng::seed_from_u64(11);
        let samples = [
            CoverGraph::new(5, vec![[0, 1], [1, 2], [1, 3], [3, 4], [2, 2]]).unwrap(),
            CoverGraph::new(4, vec![[0, 1], [0, 1], [1, 2], [2, 3], [3, 0]]).unwrap(),
            CoverGraph::new(6, vec![[0, 1], [0, 2], [0, 3], [3, 4], [4, 5]]).unwrap(),
            CoverGraph::new(5, vec![[0, 1], [1, 2], [2, 3], [3, 4], [4, 0]]).unwrap(),
        ];
        for g in &samples {
            let base = build_cover(g).unwrap();
            let base_class = canonicalize(&base).canonical;
            for _ in 0..20 {
                let mut perm: Vec<usize> = (0..g.vertices).collect();
                perm.shuffle(&mut rng);
                let mut edges: Vec<[usize; 2]> = g
                    .edges
                    .iter()
                    .map(|&[u, v]| if rng.gen_bool(0.5) { [perm[u], perm[v]] } else { [perm[v], perm[u]] })
                    .collect();
                edges.shuffle(&mut rng);
                let h = CoverGraph::new(g.vertices, edges).unwrap();
                let cover = build_cover(&h).unwrap();
                assert_eq!(cover, base);
                assert_eq!(canonicalize(&cover).canonical, base_class);
            }
        }
    }

}
