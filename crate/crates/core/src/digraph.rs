//! The digraph associated with a linearization.
//!
//! Nodes are the monomials; each constraint contributes one arc from its
//! resultant to every operand. Arcs always go from larger to strictly smaller
//! cardinality, so the digraph is acyclic in the directed sense. The
//! undirected version may still contain cycles, and those are what the
//! integrality machinery inspects.

use crate::linearization::Linearization;
use crate::monomial::Monomial;
use std::collections::{BTreeSet, HashMap, VecDeque};

/// Immutable adjacency view of a linearization's digraph.
#[derive(Debug, Clone)]
pub struct LinDigraph {
    nodes: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Arcs as `(resultant, operand)` index pairs, deterministically ordered.
    arcs: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl LinDigraph {
    pub(crate) fn of(lin: &Linearization) -> Self {
        let nodes: Vec<Monomial> = lin.monomials().iter().cloned().collect();
        let index: HashMap<Monomial, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut arcs = Vec::new();
        for c in lin.constraints() {
            let from = index[&c.resultant];
            for op in &c.operands {
                arcs.push((from, index[op]));
            }
        }
        arcs.sort_unstable();
        arcs.dedup();
        let mut out_adj = vec![Vec::new(); nodes.len()];
        let mut in_adj = vec![Vec::new(); nodes.len()];
        for &(a, b) in &arcs {
            out_adj[a].push(b);
            in_adj[b].push(a);
        }
        LinDigraph {
            nodes,
            index,
            arcs,
            out_adj,
            in_adj,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Monomial] {
        &self.nodes
    }

    pub fn contains_node(&self, m: &Monomial) -> bool {
        self.index.contains_key(m)
    }

    pub fn node_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn node(&self, i: usize) -> &Monomial {
        &self.nodes[i]
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Arcs as `(resultant, operand)` monomial pairs in deterministic order.
    pub fn arcs(&self) -> impl Iterator<Item = (&Monomial, &Monomial)> + '_ {
        self.arcs
            .iter()
            .map(|&(a, b)| (&self.nodes[a], &self.nodes[b]))
    }

    pub fn has_arc(&self, from: &Monomial, to: &Monomial) -> bool {
        match (self.index.get(from), self.index.get(to)) {
            (Some(&a), Some(&b)) => self.arcs.binary_search(&(a, b)).is_ok(),
            _ => false,
        }
    }

    /// Number of constraints the monomial appears in as an operand.
    pub fn in_degree(&self, m: &Monomial) -> usize {
        self.index.get(m).map_or(0, |&i| self.in_adj[i].len())
    }

    /// Number of operands of the monomial's constraint (0 for sinks).
    pub fn out_degree(&self, m: &Monomial) -> usize {
        self.index.get(m).map_or(0, |&i| self.out_adj[i].len())
    }

    pub(crate) fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_adj[i]
    }

    pub(crate) fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_adj[i]
    }

    /// All nodes reachable from `from` by directed paths, including the start
    /// nodes themselves. Breadth-first; monomials not present in the digraph
    /// are ignored.
    pub fn successors<'a>(
        &self,
        from: impl IntoIterator<Item = &'a Monomial>,
    ) -> BTreeSet<Monomial> {
        self.reach(from, |i| &self.out_adj[i])
    }

    /// All nodes from which some node of `to` is reachable, including `to`.
    pub fn predecessors<'a>(
        &self,
        to: impl IntoIterator<Item = &'a Monomial>,
    ) -> BTreeSet<Monomial> {
        self.reach(to, |i| &self.in_adj[i])
    }

    fn reach<'a, 's, F>(
        &'s self,
        start: impl IntoIterator<Item = &'a Monomial>,
        adj: F,
    ) -> BTreeSet<Monomial>
    where
        F: Fn(usize) -> &'s [usize],
    {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::new();
        for m in start {
            if let Some(&i) = self.index.get(m) {
                if !seen[i] {
                    seen[i] = true;
                    queue.push_back(i);
                }
            }
        }
        let mut out = BTreeSet::new();
        while let Some(i) = queue.pop_front() {
            out.insert(self.nodes[i].clone());
            for &j in adj(i) {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        out
    }

    /// True when the *undirected* version of the digraph has no cycle,
    /// decided by union-find over the arc list.
    pub fn is_undirected_acyclic(&self) -> bool {
        let mut dsu = Dsu::new(self.nodes.len());
        self.arcs.iter().all(|&(a, b)| dsu.union(a, b))
    }
}

/// Minimal disjoint-set union with path compression, used for undirected
/// cycle detection on arc lists.
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns `false` when both ends were already connected (a cycle).
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearization::Linearization;
    use crate::mono;
    use crate::test_support::running_example;

    #[test]
    fn running_example_has_twenty_arcs() {
        let d = running_example().digraph();
        assert_eq!(d.node_count(), 16);
        assert_eq!(d.arc_count(), 20);
        assert!(!d.is_undirected_acyclic());
    }

    #[test]
    fn standard_linearization_arcs() {
        let lin = Linearization::standard(3, [mono![1, 2, 3]]).unwrap();
        let d = lin.digraph();
        assert_eq!(d.arc_count(), 3);
        for i in 1..=3 {
            assert!(d.has_arc(&mono![1, 2, 3], &Monomial::singleton(i)));
        }
        assert!(d.is_undirected_acyclic());
    }

    #[test]
    fn empty_constraint_set_has_no_arcs() {
        let lin = Linearization::new(2, [], []);
        assert_eq!(lin.digraph().arc_count(), 0);
    }

    #[test]
    fn successor_sets() {
        let d = running_example().digraph();
        let reach = d.successors([&mono![3, 4, 5]]);
        let expected: BTreeSet<Monomial> =
            [mono![3, 4, 5], mono![3, 4], mono![3], mono![4], mono![5]]
                .into_iter()
                .collect();
        assert_eq!(reach, expected);
        assert!(d.successors(std::iter::empty()).is_empty());
        assert_eq!(
            d.successors([&mono![2]]),
            [mono![2]].into_iter().collect::<BTreeSet<_>>()
        );
    }

    #[test]
    fn degrees() {
        let d = running_example().digraph();
        assert_eq!(d.in_degree(&mono![2, 3]), 2); // operand of {1,2,3} and {2,3,4}
        assert_eq!(d.out_degree(&mono![2, 3]), 2);
        assert_eq!(d.in_degree(&mono![1, 2, 3, 4, 5]), 0);
        assert_eq!(d.out_degree(&mono![6]), 0);
    }
}
