//! The monomial intersection property and its two defining conditions.
//!
//! A target family admits an integral simple linearization exactly when
//! neither condition fires:
//!
//! * condition (A): three pairwise different targets with a common element
//!   where the third target's overlap with the union of the first two
//!   properly exceeds its overlap with each one alone;
//! * condition (B): a genuinely cyclic intersection pattern among at least
//!   three pairwise different targets — a pairwise-intersecting triple with
//!   an empty common core, or a chordless cycle of length four or more in
//!   the target intersection graph. A bare triangle is not enough: three
//!   targets through one shared element still admit an acyclic
//!   linearization.
//!
//! The index-based variants (A') and (B') are equivalent to (A) or (B) as a
//! disjunction; both are implemented so the equivalence can be tested
//! exhaustively.

use crate::monomial::Monomial;
use serde::Serialize;
use std::collections::BTreeSet;

/// A witness for one of the four conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConditionWitness {
    /// Ordered triple establishing condition (A); `m3` plays the
    /// distinguished role.
    Triple {
        m1: Monomial,
        m2: Monomial,
        m3: Monomial,
    },
    /// Targets in cyclic order establishing condition (B).
    MonomialCycle { monomials: Vec<Monomial> },
    /// Index triple establishing condition (A').
    IndexTriple { i1: u32, i2: u32, i3: u32 },
    /// Target cycle with linking indices establishing condition (B'):
    /// `indices[j]` lies in `monomials[j]` and `monomials[j+1]` and in no
    /// other member of the cycle.
    IndexCycle {
        monomials: Vec<Monomial>,
        indices: Vec<u32>,
    },
}

/// Outcome of a single condition check: whether the condition is satisfied,
/// and a re-verifiable witness when it is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub satisfied: bool,
    pub witness: Option<ConditionWitness>,
}

impl ConditionVerdict {
    fn no() -> Self {
        ConditionVerdict {
            satisfied: false,
            witness: None,
        }
    }

    fn yes(witness: ConditionWitness) -> Self {
        ConditionVerdict {
            satisfied: true,
            witness: Some(witness),
        }
    }
}

/// Which condition refuted the intersection property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolatedCondition {
    A,
    B,
}

/// Verdict of [`has_intersection_property`]: when the property fails, the
/// violated condition and its witness are attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MipVerdict {
    pub holds: bool,
    pub violated: Option<ViolatedCondition>,
    pub witness: Option<ConditionWitness>,
}

fn sorted_targets(targets: &BTreeSet<Monomial>) -> Vec<&Monomial> {
    debug_assert!(
        targets.iter().all(|t| t.len() >= 2),
        "targets must combine at least two variables"
    );
    targets.iter().collect()
}

/// Scans ordered triples in lexicographic order and reports the first one
/// satisfying condition (A).
pub fn check_a(targets: &BTreeSet<Monomial>) -> ConditionVerdict {
    let ts = sorted_targets(targets);
    for m1 in &ts {
        for m2 in &ts {
            if m2 == m1 {
                continue;
            }
            for m3 in &ts {
                if m3 == m1 || m3 == m2 {
                    continue;
                }
                if m1
                    .intersection(m2)
                    .and_then(|m12| m12.intersection(m3))
                    .is_none()
                {
                    continue;
                }
                let with_union = m3
                    .intersection(&m1.union(m2))
                    .expect("triple intersection nonempty");
                let with_m1 = m3.intersection(m1).expect("triple intersection nonempty");
                let with_m2 = m3.intersection(m2).expect("triple intersection nonempty");
                if with_m1.is_proper_subset_of(&with_union)
                    && with_m2.is_proper_subset_of(&with_union)
                {
                    return ConditionVerdict::yes(ConditionWitness::Triple {
                        m1: (*m1).clone(),
                        m2: (*m2).clone(),
                        m3: (*m3).clone(),
                    });
                }
            }
        }
    }
    ConditionVerdict::no()
}

/// Condition (B): a witness of length 3 is a pairwise-intersecting triple
/// whose *common* intersection is empty, and a longer witness is a chordless
/// cycle of length at least 4 in the intersection graph (node per target,
/// edge per nonempty pairwise intersection).
///
/// A bare triangle does not suffice for k = 3: three targets through one
/// shared element (a sunflower like {2,5},{3,5},{4,5}) admit an acyclic,
/// hence integral, linearization, and the index-based condition agrees. An
/// empty common intersection makes the three pairwise intersections
/// pairwise disjoint, which is what forces a cycle into every
/// linearization; for k >= 4 chordlessness already provides that.
pub fn check_b(targets: &BTreeSet<Monomial>) -> ConditionVerdict {
    let ts = sorted_targets(targets);
    let n = ts.len();
    // triples in lexicographic order first: the shortest possible witness
    for i in 0..n {
        for j in i + 1..n {
            if ts[i].intersection(ts[j]).is_none() {
                continue;
            }
            for k in j + 1..n {
                let pairwise =
                    ts[j].intersection(ts[k]).is_some() && ts[i].intersection(ts[k]).is_some();
                let common = ts[i]
                    .intersection(ts[j])
                    .and_then(|ij| ij.intersection(ts[k]));
                if pairwise && common.is_none() {
                    return ConditionVerdict::yes(ConditionWitness::MonomialCycle {
                        monomials: vec![ts[i].clone(), ts[j].clone(), ts[k].clone()],
                    });
                }
            }
        }
    }
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if ts[i].intersection(ts[j]).is_some() {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    match shortest_hole(&adj) {
        Some(cycle) => {
            let monomials: Vec<Monomial> = cycle.iter().map(|&i| ts[i].clone()).collect();
            ConditionVerdict::yes(ConditionWitness::MonomialCycle { monomials })
        }
        None => ConditionVerdict::no(),
    }
}

/// Shortest chordless cycle of length at least 4, if any. For every vertex
/// `v` and non-adjacent neighbor pair `x, y`, a shortest x-y path avoiding
/// the rest of `v`'s closed neighborhood closes an induced cycle through
/// `v`; every hole arises this way from any of its vertices.
fn shortest_hole(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut best: Option<Vec<usize>> = None;
    for v in 0..n {
        for (xi, &x) in adj[v].iter().enumerate() {
            for &y in adj[v].iter().skip(xi + 1) {
                if adj[x].contains(&y) {
                    continue;
                }
                let mut banned = vec![false; n];
                banned[v] = true;
                for &w in &adj[v] {
                    banned[w] = true;
                }
                banned[x] = false;
                banned[y] = false;
                // BFS shortest x-y path in the allowed subgraph
                let mut parent = vec![usize::MAX; n];
                let mut seen = vec![false; n];
                seen[x] = true;
                let mut queue = std::collections::VecDeque::from([x]);
                while let Some(cur) = queue.pop_front() {
                    if cur == y {
                        break;
                    }
                    for &next in &adj[cur] {
                        if !banned[next] && !seen[next] {
                            seen[next] = true;
                            parent[next] = cur;
                            queue.push_back(next);
                        }
                    }
                }
                if !seen[y] {
                    continue;
                }
                let mut path = vec![y];
                let mut cur = y;
                while cur != x {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.push(v);
                if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                    best = Some(path);
                }
            }
        }
    }
    best.map(canonical_rotation)
}

/// Condition (A'): an index triple whose restrictions of the targets contain
/// `{i1,i3}`, `{i2,i3}` and `{i1,i2,i3}`. First hit in lexicographic order
/// of `(i1, i2, i3)`.
pub fn check_a_prime(targets: &BTreeSet<Monomial>, n: u32) -> ConditionVerdict {
    let ts = sorted_targets(targets);
    for i1 in 1..=n {
        for i2 in 1..=n {
            if i2 == i1 {
                continue;
            }
            for i3 in 1..=n {
                if i3 == i1 || i3 == i2 {
                    continue;
                }
                let triple = Monomial::new([i1, i2, i3]).expect("three distinct indices");
                let restrictions: BTreeSet<Monomial> =
                    ts.iter().filter_map(|t| t.intersection(&triple)).collect();
                let need = [
                    Monomial::new([i1, i3]).unwrap(),
                    Monomial::new([i2, i3]).unwrap(),
                    triple.clone(),
                ];
                if need.iter().all(|m| restrictions.contains(m)) {
                    return ConditionVerdict::yes(ConditionWitness::IndexTriple { i1, i2, i3 });
                }
            }
        }
    }
    ConditionVerdict::no()
}

/// Condition (B'): pairwise different targets `m_1, ..., m_k` (k >= 3) in
/// cyclic order with pairwise different indices `i_j` where `i_j` lies in
/// `m_j` and `m_{j+1}` and in no *other member of the witness cycle*. The
/// index sets of different cycle positions are automatically disjoint, so
/// the search only needs, per cyclic order, a nonempty candidate set at
/// every position.
///
/// Witnesses are found by enumerating subsets by increasing size and their
/// cyclic orders deterministically; family sizes here are small (the work is
/// capped, exhaustive up to the cap).
pub fn check_b_prime(targets: &BTreeSet<Monomial>, n: u32) -> ConditionVerdict {
    debug_assert!(targets.iter().all(|t| t.max_var() <= n));
    let ts = sorted_targets(targets);
    let count = ts.len();
    let mut budget: usize = 2_000_000;
    for k in 3..=count {
        for subset in k_subsets(count, k) {
            if let Some(witness) = beta_cycle_in(&ts, &subset, &mut budget) {
                return ConditionVerdict::yes(witness);
            }
            if budget == 0 {
                return ConditionVerdict::no();
            }
        }
    }
    ConditionVerdict::no()
}

/// All k-element subsets of `0..count` in lexicographic order.
fn k_subsets(count: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(
        start: usize,
        count: usize,
        k: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..count {
            if count - i < k - current.len() {
                break;
            }
            current.push(i);
            go(i + 1, count, k, current, out);
            current.pop();
        }
    }
    go(0, count, k, &mut current, &mut out);
    out
}

/// Tries every cyclic order of the subset (first element fixed, direction
/// canonicalized) and returns the first order where every cyclically
/// adjacent pair has an index avoiding all other subset members.
fn beta_cycle_in(
    ts: &[&Monomial],
    subset: &[usize],
    budget: &mut usize,
) -> Option<ConditionWitness> {
    let k = subset.len();
    let mut rest: Vec<usize> = subset[1..].to_vec();
    rest.sort_unstable();
    let mut order: Vec<usize> = Vec::with_capacity(k);
    permute_orders(subset[0], &mut rest, &mut order, ts, budget)
}

fn permute_orders(
    first: usize,
    remaining: &mut Vec<usize>,
    order: &mut Vec<usize>,
    ts: &[&Monomial],
    budget: &mut usize,
) -> Option<ConditionWitness> {
    if *budget == 0 {
        return None;
    }
    if remaining.is_empty() {
        *budget -= 1;
        // canonical direction: second element smaller than last
        if order.len() >= 2 && order[0] > order[order.len() - 1] {
            return None;
        }
        let cycle: Vec<usize> = std::iter::once(first)
            .chain(order.iter().copied())
            .collect();
        let k = cycle.len();
        let mut indices = Vec::with_capacity(k);
        for j in 0..k {
            let a = ts[cycle[j]];
            let b = ts[cycle[(j + 1) % k]];
            let candidate = a.iter().find(|&i| {
                b.contains(i)
                    && cycle
                        .iter()
                        .all(|&r| r == cycle[j] || r == cycle[(j + 1) % k] || !ts[r].contains(i))
            });
            {
                let i = candidate?;
                indices.push(i)
            }
        }
        return Some(ConditionWitness::IndexCycle {
            monomials: cycle.iter().map(|&i| ts[i].clone()).collect(),
            indices,
        });
    }
    for pick in 0..remaining.len() {
        let value = remaining.remove(pick);
        order.push(value);
        if let Some(w) = permute_orders(first, remaining, order, ts, budget) {
            return Some(w);
        }
        order.pop();
        remaining.insert(pick, value);
    }
    None
}

/// The monomial intersection property: neither (A) nor (B) holds. Condition
/// (A) is checked first, so its witness wins when both fire.
pub fn has_intersection_property(targets: &BTreeSet<Monomial>) -> MipVerdict {
    let a = check_a(targets);
    if a.satisfied {
        return MipVerdict {
            holds: false,
            violated: Some(ViolatedCondition::A),
            witness: a.witness,
        };
    }
    let b = check_b(targets);
    if b.satisfied {
        return MipVerdict {
            holds: false,
            violated: Some(ViolatedCondition::B),
            witness: b.witness,
        };
    }
    MipVerdict {
        holds: true,
        violated: None,
        witness: None,
    }
}

/// Rotates and orients the cycle so the smallest node comes first and its
/// smaller neighbor second; keeps witnesses deterministic.
fn canonical_rotation(cycle: Vec<usize>) -> Vec<usize> {
    let k = cycle.len();
    let (pos, _) = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| *v)
        .expect("cycles are nonempty");
    let mut rotated: Vec<usize> = (0..k).map(|j| cycle[(pos + j) % k]).collect();
    if rotated[1] > rotated[k - 1] {
        rotated[1..].reverse();
    }
    rotated
}
