//! Shared fixtures and instance generators for the integration suites.

#![allow(dead_code)]

use polylin::integrality::BadCycle;
use polylin::linearization::AndConstraint;
use polylin::monomial::union_of;
use polylin::rational::{rat, ratio};
use polylin::{mono, Linearization, Monomial, Objective, RationalPoint};
use rand::rngs::StdRng;
use rand::Rng;
use std::collections::BTreeSet;

/// The six-variable example linearization with targets {1,2,3,4}, {3,4,5},
/// {4,5,6} and auxiliary monomials {1,2}, {2,3}, {3,4}, {4,6}, {1,2,3},
/// {2,3,4}, {1,2,3,4,5}.
pub fn running_example() -> Linearization {
    let and = |ops: &[Monomial]| AndConstraint::combining(ops.iter().cloned()).unwrap();
    let constraints = vec![
        and(&[mono![1], mono![2]]),
        and(&[mono![2], mono![3]]),
        and(&[mono![3], mono![4]]),
        and(&[mono![4], mono![6]]),
        and(&[mono![1, 2], mono![2, 3]]),
        and(&[mono![2, 3], mono![3, 4]]),
        and(&[mono![3, 4], mono![5]]),
        and(&[mono![4, 6], mono![5]]),
        and(&[mono![1, 2, 3], mono![2, 3, 4]]),
        and(&[mono![1, 2, 3, 4], mono![3, 4, 5]]),
    ];
    let monomials: Vec<Monomial> = constraints.iter().map(|c| c.resultant.clone()).collect();
    Linearization::new(6, monomials, constraints)
}

pub fn running_targets() -> BTreeSet<Monomial> {
    [mono![1, 2, 3, 4], mono![3, 4, 5], mono![4, 5, 6]]
        .into_iter()
        .collect()
}

/// The single-upper witness cycle of the running example.
pub fn single_upper_cycle() -> BadCycle {
    BadCycle::from_arcs([
        (mono![1, 2, 3, 4], mono![1, 2, 3]),
        (mono![1, 2, 3, 4], mono![2, 3, 4]),
        (mono![1, 2, 3], mono![2, 3]),
        (mono![2, 3, 4], mono![3, 4]),
        (mono![2, 3], mono![3]),
        (mono![3, 4], mono![3]),
    ])
    .unwrap()
}

/// The two-upper witness cycle of the running example.
pub fn double_upper_cycle() -> BadCycle {
    BadCycle::from_arcs([
        (mono![3, 4, 5], mono![3, 4]),
        (mono![3, 4, 5], mono![5]),
        (mono![4, 5, 6], mono![4, 6]),
        (mono![4, 5, 6], mono![5]),
        (mono![3, 4], mono![4]),
        (mono![4, 6], mono![4]),
    ])
    .unwrap()
}

/// The exact fractional point of the path-count construction.
pub fn expected_path_count_point() -> RationalPoint {
    [
        (mono![1], rat(1)),
        (mono![2], rat(1)),
        (mono![3], ratio(2, 3)),
        (mono![4], rat(1)),
        (mono![5], rat(1)),
        (mono![6], rat(1)),
        (mono![1, 2], rat(1)),
        (mono![2, 3], ratio(2, 3)),
        (mono![3, 4], ratio(2, 3)),
        (mono![4, 6], rat(1)),
        (mono![1, 2, 3], ratio(2, 3)),
        (mono![2, 3, 4], ratio(1, 3)),
        (mono![3, 4, 5], ratio(2, 3)),
        (mono![4, 5, 6], rat(1)),
        (mono![1, 2, 3, 4], rat(0)),
        (mono![1, 2, 3, 4, 5], rat(0)),
    ]
    .into_iter()
    .collect()
}

/// The exact fractional point of the half-point construction.
pub fn expected_half_point() -> RationalPoint {
    [
        (mono![1], rat(1)),
        (mono![2], rat(1)),
        (mono![3], rat(1)),
        (mono![4], ratio(1, 2)),
        (mono![5], ratio(1, 2)),
        (mono![6], rat(1)),
        (mono![1, 2], rat(1)),
        (mono![2, 3], rat(1)),
        (mono![3, 4], ratio(1, 2)),
        (mono![4, 6], ratio(1, 2)),
        (mono![1, 2, 3], rat(1)),
        (mono![2, 3, 4], ratio(1, 2)),
        (mono![3, 4, 5], rat(0)),
        (mono![4, 5, 6], ratio(1, 2)),
        (mono![1, 2, 3, 4], ratio(1, 2)),
        (mono![1, 2, 3, 4, 5], rat(0)),
    ]
    .into_iter()
    .collect()
}

/// Five-variable instance whose single cycle is inside the target reach.
pub fn reachable_cycle_example() -> (Linearization, BTreeSet<Monomial>) {
    let and = |ops: &[Monomial]| AndConstraint::combining(ops.iter().cloned()).unwrap();
    let constraints = vec![
        and(&[mono![1], mono![3]]),
        and(&[mono![1], mono![2]]),
        and(&[mono![2], mono![4]]),
        and(&[mono![2, 4], mono![3]]),
        and(&[mono![2, 3, 4], mono![5]]),
    ];
    let monomials: Vec<Monomial> = constraints.iter().map(|c| c.resultant.clone()).collect();
    let lin = Linearization::new(5, monomials, constraints);
    let targets = [mono![1, 3], mono![1, 2], mono![2, 3, 4, 5]]
        .into_iter()
        .collect();
    (lin, targets)
}

/// Six-variable instance whose single cycle avoids the target reach.
pub fn unreachable_cycle_example() -> (Linearization, BTreeSet<Monomial>) {
    let and = |ops: &[Monomial]| AndConstraint::combining(ops.iter().cloned()).unwrap();
    let constraints = vec![
        and(&[mono![2], mono![3]]),
        and(&[mono![3], mono![4]]),
        and(&[mono![5], mono![6]]),
        and(&[mono![1], mono![2, 3]]),
        and(&[mono![2, 3], mono![3, 4]]),
        and(&[mono![3, 4], mono![5, 6]]),
    ];
    let monomials: Vec<Monomial> = constraints.iter().map(|c| c.resultant.clone()).collect();
    let lin = Linearization::new(6, monomials, constraints);
    let targets = [mono![1, 2, 3], mono![2, 3], mono![3, 4, 5, 6]]
        .into_iter()
        .collect();
    (lin, targets)
}

/// Random simple linearization built by adding AND-stars over fresh unions.
/// With `cycle_prob == 0` operands always come from distinct undirected
/// components, so the digraph stays a forest; larger values admit cycles.
pub fn random_simple_linearization(
    rng: &mut StdRng,
    n: u32,
    extra: usize,
    cycle_prob: f64,
) -> Linearization {
    let mut nodes: Vec<Monomial> = (1..=n).map(Monomial::singleton).collect();
    let mut component: Vec<usize> = (0..nodes.len()).collect();
    let mut constraints: Vec<AndConstraint> = Vec::new();
    let mut tries = 0;
    while constraints.len() < extra && tries < 40 * extra.max(1) {
        tries += 1;
        let k = rng.gen_range(2..=3.min(nodes.len()));
        let allow_same_component = rng.gen_bool(cycle_prob);
        let mut picked: Vec<usize> = Vec::new();
        let mut used_components: Vec<usize> = Vec::new();
        for _ in 0..k {
            let candidates: Vec<usize> = (0..nodes.len())
                .filter(|&i| {
                    !picked.contains(&i)
                        && (allow_same_component || !used_components.contains(&component[i]))
                })
                .collect();
            if candidates.is_empty() {
                break;
            }
            let pick = candidates[rng.gen_range(0..candidates.len())];
            used_components.push(component[pick]);
            picked.push(pick);
        }
        if picked.len() < 2 {
            continue;
        }
        let operands: Vec<Monomial> = picked.iter().map(|&i| nodes[i].clone()).collect();
        let resultant = union_of(operands.iter()).unwrap();
        if resultant.len() == operands.iter().map(|m| m.len()).max().unwrap() {
            continue; // some operand equals the union
        }
        if nodes.contains(&resultant) {
            continue;
        }
        let fresh = component.iter().max().unwrap() + 1;
        for slot in component.iter_mut() {
            if used_components.contains(slot) {
                *slot = fresh;
            }
        }
        nodes.push(resultant.clone());
        component.push(fresh);
        constraints.push(AndConstraint::combining(operands).unwrap());
    }
    Linearization::new(n, nodes, constraints)
}

/// Random acyclic simple linearization (forest-structured digraph).
pub fn random_acyclic_linearization(rng: &mut StdRng, n: u32, extra: usize) -> Linearization {
    random_simple_linearization(rng, n, extra, 0.0)
}

/// Proper monomials of in-degree at most one whose defining operands are
/// disjoint from the other operands of the hosting constraint. Elimination
/// preserves the projected relaxation exactly on this domain; overlapping
/// operand sets genuinely change the relaxation strength (see the transform
/// module's regression test).
pub fn cleanly_eliminable(lin: &Linearization) -> Vec<Monomial> {
    let digraph = lin.digraph();
    lin.proper_monomials()
        .filter(|m| {
            if digraph.in_degree(m) > 1 {
                return false;
            }
            let defining: BTreeSet<&Monomial> = lin
                .constraint_for(m)
                .map(|c| c.operands.iter().collect())
                .unwrap_or_default();
            lin.constraints()
                .iter()
                .filter(|c| c.operands.contains(m))
                .all(|host| {
                    host.operands
                        .iter()
                        .filter(|op| *op != *m)
                        .all(|op| !defining.contains(op))
                })
        })
        .cloned()
        .collect()
}

/// Random integer objective over all monomials, coefficients in [-5, 5].
pub fn random_objective(rng: &mut StdRng, lin: &Linearization) -> Objective {
    Objective::new(
        lin.monomials()
            .iter()
            .map(|m| (m.clone(), rat(rng.gen_range(-5..=5)))),
    )
}

/// All monomials over [n] with at least two variables, lexicographic.
pub fn all_proper_subsets(n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for code in 1u32..(1 << n) {
        if code.count_ones() >= 2 {
            let vars: Vec<u32> = (1..=n).filter(|i| code & (1 << (i - 1)) != 0).collect();
            out.push(Monomial::new(vars).unwrap());
        }
    }
    out.sort();
    out
}

/// All target families of size `min_size..=max_size` drawn from the proper
/// subsets of [n], enumerated deterministically.
pub fn enumerate_target_families(
    n: u32,
    min_size: usize,
    max_size: usize,
) -> Vec<BTreeSet<Monomial>> {
    let pool = all_proper_subsets(n);
    let mut families = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((next, chosen)) = stack.pop() {
        if chosen.len() >= min_size {
            families.push(chosen.iter().map(|&i| pool[i].clone()).collect());
        }
        if chosen.len() == max_size {
            continue;
        }
        for i in next..pool.len() {
            let mut extended = chosen.clone();
            extended.push(i);
            stack.push((i + 1, extended));
        }
    }
    families
}

/// Random target family over [n]: `count` distinct monomials of size >= 2.
pub fn random_targets(rng: &mut StdRng, n: u32, count: usize) -> BTreeSet<Monomial> {
    let mut targets = BTreeSet::new();
    let mut tries = 0;
    while targets.len() < count && tries < 50 * count {
        tries += 1;
        let size = rng.gen_range(2..=n.min(4));
        let mut vars = BTreeSet::new();
        while vars.len() < size as usize {
            vars.insert(rng.gen_range(1..=n));
        }
        targets.insert(Monomial::new(vars).unwrap());
    }
    targets
}

/// Chain-structured acyclic linearization with exactly `2 * len` monomials:
/// the prefixes {1..j} for j = 2..=len, each combined from its predecessor
/// and one fresh singleton, plus `len + 1` singletons (the last one idle so
/// the monomial count comes out even).
pub fn chain_linearization(len: u32) -> Linearization {
    let mut constraints = Vec::new();
    let mut prefix = mono![1];
    for j in 2..=len {
        let next = prefix.union(&Monomial::singleton(j));
        constraints.push(AndConstraint {
            resultant: next.clone(),
            operands: [prefix.clone(), Monomial::singleton(j)]
                .into_iter()
                .collect(),
        });
        prefix = next;
    }
    let monomials: Vec<Monomial> = constraints
        .iter()
        .map(|c: &AndConstraint| c.resultant.clone())
        .collect();
    Linearization::new(len + 1, monomials, constraints)
}
