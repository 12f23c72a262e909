//! Integrality decisions and certificates.
//!
//! The projection of a simple linearization's relaxation onto singleton and
//! target coordinates is integral exactly when the digraph restricted to the
//! successors of the targets has no undirected cycle. The decision is a
//! linear-time union-find pass. When it fails, a witness cycle is refined to
//! one with as few upper nodes as possible and turned into an explicit
//! fractional point: a path-count construction when a single upper node
//! suffices, a 0/half/1 construction otherwise. The module also produces
//! primal/dual certificate pairs showing that a single AND-constraint's
//! inequality system is totally dual integral.

use crate::digraph::{Dsu, LinDigraph};
use crate::linearization::{Diagnostic, Linearization};
use crate::monomial::Monomial;
use crate::rational::Rational;
use crate::relaxation::{build_system, Membership, RationalPoint};
use crate::transform::preprocess;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// A subgraph of the linearization digraph whose undirected version is a
/// simple cycle, witnessing non-integrality when all its nodes are
/// successors of the queried targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadCycle {
    arcs: Vec<(Monomial, Monomial)>,
    upper: BTreeSet<Monomial>,
    lower: BTreeSet<Monomial>,
}

impl BadCycle {
    /// Builds a cycle from directed arcs, checking that the undirected
    /// version is a single simple cycle.
    pub fn from_arcs(
        arcs: impl IntoIterator<Item = (Monomial, Monomial)>,
    ) -> Result<Self, IntegralityError> {
        let mut arcs: Vec<(Monomial, Monomial)> = arcs.into_iter().collect();
        arcs.sort();
        arcs.dedup();
        if arcs.len() < 3 {
            return Err(IntegralityError::InvalidCycle(
                "a cycle needs at least three arcs".into(),
            ));
        }
        let mut incidence: BTreeMap<&Monomial, (usize, usize)> = BTreeMap::new();
        for (a, b) in &arcs {
            incidence.entry(a).or_default().0 += 1;
            incidence.entry(b).or_default().1 += 1;
        }
        if incidence.len() != arcs.len() {
            return Err(IntegralityError::InvalidCycle(
                "edge and node counts of a simple cycle must agree".into(),
            ));
        }
        let mut upper = BTreeSet::new();
        let mut lower = BTreeSet::new();
        for (m, (out_deg, in_deg)) in &incidence {
            if out_deg + in_deg != 2 {
                return Err(IntegralityError::InvalidCycle(format!(
                    "node {m} does not have exactly two incident cycle edges"
                )));
            }
            if *out_deg == 2 {
                upper.insert((*m).clone());
            }
            if *in_deg == 2 {
                lower.insert((*m).clone());
            }
        }
        // connectivity: a 2-regular graph is a disjoint union of cycles
        let nodes: Vec<&Monomial> = incidence.keys().copied().collect();
        let pos: BTreeMap<&Monomial, usize> =
            nodes.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut dsu = Dsu::new(nodes.len());
        let mut tree_edges = 0;
        for (a, b) in &arcs {
            if dsu.union(pos[a], pos[b]) {
                tree_edges += 1;
            }
        }
        if tree_edges != nodes.len() - 1 {
            return Err(IntegralityError::InvalidCycle(
                "the arcs split into more than one cycle".into(),
            ));
        }
        if upper.is_empty() || upper.len() != lower.len() {
            return Err(IntegralityError::InvalidCycle(
                "a cycle in an acyclic digraph has equally many upper and lower nodes".into(),
            ));
        }
        Ok(BadCycle { arcs, upper, lower })
    }

    /// Directed arcs in deterministic (sorted) order.
    pub fn arcs(&self) -> &[(Monomial, Monomial)] {
        &self.arcs
    }

    /// Nodes with two outgoing cycle arcs.
    pub fn upper_nodes(&self) -> &BTreeSet<Monomial> {
        &self.upper
    }

    /// Nodes with two incoming cycle arcs.
    pub fn lower_nodes(&self) -> &BTreeSet<Monomial> {
        &self.lower
    }

    pub fn nodes(&self) -> BTreeSet<Monomial> {
        self.arcs
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }

    /// Walks the cycle starting at `start` towards `first`, returning the
    /// full cyclic node sequence.
    fn walk_from(&self, start: &Monomial, first: &Monomial) -> Vec<Monomial> {
        let mut neighbors: BTreeMap<&Monomial, Vec<&Monomial>> = BTreeMap::new();
        for (a, b) in &self.arcs {
            neighbors.entry(a).or_default().push(b);
            neighbors.entry(b).or_default().push(a);
        }
        let mut seq = vec![start.clone()];
        let mut prev = start;
        let mut cur = first;
        while cur != start {
            seq.push(cur.clone());
            let next = neighbors[cur]
                .iter()
                .copied()
                .find(|m| *m != prev)
                .expect("cycle nodes have two distinct neighbors");
            prev = cur;
            cur = next;
        }
        seq
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .arcs
            .iter()
            .map(|(a, b)| json!([a.vars(), b.vars()]))
            .collect::<Vec<_>>())
    }
}

/// Outcome of the integrality decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegralityVerdict {
    Integral,
    NonIntegral(BadCycle),
}

impl IntegralityVerdict {
    pub fn is_integral(&self) -> bool {
        matches!(self, IntegralityVerdict::Integral)
    }
}

fn validate_targets(
    lin: &Linearization,
    targets: &BTreeSet<Monomial>,
) -> Result<(), IntegralityError> {
    lin.require_simple()?;
    for t in targets {
        if t.is_singleton() || !lin.monomials().contains(t) {
            return Err(IntegralityError::Diagnostic(
                Diagnostic::NotAProperMonomial {
                    monomial: t.clone(),
                },
            ));
        }
    }
    Ok(())
}

/// Decides whether the relaxation's projection onto singletons and `targets`
/// is integral: restrict the digraph to the successors of the targets and
/// test the restriction for undirected acyclicity (union-find, linear time).
/// A cheap witness cycle is returned in the negative case;
/// [`find_min_upper_cycle`] refines it for certificate construction.
pub fn decide_integral(
    lin: &Linearization,
    targets: &BTreeSet<Monomial>,
) -> Result<IntegralityVerdict, IntegralityError> {
    validate_targets(lin, targets)?;
    let restricted = preprocess(lin, targets)?;
    let digraph = restricted.digraph();
    let arcs: Vec<(usize, usize)> = (0..digraph.node_count())
        .flat_map(|i| {
            digraph
                .out_neighbors(i)
                .iter()
                .map(move |&j| (i, j))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut dsu = Dsu::new(digraph.node_count());
    let mut accepted: Vec<(usize, usize)> = Vec::new();
    for (a, b) in arcs {
        if !dsu.union(a, b) {
            let cycle = closing_cycle(&digraph, &accepted, a, b);
            return Ok(IntegralityVerdict::NonIntegral(cycle));
        }
        accepted.push((a, b));
    }
    Ok(IntegralityVerdict::Integral)
}

/// Reconstructs the cycle closed by arc `(a, b)` over the already accepted
/// forest arcs: BFS path from `a` to `b`, plus the closing arc.
fn closing_cycle(digraph: &LinDigraph, forest: &[(usize, usize)], a: usize, b: usize) -> BadCycle {
    let mut adj: BTreeMap<usize, Vec<(usize, bool)>> = BTreeMap::new();
    for &(x, y) in forest {
        adj.entry(x).or_default().push((y, true));
        adj.entry(y).or_default().push((x, false));
    }
    let mut prev: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
    let mut queue = VecDeque::from([a]);
    let mut seen = BTreeSet::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            break;
        }
        for &(y, forward) in adj.get(&x).into_iter().flatten() {
            if seen.insert(y) {
                prev.insert(y, (x, forward));
                queue.push_back(y);
            }
        }
    }
    let mut arcs = vec![(digraph.node(a).clone(), digraph.node(b).clone())];
    let mut cur = b;
    while cur != a {
        let (p, forward) = prev[&cur];
        if forward {
            arcs.push((digraph.node(p).clone(), digraph.node(cur).clone()));
        } else {
            arcs.push((digraph.node(cur).clone(), digraph.node(p).clone()));
        }
        cur = p;
    }
    BadCycle::from_arcs(arcs).expect("forest path plus closing arc forms a simple cycle")
}

/// Default cap on enumerated cycles in [`find_min_upper_cycle`].
pub const DEFAULT_CYCLE_BUDGET: usize = 10_000;

/// Searches the restriction to the successors of `targets` for a witness
/// cycle with a single upper node or, failing that, one with the minimum
/// number of upper nodes. A minimum-upper cycle with two or more upper nodes
/// automatically satisfies the structural side conditions that the
/// half-point construction needs; they are re-verified and reported here.
///
/// The search enumerates simple cycles exhaustively and aborts with a
/// diagnostic after `budget` cycles (default [`DEFAULT_CYCLE_BUDGET`]).
pub fn find_min_upper_cycle(
    lin: &Linearization,
    targets: &BTreeSet<Monomial>,
    budget: Option<usize>,
) -> Result<BadCycle, IntegralityError> {
    validate_targets(lin, targets)?;
    let restricted = preprocess(lin, targets)?;
    let digraph = restricted.digraph();
    let budget = budget.unwrap_or(DEFAULT_CYCLE_BUDGET);
    let cycles = enumerate_simple_cycles(&digraph, budget)?;
    if cycles.is_empty() {
        return Err(IntegralityError::InstanceIsIntegral);
    }
    let mut best: Option<BadCycle> = None;
    for cycle in cycles {
        let better = match &best {
            None => true,
            Some(b) => {
                let key = (cycle.upper.len(), cycle.arcs.len(), cycle.arcs.clone());
                let best_key = (b.upper.len(), b.arcs.len(), b.arcs.clone());
                key < best_key
            }
        };
        if better {
            best = Some(cycle);
        }
    }
    let best = best.expect("nonempty cycle list");
    if best.upper.len() >= 2 {
        verify_reduced_properties(lin, targets, &best)?;
    }
    Ok(best)
}

/// All simple cycles of the undirected version, each as a [`BadCycle`].
/// Every cycle is emitted once: the DFS roots at the cycle's smallest node
/// and fixes the traversal direction by its second node.
fn enumerate_simple_cycles(
    digraph: &LinDigraph,
    budget: usize,
) -> Result<Vec<BadCycle>, IntegralityError> {
    let n = digraph.node_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for &j in digraph.out_neighbors(i) {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    let mut cycles = Vec::new();
    let mut steps: usize = 0;
    let step_cap = 10_000_000usize;
    for root in 0..n {
        let mut path = vec![root];
        let mut on_path = vec![false; n];
        on_path[root] = true;
        dfs_cycles(
            digraph,
            &adj,
            root,
            &mut path,
            &mut on_path,
            &mut cycles,
            budget,
            &mut steps,
            step_cap,
        )?;
    }
    Ok(cycles)
}

#[allow(clippy::too_many_arguments)]
fn dfs_cycles(
    digraph: &LinDigraph,
    adj: &[Vec<usize>],
    root: usize,
    path: &mut Vec<usize>,
    on_path: &mut Vec<bool>,
    cycles: &mut Vec<BadCycle>,
    budget: usize,
    steps: &mut usize,
    step_cap: usize,
) -> Result<(), IntegralityError> {
    let cur = *path.last().expect("path is never empty");
    for &next in &adj[cur] {
        *steps += 1;
        if *steps > step_cap {
            return Err(IntegralityError::CycleBudgetExceeded { budget });
        }
        if next == root && path.len() >= 3 && path[1] < cur {
            if cycles.len() >= budget {
                return Err(IntegralityError::CycleBudgetExceeded { budget });
            }
            let arcs: Vec<(Monomial, Monomial)> = path
                .iter()
                .zip(path.iter().cycle().skip(1))
                .map(|(&x, &y)| directed_arc(digraph, x, y))
                .collect();
            cycles.push(BadCycle::from_arcs(arcs)?);
        } else if next > root && !on_path[next] {
            path.push(next);
            on_path[next] = true;
            dfs_cycles(
                digraph, adj, root, path, on_path, cycles, budget, steps, step_cap,
            )?;
            on_path[next] = false;
            path.pop();
        }
    }
    Ok(())
}

fn directed_arc(digraph: &LinDigraph, x: usize, y: usize) -> (Monomial, Monomial) {
    if digraph.node(x).len() > digraph.node(y).len() {
        (digraph.node(x).clone(), digraph.node(y).clone())
    } else {
        (digraph.node(y).clone(), digraph.node(x).clone())
    }
}

/// Re-checks the three structural properties that a minimum-upper cycle with
/// several upper nodes inherits: unique target-to-singleton paths, and lower
/// (resp. upper) nodes separated by singleton (resp. target) reach.
fn verify_reduced_properties(
    lin: &Linearization,
    targets: &BTreeSet<Monomial>,
    cycle: &BadCycle,
) -> Result<(), IntegralityError> {
    let digraph = lin.digraph();
    for t in targets {
        let counts = count_paths_from(&digraph, t);
        for i in 1..=lin.n() {
            let s = Monomial::singleton(i);
            if counts.get(&s).is_some_and(|c| *c > BigInt::one()) {
                return Err(IntegralityError::PropertyFailed(format!(
                    "two distinct paths from target {t} to singleton {s}"
                )));
            }
        }
    }
    for i in 1..=lin.n() {
        let s = Monomial::singleton(i);
        let preds = digraph.predecessors([&s]);
        if cycle.lower.iter().filter(|l| preds.contains(l)).count() > 1 {
            return Err(IntegralityError::PropertyFailed(format!(
                "singleton {s} is reachable from two lower nodes"
            )));
        }
    }
    for t in targets {
        let succ = digraph.successors([t]);
        if cycle.upper.iter().filter(|u| succ.contains(u)).count() > 1 {
            return Err(IntegralityError::PropertyFailed(format!(
                "target {t} reaches two upper nodes"
            )));
        }
    }
    Ok(())
}

/// Node indices ordered by increasing monomial cardinality. Arcs always go
/// from larger to strictly smaller cardinality, so this is a reverse
/// topological order of the digraph.
fn by_cardinality(digraph: &LinDigraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..digraph.node_count()).collect();
    order.sort_by_key(|&x| digraph.node(x).len());
    order
}

/// Number of directed paths from `source` to every node: a single pass in
/// decreasing-cardinality order, adding each node's count to its arc
/// targets. Path counts grow exponentially, hence the big integers.
fn count_paths_from(digraph: &LinDigraph, source: &Monomial) -> BTreeMap<Monomial, BigInt> {
    let mut counts = vec![BigInt::zero(); digraph.node_count()];
    match digraph.node_index(source) {
        Some(src) => counts[src] = BigInt::one(),
        None => return BTreeMap::new(),
    };
    for x in by_cardinality(digraph).into_iter().rev() {
        if counts[x].is_zero() {
            continue;
        }
        let own = counts[x].clone();
        for &c in digraph.out_neighbors(x) {
            counts[c] += &own;
        }
    }
    (0..digraph.node_count())
        .map(|x| (digraph.node(x).clone(), counts[x].clone()))
        .collect()
}

/// Number of directed paths from every node to the singleton `sink`: the
/// same pass in increasing-cardinality order, summing over arc targets.
fn count_paths_to(digraph: &LinDigraph, sink: &Monomial) -> BTreeMap<Monomial, BigInt> {
    let mut counts = vec![BigInt::zero(); digraph.node_count()];
    let snk = match digraph.node_index(sink) {
        Some(i) => i,
        None => return BTreeMap::new(),
    };
    for x in by_cardinality(digraph) {
        if x == snk {
            counts[x] = BigInt::one();
            continue;
        }
        let mut total = BigInt::zero();
        for &c in digraph.out_neighbors(x) {
            total += &counts[c];
        }
        counts[x] = total;
    }
    (0..digraph.node_count())
        .map(|x| (digraph.node(x).clone(), counts[x].clone()))
        .collect()
}

/// How a fractional point was assembled, with the auxiliary data needed to
/// re-verify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateConstruction {
    /// Single upper node: coordinates are `max(0, 1 - k(m)/k(u))` where
    /// `k(m)` counts directed paths from `m` to the chosen singleton.
    PathCount {
        upper: Monomial,
        lower: Monomial,
        target: Monomial,
        sink: Monomial,
        path_counts: BTreeMap<Monomial, BigInt>,
    },
    /// Several upper nodes: zero on the predecessors of the anchor upper
    /// node, one half on the remaining predecessors of the chosen sink
    /// singletons, one elsewhere.
    HalfPoint {
        uppers: Vec<Monomial>,
        lowers: Vec<Monomial>,
        anchor: Monomial,
        targets: Vec<Monomial>,
        sinks: Vec<Monomial>,
        zero_class: BTreeSet<Monomial>,
        half_class: BTreeSet<Monomial>,
    },
}

/// A verifiable witness that the projection is not integral: a bad cycle
/// together with a fractional point of the relaxation whose projection lies
/// outside the integer hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalCertificate {
    pub cycle: BadCycle,
    pub point: RationalPoint,
    pub construction: CertificateConstruction,
}

impl FractionalCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        let point: BTreeMap<String, String> = self
            .point
            .iter()
            .map(|(m, v)| (m.key(), crate::rational::format_rational(v)))
            .collect();
        let (tag, aux) = match &self.construction {
            CertificateConstruction::PathCount {
                upper,
                lower,
                target,
                sink,
                path_counts,
            } => (
                "path-count",
                json!({
                    "upper": upper.vars(),
                    "lower": lower.vars(),
                    "target": target.vars(),
                    "sink": sink.vars(),
                    "path_counts": path_counts
                        .iter()
                        .map(|(m, k)| (m.key(), k.to_string()))
                        .collect::<BTreeMap<String, String>>(),
                }),
            ),
            CertificateConstruction::HalfPoint {
                uppers,
                lowers,
                anchor,
                targets,
                sinks,
                zero_class,
                half_class,
            } => (
                "half-point",
                json!({
                    "uppers": uppers.iter().map(|m| m.vars()).collect::<Vec<_>>(),
                    "lowers": lowers.iter().map(|m| m.vars()).collect::<Vec<_>>(),
                    "anchor": anchor.vars(),
                    "targets": targets.iter().map(|m| m.vars()).collect::<Vec<_>>(),
                    "sinks": sinks.iter().map(|m| m.vars()).collect::<Vec<_>>(),
                    "zero_class": zero_class.iter().map(|m| m.vars()).collect::<Vec<_>>(),
                    "half_class": half_class.iter().map(|m| m.vars()).collect::<Vec<_>>(),
                }),
            ),
        };
        json!({
            "cycle": self.cycle.to_json(),
            "point": point,
            "construction": tag,
            "aux": aux,
        })
    }
}

/// Builds the fractional certificate for a witness cycle. The point is
/// checked against the full inequality system before it is returned; hull
/// exclusion is the oracle module's job and exercised by the test suite.
pub fn fractional_certificate(
    lin: &Linearization,
    targets: &BTreeSet<Monomial>,
    cycle: &BadCycle,
) -> Result<FractionalCertificate, IntegralityError> {
    validate_targets(lin, targets)?;
    let digraph = lin.digraph();
    for (a, b) in cycle.arcs() {
        if !digraph.has_arc(a, b) {
            return Err(IntegralityError::InvalidCycle(format!(
                "arc {a} -> {b} is not in the linearization digraph"
            )));
        }
    }
    let reach = digraph.successors(targets.iter());
    for node in cycle.nodes() {
        if !reach.contains(&node) {
            return Err(IntegralityError::PropertyFailed(format!(
                "cycle node {node} is not a successor of the targets"
            )));
        }
    }

    let construction = if cycle.upper.len() == 1 {
        path_count_construction(targets, cycle, &digraph)?
    } else {
        half_point_construction(targets, cycle, &digraph)?
    };
    let point = match &construction {
        CertificateConstruction::PathCount {
            upper, path_counts, ..
        } => {
            let k_u = path_counts[upper].clone();
            lin.monomials()
                .iter()
                .map(|m| {
                    let frac = Rational::new(path_counts[m].clone(), k_u.clone());
                    let v = Rational::one() - frac;
                    (m.clone(), v.max(Rational::zero()))
                })
                .collect()
        }
        CertificateConstruction::HalfPoint {
            zero_class,
            half_class,
            ..
        } => lin
            .monomials()
            .iter()
            .map(|m| {
                let v = if zero_class.contains(m) {
                    Rational::zero()
                } else if half_class.contains(m) {
                    Rational::new(BigInt::one(), BigInt::from(2))
                } else {
                    Rational::one()
                };
                (m.clone(), v)
            })
            .collect(),
    };

    match build_system(lin).membership(&point) {
        Ok(Membership::Satisfied) => {}
        Ok(Membership::Violated { row, amount }) => {
            return Err(IntegralityError::Internal(format!(
                "constructed point violates row {row} by {amount}"
            )));
        }
        Err(e) => return Err(IntegralityError::Internal(e.to_string())),
    }

    Ok(FractionalCertificate {
        cycle: cycle.clone(),
        point,
        construction,
    })
}

fn path_count_construction(
    targets: &BTreeSet<Monomial>,
    cycle: &BadCycle,
    digraph: &LinDigraph,
) -> Result<CertificateConstruction, IntegralityError> {
    let upper = cycle.upper.first().expect("one upper node").clone();
    let lower = cycle.lower.first().expect("one lower node").clone();
    let target = digraph
        .predecessors([&upper])
        .into_iter()
        .find(|m| targets.contains(m))
        .ok_or_else(|| {
            IntegralityError::PropertyFailed(format!("no target reaches the upper node {upper}"))
        })?;
    let sink = digraph
        .successors([&lower])
        .into_iter()
        .find(|m| m.is_singleton())
        .ok_or_else(|| {
            IntegralityError::PropertyFailed(format!(
                "no singleton is reachable from the lower node {lower}"
            ))
        })?;
    let path_counts = count_paths_to(digraph, &sink);
    if path_counts[&upper] < BigInt::from(2) {
        return Err(IntegralityError::PropertyFailed(format!(
            "upper node {upper} admits fewer than two paths to {sink}"
        )));
    }
    Ok(CertificateConstruction::PathCount {
        upper,
        lower,
        target,
        sink,
        path_counts,
    })
}

fn half_point_construction(
    targets: &BTreeSet<Monomial>,
    cycle: &BadCycle,
    digraph: &LinDigraph,
) -> Result<CertificateConstruction, IntegralityError> {
    // The anchor upper node getting the zero class is pinned to the
    // lexicographically smallest upper node; the cycle is walked from it in
    // the direction whose first lower node is smaller.
    let anchor = cycle.upper.first().expect("upper nodes exist").clone();
    let neighbors: Vec<Monomial> = cycle
        .arcs
        .iter()
        .filter(|(a, _)| *a == anchor)
        .map(|(_, b)| b.clone())
        .collect();
    debug_assert_eq!(neighbors.len(), 2, "upper nodes have two outgoing arcs");
    let first_lower = |first: &Monomial| -> Monomial {
        let seq = cycle.walk_from(&anchor, first);
        seq.into_iter()
            .find(|m| cycle.lower.contains(m))
            .expect("every cycle direction hits a lower node")
    };
    let direction = if first_lower(&neighbors[0]) <= first_lower(&neighbors[1]) {
        neighbors[0].clone()
    } else {
        neighbors[1].clone()
    };
    let seq = cycle.walk_from(&anchor, &direction);
    let mut lowers: Vec<Monomial> = Vec::new();
    let mut uppers: Vec<Monomial> = Vec::new();
    for m in seq.iter().skip(1) {
        if cycle.lower.contains(m) {
            lowers.push(m.clone());
        } else if cycle.upper.contains(m) {
            uppers.push(m.clone());
        }
    }
    uppers.push(anchor.clone());
    debug_assert_eq!(uppers.len(), cycle.upper.len());
    debug_assert_eq!(lowers.len(), cycle.lower.len());

    let mut sinks = Vec::new();
    for l in &lowers {
        let s = digraph
            .successors([l])
            .into_iter()
            .find(|m| m.is_singleton())
            .ok_or_else(|| {
                IntegralityError::PropertyFailed(format!(
                    "no singleton is reachable from lower node {l}"
                ))
            })?;
        sinks.push(s);
    }
    let mut chosen_targets = Vec::new();
    for u in &uppers {
        let t = digraph
            .predecessors([u])
            .into_iter()
            .find(|m| targets.contains(m))
            .ok_or_else(|| {
                IntegralityError::PropertyFailed(format!("no target reaches upper node {u}"))
            })?;
        chosen_targets.push(t);
    }
    let distinct = |ms: &[Monomial]| ms.iter().collect::<BTreeSet<_>>().len() == ms.len();
    if !distinct(&sinks) {
        return Err(IntegralityError::PropertyFailed(
            "two lower nodes reach the same chosen singleton".into(),
        ));
    }
    if !distinct(&chosen_targets) {
        return Err(IntegralityError::PropertyFailed(
            "two upper nodes are reached from the same chosen target".into(),
        ));
    }

    let zero_class = digraph.predecessors([&anchor]);
    let mut half_class: BTreeSet<Monomial> = BTreeSet::new();
    for s in &sinks {
        half_class.extend(digraph.predecessors([s]));
    }
    half_class = half_class.difference(&zero_class).cloned().collect();
    Ok(CertificateConstruction::HalfPoint {
        uppers,
        lowers,
        anchor,
        targets: chosen_targets,
        sinks,
        zero_class,
        half_class,
    })
}

/// A primal/dual pair certifying that maximizing an integral weight vector
/// over a single AND-constraint's inequality system has an integral dual
/// optimum. Dual variables follow the system rows: `alpha` for the pair
/// rows, `beta` for the sum row, `gamma` and `delta` for the upper bounds of
/// the operands and the resultant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdiCertificate {
    pub operand_count: usize,
    pub weights: Vec<i64>,
    pub resultant_weight: i64,
    /// Which of the four constructions applied.
    pub case: u8,
    pub primal_operands: Vec<bool>,
    pub primal_resultant: bool,
    pub alpha: Vec<i64>,
    pub beta: i64,
    pub gamma: Vec<i64>,
    pub delta: i64,
    /// The common primal and dual objective value.
    pub objective: i64,
}

impl TdiCertificate {
    pub fn primal_value(&self) -> i64 {
        let ops: i64 = self
            .weights
            .iter()
            .zip(&self.primal_operands)
            .filter(|(_, &y)| y)
            .map(|(w, _)| *w)
            .sum();
        ops + if self.primal_resultant {
            self.resultant_weight
        } else {
            0
        }
    }

    pub fn dual_value(&self) -> i64 {
        (self.operand_count as i64 - 1) * self.beta + self.gamma.iter().sum::<i64>() + self.delta
    }

    pub fn primal_feasible(&self) -> bool {
        let k = self.operand_count;
        if self.primal_resultant && !self.primal_operands.iter().all(|&y| y) {
            return false;
        }
        let sum: i64 = self.primal_operands.iter().filter(|&&y| y).count() as i64;
        let resultant = if self.primal_resultant { 1 } else { 0 };
        sum < resultant + k as i64
    }

    pub fn dual_feasible(&self) -> bool {
        let nonneg = self.alpha.iter().all(|&a| a >= 0)
            && self.gamma.iter().all(|&g| g >= 0)
            && self.beta >= 0
            && self.delta >= 0;
        let operand_rows = (0..self.operand_count)
            .all(|i| -self.alpha[i] + self.beta + self.gamma[i] >= self.weights[i]);
        let resultant_row =
            self.alpha.iter().sum::<i64>() - self.beta + self.delta >= self.resultant_weight;
        nonneg && operand_rows && resultant_row
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "k": self.operand_count,
            "w": self.weights,
            "wbar": self.resultant_weight,
            "case": self.case,
            "primal": {
                "operands": self.primal_operands.iter().map(|&b| b as u8).collect::<Vec<_>>(),
                "resultant": self.primal_resultant as u8,
            },
            "dual": {
                "alpha": self.alpha,
                "beta": self.beta,
                "gamma": self.gamma,
                "delta": self.delta,
            },
            "objective": self.objective,
        })
    }
}

/// Constructs matching integral primal and dual optima for maximizing
/// `(w, w_bar)` over the relaxation of one AND-constraint with `k` operands.
/// Dispatches on the sign pattern of the weights; the resulting pair is
/// verified before it is returned.
pub fn tdi_single_and(k: usize, w: &[i64], w_bar: i64) -> Result<TdiCertificate, IntegralityError> {
    if k < 2 || w.len() != k {
        return Err(IntegralityError::BadWeights {
            expected: k,
            got: w.len(),
        });
    }
    let min_idx = (0..k).min_by_key(|&i| (w[i], i)).expect("k >= 2");
    let w_min = w[min_idx];
    let all_nonneg = w.iter().all(|&wi| wi >= 0);
    let negative_sum: i64 = w.iter().filter(|&&wi| wi < 0).sum();

    let (case, primal_operands, primal_resultant, alpha, beta, gamma);
    if all_nonneg && w_min + w_bar <= 0 {
        case = 1;
        primal_operands = (0..k).map(|i| i != min_idx).collect();
        primal_resultant = false;
        alpha = vec![0; k];
        beta = w_min;
        gamma = w.iter().map(|wi| wi - w_min).collect();
    } else if all_nonneg {
        case = 2;
        primal_operands = vec![true; k];
        primal_resultant = true;
        alpha = (0..k)
            .map(|i| if i == min_idx { w_bar.max(0) } else { 0 })
            .collect();
        beta = (-w_bar).max(0);
        gamma = (0..k)
            .map(|i| {
                if i == min_idx {
                    w[i] + w_bar
                } else {
                    w[i] + w_bar.min(0)
                }
            })
            .collect();
    } else if negative_sum + w_bar <= 0 {
        case = 3;
        primal_operands = w.iter().map(|&wi| wi >= 0).collect();
        primal_resultant = false;
        alpha = w.iter().map(|&wi| (-wi).max(0)).collect();
        beta = 0;
        gamma = w.iter().map(|&wi| wi.max(0)).collect();
    } else {
        case = 4;
        primal_operands = vec![true; k];
        primal_resultant = true;
        alpha = (0..k)
            .map(|i| {
                if i == min_idx {
                    w_bar - w[i] + negative_sum
                } else if w[i] < 0 {
                    -w[i]
                } else {
                    0
                }
            })
            .collect();
        beta = 0;
        gamma = (0..k)
            .map(|i| {
                if i == min_idx {
                    w_bar + negative_sum
                } else {
                    w[i].max(0)
                }
            })
            .collect();
    }

    let certificate = TdiCertificate {
        operand_count: k,
        weights: w.to_vec(),
        resultant_weight: w_bar,
        case,
        primal_operands,
        primal_resultant,
        alpha,
        beta,
        gamma,
        delta: 0,
        objective: 0,
    };
    let value = certificate.primal_value();
    let certificate = TdiCertificate {
        objective: value,
        ..certificate
    };
    if !certificate.primal_feasible()
        || !certificate.dual_feasible()
        || certificate.dual_value() != value
    {
        return Err(IntegralityError::Internal(format!(
            "certificate verification failed for w = {w:?}, wbar = {w_bar}"
        )));
    }
    Ok(certificate)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntegralityError {
    #[error(transparent)]
    Diagnostic(#[from] Diagnostic),
    #[error("the instance is integral; no witness cycle exists")]
    InstanceIsIntegral,
    #[error("cycle enumeration exceeded the budget of {budget}")]
    CycleBudgetExceeded { budget: usize },
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("construction precondition failed: {0}")]
    PropertyFailed(String),
    #[error("expected {expected} operand weights, got {got} (need at least two operands)")]
    BadWeights { expected: usize, got: usize },
    #[error("internal error: {0}")]
    Internal(String),
}
