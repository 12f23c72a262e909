//! Exact minimization over acyclic simple linearizations.
//!
//! When the undirected version of the digraph is acyclic it is a forest, and
//! the integer points of the relaxation can be optimized by propagating
//! partial assignments towards a root monomial. Per tree node four tables
//! suffice: the best completion of the subtree with the node forced to 0 or
//! 1, where for nodes whose tree parent is an operand of their own
//! constraint ("down" nodes) feasibility is measured with the parent pinned
//! to the matching value. Tables store full vectors with their exact cost,
//! which keeps the stitching auditable and the total work quadratic in the
//! number of monomials.

use crate::digraph::{Dsu, LinDigraph};
use crate::linearization::{Assignment, Diagnostic, Linearization};
use crate::monomial::Monomial;
use crate::objective::Objective;
use crate::rational::Rational;
use num_traits::{Signed, Zero};
use std::collections::VecDeque;

/// Minimizes the objective over all binary points satisfying the
/// linearization's constraints. Requires a simple linearization whose
/// undirected digraph is acyclic; cyclic instances must go through the
/// integrality check, the LP bound or the brute-force oracle instead.
/// Missing objective entries count as zero. Independent connected
/// components are solved independently.
pub fn solve_acyclic(
    lin: &Linearization,
    objective: &Objective,
) -> Result<(Rational, Assignment), DpError> {
    lin.require_simple()?;
    for m in objective.support() {
        if !lin.monomials().contains(m) {
            return Err(DpError::UnknownObjectiveMonomial {
                monomial: m.clone(),
            });
        }
    }
    let digraph = lin.digraph();
    if !digraph.is_undirected_acyclic() {
        return Err(DpError::CyclicInput);
    }

    let count = digraph.node_count();
    let coeffs: Vec<Rational> = (0..count)
        .map(|i| objective.coefficient(digraph.node(i)))
        .collect();

    let mut dsu = Dsu::new(count);
    for i in 0..count {
        for &j in digraph.out_neighbors(i) {
            dsu.union(i, j);
        }
    }
    let mut components: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..count {
        let root = dsu.find(i);
        components.entry(root).or_default().push(i);
    }

    let mut total = Rational::zero();
    let mut assignment = Assignment::new();
    for nodes in components.values() {
        if nodes.len() == 1 {
            // isolated singleton: take it exactly when it pays
            let i = nodes[0];
            let take = coeffs[i].is_negative();
            if take {
                total += &coeffs[i];
            }
            assignment.insert(digraph.node(i).clone(), take);
            continue;
        }
        let run = solve_component(&digraph, &coeffs, nodes)?;
        total += &run.value;
        for (node, bit) in run.assignment {
            assignment.insert(digraph.node(node).clone(), bit);
        }
    }

    // The winner must be an integer point of the relaxation, which for
    // binary vectors is exactly product consistency.
    for m in lin.monomials() {
        let product = m.iter().all(|i| assignment[&Monomial::singleton(i)]);
        if assignment[m] != product {
            return Err(DpError::Internal(
                "assignment is not product-consistent".into(),
            ));
        }
    }
    let recomputed = objective.value_of(&assignment);
    if recomputed != total {
        return Err(DpError::Internal(
            "accumulated cost disagrees with the objective value".into(),
        ));
    }
    Ok((total, assignment))
}

/// A propagated table: a binary vector over a subtree block and its cost.
#[derive(Debug, Clone)]
struct Table {
    bits: Vec<bool>,
    cost: Rational,
}

/// The two tables of a processed node: the node forced to zero or one.
/// For "up" nodes these are feasible completions of the subtree; for "down"
/// nodes feasibility is relative to the tree parent pinned to the same value.
#[derive(Debug, Clone)]
struct NodeTables {
    zero: Table,
    one: Table,
}

struct ComponentRun {
    value: Rational,
    assignment: Vec<(usize, bool)>,
    #[cfg_attr(not(test), allow(dead_code))]
    layout: TreeLayout,
    #[cfg_attr(not(test), allow(dead_code))]
    tables: Vec<Option<NodeTables>>,
}

struct TreeLayout {
    root: usize,
    #[cfg_attr(not(test), allow(dead_code))]
    parent: Vec<Option<usize>>,
    /// Tree children split by arc direction: operands of the node's own
    /// constraint, and resultants of other constraints containing the node.
    up_children: Vec<Vec<usize>>,
    down_children: Vec<Vec<usize>>,
    /// Whether the arc between node and parent points from node to parent,
    /// i.e. the parent is an operand of the node's constraint.
    is_down: Vec<bool>,
    /// Contiguous subtree blocks in depth-first preorder.
    block_start: Vec<usize>,
    block_end: Vec<usize>,
    pos_node: Vec<usize>,
    /// Nodes ordered by nonincreasing tree distance from the root.
    order: Vec<usize>,
}

fn layout_component(digraph: &LinDigraph, nodes: &[usize]) -> Result<TreeLayout, DpError> {
    let count = digraph.node_count();
    let root = nodes
        .iter()
        .copied()
        .filter(|&i| !digraph.node(i).is_singleton() && digraph.in_neighbors(i).is_empty())
        .min_by_key(|&i| digraph.node(i).clone())
        .ok_or_else(|| DpError::Internal("component without a root monomial".into()))?;

    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); count];
    for &i in nodes {
        let mut adj: Vec<usize> = digraph
            .out_neighbors(i)
            .iter()
            .chain(digraph.in_neighbors(i))
            .copied()
            .collect();
        adj.sort_unstable();
        neighbors[i] = adj;
    }

    let mut parent = vec![None; count];
    let mut depth = vec![0usize; count];
    let mut visited = vec![false; count];
    let mut bfs_order = Vec::with_capacity(nodes.len());
    let mut queue = VecDeque::from([root]);
    visited[root] = true;
    while let Some(i) = queue.pop_front() {
        bfs_order.push(i);
        for &j in &neighbors[i] {
            if !visited[j] {
                visited[j] = true;
                parent[j] = Some(i);
                depth[j] = depth[i] + 1;
                queue.push_back(j);
            }
        }
    }
    debug_assert_eq!(bfs_order.len(), nodes.len(), "components are connected");

    let mut up_children = vec![Vec::new(); count];
    let mut down_children = vec![Vec::new(); count];
    let mut is_down = vec![false; count];
    for &i in nodes {
        if let Some(p) = parent[i] {
            // arc (i, p) makes the parent an operand of i's constraint
            is_down[i] = digraph.out_neighbors(i).contains(&p);
        }
        for &j in &neighbors[i] {
            if parent[j] == Some(i) {
                if digraph.out_neighbors(i).contains(&j) {
                    up_children[i].push(j);
                } else {
                    down_children[i].push(j);
                }
            }
        }
    }

    // depth-first preorder gives every subtree a contiguous block
    let mut block_start = vec![0usize; count];
    let mut block_end = vec![0usize; count];
    let mut pos_node = Vec::with_capacity(nodes.len());
    let mut stack = vec![(root, false)];
    while let Some((i, exiting)) = stack.pop() {
        if exiting {
            block_end[i] = pos_node.len();
            continue;
        }
        block_start[i] = pos_node.len();
        pos_node.push(i);
        stack.push((i, true));
        let children: Vec<usize> = neighbors[i]
            .iter()
            .copied()
            .filter(|&j| parent[j] == Some(i))
            .collect();
        for &c in children.iter().rev() {
            stack.push((c, false));
        }
    }

    let mut order: Vec<usize> = nodes.to_vec();
    order.sort_by_key(|&i| (usize::MAX - depth[i], i));

    Ok(TreeLayout {
        root,
        parent,
        up_children,
        down_children,
        is_down,
        block_start,
        block_end,
        pos_node,
        order,
    })
}

fn solve_component(
    digraph: &LinDigraph,
    coeffs: &[Rational],
    nodes: &[usize],
) -> Result<ComponentRun, DpError> {
    let layout = layout_component(digraph, nodes)?;
    let mut tables: Vec<Option<NodeTables>> = vec![None; digraph.node_count()];

    for &m in &layout.order {
        let node_tables = if layout.is_down[m] {
            process_down_node(&layout, &tables, coeffs, m)
        } else {
            process_up_node(&layout, &tables, coeffs, m)
        };
        tables[m] = Some(node_tables);
    }

    let root_tables = tables[layout.root].as_ref().expect("root processed last");
    let winner = if root_tables.one.cost <= root_tables.zero.cost {
        &root_tables.one
    } else {
        &root_tables.zero
    };
    let value = winner.cost.clone();
    let base = layout.block_start[layout.root];
    let assignment: Vec<(usize, bool)> = winner
        .bits
        .iter()
        .enumerate()
        .map(|(offset, &bit)| (layout.pos_node[base + offset], bit))
        .collect();
    Ok(ComponentRun {
        value,
        assignment,
        layout,
        tables,
    })
}

/// Which table of a child gets stitched in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pick {
    Zero,
    One,
}

fn stitch(
    layout: &TreeLayout,
    tables: &[Option<NodeTables>],
    coeffs: &[Rational],
    m: usize,
    own_bit: bool,
    picks: &[(usize, Pick)],
) -> Table {
    let start = layout.block_start[m];
    let len = layout.block_end[m] - start;
    let mut bits = vec![false; len];
    bits[0] = own_bit;
    let mut cost = if own_bit {
        coeffs[m].clone()
    } else {
        Rational::zero()
    };
    for &(child, pick) in picks {
        let child_tables = tables[child].as_ref().expect("children processed first");
        let table = match pick {
            Pick::Zero => &child_tables.zero,
            Pick::One => &child_tables.one,
        };
        let offset = layout.block_start[child] - start;
        bits[offset..offset + table.bits.len()].copy_from_slice(&table.bits);
        cost += &table.cost;
    }
    Table { bits, cost }
}

/// Prefer the one-table on equal cost.
fn cheaper_pick(tables: &[Option<NodeTables>], child: usize) -> Pick {
    let t = tables[child].as_ref().expect("children processed first");
    if t.one.cost <= t.zero.cost {
        Pick::One
    } else {
        Pick::Zero
    }
}

/// When every operand prefers its one-table but the resultant is zero, the
/// operand with the smallest zero/one cost gap is flipped; ties go to the
/// smallest operand index.
fn picks_with_flip(tables: &[Option<NodeTables>], operands: &[usize]) -> Vec<(usize, Pick)> {
    let mut picks: Vec<(usize, Pick)> = operands
        .iter()
        .map(|&c| (c, cheaper_pick(tables, c)))
        .collect();
    if !operands.is_empty() && picks.iter().all(|&(_, p)| p == Pick::One) {
        let flip = operands
            .iter()
            .copied()
            .min_by_key(|&c| {
                let t = tables[c].as_ref().expect("children processed first");
                (t.zero.cost.clone() - t.one.cost.clone(), c)
            })
            .expect("operand list is nonempty");
        for pick in picks.iter_mut() {
            if pick.0 == flip {
                pick.1 = Pick::Zero;
            }
        }
    }
    picks
}

/// Node whose tree parent (if any) is the resultant of a constraint
/// containing it. Its constraint operands are all tree children.
fn process_up_node(
    layout: &TreeLayout,
    tables: &[Option<NodeTables>],
    coeffs: &[Rational],
    m: usize,
) -> NodeTables {
    let operands = &layout.up_children[m];
    let downs = &layout.down_children[m];

    let mut one_picks: Vec<(usize, Pick)> = downs.iter().map(|&c| (c, Pick::One)).collect();
    one_picks.extend(operands.iter().map(|&c| (c, Pick::One)));
    let one = stitch(layout, tables, coeffs, m, true, &one_picks);

    let mut zero_picks: Vec<(usize, Pick)> = downs.iter().map(|&c| (c, Pick::Zero)).collect();
    zero_picks.extend(picks_with_flip(tables, operands));
    let zero = stitch(layout, tables, coeffs, m, false, &zero_picks);

    NodeTables { zero, one }
}

/// Node whose tree parent is an operand of its own constraint. Tables are
/// built relative to the parent pinned to the matching value: with the
/// parent at one, a zero resultant forbids all remaining operands at one;
/// with the parent at zero the constraint is slack.
fn process_down_node(
    layout: &TreeLayout,
    tables: &[Option<NodeTables>],
    coeffs: &[Rational],
    m: usize,
) -> NodeTables {
    let operands = &layout.up_children[m]; // all operands except the parent
    let downs = &layout.down_children[m];

    let mut candidate_zero_picks: Vec<(usize, Pick)> =
        downs.iter().map(|&c| (c, Pick::Zero)).collect();
    candidate_zero_picks.extend(picks_with_flip(tables, operands));
    let candidate_zero = stitch(layout, tables, coeffs, m, false, &candidate_zero_picks);

    let mut candidate_one_picks: Vec<(usize, Pick)> =
        downs.iter().map(|&c| (c, Pick::One)).collect();
    candidate_one_picks.extend(operands.iter().map(|&c| (c, Pick::One)));
    let candidate_one = stitch(layout, tables, coeffs, m, true, &candidate_one_picks);

    let one = if candidate_one.cost <= candidate_zero.cost {
        candidate_one
    } else {
        candidate_zero
    };

    let mut zero_picks: Vec<(usize, Pick)> = downs.iter().map(|&c| (c, Pick::Zero)).collect();
    zero_picks.extend(operands.iter().map(|&c| (c, cheaper_pick(tables, c))));
    let zero = stitch(layout, tables, coeffs, m, false, &zero_picks);

    NodeTables { zero, one }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DpError {
    #[error(transparent)]
    Diagnostic(#[from] Diagnostic),
    #[error(
        "the digraph has an undirected cycle; use the integrality check, the LP bound \
         or the brute-force oracle for cyclic instances"
    )]
    CyclicInput,
    #[error("objective mentions {monomial}, which is not a monomial of the linearization")]
    UnknownObjectiveMonomial { monomial: Monomial },
    #[error("internal error: {0}")]
    Internal(String),
}
