//! Exact optimum over deterministic communication protocols with a bit
//! budget, by dynamic programming over input rectangles.
//!
//! A deterministic protocol of depth d is a binary tree: each internal node
//! names a speaker and a message bit computed from that speaker's input
//! (the path so far is implicit in the node's position), and each leaf
//! assigns outputs to both parties. The inputs reaching any node form a
//! rectangle Xr×Yr, so the optimum satisfies a recurrence over
//! (rectangle, remaining budget): either stop and pick the best local
//! output maps, or let one party split its side of the rectangle in any of
//! 2^|side| ways and recurse. For a fixed input distribution this optimum
//! also bounds shared-randomness protocols, since a mixture can do no
//! better than its best deterministic component.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::runtime::PartyId;
use crate::search::task::TaskSpec;

/// Sets bigger than this many elements per side make rectangle masks and
/// message enumeration unreasonable.
pub const MAX_SET_SIZE: usize = 8;

/// Deepest tree the search will consider.
pub const MAX_BUDGET: usize = 4;

/// Cap on output-map pairs enumerated at a single leaf.
pub const LEAF_ENUMERATION_CAP: u64 = 1 << 20;

/// A node of a deterministic protocol tree. Maps are total on the full
/// input sets; only entries inside the node's rectangle are ever consulted.
#[derive(Debug, Clone)]
pub enum TreeNode {
    Leaf {
        alice_outputs: Vec<usize>,
        bob_outputs: Vec<usize>,
    },
    Send {
        speaker: PartyId,
        /// Message bit per input of the speaker.
        message: Vec<u8>,
        /// Children indexed by the transmitted bit.
        children: Box<[TreeNode; 2]>,
    },
}

/// A complete searched protocol: tree plus the budget it was found under.
#[derive(Debug, Clone)]
pub struct ProtocolTree {
    pub root: TreeNode,
    pub budget: usize,
}

impl ProtocolTree {
    /// Depth of the tree = bits spoken on the longest path.
    pub fn depth(&self) -> usize {
        fn depth(node: &TreeNode) -> usize {
            match node {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Send { children, .. } => 1 + depth(&children[0]).max(depth(&children[1])),
            }
        }
        depth(&self.root)
    }

    /// Outputs the tree produces on one input pair.
    pub fn outputs(&self, xi: usize, yi: usize) -> (usize, usize) {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf {
                    alice_outputs,
                    bob_outputs,
                } => return (alice_outputs[xi], bob_outputs[yi]),
                TreeNode::Send {
                    speaker,
                    message,
                    children,
                } => {
                    let bit = match speaker {
                        PartyId::Alice => message[xi],
                        PartyId::Bob => message[yi],
                    };
                    node = &children[bit as usize];
                }
            }
        }
    }
}

/// Search result: the optimal tree and its success probability.
#[derive(Debug, Clone)]
pub struct BoundedSearchResult {
    pub tree: ProtocolTree,
    pub success: f64,
    /// (satisfied support pairs, support size) when equiweighted.
    pub exact_count: Option<(u64, u64)>,
}

/// Re-evaluates a tree from scratch against the task.
pub fn evaluate_tree(task: &TaskSpec, tree: &ProtocolTree) -> (f64, (u64, u64)) {
    let weights = task.weights();
    let support = task.support();
    let mut success = 0.0;
    let mut satisfied = 0u64;
    for &(xi, yi) in &support {
        let (ai, bi) = tree.outputs(xi, yi);
        if task.relation(xi, yi, ai, bi) {
            success += weights[xi * task.ny() + yi];
            satisfied += 1;
        }
    }
    (success, (satisfied, support.len() as u64))
}

struct Search<'a> {
    task: &'a TaskSpec,
    weights: Vec<f64>,
    memo: HashMap<(u32, u32, usize), (f64, TreeNode)>,
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

impl Search<'_> {
    /// Best pair of local output maps on the rectangle, no communication.
    fn best_leaf(&self, x_mask: u32, y_mask: u32) -> Result<(f64, TreeNode)> {
        let task = self.task;
        let xs = members(x_mask);
        let ys = members(y_mask);
        let combos =
            (task.na() as f64).powi(xs.len() as i32) * (task.nb() as f64).powi(ys.len() as i32);
        if combos > LEAF_ENUMERATION_CAP as f64 {
            return Err(Error::Capacity(format!(
                "{combos:.3e} leaf output maps exceed the bound of {LEAF_ENUMERATION_CAP}"
            )));
        }

        let mut best = (-1.0, Vec::new(), Vec::new());
        let mut alice = vec![0usize; xs.len()];
        loop {
            let mut bob = vec![0usize; ys.len()];
            loop {
                let mut score = 0.0;
                for (xpos, &xi) in xs.iter().enumerate() {
                    for (ypos, &yi) in ys.iter().enumerate() {
                        let w = self.weights[xi * task.ny() + yi];
                        if w > 0.0 && task.relation(xi, yi, alice[xpos], bob[ypos]) {
                            score += w;
                        }
                    }
                }
                if score > best.0 {
                    best = (score, alice.clone(), bob.clone());
                }
                if !super::zero_comm::next_map(&mut bob, task.nb()) {
                    break;
                }
            }
            if !super::zero_comm::next_map(&mut alice, task.na()) {
                break;
            }
        }

        let mut alice_outputs = vec![0usize; task.nx()];
        let mut bob_outputs = vec![0usize; task.ny()];
        for (pos, &xi) in xs.iter().enumerate() {
            alice_outputs[xi] = best.1[pos];
        }
        for (pos, &yi) in ys.iter().enumerate() {
            bob_outputs[yi] = best.2[pos];
        }
        Ok((
            best.0,
            TreeNode::Leaf {
                alice_outputs,
                bob_outputs,
            },
        ))
    }

    fn optimum(&mut self, x_mask: u32, y_mask: u32, budget: usize) -> Result<(f64, TreeNode)> {
        if x_mask == 0 || y_mask == 0 {
            // empty rectangle: nothing to get right or wrong
            return Ok((
                0.0,
                TreeNode::Leaf {
                    alice_outputs: vec![0; self.task.nx()],
                    bob_outputs: vec![0; self.task.ny()],
                },
            ));
        }
        if let Some(hit) = self.memo.get(&(x_mask, y_mask, budget)) {
            return Ok(hit.clone());
        }

        let mut best = self.best_leaf(x_mask, y_mask)?;
        if budget > 0 {
            for speaker in [PartyId::Alice, PartyId::Bob] {
                let side = match speaker {
                    PartyId::Alice => members(x_mask),
                    PartyId::Bob => members(y_mask),
                };
                // every message function on this side: subset sent as bit 1
                for split in 0..(1u32 << side.len()) {
                    let mut mask0 = 0u32;
                    let mut mask1 = 0u32;
                    for (pos, &i) in side.iter().enumerate() {
                        if split & (1 << pos) != 0 {
                            mask1 |= 1 << i;
                        } else {
                            mask0 |= 1 << i;
                        }
                    }
                    let ((s0, n0), (s1, n1)) = match speaker {
                        PartyId::Alice => (
                            self.optimum(mask0, y_mask, budget - 1)?,
                            self.optimum(mask1, y_mask, budget - 1)?,
                        ),
                        PartyId::Bob => (
                            self.optimum(x_mask, mask0, budget - 1)?,
                            self.optimum(x_mask, mask1, budget - 1)?,
                        ),
                    };
                    let score = s0 + s1;
                    if score > best.0 {
                        let domain = match speaker {
                            PartyId::Alice => self.task.nx(),
                            PartyId::Bob => self.task.ny(),
                        };
                        let mut message = vec![0u8; domain];
                        for (pos, &i) in side.iter().enumerate() {
                            message[i] = ((split >> pos) & 1) as u8;
                        }
                        best = (
                            score,
                            TreeNode::Send {
                                speaker,
                                message,
                                children: Box::new([n0, n1]),
                            },
                        );
                    }
                }
            }
        }

        self.memo.insert((x_mask, y_mask, budget), best.clone());
        Ok(best)
    }
}

/// Exact optimum over deterministic protocol trees of depth ≤ `budget`.
pub fn best_bounded_comm(task: &TaskSpec, budget: usize) -> Result<BoundedSearchResult> {
    if task.nx() > MAX_SET_SIZE || task.ny() > MAX_SET_SIZE {
        return Err(Error::Capacity(format!(
            "input sets beyond {MAX_SET_SIZE} elements are outside the search bound"
        )));
    }
    if budget > MAX_BUDGET {
        return Err(Error::Capacity(format!(
            "budgets beyond {MAX_BUDGET} bits are outside the search bound"
        )));
    }
    let mut search = Search {
        task,
        weights: task.weights(),
        memo: HashMap::new(),
    };
    let full_x = (1u32 << task.nx()) - 1;
    let full_y = (1u32 << task.ny()) - 1;
    let (_, root) = search.optimum(full_x, full_y, budget)?;
    let tree = ProtocolTree { root, budget };
    let (success, counts) = evaluate_tree(task, &tree);
    Ok(BoundedSearchResult {
        tree,
        success,
        exact_count: task.is_equiweighted().then_some(counts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::task::InputDistribution;

    #[test]
    fn receiver_equality_with_one_bit_is_solved_exactly() {
        // Alice sends her bit; Bob then knows whether the inputs match
        let task = TaskSpec::equality_receiver(1).unwrap();
        let result = best_bounded_comm(&task, 1).unwrap();
        assert!((result.success - 1.0).abs() < 1e-12);
        assert_eq!(result.exact_count, Some((4, 4)));
        assert!(result.tree.depth() <= 1);
    }

    #[test]
    fn two_sided_equality_needs_two_bits() {
        // when both parties must announce the answer, one bit leaves the
        // silent party guessing on half the pairs; a reply bit fixes it
        let task = TaskSpec::equality(1).unwrap();
        let one_bit = best_bounded_comm(&task, 1).unwrap();
        assert!((one_bit.success - 0.5).abs() < 1e-12);
        let two_bits = best_bounded_comm(&task, 2).unwrap();
        assert!((two_bits.success - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_budget_matches_zero_comm_search() {
        let task = TaskSpec::equality(1).unwrap();
        let bounded = best_bounded_comm(&task, 0).unwrap();
        let local = super::super::zero_comm::best_zero_comm(&task).unwrap();
        assert!((bounded.success - local.success).abs() < 1e-12);
    }

    #[test]
    fn generous_budget_reaches_certainty() {
        // budget ≥ ⌈lg|X|⌉ + ⌈lg|Z|⌉: send the input, send the answer
        let task = TaskSpec::equality(2).unwrap();
        let result = best_bounded_comm(&task, 3).unwrap();
        assert!((result.success - 1.0).abs() < 1e-12);
    }

    #[test]
    fn success_is_monotone_in_the_budget() {
        let task = TaskSpec::cvdnt(false).unwrap();
        let mut last = -1.0;
        for budget in 0..=2 {
            let result = best_bounded_comm(&task, budget).unwrap();
            assert!(
                result.success >= last - 1e-12,
                "budget {budget}: {} < {last}",
                result.success
            );
            last = result.success;
        }
    }

    #[test]
    fn search_value_survives_re_evaluation() {
        let task = TaskSpec::cvdnt(true).unwrap();
        let result = best_bounded_comm(&task, 2).unwrap();
        let (success, _) = evaluate_tree(&task, &result.tree);
        assert_eq!(success, result.success);
    }

    #[test]
    fn oversized_sets_and_budgets_error_out() {
        let task = TaskSpec::equality(4).unwrap(); // 16 elements per side
        assert!(matches!(
            best_bounded_comm(&task, 1),
            Err(Error::Capacity(_))
        ));
        let small = TaskSpec::equality(1).unwrap();
        assert!(matches!(
            best_bounded_comm(&small, 9),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn explicit_distributions_are_respected() {
        // all weight on one pair: a zero-bit protocol already wins
        let mut weights = vec![0.0; 4];
        weights[0] = 1.0;
        let task = TaskSpec::from_predicates(
            "pointmass",
            [
                vec!["0".into(), "1".into()],
                vec!["0".into(), "1".into()],
                vec!["0".into(), "1".into()],
                vec!["0".into(), "1".into()],
            ],
            |xi, yi, ai, bi| ai == usize::from(xi == yi) && bi == usize::from(xi == yi),
            None::<fn(usize, usize) -> bool>,
            InputDistribution::Explicit(weights),
        )
        .unwrap();
        let result = best_bounded_comm(&task, 0).unwrap();
        assert!((result.success - 1.0).abs() < 1e-12);
        assert_eq!(result.exact_count, Some((1, 1))); // single supported pair
    }

    proptest::proptest! {
        /// Extra bits never hurt, on arbitrary small relations.
        #[test]
        fn budget_monotonicity_on_random_tasks(
            nx in 2usize..=3,
            ny in 2usize..=3,
            table in proptest::collection::vec(proptest::bool::ANY, 3 * 3 * 2 * 2),
        ) {
            let labels = |count: usize| -> Vec<String> {
                (0..count).map(|i| i.to_string()).collect()
            };
            let task = TaskSpec::from_predicates(
                "random",
                [labels(nx), labels(ny), labels(2), labels(2)],
                |xi, yi, ai, bi| table[((xi * 3 + yi) * 2 + ai) * 2 + bi],
                None::<fn(usize, usize) -> bool>,
                InputDistribution::UniformAll,
            )
            .unwrap();
            let mut last = -1.0;
            for budget in 0..=2usize {
                let result = best_bounded_comm(&task, budget).unwrap();
                proptest::prop_assert!(result.success >= last - 1e-12);
                last = result.success;
            }
        }
    }
}
