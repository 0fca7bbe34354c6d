//! Budgeted reward-collecting tours: greedy insertion by marginal
//! reward/cost ratio with 2-opt improvement, plus an exact brute-force
//! solver for small instances.
//!
//! Rewards are collected once per node; passing through a node again adds
//! cost but no reward. Starting from the robot, the tour is open (no return
//! leg) and may be empty when nothing fits the budget.

use serde::{Deserialize, Serialize};

use crate::plan::PlanError;
use crate::scalar::{cast, Scalar};

/// A candidate helper to visit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HelpNode<T> {
    pub id: String,
    /// Position in meters, for log replay; costs come from the matrix.
    pub position: [T; 2],
    /// Expected helpfulness, non-negative.
    pub reward: T,
    /// Rewarded nodes contribute zero on replanning.
    pub visited: bool,
}

/// Travel seconds between start (index 0) and nodes (index i+1).
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix<T> {
    n: usize,
    costs: Vec<T>,
}

impl<T: Scalar> CostMatrix<T> {
    /// `n` nodes; entry (i, j) is the cost from place i to place j where
    /// place 0 is the start and place k+1 is node k.
    pub fn new(n: usize, costs: Vec<T>) -> Self {
        assert_eq!(costs.len(), (n + 1) * (n + 1), "square matrix over start + nodes");
        CostMatrix { n, costs }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut costs = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..=n {
            for j in 0..=n {
                costs.push(f(i, j));
            }
        }
        CostMatrix { n, costs }
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    /// Cost from place `i` to place `j` (0 = start, k+1 = node k).
    pub fn cost(&self, i: usize, j: usize) -> T {
        self.costs[i * (self.n + 1) + j]
    }
}

/// A planned visit order with its collected reward and spent budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TourPlan<T> {
    /// Node ids in visit order.
    pub node_ids: Vec<String>,
    /// Node indices in visit order.
    pub order: Vec<usize>,
    pub total_reward: T,
    pub total_cost: T,
    pub budget: T,
}

impl<T: Scalar> TourPlan<T> {
    fn empty(budget: T) -> Self {
        TourPlan {
            node_ids: Vec::new(),
            order: Vec::new(),
            total_reward: T::zero(),
            total_cost: T::zero(),
            budget,
        }
    }
}

fn effective_reward<T: Scalar>(node: &HelpNode<T>) -> T {
    if node.visited {
        T::zero()
    } else {
        node.reward
    }
}

fn tour_cost<T: Scalar>(order: &[usize], cost: &CostMatrix<T>) -> T {
    let mut total = T::zero();
    let mut prev = 0usize;
    for &node in order {
        total += cost.cost(prev, node + 1);
        prev = node + 1;
    }
    total
}

fn tour_reward<T: Scalar>(order: &[usize], nodes: &[HelpNode<T>]) -> T {
    order.iter().map(|&i| effective_reward(&nodes[i])).sum()
}

fn build_plan<T: Scalar>(order: Vec<usize>, nodes: &[HelpNode<T>], cost: &CostMatrix<T>, budget: T) -> TourPlan<T> {
    TourPlan {
        node_ids: order.iter().map(|&i| nodes[i].id.clone()).collect(),
        total_reward: tour_reward(&order, nodes),
        total_cost: tour_cost(&order, cost),
        budget,
        order,
    }
}

/// How an insertion candidate is scored: reward over marginal cost, reward
/// over the square root of marginal cost (cost de-emphasized), or reward
/// alone. Running all three rules and keeping the best tour guards against
/// the traps of any single priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum InsertRule {
    RewardPerCost,
    RewardPerSqrtCost,
    RewardOnly,
}

fn insert_score<T: Scalar>(rule: InsertRule, reward: T, delta: T, tiny: T) -> T {
    match rule {
        InsertRule::RewardPerCost => reward / (delta + tiny),
        InsertRule::RewardPerSqrtCost => reward / (delta + tiny).sqrt(),
        InsertRule::RewardOnly => reward,
    }
}

fn greedy_tour<T: Scalar>(
    nodes: &[HelpNode<T>],
    cost: &CostMatrix<T>,
    budget: T,
    rule: InsertRule,
    seed: Option<usize>,
) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = Vec::new();
    let mut in_tour = vec![false; nodes.len()];
    if let Some(v) = seed {
        if tour_cost(&[v], cost) > budget {
            return None;
        }
        order.push(v);
        in_tour[v] = true;
    }
    let tiny = cast::<T>(1e-12);
    // conservative slack so the exact recomputed tour cost never lands above
    // the budget after an O(1)-delta feasibility check
    let guard = (cast::<T>(1e-9) * (T::one() + budget.abs()))
        .max(cast::<T>(64.0) * T::epsilon() * (T::one() + budget.abs()));

    loop {
        let mut changed = false;
        // insertion phase: best (node, position) under the priority rule
        loop {
            let current_cost = tour_cost(&order, cost);
            let mut best: Option<(T, T, usize, usize)> = None; // (score, reward, node, pos)
            for v in 0..nodes.len() {
                if in_tour[v] {
                    continue;
                }
                let reward = effective_reward(&nodes[v]);
                if reward <= T::zero() {
                    continue;
                }
                for pos in 0..=order.len() {
                    let prev = if pos == 0 { 0 } else { order[pos - 1] + 1 };
                    let delta = if pos == order.len() {
                        cost.cost(prev, v + 1)
                    } else {
                        let next = order[pos] + 1;
                        cost.cost(prev, v + 1) + cost.cost(v + 1, next) - cost.cost(prev, next)
                    };
                    if current_cost + delta > budget - guard {
                        continue;
                    }
                    let delta = delta.max(T::zero());
                    let score = insert_score(rule, reward, delta, tiny);
                    let better = match &best {
                        None => true,
                        Some((s, rew, bv, bp)) => {
                            score > *s
                                || (score == *s
                                    && (reward > *rew
                                        || (reward == *rew
                                            && (v < *bv || (v == *bv && pos < *bp)))))
                        }
                    };
                    if better {
                        best = Some((score, reward, v, pos));
                    }
                }
            }
            match best {
                Some((_, _, v, pos)) => {
                    order.insert(pos, v);
                    in_tour[v] = true;
                    changed = true;
                }
                None => break,
            }
        }
        // 2-opt phase: reverse segments that shorten the path
        let mut improved = true;
        while improved {
            improved = false;
            let current = tour_cost(&order, cost);
            'outer: for i in 0..order.len() {
                for j in (i + 1)..order.len() {
                    let mut candidate = order.clone();
                    candidate[i..=j].reverse();
                    let c = tour_cost(&candidate, cost);
                    if c < current && c <= budget {
                        order = candidate;
                        improved = true;
                        changed = true;
                        break 'outer;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Some(order)
}

/// Greedy insertion by marginal reward/cost ratio with 2-opt improvement,
/// restarted from each possible first node and under three priority rules,
/// keeping the best tour found. Never exceeds the budget; the empty tour is
/// valid when nothing fits.
pub fn plan_tour<T: Scalar>(nodes: &[HelpNode<T>], cost: &CostMatrix<T>, budget: T) -> TourPlan<T> {
    assert_eq!(nodes.len(), cost.n_nodes(), "cost matrix must cover all nodes");
    if budget < T::zero() {
        return TourPlan::empty(T::zero().max(budget));
    }
    let mut best: Option<TourPlan<T>> = None;
    let seeds = std::iter::once(None).chain((0..nodes.len()).map(Some));
    for seed in seeds {
        for rule in
            [InsertRule::RewardPerCost, InsertRule::RewardPerSqrtCost, InsertRule::RewardOnly]
        {
            let Some(order) = greedy_tour(nodes, cost, budget, rule, seed) else {
                continue;
            };
            let plan = build_plan(order, nodes, cost, budget);
            let take = match &best {
                None => true,
                Some(b) => {
                    plan.total_reward > b.total_reward
                        || (plan.total_reward == b.total_reward && plan.total_cost < b.total_cost)
                }
            };
            if take {
                best = Some(plan);
            }
        }
    }
    best.unwrap_or_else(|| TourPlan::empty(budget))
}

/// Exact optimum by enumerating ordered subsets within the budget.
/// Guarded to small instances; ties break toward lower cost, then the
/// lexicographically smallest id sequence.
pub fn brute_force_tour<T: Scalar>(
    nodes: &[HelpNode<T>],
    cost: &CostMatrix<T>,
    budget: T,
) -> Result<TourPlan<T>, PlanError> {
    let (plan, _) = brute_force_tour_counted(nodes, cost, budget)?;
    Ok(plan)
}

/// As [`brute_force_tour`], also returning the number of prefixes examined.
pub fn brute_force_tour_counted<T: Scalar>(
    nodes: &[HelpNode<T>],
    cost: &CostMatrix<T>,
    budget: T,
) -> Result<(TourPlan<T>, u64), PlanError> {
    const MAX_N: usize = 10;
    if nodes.len() > MAX_N {
        return Err(PlanError::InstanceTooLarge { n: nodes.len(), max: MAX_N });
    }
    assert_eq!(nodes.len(), cost.n_nodes());
    let budget = if budget < T::zero() { T::zero() } else { budget };

    struct Search<'a, T: Scalar> {
        nodes: &'a [HelpNode<T>],
        cost: &'a CostMatrix<T>,
        budget: T,
        examined: u64,
        best_order: Vec<usize>,
        best_reward: T,
        best_cost: T,
    }

    impl<T: Scalar> Search<'_, T> {
        fn consider(&mut self, order: &[usize], reward: T, cost: T) {
            let ids: Vec<&str> = order.iter().map(|&i| self.nodes[i].id.as_str()).collect();
            let best_ids: Vec<&str> =
                self.best_order.iter().map(|&i| self.nodes[i].id.as_str()).collect();
            let better = reward > self.best_reward
                || (reward == self.best_reward
                    && (cost < self.best_cost || (cost == self.best_cost && ids < best_ids)));
            if better {
                self.best_order = order.to_vec();
                self.best_reward = reward;
                self.best_cost = cost;
            }
        }

        fn dfs(&mut self, order: &mut Vec<usize>, used: &mut [bool], cost_so_far: T, reward_so_far: T) {
            for v in 0..self.nodes.len() {
                if used[v] {
                    continue;
                }
                self.examined += 1;
                let prev = order.last().map(|&i| i + 1).unwrap_or(0);
                let c = cost_so_far + self.cost.cost(prev, v + 1);
                if c > self.budget {
                    continue; // prune: extending only adds non-negative cost
                }
                let r = reward_so_far + effective_reward(&self.nodes[v]);
                order.push(v);
                used[v] = true;
                self.consider(order, r, c);
                self.dfs(order, used, c, r);
                used[v] = false;
                order.pop();
            }
        }
    }

    let mut search = Search {
        nodes,
        cost,
        budget,
        examined: 0,
        best_order: Vec::new(),
        best_reward: T::zero(),
        best_cost: T::zero(),
    };
    let mut order = Vec::new();
    let mut used = vec![false; nodes.len()];
    search.dfs(&mut order, &mut used, T::zero(), T::zero());
    let plan = build_plan(search.best_order, nodes, cost, budget);
    Ok((plan, search.examined))
}

/// Re-plan with the remaining budget and the current node set; nodes already
/// rewarded carry zero reward.
pub fn replan<T: Scalar>(
    nodes_now: &[HelpNode<T>],
    cost: &CostMatrix<T>,
    prior: &TourPlan<T>,
    elapsed: T,
) -> TourPlan<T> {
    debug_assert!(elapsed <= prior.budget);
    let remaining = (prior.budget - elapsed).max(T::zero());
    plan_tour(nodes_now, cost, remaining)
}
