//! Sequential and parallel drivers for the DFS.

use std::sync::atomic::Ordering;

use super::dfs::{Control, Flow, Problem, Shared};
use super::SearchOptions;

pub(crate) enum Found {
    Leaf(Vec<u8>),
    Nothing,
    OutOfBudget,
}

fn sequential(prob: &Problem, budget: u64) -> (Found, u64) {
    let shared = Shared::new(budget);
    let mut ctl = Control::new(&shared, 0);
    let mut st = prob.root();
    let mut leaf = None;
    let flow = prob.dfs(&mut st, &mut ctl, &mut |s| {
        leaf = Some(s.assign.clone());
        true
    });
    ctl.flush();
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let found = match flow {
        Flow::Stop => Found::Leaf(leaf.expect("leaf recorded on stop")),
        Flow::Continue => Found::Nothing,
        Flow::Abort => Found::OutOfBudget,
    };
    (found, nodes)
}

/// First complete assignment in DFS order, or proof that none exists.
pub(crate) fn first_leaf(prob: &Problem, opts: SearchOptions) -> (Found, u64) {
    #[cfg(feature = "parallel")]
    if opts.threads > 1 {
        return parallel::first_leaf(prob, opts);
    }
    sequential(prob, opts.budget)
}

/// Every complete assignment in DFS order; `None` if the budget runs out.
pub(crate) fn all_leaves(prob: &Problem, budget: u64) -> Option<Vec<Vec<u8>>> {
    let shared = Shared::new(budget);
    let mut ctl = Control::new(&shared, 0);
    let mut st = prob.root();
    let mut out = vec![];
    let flow = prob.dfs(&mut st, &mut ctl, &mut |s| {
        out.push(s.assign.clone());
        false
    });
    (flow == Flow::Continue).then_some(out)
}

#[cfg(feature = "parallel")]
mod parallel {
    use std::sync::atomic::Ordering;

    use rayon::prelude::*;

    use super::super::dfs::{Control, Flow, Problem, Shared};
    use super::super::SearchOptions;
    use super::{sequential, Found};

    enum Task {
        Leaf(Vec<u8>),
        Exhausted,
        Aborted,
    }

    /// Splits the top of the tree into subtrees kept in DFS order and runs
    /// them on a pool. The lowest-index subtree holding a witness wins, which
    /// is the witness the sequential search would return.
    pub(super) fn first_leaf(prob: &Problem, opts: SearchOptions) -> (Found, u64) {
        let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(opts.threads).build() else {
            return sequential(prob, opts.budget);
        };
        let shared = Shared::new(opts.budget);
        let mut ctl = Control::new(&shared, 0);
        let frontier = prob.expand(prob.root(), opts.threads * 16, &mut ctl);
        ctl.flush();
        let Some(frontier) = frontier else {
            return (Found::OutOfBudget, shared.nodes.load(Ordering::Relaxed));
        };
        let results: Vec<Task> = pool.install(|| {
            frontier
                .into_par_iter()
                .enumerate()
                .map(|(idx, mut st)| {
                    if shared.best_task.load(Ordering::Relaxed) < idx || shared.out_of_budget.load(Ordering::Relaxed) {
                        return Task::Aborted;
                    }
                    let mut ctl = Control::new(&shared, idx);
                    let mut leaf = None;
                    let flow = prob.dfs(&mut st, &mut ctl, &mut |s| {
                        leaf = Some(s.assign.clone());
                        true
                    });
                    ctl.flush();
                    match flow {
                        Flow::Stop => {
                            shared.best_task.fetch_min(idx, Ordering::Relaxed);
                            Task::Leaf(leaf.expect("leaf recorded on stop"))
                        }
                        Flow::Continue => Task::Exhausted,
                        Flow::Abort => Task::Aborted,
                    }
                })
                .collect()
        });
        let nodes = shared.nodes.load(Ordering::Relaxed);
        for t in results {
            match t {
                Task::Exhausted => continue,
                Task::Leaf(a) => return (Found::Leaf(a), nodes),
                Task::Aborted => return (Found::OutOfBudget, nodes),
            }
        }
        (Found::Nothing, nodes)
    }
}
