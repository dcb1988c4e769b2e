//! Exact cover by Algorithm X with dancing links.
//!
//! The search always branches on an item with the fewest remaining options,
//! breaking ties by the lowest item index, and tries that item's options in
//! ascending option index. Solutions therefore come out in a fixed order.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Items `0..item_count` and options, each an ascending list of items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCoverInstance {
    item_count: usize,
    options: Vec<Vec<usize>>,
}

impl ExactCoverInstance {
    /// Sorts every option; rejects empty options, repeated items and
    /// out-of-range items.
    pub fn new(item_count: usize, options: Vec<Vec<usize>>) -> Result<Self> {
        let options = options
            .into_iter()
            .enumerate()
            .map(|(j, mut o)| {
                if o.is_empty() {
                    return Err(Error::InvalidInstance(format!("option {j} is empty")));
                }
                o.sort_unstable();
                if o.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidInstance(format!("option {j} repeats an item")));
                }
                if *o.last().unwrap() >= item_count {
                    return Err(Error::InvalidInstance(format!(
                        "option {j} names item {} but there are {item_count} items",
                        o.last().unwrap()
                    )));
                }
                Ok(o)
            })
            .collect::<Result<_>>()?;
        Ok(ExactCoverInstance {
            item_count,
            options,
        })
    }

    pub fn item_count(&self) -> usize {
        self.item_count
    }

    pub fn option_count(&self) -> usize {
        self.options.len()
    }

    pub fn options(&self) -> &[Vec<usize>] {
        &self.options
    }

    /// Whether `option_indices` select options that partition the items.
    pub fn is_exact_cover(&self, option_indices: &[usize]) -> bool {
        let mut hit = vec![false; self.item_count];
        for &j in option_indices {
            let Some(o) = self.options.get(j) else {
                return false;
            };
            for &i in o {
                if std::mem::replace(&mut hit[i], true) {
                    return false;
                }
            }
        }
        hit.into_iter().all(|h| h)
    }
}

/// Indices of the selected options, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverSolution {
    pub option_indices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Option-selection trials.
    pub nodes: u64,
    pub solutions: u64,
    /// The search space was exhausted, so `solutions` is the exact total.
    pub completed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchLimits {
    pub max_solutions: Option<u64>,
    pub node_limit: Option<u64>,
}

impl SearchLimits {
    pub fn unlimited() -> Self {
        SearchLimits::default()
    }

    pub fn nodes(node_limit: u64) -> Self {
        SearchLimits {
            max_solutions: None,
            node_limit: Some(node_limit),
        }
    }
}

const ROOT: usize = 0;

/// Knuth's sparse toroidal representation. Nodes `1..=items` are item
/// headers, followed by option nodes separated by spacers (`top == 0`).
struct Dlx {
    llink: Vec<usize>,
    rlink: Vec<usize>,
    len: Vec<usize>,
    top: Vec<usize>,
    ulink: Vec<usize>,
    dlink: Vec<usize>,
    option_of: Vec<u32>,
}

impl Dlx {
    fn new(inst: &ExactCoverInstance) -> Self {
        let n = inst.item_count;
        let total = n + 2 + inst.options.iter().map(|o| o.len() + 1).sum::<usize>();
        let mut d = Dlx {
            llink: (0..=n).map(|i| if i == 0 { n } else { i - 1 }).collect(),
            rlink: (0..=n).map(|i| if i == n { 0 } else { i + 1 }).collect(),
            len: vec![0; n + 1],
            top: vec![0; total],
            ulink: (0..total).collect(),
            dlink: (0..total).collect(),
            option_of: vec![u32::MAX; total],
        };
        // first spacer
        let mut x = n + 1;
        let mut last_spacer = x;
        for (j, o) in inst.options.iter().enumerate() {
            let first = x + 1;
            for &item in o {
                x += 1;
                let i = item + 1;
                d.top[x] = i;
                d.len[i] += 1;
                let u = d.ulink[i];
                d.ulink[x] = u;
                d.dlink[u] = x;
                d.dlink[x] = i;
                d.ulink[i] = x;
                d.option_of[x] = j as u32;
            }
            d.dlink[last_spacer] = x;
            x += 1;
            d.ulink[x] = first;
            last_spacer = x;
        }
        d
    }

    fn hide(&mut self, p: usize) {
        let mut q = p + 1;
        while q != p {
            let x = self.top[q];
            let (u, d) = (self.ulink[q], self.dlink[q]);
            if x == 0 {
                q = u;
            } else {
                self.dlink[u] = d;
                self.ulink[d] = u;
                self.len[x] -= 1;
                q += 1;
            }
        }
    }

    fn unhide(&mut self, p: usize) {
        let mut q = p - 1;
        while q != p {
            let x = self.top[q];
            let (u, d) = (self.ulink[q], self.dlink[q]);
            if x == 0 {
                q = d;
            } else {
                self.dlink[u] = q;
                self.ulink[d] = q;
                self.len[x] += 1;
                q -= 1;
            }
        }
    }

    fn cover(&mut self, i: usize) {
        let mut p = self.dlink[i];
        while p != i {
            self.hide(p);
            p = self.dlink[p];
        }
        let (l, r) = (self.llink[i], self.rlink[i]);
        self.rlink[l] = r;
        self.llink[r] = l;
    }

    fn uncover(&mut self, i: usize) {
        let (l, r) = (self.llink[i], self.rlink[i]);
        self.rlink[l] = i;
        self.llink[r] = i;
        let mut p = self.ulink[i];
        while p != i {
            self.unhide(p);
            p = self.ulink[p];
        }
    }

    /// Active item with the fewest options, lowest index first.
    fn choose_item(&self) -> usize {
        let mut best = self.rlink[ROOT];
        let mut best_len = usize::MAX;
        let mut i = best;
        while i != ROOT {
            if self.len[i] < best_len {
                best_len = self.len[i];
                best = i;
                if best_len == 0 {
                    break;
                }
            }
            i = self.rlink[i];
        }
        best
    }

    /// Commits to option `j` before the search starts.
    fn force_option(&mut self, inst: &ExactCoverInstance, j: usize) {
        for &item in &inst.options[j] {
            self.cover(item + 1);
        }
    }

    fn head_options(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut p = self.dlink[i];
        while p != i {
            out.push(self.option_of[p] as usize);
            p = self.dlink[p];
        }
        out
    }

    /// Algorithm X, iteratively. `visit` receives the selected options of
    /// each solution (unsorted) and returns `false` to stop. Returns the
    /// node count and whether the search space was exhausted.
    fn search(&mut self, node_limit: Option<u64>, mut visit: impl FnMut(&[usize]) -> bool) -> (u64, bool) {
        enum Step {
            Enter,
            Try,
            Backtrack,
        }
        let mut nodes: u64 = 0;
        // x[l]: node of the option selected (or being tried) at level l
        let mut x: Vec<usize> = Vec::new();
        let mut items: Vec<usize> = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        let mut step = Step::Enter;
        loop {
            match step {
                Step::Enter => {
                    if self.rlink[ROOT] == ROOT {
                        chosen.clear();
                        chosen.extend(x.iter().map(|&n| self.option_of[n] as usize));
                        if !visit(&chosen) {
                            return (nodes, false);
                        }
                        step = Step::Backtrack;
                    } else {
                        let i = self.choose_item();
                        self.cover(i);
                        items.push(i);
                        x.push(self.dlink[i]);
                        step = Step::Try;
                    }
                }
                Step::Try => {
                    let level = x.len() - 1;
                    let xl = x[level];
                    if xl == items[level] {
                        self.uncover(items[level]);
                        items.pop();
                        x.pop();
                        step = Step::Backtrack;
                    } else {
                        if node_limit.is_some_and(|l| nodes >= l) {
                            return (nodes, false);
                        }
                        nodes += 1;
                        let mut p = xl + 1;
                        while p != xl {
                            let j = self.top[p];
                            if j == 0 {
                                p = self.ulink[p];
                            } else {
                                self.cover(j);
                                p += 1;
                            }
                        }
                        step = Step::Enter;
                    }
                }
                Step::Backtrack => {
                    let Some(&xl) = x.last() else {
                        return (nodes, true);
                    };
                    let mut p = xl - 1;
                    while p != xl {
                        let j = self.top[p];
                        if j == 0 {
                            p = self.dlink[p];
                        } else {
                            self.uncover(j);
                            p -= 1;
                        }
                    }
                    *x.last_mut().unwrap() = self.dlink[xl];
                    step = Step::Try;
                }
            }
        }
    }
}

fn sorted(sol: &[usize]) -> Vec<usize> {
    let mut s = sol.to_vec();
    s.sort_unstable();
    s
}

fn validate(inst: &ExactCoverInstance, sol: &[usize]) -> Result<()> {
    if !inst.is_exact_cover(sol) {
        return Err(Error::Consistency(format!(
            "solver emitted a non-cover {sol:?}"
        )));
    }
    Ok(())
}

/// Enumerates exact covers up to the given limits.
///
/// Every emitted solution is re-checked against the instance.
pub fn solve(inst: &ExactCoverInstance, limits: SearchLimits) -> Result<(Vec<CoverSolution>, SearchStats)> {
    let mut solutions = Vec::new();
    let stats = for_each_solution(inst, limits, |s| {
        solutions.push(CoverSolution {
            option_indices: s.to_vec(),
        });
        true
    })?;
    Ok((solutions, stats))
}

/// Counts exact covers without storing them.
pub fn count_solutions(inst: &ExactCoverInstance, node_limit: Option<u64>) -> Result<SearchStats> {
    for_each_solution(
        inst,
        SearchLimits {
            max_solutions: None,
            node_limit,
        },
        |_| true,
    )
}

/// Calls `visit` with each solution's ascending option indices; `visit`
/// returning `false` stops the search (reported as not completed).
pub fn for_each_solution(
    inst: &ExactCoverInstance,
    limits: SearchLimits,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> Result<SearchStats> {
    let mut dlx = Dlx::new(inst);
    run(&mut dlx, inst, limits, &[], &mut visit)
}

fn run(
    dlx: &mut Dlx,
    inst: &ExactCoverInstance,
    limits: SearchLimits,
    forced: &[usize],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<SearchStats> {
    let mut solutions = 0u64;
    let mut failure = None;
    if limits.max_solutions == Some(0) {
        return Ok(SearchStats::default());
    }
    let (nodes, exhausted) = dlx.search(limits.node_limit, |chosen| {
        let mut sol = forced.to_vec();
        sol.extend_from_slice(chosen);
        let sol = sorted(&sol);
        if let Err(e) = validate(inst, &sol) {
            failure = Some(e);
            return false;
        }
        solutions += 1;
        visit(&sol) && limits.max_solutions.is_none_or(|m| solutions < m)
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(SearchStats {
        nodes,
        solutions,
        completed: exhausted,
    })
}

/// Splits the search at the root item: each of its options is explored by
/// an independent solver on the rayon pool and the results are merged in
/// option order, which reproduces the serial solution order.
///
/// Limits apply per branch; the merged list is truncated to
/// `max_solutions`.
pub fn solve_parallel(
    inst: &ExactCoverInstance,
    limits: SearchLimits,
) -> Result<(Vec<CoverSolution>, SearchStats)> {
    let probe = Dlx::new(inst);
    if probe.rlink[ROOT] == ROOT {
        return solve(inst, limits);
    }
    let root = probe.choose_item();
    let branches = probe.head_options(root);
    let results: Vec<Result<(Vec<CoverSolution>, SearchStats)>> = branches
        .par_iter()
        .map(|&j| {
            let mut dlx = Dlx::new(inst);
            dlx.force_option(inst, j);
            let mut sols = Vec::new();
            let stats = run(&mut dlx, inst, limits, &[j], &mut |s| {
                sols.push(CoverSolution {
                    option_indices: s.to_vec(),
                });
                true
            })?;
            Ok((sols, stats))
        })
        .collect();
    let mut all = Vec::new();
    let mut stats = SearchStats {
        nodes: 0,
        solutions: 0,
        completed: true,
    };
    for r in results {
        let (sols, s) = r?;
        stats.nodes += s.nodes + 1;
        stats.completed &= s.completed;
        all.extend(sols);
    }
    if let Some(m) = limits.max_solutions {
        if all.len() as u64 > m {
            all.truncate(m as usize);
            stats.completed = false;
        }
    }
    stats.solutions = all.len() as u64;
    Ok((all, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize, opts: &[&[usize]]) -> ExactCoverInstance {
        ExactCoverInstance::new(n, opts.iter().map(|o| o.to_vec()).collect()).unwrap()
    }

    fn option_sets(sols: &[CoverSolution]) -> Vec<Vec<usize>> {
        sols.iter().map(|s| s.option_indices.clone()).collect()
    }

    #[test]
    fn two_item_instance() {
        let i = inst(2, &[&[0], &[1], &[0, 1]]);
        let (sols, stats) = solve(&i, SearchLimits::unlimited()).unwrap();
        assert_eq!(option_sets(&sols), vec![vec![0, 1], vec![2]]);
        assert_eq!(stats.solutions, 2);
        assert!(stats.completed);
    }

    #[test]
    fn empty_instance_has_the_empty_cover() {
        let i = inst(0, &[]);
        let (sols, stats) = solve(&i, SearchLimits::unlimited()).unwrap();
        assert_eq!(option_sets(&sols), vec![Vec::<usize>::new()]);
        assert!(stats.completed);
    }

    #[test]
    fn uncoverable_item() {
        let stats = count_solutions(&inst(1, &[]), None).unwrap();
        assert_eq!(stats.solutions, 0);
        assert!(stats.completed);
    }

    #[test]
    fn knuth_example() {
        // Items a..g = 0..6 as in Knuth's dancing links example; unique cover {1,4,5}.
        let i = inst(
            7,
            &[&[2, 4, 5], &[0, 3, 6], &[1, 2, 5], &[0, 3], &[1, 6], &[3, 4, 6]],
        );
        let (sols, _) = solve(&i, SearchLimits::unlimited()).unwrap();
        assert_eq!(option_sets(&sols), vec![vec![0, 3, 4]]);
    }

    #[test]
    fn malformed_instances() {
        assert!(ExactCoverInstance::new(2, vec![vec![]]).is_err());
        assert!(ExactCoverInstance::new(2, vec![vec![0, 0]]).is_err());
        assert!(ExactCoverInstance::new(2, vec![vec![2]]).is_err());
        let sorted = ExactCoverInstance::new(3, vec![vec![2, 0]]).unwrap();
        assert_eq!(sorted.options()[0], vec![0, 2]);
    }

    #[test]
    fn limits() {
        // 4 items, all singletons and all pairs: many covers
        let mut opts: Vec<Vec<usize>> = (0..4).map(|i| vec![i]).collect();
        for a in 0..4 {
            for b in a + 1..4 {
                opts.push(vec![a, b]);
            }
        }
        let i = ExactCoverInstance::new(4, opts).unwrap();
        let full = count_solutions(&i, None).unwrap();
        // Bell-like count of partitions into blocks of size <= 2 of 4 items: 10
        assert_eq!(full.solutions, 10);
        assert!(full.completed);
        let (sols, st) = solve(
            &i,
            SearchLimits {
                max_solutions: Some(3),
                node_limit: None,
            },
        )
        .unwrap();
        assert_eq!(sols.len(), 3);
        assert!(!st.completed);
        let st = count_solutions(&i, Some(2)).unwrap();
        assert!(!st.completed);
        assert!(st.nodes <= 2);
    }

    #[test]
    fn parallel_matches_serial() {
        let mut opts: Vec<Vec<usize>> = (0..5).map(|i| vec![i]).collect();
        for a in 0..5 {
            for b in a + 1..5 {
                opts.push(vec![a, b]);
            }
        }
        opts.push(vec![0, 1, 2]);
        let i = ExactCoverInstance::new(5, opts).unwrap();
        let (serial, s1) = solve(&i, SearchLimits::unlimited()).unwrap();
        let (par, s2) = solve_parallel(&i, SearchLimits::unlimited()).unwrap();
        assert_eq!(serial, par);
        assert_eq!(s1.solutions, s2.solutions);
        assert_eq!(s1.nodes, s2.nodes);
        assert!(s2.completed);
    }
}
