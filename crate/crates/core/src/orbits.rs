//! Orbits of a permutation group on `s`-subsets of points.
//!
//! Subsets are packed into `u128` masks while orbits are expanded, so the
//! group degree is limited to 128 points.

use std::collections::HashSet;

use crate::combinatorics::{
    binomial_big, from_mask, next_combination, to_mask, BitSet, SubsetMask, SubsetRanker,
    MAX_MASK_POINTS,
};
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// Default refusal threshold for [`orbit_transversal`]: `C(n,s)` above this
/// many subsets is an error.
pub const DEFAULT_SUBSET_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetOrbit {
    /// Lexicographically least member.
    pub representative: Vec<usize>,
    pub size: usize,
    /// All members in lexicographic order, when materialized.
    pub members: Option<Vec<Vec<usize>>>,
}

/// One orbit per class of `s`-subsets, ordered by representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTransversal {
    pub n: usize,
    pub s: usize,
    pub orbits: Vec<SubsetOrbit>,
}

impl OrbitTransversal {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Sum of the orbit sizes.
    pub fn total_size(&self) -> u64 {
        self.orbits.iter().map(|o| o.size as u64).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.size).collect()
    }
}

pub(crate) fn check_mask_degree(degree: usize) -> Result<()> {
    if degree > MAX_MASK_POINTS {
        return Err(Error::PointOutOfRange {
            point: degree - 1,
            degree: MAX_MASK_POINTS,
        });
    }
    Ok(())
}

/// Breadth-first closure of `start` under the generators. `insert` records
/// a mask and reports whether it was new; the closure is returned in
/// discovery order.
pub(crate) fn expand_orbit(
    gens: &[&Permutation],
    start: SubsetMask,
    mut insert: impl FnMut(SubsetMask) -> bool,
) -> Vec<SubsetMask> {
    let mut members = Vec::new();
    if insert(start) {
        members.push(start);
    }
    let mut i = 0;
    while i < members.len() {
        let m = members[i];
        for g in gens {
            let img = g.apply_mask(m);
            if insert(img) {
                members.push(img);
            }
        }
        i += 1;
    }
    members
}

fn sorted_members(masks: &[SubsetMask]) -> Vec<Vec<usize>> {
    let mut members: Vec<Vec<usize>> = masks.iter().map(|&m| from_mask(m)).collect();
    members.sort_unstable();
    members
}

/// The orbit of `subset` under `group`, with members materialized.
pub fn subset_orbit(group: &PermGroup, subset: &[usize]) -> Result<SubsetOrbit> {
    check_mask_degree(group.degree())?;
    if let Some(&p) = subset.iter().find(|&&p| p >= group.degree()) {
        return Err(Error::PointOutOfRange {
            point: p,
            degree: group.degree(),
        });
    }
    let mask = to_mask(subset);
    if mask.count_ones() as usize != subset.len() {
        return Err(Error::InvalidBlock {
            block: subset.to_vec(),
            reason: "repeated point".into(),
        });
    }
    let gens: Vec<&Permutation> = group.nontrivial_generators().collect();
    let mut seen = HashSet::new();
    let masks = expand_orbit(&gens, mask, |m| seen.insert(m));
    let members = sorted_members(&masks);
    Ok(SubsetOrbit {
        representative: members[0].clone(),
        size: members.len(),
        members: Some(members),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct TransversalOptions {
    pub budget: u64,
    pub materialize: bool,
}

impl Default for TransversalOptions {
    fn default() -> Self {
        TransversalOptions {
            budget: DEFAULT_SUBSET_BUDGET,
            materialize: false,
        }
    }
}

/// All orbits of `group` on `s`-subsets of `0..degree`.
pub fn orbit_transversal(group: &PermGroup, s: usize) -> Result<OrbitTransversal> {
    orbit_transversal_with(group, s, TransversalOptions::default())
}

/// Scans `s`-subsets in lexicographic order; the first unvisited subset is
/// the least member of its orbit, which is then expanded and marked in a
/// bit set indexed by colex rank.
pub fn orbit_transversal_with(
    group: &PermGroup,
    s: usize,
    opts: TransversalOptions,
) -> Result<OrbitTransversal> {
    let n = group.degree();
    check_mask_degree(n)?;
    let total = binomial_big(n, s);
    if total > opts.budget.into() {
        return Err(Error::SubsetBudget {
            n,
            s,
            subsets: total.to_string(),
            budget: opts.budget,
        });
    }
    let ranker = SubsetRanker::new(n, s);
    let mut visited = BitSet::new(ranker.total() as usize);
    let gens: Vec<&Permutation> = group.nontrivial_generators().collect();
    let mut orbits = Vec::new();
    if s <= n {
        let mut comb: Vec<usize> = (0..s).collect();
        loop {
            if !visited.get(ranker.rank(&comb) as usize) {
                let masks = expand_orbit(&gens, to_mask(&comb), |m| {
                    !visited.insert(ranker.rank_mask(m) as usize)
                });
                orbits.push(SubsetOrbit {
                    representative: comb.clone(),
                    size: masks.len(),
                    members: opts.materialize.then(|| sorted_members(&masks)),
                });
            }
            if s == 0 || !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    Ok(OrbitTransversal { n, s, orbits })
}

/// Orbits of `group` on the `s`-subsets accepted by a prefix-closed
/// predicate.
///
/// `extendable(prefix, next)` decides whether the ascending sequence
/// `prefix + [next]` may be part of an accepted subset. The accepted family
/// must be `G`-invariant; the scan is lexicographic, so representatives are
/// least members as in [`orbit_transversal_with`]. Memory is proportional
/// to the number of accepted subsets rather than to `C(n,s)`.
pub fn filtered_transversal(
    group: &PermGroup,
    s: usize,
    materialize: bool,
    mut extendable: impl FnMut(&[usize], usize) -> bool,
) -> Result<OrbitTransversal> {
    let n = group.degree();
    check_mask_degree(n)?;
    let gens: Vec<&Permutation> = group.nontrivial_generators().collect();
    let mut visited: HashSet<SubsetMask> = HashSet::new();
    let mut orbits = Vec::new();
    let mut prefix: Vec<usize> = Vec::with_capacity(s);

    // Iterative lexicographic DFS over accepted prefixes.
    let mut next = 0usize;
    loop {
        if prefix.len() == s {
            let mask = to_mask(&prefix);
            if !visited.contains(&mask) {
                let masks = expand_orbit(&gens, mask, |m| visited.insert(m));
                orbits.push(SubsetOrbit {
                    representative: prefix.clone(),
                    size: masks.len(),
                    members: materialize.then(|| sorted_members(&masks)),
                });
            }
            match prefix.pop() {
                Some(last) => next = last + 1,
                None => break,
            }
            continue;
        }
        // room left for the remaining s - len - 1 points after `next`
        let remaining = s - prefix.len();
        if next + remaining > n {
            match prefix.pop() {
                Some(last) => next = last + 1,
                None => break,
            }
            continue;
        }
        if extendable(&prefix, next) {
            prefix.push(next);
        }
        next += 1;
    }
    Ok(OrbitTransversal { n, s, orbits })
}

/// Table from the colex rank of every `s`-subset to the index of its orbit
/// in `transversal`. Subsets outside the transversal map to `u32::MAX`.
pub(crate) fn orbit_index(group: &PermGroup, transversal: &OrbitTransversal) -> (SubsetRanker, Vec<u32>) {
    let ranker = SubsetRanker::new(transversal.n, transversal.s);
    let mut table = vec![u32::MAX; ranker.total() as usize];
    let gens: Vec<&Permutation> = group.nontrivial_generators().collect();
    for (idx, orbit) in transversal.orbits.iter().enumerate() {
        expand_orbit(&gens, to_mask(&orbit.representative), |m| {
            let slot = &mut table[ranker.rank_mask(m) as usize];
            let fresh = *slot == u32::MAX;
            *slot = idx as u32;
            fresh
        });
    }
    (ranker, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{binomial, for_each_combination};
    use std::collections::BTreeSet;

    /// Orbit by applying every group element, independent of the BFS.
    fn brute_orbit(group: &PermGroup, subset: &[usize]) -> BTreeSet<Vec<usize>> {
        group
            .enumerate_elements(1 << 20)
            .unwrap()
            .iter()
            .map(|g| g.apply_block(subset))
            .collect()
    }

    #[test]
    fn z45_orbit_sizes() {
        let z45 = PermGroup::cyclic(45, 46);
        let short = subset_orbit(&z45, &[0, 15, 30, 45]).unwrap();
        assert_eq!(short.size, 15);
        assert_eq!(short.size, brute_orbit(&z45, &[0, 15, 30, 45]).len());
        let full = subset_orbit(&z45, &[0, 1, 11, 45]).unwrap();
        assert_eq!(full.size, 45);
        assert_eq!(
            full.members.clone().unwrap().into_iter().collect::<BTreeSet<_>>(),
            brute_orbit(&z45, &[0, 1, 11, 45])
        );
        assert_eq!(full.representative, vec![0, 1, 11, 45]);
    }

    #[test]
    fn trivial_group_orbits_are_singletons() {
        let g = PermGroup::trivial(13);
        assert_eq!(subset_orbit(&g, &[2, 5, 9]).unwrap().size, 1);
        let tr = orbit_transversal(&g, 3).unwrap();
        assert_eq!(tr.len(), 286);
        assert!(tr.orbits.iter().all(|o| o.size == 1));
    }

    #[test]
    fn c3_pairs_form_one_orbit() {
        let g = PermGroup::cyclic(3, 3);
        let tr = orbit_transversal(&g, 2).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(tr.orbits[0].size, 3);
    }

    #[test]
    fn z45_triples_against_brute_force() {
        let g = PermGroup::cyclic(45, 45);
        let tr = orbit_transversal(&g, 3).unwrap();
        // brute-force transversal: canonical form = least image under all 45 shifts
        let mut reps = BTreeSet::new();
        for_each_combination(45, 3, |c| {
            let canon = (0..45)
                .map(|a| {
                    let mut img: Vec<usize> = c.iter().map(|&x| (x + a) % 45).collect();
                    img.sort_unstable();
                    img
                })
                .min()
                .unwrap();
            reps.insert(canon);
        });
        assert_eq!(reps.len(), 316);
        assert_eq!(tr.len(), reps.len());
        assert_eq!(
            tr.orbits.iter().map(|o| o.representative.clone()).collect::<BTreeSet<_>>(),
            reps
        );
        assert_eq!(tr.total_size(), 14190);
    }

    #[test]
    fn budget_is_enforced() {
        let g = PermGroup::trivial(40);
        let err = orbit_transversal_with(
            &g,
            5,
            TransversalOptions {
                budget: 1000,
                materialize: false,
            },
        );
        assert!(matches!(err, Err(Error::SubsetBudget { .. })));
    }

    #[test]
    fn filtered_matches_full_transversal_on_invariant_family() {
        let g = PermGroup::new(
            9,
            vec![Permutation::from_cycles(9, &[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]) .unwrap()],
        )
        .unwrap();
        let full = orbit_transversal(&g, 4).unwrap();
        let filtered = filtered_transversal(&g, 4, false, |_, _| true).unwrap();
        assert_eq!(full, filtered);
        // subsets avoiding {0,1}: an invariant family only under the trivial group,
        // so use the trivial group here
        let t = PermGroup::trivial(9);
        let avoid = filtered_transversal(&t, 3, false, |prefix, next| !(prefix.contains(&0) && next == 1)).unwrap();
        assert_eq!(avoid.len() as u64, binomial(9, 3).unwrap() - 7);
    }

    #[test]
    fn orbit_index_covers_everything() {
        let g = PermGroup::cyclic(7, 8);
        let tr = orbit_transversal(&g, 3).unwrap();
        let (ranker, table) = orbit_index(&g, &tr);
        assert!(table.iter().all(|&x| x != u32::MAX));
        for (i, o) in tr.orbits.iter().enumerate() {
            assert_eq!(table[ranker.rank(&o.representative) as usize], i as u32);
        }
    }
}
