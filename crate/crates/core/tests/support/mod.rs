//! Strategies and checks shared by the property suite and the acceptance run.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use steiner::combinatorics::binomial;
use steiner::exact_cover::{self, ExactCoverInstance, SearchLimits};
use steiner::extension::{extend_steiner, ExtensionProblem};
use steiner::isomorphism::{are_isomorphic, filter_nonisomorphic, representative_indices};
use steiner::kramer_mesner::build_km;
use steiner::orbits::{orbit_transversal, subset_orbit};
use steiner::{fixtures, Design, Params, PermGroup, Permutation};

pub fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

/// Conjugates of `x -> ax + b (mod p)` on the first `p` points.
fn affine_group(n: usize) -> impl Strategy<Value = Vec<Permutation>> {
    let primes: Vec<usize> = [2, 3, 5, 7, 11].into_iter().filter(|&p| p <= n).collect();
    (prop::sample::select(primes), 1usize..11, permutation(n)).prop_map(move |(p, a, conj)| {
        let a = a % p;
        let a = if a == 0 { 1 } else { a };
        [Permutation::affine(p, 1, 1, n), Permutation::affine(p, a, 0, n)]
            .iter()
            .map(|g| conj.inverse().compose(g).unwrap().compose(&conj).unwrap())
            .collect()
    })
}

/// Small groups only: cyclic groups of a random permutation, conjugated
/// affine groups, and the trivial group.
fn generators(n: usize) -> impl Strategy<Value = Vec<Permutation>> {
    prop_oneof![
        permutation(n).prop_map(|g| vec![g]),
        affine_group(n),
        Just(Vec::new()),
    ]
}

#[derive(Debug, Clone)]
pub struct GroupCase {
    pub group: PermGroup,
    pub t: usize,
    pub k: usize,
}

pub fn group_case() -> impl Strategy<Value = GroupCase> {
    (5usize..=11)
        .prop_flat_map(|n| {
            (generators(n), 1usize..=2, 0usize..=2).prop_map(move |(gens, t, dk)| GroupCase {
                group: PermGroup::new(n, gens).unwrap(),
                t,
                k: (t + 1 + dk).min(n),
            })
        })
        .prop_filter("t < k", |c| c.t < c.k)
}

/// Double counting holds for every column, and the transversals of both
/// subset sizes partition all subsets.
pub fn check_km(case: GroupCase) -> Result<(), TestCaseError> {
    let g = &case.group;
    let n = g.degree();
    let m = build_km(g, n, case.t, case.k).map_err(|e| TestCaseError::fail(e.to_string()))?;
    m.check_double_counting().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let ckt = binomial(case.k, case.t).unwrap() as u64;
    let dense = m.dense();
    for j in 0..m.col_count() {
        let lhs: u64 = (0..m.row_count())
            .map(|i| m.rows.orbits[i].size as u64 * dense[i][j] as u64)
            .sum();
        prop_assert_eq!(lhs, m.cols.orbits[j].size as u64 * ckt);
    }
    prop_assert_eq!(m.rows.total_size(), binomial(n, case.t).unwrap());
    prop_assert_eq!(m.cols.total_size(), binomial(n, case.k).unwrap());
    Ok(())
}

/// Orbit sizes sum to `C(n,s)`, divide `|G|`, and re-expanding an orbit from
/// any member gives the same orbit.
pub fn check_orbits(case: GroupCase) -> Result<(), TestCaseError> {
    let g = &case.group;
    let n = g.degree();
    let order = g.order(100_000).unwrap();
    for s in 0..=n.min(4) {
        let tr = orbit_transversal(g, s).unwrap();
        prop_assert_eq!(tr.total_size(), binomial(n, s).unwrap());
        for o in &tr.orbits {
            prop_assert_eq!(order % o.size, 0);
        }
        if let Some(o) = tr.orbits.last() {
            let orbit = subset_orbit(g, &o.representative).unwrap();
            let members = orbit.members.unwrap();
            let again = subset_orbit(g, members.last().unwrap()).unwrap();
            prop_assert_eq!(Some(members), again.members);
        }
    }
    Ok(())
}

/// Closure under composition and inverses; the order is a multiple of every
/// generator's order and divides `n!`.
pub fn check_group(case: GroupCase) -> Result<(), TestCaseError> {
    let g = &case.group;
    let n = g.degree();
    let els = g.enumerate_elements(100_000).unwrap().to_vec();
    let set: std::collections::HashSet<&Permutation> = els.iter().collect();
    prop_assert!(set.contains(&Permutation::identity(n)));
    for a in els.iter().take(40) {
        prop_assert!(set.contains(&a.inverse()));
        for b in els.iter().take(40) {
            prop_assert!(set.contains(&a.compose(b).unwrap()));
        }
    }
    let factorial: u128 = (1..=n as u128).product();
    prop_assert_eq!(factorial % els.len() as u128, 0);
    for gen in g.generators() {
        prop_assert_eq!(els.len() as u128 % gen.order(), 0);
    }
    Ok(())
}

pub fn xc_instance() -> impl Strategy<Value = ExactCoverInstance> {
    (1usize..=8).prop_flat_map(|items| {
        prop::collection::vec(prop::collection::btree_set(0..items, 1..=items.min(4)), 0..=20)
            .prop_map(move |opts| {
                let options = opts.into_iter().map(|s| s.into_iter().collect()).collect();
                ExactCoverInstance::new(items, options).unwrap()
            })
    })
}

/// All exact covers by subset enumeration.
pub fn brute_force_covers(inst: &ExactCoverInstance) -> Vec<Vec<usize>> {
    let m = inst.option_count();
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        let chosen: Vec<usize> = (0..m).filter(|&j| mask >> j & 1 == 1).collect();
        if inst.is_exact_cover(&chosen) {
            out.push(chosen);
        }
    }
    out.sort();
    out
}

/// Every solution is an exact cover, the set of solutions equals the
/// oracle, and the parallel solver agrees with the serial one.
pub fn check_exact_cover(inst: ExactCoverInstance) -> Result<(), TestCaseError> {
    let (sols, stats) = exact_cover::solve(&inst, SearchLimits::unlimited()).unwrap();
    prop_assert!(stats.completed);
    let mut found: Vec<Vec<usize>> = sols
        .iter()
        .map(|s| {
            let mut o = s.option_indices.clone();
            o.sort_unstable();
            o
        })
        .collect();
    for s in &found {
        prop_assert!(inst.is_exact_cover(s));
    }
    found.sort();
    prop_assert_eq!(&found, &brute_force_covers(&inst));
    let (par, _) = exact_cover::solve_parallel(&inst, SearchLimits::unlimited()).unwrap();
    prop_assert_eq!(par, sols);
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RelabeledBase {
    pub base: Design,
    pub params: Params,
}

pub fn relabeled_base() -> impl Strategy<Value = RelabeledBase> {
    prop_oneof![Just((fixtures::fano(), 7usize)), Just((fixtures::sts9(), 9usize))].prop_flat_map(|(d, v)| {
        permutation(v).prop_map(move |p| RelabeledBase {
            base: d.relabel(&p).unwrap(),
            params: Params::new(2, 3, v).unwrap(),
        })
    })
}

/// Every extension is a Steiner system one strength up whose derived
/// design at the new point is the base, block for block.
pub fn check_extension(case: RelabeledBase) -> Result<(), TestCaseError> {
    let p = ExtensionProblem::new(case.base.clone(), PermGroup::trivial(case.params.v), case.params).unwrap();
    let limits = SearchLimits {
        max_solutions: Some(25),
        node_limit: None,
    };
    let out = extend_steiner(&p, limits).unwrap();
    prop_assert!(!out.designs.is_empty());
    let up = case.params.extended();
    for e in &out.designs {
        prop_assert!(e.verify(up).unwrap().is_valid());
        prop_assert_eq!(&e.derived(p.infinity()).unwrap(), &case.base);
        prop_assert!(p.group().is_invariant(e).unwrap());
    }
    Ok(())
}

pub fn relabeled_pair() -> impl Strategy<Value = (Design, Design)> {
    prop_oneof![
        Just(fixtures::fano()),
        Just(fixtures::sqs8()),
        Just(fixtures::sts9()),
        Just(fixtures::sts13_cyclic()),
        Just(fixtures::sts15()),
    ]
    .prop_flat_map(|d| {
        let v = d.v();
        permutation(v).prop_map(move |p| (d.clone(), d.relabel(&p).unwrap()))
    })
}

/// Certificates carry the blocks of one design exactly onto the other, and
/// filtering is idempotent and insensitive to input order.
pub fn check_isomorphism((a, b): (Design, Design)) -> Result<(), TestCaseError> {
    let cert = are_isomorphic(&a, &b);
    let g = cert.mapping.ok_or_else(|| TestCaseError::fail("relabeled copy not recognized"))?;
    let image = a.relabel(&g).unwrap();
    prop_assert_eq!(image.block_count(), b.block_count());
    for block in a.blocks() {
        prop_assert!(b.contains_block(&g.apply_block(block)));
    }
    let list = vec![a.clone(), fixtures::fano(), b.clone()];
    let reps = filter_nonisomorphic(&list);
    prop_assert_eq!(filter_nonisomorphic(&reps).len(), reps.len());
    let reversed: Vec<Design> = list.iter().rev().cloned().collect();
    prop_assert_eq!(representative_indices(&reversed).len(), reps.len());
    Ok(())
}
