//! Extending a `G`-invariant `S(t,k,v)` to a `G`-invariant `S(t+1,k+1,v+1)`.
//!
//! The new point `∞` is `v`. Blocks through `∞` are forced: they are the
//! base blocks with `∞` added. The remaining blocks are complete `G`-orbits
//! of `(k+1)`-subsets of the old points, and they have to cover exactly the
//! `(t+1)`-subsets of old points that do not lie inside a base block. This
//! is an exact cover problem on orbits, solved with [`crate::exact_cover`].
//!
//! The same code handles every strength. Repeated application climbs
//! `S(t,k,v) → S(t+1,k+1,v+1) → ...`.

use crate::combinatorics::{for_each_sub_combination, BitSet, SubsetRanker};
use crate::design::{Design, Params};
use crate::error::{Error, Result};
use crate::exact_cover::{self, ExactCoverInstance, SearchLimits, SearchStats};
use crate::kramer_mesner::{orbit_columns, reduce_columns};
use crate::orbits::{filtered_transversal, orbit_index, orbit_transversal, subset_orbit, OrbitTransversal};
use crate::perm::PermGroup;

#[derive(Debug, Clone)]
pub struct ExtensionProblem {
    base: Design,
    /// Acting on `v + 1` points, fixing `∞ = v`.
    group: PermGroup,
    /// The same group restricted to the old points.
    old_points_group: PermGroup,
    params: Params,
}

impl ExtensionProblem {
    /// `group` may act on the `v` old points or on `v + 1` points fixing
    /// `∞ = v`. The base must be a `G`-invariant `S(t,k,v)`.
    pub fn new(base: Design, group: PermGroup, params: Params) -> Result<Self> {
        let v = params.v;
        if !base.verify(params)?.is_valid() {
            return Err(Error::InvalidExtension(format!("base design is not an {params}")));
        }
        let group = if group.degree() == v {
            group.extend_fixing(v + 1)?
        } else if group.degree() == v + 1 {
            if !group.stabilizes(v) {
                return Err(Error::InvalidExtension(format!(
                    "group on {} points must fix the new point {v}",
                    v + 1
                )));
            }
            group
        } else {
            return Err(Error::DegreeMismatch {
                left: group.degree(),
                right: v,
            });
        };
        let old_points_group = group.restrict(v)?;
        if !old_points_group.is_invariant(&base)? {
            return Err(Error::InvalidExtension("base design is not G-invariant".into()));
        }
        Ok(ExtensionProblem {
            base,
            group,
            old_points_group,
            params,
        })
    }

    pub fn base(&self) -> &Design {
        &self.base
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn infinity(&self) -> usize {
        self.params.v
    }
}

/// The reduced exact cover problem of an extension.
#[derive(Debug, Clone)]
pub struct ExtensionInstance {
    pub instance: ExactCoverInstance,
    /// Orbits of `(t+1)`-subsets not inside a base block; item `i` is orbit `i`.
    pub items: OrbitTransversal,
    /// Orbits of `(t+1)`-subsets inside some base block.
    pub covered_orbits: usize,
    /// All orbits of `(t+1)`-subsets of old points.
    pub total_orbits: usize,
    /// Orbits of `(k+1)`-subsets containing no covered `(t+1)`-subset.
    pub candidates: OrbitTransversal,
    /// Candidate orbit of each option.
    pub column_map: Vec<usize>,
    /// Candidate orbits covering some `(t+1)`-subset twice.
    pub discarded: usize,
}

pub fn extension_instance(p: &ExtensionProblem) -> Result<ExtensionInstance> {
    let Params { t, k, v } = p.params;
    let g = &p.old_points_group;
    let s = t + 1;

    let ranker = SubsetRanker::new(v, s);
    let mut covered = BitSet::new(ranker.total() as usize);
    for b in p.base.blocks() {
        for_each_sub_combination(b, s, |sub| {
            covered.insert(ranker.rank(sub) as usize);
        });
    }

    let all = orbit_transversal(g, s)?;
    let total_orbits = all.len();
    let items = OrbitTransversal {
        n: all.n,
        s: all.s,
        orbits: all
            .orbits
            .into_iter()
            .filter(|o| !covered.get(ranker.rank(&o.representative) as usize))
            .collect(),
    };
    let covered_orbits = total_orbits - items.len();

    let mut scratch = Vec::with_capacity(s);
    let candidates = filtered_transversal(g, k + 1, false, |prefix, next| {
        if prefix.len() < t {
            return true;
        }
        let mut ok = true;
        for_each_sub_combination(prefix, t, |sub| {
            if ok {
                scratch.clear();
                scratch.extend_from_slice(sub);
                scratch.push(next);
                ok = !covered.get(ranker.rank(&scratch) as usize);
            }
        });
        ok
    })?;

    let (item_ranker, row_of) = orbit_index(g, &items);
    let row_rep_rank: Vec<u64> = items
        .orbits
        .iter()
        .map(|o| item_ranker.rank(&o.representative))
        .collect();
    let reps: Vec<Vec<usize>> = candidates.orbits.iter().map(|o| o.representative.clone()).collect();
    let columns = orbit_columns(g, &reps, s, &item_ranker, &row_of, &row_rep_rank);
    let red = reduce_columns(items.len(), &columns);

    Ok(ExtensionInstance {
        instance: red.instance,
        items,
        covered_orbits,
        total_orbits,
        candidates,
        column_map: red.column_map,
        discarded: red.discarded,
    })
}

#[derive(Debug, Clone)]
pub struct ExtensionOutcome {
    pub designs: Vec<Design>,
    pub stats: SearchStats,
    pub items: usize,
    pub options: usize,
    pub discarded: usize,
    /// Options selected by each solution, in order.
    pub chosen_options: Vec<usize>,
}

/// All extensions of the base with `G` as extension group, up to the limits.
///
/// Every returned design is checked to be a `G`-invariant
/// `S(t+1,k+1,v+1)` whose derived design at `∞` is the base.
pub fn extend_steiner(p: &ExtensionProblem, limits: SearchLimits) -> Result<ExtensionOutcome> {
    let inst = extension_instance(p)?;
    let (solutions, stats) = exact_cover::solve(&inst.instance, limits)?;
    let target = p.params.extended();
    let inf = p.infinity();
    let fixed: Vec<Vec<usize>> = p
        .base
        .blocks()
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.push(inf);
            b
        })
        .collect();

    let mut designs = Vec::with_capacity(solutions.len());
    let mut chosen_options = Vec::with_capacity(solutions.len());
    for sol in &solutions {
        let mut blocks = fixed.clone();
        for &o in &sol.option_indices {
            let rep = &inst.candidates.orbits[inst.column_map[o]].representative;
            blocks.extend(subset_orbit(&p.old_points_group, rep)?.members.expect("materialized"));
        }
        let e = Design::new(target.v, blocks)?;
        if !e.verify(target)?.is_valid() {
            return Err(Error::Consistency(format!("extension is not an {target}")));
        }
        if e.derived(inf)? != p.base {
            return Err(Error::Consistency("derived design at ∞ differs from the base".into()));
        }
        if !p.group.is_invariant(&e)? {
            return Err(Error::Consistency("extension is not G-invariant".into()));
        }
        chosen_options.push(sol.option_indices.len());
        designs.push(e);
    }
    Ok(ExtensionOutcome {
        designs,
        stats,
        items: inst.instance.item_count(),
        options: inst.instance.option_count(),
        discarded: inst.discarded,
        chosen_options,
    })
}
