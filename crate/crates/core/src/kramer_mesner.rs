//! Kramer–Mesner matrices and the reduction of Steiner systems to exact cover.
//!
//! Rows are the `G`-orbits on `t`-subsets, columns the `G`-orbits on
//! `k`-subsets. Entry `(i, j)` counts the blocks of column orbit `j` that
//! contain the representative of row orbit `i`. A `G`-invariant `S(t,k,v)`
//! is a set of columns whose entries sum to exactly 1 in every row.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::combinatorics::{binomial, for_each_sub_combination, from_mask, to_mask, SubsetRanker};
use crate::design::{Design, Params};
use crate::error::{Error, Result};
use crate::exact_cover::{self, ExactCoverInstance, SearchLimits, SearchStats};
use crate::orbits::{expand_orbit, orbit_index, orbit_transversal, subset_orbit, OrbitTransversal};
use crate::perm::{PermGroup, Permutation};

/// Sparse column `(row, count)` pairs, rows ascending, zero entries omitted.
pub type Column = Vec<(u32, u32)>;

#[derive(Debug, Clone)]
pub struct KmMatrix {
    pub t: usize,
    pub k: usize,
    pub rows: OrbitTransversal,
    pub cols: OrbitTransversal,
    columns: Vec<Column>,
}

impl KmMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &Column {
        &self.columns[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        let col = &self.columns[j];
        col.binary_search_by_key(&(i as u32), |&(r, _)| r)
            .map(|p| col[p].1)
            .unwrap_or(0)
    }

    /// Row-major dense copy of the entries.
    pub fn dense(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0; self.col_count()]; self.row_count()];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                out[i as usize][j] = c;
            }
        }
        out
    }

    /// `Σ_i |row orbit i| · A[i][j] = |column orbit j| · C(k,t)` for every `j`.
    pub fn check_double_counting(&self) -> Result<()> {
        let ckt = binomial(self.k, self.t).expect("small binomial");
        for (j, col) in self.columns.iter().enumerate() {
            let lhs: u64 = col
                .iter()
                .map(|&(i, c)| self.rows.orbits[i as usize].size as u64 * c as u64)
                .sum();
            let rhs = self.cols.orbits[j].size as u64 * ckt;
            if lhs != rhs {
                return Err(Error::Consistency(format!(
                    "double counting fails in column {j}: {lhs} != {rhs}"
                )));
            }
        }
        Ok(())
    }
}

/// For each column representative, expands its orbit and counts, for every
/// row orbit, the members containing that row's representative.
///
/// `row_of[rank]` gives the row of each `t`-subset (`u32::MAX` if the subset
/// is not a row) and `row_rep_rank[i]` the rank of row `i`'s representative.
pub(crate) fn orbit_columns(
    group: &PermGroup,
    col_reps: &[Vec<usize>],
    t: usize,
    ranker: &SubsetRanker,
    row_of: &[u32],
    row_rep_rank: &[u64],
) -> Vec<Column> {
    let gens: Vec<&Permutation> = group.nontrivial_generators().collect();
    col_reps
        .par_iter()
        .map(|rep| {
            let mut seen = HashSet::new();
            let members = expand_orbit(&gens, to_mask(rep), |m| seen.insert(m));
            let mut counts: Vec<(u32, u32)> = Vec::new();
            for m in members {
                let block = from_mask(m);
                for_each_sub_combination(&block, t, |s| {
                    let r = ranker.rank(s);
                    let row = row_of[r as usize];
                    if row != u32::MAX && row_rep_rank[row as usize] == r {
                        counts.push((row, 1));
                    }
                });
            }
            counts.sort_unstable();
            let mut col: Column = Vec::new();
            for (row, c) in counts {
                match col.last_mut() {
                    Some((r, n)) if *r == row => *n += c,
                    _ => col.push((row, c)),
                }
            }
            col
        })
        .collect()
}

/// Builds `A_{t,k}` for `group` acting on `v` points.
pub fn build_km(group: &PermGroup, v: usize, t: usize, k: usize) -> Result<KmMatrix> {
    if !(t < k && k <= v) || group.degree() != v {
        return Err(Error::InvalidParams {
            t,
            k,
            v,
            reason: format!(
                "need t < k <= v = group degree (degree {})",
                group.degree()
            ),
        });
    }
    let rows = orbit_transversal(group, t)?;
    let cols = orbit_transversal(group, k)?;
    let (ranker, row_of) = orbit_index(group, &rows);
    let row_rep_rank: Vec<u64> = rows.orbits.iter().map(|o| ranker.rank(&o.representative)).collect();
    let reps: Vec<Vec<usize>> = cols.orbits.iter().map(|o| o.representative.clone()).collect();
    let columns = orbit_columns(group, &reps, t, &ranker, &row_of, &row_rep_rank);
    let m = KmMatrix {
        t,
        k,
        rows,
        cols,
        columns,
    };
    m.check_double_counting()?;
    Ok(m)
}

/// Exact cover form of the `λ = 1` problem.
#[derive(Debug, Clone)]
pub struct SteinerReduction {
    pub instance: ExactCoverInstance,
    /// Original column of each option.
    pub column_map: Vec<usize>,
    /// Columns dropped because some entry is at least 2.
    pub discarded: usize,
}

/// Items are the rows; options are the columns whose entries are all 0 or 1.
pub fn steiner_reduce(m: &KmMatrix) -> SteinerReduction {
    reduce_columns(m.row_count(), &m.columns)
}

pub(crate) fn reduce_columns(rows: usize, columns: &[Column]) -> SteinerReduction {
    let mut options = Vec::new();
    let mut column_map = Vec::new();
    let mut discarded = 0;
    for (j, col) in columns.iter().enumerate() {
        if col.iter().any(|&(_, c)| c >= 2) {
            discarded += 1;
            continue;
        }
        options.push(col.iter().map(|&(i, _)| i as usize).collect());
        column_map.push(j);
    }
    SteinerReduction {
        instance: ExactCoverInstance::new(rows, options).expect("columns are valid options"),
        column_map,
        discarded,
    }
}

#[derive(Debug, Clone)]
pub struct KmOutcome {
    pub designs: Vec<Design>,
    pub stats: SearchStats,
    pub rows: usize,
    pub cols: usize,
    pub options: usize,
    pub discarded: usize,
}

/// Union of the member blocks of the given column orbits.
pub(crate) fn union_of_orbits(group: &PermGroup, reps: &[&[usize]], v: usize) -> Result<Design> {
    let mut blocks = Vec::new();
    for rep in reps {
        blocks.extend(subset_orbit(group, rep)?.members.expect("materialized"));
    }
    Design::new(v, blocks)
}

/// All `G`-invariant `S(t,k,v)` up to the search limits, in solver order.
/// Each design is verified and checked for invariance before it is returned.
pub fn km_search(group: &PermGroup, params: Params, limits: SearchLimits) -> Result<KmOutcome> {
    let Params { t, k, v } = params;
    let m = build_km(group, v, t, k)?;
    let red = steiner_reduce(&m);
    let (solutions, stats) = exact_cover::solve(&red.instance, limits)?;
    let designs = solutions
        .iter()
        .map(|sol| {
            let reps: Vec<&[usize]> = sol
                .option_indices
                .iter()
                .map(|&o| m.cols.orbits[red.column_map[o]].representative.as_slice())
                .collect();
            let d = union_of_orbits(group, &reps, v)?;
            if !d.verify(params)?.is_valid() || !group.is_invariant(&d)? {
                return Err(Error::Consistency(format!(
                    "cover solution {:?} does not give a G-invariant {params}",
                    sol.option_indices
                )));
            }
            Ok(d)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KmOutcome {
        designs,
        stats,
        rows: m.row_count(),
        cols: m.col_count(),
        options: red.instance.option_count(),
        discarded: red.discarded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_cover::count_solutions;

    #[test]
    fn subset_incidence_for_trivial_group() {
        let m = build_km(&PermGroup::trivial(7), 7, 2, 3).unwrap();
        assert_eq!((m.row_count(), m.col_count()), (21, 35));
        let dense = m.dense();
        for j in 0..35 {
            let col: Vec<u32> = dense.iter().map(|r| r[j]).collect();
            assert!(col.iter().all(|&x| x <= 1));
            assert_eq!(col.iter().sum::<u32>(), 3);
        }
    }

    #[test]
    fn c3_pairs() {
        let g = PermGroup::cyclic(3, 3);
        let m = build_km(&g, 3, 1, 2).unwrap();
        assert_eq!(m.dense(), vec![vec![2]]);
        let red = steiner_reduce(&m);
        assert_eq!(red.instance.option_count(), 0);
        assert_eq!(red.discarded, 1);
        assert_eq!(count_solutions(&red.instance, None).unwrap().solutions, 0);
    }

    #[test]
    fn labeled_fano_planes() {
        let m = build_km(&PermGroup::trivial(7), 7, 2, 3).unwrap();
        let red = steiner_reduce(&m);
        assert_eq!(red.instance.item_count(), 21);
        assert_eq!(red.instance.option_count(), 35);
        // 7! / |PGL(3,2)| = 5040 / 168
        assert_eq!(count_solutions(&red.instance, None).unwrap().solutions, 30);
    }

    #[test]
    fn cyclic_sts13() {
        let out = km_search(
            &PermGroup::cyclic(13, 13),
            Params::new(2, 3, 13).unwrap(),
            SearchLimits {
                max_solutions: Some(1),
                node_limit: None,
            },
        )
        .unwrap();
        assert_eq!(out.designs.len(), 1);
        assert_eq!(out.designs[0].block_count(), 26);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(build_km(&PermGroup::trivial(7), 7, 3, 3).is_err());
        assert!(build_km(&PermGroup::trivial(7), 8, 2, 3).is_err());
    }
}
