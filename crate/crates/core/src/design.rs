//! Designs, parameter arithmetic, admissibility and verification.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::combinatorics::{binomial, binomial_big, for_each_sub_combination, SubsetRanker};
use crate::error::{Error, Result};
use crate::orbits::subset_orbit;
use crate::perm::{PermGroup, Permutation};

/// Parameters of a Steiner system `S(t,k,v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    pub t: usize,
    pub k: usize,
    pub v: usize,
}

impl Params {
    pub fn new(t: usize, k: usize, v: usize) -> Result<Self> {
        if t > k || k > v {
            return Err(Error::InvalidParams {
                t,
                k,
                v,
                reason: "need t <= k <= v".into(),
            });
        }
        Ok(Params { t, k, v })
    }

    /// Parameters of the derived design, `S(t-1,k-1,v-1)`.
    pub fn derived(self) -> Option<Params> {
        (self.t > 0).then(|| Params {
            t: self.t - 1,
            k: self.k - 1,
            v: self.v - 1,
        })
    }

    /// Parameters of a one-point extension, `S(t+1,k+1,v+1)`.
    pub fn extended(self) -> Params {
        Params {
            t: self.t + 1,
            k: self.k + 1,
            v: self.v + 1,
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{},{})", self.t, self.k, self.v)
    }
}

/// Number of blocks of an `S(t,k,v)`, `C(v,t) / C(k,t)`.
pub fn block_count(params: Params) -> Result<BigUint> {
    let Params { t, k, v } = params;
    let num = binomial_big(v, t);
    let den = binomial_big(k, t);
    if den.is_zero() || !(&num % &den).is_zero() {
        return Err(Error::NotDivisible {
            num_n: v,
            num_k: t,
            den_n: k,
            den_k: t,
            numerator: num.to_string(),
            denominator: den.to_string(),
        });
    }
    Ok(num / den)
}

/// Outcome of the necessary-condition checks on a parameter set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub params: Params,
    /// `divisibility[i]` holds iff `C(k-i,t-i)` divides `C(v-i,t-i)`.
    pub divisibility: Vec<bool>,
    /// Fisher's inequality `b >= v` for the design and each derived design
    /// down to strength 2.
    pub fisher_ok: bool,
    /// Present iff every divisibility condition holds.
    pub block_count: Option<BigUint>,
    pub admissible: bool,
}

impl AdmissibilityReport {
    pub fn divisibility_ok(&self) -> bool {
        self.divisibility.iter().all(|&d| d)
    }
}

pub fn admissible(params: Params) -> AdmissibilityReport {
    let Params { t, k, v } = params;
    let divisibility: Vec<bool> = (0..=t)
        .map(|i| {
            let den = binomial_big(k - i, t - i);
            !den.is_zero() && (binomial_big(v - i, t - i) % den).is_zero()
        })
        .collect();
    let divisible = divisibility.iter().all(|&d| d);

    // Every derived design of strength >= 2 is in particular a 2-design.
    let fisher_ok = (0..=t.saturating_sub(2)).filter(|_| t >= 2).all(|j| {
        let (tj, kj, vj) = (t - j, k - j, v - j);
        if kj >= vj {
            return true;
        }
        // b_j >= v_j  <=>  C(v_j, t_j) >= v_j * C(k_j, t_j)
        binomial_big(vj, tj) >= BigUint::from(vj) * binomial_big(kj, tj)
    });

    let block_count = divisible.then(|| block_count(params).expect("divisible"));
    AdmissibilityReport {
        params,
        divisibility,
        fisher_ok,
        block_count,
        admissible: divisible && fisher_ok,
    }
}

/// All admissible nontrivial parameter sets `S(t,k,v)` with `t < k < v <= v_max`
/// and `k` in `k_range`, sorted by `(v, k)`.
pub fn admissible_table(
    t: usize,
    v_max: usize,
    k_range: RangeInclusive<usize>,
) -> Vec<AdmissibilityReport> {
    let mut rows = Vec::new();
    for v in 0..=v_max {
        for k in k_range.clone() {
            if k <= t || k >= v {
                continue;
            }
            let report = admissible(Params { t, k, v });
            if report.admissible {
                rows.push(report);
            }
        }
    }
    rows
}

/// A point count together with a set of blocks.
///
/// Every block is strictly ascending with entries in `0..v`, and the block
/// list is kept in lexicographic order without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Design {
    v: usize,
    blocks: Vec<Vec<usize>>,
}

impl Design {
    /// Sorts each block and the block list; rejects out-of-range points,
    /// repeated points and repeated blocks.
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                if let Some(&p) = b.iter().find(|&&p| p >= v) {
                    return Err(Error::InvalidBlock {
                        block: b.clone(),
                        reason: format!("point {p} out of range for v = {v}"),
                    });
                }
                if b.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidBlock {
                        block: b,
                        reason: "repeated point".into(),
                    });
                }
                Ok(b)
            })
            .collect::<Result<_>>()?;
        blocks.sort_unstable();
        if let Some(w) = blocks.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateBlock(w[0].clone()));
        }
        Ok(Design { v, blocks })
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_sorted(v: usize, blocks: Vec<Vec<usize>>) -> Self {
        debug_assert!(blocks.windows(2).all(|w| w[0] < w[1]));
        Design { v, blocks }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Size of the first block, or `None` for an empty design.
    pub fn block_size(&self) -> Option<usize> {
        self.blocks.first().map(Vec::len)
    }

    pub fn contains_block(&self, block: &[usize]) -> bool {
        self.blocks
            .binary_search_by(|b| b.as_slice().cmp(block))
            .is_ok()
    }

    /// Number of blocks through each point.
    pub fn point_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.v];
        for b in &self.blocks {
            for &p in b {
                deg[p] += 1;
            }
        }
        deg
    }

    /// Image of the design under a permutation of its points.
    pub fn relabel(&self, perm: &Permutation) -> Result<Design> {
        check_degree(perm.degree(), self.v)?;
        let mut blocks: Vec<Vec<usize>> = self.blocks.iter().map(|b| perm.apply_block(b)).collect();
        blocks.sort_unstable();
        Ok(Design::from_sorted(self.v, blocks))
    }

    /// Whether `perm` maps the block set onto itself.
    pub fn is_automorphism(&self, perm: &Permutation) -> Result<bool> {
        check_degree(perm.degree(), self.v)?;
        Ok(self
            .blocks
            .iter()
            .all(|b| self.contains_block(&perm.apply_block(b))))
    }

    /// Checks that every `t`-subset lies in exactly one block.
    ///
    /// Counts the `t`-subsets of each block, so the cost is
    /// `O(b·C(k,t) + C(v,t))`.
    pub fn verify(&self, params: Params) -> Result<Verification> {
        let Params { t, k, v } = params;
        if self.v != v {
            return Err(Error::PointCount {
                found: self.v,
                expected: v,
            });
        }
        if let Some(b) = self.blocks.iter().find(|b| b.len() != k) {
            return Err(Error::BlockSize {
                block: b.clone(),
                size: b.len(),
                expected: k,
            });
        }
        let ranker = SubsetRanker::new(v, t);
        let mut counts = vec![0u8; ranker.total() as usize];
        for b in &self.blocks {
            for_each_sub_combination(b, t, |s| {
                let c = &mut counts[ranker.rank(s) as usize];
                *c = c.saturating_add(1);
            });
        }
        // Lexicographically least bad t-subset as witness.
        let mut witness: Option<(Vec<usize>, usize)> = None;
        for (r, &c) in counts.iter().enumerate() {
            if c != 1 {
                let s = ranker.unrank(r as u64);
                if witness.as_ref().is_none_or(|(w, _)| s < *w) {
                    witness = Some((s, c as usize));
                }
            }
        }
        Ok(match witness {
            None => Verification::Valid {
                blocks: self.blocks.len(),
            },
            Some((subset, coverage)) => Verification::Invalid { subset, coverage },
        })
    }

    /// The derived design at `point`: blocks through `point` with `point`
    /// removed, points above it shifted down by one.
    pub fn derived(&self, point: usize) -> Result<Design> {
        if point >= self.v {
            return Err(Error::PointOutOfRange {
                point,
                degree: self.v,
            });
        }
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .filter(|b| b.binary_search(&point).is_ok())
            .map(|b| {
                b.iter()
                    .filter(|&&p| p != point)
                    .map(|&p| if p > point { p - 1 } else { p })
                    .collect()
            })
            .collect();
        // Relabeling is monotone, so lexicographic order survives.
        Ok(Design::from_sorted(self.v - 1, blocks))
    }

    /// Whether `perm` is an automorphism with exactly one fixed point and
    /// order `v - 1`, i.e. a witness that the design is rotational.
    pub fn is_rotational(&self, perm: &Permutation) -> Result<bool> {
        check_degree(perm.degree(), self.v)?;
        Ok(self.v >= 1
            && perm.fixed_points().len() == 1
            && perm.order() == (self.v - 1) as u128
            && self.is_automorphism(perm)?)
    }
}

/// Result of [`Design::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Valid { blocks: usize },
    /// `subset` is covered `coverage` times (saturating at 255).
    Invalid { subset: Vec<usize>, coverage: usize },
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verification::Valid { .. })
    }
}

fn check_degree(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DegreeMismatch { left, right });
    }
    Ok(())
}

/// Union of the `G`-orbits of `base_blocks` on `v` points.
///
/// Orbits of distinct base blocks must be disjoint: a block reached twice is
/// reported as [`Error::DuplicateBlock`].
pub fn design_from_orbits(group: &PermGroup, base_blocks: &[Vec<usize>], v: usize) -> Result<Design> {
    check_degree(group.degree(), v)?;
    let mut blocks = Vec::new();
    for base in base_blocks {
        let mut sorted = base.clone();
        sorted.sort_unstable();
        let orbit = subset_orbit(group, &sorted)?;
        blocks.extend(orbit.members.expect("subset_orbit materializes members"));
    }
    blocks.sort_unstable();
    if let Some(w) = blocks.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateBlock(w[0].clone()));
    }
    Ok(Design::from_sorted(v, blocks))
}

/// Number of blocks expected by `verify` for a design with these parameters,
/// when it fits in 64 bits.
pub fn block_count_u64(params: Params) -> Option<u64> {
    let b = block_count(params).ok()?;
    let den = binomial(params.k, params.t)?;
    let num = binomial(params.v, params.t)?;
    debug_assert_eq!(BigUint::from(num / den), b);
    Some(num / den)
}
