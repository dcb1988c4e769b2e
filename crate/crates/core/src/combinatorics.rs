//! Binomial coefficients, subset ranking and packed subset keys.

use num_bigint::BigUint;

/// Subsets of `0..128` packed into a bit mask. Used as hash keys in the
/// orbit computations.
pub type SubsetMask = u128;

/// Largest point count supported by [`SubsetMask`].
pub const MAX_MASK_POINTS: usize = 128;

pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// `C(n,k)` in 64 bits, or `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Colexicographic ranking of `k`-subsets of `0..n`.
///
/// `rank({c_0 < c_1 < ... < c_{k-1}}) = Σ C(c_i, i + 1)`, a bijection onto
/// `0..C(n,k)`.
#[derive(Debug, Clone)]
pub struct SubsetRanker {
    n: usize,
    k: usize,
    // table[i][c] = C(c, i + 1)
    table: Vec<Vec<u64>>,
    total: u64,
}

impl SubsetRanker {
    /// Panics if `C(n,k)` does not fit in 64 bits.
    pub fn new(n: usize, k: usize) -> Self {
        let total = binomial(n, k).expect("subset count overflows u64");
        let table = (0..k)
            .map(|i| {
                (0..n.max(1))
                    .map(|c| binomial(c, i + 1).expect("binomial overflow"))
                    .collect()
            })
            .collect();
        SubsetRanker { n, k, table, total }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of `k`-subsets, `C(n,k)`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Rank of a strictly ascending subset of size `k`.
    #[inline]
    pub fn rank(&self, subset: &[usize]) -> u64 {
        debug_assert_eq!(subset.len(), self.k);
        subset
            .iter()
            .enumerate()
            .map(|(i, &c)| self.table[i][c])
            .sum()
    }

    #[inline]
    pub fn rank_mask(&self, mut mask: SubsetMask) -> u64 {
        let mut r = 0;
        let mut i = 0;
        while mask != 0 {
            let c = mask.trailing_zeros() as usize;
            r += self.table[i][c];
            i += 1;
            mask &= mask - 1;
        }
        r
    }

    pub fn unrank(&self, mut rank: u64) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for i in (0..self.k).rev() {
            // largest c with C(c, i+1) <= rank
            let row = &self.table[i];
            let c = row.partition_point(|&x| x <= rank) - 1;
            out[i] = c;
            rank -= row[c];
        }
        out
    }
}

/// Advances `comb` to the next `k`-subset of `0..n` in lexicographic order.
/// Returns `false` (leaving `comb` unspecified) after the last subset.
pub fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `f` on every `k`-subset of `0..n`, in lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut comb: Vec<usize> = (0..k).collect();
    loop {
        f(&comb);
        if k == 0 || !next_combination(&mut comb, n) {
            break;
        }
    }
}

/// Calls `f` on every `k`-subset of the sorted slice `items`, each passed
/// as an ascending sequence of elements of `items`.
pub fn for_each_sub_combination(items: &[usize], k: usize, mut f: impl FnMut(&[usize])) {
    let n = items.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf = vec![0; k];
    loop {
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = items[i];
        }
        f(&buf);
        if k == 0 || !next_combination(&mut idx, n) {
            break;
        }
    }
}

pub fn to_mask(subset: &[usize]) -> SubsetMask {
    subset.iter().fold(0, |m, &p| m | (1u128 << p))
}

pub fn from_mask(mut mask: SubsetMask) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Lexicographic comparison of two masks read as ascending sequences.
pub fn mask_lex_cmp(a: SubsetMask, b: SubsetMask) -> std::cmp::Ordering {
    from_mask(a).cmp(&from_mask(b))
}

pub fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// A plain fixed-size bit set.
#[derive(Debug, Clone)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    /// Sets bit `i`, returning its previous value.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let w = &mut self.words[i >> 6];
        let bit = 1u64 << (i & 63);
        let was = *w & bit != 0;
        *w |= bit;
        was
    }
}
