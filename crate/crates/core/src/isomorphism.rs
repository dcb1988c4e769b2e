//! Isomorphism of designs: invariant fingerprints, pairwise isomorphism
//! tests, automorphism groups and isomorphism filtering.
//!
//! The tests work on the point/block incidence structure directly. Point
//! colourings are refined until stable (a block is coloured by the multiset
//! of its point colours, a point by its old colour and the multiset of its
//! block colours), then the search individualizes one point of the first
//! smallest non-trivial cell and refines again. Each refinement leaves a
//! label-independent hash, and branches whose hashes disagree with the
//! reference path are cut.

use std::collections::hash_map::DefaultHasher;
use std::cell::RefCell;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::rc::Rc;

use rayon::prelude::*;

use crate::combinatorics::binomial_big;
use crate::design::Design;
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// Group orders up to this size are cross-checked by enumerating the group.
const ENUMERATION_CROSS_CHECK: usize = 200_000;

/// Relabeling invariant summary of a design. Equal fingerprints are
/// necessary for isomorphism but not sufficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub v: usize,
    /// Common block size, `None` for an empty design or mixed sizes.
    pub k: Option<usize>,
    pub b: usize,
    bytes: Vec<u8>,
}

impl Fingerprint {
    /// Canonical serialization of every invariant.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

fn push_u64(out: &mut Vec<u8>, x: u64) {
    out.extend_from_slice(&x.to_le_bytes());
}

fn push_list(out: &mut Vec<u8>, xs: &[u64]) {
    push_u64(out, xs.len() as u64);
    for &x in xs {
        push_u64(out, x);
    }
}

/// Blocks incident with each point.
fn point_blocks(d: &Design) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new(); d.v()];
    for (i, b) in d.blocks().iter().enumerate() {
        for &p in b {
            out[p].push(i as u32);
        }
    }
    out
}

/// `hist[s]` = number of unordered block pairs meeting in `s` points.
fn intersection_histogram(d: &Design, incid: &[Vec<u32>]) -> Vec<u64> {
    let kmax = d.blocks().iter().map(Vec::len).max().unwrap_or(0);
    let mut hist = vec![0u64; kmax + 1];
    let mut meet = vec![0u32; d.block_count()];
    let mut touched = Vec::new();
    let mut disjoint_from_all = 0u64;
    for (i, b) in d.blocks().iter().enumerate() {
        for &p in b {
            for &j in &incid[p] {
                if (j as usize) > i {
                    if meet[j as usize] == 0 {
                        touched.push(j);
                    }
                    meet[j as usize] += 1;
                }
            }
        }
        let later = (d.block_count() - i - 1) as u64;
        disjoint_from_all += later - touched.len() as u64;
        for &j in &touched {
            hist[meet[j as usize] as usize] += 1;
            meet[j as usize] = 0;
        }
        touched.clear();
    }
    hist[0] += disjoint_from_all;
    hist
}

/// Number of Pasch configurations (four triples on six points, each point
/// on two of them) in a linear space with block size 3.
fn pasch_count(d: &Design, incid: &[Vec<u32>]) -> u64 {
    let v = d.v();
    let mut third = vec![usize::MAX; v * v];
    for b in d.blocks() {
        let (x, y, z) = (b[0], b[1], b[2]);
        third[x * v + y] = z;
        third[y * v + x] = z;
        third[x * v + z] = y;
        third[z * v + x] = y;
        third[y * v + z] = x;
        third[z * v + y] = x;
    }
    let others = |b: &[usize], a: usize| -> [usize; 2] {
        let mut o = [0; 2];
        let mut n = 0;
        for &p in b {
            if p != a {
                o[n] = p;
                n += 1;
            }
        }
        o
    };
    let mut count = 0u64;
    for a in 0..v {
        let through = &incid[a];
        for (x, &i) in through.iter().enumerate() {
            let [b1, c1] = others(&d.blocks()[i as usize], a);
            for &j in &through[x + 1..] {
                let [b2, c2] = others(&d.blocks()[j as usize], a);
                for (p, q, r, s) in [(b1, b2, c1, c2), (b1, c2, c1, b2)] {
                    let f = third[p * v + q];
                    if f != usize::MAX && f == third[r * v + s] {
                        count += 1;
                    }
                }
            }
        }
    }
    // every Pasch configuration has six intersecting block pairs
    count / 6
}

fn is_linear(d: &Design) -> bool {
    let v = d.v();
    let mut seen = vec![false; v * v];
    for b in d.blocks() {
        for (i, &x) in b.iter().enumerate() {
            for &y in &b[i + 1..] {
                if std::mem::replace(&mut seen[x * v + y], true) {
                    return false;
                }
            }
        }
    }
    true
}

fn local_invariants(d: &Design, out: &mut Vec<u8>) {
    let incid = point_blocks(d);
    let mut degrees: Vec<u64> = incid.iter().map(|b| b.len() as u64).collect();
    degrees.sort_unstable();
    push_list(out, &degrees);
    push_list(out, &intersection_histogram(d, &incid));
    let uniform3 = d.block_count() > 0 && d.blocks().iter().all(|b| b.len() == 3);
    let pasch = if uniform3 && is_linear(d) {
        pasch_count(d, &incid) + 1
    } else {
        0
    };
    push_u64(out, pasch);
}

pub fn fingerprint(d: &Design) -> Fingerprint {
    let k = d.block_size();
    let mut bytes = Vec::new();
    push_u64(&mut bytes, d.v() as u64);
    push_u64(&mut bytes, k.map_or(u64::MAX, |k| k as u64));
    push_u64(&mut bytes, d.block_count() as u64);
    local_invariants(d, &mut bytes);

    let mut derived: Vec<Vec<u8>> = (0..d.v())
        .into_par_iter()
        .map(|p| {
            let mut out = Vec::new();
            let dp = d.derived(p).expect("point in range");
            push_u64(&mut out, dp.block_count() as u64);
            local_invariants(&dp, &mut out);
            out
        })
        .collect();
    derived.sort_unstable();
    push_u64(&mut bytes, derived.len() as u64);
    for x in derived {
        bytes.extend_from_slice(&x);
    }
    Fingerprint {
        v: d.v(),
        k,
        b: d.block_count(),
        bytes,
    }
}

/// Rank of each key among the distinct keys in sorted order. The sorted
/// distinct keys with their multiplicities are fed to `hasher`.
fn rank_keys<T: Ord + Hash>(keys: &[T], hasher: &mut DefaultHasher) -> (Vec<u32>, usize) {
    let mut idx: Vec<u32> = (0..keys.len() as u32).collect();
    idx.sort_unstable_by(|&a, &b| keys[a as usize].cmp(&keys[b as usize]));
    let mut ranks = vec![0u32; keys.len()];
    let mut distinct = 0usize;
    let mut run = 0u64;
    for (pos, &i) in idx.iter().enumerate() {
        if pos > 0 && keys[i as usize] != keys[idx[pos - 1] as usize] {
            keys[idx[pos - 1] as usize].hash(hasher);
            run.hash(hasher);
            distinct += 1;
            run = 0;
        }
        ranks[i as usize] = distinct as u32;
        run += 1;
    }
    if let Some(&last) = idx.last() {
        keys[last as usize].hash(hasher);
        run.hash(hasher);
        distinct += 1;
    }
    (ranks, distinct)
}

/// Quadrilateral counts of a linear space: `pair[x * v + y]` is the number
/// of quadrilaterals (four lines, no three concurrent, any two meeting) with
/// both `x` and `y` among their six vertices.
struct QuadCounts {
    v: usize,
    pair: Vec<u64>,
}

impl QuadCounts {
    /// `lines` are the blocks of a linear space on a subset of `0..v`.
    fn new(v: usize, lines: &[Vec<usize>]) -> Self {
        let mut line_of = vec![u32::MAX; v * v];
        let mut through = vec![Vec::new(); v];
        for (i, l) in lines.iter().enumerate() {
            for (a, &x) in l.iter().enumerate() {
                through[x].push(i as u32);
                for &y in &l[a + 1..] {
                    line_of[x * v + y] = i as u32;
                    line_of[y * v + x] = i as u32;
                }
            }
        }
        let mut pair = vec![0u64; v * v];
        for a in 0..v {
            for (n, &l1) in through[a].iter().enumerate() {
                for &l2 in &through[a][n + 1..] {
                    let (l1, l2) = (&lines[l1 as usize], &lines[l2 as usize]);
                    for &b in l1.iter().filter(|&&b| b != a) {
                        for &c in l2.iter().filter(|&&c| c != a) {
                            let l3 = line_of[b * v + c];
                            if l3 == u32::MAX {
                                continue;
                            }
                            let l3 = &lines[l3 as usize];
                            for &x in l1.iter().filter(|&&x| x != a && x != b) {
                                for &y in l2.iter().filter(|&&y| y != a && y != c) {
                                    let l4 = line_of[x * v + y];
                                    let Some(&z) = l3.iter().find(|&&z| z != x && line_of[z * v + x] == l4) else {
                                        continue;
                                    };
                                    let vs = [a, b, c, x, y, z];
                                    for &u in &vs {
                                        for &w in &vs {
                                            pair[u * v + w] += 1;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        // each quadrilateral is met once per (triangle, vertex): 4 * 3 times
        for c in &mut pair {
            *c /= 12;
        }
        QuadCounts { v, pair }
    }

    fn total(&self) -> u64 {
        (0..self.v).map(|x| self.pair[x * self.v + x]).sum::<u64>() / 6
    }
}

/// Steiner systems look uniform to colour refinement until about `t`
/// points are fixed. For those designs, quadrilateral counts in the linear
/// space obtained by deriving at the first `t - 2` fixed points separate
/// points at the shallow levels.
struct QuadInvariant {
    /// Derivations needed to reach a linear space.
    depth: usize,
    cache: RefCell<HashMap<Vec<usize>, Rc<QuadCounts>>>,
}

impl QuadInvariant {
    fn detect(d: &Design) -> Option<Self> {
        let k = d.block_size()?;
        if d.block_count() < 2 {
            return None;
        }
        let hist = intersection_histogram(d, &point_blocks(d));
        let t = hist.iter().rposition(|&h| h > 0).unwrap_or(0) + 1;
        if t < 2 || k < t + 1 {
            return None;
        }
        let need = binomial_big(d.v(), t);
        if binomial_big(k, t) * d.block_count() != need {
            return None;
        }
        Some(QuadInvariant {
            depth: t - 2,
            cache: RefCell::new(HashMap::new()),
        })
    }

    fn counts(&self, d: &Design, at: &[usize]) -> Rc<QuadCounts> {
        let mut key = at.to_vec();
        key.sort_unstable();
        if let Some(q) = self.cache.borrow().get(&key) {
            return Rc::clone(q);
        }
        let lines: Vec<Vec<usize>> = d
            .blocks()
            .iter()
            .filter(|b| key.iter().all(|p| b.binary_search(p).is_ok()))
            .map(|b| b.iter().copied().filter(|p| key.binary_search(p).is_err()).collect())
            .collect();
        let q = Rc::new(QuadCounts::new(d.v(), &lines));
        self.cache.borrow_mut().insert(key, Rc::clone(&q));
        q
    }

    /// Per-point invariant relative to the individualized `prefix`.
    fn values(&self, d: &Design, prefix: &[usize]) -> Option<Vec<u64>> {
        let v = d.v();
        let s = self.depth;
        if prefix.len() + 1 == s {
            let mut at = prefix.to_vec();
            let out = (0..v)
                .map(|y| {
                    if prefix.contains(&y) {
                        return u64::MAX;
                    }
                    at.push(y);
                    let total = self.counts(d, &at).total();
                    at.pop();
                    total
                })
                .collect();
            return Some(out);
        }
        if prefix.len() < s || prefix.len() > s + 1 {
            return None;
        }
        let q = self.counts(d, &prefix[..s]);
        let row = prefix.get(s).copied();
        Some(
            (0..v)
                .map(|y| match row {
                    Some(m) => q.pair[m * v + y],
                    None => q.pair[y * v + y],
                })
                .collect(),
        )
    }
}

struct Incidence<'a> {
    design: &'a Design,
    point_blocks: Vec<Vec<u32>>,
    quads: Option<QuadInvariant>,
}

/// A stable colouring: `colours[p]` in `0..cells`.
#[derive(Clone)]
struct Node {
    colours: Vec<u32>,
    cells: usize,
    hash: u64,
    /// Individualized points, in order.
    prefix: Vec<usize>,
}

impl Node {
    fn is_discrete(&self) -> bool {
        self.cells == self.colours.len()
    }
}

impl<'a> Incidence<'a> {
    fn new(design: &'a Design) -> Self {
        Incidence {
            design,
            point_blocks: point_blocks(design),
            quads: QuadInvariant::detect(design),
        }
    }

    fn refine(&self, mut colours: Vec<u32>, mut cells: usize, prefix: Vec<usize>, hasher: &mut DefaultHasher) -> Node {
        if let Some(inv) = self.quads.as_ref().and_then(|q| q.values(self.design, &prefix)) {
            let keys: Vec<(u32, u64)> = colours.iter().zip(&inv).map(|(&c, &x)| (c, x)).collect();
            (colours, cells) = rank_keys(&keys, hasher);
        }
        let blocks = self.design.blocks();
        loop {
            let bsig: Vec<Vec<u32>> = blocks
                .iter()
                .map(|b| {
                    let mut s: Vec<u32> = b.iter().map(|&p| colours[p]).collect();
                    s.sort_unstable();
                    s
                })
                .collect();
            let (bcol, _) = rank_keys(&bsig, hasher);
            let psig: Vec<(u32, Vec<u32>)> = self
                .point_blocks
                .iter()
                .enumerate()
                .map(|(p, inc)| {
                    let mut s: Vec<u32> = inc.iter().map(|&i| bcol[i as usize]).collect();
                    s.sort_unstable();
                    (colours[p], s)
                })
                .collect();
            let (next, n) = rank_keys(&psig, hasher);
            colours = next;
            if n == cells {
                break;
            }
            cells = n;
        }
        Node {
            colours,
            cells,
            hash: hasher.finish(),
            prefix,
        }
    }

    fn root(&self) -> Node {
        let v = self.design.v();
        let mut h = DefaultHasher::new();
        v.hash(&mut h);
        self.refine(vec![0; v], usize::from(v > 0), Vec::new(), &mut h)
    }

    fn individualize(&self, node: &Node, p: usize) -> Node {
        let keys: Vec<(u32, bool)> = node
            .colours
            .iter()
            .enumerate()
            .map(|(x, &c)| (c, x != p))
            .collect();
        let mut h = DefaultHasher::new();
        node.hash.hash(&mut h);
        let (colours, cells) = rank_keys(&keys, &mut h);
        let mut prefix = node.prefix.clone();
        prefix.push(p);
        self.refine(colours, cells, prefix, &mut h)
    }
}

/// The first smallest non-trivial cell, members ascending.
fn target_cell(node: &Node) -> Vec<usize> {
    let mut size = vec![0usize; node.cells];
    for &c in &node.colours {
        size[c as usize] += 1;
    }
    let Some(cell) = (0..node.cells)
        .filter(|&c| size[c] > 1)
        .min_by_key(|&c| (size[c], c))
    else {
        return Vec::new();
    };
    (0..node.colours.len())
        .filter(|&p| node.colours[p] as usize == cell)
        .collect()
}

/// Point map sending the point of each colour in `from` to the point of
/// the same colour in `to`; both colourings are discrete.
fn leaf_map(from: &Node, to: &Node) -> Permutation {
    let mut by_colour = vec![0usize; to.colours.len()];
    for (p, &c) in to.colours.iter().enumerate() {
        by_colour[c as usize] = p;
    }
    let images = from.colours.iter().map(|&c| by_colour[c as usize]).collect();
    Permutation::from_images(images).expect("discrete colourings")
}

struct Level {
    node: Node,
    cell: Vec<usize>,
    /// Hash of the child reached by individualizing `cell[0]`.
    child_hash: u64,
}

/// Leftmost path of the search tree.
struct FirstPath {
    levels: Vec<Level>,
    leaf: Node,
}

fn first_path(inc: &Incidence) -> FirstPath {
    let mut node = inc.root();
    let mut levels = Vec::new();
    while !node.is_discrete() {
        let cell = target_cell(&node);
        let child = inc.individualize(&node, cell[0]);
        levels.push(Level {
            node,
            cell,
            child_hash: child.hash,
        });
        node = child;
    }
    FirstPath { levels, leaf: node }
}

struct Budget {
    nodes: u64,
    cap: Option<u64>,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        match self.cap {
            Some(cap) if self.nodes > cap => Err(Error::NodeCapExceeded(cap)),
            _ => Ok(()),
        }
    }
}

/// Depth-first search below `node` (at `depth` of the reference path) for
/// a leaf whose map from the reference leaf passes `accept`.
fn search_leaf(
    inc: &Incidence,
    path: &FirstPath,
    node: &Node,
    depth: usize,
    budget: &mut Budget,
    accept: &mut dyn FnMut(&Permutation) -> bool,
) -> Result<Option<Permutation>> {
    let level = &path.levels[depth];
    let cell = target_cell(node);
    if cell.len() != level.cell.len() {
        return Ok(None);
    }
    for &w in &cell {
        if let Some(g) = descend(inc, path, node, w, depth, budget, accept)? {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

fn descend(
    inc: &Incidence,
    path: &FirstPath,
    node: &Node,
    w: usize,
    depth: usize,
    budget: &mut Budget,
    accept: &mut dyn FnMut(&Permutation) -> bool,
) -> Result<Option<Permutation>> {
    budget.tick()?;
    let child = inc.individualize(node, w);
    if child.hash != path.levels[depth].child_hash {
        return Ok(None);
    }
    if child.is_discrete() {
        let g = leaf_map(&path.leaf, &child);
        return Ok(accept(&g).then_some(g));
    }
    search_leaf(inc, path, &child, depth + 1, budget, accept)
}

/// An explicit isomorphism, or `None` when the designs are not isomorphic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoCertificate {
    pub mapping: Option<Permutation>,
}

impl IsoCertificate {
    pub fn is_isomorphic(&self) -> bool {
        self.mapping.is_some()
    }
}

fn quick_reject(a: &Design, b: &Design) -> bool {
    if a.v() != b.v() || a.block_count() != b.block_count() {
        return true;
    }
    let mut sa: Vec<usize> = a.blocks().iter().map(Vec::len).collect();
    let mut sb: Vec<usize> = b.blocks().iter().map(Vec::len).collect();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return true;
    }
    let mut da = a.point_degrees();
    let mut db = b.point_degrees();
    da.sort_unstable();
    db.sort_unstable();
    da != db
}

/// Searches for a point map carrying the blocks of `a` onto those of `b`.
/// A returned mapping has been checked block by block.
pub fn are_isomorphic(a: &Design, b: &Design) -> IsoCertificate {
    if quick_reject(a, b) {
        return IsoCertificate { mapping: None };
    }
    let ia = Incidence::new(a);
    let ib = Incidence::new(b);
    let path = first_path(&ia);
    let root_b = ib.root();
    if root_b.hash != ia.root().hash {
        return IsoCertificate { mapping: None };
    }
    let mut accept = |g: &Permutation| a.relabel(g).map(|r| &r == b).unwrap_or(false);
    let mut budget = Budget { nodes: 0, cap: None };
    let found = if root_b.is_discrete() {
        let g = leaf_map(&path.leaf, &root_b);
        accept(&g).then_some(g)
    } else {
        search_leaf(&ib, &path, &root_b, 0, &mut budget, &mut accept).expect("no node cap")
    };
    if let Some(g) = &found {
        assert_eq!(&a.relabel(g).expect("same degree"), b, "isomorphism check");
    }
    IsoCertificate { mapping: found }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            y = std::mem::replace(&mut self.0[y], r);
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn add_generator(&mut self, g: &Permutation) {
        for x in 0..g.degree() {
            self.union(x, g.apply(x));
        }
    }
}

#[derive(Debug, Clone)]
pub struct Automorphisms {
    pub group: PermGroup,
    pub order: u128,
    /// Search nodes explored.
    pub nodes: u64,
}

/// Generators and order of the full automorphism group.
///
/// `node_cap` bounds the number of search nodes. The order is the product
/// of the basic orbit lengths along the first path, and is compared with
/// an enumeration of the generated group when it is small enough.
pub fn automorphism_group(d: &Design, node_cap: Option<u64>) -> Result<Automorphisms> {
    let v = d.v();
    let inc = Incidence::new(d);
    let path = first_path(&inc);
    let mut budget = Budget { nodes: path.levels.len() as u64, cap: node_cap };
    let mut generators: Vec<Permutation> = Vec::new();
    let mut orbits = UnionFind((0..v).collect());
    let mut order: u128 = 1;

    for depth in (0..path.levels.len()).rev() {
        let level = &path.levels[depth];
        let anchor = level.cell[0];
        let mut failed: Vec<usize> = Vec::new();
        for &w in &level.cell[1..] {
            if orbits.find(w) == orbits.find(anchor) || failed.iter().any(|&f| orbits.find(f) == orbits.find(w)) {
                continue;
            }
            let mut accept = |g: &Permutation| d.is_automorphism(g).unwrap_or(false);
            match descend(&inc, &path, &level.node, w, depth, &mut budget, &mut accept)? {
                Some(g) => {
                    orbits.add_generator(&g);
                    generators.push(g);
                }
                None => failed.push(w),
            }
        }
        let root = orbits.find(anchor);
        let len = level.cell.iter().filter(|&&x| orbits.find(x) == root).count();
        order = order
            .checked_mul(len as u128)
            .ok_or_else(|| Error::Consistency("automorphism group order overflows u128".into()))?;
    }

    for g in &generators {
        if !d.is_automorphism(g)? {
            return Err(Error::Consistency("generator is not an automorphism".into()));
        }
    }
    let group = PermGroup::new(v, generators)?;
    if order <= ENUMERATION_CROSS_CHECK as u128 {
        let n = group.order(ENUMERATION_CROSS_CHECK)?;
        if n as u128 != order {
            return Err(Error::Consistency(format!(
                "orbit lengths give order {order} but the generators give {n}"
            )));
        }
    }
    Ok(Automorphisms {
        group,
        order,
        nodes: budget.nodes,
    })
}

/// Indices of pairwise non-isomorphic representatives, first seen kept,
/// in input order.
pub fn representative_indices(designs: &[Design]) -> Vec<usize> {
    let prints: Vec<Fingerprint> = designs.par_iter().map(fingerprint).collect();
    let mut buckets: HashMap<&Fingerprint, Vec<usize>> = HashMap::new();
    let mut reps = Vec::new();
    for (i, fp) in prints.iter().enumerate() {
        let bucket = buckets.entry(fp).or_default();
        let known = bucket
            .par_iter()
            .any(|&r| are_isomorphic(&designs[r], &designs[i]).is_isomorphic());
        if !known {
            bucket.push(i);
            reps.push(i);
        }
    }
    reps
}

pub fn filter_nonisomorphic(designs: &[Design]) -> Vec<Design> {
    representative_indices(designs)
        .into_iter()
        .map(|i| designs[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn shuffled(d: &Design, seed: u64) -> (Design, Permutation) {
        // deterministic Fisher-Yates with a linear congruential stream
        let mut images: Vec<usize> = (0..d.v()).collect();
        let mut s = seed;
        for i in (1..images.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            images.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = Permutation::from_images(images).unwrap();
        (d.relabel(&p).unwrap(), p)
    }

    fn brute_force_aut_order(d: &Design) -> usize {
        let mut images: Vec<usize> = (0..d.v()).collect();
        let mut count = 0;
        loop {
            if d.is_automorphism(&Permutation::from_images(images.clone()).unwrap()).unwrap() {
                count += 1;
            }
            // next permutation in lex order
            let Some(i) = (0..images.len() - 1).rev().find(|&i| images[i] < images[i + 1]) else {
                return count;
            };
            let j = (i + 1..images.len()).rev().find(|&j| images[j] > images[i]).unwrap();
            images.swap(i, j);
            images[i + 1..].reverse();
        }
    }

    #[test]
    fn fano_automorphisms() {
        let d = fixtures::fano();
        assert_eq!(brute_force_aut_order(&d), 168);
        let aut = automorphism_group(&d, None).unwrap();
        assert_eq!(aut.order, 168);
        assert_eq!(aut.group.order(1000).unwrap(), 168);
    }

    #[test]
    fn relabeling_preserves_fingerprint_and_is_found() {
        for d in [fixtures::fano(), fixtures::sqs8(), fixtures::sts13_cyclic(), fixtures::sts15()] {
            for seed in 0..3 {
                let (e, _) = shuffled(&d, seed);
                assert_eq!(fingerprint(&d), fingerprint(&e));
                let cert = are_isomorphic(&d, &e);
                let g = cert.mapping.expect("isomorphic");
                assert_eq!(d.relabel(&g).unwrap(), e);
            }
        }
    }

    #[test]
    fn the_two_sts13() {
        let both = fixtures::sts13_both().unwrap();
        assert_eq!(both.len(), 2);
        assert_ne!(fingerprint(&both[0]), fingerprint(&both[1]));
        assert!(!are_isomorphic(&both[0], &both[1]).is_isomorphic());
        let mut orders: Vec<u128> = both.iter().map(|d| automorphism_group(d, None).unwrap().order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![6, 39]);
    }

    #[test]
    fn different_shapes_are_not_isomorphic() {
        assert!(!are_isomorphic(&fixtures::fano(), &fixtures::sqs8()).is_isomorphic());
        let a = Design::new(4, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let b = Design::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(!are_isomorphic(&a, &b).is_isomorphic());
    }

    #[test]
    fn labeled_fanos_collapse() {
        let d = fixtures::fano();
        let designs: Vec<Design> = (0..6).map(|s| shuffled(&d, s).0).collect();
        assert_eq!(filter_nonisomorphic(&designs).len(), 1);
        let mixed = vec![d.clone(), fixtures::sqs8(), d.clone()];
        assert_eq!(representative_indices(&mixed), vec![0, 1]);
    }

    #[test]
    fn classical_groups() {
        assert_eq!(automorphism_group(&fixtures::sqs8(), None).unwrap().order, 1344);
        assert_eq!(automorphism_group(&fixtures::sts9(), None).unwrap().order, 432);
        assert_eq!(automorphism_group(&fixtures::sts15(), None).unwrap().order, 20160);
    }

    #[test]
    fn node_cap() {
        assert!(matches!(
            automorphism_group(&fixtures::sts15(), Some(3)),
            Err(Error::NodeCapExceeded(3))
        ));
    }

    #[test]
    fn trivial_designs() {
        let empty = Design::new(3, vec![]).unwrap();
        assert_eq!(automorphism_group(&empty, None).unwrap().order, 6);
        let one = Design::new(1, vec![vec![0]]).unwrap();
        assert_eq!(automorphism_group(&one, None).unwrap().order, 1);
    }
}
