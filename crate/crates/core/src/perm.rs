//! Permutations of `0..n` and finitely generated permutation groups.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use crate::combinatorics::lcm;
use crate::design::Design;
use crate::error::{Error, Result};

/// Default bound on the number of elements enumerated by [`PermGroup`].
pub const DEFAULT_GROUP_CAP: usize = 10_000_000;

/// A bijection of `0..n`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!(
                    "image list {images:?} is not a bijection of 0..{n}"
                )));
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles; unnamed points are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if std::mem::replace(&mut used[x], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} repeated in cycles"
                    )));
                }
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// `x ↦ (a·x + b) mod m` on `0..m`, extended by fixed points up to
    /// `degree`. Panics if the map is not a bijection.
    pub fn affine(m: usize, a: usize, b: usize, degree: usize) -> Self {
        let mut images: Vec<usize> = (0..degree).collect();
        for (x, img) in images.iter_mut().enumerate().take(m) {
            *img = (a * x + b) % m;
        }
        Permutation::from_images(images).expect("affine map must be a bijection")
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// Image of a set, sorted.
    pub fn apply_block(&self, block: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = block.iter().map(|&x| self.images[x]).collect();
        out.sort_unstable();
        out
    }

    #[inline]
    pub fn apply_mask(&self, mut mask: u128) -> u128 {
        let mut out = 0u128;
        while mask != 0 {
            let x = mask.trailing_zeros() as usize;
            out |= 1u128 << self.images[x];
            mask &= mask - 1;
        }
        out
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation> {
        other.compose(self)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Order of the permutation, the lcm of its cycle lengths.
    pub fn order(&self) -> u128 {
        self.cycles()
            .iter()
            .fold(1u128, |acc, c| lcm(acc, c.len() as u128))
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i == x)
            .map(|(i, _)| i)
            .collect()
    }

    /// The same permutation on `degree >= self.degree()` points, fixing the
    /// new points.
    pub fn extend_fixing(&self, degree: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(self.images.len()..degree);
        Permutation { images }
    }

    /// Restriction to `0..degree`, which must be an invariant set.
    pub fn restrict(&self, degree: usize) -> Result<Permutation> {
        let images = self.images[..degree.min(self.images.len())].to_vec();
        Permutation::from_images(images)
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    /// Cycle notation with 0-based points, `()` for the identity.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        cycles
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(","))
            })
            .collect()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.to_cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

/// Parses a permutation in cycle notation, `(a,b,c)(d,e)`, or as an image
/// list, `img: a b c ...`. Commas or whitespace separate points inside a
/// cycle. With `one_based`, every point is shifted down by one.
pub fn parse_permutation(text: &str, degree: usize, one_based: bool) -> Result<Permutation> {
    let text = text.trim();
    let shift = |tok: &str, pos: usize| -> Result<usize> {
        let x: usize = tok.parse().map_err(|_| Error::Parse {
            position: format!("column {}", pos + 1),
            message: format!("expected a point index, found {tok:?}"),
        })?;
        let x = if one_based {
            x.checked_sub(1).ok_or_else(|| Error::Parse {
                position: format!("column {}", pos + 1),
                message: "point 0 in one-based input".into(),
            })?
        } else {
            x
        };
        if x >= degree {
            return Err(Error::Parse {
                position: format!("column {}", pos + 1),
                message: format!("point {tok} out of range for degree {degree}"),
            });
        }
        Ok(x)
    };

    if let Some(rest) = text.strip_prefix("img:") {
        let offset = text.len() - rest.len();
        let mut images = Vec::new();
        for (pos, tok) in tokens(rest) {
            images.push(shift(tok, pos + offset)?);
        }
        if images.len() != degree {
            return Err(Error::Parse {
                position: "image list".into(),
                message: format!("{} images given for degree {degree}", images.len()),
            });
        }
        return Permutation::from_images(images).map_err(|e| Error::Parse {
            position: "image list".into(),
            message: e.to_string(),
        });
    }

    let mut cycles = Vec::new();
    let mut used = vec![false; degree];
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' => i += 1,
            b'(' => {
                let close = text[i..].find(')').ok_or_else(|| Error::Parse {
                    position: format!("column {}", i + 1),
                    message: "unclosed cycle".into(),
                })? + i;
                let mut cycle = Vec::new();
                for (pos, tok) in tokens(&text[i + 1..close]) {
                    let x = shift(tok, pos + i + 1)?;
                    if std::mem::replace(&mut used[x], true) {
                        return Err(Error::Parse {
                            position: format!("column {}", pos + i + 2),
                            message: format!("point {tok} repeated"),
                        });
                    }
                    cycle.push(x);
                }
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
                i = close + 1;
            }
            c => {
                return Err(Error::Parse {
                    position: format!("column {}", i + 1),
                    message: format!("unexpected character {:?}", c as char),
                })
            }
        }
    }
    Permutation::from_cycles(degree, &cycles)
}

/// Tokens separated by commas or whitespace, with their byte offsets.
fn tokens(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .scan(0usize, |off, tok| {
            let start = *off;
            *off += tok.len() + 1;
            Some((start, tok))
        })
        .filter(|(_, t)| !t.is_empty())
}

/// A permutation group given by generators.
///
/// The element list is computed on demand and cached; the cache is
/// write-once so the group can be shared between threads.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: OnceLock<Vec<Permutation>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let elements = OnceLock::new();
        if let Some(e) = self.elements.get() {
            let _ = elements.set(e.clone());
        }
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            elements,
        }
    }
}

impl PermGroup {
    /// An empty generator list stands for the trivial group.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: g.degree(),
                right: degree,
            });
        }
        let generators = if generators.is_empty() {
            vec![Permutation::identity(degree)]
        } else {
            generators
        };
        Ok(PermGroup {
            degree,
            generators,
            elements: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).expect("identity has the right degree")
    }

    /// `⟨x ↦ x+1 mod m⟩` on `degree >= m` points.
    pub fn cyclic(m: usize, degree: usize) -> Self {
        PermGroup::new(degree, vec![Permutation::affine(m, 1, 1, degree)]).expect("degree")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Generators other than the identity.
    pub fn nontrivial_generators(&self) -> impl Iterator<Item = &Permutation> {
        self.generators.iter().filter(|g| !g.is_identity())
    }

    /// All elements, breadth first by word length in the generators, each
    /// layer in lexicographic order of image lists. Fails once the element
    /// count would exceed `cap`.
    pub fn enumerate_elements(&self, cap: usize) -> Result<&[Permutation]> {
        if let Some(e) = self.elements.get() {
            if e.len() > cap {
                return Err(Error::GroupCapExceeded {
                    reached: e.len(),
                    cap,
                });
            }
            return Ok(e);
        }
        let elements = self.closure(cap)?;
        Ok(self.elements.get_or_init(|| elements))
    }

    fn closure(&self, cap: usize) -> Result<Vec<Permutation>> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut all = vec![id.clone()];
        let mut frontier = vec![id];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for g in self.nontrivial_generators() {
                    let p = h.then(g).expect("same degree");
                    if !seen.contains(&p) {
                        if seen.len() >= cap {
                            return Err(Error::GroupCapExceeded {
                                reached: seen.len() + 1,
                                cap,
                            });
                        }
                        seen.insert(p.clone());
                        next.push(p);
                    }
                }
            }
            next.sort_unstable();
            all.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(all)
    }

    pub fn order(&self, cap: usize) -> Result<usize> {
        self.enumerate_elements(cap).map(<[_]>::len)
    }

    /// Cached order, if the elements have been enumerated.
    pub fn cached_order(&self) -> Option<usize> {
        self.elements.get().map(Vec::len)
    }

    /// Whether every generator fixes `point`.
    pub fn stabilizes(&self, point: usize) -> bool {
        point < self.degree && self.generators.iter().all(|g| g.apply(point) == point)
    }

    /// Whether every generator maps the block set of `design` onto itself.
    pub fn is_invariant(&self, design: &Design) -> Result<bool> {
        if self.degree != design.v() {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: design.v(),
            });
        }
        for g in self.nontrivial_generators() {
            if !design.is_automorphism(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The same group acting on `degree` points, the new points fixed.
    pub fn extend_fixing(&self, degree: usize) -> Result<PermGroup> {
        if degree < self.degree {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: self.degree,
            });
        }
        PermGroup::new(
            degree,
            self.generators.iter().map(|g| g.extend_fixing(degree)).collect(),
        )
    }

    /// The action on `0..degree`, which must be invariant under every generator.
    pub fn restrict(&self, degree: usize) -> Result<PermGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.restrict(degree))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(degree, gens)
    }

    /// Orbits of the group on points, each sorted, ordered by least element.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                for g in &self.generators {
                    let y = g.apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_cycles_and_images() {
        let p = parse_permutation("(0,1,2)", 4, false).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 3]);
        let q = parse_permutation("img: 1 0", 2, false).unwrap();
        assert_eq!(q.images(), &[1, 0]);
        assert_eq!(q.order(), 2);
        let r = parse_permutation("(1 2)(3,4)", 4, true).unwrap();
        assert_eq!(r.images(), &[1, 0, 3, 2]);
        assert!(parse_permutation("()", 3, false).unwrap().is_identity());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_permutation("(0,1)(1,2)", 3, false) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, "column 7"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_permutation("(0,5)", 3, false),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_permutation("(0,1", 3, false),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_permutation("img: 0 0 1", 3, false),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_permutation("(0,1)", 3, true),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn theorem_generators_have_expected_orders() {
        let (alpha, beta) = fixtures::s3_6_42_generators();
        assert_eq!(alpha.order(), 3);
        assert_eq!(beta.order(), 2);
        // points missing from alpha's cycle notation: 25, 26, 27 (1-based)
        assert_eq!(alpha.fixed_points(), vec![24, 25, 26]);
    }

    #[test]
    fn group_operations() {
        let p = parse_permutation("(0,3,1)(2,4)", 5, false).unwrap();
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        assert_eq!(p.order(), 6);
        let q = parse_permutation("(0,1)", 5, false).unwrap();
        // compose applies the right factor first
        assert_eq!(p.compose(&q).unwrap().apply(0), p.apply(1));
        assert_eq!(p.then(&q).unwrap().apply(0), q.apply(p.apply(0)));
        assert!(p.compose(&Permutation::identity(4)).is_err());
        assert_eq!(Permutation::affine(45, 1, 1, 45).order(), 45);
    }

    #[test]
    fn element_enumeration() {
        let z45 = PermGroup::cyclic(45, 46);
        assert_eq!(z45.order(DEFAULT_GROUP_CAP).unwrap(), 45);
        let g92 = fixtures::rosqs92_group();
        assert_eq!(g92.order(DEFAULT_GROUP_CAP).unwrap(), 546);
        let g42 = fixtures::s3_6_42_group();
        assert_eq!(g42.order(DEFAULT_GROUP_CAP).unwrap(), 432);
        assert_eq!(g42.cached_order(), Some(432));
        let elems = g42.enumerate_elements(1000).unwrap();
        assert!(elems[0].is_identity());
        assert!(matches!(
            fixtures::s3_6_42_group().enumerate_elements(100),
            Err(Error::GroupCapExceeded { cap: 100, .. })
        ));
        // cached result still honours a smaller cap
        assert!(g42.enumerate_elements(10).is_err());
    }

    #[test]
    fn fixed_points_and_stabilizers() {
        let z45 = PermGroup::cyclic(45, 46);
        assert_eq!(z45.generators()[0].fixed_points(), vec![45]);
        assert!(z45.stabilizes(45));
        assert!(!z45.stabilizes(3));
        assert_eq!(z45.point_orbits().len(), 2);
    }
}
