//! Designs and groups shipped with the library.
//!
//! The rotational quadruple systems on 46 and 92 points and the `S(3,6,42)`
//! are given by generators and base blocks; the small classical designs are
//! built directly.

use crate::design::{design_from_orbits, Design, Params};
use crate::error::{Error, Result};
use crate::exact_cover::SearchLimits;
use crate::io::{self, parse_block_list};
use crate::isomorphism::filter_nonisomorphic;
use crate::kramer_mesner::km_search;
use crate::perm::{parse_permutation, PermGroup, Permutation};

/// Base blocks on `Z_45 ∪ {∞}` (0-based, `inf` = point 45).
pub const ROSQS46_BASE: &[&str] = &[
    "0,1,2,21", "0,1,3,24", "0,1,4,22", "0,1,5,42", "0,1,6,41",
    "0,1,7,31", "0,1,8,27", "0,1,9,19", "0,1,10,13", "0,1,11,inf",
    "0,1,12,37", "0,1,14,35", "0,1,15,25", "0,1,16,40", "0,1,17,26",
    "0,1,18,28", "0,1,23,33", "0,1,29,38", "0,1,30,34", "0,1,32,36",
    "0,1,39,43", "0,2,4,35", "0,2,5,29", "0,2,6,26", "0,2,7,28",
    "0,2,8,14", "0,2,9,36", "0,2,10,17", "0,2,11,40", "0,2,12,22",
    "0,2,13,31", "0,2,15,19", "0,2,16,inf", "0,2,18,38", "0,2,20,24",
    "0,2,25,39", "0,2,27,34", "0,2,30,42", "0,2,32,37", "0,3,6,13",
    "0,3,7,inf", "0,3,9,30", "0,3,11,32", "0,3,12,16", "0,3,14,38",
    "0,3,15,37", "0,3,17,20", "0,3,18,39", "0,3,19,22", "0,3,23,34",
    "0,3,25,40", "0,4,9,26", "0,4,11,28", "0,4,12,21", "0,4,17,31",
    "0,4,18,37", "0,4,19,39", "0,4,20,34", "0,4,23,38", "0,4,29,40",
    "0,5,11,19", "0,5,12,28", "0,5,14,36", "0,5,17,32", "0,5,18,25",
    "0,5,20,37", "0,5,23,inf", "0,5,24,35", "0,5,27,39", "0,5,31,38",
    "0,6,15,38", "0,6,16,22", "0,6,17,23", "0,6,18,36", "0,6,19,inf",
    "0,6,20,32", "0,7,15,29", "0,7,17,33", "0,8,16,32", "0,8,19,35",
    "0,8,21,33", "0,8,25,inf", "0,9,21,inf", "0,9,22,35", "0,15,30,inf",
];

/// Base blocks on `Z_91 ∪ {∞}` (0-based, `inf` = point 91).
pub const ROSQS92_BASE: &[&str] = &[
    "0,1,2,13", "0,1,3,52", "0,1,4,29", "0,1,5,31", "0,1,6,17",
    "0,1,7,59", "0,1,8,26", "0,1,9,48", "0,1,10,66", "0,1,11,inf",
    "0,1,14,39", "0,1,15,27", "0,1,16,43", "0,1,18,76", "0,1,19,58",
    "0,1,20,85", "0,1,21,40", "0,1,22,61", "0,1,24,36", "0,1,25,60",
    "0,1,28,79", "0,1,32,84", "0,1,33,63", "0,1,34,45", "0,1,35,83",
    "0,1,37,55", "0,1,38,71", "0,1,41,47", "0,1,44,70", "0,1,46,67",
    "0,1,50,77", "0,1,54,80", "0,1,56,89", "0,1,57,62", "0,1,64,78",
    "0,1,72,82", "0,1,73,81", "0,1,75,86", "0,2,5,71", "0,2,7,44",
    "0,2,8,30", "0,2,9,33", "0,2,10,67", "0,2,11,14", "0,2,12,34",
    "0,2,20,42", "0,2,24,48", "0,2,32,57", "0,2,35,72", "0,2,36,61",
    "0,2,37,inf", "0,2,41,56", "0,2,43,63", "0,2,55,60", "0,2,59,81",
    "0,3,9,21", "0,3,18,51", "0,3,31,53", "0,3,36,72", "0,3,43,76",
    "0,3,50,56", "0,3,55,84", "0,5,11,66", "0,5,14,61", "0,5,30,85",
    "0,5,33,77", "0,5,41,82", "0,5,47,65", "0,5,49,70", "0,7,21,63",
    "0,7,28,42", "0,7,36,inf", "0,13,26,52", "0,13,65,inf", "0,15,73,inf",
];

/// Generators of a group of order 432 on 42 points, 1-based cycle notation.
pub const S3_6_42_ALPHA: &str = "(1,2,4)(3,9,7)(5,6,8)(10,11,13)(12,18,16)(14,15,17)(19,38,34)\
(20,39,36)(21,37,35)(22,42,32)(23,40,31)(24,41,33)(28,30,29)";
pub const S3_6_42_BETA: &str = "(1,10)(2,11)(3,12)(4,16)(5,17)(6,18)(7,13)(8,14)(9,15)(19,23)\
(20,24)(21,22)(25,35)(26,36)(27,34)(28,33)(29,31)(30,32)(38,39)(41,42)";

/// Base blocks of the `S(3,6,42)`, 1-based.
pub const S3_6_42_BASE: &[&str] = &[
    "1,2,3,10,11,12",
    "1,2,4,20,36,39",
    "1,2,13,17,31,34",
    "1,10,19,22,25,30",
    "1,11,20,21,29,34",
    "19,20,21,22,23,24",
    "19,22,31,36,38,42",
];

/// Names accepted by [`fixture`].
pub const FIXTURE_NAMES: &[&str] = &["rosqs46", "rosqs92", "s3-6-42", "fano", "sqs8", "sts13-both"];

/// Parses comma-separated base blocks on `v` points; `inf` is point `v-1`.
pub fn parse_base_blocks(list: &[&str], v: usize, one_based: bool) -> Result<Vec<Vec<usize>>> {
    let text = format!("v={v} b={}\n{}\n", list.len(), list.join("\n"));
    parse_block_list(&text, one_based).map(|(_, blocks)| blocks)
}

pub fn rosqs46_group() -> PermGroup {
    PermGroup::cyclic(45, 46)
}

pub fn rosqs46_base() -> Vec<Vec<usize>> {
    parse_base_blocks(ROSQS46_BASE, 46, false).expect("fixture data parses")
}

/// The rotational `SQS(46)`, 3795 blocks.
pub fn rosqs46() -> Design {
    design_from_orbits(&rosqs46_group(), &rosqs46_base(), 46).expect("fixture orbits are disjoint")
}

/// `⟨x ↦ x+1, x ↦ 4x⟩` on `Z_91`, fixing point 91.
pub fn rosqs92_group() -> PermGroup {
    PermGroup::new(
        92,
        vec![Permutation::affine(91, 1, 1, 92), Permutation::affine(91, 4, 0, 92)],
    )
    .expect("degree 92")
}

pub fn rosqs92_base() -> Vec<Vec<usize>> {
    parse_base_blocks(ROSQS92_BASE, 92, false).expect("fixture data parses")
}

/// The rotational `SQS(92)`, 31395 blocks.
pub fn rosqs92() -> Design {
    design_from_orbits(&rosqs92_group(), &rosqs92_base(), 92).expect("fixture orbits are disjoint")
}

pub fn s3_6_42_generators() -> (Permutation, Permutation) {
    (
        parse_permutation(S3_6_42_ALPHA, 42, true).expect("fixture generator parses"),
        parse_permutation(S3_6_42_BETA, 42, true).expect("fixture generator parses"),
    )
}

pub fn s3_6_42_group() -> PermGroup {
    let (a, b) = s3_6_42_generators();
    PermGroup::new(42, vec![a, b]).expect("degree 42")
}

pub fn s3_6_42_base() -> Vec<Vec<usize>> {
    parse_base_blocks(S3_6_42_BASE, 42, true).expect("fixture data parses")
}

/// The `S(3,6,42)`, 574 blocks.
pub fn s3_6_42() -> Design {
    design_from_orbits(&s3_6_42_group(), &s3_6_42_base(), 42).expect("fixture orbits are disjoint")
}

pub fn fano() -> Design {
    Design::new(
        7,
        [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]]
            .iter()
            .map(|b| b.to_vec())
            .collect(),
    )
    .expect("valid blocks")
}

/// Planes of `AG(3,2)`: 4-subsets of `F_2^3` with zero sum.
pub fn sqs8() -> Design {
    let mut blocks = Vec::new();
    for a in 0..8usize {
        for b in a + 1..8 {
            for c in b + 1..8 {
                let d = a ^ b ^ c;
                if d > c {
                    blocks.push(vec![a, b, c, d]);
                }
            }
        }
    }
    Design::new(8, blocks).expect("valid blocks")
}

/// Lines of `AG(2,3)` on points `3x + y`.
pub fn sts9() -> Design {
    let mut blocks = Vec::new();
    let pt = |x: usize, y: usize| 3 * (x % 3) + y % 3;
    for x in 0..3 {
        blocks.push((0..3).map(|y| pt(x, y)).collect());
    }
    for m in 0..3 {
        for c in 0..3 {
            blocks.push((0..3).map(|x| pt(x, m * x + c)).collect());
        }
    }
    Design::new(9, blocks).expect("valid blocks")
}

/// Lines of `PG(3,2)`: points are the nonzero vectors of `F_2^4` (point
/// `i` is vector `i + 1`), a line is `{a, b, a ⊕ b}`.
pub fn sts15() -> Design {
    let mut blocks = Vec::new();
    for a in 1..16usize {
        for b in a + 1..16 {
            let c = a ^ b;
            if c > b {
                blocks.push(vec![a - 1, b - 1, c - 1]);
            }
        }
    }
    Design::new(15, blocks).expect("valid blocks")
}

/// The cyclic `STS(13)` with base blocks `{0,1,4}` and `{0,2,7}`.
pub fn sts13_cyclic() -> Design {
    design_from_orbits(&PermGroup::cyclic(13, 13), &[vec![0, 1, 4], vec![0, 2, 7]], 13)
        .expect("difference family")
}

/// An automorphism of order 3 with one fixed point, `(0,1,2)(3,4,5)(6,7,8)(9,10,11)`.
pub fn sts13_order3_group() -> PermGroup {
    let cycles: Vec<Vec<usize>> = (0..4).map(|c| vec![3 * c, 3 * c + 1, 3 * c + 2]).collect();
    PermGroup::new(13, vec![Permutation::from_cycles(13, &cycles).expect("disjoint")]).expect("degree 13")
}

/// Both isomorphism classes of `STS(13)`, obtained by classifying the
/// systems invariant under [`sts13_order3_group`].
pub fn sts13_both() -> Result<Vec<Design>> {
    let outcome = km_search(
        &sts13_order3_group(),
        Params::new(2, 3, 13)?,
        SearchLimits::unlimited(),
    )?;
    if !outcome.stats.completed {
        return Err(Error::Consistency("STS(13) search did not complete".into()));
    }
    Ok(filter_nonisomorphic(&outcome.designs))
}

/// Files materialized for a named fixture.
#[derive(Debug, Clone)]
pub struct FixtureFiles {
    pub name: String,
    /// `(file name, contents)`.
    pub files: Vec<(String, String)>,
    pub designs: Vec<Design>,
}

fn base_text(list: &[&str], v: usize) -> String {
    let mut out = format!("v={v} b={}\n", list.len());
    for b in list {
        out.push_str(&b.replace(',', " "));
        out.push('\n');
    }
    out
}

/// Group file, base blocks as listed (numbering and `inf` token preserved)
/// and expanded `.blocks` design for each named fixture.
pub fn fixture(name: &str) -> Result<FixtureFiles> {
    let mut files = Vec::new();
    let designs = match name {
        "rosqs46" => {
            files.push((
                "rosqs46.grp".into(),
                format!("# Z_45 acting on 0..44, fixing inf = 45\n{}", io::write_group(&rosqs46_group())),
            ));
            files.push(("rosqs46.base".into(), base_text(ROSQS46_BASE, 46)));
            vec![rosqs46()]
        }
        "rosqs92" => {
            files.push((
                "rosqs92.grp".into(),
                format!(
                    "# <x -> x+1, x -> 4x> on Z_91, fixing inf = 91\n{}",
                    io::write_group(&rosqs92_group())
                ),
            ));
            files.push(("rosqs92.base".into(), base_text(ROSQS92_BASE, 92)));
            vec![rosqs92()]
        }
        "s3-6-42" => {
            files.push((
                "s3-6-42.grp".into(),
                format!("# one-based\ndegree=42\n{S3_6_42_ALPHA}\n{S3_6_42_BETA}\n"),
            ));
            files.push(("s3-6-42.base".into(), format!("# one-based\n{}", base_text(S3_6_42_BASE, 42))));
            vec![s3_6_42()]
        }
        "fano" => vec![fano()],
        "sqs8" => vec![sqs8()],
        "sts13-both" => sts13_both()?,
        other => return Err(Error::UnknownFixture(other.into())),
    };
    if designs.len() == 1 {
        files.push((format!("{name}.blocks"), io::write_design(&designs[0])));
    } else {
        for (i, d) in designs.iter().enumerate() {
            files.push((format!("{name}-{}.blocks", i + 1), io::write_design(d)));
        }
    }
    Ok(FixtureFiles {
        name: name.into(),
        files,
        designs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(t: usize, k: usize, v: usize) -> Params {
        Params::new(t, k, v).unwrap()
    }

    #[test]
    fn base_block_counts() {
        assert_eq!(ROSQS46_BASE.len(), 85);
        assert_eq!(ROSQS92_BASE.len(), 75);
        assert_eq!(S3_6_42_BASE.len(), 7);
    }

    #[test]
    fn small_classical_designs_verify() {
        assert!(fano().verify(params(2, 3, 7)).unwrap().is_valid());
        assert!(sqs8().verify(params(3, 4, 8)).unwrap().is_valid());
        assert!(sts9().verify(params(2, 3, 9)).unwrap().is_valid());
        assert!(sts13_cyclic().verify(params(2, 3, 13)).unwrap().is_valid());
        assert!(sts15().verify(params(2, 3, 15)).unwrap().is_valid());
    }

    #[test]
    fn s3_6_42_expands_and_verifies() {
        let d = s3_6_42();
        assert_eq!(d.block_count(), 574);
        assert!(d.verify(params(3, 6, 42)).unwrap().is_valid());
    }

    #[test]
    fn unknown_fixture() {
        assert!(matches!(fixture("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn fixture_files_reparse() {
        let f = fixture("s3-6-42").unwrap();
        let base = &f.files.iter().find(|(n, _)| n.ends_with(".base")).unwrap().1;
        let (v, blocks) = parse_block_list(base, true).unwrap();
        assert_eq!(v, 42);
        assert_eq!(blocks, s3_6_42_base());
        let grp = &f.files.iter().find(|(n, _)| n.ends_with(".grp")).unwrap().1;
        let g = io::parse_group(grp, true).unwrap();
        assert_eq!(g.generators(), s3_6_42_group().generators());
    }
}
