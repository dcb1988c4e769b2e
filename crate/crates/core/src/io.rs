//! Text formats for designs, groups and exact cover instances.
//!
//! - `.blocks`: a header line `v=<int> b=<int>`, then one block per line as
//!   space-separated ascending point indices. The token `inf` stands for
//!   point `v-1`. A JSON form `{"v":N,"blocks":[[...],...]}` is accepted too.
//! - `.grp`: a header line `degree=<int>`, then one generator per line in
//!   cycle notation or as `img: a b c ...`.
//! - `.xc`: a header line `items=<int>`, then one option per line.
//!
//! Lines starting with `#` are comments everywhere. With `one_based`, all
//! numeric point tokens are shifted down by one.

use serde::{Deserialize, Serialize};

use crate::design::Design;
use crate::error::{Error, Result};
use crate::exact_cover::ExactCoverInstance;
use crate::perm::{parse_permutation, PermGroup};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position: format!("line {line}"),
        message: message.into(),
    }
}

/// Non-empty, non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header_value(line: usize, field: &str, key: &str) -> Result<usize> {
    let value = field
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected `{key}=<int>`, found {field:?}")))?;
    value
        .parse()
        .map_err(|_| parse_err(line, format!("invalid integer {value:?} for {key}")))
}

#[derive(Serialize, Deserialize)]
struct DesignJson {
    v: usize,
    blocks: Vec<Vec<usize>>,
}

/// Parses a block list in file order, without sorting or deduplication.
/// Returns the point count and the blocks (each sorted).
pub fn parse_block_list(text: &str, one_based: bool) -> Result<(usize, Vec<Vec<usize>>)> {
    if text.trim_start().starts_with('{') {
        let json: DesignJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            position: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        let shift = usize::from(one_based);
        let blocks = json
            .blocks
            .into_iter()
            .map(|b| {
                b.into_iter()
                    .map(|p| {
                        p.checked_sub(shift)
                            .ok_or_else(|| parse_err(1, "point 0 in one-based input"))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        return Ok((json.v, blocks));
    }

    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing `v=<int> b=<int>` header"))?;
    let mut fields = header.split_whitespace();
    let v = header_value(hline, fields.next().unwrap_or(""), "v")?;
    let b = fields
        .next()
        .map(|f| header_value(hline, f, "b"))
        .transpose()?;

    let mut blocks = Vec::new();
    for (line, content) in lines {
        let mut block = Vec::new();
        for tok in content.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let p = if tok == "inf" || tok == "∞" {
                v.checked_sub(1).ok_or_else(|| parse_err(line, "`inf` with v = 0"))?
            } else {
                let x: usize = tok
                    .parse()
                    .map_err(|_| parse_err(line, format!("invalid point {tok:?}")))?;
                if one_based {
                    x.checked_sub(1)
                        .ok_or_else(|| parse_err(line, "point 0 in one-based input"))?
                } else {
                    x
                }
            };
            if p >= v {
                return Err(parse_err(line, format!("point {tok} out of range for v = {v}")));
            }
            block.push(p);
        }
        block.sort_unstable();
        if block.windows(2).any(|w| w[0] == w[1]) {
            return Err(parse_err(line, "repeated point in block"));
        }
        blocks.push(block);
    }
    if let Some(b) = b {
        if b != blocks.len() {
            return Err(parse_err(
                hline,
                format!("header says b={b} but {} blocks follow", blocks.len()),
            ));
        }
    }
    Ok((v, blocks))
}

pub fn parse_design(text: &str, one_based: bool) -> Result<Design> {
    let (v, blocks) = parse_block_list(text, one_based)?;
    Design::new(v, blocks)
}

pub fn write_design(design: &Design) -> String {
    let mut out = format!("v={} b={}\n", design.v(), design.block_count());
    for b in design.blocks() {
        let line: Vec<String> = b.iter().map(|p| p.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn design_to_json(design: &Design) -> String {
    serde_json::to_string(&DesignJson {
        v: design.v(),
        blocks: design.blocks().to_vec(),
    })
    .expect("plain data serializes")
}

/// Block list exactly as given: optional 1-based numbering, and point
/// `v-1` written as `inf` when `infinity_token` is set.
pub fn write_block_list(v: usize, blocks: &[Vec<usize>], one_based: bool, infinity_token: bool) -> String {
    let mut out = format!("v={v} b={}\n", blocks.len());
    for b in blocks {
        let line: Vec<String> = b
            .iter()
            .map(|&p| {
                if infinity_token && p + 1 == v {
                    "inf".to_string()
                } else {
                    (p + usize::from(one_based)).to_string()
                }
            })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// GAP list syntax, 1-based, as read by the DESIGN package's
/// `BlockDesign(v, blocks)`.
pub fn write_gap(design: &Design) -> String {
    let blocks: Vec<String> = design
        .blocks()
        .iter()
        .map(|b| {
            let pts: Vec<String> = b.iter().map(|p| (p + 1).to_string()).collect();
            format!("[{}]", pts.join(","))
        })
        .collect();
    format!("BlockDesign({}, [{}]);\n", design.v(), blocks.join(","))
}

pub fn parse_group(text: &str, one_based: bool) -> Result<PermGroup> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing `degree=<int>` header"))?;
    let degree = header_value(hline, header, "degree")?;
    let mut gens = Vec::new();
    for (line, content) in lines {
        let g = parse_permutation(content, degree, one_based).map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse {
                position: format!("line {line}, {position}"),
                message,
            },
            other => Error::Parse {
                position: format!("line {line}"),
                message: other.to_string(),
            },
        })?;
        gens.push(g);
    }
    PermGroup::new(degree, gens)
}

/// 0-based cycle notation, one generator per line.
pub fn write_group(group: &PermGroup) -> String {
    let mut out = format!("degree={}\n", group.degree());
    for g in group.generators() {
        out.push_str(&g.to_cycle_string());
        out.push('\n');
    }
    out
}

pub fn parse_xc(text: &str) -> Result<ExactCoverInstance> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing `items=<int>` header"))?;
    let items = header_value(hline, header, "items")?;
    let mut options = Vec::new();
    for (line, content) in lines {
        let opt = content
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(line, format!("invalid item {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        options.push(opt);
    }
    ExactCoverInstance::new(items, options)
}

pub fn write_xc(inst: &ExactCoverInstance) -> String {
    let mut out = format!("items={}\n", inst.item_count());
    for o in inst.options() {
        let line: Vec<String> = o.iter().map(|i| i.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
