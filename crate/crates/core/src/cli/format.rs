//! Line-oriented text formats for families (`.kf`) and incidence
//! structures (`.inc`). `#` starts a comment; blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{is_prime, GroupElement, Subspace};
use crate::cosetgeom::{IncidenceStructure, LineLabel, PointLabel};
use crate::kantor::{KantorFamily, Member};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: malformed header, expected `{expected}`")]
    Header { line: usize, expected: &'static str },
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("line {line}: vector of length {got}, expected {expected}")]
    Ragged { line: usize, expected: usize, got: usize },
    #[error("line {line}: coordinate {value} is not below p = {p}")]
    Coordinate { line: usize, value: u64, p: u32 },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("member indices are not 0..{count}: {detail}")]
    IndexGap { count: usize, detail: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

/// Non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((k + 1, l))
    })
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn number<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| syntax(line, format!("expected a number, got `{s}`")))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Block {
    Member(usize),
    Star(usize),
}

pub fn parse_kf(text: &str) -> Result<KantorFamily> {
    const HEADER: &str = "KF p <prime> n <dim>";
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(FormatError::Header { line: 1, expected: HEADER })?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let [ "KF", "p", p, "n", n ] = words[..] else {
        return Err(FormatError::Header { line: hl, expected: HEADER });
    };
    let p: u64 = number(hl, p)?;
    let n: usize = number(hl, n)?;
    if !is_prime(p) || p > u64::from(u32::MAX) {
        return Err(FormatError::NotPrime(p));
    }
    let p = p as u32;
    if n == 0 {
        return Err(syntax(hl, "n must be positive"));
    }
    let mut blocks: BTreeMap<Block, Vec<GroupElement>> = BTreeMap::new();
    let mut current = None;
    for (ln, l) in lines {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        match kw {
            "member" | "star" => {
                let i = number(ln, rest)?;
                let b = if kw == "member" { Block::Member(i) } else { Block::Star(i) };
                if blocks.insert(b, Vec::new()).is_some() {
                    return Err(syntax(ln, format!("repeated block `{l}`")));
                }
                current = Some(b);
            }
            "gen" => {
                let b = current.ok_or_else(|| syntax(ln, "gen outside a block"))?;
                let coords = rest
                    .split(',')
                    .map(|c| number::<u64>(ln, c.trim()))
                    .collect::<Result<Vec<_>>>()?;
                if coords.len() != n {
                    return Err(FormatError::Ragged { line: ln, expected: n, got: coords.len() });
                }
                if let Some(&value) = coords.iter().find(|&&c| c >= u64::from(p)) {
                    return Err(FormatError::Coordinate { line: ln, value, p });
                }
                let g = GroupElement::from_reduced(coords.into_iter().map(|c| c as u32).collect());
                blocks.get_mut(&b).expect("opened").push(g);
            }
            _ => return Err(syntax(ln, format!("unknown keyword `{kw}`"))),
        }
    }
    let count = blocks.keys().filter(|b| matches!(b, Block::Member(_))).count();
    let mut members = Vec::with_capacity(count);
    for i in 0..count {
        let gap = |what: &str| FormatError::IndexGap {
            count,
            detail: format!("no {what} block {i}"),
        };
        let a = blocks.get(&Block::Member(i)).ok_or_else(|| gap("member"))?;
        let star = blocks.get(&Block::Star(i)).ok_or_else(|| gap("star"))?;
        let span = |gens: &[GroupElement]| Subspace::span(p, n, gens).map_err(|e| FormatError::Invalid(e.to_string()));
        members.push(Member { a: span(a)?, star: span(star)? });
    }
    if blocks.len() != 2 * count {
        return Err(FormatError::IndexGap {
            count,
            detail: "star block without a member".into(),
        });
    }
    KantorFamily::new(p, n, members).map_err(|e| FormatError::Invalid(e.to_string()))
}

fn write_gens(out: &mut String, s: &Subspace) {
    for b in s.basis() {
        let coords: Vec<String> = b.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "gen {}", coords.join(","));
    }
}

/// Reduced bases, members in order.
pub fn serialize_kf(fam: &KantorFamily) -> String {
    let mut out = format!("KF p {} n {}\n", fam.p(), fam.n());
    for (i, m) in fam.members().iter().enumerate() {
        let _ = writeln!(out, "member {i}");
        write_gens(&mut out, &m.a);
        let _ = writeln!(out, "star {i}");
        write_gens(&mut out, &m.star);
    }
    out
}

/// The label a line of an expanded geometry would carry, read off its
/// points.
fn line_label(points: &[PointLabel], j: usize) -> LineLabel {
    let stars: Vec<usize> = points
        .iter()
        .filter_map(|l| match l {
            PointLabel::StarCoset(i, _) => Some(*i),
            _ => None,
        })
        .collect();
    let affine: Vec<&GroupElement> = points
        .iter()
        .filter_map(|l| match l {
            PointLabel::Affine(g) => Some(g),
            _ => None,
        })
        .collect();
    let has_inf = points.contains(&PointLabel::Infinity);
    if has_inf && affine.is_empty() && !stars.is_empty() && stars.iter().all(|&i| i == stars[0]) && stars.len() + 1 == points.len() {
        return LineLabel::StarLine(stars[0]);
    }
    if !has_inf && stars.len() == 1 && affine.len() + 1 == points.len() {
        let least = affine.iter().min().expect("nonempty");
        return LineLabel::Coset(stars[0], (*least).clone());
    }
    LineLabel::Named(format!("l{j}"))
}

pub fn parse_inc(text: &str) -> Result<IncidenceStructure> {
    const HEADER: &str = "INC points <N> lines <M>";
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(FormatError::Header { line: 1, expected: HEADER })?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let [ "INC", "points", np, "lines", nl ] = words[..] else {
        return Err(FormatError::Header { line: hl, expected: HEADER });
    };
    let np: usize = number(hl, np)?;
    let nl: usize = number(hl, nl)?;
    let mut labels: Vec<Option<PointLabel>> = vec![None; np];
    let mut incidence: Vec<Option<Vec<usize>>> = vec![None; nl];
    for (ln, l) in lines {
        if let Some(rest) = l.strip_prefix("P ") {
            let mut w = rest.split_whitespace();
            let (Some(idx), Some(tok), None) = (w.next(), w.next(), w.next()) else {
                return Err(syntax(ln, "expected `P <idx> <label>`"));
            };
            let idx: usize = number(ln, idx)?;
            let slot = labels.get_mut(idx).ok_or_else(|| syntax(ln, format!("point {idx} out of range")))?;
            if slot.replace(PointLabel::parse(tok)).is_some() {
                return Err(syntax(ln, format!("point {idx} given twice")));
            }
        } else if let Some(rest) = l.strip_prefix("L ") {
            let (idx, pts) = rest.split_once(':').ok_or_else(|| syntax(ln, "expected `L <idx>: <points>`"))?;
            let idx: usize = number(ln, idx.trim())?;
            let pts = pts.split_whitespace().map(|s| number(ln, s)).collect::<Result<Vec<usize>>>()?;
            if pts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(syntax(ln, "point indices must ascend"));
            }
            let slot = incidence.get_mut(idx).ok_or_else(|| syntax(ln, format!("line {idx} out of range")))?;
            if slot.replace(pts).is_some() {
                return Err(syntax(ln, format!("line {idx} given twice")));
            }
        } else {
            return Err(syntax(ln, "expected a P or L record"));
        }
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| FormatError::Invalid(format!("point {i} has no record"))))
        .collect::<Result<Vec<_>>>()?;
    let incidence = incidence
        .into_iter()
        .enumerate()
        .map(|(j, l)| l.ok_or_else(|| FormatError::Invalid(format!("line {j} has no record"))))
        .collect::<Result<Vec<_>>>()?;
    if let Some(&bad) = incidence.iter().flatten().find(|&&x| x >= np) {
        return Err(FormatError::Invalid(format!("line names point {bad} of {np}")));
    }
    let line_labels = incidence
        .iter()
        .enumerate()
        .map(|(j, pts)| {
            let pl: Vec<PointLabel> = pts.iter().map(|&x| labels[x].clone()).collect();
            line_label(&pl, j)
        })
        .collect();
    IncidenceStructure::new(labels, line_labels, incidence).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn serialize_inc(geom: &IncidenceStructure) -> String {
    let mut out = format!("INC points {} lines {}\n", geom.num_points(), geom.num_lines());
    for (i, l) in geom.point_labels().iter().enumerate() {
        let _ = writeln!(out, "P {i} {}", l.token());
    }
    for (j, pts) in geom.lines().iter().enumerate() {
        let pts: Vec<String> = pts.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "L {j}: {}", pts.join(" "));
    }
    out
}
