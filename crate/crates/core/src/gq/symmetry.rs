use std::collections::BTreeSet;

use crate::algebra::{GroupElement, Subspace};
use crate::cosetgeom::{translation_permutation, Collineation, IncidenceStructure, LineLabel};
use crate::kantor::KantorFamily;

use super::{is_regular_line, GqError, RegularPointVerdict, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymmetryFailure {
    /// The orbit of `point` under the group is not exactly the points of
    /// `line` off the axis, or has repeats.
    NotSharplyTransitive { line: usize, point: usize, orbit: usize },
    /// Translation by `g` moves `line`, which meets the axis.
    MovesLine { g: GroupElement, line: usize },
    /// The axis is not a regular line.
    NotRegular { other: usize },
    /// Translation by `g` is not expressible on the labels.
    Labels { g: GroupElement },
}

impl SymmetryFailure {
    pub fn tokens(&self) -> String {
        match self {
            SymmetryFailure::NotSharplyTransitive { line, point, orbit } => {
                format!("sharp line={line} point={point} orbit={orbit}")
            }
            SymmetryFailure::MovesLine { g, line } => format!("moves g={} line={line}", g.token()),
            SymmetryFailure::NotRegular { other } => format!("irregular other={other}"),
            SymmetryFailure::Labels { g } => format!("labels g={}", g.token()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryReport {
    pub axis: usize,
    /// Lines other than the axis that meet it.
    pub lines_checked: usize,
    pub result: std::result::Result<(), SymmetryFailure>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

fn axis_index(fam: &KantorFamily, geom: &IncidenceStructure, i: usize) -> Result<usize> {
    if i >= fam.members().len() {
        return Err(GqError::MemberIndex {
            index: i,
            len: fam.members().len(),
        });
    }
    let label = LineLabel::StarLine(i);
    geom.line_index(&label).ok_or(GqError::MissingLabel(label.token()))
}

/// Checks that translations by `group` fix every line meeting
/// `StarLine(i)` and act sharply transitively on the points of each such
/// line off the axis. Regularity of the axis is not checked here.
pub fn verify_symmetry_group(fam: &KantorFamily, geom: &IncidenceStructure, i: usize, group: &Subspace) -> Result<SymmetryReport> {
    let axis = axis_index(fam, geom, i)?;
    let on_axis: BTreeSet<usize> = geom.line(axis).iter().copied().collect();
    let meeting: BTreeSet<usize> = on_axis
        .iter()
        .flat_map(|&x| geom.lines_through(x).iter().copied())
        .filter(|&j| j != axis)
        .collect();
    let mut perms: Vec<(GroupElement, Collineation)> = Vec::with_capacity(group.order() as usize);
    for g in group.elements() {
        match translation_permutation(fam, geom, &g) {
            Ok(c) => perms.push((g, c)),
            Err(_) => {
                return Ok(SymmetryReport {
                    axis,
                    lines_checked: 0,
                    result: Err(SymmetryFailure::Labels { g }),
                })
            }
        }
    }
    let report = |result| SymmetryReport {
        axis,
        lines_checked: meeting.len(),
        result,
    };
    for &line in &meeting {
        let off: BTreeSet<usize> = geom.line(line).iter().copied().filter(|x| !on_axis.contains(x)).collect();
        let Some(&point) = off.iter().next() else { continue };
        let orbit: Vec<usize> = perms.iter().map(|(_, c)| c.points[point]).collect();
        let distinct: BTreeSet<usize> = orbit.iter().copied().collect();
        if distinct.len() != orbit.len() || distinct != off {
            return Ok(report(Err(SymmetryFailure::NotSharplyTransitive {
                line,
                point,
                orbit: distinct.len(),
            })));
        }
    }
    for (g, c) in &perms {
        if let Some(&line) = meeting.iter().find(|&&j| c.lines[j] != j) {
            return Ok(report(Err(SymmetryFailure::MovesLine { g: g.clone(), line })));
        }
    }
    Ok(report(Ok(())))
}

/// `StarLine(i)` is an axis of symmetry with group `A_i`, and is regular.
pub fn verify_axis_of_symmetry(fam: &KantorFamily, geom: &IncidenceStructure, i: usize) -> Result<SymmetryReport> {
    let mut report = verify_symmetry_group(fam, geom, i, &fam.member(axis_member(fam, i)?).a)?;
    if report.passed() {
        if let RegularPointVerdict::NotRegular { y, .. } = is_regular_line(geom, report.axis)? {
            report.result = Err(SymmetryFailure::NotRegular { other: y });
        }
    }
    Ok(report)
}

fn axis_member(fam: &KantorFamily, i: usize) -> Result<usize> {
    if i < fam.members().len() {
        Ok(i)
    } else {
        Err(GqError::MemberIndex {
            index: i,
            len: fam.members().len(),
        })
    }
}
