use std::collections::HashMap;
use std::fmt;

use crate::algebra::GroupElement;

use super::{CosetGeomError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointLabel {
    Affine(GroupElement),
    /// `StarCoset(i, r)` is the coset `A_i* + r`, `r` canonical.
    StarCoset(usize, GroupElement),
    Infinity,
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineLabel {
    /// `Coset(i, r)` is the coset `A_i + r`, `r` canonical.
    Coset(usize, GroupElement),
    StarLine(usize),
    Named(String),
}

fn parse_coords(s: &str) -> Option<GroupElement> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let coords = inner
        .split(',')
        .map(|c| c.trim().parse::<u32>().ok())
        .collect::<Option<Vec<_>>>()?;
    Some(GroupElement::from_reduced(coords))
}

fn parse_indexed(s: &str, prefix: char) -> Option<(usize, GroupElement)> {
    let rest = s.strip_prefix(prefix)?;
    let open = rest.find('(')?;
    let i = rest[..open].parse().ok()?;
    Some((i, parse_coords(&rest[open..])?))
}

impl PointLabel {
    /// Whitespace-free token: `A(0,1,0)`, `S2(0,0,1)`, `INF`, or the name.
    pub fn token(&self) -> String {
        self.to_string()
    }

    /// Inverse of [`PointLabel::token`]. Anything unrecognized is a name.
    pub fn parse(token: &str) -> Self {
        if token == "INF" {
            return PointLabel::Infinity;
        }
        if let Some(g) = token.strip_prefix('A').and_then(parse_coords) {
            return PointLabel::Affine(g);
        }
        if let Some((i, r)) = parse_indexed(token, 'S') {
            return PointLabel::StarCoset(i, r);
        }
        PointLabel::Named(token.to_string())
    }
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointLabel::Affine(g) => write!(f, "A{g}"),
            PointLabel::StarCoset(i, r) => write!(f, "S{i}{r}"),
            PointLabel::Infinity => write!(f, "INF"),
            PointLabel::Named(s) => write!(f, "{s}"),
        }
    }
}

impl LineLabel {
    pub fn token(&self) -> String {
        self.to_string()
    }

    pub fn parse(token: &str) -> Self {
        if let Some((i, r)) = parse_indexed(token, 'C') {
            return LineLabel::Coset(i, r);
        }
        if let Some(i) = token.strip_prefix('T').and_then(|s| s.parse().ok()) {
            return LineLabel::StarLine(i);
        }
        LineLabel::Named(token.to_string())
    }
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineLabel::Coset(i, r) => write!(f, "C{i}{r}"),
            LineLabel::StarLine(i) => write!(f, "T{i}"),
            LineLabel::Named(s) => write!(f, "{s}"),
        }
    }
}

/// Labeled points and lines; each line is the sorted list of its points.
///
/// Construction validates indexing and label uniqueness only. Geometric
/// properties (no repeated lines, degrees) are left to the analyses so
/// that broken structures can be represented and diagnosed.
#[derive(Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    point_labels: Vec<PointLabel>,
    line_labels: Vec<LineLabel>,
    lines: Vec<Vec<usize>>,
    point_lines: Vec<Vec<usize>>,
    point_index: HashMap<PointLabel, usize>,
    line_index: HashMap<LineLabel, usize>,
}

impl fmt::Debug for IncidenceStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IncidenceStructure({} points, {} lines)", self.num_points(), self.num_lines())
    }
}

impl IncidenceStructure {
    pub fn new(point_labels: Vec<PointLabel>, line_labels: Vec<LineLabel>, lines: Vec<Vec<usize>>) -> Result<Self> {
        if line_labels.len() != lines.len() {
            return Err(CosetGeomError::Malformed(format!(
                "{} line labels for {} lines",
                line_labels.len(),
                lines.len()
            )));
        }
        let np = point_labels.len();
        let mut point_index = HashMap::with_capacity(np);
        for (i, l) in point_labels.iter().enumerate() {
            if point_index.insert(l.clone(), i).is_some() {
                return Err(CosetGeomError::Malformed(format!("duplicate point label {l}")));
            }
        }
        let mut line_index = HashMap::with_capacity(lines.len());
        for (j, l) in line_labels.iter().enumerate() {
            if line_index.insert(l.clone(), j).is_some() {
                return Err(CosetGeomError::Malformed(format!("duplicate line label {l}")));
            }
        }
        let mut point_lines = vec![Vec::new(); np];
        let mut sorted = Vec::with_capacity(lines.len());
        for (j, mut pts) in lines.into_iter().enumerate() {
            pts.sort_unstable();
            if pts.windows(2).any(|w| w[0] == w[1]) {
                return Err(CosetGeomError::Malformed(format!("line {j} repeats a point")));
            }
            if let Some(&bad) = pts.iter().find(|&&p| p >= np) {
                return Err(CosetGeomError::Malformed(format!("line {j} names point {bad}")));
            }
            for &p in &pts {
                point_lines[p].push(j);
            }
            sorted.push(pts);
        }
        Ok(Self {
            point_labels,
            line_labels,
            lines: sorted,
            point_lines,
            point_index,
            line_index,
        })
    }

    /// Points named `0..n_points`, lines named `0..n_lines` by index.
    pub fn unlabeled(n_points: usize, lines: Vec<Vec<usize>>) -> Result<Self> {
        let pl = (0..n_points).map(|i| PointLabel::Named(format!("p{i}"))).collect();
        let ll = (0..lines.len()).map(|j| LineLabel::Named(format!("l{j}"))).collect();
        Self::new(pl, ll, lines)
    }

    pub fn num_points(&self) -> usize {
        self.point_labels.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn line(&self, j: usize) -> &[usize] {
        &self.lines[j]
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.point_lines[p]
    }

    pub fn incident(&self, p: usize, j: usize) -> bool {
        self.lines[j].binary_search(&p).is_ok()
    }

    pub fn point_label(&self, p: usize) -> &PointLabel {
        &self.point_labels[p]
    }

    pub fn line_label(&self, j: usize) -> &LineLabel {
        &self.line_labels[j]
    }

    pub fn point_labels(&self) -> &[PointLabel] {
        &self.point_labels
    }

    pub fn line_labels(&self) -> &[LineLabel] {
        &self.line_labels
    }

    pub fn point_index(&self, label: &PointLabel) -> Option<usize> {
        self.point_index.get(label).copied()
    }

    pub fn line_index(&self, label: &LineLabel) -> Option<usize> {
        self.line_index.get(label).copied()
    }

    /// Points become lines and lines become points; labels are carried
    /// over as names.
    pub fn dual(&self) -> Self {
        let pl = self.line_labels.iter().map(|l| PointLabel::Named(l.token())).collect();
        let ll = self.point_labels.iter().map(|p| LineLabel::Named(p.token())).collect();
        Self::new(pl, ll, self.point_lines.clone()).expect("dual of a valid structure")
    }

    /// Copy with the flag `(p, j)` removed, if present.
    pub fn without_incidence(&self, p: usize, j: usize) -> Self {
        let mut lines = self.lines.clone();
        lines[j].retain(|&x| x != p);
        Self::new(self.point_labels.clone(), self.line_labels.clone(), lines).expect("still valid")
    }

    /// Copy with the flag `(p, j)` added.
    pub fn with_incidence(&self, p: usize, j: usize) -> Self {
        let mut lines = self.lines.clone();
        if !lines[j].contains(&p) {
            lines[j].push(p);
        }
        Self::new(self.point_labels.clone(), self.line_labels.clone(), lines).expect("still valid")
    }

    /// Copy with one more line.
    pub fn with_line(&self, label: LineLabel, points: Vec<usize>) -> Result<Self> {
        let mut labels = self.line_labels.clone();
        labels.push(label);
        let mut lines = self.lines.clone();
        lines.push(points);
        Self::new(self.point_labels.clone(), labels, lines)
    }

    /// Map from a line's sorted point set to its index. Repeated point
    /// sets keep the first index.
    pub fn line_lookup(&self) -> HashMap<&[usize], usize> {
        let mut map = HashMap::with_capacity(self.lines.len());
        for (j, l) in self.lines.iter().enumerate() {
            map.entry(l.as_slice()).or_insert(j);
        }
        map
    }
}
