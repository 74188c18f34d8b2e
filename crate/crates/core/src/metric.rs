//! Finite pointed metric spaces with exact distances.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default cap on the number of violations a report lists.
pub const DEFAULT_VIOLATION_LIMIT: usize = 100;

/// Unvalidated space data, as read from a document.
#[derive(Clone, Debug, PartialEq)]
pub struct RawSpace {
    pub labels: Vec<String>,
    pub base: String,
    pub dist: Vec<Vec<Rational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    Asymmetry,
    ZeroOffDiagonal,
    Negative,
    NonzeroDiagonal,
    Triangle,
    DuplicateLabel,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::Asymmetry => "asymmetry",
            ViolationKind::ZeroOffDiagonal => "zero-offdiag",
            ViolationKind::Negative => "negative",
            ViolationKind::NonzeroDiagonal => "nonzero-diagonal",
            ViolationKind::Triangle => "triangle",
            ViolationKind::DuplicateLabel => "dup-label",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    /// Point indices; a triangle violation `(i, j, k)` means
    /// `d(i,k) > d(i,j) + d(j,k)`.
    pub indices: Vec<usize>,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub ok: bool,
    /// Sorted lexicographically by index tuple, capped at the limit.
    pub violations: Vec<Violation>,
    /// True when more violations exist than were listed.
    pub truncated: bool,
    /// Minimal positive off-diagonal distance.
    pub theta: Option<Rational>,
    /// Maximal distance.
    pub diameter: Option<Rational>,
}

/// Check every metric-space invariant of `raw`.
///
/// Malformed shapes (non-square matrix, unknown base label) are errors;
/// everything else is reported as a violation.
pub fn validate_space(raw: &RawSpace, limit: usize) -> Result<ValidationReport> {
    let n = raw.labels.len();
    if raw.dist.len() != n {
        return Err(Error::Parse(format!(
            "distance matrix has {} rows for {} labels",
            raw.dist.len(),
            n
        )));
    }
    if let Some((i, row)) = raw.dist.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse(format!(
            "distance matrix row {i} has {} entries, expected {n}",
            row.len()
        )));
    }
    if !raw.labels.contains(&raw.base) {
        return Err(Error::Parse(format!("unknown base label {:?}", raw.base)));
    }

    let d = &raw.dist;
    let mut violations = Vec::new();

    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (j, label) in raw.labels.iter().enumerate() {
        if let Some(&i) = seen.get(label.as_str()) {
            violations.push(Violation {
                indices: vec![i, j],
                kind: ViolationKind::DuplicateLabel,
            });
        } else {
            seen.insert(label, j);
        }
    }

    for (i, row) in d.iter().enumerate() {
        if !row[i].is_zero() {
            violations.push(Violation {
                indices: vec![i, i],
                kind: ViolationKind::NonzeroDiagonal,
            });
        }
    }

    for i in 0..n {
        for j in (i + 1)..n {
            if d[i][j] != d[j][i] {
                violations.push(Violation {
                    indices: vec![i, j],
                    kind: ViolationKind::Asymmetry,
                });
            }
            if d[i][j].is_negative() || d[j][i].is_negative() {
                violations.push(Violation {
                    indices: vec![i, j],
                    kind: ViolationKind::Negative,
                });
            } else if d[i][j].is_zero() || d[j][i].is_zero() {
                violations.push(Violation {
                    indices: vec![i, j],
                    kind: ViolationKind::ZeroOffDiagonal,
                });
            }
        }
    }

    for i in 0..n {
        for k in (i + 1)..n {
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                if d[i][k] > &d[i][j] + &d[j][k] {
                    violations.push(Violation {
                        indices: vec![i, j, k],
                        kind: ViolationKind::Triangle,
                    });
                }
            }
        }
    }

    violations.sort();
    let ok = violations.is_empty();
    let truncated = violations.len() > limit;
    violations.truncate(limit);

    let mut theta: Option<&Rational> = None;
    let mut diameter: Option<&Rational> = None;
    for (i, row) in d.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j && v.is_positive() && theta.is_none_or(|t| v < t) {
                theta = Some(v);
            }
            if diameter.is_none_or(|m| v > m) {
                diameter = Some(v);
            }
        }
    }
    // With fewer than two points there is no pairwise distance to speak of.
    let (theta, diameter) = if n >= 2 {
        (theta.cloned(), diameter.cloned())
    } else {
        (None, None)
    };

    Ok(ValidationReport {
        ok,
        violations,
        truncated,
        theta,
        diameter,
    })
}

/// A validated finite pointed metric space.
///
/// Distances are exact, symmetric, strictly positive off the diagonal and
/// satisfy the triangle inequality. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    base: usize,
    dist: Vec<Vec<Rational>>,
    theta: Rational,
    diameter: Rational,
}

impl FiniteMetricSpace {
    /// Validate and build. Fails with the first violation if any.
    pub fn new(raw: RawSpace) -> Result<Self> {
        let report = validate_space(&raw, DEFAULT_VIOLATION_LIMIT)?;
        if !report.ok {
            let v = &report.violations[0];
            return Err(Error::invalid(format!(
                "not a metric space: {} violation at {:?} ({} violation(s){})",
                v.kind,
                v.indices,
                report.violations.len(),
                if report.truncated { ", truncated" } else { "" }
            )));
        }
        if raw.labels.len() < 2 {
            return Err(Error::invalid("a space needs at least two points"));
        }
        let base = raw
            .labels
            .iter()
            .position(|l| *l == raw.base)
            .expect("base label checked by validate_space");
        Ok(FiniteMetricSpace {
            labels: raw.labels,
            base,
            dist: raw.dist,
            theta: report.theta.expect("two or more points"),
            diameter: report.diameter.expect("two or more points"),
        })
    }

    pub fn to_raw(&self) -> RawSpace {
        RawSpace {
            labels: self.labels.clone(),
            base: self.labels[self.base].clone(),
            dist: self.dist.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn dist(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    /// Minimal distance between distinct points.
    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn diameter(&self) -> &Rational {
        &self.diameter
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "point index {i} out of range for a space of {} points",
                self.len()
            )))
        }
    }

    /// `d(s,z) + d(t,z) - d(s,t)`, zero exactly on the segment `[s,t]`.
    pub fn excess(&self, s: usize, t: usize, z: usize) -> Rational {
        self.d(s, z) + self.d(t, z) - self.d(s, t)
    }

    /// The metric segment `[s,t] = {z : d(s,z) + d(t,z) = d(s,t)}`.
    pub fn segment(&self, s: usize, t: usize) -> Result<BTreeSet<usize>> {
        self.check_pair(s, t)?;
        Ok((0..self.len())
            .filter(|&z| self.excess(s, t, z).is_zero())
            .collect())
    }

    /// `[s,t]_eps = {z : d(s,z) + d(t,z) < d(s,t) + eps}` (strict).
    pub fn segment_eps(&self, s: usize, t: usize, eps: &Rational) -> Result<BTreeSet<usize>> {
        self.check_pair(s, t)?;
        if !eps.is_positive() {
            return Err(Error::invalid("eps must be positive"));
        }
        Ok((0..self.len())
            .filter(|&z| &self.excess(s, t, z) < eps)
            .collect())
    }

    fn check_pair(&self, s: usize, t: usize) -> Result<()> {
        self.check_index(s)?;
        self.check_index(t)?;
        if s == t {
            return Err(Error::invalid("segment endpoints must differ"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn raw(labels: &[&str], base: &str, dist: &[&[i64]]) -> RawSpace {
        RawSpace {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            base: base.to_string(),
            dist: dist
                .iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        }
    }

    fn line3() -> RawSpace {
        raw(&["0", "1", "2"], "0", &[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]])
    }

    #[test]
    fn line_metric_is_valid() {
        let report = validate_space(&line3(), DEFAULT_VIOLATION_LIMIT).unwrap();
        assert!(report.ok);
        assert_eq!(report.theta, Some(int(1)));
        assert_eq!(report.diameter, Some(int(2)));
    }

    #[test]
    fn triangle_violation_is_reported() {
        let r = raw(&["0", "1", "2"], "0", &[&[0, 1, 4], &[1, 0, 1], &[4, 1, 0]]);
        let report = validate_space(&r, DEFAULT_VIOLATION_LIMIT).unwrap();
        assert!(!report.ok);
        assert_eq!(
            report.violations,
            vec![Violation {
                indices: vec![0, 1, 2],
                kind: ViolationKind::Triangle
            }]
        );
    }

    #[test]
    fn star_space_is_valid() {
        let labels: Vec<String> = (0..=5).map(|i| i.to_string()).collect();
        let dist = (0..=5)
            .map(|i| {
                (0..=5)
                    .map(|j| match (i, j) {
                        _ if i == j => int(0),
                        (0, _) | (_, 0) => int(1),
                        _ => int(2),
                    })
                    .collect()
            })
            .collect();
        let r = RawSpace {
            labels,
            base: "0".into(),
            dist,
        };
        let report = validate_space(&r, DEFAULT_VIOLATION_LIMIT).unwrap();
        assert!(report.ok);
        assert_eq!(report.theta, Some(int(1)));
        assert_eq!(report.diameter, Some(int(2)));
    }

    #[test]
    fn every_defect_kind_is_caught() {
        let r = RawSpace {
            labels: vec!["a".into(), "a".into(), "c".into()],
            base: "a".into(),
            dist: vec![
                vec![int(1), int(0), int(2)],
                vec![int(0), int(0), int(-1)],
                vec![int(3), int(-1), int(0)],
            ],
        };
        let report = validate_space(&r, DEFAULT_VIOLATION_LIMIT).unwrap();
        let kinds: BTreeSet<_> = report.violations.iter().map(|v| v.kind).collect();
        for k in [
            ViolationKind::DuplicateLabel,
            ViolationKind::NonzeroDiagonal,
            ViolationKind::Asymmetry,
            ViolationKind::ZeroOffDiagonal,
            ViolationKind::Negative,
        ] {
            assert!(kinds.contains(&k), "missing {k}");
        }
        let sorted = {
            let mut v = report.violations.clone();
            v.sort();
            v
        };
        assert_eq!(sorted, report.violations);
    }

    #[test]
    fn violation_cap_truncates() {
        let r = raw(&["0", "1", "2"], "0", &[&[0, 1, 4], &[1, 0, 1], &[4, 1, 0]]);
        let report = validate_space(&r, 0).unwrap();
        assert!(!report.ok);
        assert!(report.truncated);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn malformed_input_is_a_parse_error() {
        let mut r = line3();
        r.dist.pop();
        assert!(matches!(validate_space(&r, 10), Err(Error::Parse(_))));
        let mut r = line3();
        r.base = "nope".into();
        assert!(matches!(validate_space(&r, 10), Err(Error::Parse(_))));
    }

    #[test]
    fn pseudometrics_are_rejected() {
        let r = raw(&["0", "1"], "0", &[&[0, 0], &[0, 0]]);
        assert!(FiniteMetricSpace::new(r).is_err());
    }

    #[test]
    fn segments_on_the_line() {
        let space = FiniteMetricSpace::new(line3()).unwrap();
        assert_eq!(space.segment(0, 2).unwrap(), BTreeSet::from([0, 1, 2]));
        assert_eq!(space.segment(0, 1).unwrap(), BTreeSet::from([0, 1]));
        assert_eq!(
            space.segment_eps(0, 1, &ratio(1, 2)).unwrap(),
            BTreeSet::from([0, 1])
        );
        assert_eq!(
            space.segment_eps(0, 1, &int(5)).unwrap(),
            BTreeSet::from([0, 1, 2])
        );
        // excess of point 2 over [0,1] is exactly 2, strictness matters
        assert!(!space.segment_eps(0, 1, &int(2)).unwrap().contains(&2));
        assert!(space
            .segment_eps(0, 1, &ratio(201, 100))
            .unwrap()
            .contains(&2));
        assert!(space.segment(1, 1).is_err());
        assert!(space.segment_eps(0, 1, &int(0)).is_err());
    }
}
