//! Properties presented as polyhedral level sets ("cells"), one per report.
//!
//! A property assigns each distribution the set of reports whose cell
//! contains it. Cell families constructed from a loss are correct by
//! construction; user-supplied families are validated: labels unique,
//! every cell a nonempty subset of the domain, and the domain covered on a
//! rational witness grid.

use crate::error::{Error, Result};
use crate::linalg::RationalVector;
use crate::polyhedron::Polyhedron;
use crate::rational::{ratio, Rational};

/// Where a cell family came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellProvenance {
    /// Built by `elicited_property`; correct by construction.
    FromLoss,
    /// Supplied by the user; validated at construction.
    UserSupplied,
}

/// A property as a family of polyhedral cells over the simplex (or a
/// restricted domain inside it).
#[derive(Debug, Clone)]
pub struct PropertyCells {
    pub outcomes: Vec<String>,
    /// Report labels, in declaration order; parallel to `cells`.
    pub reports: Vec<String>,
    pub cells: Vec<Polyhedron>,
    /// Optional sub-domain of the simplex; `None` means the whole simplex.
    pub restriction: Option<Polyhedron>,
    pub provenance: CellProvenance,
}

impl PropertyCells {
    /// Trusted assembly used by loss-derived constructions.
    pub(crate) fn assemble(
        outcomes: Vec<String>,
        reports: Vec<String>,
        cells: Vec<Polyhedron>,
        restriction: Option<Polyhedron>,
        provenance: CellProvenance,
    ) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::Precondition(
                "a property needs at least one nonempty cell".into(),
            ));
        }
        Ok(PropertyCells {
            outcomes,
            reports,
            cells,
            restriction,
            provenance,
        })
    }

    /// Validated construction from user-supplied cells.
    pub fn new_user(
        outcomes: Vec<String>,
        named_cells: Vec<(String, Polyhedron)>,
        restriction: Option<Polyhedron>,
    ) -> Result<Self> {
        let n = outcomes.len();
        if n < 2 {
            return Err(Error::Precondition(
                "a property needs at least two outcomes".into(),
            ));
        }
        if named_cells.is_empty() {
            return Err(Error::Precondition("no cells supplied".into()));
        }
        let simplex = Polyhedron::standard_simplex(n);
        let domain = match &restriction {
            Some(region) => {
                if region.dim != n {
                    return Err(Error::Precondition(format!(
                        "restriction lives in dimension {} but there are {} outcomes",
                        region.dim, n
                    )));
                }
                if simplex.contains_polyhedron(region).is_err() {
                    return Err(Error::Precondition(
                        "restriction must be a subset of the simplex".into(),
                    ));
                }
                if region.is_empty() {
                    return Err(Error::Precondition("restriction is empty".into()));
                }
                region.clone()
            }
            None => simplex.clone(),
        };
        let mut reports = Vec::new();
        let mut cells = Vec::new();
        for (label, cell) in named_cells {
            if reports.contains(&label) {
                return Err(Error::Precondition(format!(
                    "duplicate report label {label:?}"
                )));
            }
            if cell.dim != n {
                return Err(Error::Precondition(format!(
                    "cell {label:?} lives in dimension {} but there are {} outcomes",
                    cell.dim, n
                )));
            }
            if cell.is_empty() {
                return Err(Error::Precondition(format!("cell {label:?} is empty")));
            }
            if simplex.contains_polyhedron(&cell).is_err() {
                return Err(Error::Precondition(format!(
                    "cell {label:?} is not a subset of the simplex"
                )));
            }
            reports.push(label);
            cells.push(cell);
        }
        let family = PropertyCells {
            outcomes,
            reports,
            cells,
            restriction,
            provenance: CellProvenance::UserSupplied,
        };
        // Coverage witness grid: every grid point of the domain must be
        // assigned at least one report.
        for point in coverage_grid(n) {
            if domain.contains_point(&point) && family.reports_at(&point).is_empty() {
                return Err(Error::Precondition(format!(
                    "cells do not cover the domain: no report at {point:?}"
                )));
            }
        }
        Ok(family)
    }

    /// Number of outcomes.
    pub fn n(&self) -> usize {
        self.outcomes.len()
    }

    pub fn report_index(&self, label: &str) -> Option<usize> {
        self.reports.iter().position(|r| r == label)
    }

    pub fn cell(&self, label: &str) -> Option<&Polyhedron> {
        self.report_index(label).map(|i| &self.cells[i])
    }

    /// Indices of every report whose cell contains `p`.
    pub fn reports_at(&self, p: &[Rational]) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].contains_point(p))
            .collect()
    }

    /// The domain the property is defined over.
    pub fn domain(&self) -> Polyhedron {
        self.restriction
            .clone()
            .unwrap_or_else(|| Polyhedron::standard_simplex(self.n()))
    }
}

/// Rational witness grid over the simplex used by the coverage check. The
/// denominator shrinks with the outcome count to keep the grid small.
fn coverage_grid(n: usize) -> Vec<RationalVector> {
    let den: i64 = match n {
        0..=3 => 12,
        4 => 6,
        _ => 4,
    };
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn rec(
        n: usize,
        left: i64,
        den: i64,
        prefix: &mut Vec<Rational>,
        out: &mut Vec<RationalVector>,
    ) {
        if n == 1 {
            prefix.push(ratio(left, den));
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(ratio(k, den));
            rec(n - 1, left - k, den, prefix, out);
            prefix.pop();
        }
    }
    rec(n, den, den, &mut prefix, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedron::Constraint;
    use crate::rational::rat;

    fn half(first: bool) -> Polyhedron {
        let mut cell = Polyhedron::standard_simplex(2);
        let sign = if first { rat(-1) } else { rat(1) };
        cell.add_le(Constraint::new(vec![sign.clone(), -sign], rat(0)));
        cell
    }

    #[test]
    fn user_cells_validate_and_cover() {
        let cells = PropertyCells::new_user(
            vec!["a".into(), "b".into()],
            vec![("low".into(), half(false)), ("high".into(), half(true))],
            None,
        )
        .unwrap();
        assert_eq!(cells.provenance, CellProvenance::UserSupplied);
        assert_eq!(cells.reports_at(&[ratio(1, 2), ratio(1, 2)]), vec![0, 1]);
    }

    #[test]
    fn coverage_gap_is_rejected() {
        let err = PropertyCells::new_user(
            vec!["a".into(), "b".into()],
            vec![("high".into(), half(true))],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn empty_cell_is_rejected() {
        let mut empty = Polyhedron::standard_simplex(2);
        empty.add_le(Constraint::new(vec![rat(1), rat(1)], rat(0)));
        empty.add_le(Constraint::new(vec![rat(-1), rat(-1)], rat(-1)));
        // The two constraints above contradict the simplex equality.
        let err = PropertyCells::new_user(
            vec!["a".into(), "b".into()],
            vec![("dead".into(), empty), ("all".into(), Polyhedron::standard_simplex(2))],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let err = PropertyCells::new_user(
            vec!["a".into(), "b".into()],
            vec![
                ("same".into(), Polyhedron::standard_simplex(2)),
                ("same".into(), Polyhedron::standard_simplex(2)),
            ],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
