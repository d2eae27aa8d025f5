//! Recovering a loss that elicits a given cell family, or certifying that
//! none exists.
//!
//! Matrix entries are LP variables (the first report's row is pinned to
//! zero, which is harmless: shifting a loss by a per-outcome constant
//! never changes any cell). Constraints come from cell vertices and are
//! all necessary for exact reproduction, so an infeasible system is a
//! sound certificate of non-elicitability. A feasible candidate is only
//! accepted after its elicited cells round-trip to the input exactly.

use crate::cells::PropertyCells;
use crate::error::{Error, Result};
use crate::linalg::RationalVector;
use crate::loss::{elicited_property, DiscreteLoss};
use crate::lp::{self, LpProblem};
use crate::rational::Rational;
use num::{One, Zero};

/// Answer of [`recover_loss`].
#[derive(Debug, Clone)]
pub enum RecoverOutcome {
    /// A loss whose elicited cells equal the input cells exactly.
    Found(DiscreteLoss),
    /// No loss can reproduce the cells; the named pair of reports is the
    /// first whose separation requirements turned the system infeasible.
    NotElicitable { report_a: String, report_b: String },
}

/// Maximum rounds of round-trip repair before giving up.
const MAX_CUT_ROUNDS: usize = 16;

struct System {
    reports: usize,
    outcomes: usize,
    lp: LpProblem,
}

impl System {
    fn new(reports: usize, outcomes: usize) -> Self {
        System {
            reports,
            outcomes,
            lp: LpProblem::new(reports.saturating_sub(1) * outcomes),
        }
    }

    /// Coefficient vector of `(row_a - row_b) . x` in the entry variables.
    fn diff_row(&self, a: usize, b: usize, x: &[Rational]) -> RationalVector {
        let mut coeffs = vec![Rational::zero(); self.lp.num_vars];
        debug_assert_eq!(x.len(), self.outcomes);
        debug_assert!(a != b && a < self.reports && b < self.reports);
        if a > 0 {
            for (y, xv) in x.iter().enumerate() {
                coeffs[(a - 1) * self.outcomes + y] = xv.clone();
            }
        }
        if b > 0 {
            for (y, xv) in x.iter().enumerate() {
                coeffs[(b - 1) * self.outcomes + y] = &coeffs[(b - 1) * self.outcomes + y] - xv;
            }
        }
        coeffs
    }

    /// `(row_a - row_b) . x == 0`: both reports optimal at `x`.
    fn add_tie(&mut self, a: usize, b: usize, x: &[Rational]) {
        let coeffs = self.diff_row(a, b, x);
        self.lp.add_eq(coeffs, Rational::zero());
    }

    /// `(row_a - row_b) . x <= -1`: report `a` strictly beats `b` at `x`.
    fn add_strict(&mut self, a: usize, b: usize, x: &[Rational]) {
        let coeffs = self.diff_row(a, b, x);
        self.lp.add_le(coeffs, -Rational::one());
    }

    fn solve(&self) -> Option<RationalVector> {
        lp::feasible_point(&self.lp)
    }

    fn loss_from(&self, cells: &PropertyCells, point: &[Rational]) -> Result<DiscreteLoss> {
        let mut matrix = vec![vec![Rational::zero(); self.outcomes]];
        for r in 1..self.reports {
            matrix.push(point[(r - 1) * self.outcomes..r * self.outcomes].to_vec());
        }
        DiscreteLoss::new(cells.reports.clone(), cells.outcomes.clone(), matrix)
    }
}

/// Search for a loss eliciting the given cells.
pub fn recover_loss(cells: &PropertyCells) -> Result<RecoverOutcome> {
    let reports = cells.reports.len();
    let mut system = System::new(reports, cells.n());
    let mut cell_vertices: Vec<Vec<RationalVector>> = Vec::with_capacity(reports);
    for cell in &cells.cells {
        let verts = cell
            .vertices()
            .map_err(|_| Error::Invariant("cell inside the simplex reported unbounded".into()))?;
        cell_vertices.push(verts);
    }
    // Add the constraint block of each unordered report pair in declaration
    // order; the first pair that makes the system infeasible is the
    // witness of non-elicitability.
    for a in 0..reports {
        for b in (a + 1)..reports {
            for (one, two) in [(a, b), (b, a)] {
                for x in &cell_vertices[one] {
                    if cells.cells[two].contains_point(x) {
                        // A vertex of both cells shows up in both sweeps;
                        // add its tie once.
                        if one < two || !cell_vertices[two].contains(x) {
                            system.add_tie(one, two, x);
                        }
                    } else {
                        system.add_strict(one, two, x);
                    }
                }
            }
            if system.solve().is_none() {
                return Ok(RecoverOutcome::NotElicitable {
                    report_a: cells.reports[a].clone(),
                    report_b: cells.reports[b].clone(),
                });
            }
        }
    }
    // Round-trip repair loop: accept only an exact reproduction, adding
    // necessary cuts from each mismatch witness. Every cut is necessary
    // for exact reproduction, so infeasibility here is still a sound
    // certificate; the reported pair is then the last clashing cut.
    let mut last_cut: Option<(usize, usize)> = None;
    for _ in 0..MAX_CUT_ROUNDS {
        let point = match system.solve() {
            Some(point) => point,
            None => {
                if let RecoverOutcome::NotElicitable { report_a, report_b } =
                    incremental_blame(cells, &cell_vertices)
                {
                    return Ok(RecoverOutcome::NotElicitable { report_a, report_b });
                }
                let (a, b) =
                    last_cut.ok_or_else(|| Error::Invariant("infeasible without cuts".into()))?;
                return Ok(RecoverOutcome::NotElicitable {
                    report_a: cells.reports[a].clone(),
                    report_b: cells.reports[b].clone(),
                });
            }
        };
        let candidate = system.loss_from(cells, &point)?;
        let elicited = elicited_property(&candidate, cells.restriction.as_ref())?;
        match find_mismatch(cells, &elicited)? {
            None => return Ok(RecoverOutcome::Found(candidate)),
            Some(Mismatch::RecoveredTooBig { report, point }) => {
                let winner = cells
                    .reports_at(&point)
                    .first()
                    .copied()
                    .ok_or_else(|| {
                        Error::Precondition(format!(
                            "cells do not cover the domain: no report at {point:?}"
                        ))
                    })?;
                system.add_strict(winner, report, &point);
                last_cut = Some((winner.min(report), winner.max(report)));
            }
            Some(Mismatch::RecoveredTooSmall { report, point }) => {
                for other in 0..reports {
                    if other != report {
                        let coeffs = system.diff_row(report, other, &point);
                        system.lp.add_le(coeffs, Rational::zero());
                        if last_cut.is_none() {
                            last_cut = Some((report.min(other), report.max(other)));
                        }
                    }
                }
            }
        }
    }
    Err(Error::Invariant(
        "loss recovery did not converge within the cut budget".into(),
    ))
}

enum Mismatch {
    /// The recovered cell for `report` contains `point`, the input does not.
    RecoveredTooBig { report: usize, point: RationalVector },
    /// The input cell for `report` contains `point`, the recovery does not.
    RecoveredTooSmall { report: usize, point: RationalVector },
}

fn find_mismatch(input: &PropertyCells, recovered: &PropertyCells) -> Result<Option<Mismatch>> {
    for (r, label) in input.reports.iter().enumerate() {
        let Some(found) = recovered.cell(label) else {
            // The candidate never makes this report optimal anywhere; any
            // point of the input cell witnesses the gap.
            let point = input.cells[r]
                .feasible_point()
                .ok_or_else(|| Error::Invariant("validated cell is empty".into()))?;
            return Ok(Some(Mismatch::RecoveredTooSmall { report: r, point }));
        };
        if let Err(v) = input.cells[r].contains_polyhedron(found) {
            return Ok(Some(Mismatch::RecoveredTooBig {
                report: r,
                point: v.point,
            }));
        }
        if let Err(v) = found.contains_polyhedron(&input.cells[r]) {
            return Ok(Some(Mismatch::RecoveredTooSmall {
                report: r,
                point: v.point,
            }));
        }
    }
    Ok(None)
}

/// Re-run the pairwise blocks incrementally to name a responsible pair;
/// returns `Found` of a throwaway candidate when the blocks alone stay
/// feasible (the caller then falls back to its recorded cut pair).
fn incremental_blame(cells: &PropertyCells, cell_vertices: &[Vec<RationalVector>]) -> RecoverOutcome {
    let reports = cells.reports.len();
    let mut system = System::new(reports, cells.n());
    for a in 0..reports {
        for b in (a + 1)..reports {
            for (one, two) in [(a, b), (b, a)] {
                for x in &cell_vertices[one] {
                    if cells.cells[two].contains_point(x) {
                        if one < two || !cell_vertices[two].contains(x) {
                            system.add_tie(one, two, x);
                        }
                    } else {
                        system.add_strict(one, two, x);
                    }
                }
            }
            if system.solve().is_none() {
                return RecoverOutcome::NotElicitable {
                    report_a: cells.reports[a].clone(),
                    report_b: cells.reports[b].clone(),
                };
            }
        }
    }
    RecoverOutcome::Found(DiscreteLoss {
        reports: cells.reports.clone(),
        outcomes: cells.outcomes.clone(),
        matrix: vec![vec![Rational::zero(); cells.n()]; reports],
    })
}

/// Convenience check used in tests and reports: do two cell families agree
/// exactly, label by label?
pub fn cells_match(a: &PropertyCells, b: &PropertyCells) -> bool {
    if a.reports != b.reports {
        return false;
    }
    a.cells.iter().zip(b.cells.iter()).all(|(x, y)| {
        x.contains_polyhedron(y).is_ok() && y.contains_polyhedron(x).is_ok()
    })
}
