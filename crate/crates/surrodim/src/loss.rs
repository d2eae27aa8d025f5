//! Discrete losses over finite outcome spaces and the properties they
//! elicit.
//!
//! A loss is a rational matrix indexed by (report, outcome). Expected loss,
//! regret, and Bayes risk are all finite minima, computed exactly; the
//! elicited property is returned as one polyhedral cell per report, each
//! cut out of the simplex by row-difference inequalities.

use crate::cells::{CellProvenance, PropertyCells};
use crate::distribution::is_distribution;
use crate::error::{Error, Result};
use crate::linalg::{dot, sub, RationalVector};
use crate::lp::{self, LpOutcome, LpProblem};
use crate::polyhedron::{Constraint, Polyhedron};
use crate::rational::Rational;
use num::{One, Zero};

/// A loss matrix: `matrix[r][y]` is the cost of report `r` on outcome `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteLoss {
    pub reports: Vec<String>,
    pub outcomes: Vec<String>,
    pub matrix: Vec<RationalVector>,
}

impl DiscreteLoss {
    pub fn new(
        reports: Vec<String>,
        outcomes: Vec<String>,
        matrix: Vec<RationalVector>,
    ) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::Precondition("a loss needs at least one report".into()));
        }
        if outcomes.len() < 2 {
            return Err(Error::Precondition(
                "a loss needs at least two outcomes".into(),
            ));
        }
        if matrix.len() != reports.len() {
            return Err(Error::Precondition(format!(
                "loss matrix has {} rows but {} reports",
                matrix.len(),
                reports.len()
            )));
        }
        for (r, row) in matrix.iter().enumerate() {
            if row.len() != outcomes.len() {
                return Err(Error::Precondition(format!(
                    "loss matrix row {} has {} entries but {} outcomes",
                    r,
                    row.len(),
                    outcomes.len()
                )));
            }
        }
        for labels in [&reports, &outcomes] {
            for (i, a) in labels.iter().enumerate() {
                if labels[..i].contains(a) {
                    return Err(Error::Precondition(format!("duplicate label {a:?}")));
                }
            }
        }
        Ok(DiscreteLoss {
            reports,
            outcomes,
            matrix,
        })
    }

    /// Number of outcomes.
    pub fn n(&self) -> usize {
        self.outcomes.len()
    }

    pub fn report_index(&self, label: &str) -> Option<usize> {
        self.reports.iter().position(|r| r == label)
    }

    fn check_report(&self, report: usize) -> Result<()> {
        if report >= self.reports.len() {
            return Err(Error::Precondition(format!(
                "report index {report} out of range (only {} reports)",
                self.reports.len()
            )));
        }
        Ok(())
    }

    fn check_distribution(&self, p: &[Rational]) -> Result<()> {
        if p.len() != self.n() || !is_distribution(p) {
            return Err(Error::Precondition(format!(
                "expected a distribution over {} outcomes",
                self.n()
            )));
        }
        Ok(())
    }
}

/// Expected loss of a report under a distribution.
pub fn expected_loss(loss: &DiscreteLoss, report: usize, p: &[Rational]) -> Result<Rational> {
    loss.check_report(report)?;
    loss.check_distribution(p)?;
    Ok(dot(&loss.matrix[report], p))
}

/// Minimal achievable expected loss under a distribution.
pub fn bayes_risk(loss: &DiscreteLoss, p: &[Rational]) -> Result<Rational> {
    loss.check_distribution(p)?;
    Ok(loss
        .matrix
        .iter()
        .map(|row| dot(row, p))
        .min()
        .expect("at least one report"))
}

/// Excess expected loss of a report over the best available report.
pub fn regret(loss: &DiscreteLoss, report: usize, p: &[Rational]) -> Result<Rational> {
    Ok(expected_loss(loss, report, p)? - bayes_risk(loss, p)?)
}

/// Every report attaining the Bayes risk at `p`.
pub fn optimal_reports(loss: &DiscreteLoss, p: &[Rational]) -> Result<Vec<usize>> {
    let best = bayes_risk(loss, p)?;
    Ok((0..loss.reports.len())
        .filter(|&r| dot(&loss.matrix[r], p) == best)
        .collect())
}

/// Row difference that weakly separates the level sets of two distinct
/// reports: the cell of `other` lies in `{q : v . q >= 0}` and the cell of
/// `report` in `{q : v . q <= 0}`.
pub fn separating_hyperplane(
    loss: &DiscreteLoss,
    report: usize,
    other: usize,
) -> Result<RationalVector> {
    loss.check_report(report)?;
    loss.check_report(other)?;
    if report == other {
        return Err(Error::Precondition(
            "separating functional needs two distinct reports".into(),
        ));
    }
    Ok(sub(&loss.matrix[report], &loss.matrix[other]))
}

/// The property elicited by a loss: one cell per report, each the set of
/// distributions where that report attains the Bayes risk. Reports whose
/// cell is empty inside the domain are dropped.
pub fn elicited_property(
    loss: &DiscreteLoss,
    restriction: Option<&Polyhedron>,
) -> Result<PropertyCells> {
    let n = loss.n();
    if let Some(region) = restriction {
        if region.dim != n {
            return Err(Error::Precondition(format!(
                "restriction lives in dimension {} but the loss has {} outcomes",
                region.dim, n
            )));
        }
        let simplex = Polyhedron::standard_simplex(n);
        if simplex.contains_polyhedron(region).is_err() {
            return Err(Error::Precondition(
                "restriction must be a subset of the simplex".into(),
            ));
        }
        if region.is_empty() {
            return Err(Error::Precondition("restriction is empty".into()));
        }
    }
    let mut reports = Vec::new();
    let mut cells = Vec::new();
    for r in 0..loss.reports.len() {
        let mut cell = Polyhedron::standard_simplex(n);
        if let Some(region) = restriction {
            cell = cell.intersection(region);
        }
        for other in 0..loss.reports.len() {
            if other == r {
                continue;
            }
            let diff = sub(&loss.matrix[r], &loss.matrix[other]);
            cell.add_le(Constraint::new(diff, Rational::zero()));
        }
        if !cell.is_empty() {
            reports.push(loss.reports[r].clone());
            cells.push(cell);
        }
    }
    PropertyCells::assemble(
        loss.outcomes.clone(),
        reports,
        cells,
        restriction.cloned(),
        CellProvenance::FromLoss,
    )
}

/// Answer of [`bayes_risk_constant_on`].
#[derive(Debug, Clone)]
pub enum ConstancyOutcome {
    /// The Bayes risk takes a single value on the region.
    Constant { value: Rational },
    /// Two points of the region with different Bayes risks.
    Witness {
        p_low: RationalVector,
        p_high: RationalVector,
        low: Rational,
        high: Rational,
    },
}

/// Decide whether the Bayes risk is constant on a nonempty region of the
/// simplex. The maximum of the concave Bayes risk is a direct LP; the
/// minimum is attained at a vertex of the region.
pub fn bayes_risk_constant_on(loss: &DiscreteLoss, region: &Polyhedron) -> Result<ConstancyOutcome> {
    let n = loss.n();
    if region.dim != n {
        return Err(Error::Precondition(format!(
            "region lives in dimension {} but the loss has {} outcomes",
            region.dim, n
        )));
    }
    let simplex = Polyhedron::standard_simplex(n);
    if simplex.contains_polyhedron(region).is_err() {
        return Err(Error::Precondition(
            "region must be a subset of the simplex".into(),
        ));
    }
    // Maximize t subject to p in region and t <= row . p for every row.
    let mut lp = LpProblem::new(n + 1);
    for c in &region.inequalities {
        let mut normal = c.normal.clone();
        normal.push(Rational::zero());
        lp.add_le(normal, c.offset.clone());
    }
    for c in &region.equalities {
        let mut normal = c.normal.clone();
        normal.push(Rational::zero());
        lp.add_eq(normal, c.offset.clone());
    }
    for row in &loss.matrix {
        let mut normal: RationalVector = row.iter().map(|x| -x).collect();
        normal.push(Rational::one());
        lp.add_le(normal, Rational::zero());
    }
    let mut objective = vec![Rational::zero(); n + 1];
    objective[n] = Rational::one();
    let (high, p_high) = match lp::maximize(&lp, &objective) {
        LpOutcome::Optimal { value, mut point } => {
            point.truncate(n);
            (value, point)
        }
        LpOutcome::Infeasible => {
            return Err(Error::Precondition("region is empty".into()));
        }
        LpOutcome::Unbounded { .. } => {
            return Err(Error::Invariant(
                "bayes risk unbounded on a bounded region".into(),
            ));
        }
    };
    // Minimize over vertices; the Bayes risk is concave, so some vertex
    // attains the minimum.
    let verts = region
        .vertices()
        .map_err(|_| Error::Invariant("subset of the simplex reported unbounded".into()))?;
    let mut best: Option<(Rational, RationalVector)> = None;
    for v in verts {
        let value = bayes_risk(loss, &v)?;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, v));
        }
    }
    let (low, p_low) = best.ok_or_else(|| Error::Invariant("region has no vertices".into()))?;
    if low == high {
        Ok(ConstancyOutcome::Constant { value: low })
    } else {
        Ok(ConstancyOutcome::Witness {
            p_low,
            p_high,
            low,
            high,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn coin_loss() -> DiscreteLoss {
        DiscreteLoss::new(
            vec!["heads".into(), "tails".into()],
            vec!["heads".into(), "tails".into()],
            vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]],
        )
        .unwrap()
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        assert!(DiscreteLoss::new(vec![], vec!["a".into(), "b".into()], vec![]).is_err());
        assert!(DiscreteLoss::new(vec!["r".into()], vec!["a".into()], vec![vec![rat(0)]]).is_err());
        assert!(DiscreteLoss::new(
            vec!["r".into()],
            vec!["a".into(), "b".into()],
            vec![vec![rat(0)]],
        )
        .is_err());
        assert!(DiscreteLoss::new(
            vec!["r".into(), "r".into()],
            vec!["a".into(), "b".into()],
            vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]],
        )
        .is_err());
    }

    #[test]
    fn coin_cells_are_half_simplices() {
        let cells = elicited_property(&coin_loss(), None).unwrap();
        assert_eq!(cells.reports, vec!["heads", "tails"]);
        let mid = vec![ratio(1, 2), ratio(1, 2)];
        assert_eq!(cells.reports_at(&mid), vec![0, 1]);
        assert_eq!(cells.reports_at(&[ratio(3, 4), ratio(1, 4)]), vec![0]);
    }

    #[test]
    fn dominated_reports_are_dropped() {
        let loss = DiscreteLoss::new(
            vec!["good".into(), "bad".into()],
            vec!["a".into(), "b".into()],
            vec![vec![rat(0), rat(0)], vec![rat(1), rat(1)]],
        )
        .unwrap();
        let cells = elicited_property(&loss, None).unwrap();
        assert_eq!(cells.reports, vec!["good"]);
    }

    #[test]
    fn regret_vanishes_exactly_on_optimal_reports() {
        let p = vec![ratio(2, 5), ratio(3, 5)];
        assert_eq!(regret(&coin_loss(), 1, &p).unwrap(), rat(0));
        assert_eq!(regret(&coin_loss(), 0, &p).unwrap(), ratio(1, 5));
        assert_eq!(optimal_reports(&coin_loss(), &p).unwrap(), vec![1]);
    }

    #[test]
    fn constancy_on_a_vertical_segment_of_the_coin_simplex() {
        // Bayes risk of the coin loss is min(p, 1-p): non-constant on the
        // full simplex, constant on a single point.
        let simplex = Polyhedron::standard_simplex(2);
        match bayes_risk_constant_on(&coin_loss(), &simplex).unwrap() {
            ConstancyOutcome::Witness { low, high, .. } => {
                assert_eq!(low, rat(0));
                assert_eq!(high, ratio(1, 2));
            }
            other => panic!("expected witness, got {other:?}"),
        }
        let mut point = Polyhedron::standard_simplex(2);
        point.add_eq(Constraint::new(vec![rat(1), rat(0)], ratio(1, 4)));
        match bayes_risk_constant_on(&coin_loss(), &point).unwrap() {
            ConstancyOutcome::Constant { value } => assert_eq!(value, ratio(1, 4)),
            other => panic!("expected constant, got {other:?}"),
        }
    }
}
