//! Lower bounds on the prediction dimension needed to elicit a property.
//!
//! Three bounds are implemented. The flat bound reports
//! `(support size - 1) - k`, where `k` is the largest dimension of a flat
//! through the probe inside its cell; it applies when the property is
//! single-valued at the probe, or when the probe is interior and the cells
//! are certified elicitable. The feasible-subspace bound replaces `k` with
//! the dimension of the two-sided feasible directions, which is never
//! smaller. The Bayes-risk bound certifies `d + 1` for a flat presented by
//! `d` functionals via three exactly-decidable hypotheses: the origin is
//! interior to the flat's image, the Bayes risk is non-constant on the
//! flat, and at a constructed interior probe every equal-risk chord of an
//! optimal report stays inside the flat.

use crate::cells::{CellProvenance, PropertyCells};
use crate::error::{Error, Result};
use crate::flats::{chord_system, flat_polyhedron, max_flat_dimension, Flat, SearchStatus};
use crate::linalg::{self, dot, RationalVector};
use crate::loss::{
    bayes_risk, bayes_risk_constant_on, optimal_reports, ConstancyOutcome, DiscreteLoss,
};
use crate::lp::{self, LpOutcome, LpProblem};
use crate::polyhedron::{Constraint, Polyhedron};
use crate::rational::{format_rational, Rational};
use crate::recover::{recover_loss, RecoverOutcome};
use num::{One, Signed, Zero};

/// Which route the flat bound took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppliedRule {
    /// Exactly one report is correct at the probe.
    SingleValued,
    /// The probe is in the relative interior of the domain and the cells
    /// are certified elicitable.
    ElicitableRelativeInterior,
    /// Neither route applies; no flat bound is claimed.
    Neither,
}

impl AppliedRule {
    pub fn label(self) -> &'static str {
        match self {
            AppliedRule::SingleValued => "single-valued",
            AppliedRule::ElicitableRelativeInterior => "elicitable-relative-interior",
            AppliedRule::Neither => "neither",
        }
    }
}

/// The flat bound with its witness and search grade.
#[derive(Debug, Clone)]
pub struct FlatBound {
    pub bound: usize,
    pub witness: Flat,
    pub status: SearchStatus,
}

/// Joint report of the flat and feasible-subspace bounds at one probe.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub p: RationalVector,
    pub report: String,
    pub flat: Option<FlatBound>,
    pub fsd_bound: usize,
    pub applied_rule: AppliedRule,
    /// Human-readable record of the checked preconditions.
    pub notes: Vec<String>,
}

fn locate<'a>(
    cells: &'a PropertyCells,
    p: &[Rational],
    report: &str,
) -> Result<(usize, &'a Polyhedron)> {
    let idx = cells.report_index(report).ok_or_else(|| {
        Error::Precondition(format!("unknown report {report:?}"))
    })?;
    if p.len() != cells.n() {
        return Err(Error::Precondition(format!(
            "point has {} coordinates but there are {} outcomes",
            p.len(),
            cells.n()
        )));
    }
    let cell = &cells.cells[idx];
    if !cell.contains_point(p) {
        return Err(Error::Precondition(format!(
            "the point is not in the cell of report {report:?}"
        )));
    }
    Ok((idx, cell))
}

/// Feasible-subspace lower bound at a probe:
/// `(support size) - dim(S) - 1` clamped at zero, with `S` the two-sided
/// feasible directions of the cell at the probe, within the support
/// subsimplex.
pub fn fsd_lower_bound(cells: &PropertyCells, p: &[Rational], report: &str) -> Result<usize> {
    let (_, cell) = locate(cells, p, report)?;
    let n = cells.n();
    let mut rcell = cell.clone();
    let mut support = 0usize;
    for i in 0..n {
        if p[i].is_zero() {
            let mut normal = linalg::zeros(n);
            normal[i] = Rational::one();
            rcell.add_eq(Constraint::new(normal, Rational::zero()));
        } else {
            support += 1;
        }
    }
    let s_dim = rcell.feasible_direction_subspace(p).dim();
    Ok((support - 1).saturating_sub(s_dim))
}

/// The flat lower bound at a probe, routed by the applicability rules.
pub fn flat_lower_bound(cells: &PropertyCells, p: &[Rational], report: &str) -> Result<BoundReport> {
    let (idx, cell) = locate(cells, p, report)?;
    let mut notes = Vec::new();
    let at_p = cells.reports_at(p);
    let single_valued = at_p.len() == 1 && at_p[0] == idx;
    let rule = if single_valued {
        notes.push("the property is single-valued at the probe".to_string());
        AppliedRule::SingleValued
    } else {
        notes.push(format!(
            "the probe lies in {} cells, so the single-valued route is unavailable",
            at_p.len()
        ));
        let interior = cells.domain().relint_contains(p);
        notes.push(if interior {
            "the probe is in the relative interior of the domain".to_string()
        } else {
            "the probe is on the relative boundary of the domain".to_string()
        });
        let elicitable = match cells.provenance {
            CellProvenance::FromLoss => {
                notes.push("the cells were built from a loss, hence elicitable".to_string());
                true
            }
            CellProvenance::UserSupplied => match recover_loss(cells)? {
                RecoverOutcome::Found(_) => {
                    notes.push("a loss eliciting the cells was recovered".to_string());
                    true
                }
                RecoverOutcome::NotElicitable { report_a, report_b } => {
                    notes.push(format!(
                        "no eliciting loss exists (reports {report_a:?} and {report_b:?} clash)"
                    ));
                    false
                }
            },
        };
        if interior && elicitable {
            AppliedRule::ElicitableRelativeInterior
        } else {
            AppliedRule::Neither
        }
    };
    let fsd_bound = fsd_lower_bound(cells, p, report)?;
    let flat = if rule == AppliedRule::Neither {
        None
    } else {
        let search = max_flat_dimension(p, cell)?;
        let support = p.iter().filter(|x| !x.is_zero()).count();
        let bound = (support - 1) - search.dimension;
        if bound < fsd_bound {
            return Err(Error::Invariant(format!(
                "flat bound {bound} fell below the subspace bound {fsd_bound}"
            )));
        }
        Some(FlatBound {
            bound,
            witness: search.witness,
            status: search.status,
        })
    };
    Ok(BoundReport {
        p: p.to_vec(),
        report: report.to_string(),
        flat,
        fsd_bound,
        applied_rule: rule,
        notes,
    })
}

/// Directions probed by the interiority test: the `d` coordinate
/// directions and one strictly negative combination.
fn probe_directions(d: usize) -> Vec<RationalVector> {
    let mut dirs = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut w = linalg::zeros(d);
        w[i] = Rational::one();
        dirs.push(w);
    }
    let share = -(Rational::one() / Rational::from_integer((d as i64).into()));
    dirs.push(vec![share; d]);
    dirs
}

/// For each probe direction `w`, maximize `t` over
/// `{q in domain : E_q V = t w}`; the optimum and its optimizer.
fn directional_profile(
    flat: &Flat,
    domain: &Polyhedron,
) -> Result<Vec<(Rational, RationalVector)>> {
    let n = flat.n;
    let d = flat.functionals.len();
    let mut out = Vec::new();
    for w in probe_directions(d) {
        let mut problem = LpProblem::new(n + 1);
        for c in &domain.inequalities {
            let mut row = c.normal.clone();
            row.push(Rational::zero());
            problem.add_le(row, c.offset.clone());
        }
        for c in &domain.equalities {
            let mut row = c.normal.clone();
            row.push(Rational::zero());
            problem.add_eq(row, c.offset.clone());
        }
        for (l, v) in flat.functionals.iter().enumerate() {
            let mut row = v.clone();
            row.push(-w[l].clone());
            problem.add_eq(row, Rational::zero());
        }
        let mut objective = linalg::zeros(n + 1);
        objective[n] = Rational::one();
        match lp::maximize(&problem, &objective) {
            LpOutcome::Optimal { value, mut point } => {
                point.truncate(n);
                out.push((value, point));
            }
            LpOutcome::Infeasible => {
                // t = 0 with any domain point is feasible, so this cannot
                // happen over a nonempty domain.
                return Err(Error::Precondition("the domain is empty".into()));
            }
            LpOutcome::Unbounded { .. } => {
                return Err(Error::Invariant(
                    "directional image unbounded over a bounded domain".into(),
                ));
            }
        }
    }
    Ok(out)
}

/// Is the origin strictly inside the image `{E_q V : q in domain}`?
/// Decided exactly: the image is a polytope in d dimensions, and zero is
/// interior if and only if every probe direction admits a strictly
/// positive multiple inside the image.
pub fn condition_v_interior(flat: &Flat, domain: &Polyhedron) -> Result<bool> {
    if domain.dim != flat.n {
        return Err(Error::Precondition(format!(
            "domain lives in dimension {} but the flat has {} outcomes",
            domain.dim, flat.n
        )));
    }
    if flat.functionals.is_empty() {
        return Ok(true);
    }
    let profile = directional_profile(flat, domain)?;
    Ok(profile.iter().all(|(t, _)| t.is_positive()))
}

/// Answer of [`bayes_risk_bound`].
#[derive(Debug, Clone)]
pub enum BayesRiskBoundOutcome {
    /// The bound `d + 1` holds; `probe` is the constructed interior point
    /// of the flat at which the certificate was checked.
    Bound { bound: usize, probe: RationalVector },
    /// Hypotheses that failed, by stable name.
    NotApplicable { failed: Vec<String> },
}

const H1_FAILED: &str = "origin-not-interior-to-flat-image";
const H2_FAILED: &str = "bayes-risk-constant-on-flat";
const H3_FAILED: &str = "optimal-report-level-set-exceeds-flat-at-probe";

/// Certify the Bayes-risk lower bound `d + 1` for a flat presented by `d`
/// functionals, or name the failed hypotheses.
pub fn bayes_risk_bound(
    loss: &DiscreteLoss,
    flat: &Flat,
    restriction: Option<&Polyhedron>,
) -> Result<BayesRiskBoundOutcome> {
    let n = loss.n();
    if flat.n != n {
        return Err(Error::Precondition(format!(
            "flat has {} outcomes but the loss has {n}",
            flat.n
        )));
    }
    let simplex = Polyhedron::standard_simplex(n);
    let domain = match restriction {
        Some(region) => {
            if region.dim != n {
                return Err(Error::Precondition(format!(
                    "restriction lives in dimension {} but the loss has {n} outcomes",
                    region.dim
                )));
            }
            if simplex.contains_polyhedron(region).is_err() {
                return Err(Error::Precondition(
                    "restriction must be a subset of the simplex".into(),
                ));
            }
            region.clone()
        }
        None => simplex,
    };
    let mut flat_region = flat_polyhedron(flat);
    if restriction.is_some() {
        flat_region = flat_region.intersection(&domain);
    }
    if flat_region.is_empty() {
        return Err(Error::Precondition(
            "the flat does not meet the domain".into(),
        ));
    }
    let d = flat.functionals.len();
    let mut failed = Vec::new();

    // Hypothesis: the origin is interior to the flat's image.
    let profile = if d == 0 {
        Vec::new()
    } else {
        directional_profile(flat, &domain)?
    };
    let interior = profile.iter().all(|(t, _)| t.is_positive());
    if !interior {
        failed.push(H1_FAILED.to_string());
    }

    // Hypothesis: the Bayes risk separates the flat from its surroundings.
    match bayes_risk_constant_on(loss, &flat_region)? {
        ConstancyOutcome::Constant { .. } => failed.push(H2_FAILED.to_string()),
        ConstancyOutcome::Witness { .. } => {}
    }

    // Hypothesis: at a constructed interior probe, equal-risk chords of
    // every optimal report stay inside the flat. Only evaluable when the
    // probe construction (which needs interiority) succeeds.
    if interior {
        let probe = construct_probe(flat, &domain, &profile)?;
        if !chords_stay_inside(loss, flat, &domain, &probe)? {
            failed.push(H3_FAILED.to_string());
        }
        if failed.is_empty() {
            return Ok(BayesRiskBoundOutcome::Bound {
                bound: d + 1,
                probe,
            });
        }
    }
    Ok(BayesRiskBoundOutcome::NotApplicable { failed })
}

/// Build a point of the flat in the relative interior of the domain,
/// realized as a strictly positive convex combination of domain points
/// whose images are affinely independent around the origin.
fn construct_probe(
    flat: &Flat,
    domain: &Polyhedron,
    profile: &[(Rational, RationalVector)],
) -> Result<RationalVector> {
    let n = flat.n;
    let d = flat.functionals.len();
    let anchor = domain
        .relint_point()
        .ok_or_else(|| Error::Precondition("the domain is empty".into()))?;
    if d == 0 {
        return Ok(anchor);
    }
    let image = |q: &[Rational]| -> RationalVector {
        flat.functionals.iter().map(|v| dot(v, q)).collect()
    };
    let z0 = image(&anchor);
    let center = if linalg::is_zero_vector(&z0) {
        anchor.clone()
    } else {
        // Maximize t over {q in domain : E_q V + t z0 = 0}; positive by
        // interiority, and mixing the optimizer with the anchor cancels
        // the image exactly.
        let mut problem = LpProblem::new(n + 1);
        for c in &domain.inequalities {
            let mut row = c.normal.clone();
            row.push(Rational::zero());
            problem.add_le(row, c.offset.clone());
        }
        for c in &domain.equalities {
            let mut row = c.normal.clone();
            row.push(Rational::zero());
            problem.add_eq(row, c.offset.clone());
        }
        for (l, v) in flat.functionals.iter().enumerate() {
            let mut row = v.clone();
            row.push(z0[l].clone());
            problem.add_eq(row, Rational::zero());
        }
        let mut objective = linalg::zeros(n + 1);
        objective[n] = Rational::one();
        match lp::maximize(&problem, &objective) {
            LpOutcome::Optimal { value, mut point } => {
                if !value.is_positive() {
                    return Err(Error::Invariant(
                        "interior image admitted no cancelling direction".into(),
                    ));
                }
                point.truncate(n);
                let denom = Rational::one() + &value;
                let mixed: RationalVector = anchor
                    .iter()
                    .zip(point.iter())
                    .map(|(a, w)| (&(a * &value) + w) / &denom)
                    .collect();
                mixed
            }
            _ => {
                return Err(Error::Invariant(
                    "cancelling direction search failed on a nonempty domain".into(),
                ));
            }
        }
    };
    debug_assert!(linalg::is_zero_vector(&image(&center)));
    // Pull each directional optimizer halfway toward the centered anchor:
    // images shrink by half, interiority is preserved.
    let half = Rational::one() / Rational::from_integer(2.into());
    let mut points = Vec::with_capacity(d + 1);
    let mut images = Vec::with_capacity(d + 1);
    for (_, q) in profile {
        let mixed: RationalVector = q
            .iter()
            .zip(center.iter())
            .map(|(a, b)| &(a + b) * &half)
            .collect();
        images.push(image(&mixed));
        points.push(mixed);
    }
    // Solve for the unique affine weights putting the origin inside the
    // image simplex: rows are the image coordinates plus normalization.
    let mut rows: Vec<RationalVector> = Vec::with_capacity(d + 1);
    for l in 0..d {
        rows.push(images.iter().map(|z| z[l].clone()).collect());
    }
    rows.push(vec![Rational::one(); d + 1]);
    let mut rhs = linalg::zeros(d);
    rhs.push(Rational::one());
    let alpha = linalg::solve_unique(&rows, &rhs)
        .ok_or_else(|| Error::Invariant("probe weights were not unique".into()))?;
    if alpha.iter().any(|a| !a.is_positive()) {
        return Err(Error::Invariant(
            "probe weights were not strictly positive".into(),
        ));
    }
    let mut probe = linalg::zeros(n);
    for (a, q) in alpha.iter().zip(points.iter()) {
        probe = linalg::add(&probe, &linalg::scale(q, a));
    }
    debug_assert!(linalg::is_zero_vector(&image(&probe)));
    Ok(probe)
}

/// Decide whether every chord of the domain through the probe that stays
/// inside an optimal report's equal-risk slice has both endpoints inside
/// the flat. Exact: per facet pair and per functional, the extreme values
/// of the functional on the homogenized endpoint are linear programs.
fn chords_stay_inside(
    loss: &DiscreteLoss,
    flat: &Flat,
    domain: &Polyhedron,
    probe: &[Rational],
) -> Result<bool> {
    let n = loss.n();
    let best_value = bayes_risk(loss, probe)?;
    let best = optimal_reports(loss, probe)?;
    let implicit = domain.implicit_equality_flags();
    let facets: Vec<&Constraint> = domain
        .inequalities
        .iter()
        .zip(&implicit)
        .filter_map(|(c, &forced)| (!forced).then_some(c))
        .collect();
    for &r in &best {
        // The equal-risk slice of the report inside its cell.
        let mut slice = domain.clone();
        for other in 0..loss.reports.len() {
            if other != r {
                let diff = linalg::sub(&loss.matrix[r], &loss.matrix[other]);
                slice.add_le(Constraint::new(diff, Rational::zero()));
            }
        }
        slice.add_eq(Constraint::new(loss.matrix[r].clone(), best_value.clone()));
        for (fi, facet_i) in facets.iter().enumerate() {
            for facet_j in facets.iter().skip(fi + 1) {
                let system = chord_system(probe, &slice, facet_i, facet_j);
                for v in &flat.functionals {
                    let mut objective = linalg::zeros(2 * n);
                    objective[..n].clone_from_slice(v);
                    for sense in [true, false] {
                        let outcome = if sense {
                            lp::maximize(&system, &objective)
                        } else {
                            lp::minimize(&system, &objective)
                        };
                        match outcome {
                            LpOutcome::Infeasible => {}
                            LpOutcome::Optimal { value, .. } => {
                                if !value.is_zero() {
                                    return Ok(false);
                                }
                            }
                            LpOutcome::Unbounded { .. } => {
                                return Err(Error::Invariant(
                                    "chord system unbounded over a bounded slice".into(),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Format a probe for report output.
pub fn format_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    parts.join(",")
}
