//! Indirect elicitation check: does a surrogate loss together with a link
//! elicit a target property?
//!
//! The pair `(L, psi)` indirectly elicits the target when, for every
//! distribution `p` and every minimizer `u` of the expected surrogate
//! loss, the linked report `psi(u)` is correct for the target at `p`.
//! Equivalently, for every prediction `u`, the level set
//! `Gamma_u = {p : u minimizes the expected loss}` must be contained in
//! the target cell of `psi(u)`.
//!
//! Both the active pieces of the surrogate and the matched link region
//! are constant on the open cells of the arrangement cut out by the
//! piece-equality boundaries and the link-region boundaries, so `Gamma_u`
//! and `psi(u)` are constant there as well. In dimension one or two the
//! checker enumerates every cell of that arrangement — vertices, one
//! interior point per edge, and one point inside each region on either
//! side of every edge — which makes the verdict complete. In higher
//! dimension it samples predictions from minimizer sets of grid
//! distributions and from link-region vertices, up to a probe budget.

use crate::cells::PropertyCells;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, RationalVector};
use crate::polyhedron::Polyhedron;
use crate::rational::Rational;
use crate::surrogate::{
    minimal_expected_value, surrogate_level_set, surrogate_minimizers, Link, PolyhedralSurrogate,
};
use num::{One, Signed, Zero};

/// How thoroughly the prediction space was covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exhaustiveness {
    /// Every cell of the piece-and-link arrangement received a probe, so
    /// a clean pass rules out violations everywhere.
    CompleteOverPieceComplex,
    /// Only sampled predictions were checked; a clean pass is evidence,
    /// not proof.
    Sampled,
}

impl Exhaustiveness {
    /// Stable label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Exhaustiveness::CompleteOverPieceComplex => "complete-over-piece-complex",
            Exhaustiveness::Sampled => "sampled",
        }
    }
}

/// Outcome of the check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndirectVerdict {
    /// No probe produced a counterexample.
    NoViolationFound,
    /// A re-verified counterexample: `prediction` minimizes the expected
    /// loss under `distribution`, yet the link reports `got` while the
    /// target allows exactly `expected` there.
    Violation {
        prediction: RationalVector,
        distribution: RationalVector,
        expected: Vec<String>,
        got: String,
    },
}

/// Result of `check_indirect_elicitation`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndirectElicitationReport {
    pub verdict: IndirectVerdict,
    /// Number of distinct predictions probed.
    pub probes: usize,
    /// Where the probes came from.
    pub provenance: &'static str,
    pub exhaustiveness: Exhaustiveness,
}

/// Check whether `(surrogate, link)` indirectly elicits `target`.
///
/// In dimension one or two every cell of the piece-and-link arrangement
/// is probed and `probe_budget` is ignored; otherwise at most
/// `probe_budget` sampled predictions are examined. When several probes
/// fail, the lexicographically smallest pair (prediction, distribution)
/// is reported, after re-verifying that the prediction really minimizes
/// the expected loss and that the linked report really is wrong.
pub fn check_indirect_elicitation(
    surrogate: &PolyhedralSurrogate,
    link: &Link,
    target: &PropertyCells,
    probe_budget: usize,
) -> Result<IndirectElicitationReport> {
    if link.dim != surrogate.dim {
        return Err(Error::Precondition(format!(
            "the link reads predictions of dimension {} but the loss produces dimension {}",
            link.dim, surrogate.dim
        )));
    }
    if surrogate.outcomes != target.outcomes {
        return Err(Error::Precondition(
            "the surrogate and the target disagree on the outcome labels".into(),
        ));
    }
    for label in link.reports() {
        if target.report_index(label).is_none() {
            return Err(Error::Precondition(format!(
                "the link produces report {label:?}, which the target does not offer"
            )));
        }
    }

    let complete = surrogate.dim <= 2;
    let (probes, provenance) = if complete {
        let lines = arrangement_boundaries(surrogate, link);
        let probes = if surrogate.dim == 1 {
            line_probes(&lines)
        } else {
            plane_probes(&lines)?
        };
        (probes, "piece-and-link-arrangement")
    } else {
        (
            sampled_probes(surrogate, link, probe_budget)?,
            "grid-minimizers-and-link-region-vertices",
        )
    };

    let domain = target.domain();
    let mut violations: Vec<(RationalVector, RationalVector, String)> = Vec::new();
    for u in &probes {
        let got = link.apply(u)?.to_string();
        let cell = target.cell(&got).ok_or_else(|| {
            Error::Invariant("a validated link report has no target cell".into())
        })?;
        let level_set = surrogate_level_set(surrogate, u)?.intersection(&domain);
        if let Err(violation) = cell.contains_polyhedron(&level_set) {
            violations.push((u.clone(), violation.point, got));
        }
    }

    violations.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let verdict = match violations.into_iter().next() {
        None => IndirectVerdict::NoViolationFound,
        Some((u, p, got)) => {
            // Re-verify the counterexample independently of the probe
            // machinery before accusing the pair of inconsistency.
            if surrogate.expected_value(&u, &p)? != minimal_expected_value(surrogate, &p)? {
                return Err(Error::Invariant(
                    "a reported violation does not minimize the expected loss".into(),
                ));
            }
            let expected: Vec<String> = target
                .reports_at(&p)
                .into_iter()
                .map(|i| target.reports[i].clone())
                .collect();
            if expected.iter().any(|r| *r == got) {
                return Err(Error::Invariant(
                    "a reported violation's link report is allowed by the target".into(),
                ));
            }
            IndirectVerdict::Violation {
                prediction: u,
                distribution: p,
                expected,
                got,
            }
        }
    };
    Ok(IndirectElicitationReport {
        verdict,
        probes: probes.len(),
        provenance,
        exhaustiveness: if complete {
            Exhaustiveness::CompleteOverPieceComplex
        } else {
            Exhaustiveness::Sampled
        },
    })
}

/// A hyperplane `normal . u = offset` in prediction space, in a canonical
/// form (first nonzero coordinate scaled to one) so duplicates collapse.
fn canonical(normal: &[Rational], offset: &Rational) -> Option<(RationalVector, Rational)> {
    let lead = normal.iter().find(|c| !c.is_zero())?;
    let inv = Rational::one() / lead;
    Some((linalg::scale(normal, &inv), offset * &inv))
}

/// Boundaries where the surrogate's active pieces or the link's matched
/// region can change: equality of two pieces of the same outcome, and the
/// boundary of every link-region constraint.
fn arrangement_boundaries(
    surrogate: &PolyhedralSurrogate,
    link: &Link,
) -> Vec<(RationalVector, Rational)> {
    let mut lines: Vec<(RationalVector, Rational)> = Vec::new();
    let mut push = |line: Option<(RationalVector, Rational)>| {
        if let Some(line) = line {
            if !lines.contains(&line) {
                lines.push(line);
            }
        }
    };
    for pieces in &surrogate.pieces {
        for (i, (gi, ci)) in pieces.iter().enumerate() {
            for (gj, cj) in pieces.iter().skip(i + 1) {
                push(canonical(&linalg::sub(gi, gj), &(cj - ci)));
            }
        }
    }
    for region in &link.regions {
        for constraint in &region.inequalities {
            push(canonical(&constraint.normal, &constraint.offset));
        }
    }
    lines
}

/// Probes covering every cell of a one-dimensional arrangement: the
/// breakpoints themselves, the midpoints between neighbours, and one
/// point beyond each end.
fn line_probes(lines: &[(RationalVector, Rational)]) -> Vec<RationalVector> {
    let mut breaks: Vec<Rational> = Vec::new();
    for (normal, offset) in lines {
        // Canonical form makes the single coordinate one.
        debug_assert!(normal[0].is_one());
        if !breaks.contains(offset) {
            breaks.push(offset.clone());
        }
    }
    breaks.sort();
    if breaks.is_empty() {
        return vec![vec![Rational::zero()]];
    }
    let half = crate::rational::ratio(1, 2);
    let mut points: Vec<Rational> = Vec::new();
    points.push(breaks.first().unwrap() - Rational::one());
    for pair in breaks.windows(2) {
        points.push((&pair[0] + &pair[1]) * &half);
    }
    points.push(breaks.last().unwrap() + Rational::one());
    points.extend(breaks);
    points.sort();
    points.into_iter().map(|t| vec![t]).collect()
}

/// Probes covering every cell of a two-dimensional line arrangement:
/// all pairwise intersection vertices, one interior point per edge, and a
/// point just off each side of every edge, nudged until it crosses no
/// other line.
fn plane_probes(lines: &[(RationalVector, Rational)]) -> Result<Vec<RationalVector>> {
    if lines.is_empty() {
        return Ok(vec![linalg::zeros(2)]);
    }
    let mut vertices: Vec<RationalVector> = Vec::new();
    for (i, (ni, oi)) in lines.iter().enumerate() {
        for (nj, oj) in lines.iter().skip(i + 1) {
            if let Some(v) =
                linalg::solve_unique(&[ni.clone(), nj.clone()], &[oi.clone(), oj.clone()])
            {
                if !vertices.contains(&v) {
                    vertices.push(v);
                }
            }
        }
    }
    let mut probes: Vec<RationalVector> = vertices.clone();
    let push = |probe: RationalVector, probes: &mut Vec<RationalVector>| {
        if !probes.contains(&probe) {
            probes.push(probe);
        }
    };
    let half = crate::rational::ratio(1, 2);
    for (index, (normal, offset)) in lines.iter().enumerate() {
        let direction = vec![-normal[1].clone(), normal[0].clone()];
        // Points on the line are `foot + t * direction`, where the foot of
        // the perpendicular from the origin is orthogonal to `direction`;
        // a point `x` on the line sits at `t = <direction, x> / |direction|^2`.
        let foot = linalg::scale(normal, &(offset / dot(normal, normal)));
        let norm2 = dot(&direction, &direction);
        let mut params: Vec<Rational> = vertices
            .iter()
            .filter(|v| dot(normal, v) == *offset)
            .map(|v| dot(&direction, v) / &norm2)
            .collect();
        params.sort();
        params.dedup();
        // One parameter per open edge of this line.
        let mut edge_params: Vec<Rational> = Vec::new();
        match (params.first(), params.last()) {
            (Some(first), Some(last)) => {
                edge_params.push(first - Rational::one());
                for pair in params.windows(2) {
                    edge_params.push((&pair[0] + &pair[1]) * &half);
                }
                edge_params.push(last + Rational::one());
            }
            _ => edge_params.push(Rational::zero()),
        }
        for t in edge_params {
            let on_edge = linalg::add(&foot, &linalg::scale(&direction, &t));
            debug_assert_eq!(dot(normal, &on_edge), *offset);
            push(on_edge.clone(), &mut probes);
            // One probe in the open region on each side of the edge,
            // pulled toward the edge until no other line separates them.
            for sign in [Rational::one(), -Rational::one()] {
                let step = linalg::scale(normal, &sign);
                let mut delta = Rational::one();
                let mut guard = 0;
                loop {
                    let candidate =
                        linalg::add(&on_edge, &linalg::scale(&step, &delta));
                    let crossed = lines.iter().enumerate().any(|(other, (n, o))| {
                        if other == index {
                            return false;
                        }
                        let here = dot(n, &on_edge) - o;
                        if here.is_zero() {
                            // The edge point sits on another line only in
                            // degenerate data; treat any move as a loss.
                            return true;
                        }
                        let there = dot(n, &candidate) - o;
                        there.is_zero() || (here.is_positive() != there.is_positive())
                    });
                    if !crossed {
                        push(candidate, &mut probes);
                        break;
                    }
                    delta = &delta * &half;
                    guard += 1;
                    if guard > 100 {
                        return Err(Error::Invariant(
                            "side probe failed to settle next to its edge".into(),
                        ));
                    }
                }
            }
        }
    }
    probes.sort();
    Ok(probes)
}

/// Sampled predictions for high-dimensional surrogates: vertices (or a
/// feasible point) of every link region, then vertices of minimizer sets
/// of grid distributions of increasing denominator, until `budget`
/// predictions are collected.
fn sampled_probes(
    surrogate: &PolyhedralSurrogate,
    link: &Link,
    budget: usize,
) -> Result<Vec<RationalVector>> {
    let mut probes: Vec<RationalVector> = Vec::new();
    let push = |probe: RationalVector, probes: &mut Vec<RationalVector>| {
        if probes.len() < budget && !probes.contains(&probe) {
            probes.push(probe);
        }
    };
    for region in &link.regions {
        let mut poly = Polyhedron::new(link.dim);
        for c in &region.inequalities {
            poly.add_le(c.clone());
        }
        match poly.vertices() {
            Ok(vs) => {
                for v in vs {
                    push(v, &mut probes);
                }
            }
            Err(_) => {
                if let Some(v) = poly.feasible_point() {
                    push(v, &mut probes);
                }
            }
        }
    }
    let n = surrogate.n();
    // Walk grid distributions of increasing denominator; cap the total
    // number of minimizer programs at a multiple of the budget so the
    // walk terminates even when new vertices stop appearing.
    let mut programs = budget.saturating_mul(4);
    'outer: for denominator in 1..=budget.max(1) {
        let m = denominator as i64;
        let mut counts = vec![0i64; n];
        counts[0] = m;
        loop {
            if probes.len() >= budget || programs == 0 {
                break 'outer;
            }
            let p: RationalVector = counts
                .iter()
                .map(|&k| Rational::new(k.into(), m.into()))
                .collect();
            programs -= 1;
            let minimizers = surrogate_minimizers(surrogate, &p)?;
            match minimizers.vertices() {
                Ok(vs) => {
                    for v in vs {
                        push(v, &mut probes);
                    }
                }
                Err(_) => {
                    if let Some(v) = minimizers.feasible_point() {
                        push(v, &mut probes);
                    }
                }
            }
            if !next_composition(&mut counts) {
                break;
            }
        }
    }
    probes.sort();
    Ok(probes)
}

/// Advance `counts` to the next composition of the same total, in
/// colexicographic order; returns false after the last one.
fn next_composition(counts: &mut [i64]) -> bool {
    // Find the first position with something left to move.
    let Some(i) = counts[..counts.len() - 1].iter().position(|&k| k > 0) else {
        return false;
    };
    let head = counts[i];
    counts[i] = 0;
    counts[0] = head - 1;
    counts[i + 1] += 1;
    true
}
