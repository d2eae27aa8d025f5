//! Polyhedral surrogate losses on a low-dimensional prediction space.
//!
//! A surrogate assigns each outcome a finite max of affine pieces of the
//! prediction `u`. Expected surrogate loss is then piecewise-linear and
//! convex in `u`, so its minimizer sets are polyhedra, its level sets
//! (distributions for which a given `u` is optimal) are polyhedra in the
//! simplex, and optimality certificates are exact linear systems. A link
//! maps predictions to finite reports by first-match over polyhedral
//! regions.

use crate::distribution::is_distribution;
use crate::error::{Error, Result};
use crate::flats::Flat;
use crate::fm;
use crate::linalg::{self, dot, RationalVector};
use crate::lp::{self, LpOutcome, LpProblem};
use crate::polyhedron::{Constraint, Polyhedron};
use crate::rational::Rational;
use num::{One, Zero};

/// A piecewise-linear convex loss `L(u, y) = max_i (g . u + c)` over the
/// affine pieces `(g, c)` declared for outcome `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedralSurrogate {
    /// Prediction dimension: `u` ranges over `Q^dim`.
    pub dim: usize,
    pub outcomes: Vec<String>,
    /// One nonempty list of `(gradient, intercept)` pieces per outcome.
    pub pieces: Vec<Vec<(RationalVector, Rational)>>,
}

impl PolyhedralSurrogate {
    /// Validated construction. Beyond shape checks, every outcome must
    /// admit a minimum (the zero vector must be a convex combination of
    /// its gradients), which makes the expected loss attain its minimum
    /// under every distribution.
    pub fn new(
        dim: usize,
        outcomes: Vec<String>,
        pieces: Vec<Vec<(RationalVector, Rational)>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition(
                "a surrogate needs at least one prediction coordinate".into(),
            ));
        }
        if outcomes.len() < 2 {
            return Err(Error::Precondition(
                "a surrogate needs at least two outcomes".into(),
            ));
        }
        for (i, a) in outcomes.iter().enumerate() {
            if outcomes[..i].contains(a) {
                return Err(Error::Precondition(format!("duplicate outcome {a:?}")));
            }
        }
        if pieces.len() != outcomes.len() {
            return Err(Error::Precondition(format!(
                "{} piece lists for {} outcomes",
                pieces.len(),
                outcomes.len()
            )));
        }
        for (y, list) in pieces.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::Precondition(format!(
                    "outcome {:?} has no pieces",
                    outcomes[y]
                )));
            }
            for (g, _) in list {
                if g.len() != dim {
                    return Err(Error::Precondition(format!(
                        "a gradient for outcome {:?} has {} entries but the prediction \
                         dimension is {dim}",
                        outcomes[y],
                        g.len()
                    )));
                }
            }
            if !zero_in_convex_hull(list, dim) {
                return Err(Error::Precondition(format!(
                    "the loss for outcome {:?} is unbounded below",
                    outcomes[y]
                )));
            }
        }
        Ok(PolyhedralSurrogate {
            dim,
            outcomes,
            pieces,
        })
    }

    /// Number of outcomes.
    pub fn n(&self) -> usize {
        self.outcomes.len()
    }

    fn check_prediction(&self, u: &[Rational]) -> Result<()> {
        if u.len() != self.dim {
            return Err(Error::Precondition(format!(
                "prediction has {} coordinates but the surrogate expects {}",
                u.len(),
                self.dim
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

    /// Loss of prediction `u` on outcome `y`.
    pub fn value(&self, u: &[Rational], y: usize) -> Result<Rational> {
        self.check_prediction(u)?;
        if y >= self.n() {
            return Err(Error::Precondition(format!(
                "outcome index {y} out of range (only {} outcomes)",
                self.n()
            )));
        }
        Ok(self.pieces[y]
            .iter()
            .map(|(g, c)| dot(g, u) + c)
            .max()
            .expect("at least one piece"))
    }

    /// Expected loss of `u` under `p`.
    pub fn expected_value(&self, u: &[Rational], p: &[Rational]) -> Result<Rational> {
        self.check_distribution(p)?;
        let mut total = Rational::zero();
        for y in 0..self.n() {
            if !p[y].is_zero() {
                total += &p[y] * &self.value(u, y)?;
            }
        }
        Ok(total)
    }

    /// Indices of the pieces of outcome `y` attaining the max at `u`.
    fn active_pieces(&self, u: &[Rational], y: usize) -> Result<Vec<usize>> {
        let top = self.value(u, y)?;
        Ok((0..self.pieces[y].len())
            .filter(|&i| {
                let (g, c) = &self.pieces[y][i];
                dot(g, u) + c == top
            })
            .collect())
    }
}

/// Is the zero vector a convex combination of the pieces' gradients?
fn zero_in_convex_hull(pieces: &[(RationalVector, Rational)], dim: usize) -> bool {
    let k = pieces.len();
    let mut lp = LpProblem::new(k);
    for i in 0..k {
        let mut row = linalg::zeros(k);
        row[i] = -Rational::one();
        lp.add_le(row, Rational::zero());
    }
    lp.add_eq(vec![Rational::one(); k], Rational::one());
    for l in 0..dim {
        let row: RationalVector = pieces.iter().map(|(g, _)| g[l].clone()).collect();
        lp.add_eq(row, Rational::zero());
    }
    lp::feasible_point(&lp).is_some()
}

/// Minimal expected loss under `p`, by the epigraph program over the
/// support outcomes.
pub fn minimal_expected_value(s: &PolyhedralSurrogate, p: &[Rational]) -> Result<Rational> {
    let d = s.dim;
    let supp: Vec<usize> = (0..s.n()).filter(|&y| !p[y].is_zero()).collect();
    let mut lp = LpProblem::new(d + supp.len());
    for (slot, &y) in supp.iter().enumerate() {
        for (g, c) in &s.pieces[y] {
            let mut row = linalg::zeros(d + supp.len());
            row[..d].clone_from_slice(g);
            row[d + slot] = -Rational::one();
            lp.add_le(row, -c.clone());
        }
    }
    let mut objective = linalg::zeros(d + supp.len());
    for (slot, &y) in supp.iter().enumerate() {
        objective[d + slot] = p[y].clone();
    }
    match lp::minimize(&lp, &objective) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Infeasible => Err(Error::Invariant(
            "epigraph program infeasible for a total function".into(),
        )),
        LpOutcome::Unbounded { .. } => Err(Error::Invariant(
            "expected loss unbounded below despite per-outcome attainment".into(),
        )),
    }
}

/// The set of minimizers of the expected loss under `p`, as a polyhedron
/// in prediction space: one inequality per selection of a piece for each
/// support outcome, all capped at the minimal value.
pub fn surrogate_minimizers(s: &PolyhedralSurrogate, p: &[Rational]) -> Result<Polyhedron> {
    s.check_distribution(p)?;
    let v_star = minimal_expected_value(s, p)?;
    let supp: Vec<usize> = (0..s.n()).filter(|&y| !p[y].is_zero()).collect();
    let mut region = Polyhedron::new(s.dim);
    // Odometer over piece selections: the expected loss is the pointwise
    // max of the selected affine combinations, so capping each at the
    // minimum carves out exactly the argmin set.
    let mut selection = vec![0usize; supp.len()];
    loop {
        let mut normal = linalg::zeros(s.dim);
        let mut intercept = Rational::zero();
        for (slot, &y) in supp.iter().enumerate() {
            let (g, c) = &s.pieces[y][selection[slot]];
            for l in 0..s.dim {
                normal[l] += &p[y] * &g[l];
            }
            intercept += &p[y] * c;
        }
        let rhs = &v_star - &intercept;
        // Constant selections are dominated by the minimum and carry no
        // constraint.
        if !linalg::is_zero_vector(&normal) {
            region.add_le(Constraint::new(normal, rhs));
        }
        let mut slot = 0;
        loop {
            if slot == supp.len() {
                return Ok(region);
            }
            selection[slot] += 1;
            if selection[slot] < s.pieces[supp[slot]].len() {
                break;
            }
            selection[slot] = 0;
            slot += 1;
        }
    }
}

/// Stationarity system at `u`: variables are the distribution followed by
/// one multiplier per active piece of each support-eligible outcome. The
/// multipliers of an outcome sum to its probability and the selected
/// gradients cancel.
fn stationarity_polyhedron(s: &PolyhedralSurrogate, u: &[Rational]) -> Result<Polyhedron> {
    let n = s.n();
    let active: Vec<Vec<usize>> = (0..n)
        .map(|y| s.active_pieces(u, y))
        .collect::<Result<_>>()?;
    let offsets: Vec<usize> = active
        .iter()
        .scan(n, |acc, a| {
            let here = *acc;
            *acc += a.len();
            Some(here)
        })
        .collect();
    let total = n + active.iter().map(Vec::len).sum::<usize>();
    let mut poly = Polyhedron::new(total);
    // The distribution block is a simplex; multipliers are nonnegative.
    for v in 0..total {
        let mut row = linalg::zeros(total);
        row[v] = -Rational::one();
        poly.add_le(Constraint::new(row, Rational::zero()));
    }
    let mut ones = vec![Rational::one(); n];
    ones.resize(total, Rational::zero());
    poly.add_eq(Constraint::new(ones, Rational::one()));
    // Multipliers of each outcome sum to its probability.
    for y in 0..n {
        let mut row = linalg::zeros(total);
        row[y] = -Rational::one();
        for slot in 0..active[y].len() {
            row[offsets[y] + slot] = Rational::one();
        }
        poly.add_eq(Constraint::new(row, Rational::zero()));
    }
    // Selected gradients cancel coordinate-wise.
    for l in 0..s.dim {
        let mut row = linalg::zeros(total);
        for y in 0..n {
            for (slot, &i) in active[y].iter().enumerate() {
                row[offsets[y] + slot] = s.pieces[y][i].0[l].clone();
            }
        }
        poly.add_eq(Constraint::new(row, Rational::zero()));
    }
    Ok(poly)
}

/// The level set of a prediction: all distributions under which `u`
/// minimizes the expected loss. Computed by projecting the stationarity
/// system onto the distribution block.
pub fn surrogate_level_set(s: &PolyhedralSurrogate, u: &[Rational]) -> Result<Polyhedron> {
    s.check_prediction(u)?;
    let joint = stationarity_polyhedron(s, u)?;
    Ok(fm::project(&joint, s.n()))
}

/// Extract the witness flat of an optimal prediction: subgradient
/// selections `x_y` with `sum_y p_y x_y = 0`, read as one functional per
/// prediction coordinate. The flat passes through `p` and stays inside the
/// level set of `u`.
pub fn extract_witness_flat(
    s: &PolyhedralSurrogate,
    u: &[Rational],
    p: &[Rational],
) -> Result<Flat> {
    s.check_prediction(u)?;
    s.check_distribution(p)?;
    if s.expected_value(u, p)? != minimal_expected_value(s, p)? {
        return Err(Error::Precondition(
            "the prediction does not minimize the expected loss at the distribution".into(),
        ));
    }
    let n = s.n();
    let supp: Vec<usize> = (0..n).filter(|&y| !p[y].is_zero()).collect();
    let active: Vec<Vec<usize>> = (0..n)
        .map(|y| s.active_pieces(u, y))
        .collect::<Result<_>>()?;
    // Feasible multipliers exist exactly because u is optimal at p.
    let total: usize = supp.iter().map(|&y| active[y].len()).sum();
    let mut lp = LpProblem::new(total);
    for v in 0..total {
        let mut row = linalg::zeros(total);
        row[v] = -Rational::one();
        lp.add_le(row, Rational::zero());
    }
    let mut offset = 0usize;
    let mut offsets = Vec::with_capacity(supp.len());
    for &y in &supp {
        offsets.push(offset);
        let mut row = linalg::zeros(total);
        for slot in 0..active[y].len() {
            row[offset + slot] = Rational::one();
        }
        lp.add_eq(row, p[y].clone());
        offset += active[y].len();
    }
    for l in 0..s.dim {
        let mut row = linalg::zeros(total);
        for (si, &y) in supp.iter().enumerate() {
            for (slot, &i) in active[y].iter().enumerate() {
                row[offsets[si] + slot] = s.pieces[y][i].0[l].clone();
            }
        }
        lp.add_eq(row, Rational::zero());
    }
    let lambda = lp::feasible_point(&lp).ok_or_else(|| {
        Error::Invariant("stationarity system infeasible at an optimal prediction".into())
    })?;
    // Per-outcome subgradient selections: averaged active gradients on the
    // support, any active gradient off it.
    let mut selections: Vec<RationalVector> = Vec::with_capacity(n);
    for y in 0..n {
        if let Some(si) = supp.iter().position(|&z| z == y) {
            let mut x = linalg::zeros(s.dim);
            for (slot, &i) in active[y].iter().enumerate() {
                let weight = &lambda[offsets[si] + slot];
                for l in 0..s.dim {
                    x[l] += weight * &s.pieces[y][i].0[l];
                }
            }
            selections.push(x.iter().map(|v| v / &p[y]).collect());
        } else {
            selections.push(s.pieces[y][active[y][0]].0.clone());
        }
    }
    let functionals: Vec<RationalVector> = (0..s.dim)
        .map(|l| selections.iter().map(|x| x[l].clone()).collect())
        .collect();
    Flat::new(n, functionals)
}

/// One polyhedral region of a link, with the report it maps to.
#[derive(Debug, Clone)]
pub struct LinkRegion {
    pub inequalities: Vec<Constraint>,
    pub report: String,
}

/// A link from predictions to reports: regions are tried in declaration
/// order and the first match wins; predictions matching none map to the
/// default report.
#[derive(Debug, Clone)]
pub struct Link {
    pub dim: usize,
    pub regions: Vec<LinkRegion>,
    pub default: String,
}

impl Link {
    pub fn new(dim: usize, regions: Vec<LinkRegion>, default: String) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition(
                "a link needs at least one prediction coordinate".into(),
            ));
        }
        for region in &regions {
            for c in &region.inequalities {
                if c.normal.len() != dim {
                    return Err(Error::Precondition(format!(
                        "a region of report {:?} has a normal with {} entries but the \
                         prediction dimension is {dim}",
                        region.report,
                        c.normal.len()
                    )));
                }
            }
        }
        Ok(Link {
            dim,
            regions,
            default,
        })
    }

    /// The report the link assigns to a prediction.
    pub fn apply(&self, u: &[Rational]) -> Result<&str> {
        if u.len() != self.dim {
            return Err(Error::Precondition(format!(
                "prediction has {} coordinates but the link expects {}",
                u.len(),
                self.dim
            )));
        }
        for region in &self.regions {
            if region
                .inequalities
                .iter()
                .all(|c| dot(&c.normal, u) <= c.offset)
            {
                return Ok(&region.report);
            }
        }
        Ok(&self.default)
    }

    /// Every report label the link can produce, in first-use order.
    pub fn reports(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for region in &self.regions {
            if !out.contains(&region.report.as_str()) {
                out.push(&region.report);
            }
        }
        if !out.contains(&self.default.as_str()) {
            out.push(&self.default);
        }
        out
    }
}
