//! Flats: nonempty slices of the simplex of the form
//! `{q : E_q V = 0}` for finitely many functionals `V`, and the search for
//! the largest flat through a point inside a cell.
//!
//! The search runs on the support subsimplex of the probe point and is
//! layered so that exactness is tracked honestly:
//!
//! - the full feasible-direction subspace is the unique top candidate, so
//!   its success or failure is exact;
//! - one-dimensional flats are decided exactly by chord systems (two
//!   homogenized endpoint blocks per facet pair, all linear);
//! - intermediate dimensions come from kernels of facet-normal subsets, a
//!   family that can miss slanted flats, so an answer resting on it is
//!   flagged heuristic.
//!
//! Every returned witness is re-certified, so soundness never depends on
//! the search strategy; only exhaustiveness is graded.

use crate::error::{Error, Result};
use crate::linalg::{self, dot, RationalVector};
use crate::lp::{self, LpProblem};
use crate::polyhedron::{Constraint, Polyhedron, Violation};
use crate::rational::Rational;
use num::{One, Signed, Zero};

/// A flat presented by functionals: `{q in simplex : V . q = 0 for all V}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat {
    /// Number of outcomes.
    pub n: usize,
    /// One row per functional, each of length `n`.
    pub functionals: Vec<RationalVector>,
}

impl Flat {
    /// Validated construction: functionals must match the outcome count
    /// and the flat must be nonempty (flats are nonempty by definition).
    pub fn new(n: usize, functionals: Vec<RationalVector>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(
                "a flat needs at least two outcomes".into(),
            ));
        }
        for row in &functionals {
            if row.len() != n {
                return Err(Error::Precondition(format!(
                    "functional has {} entries but there are {n} outcomes",
                    row.len()
                )));
            }
        }
        let flat = Flat { n, functionals };
        if flat_polyhedron(&flat).is_empty() {
            return Err(Error::Precondition(
                "the functionals have no common zero in the simplex".into(),
            ));
        }
        Ok(flat)
    }

    /// Presentation size: number of functionals.
    pub fn presentation_size(&self) -> usize {
        self.functionals.len()
    }

    pub fn contains(&self, q: &[Rational]) -> bool {
        flat_polyhedron(self).contains_point(q)
    }
}

/// The flat as an explicit polyhedron: simplex plus one equality per
/// functional.
pub fn flat_polyhedron(flat: &Flat) -> Polyhedron {
    let mut poly = Polyhedron::standard_simplex(flat.n);
    for v in &flat.functionals {
        poly.add_eq(Constraint::new(v.clone(), Rational::zero()));
    }
    poly
}

/// Check that the flat passes through `p` and lies inside `cell`; a
/// failure carries a point of the flat outside the cell.
pub fn certify_flat(
    flat: &Flat,
    p: &[Rational],
    cell: &Polyhedron,
) -> Result<std::result::Result<(), Violation>> {
    if cell.dim != flat.n {
        return Err(Error::Precondition(format!(
            "cell lives in dimension {} but the flat has {} outcomes",
            cell.dim, flat.n
        )));
    }
    let poly = flat_polyhedron(flat);
    if !poly.contains_point(p) {
        return Err(Error::Precondition(
            "the base point is not on the flat".into(),
        ));
    }
    Ok(cell.contains_polyhedron(&poly))
}

/// How trustworthy a `max_flat_dimension` answer is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// The value is exact: witnessed from below and refuted above by
    /// exhaustive layers.
    CertifiedExhaustive,
    /// The witness is sound but larger flats were ruled out only by an
    /// incomplete candidate family.
    Heuristic,
}

/// Result of the flat search: a certified witness of the reported
/// dimension, plus the exhaustiveness grade of the upper refutation.
#[derive(Debug, Clone)]
pub struct FlatSearch {
    pub dimension: usize,
    pub status: SearchStatus,
    pub witness: Flat,
}

/// Largest dimension of a flat through `p` inside `cell`, computed on the
/// support subsimplex of `p`.
pub fn max_flat_dimension(p: &[Rational], cell: &Polyhedron) -> Result<FlatSearch> {
    let n = cell.dim;
    if p.len() != n {
        return Err(Error::Precondition(format!(
            "point has {} coordinates but the cell lives in dimension {n}",
            p.len()
        )));
    }
    if !cell.contains_point(p) {
        return Err(Error::Precondition("the point is not in the cell".into()));
    }
    let simplex = Polyhedron::standard_simplex(n);
    if !simplex.contains_point(p) {
        return Err(Error::Precondition("the point is not a distribution".into()));
    }
    if simplex.contains_polyhedron(cell).is_err() {
        return Err(Error::Precondition(
            "the cell is not a subset of the simplex".into(),
        ));
    }
    let supp: Vec<usize> = (0..n).filter(|&i| !p[i].is_zero()).collect();
    // Restrict to the support subsimplex: flats through p are analyzed
    // within the face of the simplex that p is interior to.
    let mut rcell = cell.clone();
    for i in 0..n {
        if !supp.contains(&i) {
            let mut normal = linalg::zeros(n);
            normal[i] = Rational::one();
            rcell.add_eq(Constraint::new(normal, Rational::zero()));
        }
    }
    let directions = rcell.feasible_direction_subspace(p);
    let s_dim = directions.dim();

    // Top layer: the full feasible-direction subspace is the unique
    // candidate of its dimension, so failure here is an exact refutation.
    let top = span_flat(p, &directions.basis)?;
    if certify_flat(&top, p, cell)?.is_ok() {
        return Ok(FlatSearch {
            dimension: s_dim,
            status: SearchStatus::CertifiedExhaustive,
            witness: top,
        });
    }

    // Middle layers: kernels of facet-normal subsets intersected with the
    // direction subspace. Incomplete in general.
    if s_dim >= 3 {
        let pool: Vec<RationalVector> = {
            let mut seen: Vec<RationalVector> = Vec::new();
            for c in &rcell.inequalities {
                if !seen.contains(&c.normal) {
                    seen.push(c.normal.clone());
                }
            }
            seen
        };
        let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); s_dim];
        for size in 1..=pool.len() {
            for combo in crate::polyhedron::combinations(pool.len(), size) {
                let mut rows = active_rows(&rcell, p);
                for &i in &combo {
                    rows.push(pool[i].clone());
                }
                let dim = linalg::kernel(&rows, n).len();
                if dim >= 2 && dim <= s_dim - 1 {
                    by_dim[dim].push(combo);
                }
            }
        }
        for k in (2..=s_dim - 1).rev() {
            for combo in &by_dim[k] {
                let mut rows = active_rows(&rcell, p);
                for &i in combo {
                    rows.push(pool[i].clone());
                }
                let basis = linalg::kernel(&rows, n);
                let candidate = span_flat(p, &basis)?;
                if certify_flat(&candidate, p, cell)?.is_ok() {
                    let status = if k == s_dim - 1 {
                        SearchStatus::CertifiedExhaustive
                    } else {
                        SearchStatus::Heuristic
                    };
                    return Ok(FlatSearch {
                        dimension: k,
                        status,
                        witness: candidate,
                    });
                }
            }
        }
    }

    // Chord layer: exact decision for dimension one.
    if s_dim >= 2 {
        if let Some((q_plus, q_minus)) = find_chord(p, &rcell, &supp) {
            let direction = linalg::sub(&q_plus, &q_minus);
            let witness = span_flat(p, &[direction])?;
            if certify_flat(&witness, p, cell)?.is_err() {
                return Err(Error::Invariant(
                    "chord witness failed certification".into(),
                ));
            }
            let status = if s_dim == 2 {
                SearchStatus::CertifiedExhaustive
            } else {
                SearchStatus::Heuristic
            };
            return Ok(FlatSearch {
                dimension: 1,
                status,
                witness,
            });
        }
    }

    // No chord: downward monotonicity (every flat through p contains a
    // chord through p) makes zero exact regardless of the middle layers.
    let witness = span_flat(p, &[])?;
    if certify_flat(&witness, p, cell)?.is_err() {
        return Err(Error::Invariant("point flat failed certification".into()));
    }
    Ok(FlatSearch {
        dimension: 0,
        status: SearchStatus::CertifiedExhaustive,
        witness,
    })
}

/// Normals of constraints active at `p` (equalities and tight
/// inequalities).
fn active_rows(cell: &Polyhedron, p: &[Rational]) -> Vec<RationalVector> {
    let mut rows: Vec<RationalVector> =
        cell.equalities.iter().map(|c| c.normal.clone()).collect();
    for c in &cell.inequalities {
        if dot(&c.normal, p) == c.offset {
            rows.push(c.normal.clone());
        }
    }
    rows
}

/// The flat whose points are exactly `span(directions ∪ {p})` within the
/// simplex, presented by a basis of the annihilator.
fn span_flat(p: &[Rational], directions: &[RationalVector]) -> Result<Flat> {
    let n = p.len();
    let mut rows: Vec<RationalVector> = directions.to_vec();
    rows.push(p.to_vec());
    let functionals = linalg::kernel(&rows, n);
    Flat::new(n, functionals)
}

/// Search for a full chord of the support subsimplex through `p` inside
/// `rcell` (which already pins non-support coordinates to zero). Returns
/// its endpoints when one exists.
fn find_chord(
    p: &[Rational],
    rcell: &Polyhedron,
    supp: &[usize],
) -> Option<(RationalVector, RationalVector)> {
    for (ai, &i) in supp.iter().enumerate() {
        for &j in supp.iter().skip(ai + 1) {
            let n = p.len();
            let mut facet_i = linalg::zeros(n);
            facet_i[i] = -Rational::one();
            let mut facet_j = linalg::zeros(n);
            facet_j[j] = -Rational::one();
            let lp = chord_system(
                p,
                rcell,
                &Constraint::new(facet_i, Rational::zero()),
                &Constraint::new(facet_j, Rational::zero()),
            );
            if let Some(point) = lp::feasible_point(&lp) {
                return Some(split_chord_point(&point, n));
            }
        }
    }
    None
}

/// Recover the two endpoints from a feasible chord-system point.
pub(crate) fn split_chord_point(point: &[Rational], n: usize) -> (RationalVector, RationalVector) {
    let a = &point[..n];
    let c = &point[n..2 * n];
    let asum: Rational = a.iter().sum();
    let csum: Rational = c.iter().sum();
    debug_assert!(asum.is_positive() && csum.is_positive());
    let q_plus: RationalVector = a.iter().map(|x| x / &asum).collect();
    let q_minus: RationalVector = c.iter().map(|x| x / &csum).collect();
    (q_plus, q_minus)
}

/// Homogenized two-endpoint system for chords through `p`: variables
/// `(a, c)` standing for `λ q⁺` and `(1-λ) q⁻` with `a + c = p`, both
/// endpoints confined to `region`, `q⁺` tight on `facet_i` and `q⁻` tight
/// on `facet_j`. Scaling a constraint `normal . q <= offset` for
/// `q = a / Σa` gives `(normal - offset 1) . a <= 0`, all linear. With `p`
/// strictly positive on its support, `a = 0` (or `c = 0`) is infeasible,
/// so feasible points correspond to genuine full chords.
pub(crate) fn chord_system(
    p: &[Rational],
    region: &Polyhedron,
    facet_i: &Constraint,
    facet_j: &Constraint,
) -> LpProblem {
    let n = p.len();
    let mut lp = LpProblem::new(2 * n);
    // a + c = p
    for k in 0..n {
        let mut row = linalg::zeros(2 * n);
        row[k] = Rational::one();
        row[n + k] = Rational::one();
        lp.add_eq(row, p[k].clone());
    }
    // Nonnegativity of both homogenized endpoints.
    for v in 0..2 * n {
        let mut row = linalg::zeros(2 * n);
        row[v] = -Rational::one();
        lp.add_le(row, Rational::zero());
    }
    let homogenize = |normal: &RationalVector, offset: &Rational| -> RationalVector {
        normal.iter().map(|x| x - offset).collect()
    };
    let mut add_both = |normal: &RationalVector, offset: &Rational, equality: bool| {
        let h = homogenize(normal, offset);
        for half in 0..2 {
            let mut row = linalg::zeros(2 * n);
            for k in 0..n {
                row[half * n + k] = h[k].clone();
            }
            if equality {
                lp.add_eq(row, Rational::zero());
            } else {
                lp.add_le(row, Rational::zero());
            }
        }
    };
    for c in &region.inequalities {
        add_both(&c.normal, &c.offset, false);
    }
    for c in &region.equalities {
        add_both(&c.normal, &c.offset, true);
    }
    // Tight facets, one per endpoint.
    let hi = homogenize(&facet_i.normal, &facet_i.offset);
    let mut row = linalg::zeros(2 * n);
    row[..n].clone_from_slice(&hi);
    lp.add_eq(row, Rational::zero());
    let hj = homogenize(&facet_j.normal, &facet_j.offset);
    let mut row = linalg::zeros(2 * n);
    row[n..2 * n].clone_from_slice(&hj);
    lp.add_eq(row, Rational::zero());
    lp
}
