//! Polyhedra in H-representation with exact predicates.
//!
//! Every region is `{x : N x <= o, E x == f}`. All predicates are decided
//! by exact LPs or exact elimination, so answers are never approximate:
//! containment failures come with a witness point, vertex enumeration is
//! exhaustive, and relative-interior membership accounts for implicit
//! equalities.

use crate::linalg::{self, dot, RationalVector};
use crate::lp::{self, LpOutcome, LpProblem};
use crate::rational::Rational;
use num::{One, Signed, Zero};

/// One linear constraint `normal . x (<= or ==) offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub normal: RationalVector,
    pub offset: Rational,
}

impl Constraint {
    pub fn new(normal: RationalVector, offset: Rational) -> Self {
        Constraint { normal, offset }
    }

    pub fn satisfied_le(&self, x: &[Rational]) -> bool {
        dot(&self.normal, x) <= self.offset
    }

    pub fn satisfied_eq(&self, x: &[Rational]) -> bool {
        dot(&self.normal, x) == self.offset
    }
}

/// Convex polyhedron `{x in R^dim : inequalities hold, equalities hold}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    pub dim: usize,
    /// Constraints `normal . x <= offset`.
    pub inequalities: Vec<Constraint>,
    /// Constraints `normal . x == offset`.
    pub equalities: Vec<Constraint>,
}

/// Witness that a point lies in one region but not another.
#[derive(Debug, Clone)]
pub struct Violation {
    pub point: RationalVector,
}

/// Linear subspace given by a basis (independent by construction).
#[derive(Debug, Clone)]
pub struct Subspace {
    pub basis: Vec<RationalVector>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if linalg::is_zero_vector(v) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        linalg::rank(&rows) == self.basis.len()
    }
}

impl Polyhedron {
    pub fn new(dim: usize) -> Self {
        Polyhedron {
            dim,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }

    /// The probability simplex over `n` outcomes: coordinates nonnegative
    /// and summing to one.
    pub fn standard_simplex(n: usize) -> Self {
        let mut poly = Polyhedron::new(n);
        for i in 0..n {
            let mut normal = linalg::zeros(n);
            normal[i] = -Rational::one();
            poly.add_le(Constraint::new(normal, Rational::zero()));
        }
        poly.add_eq(Constraint::new(vec![Rational::one(); n], Rational::one()));
        poly
    }

    pub fn add_le(&mut self, c: Constraint) {
        debug_assert_eq!(c.normal.len(), self.dim);
        self.inequalities.push(c);
    }

    pub fn add_eq(&mut self, c: Constraint) {
        debug_assert_eq!(c.normal.len(), self.dim);
        self.equalities.push(c);
    }

    /// Intersection with another region over the same space.
    pub fn intersection(&self, other: &Polyhedron) -> Polyhedron {
        assert_eq!(self.dim, other.dim, "dimension mismatch in intersection");
        let mut out = self.clone();
        out.inequalities.extend(other.inequalities.iter().cloned());
        out.equalities.extend(other.equalities.iter().cloned());
        out
    }

    pub fn to_lp(&self) -> LpProblem {
        let mut lp = LpProblem::new(self.dim);
        for c in &self.inequalities {
            lp.add_le(c.normal.clone(), c.offset.clone());
        }
        for c in &self.equalities {
            lp.add_eq(c.normal.clone(), c.offset.clone());
        }
        lp
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|c| c.satisfied_le(x))
            && self.equalities.iter().all(|c| c.satisfied_eq(x))
    }

    pub fn is_empty(&self) -> bool {
        lp::feasible_point(&self.to_lp()).is_none()
    }

    pub fn feasible_point(&self) -> Option<RationalVector> {
        lp::feasible_point(&self.to_lp())
    }

    pub fn maximize(&self, objective: &[Rational]) -> LpOutcome {
        lp::maximize(&self.to_lp(), objective)
    }

    pub fn minimize(&self, objective: &[Rational]) -> LpOutcome {
        lp::minimize(&self.to_lp(), objective)
    }

    /// Exhaustive vertex enumeration for bounded regions. An unbounded
    /// region is reported as an error carrying an unbounded direction.
    pub fn vertices(&self) -> Result<Vec<RationalVector>, UnboundedRegion> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        for i in 0..self.dim {
            let mut obj = linalg::zeros(self.dim);
            obj[i] = Rational::one();
            for sense in [true, false] {
                let outcome = if sense {
                    self.maximize(&obj)
                } else {
                    self.minimize(&obj)
                };
                if let LpOutcome::Unbounded { ray, .. } = outcome {
                    return Err(UnboundedRegion { ray });
                }
            }
        }
        let eq_rows: Vec<RationalVector> =
            self.equalities.iter().map(|c| c.normal.clone()).collect();
        let eq_rank = linalg::rank(&eq_rows);
        let need = self.dim.saturating_sub(eq_rank);
        let mut verts: Vec<RationalVector> = Vec::new();
        let mut system_rows: Vec<RationalVector> = eq_rows;
        let mut system_rhs: Vec<Rational> =
            self.equalities.iter().map(|c| c.offset.clone()).collect();
        let base_len = system_rows.len();
        for combo in combinations(self.inequalities.len(), need) {
            system_rows.truncate(base_len);
            system_rhs.truncate(base_len);
            for &i in &combo {
                system_rows.push(self.inequalities[i].normal.clone());
                system_rhs.push(self.inequalities[i].offset.clone());
            }
            if let Some(x) = linalg::solve_unique(&system_rows, &system_rhs) {
                if self.contains_point(&x) && !verts.contains(&x) {
                    verts.push(x);
                }
            }
        }
        Ok(verts)
    }

    /// Check `inner` is contained in `self`; a failure carries a point of
    /// `inner` outside `self`.
    pub fn contains_polyhedron(&self, inner: &Polyhedron) -> Result<(), Violation> {
        assert_eq!(self.dim, inner.dim, "dimension mismatch in containment");
        let lp_inner = inner.to_lp();
        let check_direction = |normal: &RationalVector,
                               offset: &Rational,
                               upper: bool|
         -> Option<RationalVector> {
            let outcome = if upper {
                lp::maximize(&lp_inner, normal)
            } else {
                lp::minimize(&lp_inner, normal)
            };
            match outcome {
                LpOutcome::Infeasible => None,
                LpOutcome::Optimal { value, point } => {
                    let bad = if upper { value > *offset } else { value < *offset };
                    bad.then_some(point)
                }
                LpOutcome::Unbounded { point, ray } => {
                    // Walk the ray far enough to break the bound.
                    let along = dot(normal, &ray);
                    debug_assert!(if upper {
                        along.is_positive()
                    } else {
                        along.is_negative()
                    });
                    let at = dot(normal, &point);
                    let gap = offset - &at;
                    let mut t = &gap / &along;
                    if t.is_negative() {
                        t = Rational::zero();
                    }
                    t = t + Rational::one();
                    Some(linalg::add(&point, &linalg::scale(&ray, &t)))
                }
            }
        };
        for c in &self.inequalities {
            if let Some(point) = check_direction(&c.normal, &c.offset, true) {
                return Err(Violation { point });
            }
        }
        for c in &self.equalities {
            if let Some(point) = check_direction(&c.normal, &c.offset, true) {
                return Err(Violation { point });
            }
            if let Some(point) = check_direction(&c.normal, &c.offset, false) {
                return Err(Violation { point });
            }
        }
        Ok(())
    }

    /// Inequalities that hold with equality everywhere on the region.
    pub(crate) fn implicit_equality_flags(&self) -> Vec<bool> {
        let lp_self = self.to_lp();
        self.inequalities
            .iter()
            .map(|c| match lp::minimize(&lp_self, &c.normal) {
                LpOutcome::Optimal { value, .. } => value == c.offset,
                _ => false,
            })
            .collect()
    }

    /// Membership in the relative interior: the point satisfies every
    /// non-degenerate inequality strictly; inequalities tight across the
    /// whole region are allowed to be tight at the point.
    pub fn relint_contains(&self, x: &[Rational]) -> bool {
        if !self.contains_point(x) {
            return false;
        }
        let implicit = self.implicit_equality_flags();
        self.inequalities
            .iter()
            .zip(&implicit)
            .all(|(c, &forced)| forced || dot(&c.normal, x) < c.offset)
    }

    /// Dimension of the affine hull; `None` for an empty region.
    pub fn affine_dim(&self) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        let mut rows: Vec<RationalVector> =
            self.equalities.iter().map(|c| c.normal.clone()).collect();
        let implicit = self.implicit_equality_flags();
        for (c, &forced) in self.inequalities.iter().zip(&implicit) {
            if forced {
                rows.push(c.normal.clone());
            }
        }
        Some(self.dim - linalg::rank(&rows))
    }

    /// A point in the relative interior, or `None` when the region is
    /// empty. Maximizes a shared slack over the non-degenerate
    /// inequalities; convexity guarantees a strictly positive optimum on a
    /// nonempty region.
    pub fn relint_point(&self) -> Option<RationalVector> {
        let implicit = self.implicit_equality_flags();
        let mut lp = LpProblem::new(self.dim + 1);
        for c in &self.equalities {
            let mut normal = c.normal.clone();
            normal.push(Rational::zero());
            lp.add_eq(normal, c.offset.clone());
        }
        for (c, &forced) in self.inequalities.iter().zip(&implicit) {
            let mut normal = c.normal.clone();
            normal.push(if forced { Rational::zero() } else { Rational::one() });
            lp.add_le(normal, c.offset.clone());
        }
        let mut cap = linalg::zeros(self.dim + 1);
        cap[self.dim] = Rational::one();
        lp.add_le(cap.clone(), Rational::one());
        lp.add_le(linalg::scale(&cap, &(-Rational::one())), Rational::zero());
        match lp::maximize(&lp, &cap) {
            LpOutcome::Optimal { value, mut point } => {
                debug_assert!(value.is_positive() || self.inequalities.iter().zip(&implicit).all(|(_, &f)| f));
                point.truncate(self.dim);
                Some(point)
            }
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded { .. } => unreachable!("slack variable is capped"),
        }
    }

    /// Subspace of two-sided feasible directions at `x`: directions `d`
    /// with `x + t d` and `x - t d` both feasible for small `t > 0`. Equals
    /// the joint kernel of all equality normals and all inequality normals
    /// active at `x`.
    pub fn feasible_direction_subspace(&self, x: &[Rational]) -> Subspace {
        debug_assert!(self.contains_point(x));
        let mut rows: Vec<RationalVector> =
            self.equalities.iter().map(|c| c.normal.clone()).collect();
        for c in &self.inequalities {
            if dot(&c.normal, x) == c.offset {
                rows.push(c.normal.clone());
            }
        }
        Subspace {
            basis: linalg::kernel(&rows, self.dim),
        }
    }
}

/// Error for vertex enumeration on an unbounded region.
#[derive(Debug, Clone)]
pub struct UnboundedRegion {
    pub ray: RationalVector,
}

/// All k-element subsets of {0, .., n-1} in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        out.push(combo.clone());
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        combo[i] += 1;
        for j in (i + 1)..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn unit_square() -> Polyhedron {
        let mut p = Polyhedron::new(2);
        p.add_le(Constraint::new(vec![rat(-1), rat(0)], rat(0)));
        p.add_le(Constraint::new(vec![rat(0), rat(-1)], rat(0)));
        p.add_le(Constraint::new(vec![rat(1), rat(0)], rat(1)));
        p.add_le(Constraint::new(vec![rat(0), rat(1)], rat(1)));
        p
    }

    #[test]
    fn square_has_four_vertices() {
        let mut verts = unit_square().vertices().unwrap();
        verts.sort();
        assert_eq!(
            verts,
            vec![
                vec![rat(0), rat(0)],
                vec![rat(0), rat(1)],
                vec![rat(1), rat(0)],
                vec![rat(1), rat(1)],
            ]
        );
    }

    #[test]
    fn simplex_vertices_are_unit_points() {
        let mut verts = Polyhedron::standard_simplex(3).vertices().unwrap();
        verts.sort();
        assert_eq!(
            verts,
            vec![
                vec![rat(0), rat(0), rat(1)],
                vec![rat(0), rat(1), rat(0)],
                vec![rat(1), rat(0), rat(0)],
            ]
        );
    }

    #[test]
    fn unbounded_region_is_flagged() {
        let mut p = Polyhedron::new(2);
        p.add_le(Constraint::new(vec![rat(-1), rat(0)], rat(0)));
        p.add_le(Constraint::new(vec![rat(0), rat(-1)], rat(0)));
        assert!(p.vertices().is_err());
    }

    #[test]
    fn containment_produces_witness() {
        let square = unit_square();
        let mut big = Polyhedron::new(2);
        big.add_le(Constraint::new(vec![rat(1), rat(1)], rat(3)));
        big.add_le(Constraint::new(vec![rat(-1), rat(0)], rat(0)));
        big.add_le(Constraint::new(vec![rat(0), rat(-1)], rat(0)));
        assert!(big.contains_polyhedron(&square).is_ok());
        let err = square.contains_polyhedron(&big).unwrap_err();
        assert!(big.contains_point(&err.point));
        assert!(!square.contains_point(&err.point));
    }

    #[test]
    fn relint_ignores_implicit_equalities() {
        // Segment {y == 0} of the square written purely with inequalities.
        let mut seg = unit_square();
        seg.add_le(Constraint::new(vec![rat(0), rat(1)], rat(0)));
        assert!(seg.relint_contains(&[ratio(1, 2), rat(0)]));
        assert!(!seg.relint_contains(&[rat(0), rat(0)]));
        assert!(!unit_square().relint_contains(&[ratio(1, 2), rat(0)]));
        assert!(unit_square().relint_contains(&[ratio(1, 2), ratio(1, 2)]));
    }

    #[test]
    fn affine_dim_counts_implicit_equalities() {
        let mut seg = unit_square();
        seg.add_le(Constraint::new(vec![rat(0), rat(1)], rat(0)));
        assert_eq!(seg.affine_dim(), Some(1));
        assert_eq!(unit_square().affine_dim(), Some(2));
        assert_eq!(Polyhedron::standard_simplex(3).affine_dim(), Some(2));
    }

    #[test]
    fn feasible_directions_on_simplex() {
        let simplex = Polyhedron::standard_simplex(3);
        let uniform = vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)];
        assert_eq!(simplex.feasible_direction_subspace(&uniform).dim(), 2);
        let vertex = vec![rat(1), rat(0), rat(0)];
        assert_eq!(simplex.feasible_direction_subspace(&vertex).dim(), 0);
        let edge_mid = vec![ratio(1, 2), ratio(1, 2), rat(0)];
        assert_eq!(simplex.feasible_direction_subspace(&edge_mid).dim(), 1);
    }

    #[test]
    fn relint_point_lands_strictly_inside() {
        let square = unit_square();
        let x = square.relint_point().unwrap();
        assert!(square.relint_contains(&x));
        // A segment presented with a redundant tight inequality.
        let mut seg = unit_square();
        seg.add_le(Constraint::new(vec![rat(0), rat(1)], rat(0)));
        let y = seg.relint_point().unwrap();
        assert!(seg.relint_contains(&y));
        // Empty region.
        let mut empty = unit_square();
        empty.add_le(Constraint::new(vec![rat(1), rat(0)], rat(-1)));
        assert!(empty.relint_point().is_none());
    }

    #[test]
    fn combinations_enumerate_lexicographically() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
