//! Exact linear programming over the rationals.
//!
//! Dense-tableau two-phase simplex with Bland's rule. Bland's rule plus
//! exact arithmetic makes termination unconditional, so every answer is a
//! certificate: `Optimal` carries an exact optimizer, `Unbounded` carries a
//! feasible point and an improving ray.

use crate::linalg::RationalVector;
use crate::rational::Rational;
use num::{One, Signed, Zero};

/// A linear program over free (sign-unrestricted) variables.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub num_vars: usize,
    /// Constraints `normal . x <= offset`.
    pub less_eq: Vec<(RationalVector, Rational)>,
    /// Constraints `normal . x == offset`.
    pub equal: Vec<(RationalVector, Rational)>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            less_eq: Vec::new(),
            equal: Vec::new(),
        }
    }

    pub fn add_le(&mut self, normal: RationalVector, offset: Rational) {
        debug_assert_eq!(normal.len(), self.num_vars);
        self.less_eq.push((normal, offset));
    }

    pub fn add_eq(&mut self, normal: RationalVector, offset: Rational) {
        debug_assert_eq!(normal.len(), self.num_vars);
        self.equal.push((normal, offset));
    }
}

/// Result of solving a linear program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: RationalVector,
    },
    Infeasible,
    /// The objective is unbounded along `point + t * ray` for `t >= 0`.
    Unbounded {
        point: RationalVector,
        ray: RationalVector,
    },
}

/// Minimize `objective . x` subject to the problem's constraints.
pub fn minimize(problem: &LpProblem, objective: &[Rational]) -> LpOutcome {
    debug_assert_eq!(objective.len(), problem.num_vars);
    Tableau::solve(problem, objective)
}

/// Maximize `objective . x` subject to the problem's constraints.
pub fn maximize(problem: &LpProblem, objective: &[Rational]) -> LpOutcome {
    let negated: RationalVector = objective.iter().map(|c| -c).collect();
    match Tableau::solve(problem, &negated) {
        LpOutcome::Optimal { value, point } => LpOutcome::Optimal {
            value: -value,
            point,
        },
        other => other,
    }
}

/// Any feasible point, or `None` when the constraints are inconsistent.
pub fn feasible_point(problem: &LpProblem) -> Option<RationalVector> {
    match minimize(problem, &crate::linalg::zeros(problem.num_vars)) {
        LpOutcome::Optimal { point, .. } => Some(point),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
    }
}

/// Standard-form tableau. Original free variables are split into
/// nonnegative pairs; every row then gets a slack (inequalities) and an
/// artificial (phase 1). Column layout: `[x+ x- | slacks | artificials]`.
struct Tableau {
    rows: Vec<RationalVector>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cost: RationalVector,
    /// Current negated objective value (cost-row right-hand side).
    cost_rhs: Rational,
    num_split: usize,
    num_slack: usize,
}

impl Tableau {
    fn solve(problem: &LpProblem, objective: &[Rational]) -> LpOutcome {
        let n = problem.num_vars;
        let num_split = 2 * n;
        let num_slack = problem.less_eq.len();
        let m = problem.less_eq.len() + problem.equal.len();
        let total = num_split + num_slack + m;

        let mut rows: Vec<RationalVector> = Vec::with_capacity(m);
        let mut rhs: Vec<Rational> = Vec::with_capacity(m);
        let mut build_row = |normal: &[Rational], offset: &Rational, slack: Option<usize>| {
            let mut row = vec![Rational::zero(); total];
            for (j, a) in normal.iter().enumerate() {
                row[2 * j] = a.clone();
                row[2 * j + 1] = -a;
            }
            if let Some(s) = slack {
                row[num_split + s] = Rational::one();
            }
            let mut b = offset.clone();
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
                b = -b;
            }
            rows.push(row);
            rhs.push(b);
        };
        for (i, (normal, offset)) in problem.less_eq.iter().enumerate() {
            build_row(normal, offset, Some(i));
        }
        for (normal, offset) in &problem.equal {
            build_row(normal, offset, None);
        }

        // Phase 1: one artificial per row, minimize their sum.
        let mut basis = Vec::with_capacity(m);
        for (i, row) in rows.iter_mut().enumerate() {
            let art = num_split + num_slack + i;
            row[art] = Rational::one();
            basis.push(art);
        }
        let mut phase1_cost = vec![Rational::zero(); total];
        for j in (num_split + num_slack)..total {
            phase1_cost[j] = Rational::one();
        }
        let mut tab = Tableau {
            rows,
            rhs,
            basis,
            cost: phase1_cost,
            cost_rhs: Rational::zero(),
            num_split,
            num_slack,
        };
        tab.reduce_cost_row();
        tab.pivot_to_optimum();
        if !tab.objective_value().is_zero() {
            return LpOutcome::Infeasible;
        }
        tab.remove_artificials();

        // Phase 2: original objective over the split variables.
        let width = tab.num_split + tab.num_slack;
        let mut cost = vec![Rational::zero(); width];
        for (j, c) in objective.iter().enumerate() {
            cost[2 * j] = c.clone();
            cost[2 * j + 1] = -c;
        }
        tab.cost = cost;
        tab.cost_rhs = Rational::zero();
        tab.reduce_cost_row();
        if let Some(entering) = tab.pivot_to_optimum() {
            let point = tab.extract_point();
            let ray = tab.extract_ray(entering);
            return LpOutcome::Unbounded { point, ray };
        }
        LpOutcome::Optimal {
            value: tab.objective_value(),
            point: tab.extract_point(),
        }
    }

    fn objective_value(&self) -> Rational {
        -self.cost_rhs.clone()
    }

    /// Zero out the cost coefficients of all basic columns.
    fn reduce_cost_row(&mut self) {
        for (i, &bj) in self.basis.iter().enumerate() {
            if self.cost[bj].is_zero() {
                continue;
            }
            let factor = self.cost[bj].clone();
            for j in 0..self.cost.len() {
                let delta = &self.rows[i][j] * &factor;
                self.cost[j] = &self.cost[j] - &delta;
            }
            let delta = &self.rhs[i] * &factor;
            self.cost_rhs = &self.cost_rhs - &delta;
        }
    }

    /// Run simplex pivots until optimal or unbounded. Returns
    /// `Some(entering_column)` when unbounded, `None` at an optimum.
    fn pivot_to_optimum(&mut self) -> Option<usize> {
        loop {
            // Bland: lowest-index column with negative reduced cost.
            let Some(entering) = self.cost.iter().position(|c| c.is_negative()) else {
                return None;
            };
            // Ratio test; Bland tie-break on lowest basic-variable index.
            let mut best: Option<(Rational, usize)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][entering].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][entering];
                let better = match &best {
                    None => true,
                    Some((r, row)) => {
                        ratio < *r || (ratio == *r && self.basis[i] < self.basis[*row])
                    }
                };
                if better {
                    best = Some((ratio, i));
                }
            }
            let Some((_, leaving_row)) = best else {
                return Some(entering);
            };
            self.pivot(leaving_row, entering);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for x in self.rows[row].iter_mut() {
            *x = &*x * &inv;
        }
        self.rhs[row] = &self.rhs[row] * &inv;
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for j in 0..self.rows[i].len() {
                let delta = &self.rows[row][j] * &factor;
                self.rows[i][j] = &self.rows[i][j] - &delta;
            }
            let delta = &self.rhs[row] * &factor;
            self.rhs[i] = &self.rhs[i] - &delta;
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for j in 0..self.cost.len() {
                let delta = &self.rows[row][j] * &factor;
                self.cost[j] = &self.cost[j] - &delta;
            }
            let delta = &self.rhs[row] * &factor;
            self.cost_rhs = &self.cost_rhs - &delta;
        }
        self.basis[row] = col;
    }

    /// After a zero-cost phase 1: pivot artificials out of the basis (their
    /// rows are at level zero), drop rows that are redundant, then truncate
    /// the artificial columns.
    fn remove_artificials(&mut self) {
        let width = self.num_split + self.num_slack;
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < width {
                i += 1;
                continue;
            }
            // Level is zero here, so any nonzero real column works as pivot.
            match (0..width).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    // 0 = 0 row: redundant constraint.
                    self.rows.swap_remove(i);
                    self.rhs.swap_remove(i);
                    self.basis.swap_remove(i);
                }
            }
        }
        for row in self.rows.iter_mut() {
            row.truncate(width);
        }
        self.cost.truncate(width);
    }

    /// Current basic solution mapped back to the original free variables.
    fn extract_point(&self) -> RationalVector {
        let mut standard = vec![Rational::zero(); self.num_split + self.num_slack];
        for (i, &bj) in self.basis.iter().enumerate() {
            standard[bj] = self.rhs[i].clone();
        }
        (0..self.num_split / 2)
            .map(|j| &standard[2 * j] - &standard[2 * j + 1])
            .collect()
    }

    /// Improving ray for the unbounded entering column, in original
    /// variables: entering moves +1, each basic variable moves by minus its
    /// tableau column entry.
    fn extract_ray(&self, entering: usize) -> RationalVector {
        let mut standard = vec![Rational::zero(); self.num_split + self.num_slack];
        standard[entering] = Rational::one();
        for (i, &bj) in self.basis.iter().enumerate() {
            standard[bj] = -&self.rows[i][entering];
        }
        (0..self.num_split / 2)
            .map(|j| &standard[2 * j] - &standard[2 * j + 1])
            .collect()
    }
}
