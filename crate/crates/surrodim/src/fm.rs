//! Exact projection of polyhedra by variable elimination.
//!
//! Equalities are used first as substitutions (each removes one variable
//! outright); remaining variables are eliminated by combining opposing
//! inequality pairs. Everything is exact, so the projection is the true
//! shadow of the region, not an approximation.

use crate::linalg::RationalVector;
use crate::polyhedron::{Constraint, Polyhedron};
use crate::rational::Rational;
use num::{One, Signed, Zero};

/// Project a region onto its first `keep` coordinates.
pub fn project(poly: &Polyhedron, keep: usize) -> Polyhedron {
    assert!(keep <= poly.dim, "cannot keep more coordinates than exist");
    let mut eqs: Vec<(RationalVector, Rational)> = poly
        .equalities
        .iter()
        .map(|c| (c.normal.clone(), c.offset.clone()))
        .collect();
    let mut ineqs: Vec<(RationalVector, Rational)> = poly
        .inequalities
        .iter()
        .map(|c| (c.normal.clone(), c.offset.clone()))
        .collect();
    let mut alive: Vec<usize> = (keep..poly.dim).collect();

    // Substitute out any eliminated variable that appears in an equality.
    loop {
        let Some((eq_idx, var)) = eqs.iter().enumerate().find_map(|(i, (normal, _))| {
            alive
                .iter()
                .find(|&&v| !normal[v].is_zero())
                .map(|&v| (i, v))
        }) else {
            break;
        };
        let (enormal, eoffset) = eqs.swap_remove(eq_idx);
        let pivot = enormal[var].clone();
        let substitute = |normal: &mut RationalVector, offset: &mut Rational| {
            if normal[var].is_zero() {
                return;
            }
            let factor = &normal[var] / &pivot;
            for (n, e) in normal.iter_mut().zip(enormal.iter()) {
                *n = &*n - &(&factor * e);
            }
            *offset = &*offset - &(&factor * &eoffset);
            debug_assert!(normal[var].is_zero());
        };
        for (normal, offset) in eqs.iter_mut() {
            substitute(normal, offset);
        }
        for (normal, offset) in ineqs.iter_mut() {
            substitute(normal, offset);
        }
        alive.retain(|&v| v != var);
    }

    // Fourier-Motzkin on the remaining variables.
    for &var in &alive {
        let mut keep_rows = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for row in ineqs.drain(..) {
            if row.0[var].is_zero() {
                keep_rows.push(row);
            } else if row.0[var].is_positive() {
                pos.push(row);
            } else {
                neg.push(row);
            }
        }
        for (pn, po) in &pos {
            for (nn, no) in &neg {
                let pc = &pn[var];
                let nc = &nn[var];
                // Scale so the eliminated coefficient cancels; both scale
                // factors are positive, preserving direction.
                let normal: RationalVector = pn
                    .iter()
                    .zip(nn.iter())
                    .map(|(a, b)| &(a / pc) - &(b / nc))
                    .collect();
                let offset = &(po / pc) - &(no / nc);
                keep_rows.push((normal, offset));
            }
        }
        ineqs = dedupe(keep_rows);
    }

    let mut out = Polyhedron::new(keep);
    for (normal, offset) in dedupe(ineqs) {
        debug_assert!(normal[keep..].iter().all(Rational::is_zero));
        if normal[..keep].iter().all(Rational::is_zero) {
            if offset.is_negative() {
                // Infeasible system: keep one unsatisfiable row.
                out.add_le(Constraint::new(
                    vec![Rational::zero(); keep],
                    -Rational::one(),
                ));
            }
            continue;
        }
        out.add_le(Constraint::new(normal[..keep].to_vec(), offset));
    }
    for (normal, offset) in eqs {
        debug_assert!(normal[keep..].iter().all(Rational::is_zero));
        out.add_eq(Constraint::new(normal[..keep].to_vec(), offset));
    }
    out
}

/// Canonicalize rows by positive scaling and drop duplicates.
fn dedupe(rows: Vec<(RationalVector, Rational)>) -> Vec<(RationalVector, Rational)> {
    let mut seen: Vec<(RationalVector, Rational)> = Vec::new();
    for (normal, offset) in rows {
        let scale = normal
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs())
            .unwrap_or_else(Rational::one);
        let canon: RationalVector = normal.iter().map(|c| c / &scale).collect();
        let coff = &offset / &scale;
        if !seen.iter().any(|(n, o)| *n == canon && *o == coff) {
            seen.push((canon, coff));
        }
    }
    seen
}
