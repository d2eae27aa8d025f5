//! Frozen expected values, each derived independently of the library code:
//! by hand (linear systems solved on paper), by brute-force enumeration in
//! this file, or by direct matrix arithmetic. Higher-level operations are
//! tested against these anchors before anything else.

use num::Zero;
use surrodim::distribution::uniform;
use surrodim::flats::{certify_flat, flat_polyhedron, max_flat_dimension, Flat, SearchStatus};
use surrodim::loss::{
    bayes_risk, bayes_risk_constant_on, elicited_property, expected_loss, optimal_reports, regret,
    separating_hyperplane, ConstancyOutcome, DiscreteLoss,
};
use surrodim::lp::LpOutcome;
use surrodim::polyhedron::{Constraint, Polyhedron};
use surrodim::rational::{rat, ratio, Rational};

fn rv(entries: &[(i64, i64)]) -> Vec<Rational> {
    entries.iter().map(|&(n, d)| ratio(n, d)).collect()
}

/// The classification loss with an abstain report costing 1/2.
fn abstain_loss() -> DiscreteLoss {
    DiscreteLoss::new(
        vec!["1".into(), "2".into(), "3".into(), "abstain".into()],
        vec!["1".into(), "2".into(), "3".into()],
        vec![
            rv(&[(0, 1), (1, 1), (1, 1)]),
            rv(&[(1, 1), (0, 1), (1, 1)]),
            rv(&[(1, 1), (1, 1), (0, 1)]),
            rv(&[(1, 2), (1, 2), (1, 2)]),
        ],
    )
    .unwrap()
}

fn zero_one_loss() -> DiscreteLoss {
    DiscreteLoss::new(
        vec!["1".into(), "2".into(), "3".into()],
        vec!["1".into(), "2".into(), "3".into()],
        vec![
            rv(&[(0, 1), (1, 1), (1, 1)]),
            rv(&[(1, 1), (0, 1), (1, 1)]),
            rv(&[(1, 1), (1, 1), (0, 1)]),
        ],
    )
    .unwrap()
}

/// Squared loss (r - y)^2 over outcomes {0, 1, 2} with a quarter-step
/// report grid 0, 1/4, ..., 2.
fn squared_grid_loss() -> DiscreteLoss {
    let outcomes: Vec<Rational> = vec![rat(0), rat(1), rat(2)];
    let reports: Vec<Rational> = (0..=8).map(|k| ratio(k, 4)).collect();
    let matrix = reports
        .iter()
        .map(|r| outcomes.iter().map(|y| (r - y) * (r - y)).collect())
        .collect();
    DiscreteLoss::new(
        reports
            .iter()
            .map(surrodim::rational::format_rational)
            .collect(),
        vec!["0".into(), "1".into(), "2".into()],
        matrix,
    )
    .unwrap()
}

/// The abstain cell: every outcome probability at most 1/2.
fn abstain_center_cell() -> Polyhedron {
    let mut cell = Polyhedron::standard_simplex(3);
    for i in 0..3 {
        let mut normal = vec![rat(0); 3];
        normal[i] = rat(1);
        cell.add_le(Constraint::new(normal, ratio(1, 2)));
    }
    cell
}

/// All distributions over `n` outcomes with entries of denominator `den`.
fn grid(n: usize, den: i64) -> Vec<Vec<Rational>> {
    fn rec(n: usize, left: i64, den: i64, prefix: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) {
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
    let mut out = Vec::new();
    rec(n, den, den, &mut Vec::new(), &mut out);
    out
}

// ---------------------------------------------------------------------------
// Exact geometry anchors
// ---------------------------------------------------------------------------

#[test]
fn lp_maximum_of_third_coordinate_over_abstain_cell_is_one_half() {
    // Oracle: the cell's three vertices, found by hand from constraint
    // pairs, are (1/2,1/2,0), (1/2,0,1/2), (0,1/2,1/2); the max third
    // coordinate among them is 1/2.
    let cell = abstain_center_cell();
    match cell.maximize(&rv(&[(0, 1), (0, 1), (1, 1)])) {
        LpOutcome::Optimal { value, point } => {
            assert_eq!(value, ratio(1, 2));
            assert!(cell.contains_point(&point));
            assert_eq!(point[2], ratio(1, 2));
        }
        other => panic!("expected optimal, got {other:?}"),
    }
}

#[test]
fn abstain_cell_vertices_are_the_three_edge_midpoints() {
    let mut verts = abstain_center_cell().vertices().unwrap();
    verts.sort();
    assert_eq!(
        verts,
        vec![
            rv(&[(0, 1), (1, 2), (1, 2)]),
            rv(&[(1, 2), (0, 1), (1, 2)]),
            rv(&[(1, 2), (1, 2), (0, 1)]),
        ]
    );
}

#[test]
fn third_outcome_cell_vertices_of_abstain_property() {
    // Cell {p3 >= 1/2}: intersecting its boundary with the simplex facets
    // by hand gives e3, (1/2,0,1/2), (0,1/2,1/2).
    let mut cell = Polyhedron::standard_simplex(3);
    cell.add_le(Constraint::new(rv(&[(0, 1), (0, 1), (-1, 1)]), ratio(-1, 2)));
    let mut verts = cell.vertices().unwrap();
    verts.sort();
    assert_eq!(
        verts,
        vec![
            rv(&[(0, 1), (0, 1), (1, 1)]),
            rv(&[(0, 1), (1, 2), (1, 2)]),
            rv(&[(1, 2), (0, 1), (1, 2)]),
        ]
    );
}

#[test]
fn feasible_directions_of_abstain_cell() {
    let cell = abstain_center_cell();
    // Interior of the cell: only the simplex equality is active.
    assert_eq!(cell.feasible_direction_subspace(&uniform(3)).dim(), 2);
    // At (1/4,1/4,1/2) the facet p3 <= 1/2 is also active; the kernel of
    // {(1,1,1),(0,0,1)} is spanned by (1,-1,0).
    let star = rv(&[(1, 4), (1, 4), (1, 2)]);
    let sub = cell.feasible_direction_subspace(&star);
    assert_eq!(sub.dim(), 1);
    assert!(sub.contains(&rv(&[(1, 1), (-1, 1), (0, 1)])));
}

#[test]
fn star_is_not_in_the_relative_interior_of_the_abstain_cell() {
    let cell = abstain_center_cell();
    let star = rv(&[(1, 4), (1, 4), (1, 2)]);
    // p3 <= 1/2 is tight at star but slack at uniform, so star sits on a
    // proper face.
    assert!(cell.contains_point(&star));
    assert!(!cell.relint_contains(&star));
    assert!(cell.relint_contains(&uniform(3)));
}

// ---------------------------------------------------------------------------
// Loss and property anchors
// ---------------------------------------------------------------------------

#[test]
fn abstain_expected_losses_by_direct_summation() {
    let loss = abstain_loss();
    let star = rv(&[(1, 4), (1, 4), (1, 2)]);
    // Abstaining costs 1/2 regardless of p.
    assert_eq!(expected_loss(&loss, 3, &uniform(3)).unwrap(), ratio(1, 2));
    assert_eq!(expected_loss(&loss, 3, &star).unwrap(), ratio(1, 2));
    // Reporting 3 at star: 1/4 + 1/4 + 0.
    assert_eq!(expected_loss(&loss, 2, &star).unwrap(), ratio(1, 2));
    // Zero-one loss at a unit mass on the first outcome.
    assert_eq!(
        expected_loss(&zero_one_loss(), 0, &rv(&[(1, 1), (0, 1), (0, 1)])).unwrap(),
        rat(0)
    );
}

#[test]
fn abstain_regrets_by_direct_comparison() {
    let loss = abstain_loss();
    let e3 = rv(&[(0, 1), (0, 1), (1, 1)]);
    // Best report at e3 is "3" with loss 0; abstaining costs 1/2.
    assert_eq!(regret(&loss, 3, &e3).unwrap(), ratio(1, 2));
    // At star the best options cost 1/2; reporting "1" costs 3/4.
    let star = rv(&[(1, 4), (1, 4), (1, 2)]);
    assert_eq!(regret(&loss, 0, &star).unwrap(), ratio(1, 4));
    assert_eq!(regret(&loss, 3, &star).unwrap(), rat(0));
}

#[test]
fn bayes_risk_of_abstain_at_uniform_is_one_half() {
    // Direct enumeration: each label costs 2/3 at uniform, abstain 1/2.
    assert_eq!(bayes_risk(&abstain_loss(), &uniform(3)).unwrap(), ratio(1, 2));
    assert_eq!(
        bayes_risk(&zero_one_loss(), &rv(&[(0, 1), (1, 1), (0, 1)])).unwrap(),
        rat(0)
    );
}

#[test]
fn abstain_cells_match_brute_force_argmin_on_grid() {
    // Independent oracle: recompute argmin membership at every
    // denominator-24 grid point and compare with cell membership.
    let loss = abstain_loss();
    let cells = elicited_property(&loss, None).unwrap();
    assert_eq!(cells.reports.len(), 4, "no abstain cell may be dropped");
    let points = grid(3, 24);
    assert_eq!(points.len(), 325);
    for p in &points {
        let best = optimal_reports(&loss, p).unwrap();
        for r in 0..4 {
            let in_cell = cells.cells[r].contains_point(p);
            let is_best = best.contains(&r);
            assert_eq!(in_cell, is_best, "mismatch at {p:?} report {r}");
        }
    }
}

#[test]
fn abstain_center_cell_equals_probability_cap_description() {
    // The elicited abstain cell must coincide with {p : p_y <= 1/2 for
    // all y} by mutual containment.
    let cells = elicited_property(&abstain_loss(), None).unwrap();
    let built = cells.cell("abstain").unwrap();
    let described = abstain_center_cell();
    assert!(described.contains_polyhedron(built).is_ok());
    assert!(built.contains_polyhedron(&described).is_ok());
}

#[test]
fn separating_functional_is_the_loss_row_difference() {
    let loss = abstain_loss();
    // abstain row minus "3" row, entrywise: (1/2,1/2,1/2) - (1,1,0).
    let v = separating_hyperplane(&loss, 3, 2).unwrap();
    assert_eq!(v, rv(&[(-1, 2), (-1, 2), (1, 2)]));
    // Zero-one loss rows "1" minus "2".
    let v01 = separating_hyperplane(&zero_one_loss(), 0, 1).unwrap();
    assert_eq!(v01, rv(&[(-1, 1), (1, 1), (0, 1)]));
    assert!(separating_hyperplane(&loss, 1, 1).is_err());
}

#[test]
fn bayes_risk_is_constant_on_the_abstain_center_cell() {
    // On the cap cell every label report costs 1 - p_y >= 1/2 while
    // abstaining costs exactly 1/2, so the Bayes risk is identically 1/2.
    let loss = abstain_loss();
    match bayes_risk_constant_on(&loss, &abstain_center_cell()).unwrap() {
        ConstancyOutcome::Constant { value } => assert_eq!(value, ratio(1, 2)),
        other => panic!("expected constant, got {other:?}"),
    }
}

#[test]
fn bayes_risk_separates_mean_one_distributions_for_squared_loss() {
    // Flat {E_p Y = 1}: at (0,1,0) the best grid report 1 costs 0; at
    // (1/2,0,1/2) every report r costs r^2/2 + (r-2)^2/2 >= 1 with
    // equality at r = 1.
    let loss = squared_grid_loss();
    let mut flat_region = Polyhedron::standard_simplex(3);
    flat_region.add_eq(Constraint::new(rv(&[(0, 1), (1, 1), (2, 1)]), rat(1)));
    match bayes_risk_constant_on(&loss, &flat_region).unwrap() {
        ConstancyOutcome::Witness { p_low, p_high, low, high } => {
            assert_eq!(low, rat(0));
            assert_eq!(high, rat(1));
            assert!(flat_region.contains_point(&p_low));
            assert!(flat_region.contains_point(&p_high));
            assert_eq!(bayes_risk(&loss, &p_low).unwrap(), rat(0));
            assert_eq!(bayes_risk(&loss, &p_high).unwrap(), rat(1));
        }
        other => panic!("expected witness pair, got {other:?}"),
    }
    // A single point is trivially constant.
    let mut point_region = Polyhedron::standard_simplex(3);
    point_region.add_eq(Constraint::new(rv(&[(1, 1), (0, 1), (0, 1)]), rat(1)));
    assert!(matches!(
        bayes_risk_constant_on(&loss, &point_region).unwrap(),
        ConstancyOutcome::Constant { .. }
    ));
}

// ---------------------------------------------------------------------------
// Flat anchors
// ---------------------------------------------------------------------------

#[test]
fn mean_one_flat_is_the_expected_segment() {
    // zeros{y - 1} over outcomes {0,1,2}: solving q1 + 2 q2 = 1 against
    // the simplex gives the segment from (1/2,0,1/2) to (0,1,0).
    let flat = Flat::new(3, vec![rv(&[(-1, 1), (0, 1), (1, 1)])]).unwrap();
    let poly = flat_polyhedron(&flat);
    let mut verts = poly.vertices().unwrap();
    verts.sort();
    assert_eq!(
        verts,
        vec![rv(&[(0, 1), (1, 1), (0, 1)]), rv(&[(1, 2), (0, 1), (1, 2)])]
    );
    // Empty presentation: the whole simplex.
    let full = Flat::new(3, vec![]).unwrap();
    assert_eq!(flat_polyhedron(&full).vertices().unwrap().len(), 3);
}

#[test]
fn half_level_line_is_certified_inside_the_abstain_cell() {
    // zeros{(-1,-1,1)} = {q3 = 1/2} on the simplex; its endpoints
    // (1/2,0,1/2) and (0,1/2,1/2) satisfy every cap constraint.
    let flat = Flat::new(3, vec![rv(&[(-1, 1), (-1, 1), (1, 1)])]).unwrap();
    let star = rv(&[(1, 4), (1, 4), (1, 2)]);
    assert!(certify_flat(&flat, &star, &abstain_center_cell())
        .unwrap()
        .is_ok());
}

#[test]
fn lines_through_uniform_leave_the_abstain_cell() {
    // The diagonal {q1 = q2} reaches (0,0,1), which violates the cap.
    let flat = Flat::new(3, vec![rv(&[(1, 1), (-1, 1), (0, 1)])]).unwrap();
    let outcome = certify_flat(&flat, &uniform(3), &abstain_center_cell()).unwrap();
    let violation = outcome.unwrap_err();
    assert!(flat_polyhedron(&flat).contains_point(&violation.point));
    assert!(!abstain_center_cell().contains_point(&violation.point));
}

#[test]
fn maximal_flat_dimensions_for_the_abstain_cell() {
    let cell = abstain_center_cell();
    // Through uniform: the cell meets the simplex boundary only at three
    // isolated points, none collinear with uniform, so no chord exists.
    let at_uniform = max_flat_dimension(&uniform(3), &cell).unwrap();
    assert_eq!(at_uniform.dimension, 0);
    assert_eq!(at_uniform.status, SearchStatus::CertifiedExhaustive);
    // Through star: the feasible subspace is 1-dimensional and the line
    // {q3 = 1/2} realizes it.
    let star = rv(&[(1, 4), (1, 4), (1, 2)]);
    let at_star = max_flat_dimension(&star, &cell).unwrap();
    assert_eq!(at_star.dimension, 1);
    assert_eq!(at_star.status, SearchStatus::CertifiedExhaustive);
    assert!(certify_flat(&at_star.witness, &star, &cell).unwrap().is_ok());
    // The whole simplex admits the full 2-dimensional flat.
    let simplex = Polyhedron::standard_simplex(3);
    let full = max_flat_dimension(&uniform(3), &simplex).unwrap();
    assert_eq!(full.dimension, 2);
    assert_eq!(full.status, SearchStatus::CertifiedExhaustive);
}

#[test]
fn sliver_cell_chord_is_found() {
    // Cell conv{(0,1/2,1/2),(0,1/4,3/4),(1/2,0,1/2)} with interior point
    // p = (1/4,3/16,9/16). Hand solution: the chord from (1/2,0,1/2) to
    // (0,3/8,5/8) in direction (-4,3,1) passes through p and stays in the
    // cell, while no facet-normal kernel direction does.
    let mut cell = Polyhedron::standard_simplex(3);
    cell.add_le(Constraint::new(rv(&[(0, 1), (0, 1), (-1, 1)]), ratio(-1, 2)));
    cell.add_le(Constraint::new(rv(&[(-1, 1), (-2, 1), (0, 1)]), ratio(-1, 2)));
    let p = rv(&[(1, 4), (3, 16), (9, 16)]);
    assert!(cell.contains_point(&p));
    let found = max_flat_dimension(&p, &cell).unwrap();
    assert_eq!(found.dimension, 1);
    assert_eq!(found.status, SearchStatus::CertifiedExhaustive);
    assert!(certify_flat(&found.witness, &p, &cell).unwrap().is_ok());
}

#[test]
fn weather_snow_cell_has_no_chord_through_the_probe() {
    // Outcomes (rainy, sunny, snowy); snow cell {p_sunny <= 3/4,
    // p_rainy <= p_snowy}. Probe (1/8, 37/50, 27/200). Hand argument: any
    // chord must combine a p_rainy = 0 endpoint with a p_sunny = 0
    // endpoint, forcing either p_sunny < 37/50 or p_rainy < 1/8.
    let mut cell = Polyhedron::standard_simplex(3);
    cell.add_le(Constraint::new(rv(&[(0, 1), (1, 1), (0, 1)]), ratio(3, 4)));
    cell.add_le(Constraint::new(rv(&[(1, 1), (0, 1), (-1, 1)]), rat(0)));
    let q = rv(&[(1, 8), (37, 50), (27, 200)]);
    assert!(cell.contains_point(&q));
    let found = max_flat_dimension(&q, &cell).unwrap();
    assert_eq!(found.dimension, 0);
    assert_eq!(found.status, SearchStatus::CertifiedExhaustive);
}

#[test]
fn boundary_probe_restricts_to_the_support_face() {
    // p = (1/2,1/2,0) inside the full simplex: within its support edge the
    // largest flat through p is the edge itself, a 1-flat.
    let p = rv(&[(1, 2), (1, 2), (0, 1)]);
    let simplex = Polyhedron::standard_simplex(3);
    let found = max_flat_dimension(&p, &simplex).unwrap();
    assert_eq!(found.dimension, 1);
    assert_eq!(found.status, SearchStatus::CertifiedExhaustive);
    // The witness must pin the off-support coordinate to zero.
    let poly = flat_polyhedron(&found.witness);
    match poly.maximize(&rv(&[(0, 1), (0, 1), (1, 1)])) {
        LpOutcome::Optimal { value, .. } => assert!(value.is_zero()),
        other => panic!("expected optimal, got {other:?}"),
    }
}
