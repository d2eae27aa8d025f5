//! Frozen expected values for the dimension bounds, loss recovery, and the
//! surrogate machinery. Every number here was derived by hand before the
//! corresponding operation was implemented.

use surrodim::bounds::{
    bayes_risk_bound, condition_v_interior, flat_lower_bound, fsd_lower_bound, AppliedRule,
    BayesRiskBoundOutcome,
};
use surrodim::cells::{CellProvenance, PropertyCells};
use surrodim::distribution::uniform;
use surrodim::flats::{certify_flat, Flat, SearchStatus};
use surrodim::linalg::dot;
use surrodim::loss::{elicited_property, DiscreteLoss};
use surrodim::polyhedron::{Constraint, Polyhedron};
use surrodim::rational::{rat, ratio, Rational};
use surrodim::recover::{recover_loss, RecoverOutcome};
use surrodim::surrogate::{
    extract_witness_flat, surrogate_level_set, surrogate_minimizers, Link, LinkRegion,
    PolyhedralSurrogate,
};

fn rv(entries: &[(i64, i64)]) -> Vec<Rational> {
    entries.iter().map(|&(n, d)| ratio(n, d)).collect()
}

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

/// The weather description: outcomes (rainy, sunny, snowy), reports
/// declared sunny, rainy, snowy.
fn weather_cells() -> PropertyCells {
    let base = Polyhedron::standard_simplex(3);
    let mut sunny = base.clone();
    sunny.add_le(Constraint::new(rv(&[(0, 1), (-1, 1), (0, 1)]), ratio(-3, 4)));
    let mut rainy = base.clone();
    rainy.add_le(Constraint::new(rv(&[(0, 1), (1, 1), (0, 1)]), ratio(3, 4)));
    rainy.add_le(Constraint::new(rv(&[(-1, 1), (0, 1), (1, 1)]), rat(0)));
    let mut snowy = base.clone();
    snowy.add_le(Constraint::new(rv(&[(0, 1), (1, 1), (0, 1)]), ratio(3, 4)));
    snowy.add_le(Constraint::new(rv(&[(1, 1), (0, 1), (-1, 1)]), rat(0)));
    PropertyCells::new_user(
        vec!["rainy".into(), "sunny".into(), "snowy".into()],
        vec![
            ("sunny".into(), sunny),
            ("rainy".into(), rainy),
            ("snowy".into(), snowy),
        ],
        None,
    )
    .unwrap()
}

/// Hinge loss over outcomes (neg, pos): L(u, neg) = max(0, 1 + u),
/// L(u, pos) = max(0, 1 - u).
fn hinge() -> PolyhedralSurrogate {
    PolyhedralSurrogate::new(
        1,
        vec!["neg".into(), "pos".into()],
        vec![
            vec![(rv(&[(1, 1)]), rat(1)), (rv(&[(0, 1)]), rat(0))],
            vec![(rv(&[(-1, 1)]), rat(1)), (rv(&[(0, 1)]), rat(0))],
        ],
    )
    .unwrap()
}

/// Sign link: report "pos" when u >= 0, otherwise the default "neg".
fn sign_link() -> Link {
    Link::new(
        1,
        vec![LinkRegion {
            inequalities: vec![Constraint::new(rv(&[(-1, 1)]), rat(0))],
            report: "pos".into(),
        }],
        "neg".into(),
    )
    .unwrap()
}

fn mode2_cells() -> PropertyCells {
    elicited_property(
        &DiscreteLoss::new(
            vec!["neg".into(), "pos".into()],
            vec!["neg".into(), "pos".into()],
            vec![rv(&[(0, 1), (1, 1)]), rv(&[(1, 1), (0, 1)])],
        )
        .unwrap(),
        None,
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// Bound routing and values
// ---------------------------------------------------------------------------

#[test]
fn abstain_bounds_at_uniform_are_two_and_zero() {
    let cells = elicited_property(&abstain_loss(), None).unwrap();
    let report = flat_lower_bound(&cells, &uniform(3), "abstain").unwrap();
    // Uniform lies in every cap constraint's interior; the feasible
    // subspace is the full tangent plane, so the subspace bound vanishes,
    // while no chord exists and the flat bound is 3 - 1 - 0 = 2.
    let flat = report.flat.expect("flat bound must apply");
    assert_eq!(flat.bound, 2);
    assert_eq!(flat.status, SearchStatus::CertifiedExhaustive);
    assert_eq!(report.fsd_bound, 0);
    assert_eq!(report.applied_rule, AppliedRule::SingleValued);
}

#[test]
fn abstain_bounds_at_star_are_one_and_one() {
    let cells = elicited_property(&abstain_loss(), None).unwrap();
    let star = rv(&[(1, 4), (1, 4), (1, 2)]);
    let report = flat_lower_bound(&cells, &star, "abstain").unwrap();
    let flat = report.flat.expect("flat bound must apply");
    assert_eq!(flat.bound, 1);
    assert_eq!(report.fsd_bound, 1);
    // Star also lies in the "3" cell, so the property is not single-valued
    // there; the elicitable relative-interior route applies instead.
    assert_eq!(report.applied_rule, AppliedRule::ElicitableRelativeInterior);
}

#[test]
fn weather_bound_at_probe_is_two_by_the_single_valued_route() {
    let cells = weather_cells();
    let q = rv(&[(1, 8), (37, 50), (27, 200)]);
    let report = flat_lower_bound(&cells, &q, "snowy").unwrap();
    let flat = report.flat.expect("flat bound must apply");
    assert_eq!(flat.bound, 2);
    assert_eq!(flat.status, SearchStatus::CertifiedExhaustive);
    assert_eq!(report.applied_rule, AppliedRule::SingleValued);
    // The snow cell is full-dimensional around the probe, so the subspace
    // bound gives nothing.
    assert_eq!(report.fsd_bound, 0);
}

#[test]
fn weather_triple_point_routes_to_neither_rule() {
    // At (1/8, 3/4, 1/8) all three cells meet and the description is not
    // elicitable, so neither route applies.
    let cells = weather_cells();
    let triple = rv(&[(1, 8), (3, 4), (1, 8)]);
    let report = flat_lower_bound(&cells, &triple, "snowy").unwrap();
    assert!(report.flat.is_none());
    assert_eq!(report.applied_rule, AppliedRule::Neither);
}

#[test]
fn subspace_bound_matches_hand_counts() {
    let cells = elicited_property(&abstain_loss(), None).unwrap();
    assert_eq!(fsd_lower_bound(&cells, &uniform(3), "abstain").unwrap(), 0);
    let star = rv(&[(1, 4), (1, 4), (1, 2)]);
    assert_eq!(fsd_lower_bound(&cells, &star, "abstain").unwrap(), 1);
    assert_eq!(fsd_lower_bound(&cells, &star, "3").unwrap(), 1);
}

// ---------------------------------------------------------------------------
// Interior-origin condition
// ---------------------------------------------------------------------------

#[test]
fn origin_is_interior_for_centered_mean_but_not_for_raw_mean() {
    let simplex = Polyhedron::standard_simplex(3);
    // V = y - 1 over outcomes {0,1,2}: E_p V ranges over [-1, 1].
    let centered = Flat::new(3, vec![rv(&[(-1, 1), (0, 1), (1, 1)])]).unwrap();
    assert!(condition_v_interior(&centered, &simplex).unwrap());
    // V = y: E_p V ranges over [0, 2], touching zero only at the boundary.
    let raw = Flat::new(3, vec![rv(&[(0, 1), (1, 1), (2, 1)])]).unwrap();
    assert!(!condition_v_interior(&raw, &simplex).unwrap());
    // Empty presentation: vacuously interior.
    let empty = Flat::new(3, vec![]).unwrap();
    assert!(condition_v_interior(&empty, &simplex).unwrap());
}

// ---------------------------------------------------------------------------
// Bayes-risk bound
// ---------------------------------------------------------------------------

#[test]
fn squared_loss_mean_flat_earns_a_bayes_risk_bound_of_two() {
    // Hand construction: the probe lands at (5/12, 1/6, 5/12); only the
    // report 1 is optimal there; its equal-risk slice through the flat is
    // a segment with strictly positive coordinates, so every chord test is
    // infeasible and the bound d + 1 = 2 stands.
    let loss = squared_grid_loss();
    let centered = Flat::new(3, vec![rv(&[(-1, 1), (0, 1), (1, 1)])]).unwrap();
    match bayes_risk_bound(&loss, &centered, None).unwrap() {
        BayesRiskBoundOutcome::Bound { bound, probe } => {
            assert_eq!(bound, 2);
            assert!(dot(&rv(&[(-1, 1), (0, 1), (1, 1)]), &probe) == rat(0));
            assert!(probe.iter().all(|x| x > &rat(0)));
        }
        other => panic!("expected a bound, got {other:?}"),
    }
}

#[test]
fn raw_mean_flat_fails_both_hypotheses() {
    // zeros{y} is the single vertex (1,0,0): the image of the simplex
    // under V touches zero only on its boundary, and the Bayes risk is
    // constant on a point.
    let loss = squared_grid_loss();
    let raw = Flat::new(3, vec![rv(&[(0, 1), (1, 1), (2, 1)])]).unwrap();
    match bayes_risk_bound(&loss, &raw, None).unwrap() {
        BayesRiskBoundOutcome::NotApplicable { failed } => {
            assert!(failed.contains(&"origin-not-interior-to-flat-image".to_string()));
            assert!(failed.contains(&"bayes-risk-constant-on-flat".to_string()));
        }
        other => panic!("expected not-applicable, got {other:?}"),
    }
}

#[test]
fn constant_loss_is_rejected_by_the_constancy_hypothesis() {
    // A loss that ignores the report leaves the Bayes risk constant on
    // every flat; the bound must refuse rather than report 2.
    let constant = DiscreteLoss::new(
        vec!["a".into(), "b".into()],
        vec!["0".into(), "1".into(), "2".into()],
        vec![rv(&[(1, 1), (1, 1), (1, 1)]), rv(&[(1, 1), (1, 1), (1, 1)])],
    )
    .unwrap();
    let centered = Flat::new(3, vec![rv(&[(-1, 1), (0, 1), (1, 1)])]).unwrap();
    match bayes_risk_bound(&constant, &centered, None).unwrap() {
        BayesRiskBoundOutcome::NotApplicable { failed } => {
            assert!(failed.contains(&"bayes-risk-constant-on-flat".to_string()));
        }
        other => panic!("expected not-applicable, got {other:?}"),
    }
}

// ---------------------------------------------------------------------------
// Loss recovery
// ---------------------------------------------------------------------------

#[test]
fn abstain_cells_recover_an_eliciting_loss() {
    let cells = elicited_property(&abstain_loss(), None).unwrap();
    match recover_loss(&cells).unwrap() {
        RecoverOutcome::Found(found) => {
            let round = elicited_property(&found, None).unwrap();
            assert_eq!(round.reports, cells.reports);
            for (a, b) in round.cells.iter().zip(cells.cells.iter()) {
                assert!(a.contains_polyhedron(b).is_ok());
                assert!(b.contains_polyhedron(a).is_ok());
            }
        }
        other => panic!("expected a recovered loss, got {other:?}"),
    }
}

#[test]
fn weather_cells_are_certified_not_elicitable() {
    // Hand derivation: the two tie vertices (1/4,3/4,0) and (1/8,3/4,1/8)
    // force the rainy row onto the line spanned by (-3, 1, -3), which
    // evaluates to zero at the sunny vertex (0, 3/4, 1/4) where rainy must
    // be strictly suboptimal; the first clashing pair is sunny vs rainy.
    match recover_loss(&weather_cells()).unwrap() {
        RecoverOutcome::NotElicitable { report_a, report_b } => {
            let mut pair = vec![report_a, report_b];
            pair.sort();
            assert_eq!(pair, vec!["rainy".to_string(), "sunny".to_string()]);
        }
        other => panic!("expected not elicitable, got {other:?}"),
    }
}

#[test]
fn weather_cells_pass_construction_checks() {
    let cells = weather_cells();
    assert_eq!(cells.provenance, CellProvenance::UserSupplied);
    assert_eq!(cells.reports, vec!["sunny", "rainy", "snowy"]);
    // Membership at the probe: snowy only.
    let q = rv(&[(1, 8), (37, 50), (27, 200)]);
    assert_eq!(cells.reports_at(&q), vec![2]);
}

// ---------------------------------------------------------------------------
// Surrogates and links
// ---------------------------------------------------------------------------

#[test]
fn hinge_minimizers_match_hand_calculus() {
    let hinge = hinge();
    // p = (1/4, 3/4): expected loss has slope -1/2 on (-1,1) and +1/4
    // beyond 1, so the minimum sits exactly at u = 1.
    let m = surrogate_minimizers(&hinge, &rv(&[(1, 4), (3, 4)])).unwrap();
    let mut verts = m.vertices().unwrap();
    verts.sort();
    assert_eq!(verts, vec![rv(&[(1, 1)])]);
    // p = (1/2, 1/2): flat at value 1 on [-1, 1].
    let m2 = surrogate_minimizers(&hinge, &rv(&[(1, 2), (1, 2)])).unwrap();
    let mut verts2 = m2.vertices().unwrap();
    verts2.sort();
    assert_eq!(verts2, vec![rv(&[(-1, 1)]), rv(&[(1, 1)])]);
}

#[test]
fn absolute_loss_median_minimizers() {
    // L(u, y) = |u - y| over outcomes {0, 1}: at p = (1/2, 1/2) any
    // u in [0, 1] is optimal.
    let abs_loss = PolyhedralSurrogate::new(
        1,
        vec!["0".into(), "1".into()],
        vec![
            vec![(rv(&[(1, 1)]), rat(0)), (rv(&[(-1, 1)]), rat(0))],
            vec![(rv(&[(1, 1)]), rat(-1)), (rv(&[(-1, 1)]), rat(1))],
        ],
    )
    .unwrap();
    let m = surrogate_minimizers(&abs_loss, &rv(&[(1, 2), (1, 2)])).unwrap();
    let mut verts = m.vertices().unwrap();
    verts.sort();
    assert_eq!(verts, vec![rv(&[(0, 1)]), rv(&[(1, 1)])]);
    // Level set at the kink u = 1/2: both gradients are forced, pinning
    // p to the fair coin.
    let level = surrogate_level_set(&abs_loss, &rv(&[(1, 2)])).unwrap();
    let mut lverts = level.vertices().unwrap();
    lverts.sort();
    assert_eq!(lverts, vec![rv(&[(1, 2), (1, 2)])]);
}

#[test]
fn hinge_level_set_at_one_is_the_positive_half() {
    let level = surrogate_level_set(&hinge(), &rv(&[(1, 1)])).unwrap();
    let mut verts = level.vertices().unwrap();
    verts.sort();
    assert_eq!(
        verts,
        vec![rv(&[(0, 1), (1, 1)]), rv(&[(1, 2), (1, 2)])]
    );
}

#[test]
fn hinge_witness_flat_at_one_quarter_three_quarters() {
    // Hand solution of the stationarity system: the only convex weight
    // for the pos outcome puts 1/4 on the slope -1 piece, giving the
    // witness functional (1, -1/3).
    let hinge = hinge();
    let p = rv(&[(1, 4), (3, 4)]);
    let flat = extract_witness_flat(&hinge, &rv(&[(1, 1)]), &p).unwrap();
    assert_eq!(flat.functionals, vec![rv(&[(1, 1), (-1, 3)])]);
    let level = surrogate_level_set(&hinge, &rv(&[(1, 1)])).unwrap();
    assert!(certify_flat(&flat, &p, &level).unwrap().is_ok());
}

#[test]
fn sign_link_sends_probes_to_the_expected_reports() {
    let link = sign_link();
    assert_eq!(link.apply(&rv(&[(1, 2)])).unwrap(), "pos");
    assert_eq!(link.apply(&rv(&[(0, 1)])).unwrap(), "pos");
    assert_eq!(link.apply(&rv(&[(-1, 2)])).unwrap(), "neg");
    let _ = mode2_cells();
}
