//! Bundled example documents, available to the command line by name in
//! place of a file path.
//!
//! - `abstain3`: three-way classification with an abstain report costing
//!   one half.
//! - `mode3`: plain three-way zero-one classification (the mode).
//! - `variance-support3`: squared loss over the report grid
//!   {0, 1/4, ..., 2} with outcomes {0, 1, 2}; its elicited property is
//!   the mean rounded to the grid, the stepping stone to the variance
//!   bound.
//! - `weather`: a three-outcome forecasting property whose cells are
//!   deliberately not elicitable by any discrete loss.
//! - `hinge-binary`: the two-sided hinge surrogate with a sign link,
//!   targeting the binary mode loss.

use crate::io::{
    CellDoc, CellsDoc, InequalityDoc, LinkDoc, LinkRegionDoc, LossDoc, PieceDoc, SurrogateDoc,
};
use crate::rational::{format_rational, ratio};

/// Names accepted wherever a document path is expected.
pub const NAMES: [&str; 5] = [
    "abstain3",
    "weather",
    "mode3",
    "variance-support3",
    "hinge-binary",
];

/// Bundled loss document, if `name` names one.
pub fn loss_doc(name: &str) -> Option<LossDoc> {
    match name {
        "abstain3" => Some(LossDoc {
            reports: vec!["1".into(), "2".into(), "3".into(), "abstain".into()],
            outcomes: vec!["1".into(), "2".into(), "3".into()],
            matrix: vec![
                vec!["0".into(), "1".into(), "1".into()],
                vec!["1".into(), "0".into(), "1".into()],
                vec!["1".into(), "1".into(), "0".into()],
                vec!["1/2".into(), "1/2".into(), "1/2".into()],
            ],
        }),
        "mode3" => Some(LossDoc {
            reports: vec!["1".into(), "2".into(), "3".into()],
            outcomes: vec!["1".into(), "2".into(), "3".into()],
            matrix: vec![
                vec!["0".into(), "1".into(), "1".into()],
                vec!["1".into(), "0".into(), "1".into()],
                vec!["1".into(), "1".into(), "0".into()],
            ],
        }),
        "variance-support3" => {
            let grid: Vec<_> = (0..=8).map(|k| ratio(k, 4)).collect();
            let outcomes: Vec<_> = (0..=2).map(|y| ratio(y, 1)).collect();
            Some(LossDoc {
                reports: grid.iter().map(format_rational).collect(),
                outcomes: outcomes.iter().map(format_rational).collect(),
                matrix: grid
                    .iter()
                    .map(|r| {
                        outcomes
                            .iter()
                            .map(|y| {
                                let d = r - y;
                                format_rational(&(&d * &d))
                            })
                            .collect()
                    })
                    .collect(),
            })
        }
        // The binary mode loss is the target of the hinge example.
        "hinge-binary" => Some(LossDoc {
            reports: vec!["neg".into(), "pos".into()],
            outcomes: vec!["neg".into(), "pos".into()],
            matrix: vec![
                vec!["0".into(), "1".into()],
                vec!["1".into(), "0".into()],
            ],
        }),
        _ => None,
    }
}

/// Bundled cells document, if `name` names one.
pub fn cells_doc(name: &str) -> Option<CellsDoc> {
    match name {
        "weather" => Some(CellsDoc {
            outcomes: vec!["rainy".into(), "sunny".into(), "snowy".into()],
            cells: vec![
                CellDoc {
                    report: "sunny".into(),
                    inequalities: vec![InequalityDoc {
                        normal: vec!["0".into(), "-1".into(), "0".into()],
                        offset: "-3/4".into(),
                    }],
                },
                CellDoc {
                    report: "rainy".into(),
                    inequalities: vec![
                        InequalityDoc {
                            normal: vec!["0".into(), "1".into(), "0".into()],
                            offset: "3/4".into(),
                        },
                        InequalityDoc {
                            normal: vec!["-1".into(), "0".into(), "1".into()],
                            offset: "0".into(),
                        },
                    ],
                },
                CellDoc {
                    report: "snowy".into(),
                    inequalities: vec![
                        InequalityDoc {
                            normal: vec!["0".into(), "1".into(), "0".into()],
                            offset: "3/4".into(),
                        },
                        InequalityDoc {
                            normal: vec!["1".into(), "0".into(), "-1".into()],
                            offset: "0".into(),
                        },
                    ],
                },
            ],
            restriction: None,
        }),
        _ => None,
    }
}

/// Bundled surrogate document, if `name` names one.
pub fn surrogate_doc(name: &str) -> Option<SurrogateDoc> {
    match name {
        "hinge-binary" => Some(SurrogateDoc {
            dim: 1,
            outcomes: vec!["neg".into(), "pos".into()],
            pieces: vec![
                vec![
                    PieceDoc {
                        gradient: vec!["1".into()],
                        intercept: "1".into(),
                    },
                    PieceDoc {
                        gradient: vec!["0".into()],
                        intercept: "0".into(),
                    },
                ],
                vec![
                    PieceDoc {
                        gradient: vec!["-1".into()],
                        intercept: "1".into(),
                    },
                    PieceDoc {
                        gradient: vec!["0".into()],
                        intercept: "0".into(),
                    },
                ],
            ],
        }),
        _ => None,
    }
}

/// Bundled link document, if `name` names one.
pub fn link_doc(name: &str) -> Option<LinkDoc> {
    match name {
        "hinge-binary" => Some(LinkDoc {
            dim: 1,
            regions: vec![LinkRegionDoc {
                inequalities: vec![InequalityDoc {
                    normal: vec!["-1".into()],
                    offset: "0".into(),
                }],
                report: "pos".into(),
            }],
            default: "neg".into(),
        }),
        _ => None,
    }
}
