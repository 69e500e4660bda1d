//! Polling and the layered structure of complex bodies.
//!
//! A body's position inside a complex is not decreed; it is the sum of the
//! assessments given by the complex's leaf members. Records arrive in a
//! line-oriented text format, one `evaluator,subject,dimension,value` record
//! per line, with values confined to [-100, +100] and zero reserved for
//! "subject unknown to this evaluator". An evaluator who files no record for
//! a subject contributes exactly zero, so obscurity and indifference weigh
//! the same — which is what lets a nobody and a notorious figure sit at the
//! same distance from the center for opposite reasons.
//!
//! Summation is performed in sorted-evaluator-id order. That fixes the
//! floating-point result bit for bit regardless of record order or any
//! future parallel split.

use std::collections::{BTreeMap, BTreeSet};

use crate::body::ComplexBody;
use crate::error::{Error, Result};
use crate::vector::AssessmentVector;

/// Poll value bounds (inclusive).
pub const POLL_MIN: f64 = -100.0;
pub const POLL_MAX: f64 = 100.0;

/// One evaluator's assessment of one subject along one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PollRecord {
    pub evaluator_id: String,
    pub subject_id: String,
    pub dimension_index: usize,
    /// Assessment in [-100, +100]; 0 means "unknown to this evaluator".
    pub value: f64,
}

impl PollRecord {
    pub fn new(
        evaluator_id: impl Into<String>,
        subject_id: impl Into<String>,
        dimension_index: usize,
        value: f64,
    ) -> Result<Self> {
        let evaluator_id = evaluator_id.into();
        let subject_id = subject_id.into();
        if evaluator_id.is_empty() || subject_id.is_empty() {
            return Err(Error::InvalidParameter {
                name: "poll record".into(),
                reason: "evaluator and subject ids must not be empty".into(),
            });
        }
        if !value.is_finite() {
            return Err(Error::NonFinite {
                quantity: "poll value".into(),
            });
        }
        if !(POLL_MIN..=POLL_MAX).contains(&value) {
            return Err(Error::OutOfRange {
                quantity: "poll value".into(),
                value,
                min: POLL_MIN,
                max: POLL_MAX,
            });
        }
        Ok(Self {
            evaluator_id,
            subject_id,
            dimension_index,
            value,
        })
    }
}

/// Where a body sits relative to a complex's surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerClass {
    /// Assessment magnitude in (0, R]: inside the bulk.
    Ordinary,
    /// Magnitude in (R, R + ΔR]: the thin public layer at the surface.
    OrdinaryPublic,
    /// Magnitude beyond R + ΔR: outstanding, visible from outside.
    OutstandingPublic,
}

impl std::fmt::Display for LayerClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            LayerClass::Ordinary => "ordinary",
            LayerClass::OrdinaryPublic => "ordinary_public",
            LayerClass::OutstandingPublic => "outstanding_public",
        };
        f.write_str(s)
    }
}

/// Transitive leaf members of `complex`, sorted and deduplicated.
///
/// A member id that names another complex in `registry` is descended into;
/// anything else is a leaf. Leaves shared through diamond-shaped nesting
/// count once. Errors on membership cycles and on complexes with no leaves.
pub fn leaf_members(complex: &ComplexBody, registry: &[ComplexBody]) -> Result<Vec<String>> {
    let by_id: BTreeMap<&str, &ComplexBody> =
        registry.iter().map(|c| (c.id.as_str(), c)).collect();
    let mut leaves = BTreeSet::new();
    let mut path = Vec::new();
    collect_leaves(complex, &by_id, &mut path, &mut leaves)?;
    if leaves.is_empty() {
        return Err(Error::EmptyComplex {
            complex: complex.id.clone(),
        });
    }
    Ok(leaves.into_iter().collect())
}

fn collect_leaves(
    complex: &ComplexBody,
    by_id: &BTreeMap<&str, &ComplexBody>,
    path: &mut Vec<String>,
    leaves: &mut BTreeSet<String>,
) -> Result<()> {
    if path.iter().any(|p| p == &complex.id) {
        return Err(Error::MembershipCycle {
            complex: complex.id.clone(),
        });
    }
    path.push(complex.id.clone());
    for member in &complex.members {
        match by_id.get(member.as_str()) {
            Some(sub) => collect_leaves(sub, by_id, path, leaves)?,
            None => {
                leaves.insert(member.clone());
            }
        }
    }
    path.pop();
    Ok(())
}

/// Radius of a complex under the default rule: the count of transitively
/// contained leaf bodies.
pub fn radius(complex: &ComplexBody, registry: &[ComplexBody]) -> Result<f64> {
    Ok(leaf_members(complex, registry)?.len() as f64)
}

/// Sums the assessments of `subject` over the leaf evaluators of `complex`.
///
/// Every evaluator appearing in `records` must be a leaf of the complex, and
/// at most one record may exist per (evaluator, subject, dimension). Leaves
/// without a record contribute zero. The result has `dimension` coordinates.
pub fn aggregate_assessment(
    records: &[PollRecord],
    subject: &str,
    complex: &ComplexBody,
    registry: &[ComplexBody],
    dimension: usize,
) -> Result<AssessmentVector> {
    if dimension == 0 {
        return Err(Error::InvalidParameter {
            name: "dimension".into(),
            reason: "must be at least 1".into(),
        });
    }
    let leaves = leaf_members(complex, registry)?;
    let leaf_set: BTreeSet<&str> = leaves.iter().map(|s| s.as_str()).collect();

    let mut seen = BTreeSet::new();
    for r in records {
        if !(POLL_MIN..=POLL_MAX).contains(&r.value) || !r.value.is_finite() {
            return Err(Error::OutOfRange {
                quantity: format!("poll value by `{}`", r.evaluator_id),
                value: r.value,
                min: POLL_MIN,
                max: POLL_MAX,
            });
        }
        if !seen.insert((
            r.evaluator_id.as_str(),
            r.subject_id.as_str(),
            r.dimension_index,
        )) {
            return Err(Error::DuplicatePollRecord {
                evaluator: r.evaluator_id.clone(),
                subject: r.subject_id.clone(),
                dimension: r.dimension_index,
            });
        }
        if !leaf_set.contains(r.evaluator_id.as_str()) {
            return Err(Error::EvaluatorOutsideComplex {
                evaluator: r.evaluator_id.clone(),
                complex: complex.id.clone(),
            });
        }
    }

    // Index the subject's records by evaluator, then walk evaluators in
    // sorted order so the summation order is fixed.
    let mut by_evaluator: BTreeMap<&str, Vec<&PollRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.subject_id == subject) {
        if r.dimension_index >= dimension {
            return Err(Error::OutOfRange {
                quantity: format!("dimension index of record by `{}`", r.evaluator_id),
                value: r.dimension_index as f64,
                min: 0.0,
                max: (dimension - 1) as f64,
            });
        }
        by_evaluator
            .entry(r.evaluator_id.as_str())
            .or_default()
            .push(r);
    }

    let mut coords = vec![0.0; dimension];
    for leaf in &leaves {
        if let Some(rs) = by_evaluator.get(leaf.as_str()) {
            for r in rs {
                coords[r.dimension_index] += r.value;
            }
        }
    }
    AssessmentVector::new(coords)
}

/// Assigns an assessment magnitude to its layer. Boundaries close the
/// lower class: magnitude R is still `Ordinary`, R + ΔR still
/// `OrdinaryPublic`.
pub fn classify_layer(magnitude: f64, complex: &ComplexBody) -> Result<LayerClass> {
    if !magnitude.is_finite() {
        return Err(Error::NonFinite {
            quantity: "assessment magnitude".into(),
        });
    }
    if magnitude < 0.0 {
        return Err(Error::OutOfRange {
            quantity: "assessment magnitude".into(),
            value: magnitude,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    if magnitude <= complex.radius {
        Ok(LayerClass::Ordinary)
    } else if magnitude <= complex.radius + complex.layer_thickness {
        Ok(LayerClass::OrdinaryPublic)
    } else {
        Ok(LayerClass::OutstandingPublic)
    }
}

/// Parses the poll record text format.
///
/// One record per line: `evaluator_id,subject_id,dimension_index,value`.
/// Blank lines and lines starting with `#` are skipped; whitespace around
/// fields is tolerated. Errors carry the 1-based line number.
pub fn parse_poll_records(text: &str) -> Result<Vec<PollRecord>> {
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected `evaluator_id,subject_id,dimension_index,value`, found {} fields",
                    fields.len()
                ),
            });
        }
        let dimension_index: usize = fields[2].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("dimension index `{}` is not a nonnegative integer", fields[2]),
        })?;
        let value: f64 = fields[3].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("value `{}` is not a number", fields[3]),
        })?;
        let record =
            PollRecord::new(fields[0], fields[1], dimension_index, value).map_err(|e| {
                Error::Parse {
                    line: line_no,
                    message: e.to_string(),
                }
            })?;
        records.push(record);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(coords: &[f64]) -> AssessmentVector {
        AssessmentVector::new(coords.to_vec()).unwrap()
    }

    fn complex(id: &str, members: &[&str], radius: f64, dr: f64) -> ComplexBody {
        ComplexBody {
            id: id.into(),
            members: members.iter().map(|s| s.to_string()).collect(),
            radius,
            layer_thickness: dr,
            center: v(&[0.0]),
            mass: 1.0,
        }
    }

    fn rec(e: &str, s: &str, d: usize, val: f64) -> PollRecord {
        PollRecord::new(e, s, d, val).unwrap()
    }

    #[test]
    fn aggregate_three_unit_votes() {
        let c = complex("c", &["e1", "e2", "e3"], 3.0, 0.1);
        let records = vec![
            rec("e1", "s", 0, 1.0),
            rec("e2", "s", 0, 1.0),
            rec("e3", "s", 0, 1.0),
        ];
        let a = aggregate_assessment(&records, "s", &c, &[], 1).unwrap();
        assert_eq!(a.as_slice(), &[3.0]);
    }

    #[test]
    fn aggregate_no_records_is_zero() {
        let c = complex("c", &["e1", "e2"], 2.0, 0.1);
        let a = aggregate_assessment(&[], "s", &c, &[], 3).unwrap();
        assert_eq!(a.as_slice(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn aggregate_mixed_signs() {
        let c = complex("c", &["e1", "e2", "e3"], 3.0, 0.1);
        let records = vec![
            rec("e1", "s", 0, 90.0),
            rec("e2", "s", 0, -90.0),
            rec("e3", "s", 0, 50.0),
        ];
        let a = aggregate_assessment(&records, "s", &c, &[], 1).unwrap();
        assert_eq!(a.as_slice(), &[50.0]);
    }

    #[test]
    fn aggregate_duplicate_record_rejected() {
        let c = complex("c", &["e1"], 1.0, 0.1);
        let records = vec![rec("e1", "s", 0, 1.0), rec("e1", "s", 0, 2.0)];
        let e = aggregate_assessment(&records, "s", &c, &[], 1).unwrap_err();
        assert!(matches!(e, Error::DuplicatePollRecord { .. }));
    }

    #[test]
    fn aggregate_outside_evaluator_rejected() {
        let c = complex("c", &["e1"], 1.0, 0.1);
        let records = vec![rec("stranger", "s", 0, 1.0)];
        let e = aggregate_assessment(&records, "s", &c, &[], 1).unwrap_err();
        assert!(matches!(e, Error::EvaluatorOutsideComplex { .. }));
    }

    #[test]
    fn radius_counts_transitive_leaves() {
        let leafy = complex("leafy", &["a"], 1.0, 0.1);
        assert_eq!(radius(&leafy, &[]).unwrap(), 1.0);

        let left = complex("left", &["a", "b"], 2.0, 0.1);
        let right = complex("right", &["c", "d", "e", "f"], 4.0, 0.1);
        let top = complex("top", &["left", "right"], 6.0, 0.1);
        assert_eq!(radius(&top, &[left, right]).unwrap(), 6.0);
    }

    #[test]
    fn radius_cycle_detected() {
        let a = complex("a", &["b"], 1.0, 0.1);
        let b = complex("b", &["a"], 1.0, 0.1);
        let e = radius(&a, &[a.clone(), b]).unwrap_err();
        assert!(matches!(e, Error::MembershipCycle { .. }));
    }

    #[test]
    fn radius_empty_complex_rejected() {
        let c = complex("c", &[], 1.0, 0.1);
        let e = radius(&c, &[]).unwrap_err();
        assert!(matches!(e, Error::EmptyComplex { .. }));
    }

    #[test]
    fn shared_leaf_counts_once() {
        let left = complex("left", &["shared", "a"], 2.0, 0.1);
        let right = complex("right", &["shared", "b"], 2.0, 0.1);
        let top = complex("top", &["left", "right"], 3.0, 0.1);
        assert_eq!(radius(&top, &[left, right]).unwrap(), 3.0);
    }

    #[test]
    fn classify_layer_boundaries() {
        let c = complex("c", &["a"], 10.0, 1.0);
        assert_eq!(classify_layer(5.0, &c).unwrap(), LayerClass::Ordinary);
        assert_eq!(classify_layer(10.0, &c).unwrap(), LayerClass::Ordinary);
        assert_eq!(
            classify_layer(10.5, &c).unwrap(),
            LayerClass::OrdinaryPublic
        );
        assert_eq!(
            classify_layer(11.0, &c).unwrap(),
            LayerClass::OrdinaryPublic
        );
        assert_eq!(
            classify_layer(11.0001, &c).unwrap(),
            LayerClass::OutstandingPublic
        );
        assert!(classify_layer(-1.0, &c).is_err());
    }

    #[test]
    fn all_extreme_votes_reach_hundred_r() {
        // Ten leaves all rating +100: the aggregate hits 100 * R exactly.
        let members: Vec<String> = (0..10).map(|i| format!("e{i:02}")).collect();
        let refs: Vec<&str> = members.iter().map(|s| s.as_str()).collect();
        let c = complex("c", &refs, 10.0, 0.5);
        let records: Vec<PollRecord> =
            members.iter().map(|m| rec(m, "s", 0, 100.0)).collect();
        let a = aggregate_assessment(&records, "s", &c, &[], 1).unwrap();
        assert_eq!(a.as_slice(), &[1000.0]);
        assert_eq!(radius(&c, &[]).unwrap(), 10.0);
    }

    #[test]
    fn parse_poll_records_roundtrip() {
        let text = "\
# headline comment
e1, s, 0, 90
e2,s,0,-90

e3,s,1,50.5
";
        let records = parse_poll_records(text).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[0], rec("e1", "s", 0, 90.0));
        assert_eq!(records[2].dimension_index, 1);
        assert_eq!(records[2].value, 50.5);
    }

    #[test]
    fn parse_rejects_out_of_range_value() {
        let e = parse_poll_records("e1,s,0,150").unwrap_err();
        match e {
            Error::Parse { line, message } => {
                assert_eq!(line, 1);
                assert!(message.contains("[-100, 100]"), "message: {message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        assert!(parse_poll_records("e1,s,0").is_err());
        assert!(parse_poll_records("e1,s,zero,1").is_err());
        assert!(parse_poll_records("e1,s,0,abc").is_err());
    }

    // Brute-force oracle: sum the matching records directly, sorted by
    // evaluator id, with no hierarchy machinery involved.
    fn flat_oracle(records: &[PollRecord], subject: &str, dimension: usize) -> Vec<f64> {
        let mut sorted: Vec<&PollRecord> =
            records.iter().filter(|r| r.subject_id == subject).collect();
        sorted.sort_by(|a, b| a.evaluator_id.cmp(&b.evaluator_id));
        let mut coords = vec![0.0; dimension];
        for r in sorted {
            coords[r.dimension_index] += r.value;
        }
        coords
    }

    proptest! {
        // Integer-valued assessments keep the sums exact, so partition
        // additivity can be asserted with `==`.
        #[test]
        fn additive_over_partitions(
            votes in proptest::collection::vec((-100i32..=100, 0usize..3), 2..60),
            split in 1usize..59,
        ) {
            let n_eval = votes.len();
            let split = split.min(n_eval - 1).max(1);
            let mut records = Vec::new();
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (i, (val, dim)) in votes.iter().enumerate() {
                let id = format!("e{i:03}");
                records.push(rec(&id, "s", *dim, *val as f64));
                if i < split { left.push(id) } else { right.push(id) }
            }
            let lrefs: Vec<&str> = left.iter().map(|s| s.as_str()).collect();
            let rrefs: Vec<&str> = right.iter().map(|s| s.as_str()).collect();
            let lc = complex("lc", &lrefs, lrefs.len() as f64, 0.1);
            let rc = complex("rc", &rrefs, rrefs.len() as f64, 0.1);
            let top = complex("top", &["lc", "rc"], n_eval as f64, 0.1);
            let registry = vec![lc.clone(), rc.clone()];

            let whole = aggregate_assessment(&records, "s", &top, &registry, 3).unwrap();
            let lrecs: Vec<PollRecord> = records.iter()
                .filter(|r| left.contains(&r.evaluator_id)).cloned().collect();
            let rrecs: Vec<PollRecord> = records.iter()
                .filter(|r| right.contains(&r.evaluator_id)).cloned().collect();
            let la = aggregate_assessment(&lrecs, "s", &lc, &[], 3).unwrap();
            let ra = aggregate_assessment(&rrecs, "s", &rc, &[], 3).unwrap();

            let oracle = flat_oracle(&records, "s", 3);
            prop_assert_eq!(whole.as_slice(), oracle.as_slice());
            let recombined = la.add(&ra);
            prop_assert_eq!(recombined.as_slice(), whole.as_slice());
        }

        #[test]
        fn classify_covers_half_line(mag in 0.0f64..1e12, r in 0.1f64..1e6, frac in 0.001f64..0.1) {
            let c = complex("c", &["a"], r, r * frac);
            // Total: every nonnegative magnitude lands in exactly one class.
            let class = classify_layer(mag, &c).unwrap();
            let expected = if mag <= r {
                LayerClass::Ordinary
            } else if mag <= r + r * frac {
                LayerClass::OrdinaryPublic
            } else {
                LayerClass::OutstandingPublic
            };
            prop_assert_eq!(class, expected);
        }
    }
}
