//! Type sequences, length identities and classification.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{GsrSpec, RingModel};

/// One index of the bounds table: `n_{i-1} ≤ t_i ≤ t·n_{i-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub index: usize,
    pub lower: usize,
    pub t: usize,
    pub upper: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsTable {
    pub rows: Vec<BoundRow>,
    pub all_pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    Regular,
    Gorenstein,
    Kunz,
    AlmostGorenstein,
    MaximalLength,
    Intermediate,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Regular => "regular",
            Label::Gorenstein => "gorenstein",
            Label::Kunz => "kunz",
            Label::AlmostGorenstein => "almost-gorenstein",
            Label::MaximalLength => "maximal-length",
            Label::Intermediate => "intermediate",
        }
    }
}

/// Each class is tested independently; classes overlap (for `t = 1` a ring
/// is Gorenstein, almost Gorenstein and of maximal length at once).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub regular: bool,
    pub gorenstein: bool,
    pub kunz: bool,
    pub almost_gorenstein: bool,
    pub maximal_length: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub label: Label,
    pub flags: Flags,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeSequenceReport {
    /// `(t_1, ..., t_{r+l})`.
    pub t_list: Vec<usize>,
    /// `(n_0, ..., n_{r+l-1})`.
    pub n_list: Vec<usize>,
    /// The Cohen-Macaulay type `t = t_1` (1 for `R = K[[X]]`).
    pub cm_type: usize,
    /// `ℓ_R(R̄/R)`.
    pub ell_over: usize,
    /// `ℓ_R(R/𝔞_{r+l})`, i.e. `ℓ_R(R/C)`.
    pub ell_rc: usize,
    pub bounds: Vec<BoundRow>,
    pub classification: Classification,
}

/// `t_i = ℓ_R(𝔞_i^{-1}/𝔞_{i-1}^{-1})` along the dual chain, plus lengths,
/// bounds and classification. Fails if the bounds or the two routes to
/// the classification disagree, which would mean a computation is wrong.
pub fn type_sequence(ring: &RingModel) -> Result<TypeSequenceReport> {
    let chain = ring.dual_chain();
    let t_list: Vec<usize> = chain
        .duals
        .windows(2)
        .map(|w| w[1].dim() - w[0].dim())
        .collect();
    let n_list = ring.n_list().to_vec();
    let unit = ring.unit_ideal();
    let ell_over = ring.length(&unit, &ring.closure_ideal())?;
    let conductor = chain.ideals.last().expect("𝔞_0 always exists");
    let ell_rc = ring.length(conductor, &unit)?;
    let cm_type = t_list.first().copied().unwrap_or(1);
    let mut report = TypeSequenceReport {
        t_list,
        n_list,
        cm_type,
        ell_over,
        ell_rc,
        bounds: Vec::new(),
        classification: Classification {
            label: Label::Intermediate,
            flags: Flags {
                regular: false,
                gorenstein: false,
                kunz: false,
                almost_gorenstein: false,
                maximal_length: false,
            },
        },
    };
    let table = bounds_check(&report);
    if !table.all_pass {
        let bad: Vec<_> = table.rows.iter().filter(|r| !r.pass).map(|r| r.index).collect();
        return Err(Error::Inconsistency {
            check: "type-sequence-bounds",
            detail: format!("n_(i-1) <= t_i <= t*n_(i-1) fails at indices {bad:?}"),
        });
    }
    report.bounds = table.rows;
    report.classification = classify(&report)?;
    Ok(report)
}

/// Per-index check of `n_{i-1} ≤ t_i ≤ t·n_{i-1}`.
pub fn bounds_check(report: &TypeSequenceReport) -> BoundsTable {
    let t = report.cm_type;
    let rows: Vec<BoundRow> = report
        .t_list
        .iter()
        .zip(&report.n_list)
        .enumerate()
        .map(|(i, (&ti, &n_prev))| BoundRow {
            index: i + 1,
            lower: n_prev,
            t: ti,
            upper: t * n_prev,
            pass: n_prev <= ti && ti <= t * n_prev,
        })
        .collect();
    let all_pass = rows.iter().all(|r| r.pass) && report.t_list.len() == report.n_list.len();
    BoundsTable { rows, all_pass }
}

/// Classification from the shape of the type sequence, cross-checked
/// against the length equalities
/// `ℓ(R̄/R) = ℓ(R/𝔞_{r+l}) + t - 1` (almost Gorenstein) and
/// `ℓ(R̄/R) = t·ℓ(R/𝔞_{r+l})` (maximal length).
pub fn classify(report: &TypeSequenceReport) -> Result<Classification> {
    let t = report.cm_type;
    let ts = &report.t_list;
    let ns = &report.n_list;
    if ts.len() != ns.len() {
        return Err(Error::Inconsistency {
            check: "classification",
            detail: format!("{} type-sequence entries but {} n-values", ts.len(), ns.len()),
        });
    }

    let ag_pattern = ts.iter().zip(ns).skip(1).all(|(ti, ni)| ti == ni);
    let max_pattern = ts.iter().zip(ns).all(|(&ti, &ni)| ti == t * ni);

    let ag_length = report.ell_over + 1 == report.ell_rc + t;
    let max_length = report.ell_over == t * report.ell_rc;

    if ag_pattern != ag_length {
        return Err(Error::Inconsistency {
            check: "almost-gorenstein-two-routes",
            detail: format!(
                "type-sequence pattern says {ag_pattern}, length equality says {ag_length} (t.s. {ts:?}, n {ns:?})"
            ),
        });
    }
    if max_pattern != max_length {
        return Err(Error::Inconsistency {
            check: "maximal-length-two-routes",
            detail: format!(
                "type-sequence pattern says {max_pattern}, length equality says {max_length} (t.s. {ts:?}, n {ns:?})"
            ),
        });
    }

    let flags = Flags {
        regular: ts.is_empty(),
        gorenstein: ag_pattern && t == 1,
        kunz: ag_pattern && t == 2,
        almost_gorenstein: ag_pattern,
        maximal_length: max_pattern,
    };
    let label = if flags.regular {
        Label::Regular
    } else if flags.gorenstein {
        Label::Gorenstein
    } else if flags.kunz {
        Label::Kunz
    } else if flags.almost_gorenstein {
        Label::AlmostGorenstein
    } else if flags.maximal_length {
        Label::MaximalLength
    } else {
        Label::Intermediate
    };
    Ok(Classification { label, flags })
}

/// `R̃ = Σ V_R(i) X^i`, the generalized semigroup ring with the same
/// leading spaces as `R`.
pub fn associated_gsr(ring: &RingModel) -> Result<RingModel> {
    let spec = GsrSpec {
        field: ring.field().clone(),
        spaces: ring.filtration().to_vec(),
    };
    RingModel::build_gsr(&spec)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GsrComparison {
    pub ring: TypeSequenceReport,
    pub gsr: TypeSequenceReport,
    pub same_type_sequence: bool,
    pub same_cm_type: bool,
    pub ring_almost_gorenstein: bool,
    pub gsr_almost_gorenstein: bool,
    /// `R` almost Gorenstein ⇔ (`R̃` almost Gorenstein and equal types).
    pub biconditional_holds: bool,
}

/// Compares `R` with its associated GSR. A violated biconditional is
/// reported as an error.
pub fn compare_with_gsr(ring: &RingModel) -> Result<GsrComparison> {
    let gsr = associated_gsr(ring)?;
    let a = type_sequence(ring)?;
    let b = type_sequence(&gsr)?;
    let ring_ag = a.classification.flags.almost_gorenstein;
    let gsr_ag = b.classification.flags.almost_gorenstein;
    let same_cm_type = a.cm_type == b.cm_type;
    let biconditional_holds = ring_ag == (gsr_ag && same_cm_type);
    let cmp = GsrComparison {
        same_type_sequence: a.t_list == b.t_list,
        same_cm_type,
        ring_almost_gorenstein: ring_ag,
        gsr_almost_gorenstein: gsr_ag,
        biconditional_holds,
        ring: a,
        gsr: b,
    };
    if !biconditional_holds {
        return Err(Error::Inconsistency {
            check: "associated-gsr-almost-gorenstein",
            detail: format!(
                "R almost Gorenstein = {ring_ag}, GSR almost Gorenstein = {gsr_ag}, types {} vs {}",
                cmp.ring.cm_type, cmp.gsr.cm_type
            ),
        });
    }
    Ok(cmp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::tests::{example1, example2, example3};
    use crate::ring::DEFAULT_DEGREE_CAP;
    use crate::scalar::BaseField;
    use crate::series::TruncSeries;
    use crate::field::ExtensionField;
    use std::sync::Arc;

    fn f7_ring(gens: &[&[(usize, i64)]]) -> RingModel {
        let f = BaseField::Prime(7);
        let k = Arc::new(ExtensionField::trivial(f));
        let gens: Vec<TruncSeries> = gens
            .iter()
            .map(|terms| {
                let mut s = TruncSeries::zero(k.clone(), 64);
                for &(d, c) in *terms {
                    s.set_coeff(d, &[f.from_i64(c)]).unwrap();
                }
                s
            })
            .collect();
        RingModel::build_generated(k, &gens, DEFAULT_DEGREE_CAP).unwrap()
    }

    #[test]
    fn example1_type_sequence() {
        let r = example1();
        let rep = type_sequence(&r).unwrap();
        assert_eq!(rep.t_list, vec![3, 4, 4, 2]);
        assert_eq!(rep.n_list, vec![1, 4, 4, 2]);
        assert_eq!(rep.cm_type, 3);
        assert_eq!(rep.ell_over, 13);
        assert_eq!(rep.ell_rc, 11);
        assert_eq!(rep.classification.label, Label::AlmostGorenstein);
        assert!(!rep.classification.flags.maximal_length);
        let row = &rep.bounds[1];
        assert_eq!((row.lower, row.t, row.upper), (4, 4, 12));
    }

    #[test]
    fn example2_type_sequence() {
        let rep = type_sequence(&example2()).unwrap();
        assert_eq!(rep.t_list, vec![5, 5, 5]);
        assert_eq!(rep.classification.label, Label::MaximalLength);
        assert!(!rep.classification.flags.almost_gorenstein);
    }

    #[test]
    fn example3_type_sequence() {
        let rep = type_sequence(&example3()).unwrap();
        // The maximal ideal's dual is one dimension short of the published
        // listing: X^7 - 2X^9 is not in it, see below.
        assert_eq!(rep.t_list, vec![2, 2, 2, 1, 1, 1, 3, 1, 1, 2, 1]);
        assert_eq!(rep.t_list.iter().sum::<usize>(), rep.ell_over);
        assert_eq!(rep.classification.label, Label::Intermediate);
        let row = &rep.bounds[6];
        assert_eq!((row.index, row.lower, row.t, row.upper), (7, 2, 3, 4));
    }

    #[test]
    fn cusp_is_gorenstein_with_all_flags() {
        let r = f7_ring(&[&[(2, 1)], &[(3, 1)]]);
        let rep = type_sequence(&r).unwrap();
        assert_eq!(rep.t_list, vec![1]);
        assert_eq!(rep.n_list, vec![1]);
        let f = rep.classification.flags;
        assert_eq!(rep.classification.label, Label::Gorenstein);
        assert!(f.gorenstein && f.almost_gorenstein && f.maximal_length && !f.kunz);
    }

    #[test]
    fn gorenstein_rings_meet_the_lower_bound() {
        // ⟨3,4⟩... symmetric: Gorenstein.
        let r = f7_ring(&[&[(3, 1)], &[(4, 1)]]);
        let rep = type_sequence(&r).unwrap();
        assert_eq!(rep.cm_type, 1);
        assert!(rep.bounds.iter().all(|b| b.t == b.lower));
    }

    #[test]
    fn kunz_ring() {
        // ⟨3,4,5⟩ has type 2 and is almost symmetric.
        let r = f7_ring(&[&[(3, 1)], &[(4, 1)], &[(5, 1)]]);
        let rep = type_sequence(&r).unwrap();
        assert_eq!(rep.t_list, vec![2]);
        assert_eq!(rep.classification.label, Label::Kunz);
    }

    #[test]
    fn regular_ring() {
        let k = Arc::new(ExtensionField::trivial(BaseField::Rationals));
        let r = RingModel::build_gsr(&GsrSpec { field: k, spaces: vec![] }).unwrap();
        let rep = type_sequence(&r).unwrap();
        assert!(rep.t_list.is_empty());
        assert_eq!(rep.classification.label, Label::Regular);
        assert!(rep.classification.flags.gorenstein);
    }

    #[test]
    fn classify_detects_inconsistent_reports() {
        let mut rep = type_sequence(&example1()).unwrap();
        rep.ell_over += 1;
        assert!(matches!(classify(&rep), Err(Error::Inconsistency { .. })));
    }

    #[test]
    fn associated_gsr_of_f7_example() {
        let r = f7_ring(&[&[(4, 1)], &[(6, 1), (7, 1)], &[(10, 1)]]);
        let cmp = compare_with_gsr(&r).unwrap();
        assert_eq!(cmp.ring.t_list, vec![2, 2, 1, 1]);
        assert_eq!(cmp.gsr.t_list, vec![3, 1, 1, 1]);
        assert!(!cmp.ring_almost_gorenstein);
        assert!(cmp.gsr_almost_gorenstein);
        assert!(!cmp.same_cm_type);
        let gsr = associated_gsr(&r).unwrap();
        let s4_6_11_13 = f7_ring(&[&[(4, 1)], &[(6, 1)], &[(11, 1)], &[(13, 1)]]);
        assert_eq!(gsr, s4_6_11_13);
    }

    #[test]
    fn associated_gsr_is_idempotent_on_gsrs() {
        let r = example1();
        assert_eq!(associated_gsr(&r).unwrap(), r);
        let cmp = compare_with_gsr(&r).unwrap();
        assert_eq!(cmp.ring, cmp.gsr);
    }

    #[test]
    fn example3_matches_its_gsr() {
        let r = example3();
        let cmp = compare_with_gsr(&r).unwrap();
        assert_eq!(cmp.gsr.t_list, vec![3, 1, 2, 1, 1, 1, 3, 1, 1, 2, 1]);
        assert!(!cmp.same_type_sequence);
        assert_eq!(cmp.ring.t_list[2..], cmp.gsr.t_list[2..]);
        let gsr = associated_gsr(&r).unwrap();
        let k = r.field().clone();
        let q = |v| BaseField::Rationals.from_i64(v);
        let mono = |d: usize, re: i64, im: i64| {
            let mut s = TruncSeries::zero(k.clone(), 64);
            s.set_coeff(d, &[q(re), q(im)]).unwrap();
            s
        };
        let expected = RingModel::build_generated(
            k.clone(),
            &[mono(3, 0, 1), mono(5, 1, 0), mono(10, 0, 1), mono(17, 0, 1)],
            DEFAULT_DEGREE_CAP,
        )
        .unwrap();
        assert_eq!(gsr, expected);
    }

    #[test]
    fn example3_maximal_dual_excludes_x7_minus_2x9() {
        let r = example3();
        let k = r.field().clone();
        let q = |v| BaseField::Rationals.from_i64(v);
        let ser = |t: &[(usize, i64, i64)]| {
            let mut s = TruncSeries::zero(k.clone(), 40);
            for &(d, a, b) in t {
                s.set_coeff(d, &[q(a), q(b)]).unwrap();
            }
            s
        };
        let x = ser(&[(7, 1, 0), (9, -2, 0)]);
        let g = ser(&[(3, 0, 1), (4, 1, 0)]);
        // i X^12 would have to be a leading term, but V_R(12) is real.
        assert!(!r.unit_ideal().contains(&x.mul(&g).unwrap()).unwrap());
        let m_dual = r.colon_in_closure(&r.ideal_a(1).unwrap()).unwrap();
        assert!(!m_dual.contains(&x).unwrap());
        let a2_dual = r.colon_in_closure(&r.ideal_a(2).unwrap()).unwrap();
        assert!(a2_dual.contains(&x).unwrap());
        assert_eq!(m_dual.full_from(), 12);
    }
}
