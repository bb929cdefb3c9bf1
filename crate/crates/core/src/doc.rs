//! Ring documents in, analysis reports out (both JSON).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ExtensionField;
use crate::linalg::Subspace;
use crate::parse::{parse_element_expr, parse_series_expr, parse_tower};
use crate::ring::{FractionalIdeal, GsrSpec, RingModel, DEFAULT_DEGREE_CAP};
use crate::scalar::BaseField;
use crate::series::TruncSeries;
use crate::typeseq::{compare_with_gsr, type_sequence, BoundRow, Classification};
use crate::verify::{run_suite_with_generators, CheckResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseSpec {
    /// `"Q"`.
    Named(String),
    Prime { prime: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerLevel {
    pub name: String,
    pub poly: String,
}

/// `"full"` or a list of element expressions spanning the space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Keyword(String),
    Span(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GsrDoc {
    #[serde(rename = "N")]
    pub conductor: usize,
    /// Degrees absent from the map carry the zero space, except degree 0,
    /// which defaults to `k`.
    #[serde(default)]
    pub spaces: BTreeMap<usize, SpaceSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum RingSpec {
    Gsr(GsrDoc),
    Generators(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default, deny_unknown_fields)]
pub struct Options {
    pub max_degree_cap: usize,
    pub emit_gsr: bool,
    pub emit_duals: bool,
    pub suite: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_degree_cap: DEFAULT_DEGREE_CAP,
            emit_gsr: false,
            emit_duals: false,
            suite: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDocument {
    pub base: BaseSpec,
    #[serde(default)]
    pub tower: Vec<TowerLevel>,
    pub ring: RingSpec,
    #[serde(default)]
    pub options: Options,
}

impl RingDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn base_field(&self) -> Result<BaseField> {
        match &self.base {
            BaseSpec::Named(q) if q == "Q" => Ok(BaseField::Rationals),
            BaseSpec::Named(other) => Err(Error::Document(format!(
                "base must be \"Q\" or {{\"prime\": p}}, got \"{other}\""
            ))),
            BaseSpec::Prime { prime } => BaseField::prime(*prime),
        }
    }

    pub fn field(&self) -> Result<Arc<ExtensionField>> {
        let base = self.base_field().map_err(Error::at("base field"))?;
        let tower = self.tower.iter().map(|l| (l.name.as_str(), l.poly.as_str()));
        Ok(Arc::new(parse_tower(base, tower).map_err(Error::at("field tower"))?))
    }

    /// The field, the ring and (for generated rings) the parsed generators.
    pub fn build(&self) -> Result<LoadedRing> {
        let field = self.field()?;
        let cap = self.options.max_degree_cap;
        match &self.ring {
            RingSpec::Gsr(g) => {
                let spec = gsr_spec(&field, g).map_err(Error::at("GSR spaces"))?;
                let ring = RingModel::build_gsr(&spec).map_err(Error::at("GSR ring"))?;
                Ok(LoadedRing {
                    field,
                    ring,
                    generators: None,
                })
            }
            RingSpec::Generators(texts) => {
                let gens = texts
                    .iter()
                    .map(|t| parse_series_expr(t, &field, cap))
                    .collect::<Result<Vec<_>>>()
                    .map_err(Error::at("generator"))?;
                let ring = RingModel::build_generated(field.clone(), &gens, cap)
                    .map_err(Error::at("generated ring"))?;
                Ok(LoadedRing {
                    field,
                    ring,
                    generators: Some(gens),
                })
            }
        }
    }
}

fn gsr_spec(field: &Arc<ExtensionField>, g: &GsrDoc) -> Result<GsrSpec> {
    let n = field.degree();
    let mut spaces = vec![Subspace::zero(field.base(), n); g.conductor];
    if let Some(v0) = spaces.first_mut() {
        *v0 = field.k_line();
    }
    for (&degree, spec) in &g.spaces {
        if degree >= g.conductor {
            return Err(Error::DegreeOutOfRange {
                degree,
                conductor: g.conductor,
            });
        }
        spaces[degree] = match spec {
            SpaceSpec::Keyword(k) if k == "full" => field.full_space(),
            SpaceSpec::Keyword(k) => {
                return Err(Error::Document(format!(
                    "space at degree {degree} must be \"full\" or a list, got \"{k}\""
                )))
            }
            SpaceSpec::Span(elems) => {
                let vecs = elems
                    .iter()
                    .map(|e| parse_element_expr(e, field))
                    .collect::<Result<Vec<_>>>()?;
                Subspace::span(field.base(), n, vecs)?
            }
        };
    }
    Ok(GsrSpec {
        field: field.clone(),
        spaces,
    })
}

#[derive(Debug, Clone)]
pub struct LoadedRing {
    pub field: Arc<ExtensionField>,
    pub ring: RingModel,
    pub generators: Option<Vec<TruncSeries>>,
}

// ------------------------------------------------------------- report

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSummary {
    pub base: String,
    pub degree: usize,
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupSummary {
    pub s_list: Vec<usize>,
    pub gaps: Vec<usize>,
    pub c: usize,
    pub r: usize,
    pub l: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lengths {
    /// `ℓ_R(R̄/R)`.
    pub closure_over_ring: usize,
    /// `ℓ_R(R/C)`.
    pub ring_over_conductor: usize,
}

/// A fractional ideal printed as the k-span of `elements` plus
/// `X^full_from K[[X]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrintedIdeal {
    pub index: usize,
    pub dim: usize,
    pub elements: Vec<String>,
    pub full_from: usize,
}

impl PrintedIdeal {
    fn new(index: usize, f: &FractionalIdeal<'_>) -> Self {
        PrintedIdeal {
            index,
            dim: f.dim(),
            elements: f.lower_basis().iter().map(TruncSeries::to_string).collect(),
            full_from: f.full_from(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum PrintedSpace {
    Full(&'static str),
    Span(Vec<String>),
}

pub fn print_space(field: &ExtensionField, v: &Subspace) -> PrintedSpace {
    if v.is_full() {
        PrintedSpace::Full("full")
    } else {
        PrintedSpace::Span(v.rows().iter().map(|r| field.format(r)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingSummary {
    #[serde(rename = "N")]
    pub conductor: usize,
    pub semigroup: SemigroupSummary,
    pub n_list: Vec<usize>,
    pub type_sequence: Vec<usize>,
    pub cm_type: usize,
    pub lengths: Lengths,
    pub bounds: Vec<BoundRow>,
    pub classification: Classification,
    /// Nonzero leading spaces `V_R(i)` below the conductor.
    pub leading_spaces: BTreeMap<usize, PrintedSpace>,
}

impl RingSummary {
    pub fn new(ring: &RingModel) -> Result<Self> {
        let rep = type_sequence(ring)?;
        let s = ring.semigroup();
        let leading_spaces = (0..ring.conductor())
            .filter(|&i| !ring.filtration_space(i).is_zero())
            .map(|i| (i, print_space(ring.field(), &ring.filtration_space(i))))
            .collect();
        Ok(RingSummary {
            conductor: ring.conductor(),
            semigroup: SemigroupSummary {
                s_list: s.s_list.clone(),
                gaps: s.gaps.clone(),
                c: s.c,
                r: s.r,
                l: s.l,
            },
            n_list: rep.n_list,
            type_sequence: rep.t_list,
            cm_type: rep.cm_type,
            lengths: Lengths {
                closure_over_ring: rep.ell_over,
                ring_over_conductor: rep.ell_rc,
            },
            bounds: rep.bounds,
            classification: rep.classification,
            leading_spaces,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonVerdicts {
    pub same_type_sequence: bool,
    pub same_cm_type: bool,
    pub ring_almost_gorenstein: bool,
    pub gsr_almost_gorenstein: bool,
    pub biconditional_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GsrSection {
    pub ring: RingSummary,
    pub comparison: ComparisonVerdicts,
}

/// Field order here is the output order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub input: RingDocument,
    pub field: FieldSummary,
    pub ring: RingSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duals: Option<Vec<PrintedIdeal>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub associated_gsr: Option<GsrSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Vec<CheckResult>>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// The dual chain `𝔞_i^{-1}` for `i = 0..=r+l`, printed.
pub fn printed_duals(ring: &RingModel) -> Vec<PrintedIdeal> {
    ring.dual_chain()
        .duals
        .iter()
        .enumerate()
        .map(|(i, d)| PrintedIdeal::new(i, d))
        .collect()
}

pub fn gsr_section(ring: &RingModel) -> Result<GsrSection> {
    let cmp = compare_with_gsr(ring)?;
    let gsr = crate::typeseq::associated_gsr(ring)?;
    Ok(GsrSection {
        ring: RingSummary::new(&gsr)?,
        comparison: ComparisonVerdicts {
            same_type_sequence: cmp.same_type_sequence,
            same_cm_type: cmp.same_cm_type,
            ring_almost_gorenstein: cmp.ring_almost_gorenstein,
            gsr_almost_gorenstein: cmp.gsr_almost_gorenstein,
            biconditional_holds: cmp.biconditional_holds,
        },
    })
}

/// Full pipeline: field, ring, type sequence, classification, then the
/// optional sections the document asks for.
pub fn analyze(doc: &RingDocument) -> Result<AnalysisReport> {
    let loaded = doc.build()?;
    let ring = &loaded.ring;
    let field = &loaded.field;
    let summary = RingSummary::new(ring).map_err(Error::at("type sequence"))?;
    let opts = &doc.options;
    Ok(AnalysisReport {
        input: doc.clone(),
        field: FieldSummary {
            base: field.base().to_string(),
            degree: field.degree(),
            basis: (0..field.degree()).map(|i| field.basis_label(i)).collect(),
        },
        ring: summary,
        duals: opts.emit_duals.then(|| printed_duals(ring)),
        associated_gsr: if opts.emit_gsr {
            Some(gsr_section(ring).map_err(Error::at("associated GSR"))?)
        } else {
            None
        },
        suite: opts
            .suite
            .then(|| run_suite_with_generators(ring, loaded.generators.as_deref()).checks),
    })
}
