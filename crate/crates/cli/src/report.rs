//! Serializable report documents. Every rational is a reduced `p/q` string.

use serde::{Deserialize, Serialize};

use fibre_core::config::{Component, CurveConfiguration, FibrePredicates, MultipleFibreConstraints, WintersReport};
use fibre_core::fibre::{FibreReport, FibreTrace};
use fibre_core::invariants::{Correction, SurfaceInvariants};
use fibre_core::orbifold::{classify, delta_degree, Classification, OrbifoldBase};
use fibre_core::pipeline::{ClaimNote, FibreStage, GlobalStage, PipelineReport};
use fibre_core::presets::Preset;
use fibre_core::resolution::{ResolutionTree, TrackedCurve};

pub const SCHEMA: &str = "fibre-report/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document<T> {
    pub schema: String,
    pub command: String,
    pub result: T,
    pub claim_notes: Vec<NoteJson>,
}

impl<T> Document<T> {
    pub fn new(command: &str, result: T, notes: Vec<NoteJson>) -> Self {
        Document {
            schema: SCHEMA.into(),
            command: command.into(),
            result,
            claim_notes: notes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoteJson {
    pub code: String,
    pub message: String,
    pub discrepancy: bool,
}

impl From<&ClaimNote> for NoteJson {
    fn from(n: &ClaimNote) -> Self {
        NoteJson {
            code: n.code.into(),
            message: n.message.clone(),
            discrepancy: n.discrepancy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub id: u32,
    pub mult: u64,
    #[serde(default)]
    pub pa: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_int: Option<i64>,
}

/// Input and output format of a curve configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub components: Vec<ComponentJson>,
    #[serde(default)]
    pub intersections: Vec<(u32, u32, u64)>,
}

impl From<&CurveConfiguration> for ConfigJson {
    fn from(c: &CurveConfiguration) -> Self {
        ConfigJson {
            components: c
                .components()
                .iter()
                .map(|x| ComponentJson {
                    id: x.id,
                    mult: x.mult,
                    pa: x.pa,
                    self_int: x.self_int,
                })
                .collect(),
            intersections: c.edges().collect(),
        }
    }
}

impl ConfigJson {
    pub fn to_configuration(&self) -> Result<CurveConfiguration, fibre_core::config::ConfigError> {
        let comps = self
            .components
            .iter()
            .map(|c| Component {
                id: c.id,
                mult: c.mult,
                pa: c.pa,
                self_int: c.self_int,
            })
            .collect();
        CurveConfiguration::new(comps, self.intersections.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub id: u32,
    pub mult: u64,
    pub sum: u64,
    pub divides: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WintersJson {
    pub pass: bool,
    pub witnesses: Vec<WitnessJson>,
}

impl From<&WintersReport> for WintersJson {
    fn from(w: &WintersReport) -> Self {
        WintersJson {
            pass: w.pass,
            witnesses: w
                .witnesses
                .iter()
                .map(|x| WitnessJson {
                    id: x.id,
                    mult: x.mult,
                    sum: x.sum,
                    divides: x.divides,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicatesJson {
    pub gcd: u64,
    pub min_multiplicity: u64,
    pub connected: bool,
    pub multiple: bool,
    pub c_fibre: bool,
    pub valid_fibration_fibre: bool,
}

impl From<&FibrePredicates> for PredicatesJson {
    fn from(p: &FibrePredicates) -> Self {
        PredicatesJson {
            gcd: p.gcd,
            min_multiplicity: p.min,
            connected: p.connected,
            multiple: p.is_multiple,
            c_fibre: p.is_c_fibre,
            valid_fibration_fibre: p.is_valid_fibration_fibre,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipleOptionJson {
    pub n: u64,
    pub quotient_genus: u64,
}

/// `None` stands for "every multiplicity".
pub fn multiple_options(c: &MultipleFibreConstraints) -> Option<Vec<MultipleOptionJson>> {
    match c {
        MultipleFibreConstraints::AllMultiplicities => None,
        MultipleFibreConstraints::Finite(v) => Some(
            v.iter()
                .map(|o| MultipleOptionJson {
                    n: o.n,
                    quotient_genus: o.quotient_genus,
                })
                .collect(),
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusJson {
    pub configuration: ConfigJson,
    pub genus: i64,
    pub winters: WintersJson,
    pub predicates: PredicatesJson,
    /// Admissible multiple-fibre multiplicities for this genus; absent when unrestricted.
    pub multiple_fibre_options: Option<Vec<MultipleOptionJson>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyJson {
    pub base: String,
    pub degree: String,
    pub classification: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exception_family: Option<String>,
}

pub fn classification_name(c: &Classification) -> &'static str {
    match c {
        Classification::GeneralType => "general-type",
        Classification::Special { .. } => "special",
    }
}

pub fn exception_family(c: &Classification) -> Option<String> {
    match c {
        Classification::Special { family: Some(f) } => Some(f.label().into()),
        _ => None,
    }
}

impl From<&OrbifoldBase> for ClassifyJson {
    fn from(b: &OrbifoldBase) -> Self {
        let c = classify(b);
        ClassifyJson {
            base: b.to_string(),
            degree: delta_degree(b).to_string(),
            classification: classification_name(&c).into(),
            exception_family: exception_family(&c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub center: String,
    pub base: String,
    pub multiplicity: u32,
    pub parity: String,
    pub exceptional: u32,
    pub through: Vec<u32>,
    pub local_branch: String,
    /// Self-intersection of the exceptional curve once every step is done.
    pub e_squared: i64,
    pub d_chi: i64,
    pub d_k2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub id: u32,
    pub kind: String,
    pub base: String,
    pub in_branch: bool,
    pub contacts: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub complete: bool,
    pub multiplicities: Vec<u32>,
    pub steps: Vec<StepJson>,
    pub curves: Vec<CurveJson>,
    pub d_chi: i64,
    pub d_k2: i64,
}

fn curve_json(c: &TrackedCurve) -> CurveJson {
    CurveJson {
        id: c.id,
        kind: match c.kind {
            fibre_core::resolution::CurveKind::FibreLine => "fibre-line".into(),
            fibre_core::resolution::CurveKind::Exceptional => "exceptional".into(),
        },
        base: c.base.to_string(),
        in_branch: c.in_branch,
        contacts: c.contacts,
    }
}

impl From<&ResolutionTree> for TreeJson {
    fn from(t: &ResolutionTree) -> Self {
        let ledger = t.ledger();
        let (d_chi, d_k2) = t.invariant_delta();
        TreeJson {
            complete: t.complete,
            multiplicities: t.multiplicities(),
            steps: t
                .steps
                .iter()
                .map(|s| {
                    let (dc, dk) = fibre_core::resolution::step_invariant_delta(s.multiplicity);
                    StepJson {
                        center: s.center.to_string(),
                        base: s.base.to_string(),
                        multiplicity: s.multiplicity,
                        parity: if s.in_branch { "odd" } else { "even" }.into(),
                        exceptional: s.exceptional_id,
                        through: s.through.clone(),
                        local_branch: fibre_core::resolution::format_local(&s.local_branch),
                        e_squared: ledger.self_int[&s.exceptional_id],
                        d_chi: dc,
                        d_k2: dk,
                    }
                })
                .collect(),
            curves: t.curves.values().map(curve_json).collect(),
            d_chi,
            d_k2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceComponentJson {
    pub id: u32,
    pub kind: String,
    pub mult: u64,
    pub self_int: i64,
    pub in_branch: bool,
    pub contacts: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub components: Vec<TraceComponentJson>,
    pub intersections: Vec<(u32, u32, u64)>,
}

impl From<&FibreTrace> for TraceJson {
    fn from(t: &FibreTrace) -> Self {
        TraceJson {
            components: t
                .components
                .iter()
                .map(|c| TraceComponentJson {
                    id: c.id,
                    kind: match c.kind {
                        fibre_core::resolution::CurveKind::FibreLine => "fibre-line".into(),
                        fibre_core::resolution::CurveKind::Exceptional => "exceptional".into(),
                    },
                    mult: c.mult,
                    self_int: c.self_int,
                    in_branch: c.in_branch,
                    contacts: c.contacts,
                })
                .collect(),
            intersections: t.intersections.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreJson {
    pub base: String,
    pub tracked: bool,
    pub multiplicities: Vec<u32>,
    pub downstairs: TraceJson,
    pub lifted: ConfigJson,
    pub contracted: ConfigJson,
    pub contractions: usize,
    pub genus: i64,
    pub generic_genus: Option<i64>,
    pub genus_matches: Option<bool>,
    pub predicates: PredicatesJson,
    pub winters: WintersJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub central: Option<CentralJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tails: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralJson {
    pub mult: u64,
    pub pa: u32,
}

pub fn fibre_json(f: &FibreStage, tree: &ResolutionTree) -> FibreJson {
    let r: &FibreReport = &f.report;
    FibreJson {
        base: f.base.to_string(),
        tracked: f.tracked,
        multiplicities: tree.steps_over(&f.base).map(|s| s.multiplicity).collect(),
        downstairs: (&f.trace).into(),
        lifted: (&r.lifted).into(),
        contracted: (&r.contracted).into(),
        contractions: r.contractions,
        genus: r.genus,
        generic_genus: r.generic_genus,
        genus_matches: r.genus_matches(),
        predicates: (&r.predicates).into(),
        winters: (&r.winters).into(),
        central: f.central.map(|(mult, pa)| CentralJson { mult, pa }),
        tails: f.tails,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernJson {
    pub chi: i64,
    #[serde(rename = "K2")]
    pub k2: i64,
    pub c2: i64,
}

impl From<&SurfaceInvariants> for ChernJson {
    fn from(s: &SurfaceInvariants) -> Self {
        ChernJson {
            chi: s.chi,
            k2: s.k2,
            c2: s.c2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionJson {
    pub source: String,
    pub d_chi: i64,
    pub d_k2: i64,
}

impl From<&Correction> for CorrectionJson {
    fn from(c: &Correction) -> Self {
        CorrectionJson {
            source: c.source.clone(),
            d_chi: c.d_chi,
            d_k2: c.d_k2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsJson {
    pub chi: i64,
    #[serde(rename = "K2")]
    pub k2: i64,
    pub c2: i64,
    pub minimal: bool,
    pub ample: bool,
    pub simply_connected: Option<bool>,
    pub classification: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exception_family: Option<String>,
    pub orbifold: String,
    pub orbifold_degree: String,
    pub base_change_degree: u32,
    pub bidegree: (u32, u32),
    pub singular_fibre_multiplicities: Vec<u64>,
    pub raw: ChernJson,
    pub contractions: usize,
    pub ledger: Vec<CorrectionJson>,
}

impl From<&GlobalStage> for InvariantsJson {
    fn from(g: &GlobalStage) -> Self {
        let r = &g.invariants.resolved;
        InvariantsJson {
            chi: r.chi,
            k2: r.k2,
            c2: r.c2,
            minimal: g.invariants.minimal,
            ample: g.ampleness.ample,
            simply_connected: g.ampleness.simply_connected,
            classification: classification_name(&g.classification).into(),
            exception_family: exception_family(&g.classification),
            orbifold: g.base_change.orbifold.to_string(),
            orbifold_degree: g.orbifold_degree.to_string(),
            base_change_degree: g.base_change.degree,
            bidegree: g.base_change.bidegree,
            singular_fibre_multiplicities: g.base_change.fibre_multiplicities.clone(),
            raw: (&g.invariants.raw).into(),
            contractions: g.invariants.contractions,
            ledger: r.ledger.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetJson {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrected: Option<bool>,
    pub base_change: u32,
    pub template_mode: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchJson {
    pub equation: String,
    pub bidegree: (u32, u32),
    pub even: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularJson {
    pub complete: bool,
    pub points: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineJson {
    pub preset: PresetJson,
    pub branch: BranchJson,
    pub singular_points: SingularJson,
    pub resolution_mode: String,
    pub resolution: TreeJson,
    pub generic_genus: i64,
    pub fibres: Vec<FibreJson>,
    pub invariants: Option<InvariantsJson>,
}

pub fn preset_json(r: &PipelineReport) -> PresetJson {
    let o = &r.options;
    let mut p = PresetJson {
        id: o.preset.name(),
        alpha: None,
        h: None,
        corrected: None,
        base_change: o.base_change,
        template_mode: o.template_mode,
    };
    match &o.preset {
        Preset::Type1 { alpha } => p.alpha = Some(alpha.to_string()),
        Preset::Type3 { corrected } => p.corrected = Some(*corrected),
        Preset::Type4 { h } => p.h = Some(*h),
        _ => {}
    }
    p
}

impl From<&PipelineReport> for PipelineJson {
    fn from(r: &PipelineReport) -> Self {
        PipelineJson {
            preset: preset_json(r),
            branch: BranchJson {
                equation: r
                    .branch
                    .to_homogeneous_string()
                    .unwrap_or_else(|_| r.branch.to_string()),
                bidegree: r.bidegree,
                even: r.even,
            },
            singular_points: SingularJson {
                complete: r.singular_complete,
                points: r
                    .singular_points
                    .iter()
                    .map(|p| p.to_projective().to_string())
                    .collect(),
            },
            resolution_mode: r.mode.as_str().into(),
            resolution: (&r.tree).into(),
            generic_genus: r.generic_genus,
            fibres: r.fibres.iter().map(|f| fibre_json(f, &r.tree)).collect(),
            invariants: r.global.as_ref().map(Into::into),
        }
    }
}

pub fn notes(r: &PipelineReport) -> Vec<NoteJson> {
    r.notes.iter().map(Into::into).collect()
}
