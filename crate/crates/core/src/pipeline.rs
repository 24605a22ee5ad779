//! End-to-end run over a preset: resolution, fibre lifts, invariants, base orbifold.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::fibre::{assemble_fibre_report, lift_to_double_cover, track_fibre, FibreReport, FibreTrace, LiftedFibre};
use crate::invariants::{
    ampleness_flag, base_change, default_ramification, generic_fibre_genus, resolved_invariants,
    smooth_double_cover_invariants, tree_corrections, Ampleness, BaseChange, ResolvedInvariants,
};
use crate::orbifold::{classify, delta_degree, Classification};
use crate::poly::singular::rational_singular_points;
use crate::poly::{AffinePoint, BiPolynomial, ProjCoord, Rational};
use crate::presets::{even_cusp_template, Preset};
use crate::resolution::{
    canonical_resolve, even_divisor_check, resolve_template, CenterMode, LocalTemplate, ResolutionTree,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Options,
    Branch,
    Evenness,
    SingularPoints,
    Resolution,
    Fibres,
    Invariants,
    BaseChange,
}

impl core::fmt::Display for Stage {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Stage::Options => "options",
            Stage::Branch => "branch",
            Stage::Evenness => "evenness",
            Stage::SingularPoints => "singular-points",
            Stage::Resolution => "resolution",
            Stage::Fibres => "fibres",
            Stage::Invariants => "invariants",
            Stage::BaseChange => "base-change",
        })
    }
}

/// A precondition that stops the run.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{stage}: {message}")]
pub struct PipelineError {
    pub stage: Stage,
    pub message: String,
}

fn fail<E: core::fmt::Display>(stage: Stage) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError {
        stage,
        message: format!("{e}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOptions {
    pub preset: Preset,
    pub base_change: u32,
    pub template_mode: bool,
}

impl PipelineOptions {
    pub fn new(preset: Preset) -> Self {
        PipelineOptions {
            preset,
            base_change: 1,
            template_mode: false,
        }
    }

    pub fn with_base_change(mut self, n: u32) -> Self {
        self.base_change = n;
        self
    }

    pub fn with_template_mode(mut self, on: bool) -> Self {
        self.template_mode = on;
        self
    }
}

/// A comparison between a computed value and the value the construction states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimNote {
    pub code: &'static str,
    pub message: String,
    /// Computed and stated values disagree.
    pub discrepancy: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionMode {
    Auto,
    Explicit,
    Template,
}

impl ResolutionMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ResolutionMode::Auto => "auto",
            ResolutionMode::Explicit => "explicit",
            ResolutionMode::Template => "template",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreStage {
    pub base: ProjCoord,
    pub tracked: bool,
    pub trace: FibreTrace,
    pub lifted: LiftedFibre,
    pub report: FibreReport,
    /// Components of the lifted fibre minus the strict transform of the line,
    /// when that transform is a single component.
    pub tails: Option<usize>,
    pub central: Option<(u64, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalStage {
    pub invariants: ResolvedInvariants,
    pub base_change: BaseChange,
    pub classification: Classification,
    pub orbifold_degree: Rational,
    pub ampleness: Ampleness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineReport {
    pub options: PipelineOptions,
    pub branch: BiPolynomial,
    pub bidegree: (u32, u32),
    pub even: bool,
    pub singular_points: Vec<AffinePoint>,
    pub singular_complete: bool,
    pub mode: ResolutionMode,
    pub tree: ResolutionTree,
    pub fibres: Vec<FibreStage>,
    pub generic_genus: i64,
    pub global: Option<GlobalStage>,
    pub notes: Vec<ClaimNote>,
}

impl PipelineReport {
    pub fn has_discrepancy(&self) -> bool {
        self.notes.iter().any(|n| n.discrepancy)
    }

    pub fn fibre(&self, base: &ProjCoord) -> Option<&FibreStage> {
        self.fibres.iter().find(|f| &f.base == base)
    }
}

fn note(notes: &mut Vec<ClaimNote>, code: &'static str, discrepancy: bool, message: String) {
    notes.push(ClaimNote {
        code,
        message,
        discrepancy,
    });
}

fn tails(trace: &FibreTrace, lifted: &LiftedFibre) -> (Option<usize>, Option<(u64, u32)>) {
    let line = trace.components[0].id;
    let central: Vec<u32> = lifted
        .origin
        .iter()
        .filter(|o| o.downstairs == line)
        .map(|o| o.upstairs)
        .collect();
    let [c] = central[..] else {
        return (None, None);
    };
    let cfg = &lifted.config;
    let comp = cfg.component(c).expect("lifted component");
    let rest: BTreeSet<u32> = cfg.components().iter().map(|x| x.id).filter(|&i| i != c).collect();
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &start in &rest {
        if !seen.insert(start) {
            continue;
        }
        count += 1;
        let mut stack = alloc::vec![start];
        while let Some(a) = stack.pop() {
            for (i, j, _) in cfg.edges() {
                let other = if i == a {
                    j
                } else if j == a {
                    i
                } else {
                    continue;
                };
                if rest.contains(&other) && seen.insert(other) {
                    stack.push(other);
                }
            }
        }
    }
    (Some(count), Some((comp.mult, comp.pa)))
}

pub fn run_pipeline(opts: &PipelineOptions) -> Result<PipelineReport, PipelineError> {
    let mut notes = Vec::new();
    let preset = &opts.preset;
    let n = opts.base_change;
    if n == 0 {
        return Err(PipelineError {
            stage: Stage::Options,
            message: "base-change degree must be positive".into(),
        });
    }
    if opts.template_mode && !matches!(preset, Preset::Even { .. }) {
        return Err(PipelineError {
            stage: Stage::Options,
            message: format!(
                "template mode is only defined for the even family, not {}",
                preset.name()
            ),
        });
    }
    if let Preset::Even { n: 0 } = preset {
        return Err(PipelineError {
            stage: Stage::Options,
            message: "even:n needs n >= 1".into(),
        });
    }

    let branch = preset.branch().map_err(fail(Stage::Branch))?;
    let bidegree = branch.bidegree.expect("presets carry a bidegree");
    let even = even_divisor_check(bidegree.0, bidegree.1);
    if !even {
        match preset {
            Preset::Type3 { .. } => note(
                &mut notes,
                "bidegree-parity",
                true,
                format!(
                    "branch has bidegree {:?}, which is not divisible by two; no double cover exists and global invariants are skipped",
                    bidegree
                ),
            ),
            Preset::Type4 { h } => {
                return Err(PipelineError {
                    stage: Stage::Evenness,
                    message: format!(
                        "type4 with h = {h} is odd: bidegree ({}, {}) is not divisible by two, h must be even",
                        bidegree.0, bidegree.1
                    ),
                })
            }
            _ => {
                return Err(PipelineError {
                    stage: Stage::Evenness,
                    message: format!("bidegree ({}, {}) is not divisible by two", bidegree.0, bidegree.1),
                })
            }
        }
    }
    if let Some(claimed) = preset.claimed_bidegree(n) {
        let computed = (n * bidegree.0, bidegree.1);
        if claimed != computed {
            note(
                &mut notes,
                "bidegree-claim",
                true,
                format!("stated bidegree {claimed:?} after base change of degree {n}, computed {computed:?}"),
            );
        }
    }

    let generic_genus = generic_fibre_genus(&branch).map_err(fail(Stage::Fibres))?;
    if generic_genus != preset.claimed_genus() {
        note(
            &mut notes,
            "genus-claim",
            true,
            format!(
                "stated fibre genus {}, generic fibre of the double cover has genus {generic_genus}",
                preset.claimed_genus()
            ),
        );
    }

    let tracked = preset.tracked_bases();
    let (singular_points, singular_complete, mode, tree) = if opts.template_mode {
        let Preset::Even { n: copies } = preset else {
            unreachable!()
        };
        note(
            &mut notes,
            "template-mode",
            false,
            format!("fibre over [0:1] resolved from one cusp replicated {copies} times; other fibres not resolved"),
        );
        let template = LocalTemplate {
            local: even_cusp_template(),
            copies: *copies,
            base: tracked[0].clone(),
            line_contacts: 0,
        };
        let tree = resolve_template(&template).map_err(fail(Stage::Resolution))?;
        (Vec::new(), false, ResolutionMode::Template, tree)
    } else {
        let sp = rational_singular_points(&branch).map_err(fail(Stage::SingularPoints))?;
        let (mode, centers) = if sp.complete {
            (ResolutionMode::Auto, CenterMode::Auto)
        } else {
            note(
                &mut notes,
                "incomplete-singular-search",
                false,
                format!(
                    "singular locus not certified over the rationals; resolving the {} rational singular points only",
                    sp.points.len()
                ),
            );
            (ResolutionMode::Explicit, CenterMode::Explicit(sp.points.clone()))
        };
        let tree = canonical_resolve(&branch, centers).map_err(fail(Stage::Resolution))?;
        (sp.points, sp.complete, mode, tree)
    };

    let mut bases: Vec<ProjCoord> = tree.lines.keys().cloned().collect();
    for b in &tracked {
        if !bases.contains(b) {
            bases.push(b.clone());
        }
    }
    bases.sort();
    let mut fibres = Vec::new();
    for base in bases {
        let trace = track_fibre(&tree, &base);
        let lifted = lift_to_double_cover(&trace).map_err(fail(Stage::Fibres))?;
        let report = assemble_fibre_report(&lifted.config, Some(generic_genus)).map_err(fail(Stage::Fibres))?;
        let is_tracked = tracked.contains(&base);
        if is_tracked && report.genus != generic_genus {
            note(
                &mut notes,
                "genus-cross-check",
                true,
                format!(
                    "fibre over {base} has arithmetic genus {} but the generic fibre has genus {generic_genus}",
                    report.genus
                ),
            );
        }
        let (tails, central) = tails(&trace, &lifted);
        fibres.push(FibreStage {
            base,
            tracked: is_tracked,
            trace,
            lifted,
            report,
            tails,
            central,
        });
    }

    let global = if !even {
        None
    } else if !singular_complete {
        note(
            &mut notes,
            "invariants-skipped",
            false,
            "global invariants need every singular point resolved".into(),
        );
        None
    } else {
        Some(global_stage(bidegree, n, &tree, &fibres)?)
    };

    Ok(PipelineReport {
        options: opts.clone(),
        branch,
        bidegree,
        even,
        singular_points,
        singular_complete,
        mode,
        tree,
        fibres,
        generic_genus,
        global,
        notes,
    })
}

fn global_stage(
    bidegree: (u32, u32),
    n: u32,
    tree: &ResolutionTree,
    fibres: &[FibreStage],
) -> Result<GlobalStage, PipelineError> {
    let singular: Vec<(ProjCoord, u64)> = fibres
        .iter()
        .filter(|f| tree.lines.contains_key(&f.base))
        .map(|f| (f.base.clone(), f.report.predicates.min))
        .collect();
    let ram = default_ramification(&singular);
    let bc = base_change(bidegree, &singular, n, [&ram[0], &ram[1]]).map_err(fail(Stage::BaseChange))?;
    let raw = smooth_double_cover_invariants(bc.bidegree.0, bc.bidegree.1).map_err(fail(Stage::Invariants))?;
    let mut corrections = Vec::new();
    for sheet in 0..n {
        corrections.extend(tree_corrections(tree, &format!("sheet {}", sheet + 1)));
    }
    let per_sheet: usize = singular
        .iter()
        .map(|(b, _)| fibres.iter().find(|f| &f.base == b).expect("fibre").report.contractions)
        .sum();
    let remaining: usize = fibres
        .iter()
        .map(|f| {
            f.report
                .contracted
                .components()
                .iter()
                .filter(|c| c.pa == 0 && c.self_int == Some(-1))
                .count()
        })
        .sum();
    let invariants = resolved_invariants(&raw, &corrections, per_sheet * n as usize, remaining * n as usize)
        .map_err(fail(Stage::Invariants))?;
    Ok(GlobalStage {
        invariants,
        classification: classify(&bc.orbifold),
        orbifold_degree: delta_degree(&bc.orbifold),
        ampleness: ampleness_flag(bc.bidegree.0, bc.bidegree.1, true),
        base_change: bc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::ExceptionFamily;
    use crate::poly::rat;

    #[test]
    fn type_one_invariants() {
        let r = run_pipeline(&PipelineOptions::new(Preset::type1()).with_base_change(3)).unwrap();
        let g = r.global.as_ref().unwrap();
        let s = &g.invariants.resolved;
        assert_eq!((s.chi, s.k2, s.c2), (5, 10, 50));
        assert!(g.classification.is_general_type());
        assert!(g.invariants.minimal);
        assert!(!r.has_discrepancy());

        let r = run_pipeline(&PipelineOptions::new(Preset::type1()).with_base_change(2)).unwrap();
        let g = r.global.unwrap();
        assert_eq!(g.invariants.resolved.k2, 4);
        assert_eq!(
            g.classification,
            Classification::Special {
                family: Some(ExceptionFamily::FourTwos)
            }
        );
    }

    #[test]
    fn type_two_and_four_fibres() {
        for preset in [Preset::Type2, Preset::Type4 { h: 0 }, Preset::Type4 { h: 2 }] {
            let r = run_pipeline(&PipelineOptions::new(preset)).unwrap();
            for f in r.fibres.iter().filter(|f| f.tracked) {
                assert_eq!(f.report.genus, 2);
                assert!(f.report.predicates.is_c_fibre);
                assert_eq!(f.report.predicates.gcd, 1);
            }
        }
    }

    #[test]
    fn odd_type_four_is_a_precondition() {
        let e = run_pipeline(&PipelineOptions::new(Preset::Type4 { h: 1 })).unwrap_err();
        assert_eq!(e.stage, Stage::Evenness);
        assert!(e.message.contains("h must be even"));
    }

    #[test]
    fn type_three_parity() {
        let r = run_pipeline(&PipelineOptions::new(Preset::Type3 { corrected: false }).with_base_change(2)).unwrap();
        assert!(r.notes.iter().any(|n| n.code == "bidegree-parity" && n.discrepancy));
        assert!(r.global.is_none());
    }

    #[test]
    fn even_template() {
        let r = run_pipeline(&PipelineOptions::new(Preset::Even { n: 4 }).with_template_mode(true)).unwrap();
        assert_eq!(r.generic_genus, 5);
        assert!(r.notes.iter().any(|n| n.code == "genus-claim" && n.discrepancy));
        let f = r.fibre(&ProjCoord::Finite(rat(0))).unwrap();
        assert_eq!(f.report.genus, 5);
        assert_eq!(f.tails, Some(4));
        assert_eq!(f.central, Some((2, 0)));
    }
}
