//! Following one fibre through the resolution and up to the double cover.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::config::{Component, ConfigError, CurveConfiguration, FibrePredicates, WintersReport};
use crate::poly::{BaseChart, BiPolynomial, Chart, FibreChart, PolyError, ProjCoord, Rational, Var};
use crate::resolution::{CurveKind, Ledger, ResolutionTree};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FibreError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("component {0} lies in the branch but has odd self-intersection")]
    OddSelfIntersection(u32),
    #[error("component {0} meets the branch in an odd number of points")]
    OddBranchCount(u32),
    #[error("component {0} meets the branch non-transversally")]
    NonTransversal(u32),
    #[error("branch components {0} and {1} meet, so the branch is not smooth")]
    BranchComponentsMeet(u32, u32),
    #[error("split components {0} and {1} do not lift to a unique sheet labelling")]
    AmbiguousSplit(u32, u32),
    #[error("lifted configuration fails F.C = 0 at component {id} (value {value})")]
    InconsistentLift { id: u32, value: i64 },
    #[error("component {0} is irrational and disjoint from the branch; its double cover is not determined")]
    NonRationalDisjoint(u32),
    #[error("the fibre is contained in the branch")]
    FibreInBranch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceComponent {
    pub id: u32,
    pub kind: CurveKind,
    pub mult: u64,
    pub self_int: i64,
    pub pa: u32,
    pub in_branch: bool,
    pub contacts: u32,
    pub transversal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreTrace {
    pub base: ProjCoord,
    pub components: Vec<TraceComponent>,
    pub intersections: Vec<(u32, u32, u64)>,
    /// Downstairs configuration before any blow-up and after each step over `base`.
    pub snapshots: Vec<CurveConfiguration>,
}

impl FibreTrace {
    pub fn configuration(&self) -> CurveConfiguration {
        let comps = self
            .components
            .iter()
            .map(|c| Component {
                id: c.id,
                mult: c.mult,
                pa: c.pa,
                self_int: Some(c.self_int),
            })
            .collect();
        CurveConfiguration::new(comps, self.intersections.iter().copied()).expect("ledger is consistent")
    }

    pub fn component(&self, id: u32) -> Option<&TraceComponent> {
        self.components.iter().find(|c| c.id == id)
    }
}

fn snapshot(ledger: &Ledger, ids: &[u32]) -> CurveConfiguration {
    let comps = ids
        .iter()
        .map(|id| Component {
            id: *id,
            mult: ledger.mult[id],
            pa: 0,
            self_int: Some(ledger.self_int[id]),
        })
        .collect();
    let mut edges = Vec::new();
    for (i, a) in ids.iter().enumerate() {
        for b in &ids[i + 1..] {
            let k = ledger.intersection(*a, *b);
            if k > 0 {
                edges.push((*a, *b, k));
            }
        }
    }
    CurveConfiguration::new(comps, edges).expect("ledger is consistent")
}

/// Total transform of the fibre over `base`. A base point carrying no center
/// gives the trivial one-component trace with unknown branch contact (zero).
pub fn track_fibre(tree: &ResolutionTree, base: &ProjCoord) -> FibreTrace {
    let Some(&line) = tree.lines.get(base) else {
        return FibreTrace {
            base: base.clone(),
            components: vec![TraceComponent {
                id: 0,
                kind: CurveKind::FibreLine,
                mult: 1,
                self_int: 0,
                pa: 0,
                in_branch: false,
                contacts: 0,
                transversal: true,
            }],
            intersections: Vec::new(),
            snapshots: vec![snapshot(&Ledger::with_lines([0]), &[0])],
        };
    };
    let mut ledger = Ledger::with_lines([line]);
    let mut ids = vec![line];
    let mut snapshots = vec![snapshot(&ledger, &ids)];
    for s in tree.steps_over(base) {
        ledger.apply(s);
        ids.push(s.exceptional_id);
        snapshots.push(snapshot(&ledger, &ids));
    }
    let components = ids
        .iter()
        .map(|id| {
            let c = &tree.curves[id];
            TraceComponent {
                id: *id,
                kind: c.kind,
                mult: ledger.mult[id],
                self_int: ledger.self_int[id],
                pa: 0,
                in_branch: c.in_branch,
                contacts: c.contacts,
                transversal: c.transversal,
            }
        })
        .collect();
    let last = snapshots.last().expect("nonempty");
    let intersections = last.edges().collect();
    FibreTrace {
        base: base.clone(),
        components,
        intersections,
        snapshots,
    }
}

/// Trace of a fibre on which the branch is smooth and transverse; contacts are
/// the distinct branch points on the line.
pub fn trace_smooth_fibre(branch: &BiPolynomial, base: &ProjCoord) -> Result<FibreTrace, FibreError> {
    let (base_chart, w) = match base {
        ProjCoord::Finite(q) => (BaseChart::T, q.clone()),
        ProjCoord::Infinity => (BaseChart::S, Rational::zero()),
    };
    let chart = Chart {
        fibre: FibreChart::X,
        base: base_chart,
    };
    let g = branch.chart_change(chart)?;
    let (_, b) = branch.bidegree.ok_or(PolyError::NoBidegree)?;
    let r = g.poly.specialize(Var::V, &w);
    if r.is_zero() {
        return Err(FibreError::FibreInBranch);
    }
    let deg = r.degree().unwrap_or(0);
    let sqf = r.squarefree_part();
    let at_infinity = b as usize - deg;
    let transversal = sqf.degree() == r.degree() && at_infinity <= 1;
    let contacts = sqf.degree().unwrap_or(0) as u32 + u32::from(at_infinity > 0);
    let mut t = track_fibre(&ResolutionTree::default(), base);
    t.components[0].contacts = contacts;
    t.components[0].transversal = transversal;
    Ok(t)
}

/// Where an upstairs component comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftOrigin {
    pub upstairs: u32,
    pub downstairs: u32,
    /// `Some(0|1)` for the two copies of a split component.
    pub sheet: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedFibre {
    pub config: CurveConfiguration,
    pub origin: Vec<LiftOrigin>,
}

enum LiftKind {
    Ramified,
    Irreducible,
    Split,
}

fn find(parent: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
    let p = *parent.get(&x).unwrap_or(&x);
    if p == x {
        return x;
    }
    let r = find(parent, p);
    parent.insert(x, r);
    r
}

pub fn lift_to_double_cover(trace: &FibreTrace) -> Result<LiftedFibre, FibreError> {
    let mut kinds = BTreeMap::new();
    let mut comps = Vec::new();
    let mut origin = Vec::new();
    let mut up: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut next = 0u32;
    for c in &trace.components {
        if c.in_branch {
            if c.self_int % 2 != 0 {
                return Err(FibreError::OddSelfIntersection(c.id));
            }
            kinds.insert(c.id, LiftKind::Ramified);
            comps.push(Component {
                id: next,
                mult: 2 * c.mult,
                pa: c.pa,
                self_int: Some(c.self_int / 2),
            });
            origin.push(LiftOrigin {
                upstairs: next,
                downstairs: c.id,
                sheet: None,
            });
            up.insert(c.id, vec![next]);
            next += 1;
            continue;
        }
        if !c.transversal {
            return Err(FibreError::NonTransversal(c.id));
        }
        if c.contacts == 0 {
            if c.pa != 0 {
                return Err(FibreError::NonRationalDisjoint(c.id));
            }
            kinds.insert(c.id, LiftKind::Split);
            let mut ids = Vec::new();
            for sheet in 0..2u8 {
                comps.push(Component {
                    id: next,
                    mult: c.mult,
                    pa: 0,
                    self_int: Some(c.self_int),
                });
                origin.push(LiftOrigin {
                    upstairs: next,
                    downstairs: c.id,
                    sheet: Some(sheet),
                });
                ids.push(next);
                next += 1;
            }
            up.insert(c.id, ids);
            continue;
        }
        if c.contacts % 2 != 0 {
            return Err(FibreError::OddBranchCount(c.id));
        }
        // 2g' - 2 = 2(2p_a - 2) + r
        let pa = (4 * c.pa as i64 - 4 + c.contacts as i64 + 2) / 2;
        kinds.insert(c.id, LiftKind::Irreducible);
        comps.push(Component {
            id: next,
            mult: c.mult,
            pa: pa as u32,
            self_int: Some(2 * c.self_int),
        });
        origin.push(LiftOrigin {
            upstairs: next,
            downstairs: c.id,
            sheet: None,
        });
        up.insert(c.id, vec![next]);
        next += 1;
    }

    let mut edges = Vec::new();
    let mut parent = BTreeMap::new();
    for &(a, b, k) in &trace.intersections {
        match (&kinds[&a], &kinds[&b]) {
            (LiftKind::Ramified, LiftKind::Ramified) => return Err(FibreError::BranchComponentsMeet(a, b)),
            (LiftKind::Ramified, _) | (_, LiftKind::Ramified) => {
                for &x in &up[&a] {
                    for &y in &up[&b] {
                        edges.push((x, y, k));
                    }
                }
            }
            (LiftKind::Irreducible, LiftKind::Irreducible) => edges.push((up[&a][0], up[&b][0], 2 * k)),
            (LiftKind::Split, LiftKind::Irreducible) | (LiftKind::Irreducible, LiftKind::Split) => {
                for &x in &up[&a] {
                    for &y in &up[&b] {
                        edges.push((x, y, k));
                    }
                }
            }
            (LiftKind::Split, LiftKind::Split) => {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if k > 1 || ra == rb {
                    return Err(FibreError::AmbiguousSplit(a, b));
                }
                parent.insert(ra, rb);
                edges.push((up[&a][0], up[&b][0], k));
                edges.push((up[&a][1], up[&b][1], k));
            }
        }
    }
    let config = CurveConfiguration::new(comps, edges)?;
    for c in config.components() {
        let v = config.fibre_dot(c.id)?;
        if v != 0 {
            return Err(FibreError::InconsistentLift { id: c.id, value: v });
        }
    }
    Ok(LiftedFibre { config, origin })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreReport {
    pub lifted: CurveConfiguration,
    pub contracted: CurveConfiguration,
    pub contractions: usize,
    pub predicates: FibrePredicates,
    pub genus: i64,
    pub winters: WintersReport,
    pub generic_genus: Option<i64>,
}

impl FibreReport {
    pub fn genus_matches(&self) -> Option<bool> {
        self.generic_genus.map(|g| g == self.genus)
    }
}

pub fn assemble_fibre_report(
    lifted: &CurveConfiguration,
    generic_genus: Option<i64>,
) -> Result<FibreReport, FibreError> {
    let (contracted, contractions) = lifted.contract_minus_one()?;
    Ok(FibreReport {
        lifted: lifted.clone(),
        predicates: contracted.fibre_predicates(),
        genus: contracted.fibre_genus()?,
        winters: contracted.winters_check(),
        contracted,
        contractions,
        generic_genus,
    })
}
