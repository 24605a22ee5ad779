//! Canonical resolution of double covers branched along a reduced curve.
//!
//! Each center of multiplicity `m` is blown up; the new branch is the strict
//! transform plus `E` when `m` is odd. Fibre lines and exceptional curves are
//! tracked through every center as local coordinate axes (`u = 0` or `v = 0`),
//! which is all the intersection ledger needs.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::poly::singular::rational_singular_points;
use crate::poly::{
    format_poly2, AffinePoint, BaseChart, BiPolynomial, Chart, FibreChart, Poly2, PolyError, ProjCoord, Rational,
    UniPoly, Var,
};

pub const DEFAULT_ITERATION_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolutionError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("singular-point search is incomplete: some singular points may be irrational")]
    Incomplete,
    #[error("point {0} has multiplicity {1} on the branch; not a singular point")]
    NotSingular(String, u32),
    #[error("a non-rational tangent direction of multiplicity {multiplicity} on E{on} needs a further blow-up")]
    NonRationalCenter { on: u32, multiplicity: u32 },
    #[error("iteration cap {0} exceeded")]
    IterationCap(usize),
    #[error("curve {0} restricts to zero on the branch but is not marked as contained in it")]
    Inconsistent(u32),
}

/// Bidegree `(a, b)` is divisible by two in the Picard group `Z²` of the quadric.
pub fn even_divisor_check(a: u32, b: u32) -> bool {
    a.is_multiple_of(2) && b.is_multiple_of(2)
}

/// `(Δχ, ΔK²)` of blowing up a point of multiplicity `m` on the branch.
pub fn step_invariant_delta(m: u32) -> (i64, i64) {
    let k = (m / 2) as i64;
    (-k * (k - 1) / 2, -2 * (k - 1) * (k - 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenterRef {
    /// A point of the original surface.
    Point(AffinePoint),
    /// A copy of a local template.
    Template { copy: u32 },
    /// An infinitely near point on `E_on`. `Finite(λ)` is the tangent
    /// `v = λu`, `Infinity` the tangent `u = 0`.
    Near { on: u32, direction: ProjCoord },
    /// One of `degree` conjugate points on `E_on`, cut out by `factor`.
    Conjugate {
        on: u32,
        factor: String,
        index: u32,
        degree: u32,
    },
}

impl fmt::Display for CenterRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CenterRef::Point(p) => write!(f, "{}", p.to_projective()),
            CenterRef::Template { copy } => write!(f, "template#{copy}"),
            CenterRef::Near { on, direction } => write!(f, "E{on}@{direction}"),
            CenterRef::Conjugate {
                on,
                factor,
                index,
                degree,
            } => write!(f, "E{on}@{factor}=0[{}/{degree}]", index + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupStep {
    pub center: CenterRef,
    pub multiplicity: u32,
    pub exceptional_id: u32,
    /// `E` stays in the branch iff `m` is odd.
    pub in_branch: bool,
    /// Tracked curves through the center (at most two, plus none for
    /// conjugate points other than the curve they lie on).
    pub through: Vec<u32>,
    pub base: ProjCoord,
    /// Branch equation centred at the point, before blowing up.
    pub local_branch: Poly2,
    pub copy: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    FibreLine,
    Exceptional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackedCurve {
    pub id: u32,
    pub kind: CurveKind,
    pub base: ProjCoord,
    pub in_branch: bool,
    /// Points where the curve meets the final branch (non-branch curves only).
    pub contacts: u32,
    pub transversal: bool,
}

/// Smooth point of the final branch on at least one tracked curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leaf {
    pub curves: Vec<u32>,
    pub local_branch: Poly2,
}

/// Local branch at the origin with the fibre line `v = 0`, replicated `copies`
/// times on a single fibre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalTemplate {
    pub local: Poly2,
    pub copies: u32,
    pub base: ProjCoord,
    /// Transverse meetings of the fibre line with the branch away from the copies.
    pub line_contacts: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenterMode {
    Auto,
    Explicit(Vec<AffinePoint>),
    /// The branch argument is not consulted.
    Template(LocalTemplate),
}

/// Self-intersections, pairwise intersections and fibre multiplicities of
/// the tracked curves, replayed from a sequence of steps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ledger {
    pub mult: BTreeMap<u32, u64>,
    pub self_int: BTreeMap<u32, i64>,
    pub inter: BTreeMap<(u32, u32), u64>,
}

impl Ledger {
    pub fn with_lines(lines: impl IntoIterator<Item = u32>) -> Self {
        let mut l = Ledger::default();
        for id in lines {
            l.mult.insert(id, 1);
            l.self_int.insert(id, 0);
        }
        l
    }

    pub fn intersection(&self, a: u32, b: u32) -> u64 {
        self.inter.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }

    /// Blow up a point lying on the curves `through` (smooth, pairwise transverse).
    pub fn apply(&mut self, step: &BlowupStep) {
        let e = step.exceptional_id;
        let m: u64 = step
            .through
            .iter()
            .map(|c| self.mult.get(c).copied().unwrap_or(0))
            .sum();
        self.mult.insert(e, m);
        self.self_int.insert(e, -1);
        for (i, &c) in step.through.iter().enumerate() {
            *self.self_int.entry(c).or_insert(0) -= 1;
            self.inter.insert((c.min(e), c.max(e)), 1);
            for &d in &step.through[i + 1..] {
                let k = (c.min(d), c.max(d));
                let v = self.inter.get(&k).copied().unwrap_or(0);
                match v.saturating_sub(1) {
                    0 => {
                        self.inter.remove(&k);
                    }
                    r => {
                        self.inter.insert(k, r);
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResolutionTree {
    pub steps: Vec<BlowupStep>,
    pub curves: BTreeMap<u32, TrackedCurve>,
    pub lines: BTreeMap<ProjCoord, u32>,
    pub leaves: Vec<Leaf>,
    /// Whether the rational singular-point search covered every singular point.
    pub complete: bool,
}

impl ResolutionTree {
    pub fn multiplicities(&self) -> Vec<u32> {
        self.steps.iter().map(|s| s.multiplicity).collect()
    }

    pub fn steps_over(&self, base: &ProjCoord) -> impl Iterator<Item = &BlowupStep> {
        let base = base.clone();
        self.steps.iter().filter(move |s| s.base == base)
    }

    pub fn ledger(&self) -> Ledger {
        let mut l = Ledger::with_lines(self.lines.values().copied());
        for s in &self.steps {
            l.apply(s);
        }
        l
    }

    /// `(Σ Δχ, Σ ΔK²)` over all steps.
    pub fn invariant_delta(&self) -> (i64, i64) {
        self.steps.iter().fold((0, 0), |(c, k), s| {
            let (dc, dk) = step_invariant_delta(s.multiplicity);
            (c + dc, k + dk)
        })
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

struct Engine {
    tree: ResolutionTree,
    cap: usize,
    next_id: u32,
}

fn chart_a(local: &Poly2, m: u32, odd: bool) -> Poly2 {
    let p = local
        .monomial_substitute(1, 0, 1, 1)
        .div_monomial(m, 0)
        .expect("strict transform divides");
    if odd {
        p.mul(&Poly2::u())
    } else {
        p
    }
}

fn chart_b(local: &Poly2, m: u32, odd: bool) -> Poly2 {
    let p = local
        .monomial_substitute(1, 1, 0, 1)
        .div_monomial(0, m)
        .expect("strict transform divides");
    if odd {
        p.mul(&Poly2::v())
    } else {
        p
    }
}

fn low_order(p: &UniPoly) -> Option<usize> {
    p.coeffs().iter().position(|c| !c.is_zero())
}

impl Engine {
    fn new(cap: usize) -> Self {
        Engine {
            tree: ResolutionTree {
                complete: true,
                ..Default::default()
            },
            cap,
            next_id: 0,
        }
    }

    fn new_curve(&mut self, kind: CurveKind, base: ProjCoord, in_branch: bool) -> u32 {
        let id = self.next_id;
        self.next_id += 1;
        self.tree.curves.insert(
            id,
            TrackedCurve {
                id,
                kind,
                base,
                in_branch,
                contacts: 0,
                transversal: true,
            },
        );
        id
    }

    fn line(&mut self, base: &ProjCoord, in_branch: bool) -> u32 {
        if let Some(&id) = self.tree.lines.get(base) {
            return id;
        }
        let id = self.new_curve(CurveKind::FibreLine, base.clone(), in_branch);
        self.tree.lines.insert(base.clone(), id);
        id
    }

    fn add_contact(&mut self, id: u32, count: u32, transversal: bool) {
        let c = self.tree.curves.get_mut(&id).expect("tracked");
        c.contacts += count;
        c.transversal &= transversal;
    }

    fn leaf(&mut self, local: Poly2, cu: Option<u32>, cv: Option<u32>) -> Result<(), ResolutionError> {
        if local.order() != Some(1) {
            return Ok(());
        }
        for (curve, var) in [(cu, Var::U), (cv, Var::V)] {
            let Some(id) = curve else { continue };
            if self.tree.curves[&id].in_branch {
                continue;
            }
            let restricted = local.specialize(var, &Rational::zero());
            match low_order(&restricted) {
                None => return Err(ResolutionError::Inconsistent(id)),
                Some(0) => {}
                Some(k) => self.add_contact(id, 1, k == 1),
            }
        }
        self.tree.leaves.push(Leaf {
            curves: cu.into_iter().chain(cv).collect(),
            local_branch: local,
        });
        Ok(())
    }

    fn push_step(&mut self, step: BlowupStep) -> Result<(), ResolutionError> {
        if self.tree.steps.len() >= self.cap {
            return Err(ResolutionError::IterationCap(self.cap));
        }
        self.tree.steps.push(step);
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn process(
        &mut self,
        local: Poly2,
        cu: Option<u32>,
        cv: Option<u32>,
        center: CenterRef,
        base: &ProjCoord,
        copy: Option<u32>,
    ) -> Result<(), ResolutionError> {
        let m = local.order().ok_or(PolyError::ZeroPolynomial)?;
        if m < 2 {
            return self.leaf(local, cu, cv);
        }
        let odd = m % 2 == 1;
        let e = self.new_curve(CurveKind::Exceptional, base.clone(), odd);
        self.push_step(BlowupStep {
            center,
            multiplicity: m,
            exceptional_id: e,
            in_branch: odd,
            through: cu.into_iter().chain(cv).collect(),
            base: base.clone(),
            local_branch: local.clone(),
            copy,
        })?;

        // Tangent directions: I(1, λ) = Σ c_{m-j, j} λ^j.
        let init = local.initial_form();
        let slope = UniPoly::from_coeffs((0..=m).map(|j| init.coeff(m - j, j)).collect());
        let deficit = m as usize - slope.degree().unwrap_or(0);
        let (roots, rest) = slope.rational_roots();
        // Points of E on tracked curves are visited even off the tangent cone:
        // when E joins the branch they are still points of the new branch.
        let mut lambdas: Vec<Rational> = roots.into_iter().map(|(r, _)| r).collect();
        if cv.is_some() && !lambdas.iter().any(Zero::is_zero) {
            lambdas.push(Rational::zero());
            lambdas.sort();
        }

        for lambda in lambdas {
            let child = chart_a(&local, m, odd).translate(&Rational::zero(), &lambda);
            let cv2 = if lambda.is_zero() { cv } else { None };
            self.process(
                child,
                Some(e),
                cv2,
                CenterRef::Near {
                    on: e,
                    direction: ProjCoord::Finite(lambda),
                },
                base,
                copy,
            )?;
        }
        if deficit > 0 || cu.is_some() {
            let child = chart_b(&local, m, odd);
            self.process(
                child,
                cu,
                Some(e),
                CenterRef::Near {
                    on: e,
                    direction: ProjCoord::Infinity,
                },
                base,
                copy,
            )?;
        }
        if rest.degree().unwrap_or(0) > 0 {
            for (factor, exp) in rest.squarefree_decomposition() {
                let d = factor.degree().unwrap_or(0) as u32;
                if d == 0 {
                    continue;
                }
                if exp > 1 {
                    return Err(ResolutionError::NonRationalCenter {
                        on: e,
                        multiplicity: exp,
                    });
                }
                if !odd {
                    // Strict transform crosses E transversally at d conjugate points.
                    self.add_contact(e, d, true);
                    continue;
                }
                // E in the branch: each conjugate point is a node of E + strict transform.
                let name = alloc::format!("{factor}");
                for index in 0..d {
                    let e2 = self.new_curve(CurveKind::Exceptional, base.clone(), false);
                    self.push_step(BlowupStep {
                        center: CenterRef::Conjugate {
                            on: e,
                            factor: name.clone(),
                            index,
                            degree: d,
                        },
                        multiplicity: 2,
                        exceptional_id: e2,
                        in_branch: false,
                        through: alloc::vec![e],
                        base: base.clone(),
                        local_branch: Poly2::u().mul(&Poly2::v()),
                        copy,
                    })?;
                    self.add_contact(e2, 2, true);
                }
            }
        }
        Ok(())
    }

    /// Transverse meetings of a non-branch fibre line with the branch away
    /// from the resolved centers.
    fn line_contacts(
        &mut self,
        f: &BiPolynomial,
        base: &ProjCoord,
        centers: &[ProjCoord],
    ) -> Result<(), ResolutionError> {
        let id = self.tree.lines[base];
        if self.tree.curves[&id].in_branch {
            return Ok(());
        }
        let (base_chart, w) = match base {
            ProjCoord::Finite(q) => (BaseChart::T, q.clone()),
            ProjCoord::Infinity => (BaseChart::S, Rational::zero()),
        };
        let chart = Chart {
            fibre: FibreChart::X,
            base: base_chart,
        };
        let g = if f.bidegree.is_some() {
            f.chart_change(chart)?
        } else {
            f.clone()
        };
        let mut rest = g.poly.specialize(Var::V, &w);
        let full = match f.bidegree {
            Some((_, b)) => b as usize,
            None => rest.degree().unwrap_or(0),
        };
        let mut at_infinity = full - rest.degree().unwrap_or(0);
        for c in centers {
            match c {
                ProjCoord::Finite(x) => {
                    let lin = UniPoly::linear(x);
                    loop {
                        let (q, r) = rest.div_rem(&lin);
                        if !r.is_zero() {
                            break;
                        }
                        rest = q;
                    }
                }
                ProjCoord::Infinity => at_infinity = 0,
            }
        }
        let sqf = rest.squarefree_part();
        let transversal = sqf.degree() == rest.degree() && at_infinity <= 1;
        let count = sqf.degree().unwrap_or(0) as u32 + u32::from(at_infinity > 0);
        self.add_contact(id, count, transversal);
        Ok(())
    }
}

/// Resolve with the default iteration cap.
pub fn canonical_resolve(branch: &BiPolynomial, mode: CenterMode) -> Result<ResolutionTree, ResolutionError> {
    canonical_resolve_with_cap(branch, mode, DEFAULT_ITERATION_CAP)
}

pub fn canonical_resolve_with_cap(
    branch: &BiPolynomial,
    mode: CenterMode,
    cap: usize,
) -> Result<ResolutionTree, ResolutionError> {
    let mut engine = Engine::new(cap);
    let points = match mode {
        CenterMode::Template(t) => return resolve_template_engine(engine, &t),
        CenterMode::Auto => {
            let sp = rational_singular_points(branch)?;
            if !sp.complete {
                return Err(ResolutionError::Incomplete);
            }
            sp.points
        }
        CenterMode::Explicit(mut pts) => {
            pts.sort_by_key(|p| p.to_projective());
            pts.dedup_by_key(|p| p.to_projective());
            engine.tree.complete = false;
            pts
        }
    };

    let mut by_base: BTreeMap<ProjCoord, Vec<ProjCoord>> = BTreeMap::new();
    for p in &points {
        let g = if p.chart == branch.chart {
            branch.clone()
        } else {
            branch.chart_change(p.chart)?
        };
        let local = g.local_at(p)?;
        let m = local.order().ok_or(PolyError::ZeroPolynomial)?;
        if m < 2 {
            return Err(ResolutionError::NotSingular(alloc::format!("{}", p.to_projective()), m));
        }
        let base = p.base_point();
        let line_in_branch = local.specialize(Var::V, &Rational::zero()).is_zero();
        let l = engine.line(&base, line_in_branch);
        engine.process(local, None, Some(l), CenterRef::Point(p.clone()), &base, None)?;
        by_base.entry(base).or_default().push(p.to_projective().fibre);
    }
    for (base, centers) in &by_base {
        engine.line_contacts(branch, base, centers)?;
    }
    Ok(engine.tree)
}

pub fn resolve_template(t: &LocalTemplate) -> Result<ResolutionTree, ResolutionError> {
    resolve_template_engine(Engine::new(DEFAULT_ITERATION_CAP), t)
}

fn resolve_template_engine(mut engine: Engine, t: &LocalTemplate) -> Result<ResolutionTree, ResolutionError> {
    engine.tree.complete = false;
    let line_in_branch = t.local.specialize(Var::V, &Rational::zero()).is_zero();
    let l = engine.line(&t.base, line_in_branch);
    for copy in 0..t.copies {
        engine.process(
            t.local.clone(),
            None,
            Some(l),
            CenterRef::Template { copy },
            &t.base,
            Some(copy),
        )?;
    }
    if !line_in_branch {
        engine.add_contact(l, t.line_contacts, true);
    }
    Ok(engine.tree)
}

/// Human-readable local equation in `u, v`.
pub fn format_local(p: &Poly2) -> String {
    format_poly2(p, "u", "v")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_bihomogeneous, parse_poly, rat};

    fn type_one() -> BiPolynomial {
        parse_bihomogeneous("t*s*(s^2*x^6 + s*t*x^3*z^3 + t^2*z^6)", Chart::XT).unwrap()
    }

    #[test]
    fn parity_check() {
        assert!(even_divisor_check(4, 6));
        assert!(!even_divisor_check(7, 6));
        assert!(even_divisor_check(0, 0));
    }

    #[test]
    fn deltas() {
        assert_eq!(step_invariant_delta(2), (0, 0));
        assert_eq!(step_invariant_delta(3), (0, 0));
        assert_eq!(step_invariant_delta(4), (-1, -2));
        assert_eq!(step_invariant_delta(6), (-3, -8));
    }

    #[test]
    fn smooth_branch_gives_empty_tree() {
        let f = parse_bihomogeneous("x*s - z*t", Chart::XT).unwrap();
        let tree = canonical_resolve(&f, CenterMode::Auto).unwrap();
        assert!(tree.is_empty());
    }

    #[test]
    fn type_one_local_sequence() {
        let tree = canonical_resolve(&type_one(), CenterMode::Auto).unwrap();
        let at_p: Vec<u32> = tree
            .steps_over(&ProjCoord::Finite(rat(0)))
            .map(|s| s.multiplicity)
            .collect();
        assert_eq!(at_p, [3, 4, 3, 2, 2, 2]);
        let at_q: Vec<u32> = tree.steps_over(&ProjCoord::Infinity).map(|s| s.multiplicity).collect();
        assert_eq!(at_q, at_p);
        let r1 = parse_poly("x*t*(x^4 + x^2*t + t^2)", Chart::XT).unwrap().poly;
        assert_eq!(tree.steps[1].local_branch, r1);
        assert_eq!(tree.invariant_delta(), (-2, -4));
        for leaf in &tree.leaves {
            assert_eq!(leaf.local_branch.order(), Some(1));
        }
    }

    #[test]
    fn type_one_ledger() {
        let tree = canonical_resolve(&type_one(), CenterMode::Auto).unwrap();
        let l = tree.ledger();
        let line = tree.lines[&ProjCoord::Finite(rat(0))];
        let ids: Vec<u32> = core::iter::once(line)
            .chain(tree.steps_over(&ProjCoord::Finite(rat(0))).map(|s| s.exceptional_id))
            .collect();
        let mults: Vec<u64> = ids.iter().map(|i| l.mult[i]).collect();
        let selfs: Vec<i64> = ids.iter().map(|i| l.self_int[i]).collect();
        assert_eq!(mults, [1, 1, 2, 3, 4, 3, 3]);
        assert_eq!(selfs, [-4, -2, -2, -4, -1, -1, -1]);
        for &i in &ids {
            let dot: i64 = ids
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| l.mult[&j] as i64 * l.intersection(i, j) as i64)
                .sum::<i64>()
                + l.mult[&i] as i64 * l.self_int[&i];
            assert_eq!(dot, 0, "F.C for {i}");
        }
        let branch: Vec<bool> = ids.iter().map(|i| tree.curves[i].in_branch).collect();
        assert_eq!(branch, [true, true, false, true, false, false, false]);
        assert_eq!(tree.curves[&ids[2]].contacts, 2);
        assert_eq!(tree.curves[&ids[4]].contacts, 2);
    }

    #[test]
    fn explicit_node() {
        let f = parse_poly("x^2 - t^2", Chart::XT).unwrap();
        let tree = canonical_resolve(
            &f,
            CenterMode::Explicit(alloc::vec![AffinePoint::new(Chart::XT, rat(0), rat(0))]),
        )
        .unwrap();
        assert_eq!(tree.multiplicities(), [2]);
        let e = tree.steps[0].exceptional_id;
        assert_eq!(tree.curves[&e].contacts, 2);
        assert!(matches!(
            canonical_resolve(
                &f,
                CenterMode::Explicit(alloc::vec![AffinePoint::new(Chart::XT, rat(1), rat(0))])
            ),
            Err(ResolutionError::NotSingular(_, 0))
        ));
    }

    #[test]
    fn template_replicates() {
        let t = LocalTemplate {
            local: parse_poly("t*(x^3 + t^2)", Chart::XT).unwrap().poly,
            copies: 3,
            base: ProjCoord::Finite(rat(0)),
            line_contacts: 0,
        };
        let one = resolve_template(&LocalTemplate { copies: 1, ..t.clone() }).unwrap();
        let three = resolve_template(&t).unwrap();
        assert_eq!(three.steps.len(), 3 * one.steps.len());
        let (c1, k1) = one.invariant_delta();
        assert_eq!(three.invariant_delta(), (3 * c1, 3 * k1));
    }

    #[test]
    fn iteration_cap() {
        assert_eq!(
            canonical_resolve_with_cap(&type_one(), CenterMode::Auto, 3),
            Err(ResolutionError::IterationCap(3))
        );
    }
}
