//! Chern invariants of double covers of P1 x P1 and their resolutions.

use alloc::string::String;
use alloc::vec::Vec;

use crate::orbifold::OrbifoldBase;
use crate::poly::{BiPolynomial, Chart, PolyError, ProjCoord, Rational, UniPoly, Var};
use crate::resolution::{even_divisor_check, step_invariant_delta, ResolutionTree};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantsError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("bidegree ({0}, {1}) is not divisible by two")]
    Parity(u32, u32),
    #[error("the branch meets a generic fibre in an odd number ({0}) of points")]
    OddBranchCount(usize),
    #[error("the branch contains the generic fibre")]
    VerticalComponent,
    #[error("ledger does not reconcile: {0}")]
    Ledger(String),
    #[error("cyclic degree must be positive")]
    ZeroDegree,
    #[error("ramification point {0} is a singular fibre")]
    RamificationCollision(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    pub source: String,
    pub d_chi: i64,
    pub d_k2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub chi: i64,
    pub k2: i64,
    pub c2: i64,
    pub ledger: Vec<Correction>,
}

impl SurfaceInvariants {
    fn from_chi_k2(chi: i64, k2: i64) -> Self {
        SurfaceInvariants {
            chi,
            k2,
            c2: 12 * chi - k2,
            ledger: Vec::new(),
        }
    }

    pub fn noether_holds(&self) -> bool {
        self.c2 == 12 * self.chi - self.k2
    }

    fn apply(&mut self, c: Correction) {
        self.chi += c.d_chi;
        self.k2 += c.d_k2;
        self.c2 = 12 * self.chi - self.k2;
        self.ledger.push(c);
    }
}

/// `(p, q)·(p', q') = pq' + qp'` on the quadric.
fn dot(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 + a.1 * b.0
}

/// Invariants of the double cover branched along a smooth curve of bidegree `(a, b)`.
pub fn smooth_double_cover_invariants(a: u32, b: u32) -> Result<SurfaceInvariants, InvariantsError> {
    if !even_divisor_check(a, b) {
        return Err(InvariantsError::Parity(a, b));
    }
    let l = (a as i64 / 2, b as i64 / 2);
    let k = (-2, -2);
    let lk = (l.0 + k.0, l.1 + k.1);
    let twice_chi_shift = dot(l, lk);
    let chi = 2 + twice_chi_shift / 2;
    let k2 = 2 * dot(lk, lk);
    Ok(SurfaceInvariants::from_chi_k2(chi, k2))
}

/// One correction per blow-up step.
pub fn tree_corrections(tree: &ResolutionTree, label: &str) -> Vec<Correction> {
    tree.steps
        .iter()
        .map(|s| {
            let (d_chi, d_k2) = step_invariant_delta(s.multiplicity);
            Correction {
                source: alloc::format!("{label}: blow-up m={} at {}", s.multiplicity, s.center),
                d_chi,
                d_k2,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedInvariants {
    pub raw: SurfaceInvariants,
    pub resolved: SurfaceInvariants,
    pub contractions: usize,
    /// No vertical `(-1)`-curves remain after contraction.
    pub minimal: bool,
}

/// Apply blow-up corrections and `+1` to `K²` per contracted `(-1)`-curve.
pub fn resolved_invariants(
    raw: &SurfaceInvariants,
    corrections: &[Correction],
    contractions: usize,
    remaining_minus_one: usize,
) -> Result<ResolvedInvariants, InvariantsError> {
    let mut out = raw.clone();
    for c in corrections {
        out.apply(c.clone());
    }
    for i in 0..contractions {
        out.apply(Correction {
            source: alloc::format!("contraction #{}", i + 1),
            d_chi: 0,
            d_k2: 1,
        });
    }
    let sum_chi: i64 = out.ledger[raw.ledger.len()..].iter().map(|c| c.d_chi).sum();
    let sum_k2: i64 = out.ledger[raw.ledger.len()..].iter().map(|c| c.d_k2).sum();
    if raw.chi + sum_chi != out.chi || raw.k2 + sum_k2 != out.k2 || !out.noether_holds() {
        return Err(InvariantsError::Ledger(alloc::format!(
            "raw ({}, {}) + ({sum_chi}, {sum_k2}) != ({}, {})",
            raw.chi,
            raw.k2,
            out.chi,
            out.k2
        )));
    }
    Ok(ResolvedInvariants {
        raw: raw.clone(),
        resolved: out,
        contractions,
        minimal: remaining_minus_one == 0,
    })
}

/// Distinct branch points on the fibre over `t0`, counting `[1:0]` when the
/// degree in `x` drops.
fn branch_points_on_fibre(f: &BiPolynomial, b: u32, t0: &Rational) -> Result<Option<usize>, InvariantsError> {
    let g = f.chart_change(Chart::XT)?;
    let r: UniPoly = g.poly.specialize(Var::V, t0);
    if r.is_zero() {
        return Ok(None);
    }
    let deg = r.degree().unwrap_or(0);
    let distinct = r.squarefree_part().degree().unwrap_or(0);
    Ok(Some(distinct + usize::from((b as usize) > deg)))
}

/// Genus of the generic fibre of the double cover: `g = r/2 - 1`.
pub fn generic_fibre_genus(branch: &BiPolynomial) -> Result<i64, InvariantsError> {
    let (_, b) = branch.bidegree.ok_or(PolyError::NoBidegree)?;
    let mut best: Option<usize> = None;
    for k in 1..=20 {
        let t0 = Rational::from_integer(k.into()) / Rational::from_integer(7.into());
        if let Some(r) = branch_points_on_fibre(branch, b, &t0)? {
            best = Some(best.map_or(r, |x| x.max(r)));
        }
    }
    let r = best.ok_or(InvariantsError::VerticalComponent)?;
    if r % 2 != 0 {
        return Err(InvariantsError::OddBranchCount(r));
    }
    Ok(r as i64 / 2 - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseChange {
    pub degree: u32,
    pub bidegree: (u32, u32),
    /// `m(b)` of every singular fibre after base change.
    pub fibre_multiplicities: Vec<u64>,
    pub orbifold: OrbifoldBase,
}

/// Pull back along a cyclic cover of P1 of degree `n` branched at
/// `ramification`, which must avoid the singular fibres.
pub fn base_change(
    bidegree: (u32, u32),
    singular: &[(ProjCoord, u64)],
    n: u32,
    ramification: [&ProjCoord; 2],
) -> Result<BaseChange, InvariantsError> {
    if n == 0 {
        return Err(InvariantsError::ZeroDegree);
    }
    if n > 1 {
        for r in ramification {
            if singular.iter().any(|(b, _)| b == r) {
                return Err(InvariantsError::RamificationCollision(alloc::format!("{r}")));
            }
        }
    }
    let mut mults = Vec::new();
    for (_, m) in singular {
        for _ in 0..n {
            mults.push(*m);
        }
    }
    Ok(BaseChange {
        degree: n,
        bidegree: (n * bidegree.0, bidegree.1),
        orbifold: OrbifoldBase::from_fibre_multiplicities(0, mults.iter().copied()),
        fibre_multiplicities: mults,
    })
}

/// Two rational base points outside `singular`, smallest positive integers first.
pub fn default_ramification(singular: &[(ProjCoord, u64)]) -> [ProjCoord; 2] {
    let mut found = Vec::new();
    let mut k = 1i64;
    while found.len() < 2 {
        let p = ProjCoord::Finite(Rational::from_integer(k.into()));
        if !singular.iter().any(|(b, _)| *b == p) {
            found.push(p);
        }
        k += 1;
    }
    [found[0].clone(), found[1].clone()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ampleness {
    pub ample: bool,
    /// Recorded conclusion `π₁ ≅ π₁(base) = 1` for an ample branch over P1.
    pub simply_connected: Option<bool>,
}

pub fn ampleness_flag(a: u32, b: u32, base_rational: bool) -> Ampleness {
    let ample = a > 0 && b > 0;
    Ampleness {
        ample,
        simply_connected: (ample && base_rational).then_some(true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_bihomogeneous, rat};

    #[test]
    fn smooth_covers() {
        for n in 1..10u32 {
            let s = smooth_double_cover_invariants(4 * n, 6).unwrap();
            let n = n as i64;
            assert_eq!((s.chi, s.k2, s.c2), (4 * n - 1, 8 * n - 8, 40 * n - 4));
        }
        let s = smooth_double_cover_invariants(0, 0).unwrap();
        assert_eq!((s.chi, s.k2, s.c2), (2, 16, 8));
        let s = smooth_double_cover_invariants(2, 2).unwrap();
        assert_eq!((s.chi, s.k2, s.c2), (1, 4, 8));
        assert_eq!(smooth_double_cover_invariants(7, 6), Err(InvariantsError::Parity(7, 6)));
    }

    #[test]
    fn identity_without_corrections() {
        let raw = smooth_double_cover_invariants(8, 6).unwrap();
        let r = resolved_invariants(&raw, &[], 0, 0).unwrap();
        assert_eq!(r.resolved, raw);
        assert!(r.minimal);
    }

    #[test]
    fn generic_genus() {
        let f = parse_bihomogeneous("t*s*(s^2*x^6 + s*t*x^3*z^3 + t^2*z^6)", Chart::XT).unwrap();
        assert_eq!(generic_fibre_genus(&f), Ok(2));
        let g = parse_bihomogeneous("x*s - z*t", Chart::XT).unwrap();
        assert_eq!(generic_fibre_genus(&g), Err(InvariantsError::OddBranchCount(1)));
        let h = parse_bihomogeneous("x^2*s - z^2*t", Chart::XT).unwrap();
        assert_eq!(generic_fibre_genus(&h), Ok(0));
    }

    #[test]
    fn base_change_bookkeeping() {
        let sing = [(ProjCoord::Finite(rat(0)), 2), (ProjCoord::Infinity, 2)];
        let ram = default_ramification(&sing);
        let bc = base_change((4, 6), &sing, 3, [&ram[0], &ram[1]]).unwrap();
        assert_eq!(bc.bidegree, (12, 6));
        assert_eq!(bc.fibre_multiplicities.len(), 6);
        let zero = ProjCoord::Finite(rat(0));
        assert!(matches!(
            base_change((4, 6), &sing, 2, [&zero, &ram[1]]),
            Err(InvariantsError::RamificationCollision(_))
        ));
        assert_eq!(base_change((4, 6), &sing, 1, [&zero, &zero]).unwrap().bidegree, (4, 6));
    }

    #[test]
    fn ampleness() {
        assert_eq!(
            ampleness_flag(8, 6, true),
            Ampleness {
                ample: true,
                simply_connected: Some(true)
            }
        );
        assert!(!ampleness_flag(0, 6, true).ample);
    }
}
