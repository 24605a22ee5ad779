//! Fibre configurations as weighted dual graphs.
//!
//! A fibre `F = Σ m_i C_i` is described by its components (multiplicity,
//! arithmetic genus, self-intersection) and the pairwise intersection numbers
//! `C_i · C_j`. Since `F` is numerically a fibre, `F · C_i = 0` for all `i`,
//! which pins down every self-intersection.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("duplicate component id {0}")]
    DuplicateId(u32),
    #[error("unknown component id {0}")]
    UnknownId(u32),
    #[error("component {0} has multiplicity 0")]
    ZeroMultiplicity(u32),
    #[error("intersection of component {0} with itself given as an off-diagonal entry")]
    SelfPair(u32),
    #[error("negative intersection number between {0} and {1}")]
    NegativeIntersection(u32, u32),
    #[error("conflicting intersection numbers between {0} and {1}")]
    Asymmetric(u32, u32),
    #[error("multiplicity {mult} of component {id} does not divide {sum}")]
    Divisibility { id: u32, mult: u64, sum: i64 },
    #[error("component {0} has no self-intersection")]
    MissingSelfIntersection(u32),
    #[error("F·C = {value} for component {id}; a fibre must have F·C = 0")]
    NotNumericalFibre { id: u32, value: i64 },
    #[error("adjunction sum {0} is odd")]
    OddAdjunction(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub id: u32,
    pub mult: u64,
    pub pa: u32,
    /// `None` until derived from `F · C = 0`.
    pub self_int: Option<i64>,
}

impl Component {
    pub fn rational(id: u32, mult: u64) -> Self {
        Component {
            id,
            mult,
            pa: 0,
            self_int: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CurveConfiguration {
    components: Vec<Component>,
    /// Keyed by `(min id, max id)`; zero entries are not stored.
    intersections: BTreeMap<(u32, u32), u64>,
}

fn key(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WintersWitness {
    pub id: u32,
    pub mult: u64,
    /// `Σ_{j≠i} m_j (C_i · C_j)`
    pub sum: u64,
    pub divides: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WintersReport {
    pub pass: bool,
    pub witnesses: Vec<WintersWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FibrePredicates {
    pub gcd: u64,
    pub min: u64,
    pub connected: bool,
    pub is_multiple: bool,
    pub is_c_fibre: bool,
    pub is_valid_fibration_fibre: bool,
}

/// One admissible multiplicity for a multiple fibre `F = nE` of a genus-`g` fibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultipleFibreOption {
    pub n: u64,
    /// `p_a(E) = 1 + (g-1)/n`
    pub quotient_genus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultipleFibreConstraints {
    /// Genus one: every `n` divides `g - 1 = 0`, and `p_a(E) = 1`.
    AllMultiplicities,
    Finite(Vec<MultipleFibreOption>),
}

impl MultipleFibreConstraints {
    pub fn admits(&self, n: u64) -> bool {
        match self {
            MultipleFibreConstraints::AllMultiplicities => n >= 1,
            MultipleFibreConstraints::Finite(v) => v.iter().any(|o| o.n == n),
        }
    }
}

impl CurveConfiguration {
    pub fn new(
        components: Vec<Component>,
        intersections: impl IntoIterator<Item = (u32, u32, u64)>,
    ) -> Result<Self, ConfigError> {
        let mut cfg = CurveConfiguration::default();
        let mut ids = BTreeSet::new();
        for c in &components {
            if !ids.insert(c.id) {
                return Err(ConfigError::DuplicateId(c.id));
            }
            if c.mult == 0 {
                return Err(ConfigError::ZeroMultiplicity(c.id));
            }
        }
        cfg.components = components;
        for (a, b, v) in intersections {
            if a == b {
                return Err(ConfigError::SelfPair(a));
            }
            for id in [a, b] {
                if !ids.contains(&id) {
                    return Err(ConfigError::UnknownId(id));
                }
            }
            let k = key(a, b);
            match cfg.intersections.get(&k) {
                Some(&old) if old != v => return Err(ConfigError::Asymmetric(a, b)),
                _ => {}
            }
            if v > 0 {
                cfg.intersections.insert(k, v);
            }
        }
        Ok(cfg)
    }

    /// Like [`new`](Self::new) but accepts signed input (as read from files).
    pub fn from_signed(
        components: Vec<Component>,
        intersections: impl IntoIterator<Item = (u32, u32, i64)>,
    ) -> Result<Self, ConfigError> {
        let mut out = Vec::new();
        for (a, b, v) in intersections {
            if v < 0 {
                return Err(ConfigError::NegativeIntersection(a, b));
            }
            out.push((a, b, v as u64));
        }
        Self::new(components, out)
    }

    pub fn empty() -> Self {
        CurveConfiguration::default()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, id: u32) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn intersection(&self, a: u32, b: u32) -> u64 {
        if a == b {
            return 0;
        }
        self.intersections.get(&key(a, b)).copied().unwrap_or(0)
    }

    /// Nonzero off-diagonal entries `(i, j, C_i·C_j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, u64)> + '_ {
        self.intersections.iter().map(|(&(a, b), &v)| (a, b, v))
    }

    pub fn set_self_intersection(&mut self, id: u32, value: i64) -> Result<(), ConfigError> {
        let c = self
            .components
            .iter_mut()
            .find(|c| c.id == id)
            .ok_or(ConfigError::UnknownId(id))?;
        c.self_int = Some(value);
        Ok(())
    }

    /// `Σ_{j≠i} m_j (C_i · C_j)`
    pub fn neighbour_sum(&self, id: u32) -> u64 {
        self.components
            .iter()
            .filter(|c| c.id != id)
            .map(|c| c.mult * self.intersection(id, c.id))
            .sum()
    }

    /// `F · C_i` using the stored self-intersection.
    pub fn fibre_dot(&self, id: u32) -> Result<i64, ConfigError> {
        let c = self.component(id).ok_or(ConfigError::UnknownId(id))?;
        let s = c.self_int.ok_or(ConfigError::MissingSelfIntersection(id))?;
        Ok(self.neighbour_sum(id) as i64 + c.mult as i64 * s)
    }

    pub fn winters_check(&self) -> WintersReport {
        let witnesses: Vec<_> = self
            .components
            .iter()
            .map(|c| {
                let sum = self.neighbour_sum(c.id);
                WintersWitness {
                    id: c.id,
                    mult: c.mult,
                    sum,
                    divides: sum.is_multiple_of(c.mult),
                }
            })
            .collect();
        WintersReport {
            pass: witnesses.iter().all(|w| w.divides),
            witnesses,
        }
    }

    /// Fill every self-intersection from `F · C_i = 0`.
    pub fn derive_self_intersections(&self) -> Result<CurveConfiguration, ConfigError> {
        let mut out = self.clone();
        for c in out.components.iter_mut() {
            let sum = self.neighbour_sum(c.id);
            if !sum.is_multiple_of(c.mult) {
                return Err(ConfigError::Divisibility {
                    id: c.id,
                    mult: c.mult,
                    sum: sum as i64,
                });
            }
            c.self_int = Some(-((sum / c.mult) as i64));
        }
        Ok(out)
    }

    /// Derive missing self-intersections and validate supplied ones.
    pub fn with_self_intersections(&self) -> Result<CurveConfiguration, ConfigError> {
        let derived = self.derive_self_intersections();
        let mut out = self.clone();
        for i in 0..out.components.len() {
            let id = out.components[i].id;
            match out.components[i].self_int {
                Some(_) => {
                    let v = out.fibre_dot(id)?;
                    if v != 0 {
                        return Err(ConfigError::NotNumericalFibre { id, value: v });
                    }
                }
                None => {
                    let d = derived.as_ref().map_err(Clone::clone)?;
                    out.components[i].self_int = d.components[i].self_int;
                }
            }
        }
        Ok(out)
    }

    /// Genus from adjunction: `2g - 2 = Σ m_i (2 p_a(C_i) - 2 - C_i²)`.
    pub fn fibre_genus(&self) -> Result<i64, ConfigError> {
        let mut total: i64 = 0;
        for c in &self.components {
            let v = self.fibre_dot(c.id)?;
            if v != 0 {
                return Err(ConfigError::NotNumericalFibre { id: c.id, value: v });
            }
            let s = c.self_int.expect("checked by fibre_dot");
            total += c.mult as i64 * (2 * c.pa as i64 - 2 - s);
        }
        if total.is_odd() {
            return Err(ConfigError::OddAdjunction(total));
        }
        Ok(total / 2 + 1)
    }

    pub fn is_connected(&self) -> bool {
        let Some(first) = self.components.first() else {
            return true;
        };
        let mut seen = BTreeSet::new();
        let mut stack = vec![first.id];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            for c in &self.components {
                if !seen.contains(&c.id) && self.intersection(id, c.id) > 0 {
                    stack.push(c.id);
                }
            }
        }
        seen.len() == self.components.len()
    }

    pub fn fibre_predicates(&self) -> FibrePredicates {
        let gcd = self.components.iter().fold(0u64, |g, c| g.gcd(&c.mult));
        let min = self.components.iter().map(|c| c.mult).min().unwrap_or(0);
        let connected = self.is_connected();
        FibrePredicates {
            gcd,
            min,
            connected,
            is_multiple: gcd > 1,
            is_c_fibre: gcd == 1 && min > 1,
            is_valid_fibration_fibre: connected && gcd == 1,
        }
    }

    fn minus_one_curves(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.pa == 0 && c.self_int == Some(-1))
    }

    /// Blow down one `(-1)`-curve, updating its neighbours.
    pub fn contract(&self, id: u32) -> Result<CurveConfiguration, ConfigError> {
        let e = self.component(id).ok_or(ConfigError::UnknownId(id))?;
        if e.self_int.is_none() {
            return Err(ConfigError::MissingSelfIntersection(id));
        }
        let rest: Vec<Component> = self
            .components
            .iter()
            .filter(|c| c.id != id)
            .map(|c| {
                let k = self.intersection(c.id, id) as i64;
                let mut c = c.clone();
                c.self_int = c.self_int.map(|s| s + k * k);
                c
            })
            .collect();
        let mut inter = BTreeMap::new();
        for (i, a) in rest.iter().enumerate() {
            for b in &rest[i + 1..] {
                let v = self.intersection(a.id, b.id) + self.intersection(a.id, id) * self.intersection(b.id, id);
                if v > 0 {
                    inter.insert(key(a.id, b.id), v);
                }
            }
        }
        Ok(CurveConfiguration {
            components: rest,
            intersections: inter,
        })
    }

    /// Contract smooth rational `(-1)`-curves, lowest id first, to a fixpoint.
    pub fn contract_minus_one(&self) -> Result<(CurveConfiguration, usize), ConfigError> {
        let mut cur = self.clone();
        let mut count = 0;
        loop {
            let next = cur.minus_one_curves().map(|c| c.id).min();
            match next {
                Some(id) => {
                    cur = cur.contract(id)?;
                    count += 1;
                }
                None => return Ok((cur, count)),
            }
        }
    }

    /// Same fixpoint, contracting in the order given by `pick` (used to test
    /// order independence).
    pub fn contract_minus_one_by<F>(&self, mut pick: F) -> Result<(CurveConfiguration, usize), ConfigError>
    where
        F: FnMut(&[u32]) -> usize,
    {
        let mut cur = self.clone();
        let mut count = 0;
        loop {
            let ids: Vec<u32> = cur.minus_one_curves().map(|c| c.id).collect();
            if ids.is_empty() {
                return Ok((cur, count));
            }
            let id = ids[pick(&ids) % ids.len()];
            cur = cur.contract(id)?;
            count += 1;
        }
    }
}

/// Multiplicities `n` with `n | g - 1`, each with `p_a(E) = 1 + (g-1)/n`.
pub fn multiple_fibre_constraints(g: u64) -> MultipleFibreConstraints {
    if g == 1 {
        return MultipleFibreConstraints::AllMultiplicities;
    }
    if g == 0 {
        // g - 1 = -1: only n = 1, with p_a(E) = 0.
        return MultipleFibreConstraints::Finite(vec![MultipleFibreOption {
            n: 1,
            quotient_genus: 0,
        }]);
    }
    let d = g - 1;
    MultipleFibreConstraints::Finite(
        (1..=d)
            .filter(|n| d.is_multiple_of(*n))
            .map(|n| MultipleFibreOption {
                n,
                quotient_genus: 1 + d / n,
            })
            .collect(),
    )
}

/// Campana's genus-13 configuration: three components of multiplicity 2 and
/// two of multiplicity 3, rational, pairwise meeting once.
pub fn genus_thirteen_configuration() -> CurveConfiguration {
    let mults = [2, 2, 2, 3, 3];
    let comps = mults
        .iter()
        .enumerate()
        .map(|(i, &m)| Component::rational(i as u32, m))
        .collect();
    let mut edges = Vec::new();
    for i in 0..5u32 {
        for j in i + 1..5 {
            edges.push((i, j, 1));
        }
    }
    CurveConfiguration::new(comps, edges).expect("valid configuration")
}

/// `m1 A + m2 B`, rational components meeting in `k` points.
pub fn two_component_configuration(m1: u64, m2: u64, k: u64) -> CurveConfiguration {
    CurveConfiguration::new(
        vec![Component::rational(0, m1), Component::rational(1, m2)],
        [(0, 1, k)],
    )
    .expect("valid configuration")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_thirteen() {
        let cfg = genus_thirteen_configuration();
        let w = cfg.winters_check();
        assert!(w.pass);
        let sums: Vec<u64> = w.witnesses.iter().map(|w| w.sum).collect();
        assert_eq!(sums, [10, 10, 10, 9, 9]);
        let d = cfg.derive_self_intersections().unwrap();
        let si: Vec<i64> = d.components().iter().map(|c| c.self_int.unwrap()).collect();
        assert_eq!(si, [-5, -5, -5, -3, -3]);
        assert_eq!(d.fibre_genus().unwrap(), 13);
    }

    #[test]
    fn two_a_three_b() {
        let bad = two_component_configuration(2, 3, 5);
        assert!(!bad.winters_check().pass);
        assert!(matches!(
            bad.derive_self_intersections(),
            Err(ConfigError::Divisibility { id: 0, .. })
        ));
        let cfg = two_component_configuration(2, 3, 6)
            .derive_self_intersections()
            .unwrap();
        assert_eq!(cfg.component(0).unwrap().self_int, Some(-9));
        assert_eq!(cfg.component(1).unwrap().self_int, Some(-4));
        assert_eq!(cfg.fibre_genus().unwrap(), 11);
        let p = cfg.fibre_predicates();
        assert_eq!((p.gcd, p.min, p.connected, p.is_c_fibre), (1, 2, true, true));
    }

    #[test]
    fn single_components() {
        for m in 1..5 {
            let cfg = CurveConfiguration::new(vec![Component::rational(0, m)], []).unwrap();
            assert!(cfg.winters_check().pass);
        }
        let mut smooth = CurveConfiguration::new(
            vec![Component {
                id: 0,
                mult: 1,
                pa: 7,
                self_int: None,
            }],
            [],
        )
        .unwrap();
        smooth = smooth.derive_self_intersections().unwrap();
        assert_eq!(smooth.component(0).unwrap().self_int, Some(0));
        assert_eq!(smooth.fibre_genus().unwrap(), 7);
        let p = smooth.fibre_predicates();
        assert!(!p.is_c_fibre && !p.is_multiple && p.gcd == 1 && p.min == 1);

        let double = CurveConfiguration::new(vec![Component::rational(0, 2)], []).unwrap();
        let p = double.fibre_predicates();
        assert!(p.is_multiple && !p.is_c_fibre && !p.is_valid_fibration_fibre);
    }

    #[test]
    fn multiple_fibres() {
        assert_eq!(
            multiple_fibre_constraints(2),
            MultipleFibreConstraints::Finite(vec![MultipleFibreOption {
                n: 1,
                quotient_genus: 2
            }])
        );
        let c13 = multiple_fibre_constraints(13);
        assert!(c13.admits(3));
        match c13 {
            MultipleFibreConstraints::Finite(v) => {
                let o = v.iter().find(|o| o.n == 3).unwrap();
                assert_eq!(o.quotient_genus, 5);
            }
            _ => unreachable!(),
        }
        assert_eq!(
            multiple_fibre_constraints(1),
            MultipleFibreConstraints::AllMultiplicities
        );
    }

    #[test]
    fn contraction() {
        // E(-1, mult 2) meeting C (mult 2... ) once: C^2 goes up by one.
        let mut cfg =
            CurveConfiguration::new(vec![Component::rational(0, 1), Component::rational(1, 1)], [(0, 1, 1)]).unwrap();
        cfg.set_self_intersection(0, -1).unwrap();
        cfg.set_self_intersection(1, -1).unwrap();
        let (out, n) = cfg.contract_minus_one().unwrap();
        assert_eq!(n, 1);
        assert_eq!(out.component(1).unwrap().self_int, Some(0));

        let g13 = genus_thirteen_configuration().derive_self_intersections().unwrap();
        let (same, n) = g13.contract_minus_one().unwrap();
        assert_eq!(n, 0);
        assert_eq!(same, g13);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            CurveConfiguration::new(vec![Component::rational(0, 1), Component::rational(0, 2)], []),
            Err(ConfigError::DuplicateId(0))
        );
        assert_eq!(
            CurveConfiguration::new(vec![Component::rational(0, 1)], [(0, 0, 1)]),
            Err(ConfigError::SelfPair(0))
        );
        assert_eq!(
            CurveConfiguration::new(
                vec![Component::rational(0, 1), Component::rational(1, 1)],
                [(0, 1, 1), (1, 0, 2)]
            ),
            Err(ConfigError::Asymmetric(1, 0))
        );
    }

    #[test]
    fn supplied_self_intersections_are_validated() {
        let mut cfg = two_component_configuration(2, 3, 6);
        cfg.set_self_intersection(0, -8).unwrap();
        assert!(matches!(
            cfg.with_self_intersections(),
            Err(ConfigError::NotNumericalFibre { id: 0, .. })
        ));
    }
}
