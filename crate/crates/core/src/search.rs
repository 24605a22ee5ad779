//! Exhaustive searches over small fibre configurations.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::config::{Component, CurveConfiguration, FibrePredicates};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwoComponentEntry {
    pub genus: i64,
    pub m1: u64,
    pub m2: u64,
    pub k: u64,
}

/// C-fibres `m1 A + m2 B` with rational `A, B` meeting in `k` points,
/// `2 ≤ m1 < m2 ≤ max_m` coprime and `m1 m2 | k ≤ max_k`, sorted by genus.
pub fn two_component_search(max_m: u64, max_k: u64) -> Vec<TwoComponentEntry> {
    let mut out = Vec::new();
    for m1 in 2..=max_m {
        for m2 in m1 + 1..=max_m {
            if m1.gcd(&m2) != 1 {
                continue;
            }
            let step = m1 * m2;
            let mut k = step;
            while k <= max_k {
                let cfg = crate::config::two_component_configuration(m1, m2, k)
                    .derive_self_intersections()
                    .expect("m1 m2 divides k");
                let genus = cfg.fibre_genus().expect("numerical fibre");
                out.push(TwoComponentEntry { genus, m1, m2, k });
                k += step;
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchSpace {
    pub max_components: usize,
    pub max_mult: u64,
    pub max_intersection: u64,
    /// Largest arithmetic genus of a single component.
    pub max_component_genus: u32,
    pub max_genus: Option<i64>,
    pub require_c_fibre: bool,
    pub require_connected: bool,
    /// Self-intersections must be integral to be derived at all, so this
    /// filter is always in effect; kept for reporting.
    pub require_winters: bool,
    pub forbid_minus_one: bool,
}

impl SearchSpace {
    pub fn c_fibres(max_components: usize, max_mult: u64, max_intersection: u64) -> Self {
        SearchSpace {
            max_components,
            max_mult,
            max_intersection,
            max_component_genus: 0,
            max_genus: None,
            require_c_fibre: true,
            require_connected: true,
            require_winters: true,
            forbid_minus_one: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchHit {
    pub config: CurveConfiguration,
    pub genus: i64,
    pub predicates: FibrePredicates,
    /// Labels `(mult, p_a)` followed by the upper triangle, row-major.
    pub key: (Vec<(u64, u32)>, Vec<u64>),
}

/// Labels sorted nondecreasing; yields every multiset of size `n`.
fn label_vectors(n: usize, labels: &[(u64, u32)]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, start: usize, count: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..count {
            cur.push(i);
            rec(n, i, count, cur, out);
            cur.pop();
        }
    }
    rec(n, 0, labels.len(), &mut cur, &mut out);
    out
}

fn upper(n: usize, m: &[Vec<u64>]) -> Vec<u64> {
    let mut v = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in i + 1..n {
            v.push(m[i][j]);
        }
    }
    v
}

/// Permutations preserving the (sorted) label vector.
fn label_preserving_perms(labels: &[usize]) -> Vec<Vec<usize>> {
    let n = labels.len();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn rec(k: usize, labels: &[usize], perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == perm.len() {
            out.push(perm.clone());
            return;
        }
        for i in k..perm.len() {
            if labels[perm[i]] != labels[k] {
                continue;
            }
            perm.swap(k, i);
            rec(k + 1, labels, perm, out);
            perm.swap(k, i);
        }
    }
    rec(0, labels, &mut perm, &mut out);
    out
}

fn is_canonical(n: usize, m: &[Vec<u64>], perms: &[Vec<usize>]) -> bool {
    let own = upper(n, m);
    for p in perms {
        let mut permuted = Vec::with_capacity(own.len());
        for i in 0..n {
            for j in i + 1..n {
                permuted.push(m[p[i]][p[j]]);
            }
        }
        if permuted < own {
            return false;
        }
    }
    true
}

/// Every configuration in `space` up to isomorphism that passes the filters,
/// ordered by component count, then genus, then key.
pub fn enumerate_configurations(space: &SearchSpace) -> Vec<SearchHit> {
    let mut labels = Vec::new();
    for m in 1..=space.max_mult {
        for pa in 0..=space.max_component_genus {
            labels.push((m, pa));
        }
    }
    let mut hits = Vec::new();
    for n in 1..=space.max_components {
        let pairs = n * (n - 1) / 2;
        let mut found = Vec::new();
        for lv in label_vectors(n, &labels) {
            let perms = label_preserving_perms(&lv);
            let mut entries = vec![0u64; pairs];
            loop {
                let mut m = vec![vec![0u64; n]; n];
                let mut idx = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        m[i][j] = entries[idx];
                        m[j][i] = entries[idx];
                        idx += 1;
                    }
                }
                if is_canonical(n, &m, &perms) {
                    if let Some(hit) = evaluate(space, &lv, &labels, &m) {
                        found.push(hit);
                    }
                }
                // odometer
                let mut pos = 0;
                while pos < pairs && entries[pos] == space.max_intersection {
                    entries[pos] = 0;
                    pos += 1;
                }
                if pos == pairs {
                    break;
                }
                entries[pos] += 1;
            }
        }
        found.sort_by(|a, b| (a.genus, &a.key).cmp(&(b.genus, &b.key)));
        hits.extend(found);
    }
    hits
}

fn evaluate(space: &SearchSpace, lv: &[usize], labels: &[(u64, u32)], m: &[Vec<u64>]) -> Option<SearchHit> {
    let n = lv.len();
    let comps = lv
        .iter()
        .enumerate()
        .map(|(i, &l)| Component {
            id: i as u32,
            mult: labels[l].0,
            pa: labels[l].1,
            self_int: None,
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if m[i][j] > 0 {
                edges.push((i as u32, j as u32, m[i][j]));
            }
        }
    }
    let cfg = CurveConfiguration::new(comps, edges).ok()?;
    if !cfg.winters_check().pass {
        return None;
    }
    let cfg = cfg.derive_self_intersections().ok()?;
    let predicates = cfg.fibre_predicates();
    if space.require_c_fibre && !predicates.is_c_fibre {
        return None;
    }
    if space.require_connected && !predicates.connected {
        return None;
    }
    if space.forbid_minus_one && cfg.components().iter().any(|c| c.pa == 0 && c.self_int == Some(-1)) {
        return None;
    }
    let genus = cfg.fibre_genus().ok()?;
    if let Some(g) = space.max_genus {
        if genus > g {
            return None;
        }
    }
    Some(SearchHit {
        key: (lv.iter().map(|&l| labels[l]).collect(), upper(n, m)),
        config: cfg,
        genus,
        predicates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimum_is_eleven() {
        let t = two_component_search(30, 60);
        assert_eq!(
            t[0],
            TwoComponentEntry {
                genus: 11,
                m1: 2,
                m2: 3,
                k: 6
            }
        );
        assert!(t.iter().all(|e| e.genus >= 11));
        let first_25 = t.iter().find(|e| (e.m1, e.m2) == (2, 5)).unwrap();
        assert_eq!((first_25.k, first_25.genus), (10, 29));
        for e in &t {
            assert_eq!(e.genus, ((e.m1 + e.m2) * (e.k - 2) / 2 + 1) as i64);
        }
    }

    #[test]
    fn two_component_agreement() {
        let space = SearchSpace::c_fibres(2, 7, 24);
        let mut a: Vec<_> = enumerate_configurations(&space)
            .into_iter()
            .map(|h| {
                let c = h.config.components();
                TwoComponentEntry {
                    genus: h.genus,
                    m1: c[0].mult,
                    m2: c[1].mult,
                    k: h.config.intersection(0, 1),
                }
            })
            .collect();
        a.sort();
        assert_eq!(a, two_component_search(7, 24));
    }

    #[test]
    fn genus_thirteen_appears() {
        let space = SearchSpace::c_fibres(5, 3, 1);
        let hits = enumerate_configurations(&space);
        let target = crate::config::genus_thirteen_configuration();
        assert!(hits.iter().any(
            |h| h.genus == 13 && h.config.len() == 5 && h.config.edges().count() == 10 && {
                let mut m: Vec<u64> = h.config.components().iter().map(|c| c.mult).collect();
                m.sort();
                m == target.components().iter().map(|c| c.mult).collect::<Vec<_>>()
            }
        ));
    }

    #[test]
    fn empty_space() {
        let mut space = SearchSpace::c_fibres(0, 3, 1);
        assert!(enumerate_configurations(&space).is_empty());
        space.max_components = 1;
        assert!(enumerate_configurations(&space).is_empty());
    }

    #[test]
    fn canonical_form_dedups_triangle_orientations() {
        // Path a-b-c with distinct middle is counted once.
        let space = SearchSpace {
            max_components: 3,
            max_mult: 1,
            max_intersection: 1,
            max_component_genus: 0,
            max_genus: None,
            require_c_fibre: false,
            require_connected: true,
            require_winters: true,
            forbid_minus_one: false,
        };
        let hits = enumerate_configurations(&space);
        let three: Vec<_> = hits.iter().filter(|h| h.config.len() == 3).collect();
        // path and triangle
        assert_eq!(three.len(), 2);
    }
}
