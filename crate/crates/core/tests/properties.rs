use fibre_core::config::{genus_thirteen_configuration, two_component_configuration, Component, CurveConfiguration};
use fibre_core::fibre::track_fibre;
use fibre_core::invariants::{resolved_invariants, smooth_double_cover_invariants, Correction};
use fibre_core::orbifold::{cover_genus, delta_degree, rational_sign, OrbifoldBase};
use fibre_core::poly::{
    multiplicity_at_point, parse_bihomogeneous, parse_poly, AffinePoint, BiPolynomial, Chart, ProjCoord, Rational,
};
use fibre_core::resolution::{resolve_template, LocalTemplate};
use fibre_core::search::{enumerate_configurations, two_component_search, SearchSpace, TwoComponentEntry};
use num_integer::Integer;
use proptest::prelude::*;

fn fibre_dots_vanish(cfg: &CurveConfiguration) -> bool {
    cfg.components().iter().all(|c| cfg.fibre_dot(c.id) == Ok(0))
}

/// Blow up a point on `through` (one component, or the meeting point of two).
fn blow_up(cfg: &CurveConfiguration, through: &[u32]) -> CurveConfiguration {
    let new_id = cfg.components().iter().map(|c| c.id).max().unwrap() + 1;
    let mut comps: Vec<Component> = cfg
        .components()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            if through.contains(&c.id) {
                c.self_int = c.self_int.map(|s| s - 1);
            }
            c
        })
        .collect();
    let mult = through.iter().map(|id| cfg.component(*id).unwrap().mult).sum();
    comps.push(Component {
        id: new_id,
        mult,
        pa: 0,
        self_int: Some(-1),
    });
    let mut edges: Vec<(u32, u32, u64)> = cfg
        .edges()
        .map(|(a, b, k)| {
            if through.len() == 2 && through.contains(&a) && through.contains(&b) {
                (a, b, k - 1)
            } else {
                (a, b, k)
            }
        })
        .filter(|e| e.2 > 0)
        .collect();
    for id in through {
        edges.push((*id, new_id, 1));
    }
    CurveConfiguration::new(comps, edges).unwrap()
}

fn strip(cfg: &CurveConfiguration) -> CurveConfiguration {
    let comps = cfg
        .components()
        .iter()
        .map(|c| Component {
            self_int: None,
            ..c.clone()
        })
        .collect();
    CurveConfiguration::new(comps, cfg.edges()).unwrap()
}

fn base_fibre() -> impl Strategy<Value = CurveConfiguration> {
    prop_oneof![
        (1u64..4, 1u32..3).prop_map(|(m, pa)| {
            CurveConfiguration::new(
                vec![Component {
                    id: 0,
                    mult: m,
                    pa,
                    self_int: Some(0),
                }],
                [],
            )
            .unwrap()
        }),
        (
            prop::sample::select(vec![(2u64, 3u64), (2, 5), (3, 4), (3, 5)]),
            1u64..3
        )
            .prop_map(|((a, b), j)| {
                two_component_configuration(a, b, a * b * j)
                    .derive_self_intersections()
                    .unwrap()
            }),
        Just(genus_thirteen_configuration().derive_self_intersections().unwrap()),
    ]
}

fn blown_up() -> impl Strategy<Value = (CurveConfiguration, CurveConfiguration, Vec<CurveConfiguration>)> {
    (base_fibre(), prop::collection::vec((any::<u16>(), any::<bool>()), 0..7)).prop_map(|(base, ops)| {
        let mut cur = base.clone();
        let mut history = vec![cur.clone()];
        for (i, pair) in ops {
            let edges: Vec<_> = cur.edges().collect();
            let next = if pair && !edges.is_empty() {
                let (a, b, _) = edges[i as usize % edges.len()];
                blow_up(&cur, &[a, b])
            } else {
                let comps = cur.components();
                blow_up(&cur, &[comps[i as usize % comps.len()].id])
            };
            cur = next;
            history.push(cur.clone());
        }
        (base, cur, history)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn fibre_dot_vanishes_through_blow_ups_and_contractions((base, cfg, history) in blown_up()) {
        for h in &history {
            prop_assert!(fibre_dots_vanish(h));
        }
        prop_assert_eq!(&strip(&cfg).derive_self_intersections().unwrap(), &cfg);
        let mut cur = cfg.clone();
        let mut steps = 0;
        while let Some(id) = cur.components().iter().find(|c| c.pa == 0 && c.self_int == Some(-1)).map(|c| c.id) {
            cur = cur.contract(id).unwrap();
            steps += 1;
            prop_assert!(fibre_dots_vanish(&cur));
        }
        prop_assert_eq!(steps, history.len() - 1);
        prop_assert_eq!(&cur, &base);
    }

    #[test]
    fn contraction_order_independent((base, cfg, _h) in blown_up(), picks in prop::collection::vec(any::<usize>(), 8)) {
        let (a, na) = cfg.contract_minus_one().unwrap();
        let mut k = 0;
        let (b, nb) = cfg
            .contract_minus_one_by(|ids| {
                k += 1;
                picks[k % picks.len()] % ids.len()
            })
            .unwrap();
        prop_assert_eq!(na, nb);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &base);
    }
}

fn bihomogeneous_text(a: u32, b: u32, coeffs: &[i64]) -> String {
    let mut terms = Vec::new();
    let mut idx = 0;
    for i in 0..=b {
        for j in 0..=a {
            let c = coeffs[idx % coeffs.len()];
            idx += 1;
            if c != 0 {
                terms.push(format!("({c})*x^{i}*z^{}*t^{j}*s^{}", b - i, a - j));
            }
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn bipoly() -> impl Strategy<Value = BiPolynomial> {
    (0u32..4, 0u32..4, prop::collection::vec(-3i64..4, 1..20))
        .prop_map(|(a, b, c)| parse_bihomogeneous(&bihomogeneous_text(a, b, &c), Chart::XT).unwrap())
        .prop_filter("nonzero", |f| !f.poly.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chart_round_trip(f in bipoly()) {
        for c in Chart::ALL {
            let g = f.chart_change(c).unwrap();
            prop_assert_eq!(g.chart_change(Chart::XT).unwrap(), f.clone());
        }
    }

    #[test]
    fn multiplicity_is_additive(f in bipoly(), g in bipoly(), u in -2i64..3, v in -2i64..3) {
        let p = AffinePoint::new(Chart::XT, Rational::from_integer(u.into()), Rational::from_integer(v.into()));
        let fg = f.multiply(&g).unwrap();
        prop_assert_eq!(
            multiplicity_at_point(&fg, &p).unwrap(),
            multiplicity_at_point(&f, &p).unwrap() + multiplicity_at_point(&g, &p).unwrap()
        );
    }

    #[test]
    fn delta_degree_is_monotone(mults in prop::collection::vec(2u64..13, 0..6), extra in 2u64..13, pick in any::<usize>()) {
        let base = OrbifoldBase::p1(mults.clone()).unwrap();
        let d = delta_degree(&base);
        let mut more = mults.clone();
        more.push(extra);
        prop_assert!(delta_degree(&OrbifoldBase::p1(more).unwrap()) > d);
        if !mults.is_empty() {
            let mut bumped = mults.clone();
            bumped[pick % mults.len()] += 1;
            prop_assert!(delta_degree(&OrbifoldBase::p1(bumped).unwrap()) > d);
        }
    }

    #[test]
    fn cover_genus_sign(g in 0u32..3, mults in prop::collection::vec(2u64..7, 0..5), k in 1u64..4) {
        let base = OrbifoldBase::new(g, mults.clone()).unwrap();
        let d = mults.iter().fold(2u64, |acc, m| acc.lcm(m)) * k;
        if let Ok(gp) = cover_genus(&base, d) {
            let lhs = (gp as i64 - 1).signum() as i8;
            prop_assert_eq!(lhs, rational_sign(&delta_degree(&base)));
        }
    }

    #[test]
    fn search_oracles_agree(max_m in 2u64..6, max_k in 1u64..16) {
        let space = SearchSpace::c_fibres(2, max_m, max_k);
        let mut a: Vec<TwoComponentEntry> = enumerate_configurations(&space)
            .into_iter()
            .filter(|h| h.config.components().iter().all(|c| c.mult >= 2))
            .map(|h| {
                let c = h.config.components();
                TwoComponentEntry { genus: h.genus, m1: c[0].mult, m2: c[1].mult, k: h.config.intersection(0, 1) }
            })
            .filter(|e| e.m1 != e.m2 && e.m1.gcd(&e.m2) == 1)
            .collect();
        a.sort();
        prop_assert_eq!(a, two_component_search(max_m, max_k));
    }

    #[test]
    fn noether_after_every_entry(half_a in 0u32..7, half_b in 0u32..7, ms in prop::collection::vec(2u32..8, 0..6), contractions in 0usize..4) {
        let (a, b) = (2 * half_a, 2 * half_b);
        let raw = smooth_double_cover_invariants(a, b).unwrap();
        prop_assert_eq!(raw.c2, 6 + 2 * (a as i64 - 1) * (b as i64 - 1));
        let corrections: Vec<Correction> = ms
            .iter()
            .map(|&m| {
                let k = (m / 2) as i64;
                Correction { source: format!("m={m}"), d_chi: -k * (k - 1) / 2, d_k2: -2 * (k - 1) * (k - 1) }
            })
            .collect();
        for i in 0..=corrections.len() {
            let r = resolved_invariants(&raw, &corrections[..i], 0, 0).unwrap();
            prop_assert!(r.resolved.noether_holds());
        }
        let r = resolved_invariants(&raw, &corrections, contractions, 0).unwrap();
        prop_assert_eq!(r.resolved.ledger.len(), corrections.len() + contractions);
        let chi: i64 = raw.chi + corrections.iter().map(|c| c.d_chi).sum::<i64>();
        prop_assert_eq!(r.resolved.chi, chi);
        prop_assert_eq!(r.resolved.c2, 12 * r.resolved.chi - r.resolved.k2);
    }
}

fn local_branch() -> impl Strategy<Value = String> {
    let factor = prop_oneof![
        Just("t".to_string()),
        Just("x".to_string()),
        (1i64..4, 1u32..4).prop_map(|(c, k)| format!("(t - {c}*x^{k})")),
        (1i64..3).prop_map(|c| format!("(t^2 - {c}*x^3)")),
        (1i64..3).prop_map(|c| format!("(x^2 - {c}*t^3)")),
        (1i64..3).prop_map(|c| format!("(t^2 + {c}*t*x^3 + x^6)")),
    ];
    prop::collection::vec(factor, 2..5).prop_map(|v| v.join("*"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn total_transform_meets_every_component_trivially(expr in local_branch(), copies in 1u32..3) {
        let local = parse_poly(&expr, Chart::XT).unwrap().poly;
        let base = ProjCoord::Finite(Rational::from_integer(0.into()));
        let t = LocalTemplate { local, copies, base: base.clone(), line_contacts: 0 };
        let Ok(tree) = resolve_template(&t) else { return Ok(()); };
        let trace = track_fibre(&tree, &base);
        prop_assert_eq!(trace.snapshots.len(), tree.steps.len() + 1);
        for s in &trace.snapshots {
            prop_assert!(fibre_dots_vanish(s));
        }
        for step in &tree.steps {
            let ledger = tree.ledger();
            prop_assert_eq!(ledger.mult[&step.exceptional_id], step.through.iter().map(|id| trace.component(*id).unwrap().mult).sum::<u64>());
        }
    }
}
