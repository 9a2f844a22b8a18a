//! The shared twelve-instance flux corpus: closed codimension-one cochains
//! with pinned cross-section outcomes where an explicit argument fixes them
//! (an explicit certificate, or a vanishing class), and unpinned instances
//! that exercise the agreement properties.

use std::sync::OnceLock;

use ihf::bundles::orientation_cocycle;
use ihf::cochain::{pullback, Cochain};
use ihf::complex::{circle, generate, staircase_product, torus3_with_projection, SimplicialComplex};
use ihf::dec::DiagonalStar;
use ihf::harmonic::NonvanishingRule;
use ihf::homology::Homology;
use ihf::num::{q_from_i64, Q};
use num_traits::Zero;

pub struct FluxGroup {
    pub complex: SimplicialComplex,
    /// (name, cochain, pinned section verdict if an argument fixes it)
    pub instances: Vec<(String, Cochain, Option<bool>)>,
}

static FLUX_CORPUS: OnceLock<Vec<FluxGroup>> = OnceLock::new();

pub fn flux_corpus() -> &'static [FluxGroup] {
    FLUX_CORPUS.get_or_init(build_corpus)
}

fn build_corpus() -> Vec<FluxGroup> {
    let mut groups = Vec::new();

    // --- product 3-torus: fiber fluxes and their degenerations
    {
        let (t3, base, proj) = torus3_with_projection();
        let vol = orientation_cocycle(&base).expect("oriented base");
        let fiber = pullback(&t3, &base, &proj, &vol).expect("simplicial projection");
        let fiber5 = fiber.scaled(&q_from_i64(5));

        // exact cochain with full dual-vertex coverage
        let exact = {
            let mut phi = Cochain::zero(&t3, 1);
            for (i, v) in phi.values_mut().iter_mut().enumerate() {
                *v = q_from_i64(((i as i64 + 2) * (i as i64 + 5)) % 11 - 3);
            }
            phi.coboundary(&t3)
        };

        // two opposite vertical sheets: reweight the base volume by a
        // balanced +-1 assignment; the class integrates to zero
        let sheets = {
            let mut weighted = vol.clone();
            for (t, v) in weighted.values_mut().iter_mut().enumerate() {
                if t % 2 == 1 {
                    *v = -v.clone();
                }
            }
            let hom = Homology::new(&base);
            let cls = hom.class_of(&weighted).expect("closed");
            assert!(cls.real_part_is_zero(), "sheet weighting must have zero class");
            pullback(&t3, &base, &proj, &weighted).expect("projection")
        };

        // a strictly positive reweighting: the fiber certificate still works
        let weighted_fiber = {
            let mut weighted = vol.clone();
            for (t, v) in weighted.values_mut().iter_mut().enumerate() {
                let g = 1 + (t as i64 % 2);
                *v = v.clone() * q_from_i64(g);
            }
            pullback(&t3, &base, &proj, &weighted).expect("projection")
        };

        groups.push(FluxGroup {
            complex: t3,
            instances: vec![
                ("torus3 fiber".into(), fiber, Some(true)),
                ("torus3 fiber x5".into(), fiber5, Some(true)),
                ("torus3 exact".into(), exact, Some(false)),
                ("torus3 opposite sheets".into(), sheets, Some(false)),
                ("torus3 weighted fiber".into(), weighted_fiber, Some(true)),
            ],
        });
    }

    // --- the 7-vertex torus: harmonic representatives and an exact cochain
    {
        let t2 = generate(&"torus2".parse().unwrap()).unwrap();
        let hom = Homology::new(&t2);
        let star = DiagonalStar::unit(&t2);
        let basis = hom.cocycle_basis(1);
        let h = |i: usize| {
            let cls = hom.class_of(&basis[i]).unwrap();
            ihf::dec::harmonic_representative(&t2, &hom, &star, &cls).unwrap()
        };
        let h_a = h(0);
        let h_b = h(1);
        let sum = h_a.add(&h_b);
        let combo = h_a.scaled(&q_from_i64(2)).sub(&h_b.scaled(&q_from_i64(3)));
        let exact = {
            let mut phi = Cochain::zero(&t2, 0);
            for (i, v) in phi.values_mut().iter_mut().enumerate() {
                *v = q_from_i64((i as i64 + 1) * (i as i64 + 1));
            }
            phi.coboundary(&t2)
        };
        drop(hom);
        groups.push(FluxGroup {
            complex: t2,
            instances: vec![
                ("torus2 harmonic a".into(), h_a, Some(true)),
                ("torus2 harmonic a+b".into(), sum, Some(true)),
                ("torus2 exact".into(), exact, Some(false)),
                ("torus2 harmonic 2a-3b".into(), combo, Some(true)),
            ],
        });
    }

    // --- the 9-vertex product torus: rotation flux and opposite loops
    {
        let c3 = circle(3).unwrap();
        let (t2, maps) = staircase_product(&c3, &c3).unwrap();
        let ones = Cochain::from_values(&c3, 1, vec![q_from_i64(1); 3]).unwrap();
        let rotation = pullback(&t2, &c3, &maps.to_left, &ones).unwrap();

        // a weighting of circle edges with zero total class
        let hom = Homology::new(&t2);
        let mut opposite = None;
        for last in [2i64, -2] {
            let c = Cochain::from_values(
                &c3,
                1,
                vec![q_from_i64(1), q_from_i64(last), q_from_i64(1)],
            )
            .unwrap();
            let cand = pullback(&t2, &c3, &maps.to_left, &c).unwrap();
            if hom.class_of(&cand).unwrap().real_part_is_zero() {
                opposite = Some(cand);
                break;
            }
        }
        let opposite = opposite.expect("one sign choice has zero class");
        drop(hom);
        groups.push(FluxGroup {
            complex: t2,
            instances: vec![
                ("product torus rotation".into(), rotation, None),
                ("product torus opposite loops".into(), opposite, Some(false)),
            ],
        });
    }

    // --- the sphere: everything closed is exact
    {
        let s2 = generate(&"sphere2".parse().unwrap()).unwrap();
        let mut phi = Cochain::zero(&s2, 0);
        for (i, v) in phi.values_mut().iter_mut().enumerate() {
            *v = q_from_i64((i as i64 + 1) * (i as i64 + 1));
        }
        let exact = phi.coboundary(&s2);
        groups.push(FluxGroup {
            complex: s2,
            instances: vec![("sphere2 exact".into(), exact, Some(false))],
        });
    }

    // sanity: twelve instances, all closed with nonempty support, all
    // passing the nonvanishing predicate required by the weight decider
    let total: usize = groups.iter().map(|g| g.instances.len()).sum();
    assert_eq!(total, 12, "corpus must have twelve instances");
    for group in &groups {
        for (name, omega, _) in &group.instances {
            assert!(omega.is_closed(&group.complex), "{name} must be closed");
            assert!(
                omega.values().iter().any(|v| !v.is_zero()),
                "{name} must have nonempty support"
            );
            NonvanishingRule::DualVertexCover
                .check(&group.complex, omega)
                .unwrap_or_else(|e| panic!("{name} fails the nonvanishing predicate: {e}"));
        }
    }
    let _ = Q::zero();
    groups
}
