//! Cross-module structural invariants that underpin the decision procedures.

mod common;

use common::{corpus, exhaustive_integer_solve};
use ihf::cochain::Cochain;
use ihf::complex::{dual_structure, generate};
use ihf::dynamics::{cycle_decomposition, flux_from_form};
use ihf::harmonic::transversal_certificate;
use ihf::homology::Homology;
use ihf::linalg::{integer_solve, solve_rational, ZMat};
use ihf::num::{q_from_i64, Q, Z};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// The dual 2-cell loop rows realize the transpose boundary rows up to a
/// global sign per cell: the combinatorial shape of Poincare duality that the
/// transversality systems rely on.
#[test]
fn dual_two_cells_match_boundary_rows() {
    for (name, c) in corpus() {
        if !c.is_orientable() || c.dimension() < 2 {
            continue;
        }
        let n = c.dimension();
        let ds = dual_structure(c).unwrap();
        let bdry = c.boundary_matrix(n - 1); // rows: (n-2)-simplices
        for cell in &ds.two_cells {
            let mut loop_row = vec![0i64; c.simplex_count(n - 1)];
            for &(e, s) in &cell.edges {
                loop_row[e] += s as i64;
            }
            let bd_row: Vec<i64> =
                (0..c.simplex_count(n - 1)).map(|f| bdry[(cell.around, f)]).collect();
            let plus = loop_row == bd_row;
            let minus = loop_row.iter().zip(&bd_row).all(|(a, b)| *a == -b);
            assert!(
                plus || minus,
                "{name}: dual cell around ridge {} must match the boundary row up to sign",
                cell.around
            );
        }
        // consequently the dual graph has one vertex per top cell
        assert_eq!(ds.dual_vertex_count, c.simplex_count(n));
    }
}

/// Definitive integer solving: agreement with an exhaustive search on tiny
/// systems and with planted solutions on larger ones.
#[test]
fn integer_solver_against_oracles() {
    let mut rng = StdRng::seed_from_u64(0x50caf);
    for _ in 0..40 {
        let rows = rng.random_range(1..=3);
        let cols = rng.random_range(1..=3);
        let a = ZMat::from_fn(rows, cols, |_, _| Z::from(rng.random_range(-3..=3)));
        let b: Vec<Z> = (0..rows).map(|_| Z::from(rng.random_range(-6..=6))).collect();
        let fast = integer_solve(&a, &b).unwrap();
        // Cramer-scale bound keeps the exhaustive search complete
        let oracle = exhaustive_integer_solve(&a, &b, 40);
        match (&fast, &oracle) {
            (Some(x), Some(_)) => assert_eq!(a.matvec(x), b),
            (None, None) => {
                // definitely no rational solution, or a non-integral one;
                // cross-check against the rational solver
                let aq = a.to_q();
                let bq: Vec<Q> = b.iter().map(|z| Q::from(z.clone())).collect();
                if let Some(x) = solve_rational(&aq, &bq) {
                    assert!(
                        x.iter().any(|v| !ihf::num::q_is_integer(v)),
                        "rational solution must be non-integral when integer solving fails"
                    );
                }
            }
            (got, want) => panic!("solver disagreement: got {got:?}, oracle {want:?}"),
        }
    }
    // planted solutions on wider systems always recovered with residual zero
    for _ in 0..50 {
        let a = ZMat::from_fn(4, 6, |_, _| Z::from(rng.random_range(-5..=5)));
        let x0: Vec<Z> = (0..6).map(|_| Z::from(rng.random_range(-4..=4))).collect();
        let b = a.matvec(&x0);
        let x = integer_solve(&a, &b).unwrap().expect("planted solution exists");
        assert_eq!(a.matvec(&x), b, "residual must vanish");
    }
}

/// Orbit decomposition splits a two-loop flux into cycles whose classes
/// cancel, and empty support is rejected by the transversal search.
#[test]
fn opposite_loops_decompose_with_cancelling_classes() {
    let c3 = ihf::complex::circle(3).unwrap();
    let (t2, maps) = ihf::complex::staircase_product(&c3, &c3).unwrap();
    let hom = Homology::new(&t2);
    let ds = dual_structure(&t2).unwrap();
    // zero-class pullback: loops in both directions
    let mut candidate = None;
    for last in [2i64, -2] {
        let cvals = Cochain::from_values(
            &c3,
            1,
            vec![q_from_i64(1), q_from_i64(last), q_from_i64(1)],
        )
        .unwrap();
        let omega = ihf::cochain::pullback(&t2, &c3, &maps.to_left, &cvals).unwrap();
        if hom.class_of(&omega).unwrap().real_part_is_zero() {
            candidate = Some(omega);
            break;
        }
    }
    let omega = candidate.expect("zero-class weighting exists");
    let flux = flux_from_form(&t2, &ds, &omega).unwrap();
    let cycles = cycle_decomposition(&t2, &ds, &hom, &flux).unwrap();
    assert!(cycles.len() >= 2, "two opposite orbit families");
    let mut sum = vec![Q::zero(); hom.cocycle_basis(1).len()];
    for cyc in &cycles {
        for (acc, v) in sum.iter_mut().zip(&cyc.class) {
            *acc += &cyc.weight * v;
        }
        // the period identity: period * (class/period) = class
        let recon: Vec<Q> = cyc
            .asymptotic_cycle()
            .iter()
            .map(|a| a * q_from_i64(cyc.period as i64))
            .collect();
        assert_eq!(recon, cyc.class);
    }
    assert!(sum.iter().all(Zero::is_zero), "classes cancel for a null-class flux");

    // empty support is a precondition violation
    let zero = Cochain::zero(&t2, 1);
    assert!(matches!(
        transversal_certificate(&t2, &ds, &zero),
        Err(ihf::error::Error::EmptySupport)
    ));
}

/// A single fiber column of the product 3-torus is one orbit: the flux
/// supported on the faces over one base triangle decomposes into exactly one
/// unit-weight cycle whose class is the fiber direction.
#[test]
fn single_fiber_loop_is_one_orbit_cycle() {
    let (t3, base, proj) = ihf::complex::torus3_with_projection();
    let vol = ihf::bundles::orientation_cocycle(&base).unwrap();
    let fiber = ihf::cochain::pullback(&t3, &base, &proj, &vol).unwrap();
    // restrict to the faces lying over one base triangle
    let tau = base.simplex(2, 0).to_vec();
    let mut column = Cochain::zero(&t3, 2);
    for (f, v) in fiber.values().iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let mut image: Vec<u32> =
            t3.simplex(2, f).iter().map(|&x| proj[x as usize] as u32).collect();
        image.sort_unstable();
        image.dedup();
        if image == tau {
            column.values_mut()[f] = v.clone();
        }
    }
    assert!(!column.is_zero());
    assert!(column.is_closed(&t3), "a fiber column is divergence-free");
    let ds = dual_structure(&t3).unwrap();
    let hom = Homology::new(&t3);
    let flux = flux_from_form(&t3, &ds, &column).unwrap();
    let cycles = cycle_decomposition(&t3, &ds, &hom, &flux).unwrap();
    assert_eq!(cycles.len(), 1, "one loop");
    let orbit = &cycles[0];
    assert_eq!(orbit.weight, q_from_i64(1));
    assert_eq!(orbit.period, 9, "nine tets lie over each base triangle");
    // the class is the fiber direction: proportional to the class of the
    // full fiber flux with ratio 1/18 (one column of eighteen)
    let full = flux_from_form(&t3, &ds, &fiber).unwrap();
    let full_class = ihf::dynamics::flux_class(&t3, &hom, &full).unwrap();
    for (a, b) in orbit.class.iter().zip(&full_class) {
        assert_eq!(a * q_from_i64(18), b.clone(), "column class is one eighteenth");
    }
    assert!(orbit.class.iter().any(|v| !v.is_zero()), "fiber class is nonzero");
}

/// An indicator cocycle of a single triangle generates the top cohomology of
/// the sphere.
#[test]
fn sphere_triangle_indicator_generates_top_cohomology() {
    let c = generate(&"sphere2".parse().unwrap()).unwrap();
    let hom = Homology::new(&c);
    let mut e = Cochain::zero(&c, 2);
    e.values_mut()[0] = q_from_i64(1);
    let cls = hom.class_of(&e).unwrap();
    assert_eq!(cls.free_coords.len(), 1);
    let coord = cls.free_coords[0].clone();
    assert!(coord == q_from_i64(1) || coord == q_from_i64(-1), "unit coordinate, got {coord:?}");
}
