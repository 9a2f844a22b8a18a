//! Shared corpus and independent oracles for the integration suites.
// Each test binary uses a different subset of these helpers.
#![allow(dead_code)]

use std::sync::OnceLock;

use ihf::complex::{generate, SimplicialComplex};
use ihf::dec::DiagonalStar;
use ihf::linalg::{gauss_solve, LinearSystem, QMat, ZMat};
use ihf::num::{q_from_i64, Q, Z};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;

pub const CORPUS_NAMES: [&str; 7] =
    ["sphere2", "torus2", "rp2", "klein", "torus3", "lens(2,1)", "lens(3,1)"];

static CORPUS: OnceLock<Vec<(String, SimplicialComplex)>> = OnceLock::new();

pub fn corpus() -> &'static [(String, SimplicialComplex)] {
    CORPUS.get_or_init(|| {
        CORPUS_NAMES
            .iter()
            .map(|name| {
                let c = generate(&name.parse().expect("generator name")).expect("generator");
                (name.to_string(), c)
            })
            .collect()
    })
}

pub fn random_star(c: &SimplicialComplex, rng: &mut StdRng) -> DiagonalStar {
    let weights = (0..=c.dimension())
        .map(|k| {
            (0..c.simplex_count(k))
                .map(|_| {
                    ihf::num::q_ratio(rng.random_range(1..=9), rng.random_range(1..=9))
                })
                .collect()
        })
        .collect();
    DiagonalStar::from_weights(c, weights).expect("positive weights")
}

/// Determinant of an integer matrix by exact cofactor-free elimination over
/// the rationals (small matrices only).
pub fn exact_det(m: &ZMat) -> Z {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut work: Vec<Vec<Q>> =
        (0..n).map(|i| (0..n).map(|j| Q::from(m[(i, j)].clone())).collect()).collect();
    let mut det = Q::one();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !work[r][col].is_zero()) else {
            return Z::zero();
        };
        if pr != col {
            work.swap(col, pr);
            det = -det;
        }
        let pivot = work[col][col].clone();
        det *= pivot.clone();
        for r in col + 1..n {
            if work[r][col].is_zero() {
                continue;
            }
            let f = work[r][col].clone() / pivot.clone();
            for cc in col..n {
                let delta = f.clone() * work[col][cc].clone();
                work[r][cc] -= delta;
            }
        }
    }
    assert!(det.denom().is_one());
    det.numer().clone()
}

/// gcd of all k x k minors; zero when every minor vanishes.
pub fn gcd_of_minors(m: &ZMat, k: usize) -> Z {
    let rows: Vec<usize> = (0..m.rows()).collect();
    let cols: Vec<usize> = (0..m.cols()).collect();
    let mut acc = Z::zero();
    for ri in combinations(&rows, k) {
        for ci in combinations(&cols, k) {
            let sub = ZMat::from_fn(k, k, |i, j| m[(ri[i], ci[j])].clone());
            let d = exact_det(&sub);
            acc = acc.gcd(&d);
            if acc.is_one() {
                return acc;
            }
        }
    }
    acc
}

pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Complete feasibility oracle for tiny systems by vertex enumeration on the
/// boxed polyhedron: every nonempty system with the given data bounds has a
/// point inside the box, and the boxed polyhedron is a polytope, so some
/// basic solution (an intersection of n active constraint planes) is
/// feasible.
pub fn vertex_enumeration_feasible(sys: &LinearSystem) -> bool {
    let n = sys.num_vars();
    assert!(n <= 3, "oracle is for tiny systems");
    let big = q_from_i64(1_000_000);
    // collect all hyperplanes: equalities, inequality boundaries, box walls
    let mut planes: Vec<(Vec<Q>, Q)> = Vec::new();
    for r in 0..sys.eq_lhs.rows() {
        planes.push((sys.eq_lhs.row(r).to_vec(), sys.eq_rhs[r].clone()));
    }
    for r in 0..sys.ineq_lhs.rows() {
        planes.push((sys.ineq_lhs.row(r).to_vec(), sys.ineq_rhs[r].clone()));
    }
    for j in 0..n {
        let mut unit = vec![Q::zero(); n];
        unit[j] = Q::one();
        planes.push((unit.clone(), big.clone()));
        planes.push((unit, -big.clone()));
    }
    let idx: Vec<usize> = (0..planes.len()).collect();
    for subset in combinations(&idx, n) {
        let a = QMat::from_fn(n, n, |i, j| planes[subset[i]].0[j].clone());
        let b: Vec<Q> = subset.iter().map(|&i| planes[i].1.clone()).collect();
        let Some(x) = gauss_solve(&a, &b) else {
            continue;
        };
        if ihf::linalg::verify_point(sys, &x) {
            return true;
        }
    }
    false
}

/// Exhaustive integer-solution oracle for tiny systems: search the cube
/// |x_i| <= bound.
pub fn exhaustive_integer_solve(a: &ZMat, b: &[Z], bound: i64) -> Option<Vec<Z>> {
    let n = a.cols();
    assert!(n <= 3);
    let mut x = vec![-bound; n];
    loop {
        let xv: Vec<Z> = x.iter().map(|&v| Z::from(v)).collect();
        if a.matvec(&xv) == b.to_vec() {
            return Some(xv);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            x[i] += 1;
            if x[i] <= bound {
                break;
            }
            x[i] = -bound;
            i += 1;
        }
    }
}
