//! Exact rational linear solving via p-adic lifting.
//!
//! Pivot positions come from mod-p elimination, the square pivot subsystem is
//! solved by Dixon lifting with rational reconstruction, and the candidate is
//! verified against the full system by exact arithmetic. An unlucky prime can
//! only cause a retry, never a wrong answer; a final exact-Gauss fallback
//! keeps `None` (inconsistent) verdicts certified as well.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::mat::{QMat, ZMat};
use super::modp::{rank_profile, LuModP, PrimeField};
use crate::num::{denominator_lcm, Q, Z};

/// Solves A·x = b over the rationals for arbitrary (rectangular, possibly
/// singular) A. Returns a verified solution, or None when the system is
/// inconsistent.
pub fn solve_rational(a: &QMat, b: &[Q]) -> Option<Vec<Q>> {
    assert_eq!(b.len(), a.rows(), "solve shape");
    let (az, bz) = clear_denominators(a, b);
    if a.cols() == 0 {
        return bz.iter().all(|x| x.is_zero()).then(Vec::new);
    }

    for p in super::modp::prime_sequence().take(6) {
        let field = PrimeField::new(p);
        match try_prime(&field, &az, &bz, a, b) {
            Attempt::Solved(x) => return Some(x),
            Attempt::Retry => continue,
        }
    }
    // certified fallback
    gauss_solve(a, b)
}

enum Attempt {
    Solved(Vec<Q>),
    Retry,
}

fn try_prime(field: &PrimeField, az: &ZMat, bz: &[Z], a_orig: &QMat, b_orig: &[Q]) -> Attempt {
    let ap = super::modp::reduce_zmat(field, az);
    let profile = rank_profile(field, &ap);
    if profile.rank == 0 {
        let x = vec![Q::zero(); az.cols()];
        return if verify(a_orig, &x, b_orig) { Attempt::Solved(x) } else { Attempt::Retry };
    }
    let r = profile.rank;
    let sub = ZMat::from_fn(r, r, |i, j| {
        az[(profile.pivot_rows[i], profile.pivot_cols[j])].clone()
    });
    let sub_p = super::modp::reduce_zmat(field, &sub);
    let Some(lu) = LuModP::new(*field, &sub_p) else {
        return Attempt::Retry;
    };
    let rhs: Vec<Z> = profile.pivot_rows.iter().map(|&i| bz[i].clone()).collect();
    let Some(y) = dixon_lift(field, &lu, &sub, &rhs) else {
        return Attempt::Retry;
    };
    let mut x = vec![Q::zero(); az.cols()];
    for (j, &col) in profile.pivot_cols.iter().enumerate() {
        x[col] = y[j].clone();
    }
    if verify(a_orig, &x, b_orig) {
        Attempt::Solved(x)
    } else {
        Attempt::Retry
    }
}

fn verify(a: &QMat, x: &[Q], b: &[Q]) -> bool {
    a.matvec(x) == b
}

/// p-adic lifting for a square integer system known nonsingular mod p.
fn dixon_lift(field: &PrimeField, lu: &LuModP, s: &ZMat, b: &[Z]) -> Option<Vec<Q>> {
    let n = b.len();
    let p_big = Z::from(field.p);
    let max_iters = lifting_bound(s, b);

    let mut residual: Vec<Z> = b.to_vec();
    let mut acc = vec![Z::zero(); n];
    let mut modulus = Z::from(1u8);

    for iter in 0..max_iters {
        let r_mod: Vec<u64> = residual.iter().map(|z| field.from_z(z)).collect();
        let xi = lu.solve(&r_mod);
        for (ai, &x) in acc.iter_mut().zip(&xi) {
            *ai += &modulus * Z::from(x);
        }
        // residual = (residual - S * xi) / p, exactly
        let sxi = s.matvec(&xi.iter().map(|&x| Z::from(x)).collect::<Vec<_>>());
        for (ri, si) in residual.iter_mut().zip(sxi) {
            let t = &*ri - si;
            debug_assert!((&t % &p_big).is_zero());
            *ri = t / &p_big;
        }
        modulus *= &p_big;

        if residual.iter().all(|z| z.is_zero()) {
            // exact integer solution reached
            return Some(acc.iter().map(|z| Q::from(balanced_mod(z, &modulus))).collect());
        }
        if iter >= 2 && iter % 2 == 0 {
            if let Some(candidate) = reconstruct_all(&acc, &modulus) {
                if s.matvec_q(&candidate) == b.iter().map(|z| Q::from(z.clone())).collect::<Vec<_>>()
                {
                    return Some(candidate);
                }
            }
        }
    }
    reconstruct_all(&acc, &modulus).filter(|candidate| {
        s.matvec_q(candidate) == b.iter().map(|z| Q::from(z.clone())).collect::<Vec<_>>()
    })
}

fn balanced_mod(z: &Z, m: &Z) -> Z {
    let r = z.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn reconstruct_all(acc: &[Z], modulus: &Z) -> Option<Vec<Q>> {
    acc.iter().map(|z| rational_reconstruct(z, modulus)).collect()
}

/// Wang-style rational reconstruction: n/d with n ≡ u·d (mod m) and
/// |n|, d ≤ sqrt(m/2). The caller always verifies the result exactly.
fn rational_reconstruct(u: &Z, m: &Z) -> Option<Q> {
    let u = u.mod_floor(m);
    let bound = num_integer::Roots::sqrt(&(m / Z::from(2u8)));
    let (mut r0, mut r1) = (m.clone(), u);
    let (mut t0, mut t1) = (Z::zero(), Z::from(1u8));
    while r1 > bound {
        if r1.is_zero() {
            return None;
        }
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() {
        return None;
    }
    let (num, den) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    if den > bound || den.is_zero() {
        return None;
    }
    if num.gcd(&den) != Z::from(1u8) {
        return None;
    }
    Some(Q::new(num, den))
}

/// Number of lifting steps sufficient for reconstruction, from a Hadamard
/// bound on the pivot subsystem.
fn lifting_bound(s: &ZMat, b: &[Z]) -> usize {
    let n = s.rows().max(1);
    let mut max_bits = 1u64;
    for i in 0..s.rows() {
        for j in 0..s.cols() {
            max_bits = max_bits.max(s[(i, j)].bits());
        }
    }
    for z in b {
        max_bits = max_bits.max(z.bits());
    }
    // |det| ≤ (sqrt(n) * 2^max_bits)^n; solution num/den within that
    let digits_bits = (n as u64) * (max_bits + (usize::BITS as u64)) + 64;
    // each step contributes ~61 bits; need numerator + denominator headroom
    (2 * digits_bits / 61 + 8) as usize
}

/// Exact Gauss-Jordan solve over Q; certified but slow. Used as the terminal
/// fallback and as an independent oracle in tests.
pub fn gauss_solve(a: &QMat, b: &[Q]) -> Option<Vec<Q>> {
    let rows = a.rows();
    let cols = a.cols();
    let mut work: Vec<Vec<Q>> = (0..rows)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut pivot_row = 0usize;
    for col in 0..cols {
        let Some(pr) = (pivot_row..rows).find(|&r| !work[r][col].is_zero()) else {
            continue;
        };
        work.swap(pivot_row, pr);
        let inv = work[pivot_row][col].clone();
        for c in col..=cols {
            let v = work[pivot_row][c].clone() / inv.clone();
            work[pivot_row][c] = v;
        }
        for r in 0..rows {
            if r != pivot_row && !work[r][col].is_zero() {
                let factor = work[r][col].clone();
                for c in col..=cols {
                    let delta = factor.clone() * work[pivot_row][c].clone();
                    work[r][c] -= delta;
                }
            }
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    // inconsistent iff a zero row has nonzero rhs
    for r in pivot_row..rows {
        if work[r][..cols].iter().all(|x| x.is_zero()) && !work[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Q::zero(); cols];
    for (col, pr) in pivot_of_col.iter().enumerate() {
        if let Some(pr) = pr {
            x[col] = work[*pr][cols].clone();
        }
    }
    // the rows beyond pivot_row may still constrain x; verify
    if a.matvec(&x) == b.to_vec() {
        Some(x)
    } else {
        None
    }
}

fn clear_denominators(a: &QMat, b: &[Q]) -> (ZMat, Vec<Z>) {
    let rows = a.rows();
    let mut az = ZMat::zeros(rows, a.cols());
    let mut bz = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut vals: Vec<Q> = a.row(i).to_vec();
        vals.push(b[i].clone());
        let m = denominator_lcm(&vals);
        for j in 0..a.cols() {
            let scaled = &a[(i, j)] * Q::from(m.clone());
            debug_assert!(scaled.denom().to_u8() == Some(1));
            az[(i, j)] = scaled.numer().clone();
        }
        let scaled = &b[i] * Q::from(m.clone());
        bz.push(scaled.numer().clone());
    }
    (az, bz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat::IMat;
    use crate::num::q_ratio;

    #[test]
    fn solves_small_rational_system() {
        // x + y/2 = 3, y = 4 -> x = 1, y = 4
        let a = QMat::from_rows(vec![
            vec![q_ratio(1, 1), q_ratio(1, 2)],
            vec![q_ratio(0, 1), q_ratio(1, 1)],
        ]);
        let b = vec![q_ratio(3, 1), q_ratio(4, 1)];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x, vec![q_ratio(1, 1), q_ratio(4, 1)]);
    }

    #[test]
    fn detects_inconsistency() {
        let a = QMat::from_rows(vec![vec![q_ratio(1, 1)], vec![q_ratio(2, 1)]]);
        let b = vec![q_ratio(1, 1), q_ratio(3, 1)];
        assert!(solve_rational(&a, &b).is_none());
        assert!(gauss_solve(&a, &b).is_none());
    }

    #[test]
    fn singular_but_consistent() {
        let a = QMat::from_rows(vec![
            vec![q_ratio(1, 1), q_ratio(1, 1)],
            vec![q_ratio(2, 1), q_ratio(2, 1)],
        ]);
        let b = vec![q_ratio(5, 1), q_ratio(10, 1)];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(a.matvec(&x), b);
    }

    #[test]
    fn matches_gauss_on_random_systems() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..60 {
            let rows = rng.random_range(1..5);
            let cols = rng.random_range(1..5);
            let a = QMat::from_fn(rows, cols, |_, _| q_ratio(rng.random_range(-4..5), 1));
            let b: Vec<Q> = (0..rows).map(|_| q_ratio(rng.random_range(-4..5), 1)).collect();
            let fast = solve_rational(&a, &b);
            let slow = gauss_solve(&a, &b);
            match (&fast, &slow) {
                (Some(x), Some(_)) => assert_eq!(a.matvec(x), b),
                (None, None) => {}
                _ => panic!("solver disagreement: fast={fast:?} slow={slow:?}"),
            }
        }
    }

    #[test]
    fn big_denominator_solution() {
        // Hilbert-like ill conditioned small system exercises reconstruction
        let n = 6;
        let a = QMat::from_fn(n, n, |i, j| q_ratio(1, (i + j + 1) as i64));
        let b: Vec<Q> = (0..n).map(|i| q_ratio(1, (i + 1) as i64)).collect();
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(a.matvec(&x), b);
        let _ = IMat::zeros(1, 1);
    }
}
