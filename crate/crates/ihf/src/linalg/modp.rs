//! Word-size prime-field arithmetic and Gaussian elimination.
//!
//! Mod-p computations are used only to *locate* pivots and to drive p-adic
//! lifting; every verdict derived from them is certified afterwards by exact
//! integer or rational arithmetic. A nonzero determinant mod p is already an
//! exact certificate that the corresponding minor is nonzero over the
//! rationals, which is the one-directional fact the rank bounds rely on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::mat::Mat;
use crate::num::{Q, Z};

/// Deterministic sequence of 62-bit primes used for elimination and lifting.
/// The first is the Mersenne prime 2^61 - 1, which admits fast reduction.
pub fn prime_sequence() -> impl Iterator<Item = u64> {
    let mut candidate: u64 = (1 << 61) - 1;
    let mut first = true;
    std::iter::from_fn(move || {
        if first {
            first = false;
            return Some((1 << 61) - 1);
        }
        loop {
            candidate -= 2;
            if is_prime_u64(candidate) {
                return Some(candidate);
            }
        }
    })
}

/// Deterministic Miller-Rabin for u64 (the listed bases are exact below 3.3e24).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'base: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod_generic(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_generic(acc, b, m);
        }
        b = mul_mod_generic(b, b, m);
        e >>= 1;
    }
    acc
}

#[inline]
fn mul_mod_generic(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

const MERSENNE61: u64 = (1 << 61) - 1;

/// Arithmetic in F_p for a fixed word prime.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        PrimeField { p }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.p == MERSENNE61 {
            // fold the 122-bit product twice against 2^61 - 1
            let prod = a as u128 * b as u128;
            let lo = (prod & MERSENNE61 as u128) as u64;
            let hi = (prod >> 61) as u64;
            let mut s = lo + (hi & MERSENNE61) + (hi >> 61);
            while s >= MERSENNE61 {
                s -= MERSENNE61;
            }
            s
        } else {
            mul_mod_generic(a, b, self.p)
        }
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero mod p");
        pow_mod_field(self, a, self.p - 2)
    }

    pub fn from_z(&self, z: &Z) -> u64 {
        let m = Z::from(self.p);
        let r = z.mod_floor(&m);
        r.to_u64().expect("reduced residue fits u64")
    }

    /// Reduces a rational with denominator coprime to p.
    /// Returns None when p divides the denominator.
    pub fn from_q(&self, q: &Q) -> Option<u64> {
        let den = self.from_z(q.denom());
        if den == 0 {
            return None;
        }
        Some(self.mul(self.from_z(q.numer()), self.inv(den)))
    }
}

fn pow_mod_field(f: &PrimeField, mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = f.mul(acc, b);
        }
        b = f.mul(b, b);
        e >>= 1;
    }
    acc
}

/// Result of Gaussian elimination mod p: the rank together with the pivot
/// rows/columns, in pivot order. The submatrix on (pivot_rows, pivot_cols)
/// has nonzero determinant mod p, hence nonzero determinant over Q.
#[derive(Debug, Clone)]
pub struct RankProfile {
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
}

/// Row-echelon elimination mod p on a dense matrix given as u64 residues.
/// Column order is scanned left to right; pivot row chosen as the first
/// nonzero entry, so the profile is deterministic.
pub fn rank_profile(field: &PrimeField, mat: &Mat<u64>) -> RankProfile {
    let (rows, cols) = (mat.rows(), mat.cols());
    let mut a: Vec<Vec<u64>> = (0..rows).map(|i| mat.row(i).to_vec()).collect();
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut row_used = vec![false; rows];
    for col in 0..cols {
        let Some(pr) = (0..rows).find(|&r| !row_used[r] && a[r][col] != 0) else {
            continue;
        };
        row_used[pr] = true;
        pivot_rows.push(pr);
        pivot_cols.push(col);
        let inv = field.inv(a[pr][col]);
        for r in 0..rows {
            if r == pr || a[r][col] == 0 {
                continue;
            }
            let factor = field.mul(a[r][col], inv);
            // a[r] -= factor * a[pr], only from `col` onward (left part is 0)
            let (head, tail) = if r < pr {
                let (h, t) = a.split_at_mut(pr);
                (&mut h[r], &t[0])
            } else {
                let (h, t) = a.split_at_mut(r);
                (&mut t[0], &h[pr])
            };
            for c in col..cols {
                if tail[c] != 0 {
                    head[c] = field.sub(head[c], field.mul(factor, tail[c]));
                }
            }
        }
    }
    RankProfile { rank: pivot_rows.len(), pivot_rows, pivot_cols }
}

/// Dense LU-style solver mod p for square nonsingular systems; returns None
/// if the matrix is singular mod p.
pub struct LuModP {
    field: PrimeField,
    n: usize,
    /// row-reduced augmented storage: inverse is applied via recorded ops
    inv: Vec<Vec<u64>>,
}

impl LuModP {
    /// Builds the explicit inverse mod p (n is desk-scale; the O(n^3) cost is
    /// paid once and each lifting step becomes a matvec).
    pub fn new(field: PrimeField, a: &Mat<u64>) -> Option<Self> {
        assert_eq!(a.rows(), a.cols());
        let n = a.rows();
        let mut work: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut row = a.row(i).to_vec();
                row.extend((0..n).map(|j| u64::from(i == j)));
                row
            })
            .collect();
        for col in 0..n {
            let pr = (col..n).find(|&r| work[r][col] != 0)?;
            work.swap(col, pr);
            let inv = field.inv(work[col][col]);
            for c in col..2 * n {
                work[col][c] = field.mul(work[col][c], inv);
            }
            for r in 0..n {
                if r == col || work[r][col] == 0 {
                    continue;
                }
                let factor = work[r][col];
                let (head, tail) = if r < col {
                    let (h, t) = work.split_at_mut(col);
                    (&mut h[r], &t[0])
                } else {
                    let (h, t) = work.split_at_mut(r);
                    (&mut t[0], &h[col])
                };
                for c in col..2 * n {
                    if tail[c] != 0 {
                        head[c] = field.sub(head[c], field.mul(factor, tail[c]));
                    }
                }
            }
        }
        let inv = work.into_iter().map(|row| row[n..].to_vec()).collect();
        Some(LuModP { field, n, inv })
    }

    pub fn solve(&self, b: &[u64]) -> Vec<u64> {
        assert_eq!(b.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = 0u64;
                for (j, &bj) in b.iter().enumerate() {
                    if bj != 0 && self.inv[i][j] != 0 {
                        acc = self.field.add(acc, self.field.mul(self.inv[i][j], bj));
                    }
                }
                acc
            })
            .collect()
    }
}

/// Reduces a BigInt matrix mod p.
pub fn reduce_zmat(field: &PrimeField, m: &Mat<Z>) -> Mat<u64> {
    Mat::from_fn(m.rows(), m.cols(), |i, j| field.from_z(&m[(i, j)]))
}

/// Reduces a rational matrix mod p; None if any denominator vanishes mod p.
pub fn reduce_qmat(field: &PrimeField, m: &Mat<Q>) -> Option<Mat<u64>> {
    let mut out = Mat::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out[(i, j)] = field.from_q(&m[(i, j)])?;
        }
    }
    Some(out)
}

pub fn reduce_bigint(field: &PrimeField, z: &BigInt) -> u64 {
    field.from_z(z)
}

/// Symmetric (balanced) residue of a mod-p value, as BigInt in (-p/2, p/2].
pub fn balanced(field: &PrimeField, a: u64) -> Z {
    if a > field.p / 2 {
        Z::from(a) - Z::from(field.p)
    } else {
        Z::from(a)
    }
}

pub fn q_is_zero(q: &Q) -> bool {
    q.numer().is_zero()
}

pub fn z_abs(z: &Z) -> Z {
    z.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_sequence_starts_at_mersenne() {
        let primes: Vec<u64> = prime_sequence().take(3).collect();
        assert_eq!(primes[0], (1 << 61) - 1);
        assert!(primes.iter().all(|&p| is_prime_u64(p)));
        assert!(primes[1] < primes[0] && primes[2] < primes[1]);
    }

    #[test]
    fn mersenne_mul_matches_generic() {
        let f = PrimeField::new(MERSENNE61);
        for (a, b) in [(3u64, 5u64), (MERSENNE61 - 1, MERSENNE61 - 2), (1 << 60, 12345)] {
            assert_eq!(f.mul(a, b), mul_mod_generic(a, b, MERSENNE61));
        }
    }

    #[test]
    fn rank_of_singular_matrix() {
        let f = PrimeField::new(MERSENNE61);
        // rows 0 and 1 dependent
        let m = Mat::from_rows(vec![vec![1u64, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        let prof = rank_profile(&f, &m);
        assert_eq!(prof.rank, 2);
    }

    #[test]
    fn lu_solves() {
        let f = PrimeField::new(MERSENNE61);
        let m = Mat::from_rows(vec![vec![2u64, 1], vec![1, 1]]);
        let lu = LuModP::new(f, &m).unwrap();
        let x = lu.solve(&[3, 2]);
        // 2x + y = 3, x + y = 2 -> x = 1, y = 1
        assert_eq!(x, vec![1, 1]);
    }
}
