//! Exact rational linear feasibility with verified certificates.
//!
//! `lp_feasible` decides systems of the form A·x = b, C·x ≥ d over the
//! rationals. A feasible answer carries a point satisfying every constraint
//! exactly; an infeasible answer carries Farkas multipliers combining the
//! constraints into 0 ≥ 1. Both are re-verified by exact arithmetic before
//! being returned, so callers can treat the outcome as a certificate.
//!
//! Strict conditions never appear here: callers encode positivity through
//! scale invariance (margins normalized to ≥ 1), so the systems are closed.
//!
//! Internally: single-coefficient rows are absorbed as variable bounds, free
//! variables are eliminated through the equalities (with multiplier tracking
//! so certificates map back), and the residual system runs through a phase-1
//! simplex. Pivoting is Dantzig with an automatic switch to Bland's rule
//! after a run of degenerate pivots, which keeps termination guaranteed.
//! Tableau arithmetic uses machine-word rationals and escalates to big
//! rationals on overflow.

use num_traits::{One, Signed, Zero};

use super::mat::QMat;
use crate::error::{Error, Result};
use crate::num::Q;

#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub eq_lhs: QMat,
    pub eq_rhs: Vec<Q>,
    pub ineq_lhs: QMat,
    pub ineq_rhs: Vec<Q>,
}

impl LinearSystem {
    pub fn new(eq_lhs: QMat, eq_rhs: Vec<Q>, ineq_lhs: QMat, ineq_rhs: Vec<Q>) -> Result<Self> {
        if eq_lhs.rows() != eq_rhs.len() || ineq_lhs.rows() != ineq_rhs.len() {
            return Err(Error::ShapeMismatch("constraint rhs length".into()));
        }
        if eq_lhs.rows() > 0 && ineq_lhs.rows() > 0 && eq_lhs.cols() != ineq_lhs.cols() {
            return Err(Error::ShapeMismatch("equality/inequality variable counts".into()));
        }
        Ok(LinearSystem { eq_lhs, eq_rhs, ineq_lhs, ineq_rhs })
    }

    pub fn num_vars(&self) -> usize {
        self.eq_lhs.cols().max(self.ineq_lhs.cols())
    }
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Feasible(Vec<Q>),
    Infeasible(FarkasCertificate),
}

/// Multipliers λ (equalities, free sign) and y (inequalities, nonnegative)
/// with λᵀA + yᵀC = 0 and λᵀb + yᵀd = 1: the constraints combine to 0 ≥ 1.
#[derive(Debug, Clone)]
pub struct FarkasCertificate {
    pub eq_multipliers: Vec<Q>,
    pub ineq_multipliers: Vec<Q>,
}

pub fn verify_point(sys: &LinearSystem, x: &[Q]) -> bool {
    if x.len() != sys.num_vars() {
        return false;
    }
    if sys.eq_lhs.rows() > 0 && sys.eq_lhs.matvec(x) != sys.eq_rhs {
        return false;
    }
    if sys.ineq_lhs.rows() > 0 {
        let cx = sys.ineq_lhs.matvec(x);
        if cx.iter().zip(&sys.ineq_rhs).any(|(lhs, rhs)| lhs < rhs) {
            return false;
        }
    }
    true
}

pub fn verify_farkas(sys: &LinearSystem, cert: &FarkasCertificate) -> bool {
    if cert.eq_multipliers.len() != sys.eq_lhs.rows()
        || cert.ineq_multipliers.len() != sys.ineq_lhs.rows()
    {
        return false;
    }
    if cert.ineq_multipliers.iter().any(|y| y.is_negative()) {
        return false;
    }
    let n = sys.num_vars();
    let mut combined = vec![Q::zero(); n];
    for (r, lam) in cert.eq_multipliers.iter().enumerate() {
        if lam.is_zero() {
            continue;
        }
        for j in 0..sys.eq_lhs.cols() {
            let a = &sys.eq_lhs[(r, j)];
            if !a.is_zero() {
                combined[j] += lam * a;
            }
        }
    }
    for (r, y) in cert.ineq_multipliers.iter().enumerate() {
        if y.is_zero() {
            continue;
        }
        for j in 0..sys.ineq_lhs.cols() {
            let c = &sys.ineq_lhs[(r, j)];
            if !c.is_zero() {
                combined[j] += y * c;
            }
        }
    }
    if combined.iter().any(|w| !w.is_zero()) {
        return false;
    }
    let mut rhs = Q::zero();
    for (lam, b) in cert.eq_multipliers.iter().zip(&sys.eq_rhs) {
        rhs += lam * b;
    }
    for (y, d) in cert.ineq_multipliers.iter().zip(&sys.ineq_rhs) {
        rhs += y * d;
    }
    rhs == Q::one()
}

/// Decides feasibility with a verified certificate either way.
pub fn lp_feasible(sys: &LinearSystem) -> Result<LpOutcome> {
    // fast path: word rationals; on overflow redo with big rationals
    let raw = match solve_presolved::<Rat64>(sys) {
        Some(out) => out.into_q(),
        None => solve_presolved::<Q>(sys)
            .expect("big-rational arithmetic cannot overflow")
            .into_q(),
    };
    if let Ok(outcome) = finish(sys, raw) {
        return Ok(outcome);
    }
    // fallback: direct tableau without presolve
    let raw = solve_direct::<Q>(
        &to_scalar_rows::<Q>(&sys.eq_lhs, sys.num_vars()),
        &to_scalar_vec::<Q>(&sys.eq_rhs),
        &to_scalar_rows::<Q>(&sys.ineq_lhs, sys.num_vars()),
        &to_scalar_vec::<Q>(&sys.ineq_rhs),
        &vec![false; sys.num_vars()],
    )
    .expect("big-rational arithmetic cannot overflow")
    .into_q();
    finish(sys, raw)
}

fn finish(sys: &LinearSystem, raw: RawOutcome<Q>) -> Result<LpOutcome> {
    let outcome = match raw {
        RawOutcome::Feasible(x) => LpOutcome::Feasible(x),
        RawOutcome::Infeasible { eq, ineq } => {
            LpOutcome::Infeasible(normalize_cert(sys, eq, ineq)?)
        }
    };
    let ok = match &outcome {
        LpOutcome::Feasible(x) => verify_point(sys, x),
        LpOutcome::Infeasible(cert) => verify_farkas(sys, cert),
    };
    if ok {
        Ok(outcome)
    } else {
        Err(Error::VerificationFailed("lp certificate failed re-check".into()))
    }
}

fn normalize_cert(sys: &LinearSystem, eq: Vec<Q>, ineq: Vec<Q>) -> Result<FarkasCertificate> {
    let mut rhs = Q::zero();
    for (lam, b) in eq.iter().zip(&sys.eq_rhs) {
        rhs += lam * b;
    }
    for (y, d) in ineq.iter().zip(&sys.ineq_rhs) {
        rhs += y * d;
    }
    if !rhs.is_positive() {
        return Err(Error::VerificationFailed("farkas combination not positive".into()));
    }
    Ok(FarkasCertificate {
        eq_multipliers: eq.into_iter().map(|l| l / rhs.clone()).collect(),
        ineq_multipliers: ineq.into_iter().map(|y| y / rhs.clone()).collect(),
    })
}

// --- scalar abstraction -----------------------------------------------------

/// Tableau scalars live in a private module so the trait stays out of method
/// resolution for plain `Q` values elsewhere in this file.
mod scalar {
    use crate::num::Q;

    /// Exact rational scalar for tableau arithmetic. All operations are
    /// fallible so a word-size implementation can signal overflow.
    pub(super) trait LpScalar: Clone + PartialEq + PartialOrd + std::fmt::Debug {
        fn zero() -> Self;
        fn one() -> Self;
        fn from_q(q: &Q) -> Option<Self>;
        fn to_q(&self) -> Q;
        fn is_zero(&self) -> bool;
        fn is_positive(&self) -> bool;
        fn is_negative(&self) -> bool;
        fn neg(&self) -> Option<Self>;
        fn add(&self, other: &Self) -> Option<Self>;
        fn sub(&self, other: &Self) -> Option<Self>;
        fn mul(&self, other: &Self) -> Option<Self>;
        fn div(&self, other: &Self) -> Option<Self>;
    }

    impl LpScalar for Q {
        fn zero() -> Self {
            <Q as num_traits::Zero>::zero()
        }
        fn one() -> Self {
            <Q as num_traits::One>::one()
        }
        fn from_q(q: &Q) -> Option<Self> {
            Some(q.clone())
        }
        fn to_q(&self) -> Q {
            self.clone()
        }
        fn is_zero(&self) -> bool {
            num_traits::Zero::is_zero(self)
        }
        fn is_positive(&self) -> bool {
            num_traits::Signed::is_positive(self)
        }
        fn is_negative(&self) -> bool {
            num_traits::Signed::is_negative(self)
        }
        fn neg(&self) -> Option<Self> {
            Some(-self)
        }
        fn add(&self, other: &Self) -> Option<Self> {
            Some(self + other)
        }
        fn sub(&self, other: &Self) -> Option<Self> {
            Some(self - other)
        }
        fn mul(&self, other: &Self) -> Option<Self> {
            Some(self * other)
        }
        fn div(&self, other: &Self) -> Option<Self> {
            Some(self / other)
        }
    }

    /// Word-size rational: reduced fraction with positive denominator, i64
    /// components, i128 intermediates, overflow reported as None.
    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub(super) struct Rat64 {
        num: i64,
        den: i64,
    }

    impl Rat64 {
        fn make(num: i128, den: i128) -> Option<Rat64> {
            if den == 0 {
                return None;
            }
            let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
            let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs());
            let (num, den) = if g > 1 { (num / g as i128, den / g as i128) } else { (num, den) };
            Some(Rat64 { num: i64::try_from(num).ok()?, den: i64::try_from(den).ok()? })
        }
    }

    fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.max(1)
    }

    impl PartialOrd for Rat64 {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            let lhs = self.num as i128 * other.den as i128;
            let rhs = other.num as i128 * self.den as i128;
            lhs.partial_cmp(&rhs)
        }
    }

    impl LpScalar for Rat64 {
        fn zero() -> Self {
            Rat64 { num: 0, den: 1 }
        }
        fn one() -> Self {
            Rat64 { num: 1, den: 1 }
        }
        fn from_q(q: &Q) -> Option<Self> {
            use num_traits::ToPrimitive;
            Some(Rat64 { num: q.numer().to_i64()?, den: q.denom().to_i64()? })
        }
        fn to_q(&self) -> Q {
            crate::num::q_ratio(self.num, self.den)
        }
        fn is_zero(&self) -> bool {
            self.num == 0
        }
        fn is_positive(&self) -> bool {
            self.num > 0
        }
        fn is_negative(&self) -> bool {
            self.num < 0
        }
        fn neg(&self) -> Option<Self> {
            Some(Rat64 { num: self.num.checked_neg()?, den: self.den })
        }
        fn add(&self, other: &Self) -> Option<Self> {
            Rat64::make(
                self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128,
                self.den as i128 * other.den as i128,
            )
        }
        fn sub(&self, other: &Self) -> Option<Self> {
            self.add(&other.neg()?)
        }
        fn mul(&self, other: &Self) -> Option<Self> {
            Rat64::make(self.num as i128 * other.num as i128, self.den as i128 * other.den as i128)
        }
        fn div(&self, other: &Self) -> Option<Self> {
            if other.num == 0 {
                return None;
            }
            Rat64::make(self.num as i128 * other.den as i128, self.den as i128 * other.num as i128)
        }
    }
}

use scalar::Rat64;

fn to_scalar_rows<S: scalar::LpScalar>(m: &QMat, width: usize) -> Vec<Vec<S>> {
    (0..m.rows())
        .map(|i| {
            let mut row: Vec<S> =
                m.row(i).iter().map(|q| S::from_q(q).expect("scalar conversion")).collect();
            while row.len() < width {
                row.push(S::zero());
            }
            row
        })
        .collect()
}

fn to_scalar_vec<S: scalar::LpScalar>(v: &[Q]) -> Vec<S> {
    v.iter().map(|q| S::from_q(q).expect("scalar conversion")).collect()
}

enum RawOutcome<S> {
    Feasible(Vec<S>),
    Infeasible { eq: Vec<S>, ineq: Vec<S> },
}

impl<S: scalar::LpScalar> RawOutcome<S> {
    fn into_q(self) -> RawOutcome<Q> {
        match self {
            RawOutcome::Feasible(x) => RawOutcome::Feasible(x.iter().map(S::to_q).collect()),
            RawOutcome::Infeasible { eq, ineq } => RawOutcome::Infeasible {
                eq: eq.iter().map(S::to_q).collect(),
                ineq: ineq.iter().map(S::to_q).collect(),
            },
        }
    }
}

// --- presolve ----------------------------------------------------------------

#[derive(Clone, Debug)]
enum Shift<S> {
    None,
    /// x_j = offset + x'_j, x'_j >= 0; `row` supplied the bound with coeff c.
    Lower { row: usize, coeff: S, offset: S },
    /// x_j = offset - x'_j, x'_j >= 0.
    Upper { row: usize, coeff: S, offset: S },
}

/// Presolve + phase-1. Returns None on scalar overflow.
fn solve_presolved<S: scalar::LpScalar>(sys: &LinearSystem) -> Option<RawOutcome<S>> {
    let n = sys.num_vars();
    let me = sys.eq_lhs.rows();
    let mi = sys.ineq_lhs.rows();

    let mut eq: Vec<Vec<S>> = (0..me)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j < sys.eq_lhs.cols() {
                        S::from_q(&sys.eq_lhs[(i, j)])
                    } else {
                        Some(S::zero())
                    }
                })
                .collect::<Option<Vec<S>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    let mut eq_rhs: Vec<S> = sys.eq_rhs.iter().map(S::from_q).collect::<Option<Vec<_>>>()?;
    let mut ineq: Vec<Vec<S>> = (0..mi)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j < sys.ineq_lhs.cols() {
                        S::from_q(&sys.ineq_lhs[(i, j)])
                    } else {
                        Some(S::zero())
                    }
                })
                .collect::<Option<Vec<S>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    let mut ineq_rhs: Vec<S> = sys.ineq_rhs.iter().map(S::from_q).collect::<Option<Vec<_>>>()?;

    // 1) absorb single-coefficient rows as bounds
    let mut shift: Vec<Shift<S>> = vec![Shift::None; n];
    let mut absorbed = vec![false; mi];
    let mut lower: Vec<Option<(usize, S, S)>> = vec![None; n]; // (row, coeff, bound)
    let mut upper: Vec<Option<(usize, S, S)>> = vec![None; n];
    for i in 0..mi {
        let nz: Vec<usize> = (0..n).filter(|&j| !ineq[i][j].is_zero()).collect();
        if nz.len() != 1 {
            continue;
        }
        let j = nz[0];
        let c = ineq[i][j].clone();
        let bound = ineq_rhs[i].div(&c)?;
        if c.is_positive() {
            if lower[j].as_ref().map_or(true, |(_, _, b)| bound > *b) {
                lower[j] = Some((i, c, bound));
            }
        } else if upper[j].as_ref().map_or(true, |(_, _, b)| bound < *b) {
            upper[j] = Some((i, c, bound));
        }
    }
    for j in 0..n {
        match (&lower[j], &upper[j]) {
            (Some((rl, cl, l)), Some((ru, cu, u))) if l > u => {
                // bounds cross: certificate from the two rows alone
                let mut y = vec![S::zero(); mi];
                y[*rl] = S::one().div(cl)?;
                y[*ru] = S::one().div(&cu.neg()?)?;
                return Some(RawOutcome::Infeasible { eq: vec![S::zero(); me], ineq: y });
            }
            (Some((r, c, l)), _) => {
                absorbed[*r] = true;
                shift[j] = Shift::Lower { row: *r, coeff: c.clone(), offset: l.clone() };
            }
            (None, Some((r, c, u))) => {
                absorbed[*r] = true;
                shift[j] = Shift::Upper { row: *r, coeff: c.clone(), offset: u.clone() };
            }
            (None, None) => {}
        }
    }
    // apply shifts to every row
    for j in 0..n {
        let (offset, mirror) = match &shift[j] {
            Shift::None => continue,
            Shift::Lower { offset, .. } => (offset.clone(), false),
            Shift::Upper { offset, .. } => (offset.clone(), true),
        };
        for (rows, rhs) in [(&mut eq, &mut eq_rhs), (&mut ineq, &mut ineq_rhs)] {
            for (row, r) in rows.iter_mut().zip(rhs.iter_mut()) {
                if row[j].is_zero() {
                    continue;
                }
                *r = r.sub(&row[j].mul(&offset)?)?;
                if mirror {
                    row[j] = row[j].neg()?;
                }
            }
        }
    }
    let nonneg: Vec<bool> = shift.iter().map(|s| !matches!(s, Shift::None)).collect();

    // drop absorbed rows (their multipliers are rebuilt from bound slack)
    let kept_ineq: Vec<usize> = (0..mi).filter(|&i| !absorbed[i]).collect();
    let mut red_ineq: Vec<Vec<S>> = kept_ineq.iter().map(|&i| ineq[i].clone()).collect();
    let mut red_ineq_rhs: Vec<S> = kept_ineq.iter().map(|&i| ineq_rhs[i].clone()).collect();

    // 2) eliminate free variables through the equalities, tracking multipliers
    // g[r] expresses current eq row r as a combination of original eq rows;
    // kappa[i] tracks eq-row combinations folded into inequality row i.
    let mut g: Vec<Vec<S>> =
        (0..me).map(|r| (0..me).map(|t| if r == t { S::one() } else { S::zero() }).collect()).collect();
    let mut kappa: Vec<Vec<S>> = vec![vec![S::zero(); me]; red_ineq.len()];
    let mut used_row = vec![false; me];
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (eq row, var)
    for j in 0..n {
        if nonneg[j] {
            continue;
        }
        let Some(pr) = (0..me).find(|&r| !used_row[r] && !eq[r][j].is_zero()) else {
            continue;
        };
        used_row[pr] = true;
        pivots.push((pr, j));
        let pivot = eq[pr][j].clone();
        for r in 0..me {
            if r == pr || eq[r][j].is_zero() {
                continue;
            }
            let factor = eq[r][j].div(&pivot)?;
            for c in 0..n {
                if !eq[pr][c].is_zero() {
                    eq[r][c] = eq[r][c].sub(&factor.mul(&eq[pr][c])?)?;
                }
            }
            eq_rhs[r] = eq_rhs[r].sub(&factor.mul(&eq_rhs[pr])?)?;
            for t in 0..me {
                if !g[pr][t].is_zero() {
                    g[r][t] = g[r][t].sub(&factor.mul(&g[pr][t])?)?;
                }
            }
        }
        for i in 0..red_ineq.len() {
            if red_ineq[i][j].is_zero() {
                continue;
            }
            let factor = red_ineq[i][j].div(&pivot)?;
            for c in 0..n {
                if !eq[pr][c].is_zero() {
                    red_ineq[i][c] = red_ineq[i][c].sub(&factor.mul(&eq[pr][c])?)?;
                }
            }
            red_ineq_rhs[i] = red_ineq_rhs[i].sub(&factor.mul(&eq_rhs[pr])?)?;
            for t in 0..me {
                if !g[pr][t].is_zero() {
                    kappa[i][t] = kappa[i][t].sub(&factor.mul(&g[pr][t])?)?;
                }
            }
        }
    }

    // surviving equality rows; detect 0 = nonzero outright
    let kept_eq: Vec<usize> = (0..me).filter(|&r| !used_row[r]).collect();
    for &r in &kept_eq {
        if eq[r].iter().all(|x| x.is_zero()) && !eq_rhs[r].is_zero() {
            let scale = if eq_rhs[r].is_positive() { S::one() } else { S::one().neg()? };
            let lam: Vec<S> = (0..me).map(|t| g[r][t].mul(&scale)).collect::<Option<Vec<_>>>()?;
            return Some(RawOutcome::Infeasible { eq: lam, ineq: vec![S::zero(); mi] });
        }
    }
    let live_eq: Vec<usize> =
        kept_eq.iter().copied().filter(|&r| !eq[r].iter().all(|x| x.is_zero())).collect();

    // reduced variable set: everything except eliminated pivot vars
    let eliminated: Vec<bool> = {
        let mut e = vec![false; n];
        for &(_, j) in &pivots {
            e[j] = true;
        }
        e
    };
    let red_vars: Vec<usize> = (0..n).filter(|&j| !eliminated[j]).collect();
    let sub_eq: Vec<Vec<S>> =
        live_eq.iter().map(|&r| red_vars.iter().map(|&j| eq[r][j].clone()).collect()).collect();
    let sub_eq_rhs: Vec<S> = live_eq.iter().map(|&r| eq_rhs[r].clone()).collect();
    let sub_ineq: Vec<Vec<S>> =
        red_ineq.iter().map(|row| red_vars.iter().map(|&j| row[j].clone()).collect()).collect();
    let sub_nonneg: Vec<bool> = red_vars.iter().map(|&j| nonneg[j]).collect();

    let raw = solve_direct(&sub_eq, &sub_eq_rhs, &sub_ineq, &red_ineq_rhs, &sub_nonneg)?;

    match raw {
        RawOutcome::Feasible(xr) => {
            // reconstruct eliminated pivot vars, then undo shifts
            let mut x = vec![S::zero(); n];
            for (k, &j) in red_vars.iter().enumerate() {
                x[j] = xr[k].clone();
            }
            for &(r, j) in pivots.iter().rev() {
                let mut acc = eq_rhs[r].clone();
                for c in 0..n {
                    if c != j && !eq[r][c].is_zero() {
                        acc = acc.sub(&eq[r][c].mul(&x[c])?)?;
                    }
                }
                x[j] = acc.div(&eq[r][j])?;
            }
            for j in 0..n {
                match &shift[j] {
                    Shift::None => {}
                    Shift::Lower { offset, .. } => x[j] = offset.add(&x[j])?,
                    Shift::Upper { offset, .. } => x[j] = offset.sub(&x[j])?,
                }
            }
            Some(RawOutcome::Feasible(x))
        }
        RawOutcome::Infeasible { eq: lam_red, ineq: y_red } => {
            // map multipliers back to original rows
            let mut lam = vec![S::zero(); me];
            for (idx, &r) in live_eq.iter().enumerate() {
                if lam_red[idx].is_zero() {
                    continue;
                }
                for t in 0..me {
                    if !g[r][t].is_zero() {
                        lam[t] = lam[t].add(&lam_red[idx].mul(&g[r][t])?)?;
                    }
                }
            }
            let mut y = vec![S::zero(); mi];
            for (idx, &i) in kept_ineq.iter().enumerate() {
                if y_red[idx].is_zero() {
                    continue;
                }
                y[i] = y_red[idx].clone();
                for t in 0..me {
                    if !kappa[idx][t].is_zero() {
                        lam[t] = lam[t].add(&y_red[idx].mul(&kappa[idx][t])?)?;
                    }
                }
            }
            // bound rows: close the residual slack on shifted variables
            for j in 0..n {
                let (row, coeff) = match &shift[j] {
                    Shift::None => continue,
                    Shift::Lower { row, coeff, .. } => (*row, coeff.clone()),
                    Shift::Upper { row, coeff, .. } => (*row, coeff.clone()),
                };
                // combined original-column coefficient so far
                let mut w = S::zero();
                for t in 0..me {
                    if !lam[t].is_zero() && j < sys.eq_lhs.cols() {
                        let a = S::from_q(&sys.eq_lhs[(t, j)])?;
                        if !a.is_zero() {
                            w = w.add(&lam[t].mul(&a)?)?;
                        }
                    }
                }
                for (i, yi) in y.iter().enumerate() {
                    if !yi.is_zero() {
                        let c = S::from_q(&sys.ineq_lhs[(i, j)])?;
                        if !c.is_zero() {
                            w = w.add(&yi.mul(&c)?)?;
                        }
                    }
                }
                if w.is_zero() {
                    continue;
                }
                // add y_bound * coeff = -w; upper bounds have coeff < 0, and
                // the simplex optimality signs make y_bound nonnegative both ways
                let y_bound = w.neg()?.div(&coeff)?;
                debug_assert!(!y_bound.is_negative(), "bound multiplier must be nonnegative");
                y[row] = y[row].add(&y_bound)?;
            }
            Some(RawOutcome::Infeasible { eq: lam, ineq: y })
        }
    }
}

// --- phase-1 simplex ----------------------------------------------------------

/// Phase-1 simplex on A·x = b, C·x ≥ d with per-variable nonnegativity flags.
/// Free variables are split into differences internally. Returns None on
/// scalar overflow.
fn solve_direct<S: scalar::LpScalar>(
    eq: &[Vec<S>],
    eq_rhs: &[S],
    ineq: &[Vec<S>],
    ineq_rhs: &[S],
    nonneg: &[bool],
) -> Option<RawOutcome<S>> {
    let n = nonneg.len();
    let me = eq.len();
    let mi = ineq.len();
    let m = me + mi;

    // column layout: per-variable (single or split pair), then slacks
    let mut col_var: Vec<(usize, bool)> = Vec::new(); // (var, negated?)
    for (j, &nn) in nonneg.iter().enumerate() {
        col_var.push((j, false));
        if !nn {
            col_var.push((j, true));
        }
    }
    let n_varcols = col_var.len();
    let n_cols = n_varcols + mi + m; // + slacks + artificials

    let mut flip = vec![false; m];
    let mut tab: Vec<Vec<S>> = Vec::with_capacity(m + 1);
    for r in 0..m {
        let (row_src, rhs_src): (&[S], &S) =
            if r < me { (&eq[r], &eq_rhs[r]) } else { (&ineq[r - me], &ineq_rhs[r - me]) };
        let f = rhs_src.is_negative();
        flip[r] = f;
        let sgn = |v: &S| -> Option<S> { if f { v.neg() } else { Some(v.clone()) } };
        let mut row: Vec<S> = Vec::with_capacity(n_cols + 1);
        for &(j, negated) in &col_var {
            let a = if j < row_src.len() { row_src[j].clone() } else { S::zero() };
            let a = if negated { a.neg()? } else { a };
            row.push(sgn(&a)?);
        }
        for i in 0..mi {
            // slack: C x - s = d
            if r == me + i {
                row.push(sgn(&S::one().neg()?)?);
            } else {
                row.push(S::zero());
            }
        }
        for k in 0..m {
            row.push(if k == r { S::one() } else { S::zero() });
        }
        row.push(sgn(rhs_src)?);
        tab.push(row);
    }
    // objective row: minimize sum of artificials; reduced costs with basis =
    // artificials are c_j - sum of column entries
    let mut obj: Vec<S> = vec![S::zero(); n_cols + 1];
    for (j, o) in obj.iter_mut().enumerate().take(n_cols + 1) {
        let mut acc = S::zero();
        for row in tab.iter() {
            acc = acc.add(&row[j])?;
        }
        let cost = if j >= n_varcols + mi && j < n_cols { S::one() } else { S::zero() };
        *o = cost.sub(&acc)?;
    }
    tab.push(obj);

    let mut basis: Vec<usize> = (0..m).map(|r| n_varcols + mi + r).collect();
    let mut degenerate_run = 0usize;
    let mut bland = false;
    let max_pivots = 1usize << 20;
    let mut optimal = false;

    for _ in 0..max_pivots {
        // entering column
        let entering = if bland {
            (0..n_cols).find(|&j| tab[m][j].is_negative())
        } else {
            let mut best: Option<usize> = None;
            for j in 0..n_cols {
                if tab[m][j].is_negative()
                    && best.map_or(true, |b| tab[m][j] < tab[m][b])
                {
                    best = Some(j);
                }
            }
            best
        };
        let Some(jin) = entering else {
            optimal = true;
            break;
        };
        // ratio test
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if !tab[r][jin].is_positive() {
                continue;
            }
            let better = match leave {
                None => true,
                Some(lr) => {
                    let cur = tab[r][n_cols].div(&tab[r][jin])?;
                    let best = tab[lr][n_cols].div(&tab[lr][jin])?;
                    cur < best || (cur == best && basis[r] < basis[lr])
                }
            };
            if better {
                leave = Some(r);
            }
        }
        let Some(rout) = leave else {
            // phase-1 objective is bounded below by zero, so an unbounded ray
            // cannot occur; treat as a numeric anomaly and escalate
            return None;
        };
        if tab[rout][n_cols].is_zero() {
            degenerate_run += 1;
            if degenerate_run > 2 * (m + n_cols) {
                bland = true;
            }
        } else {
            degenerate_run = 0;
        }
        // pivot
        let piv = tab[rout][jin].clone();
        for c in 0..=n_cols {
            tab[rout][c] = tab[rout][c].div(&piv)?;
        }
        for r in 0..=m {
            if r == rout || tab[r][jin].is_zero() {
                continue;
            }
            let factor = tab[r][jin].clone();
            for c in 0..=n_cols {
                if !tab[rout][c].is_zero() {
                    let delta = factor.mul(&tab[rout][c])?;
                    tab[r][c] = tab[r][c].sub(&delta)?;
                }
            }
        }
        basis[rout] = jin;
    }

    if !optimal {
        return None; // pivot cap reached; escalate rather than misreport
    }
    // objective value = -obj rhs
    let value = tab[m][n_cols].neg()?;
    if value.is_zero() {
        let mut x = vec![S::zero(); n];
        for (r, &bv) in basis.iter().enumerate() {
            if bv < n_varcols {
                let (j, negated) = col_var[bv];
                let v = tab[r][n_cols].clone();
                let v = if negated { v.neg()? } else { v };
                x[j] = x[j].add(&v)?;
            }
        }
        Some(RawOutcome::Feasible(x))
    } else {
        // simplex multipliers: pi_r = 1 - reduced cost of artificial r,
        // then unflip row signs
        let mut eq_mult = vec![S::zero(); me];
        let mut ineq_mult = vec![S::zero(); mi];
        for r in 0..m {
            let red = tab[m][n_varcols + mi + r].clone();
            let pi = S::one().sub(&red)?;
            let pi = if flip[r] { pi.neg()? } else { pi };
            if r < me {
                eq_mult[r] = pi;
            } else {
                ineq_mult[r - me] = pi;
            }
        }
        Some(RawOutcome::Infeasible { eq: eq_mult, ineq: ineq_mult })
    }
}
