//! Deciding intrinsic harmonicity: does a closed cochain admit positive
//! diagonal star weights making it harmonic?
//!
//! For a closed k-cochain the weighted coclosedness condition
//! `bd_k (W omega) = 0` is linear in the weights, and the strict positivity
//! of a metric is scale-invariant, so the decision is exactly the linear
//! feasibility of `{ bd (w o omega) = 0, w >= 1 }`: the constraint cone is
//! invariant under positive scaling, hence it contains a strictly positive
//! point if and only if it contains one with every coordinate at least one.
//! The feasible branch returns the weights; the infeasible branch returns
//! the Farkas certificate of the system.
//!
//! In codimension one the same question has a dual formulation: a dual-closed
//! 1-cochain with positive margins against the cochain read as flux (a
//! combinatorial transversal foliation datum). Both deciders live here, with
//! certificate conversions between them.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cochain::Cochain;
use crate::complex::{DualStructure, SimplicialComplex};
use crate::dec::{is_harmonic, DiagonalStar};
use crate::error::{Error, Result};
use crate::linalg::{lp_feasible, FarkasCertificate, LinearSystem, LpOutcome, QMat};
use crate::num::{Q, Z};

/// Discrete nonvanishing predicates, chosen by degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonvanishingRule {
    /// Codimension one: every top simplex has an incident dual edge with
    /// nonzero value (the associated flow has no rest cell).
    DualVertexCover,
    /// Degree one: no vertex star on which the cochain vanishes identically.
    VertexStarCover,
}

impl NonvanishingRule {
    /// The rule appropriate for the degree; the decision procedure supports
    /// degrees 1 and n-1 only.
    pub fn for_degree(degree: usize, dimension: usize) -> Result<Self> {
        if dimension >= 1 && degree == dimension - 1 {
            Ok(NonvanishingRule::DualVertexCover)
        } else if degree == 1 {
            Ok(NonvanishingRule::VertexStarCover)
        } else {
            Err(Error::UnsupportedDegree(degree))
        }
    }

    pub fn check(&self, c: &SimplicialComplex, omega: &Cochain) -> Result<()> {
        let k = omega.degree();
        match self {
            NonvanishingRule::DualVertexCover => {
                if k + 1 != c.dimension() {
                    return Err(Error::UnsupportedDegree(k));
                }
                let n = c.dimension();
                for (t, tup) in c.simplices(n).iter().enumerate() {
                    let mut covered = false;
                    for f in crate::complex::subsets(tup, n) {
                        if let Some(fi) = c.index_of(n - 1, &f) {
                            if !omega.value(fi).is_zero() {
                                covered = true;
                                break;
                            }
                        }
                    }
                    if !covered {
                        return Err(Error::VanishingInput(format!(
                            "top simplex {} has zero flux through every face",
                            c.simplex_name(n, t)
                        )));
                    }
                }
                Ok(())
            }
            NonvanishingRule::VertexStarCover => {
                if k != 1 {
                    return Err(Error::UnsupportedDegree(k));
                }
                let mut star_hit = vec![false; c.vertex_count()];
                for (e, tup) in c.simplices(1).iter().enumerate() {
                    if !omega.value(e).is_zero() {
                        star_hit[tup[0] as usize] = true;
                        star_hit[tup[1] as usize] = true;
                    }
                }
                match star_hit.iter().position(|&h| !h) {
                    None => Ok(()),
                    Some(v) => Err(Error::VanishingInput(format!(
                        "cochain vanishes on the star of vertex {}",
                        c.vertex_name(v)
                    ))),
                }
            }
        }
    }
}

/// Verdict of the intrinsic-harmonicity decision.
#[derive(Debug, Clone)]
pub enum IhVerdict {
    /// Weights (at least one on every simplex of the degree) making the
    /// cochain harmonic.
    IntrinsicallyHarmonic(DiagonalStar),
    /// Farkas certificate of the weight system's infeasibility.
    NotIh(FarkasCertificate),
}

impl IhVerdict {
    pub fn is_harmonic(&self) -> bool {
        matches!(self, IhVerdict::IntrinsicallyHarmonic(_))
    }
}

/// The weight feasibility system `{ bd_k (w o omega) = 0, w >= 1 }`.
pub fn ih_weight_system(c: &SimplicialComplex, omega: &Cochain) -> Result<LinearSystem> {
    let k = omega.degree();
    if k == 0 || k > c.dimension() {
        return Err(Error::DegreeOutOfRange { degree: k, dimension: c.dimension() });
    }
    let bdry = c.boundary_matrix(k);
    let n_k = c.simplex_count(k);
    let eq = QMat::from_fn(bdry.rows(), n_k, |i, j| {
        Q::from(Z::from(bdry[(i, j)])) * omega.value(j)
    });
    let ineq = QMat::identity(n_k);
    LinearSystem::new(eq, vec![Q::zero(); bdry.rows()], ineq, vec![Q::one(); n_k])
}

/// Decides whether the closed cochain is harmonic for some positive diagonal
/// star. The returned weights are verified via [`is_harmonic`]; the negative
/// verdict carries the exact Farkas certificate of the weight system.
pub fn ih_by_weights(
    c: &SimplicialComplex,
    omega: &Cochain,
    rule: NonvanishingRule,
) -> Result<IhVerdict> {
    if !omega.is_closed(c) {
        return Err(Error::NotClosed);
    }
    rule.check(c, omega)?;
    let k = omega.degree();
    let sys = ih_weight_system(c, omega)?;
    match lp_feasible(&sys)? {
        LpOutcome::Feasible(w) => {
            let star = DiagonalStar::with_degree_weights(c, k, w)?;
            if !is_harmonic(c, &star, omega) {
                return Err(Error::VerificationFailed("weights do not make input harmonic".into()));
            }
            Ok(IhVerdict::IntrinsicallyHarmonic(star))
        }
        LpOutcome::Infeasible(cert) => Ok(IhVerdict::NotIh(cert)),
    }
}

/// A dual-closed 1-cochain with unit margins against a codimension-one
/// cochain read as flux: the discrete datum of a transversal foliation.
#[derive(Debug, Clone)]
pub struct TransversalCertificate {
    pub eta: Vec<Q>,
    /// (dual edge in the support, eta_e * omega_e), every margin >= 1.
    pub margins: Vec<(usize, Q)>,
}

impl TransversalCertificate {
    pub fn verify(&self, ds: &DualStructure, omega: &Cochain) -> Result<()> {
        if !ds.is_dual_closed(&self.eta) {
            return Err(Error::VerificationFailed("certificate is not dual-closed".into()));
        }
        let mut covered = std::collections::BTreeSet::new();
        for &(e, ref m) in &self.margins {
            let prod = &self.eta[e] * omega.value(e);
            if prod != *m || prod < Q::one() {
                return Err(Error::VerificationFailed("certificate margin below one".into()));
            }
            covered.insert(e);
        }
        for (e, v) in omega.values().iter().enumerate() {
            if !v.is_zero() && !covered.contains(&e) {
                return Err(Error::VerificationFailed("margin missing on a support edge".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum TransversalOutcome {
    Found(TransversalCertificate),
    NotFound(FarkasCertificate),
}

impl TransversalOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, TransversalOutcome::Found(_))
    }
}

/// The transversality system { eta dual-closed, eta_e omega_e >= 1 on the
/// support }.
pub fn transversality_system(ds: &DualStructure, omega: &Cochain) -> LinearSystem {
    let n_edges = ds.edges.len();
    let mut eq = QMat::zeros(ds.two_cells.len(), n_edges);
    for (r, cell) in ds.two_cells.iter().enumerate() {
        for &(e, s) in &cell.edges {
            eq[(r, e)] += Q::from(Z::from(s as i64));
        }
    }
    let support = omega.support();
    let mut ineq = QMat::zeros(support.len(), n_edges);
    for (r, &e) in support.iter().enumerate() {
        ineq[(r, e)] = omega.value(e).clone();
    }
    LinearSystem::new(eq, vec![Q::zero(); ds.two_cells.len()], ineq, vec![Q::one(); support.len()])
        .expect("shapes agree by construction")
}

/// Searches for a transversal certificate for a closed codimension-one
/// cochain with nonempty support.
pub fn transversal_certificate(
    c: &SimplicialComplex,
    ds: &DualStructure,
    omega: &Cochain,
) -> Result<TransversalOutcome> {
    if omega.degree() + 1 != c.dimension() {
        return Err(Error::UnsupportedDegree(omega.degree()));
    }
    if !omega.is_closed(c) {
        return Err(Error::NotClosed);
    }
    let support = omega.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let sys = transversality_system(ds, omega);
    match lp_feasible(&sys)? {
        LpOutcome::Feasible(eta) => {
            let margins: Vec<(usize, Q)> =
                support.iter().map(|&e| (e, &eta[e] * omega.value(e))).collect();
            let cert = TransversalCertificate { eta, margins };
            cert.verify(ds, omega)?;
            Ok(TransversalOutcome::Found(cert))
        }
        LpOutcome::Infeasible(farkas) => Ok(TransversalOutcome::NotFound(farkas)),
    }
}

/// Sums partial certificates with nonnegative margins whose unit-margin sets
/// jointly cover the support. The sum of dual-closed cochains is dual-closed
/// and margins add, so the result is a full certificate.
pub fn combine_certificates(
    ds: &DualStructure,
    omega: &Cochain,
    partials: &[Vec<Q>],
) -> Result<TransversalCertificate> {
    if partials.is_empty() {
        return Err(Error::BadParameters("no certificates to combine".into()));
    }
    let n_edges = ds.edges.len();
    for eta in partials {
        if eta.len() != n_edges {
            return Err(Error::ShapeMismatch("certificate length".into()));
        }
        if !ds.is_dual_closed(eta) {
            return Err(Error::BadParameters("partial certificate is not dual-closed".into()));
        }
        for (e, v) in omega.values().iter().enumerate() {
            if !v.is_zero() && (&eta[e] * v).is_negative() {
                return Err(Error::BadParameters(
                    "partial certificate has a negative margin".into(),
                ));
            }
        }
    }
    // coverage: some partial reaches margin >= 1 on every support edge
    for (e, v) in omega.values().iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        if !partials.iter().any(|eta| &eta[e] * v >= Q::one()) {
            return Err(Error::CoverageGap(e));
        }
    }
    let mut eta = vec![Q::zero(); n_edges];
    for part in partials {
        for (acc, v) in eta.iter_mut().zip(part) {
            *acc += v;
        }
    }
    let margins: Vec<(usize, Q)> =
        omega.support().into_iter().map(|e| (e, &eta[e] * omega.value(e))).collect();
    let cert = TransversalCertificate { eta, margins };
    cert.verify(ds, omega)?;
    Ok(cert)
}

/// The pointwise conformal rescaling datum `f = s^(2/(k-n))`, stored exactly:
/// as a rational when the exponent is an integer, symbolically otherwise.
#[derive(Debug, Clone)]
pub struct ConformalData {
    pub ratio: Q,
    pub degree: usize,
    pub ambient: usize,
    /// The exponent 2/(k-n) in lowest terms (numerator, denominator > 0).
    pub exponent: (i64, i64),
    /// Exact value when the exponent is integral.
    pub value: Option<Q>,
}

impl ConformalData {
    /// The defining relation `f^(k-n) = s^2`, checked with integer powers:
    /// `f^(n-k) * s^2 = 1` in the evaluated case, exponent arithmetic in the
    /// symbolic case.
    pub fn relation_holds(&self) -> bool {
        let diff = (self.ambient - self.degree) as i64;
        match &self.value {
            Some(f) => {
                let mut acc = Q::one();
                for _ in 0..diff {
                    acc *= f;
                }
                acc * &self.ratio * &self.ratio == Q::one()
            }
            None => {
                let (num, den) = self.exponent;
                num * diff == -2 * den
            }
        }
    }
}

pub fn conformal_factor(ratio: &Q, degree: usize, ambient: usize) -> Result<ConformalData> {
    if degree < 1 || degree >= ambient {
        return Err(Error::BadDegrees(degree, ambient));
    }
    if !ratio.is_positive() {
        return Err(Error::BadParameters("conformal ratio must be positive".into()));
    }
    let diff = (ambient - degree) as i64; // exponent = -2 / diff
    let g = 2i64.gcd(&diff);
    let exponent = (-2 / g, diff / g);
    let value = if exponent.1 == 1 {
        // integer exponent: -1 or -2
        let mut acc = Q::one();
        for _ in 0..(-exponent.0) {
            acc /= ratio;
        }
        Some(acc)
    } else {
        None
    };
    let data = ConformalData { ratio: ratio.clone(), degree, ambient, exponent, value };
    debug_assert!(data.relation_holds());
    Ok(data)
}

/// Joint report of the two deciders in codimension one, with certificate
/// conversions where they are available.
#[derive(Debug)]
pub struct DualityReport {
    pub weight_verdict: IhVerdict,
    pub transversal_verdict: TransversalOutcome,
    pub agree: bool,
    /// Transversal certificate built from feasible weights by scaling the
    /// weighted cochain, read on dual edges.
    pub eta_from_weights: Option<TransversalCertificate>,
    /// Weights built from a transversal certificate supported inside the
    /// cochain's support.
    pub weights_from_eta: Option<DiagonalStar>,
}

/// Runs both deciders and converts certificates across the duality.
///
/// A weight witness W converts to `eta = N W omega` (dual-closed because the
/// weighted cochain is coclosed; N clears margins below one), so weight
/// feasibility always implies a transversal certificate. A transversal
/// certificate converts back to `W = eta / omega` on the support whenever
/// that assignment satisfies the weight system, which requires eta to vanish
/// off the support; when the cochain is supported on every dual edge the
/// conversion is always available and the verdicts coincide. With partial
/// support the transversal side is strictly more permissive - a certificate
/// may route through dual edges where the cochain vanishes - and the report
/// then records `agree = false` with both certificates still individually
/// verified.
pub fn duality_bridge(
    c: &SimplicialComplex,
    ds: &DualStructure,
    omega: &Cochain,
) -> Result<DualityReport> {
    let k = omega.degree();
    if k + 1 != c.dimension() {
        return Err(Error::UnsupportedDegree(k));
    }
    let weight_verdict = ih_by_weights(c, omega, NonvanishingRule::DualVertexCover)?;
    let transversal_verdict = transversal_certificate(c, ds, omega)?;
    let agree = weight_verdict.is_harmonic() == transversal_verdict.is_found();

    let eta_from_weights = match &weight_verdict {
        IhVerdict::IntrinsicallyHarmonic(star) => {
            Some(eta_from_star(ds, omega, star)?)
        }
        IhVerdict::NotIh(_) => None,
    };
    let weights_from_eta = match &transversal_verdict {
        TransversalOutcome::Found(cert) => star_from_eta(c, omega, cert),
        TransversalOutcome::NotFound(_) => None,
    };

    Ok(DualityReport {
        weight_verdict,
        transversal_verdict,
        agree,
        eta_from_weights,
        weights_from_eta,
    })
}

/// eta := N (W o omega) with N clearing margins to >= 1; verified.
pub fn eta_from_star(
    ds: &DualStructure,
    omega: &Cochain,
    star: &DiagonalStar,
) -> Result<TransversalCertificate> {
    let k = omega.degree();
    let weighted: Vec<Q> =
        omega.values().iter().zip(star.weights(k)).map(|(v, w)| v * w).collect();
    // margins are w_e omega_e^2 > 0; scale them up to one
    let mut scale = Z::one();
    for (e, v) in omega.values().iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let margin = &weighted[e] * v;
        if margin < Q::one() {
            // ceil(1/margin)
            let inv = Q::one() / margin;
            let needed = inv.numer().div_ceil(inv.denom());
            if needed > scale {
                scale = needed;
            }
        }
    }
    let factor = Q::from(scale);
    let eta: Vec<Q> = weighted.iter().map(|v| v * &factor).collect();
    let margins: Vec<(usize, Q)> =
        omega.support().into_iter().map(|e| (e, &eta[e] * omega.value(e))).collect();
    let cert = TransversalCertificate { eta, margins };
    cert.verify(ds, omega)?;
    Ok(cert)
}

/// W := eta / omega on the support (one elsewhere) when this satisfies the
/// weight system; None when eta spills outside the support.
fn star_from_eta(
    c: &SimplicialComplex,
    omega: &Cochain,
    cert: &TransversalCertificate,
) -> Option<DiagonalStar> {
    let k = omega.degree();
    let mut w = vec![Q::one(); c.simplex_count(k)];
    for (e, v) in omega.values().iter().enumerate() {
        if v.is_zero() {
            if !cert.eta[e].is_zero() {
                return None; // conversion needs eta supported in supp(omega)
            }
        } else {
            let candidate = &cert.eta[e] / v;
            if !candidate.is_positive() {
                return None;
            }
            w[e] = candidate;
        }
    }
    let star = DiagonalStar::with_degree_weights(c, k, w).ok()?;
    is_harmonic(c, &star, omega).then_some(star)
}
