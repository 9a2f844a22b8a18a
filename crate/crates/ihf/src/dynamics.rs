//! Volume-preserving flows as divergence-free flux on the dual graph:
//! orbit-cycle decompositions, asymptotic cycles, and the cross-section
//! decision with certificates on both branches.
//!
//! A closed codimension-one cochain is reindexed bijectively onto dual edges;
//! closedness becomes the vanishing of the signed flux sum at every dual
//! vertex. A cross-section is an integral dual-closed 1-cochain positive
//! against the flux; when none exists, the Farkas dual of the feasibility
//! system produces a nonzero direction-respecting circulation whose real
//! homology class vanishes, the discrete shape of an invariant measure with
//! zero asymptotic cycle.

use num_traits::{One, Signed, Zero};

use crate::cochain::Cochain;
use crate::complex::{DualStructure, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::Homology;
use crate::linalg::{lp_feasible, LinearSystem, LpOutcome, QMat};
use crate::num::{denominator_lcm, Q, Z};

/// Divergence-free flux, one exact rational per dual edge.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxField {
    values: Vec<Q>,
}

impl FluxField {
    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&e| !self.values[e].is_zero()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, factor: &Q) -> FluxField {
        FluxField { values: self.values.iter().map(|v| v * factor).collect() }
    }

    /// The codimension-one cochain this flux reindexes.
    pub fn as_cochain(&self, c: &SimplicialComplex) -> Cochain {
        Cochain::from_values(c, c.dimension() - 1, self.values.clone()).expect("flux length")
    }
}

/// Reads a closed codimension-one cochain as dual-edge flux. The inverse of
/// [`FluxField::as_cochain`]; divergence-freeness is verified exactly.
pub fn flux_from_form(
    c: &SimplicialComplex,
    ds: &DualStructure,
    omega: &Cochain,
) -> Result<FluxField> {
    if c.dimension() == 0 || omega.degree() != c.dimension() - 1 {
        return Err(Error::DegreeOutOfRange {
            degree: omega.degree(),
            dimension: c.dimension(),
        });
    }
    if !c.is_closed() || !c.is_orientable() {
        return Err(Error::NotOrientedClosed);
    }
    if !omega.is_closed(c) {
        return Err(Error::NotClosed);
    }
    let flux = FluxField { values: omega.values().to_vec() };
    if ds.divergence(&flux.values).iter().any(|d| !d.is_zero()) {
        return Err(Error::VerificationFailed("closed cochain with nonzero divergence".into()));
    }
    Ok(flux)
}

/// A directed dual-edge loop with positive weight. The period is the
/// combinatorial edge count; the class is the loop's real 1-homology
/// coordinate vector, and the asymptotic cycle of the orbit is class/period.
#[derive(Debug, Clone)]
pub struct OrbitCycle {
    /// (dual edge, traversal sign relative to the edge's orientation).
    pub edges: Vec<(usize, i8)>,
    pub weight: Q,
    pub period: usize,
    pub class: Vec<Q>,
}

impl OrbitCycle {
    /// The orbit's asymptotic cycle: class divided by period.
    pub fn asymptotic_cycle(&self) -> Vec<Q> {
        let p = Q::from(Z::from(self.period as i64));
        self.class.iter().map(|c| c / &p).collect()
    }

    /// Indicator flux of the loop (unit weight).
    pub fn indicator(&self, edge_count: usize) -> FluxField {
        let mut values = vec![Q::zero(); edge_count];
        for &(e, s) in &self.edges {
            values[e] += Q::from(Z::from(s as i64));
        }
        FluxField { values }
    }
}

/// Real 1-homology coordinates of a flux: the vector of pairings of its
/// cochain against the degree-one cocycle basis through the cup product with
/// the fundamental cycle. This is the Poincare-dual coordinate vector.
pub fn flux_class(c: &SimplicialComplex, hom: &Homology, flux: &FluxField) -> Result<Vec<Q>> {
    let omega = flux.as_cochain(c);
    let basis = hom.cocycle_basis(1);
    let mut out = Vec::with_capacity(basis.len());
    for beta in &basis {
        let prod = hom.cup(&omega, beta)?;
        out.push(hom.integrate(&prod)?);
    }
    Ok(out)
}

/// Deterministic loop-stripping decomposition of a divergence-free flux into
/// weighted orbit cycles. The weighted indicators re-sum to the flux exactly;
/// at most one cycle per support edge is produced.
pub fn cycle_decomposition(
    c: &SimplicialComplex,
    ds: &DualStructure,
    hom: &Homology,
    flux: &FluxField,
) -> Result<Vec<OrbitCycle>> {
    let mut rem = flux.values.clone();
    let mut cycles: Vec<OrbitCycle> = Vec::new();
    loop {
        let Some(start) = rem.iter().position(|v| !v.is_zero()) else {
            break;
        };
        // walk forward with the flux until a dual vertex repeats
        let first_dir: i8 = if rem[start].is_positive() { 1 } else { -1 };
        let at0 =
            if first_dir > 0 { ds.edges[start].tail } else { ds.edges[start].head };
        let mut path: Vec<(usize, i8)> = Vec::new();
        let mut vertex_seq: Vec<usize> = vec![at0];
        let mut at = at0;
        let cycle: Vec<(usize, i8)> = loop {
            // smallest-index outgoing edge with remaining flux
            let mut chosen: Option<(usize, i8)> = None;
            for (e, v) in rem.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let dir: i8 = if v.is_positive() { 1 } else { -1 };
                let from = if dir > 0 { ds.edges[e].tail } else { ds.edges[e].head };
                if from == at {
                    chosen = Some((e, dir));
                    break;
                }
            }
            let Some((e, dir)) = chosen else {
                return Err(Error::VerificationFailed(
                    "flux walk stalled; divergence must be nonzero".into(),
                ));
            };
            path.push((e, dir));
            at = if dir > 0 { ds.edges[e].head } else { ds.edges[e].tail };
            if let Some(pos) = vertex_seq.iter().position(|&v| v == at) {
                break path.split_off(pos);
            }
            vertex_seq.push(at);
        };
        // weight = min residual magnitude along the cycle
        let weight = cycle
            .iter()
            .map(|&(e, _)| rem[e].abs())
            .min()
            .expect("cycle is nonempty");
        for &(e, dir) in &cycle {
            let delta = if dir > 0 { weight.clone() } else { -weight.clone() };
            rem[e] -= delta;
        }
        let period = cycle.len();
        let indicator = OrbitCycle {
            edges: cycle,
            weight: weight.clone(),
            period,
            class: Vec::new(),
        };
        let class = flux_class(c, hom, &indicator.indicator(rem.len()))?;
        cycles.push(OrbitCycle { class, ..indicator });
    }
    // exact re-sum check
    let mut acc = vec![Q::zero(); flux.values.len()];
    for cyc in &cycles {
        for &(e, s) in &cyc.edges {
            if s > 0 {
                acc[e] += &cyc.weight;
            } else {
                acc[e] -= &cyc.weight;
            }
        }
    }
    if acc != flux.values {
        return Err(Error::VerificationFailed("cycle decomposition does not re-sum".into()));
    }
    Ok(cycles)
}

/// The total asymptotic cycle of the flux in real 1-homology coordinates.
///
/// Computed three ways and compared exactly: the weighted sum of orbit-cycle
/// classes from a decomposition, the direct pairing vector of the cochain,
/// and the Poincare-dual coordinates of the cohomology class through the
/// basis pairing matrix.
pub fn total_asymptotic_cycle(
    c: &SimplicialComplex,
    ds: &DualStructure,
    hom: &Homology,
    flux: &FluxField,
) -> Result<Vec<Q>> {
    let b1 = hom.cocycle_basis(1).len();
    let direct = flux_class(c, hom, flux)?;

    // route 1: weighted orbit classes
    let mut summed = vec![Q::zero(); b1];
    for cyc in cycle_decomposition(c, ds, hom, flux)? {
        for (acc, cls) in summed.iter_mut().zip(&cyc.class) {
            *acc += &cyc.weight * cls;
        }
    }
    // route 2: cohomology coordinates against the duality pairing matrix
    let n = c.dimension();
    let omega = flux.as_cochain(c);
    let coords = hom.class_of(&omega)?.free_coords;
    let pairing = hom.cup_pairing_matrix(n - 1)?;
    let mut via_class = vec![Q::zero(); b1];
    for (i, v) in coords.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        for (j, p) in pairing[i].iter().enumerate() {
            via_class[j] += v * p;
        }
    }

    if summed != direct || via_class != direct {
        return Err(Error::VerificationFailed(
            "asymptotic cycle routes disagree".into(),
        ));
    }
    Ok(direct)
}

/// A nonnegative, direction-respecting, divergence-free reweighting of the
/// flux: the discrete invariant measures. Stored as the signed flux values;
/// signs agree with the reference flux on the (sub)support.
#[derive(Debug, Clone)]
pub struct Circulation {
    values: Vec<Q>,
}

impl Circulation {
    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Exact validity check against a reference flux: divergence-free,
    /// supported inside the flux's support, direction-respecting, nonzero,
    /// and of vanishing real homology class.
    pub fn verify(
        &self,
        c: &SimplicialComplex,
        ds: &DualStructure,
        hom: &Homology,
        flux: &FluxField,
    ) -> Result<()> {
        if self.values.len() != flux.values.len() {
            return Err(Error::ShapeMismatch("circulation length".into()));
        }
        if self.is_zero() {
            return Err(Error::VerificationFailed("circulation is zero".into()));
        }
        if ds.divergence(&self.values).iter().any(|d| !d.is_zero()) {
            return Err(Error::VerificationFailed("circulation is not divergence-free".into()));
        }
        for (z, x) in self.values.iter().zip(&flux.values) {
            if !z.is_zero() && x.is_zero() {
                return Err(Error::VerificationFailed("circulation leaves the support".into()));
            }
            if (z * x).is_negative() {
                return Err(Error::VerificationFailed("circulation reverses the flow".into()));
            }
        }
        let circ_flux = FluxField { values: self.values.clone() };
        let cls = hom.class_of(&circ_flux.as_cochain(c))?;
        if !cls.real_part_is_zero() {
            return Err(Error::VerificationFailed("circulation class is nonzero".into()));
        }
        let pairing = flux_class(c, hom, &circ_flux)?;
        if pairing.iter().any(|p| !p.is_zero()) {
            return Err(Error::VerificationFailed("circulation pairing is nonzero".into()));
        }
        Ok(())
    }
}

/// An integral dual-closed 1-cochain with unit margins against the flux: the
/// certificate that the flow admits a cross-section.
#[derive(Debug, Clone)]
pub struct CrossSection {
    pub theta: Vec<Z>,
    /// (support edge, theta_e * x_e), every margin at least one.
    pub margins: Vec<(usize, Q)>,
}

impl CrossSection {
    pub fn verify(&self, ds: &DualStructure, flux: &FluxField) -> Result<()> {
        let theta_q: Vec<Q> = self.theta.iter().map(|z| Q::from(z.clone())).collect();
        if !ds.is_dual_closed(&theta_q) {
            return Err(Error::VerificationFailed("section cochain is not dual-closed".into()));
        }
        for &(e, ref m) in &self.margins {
            let prod = &theta_q[e] * &flux.values[e];
            if prod != *m || prod < Q::one() {
                return Err(Error::VerificationFailed("section margin below one".into()));
            }
        }
        // margins must cover the whole support
        let covered: std::collections::BTreeSet<usize> =
            self.margins.iter().map(|&(e, _)| e).collect();
        for e in flux.support() {
            if !covered.contains(&e) {
                return Err(Error::VerificationFailed("margin missing on a support edge".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum SectionOutcome {
    Section(CrossSection),
    NoSection(Circulation),
}

/// Clears denominators: the least N >= 1 with N * theta integral. Margins
/// scale by N, so positivity normalized to >= 1 is preserved.
pub fn integral_scale(theta: &[Q]) -> (Vec<Z>, Z) {
    let n = denominator_lcm(theta);
    let scaled = theta
        .iter()
        .map(|t| {
            let s = t * Q::from(n.clone());
            debug_assert!(s.denom().is_one());
            s.numer().clone()
        })
        .collect();
    (scaled, n)
}

/// Decides cross-section existence for a divergence-free flux.
///
/// Feasibility of { theta dual-closed, theta_e x_e >= 1 on the support } is
/// decided by exact linear programming; a feasible rational solution is made
/// integral by clearing denominators. The infeasible branch converts the
/// Farkas multipliers on the margin rows into the circulation
/// `z_e = y_e x_e`, which the Farkas identity makes a dual boundary: it is
/// divergence-free with vanishing class, and both facts are re-verified.
pub fn cross_section(
    c: &SimplicialComplex,
    ds: &DualStructure,
    hom: &Homology,
    flux: &FluxField,
) -> Result<SectionOutcome> {
    let support = flux.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let n_edges = ds.edges.len();

    let eq_rows = ds.two_cells.len();
    let mut eq = QMat::zeros(eq_rows, n_edges);
    for (r, cell) in ds.two_cells.iter().enumerate() {
        for &(e, s) in &cell.edges {
            eq[(r, e)] += Q::from(Z::from(s as i64));
        }
    }
    let mut ineq = QMat::zeros(support.len(), n_edges);
    for (r, &e) in support.iter().enumerate() {
        ineq[(r, e)] = flux.values[e].clone();
    }
    let sys = LinearSystem::new(
        eq,
        vec![Q::zero(); eq_rows],
        ineq,
        vec![Q::one(); support.len()],
    )?;

    match lp_feasible(&sys)? {
        LpOutcome::Feasible(theta_hat) => {
            let (theta, scale) = integral_scale(&theta_hat);
            let theta_q: Vec<Q> = theta.iter().map(|z| Q::from(z.clone())).collect();
            let margins: Vec<(usize, Q)> =
                support.iter().map(|&e| (e, &theta_q[e] * &flux.values[e])).collect();
            let section = CrossSection { theta, margins };
            section.verify(ds, flux)?;
            let _ = scale;
            Ok(SectionOutcome::Section(section))
        }
        LpOutcome::Infeasible(cert) => {
            let mut values = vec![Q::zero(); n_edges];
            for (r, &e) in support.iter().enumerate() {
                let y = &cert.ineq_multipliers[r];
                if !y.is_zero() {
                    values[e] = y * &flux.values[e];
                }
            }
            let witness = Circulation { values };
            witness.verify(c, ds, hom, flux)?;
            Ok(SectionOutcome::NoSection(witness))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{dual_structure, generate};
    use crate::num::{q_from_i64, q_ratio};

    struct Setup {
        c: SimplicialComplex,
    }

    impl Setup {
        fn new(name: &str) -> Self {
            Setup { c: generate(&name.parse().unwrap()).unwrap() }
        }
    }

    #[test]
    fn zero_flux_decomposes_to_nothing() {
        let s = Setup::new("torus2");
        let ds = dual_structure(&s.c).unwrap();
        let hom = Homology::new(&s.c);
        let flux = flux_from_form(&s.c, &ds, &Cochain::zero(&s.c, 1)).unwrap();
        assert!(cycle_decomposition(&s.c, &ds, &hom, &flux).unwrap().is_empty());
    }

    #[test]
    fn divergence_tracks_coboundary() {
        // on the oriented torus, divergence of a flux equals the coboundary
        // evaluated against positively oriented top cells
        let s = Setup::new("torus2");
        let ds = dual_structure(&s.c).unwrap();
        let orient = s.c.orientation().unwrap();
        let mut omega = Cochain::zero(&s.c, 1);
        for (i, v) in omega.values_mut().iter_mut().enumerate() {
            *v = q_from_i64((i as i64 % 5) - 2);
        }
        let d = omega.coboundary(&s.c);
        let div = ds.divergence(omega.values());
        for t in 0..s.c.simplex_count(2) {
            let expected = d.value(t) * q_from_i64(orient[t] as i64);
            assert_eq!(div[t], expected, "divergence = oriented coboundary");
        }
    }

    #[test]
    fn exact_flux_has_no_section_and_zero_cycle() {
        let s = Setup::new("torus2");
        let ds = dual_structure(&s.c).unwrap();
        let hom = Homology::new(&s.c);
        let mut phi = Cochain::zero(&s.c, 0);
        phi.values_mut()[0] = q_from_i64(2);
        phi.values_mut()[4] = q_from_i64(-1);
        let omega = phi.coboundary(&s.c);
        let flux = flux_from_form(&s.c, &ds, &omega).unwrap();
        let total = total_asymptotic_cycle(&s.c, &ds, &hom, &flux).unwrap();
        assert!(total.iter().all(Zero::is_zero), "exact flux has zero asymptotic cycle");
        match cross_section(&s.c, &ds, &hom, &flux).unwrap() {
            SectionOutcome::NoSection(w) => w.verify(&s.c, &ds, &hom, &flux).unwrap(),
            SectionOutcome::Section(_) => panic!("exact flux cannot admit a section"),
        }
    }

    #[test]
    fn asymptotic_cycle_scales_linearly() {
        let s = Setup::new("torus2");
        let ds = dual_structure(&s.c).unwrap();
        let hom = Homology::new(&s.c);
        let omega = hom.cocycle_basis(1)[0].clone();
        let flux = flux_from_form(&s.c, &ds, &omega).unwrap();
        assert_eq!(flux.as_cochain(&s.c), omega, "reindexing inverts exactly");
        let total = total_asymptotic_cycle(&s.c, &ds, &hom, &flux).unwrap();
        let scaled = flux.scaled(&q_from_i64(5));
        let total5 = total_asymptotic_cycle(&s.c, &ds, &hom, &scaled).unwrap();
        for (a, b) in total.iter().zip(&total5) {
            assert_eq!(&(a * q_from_i64(5)), b);
        }
    }

    #[test]
    fn decomposition_periods_and_classes_are_consistent() {
        let s = Setup::new("torus2");
        let ds = dual_structure(&s.c).unwrap();
        let hom = Homology::new(&s.c);
        let omega = hom.cocycle_basis(1)[0].scaled(&q_ratio(3, 2));
        let flux = flux_from_form(&s.c, &ds, &omega).unwrap();
        let cycles = cycle_decomposition(&s.c, &ds, &hom, &flux).unwrap();
        assert!(!cycles.is_empty());
        assert!(cycles.len() <= flux.support().len());
        for cyc in &cycles {
            assert!(cyc.weight.is_positive());
            assert_eq!(cyc.period, cyc.edges.len());
            // period times the asymptotic cycle reproduces the class
            let recon: Vec<Q> = cyc
                .asymptotic_cycle()
                .iter()
                .map(|a| a * q_from_i64(cyc.period as i64))
                .collect();
            assert_eq!(recon, cyc.class);
        }
    }

    #[test]
    fn empty_support_is_rejected() {
        let s = Setup::new("torus2");
        let ds = dual_structure(&s.c).unwrap();
        let hom = Homology::new(&s.c);
        let flux = flux_from_form(&s.c, &ds, &Cochain::zero(&s.c, 1)).unwrap();
        assert!(matches!(
            cross_section(&s.c, &ds, &hom, &flux),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn integral_scale_clears_denominators() {
        let theta = vec![q_ratio(1, 2), q_ratio(1, 3)];
        let (scaled, n) = integral_scale(&theta);
        assert_eq!(n, Z::from(6));
        assert_eq!(scaled, vec![Z::from(3), Z::from(2)]);
        let already = vec![q_from_i64(4), q_from_i64(-1)];
        let (scaled, n) = integral_scale(&already);
        assert_eq!(n, Z::from(1));
        assert_eq!(scaled, vec![Z::from(4), Z::from(-1)]);
    }
}
