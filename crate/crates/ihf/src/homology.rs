//! Integral and rational (co)homology via Smith normal forms: groups,
//! torsion, class coordinates, cup products, and pairings.

use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cochain::Cochain;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{smith_full, QMat, SmithFull, ZMat};
use crate::num::{Q, Z};

/// Coefficient choice for group computations. Real coefficients are realized
/// exactly over the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Integer,
    Real,
}

/// A k-chain: one exact rational per stored oriented k-simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    degree: usize,
    values: Vec<Q>,
}

impl Chain {
    pub fn zero(c: &SimplicialComplex, degree: usize) -> Self {
        Chain { degree, values: vec![Q::zero(); c.simplex_count(degree)] }
    }

    pub fn from_values(c: &SimplicialComplex, degree: usize, values: Vec<Q>) -> Result<Self> {
        if values.len() != c.simplex_count(degree) {
            return Err(Error::ShapeMismatch("chain length".into()));
        }
        Ok(Chain { degree, values })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn boundary(&self, c: &SimplicialComplex) -> Chain {
        if self.degree == 0 {
            return Chain { degree: 0, values: vec![] };
        }
        let b = c.boundary_matrix(self.degree);
        Chain { degree: self.degree - 1, values: b.matvec_q(&self.values) }
    }

    pub fn is_cycle(&self, c: &SimplicialComplex) -> bool {
        self.degree == 0 || self.boundary(c).values.iter().all(Zero::is_zero)
    }
}

/// The fundamental cycle of a closed oriented complex: the orientation signs
/// as a top-degree chain.
pub fn fundamental_cycle(c: &SimplicialComplex) -> Result<Chain> {
    if !c.is_closed() || !c.is_orientable() {
        return Err(Error::NotOrientedClosed);
    }
    let o = c.orientation().expect("orientable");
    Ok(Chain {
        degree: c.dimension(),
        values: o.iter().map(|&s| Q::from(Z::from(s as i64))).collect(),
    })
}

#[derive(Debug, Clone)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    /// Invariant factors > 1 (empty over the reals).
    pub torsion: Vec<Z>,
    /// Representative cycles generating the free part.
    pub basis: Vec<Chain>,
}

impl HomologyGroup {
    /// Conventional description such as `Z^2 + Z/2`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// A cohomology class: closed representative plus exact coordinates in the
/// Smith-adapted basis of H^k.
#[derive(Debug, Clone)]
pub struct CohomologyClass {
    pub degree: usize,
    pub representative: Cochain,
    /// Coordinates on the free part of H^k (rational for rational classes).
    pub free_coords: Vec<Q>,
    /// Residue and modulus per torsion slot; present only for integral
    /// representatives, where the residues are well defined.
    pub torsion_coords: Option<Vec<(Z, Z)>>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.free_coords.iter().all(Zero::is_zero)
            && self
                .torsion_coords
                .as_ref()
                .is_none_or(|t| t.iter().all(|(r, m)| (r % m).is_zero()))
    }

    pub fn real_part_is_zero(&self) -> bool {
        self.free_coords.iter().all(Zero::is_zero)
    }
}

/// Torsion verdict for an integral class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorsionVerdict {
    /// The class has infinite order (nonzero free part).
    No,
    /// Minimal m >= 1 with m times the class vanishing integrally.
    Yes { order: Z },
}

/// Cached (co)homology data for one complex. All methods are exact; data per
/// degree is computed once behind `OnceLock`, so a shared reference is safe
/// for concurrent use.
pub struct Homology<'a> {
    complex: &'a SimplicialComplex,
    boundary_snf: Vec<OnceLock<SmithFull>>,
    chain_data: Vec<OnceLock<ChainDegree>>,
    cochain_data: Vec<OnceLock<CochainDegree>>,
}

struct ChainDegree {
    betti: usize,
    torsion: Vec<Z>,
    basis: Vec<Vec<Z>>,
}

struct CochainDegree {
    /// Kernel (cocycle) basis as columns, an n_k x z integer matrix.
    kernel: ZMat,
    /// Rows extracting kernel coordinates: coords(z) = extract · z.
    extract: ZMat,
    /// Smith data of the image-in-kernel-coordinates matrix.
    quotient: SmithFull,
    free_slots: Vec<usize>,
    torsion_slots: Vec<(usize, Z)>,
    /// Integral cocycles representing the free basis of H^k.
    basis: Vec<Vec<Z>>,
}

impl<'a> Homology<'a> {
    pub fn new(complex: &'a SimplicialComplex) -> Self {
        let n = complex.dimension();
        Homology {
            complex,
            boundary_snf: (0..=n + 1).map(|_| OnceLock::new()).collect(),
            chain_data: (0..=n).map(|_| OnceLock::new()).collect(),
            cochain_data: (0..=n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.complex
    }

    fn snf(&self, k: usize) -> Option<&SmithFull> {
        let n = self.complex.dimension();
        if k == 0 || k > n {
            return None;
        }
        Some(self.boundary_snf[k].get_or_init(|| smith_full(&self.complex.boundary_matrix(k).to_z())))
    }

    /// Rank of the k-boundary map (exact, from the Smith form).
    pub fn boundary_rank(&self, k: usize) -> usize {
        self.snf(k).map_or(0, |s| s.rank)
    }

    /// Dimension of the space of closed k-cochains.
    pub fn cocycle_rank(&self, k: usize) -> usize {
        self.complex.simplex_count(k) - self.boundary_rank(k + 1)
    }

    /// Integral basis of the space of closed k-cochains, as matrix columns.
    pub(crate) fn cocycle_kernel_matrix(&self, k: usize) -> &ZMat {
        &self.cochain_degree(k).kernel
    }

    pub fn betti(&self, k: usize) -> usize {
        let n = self.complex.dimension();
        if k > n {
            return 0;
        }
        self.complex.simplex_count(k) - self.boundary_rank(k) - self.boundary_rank(k + 1)
    }

    /// H_k with the requested coefficients. The free-part cycles returned
    /// here are normalized to pair as the identity against the cocycle basis
    /// of the same degree (the pairing between the free parts is perfect, so
    /// the change of basis is integral).
    pub fn group(&self, k: usize, coefficients: Coefficients) -> Result<HomologyGroup> {
        let n = self.complex.dimension();
        if k > n {
            return Err(Error::DegreeOutOfRange { degree: k, dimension: n });
        }
        let data = self.chain_degree(k);
        let torsion = match coefficients {
            Coefficients::Integer => data.torsion.clone(),
            Coefficients::Real => Vec::new(),
        };
        let basis = self.dualized_cycle_basis(k, &data.basis)?;
        Ok(HomologyGroup { degree: k, betti: data.betti, torsion, basis })
    }

    /// Rescales a free cycle basis so that <cocycle_i, cycle_j> = delta_ij.
    fn dualized_cycle_basis(&self, k: usize, raw: &[Vec<Z>]) -> Result<Vec<Chain>> {
        let b = raw.len();
        if b == 0 {
            return Ok(Vec::new());
        }
        let cocycles = self.cocycle_basis(k);
        debug_assert_eq!(cocycles.len(), b);
        let mut pairing = QMat::zeros(b, b);
        for (i, gamma) in cocycles.iter().enumerate() {
            for (j, z) in raw.iter().enumerate() {
                let mut acc = Q::zero();
                for (gv, zv) in gamma.values().iter().zip(z) {
                    if !gv.is_zero() && !zv.is_zero() {
                        acc += gv * Q::from(zv.clone());
                    }
                }
                pairing[(i, j)] = acc;
            }
        }
        // invert the perfect pairing; unimodularity keeps the result integral
        let mut columns = Vec::with_capacity(b);
        for target in 0..b {
            let rhs: Vec<Q> =
                (0..b).map(|i| if i == target { Q::one() } else { Q::zero() }).collect();
            let col = crate::linalg::solve_rational(&pairing, &rhs).ok_or_else(|| {
                Error::VerificationFailed("free-part pairing is not invertible".into())
            })?;
            columns.push(col);
        }
        let n_k = self.complex.simplex_count(k);
        let mut out = Vec::with_capacity(b);
        for target in 0..b {
            let mut values = vec![Q::zero(); n_k];
            for (m, coeff) in columns[target].iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for (slot, zv) in raw[m].iter().enumerate() {
                    if !zv.is_zero() {
                        values[slot] += coeff * Q::from(zv.clone());
                    }
                }
            }
            out.push(Chain { degree: k, values });
        }
        Ok(out)
    }

    /// H^k (cohomology) with the requested coefficients.
    pub fn cohomology_group(&self, k: usize, coefficients: Coefficients) -> Result<HomologyGroup> {
        let n = self.complex.dimension();
        if k > n {
            return Err(Error::DegreeOutOfRange { degree: k, dimension: n });
        }
        let data = self.cochain_degree(k);
        let torsion = match coefficients {
            Coefficients::Integer => data.torsion_slots.iter().map(|(_, d)| d.clone()).collect(),
            Coefficients::Real => Vec::new(),
        };
        let basis = data
            .basis
            .iter()
            .map(|v| Chain {
                degree: k,
                values: v.iter().map(|z| Q::from(z.clone())).collect(),
            })
            .collect();
        Ok(HomologyGroup { degree: k, betti: data.free_slots.len(), torsion, basis })
    }

    fn chain_degree(&self, k: usize) -> &ChainDegree {
        self.chain_data[k].get_or_init(|| {
            let n_k = self.complex.simplex_count(k);
            // kernel basis of the k-boundary
            let (kernel, extract): (ZMat, ZMat) = match self.snf(k) {
                None => (ZMat::identity(n_k), ZMat::identity(n_k)),
                Some(s) => {
                    let r = s.rank;
                    let z = n_k - r;
                    let kernel = ZMat::from_fn(n_k, z, |i, j| s.v[(i, r + j)].clone());
                    let extract = ZMat::from_fn(z, n_k, |i, j| s.v_inv[(r + i, j)].clone());
                    (kernel, extract)
                }
            };
            let n = self.complex.dimension();
            let image: ZMat = if k < n {
                extract.matmul(&self.complex.boundary_matrix(k + 1).to_z())
            } else {
                ZMat::zeros(kernel.cols(), 0)
            };
            let qf = smith_full(&image);
            let (free_slots, torsion_slots) = classify_slots(&qf, kernel.cols());
            let basis: Vec<Vec<Z>> = free_slots
                .iter()
                .map(|&slot| {
                    let col: Vec<Z> = (0..kernel.cols()).map(|i| qf.u_inv[(i, slot)].clone()).collect();
                    kernel.matvec(&col)
                })
                .collect();
            ChainDegree {
                betti: free_slots.len(),
                torsion: torsion_slots.into_iter().map(|(_, d)| d).collect(),
                basis,
            }
        })
    }

    fn cochain_degree(&self, k: usize) -> &CochainDegree {
        self.cochain_data[k].get_or_init(|| {
            let n = self.complex.dimension();
            let n_k = self.complex.simplex_count(k);
            // kernel of the coboundary d_k = transpose of the (k+1)-boundary
            let (kernel, extract): (ZMat, ZMat) = match self.snf(k + 1) {
                None => (ZMat::identity(n_k), ZMat::identity(n_k)),
                Some(s) => {
                    let r = s.rank;
                    let z = n_k - r;
                    // columns r.. of U^T, i.e. rows r.. of U
                    let kernel = ZMat::from_fn(n_k, z, |i, j| s.u[(r + j, i)].clone());
                    let extract = ZMat::from_fn(z, n_k, |i, j| s.u_inv[(j, r + i)].clone());
                    (kernel, extract)
                }
            };
            let image: ZMat = if k >= 1 {
                // image of d_{k-1} = transpose of the k-boundary
                extract.matmul(&self.complex.boundary_matrix(k).to_z().transpose())
            } else {
                ZMat::zeros(kernel.cols(), 0)
            };
            let _ = n;
            let qf = smith_full(&image);
            let (free_slots, torsion_slots) = classify_slots(&qf, kernel.cols());
            let basis: Vec<Vec<Z>> = free_slots
                .iter()
                .map(|&slot| {
                    let col: Vec<Z> = (0..kernel.cols()).map(|i| qf.u_inv[(i, slot)].clone()).collect();
                    kernel.matvec(&col)
                })
                .collect();
            CochainDegree { kernel, extract, quotient: qf, free_slots, torsion_slots, basis }
        })
    }

    /// Integral cocycles generating the torsion part of H^k, with their
    /// orders.
    pub fn torsion_cocycle_basis(&self, k: usize) -> Vec<(Cochain, Z)> {
        let data = self.cochain_degree(k);
        data.torsion_slots
            .iter()
            .map(|(slot, d)| {
                let col: Vec<Z> =
                    (0..data.kernel.cols()).map(|i| data.quotient.u_inv[(i, *slot)].clone()).collect();
                let vals = data.kernel.matvec(&col);
                let cochain = Cochain::from_values(
                    self.complex,
                    k,
                    vals.into_iter().map(Q::from).collect(),
                )
                .expect("torsion basis length");
                (cochain, d.clone())
            })
            .collect()
    }

    /// Basis of the free part of H^k as integral closed cochains.
    pub fn cocycle_basis(&self, k: usize) -> Vec<Cochain> {
        self.cochain_degree(k)
            .basis
            .iter()
            .map(|v| {
                Cochain::from_values(
                    self.complex,
                    k,
                    v.iter().map(|z| Q::from(z.clone())).collect(),
                )
                .expect("basis length")
            })
            .collect()
    }

    /// Exact class coordinates of a closed cochain.
    pub fn class_of(&self, z: &Cochain) -> Result<CohomologyClass> {
        if !z.is_closed(self.complex) {
            return Err(Error::NotClosed);
        }
        let k = z.degree();
        let data = self.cochain_degree(k);
        // kernel coordinates, exact: u = extract · z
        let u = data.extract.matvec_q(z.values());
        debug_assert_eq!(data.kernel.matvec_q(&u), z.values().to_vec());
        // quotient coordinates w = U' u
        let w = data.quotient.u.matvec_q(&u);
        let free_coords: Vec<Q> = data.free_slots.iter().map(|&s| w[s].clone()).collect();
        let torsion_coords = if z.is_integral() {
            Some(
                data.torsion_slots
                    .iter()
                    .map(|(s, d)| {
                        let wi = &w[*s];
                        debug_assert!(wi.denom().is_one());
                        (wi.numer().mod_floor(d), d.clone())
                    })
                    .collect(),
            )
        } else {
            None
        };
        Ok(CohomologyClass { degree: k, representative: z.clone(), free_coords, torsion_coords })
    }

    /// Minimal torsion order of an integral class, or `No` if the free part
    /// is nonzero.
    pub fn is_torsion(&self, class: &CohomologyClass) -> Result<TorsionVerdict> {
        let Some(torsion) = &class.torsion_coords else {
            return Err(Error::BadParameters("torsion test requires an integral class".into()));
        };
        if !class.real_part_is_zero() {
            return Ok(TorsionVerdict::No);
        }
        let mut order = Z::one();
        for (residue, modulus) in torsion {
            let r = residue.mod_floor(modulus);
            if r.is_zero() {
                continue;
            }
            let g = r.gcd(modulus);
            order = order.lcm(&(modulus / g));
        }
        Ok(TorsionVerdict::Yes { order })
    }

    /// Alexander-Whitney cup product at cochain level, front face times back
    /// face in the global vertex order.
    pub fn cup(&self, alpha: &Cochain, beta: &Cochain) -> Result<Cochain> {
        let (k, l) = (alpha.degree(), beta.degree());
        let n = self.complex.dimension();
        if k + l > n {
            return Err(Error::DegreeOverflow(k, l, n));
        }
        let mut values = Vec::with_capacity(self.complex.simplex_count(k + l));
        for s in self.complex.simplices(k + l) {
            let front = &s[..=k];
            let back = &s[k..];
            let fi = self.complex.index_of(k, front).expect("front face exists");
            let bi = self.complex.index_of(l, back).expect("back face exists");
            values.push(alpha.value(fi) * beta.value(bi));
        }
        Cochain::from_values(self.complex, k + l, values)
    }

    /// Kronecker pairing of a class with a cycle of the same degree.
    pub fn pair(&self, class: &CohomologyClass, cycle: &Chain) -> Result<Q> {
        if cycle.degree() != class.degree {
            return Err(Error::ShapeMismatch("pairing degrees".into()));
        }
        if !cycle.is_cycle(self.complex) {
            return Err(Error::NotACycle);
        }
        Ok(self.pair_unchecked(&class.representative, cycle))
    }

    fn pair_unchecked(&self, cochain: &Cochain, chain: &Chain) -> Q {
        let mut acc = Q::zero();
        for (a, b) in cochain.values().iter().zip(chain.values()) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    /// Evaluation of a top-degree cochain against the fundamental cycle.
    pub fn integrate(&self, top: &Cochain) -> Result<Q> {
        let mu = fundamental_cycle(self.complex)?;
        if top.degree() != self.complex.dimension() {
            return Err(Error::ShapeMismatch("integration degree".into()));
        }
        Ok(self.pair_unchecked(top, &mu))
    }

    /// Matrix of pairings of basis cup products against the fundamental cycle,
    /// for complementary degrees k + l = n; realizes the duality pairing.
    pub fn cup_pairing_matrix(&self, k: usize) -> Result<Vec<Vec<Q>>> {
        let n = self.complex.dimension();
        if k > n {
            return Err(Error::DegreeOutOfRange { degree: k, dimension: n });
        }
        let l = n - k;
        let left = self.cocycle_basis(k);
        let right = self.cocycle_basis(l);
        let mut out = Vec::with_capacity(left.len());
        for a in &left {
            let mut row = Vec::with_capacity(right.len());
            for b in &right {
                let prod = self.cup(a, b)?;
                row.push(self.integrate(&prod)?);
            }
            out.push(row);
        }
        Ok(out)
    }
}

fn classify_slots(qf: &SmithFull, z_dim: usize) -> (Vec<usize>, Vec<(usize, Z)>) {
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    for slot in 0..z_dim {
        let d = if slot < qf.d.rows().min(qf.d.cols()) { qf.d[(slot, slot)].clone() } else { Z::zero() };
        if d.is_zero() {
            free.push(slot);
        } else if d.abs() > Z::one() {
            torsion.push((slot, d.abs()));
        }
    }
    (free, torsion)
}
