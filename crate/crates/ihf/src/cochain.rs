//! Exact rational cochains on a simplicial complex.

use num_traits::Zero;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::num::{q_is_integer, Q};

/// A k-cochain: one exact rational per stored (sorted) oriented k-simplex.
/// Values against other vertex orderings follow by sign equivariance.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    degree: usize,
    values: Vec<Q>,
}

impl Cochain {
    pub fn zero(c: &SimplicialComplex, degree: usize) -> Self {
        Cochain { degree, values: vec![Q::zero(); c.simplex_count(degree)] }
    }

    pub fn from_values(c: &SimplicialComplex, degree: usize, values: Vec<Q>) -> Result<Self> {
        if degree > c.dimension() {
            return Err(Error::DegreeOutOfRange { degree, dimension: c.dimension() });
        }
        if values.len() != c.simplex_count(degree) {
            return Err(Error::ShapeMismatch(format!(
                "expected {} values for degree {}, got {}",
                c.simplex_count(degree),
                degree,
                values.len()
            )));
        }
        Ok(Cochain { degree, values })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Q] {
        &mut self.values
    }

    pub fn value(&self, i: usize) -> &Q {
        &self.values[i]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(q_is_integer)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| !self.values[i].is_zero()).collect()
    }

    /// Evaluation on an arbitrarily ordered vertex tuple, with the
    /// permutation sign relative to the stored sorted orientation. Repeated
    /// vertices yield zero.
    pub fn value_on(&self, c: &SimplicialComplex, vertices: &[u32]) -> Result<Q> {
        if vertices.len() != self.degree + 1 {
            return Err(Error::ShapeMismatch("vertex tuple length".into()));
        }
        let (sorted, sign) = sort_with_sign(vertices);
        if sign == 0 {
            return Ok(Q::zero());
        }
        let idx = c
            .index_of(self.degree, &sorted)
            .ok_or_else(|| Error::BadParameters(format!("unknown simplex {vertices:?}")))?;
        let v = self.values[idx].clone();
        Ok(if sign < 0 { -v } else { v })
    }

    /// The simplicial coboundary: (dα)(σ) = α(∂σ).
    pub fn coboundary(&self, c: &SimplicialComplex) -> Cochain {
        let k = self.degree;
        if k >= c.dimension() {
            return Cochain { degree: k + 1, values: vec![] };
        }
        let d = c.coboundary_matrix(k);
        Cochain { degree: k + 1, values: d.matvec_q(&self.values) }
    }

    pub fn is_closed(&self, c: &SimplicialComplex) -> bool {
        self.coboundary(c).is_zero()
    }

    pub fn scaled(&self, factor: &Q) -> Cochain {
        Cochain { degree: self.degree, values: self.values.iter().map(|v| v * factor).collect() }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree, "cochain degrees");
        Cochain {
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree, "cochain degrees");
        Cochain {
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Pullback along a simplicial vertex map `domain -> codomain`. Simplices
/// with degenerate image contribute zero; the permutation sign of sorting the
/// image tuple is applied.
pub fn pullback(
    domain: &SimplicialComplex,
    codomain: &SimplicialComplex,
    vertex_map: &[usize],
    beta: &Cochain,
) -> Result<Cochain> {
    if vertex_map.len() != domain.vertex_count() {
        return Err(Error::ShapeMismatch("vertex map length".into()));
    }
    let k = beta.degree();
    if k > domain.dimension() {
        return Ok(Cochain { degree: k, values: vec![] });
    }
    let mut values = Vec::with_capacity(domain.simplex_count(k));
    for s in domain.simplices(k) {
        let image: Vec<u32> = s.iter().map(|&v| vertex_map[v as usize] as u32).collect();
        let (sorted, sign) = sort_with_sign(&image);
        if sign == 0 {
            values.push(Q::zero());
            continue;
        }
        let idx = codomain
            .index_of(k, &sorted)
            .ok_or_else(|| Error::BadParameters("vertex map is not simplicial".into()))?;
        let v = beta.value(idx).clone();
        values.push(if sign < 0 { -v } else { v });
    }
    Ok(Cochain { degree: k, values })
}

/// Sorts a tuple and reports the permutation sign; 0 when entries repeat.
pub(crate) fn sort_with_sign(tuple: &[u32]) -> (Vec<u32>, i32) {
    let mut v = tuple.to_vec();
    let mut sign = 1i32;
    // insertion sort counting swaps
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return (v, 0);
    }
    (v, sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generate;
    use crate::num::{q_from_i64, q_zero};

    #[test]
    fn sign_equivariance() {
        let c = generate(&"sphere2".parse().unwrap()).unwrap();
        let mut alpha = Cochain::zero(&c, 1);
        alpha.values_mut()[0] = q_from_i64(5); // edge (0,1)
        let forward = alpha.value_on(&c, &[0, 1]).unwrap();
        let backward = alpha.value_on(&c, &[1, 0]).unwrap();
        assert_eq!(forward, q_from_i64(5));
        assert_eq!(backward, q_from_i64(-5));
        assert_eq!(alpha.value_on(&c, &[0, 0]).unwrap(), q_zero());
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let c = generate(&"torus2".parse().unwrap()).unwrap();
        let mut phi = Cochain::zero(&c, 0);
        for (i, v) in phi.values_mut().iter_mut().enumerate() {
            *v = q_from_i64((i as i64 * 3) % 5 - 2);
        }
        let d_phi = phi.coboundary(&c);
        let dd_phi = d_phi.coboundary(&c);
        assert!(dd_phi.is_zero(), "dd = 0 exactly");
        assert!(d_phi.is_closed(&c));
    }

    #[test]
    fn pullback_commutes_with_coboundary() {
        // project the product torus onto its first circle factor
        let circle = crate::complex::circle(3).unwrap();
        let (prod, maps) = crate::complex::staircase_product(&circle, &circle).unwrap();
        assert_eq!(prod.simplex_count(2), 18);
        let mut phi = Cochain::zero(&circle, 0);
        phi.values_mut()[0] = q_from_i64(1);
        let pb = pullback(&prod, &circle, &maps.to_left, &phi).unwrap();
        let route_a = pb.coboundary(&prod);
        let route_b = pullback(&prod, &circle, &maps.to_left, &phi.coboundary(&circle)).unwrap();
        assert_eq!(route_a, route_b, "pullback is a cochain map");
    }
}
