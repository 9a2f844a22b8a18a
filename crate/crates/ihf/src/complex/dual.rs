//! The dual cell structure of a closed oriented complex.
//!
//! Dual vertices are top simplices, dual edges cross interior
//! codimension-one faces, and dual 2-cells are the edge loops around
//! codimension-two simplices. Orientations of dual edges are induced by the
//! global orientation, so that a codimension-one cochain read as dual-edge
//! flux is divergence-free exactly when it is closed.

use num_traits::Zero;

use super::SimplicialComplex;
use crate::error::{Error, Result};
use crate::num::Q;

/// Dual edge for a codimension-one face, oriented tail -> head across it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualEdge {
    pub tail: usize,
    pub head: usize,
}

/// The cyclic dual-edge loop around a codimension-two simplex. Each entry is
/// a dual-edge index together with the traversal sign relative to the edge's
/// own orientation.
#[derive(Debug, Clone)]
pub struct DualTwoCell {
    pub around: usize,
    pub edges: Vec<(usize, i8)>,
}

#[derive(Debug, Clone)]
pub struct DualStructure {
    pub dual_vertex_count: usize,
    /// Indexed by codimension-one simplex.
    pub edges: Vec<DualEdge>,
    pub two_cells: Vec<DualTwoCell>,
}

impl DualStructure {
    /// Signed flux sum at every dual vertex: head gets +, tail gets -.
    /// Equals the coboundary of the corresponding primal cochain evaluated on
    /// positively oriented top cells.
    pub fn divergence(&self, flux: &[Q]) -> Vec<Q> {
        assert_eq!(flux.len(), self.edges.len(), "flux length");
        let mut div = vec![Q::zero(); self.dual_vertex_count];
        for (e, val) in self.edges.iter().zip(flux) {
            if !val.is_zero() {
                div[e.head] += val;
                div[e.tail] -= val;
            }
        }
        div
    }

    /// Signed sums of a dual 1-cochain around every dual 2-cell; all zero
    /// exactly when the cochain is dual-closed.
    pub fn loop_sums(&self, theta: &[Q]) -> Vec<Q> {
        assert_eq!(theta.len(), self.edges.len(), "cochain length");
        self.two_cells
            .iter()
            .map(|cell| {
                let mut acc = Q::zero();
                for &(e, s) in &cell.edges {
                    if !theta[e].is_zero() {
                        if s > 0 {
                            acc += &theta[e];
                        } else {
                            acc -= &theta[e];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_dual_closed(&self, theta: &[Q]) -> bool {
        self.loop_sums(theta).iter().all(Zero::is_zero)
    }
}

/// Builds the dual structure. Requires a closed oriented complex of
/// dimension at least one.
pub fn dual_structure(c: &SimplicialComplex) -> Result<DualStructure> {
    let dim = c.dimension();
    if dim == 0 || !c.is_closed() || !c.is_orientable() {
        return Err(Error::NotOrientedClosed);
    }
    let orientation = c.orientation().expect("orientable complex carries orientation");
    let inc = c.face_incidences();
    let mut edges = Vec::with_capacity(inc.len());
    for tops in &inc {
        debug_assert_eq!(tops.len(), 2);
        let (t1, s1) = tops[0];
        let (t2, s2) = tops[1];
        // the head is the side where orientation * incidence = +1
        let (head, tail) = if orientation[t1] as i32 * s1 as i32 > 0 { (t1, t2) } else { (t2, t1) };
        debug_assert_ne!(
            orientation[t1] as i32 * s1 as i32,
            orientation[t2] as i32 * s2 as i32,
            "closed oriented complex must induce opposite signs"
        );
        edges.push(DualEdge { tail, head });
    }

    let mut two_cells = Vec::new();
    if dim >= 2 {
        // precompute, per top, its codimension-one faces
        let top_faces: Vec<Vec<usize>> = (0..c.simplex_count(dim))
            .map(|t| {
                super::subsets(c.simplex(dim, t), dim)
                    .into_iter()
                    .map(|f| c.index_of(dim - 1, &f).expect("face is enumerated"))
                    .collect()
            })
            .collect();
        // ring structure around each (dim-2)-simplex: alternating cycles of
        // tops and the (exactly two per top) facets containing it
        for (g, gtup) in c.simplices(dim - 2).iter().enumerate() {
            let tops: Vec<usize> = (0..c.simplex_count(dim))
                .filter(|&t| contains(c.simplex(dim, t), gtup))
                .collect();
            let facets_of_top: std::collections::HashMap<usize, Vec<usize>> = tops
                .iter()
                .map(|&t| {
                    let fs: Vec<usize> = top_faces[t]
                        .iter()
                        .copied()
                        .filter(|&f| contains(c.simplex(dim - 1, f), gtup))
                        .collect();
                    debug_assert_eq!(fs.len(), 2, "a top has two facets through a ridge");
                    (t, fs)
                })
                .collect();
            let mut visited: std::collections::HashSet<usize> = std::collections::HashSet::new();
            for &t0 in &tops {
                let f0 = *facets_of_top[&t0].iter().min().expect("two facets");
                if visited.contains(&f0) {
                    continue;
                }
                let mut loop_edges: Vec<(usize, i8)> = Vec::new();
                let (mut t, mut f) = (t0, f0);
                loop {
                    visited.insert(f);
                    let e = &edges[f];
                    let (next, sign) = if e.tail == t { (e.head, 1i8) } else { (e.tail, -1i8) };
                    loop_edges.push((f, sign));
                    t = next;
                    let pair = &facets_of_top[&t];
                    f = if pair[0] == f { pair[1] } else { pair[0] };
                    if visited.contains(&f) {
                        break;
                    }
                }
                two_cells.push(DualTwoCell { around: g, edges: loop_edges });
            }
        }
    }

    Ok(DualStructure { dual_vertex_count: c.simplex_count(dim), edges, two_cells })
}

fn contains(sup: &[u32], sub: &[u32]) -> bool {
    // both sorted
    let mut it = sup.iter();
    'outer: for s in sub {
        for v in it.by_ref() {
            if v == s {
                continue 'outer;
            }
            if v > s {
                return false;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generate;
    use crate::num::{q_from_i64, q_zero};

    #[test]
    fn sphere_dual_graph_is_k4() {
        let c = generate(&"sphere2".parse().unwrap()).unwrap();
        let ds = dual_structure(&c).unwrap();
        assert_eq!(ds.dual_vertex_count, 4);
        assert_eq!(ds.edges.len(), 6);
        // dual 2-cells: one loop per vertex of the sphere
        assert_eq!(ds.two_cells.len(), 4);
        for cell in &ds.two_cells {
            assert_eq!(cell.edges.len(), 3, "each vertex link is a triangle");
        }
    }

    #[test]
    fn coboundary_of_dual_potential_is_dual_closed() {
        let c = generate(&"torus2".parse().unwrap()).unwrap();
        let ds = dual_structure(&c).unwrap();
        assert_eq!(ds.dual_vertex_count, 14);
        assert_eq!(ds.edges.len(), 21);
        // theta = dual coboundary of a potential phi on dual vertices
        let phi: Vec<Q> = (0..ds.dual_vertex_count).map(|i| q_from_i64((i * i % 7) as i64)).collect();
        let theta: Vec<Q> =
            ds.edges.iter().map(|e| phi[e.head].clone() - phi[e.tail].clone()).collect();
        assert!(ds.is_dual_closed(&theta), "dual coboundaries sum to zero around 2-cells");
        // and a generic cochain is not dual-closed
        let mut generic =vec![q_zero(); ds.edges.len()];
        generic[0] = q_from_i64(1);
        assert!(!ds.is_dual_closed(&generic));
    }

    #[test]
    fn open_complex_is_rejected() {
        let c = crate::complex::SimplicialComplex::build(&[vec!["a", "b", "c"]]).unwrap();
        assert!(matches!(dual_structure(&c), Err(Error::NotOrientedClosed)));
    }
}
