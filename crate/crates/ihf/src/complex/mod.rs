//! Oriented triangulated closed manifolds: construction, validation, chain
//! complexes, and the dual cell structure.

mod cover;
mod dual;
mod generators;

pub use cover::{orientation_double_cover, CoveringMap};
pub use dual::{dual_structure, DualEdge, DualStructure, DualTwoCell};
pub use generators::{
    circle, generate, staircase_product, torus3_with_projection, Generator, ProductMaps,
};

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::linalg::IMat;

/// A finite simplicial complex built from its top-dimensional simplices.
///
/// Simplices are stored with sorted vertex indices; the orientation of a
/// stored simplex is the identity ordering, and evaluations against other
/// orderings pick up the permutation sign. Top simplices may repeat (the
/// repeat is kept as a distinct cell): such inputs are legal pseudomanifold
/// data but fail the manifold link check.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    /// simplices[k] = sorted vertex-index tuples, lexicographically ordered;
    /// dimensions below the top are duplicate-free.
    simplices: Vec<Vec<Vec<u32>>>,
    /// index[k] maps a sorted tuple to its position (first occurrence).
    index: Vec<HashMap<Vec<u32>, usize>>,
    /// boundary[k]: C_k -> C_{k-1} for k >= 1; boundary[0] has zero rows.
    boundary: Vec<IMat>,
    dimension: usize,
    is_closed: bool,
    is_pseudomanifold: bool,
    is_orientable: bool,
    /// Vertex-link verification, computed for dimension <= 3.
    links_ok: Option<bool>,
    /// Per-top orientation signs when orientable: the lexicographically
    /// smallest top simplex of each component carries +1.
    orientation: Option<Vec<i8>>,
}

impl SimplicialComplex {
    /// Builds a complex from top simplices given as vertex-name tuples.
    ///
    /// Vertex names are arbitrary strings ordered lexicographically. The
    /// result is deterministic and independent of input order.
    pub fn build<S: AsRef<str>>(top_simplices: &[Vec<S>]) -> Result<Self> {
        if top_simplices.is_empty() {
            return Err(Error::EmptyInput);
        }
        let dim = top_simplices[0].len().saturating_sub(1);
        for t in top_simplices {
            if t.len() != dim + 1 {
                return Err(Error::MixedDimension(dim, t.len().saturating_sub(1)));
            }
        }
        // vertex table
        let mut names: BTreeSet<String> = BTreeSet::new();
        for t in top_simplices {
            for v in t {
                names.insert(v.as_ref().to_string());
            }
        }
        let vertices: Vec<String> = names.into_iter().collect();
        let vid: HashMap<&str, u32> =
            vertices.iter().enumerate().map(|(i, s)| (s.as_str(), i as u32)).collect();

        // canonical top tuples (sorted indices), duplicates kept
        let mut tops: Vec<Vec<u32>> = Vec::with_capacity(top_simplices.len());
        for t in top_simplices {
            let mut tup: Vec<u32> = t.iter().map(|v| vid[v.as_ref()]).collect();
            tup.sort_unstable();
            if tup.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DegenerateSimplex(
                    t.iter().map(|v| v.as_ref().to_string()).collect(),
                ));
            }
            tops.push(tup);
        }
        tops.sort();

        // face enumeration, deduplicated below the top dimension
        let mut simplices: Vec<Vec<Vec<u32>>> = Vec::with_capacity(dim + 1);
        for k in 0..dim {
            let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
            for t in &tops {
                for sub in subsets(t, k + 1) {
                    set.insert(sub);
                }
            }
            simplices.push(set.into_iter().collect());
        }
        simplices.push(tops);

        let index: Vec<HashMap<Vec<u32>, usize>> = simplices
            .iter()
            .map(|list| {
                let mut m = HashMap::with_capacity(list.len());
                for (i, s) in list.iter().enumerate() {
                    m.entry(s.clone()).or_insert(i);
                }
                m
            })
            .collect();

        // pseudomanifold check: each (dim-1)-face in at most two tops
        if dim >= 1 {
            let mut face_count = vec![0usize; simplices[dim - 1].len()];
            for t in &simplices[dim] {
                for f in subsets(t, dim) {
                    face_count[index[dim - 1][&f]] += 1;
                }
            }
            if let Some(bad) = face_count.iter().position(|&c| c > 2) {
                let face = &simplices[dim - 1][bad];
                return Err(Error::NonPseudomanifold(
                    face.iter().map(|&v| vertices[v as usize].clone()).collect(),
                ));
            }
        }

        let boundary = build_boundaries(&simplices, dim);
        let mut complex = SimplicialComplex {
            vertices,
            simplices,
            index,
            boundary,
            dimension: dim,
            is_closed: false,
            is_pseudomanifold: true,
            is_orientable: false,
            links_ok: None,
            orientation: None,
        };
        complex.is_closed = complex.compute_closed();
        let (orientable, orientation) = complex.propagate_orientation();
        complex.is_orientable = orientable;
        complex.orientation = orientation;
        complex.links_ok = if dim <= 3 { Some(complex.check_links()) } else { None };
        Ok(complex)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn vertex_id(&self, name: &str) -> Option<u32> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(name)).ok().map(|i| i as u32)
    }

    /// Number of k-simplices (top-dimensional repeats counted).
    pub fn simplex_count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<u32>] {
        &self.simplices[k]
    }

    pub fn simplex(&self, k: usize, i: usize) -> &[u32] {
        &self.simplices[k][i]
    }

    /// Position of a sorted vertex tuple among the k-simplices.
    pub fn index_of(&self, k: usize, sorted: &[u32]) -> Option<usize> {
        self.index.get(k)?.get(sorted).copied()
    }

    /// Comma-joined vertex names; the wire identifier of a simplex.
    pub fn simplex_name(&self, k: usize, i: usize) -> String {
        self.simplices[k][i]
            .iter()
            .map(|&v| self.vertices[v as usize].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Boundary matrix C_k -> C_{k-1}, defined for 1 <= k <= dimension.
    pub fn boundary_matrix(&self, k: usize) -> &IMat {
        &self.boundary[k]
    }

    /// Coboundary matrix C^k -> C^{k+1}: the transpose of the (k+1)-boundary.
    pub fn coboundary_matrix(&self, k: usize) -> IMat {
        self.boundary[k + 1].transpose()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dimension)
            .map(|k| {
                let n = self.simplex_count(k) as i64;
                if k % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    pub fn is_closed(&self) -> bool {
        self.is_closed
    }

    pub fn is_pseudomanifold(&self) -> bool {
        self.is_pseudomanifold
    }

    pub fn is_orientable(&self) -> bool {
        self.is_orientable
    }

    /// Vertex-link verification result; `None` above dimension 3, where the
    /// check is skipped.
    pub fn links_ok(&self) -> Option<bool> {
        self.links_ok
    }

    /// Closed-manifold verdict: pseudomanifold plus link verification (for
    /// dimension <= 3; higher dimensions report the pseudomanifold data only).
    pub fn is_manifold(&self) -> bool {
        self.is_pseudomanifold && self.is_closed && self.links_ok.unwrap_or(true)
    }

    /// Per-top orientation signs when the complex is orientable.
    pub fn orientation(&self) -> Option<&[i8]> {
        self.orientation.as_deref()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut dsu = Dsu::new(self.vertices.len());
        if self.dimension >= 1 {
            for e in &self.simplices[1] {
                dsu.union(e[0] as usize, e[1] as usize);
            }
        }
        let root = dsu.find(0);
        (0..self.vertices.len()).all(|v| dsu.find(v) == root)
    }

    /// Tops incident to each (dim-1)-face, with the incidence sign of the
    /// face inside the top's boundary.
    pub fn face_incidences(&self) -> Vec<Vec<(usize, i8)>> {
        let dim = self.dimension;
        let mut out = vec![Vec::new(); self.simplex_count(dim.saturating_sub(1))];
        if dim == 0 {
            return out;
        }
        for (t, tup) in self.simplices[dim].iter().enumerate() {
            for (pos, f) in subsets_enumerated(tup) {
                let fi = self.index[dim - 1][&f];
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                out[fi].push((t, sign));
            }
        }
        out
    }

    fn compute_closed(&self) -> bool {
        if self.dimension == 0 {
            return true;
        }
        let inc = self.face_incidences();
        inc.iter().all(|tops| tops.len() == 2)
    }

    /// Breadth-first orientation propagation across shared faces. Each
    /// component is seeded with +1 on its lexicographically smallest top.
    fn propagate_orientation(&self) -> (bool, Option<Vec<i8>>) {
        let n_tops = self.simplex_count(self.dimension);
        if self.dimension == 0 {
            return (true, Some(vec![1; n_tops]));
        }
        let inc = self.face_incidences();
        let mut orient: Vec<i8> = vec![0; n_tops];
        let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n_tops];
        for tops in &inc {
            if tops.len() == 2 {
                let (t1, s1) = tops[0];
                let (t2, s2) = tops[1];
                // o1*s1 + o2*s2 = 0  =>  o2 = -o1*s1*s2
                let rel = -s1 * s2;
                adj[t1].push((t2, rel));
                adj[t2].push((t1, rel));
            }
        }
        for seed in 0..n_tops {
            if orient[seed] != 0 {
                continue;
            }
            orient[seed] = 1;
            let mut queue = std::collections::VecDeque::from([seed]);
            while let Some(t) = queue.pop_front() {
                for &(u, rel) in &adj[t] {
                    let expected = orient[t] * rel;
                    if orient[u] == 0 {
                        orient[u] = expected;
                        queue.push_back(u);
                    } else if orient[u] != expected {
                        return (false, None);
                    }
                }
            }
        }
        (true, Some(orient))
    }

    /// Vertex-link verification for dimension <= 3. Links must be spheres of
    /// the right dimension: two distinct points, a simplicial circle, or a
    /// simplicial 2-sphere.
    fn check_links(&self) -> bool {
        match self.dimension {
            0 => true,
            1 => (0..self.vertex_count()).all(|v| {
                let edges: Vec<&Vec<u32>> =
                    self.simplices[1].iter().filter(|e| e.contains(&(v as u32))).collect();
                edges.len() == 2 && edges[0] != edges[1]
            }),
            d @ (2 | 3) => (0..self.vertex_count()).all(|v| {
                let link_tops: Vec<Vec<String>> = self.simplices[d]
                    .iter()
                    .filter(|t| t.contains(&(v as u32)))
                    .map(|t| {
                        t.iter()
                            .filter(|&&u| u != v as u32)
                            .map(|&u| self.vertices[u as usize].clone())
                            .collect()
                    })
                    .collect();
                if link_tops.is_empty() {
                    return false;
                }
                is_sphere_complex(&link_tops, d - 1)
            }),
            _ => true,
        }
    }
}

/// Does the given list of top simplices triangulate a sphere of the given
/// dimension? Used for link verification; duplicated tops are rejected.
fn is_sphere_complex(tops: &[Vec<String>], dim: usize) -> bool {
    let Ok(c) = SimplicialComplex::build(tops) else {
        return false;
    };
    if c.dimension() != dim || c.simplex_count(dim) != tops.len() {
        // duplicate or collapsed tops
        return false;
    }
    {
        // no two tops on the same support
        let mut seen = BTreeSet::new();
        for t in c.simplices(dim) {
            if !seen.insert(t.clone()) {
                return false;
            }
        }
    }
    if !c.is_connected() || !c.is_closed() {
        return false;
    }
    match dim {
        0 => c.vertex_count() == 2,
        1 => c.euler_characteristic() == 0 && c.vertex_count() >= 3,
        2 => c.euler_characteristic() == 2 && c.links_ok() == Some(true),
        _ => false,
    }
}

fn build_boundaries(simplices: &[Vec<Vec<u32>>], dim: usize) -> Vec<IMat> {
    let mut out = Vec::with_capacity(dim + 1);
    out.push(IMat::zeros(0, simplices[0].len()));
    for k in 1..=dim {
        let rows = simplices[k - 1].len();
        let cols = simplices[k].len();
        let mut index = HashMap::with_capacity(rows);
        for (i, s) in simplices[k - 1].iter().enumerate() {
            index.entry(s.clone()).or_insert(i);
        }
        let mut m = IMat::zeros(rows, cols);
        for (j, s) in simplices[k].iter().enumerate() {
            for (pos, f) in subsets_enumerated(s) {
                let i = index[&f];
                m[(i, j)] += if pos % 2 == 0 { 1 } else { -1 };
            }
        }
        out.push(m);
    }
    out
}

/// All sorted subsets of the given size from a sorted tuple.
pub(crate) fn subsets(tuple: &[u32], size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(tuple: &[u32], size: usize, start: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..tuple.len() {
            current.push(tuple[i]);
            rec(tuple, size, i + 1, current, out);
            current.pop();
        }
    }
    rec(tuple, size, 0, &mut current, &mut out);
    out
}

/// Codimension-one faces with the index of the removed position.
fn subsets_enumerated(tuple: &[u32]) -> Vec<(usize, Vec<u32>)> {
    (0..tuple.len())
        .map(|pos| {
            let mut f = Vec::with_capacity(tuple.len() - 1);
            f.extend_from_slice(&tuple[..pos]);
            f.extend_from_slice(&tuple[pos + 1..]);
            (pos, f)
        })
        .collect()
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Exact check that consecutive boundary maps compose to zero.
pub fn boundary_squares_to_zero(c: &SimplicialComplex) -> bool {
    for k in 2..=c.dimension() {
        let a = c.boundary_matrix(k - 1).to_z();
        let b = c.boundary_matrix(k).to_z();
        if !a.matmul(&b).is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra_boundary() -> SimplicialComplex {
        SimplicialComplex::build(&[
            vec!["0", "1", "2"],
            vec!["0", "1", "3"],
            vec!["0", "2", "3"],
            vec!["1", "2", "3"],
        ])
        .unwrap()
    }

    #[test]
    fn boundary_of_tetrahedron_is_a_sphere() {
        let c = tetra_boundary();
        assert_eq!(c.dimension(), 2);
        assert!(c.is_closed());
        assert!(c.is_orientable());
        assert!(c.is_manifold());
        assert_eq!(c.euler_characteristic(), 2);
        assert!(boundary_squares_to_zero(&c));
    }

    #[test]
    fn doubled_triangle_is_closed_but_not_a_manifold() {
        let c = SimplicialComplex::build(&[vec!["a", "b", "c"], vec!["a", "b", "c"]]).unwrap();
        assert_eq!(c.simplex_count(2), 2);
        assert!(c.is_closed(), "each edge lies in exactly two top cells");
        assert!(c.is_pseudomanifold());
        assert_eq!(c.links_ok(), Some(false), "vertex links are doubled edges");
        assert!(!c.is_manifold());
        assert_eq!(c.euler_characteristic(), 2);
        assert!(c.is_orientable());
    }

    #[test]
    fn triple_face_is_rejected() {
        let err = SimplicialComplex::build(&[
            vec!["a", "b", "c"],
            vec!["a", "b", "d"],
            vec!["a", "b", "e"],
        ])
        .unwrap_err();
        assert!(matches!(err, Error::NonPseudomanifold(_)));
    }

    #[test]
    fn empty_and_degenerate_inputs_error() {
        assert!(matches!(
            SimplicialComplex::build::<&str>(&[]),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            SimplicialComplex::build(&[vec!["a", "a", "b"]]),
            Err(Error::DegenerateSimplex(_))
        ));
        assert!(matches!(
            SimplicialComplex::build(&[vec!["a", "b"], vec!["a", "b", "c"]]),
            Err(Error::MixedDimension(..))
        ));
    }

    #[test]
    fn orientation_seeds_smallest_top_with_plus_one() {
        let c = tetra_boundary();
        let o = c.orientation().unwrap();
        assert_eq!(o[0], 1);
        // oriented sum of tops has zero boundary
        let bmat = c.boundary_matrix(2);
        let chain: Vec<crate::num::Q> =
            o.iter().map(|&s| crate::num::q_from_i64(s as i64)).collect();
        let bd = bmat.matvec_q(&chain);
        assert!(bd.iter().all(|x| num_traits::Zero::is_zero(x)));
    }

    #[test]
    fn open_disk_is_not_closed() {
        let c = SimplicialComplex::build(&[vec!["a", "b", "c"]]).unwrap();
        assert!(!c.is_closed());
        assert!(!c.is_manifold());
    }
}
