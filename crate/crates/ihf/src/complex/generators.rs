//! Generators for the built-in manifold corpus and the staircase simplicial
//! product.

use std::collections::HashMap;
use std::str::FromStr;

use super::SimplicialComplex;
use crate::error::{Error, Result};

/// Built-in closed-manifold generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// Boundary of the 3-simplex.
    Sphere2,
    /// The 7-vertex torus with 14 triangles.
    Torus2,
    /// Projective plane: hexagonal disk with antipodal boundary gluing,
    /// barycentrically subdivided once.
    Rp2,
    /// Klein bottle on a 3x3 grid with an orientation-reversing wrap.
    Klein,
    /// 3-torus as the staircase product of three 3-vertex circles.
    Torus3,
    /// Lens space L(p, q): twisted gluing of a coned bipyramid over a
    /// 2p-gon, barycentrically subdivided once.
    Lens(u32, i64),
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "sphere2" => return Ok(Generator::Sphere2),
            "torus2" => return Ok(Generator::Torus2),
            "rp2" => return Ok(Generator::Rp2),
            "klein" => return Ok(Generator::Klein),
            "torus3" => return Ok(Generator::Torus3),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("lens(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() == 2 {
                let p = parts[0].parse().map_err(|_| bad_gen(s))?;
                let q = parts[1].parse().map_err(|_| bad_gen(s))?;
                return Ok(Generator::Lens(p, q));
            }
        }
        Err(bad_gen(s))
    }
}

fn bad_gen(s: &str) -> Error {
    Error::BadParameters(format!(
        "unknown generator {s:?}; expected sphere2, torus2, rp2, klein, torus3, or lens(p,q)"
    ))
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generator::Sphere2 => write!(f, "sphere2"),
            Generator::Torus2 => write!(f, "torus2"),
            Generator::Rp2 => write!(f, "rp2"),
            Generator::Klein => write!(f, "klein"),
            Generator::Torus3 => write!(f, "torus3"),
            Generator::Lens(p, q) => write!(f, "lens({p},{q})"),
        }
    }
}

pub fn generate(which: &Generator) -> Result<SimplicialComplex> {
    match which {
        Generator::Sphere2 => sphere2(),
        Generator::Torus2 => torus2(),
        Generator::Rp2 => rp2(),
        Generator::Klein => klein(),
        Generator::Torus3 => Ok(torus3().0),
        Generator::Lens(p, q) => lens(*p, *q),
    }
}

fn sphere2() -> Result<SimplicialComplex> {
    let verts = ["0", "1", "2", "3"];
    let mut tops = Vec::new();
    for i in 0..4 {
        let tri: Vec<&str> = (0..4).filter(|&j| j != i).map(|j| verts[j]).collect();
        tops.push(tri);
    }
    SimplicialComplex::build(&tops)
}

/// 7-vertex triangulation of the torus: triangles {i, i+1, i+3} and
/// {i, i+2, i+3} modulo 7.
fn torus2() -> Result<SimplicialComplex> {
    let mut tops = Vec::new();
    for i in 0..7u32 {
        tops.push(vec![i.to_string(), ((i + 1) % 7).to_string(), ((i + 3) % 7).to_string()]);
        tops.push(vec![i.to_string(), ((i + 2) % 7).to_string(), ((i + 3) % 7).to_string()]);
    }
    SimplicialComplex::build(&tops)
}

fn klein() -> Result<SimplicialComplex> {
    // 3x3 grid; horizontal wrap reverses the vertical direction
    let name = |i: usize, j: usize| -> String {
        let (i, j) = if i == 3 { (0, (3 - j % 3) % 3) } else { (i, j % 3) };
        format!("v{i}{j}")
    };
    let mut tops = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            tops.push(vec![name(i, j), name(i + 1, j), name(i + 1, j + 1)]);
            tops.push(vec![name(i, j), name(i, j + 1), name(i + 1, j + 1)]);
        }
    }
    SimplicialComplex::build(&tops)
}

/// An m-gon circle with vertices "0".."m-1".
pub fn circle(m: u32) -> Result<SimplicialComplex> {
    if m < 3 {
        return Err(Error::BadParameters("circle needs at least 3 vertices".into()));
    }
    let tops: Vec<Vec<String>> =
        (0..m).map(|i| vec![i.to_string(), ((i + 1) % m).to_string()]).collect();
    SimplicialComplex::build(&tops)
}

/// Projections of a staircase product back onto its factors, as vertex maps.
#[derive(Debug, Clone)]
pub struct ProductMaps {
    pub to_left: Vec<usize>,
    pub to_right: Vec<usize>,
}

/// Staircase (ordered simplicial) product. Top cells are the monotone
/// lattice paths through the vertex grid of each pair of factor tops, so the
/// result is a genuine triangulation of the product space and both
/// projections are simplicial vertex maps.
pub fn staircase_product(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
) -> Result<(SimplicialComplex, ProductMaps)> {
    let da = a.dimension();
    let db = b.dimension();
    let mut tops: Vec<Vec<String>> = Vec::new();
    for ta in a.simplices(da) {
        for tb in b.simplices(db) {
            for path in monotone_paths(da, db) {
                let tuple: Vec<String> = path
                    .iter()
                    .map(|&(i, j)| {
                        format!(
                            "{}|{}",
                            a.vertex_name(ta[i] as usize),
                            b.vertex_name(tb[j] as usize)
                        )
                    })
                    .collect();
                tops.push(tuple);
            }
        }
    }
    let product = SimplicialComplex::build(&tops)?;
    if product.vertex_count() != a.vertex_count() * b.vertex_count() {
        return Err(Error::VerificationFailed("product vertex names collided".into()));
    }
    let mut to_left = vec![0usize; product.vertex_count()];
    let mut to_right = vec![0usize; product.vertex_count()];
    for va in 0..a.vertex_count() {
        for vb in 0..b.vertex_count() {
            let name = format!("{}|{}", a.vertex_name(va), b.vertex_name(vb));
            let vid = product
                .vertex_id(&name)
                .ok_or_else(|| Error::VerificationFailed("product vertex lost".into()))?;
            to_left[vid as usize] = va;
            to_right[vid as usize] = vb;
        }
    }
    Ok((product, ProductMaps { to_left, to_right }))
}

/// Monotone lattice paths from (0,0) to (da,db), each a list of grid points.
fn monotone_paths(da: usize, db: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut current = vec![(0usize, 0usize)];
    fn rec(
        da: usize,
        db: usize,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let &(i, j) = current.last().expect("path nonempty");
        if i == da && j == db {
            out.push(current.clone());
            return;
        }
        if i < da {
            current.push((i + 1, j));
            rec(da, db, current, out);
            current.pop();
        }
        if j < db {
            current.push((i, j + 1));
            rec(da, db, current, out);
            current.pop();
        }
    }
    rec(da, db, &mut current, &mut out);
    out
}

/// The 3-torus together with the simplicial projection onto its first two
/// circle factors (a 9-vertex product torus).
pub(crate) fn torus3() -> (SimplicialComplex, SimplicialComplex, Vec<usize>) {
    let c3 = circle(3).expect("circle");
    let (t2, _) = staircase_product(&c3, &c3).expect("product torus");
    let (t3, maps) = staircase_product(&t2, &c3).expect("product 3-torus");
    (t3, t2, maps.to_left)
}

/// Public access to the product 3-torus instance: (total space, base product
/// torus, projection vertex map).
pub fn torus3_with_projection() -> (SimplicialComplex, SimplicialComplex, Vec<usize>) {
    torus3()
}

fn rp2() -> Result<SimplicialComplex> {
    // hexagonal disk, boundary glued antipodally
    let m = 6u32;
    let mut tops: Vec<Vec<String>> = Vec::new();
    for i in 0..m {
        tops.push(vec!["c".into(), format!("b{i}"), format!("b{}", (i + 1) % m)]);
    }
    let domain = SimplicialComplex::build(&tops)?;
    let pairings: Vec<(Vec<String>, Vec<String>)> = (0..3u32)
        .map(|i| {
            (
                vec![format!("b{i}"), format!("b{}", i + 1)],
                vec![format!("b{}", i + 3), format!("b{}", (i + 4) % m)],
            )
        })
        .collect();
    quotient_barycentric(&domain, &pairings)
}

fn lens(p: u32, q: i64) -> Result<SimplicialComplex> {
    if p < 1 {
        return Err(Error::BadParameters("lens requires p >= 1".into()));
    }
    if num_integer::gcd(p as i64, q.rem_euclid(p as i64)) != 1 {
        return Err(Error::BadParameters("lens requires gcd(p, q) = 1".into()));
    }
    // fundamental domain: bipyramid over a (k*p)-gon with a disk center and
    // cone points N, S; no polar axis edge, so the glued quotient is free of
    // loops and one barycentric subdivision restores simpliciality
    let k: u32 = if p == 1 { 3 } else { 2 };
    let m = k * p;
    let t = (k as i64 * q).rem_euclid(m as i64) as u32;
    let e = |i: u32| format!("e{}", i % m);
    let mut tops: Vec<Vec<String>> = Vec::new();
    for i in 0..m {
        tops.push(vec!["N".into(), "c".into(), e(i), e(i + 1)]);
        tops.push(vec!["S".into(), "c".into(), e(i), e(i + 1)]);
    }
    let domain = SimplicialComplex::build(&tops)?;
    let pairings: Vec<(Vec<String>, Vec<String>)> = (0..m)
        .map(|i| {
            (
                vec!["N".to_string(), e(i), e(i + 1)],
                vec!["S".to_string(), e(i + t), e(i + t + 1)],
            )
        })
        .collect();
    quotient_barycentric(&domain, &pairings)
}

/// Glues boundary facets of a simplicial fundamental domain according to the
/// given vertex correspondences and returns the barycentric subdivision of
/// the quotient as a simplicial complex.
///
/// Cells of the subdivision are flags of quotient cell classes. The caller
/// must supply a gluing whose quotient has no cell with two identified
/// faces (no loops); this is checked by rebuilding and verifying that no two
/// subdivision tops share a vertex set.
fn quotient_barycentric(
    domain: &SimplicialComplex,
    pairings: &[(Vec<String>, Vec<String>)],
) -> Result<SimplicialComplex> {
    let dim = domain.dimension();
    // flattened cell ids
    let offset: Vec<usize> = {
        let mut acc = 0;
        let mut out = Vec::with_capacity(dim + 1);
        for kk in 0..=dim {
            out.push(acc);
            acc += domain.simplex_count(kk);
        }
        out
    };
    let total: usize = offset[dim] + domain.simplex_count(dim);
    let mut dsu = Dsu::new(total);
    let cell_id = |k: usize, idx: usize| offset[k] + idx;

    for (from, to) in pairings {
        if from.len() != to.len() {
            return Err(Error::BadParameters("pairing tuples differ in length".into()));
        }
        let from_ids: Option<Vec<u32>> = from.iter().map(|n| domain.vertex_id(n)).collect();
        let to_ids: Option<Vec<u32>> = to.iter().map(|n| domain.vertex_id(n)).collect();
        let (from_ids, to_ids) = match (from_ids, to_ids) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::BadParameters("pairing names unknown vertices".into())),
        };
        // every subset of positions induces a sub-face identification
        let len = from_ids.len();
        for mask in 1u32..(1 << len) {
            let mut f: Vec<u32> = Vec::new();
            let mut g: Vec<u32> = Vec::new();
            for (pos, (&a, &b)) in from_ids.iter().zip(&to_ids).enumerate() {
                if mask & (1 << pos) != 0 {
                    f.push(a);
                    g.push(b);
                }
            }
            f.sort_unstable();
            g.sort_unstable();
            let kk = f.len() - 1;
            let fi = domain
                .index_of(kk, &f)
                .ok_or_else(|| Error::BadParameters("pairing names a missing face".into()))?;
            let gi = domain
                .index_of(kk, &g)
                .ok_or_else(|| Error::BadParameters("pairing names a missing face".into()))?;
            dsu.union(cell_id(kk, fi), cell_id(kk, gi));
        }
    }

    // barycenter names per class, ranked within dimension for stable output
    let mut class_name: HashMap<usize, String> = HashMap::new();
    for kk in 0..=dim {
        let mut rank = 0usize;
        for idx in 0..domain.simplex_count(kk) {
            let root = dsu.find(cell_id(kk, idx));
            class_name.entry(root).or_insert_with(|| {
                let n = format!("k{kk}x{rank:03}");
                rank += 1;
                n
            });
        }
    }

    // subdivision tops: one per (top cell, vertex ordering) flag
    let mut tops: Vec<Vec<String>> = Vec::new();
    for ti in 0..domain.simplex_count(dim) {
        let tup = domain.simplex(dim, ti).to_vec();
        for perm in permutations(tup.len()) {
            let mut prefix: Vec<u32> = Vec::with_capacity(tup.len());
            let mut names: Vec<String> = Vec::with_capacity(tup.len());
            for &pos in &perm {
                prefix.push(tup[pos]);
                let mut sorted = prefix.clone();
                sorted.sort_unstable();
                let kk = sorted.len() - 1;
                let idx = domain.index_of(kk, &sorted).expect("face of a top");
                names.push(class_name[&dsu.find(cell_id(kk, idx))].clone());
            }
            tops.push(names);
        }
    }

    let result = SimplicialComplex::build(&tops)?;
    // the subdivision of a loop-free gluing has pairwise distinct tops
    let expected = tops.len();
    if result.simplex_count(dim) != expected {
        return Err(Error::VerificationFailed("quotient subdivision lost cells".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for t in result.simplices(dim) {
        if !seen.insert(t.clone()) {
            return Err(Error::VerificationFailed(
                "quotient subdivision produced duplicate cells".into(),
            ));
        }
    }
    Ok(result)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
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
