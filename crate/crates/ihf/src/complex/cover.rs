//! Orientation double cover.
//!
//! Sheets are pairs (top simplex, local orientation); corners of neighbouring
//! sheets are identified across shared faces whenever the orientations are
//! compatible. Over an orientable complex this yields two disjoint copies;
//! over a non-orientable one, the connected orientable double cover.

use std::collections::HashMap;

use super::SimplicialComplex;
use crate::error::{Error, Result};

/// Vertex-level covering data: cover vertex index -> base vertex index.
#[derive(Debug, Clone)]
pub struct CoveringMap {
    pub vertex_to_base: Vec<usize>,
}

impl CoveringMap {
    /// The simplicial covering map as a vertex map, usable for pullbacks.
    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_to_base
    }
}

pub fn orientation_double_cover(
    c: &SimplicialComplex,
) -> Result<(SimplicialComplex, CoveringMap)> {
    if !c.is_connected() {
        return Err(Error::BadParameters("double cover requires a connected complex".into()));
    }
    let dim = c.dimension();
    let n_tops = c.simplex_count(dim);
    let corners = dim + 1;
    // element id for (top, corner position, sheet)
    let id = |t: usize, pos: usize, sheet: usize| (t * corners + pos) * 2 + sheet;
    let mut dsu = Dsu::new(n_tops * corners * 2);

    let inc = c.face_incidences();
    for tops in &inc {
        if tops.len() != 2 {
            continue;
        }
        let (t1, s1) = tops[0];
        let (t2, s2) = tops[1];
        // sheet o over t1 glues to sheet o * rel over t2
        let rel_flip = s1 * s2 > 0; // rel = -s1*s2; flip sheet when rel = -1
        for (p1, &v) in c.simplex(dim, t1).iter().enumerate() {
            let Some(p2) = c.simplex(dim, t2).iter().position(|&u| u == v) else {
                continue;
            };
            for sheet in 0..2 {
                let other = if rel_flip { 1 - sheet } else { sheet };
                dsu.union(id(t1, p1, sheet), id(t2, p2, other));
            }
        }
    }

    // canonical class per (top corner, sheet); one cover vertex per class
    let mut class_names: HashMap<usize, String> = HashMap::new();
    let mut per_base_rank: HashMap<usize, usize> = HashMap::new();
    let mut vertex_to_base: Vec<usize> = Vec::new();
    let mut class_order: Vec<usize> = Vec::new();
    for t in 0..n_tops {
        for (pos, &v) in c.simplex(dim, t).iter().enumerate() {
            for sheet in 0..2 {
                let root = dsu.find(id(t, pos, sheet));
                if class_names.contains_key(&root) {
                    continue;
                }
                let rank = per_base_rank.entry(v as usize).or_insert(0);
                class_names.insert(root, format!("{}^{}", c.vertex_name(v as usize), rank));
                *rank += 1;
                vertex_to_base.push(v as usize);
                class_order.push(root);
            }
        }
    }
    if per_base_rank.values().any(|&r| r != 2) {
        return Err(Error::BadParameters("orientation cover is not two-to-one".into()));
    }

    let mut cover_tops: Vec<Vec<String>> = Vec::with_capacity(2 * n_tops);
    for t in 0..n_tops {
        for sheet in 0..2 {
            let tuple: Vec<String> = (0..corners)
                .map(|pos| class_names[&dsu.find(id(t, pos, sheet))].clone())
                .collect();
            cover_tops.push(tuple);
        }
    }
    let cover = SimplicialComplex::build(&cover_tops)?;

    // the build re-sorts vertices by name; remap the base assignment
    let mut map = vec![0usize; cover.vertex_count()];
    for (root, base) in class_order.iter().zip(&vertex_to_base) {
        let name = &class_names[root];
        let vid = cover
            .vertex_id(name)
            .ok_or_else(|| Error::VerificationFailed("cover vertex lost".into()))?;
        map[vid as usize] = *base;
    }
    Ok((cover, CoveringMap { vertex_to_base: map }))
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
