//! Newton polyhedra `conv({0} ∪ support)` in dimension at most 4, with exact
//! facets, the face lattice and normalized volume.

mod linalg;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::laurent::LaurentPoly;
use linalg::{affine_dim, cross, det, gcd};

pub const MAX_DIMENSION: usize = 4;

pub type LatticePoint = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("dimension {0} is not supported (at most {MAX_DIMENSION})")]
    DimensionUnsupported(usize),
    #[error("support is empty")]
    EmptySupport,
    #[error("point {index} has {found} coordinates, expected {expected}")]
    InconsistentDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("polytope has dimension {dim} in ambient dimension {ambient}")]
    DegeneratePolytope { dim: usize, ambient: usize },
    #[error("face does not belong to this polytope")]
    FaceMismatch,
}

/// The half-space `<normal, x> >= offset`; `normal` is primitive and points
/// into the polytope.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn value(&self, x: &[i64]) -> i64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn is_tight(&self, x: &[i64]) -> bool {
        self.value(x) == self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    generators: Vec<LatticePoint>,
    vertices: Vec<LatticePoint>,
    facets: Vec<Facet>,
}

/// A proper face, cut out by the facets listed in `facets`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Face {
    pub dimension: usize,
    /// Vertices of the polytope lying on the face, sorted.
    pub vertices: Vec<LatticePoint>,
    /// Generators of the polytope lying on the face, sorted.
    pub generators: Vec<LatticePoint>,
    /// Indices into [`Polytope::facets`] of every facet containing the face.
    pub facets: Vec<usize>,
    pub contains_origin: bool,
}

impl Face {
    /// Whether `x` lies on the affine hull of the face.
    ///
    /// For points of the polytope this is the same as lying on the face.
    pub fn contains(&self, polytope: &Polytope, x: &[i64]) -> bool {
        self.facets.iter().all(|&i| polytope.facets[i].is_tight(x))
    }
}

/// Builds `conv(support ∪ {0})`.
pub fn newton_polyhedron(support: &[LatticePoint]) -> Result<Polytope, PolytopeError> {
    let n = support.first().ok_or(PolytopeError::EmptySupport)?.len();
    if n > MAX_DIMENSION {
        return Err(PolytopeError::DimensionUnsupported(n));
    }
    if n == 0 {
        return Err(PolytopeError::DegeneratePolytope { dim: 0, ambient: 0 });
    }
    for (index, w) in support.iter().enumerate() {
        if w.len() != n {
            return Err(PolytopeError::InconsistentDimension {
                index,
                expected: n,
                found: w.len(),
            });
        }
    }
    let mut set: BTreeSet<LatticePoint> = support.iter().cloned().collect();
    set.insert(vec![0; n]);
    let generators: Vec<LatticePoint> = set.into_iter().collect();
    let refs: Vec<&LatticePoint> = generators.iter().collect();
    let dim = affine_dim(&refs) as usize;
    if dim < n {
        return Err(PolytopeError::DegeneratePolytope { dim, ambient: n });
    }

    let mut facets: BTreeSet<Facet> = BTreeSet::new();
    for subset in combinations(generators.len(), n) {
        let base = &generators[subset[0]];
        let rows: Vec<Vec<i128>> = subset[1..]
            .iter()
            .map(|&i| {
                generators[i]
                    .iter()
                    .zip(base)
                    .map(|(a, b)| (a - b) as i128)
                    .collect()
            })
            .collect();
        let normal = cross(&rows, n);
        let g = normal.iter().fold(0, |acc, &v| gcd(acc, v));
        if g == 0 {
            continue;
        }
        let normal: Vec<i64> = normal.iter().map(|&v| (v / g) as i64).collect();
        let facet = Facet {
            offset: normal.iter().zip(base).map(|(a, b)| a * b).sum(),
            normal,
        };
        let values: Vec<i64> = generators.iter().map(|x| facet.value(x)).collect();
        if values.iter().all(|&v| v >= facet.offset) {
            facets.insert(facet);
        } else if values.iter().all(|&v| v <= facet.offset) {
            facets.insert(Facet {
                normal: facet.normal.iter().map(|v| -v).collect(),
                offset: -facet.offset,
            });
        }
    }
    let facets: Vec<Facet> = facets.into_iter().collect();
    let vertices = generators
        .iter()
        .filter(|x| {
            let tight: Vec<Vec<i128>> = facets
                .iter()
                .filter(|f| f.is_tight(x))
                .map(|f| f.normal.iter().map(|&v| v as i128).collect())
                .collect();
            linalg::rank(&tight) == n
        })
        .cloned()
        .collect();
    Ok(Polytope {
        dim: n,
        generators,
        vertices,
        facets,
    })
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `{0}` together with the support, sorted and without repetitions.
    pub fn generators(&self) -> &[LatticePoint] {
        &self.generators
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|f| f.value(x) >= f.offset)
    }

    /// Strict interior membership.
    pub fn contains_in_interior(&self, x: &[i64]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|f| f.value(x) > f.offset)
    }

    /// All proper nonempty faces, ordered by dimension and then vertices.
    pub fn faces(&self) -> Vec<Face> {
        let tight_sets: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|f| {
                (0..self.generators.len())
                    .filter(|&i| f.is_tight(&self.generators[i]))
                    .collect()
            })
            .collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = tight_sets.iter().cloned().collect();
        let mut frontier: Vec<BTreeSet<usize>> = seen.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for b in &tight_sets {
                    let c: BTreeSet<usize> = a.intersection(b).copied().collect();
                    if !c.is_empty() && seen.insert(c.clone()) {
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
        let origin = vec![0; self.dim];
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|set| {
                let generators: Vec<LatticePoint> =
                    set.iter().map(|&i| self.generators[i].clone()).collect();
                let refs: Vec<&LatticePoint> = generators.iter().collect();
                let facets: Vec<usize> = (0..self.facets.len())
                    .filter(|&f| set.is_subset(&tight_sets[f]))
                    .collect();
                Face {
                    dimension: affine_dim(&refs) as usize,
                    contains_origin: facets.iter().all(|&f| self.facets[f].is_tight(&origin)),
                    vertices: generators
                        .iter()
                        .filter(|g| self.vertices.contains(g))
                        .cloned()
                        .collect(),
                    generators,
                    facets,
                }
            })
            .collect();
        faces.sort();
        faces
    }

    /// Proper faces `σ` with `0 ∉ σ`.
    pub fn faces_not_containing_origin(&self) -> Vec<Face> {
        self.faces()
            .into_iter()
            .filter(|f| !f.contains_origin)
            .collect()
    }

    pub fn is_convenient(&self) -> bool {
        self.facets.iter().all(|f| f.offset < 0)
    }

    /// `n! vol(Δ)`: cones from the origin over pulling triangulations of the
    /// facets, each simplex contributing `|det|`.
    pub fn normalized_volume(&self) -> u64 {
        self.volume_with_order(ApexOrder::Smallest)
    }

    pub(crate) fn volume_with_order(&self, order: ApexOrder) -> u64 {
        let faces = self.faces();
        let origin = vec![0; self.dim];
        let mut total: i128 = 0;
        for (i, facet) in self.facets.iter().enumerate() {
            if facet.is_tight(&origin) {
                continue;
            }
            let face = faces
                .iter()
                .find(|f| f.dimension + 1 == self.dim && f.facets == [i])
                .expect("every facet is a face");
            for simplex in triangulate(face, &faces, order) {
                let m: Vec<Vec<i128>> = simplex
                    .iter()
                    .map(|v| v.iter().map(|&c| c as i128).collect())
                    .collect();
                total += det(&m).abs();
            }
        }
        total as u64
    }

    pub fn report(&self) -> PolytopeReport {
        let nonorigin = self.faces_not_containing_origin();
        PolytopeReport {
            dimension: self.dim,
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
            convenient: self.is_convenient(),
            normalized_volume: self.normalized_volume().to_string(),
            face_count: self.faces().len().to_string(),
            faces_not_containing_origin: nonorigin.len().to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ApexOrder {
    Smallest,
    #[cfg_attr(not(test), allow(dead_code))]
    Largest,
}

/// Pulling triangulation of a face into simplices given by their vertices.
fn triangulate(face: &Face, faces: &[Face], order: ApexOrder) -> Vec<Vec<LatticePoint>> {
    if face.dimension == 0 {
        return vec![vec![face.vertices[0].clone()]];
    }
    let apex = match order {
        ApexOrder::Smallest => face.vertices.iter().min(),
        ApexOrder::Largest => face.vertices.iter().max(),
    }
    .expect("faces have vertices")
    .clone();
    let mut out = Vec::new();
    for sub in faces.iter().filter(|g| {
        g.dimension + 1 == face.dimension
            && !g.vertices.contains(&apex)
            && g.generators.iter().all(|x| face.generators.contains(x))
    }) {
        for mut simplex in triangulate(sub, faces, order) {
            simplex.push(apex.clone());
            out.push(simplex);
        }
    }
    out
}

/// Keeps the terms of `f` whose exponents lie on `σ`.
pub fn face_restrict<C: crate::laurent::Coefficient>(
    f: &LaurentPoly<C>,
    polytope: &Polytope,
    face: &Face,
) -> Result<LaurentPoly<C>, PolytopeError> {
    if f.nvars() != polytope.dim || !polytope.faces().contains(face) {
        return Err(PolytopeError::FaceMismatch);
    }
    Ok(f.filter_terms(|w| face.contains(polytope, w)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolytopeReport {
    pub dimension: usize,
    pub vertices: Vec<LatticePoint>,
    pub facets: Vec<Facet>,
    pub convenient: bool,
    pub normalized_volume: String,
    pub face_count: String,
    pub faces_not_containing_origin: String,
}
