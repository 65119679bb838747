use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;

use super::cell::{cell_of_witness, LinearityCell};
use super::polytope::{cyclic_order, lex_positive, rank};
use super::PlError;
use crate::lattice::LatticeVector;
use crate::rational::{int, int_vec, Rational};
use crate::trop_av::{TropPoint, TropicalPolarizationData};
use crate::trop_theta::TropicalThetaFunction;

pub type Point = Vec<Rational>;

/// A face of the corner locus modulo the period lattice, stored by the
/// canonical translate of its vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusFace {
    /// Sorted vertices of the canonical translate; polygons in `ℝ³` are
    /// kept in cyclic order instead.
    pub vertices: Vec<Point>,
    /// Terms tying at the relative-interior point (vertex centroid).
    pub witnesses: Vec<LatticeVector>,
    /// Boundary as signed indices into the next-lower face list.
    pub boundary: Vec<(usize, i64)>,
}

/// Cells, faces and homology of a tropical theta function's corner locus
/// on `Σ = N_ℝ/M′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    pub g: usize,
    /// Rows are the embedded period vectors `embed(e′_i)`.
    pub period_basis: Vec<Point>,
    /// One full-dimensional cell per class modulo the periods.
    pub cells: Vec<LinearityCell>,
    /// `faces[k]` holds the `k`-dimensional corner-locus faces, `k < g`.
    pub faces: Vec<Vec<LocusFace>>,
    /// Betti numbers of the corner locus over ℚ.
    pub betti: Vec<usize>,
    /// Euler characteristic of the whole quotient complex (cells included).
    pub euler_characteristic: i64,
}

impl CellComplex {
    pub fn empty(g: usize) -> Self {
        CellComplex {
            g,
            period_basis: Vec::new(),
            cells: Vec::new(),
            faces: vec![Vec::new(); g],
            betti: vec![0; g],
            euler_characteristic: 0,
        }
    }

    pub fn corner_points(&self) -> &[LocusFace] {
        self.faces.first().map_or(&[], Vec::as_slice)
    }

    pub fn component_count(&self) -> usize {
        self.betti.first().copied().unwrap_or(0)
    }
}

/// Canonical translate of a point set modulo the periods: over the
/// translates putting one of its points into the fundamental domain, the
/// lexicographically smallest sorted list.
pub(crate) fn canonical(points: &[Point], base: &TropicalPolarizationData) -> (Vec<Point>, Point) {
    let mut best: Option<(Vec<Point>, Point)> = None;
    for p in points {
        let sigma = base.reduce_mod_lattice(&TropPoint::new(p.clone())).expect("dimension checked");
        let shift = base.embed_mprime(&sigma.shift).coords;
        let mut moved: Vec<Point> = points.iter().map(|q| q.iter().zip(&shift).map(|(a, b)| a - b).collect()).collect();
        moved.sort();
        if best.as_ref().is_none_or(|(b, _)| moved < *b) {
            best = Some((moved, shift));
        }
    }
    best.expect("nonempty face")
}

fn centroid(points: &[Point]) -> Point {
    let k = int(points.len() as i64);
    (0..points[0].len()).map(|i| points.iter().map(|p| p[i].clone()).sum::<Rational>() / &k).collect()
}

fn sub(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A point strictly inside some cell, nudged off the corner locus.
fn generic_seed(theta: &TropicalThetaFunction) -> Result<LatticeVector, PlError> {
    let g = theta.g();
    let primes = [7i64, 11, 13, 17, 19, 23];
    for k in 1..50i64 {
        let v: Point = (0..g).map(|i| Rational::new(((i as i64 + 1) * k).into(), primes[i % primes.len()].into())).collect();
        let at = theta.evaluate(&TropPoint::new(v))?;
        if at.witnesses.len() == 1 {
            return Ok(at.witnesses[0].clone());
        }
    }
    Err(PlError::NoGenericPoint)
}

/// The term winning just across a facet: among the terms tying at the facet
/// centroid, the least along the outward normal, ties broken along `e_1`,
/// `e_2`, ... (a lexicographic perturbation of the direction).
fn neighbour(theta: &TropicalThetaFunction, cell: &LinearityCell, facet: usize) -> Result<LatticeVector, PlError> {
    let f = &cell.facets[facet];
    let pts: Vec<Point> = f.vertices.iter().map(|&i| cell.vertices[i].clone()).collect();
    let at = theta.evaluate(&TropPoint::new(centroid(&pts)))?;
    let key = |u: &LatticeVector| -> Vec<i64> {
        let mut k = vec![-f.halfspace.normal.iter().zip(u).map(|(a, b)| a * b).sum::<i64>()];
        k.extend(u.iter().copied());
        k
    };
    Ok(at.witnesses.into_iter().filter(|u| *u != cell.witness).min_by_key(key).expect("facet has a competitor"))
}

#[derive(Default)]
struct FaceTable {
    index: BTreeMap<Vec<Point>, usize>,
    faces: Vec<LocusFace>,
}

impl FaceTable {
    fn insert(&mut self, key: Vec<Point>, build: impl FnOnce() -> Result<LocusFace, PlError>) -> Result<usize, PlError> {
        if let Some(&i) = self.index.get(&key) {
            return Ok(i);
        }
        let i = self.faces.len();
        self.faces.push(build()?);
        self.index.insert(key, i);
        Ok(i)
    }
}

/// The corner locus of an ample theta function modulo its periods.
pub fn corner_locus(theta: &TropicalThetaFunction) -> Result<CellComplex, PlError> {
    let g = theta.g();
    if g > 3 {
        return Err(PlError::RankTooLarge { g });
    }
    let cosets = theta.cosets().ok_or(PlError::NotAmple)?;
    let base = theta.base().clone();

    // cells of u and u + Λn are translates, so classes are coset classes
    let mut cells: Vec<LinearityCell> = Vec::new();
    let mut seen: BTreeMap<LatticeVector, ()> = BTreeMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(generic_seed(theta)?);
    while let Some(u) = queue.pop_front() {
        let class = cosets.reduce(&u).0;
        if seen.insert(class, ()).is_some() {
            continue;
        }
        let cell = cell_of_witness(theta, &u)?;
        for k in 0..cell.facets.len() {
            let next = neighbour(theta, &cell, k)?;
            if !seen.contains_key(&cosets.reduce(&next).0) {
                queue.push_back(next);
            }
        }
        cells.push(cell);
    }
    cells.sort_by(|a, b| cosets.reduce(&a.witness).0.cmp(&cosets.reduce(&b.witness).0));

    let mut tables: Vec<FaceTable> = (0..g).map(|_| FaceTable::default()).collect();
    let witnesses_at = |pts: &[Point]| -> Result<Vec<LatticeVector>, PlError> {
        Ok(theta.evaluate(&TropPoint::new(centroid(pts)))?.witnesses)
    };
    let vertex_id = |tables: &mut Vec<FaceTable>, p: &Point| -> Result<usize, PlError> {
        let (key, _) = canonical(std::slice::from_ref(p), &base);
        tables[0].insert(key.clone(), || Ok(LocusFace { witnesses: witnesses_at(&key)?, vertices: key, boundary: vec![] }))
    };
    // an edge oriented from its smaller to its larger endpoint
    let edge_id = |tables: &mut Vec<FaceTable>, a: &Point, b: &Point| -> Result<(usize, i64), PlError> {
        let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
        let ends = [vertex_id(tables, lo)?, vertex_id(tables, hi)?];
        let (key, _) = canonical(&[lo.clone(), hi.clone()], &base);
        let id = tables[1].insert(key.clone(), || {
            Ok(LocusFace {
                witnesses: witnesses_at(&key)?,
                vertices: key,
                boundary: merge(&[(ends[1], 1), (ends[0], -1)]),
            })
        })?;
        Ok((id, sign))
    };

    for cell in &cells {
        match g {
            1 => {
                for v in &cell.vertices {
                    vertex_id(&mut tables, v)?;
                }
            }
            2 => {
                for f in &cell.facets {
                    let a = &cell.vertices[f.vertices[0]];
                    let b = &cell.vertices[f.vertices[f.vertices.len() - 1]];
                    edge_id(&mut tables, a, b)?;
                }
            }
            _ => {
                for f in &cell.facets {
                    let pts: Vec<Point> = f.vertices.iter().map(|&i| cell.vertices[i].clone()).collect();
                    let normal = lex_positive(&int_vec(&f.halfspace.normal));
                    let order = cyclic_order(&pts, &normal);
                    let ring: Vec<Point> = order.iter().map(|&i| pts[i].clone()).collect();
                    let mut bd = Vec::new();
                    for i in 0..ring.len() {
                        bd.push(edge_id(&mut tables, &ring[i], &ring[(i + 1) % ring.len()])?);
                    }
                    let (key, shift) = canonical(&ring, &base);
                    tables[2].insert(key.clone(), || {
                        Ok(LocusFace {
                            witnesses: witnesses_at(&key)?,
                            vertices: ring.iter().map(|p| sub(p, &shift)).collect(),
                            boundary: merge(&bd),
                        })
                    })?;
                }
            }
        }
    }

    let mut faces: Vec<Vec<LocusFace>> = tables.into_iter().map(|t| t.faces).collect();
    sort_faces(&mut faces);
    let counts: Vec<usize> = faces.iter().map(Vec::len).collect();
    let ranks: Vec<usize> = (1..g).map(|k| boundary_rank(&faces[k], counts[k - 1])).collect();
    let betti = (0..g)
        .map(|k| {
            let out = if k == 0 { 0 } else { ranks[k - 1] };
            let inc = if k + 1 < g { ranks[k] } else { 0 };
            counts[k] - out - inc
        })
        .collect();
    let mut euler: i64 = counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
    euler += if g % 2 == 0 { cells.len() as i64 } else { -(cells.len() as i64) };
    let period_basis = (0..g)
        .map(|i| {
            let mut e = vec![0i64; g];
            e[i] = 1;
            base.embed_mprime(&e).coords
        })
        .collect();
    Ok(CellComplex { g, period_basis, cells, faces, betti, euler_characteristic: euler })
}

/// Orders every level by its canonical vertex list, renumbering boundaries.
fn sort_faces(faces: &mut [Vec<LocusFace>]) {
    for k in 0..faces.len() {
        let mut order: Vec<usize> = (0..faces[k].len()).collect();
        order.sort_by(|&a, &b| faces[k][a].vertices.cmp(&faces[k][b].vertices));
        let mut new_index = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let level = std::mem::take(&mut faces[k]);
        let mut slots: Vec<Option<LocusFace>> = level.into_iter().map(Some).collect();
        faces[k] = order.iter().map(|&i| slots[i].take().expect("permutation")).collect();
        if let Some(up) = faces.get_mut(k + 1) {
            for f in up.iter_mut() {
                let renamed: Vec<(usize, i64)> = f.boundary.iter().map(|&(i, s)| (new_index[i], s)).collect();
                f.boundary = merge(&renamed);
            }
        }
    }
}

fn merge(terms: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for &(i, s) in terms {
        *acc.entry(i).or_insert(0) += s;
    }
    acc.into_iter().filter(|(_, s)| *s != 0).collect()
}

fn boundary_rank(faces: &[LocusFace], lower: usize) -> usize {
    let rows = faces
        .iter()
        .map(|f| {
            let mut row = vec![Rational::zero(); lower];
            for &(i, s) in &f.boundary {
                row[i] += int(s);
            }
            row
        })
        .collect();
    rank(rows)
}
