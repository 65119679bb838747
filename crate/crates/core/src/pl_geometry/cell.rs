use std::collections::BTreeMap;

use num_traits::Zero;

use super::polytope::{affine_rank, is_bounded, vertices, HalfSpace};
use super::PlError;
use crate::lattice::LatticeVector;
use crate::rational::{dot_int, Rational};
use crate::trop_av::TropPoint;
use crate::trop_theta::TropicalThetaFunction;

/// A hyperplane of the cell boundary with every term tying along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFacet {
    /// `⟨normal, x⟩ ≥ offset` on the cell; `normal = u″ − u` for the first competitor.
    pub halfspace: HalfSpace,
    pub competitors: Vec<LatticeVector>,
    /// Indices into the cell's vertex list.
    pub vertices: Vec<usize>,
}

/// Closure of the region where `witness` attains the min, as an
/// H-representation plus its vertex list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearityCell {
    pub witness: LatticeVector,
    /// `w(witness)`, so the function is `w + ⟨witness, x⟩` on the cell.
    pub w: Rational,
    pub facets: Vec<CellFacet>,
    pub vertices: Vec<Vec<Rational>>,
    pub bounded: bool,
}

impl LinearityCell {
    pub fn affine_value(&self, x: &[Rational]) -> Rational {
        &self.w + dot_int(&self.witness, x)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.facets.iter().all(|f| f.halfspace.contains(x))
    }

    pub fn dim(&self) -> usize {
        self.witness.len()
    }
}

fn constraint(theta: &TropicalThetaFunction, u: &[i64], w: &Rational, other: &[i64]) -> Option<HalfSpace> {
    let wo = theta.profile_value(other).finite()?.clone();
    Some(HalfSpace { normal: other.iter().zip(u).map(|(a, b)| a - b).collect(), offset: w - wo })
}

/// The cell of the term at `v`, which must be the unique minimizer there.
pub fn linearity_cell(theta: &TropicalThetaFunction, v: &TropPoint) -> Result<LinearityCell, PlError> {
    let g = theta.g();
    if g > 3 {
        return Err(PlError::RankTooLarge { g });
    }
    let at = theta.evaluate(v)?;
    if at.witnesses.len() != 1 {
        return Err(PlError::OnCornerLocus { ties: at.witnesses });
    }
    cell_of_witness(theta, &at.witnesses[0])
}

/// Builds the cell of `u` by vertex-certified refinement: start from the
/// neighbours `u ± Λe_i`, and while some vertex has a smaller term, add the
/// terms attaining the min there. Once `u` is minimal at every vertex it is
/// minimal on the whole (bounded) cell by concavity.
pub(crate) fn cell_of_witness(theta: &TropicalThetaFunction, u: &[i64]) -> Result<LinearityCell, PlError> {
    let g = theta.g();
    if g > 3 {
        return Err(PlError::RankTooLarge { g });
    }
    let w = theta
        .profile_value(u)
        .finite()
        .cloned()
        .ok_or_else(|| PlError::NotFullDimensional { witness: u.to_vec() })?;

    if !theta.is_ample() {
        // finite support: the competitors are the whole support
        let mut hs = Vec::new();
        let mut comps = Vec::new();
        for e in &theta.profile().entries {
            if e.rep.as_slice() != u {
                if let Some(h) = constraint(theta, u, &w, &e.rep) {
                    hs.push(h);
                    comps.push(e.rep.clone());
                }
            }
        }
        let verts = vertices(&hs, g);
        let bounded = is_bounded(&hs, g);
        let facets = hs
            .into_iter()
            .zip(comps)
            .map(|(h, c)| {
                let vs = (0..verts.len()).filter(|&i| h.slack(&verts[i]).is_zero()).collect();
                CellFacet { halfspace: h, competitors: vec![c], vertices: vs }
            })
            .collect();
        return Ok(LinearityCell { witness: u.to_vec(), w, facets, vertices: verts, bounded });
    }

    let lambda = &theta.factor().lambda;
    let mut competitors: Vec<LatticeVector> = Vec::new();
    for j in 0..g {
        let col = lambda.column(j);
        for s in [1, -1] {
            competitors.push(u.iter().zip(&col).map(|(a, b)| a + s * b).collect());
        }
    }
    loop {
        let hs: Vec<HalfSpace> = competitors.iter().filter_map(|c| constraint(theta, u, &w, c)).collect();
        let verts = vertices(&hs, g);
        if affine_rank(&verts) != Some(g) {
            return Err(PlError::NotFullDimensional { witness: u.to_vec() });
        }
        let mut added = false;
        for x in &verts {
            let at = theta.evaluate(&TropPoint::new(x.clone()))?;
            if at.value < &w + dot_int(u, x) {
                for c in at.witnesses {
                    if !competitors.contains(&c) {
                        competitors.push(c);
                        added = true;
                    }
                }
            }
        }
        if added {
            continue;
        }
        // keep facets only, grouping terms that share a hyperplane
        let mut groups: BTreeMap<Vec<usize>, CellFacet> = BTreeMap::new();
        for (h, c) in hs.into_iter().zip(&competitors) {
            let tight: Vec<usize> = (0..verts.len()).filter(|&i| h.slack(&verts[i]).is_zero()).collect();
            let pts: Vec<Vec<Rational>> = tight.iter().map(|&i| verts[i].clone()).collect();
            if affine_rank(&pts) != Some(g - 1) {
                continue;
            }
            groups
                .entry(tight.clone())
                .and_modify(|f| f.competitors.push(c.clone()))
                .or_insert(CellFacet { halfspace: h, competitors: vec![c.clone()], vertices: tight });
        }
        let mut facets: Vec<CellFacet> = groups.into_values().collect();
        for f in &mut facets {
            f.competitors.sort();
        }
        facets.sort_by(|a, b| a.competitors.cmp(&b.competitors));
        return Ok(LinearityCell { witness: u.to_vec(), w, facets, vertices: verts, bounded: true });
    }
}
