//! Degree matrices and the one-parameter deformation rule: when a special
//! relation's certificate has exactly one ray of positive value, replace the
//! pair member x2 by x2 + w - x and revalidate.

use crate::error::{Error, Result};
use crate::fan::{build_fan, contract_ray, star_subdivision, Fan};
use crate::lattice::{add_vec, hnf, kernel_basis, pair, sub_vec, DualVector, Int, IntMatrix, RayVector};
use crate::mori::{all_relations, positivity_class, PositivityClass};
use crate::special::ContractionCertificate;
use num_traits::{One, Zero};

/// Z-basis of the left kernel of the ray matrix, in canonical Hermite form.
/// Column j is the divisor class of ray j in Pic(X) = Z^(n-d).
pub fn degree_matrix(f: &Fan) -> IntMatrix {
    kernel_basis(&f.ray_matrix())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deformability {
    /// Exactly one ray w has positive certificate value, and the value is 1.
    Applicable { w: usize },
    TooManyPositive { positive: Vec<usize> },
    NoPositive,
    /// A unique positive ray exists but its value exceeds 1.
    UnsupportedWeight { w: usize },
}

pub fn deformability(f: &Fan, cert: &ContractionCertificate) -> Deformability {
    let positive: Vec<usize> = (0..f.rays.len())
        .filter(|&j| pair(&cert.m, &f.rays[j]) > Int::zero())
        .collect();
    match positive.as_slice() {
        [] => Deformability::NoPositive,
        [w] => {
            if pair(&cert.m, &f.rays[*w]) == Int::one() {
                Deformability::Applicable { w: *w }
            } else {
                Deformability::UnsupportedWeight { w: *w }
            }
        }
        _ => Deformability::TooManyPositive { positive },
    }
}

#[derive(Debug, Clone)]
pub struct DeformationResult {
    pub deformed: Fan,
    pub replaced_ray_index: usize,
    pub new_ray: RayVector,
    pub w_index: usize,
    pub certificate_m: DualVector,
    pub positivity: PositivityClass,
}

/// Replaces x2 by x2 + w - x. When the new ray still lies inside the star of
/// x2 the star carries over unchanged; otherwise the new ray is inserted by
/// star subdivision and the old one is contracted. Either way the result is
/// validated and cross-checked against the degree-matrix picture, with the
/// new ray occupying the slot of x2.
pub fn deform(f: &Fan, cert: &ContractionCertificate) -> Result<DeformationResult> {
    let w = match deformability(f, cert) {
        Deformability::Applicable { w } => w,
        other => {
            return Err(Error::InvalidInput(format!(
                "deformation rule does not apply: {other:?}"
            )))
        }
    };
    let x2 = cert.x2;
    let new_ray = add_vec(&sub_vec(&f.rays[x2], &f.rays[cert.x]), &f.rays[w]);
    for (j, r) in f.rays.iter().enumerate() {
        if j != x2 && *r == new_ray {
            return Err(Error::NewRayCollision(j));
        }
    }
    let mut rays = f.rays.clone();
    rays[x2] = new_ray.clone();
    let transferred = build_fan(
        f.dim,
        rays.clone(),
        f.max_cones.iter().map(|c| c.rays.clone()).collect(),
        None,
    );
    let deformed = match transferred {
        Ok(fan) if fan.is_complete() && fan.is_smooth() => fan,
        _ => {
            let subdivided = star_subdivision(f, &new_ray)
                .map_err(|e| Error::DeformedFanInvalid(e.to_string()))?;
            let contracted = contract_ray(&subdivided, x2)
                .map_err(|e| Error::DeformedFanInvalid(e.to_string()))?;
            // in `contracted` the new ray sits at the end; move it back to slot x2
            let n = f.rays.len();
            let slot = |r: usize| {
                if r == n - 1 {
                    x2
                } else if r >= x2 {
                    r + 1
                } else {
                    r
                }
            };
            let cones: Vec<Vec<usize>> = contracted
                .max_cones
                .iter()
                .map(|c| c.rays.iter().map(|&r| slot(r)).collect())
                .collect();
            build_fan(f.dim, rays, cones, None)
                .map_err(|e| Error::DeformedFanInvalid(e.to_string()))?
        }
    };
    if !deformed.is_complete() {
        return Err(Error::DeformedFanInvalid("result is not complete".into()));
    }
    if !deformed.is_smooth() {
        return Err(Error::DeformedFanInvalid("result is not smooth".into()));
    }
    // x1 + x2 = 2x forces x1 + x2' = x + w
    debug_assert_eq!(
        add_vec(&deformed.rays[cert.x1], &deformed.rays[x2]),
        add_vec(&deformed.rays[cert.x], &deformed.rays[w])
    );
    let transformed = transformed_degree_matrix(f, cert.x, x2, w);
    if hnf(&transformed).0 != hnf(&degree_matrix(&deformed)).0 {
        return Err(Error::DeformedFanInvalid("degree matrix row spaces disagree".into()));
    }
    let positivity = positivity_class(&deformed)?;
    Ok(DeformationResult {
        deformed,
        replaced_ray_index: x2,
        new_ray,
        w_index: w,
        certificate_m: cert.m.clone(),
        positivity,
    })
}

/// Degree matrix of `f` rewritten for the ray replacement x2 -> x2 + w - x:
/// a row c kills the new ray matrix iff c + c_{x2}(e_w - e_x) kills the old
/// one, so col_w loses col_{x2} and col_x gains it.
pub fn transformed_degree_matrix(f: &Fan, x: usize, x2: usize, w: usize) -> IntMatrix {
    let mut k = degree_matrix(f);
    for i in 0..k.rows {
        let c = k.at(i, x2).clone();
        *k.at_mut(i, w) -= &c;
        *k.at_mut(i, x) += &c;
    }
    k
}

/// Isomorphism-invariant signature: dimension, ray count, positivity class,
/// and the sorted list of (collection size, sorted coefficients, degree) over
/// all primitive relations. Equal fingerprints still need an isomorphism
/// search for confirmation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub dim: usize,
    pub num_rays: usize,
    pub positivity: PositivityClass,
    pub relations: Vec<(usize, Vec<Int>, Int)>,
}

pub fn fingerprint(f: &Fan) -> Result<Fingerprint> {
    let mut relations: Vec<(usize, Vec<Int>, Int)> = all_relations(f)?
        .into_iter()
        .map(|rel| {
            let mut coeffs = rel.coefficients.clone();
            coeffs.sort();
            (rel.collection.rays.len(), coeffs, rel.degree)
        })
        .collect();
    relations.sort();
    Ok(Fingerprint {
        dim: f.dim,
        num_rays: f.rays.len(),
        positivity: positivity_class(f)?,
        relations,
    })
}
