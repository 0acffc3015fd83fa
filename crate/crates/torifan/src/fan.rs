//! Smooth complete fans: construction, validation, combinatorics, and
//! unimodular isomorphism.
//!
//! A `Fan` is simplicial by construction: every maximal cone is a set of
//! exactly `dim` linearly independent rays. Validation enforces the full fan
//! axioms, including the pairwise common-face condition, which is decided by
//! an exact separating-functional feasibility problem.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    self, det, hnf, is_primitive, is_zero_vec, quotient_projection, solve_in_cone, Int,
    IntMatrix, Rat, RayVector,
};
use crate::lp::{feasible_free, LinCon, Op};

/// A cone of the fan, stored as sorted ray indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    pub rays: Vec<usize>,
}

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        Cone { rays }
    }

    pub fn dim(&self) -> usize {
        self.rays.len()
    }

    pub fn contains(&self, ray: usize) -> bool {
        self.rays.binary_search(&ray).is_ok()
    }

    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.rays.iter().all(|r| other.contains(*r))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pub dim: usize,
    pub rays: Vec<RayVector>,
    pub max_cones: Vec<Cone>,
    pub name: Option<String>,
}

/// Validates raw data into a `Fan`: primitive distinct rays, maximal cones of
/// size `dim` with independent generators, every ray used, and every pair of
/// maximal cones meeting in a common face.
pub fn build_fan(
    dim: usize,
    rays: Vec<RayVector>,
    max_cones: Vec<Vec<usize>>,
    name: Option<String>,
) -> Result<Fan> {
    for (i, r) in rays.iter().enumerate() {
        if r.len() != dim {
            return Err(Error::InvalidInput(format!("ray {i} has wrong length")));
        }
        if is_zero_vec(r) || !is_primitive(r) {
            return Err(Error::NonPrimitiveRay(i));
        }
    }
    for i in 0..rays.len() {
        for j in 0..i {
            if rays[i] == rays[j] {
                return Err(Error::DuplicateRay(i));
            }
        }
    }
    let mut cones: Vec<Cone> = Vec::with_capacity(max_cones.len());
    for (ci, raw) in max_cones.into_iter().enumerate() {
        let cone = Cone::new(raw);
        if cone.rays.iter().any(|&r| r >= rays.len()) {
            return Err(Error::InvalidInput(format!("cone {ci} references a missing ray")));
        }
        if cone.rays.windows(2).any(|w| w[0] == w[1]) || cone.dim() != dim {
            return Err(Error::BadConeSize(ci));
        }
        let gens: Vec<RayVector> = cone.rays.iter().map(|&r| rays[r].clone()).collect();
        if dim > 0 && det(&IntMatrix::from_rows(&gens)).is_zero() {
            return Err(Error::DependentCone(ci));
        }
        cones.push(cone);
    }
    cones.sort();
    for w in cones.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidInput("duplicate maximal cone".into()));
        }
    }
    let mut used = vec![false; rays.len()];
    for cone in &cones {
        for &r in &cone.rays {
            used[r] = true;
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(Error::UnusedRay(i));
    }
    for i in 0..cones.len() {
        for j in 0..i {
            if !cones_meet_in_common_face(dim, &rays, &cones[i], &cones[j]) {
                return Err(Error::FaceIntersectionViolation(j, i));
            }
        }
    }
    Ok(Fan { dim, rays, max_cones: cones, name })
}

/// Two simplicial cones meet in the common face spanned by their shared rays
/// iff some functional vanishes on the shared rays and strictly separates the
/// rest; strictness is normalized to ≥ 1 / ≤ −1.
fn cones_meet_in_common_face(dim: usize, rays: &[RayVector], c1: &Cone, c2: &Cone) -> bool {
    let shared: Vec<usize> = c1.rays.iter().copied().filter(|r| c2.contains(*r)).collect();
    let mut cons = Vec::new();
    for &r in &shared {
        cons.push(LinCon::new(rat_vec(&rays[r]), Op::Eq, Rat::zero()));
    }
    for &r in &c1.rays {
        if !shared.contains(&r) {
            cons.push(LinCon::new(rat_vec(&rays[r]), Op::Ge, Rat::one()));
        }
    }
    for &r in &c2.rays {
        if !shared.contains(&r) {
            cons.push(LinCon::new(rat_vec(&rays[r]), Op::Le, -Rat::one()));
        }
    }
    feasible_free(dim, &cons).is_some()
}

fn rat_vec(v: &RayVector) -> Vec<Rat> {
    v.iter().map(|x| Rat::from(x.clone())).collect()
}

impl Fan {
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.rays)
    }

    pub fn cone_rays(&self, cone: &Cone) -> Vec<RayVector> {
        cone.rays.iter().map(|&r| self.rays[r].clone()).collect()
    }

    /// Every maximal cone is a lattice basis.
    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| {
            self.dim == 0 || det(&IntMatrix::from_rows(&self.cone_rays(c))).abs().is_one()
        })
    }

    /// Support is all of R^d: every ridge lies in exactly two maximal cones
    /// and the facet-adjacency graph is connected.
    pub fn is_complete(&self) -> bool {
        match self.dim {
            0 => self.max_cones.len() == 1,
            1 => {
                self.rays.len() == 2
                    && self.max_cones.len() == 2
                    && lattice::add_vec(&self.rays[0], &self.rays[1]).iter().all(|x| x.is_zero())
            }
            _ => {
                if self.max_cones.is_empty() {
                    return false;
                }
                let mut ridge_owners: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
                for (ci, cone) in self.max_cones.iter().enumerate() {
                    for skip in 0..cone.rays.len() {
                        let mut ridge = cone.rays.clone();
                        ridge.remove(skip);
                        ridge_owners.entry(ridge).or_default().push(ci);
                    }
                }
                if ridge_owners.values().any(|o| o.len() != 2) {
                    return false;
                }
                let mut seen = vec![false; self.max_cones.len()];
                let mut stack = vec![0usize];
                seen[0] = true;
                while let Some(ci) = stack.pop() {
                    for owners in ridge_owners.values() {
                        if owners.contains(&ci) {
                            for &o in owners {
                                if !seen[o] {
                                    seen[o] = true;
                                    stack.push(o);
                                }
                            }
                        }
                    }
                }
                seen.into_iter().all(|s| s)
            }
        }
    }

    /// Is the given sorted index set a face of some maximal cone?
    pub fn has_cone(&self, rays: &[usize]) -> bool {
        let probe = Cone::new(rays.to_vec());
        self.max_cones.iter().any(|c| probe.is_subset_of(c))
    }
}

/// The complete 2D fan on the given rays: maximal cones join angularly
/// consecutive rays. The rays must positively span the plane.
pub fn fan_from_rays_2d(rays: Vec<RayVector>) -> Result<Fan> {
    for (i, r) in rays.iter().enumerate() {
        if r.len() != 2 {
            return Err(Error::InvalidInput(format!("ray {i} has wrong length")));
        }
        if is_zero_vec(r) || !is_primitive(r) {
            return Err(Error::NonPrimitiveRay(i));
        }
    }
    for i in 0..rays.len() {
        for j in 0..i {
            if rays[i] == rays[j] {
                return Err(Error::DuplicateRay(i));
            }
        }
    }
    if rays.len() < 3 {
        return Err(Error::NotSpanning);
    }
    let mut order: Vec<usize> = (0..rays.len()).collect();
    order.sort_by(|&a, &b| angular_cmp(&rays[a], &rays[b]));
    let n = order.len();
    for i in 0..n {
        let a = &rays[order[i]];
        let b = &rays[order[(i + 1) % n]];
        if cross(a, b) <= Int::zero() {
            return Err(Error::NotSpanning);
        }
    }
    let cones: Vec<Vec<usize>> = (0..n).map(|i| vec![order[i], order[(i + 1) % n]]).collect();
    build_fan(2, rays, cones, None)
}

fn cross(a: &RayVector, b: &RayVector) -> Int {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Counterclockwise angular order starting at the positive x-axis.
fn angular_cmp(a: &RayVector, b: &RayVector) -> std::cmp::Ordering {
    let half = |v: &RayVector| -> u8 {
        let upper = v[1] > Int::zero() || (v[1].is_zero() && v[0] > Int::zero());
        u8::from(!upper)
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c > Int::zero() {
            std::cmp::Ordering::Less
        } else if c < Int::zero() {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    })
}

/// Direct product: factor rays embedded in complementary coordinate blocks,
/// maximal cones are all pairwise sums.
pub fn product_fan(f1: &Fan, f2: &Fan) -> Fan {
    bundle_fan(f1, f2, &vec![vec![Int::zero(); f1.dim]; f2.rays.len()])
        .expect("product of valid fans is valid")
}

/// Fibration data: fiber rays embed as (r, 0); base ray b lifts to
/// (lift(b), b); maximal cones are sums of fiber and lifted base cones.
pub fn bundle_fan(fiber: &Fan, base: &Fan, lifts: &[RayVector]) -> Result<Fan> {
    if lifts.len() != base.rays.len() {
        return Err(Error::InvalidInput("one lift per base ray required".into()));
    }
    if lifts.iter().any(|l| l.len() != fiber.dim) {
        return Err(Error::InvalidInput("lift has wrong length".into()));
    }
    let dim = fiber.dim + base.dim;
    let nf = fiber.rays.len();
    let mut rays = Vec::with_capacity(nf + base.rays.len());
    for r in &fiber.rays {
        let mut v = r.clone();
        v.extend(std::iter::repeat(Int::zero()).take(base.dim));
        rays.push(v);
    }
    for (l, b) in lifts.iter().zip(&base.rays) {
        let mut v = l.clone();
        v.extend(b.iter().cloned());
        rays.push(v);
    }
    let mut cones = Vec::with_capacity(fiber.max_cones.len() * base.max_cones.len());
    for cf in &fiber.max_cones {
        for cb in &base.max_cones {
            let mut c = cf.rays.clone();
            c.extend(cb.rays.iter().map(|&r| nf + r));
            cones.push(c);
        }
    }
    build_fan(dim, rays, cones, None)
}

/// Refine the fan at `new_ray`: the minimal cone σ0 containing it is found,
/// and every maximal cone containing σ0 is replaced by the cones obtained by
/// swapping one generator of σ0 for the new ray.
pub fn star_subdivision(f: &Fan, new_ray: &RayVector) -> Result<Fan> {
    if new_ray.len() != f.dim {
        return Err(Error::InvalidInput("new ray has wrong length".into()));
    }
    if is_zero_vec(new_ray) || !is_primitive(new_ray) {
        return Err(Error::NonPrimitiveRay(f.rays.len()));
    }
    if f.rays.contains(new_ray) {
        return Err(Error::RayAlreadyPresent);
    }
    let mut sigma0: Option<Vec<usize>> = None;
    for cone in &f.max_cones {
        let gens = f.cone_rays(cone);
        if let Some(coeffs) = solve_in_cone(&gens, new_ray)? {
            let support: Vec<usize> = cone
                .rays
                .iter()
                .zip(&coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&r, _)| r)
                .collect();
            sigma0 = Some(support);
            break;
        }
    }
    let Some(sigma0) = sigma0 else {
        return Err(Error::RayOutsideSupport);
    };
    let sigma0 = Cone::new(sigma0);
    let new_idx = f.rays.len();
    let mut rays = f.rays.clone();
    rays.push(new_ray.clone());
    let mut cones = Vec::new();
    for cone in &f.max_cones {
        if sigma0.is_subset_of(cone) {
            for &drop in &sigma0.rays {
                let mut c: Vec<usize> =
                    cone.rays.iter().copied().filter(|&r| r != drop).collect();
                c.push(new_idx);
                cones.push(c);
            }
        } else {
            cones.push(cone.rays.clone());
        }
    }
    build_fan(f.dim, rays, cones, None)
}

/// Remove the ray from the fan by merging its star pairwise. A pair of star
/// cones C∪{r,u} and C∪{r,v} merges into C∪{u,v} exactly when r is a strictly
/// positive combination of u and v alone, so each merge undoes one star
/// subdivision step. Fails when the star does not decompose this way.
pub fn contract_ray(f: &Fan, ray: usize) -> Result<Fan> {
    if ray >= f.rays.len() {
        return Err(Error::InvalidInput(format!("ray {ray} does not exist")));
    }
    let mut star = Vec::new();
    let mut rest = Vec::new();
    for cone in &f.max_cones {
        if cone.contains(ray) {
            star.push(cone.clone());
        } else {
            rest.push(cone.rays.clone());
        }
    }
    let mut used = vec![false; star.len()];
    let mut merged: Vec<Vec<usize>> = Vec::new();
    for i in 0..star.len() {
        if used[i] {
            continue;
        }
        let mut partner = None;
        let mut singular_merge = false;
        for j in 0..star.len() {
            if j == i || used[j] {
                continue;
            }
            let shared: Vec<usize> =
                star[i].rays.iter().copied().filter(|r| star[j].contains(*r)).collect();
            if shared.len() != f.dim - 1 {
                continue;
            }
            let swing: Vec<usize> = star[i]
                .rays
                .iter()
                .chain(star[j].rays.iter())
                .copied()
                .filter(|r| !shared.contains(r))
                .collect();
            let [u, v] = swing.as_slice() else { continue };
            let mut union: Vec<usize> =
                shared.iter().copied().filter(|&r| r != ray).collect();
            union.push(*u);
            union.push(*v);
            union.sort_unstable();
            let gens: Vec<RayVector> = union.iter().map(|&r| f.rays[r].clone()).collect();
            if det(&IntMatrix::from_rows(&gens)).is_zero() {
                continue;
            }
            let Some(coeffs) = solve_in_cone(&gens, &f.rays[ray])? else { continue };
            let supported = union.iter().zip(&coeffs).all(|(&r, c)| {
                if r == *u || r == *v {
                    c > &Rat::zero()
                } else {
                    c.is_zero()
                }
            });
            if !supported {
                continue;
            }
            if !det(&IntMatrix::from_rows(&gens)).abs().is_one() {
                singular_merge = true;
                continue;
            }
            if partner.replace((j, union)).is_some() {
                return Err(Error::InvalidInput(format!(
                    "ray {ray} star merges ambiguously"
                )));
            }
        }
        let Some((j, union)) = partner else {
            return Err(Error::InvalidInput(if singular_merge {
                format!("contracting ray {ray} creates a singular cone")
            } else {
                format!("ray {ray} star does not contract")
            }));
        };
        used[i] = true;
        used[j] = true;
        merged.push(union);
    }
    let remap = |r: usize| if r > ray { r - 1 } else { r };
    let rays: Vec<RayVector> =
        f.rays.iter().enumerate().filter(|(i, _)| *i != ray).map(|(_, v)| v.clone()).collect();
    let cones: Vec<Vec<usize>> = rest
        .into_iter()
        .chain(merged)
        .map(|c| c.into_iter().map(remap).collect())
        .collect();
    build_fan(f.dim, rays, cones, None)
}

/// Image of a subfan under the projection modulo the saturated span of
/// `sublattice_gens`. The given cones become the maximal cones of the image.
pub fn quotient_fan(f: &Fan, sublattice_gens: &[RayVector], subfan: &[Cone]) -> Result<Fan> {
    for cone in subfan {
        if !f.has_cone(&cone.rays) {
            return Err(Error::InvalidInput("subfan cone is not a face of the fan".into()));
        }
    }
    // reduce to a basis of the span so dependent generator lists are allowed
    let (h, _) = hnf(&IntMatrix::from_rows(sublattice_gens));
    let basis: Vec<RayVector> =
        (0..h.rows).map(|r| h.row(r)).filter(|row| !is_zero_vec(row)).collect();
    let k = basis.len();
    if k == 0 || k > f.dim {
        return Err(Error::InvalidInput("bad sublattice rank".into()));
    }
    let proj = quotient_projection(&basis)?;
    let qdim = f.dim - k;
    let mut sub_rays: Vec<usize> = subfan.iter().flat_map(|c| c.rays.iter().copied()).collect();
    sub_rays.sort_unstable();
    sub_rays.dedup();
    let mut images: Vec<RayVector> = Vec::with_capacity(sub_rays.len());
    let mut index_of = BTreeMap::new();
    for &r in &sub_rays {
        let img = proj.apply_left(&f.rays[r]);
        if is_zero_vec(&img) || !is_primitive(&img) {
            return Err(Error::NonPrimitiveImage(r));
        }
        index_of.insert(r, images.len());
        images.push(img);
    }
    let mut cones = Vec::with_capacity(subfan.len());
    for cone in subfan {
        let c: Vec<usize> = cone.rays.iter().map(|r| index_of[r]).collect();
        if c.len() != qdim {
            return Err(Error::CollapsedCone);
        }
        let gens: Vec<RayVector> = c.iter().map(|&i| images[i].clone()).collect();
        if qdim > 0 && det(&IntMatrix::from_rows(&gens)).is_zero() {
            return Err(Error::CollapsedCone);
        }
        cones.push(c);
    }
    build_fan(qdim, images, cones, None)
}

/// A unimodular change of coordinates carrying one fan onto another.
/// `ray_bijection[i]` is the target index of source ray `i`; the matrix acts
/// on row vectors from the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeIso {
    pub matrix: IntMatrix,
    pub ray_bijection: Vec<usize>,
}

/// Searches for a lattice isomorphism carrying `f1` onto `f2`: fixes the
/// first maximal cone of `f1`, tries every ordered maximal cone of `f2` as
/// its image, solves for the linear map, and verifies the full ray and cone
/// bijections. Returns the first witness in a fixed enumeration order.
pub fn isomorphism(f1: &Fan, f2: &Fan) -> Option<LatticeIso> {
    if f1.dim != f2.dim
        || f1.rays.len() != f2.rays.len()
        || f1.max_cones.len() != f2.max_cones.len()
    {
        return None;
    }
    let d = f1.dim;
    if d == 0 {
        return Some(LatticeIso { matrix: IntMatrix::identity(0), ray_bijection: Vec::new() });
    }
    let source = &f1.max_cones[0];
    let src_rows = f1.cone_rays(source);
    for target in &f2.max_cones {
        let mut perm: Vec<usize> = (0..d).collect();
        loop {
            let tgt_rows: Vec<RayVector> =
                perm.iter().map(|&j| f2.rays[target.rays[j]].clone()).collect();
            if let Some(matrix) = integral_transport(&src_rows, &tgt_rows) {
                if det(&matrix).abs().is_one() {
                    if let Some(bij) = full_match(f1, f2, &matrix) {
                        return Some(LatticeIso { matrix, ray_bijection: bij });
                    }
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    None
}

/// Integer matrix M with src_i · M = tgt_i for all i, if one exists.
fn integral_transport(src: &[RayVector], tgt: &[RayVector]) -> Option<IntMatrix> {
    let d = src.len();
    // rational Gauss on [S | T], reducing S to the identity turns T into M
    let mut aug: Vec<Vec<Rat>> = (0..d)
        .map(|r| {
            let mut row = rat_vec(&src[r]);
            row.extend(rat_vec(&tgt[r]));
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let inv = aug[col][col].recip();
        for c in 0..2 * d {
            aug[col][c] = &aug[col][c] * &inv;
        }
        for r in 0..d {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in 0..2 * d {
                    let s = &aug[col][c] * &factor;
                    aug[r][c] = &aug[r][c] - &s;
                }
            }
        }
    }
    let mut m = IntMatrix::zero(d, d);
    for r in 0..d {
        for c in 0..d {
            let v = &aug[r][d + c];
            if !v.is_integer() {
                return None;
            }
            *m.at_mut(r, c) = v.to_integer();
        }
    }
    Some(m)
}

fn full_match(f1: &Fan, f2: &Fan, matrix: &IntMatrix) -> Option<Vec<usize>> {
    let mut bij = Vec::with_capacity(f1.rays.len());
    for r in &f1.rays {
        let img = matrix.apply_left(r);
        let j = f2.rays.iter().position(|s| s == &img)?;
        bij.push(j);
    }
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    if !bij.iter().all(|j| seen.insert(*j)) {
        return None;
    }
    let mut mapped: Vec<Cone> = f1
        .max_cones
        .iter()
        .map(|c| Cone::new(c.rays.iter().map(|&r| bij[r]).collect()))
        .collect();
    mapped.sort();
    if mapped == f2.max_cones {
        Some(bij)
    } else {
        None
    }
}

/// Lexicographic next permutation; false once the order wraps around.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

#[derive(Serialize, Deserialize)]
struct FanFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

pub fn fan_from_json(text: &str) -> Result<Fan> {
    let file: FanFile = serde_json::from_str(text)?;
    let rays = file
        .rays
        .iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect();
    build_fan(file.dim, rays, file.max_cones, file.name)
}

pub fn fan_to_json(f: &Fan) -> Result<String> {
    let rays: Vec<Vec<i64>> = f
        .rays
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    i64::try_from(x).map_err(|_| {
                        Error::InvalidInput("ray coordinate exceeds the file format range".into())
                    })
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let file = FanFile {
        name: f.name.clone(),
        dim: f.dim,
        rays,
        max_cones: f.max_cones.iter().map(|c| c.rays.clone()).collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vec_i64;
    use proptest::prelude::*;

    fn rays(list: &[&[i64]]) -> Vec<RayVector> {
        list.iter().map(|r| vec_i64(r)).collect()
    }

    fn p2() -> Fan {
        build_fan(
            2,
            rays(&[&[1, 0], &[0, 1], &[-1, -1]]),
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            Some("P2".into()),
        )
        .unwrap()
    }

    #[test]
    fn build_p2() {
        let f = p2();
        assert!(f.is_smooth());
        assert!(f.is_complete());
    }

    #[test]
    fn build_rejects_non_primitive() {
        let err = build_fan(2, rays(&[&[2, 0], &[0, 1], &[-1, -1]]), vec![vec![0, 1]], None);
        assert!(matches!(err, Err(Error::NonPrimitiveRay(0))));
    }

    #[test]
    fn build_rejects_duplicate_ray() {
        let err = build_fan(2, rays(&[&[1, 0], &[1, 0]]), vec![vec![0, 1]], None);
        assert!(matches!(err, Err(Error::DuplicateRay(1))));
    }

    #[test]
    fn build_rejects_overlapping_cones() {
        let err = build_fan(
            2,
            rays(&[&[1, 0], &[0, 1], &[1, 1]]),
            vec![vec![0, 1], vec![0, 2]],
            None,
        );
        assert!(matches!(err, Err(Error::FaceIntersectionViolation(0, 1))));
    }

    #[test]
    fn build_rejects_dependent_cone() {
        let err = build_fan(2, rays(&[&[1, 0], &[-1, 0]]), vec![vec![0, 1]], None);
        assert!(matches!(err, Err(Error::DependentCone(0))));
    }

    #[test]
    fn build_rejects_unused_ray() {
        let err = build_fan(
            2,
            rays(&[&[1, 0], &[0, 1], &[-1, -1], &[0, -1]]),
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            None,
        );
        assert!(matches!(err, Err(Error::UnusedRay(3))));
    }

    #[test]
    fn two_d_fan_of_four_axes() {
        let f = fan_from_rays_2d(rays(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]])).unwrap();
        assert_eq!(f.max_cones.len(), 4);
        assert!(f.is_smooth());
        assert!(f.is_complete());
    }

    #[test]
    fn two_d_fan_five_rays() {
        let f =
            fan_from_rays_2d(rays(&[&[1, 0], &[1, 1], &[0, 1], &[-1, -1], &[0, -1]])).unwrap();
        assert_eq!(f.max_cones.len(), 5);
        assert!(f.is_complete());
    }

    #[test]
    fn two_d_fan_rejects_half_plane() {
        assert!(matches!(fan_from_rays_2d(rays(&[&[1, 0], &[0, 1]])), Err(Error::NotSpanning)));
        assert!(matches!(
            fan_from_rays_2d(rays(&[&[1, 0], &[0, 1], &[-1, 0]])),
            Err(Error::NotSpanning)
        ));
    }

    #[test]
    fn product_counts() {
        let p1 = build_fan(1, rays(&[&[1], &[-1]]), vec![vec![0], vec![1]], None).unwrap();
        let sq = product_fan(&p1, &p1);
        assert_eq!(sq.rays.len(), 4);
        assert_eq!(sq.max_cones.len(), 4);
        assert!(sq.is_smooth() && sq.is_complete());
        let f2 = fan_from_rays_2d(rays(&[&[1, 0], &[1, 1], &[-1, 0], &[1, -1]])).unwrap();
        let prod = product_fan(&f2, &p2());
        assert_eq!(prod.rays.len(), 7);
        assert_eq!(prod.max_cones.len(), 12);
    }

    #[test]
    fn bundle_with_zero_lift_is_product() {
        let p1 = build_fan(1, rays(&[&[1], &[-1]]), vec![vec![0], vec![1]], None).unwrap();
        let zero_lifts = vec![vec_i64(&[0]); 3];
        let b = bundle_fan(&p1, &p2(), &zero_lifts).unwrap();
        let p = product_fan(&p1, &p2());
        assert_eq!(b.rays, p.rays);
        assert_eq!(b.max_cones, p.max_cones);
    }

    #[test]
    fn subdivide_p2_gives_f1() {
        let f = star_subdivision(&p2(), &vec_i64(&[1, 1])).unwrap();
        assert_eq!(f.rays.len(), 4);
        assert_eq!(f.max_cones.len(), 4);
        assert!(f.is_smooth() && f.is_complete());
        let hirzebruch1 =
            fan_from_rays_2d(rays(&[&[1, 0], &[0, 1], &[-1, 0], &[1, -1]])).unwrap();
        assert!(isomorphism(&f, &hirzebruch1).is_some());
    }

    #[test]
    fn subdivide_existing_ray_rejected() {
        assert!(matches!(
            star_subdivision(&p2(), &vec_i64(&[1, 0])),
            Err(Error::RayAlreadyPresent)
        ));
    }

    #[test]
    fn quotient_of_product_recovers_factor() {
        let p1 = build_fan(1, rays(&[&[1], &[-1]]), vec![vec![0], vec![1]], None).unwrap();
        let prod = product_fan(&p2(), &p1);
        let gens = rays(&[&[1, 0, 0], &[0, 1, 0], &[-1, -1, 0]]);
        let subfan = vec![Cone::new(vec![3]), Cone::new(vec![4])];
        let q = quotient_fan(&prod, &gens, &subfan).unwrap();
        assert_eq!(q.dim, 1);
        assert!(isomorphism(&q, &p1).is_some());
    }

    #[test]
    fn iso_p2_permuted() {
        let other = build_fan(
            2,
            rays(&[&[0, 1], &[-1, -1], &[1, 0]]),
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            None,
        )
        .unwrap();
        let iso = isomorphism(&p2(), &other).unwrap();
        assert!(det(&iso.matrix).abs().is_one());
    }

    #[test]
    fn iso_distinguishes_hirzebruch_surfaces() {
        let f0 = fan_from_rays_2d(rays(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]])).unwrap();
        let f2 = fan_from_rays_2d(rays(&[&[1, 0], &[1, 1], &[-1, 0], &[1, -1]])).unwrap();
        assert!(isomorphism(&f0, &f2).is_none());
    }

    #[test]
    fn incomplete_fan_detected() {
        let f = build_fan(
            2,
            rays(&[&[1, 0], &[0, 1], &[-1, -1]]),
            vec![vec![0, 1], vec![1, 2]],
            None,
        )
        .unwrap();
        assert!(!f.is_complete());
    }

    #[test]
    fn non_smooth_cone_detected() {
        let f = build_fan(
            2,
            rays(&[&[1, 0], &[1, 2], &[-1, -1]]),
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            None,
        )
        .unwrap();
        assert!(!f.is_smooth());
        assert!(f.is_complete());
    }

    #[test]
    fn json_round_trip() {
        let f = p2();
        let text = fan_to_json(&f).unwrap();
        let g = fan_from_json(&text).unwrap();
        assert_eq!(f, g);
        assert_eq!(text, fan_to_json(&g).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn random_2d_fans_are_complete(
            raw in proptest::collection::btree_set((-3i64..4, -3i64..4), 3..9)
        ) {
            let mut prim: Vec<RayVector> = Vec::new();
            for (x, y) in raw {
                if x == 0 && y == 0 {
                    continue;
                }
                let g = num_integer::gcd(x.abs(), y.abs());
                let v = vec_i64(&[x / g, y / g]);
                if !prim.contains(&v) {
                    prim.push(v);
                }
            }
            if let Ok(f) = fan_from_rays_2d(prim) {
                prop_assert!(f.is_complete());
                let sub = star_subdivision(&f, &vec_i64(&[5, 1]));
                if let Ok(s) = sub {
                    prop_assert!(s.is_complete());
                }
            }
        }
    }
}
