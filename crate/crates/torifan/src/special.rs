//! Specialness of primitive crepant contractions and the structure results
//! around them: lattice certificates, exceptional images, the S1/S2 side
//! dichotomy, and weak del Pezzo bundle splittings.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fan::{build_fan, quotient_fan, Cone, Fan};
use crate::lattice::{
    add_vec, hnf, is_zero_vec, pair, scale_vec, solve_in_cone, DualVector, Int, IntMatrix, Rat,
    RayVector,
};
use crate::lp::nonneg_combination;
use crate::mori::{
    crepant_relations, positivity_class, primitive_collections, primitive_relation,
    PositivityClass, PrimitiveRelation,
};

/// Everything that witnesses one special primitive crepant contraction.
#[derive(Debug, Clone)]
pub struct ContractionCertificate {
    pub relation: PrimitiveRelation,
    pub x1: usize,
    pub x2: usize,
    pub x: usize,
    pub sigma_phi: Vec<Cone>,
    pub image_fan: Fan,
    pub m: DualVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecialFailure {
    BadRelationShape,
    ImageError(String),
    ImageNotWeakFano,
    NoCertificateM,
}

impl std::fmt::Display for SpecialFailure {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpecialFailure::BadRelationShape => write!(out, "relation is not of shape x1+x2=2x"),
            SpecialFailure::ImageError(msg) => write!(out, "exceptional image failed: {msg}"),
            SpecialFailure::ImageNotWeakFano => write!(out, "exceptional image is not weak Fano"),
            SpecialFailure::NoCertificateM => write!(out, "no lattice certificate m exists"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum SpecialDecision {
    Special(Box<ContractionCertificate>),
    NotSpecial(SpecialFailure),
}

#[derive(Debug, Clone)]
pub struct SpecialReport {
    pub positivity: PositivityClass,
    pub special_weak_fano: bool,
    pub decisions: Vec<(PrimitiveRelation, SpecialDecision)>,
}

/// Extracts (x1, x2, x) from a relation of shape x1 + x2 = 2x.
pub fn relation_shape(rel: &PrimitiveRelation) -> Option<(usize, usize, usize)> {
    if rel.collection.rays.len() == 2
        && rel.sigma_rays.len() == 1
        && rel.coefficients == vec![Int::from(2)]
    {
        Some((rel.collection.rays[0], rel.collection.rays[1], rel.sigma_rays[0]))
    } else {
        None
    }
}

/// All cones avoiding {x, x1, x2} that are faces of a cone containing x,
/// ordered by (dimension, indices). Closed under faces; contains the zero
/// cone whenever x has a maximal cone at all.
pub fn sigma_phi(f: &Fan, rel: &PrimitiveRelation) -> Result<Vec<Cone>> {
    let Some((x1, x2, x)) = relation_shape(rel) else {
        return Err(Error::BadRelationShape);
    };
    let banned = [x, x1, x2];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for cone in &f.max_cones {
        if !cone.contains(x) {
            continue;
        }
        let allowed: Vec<usize> =
            cone.rays.iter().copied().filter(|r| !banned.contains(r)).collect();
        for mask in 0..1usize << allowed.len() {
            let subset: Vec<usize> = allowed
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &r)| r)
                .collect();
            seen.insert(subset);
        }
    }
    let mut cones: Vec<Cone> = seen.into_iter().map(Cone::new).collect();
    cones.sort_by_key(|c| (c.dim(), c.rays.clone()));
    Ok(cones)
}

fn maximal_elements(cones: &[Cone]) -> Vec<Cone> {
    cones
        .iter()
        .filter(|c| !cones.iter().any(|d| c.dim() < d.dim() && c.is_subset_of(d)))
        .cloned()
        .collect()
}

/// The image fan of the exceptional divisor: the maximal elements of Σ_φ
/// modulo the plane spanned by x and x1, validated smooth and complete.
pub fn exceptional_image(f: &Fan, rel: &PrimitiveRelation) -> Result<Fan> {
    let Some((x1, _, x)) = relation_shape(rel) else {
        return Err(Error::BadRelationShape);
    };
    let phi = sigma_phi(f, rel)?;
    let subfan = maximal_elements(&phi);
    let gens = vec![f.rays[x].clone(), f.rays[x1].clone()];
    let image = quotient_fan(f, &gens, &subfan)?;
    if !image.is_complete() {
        return Err(Error::NotComplete);
    }
    if !image.is_smooth() {
        return Err(Error::InvalidInput("image fan is not smooth".into()));
    }
    Ok(image)
}

/// Integer bounds b with lo ≤ m_j ≤ hi for every m satisfying m(v) ≥ −1 on
/// all rays: from e_j = Σ λ_i v_i and −e_j = Σ μ_i v_i with λ, μ ≥ 0.
fn coordinate_bounds(f: &Fan) -> Option<Vec<(Int, Int)>> {
    let ray_cols: Vec<Vec<Rat>> =
        f.rays.iter().map(|r| r.iter().map(|x| Rat::from(x.clone())).collect()).collect();
    let mut bounds = Vec::with_capacity(f.dim);
    for j in 0..f.dim {
        let mut unit = vec![Rat::zero(); f.dim];
        unit[j] = Rat::one();
        let lam = nonneg_combination(&ray_cols, &unit)?;
        unit[j] = -Rat::one();
        let mu = nonneg_combination(&ray_cols, &unit)?;
        let lam_sum: Rat = lam.iter().sum();
        let mu_sum: Rat = mu.iter().sum();
        bounds.push(((-lam_sum).ceil().to_integer(), mu_sum.floor().to_integer()));
    }
    Some(bounds)
}

/// Searches for the lexicographically smallest m ∈ M with m(v) ≥ −1 for all
/// rays, m(x) = m(x1) = m(x2) = −1, and m(y) = 0 on every ray of Σ_φ.
pub fn find_certificate_m(f: &Fan, rel: &PrimitiveRelation) -> Result<Option<DualVector>> {
    let Some((x1, x2, x)) = relation_shape(rel) else {
        return Err(Error::BadRelationShape);
    };
    let phi = sigma_phi(f, rel)?;
    let mut phi_rays: BTreeSet<usize> = BTreeSet::new();
    for cone in &phi {
        phi_rays.extend(cone.rays.iter().copied());
    }
    let Some(bounds) = coordinate_bounds(f) else {
        return Err(Error::NotComplete);
    };
    let minus_one = -Int::one();
    let mut m = vec![Int::zero(); f.dim];
    let ok = |m: &DualVector| -> bool {
        for (i, v) in f.rays.iter().enumerate() {
            let val = pair(m, v);
            if val < minus_one {
                return false;
            }
            if (i == x || i == x1 || i == x2) && val != minus_one {
                return false;
            }
            if phi_rays.contains(&i) && !val.is_zero() {
                return false;
            }
        }
        true
    };
    fn scan(
        j: usize,
        bounds: &[(Int, Int)],
        m: &mut DualVector,
        ok: &dyn Fn(&DualVector) -> bool,
    ) -> Option<DualVector> {
        if j == bounds.len() {
            return ok(m).then(|| m.clone());
        }
        let (lo, hi) = &bounds[j];
        let mut v = lo.clone();
        while &v <= hi {
            m[j] = v.clone();
            if let Some(found) = scan(j + 1, bounds, m, ok) {
                return Some(found);
            }
            v += 1;
        }
        None
    }
    Ok(scan(0, &bounds, &mut m, &ok))
}

/// Decides clause by clause whether a crepant contraction is special, and
/// assembles the full certificate when it is.
pub fn is_special_contraction(f: &Fan, rel: &PrimitiveRelation) -> Result<SpecialDecision> {
    let Some((x1, x2, x)) = relation_shape(rel) else {
        return Ok(SpecialDecision::NotSpecial(SpecialFailure::BadRelationShape));
    };
    let phi = sigma_phi(f, rel)?;
    let image = match exceptional_image(f, rel) {
        Ok(image) => image,
        Err(e) => {
            return Ok(SpecialDecision::NotSpecial(SpecialFailure::ImageError(e.to_string())))
        }
    };
    match positivity_class(&image)? {
        PositivityClass::Fano | PositivityClass::WeakFanoNotFano => {}
        PositivityClass::Neither => {
            return Ok(SpecialDecision::NotSpecial(SpecialFailure::ImageNotWeakFano))
        }
    }
    let Some(m) = find_certificate_m(f, rel)? else {
        return Ok(SpecialDecision::NotSpecial(SpecialFailure::NoCertificateM));
    };
    debug_assert_eq!(pair(&m, &f.rays[x1]), -Int::one());
    debug_assert_eq!(pair(&m, &f.rays[x2]), -Int::one());
    Ok(SpecialDecision::Special(Box::new(ContractionCertificate {
        relation: rel.clone(),
        x1,
        x2,
        x,
        sigma_phi: phi,
        image_fan: image,
        m,
    })))
}

/// A special weak Fano is a weak Fano that is not Fano and whose every
/// primitive crepant contraction is special.
pub fn is_special_weak_fano(f: &Fan) -> Result<SpecialReport> {
    let positivity = positivity_class(f)?;
    if positivity != PositivityClass::WeakFanoNotFano {
        return Ok(SpecialReport { positivity, special_weak_fano: false, decisions: Vec::new() });
    }
    let mut decisions = Vec::new();
    let mut all_special = true;
    for rel in crepant_relations(f)? {
        let decision = is_special_contraction(f, &rel)?;
        if matches!(decision, SpecialDecision::NotSpecial(_)) {
            all_special = false;
        }
        decisions.push((rel, decision));
    }
    Ok(SpecialReport { positivity, special_weak_fano: all_special, decisions })
}

/// For every 2-element primitive collection {z1, z2} with z1 + z2 ≠ 0, some
/// ray must lie in the relative interior of ⟨z1, z2⟩. Returns the first
/// violating pair, or `None` when the property holds.
pub fn interior_ray_property(f: &Fan) -> Result<Option<(usize, usize)>> {
    for pc in primitive_collections(f) {
        if pc.rays.len() != 2 {
            continue;
        }
        let (z1, z2) = (pc.rays[0], pc.rays[1]);
        if is_zero_vec(&add_vec(&f.rays[z1], &f.rays[z2])) {
            continue;
        }
        let gens = vec![f.rays[z1].clone(), f.rays[z2].clone()];
        let mut witnessed = false;
        for w in &f.rays {
            if let Some(coeffs) = solve_in_cone(&gens, w)? {
                if coeffs.iter().all(|c| c > &Rat::zero()) {
                    witnessed = true;
                    break;
                }
            }
        }
        if !witnessed {
            return Ok(Some((z1, z2)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    S1,
    S2,
    BothTrivial,
}

impl std::fmt::Display for Side {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            Side::S1 => "S1",
            Side::S2 => "S2",
            Side::BothTrivial => "Both-trivial",
        };
        write!(out, "{label}")
    }
}

#[derive(Debug, Clone)]
pub struct StructureReport {
    pub interior_rays: Vec<usize>,
    pub side: Side,
}

fn in_cone_of(gens: &[RayVector], v: &RayVector) -> bool {
    matches!(solve_in_cone(gens, v), Ok(Some(_)))
}

/// Membership in the union of the four plane cones on x1, x, x2, −x.
fn in_s1(f: &Fan, cert: &ContractionCertificate, v: &RayVector) -> bool {
    let x = &f.rays[cert.x];
    let neg_x = scale_vec(&-Int::one(), x);
    let x1 = &f.rays[cert.x1];
    let x2 = &f.rays[cert.x2];
    in_cone_of(&[x1.clone(), x.clone()], v)
        || in_cone_of(&[x.clone(), x2.clone()], v)
        || in_cone_of(&[x2.clone(), neg_x.clone()], v)
        || in_cone_of(&[neg_x, x1.clone()], v)
}

/// Membership in the union of ⟨±x⟩ + σ over σ ∈ Σ_φ.
fn in_s2(f: &Fan, cert: &ContractionCertificate, v: &RayVector) -> bool {
    let x = &f.rays[cert.x];
    let neg_x = scale_vec(&-Int::one(), x);
    for sigma in maximal_elements(&cert.sigma_phi) {
        for apex in [x.clone(), neg_x.clone()] {
            let mut gens: Vec<RayVector> =
                sigma.rays.iter().map(|&r| f.rays[r].clone()).collect();
            gens.push(apex);
            if in_cone_of(&gens, v) {
                return true;
            }
        }
    }
    false
}

/// Computes I = G(Σ) ∖ ({x,x1,x2} ∪ G(Σ_φ)) and reports which side of the
/// dichotomy contains it. In dimension 2 both inclusions hold trivially.
pub fn s1_s2_split(f: &Fan, cert: &ContractionCertificate) -> Result<StructureReport> {
    let mut excluded: BTreeSet<usize> = [cert.x, cert.x1, cert.x2].into();
    for cone in &cert.sigma_phi {
        excluded.extend(cone.rays.iter().copied());
    }
    let interior: Vec<usize> = (0..f.rays.len()).filter(|r| !excluded.contains(r)).collect();
    if f.dim == 2 {
        return Ok(StructureReport { interior_rays: interior, side: Side::BothTrivial });
    }
    if interior.iter().all(|&r| in_s1(f, cert, &f.rays[r])) {
        return Ok(StructureReport { interior_rays: interior, side: Side::S1 });
    }
    if interior.iter().all(|&r| in_s2(f, cert, &f.rays[r])) {
        return Ok(StructureReport { interior_rays: interior, side: Side::S2 });
    }
    let offender = interior
        .iter()
        .copied()
        .find(|&r| !in_s1(f, cert, &f.rays[r]) && !in_s2(f, cert, &f.rays[r]))
        .unwrap_or(interior[0]);
    Err(Error::DichotomyViolated(offender))
}

#[derive(Debug, Clone)]
pub struct BundleSplit {
    pub g1: Vec<usize>,
    pub g2: Vec<usize>,
    pub fiber: Fan,
    pub base: Fan,
}

/// Connected components of the hypergraph whose hyperedges are the
/// primitive collections.
fn collection_components(n: usize, collections: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for pc in collections {
        for w in pc.windows(2) {
            let (a, b) = (root(&mut parent, w[0]), root(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = root(&mut parent, i);
        comps.entry(r).or_default().push(i);
    }
    comps.into_values().collect()
}

/// Attempts to realize the ray partition (G1, G2) as fiber and base of a
/// toric bundle: the fiber is the fan induced on G1 in a basis of its
/// saturated span, the base is the quotient fan modulo that span.
fn realize_split(f: &Fan, g1: &[usize]) -> Option<BundleSplit> {
    let g1_set: BTreeSet<usize> = g1.iter().copied().collect();
    let g2: Vec<usize> = (0..f.rays.len()).filter(|r| !g1_set.contains(r)).collect();
    if g1.is_empty() || g2.is_empty() {
        return None;
    }
    let g1_rays: Vec<RayVector> = g1.iter().map(|&r| f.rays[r].clone()).collect();
    let (h, _) = hnf(&IntMatrix::from_rows(&g1_rays));
    let basis: Vec<RayVector> =
        (0..h.rows).map(|r| h.row(r)).filter(|row| !is_zero_vec(row)).collect();
    let d1 = basis.len();
    if d1 == 0 || d1 >= f.dim {
        return None;
    }
    // fiber rays in basis coordinates; non-integrality means the ray lattice
    // of G1 is not saturated and the candidate fails
    let mut fiber_rays = Vec::with_capacity(g1.len());
    for ray in &g1_rays {
        let coeffs = solve_linear(&basis, ray)?;
        if coeffs.iter().any(|c| !c.is_integer()) {
            return None;
        }
        fiber_rays.push(coeffs.iter().map(|c| c.to_integer()).collect::<RayVector>());
    }
    let mut fiber_cones: Vec<Vec<usize>> = Vec::new();
    let mut base_cones: Vec<Cone> = Vec::new();
    for cone in &f.max_cones {
        let part1: Vec<usize> = cone
            .rays
            .iter()
            .filter(|r| g1_set.contains(r))
            .map(|&r| g1.iter().position(|&g| g == r).unwrap())
            .collect();
        if part1.len() != d1 {
            return None;
        }
        if !fiber_cones.contains(&part1) {
            fiber_cones.push(part1);
        }
        let part2 = Cone::new(cone.rays.iter().copied().filter(|r| !g1_set.contains(r)).collect());
        if !base_cones.contains(&part2) {
            base_cones.push(part2);
        }
    }
    let fiber = build_fan(d1, fiber_rays, fiber_cones, None).ok()?;
    if !fiber.is_complete() {
        return None;
    }
    let base = quotient_fan(f, &g1_rays, &base_cones).ok()?;
    if !base.is_complete() {
        return None;
    }
    Some(BundleSplit { g1: g1.to_vec(), g2, fiber, base })
}

/// Finds a fiber/base splitting of the ray set: every primitive collection
/// must stay on one side, and collections on the fiber side must keep their
/// σ(P) inside the fiber. Candidate fiber sides are unions of collection
/// components; when a crepant relation exists the smallest candidate
/// containing its {x, x1, x2} is preferred, otherwise the smallest valid
/// candidate overall is returned.
pub fn bundle_split(f: &Fan) -> Result<Option<BundleSplit>> {
    let collections = primitive_collections(f);
    let relations: Vec<PrimitiveRelation> = collections
        .iter()
        .map(|pc| primitive_relation(f, pc))
        .collect::<Result<_>>()?;
    let raw: Vec<Vec<usize>> = collections.iter().map(|pc| pc.rays.clone()).collect();
    let comps = collection_components(f.rays.len(), &raw);
    if comps.len() < 2 {
        return Ok(None);
    }
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for mask in 1..(1usize << comps.len()) - 1 {
        let mut g1: Vec<usize> = Vec::new();
        for (ci, comp) in comps.iter().enumerate() {
            if mask >> ci & 1 == 1 {
                g1.extend(comp.iter().copied());
            }
        }
        g1.sort_unstable();
        let g1_set: BTreeSet<usize> = g1.iter().copied().collect();
        let closed = relations.iter().all(|rel| {
            let inside = rel.collection.rays.iter().all(|r| g1_set.contains(r));
            let outside = rel.collection.rays.iter().all(|r| !g1_set.contains(r));
            (inside && rel.sigma_rays.iter().all(|r| g1_set.contains(r))) || outside
        });
        if closed {
            candidates.push(g1);
        }
    }
    candidates.sort_by_key(|c| (c.len(), c.clone()));
    let preferred: Option<Vec<usize>> = {
        let crepant = crepant_relations(f).unwrap_or_default();
        crepant.first().and_then(relation_shape_indices).and_then(|core| {
            candidates
                .iter()
                .find(|c| core.iter().all(|r| c.binary_search(r).is_ok()))
                .cloned()
        })
    };
    let ordered: Vec<Vec<usize>> = match preferred {
        Some(p) => std::iter::once(p.clone())
            .chain(candidates.into_iter().filter(move |c| *c != p))
            .collect(),
        None => candidates,
    };
    for g1 in &ordered {
        if let Some(split) = realize_split(f, g1) {
            return Ok(Some(split));
        }
    }
    Ok(None)
}

fn relation_shape_indices(rel: &PrimitiveRelation) -> Option<Vec<usize>> {
    relation_shape(rel).map(|(x1, x2, x)| {
        let mut v = vec![x1, x2, x];
        v.sort_unstable();
        v
    })
}

/// Exact rational solve of point = Σ c_i basis_i for independent basis rows,
/// with no sign constraint on the coefficients.
fn solve_linear(basis: &[RayVector], point: &RayVector) -> Option<Vec<Rat>> {
    let neg: Vec<RayVector> = basis.iter().map(|b| scale_vec(&-Int::one(), b)).collect();
    // c = pos − neg parts: reuse the cone solver on the doubled generator set
    let mut gens: Vec<RayVector> = basis.to_vec();
    gens.extend(neg);
    let doubled: Vec<Vec<Rat>> = gens
        .iter()
        .map(|g| g.iter().map(|x| Rat::from(x.clone())).collect())
        .collect();
    let target: Vec<Rat> = point.iter().map(|x| Rat::from(x.clone())).collect();
    let sol = nonneg_combination(&doubled, &target)?;
    let k = basis.len();
    Some((0..k).map(|i| &sol[i] - &sol[k + i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{fan_from_rays_2d, isomorphism, product_fan};
    use crate::lattice::{int, vec_i64};

    fn rays(list: &[&[i64]]) -> Vec<RayVector> {
        list.iter().map(|r| vec_i64(r)).collect()
    }

    fn p2() -> Fan {
        build_fan(
            2,
            rays(&[&[1, 0], &[0, 1], &[-1, -1]]),
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            None,
        )
        .unwrap()
    }

    fn degree_two_surface() -> Fan {
        fan_from_rays_2d(rays(&[&[1, 0], &[1, 1], &[-1, 0], &[1, -1]])).unwrap()
    }

    fn crepant(f: &Fan) -> PrimitiveRelation {
        crepant_relations(f).unwrap().into_iter().next().unwrap()
    }

    #[test]
    fn surface_certificate() {
        let f = degree_two_surface();
        let rel = crepant(&f);
        let phi = sigma_phi(&f, &rel).unwrap();
        assert_eq!(phi, vec![Cone::new(vec![])]);
        let image = exceptional_image(&f, &rel).unwrap();
        assert_eq!(image.dim, 0);
        assert!(image.is_complete() && image.is_smooth());
        let m = find_certificate_m(&f, &rel).unwrap().unwrap();
        assert_eq!(m, vec_i64(&[-1, 0]));
        let decision = is_special_contraction(&f, &rel).unwrap();
        let SpecialDecision::Special(cert) = decision else {
            panic!("surface contraction must be special");
        };
        let report = s1_s2_split(&f, &cert).unwrap();
        assert_eq!(report.interior_rays, vec![2]);
        assert_eq!(report.side, Side::BothTrivial);
    }

    #[test]
    fn surface_is_special_weak_fano() {
        let report = is_special_weak_fano(&degree_two_surface()).unwrap();
        assert!(report.special_weak_fano);
        assert_eq!(report.positivity, PositivityClass::WeakFanoNotFano);
        assert_eq!(report.decisions.len(), 1);
    }

    #[test]
    fn fano_is_not_special_weak_fano() {
        let report = is_special_weak_fano(&p2()).unwrap();
        assert!(!report.special_weak_fano);
        assert_eq!(report.positivity, PositivityClass::Fano);
    }

    #[test]
    fn interior_ray_holds_on_surface() {
        assert_eq!(interior_ray_property(&degree_two_surface()).unwrap(), None);
    }

    #[test]
    fn product_splits_into_factors() {
        let prod = product_fan(&p2(), &p2());
        let split = bundle_split(&prod).unwrap().unwrap();
        assert_eq!(split.g1.len(), 3);
        assert_eq!(split.g2.len(), 3);
        assert!(isomorphism(&split.fiber, &p2()).is_some());
        assert!(isomorphism(&split.base, &p2()).is_some());
    }

    #[test]
    fn p2_has_no_split() {
        assert_eq!(bundle_split(&p2()).unwrap().map(|s| s.g1), None);
    }

    #[test]
    fn certificate_forces_minus_one_on_pair() {
        let f = degree_two_surface();
        let rel = crepant(&f);
        let m = find_certificate_m(&f, &rel).unwrap().unwrap();
        let (x1, x2, _) = relation_shape(&rel).unwrap();
        assert_eq!(pair(&m, &f.rays[x1]), int(-1));
        assert_eq!(pair(&m, &f.rays[x2]), int(-1));
    }
}
