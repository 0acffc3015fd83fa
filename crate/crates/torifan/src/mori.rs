//! Primitive collections and relations, the associated 1-cycles, extremality
//! in the Mori cone, and the Fano / weak Fano trichotomy.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{add_vec, is_zero_vec, Int, Rat};
use crate::lp::nonneg_combination;

/// A minimal non-face: generates no cone while every proper subset does.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimitiveCollection {
    pub rays: Vec<usize>,
}

/// The identity Σ_{i∈P} ray_i = Σ_j a_j · sigma_ray_j locating the sum in the
/// relative interior of the unique cone σ(P).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveRelation {
    pub collection: PrimitiveCollection,
    pub sigma_rays: Vec<usize>,
    pub coefficients: Vec<Int>,
    pub degree: Int,
}

/// r(P) as a vector of ray multiplicities: +1 on P, −a_j on σ(P).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneCycle {
    pub coeffs: Vec<Int>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PositivityClass {
    Fano,
    WeakFanoNotFano,
    Neither,
}

impl std::fmt::Display for PositivityClass {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            PositivityClass::Fano => "Fano",
            PositivityClass::WeakFanoNotFano => "WeakFanoNotFano",
            PositivityClass::Neither => "Neither",
        };
        write!(out, "{label}")
    }
}

impl std::str::FromStr for PositivityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Fano" => Ok(PositivityClass::Fano),
            "WeakFanoNotFano" => Ok(PositivityClass::WeakFanoNotFano),
            "Neither" => Ok(PositivityClass::Neither),
            other => Err(Error::InvalidInput(format!("unknown positivity class: {other}"))),
        }
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let remaining = k - current.len();
        for i in start..=n.saturating_sub(remaining) {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut current, &mut out);
    }
    out
}

/// All primitive collections, size-ascending then lexicographic. A candidate
/// is kept when it is not a face but all its facets are; supersets of found
/// collections are pruned since they cannot be minimal.
pub fn primitive_collections(f: &Fan) -> Vec<PrimitiveCollection> {
    let n = f.rays.len();
    let mut found: Vec<PrimitiveCollection> = Vec::new();
    for size in 2..=n {
        'subset: for cand in subsets_of_size(n, size) {
            for pc in &found {
                if pc.rays.iter().all(|r| cand.binary_search(r).is_ok()) {
                    continue 'subset;
                }
            }
            if f.has_cone(&cand) {
                continue;
            }
            for skip in 0..size {
                let mut facet = cand.clone();
                facet.remove(skip);
                if !f.has_cone(&facet) {
                    continue 'subset;
                }
            }
            found.push(PrimitiveCollection { rays: cand });
        }
    }
    found
}

/// Definition-based reference: every subset checked directly. Exponential;
/// for cross-validation of `primitive_collections` only.
pub fn primitive_collections_brute_force(f: &Fan) -> Vec<PrimitiveCollection> {
    let n = f.rays.len();
    let mut found = Vec::new();
    for size in 2..=n {
        for cand in subsets_of_size(n, size) {
            if f.has_cone(&cand) {
                continue;
            }
            let mut all_proper_are_faces = true;
            'proper: for sub_size in 1..size {
                for positions in subsets_of_size(size, sub_size) {
                    let subset: Vec<usize> = positions.iter().map(|&p| cand[p]).collect();
                    if !f.has_cone(&subset) {
                        all_proper_are_faces = false;
                        break 'proper;
                    }
                }
            }
            if all_proper_are_faces {
                found.push(PrimitiveCollection { rays: cand });
            }
        }
    }
    found
}

/// Locates Σ_{i∈P} ray_i inside a maximal cone and keeps the generators with
/// positive coefficient. Smoothness makes the coefficients integers.
pub fn primitive_relation(f: &Fan, p: &PrimitiveCollection) -> Result<PrimitiveRelation> {
    let sum = p
        .rays
        .iter()
        .fold(vec![Int::zero(); f.dim], |acc, &r| add_vec(&acc, &f.rays[r]));
    for cone in &f.max_cones {
        let gens = cone.rays.iter().map(|&r| f.rays[r].clone()).collect::<Vec<_>>();
        if let Some(coeffs) = crate::lattice::solve_in_cone(&gens, &sum)? {
            let mut sigma_rays = Vec::new();
            let mut coefficients = Vec::new();
            for (&r, c) in cone.rays.iter().zip(&coeffs) {
                if c.is_zero() {
                    continue;
                }
                if !c.is_integer() {
                    return Err(Error::InvalidInput(format!(
                        "non-integer coefficient located for collection {:?}: fan is not smooth",
                        p.rays
                    )));
                }
                sigma_rays.push(r);
                coefficients.push(c.to_integer());
            }
            let degree = Int::from(p.rays.len()) - coefficients.iter().sum::<Int>();
            return Ok(PrimitiveRelation { collection: p.clone(), sigma_rays, coefficients, degree });
        }
    }
    Err(Error::SumNotLocated)
}

pub fn one_cycle(f: &Fan, rel: &PrimitiveRelation) -> OneCycle {
    let mut coeffs = vec![Int::zero(); f.rays.len()];
    for &r in &rel.collection.rays {
        coeffs[r] += 1;
    }
    for (&r, a) in rel.sigma_rays.iter().zip(&rel.coefficients) {
        coeffs[r] -= a;
    }
    OneCycle { coeffs }
}

pub fn all_relations(f: &Fan) -> Result<Vec<PrimitiveRelation>> {
    primitive_collections(f).iter().map(|p| primitive_relation(f, p)).collect()
}

fn positively_proportional(a: &[Int], b: &[Int]) -> bool {
    let Some(i) = a.iter().position(|x| !x.is_zero()) else {
        return is_zero_vec(b);
    };
    if b[i].is_zero() || (&a[i] * &b[i]) < Int::zero() {
        return false;
    }
    // b = (b_i / a_i) · a, checked by cross-multiplication
    a.iter().zip(b).all(|(x, y)| x * &b[i] == y * &a[i])
}

/// For each primitive relation, decides whether r(P) spans an extremal ray of
/// the cone generated by all the r(P'): extremal iff r(P) is not a
/// nonnegative combination of the cycles not positively proportional to it.
pub fn extremal_relations(f: &Fan) -> Result<Vec<(PrimitiveRelation, bool)>> {
    let relations = all_relations(f)?;
    let cycles: Vec<OneCycle> = relations.iter().map(|r| one_cycle(f, r)).collect();
    let mut out = Vec::with_capacity(relations.len());
    for (i, rel) in relations.iter().enumerate() {
        let target: Vec<Rat> = cycles[i].coeffs.iter().map(|x| Rat::from(x.clone())).collect();
        let others: Vec<Vec<Rat>> = cycles
            .iter()
            .enumerate()
            .filter(|(j, c)| *j != i && !positively_proportional(&c.coeffs, &cycles[i].coeffs))
            .map(|(_, c)| c.coeffs.iter().map(|x| Rat::from(x.clone())).collect())
            .collect();
        let extremal = nonneg_combination(&others, &target).is_none();
        out.push((rel.clone(), extremal));
    }
    Ok(out)
}

pub fn extremal_collections(f: &Fan) -> Result<Vec<(PrimitiveCollection, bool)>> {
    Ok(extremal_relations(f)?
        .into_iter()
        .map(|(rel, ext)| (rel.collection, ext))
        .collect())
}

/// Classification by the sign pattern of all primitive-relation degrees.
pub fn positivity_class(f: &Fan) -> Result<PositivityClass> {
    let relations = all_relations(f)?;
    if relations.iter().all(|r| r.degree > Int::zero()) {
        Ok(PositivityClass::Fano)
    } else if relations.iter().all(|r| r.degree >= Int::zero()) {
        Ok(PositivityClass::WeakFanoNotFano)
    } else {
        Ok(PositivityClass::Neither)
    }
}

/// The primitive crepant contractions: extremal relations of degree zero.
pub fn crepant_relations(f: &Fan) -> Result<Vec<PrimitiveRelation>> {
    if positivity_class(f)? == PositivityClass::Neither {
        return Err(Error::NotWeakFano);
    }
    Ok(extremal_relations(f)?
        .into_iter()
        .filter(|(rel, extremal)| *extremal && rel.degree.is_zero())
        .map(|(rel, _)| rel)
        .collect())
}
