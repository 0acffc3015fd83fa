//! Acceptance checklist for the crate. Every test prints exactly one
//! pass/fail line, so `cargo test --test acceptance -- --nocapture` gives a
//! one-line-per-criterion summary of the whole suite.

use std::collections::BTreeSet;
use std::time::Instant;

use torifan::corpus::{Corpus, Section};
use torifan::deform::{deform, deformability, degree_matrix, Deformability, DeformationResult};
use torifan::fan::{isomorphism, Fan};
use torifan::lattice::{hnf, vec_i64, IntMatrix};
use torifan::mori::{
    all_relations, crepant_relations, extremal_relations, one_cycle, positivity_class,
    primitive_collections, primitive_collections_brute_force, PositivityClass, PrimitiveRelation,
};
use torifan::special::{
    interior_ray_property, is_special_contraction, is_special_weak_fano, s1_s2_split,
    bundle_split, ContractionCertificate, SpecialDecision,
};

fn criterion(number: u32, label: &str, check: impl FnOnce() -> Result<(), String>) {
    match check() {
        Ok(()) => println!("criterion {number:02} {label}: PASS"),
        Err(why) => {
            println!("criterion {number:02} {label}: FAIL ({why})");
            panic!("criterion {number:02} {label}: {why}");
        }
    }
}

fn corpus() -> Corpus {
    Corpus::builtin().expect("corpus loads")
}

fn section_names(corpus: &Corpus, section: Section) -> Vec<String> {
    corpus
        .entries()
        .iter()
        .filter(|e| e.section == section)
        .map(|e| e.name.clone())
        .collect()
}

/// Certified crepant contractions of `f`, with their relation index.
fn certificates(f: &Fan) -> Vec<(usize, ContractionCertificate)> {
    crepant_relations(f)
        .expect("crepant relations")
        .iter()
        .enumerate()
        .filter_map(|(i, rel)| match is_special_contraction(f, rel).expect("decision") {
            SpecialDecision::Special(cert) => Some((i, *cert)),
            SpecialDecision::NotSpecial(_) => None,
        })
        .collect()
}

type RelationKey = (Vec<usize>, Vec<(usize, i64)>);

fn relation_key(rel: &PrimitiveRelation) -> RelationKey {
    let mut collection = rel.collection.rays.clone();
    collection.sort_unstable();
    let mut sigma: Vec<(usize, i64)> = rel
        .sigma_rays
        .iter()
        .zip(&rel.coefficients)
        .map(|(&r, a)| (r, i64::try_from(a).expect("small coefficient")))
        .collect();
    sigma.sort_unstable();
    (collection, sigma)
}

fn relation_set(f: &Fan) -> BTreeSet<RelationKey> {
    all_relations(f).expect("relations").iter().map(relation_key).collect()
}

fn keys(raw: &[(&[usize], &[(usize, i64)])]) -> BTreeSet<RelationKey> {
    raw.iter().map(|(c, s)| (c.to_vec(), s.to_vec())).collect()
}

#[test]
fn criterion_01_surface_table() {
    criterion(1, "surface table", || {
        let start = Instant::now();
        let corpus = corpus();
        let names = section_names(&corpus, Section::Surface);
        if names.len() != 16 {
            return Err(format!("expected 16 surfaces, found {}", names.len()));
        }
        let mut fano = BTreeSet::new();
        for name in &names {
            let f = corpus.load(name).map_err(|e| format!("{name}: {e}"))?;
            if !f.is_smooth() {
                return Err(format!("{name} is not smooth"));
            }
            if !f.is_complete() {
                return Err(format!("{name} is not complete"));
            }
            match positivity_class(&f).map_err(|e| format!("{name}: {e}"))? {
                PositivityClass::Fano => {
                    fano.insert(name.clone());
                }
                PositivityClass::WeakFanoNotFano => {}
                PositivityClass::Neither => {
                    return Err(format!("{name} is not weak Fano"));
                }
            }
        }
        let expected: BTreeSet<String> =
            ["P2", "P1xP1", "F1", "S7", "S6"].iter().map(|s| s.to_string()).collect();
        if fano != expected {
            return Err(format!("Fano sublist {fano:?} differs from {expected:?}"));
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 1.0 {
            return Err(format!("took {elapsed:?}, budget is 1 s"));
        }
        Ok(())
    });
}

#[test]
fn criterion_02_fourfold_classification() {
    criterion(2, "fourfold classification", || {
        let start = Instant::now();
        let corpus = corpus();
        let names = section_names(&corpus, Section::Fourfold);
        if names.len() != 26 {
            return Err(format!("expected 26 fourfolds, found {}", names.len()));
        }
        let fans: Vec<Fan> = names
            .iter()
            .map(|n| corpus.load(n))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let mut not_special = Vec::new();
        for (name, f) in names.iter().zip(&fans) {
            let report = is_special_weak_fano(f).map_err(|e| format!("{name}: {e}"))?;
            if !report.special_weak_fano {
                let why = report
                    .decisions
                    .iter()
                    .find_map(|(rel, decision)| match decision {
                        SpecialDecision::NotSpecial(failure) => {
                            Some(format!("relation {:?}: {failure}", rel.collection.rays))
                        }
                        SpecialDecision::Special(_) => None,
                    })
                    .unwrap_or_else(|| format!("positivity is {:?}", report.positivity));
                not_special.push(format!("{name} ({why})"));
            }
        }
        let mut checks = 0usize;
        for i in 0..fans.len() {
            for j in i + 1..fans.len() {
                checks += 1;
                if isomorphism(&fans[i], &fans[j]).is_some() {
                    return Err(format!("{} and {} are isomorphic", names[i], names[j]));
                }
            }
        }
        if checks != 325 {
            return Err(format!("ran {checks} isomorphism checks instead of 325"));
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 300.0 {
            return Err(format!("took {elapsed:?}, budget is 5 min"));
        }
        if !not_special.is_empty() {
            return Err(format!("not special weak Fano: {}", not_special.join("; ")));
        }
        Ok(())
    });
}

#[test]
fn criterion_03_z1_golden_data() {
    criterion(3, "Z1 golden data", || {
        let corpus = corpus();
        let f = corpus.load("Z1").map_err(|e| e.to_string())?;
        // ray order: x, x1, x2, x3, y1, y2, y3
        let expected = keys(&[
            (&[1, 2], &[(0, 2)]),
            (&[0, 3], &[]),
            (&[4, 5, 6], &[(1, 1), (3, 1)]),
        ]);
        let got = relation_set(&f);
        if got != expected {
            return Err(format!("relations {got:?} differ from {expected:?}"));
        }
        let certs = certificates(&f);
        let [(_, cert)] = certs.as_slice() else {
            return Err(format!("expected one certified contraction, got {}", certs.len()));
        };
        if cert.m != vec_i64(&[1, 0, 0, 0]) {
            return Err(format!("certificate m is {:?}, expected first projection", cert.m));
        }
        let published = IntMatrix::from_rows(&[
            vec_i64(&[-2, 1, 1, 0, 0, 0, 0]),
            vec_i64(&[1, 0, 0, 1, 0, 0, 0]),
            vec_i64(&[1, -1, 0, 0, 1, 1, 1]),
        ]);
        if hnf(&degree_matrix(&f)).0 != hnf(&published).0 {
            return Err("degree matrix row space differs from the published one".into());
        }
        Ok(())
    });
}

fn deform_once(f: &Fan, rel_index: usize) -> Result<DeformationResult, String> {
    let certs = certificates(f);
    let (_, cert) = certs
        .iter()
        .find(|(i, _)| *i == rel_index)
        .ok_or_else(|| format!("relation {rel_index} is not certified"))?;
    deform(f, cert).map_err(|e| e.to_string())
}

#[test]
fn criterion_04_z1_deformation() {
    criterion(4, "Z1 deformation", || {
        let corpus = corpus();
        let f = corpus.load("Z1").map_err(|e| e.to_string())?;
        let result = deform_once(&f, 0)?;
        if result.new_ray != vec_i64(&[1, -1, 0, 0]) {
            return Err(format!("new ray is {:?}, expected (1,-1,0,0)", result.new_ray));
        }
        let expected = keys(&[
            (&[1, 2], &[]),
            (&[0, 3], &[]),
            (&[4, 5, 6], &[(1, 1), (3, 1)]),
        ]);
        let got = relation_set(&result.deformed);
        if got != expected {
            return Err(format!("relations {got:?} differ from {expected:?}"));
        }
        if result.positivity != PositivityClass::Fano {
            return Err(format!("positivity is {:?}, expected Fano", result.positivity));
        }
        Ok(())
    });
}

#[test]
fn criterion_05_z14_deformation() {
    criterion(5, "Z14 deformation", || {
        let corpus = corpus();
        let f = corpus.load("Z14").map_err(|e| e.to_string())?;
        let result = deform_once(&f, 0)?;
        if result.new_ray != vec_i64(&[1, -1, 1, 0]) {
            return Err(format!("new ray is {:?}, expected (1,-1,1,0)", result.new_ray));
        }
        // ray order: x, x1, x2, y1, y2, y3, z
        let expected = keys(&[
            (&[1, 2], &[(3, 1)]),
            (&[3, 4, 5], &[]),
            (&[0, 6], &[(3, 1)]),
        ]);
        let got = relation_set(&result.deformed);
        if got != expected {
            return Err(format!("relations {got:?} differ from {expected:?}"));
        }
        if result.positivity != PositivityClass::Fano {
            return Err(format!("positivity is {:?}, expected Fano", result.positivity));
        }
        Ok(())
    });
}

/// All successful deformations of `f`, one per certified applicable relation.
fn all_deforms(f: &Fan) -> Vec<DeformationResult> {
    certificates(f)
        .into_iter()
        .filter_map(|(_, cert)| deform(f, &cert).ok())
        .collect()
}

#[test]
fn criterion_06_deformation_identities() {
    criterion(6, "deformation identities", || {
        let corpus = corpus();
        let check_target = |source: &str, target: &str| -> Result<Fan, String> {
            let f = corpus.load(source).map_err(|e| e.to_string())?;
            let t = corpus.load(target).map_err(|e| e.to_string())?;
            all_deforms(&f)
                .into_iter()
                .find(|r| isomorphism(&r.deformed, &t).is_some())
                .map(|r| r.deformed)
                .ok_or_else(|| format!("no deformation of {source} is isomorphic to {target}"))
        };
        let d12 = check_target("Z12", "Z19")?;
        check_target("Z13", "Z24")?;
        let z19 = corpus.load("Z19").map_err(|e| e.to_string())?;
        let chain_left = all_deforms(&d12);
        let chain_right = all_deforms(&z19);
        let consistent = chain_left.iter().any(|a| {
            chain_right.iter().any(|b| isomorphism(&a.deformed, &b.deformed).is_some())
        });
        if !consistent {
            return Err("deform(deform(Z12)) does not match deform(Z19)".into());
        }
        Ok(())
    });
}

#[test]
fn criterion_07_non_deformable_set() {
    criterion(7, "non-deformable set", || {
        let corpus = corpus();
        let mut blocked = BTreeSet::new();
        for name in section_names(&corpus, Section::Fourfold) {
            let f = corpus.load(&name).map_err(|e| e.to_string())?;
            for (_, cert) in certificates(&f) {
                match deformability(&f, &cert) {
                    Deformability::TooManyPositive { .. } => {
                        blocked.insert(name.clone());
                    }
                    Deformability::Applicable { .. } => {}
                    other => {
                        return Err(format!("{name}: unexpected deformability {other:?}"));
                    }
                }
            }
        }
        let expected: BTreeSet<String> =
            ["Z18", "Z21", "Z23", "Z25", "Z26"].iter().map(|s| s.to_string()).collect();
        if blocked != expected {
            return Err(format!("blocked set {blocked:?} differs from {expected:?}"));
        }
        Ok(())
    });
}

#[test]
fn criterion_08_interior_ray_property() {
    criterion(8, "interior ray property", || {
        let corpus = corpus();
        let mut special_count = 0usize;
        for entry in corpus.entries() {
            let name = &entry.name;
            let f = corpus.load(name).map_err(|e| format!("{name}: {e}"))?;
            let report = is_special_weak_fano(&f).map_err(|e| format!("{name}: {e}"))?;
            if !report.special_weak_fano {
                continue;
            }
            special_count += 1;
            if let Some((a, b)) = interior_ray_property(&f).map_err(|e| format!("{name}: {e}"))? {
                return Err(format!("{name}: collection {{{a}, {b}}} violates the property"));
            }
        }
        if special_count == 0 {
            return Err("no special weak Fano entries in the corpus".into());
        }
        Ok(())
    });
}

#[test]
fn criterion_09_structure_dichotomy() {
    criterion(9, "structure dichotomy", || {
        let corpus = corpus();
        let image_table: &[(&str, &str)] = &[
            ("Z1", "P2"),
            ("Z2", "P2"),
            ("Z3", "P2"),
            ("Z4", "P2"),
            ("Z5", "P2"),
            ("Z6", "P2"),
            ("Z7", "P1xP1"),
            ("Z8", "P1xP1"),
            ("Z9", "P1xP1"),
            ("Z10", "F1"),
            ("Z11", "F1"),
            ("Z12", "F2"),
            ("Z13", "F2"),
            ("Z14", "P2"),
            ("Z15", "F1"),
            ("Z16", "F1"),
            ("Z17", "F1"),
            ("Z18", "P2"),
            ("Z19", "S7"),
            ("Z20", "S7"),
            ("Z21", "F1"),
            ("Z22", "S7"),
            ("Z23", "F1"),
            ("Z24", "S6"),
            ("Z25", "F2"),
            ("Z26", "F1"),
        ];
        for (name, phi) in image_table {
            let f = corpus.load(name).map_err(|e| e.to_string())?;
            let split = bundle_split(&f).map_err(|e| format!("{name}: {e}"))?;
            let bundle_arm = match &split {
                Some(b) => {
                    let fiber = corpus.identify(&b.fiber).map_err(|e| e.to_string())?;
                    let base = corpus.identify(&b.base).map_err(|e| e.to_string())?;
                    matches!(fiber.as_deref(), Some("F2" | "W3" | "W41"))
                        && base.as_deref() == Some(phi)
                }
                None => false,
            };
            let collections = primitive_collections(&f);
            for (ri, cert) in certificates(&f) {
                s1_s2_split(&f, &cert).map_err(|e| format!("{name} rel{ri}: {e}"))?;
                let pair = &cert.relation.collection.rays;
                let meets_other = collections
                    .iter()
                    .any(|c| c.rays != *pair && c.rays.iter().any(|r| pair.contains(r)));
                if !bundle_arm && meets_other {
                    return Err(format!(
                        "{name} rel{ri}: no qualifying bundle and another collection meets the pair"
                    ));
                }
            }
        }
        Ok(())
    });
}

/// Cross-multiplied check that `c` is a positive rational multiple of `t`.
fn positively_proportional(c: &[i64], t: &[i64]) -> bool {
    let Some(k) = t.iter().position(|v| *v != 0) else {
        return false;
    };
    if c[k] == 0 || (c[k] > 0) != (t[k] > 0) {
        return false;
    }
    c.iter().zip(t).all(|(ci, ti)| ci * t[k] == ti * c[k])
}

fn det_i128(mat: &mut [Vec<i128>]) -> i128 {
    let n = mat.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| mat[i][k] != 0) else {
            return 0;
        };
        if p != k {
            mat.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) / prev;
            }
            mat[i][k] = 0;
        }
        prev = mat[k][k];
    }
    sign * prev
}

/// Whether `target` is a nonnegative rational combination of the linearly
/// independent subset `subset` of `others`, decided by Cramer's rule over the
/// integers: with d = det of a square pivot system and d_i the determinant
/// with column i replaced, the combination exists iff every original row
/// satisfies sum(col_i * d_i) = target * d and every d_i has the sign of d.
fn rank_i128(mut a: Vec<Vec<i128>>) -> usize {
    let h = a.len();
    if h == 0 {
        return 0;
    }
    let w = a[0].len();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..w {
        let Some(p) = (rank..h).find(|&i| a[i][col] != 0) else { continue };
        a.swap(rank, p);
        for i in rank + 1..h {
            for j in col + 1..w {
                a[i][j] = (a[i][j] * a[rank][col] - a[i][col] * a[rank][j]) / prev;
            }
            a[i][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
        if rank == h {
            break;
        }
    }
    rank
}

fn subset_solves(others: &[Vec<i64>], subset: &[usize], target: &[i64]) -> bool {
    let k = subset.len();
    let m = target.len();
    // choose k rows with nonsingular square system by incremental rank checks
    let mut rows: Vec<usize> = Vec::new();
    let mut work: Vec<Vec<i128>> = Vec::new();
    for r in 0..m {
        if rows.len() == k {
            break;
        }
        let cand: Vec<i128> = subset.iter().map(|&c| i128::from(others[c][r])).collect();
        let mut probe = work.clone();
        probe.push(cand);
        if rank_i128(probe.clone()) > work.len() {
            work = probe;
            rows.push(r);
        }
    }
    if rows.len() < k {
        return false;
    }
    let base: Vec<Vec<i128>> =
        rows.iter().map(|&r| subset.iter().map(|&c| i128::from(others[c][r])).collect()).collect();
    let d = det_i128(&mut base.clone());
    if d == 0 {
        return false;
    }
    let mut dets = Vec::with_capacity(k);
    for i in 0..k {
        let mut m2 = base.clone();
        for (row, &r) in m2.iter_mut().zip(&rows) {
            row[i] = i128::from(target[r]);
        }
        let di = det_i128(&mut m2);
        if di != 0 && (di > 0) != (d > 0) {
            return false;
        }
        dets.push(di);
    }
    (0..m).all(|r| {
        let lhs: i128 = subset
            .iter()
            .zip(&dets)
            .map(|(&c, di)| i128::from(others[c][r]) * di)
            .sum();
        lhs == i128::from(target[r]) * d
    })
}

fn search_subsets(
    others: &[Vec<i64>],
    target: &[i64],
    subset: &mut Vec<usize>,
    start: usize,
    size: usize,
) -> bool {
    if subset.len() == size {
        return subset_solves(others, subset, target);
    }
    for i in start..others.len() {
        subset.push(i);
        if search_subsets(others, target, subset, i + 1, size) {
            return true;
        }
        subset.pop();
    }
    false
}

/// Exhaustive Caratheodory search: `target` lies in the cone of `others`
/// iff some linearly independent subset of size at most `rho` solves it.
fn in_nonneg_cone(others: &[Vec<i64>], target: &[i64], rho: usize) -> bool {
    for size in 1..=rho.min(others.len()) {
        if search_subsets(others, target, &mut Vec::new(), 0, size) {
            return true;
        }
    }
    false
}

#[test]
fn criterion_10_oracle_equivalence() {
    criterion(10, "oracle equivalence", || {
        let corpus = corpus();
        for entry in corpus.entries() {
            let name = &entry.name;
            let f = corpus.load(name).map_err(|e| format!("{name}: {e}"))?;
            if f.rays.len() <= 10 {
                let mut fast: Vec<Vec<usize>> =
                    primitive_collections(&f).into_iter().map(|c| c.rays).collect();
                let mut brute: Vec<Vec<usize>> =
                    primitive_collections_brute_force(&f).into_iter().map(|c| c.rays).collect();
                fast.sort();
                brute.sort();
                if fast != brute {
                    return Err(format!("{name}: collection enumerations disagree"));
                }
            }
            let rho = f.rays.len() - f.dim;
            if rho > 6 {
                continue;
            }
            let relations = all_relations(&f).map_err(|e| format!("{name}: {e}"))?;
            let cycles: Vec<Vec<i64>> = relations
                .iter()
                .map(|rel| {
                    one_cycle(&f, rel)
                        .coeffs
                        .iter()
                        .map(|v| i64::try_from(v).expect("small cycle entry"))
                        .collect()
                })
                .collect();
            let flags = extremal_relations(&f).map_err(|e| format!("{name}: {e}"))?;
            for (i, (rel, extremal)) in flags.iter().enumerate() {
                let others: Vec<Vec<i64>> = cycles
                    .iter()
                    .enumerate()
                    .filter(|(j, c)| *j != i && !positively_proportional(c, &cycles[i]))
                    .map(|(_, c)| c.clone())
                    .collect();
                let oracle = !in_nonneg_cone(&others, &cycles[i], rho);
                if oracle != *extremal {
                    return Err(format!(
                        "{name}: relation {:?} extremality {extremal} disagrees with oracle",
                        rel.collection.rays
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_11_deterministic_output() {
    criterion(11, "deterministic output", || {
        let run = || -> Result<String, String> {
            let argv: Vec<String> = ["torifan", "corpus", "verify-all", "--json"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let outcome = torifan::cli::execute(&argv);
            serde_json::to_string_pretty(&outcome.report).map_err(|e| e.to_string())
        };
        let first = run()?;
        let second = run()?;
        if first != second {
            return Err("consecutive runs differ".into());
        }
        if first.is_empty() {
            return Err("verify-all produced no output".into());
        }
        Ok(())
    });
}
