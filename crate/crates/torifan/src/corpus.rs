//! Built-in catalog of named fans: the 16 weak del Pezzo surfaces, the
//! Fano and weak Fano 3-folds, the 26 four-dimensional families, and a
//! few products kept separate from the main count.
//!
//! Entries are stored as construction recipes (explicit ray data, 2d ray
//! lists, products, bundles, star subdivisions) plus the relations and
//! classification data each fan is expected to reproduce. `verify_all`
//! recomputes everything and reports any disagreement.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::deform::{deformability, fingerprint, Deformability};
use crate::error::{Error, Result};
use crate::fan::{
    bundle_fan, fan_from_json, fan_from_rays_2d, isomorphism, product_fan, star_subdivision, Fan,
};
use crate::lattice::{vec_i64, Int, RayVector};
use crate::mori::{all_relations, crepant_relations, positivity_class, PositivityClass};
use crate::special::{is_special_weak_fano, SpecialDecision};

const EMBEDDED_FILES: &[(&str, &str)] = &[
    ("catalog.json", include_str!("../data/catalog.json")),
    ("fans/P1.json", include_str!("../data/fans/P1.json")),
    ("fans/D2.json", include_str!("../data/fans/D2.json")),
    ("fans/X30.json", include_str!("../data/fans/X30.json")),
    ("fans/X41.json", include_str!("../data/fans/X41.json")),
    ("fans/Z1.json", include_str!("../data/fans/Z1.json")),
    ("fans/Z14.json", include_str!("../data/fans/Z14.json")),
];

/// Environment variable naming a directory with `catalog.json` and `fans/`
/// that replaces the embedded data.
pub const CORPUS_DIR_VAR: &str = "TORIFAN_CORPUS_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    Base,
    Surface,
    Threefold,
    Fourfold,
    Product,
}

impl Section {
    pub fn as_str(self) -> &'static str {
        match self {
            Section::Base => "base",
            Section::Surface => "surface",
            Section::Threefold => "threefold",
            Section::Fourfold => "fourfold",
            Section::Product => "product",
        }
    }
}

/// Recipe for realizing a catalog fan. Names refer to other catalog entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Construction {
    Explicit { file: String },
    Surface2d { rays: Vec<Vec<i64>> },
    Product { a: String, b: String },
    Bundle { fiber: String, base: String, lifts: Vec<Vec<i64>> },
    StarSubdivide { base: String, rays: Vec<Vec<i64>> },
}

/// A relation the realized fan must reproduce exactly: the rays named in
/// `lhs` form a primitive collection whose relation has right-hand side
/// `rhs` (ray name, coefficient).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeclaredRelation {
    pub lhs: Vec<String>,
    pub rhs: Vec<(String, i64)>,
}

/// Classification data the realized fan must reproduce. `deformable` means
/// some crepant relation carries a certificate whose deformation rule
/// applies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Expected {
    pub positivity: String,
    pub special: bool,
    pub num_crepant: usize,
    pub deformable: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub section: Section,
    pub construction: Construction,
    #[serde(default)]
    pub ray_names: Vec<String>,
    #[serde(default)]
    pub relations: Vec<DeclaredRelation>,
    pub expected: Expected,
}

#[derive(Debug, Clone, Deserialize)]
struct CatalogFile {
    entries: Vec<CorpusEntry>,
}

/// The loaded catalog. Realized fans are memoized per corpus instance.
pub struct Corpus {
    entries: Vec<CorpusEntry>,
    by_key: BTreeMap<String, usize>,
    dir: Option<PathBuf>,
    cache: RefCell<BTreeMap<usize, Fan>>,
}

/// Lookup key: the name with the formatting characters `_`, `^`, `{`, `}`
/// removed, so "X_5^1" and "X51" resolve to the same entry.
fn normalize_name(name: &str) -> String {
    name.chars().filter(|c| !matches!(c, '_' | '^' | '{' | '}')).collect()
}

impl Corpus {
    /// Catalog from the data compiled into the library, unless the
    /// `TORIFAN_CORPUS_DIR` environment variable points at a replacement.
    pub fn builtin() -> Result<Corpus> {
        match std::env::var_os(CORPUS_DIR_VAR) {
            Some(dir) => Corpus::from_dir(PathBuf::from(dir)),
            None => Corpus::embedded(),
        }
    }

    pub fn embedded() -> Result<Corpus> {
        let text = embedded_file("catalog.json")?;
        Corpus::from_catalog_text(&text, None)
    }

    pub fn from_dir(dir: PathBuf) -> Result<Corpus> {
        let text = std::fs::read_to_string(dir.join("catalog.json"))?;
        Corpus::from_catalog_text(&text, Some(dir))
    }

    fn from_catalog_text(text: &str, dir: Option<PathBuf>) -> Result<Corpus> {
        let file: CatalogFile = serde_json::from_str(text)?;
        let mut by_key = BTreeMap::new();
        for (i, entry) in file.entries.iter().enumerate() {
            if by_key.insert(normalize_name(&entry.name), i).is_some() {
                return Err(Error::InvalidInput(format!(
                    "catalog name {} is not unique",
                    entry.name
                )));
            }
            let mut seen = BTreeSet::new();
            for n in &entry.ray_names {
                if !seen.insert(n.as_str()) {
                    return Err(Error::InvalidInput(format!(
                        "{}: ray name {n} repeats",
                        entry.name
                    )));
                }
            }
        }
        Ok(Corpus { entries: file.entries, by_key, dir, cache: RefCell::new(BTreeMap::new()) })
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn entry(&self, name: &str) -> Result<&CorpusEntry> {
        let idx = self
            .by_key
            .get(&normalize_name(name))
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        Ok(&self.entries[*idx])
    }

    /// Realizes the named fan, building any entries it depends on first.
    pub fn load(&self, name: &str) -> Result<Fan> {
        let idx = *self
            .by_key
            .get(&normalize_name(name))
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        let mut building = BTreeSet::new();
        self.realize(idx, &mut building)
    }

    fn realize(&self, idx: usize, building: &mut BTreeSet<usize>) -> Result<Fan> {
        if let Some(fan) = self.cache.borrow().get(&idx) {
            return Ok(fan.clone());
        }
        if !building.insert(idx) {
            return Err(Error::InvalidInput(format!(
                "catalog entry {} depends on itself",
                self.entries[idx].name
            )));
        }
        let entry = &self.entries[idx];
        let mut fan = match &entry.construction {
            Construction::Explicit { file } => fan_from_json(&self.file_text(file)?)?,
            Construction::Surface2d { rays } => fan_from_rays_2d(to_ray_vectors(rays))?,
            Construction::Product { a, b } => {
                let fa = self.realize_named(a, building)?;
                let fb = self.realize_named(b, building)?;
                product_fan(&fa, &fb)
            }
            Construction::Bundle { fiber, base, lifts } => {
                let ff = self.realize_named(fiber, building)?;
                let fb = self.realize_named(base, building)?;
                bundle_fan(&ff, &fb, &to_ray_vectors(lifts))?
            }
            Construction::StarSubdivide { base, rays } => {
                let mut f = self.realize_named(base, building)?;
                for r in rays {
                    f = star_subdivision(&f, &vec_i64(r))?;
                }
                f
            }
        };
        building.remove(&idx);
        fan.name = Some(entry.name.clone());
        if !entry.ray_names.is_empty() && entry.ray_names.len() != fan.rays.len() {
            return Err(Error::InvalidInput(format!(
                "{}: {} ray names for {} rays",
                entry.name,
                entry.ray_names.len(),
                fan.rays.len()
            )));
        }
        self.cache.borrow_mut().insert(idx, fan.clone());
        Ok(fan)
    }

    fn realize_named(&self, name: &str, building: &mut BTreeSet<usize>) -> Result<Fan> {
        let idx = *self
            .by_key
            .get(&normalize_name(name))
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        self.realize(idx, building)
    }

    fn file_text(&self, rel: &str) -> Result<String> {
        match &self.dir {
            Some(dir) => Ok(std::fs::read_to_string(dir.join(rel))?),
            None => embedded_file(rel),
        }
    }

    /// Searches the catalog for an entry isomorphic to the given fan.
    /// Fingerprints prefilter; candidates get the full isomorphism search.
    pub fn identify(&self, fan: &Fan) -> Result<Option<String>> {
        let target = fingerprint(fan)?;
        for (idx, entry) in self.entries.iter().enumerate() {
            let candidate = {
                let mut building = BTreeSet::new();
                self.realize(idx, &mut building)?
            };
            if candidate.dim != fan.dim || candidate.rays.len() != fan.rays.len() {
                continue;
            }
            if fingerprint(&candidate)? != target {
                continue;
            }
            if isomorphism(fan, &candidate).is_some() {
                return Ok(Some(entry.name.clone()));
            }
        }
        Ok(None)
    }

    /// Recomputes every entry and checks it against its recorded data.
    /// Failures are collected, not returned as errors, so one bad entry
    /// cannot hide the rest of the report.
    pub fn verify_all(&self) -> Result<VerifyAllReport> {
        let mut report = VerifyAllReport {
            entries: Vec::new(),
            fano_surfaces: Vec::new(),
            isomorphic_pairs: Vec::new(),
            counts: Counts { surfaces: 0, fourfolds: 0, nondeformable: 0 },
            failures: Vec::new(),
        };
        let mut realized: Vec<Option<Fan>> = vec![None; self.entries.len()];
        for (idx, entry) in self.entries.iter().enumerate() {
            match self.check_entry(idx) {
                Ok((fan, entry_report, mut entry_failures)) => {
                    report.failures.append(&mut entry_failures);
                    if entry.section == Section::Surface {
                        report.counts.surfaces += 1;
                        if entry_report.positivity == "Fano" {
                            report.fano_surfaces.push(entry.name.clone());
                        }
                    }
                    if entry.section == Section::Fourfold {
                        report.counts.fourfolds += 1;
                        if !entry_report.deformable {
                            report.counts.nondeformable += 1;
                        }
                    }
                    report.entries.push(entry_report);
                    realized[idx] = Some(fan);
                }
                Err(e) => {
                    report.failures.push(format!("{}: {e}", entry.name));
                }
            }
        }
        self.check_pairwise_distinct(&realized, &mut report)?;
        Ok(report)
    }

    fn check_entry(&self, idx: usize) -> Result<(Fan, EntryReport, Vec<String>)> {
        let entry = &self.entries[idx];
        let name = &entry.name;
        let mut failures = Vec::new();
        let fan = {
            let mut building = BTreeSet::new();
            self.realize(idx, &mut building)?
        };
        if !fan.is_smooth() {
            failures.push(format!("{name}: fan is not smooth"));
        }
        if !fan.is_complete() {
            failures.push(format!("{name}: fan is not complete"));
        }
        let positivity = positivity_class(&fan)?;
        let mut special = false;
        let mut num_crepant = 0;
        let mut deformable = false;
        if positivity == PositivityClass::Neither {
            failures.push(format!("{name}: fan is not weak Fano"));
        } else {
            let special_report = is_special_weak_fano(&fan)?;
            special = special_report.special_weak_fano;
            num_crepant = crepant_relations(&fan)?.len();
            for (_, decision) in &special_report.decisions {
                if let SpecialDecision::Special(cert) = decision {
                    if matches!(deformability(&fan, cert), Deformability::Applicable { .. }) {
                        deformable = true;
                    }
                }
            }
        }
        let relations_ok = self.check_declared_relations(entry, &fan, &mut failures)?;
        let expected = &entry.expected;
        let expected_positivity: PositivityClass = expected.positivity.parse()?;
        let mut expected_ok = true;
        if positivity != expected_positivity {
            expected_ok = false;
            failures.push(format!(
                "{name}: positivity {positivity}, recorded {}",
                expected.positivity
            ));
        }
        if special != expected.special {
            expected_ok = false;
            failures.push(format!("{name}: special {special}, recorded {}", expected.special));
        }
        if num_crepant != expected.num_crepant {
            expected_ok = false;
            failures.push(format!(
                "{name}: {num_crepant} crepant relations, recorded {}",
                expected.num_crepant
            ));
        }
        if deformable != expected.deformable {
            expected_ok = false;
            failures.push(format!(
                "{name}: deformable {deformable}, recorded {}",
                expected.deformable
            ));
        }
        let entry_report = EntryReport {
            name: name.clone(),
            section: entry.section.as_str().to_string(),
            dim: fan.dim,
            num_rays: fan.rays.len(),
            num_max_cones: fan.max_cones.len(),
            positivity: positivity.to_string(),
            special,
            num_crepant,
            deformable,
            relations_declared: entry.relations.len(),
            relations_ok,
            expected_ok,
        };
        Ok((fan, entry_report, failures))
    }

    fn check_declared_relations(
        &self,
        entry: &CorpusEntry,
        fan: &Fan,
        failures: &mut Vec<String>,
    ) -> Result<bool> {
        if entry.relations.is_empty() {
            return Ok(true);
        }
        let name = &entry.name;
        if entry.ray_names.len() != fan.rays.len() {
            failures.push(format!("{name}: declared relations but no full ray naming"));
            return Ok(false);
        }
        let index_of: BTreeMap<&str, usize> =
            entry.ray_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let computed = all_relations(fan)?;
        let mut ok = true;
        for declared in &entry.relations {
            let mut lhs = Vec::new();
            let mut resolved = true;
            for n in &declared.lhs {
                match index_of.get(n.as_str()) {
                    Some(&i) => lhs.push(i),
                    None => {
                        failures.push(format!("{name}: unknown ray name {n}"));
                        resolved = false;
                    }
                }
            }
            if !resolved {
                ok = false;
                continue;
            }
            lhs.sort_unstable();
            let mut declared_rhs: BTreeMap<usize, Int> = BTreeMap::new();
            for (n, c) in &declared.rhs {
                match index_of.get(n.as_str()) {
                    Some(&i) => {
                        declared_rhs.insert(i, Int::from(*c));
                    }
                    None => {
                        failures.push(format!("{name}: unknown ray name {n}"));
                        resolved = false;
                    }
                }
            }
            if !resolved {
                ok = false;
                continue;
            }
            let found = computed.iter().find(|rel| rel.collection.rays == lhs);
            let label = || declared.lhs.join("+");
            match found {
                None => {
                    ok = false;
                    failures.push(format!("{name}: {} is not a primitive collection", label()));
                }
                Some(rel) => {
                    let computed_rhs: BTreeMap<usize, Int> = rel
                        .sigma_rays
                        .iter()
                        .cloned()
                        .zip(rel.coefficients.iter().cloned())
                        .collect();
                    if computed_rhs != declared_rhs {
                        ok = false;
                        failures.push(format!(
                            "{name}: relation for {} differs from the declared one",
                            label()
                        ));
                    }
                }
            }
        }
        Ok(ok)
    }

    /// Within each dimension, any two entries with equal fingerprints get
    /// the full isomorphism search; coinciding pairs are reported.
    fn check_pairwise_distinct(
        &self,
        realized: &[Option<Fan>],
        report: &mut VerifyAllReport,
    ) -> Result<()> {
        let mut prints: Vec<Option<crate::deform::Fingerprint>> = vec![None; realized.len()];
        for (i, fan) in realized.iter().enumerate() {
            if let Some(f) = fan {
                prints[i] = Some(fingerprint(f)?);
            }
        }
        for i in 0..realized.len() {
            let (Some(fi), Some(pi)) = (&realized[i], &prints[i]) else { continue };
            for j in i + 1..realized.len() {
                let (Some(fj), Some(pj)) = (&realized[j], &prints[j]) else { continue };
                if fi.dim != fj.dim || pi != pj {
                    continue;
                }
                if isomorphism(fi, fj).is_some() {
                    let pair = (self.entries[i].name.clone(), self.entries[j].name.clone());
                    report
                        .failures
                        .push(format!("{} and {} are isomorphic", pair.0, pair.1));
                    report.isomorphic_pairs.push(pair);
                }
            }
        }
        Ok(())
    }
}

fn embedded_file(rel: &str) -> Result<String> {
    EMBEDDED_FILES
        .iter()
        .find(|(name, _)| *name == rel)
        .map(|(_, text)| (*text).to_string())
        .ok_or_else(|| Error::InvalidInput(format!("no embedded corpus file {rel}")))
}

fn to_ray_vectors(rows: &[Vec<i64>]) -> Vec<RayVector> {
    rows.iter().map(|r| vec_i64(r)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyAllReport {
    pub entries: Vec<EntryReport>,
    pub fano_surfaces: Vec<String>,
    pub isomorphic_pairs: Vec<(String, String)>,
    pub counts: Counts,
    pub failures: Vec<String>,
}

impl VerifyAllReport {
    pub fn clean(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub section: String,
    pub dim: usize,
    pub num_rays: usize,
    pub num_max_cones: usize,
    pub positivity: String,
    pub special: bool,
    pub num_crepant: usize,
    pub deformable: bool,
    pub relations_declared: usize,
    pub relations_ok: bool,
    pub expected_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counts {
    pub surfaces: usize,
    pub fourfolds: usize,
    pub nondeformable: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vec_i64;

    #[test]
    fn sections_have_the_advertised_sizes() {
        let corpus = Corpus::embedded().unwrap();
        let count = |s: Section| corpus.entries().iter().filter(|e| e.section == s).count();
        assert_eq!(count(Section::Base), 1);
        assert_eq!(count(Section::Surface), 16);
        assert_eq!(count(Section::Threefold), 13);
        assert_eq!(count(Section::Fourfold), 26);
        assert_eq!(count(Section::Product), 4);
    }

    #[test]
    fn formatted_aliases_resolve() {
        let corpus = Corpus::embedded().unwrap();
        let a = corpus.load("X_5^1").unwrap();
        let b = corpus.load("X51").unwrap();
        assert_eq!(a, b);
        assert_eq!(corpus.load("W_4^1").unwrap(), corpus.load("W41").unwrap());
    }

    #[test]
    fn unknown_names_are_reported() {
        let corpus = Corpus::embedded().unwrap();
        match corpus.load("nonsense") {
            Err(Error::UnknownName(n)) => assert_eq!(n, "nonsense"),
            other => panic!("expected UnknownName, got {other:?}"),
        }
    }

    #[test]
    fn degree_two_bundle_over_the_plane_is_z1() {
        let corpus = Corpus::embedded().unwrap();
        let fiber = corpus.load("F2").unwrap();
        let base = corpus.load("P2").unwrap();
        let lifts = vec![vec_i64(&[0, 1]), vec_i64(&[0, 0]), vec_i64(&[0, 0])];
        let bundle = bundle_fan(&fiber, &base, &lifts).unwrap();
        let z1 = corpus.load("Z1").unwrap();
        assert!(isomorphism(&bundle, &z1).is_some());
    }

    #[test]
    fn z14_is_a_double_point_bundle_over_b3() {
        let corpus = Corpus::embedded().unwrap();
        let b3 = corpus.load("B3").unwrap();
        let center = b3.rays[3].clone();
        let lifts = vec![center.clone(), center];
        let bundle = bundle_fan(&b3, &corpus.load("P1").unwrap(), &lifts).unwrap();
        let z14 = corpus.load("Z14").unwrap();
        assert!(isomorphism(&bundle, &z14).is_some());
    }

    #[test]
    fn identify_recognizes_relabeled_fans() {
        let corpus = Corpus::embedded().unwrap();
        let mut f2 = corpus.load("F2").unwrap();
        f2.name = None;
        f2.rays.reverse();
        for cone in &mut f2.max_cones {
            for r in &mut cone.rays {
                *r = 3 - *r;
            }
            cone.rays.sort_unstable();
        }
        assert_eq!(corpus.identify(&f2).unwrap(), Some("F2".to_string()));
    }
}
