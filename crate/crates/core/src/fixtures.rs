//! The bundled fixture set and the code spec document format.
//!
//! Bundled files are compiled into the binary and checked against the
//! SHA-256 digests in `MANIFEST.json`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::code::{
    build_phi, constraint_code, generated_code, ideal_power_code, kernel_code, Code, Morphism, Word,
};
use crate::decoder::{build_coset_table, CosetTable};
use crate::elem::Elem;
use crate::error::{Result, TgsError};
use crate::ideal::{IdealMode, KIdeal};
use crate::quotient::build_quotient;
use crate::tgs::Tgs;

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../../fixtures/", $name)))),*]
    };
}

/// `(file name, contents)` for every bundled fixture, sorted by name.
pub const BUNDLE: &[(&str, &str)] = bundled!(
    "M3.json",
    "M3xM3.json",
    "P3.json",
    "chain2-kernel.json",
    "chain2.json",
    "diamond.json",
    "m3-power-n1.json",
    "m3-power-n2.json",
    "m3-power.json",
    "repetition.json",
);

pub const MANIFEST: &str = include_str!("../../../fixtures/MANIFEST.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: u32,
    /// File name to lowercase hex SHA-256.
    pub files: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn manifest() -> Manifest {
    serde_json::from_str(MANIFEST).expect("bundled manifest parses")
}

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLE.iter().find(|(n, _)| *n == name).map(|(_, c)| *c)
}

/// Checks every bundled file against the manifest, and the manifest against
/// the bundle.
pub fn verify_bundle() -> Result<()> {
    let m = manifest();
    if m.files.len() != BUNDLE.len() {
        return Err(TgsError::Malformed(format!(
            "manifest lists {} files, bundle has {}",
            m.files.len(),
            BUNDLE.len()
        )));
    }
    for (name, contents) in BUNDLE {
        let want = m
            .files
            .get(*name)
            .ok_or_else(|| TgsError::Malformed(format!("`{name}` missing from manifest")))?;
        let got = sha256_hex(contents.as_bytes());
        if *want != got {
            return Err(TgsError::Malformed(format!(
                "checksum mismatch for `{name}`: {got} != {want}"
            )));
        }
    }
    Ok(())
}

/// Writes the bundle and its manifest into `dir`, returning the paths.
pub fn export_bundle(dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, contents) in BUNDLE.iter().copied().chain([("MANIFEST.json", MANIFEST)]) {
        let path = dir.join(name);
        fs::write(&path, contents)?;
        written.push(path);
    }
    Ok(written)
}

fn bundled_tgs(name: &str) -> Tgs {
    Tgs::from_json(bundled(name).expect("bundled fixture exists")).expect("bundled fixture parses")
}

/// Chain `0 < a < 1`, max and min.
pub fn m3() -> Tgs {
    bundled_tgs("M3.json")
}

/// The literal three-element table; not monotone.
pub fn p3() -> Tgs {
    bundled_tgs("P3.json")
}

pub fn chain2() -> Tgs {
    bundled_tgs("chain2.json")
}

pub fn m3xm3() -> Tgs {
    bundled_tgs("M3xM3.json")
}

/// The five-element diamond lattice with the zero ternary product.
pub fn diamond() -> Tgs {
    bundled_tgs("diamond.json")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    IdealPower,
    Constraint,
    Kernel,
    Generated,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::IdealPower => "ideal-power",
            Construction::Constraint => "constraint",
            Construction::Kernel => "kernel",
            Construction::Generated => "generated",
        }
    }
}

/// JSON description of a code. `tgs` is a path relative to the spec's own
/// directory, or the name of a bundled structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub tgs: String,
    pub construction: Construction,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<String>>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<String>>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<String>>>,
}

impl CodeSpec {
    pub fn from_json(text: &str) -> Result<CodeSpec> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Loads `path` and resolves its structure relative to the file.
    pub fn load(path: &Path, mode: IdealMode) -> Result<ResolvedCodeSpec> {
        let spec = CodeSpec::from_json(&fs::read_to_string(path)?)?;
        spec.resolve(path.parent(), mode)
    }

    pub fn load_tgs(&self, base: Option<&Path>) -> Result<Tgs> {
        if let Some(dir) = base {
            let p = dir.join(&self.tgs);
            if p.is_file() {
                return Tgs::load(p);
            }
        }
        let name = Path::new(&self.tgs)
            .file_name()
            .and_then(|s| s.to_str())
            .unwrap_or(&self.tgs);
        match bundled(name) {
            Some(text) => Tgs::from_json(text),
            None => Err(TgsError::Usage(format!(
                "structure `{}` not found on disk or in the bundle",
                self.tgs
            ))),
        }
    }

    pub fn resolve(&self, base: Option<&Path>, mode: IdealMode) -> Result<ResolvedCodeSpec> {
        let t = self.load_tgs(base)?;
        self.resolve_with(t, mode)
    }

    /// Resolves against an already loaded structure, ignoring `tgs`.
    pub fn resolve_with(&self, t: Tgs, mode: IdealMode) -> Result<ResolvedCodeSpec> {
        if self.n == 0 {
            return Err(TgsError::Malformed("code length must be at least 1".into()));
        }
        let ideal = match &self.ideal {
            Some(labels) => {
                let set = t.set_of(labels)?;
                Some(
                    KIdeal::new(&t, set, mode)
                        .map_err(|v| TgsError::InvalidStructure(v.render(&t)))?,
                )
            }
            None => None,
        };
        let phi = match (&self.a, &self.b) {
            (Some(a), Some(b)) => {
                let a = labels_to_elems(&t, a)?;
                let b = labels_to_elems(&t, b)?;
                if a.len() != self.n || b.len() != self.n {
                    return Err(TgsError::Malformed(format!(
                        "A and B must have length n = {}",
                        self.n
                    )));
                }
                Some(build_phi(a, b)?)
            }
            (None, None) => None,
            _ => return Err(TgsError::Malformed("A and B must be given together".into())),
        };
        let generators = match &self.generators {
            Some(gs) => gs
                .iter()
                .map(|g| {
                    let w = Word::from_labels(&t, g)?;
                    if w.len() != self.n {
                        return Err(TgsError::Malformed(format!(
                            "generator has length {}, expected {}",
                            w.len(),
                            self.n
                        )));
                    }
                    Ok(w)
                })
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        let missing = |what: &str| {
            TgsError::Malformed(format!(
                "{} construction needs `{what}`",
                self.construction.name()
            ))
        };
        match self.construction {
            Construction::IdealPower if ideal.is_none() => return Err(missing("ideal")),
            Construction::Constraint if ideal.is_none() => return Err(missing("ideal")),
            Construction::Constraint | Construction::Kernel if phi.is_none() => {
                return Err(missing("A and B"))
            }
            Construction::Generated if generators.is_empty() => return Err(missing("generators")),
            _ => {}
        }
        Ok(ResolvedCodeSpec {
            spec: self.clone(),
            t,
            mode,
            ideal,
            phi,
            generators,
        })
    }
}

fn labels_to_elems(t: &Tgs, labels: &[String]) -> Result<Vec<Elem>> {
    labels.iter().map(|l| t.elem(l)).collect()
}

#[derive(Clone, Debug)]
pub struct ResolvedCodeSpec {
    pub spec: CodeSpec,
    pub t: Tgs,
    pub mode: IdealMode,
    pub ideal: Option<KIdeal>,
    pub phi: Option<Morphism>,
    pub generators: Vec<Word>,
}

impl ResolvedCodeSpec {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn build_code(&self, bound: u128) -> Result<Code> {
        let t = &self.t;
        let n = self.spec.n;
        match self.spec.construction {
            Construction::IdealPower => {
                ideal_power_code(t, self.ideal.as_ref().expect("checked"), n, bound)
            }
            Construction::Constraint => constraint_code(
                t,
                self.phi.as_ref().expect("checked"),
                self.ideal.as_ref().expect("checked"),
                n,
                bound,
            ),
            Construction::Kernel => kernel_code(t, self.phi.as_ref().expect("checked"), n, bound),
            Construction::Generated => generated_code(t, &self.generators, bound),
        }
    }

    /// The ideal used for syndromes: the spec's ideal, or `{0}`.
    pub fn syndrome_ideal(&self) -> Result<KIdeal> {
        match self.ideal {
            Some(i) => Ok(i),
            None => KIdeal::zero(&self.t, self.mode)
                .map_err(|v| TgsError::InvalidStructure(v.render(&self.t))),
        }
    }

    /// Coset table for specs that carry a syndrome map, `None` otherwise.
    pub fn coset_table(&self, bound: u128) -> Result<Option<CosetTable>> {
        let Some(phi) = &self.phi else {
            return Ok(None);
        };
        let q = build_quotient(&self.t, &self.syndrome_ideal()?);
        build_coset_table(&self.t, phi, &q, self.spec.n, bound).map(Some)
    }
}

/// A code written out as its spec plus the explicit member list. Extra
/// fields (such as parameters) are ignored on reload.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeExport {
    pub spec: CodeSpec,
    pub members: Vec<Vec<String>>,
}

impl ResolvedCodeSpec {
    pub fn export(&self, code: &Code) -> CodeExport {
        CodeExport {
            spec: self.spec.clone(),
            members: code.members.iter().map(|w| w.labels(&self.t)).collect(),
        }
    }
}

impl CodeExport {
    pub fn from_json(text: &str) -> Result<CodeExport> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds the code from the spec and checks it against the stored
    /// members.
    pub fn reload(
        &self,
        base: Option<&Path>,
        mode: IdealMode,
        bound: u128,
    ) -> Result<(ResolvedCodeSpec, Code)> {
        let r = self.spec.resolve(base, mode)?;
        let code = r.build_code(bound)?;
        let stored = self
            .members
            .iter()
            .map(|m| Word::from_labels(&r.t, m))
            .collect::<Result<Vec<_>>>()?;
        if stored != code.members {
            return Err(TgsError::Malformed(
                "exported members disagree with the spec".into(),
            ));
        }
        Ok((r, code))
    }
}

/// Bundled code specs, resolved against the bundle.
pub fn bundled_spec(name: &str, mode: IdealMode) -> Result<ResolvedCodeSpec> {
    let text =
        bundled(name).ok_or_else(|| TgsError::Usage(format!("no bundled fixture `{name}`")))?;
    CodeSpec::from_json(text)?.resolve(None, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::DEFAULT_WORD_BOUND;

    #[test]
    fn manifest_matches_bundle() {
        verify_bundle().unwrap();
        let m = manifest();
        assert_eq!(m.version, 1);
        let names: Vec<&str> = BUNDLE.iter().map(|(n, _)| *n).collect();
        assert_eq!(
            m.files.keys().map(String::as_str).collect::<Vec<_>>(),
            names
        );
    }

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn structures_load() {
        assert_eq!(m3().size(), 3);
        assert_eq!(p3().size(), 3);
        assert_eq!(chain2().size(), 2);
        assert_eq!(m3xm3().size(), 9);
        assert_eq!(m3xm3().zero(), m3xm3().elem("0:0").unwrap());
    }

    #[test]
    fn specs_resolve_and_build() {
        let sizes = [
            ("m3-power.json", 8),
            ("m3-power-n2.json", 4),
            ("m3-power-n1.json", 2),
            ("repetition.json", 2),
            ("chain2-kernel.json", 2),
        ];
        for (name, size) in sizes {
            let r = bundled_spec(name, IdealMode::PlusClosed).unwrap();
            assert_eq!(
                r.build_code(DEFAULT_WORD_BOUND).unwrap().len(),
                size,
                "{name}"
            );
        }
        assert!(bundled_spec("repetition.json", IdealMode::PlusClosed)
            .unwrap()
            .coset_table(DEFAULT_WORD_BOUND)
            .unwrap()
            .is_none());
    }

    #[test]
    fn spec_round_trip() {
        for (name, text) in BUNDLE {
            if let Ok(spec) = CodeSpec::from_json(text) {
                assert_eq!(
                    CodeSpec::from_json(&spec.to_json()).unwrap(),
                    spec,
                    "{name}"
                );
            }
        }
    }

    #[test]
    fn bad_specs_are_rejected() {
        let base = CodeSpec::from_json(bundled("m3-power.json").unwrap()).unwrap();
        let mut s = base.clone();
        s.ideal = Some(vec!["a".into()]);
        assert!(matches!(
            s.resolve(None, IdealMode::PlusClosed),
            Err(TgsError::InvalidStructure(_))
        ));
        let mut s = base.clone();
        s.a = Some(vec!["1".into()]);
        assert!(matches!(
            s.resolve(None, IdealMode::PlusClosed),
            Err(TgsError::Malformed(_))
        ));
        let mut s = base.clone();
        s.tgs = "nowhere.json".into();
        assert!(matches!(
            s.resolve(None, IdealMode::PlusClosed),
            Err(TgsError::Usage(_))
        ));
        let mut s = base;
        s.construction = Construction::Generated;
        assert!(s.resolve(None, IdealMode::PlusClosed).is_err());
        assert!(CodeSpec::from_json(
            r#"{"tgs":"M3.json","construction":"ideal-power","n":1,"extra":1}"#
        )
        .is_err());
    }

    #[test]
    fn code_export_round_trip() {
        let r = bundled_spec("repetition.json", IdealMode::PlusClosed).unwrap();
        let code = r.build_code(DEFAULT_WORD_BOUND).unwrap();
        let text = serde_json::to_string(&r.export(&code)).unwrap();
        let (_, back) = CodeExport::from_json(&text)
            .unwrap()
            .reload(None, IdealMode::PlusClosed, DEFAULT_WORD_BOUND)
            .unwrap();
        assert_eq!(back, code);
        let mut bad = r.export(&code);
        bad.members.pop();
        assert!(bad
            .reload(None, IdealMode::PlusClosed, DEFAULT_WORD_BOUND)
            .is_err());
    }

    #[test]
    fn export_writes_everything() {
        let dir = std::env::temp_dir().join(format!("tgs-export-{}", std::process::id()));
        let written = export_bundle(&dir).unwrap();
        assert_eq!(written.len(), BUNDLE.len() + 1);
        for (name, contents) in BUNDLE {
            assert_eq!(fs::read_to_string(dir.join(name)).unwrap(), *contents);
        }
        fs::remove_dir_all(dir).unwrap();
    }
}
