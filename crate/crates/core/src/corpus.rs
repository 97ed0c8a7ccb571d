//! Bundled example manifolds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::ValidationReport;
use crate::manifold::{parse, ManifoldFile, Model};

/// Algebraic class of the underlying Lie algebra, which decides whether invariant
/// cohomology is known to compute de Rham cohomology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LieClass {
    Nilpotent,
    CompletelySolvable,
    Other,
}

impl LieClass {
    pub fn of(v: &ValidationReport) -> Self {
        if v.nilpotent {
            LieClass::Nilpotent
        } else if v.completely_solvable {
            LieClass::CompletelySolvable
        } else {
            LieClass::Other
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LieClass::Nilpotent => "nilpotent",
            LieClass::CompletelySolvable => "completely_solvable",
            LieClass::Other => "other",
        }
    }
}

/// Which comparison theorem lets invariant forms stand in for all forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caveats {
    /// Nilpotent: invariant cohomology is de Rham cohomology (Nomizu).
    pub nomizu: bool,
    /// Completely solvable: the same holds (Hattori).
    pub hattori: bool,
    /// Neither applies; every number is a statement about invariant forms only.
    pub invariant_only: bool,
}

impl Caveats {
    pub fn for_class(c: LieClass) -> Self {
        Caveats {
            nomizu: c == LieClass::Nilpotent,
            hattori: c != LieClass::Other,
            invariant_only: c == LieClass::Other,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub class: LieClass,
    pub integrable: bool,
    /// Structure equations differ from a published display; see `note`.
    pub corrected: bool,
    pub note: &'static str,
}

macro_rules! entry {
    ($name:literal, $class:ident, $integrable:literal, $corrected:literal, $note:literal) => {
        CorpusEntry {
            name: $name,
            text: include_str!(concat!("../corpus/", $name, ".hodge")),
            class: LieClass::$class,
            integrable: $integrable,
            corrected: $corrected,
            note: $note,
        }
    };
}

pub const CORPUS: &[CorpusEntry] = &[
    entry!("torus4", Nilpotent, true, false, ""),
    entry!("kodaira_primary", Nilpotent, true, false, "metric labels: s^2 on phi1^phibar1, r^2 on phi2^phibar2"),
    entry!("kodaira_secondary", Other, true, false, ""),
    entry!(
        "inoue_SM",
        CompletelySolvable,
        true,
        true,
        "the phi1^phibar2 coefficient of d phi1 is -(alpha - i beta)/(2i); an extra factor 1/2 would break d^2 = 0"
    ),
    entry!("inoue_Spm", CompletelySolvable, true, false, ""),
    entry!("nil4", Nilpotent, false, false, ""),
    entry!(
        "rxsol3",
        CompletelySolvable,
        false,
        false,
        "the real equations give d phi2 = -(phi1^phibar2 + phibar1^phibar2)/2, so the g phi1^phibar2 term of dbar(f phi1 + g phi2) is -g/2"
    ),
    entry!("kodaira_thurston_ak", Nilpotent, false, false, "metrics ak1..ak3 are almost Kahler, h1 and h2 are not"),
    entry!("ft8", Nilpotent, false, false, ""),
    entry!("torus8", Nilpotent, true, false, ""),
];

/// Looks up an entry; `kodaira` is accepted for `kodaira_primary`.
pub fn entry(name: &str) -> Result<&'static CorpusEntry> {
    let name = if name == "kodaira" { "kodaira_primary" } else { name };
    CORPUS.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownManifold(name.into()))
}

impl CorpusEntry {
    pub fn file(&self) -> ManifoldFile {
        parse(self.text).expect("bundled file parses")
    }

    pub fn model(&self) -> Model {
        self.file().build().expect("bundled file validates")
    }

    pub fn caveats(&self) -> Caveats {
        Caveats::for_class(self.class)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_matches_computation() {
        assert_eq!(CORPUS.len(), 10);
        for e in CORPUS {
            let f = e.file();
            assert_eq!(f.name, e.name);
            assert_eq!(f.serialize(), e.text, "{} is not canonical", e.name);
            let m = f.build().unwrap();
            assert_eq!(LieClass::of(&m.validation), e.class, "{}", e.name);
            assert_eq!(m.bigrading.is_integrable(), e.integrable, "{}", e.name);
            assert!(m.validation.unimodular, "{}", e.name);
            for name in m.metric_names() {
                m.hermitian(Some(name)).unwrap_or_else(|err| panic!("{} {name}: {err}", e.name));
            }
        }
    }
}
