//! File interchange: one JSON document holds a code, a family or a seed, and
//! catalogue names resolve to the same three kinds.

use std::fmt;

use serde_json::Value;

use crate::catalog::{fixture, FIXTURE_NAMES};
use crate::code::SymbolicCode;
use crate::construct::{seed_catalog, CatalogEntry, MnSeed, SEED_CATALOG_NAMES};
use crate::design::DispersionFamily;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Code(SymbolicCode),
    Family(DispersionFamily),
    Seed(MnSeed),
}

impl Document {
    /// Parses a document, telling the kinds apart by their distinguishing key.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        let has = |k: &str| v.get(k).is_some();
        if has("grid") {
            Ok(Document::Code(serde_json::from_value(v)?))
        } else if has("a_mats") {
            Ok(Document::Family(serde_json::from_value(v)?))
        } else if has("m_mats") {
            let raw: MnSeed = serde_json::from_value(v)?;
            Ok(Document::Seed(MnSeed::new(raw.label, raw.m_mats, raw.n_mats)?))
        } else {
            Err(Error::Parse("document is neither a code, a family nor an mn seed".into()))
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Document::Code(c) => c.to_json(),
            Document::Family(f) => f.to_json(),
            Document::Seed(s) => serde_json::to_string_pretty(s).expect("seed serialization"),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Code(_) => "code",
            Document::Family(_) => "family",
            Document::Seed(_) => "mn seed",
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Document::Code(c) => &c.label,
            Document::Family(f) => &f.label,
            Document::Seed(s) => &s.label,
        }
    }

    /// The code view: families become `Σ (x_i^R A_i + j x_i^I B_i)`.
    pub fn into_code(self) -> Result<SymbolicCode> {
        match self {
            Document::Code(c) => Ok(c),
            Document::Family(f) => SymbolicCode::from_dispersion(f.label.clone(), &f.a_mats, &f.b_mats),
            Document::Seed(s) => Err(Error::Precondition(format!("'{}' is an mn seed, not a code", s.label))),
        }
    }

    /// The family view: codes yield their dispersion matrices.
    pub fn into_family(self) -> Result<DispersionFamily> {
        match self {
            Document::Code(c) => Ok(c.dispersion()),
            Document::Family(f) => Ok(f),
            Document::Seed(s) => Ok(s.as_family()),
        }
    }

    pub fn into_seed(self) -> Result<MnSeed> {
        match self {
            Document::Seed(s) => Ok(s),
            other => Err(Error::Precondition(format!("'{}' is a {}, not an mn seed", other.label(), other.kind()))),
        }
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Document::Code(c) => write!(f, "{c}"),
            Document::Family(fam) => write!(f, "{}", CatalogEntry::Family(fam.clone())),
            Document::Seed(s) => write!(f, "{}", CatalogEntry::Seed(s.clone())),
        }
    }
}

/// Every name [`resolve_name`] accepts: fixtures first, then catalogue entries.
pub fn catalog_names() -> Vec<&'static str> {
    FIXTURE_NAMES.iter().chain(&SEED_CATALOG_NAMES).copied().collect()
}

pub fn resolve_name(name: &str) -> Result<Document> {
    if FIXTURE_NAMES.contains(&name) {
        return fixture(name).map(Document::Code);
    }
    match seed_catalog(name) {
        Ok(CatalogEntry::Family(f)) => Ok(Document::Family(f)),
        Ok(CatalogEntry::Seed(s)) => Ok(Document::Seed(s)),
        Err(_) => Err(Error::UnknownName { kind: "code, family or seed", name: name.to_string() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_round_trips_through_json() {
        for name in catalog_names() {
            let doc = resolve_name(name).unwrap();
            assert_eq!(Document::from_json(&doc.to_json()).unwrap(), doc, "{name}");
        }
    }

    #[test]
    fn kinds_and_views() {
        assert_eq!(resolve_name("G8").unwrap().kind(), "code");
        assert_eq!(resolve_name("af2-ex1").unwrap().kind(), "family");
        assert_eq!(resolve_name("mn-eq6").unwrap().kind(), "mn seed");
        let code = resolve_name("af2-ex1").unwrap().into_code().unwrap();
        assert_eq!((code.p(), code.k()), (2, 2));
        assert!(resolve_name("G8").unwrap().into_seed().is_err());
        assert!(matches!(resolve_name("nope"), Err(Error::UnknownName { .. })));
    }

    #[test]
    fn rejects_unknown_documents() {
        assert!(matches!(Document::from_json("{\"x\": 1}"), Err(Error::Parse(_))));
        assert!(matches!(Document::from_json("not json"), Err(Error::Malformed(_))));
        let bad_seed = r#"{"label": "s", "m_mats": [], "n_mats": []}"#;
        assert!(matches!(Document::from_json(bad_seed), Err(Error::Precondition(_))));
    }
}
