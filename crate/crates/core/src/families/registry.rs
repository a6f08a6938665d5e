//! Versioned registry of named families, small constants and verbatim
//! tables. Every value carries where it comes from.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::exactmath::Signature;
use crate::expr;

use super::{moduli_dimension, FamilyError};

const BUILTIN: &str = include_str!("../../data/registry.json");

pub const REGISTRY_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Stated in the source.
    Primary,
    /// Taken from the literature the source cites.
    CitedLiterature,
    /// Computed from other entries.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sourced<T> {
    pub value: T,
    pub provenance: Provenance,
    /// Neutral locator: which family or table the value belongs to.
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaRank {
    pub m: u64,
    pub rank: usize,
    pub provenance: Provenance,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointCount {
    pub order: u64,
    pub points: usize,
    pub provenance: Provenance,
    pub source: String,
}

/// A family of K3 surfaces with a non-symplectic automorphism of order
/// `order`, keyed by its fixed-locus datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub order: u64,
    /// `r,a,δ` for involutions, `n,k` for order 3, a short name otherwise.
    pub fixed: String,
    pub label: String,
    pub fixed_locus: Sourced<String>,
    pub ns_rank: Sourced<usize>,
    pub t_rank: Sourced<usize>,
    pub moduli: Sourced<usize>,
    /// Whether the generic member also has a symplectic automorphism of the
    /// same order; absent when the question is not addressed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symplectic_same_order: Option<Sourced<bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns: Option<Sourced<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Sourced<String>>,
    /// Whether order `p` extends to order `2p` on the same surface.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_to_2p: Option<Sourced<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureTable {
    pub name: String,
    pub provenance: Provenance,
    pub source: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Registry {
    pub version: u32,
    pub omega_ranks: Vec<OmegaRank>,
    pub symplectic_fixed_points: Vec<FixedPointCount>,
    pub families: Vec<FamilyDescriptor>,
    pub fixtures: Vec<FixtureTable>,
}

impl Registry {
    pub fn builtin() -> &'static Registry {
        static REG: std::sync::OnceLock<Registry> = std::sync::OnceLock::new();
        REG.get_or_init(|| Registry::from_json(BUILTIN).expect("bundled registry is consistent"))
    }

    /// Parses and checks every record (see [`Registry::validate`]).
    pub fn from_json(src: &str) -> Result<Registry, FamilyError> {
        let reg: Registry =
            serde_json::from_str(src).map_err(|e| FamilyError::Registry(e.to_string()))?;
        reg.validate()?;
        Ok(reg)
    }

    pub fn load(path: &Path) -> Result<Registry, FamilyError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| FamilyError::Registry(format!("{}: {e}", path.display())))?;
        Registry::from_json(&src)
    }

    /// Ranks add up to 22, the moduli count follows from the rank of `T`,
    /// keys are unique, and stated lattices have the stated rank and a
    /// signature of `(1, ρ − 1)` for `NS` and `(2, 20 − ρ)` for `T`.
    pub fn validate(&self) -> Result<(), FamilyError> {
        let bad = |f: &FamilyDescriptor, what: String| {
            FamilyError::Registry(format!("family ({}, {}): {what}", f.order, f.fixed))
        };
        if self.version != REGISTRY_VERSION {
            return Err(FamilyError::Registry(format!(
                "unsupported registry version {}",
                self.version
            )));
        }
        for (i, f) in self.families.iter().enumerate() {
            if self.families[..i]
                .iter()
                .any(|g| g.order == f.order && g.fixed == f.fixed)
            {
                return Err(bad(f, "duplicate key".into()));
            }
            let (rho, rt) = (f.ns_rank.value, f.t_rank.value);
            if rho + rt != 22 {
                return Err(bad(f, format!("ranks {rho} + {rt} do not add up to 22")));
            }
            let expected = moduli_dimension(rt, f.order)?;
            if expected != f.moduli.value {
                return Err(bad(
                    f,
                    format!("moduli {} but rank T gives {expected}", f.moduli.value),
                ));
            }
            let checks = [
                (&f.ns, rho, Signature::new(1, rho.saturating_sub(1))),
                (&f.t, rt, Signature::new(2, rt.saturating_sub(2))),
            ];
            for (field, rank, sig) in checks {
                let Some(field) = field else { continue };
                let inv = expr::evaluate_invariants(&field.value)
                    .map_err(|e| bad(f, format!("{}: {e}", field.value)))?;
                if inv.rank() != rank || inv.signature() != sig {
                    return Err(bad(
                        f,
                        format!(
                            "{} has rank {} and signature {}, expected {rank} and {sig}",
                            field.value,
                            inv.rank(),
                            inv.signature()
                        ),
                    ));
                }
            }
            if let (Some(ns), Some(t)) = (&f.ns, &f.t) {
                let a = expr::evaluate_invariants(&ns.value).expect("checked above");
                let b = expr::evaluate_invariants(&t.value).expect("checked above");
                if a.invariant_factors() != b.invariant_factors() {
                    return Err(bad(f, "NS and T have different discriminant groups".into()));
                }
            }
        }
        for t in &self.fixtures {
            if t.rows.iter().any(|r| r.len() != t.columns.len()) {
                return Err(FamilyError::Registry(format!(
                    "fixture {}: row width differs from the header",
                    t.name
                )));
            }
        }
        Ok(())
    }

    pub fn lookup(&self, order: u64, fixed: &str) -> Result<&FamilyDescriptor, FamilyError> {
        let key = normalize_key(fixed);
        self.families
            .iter()
            .find(|f| f.order == order && f.fixed == key)
            .ok_or_else(|| FamilyError::UnknownFamily(format!("({order}, {fixed})")))
    }

    pub fn omega_rank(&self, m: u64) -> Option<&OmegaRank> {
        self.omega_ranks.iter().find(|o| o.m == m)
    }

    pub fn fixture(&self, name: &str) -> Option<&FixtureTable> {
        self.fixtures.iter().find(|t| t.name == name)
    }

    pub fn symplectic_fixed_points(&self, order: u64) -> Result<usize, FamilyError> {
        self.symplectic_fixed_points
            .iter()
            .find(|c| c.order == order)
            .map(|c| c.points)
            .ok_or(FamilyError::Unsupported(order))
    }
}

/// `"(6, 3)"`, `"6,3"` and `"6 3"` all name the same key.
fn normalize_key(s: &str) -> String {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    if inner.chars().all(|c| c.is_ascii_digit() || c == ',' || c.is_whitespace()) {
        inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .collect::<Vec<_>>()
            .join(",")
    } else {
        inner.to_string()
    }
}

/// Lookup in the bundled registry.
pub fn registry_lookup(order: u64, fixed: &str) -> Result<FamilyDescriptor, FamilyError> {
    Registry::builtin().lookup(order, fixed).cloned()
}
