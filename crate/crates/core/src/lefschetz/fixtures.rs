//! Integer systems printed for orders 14 and 22, kept verbatim and solved
//! independently of the cyclotomic basis used in this crate.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::exactmath::{Int, Rat, RatMatrix};

use super::{integer_points, LefschetzError};

const M14: &str = include_str!("../../data/lefschetz/m14.json");
const M22: &str = include_str!("../../data/lefschetz/m22.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrintedSystemKind {
    M14,
    M22,
}

impl PrintedSystemKind {
    pub fn key(self) -> &'static str {
        match self {
            PrintedSystemKind::M14 => "m14",
            PrintedSystemKind::M22 => "m22",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.json", self.key())
    }
}

impl std::str::FromStr for PrintedSystemKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "m14" => Ok(PrintedSystemKind::M14),
            "m22" => Ok(PrintedSystemKind::M22),
            _ => Err(format!("unknown fixture `{s}` (m14|m22)")),
        }
    }
}

/// `{rows: [[coeffs…, rhs]], unknowns: [names]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrintedSystem {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    pub unknowns: Vec<String>,
    pub rows: Vec<Vec<i64>>,
}

impl PrintedSystem {
    pub fn builtin(kind: PrintedSystemKind) -> Self {
        let src = match kind {
            PrintedSystemKind::M14 => M14,
            PrintedSystemKind::M22 => M22,
        };
        PrintedSystem::from_json(src).expect("bundled fixtures are well formed")
    }

    pub fn from_json(src: &str) -> Result<Self, LefschetzError> {
        let sys: PrintedSystem =
            serde_json::from_str(src).map_err(|e| LefschetzError::Fixture(e.to_string()))?;
        let width = sys.unknowns.len() + 1;
        if sys.rows.iter().any(|r| r.len() != width) {
            return Err(LefschetzError::Fixture(format!(
                "every row needs {width} entries (coefficients and right-hand side)"
            )));
        }
        Ok(sys)
    }

    /// Loads `<dir>/<key>.json`.
    pub fn load(kind: PrintedSystemKind, dir: &Path) -> Result<Self, LefschetzError> {
        let path = dir.join(kind.file_name());
        let src = std::fs::read_to_string(&path)
            .map_err(|e| LefschetzError::Fixture(format!("{}: {e}", path.display())))?;
        PrintedSystem::from_json(&src)
    }

    pub fn matrix(&self) -> RatMatrix {
        let n = self.unknowns.len();
        RatMatrix::from_fn(self.rows.len(), n, |i, j| {
            Rat::from_integer(Int::from(self.rows[i][j]))
        })
    }

    pub fn rhs(&self) -> Vec<Rat> {
        let n = self.unknowns.len();
        self.rows
            .iter()
            .map(|r| Rat::from_integer(Int::from(r[n])))
            .collect()
    }

    /// The same system with every right-hand side replaced by `value`.
    pub fn with_rhs(&self, value: i64) -> Self {
        let n = self.unknowns.len();
        let mut out = self.clone();
        for r in &mut out.rows {
            r[n] = value;
        }
        out
    }
}

/// Nonnegative integer solutions with every unknown at most `bound`.
pub fn check_printed_system(
    sys: &PrintedSystem,
    bound: i64,
) -> Result<Vec<Vec<i64>>, LefschetzError> {
    let ranges = vec![(0, bound); sys.unknowns.len()];
    integer_points(&sys.matrix(), &sys.rhs(), &ranges)
}
