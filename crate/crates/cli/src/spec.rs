//! Line-delimited JSON manifold specifications.
//!
//! One object per line, for example
//!
//! ```text
//! {"id": "chi1_4_1", "kind": "knot_surgery", "knot": {"family": "twist", "params": [-1]}, "p": 1, "q": 1}
//! {"id": "poincare", "kind": "seifert", "fibers": [[2, -1], [3, 1], [5, 1]]}
//! ```
//!
//! Integers may be given as JSON numbers or decimal strings. Knot families:
//! `unknot`; `torus` with params `[a, b]`; `twist` with params `[n]` (n = 1
//! the right trefoil, n = −1 the figure-eight); `custom` with a d-table,
//! either inline (`table`) or from a file (`table_file`, relative to the
//! spec file), plus the declared completeness bound `n_max`. A d-table is
//! one row `m n d_mn` per line, `#` starting a comment.

use std::path::Path;

use serde::{Deserialize, Serialize};

use qwrt::invariants::{KnotSurgery, Manifold, SeifertData};
use qwrt::knots::{DmnTable, Knot, KnotFamily};
use qwrt::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Int {
    Num(i64),
    Str(String),
}

impl Int {
    pub fn value(&self) -> Result<i64> {
        match self {
            Int::Num(n) => Ok(*n),
            Int::Str(s) => s.trim().parse().map_err(|_| Error::InvalidInput(format!("integer {s:?} is not a 64-bit decimal"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<Int>,
    #[serde(default)]
    pub mirror: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecBody {
    Seifert { fibers: Vec<[Int; 2]> },
    KnotSurgery { knot: KnotSpec, p: Int, q: Int },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldSpec {
    pub id: String,
    #[serde(flatten)]
    pub body: SpecBody,
}

impl KnotSpec {
    fn params(&self, n: usize) -> Result<Vec<i64>> {
        if self.params.len() != n {
            return Err(Error::InvalidInput(format!("family {} takes {n} params, got {}", self.family, self.params.len())));
        }
        self.params.iter().map(Int::value).collect()
    }

    fn table(&self, base: Option<&Path>) -> Result<DmnTable> {
        let n_max = self.n_max.ok_or_else(|| Error::InvalidInput("custom knot needs n_max".into()))?;
        let text = match (&self.table, &self.table_file) {
            (Some(t), None) => t.clone(),
            (None, Some(f)) => {
                let path = base.map_or_else(|| Path::new(f).to_path_buf(), |b| b.join(f));
                std::fs::read_to_string(&path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?
            }
            _ => return Err(Error::InvalidInput("custom knot needs exactly one of table, table_file".into())),
        };
        DmnTable::parse(&text, n_max)
    }

    pub fn to_knot(&self, base: Option<&Path>) -> Result<Knot> {
        let family = match self.family.as_str() {
            "unknot" => {
                self.params(0)?;
                KnotFamily::Unknot
            }
            "torus" => {
                let v = self.params(2)?;
                KnotFamily::Torus(v[0], v[1])
            }
            "twist" => KnotFamily::Twist(self.params(1)?[0]),
            "custom" => KnotFamily::Custom(self.table(base)?),
            f => return Err(Error::InvalidInput(format!("unknown knot family {f:?}"))),
        };
        Knot::new(family, self.mirror)
    }
}

impl ManifoldSpec {
    /// `base` resolves relative table files.
    pub fn to_manifold(&self, base: Option<&Path>) -> Result<Manifold> {
        match &self.body {
            SpecBody::Seifert { fibers } => {
                let f = fibers.iter().map(|[p, q]| Ok((p.value()?, q.value()?))).collect::<Result<Vec<_>>>()?;
                Ok(Manifold::Seifert(SeifertData::new(&f)?))
            }
            SpecBody::KnotSurgery { knot, p, q } => Ok(Manifold::Knot(KnotSurgery::new(knot.to_knot(base)?, p.value()?, q.value()?)?)),
        }
    }
}

/// Parse every non-blank line; the error carries the 1-based line number.
pub fn parse_specs(text: &str) -> std::result::Result<Vec<ManifoldSpec>, (usize, String)> {
    text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).map(|(i, l)| serde_json::from_str(l).map_err(|e| (i + 1, e.to_string()))).collect()
}
