//! JSON problem files.
//!
//! ```json
//! {
//!   "order": 2,
//!   "left": [0.0],
//!   "right": [0.0],
//!   "rhs": "y1^2 + 1",
//!   "exact": "ln(cos(0.5)) - ln(cos(x - 0.5))",
//!   "quadrature": { "order": 24, "panels": 2 }
//! }
//! ```
//!
//! `left[i]` is `y^(i)(0)`, `right[j]` is `y^(j)(1)`. `exact` and
//! `quadrature` are optional.

use std::path::Path;

use dualbvp::{BVProblem64, Expr, QuadratureSettings, ReferenceSolution};
use serde::Deserialize;

use crate::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub order: usize,
    #[serde(default)]
    pub left: Vec<f64>,
    #[serde(default)]
    pub right: Vec<f64>,
    pub rhs: String,
    #[serde(default)]
    pub exact: Option<String>,
    #[serde(default)]
    pub quadrature: Option<QuadratureSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default = "default_panels")]
    pub panels: usize,
}

fn default_panels() -> usize {
    QuadratureSettings::default().panels
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("problem file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn problem(&self) -> Result<BVProblem64> {
        let given = self.left.len() + self.right.len();
        if given != self.order {
            return Err(CliError::Usage(format!(
                "boundary condition count mismatch: order {} needs {} values, got {} left + {} right",
                self.order,
                self.order,
                self.left.len(),
                self.right.len()
            )));
        }
        let rhs = Expr::parse(&self.rhs).map_err(|e| CliError::Usage(format!("rhs: {e}")))?;
        Ok(BVProblem64::new(self.left.clone(), self.right.clone(), rhs)?)
    }

    pub fn reference(&self) -> Result<Option<ReferenceSolution>> {
        self.exact
            .as_deref()
            .map(|src| {
                let e = Expr::parse(src).map_err(|e| CliError::Usage(format!("exact: {e}")))?;
                Ok(ReferenceSolution::from_expr(e)?)
            })
            .transpose()
    }

    pub fn quadrature(&self) -> QuadratureSettings {
        match self.quadrature {
            Some(q) => QuadratureSettings {
                order: q.order,
                panels: q.panels,
            },
            None => QuadratureSettings::default(),
        }
    }
}
