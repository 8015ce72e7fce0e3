//! Family files: JSON declarations of an operator family and its generators.
//!
//! ```json
//! { "kind": "conformal", "dim": 3, "t_order": 2,
//!   "generators": [{ "name": "h", "self_adjoint": true }],
//!   "weyl_factor": "h",
//!   "numeric": { "weyl_factor": [{ "mode": [1, 0, 0], "re": 0.1 }, { "mode": [-1, 0, 0], "re": 0.1 }] } }
//! ```

use std::path::Path;

use ncps_core::symbol::FamilyKind;
use ncps_core::{Generator, OperatorFamily, Rational};
use ncps_num::{ConcreteElement, NumericFamily};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindName {
    Free,
    Coupled,
    Conformal,
    UnitaryFlow,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDecl {
    pub name: String,
    #[serde(default = "yes")]
    pub self_adjoint: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericModel {
    /// Fourier modes of the concrete Weyl factor.
    #[serde(default)]
    pub weyl_factor: Option<ConcreteElement>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: KindName,
    pub dim: usize,
    #[serde(default)]
    pub t_order: u32,
    #[serde(default)]
    pub generators: Vec<GeneratorDecl>,
    #[serde(default)]
    pub potentials: Option<Vec<String>>,
    #[serde(default)]
    pub graded: bool,
    #[serde(default)]
    pub weyl_factor: Option<String>,
    #[serde(default)]
    pub k: Option<Vec<i64>>,
    /// Rational flow parameter, e.g. `"1/2"`.
    #[serde(default)]
    pub t: Option<String>,
    #[serde(default)]
    pub numeric: Option<NumericModel>,
    /// Where the declaration came from, for error messages.
    #[serde(skip)]
    pub source: String,
}

impl FamilySpec {
    pub fn load(path: &Path) -> Result<FamilySpec, CliError> {
        let bad = |message: String| CliError::FamilyFile { path: path.display().to_string(), message };
        let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
        let mut spec: FamilySpec = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        spec.source = path.display().to_string();
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<FamilySpec, CliError> {
        let mut spec: FamilySpec =
            serde_json::from_str(text).map_err(|e| CliError::FamilyFile { path: "<inline>".into(), message: e.to_string() })?;
        spec.source = "<inline>".into();
        Ok(spec)
    }

    fn malformed(&self, message: impl Into<String>) -> CliError {
        CliError::FamilyFile { path: self.source.clone(), message: message.into() }
    }

    /// Declared generators; falls back to the defaults of the kind.
    pub fn generators(&self) -> Result<Vec<Generator>, CliError> {
        let decls: Vec<GeneratorDecl> = if self.generators.is_empty() {
            let names: Vec<String> = match self.kind {
                KindName::Coupled => (1..=self.dim).map(|i| format!("A{}", i)).collect(),
                KindName::Conformal => vec!["h".into()],
                _ => Vec::new(),
            };
            names.into_iter().map(|name| GeneratorDecl { name, self_adjoint: true }).collect()
        } else {
            self.generators.clone()
        };
        let mut out: Vec<Generator> = Vec::new();
        for d in &decls {
            let g = if d.self_adjoint { Generator::hermitian(&d.name) } else { Generator::free(&d.name) }
                .map_err(|e| self.malformed(e.to_string()))?;
            if out.iter().any(|o| o.name() == g.name()) {
                return Err(self.malformed(format!("generator {} declared twice", d.name)));
            }
            out.push(g);
        }
        Ok(out)
    }

    fn lookup(&self, gens: &[Generator], name: &str) -> Result<Generator, CliError> {
        gens.iter().find(|g| g.name() == name).copied().ok_or_else(|| self.malformed(format!("undeclared generator {}", name)))
    }

    /// The symbolic family.
    pub fn operator_family(&self) -> Result<OperatorFamily, CliError> {
        let gens = self.generators()?;
        let kind = match self.kind {
            KindName::Free => FamilyKind::Free,
            KindName::Coupled => {
                let names: Vec<String> = match &self.potentials {
                    Some(p) => p.clone(),
                    None => (1..=self.dim).map(|i| format!("A{}", i)).collect(),
                };
                let potentials = names.iter().map(|n| self.lookup(&gens, n)).collect::<Result<_, _>>()?;
                FamilyKind::Coupled { potentials, graded: self.graded }
            }
            KindName::Conformal => {
                let name = self.weyl_factor.clone().unwrap_or_else(|| "h".into());
                FamilyKind::Conformal { weyl_factor: self.lookup(&gens, &name)? }
            }
            KindName::UnitaryFlow => {
                let k = self.k.clone().ok_or_else(|| self.malformed("unitary_flow needs k"))?;
                let t = match &self.t {
                    Some(s) => s.trim().parse::<Rational>().map_err(|e| self.malformed(format!("t = {:?}: {}", s, e)))?,
                    None => Rational::from_integer(0.into()),
                };
                FamilyKind::UnitaryFlow { k, t }
            }
        };
        Ok(OperatorFamily::new(self.dim, kind, self.t_order)?)
    }

    /// The truncated numerical model, where one exists.
    pub fn numeric_family(&self) -> Result<NumericFamily, CliError> {
        match self.kind {
            KindName::Free => Ok(NumericFamily::FreeDirac),
            KindName::Conformal => {
                let h = self
                    .numeric
                    .as_ref()
                    .and_then(|n| n.weyl_factor.clone())
                    .ok_or_else(|| self.malformed("conformal family needs numeric.weyl_factor for numerical commands"))?;
                Ok(NumericFamily::ConformalDirac { weyl_factor: h })
            }
            KindName::UnitaryFlow => {
                Ok(NumericFamily::UnitaryFlow { shift: self.k.clone().ok_or_else(|| self.malformed("unitary_flow needs k"))? })
            }
            KindName::Coupled => Err(self.malformed("coupled families have abstract potentials and no numerical model")),
        }
    }
}
