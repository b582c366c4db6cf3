//! The TOML instance format. Scalars are strings (`"3/2"`, `"-1"`) so they stay exact.
//!
//! ```toml
//! name = "dual numbers"
//! field = "Q"
//!
//! [a]
//! labels = ["1", "x"]
//! table = [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]  # table[i][j] = e_i e_j
//! unit = ["1", "0"]
//! ```
//!
//! `b` defaults to the ground field, `epsilon` to the unit map, `module` to `A` itself.

use hochschild::algebra::{AlgebraMorphism, Bimodule, FiniteAlgebra, Triple};
use hochschild::fixtures::Instance;
use hochschild::linalg::DenseMatrix;
use hochschild::{Field, Scalar};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: String,
    pub a: AlgebraSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<AlgebraSpec>,
    /// `dim A × dim B`; column `j` is `ε(f_j)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morita: Option<MoritaSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub labels: Vec<String>,
    pub table: Vec<Vec<Vec<String>>>,
    pub unit: Vec<String>,
}

/// `left[i]` is the matrix (rows) of `v ↦ e_i·v`, `right[i]` that of `v ↦ v·e_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub dim: usize,
    pub left: Vec<Vec<Vec<String>>>,
    pub right: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoritaSpec {
    /// Size of the matrix triple compared against.
    pub matrix_size: usize,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn scalars(field: Field, xs: &[String]) -> Result<Vec<Scalar>, CliError> {
    xs.iter().map(|s| Ok(field.parse(s)?)).collect()
}

fn matrix(field: Field, rows: &[Vec<String>], shape: (usize, usize), what: &str) -> Result<DenseMatrix, CliError> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(bad(format!("{what}: expected a {}x{} matrix", shape.0, shape.1)));
    }
    let rows = rows.iter().map(|r| scalars(field, r)).collect::<Result<Vec<_>, _>>()?;
    if shape.0 == 0 {
        return Ok(DenseMatrix::zero(field, 0, shape.1));
    }
    Ok(DenseMatrix::from_rows(field, rows)?)
}

impl AlgebraSpec {
    fn build(&self, field: Field, what: &str) -> Result<FiniteAlgebra, CliError> {
        let d = self.labels.len();
        if self.dim.is_some_and(|n| n != d) {
            return Err(bad(format!("{what}: dim {} but {d} labels", self.dim.unwrap_or(0))));
        }
        let shape_ok = self.table.len() == d && self.table.iter().all(|r| r.len() == d && r.iter().all(|v| v.len() == d));
        if !shape_ok || self.unit.len() != d {
            return Err(bad(format!("{what}: table must be {d}x{d}x{d} and unit of length {d}")));
        }
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|v| scalars(field, v)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteAlgebra::new(field, self.labels.clone(), table, scalars(field, &self.unit)?)?)
    }

    fn from_algebra(a: &FiniteAlgebra) -> Self {
        AlgebraSpec {
            dim: Some(a.dim()),
            labels: a.labels().to_vec(),
            table: a.table().iter().map(|row| row.iter().map(|v| strings(v)).collect()).collect(),
            unit: strings(a.unit()),
        }
    }
}

fn strings(xs: &[Scalar]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn rows_of(m: &DenseMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| strings(r)).collect()
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("instance files serialize")
    }

    pub fn field(&self) -> Result<Field, CliError> {
        Ok(self.field.parse()?)
    }

    pub fn build(&self) -> Result<Instance, CliError> {
        let field = self.field()?;
        let a = self.a.build(field, "a")?;
        let t = match (&self.b, &self.epsilon) {
            (None, None) => Triple::over_ground(a),
            (Some(b), Some(eps)) => {
                let b = b.build(field, "b")?;
                let eps = matrix(field, eps, (a.dim(), b.dim()), "epsilon")?;
                Triple::new(a, b, AlgebraMorphism::new(eps))?
            }
            _ => return Err(bad("`b` and `epsilon` must be given together")),
        };
        let m = match &self.module {
            None => Bimodule::regular(&t.a),
            Some(spec) => {
                let d = t.a.dim();
                if spec.left.len() != d || spec.right.len() != d {
                    return Err(bad(format!("module: need {d} left and {d} right action matrices")));
                }
                let mats = |ms: &[Vec<Vec<String>>], side: &str| {
                    ms.iter()
                        .enumerate()
                        .map(|(i, rows)| matrix(field, rows, (spec.dim, spec.dim), &format!("module.{side}[{i}]")))
                        .collect::<Result<Vec<_>, _>>()
                };
                Bimodule::new(field, spec.dim, mats(&spec.left, "left")?, mats(&spec.right, "right")?)?
            }
        };
        Ok(Instance::new(self.name.clone().unwrap_or_default(), t, m))
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let t = &inst.triple;
        let m = &inst.module;
        InstanceFile {
            name: Some(inst.name.clone()),
            field: t.field().to_string(),
            a: AlgebraSpec::from_algebra(&t.a),
            b: Some(AlgebraSpec::from_algebra(&t.b)),
            epsilon: Some(rows_of(t.eps.matrix())),
            module: Some(ModuleSpec {
                dim: m.dim(),
                left: m.left().iter().map(rows_of).collect(),
                right: m.right().iter().map(rows_of).collect(),
            }),
            morita: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hochschild::complexes::{build_complex, BuildOptions, ComplexKind};
    use hochschild::fixtures::named_fixtures;

    #[test]
    fn roundtrip_keeps_homology() {
        for inst in named_fixtures() {
            let file = InstanceFile::from_instance(&inst);
            let text = file.to_toml();
            let back = InstanceFile::parse(&text).unwrap();
            assert_eq!(back, file);
            let rebuilt = back.build().unwrap();
            assert_eq!(rebuilt.triple.a, inst.triple.a);
            assert_eq!(rebuilt.module, inst.module);
            let h = |i: &Instance| {
                build_complex(ComplexKind::Secondary, &i.triple, &i.module, BuildOptions::degree(2)).unwrap().homology_dims().unwrap()
            };
            assert_eq!(h(&rebuilt), h(&inst), "{}", inst.name);
        }
    }

    #[test]
    fn defaults_to_regular_over_ground() {
        let text = r#"
field = "Q"
[a]
labels = ["1", "x"]
table = [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]
unit = ["1", "0"]
"#;
        let inst = InstanceFile::parse(text).unwrap().build().unwrap();
        assert_eq!(inst.triple.b.dim(), 1);
        assert_eq!(inst.module.dim(), 2);
    }

    #[test]
    fn zero_denominator_is_rejected() {
        let text = r#"
field = "Q"
[a]
labels = ["1"]
table = [[["1/0"]]]
unit = ["1"]
"#;
        assert!(matches!(InstanceFile::parse(text).unwrap().build(), Err(CliError::Core(_))));
    }
}
