//! JSON file formats for geometries, one-forms and reports.
//!
//! Output is canonical: keys sorted, floats in shortest round-trip form,
//! two-space indentation and a trailing newline. A matrix is an array of
//! rows whose entries are `[re, im]` pairs.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::axioms::AxiomReport;
use crate::fermion::FermionIntegral;
use crate::fluctuations::CoefficientSet;
use crate::geometry::{build_dirac_data, AlgebraKind, AlgebraTag, FermionSpace, GeometryError, MatrixGeometry};
use crate::numerics::{c, CMatrix, Tolerance};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Invalid(#[from] GeometryError),
}

impl FormatError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    fn from_serde(e: serde_json::Error) -> Self {
        Self::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

type MatrixRepr = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Signature {
    p: usize,
    q: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryFile {
    version: u32,
    algebra: AlgebraTag,
    n: usize,
    signature: Signature,
    #[serde(rename = "L")]
    l: Vec<MatrixRepr>,
    #[serde(rename = "H")]
    h: Vec<MatrixRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairRepr {
    a: MatrixRepr,
    b: MatrixRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OneFormRepr {
    version: u32,
    pairs: Vec<PairRepr>,
    #[serde(default = "default_true")]
    symmetrize: bool,
}

fn default_true() -> bool {
    true
}

/// Serializes through `Value`, whose maps are ordered, so keys come out sorted.
pub fn to_canonical_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("Value serialization cannot fail");
    s.push('\n');
    s
}

pub fn matrix_to_value(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|z| json!([z.re, z.im])).collect()))
            .collect(),
    )
}

fn matrix_repr(m: &CMatrix) -> MatrixRepr {
    (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn matrix_from_repr(repr: &MatrixRepr, n: usize, field: &str) -> Result<CMatrix, FormatError> {
    if repr.len() != n {
        return Err(FormatError::field(field, format!("expected {n} rows, found {}", repr.len())));
    }
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in repr.iter().enumerate() {
        if row.len() != n {
            return Err(FormatError::field(format!("{field}[{i}]"), format!("expected {n} entries, found {}", row.len())));
        }
        for (j, [re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(FormatError::field(format!("{field}[{i}][{j}]"), "entry is not finite"));
            }
            data.push(c(*re, *im));
        }
    }
    Ok(CMatrix::from_vec(n, n, data).expect("shape checked"))
}

fn matrix_family(reprs: &[MatrixRepr], n: usize, name: &str) -> Result<[CMatrix; 4], FormatError> {
    if reprs.len() != 4 {
        return Err(FormatError::field(name, format!("expected 4 matrices, found {}", reprs.len())));
    }
    let mats = reprs
        .iter()
        .enumerate()
        .map(|(k, r)| matrix_from_repr(r, n, &format!("{name}[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(mats.try_into().expect("length checked"))
}

fn check_version(version: u32) -> Result<(), FormatError> {
    if version != FORMAT_VERSION {
        return Err(FormatError::field("version", format!("unsupported version {version}")));
    }
    Ok(())
}

/// A structurally valid geometry file whose matrices are not yet checked
/// against the type invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct RawGeometry {
    pub kind: AlgebraKind,
    pub l: [CMatrix; 4],
    pub h: [CMatrix; 4],
}

impl RawGeometry {
    pub fn validate(self, tol: Tolerance) -> Result<MatrixGeometry, GeometryError> {
        let space = FermionSpace::new(self.kind)?;
        let dirac = build_dirac_data(self.l, self.h, &space, tol)?;
        MatrixGeometry::new(space, dirac)
    }
}

pub fn parse_geometry(text: &str) -> Result<RawGeometry, FormatError> {
    let file: GeometryFile = serde_json::from_str(text).map_err(FormatError::from_serde)?;
    check_version(file.version)?;
    if (file.signature.p, file.signature.q) != (0, 4) {
        return Err(FormatError::field(
            "signature",
            format!("only (0, 4) is supported, found ({}, {})", file.signature.p, file.signature.q),
        ));
    }
    let kind = AlgebraKind::new(file.algebra, file.n).map_err(|e| FormatError::field("n", e.to_string()))?;
    let l = matrix_family(&file.l, file.n, "L")?;
    let h = matrix_family(&file.h, file.n, "H")?;
    Ok(RawGeometry { kind, l, h })
}

/// Parses and validates; matrices violating the invariants are rejected.
pub fn read_geometry(text: &str, tol: Tolerance) -> Result<MatrixGeometry, FormatError> {
    Ok(parse_geometry(text)?.validate(tol)?)
}

pub fn geometry_to_value(geom: &MatrixGeometry) -> Value {
    let kind = geom.algebra();
    let file = GeometryFile {
        version: FORMAT_VERSION,
        algebra: kind.tag(),
        n: kind.n(),
        signature: Signature { p: 0, q: 4 },
        l: geom.dirac().l().iter().map(matrix_repr).collect(),
        h: geom.dirac().h().iter().map(matrix_repr).collect(),
    };
    serde_json::to_value(file).expect("geometry serialization cannot fail")
}

pub fn write_geometry(geom: &MatrixGeometry) -> String {
    to_canonical_string(&geometry_to_value(geom))
}

/// Generator pairs and the symmetrization flag of a one-form file.
#[derive(Clone, Debug, PartialEq)]
pub struct OneFormFile {
    pub pairs: Vec<(CMatrix, CMatrix)>,
    pub symmetrize: bool,
}

pub fn parse_one_form(text: &str, n: usize) -> Result<OneFormFile, FormatError> {
    let file: OneFormRepr = serde_json::from_str(text).map_err(FormatError::from_serde)?;
    check_version(file.version)?;
    if file.pairs.is_empty() {
        return Err(FormatError::field("pairs", "at least one pair is required"));
    }
    let pairs = file
        .pairs
        .iter()
        .enumerate()
        .map(|(k, p)| {
            Ok((
                matrix_from_repr(&p.a, n, &format!("pairs[{k}].a"))?,
                matrix_from_repr(&p.b, n, &format!("pairs[{k}].b"))?,
            ))
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok(OneFormFile {
        pairs,
        symmetrize: file.symmetrize,
    })
}

pub fn one_form_to_value(form: &OneFormFile) -> Value {
    let file = OneFormRepr {
        version: FORMAT_VERSION,
        pairs: form
            .pairs
            .iter()
            .map(|(a, b)| PairRepr {
                a: matrix_repr(a),
                b: matrix_repr(b),
            })
            .collect(),
        symmetrize: form.symmetrize,
    };
    serde_json::to_value(file).expect("one-form serialization cannot fail")
}

pub fn coefficients_to_value(set: &CoefficientSet) -> Value {
    let fam = |ms: &[CMatrix; 4]| Value::Array(ms.iter().map(matrix_to_value).collect());
    json!({
        "L_prime": fam(&set.l_prime),
        "H_prime": fam(&set.h_prime),
        "theta": fam(&set.theta),
        "y": fam(&set.y),
    })
}

pub fn axiom_report_to_value(report: &AxiomReport) -> Value {
    let mut v = serde_json::to_value(report).expect("report serialization cannot fail");
    v["all_pass"] = Value::Bool(report.all_pass());
    v["max_residual"] = json!(report.max_residual());
    v
}

/// Fermion report: `Z`, `pfaffian`, `sqrt_det`, `det_identity_residual`,
/// `spectrum`, `condition_flag`.
pub fn fermion_report_to_value(integral: &FermionIntegral, det_identity_residual: f64, spectrum: &[f64]) -> Value {
    json!({
        "Z": integral.z,
        "pfaffian": [integral.pfaffian.re, integral.pfaffian.im],
        "sqrt_det": integral.sqrt_det,
        "det_identity_residual": det_identity_residual,
        "spectrum": spectrum,
        "condition_flag": integral.condition_flag,
    })
}
