//! JSON encodings of rings, elements, matrices and problem files.
//!
//! Elements are coefficient arrays of integers in [0, p), lowest degree
//! first: m digits for GF(p^m), n blocks of m digits for GF(p^m)[t]/(t^n),
//! and n p-adic digits for Z/p^n. Decoding also accepts a bare integer.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::deform::CanonicalIdealModel;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::Matrix;
use crate::rep::Representation;
use crate::ring::{make_ring_with_poly, Elem, Ring, RingKind, SmallExtension};

pub const SCHEMA_VERSION: u32 = 1;

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

/// {"kind":"ext-field","p":5,"m":2,"poly":[2,4,1]}
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDesc {
    pub kind: String,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<u32>>,
}

impl RingDesc {
    pub fn of(ring: &Ring) -> RingDesc {
        let m = ring.m();
        let n = ring.n();
        RingDesc {
            kind: ring.kind().name().into(),
            p: ring.p() as u64,
            m: (m > 1).then_some(m),
            n: (n > 1).then_some(n),
            poly: (m > 1).then(|| ring.field().poly().to_vec()),
        }
    }

    pub fn build(&self) -> Result<Ring> {
        let kind = RingKind::parse(&self.kind)?;
        make_ring_with_poly(kind, self.p, self.m.unwrap_or(1), self.n.unwrap_or(1), self.poly.clone())
    }
}

fn digit_count(ring: &Ring) -> usize {
    match ring.kind() {
        RingKind::PrimeField | RingKind::ExtField => ring.m() as usize,
        RingKind::TruncatedSeries => (ring.m() * ring.n()) as usize,
        RingKind::IntegersModPn => ring.n() as usize,
    }
}

pub fn encode_elem(ring: &Ring, a: Elem) -> Value {
    let f = ring.field();
    let digits: Vec<u32> = match ring.kind() {
        RingKind::PrimeField | RingKind::ExtField => f.digits(ring.residue(a)),
        RingKind::TruncatedSeries => ring.coeffs(a).into_iter().flat_map(|c| f.digits(c)).collect(),
        RingKind::IntegersModPn => ring.coeffs(a),
    };
    Value::from(digits)
}

pub fn decode_elem(ring: &Ring, v: &Value) -> Result<Elem> {
    if let Some(i) = v.as_i64() {
        return Ok(ring.from_int(i));
    }
    let arr = v.as_array().ok_or_else(|| schema(format!("element must be an integer or array, got {v}")))?;
    let p = ring.p() as u64;
    let digits = arr
        .iter()
        .map(|d| match d.as_u64() {
            Some(x) if x < p => Ok(x as u32),
            _ => Err(schema(format!("element digit {d} is not in [0, {p})"))),
        })
        .collect::<Result<Vec<u32>>>()?;
    if digits.len() > digit_count(ring) {
        return Err(schema(format!("element has {} digits, {ring} allows {}", digits.len(), digit_count(ring))));
    }
    let f = ring.field();
    let m = ring.m() as usize;
    Ok(match ring.kind() {
        RingKind::PrimeField | RingKind::ExtField => ring.from_residue(f.from_digits(&digits)),
        RingKind::TruncatedSeries => {
            let coeffs: Vec<u32> = digits.chunks(m).map(|c| f.from_digits(c)).collect();
            ring.from_coeffs(&coeffs)
        }
        RingKind::IntegersModPn => ring.from_coeffs(&digits),
    })
}

/// Arrays of rows of element encodings.
pub fn encode_matrix(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|&a| encode_elem(m.ring(), a)).collect())).collect(),
    )
}

pub fn decode_matrix(ring: &Ring, v: &Value) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| schema("matrix must be an array of rows"))?;
    let ncols = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
    let mut data = Vec::with_capacity(rows.len() * ncols);
    for row in rows {
        let row = row.as_array().ok_or_else(|| schema("matrix row must be an array"))?;
        if row.len() != ncols {
            return Err(schema("matrix rows have different lengths"));
        }
        for x in row {
            data.push(decode_elem(ring, x)?);
        }
    }
    Matrix::from_elems(ring, rows.len(), ncols, data)
}

/// {"generators":[matrix, ...]}
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDesc {
    pub generators: Vec<Value>,
}

/// {"ring": ..., "images": {generator-index: matrix}}
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDesc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingDesc>,
    pub images: BTreeMap<String, Value>,
}

/// Coefficient module for cohomology: "adjoint", "adjoint-mod-scalars" or
/// "trivial" with a dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDesc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

/// First-order deformation data over the dual numbers of the problem ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationDesc {
    #[serde(rename = "E-part-generators")]
    pub e_parts: Vec<Value>,
    /// E-parts of the lifted generator images, keyed by generator index.
    #[serde(rename = "rep-perturbation", default)]
    pub rep_perturbation: BTreeMap<String, Value>,
}

/// Marks a problem produced by a built-in fixture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureDesc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermitian: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: u32,
    pub ring: RingDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<RepDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deformation: Option<DeformationDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<FixtureDesc>,
}

fn parse_index(key: &str, limit: usize, what: &str) -> Result<usize> {
    match key.parse::<usize>() {
        Ok(i) if i < limit => Ok(i),
        _ => Err(schema(format!("{what} index {key:?} is not below {limit}"))),
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        if file.schema != SCHEMA_VERSION {
            return Err(schema(format!("schema version {} is not {SCHEMA_VERSION}", file.schema)));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn ring(&self) -> Result<Ring> {
        self.ring.build()
    }

    /// The matrix group, closed under the given bound.
    pub fn group(&self, bound: usize) -> Result<Option<Arc<FiniteGroup>>> {
        let Some(desc) = &self.group else { return Ok(None) };
        let ring = self.ring()?;
        if !ring.is_field() {
            return Err(schema("group generators must live over a field"));
        }
        let gens = desc.generators.iter().map(|m| decode_matrix(&ring, m)).collect::<Result<Vec<_>>>()?;
        if gens.is_empty() {
            return Err(schema("a group needs at least one generator"));
        }
        Ok(Some(Arc::new(FiniteGroup::close(&gens, bound)?)))
    }

    /// The representation given by generator images, or the inclusion of the group.
    pub fn representation(&self, group: &Arc<FiniteGroup>) -> Result<Representation> {
        let Some(desc) = &self.rep else { return Ok(Representation::inclusion(group.clone())) };
        let ring = match &desc.ring {
            Some(r) => r.build()?,
            None => self.ring()?,
        };
        let ngen = group.generators().len();
        let mut gens: Vec<Option<Matrix>> = vec![None; ngen];
        for (key, m) in &desc.images {
            gens[parse_index(key, ngen, "generator")?] = Some(decode_matrix(&ring, m)?);
        }
        let gens = gens
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| schema(format!("missing image of generator {i}"))))
            .collect::<Result<Vec<_>>>()?;
        Representation::from_generator_images(group.clone(), &ring, &gens)
    }

    pub fn ideal(&self) -> Result<Option<CanonicalIdealModel>> {
        let Some(gens) = &self.generators else { return Ok(None) };
        let g = self.g.ok_or_else(|| schema("generators given without g"))?;
        let ring = self.ring()?;
        let mats = gens.iter().map(|m| decode_matrix(&ring, m)).collect::<Result<Vec<_>>>()?;
        Ok(Some(CanonicalIdealModel::new(&ring, g, mats)?))
    }

    /// E-parts of the generators and the lifted representation over the dual
    /// numbers, built from the generator perturbations by word evaluation.
    pub fn deformation(&self, rho: &Representation) -> Result<Option<FirstOrderData>> {
        let Some(desc) = &self.deformation else { return Ok(None) };
        let ring = rho.ring().clone();
        let ext = SmallExtension::over(&ring, RingKind::TruncatedSeries)?;
        let e_parts = desc.e_parts.iter().map(|m| decode_matrix(&ring, m)).collect::<Result<Vec<_>>>()?;
        let group = rho.group();
        let gen_idx = group.generator_indices();
        let mut lifted_gens = Vec::with_capacity(gen_idx.len());
        for &e in gen_idx {
            lifted_gens.push(rho.image(e).section(&ext)?);
        }
        for (key, m) in &desc.rep_perturbation {
            let i = parse_index(key, gen_idx.len(), "generator")?;
            let t = decode_matrix(&ring, m)?;
            lifted_gens[i] = lifted_gens[i].add(&Matrix::e_times(&t, &ext));
        }
        let lifted = Representation::from_generator_images(group.clone(), &ext.source, &lifted_gens)?;
        Ok(Some(FirstOrderData { ext, e_parts, lifted }))
    }
}

/// Decoded deformation data of a problem file.
#[derive(Debug, Clone)]
pub struct FirstOrderData {
    pub ext: SmallExtension,
    pub e_parts: Vec<Matrix>,
    /// Word evaluation of the perturbed generator images; check
    /// `is_verified` before treating it as a homomorphism.
    pub lifted: Representation,
}
