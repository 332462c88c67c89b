//! JSON description files for algebras and deformation jets.
//!
//! An algebra file lists the characteristic, the dimension, optional basis
//! labels, brackets of basis pairs keyed `"i,j"` and p-map images keyed
//! `"i"`, all as integer coefficient lists reduced mod p on load. Optional
//! `module` and `morphism` blocks attach a representation and a map to a
//! second algebra. A jet file lists the coefficients `m_k, ω_k` for
//! `k = 1..=order` in the same key format.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::{FpMatrix, FpVector, PrimeField};
use crate::lie::{bracket_table, jacobi_check, CeCochain, LModule, LieAlgebra};
use crate::restricted::{verify_pmap, PMap, PMapAxiom, RestrictedAlgebra, RestrictedModule};
use crate::deform::TruncatedDeformation;
use crate::tuples;

/// Load failure with a position in the source text when one is known.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl Diagnostic {
    fn at(src: Option<&str>, needle: &str, message: impl Into<String>) -> Self {
        let (line, column) = src.and_then(|s| locate(s, needle)).unwrap_or((1, 1));
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

/// 1-based line and column of the first occurrence of `needle`.
fn locate(src: &str, needle: &str) -> Option<(usize, usize)> {
    let pos = src.find(needle)?;
    let before = &src[..pos];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Some((line, column))
}

fn from_serde(e: serde_json::Error) -> Diagnostic {
    Diagnostic {
        line: e.line().max(1),
        column: e.column().max(1),
        message: e.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDocument {
    pub dim: usize,
    /// One row-major matrix per basis element of the algebra.
    pub action: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDocument {
    pub target: Box<AlgebraDocument>,
    /// Row-major matrix; column `i` is the image of the source basis vector `i`.
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub characteristic: u32,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: BTreeMap<String, Vec<i64>>,
    #[serde(default)]
    pub pmap: BTreeMap<String, Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MorphismDocument>,
}

/// Bracket and p-map coefficients of one t-degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetTerm {
    #[serde(default)]
    pub brackets: BTreeMap<String, Vec<i64>>,
    #[serde(default)]
    pub pmap: BTreeMap<String, Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetDocument {
    pub order: usize,
    /// `terms[k - 1]` holds `m_k` and `ω_k`.
    pub terms: Vec<JetTerm>,
}

/// Algebra data before the axioms are checked.
#[derive(Clone, Debug)]
pub struct RawAlgebra {
    pub lie: LieAlgebra,
    pub pmap: PMap,
}

/// First axiom failure of a raw algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomFailure {
    Jacobi(usize, usize, usize),
    PMap { axiom: PMapAxiom, x: FpVector, y: FpVector },
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomFailure::Jacobi(i, j, k) => write!(f, "Jacobi identity fails on (e{i}, e{j}, e{k})"),
            AxiomFailure::PMap { axiom, x, y } => write!(f, "p-map axiom {axiom:?} fails at x = {x}, y = {y}"),
        }
    }
}

impl RawAlgebra {
    pub fn first_failure(&self) -> Option<AxiomFailure> {
        if let Some((i, j, k)) = jacobi_check(&self.lie) {
            return Some(AxiomFailure::Jacobi(i, j, k));
        }
        verify_pmap(&self.lie, &self.pmap)
            .failure
            .map(|fail| AxiomFailure::PMap { axiom: fail.axiom, x: fail.x, y: fail.y })
    }
}

fn parse_index(key: &str, n: usize, src: Option<&str>) -> Result<usize, Diagnostic> {
    let quoted = format!("\"{key}\"");
    let i: usize = key
        .trim()
        .parse()
        .map_err(|_| Diagnostic::at(src, &quoted, format!("invalid basis index {key:?}")))?;
    if i >= n {
        return Err(Diagnostic::at(src, &quoted, format!("basis index {i} out of range for dimension {n}")));
    }
    Ok(i)
}

fn parse_pair(key: &str, n: usize, src: Option<&str>) -> Result<(usize, usize), Diagnostic> {
    let quoted = format!("\"{key}\"");
    let (a, b) = key
        .split_once(',')
        .ok_or_else(|| Diagnostic::at(src, &quoted, format!("bracket key {key:?} is not of the form \"i,j\"")))?;
    let i = parse_index(a, n, None).map_err(|d| Diagnostic::at(src, &quoted, d.message))?;
    let j = parse_index(b, n, None).map_err(|d| Diagnostic::at(src, &quoted, d.message))?;
    if i == j {
        return Err(Diagnostic::at(src, &quoted, format!("bracket key {key:?} repeats an index")));
    }
    Ok((i, j))
}

fn vector(f: PrimeField, values: &[i64], n: usize, key: &str, src: Option<&str>) -> Result<FpVector, Diagnostic> {
    if values.len() != n {
        return Err(Diagnostic::at(
            src,
            &format!("\"{key}\""),
            format!("entry {key:?} has {} coefficients, expected {n}", values.len()),
        ));
    }
    Ok(FpVector::from_i64(f, values))
}

fn brackets_of(
    f: PrimeField,
    n: usize,
    map: &BTreeMap<String, Vec<i64>>,
    src: Option<&str>,
) -> Result<Vec<(usize, usize, FpVector)>, Diagnostic> {
    let mut seen: BTreeMap<(usize, usize), (String, FpVector)> = BTreeMap::new();
    for (key, vals) in map {
        let (i, j) = parse_pair(key, n, src)?;
        let mut v = vector(f, vals, n, key, src)?;
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        if i > j {
            v = v.scaled(f.neg(1));
        }
        if let Some((other, w)) = seen.get(&(a, b)) {
            if *w != v {
                return Err(Diagnostic::at(src, &format!("\"{key}\""), format!("bracket {key:?} contradicts {other:?}")));
            }
        }
        seen.insert((a, b), (key.clone(), v));
    }
    Ok(seen.into_iter().map(|((a, b), (_, v))| (a, b, v)).collect())
}

fn pmap_of(f: PrimeField, n: usize, map: &BTreeMap<String, Vec<i64>>, src: Option<&str>) -> Result<Vec<FpVector>, Diagnostic> {
    let mut images = vec![FpVector::zero(f, n); n];
    for (key, vals) in map {
        let i = parse_index(key, n, src)?;
        images[i] = vector(f, vals, n, key, src)?;
    }
    Ok(images)
}

fn matrix(f: PrimeField, rows: &[Vec<i64>], r: usize, c: usize, what: &str, src: Option<&str>) -> Result<FpMatrix, Diagnostic> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Diagnostic::at(src, &format!("\"{what}\""), format!("{what} must be a {r} x {c} matrix")));
    }
    FpMatrix::from_i64_rows(f, rows).map_err(|e| Diagnostic::at(src, &format!("\"{what}\""), e.to_string()))
}

impl AlgebraDocument {
    pub fn parse(text: &str) -> Result<Self, Diagnostic> {
        serde_json::from_str(text).map_err(from_serde)
    }

    pub fn field(&self) -> Result<PrimeField, Diagnostic> {
        PrimeField::new(self.characteristic).map_err(|e| Diagnostic::at(None, "", e.to_string()))
    }

    fn labels(&self, src: Option<&str>) -> Result<Vec<String>, Diagnostic> {
        if self.basis.is_empty() {
            return Ok((0..self.dim).map(|i| format!("e{i}")).collect());
        }
        if self.basis.len() != self.dim {
            return Err(Diagnostic::at(src, "\"basis\"", format!("{} basis labels for dimension {}", self.basis.len(), self.dim)));
        }
        Ok(self.basis.clone())
    }

    /// Builds the bracket table and p-map without checking the axioms.
    pub fn raw(&self, src: Option<&str>) -> Result<RawAlgebra, Diagnostic> {
        let f = PrimeField::new(self.characteristic)
            .map_err(|e| Diagnostic::at(src, "\"characteristic\"", e.to_string()))?;
        let n = self.dim;
        let labels = self.labels(src)?;
        let brackets = brackets_of(f, n, &self.brackets, src)?;
        let table = bracket_table(f, n, &brackets).map_err(|e| Diagnostic::at(src, "\"brackets\"", e.to_string()))?;
        let lie = LieAlgebra::from_table_unchecked(f, labels, table).map_err(|e| Diagnostic::at(src, "\"brackets\"", e.to_string()))?;
        let images = pmap_of(f, n, &self.pmap, src)?;
        let pmap = PMap::new(&lie, images).map_err(|e| Diagnostic::at(src, "\"pmap\"", e.to_string()))?;
        Ok(RawAlgebra { lie, pmap })
    }

    /// Builds the algebra and checks the Jacobi identity and the p-map axioms.
    pub fn algebra(&self, src: Option<&str>) -> Result<RestrictedAlgebra, Diagnostic> {
        let raw = self.raw(src)?;
        match raw.first_failure() {
            Some(fail @ AxiomFailure::Jacobi(..)) => Err(Diagnostic::at(src, "\"brackets\"", fail.to_string())),
            Some(fail) => Err(Diagnostic::at(src, "\"pmap\"", fail.to_string())),
            None => Ok(RestrictedAlgebra::new_unchecked(raw.lie, raw.pmap)),
        }
    }

    /// The attached module, checked to be a restricted representation.
    pub fn module(&self, alg: &RestrictedAlgebra, src: Option<&str>) -> Result<Option<LModule>, Diagnostic> {
        let Some(md) = &self.module else {
            return Ok(None);
        };
        if md.action.len() != alg.dim() {
            return Err(Diagnostic::at(src, "\"action\"", format!("{} action matrices for dimension {}", md.action.len(), alg.dim())));
        }
        let f = alg.field();
        let mats = md
            .action
            .iter()
            .map(|rows| matrix(f, rows, md.dim, md.dim, "action", src))
            .collect::<Result<Vec<_>, _>>()?;
        let module = LModule::new(&alg.lie, md.dim, mats).map_err(|e| Diagnostic::at(src, "\"module\"", e.to_string()))?;
        RestrictedModule::new(alg, module.clone()).map_err(|e| Diagnostic::at(src, "\"module\"", e.to_string()))?;
        Ok(Some(module))
    }

    /// The attached morphism: target algebra and matrix, checked to be a Lie
    /// morphism. Compatibility with the p-maps is left to
    /// [`crate::restricted::pmap_compat_failure`].
    pub fn morphism(&self, alg: &RestrictedAlgebra, src: Option<&str>) -> Result<Option<(RestrictedAlgebra, FpMatrix)>, Diagnostic> {
        let Some(md) = &self.morphism else {
            return Ok(None);
        };
        if md.target.characteristic != self.characteristic {
            return Err(Diagnostic::at(src, "\"target\"", "target algebra has a different characteristic"));
        }
        let tgt = md.target.algebra(None).map_err(|d| Diagnostic::at(src, "\"target\"", format!("target: {}", d.message)))?;
        let m = matrix(alg.field(), &md.matrix, tgt.dim(), alg.dim(), "matrix", src)?;
        if let Some((i, j)) = crate::restricted::lie_morphism_failure(&alg.lie, &tgt.lie, &m) {
            return Err(Diagnostic::at(src, "\"matrix\"", format!("not a Lie morphism at (e{i}, e{j})")));
        }
        Ok(Some((tgt, m)))
    }

    /// Document of an algebra; coefficients are written as residues in `0..p`.
    pub fn from_algebra(alg: &RestrictedAlgebra) -> Self {
        let n = alg.dim();
        let (brackets, pmap) = sparse_parts(&crate::lie::bracket_cochain(&alg.lie), alg.pmap.images());
        Self {
            characteristic: alg.p(),
            dim: n,
            basis: alg.lie.labels().to_vec(),
            brackets,
            pmap,
            module: None,
            morphism: None,
        }
    }

    pub fn with_morphism(mut self, tgt: &RestrictedAlgebra, m: &FpMatrix) -> Self {
        self.morphism = Some(MorphismDocument {
            target: Box::new(Self::from_algebra(tgt)),
            matrix: matrix_rows(m),
        });
        self
    }

    pub fn with_module(mut self, module: &LModule) -> Self {
        self.module = Some(ModuleDocument {
            dim: module.dim(),
            action: module.action().iter().map(matrix_rows).collect(),
        });
        self
    }

    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }
}

pub fn matrix_rows(m: &FpMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.at(i, j) as i64).collect()).collect()
}

fn raw_i64(v: &FpVector) -> Vec<i64> {
    v.raw().iter().map(|&x| x as i64).collect()
}

/// Nonzero bracket values on increasing pairs and nonzero p-map images.
fn sparse_parts(bracket: &CeCochain, pmap: &[FpVector]) -> (BTreeMap<String, Vec<i64>>, BTreeMap<String, Vec<i64>>) {
    let n = bracket.alg_dim();
    let mut brackets = BTreeMap::new();
    for t in tuples::all(n, 2) {
        let v = bracket.value(&t);
        if !v.is_zero() {
            brackets.insert(format!("{},{}", t[0], t[1]), raw_i64(&v));
        }
    }
    let mut images = BTreeMap::new();
    for (i, v) in pmap.iter().enumerate() {
        if !v.is_zero() {
            images.insert(i.to_string(), raw_i64(v));
        }
    }
    (brackets, images)
}

pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("document serializes");
    serde_json::to_string_pretty(&v).expect("value serializes")
}

impl JetTerm {
    pub fn of(bracket: &CeCochain, pmap: &[FpVector]) -> Self {
        let (brackets, pmap) = sparse_parts(bracket, pmap);
        Self { brackets, pmap }
    }

    /// Bracket coefficient as an adjoint 2-cochain and p-map basis values.
    pub fn parts(&self, base: &RestrictedAlgebra, src: Option<&str>) -> Result<(CeCochain, Vec<FpVector>), Diagnostic> {
        let f = base.field();
        let n = base.dim();
        let mut c = CeCochain::zero(f, n, n, 2);
        for (i, j, v) in brackets_of(f, n, &self.brackets, src)? {
            c.set_value(&[i, j], &v);
        }
        Ok((c, pmap_of(f, n, &self.pmap, src)?))
    }
}

impl JetDocument {
    pub fn parse(text: &str) -> Result<Self, Diagnostic> {
        let doc: Self = serde_json::from_str(text).map_err(from_serde)?;
        if doc.terms.len() != doc.order {
            return Err(Diagnostic::at(
                Some(text),
                "\"terms\"",
                format!("{} terms listed for order {}", doc.terms.len(), doc.order),
            ));
        }
        Ok(doc)
    }

    pub fn deformation(&self, base: &RestrictedAlgebra, src: Option<&str>) -> Result<TruncatedDeformation, Diagnostic> {
        let mut brackets = Vec::with_capacity(self.order);
        let mut pmaps = Vec::with_capacity(self.order);
        for term in &self.terms {
            let (b, w) = term.parts(base, src)?;
            brackets.push(b);
            pmaps.push(w);
        }
        TruncatedDeformation::new(base.clone(), brackets, pmaps).map_err(|e| Diagnostic::at(src, "\"terms\"", e.to_string()))
    }

    pub fn from_deformation(d: &TruncatedDeformation) -> Self {
        Self {
            order: d.order(),
            terms: d.brackets.iter().zip(&d.pmaps).map(|(b, w)| JetTerm::of(b, w)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }
}

/// Parses and checks an algebra file.
pub fn load_algebra(text: &str) -> Result<RestrictedAlgebra, Diagnostic> {
    AlgebraDocument::parse(text)?.algebra(Some(text))
}
