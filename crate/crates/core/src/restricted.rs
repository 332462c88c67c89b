//! p-maps on Lie algebras over `F_p`.
//!
//! A p-map is stored by its values on the basis. Every other value comes
//! from the fold `(x + y)^[p] = x^[p] + y^[p] + s(x, y)`, peeling one basis
//! term at a time, with `(λx)^[p] = λ^p x^[p] = λ x^[p]` on a prime field.
//! The correction `s(x, y)` uses the word expansion
//!
//! ```text
//! s(x, y) = Σ_{w_1 = x, w_2 = y, w_3..w_p ∈ {x, y}} (1 / #x(w)) [w_1, w_2, ..., w_p]
//! ```
//!
//! with left-nested brackets and `#x(w)` the number of letters equal to `x`.

use crate::error::{Error, Result};
use crate::field::{FpMatrix, FpVector, PrimeField};
use crate::lie::{CeCochain, LModule, LieAlgebra};
use crate::tuples;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimal bracket interface shared by algebras over `F_p` and over
/// truncated power series rings.
pub trait BracketOps {
    type Elem: Clone;
    fn field(&self) -> PrimeField;
    fn zero_like(&self, x: &Self::Elem) -> Self::Elem;
    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `acc += c * x` for a scalar in `F_p`.
    fn axpy(&self, acc: &mut Self::Elem, c: u32, x: &Self::Elem);
}

impl BracketOps for LieAlgebra {
    type Elem = FpVector;
    fn field(&self) -> PrimeField {
        LieAlgebra::field(self)
    }
    fn zero_like(&self, x: &FpVector) -> FpVector {
        FpVector::zero(x.field(), x.len())
    }
    fn bracket(&self, a: &FpVector, b: &FpVector) -> FpVector {
        LieAlgebra::bracket(self, a, b)
    }
    fn axpy(&self, acc: &mut FpVector, c: u32, x: &FpVector) {
        acc.axpy(c, x);
    }
}

/// Sum of the correction terms `s_1 + ... + s_{p-1}` for the pair `(x, y)`.
pub fn s_terms<B: BracketOps>(ops: &B, x: &B::Elem, y: &B::Elem) -> B::Elem {
    let f = ops.field();
    let p = f.p() as usize;
    let inv: Vec<u32> = (0..p).map(|k| if k == 0 { 0 } else { f.inv(k as u32).unwrap() }).collect();
    let mut acc = ops.zero_like(x);
    let start = ops.bracket(x, y);
    s_rec(ops, x, y, start, 2, 1, p, &inv, &mut acc);
    acc
}

#[allow(clippy::too_many_arguments)]
fn s_rec<B: BracketOps>(
    ops: &B,
    x: &B::Elem,
    y: &B::Elem,
    cur: B::Elem,
    len: usize,
    count_x: usize,
    p: usize,
    inv: &[u32],
    acc: &mut B::Elem,
) {
    if len == p {
        ops.axpy(acc, inv[count_x], &cur);
        return;
    }
    let with_x = ops.bracket(&cur, x);
    s_rec(ops, x, y, with_x, len + 1, count_x + 1, p, inv, acc);
    let with_y = ops.bracket(&cur, y);
    s_rec(ops, x, y, with_y, len + 1, count_x, p, inv, acc);
}

/// `[x, y, ..., y]` with `k` copies of `y`, nested to the left.
pub fn right_ad_power<B: BracketOps>(ops: &B, x: &B::Elem, y: &B::Elem, k: usize) -> B::Elem {
    let mut r = x.clone();
    for _ in 0..k {
        r = ops.bracket(&r, y);
    }
    r
}

/// Basis images of a p-map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMap {
    images: Vec<FpVector>,
}

impl PMap {
    pub fn new(alg: &LieAlgebra, images: Vec<FpVector>) -> Result<Self> {
        if images.len() != alg.dim() {
            return Err(Error::DimensionMismatch {
                context: "p-map image count",
                expected: alg.dim(),
                found: images.len(),
            });
        }
        for v in &images {
            if v.len() != alg.dim() {
                return Err(Error::DimensionMismatch {
                    context: "p-map image",
                    expected: alg.dim(),
                    found: v.len(),
                });
            }
        }
        Ok(Self { images })
    }

    pub fn zero(alg: &LieAlgebra) -> Self {
        Self {
            images: (0..alg.dim()).map(|_| alg.zero()).collect(),
        }
    }

    pub fn images(&self) -> &[FpVector] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &FpVector {
        &self.images[i]
    }
}

/// A Lie algebra together with a verified p-map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedAlgebra {
    pub lie: LieAlgebra,
    pub pmap: PMap,
}

impl RestrictedAlgebra {
    /// Checks the p-map axioms; the error names the first failure.
    pub fn new(lie: LieAlgebra, pmap: PMap) -> Result<Self> {
        let verdict = verify_pmap(&lie, &pmap);
        if let Some(fail) = verdict.failure {
            return Err(Error::CochainInvariantViolated(format!(
                "p-map axiom {:?} fails at ({}, {})",
                fail.axiom, fail.x, fail.y
            )));
        }
        Ok(Self { lie, pmap })
    }

    pub fn new_unchecked(lie: LieAlgebra, pmap: PMap) -> Self {
        Self { lie, pmap }
    }

    pub fn field(&self) -> PrimeField {
        self.lie.field()
    }

    pub fn p(&self) -> u32 {
        self.lie.field().p()
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn pmap_eval(&self, x: &FpVector) -> FpVector {
        pmap_eval(&self.lie, &self.pmap, x)
    }
}

/// Value of the p-map on an arbitrary element.
pub fn pmap_eval(alg: &LieAlgebra, pmap: &PMap, x: &FpVector) -> FpVector {
    let mut acc = alg.zero();
    let mut prefix = alg.zero();
    for (i, c) in x.support() {
        let term = alg.basis(i).scaled(c);
        if !prefix.is_zero() {
            acc.add_assign(&s_terms(alg, &prefix, &term));
        }
        acc.axpy(c, &pmap.images[i]);
        prefix.add_assign(&term);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PMapAxiom {
    /// `(λx)^[p] = λ^p x^[p]`
    Homogeneity,
    /// `[x, y^[p]] = [x, y, ..., y]`
    AdPower,
    /// `(x + y)^[p] = x^[p] + y^[p] + s(x, y)`
    Additivity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMapFailure {
    pub axiom: PMapAxiom,
    pub x: FpVector,
    pub y: FpVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMapVerdict {
    pub failure: Option<PMapFailure>,
}

impl PMapVerdict {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

const RANDOM_PAIRS: usize = 50;

/// Checks the axioms on all basis pairs and on a fixed pseudorandom sample
/// of element pairs.
pub fn verify_pmap(alg: &LieAlgebra, pmap: &PMap) -> PMapVerdict {
    let f = alg.field();
    let p = f.p() as usize;
    let n = alg.dim();
    let fail = |axiom, x: &FpVector, y: &FpVector| PMapVerdict {
        failure: Some(PMapFailure { axiom, x: x.clone(), y: y.clone() }),
    };
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (alg.basis(i), alg.basis(j));
            let lhs = alg.bracket(&x, pmap.image(j));
            let rhs = right_ad_power(alg, &x, &y, p);
            if lhs != rhs {
                return fail(PMapAxiom::AdPower, &x, &y);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..RANDOM_PAIRS {
        let x = random_vector(&mut rng, f, n);
        let y = random_vector(&mut rng, f, n);
        let lam = rng.gen_range(0..f.p());
        let xp = pmap_eval(alg, pmap, &x);
        let yp = pmap_eval(alg, pmap, &y);
        if pmap_eval(alg, pmap, &x.scaled(lam)) != xp.scaled(f.pow(lam, p as u64)) {
            return fail(PMapAxiom::Homogeneity, &x, &x.scaled(lam));
        }
        let mut expect = xp.plus(&yp);
        expect.add_assign(&s_terms(alg, &x, &y));
        if pmap_eval(alg, pmap, &x.plus(&y)) != expect {
            return fail(PMapAxiom::Additivity, &x, &y);
        }
        if alg.bracket(&x, &yp) != right_ad_power(alg, &x, &y, p) {
            return fail(PMapAxiom::AdPower, &x, &y);
        }
    }
    PMapVerdict { failure: None }
}

pub fn random_vector<R: Rng>(rng: &mut R, f: PrimeField, n: usize) -> FpVector {
    FpVector::from_raw(f, (0..n).map(|_| rng.gen_range(0..f.p())).collect())
}

/// Builds a p-map from basis targets after checking `ad(target_j) = ad(e_j)^p`.
pub fn jacobson_build(alg: &LieAlgebra, targets: Vec<FpVector>) -> Result<PMap> {
    let p = alg.field().p() as u64;
    for (j, t) in targets.iter().enumerate().take(alg.dim()) {
        if alg.ad(t) != alg.ad(&alg.basis(j)).pow(p) {
            return Err(Error::AdMismatch(j));
        }
    }
    PMap::new(alg, targets)
}

/// Solves `ad(u_i) = ad(e_i)^p` for every basis element; `None` when some
/// power of an inner derivation is not inner.
pub fn solve_pmap_targets(alg: &LieAlgebra) -> Option<Vec<FpVector>> {
    let f = alg.field();
    let n = alg.dim();
    let cols: Vec<FpVector> = (0..n).map(|k| alg.ad(&alg.basis(k)).to_vector()).collect();
    let a = FpMatrix::from_columns(f, n * n, &cols);
    (0..n)
        .map(|i| {
            let b = alg.ad(&alg.basis(i)).pow(f.p() as u64).to_vector();
            a.solve(&b).expect("shape")
        })
        .collect()
}

/// A module on which `ρ(e_i^[p]) = ρ(e_i)^p` holds for every basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedModule {
    pub module: LModule,
}

impl RestrictedModule {
    pub fn new(alg: &RestrictedAlgebra, module: LModule) -> Result<Self> {
        let p = alg.p() as u64;
        for i in 0..alg.dim() {
            let lhs = module.action_of(alg.pmap.image(i));
            if lhs != module.action()[i].pow(p) {
                return Err(Error::NotRestrictedModule(i));
            }
        }
        Ok(Self { module })
    }

    pub fn adjoint(alg: &RestrictedAlgebra) -> Self {
        Self {
            module: LModule::adjoint(&alg.lie),
        }
    }

    pub fn trivial(alg: &RestrictedAlgebra) -> Self {
        Self {
            module: LModule::trivial(&alg.lie),
        }
    }
}

/// Linear map between restricted algebras, given by the images of the
/// source basis as columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedMorphism {
    pub matrix: FpMatrix,
}

impl RestrictedMorphism {
    pub fn new(src: &RestrictedAlgebra, tgt: &RestrictedAlgebra, matrix: FpMatrix) -> Result<Self> {
        Self::check_shape(src, tgt, &matrix)?;
        if let Some((i, j)) = lie_morphism_failure(&src.lie, &tgt.lie, &matrix) {
            return Err(Error::NotLieMorphism(i, j));
        }
        if let Some(i) = pmap_compat_failure(src, tgt, &matrix) {
            return Err(Error::NotRestrictedMorphism(i));
        }
        Ok(Self { matrix })
    }

    /// Only checks the shape; the morphism conditions are left to the caller.
    pub fn new_unchecked(src: &RestrictedAlgebra, tgt: &RestrictedAlgebra, matrix: FpMatrix) -> Result<Self> {
        Self::check_shape(src, tgt, &matrix)?;
        Ok(Self { matrix })
    }

    fn check_shape(src: &RestrictedAlgebra, tgt: &RestrictedAlgebra, matrix: &FpMatrix) -> Result<()> {
        if matrix.rows() != tgt.dim() || matrix.cols() != src.dim() {
            return Err(Error::DimensionMismatch {
                context: "morphism matrix",
                expected: tgt.dim() * src.dim(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        Ok(())
    }

    pub fn apply(&self, x: &FpVector) -> FpVector {
        self.matrix.mul_vec(x)
    }
}

/// First basis pair on which `φ[x, y] != [φx, φy]`.
pub fn lie_morphism_failure(src: &LieAlgebra, tgt: &LieAlgebra, phi: &FpMatrix) -> Option<(usize, usize)> {
    let n = src.dim();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = phi.mul_vec(&src.bracket_basis(i, j));
            let rhs = tgt.bracket(&phi.column(i), &phi.column(j));
            if lhs != rhs {
                return Some((i, j));
            }
        }
    }
    None
}

/// First basis element on which `φ(x^[p]) != φ(x)^[p]`.
pub fn pmap_compat_failure(src: &RestrictedAlgebra, tgt: &RestrictedAlgebra, phi: &FpMatrix) -> Option<usize> {
    (0..src.dim()).find(|&i| phi.mul_vec(src.pmap.image(i)) != tgt.pmap_eval(&phi.column(i)))
}

fn require_p2(f: PrimeField) -> Result<()> {
    if f.p() != 2 {
        return Err(Error::CharacteristicUnsupported {
            p: f.p(),
            reason: "construction is specific to characteristic 2",
        });
    }
    Ok(())
}

/// Semidirect product `L ⋉ g` in characteristic 2 for an action
/// `π: L -> Der(g)` given by one matrix per basis element of `L`.
///
/// The bracket is `[(x, g), (y, h)] = ([x, y], π(x)h + π(y)g + [g, h])` and
/// the 2-map is `(x, g)^[2] = (x^[2], π(x)g + g^[2])`. Requires `π` to be a
/// restricted morphism and `π(x)(g^[2]) = [π(x)g, g]`.
pub fn semidirect_product_p2(l: &RestrictedAlgebra, g: &RestrictedAlgebra, pi: &[FpMatrix]) -> Result<RestrictedAlgebra> {
    let f = l.field();
    require_p2(f)?;
    let (nl, ng) = (l.dim(), g.dim());
    if pi.len() != nl || pi.iter().any(|m| m.rows() != ng || m.cols() != ng) {
        return Err(Error::DimensionMismatch {
            context: "action matrices",
            expected: nl,
            found: pi.len(),
        });
    }
    for (i, d) in pi.iter().enumerate() {
        for a in 0..ng {
            for b in a + 1..ng {
                let lhs = d.mul_vec(&g.lie.bracket_basis(a, b));
                let mut rhs = g.lie.bracket(&d.column(a), &g.lie.basis(b));
                rhs.add_assign(&g.lie.bracket(&g.lie.basis(a), &d.column(b)));
                if lhs != rhs {
                    return Err(Error::NotDerivation(i, a, b));
                }
            }
        }
    }
    let module = LModule::new(&l.lie, ng, pi.to_vec()).map_err(|e| match e {
        Error::NotRepresentation(i, j) => Error::NotRestrictedAction(format!("bracket of e_{i} and e_{j} not preserved")),
        other => other,
    })?;
    for i in 0..nl {
        if module.action_of(l.pmap.image(i)) != pi[i].pow(2) {
            return Err(Error::NotRestrictedAction(format!("π(e_{i}^[2]) != π(e_{i})^2")));
        }
        for a in 0..ng {
            let lhs = pi[i].mul_vec(g.pmap.image(a));
            let rhs = g.lie.bracket(&pi[i].column(a), &g.lie.basis(a));
            if lhs != rhs {
                return Err(Error::NotRestrictedAction(format!(
                    "π(e_{i})(f_{a}^[2]) != [π(e_{i}) f_{a}, f_{a}]"
                )));
            }
        }
    }
    let n = nl + ng;
    let mut brackets = Vec::new();
    let embed = |v: &FpVector, offset: usize| {
        let mut w = FpVector::zero(f, n);
        for (k, c) in v.support() {
            w.raw_mut()[offset + k] = c;
        }
        w
    };
    for i in 0..nl {
        for j in i + 1..nl {
            brackets.push((i, j, embed(&l.lie.bracket_basis(i, j), 0)));
        }
        for a in 0..ng {
            brackets.push((i, nl + a, embed(&pi[i].column(a), nl)));
        }
    }
    for a in 0..ng {
        for b in a + 1..ng {
            brackets.push((nl + a, nl + b, embed(&g.lie.bracket_basis(a, b), nl)));
        }
    }
    let mut labels: Vec<String> = l.lie.labels().to_vec();
    labels.extend(g.lie.labels().iter().cloned());
    let lie = LieAlgebra::from_brackets(f, labels, &brackets)?;
    let mut images: Vec<FpVector> = (0..nl).map(|i| embed(l.pmap.image(i), 0)).collect();
    images.extend((0..ng).map(|a| embed(g.pmap.image(a), nl)));
    let pmap = PMap::new(&lie, images)?;
    RestrictedAlgebra::new(lie, pmap)
}

/// Scalar function on `F_2^n` stored by value on every vector; bit `i` of the
/// index is the coordinate of `e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm2 {
    n: usize,
    values: Vec<u32>,
}

impl QuadraticForm2 {
    pub fn from_table(n: usize, values: Vec<u32>) -> Result<Self> {
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                context: "quadratic form table",
                expected: 1 << n,
                found: values.len(),
            });
        }
        Ok(Self { n, values: values.into_iter().map(|v| v & 1).collect() })
    }

    /// Extends basis values by `ω(x + y) = ω(x) + ω(y) + φ(x, y)`.
    pub fn from_basis(phi: &CeCochain, basis_values: &[u32]) -> Self {
        let n = phi.alg_dim();
        let f = phi.field();
        let mut values = vec![0u32; 1 << n];
        for mask in 1usize..(1 << n) {
            let i = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let mut v = f.add(values[rest], basis_values[i] & 1);
            for j in (0..n).filter(|&j| rest >> j & 1 == 1) {
                v = f.add(v, phi.eval_basis(&[i, j]).raw()[0]);
            }
            values[mask] = v;
        }
        Self { n, values }
    }

    pub fn value(&self, x: &FpVector) -> u32 {
        self.values[mask_of(x)]
    }

    pub fn basis_value(&self, i: usize) -> u32 {
        self.values[1 << i]
    }

    /// First pair violating the polarization rule with respect to `phi`.
    pub fn polarization_failure(&self, phi: &CeCochain) -> Option<(usize, usize)> {
        let f = phi.field();
        let n = self.n;
        for a in 0..(1usize << n) {
            for b in 0..(1usize << n) {
                let (x, y) = (vector_of(f, n, a), vector_of(f, n, b));
                let rhs = f.add(f.add(self.values[a], self.values[b]), phi.eval(&[&x, &y]).raw()[0]);
                if self.values[a ^ b] != rhs {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

fn mask_of(x: &FpVector) -> usize {
    x.support().fold(0, |m, (i, _)| m | 1 << i)
}

fn vector_of(f: PrimeField, n: usize, mask: usize) -> FpVector {
    FpVector::from_raw(f, (0..n).map(|i| (mask >> i & 1) as u32).collect())
}

/// One-dimensional central extension `L ⊕ F c` in characteristic 2 with
/// `[x, y] + φ(x, y)c` and `x^[2] + ω(x)c`.
pub fn central_extension_p2(l: &RestrictedAlgebra, phi: &CeCochain, omega: &QuadraticForm2) -> Result<RestrictedAlgebra> {
    let f = l.field();
    require_p2(f)?;
    let n = l.dim();
    if phi.alg_dim() != n || phi.module_dim() != 1 || phi.degree() != 2 || omega.n != n {
        return Err(Error::DimensionMismatch {
            context: "central extension cochain",
            expected: n,
            found: phi.alg_dim(),
        });
    }
    if let Some((a, b)) = omega.polarization_failure(phi) {
        return Err(Error::CochainInvariantViolated(format!(
            "ω(x + y) != ω(x) + ω(y) + φ(x, y) at masks ({a}, {b})"
        )));
    }
    let lift = |v: &FpVector, c: u32| {
        let mut w = FpVector::zero(f, n + 1);
        w.raw_mut()[..n].copy_from_slice(v.raw());
        w.raw_mut()[n] = c;
        w
    };
    let mut brackets = Vec::new();
    for t in tuples::all(n, 2) {
        let c = phi.value(&t).raw()[0];
        brackets.push((t[0], t[1], lift(&l.lie.bracket_basis(t[0], t[1]), c)));
    }
    let mut labels = l.lie.labels().to_vec();
    labels.push("c".into());
    let lie = LieAlgebra::from_brackets(f, labels, &brackets)?;
    let mut images: Vec<FpVector> = (0..n).map(|i| lift(l.pmap.image(i), omega.basis_value(i))).collect();
    images.push(FpVector::zero(f, n + 1));
    let pmap = PMap::new(&lie, images)?;
    RestrictedAlgebra::new(lie, pmap)
}

/// Coefficients of `(Σ t^i x_i)^[2]` in characteristic 2: the coefficient of
/// `t^k` is `x_{k/2}^[2]` (k even) plus `Σ_{i<j, i+j=k} [x_i, x_j]`.
pub fn pmap_extend_formal_p2(alg: &LieAlgebra, pmap: &PMap, jet: &[FpVector]) -> Result<Vec<FpVector>> {
    require_p2(alg.field())?;
    let len = if jet.is_empty() { 0 } else { 2 * jet.len() - 1 };
    let mut out = vec![alg.zero(); len];
    for (i, xi) in jet.iter().enumerate() {
        out[2 * i].add_assign(&pmap_eval(alg, pmap, xi));
        for (j, xj) in jet.iter().enumerate().skip(i + 1) {
            out[i + j].add_assign(&alg.bracket(xi, xj));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis(p: u32, theta: [i64; 3]) -> (LieAlgebra, PMap) {
        let f = PrimeField::new(p).unwrap();
        let lie = LieAlgebra::from_brackets(
            f,
            vec!["x".into(), "y".into(), "z".into()],
            &[(0, 1, FpVector::from_i64(f, &[0, 0, 1]))],
        )
        .unwrap();
        let images = theta.iter().map(|&t| FpVector::from_i64(f, &[0, 0, t])).collect();
        let pm = PMap::new(&lie, images).unwrap();
        (lie, pm)
    }

    #[test]
    fn s_terms_for_p3_match_closed_form() {
        let f = PrimeField::new(3).unwrap();
        // gl_2 style algebra: sl_2 basis e, h, f
        let lie = LieAlgebra::from_brackets(
            f,
            vec!["e".into(), "h".into(), "f".into()],
            &[
                (0, 2, FpVector::from_i64(f, &[0, 1, 0])),
                (1, 0, FpVector::from_i64(f, &[2, 0, 0])),
                (1, 2, FpVector::from_i64(f, &[0, 0, -2])),
            ],
        )
        .unwrap();
        let x = FpVector::from_i64(f, &[1, 2, 0]);
        let y = FpVector::from_i64(f, &[0, 1, 1]);
        let xy = lie.bracket(&x, &y);
        let mut expect = lie.bracket(&xy, &y);
        expect.axpy(2, &lie.bracket(&xy, &x));
        assert_eq!(s_terms(&lie, &x, &y), expect);
    }

    #[test]
    fn s_terms_for_p2_is_bracket() {
        let (lie, _) = heis(2, [0, 0, 0]);
        let x = FpVector::from_i64(lie.field(), &[1, 1, 0]);
        let y = FpVector::from_i64(lie.field(), &[0, 1, 1]);
        assert_eq!(s_terms(&lie, &x, &y), lie.bracket(&x, &y));
    }

    #[test]
    fn heisenberg_with_bad_image_fails_ad_power() {
        let f = PrimeField::new(3).unwrap();
        let (lie, _) = heis(3, [0, 0, 0]);
        let images = vec![
            FpVector::from_i64(f, &[1, 0, 0]),
            lie.zero(),
            lie.zero(),
        ];
        let pm = PMap::new(&lie, images).unwrap();
        let v = verify_pmap(&lie, &pm);
        let fail = v.failure.unwrap();
        assert_eq!(fail.axiom, PMapAxiom::AdPower);
        assert_eq!((fail.x, fail.y), (lie.basis(1), lie.basis(0)));
    }

    #[test]
    fn heisenberg_structures_verify() {
        for p in [2, 3, 5, 7] {
            for theta in [[0, 0, 0], [1, 0, 0], [0, 0, 1], [1, 2, 1]] {
                let (lie, pm) = heis(p, theta);
                assert!(verify_pmap(&lie, &pm).passed(), "p={p} theta={theta:?}");
            }
        }
    }

    #[test]
    fn jacobson_rejects_wrong_targets() {
        let (lie, _) = heis(5, [0, 0, 0]);
        let bad = vec![lie.basis(0), lie.zero(), lie.zero()];
        assert_eq!(jacobson_build(&lie, bad), Err(Error::AdMismatch(0)));
        let t = solve_pmap_targets(&lie).unwrap();
        assert!(jacobson_build(&lie, t).is_ok());
    }

    #[test]
    fn formal_square_of_constant_jet() {
        let (lie, pm) = heis(2, [0, 0, 1]);
        let out = pmap_extend_formal_p2(&lie, &pm, &[lie.basis(2), lie.basis(0), lie.basis(1)]).unwrap();
        assert_eq!(out[0], lie.basis(2));
        assert!(out[1].is_zero());
        assert!(out[2].is_zero());
        assert_eq!(out[3], lie.basis(2));
    }
}
