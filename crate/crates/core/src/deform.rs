//! Truncated formal deformations of restricted Lie algebras.
//!
//! A deformation of order `N` is a bracket `m_t = [,] + Σ t^i m_i` and a
//! p-map `ω_t = (·)^[p] + Σ t^i ω_i`, both given on the basis, such that
//! `L ⊗ F_p[t]/(t^{N+1})` is a restricted Lie algebra. By Jacobson's
//! criterion this amounts to the Jacobi identity on basis triples and
//! `[x, ω_t(y)] = [x, y, ..., y]` on basis pairs, both over the truncated
//! ring.

use crate::complex::{cochain_len, differential_matrix, Regime};
use crate::error::{Error, Result};
use crate::field::{FpMatrix, FpVector};
use crate::jet::{add_series, apply_jet, leading_degree, sub_series, Series, TruncatedAlgebra};
use crate::lie::{CeCochain, LModule};
use crate::rescoh_2::RC2n;
use crate::rescoh_p::{Setting, RC2};
use crate::restricted::{right_ad_power, BracketOps, RestrictedAlgebra};
use crate::tuples;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedDeformation {
    pub base: RestrictedAlgebra,
    /// `m_1, ..., m_N` as adjoint-valued 2-cochains.
    pub brackets: Vec<CeCochain>,
    /// `ω_1, ..., ω_N` on the basis.
    pub pmaps: Vec<Vec<FpVector>>,
}

impl TruncatedDeformation {
    pub fn new(base: RestrictedAlgebra, brackets: Vec<CeCochain>, pmaps: Vec<Vec<FpVector>>) -> Result<Self> {
        let n = base.dim();
        if brackets.len() != pmaps.len() {
            return Err(Error::DimensionMismatch {
                context: "deformation orders",
                expected: brackets.len(),
                found: pmaps.len(),
            });
        }
        for b in &brackets {
            if b.alg_dim() != n || b.module_dim() != n || b.degree() != 2 {
                return Err(Error::DimensionMismatch {
                    context: "deformation bracket",
                    expected: n,
                    found: b.alg_dim(),
                });
            }
        }
        for w in &pmaps {
            if w.len() != n || w.iter().any(|v| v.len() != n) {
                return Err(Error::DimensionMismatch {
                    context: "deformation p-map",
                    expected: n,
                    found: w.len(),
                });
            }
        }
        Ok(Self { base, brackets, pmaps })
    }

    /// The trivial deformation of the given order.
    pub fn constant(base: RestrictedAlgebra, order: usize) -> Self {
        let n = base.dim();
        let f = base.field();
        Self {
            brackets: vec![CeCochain::zero(f, n, n, 2); order],
            pmaps: vec![vec![FpVector::zero(f, n); n]; order],
            base,
        }
    }

    pub fn order(&self) -> usize {
        self.brackets.len()
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.base.p())
    }

    /// The deformed algebra over `F_p[t]/(t^{order+1})`; orders beyond the
    /// stored ones are zero.
    pub fn algebra(&self, order: usize) -> TruncatedAlgebra {
        TruncatedAlgebra::from_parts(&self.base.lie, self.base.pmap.images(), &self.brackets, &self.pmaps, order)
    }

    /// Order-1 deformation from a restricted 2-cochain in coordinates.
    pub fn order_one(base: RestrictedAlgebra, coords: &FpVector) -> Result<Self> {
        let (bracket, pmap) = split_c2(&base, coords)?;
        Self::new(base, vec![bracket], vec![pmap])
    }

    /// Truncation to a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        Self {
            base: self.base.clone(),
            brackets: self.brackets[..order.min(self.order())].to_vec(),
            pmaps: self.pmaps[..order.min(self.order())].to_vec(),
        }
    }
}

/// Splits a restricted 2-cochain (adjoint values) into bracket and p-map parts.
pub fn split_c2(base: &RestrictedAlgebra, coords: &FpVector) -> Result<(CeCochain, Vec<FpVector>)> {
    let n = base.dim();
    match Regime::of(base.p()) {
        Regime::Odd => {
            let c = RC2::from_coords(n, n, coords)?;
            Ok((c.phi, c.omega))
        }
        Regime::Two => {
            let c = RC2n::from_coords(n, n, 2, coords)?;
            Ok((c.phi, c.omega))
        }
    }
}

/// Inverse of [`split_c2`].
pub fn join_c2(base: &RestrictedAlgebra, bracket: &CeCochain, pmap: &[FpVector]) -> FpVector {
    match Regime::of(base.p()) {
        Regime::Odd => RC2 {
            phi: bracket.clone(),
            omega: pmap.to_vec(),
        }
        .coords(),
        Regime::Two => RC2n {
            degree: 2,
            phi: bracket.clone(),
            omega: pmap.to_vec(),
        }
        .coords(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// Jacobi identity on a basis triple.
    Jacobi(usize, usize, usize),
    /// `[e_i, ω_t(e_j)] = [e_i, e_j, ..., e_j]`.
    PMap(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationCheck {
    /// Lowest failing degree and the first identity failing there.
    pub failure: Option<(usize, Identity)>,
}

impl DeformationCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn check_deformation(d: &TruncatedDeformation) -> DeformationCheck {
    let alg = d.algebra(d.order());
    let n = d.base.dim();
    let mut best: Option<(usize, Identity)> = None;
    let mut consider = |deg: Option<usize>, id: Identity| {
        if let Some(k) = deg {
            if best.is_none_or(|(b, _)| k < b) {
                best = Some((k, id));
            }
        }
    };
    for t in tuples::all(n, 3) {
        consider(leading_degree(&alg.jacobi(t[0], t[1], t[2])), Identity::Jacobi(t[0], t[1], t[2]));
    }
    for i in 0..n {
        for j in 0..n {
            consider(leading_degree(&alg.pmap_defect(i, j)), Identity::PMap(i, j));
        }
    }
    DeformationCheck { failure: best }
}

fn adjoint_setting_parts(base: &RestrictedAlgebra) -> LModule {
    LModule::adjoint(&base.lie)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Infinitesimal {
    /// `(m_1, ω_1)` as a restricted 2-cochain.
    pub cochain: FpVector,
    /// Its restricted differential.
    pub differential: FpVector,
}

impl Infinitesimal {
    pub fn is_cocycle(&self) -> bool {
        self.differential.is_zero()
    }
}

pub fn infinitesimal(d: &TruncatedDeformation) -> Result<Infinitesimal> {
    if d.order() == 0 {
        return Err(Error::OrderUnsupported("a deformation of order 0 has no infinitesimal part".into()));
    }
    let module = adjoint_setting_parts(&d.base);
    let s = Setting::new(&d.base, &module);
    let cochain = join_c2(&d.base, &d.brackets[0], &d.pmaps[0]);
    let differential = differential_matrix(&s, 2)?.mul_vec(&cochain);
    Ok(Infinitesimal { cochain, differential })
}

/// Formal automorphism jet `φ_t = Σ t^i φ_i` with `φ_0 = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub maps: Vec<FpMatrix>,
    /// Dimension of the space of choices at each order (restricted
    /// 1-cocycles with adjoint values).
    pub gauge_dim: usize,
}

/// Coefficient of `t^k` of the equivalence equations
/// `m'_t(φ_t x, φ_t y) - φ_t m_t(x, y)` on increasing basis pairs followed by
/// `ω'_t(φ_t x) - φ_t ω_t(x)` on the basis.
pub fn equivalence_residual(d: &TruncatedDeformation, d2: &TruncatedDeformation, maps: &[FpMatrix], k: usize) -> FpVector {
    let a = d.algebra(k);
    let b = d2.algebra(k);
    let n = d.base.dim();
    let f = d.base.field();
    let img: Vec<Series> = (0..n).map(|i| apply_jet(maps, &a.basis(i), k)).collect();
    let mut parts = Vec::new();
    for t in tuples::all(n, 2) {
        let lhs = b.bracket(&img[t[0]], &img[t[1]]);
        let rhs = apply_jet(maps, &a.bracket(&a.basis(t[0]), &a.basis(t[1])), k);
        parts.push(lhs[k].minus(&rhs[k]));
    }
    for (i, im) in img.iter().enumerate() {
        let lhs = b.pmap(im);
        let rhs = apply_jet(maps, &a.pmap_basis(i), k);
        parts.push(lhs[k].minus(&rhs[k]));
    }
    let refs: Vec<&FpVector> = parts.iter().collect();
    FpVector::concat(f, &refs)
}

/// Order by order construction of an equivalence `D -> D'`. Each order solves
/// `d¹_*(φ_k) = -residual_k`; free variables are set to zero.
pub fn equivalence_solve(d: &TruncatedDeformation, d2: &TruncatedDeformation) -> Result<Option<Equivalence>> {
    if d.base != d2.base {
        return Err(Error::CochainInvariantViolated("deformations of different algebras".into()));
    }
    let n = d.base.dim();
    let f = d.base.field();
    let order = d.order().max(d2.order());
    let module = adjoint_setting_parts(&d.base);
    let s = Setting::new(&d.base, &module);
    let d1 = differential_matrix(&s, 1)?;
    let gauge_dim = d1.kernel_basis().len();
    let mut maps = vec![FpMatrix::identity(f, n)];
    for k in 1..=order {
        maps.push(FpMatrix::zeros(f, n, n));
        let r = equivalence_residual(d, d2, &maps, k);
        let Some(x) = d1.solve(&r.scaled(f.neg(1)))? else {
            return Ok(None);
        };
        let phi = CeCochain::from_coords(n, n, 1, &x)?;
        let cols: Vec<FpVector> = (0..n).map(|i| phi.value(&[i])).collect();
        maps[k] = FpMatrix::from_columns(f, n, &cols);
        debug_assert!(equivalence_residual(d, d2, &maps, k).is_zero());
    }
    Ok(Some(Equivalence { maps, gauge_dim }))
}

/// Obstruction to extending an order-n deformation, as a restricted
/// 3-cochain in coordinates together with its two components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionPair {
    pub order: usize,
    /// Alternating part on increasing basis triples.
    pub obs1: CeCochain,
    /// p-map part on basis pairs, stored in the layout of the restricted
    /// 3-cochains of the regime: for `p >= 3` index `i * n + j` holds the
    /// value with `e_j` in the p-map slot; for `p = 2` index `i * n + j`
    /// holds `e_i` in the quadratic slot and `e_j` in the linear slot.
    pub obs2: Vec<FpVector>,
}

impl ObstructionPair {
    pub fn coords(&self) -> FpVector {
        let mut parts = vec![self.obs1.coords()];
        parts.extend(self.obs2.iter().cloned());
        let refs: Vec<&FpVector> = parts.iter().collect();
        FpVector::concat(self.obs1.field(), &refs)
    }
}

fn cyclic_sum(d: &TruncatedDeformation, a: usize, b: usize, triple: &[usize]) -> FpVector {
    let n = d.base.dim();
    let f = d.base.field();
    let e = |i: usize| FpVector::basis(f, n, i);
    let (ma, mb) = (&d.brackets[a - 1], &d.brackets[b - 1]);
    let mut acc = FpVector::zero(f, n);
    for r in 0..3 {
        let (x, y, z) = (triple[r], triple[(r + 1) % 3], triple[(r + 2) % 3]);
        let inner = mb.eval(&[&e(y), &e(z)]);
        acc.add_assign(&ma.eval(&[&e(x), &inner]));
    }
    acc
}

/// Explicit obstruction at order `n = d.order()`:
///
/// ```text
/// p >= 3:  Obs1 = -Σ_{i=1}^n ⟲ m_i(x, m_{n+1-i}(y, z))
///          Obs2(x, y) = Σ_{i=1}^n m_i(x, ω_{n+1-i}(y))
///                       - Σ_{i_1+..+i_p = n+1, i_k <= n} m_{i_p}(..m_{i_1}(x, y).., y)
/// p = 2:   Obs1 = Σ_{i=1}^n ⟲ m_i(x, m_{n+1-i}(y, z))
///          Obs2(x, y) = Σ_{i=1}^n m_i(y, ω_{n+1-i}(x)) + m_i(m_{n+1-i}(y, x), x)
/// ```
///
/// with `x` the quadratic slot in the `p = 2` case.
pub fn obstruction(d: &TruncatedDeformation) -> Result<ObstructionPair> {
    let order = d.order();
    if order == 0 {
        return Err(Error::OrderUnsupported("obstructions start at order 1".into()));
    }
    let n = d.base.dim();
    let f = d.base.field();
    let e = |i: usize| FpVector::basis(f, n, i);
    let regime = d.regime();
    let mut obs1 = CeCochain::zero(f, n, n, 3);
    for t in tuples::all(n, 3) {
        let mut acc = FpVector::zero(f, n);
        for i in 1..=order {
            acc.add_assign(&cyclic_sum(d, i, order + 1 - i, &t));
        }
        if regime == Regime::Odd {
            acc = acc.scaled(f.neg(1));
        }
        obs1.set_value(&t, &acc);
    }
    let mut obs2 = Vec::with_capacity(n * n);
    match regime {
        Regime::Odd => {
            let alg = d.algebra(order + 1);
            let p = f.p() as usize;
            for a in 0..n {
                for b in 0..n {
                    let mut acc = FpVector::zero(f, n);
                    for i in 1..=order {
                        acc.add_assign(&d.brackets[i - 1].eval(&[&e(a), &d.pmaps[order - i][b]]));
                    }
                    let chain = right_ad_power(&alg, &alg.basis(a), &alg.basis(b), p);
                    acc.sub_assign(&chain[order + 1]);
                    obs2.push(acc);
                }
            }
        }
        Regime::Two => {
            for a in 0..n {
                for b in 0..n {
                    // a: quadratic slot x, b: linear slot y
                    let mut acc = FpVector::zero(f, n);
                    for i in 1..=order {
                        let mi = &d.brackets[i - 1];
                        acc.add_assign(&mi.eval(&[&e(b), &d.pmaps[order - i][a]]));
                        let inner = d.brackets[order - i].eval(&[&e(b), &e(a)]);
                        acc.add_assign(&mi.eval(&[&inner, &e(a)]));
                    }
                    obs2.push(acc);
                }
            }
        }
    }
    Ok(ObstructionPair { order, obs1, obs2 })
}

/// The same obstruction read off the deformation equations at order `n + 1`
/// with vanishing `(m_{n+1}, ω_{n+1})`.
pub fn obstruction_residual(d: &TruncatedDeformation) -> Result<FpVector> {
    let order = d.order();
    if order == 0 {
        return Err(Error::OrderUnsupported("obstructions start at order 1".into()));
    }
    let alg = d.algebra(order + 1);
    let n = d.base.dim();
    let f = d.base.field();
    let mut obs1 = CeCochain::zero(f, n, n, 3);
    for t in tuples::all(n, 3) {
        let j = alg.jacobi(t[0], t[1], t[2]);
        obs1.set_value(&t, &j[order + 1].scaled(f.neg(1)));
    }
    let mut obs2 = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let v = match d.regime() {
                Regime::Odd => alg.pmap_defect(a, b)[order + 1].clone(),
                Regime::Two => alg.pmap_defect(b, a)[order + 1].clone(),
            };
            obs2.push(v);
        }
    }
    Ok(ObstructionPair { order, obs1, obs2 }.coords())
}

/// Extends an order-n deformation to order `n + 1` when the obstruction is a
/// coboundary. The new coefficients are one solution of
/// `d²_*(m_{n+1}, ω_{n+1}) = Obs`.
pub fn extend_order(d: &TruncatedDeformation) -> Result<Option<TruncatedDeformation>> {
    let obs = obstruction(d)?;
    let module = adjoint_setting_parts(&d.base);
    let s = Setting::new(&d.base, &module);
    let d2 = differential_matrix(&s, 2)?;
    let Some(x) = d2.solve(&obs.coords())? else {
        return Ok(None);
    };
    let (bracket, pmap) = split_c2(&d.base, &x)?;
    let mut out = d.clone();
    out.brackets.push(bracket);
    out.pmaps.push(pmap);
    debug_assert!(check_deformation(&out).passed());
    Ok(Some(out))
}

/// `d¹_*(N)`: the pair `([x, y]_N, x^{[p]_N})` for a linear map `N`.
pub fn nijenhuis_jet(base: &RestrictedAlgebra, n_map: &FpMatrix) -> Result<FpVector> {
    let module = adjoint_setting_parts(base);
    let s = Setting::new(base, &module);
    let n = base.dim();
    let cols: Vec<FpVector> = (0..n).map(|i| n_map.column(i)).collect();
    let mut c = CeCochain::zero(base.field(), n, n, 1);
    for (i, col) in cols.iter().enumerate() {
        c.set_value(&[i], col);
    }
    let _ = cochain_len(&s, 1)?;
    crate::complex::differential(&s, 1, &c.coords())
}

/// Checks `N([Nx, y] + [x, Ny] - N[x, y]) = [Nx, Ny]` on basis pairs and
/// `-N(x^{[p]_N}) = (Nx)^[p]` on the basis.
pub fn nijenhuis_check(base: &RestrictedAlgebra, n_map: &FpMatrix) -> Result<bool> {
    let n = base.dim();
    let f = base.field();
    let lie = &base.lie;
    let jet = nijenhuis_jet(base, n_map)?;
    let (bracket_n, pmap_n) = split_c2(base, &jet)?;
    for i in 0..n {
        for j in i + 1..n {
            let lhs = n_map.mul_vec(&bracket_n.value(&[i, j]));
            let rhs = lie.bracket(&n_map.column(i), &n_map.column(j));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    for (i, w) in pmap_n.iter().enumerate() {
        let lhs = n_map.mul_vec(w).scaled(f.neg(1));
        if lhs != base.pmap_eval(&n_map.column(i)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Order-1 deformation `([,] + t[,]_N, (·)^[p] + t (·)^{[p]_N})`.
pub fn nijenhuis_deformation(base: &RestrictedAlgebra, n_map: &FpMatrix) -> Result<TruncatedDeformation> {
    let jet = nijenhuis_jet(base, n_map)?;
    TruncatedDeformation::order_one(base.clone(), &jet)
}

/// Series helper re-exported for callers that evaluate deformed brackets.
pub fn deformed_bracket(d: &TruncatedDeformation, x: &Series, y: &Series) -> Series {
    d.algebra(x.len() - 1).bracket(x, y)
}

/// Sum of two series, for callers outside this crate.
pub fn series_sum(a: &Series, b: &Series) -> Series {
    let mut out = a.clone();
    add_series(&mut out, b);
    out
}

/// Difference of two series.
pub fn series_diff(a: &Series, b: &Series) -> Series {
    let mut out = a.clone();
    sub_series(&mut out, b);
    out
}

/// Inverse of a jet `Σ t^i φ_i` with `φ_0 = id`, up to `order`.
pub fn inverse_jet(maps: &[FpMatrix], order: usize) -> Vec<FpMatrix> {
    let f = maps[0].field();
    let n = maps[0].rows();
    let mut inv = vec![FpMatrix::identity(f, n)];
    for k in 1..=order {
        let mut acc = FpMatrix::zeros(f, n, n);
        for i in 1..=k.min(maps.len() - 1) {
            acc = acc.add(&maps[i].mul(&inv[k - i]).expect("square jets"));
        }
        inv.push(acc.scaled(f.neg(1)));
    }
    inv
}

/// The deformation `D'` with `m'_t(Φx, Φy) = Φ m_t(x, y)` and
/// `ω'_t(Φx) = Φ ω_t(x)` for a jet `Φ = Σ t^i φ_i` with `φ_0 = id`.
pub fn transport(d: &TruncatedDeformation, maps: &[FpMatrix]) -> Result<TruncatedDeformation> {
    let order = d.order();
    let n = d.base.dim();
    let f = d.base.field();
    if maps.is_empty() || maps[0] != FpMatrix::identity(f, n) {
        return Err(Error::CochainInvariantViolated("automorphism jets start with the identity".into()));
    }
    let alg = d.algebra(order);
    let inv = inverse_jet(maps, order);
    let pre: Vec<Series> = (0..n).map(|i| apply_jet(&inv, &alg.basis(i), order)).collect();
    let mut brackets = vec![CeCochain::zero(f, n, n, 2); order];
    for t in tuples::all(n, 2) {
        let v = apply_jet(maps, &alg.bracket(&pre[t[0]], &pre[t[1]]), order);
        for k in 1..=order {
            brackets[k - 1].set_value(&t, &v[k]);
        }
    }
    let mut pmaps = vec![Vec::with_capacity(n); order];
    for pi in &pre {
        let v = apply_jet(maps, &alg.pmap(pi), order);
        for k in 1..=order {
            pmaps[k - 1].push(v[k].clone());
        }
    }
    TruncatedDeformation::new(d.base.clone(), brackets, pmaps)
}
