//! Deformation cohomology of restricted morphisms.
//!
//! For `φ: L -> M`, `M` becomes an `L`-module through `x·m = [φ(x), m]`.
//! A q-cochain of the morphism complex is a triple: a q-cochain of `L`, a
//! q-cochain of `M` (adjoint values) and a (q-1)-cochain of `L` with values in
//! `M`. The differential is
//!
//! ```text
//! (μ, ν, θ) ↦ (d μ, d ν, φ∘μ - ν∘φ - d θ)
//! ```
//!
//! applied to whole restricted cochains, so that the p-map components of the
//! last slot give `β_{ω,ε}(θ)(x) = θ(x^[p]) + φ(ω(x)) - ε(φ(x)) - x^{p-1}·θ(x)`
//! for `p >= 3`. In characteristic 2 every sign is `+`. For `p >= 3` the
//! restricted complex is defined in degrees up to 3; the third slot of a
//! degree-3 cochain is a bilinear map plus p-homogeneous basis values.

use crate::complex::{cochain_len, differential, pullback, pushforward, Regime};
use crate::deform::TruncatedDeformation;
use crate::error::{Error, Result};
use crate::field::{FpMatrix, FpVector, PrimeField};
use crate::jet::{apply_jet, Series};
use crate::lie::{ce_differential, cohomology_from_differentials, matrix_of, CeCochain, CohomologyResult, LModule};
use crate::rescoh_2::RC2n;
use crate::rescoh_p::Setting;
use crate::restricted::{BracketOps, RestrictedAlgebra};
use crate::tuples;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Ordinary Chevalley–Eilenberg cochains in every slot.
    Ce,
    /// Restricted cochains of the regime given by the characteristic.
    Restricted,
}

/// Source, target and morphism together with the modules the complex needs.
#[derive(Clone, Debug)]
pub struct MorphComplex {
    pub src: RestrictedAlgebra,
    pub tgt: RestrictedAlgebra,
    /// `dim M x dim L`, column `i` is `φ(e_i)`.
    pub phi: FpMatrix,
    adj_src: LModule,
    adj_tgt: LModule,
    /// `M` as an `L`-module through `φ`.
    pub induced: LModule,
}

/// Lengths of the three slots of a degree-q cochain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotLens {
    pub src: usize,
    pub tgt: usize,
    pub mixed: usize,
}

impl SlotLens {
    pub fn total(&self) -> usize {
        self.src + self.tgt + self.mixed
    }
}

impl MorphComplex {
    /// `φ` must be a Lie morphism; it need not respect the p-maps, so that
    /// the complex can be evaluated on arbitrary fixture data.
    pub fn new(src: &RestrictedAlgebra, tgt: &RestrictedAlgebra, phi: &FpMatrix) -> Result<Self> {
        if phi.rows() != tgt.dim() || phi.cols() != src.dim() {
            return Err(Error::DimensionMismatch {
                context: "morphism matrix",
                expected: tgt.dim() * src.dim(),
                found: phi.rows() * phi.cols(),
            });
        }
        if src.p() != tgt.p() {
            return Err(Error::FieldMismatch);
        }
        let action: Vec<FpMatrix> = (0..src.dim()).map(|i| tgt.lie.ad(&phi.column(i))).collect();
        let induced = LModule::new(&src.lie, tgt.dim(), action).map_err(|e| match e {
            Error::NotRepresentation(i, j) => Error::NotLieMorphism(i, j),
            other => other,
        })?;
        Ok(Self {
            adj_src: LModule::adjoint(&src.lie),
            adj_tgt: LModule::adjoint(&tgt.lie),
            src: src.clone(),
            tgt: tgt.clone(),
            phi: phi.clone(),
            induced,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.src.field()
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.src.p())
    }

    pub fn src_setting(&self) -> Setting<'_> {
        Setting::new(&self.src, &self.adj_src)
    }

    pub fn tgt_setting(&self) -> Setting<'_> {
        Setting::new(&self.tgt, &self.adj_tgt)
    }

    /// `L` with coefficients in `M` through `φ`.
    pub fn mixed_setting(&self) -> Setting<'_> {
        Setting::new(&self.src, &self.induced)
    }

    fn check_degree(&self, flavor: Flavor, q: usize) -> Result<()> {
        if flavor == Flavor::Restricted && self.regime() == Regime::Odd && q > 3 {
            return Err(Error::DegreeOutOfRange { degree: q, min: 0, max: 3 });
        }
        Ok(())
    }

    pub fn slot_lens(&self, flavor: Flavor, q: usize) -> Result<SlotLens> {
        self.check_degree(flavor, q)?;
        if q == 0 {
            return Ok(SlotLens { src: 0, tgt: 0, mixed: 0 });
        }
        let (n, m) = (self.src.dim(), self.tgt.dim());
        Ok(match flavor {
            Flavor::Ce => SlotLens {
                src: CeCochain::coord_len(n, n, q),
                tgt: CeCochain::coord_len(m, m, q),
                mixed: CeCochain::coord_len(n, m, q - 1),
            },
            Flavor::Restricted => {
                let mixed = if self.regime() == Regime::Odd && q == 3 {
                    // bilinear part plus p-homogeneous basis values
                    cochain_len(&self.mixed_setting(), 2)?
                } else {
                    cochain_len(&self.mixed_setting(), q - 1)?
                };
                SlotLens {
                    src: cochain_len(&self.src_setting(), q)?,
                    tgt: cochain_len(&self.tgt_setting(), q)?,
                    mixed,
                }
            }
        })
    }

    /// Splits coordinates into the three slots.
    pub fn split(&self, flavor: Flavor, q: usize, c: &FpVector) -> Result<(FpVector, FpVector, FpVector)> {
        let l = self.slot_lens(flavor, q)?;
        if c.len() != l.total() {
            return Err(Error::DimensionMismatch {
                context: "morphism cochain coordinates",
                expected: l.total(),
                found: c.len(),
            });
        }
        Ok((c.slice(0, l.src), c.slice(l.src, l.tgt), c.slice(l.src + l.tgt, l.mixed)))
    }

    pub fn join(&self, parts: [&FpVector; 3]) -> FpVector {
        FpVector::concat(self.field(), &parts)
    }

    /// `φ∘μ - ν∘φ` on whole cochains of degree `q` (the last slot of the
    /// differential without the `dθ` term).
    pub fn push_minus_pull(&self, flavor: Flavor, q: usize, mu: &FpVector, nu: &FpVector) -> Result<FpVector> {
        let n = self.src.dim();
        let pushed = pushforward(mu, n, &self.phi);
        let pulled = match flavor {
            Flavor::Ce => CeCochain::from_coords(self.tgt.dim(), self.tgt.dim(), q, nu)?.pullback(&self.phi).coords(),
            Flavor::Restricted => pullback(&self.tgt_setting(), q, nu, &self.phi)?,
        };
        Ok(pushed.minus(&pulled))
    }

    /// Differential of the mixed slot, `C^{q-1}(L, M) -> C^q(L, M)`.
    pub fn mixed_differential(&self, flavor: Flavor, q: usize, theta: &FpVector) -> Result<FpVector> {
        let s = self.mixed_setting();
        match flavor {
            Flavor::Ce => {
                let c = CeCochain::from_coords(s.n(), s.m(), q - 1, theta)?;
                Ok(ce_differential(&self.src.lie, &self.induced, &c).coords())
            }
            Flavor::Restricted => differential(&s, q - 1, theta),
        }
    }

    /// The last slot of the differential: `φ∘μ - ν∘φ - dθ`.
    pub fn alpha_beta(&self, flavor: Flavor, q: usize, mu: &FpVector, nu: &FpVector, theta: &FpVector) -> Result<FpVector> {
        Ok(self.push_minus_pull(flavor, q, mu, nu)?.minus(&self.mixed_differential(flavor, q, theta)?))
    }

    pub fn differential(&self, flavor: Flavor, q: usize, c: &FpVector) -> Result<FpVector> {
        self.check_degree(flavor, q + 1)?;
        if flavor == Flavor::Restricted && self.regime() == Regime::Odd && q == 3 {
            return Err(Error::DegreeOutOfRange { degree: q, min: 0, max: 2 });
        }
        let out_len = self.slot_lens(flavor, q + 1)?.total();
        if q == 0 {
            return Ok(FpVector::zero(self.field(), out_len));
        }
        let (mu, nu, theta) = self.split(flavor, q, c)?;
        let (dmu, dnu) = match flavor {
            Flavor::Ce => (
                crate::complex::ce_differential_coords(&self.src_setting(), q, &mu)?,
                crate::complex::ce_differential_coords(&self.tgt_setting(), q, &nu)?,
            ),
            Flavor::Restricted => (differential(&self.src_setting(), q, &mu)?, differential(&self.tgt_setting(), q, &nu)?),
        };
        let last = self.alpha_beta(flavor, q, &mu, &nu, &theta)?;
        Ok(self.join([&dmu, &dnu, &last]))
    }

    pub fn differential_matrix(&self, flavor: Flavor, q: usize) -> Result<FpMatrix> {
        let din = self.slot_lens(flavor, q)?.total();
        let dout = self.slot_lens(flavor, q + 1)?.total();
        self.differential(flavor, q, &FpVector::zero(self.field(), din))?;
        Ok(matrix_of(self.field(), din, dout, |u| self.differential(flavor, q, u).expect("checked degree")))
    }

    /// Cohomology of the morphism complex. For `p >= 3` the restricted
    /// flavour is available in degrees 0 to 2.
    pub fn cohomology(&self, flavor: Flavor, q: usize) -> Result<CohomologyResult> {
        if flavor == Flavor::Restricted && self.regime() == Regime::Odd && q > 2 {
            return Err(Error::DegreeOutOfRange { degree: q, min: 0, max: 2 });
        }
        let len = self.slot_lens(flavor, q)?.total();
        let d_out = self.differential_matrix(flavor, q)?;
        let d_in = if q > 0 { Some(self.differential_matrix(flavor, q - 1)?) } else { None };
        cohomology_from_differentials(self.field(), q, len, d_in.as_ref(), Some(&d_out))
    }

    /// Matrix of `θ ↦ -dθ` from the mixed slot of degree `q` to that of
    /// degree `q + 1`.
    pub fn theta_matrix(&self, flavor: Flavor, q: usize) -> Result<FpMatrix> {
        let din = self.slot_lens(flavor, q)?.mixed;
        let dout = self.slot_lens(flavor, q + 1)?.mixed;
        let f = self.field();
        self.mixed_differential(flavor, q, &FpVector::zero(f, din))?;
        Ok(matrix_of(f, din, dout, |u| {
            self.mixed_differential(flavor, q, u).expect("checked degree").scaled(f.neg(1))
        }))
    }

    /// All `θ ∈ C^1_*(L, M)` with `α_{μ,ν}(θ) = 0` and `β_{ω,ε}(θ) = 0` for
    /// fixed restricted 2-cochains `(μ, ω)` and `(ν, ε)`.
    pub fn alpha_beta_kernel(&self, mu: &FpVector, nu: &FpVector) -> Result<AffineSolution> {
        let a = self.theta_matrix(Flavor::Restricted, 2)?;
        let offset = self.push_minus_pull(Flavor::Restricted, 2, mu, nu)?;
        let homogeneous = a.kernel_basis();
        let particular = a.solve(&offset.scaled(self.field().neg(1)))?;
        Ok(AffineSolution {
            particular,
            homogeneous,
            offset,
        })
    }
}

/// Solution set `particular + span(homogeneous)`, empty when `particular` is
/// `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Option<FpVector>,
    pub homogeneous: Vec<FpVector>,
    /// The constant part `φ∘(μ, ω) - (ν, ε)∘φ` of the system.
    pub offset: FpVector,
}

impl AffineSolution {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    /// Dimension of the solution set, `None` when it is empty.
    pub fn dim(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.homogeneous.len())
    }
}

/// A morphism `φ_t = Σ t^i φ_i` between truncated deformations of the source
/// and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDeformation {
    pub src: TruncatedDeformation,
    pub tgt: TruncatedDeformation,
    pub base: FpMatrix,
    /// `φ_1, ..., φ_N`.
    pub maps: Vec<FpMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphIdentity {
    /// `φ_t μ_t(e_i, e_j) = ν_t(φ_t e_i, φ_t e_j)`.
    Bracket(usize, usize),
    /// `φ_t ω_t(e_i) = ε_t(φ_t e_i)`.
    PMap(usize),
}

impl MorphismDeformation {
    pub fn new(src: TruncatedDeformation, tgt: TruncatedDeformation, base: FpMatrix, maps: Vec<FpMatrix>) -> Result<Self> {
        for m in std::iter::once(&base).chain(&maps) {
            if m.rows() != tgt.base.dim() || m.cols() != src.base.dim() {
                return Err(Error::DimensionMismatch {
                    context: "morphism jet",
                    expected: tgt.base.dim() * src.base.dim(),
                    found: m.rows() * m.cols(),
                });
            }
        }
        Ok(Self { src, tgt, base, maps })
    }

    pub fn order(&self) -> usize {
        self.maps.len()
    }

    fn jet(&self) -> Vec<FpMatrix> {
        std::iter::once(self.base.clone()).chain(self.maps.iter().cloned()).collect()
    }

    /// Coefficient of `t^k` of `φ_t μ_t - ν_t(φ_t, φ_t)` on increasing basis
    /// pairs followed by `φ_t ω_t - ε_t φ_t` on the basis. Data beyond the
    /// stored orders count as zero.
    pub fn residual(&self, k: usize) -> FpVector {
        let a = self.src.algebra(k);
        let b = self.tgt.algebra(k);
        let jet = self.jet();
        let n = self.src.base.dim();
        let f = self.src.base.field();
        let img: Vec<Series> = (0..n).map(|i| apply_jet(&jet, &a.basis(i), k)).collect();
        let mut parts = Vec::new();
        for t in tuples::all(n, 2) {
            let lhs = apply_jet(&jet, &a.bracket(&a.basis(t[0]), &a.basis(t[1])), k);
            let rhs = b.bracket(&img[t[0]], &img[t[1]]);
            parts.push(lhs[k].minus(&rhs[k]));
        }
        for (i, im) in img.iter().enumerate() {
            let lhs = apply_jet(&jet, &a.pmap_basis(i), k);
            let rhs = b.pmap(im);
            parts.push(lhs[k].minus(&rhs[k]));
        }
        let refs: Vec<&FpVector> = parts.iter().collect();
        FpVector::concat(f, &refs)
    }

    /// Lowest failing degree and identity, checking degrees `0..=N`.
    pub fn check(&self) -> Option<(usize, MorphIdentity)> {
        let n = self.src.base.dim();
        let pairs = tuples::all(n, 2);
        for k in 0..=self.order() {
            let r = self.residual(k);
            let first = r.support().next();
            if let Some((idx, _)) = first {
                let m = self.tgt.base.dim();
                let block = idx / m;
                let id = if block < pairs.len() {
                    MorphIdentity::Bracket(pairs[block][0], pairs[block][1])
                } else {
                    MorphIdentity::PMap(block - pairs.len())
                };
                return Some((k, id));
            }
        }
        None
    }

    pub fn complex(&self) -> Result<MorphComplex> {
        MorphComplex::new(&self.src.base, &self.tgt.base, &self.base)
    }

    /// The order-1 data `((μ_1, ω_1), (ν_1, ε_1), φ_1)` as a morphism
    /// 2-cochain.
    pub fn infinitesimal(&self) -> Result<FpVector> {
        if self.order() == 0 || self.src.order() == 0 || self.tgt.order() == 0 {
            return Err(Error::OrderUnsupported("infinitesimal data needs order 1".into()));
        }
        let mu = crate::deform::join_c2(&self.src.base, &self.src.brackets[0], &self.src.pmaps[0]);
        let nu = crate::deform::join_c2(&self.tgt.base, &self.tgt.brackets[0], &self.tgt.pmaps[0]);
        let theta = matrix_to_c1(&self.maps[0]);
        let cx = self.complex()?;
        Ok(cx.join([&mu, &nu, &theta]))
    }
}

/// A linear map as a 1-cochain in coordinates.
pub fn matrix_to_c1(m: &FpMatrix) -> FpVector {
    let cols: Vec<FpVector> = (0..m.cols()).map(|j| m.column(j)).collect();
    let refs: Vec<&FpVector> = cols.iter().collect();
    FpVector::concat(m.field(), &refs)
}

pub fn c1_to_matrix(f: PrimeField, rows: usize, cols: usize, c: &FpVector) -> FpMatrix {
    let v: Vec<FpVector> = (0..cols).map(|j| c.slice(j * rows, rows)).collect();
    FpMatrix::from_columns(f, rows, &v)
}

/// Obstruction to extending a morphism deformation of order `n`, in the
/// layout of [`MorphismDeformation::residual`]. An extension
/// `(μ_{n+1}, ω_{n+1}), (ν_{n+1}, ε_{n+1}), φ_{n+1}` exists iff
/// `α_{μ_{n+1},ν_{n+1}}(φ_{n+1})` and `β_{ω_{n+1},ε_{n+1}}(φ_{n+1})` equal
/// the two components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphObstruction {
    pub order: usize,
    pub obs1: CeCochain,
    pub obs2: Vec<FpVector>,
}

impl MorphObstruction {
    pub fn coords(&self) -> FpVector {
        let mut parts = vec![self.obs1.coords()];
        parts.extend(self.obs2.iter().cloned());
        let refs: Vec<&FpVector> = parts.iter().collect();
        FpVector::concat(self.obs1.field(), &refs)
    }
}

/// The obstruction read off the morphism equations at order `n + 1` with
/// vanishing top-order data: the negated residual.
pub fn morph_obstruction_residual(md: &MorphismDeformation) -> FpVector {
    let f = md.src.base.field();
    md.residual(md.order() + 1).scaled(f.neg(1))
}

fn jet_value(md: &MorphismDeformation, j: usize, x: &FpVector) -> FpVector {
    if j == 0 {
        md.base.mul_vec(x)
    } else if j <= md.maps.len() {
        md.maps[j - 1].mul_vec(x)
    } else {
        FpVector::zero(x.field(), md.base.rows())
    }
}

/// `ν_l(a, b)`, with `ν_0` the bracket of `M`.
fn nu(md: &MorphismDeformation, l: usize, a: &FpVector, b: &FpVector) -> FpVector {
    if l == 0 {
        md.tgt.base.lie.bracket(a, b)
    } else if l <= md.tgt.order() {
        md.tgt.brackets[l - 1].eval(&[a, b])
    } else {
        FpVector::zero(a.field(), a.len())
    }
}

/// `μ_l(a, b)` for `l >= 1`.
fn mu(md: &MorphismDeformation, l: usize, a: &FpVector, b: &FpVector) -> FpVector {
    if l >= 1 && l <= md.src.order() {
        md.src.brackets[l - 1].eval(&[a, b])
    } else {
        FpVector::zero(a.field(), a.len())
    }
}

/// `Obs1(x, y) = Σ_{l+j+k=n+1; l,j,k <= n} ν_l(φ_j x, φ_k y) - Σ_{i=1}^n φ_i μ_{n+1-i}(x, y)`.
pub fn morph_obs1_at(md: &MorphismDeformation, x: &FpVector, y: &FpVector) -> FpVector {
    let n = md.order();
    let f = md.src.base.field();
    let mut acc = FpVector::zero(f, md.tgt.base.dim());
    for l in 0..=n {
        for j in 0..=n {
            if l + j > n + 1 {
                break;
            }
            let k = n + 1 - l - j;
            if k > n {
                continue;
            }
            acc.add_assign(&nu(md, l, &jet_value(md, j, x), &jet_value(md, k, y)));
        }
    }
    for i in 1..=n {
        acc.sub_assign(&jet_value(md, i, &mu(md, n + 1 - i, x, y)));
    }
    acc
}

/// `ε_l(v)` for arbitrary `v` in characteristic 2 (polarization with `ν_l`).
fn epsilon2(md: &MorphismDeformation, l: usize, v: &FpVector) -> FpVector {
    if l == 0 {
        return md.tgt.base.pmap_eval(v);
    }
    if l > md.tgt.order() {
        return FpVector::zero(v.field(), v.len());
    }
    RC2n {
        degree: 2,
        phi: md.tgt.brackets[l - 1].clone(),
        omega: md.tgt.pmaps[l - 1].clone(),
    }
    .omega_eval(v, &[])
}

/// `ω_k(x)` for arbitrary `x` in characteristic 2.
fn omega2(md: &MorphismDeformation, k: usize, x: &FpVector) -> FpVector {
    if k == 0 {
        return md.src.base.pmap_eval(x);
    }
    RC2n {
        degree: 2,
        phi: md.src.brackets[k - 1].clone(),
        omega: md.src.pmaps[k - 1].clone(),
    }
    .omega_eval(x, &[])
}

/// Characteristic 2, any order:
///
/// ```text
/// Obs2(x) = Σ_{i=1}^n φ_i ω_{n+1-i}(x) + Σ_{l+2j=n+1, j>=1} ε_l(φ_j x)
///         + Σ_{l+j+k=n+1, j<k<=n} ν_l(φ_j x, φ_k x)
/// ```
pub fn morph_obs2_p2_at(md: &MorphismDeformation, x: &FpVector) -> FpVector {
    let n = md.order();
    let f = md.src.base.field();
    let mut acc = FpVector::zero(f, md.tgt.base.dim());
    for i in 1..=n {
        acc.add_assign(&jet_value(md, i, &omega2(md, n + 1 - i, x)));
    }
    for j in 1..=n {
        if 2 * j <= n + 1 {
            acc.add_assign(&epsilon2(md, n + 1 - 2 * j, &jet_value(md, j, x)));
        }
    }
    for l in 0..=n {
        for j in 0..=n {
            for k in j + 1..=n {
                if l + j + k == n + 1 {
                    acc.add_assign(&nu(md, l, &jet_value(md, j, x), &jet_value(md, k, x)));
                }
            }
        }
    }
    acc
}

/// `p >= 3`, order 1. With `A = φ(x)` and `b = φ_1(x)`:
///
/// ```text
/// Obs2(x) = -φ_1(ω_1(x)) - Σ_{q=1}^{p-1} [A, b, A, ..., A]_q
///           - 1/(p-2) Σ_{i+j=p-2} x^i·[b, x^j·b]
/// ```
///
/// where `[A, b, A, ..., A]_q` is the left-nested bracket with `ν_1` in the
/// q-th position and the bracket of `M` elsewhere, and `x·m = [A, m]`.
pub fn morph_obs2_odd_at(md: &MorphismDeformation, x: &FpVector) -> Result<FpVector> {
    let f = md.src.base.field();
    let p = f.p() as usize;
    if p == 2 {
        return Err(Error::CharacteristicUnsupported {
            p: 2,
            reason: "use the characteristic 2 obstruction",
        });
    }
    if md.order() != 1 {
        return Err(Error::OrderUnsupported(format!(
            "the p-map obstruction for p >= 3 is available at order 1, got order {}",
            md.order()
        )));
    }
    let tgt = &md.tgt.base.lie;
    let a = md.base.mul_vec(x);
    let b = md.maps[0].mul_vec(x);
    let mut acc = FpVector::zero(f, md.tgt.base.dim());
    if md.src.order() >= 1 {
        let adj = LModule::adjoint(&md.src.base.lie);
        let s = Setting::new(&md.src.base, &adj);
        let w1 = crate::rescoh_p::omega_eval(&s, &md.src.brackets[0], &md.src.pmaps[0], x)?;
        acc.sub_assign(&md.maps[0].mul_vec(&w1));
    }
    for q in 1..p {
        let mut v = a.clone();
        for pos in 1..p {
            let second = if pos == 1 { &b } else { &a };
            v = if pos == q { nu(md, 1, &v, second) } else { tgt.bracket(&v, second) };
        }
        acc.sub_assign(&v);
    }
    let ad = |k: usize, m: &FpVector| -> FpVector {
        let mut r = m.clone();
        for _ in 0..k {
            r = tgt.bracket(&a, &r);
        }
        r
    };
    let mut quad = FpVector::zero(f, md.tgt.base.dim());
    for i in 0..=p - 2 {
        let j = p - 2 - i;
        quad.add_assign(&ad(i, &tgt.bracket(&b, &ad(j, &b))));
    }
    let c = f.inv((p - 2) as u32)?;
    acc.sub_assign(&quad.scaled(c));
    Ok(acc)
}

/// Explicit obstruction on the basis.
pub fn morph_obstruction(md: &MorphismDeformation) -> Result<MorphObstruction> {
    let order = md.order();
    if order == 0 {
        return Err(Error::OrderUnsupported("obstructions start at order 1".into()));
    }
    let n = md.src.base.dim();
    let m = md.tgt.base.dim();
    let f = md.src.base.field();
    let e = |i: usize| FpVector::basis(f, n, i);
    let mut obs1 = CeCochain::zero(f, n, m, 2);
    for t in tuples::all(n, 2) {
        obs1.set_value(&t, &morph_obs1_at(md, &e(t[0]), &e(t[1])));
    }
    let obs2 = match Regime::of(f.p()) {
        Regime::Two => (0..n).map(|i| morph_obs2_p2_at(md, &e(i))).collect(),
        Regime::Odd => (0..n).map(|i| morph_obs2_odd_at(md, &e(i))).collect::<Result<Vec<_>>>()?,
    };
    Ok(MorphObstruction { order, obs1, obs2 })
}

/// Extends a morphism deformation of order `n` along given order `n + 1`
/// extensions of the source and target deformations, solving
/// `(α, β)(φ_{n+1}) = Obs - (φ∘(μ_{n+1}, ω_{n+1}) - (ν_{n+1}, ε_{n+1})∘φ)`.
pub fn morph_extend(md: &MorphismDeformation, src: &TruncatedDeformation, tgt: &TruncatedDeformation) -> Result<Option<MorphismDeformation>> {
    let order = md.order();
    if src.order() != order + 1 || tgt.order() != order + 1 {
        return Err(Error::OrderUnsupported("the algebra deformations must have order n + 1".into()));
    }
    let cx = md.complex()?;
    let obs = morph_obstruction_residual(md);
    let mu = crate::deform::join_c2(&src.base, &src.brackets[order], &src.pmaps[order]);
    let nu = crate::deform::join_c2(&tgt.base, &tgt.brackets[order], &tgt.pmaps[order]);
    let rhs = obs.minus(&cx.push_minus_pull(Flavor::Restricted, 2, &mu, &nu)?);
    let a = cx.theta_matrix(Flavor::Restricted, 2)?;
    let Some(theta) = a.solve(&rhs)? else {
        return Ok(None);
    };
    let mut maps = md.maps.clone();
    maps.push(c1_to_matrix(md.src.base.field(), md.tgt.base.dim(), md.src.base.dim(), &theta));
    let out = MorphismDeformation::new(src.clone(), tgt.clone(), md.base.clone(), maps)?;
    Ok(Some(out))
}
