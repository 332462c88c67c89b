//! Restricted cohomology in degrees 0, 1, 2 for `p >= 3`.
//!
//! A restricted 2-cochain is a pair `(φ, ω)` where `φ` is an alternating
//! bilinear map and `ω` is determined by its basis values through the
//! (*)-rule
//!
//! ```text
//! ω(x + y) = ω(x) + ω(y)
//!   + Σ_{w_1 = x, w_2 = y} (1/#x(w)) Σ_{k=0}^{p-2} (-1)^k
//!       w_p · (w_{p-1} · ( ... w_{p-k+1} · φ([w_1, ..., w_{p-k-1}], w_{p-k})))
//! ```
//!
//! and `ω(λx) = λ^p ω(x)`. The differentials are
//!
//! ```text
//! ind¹(φ)(x)    = -φ(x^[p]) + x^{p-1} · φ(x)
//! ind²(φ, ω)(x, y) = -φ(x, y^[p]) + Σ_{i+j=p-1} (-1)^i y^i · φ([x, y, .., y], y) - x · ω(y)
//! ```
//!
//! with `j` copies of `y` inside the bracket. Cocycle conditions are tested
//! on basis values: a 3-cochain's second component has the (**)-property
//! with respect to the first, so when the first vanishes it is additive in
//! each argument.

use crate::error::{Error, Result};
use crate::field::{FpVector, PrimeField};
use crate::lie::{ce_differential, cohomology_from_differentials, matrix_of, CeCochain, CohomologyResult, LModule};
use crate::restricted::RestrictedAlgebra;
use crate::tuples;

/// A restricted algebra together with a module it acts on.
#[derive(Clone, Copy, Debug)]
pub struct Setting<'a> {
    pub alg: &'a RestrictedAlgebra,
    pub module: &'a LModule,
}

impl<'a> Setting<'a> {
    pub fn new(alg: &'a RestrictedAlgebra, module: &'a LModule) -> Self {
        Self { alg, module }
    }

    pub fn field(&self) -> PrimeField {
        self.alg.field()
    }

    pub fn n(&self) -> usize {
        self.alg.dim()
    }

    pub fn m(&self) -> usize {
        self.module.dim()
    }

    fn p(&self) -> usize {
        self.alg.p() as usize
    }
}

pub(crate) fn require_odd(f: PrimeField) -> Result<()> {
    if f.p() == 2 {
        return Err(Error::CharacteristicUnsupported {
            p: 2,
            reason: "use the characteristic 2 complex",
        });
    }
    Ok(())
}

/// Restricted 2-cochain: bilinear part and basis values of the p-part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RC2 {
    pub phi: CeCochain,
    pub omega: Vec<FpVector>,
}

impl RC2 {
    pub fn zero(s: &Setting) -> Self {
        Self {
            phi: CeCochain::zero(s.field(), s.n(), s.m(), 2),
            omega: (0..s.n()).map(|_| FpVector::zero(s.field(), s.m())).collect(),
        }
    }

    pub fn coord_len(n: usize, m: usize) -> usize {
        CeCochain::coord_len(n, m, 2) + n * m
    }

    pub fn coords(&self) -> FpVector {
        let mut parts = vec![self.phi.coords()];
        parts.extend(self.omega.iter().cloned());
        let refs: Vec<&FpVector> = parts.iter().collect();
        FpVector::concat(self.phi.field(), &refs)
    }

    pub fn from_coords(n: usize, m: usize, c: &FpVector) -> Result<Self> {
        if c.len() != Self::coord_len(n, m) {
            return Err(Error::DimensionMismatch {
                context: "restricted 2-cochain coordinates",
                expected: Self::coord_len(n, m),
                found: c.len(),
            });
        }
        let k = CeCochain::coord_len(n, m, 2);
        let phi = CeCochain::from_coords(n, m, 2, &c.slice(0, k))?;
        let omega = (0..n).map(|i| c.slice(k + i * m, m)).collect();
        Ok(Self { phi, omega })
    }
}

/// Restricted 3-cochain evaluated on the basis: the alternating part and the
/// grid `β(e_i, e_j)` stored at `i * n + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RC3 {
    pub alpha: CeCochain,
    pub beta: Vec<FpVector>,
}

impl RC3 {
    pub fn coord_len(n: usize, m: usize) -> usize {
        CeCochain::coord_len(n, m, 3) + n * n * m
    }

    pub fn coords(&self) -> FpVector {
        let mut parts = vec![self.alpha.coords()];
        parts.extend(self.beta.iter().cloned());
        let refs: Vec<&FpVector> = parts.iter().collect();
        FpVector::concat(self.alpha.field(), &refs)
    }

    pub fn from_coords(n: usize, m: usize, c: &FpVector) -> Result<Self> {
        if c.len() != Self::coord_len(n, m) {
            return Err(Error::DimensionMismatch {
                context: "restricted 3-cochain coordinates",
                expected: Self::coord_len(n, m),
                found: c.len(),
            });
        }
        let k = CeCochain::coord_len(n, m, 3);
        let alpha = CeCochain::from_coords(n, m, 3, &c.slice(0, k))?;
        let beta = (0..n * n).map(|i| c.slice(k + i * m, m)).collect();
        Ok(Self { alpha, beta })
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.iter().all(|v| v.is_zero())
    }
}

/// Correction term of the (*)-rule for the pair `(x, y)`.
pub fn star_correction(s: &Setting, phi: &CeCochain, x: &FpVector, y: &FpVector) -> FpVector {
    let f = s.field();
    let p = s.p();
    let lie = &s.alg.lie;
    let mut acc = FpVector::zero(f, s.m());
    let mut word: Vec<&FpVector> = vec![x; p];
    word[1] = y;
    let mut prefix: Vec<FpVector> = Vec::with_capacity(p);
    for mask in 0u64..(1u64 << (p - 2)) {
        let mut count_x = 1;
        for k in 0..p - 2 {
            if mask >> k & 1 == 1 {
                word[k + 2] = y;
            } else {
                word[k + 2] = x;
                count_x += 1;
            }
        }
        let weight = f.inv(count_x as u32).expect("count below p");
        prefix.clear();
        prefix.push(x.clone());
        for t in 1..p - 1 {
            let next = lie.bracket(&prefix[t - 1], word[t]);
            prefix.push(next);
        }
        // prefix[j - 1] = [w_1, ..., w_j]
        for j in 1..p {
            let k = p - 1 - j;
            let mut v = phi.eval(&[&prefix[j - 1], word[j]]);
            for w in word.iter().take(p).skip(j + 1) {
                if v.is_zero() {
                    break;
                }
                v = s.module.act(w, &v);
            }
            acc.axpy(f.mul(f.sign(k), weight), &v);
        }
    }
    acc
}

/// Value of the p-part of a restricted 2-cochain on an arbitrary element.
pub fn omega_eval(s: &Setting, phi: &CeCochain, omega: &[FpVector], x: &FpVector) -> Result<FpVector> {
    require_odd(s.field())?;
    let f = s.field();
    let p = s.p() as u64;
    let mut acc = FpVector::zero(f, s.m());
    let mut prefix = FpVector::zero(f, s.n());
    for (i, c) in x.support() {
        let term = FpVector::basis(f, s.n(), i).scaled(c);
        if !prefix.is_zero() {
            acc.add_assign(&star_correction(s, phi, &prefix, &term));
        }
        acc.axpy(f.pow(c, p), &omega[i]);
        prefix.add_assign(&term);
    }
    Ok(acc)
}

pub fn ind1(s: &Setting, phi: &CeCochain, x: &FpVector) -> FpVector {
    let xp = s.alg.pmap_eval(x);
    let mut out = phi.eval(&[&xp]).scaled(s.field().neg(1));
    out.add_assign(&s.module.act_power(x, s.p() - 1, &phi.eval(&[x])));
    out
}

pub fn ind2(s: &Setting, phi: &CeCochain, omega: &[FpVector], x: &FpVector, y: &FpVector) -> Result<FpVector> {
    let f = s.field();
    let p = s.p();
    let lie = &s.alg.lie;
    let yp = s.alg.pmap_eval(y);
    let mut out = phi.eval(&[x, &yp]).scaled(f.neg(1));
    let mut nested = x.clone();
    for j in 0..p {
        let i = p - 1 - j;
        let v = phi.eval(&[&nested, y]);
        out.axpy(f.sign(i), &s.module.act_power(y, i, &v));
        nested = lie.bracket(&nested, y);
    }
    let wy = omega_eval(s, phi, omega, y)?;
    out.sub_assign(&s.module.act(x, &wy));
    Ok(out)
}

pub fn d0_star(s: &Setting, m: &FpVector) -> CeCochain {
    let c = CeCochain::from_coords(s.n(), s.m(), 0, m).expect("0-cochain");
    ce_differential(&s.alg.lie, s.module, &c)
}

pub fn d1_star(s: &Setting, phi: &CeCochain) -> Result<RC2> {
    require_odd(s.field())?;
    let n = s.n();
    Ok(RC2 {
        phi: ce_differential(&s.alg.lie, s.module, phi),
        omega: (0..n).map(|i| ind1(s, phi, &s.alg.lie.basis(i))).collect(),
    })
}

pub fn d2_star(s: &Setting, c: &RC2) -> Result<RC3> {
    require_odd(s.field())?;
    let n = s.n();
    let lie = &s.alg.lie;
    let mut beta = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            beta.push(ind2(s, &c.phi, &c.omega, &lie.basis(i), &lie.basis(j))?);
        }
    }
    Ok(RC3 {
        alpha: ce_differential(lie, s.module, &c.phi),
        beta,
    })
}

pub fn d0_matrix(s: &Setting) -> crate::field::FpMatrix {
    let (n, m) = (s.n(), s.m());
    matrix_of(s.field(), m, n * m, |u| d0_star(s, u).coords())
}

pub fn d1_matrix(s: &Setting) -> Result<crate::field::FpMatrix> {
    require_odd(s.field())?;
    let (n, m) = (s.n(), s.m());
    Ok(matrix_of(s.field(), n * m, RC2::coord_len(n, m), |u| {
        let phi = CeCochain::from_coords(n, m, 1, u).expect("1-cochain");
        d1_star(s, &phi).expect("odd p").coords()
    }))
}

pub fn d2_matrix(s: &Setting) -> Result<crate::field::FpMatrix> {
    require_odd(s.field())?;
    let (n, m) = (s.n(), s.m());
    Ok(matrix_of(s.field(), RC2::coord_len(n, m), RC3::coord_len(n, m), |u| {
        let c = RC2::from_coords(n, m, u).expect("2-cochain");
        d2_star(s, &c).expect("odd p").coords()
    }))
}

/// Restricted cohomology `H^q_*` for `q` in `0..=2`.
pub fn restricted_cohomology_p(s: &Setting, q: usize) -> Result<CohomologyResult> {
    require_odd(s.field())?;
    let f = s.field();
    let (n, m) = (s.n(), s.m());
    match q {
        0 => cohomology_from_differentials(f, 0, m, None, Some(&d0_matrix(s))),
        1 => cohomology_from_differentials(f, 1, n * m, Some(&d0_matrix(s)), Some(&d1_matrix(s)?)),
        2 => cohomology_from_differentials(f, 2, RC2::coord_len(n, m), Some(&d1_matrix(s)?), Some(&d2_matrix(s)?)),
        _ => Err(Error::DegreeOutOfRange { degree: q, min: 0, max: 2 }),
    }
}

/// Restricted derivations of an algebra: 1-cocycles with adjoint values.
pub fn h1_restricted_derivations(alg: &RestrictedAlgebra) -> Result<Vec<CeCochain>> {
    let module = LModule::adjoint(&alg.lie);
    let s = Setting::new(alg, &module);
    let n = alg.dim();
    Ok(d1_matrix(&s)?
        .kernel_basis()
        .iter()
        .map(|v| CeCochain::from_coords(n, n, 1, v).expect("coords"))
        .collect())
}

/// Values of a 2-cochain on every increasing basis pair, for display.
pub fn pair_values(phi: &CeCochain) -> Vec<(Vec<usize>, FpVector)> {
    tuples::all(phi.alg_dim(), phi.degree())
        .into_iter()
        .map(|t| {
            let v = phi.value(&t);
            (t, v)
        })
        .collect()
}
