//! Restricted cochain complex in characteristic 2, all degrees.
//!
//! For `q >= 2` a cochain is a pair `(φ, ω)`: `φ` alternating q-linear and
//! `ω: L × Λ^{q-2} L -> M` linear in the trailing slots with
//! `ω(x + y, z) = ω(x, z) + ω(y, z) + φ(x, y, z)` and `ω(λx, z) = λ² ω(x, z)`.
//! It is stored by `ω(e_i, e_{z})` for every basis index `i` and increasing
//! tuple `z`; the first index may repeat an index of `z`.
//!
//! The differential is `(d_CE φ, δω)` with
//!
//! ```text
//! δω(x, z_2..z_q) = x·φ(x, z) + Σ_i z_i·ω(x, ẑ_i) + φ(x^[2], z)
//!                 + Σ_i φ([x, z_i], x, ẑ_i) + Σ_{i<j} ω(x, [z_i, z_j], ẑ_i, ẑ_j)
//! ```
//!
//! In degree 1 only the first and third terms survive. In degree 0 the
//! differential is the ordinary one.

use crate::error::{Error, Result};
use crate::field::{FpMatrix, FpVector, PrimeField};
use crate::lie::{ce_differential, cohomology_from_differentials, matrix_of, CeCochain, CohomologyResult};
use crate::rescoh_p::Setting;
use crate::tuples;

pub(crate) fn require_two(f: PrimeField) -> Result<()> {
    if f.p() != 2 {
        return Err(Error::CharacteristicUnsupported {
            p: f.p(),
            reason: "the characteristic 2 complex needs p = 2",
        });
    }
    Ok(())
}

/// Cochain of degree `q` in the characteristic 2 complex. For `q < 2` the
/// `omega` list is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RC2n {
    pub degree: usize,
    pub phi: CeCochain,
    pub omega: Vec<FpVector>,
}

impl RC2n {
    pub fn omega_len(n: usize, q: usize) -> usize {
        if q < 2 {
            0
        } else {
            n * tuples::binom(n, q - 2)
        }
    }

    pub fn coord_len(n: usize, m: usize, q: usize) -> usize {
        CeCochain::coord_len(n, m, q) + Self::omega_len(n, q) * m
    }

    pub fn zero(f: PrimeField, n: usize, m: usize, q: usize) -> Self {
        Self {
            degree: q,
            phi: CeCochain::zero(f, n, m, q),
            omega: (0..Self::omega_len(n, q)).map(|_| FpVector::zero(f, m)).collect(),
        }
    }

    pub fn coords(&self) -> FpVector {
        let mut parts = vec![self.phi.coords()];
        parts.extend(self.omega.iter().cloned());
        let refs: Vec<&FpVector> = parts.iter().collect();
        FpVector::concat(self.phi.field(), &refs)
    }

    pub fn from_coords(n: usize, m: usize, q: usize, c: &FpVector) -> Result<Self> {
        if c.len() != Self::coord_len(n, m, q) {
            return Err(Error::DimensionMismatch {
                context: "characteristic 2 cochain coordinates",
                expected: Self::coord_len(n, m, q),
                found: c.len(),
            });
        }
        let k = CeCochain::coord_len(n, m, q);
        let phi = CeCochain::from_coords(n, m, q, &c.slice(0, k))?;
        let omega = (0..Self::omega_len(n, q)).map(|i| c.slice(k + i * m, m)).collect();
        Ok(Self { degree: q, phi, omega })
    }

    fn slot(&self, i: usize, z: &[usize]) -> &FpVector {
        let n = self.phi.alg_dim();
        let width = tuples::binom(n, self.degree - 2);
        &self.omega[i * width + tuples::rank(z)]
    }

    /// `ω(e_i, e_{z_1}, ...)` for basis indices in any order.
    pub fn omega_basis(&self, i: usize, z: &[usize]) -> FpVector {
        let m = self.phi.module_dim();
        let f = self.phi.field();
        let mut t = z.to_vec();
        match tuples::sort_with_parity(&mut t) {
            None => FpVector::zero(f, m),
            Some(par) => {
                let v = self.slot(i, &t).clone();
                if par == 1 {
                    v.scaled(f.neg(1))
                } else {
                    v
                }
            }
        }
    }

    pub fn set_omega(&mut self, i: usize, z: &[usize], v: &FpVector) {
        let n = self.phi.alg_dim();
        let width = tuples::binom(n, self.degree - 2);
        let mut t = z.to_vec();
        tuples::sort_with_parity(&mut t).expect("distinct trailing indices");
        self.omega[i * width + tuples::rank(&t)] = v.clone();
    }

    /// `ω(x, z_1, ...)` for arbitrary elements, using the polarization rule in
    /// the first slot and multilinearity in the others.
    pub fn omega_eval(&self, x: &FpVector, z: &[&FpVector]) -> FpVector {
        assert!(self.degree >= 2);
        let f = self.phi.field();
        let m = self.phi.module_dim();
        let mut out = FpVector::zero(f, m);
        let mut idx = Vec::with_capacity(z.len());
        self.omega_rec(x, z, 1, &mut idx, &mut out);
        out
    }

    fn omega_rec(&self, x: &FpVector, z: &[&FpVector], c: u32, idx: &mut Vec<usize>, out: &mut FpVector) {
        let f = self.phi.field();
        if idx.len() == z.len() {
            let xs: Vec<(usize, u32)> = x.support().collect();
            for (a, &(i, xi)) in xs.iter().enumerate() {
                out.axpy(f.mul(c, f.mul(xi, xi)), &self.omega_basis(i, idx));
                for &(j, xj) in xs.iter().skip(a + 1) {
                    let mut full = vec![i, j];
                    full.extend_from_slice(idx);
                    self.phi.add_basis_value(&full, f.mul(c, f.mul(xi, xj)), out);
                }
            }
            return;
        }
        for (k, zk) in z[idx.len()].support() {
            if idx.contains(&k) {
                continue;
            }
            idx.push(k);
            self.omega_rec(x, z, f.mul(c, zk), idx, out);
            idx.pop();
        }
    }
}

/// `δω` of a degree-q cochain at `(x, z)` with `z` of length `q - 1`.
pub fn delta_at(s: &Setting, c: &RC2n, x: &FpVector, z: &[&FpVector]) -> FpVector {
    let lie = &s.alg.lie;
    let q = c.degree;
    assert_eq!(z.len() + 1, q, "δ arity");
    let mut args: Vec<&FpVector> = Vec::with_capacity(q);
    args.push(x);
    args.extend_from_slice(z);
    let mut out = s.module.act(x, &c.phi.eval(&args));
    let x2 = s.alg.pmap_eval(x);
    args[0] = &x2;
    out.add_assign(&c.phi.eval(&args));
    for i in 0..z.len() {
        let rest: Vec<&FpVector> = z.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, v)| *v).collect();
        if q >= 2 {
            out.add_assign(&s.module.act(z[i], &c.omega_eval(x, &rest)));
        }
        let br = lie.bracket(x, z[i]);
        let mut a: Vec<&FpVector> = vec![&br, x];
        a.extend_from_slice(&rest);
        out.add_assign(&c.phi.eval(&a));
    }
    if q >= 2 {
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                let br = lie.bracket(z[i], z[j]);
                let mut a: Vec<&FpVector> = vec![&br];
                a.extend(z.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, v)| *v));
                out.add_assign(&c.omega_eval(x, &a));
            }
        }
    }
    out
}

/// Differential from degree `q` to degree `q + 1`.
pub fn d_star2(s: &Setting, c: &RC2n) -> Result<RC2n> {
    require_two(s.field())?;
    let (n, m) = (s.n(), s.m());
    let q = c.degree;
    let mut out = RC2n::zero(s.field(), n, m, q + 1);
    out.phi = ce_differential(&s.alg.lie, s.module, &c.phi);
    if q + 1 >= 2 {
        let basis: Vec<FpVector> = (0..n).map(|i| s.alg.lie.basis(i)).collect();
        for i in 0..n {
            for z in tuples::all(n, q - 1) {
                let zs: Vec<&FpVector> = z.iter().map(|&k| &basis[k]).collect();
                let v = delta_at(s, c, &basis[i], &zs);
                out.set_omega(i, &z, &v);
            }
        }
    }
    Ok(out)
}

pub fn d_star2_matrix(s: &Setting, q: usize) -> Result<FpMatrix> {
    require_two(s.field())?;
    let (n, m) = (s.n(), s.m());
    Ok(matrix_of(s.field(), RC2n::coord_len(n, m, q), RC2n::coord_len(n, m, q + 1), |u| {
        let c = RC2n::from_coords(n, m, q, u).expect("coords");
        d_star2(s, &c).expect("p = 2").coords()
    }))
}

/// Restricted cohomology `H^q_{*2}`. Degrees above `dim L + 2` have no
/// cochains and give zero.
pub fn restricted_cohomology_2(s: &Setting, q: usize) -> Result<CohomologyResult> {
    require_two(s.field())?;
    let (n, m) = (s.n(), s.m());
    let len = RC2n::coord_len(n, m, q);
    let d_out = d_star2_matrix(s, q)?;
    let d_in = if q > 0 { Some(d_star2_matrix(s, q - 1)?) } else { None };
    cohomology_from_differentials(s.field(), q, len, d_in.as_ref(), Some(&d_out))
}
