//! Coordinate view of the restricted complex shared by the deformation and
//! morphism code.
//!
//! For `p >= 3` the degrees are `C^0 = M`, `C^1`, restricted 2-cochains and
//! restricted 3-cochains (basis grid). For `p = 2` every degree uses the
//! characteristic 2 layout. Every layout is a list of blocks of length
//! `dim M`, so postcomposition with a linear map acts block by block.

use crate::error::{Error, Result};
use crate::field::{FpMatrix, FpVector};
use crate::lie::{ce_differential, matrix_of, CeCochain};
use crate::rescoh_2::{d_star2, RC2n};
use crate::rescoh_p::{d0_star, d1_star, d2_star, omega_eval, Setting, RC2, RC3};
use crate::tuples;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Odd,
    Two,
}

impl Regime {
    pub fn of(p: u32) -> Self {
        if p == 2 {
            Regime::Two
        } else {
            Regime::Odd
        }
    }
}

pub fn regime(s: &Setting) -> Regime {
    Regime::of(s.field().p())
}

pub fn cochain_len(s: &Setting, q: usize) -> Result<usize> {
    let (n, m) = (s.n(), s.m());
    match (regime(s), q) {
        (Regime::Odd, 0) => Ok(m),
        (Regime::Odd, 1) => Ok(n * m),
        (Regime::Odd, 2) => Ok(RC2::coord_len(n, m)),
        (Regime::Odd, 3) => Ok(RC3::coord_len(n, m)),
        (Regime::Odd, _) => Err(Error::DegreeOutOfRange { degree: q, min: 0, max: 3 }),
        (Regime::Two, _) => Ok(RC2n::coord_len(n, m, q)),
    }
}

/// Differential `C^q_* -> C^{q+1}_*` on coordinates.
pub fn differential(s: &Setting, q: usize, c: &FpVector) -> Result<FpVector> {
    let (n, m) = (s.n(), s.m());
    match (regime(s), q) {
        (Regime::Odd, 0) => Ok(d0_star(s, c).coords()),
        (Regime::Odd, 1) => Ok(d1_star(s, &CeCochain::from_coords(n, m, 1, c)?)?.coords()),
        (Regime::Odd, 2) => Ok(d2_star(s, &RC2::from_coords(n, m, c)?)?.coords()),
        (Regime::Odd, _) => Err(Error::DegreeOutOfRange { degree: q, min: 0, max: 2 }),
        (Regime::Two, _) => Ok(d_star2(s, &RC2n::from_coords(n, m, q, c)?)?.coords()),
    }
}

pub fn differential_matrix(s: &Setting, q: usize) -> Result<FpMatrix> {
    let din = cochain_len(s, q)?;
    let dout = cochain_len(s, q + 1)?;
    differential(s, q, &FpVector::zero(s.field(), din))?;
    Ok(matrix_of(s.field(), din, dout, |u| differential(s, q, u).expect("checked degree")))
}

/// Postcomposition of every value block with `phi` (`dim M' x dim M`).
pub fn pushforward(c: &FpVector, m: usize, phi: &FpMatrix) -> FpVector {
    let blocks = c.len() / m.max(1);
    let parts: Vec<FpVector> = (0..blocks).map(|b| phi.mul_vec(&c.slice(b * m, m))).collect();
    let refs: Vec<&FpVector> = parts.iter().collect();
    FpVector::concat(c.field(), &refs)
}

/// Pullback of a degree-q cochain on `M` (adjoint values) along
/// `phi: L -> M`, giving a cochain on `L` with values in `M`.
pub fn pullback(tgt: &Setting, q: usize, c: &FpVector, phi: &FpMatrix) -> Result<FpVector> {
    let nm = tgt.n();
    let nl = phi.cols();
    let f = tgt.field();
    let images: Vec<FpVector> = (0..nl).map(|i| phi.column(i)).collect();
    match (regime(tgt), q) {
        (Regime::Odd, 0) | (Regime::Two, 0) => Ok(c.clone()),
        (Regime::Odd, 1) | (Regime::Two, 1) => Ok(CeCochain::from_coords(nm, nm, 1, c)?.pullback(phi).coords()),
        (Regime::Odd, 2) => {
            let rc = RC2::from_coords(nm, nm, c)?;
            let phi_part = rc.phi.pullback(phi);
            let mut omega = Vec::with_capacity(nl);
            for img in &images {
                omega.push(omega_eval(tgt, &rc.phi, &rc.omega, img)?);
            }
            Ok(RC2 { phi: phi_part, omega }.coords())
        }
        (Regime::Odd, _) => Err(Error::DegreeOutOfRange { degree: q, min: 0, max: 2 }),
        (Regime::Two, _) => {
            let rc = RC2n::from_coords(nm, nm, q, c)?;
            let mut out = RC2n::zero(f, nl, nm, q);
            out.phi = rc.phi.pullback(phi);
            for i in 0..nl {
                for z in tuples::all(nl, q - 2) {
                    let zs: Vec<&FpVector> = z.iter().map(|&k| &images[k]).collect();
                    let v = rc.omega_eval(&images[i], &zs);
                    out.set_omega(i, &z, &v);
                }
            }
            Ok(out.coords())
        }
    }
}

/// CE differential on coordinates, used by the unrestricted morphism complex.
pub fn ce_differential_coords(s: &Setting, q: usize, c: &FpVector) -> Result<FpVector> {
    let phi = CeCochain::from_coords(s.n(), s.m(), q, c)?;
    Ok(ce_differential(&s.alg.lie, s.module, &phi).coords())
}
