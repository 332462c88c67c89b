//! Example algebras, p-structures and fixtures.

use crate::deform::TruncatedDeformation;
use crate::doc::{AlgebraDocument, JetDocument, JetTerm};
use crate::error::Result;
use crate::field::{FpMatrix, FpVector, PrimeField};
use crate::lie::{CeCochain, LieAlgebra};
use crate::restricted::{solve_pmap_targets, PMap, RestrictedAlgebra};

pub mod classify;

/// Heisenberg algebra `[x, y] = z` with `e^[p] = θ(e) z` for a linear form
/// `θ = (θ(x), θ(y), θ(z))`.
pub fn heisenberg(p: u32, theta: [i64; 3]) -> Result<RestrictedAlgebra> {
    let f = PrimeField::new(p)?;
    let lie = heisenberg_lie(f);
    let images = theta.iter().map(|&t| FpVector::from_i64(f, &[0, 0, t])).collect();
    let pmap = PMap::new(&lie, images)?;
    RestrictedAlgebra::new(lie, pmap)
}

pub fn heisenberg_lie(f: PrimeField) -> LieAlgebra {
    LieAlgebra::from_brackets(
        f,
        vec!["x".into(), "y".into(), "z".into()],
        &[(0, 1, FpVector::from_i64(f, &[0, 0, 1]))],
    )
    .expect("Heisenberg brackets")
}

pub const THETA_ZERO: [i64; 3] = [0, 0, 0];
pub const THETA_X: [i64; 3] = [1, 0, 0];
pub const THETA_Y: [i64; 3] = [0, 1, 0];
pub const THETA_Z: [i64; 3] = [0, 0, 1];

/// Witt algebra `W(1)` for `p >= 5`: basis `e_{-1}, ..., e_{p-2}` with
/// `[e_i, e_j] = (j - i) e_{i+j}` inside the range and `e_0^[p] = e_0`, other
/// basis elements mapping to zero.
pub fn witt(p: u32) -> Result<RestrictedAlgebra> {
    let f = PrimeField::new(p)?;
    if p < 5 {
        return Err(crate::Error::CharacteristicUnsupported {
            p,
            reason: "the Witt algebra fixture needs p >= 5",
        });
    }
    let n = p as usize;
    let labels: Vec<String> = (-1..=(p as i64 - 2)).map(|i| format!("e{i}")).collect();
    let mut brackets = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let (i, j) = (a as i64 - 1, b as i64 - 1);
            let s = i + j;
            if (-1..=(p as i64 - 2)).contains(&s) {
                let mut v = FpVector::zero(f, n);
                v.raw_mut()[(s + 1) as usize] = f.reduce(j - i);
                brackets.push((a, b, v));
            }
        }
    }
    let lie = LieAlgebra::from_brackets(f, labels, &brackets)?;
    let mut images: Vec<FpVector> = (0..n).map(|_| lie.zero()).collect();
    images[1] = lie.basis(1);
    let pmap = PMap::new(&lie, images)?;
    RestrictedAlgebra::new(lie, pmap)
}

/// `sl_2` with basis `e, h, f` and the p-map obtained from `ad` powers.
pub fn sl2(p: u32) -> Result<RestrictedAlgebra> {
    let f = PrimeField::new(p)?;
    let lie = LieAlgebra::from_brackets(
        f,
        vec!["e".into(), "h".into(), "f".into()],
        &[
            (0, 2, FpVector::from_i64(f, &[0, 1, 0])),
            (1, 0, FpVector::from_i64(f, &[2, 0, 0])),
            (1, 2, FpVector::from_i64(f, &[0, 0, -2])),
        ],
    )?;
    let images = vec![lie.zero(), lie.basis(1), lie.zero()];
    let pmap = PMap::new(&lie, images)?;
    RestrictedAlgebra::new(lie, pmap)
}

/// Abelian algebra of dimension `n` with the given linear p-map matrix
/// (column `i` is the image of `e_i`).
pub fn abelian(p: u32, pmap_matrix: &FpMatrix) -> Result<RestrictedAlgebra> {
    let f = PrimeField::new(p)?;
    let n = pmap_matrix.cols();
    let lie = LieAlgebra::abelian(f, (0..n).map(|i| format!("a{i}")).collect());
    let images = (0..n).map(|i| pmap_matrix.column(i)).collect();
    let pmap = PMap::new(&lie, images)?;
    RestrictedAlgebra::new(lie, pmap)
}

/// Every catalog algebra available at characteristic `p`, with a name.
pub fn all_for(p: u32) -> Result<Vec<(String, RestrictedAlgebra)>> {
    let mut out = Vec::new();
    for (name, theta) in [("heisenberg_theta0", THETA_ZERO), ("heisenberg_thetax", THETA_X), ("heisenberg_thetaz", THETA_Z)] {
        out.push((name.to_string(), heisenberg(p, theta)?));
    }
    out.push(("sl2".into(), sl2(p)?));
    let f = PrimeField::new(p)?;
    let mut nil = FpMatrix::zeros(f, 2, 2);
    nil.set_raw(1, 0, 1);
    out.push(("abelian_nil".into(), abelian(p, &nil)?));
    out.push(("abelian_id".into(), abelian(p, &FpMatrix::identity(f, 2))?));
    if p >= 5 {
        out.push(("witt".into(), witt(p)?));
    }
    Ok(out)
}

/// Targets from `ad` powers, used to cross-check catalog p-maps.
pub fn jacobson_targets(alg: &RestrictedAlgebra) -> Option<Vec<FpVector>> {
    solve_pmap_targets(&alg.lie)
}

/// Data of the morphism example between Heisenberg algebras: source
/// `(h, x*)`, target `(h, z*)`, `φ(x) = z`, `φ(y) = x + y`, `φ(z) = 0`,
/// together with cochains `μ(x, z) = z`, `ω(y) = z` on the source and
/// `ν(x, y) = x`, `ε(y) = z` on the target.
#[derive(Clone, Debug)]
pub struct MorphismFixture {
    pub src: RestrictedAlgebra,
    pub tgt: RestrictedAlgebra,
    pub phi: FpMatrix,
    pub mu: CeCochain,
    pub omega: Vec<FpVector>,
    pub nu: CeCochain,
    pub epsilon: Vec<FpVector>,
    /// The three maps listed as spanning the solution space:
    /// `θ1(y) = x, θ1(z) = z`; `θ2(y) = y`; `θ3(y) = z`.
    pub listed_thetas: Vec<CeCochain>,
}

pub fn morphism_fixture(p: u32) -> Result<MorphismFixture> {
    let src = heisenberg(p, THETA_X)?;
    let tgt = heisenberg(p, THETA_Z)?;
    let f = src.field();
    let phi = FpMatrix::from_i64_rows(f, &[vec![0, 1, 0], vec![0, 1, 0], vec![1, 0, 0]])?;
    let v = |a: [i64; 3]| FpVector::from_i64(f, &a);
    let mut mu = CeCochain::zero(f, 3, 3, 2);
    mu.set_value(&[0, 2], &v([0, 0, 1]));
    let omega = vec![v([0, 0, 0]), v([0, 0, 1]), v([0, 0, 0])];
    let mut nu = CeCochain::zero(f, 3, 3, 2);
    nu.set_value(&[0, 1], &v([1, 0, 0]));
    let epsilon = vec![v([0, 0, 0]), v([0, 0, 1]), v([0, 0, 0])];
    let theta = |vals: [[i64; 3]; 3]| {
        let mut c = CeCochain::zero(f, 3, 3, 1);
        for (i, val) in vals.iter().enumerate() {
            c.set_value(&[i], &v(*val));
        }
        c
    };
    let listed_thetas = vec![
        theta([[0, 0, 0], [1, 0, 0], [0, 0, 1]]),
        theta([[0, 0, 0], [0, 1, 0], [0, 0, 0]]),
        theta([[0, 0, 0], [0, 0, 1], [0, 0, 0]]),
    ];
    Ok(MorphismFixture {
        src,
        tgt,
        phi,
        mu,
        omega,
        nu,
        epsilon,
        listed_thetas,
    })
}

/// Order-1 deformation of `(h, 0)` over `F_2` along the cocycle
/// `φ(x, z) = z`, `ω(x) = x`: `[x, z]_t = t z` and `x^[2]_t = t x`.
pub fn char2_example() -> Result<TruncatedDeformation> {
    let base = heisenberg(2, THETA_ZERO)?;
    let f = base.field();
    let mut m1 = CeCochain::zero(f, 3, 3, 2);
    m1.set_value(&[0, 2], &base.lie.basis(2));
    let w1 = vec![base.lie.basis(0), base.lie.zero(), base.lie.zero()];
    TruncatedDeformation::new(base, vec![m1], vec![w1])
}

/// Order-1 deformation of the abelian algebra of dimension 3 with zero
/// p-map whose square bracket is nonzero: `m_1(e0, e1) = e0`,
/// `m_1(e0, e2) = e1`.
pub fn obstructed_example(p: u32) -> Result<TruncatedDeformation> {
    let f = PrimeField::new(p)?;
    let base = abelian(p, &FpMatrix::zeros(f, 3, 3))?;
    let mut m1 = CeCochain::zero(f, 3, 3, 2);
    m1.set_value(&[0, 1], &base.lie.basis(0));
    m1.set_value(&[0, 2], &base.lie.basis(1));
    let w1 = vec![base.lie.zero(); 3];
    TruncatedDeformation::new(base, vec![m1], vec![w1])
}

/// Catalog algebras, the morphism example and the example jets as
/// `(file name, JSON text)` pairs in the command-line file format.
pub fn fixture_files(p: u32) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (name, alg) in all_for(p)? {
        out.push((format!("{name}.json"), AlgebraDocument::from_algebra(&alg).to_json()));
    }
    let fx = morphism_fixture(p)?;
    let doc = AlgebraDocument::from_algebra(&fx.src).with_morphism(&fx.tgt, &fx.phi);
    out.push(("morphism.json".into(), doc.to_json()));
    let jet = |b: &CeCochain, w: &[FpVector]| JetDocument {
        order: 1,
        terms: vec![JetTerm::of(b, w)],
    };
    out.push(("morphism_mu.json".into(), jet(&fx.mu, &fx.omega).to_json()));
    out.push(("morphism_nu.json".into(), jet(&fx.nu, &fx.epsilon).to_json()));
    let ob = obstructed_example(p)?;
    out.push(("abelian3.json".into(), AlgebraDocument::from_algebra(&ob.base).to_json()));
    out.push(("obstructed_jet.json".into(), JetDocument::from_deformation(&ob).to_json()));
    if p == 2 {
        let ex = char2_example()?;
        out.push(("char2_jet.json".into(), JetDocument::from_deformation(&ex).to_json()));
    }
    Ok(out)
}
