//! Classification of p-structures on the Heisenberg algebra.
//!
//! A p-structure is a linear form `θ` with `e^[p] = θ(e) z`. A Lie
//! isomorphism has the shape `x ↦ ax + by + cz`, `y ↦ dx + ey + fz`,
//! `z ↦ uz` with `u = ae - bd ≠ 0`, and it is restricted iff
//!
//! ```text
//! θ(x) u = a^p θ'(x) + b^p θ'(y) + c^p θ'(z) (+ ab for p = 2)
//! θ(y) u = d^p θ'(x) + e^p θ'(y) + f^p θ'(z) (+ de for p = 2)
//! θ(z) u = u^p θ'(z)
//! ```
//!
//! Over `F_p` the last condition forces `θ(z) = θ'(z)`, which splits the
//! forms with `θ(z) ≠ 0` into `p - 1` classes. Those merge over an extension
//! `GF(p^k)` containing a root of `u^{p-1} = θ(z)/θ'(z)`. For `p = 2` the
//! cross terms keep `x* + y*` apart from `0` over `F_2`; they merge over
//! `GF(4)`. The classifier produces all witnesses explicitly and reports the
//! partition over `F_p` alongside the one over the algebraic closure.

use crate::catalog::heisenberg;
use crate::error::{Error, Result};
use crate::field::{FpMatrix, PrimeField};
use crate::restricted::RestrictedMorphism;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Theta = [u32; 3];

/// Default bound on `p` for the exhaustive search.
pub const DEFAULT_MAX_P: u32 = 7;

/// Finite field `GF(p^k) = F_p[X]/(f)` with elements stored as coefficient
/// lists of length `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    pub base: PrimeField,
    /// Lower coefficients of the monic irreducible modulus of degree `k`.
    pub modulus: Vec<u32>,
}

pub type Gf = Vec<u32>;

impl ExtField {
    /// Degree-k extension with the first irreducible monic modulus in
    /// lexicographic order.
    pub fn new(base: PrimeField, k: usize) -> Self {
        let p = base.p();
        if k == 1 {
            return Self { base, modulus: vec![0] };
        }
        let total = (p as u64).pow(k as u32);
        for idx in 0..total {
            let low = digits(idx, p, k);
            let mut f = low.clone();
            f.push(1);
            if is_irreducible(base, &f) {
                return Self { base, modulus: low };
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn degree(&self) -> usize {
        self.modulus.len()
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn size(&self) -> u64 {
        (self.p() as u64).pow(self.degree() as u32)
    }

    pub fn element(&self, idx: u64) -> Gf {
        digits(idx, self.p(), self.degree())
    }

    pub fn from_base(&self, c: u32) -> Gf {
        let mut v = vec![0; self.degree()];
        v[0] = c;
        v
    }

    pub fn zero(&self) -> Gf {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> Gf {
        self.from_base(1)
    }

    pub fn is_zero(&self, a: &Gf) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Gf, b: &Gf) -> Gf {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }

    pub fn sub(&self, a: &Gf, b: &Gf) -> Gf {
        a.iter().zip(b).map(|(&x, &y)| self.base.sub(x, y)).collect()
    }

    pub fn mul(&self, a: &Gf, b: &Gf) -> Gf {
        let f = self.base;
        let k = self.degree();
        let mut prod = vec![0u32; 2 * k];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        for d in (k..2 * k).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                prod[d - k + i] = f.sub(prod[d - k + i], f.mul(c, m));
            }
        }
        prod.truncate(k);
        prod
    }

    pub fn pow(&self, a: &Gf, mut e: u64) -> Gf {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Gf) -> Result<Gf> {
        if self.is_zero(a) {
            return Err(Error::NotInvertible);
        }
        Ok(self.pow(a, self.size() - 2))
    }

    pub fn frobenius(&self, a: &Gf) -> Gf {
        self.pow(a, self.p() as u64)
    }

    /// Inverse of the Frobenius: `a^{p^{k-1}}`.
    pub fn pth_root(&self, a: &Gf) -> Gf {
        let mut r = a.clone();
        for _ in 1..self.degree() {
            r = self.frobenius(&r);
        }
        r
    }
}

fn digits(mut idx: u64, p: u32, k: usize) -> Vec<u32> {
    let mut out = vec![0u32; k];
    for d in out.iter_mut() {
        *d = (idx % p as u64) as u32;
        idx /= p as u64;
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` (coefficients low to high).
fn poly_rem(f: PrimeField, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().expect("nonempty");
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mi));
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree up to `deg f / 2`.
fn is_irreducible(f: PrimeField, poly: &[u32]) -> bool {
    let k = poly.len() - 1;
    let p = f.p();
    for d in 1..=k / 2 {
        for idx in 0..(p as u64).pow(d as u32) {
            let mut m = digits(idx, p, d);
            m.push(1);
            if poly_rem(f, poly, &m).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest `k` with `(p - 1)^2 | p^k - 1`.
pub fn merging_degree(p: u32) -> usize {
    let m = ((p - 1) as u64).pow(2);
    let mut pk = 1u64;
    for k in 1.. {
        pk = pk * p as u64 % m;
        if (pk + m - 1) % m == 0 {
            return k;
        }
    }
    unreachable!()
}

/// Isomorphism `(h, θ) -> (h, θ')` over `GF(p^k)` given by `(a, ..., f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergIso {
    pub source: Theta,
    pub target: Theta,
    pub field: ExtField,
    /// `[a, b, c, d, e, f]`.
    pub params: [Gf; 6],
}

impl HeisenbergIso {
    pub fn field_degree(&self) -> usize {
        self.field.degree()
    }

    pub fn det(&self) -> Gf {
        let g = &self.field;
        let [a, b, _, d, e, _] = &self.params;
        g.sub(&g.mul(a, e), &g.mul(b, d))
    }

    /// Columns are the images of `x, y, z` over the extension field.
    pub fn columns(&self) -> [[Gf; 3]; 3] {
        let g = &self.field;
        let [a, b, c, d, e, f] = self.params.clone();
        [[a, b, c], [d, e, f], [g.zero(), g.zero(), self.det()]]
    }

    /// Matrix over `F_p` when the witness has degree 1.
    pub fn fp_matrix(&self) -> Option<FpMatrix> {
        if self.field_degree() != 1 {
            return None;
        }
        let cols = self.columns();
        let mut m = FpMatrix::zeros(self.field.base, 3, 3);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set_raw(i, j, v[0]);
            }
        }
        Some(m)
    }

    fn pmap(&self, theta: &Theta, v: &[Gf; 3]) -> [Gf; 3] {
        let g = &self.field;
        let mut zc = g.zero();
        for (vi, &t) in v.iter().zip(theta) {
            zc = g.add(&zc, &g.mul(&g.frobenius(vi), &g.from_base(t)));
        }
        if g.p() == 2 {
            zc = g.add(&zc, &g.mul(&v[0], &v[1]));
        }
        [g.zero(), g.zero(), zc]
    }

    fn apply(&self, v: &[Gf; 3]) -> [Gf; 3] {
        let g = &self.field;
        let cols = self.columns();
        let mut out = [g.zero(), g.zero(), g.zero()];
        for (j, vj) in v.iter().enumerate() {
            for i in 0..3 {
                out[i] = g.add(&out[i], &g.mul(&cols[j][i], vj));
            }
        }
        out
    }

    fn bracket(&self, a: &[Gf; 3], b: &[Gf; 3]) -> [Gf; 3] {
        let g = &self.field;
        let z = g.sub(&g.mul(&a[0], &b[1]), &g.mul(&a[1], &b[0]));
        [g.zero(), g.zero(), z]
    }

    /// Checks invertibility, the bracket, and `φ(v^[p]) = φ(v)^[p]'` on the
    /// basis and on random elements of `h ⊗ GF(p^k)`.
    pub fn verify(&self) -> bool {
        let g = &self.field;
        if g.is_zero(&self.det()) {
            return false;
        }
        let mut samples: Vec<[Gf; 3]> = (0..3)
            .map(|i| {
                let mut v = [g.zero(), g.zero(), g.zero()];
                v[i] = g.one();
                v
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..20 {
            samples.push(std::array::from_fn(|_| g.element(rng.gen_range(0..g.size()))));
        }
        for v in &samples {
            if self.apply(&self.pmap(&self.source, v)) != self.pmap(&self.target, &self.apply(v)) {
                return false;
            }
            for w in &samples {
                if self.apply(&self.bracket(v, w)) != self.bracket(&self.apply(v), &self.apply(w)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Search over `F_p`: for each `(a, b, d, e)` with `u ≠ 0` the first two
/// conditions are affine in `c` and `f` (since `c^p = c`), so they are solved
/// directly rather than enumerated.
pub fn fp_isomorphism(p: u32, source: Theta, target: Theta) -> Result<Option<HeisenbergIso>> {
    let fld = PrimeField::new(p)?;
    let (s, t) = (source, target);
    let solve_affine = |lhs: u32| -> Option<u32> {
        if t[2] == 0 {
            (lhs == 0).then_some(0)
        } else {
            Some(fld.mul(lhs, fld.inv(t[2]).expect("nonzero")))
        }
    };
    for a in 0..p {
        for b in 0..p {
            for d in 0..p {
                for e in 0..p {
                    let u = fld.sub(fld.mul(a, e), fld.mul(b, d));
                    if u == 0 || fld.mul(s[2], u) != fld.mul(u, t[2]) {
                        continue;
                    }
                    let cross = |m: u32, n: u32| if p == 2 { fld.mul(m, n) } else { 0 };
                    let lx = fld.sub(fld.mul(s[0], u), fld.add(fld.add(fld.mul(a, t[0]), fld.mul(b, t[1])), cross(a, b)));
                    let ly = fld.sub(fld.mul(s[1], u), fld.add(fld.add(fld.mul(d, t[0]), fld.mul(e, t[1])), cross(d, e)));
                    let (Some(c), Some(f)) = (solve_affine(lx), solve_affine(ly)) else {
                        continue;
                    };
                    let field = ExtField::new(fld, 1);
                    let params = [a, b, c, d, e, f].map(|v| field.from_base(v));
                    return Ok(Some(HeisenbergIso {
                        source,
                        target,
                        field,
                        params,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Largest extension field searched exhaustively, as `|GF(p^k)|^4`.
const SEARCH_BUDGET: u64 = 1 << 16;

/// Exhaustive search over `(a, b, d, e) ∈ GF(p^k)^4`, solving for `c` and `f`.
pub fn search_isomorphism(field: &ExtField, source: Theta, target: Theta) -> Option<HeisenbergIso> {
    let g = field;
    let p = g.p();
    let base = |c: u32| g.from_base(c);
    let (s, t) = (source.map(base), target.map(base));
    let tz_inv = (target[2] != 0).then(|| g.inv(&t[2]).expect("nonzero"));
    let solve = |lhs: Gf| -> Option<Gf> {
        match &tz_inv {
            None => g.is_zero(&lhs).then(|| g.zero()),
            Some(inv) => Some(g.pth_root(&g.mul(&lhs, inv))),
        }
    };
    let cross = |m: &Gf, n: &Gf| if p == 2 { g.mul(m, n) } else { g.zero() };
    let row = |su: &Gf, m: &Gf, n: &Gf| {
        let rhs = g.add(&g.add(&g.mul(&g.frobenius(m), &t[0]), &g.mul(&g.frobenius(n), &t[1])), &cross(m, n));
        g.sub(su, &rhs)
    };
    let elems: Vec<Gf> = (0..g.size()).map(|i| g.element(i)).collect();
    for a in &elems {
        for b in &elems {
            for d in &elems {
                for e in &elems {
                    let u = g.sub(&g.mul(a, e), &g.mul(b, d));
                    if g.is_zero(&u) || g.mul(&s[2], &u) != g.mul(&g.frobenius(&u), &t[2]) {
                        continue;
                    }
                    let (Some(c), Some(f)) = (solve(row(&g.mul(&s[0], &u), a, b)), solve(row(&g.mul(&s[1], &u), d, e)))
                    else {
                        continue;
                    };
                    let iso = HeisenbergIso {
                        source,
                        target,
                        field: g.clone(),
                        params: [a.clone(), b.clone(), c, d.clone(), e.clone(), f],
                    };
                    if iso.verify() {
                        return Some(iso);
                    }
                }
            }
        }
    }
    None
}

/// Precomputed data for witnesses over proper extensions of `F_p`.
#[derive(Clone, Debug)]
pub struct ExtensionSearch {
    /// `GF(p^k)` with `k` from [`merging_degree`].
    pub field: ExtField,
    /// `roots[r]` solves `u^{p-1} = r` in `field`, for `r ∈ F_p^*`.
    roots: Vec<Option<Gf>>,
    /// Extensions small enough for [`search_isomorphism`].
    small: Vec<ExtField>,
}

impl ExtensionSearch {
    pub fn new(p: u32) -> Result<Self> {
        let fld = PrimeField::new(p)?;
        let field = ExtField::new(fld, merging_degree(p));
        let mut roots = vec![None; p as usize];
        for i in 1..field.size() {
            let u = field.element(i);
            let r = field.pow(&u, (p - 1) as u64);
            if r[1..].iter().all(|&c| c == 0) && roots[r[0] as usize].is_none() {
                roots[r[0] as usize] = Some(u);
            }
        }
        let mut small = Vec::new();
        for k in 2.. {
            if (p as u64).pow(k as u32).pow(4) > SEARCH_BUDGET {
                break;
            }
            small.push(ExtField::new(fld, k));
        }
        Ok(Self { field, roots, small })
    }

    /// Witness over a proper extension.
    ///
    /// When `θ(z), θ'(z) ≠ 0` it is built directly: `a = u`, `e = 1`,
    /// `b = d = 0` with `u^{p-1} = θ(z)/θ'(z)` and `c`, `f` from p-th roots.
    /// When exactly one vanishes the last condition has no solution with
    /// `u ≠ 0`. When both vanish the small extensions are scanned; for
    /// `p >= 3` this case is already settled over `F_p` by a `GL_2` argument,
    /// so the scan only matters for `p = 2`.
    pub fn find(&self, source: Theta, target: Theta) -> Option<HeisenbergIso> {
        let field = &self.field;
        let fld = field.base;
        let p = fld.p();
        match (source[2] == 0, target[2] == 0) {
            (true, true) => return self.small.iter().find_map(|g| search_isomorphism(g, source, target)),
            (false, false) => {}
            _ => return None,
        }
        let ratio = fld.mul(source[2], fld.inv(target[2]).expect("nonzero"));
        let u = self.roots[ratio as usize].clone()?;
        let tz_inv = field.inv(&field.from_base(target[2])).expect("nonzero");
        let base = |c: u32| field.from_base(c);
        let cross = |m: &Gf, n: &Gf| if p == 2 { field.mul(m, n) } else { field.zero() };
        let (one, zero) = (field.one(), field.zero());
        // θ(x) u - u^p θ'(x) = c^p θ'(z)
        let cx = field.sub(
            &field.mul(&base(source[0]), &u),
            &field.add(&field.mul(&field.frobenius(&u), &base(target[0])), &cross(&u, &zero)),
        );
        let c = field.pth_root(&field.mul(&cx, &tz_inv));
        // θ(y) u - θ'(y) = f^p θ'(z)
        let fy = field.sub(&field.mul(&base(source[1]), &u), &field.add(&base(target[1]), &cross(&zero, &one)));
        let f = field.pth_root(&field.mul(&fy, &tz_inv));
        let iso = HeisenbergIso {
            source,
            target,
            field: field.clone(),
            params: [u, zero.clone(), c, zero, one, f],
        };
        iso.verify().then_some(iso)
    }
}

/// Witness over a proper extension; see [`ExtensionSearch::find`].
pub fn extension_isomorphism(p: u32, source: Theta, target: Theta) -> Result<Option<HeisenbergIso>> {
    Ok(ExtensionSearch::new(p)?.find(source, target))
}

/// Isomorphism `(h, θ) -> (h, θ')`, over `F_p` when possible and otherwise
/// over the smallest extension used by [`extension_isomorphism`].
pub fn heisenberg_isomorphism(p: u32, source: Theta, target: Theta) -> Result<Option<HeisenbergIso>> {
    if let Some(w) = fp_isomorphism(p, source, target)? {
        return Ok(Some(w));
    }
    extension_isomorphism(p, source, target)
}

/// The witness `e = 0, b = 1, d = -1` from `(h, x*)` to `(h, y*)`:
/// `x ↦ y`, `y ↦ -x`, `z ↦ z`.
pub fn x_to_y_witness(p: u32) -> Result<HeisenbergIso> {
    let fld = PrimeField::new(p)?;
    let field = ExtField::new(fld, 1);
    let params = [0, 1, 0, fld.neg(1), 0, 0].map(|v| field.from_base(v));
    Ok(HeisenbergIso {
        source: [1, 0, 0],
        target: [0, 1, 0],
        field,
        params,
    })
}

/// Checks an `F_p` witness with the general restricted-morphism machinery.
pub fn verify_as_morphism(p: u32, iso: &HeisenbergIso) -> Result<bool> {
    let Some(m) = iso.fp_matrix() else {
        return Ok(false);
    };
    let src = heisenberg(p, iso.source.map(i64::from))?;
    let tgt = heisenberg(p, iso.target.map(i64::from))?;
    Ok(RestrictedMorphism::new(&src, &tgt, m).is_ok() && iso.verify())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergClass {
    pub representative: Theta,
    pub members: Vec<Theta>,
    /// One witness `member -> representative` per non-representative member.
    pub witnesses: Vec<HeisenbergIso>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub p: u32,
    /// Classes up to isomorphism over the algebraic closure.
    pub classes: Vec<HeisenbergClass>,
    /// Number of classes up to isomorphism defined over `F_p`.
    pub fp_class_count: usize,
}

const CANONICAL: [Theta; 3] = [[0, 0, 0], [1, 0, 0], [0, 0, 1]];

pub fn classify_heisenberg_pstructures(p: u32, max_p: u32) -> Result<Classification> {
    PrimeField::new(p)?;
    if p > max_p {
        return Err(Error::CharacteristicUnsupported {
            p,
            reason: "exhaustive classification is capped by the configured bound",
        });
    }
    let mut thetas: Vec<Theta> = Vec::new();
    for c in CANONICAL {
        thetas.push(c);
    }
    for idx in 0..(p as u64).pow(3) {
        let t = digits(idx, p, 3);
        let t = [t[0], t[1], t[2]];
        if !thetas.contains(&t) {
            thetas.push(t);
        }
    }
    // Partition over F_p.
    let mut fp_classes: Vec<HeisenbergClass> = Vec::new();
    for &t in &thetas {
        let mut placed = false;
        for class in fp_classes.iter_mut() {
            if let Some(w) = fp_isomorphism(p, t, class.representative)? {
                class.members.push(t);
                class.witnesses.push(w);
                placed = true;
                break;
            }
        }
        if !placed {
            fp_classes.push(HeisenbergClass {
                representative: t,
                members: vec![t],
                witnesses: Vec::new(),
            });
        }
    }
    let fp_class_count = fp_classes.len();
    let ext = ExtensionSearch::new(p)?;
    let mut classes: Vec<HeisenbergClass> = Vec::new();
    for class in fp_classes {
        let mut merged = false;
        for target in classes.iter_mut() {
            if let Some(w) = ext.find(class.representative, target.representative) {
                target.members.extend(class.members.iter().copied());
                target.witnesses.push(w);
                for member_w in &class.witnesses {
                    let composed = match fp_isomorphism(p, member_w.source, target.representative)? {
                        Some(w) => w,
                        None => ext.find(member_w.source, target.representative).expect("isomorphism is transitive"),
                    };
                    target.witnesses.push(composed);
                }
                merged = true;
                break;
            }
        }
        if !merged {
            classes.push(class);
        }
    }
    Ok(Classification {
        p,
        classes,
        fp_class_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merging_degrees() {
        assert_eq!(merging_degree(2), 1);
        assert_eq!(merging_degree(3), 2);
        assert_eq!(merging_degree(5), 4);
        assert_eq!(merging_degree(7), 6);
    }

    #[test]
    fn extension_field_is_a_field() {
        let g = ExtField::new(PrimeField::new(3).unwrap(), 2);
        for i in 1..g.size() {
            let a = g.element(i);
            assert_eq!(g.mul(&a, &g.inv(&a).unwrap()), g.one());
            assert_eq!(g.frobenius(&g.pth_root(&a)), a);
        }
    }

    #[test]
    fn x_to_y_witness_verifies() {
        for p in [2, 3, 5, 7] {
            let w = x_to_y_witness(p).unwrap();
            assert!(verify_as_morphism(p, &w).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn z_ratio_splits_over_prime_field() {
        assert!(fp_isomorphism(3, [0, 0, 1], [0, 0, 2]).unwrap().is_none());
        let w = extension_isomorphism(3, [0, 0, 1], [0, 0, 2]).unwrap().unwrap();
        assert_eq!(w.field_degree(), 2);
        assert!(w.verify());
    }

    #[test]
    fn small_classifications() {
        let c = classify_heisenberg_pstructures(3, DEFAULT_MAX_P).unwrap();
        assert_eq!(c.classes.len(), 3);
        assert_eq!(c.fp_class_count, 4);
        let c = classify_heisenberg_pstructures(2, DEFAULT_MAX_P).unwrap();
        assert_eq!(c.fp_class_count, 3);
        let reps: Vec<Theta> = c.classes.iter().map(|k| k.representative).collect();
        assert_eq!(reps, vec![[0, 0, 0], [0, 0, 1]]);
        assert!(classify_heisenberg_pstructures(11, DEFAULT_MAX_P).is_err());
    }
}
