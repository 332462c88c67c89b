mod common;

use common::{fp, random_cochain, random_vec, rng};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use reslie::catalog::{self, THETA_X, THETA_Z, THETA_ZERO};
use reslie::field::{FpMatrix, FpVector};
use reslie::lie::{ce_cohomology, ce_differential, CeCochain, LModule};
use reslie::rescoh_p::{
    d0_matrix, d1_matrix, d1_star, d2_matrix, d2_star, h1_restricted_derivations, ind1, ind2, omega_eval,
    restricted_cohomology_p, star_correction, Setting, RC2,
};
use reslie::restricted::RestrictedAlgebra;
use reslie::tuples::binom;

fn random_omega(r: &mut ChaCha8Rng, s: &Setting) -> Vec<FpVector> {
    (0..s.n()).map(|_| random_vec(r, s.field(), s.m())).collect()
}

/// Word sum of the (**)-rule: the additivity defect of `β(x, ·)` predicted
/// from `α`, with `k` actions on the outside, `j - k` letters nested onto
/// `x`, and `[h_1, ..., h_{p-j-1}]`, `h_{p-j}` in the last two slots.
fn double_star_defect(s: &Setting, alpha: &CeCochain, x: &FpVector, y1: &FpVector, y2: &FpVector) -> FpVector {
    let f = s.field();
    let p = f.p() as usize;
    let lie = &s.alg.lie;
    let mut acc = FpVector::zero(f, s.m());
    for mask in 0u64..(1 << (p - 2)) {
        let mut h = vec![y1.clone(), y2.clone()];
        for k in 0..p - 2 {
            h.push(if mask >> k & 1 == 1 { y2.clone() } else { y1.clone() });
        }
        let count = 1 + (0..p - 2).filter(|k| mask >> k & 1 == 0).count() as u32;
        let weight = f.inv(count).unwrap();
        // h_i is h[i - 1]
        for j in 0..=p - 2 {
            for k in 1..=j {
                let mut first = x.clone();
                for idx in (p - j + 1..=p - k).rev() {
                    first = lie.bracket(&first, &h[idx - 1]);
                }
                let mut second = h[0].clone();
                for idx in 2..=p - j - 1 {
                    second = lie.bracket(&second, &h[idx - 1]);
                }
                let mut v = alpha.eval(&[&first, &second, &h[p - j - 1]]);
                for idx in p - k + 1..=p {
                    v = s.module.act(&h[idx - 1], &v);
                }
                let c = f.mul(f.mul(weight, f.sign(j)), f.reduce(binom(j, k) as i64));
                acc.axpy(c, &v);
            }
        }
    }
    acc
}

fn random_ce_cocycle(r: &mut ChaCha8Rng, alg: &RestrictedAlgebra, module: &LModule) -> CeCochain {
    let f = alg.field();
    let mut c = CeCochain::zero(f, alg.dim(), module.dim(), 2);
    for z in ce_cohomology(&alg.lie, module, 2).unwrap().cocycles {
        let z = CeCochain::from_coords(alg.dim(), module.dim(), 2, &z).unwrap();
        c = c.add(&z.scaled(r.gen_range(0..f.p())));
    }
    c
}

/// Settings in which every alternating φ admits an ω with the (*)-property.
fn consistent_settings() -> Vec<(String, RestrictedAlgebra, bool)> {
    let mut out = Vec::new();
    for p in [3u32, 5, 7] {
        for theta in [THETA_ZERO, THETA_X, THETA_Z] {
            out.push((format!("heisenberg {theta:?} p{p} trivial"), catalog::heisenberg(p, theta).unwrap(), false));
            if p >= 5 {
                out.push((format!("heisenberg {theta:?} p{p} adjoint"), catalog::heisenberg(p, theta).unwrap(), true));
            }
        }
        out.push((format!("abelian p{p}"), catalog::abelian(p, &FpMatrix::identity(fp(p), 2)).unwrap(), true));
    }
    out
}

fn odd_algebras() -> Vec<(String, RestrictedAlgebra)> {
    let mut out = Vec::new();
    for p in [3u32, 5, 7] {
        for (name, alg) in catalog::all_for(p).unwrap() {
            out.push((format!("{name}/p{p}"), alg));
        }
    }
    out
}

#[test]
fn omega_eval_p3_rewritten_form() {
    let mut r = rng(1);
    for (name, alg) in catalog::all_for(3).unwrap() {
        let adj = LModule::adjoint(&alg.lie);
        let s = Setting::new(&alg, &adj);
        for _ in 0..20 {
            let phi = random_ce_cocycle(&mut r, &alg, &adj);
            let omega = random_omega(&mut r, &s);
            let (x, y) = (random_vec(&mut r, fp(3), s.n()), random_vec(&mut r, fp(3), s.n()));
            let w = |v: &FpVector| omega_eval(&s, &phi, &omega, v).unwrap();
            let xy = alg.lie.bracket(&x, &y);
            let pxy = phi.eval(&[&x, &y]);
            let mut expect = w(&x).plus(&w(&y));
            expect.add_assign(&phi.eval(&[&xy, &y]));
            expect.sub_assign(&phi.eval(&[&xy, &x]));
            expect.add_assign(&adj.act(&x, &pxy));
            expect.sub_assign(&adj.act(&y, &pxy));
            assert_eq!(w(&x.plus(&y)), expect, "{name}");
            assert!(w(&alg.lie.zero()).is_zero());
        }
    }
}

#[test]
fn omega_eval_on_heisenberg_is_additive() {
    let mut r = rng(2);
    let h = catalog::heisenberg(5, THETA_ZERO).unwrap();
    let adj = LModule::adjoint(&h.lie);
    let s = Setting::new(&h, &adj);
    for _ in 0..50 {
        let phi = random_cochain(&mut r, fp(5), 3, 3, 2);
        let omega = random_omega(&mut r, &s);
        let (x, y) = (random_vec(&mut r, fp(5), 3), random_vec(&mut r, fp(5), 3));
        let w = |v: &FpVector| omega_eval(&s, &phi, &omega, v).unwrap();
        assert_eq!(w(&x.plus(&y)), w(&x).plus(&w(&y)));
    }
}

#[test]
fn omega_eval_is_fold_order_independent() {
    // Evaluating through a permuted basis means summing the same terms in
    // another order; the (*)-rule must give the same result.
    let mut r = rng(3);
    for (name, alg) in odd_algebras() {
        if alg.dim() != 3 {
            continue;
        }
        let adj = LModule::adjoint(&alg.lie);
        let s = Setting::new(&alg, &adj);
        let f = alg.field();
        for _ in 0..10 {
            let phi = random_ce_cocycle(&mut r, &alg, &adj);
            let omega = random_omega(&mut r, &s);
            let v = random_vec(&mut r, f, 3);
            let terms: Vec<FpVector> = (0..3).map(|i| alg.lie.basis(i).scaled(v.raw()[i])).collect();
            for order in [[2, 1, 0], [1, 0, 2], [0, 2, 1]] {
                let mut acc = FpVector::zero(f, 3);
                let mut prefix = FpVector::zero(f, 3);
                for &i in &order {
                    acc.add_assign(&star_correction(&s, &phi, &prefix, &terms[i]));
                    acc.add_assign(&omega_eval(&s, &phi, &omega, &terms[i]).unwrap());
                    prefix.add_assign(&terms[i]);
                }
                assert_eq!(acc, omega_eval(&s, &phi, &omega, &v).unwrap(), "{name}");
            }
        }
    }
}

/// The correction of the (*)-rule is an additive 2-cocycle only for some
/// φ; for a non-closed φ on sl_2 no ω with the (*)-property exists.
#[test]
fn star_rule_needs_closed_phi() {
    let mut r = rng(8);
    let sl = catalog::sl2(3).unwrap();
    let adj = LModule::adjoint(&sl.lie);
    let s = Setting::new(&sl, &adj);
    let mut inconsistent = 0;
    for _ in 0..50 {
        let phi = random_cochain(&mut r, fp(3), 3, 3, 2);
        let (x, y, z) = (random_vec(&mut r, fp(3), 3), random_vec(&mut r, fp(3), 3), random_vec(&mut r, fp(3), 3));
        let c = |a: &FpVector, b: &FpVector| star_correction(&s, &phi, a, b);
        let defect = c(&x, &y).plus(&c(&x.plus(&y), &z)).minus(&c(&y, &z)).minus(&c(&x, &y.plus(&z)));
        if !defect.is_zero() {
            assert!(!ce_differential(&sl.lie, &adj, &phi).is_zero());
            inconsistent += 1;
        }
    }
    assert!(inconsistent > 0);
    for _ in 0..50 {
        let phi = random_ce_cocycle(&mut r, &sl, &adj);
        let (x, y, z) = (random_vec(&mut r, fp(3), 3), random_vec(&mut r, fp(3), 3), random_vec(&mut r, fp(3), 3));
        let c = |a: &FpVector, b: &FpVector| star_correction(&s, &phi, a, b);
        assert_eq!(c(&x, &y).plus(&c(&x.plus(&y), &z)), c(&y, &z).plus(&c(&x, &y.plus(&z))));
        assert_eq!(c(&x, &y), c(&y, &x));
    }
}

#[test]
fn ind1_examples() {
    let h = catalog::heisenberg(5, THETA_X).unwrap();
    let adj = LModule::adjoint(&h.lie);
    let s = Setting::new(&h, &adj);
    let mut id = CeCochain::zero(fp(5), 3, 3, 1);
    for i in 0..3 {
        id.set_value(&[i], &h.lie.basis(i));
    }
    assert_eq!(ind1(&s, &id, &h.lie.basis(0)), h.lie.basis(2).scaled(4));
    let zero = CeCochain::zero(fp(5), 3, 3, 1);
    assert!(ind1(&s, &zero, &h.lie.basis(0)).is_zero());

    let mut r = rng(4);
    let ab = catalog::abelian(5, &FpMatrix::zeros(fp(5), 3, 3)).unwrap();
    let adj = LModule::adjoint(&ab.lie);
    let s = Setting::new(&ab, &adj);
    for _ in 0..20 {
        let phi = random_cochain(&mut r, fp(5), 3, 3, 1);
        assert!(ind1(&s, &phi, &random_vec(&mut r, fp(5), 3)).is_zero());
    }
}

#[test]
fn ind2_heisenberg_short_forms() {
    let mut r = rng(5);
    for p in [3u32, 5, 7] {
        for theta in [THETA_ZERO, THETA_X, THETA_Z] {
            let h = catalog::heisenberg(p, theta).unwrap();
            let adj = LModule::adjoint(&h.lie);
            let s = Setting::new(&h, &adj);
            for _ in 0..10 {
                let phi = random_cochain(&mut r, fp(p), 3, 3, 2);
                let omega = random_omega(&mut r, &s);
                for u in 0..3 {
                    for v in 0..3 {
                        let (bu, bv) = (h.lie.basis(u), h.lie.basis(v));
                        let mut short = phi.eval(&[&bu, &h.pmap_eval(&bv)]);
                        short.add_assign(&h.lie.bracket(&bu, &omega[v]));
                        if p == 3 {
                            let inner = phi.eval(&[&h.lie.bracket(&bu, &bv), &bv]);
                            short.sub_assign(&h.lie.bracket(&inner, &bv));
                        }
                        let got = ind2(&s, &phi, &omega, &bu, &bv).unwrap();
                        assert_eq!(got.plus(&short), FpVector::zero(fp(p), 3), "p={p} ({u},{v})");
                    }
                }
            }
        }
    }
}

#[test]
fn zero_cochain_has_zero_differentials() {
    for (name, alg) in odd_algebras() {
        let adj = LModule::adjoint(&alg.lie);
        let s = Setting::new(&alg, &adj);
        assert!(d2_star(&s, &RC2::zero(&s)).unwrap().is_zero(), "{name}");
        let zero = CeCochain::zero(alg.field(), s.n(), s.m(), 1);
        assert_eq!(d1_star(&s, &zero).unwrap(), RC2::zero(&s));
    }
}

#[test]
fn differentials_compose_to_zero() {
    for (name, alg) in odd_algebras() {
        for module in [LModule::adjoint(&alg.lie), LModule::trivial(&alg.lie)] {
            let s = Setting::new(&alg, &module);
            let d0 = d0_matrix(&s);
            let d1 = d1_matrix(&s).unwrap();
            let d2 = d2_matrix(&s).unwrap();
            assert!(d1.mul(&d0).unwrap().is_zero(), "{name}");
            assert!(d2.mul(&d1).unwrap().is_zero(), "{name}");
        }
    }
}

#[test]
fn heisenberg_h2_dimensions() {
    let dim = |p, theta| {
        let h = catalog::heisenberg(p, theta).unwrap();
        let adj = LModule::adjoint(&h.lie);
        restricted_cohomology_p(&Setting::new(&h, &adj), 2).unwrap()
    };
    let r = dim(5, THETA_ZERO);
    assert_eq!(r.dim, 8);
    assert!(r.coboundary_dim <= r.cocycle_dim);
    assert_eq!(dim(5, THETA_X).dim, 4);
    assert_eq!(dim(5, THETA_Z).dim, 4);
    assert_eq!(dim(3, THETA_ZERO).dim, 8);
    assert_eq!(dim(5, THETA_ZERO).coboundary_dim, 3);
}

/// Counts restricted derivations by running through every linear map.
fn count_restricted_derivations(alg: &RestrictedAlgebra) -> u64 {
    let f = alg.field();
    let p = f.p() as u64;
    let n = alg.dim();
    let lie = &alg.lie;
    let mut count = 0;
    for code in 0..p.pow((n * n) as u32) {
        let mut d = FpMatrix::zeros(f, n, n);
        let mut c = code;
        for k in 0..n * n {
            d.set_raw(k % n, k / n, (c % p) as u32);
            c /= p;
        }
        let leibniz = (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let (a, b) = (lie.basis(i), lie.basis(j));
                d.mul_vec(&lie.bracket(&a, &b)) == lie.bracket(&d.mul_vec(&a), &b).plus(&lie.bracket(&a, &d.mul_vec(&b)))
            })
        });
        if !leibniz {
            continue;
        }
        let restricted = (0..n).all(|i| {
            let e = lie.basis(i);
            let mut v = d.mul_vec(&e);
            for _ in 0..p - 1 {
                v = lie.bracket(&e, &v);
            }
            d.mul_vec(alg.pmap.image(i)) == v
        });
        if restricted {
            count += 1;
        }
    }
    count
}

#[test]
fn h1_matches_enumeration() {
    let mut cases = Vec::new();
    for theta in [THETA_ZERO, THETA_X, THETA_Z] {
        cases.push(catalog::heisenberg(3, theta).unwrap());
    }
    cases.push(catalog::heisenberg(5, THETA_ZERO).unwrap());
    cases.push(catalog::sl2(3).unwrap());
    for alg in cases {
        let p = alg.p() as u64;
        let z = h1_restricted_derivations(&alg).unwrap().len();
        assert_eq!(p.pow(z as u32), count_restricted_derivations(&alg));
        let adj = LModule::adjoint(&alg.lie);
        let res = restricted_cohomology_p(&Setting::new(&alg, &adj), 1).unwrap();
        assert_eq!(res.cocycle_dim, z);
    }
    let h = catalog::heisenberg(5, THETA_ZERO).unwrap();
    let adj = LModule::adjoint(&h.lie);
    assert_eq!(restricted_cohomology_p(&Setting::new(&h, &adj), 1).unwrap().dim, 4);
}

#[test]
fn h1_examples() {
    for p in [3u32, 5] {
        let ab = catalog::abelian(p, &FpMatrix::zeros(fp(p), 3, 3)).unwrap();
        let adj = LModule::adjoint(&ab.lie);
        assert_eq!(restricted_cohomology_p(&Setting::new(&ab, &adj), 1).unwrap().dim, 9);
    }
    let w = catalog::witt(5).unwrap();
    let adj = LModule::adjoint(&w.lie);
    let s = Setting::new(&w, &adj);
    for i in 0..5 {
        let mut ad = CeCochain::zero(fp(5), 5, 5, 1);
        for j in 0..5 {
            ad.set_value(&[j], &w.lie.bracket_basis(i, j));
        }
        let d = d1_star(&s, &ad).unwrap();
        assert!(d.phi.is_zero() && d.omega.iter().all(|v| v.is_zero()), "ad e_{i}");
    }
}

#[test]
fn ind1_has_star_property() {
    let mut r = rng(6);
    for (name, alg) in odd_algebras() {
        let adj = LModule::adjoint(&alg.lie);
        let s = Setting::new(&alg, &adj);
        let f = alg.field();
        for _ in 0..10 {
            let phi = random_cochain(&mut r, f, s.n(), s.m(), 1);
            let dphi = ce_differential(&alg.lie, &adj, &phi);
            let (x, y) = (random_vec(&mut r, f, s.n()), random_vec(&mut r, f, s.n()));
            let lam = r.gen_range(0..f.p());
            let mut expect = ind1(&s, &phi, &x).plus(&ind1(&s, &phi, &y));
            expect.add_assign(&star_correction(&s, &dphi, &x, &y));
            assert_eq!(ind1(&s, &phi, &x.plus(&y)), expect, "{name}");
            assert_eq!(ind1(&s, &phi, &x.scaled(lam)), ind1(&s, &phi, &x).scaled(lam), "{name}");
            // The stored basis values recover the whole map.
            let omega: Vec<FpVector> = (0..s.n()).map(|i| ind1(&s, &phi, &alg.lie.basis(i))).collect();
            assert_eq!(omega_eval(&s, &dphi, &omega, &x).unwrap(), ind1(&s, &phi, &x), "{name}");
        }
    }
}

fn check_double_star(r: &mut ChaCha8Rng, name: &str, alg: &RestrictedAlgebra, module: &LModule, phi: &CeCochain) {
    let s = Setting::new(alg, module);
    let f = alg.field();
    let omega = random_omega(r, &s);
    let alpha = ce_differential(&alg.lie, module, phi);
    let n = s.n();
    let (x, x2, y1, y2) = (random_vec(r, f, n), random_vec(r, f, n), random_vec(r, f, n), random_vec(r, f, n));
    let lam = r.gen_range(0..f.p());
    let b = |a: &FpVector, c: &FpVector| ind2(&s, phi, &omega, a, c).unwrap();
    assert_eq!(b(&x.plus(&x2), &y1), b(&x, &y1).plus(&b(&x2, &y1)), "{name}");
    assert_eq!(b(&x, &y1.scaled(lam)), b(&x, &y1).scaled(lam), "{name}");
    let mut expect = b(&x, &y1).plus(&b(&x, &y2));
    expect.sub_assign(&double_star_defect(&s, &alpha, &x, &y1, &y2));
    assert_eq!(b(&x, &y1.plus(&y2)), expect, "{name}");
}

#[test]
fn ind2_has_double_star_property() {
    let mut r = rng(7);
    for (name, alg, adjoint) in consistent_settings() {
        let module = if adjoint { LModule::adjoint(&alg.lie) } else { LModule::trivial(&alg.lie) };
        for _ in 0..10 {
            let phi = random_cochain(&mut r, alg.field(), alg.dim(), module.dim(), 2);
            check_double_star(&mut r, &name, &alg, &module, &phi);
        }
    }
    for (name, alg) in odd_algebras() {
        let adj = LModule::adjoint(&alg.lie);
        for _ in 0..5 {
            let phi = random_ce_cocycle(&mut r, &alg, &adj);
            check_double_star(&mut r, &name, &alg, &adj, &phi);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d2_star_is_linear_in_coordinates(seed in any::<u64>(), lam in 0u32..5) {
        let mut r = rng(seed);
        let h = catalog::heisenberg(5, THETA_X).unwrap();
        let adj = LModule::adjoint(&h.lie);
        let s = Setting::new(&h, &adj);
        let len = RC2::coord_len(3, 3);
        let (a, b) = (random_vec(&mut r, fp(5), len), random_vec(&mut r, fp(5), len));
        let d = |v: &FpVector| d2_star(&s, &RC2::from_coords(3, 3, v).unwrap()).unwrap().coords();
        prop_assert_eq!(d(&a.plus(&b.scaled(lam))), d(&a).plus(&d(&b).scaled(lam)));
        prop_assert_eq!(d2_matrix(&s).unwrap().mul_vec(&a), d(&a));
    }

    #[test]
    fn omega_eval_is_linear_in_the_pair(seed in any::<u64>(), lam in 0u32..3) {
        let mut r = rng(seed);
        let sl = catalog::sl2(3).unwrap();
        let adj = LModule::adjoint(&sl.lie);
        let s = Setting::new(&sl, &adj);
        let (p1, p2) = (random_cochain(&mut r, fp(3), 3, 3, 2), random_cochain(&mut r, fp(3), 3, 3, 2));
        let (w1, w2) = (random_omega(&mut r, &s), random_omega(&mut r, &s));
        let x = random_vec(&mut r, fp(3), 3);
        let sum_phi = p1.add(&p2.scaled(lam));
        let sum_w: Vec<FpVector> = w1.iter().zip(&w2).map(|(a, b)| a.plus(&b.scaled(lam))).collect();
        let lhs = omega_eval(&s, &sum_phi, &sum_w, &x).unwrap();
        let rhs = omega_eval(&s, &p1, &w1, &x).unwrap().plus(&omega_eval(&s, &p2, &w2, &x).unwrap().scaled(lam));
        prop_assert_eq!(lhs, rhs);
    }
}
