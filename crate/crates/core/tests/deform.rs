mod common;

use common::{fp, mat, random_matrix, random_vec, rng};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use reslie::catalog::{self, THETA_X, THETA_Z, THETA_ZERO};
use reslie::complex::{differential_matrix, Regime};
use reslie::deform::{
    check_deformation, equivalence_solve, extend_order, infinitesimal, join_c2, nijenhuis_check, nijenhuis_deformation,
    nijenhuis_jet, obstruction, obstruction_residual, split_c2, transport, Identity, TruncatedDeformation,
};
use reslie::field::{FpMatrix, FpVector};
use reslie::lie::{CeCochain, LModule};
use reslie::rescoh_2::RC2n;
use reslie::rescoh_p::{omega_eval, Setting};
use reslie::restricted::{right_ad_power, BracketOps, RestrictedAlgebra};

fn bases() -> Vec<(String, RestrictedAlgebra)> {
    let mut out = Vec::new();
    for p in [2u32, 3, 5] {
        for theta in [THETA_ZERO, THETA_X, THETA_Z] {
            out.push((format!("heisenberg {theta:?} p{p}"), catalog::heisenberg(p, theta).unwrap()));
        }
        out.push((format!("sl2 p{p}"), catalog::sl2(p).unwrap()));
    }
    out
}

fn random_cocycle(r: &mut ChaCha8Rng, base: &RestrictedAlgebra) -> FpVector {
    let adj = LModule::adjoint(&base.lie);
    let s = Setting::new(base, &adj);
    let z = differential_matrix(&s, 2).unwrap().kernel_basis();
    let f = base.field();
    let mut v = FpVector::zero(f, z[0].len());
    for b in &z {
        v.axpy(r.gen_range(0..f.p()), b);
    }
    v
}

fn d1_of(base: &RestrictedAlgebra, psi: &FpMatrix) -> FpVector {
    let adj = LModule::adjoint(&base.lie);
    let s = Setting::new(base, &adj);
    differential_matrix(&s, 1).unwrap().mul_vec(&psi.transpose().to_vector())
}

fn d2_of(base: &RestrictedAlgebra, c: &FpVector) -> FpVector {
    let adj = LModule::adjoint(&base.lie);
    let s = Setting::new(base, &adj);
    differential_matrix(&s, 2).unwrap().mul_vec(c)
}

#[test]
fn check_examples() {
    for (name, base) in bases() {
        assert!(check_deformation(&TruncatedDeformation::constant(base, 3)).passed(), "{name}");
    }
    assert!(check_deformation(&catalog::char2_example().unwrap()).passed());
    let h = catalog::heisenberg(5, THETA_ZERO).unwrap();
    let mut m1 = CeCochain::zero(fp(5), 3, 3, 2);
    // dm_1(x, y, z) picks up [x, m_1(y, z)] = [x, y] = z.
    m1.set_value(&[1, 2], &h.lie.basis(1));
    let adj = LModule::adjoint(&h.lie);
    assert!(!reslie::lie::ce_differential(&h.lie, &adj, &m1).is_zero());
    let d = TruncatedDeformation::new(h.clone(), vec![m1], vec![vec![h.lie.zero(); 3]]).unwrap();
    let fail = check_deformation(&d).failure.unwrap();
    assert_eq!(fail, (1, Identity::Jacobi(0, 1, 2)));
}

/// At order one the deformation equations hold exactly when the
/// infinitesimal is a restricted 2-cocycle.
#[test]
fn order_one_check_iff_cocycle() {
    let mut r = rng(1);
    for (name, base) in bases() {
        let adj = LModule::adjoint(&base.lie);
        let len = reslie::complex::cochain_len(&Setting::new(&base, &adj), 2).unwrap();
        let (mut yes, mut no) = (0, 0);
        for k in 0..100 {
            let c = if k % 2 == 0 { random_vec(&mut r, base.field(), len) } else { random_cocycle(&mut r, &base) };
            let d = TruncatedDeformation::order_one(base.clone(), &c).unwrap();
            let cocycle = infinitesimal(&d).unwrap().is_cocycle();
            assert_eq!(check_deformation(&d).passed(), cocycle, "{name} k={k}");
            if cocycle {
                yes += 1;
            } else {
                no += 1;
            }
        }
        assert!(yes > 0 && no > 0, "{name}");
    }
}

#[test]
fn infinitesimal_examples() {
    let h = catalog::heisenberg(3, THETA_X).unwrap();
    let inf = infinitesimal(&TruncatedDeformation::constant(h, 1)).unwrap();
    assert!(inf.cochain.is_zero() && inf.is_cocycle());

    let ex = catalog::char2_example().unwrap();
    let inf = infinitesimal(&ex).unwrap();
    assert!(inf.is_cocycle());
    let mut expect = RC2n::zero(fp(2), 3, 3, 2);
    expect.phi.set_value(&[0, 2], &ex.base.lie.basis(2));
    expect.set_omega(0, &[], &ex.base.lie.basis(0));
    assert_eq!(inf.cochain, expect.coords());

    let mut r = rng(2);
    for (name, base) in bases() {
        let psi = random_matrix(&mut r, base.field(), base.dim(), base.dim());
        let c = d1_of(&base, &psi);
        let d = TruncatedDeformation::order_one(base.clone(), &c).unwrap();
        assert!(infinitesimal(&d).unwrap().is_cocycle(), "{name}");
        assert!(check_deformation(&d).passed(), "{name}");
    }
}

#[test]
fn equivalence_examples() {
    let mut r = rng(3);
    for (name, base) in bases() {
        let c = random_cocycle(&mut r, &base);
        let d = TruncatedDeformation::order_one(base.clone(), &c).unwrap();
        let eq = equivalence_solve(&d, &d).unwrap().unwrap();
        assert_eq!(eq.maps[0], FpMatrix::identity(base.field(), base.dim()));
        assert!(eq.maps[1].is_zero(), "{name}");

        // A coboundary jet is trivial, through a map whose differential
        // matches the jet up to sign.
        let psi = random_matrix(&mut r, base.field(), base.dim(), base.dim());
        let jet = d1_of(&base, &psi);
        let d = TruncatedDeformation::order_one(base.clone(), &jet).unwrap();
        let constant = TruncatedDeformation::constant(base.clone(), 1);
        let eq = equivalence_solve(&d, &constant).unwrap().unwrap();
        let phi1 = eq.maps[1].clone();
        assert_eq!(d1_of(&base, &phi1), jet, "{name}");
        let twisted = transport(&d, &eq.maps).unwrap();
        assert_eq!(twisted, constant, "{name}");
    }
    // A nonzero class of (h, 0) over F_2 gives a nontrivial deformation.
    let ex = catalog::char2_example().unwrap();
    let constant = TruncatedDeformation::constant(ex.base.clone(), 1);
    assert!(equivalence_solve(&ex, &constant).unwrap().is_none());
}

/// Twisting a deformation by `id + tψ` changes the infinitesimal by the
/// differential of `ψ`.
#[test]
fn twisted_infinitesimals_are_cohomologous() {
    let mut r = rng(4);
    for (name, base) in bases() {
        for _ in 0..10 {
            let c = random_cocycle(&mut r, &base);
            let d = TruncatedDeformation::order_one(base.clone(), &c).unwrap();
            let psi = random_matrix(&mut r, base.field(), base.dim(), base.dim());
            let id = FpMatrix::identity(base.field(), base.dim());
            let d2 = transport(&d, &[id, psi.clone()]).unwrap();
            assert!(check_deformation(&d2).passed(), "{name}");
            let diff = infinitesimal(&d2).unwrap().cochain.minus(&infinitesimal(&d).unwrap().cochain);
            assert_eq!(diff, d1_of(&base, &psi).scaled(base.field().neg(1)), "{name}");
            let eq = equivalence_solve(&d, &d2).unwrap().unwrap();
            assert_eq!(d1_of(&base, &eq.maps[1]), d1_of(&base, &psi), "{name}");
        }
    }
}

/// Deformations of order `n + 1` built by twisting, truncated to order `n`:
/// the obstruction equals the differential of the top coefficients.
#[test]
fn obstruction_is_differential_of_next_order() {
    let mut r = rng(5);
    for (name, base) in bases() {
        let n = base.dim();
        let f = base.field();
        for order in 1..=2 {
            for _ in 0..5 {
                let mut d = TruncatedDeformation::order_one(base.clone(), &random_cocycle(&mut r, &base)).unwrap();
                while d.order() < order + 1 {
                    match extend_order(&d).unwrap() {
                        Some(e) => d = e,
                        None => d = TruncatedDeformation::constant(base.clone(), d.order() + 1),
                    }
                }
                let mut maps = vec![FpMatrix::identity(f, n)];
                maps.extend((0..order + 1).map(|_| random_matrix(&mut r, f, n, n)));
                let full = transport(&d, &maps).unwrap();
                assert!(check_deformation(&full).passed(), "{name}");
                let top = join_c2(&base, &full.brackets[order], &full.pmaps[order]);
                let cut = full.truncate(order);
                let obs = obstruction(&cut).unwrap().coords();
                assert_eq!(obs, d2_of(&base, &top), "{name} order={order}");
                assert_eq!(obs, obstruction_residual(&cut).unwrap(), "{name} order={order}");
            }
        }
    }
}

#[test]
fn obstruction_examples() {
    let mut r = rng(6);
    for p in [2u32, 3, 5] {
        let ab = catalog::abelian(p, &FpMatrix::zeros(fp(p), 3, 3)).unwrap();
        let w: Vec<FpVector> = (0..3).map(|_| random_vec(&mut r, fp(p), 3)).collect();
        let d = TruncatedDeformation::new(ab, vec![CeCochain::zero(fp(p), 3, 3, 2)], vec![w]).unwrap();
        assert!(obstruction(&d).unwrap().coords().is_zero());
    }
    let ex = catalog::char2_example().unwrap();
    assert!(obstruction(&ex).unwrap().coords().is_zero());
    let ext = extend_order(&ex).unwrap().unwrap();
    assert!(ext.brackets[1].is_zero() && ext.pmaps[1].iter().all(|v| v.is_zero()));
    assert!(check_deformation(&ext).passed());
}

#[test]
fn extension_examples() {
    for (name, base) in bases() {
        let ext = extend_order(&TruncatedDeformation::constant(base.clone(), 1)).unwrap().unwrap();
        assert_eq!(ext, TruncatedDeformation::constant(base, 2), "{name}");
    }
    for p in [2u32, 3, 5] {
        let d = catalog::obstructed_example(p).unwrap();
        assert!(check_deformation(&d).passed());
        assert!(extend_order(&d).unwrap().is_none(), "p={p}");
        let obs = obstruction(&d).unwrap().coords();
        let d2 = {
            let adj = LModule::adjoint(&d.base.lie);
            differential_matrix(&Setting::new(&d.base, &adj), 2).unwrap()
        };
        let mut cols: Vec<FpVector> = (0..d2.cols()).map(|j| d2.column(j)).collect();
        let before = reslie::field::span_rank(fp(p), d2.rows(), &cols);
        cols.push(obs);
        assert_eq!(reslie::field::span_rank(fp(p), d2.rows(), &cols), before + 1, "p={p}");
    }
}

#[test]
fn extensions_are_verified_and_consistent() {
    let mut r = rng(7);
    for (name, base) in bases() {
        let mut extended = 0;
        for k in 0..10 {
            // Coboundary jets are trivial and always extend.
            let c = if k % 2 == 0 {
                random_cocycle(&mut r, &base)
            } else {
                d1_of(&base, &random_matrix(&mut r, base.field(), base.dim(), base.dim()))
            };
            let d = TruncatedDeformation::order_one(base.clone(), &c).unwrap();
            let Some(e2) = extend_order(&d).unwrap() else {
                continue;
            };
            extended += 1;
            assert!(check_deformation(&e2).passed(), "{name}");
            assert_eq!(e2.truncate(1), d);
            if let Some(e3) = extend_order(&e2).unwrap() {
                assert!(check_deformation(&e3).passed(), "{name}");
                assert_eq!(e3.truncate(2), e2);
            }
        }
        assert!(extended >= 5, "{name}");
    }
}

/// For a verified deformation the first-order part of the deformed p-map on
/// arbitrary elements follows from basis values through the (*)-rule, or
/// the polarization rule in characteristic 2.
#[test]
fn omega_one_has_star_property() {
    let mut r = rng(8);
    for (name, base) in bases() {
        let adj = LModule::adjoint(&base.lie);
        let s = Setting::new(&base, &adj);
        for _ in 0..10 {
            let d = TruncatedDeformation::order_one(base.clone(), &random_cocycle(&mut r, &base)).unwrap();
            let alg = d.algebra(1);
            let x = random_vec(&mut r, base.field(), base.dim());
            let ring = alg.pmap(&alg.constant(&x))[1].clone();
            let predicted = match d.regime() {
                Regime::Odd => omega_eval(&s, &d.brackets[0], &d.pmaps[0], &x).unwrap(),
                Regime::Two => {
                    let c = RC2n { degree: 2, phi: d.brackets[0].clone(), omega: d.pmaps[0].clone() };
                    c.omega_eval(&x, &[])
                }
            };
            assert_eq!(ring, predicted, "{name}");
        }
    }
}

/// In characteristic 2 the p-map part of the obstruction, read off the
/// deformation equations at arbitrary arguments, obeys the polarization
/// rule with respect to the bracket part.
#[test]
fn char2_obstruction_polarization() {
    let mut r = rng(9);
    let mut cases = vec![catalog::obstructed_example(2).unwrap(), catalog::char2_example().unwrap()];
    for (_, base) in bases().into_iter().filter(|(_, b)| b.p() == 2) {
        for _ in 0..5 {
            cases.push(TruncatedDeformation::order_one(base.clone(), &random_cocycle(&mut r, &base)).unwrap());
        }
    }
    for d in cases {
        let n = d.base.dim();
        let obs = obstruction(&d).unwrap();
        let rc = RC2n { degree: 3, phi: obs.obs1.clone(), omega: obs.obs2.clone() };
        let alg = d.algebra(d.order() + 1);
        for _ in 0..20 {
            let (x, y) = (random_vec(&mut r, fp(2), n), random_vec(&mut r, fp(2), n));
            let (xs, ys) = (alg.constant(&x), alg.constant(&y));
            let lhs = alg.bracket(&ys, &alg.pmap(&xs));
            let rhs = right_ad_power(&alg, &ys, &xs, 2);
            let defect = lhs[d.order() + 1].minus(&rhs[d.order() + 1]);
            assert_eq!(defect, rc.omega_eval(&x, &[&y]));
        }
    }
}

#[test]
fn nijenhuis_examples() {
    let h = catalog::heisenberg(5, THETA_ZERO).unwrap();
    let f = fp(5);
    let id = FpMatrix::identity(f, 3);
    assert!(nijenhuis_check(&h, &id).unwrap());
    let (bracket, _) = split_c2(&h, &nijenhuis_jet(&h, &id).unwrap()).unwrap();
    for i in 0..3 {
        for j in i + 1..3 {
            assert_eq!(bracket.value(&[i, j]), h.lie.bracket_basis(i, j));
        }
    }
    assert_eq!(nijenhuis_jet(&h, &id).unwrap(), d1_of(&h, &id));
    let zero = FpMatrix::zeros(f, 3, 3);
    assert!(nijenhuis_check(&h, &zero).unwrap());
    assert!(nijenhuis_jet(&h, &zero).unwrap().is_zero());

    // Projection onto z: [x, y]_N = -z, so N[x, y]_N = -z while [Nx, Ny] = 0.
    let onto_z = mat(5, &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
    assert!(!nijenhuis_check(&h, &onto_z).unwrap());
    // Projection onto x: [x, y]_N = z and N z = 0 = [x, 0]; both p-map
    // sides vanish.
    let onto_x = mat(5, &[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
    assert!(nijenhuis_check(&h, &onto_x).unwrap());
    let d = nijenhuis_deformation(&h, &onto_x).unwrap();
    assert!(check_deformation(&d).passed());
    let eq = equivalence_solve(&d, &TruncatedDeformation::constant(h.clone(), 1)).unwrap().unwrap();
    assert_eq!(d1_of(&h, &eq.maps[1]), d1_of(&h, &onto_x));
}

#[test]
fn nijenhuis_bracket_identity_oracle() {
    let mut r = rng(10);
    for p in [3u32, 5] {
        for (name, base) in catalog::all_for(p).unwrap() {
            let n = base.dim();
            let lie = &base.lie;
            for _ in 0..20 {
                let nm = random_matrix(&mut r, base.field(), n, n);
                let bracket_ok = (0..n).all(|i| {
                    (0..n).all(|j| {
                        let (x, y) = (lie.basis(i), lie.basis(j));
                        let (nx, ny) = (nm.mul_vec(&x), nm.mul_vec(&y));
                        let bn = lie.bracket(&nx, &y).plus(&lie.bracket(&x, &ny)).minus(&nm.mul_vec(&lie.bracket(&x, &y)));
                        nm.mul_vec(&bn) == lie.bracket(&nx, &ny)
                    })
                });
                if !bracket_ok {
                    assert!(!nijenhuis_check(&base, &nm).unwrap(), "{name}");
                }
            }
        }
    }
}

#[test]
fn cochain_split_round_trips() {
    let mut r = rng(11);
    for (_, base) in bases() {
        let c = random_cocycle(&mut r, &base);
        let (b, w) = split_c2(&base, &c).unwrap();
        assert_eq!(join_c2(&base, &b, &w), c);
    }
}
