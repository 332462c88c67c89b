mod common;

use common::{fp, vec_of};
use reslie::catalog::classify::{
    classify_heisenberg_pstructures, fp_isomorphism, heisenberg_isomorphism, verify_as_morphism, x_to_y_witness, Theta,
    DEFAULT_MAX_P,
};
use reslie::catalog::{self, THETA_X, THETA_Y, THETA_Z, THETA_ZERO};
use reslie::deform::{check_deformation, extend_order, infinitesimal};
use reslie::doc::{load_algebra, AlgebraDocument, JetDocument};
use reslie::field::{FpMatrix, FpVector};
use reslie::lie::jacobi_check;
use reslie::restricted::{jacobson_build, verify_pmap, RestrictedAlgebra, RestrictedMorphism};
use reslie::Error;
use std::collections::BTreeSet;

#[test]
fn catalog_algebras_are_restricted() {
    for p in [2u32, 3, 5, 7] {
        for (name, alg) in catalog::all_for(p).unwrap() {
            assert_eq!(jacobi_check(&alg.lie), None, "{name} p{p}");
            assert!(verify_pmap(&alg.lie, &alg.pmap).passed(), "{name} p{p}");
        }
    }
}

#[test]
fn heisenberg_pmaps() {
    for p in [2u32, 3, 5, 7] {
        let z = vec_of(p, &[0, 0, 1]);
        let zero = vec_of(p, &[0, 0, 0]);
        let h0 = catalog::heisenberg(p, THETA_ZERO).unwrap();
        assert!(h0.pmap.images().iter().all(|v| v.is_zero()));
        let hx = catalog::heisenberg(p, THETA_X).unwrap();
        assert_eq!(hx.pmap.images(), &[z.clone(), zero.clone(), zero.clone()]);
        let hz = catalog::heisenberg(p, THETA_Z).unwrap();
        assert_eq!(hz.pmap.images(), &[zero.clone(), zero.clone(), z.clone()]);
        assert_eq!(h0.lie.bracket(&h0.lie.basis(0), &h0.lie.basis(1)), z);
    }
}

#[test]
fn witt_examples() {
    let w = catalog::witt(5).unwrap();
    let e = |i: i64| w.lie.basis((i + 1) as usize);
    assert_eq!(w.lie.bracket(&e(-1), &e(1)), e(0).scaled(2));
    assert!(w.lie.bracket(&e(0), &e(0)).is_zero());
    assert_eq!(w.pmap_eval(&e(0)), e(0));
    assert!(w.pmap_eval(&e(1)).is_zero());
    // [e_i, e_j] = (j - i) e_{i+j} inside the range, zero outside
    for i in -1..=3i64 {
        for j in -1..=3i64 {
            let want = if (-1..=3).contains(&(i + j)) {
                e(i + j).scaled(fp(5).reduce(j - i))
            } else {
                FpVector::zero(fp(5), 5)
            };
            assert_eq!(w.lie.bracket(&e(i), &e(j)), want, "[e{i}, e{j}]");
        }
    }
    let targets: Vec<FpVector> = (0..5).map(|i| if i == 1 { e(0) } else { FpVector::zero(fp(5), 5) }).collect();
    assert_eq!(jacobson_build(&w.lie, targets).unwrap(), w.pmap);
    assert_eq!(catalog::jacobson_targets(&w).unwrap(), w.pmap.images().to_vec());
    assert!(matches!(catalog::witt(3), Err(Error::CharacteristicUnsupported { .. })));
}

#[test]
fn sl2_pmap() {
    for p in [2u32, 3, 5, 7] {
        let s = catalog::sl2(p).unwrap();
        let ad = |v: &FpVector| s.lie.ad(v);
        for i in 0..3 {
            let x = s.lie.basis(i);
            assert_eq!(ad(&s.pmap_eval(&x)), ad(&x).pow(p as u64), "p{p} e{i}");
        }
        assert_eq!(s.pmap_eval(&s.lie.basis(1)), s.lie.basis(1));
    }
}

fn all_thetas(p: u32) -> Vec<Theta> {
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn theta_i64(t: Theta) -> [i64; 3] {
    t.map(i64::from)
}

/// `F_p` orbits of linear forms under Lie automorphisms, found by
/// transporting the p-map along every automorphism.
fn fp_orbit_count(p: u32) -> usize {
    let f = fp(p);
    let thetas = all_thetas(p);
    let index = |t: &Theta| thetas.iter().position(|s| s == t).unwrap();
    let mut parent: Vec<usize> = (0..thetas.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let algs: Vec<RestrictedAlgebra> = thetas.iter().map(|t| catalog::heisenberg(p, theta_i64(*t)).unwrap()).collect();
    for a in 0..p {
        for b in 0..p {
            for d in 0..p {
                for e in 0..p {
                    let u = f.sub(f.mul(a, e), f.mul(b, d));
                    if u == 0 {
                        continue;
                    }
                    for c in 0..p {
                        for ff in 0..p {
                            let mut g = FpMatrix::zeros(f, 3, 3);
                            for (i, j, v) in [(0, 0, a), (1, 0, b), (2, 0, c), (0, 1, d), (1, 1, e), (2, 1, ff), (2, 2, u)] {
                                g.set_raw(i, j, v);
                            }
                            let ginv = g.inverse().unwrap();
                            for (k, alg) in algs.iter().enumerate() {
                                let mut t = [0u32; 3];
                                for (i, ti) in t.iter_mut().enumerate() {
                                    let img = g.mul_vec(&alg.pmap_eval(&ginv.column(i)));
                                    assert!(img.raw()[0] == 0 && img.raw()[1] == 0);
                                    *ti = img.raw()[2];
                                }
                                let (r1, r2) = (root(&mut parent, k), root(&mut parent, index(&t)));
                                parent[r1] = r2;
                            }
                        }
                    }
                }
            }
        }
    }
    (0..thetas.len()).filter(|&i| root(&mut parent, i) == i).count()
}

#[test]
fn classification_class_counts() {
    for (p, closure, over_fp) in [(2u32, 2usize, 3usize), (3, 3, 4), (5, 3, 6)] {
        let c = classify_heisenberg_pstructures(p, DEFAULT_MAX_P).unwrap();
        assert_eq!(c.classes.len(), closure, "p{p}");
        assert_eq!(c.fp_class_count, over_fp, "p{p}");
        assert_eq!(fp_orbit_count(p), over_fp, "p{p}");
    }
}

#[test]
fn classification_representatives() {
    let reps = |p| -> BTreeSet<Theta> {
        classify_heisenberg_pstructures(p, DEFAULT_MAX_P)
            .unwrap()
            .classes
            .iter()
            .map(|c| c.representative)
            .collect()
    };
    let odd: BTreeSet<Theta> = [[0, 0, 0], [1, 0, 0], [0, 0, 1]].into();
    assert_eq!(reps(3), odd);
    assert_eq!(reps(5), odd);
    let two: BTreeSet<Theta> = [[0, 0, 0], [0, 0, 1]].into();
    assert_eq!(reps(2), two);
    // x* and 0 share a class at p = 2
    let c = classify_heisenberg_pstructures(2, DEFAULT_MAX_P).unwrap();
    let class_of = |t: Theta| c.classes.iter().position(|k| k.members.contains(&t)).unwrap();
    assert_eq!(class_of([1, 0, 0]), class_of([0, 0, 0]));
    assert_ne!(class_of([0, 0, 1]), class_of([0, 0, 0]));
}

#[test]
fn classification_is_a_partition_with_witnesses() {
    for p in [2u32, 3, 5] {
        let c = classify_heisenberg_pstructures(p, DEFAULT_MAX_P).unwrap();
        let mut seen = BTreeSet::new();
        for class in &c.classes {
            assert!(class.members.contains(&class.representative));
            for m in &class.members {
                assert!(seen.insert(*m), "p{p} {m:?} in two classes");
            }
            let sources: BTreeSet<Theta> = class.witnesses.iter().map(|w| w.source).collect();
            for m in &class.members {
                if *m != class.representative {
                    assert!(sources.contains(m), "p{p} {m:?} has no witness");
                }
            }
            for w in &class.witnesses {
                assert!(w.verify(), "p{p} {:?} -> {:?}", w.source, w.target);
                assert!(class.members.contains(&w.source) && class.members.contains(&w.target));
                if w.field_degree() == 1 {
                    assert!(verify_as_morphism(p, w).unwrap());
                }
            }
        }
        assert_eq!(seen, all_thetas(p).into_iter().collect::<BTreeSet<_>>());
        // no isomorphism between distinct representatives
        for a in &c.classes {
            for b in &c.classes {
                if a.representative != b.representative {
                    assert!(heisenberg_isomorphism(p, a.representative, b.representative).unwrap().is_none());
                }
            }
        }
    }
}

#[test]
fn x_to_y_witness_verifies() {
    for p in [2u32, 3, 5, 7] {
        let w = x_to_y_witness(p).unwrap();
        assert!(w.verify());
        assert!(verify_as_morphism(p, &w).unwrap());
        let m = w.fp_matrix().unwrap();
        let src = catalog::heisenberg(p, THETA_X).unwrap();
        let tgt = catalog::heisenberg(p, THETA_Y).unwrap();
        RestrictedMorphism::new(&src, &tgt, m).unwrap();
        assert!(fp_isomorphism(p, [1, 0, 0], [0, 1, 0]).unwrap().is_some());
    }
}

#[test]
fn z_forms_need_an_extension() {
    // over F_p, θ(z) is an invariant
    for p in [3u32, 5] {
        assert!(fp_isomorphism(p, [0, 0, 1], [0, 0, 2]).unwrap().is_none());
        let w = heisenberg_isomorphism(p, [0, 0, 1], [0, 0, 2]).unwrap().unwrap();
        assert!(w.field_degree() > 1);
        assert!(w.verify());
    }
}

#[test]
fn classification_respects_bound() {
    assert!(classify_heisenberg_pstructures(11, DEFAULT_MAX_P).is_err());
}

#[test]
fn morphism_fixture_data() {
    for p in [5u32, 7] {
        let fx = catalog::morphism_fixture(p).unwrap();
        let v = |a: [i64; 3]| vec_of(p, &a);
        assert_eq!(fx.phi.column(0), v([0, 0, 1]));
        assert_eq!(fx.phi.column(1), v([1, 1, 0]));
        assert_eq!(fx.phi.column(2), v([0, 0, 0]));
        assert_eq!(fx.mu.value(&[0, 2]), v([0, 0, 1]));
        assert_eq!(fx.nu.value(&[0, 1]), v([1, 0, 0]));
        assert_eq!(fx.listed_thetas.len(), 3);
        assert!(matches!(
            RestrictedMorphism::new(&fx.src, &fx.tgt, fx.phi.clone()),
            Err(Error::NotRestrictedMorphism(0))
        ));
    }
}

#[test]
fn char2_example_jet() {
    let d = catalog::char2_example().unwrap();
    assert!(check_deformation(&d).passed());
    assert!(infinitesimal(&d).unwrap().is_cocycle());
    let x = d.base.lie.basis(0);
    let z = d.base.lie.basis(2);
    assert_eq!(d.brackets[0].eval(&[&x, &z]), z);
    assert_eq!(d.pmaps[0][0], x);
}

#[test]
fn obstructed_example_is_an_order_one_deformation() {
    for p in [2u32, 3, 5] {
        let d = catalog::obstructed_example(p).unwrap();
        assert!(check_deformation(&d).passed());
        assert!(extend_order(&d).unwrap().is_none());
    }
}

#[test]
fn algebra_documents_round_trip() {
    for p in [2u32, 3, 5, 7] {
        for (name, alg) in catalog::all_for(p).unwrap() {
            let text = AlgebraDocument::from_algebra(&alg).to_json();
            assert_eq!(load_algebra(&text).unwrap(), alg, "{name} p{p}");
        }
    }
}

#[test]
fn fixture_files_parse() {
    for p in [2u32, 3, 5, 7] {
        let files = catalog::fixture_files(p).unwrap();
        let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
        assert!(names.contains(&"morphism.json"));
        assert_eq!(names.contains(&"char2_jet.json"), p == 2);
        assert_eq!(names.contains(&"witt.json"), p >= 5);
        let h0 = catalog::heisenberg(p, THETA_ZERO).unwrap();
        let a3 = catalog::obstructed_example(p).unwrap().base;
        for (name, text) in &files {
            if name.ends_with("_jet.json") {
                let base = if name.starts_with("char2") { &h0 } else { &a3 };
                let d = JetDocument::parse(text).unwrap().deformation(base, Some(text)).unwrap();
                assert!(check_deformation(&d).passed(), "{name}");
            } else if name.starts_with("morphism_") {
                let doc = JetDocument::parse(text).unwrap();
                assert_eq!(doc.order, 1, "{name}");
            } else {
                let doc = AlgebraDocument::parse(text).unwrap();
                let alg = doc.algebra(Some(text)).unwrap();
                if name == "morphism.json" {
                    let fx = catalog::morphism_fixture(p).unwrap();
                    let (tgt, m) = doc.morphism(&alg, Some(text)).unwrap().unwrap();
                    assert_eq!((alg, tgt, m), (fx.src, fx.tgt, fx.phi));
                } else {
                    let stem = name.trim_end_matches(".json");
                    let want = catalog::all_for(p)
                        .unwrap()
                        .into_iter()
                        .find(|(n, _)| n == stem)
                        .map(|(_, a)| a)
                        .unwrap_or_else(|| a3.clone());
                    assert_eq!(alg, want, "{name}");
                }
            }
        }
    }
}

#[test]
fn p3_has_27_pmaps() {
    let f = fp(3);
    let lie = catalog::heisenberg_lie(f);
    let mut seen = BTreeSet::new();
    for t in all_thetas(3) {
        let targets = t.iter().map(|&c| FpVector::from_raw(f, vec![0, 0, c])).collect();
        let pm = jacobson_build(&lie, targets).unwrap();
        seen.insert(pm.images().iter().map(|v| v.raw().to_vec()).collect::<Vec<_>>());
    }
    assert_eq!(seen.len(), 27);
}
