use super::*;
use crate::backend::Quiver;

fn a2() -> Backend {
    Backend::quiver(2, Quiver::a2()).unwrap()
}

fn g12(b: &Backend, bound: usize) -> Presentation {
    let g = b.direct_sum(&[b.simple(0), b.simple(1)]).obj;
    Presentation::new(b.clone(), vec![g], bound).unwrap()
}

/// `(G, projection onto the i-th summand)` for `G = S1 ⊕ S2`.
fn proj_obj(b: &Backend, i: usize) -> KObject {
    let ds = b.direct_sum(&[b.simple(0), b.simple(1)]);
    let e = b.compose(&ds.incl[i], &ds.proj[i]);
    b.kobject(ds.obj, e).unwrap()
}

#[test]
fn hom_of_projections() {
    let b = a2();
    let k1 = proj_obj(&b, 0);
    assert_eq!(b.karoubi_hom(&k1, &k1).len(), 1);
    let k2 = proj_obj(&b, 1);
    assert_eq!(b.karoubi_hom_dim(&k1, &k2), 0);
    let whole = b.iota(&k1.base);
    assert_eq!(b.karoubi_hom_dim(&whole, &whole), b.hom_dim(&whole.base, &whole.base));
    let zero = b.kobject(k1.base.clone(), b.zero_mor(&k1.base, &k1.base)).unwrap();
    assert_eq!(b.karoubi_hom_dim(&zero, &whole), 0);
}

#[test]
fn complement_and_evaluate() {
    let b = a2();
    let k1 = proj_obj(&b, 0);
    let c = b.complement(&k1);
    assert_eq!(c.idem, proj_obj(&b, 1).idem);
    b.complement_witness(&k1).unwrap();
    let ev = b.evaluate(&k1);
    assert!(b.is_isomorphic(&ev.obj, &b.simple(0)).unwrap());
    assert_eq!(b.compose(&ev.p, &ev.q), b.identity(&ev.obj));
    assert_eq!(b.compose(&ev.q, &ev.p), k1.idem);
    let z = b.complement(&b.iota(&k1.base));
    assert!(b.evaluate(&z).obj.is_zero());
}

#[test]
fn enumeration_counts() {
    let b = a2();
    let pres = g12(&b, 1);
    let ks = pres.enumerate_kobjects(100).unwrap();
    assert_eq!(ks.len(), 4);
    let s1 = Presentation::new(b.clone(), vec![b.simple(0)], 3).unwrap();
    let (classes, census) = s1.idempotent_classes(&s1.pobj(vec![3]).unwrap()).unwrap();
    assert_eq!(classes.len(), 4);
    // idempotents of M_3(GF(2)): sum over ranks of the number of
    // projections, 1 + 7*4 + 7*4 + 1 = 1 + 28 + 28 + 1
    assert_eq!(census.enumerated, Some(58));
}

#[test]
fn raw_presentation_is_not_idempotent_complete() {
    let b = a2();
    let fails = g12(&b, 2).check_idempotent_complete().unwrap();
    assert!(!fails.is_empty());
    let indec = Presentation::new(b.clone(), vec![b.simple(0), b.simple(1), b.projective(0)], 2).unwrap();
    assert!(indec.check_idempotent_complete().unwrap().is_empty());
    let pres = g12(&b, 2);
    let ks = pres.enumerate_kobjects(100).unwrap();
    assert!(pres.check_envelope_idempotent_complete(&ks).unwrap().is_empty());
}

#[test]
fn iota_fully_faithful_and_evaluate_functorial() {
    let b = a2();
    let pres = Presentation::new(b.clone(), vec![b.simple(0), b.simple(1), b.projective(0)], 1).unwrap();
    let ks = pres.enumerate_kobjects(100).unwrap();
    for a in pres.pobjs() {
        for c in pres.pobjs() {
            let (ia, ic) = (pres.iota_embed(&a), pres.iota_embed(&c));
            assert_eq!(b.karoubi_hom_dim(&ia, &ic), b.hom_dim(&ia.base, &ic.base));
        }
    }
    for k1 in &ks {
        for k2 in &ks {
            for k3 in &ks {
                let (e1, e2, e3) = (b.evaluate(k1), b.evaluate(k2), b.evaluate(k3));
                for f in b.karoubi_hom(k1, k2) {
                    for g in b.karoubi_hom(k2, k3) {
                        let gf = b.k_compose(&g, &f);
                        let lhs = b.evaluate_mor(&gf, &e1, &e3);
                        let rhs = b.compose(&b.evaluate_mor(&g, &e2, &e3), &b.evaluate_mor(&f, &e1, &e2));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn rank_classes_for_a_simple() {
    let b = a2();
    let pres = Presentation::new(b.clone(), vec![b.simple(0)], 3).unwrap();
    let ks = pres.enumerate_kobjects(100).unwrap();
    // (0,0) plus ranks 1..n on S1^n for n = 1, 2, 3
    assert_eq!(ks.len(), 1 + 1 + 2 + 3);
}
