use karoubi::backend::{Backend, Quiver};
use karoubi::fext::{FVariant, Given, Side};
use karoubi::karoubi::{KObject, Presentation};

fn a2(p: u32) -> Backend {
    Backend::quiver(p, Quiver::a2()).unwrap()
}

/// `(G, projection onto S_{i+1})` for `G = S1 ⊕ S2`.
fn proj(b: &Backend, i: usize) -> KObject {
    let ds = b.direct_sum(&[b.simple(0), b.simple(1)]);
    b.kobject(ds.obj, b.compose(&ds.incl[i], &ds.proj[i])).unwrap()
}

#[test]
fn f_group_examples() {
    let b = a2(2);
    let g = b.direct_sum(&[b.simple(0), b.simple(1)]).obj;
    let (e1, e2) = (proj(&b, 0), proj(&b, 1));
    assert_eq!(b.f_group(&e1, &e2).unwrap().dim(), 1);
    assert_eq!(b.f_group(&e2, &e1).unwrap().dim(), 0);
    let ig = b.iota(&g);
    assert_eq!(b.f_group(&ig, &ig).unwrap().dim(), b.ext_dim(&g, &g).unwrap());
    let zero = b.kobject(g.clone(), b.zero_mor(&g, &g)).unwrap();
    assert_eq!(b.f_group(&ig, &zero).unwrap().dim(), 0);
    // dropping e_c^* lets E(G, S2) through on the source (G, e2)
    assert_eq!(b.f_group(&e2, &e2).unwrap().dim(), 0);
    assert_eq!(b.f_group_variant(&e2, &e2, FVariant::DropProjector).unwrap().dim(), 1);
}

#[test]
fn action_examples() {
    let b = a2(2);
    let (e1, e2) = (proj(&b, 0), proj(&b, 1));
    let w = b.f_group(&e1, &e2).unwrap().basis.remove(0);
    assert_eq!(b.f_act(&b.k_identity(&e2), &w, Side::Left).unwrap(), w);
    assert_eq!(b.f_act(&b.k_identity(&e1), &w, Side::Right).unwrap(), w);
    assert!(b.f_act(&b.k_zero(&e2, &e2), &w, Side::Left).unwrap().is_split());
    // inclusion into the whole of G keeps the ambient coordinates
    let ig = b.iota(&e2.base);
    let inc = b.kmor(&e2, &ig, e2.idem.clone()).unwrap();
    let pushed = b.f_act(&inc, &w, Side::Left).unwrap();
    assert_eq!(pushed.omega.coords, w.omega.coords);
    let sp = b.f_group(&e1, &ig).unwrap();
    assert!(b.f_coords(&sp, &pushed).unwrap().is_some());
}

#[test]
fn realize_in_the_completion() {
    let b = a2(2);
    let (e1, e2) = (proj(&b, 0), proj(&b, 1));
    let w = b.f_group(&e1, &e2).unwrap().basis.remove(0);
    let t = b.f_realize(&w).unwrap();
    let ev = b.evaluate_ftriangle(&t).unwrap();
    assert!(b.is_etriangle(&ev.tri));
    assert!(b.is_isomorphic(ev.tri.b(), &b.projective(0)).unwrap());
    // against the ambient S2 -> P1 -> S1 moved onto the evaluations
    let amb = b.realize(&b.ext_basis(&b.simple(0), &b.simple(1)).unwrap()[0]).unwrap();
    let (ia, ic) = (b.find_iso(ev.tri.a(), amb.a()).unwrap().unwrap(), b.find_iso(ev.tri.c(), amb.c()).unwrap().unwrap());
    let moved = b.transport_iso(&ev.tri, &ia, &b.identity(ev.tri.b()), &ic).unwrap();
    assert_eq!(moved.cls.is_split(), amb.cls.is_split());
    let z = b.f_zero(&e1, &e2).unwrap();
    let split = b.f_realize(&z).unwrap();
    let (expected, _) = b.f_split(&e1, &e2).unwrap();
    assert!(b.f_conflation_equiv(&split, &expected).unwrap().is_some());
}

#[test]
fn identity_idempotents_agree_with_ambient() {
    let b = a2(3);
    let (s1, s2) = (b.simple(0), b.simple(1));
    let (i1, i2) = (b.iota(&s1), b.iota(&s2));
    assert_eq!(b.f_group(&i1, &i2).unwrap().dim(), 1);
    for w in b.f_group(&i1, &i2).unwrap().basis {
        let t = b.f_realize(&w).unwrap();
        let amb = b.realize(&w.omega).unwrap();
        let ev = b.evaluate_ftriangle(&t).unwrap();
        assert_eq!(ev.tri.cls, amb.cls);
        assert!(b.conflation_equiv(&ev.tri, &amb).unwrap().is_some());
    }
}

#[test]
fn complete_morphisms() {
    let b = a2(3);
    let (s1, s2) = (b.simple(0), b.simple(1));
    let (i1, i2) = (b.iota(&s1), b.iota(&s2));
    let w = b.f_group(&i1, &i2).unwrap().basis.remove(0);
    let w2 = b.f_scale(&w, 2).unwrap();
    let (t, t2) = (b.f_realize(&w).unwrap(), b.f_realize(&w2).unwrap());
    // (2, ?, 1): 2_* ω = ω2 = 1^* ω2
    let a = b.k_scale(&b.k_identity(&i2), 2);
    let c = b.k_identity(&i1);
    let m = b.f_complete_morphism(&t, &t2, &Given::AC(a.clone(), c.clone())).unwrap();
    let m2 = b.f_complete_morphism(&t, &t2, &Given::AB(a, m.b.clone())).unwrap();
    assert_eq!(m2.c, c);
    let m3 = b.f_complete_morphism(&t, &t2, &Given::BC(m.b.clone(), c)).unwrap();
    assert_eq!(m3.a, m.a);
    let id = b.f_complete_morphism(&t, &t, &Given::AB(b.k_identity(t.a()), b.k_identity(t.b()))).unwrap();
    assert_eq!(id.c, b.k_identity(t.c()));
    let zero = b.f_complete_morphism(&t, &t2, &Given::AB(b.k_zero(t.a(), t2.a()), b.k_zero(t.b(), t2.b()))).unwrap();
    assert!(zero.c.map.is_zero());
}

#[test]
fn octahedra_in_the_completion() {
    let b = a2(2);
    let (e1, e2) = (proj(&b, 0), proj(&b, 1));
    let w = b.f_group(&e1, &e2).unwrap().basis.remove(0);
    let t1 = b.f_realize(&w).unwrap();
    let zero = b.f_zero(&e1, t1.b()).unwrap();
    let t2 = b.f_realize(&zero).unwrap();
    let out = b.f_et4_compose(&t1, &t2).unwrap();
    assert!(b.is_ftriangle(&out.t3));
    assert!(b.is_ftriangle(&out.t4));
    let k = b.evaluate(out.t4.b());
    // K~ ≅ D~ ⊕ F~ = S1 ⊕ S1
    assert_eq!(k.obj.dims, vec![2, 0]);
    assert!(b.f_et4_compose(&t2, &t1).is_err());

    let pres = Presentation::new(b.clone(), vec![b.direct_sum(&[b.simple(0), b.simple(1)]).obj], 1).unwrap();
    let ks = pres.enumerate_kobjects(100).unwrap();
    let mut ran = 0;
    for ka in &ks {
        for kd in &ks {
            for w in b.f_group(kd, ka).unwrap().basis.iter().chain([&b.f_zero(kd, ka).unwrap()]) {
                let t1 = b.f_realize(w).unwrap();
                for kf in &ks {
                    for w2 in b.f_group(kf, t1.b()).unwrap().basis.iter().take(1) {
                        let t2 = b.f_realize(w2).unwrap();
                        b.f_et4_compose(&t1, &t2).unwrap();
                        ran += 1;
                    }
                }
            }
        }
    }
    assert!(ran > 0);
}

#[test]
fn dual_octahedra() {
    let b = a2(2);
    let (e1, e2) = (proj(&b, 0), proj(&b, 1));
    let w = b.f_group(&e1, &e2).unwrap().basis.remove(0);
    // t1: S2 -> P1 -> S1, and t2 ending in the middle term of t1
    let t1 = b.f_realize(&w).unwrap();
    let db = b.dual_backend();
    let mut ran = 0;
    for ka in [&e1, &e2] {
        let sp = b.f_group(t1.b(), ka).unwrap();
        for w2 in sp.basis.iter().chain([&b.f_zero(t1.b(), ka).unwrap()]) {
            let t2 = b.f_realize(w2).unwrap();
            assert_eq!(db.dual_ftriangle(&b.dual_ftriangle(&t2).unwrap()).unwrap().cls, t2.cls);
            b.f_et4op_compose(&t1, &t2).unwrap();
            ran += 1;
        }
    }
    assert!(ran >= 2);
}

#[test]
fn graded_completion() {
    let b = Backend::graded(3, 3).unwrap();
    let (k0, k1) = (b.k_deg(0).unwrap(), b.k_deg(1).unwrap());
    let ds = b.direct_sum(&[k0.clone(), k1.clone()]);
    let e = |i: usize| b.kobject(ds.obj.clone(), b.compose(&ds.incl[i], &ds.proj[i])).unwrap();
    let sp = b.f_group(&e(1), &e(0)).unwrap();
    assert_eq!(sp.dim(), 1);
    let t = b.f_realize(&sp.basis[0]).unwrap();
    assert!(b.evaluate(t.b()).obj.is_zero());
    let t2 = b.f_realize(&b.f_zero(&e(1), t.b()).unwrap()).unwrap();
    b.f_et4_compose(&t, &t2).unwrap();
}
