use karoubi::axioms::Sampling;
use karoubi::karoubi::{KObject, PObj};
use karoubi::recollement::{check_full_recollement, lift_full_recollement, product_recollement, FunctorData, RecollementHalf};

fn s() -> Sampling {
    Sampling::default()
}

fn failing(r: &karoubi::recollement::RecollementReport) -> Vec<String> {
    r.reports.iter().filter(|x| !x.pass).map(|x| x.axiom.clone()).collect()
}

/// `(S1 ⊕ S2, projection onto S1)` in the middle category.
fn proj_s1(h: &RecollementHalf) -> KObject {
    let c = &h.outer.left.tgt;
    let b = c.backend();
    let g = c.realize(&PObj { mults: vec![1, 1] });
    let ds = b.direct_sum(&[b.simple(0), b.simple(1)]);
    assert_eq!(ds.obj, g);
    KObject { base: g, mults: Some(vec![1, 1]), idem: b.compose(&ds.incl[0], &ds.proj[0]) }
}

#[test]
fn functors_and_completion() {
    let (right, _) = product_recollement(3, 2).unwrap();
    let i_up = &right.outer.right;
    assert!(i_up.check(&s()).pass);
    let k = proj_s1(&right);
    let img = i_up.kobject(&k).unwrap();
    assert_eq!(img.mults, Some(vec![1]));
    assert!(img.idem.comps[0].is_identity());
    // j^+ kills the S1 part
    let img = right.inner.left.kobject(&k).unwrap();
    assert!(img.idem.is_zero());

    let c = &right.outer.left.tgt;
    let id = FunctorData::identity(c).unwrap();
    assert_eq!(id.kobject(&k).unwrap(), k);
    let z = FunctorData::zero(c, c).unwrap();
    assert!(z.kobject(&k).unwrap().base.is_zero());
    // commutes with iota on the nose
    for a in c.pobjs() {
        let ia = c.iota_embed(&a);
        let fa = i_up.kobject(&ia).unwrap();
        assert_eq!(fa, i_up.tgt.iota_embed(&i_up.obj(&a)));
    }
}

#[test]
fn exactness() {
    let (right, _) = product_recollement(2, 2).unwrap();
    let env = right.envelope_objects(1000).unwrap();
    for f in [&right.outer.left, &right.outer.right, &right.inner.left, &right.inner.right] {
        assert!(f.check_exact(&s()).pass, "{}", f.name);
    }
    assert!(right.outer.right.check_exact_completed(&env.mid, &s()).pass);
    assert!(right.outer.left.check_exact_completed(&env.prime, &s()).pass);
}

#[test]
fn units_are_natural() {
    let (right, _) = product_recollement(3, 2).unwrap();
    let env = right.envelope_objects(1000).unwrap();
    for adj in [&right.outer, &right.inner] {
        let u = adj.unit_trans().unwrap();
        assert!(u.check(&s()).pass);
        assert!(u.check_completed(&adj.left.src.enumerate_kobjects(1000).unwrap(), &s()).pass);
    }
    // on identity idempotents the completed component is the base one
    let u = right.outer.unit_trans().unwrap();
    for a in env.prime.iter().filter(|k| k.idem.comps.iter().all(|m| m.is_identity())) {
        let a0 = PObj { mults: a.mults.clone().unwrap() };
        assert_eq!(u.complete(a).unwrap().map, u.component(&a0).unwrap());
    }
}

#[test]
fn adjunctions_lift() {
    let (right, _) = product_recollement(2, 2).unwrap();
    let env = right.envelope_objects(1000).unwrap();
    assert!(right.outer.check(&s()).pass);
    assert!(right.outer.lift(&env.prime, &env.mid, &s()).is_ok());
    assert!(right.inner.lift(&env.mid, &env.second, &s()).is_ok());

    let mut bad = right.outer.clone();
    let m = &mut bad.maps[0][0];
    m.set(0, 0, 0);
    assert!(!bad.check(&s()).pass);
    assert!(bad.lift(&env.prime, &env.mid, &s()).is_err());
}

#[test]
fn right_recollement() {
    let (right, _) = product_recollement(2, 2).unwrap();
    let base = right.check(&right.base_objects(), "base", &s());
    assert!(base.pass(), "{:?}", failing(&base));
    let env = right.envelope_objects(1000).unwrap();
    let lifted = right.lift(&env, &s()).unwrap();
    assert!(lifted.pass(), "{:?}", failing(&lifted));

    // at (G, proj-S1) the last term j_+ j^+ K vanishes
    let k = proj_s1(&right);
    let t = right.split_instance(&k).unwrap();
    let ev = right.outer.left.tgt.backend().evaluate(t.c());
    assert!(ev.obj.is_zero());

    let mut zeroed = right.clone();
    zeroed.inner.right = FunctorData::zero(&right.inner.right.src, &right.inner.right.tgt).unwrap();
    let r = zeroed.check(&zeroed.base_objects(), "base", &s());
    assert!(failing(&r).iter().any(|a| a.starts_with("R3")), "{:?}", failing(&r));
    let w = r.reports.iter().find(|x| x.axiom.starts_with("R3") && !x.pass).unwrap();
    assert!(!w.failures.is_empty());
}

#[test]
fn full_recollement() {
    let (right, left) = product_recollement(2, 2).unwrap();
    let objs = right.base_objects();
    let reps = check_full_recollement(&right, &left, &objs, "base", &s()).unwrap();
    assert!(reps.iter().all(|r| r.pass()));
    assert!(check_full_recollement(&right, &right, &objs, "base", &s()).is_err());
    let env = right.envelope_objects(1000).unwrap();
    let lifted = lift_full_recollement(&right, &left, &env, &s()).unwrap();
    for r in &lifted {
        assert!(r.pass(), "{:?}", failing(r));
    }
}
