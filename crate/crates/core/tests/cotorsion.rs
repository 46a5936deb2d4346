use karoubi::axioms::Sampling;
use karoubi::backend::{Backend, Quiver};
use karoubi::cotorsion::{CotorsionPair, SubcatSpec};
use karoubi::karoubi::Presentation;

fn graded() -> Backend {
    Backend::graded(3, 4).unwrap()
}

fn shifts(b: &Backend, name: &str, ns: impl Iterator<Item = i64>) -> SubcatSpec {
    SubcatSpec::new(name, ns.map(|n| (format!("k[{n}]"), b.k_deg(n).unwrap())).collect())
}

/// T = add{k[n] : n >= 2}, F = add{k[n] : n <= 0}.
fn shift_pair(b: &Backend) -> CotorsionPair {
    CotorsionPair { t_cat: shifts(b, "T", 2..=4), f_cat: shifts(b, "F", -4..=0) }
}

#[test]
fn orthogonality() {
    let b = graded();
    let o = b.check_orthogonality(&shift_pair(&b), &Sampling::default()).unwrap();
    assert!(o.ext.pass && o.hom.pass);
    assert_eq!(o.ext.universe, 15);

    let q = Backend::quiver(2, Quiver::discrete(2)).unwrap();
    let all = SubcatSpec::new("C", vec![("S1".into(), q.simple(0)), ("S2".into(), q.simple(1))]);
    let o = q.check_orthogonality(&CotorsionPair { t_cat: all.clone(), f_cat: all }, &Sampling::default()).unwrap();
    assert!(o.ext.pass);
    assert!(!o.hom.pass);
    assert_eq!(o.hom.failure_count, 2);

    let empty = SubcatSpec::new("0", vec![]);
    let o = b.check_orthogonality(&CotorsionPair { t_cat: empty.clone(), f_cat: shifts(&b, "F", 0..=0) }, &Sampling::default()).unwrap();
    assert!(o.pass() && o.ext.universe == 0);
}

#[test]
fn ambient_approximations() {
    let b = graded();
    let pair = shift_pair(&b);
    // k[1]: k[0] -> 0 -> k[1]
    let a = b.find_approximations(&pair, &b.k_deg(1).unwrap(), 2).unwrap();
    let l = a.left.unwrap();
    assert!(b.is_etriangle(&l));
    assert!(l.b().is_zero());
    assert!(b.is_isomorphic(l.a(), &b.k_deg(0).unwrap()).unwrap());
    let r = a.right.unwrap();
    assert!(pair.f_cat.contains(&b, r.b()).unwrap() && pair.t_cat.contains(&b, r.c()).unwrap());

    // members approximate themselves trivially
    let k3 = b.k_deg(3).unwrap();
    let l = b.find_approximations(&pair, &k3, 2).unwrap().left.unwrap();
    assert!(l.a().is_zero() && b.is_isomorphic(l.b(), &k3).unwrap());
    let k0 = b.k_deg(0).unwrap();
    let r = b.find_approximations(&pair, &k0, 2).unwrap().right.unwrap();
    assert!(r.c().is_zero() && b.is_isomorphic(r.b(), &k0).unwrap());

    // a decomposable object is handled summand by summand
    let g = b.graded_obj(&[(-1, 1), (1, 2), (3, 1)]).unwrap();
    let a = b.find_approximations(&pair, &g, 2).unwrap();
    for t in [a.left.unwrap(), a.right.unwrap()] {
        b.check_etriangle(&t).unwrap();
    }
}

#[test]
fn not_found_at_bound() {
    let b = graded();
    // with F empty nothing outside T has a left approximation
    let pair = CotorsionPair { t_cat: shifts(&b, "T", 2..=4), f_cat: SubcatSpec::new("0", vec![]) };
    let a = b.find_approximations(&pair, &b.k_deg(1).unwrap(), 3).unwrap();
    assert!(a.left.is_none());
}

#[test]
fn membership_in_the_completion() {
    let b = graded();
    let pair = shift_pair(&b);
    let ds = b.direct_sum(&[b.k_deg(0).unwrap(), b.k_deg(2).unwrap()]);
    let e = |i: usize| b.kobject(ds.obj.clone(), b.compose(&ds.incl[i], &ds.proj[i])).unwrap();
    assert!(pair.t_cat.contains_k(&b, &e(1)).unwrap());
    assert!(!pair.t_cat.contains_k(&b, &e(0)).unwrap());
    assert!(pair.f_cat.contains_k(&b, &e(0)).unwrap());
    assert_eq!(b.f_group(&e(1), &e(0)).unwrap().dim(), 0);
    assert_eq!(b.karoubi_hom_dim(&e(1), &e(0)), 0);
    let i2 = b.iota(&b.k_deg(2).unwrap());
    assert!(pair.t_cat.contains_k(&b, &i2).unwrap());
}

#[test]
fn lifted_approximations() {
    let b = graded();
    let pair = shift_pair(&b);
    let ds = b.direct_sum(&[b.k_deg(0).unwrap(), b.k_deg(1).unwrap(), b.k_deg(2).unwrap()]);
    let k = b.kobject(ds.obj.clone(), b.compose(&ds.incl[1], &ds.proj[1])).unwrap();
    let out = b.approx_in_completion(&pair, &k, 2).unwrap();
    let ev = b.evaluate_ftriangle(&out.tri).unwrap();
    assert!(b.is_isomorphic(ev.tri.a(), &b.k_deg(0).unwrap()).unwrap());
    assert!(ev.tri.b().is_zero());
    assert!(b.is_isomorphic(ev.tri.c(), &b.k_deg(1).unwrap()).unwrap());
    // the class is the nonzero one of E(k[1], k[0]), as for the ambient approximation
    assert!(!ev.tri.cls.is_split());

    let right = b.approx_in_completion_right(&pair, &k, 2).unwrap();
    assert!(b.is_ftriangle(&right.tri));

    let zero = b.kobject(ds.obj.clone(), b.zero_mor(&ds.obj, &ds.obj)).unwrap();
    let z = b.approx_in_completion(&pair, &zero, 2).unwrap();
    assert!(b.evaluate_ftriangle(&z.tri).unwrap().tri.b().is_zero());
}

#[test]
fn lift_on_an_enumerated_envelope() {
    let b = graded();
    let pair = shift_pair(&b);
    let g = b.graded_obj(&[(-2, 1), (-1, 1), (0, 1), (1, 1), (2, 1)]).unwrap();
    let ks = Presentation::new(b.clone(), vec![g], 1).unwrap().enumerate_kobjects(1000).unwrap();
    let rep = b.lift_pair(&pair, &ks, &Sampling::default(), 2).unwrap();
    assert!(rep.pass(), "{:?}", rep.reports);

    let q = Backend::quiver(2, Quiver::discrete(2)).unwrap();
    let all = SubcatSpec::new("C", vec![("S1".into(), q.simple(0)), ("S2".into(), q.simple(1))]);
    assert!(q.lift_pair(&CotorsionPair { t_cat: all.clone(), f_cat: all }, &[], &Sampling::default(), 1).is_err());
}
