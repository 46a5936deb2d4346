use proptest::prelude::*;

use super::*;

fn a2(p: u32) -> Backend {
    Backend::quiver(p, Quiver::a2()).unwrap()
}

/// Counts commuting families by brute force over all matrix entries.
fn brute_hom_count(b: &Backend, x: &Obj, y: &Obj) -> u64 {
    let n = b.hom_vars(x, y);
    let mut count = 0;
    decompose::for_each_vector(b.p(), n, |v| {
        if b.check_mor(&b.vec_to_mor(x, y, v)).is_ok() {
            count += 1;
        }
        false
    });
    count
}

fn euler_form(q: &Quiver, x: &Obj, y: &Obj) -> i64 {
    let diag: i64 = x.dims.iter().zip(&y.dims).map(|(a, b)| (a * b) as i64).sum();
    let arr: i64 = q.arrows().iter().map(|&(s, t)| (x.dims[s] * y.dims[t]) as i64).sum();
    diag - arr
}

#[test]
fn hom_on_a2() {
    let b = a2(2);
    let (s1, s2) = (b.simple(0), b.simple(1));
    assert_eq!(b.hom_dim(&s1, &s1), 1);
    assert_eq!(b.hom_dim(&s2, &s1), 0);
    assert_eq!(brute_hom_count(&b, &s2, &s1), 1);
    let p1 = b.projective(0);
    assert_eq!(p1.dims, vec![1, 1]);
    assert_eq!(b.hom_dim(&s2, &p1), 1);
    assert_eq!(b.hom_dim(&p1, &s1), 1);
    assert_eq!(b.hom_dim(&s1, &p1), 0);
}

#[test]
fn ext_on_a2() {
    let b = a2(2);
    let (s1, s2) = (b.simple(0), b.simple(1));
    assert_eq!(b.ext_dim(&s1, &s2).unwrap(), 1);
    assert_eq!(b.ext_dim(&s2, &s1).unwrap(), 0);
    let p1 = b.projective(0);
    assert_eq!(b.ext_dim(&s1, &p1).unwrap(), 0);
}

#[test]
fn realize_generator_gives_projective() {
    let b = a2(2);
    let (s1, s2) = (b.simple(0), b.simple(1));
    let gen = b.ext_basis(&s1, &s2).unwrap().remove(0);
    let t = b.realize(&gen).unwrap();
    assert!(b.is_etriangle(&t));
    assert!(b.is_isomorphic(t.b(), &b.projective(0)).unwrap());
    assert_eq!(b.class_of(&t.x, &t.y).unwrap(), gen);
}

#[test]
fn split_realization() {
    let b = a2(3);
    let (s1, s2) = (b.simple(0), b.simple(1));
    let z = b.zero_class(&s1, &s2).unwrap();
    let t = b.realize(&z).unwrap();
    assert_eq!(*t.b(), b.direct_sum(&[s2, s1]).obj);
    assert!(b.is_etriangle(&t));
}

#[test]
fn push_along_socle_splits() {
    let b = a2(2);
    let (s1, s2, p1) = (b.simple(0), b.simple(1), b.projective(0));
    let gen = b.ext_basis(&s1, &s2).unwrap().remove(0);
    let inc = b.hom_basis(&s2, &p1)[0].clone();
    assert!(b.act_left(&inc, &gen).unwrap().is_split());
    assert_eq!(b.act_left(&b.identity(&s2), &gen).unwrap(), gen);
    assert!(b.act_left(&b.zero_mor(&s2, &s2), &gen).unwrap().is_split());
}

#[test]
fn graded_examples() {
    let b = Backend::graded(2, 6).unwrap();
    let (k0, k1) = (b.k_deg(0).unwrap(), b.k_deg(1).unwrap());
    assert_eq!(b.hom_dim(&k0, &k1), 0);
    assert_eq!(b.ext_dim(&k1, &k0).unwrap(), 1);
    assert_eq!(b.ext_dim(&k0, &k1).unwrap(), 0);
    let gen = b.ext_basis(&k1, &k0).unwrap().remove(0);
    let t = b.realize(&gen).unwrap();
    assert!(t.b().is_zero());
    assert!(b.is_etriangle(&t));
    assert_eq!(b.shift(&k0, 1).unwrap(), k1);
    let top = b.k_deg(6).unwrap();
    assert!(matches!(b.ext_dim(&k0, &top), Err(Error::WindowOverflow { window: 6 })));
    assert!(matches!(b.shift(&top, 1), Err(Error::WindowOverflow { .. })));
}

#[test]
fn decompose_examples() {
    let b = a2(2);
    let (s1, p1) = (b.simple(0), b.projective(0));
    assert_eq!(b.decompose_indec(&p1).summands.len(), 1);
    let two = b.direct_sum(&[s1.clone(), s1.clone()]).obj;
    let d = b.decompose_indec(&two);
    assert_eq!(d.summands.len(), 2);
    assert!(d.summands.iter().all(|s| s.obj == s1));
    let g = b.direct_sum(&[s1, b.simple(1), p1]).obj;
    let d = b.decompose_indec(&g);
    assert_eq!(d.summands.len(), 3);
    let mut sum = b.zero_mor(&g, &g);
    for s in &d.summands {
        assert_eq!(b.compose(&s.proj, &s.incl), b.identity(&s.obj));
        sum = b.add(&sum, &b.compose(&s.incl, &s.proj));
    }
    assert_eq!(sum, b.identity(&g));
}

#[test]
fn et4_on_a2() {
    let b = a2(2);
    let (s1, s2, p1) = (b.simple(0), b.simple(1), b.projective(0));
    let gen = b.ext_basis(&s1, &s2).unwrap().remove(0);
    let t1 = b.realize(&gen).unwrap();
    let t2 = b.realize(&b.zero_class(&s1, t1.b()).unwrap()).unwrap();
    assert!(b.is_isomorphic(t2.b(), &b.direct_sum(&[p1, s1]).obj).unwrap());
    let w = b.et4(&t1, &t2).unwrap();
    b.verify_et4(&t1, &t2, &w).unwrap();
}

#[test]
fn et4_graded() {
    let b = Backend::graded(3, 3).unwrap();
    let k0 = b.k_deg(0).unwrap();
    let k1 = b.k_deg(1).unwrap();
    let a = b.direct_sum(&[k0.clone(), k0.clone()]).obj;
    let c = b.direct_sum(&[k1.clone(), k1.clone()]).obj;
    let d = b.ext_lin_comb(&c, &a, &[1, 0, 0, 1], &b.ext_basis(&c, &a).unwrap()).unwrap();
    let t1 = b.realize(&d).unwrap();
    let t2 = b.realize(&b.zero_class(&k1, t1.b()).unwrap()).unwrap();
    let w = b.et4(&t1, &t2).unwrap();
    b.verify_et4(&t1, &t2, &w).unwrap();
}

#[test]
fn duals_round_trip() {
    let b = a2(2);
    let (s1, s2) = (b.simple(0), b.simple(1));
    let gen = b.ext_basis(&s1, &s2).unwrap().remove(0);
    let t = b.realize(&gen).unwrap();
    let dt = b.dual_triangle(&t).unwrap();
    let db = b.dual_backend();
    assert!(db.is_etriangle(&dt));
    assert!(!dt.cls.is_split());
    let g = Backend::graded(2, 3).unwrap();
    let gen = g.ext_basis(&g.k_deg(1).unwrap(), &g.k_deg(0).unwrap()).unwrap().remove(0);
    let t = g.realize(&gen).unwrap();
    assert!(g.dual_backend().is_etriangle(&g.dual_triangle(&t).unwrap()));
}

#[test]
fn et4op_on_a2_and_graded() {
    let b = a2(2);
    let (s1, s2) = (b.simple(0), b.simple(1));
    let gen = b.ext_basis(&s1, &s2).unwrap().remove(0);
    let t1 = b.realize(&gen).unwrap();
    let t2 = b.realize(&b.zero_class(t1.b(), &s2).unwrap()).unwrap();
    b.et4op(&t1, &t2).unwrap();
    let g = Backend::graded(3, 3).unwrap();
    let (k0, k1) = (g.k_deg(0).unwrap(), g.k_deg(1).unwrap());
    let t1 = g.realize(&g.ext_basis(&k1, &k0).unwrap().remove(0)).unwrap();
    let t2 = g.realize(&g.zero_class(t1.b(), &k0).unwrap()).unwrap();
    g.et4op(&t1, &t2).unwrap();
}

fn small_rep(p: u32, q: Quiver) -> impl Strategy<Value = (Backend, Obj)> {
    let n = q.vertices();
    proptest::collection::vec(0usize..3, n).prop_flat_map(move |dims| {
        let b = Backend::quiver(p, q.clone()).unwrap();
        let sizes: Vec<usize> = q.arrows().iter().map(|&(s, t)| dims[s] * dims[t]).collect();
        let total: usize = sizes.iter().sum();
        let q = q.clone();
        proptest::collection::vec(0..p, total).prop_map(move |entries| {
            let mut off = 0;
            let arrows = q
                .arrows()
                .iter()
                .map(|&(s, t)| {
                    let m = Mat::from_vec(p, dims[t], dims[s], entries[off..off + dims[s] * dims[t]].to_vec());
                    off += dims[s] * dims[t];
                    m
                })
                .collect();
            (b.clone(), Obj::new(dims.clone(), arrows))
        })
    })
}

fn a3_pair() -> impl Strategy<Value = (Backend, Obj, Obj)> {
    let q = Quiver::new(3, vec![(0, 1), (2, 1)]).unwrap();
    (small_rep(2, q.clone()), small_rep(2, q)).prop_map(|((b, x), (_, y))| (b, x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_form_matches((b, x, y) in a3_pair()) {
        let q = b.quiver_ref().unwrap().clone();
        let chi = b.hom_dim(&x, &y) as i64 - b.ext_dim(&x, &y).unwrap() as i64;
        prop_assert_eq!(chi, euler_form(&q, &x, &y));
    }

    #[test]
    fn hom_matches_brute_force((b, x, y) in a3_pair()) {
        prop_assume!(b.hom_vars(&x, &y) <= 12);
        prop_assert_eq!(2u64.pow(b.hom_dim(&x, &y) as u32), brute_hom_count(&b, &x, &y));
    }

    #[test]
    fn realize_round_trip((b, x, y) in a3_pair(), seed in any::<u64>()) {
        let basis = b.ext_basis(&x, &y).unwrap();
        let coeffs: Vec<u32> = (0..basis.len()).map(|i| ((seed >> i) & 1) as u32).collect();
        let d = b.ext_lin_comb(&x, &y, &coeffs, &basis).unwrap();
        let t = b.realize(&d).unwrap();
        prop_assert!(b.is_etriangle(&t));
        prop_assert_eq!(b.class_of(&t.x, &t.y).unwrap(), d);
    }

    #[test]
    fn actions_commute((b, x, y) in a3_pair(), i in 0usize..8, j in 0usize..8) {
        let basis = b.ext_basis(&x, &y).unwrap();
        prop_assume!(!basis.is_empty());
        let d = &basis[i % basis.len()];
        let ea = b.hom_basis(&y, &y);
        let ec = b.hom_basis(&x, &x);
        let a = &ea[i % ea.len()];
        let c = &ec[j % ec.len()];
        let l = b.act_right(c, &b.act_left(a, d).unwrap()).unwrap();
        let r = b.act_left(a, &b.act_right(c, d).unwrap()).unwrap();
        prop_assert_eq!(&l, &r);
        let m = b.ext_action(c, a).unwrap();
        prop_assert_eq!(m.mul(&Mat::column(b.p(), &d.coords)).col(0), l.coords);
    }

    #[test]
    fn biadditive((b, x, y) in a3_pair(), (_, z) in small_rep(2, Quiver::new(3, vec![(0, 1), (2, 1)]).unwrap())) {
        let xz = b.direct_sum(&[x.clone(), z.clone()]).obj;
        prop_assert_eq!(b.ext_dim(&xz, &y).unwrap(), b.ext_dim(&x, &y).unwrap() + b.ext_dim(&z, &y).unwrap());
        prop_assert_eq!(b.hom_dim(&y, &xz), b.hom_dim(&y, &x) + b.hom_dim(&y, &z));
    }

    #[test]
    fn decomposition_sums_to_identity((b, x, _y) in a3_pair()) {
        let d = b.decompose_indec(&x);
        let mut sum = b.zero_mor(&x, &x);
        for s in &d.summands {
            prop_assert_eq!(b.compose(&s.proj, &s.incl), b.identity(&s.obj));
            sum = b.add(&sum, &b.compose(&s.incl, &s.proj));
        }
        prop_assert_eq!(sum, b.identity(&x));
    }
}
