//! Verifiers for the axioms of an extriangulated category on a finite
//! list of objects.
//!
//! Every verifier enumerates an instance universe; it is checked in full
//! when it has at most `Sampling::budget` elements and otherwise on a seeded
//! uniform sample, and the report records which of the two happened.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::category::ExtriCategory;
use crate::error::{ensure, Result};
use crate::linalg::Mat;

/// Reports keep at most this many failure witnesses (the count is exact).
pub const MAX_WITNESSES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub category: String,
    pub universe: u64,
    pub checked: u64,
    pub exhaustive: bool,
    pub pass: bool,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
}

impl AxiomReport {
    pub(crate) fn new(axiom: &str, category: String, universe: usize, checked: usize, outcomes: Vec<Option<Failure>>) -> Self {
        let all: Vec<Failure> = outcomes.into_iter().flatten().collect();
        AxiomReport {
            axiom: axiom.into(),
            category,
            universe: universe as u64,
            checked: checked as u64,
            exhaustive: checked == universe,
            pass: all.is_empty(),
            failure_count: all.len() as u64,
            failures: all.into_iter().take(MAX_WITNESSES).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Sampling {
    pub seed: u64,
    pub budget: usize,
    pub parallel: bool,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { seed: 0, budget: 10_000, parallel: false }
    }
}

impl Sampling {
    /// Indices to check out of `0..universe`, sorted.
    pub fn select(&self, universe: usize, salt: u64) -> Vec<usize> {
        if universe <= self.budget {
            return (0..universe).collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut v = rand::seq::index::sample(&mut rng, universe, self.budget).into_vec();
        v.sort_unstable();
        v
    }

    pub(crate) fn map<I: Sync, R: Send>(&self, items: &[I], f: impl Fn(&I) -> R + Sync + Send) -> Vec<R> {
        if self.parallel {
            items.par_iter().map(f).collect()
        } else {
            items.iter().map(f).collect()
        }
    }
}

fn failure(instance: String, e: impl std::fmt::Display) -> Option<Failure> {
    Some(Failure { instance, witness: e.to_string() })
}

fn check(instance: impl FnOnce() -> String, r: Result<()>) -> Option<Failure> {
    r.err().and_then(|e| failure(instance(), e))
}

fn rank_of(p: u32, rows: usize, cols: &[Vec<u32>]) -> usize {
    if cols.is_empty() || rows == 0 {
        return 0;
    }
    Mat::from_columns(p, rows, cols).rank()
}

/// Biadditivity: for every ordered pair `(C, A)` and every listed `X`, the
/// four block maps `E(C ⊕ X, A ⊕ X) -> E(-, -)` jointly form a bijection.
pub fn verify_biadditivity<C: ExtriCategory>(cat: &C, s: &Sampling) -> AxiomReport {
    let objs = cat.objects();
    let n = objs.len();
    let idx = s.select(n * n, 1);
    let outcomes = s.map(&idx, |&k| {
        let (c, a) = (&objs[k / n], &objs[k % n]);
        let desc = || format!("({}, {})", cat.describe(c), cat.describe(a));
        for x in objs {
            if let Err(e) = four_blocks(cat, c, a, x) {
                return failure(format!("{} with X = {}", desc(), cat.describe(x)), e);
            }
        }
        None
    });
    AxiomReport::new("ET1", cat.name(), n * n, idx.len(), outcomes)
}

fn four_blocks<C: ExtriCategory>(cat: &C, c: &C::Ob, a: &C::Ob, x: &C::Ob) -> Result<()> {
    let (sc, cin, _) = cat.direct_sum(&[c, x]);
    let (sa, _, apr) = cat.direct_sum(&[a, x]);
    let whole = cat.ext_basis(&sc, &sa)?;
    let ends = [(c, a), (c, x), (x, a), (x, x)];
    let mut block_dim = 0;
    for (cc, aa) in ends {
        block_dim += cat.ext_basis(cc, aa)?.len();
    }
    ensure(whole.len() == block_dim, || format!("dim E(C+X, A+X) = {} but the blocks sum to {block_dim}", whole.len()))?;
    let mut cols = Vec::with_capacity(whole.len());
    let mut rows = 0;
    for w in &whole {
        let mut v = Vec::new();
        for j in 0..2 {
            for i in 0..2 {
                v.extend(cat.ext_vec(&cat.push(&apr[i], &cat.pull(&cin[j], w)?)?));
            }
        }
        rows = v.len();
        cols.push(v);
    }
    let r = rank_of(cat.p(), rows, &cols);
    ensure(r == whole.len(), || format!("block map has rank {r} < {}", whole.len()))
}

/// `(C, A, class)` with the class a basis element or zero, and its realization.
pub struct TriangleUniverse<C: ExtriCategory> {
    pub items: Vec<(String, C::Cl)>,
}

pub fn class_universe<C: ExtriCategory>(cat: &C) -> Result<TriangleUniverse<C>> {
    let mut items = Vec::new();
    for c in cat.objects() {
        for a in cat.objects() {
            let desc = format!("({}, {})", cat.describe(c), cat.describe(a));
            for (i, w) in cat.ext_basis(c, a)?.into_iter().enumerate() {
                items.push((format!("{desc} basis {i}"), w));
            }
            items.push((format!("{desc} zero"), cat.zero_class(c, a)?));
        }
    }
    Ok(TriangleUniverse { items })
}

/// Additivity of the realization: `s(0)` splits, `s(w)` is a conflation for
/// `w`, and `s(w ⊕ w)` is equivalent to `s(w) ⊕ s(w)`.
pub fn verify_additive_realization<C: ExtriCategory>(cat: &C, s: &Sampling) -> AxiomReport {
    let uni = match class_universe(cat) {
        Ok(u) => u,
        Err(e) => return AxiomReport::new("ET2", cat.name(), 1, 1, vec![failure("class universe".into(), e)]),
    };
    let idx = s.select(uni.items.len(), 2);
    let outcomes = s.map(&idx, |&k| {
        let (desc, w) = &uni.items[k];
        check(|| desc.clone(), additive_instance(cat, w))
    });
    AxiomReport::new("ET2", cat.name(), uni.items.len(), idx.len(), outcomes)
}

fn additive_instance<C: ExtriCategory>(cat: &C, w: &C::Cl) -> Result<()> {
    let t = cat.realize(w)?;
    cat.check_tri(&t)?;
    ensure(cat.class(&t) == w, || "realization carries a different class".into())?;
    if cat.is_split(w) {
        let sp = cat.split_tri(&cat.term(&t, 2), &cat.term(&t, 0))?;
        ensure(cat.equivalent(&t, &sp)?, || "s(0) is not the split conflation".into())?;
    }
    let ww = cat.class_sum(w, w)?;
    let lhs = cat.realize(&ww)?;
    let rhs = cat.tri_sum(&t, &t)?;
    ensure(cat.equivalent(&lhs, &rhs)?, || "s(w + w) is not equivalent to s(w) + s(w)".into())
}

/// Exactness of the two five-term sequences
/// `C(C,X) -> C(B,X) -> C(A,X) -> E(C,X) -> E(B,X)` and
/// `C(X,A) -> C(X,B) -> C(X,C) -> E(X,A) -> E(X,B)` at the three interior terms.
pub fn exact_sequences<C: ExtriCategory>(cat: &C, t: &C::Tri, x: &C::Ob) -> Result<()> {
    let (a, b, c) = (cat.term(t, 0), cat.term(t, 1), cat.term(t, 2));
    let (f, g, d) = (cat.inflation(t), cat.deflation(t), cat.class(t));
    let p = cat.p();
    // one step U -> V -> W given by bases and two maps
    struct Step {
        dim_v: usize,
        rank_f: usize,
        rank_g: usize,
        composite_zero: bool,
    }
    fn verdict(name: &str, s: Step) -> Result<()> {
        ensure(s.composite_zero, || format!("{name}: composite is not zero"))?;
        ensure(s.rank_f + s.rank_g == s.dim_v, || {
            format!("{name}: rank {} + rank {} != dim {}", s.rank_f, s.rank_g, s.dim_v)
        })
    }
    let vecs_h = |ms: &[C::Mo]| -> (usize, Vec<Vec<u32>>) {
        let v: Vec<Vec<u32>> = ms.iter().map(|m| cat.hom_vec(m)).collect();
        (v.first().map_or(0, Vec::len), v)
    };
    let vecs_e = |ws: &[C::Cl]| -> (usize, Vec<Vec<u32>>) {
        let v: Vec<Vec<u32>> = ws.iter().map(|w| cat.ext_vec(w)).collect();
        (v.first().map_or(0, Vec::len), v)
    };

    // contravariant sequence
    let h_cx = cat.hom_basis(&c, x);
    let h_bx = cat.hom_basis(&b, x);
    let h_ax = cat.hom_basis(&a, x);
    let e_cx = cat.ext_basis(&c, x)?;
    let img1: Vec<C::Mo> = h_cx.iter().map(|u| cat.compose(u, g)).collect();
    let img2: Vec<C::Mo> = h_bx.iter().map(|u| cat.compose(u, f)).collect();
    let img3: Vec<C::Cl> = h_ax.iter().map(|u| cat.push(u, d)).collect::<Result<_>>()?;
    let img4: Vec<C::Cl> = e_cx.iter().map(|w| cat.pull(g, w)).collect::<Result<_>>()?;
    let (r1, v1) = vecs_h(&img1);
    let (r2, v2) = vecs_h(&img2);
    let (r3, v3) = vecs_e(&img3);
    let (r4, v4) = vecs_e(&img4);
    let (rk1, rk2, rk3, rk4) = (rank_of(p, r1, &v1), rank_of(p, r2, &v2), rank_of(p, r3, &v3), rank_of(p, r4, &v4));
    let z12 = img1.iter().all(|m| cat.hom_vec(&cat.compose(m, f)).iter().all(|&e| e == 0));
    let z23 = img2.iter().map(|m| cat.push(m, d)).collect::<Result<Vec<_>>>()?.iter().all(|w| cat.is_split(w));
    let z34 = img3.iter().map(|w| cat.pull(g, w)).collect::<Result<Vec<_>>>()?.iter().all(|w| cat.is_split(w));
    verdict("C(B,X)", Step { dim_v: h_bx.len(), rank_f: rk1, rank_g: rk2, composite_zero: z12 })?;
    verdict("C(A,X)", Step { dim_v: h_ax.len(), rank_f: rk2, rank_g: rk3, composite_zero: z23 })?;
    verdict("E(C,X)", Step { dim_v: e_cx.len(), rank_f: rk3, rank_g: rk4, composite_zero: z34 })?;

    // covariant sequence
    let h_xa = cat.hom_basis(x, &a);
    let h_xb = cat.hom_basis(x, &b);
    let h_xc = cat.hom_basis(x, &c);
    let e_xa = cat.ext_basis(x, &a)?;
    let img1: Vec<C::Mo> = h_xa.iter().map(|u| cat.compose(f, u)).collect();
    let img2: Vec<C::Mo> = h_xb.iter().map(|u| cat.compose(g, u)).collect();
    let img3: Vec<C::Cl> = h_xc.iter().map(|u| cat.pull(u, d)).collect::<Result<_>>()?;
    let img4: Vec<C::Cl> = e_xa.iter().map(|w| cat.push(f, w)).collect::<Result<_>>()?;
    let (r1, v1) = vecs_h(&img1);
    let (r2, v2) = vecs_h(&img2);
    let (r3, v3) = vecs_e(&img3);
    let (r4, v4) = vecs_e(&img4);
    let (rk1, rk2, rk3, rk4) = (rank_of(p, r1, &v1), rank_of(p, r2, &v2), rank_of(p, r3, &v3), rank_of(p, r4, &v4));
    let z12 = img1.iter().all(|m| cat.hom_vec(&cat.compose(g, m)).iter().all(|&e| e == 0));
    let z23 = img2.iter().map(|m| cat.pull(m, d)).collect::<Result<Vec<_>>>()?.iter().all(|w| cat.is_split(w));
    let z34 = img3.iter().map(|w| cat.push(f, w)).collect::<Result<Vec<_>>>()?.iter().all(|w| cat.is_split(w));
    verdict("C(X,B)", Step { dim_v: h_xb.len(), rank_f: rk1, rank_g: rk2, composite_zero: z12 })?;
    verdict("C(X,C)", Step { dim_v: h_xc.len(), rank_f: rk2, rank_g: rk3, composite_zero: z23 })?;
    verdict("E(X,A)", Step { dim_v: e_xa.len(), rank_f: rk3, rank_g: rk4, composite_zero: z34 })
}

/// Exact sequences for every given conflation against every listed object.
pub fn verify_exact_sequences<C: ExtriCategory>(cat: &C, tris: &[(String, C::Tri)], s: &Sampling) -> AxiomReport {
    let objs = cat.objects();
    let n = objs.len();
    let universe = tris.len() * n;
    let idx = s.select(universe, 3);
    let outcomes = s.map(&idx, |&k| {
        let (desc, t) = &tris[k / n];
        let x = &objs[k % n];
        check(|| format!("{desc} against {}", cat.describe(x)), exact_sequences(cat, t, x))
    });
    AxiomReport::new("exact-sequences", cat.name(), universe, idx.len(), outcomes)
}

/// Realizations of every class in `class_universe`.
pub fn triangle_universe<C: ExtriCategory>(cat: &C) -> Result<Vec<(String, C::Tri)>> {
    class_universe(cat)?.items.into_iter().map(|(d, w)| Ok((d, cat.realize(&w)?))).collect()
}

/// Basis of the pairs `(u, v)` in `Hom(X1, Y1) ⊕ Hom(X2, Y2)` with
/// `l(u) = r(v)`, where `l` and `r` land in a common hom-space.
fn square_basis<C: ExtriCategory>(
    cat: &C,
    (x1, y1): (&C::Ob, &C::Ob),
    (x2, y2): (&C::Ob, &C::Ob),
    l: impl Fn(&C::Mo) -> C::Mo,
    r: impl Fn(&C::Mo) -> C::Mo,
) -> Vec<(C::Mo, C::Mo)> {
    let p = cat.p();
    let (bu, bv) = (cat.hom_basis(x1, y1), cat.hom_basis(x2, y2));
    let mut cols: Vec<Vec<u32>> = bu.iter().map(|u| cat.hom_vec(&l(u))).collect();
    cols.extend(bv.iter().map(|v| cat.hom_vec(&r(v)).into_iter().map(|e| (p - e) % p).collect()));
    if cols.is_empty() {
        return Vec::new();
    }
    let k = Mat::from_columns(p, cols[0].len(), &cols).kernel_basis();
    (0..k.cols())
        .map(|j| {
            let c = k.col(j);
            (cat.lin_comb(x1, y1, &c[..bu.len()], &bu), cat.lin_comb(x2, y2, &c[bu.len()..], &bv))
        })
        .collect()
}

fn same_mor<C: ExtriCategory>(cat: &C, f: &C::Mo, g: &C::Mo) -> bool {
    cat.hom_vec(f) == cat.hom_vec(g)
}

fn et3_instance<C: ExtriCategory>(cat: &C, t1: &C::Tri, t2: &C::Tri) -> Result<()> {
    let (a1, b1, a2, b2) = (cat.term(t1, 0), cat.term(t1, 1), cat.term(t2, 0), cat.term(t2, 1));
    let (x1, y1, d1) = (cat.inflation(t1), cat.deflation(t1), cat.class(t1));
    let (x2, y2, d2) = (cat.inflation(t2), cat.deflation(t2), cat.class(t2));
    for (a, b) in square_basis(cat, (&a1, &a2), (&b1, &b2), |a| cat.compose(x2, a), |b| cat.compose(b, x1)) {
        let c = cat.et3(t1, t2, &a, &b)?;
        ensure(same_mor(cat, &cat.compose(&c, y1), &cat.compose(y2, &b)), || "c y != y' b".into())?;
        ensure(cat.push(&a, d1)? == cat.pull(&c, d2)?, || "a_* d != c^* d'".into())?;
    }
    Ok(())
}

fn et3op_instance<C: ExtriCategory>(cat: &C, t1: &C::Tri, t2: &C::Tri) -> Result<()> {
    let (b1, c1, b2, c2) = (cat.term(t1, 1), cat.term(t1, 2), cat.term(t2, 1), cat.term(t2, 2));
    let (x1, y1, d1) = (cat.inflation(t1), cat.deflation(t1), cat.class(t1));
    let (x2, y2, d2) = (cat.inflation(t2), cat.deflation(t2), cat.class(t2));
    for (b, c) in square_basis(cat, (&b1, &b2), (&c1, &c2), |b| cat.compose(y2, b), |c| cat.compose(c, y1)) {
        let a = cat.et3op(t1, t2, &b, &c)?;
        ensure(same_mor(cat, &cat.compose(x2, &a), &cat.compose(&b, x1)), || "x' a != b x".into())?;
        ensure(cat.push(&a, d1)? == cat.pull(&c, d2)?, || "a_* d != c^* d'".into())?;
    }
    Ok(())
}

/// Reports for ET3, ET3op, ET4 and ET4op together with every conflation the
/// octahedra produced.
pub struct EtOutcome<T> {
    pub reports: Vec<AxiomReport>,
    pub produced: Vec<(String, T)>,
}

/// `(triangle, object, class index or zero)` for classes in `E(X, B)` when
/// `forward`, else in `E(B, X)`, with `B` the middle term.
fn octahedral_universe<C: ExtriCategory>(
    cat: &C,
    tris: &[(String, C::Tri)],
    forward: bool,
) -> Result<Vec<(usize, usize, Option<usize>)>> {
    let mut out = Vec::new();
    for (i, (_, t)) in tris.iter().enumerate() {
        let b = cat.term(t, 1);
        for (j, x) in cat.objects().iter().enumerate() {
            let dim = if forward { cat.ext_dim(x, &b)? } else { cat.ext_dim(&b, x)? };
            out.extend((0..dim).map(|k| (i, j, Some(k))));
            out.push((i, j, None));
        }
    }
    Ok(out)
}

fn octahedron<C: ExtriCategory>(
    cat: &C,
    t1: &C::Tri,
    x: &C::Ob,
    k: Option<usize>,
    forward: bool,
) -> Result<[C::Tri; 2]> {
    let b = cat.term(t1, 1);
    let (c, a) = if forward { (x, &b) } else { (&b, x) };
    let w = match k {
        Some(k) => cat.ext_basis(c, a)?.swap_remove(k),
        None => cat.zero_class(c, a)?,
    };
    let t2 = cat.realize(&w)?;
    if forward {
        cat.et4(t1, &t2)
    } else {
        cat.et4op(t1, &t2)
    }
}

/// ET3 (or ET3op when `op`) over all ordered pairs of `tris`; every basis
/// element of the space of commuting squares is completed and checked.
pub fn verify_et3<C: ExtriCategory>(cat: &C, tris: &[(String, C::Tri)], s: &Sampling, op: bool) -> AxiomReport {
    let n = tris.len();
    let idx = s.select(n * n, if op { 5 } else { 4 });
    let outcomes = s.map(&idx, |&k| {
        let ((d1, t1), (d2, t2)) = (&tris[k / n], &tris[k % n]);
        let r = if op { et3op_instance(cat, t1, t2) } else { et3_instance(cat, t1, t2) };
        check(|| format!("{d1} -> {d2}"), r)
    });
    AxiomReport::new(if op { "ET3op" } else { "ET3" }, cat.name(), n * n, idx.len(), outcomes)
}

/// ET4 (or ET4op when `!forward`) with the second conflation ranging over
/// basis classes and zero against every listed object.
pub fn verify_et4<C: ExtriCategory>(
    cat: &C,
    tris: &[(String, C::Tri)],
    s: &Sampling,
    forward: bool,
) -> (AxiomReport, Vec<(String, C::Tri)>) {
    let axiom = if forward { "ET4" } else { "ET4op" };
    let uni = match octahedral_universe(cat, tris, forward) {
        Ok(u) => u,
        Err(e) => return (AxiomReport::new(axiom, cat.name(), 1, 1, vec![failure("universe".into(), e)]), Vec::new()),
    };
    let idx = s.select(uni.len(), if forward { 6 } else { 7 });
    let results = s.map(&idx, |&k| {
        let (i, j, c) = uni[k];
        let x = &cat.objects()[j];
        let desc = match c {
            Some(c) => format!("{} with class {c} against {}", tris[i].0, cat.describe(x)),
            None => format!("{} with zero class against {}", tris[i].0, cat.describe(x)),
        };
        (octahedron(cat, &tris[i].1, x, c, forward), desc)
    });
    let mut produced = Vec::new();
    let mut outcomes = Vec::with_capacity(results.len());
    for (r, desc) in results {
        match r {
            Ok([t3, t4]) => {
                produced.push((format!("{axiom} third of {desc}"), t3));
                produced.push((format!("{axiom} fourth of {desc}"), t4));
                outcomes.push(None);
            }
            Err(e) => outcomes.push(failure(desc, e)),
        }
    }
    (AxiomReport::new(axiom, cat.name(), uni.len(), idx.len(), outcomes), produced)
}

pub fn verify_et_axioms<C: ExtriCategory>(cat: &C, tris: &[(String, C::Tri)], s: &Sampling) -> EtOutcome<C::Tri> {
    let mut reports = vec![verify_et3(cat, tris, s, false), verify_et3(cat, tris, s, true)];
    let mut produced = Vec::new();
    for forward in [true, false] {
        let (r, p) = verify_et4(cat, tris, s, forward);
        reports.push(r);
        produced.extend(p);
    }
    EtOutcome { reports, produced }
}

/// Everything one sweep produces: the reports in axiom order and the
/// conflations built by the octahedra.
pub struct SuiteOutcome<T> {
    pub reports: Vec<AxiomReport>,
    pub triangles: Vec<(String, T)>,
    pub produced: Vec<(String, T)>,
}

/// ET1, ET2, ET3, ET3op, ET4, ET4op and the exact sequences on the
/// realized conflations.
pub fn verify_suite<C: ExtriCategory>(cat: &C, s: &Sampling) -> Result<SuiteOutcome<C::Tri>> {
    let mut reports = vec![verify_biadditivity(cat, s), verify_additive_realization(cat, s)];
    let triangles = match triangle_universe(cat) {
        Ok(t) => t,
        Err(e) => {
            // no conflation universe to run the rest on
            for name in ["ET3", "ET3op", "ET4", "ET4op", "exact-sequences"] {
                reports.push(AxiomReport::new(name, cat.name(), 1, 1, vec![failure("realizing the classes".into(), &e)]));
            }
            return Ok(SuiteOutcome { reports, triangles: vec![], produced: vec![] });
        }
    };
    let et = verify_et_axioms(cat, &triangles, s);
    reports.extend(et.reports);
    reports.push(verify_exact_sequences(cat, &triangles, s));
    Ok(SuiteOutcome { reports, triangles, produced: et.produced })
}
