//! Presented additive subcategories and their idempotent completion.
//!
//! An object of the completion is a pair `(A, e)` with `e` an idempotent of
//! `A`; morphisms `(A, e) -> (B, f)` are the `α: A -> B` with `α e = f α = α`.
//! Because both backends are themselves idempotent complete, `(A, e)` can be
//! evaluated to the image of `e`, which serves as an independent oracle.

use serde::{Deserialize, Serialize};

use crate::backend::{Backend, Mor, Obj, ISO_SEARCH_BOUND};
use crate::error::{ensure, Error, Result};
use crate::linalg::Mat;

/// Formal direct sum `⊕ G_i^{m_i}` of the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PObj {
    pub mults: Vec<usize>,
}

impl PObj {
    pub fn total(&self) -> usize {
        self.mults.iter().sum()
    }
}

/// `(base, idem)`, optionally tagged with the multiplicities it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KObject {
    pub base: Obj,
    pub mults: Option<Vec<usize>>,
    pub idem: Mor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KMorphism {
    pub src: KObject,
    pub tgt: KObject,
    pub map: Mor,
}

/// `K ⊕ K' ≅ ι(A)`: `incl[i]: K_i -> ι A`, `proj[i]: ι A -> K_i`.
#[derive(Clone, Debug)]
pub struct KDirectSum {
    pub obj: KObject,
    pub incl: Vec<KMorphism>,
    pub proj: Vec<KMorphism>,
}

/// Image of `e` split in the ambient category: `q p = e`, `p q = 1`.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub obj: Obj,
    /// `im e -> A`.
    pub q: Mor,
    /// `A -> im e`.
    pub p: Mor,
}

impl Backend {
    pub fn kobject(&self, base: Obj, idem: Mor) -> Result<KObject> {
        if idem.src != base || idem.tgt != base {
            return Err(Error::InvalidObject("idempotent must be an endomorphism of the base".into()));
        }
        if !self.is_idempotent(&idem) {
            return Err(Error::InvalidObject("endomorphism is not idempotent".into()));
        }
        Ok(KObject { base, mults: None, idem })
    }

    /// `ι A = (A, 1_A)`.
    pub fn iota(&self, a: &Obj) -> KObject {
        KObject { base: a.clone(), mults: None, idem: self.identity(a) }
    }

    pub fn kmor(&self, src: &KObject, tgt: &KObject, map: Mor) -> Result<KMorphism> {
        let m = KMorphism { src: src.clone(), tgt: tgt.clone(), map };
        self.check_kmor(&m)?;
        Ok(m)
    }

    pub fn check_kmor(&self, m: &KMorphism) -> Result<()> {
        if m.map.src != m.src.base || m.map.tgt != m.tgt.base {
            return Err(Error::InvalidMorphism("KMorphism endpoints".into()));
        }
        ensure(self.compose(&m.map, &m.src.idem) == m.map, || "α e_src != α".into())?;
        ensure(self.compose(&m.tgt.idem, &m.map) == m.map, || "e_tgt α != α".into())
    }

    pub fn is_kmor(&self, m: &KMorphism) -> bool {
        self.check_kmor(m).is_ok()
    }

    /// The identity of `(A, e)` is `e`.
    pub fn k_identity(&self, k: &KObject) -> KMorphism {
        KMorphism { src: k.clone(), tgt: k.clone(), map: k.idem.clone() }
    }

    pub fn k_zero(&self, k1: &KObject, k2: &KObject) -> KMorphism {
        KMorphism { src: k1.clone(), tgt: k2.clone(), map: self.zero_mor(&k1.base, &k2.base) }
    }

    pub fn k_compose(&self, g: &KMorphism, f: &KMorphism) -> KMorphism {
        assert!(f.tgt == g.src, "k_compose: endpoints");
        KMorphism { src: f.src.clone(), tgt: g.tgt.clone(), map: self.compose(&g.map, &f.map) }
    }

    pub fn k_add(&self, f: &KMorphism, g: &KMorphism) -> KMorphism {
        assert!(f.src == g.src && f.tgt == g.tgt, "k_add: endpoints");
        KMorphism { src: f.src.clone(), tgt: f.tgt.clone(), map: self.add(&f.map, &g.map) }
    }

    pub fn k_sub(&self, f: &KMorphism, g: &KMorphism) -> KMorphism {
        assert!(f.src == g.src && f.tgt == g.tgt, "k_sub: endpoints");
        KMorphism { src: f.src.clone(), tgt: f.tgt.clone(), map: self.sub(&f.map, &g.map) }
    }

    pub fn k_scale(&self, f: &KMorphism, s: u32) -> KMorphism {
        KMorphism { src: f.src.clone(), tgt: f.tgt.clone(), map: self.scale(&f.map, s) }
    }

    /// `α ↦ e_2 α e_1` restricted to `Hom(A, B)`.
    pub fn k_project(&self, k1: &KObject, k2: &KObject, m: &Mor) -> Mor {
        self.chain(&[&k2.idem, m, &k1.idem])
    }

    /// Basis of the completion's hom-space: the image of `α ↦ e_2 α e_1`,
    /// reduced to the projected basis elements at the pivot columns.
    pub fn karoubi_hom(&self, k1: &KObject, k2: &KObject) -> Vec<KMorphism> {
        let (projected, pivots) = self.projected_hom(k1, k2);
        pivots.into_iter().map(|j| KMorphism { src: k1.clone(), tgt: k2.clone(), map: projected[j].clone() }).collect()
    }

    pub fn karoubi_hom_dim(&self, k1: &KObject, k2: &KObject) -> usize {
        self.projected_hom(k1, k2).1.len()
    }

    fn projected_hom(&self, k1: &KObject, k2: &KObject) -> (Vec<Mor>, Vec<usize>) {
        let basis = self.hom_basis(&k1.base, &k2.base);
        if basis.is_empty() {
            return (vec![], vec![]);
        }
        let projected: Vec<Mor> = basis.iter().map(|m| self.k_project(k1, k2, m)).collect();
        let cols: Vec<Vec<u32>> = projected.iter().map(|m| self.mor_to_vec(m)).collect();
        let pivots = Mat::from_columns(self.p(), cols[0].len(), &cols).rref().1;
        (projected, pivots)
    }

    /// `(A, 1 - e)` with the witnesses of `(A, e) ⊕ (A, 1 - e) ≅ ι A`.
    pub fn complement(&self, k: &KObject) -> KObject {
        KObject { base: k.base.clone(), mults: k.mults.clone(), idem: self.sub(&self.identity(&k.base), &k.idem) }
    }

    /// Witness that `K ⊕ complement(K)` is the whole base, verified.
    pub fn complement_witness(&self, k: &KObject) -> Result<KDirectSum> {
        let kc = self.complement(k);
        let whole = KObject { base: k.base.clone(), mults: k.mults.clone(), idem: self.identity(&k.base) };
        let incl = vec![
            KMorphism { src: k.clone(), tgt: whole.clone(), map: k.idem.clone() },
            KMorphism { src: kc.clone(), tgt: whole.clone(), map: kc.idem.clone() },
        ];
        let proj = vec![
            KMorphism { src: whole.clone(), tgt: k.clone(), map: k.idem.clone() },
            KMorphism { src: whole.clone(), tgt: kc.clone(), map: kc.idem.clone() },
        ];
        let ds = KDirectSum { obj: whole, incl, proj };
        self.check_k_direct_sum(&ds)?;
        Ok(ds)
    }

    pub fn check_k_direct_sum(&self, ds: &KDirectSum) -> Result<()> {
        let mut total = self.k_zero(&ds.obj, &ds.obj);
        for (i, (inc, pr)) in ds.incl.iter().zip(&ds.proj).enumerate() {
            self.check_kmor(inc)?;
            self.check_kmor(pr)?;
            for (j, inc2) in ds.incl.iter().enumerate() {
                let c = self.k_compose(pr, inc2);
                if i == j {
                    ensure(c.map == inc2.src.idem, || format!("p_{i} i_{i} is not the identity"))?;
                } else {
                    ensure(c.map.is_zero(), || format!("p_{i} i_{j} is not zero"))?;
                }
            }
            total = self.k_add(&total, &self.k_compose(inc, pr));
        }
        ensure(total.map == ds.obj.idem, || "Σ i_k p_k is not the identity".into())
    }

    /// Biproduct in the completion: base direct sum with block idempotent.
    pub fn k_direct_sum(&self, ks: &[&KObject]) -> KDirectSum {
        let ds = self.direct_sum(&ks.iter().map(|k| k.base.clone()).collect::<Vec<_>>());
        let idems: Vec<&Mor> = ks.iter().map(|k| &k.idem).collect();
        let (_, _, idem) = self.mor_sum(&idems);
        let mults = ks.iter().map(|k| k.mults.clone()).collect::<Option<Vec<_>>>().map(|ms| {
            let n = ms.iter().map(Vec::len).max().unwrap_or(0);
            (0..n).map(|i| ms.iter().map(|m| m.get(i).copied().unwrap_or(0)).sum()).collect()
        });
        let obj = KObject { base: ds.obj.clone(), mults, idem };
        let incl = ks
            .iter()
            .zip(&ds.incl)
            .map(|(k, i)| KMorphism { src: (*k).clone(), tgt: obj.clone(), map: self.compose(i, &k.idem) })
            .collect();
        let proj = ks
            .iter()
            .zip(&ds.proj)
            .map(|(k, p)| KMorphism { src: obj.clone(), tgt: (*k).clone(), map: self.compose(&k.idem, p) })
            .collect();
        KDirectSum { obj, incl, proj }
    }

    pub fn evaluate(&self, k: &KObject) -> Evaluation {
        let s = self.split_idempotent(&k.idem);
        Evaluation { obj: s.obj, q: s.incl, p: s.proj }
    }

    /// `p_B α q_A` between evaluations.
    pub fn evaluate_mor(&self, m: &KMorphism, src: &Evaluation, tgt: &Evaluation) -> Mor {
        self.chain(&[&tgt.p, &m.map, &src.q])
    }

    /// An isomorphism in the completion, found through the evaluations.
    pub fn k_iso(&self, k1: &KObject, k2: &KObject) -> Result<Option<(KMorphism, KMorphism)>> {
        let (e1, e2) = (self.evaluate(k1), self.evaluate(k2));
        let Some(f) = self.find_iso(&e1.obj, &e2.obj)? else {
            return Ok(None);
        };
        let finv = self.inverse(&f).expect("iso");
        let fwd = KMorphism { src: k1.clone(), tgt: k2.clone(), map: self.chain(&[&e2.q, &f, &e1.p]) };
        let bwd = KMorphism { src: k2.clone(), tgt: k1.clone(), map: self.chain(&[&e1.q, &finv, &e2.p]) };
        Ok(Some((fwd, bwd)))
    }

    pub fn k_isomorphic(&self, k1: &KObject, k2: &KObject) -> Result<bool> {
        Ok(self.k_iso(k1, k2)?.is_some())
    }

    /// The first object of each isomorphism class, in input order.
    pub fn isoclass_representatives(&self, ks: &[KObject]) -> Result<Vec<KObject>> {
        let mut reps: Vec<KObject> = Vec::new();
        for k in ks {
            let mut seen = false;
            for r in &reps {
                if self.k_isomorphic(r, k)? {
                    seen = true;
                    break;
                }
            }
            if !seen {
                reps.push(k.clone());
            }
        }
        Ok(reps)
    }

    pub fn dual_kobject(&self, k: &KObject) -> KObject {
        KObject { base: self.dual_obj(&k.base), mults: k.mults.clone(), idem: self.dual_mor(&k.idem) }
    }

    pub fn dual_kmor(&self, m: &KMorphism) -> KMorphism {
        KMorphism { src: self.dual_kobject(&m.tgt), tgt: self.dual_kobject(&m.src), map: self.dual_mor(&m.map) }
    }
}

/// Generators of a presented additive subcategory, with a multiplicity bound.
#[derive(Clone, Debug)]
pub struct Presentation {
    backend: Backend,
    generators: Vec<Obj>,
    labels: Vec<String>,
    bound: usize,
}

/// Idempotents of an endomorphism algebra up to conjugacy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentCensus {
    /// Iso classes of indecomposable summands with their multiplicities.
    pub class_multiplicities: Vec<usize>,
    /// Idempotents met while enumerating `End(A)`; `None` when it was too large.
    pub enumerated: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletenessFailure {
    pub object: String,
    pub witness: Mor,
}

impl Presentation {
    pub fn new(backend: Backend, generators: Vec<Obj>, bound: usize) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Config("presentation needs at least one generator".into()));
        }
        for g in &generators {
            backend.check_obj(g)?;
        }
        let labels = (0..generators.len()).map(|i| format!("G{i}")).collect();
        Ok(Presentation { backend, generators, labels, bound })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.generators.len() {
            return Err(Error::Config("one label per generator".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn generators(&self) -> &[Obj] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn pobj(&self, mults: Vec<usize>) -> Result<PObj> {
        if mults.len() != self.generators.len() {
            return Err(Error::DimensionMismatch("one multiplicity per generator".into()));
        }
        let p = PObj { mults };
        if p.total() > self.bound {
            return Err(Error::BoundExceeded(format!("total multiplicity {} > {}", p.total(), self.bound)));
        }
        Ok(p)
    }

    pub fn realize(&self, a: &PObj) -> Obj {
        let parts: Vec<Obj> = a
            .mults
            .iter()
            .zip(&self.generators)
            .flat_map(|(&m, g)| std::iter::repeat(g.clone()).take(m))
            .collect();
        self.backend.direct_sum(&parts).obj
    }

    pub fn iota_embed(&self, a: &PObj) -> KObject {
        let base = self.realize(a);
        KObject { idem: self.backend.identity(&base), base, mults: Some(a.mults.clone()) }
    }

    pub fn describe(&self, a: &PObj) -> String {
        let parts: Vec<String> = a
            .mults
            .iter()
            .zip(&self.labels)
            .filter(|(m, _)| **m > 0)
            .map(|(m, l)| if *m == 1 { l.clone() } else { format!("{l}^{m}") })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Multiplicity vectors with total at most the bound, by total then lexicographically.
    pub fn pobjs(&self) -> Vec<PObj> {
        let n = self.generators.len();
        let mut out = Vec::new();
        for total in 0..=self.bound {
            let mut cur = vec![0; n];
            compositions(total, 0, &mut cur, &mut out);
        }
        out.into_iter().map(|mults| PObj { mults }).collect()
    }

    pub fn dual(&self) -> Presentation {
        let b = &self.backend;
        Presentation {
            backend: b.dual_backend(),
            generators: self.generators.iter().map(|g| b.dual_obj(g)).collect(),
            labels: self.labels.iter().map(|l| format!("D{l}")).collect(),
            bound: self.bound,
        }
    }

    /// Representatives of the idempotents of `End(A)` up to conjugacy.
    ///
    /// Conjugacy classes correspond to sub-multisets of the indecomposable
    /// summands (Krull-Schmidt), so each class is represented by a sum of
    /// summand projections. When `End(A)` has at most [`ISO_SEARCH_BOUND`]
    /// elements every idempotent is also enumerated and matched to a class.
    pub fn idempotent_classes(&self, a: &PObj) -> Result<(Vec<(Vec<usize>, Mor)>, IdempotentCensus)> {
        let b = &self.backend;
        let base = self.realize(a);
        let dec = b.decompose_indec(&base);
        // iso classes of summands
        let mut reps: Vec<usize> = Vec::new();
        let mut class_of = Vec::with_capacity(dec.summands.len());
        for (i, s) in dec.summands.iter().enumerate() {
            let mut found = None;
            for (c, &r) in reps.iter().enumerate() {
                if b.is_isomorphic(&dec.summands[r].obj, &s.obj)? {
                    found = Some(c);
                    break;
                }
            }
            class_of.push(found.unwrap_or_else(|| {
                reps.push(i);
                reps.len() - 1
            }));
        }
        let mut mult = vec![0; reps.len()];
        for &c in &class_of {
            mult[c] += 1;
        }
        let mut counts = Vec::new();
        let mut cur = vec![0; mult.len()];
        bounded_vectors(&mult, 0, &mut cur, &mut counts);
        let classes: Vec<(Vec<usize>, Mor)> = counts
            .into_iter()
            .map(|cv| {
                let mut taken = vec![0; mult.len()];
                let mut e = b.zero_mor(&base, &base);
                for (s, &c) in dec.summands.iter().zip(&class_of) {
                    if taken[c] < cv[c] {
                        taken[c] += 1;
                        e = b.add(&e, &b.compose(&s.incl, &s.proj));
                    }
                }
                (cv, e)
            })
            .collect();
        let end = b.hom_basis(&base, &base);
        let enumerated = if crate::backend::space_size(b.p(), end.len()).is_some_and(|s| s <= ISO_SEARCH_BOUND) {
            let mut count = 0usize;
            let mut failure = None;
            crate::backend::for_each_vector(b.p(), end.len(), |c| {
                let e = b.lin_comb(&base, &base, c, &end);
                if b.compose(&e, &e) == e {
                    count += 1;
                    let img = b.split_idempotent(&e).obj;
                    let dims: Vec<usize> = img.dims.clone();
                    let hit = classes.iter().any(|(_, r)| {
                        let ri = b.split_idempotent(r).obj;
                        ri.dims == dims && b.is_isomorphic(&ri, &img).unwrap_or(false)
                    });
                    if !hit {
                        failure = Some(e);
                        return true;
                    }
                }
                false
            });
            if let Some(e) = failure {
                return Err(Error::Verification(format!("idempotent {e:?} matches no summand class")));
            }
            Some(count)
        } else {
            None
        };
        Ok((classes, IdempotentCensus { class_multiplicities: mult, enumerated }))
    }

    /// All `(A, e)` with `A` up to the bound and `e` over idempotent classes,
    /// in deterministic order. Errors when more than `budget` objects arise.
    pub fn enumerate_kobjects(&self, budget: usize) -> Result<Vec<KObject>> {
        let mut out = Vec::new();
        for a in self.pobjs() {
            let base = self.realize(&a);
            if base.is_zero() {
                if out.is_empty() {
                    out.push(self.iota_embed(&a));
                }
                continue;
            }
            let (classes, _) = self.idempotent_classes(&a)?;
            for (_, e) in classes {
                if e.is_zero() {
                    continue;
                }
                out.push(KObject { base: base.clone(), mults: Some(a.mults.clone()), idem: e });
                if out.len() > budget {
                    return Err(Error::BoundExceeded(format!("more than {budget} objects")));
                }
            }
        }
        Ok(out)
    }

    /// Whether `X` is isomorphic to some `A` within the bound.
    pub fn contains(&self, x: &Obj) -> Result<Option<PObj>> {
        for a in self.pobjs() {
            let r = self.realize(&a);
            if r.dims == x.dims && self.backend.is_isomorphic(&r, x)? {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    /// Checks that every idempotent class on every object splits inside the
    /// presented subcategory (no completion applied).
    pub fn check_idempotent_complete(&self) -> Result<Vec<CompletenessFailure>> {
        let mut failures = Vec::new();
        for a in self.pobjs() {
            for (_, e) in self.idempotent_classes(&a)?.0 {
                let img = self.backend.split_idempotent(&e).obj;
                if self.contains(&img)?.is_none() {
                    failures.push(CompletenessFailure { object: self.describe(&a), witness: e });
                }
            }
        }
        Ok(failures)
    }

    /// The same check in the completion: each idempotent `f` of `(A, e)` splits
    /// through `(A, f)` with `f` as both section and retraction.
    pub fn check_envelope_idempotent_complete(&self, objs: &[KObject]) -> Result<Vec<CompletenessFailure>> {
        let b = &self.backend;
        let mut failures = Vec::new();
        for k in objs {
            let ev = b.evaluate(k);
            let dec = b.decompose_indec(&ev.obj);
            let mut idems = vec![b.k_zero(k, k), b.k_identity(k)];
            for s in &dec.summands {
                let f = b.chain(&[&ev.q, &s.incl, &s.proj, &ev.p]);
                idems.push(KMorphism { src: k.clone(), tgt: k.clone(), map: f });
            }
            for f in idems {
                let split = KObject { base: k.base.clone(), mults: k.mults.clone(), idem: f.map.clone() };
                let sec = KMorphism { src: split.clone(), tgt: k.clone(), map: f.map.clone() };
                let ret = KMorphism { src: k.clone(), tgt: split.clone(), map: f.map.clone() };
                let ok = b.is_idempotent(&f.map)
                    && b.is_kmor(&f)
                    && b.is_kmor(&sec)
                    && b.is_kmor(&ret)
                    && b.k_compose(&sec, &ret).map == f.map
                    && b.k_compose(&ret, &sec).map == split.idem;
                if !ok {
                    failures.push(CompletenessFailure { object: format!("{:?}", k.mults), witness: f.map });
                }
            }
        }
        Ok(failures)
    }
}

fn compositions(total: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let n = cur.len();
    if i + 1 == n {
        cur[i] = total;
        out.push(cur.clone());
        return;
    }
    for v in (0..=total).rev() {
        cur[i] = v;
        compositions(total - v, i + 1, cur, out);
    }
}

fn bounded_vectors(max: &[usize], i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if i == max.len() {
        out.push(cur.clone());
        return;
    }
    for v in 0..=max[i] {
        cur[i] = v;
        bounded_vectors(max, i + 1, cur, out);
    }
}

#[cfg(test)]
mod tests;
