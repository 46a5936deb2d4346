//! A common interface over the ambient category and its idempotent
//! completion, so that one set of verifiers serves both.
//!
//! Elements of hom- and extension spaces are compared through linear
//! injections into ambient coordinates (`hom_vec`, `ext_vec`); ranks of maps
//! between such spaces can then be read off without choosing bases.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::backend::{Backend, ETriangle, ExtClass, Mor, Obj};
use crate::error::Result;
use crate::fext::{FExtension, FTriangle, FVariant, Given};
use crate::karoubi::{KMorphism, KObject};

pub trait ExtriCategory: Sync {
    type Ob: Clone + Send + Sync + PartialEq + std::fmt::Debug;
    type Mo: Clone + Send + Sync + PartialEq;
    type Cl: Clone + Send + Sync + PartialEq;
    type Tri: Clone + Send + Sync;

    fn name(&self) -> String;
    fn p(&self) -> u32;
    fn objects(&self) -> &[Self::Ob];
    fn describe(&self, x: &Self::Ob) -> String;

    fn hom_basis(&self, x: &Self::Ob, y: &Self::Ob) -> Vec<Self::Mo>;
    fn hom_vec(&self, m: &Self::Mo) -> Vec<u32>;
    fn compose(&self, g: &Self::Mo, f: &Self::Mo) -> Self::Mo;
    fn lin_comb(&self, x: &Self::Ob, y: &Self::Ob, coeffs: &[u32], basis: &[Self::Mo]) -> Self::Mo;

    fn ext_basis(&self, c: &Self::Ob, a: &Self::Ob) -> Result<Vec<Self::Cl>>;
    fn ext_vec(&self, w: &Self::Cl) -> Vec<u32>;
    fn ext_dim(&self, c: &Self::Ob, a: &Self::Ob) -> Result<usize> {
        Ok(self.ext_basis(c, a)?.len())
    }
    fn zero_class(&self, c: &Self::Ob, a: &Self::Ob) -> Result<Self::Cl>;
    fn is_split(&self, w: &Self::Cl) -> bool;
    fn push(&self, a: &Self::Mo, w: &Self::Cl) -> Result<Self::Cl>;
    fn pull(&self, c: &Self::Mo, w: &Self::Cl) -> Result<Self::Cl>;

    /// `X_0 ⊕ ... ⊕ X_n` with inclusions and projections.
    fn direct_sum(&self, xs: &[&Self::Ob]) -> (Self::Ob, Vec<Self::Mo>, Vec<Self::Mo>);
    /// `w1 ⊕ w2` on the direct sums of the end terms.
    fn class_sum(&self, w1: &Self::Cl, w2: &Self::Cl) -> Result<Self::Cl>;

    fn realize(&self, w: &Self::Cl) -> Result<Self::Tri>;
    fn check_tri(&self, t: &Self::Tri) -> Result<()>;
    fn inflation<'t>(&self, t: &'t Self::Tri) -> &'t Self::Mo;
    fn deflation<'t>(&self, t: &'t Self::Tri) -> &'t Self::Mo;
    fn class<'t>(&self, t: &'t Self::Tri) -> &'t Self::Cl;
    fn term(&self, t: &Self::Tri, i: usize) -> Self::Ob;
    fn split_tri(&self, c: &Self::Ob, a: &Self::Ob) -> Result<Self::Tri>;
    fn tri_sum(&self, t1: &Self::Tri, t2: &Self::Tri) -> Result<Self::Tri>;
    fn equivalent(&self, t1: &Self::Tri, t2: &Self::Tri) -> Result<bool>;

    /// `c` completing `(a, b)`.
    fn et3(&self, t1: &Self::Tri, t2: &Self::Tri, a: &Self::Mo, b: &Self::Mo) -> Result<Self::Mo>;
    /// `a` completing `(b, c)`.
    fn et3op(&self, t1: &Self::Tri, t2: &Self::Tri, b: &Self::Mo, c: &Self::Mo) -> Result<Self::Mo>;
    /// Runs and verifies the octahedral axiom; returns the new conflations.
    fn et4(&self, t1: &Self::Tri, t2: &Self::Tri) -> Result<[Self::Tri; 2]>;
    fn et4op(&self, t1: &Self::Tri, t2: &Self::Tri) -> Result<[Self::Tri; 2]>;
}

/// The ambient category on a fixed list of objects.
pub struct Ambient {
    pub backend: Backend,
    pub objects: Vec<Obj>,
    pub labels: Vec<String>,
}

impl ExtriCategory for Ambient {
    type Ob = Obj;
    type Mo = Mor;
    type Cl = ExtClass;
    type Tri = ETriangle;

    fn name(&self) -> String {
        "ambient".into()
    }
    fn p(&self) -> u32 {
        self.backend.p()
    }
    fn objects(&self) -> &[Obj] {
        &self.objects
    }
    fn describe(&self, x: &Obj) -> String {
        match self.objects.iter().position(|o| o == x) {
            Some(i) if i < self.labels.len() => self.labels[i].clone(),
            _ => format!("{:?}", x.dims),
        }
    }
    fn hom_basis(&self, x: &Obj, y: &Obj) -> Vec<Mor> {
        self.backend.hom_basis(x, y).to_vec()
    }
    fn hom_vec(&self, m: &Mor) -> Vec<u32> {
        self.backend.mor_to_vec(m)
    }
    fn compose(&self, g: &Mor, f: &Mor) -> Mor {
        self.backend.compose(g, f)
    }
    fn lin_comb(&self, x: &Obj, y: &Obj, coeffs: &[u32], basis: &[Mor]) -> Mor {
        self.backend.lin_comb(x, y, coeffs, basis)
    }
    fn ext_basis(&self, c: &Obj, a: &Obj) -> Result<Vec<ExtClass>> {
        self.backend.ext_basis(c, a)
    }
    fn ext_dim(&self, c: &Obj, a: &Obj) -> Result<usize> {
        self.backend.ext_dim(c, a)
    }
    fn ext_vec(&self, w: &ExtClass) -> Vec<u32> {
        w.coords.clone()
    }
    fn zero_class(&self, c: &Obj, a: &Obj) -> Result<ExtClass> {
        self.backend.zero_class(c, a)
    }
    fn is_split(&self, w: &ExtClass) -> bool {
        w.is_split()
    }
    fn push(&self, a: &Mor, w: &ExtClass) -> Result<ExtClass> {
        self.backend.act_left(a, w)
    }
    fn pull(&self, c: &Mor, w: &ExtClass) -> Result<ExtClass> {
        self.backend.act_right(c, w)
    }
    fn direct_sum(&self, xs: &[&Obj]) -> (Obj, Vec<Mor>, Vec<Mor>) {
        let ds = self.backend.direct_sum(&xs.iter().map(|x| (*x).clone()).collect::<Vec<_>>());
        (ds.obj, ds.incl, ds.proj)
    }
    fn class_sum(&self, w1: &ExtClass, w2: &ExtClass) -> Result<ExtClass> {
        Ok(self.backend.ext_direct_sum(w1, w2)?.0)
    }
    fn realize(&self, w: &ExtClass) -> Result<ETriangle> {
        self.backend.realize(w)
    }
    fn check_tri(&self, t: &ETriangle) -> Result<()> {
        self.backend.check_etriangle(t)
    }
    fn inflation<'t>(&self, t: &'t ETriangle) -> &'t Mor {
        &t.x
    }
    fn deflation<'t>(&self, t: &'t ETriangle) -> &'t Mor {
        &t.y
    }
    fn class<'t>(&self, t: &'t ETriangle) -> &'t ExtClass {
        &t.cls
    }
    fn term(&self, t: &ETriangle, i: usize) -> Obj {
        [t.a(), t.b(), t.c()][i].clone()
    }
    fn split_tri(&self, c: &Obj, a: &Obj) -> Result<ETriangle> {
        let ds = self.backend.direct_sum(&[a.clone(), c.clone()]);
        Ok(ETriangle { x: ds.incl[0].clone(), y: ds.proj[1].clone(), cls: self.backend.zero_class(c, a)? })
    }
    fn tri_sum(&self, t1: &ETriangle, t2: &ETriangle) -> Result<ETriangle> {
        Ok(self.backend.triangle_sum(t1, t2)?.tri)
    }
    fn equivalent(&self, t1: &ETriangle, t2: &ETriangle) -> Result<bool> {
        Ok(self.backend.conflation_equiv(t1, t2)?.is_some())
    }
    fn et3(&self, t1: &ETriangle, t2: &ETriangle, a: &Mor, b: &Mor) -> Result<Mor> {
        self.backend.et3_complete(t1, t2, a, b)
    }
    fn et3op(&self, t1: &ETriangle, t2: &ETriangle, b: &Mor, c: &Mor) -> Result<Mor> {
        self.backend.et3op_complete(t1, t2, b, c)
    }
    fn et4(&self, t1: &ETriangle, t2: &ETriangle) -> Result<[ETriangle; 2]> {
        let w = self.backend.et4(t1, t2)?;
        Ok([w.t3, w.t4])
    }
    fn et4op(&self, t1: &ETriangle, t2: &ETriangle) -> Result<[ETriangle; 2]> {
        let w = self.backend.et4op(t1, t2)?;
        Ok([w.t3, w.t4])
    }
}

/// The idempotent completion on a fixed list of objects.
pub struct Envelope {
    pub backend: Backend,
    pub objects: Vec<KObject>,
    pub labels: Vec<String>,
    pub variant: FVariant,
    spaces: RwLock<HashMap<(KObject, KObject), Arc<Vec<FExtension>>>>,
}

impl Envelope {
    pub fn new(backend: Backend, objects: Vec<KObject>) -> Self {
        let labels = objects.iter().enumerate().map(|(i, k)| describe_kobject(i, k)).collect();
        Envelope { backend, objects, labels, variant: FVariant::Faithful, spaces: RwLock::default() }
    }

    fn f_basis(&self, c: &KObject, a: &KObject) -> Result<Arc<Vec<FExtension>>> {
        let key = (c.clone(), a.clone());
        if let Some(b) = self.spaces.read().expect("cache").get(&key) {
            return Ok(b.clone());
        }
        let basis = Arc::new(self.backend.f_group_variant(c, a, self.variant)?.basis);
        let mut cache = self.spaces.write().expect("cache");
        if cache.len() > 100_000 {
            cache.clear();
        }
        cache.insert(key, basis.clone());
        Ok(basis)
    }

    pub fn with_variant(mut self, variant: FVariant) -> Self {
        self.variant = variant;
        self
    }
}

fn describe_kobject(i: usize, k: &KObject) -> String {
    match &k.mults {
        Some(m) => format!("K{i}{m:?}"),
        None => format!("K{i}"),
    }
}

impl ExtriCategory for Envelope {
    type Ob = KObject;
    type Mo = KMorphism;
    type Cl = FExtension;
    type Tri = FTriangle;

    fn name(&self) -> String {
        match self.variant {
            FVariant::Faithful => "envelope".into(),
            FVariant::DropProjector => "envelope[drop-projector]".into(),
        }
    }
    fn p(&self) -> u32 {
        self.backend.p()
    }
    fn objects(&self) -> &[KObject] {
        &self.objects
    }
    fn describe(&self, x: &KObject) -> String {
        match self.objects.iter().position(|o| o == x) {
            Some(i) => self.labels[i].clone(),
            None => format!("({:?}, e)", x.base.dims),
        }
    }
    fn hom_basis(&self, x: &KObject, y: &KObject) -> Vec<KMorphism> {
        self.backend.karoubi_hom(x, y)
    }
    fn hom_vec(&self, m: &KMorphism) -> Vec<u32> {
        self.backend.mor_to_vec(&m.map)
    }
    fn compose(&self, g: &KMorphism, f: &KMorphism) -> KMorphism {
        self.backend.k_compose(g, f)
    }
    fn lin_comb(&self, x: &KObject, y: &KObject, coeffs: &[u32], basis: &[KMorphism]) -> KMorphism {
        let maps: Vec<Mor> = basis.iter().map(|k| k.map.clone()).collect();
        KMorphism { src: x.clone(), tgt: y.clone(), map: self.backend.lin_comb(&x.base, &y.base, coeffs, &maps) }
    }
    fn ext_basis(&self, c: &KObject, a: &KObject) -> Result<Vec<FExtension>> {
        Ok(self.f_basis(c, a)?.to_vec())
    }
    fn ext_dim(&self, c: &KObject, a: &KObject) -> Result<usize> {
        Ok(self.f_basis(c, a)?.len())
    }
    fn ext_vec(&self, w: &FExtension) -> Vec<u32> {
        w.omega.coords.clone()
    }
    fn zero_class(&self, c: &KObject, a: &KObject) -> Result<FExtension> {
        self.backend.f_zero(c, a)
    }
    fn is_split(&self, w: &FExtension) -> bool {
        w.is_split()
    }
    fn push(&self, a: &KMorphism, w: &FExtension) -> Result<FExtension> {
        self.backend.f_push(a, w)
    }
    fn pull(&self, c: &KMorphism, w: &FExtension) -> Result<FExtension> {
        self.backend.f_pull(c, w)
    }
    fn direct_sum(&self, xs: &[&KObject]) -> (KObject, Vec<KMorphism>, Vec<KMorphism>) {
        let ds = self.backend.k_direct_sum(xs);
        (ds.obj, ds.incl, ds.proj)
    }
    fn class_sum(&self, w1: &FExtension, w2: &FExtension) -> Result<FExtension> {
        let b = &self.backend;
        let sa = b.k_direct_sum(&[&w1.a, &w2.a]);
        let sc = b.k_direct_sum(&[&w1.c, &w2.c]);
        b.f_add(&b.f_place(w1, &sc, 0, &sa, 0)?, &b.f_place(w2, &sc, 1, &sa, 1)?)
    }
    fn realize(&self, w: &FExtension) -> Result<FTriangle> {
        self.backend.f_realize(w)
    }
    fn check_tri(&self, t: &FTriangle) -> Result<()> {
        self.backend.check_ftriangle(t)
    }
    fn inflation<'t>(&self, t: &'t FTriangle) -> &'t KMorphism {
        &t.x
    }
    fn deflation<'t>(&self, t: &'t FTriangle) -> &'t KMorphism {
        &t.y
    }
    fn class<'t>(&self, t: &'t FTriangle) -> &'t FExtension {
        &t.cls
    }
    fn term(&self, t: &FTriangle, i: usize) -> KObject {
        t.term(i).clone()
    }
    fn split_tri(&self, c: &KObject, a: &KObject) -> Result<FTriangle> {
        Ok(self.backend.f_split(c, a)?.0)
    }
    fn tri_sum(&self, t1: &FTriangle, t2: &FTriangle) -> Result<FTriangle> {
        Ok(self.backend.f_direct_sum(t1, t2)?.0)
    }
    fn equivalent(&self, t1: &FTriangle, t2: &FTriangle) -> Result<bool> {
        Ok(self.backend.f_conflation_equiv(t1, t2)?.is_some())
    }
    fn et3(&self, t1: &FTriangle, t2: &FTriangle, a: &KMorphism, b: &KMorphism) -> Result<KMorphism> {
        Ok(self.backend.f_complete_morphism(t1, t2, &Given::AB(a.clone(), b.clone()))?.c)
    }
    fn et3op(&self, t1: &FTriangle, t2: &FTriangle, b: &KMorphism, c: &KMorphism) -> Result<KMorphism> {
        Ok(self.backend.f_complete_morphism(t1, t2, &Given::BC(b.clone(), c.clone()))?.a)
    }
    fn et4(&self, t1: &FTriangle, t2: &FTriangle) -> Result<[FTriangle; 2]> {
        let w = self.backend.f_et4_compose(t1, t2)?;
        Ok([w.t3, w.t4])
    }
    fn et4op(&self, t1: &FTriangle, t2: &FTriangle) -> Result<[FTriangle; 2]> {
        let w = self.backend.f_et4op_compose(t1, t2)?;
        Ok([w.t3, w.t4])
    }
}
