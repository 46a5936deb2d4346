//! Ambient idempotent-complete extriangulated categories.
//!
//! Two concrete categories share one representation: an object is a family
//! of vector spaces indexed by *slots* together with one matrix per arrow.
//!
//! * [`BackendKind::Quiver`]: representations of an acyclic quiver, slots are
//!   vertices, `E = Ext^1`, conflations are short exact sequences.
//! * [`BackendKind::Graded`]: graded vector spaces supported in a window
//!   `[-N, N]`, slots are degrees (slot `s` is degree `s - N`), no arrows,
//!   `E(C, A) = Hom(C, A[1])`, conflations are exact triangles.

mod decompose;
mod dual;
mod et4;
mod ext;
mod quiver;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

pub use decompose::{Decomposition, Summand, ISO_SEARCH_BOUND};
pub(crate) use decompose::{for_each_vector, space_size};
pub use et4::Et4Witness;
pub use ext::{ETriangle, ExtClass, ExtSpace};
pub use quiver::Quiver;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BackendKind {
    Quiver { quiver: Quiver },
    Graded { window: usize },
}

type HomCache = Arc<RwLock<HashMap<(Obj, Obj), Arc<Vec<Mor>>>>>;
type ExtCache = Arc<RwLock<HashMap<(Obj, Obj), Arc<ExtSpace>>>>;

/// Handle on an ambient category over GF(p).
///
/// Cloning is cheap; clones share a read-mostly cache of hom-space bases.
#[derive(Clone)]
pub struct Backend {
    p: u32,
    kind: BackendKind,
    hom_cache: HomCache,
    ext_cache: ExtCache,
    dual: Arc<OnceLock<Backend>>,
}

impl fmt::Debug for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Backend").field("p", &self.p).field("kind", &self.kind).finish()
    }
}

impl PartialEq for Backend {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.kind == other.kind
    }
}
impl Eq for Backend {}

/// An object: per-slot dimensions and per-arrow matrices (`dim_t x dim_s`).
///
/// Shared behind an `Arc` with a precomputed hash; morphisms carry their
/// endpoints by value.
#[derive(Clone, Serialize, Deserialize)]
#[serde(from = "ObjData", into = "ObjData")]
pub struct Obj(Arc<(ObjData, u64)>);

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ObjData {
    pub dims: Vec<usize>,
    pub arrows: Vec<Mat>,
}

impl From<ObjData> for Obj {
    fn from(d: ObjData) -> Self {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        std::hash::Hash::hash(&d, &mut h);
        Obj(Arc::new((d, std::hash::Hasher::finish(&h))))
    }
}

impl From<Obj> for ObjData {
    fn from(o: Obj) -> Self {
        o.0 .0.clone()
    }
}

impl PartialEq for Obj {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0 .1 == other.0 .1 && self.0 .0 == other.0 .0)
    }
}
impl Eq for Obj {}

impl std::hash::Hash for Obj {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(self.0 .1);
    }
}

impl std::ops::Deref for Obj {
    type Target = ObjData;
    fn deref(&self) -> &ObjData {
        &self.0 .0
    }
}

impl std::fmt::Debug for Obj {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0 .0.fmt(f)
    }
}

impl Obj {
    pub fn new(dims: Vec<usize>, arrows: Vec<Mat>) -> Self {
        ObjData { dims, arrows }.into()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }
}

/// A morphism with one `dim_tgt x dim_src` matrix per slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mor {
    pub src: Obj,
    pub tgt: Obj,
    pub comps: Vec<Mat>,
}

impl Mor {
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Mat::is_zero)
    }

    pub fn is_endo(&self) -> bool {
        self.src == self.tgt
    }
}

/// A direct sum with its canonical inclusions and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub obj: Obj,
    pub incl: Vec<Mor>,
    pub proj: Vec<Mor>,
}

/// Solution set `particular + span(directions)` of a linear system on a hom-space.
#[derive(Clone, Debug)]
pub struct AffineMors {
    pub particular: Mor,
    pub directions: Vec<Mor>,
}

impl Backend {
    pub fn new(p: u32, kind: BackendKind) -> Result<Self> {
        if !linalg::is_supported_prime(p) {
            return Err(Error::Config(format!("prime {p} not supported (use 2, 3, 5 or 7)")));
        }
        Ok(Backend { p, kind, hom_cache: Arc::default(), ext_cache: Arc::default(), dual: Arc::default() })
    }

    pub fn quiver(p: u32, quiver: Quiver) -> Result<Self> {
        Self::new(p, BackendKind::Quiver { quiver })
    }

    pub fn graded(p: u32, window: usize) -> Result<Self> {
        Self::new(p, BackendKind::Graded { window })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn kind(&self) -> &BackendKind {
        &self.kind
    }

    pub fn is_graded(&self) -> bool {
        matches!(self.kind, BackendKind::Graded { .. })
    }

    pub fn window(&self) -> Option<usize> {
        match self.kind {
            BackendKind::Graded { window } => Some(window),
            _ => None,
        }
    }

    pub(crate) fn quiver_ref(&self) -> Option<&Quiver> {
        match &self.kind {
            BackendKind::Quiver { quiver } => Some(quiver),
            _ => None,
        }
    }

    pub fn slots(&self) -> usize {
        match &self.kind {
            BackendKind::Quiver { quiver } => quiver.vertices(),
            BackendKind::Graded { window } => 2 * window + 1,
        }
    }

    pub(crate) fn arrow_list(&self) -> &[(usize, usize)] {
        match &self.kind {
            BackendKind::Quiver { quiver } => quiver.arrows(),
            BackendKind::Graded { .. } => &[],
        }
    }

    // ---------------------------------------------------------------- objects

    pub fn obj(&self, dims: Vec<usize>, arrows: Vec<Mat>) -> Result<Obj> {
        let o = Obj::new(dims, arrows);
        self.check_obj(&o)?;
        Ok(o)
    }

    pub fn check_obj(&self, o: &Obj) -> Result<()> {
        if o.dims.len() != self.slots() {
            return Err(Error::InvalidObject(format!(
                "expected {} slots, got {}",
                self.slots(),
                o.dims.len()
            )));
        }
        let arrows = self.arrow_list();
        if o.arrows.len() != arrows.len() {
            return Err(Error::InvalidObject("wrong number of arrow matrices".into()));
        }
        for (m, &(s, t)) in o.arrows.iter().zip(arrows) {
            if m.shape() != (o.dims[t], o.dims[s]) || m.p() != self.p {
                return Err(Error::InvalidObject(format!("arrow ({s},{t}) has shape {:?}", m.shape())));
            }
        }
        Ok(())
    }

    pub fn zero_obj(&self) -> Obj {
        self.semisimple(&vec![0; self.slots()])
    }

    /// Object with the given slot dimensions and zero arrow maps.
    pub fn semisimple(&self, dims: &[usize]) -> Obj {
        let arrows = self.arrow_list().iter().map(|&(s, t)| Mat::zeros(self.p, dims[t], dims[s])).collect();
        Obj::new(dims.to_vec(), arrows)
    }

    /// Simple representation at vertex `v` (quiver) or `k` in slot `v`.
    pub fn simple(&self, v: usize) -> Obj {
        let mut dims = vec![0; self.slots()];
        dims[v] = 1;
        self.semisimple(&dims)
    }

    /// Indecomposable projective `P_v` of the path algebra (quiver backend);
    /// the simple object in slot `v` for the graded backend.
    pub fn projective(&self, v: usize) -> Obj {
        let Some(q) = self.quiver_ref() else {
            return self.simple(v);
        };
        let paths = q.paths_from(v);
        let dims: Vec<usize> = paths.iter().map(Vec::len).collect();
        let arrows = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, &(s, t))| {
                let mut m = Mat::zeros(self.p, dims[t], dims[s]);
                for (j, path) in paths[s].iter().enumerate() {
                    let mut ext = path.clone();
                    ext.push(ai);
                    let i = paths[t].iter().position(|pp| *pp == ext).expect("path closure");
                    m.set(i, j, 1);
                }
                m
            })
            .collect();
        Obj::new(dims, arrows)
    }

    /// Graded `k` placed in degree `n`.
    pub fn k_deg(&self, n: i64) -> Result<Obj> {
        let w = self.window().ok_or_else(|| Error::BackendMismatch("k_deg needs the graded backend".into()))?;
        let s = self.degree_slot(n).ok_or(Error::WindowOverflow { window: w })?;
        Ok(self.simple(s))
    }

    /// Graded object with multiplicity `m` in each listed degree.
    pub fn graded_obj(&self, mults: &[(i64, usize)]) -> Result<Obj> {
        let w = self.window().ok_or_else(|| Error::BackendMismatch("graded_obj needs the graded backend".into()))?;
        let mut dims = vec![0; self.slots()];
        for &(n, m) in mults {
            let s = self.degree_slot(n).ok_or(Error::WindowOverflow { window: w })?;
            dims[s] += m;
        }
        Ok(self.semisimple(&dims))
    }

    pub fn degree_slot(&self, n: i64) -> Option<usize> {
        let w = self.window()? as i64;
        (-w..=w).contains(&n).then(|| (n + w) as usize)
    }

    pub fn slot_degree(&self, s: usize) -> Option<i64> {
        self.window().map(|w| s as i64 - w as i64)
    }

    /// Degree translation `X[k]` with `(X[k])_d = X_{d-k}`.
    pub fn shift(&self, x: &Obj, k: i64) -> Result<Obj> {
        let w = self.window().ok_or_else(|| Error::BackendMismatch("shift needs the graded backend".into()))?;
        let mut dims = vec![0; self.slots()];
        for (s, &d) in x.dims.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let t = s as i64 + k;
            if t < 0 || t >= self.slots() as i64 {
                return Err(Error::WindowOverflow { window: w });
            }
            dims[t as usize] = d;
        }
        Ok(self.semisimple(&dims))
    }

    pub fn direct_sum(&self, objs: &[Obj]) -> DirectSum {
        let n = self.slots();
        let dims: Vec<usize> = (0..n).map(|i| objs.iter().map(|o| o.dims[i]).sum()).collect();
        let arrows = self
            .arrow_list()
            .iter()
            .enumerate()
            .map(|(ai, _)| Mat::block_diag(self.p, &objs.iter().map(|o| o.arrows[ai].clone()).collect::<Vec<_>>()))
            .collect();
        let obj = Obj::new(dims.clone(), arrows);
        let mut offsets = vec![0usize; n];
        let mut incl = Vec::new();
        let mut proj = Vec::new();
        for o in objs {
            let mut ic = Vec::with_capacity(n);
            let mut pc = Vec::with_capacity(n);
            for i in 0..n {
                let mut m = Mat::zeros(self.p, dims[i], o.dims[i]);
                m.paste(offsets[i], 0, &Mat::identity(self.p, o.dims[i]));
                pc.push(m.transpose());
                ic.push(m);
                offsets[i] += o.dims[i];
            }
            incl.push(Mor { src: o.clone(), tgt: obj.clone(), comps: ic });
            proj.push(Mor { src: obj.clone(), tgt: o.clone(), comps: pc });
        }
        DirectSum { obj, incl, proj }
    }

    pub fn power(&self, x: &Obj, n: usize) -> DirectSum {
        self.direct_sum(&vec![x.clone(); n])
    }

    // -------------------------------------------------------------- morphisms

    pub fn check_mor(&self, m: &Mor) -> Result<()> {
        self.check_obj(&m.src)?;
        self.check_obj(&m.tgt)?;
        if m.comps.len() != self.slots() {
            return Err(Error::InvalidMorphism("wrong number of components".into()));
        }
        for (i, c) in m.comps.iter().enumerate() {
            if c.shape() != (m.tgt.dims[i], m.src.dims[i]) {
                return Err(Error::InvalidMorphism(format!("component {i} has shape {:?}", c.shape())));
            }
        }
        for (ai, &(s, t)) in self.arrow_list().iter().enumerate() {
            if m.tgt.arrows[ai].mul(&m.comps[s]) != m.comps[t].mul(&m.src.arrows[ai]) {
                return Err(Error::InvalidMorphism(format!("square at arrow ({s},{t}) does not commute")));
            }
        }
        Ok(())
    }

    pub fn identity(&self, x: &Obj) -> Mor {
        Mor { src: x.clone(), tgt: x.clone(), comps: x.dims.iter().map(|&d| Mat::identity(self.p, d)).collect() }
    }

    pub fn zero_mor(&self, x: &Obj, y: &Obj) -> Mor {
        Mor {
            src: x.clone(),
            tgt: y.clone(),
            comps: x.dims.iter().zip(&y.dims).map(|(&a, &b)| Mat::zeros(self.p, b, a)).collect(),
        }
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &Mor, f: &Mor) -> Mor {
        assert!(f.tgt == g.src, "compose: target of f is not the source of g");
        Mor {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            comps: g.comps.iter().zip(&f.comps).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    /// Composite of a chain `[h, g, f]` = `h ∘ g ∘ f`.
    pub fn chain(&self, ms: &[&Mor]) -> Mor {
        let mut it = ms.iter().rev();
        let mut acc = (*it.next().expect("non-empty chain")).clone();
        for m in it {
            acc = self.compose(m, &acc);
        }
        acc
    }

    pub fn add(&self, f: &Mor, g: &Mor) -> Mor {
        assert!(f.src == g.src && f.tgt == g.tgt, "add: endpoint mismatch");
        Mor { src: f.src.clone(), tgt: f.tgt.clone(), comps: f.comps.iter().zip(&g.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, f: &Mor, g: &Mor) -> Mor {
        assert!(f.src == g.src && f.tgt == g.tgt, "sub: endpoint mismatch");
        Mor { src: f.src.clone(), tgt: f.tgt.clone(), comps: f.comps.iter().zip(&g.comps).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, f: &Mor, s: u32) -> Mor {
        Mor { src: f.src.clone(), tgt: f.tgt.clone(), comps: f.comps.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn neg(&self, f: &Mor) -> Mor {
        self.scale(f, self.p - 1)
    }

    pub fn lin_comb(&self, x: &Obj, y: &Obj, coeffs: &[u32], basis: &[Mor]) -> Mor {
        let mut acc = self.zero_mor(x, y);
        for (c, b) in coeffs.iter().zip(basis) {
            if *c % self.p != 0 {
                acc = self.add(&acc, &self.scale(b, *c));
            }
        }
        acc
    }

    pub fn is_iso(&self, f: &Mor) -> bool {
        f.comps.iter().all(|c| c.inverse().is_some())
    }

    pub fn inverse(&self, f: &Mor) -> Option<Mor> {
        let comps = f.comps.iter().map(Mat::inverse).collect::<Option<Vec<_>>>()?;
        Some(Mor { src: f.tgt.clone(), tgt: f.src.clone(), comps })
    }

    pub fn is_idempotent(&self, e: &Mor) -> bool {
        e.is_endo() && self.compose(e, e) == *e
    }

    /// Block morphism `⊕ srcs -> ⊕ tgts` with `blocks[row][col]: srcs[col] -> tgts[row]`.
    pub fn block(&self, srcs: &DirectSum, tgts: &DirectSum, blocks: &[Vec<Mor>]) -> Mor {
        let mut acc = self.zero_mor(&srcs.obj, &tgts.obj);
        for (r, row) in blocks.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                if !b.is_zero() {
                    acc = self.add(&acc, &self.chain(&[&tgts.incl[r], b, &srcs.proj[c]]));
                }
            }
        }
        acc
    }

    /// `f ⊕ g ⊕ ...` between direct sums of the sources and targets.
    pub fn mor_sum(&self, ms: &[&Mor]) -> (DirectSum, DirectSum, Mor) {
        let s = self.direct_sum(&ms.iter().map(|m| m.src.clone()).collect::<Vec<_>>());
        let t = self.direct_sum(&ms.iter().map(|m| m.tgt.clone()).collect::<Vec<_>>());
        let n = ms.len();
        let blocks: Vec<Vec<Mor>> = (0..n)
            .map(|r| (0..n).map(|c| if r == c { ms[r].clone() } else { self.zero_mor(&ms[c].src, &ms[r].tgt) }).collect())
            .collect();
        let m = self.block(&s, &t, &blocks);
        (s, t, m)
    }

    // ------------------------------------------------------------- hom-spaces

    /// Number of unconstrained matrix entries of a morphism `X -> Y`.
    pub fn hom_vars(&self, x: &Obj, y: &Obj) -> usize {
        x.dims.iter().zip(&y.dims).map(|(a, b)| a * b).sum()
    }

    pub fn mor_to_vec(&self, m: &Mor) -> Vec<u32> {
        m.comps.iter().flat_map(Mat::flatten).collect()
    }

    pub fn vec_to_mor(&self, x: &Obj, y: &Obj, v: &[u32]) -> Mor {
        let mut off = 0;
        let comps = x
            .dims
            .iter()
            .zip(&y.dims)
            .map(|(&a, &b)| {
                let m = Mat::from_vec(self.p, b, a, v[off..off + a * b].to_vec());
                off += a * b;
                m
            })
            .collect();
        Mor { src: x.clone(), tgt: y.clone(), comps }
    }

    /// Matrix of `f ↦ (Y_a f_s - f_t X_a)_a` on the vectorised entries of `f`.
    ///
    /// Its kernel is `Hom(X, Y)`; its cokernel is `Ext^1(X, Y)` for the quiver backend.
    pub(crate) fn commutation_matrix(&self, x: &Obj, y: &Obj) -> Mat {
        let arrows = self.arrow_list();
        let rows: usize = arrows.iter().map(|&(s, t)| x.dims[s] * y.dims[t]).sum();
        let cols = self.hom_vars(x, y);
        let mut m = Mat::zeros(self.p, rows, cols);
        let mut var_off = vec![0usize; self.slots()];
        let mut acc = 0;
        for i in 0..self.slots() {
            var_off[i] = acc;
            acc += x.dims[i] * y.dims[i];
        }
        let p = self.p;
        let mut row_off = 0;
        for (ai, &(s, t)) in arrows.iter().enumerate() {
            let (xa, ya) = (&x.arrows[ai], &y.arrows[ai]);
            let (ds, dt) = (x.dims[s], y.dims[t]);
            // entry (r, c) of Y_a f_s - f_t X_a, r < dim Y_t, c < dim X_s
            for r in 0..dt {
                for c in 0..ds {
                    let row = row_off + r * ds + c;
                    // Y_a f_s: sum_k Y_a[r,k] f_s[k,c]
                    for k in 0..y.dims[s] {
                        let v = ya.get(r, k);
                        if v != 0 {
                            let col = var_off[s] + k * x.dims[s] + c;
                            m.set(row, col, (m.get(row, col) + v) % p);
                        }
                    }
                    // - f_t X_a: sum_k f_t[r,k] X_a[k,c]
                    for k in 0..x.dims[t] {
                        let v = xa.get(k, c);
                        if v != 0 {
                            let col = var_off[t] + r * x.dims[t] + k;
                            m.set(row, col, (m.get(row, col) + p - v) % p);
                        }
                    }
                }
            }
            row_off += dt * ds;
        }
        m
    }

    /// Basis of `Hom(X, Y)` in deterministic (RREF) order.
    pub fn hom_basis(&self, x: &Obj, y: &Obj) -> Arc<Vec<Mor>> {
        let key = (x.clone(), y.clone());
        if let Some(b) = self.hom_cache.read().expect("cache").get(&key) {
            return b.clone();
        }
        let k = self.commutation_matrix(x, y).kernel_basis();
        let basis: Vec<Mor> = (0..k.cols()).map(|j| self.vec_to_mor(x, y, &k.col(j))).collect();
        let basis = Arc::new(basis);
        let mut cache = self.hom_cache.write().expect("cache");
        if cache.len() > 200_000 {
            cache.clear();
        }
        cache.insert(key, basis.clone());
        basis
    }

    pub fn hom_dim(&self, x: &Obj, y: &Obj) -> usize {
        self.hom_basis(x, y).len()
    }

    /// Coordinates of `m` in `hom_basis(src, tgt)`.
    pub fn hom_coords(&self, m: &Mor) -> Vec<u32> {
        let basis = self.hom_basis(&m.src, &m.tgt);
        let cols: Vec<Vec<u32>> = basis.iter().map(|b| self.mor_to_vec(b)).collect();
        let a = Mat::from_columns(self.p, self.hom_vars(&m.src, &m.tgt), &cols);
        linalg::solve_vec(&a, &self.mor_to_vec(m)).expect("shape").expect("morphism lies in its hom-space")
    }

    /// Solves a linear condition `constraint(m) = rhs` for `m ∈ Hom(X, Y)`.
    ///
    /// `constraint` must be linear. The particular solution is the one with
    /// free variables zeroed; directions span the homogeneous solutions.
    pub fn solve_hom(
        &self,
        x: &Obj,
        y: &Obj,
        constraint: impl Fn(&Mor) -> Vec<u32>,
        rhs: &[u32],
    ) -> Option<AffineMors> {
        let basis = self.hom_basis(x, y);
        let cols: Vec<Vec<u32>> = basis.iter().map(&constraint).collect();
        let a = Mat::from_columns(self.p, rhs.len(), &cols);
        let sol = linalg::solve_vec(&a, rhs).expect("shape")?;
        let particular = self.lin_comb(x, y, &sol, &basis);
        let k = a.kernel_basis();
        let directions = (0..k.cols()).map(|j| self.lin_comb(x, y, &k.col(j), &basis)).collect();
        Some(AffineMors { particular, directions })
    }
}

#[cfg(test)]
mod tests;
