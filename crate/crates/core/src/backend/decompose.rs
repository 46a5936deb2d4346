//! Krull-Schmidt decomposition and isomorphism search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Backend, Mor, Obj};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

/// Largest hom-space (as a set) that is enumerated element by element.
pub const ISO_SEARCH_BOUND: u64 = 15_625;

const RANDOM_SPLIT_TRIES: usize = 512;

/// `obj` is a summand of some `X` via `proj ∘ incl = 1`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub obj: Obj,
    pub incl: Mor,
    pub proj: Mor,
}

/// `X ≅ ⊕ summands`, with `Σ incl_i ∘ proj_i = 1_X`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub whole: Obj,
    pub summands: Vec<Summand>,
}

pub(crate) fn space_size(p: u32, dim: usize) -> Option<u64> {
    (p as u64).checked_pow(dim as u32)
}

/// Calls `f` on every coefficient vector of `GF(p)^n` in lexicographic order
/// until it returns `true`.
pub(crate) fn for_each_vector(p: u32, n: usize, mut f: impl FnMut(&[u32]) -> bool) -> bool {
    let mut v = vec![0u32; n];
    loop {
        if f(&v) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            v[i] += 1;
            if v[i] < p {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

impl Backend {
    /// Splits an idempotent `e: X -> X` through its image.
    pub fn split_idempotent(&self, e: &Mor) -> Summand {
        assert!(self.is_idempotent(e), "split_idempotent needs an idempotent");
        let x = &e.src;
        let mut qs = Vec::with_capacity(self.slots());
        let mut ls = Vec::with_capacity(self.slots());
        for ei in &e.comps {
            let q = ei.column_space();
            let qt = q.transpose();
            let rows: Vec<Vec<u32>> = (0..q.cols())
                .map(|j| {
                    let mut u = vec![0; q.cols()];
                    u[j] = 1;
                    linalg::solve_vec(&qt, &u).expect("shape").expect("full column rank")
                })
                .collect();
            let l = Mat::from_columns(self.p, ei.rows(), &rows).transpose();
            qs.push(q);
            ls.push(l);
        }
        let dims: Vec<usize> = qs.iter().map(Mat::cols).collect();
        let arrows = self
            .arrow_list()
            .iter()
            .enumerate()
            .map(|(ai, &(s, t))| ls[t].mul(&x.arrows[ai]).mul(&qs[s]))
            .collect();
        let obj = Obj::new(dims, arrows);
        let incl = Mor { src: obj.clone(), tgt: x.clone(), comps: qs };
        let proj = Mor {
            src: x.clone(),
            tgt: obj.clone(),
            comps: ls.iter().zip(&e.comps).map(|(l, ei)| l.mul(ei)).collect(),
        };
        Summand { obj, incl, proj }
    }

    fn is_nilpotent(&self, f: &Mor) -> bool {
        f.comps.iter().all(|m| {
            let mut acc = m.clone();
            for _ in 1..m.rows().max(1) {
                acc = acc.mul(m);
            }
            acc.is_zero()
        })
    }

    /// Fitting idempotent of `f`: projection onto `im f^N` along `ker f^N`.
    /// `None` when that splitting is trivial.
    fn fitting_idempotent(&self, f: &Mor) -> Option<Mor> {
        if self.is_nilpotent(f) || self.is_iso(f) {
            return None;
        }
        let n = f.src.total_dim().max(1);
        let mut g = f.clone();
        for _ in 1..n {
            g = self.compose(&g, f);
        }
        let comps = g
            .comps
            .iter()
            .map(|gi| {
                let im = gi.column_space();
                let ker = gi.kernel_basis();
                let basis = im.hstack(&ker);
                let mut d = Mat::zeros(self.p, basis.rows(), basis.rows());
                d.paste(0, 0, &Mat::identity(self.p, im.cols()));
                basis.mul(&d).mul(&basis.inverse().expect("Fitting splitting"))
            })
            .collect();
        Some(Mor { src: f.src.clone(), tgt: f.tgt.clone(), comps })
    }

    /// A nontrivial idempotent of `End(X)`, if one is found.
    fn find_split(&self, x: &Obj) -> Option<Mor> {
        let basis = self.hom_basis(x, x);
        let n = basis.len();
        for b in basis.iter() {
            if let Some(e) = self.fitting_idempotent(b) {
                return Some(e);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for s in 1..self.p {
                    let f = self.add(&basis[i], &self.scale(&basis[j], s));
                    if let Some(e) = self.fitting_idempotent(&f) {
                        return Some(e);
                    }
                }
            }
        }
        if space_size(self.p, n).is_some_and(|s| s <= ISO_SEARCH_BOUND) {
            let mut found = None;
            for_each_vector(self.p, n, |c| {
                found = self.fitting_idempotent(&self.lin_comb(x, x, c, &basis));
                found.is_some()
            });
            return found;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6b61_726f);
        for _ in 0..RANDOM_SPLIT_TRIES {
            let c: Vec<u32> = (0..n).map(|_| rng.gen_range(0..self.p)).collect();
            if let Some(e) = self.fitting_idempotent(&self.lin_comb(x, x, &c, &basis)) {
                return Some(e);
            }
        }
        None
    }

    /// Decomposition into indecomposable summands.
    ///
    /// Graded objects split degreewise. Quiver objects are split along Fitting
    /// idempotents; `End(X)` is enumerated when it has at most
    /// [`ISO_SEARCH_BOUND`] elements and probed by seeded search otherwise.
    pub fn decompose_indec(&self, x: &Obj) -> Decomposition {
        let mut summands = Vec::new();
        if self.is_graded() {
            for (s, &d) in x.dims.iter().enumerate() {
                for k in 0..d {
                    let obj = self.simple(s);
                    let mut ic = self.zero_mor(&obj, x).comps;
                    ic[s].set(k, 0, 1);
                    let incl = Mor { src: obj.clone(), tgt: x.clone(), comps: ic };
                    let proj = Mor { src: x.clone(), tgt: obj.clone(), comps: incl.comps.iter().map(Mat::transpose).collect() };
                    summands.push(Summand { obj, incl, proj });
                }
            }
        } else {
            self.decompose_into(x, &self.identity(x), &self.identity(x), &mut summands);
        }
        Decomposition { whole: x.clone(), summands }
    }

    /// Decomposes `y` where `incl: y -> X`, `proj: X -> y`.
    fn decompose_into(&self, y: &Obj, incl: &Mor, proj: &Mor, out: &mut Vec<Summand>) {
        if y.is_zero() {
            return;
        }
        let Some(e) = self.find_split(y) else {
            out.push(Summand { obj: y.clone(), incl: incl.clone(), proj: proj.clone() });
            return;
        };
        let one = self.identity(y);
        for idem in [e.clone(), self.sub(&one, &e)] {
            let s = self.split_idempotent(&idem);
            let i2 = self.compose(incl, &s.incl);
            let p2 = self.compose(&s.proj, proj);
            self.decompose_into(&s.obj, &i2, &p2, out);
        }
    }

    pub fn is_indecomposable(&self, x: &Obj) -> bool {
        !x.is_zero() && self.decompose_indec(x).summands.len() == 1
    }

    /// An isomorphism `X -> Y`, or `None` when the objects are not isomorphic.
    pub fn find_iso(&self, x: &Obj, y: &Obj) -> Result<Option<Mor>> {
        if x.dims != y.dims {
            return Ok(None);
        }
        if x == y {
            return Ok(Some(self.identity(x)));
        }
        let basis = self.hom_basis(x, y);
        for b in basis.iter() {
            if self.is_iso(b) {
                return Ok(Some(b.clone()));
            }
        }
        if space_size(self.p, basis.len()).is_some_and(|s| s <= ISO_SEARCH_BOUND) {
            let mut found = None;
            for_each_vector(self.p, basis.len(), |c| {
                let f = self.lin_comb(x, y, c, &basis);
                if self.is_iso(&f) {
                    found = Some(f);
                }
                found.is_some()
            });
            return Ok(found);
        }
        // Between indecomposables some basis element is an iso as soon as one
        // exists, so matching indecomposable summands decides the question.
        let dx = self.decompose_indec(x);
        let dy = self.decompose_indec(y);
        if dx.summands.len() != dy.summands.len() {
            return Ok(None);
        }
        if dx.summands.len() == 1 {
            return Ok(None);
        }
        let mut used = vec![false; dy.summands.len()];
        let mut total = self.zero_mor(x, y);
        for sx in &dx.summands {
            let mut matched = false;
            for (j, sy) in dy.summands.iter().enumerate() {
                if used[j] {
                    continue;
                }
                if let Some(f) = self.find_iso(&sx.obj, &sy.obj)? {
                    total = self.add(&total, &self.chain(&[&sy.incl, &f, &sx.proj]));
                    used[j] = true;
                    matched = true;
                    break;
                }
            }
            if !matched {
                return Ok(None);
            }
        }
        if !self.is_iso(&total) {
            return Err(Error::Verification("assembled summand isomorphism is not invertible".into()));
        }
        Ok(Some(total))
    }

    pub fn is_isomorphic(&self, x: &Obj, y: &Obj) -> Result<bool> {
        Ok(self.find_iso(x, y)?.is_some())
    }
}
