//! The octahedral-type axiom in the ambient category.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::decompose::{for_each_vector, space_size, ISO_SEARCH_BOUND};
use super::{AffineMors, Backend, ETriangle, Mor, Obj};
use crate::error::{ensure, Error, Result};
use crate::linalg::Mat;

const RANDOM_TRIES: usize = 4096;

/// Output of [`Backend::et4`].
#[derive(Clone, Debug)]
pub struct Et4Witness {
    /// `A --gf--> C --h'--> E` realizing `δ''`.
    pub t3: ETriangle,
    /// `D --d--> E --e--> F` realizing `f'_* δ'`.
    pub t4: ETriangle,
}

impl Et4Witness {
    pub fn d(&self) -> &Mor {
        &self.t4.x
    }
    pub fn e(&self) -> &Mor {
        &self.t4.y
    }
}

impl Backend {
    /// Picks one element of a product of affine spaces satisfying `accept`.
    ///
    /// Tries the particular solution, then every combination when the total
    /// number is at most [`ISO_SEARCH_BOUND`], then seeded random combinations.
    pub(crate) fn search_affine(&self, spaces: &[&AffineMors], mut accept: impl FnMut(&[Mor]) -> bool) -> Option<Vec<Mor>> {
        let pick = |coeffs: &[u32]| -> Vec<Mor> {
            let mut off = 0;
            spaces
                .iter()
                .map(|sp| {
                    let n = sp.directions.len();
                    let m = self.lin_comb(&sp.particular.src, &sp.particular.tgt, &coeffs[off..off + n], &sp.directions);
                    off += n;
                    self.add(&sp.particular, &m)
                })
                .collect()
        };
        let total: usize = spaces.iter().map(|s| s.directions.len()).sum();
        let base = pick(&vec![0; total]);
        if accept(&base) {
            return Some(base);
        }
        if space_size(self.p, total).is_some_and(|s| s <= ISO_SEARCH_BOUND) {
            let mut found = None;
            for_each_vector(self.p, total, |c| {
                let ms = pick(c);
                if accept(&ms) {
                    found = Some(ms);
                }
                found.is_some()
            });
            return found;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6574_3421);
        for _ in 0..RANDOM_TRIES {
            let c: Vec<u32> = (0..total).map(|_| rng.gen_range(0..self.p)).collect();
            let ms = pick(&c);
            if accept(&ms) {
                return Some(ms);
            }
        }
        None
    }

    /// The mapping cone of `h: A -> C`: a triangle `A -> C -> E` with `E`
    /// built from the cokernel of `h` and the kernel of `h` one degree down.
    fn cone(&self, h: &Mor) -> Result<ETriangle> {
        let (a, c) = (&h.src, &h.tgt);
        let n = self.slots();
        let p = self.p;
        let mut qs = Vec::with_capacity(n);
        let mut ks = Vec::with_capacity(n);
        for s in 0..n {
            qs.push(h.comps[s].cokernel_projection().0);
            ks.push(if s == 0 { Mat::zeros(p, 0, 0) } else { h.comps[s - 1].kernel_basis() });
        }
        let dims: Vec<usize> = (0..n).map(|s| qs[s].rows() + ks[s].cols()).collect();
        let e = self.semisimple(&dims);
        let mut hp = Vec::with_capacity(n);
        let mut coc = Vec::with_capacity(n);
        for s in 0..n {
            let mut m = Mat::zeros(p, dims[s], c.dims[s]);
            m.paste(0, 0, &qs[s]);
            hp.push(m);
            if s == 0 {
                coc.push(Mat::zeros(p, 0, dims[0]));
            } else {
                let mut dm = Mat::zeros(p, a.dims[s - 1], dims[s]);
                dm.paste(0, qs[s].rows(), &ks[s]);
                coc.push(dm);
            }
        }
        let hprime = Mor { src: c.clone(), tgt: e.clone(), comps: hp };
        let cls = self.class_from_cocycle(&e, a, coc)?;
        Ok(ETriangle { x: h.clone(), y: hprime, cls })
    }

    fn cokernel_triangle(&self, h: &Mor) -> Result<ETriangle> {
        let c = &h.tgt;
        let mut projs = Vec::with_capacity(self.slots());
        let mut secs = Vec::with_capacity(self.slots());
        for hi in &h.comps {
            let (pr, se) = hi.cokernel_projection();
            projs.push(pr);
            secs.push(se);
        }
        let dims = projs.iter().map(Mat::rows).collect();
        let arrows = self
            .arrow_list()
            .iter()
            .enumerate()
            .map(|(ai, &(s, t))| projs[t].mul(&c.arrows[ai]).mul(&secs[s]))
            .collect();
        let e = Obj::new(dims, arrows);
        let hprime = Mor { src: c.clone(), tgt: e, comps: projs };
        self.check_mor(&hprime)?;
        let cls = self.class_of(h, &hprime)?;
        Ok(ETriangle { x: h.clone(), y: hprime, cls })
    }

    /// Given `A --f--> B --f'--> D` (class `δ`) and `B --g--> C --g'--> F`
    /// (class `δ'`), builds `A --gf--> C --h'--> E` (class `δ''`) and
    /// `D --d--> E --e--> F` realizing `f'_* δ'` with `d f' = h' g`,
    /// `e h' = g'`, `d^* δ'' = δ` and `f_* δ'' = e^* δ'`. Every condition is
    /// re-verified before returning.
    pub fn et4(&self, t1: &ETriangle, t2: &ETriangle) -> Result<Et4Witness> {
        if t1.b() != t2.a() {
            return Err(Error::EndpointMismatch("et4: middle term of the first triangle must start the second".into()));
        }
        self.check_etriangle(t1)?;
        self.check_etriangle(t2)?;
        let (f, fp, delta) = (&t1.x, &t1.y, &t1.cls);
        let (g, gp, delta2) = (&t2.x, &t2.y, &t2.cls);
        let h = self.compose(g, f);
        let t3 = if self.is_graded() { self.cone(&h)? } else { self.cokernel_triangle(&h)? };
        let hp = &t3.y;
        let e_obj = t3.c().clone();
        let (d_obj, f_obj) = (t1.c().clone(), t2.c().clone());
        let target = self.act_left(fp, delta2)?;

        let hg = self.mor_to_vec(&self.compose(hp, g));
        let space_d = self
            .solve_hom(
                &d_obj,
                &e_obj,
                |d| {
                    let mut v = self.mor_to_vec(&self.compose(d, fp));
                    v.extend(self.act_right(d, &t3.cls).expect("endpoints").coords);
                    v
                },
                &[hg, delta.coords.clone()].concat(),
            )
            .ok_or_else(|| Error::Verification("et4: no d with d f' = h' g and d^* δ'' = δ".into()))?;
        let f_delta = self.act_left(f, &t3.cls)?;
        let space_e = self
            .solve_hom(
                &e_obj,
                &f_obj,
                |e| {
                    let mut v = self.mor_to_vec(&self.compose(e, hp));
                    v.extend(self.act_right(e, delta2).expect("endpoints").coords);
                    v
                },
                &[self.mor_to_vec(gp), f_delta.coords.clone()].concat(),
            )
            .ok_or_else(|| Error::Verification("et4: no e with e h' = g' and e^* δ' = f_* δ''".into()))?;
        let chosen = self
            .search_affine(&[&space_d, &space_e], |ms| {
                let t = ETriangle { x: ms[0].clone(), y: ms[1].clone(), cls: target.clone() };
                self.is_etriangle(&t)
            })
            .ok_or_else(|| Error::Verification("et4: no exact D -> E -> F among the admissible (d, e)".into()))?;
        let t4 = ETriangle { x: chosen[0].clone(), y: chosen[1].clone(), cls: target };
        let w = Et4Witness { t3, t4 };
        self.verify_et4(t1, t2, &w)?;
        Ok(w)
    }

    /// Independent re-check of every property promised by [`Backend::et4`].
    pub fn verify_et4(&self, t1: &ETriangle, t2: &ETriangle, w: &Et4Witness) -> Result<()> {
        let (d, e) = (w.d(), w.e());
        self.check_etriangle(&w.t3)?;
        self.check_etriangle(&w.t4)?;
        ensure(w.t3.x == self.compose(&t2.x, &t1.x), || "et4: first map of the new triangle is not g f".into())?;
        ensure(self.compose(d, &t1.y) == self.compose(&w.t3.y, &t2.x), || "et4: d f' != h' g".into())?;
        ensure(self.compose(e, &w.t3.y) == t2.y, || "et4: e h' != g'".into())?;
        ensure(w.t4.cls == self.act_left(&t1.y, &t2.cls)?, || "et4 (i): D -> E -> F does not realize f'_* δ'".into())?;
        ensure(self.act_right(d, &w.t3.cls)? == t1.cls, || "et4 (ii): d^* δ'' != δ".into())?;
        ensure(self.act_left(&t1.x, &w.t3.cls)? == self.act_right(e, &t2.cls)?, || "et4 (iii): f_* δ'' != e^* δ'".into())?;
        Ok(())
    }

    /// Dual axiom: for `t1: D --f'--> A --f--> F` and `t2: B --g'--> C --g--> A`,
    /// returns `t3: E --h--> C --fg--> F` and `t4: B --e--> E --d--> D`
    /// realizing `f'^* δ'`, computed as [`Backend::et4`] in the opposite
    /// category and checked here.
    pub fn et4op(&self, t1: &ETriangle, t2: &ETriangle) -> Result<Et4Witness> {
        if t2.c() != t1.b() {
            return Err(Error::EndpointMismatch("et4op: last term of the second triangle must be the middle of the first".into()));
        }
        let db = self.dual_backend();
        let w = db.et4(&self.dual_triangle(t1)?, &self.dual_triangle(t2)?)?;
        let w = Et4Witness { t3: db.dual_triangle(&w.t3)?, t4: db.dual_triangle(&w.t4)? };
        self.verify_et4op(t1, t2, &w)?;
        Ok(w)
    }

    pub fn verify_et4op(&self, t1: &ETriangle, t2: &ETriangle, w: &Et4Witness) -> Result<()> {
        self.check_etriangle(&w.t3)?;
        self.check_etriangle(&w.t4)?;
        let (e, d) = (&w.t4.x, &w.t4.y);
        ensure(w.t3.y == self.compose(&t1.y, &t2.y), || "et4op: deflation of the new triangle is not f g".into())?;
        ensure(self.compose(&w.t3.x, e) == t2.x, || "et4op: h e != g'".into())?;
        ensure(self.compose(&t1.x, d) == self.compose(&t2.y, &w.t3.x), || "et4op: f' d != g h".into())?;
        ensure(w.t4.cls == self.act_right(&t1.x, &t2.cls)?, || "et4op (i): B -> E -> D does not realize f'^* δ'".into())?;
        ensure(self.act_left(d, &w.t3.cls)? == t1.cls, || "et4op (ii): d_* δ'' != δ".into())?;
        ensure(self.act_left(e, &t2.cls)? == self.act_right(&t1.y, &w.t3.cls)?, || "et4op (iii): e_* δ' != f^* δ''".into())
    }
}
