//! Extensions and conflations in the idempotent completion.
//!
//! An extension of `(C, e_c)` by `(A, e_a)` is an ambient class `ω ∈ E(C, A)`
//! with `e_c^* ω = ω = (e_a)_* ω`. Conflations are built by realizing `ω` in
//! the ambient category and cutting the middle term down by an idempotent.

use serde::Serialize;

use crate::backend::{Backend, DirectSum, ETriangle, ExtClass, Mor};
use crate::error::{ensure, Error, Result};
use crate::extri::Replace;
use crate::karoubi::{Evaluation, KDirectSum, KMorphism, KObject};
use crate::linalg::Mat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FExtension {
    pub omega: ExtClass,
    pub c: KObject,
    pub a: KObject,
}

impl FExtension {
    pub fn is_split(&self) -> bool {
        self.omega.is_split()
    }
}

#[derive(Clone, Debug)]
pub struct FTriangle {
    pub x: KMorphism,
    pub y: KMorphism,
    pub cls: FExtension,
}

impl FTriangle {
    pub fn a(&self) -> &KObject {
        &self.x.src
    }
    pub fn b(&self) -> &KObject {
        &self.x.tgt
    }
    pub fn c(&self) -> &KObject {
        &self.y.tgt
    }
    pub fn term(&self, i: usize) -> &KObject {
        [self.a(), self.b(), self.c()][i]
    }
}

/// `F(C~, A~)` as a subspace of the ambient coordinates of `E(C, A)`.
#[derive(Clone, Debug)]
pub struct FSpace {
    pub c: KObject,
    pub a: KObject,
    /// Columns are ambient coordinates of the basis elements.
    pub span: Mat,
    pub basis: Vec<FExtension>,
}

impl FSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Deliberate corruptions of the construction, for mutation tests.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum FVariant {
    #[default]
    Faithful,
    /// Forget `e_c^*` when cutting out `F` from `E`.
    DropProjector,
}

/// Which two members of a morphism of conflations are given.
#[derive(Clone, Debug)]
pub enum Given {
    AB(KMorphism, KMorphism),
    AC(KMorphism, KMorphism),
    BC(KMorphism, KMorphism),
}

/// Morphism `(a, b, c)` between two `F`-conflations.
#[derive(Clone, Debug)]
pub struct FTriangleMorphism {
    pub a: KMorphism,
    pub b: KMorphism,
    pub c: KMorphism,
}

impl Backend {
    pub fn f_extension(&self, omega: ExtClass, c: KObject, a: KObject) -> Result<FExtension> {
        if omega.c != c.base || omega.a != a.base {
            return Err(Error::EndpointMismatch("class does not live on the bases".into()));
        }
        ensure(self.act_right(&c.idem, &omega)? == omega, || "e_c^* ω != ω".into())?;
        ensure(self.act_left(&a.idem, &omega)? == omega, || "(e_a)_* ω != ω".into())?;
        Ok(FExtension { omega, c, a })
    }

    pub fn f_zero(&self, c: &KObject, a: &KObject) -> Result<FExtension> {
        Ok(FExtension { omega: self.zero_class(&c.base, &a.base)?, c: c.clone(), a: a.clone() })
    }

    fn same_ends(&self, w1: &FExtension, w2: &FExtension) -> Result<()> {
        if w1.c != w2.c || w1.a != w2.a {
            return Err(Error::EndpointMismatch("F-extensions over different objects".into()));
        }
        Ok(())
    }

    pub fn f_add(&self, w1: &FExtension, w2: &FExtension) -> Result<FExtension> {
        self.same_ends(w1, w2)?;
        Ok(FExtension { omega: self.ext_add(&w1.omega, &w2.omega)?, ..w1.clone() })
    }

    pub fn f_scale(&self, w: &FExtension, s: u32) -> Result<FExtension> {
        Ok(FExtension { omega: self.ext_scale(&w.omega, s)?, ..w.clone() })
    }

    /// Matrix of `ω ↦ (e_a)_* e_c^* ω` on ambient coordinates.
    pub fn f_projector(&self, c: &KObject, a: &KObject, variant: FVariant) -> Result<Mat> {
        match variant {
            FVariant::Faithful => self.ext_action(&c.idem, &a.idem),
            FVariant::DropProjector => self.ext_action(&self.identity(&c.base), &a.idem),
        }
    }

    pub fn f_group(&self, c: &KObject, a: &KObject) -> Result<FSpace> {
        self.f_group_variant(c, a, FVariant::Faithful)
    }

    pub fn f_group_variant(&self, c: &KObject, a: &KObject, variant: FVariant) -> Result<FSpace> {
        let span = self.f_projector(c, a, variant)?.column_space();
        let basis = (0..span.cols())
            .map(|j| {
                let omega = self.class_from_coords(&c.base, &a.base, &span.col(j))?;
                Ok(FExtension { omega, c: c.clone(), a: a.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FSpace { c: c.clone(), a: a.clone(), span, basis })
    }

    /// Coordinates of `w` in the basis of `space`, if it lies there.
    pub fn f_coords(&self, space: &FSpace, w: &FExtension) -> Result<Option<Vec<u32>>> {
        if space.span.cols() == 0 {
            return Ok(w.is_split().then(Vec::new));
        }
        let rhs = Mat::column(self.p(), &w.omega.coords);
        Ok(space.span.solve(&rhs)?.map(|m| m.col(0)))
    }

    /// `α_• ω` for `α: A~ -> A~'`.
    pub fn f_push(&self, alpha: &KMorphism, w: &FExtension) -> Result<FExtension> {
        if alpha.src != w.a {
            return Err(Error::EndpointMismatch("f_push: source is not the first term".into()));
        }
        let omega = self.act_left(&alpha.map, &w.omega)?;
        ensure(self.act_right(&w.c.idem, &omega)? == omega, || "α_* ω is not fixed by e_c^*".into())?;
        Ok(FExtension { omega, c: w.c.clone(), a: alpha.tgt.clone() })
    }

    /// `β^• ω` for `β: C~' -> C~`.
    pub fn f_pull(&self, beta: &KMorphism, w: &FExtension) -> Result<FExtension> {
        if beta.tgt != w.c {
            return Err(Error::EndpointMismatch("f_pull: target is not the last term".into()));
        }
        let omega = self.act_right(&beta.map, &w.omega)?;
        ensure(self.act_left(&w.a.idem, &omega)? == omega, || "β^* ω is not fixed by (e_a)_*".into())?;
        Ok(FExtension { omega, c: beta.src.clone(), a: w.a.clone() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// An `F`-conflation evaluated in the ambient category.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub tri: ETriangle,
    pub ev: [Evaluation; 3],
}

impl Backend {
    pub fn f_act(&self, alpha: &KMorphism, w: &FExtension, side: Side) -> Result<FExtension> {
        match side {
            Side::Left => self.f_push(alpha, w),
            Side::Right => self.f_pull(alpha, w),
        }
    }

    /// Realizes `ω` ambiently as `A -> B -> C`, lifts `(e_a, e_c)` to a middle
    /// map, replaces it by an idempotent `r` and returns `A~ -> (B, r) -> C~`.
    pub fn f_realize(&self, w: &FExtension) -> Result<FTriangle> {
        let t = self.realize(&w.omega)?;
        let (ea, ec) = (&w.a.idem, &w.c.idem);
        let b = self.realize_morphism(&t, &t, ea, ec)?;
        let r = self.idempotent_replace(&t, ea, &b, ec, Replace::Second)?;
        let mid = self.kobject(t.b().clone(), r.clone())?;
        let x = self.kmor(&w.a, &mid, self.compose(&t.x, ea))?;
        let y = self.kmor(&mid, &w.c, self.compose(ec, &t.y))?;
        let out = FTriangle { x, y, cls: w.clone() };
        self.check_ftriangle(&out)?;
        Ok(out)
    }

    /// Class of the evaluated conflation: `(p_A)_* (q_C)^* ω`.
    pub fn evaluate_class(&self, w: &FExtension, ea: &Evaluation, ec: &Evaluation) -> Result<ExtClass> {
        self.act_left(&ea.p, &self.act_right(&ec.q, &w.omega)?)
    }

    /// Inverse of `evaluate_class`: `(q_A)_* (p_C)^* θ`.
    pub fn lift_class(&self, theta: &ExtClass, c: &KObject, a: &KObject, ec: &Evaluation, ea: &Evaluation) -> Result<FExtension> {
        let omega = self.act_left(&ea.q, &self.act_right(&ec.p, theta)?)?;
        self.f_extension(omega, c.clone(), a.clone())
    }

    pub fn evaluate_ftriangle(&self, t: &FTriangle) -> Result<Evaluated> {
        let ev = [self.evaluate(t.a()), self.evaluate(t.b()), self.evaluate(t.c())];
        let x = self.evaluate_mor(&t.x, &ev[0], &ev[1]);
        let y = self.evaluate_mor(&t.y, &ev[1], &ev[2]);
        let cls = self.evaluate_class(&t.cls, &ev[0], &ev[2])?;
        Ok(Evaluated { tri: ETriangle { x, y, cls }, ev })
    }

    /// Checks that `t` is an `F`-conflation: the maps are morphisms of the
    /// completion, the class is an `F`-extension and the evaluation is an
    /// ambient conflation for the evaluated class.
    pub fn check_ftriangle(&self, t: &FTriangle) -> Result<()> {
        self.check_kmor(&t.x)?;
        self.check_kmor(&t.y)?;
        if t.x.tgt != t.y.src || t.cls.a != *t.a() || t.cls.c != *t.c() {
            return Err(Error::EndpointMismatch("F-triangle terms do not match".into()));
        }
        self.f_extension(t.cls.omega.clone(), t.cls.c.clone(), t.cls.a.clone())?;
        ensure(self.compose(&t.y.map, &t.x.map).is_zero(), || "y x != 0".into())?;
        let e = self.evaluate_ftriangle(t)?;
        self.check_etriangle(&e.tri).map_err(|err| Error::NotATriangle(format!("evaluation: {err}")))
    }

    pub fn is_ftriangle(&self, t: &FTriangle) -> bool {
        self.check_ftriangle(t).is_ok()
    }

    /// Lifts an ambient conflation between evaluations back to the completion.
    pub fn lift_triangle(&self, t: &ETriangle, ks: [&KObject; 3], ev: [&Evaluation; 3]) -> Result<FTriangle> {
        let x = self.kmor(ks[0], ks[1], self.chain(&[&ev[1].q, &t.x, &ev[0].p]))?;
        let y = self.kmor(ks[1], ks[2], self.chain(&[&ev[2].q, &t.y, &ev[1].p]))?;
        let cls = self.lift_class(&t.cls, ks[2], ks[0], ev[2], ev[0])?;
        Ok(FTriangle { x, y, cls })
    }

    /// `F`-conflations in equivalence: an isomorphism `b: B~ -> B~'` in the
    /// completion with `b x = x'` and `y' b = y`.
    pub fn f_conflation_equiv(&self, t1: &FTriangle, t2: &FTriangle) -> Result<Option<KMorphism>> {
        if t1.a() != t2.a() || t1.c() != t2.c() {
            return Err(Error::EndpointMismatch("f_conflation_equiv needs equal end terms".into()));
        }
        if t1.cls != t2.cls {
            return Ok(None);
        }
        let (e1, e2) = (self.evaluate_ftriangle(t1)?, self.evaluate_ftriangle(t2)?);
        let Some(b) = self.conflation_equiv(&e1.tri, &e2.tri)? else {
            return Ok(None);
        };
        Ok(Some(self.kmor(t1.b(), t2.b(), self.chain(&[&e2.ev[1].q, &b, &e1.ev[1].p]))?))
    }

    /// The split conflation `A~ -> A~ ⊕ C~ -> C~`.
    pub fn f_split(&self, c: &KObject, a: &KObject) -> Result<(FTriangle, KDirectSum)> {
        let ds = self.k_direct_sum(&[a, c]);
        let t = FTriangle { x: ds.incl[0].clone(), y: ds.proj[1].clone(), cls: self.f_zero(c, a)? };
        self.check_ftriangle(&t)?;
        Ok((t, ds))
    }
}

impl Backend {
    /// `Σ incl_i ∘ blocks[i][j] ∘ proj_j`, with `None` for zero blocks.
    pub fn k_block(&self, src: &KDirectSum, tgt: &KDirectSum, blocks: &[Vec<Option<&Mor>>]) -> KMorphism {
        let mut map = self.zero_mor(&src.obj.base, &tgt.obj.base);
        for (i, row) in blocks.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                if let Some(m) = m {
                    map = self.add(&map, &self.chain(&[&tgt.incl[i].map, m, &src.proj[j].map]));
                }
            }
        }
        KMorphism { src: src.obj.clone(), tgt: tgt.obj.clone(), map }
    }

    /// `(incl_i)_• (proj_j)^• ω`: places `ω` in the `(j, i)` block.
    pub fn f_place(&self, w: &FExtension, cs: &KDirectSum, j: usize, as_: &KDirectSum, i: usize) -> Result<FExtension> {
        self.f_push(&as_.incl[i], &self.f_pull(&cs.proj[j], w)?)
    }

    /// `(proj_i)_• (incl_j)^• ω`: the `(j, i)` block of `ω`.
    pub fn f_block(&self, w: &FExtension, cs: &KDirectSum, j: usize, as_: &KDirectSum, i: usize) -> Result<FExtension> {
        self.f_push(&as_.proj[i], &self.f_pull(&cs.incl[j], w)?)
    }

    pub fn f_direct_sum(&self, t1: &FTriangle, t2: &FTriangle) -> Result<(FTriangle, [KDirectSum; 3])> {
        let sa = self.k_direct_sum(&[t1.a(), t2.a()]);
        let sb = self.k_direct_sum(&[t1.b(), t2.b()]);
        let sc = self.k_direct_sum(&[t1.c(), t2.c()]);
        let x = self.k_block(&sa, &sb, &[vec![Some(&t1.x.map), None], vec![None, Some(&t2.x.map)]]);
        let y = self.k_block(&sb, &sc, &[vec![Some(&t1.y.map), None], vec![None, Some(&t2.y.map)]]);
        let cls = self.f_add(&self.f_place(&t1.cls, &sc, 0, &sa, 0)?, &self.f_place(&t2.cls, &sc, 1, &sa, 1)?)?;
        Ok((FTriangle { x, y, cls }, [sa, sb, sc]))
    }

    pub fn check_f_morphism(&self, m: &FTriangleMorphism, t1: &FTriangle, t2: &FTriangle) -> Result<()> {
        for (k, s, t) in [(&m.a, t1.a(), t2.a()), (&m.b, t1.b(), t2.b()), (&m.c, t1.c(), t2.c())] {
            self.check_kmor(k)?;
            if k.src != *s || k.tgt != *t {
                return Err(Error::EndpointMismatch("morphism of F-triangles has wrong ends".into()));
            }
        }
        ensure(self.compose(&m.b.map, &t1.x.map) == self.compose(&t2.x.map, &m.a.map), || "b x != x' a".into())?;
        ensure(self.compose(&m.c.map, &t1.y.map) == self.compose(&t2.y.map, &m.b.map), || "c y != y' b".into())?;
        ensure(self.f_push(&m.a, &t1.cls)? == self.f_pull(&m.c, &t2.cls)?, || "a_• ω != c^• ω'".into())
    }

    /// Completes two members of a morphism of `F`-conflations to all three.
    ///
    /// Both conflations are moved to the ambient category along their
    /// evaluations (which serve as the retraction data `π i = 1`), completed
    /// there and the missing member is moved back.
    pub fn f_complete_morphism(&self, t1: &FTriangle, t2: &FTriangle, given: &Given) -> Result<FTriangleMorphism> {
        let (e1, e2) = (self.evaluate_ftriangle(t1)?, self.evaluate_ftriangle(t2)?);
        let down = |k: &KMorphism, i: usize| self.evaluate_mor(k, &e1.ev[i], &e2.ev[i]);
        let up = |m: &Mor, i: usize| self.kmor(t1.term(i), t2.term(i), self.chain(&[&e2.ev[i].q, m, &e1.ev[i].p]));
        let m = match given {
            Given::AB(a, b) => {
                if self.compose(&b.map, &t1.x.map) != self.compose(&t2.x.map, &a.map) {
                    return Err(Error::Precondition("b x != x' a".into()));
                }
                let c = self.et3_complete(&e1.tri, &e2.tri, &down(a, 0), &down(b, 1))?;
                FTriangleMorphism { a: a.clone(), b: b.clone(), c: up(&c, 2)? }
            }
            Given::BC(b, c) => {
                if self.compose(&c.map, &t1.y.map) != self.compose(&t2.y.map, &b.map) {
                    return Err(Error::Precondition("c y != y' b".into()));
                }
                let a = self.et3op_complete(&e1.tri, &e2.tri, &down(b, 1), &down(c, 2))?;
                FTriangleMorphism { a: up(&a, 0)?, b: b.clone(), c: c.clone() }
            }
            Given::AC(a, c) => {
                if self.f_push(a, &t1.cls)? != self.f_pull(c, &t2.cls)? {
                    return Err(Error::Precondition("a_• ω != c^• ω'".into()));
                }
                let b = self.realize_morphism(&e1.tri, &e2.tri, &down(a, 0), &down(c, 2))?;
                FTriangleMorphism { a: a.clone(), b: up(&b, 1)?, c: c.clone() }
            }
        };
        self.check_f_morphism(&m, t1, t2)?;
        Ok(m)
    }
}

/// Output of [`Backend::f_et4_compose`].
#[derive(Clone, Debug)]
pub struct FEt4Witness {
    /// `A~ --gf--> C~ --h'--> K~`.
    pub t3: FTriangle,
    /// `D~ --d--> K~ --e--> F~` realizing `f'_• ω'`.
    pub t4: FTriangle,
    /// The ambient cone `H` of the padded diagram and `s: ιH -> K~ ⊕ Y~ ⊕ Z~`.
    pub s: KMorphism,
    pub s_inv: KMorphism,
}

impl FEt4Witness {
    pub fn d(&self) -> &KMorphism {
        &self.t4.x
    }
    pub fn e(&self) -> &KMorphism {
        &self.t4.y
    }
}

impl Backend {
    /// The evaluation of a biproduct together with the induced decomposition
    /// of the evaluated object into the evaluated summands.
    pub fn evaluate_sum(&self, ds: &KDirectSum) -> (Evaluation, DirectSum) {
        let whole = self.evaluate(&ds.obj);
        let parts: Vec<Evaluation> = ds.incl.iter().map(|i| self.evaluate(&i.src)).collect();
        let incl = ds.incl.iter().zip(&parts).map(|(i, e)| self.evaluate_mor(i, e, &whole)).collect();
        let proj = ds.proj.iter().zip(&parts).map(|(p, e)| self.evaluate_mor(p, &whole, e)).collect();
        let sum = DirectSum { obj: whole.obj.clone(), incl, proj };
        (whole, sum)
    }

    /// Octahedral axiom in the completion.
    ///
    /// Pads `t1: A~ -> B~ -> D~` and `t2: B~ -> C~ -> F~` by the complements
    /// `X~, Y~, Z~` of `A~, D~, F~`, runs the ambient axiom on the padded
    /// conflations, identifies the cone with `K~ ⊕ Y~ ⊕ Z~` where `K~` realizes
    /// `f'_• ω'`, and reads off the `K~`-components.
    pub fn f_et4_compose(&self, t1: &FTriangle, t2: &FTriangle) -> Result<FEt4Witness> {
        if t1.b() != t2.a() {
            return Err(Error::EndpointMismatch("f_et4: middle term of the first triangle must start the second".into()));
        }
        self.check_ftriangle(t1)?;
        self.check_ftriangle(t2)?;
        let (a, b, d) = (t1.a(), t1.b(), t1.c());
        let (c, f) = (t2.b(), t2.c());
        let (x, y, z) = (self.complement(a), self.complement(d), self.complement(f));
        let (ix, iy, iz) = (&x.idem, &y.idem, &z.idem);
        let s_ax = self.k_direct_sum(&[a, &x]);
        let s_bxy = self.k_direct_sum(&[b, &x, &y]);
        let s_dy = self.k_direct_sum(&[d, &y]);
        let s_cxyz = self.k_direct_sum(&[c, &x, &y, &z]);
        let s_fz = self.k_direct_sum(&[f, &z]);

        let p9 = FTriangle {
            x: self.k_block(&s_ax, &s_bxy, &[vec![Some(&t1.x.map), None], vec![None, Some(ix)], vec![None, None]]),
            y: self.k_block(&s_bxy, &s_dy, &[vec![Some(&t1.y.map), None, None], vec![None, None, Some(iy)]]),
            cls: self.f_place(&t1.cls, &s_dy, 0, &s_ax, 0)?,
        };
        let p11 = FTriangle {
            x: self.k_block(
                &s_bxy,
                &s_cxyz,
                &[vec![Some(&t2.x.map), None, None], vec![None, Some(ix), None], vec![None, None, Some(iy)], vec![None, None, None]],
            ),
            y: self.k_block(&s_cxyz, &s_fz, &[vec![Some(&t2.y.map), None, None, None], vec![None, None, None, Some(iz)]]),
            cls: self.f_place(&t2.cls, &s_fz, 0, &s_bxy, 0)?,
        };
        let (e9, e11) = (self.evaluate_ftriangle(&p9)?, self.evaluate_ftriangle(&p11)?);
        self.check_etriangle(&e9.tri)?;
        self.check_etriangle(&e11.tri)?;
        let w = self.et4(&e9.tri, &e11.tri)?;
        let ih = self.iota(w.t3.c());
        let i_k = self.kmor(&s_cxyz.obj, &ih, self.compose(&w.t3.y, &e11.ev[1].p))?;
        let alpha = self.kmor(&s_dy.obj, &ih, self.compose(w.d(), &e9.ev[2].p))?;
        let beta = self.kmor(&ih, &s_fz.obj, self.compose(&e11.ev[2].q, w.e()))?;
        let w3 = self.f_extension(self.act_left(&e9.ev[0].q, &w.t3.cls)?, ih.clone(), s_ax.obj.clone())?;

        // K~ from f'_• ω', and the sum of D~ -> K~ -> F~ with Y~ -> Y~ ⊕ Z~ -> Z~
        let w41 = self.f_push(&t1.y, &t2.cls)?;
        let t4 = self.f_realize(&w41)?;
        let kk = t4.b().clone();
        let s_kyz = self.k_direct_sum(&[&kk, &y, &z]);
        let sum = FTriangle {
            x: self.k_block(&s_dy, &s_kyz, &[vec![Some(&t4.x.map), None], vec![None, Some(iy)], vec![None, None]]),
            y: self.k_block(&s_kyz, &s_fz, &[vec![Some(&t4.y.map), None, None], vec![None, None, Some(iz)]]),
            cls: self.f_place(&w41, &s_fz, 0, &s_dy, 0)?,
        };
        let esum = self.evaluate_ftriangle(&sum)?;
        let sbar = self
            .conflation_equiv(&w.t4, &esum.tri)?
            .ok_or_else(|| Error::Verification("f_et4: the padded fourth triangle is not equivalent to K~ ⊕ Y~ ⊕ Z~".into()))?;
        let sbar_inv = self.inverse(&sbar).expect("equivalence is invertible");
        let s = self.kmor(&ih, &s_kyz.obj, self.compose(&esum.ev[1].q, &sbar))?;
        let s_inv = self.kmor(&s_kyz.obj, &ih, self.compose(&sbar_inv, &esum.ev[1].p))?;
        ensure(self.k_compose(&s, &alpha) == sum.x, || "f_et4: s α != (p1 0; 0 1; 0 0)".into())?;
        ensure(self.k_compose(&beta, &s_inv) == sum.y, || "f_et4: β s' != (p2 0 0; 0 0 1)".into())?;

        let si = self.k_compose(&s, &i_k);
        let s1i1 = self.k_compose(&s_kyz.proj[0], &self.k_compose(&si, &s_cxyz.incl[0]));
        let w5 = self.f_pull(&s_inv, &w3)?;
        let w3_new = self.f_block(&w5, &s_kyz, 0, &s_ax, 0)?;
        ensure(self.f_block(&w5, &s_kyz, 1, &s_ax, 0)?.is_split(), || "f_et4: s2'^• ω31 != 0".into())?;
        for j in 0..3 {
            ensure(self.f_block(&w5, &s_kyz, j, &s_ax, 1)?.is_split(), || "f_et4: ω5 is nonzero on X~".into())?;
        }
        let t3 = FTriangle { x: self.k_compose(&t2.x, &t1.x), y: s1i1, cls: w3_new };
        let (p1, p2) = (&t4.x, &t4.y);
        ensure(self.k_compose(&t3.y, &t2.x) == self.k_compose(p1, &t1.y), || "f_et4: s1 i1 g != p1 f'".into())?;
        ensure(self.k_compose(p2, &t3.y) == t2.y, || "f_et4: p2 s1 i1 != g'".into())?;
        ensure(self.f_pull(p1, &t3.cls)? == t1.cls, || "f_et4: p1^• ω'' != ω".into())?;
        ensure(self.f_push(&t1.x, &t3.cls)? == self.f_pull(p2, &t2.cls)?, || "f_et4: f_• ω'' != p2^• ω'".into())?;
        self.check_padded_third(&t3, &x, &y, &s_kyz, &si, &s_cxyz)?;
        self.check_ftriangle(&t3)?;
        Ok(FEt4Witness { t3, t4, s, s_inv })
    }

    /// `X~ ⊕ A~ -> X~ ⊕ Y~ ⊕ C~ -> Y~ ⊕ K~` is a conflation whose extracted
    /// `(A~, C~, K~)`-part is equivalent to `t3`.
    fn check_padded_third(&self, t3: &FTriangle, x: &KObject, y: &KObject, s_kyz: &KDirectSum, si: &KMorphism, s_cxyz: &KDirectSum) -> Result<()> {
        let (a, c, k) = (t3.a(), t3.b(), t3.c());
        let s_xa = self.k_direct_sum(&[x, a]);
        let s_xyc = self.k_direct_sum(&[x, y, c]);
        let s_yk = self.k_direct_sum(&[y, k]);
        let s2i1 = self.k_compose(&s_kyz.proj[1], &self.k_compose(si, &s_cxyz.incl[0]));
        let d2 = FTriangle {
            x: self.k_block(&s_xa, &s_xyc, &[vec![Some(&x.idem), None], vec![None, None], vec![None, Some(&t3.x.map)]]),
            y: self.k_block(&s_xyc, &s_yk, &[vec![None, Some(&y.idem), Some(&s2i1.map)], vec![None, None, Some(&t3.y.map)]]),
            cls: self.f_place(&t3.cls, &s_yk, 1, &s_xa, 1)?,
        };
        let ev = self.evaluate_ftriangle(&d2)?;
        self.check_etriangle(&ev.tri).map_err(|e| Error::Verification(format!("f_et4: padded third triangle: {e}")))?;
        let (_, sa) = self.evaluate_sum(&s_xa);
        let (_, sb) = self.evaluate_sum(&s_xyc);
        let (_, sc) = self.evaluate_sum(&s_yk);
        let got = self.extract_from_padded(&ev.tri, &sa, &sb, &sc)?;
        let want = self.evaluate_ftriangle(t3)?;
        ensure(self.conflation_equiv(&got, &want.tri)?.is_some(), || "f_et4: extracted triangle differs".into())
    }
}

impl Backend {
    /// `ω` in the opposite category, as an extension of `A~*` by `C~*`.
    pub fn dual_fextension(&self, w: &FExtension) -> Result<FExtension> {
        Ok(FExtension { omega: self.dual_class(&w.omega)?, c: self.dual_kobject(&w.a), a: self.dual_kobject(&w.c) })
    }

    /// `C~* -> B~* -> A~*` in the dual backend.
    pub fn dual_ftriangle(&self, t: &FTriangle) -> Result<FTriangle> {
        Ok(FTriangle { x: self.dual_kmor(&t.y), y: self.dual_kmor(&t.x), cls: self.dual_fextension(&t.cls)? })
    }

    /// Dual octahedral axiom: for `t1: D~ -> A~ --f--> F~` and
    /// `t2: B~ -> C~ --g--> A~`, a conflation `K~ -> C~ --fg--> F~` and
    /// `B~ -> K~ -> D~`, obtained by running [`Backend::f_et4_compose`] in the
    /// opposite category. The returned triangles live in `self`.
    pub fn f_et4op_compose(&self, t1: &FTriangle, t2: &FTriangle) -> Result<FEt4Witness> {
        if t2.c() != t1.b() {
            return Err(Error::EndpointMismatch("f_et4op: last term of the second triangle must be the middle of the first".into()));
        }
        let db = self.dual_backend();
        let w = db.f_et4_compose(&self.dual_ftriangle(t1)?, &self.dual_ftriangle(t2)?)?;
        let t3 = db.dual_ftriangle(&w.t3)?;
        let t4 = db.dual_ftriangle(&w.t4)?;
        self.check_ftriangle(&t3)?;
        self.check_ftriangle(&t4)?;
        ensure(t3.y == self.k_compose(&t1.y, &t2.y), || "f_et4op: deflation of the new triangle is not f g".into())?;
        ensure(self.dual_kobject(&db.dual_kobject(t1.a())) == *t1.a(), || "f_et4op: duality is not involutive".into())?;
        // t4 is B~ --e--> K~ --d--> D~ and t3 is K~ --h--> C~ --fg--> F~
        let (e, d) = (&t4.x, &t4.y);
        ensure(self.k_compose(&t3.x, e) == t2.x, || "f_et4op: h e != g'".into())?;
        ensure(self.k_compose(&t1.x, d) == self.k_compose(&t2.y, &t3.x), || "f_et4op: f' d != g h".into())?;
        ensure(t4.cls == self.f_pull(&t1.x, &t2.cls)?, || "f_et4op: B~ -> K~ -> D~ does not realize f'^• ω'".into())?;
        ensure(self.f_push(d, &t3.cls)? == t1.cls, || "f_et4op: d_• ω'' != ω".into())?;
        ensure(self.f_push(e, &t2.cls)? == self.f_pull(&t1.y, &t3.cls)?, || "f_et4op: e_• ω' != f^• ω''".into())?;
        let (s, s_inv) = (db.dual_kmor(&w.s_inv), db.dual_kmor(&w.s));
        Ok(FEt4Witness { t3, t4, s, s_inv })
    }
}
