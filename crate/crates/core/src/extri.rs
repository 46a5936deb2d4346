//! Backend-independent algebra of extensions and conflations.

use serde::{Deserialize, Serialize};

use crate::backend::{AffineMors, Backend, DirectSum, ETriangle, ExtClass, Mor, Obj, ISO_SEARCH_BOUND};
use crate::error::{ensure, Error, Result};
use crate::linalg::{solve_vec, Mat};

/// `(a, c): δ -> δ'` with `a_* δ = c^* δ'`.
#[derive(Clone, Debug)]
pub struct ExtMorphism {
    pub a: Mor,
    pub c: Mor,
}

/// `(a, b, c)` between two conflations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleMorphism {
    pub a: Mor,
    pub b: Mor,
    pub c: Mor,
}

/// Which member of a self-morphism `(p, b, q)` gets replaced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Replace {
    First,
    Second,
    Third,
}

/// A conflation that is the direct sum of two, with the decompositions of its terms.
#[derive(Clone, Debug)]
pub struct TriangleSum {
    pub tri: ETriangle,
    pub a: DirectSum,
    pub b: DirectSum,
    pub c: DirectSum,
}

impl Backend {
    pub fn check_ext_morphism(&self, m: &ExtMorphism, d: &ExtClass, d2: &ExtClass) -> Result<()> {
        ensure(self.act_left(&m.a, d)? == self.act_right(&m.c, d2)?, || "a_* δ != c^* δ'".into())
    }

    pub fn check_triangle_morphism(&self, m: &TriangleMorphism, t1: &ETriangle, t2: &ETriangle) -> Result<()> {
        ensure(self.compose(&m.b, &t1.x) == self.compose(&t2.x, &m.a), || "b x != x' a".into())?;
        ensure(self.compose(&m.c, &t1.y) == self.compose(&t2.y, &m.b), || "c y != y' b".into())?;
        self.check_ext_morphism(&ExtMorphism { a: m.a.clone(), c: m.c.clone() }, &t1.cls, &t2.cls)
    }

    /// `δ ⊕ δ' ∈ E(C ⊕ C', A ⊕ A')` with the decompositions `(C ⊕ C', A ⊕ A')`.
    pub fn ext_direct_sum(&self, d1: &ExtClass, d2: &ExtClass) -> Result<(ExtClass, DirectSum, DirectSum)> {
        let cs = self.direct_sum(&[d1.c.clone(), d2.c.clone()]);
        let as_ = self.direct_sum(&[d1.a.clone(), d2.a.clone()]);
        let part = |d: &ExtClass, i: usize| -> Result<ExtClass> { self.act_left(&as_.incl[i], &self.act_right(&cs.proj[i], d)?) };
        let sum = self.ext_add(&part(d1, 0)?, &part(d2, 1)?)?;
        Ok((sum, cs, as_))
    }

    /// `Δ^* ∇_* (δ ⊕ δ')`, the Baer sum.
    pub fn ext_add_baer(&self, d1: &ExtClass, d2: &ExtClass) -> Result<ExtClass> {
        if d1.c != d2.c || d1.a != d2.a {
            return Err(Error::EndpointMismatch("ext_add_baer".into()));
        }
        let (s, cs, as_) = self.ext_direct_sum(d1, d2)?;
        let codiag = self.add(&as_.proj[0], &as_.proj[1]);
        let diag = self.add(&cs.incl[0], &cs.incl[1]);
        self.act_right(&diag, &self.act_left(&codiag, &s)?)
    }

    /// Matrix of `f ↦ f^* δ` on `Hom(X, C) -> E(X, A)`.
    pub fn yoneda_lower(&self, d: &ExtClass, x: &Obj) -> Result<Mat> {
        let basis = self.hom_basis(x, &d.c);
        let rows = self.ext_dim(x, &d.a)?;
        let cols = basis.iter().map(|f| Ok(self.act_right(f, d)?.coords)).collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_columns(self.p(), rows, &cols))
    }

    /// Matrix of `g ↦ g_* δ` on `Hom(A, X) -> E(C, X)`.
    pub fn yoneda_upper(&self, d: &ExtClass, x: &Obj) -> Result<Mat> {
        let basis = self.hom_basis(&d.a, x);
        let rows = self.ext_dim(&d.c, x)?;
        let cols = basis.iter().map(|g| Ok(self.act_left(g, d)?.coords)).collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_columns(self.p(), rows, &cols))
    }

    /// Middle maps `b` with `b x = x'`, `y' b = y` for conflations on the same ends.
    fn equiv_candidates(&self, t1: &ETriangle, t2: &ETriangle) -> Option<AffineMors> {
        let rhs = [self.mor_to_vec(&t2.x), self.mor_to_vec(&t1.y)].concat();
        self.solve_hom(
            t1.b(),
            t2.b(),
            |b| [self.mor_to_vec(&self.compose(b, &t1.x)), self.mor_to_vec(&self.compose(&t2.y, b))].concat(),
            &rhs,
        )
    }

    /// An isomorphism `b: B -> B'` with `b x = x'` and `y' b = y`, when the two
    /// conflations realize the same class; `None` when the classes differ or no
    /// such `b` exists.
    pub fn conflation_equiv(&self, t1: &ETriangle, t2: &ETriangle) -> Result<Option<Mor>> {
        if t1.a() != t2.a() || t1.c() != t2.c() {
            return Err(Error::EndpointMismatch("conflation_equiv needs equal end terms".into()));
        }
        if t1.cls != t2.cls || t1.b().dims != t2.b().dims {
            return Ok(None);
        }
        if t1 == t2 {
            return Ok(Some(self.identity(t1.b())));
        }
        let Some(space) = self.equiv_candidates(t1, t2) else {
            return Ok(None);
        };
        let exhaustive = crate::backend::space_size(self.p(), space.directions.len()).is_some_and(|s| s <= ISO_SEARCH_BOUND);
        match self.search_affine(&[&space], |ms| self.is_iso(&ms[0])) {
            Some(mut v) => Ok(Some(v.remove(0))),
            None if exhaustive => Ok(None),
            None => Err(Error::BoundExceeded("conflation_equiv: no invertible middle map in the sampled candidates".into())),
        }
    }

    /// A middle map `b` realizing the extension morphism `(a, c): δ -> δ'`.
    pub fn realize_morphism(&self, t1: &ETriangle, t2: &ETriangle, a: &Mor, c: &Mor) -> Result<Mor> {
        self.check_ext_morphism(&ExtMorphism { a: a.clone(), c: c.clone() }, &t1.cls, &t2.cls)
            .map_err(|e| Error::Precondition(e.to_string()))?;
        if let Some(b) = self.canonical_middle(t1, t2, a, c)? {
            return Ok(b);
        }
        let rhs = [self.mor_to_vec(&self.compose(&t2.x, a)), self.mor_to_vec(&self.compose(c, &t1.y))].concat();
        let sol = self
            .solve_hom(
                t1.b(),
                t2.b(),
                |b| [self.mor_to_vec(&self.compose(b, &t1.x)), self.mor_to_vec(&self.compose(&t2.y, b))].concat(),
                &rhs,
            )
            .ok_or_else(|| Error::Verification("no middle map realizes the extension morphism".into()))?;
        Ok(sol.particular)
    }

    /// On quivers, when both conflations are in the form produced by `realize`
    /// (`A -> A ⊕ C -> C` with the cocycle in the corner), the middle map is
    /// `[[a, h], [0, c]]` with `h: C -> A'` solving a commutation system.
    fn canonical_middle(&self, t1: &ETriangle, t2: &ETriangle, a: &Mor, c: &Mor) -> Result<Option<Mor>> {
        if self.window().is_some() || !self.is_canonical(t1) || !self.is_canonical(t2) {
            return Ok(None);
        }
        let (c1, a2) = (t1.c(), t2.a());
        let (phi1, phi2) = (&t1.cls.cocycle, &t2.cls.cocycle);
        let mut rhs = Vec::new();
        for (ai, &(s, t)) in self.arrow_list().iter().enumerate() {
            rhs.extend(a.comps[t].mul(&phi1[ai]).sub(&phi2[ai].mul(&c.comps[s])).flatten());
        }
        let Some(h) = solve_vec(&self.commutation_matrix(c1, a2), &rhs)? else {
            return Ok(None);
        };
        let mut off = 0;
        let comps = (0..self.slots())
            .map(|v| {
                let (ra, rc, ca, cc) = (a2.dims[v], t2.c().dims[v], t1.a().dims[v], c1.dims[v]);
                let mut m = Mat::zeros(self.p(), ra + rc, ca + cc);
                m.paste(0, 0, &a.comps[v]);
                m.paste(0, ca, &Mat::from_vec(self.p(), ra, cc, h[off..off + ra * cc].to_vec()));
                m.paste(ra, ca, &c.comps[v]);
                off += ra * cc;
                m
            })
            .collect();
        Ok(Some(Mor { src: t1.b().clone(), tgt: t2.b().clone(), comps }))
    }

    fn is_canonical(&self, t: &ETriangle) -> bool {
        let (ad, cd) = (&t.a().dims, &t.c().dims);
        t.b().dims.iter().zip(ad.iter().zip(cd)).all(|(b, (a, c))| *b == a + c)
            && t.x.comps.iter().zip(ad).all(|(m, &n)| m.submatrix(0, n, 0, n).is_identity() && m.submatrix(n, m.rows() - n, 0, n).is_zero())
            && t.y.comps.iter().zip(ad).all(|(m, &n)| m.submatrix(0, m.rows(), 0, n).is_zero() && m.submatrix(0, m.rows(), n, m.cols() - n).is_identity())
            && self.arrow_list().iter().enumerate().all(|(ai, &(s, tt))| {
                let m = &t.b().arrows[ai];
                m.submatrix(ad[tt], cd[tt], 0, ad[s]).is_zero() && m.submatrix(0, ad[tt], ad[s], cd[s]) == t.cls.cocycle[ai]
            })
    }

    /// Given `b x = x' a`, a `c` with `c y = y' b` and `a_* δ = c^* δ'`
    /// (the deterministic solution, free variables zeroed).
    pub fn et3_complete(&self, t1: &ETriangle, t2: &ETriangle, a: &Mor, b: &Mor) -> Result<Mor> {
        if self.compose(b, &t1.x) != self.compose(&t2.x, a) {
            return Err(Error::Precondition("et3: square b x = x' a does not commute".into()));
        }
        let ad = self.act_left(a, &t1.cls)?;
        let rhs = [self.mor_to_vec(&self.compose(&t2.y, b)), ad.coords].concat();
        let sol = self
            .solve_hom(
                t1.c(),
                t2.c(),
                |c| {
                    let mut v = self.mor_to_vec(&self.compose(c, &t1.y));
                    v.extend(self.act_right(c, &t2.cls).expect("endpoints").coords);
                    v
                },
                &rhs,
            )
            .ok_or_else(|| Error::Verification("et3: no completing c".into()))?;
        Ok(sol.particular)
    }

    /// Given `y' b = c y`, an `a` with `x' a = b x` and `a_* δ = c^* δ'`.
    pub fn et3op_complete(&self, t1: &ETriangle, t2: &ETriangle, b: &Mor, c: &Mor) -> Result<Mor> {
        if self.compose(&t2.y, b) != self.compose(c, &t1.y) {
            return Err(Error::Precondition("et3op: square y' b = c y does not commute".into()));
        }
        let cd = self.act_right(c, &t2.cls)?;
        let rhs = [self.mor_to_vec(&self.compose(b, &t1.x)), cd.coords].concat();
        let sol = self
            .solve_hom(
                t1.a(),
                t2.a(),
                |a| {
                    let mut v = self.mor_to_vec(&self.compose(&t2.x, a));
                    v.extend(self.act_left(a, &t1.cls).expect("endpoints").coords);
                    v
                },
                &rhs,
            )
            .ok_or_else(|| Error::Verification("et3op: no completing a".into()))?;
        Ok(sol.particular)
    }

    /// Replaces one member of a self-morphism `(p, b, q)` of `t`, the other two
    /// being idempotent, by an idempotent so that the triple stays a morphism.
    pub fn idempotent_replace(&self, t: &ETriangle, p: &Mor, b: &Mor, q: &Mor, which: Replace) -> Result<Mor> {
        let m = TriangleMorphism { a: p.clone(), b: b.clone(), c: q.clone() };
        self.check_triangle_morphism(&m, t, t).map_err(|e| Error::Precondition(e.to_string()))?;
        let (x, others) = match which {
            Replace::First => (p, [b, q]),
            Replace::Second => (b, [p, q]),
            Replace::Third => (q, [p, b]),
        };
        if !others.iter().all(|o| self.is_idempotent(o)) {
            return Err(Error::Precondition("the two fixed members must be idempotent".into()));
        }
        let h = self.sub(&self.compose(x, x), x);
        if which == Replace::Second {
            // h x = 0, so h factors through the deflation and h^2 = 0 below
            ensure(self.compose(&h, &t.x).is_zero(), || "(b^2 - b) x != 0".into())?;
        }
        ensure(self.compose(&h, &h).is_zero(), || "square of x^2 - x is not zero".into())?;
        let two_xh = self.scale(&self.compose(x, &h), 2);
        let r = self.sub(&self.add(x, &h), &two_xh);
        ensure(self.is_idempotent(&r), || "replacement is not idempotent".into())?;
        let replaced = match which {
            Replace::First => TriangleMorphism { a: r.clone(), b: b.clone(), c: q.clone() },
            Replace::Second => TriangleMorphism { a: p.clone(), b: r.clone(), c: q.clone() },
            Replace::Third => TriangleMorphism { a: p.clone(), b: b.clone(), c: r.clone() },
        };
        self.check_triangle_morphism(&replaced, t, t)?;
        Ok(r)
    }

    pub fn triangle_sum(&self, t1: &ETriangle, t2: &ETriangle) -> Result<TriangleSum> {
        let (sa, sb, xs) = self.mor_sum(&[&t1.x, &t2.x]);
        let (_, sc, ys) = self.mor_sum(&[&t1.y, &t2.y]);
        let (cls, _, _) = self.ext_direct_sum(&t1.cls, &t2.cls)?;
        let tri = ETriangle { x: xs, y: ys, cls };
        Ok(TriangleSum { tri, a: sa, b: sb, c: sc })
    }

    /// Splits a block-diagonal conflation into its two blocks, checking that
    /// each block is a conflation for its class.
    pub fn summand_triangles(&self, t: &ETriangle, sa: &DirectSum, sb: &DirectSum, sc: &DirectSum) -> Result<(ETriangle, ETriangle)> {
        for ds in [sa, sb, sc] {
            if ds.incl.len() != 2 {
                return Err(Error::Precondition("summand_triangles needs two summands per term".into()));
            }
        }
        if sa.obj != *t.a() || sb.obj != *t.b() || sc.obj != *t.c() {
            return Err(Error::Precondition("decompositions do not match the triangle".into()));
        }
        let block = |pr: &Mor, m: &Mor, inc: &Mor| self.chain(&[pr, m, inc]);
        for (i, j) in [(0usize, 1usize), (1, 0)] {
            ensure(block(&sb.proj[i], &t.x, &sa.incl[j]).is_zero(), || "x is not block diagonal".into())?;
            ensure(block(&sc.proj[i], &t.y, &sb.incl[j]).is_zero(), || "y is not block diagonal".into())?;
            let off = self.act_left(&sa.proj[i], &self.act_right(&sc.incl[j], &t.cls)?)?;
            ensure(off.is_split(), || "class is not block diagonal".into())?;
        }
        let part = |i: usize| -> Result<ETriangle> {
            let x = block(&sb.proj[i], &t.x, &sa.incl[i]);
            let y = block(&sc.proj[i], &t.y, &sb.incl[i]);
            let cls = self.act_left(&sa.proj[i], &self.act_right(&sc.incl[i], &t.cls)?)?;
            let tri = ETriangle { x, y, cls };
            self.check_etriangle(&tri)?;
            Ok(tri)
        };
        Ok((part(0)?, part(1)?))
    }

    /// Moves `t` along isomorphisms `x: A -> A'`, `y: B -> B'`, `z: C -> C'`;
    /// the new class is `x_* (z^{-1})^* δ`.
    pub fn transport_iso(&self, t: &ETriangle, x: &Mor, y: &Mor, z: &Mor) -> Result<ETriangle> {
        let (xi, yi, zi) = match (self.inverse(x), self.inverse(y), self.inverse(z)) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(Error::Precondition("transport_iso needs isomorphisms".into())),
        };
        let nx = self.chain(&[y, &t.x, &xi]);
        let ny = self.chain(&[z, &t.y, &yi]);
        let cls = self.act_left(x, &self.act_right(&zi, &t.cls)?)?;
        let out = ETriangle { x: nx, y: ny, cls };
        self.check_etriangle(&out)?;
        Ok(out)
    }

    /// From a conflation `A ⊕ X -> (A ⊕ C) ⊕ Y -> C ⊕ Z` whose `(A, C)`-part is
    /// the sum of the split conflations `A = A -> 0` and `0 -> C = C`, recovers
    /// the `(X, Y, Z)`-part as a conflation.
    ///
    /// `sa = [A, X]`, `sb = [A, C, Y]`, `sc = [C, Z]`.
    pub fn extract_from_padded(&self, t: &ETriangle, sa: &DirectSum, sb: &DirectSum, sc: &DirectSum) -> Result<ETriangle> {
        if sa.incl.len() != 2 || sb.incl.len() != 3 || sc.incl.len() != 2 {
            return Err(Error::Precondition("extract_from_padded: wrong number of summands".into()));
        }
        if sa.obj != *t.a() || sb.obj != *t.b() || sc.obj != *t.c() {
            return Err(Error::Precondition("extract_from_padded: decompositions do not match".into()));
        }
        let blk = |pr: &Mor, m: &Mor, inc: &Mor| self.chain(&[pr, m, inc]);
        let shape = |ok: bool, what: &str| ensure(ok, || format!("extract_from_padded: {what}")).map_err(|e| Error::Precondition(e.to_string()));
        let a_id = self.identity(&sa.incl[0].src);
        let c_id = self.identity(&sc.incl[0].src);
        shape(blk(&sb.proj[0], &t.x, &sa.incl[0]) == a_id, "x does not restrict to 1 on A")?;
        shape(blk(&sb.proj[1], &t.x, &sa.incl[0]).is_zero() && blk(&sb.proj[2], &t.x, &sa.incl[0]).is_zero(), "x on A leaves A")?;
        shape(blk(&sc.proj[0], &t.y, &sb.incl[1]) == c_id, "y does not restrict to 1 on C")?;
        shape(blk(&sc.proj[0], &t.y, &sb.incl[0]).is_zero() && blk(&sc.proj[1], &t.y, &sb.incl[0]).is_zero(), "y on A is not zero")?;
        shape(blk(&sc.proj[1], &t.y, &sb.incl[1]).is_zero(), "y maps C into Z")?;
        let dcc = self.act_left(&sa.proj[0], &self.act_right(&sc.incl[0], &t.cls)?)?;
        let dxc = self.act_left(&sa.proj[1], &self.act_right(&sc.incl[0], &t.cls)?)?;
        shape(dcc.is_split() && dxc.is_split(), "class is nonzero on C")?;
        // m = [[1, u1], [0, 1]], n = [[1, 0, 0], [0, 1, v], [0, 0, 1]], l = 1
        let u1 = blk(&sb.proj[0], &t.x, &sa.incl[1]);
        let v = blk(&sc.proj[0], &t.y, &sb.incl[2]);
        let one_a = self.identity(t.a());
        let m = self.add(&one_a, &self.chain(&[&sa.incl[0], &u1, &sa.proj[1]]));
        let one_b = self.identity(t.b());
        let n = self.add(&one_b, &self.chain(&[&sb.incl[1], &v, &sb.proj[2]]));
        let l = self.identity(t.c());
        let t2 = self.transport_iso(t, &m, &n, &l)?;
        // regroup B as (A ⊕ C) ⊕ Y
        let ac = self.direct_sum(&[sb.incl[0].src.clone(), sb.incl[1].src.clone()]);
        let ac_in = self.add(&self.compose(&sb.incl[0], &ac.proj[0]), &self.compose(&sb.incl[1], &ac.proj[1]));
        let ac_out = self.add(&self.compose(&ac.incl[0], &sb.proj[0]), &self.compose(&ac.incl[1], &sb.proj[1]));
        let sb2 = DirectSum { obj: sb.obj.clone(), incl: vec![ac_in, sb.incl[2].clone()], proj: vec![ac_out, sb.proj[2].clone()] };
        let (_, xyz) = self.summand_triangles(&t2, sa, &sb2, sc)?;
        Ok(xyz)
    }
}
