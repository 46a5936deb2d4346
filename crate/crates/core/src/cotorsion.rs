//! Cotorsion pairs given as additive closures of finitely many
//! indecomposables, and their lift to the idempotent completion.

use serde::Serialize;

use crate::axioms::{AxiomReport, Failure, Sampling};
use crate::backend::{for_each_vector, Backend, ETriangle, Obj};
use crate::error::{ensure, Error, Result};
use crate::extri::Replace;
use crate::fext::FTriangle;
use crate::karoubi::KObject;

/// Classes tried per candidate object before moving on.
const CLASS_CAP: usize = 4096;

/// `add` of a list of indecomposables, membership up to isomorphism.
#[derive(Clone, Debug)]
pub struct SubcatSpec {
    pub name: String,
    pub members: Vec<(String, Obj)>,
}

impl SubcatSpec {
    pub fn new(name: impl Into<String>, members: Vec<(String, Obj)>) -> Self {
        SubcatSpec { name: name.into(), members }
    }

    fn has_indec(&self, b: &Backend, x: &Obj) -> Result<bool> {
        for (_, m) in &self.members {
            if m.dims == x.dims && b.is_isomorphic(m, x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Every indecomposable summand of `x` is isomorphic to a member.
    pub fn contains(&self, b: &Backend, x: &Obj) -> Result<bool> {
        for s in b.decompose_indec(x).summands {
            if !self.has_indec(b, &s.obj)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership of the image of the idempotent.
    pub fn contains_k(&self, b: &Backend, k: &KObject) -> Result<bool> {
        self.contains(b, &b.evaluate(k).obj)
    }

    /// The same subcategory seen in the dual backend.
    pub fn dual(&self, b: &Backend) -> SubcatSpec {
        let members = self.members.iter().map(|(l, m)| (format!("D{l}"), b.dual_obj(m))).collect();
        SubcatSpec { name: format!("{}^op", self.name), members }
    }
}

#[derive(Clone, Debug)]
pub struct CotorsionPair {
    pub t_cat: SubcatSpec,
    pub f_cat: SubcatSpec,
}

impl CotorsionPair {
    /// `(F^op, T^op)` in the dual backend; right approximations there are
    /// left approximations here.
    fn dual(&self, b: &Backend) -> CotorsionPair {
        CotorsionPair { t_cat: self.f_cat.dual(b), f_cat: self.t_cat.dual(b) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Orthogonality {
    pub ext: AxiomReport,
    pub hom: AxiomReport,
}

impl Orthogonality {
    pub fn pass(&self) -> bool {
        self.ext.pass && self.hom.pass
    }
}

/// Approximation triangles of one object; `None` means none was found at
/// the multiplicity bound.
#[derive(Clone, Debug)]
pub struct Approximations {
    pub left: Option<ETriangle>,
    pub right: Option<ETriangle>,
}

/// Output of the lifting construction for one object of the completion.
#[derive(Clone, Debug)]
pub struct CompletionApprox {
    pub tri: FTriangle,
    pub ambient: ETriangle,
    /// Whether `f^2 = f` holds on the nose, not just after acting on `δ`.
    pub h_equals_f: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    pub hypotheses: Orthogonality,
    pub reports: Vec<AxiomReport>,
}

impl LiftReport {
    pub fn pass(&self) -> bool {
        self.hypotheses.pass() && self.reports.iter().all(|r| r.pass)
    }
}

/// All vectors in `[0, bound]^n`, by total then lexicographically.
fn multiplicities(n: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..=bound).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

impl Backend {
    /// `𝔼(T, F) = 0` and `Hom(T, F) = 0` on pairs of members.
    pub fn check_orthogonality(&self, pair: &CotorsionPair, s: &Sampling) -> Result<Orthogonality> {
        let cat = format!("{}x{}", pair.t_cat.name, pair.f_cat.name);
        let pairs: Vec<(&(String, Obj), &(String, Obj))> =
            pair.t_cat.members.iter().flat_map(|t| pair.f_cat.members.iter().map(move |f| (t, f))).collect();
        let idx = s.select(pairs.len(), 11);
        let picked: Vec<_> = idx.iter().map(|&i| pairs[i]).collect();
        let ext = s.map(&picked, |((lt, t), (lf, f))| match self.ext_dim(t, f) {
            Ok(0) => None,
            Ok(d) => Some(Failure { instance: format!("({lt}, {lf})"), witness: format!("dim E = {d}") }),
            Err(e) => Some(Failure { instance: format!("({lt}, {lf})"), witness: e.to_string() }),
        });
        let hom = s.map(&picked, |((lt, t), (lf, f))| {
            let d = self.hom_dim(t, f);
            (d != 0).then(|| Failure { instance: format!("({lt}, {lf})"), witness: format!("dim Hom = {d}") })
        });
        Ok(Orthogonality {
            ext: AxiomReport::new("E-orthogonal", cat.clone(), pairs.len(), picked.len(), ext),
            hom: AxiomReport::new("Hom-orthogonal", cat, pairs.len(), picked.len(), hom),
        })
    }

    /// For indecomposable `c`: a conflation `F0 -> T0 -> c` (left) or
    /// `c -> F0 -> T0` (right), trying candidate ends by total multiplicity.
    fn search_approx(&self, pair: &CotorsionPair, c: &Obj, left: bool, bound: usize) -> Result<Option<ETriangle>> {
        let (cands, target) = if left { (&pair.f_cat, &pair.t_cat) } else { (&pair.t_cat, &pair.f_cat) };
        for mults in multiplicities(cands.members.len(), bound) {
            let objs: Vec<Obj> = cands
                .members
                .iter()
                .zip(&mults)
                .flat_map(|((_, m), &k)| std::iter::repeat(m.clone()).take(k))
                .collect();
            let x0 = self.direct_sum(&objs).obj;
            let (cc, aa) = if left { (c, &x0) } else { (&x0, c) };
            let basis = match self.ext_basis(cc, aa) {
                Ok(b) => b,
                Err(Error::WindowOverflow { .. }) => continue,
                Err(e) => return Err(e),
            };
            let mut found = None;
            let mut tried = 0;
            let mut err = None;
            for_each_vector(self.p(), basis.len(), |v| {
                tried += 1;
                let step = || -> Result<Option<ETriangle>> {
                    let t = self.realize(&self.ext_lin_comb(cc, aa, v, &basis)?)?;
                    Ok(target.contains(self, t.b())?.then_some(t))
                };
                match step() {
                    Ok(Some(t)) => found = Some(t),
                    Ok(None) => {}
                    Err(e) => err = Some(e),
                }
                found.is_some() || err.is_some() || tried >= CLASS_CAP
            });
            if let Some(e) = err {
                return Err(e);
            }
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Approximates every indecomposable summand, sums the triangles and
    /// moves the end back onto `c` along the decomposition.
    fn approx(&self, pair: &CotorsionPair, c: &Obj, left: bool, bound: usize) -> Result<Option<ETriangle>> {
        let dec = self.decompose_indec(c);
        let mut parts = Vec::new();
        for s in &dec.summands {
            match self.search_approx(pair, &s.obj, left, bound)? {
                Some(t) => parts.push(t),
                None => return Ok(None),
            }
        }
        let (sa, _, x) = self.mor_sum(&parts.iter().map(|t| &t.x).collect::<Vec<_>>());
        let (_, sc, y) = self.mor_sum(&parts.iter().map(|t| &t.y).collect::<Vec<_>>());
        let mut cls = self.zero_class(&sc.obj, &sa.obj)?;
        for (i, t) in parts.iter().enumerate() {
            let piece = self.act_left(&sa.incl[i], &self.act_right(&sc.proj[i], &t.cls)?)?;
            cls = self.ext_add(&cls, &piece)?;
        }
        let summed = ETriangle { x, y, cls };
        self.check_etriangle(&summed)?;
        let s_out = if left { &sc } else { &sa };
        let mut to_c = self.zero_mor(&s_out.obj, c);
        for (i, s) in dec.summands.iter().enumerate() {
            to_c = self.add(&to_c, &self.compose(&s.incl, &s_out.proj[i]));
        }
        let t = if left {
            self.transport_iso(&summed, &self.identity(summed.a()), &self.identity(summed.b()), &to_c)?
        } else {
            self.transport_iso(&summed, &to_c, &self.identity(summed.b()), &self.identity(summed.c()))?
        };
        Ok(Some(t))
    }

    /// Left and right approximation conflations of `c` with ends built from
    /// at most `bound` copies of each member.
    pub fn find_approximations(&self, pair: &CotorsionPair, c: &Obj, bound: usize) -> Result<Approximations> {
        Ok(Approximations { left: self.approx(pair, c, true, bound)?, right: self.approx(pair, c, false, bound)? })
    }

    /// `(F, g) -> (T, r) -> K` with `F ∈ F`, `T ∈ T` built from an ambient
    /// approximation of the base of `K`.
    pub fn approx_in_completion(&self, pair: &CotorsionPair, k: &KObject, bound: usize) -> Result<CompletionApprox> {
        let d = self
            .approx(pair, &k.base, true, bound)?
            .ok_or_else(|| Error::Verification(format!("no left approximation of the base at bound {bound}")))?;
        let e = &k.idem;
        let (tt, ff) = (d.b().clone(), d.a().clone());
        // y t = e y, solvable since E(T, F) = 0
        let sol = self
            .solve_hom(&tt, &tt, |t| self.mor_to_vec(&self.compose(&d.y, t)), &self.mor_to_vec(&self.compose(e, &d.y)))
            .ok_or_else(|| Error::Verification("no t with y t = e y".into()))?;
        let t = sol.particular;
        let f = self.et3op_complete(&d, &d, &t, e)?;
        let u = self.sub(&self.compose(&t, &t), &t);
        ensure(self.compose(&d.y, &u).is_zero(), || "y (t^2 - t) != 0".into())?;
        ensure(self.compose(&u, &u).is_zero(), || "(t^2 - t)^2 != 0".into())?;
        let h = self.compose(&f, &f);
        ensure(self.act_left(&h, &d.cls)? == self.act_left(&f, &d.cls)?, || "h_* δ != f_* δ".into())?;
        let h_equals_f = h == f;
        let two_tu = self.scale(&self.compose(&t, &u), 2);
        let r = self.sub(&self.add(&t, &u), &two_tu);
        ensure(self.is_idempotent(&r), || "r is not idempotent".into())?;
        ensure(self.compose(&d.y, &r) == self.compose(e, &d.y), || "y r != e y".into())?;
        let a = self.et3op_complete(&d, &d, &r, e)?;
        let g = self.idempotent_replace(&d, &a, &r, e, Replace::First)?;

        let f1 = self.kobject(ff, g.clone())?;
        let t1 = self.kobject(tt, r.clone())?;
        let x1 = self.kmor(&f1, &t1, self.compose(&d.x, &g))?;
        let y1 = self.kmor(&t1, k, self.compose(&d.y, &r))?;
        let omega = self.act_left(&g, &self.act_right(e, &d.cls)?)?;
        let cls = self.f_extension(omega, k.clone(), f1.clone())?;
        let tri = FTriangle { x: x1, y: y1, cls };
        self.check_ftriangle(&tri)?;
        ensure(pair.f_cat.contains_k(self, &f1)?, || "first term is not in F~".into())?;
        ensure(pair.t_cat.contains_k(self, &t1)?, || "middle term is not in T~".into())?;
        Ok(CompletionApprox { tri, ambient: d, h_equals_f })
    }

    /// `K -> (F, g) -> (T, r)`, by the left construction in the dual backend.
    pub fn approx_in_completion_right(&self, pair: &CotorsionPair, k: &KObject, bound: usize) -> Result<CompletionApprox> {
        let db = self.dual_backend();
        let dual = pair.dual(self);
        let out = db.approx_in_completion(&dual, &self.dual_kobject(k), bound)?;
        let tri = db.dual_ftriangle(&out.tri)?;
        self.check_ftriangle(&tri)?;
        ensure(pair.f_cat.contains_k(self, tri.b())?, || "middle term is not in F~".into())?;
        ensure(pair.t_cat.contains_k(self, tri.c())?, || "last term is not in T~".into())?;
        Ok(CompletionApprox { tri, ambient: db.dual_triangle(&out.ambient)?, h_equals_f: out.h_equals_f })
    }

    /// Checks the hypotheses and then the three cotorsion conditions for
    /// `(T~, F~)` on `objects`.
    pub fn lift_pair(&self, pair: &CotorsionPair, objects: &[KObject], s: &Sampling, bound: usize) -> Result<LiftReport> {
        let hypotheses = self.check_orthogonality(pair, s)?;
        if !hypotheses.pass() {
            return Err(Error::Precondition("E(T, F) = 0 and Hom(T, F) = 0 are required".into()));
        }
        let cat = "envelope".to_string();
        let mut ts = Vec::new();
        let mut fs = Vec::new();
        for (i, k) in objects.iter().enumerate() {
            if pair.t_cat.contains_k(self, k)? {
                ts.push(i);
            }
            if pair.f_cat.contains_k(self, k)? {
                fs.push(i);
            }
        }
        let pairs: Vec<(usize, usize)> = ts.iter().flat_map(|&i| fs.iter().map(move |&j| (i, j))).collect();
        let idx = s.select(pairs.len(), 12);
        let picked: Vec<_> = idx.iter().map(|&i| pairs[i]).collect();
        let orth = s.map(&picked, |&(i, j)| {
            let inst = format!("(K{i}, K{j})");
            match self.f_group(&objects[i], &objects[j]) {
                Ok(sp) if sp.dim() == 0 && self.karoubi_hom_dim(&objects[i], &objects[j]) == 0 => None,
                Ok(sp) => Some(Failure {
                    instance: inst,
                    witness: format!("dim F = {}, dim Hom = {}", sp.dim(), self.karoubi_hom_dim(&objects[i], &objects[j])),
                }),
                Err(e) => Some(Failure { instance: inst, witness: e.to_string() }),
            }
        });
        let picked = s.select(objects.len(), 13);
        let left = s.map(&picked, |&i| {
            self.approx_in_completion(pair, &objects[i], bound)
                .err()
                .map(|e| Failure { instance: format!("K{i}"), witness: e.to_string() })
        });
        let right = s.map(&picked, |&i| {
            self.approx_in_completion_right(pair, &objects[i], bound)
                .err()
                .map(|e| Failure { instance: format!("K{i}"), witness: e.to_string() })
        });
        let n = objects.len();
        Ok(LiftReport {
            hypotheses,
            reports: vec![
                AxiomReport::new("F-orthogonal", cat.clone(), pairs.len(), orth.len(), orth),
                AxiomReport::new("left approximation", cat.clone(), n, picked.len(), left),
                AxiomReport::new("right approximation", cat, n, picked.len(), right),
            ],
        })
    }
}
