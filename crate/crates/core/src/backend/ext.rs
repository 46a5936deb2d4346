//! Extension groups, their bimodule actions, and realization.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Backend, Mor, Obj};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

/// Coordinates on `E(C, A)`.
///
/// A cocycle is a list of matrices: one `A_t x C_s` block per arrow `s -> t`
/// (quiver), or one `A_{s-1} x C_s` block per slot (graded, slot 0 has no rows).
#[derive(Clone, Debug)]
pub struct ExtSpace {
    pub c: Obj,
    pub a: Obj,
    pub dim: usize,
    /// `(rows, cols)` of each cocycle block.
    pub(crate) blocks: Vec<(usize, usize)>,
    /// `dim x (total cocycle entries)`; kills coboundaries.
    pub(crate) proj: Mat,
    /// `(total cocycle entries) x dim` with `proj * section = I`.
    pub(crate) section: Mat,
}

/// `δ ∈ E(C, A)`. Equality compares endpoints and coordinates only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtClass {
    pub c: Obj,
    pub a: Obj,
    pub coords: Vec<u32>,
    pub cocycle: Vec<Mat>,
}

impl PartialEq for ExtClass {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.a == other.a && self.coords == other.coords
    }
}
impl Eq for ExtClass {}

impl ExtClass {
    pub fn is_split(&self) -> bool {
        self.coords.iter().all(|&v| v == 0)
    }
}

/// `A --x--> B --y--> C` realizing `cls ∈ E(C, A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ETriangle {
    pub x: Mor,
    pub y: Mor,
    pub cls: ExtClass,
}

impl ETriangle {
    pub fn a(&self) -> &Obj {
        &self.x.src
    }
    pub fn b(&self) -> &Obj {
        &self.x.tgt
    }
    pub fn c(&self) -> &Obj {
        &self.y.tgt
    }
}

fn flatten_blocks(blocks: &[Mat]) -> Vec<u32> {
    blocks.iter().flat_map(Mat::flatten).collect()
}

impl Backend {
    pub fn ext_space(&self, c: &Obj, a: &Obj) -> Result<Arc<ExtSpace>> {
        let key = (c.clone(), a.clone());
        if let Some(s) = self.ext_cache.read().expect("cache").get(&key) {
            return Ok(s.clone());
        }
        let space = Arc::new(self.build_ext_space(c, a)?);
        let mut cache = self.ext_cache.write().expect("cache");
        if cache.len() > 200_000 {
            cache.clear();
        }
        cache.insert(key, space.clone());
        Ok(space)
    }

    fn build_ext_space(&self, c: &Obj, a: &Obj) -> Result<ExtSpace> {
        match self.window() {
            None => {
                let blocks: Vec<(usize, usize)> = self.arrow_list().iter().map(|&(s, t)| (a.dims[t], c.dims[s])).collect();
                let (proj, section) = self.commutation_matrix(c, a).cokernel_projection();
                Ok(ExtSpace { c: c.clone(), a: a.clone(), dim: proj.rows(), blocks, proj, section })
            }
            Some(w) => {
                if *a.dims.last().expect("slots") > 0 {
                    return Err(Error::WindowOverflow { window: w });
                }
                let blocks: Vec<(usize, usize)> =
                    (0..self.slots()).map(|s| (if s == 0 { 0 } else { a.dims[s - 1] }, c.dims[s])).collect();
                let n: usize = blocks.iter().map(|(r, c)| r * c).sum();
                let id = Mat::identity(self.p, n);
                Ok(ExtSpace { c: c.clone(), a: a.clone(), dim: n, blocks, proj: id.clone(), section: id })
            }
        }
    }

    pub fn ext_dim(&self, c: &Obj, a: &Obj) -> Result<usize> {
        Ok(self.ext_space(c, a)?.dim)
    }

    pub fn zero_class(&self, c: &Obj, a: &Obj) -> Result<ExtClass> {
        let sp = self.ext_space(c, a)?;
        Ok(self.class_from_coords_in(&sp, &vec![0; sp.dim]))
    }

    fn class_from_coords_in(&self, sp: &ExtSpace, coords: &[u32]) -> ExtClass {
        let v = sp.section.mul(&Mat::column(self.p, coords)).col(0);
        let mut off = 0;
        let cocycle = sp
            .blocks
            .iter()
            .map(|&(r, c)| {
                let m = Mat::from_vec(self.p, r, c, v[off..off + r * c].to_vec());
                off += r * c;
                m
            })
            .collect();
        ExtClass { c: sp.c.clone(), a: sp.a.clone(), coords: coords.iter().map(|x| x % self.p).collect(), cocycle }
    }

    pub fn class_from_coords(&self, c: &Obj, a: &Obj, coords: &[u32]) -> Result<ExtClass> {
        let sp = self.ext_space(c, a)?;
        if coords.len() != sp.dim {
            return Err(Error::DimensionMismatch(format!("E has dimension {}, got {} coordinates", sp.dim, coords.len())));
        }
        Ok(self.class_from_coords_in(&sp, coords))
    }

    /// Class of an arbitrary cocycle; every cocycle is closed here.
    pub fn class_from_cocycle(&self, c: &Obj, a: &Obj, cocycle: Vec<Mat>) -> Result<ExtClass> {
        let sp = self.ext_space(c, a)?;
        if cocycle.len() != sp.blocks.len() || cocycle.iter().zip(&sp.blocks).any(|(m, &b)| m.shape() != b) {
            return Err(Error::DimensionMismatch("cocycle block shapes".into()));
        }
        let coords = sp.proj.mul(&Mat::column(self.p, &flatten_blocks(&cocycle))).col(0);
        Ok(ExtClass { c: c.clone(), a: a.clone(), coords, cocycle })
    }

    pub fn ext_basis(&self, c: &Obj, a: &Obj) -> Result<Vec<ExtClass>> {
        let sp = self.ext_space(c, a)?;
        Ok((0..sp.dim)
            .map(|i| {
                let mut e = vec![0; sp.dim];
                e[i] = 1;
                self.class_from_coords_in(&sp, &e)
            })
            .collect())
    }

    pub fn ext_add(&self, d1: &ExtClass, d2: &ExtClass) -> Result<ExtClass> {
        if d1.c != d2.c || d1.a != d2.a {
            return Err(Error::EndpointMismatch("ext_add".into()));
        }
        let coc = d1.cocycle.iter().zip(&d2.cocycle).map(|(x, y)| x.add(y)).collect();
        self.class_from_cocycle(&d1.c, &d1.a, coc)
    }

    pub fn ext_scale(&self, d: &ExtClass, s: u32) -> Result<ExtClass> {
        self.class_from_cocycle(&d.c, &d.a, d.cocycle.iter().map(|x| x.scale(s)).collect())
    }

    pub fn ext_neg(&self, d: &ExtClass) -> Result<ExtClass> {
        self.ext_scale(d, self.p - 1)
    }

    pub fn ext_lin_comb(&self, c: &Obj, a: &Obj, coeffs: &[u32], basis: &[ExtClass]) -> Result<ExtClass> {
        let mut acc = self.zero_class(c, a)?;
        for (k, b) in coeffs.iter().zip(basis) {
            if k % self.p != 0 {
                acc = self.ext_add(&acc, &self.ext_scale(b, *k)?)?;
            }
        }
        Ok(acc)
    }

    /// `a_* δ` for `a: A -> A'`.
    pub fn act_left(&self, a: &Mor, d: &ExtClass) -> Result<ExtClass> {
        if a.src != d.a {
            return Err(Error::EndpointMismatch("act_left: source of a is not the domain of the class".into()));
        }
        let coc = match self.window() {
            None => self.arrow_list().iter().zip(&d.cocycle).map(|(&(_, t), psi)| a.comps[t].mul(psi)).collect(),
            Some(_) => d
                .cocycle
                .iter()
                .enumerate()
                .map(|(s, blk)| if s == 0 { Mat::zeros(self.p, 0, blk.cols()) } else { a.comps[s - 1].mul(blk) })
                .collect(),
        };
        self.class_from_cocycle(&d.c, &a.tgt, coc)
    }

    /// `c^* δ` for `c: C' -> C`.
    pub fn act_right(&self, c: &Mor, d: &ExtClass) -> Result<ExtClass> {
        if c.tgt != d.c {
            return Err(Error::EndpointMismatch("act_right: target of c is not the codomain of the class".into()));
        }
        let coc = match self.window() {
            None => self.arrow_list().iter().zip(&d.cocycle).map(|(&(s, _), psi)| psi.mul(&c.comps[s])).collect(),
            Some(_) => d.cocycle.iter().enumerate().map(|(s, blk)| blk.mul(&c.comps[s])).collect(),
        };
        self.class_from_cocycle(&c.src, &d.a, coc)
    }

    /// Matrix of `δ ↦ a_* c^* δ` from `E(C, A)` to `E(C', A')` in coordinates,
    /// for `c: C' -> C` and `a: A -> A'`.
    pub fn ext_action(&self, c: &Mor, a: &Mor) -> Result<Mat> {
        let src = self.ext_space(&c.tgt, &a.src)?;
        let tgt = self.ext_space(&c.src, &a.tgt)?;
        let graded = self.window().is_some();
        let mut cols = Vec::with_capacity(src.dim);
        for i in 0..src.dim {
            let v = src.section.col(i);
            let mut off = 0;
            let mut out = Vec::new();
            for (bi, &(r, k)) in src.blocks.iter().enumerate() {
                let blk = Mat::from_vec(self.p, r, k, v[off..off + r * k].to_vec());
                off += r * k;
                let (left, right) = if graded {
                    (if bi == 0 { None } else { Some(&a.comps[bi - 1]) }, &c.comps[bi])
                } else {
                    let (s, t) = self.arrow_list()[bi];
                    (Some(&a.comps[t]), &c.comps[s])
                };
                let moved = match left {
                    Some(l) => l.mul(&blk).mul(right),
                    None => Mat::zeros(self.p, 0, right.cols()),
                };
                out.extend(moved.flatten());
            }
            cols.push(out);
        }
        let rows: usize = tgt.blocks.iter().map(|(r, k)| r * k).sum();
        Ok(tgt.proj.mul(&Mat::from_columns(self.p, rows, &cols)))
    }

    /// Canonical conflation realizing `δ`; split classes give `A -> A ⊕ C -> C`.
    pub fn realize(&self, d: &ExtClass) -> Result<ETriangle> {
        let (a, c) = (&d.a, &d.c);
        let p = self.p;
        match self.window() {
            None => {
                let dims: Vec<usize> = a.dims.iter().zip(&c.dims).map(|(x, y)| x + y).collect();
                let arrows = self
                    .arrow_list()
                    .iter()
                    .enumerate()
                    .map(|(ai, &(s, t))| {
                        let mut m = Mat::zeros(p, dims[t], dims[s]);
                        m.paste(0, 0, &a.arrows[ai]);
                        m.paste(0, a.dims[s], &d.cocycle[ai]);
                        m.paste(a.dims[t], a.dims[s], &c.arrows[ai]);
                        m
                    })
                    .collect();
                let b = Obj::new(dims, arrows);
                let ds = self.direct_sum(&[a.clone(), c.clone()]);
                let x = Mor { src: a.clone(), tgt: b.clone(), comps: ds.incl[0].comps.clone() };
                let y = Mor { src: b, tgt: c.clone(), comps: ds.proj[1].comps.clone() };
                Ok(ETriangle { x, y, cls: d.clone() })
            }
            Some(_) => {
                // B_d = coker δ_{d+1} ⊕ ker δ_d
                let n = self.slots();
                let mut dims = vec![0; n];
                let mut xs = Vec::with_capacity(n);
                let mut ker_bases = Vec::with_capacity(n);
                for s in 0..n {
                    let q = if s + 1 < n {
                        d.cocycle[s + 1].cokernel_projection().0
                    } else {
                        Mat::identity(p, a.dims[s])
                    };
                    let k = d.cocycle[s].kernel_basis();
                    dims[s] = q.rows() + k.cols();
                    xs.push(q);
                    ker_bases.push(k);
                }
                let b = self.semisimple(&dims);
                let mut xc = Vec::with_capacity(n);
                let mut yc = Vec::with_capacity(n);
                for s in 0..n {
                    let (q, k) = (&xs[s], &ker_bases[s]);
                    let mut xm = Mat::zeros(p, dims[s], a.dims[s]);
                    xm.paste(0, 0, q);
                    let mut ym = Mat::zeros(p, c.dims[s], dims[s]);
                    ym.paste(0, q.rows(), k);
                    xc.push(xm);
                    yc.push(ym);
                }
                let x = Mor { src: a.clone(), tgt: b.clone(), comps: xc };
                let y = Mor { src: b, tgt: c.clone(), comps: yc };
                Ok(ETriangle { x, y, cls: d.clone() })
            }
        }
    }

    /// A class realized by the conflation `A --x--> B --y--> C`.
    ///
    /// Quiver: the unique such class. Graded: the connecting map built from the
    /// cokernel of `y` and the kernel of `x`, one of possibly several.
    pub fn class_of(&self, x: &Mor, y: &Mor) -> Result<ExtClass> {
        if x.tgt != y.src {
            return Err(Error::EndpointMismatch("class_of: x and y are not composable".into()));
        }
        let (a, b, c) = (&x.src, &x.tgt, &y.tgt);
        let p = self.p;
        match self.window() {
            None => {
                let mut sec = Vec::with_capacity(self.slots());
                let mut ret = Vec::with_capacity(self.slots());
                for i in 0..self.slots() {
                    let (xi, yi) = (&x.comps[i], &y.comps[i]);
                    if !yi.mul(xi).is_zero() || xi.rank() != a.dims[i] || yi.rank() != c.dims[i] || a.dims[i] + c.dims[i] != b.dims[i] {
                        return Err(Error::NotATriangle(format!("not short exact at vertex {i}")));
                    }
                    let mut cols = Vec::with_capacity(c.dims[i]);
                    for j in 0..c.dims[i] {
                        let mut e = vec![0; c.dims[i]];
                        e[j] = 1;
                        cols.push(linalg::solve_vec(yi, &e)?.expect("surjective"));
                    }
                    let s = Mat::from_columns(p, b.dims[i], &cols);
                    let inv = xi.hstack(&s).inverse().expect("basis");
                    ret.push(inv.submatrix(0, a.dims[i], 0, b.dims[i]));
                    sec.push(s);
                }
                let coc = self
                    .arrow_list()
                    .iter()
                    .enumerate()
                    .map(|(ai, &(s, t))| ret[t].mul(&b.arrows[ai]).mul(&sec[s]))
                    .collect();
                self.class_from_cocycle(c, a, coc)
            }
            Some(_) => {
                let n = self.slots();
                let mut coc = Vec::with_capacity(n);
                for s in 0..n {
                    if s == 0 {
                        coc.push(Mat::zeros(p, 0, c.dims[0]));
                        continue;
                    }
                    let kx = x.comps[s - 1].kernel_basis();
                    let (q, _) = y.comps[s].cokernel_projection();
                    if kx.cols() != q.rows() {
                        return Err(Error::NotATriangle(format!("rank mismatch at slot {s}")));
                    }
                    coc.push(kx.mul(&q));
                }
                let d = self.class_from_cocycle(c, a, coc)?;
                if !self.graded_exact(x, y, &d) {
                    return Err(Error::NotATriangle("long sequence is not exact".into()));
                }
                Ok(d)
            }
        }
    }

    /// Exactness of `... -> A_d -> B_d -> C_d -> A_{d-1} -> ...` in every degree.
    fn graded_exact(&self, x: &Mor, y: &Mor, d: &ExtClass) -> bool {
        let n = self.slots();
        let (a, b, c) = (&x.src, &x.tgt, &y.tgt);
        for s in 0..n {
            let (xs, ys, ds) = (&x.comps[s], &y.comps[s], &d.cocycle[s]);
            if !ys.mul(xs).is_zero() || !ds.mul(ys).is_zero() {
                return false;
            }
            let rd = ds.rank();
            if s > 0 && (!x.comps[s - 1].mul(ds).is_zero() || rd + x.comps[s - 1].rank() != a.dims[s - 1]) {
                return false;
            }
            if xs.rank() + ys.rank() != b.dims[s] || ys.rank() + rd != c.dims[s] {
                return false;
            }
        }
        // A in the top slot receives nothing, so x must be injective there.
        x.comps[n - 1].rank() == a.dims[n - 1]
    }

    /// Whether `t` is a conflation realizing its recorded class.
    pub fn is_etriangle(&self, t: &ETriangle) -> bool {
        self.check_etriangle(t).is_ok()
    }

    pub fn check_etriangle(&self, t: &ETriangle) -> Result<()> {
        if t.x.tgt != t.y.src || t.cls.a != t.x.src || t.cls.c != t.y.tgt {
            return Err(Error::NotATriangle("endpoints".into()));
        }
        self.check_mor(&t.x).map_err(|e| Error::NotATriangle(e.to_string()))?;
        self.check_mor(&t.y).map_err(|e| Error::NotATriangle(e.to_string()))?;
        match self.window() {
            None => {
                let k = self.class_of(&t.x, &t.y)?;
                if k != t.cls {
                    return Err(Error::NotATriangle("realizes a different class".into()));
                }
                Ok(())
            }
            Some(_) => {
                if self.graded_exact(&t.x, &t.y, &t.cls) {
                    Ok(())
                } else {
                    Err(Error::NotATriangle("long sequence is not exact".into()))
                }
            }
        }
    }
}
