//! Vector-space duality `D = Hom_k(-, k)`, an anti-equivalence onto the
//! opposite quiver (resp. the reflected window). It swaps inflations and
//! deflations, so dual statements can be checked by running the primal code there.

use super::{Backend, BackendKind, ETriangle, ExtClass, Mor, Obj};
use crate::error::{Error, Result};

impl Backend {
    /// The opposite category; built once per backend and shared by clones.
    pub fn dual_backend(&self) -> Backend {
        self.dual
            .get_or_init(|| {
                let kind = match &self.kind {
                    BackendKind::Quiver { quiver } => BackendKind::Quiver { quiver: quiver.opposite() },
                    BackendKind::Graded { window } => BackendKind::Graded { window: *window },
                };
                Backend::new(self.p, kind).expect("same prime")
            })
            .clone()
    }

    pub fn dual_obj(&self, x: &Obj) -> Obj {
        match self.window() {
            None => Obj::new(x.dims.clone(), x.arrows.iter().map(|m| m.transpose()).collect()),
            Some(_) => {
                let mut dims = x.dims.clone();
                dims.reverse();
                Obj::new(dims, vec![])
            }
        }
    }

    /// `D f: D Y -> D X`.
    pub fn dual_mor(&self, f: &Mor) -> Mor {
        let mut comps: Vec<_> = f.comps.iter().map(|m| m.transpose()).collect();
        if self.is_graded() {
            comps.reverse();
        }
        Mor { src: self.dual_obj(&f.tgt), tgt: self.dual_obj(&f.src), comps }
    }

    /// `δ ∈ E(C, A)` as an element of `E^dual(D A, D C)`.
    pub fn dual_class(&self, d: &ExtClass) -> Result<ExtClass> {
        let dual = self.dual_backend();
        match self.window() {
            None => {
                let t = self.realize(d)?;
                dual.class_of(&self.dual_mor(&t.y), &self.dual_mor(&t.x))
            }
            Some(w) => {
                if d.c.dims[0] > 0 {
                    return Err(Error::WindowOverflow { window: w });
                }
                let n = self.slots();
                let coc = (0..n)
                    .map(|s| if s == 0 { crate::linalg::Mat::zeros(self.p, 0, d.a.dims[n - 1]) } else { d.cocycle[n - s].transpose() })
                    .collect();
                dual.class_from_cocycle(&self.dual_obj(&d.a), &self.dual_obj(&d.c), coc)
            }
        }
    }

    /// `D C --Dy--> D B --Dx--> D A` realizing the dual class.
    pub fn dual_triangle(&self, t: &ETriangle) -> Result<ETriangle> {
        Ok(ETriangle { x: self.dual_mor(&t.y), y: self.dual_mor(&t.x), cls: self.dual_class(&t.cls)? })
    }
}
