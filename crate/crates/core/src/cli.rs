//! Batch sessions: a JSON config names a backend, generators and tasks;
//! running it gives a `report-v1` JSON document or a text summary.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::axioms::{verify_suite, AxiomReport, Sampling};
use crate::backend::{Backend, Obj, Quiver};
use crate::category::{Ambient, Envelope};
use crate::cotorsion::{CotorsionPair, SubcatSpec};
use crate::error::{Error, Result};
use crate::fext::FVariant;
use crate::karoubi::{KObject, Presentation};
use crate::linalg::{is_supported_prime, Mat};
use crate::recollement::{check_full_recollement, lift_full_recollement, product_recollement};

pub const SCHEMA: &str = "report-v1";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BackendSpec {
    Quiver { vertices: usize, arrows: Vec<(usize, usize)> },
    Graded { window: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    /// Total multiplicity of generators in a presentation object.
    #[serde(default = "two")]
    pub multiplicity: usize,
    /// Instances checked per axiom before sampling kicks in.
    #[serde(default = "ten_thousand")]
    pub budget: usize,
    /// Most envelope objects an enumeration may produce.
    #[serde(default = "hundred_thousand")]
    pub objects: usize,
    /// Multiplicity bound for approximation searches.
    #[serde(default = "two")]
    pub approx: usize,
}

fn two() -> usize {
    2
}
fn ten_thousand() -> usize {
    10_000
}
fn hundred_thousand() -> usize {
    100_000
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { multiplicity: 2, budget: 10_000, objects: 100_000, approx: 2 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CategoryKind {
    Ambient,
    #[default]
    Envelope,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantSpec {
    #[default]
    Faithful,
    DropProjector,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HalfSpec {
    #[default]
    Right,
    Left,
    Full,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case")]
pub enum TaskSpec {
    VerifyAxioms {
        #[serde(default)]
        category: CategoryKind,
        #[serde(default)]
        variant: VariantSpec,
    },
    KaroubiEnumerate {},
    ExtCompute {
        c: String,
        a: String,
    },
    Realize {
        c: String,
        a: String,
        #[serde(default)]
        coords: Vec<u32>,
    },
    CotorsionCheck {
        t: Vec<String>,
        f: Vec<String>,
        #[serde(default)]
        objects: Vec<String>,
    },
    CotorsionLift {
        t: Vec<String>,
        f: Vec<String>,
    },
    RecollementCheck {
        #[serde(default)]
        half: HalfSpec,
    },
    RecollementLift {
        #[serde(default)]
        half: HalfSpec,
    },
}

impl TaskSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TaskSpec::VerifyAxioms { .. } => "verify-axioms",
            TaskSpec::KaroubiEnumerate {} => "karoubi-enumerate",
            TaskSpec::ExtCompute { .. } => "ext-compute",
            TaskSpec::Realize { .. } => "realize",
            TaskSpec::CotorsionCheck { .. } => "cotorsion-check",
            TaskSpec::CotorsionLift { .. } => "cotorsion-lift",
            TaskSpec::RecollementCheck { .. } => "recollement-check",
            TaskSpec::RecollementLift { .. } => "recollement-lift",
        }
    }

    /// A task from its name alone, for tasks whose fields all have defaults.
    pub fn from_name(name: &str) -> Result<TaskSpec> {
        serde_json::from_value(json!({ "task": name })).map_err(|e| Error::Config(format!("--task {name}: {e}")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    pub prime: u32,
    pub backend: BackendSpec,
    /// Each generator is a sum of object labels such as `S1+S2+P1` or `k[0]+k[2]`.
    pub generators: Vec<String>,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

/// A validated config with its backend and presentation built.
#[derive(Clone, Debug)]
pub struct Session {
    pub config: SessionConfig,
    pub backend: Backend,
    pub presentation: Presentation,
    pub sampling: Sampling,
}

pub fn parse_config(text: &str) -> Result<SessionConfig> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("parse error at line {}, column {}: {e}", e.line(), e.column())))
}

pub fn load_config(path: &Path) -> Result<SessionConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// One labelled indecomposable or a `+`-separated sum, `X^n` for powers,
/// `0` for the zero object.
pub fn parse_object(b: &Backend, label: &str) -> Result<Obj> {
    let mut parts = Vec::new();
    for term in label.split('+').map(str::trim) {
        if term == "0" {
            continue;
        }
        let (base, pow) = match term.split_once('^') {
            Some((x, n)) => (x.trim(), n.trim().parse::<usize>().map_err(|_| Error::Config(format!("bad power in {term:?}")))?),
            None => (term, 1),
        };
        let obj = parse_indec(b, base)?;
        parts.extend(std::iter::repeat(obj).take(pow));
    }
    Ok(b.direct_sum(&parts).obj)
}

fn parse_indec(b: &Backend, s: &str) -> Result<Obj> {
    let bad = || Error::Config(format!("unknown object label {s:?}"));
    if let Some(n) = s.strip_prefix("k[").and_then(|r| r.strip_suffix(']')) {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        return b.k_deg(n);
    }
    if b.window().is_some() {
        return Err(bad());
    }
    let (kind, v) = s.split_at(1.min(s.len()));
    let v: usize = v.parse().map_err(|_| bad())?;
    if v == 0 || v > b.slots() {
        return Err(Error::Config(format!("vertex out of range in {s:?}")));
    }
    match kind {
        "S" => Ok(b.simple(v - 1)),
        "P" => Ok(b.projective(v - 1)),
        _ => Err(bad()),
    }
}

impl Session {
    pub fn new(config: SessionConfig) -> Result<Session> {
        let p = config.prime;
        if !is_supported_prime(p) {
            return Err(Error::Config(format!("prime: {p} is not prime or exceeds 7")));
        }
        let b = &config.bounds;
        for (name, v) in [("multiplicity", b.multiplicity), ("budget", b.budget), ("objects", b.objects), ("approx", b.approx)] {
            if v == 0 {
                return Err(Error::Config(format!("bounds.{name}: must be positive")));
            }
        }
        let backend = match &config.backend {
            BackendSpec::Quiver { vertices, arrows } => Backend::quiver(p, Quiver::new(*vertices, arrows.clone())?)?,
            BackendSpec::Graded { window } => Backend::graded(p, *window)?,
        };
        if config.generators.is_empty() {
            return Err(Error::Config("generators: at least one is needed".into()));
        }
        let gens = config
            .generators
            .iter()
            .map(|g| parse_object(&backend, g).map_err(|e| Error::Config(format!("generators: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let presentation = Presentation::new(backend.clone(), gens, config.bounds.multiplicity)?.with_labels(config.generators.clone())?;
        let session = Session {
            sampling: Sampling { seed: config.seed, budget: config.bounds.budget, parallel: false },
            config,
            backend,
            presentation,
        };
        for t in &session.config.tasks {
            session.validate_task(t)?;
        }
        Ok(session)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.config.seed = seed;
        self.sampling.seed = seed;
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.sampling.parallel = parallel;
        self
    }

    /// Labels referenced by the task name objects of this backend.
    pub fn validate_task(&self, t: &TaskSpec) -> Result<()> {
        let check = |l: &String| parse_object(&self.backend, l).map(|_| ()).map_err(|e| Error::Config(format!("{}: {e}", t.name())));
        match t {
            TaskSpec::ExtCompute { c, a } | TaskSpec::Realize { c, a, .. } => {
                check(c)?;
                check(a)
            }
            TaskSpec::CotorsionCheck { t: ts, f, objects } => ts.iter().chain(f).chain(objects).try_for_each(check),
            TaskSpec::CotorsionLift { t: ts, f } => ts.iter().chain(f).try_for_each(check),
            _ => Ok(()),
        }
    }

    fn envelope_reps(&self) -> Result<Vec<KObject>> {
        let ks = self.presentation.enumerate_kobjects(self.config.bounds.objects)?;
        self.backend.isoclass_representatives(&ks)
    }

    fn subcat(&self, name: &str, labels: &[String]) -> Result<SubcatSpec> {
        let mut members = Vec::new();
        for l in labels {
            let x = parse_object(&self.backend, l)?;
            for s in self.backend.decompose_indec(&x).summands {
                members.push((l.clone(), s.obj));
            }
        }
        Ok(SubcatSpec::new(name, members))
    }

    pub fn run_task(&self, t: &TaskSpec) -> Result<TaskReport> {
        let s = &self.sampling;
        let b = &self.backend;
        let pres = &self.presentation;
        let mut out = TaskReport { task: t.name().into(), pass: true, reports: vec![], witness: Value::Null, error: None };
        match t {
            TaskSpec::VerifyAxioms { category, variant } => {
                let suite = match category {
                    CategoryKind::Ambient => {
                        let objs = pres.pobjs();
                        let cat = Ambient {
                            backend: b.clone(),
                            objects: objs.iter().map(|a| pres.realize(a)).collect(),
                            labels: objs.iter().map(|a| pres.describe(a)).collect(),
                        };
                        let r = verify_suite(&cat, s)?;
                        (r.reports, cat.objects.len())
                    }
                    CategoryKind::Envelope => {
                        let v = match variant {
                            VariantSpec::Faithful => FVariant::Faithful,
                            VariantSpec::DropProjector => FVariant::DropProjector,
                        };
                        let cat = Envelope::new(b.clone(), self.envelope_reps()?).with_variant(v);
                        let r = verify_suite(&cat, s)?;
                        (r.reports, cat.objects.len())
                    }
                };
                out.reports = suite.0;
                out.witness = json!({ "objects": suite.1 });
            }
            TaskSpec::KaroubiEnumerate {} => {
                let ks = pres.enumerate_kobjects(self.config.bounds.objects)?;
                let reps = b.isoclass_representatives(&ks)?;
                let objects: Vec<Value> = ks
                    .iter()
                    .map(|k| {
                        json!({
                            "mults": k.mults,
                            "idem": k.idem.comps.iter().map(Mat::to_rows).collect::<Vec<_>>(),
                            "image_dims": b.evaluate(k).obj.dims.clone(),
                        })
                    })
                    .collect();
                out.witness = json!({ "count": ks.len(), "isoclasses": reps.len(), "objects": objects });
            }
            TaskSpec::ExtCompute { c, a } => {
                let (co, ao) = (parse_object(b, c)?, parse_object(b, a)?);
                let basis = b.ext_basis(&co, &ao)?;
                out.witness = json!({
                    "c": c, "a": a, "dim": basis.len(),
                    "basis": basis.iter().map(|d| d.coords.clone()).collect::<Vec<_>>(),
                });
            }
            TaskSpec::Realize { c, a, coords } => {
                let (co, ao) = (parse_object(b, c)?, parse_object(b, a)?);
                let basis = b.ext_basis(&co, &ao)?;
                let mut v = coords.clone();
                v.resize(basis.len(), 0);
                if coords.len() > basis.len() {
                    return Err(Error::Config(format!("realize: {} coordinates for a space of dimension {}", coords.len(), basis.len())));
                }
                let t = b.realize(&b.ext_lin_comb(&co, &ao, &v, &basis)?)?;
                b.check_etriangle(&t)?;
                out.witness = json!({
                    "middle_dims": t.b().dims.clone(),
                    "split": t.cls.is_split(),
                    "x": t.x.comps.iter().map(Mat::to_rows).collect::<Vec<_>>(),
                    "y": t.y.comps.iter().map(Mat::to_rows).collect::<Vec<_>>(),
                });
            }
            TaskSpec::CotorsionCheck { t: ts, f, objects } => {
                let pair = CotorsionPair { t_cat: self.subcat("T", ts)?, f_cat: self.subcat("F", f)? };
                let o = b.check_orthogonality(&pair, s)?;
                out.reports = vec![o.ext, o.hom];
                let names: Vec<String> = if objects.is_empty() { pres.pobjs().iter().map(|a| pres.describe(a)).collect() } else { objects.clone() };
                let objs: Vec<Obj> = if objects.is_empty() {
                    pres.pobjs().iter().map(|a| pres.realize(a)).collect()
                } else {
                    objects.iter().map(|l| parse_object(b, l)).collect::<Result<_>>()?
                };
                let bound = self.config.bounds.approx;
                let mut found = Vec::new();
                let mut outcomes = Vec::new();
                for (n, x) in names.iter().zip(&objs) {
                    let ap = b.find_approximations(&pair, x, bound)?;
                    let miss: Vec<&str> = [("left", ap.left.is_none()), ("right", ap.right.is_none())].iter().filter(|p| p.1).map(|p| p.0).collect();
                    outcomes.push((!miss.is_empty()).then(|| crate::axioms::Failure {
                        instance: n.clone(),
                        witness: format!("{} not found at bound {bound}", miss.join(" and ")),
                    }));
                    found.push(json!({
                        "object": n,
                        "left": ap.left.map(|t| json!({ "f": t.a().dims.clone(), "t": t.b().dims.clone() })),
                        "right": ap.right.map(|t| json!({ "f": t.b().dims.clone(), "t": t.c().dims.clone() })),
                    }));
                }
                out.reports.push(AxiomReport::new("approximations", "ambient".into(), objs.len(), objs.len(), outcomes));
                out.witness = json!({ "approximations": found });
            }
            TaskSpec::CotorsionLift { t: ts, f } => {
                let pair = CotorsionPair { t_cat: self.subcat("T", ts)?, f_cat: self.subcat("F", f)? };
                let ks = pres.enumerate_kobjects(self.config.bounds.objects)?;
                let rep = b.lift_pair(&pair, &ks, s, self.config.bounds.approx)?;
                out.reports = [rep.hypotheses.ext, rep.hypotheses.hom].into_iter().chain(rep.reports).collect();
                out.witness = json!({ "objects": ks.len() });
            }
            TaskSpec::RecollementCheck { half } | TaskSpec::RecollementLift { half } => {
                let lift = matches!(t, TaskSpec::RecollementLift { .. });
                let (right, left) = product_recollement(self.config.prime, self.config.bounds.multiplicity)?;
                let env = right.envelope_objects(self.config.bounds.objects)?;
                let base = right.base_objects();
                let reps = match (half, lift) {
                    (HalfSpec::Right, false) => vec![right.check(&base, "base", s)],
                    (HalfSpec::Left, false) => vec![left.check(&base, "base", s)],
                    (HalfSpec::Full, false) => check_full_recollement(&right, &left, &base, "base", s)?,
                    (HalfSpec::Right, true) => vec![right.lift(&env, s)?],
                    (HalfSpec::Left, true) => vec![left.lift(&env, s)?],
                    (HalfSpec::Full, true) => lift_full_recollement(&right, &left, &env, s)?,
                };
                out.witness = json!({
                    "example": "product",
                    "halves": reps.iter().map(|r| json!({ "kind": r.kind, "level": r.level })).collect::<Vec<_>>(),
                });
                out.reports = reps.into_iter().flat_map(|r| r.reports).collect();
            }
        }
        out.pass = out.reports.iter().all(|r| r.pass);
        Ok(out)
    }

    /// Runs `tasks`, falling back to the config's list; task errors are
    /// recorded as failures of that task.
    pub fn run(&self, tasks: Option<&[TaskSpec]>) -> RunReport {
        let list = tasks.unwrap_or(&self.config.tasks);
        let reports: Vec<TaskReport> = list
            .iter()
            .map(|t| {
                self.run_task(t).unwrap_or_else(|e| TaskReport {
                    task: t.name().into(),
                    pass: false,
                    reports: vec![],
                    witness: Value::Null,
                    error: Some(format!("{}: {e}", t.name())),
                })
            })
            .collect();
        RunReport {
            schema: SCHEMA.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: self.config.clone(),
            pass: reports.iter().all(|r| r.pass),
            tasks: reports,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub task: String,
    pub pass: bool,
    pub reports: Vec<AxiomReport>,
    pub witness: Value,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: String,
    pub version: String,
    pub config: SessionConfig,
    pub tasks: Vec<TaskReport>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn emit_report(run: &RunReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(run).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("{SCHEMA} version {} seed {}\n", run.version, run.config.seed);
            for t in &run.tasks {
                s.push_str(&format!("{} {}\n", t.task, if t.pass { "PASS" } else { "FAIL" }));
                if let Some(e) = &t.error {
                    s.push_str(&format!("  error: {e}\n"));
                }
                for r in &t.reports {
                    let how = if r.exhaustive { "exhaustive" } else { "sampled" };
                    s.push_str(&format!(
                        "  {:<32} {:<24} {:>8}/{:<8} {:<10} {}\n",
                        r.axiom,
                        r.category,
                        r.checked,
                        r.universe,
                        how,
                        if r.pass { "PASS" } else { "FAIL" }
                    ));
                    for f in &r.failures {
                        s.push_str(&format!("    failure {}: {}\n", f.instance, f.witness));
                    }
                }
            }
            s.push_str(&format!("overall {}\n", if run.pass { "PASS" } else { "FAIL" }));
            s
        }
    }
}
