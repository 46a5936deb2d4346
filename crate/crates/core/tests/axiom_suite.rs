use karoubi::axioms::{verify_suite, AxiomReport, Sampling};
use karoubi::backend::{Backend, Quiver};
use karoubi::category::{Ambient, Envelope};
use karoubi::fext::FVariant;
use karoubi::karoubi::Presentation;

fn a2_pres(p: u32) -> Presentation {
    let b = Backend::quiver(p, Quiver::new(2, vec![(0, 1)]).unwrap()).unwrap();
    let g = b.direct_sum(&[b.simple(0), b.simple(1), b.projective(0)]).obj;
    Presentation::new(b, vec![g], 1).unwrap()
}

fn ambient(pres: &Presentation) -> Ambient {
    let objs = pres.pobjs();
    Ambient {
        backend: pres.backend().clone(),
        objects: objs.iter().map(|a| pres.realize(a)).collect(),
        labels: objs.iter().map(|a| pres.describe(a)).collect(),
    }
}

fn envelope(pres: &Presentation, v: FVariant) -> Envelope {
    let b = pres.backend();
    let reps = b.isoclass_representatives(&pres.enumerate_kobjects(1000).unwrap()).unwrap();
    Envelope::new(b.clone(), reps).with_variant(v)
}

fn failing(r: &[AxiomReport]) -> Vec<&str> {
    r.iter().filter(|x| !x.pass).map(|x| x.axiom.as_str()).collect()
}

const NAMES: [&str; 7] = ["ET1", "ET2", "ET3", "ET3op", "ET4", "ET4op", "exact-sequences"];

#[test]
fn ambient_passes() {
    for p in [2, 3] {
        let r = verify_suite(&ambient(&a2_pres(p)), &Sampling::default()).unwrap();
        assert_eq!(r.reports.iter().map(|x| x.axiom.as_str()).collect::<Vec<_>>(), NAMES);
        assert!(failing(&r.reports).is_empty(), "p={p}: {:?}", failing(&r.reports));
        assert!(r.reports.iter().all(|x| x.exhaustive));
    }
    let b = Backend::graded(5, 3).unwrap();
    let g = b.graded_obj(&[(-1, 1), (0, 1), (1, 1)]).unwrap();
    let r = verify_suite(&ambient(&Presentation::new(b, vec![g], 1).unwrap()), &Sampling::default()).unwrap();
    assert!(failing(&r.reports).is_empty(), "{:?}", failing(&r.reports));
}

#[test]
fn envelope_passes() {
    let s = Sampling { seed: 5, budget: 1500, parallel: true };
    let r = verify_suite(&envelope(&a2_pres(2), FVariant::Faithful), &s).unwrap();
    assert!(failing(&r.reports).is_empty(), "{:?}", failing(&r.reports));
    assert!(r.reports.iter().any(|x| !x.exhaustive));
    assert!(!r.produced.is_empty());
}

#[test]
fn dropped_projector_is_caught() {
    let s = Sampling { seed: 5, budget: 1000, parallel: true };
    let r = verify_suite(&envelope(&a2_pres(2), FVariant::DropProjector), &s).unwrap();
    let bad = failing(&r.reports);
    assert!(bad.contains(&"ET1") && bad.contains(&"ET2"), "{bad:?}");
    let et1 = &r.reports[0];
    assert!(et1.failure_count > 0 && !et1.failures.is_empty());
}

#[test]
fn sampling_is_seeded() {
    let cat = envelope(&a2_pres(2), FVariant::Faithful);
    let s = |seed| Sampling { seed, budget: 300, parallel: false };
    let run = |seed| verify_suite(&cat, &s(seed)).unwrap().reports;
    assert_eq!(run(1), run(1));
    let a = s(1).select(6400, 3);
    assert_eq!(a, s(1).select(6400, 3));
    assert_ne!(a, s(2).select(6400, 3));
    assert!(a.windows(2).all(|w| w[0] < w[1]) && a.len() == 300);
    assert_eq!(s(1).select(200, 3), (0..200).collect::<Vec<_>>());
}
