use std::sync::atomic::{AtomicU64, Ordering};

use higgs_core::cones::RayEngine;
use higgs_core::stability::Alpha;
use higgs_core::sweep::{equivalence_sweep, instance_count, plan, PatternFamily, SweepSpec};
use higgs_core::{Error, Group, Rat};

type Summary = (u64, u64, [[u64; 2]; 2], [[u64; 2]; 2], u64, usize);

fn summary(spec: &SweepSpec) -> Summary {
    let r = equivalence_sweep(spec, &RayEngine::new(), |_| {}).unwrap();
    (
        r.instances,
        r.infeasible,
        r.semistable,
        r.stable,
        r.polystable.both,
        r.disagreements.len(),
    )
}

#[test]
fn observer_sees_every_instance() {
    let spec = SweepSpec::new(Group::SLnC, 2, (-1, 1));
    let seen = AtomicU64::new(0);
    let report = equivalence_sweep(&spec, &RayEngine::new(), |_| {
        seen.fetch_add(1, Ordering::Relaxed);
    })
    .unwrap();
    assert_eq!(seen.into_inner(), report.instances);
    assert_eq!(report.instances, instance_count(&spec).unwrap());
    let total: u64 = report.semistable.iter().flatten().sum();
    assert_eq!(total, report.instances);
}

#[test]
fn repeated_runs_are_identical() {
    let mut spec = SweepSpec::new(Group::Sp2nR, 2, (-1, 1));
    spec.alphas = vec![Alpha::Value(Rat::from_integer(0)), Alpha::Mu];
    assert_eq!(summary(&spec), summary(&spec));
}

#[test]
fn huge_spaces_are_sampled_not_enumerated() {
    let mut spec = SweepSpec::new(Group::SLnC, 5, (-1, 1));
    spec.n_min = 5;
    assert!(matches!(plan(&spec), Err(Error::BudgetExceeded { .. })));
    spec.patterns = PatternFamily::BudgetLimited { cap: 40 };
    let a = plan(&spec).unwrap();
    let b = plan(&spec).unwrap();
    assert_eq!(a.instances, 40);
    let patterns = |p: &higgs_core::sweep::Plan| p.groups.iter().map(|g| g.pattern).collect::<Vec<_>>();
    assert_eq!(patterns(&a), patterns(&b));
    let report = equivalence_sweep(&spec, &RayEngine::new(), |_| {}).unwrap();
    assert_eq!(report.instances, 40);
    assert!(report.fully_agrees());
}

#[test]
fn symmetric_only_is_a_subfamily() {
    let all = SweepSpec::new(Group::Sp2nC, 2, (-1, 1));
    let mut sym = all.clone();
    sym.patterns = PatternFamily::SymmetricOnly;
    let (n_all, n_sym) = (instance_count(&all).unwrap(), instance_count(&sym).unwrap());
    assert!(0 < n_sym && n_sym < n_all);
    for g in plan(&sym).unwrap().groups {
        match g.pattern {
            higgs_core::HiggsPattern::Endo(s) => assert!(s.is_symmetric()),
            _ => unreachable!(),
        }
    }
}

#[test]
fn strict_sections_drop_infeasible_cases() {
    let mut spec = SweepSpec::new(Group::SLnC, 2, (-2, 2));
    spec.genus = 0;
    spec.strict_sections = true;
    let report = equivalence_sweep(&spec, &RayEngine::new(), |_| {}).unwrap();
    assert!(report.infeasible > 0);
    assert_eq!(report.instances + report.infeasible, instance_count(&spec).unwrap());
}
