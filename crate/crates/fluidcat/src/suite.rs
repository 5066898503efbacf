//! The law suites run by `fluidcat check`.

use std::collections::VecDeque;

use fluidcat_core::bundle::{build_bundle, build_chi_pq, delta_bundle, duality_roundtrip, kay_cover_check};
use fluidcat_core::fincat::FinCategory;
use fluidcat_core::natural::{check_rec_square, wavefn, Reconstruction};
use fluidcat_core::thick::DirectedSystem;
use fluidcat_core::tower::{merge_all, Tower};
use fluidcat_core::{AtomId, AtomSet, InfoSpace};
use rand::Rng;

use crate::error::CliResult;
use crate::generate::{random_based_tower, random_generators, random_split, rng};
use crate::report::CheckReport;

/// Knobs for [`run_all`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub epsilon: f64,
    pub levels: usize,
    pub lambda: f64,
    pub arity: usize,
    pub seed: u64,
    /// Random towers drawn for the monoidal suites.
    pub towers: usize,
}

pub fn run_all(space: &InfoSpace, labels: &Reconstruction, cfg: &SuiteConfig) -> CliResult<Vec<CheckReport>> {
    let system = DirectedSystem::build(space, cfg.epsilon, cfg.levels)?;
    Ok(vec![
        category_suite(&system),
        delta_suite(space, &system)?,
        strata_suite(space, &system),
        colimit_suite(space, &system),
        natural_suite(space, &system, labels, cfg.lambda)?,
        tower_suite(space, cfg)?,
        bundle_suite(space, &system, cfg)?,
    ])
}

/// Category laws of one finite category, under the name `suite`.
pub fn check_category(suite: &str, cat: &FinCategory) -> CheckReport {
    let mut report = CheckReport::new(suite);
    for v in cat.validate() {
        report.failed.push(crate::report::LawFailure { law: v.law().to_string(), counterexample: v.to_string() });
    }
    if report.failed.is_empty() {
        report.passed += 1;
    }
    report
}

fn category_suite(system: &DirectedSystem) -> CheckReport {
    let mut report = CheckReport::new("category");
    for level in &system.levels {
        let one = check_category("category", &level.category);
        report.passed += one.passed;
        report.failed.extend(one.failed.into_iter().map(|mut f| {
            f.counterexample = format!("level {}: {}", level.level, f.counterexample);
            f
        }));
    }
    report
}

fn delta_suite(space: &InfoSpace, system: &DirectedSystem) -> CliResult<CheckReport> {
    let mut report = CheckReport::new("delta");
    for p in 0..system.max_level() {
        let f = system.delta_functor(p)?;
        let source = &system.levels[p];
        let target = &system.levels[p + 1];
        report.record(
            "delta.functor",
            f.check(&source.category, &target.category).into_iter().map(|v| format!("level {p}: {v}")),
        );
        for tp in &source.points {
            let up = tp.thicken(space, system.epsilon)?;
            report.expect("delta.objects", &up == target.point(tp.core()), || {
                format!("δ of {} at level {p} is not the level-{} point", space.name(tp.core()), p + 1)
            });
        }
    }
    Ok(report)
}

/// Hop distances by breadth-first search, independent of the union-find
/// used for components.
fn bfs_hops(space: &InfoSpace, epsilon: f64, from: AtomId) -> Vec<Option<usize>> {
    let mut hops = vec![None; space.len()];
    hops[from.0] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        let h = hops[x.0].expect("queued atoms have a hop count");
        for y in space.atoms() {
            if hops[y.0].is_none() && space.dist(x, y) < epsilon {
                hops[y.0] = Some(h + 1);
                queue.push_back(y);
            }
        }
    }
    hops
}

fn strata_suite(space: &InfoSpace, system: &DirectedSystem) -> CheckReport {
    let mut report = CheckReport::new("strata");
    for level in &system.levels {
        for tp in &level.points {
            let name = space.name(tp.core());
            let hops = bfs_hops(space, system.epsilon, tp.core());
            let wrong: Vec<String> = space
                .atoms()
                .filter(|&b| tp.degree(b) != hops[b.0].filter(|&h| h <= level.level).map(|h| h.saturating_sub(1)))
                .map(|b| format!("degree of {} in the level-{} point of {name}", space.name(b), level.level))
                .collect();
            report.record("degree.bfs", wrong);
            if level.level == 0 {
                continue;
            }
            let Ok(strata) = tp.strata() else {
                report.expect("strata.partition", false, || format!("no strata for {name} at level {}", level.level));
                continue;
            };
            let union: AtomSet = strata.iter().flatten().copied().collect();
            let disjoint = strata.iter().map(AtomSet::len).sum::<usize>() == union.len();
            report.expect("strata.partition", disjoint && union == tp.members(), || {
                format!("strata of {name} at level {} do not partition its members", level.level)
            });
        }
    }
    report
}

fn colimit_suite(space: &InfoSpace, system: &DirectedSystem) -> CheckReport {
    let mut report = CheckReport::new("colimit");
    for a in space.atoms() {
        let hops = bfs_hops(space, system.epsilon, a);
        let reach: AtomSet = space.atoms().filter(|b| hops[b.0].is_some()).collect();
        let ecc = hops.iter().flatten().copied().max().unwrap_or(0);
        report.expect("colimit.bfs", system.stable[a.0] == reach, || {
            format!(
                "colimit of {} is {}, BFS reaches {}",
                space.name(a),
                space.display_set(&system.stable[a.0]),
                space.display_set(&reach)
            )
        });
        report.expect("colimit.stabilization", system.stabilization[a.0] == ecc.max(1), || {
            format!("{} stabilizes at {}, eccentricity is {ecc}", space.name(a), system.stabilization[a.0])
        });
    }
    let connected = space.components(system.epsilon).map(|c| c.len() == 1).unwrap_or(false);
    report.expect("colimit.whole", system.collapses_to_whole(space) == connected, || {
        String::from("collapse to the whole space disagrees with connectivity")
    });
    report
}

fn natural_suite(
    space: &InfoSpace,
    system: &DirectedSystem,
    labels: &Reconstruction,
    lambda: f64,
) -> CliResult<CheckReport> {
    let mut report = CheckReport::new("natural");
    report.record(
        "natural.rec_square",
        check_rec_square(space, system, labels)?
            .into_iter()
            .map(|m| format!("rec(δU) ≠ δ(rec U) for {} at level {}", space.name(m.core), m.level)),
    );
    for level in &system.levels {
        for tp in &level.points {
            let w = wavefn(tp, lambda)?;
            let name = space.name(tp.core());
            report.expect("wavefn.normalization", (w.total() - 1.0).abs() <= 1e-12, || {
                format!("ψ of {name} at level {} sums to {}", level.level, w.total())
            });
            let monotone =
                w.prob.iter().all(|(b, pb)| w.prob.iter().all(|(c, pc)| tp.degree(*b) > tp.degree(*c) || pb >= pc));
            report.expect("wavefn.monotone", monotone, || {
                format!("ψ of {name} at level {} is not monotone in degree", level.level)
            });
        }
    }
    Ok(report)
}

fn tower_suite(space: &InfoSpace, cfg: &SuiteConfig) -> CliResult<CheckReport> {
    let mut report = CheckReport::new("towers");
    let mut r = rng(cfg.seed);
    let towers = (0..cfg.towers)
        .map(|_| random_based_tower(&mut r, space, cfg.epsilon, cfg.levels.min(2)))
        .collect::<fluidcat_core::Result<Vec<Tower>>>()?;
    for (i, t) in towers.iter().enumerate() {
        report.record("tower.valid", t.violations(space).into_iter().map(|v| format!("tower {i}: {v}")));
        report.expect("monoidal.unit", t.tensor(&Tower::empty()) == *t && Tower::empty().tensor(t) == *t, || {
            format!("tower {i} ⊗ unit differs")
        });
        let dt = t.thicken(space, cfg.epsilon)?;
        report.expect("tower.top_invariance", dt.top() == t.top(), || format!("δ changes the top of tower {i}"));
    }
    for (i, t) in towers.iter().enumerate() {
        for (j, u) in towers.iter().enumerate().skip(i) {
            report.expect("monoidal.commutativity", t.tensor(u).same_up_to_feet_order(&u.tensor(t)), || {
                format!("towers {i}, {j}")
            });
            let lhs = t.tensor(u).thicken(space, cfg.epsilon)?;
            let rhs = t.thicken(space, cfg.epsilon)?.tensor(&u.thicken(space, cfg.epsilon)?);
            report.expect("delta.tensor", lhs == rhs, || format!("δ(T{i} ⊗ T{j}) ≠ δT{i} ⊗ δT{j}"));
        }
    }
    for _ in 0..cfg.towers {
        let idx: Vec<usize> = (0..3).map(|_| r.gen_range(0..towers.len())).collect();
        let (t, u, v) = (&towers[idx[0]], &towers[idx[1]], &towers[idx[2]]);
        report.expect("monoidal.associativity", t.tensor(u).tensor(v) == t.tensor(&u.tensor(v)), || {
            format!("towers {idx:?}")
        });
    }
    for _ in 0..cfg.towers {
        let count = r.gen_range(2..=4usize);
        let picked: Vec<Tower> = (0..count).map(|_| towers[r.gen_range(0..towers.len())].clone()).collect();
        let (left, right) = random_split(&mut r, &picked);
        let (a, b) = (merge_all(&left), merge_all(&right));
        report.expect("tower.split", a.tensor(&b).same_up_to_feet_order(&merge_all(&picked)), || {
            format!("merge of a {}+{} split differs from the whole", left.len(), right.len())
        });
        let lhs = a.tensor(&b).thicken(space, cfg.epsilon)?;
        let rhs = a.thicken(space, cfg.epsilon)?.tensor(&b.thicken(space, cfg.epsilon)?);
        report.expect("delta.tensor", lhs == rhs, || {
            format!("δ fails to distribute over a {}+{} split", left.len(), right.len())
        });
    }
    Ok(report)
}

fn bundle_suite(space: &InfoSpace, system: &DirectedSystem, cfg: &SuiteConfig) -> CliResult<CheckReport> {
    let mut report = CheckReport::new("bundles");
    let mut r = rng(cfg.seed ^ 0x6b75_6e64_6c65);
    for p in 0..=system.max_level().min(3) {
        for q in 1..=cfg.arity {
            let points = &system.level(p)?.points;
            let gens = random_generators(&mut r, space, points, if q == 1 { 2 } else { 1 })?;
            let chi = build_chi_pq(space, system, p, q, &gens)?;
            let at = |what: &str| format!("p={p} q={q}: {what}");
            report.record("chi.functor", chi.functor.check_laws().fatal.iter().map(|f| at(&f.to_string())));
            let bundle = build_bundle(chi)?;
            report.record(
                "bundle.cofibered",
                fluidcat_core::fincat::check_cofibered(&bundle.elements).iter().map(|f| at(&f.to_string())),
            );
            let objects: usize = bundle.fibers.iter().map(|f| f.len()).sum();
            let morphisms: usize = bundle
                .base()
                .morphism_ids()
                .map(|m| bundle.fibers[bundle.base().src(m).0].len() * bundle.fibers[bundle.base().dst(m).0].len())
                .sum();
            report.expect(
                "bundle.counts",
                bundle.object_count() == objects && bundle.morphism_count() == morphisms,
                || {
                    at(&format!(
                        "{}/{} elements, expected {objects}/{morphisms}",
                        bundle.object_count(),
                        bundle.morphism_count()
                    ))
                },
            );
            report.record(
                "bundle.cover",
                kay_cover_check(space, &bundle)
                    .iter()
                    .map(|c| at(&format!("tops miss {}", space.display_set(&c.missing)))),
            );
            report.record("bundle.duality", duality_roundtrip(&bundle, system)?.iter().map(|d| at(&d.to_string())));
            report.record(
                "bundle.equivariance",
                bundle
                    .check_equivariance(space, cfg.epsilon)?
                    .iter()
                    .map(|(o, i)| at(&format!("δ of tower {i} over base object {} leaves the thickened fiber", o.0))),
            );
            if p < system.max_level() {
                let d = delta_bundle(space, system, &bundle)?;
                report.record("bundle.delta_functor", d.check_functor(&bundle).iter().map(|v| at(&v.to_string())));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fluidcat_core::fincat::MorId;

    fn l5() -> InfoSpace {
        InfoSpace::from_line(&["a", "b", "c", "d", "e"], &[0.0, 1.0, 2.0, 3.0, 10.0]).unwrap()
    }

    fn cfg() -> SuiteConfig {
        SuiteConfig { epsilon: 1.5, levels: 3, lambda: 0.5, arity: 1, seed: 0, towers: 12 }
    }

    #[test]
    fn l5_suite_is_clean() {
        let s = l5();
        let reports = run_all(&s, &Reconstruction::identity(&s), &cfg()).unwrap();
        for r in &reports {
            assert!(r.is_clean(), "{r:?}");
            assert!(r.passed > 0, "{}", r.suite);
        }
    }

    #[test]
    fn corrupted_category_names_the_law() {
        let s = l5();
        let sys = DirectedSystem::build(&s, 1.5, 1).unwrap();
        let mut cat = sys.levels[1].category.clone();
        cat.remove_composite(MorId(1), MorId(5)).unwrap();
        let report = check_category("corrupted", &cat);
        assert!(!report.is_clean());
        assert!(report.failed.iter().any(|f| f.law == "category.composite_defined"), "{report:?}");
        assert_eq!(report.total(), report.passed + report.failed.len());
    }
}
