//! Tower bundles: the category of elements of χ_{p,q}, which sends a
//! q-tuple of level-`p` thick points to the groupoid of merged towers over
//! it.
//!
//! The base of a bundle is the q-fold product of the level-`p` thick-point
//! category. That category is thin and complete, so the product is again
//! the complete thin category, here on q-tuples of cores in lexicographic
//! order. Transport along a base morphism is the identity on identities and
//! otherwise sends every tower to the first tower of the target fiber, the
//! merge of the canonical towers. Fibers are codiscrete, so this is
//! functorial up to the unique fiber isomorphism.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::fincat::{
    category_of_elements, check_cofibered, ElementsCategory, FinCategory, FinFunctor, FinGroupoid, FunctorViolation,
    GroupoidValuedFunctor, MorId, ObjId,
};
use crate::space::{AtomId, AtomSet, InfoSpace};
use crate::thick::DirectedSystem;
use crate::tower::{merge_all, Tower, TowerGroupoid};

/// Extra towers per core, each based at that core's thick point.
pub type Generators = BTreeMap<AtomId, Vec<Tower>>;

#[derive(Debug, Clone, PartialEq)]
pub struct Chi {
    pub level: usize,
    pub arity: usize,
    /// Core tuple of each base object.
    pub base_cores: Vec<Vec<AtomId>>,
    pub fibers: Vec<TowerGroupoid>,
    /// For each fiber tower, one tuple of plain towers merging to it.
    pub representatives: Vec<Vec<Vec<Tower>>>,
    pub functor: GroupoidValuedFunctor,
}

/// All q-tuples over `0..n` in lexicographic order.
fn tuples(n: usize, q: usize) -> Vec<Vec<AtomId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..q {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |a| {
                    let mut t = t.clone();
                    t.push(AtomId(a));
                    t
                })
            })
            .collect();
    }
    out
}

fn tuple_label(space: &InfoSpace, cores: &[AtomId]) -> String {
    if let [a] = cores {
        return space.name(*a).to_string();
    }
    let names: Vec<&str> = cores.iter().map(|&a| space.name(a)).collect();
    format!("({})", names.join(","))
}

/// Constant-on-non-identities transport between codiscrete fibers.
fn transports(base: &FinCategory, fibers: &[FinGroupoid]) -> Vec<FinFunctor> {
    base.morphism_ids()
        .map(|m| {
            let (s, t) = (base.src(m), base.dst(m));
            let source = &fibers[s.0].category;
            if s == t {
                FinFunctor::identity(source)
            } else {
                let first = ObjId(0);
                let id = fibers[t.0].category.identity(first).expect("codiscrete fibers have identities");
                FinFunctor {
                    on_objects: vec![first; source.object_count()],
                    on_morphisms: vec![id; source.morphism_count()],
                }
            }
        })
        .collect()
}

/// χ_p: each level-`p` thick point to 𝐊(U), canonical tower plus generators.
pub fn build_chi_p(space: &InfoSpace, system: &DirectedSystem, level: usize, generators: &Generators) -> Result<Chi> {
    build_chi_pq(space, system, level, 1, generators)
}

/// χ_{p,q}: each q-tuple of level-`p` thick points to the merges of their
/// tower groupoids.
pub fn build_chi_pq(
    space: &InfoSpace,
    system: &DirectedSystem,
    level: usize,
    arity: usize,
    generators: &Generators,
) -> Result<Chi> {
    if arity == 0 {
        return Err(Error::ZeroArity);
    }
    let thick = system.level(level)?;
    let epsilon = system.epsilon;
    let kays = space
        .atoms()
        .map(|a| {
            let gens = generators.get(&a).map(Vec::as_slice).unwrap_or(&[]);
            TowerGroupoid::kay(space, epsilon, thick.point(a), gens)
        })
        .collect::<Result<Vec<_>>>()?;

    let base_cores = tuples(space.len(), arity);
    let labels: Vec<String> = base_cores.iter().map(|t| tuple_label(space, t)).collect();
    let base = FinCategory::codiscrete(&labels);

    let mut fibers = Vec::with_capacity(base_cores.len());
    let mut representatives = Vec::with_capacity(base_cores.len());
    for cores in &base_cores {
        let components: Vec<&TowerGroupoid> = cores.iter().map(|a| &kays[a.0]).collect();
        let mut feet = Vec::new();
        for k in &components {
            for f in &k.feet {
                if !feet.contains(f) {
                    feet.push(f.clone());
                }
            }
        }
        let mut towers: Vec<Tower> = Vec::new();
        let mut reps: Vec<Vec<Tower>> = Vec::new();
        let sizes: Vec<usize> = components.iter().map(|k| k.len()).collect();
        for choice in mixed_radix(&sizes) {
            let tuple: Vec<Tower> = choice.iter().zip(&components).map(|(&i, k)| k.towers[i].clone()).collect();
            let merged = merge_all(&tuple);
            if !towers.contains(&merged) {
                towers.push(merged);
                reps.push(tuple);
            }
        }
        fibers.push(TowerGroupoid { feet, towers });
        representatives.push(reps);
    }

    let groupoids: Vec<FinGroupoid> = fibers.iter().map(TowerGroupoid::groupoid).collect();
    let transport = transports(&base, &groupoids);
    let functor = GroupoidValuedFunctor { base, fibers: groupoids, transport };
    Ok(Chi { level, arity, base_cores, fibers, representatives, functor })
}

fn mixed_radix(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// T^qBun_p: the category of elements of χ_{p,q} over the product base.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerBundle {
    pub level: usize,
    pub arity: usize,
    pub base_cores: Vec<Vec<AtomId>>,
    pub fibers: Vec<TowerGroupoid>,
    pub representatives: Vec<Vec<Vec<Tower>>>,
    pub chi: GroupoidValuedFunctor,
    pub elements: ElementsCategory,
}

pub fn build_bundle(chi: Chi) -> Result<TowerBundle> {
    let elements = category_of_elements(&chi.functor)?;
    if let Some(first) = check_cofibered(&elements).first() {
        return Err(Error::NotCofibered(first.to_string()));
    }
    Ok(TowerBundle {
        level: chi.level,
        arity: chi.arity,
        base_cores: chi.base_cores,
        fibers: chi.fibers,
        representatives: chi.representatives,
        chi: chi.functor,
        elements,
    })
}

impl TowerBundle {
    pub fn base(&self) -> &FinCategory {
        &self.elements.base
    }

    /// The tower sitting at a bundle object.
    pub fn tower(&self, element: ObjId) -> &Tower {
        let (c, xi) = self.elements.elements[element.0];
        &self.fibers[c.0].towers[xi.0]
    }

    pub fn object_count(&self) -> usize {
        self.elements.category.object_count()
    }

    pub fn morphism_count(&self) -> usize {
        self.elements.category.morphism_count()
    }

    /// Checks `δ(⊗ T_i) = ⊗ δT_i` for the stored representative of every
    /// fiber tower. Returns `(base object, tower index)` of each failure.
    pub fn check_equivariance(&self, space: &InfoSpace, epsilon: f64) -> Result<Vec<(ObjId, usize)>> {
        let mut out = Vec::new();
        for (c, reps) in self.representatives.iter().enumerate() {
            for (i, tuple) in reps.iter().enumerate() {
                let merged = self.fibers[c].towers[i].thicken(space, epsilon)?;
                let thickened = tuple.iter().map(|t| t.thicken(space, epsilon)).collect::<Result<Vec<_>>>()?;
                if merged != merge_all(&thickened) {
                    out.push((ObjId(c), i));
                }
            }
        }
        Ok(out)
    }
}

/// δ applied to a bundle, together with the functor it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaBundle {
    pub target: TowerBundle,
    pub functor: FinFunctor,
}

impl DeltaBundle {
    /// Identity and composition laws of δ on the bundle, every pair.
    pub fn check_functor(&self, source: &TowerBundle) -> Vec<FunctorViolation> {
        self.functor.check(&source.elements.category, &self.target.elements.category)
    }
}

/// `δ(U, T) = (δU, δT)` and `δ(f, α) = (δf, δα)`, landing one level up.
pub fn delta_bundle(space: &InfoSpace, system: &DirectedSystem, bundle: &TowerBundle) -> Result<DeltaBundle> {
    let level = bundle.level;
    system.level(level + 1)?;
    let epsilon = system.epsilon;

    let mut fibers = Vec::with_capacity(bundle.fibers.len());
    let mut representatives = Vec::with_capacity(bundle.fibers.len());
    let mut tower_map: Vec<Vec<usize>> = Vec::with_capacity(bundle.fibers.len());
    for (fiber, reps) in bundle.fibers.iter().zip(&bundle.representatives) {
        let mut towers: Vec<Tower> = Vec::new();
        let mut new_reps = Vec::new();
        let mut map = Vec::with_capacity(fiber.len());
        for (t, rep) in fiber.towers.iter().zip(reps) {
            let d = t.thicken(space, epsilon)?;
            match towers.iter().position(|u| *u == d) {
                Some(i) => map.push(i),
                None => {
                    map.push(towers.len());
                    towers.push(d);
                    new_reps.push(rep.iter().map(|r| r.thicken(space, epsilon)).collect::<Result<Vec<_>>>()?);
                }
            }
        }
        let mut feet = Vec::new();
        for f in &fiber.feet {
            let d = f.thicken(space, epsilon)?;
            if !feet.contains(&d) {
                feet.push(d);
            }
        }
        fibers.push(TowerGroupoid { feet, towers });
        representatives.push(new_reps);
        tower_map.push(map);
    }

    let base = bundle.base().clone();
    let groupoids: Vec<FinGroupoid> = fibers.iter().map(TowerGroupoid::groupoid).collect();
    let transport = transports(&base, &groupoids);
    let chi = Chi {
        level: level + 1,
        arity: bundle.arity,
        base_cores: bundle.base_cores.clone(),
        fibers,
        representatives,
        functor: GroupoidValuedFunctor { base, fibers: groupoids, transport },
    };
    let target = build_bundle(chi)?;

    let base_delta: Vec<MorId> =
        bundle.base().morphism_ids().map(|m| delta_on_tuple_morphism(system, bundle, m)).collect::<Result<Vec<_>>>()?;

    let source = &bundle.elements;
    let mut index: BTreeMap<(ObjId, ObjId), ObjId> = BTreeMap::new();
    for o in target.elements.category.objects() {
        index.insert(target.elements.elements[o.0], o);
    }
    let on_objects: Vec<ObjId> =
        source.elements.iter().map(|&(c, xi)| index[&(c, ObjId(tower_map[c.0][xi.0]))]).collect();
    let tcat = &target.elements.category;
    let on_morphisms = source
        .category
        .morphism_ids()
        .map(|m| {
            let from = on_objects[source.category.src(m).0];
            let to = on_objects[source.category.dst(m).0];
            let df = base_delta[source.projection.on_morphisms[m.0].0];
            tcat.hom(from, to)
                .iter()
                .copied()
                .find(|&k| target.elements.projection.on_morphisms[k.0] == df)
                .ok_or_else(|| Error::FunctorLawViolation(format!("no image for bundle morphism {}", m.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DeltaBundle { target, functor: FinFunctor { on_objects, on_morphisms } })
}

/// δ on a base morphism of the product, one component at a time.
fn delta_on_tuple_morphism(system: &DirectedSystem, bundle: &TowerBundle, m: MorId) -> Result<MorId> {
    let base = bundle.base();
    let from = &bundle.base_cores[base.src(m).0];
    let to = &bundle.base_cores[base.dst(m).0];
    let here = system.level(bundle.level)?;
    let up = system.level(bundle.level + 1)?;
    let mut ends = (Vec::new(), Vec::new());
    for (&u, &v) in from.iter().zip(to) {
        let dm = system.delta_on_morphism(bundle.level, here.morphism(u, v))?;
        let (du, dv) = up.ends(dm);
        ends.0.push(du);
        ends.1.push(dv);
    }
    let src = bundle.base_cores.iter().position(|t| *t == ends.0);
    let dst = bundle.base_cores.iter().position(|t| *t == ends.1);
    match (src, dst) {
        (Some(s), Some(t)) => Ok(base.hom(ObjId(s), ObjId(t))[0]),
        _ => Err(Error::UnknownMorphism(m.0)),
    }
}

/// A lift of a base path through the bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    pub start: ObjId,
    pub base: Vec<MorId>,
    pub lift: Vec<MorId>,
}

/// Every lift of the path that starts at base object `start` and follows
/// `path`.
pub fn threads(bundle: &TowerBundle, start: ObjId, path: &[MorId]) -> Result<Vec<Thread>> {
    let base = bundle.base();
    base.check_object(start)?;
    let mut at = start;
    for (i, &m) in path.iter().enumerate() {
        if m.0 >= base.morphism_count() {
            return Err(Error::UnknownMorphism(m.0));
        }
        if base.src(m) != at {
            return Err(Error::NonComposablePath(i));
        }
        at = base.dst(m);
    }
    let e = &bundle.elements;
    let mut partial: Vec<(ObjId, ObjId, Vec<MorId>)> = e.over(start).map(|o| (o, o, Vec::new())).collect();
    for &step in path {
        let mut next = Vec::new();
        for (first, here, lift) in partial {
            for &k in e.category.outgoing(here) {
                if e.projection.on_morphisms[k.0] == step {
                    let mut l = lift.clone();
                    l.push(k);
                    next.push((first, e.category.dst(k), l));
                }
            }
        }
        partial = next;
    }
    Ok(partial.into_iter().map(|(first, _, lift)| Thread { start: first, base: path.to_vec(), lift }).collect())
}

/// Atoms of the space missed by the tops of all bundle towers. Empty iff
/// the towers cover the space.
pub fn kay_cover_check(space: &InfoSpace, bundle: &TowerBundle) -> Vec<CoverFailure> {
    let mut covered = AtomSet::new();
    for o in bundle.elements.category.objects() {
        if bundle.elements.elements.get(o.0).is_some() {
            covered.extend(bundle.tower(o).top().members());
        }
    }
    let missing: AtomSet = space.all().difference(&covered).copied().collect();
    if missing.is_empty() {
        Vec::new()
    } else {
        vec![CoverFailure { missing }]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverFailure {
    pub missing: AtomSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualityDiscrepancy {
    UnprojectedObject { element: ObjId },
    UnprojectedMorphism { morphism: MorId },
    MissingBaseObject { cores: Vec<AtomId> },
    UnexpectedBaseObject { cores: Vec<AtomId> },
    HomSize { from: Vec<AtomId>, to: Vec<AtomId>, expected: usize, recovered: usize },
    FiberNotGroupoid { base: ObjId },
    FiberSize { base: ObjId, expected: usize, recovered: usize },
}

impl fmt::Display for DualityDiscrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnprojectedObject { element } => {
                write!(f, "duality.projection: element {} has no base object", element.0)
            }
            Self::UnprojectedMorphism { morphism } => {
                write!(f, "duality.projection: morphism {} has no base morphism", morphism.0)
            }
            Self::MissingBaseObject { cores } => write!(f, "duality.objects: base object {cores:?} not recovered"),
            Self::UnexpectedBaseObject { cores } => {
                write!(f, "duality.objects: recovered unknown base object {cores:?}")
            }
            Self::HomSize { from, to, expected, recovered } => write!(
                f,
                "duality.homs: Hom({from:?}, {to:?}) has {recovered} recovered morphisms, expected {expected}"
            ),
            Self::FiberNotGroupoid { base } => write!(f, "duality.fibers: fiber over {} is not a groupoid", base.0),
            Self::FiberSize { base, expected, recovered } => {
                write!(f, "duality.fibers: fiber over {} has {recovered} objects, expected {expected}", base.0)
            }
        }
    }
}

/// Recovers the base and fibers from the bundle's projection alone and
/// compares them with the level-`p` thick-point category of `system` (its
/// q-fold product for multi-towers).
pub fn duality_roundtrip(bundle: &TowerBundle, system: &DirectedSystem) -> Result<Vec<DualityDiscrepancy>> {
    let mut out = Vec::new();
    let e = &bundle.elements;
    let cat = &e.category;
    let proj = &e.projection;

    let mut recovered_objects: BTreeMap<ObjId, Vec<ObjId>> = BTreeMap::new();
    for o in cat.objects() {
        match proj.object(o) {
            Some(c) => recovered_objects.entry(c).or_default().push(o),
            None => out.push(DualityDiscrepancy::UnprojectedObject { element: o }),
        }
    }
    let mut recovered_homs: BTreeMap<(ObjId, ObjId), Vec<MorId>> = BTreeMap::new();
    for m in cat.morphism_ids() {
        let ends = (proj.object(cat.src(m)), proj.object(cat.dst(m)));
        match (proj.morphism(m), ends) {
            (Some(f), (Some(x), Some(y))) => {
                let hom = recovered_homs.entry((x, y)).or_default();
                if !hom.contains(&f) {
                    hom.push(f);
                }
            }
            _ => out.push(DualityDiscrepancy::UnprojectedMorphism { morphism: m }),
        }
    }

    // the expected base, built from the system alone
    let thick = system.level(bundle.level)?;
    let n = thick.points.len();
    let expected = tuples(n, bundle.arity);
    let cores_of = |c: &ObjId| bundle.base_cores.get(c.0).cloned().unwrap_or_default();
    let recovered_cores: Vec<Vec<AtomId>> = recovered_objects.keys().map(cores_of).collect();
    for t in &expected {
        if !recovered_cores.contains(t) {
            out.push(DualityDiscrepancy::MissingBaseObject { cores: t.clone() });
        }
    }
    for t in &recovered_cores {
        if !expected.contains(t) {
            out.push(DualityDiscrepancy::UnexpectedBaseObject { cores: t.clone() });
        }
    }
    for x in recovered_objects.keys() {
        for y in recovered_objects.keys() {
            let (cx, cy) = (cores_of(x), cores_of(y));
            if cx.len() != bundle.arity || cy.len() != bundle.arity {
                continue;
            }
            let want: usize =
                cx.iter().zip(&cy).map(|(&u, &v)| thick.category.hom(thick.object(u), thick.object(v)).len()).product();
            let got = recovered_homs.get(&(*x, *y)).map_or(0, Vec::len);
            if want != got {
                out.push(DualityDiscrepancy::HomSize { from: cx, to: cy, expected: want, recovered: got });
            }
        }
    }

    for (&c, members) in &recovered_objects {
        let idc = e.base.identity(c);
        let over_identity =
            |m: MorId| proj.morphism(m) == idc && members.contains(&cat.src(m)) && members.contains(&cat.dst(m));
        let groupoid =
            cat.morphism_ids().filter(|&m| over_identity(m)).all(|m| cat.inverse_of(m).is_some_and(over_identity));
        if !groupoid {
            out.push(DualityDiscrepancy::FiberNotGroupoid { base: c });
        }
        let expected_size = bundle.fibers.get(c.0).map_or(0, TowerGroupoid::len);
        if expected_size != members.len() {
            out.push(DualityDiscrepancy::FiberSize { base: c, expected: expected_size, recovered: members.len() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thick::ThickPoint;
    use crate::tower::CrossSection;

    fn l5() -> InfoSpace {
        InfoSpace::from_line(&["a", "b", "c", "d", "e"], &[0.0, 1.0, 2.0, 3.0, 10.0]).unwrap()
    }

    fn l5_bundle(level: usize, arity: usize) -> (InfoSpace, DirectedSystem, TowerBundle) {
        let s = l5();
        let sys = DirectedSystem::build(&s, 1.5, 3).unwrap();
        let chi = build_chi_pq(&s, &sys, level, arity, &Generators::new()).unwrap();
        let b = build_bundle(chi).unwrap();
        (s, sys, b)
    }

    #[test]
    fn chi_p_on_the_line() {
        let s = l5();
        let sys = DirectedSystem::build(&s, 1.5, 3).unwrap();
        let chi = build_chi_p(&s, &sys, 1, &Generators::new()).unwrap();
        assert_eq!(chi.fibers.len(), 5);
        assert!(chi.fibers.iter().all(|f| f.len() == 1));
        let report = chi.functor.check_laws();
        assert!(report.is_strict());
        let id = chi.functor.base.identity(ObjId(2)).unwrap();
        assert_eq!(chi.functor.transport[id.0], FinFunctor::identity(&chi.functor.fibers[2].category));
    }

    #[test]
    fn chi_pq_reduces_and_merges() {
        let s = l5();
        let sys = DirectedSystem::build(&s, 1.5, 3).unwrap();
        let one = build_chi_p(&s, &sys, 1, &Generators::new()).unwrap();
        assert_eq!(build_chi_pq(&s, &sys, 1, 1, &Generators::new()).unwrap(), one);
        let two = build_chi_pq(&s, &sys, 1, 2, &Generators::new()).unwrap();
        assert_eq!(two.base_cores.len(), 25);
        assert!(two.fibers.iter().all(|f| f.len() == 1));
        let ad = two.base_cores.iter().position(|t| *t == vec![AtomId(0), AtomId(3)]).unwrap();
        let ta = Tower::canonical(&s, 1.5, sys.level(1).unwrap().point(AtomId(0))).unwrap();
        let td = Tower::canonical(&s, 1.5, sys.level(1).unwrap().point(AtomId(3))).unwrap();
        assert_eq!(two.fibers[ad].towers[0], ta.tensor(&td));
        assert_eq!(build_chi_pq(&s, &sys, 1, 0, &Generators::new()), Err(Error::ZeroArity));
    }

    #[test]
    fn bundle_counts() {
        let (_, _, b) = l5_bundle(1, 1);
        assert_eq!((b.object_count(), b.morphism_count()), (5, 25));
        assert!(b.elements.category.validate().is_empty());
        let (_, _, b) = l5_bundle(1, 2);
        assert_eq!((b.object_count(), b.morphism_count()), (25, 625));
    }

    #[test]
    fn bundle_with_generators() {
        let s = l5();
        let sys = DirectedSystem::build(&s, 1.5, 2).unwrap();
        let u = sys.level(1).unwrap().point(AtomId(0)).clone();
        let g = |v: f64| {
            Tower::new(
                &s,
                vec![u.clone()],
                vec![CrossSection::uniform(&u.members(), v), CrossSection::uniform(&s.all(), 1.0)],
            )
            .unwrap()
        };
        let gens = Generators::from([(AtomId(0), vec![g(0.5), g(0.25)])]);
        let b = build_bundle(build_chi_p(&s, &sys, 1, &gens).unwrap()).unwrap();
        assert_eq!(b.fibers[0].len(), 3);
        assert_eq!(b.object_count(), 7);
        // Σ_f |F(src)|·|F(dst)| with fiber sizes (3,1,1,1,1)
        assert_eq!(b.morphism_count(), 7 * 7);
        assert!(b.elements.category.validate().is_empty());
        assert!(!b.chi.check_laws().is_strict());
    }

    #[test]
    fn delta_bundle_is_a_functor() {
        let (s, sys, b) = l5_bundle(1, 1);
        let d = delta_bundle(&s, &sys, &b).unwrap();
        assert!(d.check_functor(&b).is_empty());
        assert_eq!(d.target.level, 2);
        let ta = Tower::canonical(&s, 1.5, sys.level(1).unwrap().point(AtomId(0))).unwrap();
        assert!(d.target.fibers[0].towers.contains(&ta.thicken(&s, 1.5).unwrap()));
        assert!(b.check_equivariance(&s, 1.5).unwrap().is_empty());

        let (s, sys, b3) = l5_bundle(3, 1);
        assert!(matches!(delta_bundle(&s, &sys, &b3), Err(Error::LevelExceeded { .. })));
    }

    #[test]
    fn threads_through_singletons() {
        let (_, _, b) = l5_bundle(1, 1);
        let base = b.base();
        let f = base.hom(ObjId(0), ObjId(1))[0];
        let g = base.hom(ObjId(1), ObjId(4))[0];
        assert_eq!(threads(&b, ObjId(0), &[f, g]).unwrap().len(), 1);
        let empty = threads(&b, ObjId(2), &[]).unwrap();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].lift.is_empty());
        assert_eq!(threads(&b, ObjId(0), &[g]), Err(Error::NonComposablePath(0)));
    }

    #[test]
    fn cover_and_duality() {
        let (s, sys, b) = l5_bundle(1, 1);
        assert!(kay_cover_check(&s, &b).is_empty());
        assert!(duality_roundtrip(&b, &sys).unwrap().is_empty());

        let (_, sys2, b2) = l5_bundle(1, 2);
        assert!(duality_roundtrip(&b2, &sys2).unwrap().is_empty());

        let mut broken = b.clone();
        broken.elements.projection.on_objects.pop();
        let found = duality_roundtrip(&broken, &sys).unwrap();
        assert!(found.contains(&DualityDiscrepancy::UnprojectedObject { element: ObjId(4) }));
    }

    #[test]
    fn truncated_tower_fails_cover() {
        let s = l5();
        let u = ThickPoint::neighbourhood(&s, 1.5, AtomId(0)).unwrap();
        let canonical = Tower::canonical(&s, 1.5, &u).unwrap();
        let truncated = Tower::from_parts_unchecked(
            vec![u.clone()],
            canonical.sections()[..canonical.sections().len() - 1].to_vec(),
        );
        let base = FinCategory::codiscrete(&["a"]);
        let fiber = TowerGroupoid { feet: vec![u], towers: vec![truncated] };
        let groupoid = fiber.groupoid();
        let chi = Chi {
            level: 1,
            arity: 1,
            base_cores: vec![vec![AtomId(0)]],
            fibers: vec![fiber],
            representatives: vec![vec![]],
            functor: GroupoidValuedFunctor {
                transport: vec![FinFunctor::identity(&groupoid.category)],
                fibers: vec![groupoid],
                base,
            },
        };
        let b = build_bundle(chi).unwrap();
        let failures = kay_cover_check(&s, &b);
        assert_eq!(failures, vec![CoverFailure { missing: AtomSet::from([AtomId(4)]) }]);
    }
}
