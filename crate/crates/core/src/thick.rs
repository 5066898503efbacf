//! Thick points, the thickening map δ and the directed system of
//! thick-point categories.
//!
//! A thick point of level `p ≥ 1` around a core `a` is `δ^{p-1}(ν_ε(a))`,
//! where δ replaces a set by the union of the ε-balls of its members. Each
//! member carries the degree at which it first appeared, so the point splits
//! into strata `ν_{kε}(a) − ν_{(k-1)ε}(a)`. Level 0 is the bare core.
//!
//! Repeated thickening is the union of balls, not the metric `pε`-ball; the
//! two differ whenever the distance violates the triangle inequality.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, FinFunctor, MorId, ObjId};
use crate::space::{check_epsilon, AtomId, AtomSet, InfoSpace};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThickPoint {
    core: AtomId,
    level: usize,
    degrees: BTreeMap<AtomId, usize>,
}

impl ThickPoint {
    /// The level-0 point `{core}`.
    pub fn point(core: AtomId) -> Self {
        Self { core, level: 0, degrees: BTreeMap::from([(core, 0)]) }
    }

    /// ν_ε(core) at level 1; every member has degree 0.
    pub fn neighbourhood(space: &InfoSpace, epsilon: f64, core: AtomId) -> Result<Self> {
        Self::point(core).thicken(space, epsilon)
    }

    /// ν_{pε}(core).
    pub fn at_level(space: &InfoSpace, epsilon: f64, core: AtomId, level: usize) -> Result<Self> {
        space.check(core)?;
        let mut tp = Self::point(core);
        for _ in 0..level {
            tp = tp.thicken(space, epsilon)?;
        }
        Ok(tp)
    }

    /// Assembles a thick point from stored data without recomputing it.
    pub fn from_parts(core: AtomId, level: usize, degrees: BTreeMap<AtomId, usize>) -> Self {
        Self { core, level, degrees }
    }

    pub fn core(&self) -> AtomId {
        self.core
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degrees(&self) -> &BTreeMap<AtomId, usize> {
        &self.degrees
    }

    pub fn degree(&self, b: AtomId) -> Option<usize> {
        self.degrees.get(&b).copied()
    }

    pub fn members(&self) -> AtomSet {
        self.degrees.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn contains(&self, b: AtomId) -> bool {
        self.degrees.contains_key(&b)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.values().copied().max().unwrap_or(0)
    }

    /// δ: one level up. New members get degree `p` (the current level);
    /// existing degrees are kept.
    pub fn thicken(&self, space: &InfoSpace, epsilon: f64) -> Result<Self> {
        let grown = space.thicken_set(&self.members(), epsilon)?;
        let mut degrees = self.degrees.clone();
        for b in grown {
            degrees.entry(b).or_insert(self.level);
        }
        Ok(Self { core: self.core, level: self.level + 1, degrees })
    }

    /// Members grouped by degree: entry `k` is the degree-`k` stratum.
    pub fn strata(&self) -> Result<Vec<AtomSet>> {
        if self.level == 0 {
            return Err(Error::ZeroLevel);
        }
        let mut out = alloc::vec![AtomSet::new(); self.max_degree() + 1];
        for (&b, &k) in &self.degrees {
            out[k].insert(b);
        }
        Ok(out)
    }
}

/// The thin category on one thick point per core at a fixed level.
///
/// The single morphism `U → V` stands for the composite of the inclusion of
/// `U` into the ambient space followed by the projection onto `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThickCategory {
    pub level: usize,
    pub points: Vec<ThickPoint>,
    pub category: FinCategory,
}

impl ThickCategory {
    pub fn build(space: &InfoSpace, epsilon: f64, level: usize) -> Result<Self> {
        let points =
            space.atoms().map(|a| ThickPoint::at_level(space, epsilon, a, level)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_points(space, level, points))
    }

    fn from_points(space: &InfoSpace, level: usize, points: Vec<ThickPoint>) -> Self {
        let category = FinCategory::codiscrete(space.names());
        Self { level, points, category }
    }

    pub fn point(&self, core: AtomId) -> &ThickPoint {
        &self.points[core.0]
    }

    pub fn object(&self, core: AtomId) -> ObjId {
        ObjId(core.0)
    }

    /// The unique morphism between the thick points around `from` and `to`.
    pub fn morphism(&self, from: AtomId, to: AtomId) -> MorId {
        MorId(from.0 * self.points.len() + to.0)
    }

    pub fn ends(&self, m: MorId) -> (AtomId, AtomId) {
        let n = self.points.len();
        (AtomId(m.0 / n), AtomId(m.0 % n))
    }

    /// Thickens every object; the result is the category one level up.
    pub fn thicken(&self, space: &InfoSpace, epsilon: f64) -> Result<Self> {
        let points = self.points.iter().map(|tp| tp.thicken(space, epsilon)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_points(space, self.level + 1, points))
    }
}

/// Levels `0..=P` of the thick-point categories, linked by δ.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedSystem {
    pub epsilon: f64,
    pub levels: Vec<ThickCategory>,
    /// Per core: first level `p ≥ 1` with `ν_{pε} = ν_{(p+1)ε}`.
    pub stabilization: Vec<usize>,
    /// Per core: the stabilized member set.
    pub stable: Vec<AtomSet>,
}

impl DirectedSystem {
    pub fn build(space: &InfoSpace, epsilon: f64, max_level: usize) -> Result<Self> {
        check_epsilon(epsilon)?;
        let mut levels = Vec::with_capacity(max_level + 1);
        levels.push(ThickCategory::build(space, epsilon, 0)?);
        for _ in 0..max_level {
            let next = levels[levels.len() - 1].thicken(space, epsilon)?;
            levels.push(next);
        }
        let mut stabilization = Vec::with_capacity(space.len());
        let mut stable = Vec::with_capacity(space.len());
        for a in space.atoms() {
            let (level, set) = stabilize(space, epsilon, a)?;
            stabilization.push(level);
            stable.push(set);
        }
        Ok(Self { epsilon, levels, stabilization, stable })
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, p: usize) -> Result<&ThickCategory> {
        self.levels.get(p).ok_or(Error::LevelExceeded { requested: p, max: self.max_level() })
    }

    /// δ on a morphism `U → V` of level `p`: the unique `δU → δV` one level up.
    pub fn delta_on_morphism(&self, level: usize, f: MorId) -> Result<MorId> {
        let here = self.level(level)?;
        let up = self.level(level + 1)?;
        if f.0 >= here.category.morphism_count() {
            return Err(Error::UnknownMorphism(f.0));
        }
        let (u, v) = here.ends(f);
        Ok(up.morphism(u, v))
    }

    /// δ as a functor from level `p` to level `p + 1`.
    pub fn delta_functor(&self, level: usize) -> Result<FinFunctor> {
        let here = self.level(level)?;
        self.level(level + 1)?;
        let on_objects = here.category.objects().collect();
        let on_morphisms =
            here.category.morphism_ids().map(|m| self.delta_on_morphism(level, m)).collect::<Result<Vec<_>>>()?;
        Ok(FinFunctor { on_objects, on_morphisms })
    }

    /// The distinct stabilized sets, in order of first core.
    pub fn colimit_cells(&self) -> Vec<AtomSet> {
        let mut cells: Vec<AtomSet> = Vec::new();
        for s in &self.stable {
            if !cells.contains(s) {
                cells.push(s.clone());
            }
        }
        cells
    }

    /// Whether every core's colimit is the whole space.
    pub fn collapses_to_whole(&self, space: &InfoSpace) -> bool {
        let all = space.all();
        self.stable.iter().all(|s| *s == all)
    }
}

/// Thickens `ν_ε(a)` until it stops growing. Returns the stabilization
/// level and the stable set.
fn stabilize(space: &InfoSpace, epsilon: f64, a: AtomId) -> Result<(usize, AtomSet)> {
    let mut tp = ThickPoint::neighbourhood(space, epsilon, a)?;
    loop {
        let next = tp.thicken(space, epsilon)?;
        if next.len() == tp.len() {
            return Ok((tp.level(), tp.members()));
        }
        tp = next;
    }
}

/// colim_n δ^n ν_ε(a): the stabilized thick point around `a`.
pub fn colimit(space: &InfoSpace, epsilon: f64, a: AtomId) -> Result<AtomSet> {
    space.check(a)?;
    Ok(stabilize(space, epsilon, a)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn l5() -> InfoSpace {
        InfoSpace::from_line(&["a", "b", "c", "d", "e"], &[0.0, 1.0, 2.0, 3.0, 10.0]).unwrap()
    }

    fn set(s: &InfoSpace, names: &[&str]) -> AtomSet {
        names.iter().map(|n| s.atom(n).unwrap()).collect()
    }

    #[test]
    fn thicken_neighbourhood_of_a() {
        let s = l5();
        let a = s.atom("a").unwrap();
        let tp = ThickPoint::neighbourhood(&s, 1.5, a).unwrap();
        assert_eq!(tp.members(), set(&s, &["a", "b"]));
        let up = tp.thicken(&s, 1.5).unwrap();
        assert_eq!(up.members(), set(&s, &["a", "b", "c"]));
        assert_eq!(up.degree(s.atom("c").unwrap()), Some(1));
        assert_eq!(up.degree(a), Some(0));
        assert_eq!(up.level(), 2);
    }

    #[test]
    fn thicken_stable_and_isolated() {
        let s = l5();
        let a = s.atom("a").unwrap();
        let full = ThickPoint::at_level(&s, 1.5, a, 3).unwrap();
        assert_eq!(full.members(), set(&s, &["a", "b", "c", "d"]));
        let again = full.thicken(&s, 1.5).unwrap();
        assert_eq!(again.members(), full.members());
        assert_eq!(again.level(), 4);

        let e = s.atom("e").unwrap();
        for p in 1..5 {
            assert_eq!(ThickPoint::at_level(&s, 1.5, e, p).unwrap().members(), set(&s, &["e"]));
        }
    }

    #[test]
    fn strata_on_the_line() {
        let s = l5();
        let a = s.atom("a").unwrap();
        let two = ThickPoint::at_level(&s, 1.5, a, 2).unwrap();
        assert_eq!(two.strata().unwrap(), vec![set(&s, &["a", "b"]), set(&s, &["c"])]);
        let three = ThickPoint::at_level(&s, 1.5, a, 3).unwrap();
        assert_eq!(three.strata().unwrap(), vec![set(&s, &["a", "b"]), set(&s, &["c"]), set(&s, &["d"])]);
        let e = ThickPoint::neighbourhood(&s, 1.5, s.atom("e").unwrap()).unwrap();
        assert_eq!(e.strata().unwrap(), vec![set(&s, &["e"])]);
        assert_eq!(ThickPoint::point(a).strata(), Err(Error::ZeroLevel));
    }

    #[test]
    fn system_stabilization() {
        let s = l5();
        let sys = DirectedSystem::build(&s, 1.5, 4).unwrap();
        assert_eq!(sys.stabilization, vec![3, 2, 2, 3, 1]);
        assert_eq!(sys.stable[0], set(&s, &["a", "b", "c", "d"]));
        assert_eq!(sys.stable[4], set(&s, &["e"]));
        assert!(!sys.collapses_to_whole(&s));
        for level in &sys.levels {
            assert!(level.category.validate().is_empty());
        }

        let sys = DirectedSystem::build(&s, 20.0, 2).unwrap();
        assert_eq!(sys.stabilization, vec![1; 5]);
        assert!(sys.collapses_to_whole(&s));
    }

    #[test]
    fn single_atom_system() {
        let s = InfoSpace::from_matrix(&["a"], &[vec![0.0]]).unwrap();
        let sys = DirectedSystem::build(&s, 1.0, 2).unwrap();
        let members: Vec<_> = sys.levels.iter().map(|l| l.points[0].members()).collect();
        assert_eq!(members, vec![s.all(); 3]);
    }

    #[test]
    fn colimit_cells() {
        let s = l5();
        assert_eq!(colimit(&s, 1.5, AtomId(0)).unwrap(), set(&s, &["a", "b", "c", "d"]));
        assert_eq!(colimit(&s, 1.5, AtomId(4)).unwrap(), set(&s, &["e"]));
        assert_eq!(colimit(&s, 7.5, AtomId(4)).unwrap(), s.all());
        assert!(matches!(colimit(&s, 1.5, AtomId(5)), Err(Error::UnknownAtom(_))));
    }

    #[test]
    fn delta_on_morphisms() {
        let s = l5();
        let sys = DirectedSystem::build(&s, 1.5, 2).unwrap();
        let l1 = sys.level(1).unwrap();
        let id_u = l1.category.identity(ObjId(1)).unwrap();
        let d = sys.delta_on_morphism(1, id_u).unwrap();
        assert_eq!(Some(d), sys.level(2).unwrap().category.identity(ObjId(1)));

        let f = l1.morphism(AtomId(0), AtomId(2));
        let g = l1.morphism(AtomId(2), AtomId(3));
        let gf = l1.category.compose(g, f).unwrap();
        let l2 = &sys.level(2).unwrap().category;
        let (df, dg) = (sys.delta_on_morphism(1, f).unwrap(), sys.delta_on_morphism(1, g).unwrap());
        assert_eq!(Some(sys.delta_on_morphism(1, gf).unwrap()), l2.compose(dg, df));

        assert!(sys.delta_functor(1).unwrap().check(&l1.category, l2).is_empty());
        assert_eq!(sys.delta_on_morphism(2, MorId(0)), Err(Error::LevelExceeded { requested: 3, max: 2 }));
    }
}
