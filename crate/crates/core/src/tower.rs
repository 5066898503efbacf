//! Towers over thick points and their merge product.
//!
//! A tower is a finite chain of weighted cross-sections `S_0 ⊆ … ⊆ S_m`.
//! The bottom section is the union of the feet, and the top is always the
//! whole atom set at intensity 1, the finite stand-in for the limit Ω.
//! Towers over the same feet form a codiscrete groupoid of reshapings.
//!
//! Merging (`⊗`) unions feet (coincident feet collapse) and unions
//! sections index by index, padding the shorter chain with its top and
//! taking the larger intensity where both towers weigh an atom. The unit is
//! the empty tower: no feet and a single empty section.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fincat::FinGroupoid;
use crate::space::{AtomId, AtomSet, InfoSpace};
use crate::thick::ThickPoint;

/// Atoms with an intensity in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrossSection {
    intensity: BTreeMap<AtomId, f64>,
}

impl CrossSection {
    pub fn new(intensity: BTreeMap<AtomId, f64>) -> Self {
        Self { intensity }
    }

    pub fn uniform(set: &AtomSet, value: f64) -> Self {
        Self { intensity: set.iter().map(|&a| (a, value)).collect() }
    }

    pub fn members(&self) -> AtomSet {
        self.intensity.keys().copied().collect()
    }

    pub fn intensities(&self) -> &BTreeMap<AtomId, f64> {
        &self.intensity
    }

    pub fn intensity(&self, a: AtomId) -> Option<f64> {
        self.intensity.get(&a).copied()
    }

    pub fn len(&self) -> usize {
        self.intensity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intensity.is_empty()
    }

    pub fn union(&self, other: &CrossSection) -> CrossSection {
        let mut intensity = self.intensity.clone();
        for (&a, &v) in &other.intensity {
            intensity.entry(a).and_modify(|w| *w = w.max(v)).or_insert(v);
        }
        CrossSection { intensity }
    }

    /// Each atom of an ε-ball takes the largest intensity among the members
    /// whose ball reaches it.
    pub fn thicken(&self, space: &InfoSpace, epsilon: f64) -> Result<CrossSection> {
        let mut intensity: BTreeMap<AtomId, f64> = BTreeMap::new();
        for (&a, &v) in &self.intensity {
            for b in space.ball(a, epsilon)? {
                intensity.entry(b).and_modify(|w| *w = w.max(v)).or_insert(v);
            }
        }
        Ok(CrossSection { intensity })
    }

    fn is_full_top(&self, space: &InfoSpace) -> bool {
        self.len() == space.len() && self.intensity.values().all(|&v| v == 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tower {
    feet: Vec<ThickPoint>,
    sections: Vec<CrossSection>,
}

impl Tower {
    /// Validated constructor; see [`Tower::violations`].
    pub fn new(space: &InfoSpace, feet: Vec<ThickPoint>, sections: Vec<CrossSection>) -> Result<Self> {
        let tower = Self { feet: dedup(feet), sections };
        match tower.violations(space).into_iter().next() {
            Some(v) => Err(Error::InvalidTower(v)),
            None => Ok(tower),
        }
    }

    /// Builds a tower without checking invariants, e.g. to model a
    /// truncated tower that never reaches the top.
    pub fn from_parts_unchecked(feet: Vec<ThickPoint>, sections: Vec<CrossSection>) -> Self {
        Self { feet, sections }
    }

    /// The monoidal unit: no feet, one empty section.
    pub fn empty() -> Self {
        Self { feet: Vec::new(), sections: vec![CrossSection::default()] }
    }

    /// `[U, δU, δ²U, …, stable set, Ω]`, every intensity 1.
    pub fn canonical(space: &InfoSpace, epsilon: f64, foot: &ThickPoint) -> Result<Self> {
        let mut current = foot.members();
        let mut sections = vec![CrossSection::uniform(&current, 1.0)];
        loop {
            let next = space.thicken_set(&current, epsilon)?;
            if next.len() == current.len() {
                break;
            }
            sections.push(CrossSection::uniform(&next, 1.0));
            current = next;
        }
        sections.push(CrossSection::uniform(&space.all(), 1.0));
        Ok(Self { feet: vec![foot.clone()], sections })
    }

    pub fn feet(&self) -> &[ThickPoint] {
        &self.feet
    }

    pub fn arity(&self) -> usize {
        self.feet.len()
    }

    pub fn sections(&self) -> &[CrossSection] {
        &self.sections
    }

    pub fn top(&self) -> &CrossSection {
        self.sections.last().expect("towers have at least one section")
    }

    pub fn is_empty_tower(&self) -> bool {
        self.feet.is_empty()
    }

    /// Every broken invariant, as readable messages.
    pub fn violations(&self, space: &InfoSpace) -> Vec<String> {
        let mut out = Vec::new();
        let Some(bottom) = self.sections.first() else {
            out.push(String::from("tower has no sections"));
            return out;
        };
        let base: AtomSet = self.feet.iter().flat_map(|f| f.members()).collect();
        if bottom.members() != base {
            out.push(format!(
                "bottom section {} is not the union of the feet {}",
                space.display_set(&bottom.members()),
                space.display_set(&base)
            ));
        }
        if !self.feet.is_empty() && !self.top().is_full_top(space) {
            out.push(String::from("top section is not the whole space at intensity 1"));
        }
        for (i, s) in self.sections.iter().enumerate() {
            for (&a, &v) in s.intensities() {
                if !space.contains(a) {
                    out.push(format!("section {i} holds unknown atom {a}"));
                } else if !(v > 0.0 && v <= 1.0) {
                    out.push(format!("section {i} gives {} intensity {v}", space.name(a)));
                }
            }
        }
        for (i, pair) in self.sections.windows(2).enumerate() {
            for (&a, &v) in pair[0].intensities() {
                match pair[1].intensity(a) {
                    None => out.push(format!("section {} drops {}", i + 1, space.name(a))),
                    Some(w) if w < v => {
                        out.push(format!("intensity of {} decreases between sections {i} and {}", space.name(a), i + 1))
                    }
                    Some(_) => {}
                }
            }
        }
        out
    }

    /// `T ⊗ T'`.
    pub fn tensor(&self, other: &Tower) -> Tower {
        let mut feet = self.feet.clone();
        feet.extend(other.feet.iter().cloned());
        let len = self.sections.len().max(other.sections.len());
        let sections = (0..len).map(|i| section_or_top(self, i).union(section_or_top(other, i))).collect();
        Tower { feet: dedup(feet), sections }
    }

    /// δT: feet thickened, every section below the top replaced by its
    /// ε-thickening, top unchanged.
    pub fn thicken(&self, space: &InfoSpace, epsilon: f64) -> Result<Tower> {
        let feet = self.feet.iter().map(|f| f.thicken(space, epsilon)).collect::<Result<Vec<_>>>()?;
        let last = self.sections.len() - 1;
        let sections = self
            .sections
            .iter()
            .enumerate()
            .map(|(i, s)| if i == last { Ok(s.clone()) } else { s.thicken(space, epsilon) })
            .collect::<Result<Vec<_>>>()?;
        Ok(Tower { feet: dedup(feet), sections })
    }

    /// Equality after forgetting the order of the feet.
    pub fn same_up_to_feet_order(&self, other: &Tower) -> bool {
        self.sections == other.sections
            && self.feet.len() == other.feet.len()
            && self.feet.iter().all(|f| other.feet.contains(f))
    }
}

fn section_or_top(t: &Tower, i: usize) -> &CrossSection {
    t.sections.get(i).unwrap_or_else(|| t.top())
}

fn dedup(feet: Vec<ThickPoint>) -> Vec<ThickPoint> {
    let mut out: Vec<ThickPoint> = Vec::with_capacity(feet.len());
    for f in feet {
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// Folds `⊗` over `towers`, starting from the unit.
pub fn merge_all<'a>(towers: impl IntoIterator<Item = &'a Tower>) -> Tower {
    towers.into_iter().fold(Tower::empty(), |acc, t| acc.tensor(t))
}

/// The unique reshaping between two towers over the same feet.
#[derive(Debug, Clone, PartialEq)]
pub struct Reshaping {
    pub source: Tower,
    pub target: Tower,
}

pub fn reshape(source: &Tower, target: &Tower) -> Result<Reshaping> {
    if source.feet != target.feet {
        return Err(Error::BaseMismatch);
    }
    Ok(Reshaping { source: source.clone(), target: target.clone() })
}

impl Reshaping {
    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }

    pub fn inverse(&self) -> Reshaping {
        Reshaping { source: self.target.clone(), target: self.source.clone() }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Reshaping) -> Result<Reshaping> {
        if self.target != next.source {
            return Err(Error::InvalidTower(String::from("reshapings are not composable")));
        }
        Ok(Reshaping { source: self.source.clone(), target: next.target.clone() })
    }
}

/// 𝐊(U): a finite set of towers over common feet, codiscrete under
/// reshaping.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerGroupoid {
    pub feet: Vec<ThickPoint>,
    pub towers: Vec<Tower>,
}

impl TowerGroupoid {
    /// The canonical tower over `foot` followed by the distinct generators.
    pub fn kay(space: &InfoSpace, epsilon: f64, foot: &ThickPoint, generators: &[Tower]) -> Result<Self> {
        let canonical = Tower::canonical(space, epsilon, foot)?;
        let mut towers = vec![canonical];
        for g in generators {
            if g.feet.as_slice() != core::slice::from_ref(foot) {
                return Err(Error::BaseMismatch);
            }
            if let Some(v) = g.violations(space).into_iter().next() {
                return Err(Error::InvalidTower(v));
            }
            if !towers.contains(g) {
                towers.push(g.clone());
            }
        }
        Ok(Self { feet: vec![foot.clone()], towers })
    }

    /// The unit for [`TowerGroupoid::sum`]: the empty tower alone.
    pub fn unit() -> Self {
        Self { feet: Vec::new(), towers: vec![Tower::empty()] }
    }

    /// 𝐊(a ⊕ b): all merges `T ⊗ T'`, duplicates removed.
    pub fn sum(&self, other: &TowerGroupoid) -> TowerGroupoid {
        let mut feet = self.feet.clone();
        feet.extend(other.feet.iter().cloned());
        let mut towers: Vec<Tower> = Vec::new();
        for t in &self.towers {
            for u in &other.towers {
                let m = t.tensor(u);
                if !towers.contains(&m) {
                    towers.push(m);
                }
            }
        }
        TowerGroupoid { feet: dedup(feet), towers }
    }

    pub fn len(&self) -> usize {
        self.towers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.towers.is_empty()
    }

    pub fn position(&self, t: &Tower) -> Option<usize> {
        self.towers.iter().position(|u| u == t)
    }

    pub fn groupoid(&self) -> FinGroupoid {
        let labels: Vec<String> = (0..self.towers.len()).map(|i| format!("T{i}")).collect();
        FinGroupoid::codiscrete(&labels)
    }
}

/// `[T_{U_1} ⋯ T_{U_q}]`: tuples of towers whose merge is `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiTowerClass {
    pub target: Tower,
    pub representatives: Vec<Vec<Tower>>,
}

impl MultiTowerClass {
    pub fn new(target: Tower) -> Self {
        Self { target, representatives: Vec::new() }
    }

    /// Adds `tuple` if its merge equals the target.
    pub fn insert(&mut self, tuple: Vec<Tower>) -> Result<()> {
        if merge_all(&tuple) != self.target {
            return Err(Error::InvalidTower(String::from("tuple does not merge to the class target")));
        }
        if !self.representatives.contains(&tuple) {
            self.representatives.push(tuple);
        }
        Ok(())
    }

    /// Re-checks every stored representative.
    pub fn verify(&self) -> bool {
        self.representatives.iter().all(|r| merge_all(r) == self.target)
    }
}
