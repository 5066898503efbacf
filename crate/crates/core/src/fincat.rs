//! Explicit finite categories with composition tables.
//!
//! Objects and morphisms are dense indices. Composition is a partial table
//! keyed by `(g, f)` meaning `g ∘ f`; [`FinCategory::validate`] reports every
//! missing entry and every identity or associativity failure rather than
//! trusting the table.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub src: ObjId,
    pub dst: ObjId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<Option<MorId>>,
    composition: BTreeMap<(MorId, MorId), MorId>,
    homs: BTreeMap<(ObjId, ObjId), Vec<MorId>>,
    outgoing: Vec<Vec<MorId>>,
}

/// A single failed law, with enough indices to locate the counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawViolation {
    MissingIdentity { object: ObjId },
    IdentityEndpoints { object: ObjId, identity: MorId },
    MissingComposite { g: MorId, f: MorId },
    SpuriousComposite { g: MorId, f: MorId },
    CompositeEndpoints { g: MorId, f: MorId, composite: MorId },
    LeftIdentity { f: MorId },
    RightIdentity { f: MorId },
    Associativity { h: MorId, g: MorId, f: MorId },
    MissingInverse { f: MorId },
    InverseLaw { f: MorId },
}

impl LawViolation {
    pub fn law(&self) -> &'static str {
        match self {
            Self::MissingIdentity { .. } => "category.identity_exists",
            Self::IdentityEndpoints { .. } => "category.identity_endpoints",
            Self::MissingComposite { .. } => "category.composite_defined",
            Self::SpuriousComposite { .. } => "category.composite_composable",
            Self::CompositeEndpoints { .. } => "category.composite_endpoints",
            Self::LeftIdentity { .. } => "category.left_identity",
            Self::RightIdentity { .. } => "category.right_identity",
            Self::Associativity { .. } => "category.associativity",
            Self::MissingInverse { .. } => "groupoid.inverse_exists",
            Self::InverseLaw { .. } => "groupoid.inverse_law",
        }
    }
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.law())?;
        match self {
            Self::MissingIdentity { object } => write!(f, "object {} has no identity", object.0),
            Self::IdentityEndpoints { object, identity } => {
                write!(f, "identity {} of object {} is not an endomorphism of it", identity.0, object.0)
            }
            Self::MissingComposite { g, f: m } => write!(f, "{} ∘ {} undefined", g.0, m.0),
            Self::SpuriousComposite { g, f: m } => {
                write!(f, "{} ∘ {} defined for a non-composable pair", g.0, m.0)
            }
            Self::CompositeEndpoints { g, f: m, composite } => {
                write!(f, "{} ∘ {} = {} has wrong endpoints", g.0, m.0, composite.0)
            }
            Self::LeftIdentity { f: m } => write!(f, "id ∘ {} ≠ {}", m.0, m.0),
            Self::RightIdentity { f: m } => write!(f, "{} ∘ id ≠ {}", m.0, m.0),
            Self::Associativity { h, g, f: m } => {
                write!(f, "{} ∘ ({} ∘ {}) ≠ ({} ∘ {}) ∘ {}", h.0, g.0, m.0, h.0, g.0, m.0)
            }
            Self::MissingInverse { f: m } => write!(f, "{} has no inverse", m.0),
            Self::InverseLaw { f: m } => write!(f, "inverse of {} fails f⁻¹∘f = id or f∘f⁻¹ = id", m.0),
        }
    }
}

impl FinCategory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, label: impl Into<String>) -> ObjId {
        self.objects.push(label.into());
        self.identities.push(None);
        self.outgoing.push(Vec::new());
        ObjId(self.objects.len() - 1)
    }

    pub fn add_morphism(&mut self, src: ObjId, dst: ObjId, label: impl Into<String>) -> MorId {
        let id = MorId(self.morphisms.len());
        self.morphisms.push(Morphism { src, dst, label: label.into() });
        self.homs.entry((src, dst)).or_default().push(id);
        self.outgoing[src.0].push(id);
        id
    }

    /// Adds an endomorphism of `obj` and registers it as the identity.
    pub fn add_identity(&mut self, obj: ObjId, label: impl Into<String>) -> MorId {
        let id = self.add_morphism(obj, obj, label);
        self.identities[obj.0] = Some(id);
        id
    }

    pub fn set_identity(&mut self, obj: ObjId, id: MorId) {
        self.identities[obj.0] = Some(id);
    }

    /// Records `g ∘ f = h`, overwriting any previous entry.
    pub fn set_composite(&mut self, g: MorId, f: MorId, h: MorId) {
        self.composition.insert((g, f), h);
    }

    pub fn remove_composite(&mut self, g: MorId, f: MorId) -> Option<MorId> {
        self.composition.remove(&(g, f))
    }

    /// The complete thin category on `labels`: one morphism per ordered pair.
    pub fn codiscrete<S: AsRef<str>>(labels: &[S]) -> Self {
        let mut cat = Self::new();
        for l in labels {
            cat.add_object(l.as_ref());
        }
        let n = labels.len();
        // morphism index of (i, j) is i * n + j
        for i in 0..n {
            for j in 0..n {
                let label = format!("{}->{}", labels[i].as_ref(), labels[j].as_ref());
                let m = cat.add_morphism(ObjId(i), ObjId(j), label);
                if i == j {
                    cat.set_identity(ObjId(i), m);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    cat.set_composite(MorId(j * n + k), MorId(i * n + j), MorId(i * n + k));
                }
            }
        }
        cat
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = ObjId> + Clone {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphism_ids(&self) -> impl ExactSizeIterator<Item = MorId> + Clone {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn object_label(&self, o: ObjId) -> &str {
        &self.objects[o.0]
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m.0]
    }

    pub fn src(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].src
    }

    pub fn dst(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].dst
    }

    pub fn identity(&self, o: ObjId) -> Option<MorId> {
        self.identities.get(o.0).copied().flatten()
    }

    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.composition.get(&(g, f)).copied()
    }

    pub fn composition_table(&self) -> impl Iterator<Item = (MorId, MorId, MorId)> + '_ {
        self.composition.iter().map(|(&(g, f), &h)| (g, f, h))
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        self.homs.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn outgoing(&self, a: ObjId) -> &[MorId] {
        &self.outgoing[a.0]
    }

    pub fn check_object(&self, o: ObjId) -> Result<ObjId> {
        if o.0 < self.objects.len() {
            Ok(o)
        } else {
            Err(Error::UnknownObject(o.0))
        }
    }

    pub fn is_codiscrete(&self) -> bool {
        self.objects().all(|a| self.objects().all(|b| self.hom(a, b).len() == 1))
    }

    /// A two-sided inverse of `f` in the table, if one exists.
    pub fn inverse_of(&self, f: MorId) -> Option<MorId> {
        let (a, b) = (self.src(f), self.dst(f));
        let (ida, idb) = (self.identity(a)?, self.identity(b)?);
        self.hom(b, a).iter().copied().find(|&g| self.compose(g, f) == Some(ida) && self.compose(f, g) == Some(idb))
    }

    /// Every identity, closure and associativity failure of the table.
    /// Empty iff the table is a category.
    pub fn validate(&self) -> Vec<LawViolation> {
        let mut out = Vec::new();
        for o in self.objects() {
            match self.identity(o) {
                None => out.push(LawViolation::MissingIdentity { object: o }),
                Some(id) if self.src(id) != o || self.dst(id) != o => {
                    out.push(LawViolation::IdentityEndpoints { object: o, identity: id })
                }
                Some(_) => {}
            }
        }
        for (&(g, f), &h) in &self.composition {
            if self.dst(f) != self.src(g) {
                out.push(LawViolation::SpuriousComposite { g, f });
            } else if self.src(h) != self.src(f) || self.dst(h) != self.dst(g) {
                out.push(LawViolation::CompositeEndpoints { g, f, composite: h });
            }
        }
        for f in self.morphism_ids() {
            for &g in self.outgoing(self.dst(f)) {
                if self.compose(g, f).is_none() {
                    out.push(LawViolation::MissingComposite { g, f });
                }
            }
        }
        for f in self.morphism_ids() {
            if let Some(id) = self.identity(self.dst(f)) {
                if self.compose(id, f).is_some_and(|h| h != f) {
                    out.push(LawViolation::LeftIdentity { f });
                }
            }
            if let Some(id) = self.identity(self.src(f)) {
                if self.compose(f, id).is_some_and(|h| h != f) {
                    out.push(LawViolation::RightIdentity { f });
                }
            }
        }
        for f in self.morphism_ids() {
            for &g in self.outgoing(self.dst(f)) {
                let Some(gf) = self.compose(g, f) else { continue };
                for &h in self.outgoing(self.dst(g)) {
                    let Some(hg) = self.compose(h, g) else { continue };
                    let (Some(left), Some(right)) = (self.compose(h, gf), self.compose(hg, f)) else {
                        continue;
                    };
                    if left != right {
                        out.push(LawViolation::Associativity { h, g, f });
                    }
                }
            }
        }
        out
    }

    /// Relative micro-reversibility of `a` and `b` inside this category:
    /// every `f: a → b` must induce bijections `Hom(c, a) → Hom(c, b)` by
    /// postcomposition, for every object `c`.
    pub fn micro_reversibility(&self, a: ObjId, b: ObjId) -> Result<MicroReversibility> {
        self.check_object(a)?;
        self.check_object(b)?;
        let connecting = self.hom(a, b);
        if connecting.is_empty() {
            return Ok(MicroReversibility::NoConnectingMorphism);
        }
        for &f in connecting {
            for c in self.objects() {
                let domain = self.hom(c, a);
                let codomain = self.hom(c, b);
                let mut hit = vec![false; codomain.len()];
                for &x in domain {
                    let image = self.compose(f, x).and_then(|y| codomain.iter().position(|&m| m == y));
                    match image {
                        Some(i) if !hit[i] => hit[i] = true,
                        _ => return Ok(MicroReversibility::NotBijective { via: f, probe: c }),
                    }
                }
                if hit.iter().any(|h| !h) {
                    return Ok(MicroReversibility::NotBijective { via: f, probe: c });
                }
            }
        }
        Ok(MicroReversibility::Reversible)
    }

    pub fn is_micro_reversible(&self, a: ObjId, b: ObjId) -> Result<bool> {
        Ok(self.micro_reversibility(a, b)? == MicroReversibility::Reversible)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MicroReversibility {
    Reversible,
    NoConnectingMorphism,
    /// Postcomposition with `via` is not a bijection on homs out of `probe`.
    NotBijective {
        via: MorId,
        probe: ObjId,
    },
}

/// A functor between two finite categories, given by its two assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub on_objects: Vec<ObjId>,
    pub on_morphisms: Vec<MorId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    ObjectUnmapped { object: ObjId },
    MorphismUnmapped { morphism: MorId },
    Endpoints { morphism: MorId },
    Identity { object: ObjId },
    Composite { g: MorId, f: MorId },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ObjectUnmapped { object } => write!(f, "functor.total: object {} unmapped", object.0),
            Self::MorphismUnmapped { morphism } => {
                write!(f, "functor.total: morphism {} unmapped", morphism.0)
            }
            Self::Endpoints { morphism } => {
                write!(f, "functor.endpoints: image of morphism {} has wrong endpoints", morphism.0)
            }
            Self::Identity { object } => write!(f, "functor.identity: F(id_{}) ≠ id", object.0),
            Self::Composite { g, f: m } => {
                write!(f, "functor.composite: F({} ∘ {}) ≠ F({}) ∘ F({})", g.0, m.0, g.0, m.0)
            }
        }
    }
}

impl FinFunctor {
    pub fn identity(cat: &FinCategory) -> Self {
        Self { on_objects: cat.objects().collect(), on_morphisms: cat.morphism_ids().collect() }
    }

    pub fn object(&self, o: ObjId) -> Option<ObjId> {
        self.on_objects.get(o.0).copied()
    }

    pub fn morphism(&self, m: MorId) -> Option<MorId> {
        self.on_morphisms.get(m.0).copied()
    }

    /// `self ∘ first`, both assumed total.
    pub fn after(&self, first: &FinFunctor) -> FinFunctor {
        FinFunctor {
            on_objects: first.on_objects.iter().map(|o| self.on_objects[o.0]).collect(),
            on_morphisms: first.on_morphisms.iter().map(|m| self.on_morphisms[m.0]).collect(),
        }
    }

    /// Checks totality, endpoints, identities and every composable pair.
    pub fn check(&self, source: &FinCategory, target: &FinCategory) -> Vec<FunctorViolation> {
        let mut out = Vec::new();
        for o in source.objects() {
            if self.object(o).is_none_or(|t| t.0 >= target.object_count()) {
                out.push(FunctorViolation::ObjectUnmapped { object: o });
            }
        }
        for m in source.morphism_ids() {
            if self.morphism(m).is_none_or(|t| t.0 >= target.morphism_count()) {
                out.push(FunctorViolation::MorphismUnmapped { morphism: m });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for m in source.morphism_ids() {
            let t = self.on_morphisms[m.0];
            if target.src(t) != self.on_objects[source.src(m).0] || target.dst(t) != self.on_objects[source.dst(m).0] {
                out.push(FunctorViolation::Endpoints { morphism: m });
            }
        }
        for o in source.objects() {
            if let Some(id) = source.identity(o) {
                if target.identity(self.on_objects[o.0]) != Some(self.on_morphisms[id.0]) {
                    out.push(FunctorViolation::Identity { object: o });
                }
            }
        }
        for (g, f, h) in source.composition_table() {
            let image = target.compose(self.on_morphisms[g.0], self.on_morphisms[f.0]);
            if image != Some(self.on_morphisms[h.0]) {
                out.push(FunctorViolation::Composite { g, f });
            }
        }
        out
    }
}

/// A finite category together with a chosen inverse for every morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroupoid {
    pub category: FinCategory,
    pub inverse: Vec<MorId>,
}

impl FinGroupoid {
    /// Picks inverses from the composition table.
    pub fn from_category(category: FinCategory) -> Result<Self, LawViolation> {
        let inverse = category
            .morphism_ids()
            .map(|f| category.inverse_of(f).ok_or(LawViolation::MissingInverse { f }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { category, inverse })
    }

    pub fn codiscrete<S: AsRef<str>>(labels: &[S]) -> Self {
        let category = FinCategory::codiscrete(labels);
        let n = labels.len();
        let inverse = (0..n * n).map(|k| MorId((k % n) * n + k / n)).collect();
        Self { category, inverse }
    }

    pub fn is_codiscrete(&self) -> bool {
        self.category.is_codiscrete()
    }

    pub fn validate(&self) -> Vec<LawViolation> {
        let mut out = self.category.validate();
        let cat = &self.category;
        for f in cat.morphism_ids() {
            let Some(&inv) = self.inverse.get(f.0) else {
                out.push(LawViolation::MissingInverse { f });
                continue;
            };
            let ok = cat.compose(inv, f) == cat.identity(cat.src(f)) && cat.compose(f, inv) == cat.identity(cat.dst(f));
            if !ok {
                out.push(LawViolation::InverseLaw { f });
            }
        }
        out
    }

    /// The unique morphism between two objects of a codiscrete groupoid.
    pub fn unique_between(&self, a: ObjId, b: ObjId) -> Option<MorId> {
        match self.category.hom(a, b) {
            [m] => Some(*m),
            _ => None,
        }
    }
}

/// χ: C → Grpd, restricted to a finite base category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidValuedFunctor {
    pub base: FinCategory,
    /// Fiber groupoid per base object.
    pub fibers: Vec<FinGroupoid>,
    /// Transport functor per base morphism, `fibers[src] → fibers[dst]`.
    pub transport: Vec<FinFunctor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChiLawFailure {
    Shape(String),
    Transport { morphism: MorId, violation: FunctorViolation },
    Identity { object: ObjId },
    Composite { g: MorId, f: MorId },
}

impl fmt::Display for ChiLawFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shape(s) => write!(f, "chi.shape: {s}"),
            Self::Transport { morphism, violation } => {
                write!(f, "chi.transport: χ({}) is not a functor ({violation})", morphism.0)
            }
            Self::Identity { object } => write!(f, "chi.identity: χ(id_{}) ≠ identity functor", object.0),
            Self::Composite { g, f: m } => {
                write!(f, "chi.composite: χ({} ∘ {}) ≠ χ({}) ∘ χ({})", g.0, m.0, g.0, m.0)
            }
        }
    }
}

/// Outcome of checking χ's functor laws.
///
/// `strict` lists every place where χ fails on the nose. `fatal` is the
/// subset that is not repaired by a unique isomorphism in a codiscrete
/// target fiber; the category of elements exists iff `fatal` is empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChiLawReport {
    pub strict: Vec<ChiLawFailure>,
    pub fatal: Vec<ChiLawFailure>,
}

impl ChiLawReport {
    pub fn is_strict(&self) -> bool {
        self.strict.is_empty()
    }
}

impl GroupoidValuedFunctor {
    pub fn check_laws(&self) -> ChiLawReport {
        let mut report = ChiLawReport::default();
        if self.fibers.len() != self.base.object_count() {
            report.fatal.push(ChiLawFailure::Shape(format!(
                "{} fibers for {} base objects",
                self.fibers.len(),
                self.base.object_count()
            )));
        }
        if self.transport.len() != self.base.morphism_count() {
            report.fatal.push(ChiLawFailure::Shape(format!(
                "{} transports for {} base morphisms",
                self.transport.len(),
                self.base.morphism_count()
            )));
        }
        if !report.fatal.is_empty() {
            report.strict = report.fatal.clone();
            return report;
        }
        for (i, fiber) in self.fibers.iter().enumerate() {
            if let Some(v) = fiber.validate().first() {
                let failure = ChiLawFailure::Shape(format!("fiber {i} is not a groupoid ({v})"));
                report.strict.push(failure.clone());
                report.fatal.push(failure);
            }
        }
        for m in self.base.morphism_ids() {
            let (s, t) = (self.base.src(m), self.base.dst(m));
            for violation in self.transport[m.0].check(&self.fibers[s.0].category, &self.fibers[t.0].category) {
                let failure = ChiLawFailure::Transport { morphism: m, violation };
                report.strict.push(failure.clone());
                report.fatal.push(failure);
            }
        }
        if !report.fatal.is_empty() {
            return report;
        }
        for o in self.base.objects() {
            let Some(id) = self.base.identity(o) else { continue };
            if self.transport[id.0] != FinFunctor::identity(&self.fibers[o.0].category) {
                report.strict.push(ChiLawFailure::Identity { object: o });
                if !self.fibers[o.0].is_codiscrete() {
                    report.fatal.push(ChiLawFailure::Identity { object: o });
                }
            }
        }
        for (g, f, h) in self.base.composition_table() {
            let composed = self.transport[g.0].after(&self.transport[f.0]);
            if composed != self.transport[h.0] {
                report.strict.push(ChiLawFailure::Composite { g, f });
                if !self.fibers[self.base.dst(g).0].is_codiscrete() {
                    report.fatal.push(ChiLawFailure::Composite { g, f });
                }
            }
        }
        report
    }

    fn composes_strictly(&self, g: MorId, f: MorId, h: MorId) -> bool {
        self.transport[g.0].after(&self.transport[f.0]) == self.transport[h.0]
    }
}

/// The Grothendieck construction ∫χ with its projection to the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementsCategory {
    pub category: FinCategory,
    pub base: FinCategory,
    pub projection: FinFunctor,
    /// `(c, ξ)` for each object.
    pub elements: Vec<(ObjId, ObjId)>,
    /// `(f, α)` for each morphism; `α` lives in the fiber over `dst(f)`.
    pub arrows: Vec<(MorId, MorId)>,
}

/// Builds the category of elements of `chi`.
///
/// Objects are pairs `(c, ξ)` with `ξ` in `χ(c)`; a morphism
/// `(c, ξ) → (c', ψ)` is a pair `(f, α)` with `f: c → c'` and
/// `α: χ(f)(ξ) → ψ` in `χ(c')`. Composition is
/// `(g, β) ∘ (f, α) = (g ∘ f, β ∘ χ(g)(α))`, falling back to the unique
/// fiber morphism where χ is only pseudo-functorial on a codiscrete fiber.
pub fn category_of_elements(chi: &GroupoidValuedFunctor) -> Result<ElementsCategory> {
    let report = chi.check_laws();
    if let Some(first) = report.fatal.first() {
        return Err(Error::FunctorLawViolation(first.to_string()));
    }
    let base = &chi.base;
    let mut category = FinCategory::new();
    let mut elements = Vec::new();
    let mut element_index: BTreeMap<(ObjId, ObjId), ObjId> = BTreeMap::new();
    for c in base.objects() {
        let fiber = &chi.fibers[c.0].category;
        for xi in fiber.objects() {
            let id = category.add_object(format!("({}, {})", base.object_label(c), fiber.object_label(xi)));
            elements.push((c, xi));
            element_index.insert((c, xi), id);
        }
    }

    let mut arrows = Vec::new();
    let mut on_morphisms = Vec::new();
    let mut arrow_index: BTreeMap<(MorId, ObjId, MorId), MorId> = BTreeMap::new();
    for f in base.morphism_ids() {
        let (c, c2) = (base.src(f), base.dst(f));
        let target_fiber = &chi.fibers[c2.0].category;
        for xi in chi.fibers[c.0].category.objects() {
            let moved = chi.transport[f.0].on_objects[xi.0];
            for &alpha in target_fiber.outgoing(moved) {
                let psi = target_fiber.dst(alpha);
                let label = format!("({}, {})", base.morphism(f).label, target_fiber.morphism(alpha).label);
                let from = element_index[&(c, xi)];
                let to = element_index[&(c2, psi)];
                let m = category.add_morphism(from, to, label);
                arrows.push((f, alpha));
                on_morphisms.push(f);
                arrow_index.insert((f, from, alpha), m);
            }
        }
    }

    for o in category.objects() {
        let (c, xi) = elements[o.0];
        let Some(idc) = base.identity(c) else { continue };
        let fiber = &chi.fibers[c.0];
        let moved = chi.transport[idc.0].on_objects[xi.0];
        let alpha = if moved == xi { fiber.category.identity(xi) } else { fiber.unique_between(moved, xi) };
        if let Some(&m) = alpha.and_then(|a| arrow_index.get(&(idc, o, a))) {
            category.set_identity(o, m);
        }
    }

    let strict: BTreeMap<(MorId, MorId), bool> =
        base.composition_table().map(|(g, f, h)| ((g, f), chi.composes_strictly(g, f, h))).collect();
    let mut composites = Vec::new();
    for first in category.morphism_ids() {
        let (f, alpha) = arrows[first.0];
        let from = category.src(first);
        let xi = elements[from.0].1;
        let mid = category.dst(first);
        for &second in category.outgoing(mid) {
            let (g, beta) = arrows[second.0];
            let Some(gf) = base.compose(g, f) else { continue };
            let c3 = base.dst(g);
            let fiber3 = &chi.fibers[c3.0];
            let end = elements[category.dst(second).0].1;
            let gamma = if strict[&(g, f)] {
                let moved_alpha = chi.transport[g.0].on_morphisms[alpha.0];
                fiber3.category.compose(beta, moved_alpha)
            } else {
                fiber3.unique_between(chi.transport[gf.0].on_objects[xi.0], end)
            };
            if let Some(&h) = gamma.and_then(|gm| arrow_index.get(&(gf, from, gm))) {
                composites.push((second, first, h));
            }
        }
    }
    for (g, f, h) in composites {
        category.set_composite(g, f, h);
    }

    let projection = FinFunctor { on_objects: elements.iter().map(|&(c, _)| c).collect(), on_morphisms };
    Ok(ElementsCategory { category, base: base.clone(), projection, elements, arrows })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CofibrationFailure {
    Projection(FunctorViolation),
    FiberNotGroupoid { base: ObjId, morphism: MorId },
    NoCocartesianLift { base: MorId, element: ObjId },
    LiftsNotIsomorphic { base: MorId, element: ObjId },
}

impl fmt::Display for CofibrationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Projection(v) => write!(f, "cofibration.projection: {v}"),
            Self::FiberNotGroupoid { base, morphism } => write!(
                f,
                "cofibration.fiber_groupoid: morphism {} over object {} is not invertible in its fiber",
                morphism.0, base.0
            ),
            Self::NoCocartesianLift { base, element } => write!(
                f,
                "cofibration.cocartesian_lift: no cocartesian lift of base morphism {} at element {}",
                base.0, element.0
            ),
            Self::LiftsNotIsomorphic { base, element } => write!(
                f,
                "cofibration.lift_uniqueness: cocartesian lifts of {} at {} are not uniquely isomorphic",
                base.0, element.0
            ),
        }
    }
}

impl ElementsCategory {
    pub fn over(&self, c: ObjId) -> impl Iterator<Item = ObjId> + '_ {
        self.category.objects().filter(move |&o| self.projection.object(o) == Some(c))
    }

    /// Whether `phi: e → e'` over `f` is cocartesian: every `psi: e → e''`
    /// over `g ∘ f` factors as `chi ∘ phi` for a unique `chi` over `g`.
    pub fn is_cocartesian(&self, phi: MorId) -> bool {
        let cat = &self.category;
        let proj = &self.projection;
        let Some(f) = proj.morphism(phi) else { return false };
        let (e, e1) = (cat.src(phi), cat.dst(phi));
        let c1 = self.base.dst(f);
        for &psi in cat.outgoing(e) {
            let Some(h) = proj.morphism(psi) else { return false };
            let e2 = cat.dst(psi);
            let Some(c2) = proj.object(e2) else { return false };
            for &g in self.base.hom(c1, c2) {
                if self.base.compose(g, f) != Some(h) {
                    continue;
                }
                let factorizations = cat
                    .hom(e1, e2)
                    .iter()
                    .filter(|&&k| proj.morphism(k) == Some(g) && cat.compose(k, phi) == Some(psi))
                    .count();
                if factorizations != 1 {
                    return false;
                }
            }
        }
        true
    }
}

/// Checks that `e` is cofibered in groupoids over its base: fibers are
/// groupoids, and every base morphism has a cocartesian lift at every
/// element, unique up to unique fiber isomorphism.
pub fn check_cofibered(e: &ElementsCategory) -> Vec<CofibrationFailure> {
    let mut out: Vec<CofibrationFailure> =
        e.projection.check(&e.category, &e.base).into_iter().map(CofibrationFailure::Projection).collect();
    if !out.is_empty() {
        return out;
    }
    let cat = &e.category;
    let proj = &e.projection;
    for m in cat.morphism_ids() {
        let c = proj.on_objects[cat.src(m).0];
        if proj.on_objects[cat.dst(m).0] != c || e.base.identity(c) != Some(proj.on_morphisms[m.0]) {
            continue;
        }
        let invertible = cat.inverse_of(m).is_some_and(|inv| Some(proj.on_morphisms[inv.0]) == e.base.identity(c));
        if !invertible {
            out.push(CofibrationFailure::FiberNotGroupoid { base: c, morphism: m });
        }
    }
    for f in e.base.morphism_ids() {
        let c = e.base.src(f);
        for el in e.over(c) {
            let lifts: Vec<MorId> = cat
                .outgoing(el)
                .iter()
                .copied()
                .filter(|&m| proj.on_morphisms[m.0] == f && e.is_cocartesian(m))
                .collect();
            let Some(&first) = lifts.first() else {
                out.push(CofibrationFailure::NoCocartesianLift { base: f, element: el });
                continue;
            };
            let Some(idc1) = e.base.identity(e.base.dst(f)) else { continue };
            for &other in &lifts[1..] {
                let connecting: Vec<MorId> = cat
                    .hom(cat.dst(first), cat.dst(other))
                    .iter()
                    .copied()
                    .filter(|&k| proj.on_morphisms[k.0] == idc1 && cat.compose(k, first) == Some(other))
                    .collect();
                let ok = matches!(connecting.as_slice(), [k] if cat.inverse_of(*k).is_some());
                if !ok {
                    out.push(CofibrationFailure::LiftsNotIsomorphic { base: f, element: el });
                }
            }
        }
    }
    out
}
