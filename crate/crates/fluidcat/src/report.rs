//! Serializable reports and the common JSON envelope.

use fluidcat_core::natural::{Blob, WaveFunction};
use fluidcat_core::thick::ThickPoint;
use fluidcat_core::tower::{CrossSection, Tower};
use fluidcat_core::{AtomSet, InfoSpace};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a C,
    pub result: R,
}

impl<'a, C: Serialize, R: Serialize> Envelope<'a, C, R> {
    pub fn new(command: &'a str, config: &'a C, result: R) -> Self {
        Self { tool: "fluidcat", version: env!("CARGO_PKG_VERSION"), command, config, result }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

pub fn names(space: &InfoSpace, set: &AtomSet) -> Vec<String> {
    set.iter().map(|&a| space.name(a).to_string()).collect()
}

#[derive(Debug, Serialize)]
pub struct BallReport {
    pub atom: String,
    pub members: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CoverReport {
    pub epsilon: f64,
    pub balls: Vec<BallReport>,
    pub components: Vec<Vec<String>>,
    pub connected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct DegreeEntry {
    pub atom: String,
    pub degree: usize,
}

#[derive(Debug, Serialize)]
pub struct PointReport {
    pub core: String,
    pub level: usize,
    pub members: Vec<String>,
    pub degrees: Vec<DegreeEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strata: Option<Vec<Vec<String>>>,
}

impl PointReport {
    pub fn new(space: &InfoSpace, tp: &ThickPoint) -> Self {
        let strata = tp.strata().ok().map(|s| s.iter().map(|set| names(space, set)).collect());
        Self {
            core: space.name(tp.core()).to_string(),
            level: tp.level(),
            members: names(space, &tp.members()),
            degrees: tp
                .degrees()
                .iter()
                .map(|(&a, &degree)| DegreeEntry { atom: space.name(a).to_string(), degree })
                .collect(),
            strata,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub objects: usize,
    pub morphisms: usize,
    pub points: Vec<PointReport>,
}

#[derive(Debug, Serialize)]
pub struct StabilizationEntry {
    pub core: String,
    pub step: usize,
    pub colimit: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct SystemReport {
    pub epsilon: f64,
    pub levels: Vec<LevelReport>,
    pub stabilization: Vec<StabilizationEntry>,
}

#[derive(Debug, Serialize)]
pub struct StrataReport {
    pub core: String,
    pub level: usize,
    pub strata: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct ColimitReport {
    pub epsilon: f64,
    pub cores: Vec<StabilizationEntry>,
    pub cells: Vec<Vec<String>>,
    pub collapses_to_whole: bool,
}

#[derive(Debug, Serialize)]
pub struct AtomProbability {
    pub atom: String,
    pub degree: usize,
    pub prob: f64,
}

#[derive(Debug, Serialize)]
pub struct BlobEntryReport {
    pub label: String,
    pub min_degree: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Serialize)]
pub struct WavefnReport {
    pub core: String,
    pub level: usize,
    pub lambda: f64,
    pub prob: Vec<AtomProbability>,
    pub total: f64,
    pub blob: Vec<BlobEntryReport>,
}

impl WavefnReport {
    pub fn new(space: &InfoSpace, tp: &ThickPoint, w: &WaveFunction, blob: &Blob) -> Self {
        Self {
            core: space.name(w.core).to_string(),
            level: w.level,
            lambda: w.lambda,
            prob: w
                .prob
                .iter()
                .map(|(&a, &prob)| AtomProbability {
                    atom: space.name(a).to_string(),
                    degree: tp.degree(a).unwrap_or_default(),
                    prob,
                })
                .collect(),
            total: w.total(),
            blob: blob
                .entries
                .iter()
                .map(|(label, e)| BlobEntryReport {
                    label: label.clone(),
                    min_degree: e.min_degree,
                    multiplicity: e.multiplicity,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FootReport {
    pub core: String,
    pub level: usize,
    pub members: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct IntensityEntry {
    pub atom: String,
    pub intensity: f64,
}

#[derive(Debug, Serialize)]
pub struct SectionReport {
    pub members: Vec<String>,
    pub intensities: Vec<IntensityEntry>,
}

impl SectionReport {
    pub fn new(space: &InfoSpace, s: &CrossSection) -> Self {
        Self {
            members: names(space, &s.members()),
            intensities: s
                .intensities()
                .iter()
                .map(|(&a, &intensity)| IntensityEntry { atom: space.name(a).to_string(), intensity })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TowerReport {
    pub feet: Vec<FootReport>,
    pub sections: Vec<SectionReport>,
}

impl TowerReport {
    pub fn new(space: &InfoSpace, t: &Tower) -> Self {
        Self {
            feet: t
                .feet()
                .iter()
                .map(|f| FootReport {
                    core: space.name(f.core()).to_string(),
                    level: f.level(),
                    members: names(space, &f.members()),
                })
                .collect(),
            sections: t.sections().iter().map(|s| SectionReport::new(space, s)).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CoreTowers {
    pub core: String,
    pub canonical: TowerReport,
    pub thickened: TowerReport,
}

#[derive(Debug, Serialize)]
pub struct TowersReport {
    pub level: usize,
    pub towers: Vec<CoreTowers>,
    pub merged: TowerReport,
}

#[derive(Debug, Serialize)]
pub struct BaseSummary {
    pub objects: Vec<String>,
    pub morphisms: usize,
}

#[derive(Debug, Serialize)]
pub struct FiberReport {
    pub base_object: usize,
    pub label: String,
    pub elements: Vec<usize>,
    pub towers: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ElementsSummary {
    pub objects: usize,
    pub morphisms: usize,
}

#[derive(Debug, Serialize)]
pub struct BundleChecks {
    pub chi_strict: bool,
    pub cofibered: Vec<String>,
    pub cover: Vec<String>,
    pub duality: Vec<String>,
    pub delta_functor: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct BundleReport {
    pub level: usize,
    pub arity: usize,
    pub base: BaseSummary,
    pub fibers: Vec<FiberReport>,
    pub elements: ElementsSummary,
    pub projection: Vec<usize>,
    pub checks: BundleChecks,
}

/// A broken law and the counterexample that broke it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    pub law: String,
    pub counterexample: String,
}

/// Outcome of one law suite: `passed` counts the individual checks that held.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub passed: usize,
    pub failed: Vec<LawFailure>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), passed: 0, failed: Vec::new() }
    }

    pub fn total(&self) -> usize {
        self.passed + self.failed.len()
    }

    pub fn is_clean(&self) -> bool {
        self.failed.is_empty()
    }

    /// Records one check: a pass, or one failure per counterexample.
    pub fn record<I, S>(&mut self, law: &str, counterexamples: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let before = self.failed.len();
        self.failed.extend(
            counterexamples.into_iter().map(|c| LawFailure { law: law.to_string(), counterexample: c.to_string() }),
        );
        if self.failed.len() == before {
            self.passed += 1;
        }
    }

    pub fn expect(&mut self, law: &str, holds: bool, counterexample: impl FnOnce() -> String) {
        if holds {
            self.passed += 1;
        } else {
            self.failed.push(LawFailure { law: law.to_string(), counterexample: counterexample() });
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckSummary {
    pub passed: usize,
    pub failed: usize,
    pub suites: Vec<CheckReport>,
}

impl CheckSummary {
    pub fn new(suites: Vec<CheckReport>) -> Self {
        Self {
            passed: suites.iter().map(|s| s.passed).sum(),
            failed: suites.iter().map(|s| s.failed.len()).sum(),
            suites,
        }
    }

    /// 0 when every law held, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed > 0)
    }
}
