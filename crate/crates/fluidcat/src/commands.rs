//! Drivers behind each subcommand.

use std::path::PathBuf;

use clap::ValueEnum;
use fluidcat_core::bundle::{build_bundle, build_chi_pq, delta_bundle, duality_roundtrip, kay_cover_check, Generators};
use fluidcat_core::fincat::check_cofibered;
use fluidcat_core::natural::{rec_point, wavefn};
use fluidcat_core::thick::{DirectedSystem, ThickCategory, ThickPoint};
use fluidcat_core::tower::{merge_all, Tower};
use fluidcat_core::{AtomId, Error, InfoSpace};
use serde::Serialize;

use crate::document::{LoadedSpace, SpaceDocument};
use crate::dot;
use crate::error::{CliError, CliResult};
use crate::report::*;
use crate::suite::{run_all, SuiteConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Cover,
    System,
    Strata,
    Colimit,
    Wavefn,
    Towers,
    Bundle,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Cover => "cover",
            Self::System => "system",
            Self::Strata => "strata",
            Self::Colimit => "colimit",
            Self::Wavefn => "wavefn",
            Self::Towers => "towers",
            Self::Bundle => "bundle",
            Self::Check => "check",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Dot,
}

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Settings shared by every command. The output path is left out of the
/// report so that reports do not depend on where they are written.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub epsilon: f64,
    pub levels: usize,
    pub lambda: f64,
    pub arity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<String>,
    pub seed: u64,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, epsilon: f64) -> Self {
        Self {
            input: input.into(),
            epsilon,
            levels: 3,
            lambda: 0.5,
            arity: 1,
            core: None,
            seed: DEFAULT_SEED,
            output: None,
            format: Format::Json,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::NonpositiveEpsilon(self.epsilon).into());
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::LambdaOutOfRange(self.lambda).into());
        }
        if self.arity == 0 {
            return Err(Error::ZeroArity.into());
        }
        Ok(())
    }
}

/// What a command produced: the report text, warnings for stderr and the
/// process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, warnings: Vec::new(), exit_code: 0 }
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let loaded = SpaceDocument::read(&cfg.input)?.load()?;
    run_loaded(command, cfg, &loaded)
}

/// Like [`run`], on an already parsed space.
pub fn run_loaded(command: Command, cfg: &RunConfig, loaded: &LoadedSpace) -> CliResult<Outcome> {
    cfg.validate()?;
    let space = &loaded.space;
    let dot_unsupported = || CliError::NoDotRendering { command: command.name() };
    match command {
        Command::Cover => {
            let (report, warnings) = cover(space, cfg.epsilon)?;
            let text = match cfg.format {
                Format::Json => envelope(command, cfg, &report),
                Format::Dot => dot::eps_graph(space, cfg.epsilon)?,
            };
            Ok(Outcome { text, warnings, exit_code: 0 })
        }
        Command::System => {
            let system = DirectedSystem::build(space, cfg.epsilon, cfg.levels)?;
            Ok(Outcome::ok(match cfg.format {
                Format::Json => envelope(command, cfg, &system_report(space, &system)),
                Format::Dot => dot::system(space, &system.levels),
            }))
        }
        Command::Strata => {
            if cfg.format == Format::Dot {
                return Err(dot_unsupported());
            }
            let reports = selected_cores(space, cfg)?
                .into_iter()
                .map(|a| {
                    let tp = ThickPoint::at_level(space, cfg.epsilon, a, cfg.levels)?;
                    let strata = tp.strata()?;
                    Ok(StrataReport {
                        core: space.name(a).to_string(),
                        level: cfg.levels,
                        strata: strata.iter().map(|s| names(space, s)).collect(),
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(Outcome::ok(envelope(command, cfg, &reports)))
        }
        Command::Colimit => {
            if cfg.format == Format::Dot {
                return Err(dot_unsupported());
            }
            let system = DirectedSystem::build(space, cfg.epsilon, 0)?;
            let report = ColimitReport {
                epsilon: cfg.epsilon,
                cores: stabilization(space, &system),
                cells: system.colimit_cells().iter().map(|c| names(space, c)).collect(),
                collapses_to_whole: system.collapses_to_whole(space),
            };
            Ok(Outcome::ok(envelope(command, cfg, &report)))
        }
        Command::Wavefn => {
            if cfg.format == Format::Dot {
                return Err(dot_unsupported());
            }
            let reports = selected_cores(space, cfg)?
                .into_iter()
                .map(|a| {
                    let tp = ThickPoint::at_level(space, cfg.epsilon, a, cfg.levels)?;
                    let w = wavefn(&tp, cfg.lambda)?;
                    let blob = rec_point(&tp, &loaded.labels)?;
                    Ok(WavefnReport::new(space, &tp, &w, &blob))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(Outcome::ok(envelope(command, cfg, &reports)))
        }
        Command::Towers => {
            let level = ThickCategory::build(space, cfg.epsilon, cfg.levels)?;
            let cores = selected_cores(space, cfg)?;
            let canonical = cores
                .iter()
                .map(|&a| Tower::canonical(space, cfg.epsilon, level.point(a)))
                .collect::<fluidcat_core::Result<Vec<_>>>()?;
            let merged = merge_all(&canonical);
            match cfg.format {
                Format::Dot => {
                    let mut named: Vec<(String, &Tower)> =
                        cores.iter().zip(&canonical).map(|(&a, t)| (format!("T({})", space.name(a)), t)).collect();
                    if canonical.len() > 1 {
                        named.push((String::from("merged"), &merged));
                    }
                    Ok(Outcome::ok(dot::towers(space, &named)))
                }
                Format::Json => {
                    let towers = cores
                        .iter()
                        .zip(&canonical)
                        .map(|(&a, t)| {
                            Ok(CoreTowers {
                                core: space.name(a).to_string(),
                                canonical: TowerReport::new(space, t),
                                thickened: TowerReport::new(space, &t.thicken(space, cfg.epsilon)?),
                            })
                        })
                        .collect::<CliResult<Vec<_>>>()?;
                    let report = TowersReport { level: cfg.levels, towers, merged: TowerReport::new(space, &merged) };
                    Ok(Outcome::ok(envelope(command, cfg, &report)))
                }
            }
        }
        Command::Bundle => {
            let system = DirectedSystem::build(space, cfg.epsilon, cfg.levels + 1)?;
            let chi = build_chi_pq(space, &system, cfg.levels, cfg.arity, &Generators::new())?;
            let chi_strict = chi.functor.check_laws().is_strict();
            let bundle = build_bundle(chi)?;
            match cfg.format {
                Format::Dot => Ok(Outcome::ok(dot::bundle(&bundle))),
                Format::Json => {
                    let report = bundle_report(space, &system, &bundle, chi_strict)?;
                    let broken = [
                        &report.checks.cofibered,
                        &report.checks.cover,
                        &report.checks.duality,
                        &report.checks.delta_functor,
                    ]
                    .iter()
                    .flat_map(|v| v.iter())
                    .next()
                    .cloned();
                    if let Some(law) = broken {
                        return Err(CliError::LawViolation(law));
                    }
                    Ok(Outcome::ok(envelope(command, cfg, &report)))
                }
            }
        }
        Command::Check => {
            if cfg.format == Format::Dot {
                return Err(dot_unsupported());
            }
            let suite = SuiteConfig {
                epsilon: cfg.epsilon,
                levels: cfg.levels,
                lambda: cfg.lambda,
                arity: cfg.arity,
                seed: cfg.seed,
                towers: 24,
            };
            let summary = CheckSummary::new(run_all(space, &loaded.labels, &suite)?);
            let exit_code = summary.exit_code();
            let warnings = summary
                .suites
                .iter()
                .flat_map(|s| s.failed.iter().map(move |f| format!("{}: {} ({})", s.suite, f.law, f.counterexample)))
                .collect();
            Ok(Outcome { text: envelope(command, cfg, &summary), warnings, exit_code })
        }
    }
}

fn selected_cores(space: &InfoSpace, cfg: &RunConfig) -> CliResult<Vec<AtomId>> {
    Ok(match &cfg.core {
        Some(name) => vec![space.atom(name)?],
        None => space.atoms().collect(),
    })
}

fn cover(space: &InfoSpace, epsilon: f64) -> CliResult<(CoverReport, Vec<String>)> {
    let balls = space
        .atoms()
        .map(|a| Ok(BallReport { atom: space.name(a).to_string(), members: names(space, &space.ball(a, epsilon)?) }))
        .collect::<CliResult<Vec<_>>>()?;
    let components = space.components(epsilon)?;
    let connected = components.len() == 1;
    let warning = (!connected).then(|| {
        format!("the ε-graph has {} components, so the colimit does not reach the whole space", components.len())
    });
    let report = CoverReport {
        epsilon,
        balls,
        components: components.iter().map(|c| names(space, c)).collect(),
        connected,
        warning: warning.clone(),
    };
    Ok((report, warning.into_iter().collect()))
}

fn stabilization(space: &InfoSpace, system: &DirectedSystem) -> Vec<StabilizationEntry> {
    space
        .atoms()
        .map(|a| StabilizationEntry {
            core: space.name(a).to_string(),
            step: system.stabilization[a.0],
            colimit: names(space, &system.stable[a.0]),
        })
        .collect()
}

fn system_report(space: &InfoSpace, system: &DirectedSystem) -> SystemReport {
    SystemReport {
        epsilon: system.epsilon,
        levels: system
            .levels
            .iter()
            .map(|l| LevelReport {
                level: l.level,
                objects: l.category.object_count(),
                morphisms: l.category.morphism_count(),
                points: l.points.iter().map(|tp| PointReport::new(space, tp)).collect(),
            })
            .collect(),
        stabilization: stabilization(space, system),
    }
}

fn bundle_report(
    space: &InfoSpace,
    system: &DirectedSystem,
    bundle: &fluidcat_core::bundle::TowerBundle,
    chi_strict: bool,
) -> CliResult<BundleReport> {
    let base = bundle.base();
    let fibers = base
        .objects()
        .map(|o| FiberReport {
            base_object: o.0,
            label: base.object_label(o).to_string(),
            elements: bundle.elements.over(o).map(|e| e.0).collect(),
            towers: (0..bundle.fibers[o.0].len()).map(|i| format!("T{i}")).collect(),
        })
        .collect();
    let delta = delta_bundle(space, system, bundle)?;
    Ok(BundleReport {
        level: bundle.level,
        arity: bundle.arity,
        base: BaseSummary {
            objects: base.objects().map(|o| base.object_label(o).to_string()).collect(),
            morphisms: base.morphism_count(),
        },
        fibers,
        elements: ElementsSummary { objects: bundle.object_count(), morphisms: bundle.morphism_count() },
        projection: bundle.elements.projection.on_objects.iter().map(|o| o.0).collect(),
        checks: BundleChecks {
            chi_strict,
            cofibered: check_cofibered(&bundle.elements).iter().map(ToString::to_string).collect(),
            cover: kay_cover_check(space, bundle)
                .iter()
                .map(|c| format!("tops miss {}", space.display_set(&c.missing)))
                .collect(),
            duality: duality_roundtrip(bundle, system)?.iter().map(ToString::to_string).collect(),
            delta_functor: delta.check_functor(bundle).iter().map(ToString::to_string).collect(),
        },
    })
}

fn envelope<R: Serialize>(command: Command, cfg: &RunConfig, result: &R) -> String {
    Envelope::new(command.name(), cfg, result).to_json()
}
