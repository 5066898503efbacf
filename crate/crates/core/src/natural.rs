//! Reconstructed thick points and the degree-decay wave function.
//!
//! A [`Reconstruction`] labels atoms with natural-object names, possibly
//! merging several atoms into one label. The image of a thick point under the
//! labeling is a [`Blob`]: each label keeps the smallest degree among its
//! preimages and how many preimages it has.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::space::{AtomId, InfoSpace};
use crate::thick::{DirectedSystem, ThickPoint};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    labels: Vec<Option<String>>,
}

impl Reconstruction {
    /// Every atom labelled by its own name.
    pub fn identity(space: &InfoSpace) -> Self {
        Self { labels: space.names().iter().cloned().map(Some).collect() }
    }

    pub fn from_labels(labels: Vec<Option<String>>) -> Self {
        Self { labels }
    }

    /// Reads `(atom name, label)` pairs; atoms not mentioned stay unlabelled.
    pub fn from_pairs<A: AsRef<str>, L: AsRef<str>>(space: &InfoSpace, pairs: &[(A, L)]) -> Result<Self> {
        let mut labels = alloc::vec![None; space.len()];
        for (atom, label) in pairs {
            let a = space.atom(atom.as_ref())?;
            labels[a.0] = Some(label.as_ref().to_string());
        }
        Ok(Self { labels })
    }

    pub fn label(&self, a: AtomId) -> Option<&str> {
        self.labels.get(a.0).and_then(|l| l.as_deref())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlobEntry {
    pub min_degree: usize,
    pub multiplicity: usize,
}

/// `rec(U)` for a thick point `U`, with the source retained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blob {
    pub source: ThickPoint,
    /// Labels in order of their first member atom.
    pub entries: Vec<(String, BlobEntry)>,
}

impl Blob {
    pub fn entry(&self, label: &str) -> Option<BlobEntry> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, e)| *e)
    }
}

pub fn rec_point(tp: &ThickPoint, rec: &Reconstruction) -> Result<Blob> {
    let mut entries: Vec<(String, BlobEntry)> = Vec::new();
    for (&b, &degree) in tp.degrees() {
        let label = rec.label(b).ok_or_else(|| Error::UnlabeledAtom(b.to_string()))?;
        match entries.iter_mut().find(|(l, _)| l == label) {
            Some((_, e)) => {
                e.min_degree = e.min_degree.min(degree);
                e.multiplicity += 1;
            }
            None => entries.push((label.to_string(), BlobEntry { min_degree: degree, multiplicity: 1 })),
        }
    }
    Ok(Blob { source: tp.clone(), entries })
}

/// δ on blobs, transported through the retained source: `rec ∘ δ`.
pub fn blob_thicken(space: &InfoSpace, epsilon: f64, blob: &Blob, rec: &Reconstruction) -> Result<Blob> {
    rec_point(&blob.source.thicken(space, epsilon)?, rec)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecSquareMismatch {
    pub core: AtomId,
    pub level: usize,
}

/// Checks `rec(δU) = δ(rec U)` between consecutive entries of `levels`,
/// where `levels[p][i]` is the stored blob of the `i`-th core at level `p`.
pub fn check_rec_square_blobs(
    space: &InfoSpace,
    epsilon: f64,
    levels: &[Vec<Blob>],
    rec: &Reconstruction,
) -> Result<Vec<RecSquareMismatch>> {
    let mut out = Vec::new();
    for (p, pair) in levels.windows(2).enumerate() {
        for (here, up) in pair[0].iter().zip(&pair[1]) {
            if blob_thicken(space, epsilon, here, rec)? != *up {
                out.push(RecSquareMismatch { core: here.source.core(), level: p });
            }
        }
    }
    Ok(out)
}

/// The reconstruction square over every core and consecutive level pair of
/// a built system.
pub fn check_rec_square(
    space: &InfoSpace,
    system: &DirectedSystem,
    rec: &Reconstruction,
) -> Result<Vec<RecSquareMismatch>> {
    let blobs = system
        .levels
        .iter()
        .map(|l| l.points.iter().map(|tp| rec_point(tp, rec)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    check_rec_square_blobs(space, system.epsilon, &blobs, rec)
}

/// Normalized `λ^degree` distribution over a thick point's members.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub core: AtomId,
    pub level: usize,
    pub lambda: f64,
    pub prob: BTreeMap<AtomId, f64>,
}

impl WaveFunction {
    pub fn total(&self) -> f64 {
        self.prob.values().sum()
    }
}

pub fn wavefn(tp: &ThickPoint, lambda: f64) -> Result<WaveFunction> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    // powers by repeated multiplication; `powi` needs std
    let mut powers = alloc::vec![1.0f64];
    for k in 1..=tp.max_degree() {
        powers.push(powers[k - 1] * lambda);
    }
    let z: f64 = tp.degrees().values().map(|&k| powers[k]).sum();
    let prob = tp.degrees().iter().map(|(&b, &k)| (b, powers[k] / z)).collect();
    Ok(WaveFunction { core: tp.core(), level: tp.level(), lambda, prob })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn l5() -> InfoSpace {
        InfoSpace::from_line(&["a", "b", "c", "d", "e"], &[0.0, 1.0, 2.0, 3.0, 10.0]).unwrap()
    }

    #[test]
    fn identity_labels() {
        let s = l5();
        let tp = ThickPoint::at_level(&s, 1.5, AtomId(0), 2).unwrap();
        let blob = rec_point(&tp, &Reconstruction::identity(&s)).unwrap();
        let got: Vec<_> = blob.entries.iter().map(|(l, e)| (l.as_str(), e.min_degree, e.multiplicity)).collect();
        assert_eq!(got, vec![("a", 0, 1), ("b", 0, 1), ("c", 1, 1)]);
    }

    #[test]
    fn collapsing_labels() {
        let s = l5();
        let rec =
            Reconstruction::from_pairs(&s, &[("a", "a"), ("b", "x"), ("c", "x"), ("d", "d"), ("e", "e")]).unwrap();
        let tp = ThickPoint::at_level(&s, 1.5, AtomId(0), 2).unwrap();
        let blob = rec_point(&tp, &rec).unwrap();
        assert_eq!(blob.entries.len(), 2);
        assert_eq!(blob.entry("x"), Some(BlobEntry { min_degree: 0, multiplicity: 2 }));

        let single = ThickPoint::neighbourhood(&s, 1.5, AtomId(4)).unwrap();
        let blob = rec_point(&single, &rec).unwrap();
        assert_eq!(blob.entries, vec![("e".into(), BlobEntry { min_degree: 0, multiplicity: 1 })]);
    }

    #[test]
    fn unlabeled_atom() {
        let s = l5();
        let rec = Reconstruction::from_pairs(&s, &[("a", "a")]).unwrap();
        let tp = ThickPoint::neighbourhood(&s, 1.5, AtomId(0)).unwrap();
        assert!(matches!(rec_point(&tp, &rec), Err(Error::UnlabeledAtom(_))));
    }

    #[test]
    fn rec_square_commutes_and_catches_stale_blobs() {
        let s = l5();
        let sys = DirectedSystem::build(&s, 1.5, 3).unwrap();
        let id = Reconstruction::identity(&s);
        assert!(check_rec_square(&s, &sys, &id).unwrap().is_empty());
        let rec =
            Reconstruction::from_pairs(&s, &[("a", "a"), ("b", "x"), ("c", "x"), ("d", "d"), ("e", "e")]).unwrap();
        assert!(check_rec_square(&s, &sys, &rec).unwrap().is_empty());

        let mut blobs: Vec<Vec<Blob>> =
            sys.levels.iter().map(|l| l.points.iter().map(|tp| rec_point(tp, &id).unwrap()).collect()).collect();
        blobs[2][0].entries[2].1.min_degree = 0;
        let mismatches = check_rec_square_blobs(&s, 1.5, &blobs, &id).unwrap();
        assert_eq!(mismatches, vec![RecSquareMismatch { core: AtomId(0), level: 1 }]);
    }

    #[test]
    fn wave_function_values() {
        let s = l5();
        let tp = ThickPoint::at_level(&s, 1.5, AtomId(0), 2).unwrap();
        let w = wavefn(&tp, 0.5).unwrap();
        let probs: Vec<f64> = w.prob.values().copied().collect();
        assert_eq!(probs, vec![0.4, 0.4, 0.2]);

        let tp = ThickPoint::at_level(&s, 1.5, AtomId(0), 3).unwrap();
        let w = wavefn(&tp, 0.5).unwrap();
        let expected = [4.0 / 11.0, 4.0 / 11.0, 2.0 / 11.0, 1.0 / 11.0];
        for (p, e) in w.prob.values().zip(expected) {
            assert!((p - e).abs() <= 1e-15);
        }

        let single = ThickPoint::neighbourhood(&s, 1.5, AtomId(4)).unwrap();
        assert_eq!(wavefn(&single, 0.3).unwrap().prob[&AtomId(4)], 1.0);
    }

    #[test]
    fn lambda_range() {
        let tp = ThickPoint::point(AtomId(0));
        for bad in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(wavefn(&tp, bad), Err(Error::LambdaOutOfRange(_))));
        }
    }
}
