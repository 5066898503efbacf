//! Seeded random spaces and towers for the law suites.

use std::collections::BTreeMap;

use fluidcat_core::bundle::Generators;
use fluidcat_core::thick::ThickPoint;
use fluidcat_core::tower::{CrossSection, Tower};
use fluidcat_core::{AtomId, InfoSpace, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` atoms named `x0, x1, …` with independent distances drawn from
/// `{0.01, …, 10.00}`.
pub fn random_space(rng: &mut impl Rng, n: usize) -> InfoSpace {
    let upper: Vec<f64> =
        (0..n * n.saturating_sub(1) / 2).map(|_| f64::from(rng.gen_range(1u32..=1000)) / 100.0).collect();
    let rows = symmetric(n, &upper);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    InfoSpace::from_matrix(&names, &rows).expect("generated matrices are valid")
}

/// The symmetric zero-diagonal matrix with `upper` as its strict upper
/// triangle, read row by row.
pub fn symmetric(n: usize, upper: &[f64]) -> Vec<Vec<f64>> {
    let at = |i: usize, j: usize| upper[i * n - i * (i + 1) / 2 + (j - i - 1)];
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => 0.0,
                    std::cmp::Ordering::Less => at(i, j),
                    std::cmp::Ordering::Greater => at(j, i),
                })
                .collect()
        })
        .collect()
}

/// A tower over `foot` whose sections add atoms at random stages, with
/// intensities growing toward 1 at the top.
pub fn random_tower(rng: &mut impl Rng, space: &InfoSpace, foot: &ThickPoint) -> Result<Tower> {
    let height = rng.gen_range(1..=3usize);
    let base = foot.members();
    let first: Vec<usize> =
        space.atoms().map(|a| if base.contains(&a) { 0 } else { rng.gen_range(1..=height) }).collect();
    let weight: Vec<f64> = space.atoms().map(|_| f64::from(rng.gen_range(1..=4u32)) / 4.0).collect();
    let sections = (0..=height)
        .map(|j| {
            let intensity: BTreeMap<AtomId, f64> = space
                .atoms()
                .filter(|a| first[a.0] <= j)
                .map(|a| {
                    let v = if j == height { 1.0 } else { weight[a.0] * (j + 1) as f64 / (height + 1) as f64 };
                    (a, v)
                })
                .collect();
            CrossSection::new(intensity)
        })
        .collect();
    Tower::new(space, vec![foot.clone()], sections)
}

/// Either the canonical tower or a random one, over a random level-`p`
/// thick point.
pub fn random_based_tower(rng: &mut impl Rng, space: &InfoSpace, epsilon: f64, max_level: usize) -> Result<Tower> {
    let core = AtomId(rng.gen_range(0..space.len()));
    let foot = ThickPoint::at_level(space, epsilon, core, rng.gen_range(0..=max_level))?;
    if rng.gen_bool(0.25) {
        Tower::canonical(space, epsilon, &foot)
    } else {
        random_tower(rng, space, &foot)
    }
}

/// Up to `per_core` random towers over each level-`p` thick point.
pub fn random_generators(
    rng: &mut impl Rng,
    space: &InfoSpace,
    points: &[ThickPoint],
    per_core: usize,
) -> Result<Generators> {
    let mut gens = Generators::new();
    for tp in points {
        let count = rng.gen_range(0..=per_core);
        let towers = (0..count).map(|_| random_tower(rng, space, tp)).collect::<Result<Vec<_>>>()?;
        gens.insert(tp.core(), towers);
    }
    Ok(gens)
}

/// Splits `towers` into two non-empty groups at random (when possible).
pub fn random_split(rng: &mut impl Rng, towers: &[Tower]) -> (Vec<Tower>, Vec<Tower>) {
    let mut shuffled = towers.to_vec();
    shuffled.shuffle(rng);
    let cut = if shuffled.len() < 2 { shuffled.len() } else { rng.gen_range(1..shuffled.len()) };
    let right = shuffled.split_off(cut);
    (shuffled, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_fills_both_triangles() {
        let m = symmetric(3, &[1.0, 2.0, 3.0]);
        assert_eq!(m, vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 3.0], vec![2.0, 3.0, 0.0]]);
        assert_eq!(symmetric(1, &[]), vec![vec![0.0]]);
    }

    #[test]
    fn seeded_spaces_repeat() {
        let a = random_space(&mut rng(7), 6);
        let b = random_space(&mut rng(7), 6);
        assert_eq!(a, b);
        assert_ne!(a, random_space(&mut rng(8), 6));
    }

    #[test]
    fn random_towers_are_valid() {
        let mut r = rng(1);
        for _ in 0..50 {
            let space = random_space(&mut r, 7);
            let t = random_based_tower(&mut r, &space, 3.0, 2).unwrap();
            assert!(t.violations(&space).is_empty());
        }
    }

    #[test]
    fn splits_cover_the_input() {
        let s = random_space(&mut rng(2), 4);
        let towers: Vec<Tower> =
            (0..4).map(|i| Tower::canonical(&s, 3.0, &ThickPoint::point(AtomId(i))).unwrap()).collect();
        let (l, r) = random_split(&mut rng(3), &towers);
        assert!(!l.is_empty() && !r.is_empty());
        assert_eq!(l.len() + r.len(), 4);
    }
}
