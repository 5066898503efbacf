//! Finite information spaces and the ε-proximity relation.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Index of an atom in its space. Ordering follows the input atom list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub usize);

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Sets of atoms iterate in input order.
pub type AtomSet = BTreeSet<AtomId>;

/// A finite atom set with a symmetric, non-negative information distance.
///
/// The distance needs zero self-distance and symmetry; the triangle
/// inequality is not assumed anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoSpace {
    names: Vec<String>,
    dist: Vec<f64>,
}

impl InfoSpace {
    /// Builds a space from a square distance matrix whose rows follow `names`.
    pub fn from_matrix<S: AsRef<str>>(names: &[S], rows: &[Vec<f64>]) -> Result<Self> {
        let n = names.len();
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateAtom(name.clone()));
            }
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::MatrixShape(n));
        }
        for i in 0..n {
            for j in 0..n {
                let d = rows[i][j];
                if !d.is_finite() {
                    return Err(Error::NonFiniteDistance(names[i].clone(), names[j].clone()));
                }
                if d < 0.0 {
                    return Err(Error::NegativeDistance(names[i].clone(), names[j].clone()));
                }
            }
            if rows[i][i] != 0.0 {
                return Err(Error::NonzeroDiagonal(names[i].clone()));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::AsymmetricMetric(names[i].clone(), names[j].clone()));
                }
            }
        }
        let dist = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Ok(Self { names, dist })
    }

    /// Points on a line with the absolute-difference metric.
    pub fn from_line<S: AsRef<str>>(names: &[S], coords: &[f64]) -> Result<Self> {
        if coords.len() != names.len() {
            return Err(Error::MatrixShape(names.len()));
        }
        let rows: Vec<Vec<f64>> =
            coords.iter().map(|&x| coords.iter().map(|&y| if x > y { x - y } else { y - x }).collect()).collect();
        Self::from_matrix(names, &rows)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn atoms(&self) -> impl ExactSizeIterator<Item = AtomId> + Clone {
        (0..self.names.len()).map(AtomId)
    }

    /// The whole atom set, the finite stand-in for the ambient space Ω.
    pub fn all(&self) -> AtomSet {
        self.atoms().collect()
    }

    pub fn name(&self, a: AtomId) -> &str {
        &self.names[a.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn atom(&self, name: &str) -> Result<AtomId> {
        self.names.iter().position(|n| n == name).map(AtomId).ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }

    pub fn contains(&self, a: AtomId) -> bool {
        a.0 < self.names.len()
    }

    pub fn check(&self, a: AtomId) -> Result<AtomId> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::UnknownAtom(a.to_string()))
        }
    }

    /// Distance between two atoms. Panics on foreign ids.
    pub fn dist(&self, a: AtomId, b: AtomId) -> f64 {
        self.dist[a.0 * self.names.len() + b.0]
    }

    /// ν_ε(a) = { b : d(a, b) < ε }. Always contains `a`.
    pub fn ball(&self, a: AtomId, epsilon: f64) -> Result<AtomSet> {
        check_epsilon(epsilon)?;
        self.check(a)?;
        Ok(self.atoms().filter(|&b| self.dist(a, b) < epsilon).collect())
    }

    /// Union of ε-balls of every member of `set`.
    pub fn thicken_set(&self, set: &AtomSet, epsilon: f64) -> Result<AtomSet> {
        check_epsilon(epsilon)?;
        let mut out = AtomSet::new();
        for &a in set {
            self.check(a)?;
            out.extend(self.atoms().filter(|&b| self.dist(a, b) < epsilon));
        }
        Ok(out)
    }

    pub fn eps_graph(&self, epsilon: f64) -> Result<EpsGraph> {
        check_epsilon(epsilon)?;
        let mut edges = Vec::new();
        for a in self.atoms() {
            for b in self.atoms().skip(a.0 + 1) {
                if self.dist(a, b) < epsilon {
                    edges.push((a, b));
                }
            }
        }
        Ok(EpsGraph { epsilon, atoms: self.len(), edges })
    }

    /// Connected components of the ε-graph, the transitive closure of the
    /// proximity relation. Cells are ordered by their first atom.
    pub fn components(&self, epsilon: f64) -> Result<Vec<AtomSet>> {
        let graph = self.eps_graph(epsilon)?;
        let mut parent: Vec<usize> = (0..self.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &graph.edges {
            let (ra, rb) = (find(&mut parent, a.0), find(&mut parent, b.0));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
        let mut cells: Vec<(usize, AtomSet)> = Vec::new();
        for a in self.atoms() {
            let root = find(&mut parent, a.0);
            match cells.iter_mut().find(|(r, _)| *r == root) {
                Some((_, cell)) => {
                    cell.insert(a);
                }
                None => cells.push((root, AtomSet::from([a]))),
            }
        }
        Ok(cells.into_iter().map(|(_, c)| c).collect())
    }

    /// Information content ι, modelled as cardinality.
    pub fn info_content(&self, set: &AtomSet) -> Result<usize> {
        for &a in set {
            self.check(a)?;
        }
        Ok(set.len())
    }

    pub fn display_set(&self, set: &AtomSet) -> String {
        let mut s = String::from("{");
        for (i, &a) in set.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(self.name(a));
        }
        s.push('}');
        s
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    // NaN fails this comparison too.
    if epsilon > 0.0 {
        Ok(())
    } else {
        Err(Error::NonpositiveEpsilon(epsilon))
    }
}

/// Undirected ε-graph: edges `{a, b}` with `a < b` and `d(a, b) < ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsGraph {
    pub epsilon: f64,
    pub atoms: usize,
    pub edges: Vec<(AtomId, AtomId)>,
}

impl EpsGraph {
    pub fn neighbours(&self, a: AtomId) -> impl Iterator<Item = AtomId> + '_ {
        self.edges.iter().filter_map(move |&(x, y)| {
            if x == a {
                Some(y)
            } else if y == a {
                Some(x)
            } else {
                None
            }
        })
    }

    pub fn is_related(&self, a: AtomId, b: AtomId) -> bool {
        a == b || self.edges.contains(&if a < b { (a, b) } else { (b, a) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn l5() -> InfoSpace {
        InfoSpace::from_line(&["a", "b", "c", "d", "e"], &[0.0, 1.0, 2.0, 3.0, 10.0]).unwrap()
    }

    fn set(space: &InfoSpace, names: &[&str]) -> AtomSet {
        names.iter().map(|n| space.atom(n).unwrap()).collect()
    }

    #[test]
    fn line_distances() {
        let s = l5();
        let (a, d) = (s.atom("a").unwrap(), s.atom("d").unwrap());
        assert_eq!(s.dist(a, d), 3.0);
        assert_eq!(s.dist(d, a), 3.0);
    }

    #[test]
    fn single_atom_space() {
        let s = InfoSpace::from_matrix(&["a"], &[vec![0.0]]).unwrap();
        assert_eq!(s.dist(AtomId(0), AtomId(0)), 0.0);
        assert_eq!(s.components(3.0).unwrap(), vec![set(&s, &["a"])]);
    }

    #[test]
    fn matrix_validation() {
        let err = InfoSpace::from_matrix(&["a", "b"], &[vec![0.0, 1.0], vec![2.0, 0.0]]);
        assert!(matches!(err, Err(Error::AsymmetricMetric(..))));
        let err = InfoSpace::from_matrix(&["a", "b"], &[vec![0.0, -1.0], vec![-1.0, 0.0]]);
        assert!(matches!(err, Err(Error::NegativeDistance(..))));
        let err = InfoSpace::from_matrix(&["a", "b"], &[vec![0.5, 1.0], vec![1.0, 0.0]]);
        assert!(matches!(err, Err(Error::NonzeroDiagonal(..))));
        let err = InfoSpace::from_matrix(&["a", "a"], &[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(matches!(err, Err(Error::DuplicateAtom(..))));
        let err = InfoSpace::from_matrix(&["a", "b"], &[vec![0.0, 1.0]]);
        assert!(matches!(err, Err(Error::MatrixShape(2))));
    }

    #[test]
    fn balls_on_the_line() {
        let s = l5();
        let a = s.atom("a").unwrap();
        let b = s.atom("b").unwrap();
        assert_eq!(s.ball(a, 1.5).unwrap(), set(&s, &["a", "b"]));
        assert_eq!(s.ball(a, 0.5).unwrap(), set(&s, &["a"]));
        assert_eq!(s.ball(b, 1.5).unwrap(), set(&s, &["a", "b", "c"]));
        // strict inequality: d(a,b) = 1 is not < 1
        assert_eq!(s.ball(a, 1.0).unwrap(), set(&s, &["a"]));
    }

    #[test]
    fn ball_errors() {
        let s = l5();
        assert!(matches!(s.ball(AtomId(0), 0.0), Err(Error::NonpositiveEpsilon(_))));
        assert!(matches!(s.ball(AtomId(0), f64::NAN), Err(Error::NonpositiveEpsilon(_))));
        assert!(matches!(s.ball(AtomId(9), 1.0), Err(Error::UnknownAtom(_))));
        assert!(matches!(s.components(-1.0), Err(Error::NonpositiveEpsilon(_))));
    }

    #[test]
    fn components_on_the_line() {
        let s = l5();
        assert_eq!(s.components(1.5).unwrap(), vec![set(&s, &["a", "b", "c", "d"]), set(&s, &["e"])]);
        assert_eq!(s.components(20.0).unwrap(), vec![s.all()]);
    }

    #[test]
    fn info_content_is_cardinality() {
        let s = l5();
        assert_eq!(s.info_content(&AtomSet::new()).unwrap(), 0);
        assert_eq!(s.info_content(&set(&s, &["a", "b", "c"])).unwrap(), 3);
        assert_eq!(s.info_content(&s.all()).unwrap(), 5);
        assert!(s.info_content(&AtomSet::from([AtomId(7)])).is_err());
    }

    #[test]
    fn eps_graph_relation() {
        let s = l5();
        let g = s.eps_graph(1.5).unwrap();
        assert_eq!(g.edges.len(), 3);
        assert!(g.is_related(AtomId(2), AtomId(1)));
        assert!(g.is_related(AtomId(4), AtomId(4)));
        assert!(!g.is_related(AtomId(0), AtomId(2)));
        assert_eq!(g.neighbours(AtomId(1)).collect::<Vec<_>>(), vec![AtomId(0), AtomId(2)]);
    }
}
