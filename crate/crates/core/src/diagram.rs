//! Persistence pairs and diagrams.

use std::cmp::Ordering;

use crate::complex::VertexList;

#[derive(Clone, Debug, PartialEq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    /// For an infinite class this is the maximum field value.
    pub death: f64,
    pub finite: bool,
    /// Vertices of the creating simplex.
    pub birth_vertices: VertexList,
    /// Vertices of the destroying simplex; empty for infinite classes.
    pub death_vertices: VertexList,
}

impl PersistencePair {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    fn cmp_rows(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.birth.total_cmp(&other.birth))
            .then(self.death.total_cmp(&other.death))
            .then(other.finite.cmp(&self.finite))
            .then_with(|| self.birth_vertices.as_slice().cmp(other.birth_vertices.as_slice()))
            .then_with(|| self.death_vertices.as_slice().cmp(other.death_vertices.as_slice()))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PersistenceDiagram {
    pairs: Vec<PersistencePair>,
    /// Maximum field value, used as the death of infinite classes.
    pub max_value: f64,
    /// Free-form `key=value` provenance written to the file header.
    pub provenance: Vec<(String, String)>,
}

impl PersistenceDiagram {
    pub fn new(mut pairs: Vec<PersistencePair>, max_value: f64) -> Self {
        pairs.sort_by(PersistencePair::cmp_rows);
        Self {
            pairs,
            max_value,
            provenance: Vec::new(),
        }
    }

    pub fn with_provenance(mut self, key: &str, value: impl ToString) -> Self {
        self.provenance.push((key.to_string(), value.to_string()));
        self
    }

    pub fn provenance(&self, key: &str) -> Option<&str> {
        self.provenance
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// All pairs sorted by `(dim, birth, death)`.
    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.pairs.iter().map(|p| p.dim).max()
    }

    pub fn slice(&self, dim: usize) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(move |p| p.dim == dim)
    }

    /// `(birth, death)` of the finite pairs of dimension `dim`.
    pub fn finite_points(&self, dim: usize) -> Vec<(f64, f64)> {
        self.slice(dim)
            .filter(|p| p.finite)
            .map(|p| (p.birth, p.death))
            .collect()
    }

    /// Births of the infinite classes of dimension `dim`.
    pub fn infinite_births(&self, dim: usize) -> Vec<f64> {
        self.slice(dim).filter(|p| !p.finite).map(|p| p.birth).collect()
    }

    /// Number of infinite classes per dimension (the Betti numbers).
    pub fn betti(&self, top_dim: usize) -> Vec<usize> {
        (0..=top_dim)
            .map(|d| self.slice(d).filter(|p| !p.finite).count())
            .collect()
    }

    /// Removes pairs with zero persistence.
    pub fn without_zero_persistence(&self) -> Self {
        Self {
            pairs: self
                .pairs
                .iter()
                .filter(|p| !p.finite || p.death != p.birth)
                .cloned()
                .collect(),
            max_value: self.max_value,
            provenance: self.provenance.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(dim: usize, b: f64, d: f64, finite: bool) -> PersistencePair {
        PersistencePair {
            dim,
            birth: b,
            death: d,
            finite,
            birth_vertices: VertexList::from_iter([0]),
            death_vertices: VertexList::new(),
        }
    }

    #[test]
    fn sorted_and_sliced() {
        let d = PersistenceDiagram::new(
            vec![pair(1, 0.5, 1.0, true), pair(0, 0.2, 3.0, false), pair(0, 0.1, 0.4, true)],
            3.0,
        );
        assert_eq!(d.pairs()[0].birth, 0.1);
        assert_eq!(d.slice(0).count(), 2);
        assert_eq!(d.finite_points(1), vec![(0.5, 1.0)]);
        assert_eq!(d.infinite_births(0), vec![0.2]);
        assert_eq!(d.betti(1), vec![1, 0]);
    }
}
