//! Commutative fusion rings with sparse structure constants.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Sparse fusion table: `(a, b, c) ↦ N_{ab}^c`, absent entries are zero.
pub type FusionMap = BTreeMap<(usize, usize, usize), u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct FusionRing {
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    /// `products[a * rank + b]` lists `(c, N_{ab}^c)` with `N > 0`, sorted by `c`.
    products: Vec<Vec<(usize, u32)>>,
}

impl FusionRing {
    /// Builds and validates a ring. `entries` are `(a, b, c, N)` quadruples; duplicates are summed.
    pub fn new(
        labels: Vec<String>,
        unit: usize,
        dual: Vec<usize>,
        entries: impl IntoIterator<Item = (usize, usize, usize, u32)>,
    ) -> Result<Self> {
        let rank = labels.len();
        if rank == 0 {
            return Err(Error::InvalidRing("rank must be positive".into()));
        }
        if unit >= rank {
            return Err(Error::InvalidRing(format!("unit {unit} out of range")));
        }
        if dual.len() != rank {
            return Err(Error::InvalidRing("dual has wrong length".into()));
        }
        let mut map = FusionMap::new();
        for (a, b, c, n) in entries {
            if a >= rank || b >= rank || c >= rank {
                return Err(Error::InvalidRing(format!("fusion index ({a},{b},{c}) out of range")));
            }
            if n > 0 {
                *map.entry((a, b, c)).or_insert(0) += n;
            }
        }
        let ring = Self::from_map(labels, unit, dual, &map);
        ring.validate()?;
        Ok(ring)
    }

    pub(crate) fn from_map(labels: Vec<String>, unit: usize, dual: Vec<usize>, map: &FusionMap) -> Self {
        let rank = labels.len();
        let mut products = vec![Vec::new(); rank * rank];
        for (&(a, b, c), &n) in map {
            if n > 0 {
                products[a * rank + b].push((c, n));
            }
        }
        for p in &mut products {
            p.sort_unstable();
        }
        Self { labels, unit, dual, products }
    }

    fn validate(&self) -> Result<()> {
        let r = self.rank();
        for a in 0..r {
            let d = self.dual[a];
            if d >= r || self.dual[d] != a {
                return Err(Error::InvalidRing(format!("dual is not an involution at {a}")));
            }
        }
        for a in 0..r {
            if self.product(self.unit, a) != [(a, 1)] || self.product(a, self.unit) != [(a, 1)] {
                return Err(Error::InvalidRing(format!("unit does not act trivially on {a}")));
            }
            for b in 0..r {
                if self.product(a, b) != self.product(b, a) {
                    return Err(Error::InvalidRing(format!("fusion not commutative at ({a},{b})")));
                }
                let to_unit = self.n(a, b, self.unit);
                let expected = u32::from(b == self.dual[a]);
                if to_unit != expected {
                    return Err(Error::InvalidRing(format!(
                        "duality violated: N[{a},{b}]^unit = {to_unit}"
                    )));
                }
            }
        }
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    // (a b) c versus a (b c), compared as vectors over d.
                    let mut left = vec![0u64; r];
                    for &(e, n1) in self.product(a, b) {
                        for &(d, n2) in self.product(e, c) {
                            left[d] += u64::from(n1) * u64::from(n2);
                        }
                    }
                    let mut right = vec![0u64; r];
                    for &(f, n1) in self.product(b, c) {
                        for &(d, n2) in self.product(a, f) {
                            right[d] += u64::from(n1) * u64::from(n2);
                        }
                    }
                    if left != right {
                        return Err(Error::InvalidRing(format!(
                            "fusion not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    pub fn product(&self, a: usize, b: usize) -> &[(usize, u32)] {
        &self.products[a * self.rank() + b]
    }

    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        self.product(a, b)
            .iter()
            .find(|&&(x, _)| x == c)
            .map_or(0, |&(_, n)| n)
    }

    /// The product `a ⊗ b` when it is a single simple with multiplicity one.
    pub fn unique_product(&self, a: usize, b: usize) -> Option<usize> {
        match self.product(a, b) {
            [(c, 1)] => Some(*c),
            _ => None,
        }
    }

    pub fn is_invertible(&self, a: usize) -> bool {
        self.product(a, self.dual[a]) == [(self.unit, 1)]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, u32)> + '_ {
        let r = self.rank();
        self.products
            .iter()
            .enumerate()
            .flat_map(move |(ab, p)| p.iter().map(move |&(c, n)| (ab / r, ab % r, c, n)))
    }

    pub fn fusion_map(&self) -> FusionMap {
        self.entries().map(|(a, b, c, n)| ((a, b, c), n)).collect()
    }

    /// Dense fusion matrix `(N_a)_{bc} = N_{ab}^c`.
    pub fn fusion_matrix(&self, a: usize) -> Vec<Vec<u32>> {
        let r = self.rank();
        let mut m = vec![vec![0; r]; r];
        for (b, row) in m.iter_mut().enumerate() {
            for &(c, n) in self.product(a, b) {
                row[c] = n;
            }
        }
        m
    }

    /// Smallest fusion-closed, dual-closed label set containing `seed` and the unit.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut set = vec![false; self.rank()];
        set[self.unit] = true;
        for &s in seed {
            set[s] = true;
        }
        loop {
            let members: Vec<usize> = (0..self.rank()).filter(|&i| set[i]).collect();
            let mut changed = false;
            for &a in &members {
                if !set[self.dual[a]] {
                    set[self.dual[a]] = true;
                    changed = true;
                }
                for &b in &members {
                    for &(c, _) in self.product(a, b) {
                        if !set[c] {
                            set[c] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return (0..self.rank()).filter(|&i| set[i]).collect();
            }
        }
    }

    pub fn is_fusion_closed(&self, set: &[usize]) -> bool {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.closure(&sorted) == sorted
    }

    /// Relabels so that new label `i` is old label `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> FusionRing {
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let labels = perm.iter().map(|&o| self.labels[o].clone()).collect();
        let dual = perm.iter().map(|&o| inv[self.dual[o]]).collect();
        let map: FusionMap = self
            .entries()
            .map(|(a, b, c, n)| ((inv[a], inv[b], inv[c]), n))
            .collect();
        FusionRing::from_map(labels, inv[self.unit], dual, &map)
    }

    /// Ring of the Deligne product; label `(i, j)` has index `i * other.rank() + j`.
    pub fn deligne(&self, other: &FusionRing) -> FusionRing {
        let (r1, r2) = (self.rank(), other.rank());
        let idx = |i: usize, j: usize| i * r2 + j;
        let mut labels = Vec::with_capacity(r1 * r2);
        let mut dual = Vec::with_capacity(r1 * r2);
        for i in 0..r1 {
            for j in 0..r2 {
                labels.push(format!("({},{})", self.labels[i], other.labels[j]));
                dual.push(idx(self.dual[i], other.dual[j]));
            }
        }
        let mut map = FusionMap::new();
        for (a1, b1, c1, n1) in self.entries() {
            for (a2, b2, c2, n2) in other.entries() {
                map.insert((idx(a1, a2), idx(b1, b2), idx(c1, c2)), n1 * n2);
            }
        }
        FusionRing::from_map(labels, idx(self.unit, other.unit), dual, &map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ising_ring() -> FusionRing {
        let entries = vec![
            (0, 0, 0, 1),
            (0, 1, 1, 1),
            (1, 0, 1, 1),
            (0, 2, 2, 1),
            (2, 0, 2, 1),
            (1, 1, 0, 1),
            (1, 2, 2, 1),
            (2, 1, 2, 1),
            (2, 2, 0, 1),
            (2, 2, 1, 1),
        ];
        FusionRing::new(
            vec!["1".into(), "u".into(), "x".into()],
            0,
            vec![0, 1, 2],
            entries,
        )
        .unwrap()
    }

    #[test]
    fn ising_ring_is_valid() {
        let r = ising_ring();
        assert_eq!(r.product(2, 2), &[(0, 1), (1, 1)]);
        assert!(r.is_invertible(1));
        assert!(!r.is_invertible(2));
        assert_eq!(r.closure(&[1]), vec![0, 1]);
        assert_eq!(r.closure(&[2]), vec![0, 1, 2]);
    }

    #[test]
    fn rejects_non_associative() {
        // x ⊗ x = 1 + u but u ⊗ x = 1 breaks associativity (and duality).
        let entries = vec![
            (0, 0, 0, 1),
            (0, 1, 1, 1),
            (1, 0, 1, 1),
            (0, 2, 2, 1),
            (2, 0, 2, 1),
            (1, 1, 0, 1),
            (2, 2, 0, 1),
            (2, 2, 1, 1),
        ];
        let err = FusionRing::new(vec!["1".into(), "u".into(), "x".into()], 0, vec![0, 1, 2], entries);
        assert!(matches!(err, Err(Error::InvalidRing(_))));
    }

    #[test]
    fn rejects_broken_unit() {
        let err = FusionRing::new(vec!["1".into(), "a".into()], 0, vec![0, 1], vec![(0, 0, 0, 1), (1, 1, 0, 1)]);
        assert!(matches!(err, Err(Error::InvalidRing(_))));
    }

    #[test]
    fn permutation_preserves_structure() {
        let r = ising_ring();
        let p = r.permuted(&[0, 2, 1]);
        assert_eq!(p.label(1), "x");
        assert_eq!(p.product(1, 1), &[(0, 1), (2, 1)]);
    }

    #[test]
    fn deligne_ring() {
        let r = ising_ring();
        let rr = r.deligne(&r);
        assert_eq!(rr.rank(), 9);
        assert_eq!(rr.product(8, 8).len(), 4);
    }
}
