//! Small finite abelian groups `Z_{n_1} ⊕ … ⊕ Z_{n_k}` with mixed-radix element indices.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Elements are indexed in mixed radix, first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    orders: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidArgument("cyclic orders must be >= 1".into()));
        }
        Ok(Self { orders: orders.to_vec() })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    pub fn coords(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &n) in out.iter_mut().zip(&self.orders).rev() {
            *slot = idx as u64 % n;
            idx /= n as usize;
        }
        out
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&x, &n)| acc * n as usize + (x % n) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.coords(a), self.coords(b));
        let sum: Vec<u64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        self.index(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let x = self.coords(a);
        let neg: Vec<u64> = x.iter().zip(&self.orders).map(|(&p, &n)| (n - p) % n).collect();
        self.index(&neg)
    }

    pub fn scale(&self, a: usize, k: u64) -> usize {
        let x = self.coords(a);
        let out: Vec<u64> = x.iter().map(|&p| p * k).collect();
        self.index(&out)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.coords(a)
            .iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (&x, &n)| acc.lcm(&(n / n.gcd(&x))))
    }

    /// Subgroup generated by `gens` (as element indices).
    pub fn span(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([0usize]);
        loop {
            let mut grown = set.clone();
            for &x in &set {
                for &g in gens {
                    grown.insert(self.add(x, g));
                }
            }
            if grown.len() == set.len() {
                return set;
            }
            set = grown;
        }
    }

    /// Checks that `gens` is a direct-sum basis of the subgroup it generates and
    /// returns the orders of the generators.
    pub fn basis_orders(&self, gens: &[usize]) -> Result<Vec<u64>> {
        let orders: Vec<u64> = gens.iter().map(|&g| self.element_order(g)).collect();
        let expected: u64 = orders.iter().product();
        if self.span(gens).len() as u64 != expected {
            return Err(Error::InvalidArgument(
                "subgroup generators are not independent".into(),
            ));
        }
        Ok(orders)
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All abelian groups of order `n`, as ascending invariant-factor lists
/// (`d_1 | d_2 | …`, each `d_i > 1`). The trivial group is the empty list.
pub fn abelian_groups_of_order(n: u64) -> Vec<Vec<u64>> {
    let mut groups: Vec<Vec<u64>> = vec![vec![]];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for g in &groups {
            for part in partitions(e, e) {
                // part is descending; merge into invariant factors from the top.
                let mut factors = g.clone();
                let len = factors.len().max(part.len());
                let mut padded = vec![1u64; len - factors.len()];
                padded.append(&mut factors);
                for (i, &k) in part.iter().enumerate() {
                    padded[len - 1 - i] *= p.pow(k);
                }
                next.push(padded);
            }
        }
        groups = next;
    }
    groups.sort();
    groups
}

/// `#{x : d·x = 0}` in `⊕ Z_{n_i}`.
pub fn torsion_count(factors: &[u64], d: u64) -> u64 {
    factors.iter().map(|&n| n.gcd(&d)).product()
}

/// Invariant factors of a finite abelian group given by its Cayley table.
///
/// The function `d ↦ #{x : d·x = 0}` determines a finite abelian group up to
/// isomorphism, so the table is matched against every candidate of its order.
pub fn invariant_factors_of_table(table: &[Vec<usize>], identity: usize) -> Vec<u64> {
    let n = table.len() as u64;
    let power = |x: usize, d: u64| (0..d).fold(identity, |acc, _| table[acc][x]);
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let counts: Vec<u64> = divisors
        .iter()
        .map(|&d| (0..table.len()).filter(|&x| power(x, d) == identity).count() as u64)
        .collect();
    abelian_groups_of_order(n)
        .into_iter()
        .find(|f| divisors.iter().zip(&counts).all(|(&d, &c)| torsion_count(f, d) == c))
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_of_small_orders() {
        assert_eq!(abelian_groups_of_order(1), vec![Vec::<u64>::new()]);
        assert_eq!(abelian_groups_of_order(4), vec![vec![2, 2], vec![4]]);
        assert_eq!(abelian_groups_of_order(16).len(), 5);
        assert_eq!(abelian_groups_of_order(36).len(), 4);
        assert!(abelian_groups_of_order(12).contains(&vec![2, 6]));
    }

    #[test]
    fn mixed_radix_round_trip() {
        let g = AbelianGroup::new(&[2, 3]).unwrap();
        for i in 0..g.order() {
            assert_eq!(g.index(&g.coords(i)), i);
            assert_eq!(g.add(i, g.neg(i)), 0);
        }
        assert_eq!(g.coords(4), vec![1, 1]);
        assert_eq!(g.element_order(4), 6);
    }

    #[test]
    fn table_identification() {
        let g = AbelianGroup::new(&[2, 4]).unwrap();
        let table: Vec<Vec<usize>> = (0..8).map(|a| (0..8).map(|b| g.add(a, b)).collect()).collect();
        assert_eq!(invariant_factors_of_table(&table, 0), vec![2, 4]);
        let z = AbelianGroup::new(&[16]).unwrap();
        let table: Vec<Vec<usize>> =
            (0..16).map(|a| (0..16).map(|b| z.add(a, b)).collect()).collect();
        assert_eq!(invariant_factors_of_table(&table, 0), vec![16]);
    }

    #[test]
    fn basis_check() {
        let g = AbelianGroup::new(&[4]).unwrap();
        assert_eq!(g.basis_orders(&[2]).unwrap(), vec![2]);
        let k = AbelianGroup::new(&[2, 2]).unwrap();
        assert!(k.basis_orders(&[1, 1]).is_err());
    }
}
