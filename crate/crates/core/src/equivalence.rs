//! Label-permutation equivalences between premodular data.

use crate::data::{PreModularData, NUM_TOL};
use crate::error::{Error, Result};
use crate::phase::Phase;

type Fingerprint = (i64, Phase, Vec<i64>);

fn fingerprint(data: &PreModularData, a: usize) -> Fingerprint {
    let mut row: Vec<i64> = (0..data.rank())
        .map(|b| (data.s(a, b).norm() * 1e6).round() as i64)
        .collect();
    row.sort_unstable();
    ((data.dim(a) * 1e6).round() as i64, data.twist(a), row)
}

struct Search<'a> {
    a: &'a PreModularData,
    b: &'a PreModularData,
    candidates: Vec<Vec<usize>>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    assigned: Vec<usize>,
}

impl Search<'_> {
    fn compatible(&self, x: usize, y: usize) -> bool {
        if self.used[y] || !self.candidates[x].contains(&y) {
            return false;
        }
        if (self.a.s(x, x) - self.b.s(y, y)).norm() > NUM_TOL {
            return false;
        }
        self.assigned.iter().all(|&z| {
            let w = self.map[z].expect("assigned");
            (self.a.s(x, z) - self.b.s(y, w)).norm() <= NUM_TOL
        })
    }

    /// Assigns `x ↦ y` and everything forced through invertible fusion products.
    /// On failure the trail is left for the caller to undo.
    fn assign(&mut self, x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            match self.map[x] {
                Some(prev) if prev == y => continue,
                Some(_) => return false,
                None => {}
            }
            if !self.compatible(x, y) {
                return false;
            }
            self.map[x] = Some(y);
            self.used[y] = true;
            self.assigned.push(x);
            for i in 0..self.assigned.len() {
                let z = self.assigned[i];
                let w = self.map[z].expect("assigned");
                let pa = self.a.ring().unique_product(x, z);
                let pb = self.b.ring().unique_product(y, w);
                match (pa, pb) {
                    (Some(c), Some(d)) => queue.push((c, d)),
                    (None, None) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.assigned.len() > len {
            let x = self.assigned.pop().expect("nonempty");
            let y = self.map[x].take().expect("assigned");
            self.used[y] = false;
        }
    }

    fn fusion_preserved(&self) -> bool {
        let pi = |x: usize| self.map[x].expect("complete");
        self.a.ring().entries().all(|(x, y, z, n)| self.b.ring().n(pi(x), pi(y), pi(z)) == n)
    }

    fn solve(&mut self) -> bool {
        let r = self.a.rank();
        let next = (0..r)
            .filter(|&x| self.map[x].is_none())
            .min_by_key(|&x| self.candidates[x].iter().filter(|&&y| !self.used[y]).count());
        let Some(x) = next else {
            return self.fusion_preserved();
        };
        let options: Vec<usize> = self.candidates[x].clone();
        for y in options {
            if self.used[y] {
                continue;
            }
            let mark = self.assigned.len();
            if self.assign(x, y) && self.solve() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Finds a bijection `π` (label of `a` ↦ label of `b`) extending `pinned` that
/// preserves unit, twists, dims, S̃ and fusion. Returns `None` if there is none.
pub fn find_equivalence(
    a: &PreModularData,
    b: &PreModularData,
    pinned: &[(usize, usize)],
) -> Result<Option<Vec<usize>>> {
    let r = a.rank();
    for (i, &(x, y)) in pinned.iter().enumerate() {
        if x >= r || y >= b.rank() {
            return Err(Error::InvalidPinned(format!("pair ({x},{y}) out of range")));
        }
        for &(x2, y2) in &pinned[..i] {
            if (x2 == x) != (y2 == y) {
                return Err(Error::InvalidPinned(format!("pairs ({x2},{y2}) and ({x},{y}) clash")));
            }
        }
    }
    if r != b.rank() {
        return Ok(None);
    }
    let fa: Vec<Fingerprint> = (0..r).map(|x| fingerprint(a, x)).collect();
    let fb: Vec<Fingerprint> = (0..r).map(|y| fingerprint(b, y)).collect();
    let mut sa = fa.clone();
    let mut sb = fb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(None);
    }
    let candidates = (0..r)
        .map(|x| (0..r).filter(|&y| fa[x] == fb[y]).collect())
        .collect();
    let mut search = Search {
        a,
        b,
        candidates,
        map: vec![None; r],
        used: vec![false; r],
        assigned: Vec::new(),
    };
    if !search.assign(a.unit(), b.unit()) {
        return Ok(None);
    }
    for &(x, y) in pinned {
        if !search.assign(x, y) {
            return Ok(None);
        }
    }
    if search.solve() {
        Ok(Some(search.map.iter().map(|m| m.expect("complete")).collect()))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{ising_mtc, toric_code};

    fn preserves(a: &PreModularData, b: &PreModularData, pi: &[usize]) -> bool {
        (0..a.rank()).all(|x| {
            a.twist(x) == b.twist(pi[x])
                && (0..a.rank()).all(|y| (a.s(x, y) - b.s(pi[x], pi[y])).norm() < 1e-9)
        })
    }

    #[test]
    fn toric_code_self_equivalence() {
        let tc = toric_code();
        let pi = find_equivalence(&tc, &tc, &[]).unwrap().unwrap();
        assert!(preserves(&tc, &tc, &pi));
        let (e, m) = (tc.index_of("e").unwrap(), tc.index_of("m").unwrap());
        assert!(pi == vec![0, 1, 2, 3] || (pi[e] == m && pi[m] == e));
        let swap = find_equivalence(&tc, &tc, &[(e, m)]).unwrap().unwrap();
        assert_eq!(swap[m], e);
    }

    #[test]
    fn distinct_ising_categories_are_inequivalent() {
        for m in (1..16).step_by(2) {
            for n in (1..16).step_by(2) {
                let a = ising_mtc(Phase::new(m, 16)).unwrap();
                let b = ising_mtc(Phase::new(n, 16)).unwrap();
                assert_eq!(find_equivalence(&a, &b, &[]).unwrap().is_some(), m == n);
            }
        }
    }

    #[test]
    fn full_pin_gives_identity() {
        let a = ising_mtc(Phase::new(3, 16)).unwrap();
        let pinned: Vec<_> = (0..3).map(|i| (i, i)).collect();
        assert_eq!(find_equivalence(&a, &a, &pinned).unwrap(), Some(vec![0, 1, 2]));
    }

    #[test]
    fn ill_formed_pins() {
        let a = toric_code();
        assert!(matches!(find_equivalence(&a, &a, &[(1, 1), (1, 2)]), Err(Error::InvalidPinned(_))));
        assert!(matches!(find_equivalence(&a, &a, &[(7, 1)]), Err(Error::InvalidPinned(_))));
    }
}
