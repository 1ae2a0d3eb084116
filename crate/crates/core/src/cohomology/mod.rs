//! `H³(G, U(1)) ≅ H⁴(G, Z)` for small abelian `G` from the integral bar complex.

mod snf;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::constructors::twisted_doubles_cyclic;
use crate::error::{Error, Result};
use crate::extensions::{extensions_equivalent, ExtensionWitness};
use crate::group::AbelianGroup;
use crate::phase::Phase;

pub use snf::{rank_mod_p, smith_normal_form, Snf};

/// Largest group order accepted by [`h3_classes`].
pub const MAX_GROUP_ORDER: usize = 4;

/// A `Q/Z`-valued 3-cochain on `⊕ Z_{n_i}`; `values[(a·|G| + b)·|G| + c] = ω(a, b, c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle3 {
    pub group_orders: Vec<u64>,
    pub values: Vec<Phase>,
}

impl Cocycle3 {
    pub fn new(group_orders: &[u64], values: Vec<Phase>) -> Result<Self> {
        let n = AbelianGroup::new(group_orders)?.order();
        if values.len() != n * n * n {
            return Err(Error::InvalidArgument(format!("expected {} values, got {}", n * n * n, values.len())));
        }
        Ok(Self { group_orders: group_orders.to_vec(), values })
    }

    pub fn zero(group_orders: &[u64]) -> Result<Self> {
        let n = AbelianGroup::new(group_orders)?.order();
        Self::new(group_orders, vec![Phase::ZERO; n * n * n])
    }

    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::new(&self.group_orders).expect("validated on construction")
    }

    pub fn value(&self, a: usize, b: usize, c: usize) -> Phase {
        let n = self.group().order();
        self.values[(a * n + b) * n + c]
    }

    /// First `(a, b, c, d)` violating
    /// `ω(b,c,d) − ω(a+b,c,d) + ω(a,b+c,d) − ω(a,b,c+d) + ω(a,b,c) = 0`.
    pub fn cocycle_defect(&self) -> Option<[usize; 4]> {
        let g = self.group();
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let total = self.value(b, c, d) - self.value(g.add(a, b), c, d)
                            + self.value(a, g.add(b, c), d)
                            - self.value(a, b, g.add(c, d))
                            + self.value(a, b, c);
                        if !total.is_zero() {
                            return Some([a, b, c, d]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_defect().is_none()
    }

    /// `ω(a,b,c) = 0` whenever an argument is `0`.
    pub fn is_normalized(&self) -> bool {
        let n = self.group().order();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| (a != 0 && b != 0 && c != 0) || self.value(a, b, c).is_zero())))
    }
}

fn tuple(mut idx: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    out
}

fn untuple(t: &[usize], base: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * base + x)
}

/// Signed terms `(coefficient, argument tuple)` of `(δf)(g_1, …, g_{n+1})`.
fn coboundary_terms(g: &AbelianGroup, args: &[usize]) -> Vec<(i64, Vec<usize>)> {
    let k = args.len();
    let mut terms = vec![(1, args[1..].to_vec())];
    for i in 0..k - 1 {
        let mut t = args[..i].to_vec();
        t.push(g.add(args[i], args[i + 1]));
        t.extend_from_slice(&args[i + 2..]);
        let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
        terms.push((sign, t));
    }
    terms.push((if k.is_multiple_of(2) { 1 } else { -1 }, args[..k - 1].to_vec()));
    terms
}

/// Integer matrix of `δ: C^degree → C^{degree+1}` on all of `G^degree`.
pub fn coboundary_matrix(group_orders: &[u64], degree: usize) -> Result<Vec<Vec<i64>>> {
    let g = AbelianGroup::new(group_orders)?;
    let n = g.order();
    let rows = n.pow(degree as u32 + 1);
    let cols = n.pow(degree as u32);
    let mut m = vec![vec![0i64; cols]; rows];
    for (r, row) in m.iter_mut().enumerate() {
        for (sign, t) in coboundary_terms(&g, &tuple(r, n, degree + 1)) {
            row[untuple(&t, n)] += sign;
        }
    }
    Ok(m)
}

/// `δ` restricted to normalized cochains, indexed by tuples in `(G∖0)^degree`.
fn normalized_coboundary(g: &AbelianGroup, degree: usize) -> Vec<Vec<i64>> {
    let n = g.order();
    let nz = n - 1;
    let rows = nz.pow(degree as u32 + 1);
    let cols = nz.pow(degree as u32);
    let mut m = vec![vec![0i64; cols]; rows];
    for (r, row) in m.iter_mut().enumerate() {
        let args: Vec<usize> = tuple(r, nz, degree + 1).into_iter().map(|x| x + 1).collect();
        for (sign, t) in coboundary_terms(g, &args) {
            if t.iter().all(|&x| x != 0) {
                let shifted: Vec<usize> = t.iter().map(|x| x - 1).collect();
                row[untuple(&shifted, nz)] += sign;
            }
        }
    }
    m
}

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn small(x: &BigInt) -> u64 {
    x.to_u64().expect("invariant factor fits in u64")
}

/// `H³(G, U(1))`: invariant factors, normalized representatives and a class map.
#[derive(Clone, Debug)]
pub struct H3 {
    pub group_orders: Vec<u64>,
    /// Ascending, each `> 1`.
    pub invariant_factors: Vec<u64>,
    /// `representatives[i]` generates the `Z_{invariant_factors[i]}` summand.
    pub representatives: Vec<Cocycle3>,
    /// Torsion rows of the left SNF transform of the full `δ₃`, with their factor.
    torsion_rows: Vec<(Vec<BigInt>, u64)>,
    /// Full-complex class coordinates ↦ coefficients on `representatives`.
    lookup: BTreeMap<Vec<u64>, Vec<u64>>,
}

impl H3 {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    fn full_coordinates(&self, omega: &Cocycle3) -> Result<Vec<u64>> {
        let g = omega.group();
        let n = g.order();
        let lift = |t: &[usize]| omega.values[untuple(t, n)].ratio();
        let mut delta = Vec::with_capacity(n.pow(4));
        for r in 0..n.pow(4) {
            let v: Ratio<i64> = coboundary_terms(&g, &tuple(r, n, 4))
                .into_iter()
                .map(|(s, t)| lift(&t) * s)
                .sum();
            if !v.is_integer() {
                return Err(Error::InvalidArgument("cochain is not a cocycle".into()));
            }
            delta.push(BigInt::from(v.to_integer()));
        }
        Ok(self
            .torsion_rows
            .iter()
            .map(|(row, d)| {
                let y: BigInt = row.iter().zip(&delta).filter(|(_, x)| !x.is_zero()).map(|(u, x)| u * x).sum();
                let d = BigInt::from(*d);
                small(&(((y % &d) + &d) % &d))
            })
            .collect())
    }

    /// Coefficients of the class of `ω` on [`H3::representatives`].
    pub fn class_of(&self, omega: &Cocycle3) -> Result<Vec<u64>> {
        if omega.group_orders != self.group_orders {
            return Err(Error::InvalidArgument("cocycle lives on a different group".into()));
        }
        let coords = self.full_coordinates(omega)?;
        self.lookup
            .get(&coords)
            .cloned()
            .ok_or_else(|| Error::InconsistentData("class coordinates outside the computed group".into()))
    }
}

/// Computes `H³(G, U(1))` as the torsion of `coker δ₃` on integral cochains.
///
/// The full complex fixes the class map, the normalized one supplies
/// representatives, and `rank δ₄` confirms `ker δ₄ / im δ₃` has no free part.
pub fn h3_classes(group_orders: &[u64]) -> Result<H3> {
    let g = AbelianGroup::new(group_orders)?;
    let n = g.order();
    if n > MAX_GROUP_ORDER {
        return Err(Error::SizeBound(format!("|G| = {n} exceeds {MAX_GROUP_ORDER}")));
    }
    let d3 = coboundary_matrix(group_orders, 3)?;
    let d4 = coboundary_matrix(group_orders, 4)?;
    let full = smith_normal_form(to_big(&d3));
    let rank3 = full.diagonal.len();
    let rank4 = rank_mod_p(&d4);
    if n.pow(4) - rank4 != rank3 {
        return Err(Error::InconsistentData(format!(
            "dim ker δ₄ = {} but rank δ₃ = {rank3}",
            n.pow(4) - rank4
        )));
    }
    let torsion_rows: Vec<(Vec<BigInt>, u64)> = full
        .diagonal
        .iter()
        .enumerate()
        .filter(|(_, d)| small(d) > 1)
        .map(|(t, d)| (full.u[t].clone(), small(d)))
        .collect();
    let invariant_factors: Vec<u64> = torsion_rows.iter().map(|(_, d)| *d).collect();

    let norm = smith_normal_form(to_big(&normalized_coboundary(&g, 3)));
    let norm_factors: Vec<u64> = norm.diagonal.iter().map(small).filter(|&d| d > 1).collect();
    if norm_factors != invariant_factors {
        return Err(Error::InconsistentData(format!(
            "normalized complex gives {norm_factors:?}, full complex {invariant_factors:?}"
        )));
    }
    let nz = n.saturating_sub(1);
    let mut representatives = Vec::new();
    for (t, d) in norm.diagonal.iter().enumerate() {
        let d = small(d);
        if d <= 1 {
            continue;
        }
        let mut values = vec![Phase::ZERO; n * n * n];
        for (col, row) in norm.v.iter().enumerate() {
            let args: Vec<usize> = tuple(col, nz, 3).into_iter().map(|x| x + 1).collect();
            let numer = (&row[t] % BigInt::from(d)).to_i64().expect("reduced mod d");
            values[untuple(&args, n)] = Phase::new(numer, d as i64);
        }
        let rep = Cocycle3::new(group_orders, values)?;
        if !rep.is_cocycle() {
            return Err(Error::InconsistentData("representative fails the cocycle condition".into()));
        }
        representatives.push(rep);
    }

    let mut h3 = H3 {
        group_orders: group_orders.to_vec(),
        invariant_factors,
        representatives,
        torsion_rows,
        lookup: BTreeMap::new(),
    };
    let rep_coords: Vec<Vec<u64>> =
        h3.representatives.iter().map(|r| h3.full_coordinates(r)).collect::<Result<_>>()?;
    let factors = h3.invariant_factors.clone();
    let total = h3.order() as usize;
    for idx in 0..total {
        let mut rest = idx;
        let coeffs: Vec<u64> = factors
            .iter()
            .map(|&d| {
                let c = rest as u64 % d;
                rest /= d as usize;
                c
            })
            .collect();
        let coords: Vec<u64> = (0..factors.len())
            .map(|i| coeffs.iter().zip(&rep_coords).map(|(&x, c)| x * c[i]).sum::<u64>() % factors[i])
            .collect();
        h3.lookup.insert(coords, coeffs);
    }
    if h3.lookup.len() != total {
        return Err(Error::InconsistentData("representatives do not generate H³".into()));
    }
    Ok(h3)
}

/// `|H³(⊕ Z_{n_i}, U(1))| = Π n_i · Π_{i<j} gcd(n_i, n_j) · Π_{i<j<k} gcd(n_i, n_j, n_k)`.
pub fn analytic_h3_order(group_orders: &[u64]) -> u64 {
    use num_integer::Integer;
    let n = group_orders;
    let mut total: u64 = n.iter().product();
    for i in 0..n.len() {
        for j in (i + 1)..n.len() {
            total *= n[i].gcd(&n[j]);
            for k in (j + 1)..n.len() {
                total *= n[i].gcd(&n[j]).gcd(&n[k]);
            }
        }
    }
    total
}

/// `ω_k(a, b, c) = k·a·(b + c − [b + c]_n) / n²` on `Z_n`.
pub fn standard_cocycle_cyclic(n: u64, k: u64) -> Result<Cocycle3> {
    if n == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("need 0 <= k < n, got n = {n}, k = {k}")));
    }
    let size = n as usize;
    let mut values = Vec::with_capacity(size.pow(3));
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let carry = b + c - (b + c) % n;
                values.push(Phase::new((k * a * carry) as i64, (n * n) as i64));
            }
        }
    }
    Cocycle3::new(&[n], values)
}

/// `ω|_H` for `H` spanned by independent generators (coordinates in `G`).
pub fn restrict_cocycle(omega: &Cocycle3, generators: &[Vec<u64>]) -> Result<Cocycle3> {
    let g = omega.group();
    let mut gens = Vec::new();
    for h in generators {
        if h.len() != g.orders().len() {
            return Err(Error::InvalidArgument("generator has the wrong number of coordinates".into()));
        }
        gens.push(g.index(h));
    }
    let mut pairs: Vec<(usize, u64)> = gens.iter().copied().zip(g.basis_orders(&gens)?).collect();
    pairs.retain(|&(_, m)| m > 1);
    let h_orders: Vec<u64> = pairs.iter().map(|&(_, m)| m).collect();
    let h = AbelianGroup::new(&h_orders)?;
    let embed: Vec<usize> = (0..h.order())
        .map(|x| {
            h.coords(x).iter().zip(&pairs).fold(0, |acc, (&c, &(gen, _))| g.add(acc, g.scale(gen, c)))
        })
        .collect();
    let m = h.order();
    let mut values = Vec::with_capacity(m.pow(3));
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                values.push(omega.value(embed[a], embed[b], embed[c]));
            }
        }
    }
    Cocycle3::new(&h_orders, values)
}

/// The `k` with `[ω] = [ω_k]` for a cocycle on a cyclic group.
pub fn cyclic_cocycle_label(omega: &Cocycle3) -> Result<u64> {
    let n = match omega.group_orders.as_slice() {
        [] => return Ok(0),
        [n] => *n,
        _ => return Err(Error::InvalidArgument("cocycle group is not cyclic".into())),
    };
    let h3 = h3_classes(&[n])?;
    let class = h3.class_of(omega)?;
    for k in 0..n {
        if h3.class_of(&standard_cocycle_cyclic(n, k)?)? == class {
            return Ok(k);
        }
    }
    Err(Error::NoMatch("no standard cocycle in this class".into()))
}

/// The `k` with `w ≃ twisted_double_cyclic(n, k)`, for `w` over `Rep(Z_n)`.
pub fn cocycle_class_of_extension(w: &ExtensionWitness) -> Result<u64> {
    let n = w.base.rank() as u64;
    let doubles = twisted_doubles_cyclic(n)?;
    for (k, d) in doubles.iter().enumerate() {
        if extensions_equivalent(w, d)? {
            return Ok(k as u64);
        }
    }
    Err(Error::NoMatch(format!("extension matches no twisted double of Z_{n}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let cols = b.first().map_or(0, Vec::len);
        a.iter().map(|r| (0..cols).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect()).collect()
    }

    #[test]
    fn delta_squared_vanishes() {
        for orders in [vec![2], vec![3], vec![2, 2]] {
            for deg in 1..=3 {
                let a = coboundary_matrix(&orders, deg).unwrap();
                let b = coboundary_matrix(&orders, deg + 1).unwrap();
                assert!(mat_mul(&b, &a).iter().flatten().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn small_groups() {
        assert_eq!(h3_classes(&[2]).unwrap().invariant_factors, vec![2]);
        assert_eq!(h3_classes(&[3]).unwrap().invariant_factors, vec![3]);
        assert_eq!(h3_classes(&[4]).unwrap().invariant_factors, vec![4]);
        assert_eq!(h3_classes(&[2, 2]).unwrap().invariant_factors, vec![2, 2, 2]);
        assert_eq!(h3_classes(&[]).unwrap().order(), 1);
        assert!(matches!(h3_classes(&[5]), Err(Error::SizeBound(_))));
    }

    #[test]
    fn analytic_count() {
        assert_eq!(analytic_h3_order(&[2, 2]), 8);
        assert_eq!(analytic_h3_order(&[2, 2, 2]), 128);
        assert_eq!(analytic_h3_order(&[4]), 4);
    }

    #[test]
    fn representatives_are_normalized_generators() {
        let h = h3_classes(&[2, 2]).unwrap();
        for (i, r) in h.representatives.iter().enumerate() {
            assert!(r.is_cocycle() && r.is_normalized());
            let mut e = vec![0; 3];
            e[i] = 1;
            assert_eq!(h.class_of(r).unwrap(), e);
        }
    }

    #[test]
    fn standard_cocycles() {
        assert!(standard_cocycle_cyclic(3, 0).unwrap().values.iter().all(|v| v.is_zero()));
        assert_eq!(standard_cocycle_cyclic(2, 1).unwrap().value(1, 1, 1), Phase::half());
        for n in 1..=6 {
            for k in 0..n {
                assert!(standard_cocycle_cyclic(n, k).unwrap().is_cocycle());
            }
        }
        for n in 2..=4u64 {
            let labels: Vec<u64> =
                (0..n).map(|k| cyclic_cocycle_label(&standard_cocycle_cyclic(n, k).unwrap()).unwrap()).collect();
            assert_eq!(labels, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn restriction() {
        for k in 0..4 {
            let w = standard_cocycle_cyclic(4, k).unwrap();
            let r = restrict_cocycle(&w, &[vec![2]]).unwrap();
            assert_eq!(cyclic_cocycle_label(&r).unwrap(), k % 2);
            assert_eq!(cyclic_cocycle_label(&restrict_cocycle(&w, &[vec![1]]).unwrap()).unwrap(), k);
            assert!(restrict_cocycle(&w, &[]).unwrap().values.iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn coboundaries_are_trivial() {
        let h = h3_classes(&[3]).unwrap();
        // δβ for β(a, b) = a·b/3
        let g = AbelianGroup::new(&[3]).unwrap();
        let beta = |a: usize, b: usize| Phase::new((a * b) as i64, 3);
        let mut values = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    values.push(beta(b, c) - beta(g.add(a, b), c) + beta(a, g.add(b, c)) - beta(a, b));
                }
            }
        }
        let cob = Cocycle3::new(&[3], values).unwrap();
        assert_eq!(h.class_of(&cob).unwrap(), vec![0]);
    }
}
