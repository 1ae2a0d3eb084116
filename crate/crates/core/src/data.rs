//! Premodular data `(N, θ, S̃)` and the label-level numerics built on it.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::ring::{FusionMap, FusionRing};
use crate::symmetric::transparent_objects;

/// Equality tolerance for floating-point modular data.
pub const NUM_TOL: f64 = 1e-9;
/// Tolerance for snapping floats to integers (Verlinde coefficients, group orders).
pub const INT_TOL: f64 = 1e-6;

pub type CMatrix = DMatrix<Complex64>;

/// Fusion ring together with twists and an unnormalized S-matrix.
///
/// The S-matrix convention is fixed by the balancing equation
/// `S̃_{ab} = (θ_a θ_b)^{-1} Σ_c N_{ab}^c θ_c d_c`, which reproduces the
/// printed Ising table `S̃_{ux} = −√2`.
#[derive(Clone, Debug)]
pub struct PreModularData {
    ring: FusionRing,
    twists: Vec<Phase>,
    smatrix: CMatrix,
    dims: Vec<f64>,
    total_dim: f64,
}

impl PreModularData {
    /// Validates every invariant: S̃ symmetric with positive unit row, duality of
    /// dims and twists, the balancing equation and `d = FPdim`.
    pub fn new(ring: FusionRing, twists: Vec<Phase>, smatrix: CMatrix) -> Result<Self> {
        let data = Self::assemble(ring, twists, smatrix)?;
        data.validate()?;
        Ok(data)
    }

    pub(crate) fn assemble(ring: FusionRing, twists: Vec<Phase>, smatrix: CMatrix) -> Result<Self> {
        let r = ring.rank();
        if twists.len() != r || smatrix.nrows() != r || smatrix.ncols() != r {
            return Err(Error::InvalidData("twist or S-matrix size does not match rank".into()));
        }
        let u = ring.unit();
        let dims: Vec<f64> = (0..r).map(|a| smatrix[(u, a)].re).collect();
        let total_dim = dims.iter().map(|d| d * d).sum();
        Ok(Self { ring, twists, smatrix, dims, total_dim })
    }

    fn validate(&self) -> Result<()> {
        let r = self.rank();
        let s = &self.smatrix;
        for a in 0..r {
            for b in 0..r {
                if (s[(a, b)] - s[(b, a)]).norm() > NUM_TOL {
                    return Err(Error::InvalidData(format!("S-matrix not symmetric at ({a},{b})")));
                }
            }
            let unit_entry = s[(self.unit(), a)];
            if unit_entry.im.abs() > NUM_TOL || unit_entry.re <= NUM_TOL {
                return Err(Error::InvalidData(format!(
                    "dimension of {} is not a positive real",
                    self.label(a)
                )));
            }
            let d = self.ring.dual(a);
            if (self.dims[a] - self.dims[d]).abs() > NUM_TOL {
                return Err(Error::InvalidData(format!("d of {} differs from its dual", self.label(a))));
            }
            if self.twists[a] != self.twists[d] {
                return Err(Error::InvalidData(format!("twist of {} differs from its dual", self.label(a))));
            }
        }
        if !self.twists[self.unit()].is_zero() {
            return Err(Error::InvalidData("unit twist must be 0".into()));
        }
        let bal = self.balancing_residual();
        if bal > NUM_TOL {
            return Err(Error::InvalidData(format!("balancing equation violated (residual {bal:e})")));
        }
        let fp = fp_dims(&self.ring);
        for a in 0..r {
            if (fp[a] - self.dims[a]).abs() > NUM_TOL {
                return Err(Error::InvalidData(format!(
                    "d_{} = {} but FPdim = {}",
                    self.label(a),
                    self.dims[a],
                    fp[a]
                )));
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    pub fn unit(&self) -> usize {
        self.ring.unit()
    }

    pub fn label(&self, a: usize) -> &str {
        self.ring.label(a)
    }

    pub fn labels(&self) -> &[String] {
        self.ring.labels()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.ring.index_of(name)
    }

    pub fn twists(&self) -> &[Phase] {
        &self.twists
    }

    pub fn twist(&self, a: usize) -> Phase {
        self.twists[a]
    }

    pub fn smatrix(&self) -> &CMatrix {
        &self.smatrix
    }

    pub fn s(&self, a: usize, b: usize) -> Complex64 {
        self.smatrix[(a, b)]
    }

    pub fn dims(&self) -> &[f64] {
        &self.dims
    }

    pub fn dim(&self, a: usize) -> f64 {
        self.dims[a]
    }

    /// `D = Σ_a d_a²`.
    pub fn total_dim(&self) -> f64 {
        self.total_dim
    }

    pub fn is_invertible(&self, a: usize) -> bool {
        self.ring.is_invertible(a)
    }

    pub fn balancing_residual(&self) -> f64 {
        let r = self.rank();
        let mut worst: f64 = 0.0;
        for a in 0..r {
            for b in 0..r {
                let sum: Complex64 = self
                    .ring
                    .product(a, b)
                    .iter()
                    .map(|&(c, n)| self.twists[c].to_complex() * (f64::from(n) * self.dims[c]))
                    .sum();
                let pred = sum * (-(self.twists[a] + self.twists[b])).to_complex();
                worst = worst.max((pred - self.smatrix[(a, b)]).norm());
            }
        }
        worst
    }

    /// Normalized `s = S̃ / √D`.
    pub fn normalized_s(&self) -> CMatrix {
        self.smatrix.map(|z| z / self.total_dim.sqrt())
    }

    /// Relabels so that new label `i` is old label `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> PreModularData {
        let ring = self.ring.permuted(perm);
        let twists = perm.iter().map(|&o| self.twists[o]).collect();
        let r = perm.len();
        let smatrix = CMatrix::from_fn(r, r, |i, j| self.smatrix[(perm[i], perm[j])]);
        Self::assemble(ring, twists, smatrix).expect("permutation preserves sizes")
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<PreModularData> {
        if labels.len() != self.rank() {
            return Err(Error::InvalidArgument("label count does not match rank".into()));
        }
        let map = self.ring.fusion_map();
        let ring = FusionRing::from_map(labels, self.unit(), self.ring.duals().to_vec(), &map);
        Self::assemble(ring, self.twists.clone(), self.smatrix.clone())
    }

    /// Order putting the unit first, then `(d, twist, name)` ascending.
    pub fn canonical_order(&self) -> Vec<usize> {
        let u = self.unit();
        let key = |a: usize| ((self.dims[a] / NUM_TOL).round() as i64, self.twists[a], self.label(a).to_string());
        let mut rest: Vec<usize> = (0..self.rank()).filter(|&a| a != u).collect();
        rest.sort_by_key(|&a| key(a));
        let mut perm = vec![u];
        perm.extend(rest);
        perm
    }

    /// Canonically ordered copy and the permutation used (`new i = old perm[i]`).
    pub fn canonical_form(&self) -> (PreModularData, Vec<usize>) {
        let perm = self.canonical_order();
        (self.permuted(&perm), perm)
    }
}

impl fmt::Display for PreModularData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank {}  D = {:.6}", self.rank(), self.total_dim)?;
        for a in 0..self.rank() {
            writeln!(f, "  {:<12} d = {:<10.6} theta = {}", self.label(a), self.dims[a], self.twists[a])?;
        }
        Ok(())
    }
}

/// Perron-Frobenius dimensions of a fusion ring.
///
/// The dimension vector is the unique positive eigenvector of the irreducible
/// matrix `Σ_b N_b`; power iteration runs on `Σ_b N_b + 1` to avoid periodicity.
pub fn fp_dims(ring: &FusionRing) -> Vec<f64> {
    let r = ring.rank();
    let mut v = vec![1.0f64; r];
    for _ in 0..100_000 {
        let mut next = v.clone();
        for x in 0..r {
            for b in 0..r {
                for &(c, n) in ring.product(b, x) {
                    next[x] += f64::from(n) * v[c];
                }
            }
        }
        let norm = next[ring.unit()];
        for y in &mut next {
            *y /= norm;
        }
        let delta = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = next;
        if delta < 1e-15 {
            break;
        }
    }
    v
}

fn unitarity_residual(data: &PreModularData) -> f64 {
    let s = data.smatrix();
    let prod = s * s.adjoint();
    let r = data.rank();
    let mut worst: f64 = 0.0;
    for i in 0..r {
        for j in 0..r {
            let target = if i == j { data.total_dim() } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

fn raw_verlinde(data: &PreModularData) -> Vec<Complex64> {
    let r = data.rank();
    let s = data.normalized_s();
    let u = data.unit();
    let mut out = vec![Complex64::new(0.0, 0.0); r * r * r];
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let mut acc = Complex64::new(0.0, 0.0);
                for x in 0..r {
                    acc += s[(a, x)] * s[(b, x)] * s[(c, x)].conj() / s[(u, x)];
                }
                out[(a * r + b) * r + c] = acc;
            }
        }
    }
    out
}

/// Fusion coefficients recovered from the normalized S-matrix by the Verlinde formula.
pub fn verlinde_fusion(data: &PreModularData) -> Result<FusionMap> {
    let res = unitarity_residual(data);
    if res > NUM_TOL {
        return Err(Error::NotModular(format!("normalized S is not unitary (residual {res:e})")));
    }
    let r = data.rank();
    let raw = raw_verlinde(data);
    let mut map = FusionMap::new();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let v = raw[(a * r + b) * r + c];
                let k = v.re.round();
                if (v - Complex64::new(k, 0.0)).norm() > INT_TOL || k < 0.0 {
                    return Err(Error::Integrality { a, b, c, value: v.re });
                }
                if k > 0.0 {
                    map.insert((a, b, c), k as u32);
                }
            }
        }
    }
    Ok(map)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Clone, Debug)]
pub struct ModularityReport {
    pub is_modular: bool,
    pub checks: Vec<CheckResult>,
    pub failures: Vec<CheckResult>,
    pub xi: Option<Complex64>,
}

impl fmt::Display for ModularityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "modular: {}", self.is_modular)?;
        for c in &self.checks {
            let mark = if c.passed() { "ok  " } else { "FAIL" };
            writeln!(f, "  [{mark}] {:<20} residual {:.3e} (tol {:.0e})", c.name, c.residual, c.tolerance)?;
        }
        if let Some(xi) = self.xi {
            writeln!(f, "  xi = {:.9} {:+.9}i", xi.re, xi.im)?;
        }
        Ok(())
    }
}

/// Runs the modularity checks; failures are reported, never thrown.
///
/// (i) `S̃·S̃† = D·1`; (ii) Verlinde coefficients are integers equal to the ring's;
/// (iii) `s² = C`; (iv) `(s·t)³ = ξ·1`; (v) the only transparent label is the unit.
pub fn is_modular(data: &PreModularData) -> ModularityReport {
    let r = data.rank();
    let mut checks = Vec::new();
    checks.push(CheckResult { name: "unitarity", residual: unitarity_residual(data), tolerance: NUM_TOL });

    let raw = raw_verlinde(data);
    let mut verlinde: f64 = 0.0;
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let v = raw[(a * r + b) * r + c];
                let n = f64::from(data.ring().n(a, b, c));
                let dist = (v - Complex64::new(n, 0.0)).norm();
                verlinde = if dist.is_finite() { verlinde.max(dist) } else { f64::INFINITY };
            }
        }
    }
    checks.push(CheckResult { name: "verlinde", residual: verlinde, tolerance: INT_TOL });

    let s = data.normalized_s();
    let s2 = &s * &s;
    let mut conj_res: f64 = 0.0;
    for a in 0..r {
        for b in 0..r {
            let target = if a == data.ring().dual(b) { 1.0 } else { 0.0 };
            conj_res = conj_res.max((s2[(a, b)] - Complex64::new(target, 0.0)).norm());
        }
    }
    checks.push(CheckResult { name: "charge_conjugation", residual: conj_res, tolerance: NUM_TOL });

    let (tau_plus, _) = gauss_sums(data);
    let xi = tau_plus / data.total_dim().sqrt();
    let t = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        r,
        data.twists().iter().map(|p| p.to_complex()),
    ));
    let st = &s * &t;
    let st3 = &st * &st * &st;
    let mut rel: f64 = 0.0;
    for a in 0..r {
        for b in 0..r {
            let target = if a == b { xi } else { Complex64::new(0.0, 0.0) };
            rel = rel.max((st3[(a, b)] - target).norm());
        }
    }
    checks.push(CheckResult { name: "modular_relation", residual: rel, tolerance: NUM_TOL });

    let transparent = transparent_objects(data);
    checks.push(CheckResult {
        name: "transparent",
        residual: (transparent.len() - 1) as f64,
        tolerance: 0.0,
    });

    let failures: Vec<CheckResult> = checks.iter().filter(|c| !c.passed()).cloned().collect();
    let is_modular = failures.is_empty();
    ModularityReport { is_modular, checks, failures, xi: is_modular.then_some(xi) }
}

/// `τ^± = Σ_x θ_x^{±1} d_x²`.
pub fn gauss_sums(data: &PreModularData) -> (Complex64, Complex64) {
    let mut plus = Complex64::new(0.0, 0.0);
    let mut minus = Complex64::new(0.0, 0.0);
    for a in 0..data.rank() {
        let d2 = data.dim(a) * data.dim(a);
        plus += data.twist(a).to_complex() * d2;
        minus += (-data.twist(a)).to_complex() * d2;
    }
    (plus, minus)
}

/// Additive central charge `c ∈ Q/8Z` together with `ξ = e^{2πi c/8}`.
#[derive(Clone, Copy, Debug)]
pub struct CentralCharge {
    pub c: Ratio<i64>,
    pub xi: Complex64,
}

impl CentralCharge {
    pub fn from_xi(xi: Complex64) -> Result<Self> {
        if (xi.norm() - 1.0).abs() > NUM_TOL {
            return Err(Error::AnomalousGaussSum(xi.norm()));
        }
        let raw = (8.0 * xi.arg() / std::f64::consts::TAU).rem_euclid(8.0);
        for q in 1..=16i64 {
            let k = (raw * q as f64).round();
            if (raw * q as f64 - k).abs() <= INT_TOL * q as f64 {
                let c = Ratio::new(k as i64, q);
                let c = c - Ratio::from_integer(8) * (c / 8).floor();
                return Ok(Self { c, xi });
            }
        }
        Err(Error::InvalidData(format!("central charge {raw} is not a rational with denominator <= 16")))
    }

    /// `c₁ + c₂ mod 8`.
    pub fn add(self, other: CentralCharge) -> Ratio<i64> {
        let c = self.c + other.c;
        c - Ratio::from_integer(8) * (c / 8).floor()
    }
}

impl PartialEq for CentralCharge {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl PartialOrd for CentralCharge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.c.partial_cmp(&other.c)
    }
}

pub fn central_charge(data: &PreModularData) -> Result<CentralCharge> {
    let (tau_plus, _) = gauss_sums(data);
    CentralCharge::from_xi(tau_plus / data.total_dim().sqrt())
}

/// Reverses the braiding: twists negated, S̃ conjugated.
pub fn conjugate(data: &PreModularData) -> PreModularData {
    let twists = data.twists().iter().map(|&t| -t).collect();
    let smatrix = data.smatrix().map(|z| z.conj());
    PreModularData::assemble(data.ring().clone(), twists, smatrix).expect("sizes unchanged")
}

/// Deligne product; label `(i, j)` has index `i * b.rank() + j`.
pub fn deligne_product(a: &PreModularData, b: &PreModularData) -> PreModularData {
    let ring = a.ring().deligne(b.ring());
    let mut twists = Vec::with_capacity(a.rank() * b.rank());
    for i in 0..a.rank() {
        for j in 0..b.rank() {
            twists.push(a.twist(i) + b.twist(j));
        }
    }
    let smatrix = a.smatrix().kronecker(b.smatrix());
    PreModularData::assemble(ring, twists, smatrix).expect("product sizes match")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{ising_mtc, pointed_mtc, svect_data, toric_code, MetricGroup};

    fn approx(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn fp_dims_examples() {
        let ising = ising_mtc(Phase::new(15, 16)).unwrap();
        let d = fp_dims(ising.ring());
        assert!((d[0] - 1.0).abs() < 1e-12);
        assert!((d[1] - 1.0).abs() < 1e-12);
        assert!((d[2] - 2f64.sqrt()).abs() < 1e-12);
        let trivial = pointed_mtc(&MetricGroup::new(&[], vec![Phase::ZERO]).unwrap());
        assert_eq!(fp_dims(trivial.ring()), vec![1.0]);
        let k = pointed_mtc(&MetricGroup::new(&[2, 2], vec![Phase::ZERO; 4]).unwrap());
        assert_eq!(fp_dims(k.ring()), vec![1.0; 4]);
    }

    #[test]
    fn ising_smatrix_matches_balancing_convention() {
        let ising = ising_mtc(Phase::new(1, 16)).unwrap();
        let (u, x) = (ising.index_of("u").unwrap(), ising.index_of("x").unwrap());
        assert!(approx(ising.s(u, x), Complex64::new(-2f64.sqrt(), 0.0)));
        assert!(ising.balancing_residual() < 1e-12);
    }

    #[test]
    fn verlinde_on_ising_and_trivial() {
        let ising = ising_mtc(Phase::new(1, 16)).unwrap();
        let n = verlinde_fusion(&ising).unwrap();
        let (one, u, x) = (ising.unit(), ising.index_of("u").unwrap(), ising.index_of("x").unwrap());
        assert_eq!(n.get(&(x, x, one)), Some(&1));
        assert_eq!(n.get(&(x, x, u)), Some(&1));
        assert_eq!(n.get(&(x, x, x)), None);
        assert_eq!(n.get(&(u, x, x)), Some(&1));
        let trivial = pointed_mtc(&MetricGroup::new(&[], vec![Phase::ZERO]).unwrap());
        assert_eq!(verlinde_fusion(&trivial).unwrap().get(&(0, 0, 0)), Some(&1));
    }

    #[test]
    fn verlinde_on_toric_code_is_klein_group_law() {
        let g = crate::group::AbelianGroup::new(&[2, 2]).unwrap();
        let tc = pointed_mtc(&MetricGroup::new(&[2, 2], vec![Phase::ZERO, Phase::ZERO, Phase::ZERO, Phase::half()]).unwrap());
        let n = verlinde_fusion(&tc).unwrap();
        let mut expected = FusionMap::new();
        for a in 0..4 {
            for b in 0..4 {
                expected.insert((a, b, g.add(a, b)), 1);
            }
        }
        assert_eq!(n, expected);
    }

    #[test]
    fn verlinde_rejects_degenerate() {
        assert!(matches!(verlinde_fusion(&svect_data()), Err(Error::NotModular(_))));
    }

    #[test]
    fn svect_fails_unitarity_and_transparency() {
        let rep = is_modular(&svect_data());
        assert!(!rep.is_modular);
        let names: Vec<_> = rep.failures.iter().map(|c| c.name).collect();
        assert!(names.contains(&"unitarity"));
        assert!(names.contains(&"transparent"));
        assert!(rep.xi.is_none());
    }

    #[test]
    fn ising_is_modular_for_every_root() {
        for m in (1..16).step_by(2) {
            let ising = ising_mtc(Phase::new(m, 16)).unwrap();
            let rep = is_modular(&ising);
            assert!(rep.is_modular, "{rep}");
        }
    }

    #[test]
    fn gauss_sums_examples() {
        // θ_X = ε ζ^{-1}: τ⁺ = 1 − 1 + 2 θ_X.
        for m in (1..16).step_by(2) {
            let ising = ising_mtc(Phase::new(m, 16)).unwrap();
            let x = ising.index_of("x").unwrap();
            let (tp, tm) = gauss_sums(&ising);
            assert!(approx(tp, ising.twist(x).to_complex() * 2.0));
            assert!(approx(tp * tm, Complex64::new(ising.total_dim(), 0.0)));
        }
        let trivial = pointed_mtc(&MetricGroup::new(&[], vec![Phase::ZERO]).unwrap());
        let (tp, tm) = gauss_sums(&trivial);
        assert!(approx(tp, Complex64::new(1.0, 0.0)) && approx(tm, Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn central_charges() {
        let ising = ising_mtc(Phase::new(15, 16)).unwrap();
        assert_eq!(central_charge(&ising).unwrap().c, Ratio::new(1, 2));
        assert_eq!(central_charge(&toric_code()).unwrap().c, Ratio::from_integer(0));
        let semion = pointed_mtc(&MetricGroup::new(&[2], vec![Phase::ZERO, Phase::new(1, 4)]).unwrap());
        assert_eq!(central_charge(&semion).unwrap().c, Ratio::from_integer(1));
        assert!(matches!(central_charge(&svect_data()), Err(Error::AnomalousGaussSum(_))));
    }

    #[test]
    fn conjugation() {
        let ising = ising_mtc(Phase::new(15, 16)).unwrap();
        let bar = conjugate(&ising);
        let x = ising.index_of("x").unwrap();
        assert_eq!(bar.twist(x), Phase::new(15, 16));
        assert_eq!(central_charge(&bar).unwrap().c, Ratio::new(15, 2));
        let semion = pointed_mtc(&MetricGroup::new(&[2], vec![Phase::ZERO, Phase::new(1, 4)]).unwrap());
        assert_eq!(conjugate(&semion).twist(1), Phase::new(3, 4));
        let tc = toric_code();
        let tcb = conjugate(&tc);
        assert_eq!(tc.twists(), tcb.twists());
        assert!((tc.smatrix() - tcb.smatrix()).norm() < 1e-12);
    }

    #[test]
    fn deligne_of_ising_pair() {
        let ising = ising_mtc(Phase::new(1, 16)).unwrap();
        let p = deligne_product(&ising, &ising);
        assert_eq!(p.rank(), 9);
        assert!((p.total_dim() - 16.0).abs() < 1e-9);
        assert!(p.balancing_residual() < 1e-9);
        let xi = central_charge(&ising).unwrap().xi;
        assert!(approx(central_charge(&p).unwrap().xi, xi * xi));
        assert!(is_modular(&p).is_modular);
    }
}
