//! Builders for the category families used throughout the crate.

mod enumerate;
mod metric;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_rational::Ratio;

use crate::data::{central_charge, deligne_product, CMatrix, PreModularData};
use crate::error::{Error, Result};
use crate::extensions::ExtensionWitness;
use crate::phase::Phase;
use crate::ring::FusionRing;

pub use enumerate::{enumerate_pointed_extensions, enumerate_pointed_extensions_over};
pub use metric::{coordinate_labels, parse_coordinate_labels, pointed_mtc, pointed_mtc_named, MetricGroup};

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Unitary Ising category `I_ζ` for `ζ = exp(2πi·s)`, `ζ⁸ = −1`.
///
/// `θ_x = ε ζ^{-1}` where `ε = ±1` is the sign making `ε(ζ² + ζ^{-2}) = √2`.
pub fn ising_mtc(s: Phase) -> Result<PreModularData> {
    if s.denom() != 16 || s.numer() % 2 == 0 {
        return Err(Error::InvalidArgument(format!("ζ = e^(2πi·{s}) is not a primitive 16th root")));
    }
    let cos = (2.0 * std::f64::consts::TAU * s.to_f64()).cos();
    let epsilon = if cos > 0.0 { Phase::ZERO } else { Phase::half() };
    let ring = FusionRing::new(
        names(&["1", "u", "x"]),
        0,
        vec![0, 1, 2],
        vec![
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
        ],
    )?;
    let r2 = 2f64.sqrt();
    let smatrix = CMatrix::from_row_slice(
        3,
        3,
        &[1.0, 1.0, r2, 1.0, 1.0, -r2, r2, -r2, 0.0].map(|v| num_complex::Complex64::new(v, 0.0)),
    );
    PreModularData::new(ring, vec![Phase::ZERO, Phase::half(), epsilon - s], smatrix)
}

/// Ising category with central charge `c` (an odd multiple of 1/2).
pub fn ising_with_central_charge(c: Ratio<i64>) -> Result<PreModularData> {
    for m in (1..16).step_by(2) {
        let data = ising_mtc(Phase::new(m, 16))?;
        if central_charge(&data)?.c == c {
            return Ok(data);
        }
    }
    Err(Error::InvalidArgument(format!("no Ising category has central charge {c}")))
}

/// Super vector spaces: labels `1, f`, `θ_f = 1/2`, S̃ all ones.
pub fn svect_data() -> PreModularData {
    let m = MetricGroup::new(&[2], vec![Phase::ZERO, Phase::half()]).expect("valid form");
    pointed_mtc_named(&m, names(&["1", "f"])).expect("two labels")
}

/// `Rep(A)` for abelian `A = ⊕ Z_{n_i}`: pointed data on the dual group with `q ≡ 0`.
pub fn rep_abelian(orders: &[u64]) -> Result<PreModularData> {
    let n: u64 = orders.iter().product();
    let m = MetricGroup::new(orders, vec![Phase::ZERO; n as usize])?;
    Ok(pointed_mtc(&m))
}

/// Toric code: `Z_2 × Z_2` with `q = (0, 0, 0, 1/2)`, labels `1, e, m, psi`.
pub fn toric_code() -> PreModularData {
    let m = MetricGroup::new(&[2, 2], vec![Phase::ZERO, Phase::ZERO, Phase::ZERO, Phase::half()])
        .expect("valid form");
    pointed_mtc_named(&m, names(&["1", "e", "m", "psi"])).expect("four labels")
}

/// Semion `(Z_2, q(1) = 1/4)`.
pub fn semion() -> PreModularData {
    let m = MetricGroup::new(&[2], vec![Phase::ZERO, Phase::new(1, 4)]).expect("valid form");
    pointed_mtc(&m)
}

/// The metric group `(G_κ, q_κ)` for `κ = exp(2πi·j/8)`:
/// `2u = 0`, `2v = n(κ)u`, `q(u) = 1/2`, `q(v) = q(u+v) = j/8`.
pub fn g_kappa(j: i64) -> (MetricGroup, Vec<String>) {
    let j = j.rem_euclid(8);
    let kappa = Phase::new(j, 8);
    if j % 2 == 0 {
        // Z_2 × Z_2 with coordinates (v, u).
        let m = MetricGroup::new(&[2, 2], vec![Phase::ZERO, Phase::half(), kappa, kappa]).expect("valid form");
        (m, names(&["0", "u", "v", "u+v"]))
    } else {
        // Z_4 generated by v, u = 2v.
        let m = MetricGroup::new(&[4], vec![Phase::ZERO, kappa, Phase::half(), kappa]).expect("valid form");
        (m, names(&["0", "v", "u", "u+v"]))
    }
}

pub fn g_kappa_mtc(j: i64) -> PreModularData {
    let (m, labels) = g_kappa(j);
    pointed_mtc_named(&m, labels).expect("four labels")
}

/// The sixteen modular extensions of sVect, ordered by central charge: entry `i`
/// has `c = i/2`. Even entries are the pointed `C(G_κ, q_κ)`, odd ones Ising.
pub fn mext_svect_catalog() -> Vec<ExtensionWitness> {
    let base = svect_data();
    (0..16i64)
        .map(|i| {
            let bulk = if i % 2 == 0 {
                g_kappa_mtc(i / 2)
            } else {
                ising_with_central_charge(Ratio::new(i, 2)).expect("odd half-integer charge")
            };
            let embedding = vec![bulk.unit(), bulk.index_of("u").expect("fermion label")];
            ExtensionWitness::new(base.clone(), bulk, embedding).canonicalized()
        })
        .collect()
}

/// `C = sVect ⊠ toric code`: premodular with Müger center sVect.
pub fn svect_toric_code() -> PreModularData {
    deligne_product(&svect_data(), &toric_code())
}

/// The sixteen extensions `M_i ⊠ TC` of `sVect ⊠ TC`, in catalog order.
pub fn mext_svect_toric_catalog() -> Vec<ExtensionWitness> {
    let tc = toric_code();
    let c = svect_toric_code();
    let r = tc.rank();
    mext_svect_catalog()
        .into_iter()
        .map(|w| {
            let bulk = deligne_product(&w.bulk, &tc);
            let embedding = w.embedding.iter().map(|&x| x * r + tc.unit()).collect();
            let over = (0..c.rank()).map(|i| w.embedding[i / r] * r + i % r).collect();
            ExtensionWitness::new(w.base.clone(), bulk, embedding).with_over(c.clone(), over).canonicalized()
        })
        .collect()
}

fn twisted_double_cache() -> &'static Mutex<HashMap<u64, Vec<ExtensionWitness>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<ExtensionWitness>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The cocycle label `k` of a pointed extension of `Rep(Z_n)`: pick any `x` with
/// `b(x, ι(1)) = 1/n` (a unit flux); then `k ≡ n²·q(x) (mod n)`.
pub fn flux_invariant(w: &ExtensionWitness, n: u64) -> Result<u64> {
    let bulk = &w.bulk;
    // Base label 1 is the generator of Rep(Z_n) in coordinate labelling.
    let gen = *w.embedding.get(1).ok_or_else(|| Error::InvalidArgument("base has no generator".into()))?;
    let n_i = n as i64;
    for x in 0..bulk.rank() {
        let Some(xg) = bulk.ring().unique_product(x, gen) else { continue };
        let b = bulk.twist(xg) - bulk.twist(x) - bulk.twist(gen);
        if b == Phase::new(1, n_i) {
            let scaled = bulk.twist(x).ratio() * (n_i * n_i);
            if !scaled.is_integer() {
                return Err(Error::InvalidData(format!("n²·θ({}) is not an integer", bulk.label(x))));
            }
            return Ok(scaled.to_integer().rem_euclid(n_i) as u64);
        }
    }
    Err(Error::NoMatch("no unit flux found in extension".into()))
}

/// All `n` pointed extensions of `Rep(Z_n)`, entry `k` carrying flux invariant `k`.
pub fn twisted_doubles_cyclic(n: u64) -> Result<Vec<ExtensionWitness>> {
    if !(1..=6).contains(&n) {
        return Err(Error::InvalidArgument(format!("cyclic order {n} outside 1..=6")));
    }
    if let Some(hit) = twisted_double_cache().lock().expect("cache").get(&n) {
        return Ok(hit.clone());
    }
    let classes = enumerate_pointed_extensions(&[n])?;
    let mut by_k: Vec<Option<ExtensionWitness>> = vec![None; n as usize];
    for w in classes.iter() {
        let k = if n == 1 { 0 } else { flux_invariant(w, n)? };
        if by_k[k as usize].replace(w.canonicalized()).is_some() {
            return Err(Error::InvalidData(format!("two extension classes share flux invariant {k}")));
        }
    }
    if classes.len() != n as usize || by_k.iter().any(|w| w.is_none()) {
        return Err(Error::InvalidData(format!(
            "enumeration over Rep(Z_{n}) found {} classes, expected {n}",
            classes.len()
        )));
    }
    let out: Vec<ExtensionWitness> = by_k.into_iter().map(|w| w.expect("checked")).collect();
    twisted_double_cache().lock().expect("cache").insert(n, out.clone());
    Ok(out)
}

/// Twisted double `Z(Vec_{Z_n}^{ω_k})` as an extension of `Rep(Z_n)`.
pub fn twisted_double_cyclic(n: u64, k: u64) -> Result<ExtensionWitness> {
    if k >= n.max(1) {
        return Err(Error::InvalidArgument(format!("k = {k} not in 0..{n}")));
    }
    Ok(twisted_doubles_cyclic(n)?.swap_remove(k as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{gauss_sums, is_modular};
    use crate::equivalence::find_equivalence;
    use crate::extensions::{extension_identity, extensions_equivalent, validate_extension};
    use crate::ring::FusionMap;
    use crate::symmetric::{classify_symmetric, transparent_objects, SymmetricKind};
    use num_complex::Complex64;

    #[test]
    fn semion_and_trivial() {
        let s = semion();
        let (tp, _) = gauss_sums(&s);
        assert!((tp - Complex64::new(1.0, 1.0)).norm() < 1e-12);
        assert_eq!(central_charge(&s).unwrap().c, Ratio::from_integer(1));
        let t = pointed_mtc(&MetricGroup::new(&[], vec![Phase::ZERO]).unwrap());
        assert_eq!(t.rank(), 1);
        assert!(is_modular(&t).is_modular);
    }

    #[test]
    fn g_kappa_gauss_sums() {
        for j in 0..8 {
            let c = g_kappa_mtc(j);
            assert!(is_modular(&c).is_modular, "κ = e^(2πi {j}/8)");
            let (tp, _) = gauss_sums(&c);
            let kappa = Phase::new(j, 8).to_complex();
            assert!((tp - kappa * 2.0).norm() < 1e-12);
            assert_eq!(central_charge(&c).unwrap().c, Ratio::from_integer(j));
        }
        assert_eq!(central_charge(&g_kappa_mtc(0)).unwrap().c, Ratio::from_integer(0));
    }

    #[test]
    fn ising_formula_per_root() {
        for m in (1..16).step_by(2) {
            let s = Phase::new(m, 16);
            let data = ising_mtc(s).unwrap();
            let x = data.index_of("x").unwrap();
            let xi = central_charge(&data).unwrap();
            // ξ = θ_x = ε ζ^{-1}
            assert!((xi.xi - data.twist(x).to_complex()).norm() < 1e-12);
            assert_eq!(transparent_objects(&data), vec![0]);
        }
        // ζ = e^{2πi/16}: ε = +1, θ_x = ζ^{-1}, c = −1/2.
        let data = ising_mtc(Phase::new(1, 16)).unwrap();
        assert_eq!(data.twist(2), Phase::new(15, 16));
        assert_eq!(central_charge(&data).unwrap().c, Ratio::new(15, 2));
        // The c = 1/2 category is ζ = e^{-2πi/16}.
        assert_eq!(central_charge(&ising_mtc(Phase::new(15, 16)).unwrap()).unwrap().c, Ratio::new(1, 2));
        assert!(ising_mtc(Phase::new(1, 8)).is_err());
        assert!(ising_mtc(Phase::new(2, 16)).is_err());
    }

    #[test]
    fn symmetric_bases() {
        let sv = svect_data();
        let c = classify_symmetric(&sv, &transparent_objects(&sv)).unwrap();
        assert_eq!((c.kind, c.group_order), (SymmetricKind::SuperTannakian, 2));
        let r3 = rep_abelian(&[3]).unwrap();
        assert_eq!(transparent_objects(&r3).len(), 3);
        let c = classify_symmetric(&r3, &transparent_objects(&r3)).unwrap();
        assert_eq!((c.kind, c.group_order), (SymmetricKind::Tannakian, 3));
        assert_eq!(rep_abelian(&[]).unwrap().rank(), 1);
    }

    #[test]
    fn pointed_fusion_is_group_law() {
        let m = MetricGroup::from_generators(&[3, 3], &[Phase::new(1, 3), Phase::new(2, 3)], &[vec![Phase::ZERO, Phase::ZERO]])
            .unwrap();
        let data = pointed_mtc(&m);
        assert!(is_modular(&data).is_modular);
        assert!((data.total_dim() - 9.0).abs() < 1e-12);
        let v = crate::data::verlinde_fusion(&data).unwrap();
        let mut expected = FusionMap::new();
        for a in 0..9 {
            for b in 0..9 {
                expected.insert((a, b, m.group().add(a, b)), 1);
            }
        }
        assert_eq!(v, expected);
    }

    #[test]
    fn catalog_shape() {
        let cat = mext_svect_catalog();
        assert_eq!(cat.len(), 16);
        for (i, w) in cat.iter().enumerate() {
            assert!(validate_extension(w).passed, "entry {i}");
            assert_eq!(w.central_charge().unwrap().c, Ratio::new(i as i64, 2));
        }
        let id = extension_identity(&svect_data()).unwrap();
        assert!(extensions_equivalent(&cat[0], &id).unwrap());
    }

    #[test]
    fn twisted_doubles_of_z2() {
        let tc = twisted_double_cyclic(2, 0).unwrap();
        let id = extension_identity(&rep_abelian(&[2]).unwrap()).unwrap();
        assert!(extensions_equivalent(&tc, &id).unwrap());
        let twists = |w: &ExtensionWitness| {
            let mut t = w.bulk.twists().to_vec();
            t.sort();
            t
        };
        assert_eq!(twists(&tc), vec![Phase::ZERO, Phase::ZERO, Phase::ZERO, Phase::half()]);
        let ds = twisted_double_cyclic(2, 1).unwrap();
        assert_eq!(twists(&ds), vec![Phase::ZERO, Phase::ZERO, Phase::new(1, 4), Phase::new(3, 4)]);
        assert!(find_equivalence(&toric_code(), &tc.bulk, &[]).unwrap().is_some());
    }

    #[test]
    fn twisted_double_counts() {
        for n in 1..=6u64 {
            let all = twisted_doubles_cyclic(n).unwrap();
            assert_eq!(all.len() as u64, n);
            for w in &all {
                assert!(validate_extension(w).passed);
                assert_eq!(w.bulk.rank() as u64, n * n);
            }
        }
        assert!(twisted_double_cyclic(7, 0).is_err());
        assert!(twisted_double_cyclic(3, 3).is_err());
    }
}
