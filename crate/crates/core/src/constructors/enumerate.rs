//! Brute-force enumeration of pointed modular extensions of pointed symmetric bases.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::metric::{coordinate_labels, form_table, pointed_mtc, MetricGroup};
use crate::data::PreModularData;
use crate::equivalence::find_equivalence;
use crate::error::{Error, Result};
use crate::extensions::ExtensionWitness;
use crate::group::{abelian_groups_of_order, AbelianGroup};
use crate::phase::Phase;

/// Upper bound on `|A|` for the enumeration (bulk order `|A|² ≤ 36`).
pub const MAX_BASE_ORDER: u64 = 6;

/// Every quadratic form on `⊕ Z_{n_i}`, as value tables. Generator values
/// `q(e_i)` range over `(1/2n_i)Z` subject to `n_i² q(e_i) ∈ Z`, pairings over
/// `(1/gcd(n_i,n_j))Z`; this parametrizes all quadratic forms.
fn quadratic_forms(group: &AbelianGroup) -> Vec<Vec<Phase>> {
    let orders = group.orders();
    let k = orders.len();
    let diag_choices: Vec<Vec<Phase>> = orders
        .iter()
        .map(|&n| {
            let n = n as i64;
            (0..2 * n).filter(|t| (n * t) % 2 == 0).map(|t| Phase::new(t, 2 * n)).collect()
        })
        .collect();
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            pairs.push((i, j, num_integer::gcd(orders[i], orders[j]) as i64));
        }
    }
    let mut out = Vec::new();
    let mut diag = vec![Phase::ZERO; k];
    let mut pairing = vec![vec![Phase::ZERO; k]; k];
    fn rec_pairs(
        idx: usize,
        pairs: &[(usize, usize, i64)],
        group: &AbelianGroup,
        diag: &[Phase],
        pairing: &mut Vec<Vec<Phase>>,
        out: &mut Vec<Vec<Phase>>,
    ) {
        if idx == pairs.len() {
            out.push(form_table(group, diag, pairing));
            return;
        }
        let (i, j, g) = pairs[idx];
        for t in 0..g {
            pairing[i][j] = Phase::new(t, g);
            rec_pairs(idx + 1, pairs, group, diag, pairing, out);
        }
    }
    fn rec_diag(
        idx: usize,
        choices: &[Vec<Phase>],
        pairs: &[(usize, usize, i64)],
        group: &AbelianGroup,
        diag: &mut Vec<Phase>,
        pairing: &mut Vec<Vec<Phase>>,
        out: &mut Vec<Vec<Phase>>,
    ) {
        if idx == choices.len() {
            rec_pairs(0, pairs, group, diag, pairing, out);
            return;
        }
        for &v in &choices[idx] {
            diag[idx] = v;
            rec_diag(idx + 1, choices, pairs, group, diag, pairing, out);
        }
    }
    rec_diag(0, &diag_choices, &pairs, group, &mut diag, &mut pairing, &mut out);
    out
}

/// Homomorphisms `A → M` given by generator images; injective ones only.
fn injective_homs(base: &AbelianGroup, target: &AbelianGroup) -> Vec<Vec<usize>> {
    let gens: Vec<u64> = base.orders().to_vec();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&n| (0..target.order()).filter(|&y| target.scale(y, n) == 0).collect())
        .collect();
    let mut out = Vec::new();
    let mut images = vec![0usize; gens.len()];
    fn rec(
        idx: usize,
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        base: &AbelianGroup,
        target: &AbelianGroup,
        out: &mut Vec<Vec<usize>>,
    ) {
        if idx == candidates.len() {
            let map: Vec<usize> = (0..base.order())
                .map(|a| {
                    base.coords(a)
                        .iter()
                        .zip(images.iter())
                        .fold(0, |acc, (&c, &y)| target.add(acc, target.scale(y, c)))
                })
                .collect();
            let mut sorted = map.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() == map.len() {
                out.push(map);
            }
            return;
        }
        for &y in &candidates[idx] {
            images[idx] = y;
            rec(idx + 1, candidates, images, base, target, out);
        }
    }
    rec(0, &candidates, &mut images, base, target, &mut out);
    out
}

fn class_key(mg: &MetricGroup, embedding: &[usize]) -> (Vec<u64>, Vec<Phase>, Vec<(Phase, Vec<Phase>)>) {
    let mut twists = mg.values().to_vec();
    twists.sort();
    // Pairings with the embedded generators separate many classes cheaply.
    let mut profile: Vec<(Phase, Vec<Phase>)> = (0..mg.order())
        .map(|x| (mg.q(x), embedding.iter().map(|&e| mg.bilinear(x, e)).collect::<Vec<_>>()))
        .map(|(q, mut b)| {
            b.sort();
            (q, b)
        })
        .collect();
    profile.sort();
    (mg.orders().to_vec(), twists, profile)
}

/// Pointed extensions of the pointed symmetric base `(A, q_A)` (labels of
/// `base` in mixed-radix order of `A`), one per equivalence class.
///
/// Candidates are metric groups `(M, q)` of order `|A|²` with non-degenerate
/// `b` and an injective `ι: A → M` with `q∘ι = q_A`; such an image is its own
/// orthogonal complement, so the centralizer condition holds.
pub fn enumerate_pointed_extensions_over(
    base_form: &MetricGroup,
    base: &PreModularData,
) -> Result<Vec<ExtensionWitness>> {
    let a_order = base_form.order() as u64;
    if a_order > MAX_BASE_ORDER {
        return Err(Error::SizeBound(format!("base order {a_order} exceeds {MAX_BASE_ORDER}")));
    }
    if base.rank() as u64 != a_order {
        return Err(Error::InvalidArgument("base data does not match base group".into()));
    }
    if (0..base_form.order()).any(|g| (0..base_form.order()).any(|h| !base_form.bilinear(g, h).is_zero())) {
        return Err(Error::InvalidArgument("base form is not symmetric (b ≠ 0)".into()));
    }
    let base_group = base_form.group().clone();
    let mut candidates: Vec<(MetricGroup, Vec<usize>)> = Vec::new();
    for factors in abelian_groups_of_order(a_order * a_order) {
        let m_group = AbelianGroup::new(&factors)?;
        let homs = injective_homs(&base_group, &m_group);
        if homs.is_empty() {
            continue;
        }
        let found: Vec<(MetricGroup, Vec<usize>)> = quadratic_forms(&m_group)
            .into_par_iter()
            .flat_map_iter(|q| {
                let mg = MetricGroup::from_table_unchecked(m_group.clone(), q);
                let ok = mg.is_nondegenerate();
                let homs = &homs;
                let matching: Vec<(MetricGroup, Vec<usize>)> = if ok {
                    homs.iter()
                        .filter(|h| h.iter().enumerate().all(|(a, &y)| mg.q(y) == base_form.q(a)))
                        .map(|h| (mg.clone(), h.clone()))
                        .collect()
                } else {
                    Vec::new()
                };
                matching.into_iter()
            })
            .collect();
        candidates.extend(found);
    }

    let mut buckets: BTreeMap<_, Vec<(PreModularData, Vec<usize>)>> = BTreeMap::new();
    for (mg, emb) in candidates {
        let key = class_key(&mg, &emb);
        let bulk = pointed_mtc(&mg);
        let reps = buckets.entry(key).or_default();
        let mut seen = false;
        for (rep, rep_emb) in reps.iter() {
            let pinned: Vec<(usize, usize)> = emb.iter().zip(rep_emb).map(|(&x, &y)| (x, y)).collect();
            if find_equivalence(&bulk, rep, &pinned)?.is_some() {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push((bulk, emb));
        }
    }
    Ok(buckets
        .into_values()
        .flatten()
        .map(|(bulk, emb)| ExtensionWitness::new(base.clone(), bulk, emb).canonicalized())
        .collect())
}

/// Pointed extensions of `Rep(A)` for `A = ⊕ Z_{orders}`.
pub fn enumerate_pointed_extensions(orders: &[u64]) -> Result<Vec<ExtensionWitness>> {
    let n: u64 = orders.iter().product();
    if n > MAX_BASE_ORDER {
        return Err(Error::SizeBound(format!("base order {n} exceeds {MAX_BASE_ORDER}")));
    }
    let form = MetricGroup::new(orders, vec![Phase::ZERO; n as usize])?;
    let base = pointed_mtc(&form);
    debug_assert_eq!(base.labels(), coordinate_labels(form.group()).as_slice());
    enumerate_pointed_extensions_over(&form, &base)
}
