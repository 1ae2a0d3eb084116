//! Modular extensions, the stacking product and the group/torsor structure on them.

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::condensation::{base_coordinates, condense};
use crate::constructors::{g_kappa_mtc, pointed_mtc, MetricGroup};
use crate::data::{central_charge, conjugate, deligne_product, is_modular, CentralCharge, PreModularData, NUM_TOL};
use crate::equivalence::find_equivalence;
use crate::error::{Error, Result};
use crate::group::invariant_factors_of_table;
use crate::phase::Phase;
use crate::symmetric::{centralizer, classify_symmetric, transparent_objects, SymmetricKind};

/// Premodular data with an embedding of its labels into a bulk.
#[derive(Clone, Debug)]
pub struct EmbeddedCategory {
    pub data: PreModularData,
    pub embedding: Vec<usize>,
}

/// A modular extension `ι: E ↪ M` of a symmetric base `E`.
///
/// With `over = Some(C)` the witness is an extension of a premodular `C` whose
/// Müger center is `E`: then `C ↪ M` and the centralizer of `ι(E)` is `C`.
#[derive(Clone, Debug)]
pub struct ExtensionWitness {
    pub base: PreModularData,
    pub bulk: PreModularData,
    pub embedding: Vec<usize>,
    pub over: Option<EmbeddedCategory>,
}

fn inverse_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

impl ExtensionWitness {
    pub fn new(base: PreModularData, bulk: PreModularData, embedding: Vec<usize>) -> Self {
        Self { base, bulk, embedding, over: None }
    }

    pub fn with_over(mut self, data: PreModularData, embedding: Vec<usize>) -> Self {
        self.over = Some(EmbeddedCategory { data, embedding });
        self
    }

    /// Copy with base, bulk and `C` in canonical label order.
    pub fn canonicalized(&self) -> Self {
        let (bulk, bulk_perm) = self.bulk.canonical_form();
        let bulk_inv = inverse_perm(&bulk_perm);
        let (base, base_perm) = self.base.canonical_form();
        let embedding = base_perm.iter().map(|&old| bulk_inv[self.embedding[old]]).collect();
        let over = self.over.as_ref().map(|c| {
            let (data, perm) = c.data.canonical_form();
            let embedding = perm.iter().map(|&old| bulk_inv[c.embedding[old]]).collect();
            EmbeddedCategory { data, embedding }
        });
        Self { base, bulk, embedding, over }
    }

    pub fn central_charge(&self) -> Result<CentralCharge> {
        central_charge(&self.bulk)
    }

    /// Sorted bulk labels hit by the base.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.embedding.clone();
        img.sort_unstable();
        img.dedup();
        img
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub passed: bool,
    pub checks: Vec<ExtensionCheck>,
}

impl fmt::Display for ExtensionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "extension valid: {}", self.passed)?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "  [{mark}] {:<14} {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// First failure of `emb: small → big` as a braided embedding, if any.
fn embedding_defect(small: &PreModularData, big: &PreModularData, emb: &[usize]) -> Option<String> {
    if emb.len() != small.rank() {
        return Some(format!("embedding has {} entries for {} labels", emb.len(), small.rank()));
    }
    if let Some(&x) = emb.iter().find(|&&x| x >= big.rank()) {
        return Some(format!("target {x} out of range"));
    }
    let mut sorted = emb.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != emb.len() {
        return Some("embedding is not injective".into());
    }
    if emb[small.unit()] != big.unit() {
        return Some("unit not preserved".into());
    }
    for a in 0..small.rank() {
        if emb[small.ring().dual(a)] != big.ring().dual(emb[a]) {
            return Some(format!("dual of {} not preserved", small.label(a)));
        }
        if small.twist(a) != big.twist(emb[a]) {
            return Some(format!("twist of {} not preserved", small.label(a)));
        }
        for b in 0..small.rank() {
            if (small.s(a, b) - big.s(emb[a], emb[b])).norm() > NUM_TOL {
                return Some(format!("S̃ entry ({}, {}) not preserved", small.label(a), small.label(b)));
            }
            let mut big_total = 0;
            for &(c, n) in big.ring().product(emb[a], emb[b]) {
                big_total += n;
                match emb.iter().position(|&e| e == c) {
                    Some(cs) if small.ring().n(a, b, cs) == n => {}
                    _ => return Some(format!("fusion {} ⊗ {} not preserved", small.label(a), small.label(b))),
                }
            }
            let small_total: u32 = small.ring().product(a, b).iter().map(|&(_, n)| n).sum();
            if big_total != small_total {
                return Some(format!("fusion {} ⊗ {} not preserved", small.label(a), small.label(b)));
            }
        }
    }
    None
}

/// Checks every defining property of a (minimal) modular extension.
pub fn validate_extension(w: &ExtensionWitness) -> ExtensionReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, defect: Option<String>| {
        checks.push(ExtensionCheck { name, passed: defect.is_none(), detail: defect.unwrap_or_else(|| "ok".into()) });
    };
    let emb_defect = embedding_defect(&w.base, &w.bulk, &w.embedding);
    let emb_ok = emb_defect.is_none();
    push("embedding", emb_defect);
    let transparent = transparent_objects(&w.base);
    push(
        "base_symmetric",
        (transparent.len() != w.base.rank()).then(|| format!("{} of {} labels transparent", transparent.len(), w.base.rank())),
    );
    let report = is_modular(&w.bulk);
    push(
        "bulk_modular",
        (!report.is_modular).then(|| {
            report.failures.iter().map(|c| c.name).collect::<Vec<_>>().join(", ")
        }),
    );
    let (expected_dim, over_image) = match &w.over {
        Some(c) => {
            let defect = embedding_defect(&c.data, &w.bulk, &c.embedding);
            let ok = defect.is_none();
            push("over_embedding", defect);
            let mut img = c.embedding.clone();
            img.sort_unstable();
            (c.data.total_dim() * w.base.total_dim(), ok.then_some(img))
        }
        None => (w.base.total_dim() * w.base.total_dim(), Some(w.image())),
    };
    if emb_ok {
        let cent = centralizer(&w.bulk, &w.image());
        let defect = match &over_image {
            Some(target) if &cent == target => None,
            Some(_) => Some(format!("centralizer of the base has {} labels", cent.len())),
            None => Some("no valid target for the centralizer".into()),
        };
        push("centralizer", defect);
    }
    let d = w.bulk.total_dim();
    push(
        "dimension",
        ((d - expected_dim).abs() > 1e-6 * expected_dim).then(|| format!("D = {d}, expected {expected_dim}")),
    );
    ExtensionReport { passed: checks.iter().all(|c| c.passed), checks }
}

fn preserves(a: &PreModularData, b: &PreModularData, map: &[usize]) -> bool {
    a.rank() == b.rank() && embedding_defect(a, b, map).is_none()
}

/// Braided equivalence `σ` between two bases, preferring the one that matches labels by name.
pub fn base_matching(b1: &PreModularData, b2: &PreModularData) -> Result<Vec<usize>> {
    let by_name: Option<Vec<usize>> = b1.labels().iter().map(|l| b2.index_of(l)).collect();
    if let Some(map) = by_name {
        if preserves(b1, b2, &map) {
            return Ok(map);
        }
    }
    find_equivalence(b1, b2, &[])?.ok_or_else(|| Error::BaseMismatch("bases are not equivalent".into()))
}

/// Stacking `w₁ ⊠_E w₂`: condense `{ι₁(e) ⊠ ι₂(σ(e*))}` in `M₁ ⊠ M₂`.
pub fn stack(w1: &ExtensionWitness, w2: &ExtensionWitness) -> Result<ExtensionWitness> {
    if w1.over.is_some() && w2.over.is_some() {
        return Err(Error::InvalidArgument("at most one factor may carry a premodular C".into()));
    }
    let sigma = base_matching(&w1.base, &w2.base)?;
    let host = deligne_product(&w1.bulk, &w2.bulk);
    let r2 = w2.bulk.rank();
    let idx = |i: usize, j: usize| i * r2 + j;
    let bosons: Vec<usize> = (0..w1.base.rank())
        .map(|e| idx(w1.embedding[e], w2.embedding[sigma[w1.base.ring().dual(e)]]))
        .collect();
    let cond = condense(&host, &bosons)?;
    let lift = |x: usize| {
        cond.unique_image(x).ok_or_else(|| Error::NotCondensable(format!("{} is not a simple local label", host.label(x))))
    };
    let embedding = (0..w1.base.rank()).map(|e| lift(idx(w1.embedding[e], w2.bulk.unit()))).collect::<Result<_>>()?;
    let over = match (&w1.over, &w2.over) {
        (Some(c), None) => Some(EmbeddedCategory {
            data: c.data.clone(),
            embedding: c.embedding.iter().map(|&x| lift(idx(x, w2.bulk.unit()))).collect::<Result<_>>()?,
        }),
        (None, Some(c)) => Some(EmbeddedCategory {
            data: c.data.clone(),
            embedding: c.embedding.iter().map(|&y| lift(idx(w1.bulk.unit(), y))).collect::<Result<_>>()?,
        }),
        _ => None,
    };
    Ok(ExtensionWitness { base: w1.base.clone(), bulk: cond.data, embedding, over }.canonicalized())
}

/// The unit of the extension group: `Z(Vec_A)` for `Rep(A)`, the toric code for sVect.
pub fn extension_identity(base: &PreModularData) -> Result<ExtensionWitness> {
    let all: Vec<usize> = (0..base.rank()).collect();
    if transparent_objects(base).len() != base.rank() {
        return Err(Error::InvalidArgument("base is not symmetric".into()));
    }
    let class = classify_symmetric(base, &all)?;
    match class.kind {
        SymmetricKind::Trivial => Ok(ExtensionWitness::new(base.clone(), base.clone(), vec![base.unit()])),
        SymmetricKind::SuperTannakian if base.rank() == 2 => {
            let bulk = g_kappa_mtc(0);
            let f = class.fermion_label.expect("super-Tannakian base has a fermion");
            let mut embedding = vec![0; 2];
            embedding[base.unit()] = bulk.unit();
            embedding[f] = bulk.index_of("u").expect("fermion label");
            Ok(ExtensionWitness::new(base.clone(), bulk, embedding).canonicalized())
        }
        SymmetricKind::Tannakian if class.abelian_table.is_some() => {
            let (group, to_group) = base_coordinates(base)?;
            let orders = group.orders();
            let k = orders.len();
            let mut doubled = orders.to_vec();
            doubled.extend_from_slice(orders);
            let big = crate::group::AbelianGroup::new(&doubled)?;
            let q: Vec<Phase> = (0..big.order())
                .map(|x| {
                    let c = big.coords(x);
                    (0..k).map(|i| Phase::new((c[i] * c[k + i]) as i64, orders[i] as i64)).sum()
                })
                .collect();
            let bulk = pointed_mtc(&MetricGroup::new(&doubled, q)?);
            let embedding = to_group
                .iter()
                .map(|&g| {
                    let mut c = vec![0; k];
                    c.extend(group.coords(g));
                    big.index(&c)
                })
                .collect();
            Ok(ExtensionWitness::new(base.clone(), bulk, embedding).canonicalized())
        }
        _ => Err(Error::InvalidArgument("identity extension is only built for pointed or rank-2 bases".into())),
    }
}

/// Inverse under stacking: the reversed braiding on `M` (and `C`).
pub fn extension_inverse(w: &ExtensionWitness) -> ExtensionWitness {
    ExtensionWitness {
        base: w.base.clone(),
        bulk: conjugate(&w.bulk),
        embedding: w.embedding.clone(),
        over: w.over.as_ref().map(|c| EmbeddedCategory { data: conjugate(&c.data), embedding: c.embedding.clone() }),
    }
}

/// Equivalence of extensions: a bulk equivalence commuting with the embeddings.
pub fn extensions_equivalent(w1: &ExtensionWitness, w2: &ExtensionWitness) -> Result<bool> {
    Ok(extension_equivalence(w1, w2)?.is_some())
}

/// The bulk permutation realizing an extension equivalence, if one exists.
pub fn extension_equivalence(w1: &ExtensionWitness, w2: &ExtensionWitness) -> Result<Option<Vec<usize>>> {
    let sigma = base_matching(&w1.base, &w2.base)?;
    let mut pinned: Vec<(usize, usize)> =
        (0..w1.base.rank()).map(|e| (w1.embedding[e], w2.embedding[sigma[e]])).collect();
    if let (Some(c1), Some(c2)) = (&w1.over, &w2.over) {
        let tau = match base_matching(&c1.data, &c2.data) {
            Ok(t) => t,
            Err(Error::BaseMismatch(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        for c in 0..c1.data.rank() {
            let pair = (c1.embedding[c], c2.embedding[tau[c]]);
            if pinned.iter().any(|&(x, y)| (x == pair.0) != (y == pair.1)) {
                return Ok(None);
            }
            pinned.push(pair);
        }
    }
    pinned.sort_unstable();
    pinned.dedup();
    find_equivalence(&w1.bulk, &w2.bulk, &pinned)
}

fn locate(w: &ExtensionWitness, list: &[ExtensionWitness]) -> Result<Option<usize>> {
    for (k, other) in list.iter().enumerate() {
        if extensions_equivalent(w, other)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Central charges `(c₁, c₂, c₁⊠c₂)` of one stacking.
#[derive(Clone, Debug, PartialEq)]
pub struct StackRecord {
    pub left: usize,
    pub right: usize,
    pub c_left: Ratio<i64>,
    pub c_right: Ratio<i64>,
    pub c_out: Ratio<i64>,
}

impl StackRecord {
    /// `c(out) = c(left) + c(right) mod 8`.
    pub fn charge_additive(&self) -> bool {
        let sum = self.c_left + self.c_right;
        let sum = sum - Ratio::from_integer(8) * (sum / 8).floor();
        sum == self.c_out
    }
}

#[derive(Clone, Debug)]
pub struct GroupTable {
    pub table: Vec<Vec<usize>>,
    pub identity: Option<usize>,
    pub commutative: bool,
    pub associative: bool,
    pub has_inverses: bool,
    pub invariant_factors: Vec<u64>,
    pub stacks: Vec<StackRecord>,
}

impl GroupTable {
    pub fn is_group(&self) -> bool {
        self.identity.is_some() && self.associative && self.has_inverses
    }
}

impl fmt::Display for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.table {
            writeln!(f, "  {}", row.iter().map(|x| format!("{x:>2}")).collect::<Vec<_>>().join(" "))?;
        }
        writeln!(f, "identity: {:?}", self.identity)?;
        writeln!(f, "commutative: {}  associative: {}  inverses: {}", self.commutative, self.associative, self.has_inverses)?;
        write!(f, "invariant factors: {:?}", self.invariant_factors)
    }
}

/// Stacking table of a list of pairwise inequivalent extensions of one base.
/// Every product is computed; a product outside the list is a [`Error::ClosureFailure`].
pub fn group_table(elements: &[ExtensionWitness]) -> Result<GroupTable> {
    let n = elements.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let results: Vec<Result<(usize, StackRecord)>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let s = stack(&elements[i], &elements[j])?;
            let k = locate(&s, elements)?.ok_or_else(|| {
                Error::ClosureFailure(format!("stack of elements {i} and {j} is not in the list"))
            })?;
            let record = StackRecord {
                left: i,
                right: j,
                c_left: elements[i].central_charge()?.c,
                c_right: elements[j].central_charge()?.c,
                c_out: s.central_charge()?.c,
            };
            Ok((k, record))
        })
        .collect();
    let mut table = vec![vec![0; n]; n];
    let mut stacks = Vec::with_capacity(n * n);
    for (&(i, j), r) in cells.iter().zip(results) {
        let (k, record) = r?;
        table[i][j] = k;
        stacks.push(record);
    }
    let identity = (0..n).find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j));
    let commutative = (0..n).all(|i| (0..n).all(|j| table[i][j] == table[j][i]));
    let associative =
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| table[table[i][j]][k] == table[i][table[j][k]])));
    let has_inverses = identity.is_some_and(|e| (0..n).all(|i| (0..n).any(|j| table[i][j] == e)));
    let invariant_factors = match identity {
        Some(e) if associative && commutative && has_inverses => invariant_factors_of_table(&table, e),
        _ => Vec::new(),
    };
    Ok(GroupTable { table, identity, commutative, associative, has_inverses, invariant_factors, stacks })
}

#[derive(Clone, Debug)]
pub struct TorsorReport {
    /// `action[i][j]`: index in `ext_c` of `ext_c[i] ⊠ ext_e[j]`, `None` if outside the list.
    pub action: Vec<Vec<Option<usize>>>,
    pub closed: bool,
    pub free: bool,
    pub transitive: bool,
    pub stacks: Vec<StackRecord>,
}

impl TorsorReport {
    pub fn passed(&self) -> bool {
        self.closed && self.free && self.transitive
    }
}

impl fmt::Display for TorsorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.action {
            let cells: Vec<String> =
                row.iter().map(|c| c.map_or(" -".to_string(), |k| format!("{k:>2}"))).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "closed: {}  free: {}  transitive: {}", self.closed, self.free, self.transitive)
    }
}

/// Checks that stacking makes `ext_c` a torsor over `ext_e`.
pub fn torsor_check(ext_c: &[ExtensionWitness], ext_e: &[ExtensionWitness]) -> Result<TorsorReport> {
    let cells: Vec<(usize, usize)> =
        (0..ext_c.len()).flat_map(|i| (0..ext_e.len()).map(move |j| (i, j))).collect();
    let results: Vec<Result<(Option<usize>, StackRecord)>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let s = stack(&ext_c[i], &ext_e[j])?;
            let record = StackRecord {
                left: i,
                right: j,
                c_left: ext_c[i].central_charge()?.c,
                c_right: ext_e[j].central_charge()?.c,
                c_out: s.central_charge()?.c,
            };
            Ok((locate(&s, ext_c)?, record))
        })
        .collect();
    let mut action = vec![vec![None; ext_e.len()]; ext_c.len()];
    let mut stacks = Vec::with_capacity(cells.len());
    for (&(i, j), r) in cells.iter().zip(results) {
        let (k, record) = r?;
        action[i][j] = k;
        stacks.push(record);
    }
    let closed = action.iter().all(|row| row.iter().all(Option::is_some));
    let free = action.iter().all(|row| {
        let mut hits: Vec<usize> = row.iter().flatten().copied().collect();
        let total = hits.len();
        hits.sort_unstable();
        hits.dedup();
        hits.len() == total && total == row.len()
    });
    let transitive = !ext_c.is_empty()
        && action.first().is_some_and(|row| {
            let mut hits: Vec<usize> = row.iter().flatten().copied().collect();
            hits.sort_unstable();
            hits.dedup();
            hits.len() == ext_c.len()
        });
    Ok(TorsorReport { action, closed, free, transitive, stacks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{mext_svect_catalog, rep_abelian, svect_data, toric_code, twisted_double_cyclic};

    #[test]
    fn identity_is_neutral() {
        let cat = mext_svect_catalog();
        let id = extension_identity(&svect_data()).unwrap();
        for (i, w) in cat.iter().enumerate().step_by(3) {
            let s = stack(w, &id).unwrap();
            assert!(extensions_equivalent(&s, w).unwrap(), "entry {i}");
        }
    }

    #[test]
    fn inverse_stacks_to_identity() {
        let cat = mext_svect_catalog();
        let id = extension_identity(&svect_data()).unwrap();
        for w in [&cat[1], &cat[2], &cat[5]] {
            let s = stack(w, &extension_inverse(w)).unwrap();
            assert!(extensions_equivalent(&s, &id).unwrap());
        }
    }

    #[test]
    fn identity_for_rep_z2_is_toric_code() {
        let id = extension_identity(&rep_abelian(&[2]).unwrap()).unwrap();
        assert!(validate_extension(&id).passed);
        assert!(find_equivalence(&id.bulk, &toric_code(), &[]).unwrap().is_some());
    }

    #[test]
    fn broken_witness_fails_validation() {
        let mut w = twisted_double_cyclic(2, 0).unwrap();
        w.embedding = vec![w.bulk.unit(), w.bulk.unit()];
        let rep = validate_extension(&w);
        assert!(!rep.passed);
        assert!(!rep.checks[0].passed);
    }

    #[test]
    fn two_overs_are_rejected() {
        let id = extension_identity(&svect_data()).unwrap();
        let c = id.clone().with_over(svect_data(), id.embedding.clone());
        assert!(matches!(stack(&c, &c), Err(Error::InvalidArgument(_))));
    }
}
