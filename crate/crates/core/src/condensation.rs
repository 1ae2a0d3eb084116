//! Condensation of Tannakian boson subgroups and the local-module category.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;

use crate::constructors::{parse_coordinate_labels, rep_abelian};
use crate::data::{central_charge, is_modular, CMatrix, PreModularData, INT_TOL, NUM_TOL};
use crate::equivalence::find_equivalence;
use crate::error::{Error, Result};
use crate::extensions::ExtensionWitness;
use crate::group::AbelianGroup;
use crate::phase::Phase;
use crate::ring::FusionRing;

/// Largest number of algebraic fixed-point solutions examined per block.
const MAX_BLOCK_SOLUTIONS: usize = 256;

/// Where a condensed label comes from in the host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    /// Host orbit under the boson action, smallest index first.
    pub orbit: Vec<usize>,
    /// `Some(0 | 1)` for the two halves of a split fixed point.
    pub piece: Option<usize>,
}

impl Lift {
    pub fn representative(&self) -> usize {
        self.orbit[0]
    }
}

#[derive(Clone, Debug)]
pub struct CondensationResult {
    pub data: PreModularData,
    /// `lifts[p]` describes condensed label `p`.
    pub lifts: Vec<Lift>,
    /// Closure of the condensed bosons in the host.
    pub bosons: Vec<usize>,
    /// Host labels braiding trivially with every boson.
    pub local_labels: Vec<usize>,
}

impl CondensationResult {
    /// Condensed labels whose lift orbit contains host label `x`.
    pub fn image_of(&self, x: usize) -> Vec<usize> {
        (0..self.lifts.len()).filter(|&p| self.lifts[p].orbit.contains(&x)).collect()
    }

    /// The unique condensed label over `x`, if `x` lies in an unsplit orbit.
    pub fn unique_image(&self, x: usize) -> Option<usize> {
        match self.image_of(x).as_slice() {
            [p] => Some(*p),
            _ => None,
        }
    }
}

/// Double-braiding phase of `x` with the invertible label `b`:
/// `θ_{x⊗b} − θ_x − θ_b`.
pub fn monodromy_phase(data: &PreModularData, x: usize, b: usize) -> Option<Phase> {
    let y = data.ring().unique_product(x, b)?;
    Some(data.twist(y) - data.twist(x) - data.twist(b))
}

fn check_bosons(host: &PreModularData, seed: &[usize]) -> Result<Vec<usize>> {
    if let Some(&bad) = seed.iter().find(|&&b| b >= host.rank()) {
        return Err(Error::InvalidArgument(format!("boson index {bad} out of range")));
    }
    let bosons = host.ring().closure(seed);
    for &b in &bosons {
        if !host.is_invertible(b) {
            return Err(Error::NotCondensable(format!("{} is not invertible", host.label(b))));
        }
        if !host.twist(b).is_zero() {
            let kind = if host.twist(b) == Phase::half() { "a fermion" } else { "not a boson" };
            return Err(Error::NotCondensable(format!("{} is {kind} (θ = {})", host.label(b), host.twist(b))));
        }
    }
    for &a in &bosons {
        for &b in &bosons {
            if monodromy_phase(host, a, b) != Some(Phase::ZERO) {
                return Err(Error::NotCondensable(format!(
                    "{} and {} braid non-trivially",
                    host.label(a),
                    host.label(b)
                )));
            }
        }
    }
    Ok(bosons)
}

struct Orbit {
    members: Vec<usize>,
    stabilizer: Vec<usize>,
}

/// Fixed-point block: orbits with the same order-2 stabilizer.
struct Block {
    orbits: Vec<usize>,
    dims: Vec<f64>,
    twists: Vec<Complex64>,
}

struct FixedPointSearch<'a> {
    block: &'a Block,
    /// Candidate phases `exp(2πi t/N)`.
    roots: Vec<Complex64>,
    norm: f64,
    /// `ξ√D'/2`.
    relation: Complex64,
    f: Vec<Vec<Option<Complex64>>>,
    gauge_fixed: Vec<bool>,
    solutions: Vec<Vec<Vec<Complex64>>>,
    tol: f64,
}

impl FixedPointSearch<'_> {
    fn k(&self) -> usize {
        self.block.orbits.len()
    }

    fn get(&self, i: usize, j: usize) -> Complex64 {
        self.f[i][j].expect("assigned")
    }

    fn set(&mut self, i: usize, j: usize, v: Option<Complex64>) {
        self.f[i][j] = v;
        self.f[j][i] = v;
    }

    fn candidates(&self, i: usize, j: usize) -> Vec<Complex64> {
        let scale = self.block.dims[i] * self.block.dims[j];
        let n = self.roots.len();
        let restrict = i < j && !self.gauge_fixed[j];
        let upto = if restrict { n / 2 } else { n };
        let mut out = vec![Complex64::new(0.0, 0.0)];
        out.extend(self.roots[..upto].iter().map(|w| w * scale));
        out
    }

    fn snap(&self, i: usize, j: usize, v: Complex64) -> Option<Complex64> {
        if v.norm() < self.tol {
            return Some(Complex64::new(0.0, 0.0));
        }
        let scale = self.block.dims[i] * self.block.dims[j];
        self.roots.iter().map(|w| w * scale).find(|c| (c - v).norm() < self.tol)
    }

    fn row_complete_checks(&self, i: usize) -> bool {
        let k = self.k();
        let norm: f64 = (0..k).map(|z| self.get(i, z).norm_sqr()).sum();
        if (norm - self.norm).abs() > self.tol {
            return false;
        }
        for p in 0..i {
            let ortho: Complex64 = (0..k).map(|z| self.get(i, z) * self.get(p, z).conj()).sum();
            if ortho.norm() > self.tol {
                return false;
            }
        }
        for p in 0..=i {
            let lhs: Complex64 = (0..k).map(|z| self.get(p, z) * self.block.twists[z] * self.get(z, i)).sum();
            let rhs = self.relation * (self.block.twists[p] * self.block.twists[i]).inv() * self.get(p, i).conj();
            if (lhs - rhs).norm() > self.tol {
                return false;
            }
        }
        true
    }

    fn prefix_norm(&self, i: usize, upto: usize) -> f64 {
        (0..upto).map(|z| self.f[i][z].map_or(0.0, |v| v.norm_sqr())).sum()
    }

    fn run(&mut self, i: usize, j: usize) {
        if self.solutions.len() >= MAX_BLOCK_SOLUTIONS {
            return;
        }
        let k = self.k();
        if i == k {
            let sol = (0..k).map(|a| (0..k).map(|b| self.get(a, b)).collect()).collect();
            self.solutions.push(sol);
            return;
        }
        if j == k {
            if self.row_complete_checks(i) {
                self.run(i + 1, i + 1);
            }
            return;
        }
        // The last entry of a row is forced by orthogonality with an earlier row
        // carrying a non-zero entry in that column.
        let can_solve = (j == k - 1 && j > i).then(|| (0..i).find(|&p| self.get(p, j).norm() > self.tol)).flatten();
        let values: Vec<Complex64> = match can_solve {
            Some(p) => {
                let partial: Complex64 = (0..j).map(|z| self.get(i, z) * self.get(p, z).conj()).sum();
                match self.snap(i, j, -partial / self.get(p, j).conj()) {
                    Some(v) => vec![v],
                    None => return,
                }
            }
            None => self.candidates(i, j),
        };
        let before = self.prefix_norm(i, j);
        let was_fixed = self.gauge_fixed[j];
        for v in values {
            if before + v.norm_sqr() > self.norm + self.tol {
                continue;
            }
            self.set(i, j, Some(v));
            if i < j && v.norm() > self.tol {
                self.gauge_fixed[j] = true;
            }
            self.run(i, j + 1);
            self.gauge_fixed[j] = was_fixed;
        }
        self.set(i, j, None);
    }
}

fn twist_grid(host: &PreModularData) -> usize {
    let lcm = host.twists().iter().fold(16i64, |acc, t| acc.lcm(&t.denom()));
    let n = lcm.min(64) as usize;
    n + n % 2
}

fn local_verlinde(labels: Vec<String>, unit: usize, smatrix: &CMatrix, total_dim: f64) -> Result<FusionRing> {
    let r = smatrix.nrows();
    let s = smatrix.map(|z| z / total_dim.sqrt());
    let prod = &s * s.adjoint();
    for a in 0..r {
        for b in 0..r {
            let target = if a == b { 1.0 } else { 0.0 };
            if (prod[(a, b)] - Complex64::new(target, 0.0)).norm() > NUM_TOL * 10.0 {
                return Err(Error::NotModular("condensed S-matrix is not unitary".into()));
            }
        }
    }
    let mut entries = Vec::new();
    let mut dual = vec![usize::MAX; r];
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let v: Complex64 = (0..r).map(|x| s[(a, x)] * s[(b, x)] * s[(c, x)].conj() / s[(unit, x)]).sum();
                let n = v.re.round();
                if (v - Complex64::new(n, 0.0)).norm() > INT_TOL || n < 0.0 {
                    return Err(Error::Integrality { a, b, c, value: v.re });
                }
                if n > 0.0 {
                    entries.push((a, b, c, n as u32));
                    if c == unit {
                        dual[a] = b;
                    }
                }
            }
        }
    }
    if dual.contains(&usize::MAX) {
        return Err(Error::InvalidRing("condensed label without dual".into()));
    }
    FusionRing::new(labels, unit, dual, entries)
}

struct Layout {
    /// Per condensed label: orbit index and piece sign.
    labels: Vec<(usize, Option<usize>)>,
    names: Vec<String>,
}

/// Condenses the Tannakian subgroup generated by `bosons`.
///
/// Free orbits become single labels with `d' = d`; an orbit fixed by an order-2
/// subgroup splits in two with `d' = d/2`. The split S̃-block is found by a grid
/// search over phases and checked by full modularity.
///
/// The host is assumed modular (it is usually a Deligne product of modular
/// data, too large for a full check); only its Gauss sum is verified.
pub fn condense(host: &PreModularData, bosons: &[usize]) -> Result<CondensationResult> {
    let xi = central_charge(host)?.xi;
    let bosons = check_bosons(host, bosons)?;
    let b_order = bosons.len();
    let local: Vec<usize> = (0..host.rank())
        .filter(|&x| bosons.iter().all(|&b| monodromy_phase(host, x, b) == Some(Phase::ZERO)))
        .collect();

    let mut seen = vec![false; host.rank()];
    let mut orbits = Vec::new();
    for &x in &local {
        if seen[x] {
            continue;
        }
        let mut members: Vec<usize> = bosons
            .iter()
            .map(|&b| host.ring().unique_product(x, b).expect("invertible boson"))
            .collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            seen[m] = true;
        }
        let stabilizer: Vec<usize> =
            bosons.iter().copied().filter(|&b| host.ring().unique_product(x, b) == Some(x)).collect();
        if stabilizer.len() > 2 {
            return Err(Error::UnderdeterminedCondensation(format!(
                "{} has stabilizer of order {}",
                host.label(x),
                stabilizer.len()
            )));
        }
        orbits.push(Orbit { members, stabilizer });
    }

    let mut layout = Layout { labels: Vec::new(), names: Vec::new() };
    for (o, orbit) in orbits.iter().enumerate() {
        let name = host.label(orbit.members[0]).to_string();
        if orbit.stabilizer.len() == 2 {
            for piece in 0..2 {
                layout.labels.push((o, Some(piece)));
                layout.names.push(format!("{name}#{piece}"));
            }
        } else {
            layout.labels.push((o, None));
            layout.names.push(name);
        }
    }

    let d_new = host.total_dim() / (b_order * b_order) as f64;
    let mut blocks: BTreeMap<Vec<usize>, Block> = BTreeMap::new();
    for (o, orbit) in orbits.iter().enumerate() {
        if orbit.stabilizer.len() == 2 {
            let rep = orbit.members[0];
            let block = blocks.entry(orbit.stabilizer.clone()).or_insert(Block {
                orbits: Vec::new(),
                dims: Vec::new(),
                twists: Vec::new(),
            });
            block.orbits.push(o);
            block.dims.push(host.dim(rep) / 2.0);
            block.twists.push(host.twist(rep).to_complex());
        }
    }
    let grid = twist_grid(host);
    let roots: Vec<Complex64> = (0..grid).map(|t| Phase::new(t as i64, grid as i64).to_complex()).collect();
    let blocks: Vec<Block> = blocks.into_values().collect();
    let mut block_solutions = Vec::new();
    for block in &blocks {
        let k = block.orbits.len();
        let mut search = FixedPointSearch {
            block,
            roots: roots.clone(),
            norm: d_new / 4.0,
            relation: xi * d_new.sqrt() / 2.0,
            f: vec![vec![None; k]; k],
            gauge_fixed: vec![false; k],
            solutions: Vec::new(),
            tol: 1e-7,
        };
        search.gauge_fixed[0] = true;
        search.run(0, 0);
        if search.solutions.is_empty() {
            return Err(Error::NotModular("no consistent S̃-block for split fixed points".into()));
        }
        block_solutions.push(search.solutions);
    }

    let build = |choice: &[usize]| -> Result<PreModularData> {
        let r = layout.labels.len();
        let mut position = BTreeMap::new();
        for (bi, block) in blocks.iter().enumerate() {
            for (i, &o) in block.orbits.iter().enumerate() {
                position.insert(o, (bi, i));
            }
        }
        let sign = |piece: Option<usize>| if piece == Some(1) { -1.0 } else { 1.0 };
        let m = |o: usize| orbits[o].stabilizer.len() as f64;
        let smatrix = CMatrix::from_fn(r, r, |p, q| {
            let (op, ep) = layout.labels[p];
            let (oq, eq) = layout.labels[q];
            let base = host.s(orbits[op].members[0], orbits[oq].members[0]) / (m(op) * m(oq));
            match (position.get(&op), position.get(&oq)) {
                (Some(&(bp, ip)), Some(&(bq, iq))) if bp == bq => {
                    base + block_solutions[bp][choice[bp]][ip][iq] * (sign(ep) * sign(eq))
                }
                _ => base,
            }
        });
        let unit = layout
            .labels
            .iter()
            .position(|&(o, _)| orbits[o].members.contains(&host.unit()))
            .expect("unit orbit");
        let ring = local_verlinde(layout.names.clone(), unit, &smatrix, d_new)?;
        let twists = layout.labels.iter().map(|&(o, _)| host.twist(orbits[o].members[0])).collect();
        let data = PreModularData::new(ring, twists, smatrix)?;
        if !is_modular(&data).is_modular {
            return Err(Error::NotModular("condensed data fails modularity".into()));
        }
        Ok(data)
    };

    let mut valid: Vec<PreModularData> = Vec::new();
    let mut choice = vec![0usize; blocks.len()];
    let mut last_err = None;
    'outer: loop {
        match build(&choice) {
            Ok(d) => valid.push(d),
            Err(e) => last_err = Some(e),
        }
        for bi in 0..choice.len() {
            choice[bi] += 1;
            if choice[bi] < block_solutions[bi].len() {
                continue 'outer;
            }
            choice[bi] = 0;
        }
        break;
    }
    if valid.is_empty() {
        return Err(last_err.unwrap_or_else(|| Error::NotModular("condensation failed".into())));
    }
    let pinned: Vec<(usize, usize)> = layout
        .labels
        .iter()
        .enumerate()
        .filter(|(_, &(_, piece))| piece.is_none())
        .map(|(p, _)| (p, p))
        .collect();
    for other in &valid[1..] {
        if find_equivalence(&valid[0], other, &pinned)?.is_none() {
            return Err(Error::UnderdeterminedCondensation(
                "inequivalent completions of the split S̃-block".into(),
            ));
        }
    }
    let data = valid.swap_remove(0);

    if (data.total_dim() - d_new).abs() > 1e-6 * d_new {
        return Err(Error::NotModular(format!("D' = {} but D/|B|² = {d_new}", data.total_dim())));
    }
    let xi_new = central_charge(&data)?.xi;
    if (xi_new - xi).norm() > NUM_TOL {
        return Err(Error::NotModular("central charge not preserved by condensation".into()));
    }

    let (data, perm) = data.canonical_form();
    let lifts = perm
        .iter()
        .map(|&old| {
            let (o, piece) = layout.labels[old];
            Lift { orbit: orbits[o].members.clone(), piece }
        })
        .collect();
    Ok(CondensationResult { data, lifts, bosons, local_labels: local })
}

/// Coordinates of every base label, from coordinate-style names or, for a cyclic
/// pointed base, from powers of a generator.
pub(crate) fn base_coordinates(base: &PreModularData) -> Result<(AbelianGroup, Vec<usize>)> {
    if let Some((orders, coords)) = parse_coordinate_labels(base.labels()) {
        let group = AbelianGroup::new(&orders)?;
        let to_group: Vec<usize> = coords.iter().map(|c| group.index(c)).collect();
        let consistent = (0..base.rank()).all(|a| {
            (0..base.rank()).all(|b| {
                base.ring().unique_product(a, b).map(|c| to_group[c]) == Some(group.add(to_group[a], to_group[b]))
            })
        });
        if consistent {
            return Ok((group, to_group));
        }
    }
    let n = base.rank();
    if (0..n).all(|a| base.is_invertible(a)) {
        for g in 0..n {
            let mut powers = vec![base.unit()];
            for _ in 1..n {
                let next = base.ring().unique_product(*powers.last().expect("nonempty"), g).expect("invertible");
                powers.push(next);
            }
            let mut sorted = powers.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() == n {
                let group = AbelianGroup::new(&[n as u64])?;
                let mut to_group = vec![0; n];
                for (k, &p) in powers.iter().enumerate() {
                    to_group[p] = k;
                }
                return Ok((group, to_group));
            }
        }
    }
    Err(Error::InvalidArgument("cannot read group coordinates from base labels".into()))
}

/// Breaks the base symmetry `E ⊃ Rep(G)` down to `Rep(H)` for `H ⊂ G` given
/// by independent generators (coordinates in `G`).
///
/// The restriction `res: Ĝ → Ĥ` has kernel `K`; condensing `ι(K)` in the bulk
/// leaves an extension of `Rep(H)`.
pub fn break_symmetry(w: &ExtensionWitness, subgroup: &[Vec<u64>]) -> Result<ExtensionWitness> {
    let base = &w.base;
    let (group, to_group) = base_coordinates(base)?;
    let orders = group.orders().to_vec();
    let mut gens = Vec::new();
    for h in subgroup {
        if h.len() != orders.len() {
            return Err(Error::InvalidArgument(format!(
                "subgroup generator has {} coordinates, group has {}",
                h.len(),
                orders.len()
            )));
        }
        gens.push(group.index(h));
    }
    let h_orders = group.basis_orders(&gens)?;
    let h_orders: Vec<u64> = h_orders.into_iter().filter(|&m| m > 1).collect();
    let gens: Vec<usize> = gens.into_iter().filter(|&g| group.element_order(g) > 1).collect();
    // res(χ)_s = m_s Σ_i χ_i h_{s,i} / n_i  (mod m_s)
    let restrict = |chi: usize| -> Vec<u64> {
        let c = group.coords(chi);
        gens.iter()
            .zip(&h_orders)
            .map(|(&g, &m)| {
                let h = group.coords(g);
                let total: num_rational::Ratio<i64> = c
                    .iter()
                    .zip(&h)
                    .zip(&orders)
                    .map(|((&x, &y), &n)| num_rational::Ratio::new((x * y) as i64, n as i64))
                    .sum();
                let v = total * m as i64;
                debug_assert!(v.is_integer());
                v.to_integer().rem_euclid(m as i64) as u64
            })
            .collect()
    };
    let from_group: Vec<usize> = {
        let mut inv = vec![0; base.rank()];
        for (a, &g) in to_group.iter().enumerate() {
            inv[g] = a;
        }
        inv
    };
    let kernel: Vec<usize> =
        (0..group.order()).filter(|&chi| restrict(chi).iter().all(|&v| v == 0)).map(|chi| from_group[chi]).collect();
    let kernel_bulk: Vec<usize> = kernel.iter().map(|&a| w.embedding[a]).collect();
    if let Some(&f) = kernel_bulk.iter().find(|&&x| w.bulk.twist(x) == Phase::half()) {
        return Err(Error::NotCondensable(format!("kernel contains the fermion {}", w.bulk.label(f))));
    }
    let result = condense(&w.bulk, &kernel_bulk)?;
    let new_base = rep_abelian(&h_orders)?;
    let h_group = AbelianGroup::new(&h_orders)?;
    let mut embedding = vec![usize::MAX; new_base.rank()];
    for chi in 0..group.order() {
        let target = h_group.index(&restrict(chi));
        if embedding[target] == usize::MAX {
            let host = w.embedding[from_group[chi]];
            embedding[target] = result
                .unique_image(host)
                .ok_or_else(|| Error::NotCondensable("base label lands in a split orbit".into()))?;
        }
    }
    if embedding.contains(&usize::MAX) {
        return Err(Error::InvalidArgument("restriction map is not surjective".into()));
    }
    Ok(ExtensionWitness::new(new_base, result.data, embedding).canonicalized())
}
