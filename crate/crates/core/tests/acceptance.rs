//! Acceptance criteria, one line per criterion.

use std::io::Write as _;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use modext::cohomology::{
    analytic_h3_order, cocycle_class_of_extension, cyclic_cocycle_label, h3_classes, restrict_cocycle,
    standard_cocycle_cyclic,
};
use modext::condensation::{break_symmetry, condense};
use modext::constructors::{
    enumerate_pointed_extensions, mext_svect_catalog, mext_svect_toric_catalog, pointed_mtc, svect_data,
    twisted_double_cyclic, MetricGroup,
};
use modext::data::{central_charge, gauss_sums, is_modular, verlinde_fusion};
use modext::extensions::{
    extension_identity, extension_inverse, extensions_equivalent, group_table, stack, torsor_check, validate_extension,
    ExtensionWitness, StackRecord,
};
use modext::group::AbelianGroup;
use modext::ring::FusionMap;
use modext::Phase;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn record(left: usize, right: usize, a: &ExtensionWitness, b: &ExtensionWitness, s: &ExtensionWitness) -> StackRecord {
    StackRecord {
        left,
        right,
        c_left: a.central_charge().unwrap().c,
        c_right: b.central_charge().unwrap().c,
        c_out: s.central_charge().unwrap().c,
    }
}

fn criterion_1() -> Outcome {
    let cat = mext_svect_catalog();
    if cat.len() != 16 {
        return outcome(false, format!("{} witnesses", cat.len()));
    }
    let invalid = cat.iter().filter(|w| !validate_extension(w).passed).count();
    let mut equivalent_pairs = 0;
    for i in 0..16 {
        for j in (i + 1)..16 {
            if extensions_equivalent(&cat[i], &cat[j]).unwrap() {
                equivalent_pairs += 1;
            }
        }
    }
    let mut charges: Vec<Ratio<i64>> = cat.iter().map(|w| w.central_charge().unwrap().c).collect();
    charges.sort();
    let expected: Vec<Ratio<i64>> = (0..16).map(|i| Ratio::new(i, 2)).collect();
    outcome(
        invalid == 0 && equivalent_pairs == 0 && charges == expected,
        format!("16 witnesses, {invalid} invalid, {equivalent_pairs}/120 equivalent pairs, charges 0..15/2 each once: {}", charges == expected),
    )
}

fn criterion_2(records: &mut Vec<StackRecord>) -> Outcome {
    let cat = mext_svect_catalog();
    let t = match group_table(&cat) {
        Ok(t) => t,
        Err(e) => return outcome(false, format!("group table failed: {e}")),
    };
    records.extend(t.stacks.iter().cloned());
    let one = 1;
    let mut x = t.identity.unwrap_or(0);
    let mut powers = Vec::new();
    for _ in 0..16 {
        x = t.table[x][one];
        powers.push(x);
    }
    powers.sort_unstable();
    powers.dedup();
    let generates = powers.len() == 16;
    let ising_charge = cat[one].central_charge().unwrap().c == Ratio::new(1, 2);
    let ok = t.is_group() && t.commutative && t.invariant_factors == vec![16] && t.identity == Some(0) && generates && ising_charge;
    outcome(
        ok,
        format!(
            "closed, group {}, abelian {}, invariant factors {:?}, identity {:?} (κ = 1), c = 1/2 Ising generates: {generates}",
            t.is_group(),
            t.commutative,
            t.invariant_factors,
            t.identity
        ),
    )
}

fn criterion_3(records: &mut Vec<StackRecord>) -> Outcome {
    let cat = mext_svect_catalog();
    let id = extension_identity(&svect_data()).unwrap();
    let id_index = cat.iter().position(|w| extensions_equivalent(w, &id).unwrap());
    let mut inverse_fail = 0;
    let mut identity_fail = 0;
    for (i, w) in cat.iter().enumerate() {
        let inv = extension_inverse(w);
        let s = stack(w, &inv).unwrap();
        records.push(record(i, 100 + i, w, &inv, &s));
        if !extensions_equivalent(&s, &id).unwrap() {
            inverse_fail += 1;
        }
        let s = stack(w, &id).unwrap();
        records.push(record(i, 200, w, &id, &s));
        if !extensions_equivalent(&s, w).unwrap() {
            identity_fail += 1;
        }
    }
    outcome(
        inverse_fail == 0 && identity_fail == 0 && id_index == Some(0),
        format!("w ⊠ w̄ ≡ Z(E) fails {inverse_fail}/16, w ⊠ Z(E) ≡ w fails {identity_fail}/16"),
    )
}

fn criterion_4(records: &mut Vec<StackRecord>) -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for n in [2u64, 3] {
        let classes = enumerate_pointed_extensions(&[n]).unwrap();
        let t = group_table(&classes).unwrap();
        records.extend(t.stacks.iter().cloned());
        let mut additive = true;
        for k1 in 0..n {
            for k2 in 0..n {
                let (a, b) = (twisted_double_cyclic(n, k1).unwrap(), twisted_double_cyclic(n, k2).unwrap());
                let s = stack(&a, &b).unwrap();
                records.push(record(k1 as usize, k2 as usize, &a, &b, &s));
                additive &= cocycle_class_of_extension(&s).unwrap() == (k1 + k2) % n;
            }
        }
        let cyclic = t.is_group() && t.commutative && t.invariant_factors == vec![n];
        ok &= classes.len() as u64 == n && cyclic && additive;
        details.push(format!("Z_{n}: {} classes, table {:?}, k₁+k₂ law {additive}", classes.len(), t.invariant_factors));
    }
    outcome(ok, details.join("; "))
}

fn criterion_5() -> Outcome {
    let cases: [(&[u64], u64); 4] = [(&[2], 2), (&[3], 3), (&[4], 4), (&[2, 2], 8)];
    let mut ok = true;
    let mut found = Vec::new();
    for (orders, expected) in cases {
        let h = h3_classes(orders).unwrap();
        ok &= h.order() == expected && analytic_h3_order(orders) == expected;
        found.push(format!("{orders:?} → {} {:?}", h.order(), h.invariant_factors));
    }
    outcome(ok, found.join(", "))
}

fn criterion_6(records: &mut Vec<StackRecord>) -> Outcome {
    let ext_c = mext_svect_toric_catalog();
    let ext_e = mext_svect_catalog();
    let invalid = ext_c.iter().filter(|w| !validate_extension(w).passed).count();
    let rep = torsor_check(&ext_c, &ext_e).unwrap();
    records.extend(rep.stacks.iter().cloned());
    outcome(
        invalid == 0 && rep.passed(),
        format!("{} C-extensions ({invalid} invalid), closed {}, free {}, transitive {}", ext_c.len(), rep.closed, rep.free, rep.transitive),
    )
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in 0..4u64 {
        let w = twisted_double_cyclic(4, k).unwrap();
        let broken = break_symmetry(&w, &[vec![2]]).unwrap();
        let target = twisted_double_cyclic(2, k % 2).unwrap();
        let equal = extensions_equivalent(&broken, &target).unwrap();
        let restricted = cyclic_cocycle_label(&restrict_cocycle(&standard_cocycle_cyclic(4, k).unwrap(), &[vec![2]]).unwrap()).unwrap();
        let via_extension = cocycle_class_of_extension(&broken).unwrap();
        ok &= equal && restricted == k % 2 && via_extension == restricted;
        parts.push(format!("k={k}: ≡ D^{}(Z_2) {equal}, ω|_H class {restricted}", k % 2));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_8(records: &[StackRecord]) -> Outcome {
    let bad = records.iter().filter(|r| !r.charge_additive()).count();
    outcome(bad == 0 && !records.is_empty(), format!("{} stacks checked, {bad} violate c(out) = c₁ + c₂ mod 8", records.len()))
}

fn random_metric_group(rng: &mut ChaCha8Rng) -> MetricGroup {
    loop {
        let mut orders = Vec::new();
        let mut total = 1u64;
        let factors = rng.gen_range(1..=3);
        for _ in 0..factors {
            let n = rng.gen_range(2..=8u64);
            if total * n <= 16 {
                orders.push(n);
                total *= n;
            }
        }
        let diag: Vec<Phase> = orders
            .iter()
            .map(|&n| {
                let n = n as i64;
                let choices: Vec<i64> = (0..2 * n).filter(|t| (n * t) % 2 == 0).collect();
                Phase::new(choices[rng.gen_range(0..choices.len())], 2 * n)
            })
            .collect();
        let k = orders.len();
        let mut pairing = vec![vec![Phase::ZERO; k]; k];
        for i in 0..k {
            for j in (i + 1)..k {
                let g = num_integer::gcd(orders[i], orders[j]) as i64;
                pairing[i][j] = Phase::new(rng.gen_range(0..g), g);
            }
        }
        let m = MetricGroup::from_generators(&orders, &diag, &pairing).unwrap();
        if m.is_nondegenerate() {
            return m;
        }
    }
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    let mut condensed = 0;
    for trial in 0..200 {
        let m = random_metric_group(&mut rng);
        let data = pointed_mtc(&m);
        if !is_modular(&data).is_modular {
            failures.push(format!("#{trial} {:?} not modular", m.orders()));
            continue;
        }
        let g: &AbelianGroup = m.group();
        let mut law = FusionMap::new();
        for a in 0..g.order() {
            for b in 0..g.order() {
                law.insert((a, b, g.add(a, b)), 1);
            }
        }
        if verlinde_fusion(&data).ok() != Some(law) {
            failures.push(format!("#{trial} Verlinde differs from group law"));
        }
        let isotropic: Vec<usize> = (1..g.order()).filter(|&x| m.q(x).is_zero()).collect();
        let bosons = if isotropic.is_empty() { vec![] } else { vec![isotropic[rng.gen_range(0..isotropic.len())]] };
        let b_order = g.span(&bosons).len() as f64;
        match condense(&data, &bosons) {
            Ok(out) => {
                condensed += 1;
                let expected = data.total_dim() / (b_order * b_order);
                let (tp, _) = gauss_sums(&out.data);
                let (tp_host, _) = gauss_sums(&data);
                let xi: Complex64 = tp / out.data.total_dim().sqrt();
                let xi_host: Complex64 = tp_host / data.total_dim().sqrt();
                if (out.data.total_dim() - expected).abs() > 1e-6 * expected || (xi - xi_host).norm() > 1e-9 {
                    failures.push(format!("#{trial} D' or ξ mismatch"));
                }
                if central_charge(&out.data).is_err() {
                    failures.push(format!("#{trial} condensed charge undefined"));
                }
            }
            Err(e) => failures.push(format!("#{trial} condense failed: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!("200 metric groups, {condensed} condensations, failures: {:?}", failures.iter().take(3).collect::<Vec<_>>()),
    )
}

#[test]
fn acceptance_criteria() {
    let mut records = Vec::new();
    let limits = [5.0, 120.0, 60.0, 120.0, 60.0, 300.0, 60.0, f64::INFINITY, 60.0];
    let mut results: Vec<(usize, Outcome, Duration)> = Vec::new();
    let mut run = |idx: usize, f: &mut dyn FnMut(&mut Vec<StackRecord>) -> Outcome| {
        let start = Instant::now();
        let o = f(&mut records);
        results.push((idx, o, start.elapsed()));
    };
    run(1, &mut |_| criterion_1());
    run(2, &mut |r| criterion_2(r));
    run(3, &mut |r| criterion_3(r));
    run(4, &mut |r| criterion_4(r));
    run(5, &mut |_| criterion_5());
    run(6, &mut |r| criterion_6(r));
    run(7, &mut |_| criterion_7());
    run(8, &mut |r| criterion_8(r));
    run(9, &mut |_| criterion_9());
    let mut all = true;
    for (idx, o, t) in &results {
        let secs = t.as_secs_f64();
        let in_time = secs <= limits[idx - 1];
        let pass = o.passed && in_time;
        all &= pass;
        let _ = writeln!(
            std::io::stderr(),
            "[{}] criterion {idx}: {} ({secs:.2} s{})",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            if in_time { String::new() } else { format!(", over {} s budget", limits[idx - 1]) }
        );
    }
    assert!(all, "acceptance criteria failed");
}
