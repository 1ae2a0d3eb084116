//! Müger centers, centralizers and the Tannakian / super-Tannakian split.

use crate::data::{PreModularData, INT_TOL, NUM_TOL};
use crate::error::{Error, Result};
use crate::phase::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetricKind {
    Trivial,
    Tannakian,
    SuperTannakian,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricClassification {
    pub kind: SymmetricKind,
    pub group_order: u64,
    pub fermion_label: Option<usize>,
    /// Fusion table of the transparent set when every member is invertible
    /// (indices into the sorted label set).
    pub abelian_table: Option<Vec<Vec<usize>>>,
}

fn centralizes(data: &PreModularData, x: usize, y: usize) -> bool {
    let target = data.dim(x) * data.dim(y);
    (data.s(x, y) - num_complex::Complex64::new(target, 0.0)).norm() < NUM_TOL
}

/// Labels with trivial double braiding against every label (`S̃_{xy} = d_x d_y`).
pub fn transparent_objects(data: &PreModularData) -> Vec<usize> {
    let all: Vec<usize> = (0..data.rank()).collect();
    centralizer(data, &all)
}

/// Müger centralizer of a label set.
pub fn centralizer(data: &PreModularData, set: &[usize]) -> Vec<usize> {
    (0..data.rank())
        .filter(|&x| set.iter().all(|&y| centralizes(data, x, y)))
        .collect()
}

/// Deligne-type classification of a fusion-closed set of transparent labels.
pub fn classify_symmetric(data: &PreModularData, set: &[usize]) -> Result<SymmetricClassification> {
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    if !set.contains(&data.unit()) {
        return Err(Error::InvalidArgument("transparent set must contain the unit".into()));
    }
    let mut fermion = None;
    for &a in &set {
        let t = data.twist(a);
        if t == Phase::half() {
            // Canonical order is (d, twist, name); pick the minimum fermion in it.
            let better = match fermion {
                None => true,
                Some(f) => {
                    let order = data.canonical_order();
                    let pos = |l: usize| order.iter().position(|&o| o == l);
                    pos(a) < pos(f)
                }
            };
            if better {
                fermion = Some(a);
            }
        } else if !t.is_zero() {
            return Err(Error::InconsistentData(format!(
                "transparent label {} has twist {t}, expected 0 or 1/2",
                data.label(a)
            )));
        }
    }
    let order_f: f64 = set.iter().map(|&a| data.dim(a) * data.dim(a)).sum();
    if (order_f - order_f.round()).abs() > INT_TOL {
        return Err(Error::InconsistentData(format!("dimension {order_f} is not an integer")));
    }
    let group_order = order_f.round() as u64;
    let kind = if set.len() == 1 {
        SymmetricKind::Trivial
    } else if fermion.is_some() {
        SymmetricKind::SuperTannakian
    } else {
        SymmetricKind::Tannakian
    };
    let abelian_table = if set.iter().all(|&a| data.is_invertible(a)) {
        let pos = |l: usize| set.iter().position(|&o| o == l);
        let mut table = vec![vec![0; set.len()]; set.len()];
        for (i, &a) in set.iter().enumerate() {
            for (j, &b) in set.iter().enumerate() {
                let c = data.ring().unique_product(a, b).and_then(pos).ok_or_else(|| {
                    Error::InconsistentData("transparent set is not fusion-closed".into())
                })?;
                table[i][j] = c;
            }
        }
        Some(table)
    } else {
        None
    };
    Ok(SymmetricClassification { kind, group_order, fermion_label: fermion, abelian_table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{ising_mtc, rep_abelian, svect_data, toric_code};
    use crate::data::deligne_product;
    use crate::group::invariant_factors_of_table;

    #[test]
    fn transparent_sets() {
        assert_eq!(transparent_objects(&toric_code()), vec![0]);
        assert_eq!(transparent_objects(&svect_data()), vec![0, 1]);
        let ising = ising_mtc(Phase::new(1, 16)).unwrap();
        let p = deligne_product(&ising, &svect_data());
        let t: Vec<&str> = transparent_objects(&p).iter().map(|&i| p.label(i)).collect();
        assert_eq!(t, vec!["(1,1)", "(1,f)"]);
    }

    #[test]
    fn centralizers() {
        let ising = ising_mtc(Phase::new(1, 16)).unwrap();
        assert_eq!(centralizer(&ising, &[ising.unit()]), vec![0, 1, 2]);
        let u = ising.index_of("u").unwrap();
        let mut c = centralizer(&ising, &[0, u]);
        c.sort();
        assert_eq!(c, vec![0, u]);
        let tc = toric_code();
        assert_eq!(centralizer(&tc, &[0, 1, 2, 3]), transparent_objects(&tc));
    }

    #[test]
    fn classification() {
        let sv = svect_data();
        let c = classify_symmetric(&sv, &transparent_objects(&sv)).unwrap();
        assert_eq!(c.kind, SymmetricKind::SuperTannakian);
        assert_eq!(c.group_order, 2);
        assert_eq!(c.fermion_label, Some(1));

        let r3 = rep_abelian(&[3]).unwrap();
        let c = classify_symmetric(&r3, &transparent_objects(&r3)).unwrap();
        assert_eq!(c.kind, SymmetricKind::Tannakian);
        assert_eq!(c.group_order, 3);
        assert_eq!(invariant_factors_of_table(c.abelian_table.as_ref().unwrap(), 0), vec![3]);

        let trivial = rep_abelian(&[]).unwrap();
        let c = classify_symmetric(&trivial, &[0]).unwrap();
        assert_eq!(c.kind, SymmetricKind::Trivial);
        assert_eq!(c.group_order, 1);
    }

    #[test]
    fn inconsistent_twist_is_rejected() {
        let ising = ising_mtc(Phase::new(1, 16)).unwrap();
        let x = ising.index_of("x").unwrap();
        assert!(matches!(
            classify_symmetric(&ising, &[0, x]),
            Err(Error::InconsistentData(_))
        ));
    }
}
