use crate::data::{CMatrix, PreModularData};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::phase::Phase;
use crate::ring::{FusionMap, FusionRing};

/// A finite abelian group with a quadratic form `q: G → Q/Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricGroup {
    group: AbelianGroup,
    q: Vec<Phase>,
}

impl MetricGroup {
    /// `q` is indexed by mixed-radix element index (first coordinate most significant).
    pub fn new(orders: &[u64], q: Vec<Phase>) -> Result<Self> {
        let group = AbelianGroup::new(orders)?;
        if q.len() != group.order() {
            return Err(Error::InvalidArgument(format!(
                "quadratic form has {} values, group has order {}",
                q.len(),
                group.order()
            )));
        }
        let m = Self { group, q };
        m.validate()?;
        Ok(m)
    }

    /// Builds `q(Σ x_i e_i) = Σ x_i² q_i + Σ_{i<j} x_i x_j b_ij` from generator data.
    /// `pairing[i][j]` is read for `i < j` only.
    pub fn from_generators(orders: &[u64], diag: &[Phase], pairing: &[Vec<Phase>]) -> Result<Self> {
        let group = AbelianGroup::new(orders)?;
        let q = form_table(&group, diag, pairing);
        Self::new(orders, q)
    }

    pub(crate) fn from_table_unchecked(group: AbelianGroup, q: Vec<Phase>) -> Self {
        Self { group, q }
    }

    fn validate(&self) -> Result<()> {
        let n = self.group.order();
        if !self.q[0].is_zero() {
            return Err(Error::InvalidArgument("q(0) must be 0".into()));
        }
        for g in 0..n {
            if self.q[self.group.neg(g)] != self.q[g] {
                return Err(Error::InvalidArgument(format!("q(-g) != q(g) at element {g}")));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let lhs = self.bilinear(self.group.add(g, h), k);
                    if lhs != self.bilinear(g, k) + self.bilinear(h, k) {
                        return Err(Error::InvalidArgument("associated bilinear form is not biadditive".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn orders(&self) -> &[u64] {
        self.group.orders()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn q(&self, g: usize) -> Phase {
        self.q[g]
    }

    pub fn values(&self) -> &[Phase] {
        &self.q
    }

    /// `b(g,h) = q(g+h) − q(g) − q(h)`.
    pub fn bilinear(&self, g: usize, h: usize) -> Phase {
        self.q[self.group.add(g, h)] - self.q[g] - self.q[h]
    }

    pub fn is_nondegenerate(&self) -> bool {
        let n = self.order();
        (1..n).all(|g| (0..n).any(|h| !self.bilinear(g, h).is_zero()))
    }

    /// Default label names: the element coordinates, joined by `.`.
    pub fn coordinate_labels(&self) -> Vec<String> {
        coordinate_labels(&self.group)
    }
}

pub(crate) fn form_table(group: &AbelianGroup, diag: &[Phase], pairing: &[Vec<Phase>]) -> Vec<Phase> {
    let k = group.orders().len();
    (0..group.order())
        .map(|idx| {
            let x = group.coords(idx);
            let mut v = Phase::ZERO;
            for i in 0..k {
                v += diag[i] * (x[i] * x[i]) as i64;
                for j in (i + 1)..k {
                    v += pairing[i][j] * (x[i] * x[j]) as i64;
                }
            }
            v
        })
        .collect()
}

pub fn coordinate_labels(group: &AbelianGroup) -> Vec<String> {
    (0..group.order())
        .map(|i| {
            let c = group.coords(i);
            if c.is_empty() {
                "0".to_string()
            } else {
                c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
            }
        })
        .collect()
}

/// Parses labels produced by [`coordinate_labels`] back into coordinates.
pub fn parse_coordinate_labels(labels: &[String]) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
    let coords: Vec<Vec<u64>> = labels
        .iter()
        .map(|l| l.split('.').map(|p| p.parse::<u64>().ok()).collect::<Option<Vec<u64>>>())
        .collect::<Option<_>>()?;
    let width = coords.first()?.len();
    if coords.iter().any(|c| c.len() != width) {
        return None;
    }
    if labels.len() == 1 {
        return Some((vec![], vec![vec![]]));
    }
    let orders: Vec<u64> = (0..width)
        .map(|i| coords.iter().map(|c| c[i]).max().unwrap_or(0) + 1)
        .collect();
    if orders.iter().product::<u64>() as usize != labels.len() {
        return None;
    }
    Some((orders, coords))
}

/// Pointed premodular data of a metric group: fusion is the group law,
/// `θ_g = q(g)`, `S̃_{gh} = exp(2πi b(g,h))`.
pub fn pointed_mtc(m: &MetricGroup) -> PreModularData {
    pointed_mtc_named(m, m.coordinate_labels()).expect("coordinate labels match order")
}

pub fn pointed_mtc_named(m: &MetricGroup, labels: Vec<String>) -> Result<PreModularData> {
    let g = m.group();
    let n = g.order();
    if labels.len() != n {
        return Err(Error::InvalidArgument("label count does not match group order".into()));
    }
    let mut map = FusionMap::new();
    for a in 0..n {
        for b in 0..n {
            map.insert((a, b, g.add(a, b)), 1);
        }
    }
    let dual = (0..n).map(|a| g.neg(a)).collect();
    let ring = FusionRing::from_map(labels, 0, dual, &map);
    let smatrix = CMatrix::from_fn(n, n, |a, b| m.bilinear(a, b).to_complex());
    PreModularData::assemble(ring, m.values().to_vec(), smatrix)
}
