use super::radius::{nqz_rows, RadiusEstimate};
use crate::index::MultiIndex;
use crate::tensor::{RowOperator, RowTensor, SymmetricTensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MClass {
    StrongM,
    M,
    /// Some off-diagonal entry is positive.
    NotZ,
    NotM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HClass {
    StrongH,
    H,
    NotH,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MReport {
    pub class: MClass,
    /// Largest diagonal entry, used as the shift in `s I - A`.
    pub s: f64,
    /// Bracket on `rho(s I - A)`; absent when the Z test already failed.
    pub radius: Option<RadiusEstimate>,
}

impl MReport {
    /// The class was decided by a converged bracket or a strict gap.
    pub fn is_certain(&self) -> bool {
        match (&self.class, &self.radius) {
            (MClass::NotZ, _) => true,
            (_, Some(r)) => r.converged || self.class == MClass::StrongM || self.class == MClass::NotM,
            (_, None) => false,
        }
    }
}

const NQZ_TOL: f64 = 1e-12;
const NQZ_ITER: usize = 20_000;

/// M-tensor classification of `A = s I - B` with `s` the largest diagonal entry.
///
/// `s > hi` gives a strong M-tensor and `s < lo` rules M out. Inside the
/// bracket the answer is M, and [`MReport::is_certain`] tells whether the
/// bracket had converged.
pub fn m_tensor_class(a: &impl RowOperator) -> MReport {
    let n = a.dim();
    let m = a.order();
    let mut diag = vec![0.0; n];
    for i in 0..n {
        for (rest, v) in a.row(i) {
            if rest.indices().iter().all(|&j| j == i) {
                diag[i] = v;
            } else if v > 0.0 {
                return MReport {
                    class: MClass::NotZ,
                    s: f64::NAN,
                    radius: None,
                };
            }
        }
    }
    let s = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let rows = (0..n)
        .map(|i| {
            let mut row: Vec<(MultiIndex, f64)> = a
                .row(i)
                .into_iter()
                .filter(|(rest, _)| !rest.indices().iter().all(|&j| j == i))
                .map(|(rest, v)| (rest, -v))
                .collect();
            let d = s - diag[i];
            if d != 0.0 {
                row.push((MultiIndex::new(&vec![i; m - 1]), d));
            }
            row
        })
        .collect();
    let b = RowTensor::from_rows(m, rows).expect("shape from source");
    let r = nqz_rows(&b, NQZ_TOL, NQZ_ITER).expect("Z-structure makes the complement nonnegative");
    let slack = 1e-12 * s.abs().max(1.0);
    let class = if s > r.hi + slack {
        MClass::StrongM
    } else if s < r.lo - slack {
        MClass::NotM
    } else {
        MClass::M
    };
    MReport {
        class,
        s,
        radius: Some(r),
    }
}

/// `|a|` on the diagonal, `-|a|` elsewhere.
pub fn comparison_tensor(a: &SymmetricTensor) -> SymmetricTensor {
    a.map_values(|idx, v| if idx.is_diagonal() { v.abs() } else { -v.abs() })
}

pub fn h_tensor_class(a: &SymmetricTensor) -> (HClass, MReport) {
    let report = m_tensor_class(&comparison_tensor(a));
    let class = match report.class {
        MClass::StrongM => HClass::StrongH,
        MClass::M => HClass::H,
        MClass::NotM | MClass::NotZ => HClass::NotH,
    };
    (class, report)
}
