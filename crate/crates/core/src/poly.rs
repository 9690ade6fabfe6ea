//! Real roots of univariate polynomials on a closed interval.
//!
//! Roots are isolated recursively: the critical points of `p` split the
//! interval into monotone pieces, each holding at most one simple root, found
//! by bisection. Even-multiplicity roots show up as critical points where `p`
//! vanishes.

/// Coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

const BISECT_WIDTH: f64 = 1e-13;
const MERGE_WIDTH: f64 = 1e-9;

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Identically zero, or every coefficient within `tol` of zero.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.abs() <= tol)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// `sum |c_k| |t|^k`, the natural rounding scale of `eval(t)`.
    fn magnitude(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t.abs() + c.abs())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![0.0]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// Real roots in `[lo, hi]`, ascending, clustered within `1e-9`.
    /// Returns nothing for the zero polynomial.
    pub fn real_roots(&self, lo: f64, hi: f64) -> Vec<f64> {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale == 0.0 {
            return Vec::new();
        }
        let normalized = Self::new(self.coeffs.iter().map(|c| c / scale).collect());
        let mut roots = normalized.roots_rec(lo, hi);
        roots.sort_by(f64::total_cmp);
        let mut merged: Vec<f64> = Vec::with_capacity(roots.len());
        for r in roots {
            match merged.last() {
                Some(&last) if r - last <= MERGE_WIDTH => {}
                _ => merged.push(r),
            }
        }
        merged
    }

    fn near_zero(&self, t: f64) -> bool {
        self.eval(t).abs() <= 1e-12 * self.magnitude(t).max(1e-300)
    }

    fn roots_rec(&self, lo: f64, hi: f64) -> Vec<f64> {
        match self.degree() {
            0 => Vec::new(),
            1 => {
                let r = -self.coeffs[0] / self.coeffs[1];
                if (lo..=hi).contains(&r) {
                    vec![r]
                } else {
                    Vec::new()
                }
            }
            _ => {
                let mut points = vec![lo];
                points.extend(self.derivative().roots_rec(lo, hi));
                points.push(hi);
                points.sort_by(f64::total_cmp);
                let mut roots = Vec::new();
                for &p in &points {
                    if self.near_zero(p) {
                        roots.push(p);
                    }
                }
                for w in points.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let (fa, fb) = (self.eval(a), self.eval(b));
                    if fa == 0.0 || fb == 0.0 || fa.signum() == fb.signum() {
                        continue;
                    }
                    roots.push(self.bisect(a, b, fa));
                }
                roots
            }
        }
    }

    fn bisect(&self, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
        while b - a > BISECT_WIDTH {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = self.eval(mid);
            if fm == 0.0 {
                return mid;
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }
}
