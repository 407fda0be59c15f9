//! Univariate real polynomials with interval root isolation.

use std::fmt;

/// Coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `a + b t`
    pub fn linear(a: f64, b: f64) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::constant(0.0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(0.0) + other.coeffs.get(k).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Polynomial {
        (0..k).fold(Polynomial::constant(1.0), |acc, _| acc.mul(self))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }

    /// Roots in `[lo, hi]`, sorted. Zeros of magnitude below `tol` at the
    /// endpoints or at critical points count as roots.
    pub fn roots_in(&self, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
        if self.degree() == 0 || lo > hi {
            return Vec::new();
        }
        // Between consecutive critical points the polynomial is monotone.
        let mut marks = vec![lo];
        marks.extend(self.derivative().roots_in(lo, hi, tol));
        marks.push(hi);
        let mut roots: Vec<f64> = Vec::new();
        let push = |r: f64, roots: &mut Vec<f64>| {
            if roots.last().is_none_or(|&last| (r - last).abs() > 1e-10) {
                roots.push(r);
            }
        };
        for w in marks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (self.eval(a), self.eval(b));
            if fa.abs() <= tol {
                push(a, &mut roots);
            }
            if fa.abs() > tol && fb.abs() > tol && fa.signum() != fb.signum() {
                push(bisect(self, a, b, fa), &mut roots);
            }
        }
        if self.eval(hi).abs() <= tol {
            push(hi, &mut roots);
        }
        roots
    }

    /// `(min, argmin, max, argmax)` over `[lo, hi]`.
    pub fn extrema_on(&self, lo: f64, hi: f64) -> (f64, f64, f64, f64) {
        let mut candidates = vec![lo, hi];
        candidates.extend(self.derivative().roots_in(lo, hi, 1e-14));
        let mut out = (f64::INFINITY, lo, f64::NEG_INFINITY, lo);
        for t in candidates {
            let v = self.eval(t);
            if v < out.0 {
                out.0 = v;
                out.1 = t;
            }
            if v > out.2 {
                out.2 = v;
                out.3 = t;
            }
        }
        out
    }
}

fn bisect(p: &Polynomial, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = p.eval(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0.0 && self.coeffs.len() > 1 {
                continue;
            }
            let body = match k {
                0 => format!("{:.2}", c.abs()),
                1 => format!("{:.2}p", c.abs()),
                _ => format!("{:.2}p^{k}", c.abs()),
            };
            let sign = if *c < 0.0 { "-" } else { "+" };
            terms.push((sign, body));
        }
        for (i, (sign, body)) in terms.iter().enumerate() {
            match (i, *sign) {
                (0, "-") => write!(f, "-{body}")?,
                (0, _) => write!(f, "{body}")?,
                (_, s) => write!(f, " {s} {body}")?,
            }
        }
        Ok(())
    }
}
