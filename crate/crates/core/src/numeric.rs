//! Floating-point helpers: compensated summation, quadrature, and complex
//! polynomial roots.

use num_complex::Complex64;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

macro_rules! compensated_impl {
    ($t:ty, $abs:expr) => {
        impl CompensatedSum<$t> {
            pub fn add(&mut self, x: $t) {
                let t = self.sum + x;
                let abs: fn(&$t) -> f64 = $abs;
                if abs(&self.sum) >= abs(&x) {
                    self.comp += ((self.sum - t) + x);
                } else {
                    self.comp += ((x - t) + self.sum);
                }
                self.sum = t;
            }

            pub fn total(&self) -> $t {
                self.sum + self.comp
            }
        }
    };
}

compensated_impl!(f64, |x| x.abs());
compensated_impl!(Complex64, |z| z.re.abs().max(z.im.abs()));

/// Composite midpoint rule on `[a, b]` with `nodes` cells.
pub fn midpoint<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, nodes: usize) -> f64 {
    let h = (b - a) / nodes as f64;
    let mut acc = CompensatedSum::<f64>::default();
    for j in 0..nodes {
        acc.add(f(a + (j as f64 + 0.5) * h));
    }
    acc.total() * h
}

/// Roots of the monic polynomial `x^d + c[d-1] x^(d-1) + ... + c[0]`
/// (coefficients low degree first, leading 1 omitted), by Aberth iteration
/// followed by Newton polishing.
pub fn monic_roots(low: &[Complex64]) -> Vec<Complex64> {
    let d = low.len();
    if d == 0 {
        return Vec::new();
    }
    let eval = |z: Complex64| {
        let mut v = Complex64::new(1.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for &c in low.iter().rev() {
            dv = dv * z + v;
            v = v * z + c;
        }
        (v, dv)
    };
    // Cauchy-type radius for the initial circle.
    let radius = 1.0 + low.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scale = low[0].norm().powf(1.0 / d as f64).clamp(1e-3, radius);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(scale, 0.4 + std::f64::consts::TAU * k as f64 / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (v, dv) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = eval(*zi);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
        }
    }
    z
}

/// `Π_{i<j} |r_i - r_j|^2`.
pub fn discriminant_abs(roots: &[Complex64]) -> f64 {
    let mut acc = 1.0;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            acc *= (roots[i] - roots[j]).norm_sqr();
        }
    }
    acc
}
