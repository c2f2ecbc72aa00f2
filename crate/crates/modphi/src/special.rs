//! Special functions: log-Gamma (real and complex), Barnes G on the positive
//! axis, Gaussian tails, Cauchy-integral derivatives and quadrature.

use crate::error::{Error, Result};
use crate::scalar::{lit, to64, Scalar};
use num_complex::Complex;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// ζ'(−1) = 1/12 − log A, A the Glaisher–Kinkelin constant.
pub const ZETA_PRIME_M1: f64 = -0.165_421_143_700_450_92;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// log|Γ(x)| for real x. Returns +∞ at the poles 0, −1, −2, ...
pub fn ln_gamma<S: Scalar>(x: S) -> S {
    let half = lit::<S>(0.5);
    if x < half {
        if x == x.floor() {
            return S::infinity();
        }
        let s = (S::PI() * x).sin().abs();
        return (S::PI() / s).ln() - ln_gamma(S::one() - x);
    }
    let x = x - S::one();
    let mut a = lit::<S>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + lit::<S>(c) / (x + S::from_usize(i).unwrap());
    }
    let t = x + lit::<S>(LANCZOS_G) + half;
    half * (S::TAU()).ln() + (x + half) * t.ln() - t + a.ln()
}

/// Sign of Γ(x) for real x off the poles.
pub fn gamma_sign<S: Scalar>(x: S) -> S {
    if x > S::zero() {
        return S::one();
    }
    let k = (-x).floor();
    if to64(k) as i64 % 2 == 0 {
        -S::one()
    } else {
        S::one()
    }
}

/// Principal-ish log Γ(z) for complex z; only its exponential is meaningful
/// across the reflection branch.
pub fn ln_gamma_complex<S: Scalar>(z: Complex<S>) -> Complex<S> {
    let half = lit::<S>(0.5);
    let one = Complex::new(S::one(), S::zero());
    if z.re < half {
        let pi = Complex::new(S::PI(), S::zero());
        return pi.ln() - (pi * z).sin().ln() - ln_gamma_complex(one - z);
    }
    let z = z - one;
    let mut a = Complex::new(lit::<S>(LANCZOS[0]), S::zero());
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + Complex::new(lit::<S>(c), S::zero()) / (z + S::from_usize(i).unwrap());
    }
    let t = z + lit::<S>(LANCZOS_G) + half;
    Complex::new(half * S::TAU().ln(), S::zero()) + (z + half) * t.ln() - t + a.ln()
}

/// 1/Γ(z), entire; exactly zero at the non-positive integers.
pub fn recip_gamma_complex<S: Scalar>(z: Complex<S>) -> Complex<S> {
    if z.im == S::zero() && z.re <= S::zero() && z.re == z.re.floor() {
        return Complex::new(S::zero(), S::zero());
    }
    (-ln_gamma_complex(z)).exp()
}

/// log G(x) for the Barnes G-function, x > 0.
pub fn barnes_log_g<S: Scalar>(x: S) -> Result<S> {
    if !(x > S::zero()) || !x.is_finite() {
        return Err(Error::DomainError(format!("Barnes G needs x > 0, got {x}")));
    }
    // log G(x) = log G(x + m) − Σ_{j<m} log Γ(x + j)
    let ten = lit::<S>(11.0);
    let mut shift = S::zero();
    let mut y = x;
    while y < ten {
        shift = shift + ln_gamma(y);
        y = y + S::one();
    }
    let z = y - S::one();
    let lz = z.ln();
    let z2 = z * z;
    let mut v =
        z2 * lz / lit(2.0) - lit::<S>(0.75) * z2 + z * S::TAU().ln() / lit(2.0) - lz / lit(12.0) + lit(ZETA_PRIME_M1);
    // Σ B_{2k+2} / (4k(k+1) z^{2k})
    const B: [f64; 6] = [-1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];
    let mut zp = S::one();
    for (i, &b) in B.iter().enumerate() {
        let k = (i + 1) as f64;
        zp = zp * z2;
        v = v + lit::<S>(b / (4.0 * k * (k + 1.0))) / zp;
    }
    Ok(v - shift)
}

/// P[N(0,1) ≥ a].
pub fn gaussian_tail(a: f64) -> f64 {
    if a > 8.0 {
        (-0.5 * a * a).exp() / (a * std::f64::consts::TAU.sqrt()) * tail_series(a)
    } else {
        0.5 * libm::erfc(a / std::f64::consts::SQRT_2)
    }
}

/// log P[N(0,1) ≥ a], finite for every real a.
pub fn log_gaussian_tail(a: f64) -> f64 {
    if a > 8.0 {
        -0.5 * a * a - (a * std::f64::consts::TAU.sqrt()).ln() + tail_series(a).ln()
    } else {
        gaussian_tail(a).ln()
    }
}

/// Mills-type ratio e^{a²/2} P[N(0,1) ≥ a].
pub fn mills(a: f64) -> f64 {
    if a > 8.0 {
        tail_series(a) / (a * std::f64::consts::TAU.sqrt())
    } else {
        (0.5 * a * a + gaussian_tail(a).ln()).exp()
    }
}

/// Σ (−1)^k (2k−1)!! / a^{2k}, stopped at the smallest term.
fn tail_series(a: f64) -> f64 {
    let inv = 1.0 / (a * a);
    let mut term: f64 = 1.0;
    let mut sum: f64 = 1.0;
    for k in 1..60 {
        let next = -term * (2 * k - 1) as f64 * inv;
        if next.abs() >= term.abs() || next.abs() < 1e-18 * sum.abs() {
            break;
        }
        term = next;
        sum += term;
    }
    sum
}

pub fn normal_cdf(x: f64) -> f64 {
    gaussian_tail(-x)
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / std::f64::consts::TAU.sqrt()
}

/// Taylor coefficients f^{(k)}(h), k = 0..=K, of a function analytic on the disk
/// of radius `radius` around the real point h, by the trapezoid rule on the
/// Cauchy integral.
pub fn cauchy_derivatives<S: Scalar, const K: usize>(f: &dyn Fn(Complex<S>) -> Complex<S>, h: S, radius: S) -> [S; K] {
    const M: usize = 64;
    let mut acc = [Complex::new(S::zero(), S::zero()); K];
    for j in 0..M {
        let th = S::TAU() * S::from_usize(j).unwrap() / S::from_usize(M).unwrap();
        let w = Complex::new(th.cos(), th.sin());
        let v = f(Complex::new(h, S::zero()) + w * radius);
        let mut wk = Complex::new(S::one(), S::zero());
        for a in acc.iter_mut() {
            *a = *a + v * wk;
            wk = wk * w.conj();
        }
    }
    let mut out = [S::zero(); K];
    let mut fact = S::one();
    let mut rk = S::one();
    for (k, o) in out.iter_mut().enumerate() {
        if k > 0 {
            fact = fact * S::from_usize(k).unwrap();
            rk = rk * radius;
        }
        *o = acc[k].re * fact / (rk * S::from_usize(M).unwrap());
    }
    out
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn gl_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, nodes: &(Vec<f64>, Vec<f64>)) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    nodes.0.iter().zip(&nodes.1).map(|(x, w)| w * f(c + r * x)).sum::<f64>() * r
}

/// Adaptive 20-point Gauss–Legendre quadrature with panel bisection.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let nodes = gauss_legendre(20);
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        nodes: &(Vec<f64>, Vec<f64>),
    ) -> f64 {
        let m = 0.5 * (a + b);
        let l = gl_panel(f, a, m, nodes);
        let r = gl_panel(f, m, b, nodes);
        let err = (l + r - whole).abs();
        if depth == 0 || err <= tol || err <= 64.0 * f64::EPSILON * (l.abs() + r.abs()) {
            return l + r;
        }
        rec(f, a, m, l, 0.5 * tol, depth - 1, nodes) + rec(f, m, b, r, 0.5 * tol, depth - 1, nodes)
    }
    let whole = gl_panel(f, a, b, &nodes);
    rec(f, a, b, whole, tol * whole.abs().max(f64::MIN_POSITIVE), 40, &nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lanczos_small_values() {
        assert!((ln_gamma(0.5f64) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        assert!(ln_gamma(1.0f64).abs() < 1e-15);
        assert!(ln_gamma(2.0f64).abs() < 1e-15);
        assert!((ln_gamma(6.0f64) - 120f64.ln()).abs() < 1e-13);
        assert!(ln_gamma(-2.0f64).is_infinite());
    }

    #[test]
    fn complex_matches_real() {
        for &x in &[0.3f64, 1.7, 4.2, -0.5, -2.5] {
            let c = ln_gamma_complex(Complex::new(x, 0.0)).exp().re;
            let r = gamma_sign(x) * ln_gamma(x).exp();
            assert!((c - r).abs() < 1e-12 * r.abs(), "{x}");
        }
    }

    #[test]
    fn series_tail_joins_erfc() {
        for &a in &[8.0f64, 9.0, 10.0] {
            let s = (-0.5 * a * a).exp() / (a * std::f64::consts::TAU.sqrt()) * tail_series(a);
            let e = 0.5 * libm::erfc(a / std::f64::consts::SQRT_2);
            assert!((s / e - 1.0).abs() < 2e-14, "{a} {}", s / e - 1.0);
        }
    }

    #[test]
    fn legendre_nodes_integrate_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
    }
}
