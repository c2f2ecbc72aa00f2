//! Reference laws given by their cumulant generating function η, and the
//! Legendre–Fenchel transform F(x) = sup_h (hx − η(h)).

use crate::error::{Error, Result};
use crate::expr::EtaExpr;
use crate::scalar::{lit, Scalar};
use crate::special::cauchy_derivatives;
use num_complex::Complex;
use serde::Deserialize;
use std::sync::Arc;

pub type ComplexFn<S> = Arc<dyn Fn(Complex<S>) -> Complex<S> + Send + Sync>;
/// Real evaluator returning [η, η', η'', η''', η''''] at h.
pub type JetFn<S> = Arc<dyn Fn(S) -> [S; 5] + Send + Sync>;

#[derive(Clone, Debug, PartialEq)]
pub enum LawKind<S> {
    Gaussian { mean: S, var: S },
    Poisson { lambda: S },
    Bernoulli { q: S },
    Exponential { rate: S },
    Custom(String),
}

#[derive(Clone)]
pub struct ReferenceLaw<S: Scalar> {
    kind: LawKind<S>,
    eta: ComplexFn<S>,
    jet: Option<JetFn<S>>,
    strip: S,
    span: Option<S>,
}

impl<S: Scalar> std::fmt::Debug for ReferenceLaw<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReferenceLaw")
            .field("kind", &self.kind)
            .field("strip", &self.strip)
            .field("span", &self.span)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LegendrePoint<S> {
    pub x: S,
    pub h: S,
    pub f: S,
    pub fp: S,
    pub fpp: S,
}

impl<S: Scalar> ReferenceLaw<S> {
    pub fn gaussian(mean: S, var: S) -> Result<Self> {
        if !(var > S::zero()) {
            return Err(Error::NonPositiveVariance);
        }
        let half = lit::<S>(0.5);
        Ok(Self {
            kind: LawKind::Gaussian { mean, var },
            eta: Arc::new(move |z| z * mean + z * z * var * half),
            jet: Some(Arc::new(move |h| [mean * h + var * h * h * half, mean + var * h, var, S::zero(), S::zero()])),
            strip: S::infinity(),
            span: None,
        })
    }

    pub fn poisson(lambda: S) -> Result<Self> {
        if !(lambda > S::zero()) {
            return Err(Error::NonPositiveVariance);
        }
        Ok(Self {
            kind: LawKind::Poisson { lambda },
            eta: Arc::new(move |z: Complex<S>| (z.exp() - S::one()) * lambda),
            jet: Some(Arc::new(move |h: S| {
                let e = lambda * h.exp();
                [lambda * h.exp_m1(), e, e, e, e]
            })),
            strip: S::infinity(),
            span: Some(S::one()),
        })
    }

    /// Single Bernoulli(q) step, the building block of binomial sums.
    pub fn bernoulli(q: S) -> Result<Self> {
        if !(q > S::zero() && q < S::one()) {
            return Err(Error::DomainError(format!("Bernoulli parameter {q} not in (0,1)")));
        }
        Ok(Self {
            kind: LawKind::Bernoulli { q },
            eta: Arc::new(move |z: Complex<S>| ((z.exp() - S::one()) * q + S::one()).ln()),
            jet: Some(Arc::new(move |h: S| {
                let eta = (q * h.exp_m1()).ln_1p();
                let p = q * h.exp() / (S::one() - q + q * h.exp());
                let v = p * (S::one() - p);
                let two = lit::<S>(2.0);
                let six = lit::<S>(6.0);
                [eta, p, v, v * (S::one() - two * p), v * (S::one() - six * p + six * p * p)]
            })),
            strip: S::infinity(),
            span: Some(S::one()),
        })
    }

    /// Exponential law with the given rate; the symmetric strip has half-width `rate`.
    pub fn exponential(rate: S) -> Result<Self> {
        if !(rate > S::zero()) {
            return Err(Error::NonPositiveVariance);
        }
        Ok(Self {
            kind: LawKind::Exponential { rate },
            eta: Arc::new(move |z: Complex<S>| -(Complex::new(S::one(), S::zero()) - z / rate).ln()),
            jet: Some(Arc::new(move |h: S| {
                let u = S::one() / (rate - h);
                let eta = -(S::one() - h / rate).ln();
                [eta, u, u * u, lit::<S>(2.0) * u * u * u, lit::<S>(6.0) * u * u * u * u]
            })),
            strip: rate,
            span: None,
        })
    }

    /// Custom law from a complex evaluator. Derivatives come from Cauchy integrals
    /// unless supplied with [`ReferenceLaw::with_jet`].
    pub fn custom(name: &str, eta: ComplexFn<S>, strip: S, span: Option<S>) -> Result<Self> {
        if !(strip > S::zero()) {
            return Err(Error::Invalid("strip half-width must be positive".into()));
        }
        let z0 = eta(Complex::new(S::zero(), S::zero()));
        if z0.norm() > lit::<S>(1e-12).max(S::eps() * lit(16.0)) {
            return Err(Error::Invalid(format!("eta(0) = {z0} must vanish")));
        }
        let law = Self { kind: LawKind::Custom(name.to_string()), eta, jet: None, strip, span };
        if !(law.jet(S::zero())[2] > S::zero()) {
            return Err(Error::NonPositiveVariance);
        }
        Ok(law)
    }

    pub fn from_expr(name: &str, expr: EtaExpr, strip: S, span: Option<S>) -> Result<Self> {
        let e1 = expr.clone();
        let e2 = expr;
        let law = Self::custom(name, Arc::new(move |z| e1.eval(z)), strip, span)?;
        Ok(law.with_jet(Arc::new(move |h| {
            [e2.derivative(h, 0), e2.derivative(h, 1), e2.derivative(h, 2), e2.derivative(h, 3), e2.derivative(h, 4)]
        })))
    }

    pub fn with_jet(mut self, jet: JetFn<S>) -> Self {
        self.jet = Some(jet);
        self
    }

    pub fn kind(&self) -> &LawKind<S> {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            LawKind::Gaussian { .. } => "gaussian".into(),
            LawKind::Poisson { .. } => "poisson".into(),
            LawKind::Bernoulli { .. } => "bernoulli".into(),
            LawKind::Exponential { .. } => "exponential".into(),
            LawKind::Custom(n) => n.clone(),
        }
    }

    pub fn strip_halfwidth(&self) -> S {
        self.strip
    }

    pub fn is_lattice(&self) -> bool {
        self.span.is_some()
    }

    pub fn lattice_span(&self) -> Option<S> {
        self.span
    }

    pub fn eta(&self, z: Complex<S>) -> Complex<S> {
        (self.eta)(z)
    }

    pub fn eta_fn(&self) -> ComplexFn<S> {
        self.eta.clone()
    }

    /// [η, η', η'', η''', η''''] at a real point of the strip.
    pub fn jet(&self, h: S) -> [S; 5] {
        match &self.jet {
            Some(j) => j(h),
            None => {
                let room = (self.strip - h.abs()) * lit(0.5);
                let r = room.min(lit(0.5));
                let f = self.eta.clone();
                cauchy_derivatives::<S, 5>(&move |z| f(z), h, r)
            }
        }
    }

    pub fn mean(&self) -> S {
        self.jet(S::zero())[1]
    }

    pub fn variance(&self) -> S {
        self.jet(S::zero())[2]
    }

    fn tol(x: S) -> S {
        lit::<S>(1e-12).max(S::eps() * lit(64.0)) * S::one().max(x.abs())
    }

    /// Solve η'(h) = x by bracketed Newton iteration.
    pub fn solve_saddle(&self, x: S) -> Result<LegendrePoint<S>> {
        let bad = || Error::OutOfRange { value: crate::scalar::to64(x), index: None };
        if !x.is_finite() {
            return Err(bad());
        }
        let tol = Self::tol(x);
        let g = |h: S| self.jet(h)[1] - x;
        let g0 = g(S::zero());
        if g0.abs() <= tol {
            let eta2 = self.jet(S::zero())[2];
            return Ok(LegendrePoint { x, h: S::zero(), f: S::zero(), fp: S::zero(), fpp: S::one() / eta2 });
        }
        let dir = if g0 < S::zero() { S::one() } else { -S::one() };
        let (mut lo, mut hi) = (S::zero(), S::zero());
        let mut step = S::one().min(self.strip * lit(0.5));
        let mut prev = S::zero();
        let mut found = false;
        for _ in 0..400 {
            let mut cand = prev + step;
            if cand >= self.strip {
                cand = prev + (self.strip - prev) * lit(0.5);
                if cand <= prev {
                    break;
                }
            }
            let v = g(dir * cand);
            if !v.is_finite() {
                return Err(bad());
            }
            if v * dir >= S::zero() {
                lo = prev;
                hi = cand;
                found = true;
                break;
            }
            prev = cand;
            step = step * lit(2.0);
        }
        if !found {
            return Err(bad());
        }
        // work on u ∈ [lo, hi] with h = dir·u; g(dir·u)·dir increasing in u
        let mut uu = (lo + hi) * lit(0.5);
        for _ in 0..300 {
            let j = self.jet(dir * uu);
            let r = (j[1] - x) * dir;
            let collapsed = hi - lo <= S::eps() * lit::<S>(4.0) * hi.abs().max(S::min_positive_value());
            if r.abs() <= tol || (collapsed && r.abs() <= tol * lit(1e3)) {
                let h = dir * uu;
                let mut f = x * h - j[0];
                if f < S::zero() {
                    f = S::zero();
                }
                return Ok(LegendrePoint { x, h, f, fp: h, fpp: S::one() / j[2] });
            }
            if collapsed {
                break;
            }
            if r > S::zero() {
                hi = uu;
            } else {
                lo = uu;
            }
            let newton = uu - r / j[2];
            uu = if newton > lo && newton < hi && newton.is_finite() { newton } else { (lo + hi) * lit(0.5) };
        }
        Err(Error::NonConvergence(format!("saddle equation at x = {x}")))
    }

    pub fn legendre_grid(&self, xs: &[S]) -> Result<Vec<LegendrePoint<S>>> {
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                self.solve_saddle(x).map_err(|e| match e {
                    Error::OutOfRange { value, .. } => Error::OutOfRange { value, index: Some(i) },
                    other => other,
                })
            })
            .collect()
    }
}

/// On-disk description of a custom law.
#[derive(Clone, Debug, Deserialize)]
pub struct CustomLawSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub eta: String,
    #[serde(default)]
    pub strip: Option<toml::Value>,
    #[serde(default)]
    pub lattice_span: Option<f64>,
}

impl CustomLawSpec {
    pub fn from_toml(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::Invalid(format!("custom law file: {e}")))
    }

    pub fn build(&self) -> Result<ReferenceLaw<f64>> {
        let expr = EtaExpr::parse(&self.eta)?;
        let strip = match &self.strip {
            None => f64::INFINITY,
            Some(toml::Value::String(s)) if s == "inf" => f64::INFINITY,
            Some(toml::Value::Float(f)) => *f,
            Some(toml::Value::Integer(i)) => *i as f64,
            Some(v) => return Err(Error::Invalid(format!("strip: unsupported value {v}"))),
        };
        ReferenceLaw::from_expr(self.name.as_deref().unwrap_or("custom"), expr, strip, self.lattice_span)
    }
}
