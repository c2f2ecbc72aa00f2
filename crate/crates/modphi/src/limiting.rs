//! Limiting functions ψ: Gamma reciprocals, Barnes G ratios, truncated
//! Weierstrass products, exponential monomials and custom evaluators.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};
use crate::special::{barnes_log_g, cauchy_derivatives, ln_gamma, ln_gamma_complex, recip_gamma_complex, EULER_GAMMA};
use num_complex::Complex;
use std::sync::Arc;

pub type PsiFn<S> = Arc<dyn Fn(Complex<S>) -> Result<Complex<S>> + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BarnesKind {
    /// G(3/2) / G(3/2 + x)
    Symplectic,
    /// G(1/2) / G(1/2 + x)
    EvenOrthogonal,
    /// G(1 + x)² / G(1 + 2x)
    UnitaryReal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexSet {
    Primes,
    Integers,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PsiKind<S> {
    Constant,
    ExpMonomial { l: S, v: u32 },
    InvGammaExp,
    GammaRatio { theta: S },
    Barnes(BarnesKind),
    Weierstrass { set: IndexSet, k: usize },
    PoissonBernoulli { p: Vec<S> },
    Custom(String),
}

#[derive(Clone)]
pub struct LimitingFunction<S: Scalar> {
    kind: PsiKind<S>,
    eval: PsiFn<S>,
    real_only: bool,
}

impl<S: Scalar> std::fmt::Debug for LimitingFunction<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LimitingFunction({:?})", self.kind)
    }
}

fn c<S: Scalar>(x: S) -> Complex<S> {
    Complex::new(x, S::zero())
}

impl<S: Scalar> LimitingFunction<S> {
    pub fn constant() -> Self {
        Self { kind: PsiKind::Constant, eval: Arc::new(|_| Ok(c(S::one()))), real_only: false }
    }

    /// exp(L z^v / v!)
    pub fn exp_monomial(l: S, v: u32) -> Self {
        let fact: f64 = (1..=v).map(|i| i as f64).product();
        let k = l / lit(fact);
        Self {
            kind: PsiKind::ExpMonomial { l, v },
            eval: Arc::new(move |z: Complex<S>| Ok((z.powu(v) * k).exp())),
            real_only: false,
        }
    }

    /// 1/Γ(e^z)
    pub fn inv_gamma_exp() -> Self {
        Self {
            kind: PsiKind::InvGammaExp,
            eval: Arc::new(|z: Complex<S>| Ok(recip_gamma_complex(z.exp()))),
            real_only: false,
        }
    }

    /// Γ(θ)/Γ(θ e^w)
    pub fn gamma_ratio(theta: S) -> Result<Self> {
        if !(theta > S::zero()) {
            return Err(Error::DomainError(format!("theta = {theta} must be positive")));
        }
        let lg = ln_gamma(theta);
        Ok(Self {
            kind: PsiKind::GammaRatio { theta },
            eval: Arc::new(move |w: Complex<S>| Ok(recip_gamma_complex(w.exp() * theta) * lg.exp())),
            real_only: false,
        })
    }

    pub fn barnes(kind: BarnesKind) -> Self {
        Self {
            kind: PsiKind::Barnes(kind),
            eval: Arc::new(move |z: Complex<S>| {
                if z.im != S::zero() {
                    return Err(Error::DomainError("Barnes ratios are evaluated on the real axis only".into()));
                }
                barnes_ratio(kind, z.re).map(c)
            }),
            real_only: true,
        }
    }

    /// Π_A(z) = ∏_{a ∈ A, a ≤ K} (1 + z/a) e^{−z/a}
    pub fn weierstrass(set: IndexSet, k: usize) -> Self {
        let idx: Arc<Vec<u64>> = Arc::new(index_set(set, k));
        Self {
            kind: PsiKind::Weierstrass { set, k },
            eval: Arc::new(move |z: Complex<S>| weierstrass_complex(z, &idx)),
            real_only: false,
        }
    }

    /// ∏ (1 + p_k(e^z − 1)) e^{−p_k(e^z − 1)}
    pub fn poisson_bernoulli(p: Vec<S>) -> Self {
        let ps = p.clone();
        Self {
            kind: PsiKind::PoissonBernoulli { p },
            eval: Arc::new(move |z: Complex<S>| {
                let u = z.exp() - S::one();
                let mut acc = c(S::zero());
                for &pk in &ps {
                    acc = acc + (u * pk + S::one()).ln() - u * pk;
                }
                Ok(acc.exp())
            }),
            real_only: false,
        }
    }

    pub fn custom(name: &str, f: PsiFn<S>) -> Self {
        Self { kind: PsiKind::Custom(name.to_string()), eval: f, real_only: false }
    }

    /// Custom evaluator defined only on the real axis.
    pub fn custom_real(name: &str, f: PsiFn<S>) -> Self {
        Self { kind: PsiKind::Custom(name.to_string()), eval: f, real_only: true }
    }

    pub fn kind(&self) -> &PsiKind<S> {
        &self.kind
    }

    pub fn real_only(&self) -> bool {
        self.real_only
    }

    pub fn eval(&self, z: Complex<S>) -> Result<Complex<S>> {
        let v = (self.eval)(z)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::DomainError(format!("psi is not finite at {z}")));
        }
        Ok(v)
    }

    pub fn eval_real(&self, h: S) -> Result<S> {
        self.eval(c(h)).map(|v| v.re)
    }

    /// [ψ, ψ', ψ''] at a real point.
    pub fn jet(&self, h: S) -> Result<[S; 3]> {
        if self.real_only {
            let d = lit::<S>(1e-3);
            let f = |k: i32| self.eval_real(h + d * S::from_i32(k).unwrap());
            let (m2, m1, z0, p1, p2) = (f(-2)?, f(-1)?, f(0)?, f(1)?, f(2)?);
            let twelve = lit::<S>(12.0);
            let eight = lit::<S>(8.0);
            let d1 = (m2 - eight * m1 + eight * p1 - p2) / (twelve * d);
            let d2 = (-m2 + lit::<S>(16.0) * (m1 + p1) - lit::<S>(30.0) * z0 - p2) / (twelve * d * d);
            return Ok([z0, d1, d2]);
        }
        let v = self.eval(c(h))?;
        let g = self.eval.clone();
        let out = cauchy_derivatives::<S, 3>(&move |z| g(z).unwrap_or(c(S::nan())), h, lit(0.25));
        if out.iter().any(|x| !x.is_finite()) {
            return Err(Error::DomainError(format!("psi derivatives not finite at {h}")));
        }
        Ok([v.re, out[1], out[2]])
    }
}

/// Shorthand for [`LimitingFunction::eval`].
pub fn eval_psi<S: Scalar>(psi: &LimitingFunction<S>, z: Complex<S>) -> Result<Complex<S>> {
    psi.eval(z)
}

pub fn barnes_ratio<S: Scalar>(kind: BarnesKind, x: S) -> Result<S> {
    let half = lit::<S>(0.5);
    let three_halves = lit::<S>(1.5);
    let v = match kind {
        BarnesKind::Symplectic => barnes_log_g(three_halves)? - barnes_log_g(three_halves + x)?,
        BarnesKind::EvenOrthogonal => barnes_log_g(half)? - barnes_log_g(half + x)?,
        BarnesKind::UnitaryReal => {
            lit::<S>(2.0) * barnes_log_g(S::one() + x)? - barnes_log_g(S::one() + lit::<S>(2.0) * x)?
        }
    };
    Ok(v.exp())
}

/// Primes up to `k` by the sieve of Eratosthenes.
pub fn primes_up_to(k: usize) -> Vec<u64> {
    if k < 2 {
        return vec![];
    }
    let mut comp = vec![false; k + 1];
    let mut out = Vec::new();
    for i in 2..=k {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= k {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

fn index_set(set: IndexSet, k: usize) -> Vec<u64> {
    match set {
        IndexSet::Primes => primes_up_to(k),
        IndexSet::Integers => (1..=k as u64).collect(),
    }
}

fn weierstrass_complex<S: Scalar>(z: Complex<S>, idx: &[u64]) -> Result<Complex<S>> {
    let mut acc = c(S::zero());
    for &a in idx {
        let u = z / S::from_u64(a).unwrap();
        let w = u + S::one();
        if w.norm() == S::zero() {
            return Ok(c(S::zero()));
        }
        acc = acc + w.ln() - u;
    }
    Ok(acc.exp())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeierstrassValue {
    pub value: f64,
    /// Bound on |log(true product) − log(truncated product)|.
    pub log_tail_bound: f64,
}

/// Truncated product Π_A(x) over a ≤ K with a tail bound x²/K.
pub fn weierstrass_product(x: f64, set: IndexSet, k: usize) -> Result<WeierstrassValue> {
    if k < 1 {
        return Err(Error::Invalid("truncation K must be at least 1".into()));
    }
    let smallest = match set {
        IndexSet::Primes => 2.0,
        IndexSet::Integers => 1.0,
    };
    if !(x > -smallest) {
        return Err(Error::DomainError(format!("x = {x} must exceed −{smallest}")));
    }
    let idx = index_set(set, k);
    let mut log = 0.0;
    for &a in &idx {
        let u = x / a as f64;
        log += u.ln_1p() - u;
    }
    Ok(WeierstrassValue { value: log.exp(), log_tail_bound: x * x / k as f64 })
}

/// Closed form of Π_ℕ*(z) = e^{−γz}/Γ(1+z).
pub fn weierstrass_integers_closed<S: Scalar>(z: Complex<S>) -> Complex<S> {
    (-(z * lit::<S>(EULER_GAMMA)) - ln_gamma_complex(z + S::one())).exp()
}
