//! One-dimensional deviation estimates: lattice and non-lattice tails,
//! the CLT crossover, cumulant-based moderate deviations, the corrected
//! Gaussian CDF and bounds on finite unions of intervals.

use crate::error::{Error, Result};
use crate::law::{LegendrePoint, ReferenceLaw};
use crate::limiting::LimitingFunction;
use crate::scalar::{lit, to64, Scalar};
use crate::special::{mills, normal_cdf, normal_pdf};
use num_complex::Complex;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct ModPhiModel<S: Scalar> {
    pub law: ReferenceLaw<S>,
    pub t_n: S,
    pub psi: LimitingFunction<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    LatticePoint,
    LatticeTail,
    NonlatticeTail,
    Clt,
    Crossover,
    CumulantModerate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeviationEstimate<S> {
    pub regime: Regime,
    pub log_prob: S,
    pub prob: S,
    pub leading: S,
    pub correction: S,
    pub exponent_rate: S,
    pub flags: Vec<String>,
}

impl<S: Scalar> DeviationEstimate<S> {
    fn new(regime: Regime, rate: S, leading: S, correction: S, flags: Vec<String>) -> Result<Self> {
        if !(leading > S::zero()) || !(correction > S::zero()) {
            return Err(Error::DomainError(format!(
                "estimate prefactor must be positive (leading {leading}, correction {correction})"
            )));
        }
        let log_prob = -rate + leading.ln() + correction.ln();
        Ok(Self { regime, log_prob, prob: log_prob.exp(), leading, correction, exponent_rate: rate, flags })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CumulantModel<S> {
    pub alpha_n: S,
    pub beta_n: S,
    pub sigma2: S,
    pub l: S,
    /// Optional fourth-order constant: κ⁴(S_n) ≈ K4 α_n β_n⁴.
    pub k4: Option<S>,
}

impl<S: Scalar> ModPhiModel<S> {
    pub fn new(law: ReferenceLaw<S>, t_n: S, psi: LimitingFunction<S>) -> Result<Self> {
        if !(t_n > S::zero()) {
            return Err(Error::Invalid(format!("t_n = {t_n} must be positive")));
        }
        Ok(Self { law, t_n, psi })
    }

    fn psi_positive(&self, h: S) -> Result<[S; 3]> {
        let j = self.psi.jet(h)?;
        if !(j[0] > S::zero()) {
            return Err(Error::DomainError(format!("psi({h}) = {} is not positive", j[0])));
        }
        Ok(j)
    }
}

fn sqrt_2pi<S: Scalar>() -> S {
    S::TAU().sqrt()
}

fn check_span_one<S: Scalar>(law: &ReferenceLaw<S>) -> Result<()> {
    match law.lattice_span() {
        None => Err(Error::NotLattice),
        Some(s) if (s - S::one()).abs() > lit(1e-12) => Err(Error::Invalid(format!("lattice span {s} is not 1"))),
        _ => Ok(()),
    }
}

type Poly<S> = Vec<Complex<S>>;
type EpsSeries<S> = Vec<Poly<S>>;

fn series_mul<S: Scalar>(a: &EpsSeries<S>, b: &EpsSeries<S>, order: usize) -> EpsSeries<S> {
    let zero = Complex::new(S::zero(), S::zero());
    let mut out: EpsSeries<S> = vec![Vec::new(); order + 1];
    for (i, pa) in a.iter().enumerate() {
        for (j, pb) in b.iter().enumerate() {
            if i + j > order || pa.is_empty() || pb.is_empty() {
                continue;
            }
            let dst = &mut out[i + j];
            if dst.len() < pa.len() + pb.len() - 1 {
                dst.resize(pa.len() + pb.len() - 1, zero);
            }
            for (m, &x) in pa.iter().enumerate() {
                for (k, &y) in pb.iter().enumerate() {
                    dst[m + k] = dst[m + k] + x * y;
                }
            }
        }
    }
    out
}

fn series_add<S: Scalar>(a: &mut EpsSeries<S>, b: &EpsSeries<S>) {
    let zero = Complex::new(S::zero(), S::zero());
    for (i, pb) in b.iter().enumerate() {
        if a[i].len() < pb.len() {
            a[i].resize(pb.len(), zero);
        }
        for (m, &y) in pb.iter().enumerate() {
            a[i][m] = a[i][m] + y;
        }
    }
}

/// Series in ε of Σ_k c_k u^k with u = i ε w / √η''.
fn u_power_series<S: Scalar>(c: &[S], eta2: S, order: usize) -> EpsSeries<S> {
    let zero = Complex::new(S::zero(), S::zero());
    let unit = Complex::new(S::zero(), S::one()) / eta2.sqrt();
    let mut out: EpsSeries<S> = vec![Vec::new(); order + 1];
    let mut uk = Complex::new(S::one(), S::zero());
    for (k, &ck) in c.iter().enumerate().take(order + 1) {
        let mut p = vec![zero; k + 1];
        p[k] = uk * ck;
        out[k] = p;
        uk = uk * unit;
    }
    out
}

/// The ε² coefficient of E[g(w)], g = q(u) ψ(h+u) exp(tΔ), averaged over w ~ N(0,1);
/// ε = t^{−1/2}. `lattice_factor` switches on q(u) = (1−e^{−h})/(1−e^{−h−u}).
pub fn expansion_coefficient<S: Scalar>(eta: &[S; 5], psi: &[S; 3], h: S, lattice_factor: bool) -> S {
    const J: usize = 2;
    let zero = Complex::new(S::zero(), S::zero());
    let e2 = eta[2];
    let psi_series = u_power_series(&[psi[0], psi[1], psi[2] / lit(2.0)], e2, J);
    // tΔ = Σ_{k≥3} η^{(k)}/k! (iw)^k η''^{−k/2} ε^{k−2}
    let mut delta: EpsSeries<S> = vec![Vec::new(); J + 1];
    let i = Complex::new(S::zero(), S::one());
    for k in 3..=4usize {
        let fact: f64 = (1..=k).map(|x| x as f64).product();
        let mut p = vec![zero; k + 1];
        p[k] = i.powu(k as u32) * (eta[k] / lit::<S>(fact) / e2.powf(lit(k as f64 / 2.0)));
        delta[k - 2] = p;
    }
    // exp(tΔ) = 1 + Δ + Δ²/2 to order ε²
    let mut ex: EpsSeries<S> = vec![Vec::new(); J + 1];
    ex[0] = vec![Complex::new(S::one(), S::zero())];
    series_add(&mut ex, &delta);
    let mut sq = series_mul(&delta, &delta, J);
    for p in sq.iter_mut() {
        for c in p.iter_mut() {
            *c = *c / lit::<S>(2.0);
        }
    }
    series_add(&mut ex, &sq);
    let mut g = series_mul(&psi_series, &ex, J);
    if lattice_factor {
        // D(u) = 1 − a e^{−u} = (1−a) + a(u − u²/2 + …); q = (1−a)/D
        let a = (-h).exp();
        let d = [S::one() - a, a, -a / lit(2.0)];
        let mut q = [S::zero(); J + 1];
        q[0] = S::one();
        for n in 1..=J {
            let mut s = S::zero();
            for k in 1..=n {
                s = s + d[k] * q[n - k];
            }
            q[n] = -s / d[0];
        }
        let qs = u_power_series(&q, e2, J);
        g = series_mul(&g, &qs, J);
    }
    let mut acc = S::zero();
    for (m, c) in g[J].iter().enumerate() {
        if m % 2 == 0 {
            let dfact: f64 = (1..m).step_by(2).map(|x| x as f64).product();
            acc = acc + c.re * lit(dfact);
        }
    }
    acc
}

/// Closed form of the first point-mass correction a₁.
pub fn a1_closed_form<S: Scalar>(eta: &[S; 5], psi: &[S; 3]) -> S {
    let e2 = eta[2];
    -psi[2] / (lit::<S>(2.0) * e2) + (psi[0] * eta[4] + lit::<S>(4.0) * psi[1] * eta[3]) / (lit::<S>(8.0) * e2 * e2)
        - lit::<S>(15.0) * psi[0] * eta[3] * eta[3] / (lit::<S>(72.0) * e2 * e2 * e2)
}

/// Estimate of P[X_n = t_n x] for a span-one lattice reference law.
pub fn lattice_point_mass<S: Scalar>(model: &ModPhiModel<S>, x: S, order: u8) -> Result<DeviationEstimate<S>> {
    check_span_one(&model.law)?;
    let tx = model.t_n * x;
    if (tx - tx.round()).abs() > lit::<S>(1e-9) * S::one().max(tx.abs()) {
        return Err(Error::Invalid(format!("t_n·x = {tx} is not an integer")));
    }
    let lp = model.law.solve_saddle(x)?;
    let eta = model.law.jet(lp.h);
    let psi = model.psi_positive(lp.h)?;
    let leading = psi[0] / (sqrt_2pi::<S>() * (model.t_n * eta[2]).sqrt());
    let correction = match order {
        0 => S::one(),
        1 => S::one() + a1_closed_form(&eta, &psi) / (model.t_n * psi[0]),
        o => return Err(Error::UnsupportedOrder(o as usize)),
    };
    DeviationEstimate::new(Regime::LatticePoint, model.t_n * lp.f, leading, correction, vec![])
}

/// Estimate of P[X_n ≥ t_n x], lattice case, x above the mean.
pub fn lattice_tail<S: Scalar>(model: &ModPhiModel<S>, x: S) -> Result<DeviationEstimate<S>> {
    lattice_tail_order(model, x, 0)
}

/// As [`lattice_tail`], optionally with the b₁/t_n term from the series recipe.
pub fn lattice_tail_order<S: Scalar>(model: &ModPhiModel<S>, x: S, order: u8) -> Result<DeviationEstimate<S>> {
    check_span_one(&model.law)?;
    let lp = model.law.solve_saddle(x)?;
    if !(lp.h > S::zero()) {
        return Err(Error::OutOfRange { value: to64(x), index: None });
    }
    let eta = model.law.jet(lp.h);
    let psi = model.psi_positive(lp.h)?;
    let leading = psi[0] / (sqrt_2pi::<S>() * (model.t_n * eta[2]).sqrt());
    let mut correction = S::one() / (-(-lp.h).exp_m1());
    if order == 1 {
        let b1 = expansion_coefficient(&eta, &psi, lp.h, true);
        correction = correction * (S::one() + b1 / (model.t_n * psi[0]));
    } else if order > 1 {
        return Err(Error::UnsupportedOrder(order as usize));
    }
    let mut flags = vec![];
    if lp.h * model.t_n.sqrt() < S::one() {
        flags.push("near_mean".to_string());
    }
    DeviationEstimate::new(Regime::LatticeTail, model.t_n * lp.f, leading, correction, flags)
}

/// Estimate of P[X_n ≥ t_n x] (x above the mean) or P[X_n ≤ t_n x] (below), non-lattice case.
pub fn nonlattice_tail<S: Scalar>(model: &ModPhiModel<S>, x: S) -> Result<DeviationEstimate<S>> {
    if model.law.is_lattice() {
        return Err(Error::IsLattice);
    }
    let lp = model.law.solve_saddle(x)?;
    if lp.h == S::zero() {
        return Err(Error::OutOfRange { value: to64(x), index: None });
    }
    nonlattice_from_point(model, &lp)
}

fn nonlattice_from_point<S: Scalar>(model: &ModPhiModel<S>, lp: &LegendrePoint<S>) -> Result<DeviationEstimate<S>> {
    let eta = model.law.jet(lp.h);
    let psi = model.psi_positive(lp.h)?;
    let leading = psi[0] / (lp.h.abs() * sqrt_2pi::<S>() * (model.t_n * eta[2]).sqrt());
    let mut flags = vec![];
    if lp.h < S::zero() {
        flags.push("lower_tail".to_string());
    }
    DeviationEstimate::new(Regime::NonlatticeTail, model.t_n * lp.f, leading, S::one(), flags)
}

/// Uniform estimate of P[X_n ≥ t_n η'(0) + √(t_n η''(0)) y].
pub fn crossover_tail<S: Scalar>(model: &ModPhiModel<S>, y: S) -> Result<DeviationEstimate<S>> {
    if !(y >= S::zero()) {
        return Err(Error::OutOfRange { value: to64(y), index: None });
    }
    let t = model.t_n;
    let regime = if y <= t.powf(lit(1.0 / 6.0)) { Regime::Clt } else { Regime::Crossover };
    if y == S::zero() {
        return DeviationEstimate::new(regime, S::zero(), lit(0.5), S::one(), vec![]);
    }
    let j0 = model.law.jet(S::zero());
    let x = j0[1] + y * (j0[2] / t).sqrt();
    let lp = model.law.solve_saddle(x)?;
    let eta2 = model.law.jet(lp.h)[2];
    let beta = lp.h * (t * eta2).sqrt();
    let leading = lit::<S>(mills(to64(beta)));
    DeviationEstimate::new(regime, t * lp.f, leading, S::one(), vec![])
}

fn moderate_parts<S: Scalar>(model: &CumulantModel<S>, t: S) -> Result<(S, S, S, Vec<String>)> {
    if !(model.sigma2 > S::zero()) {
        return Err(Error::NonPositiveVariance);
    }
    if !(model.alpha_n > S::zero()) || !(t > S::zero()) {
        return Err(Error::OutOfRange { value: to64(t), index: None });
    }
    let a = model.alpha_n;
    let s = model.sigma2.sqrt();
    let u = t / a.sqrt();
    let cubic = model.l * t * t * t / (lit::<S>(6.0) * s * s * s * a * a);
    let quartic = match model.k4 {
        Some(k4) => {
            let lam4 = (k4 / (s * s * s * s) - lit::<S>(3.0) * model.l * model.l / model.sigma2.powi(3)) / lit(24.0);
            lam4 * t.powi(4) / (a * a * a)
        }
        None => S::zero(),
    };
    let mut flags = vec![];
    if t < a.sqrt() {
        flags.push("below_window".to_string());
    }
    if t > a.powf(lit(0.75)) {
        flags.push("beyond_window".to_string());
    }
    Ok((u, cubic, quartic, flags))
}

/// Estimate of P[S_n/(β_n σ) ≥ T].
pub fn cumulant_moderate<S: Scalar>(model: &CumulantModel<S>, t: S) -> Result<DeviationEstimate<S>> {
    let (u, cubic, quartic, flags) = moderate_parts(model, t)?;
    let leading = S::one() / (u * sqrt_2pi::<S>());
    DeviationEstimate::new(Regime::CumulantModerate, u * u / lit(2.0), leading, (cubic + quartic).exp(), flags)
}

/// Lower tail P[S_n/(β_n σ) ≤ −T], obtained by L ↦ −L.
pub fn cumulant_moderate_lower<S: Scalar>(model: &CumulantModel<S>, t: S) -> Result<DeviationEstimate<S>> {
    let m = CumulantModel { l: -model.l, ..*model };
    cumulant_moderate(&m, t)
}

/// Two-sided form P[|S_n/(β_n σ)| ≥ T] with the cosh factor.
pub fn cumulant_moderate_two_sided<S: Scalar>(model: &CumulantModel<S>, t: S) -> Result<DeviationEstimate<S>> {
    let (u, cubic, quartic, flags) = moderate_parts(model, t)?;
    let leading = lit::<S>(2.0) / (u * sqrt_2pi::<S>());
    DeviationEstimate::new(Regime::CumulantModerate, u * u / lit(2.0), leading, cubic.cosh() * quartic.exp(), flags)
}

/// Variant with the exact Gaussian tail P[N ≥ u] in place of its leading asymptotic.
pub fn cumulant_moderate_uniform<S: Scalar>(model: &CumulantModel<S>, t: S) -> Result<DeviationEstimate<S>> {
    let (u, cubic, quartic, mut flags) = moderate_parts(model, t)?;
    flags.push("uniform_gaussian_factor".to_string());
    let leading = lit::<S>(mills(to64(u)));
    DeviationEstimate::new(Regime::CumulantModerate, u * u / lit(2.0), leading, (cubic + quartic).exp(), flags)
}

/// Coefficients λ^(2..v) of the Cramér–Petrov series for standardized cumulants
/// (kappas = [κ², κ³, κ⁴], standardized by κ² internally).
pub fn petrov_coefficients<S: Scalar>(kappas: &[S], v: usize) -> Result<Vec<S>> {
    if v > 4 || v < 2 {
        return Err(Error::UnsupportedOrder(v));
    }
    if kappas.len() < v - 1 {
        return Err(Error::Invalid(format!("need κ^(2..{v})")));
    }
    let k2 = kappas[0];
    if !(k2 > S::zero()) {
        return Err(Error::NonPositiveVariance);
    }
    let std = |r: usize| kappas[r - 2] / k2.powf(lit(r as f64 / 2.0));
    let mut out = vec![lit::<S>(-0.5)];
    if v >= 3 {
        out.push(std(3) / lit(6.0));
    }
    if v >= 4 {
        out.push((std(4) - lit::<S>(3.0) * std(3) * std(3)) / lit(24.0));
    }
    debug_assert!({
        let rec = legendre_series(&[S::one(), std(3), if v >= 4 { std(4) } else { S::zero() }], v);
        out.iter().zip(&rec).all(|(a, b)| (*a - *b).abs() <= lit::<S>(1e-9) * S::one().max(a.abs()))
    });
    Ok(out)
}

/// λ^(r) = −[x^r] F(x) with F the Legendre transform of K(h) = Σ κ_r h^r / r!,
/// computed by power-series reversion of K'(h) = x.
pub fn legendre_series<S: Scalar>(kappas: &[S], v: usize) -> Vec<S> {
    // K'(h) = Σ_{r≥2} κ_r h^{r−1}/(r−1)!, kappas = [κ2, κ3, ...]
    let kp: Vec<S> = kappas
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let f: f64 = (1..=i + 1).map(|x| x as f64).product();
            k / lit(f)
        })
        .collect();
    let n = v;
    let mut c = vec![S::zero(); n + 1];
    for m in 1..n {
        let mut comp = vec![S::zero(); n + 1];
        let mut pow = vec![S::zero(); n + 1];
        pow[0] = S::one();
        for &a in &kp {
            let mut next = vec![S::zero(); n + 1];
            for (i, &p) in pow.iter().enumerate() {
                for (l, &cl) in c.iter().enumerate() {
                    if i + l <= n {
                        next[i + l] = next[i + l] + p * cl;
                    }
                }
            }
            pow = next;
            for i in 0..=n {
                comp[i] = comp[i] + a * pow[i];
            }
        }
        let target = if m == 1 { S::one() } else { S::zero() };
        c[m] = (target - comp[m]) / kp[0];
    }
    // F(x) = ∫ h, so [x^r]F = c_{r−1}/r
    (2..=v).map(|r| -c[r - 1] / S::from_usize(r).unwrap()).collect()
}

/// Corrected Gaussian CDF G_n(x) (unclipped).
pub fn berry_esseen_cdf<S: Scalar>(model: &ModPhiModel<S>, x: S) -> Result<S> {
    let j = model.law.jet(S::zero());
    let dpsi = model.psi.jet(S::zero())?[1];
    let xf = to64(x);
    let g = normal_pdf(xf);
    let t = model.t_n;
    let a = to64(dpsi / (t * j[2]).sqrt());
    let b = to64(j[3] / (lit::<S>(6.0) * (t * j[2].powi(3)).sqrt()));
    Ok(lit(normal_cdf(xf) - a * g - b * (xf * xf - 1.0) * g))
}

pub fn berry_esseen_cdf_clipped<S: Scalar>(model: &ModPhiModel<S>, x: S) -> Result<S> {
    Ok(berry_esseen_cdf(model, x)?.max(S::zero()).min(S::one()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BorelBound<S> {
    /// Σ_{a∈B_min} ψ(h(a))/(|h(a)|√η''(h(a))) (lattice: 1−e^{−|h|} in place of |h|); +∞ if η'(0) ∈ B.
    pub constant: S,
    /// constant · e^{−t_n F(B)} / √(2π t_n)
    pub prob_bound: S,
    pub log_prob_bound: S,
    pub rate: S,
    pub minimizers: Vec<S>,
    pub lower_tight: bool,
}

/// Upper bound for P[X_n ∈ t_n B] with B a finite union of closed intervals.
pub fn borel_bound<S: Scalar>(model: &ModPhiModel<S>, intervals: &[(S, S)]) -> Result<BorelBound<S>> {
    let m = model.law.mean();
    if intervals.iter().any(|&(a, b)| !(a <= b)) {
        return Err(Error::Invalid("intervals must satisfy lo ≤ hi".into()));
    }
    if intervals.iter().any(|&(a, b)| a <= m && m <= b) {
        return Ok(BorelBound {
            constant: S::infinity(),
            prob_bound: S::one(),
            log_prob_bound: S::zero(),
            rate: S::zero(),
            minimizers: vec![m],
            lower_tight: true,
        });
    }
    let above = intervals
        .iter()
        .filter(|iv| iv.0 > m)
        .map(|iv| iv.0)
        .fold(None, |acc: Option<S>, v| Some(acc.map_or(v, |a| a.min(v))));
    let below = intervals
        .iter()
        .filter(|iv| iv.1 < m)
        .map(|iv| iv.1)
        .fold(None, |acc: Option<S>, v| Some(acc.map_or(v, |a| a.max(v))));
    let mut pts = vec![];
    for b in [above, below].into_iter().flatten() {
        if !b.is_finite() {
            continue;
        }
        match model.law.solve_saddle(b) {
            Ok(lp) => pts.push(lp),
            Err(Error::OutOfRange { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if pts.is_empty() {
        return Err(Error::NotAdmissible);
    }
    let fmin = pts.iter().map(|p| p.f).fold(S::infinity(), |a, b| a.min(b));
    let tol = lit::<S>(1e-12) * S::one().max(fmin);
    let mins: Vec<LegendrePoint<S>> = pts.into_iter().filter(|p| p.f - fmin <= tol).collect();
    let mut constant = S::zero();
    for p in &mins {
        let psi = model.psi_positive(p.h)?[0];
        let e2 = model.law.jet(p.h)[2];
        let denom = if model.law.is_lattice() { -(-p.h.abs()).exp_m1() } else { p.h.abs() };
        constant = constant + psi / (denom * e2.sqrt());
    }
    let t = model.t_n;
    let log_prob_bound = constant.ln() - t * fmin - (S::TAU() * t).sqrt().ln();
    let lower_tight = mins.iter().any(|p| {
        let d = lit::<S>(1e-3) * p.x.abs().max(lit(1e-300));
        let (lo, hi) = if p.x > m { (p.x, p.x + d) } else { (p.x - d, p.x) };
        intervals.iter().any(|&(a, b)| a <= lo && hi <= b)
    });
    Ok(BorelBound {
        constant,
        prob_bound: constant * (-t * fmin).exp() / (S::TAU() * t).sqrt(),
        log_prob_bound,
        rate: t * fmin,
        minimizers: mins.iter().map(|p| p.x).collect(),
        lower_tight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipe_matches_closed_form_a1() {
        let eta = [0.0f64, 1.3, 0.7, -0.4, 2.1];
        let psi = [1.2f64, -0.3, 0.8];
        let a = expansion_coefficient(&eta, &psi, 0.5, false);
        let b = a1_closed_form(&eta, &psi);
        assert!((a - b).abs() < 1e-13, "{a} {b}");
    }

    #[test]
    fn legendre_series_matches_petrov() {
        let l = legendre_series(&[1.0f64, 1.0, 27.0], 4);
        assert!((l[0] + 0.5).abs() < 1e-14);
        assert!((l[1] - 1.0 / 6.0).abs() < 1e-14);
        assert!((l[2] - 1.0).abs() < 1e-14);
    }
}
