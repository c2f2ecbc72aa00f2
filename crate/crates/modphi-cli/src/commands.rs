//! Subcommand implementations. Each returns the bytes to emit; nothing here
//! touches global state.

use crate::cli::*;
use crate::report::{to_csv, to_json, ComparisonRow, Format, OracleKind, RunConfig};
use crate::suite;
use anyhow::{Context, Result};
use clap::ValueEnum;
use modphi::characters::{
    central_measure, char_cumulant_bound, char_cumulants_exact, general_mu_limits, sigma2_l_char, ThomaParameter,
};
use modphi::combi::*;
use modphi::deviation::*;
use modphi::er::{self, PatternGraph};
use modphi::law::CustomLawSpec;
use modphi::limiting::{BarnesKind, IndexSet};
use modphi::models::*;
use modphi::multidim::{
    conic_probability, dwalk_kurtosis_psi, sector_integral, walk2d_conditional_mc, walk2d_theoretical_bins,
    ConicSector, MultiModGaussianModel, VecFn,
};
use modphi::special::ln_gamma;
use modphi::{Cumulants, Estimate, Law, Model, Psi};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Deserialize;
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

/// Bad input: reported with exit status 2.
#[derive(Debug)]
pub struct Invalid(pub String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Invalid(msg.into()))
}

/// Exit status for an error: 1 for numerical failures, 2 for everything the caller can fix.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    use modphi::Error as E;
    match e.downcast_ref::<modphi::Error>() {
        Some(
            E::NonConvergence(_)
            | E::DomainError(_)
            | E::ZeroAcceptance
            | E::ZeroPartitionFunction(_)
            | E::NotPositive(_),
        ) => 1,
        Some(_) => 2,
        None if e.downcast_ref::<Invalid>().is_some() => 2,
        None => 1,
    }
}

pub struct Emitted {
    pub body: String,
    /// Nonzero when a suite criterion failed.
    pub status: i32,
}

fn emit(body: String) -> Result<Emitted> {
    Ok(Emitted { body, status: 0 })
}

pub fn config(cli: &Cli, args: &[String]) -> RunConfig {
    let (subcommand, seed, trials) = match &cli.command {
        Command::Legendre(_) => ("legendre", None, None),
        Command::Psi(_) => ("psi", None, None),
        Command::Deviate(_) => ("deviate", None, None),
        Command::Walk2d(a) => ("walk2d", Some(a.seed), Some(a.trials)),
        Command::Conic(_) => ("conic", None, None),
        Command::Combi(_) => ("combi", None, None),
        Command::Model(ModelCmd::Zeros { seed, draws, .. }) => ("model", *seed, seed.map(|_| *draws)),
        Command::Model(_) => ("model", None, None),
        Command::Er(ErCmd::Count { seed, .. }) => ("er", Some(*seed), Some(1)),
        Command::Er(ErCmd::Cumulants { seed, trials, .. } | ErCmd::Deviate { seed, trials, .. }) => {
            ("er", *seed, *trials)
        }
        Command::Er(_) => ("er", None, None),
        Command::Thoma(_) => ("thoma", None, None),
        Command::Suite(_) => ("suite", None, None),
    };
    let output = if matches!(cli.command, Command::Walk2d(_)) { Format::Csv } else { Format::Json };
    let path = match &cli.command {
        Command::Walk2d(WalkArgs { csv: Some(p), .. }) => Some(p.display().to_string()),
        Command::Suite(SuiteArgs { json: Some(p), .. }) => Some(p.display().to_string()),
        _ => cli.out.as_ref().map(|p| p.display().to_string()),
    };
    RunConfig { subcommand: subcommand.into(), args: args.to_vec(), seed, trials, budget: cli.budget, output, path }
}

pub fn run(cli: &Cli, cfg: &RunConfig) -> Result<Emitted> {
    match &cli.command {
        Command::Legendre(a) => legendre(a, cfg),
        Command::Psi(a) => psi(a, cfg),
        Command::Deviate(a) => deviate(a, cfg),
        Command::Walk2d(a) => walk2d(a, cli.budget, cfg),
        Command::Conic(a) => conic(a, cfg),
        Command::Combi(c) => combi(c, cfg),
        Command::Model(c) => model(c, cli.budget, cfg),
        Command::Er(c) => er_cmd(c, cli.budget, cfg),
        Command::Thoma(c) => thoma(c, cfg),
        Command::Suite(a) => run_suite(a, cfg),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || invalid(format!("'{s}' is not a rational number"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = s.strip_prefix('-').map_or((false, s), |t| (true, t));
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let den = BigInt::from(10).pow(frac.len() as u32);
    let q = BigRational::new(num, den);
    Ok(if neg { -q } else { q })
}

fn rat_json(q: &BigRational) -> Value {
    json!({ "exact": q.to_string(), "value": q.to_f64() })
}

fn estimate_json(e: &Estimate) -> Value {
    json!({
        "regime": e.regime,
        "log_prob": e.log_prob,
        "prob": e.prob,
        "rate": e.exponent_rate,
        "leading": e.leading,
        "correction": e.correction,
        "flags": e.flags,
    })
}

fn law_from(
    name: LawName,
    (mean, var, lambda, q, rate): (f64, f64, f64, f64, f64),
    custom: Option<CustomLawSpec>,
) -> Result<Law> {
    Ok(match name {
        LawName::Gaussian => Law::gaussian(mean, var)?,
        LawName::Poisson => Law::poisson(lambda)?,
        LawName::Bernoulli => Law::bernoulli(q)?,
        LawName::Exponential => Law::exponential(rate)?,
        LawName::Custom => custom.ok_or_else(|| invalid("custom law needs an eta expression"))?.build()?,
    })
}

fn legendre(a: &LegendreArgs, cfg: &RunConfig) -> Result<Emitted> {
    let custom = match &a.spec {
        Some(p) if a.law == LawName::Custom => Some(CustomLawSpec::from_toml(&read(p)?)?),
        _ => None,
    };
    let law = law_from(a.law, (a.mean, a.var, a.lambda, a.q, a.rate), custom)?;
    let pts = law.legendre_grid(&a.x)?;
    let rows: Vec<Value> =
        pts.iter().map(|p| json!({ "x": p.x, "h": p.h, "F": p.f, "F_prime": p.fp, "F_second": p.fpp })).collect();
    emit(to_json(cfg, json!({ "law": law.name(), "lattice": law.is_lattice(), "rows": rows }))?)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiSpec {
    pub kind: String,
    pub l: Option<f64>,
    pub v: Option<u32>,
    pub theta: Option<f64>,
    pub k: Option<usize>,
    pub p: Option<Vec<f64>>,
}

fn need<T: Copy>(v: Option<T>, what: &str, kind: &str) -> Result<T> {
    v.ok_or_else(|| invalid(format!("psi kind '{kind}' needs {what}")))
}

pub fn build_psi(s: &PsiSpec) -> Result<Psi> {
    let kind = s.kind.as_str();
    Ok(match kind {
        "constant" => Psi::constant(),
        "exp-monomial" => Psi::exp_monomial(need(s.l, "l", kind)?, need(s.v, "v", kind)?),
        "inv-gamma-exp" => Psi::inv_gamma_exp(),
        "gamma-ratio" => Psi::gamma_ratio(need(s.theta, "theta", kind)?)?,
        "barnes-symplectic" => Psi::barnes(BarnesKind::Symplectic),
        "barnes-even-orthogonal" => Psi::barnes(BarnesKind::EvenOrthogonal),
        "barnes-unitary-real" => Psi::barnes(BarnesKind::UnitaryReal),
        "weierstrass-primes" => Psi::weierstrass(IndexSet::Primes, need(s.k, "k", kind)?),
        "weierstrass-integers" => Psi::weierstrass(IndexSet::Integers, need(s.k, "k", kind)?),
        "poisson-bernoulli" => {
            let p =
                s.p.clone().filter(|p| !p.is_empty()).ok_or_else(|| invalid("psi kind 'poisson-bernoulli' needs p"))?;
            Psi::poisson_bernoulli(p)
        }
        other => return Err(invalid(format!("unknown psi kind '{other}'"))),
    })
}

fn psi(a: &PsiArgs, cfg: &RunConfig) -> Result<Emitted> {
    let kind = a.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let spec = PsiSpec { kind, l: a.l, v: a.v, theta: a.theta, k: a.k, p: Some(a.p.clone()) };
    let f = build_psi(&spec)?;
    let z = Complex64::new(a.z[0], a.z.get(1).copied().unwrap_or(0.0));
    let v = f.eval(z)?;
    emit(to_json(cfg, json!({ "kind": spec.kind, "z": [z.re, z.im], "value": [v.re, v.im] }))?)
}

/// Model file for `deviate`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub law: Option<String>,
    pub mean: Option<f64>,
    pub var: Option<f64>,
    pub lambda: Option<f64>,
    pub q: Option<f64>,
    pub rate: Option<f64>,
    pub name: Option<String>,
    pub eta: Option<String>,
    pub strip: Option<toml::Value>,
    pub lattice_span: Option<f64>,
    pub t_n: Option<f64>,
    pub psi: Option<PsiSpec>,
    pub cumulant: Option<CumulantSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CumulantSpec {
    pub alpha_n: f64,
    pub beta_n: f64,
    pub sigma2: f64,
    pub l: f64,
    pub k4: Option<f64>,
}

impl ModelFile {
    pub fn parse(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| invalid(format!("model file: {e}")))
    }

    pub fn law(&self) -> Result<Law> {
        let name = self.law.as_deref().ok_or_else(|| invalid("model file needs `law`"))?;
        let kind = match name {
            "gaussian" => LawName::Gaussian,
            "poisson" => LawName::Poisson,
            "bernoulli" => LawName::Bernoulli,
            "exponential" => LawName::Exponential,
            "custom" => LawName::Custom,
            other => return Err(invalid(format!("unknown law '{other}'"))),
        };
        let custom = self.eta.as_ref().map(|eta| CustomLawSpec {
            name: self.name.clone(),
            eta: eta.clone(),
            strip: self.strip.clone(),
            lattice_span: self.lattice_span,
        });
        let params = (
            self.mean.unwrap_or(0.0),
            self.var.unwrap_or(1.0),
            self.lambda.unwrap_or(1.0),
            self.q.unwrap_or(0.5),
            self.rate.unwrap_or(1.0),
        );
        law_from(kind, params, custom)
    }

    pub fn model(&self) -> Result<Model> {
        let t = self.t_n.ok_or_else(|| invalid("model file needs `t_n`"))?;
        let psi = match &self.psi {
            Some(s) => build_psi(s)?,
            None => Psi::constant(),
        };
        Ok(Model::new(self.law()?, t, psi)?)
    }
}

fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s.split_once(',').ok_or_else(|| invalid(format!("interval '{s}' should read a,b")))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|_| invalid(format!("bad interval endpoint '{t}'")));
    Ok((p(a)?, p(b)?))
}

fn deviate(a: &DeviateArgs, cfg: &RunConfig) -> Result<Emitted> {
    let file = ModelFile::parse(&read(&a.model)?)?;
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| invalid(format!("--kind {:?} needs --{flag}", a.kind)));
    let out = match a.kind {
        DeviateKind::Cumulant => {
            let c = file.cumulant.as_ref().ok_or_else(|| invalid("model file needs a [cumulant] table"))?;
            let m = Cumulants { alpha_n: c.alpha_n, beta_n: c.beta_n, sigma2: c.sigma2, l: c.l, k4: c.k4 };
            estimate_json(&cumulant_moderate(&m, need(a.t, "T")?)?)
        }
        DeviateKind::Point => estimate_json(&lattice_point_mass(&file.model()?, need(a.x, "x")?, a.order)?),
        DeviateKind::Tail => {
            let m = file.model()?;
            let x = need(a.x, "x")?;
            estimate_json(&if m.law.is_lattice() { lattice_tail(&m, x)? } else { nonlattice_tail(&m, x)? })
        }
        DeviateKind::Crossover => estimate_json(&crossover_tail(&file.model()?, need(a.y, "y")?)?),
        DeviateKind::Borel => {
            if a.interval.is_empty() {
                return Err(invalid("--kind borel needs at least one --interval a,b"));
            }
            let iv: Vec<(f64, f64)> = a.interval.iter().map(|s| parse_interval(s)).collect::<Result<_>>()?;
            let b = borel_bound(&file.model()?, &iv)?;
            json!({
                "constant": b.constant,
                "prob_bound": b.prob_bound,
                "log_prob_bound": b.log_prob_bound,
                "rate": b.rate,
                "minimizers": b.minimizers,
                "lower_tight": b.lower_tight,
            })
        }
    };
    emit(to_json(cfg, out)?)
}

fn walk2d(a: &WalkArgs, budget: f64, cfg: &RunConfig) -> Result<Emitted> {
    let h = walk2d_conditional_mc(a.n, a.r, a.trials, a.seed, a.bins, budget)?;
    let theory = walk2d_theoretical_bins(a.r, a.bins);
    let width = 2.0 * PI / a.bins as f64;
    let rows: Vec<Vec<f64>> = h
        .frequencies()
        .iter()
        .zip(&theory)
        .enumerate()
        .map(|(i, (e, t))| vec![(i as f64 + 0.5) * width, *e, *t])
        .collect();
    let body = to_csv(cfg, &["theta_bin", "empirical", "theoretical"], &rows)?;
    match &a.csv {
        Some(p) => {
            std::fs::write(p, &body).with_context(|| format!("writing {}", p.display()))?;
            emit(String::new())
        }
        None => emit(body),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConicFile {
    #[serde(default = "two")]
    d: usize,
    t_n: f64,
    #[serde(default)]
    psi: Option<String>,
    #[serde(default)]
    a: Option<Vec<Vec<f64>>>,
}

fn two() -> usize {
    2
}

fn conic(a: &ConicArgs, cfg: &RunConfig) -> Result<Emitted> {
    let f: ConicFile = toml::from_str(&read(&a.model)?).map_err(|e| invalid(format!("model file: {e}")))?;
    if f.d != 2 {
        return Err(invalid("the conic subcommand handles planar sectors, d must be 2"));
    }
    let psi: VecFn = match f.psi.as_deref().unwrap_or("constant") {
        "constant" => Arc::new(|_: &[f64]| 1.0),
        "dwalk-kurtosis" => Arc::new(|z: &[f64]| dwalk_kurtosis_psi(2, z).unwrap_or(f64::NAN)),
        other => return Err(invalid(format!("unknown conic psi '{other}'"))),
    };
    let m = match f.a {
        Some(a_mat) => MultiModGaussianModel::new(a_mat, f.t_n, psi)?,
        None => MultiModGaussianModel::isotropic(2, f.t_n, psi)?,
    };
    let sector = ConicSector::Planar { theta1: a.theta1, theta2: a.theta2, b: a.b };
    let (integral, converged) = sector_integral(&m, &sector)?;
    let e = conic_probability(&m, &sector)?;
    emit(to_json(cfg, json!({ "estimate": estimate_json(&e), "sector_integral": integral, "converged": converged }))?)
}

pub fn parse_family(s: &str) -> Result<DependencyFamily> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || invalid(format!("family '{s}' should read window:N:W:P or clique:G1+G2+...:P"));
    let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
    Ok(match parts.as_slice() {
        ["window", n, w, p] => DependencyFamily::sliding_window(num(n)?, num(w)?, parse_rational(p)?)?,
        ["clique", g, p] => {
            let groups: Vec<usize> = g.split('+').map(num).collect::<Result<_>>()?;
            DependencyFamily::clique_structured(&groups, parse_rational(p)?)?
        }
        _ => return Err(bad()),
    })
}

fn rational_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(parse_rational).collect()
}

fn graph(a: &EdgeArgs) -> Result<MultiGraph> {
    Ok(MultiGraph::parse_edges(&a.edges, a.vertices)?)
}

fn combi(c: &CombiCmd, cfg: &RunConfig) -> Result<Emitted> {
    let out = match c {
        CombiCmd::Mobius { moments: Some(m), .. } => {
            let m = rational_list(m)?;
            let k = cumulants_from_power_moments(&m);
            json!({ "moments": m.iter().map(rat_json).collect::<Vec<_>>(), "cumulants": k.iter().map(rat_json).collect::<Vec<_>>() })
        }
        CombiCmd::Mobius { cumulants, .. } => {
            let k = rational_list(cumulants.as_deref().unwrap_or_default())?;
            let m = power_moments_from_cumulants(&k);
            json!({ "cumulants": k.iter().map(rat_json).collect::<Vec<_>>(), "moments": m.iter().map(rat_json).collect::<Vec<_>>() })
        }
        CombiCmd::Cumulant { family, r, .. } => {
            let f = parse_family(family)?;
            let k = f.sum_cumulants(*r);
            json!({ "family": format!("{f:?}"), "cumulants": k.iter().map(rat_json).collect::<Vec<_>>() })
        }
        CombiCmd::Fh(a) => {
            let g = graph(a)?;
            let f = f_functional(&g)?;
            let t = tutte_point(&g, 1, 0)?;
            json!({ "F_H": f.to_string(), "tutte_1_0": t.to_string(), "agree": f == t })
        }
        CombiCmd::St(a) => {
            let g = graph(a)?;
            let st = spanning_tree_count(&g);
            let t = tutte_point(&g, 1, 1)?;
            json!({ "ST_H": st.to_string(), "tutte_1_1": t.to_string(), "agree": st == t })
        }
        CombiCmd::Identity(a) => {
            let (l, r) = bicolored_identity_check(&graph(a)?)?;
            json!({ "lhs": l.to_string(), "rhs": r.to_string(), "holds": l == r })
        }
        CombiCmd::Bound { family, r, .. } => {
            let f = parse_family(family)?;
            let rows: Vec<Value> = (1..=*r)
                .map(|r| {
                    let b = verify_bound(&f, r)?;
                    Ok(json!({ "r": r, "kappa": rat_json(&b.kappa), "bound": rat_json(&b.bound), "ok": b.ok }))
                })
                .collect::<Result<_>>()?;
            json!({ "family": format!("{f:?}"), "rows": rows })
        }
    };
    emit(to_json(cfg, out)?)
}

fn rows_json(rows: &[ComparisonRow]) -> Value {
    json!({ "rows": rows })
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| invalid(format!("{what} is stochastic: --seed is required")))
}

fn check_budget(ops: f64, budget: f64) -> Result<()> {
    if ops > budget {
        return Err(modphi::Error::BudgetExceeded { needed: ops, limit: budget }.into());
    }
    Ok(())
}

fn model(c: &ModelCmd, budget: f64, cfg: &RunConfig) -> Result<Emitted> {
    let rows = match c {
        ModelCmd::Cycles { n, k, order, compare, .. } => {
            let m = cycles_model(*n)?;
            let x = *k as f64 / (*n as f64).ln();
            let params = json!({ "n": n, "k": k, "x": x });
            let pm = lattice_point_mass(&m, x, *order)?;
            let tail = lattice_tail(&m, x)?;
            let mut a = ComparisonRow::new("cycles.point", params.clone(), pm.prob).with_flags(&pm.flags);
            let mut b = ComparisonRow::new("cycles.tail", params, tail.prob).with_flags(&tail.flags);
            if *compare {
                let d = cycles_exact(*n)?;
                a = a.against(d.pmf(*k), OracleKind::Exact);
                b = b.against(d.sf(*k), OracleKind::Exact);
            }
            vec![a, b]
        }
        ModelCmd::Bahadur { n, x, law, q, compare, .. } => {
            let iid = match law {
                IidName::Bernoulli => IidLaw::Bernoulli(*q),
                IidName::Exponential => IidLaw::Exponential,
            };
            let br = bahadur_rao_check(*n, *x, &iid)?;
            let params = json!({ "n": n, "x": x, "law": format!("{law:?}").to_lowercase(), "q": q });
            let mut out = Vec::new();
            for (name, cmp) in [("bahadur.point", br.point.as_ref()), ("bahadur.tail", Some(&br.tail))] {
                if let Some(cmp) = cmp {
                    let mut row = ComparisonRow::new(name, params.clone(), cmp.estimate);
                    if *compare {
                        if let Some(e) = cmp.exact {
                            row = row.against(e, OracleKind::Exact);
                        }
                    }
                    out.push(row);
                }
            }
            out
        }
        ModelCmd::Ising { n, beta, x, compare, .. } => {
            let t = x * (*n as f64).powf(0.75);
            let m = ising_cumulant_model(*n, *beta);
            let e = cumulant_moderate(&m, t / m.sigma2.sqrt())?;
            let mut row = ComparisonRow::new("ising.tail", json!({ "n": n, "beta": beta, "x": x, "T": t }), e.prob)
                .with_flags(&e.flags);
            if *compare {
                row = row.against(ising_exact(*n, *beta)?.sf(t.ceil() as i64), OracleKind::Exact);
            }
            vec![row]
        }
        ModelCmd::Zeros { h, draws, seed, compare, .. } => {
            let params = json!({ "h": h });
            let mean = hyperbolic_zeros_mean(*h);
            let cubic = hyperbolic_cubic_coefficient(*h, 1.0)?;
            let mut a = ComparisonRow::new("zeros.mean", params.clone(), mean);
            let mut b = ComparisonRow::new("zeros.cubic", params, cubic);
            if *compare {
                let seed = require_seed(*seed, "model zeros --compare")?;
                check_budget(*draws as f64 * h, budget)?;
                let s = sample_nh(*h, *draws, seed)?;
                let nd = *draws as f64;
                let m = s.iter().sum::<u64>() as f64 / nd;
                let v = s.iter().map(|&x| (x as f64 - m).powi(2)).sum::<f64>() / (nd - 1.0);
                a = a.against(m, OracleKind::MonteCarlo).with_stderr((v / nd).sqrt());
                b = b.against(1.0 / (144.0 * PI), OracleKind::Closed);
            }
            vec![a, b]
        }
        ModelCmd::Wperm { theta, n, w, compare, .. } => {
            let wp = WeightedPerm::new(ThetaSpec::constant(*theta), *n)?;
            let params = json!({ "theta": theta, "n": n, "w": w });
            let limit = (ln_gamma(*theta) - ln_gamma(theta * w.exp())).exp();
            let mut a = ComparisonRow::new("wperm.psi", params.clone(), limit);
            let mut b = ComparisonRow::new("wperm.h_ratio", params, 1.0);
            if *compare {
                a = a.against(wp.psi_n(*n, *w)?, OracleKind::Exact);
                b = b.against(wp.h_ratio(*n), OracleKind::Exact);
            }
            vec![a, b]
        }
        ModelCmd::Omega { n, z, literal, compare, .. } => {
            let d = omega_display(*n as f64, *z, !literal)?;
            let mut row = ComparisonRow::new("omega.mgf", json!({ "N": n, "z": z, "literal": literal }), d);
            if *compare {
                check_budget(*n as f64, budget)?;
                row = row.against(OmegaStats::new(*n)?.empirical_mgf(*z), OracleKind::Exact);
            }
            vec![row]
        }
        ModelCmd::Pb { p, x, compare, .. } => {
            let pb = poisson_bernoulli(p)?;
            let e = pb.tail_estimate(*x)?;
            let mut row =
                ComparisonRow::new("pb.tail", json!({ "p": p, "x": x, "t_n": pb.t_n }), e.prob).with_flags(&e.flags);
            if *compare {
                row = row.against(pb.dist.sf((x * pb.t_n).round() as i64), OracleKind::Exact);
            }
            vec![row]
        }
    };
    emit(to_json(cfg, rows_json(&rows))?)
}

fn pattern(a: &PatternArgs) -> Result<PatternGraph> {
    Ok(match a.pattern {
        PatternName::Edge => PatternGraph::edge(),
        PatternName::Triangle => PatternGraph::triangle(),
        PatternName::Path3 => PatternGraph::path3(),
        PatternName::Custom => PatternGraph::parse(a.edges.as_deref().unwrap_or_default())?,
    })
}

fn er_cmd(c: &ErCmd, budget: f64, cfg: &RunConfig) -> Result<Emitted> {
    let out = match c {
        ErCmd::Count { pattern: pa, n, p, seed, .. } => {
            let pat = pattern(pa)?;
            let x = er::sample_counts(*n, &pat, *p, 1, *seed)?[0];
            let mean = er::falling(*n, pat.k()).to_f64().unwrap_or(f64::NAN) * p.powi(pat.h() as i32);
            json!({ "count": x, "mean": mean })
        }
        ErCmd::Cumulants { pattern: pa, n, p, r, trials, seed, .. } => {
            let pat = pattern(pa)?;
            let pq = parse_rational(p)?;
            let exact: Vec<BigRational> = (1..=*r)
                .map(|j| Ok(er::eval_poly(&er::overlap_cumulant_poly(&pat, j, &pq)?, *n)))
                .collect::<Result<_>>()?;
            let mut rows = Vec::new();
            let mc = match trials {
                Some(t) => {
                    let seed = require_seed(*seed, "er cumulants --trials")?;
                    check_budget(*t as f64 * (*n * *n) as f64, budget)?;
                    Some(er::mc_cumulants(*n, &pat, pq.to_f64().unwrap_or(f64::NAN), *t, seed)?)
                }
                None => None,
            };
            for (j, k) in exact.iter().enumerate() {
                let kf = k.to_f64().unwrap_or(f64::NAN);
                let params = json!({ "n": n, "p": p, "r": j + 1, "exact": k.to_string() });
                let row = match &mc {
                    Some(m) if j < 3 => ComparisonRow::new("er.cumulant", params, m.kappa[j])
                        .against(kf, OracleKind::Exact)
                        .with_stderr(m.se[j]),
                    _ => ComparisonRow::new("er.cumulant", params, kf),
                };
                rows.push(row);
            }
            rows_json(&rows)
        }
        ErCmd::Sigma { pattern: pa, p, .. } => {
            let (s, l) = er::sigma2_l_exact(&pattern(pa)?, &parse_rational(p)?)?;
            json!({ "sigma2": rat_json(&s), "L": rat_json(&l) })
        }
        ErCmd::Deviate { n, p, v, uniform, trials, seed, .. } => {
            let e = if *uniform {
                er::triangle_deviation_uniform(*n, *p, *v)?
            } else {
                er::triangle_deviation(*n, *p, *v)?
            };
            let thr = er::triangle_threshold(*n, *p, *v);
            let mut row =
                ComparisonRow::new("er.triangle_tail", json!({ "n": n, "p": p, "v": v, "threshold": thr }), e.prob)
                    .with_flags(&e.flags);
            if let Some(t) = trials {
                let seed = require_seed(*seed, "er deviate --trials")?;
                check_budget(*t as f64 * (*n * *n) as f64, budget)?;
                let x = er::sample_counts(*n, &PatternGraph::triangle(), *p, *t, seed)?;
                let f = x.iter().filter(|&&c| c as f64 >= thr).count() as f64 / *t as f64;
                row = row.against(f, OracleKind::MonteCarlo).with_stderr((f * (1.0 - f) / *t as f64).sqrt());
            }
            json!({ "estimate": estimate_json(&e), "rows": [row] })
        }
        ErCmd::Poly { pattern: pa, p, r, n_list, .. } => {
            let i = er::polynomiality_check(&pattern(pa)?, &parse_rational(p)?, *r, n_list)?;
            json!({
                "coefficients": i.coeffs.iter().map(rat_json).collect::<Vec<_>>(),
                "held_out": i.held_out,
                "residual": rat_json(&i.residual),
            })
        }
    };
    emit(to_json(cfg, out)?)
}

fn omega(a: &ThomaArgs) -> Result<ThomaParameter<f64>> {
    let f = |v: &[String]| -> Result<Vec<f64>> {
        v.iter().map(|s| parse_rational(s).map(|q| q.to_f64().unwrap_or(f64::NAN))).collect()
    };
    Ok(ThomaParameter::new(f(&a.alpha)?, f(&a.beta)?)?)
}

fn thoma(c: &ThomaCmd, cfg: &RunConfig) -> Result<Emitted> {
    let out = match c {
        ThomaCmd::Measure { omega: o, n, .. } => {
            let w = omega(o)?;
            let m = central_measure(&w, *n)?;
            let rows: Vec<Value> = m.iter().map(|(l, p)| json!({ "lambda": l, "mass": p })).collect();
            json!({ "n": n, "rows": rows })
        }
        ThomaCmd::Cumulants { omega: o, k, rho, n, r, .. } => {
            let w = omega(o)?;
            let rho = if rho.is_empty() { vec![*k] } else { rho.clone() };
            let size: usize = rho.iter().sum();
            let kap = char_cumulants_exact(&w, &rho, *n, *r)?;
            let rows: Vec<Value> = kap
                .iter()
                .enumerate()
                .map(|(j, v)| json!({ "r": j + 1, "kappa": v, "bound": char_cumulant_bound(size, *n, j + 1) }))
                .collect();
            json!({ "rho": rho, "n": n, "tau": w.tau(&rho), "rows": rows })
        }
        ThomaCmd::Limits { omega: o, k, mu, .. } => {
            let w = omega(o)?;
            let c = sigma2_l_char(&w, *k)?;
            let mut v = json!({ "k": k, "sigma2": c.sigma2, "L": c.l, "degenerate": c.degenerate });
            if !mu.is_empty() {
                let (s, l) = general_mu_limits(&w, mu)?;
                v["mu"] = json!({ "mu": mu, "sigma2": s, "L": l });
            }
            v
        }
    };
    emit(to_json(cfg, out)?)
}

fn run_suite(a: &SuiteArgs, cfg: &RunConfig) -> Result<Emitted> {
    let ids = suite::criterion_ids(&a.name).map_err(|e| invalid(e.to_string()))?;
    let mut lines = String::new();
    let mut results = Vec::new();
    for id in ids {
        let r = suite::run_criterion(id, a.fast)?;
        lines.push_str(&format!("{r}\n"));
        results.push(r);
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    lines.push_str(&format!("{}/{} passed\n", results.len() - failed, results.len()));
    if let Some(p) = &a.json {
        let body = to_json(cfg, json!({ "suite": a.name, "fast": a.fast, "criteria": results }))?;
        std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(Emitted { body: lines, status: if failed > 0 { 1 } else { 0 } })
}
