//! Batch orchestration: one polynomial in, one factorization report out.
//!
//! The run walks the full recipe: index, norms, delta0, accuracy bounds,
//! condition bounds, sampling order, window, Toeplitz solve, normalization,
//! trimming, and the assembled ledger.

use crate::bounds::{self, BoundInputs, Delta0Mode};
use crate::contour;
use crate::error::Error;
use crate::factor::{self, PathOutput, SolvePath};
use crate::laurent::{self, EllInputs};
use crate::oracle;
use crate::poly::Polynomial;
use crate::report::{self, InputFile, LedgerJson, PminusJson, Report};
use crate::scalar::{BigReal, Precision, PrecisionContext, Real};

/// Which solution route(s) to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathChoice {
    Kernel,
    Direct,
    Both,
}

impl PathChoice {
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "kernel" => Ok(PathChoice::Kernel),
            "direct" => Ok(PathChoice::Direct),
            "both" => Ok(PathChoice::Both),
            _ => Err(Error::InvalidInput(format!("bad path `{s}`"))),
        }
    }
}

/// delta0 policy as requested on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum Delta0Choice {
    Auto,
    General,
    SelfInversive,
    One,
    Value(String),
}

impl Delta0Choice {
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "auto" => Ok(Delta0Choice::Auto),
            "general" => Ok(Delta0Choice::General),
            "self-inversive" => Ok(Delta0Choice::SelfInversive),
            "one" => Ok(Delta0Choice::One),
            other => {
                other
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("bad delta0 `{other}`")))?;
                Ok(Delta0Choice::Value(other.to_string()))
            }
        }
    }
}

/// Fully resolved run configuration (file contents plus flag overrides).
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: InputFile,
    pub rho: Option<String>,
    /// Explicit annulus radii (r, R); takes precedence over `rho` and allows
    /// asymmetric annuli.
    pub annulus: Option<(String, String)>,
    pub delta: Option<String>,
    pub q: String,
    pub n: Option<usize>,
    pub delta0: Delta0Choice,
    pub eps_tilde: Option<String>,
    pub path: PathChoice,
    pub precision: Precision,
    pub oracle_check: bool,
}

impl RunConfig {
    pub fn new(input: InputFile) -> Self {
        RunConfig {
            input,
            rho: None,
            annulus: None,
            delta: None,
            q: "0.5".into(),
            n: None,
            delta0: Delta0Choice::Auto,
            eps_tilde: None,
            path: PathChoice::Kernel,
            precision: Precision::Native64,
            oracle_check: false,
        }
    }
}

/// Executes the factorization and produces the serialized report.
pub fn run(config: &RunConfig) -> Result<Report, Error> {
    match config.precision {
        Precision::Native64 => run_typed::<f64>(config),
        Precision::Extended(_) => run_typed::<BigReal>(config),
    }
}

fn run_typed<T: Real>(config: &RunConfig) -> Result<Report, Error> {
    let ctx: PrecisionContext<T> = PrecisionContext::new(config.precision);
    let sample = ctx.real_from_i64(0);

    // Parse and validate the polynomial.
    let mut coeffs = Vec::with_capacity(config.input.coefficients.len());
    for pair in &config.input.coefficients {
        coeffs.push(ctx.complex_from_str(&pair[0].as_decimal(), &pair[1].as_decimal())?);
    }
    let p = Polynomial::new(coeffs);
    let nu = p.degree();
    if nu < 1 {
        return Err(Error::InvalidInput("polynomial must have degree >= 1".into()));
    }
    if p.coeff(0).is_zero() {
        return Err(Error::InvalidInput(
            "constant coefficient is zero (root at the origin)".into(),
        ));
    }
    if p.leading().is_zero() {
        return Err(Error::InvalidInput("leading coefficient is zero".into()));
    }

    let p_monic = p.to_monic();
    let mut warnings: Vec<String> = Vec::new();

    // Step 1: the index.
    let kappa = contour::winding_number(&p_monic, 128)?;

    if kappa == 0 || kappa == nu as i64 {
        warnings.push(format!(
            "trivial factorization: kappa = {kappa} of degree {nu}"
        ));
        let result = factor::trivial_result(&p, kappa);
        let (m1, _) = crate::poly::circle_extrema(&p_monic, &sample.one(), (4 * (nu + 1)).max(4096))?;
        return Ok(render_trivial(config, &p, result, &m1, warnings));
    }

    // Annulus and circle minima.
    let annulus = if let Some((r, big_r)) = &config.annulus {
        let r = ctx.real_from_str(r)?;
        let big_r = ctx.real_from_str(big_r)?;
        contour::annulus_from_radii(&p_monic, &r, &big_r)?
    } else {
        let rho_string = config
            .rho
            .clone()
            .or_else(|| config.input.rho.as_ref().map(|v| v.as_decimal()));
        let rho_hint = match &rho_string {
            Some(s) => Some(ctx.real_from_str(s)?),
            None => None,
        };
        contour::choose_annulus(&p_monic, rho_hint.as_ref())?
    };

    // Step 2: norms, n, q.
    let norm_p = p_monic.one_norm();
    let n = config.n.unwrap_or(nu + 1);
    let n0 = (kappa.max(nu as i64 - kappa)) as usize;
    if n < n0 + 1 {
        return Err(Error::InvalidInput(format!(
            "n = {n} must be at least n0 + 1 = {}",
            n0 + 1
        )));
    }
    let delta_string = config
        .delta
        .clone()
        .or_else(|| config.input.delta.as_ref().map(|v| v.as_decimal()))
        .ok_or_else(|| Error::InvalidInput("input accuracy delta is required".into()))?;
    let bounds_config = bounds::BoundsConfig {
        q: ctx.real_from_str(&config.q)?,
        delta: ctx.real_from_str(&delta_string)?,
        delta0_mode: match &config.delta0 {
            Delta0Choice::Auto => Delta0Mode::Auto,
            Delta0Choice::General => Delta0Mode::General,
            Delta0Choice::SelfInversive => Delta0Mode::SelfInversive,
            Delta0Choice::One => Delta0Mode::ExactOne,
            Delta0Choice::Value(s) => Delta0Mode::Manual(ctx.real_from_str(s)?),
        },
        eps_tilde_override: match &config.eps_tilde {
            Some(s) => Some(ctx.real_from_str(s)?),
            None => None,
        },
    };
    bounds_config.validate()?;
    let q = bounds_config.q.clone();
    let delta = bounds_config.delta.clone();

    // Step 3: delta0.
    let oracle_roots = if config.oracle_check {
        Some(oracle::companion_roots(&p_monic)?)
    } else {
        None
    };
    let delta0 = bounds::select_delta0(
        &p_monic,
        kappa,
        &bounds_config.delta0_mode,
        oracle_roots.as_deref(),
    )?;

    let inputs = BoundInputs {
        n,
        nu,
        kappa,
        rho: annulus.rho.clone(),
        m1: annulus.m1.clone(),
        m_k: annulus.m_k.clone(),
        delta0: delta0.clone(),
        norm_p: norm_p.clone(),
        q: q.clone(),
    };

    // Step 4: guaranteed accuracies.
    let acc = bounds::accuracy_bounds(&inputs, &delta);
    if !acc.certified {
        warnings.push(format!(
            "input accuracy delta = {} exceeds the perturbation hypothesis; \
             reported accuracy bounds are not certified",
            delta.to_f64()
        ));
    }

    // Step 5: condition estimate and the demanded window accuracy.
    let (cond_annulus, cond_rough) = bounds::condition_bounds(&inputs);
    let cond = cond_annulus.min_val(&cond_rough);
    let (d, d_tilde) = bounds::decimal_exponents(&acc.eps, &cond);
    let eps_pow10 = sample.from_i64(10).powi(-(d as i64));
    let eps_tilde = match &bounds_config.eps_tilde_override {
        Some(v) => v.clone(),
        None => sample.from_i64(10).powi(-((d + d_tilde) as i64)),
    };

    // Step 6: sampling order.
    let ell_inputs = EllInputs {
        n,
        kappa,
        rho: annulus.rho.clone(),
        m_k: annulus.m_k.clone(),
        delta0: delta0.clone(),
        norm_p: norm_p.clone(),
        q: q.clone(),
    };
    let ell = laurent::choose_ell(&eps_tilde, &ell_inputs)?;

    // Step 7: the window.
    let window = laurent::build_window(&p_monic, n, kappa, ell, &annulus)?;
    let (_, _, sampling_ok) = bounds::window_perturbation_bounds(&inputs, ell);
    if !sampling_ok {
        warnings.push(
            "sampling hypothesis for the window perturbation bound fails; raise ell".into(),
        );
    }

    // Steps 8-10: solve, normalize, trim.
    let primary_output = match config.path {
        PathChoice::Direct => {
            let (alpha, beta) = factor::solve_direct(&window, kappa, n)?;
            PathOutput::Direct { alpha, beta }
        }
        _ => PathOutput::Kernel(factor::solve_kernel(&window, kappa, n)?),
    };
    let result = factor::assemble(primary_output, &p, kappa, n, &acc.eps)?;

    if config.path == PathChoice::Both {
        let (alpha, beta) = factor::solve_direct(&window, kappa, n)?;
        let other = factor::assemble(PathOutput::Direct { alpha, beta }, &p, kappa, n, &acc.eps)?;
        let d1 = result.p1.sub(&other.p1).one_norm();
        let d2 = result.p2.sub(&other.p2).one_norm();
        let allowance = acc.eps.from_i64(10) * &acc.eps;
        if d1 > allowance || d2 > allowance {
            warnings.push(format!(
                "kernel/direct path disagreement ||dp1|| = {}, ||dp2|| = {} exceeds 10 eps",
                d1.to_f64(),
                d2.to_f64()
            ));
        }
    }

    let path_label = match config.path {
        PathChoice::Direct => SolvePath::Direct.label(),
        _ => SolvePath::Kernel.label(),
    };

    let ledger = bounds::BoundLedger {
        delta0,
        boyd_delta: bounds::boyd_delta(&sample),
        norm_p,
        m1: annulus.m1.clone(),
        m_k: annulus.m_k.clone(),
        rho: annulus.rho.clone(),
        cond_bound_annulus: cond_annulus,
        cond_bound_rough: cond_rough,
        eps1: acc.eps1,
        eps2: acc.eps2,
        eps: acc.eps,
        d,
        d_tilde,
        eps_tilde,
        eps_pow10,
        ell,
        window_entry_bound: window.per_entry_bound.clone(),
    };

    Ok(Report {
        kappa,
        n,
        ell,
        p1: report::poly_to_pairs(&result.p1),
        p2: report::poly_to_pairs(&result.p2),
        p_minus: PminusJson {
            coeffs: report::poly_to_pairs(&result.pminus.coeffs),
            shift: result.pminus.shift,
        },
        residual: result.residual.to_decimal(),
        ledger: ledger_to_json(&ledger, &delta, &q),
        path: path_label.into(),
        precision: config.precision.label(),
        warnings,
    })
}

fn ledger_to_json<T: Real>(ledger: &bounds::BoundLedger<T>, delta: &T, q: &T) -> LedgerJson {
    LedgerJson {
        delta0: ledger.delta0.to_decimal(),
        m1: ledger.m1.to_decimal(),
        m_k: ledger.m_k.to_decimal(),
        rho: ledger.rho.to_decimal(),
        eps1: ledger.eps1.to_decimal(),
        eps2: ledger.eps2.to_decimal(),
        eps: ledger.eps.to_decimal(),
        cond_bound: ledger
            .cond_bound_annulus
            .min_val(&ledger.cond_bound_rough)
            .to_decimal(),
        window_entry_bound: ledger.window_entry_bound.to_decimal(),
        cond_bound_annulus: ledger.cond_bound_annulus.to_decimal(),
        cond_bound_rough: ledger.cond_bound_rough.to_decimal(),
        norm_p: ledger.norm_p.to_decimal(),
        boyd_delta: ledger.boyd_delta.to_decimal(),
        delta: delta.to_decimal(),
        q: q.to_decimal(),
        d: ledger.d,
        d_tilde: ledger.d_tilde,
        eps_tilde: ledger.eps_tilde.to_decimal(),
        eps_pow10: ledger.eps_pow10.to_decimal(),
    }
}

fn render_trivial<T: Real>(
    config: &RunConfig,
    p: &Polynomial<T>,
    result: factor::FactorizationResult<T>,
    m1: &T,
    warnings: Vec<String>,
) -> Report {
    let zero = "0".to_string();
    let sample = p.coeff(0).re.zero();
    Report {
        kappa: result.kappa,
        n: 0,
        ell: 0,
        p1: report::poly_to_pairs(&result.p1),
        p2: report::poly_to_pairs(&result.p2),
        p_minus: PminusJson {
            coeffs: report::poly_to_pairs(&result.pminus.coeffs),
            shift: result.pminus.shift,
        },
        residual: result.residual.to_decimal(),
        ledger: LedgerJson {
            delta0: "1".into(),
            m1: m1.to_decimal(),
            m_k: zero.clone(),
            rho: zero.clone(),
            eps1: zero.clone(),
            eps2: zero.clone(),
            eps: zero.clone(),
            cond_bound: zero.clone(),
            window_entry_bound: zero.clone(),
            cond_bound_annulus: zero.clone(),
            cond_bound_rough: zero.clone(),
            norm_p: p.to_monic().one_norm().to_decimal(),
            boyd_delta: bounds::boyd_delta(&sample).to_decimal(),
            delta: config
                .delta
                .clone()
                .or_else(|| config.input.delta.as_ref().map(|v| v.as_decimal()))
                .unwrap_or_else(|| zero.clone()),
            q: config.q.clone(),
            d: 0,
            d_tilde: 0,
            eps_tilde: zero.clone(),
            eps_pow10: zero,
        },
        path: "kernel".into(),
        precision: config.precision.label(),
        warnings,
    }
}
