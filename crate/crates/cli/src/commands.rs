//! One function per subcommand. Each returns the process exit code once its
//! report is out.

use std::io::Write;

use mixpart::diffnum::{
    mixed_cross, mixed_iterated, mixed_step, partial, schwarz_audit, DerivativeEstimate,
};
use mixpart::funcs::{builtin, Function2D, Oracle, BUILTIN_NAMES};
use mixpart::lipcheck::{uniform_partial_lipschitz, LipError};
use mixpart::strongdiff::{
    family, family_point, is_strongly_differentiable, verify_theorem1, StrongDiffError,
};
use mixpart::tolstov::{
    verify_lemma1, verify_theorem2, Lemma1Report, Theorem2Report, TolstovError,
};
use mixpart::{Axis, Point};
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{emit_csv, emit_json};
use crate::Failure;

pub fn list_builtins(out: &mut dyn Write) -> Result<i32, Failure> {
    for name in BUILTIN_NAMES {
        let f = builtin(name).expect("listed builtin");
        writeln!(out, "{name}\t{}", f.domain())
            .map_err(|e| Failure::usage(format!("cannot write to stdout: {e}")))?;
    }
    Ok(0)
}

fn no_csv(cfg: &RunConfig) -> Result<(), Failure> {
    match cfg.csv {
        Some(_) => Err(Failure::usage(format!(
            "--csv: not produced by {}",
            cfg.command
        ))),
        None => Ok(()),
    }
}

fn oracle(f: &Function2D, which: Oracle, p: Point) -> Option<f64> {
    f.oracle(which, p.x, p.y).and_then(Result::ok)
}

#[derive(Serialize)]
struct EvalResult {
    point: Point,
    value: f64,
}

pub fn eval(cfg: &RunConfig, f: &Function2D, out: &mut dyn Write) -> Result<i32, Failure> {
    no_csv(cfg)?;
    let p = cfg.at;
    let value = f
        .eval_at(p)
        .map_err(|e| Failure::numeric(format!("cannot evaluate at ({}, {}): {e}", p.x, p.y)))?;
    if cfg.json.is_some() {
        emit_json(cfg, &EvalResult { point: p, value }, out)?;
    } else {
        writeln!(out, "{value}")
            .map_err(|e| Failure::usage(format!("cannot write to stdout: {e}")))?;
    }
    Ok(0)
}

fn code_for(estimates: &[&DerivativeEstimate]) -> i32 {
    if estimates.iter().any(|e| e.excluded) {
        2
    } else {
        0
    }
}

#[derive(Serialize)]
struct PartialsResult {
    point: Point,
    d1: DerivativeEstimate,
    d2: DerivativeEstimate,
    oracle_d1: Option<f64>,
    oracle_d2: Option<f64>,
}

pub fn partials(cfg: &RunConfig, f: &Function2D, out: &mut dyn Write) -> Result<i32, Failure> {
    no_csv(cfg)?;
    let p = cfg.at;
    let r = PartialsResult {
        point: p,
        d1: partial(f, Axis::X, p, cfg.scheme, None),
        d2: partial(f, Axis::Y, p, cfg.scheme, None),
        oracle_d1: oracle(f, Oracle::D1, p),
        oracle_d2: oracle(f, Oracle::D2, p),
    };
    emit_json(cfg, &r, out)?;
    Ok(code_for(&[&r.d1, &r.d2]))
}

#[derive(Serialize)]
struct MixedResult {
    point: Point,
    /// Differentiate in `x`, then in `y`.
    d21: DerivativeEstimate,
    /// Differentiate in `y`, then in `x`.
    d12: DerivativeEstimate,
    /// Symmetric cross quotient with `h = k`.
    cross: DerivativeEstimate,
    oracle_d21: Option<f64>,
    oracle_d12: Option<f64>,
}

pub fn mixed(cfg: &RunConfig, f: &Function2D, out: &mut dyn Write) -> Result<i32, Failure> {
    no_csv(cfg)?;
    let p = cfg.at;
    let h = mixed_step(p.x.abs().max(p.y.abs()));
    let r = MixedResult {
        point: p,
        d21: mixed_iterated(f, (Axis::X, Axis::Y), p),
        d12: mixed_iterated(f, (Axis::Y, Axis::X), p),
        cross: mixed_cross(f, p, h, h),
        oracle_d21: oracle(f, Oracle::D21, p),
        oracle_d12: oracle(f, Oracle::D12, p),
    };
    emit_json(cfg, &r, out)?;
    Ok(code_for(&[&r.d21, &r.d12, &r.cross]))
}

pub fn audit(cfg: &RunConfig, f: &Function2D, out: &mut dyn Write) -> Result<i32, Failure> {
    let [nx, ny] = cfg.grid;
    if nx < 3 || ny < 3 {
        return Err(Failure::usage(format!(
            "--grid: audit needs at least 3x3 nodes, got {nx}x{ny}"
        )));
    }
    let r = schwarz_audit(f, cfg.rect, nx, ny, cfg.tol);
    log::info!(
        "{} mismatches, {} excluded of {} nodes",
        r.mismatch_count,
        r.excluded_count,
        nx * ny
    );
    emit_json(cfg, &r, out)?;
    emit_csv(
        cfg,
        &["x", "y", "d21", "d12", "delta", "status"],
        r.nodes
            .iter()
            .map(|n| (n.x, n.y, n.d21, n.d12, n.delta, n.status.as_str())),
    )?;
    Ok(0)
}

pub fn strongdiff(cfg: &RunConfig, f: &Function2D, out: &mut dyn Write) -> Result<i32, Failure> {
    if cfg.pairs < 16 {
        return Err(Failure::usage(format!(
            "--pairs: need at least 16, got {}",
            cfg.pairs
        )));
    }
    let g = family(f, cfg.axis);
    let at = family_point(cfg.at, cfg.axis);
    let mut v = is_strongly_differentiable(&g, at, &cfg.radii, cfg.eta, &cfg.sampler());
    let (first, last) = (cfg.radii[0], cfg.radii[cfg.radii.len() - 1]);
    let schedule_ok = cfg.radii.len() >= 4 && first / last >= 100.0;
    if let Some(c) = v.evidence.as_mut() {
        c.axis = cfg.axis;
    }
    log::info!("verdict {:?}: {}", v.outcome, v.reason);
    emit_json(cfg, &v, out)?;
    match &v.evidence {
        Some(c) => {
            emit_csv(cfg, &["delta", "modulus", "pairs"], c.csv_rows())?;
            Ok(0)
        }
        // a valid schedule without evidence means sampling failed
        None if schedule_ok => {
            log::warn!("{}", v.reason);
            eprintln!("error: {}", v.reason);
            Ok(2)
        }
        None => Ok(0),
    }
}

fn strong_failure(e: StrongDiffError) -> Failure {
    if e.is_numeric() {
        Failure::numeric(e.to_string())
    } else {
        let flag = match e {
            StrongDiffError::TooFewPairs => "--pairs",
            _ => "--radii",
        };
        Failure::usage(format!("{flag}: {e}"))
    }
}

pub fn theorem1(cfg: &RunConfig, f: &Function2D, out: &mut dyn Write) -> Result<i32, Failure> {
    let r =
        verify_theorem1(f, cfg.at, &cfg.radii, cfg.tol, &cfg.sampler()).map_err(strong_failure)?;
    log::info!("equality gap {:e}", r.equality_gap);
    emit_json(cfg, &r, out)?;
    let rows = [("d21", &r.curve_d21), ("d12", &r.curve_d12)]
        .into_iter()
        .flat_map(|(name, c)| c.csv_rows().map(move |(d, m, n)| (name, d, m, n)));
    emit_csv(cfg, &["curve", "delta", "modulus", "pairs"], rows)?;
    Ok(0)
}

pub fn lipcheck(cfg: &RunConfig, f: &Function2D, out: &mut dyn Write) -> Result<i32, Failure> {
    let r = uniform_partial_lipschitz(
        f,
        cfg.axis,
        cfg.axis.other(),
        cfg.rect,
        cfg.slices,
        cfg.samples,
        cfg.seed,
    )
    .map_err(|e| match e {
        LipError::AllSlicesExcluded | LipError::ExcludedSlice { .. } => {
            Failure::numeric(e.to_string())
        }
        LipError::TooFewSamples => Failure::usage(format!("--samples: {e}")),
        LipError::TooFewSlices => Failure::usage(format!("--slices: {e}")),
        LipError::SameAxis => Failure::usage(format!("--axis: {e}")),
        LipError::BadInterval => Failure::usage(format!("--rect: {e}")),
    })?;
    log::info!("k_hat {:e} on slice {}", r.k_hat, r.worst_slice);
    emit_json(cfg, &r, out)?;
    emit_csv(cfg, &["slice", "k_hat"], r.per_slice.iter().copied())?;
    Ok(0)
}

#[derive(Serialize)]
struct TolstovResult {
    lemma1: Lemma1Report,
    theorem2: Theorem2Report,
}

pub fn tolstov(cfg: &RunConfig, h: &Function2D, out: &mut dyn Write) -> Result<i32, Failure> {
    let [nx, ny] = cfg.grid;
    let fail = |e: TolstovError| match e {
        TolstovError::QuadratureFailure => Failure::numeric(e.to_string()),
        TolstovError::EmptyGrid => Failure::usage(format!("--grid: {e}")),
        TolstovError::BadSpec => Failure::usage(format!("--panels: {e}")),
    };
    let lemma1 = verify_lemma1(h, cfg.rect, cfg.quadrature, nx, ny, cfg.tol).map_err(fail)?;
    let theorem2 = verify_theorem2(h, cfg.rect, cfg.quadrature, nx, ny, cfg.tol).map_err(fail)?;
    log::info!(
        "slice pass fraction {}, mixed pass fraction {}",
        lemma1.pass_fraction,
        theorem2.pass_fraction
    );
    let r = TolstovResult { lemma1, theorem2 };
    emit_json(cfg, &r, out)?;
    emit_csv(
        cfg,
        &[
            "x", "y", "density", "d21", "d12", "gap_a1", "gap_a2", "gap_d21", "gap_d12", "status",
        ],
        r.theorem2.nodes.iter().map(|n| {
            (
                n.x,
                n.y,
                n.density,
                n.d21,
                n.d12,
                n.gap_a1,
                n.gap_a2,
                n.gap_d21,
                n.gap_d12,
                n.status.as_str(),
            )
        }),
    )?;
    Ok(0)
}
