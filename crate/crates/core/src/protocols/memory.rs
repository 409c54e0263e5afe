use serde::Serialize;

use crate::dynamics::{
    idle_phase, read_schedule, schedule_duration, transmon_idle_generator, write_schedule, ArchitectureConfig,
    ArchitectureKind, Phase, TRANSMON,
};
use crate::error::{Error, Result};
use crate::fidelity::{
    analytic_errors, best_frame_fidelity, idle_error, storage_rates, AnalyticControlModel, AnalyticErrors,
};
use crate::hilbert::HilbertSpace;
use crate::model::{DeviceParams, Links, Participation, MAX_PARTICIPATION};
use crate::numeric::minimize_bracketed;
use crate::solver::{calibrate_ef, propagate_channel, LogicalEncoding, QubitChannel, ToleranceConfig};

/// Smallest participation considered by the optimizers.
pub const MIN_PARTICIPATION: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ParticipationMode {
    /// Use the participations of the architecture as given.
    Fixed,
    /// Minimize the analytic total error; `refine` adds a numeric search
    /// over the storage participation around the analytic optimum.
    Optimized { refine: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MemorySpec {
    pub arch: ArchitectureConfig,
    /// Total memory time, write and read included.
    pub t_m: f64,
    pub mode: ParticipationMode,
}

impl MemorySpec {
    pub fn new(arch: ArchitectureConfig, t_m: f64, mode: ParticipationMode) -> Result<Self> {
        if !(t_m > 0.0 && t_m.is_finite()) {
            return Err(Error::InvalidParameter(format!("memory time {t_m}")));
        }
        Ok(Self { arch, t_m, mode })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MemoryResult {
    pub kind: ArchitectureKind,
    pub links: Links,
    pub participation: f64,
    pub t_m: f64,
    pub t_i: f64,
    /// Duration of one transfer.
    pub swap_duration: f64,
    pub eps_write: f64,
    pub eps_read: f64,
    /// Mean of the write and read errors.
    pub eps_swap: f64,
    pub eps_idle: f64,
    pub eps_total: f64,
    pub leakage: f64,
    pub analytic: AnalyticErrors,
}

/// Numeric and analytic error of a single write.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SwapResult {
    pub kind: ArchitectureKind,
    pub participation: f64,
    pub duration: f64,
    pub numeric: f64,
    pub analytic: f64,
    pub leakage: f64,
}

/// Fills in a calibrated e–f drive when the architecture uses one.
pub fn calibrated(params: &DeviceParams, arch: &ArchitectureConfig, tol: &ToleranceConfig) -> Result<ArchitectureConfig> {
    let mut arch = *arch;
    if arch.kind != ArchitectureKind::Coupler && arch.pulse.ef_drive.is_none() {
        let (drive, _) = calibrate_ef(params, &arch, tol)?;
        arch.pulse.ef_drive = Some(drive);
    }
    Ok(arch)
}

/// Idle time left after write and read, or `None` when `t_m` is too short.
pub fn idle_time(params: &DeviceParams, arch: &ArchitectureConfig, t_m: f64) -> Result<Option<f64>> {
    let swap = AnalyticControlModel::for_arch(params, arch, 0.0)?.swap_time();
    let t_i = t_m - 2.0 * swap;
    if t_i < -1e-12 * t_m {
        Ok(None)
    } else {
        Ok(Some(t_i.max(0.0)))
    }
}

/// Closed-form errors for total memory time `t_m`.
pub fn analytic_memory(params: &DeviceParams, arch: &ArchitectureConfig, t_m: f64) -> Result<AnalyticErrors> {
    let t_i = idle_time(params, arch, t_m)?.ok_or_else(|| infeasible(params, arch, t_m))?;
    let model = AnalyticControlModel::for_arch(params, arch, t_i)?;
    Ok(analytic_errors(params, arch, &model))
}

fn infeasible(params: &DeviceParams, arch: &ArchitectureConfig, t_m: f64) -> Error {
    let swap = AnalyticControlModel::for_arch(params, arch, 0.0).map(|m| m.swap_time()).unwrap_or(f64::NAN);
    Error::Infeasible(format!("t_m = {t_m:e} s is shorter than write plus read ({:e} s)", 2.0 * swap))
}

fn channel_error(
    space: &HilbertSpace,
    schedule: &[Phase],
    input: LogicalEncoding,
    output: LogicalEncoding,
    tol: &ToleranceConfig,
) -> Result<(f64, f64)> {
    let ch = propagate_channel(space, schedule, input, output, tol)?;
    let r = best_frame_fidelity(&ch)?;
    Ok((r.avg_error, r.leakage))
}

struct Schedules {
    arch: ArchitectureConfig,
    write: Vec<Phase>,
    read: Vec<Phase>,
    idle: Option<Phase>,
    t_i: f64,
}

fn schedules(params: &DeviceParams, arch: &ArchitectureConfig, t_m: f64, tol: &ToleranceConfig) -> Result<Schedules> {
    let arch = calibrated(params, arch, tol)?;
    let write = write_schedule(params, &arch)?;
    let read = read_schedule(params, &arch)?;
    let t_i = t_m - schedule_duration(&write) - schedule_duration(&read);
    if t_i < -1e-12 * t_m {
        return Err(infeasible(params, &arch, t_m));
    }
    let t_i = t_i.max(0.0);
    let idle = if t_i > 0.0 { Some(idle_phase(params, &arch, t_i)?) } else { None };
    Ok(Schedules { arch, write, read, idle, t_i })
}

impl Schedules {
    fn full(&self) -> Vec<Phase> {
        self.write.iter().chain(self.idle.iter()).chain(self.read.iter()).cloned().collect()
    }
}

/// Complete write–idle–read channel from transmon back to transmon.
pub fn memory_channel(params: &DeviceParams, arch: &ArchitectureConfig, t_m: f64, tol: &ToleranceConfig) -> Result<QubitChannel> {
    let s = schedules(params, arch, t_m, tol)?;
    propagate_channel(&s.arch.space()?, &s.full(), LogicalEncoding::transmon(), LogicalEncoding::transmon(), tol)
}

/// Error of the complete write–idle–read channel only.
pub fn memory_error(params: &DeviceParams, arch: &ArchitectureConfig, t_m: f64, tol: &ToleranceConfig) -> Result<f64> {
    Ok(best_frame_fidelity(&memory_channel(params, arch, t_m, tol)?)?.avg_error)
}

/// Write–idle–read memory at fixed participations, with a per-step breakdown.
pub fn simulate_memory(params: &DeviceParams, arch: &ArchitectureConfig, t_m: f64, tol: &ToleranceConfig) -> Result<MemoryResult> {
    let s = schedules(params, arch, t_m, tol)?;
    let space = s.arch.space()?;
    let (q, a) = (LogicalEncoding::transmon, LogicalEncoding::cavity);
    let (eps_total, leakage) = channel_error(&space, &s.full(), q(), q(), tol)?;
    let (eps_write, _) = channel_error(&space, &s.write, q(), a(), tol)?;
    let (eps_read, _) = channel_error(&space, &s.read, a(), q(), tol)?;
    let eps_idle = match &s.idle {
        Some(ph) => channel_error(&space, std::slice::from_ref(ph), a(), a(), tol)?.0,
        None => 0.0,
    };
    let model = AnalyticControlModel::for_arch(params, &s.arch, s.t_i)?;
    Ok(MemoryResult {
        kind: s.arch.kind,
        links: s.arch.links,
        participation: s.arch.storage_participation().value(),
        t_m,
        t_i: s.t_i,
        swap_duration: schedule_duration(&s.write),
        eps_write,
        eps_read,
        eps_swap: 0.5 * (eps_write + eps_read),
        eps_idle,
        eps_total,
        leakage,
        analytic: analytic_errors(params, &s.arch, &model),
    })
}

/// Numeric error of one write against the closed-form swap error.
pub fn run_swap(params: &DeviceParams, arch: &ArchitectureConfig, tol: &ToleranceConfig) -> Result<SwapResult> {
    let arch = calibrated(params, arch, tol)?;
    let write = write_schedule(params, &arch)?;
    let (numeric, leakage) =
        channel_error(&arch.space()?, &write, LogicalEncoding::transmon(), LogicalEncoding::cavity(), tol)?;
    let model = AnalyticControlModel::for_arch(params, &arch, 0.0)?;
    Ok(SwapResult {
        kind: arch.kind,
        participation: arch.storage_participation().value(),
        duration: schedule_duration(&write),
        numeric,
        analytic: analytic_errors(params, &arch, &model).swap,
        leakage,
    })
}

/// Numeric and analytic error of storage idling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdleResult {
    pub kind: ArchitectureKind,
    pub participation: f64,
    pub t_i: f64,
    pub numeric: f64,
    pub analytic: f64,
}

/// Idles the storage cavity for `t_i` with the transmon in its ground state.
pub fn run_idle(params: &DeviceParams, arch: &ArchitectureConfig, t_i: f64, tol: &ToleranceConfig) -> Result<IdleResult> {
    let phase = idle_phase(params, arch, t_i)?;
    let a = LogicalEncoding::cavity;
    let (numeric, _) = channel_error(&arch.space()?, std::slice::from_ref(&phase), a(), a(), tol)?;
    let (down, phi) = storage_rates(params, arch);
    Ok(IdleResult {
        kind: arch.kind,
        participation: arch.storage_participation().value(),
        t_i,
        numeric,
        analytic: idle_error(down, phi, t_i),
    })
}

/// Error of a bare transmon idling for `t`.
pub fn transmon_idle_error(params: &DeviceParams, dim: usize, t: f64, tol: &ToleranceConfig) -> Result<f64> {
    let gen = transmon_idle_generator(params, dim, t)?;
    let space = HilbertSpace::new([(TRANSMON, dim)])?;
    let q = LogicalEncoding::transmon;
    Ok(channel_error(&space, &[Phase::single(gen)], q(), q(), tol)?.0)
}

/// Runs the memory protocol of `spec`.
pub fn run_memory(params: &DeviceParams, spec: &MemorySpec, tol: &ToleranceConfig) -> Result<MemoryResult> {
    match spec.mode {
        ParticipationMode::Fixed => simulate_memory(params, &spec.arch, spec.t_m, tol),
        ParticipationMode::Optimized { refine } => {
            Ok(optimize_participation(params, &spec.arch, spec.t_m, refine, tol)?.1)
        }
    }
}

/// Storage participation at which induced decay equals intrinsic decay.
pub fn critical_participation(params: &DeviceParams, kind: ArchitectureKind) -> f64 {
    let rate = match kind {
        ArchitectureKind::Direct => params.inverse_purcell(Participation::max()),
        _ => params.coupler_inverse_purcell(Participation::max()),
    } / MAX_PARTICIPATION;
    if rate > 0.0 {
        (params.kappa / rate).min(MAX_PARTICIPATION)
    } else {
        MAX_PARTICIPATION
    }
}

fn set_links(arch: &ArchitectureConfig, x: &[f64]) -> ArchitectureConfig {
    let p = |v: f64| Participation::new(v.exp().clamp(MIN_PARTICIPATION, MAX_PARTICIPATION)).expect("clamped");
    let mut a = arch.with_storage_participation(p(x[0]));
    if x.len() == 3 {
        a.links.buffer_qubit = p(x[1]);
        a.links.buffer_coupler = p(x[2]);
    }
    a
}

fn nested_min(f: &dyn Fn(&[f64]) -> f64, prefix: &[f64], depth: usize, grid: usize) -> Result<(Vec<f64>, f64)> {
    let (lo, hi) = (MIN_PARTICIPATION.ln(), MAX_PARTICIPATION.ln());
    let eval = |x: f64| -> Result<(Vec<f64>, f64)> {
        let mut v = prefix.to_vec();
        v.push(x);
        if v.len() == depth {
            let y = f(&v);
            Ok((v, y))
        } else {
            nested_min(f, &v, depth, grid)
        }
    };
    let (x, _) = minimize_bracketed(&|x| eval(x).map(|r| r.1).unwrap_or(f64::INFINITY), lo, hi, grid, 1e-7)?;
    eval(x)
}

/// Minimizes `objective` over the storage participation (and the buffer
/// participations for a cascade), each searched in log space.
///
/// The objective must return a finite penalty above any attainable error
/// for infeasible configurations.
pub fn optimize_links(
    arch: &ArchitectureConfig,
    objective: &dyn Fn(&ArchitectureConfig) -> f64,
) -> Result<(ArchitectureConfig, f64)> {
    let depth = if arch.kind == ArchitectureKind::Cascade { 3 } else { 1 };
    let grid = if depth == 3 { 13 } else { 41 };
    let f = |x: &[f64]| objective(&set_links(arch, x));
    let (x, y) = nested_min(&f, &[], depth, grid)?;
    Ok((set_links(arch, &x), y))
}

/// Penalized analytic total error; infeasible times score above one.
pub fn analytic_objective(params: &DeviceParams, arch: &ArchitectureConfig, t_m: f64) -> f64 {
    let Ok(m) = AnalyticControlModel::for_arch(params, arch, 0.0) else { return f64::INFINITY };
    match idle_time(params, arch, t_m) {
        Ok(Some(t_i)) => analytic_errors(params, arch, &AnalyticControlModel { t_i, ..m }).total,
        _ => 1.0 - (t_m - 2.0 * m.swap_time()) / t_m,
    }
}

/// Participations minimizing the analytic total error at memory time `t_m`,
/// never worse than the critical-coupling configuration.
pub fn optimize_participation_analytic(
    params: &DeviceParams,
    arch: &ArchitectureConfig,
    t_m: f64,
) -> Result<(ArchitectureConfig, AnalyticErrors)> {
    let obj = |a: &ArchitectureConfig| analytic_objective(params, a, t_m);
    let (mut best, mut y) = optimize_links(arch, &obj)?;
    let crit = Participation::new(critical_participation(params, arch.kind))?;
    let crit_arch = if arch.kind == ArchitectureKind::Cascade {
        optimize_links_with_storage(arch, crit, &obj)?
    } else {
        arch.with_storage_participation(crit)
    };
    let yc = obj(&crit_arch);
    if yc < y {
        best = crit_arch;
        y = yc;
    }
    if y >= 1.0 {
        return Err(infeasible(params, &best, t_m));
    }
    Ok((best, analytic_memory(params, &best, t_m)?))
}

fn optimize_links_with_storage(
    arch: &ArchitectureConfig,
    p: Participation,
    objective: &dyn Fn(&ArchitectureConfig) -> f64,
) -> Result<ArchitectureConfig> {
    let f = |x: &[f64]| objective(&set_links(arch, &[p.value().ln(), x[0], x[1]]));
    let (x, _) = nested_min(&f, &[], 2, 13)?;
    Ok(set_links(arch, &[p.value().ln(), x[0], x[1]]))
}

/// Analytic optimum, optionally refined by a numeric search over the storage
/// participation within a factor of three, then simulated.
pub fn optimize_participation(
    params: &DeviceParams,
    arch: &ArchitectureConfig,
    t_m: f64,
    refine: bool,
    tol: &ToleranceConfig,
) -> Result<(ArchitectureConfig, MemoryResult)> {
    let (mut best, _) = optimize_participation_analytic(params, arch, t_m)?;
    if refine {
        let arch_cal = calibrated(params, &best, tol)?;
        let p0 = best.storage_participation().value();
        let lo = (p0 / 3.0).max(MIN_PARTICIPATION).ln();
        let hi = (p0 * 3.0).min(MAX_PARTICIPATION).ln();
        if hi > lo {
            let obj = |x: f64| memory_error(params, &set_links(&arch_cal, &[x]), t_m, tol).unwrap_or(f64::INFINITY);
            let (x, _) = minimize_bracketed(&obj, lo, hi, 5, 2e-3)?;
            best = set_links(&arch_cal, &[x]);
        }
    }
    let result = simulate_memory(params, &best, t_m, tol)?;
    Ok((best, result))
}
