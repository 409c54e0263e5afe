//! Datasets behind each figure and table.

use cavmem_core::dynamics::{ArchitectureConfig, ArchitectureKind};
use cavmem_core::fidelity::AnalyticControlModel;
use cavmem_core::model::{derived_rates, DeviceParams, Participation, Regime, MAX_PARTICIPATION};
use cavmem_core::numeric::log_grid;
use cavmem_core::protocols::{
    analytic_memory, bell_protocol, chi_opt, critical_participation, gate_error, idle_time, kappa_total,
    max_memory_time, memory_error, optimize_participation_analytic, qft_budget, run_idle, run_swap, simulate_memory,
    transmon_idle_error, MemoryLimit, Swapped,
};
use cavmem_core::Result;
use rayon::prelude::*;
use serde_json::json;

use crate::output::{Artifact, Cell, Table};
use crate::settings::Settings;

const ALL_KINDS: [ArchitectureKind; 3] = [ArchitectureKind::Direct, ArchitectureKind::Coupler, ArchitectureKind::Cascade];
const SWEEP_KAPPAS: [f64; 4] = [0.1, 1.0, 10.0, 100.0];
const IDLE_TIME: f64 = 1e-3;

/// Every third point plus the last when `fast`, so shared points are identical.
pub fn thin<T: Clone>(v: Vec<T>, fast: bool) -> Vec<T> {
    if !fast {
        return v;
    }
    let last = v.len().saturating_sub(1);
    v.into_iter().enumerate().filter(|(i, _)| i % 3 == 0 || *i == last).map(|(_, x)| x).collect()
}

fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    items.par_iter().map(f).collect()
}

fn hz(omega: f64) -> f64 {
    omega / (2.0 * std::f64::consts::PI)
}

/// Induced storage decay per unit participation.
fn purcell_per_p(params: &DeviceParams, kind: ArchitectureKind) -> f64 {
    match kind {
        ArchitectureKind::Direct => params.loss_factor * params.gamma,
        _ => params.loss_factor * params.coupler.gamma,
    }
}

#[derive(Clone, Copy)]
struct SweepPoint {
    kind: ArchitectureKind,
    kappa: f64,
    ratio: f64,
    p: f64,
}

impl SweepPoint {
    fn cells(&self) -> Vec<Cell> {
        vec![self.kind.name().into(), self.kappa.into(), self.ratio.into(), self.p.into()]
    }
}

/// Cavity lifetimes × induced-to-intrinsic decay ratios, where the
/// participation stays within bounds.
fn sweep_points(s: &Settings, kinds: &[ArchitectureKind]) -> Vec<SweepPoint> {
    let ratios = thin(log_grid(0.5, 5.0, 10), s.fast);
    let mut pts = Vec::new();
    for &kind in kinds {
        for &kappa in &SWEEP_KAPPAS {
            for &ratio in &ratios {
                let per_p = purcell_per_p(&s.device, kind);
                let p = if per_p > 0.0 { ratio * kappa / per_p } else { MAX_PARTICIPATION };
                if p <= MAX_PARTICIPATION * (1.0 + 1e-12) {
                    pts.push(SweepPoint { kind, kappa, ratio, p: p.min(MAX_PARTICIPATION) });
                }
            }
        }
    }
    pts
}

fn point_arch(s: &Settings, pt: &SweepPoint) -> Result<(DeviceParams, ArchitectureConfig)> {
    Ok((s.device.with_kappa(pt.kappa), s.arch(pt.kind, Participation::new(pt.p)?)))
}

pub fn rates(s: &Settings) -> Result<Vec<Artifact>> {
    let mut ps = vec![0.0];
    ps.extend(thin(log_grid(1e-4, MAX_PARTICIPATION, 13), s.fast));
    let mut t = Table::new(
        "rates",
        &[
            "p", "chi_hz", "chi_prime_hz", "kerr_a_hz", "g_sb_hz", "g_bs_hz", "kappa_gamma", "kappa_gamma_phi",
            "gamma_delta", "kappa_gamma_coupler",
        ],
    );
    for p in ps {
        let r = derived_rates(&s.device, Participation::new(p)?, Regime::Dispersive);
        t.push(vec![
            p.into(),
            hz(r.chi).into(),
            hz(r.chi_prime).into(),
            hz(r.kerr_a).into(),
            hz(r.g_sb).into(),
            hz(r.g_bs).into(),
            r.kappa_gamma.into(),
            r.kappa_gamma_phi.into(),
            r.gamma_delta.into(),
            r.kappa_gamma_coupler.into(),
        ]);
    }
    Ok(vec![Artifact::Csv(t)])
}

pub fn swap_sweep(s: &Settings) -> Result<Vec<Artifact>> {
    let pts = sweep_points(s, &ALL_KINDS);
    let res = par_map(&pts, |pt| {
        let (params, arch) = point_arch(s, pt)?;
        run_swap(&params, &arch, &s.tolerance)
    })?;
    let mut t = Table::new(
        "swap_sweep",
        &["arch", "kappa", "kappa_gamma_ratio", "p", "numeric_error", "analytic_error", "swap_time", "leakage"],
    );
    for (pt, r) in pts.iter().zip(res) {
        let mut row = pt.cells();
        row.extend([r.numeric.into(), r.analytic.into(), r.duration.into(), r.leakage.into()]);
        t.push(row);
    }
    Ok(vec![Artifact::Csv(t)])
}

pub fn idle(s: &Settings) -> Result<Vec<Artifact>> {
    let pts = sweep_points(s, &[ArchitectureKind::Direct, ArchitectureKind::Coupler]);
    let res = par_map(&pts, |pt| {
        let (params, arch) = point_arch(s, pt)?;
        run_idle(&params, &arch, IDLE_TIME, &s.tolerance)
    })?;
    let mut t = Table::new("idle", &["arch", "kappa", "kappa_gamma_ratio", "p", "t_i", "numeric_error", "analytic_error"]);
    for (pt, r) in pts.iter().zip(res) {
        let mut row = pt.cells();
        row.extend([r.t_i.into(), r.numeric.into(), r.analytic.into()]);
        t.push(row);
    }
    Ok(vec![Artifact::Csv(t)])
}

pub fn memory(s: &Settings) -> Result<Vec<Artifact>> {
    let pts = sweep_points(s, &ALL_KINDS);
    let res = par_map(&pts, |pt| {
        let (params, arch) = point_arch(s, pt)?;
        let swap = AnalyticControlModel::for_arch(&params, &arch, 0.0)?.swap_time();
        simulate_memory(&params, &arch, 2.0 * swap + IDLE_TIME, &s.tolerance)
    })?;
    let mut t = Table::new(
        "memory",
        &[
            "arch", "kappa", "kappa_gamma_ratio", "p", "t_m", "eps_write", "eps_read", "eps_idle", "eps_total",
            "analytic_swap", "analytic_idle", "analytic_total", "leakage",
        ],
    );
    for (pt, r) in pts.iter().zip(res) {
        let mut row = pt.cells();
        row.extend([
            r.t_m.into(),
            r.eps_write.into(),
            r.eps_read.into(),
            r.eps_idle.into(),
            r.eps_total.into(),
            r.analytic.swap.into(),
            r.analytic.idle.into(),
            r.analytic.total.into(),
            r.leakage.into(),
        ]);
        t.push(row);
    }
    Ok(vec![Artifact::Csv(t)])
}

#[derive(Clone, Copy)]
enum StorageVariant {
    Optimized,
    Critical,
    OptimizedNoDephasing,
}

impl StorageVariant {
    fn name(self) -> &'static str {
        match self {
            Self::Optimized => "optimized",
            Self::Critical => "critical",
            Self::OptimizedNoDephasing => "optimized_kappa_phi_0",
        }
    }
}

fn coupler_min_time(s: &Settings, params: &DeviceParams) -> Result<f64> {
    let arch = s.arch(ArchitectureKind::Coupler, Participation::max());
    Ok(2.0 * AnalyticControlModel::for_arch(params, &arch, 0.0)?.swap_time())
}

pub fn storage(s: &Settings) -> Result<Vec<Artifact>> {
    let fast_params = s.device.with_kappa(100.0);
    let t_min = coupler_min_time(s, &fast_params)?;
    let mut tasks: Vec<(&str, f64, StorageVariant, f64)> = Vec::new();
    for t_m in thin(log_grid(t_min, 1e-3, 13), s.fast) {
        tasks.push(("a", 100.0, StorageVariant::Optimized, t_m));
    }
    for variant in [StorageVariant::Critical, StorageVariant::Optimized, StorageVariant::OptimizedNoDephasing] {
        for t_m in thin(log_grid(1e-6, 1e-1, 16), s.fast) {
            tasks.push(("b", 1.0, variant, t_m));
        }
    }
    let res = par_map(&tasks, |&(_, kappa, variant, t_m)| -> Result<Option<Vec<Cell>>> {
        let mut params = s.device.with_kappa(kappa);
        if let StorageVariant::OptimizedNoDephasing = variant {
            params = params.with_kappa_phi(0.0);
        }
        let base = s.arch(ArchitectureKind::Coupler, Participation::max());
        let arch = match variant {
            StorageVariant::Critical => {
                let p = critical_participation(&params, ArchitectureKind::Coupler);
                let a = base.with_storage_participation(Participation::new(p)?);
                if idle_time(&params, &a, t_m)?.is_none() {
                    return Ok(None);
                }
                a
            }
            _ => optimize_participation_analytic(&params, &base, t_m)?.0,
        };
        let analytic = analytic_memory(&params, &arch, t_m)?;
        let numeric = memory_error(&params, &arch, t_m, &s.tolerance)?;
        let tmon = transmon_idle_error(&params, s.truncations.transmon, t_m, &s.tolerance)?;
        let model = AnalyticControlModel::new(s.alpha, s.photon_number, 0.0, 0.0, 0.0, t_m)?;
        Ok(Some(vec![
            arch.storage_participation().value().into(),
            numeric.into(),
            analytic.total.into(),
            tmon.into(),
            hz(chi_opt(&model, params.kerr)).into(),
        ]))
    })?;
    let mut t = Table::new(
        "storage",
        &["panel", "kappa", "variant", "t_m", "p", "eps_total", "analytic_total", "transmon_idle", "dispersive_chi_opt_hz"],
    );
    for (&(panel, kappa, variant, t_m), cells) in tasks.iter().zip(res) {
        if let Some(cells) = cells {
            let mut row: Vec<Cell> = vec![panel.into(), kappa.into(), variant.name().into(), t_m.into()];
            row.extend(cells);
            t.push(row);
        }
    }
    Ok(vec![Artifact::Csv(t)])
}

pub fn bell(s: &Settings) -> Result<Vec<Artifact>> {
    let mut tasks: Vec<(&str, f64, Swapped, f64)> = Vec::new();
    for swapped in [Swapped::None, Swapped::One, Swapped::Both] {
        for t_m in thin(log_grid(1e-6, 1e-3, 10), s.fast) {
            tasks.push(("b", 100.0, swapped, t_m));
        }
    }
    for t_m in thin(log_grid(1e-6, 1e-2, 13), s.fast) {
        tasks.push(("c", 1.0, Swapped::Both, t_m));
    }
    let res = par_map(&tasks, |&(_, kappa, swapped, t_m)| {
        let params = s.device.with_kappa(kappa);
        let base = s.arch(ArchitectureKind::Coupler, Participation::max());
        let arch = optimize_participation_analytic(&params, &base, t_m)?.0;
        let r = bell_protocol(&params, &arch, t_m, swapped, &s.tolerance)?;
        let p = if swapped == Swapped::None { Cell::Empty } else { arch.storage_participation().value().into() };
        Ok((p, r))
    })?;
    let mut t = Table::new("bell", &["panel", "kappa", "swapped", "t_m", "p", "fidelity", "infidelity", "concurrence"]);
    for (&(panel, kappa, swapped, t_m), (p, r)) in tasks.iter().zip(res) {
        let name = match swapped {
            Swapped::None => "none",
            Swapped::One => "one",
            Swapped::Both => "both",
        };
        t.push(vec![
            panel.into(),
            kappa.into(),
            name.into(),
            t_m.into(),
            p,
            r.fidelity.into(),
            (1.0 - r.fidelity).into(),
            r.concurrence.into(),
        ]);
    }
    Ok(vec![Artifact::Csv(t)])
}

pub fn qft(s: &Settings, k_max: usize) -> Result<Vec<Artifact>> {
    let q = &s.qft;
    let fixed = qft_budget(&s.device, q, k_max, false)?;
    let opt = qft_budget(&s.device, q, k_max, true)?;
    let mut per = Table::new("qft_qubits", &["j", "t_j", "eps_tmon", "eps_mem", "eps_mem_opt", "p_opt", "t_bs_opt"]);
    for (a, b) in fixed.qubits.iter().zip(&opt.qubits) {
        per.push(vec![
            a.j.into(),
            a.t_j.into(),
            a.eps_tmon.into(),
            a.eps_mem.into(),
            b.eps_mem.into(),
            b.participation.into(),
            b.t_bs.into(),
        ]);
    }
    let mut cum = Table::new("qft_cumulative", &["k", "eps_m_tmon", "eps_m", "eps_m_opt", "eps_q"]);
    let (mut tm, mut mm, mut mo) = (0.0, 0.0, 0.0);
    let (mut fail_mem, mut fail_tmon) = (None, None);
    for (a, b) in fixed.qubits.iter().zip(&opt.qubits) {
        tm += a.eps_tmon;
        mm += a.eps_mem;
        mo += b.eps_mem;
        if mm >= 0.01 && fail_mem.is_none() {
            fail_mem = Some(a.j);
        }
        if tm >= 0.01 && fail_tmon.is_none() {
            fail_tmon = Some(a.j);
        }
        cum.push(vec![a.j.into(), tm.into(), mm.into(), mo.into(), gate_error(a.j, q.eps_1q, q.eps_2q).into()]);
    }
    let params = s.device.with_kappa(1.0 / q.cavity_t1);
    let kt = kappa_total(&params, Participation::new(q.participation)?);
    let k3 = &fixed.qubits[0];
    let summary = json!({
        "memory_constant": 4.0 * q.swap_error - 2.0 / 3.0 * kt * q.swap_time,
        "memory_linear": kt * q.gate_time / 3.0,
        "transmon_quadratic": (2.0 * s.device.gamma + s.device.gamma_phi) * q.gate_time / 3.0,
        "gate_quadratic": q.eps_2q,
        "gate_linear": q.eps_2q - q.eps_1q,
        "kappa_total": kt,
        "k3_memory": k3.eps_mem,
        "k3_transmon": k3.eps_tmon,
        "first_k_memory_above_1_percent": fail_mem,
        "first_k_transmon_above_1_percent": fail_tmon,
    });
    Ok(vec![Artifact::Csv(per), Artifact::Csv(cum), Artifact::Json("qft_summary".into(), summary)])
}

pub fn limits(s: &Settings) -> Result<Vec<Artifact>> {
    let mut cells = Vec::new();
    for kind in [ArchitectureKind::Coupler, ArchitectureKind::Cascade] {
        for dephasing in [true, false] {
            for target in [1e-3, 5e-3, 1e-2] {
                cells.push((kind, dephasing, target));
            }
        }
    }
    let res = par_map(&cells, |&(kind, dephasing, target)| max_memory_time(&s.device, kind, target, dephasing))?;
    let mut t = Table::new(
        "limits",
        &[
            "arch", "kappa_phi_on", "target", "attainable", "t_m_max", "lifetime", "p", "p_bq", "p_bc", "eps_ef", "min_error",
        ],
    );
    let mut entries = Vec::new();
    for (&(kind, dephasing, target), r) in cells.iter().zip(res) {
        let mut row: Vec<Cell> = vec![kind.name().into(), dephasing.into(), target.into()];
        match r {
            MemoryLimit::Attainable { t_m_max, lifetime, links, eps_ef } => {
                let buffers: [Cell; 2] = if kind == ArchitectureKind::Cascade {
                    [links.buffer_qubit.value().into(), links.buffer_coupler.value().into()]
                } else {
                    [Cell::Empty, Cell::Empty]
                };
                let [bq, bc] = buffers;
                row.extend([
                    true.into(),
                    t_m_max.into(),
                    lifetime.into(),
                    links.cavity_coupler.value().into(),
                    bq,
                    bc,
                    eps_ef.into(),
                    Cell::Empty,
                ]);
            }
            MemoryLimit::Unattainable { min_error, eps_ef } => {
                row.extend([
                    false.into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    eps_ef.into(),
                    min_error.into(),
                ]);
            }
        }
        entries.push(json!({ "arch": kind.name(), "kappa_phi_on": dephasing, "target": target, "result": r }));
        t.push(row);
    }
    Ok(vec![Artifact::Csv(t), Artifact::Json("limits".into(), json!(entries))])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thinning_keeps_shared_points_and_ends() {
        let full = log_grid(0.5, 5.0, 10);
        let fast = thin(full.clone(), true);
        assert_eq!(fast, vec![full[0], full[3], full[6], full[9]]);
        assert_eq!(thin(full.clone(), false), full);
    }
}
