//! The two-function family of κ-Poincaré representations: C² − A² = m²c²
//! and the requirement c²(1 + C/mc) → k/M.

use serde::Serialize;

use super::mass_of;
use crate::error::{Error, Result};
use crate::report::{fmt_residual, CheckReport, Status};

/// C = −mc − Δ with A ≥ 0 fixed by C² − A² = m²c².
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CFamily {
    pub m: f64,
    pub c: f64,
    pub delta: f64,
    pub a: f64,
    pub cc: f64,
}

impl CFamily {
    pub fn lower_branch(m: f64, c: f64, delta: f64) -> Result<Self> {
        if !(m > 0.0 && c > 0.0 && delta >= 0.0) {
            return Err(Error::Precondition(format!("need m, c > 0 and Δ >= 0, got m={m} c={c} Δ={delta}")));
        }
        // A² = C² − m²c² = Δ(2mc + Δ)
        let a = (delta * (2.0 * m * c + delta)).sqrt();
        Ok(Self { m, c, delta, a, cc: -m * c - delta })
    }

    /// |C² − A² − m²c²| relative to C².
    pub fn constraint_defect(&self) -> f64 {
        let mc = self.m * self.c;
        ((self.cc * self.cc - self.a * self.a) - mc * mc).abs() / (self.cc * self.cc)
    }

    /// c²(1 + C/mc), which equals −cΔ/m on this branch.
    pub fn limit_quantity(&self) -> f64 {
        -self.c * self.delta / self.m
    }

    /// A = 0 makes ln((p₀ + C)/A) singular.
    pub fn is_boundary(&self) -> bool {
        self.delta == 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyRow {
    pub c: f64,
    pub m: f64,
    pub delta: f64,
    pub quantity: f64,
    pub gap: f64,
}

/// Masses tried at each c when k > 0, where nothing ties m to c.
pub const POSITIVE_K_MASSES: [f64; 4] = [1e-3, 1e-1, 1.0, 10.0];

/// k > 0: every member with C ≤ −mc keeps |c²(1 + C/mc) − k/M| ≥ k/M, while
/// C ≥ mc gives c²(1 + C/mc) ≥ 2c². k < 0: Δ(c) = |k|m/(Mc) with the real
/// mass schedule reaches k/M.
pub fn general_family_scan(mass: f64, k: f64, grid: &[f64], deltas: &[f64]) -> Result<CheckReport> {
    if !(mass > 0.0) || k == 0.0 || grid.is_empty() {
        return Err(Error::Precondition(format!("need M > 0, k != 0 and a nonempty grid; got M={mass}, k={k}")));
    }
    let target = k / mass;
    let mut rows = Vec::new();
    let mut boundary = 0usize;
    let mut worst_constraint = 0f64;
    let report = if k > 0.0 {
        let mut min_upper = f64::INFINITY;
        for &c in grid {
            for &mr in &POSITIVE_K_MASSES {
                let m = mr * mass;
                for &d in deltas {
                    let f = CFamily::lower_branch(m, c, d)?;
                    worst_constraint = worst_constraint.max(f.constraint_defect());
                    boundary += f.is_boundary() as usize;
                    let q = f.limit_quantity();
                    rows.push(FamilyRow { c, m, delta: d, quantity: q, gap: (q - target).abs() });
                    // C = mc + Δ
                    min_upper = min_upper.min(2.0 * c * c + c * d / m);
                }
            }
        }
        let min_gap = rows.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
        let ok = min_gap >= target * (1.0 - 1e-12) && worst_constraint < 1e-12;
        CheckReport::new("contract.family", Status::from_bool(ok), fmt_residual(min_gap))
            .artifact("min_gap", min_gap)
            .artifact("gap_bound", target)
            .artifact("upper_branch_min_quantity", min_upper)
    } else {
        for &c in grid {
            let m = mass_of(mass, k, c)?;
            let d = k.abs() * m / (mass * c);
            let f = CFamily::lower_branch(m, c, d)?;
            worst_constraint = worst_constraint.max(f.constraint_defect());
            let q = f.limit_quantity();
            rows.push(FamilyRow { c, m, delta: d, quantity: q, gap: (q - target).abs() });
        }
        for &d in deltas.iter().filter(|d| **d == 0.0) {
            boundary += CFamily::lower_branch(1.0, 1.0, d)?.is_boundary() as usize;
        }
        let last = rows.last().unwrap().gap;
        let ok = last < 1e-6 && worst_constraint < 1e-12;
        CheckReport::new("contract.family", Status::from_bool(ok), fmt_residual(last)).artifact("final_gap", last)
    };
    Ok(report
        .param("M", mass)
        .param("k", k)
        .artifact("target", target)
        .artifact("boundary_members", boundary)
        .artifact("constraint_defect", worst_constraint)
        .artifact("rows", rows))
}
