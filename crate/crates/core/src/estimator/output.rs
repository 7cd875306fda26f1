//! CSV and JSON records of estimated moments.
//!
//! Moment CSV columns, in order: `k,re,im,stderr_re,stderr_im`.
//! Phase-statistics CSV columns: `method,mean_phase,mean_phase_err,delta_phi,sigma_bp,sigma_h`.

use serde::{Deserialize, Serialize};

use crate::estimator::moments::MomentEstimate;
use crate::estimator::phase::PhaseStats;

pub const MOMENT_CSV_HEADER: &str = "k,re,im,stderr_re,stderr_im";
pub const PHASE_CSV_HEADER: &str = "method,mean_phase,mean_phase_err,delta_phi,sigma_bp,sigma_h";

/// Flat record of one moment estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentRecord {
    pub k: i32,
    pub re: f64,
    pub im: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
}

impl From<&MomentEstimate> for MomentRecord {
    fn from(e: &MomentEstimate) -> Self {
        Self {
            k: e.k,
            re: e.value.re,
            im: e.value.im,
            stderr_re: e.stderr_re,
            stderr_im: e.stderr_im,
        }
    }
}

pub fn moments_csv(estimates: &[MomentEstimate]) -> String {
    let mut out = String::from(MOMENT_CSV_HEADER);
    out.push('\n');
    for e in estimates {
        let r = MomentRecord::from(e);
        out.push_str(&format!("{},{},{},{},{}\n", r.k, r.re, r.im, r.stderr_re, r.stderr_im));
    }
    out
}

pub fn moments_json(estimates: &[MomentEstimate]) -> serde_json::Result<String> {
    let records: Vec<MomentRecord> = estimates.iter().map(MomentRecord::from).collect();
    serde_json::to_string_pretty(&records)
}

pub fn phase_stats_csv(rows: &[(&str, PhaseStats)]) -> String {
    let mut out = String::from(PHASE_CSV_HEADER);
    out.push('\n');
    for (method, s) in rows {
        out.push_str(&format!(
            "{method},{},{},{},{},{}\n",
            s.mean_phase, s.mean_phase_err, s.delta_phi, s.sigma_bp, s.sigma_h
        ));
    }
    out
}
