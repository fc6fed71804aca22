//! Browser bindings for three verifiers: the q-Fibonacci residue check, the
//! truncated `sqrt(1+x)` series table and normalized Frobenius traces.
//!
//! The `*_view` functions are plain Rust and return serializable data; the
//! `#[wasm_bindgen]` wrappers only turn that into JSON strings.

use adele_lab::finite_log::{sqrt2_report, SqrtSeriesRecord};
use adele_lab::frobenius::{ap_trace, CurveParams};
use adele_lab::qfib::{verify_af, AfRecord};
use adele_lab::{CongruenceReport, PrimeWindow};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest `max_p` accepted by the linear-time views.
pub const AF_LIMIT: u64 = 200_000;
/// Largest `max_p` for the views that cost `O(p)` per prime.
pub const QUADRATIC_LIMIT: u64 = 20_000;
pub const HISTOGRAM_BINS: usize = 20;

fn window(min_p: u64, max_p: u64, limit: u64) -> Result<PrimeWindow, String> {
    if max_p > limit {
        return Err(format!("max_p is capped at {limit} in the browser"));
    }
    PrimeWindow::new(min_p, max_p).map_err(|e| e.to_string())
}

pub fn af_view(q: i64, min_p: u64, max_p: u64) -> Result<CongruenceReport<AfRecord>, String> {
    verify_af(q, window(min_p, max_p, AF_LIMIT)?, 1).map_err(|e| e.to_string())
}

pub fn sqrt2_view(max_p: u64) -> Result<CongruenceReport<SqrtSeriesRecord>, String> {
    Ok(sqrt2_report(window(2, max_p, QUADRATIC_LIMIT)?, 1))
}

#[derive(Debug, Clone, Serialize)]
pub struct TracePoint {
    pub p: u64,
    pub ap: i64,
    /// `a_p / (2 sqrt p)`, in `[-1, 1]`.
    pub x: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceView {
    pub a: i64,
    pub b: i64,
    pub points: Vec<TracePoint>,
    pub bad_primes: Vec<u64>,
    /// Counts of `x` over equal-width bins of `[-1, 1]`.
    pub histogram: Vec<u32>,
}

pub fn trace_view(a: i64, b: i64, max_p: u64) -> Result<TraceView, String> {
    let curve = CurveParams::new(a, b).map_err(|e| e.to_string())?;
    let primes = window(3, max_p, QUADRATIC_LIMIT)?.primes();
    let mut view = TraceView {
        a,
        b,
        points: Vec::new(),
        bad_primes: Vec::new(),
        histogram: vec![0; HISTOGRAM_BINS],
    };
    for p in primes {
        match ap_trace(curve, p).map_err(|e| e.to_string())? {
            Some(ap) => {
                let x = ap as f64 / (2.0 * (p as f64).sqrt());
                let bin = (((x + 1.0) / 2.0) * HISTOGRAM_BINS as f64) as usize;
                view.histogram[bin.min(HISTOGRAM_BINS - 1)] += 1;
                view.points.push(TracePoint { p, ap, x });
            }
            None => view.bad_primes.push(p),
        }
    }
    Ok(view)
}

fn to_json<T: Serialize>(value: Result<T, String>) -> Result<String, String> {
    serde_json::to_string(&value?).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = verifyAf)]
pub fn verify_af_json(q: i64, min_p: u64, max_p: u64) -> Result<String, String> {
    to_json(af_view(q, min_p, max_p))
}

#[wasm_bindgen(js_name = sqrt2Table)]
pub fn sqrt2_json(max_p: u64) -> Result<String, String> {
    to_json(sqrt2_view(max_p))
}

#[wasm_bindgen(js_name = traces)]
pub fn traces_json(a: i64, b: i64, max_p: u64) -> Result<String, String> {
    to_json(trace_view(a, b, max_p))
}
