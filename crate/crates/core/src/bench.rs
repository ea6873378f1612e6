//! Wall-clock timing of extension computation on generated families.

use std::time::{Duration, Instant};

use crate::engine::{Engine, Parallelism};
use crate::gen::{generate, FamilySpec};
use crate::theory::Theory;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub spec: FamilySpec,
    pub median: Duration,
}

impl BenchRow {
    pub fn median_ms(&self) -> f64 {
        self.median.as_secs_f64() * 1e3
    }
}

/// Median over `reps` runs (at least 5) after one untimed warm-up run. Each
/// run starts from a fresh engine, so no reduct is reused across runs.
pub fn median_runtime(t: &Theory, reps: usize, p: Parallelism) -> Duration {
    let run = || {
        let t = t.clone();
        let start = Instant::now();
        let engine = Engine::new(t).with_parallelism(p);
        let fp = engine.fixpoint().expect("generated theories have no cycles");
        let took = start.elapsed();
        std::hint::black_box(fp);
        took
    };
    run();
    let mut times: Vec<Duration> = (0..reps.max(5)).map(|_| run()).collect();
    times.sort();
    times[times.len() / 2]
}

pub fn run(specs: &[FamilySpec], reps: usize, p: Parallelism) -> Vec<BenchRow> {
    specs
        .iter()
        .map(|s| BenchRow {
            spec: *s,
            median: median_runtime(&generate(s), reps, p),
        })
        .collect()
}

pub fn csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("family,n,r,m,k,median_ms\n");
    for row in rows {
        let s = &row.spec;
        out.push_str(&format!(
            "{},{},{},{},{},{:.3}\n",
            s.family,
            s.n,
            s.r,
            s.m,
            s.k,
            row.median_ms()
        ));
    }
    out
}

/// Least-squares slope of `ln y` against `ln x`. `None` with fewer than two
/// distinct sizes or a non-positive value.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Slope of the median against the rule count.
pub fn rule_slope(rows: &[BenchRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.spec.r.max(r.spec.n) as f64, r.median.as_secs_f64()))
        .collect();
    loglog_slope(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::Family;

    #[test]
    fn slope_of_power_laws() {
        let lin: Vec<_> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x| (x, 3.0 * x)).collect();
        assert!((loglog_slope(&lin).unwrap() - 1.0).abs() < 1e-9);
        let sq: Vec<_> = [1.0, 2.0, 4.0].iter().map(|&x| (x, x * x)).collect();
        assert!((loglog_slope(&sq).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(loglog_slope(&[(1.0, 1.0)]), None);
        assert_eq!(loglog_slope(&[(1.0, 0.0), (2.0, 1.0)]), None);
    }

    #[test]
    fn csv_columns() {
        let spec = FamilySpec::new(Family::ChainCtd, 20, 20, 0, 0, 1);
        let rows = run(&[spec], 5, Parallelism::Sequential);
        let text = csv(&rows);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("family,n,r,m,k,median_ms"));
        assert!(lines.next().unwrap().starts_with("chain-ctd,20,20,0,0,"));
    }
}
