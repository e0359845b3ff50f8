//! Data series behind the bound plots, emitted as CSV text.

use crate::bounds;
use crate::error::Result;
use crate::format::fmt_g;

/// Domain sizes of the regret-versus-evaluations curves.
pub const FIGURE1_N: [f64; 4] = [1e5, 1e10, 1e15, 1e20];

/// Target normreg values of the required-evaluations curves.
pub const FIGURE2_TARGETS: [f64; 5] = [0.5, 0.6, 0.7, 0.8, 0.9];

/// `10^(k/4)` for the given range of quarter-decade exponents.
fn quarter_decades(from: i32, to: i32) -> impl Iterator<Item = f64> {
    (from..=to).map(|k| 10f64.powf(k as f64 / 4.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Row {
    pub n: f64,
    pub t: f64,
    pub bound: f64,
}

/// Bound against `T ∈ {500, quarter decades, N}` for each `N`.
pub fn figure1() -> Result<Vec<Figure1Row>> {
    let mut rows = Vec::new();
    for n in FIGURE1_N {
        let mut ts = vec![bounds::MIN_HORIZON];
        ts.extend(quarter_decades(11, 80).filter(|&t| t > bounds::MIN_HORIZON && t < n * (1.0 - 1e-12)));
        ts.push(n);
        for t in ts {
            rows.push(Figure1Row { n, t, bound: bounds::cor1_normreg_bound(n, t)? });
        }
    }
    Ok(rows)
}

pub fn figure1_csv(rows: &[Figure1Row]) -> String {
    let mut s = String::from("n,t,bound\n");
    for r in rows {
        s.push_str(&format!("{},{},{}\n", fmt_g(r.n), fmt_g(r.t), fmt_g(r.bound)));
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure2Row {
    pub n: f64,
    pub target_normreg: f64,
    /// `None` when even `T = N` does not reach the target.
    pub required_t_bisection: Option<u64>,
    pub required_t_envelope: f64,
}

/// Required evaluations for each target normreg, `N` from `10³` to `10¹⁸`
/// in quarter decades.
pub fn figure2() -> Result<Vec<Figure2Row>> {
    let mut rows = Vec::new();
    for target in FIGURE2_TARGETS {
        for n in quarter_decades(12, 72) {
            let n = n.round();
            rows.push(Figure2Row {
                n,
                target_normreg: target,
                required_t_bisection: bounds::required_t_bisection(n, target)?,
                required_t_envelope: bounds::required_t_upper(n, target)?,
            });
        }
    }
    Ok(rows)
}

pub fn figure2_csv(rows: &[Figure2Row]) -> String {
    let mut s = String::from("n,target_normreg,required_t_bisection,required_t_envelope\n");
    for r in rows {
        let t = r.required_t_bisection.map(|t| fmt_g(t as f64)).unwrap_or_default();
        s.push_str(&format!(
            "{},{},{},{}\n",
            fmt_g(r.n),
            fmt_g(r.target_normreg),
            t,
            fmt_g(r.required_t_envelope)
        ));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Thm2,
    Grunewalder,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Thm2 => "thm2",
            Variant::Grunewalder => "grunewalder",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure3Row {
    /// `"dim"` sweeps `D` at fixed `T`; `"horizon"` sweeps `T` at fixed `D`.
    pub panel: &'static str,
    pub variant: Variant,
    pub d: u32,
    pub t: f64,
    pub lk: f64,
    pub value: f64,
}

/// `L_k` from `10` to `10¹²` in quarter decades.
pub fn figure3_lipschitz_sweep() -> Vec<f64> {
    quarter_decades(4, 48).collect()
}

/// Both continuous-bound panels (`σ = 1`). Rows where the grid bound's
/// preconditions fail are omitted.
pub fn figure3() -> Result<Vec<Figure3Row>> {
    let mut rows = Vec::new();
    let mut push = |panel: &'static str, d: u32, t: f64| -> Result<()> {
        for lk in figure3_lipschitz_sweep() {
            if let Ok(v) = bounds::thm2_continuous_bound(d, t, lk, 1.0) {
                rows.push(Figure3Row { panel, variant: Variant::Thm2, d, t, lk, value: v });
            }
            rows.push(Figure3Row {
                panel,
                variant: Variant::Grunewalder,
                d,
                t,
                lk,
                value: bounds::grunewalder_bound(d, t, lk)?,
            });
        }
        Ok(())
    };
    for d in 1..=10 {
        push("dim", d, 1e5)?;
    }
    for e in 1..=10 {
        push("horizon", 5, 10f64.powi(e))?;
    }
    Ok(rows)
}

pub fn figure3_csv(rows: &[Figure3Row]) -> String {
    let mut s = String::from("panel,variant,d,t,lk,value\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.panel,
            r.variant.name(),
            r.d,
            fmt_g(r.t),
            fmt_g(r.lk),
            fmt_g(r.value)
        ));
    }
    s
}
