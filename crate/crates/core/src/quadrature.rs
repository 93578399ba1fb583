//! Adaptive Gauss–Kronrod quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// 15-point Kronrod nodes on [-1, 1] (non-negative half, centre last) with the
// embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral estimate over one panel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub err: f64,
    /// Kronrod estimate of `∫|f|`, used for rounding bounds.
    pub abs_value: f64,
}

/// Applies the 7/15 pair to `[a, b]`; the error is `|K15 − G7|`.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_value = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        kronrod += WGK[j] * (f1 + f2);
        abs_value += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Panel {
        a,
        b,
        value: kronrod * h,
        err: ((kronrod - gauss) * h).abs(),
        abs_value: abs_value * h.abs(),
    }
}

/// Result of an adaptive integration.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the panel error estimates plus a rounding allowance.
    pub err: f64,
    pub panels: usize,
    pub converged: bool,
}

struct Queued(Panel);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        // largest error first; ties broken by position for determinism
        self.0
            .err
            .total_cmp(&other.0.err)
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

/// Globally adaptive bisection: the panel with the largest error estimate is
/// split until the total estimate is below `tol` or `max_panels` is reached.
///
/// Panel values are summed in order of position, so the result does not
/// depend on the refinement history.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> Quadrature {
    let mut heap = BinaryHeap::new();
    let first = gauss_kronrod_15(&f, a, b);
    let mut total_err = first.err;
    heap.push(Queued(first));
    while total_err > tol && heap.len() < max_panels {
        let Queued(worst) = heap.pop().unwrap();
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(Queued(worst));
            break;
        }
        let left = gauss_kronrod_15(&f, worst.a, mid);
        let right = gauss_kronrod_15(&f, mid, worst.b);
        total_err += left.err + right.err - worst.err;
        heap.push(Queued(left));
        heap.push(Queued(right));
    }
    let mut panels: Vec<Panel> = heap.into_iter().map(|q| q.0).collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let err: f64 = panels.iter().map(|p| p.err).sum();
    let abs_value: f64 = panels.iter().map(|p| p.abs_value).sum();
    Quadrature {
        value,
        err: err + 64.0 * f64::EPSILON * abs_value,
        panels: panels.len(),
        converged: err <= tol,
    }
}
