//! Central differences with Richardson extrapolation.

use crate::error::{LabError, Result};

/// Extrapolated derivative estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    /// Difference between the two finest tableau entries.
    pub error_estimate: f64,
    pub step: f64,
    /// Formal truncation order of `value`.
    pub order: u32,
}

/// Derivative of `f` at `x` from central differences with steps
/// `h, h/2, ..., h/2^levels`, combined by a Richardson tableau.
pub fn central_derivative<F>(mut f: F, x: f64, h: f64, levels: usize) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(h > 0.0) || x + h == x {
        return Err(LabError::StepUnderflow(h));
    }
    let mut diffs = Vec::with_capacity(levels + 1);
    let mut step = h;
    for _ in 0..=levels {
        let d = (f(x + step)? - f(x - step)?) / (2.0 * step);
        diffs.push(d);
        step *= 0.5;
    }
    // Tableau: T[i][j] eliminates the h^(2j) term.
    let mut row = diffs.clone();
    let mut prev_best = row[row.len() - 1];
    let mut factor = 4.0;
    for _ in 1..=levels {
        prev_best = row[row.len() - 1];
        row = row
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        factor *= 4.0;
    }
    let value = row[0];
    Ok(Derivative {
        value,
        error_estimate: (value - prev_best).abs(),
        step: h,
        order: 2 * (levels as u32 + 1),
    })
}

/// Second derivative by the three-point stencil, Richardson-extrapolated.
pub fn second_derivative<F>(mut f: F, x: f64, h: f64, levels: usize) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(h > 0.0) || x + h == x {
        return Err(LabError::StepUnderflow(h));
    }
    let f0 = f(x)?;
    let mut row = Vec::with_capacity(levels + 1);
    let mut step = h;
    for _ in 0..=levels {
        row.push((f(x + step)? - 2.0 * f0 + f(x - step)?) / (step * step));
        step *= 0.5;
    }
    let mut prev_best = row[row.len() - 1];
    let mut factor = 4.0;
    for _ in 1..=levels {
        prev_best = row[row.len() - 1];
        row = row
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        factor *= 4.0;
    }
    Ok(Derivative {
        value: row[0],
        error_estimate: (row[0] - prev_best).abs(),
        step: h,
        order: 2 * (levels as u32 + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_exp() {
        let d = central_derivative(|x: f64| Ok(x.exp()), 0.3, 1e-2, 2).unwrap();
        assert!((d.value - 0.3_f64.exp()).abs() < 1e-12);
        assert_eq!(d.order, 6);
    }

    #[test]
    fn richardson_raises_observed_order() {
        let exact = 1.0_f64.cos();
        let err = |h: f64| (central_derivative(|x: f64| Ok(x.sin()), 1.0, h, 1).unwrap().value - exact).abs();
        let order = (err(0.2) / err(0.1)).log2();
        assert!(order > 3.7, "observed order {order}");
    }

    #[test]
    fn zero_step_is_rejected() {
        assert!(central_derivative(|x: f64| Ok(x), 1.0, 0.0, 1).is_err());
    }
}
