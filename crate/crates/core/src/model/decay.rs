use crate::error::{invalid, Result};

/// Stretched exponential `xi_b(x) = exp(-b x^p)` with `b > 0`, `0 < p < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFunction {
    b: f64,
    p: f64,
}

impl Default for DecayFunction {
    fn default() -> Self {
        Self { b: 1.0, p: 0.5 }
    }
}

impl DecayFunction {
    pub fn new(b: f64, p: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(invalid(format!("decay rate b must be positive, got {b}")));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid(format!(
                "stretch exponent p must lie in (0, 1), got {p}"
            )));
        }
        Ok(Self { b, p })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Same stretch exponent, different rate.
    pub fn with_rate(&self, b: f64) -> Result<Self> {
        Self::new(b, self.p)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (-self.b * x.powf(self.p)).exp()
    }

    /// `kappa * sum_{n >= 0} (1 + n)^{d-1} xi_b(n)`, summed until the terms
    /// drop below `1e-18` of the running total.
    pub fn shell_constant(&self, kappa: f64, dim: u32) -> f64 {
        let mut total = 0.0;
        let mut n = 0u64;
        loop {
            let term = (1.0 + n as f64).powi(dim as i32 - 1) * self.eval(n as f64);
            total += term;
            if n > 0 && term < 1e-18 * total {
                break;
            }
            n += 1;
        }
        kappa * total
    }
}
