//! Sign/log-magnitude arithmetic for long products of eigenvalue differences.
//!
//! Products like ∏ (ω−μ_k)/(ω−λ_k) are evaluated as a running sum of
//! log-magnitudes together with an explicit sign, so clustered spectra or
//! large N cannot overflow or underflow the accumulator.

/// A nonzero real number stored as sign · exp(log_abs). Zero factors are
/// tracked explicitly so callers can detect degenerate products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LogSign {
    log_abs: f64,
    sign: i8,
}

impl LogSign {
    pub fn one() -> Self {
        LogSign {
            log_abs: 0.0,
            sign: 1,
        }
    }

    /// Multiply by a plain factor.
    pub fn mul(mut self, factor: f64) -> Self {
        if factor == 0.0 || self.sign == 0 {
            self.sign = 0;
            return self;
        }
        self.log_abs += factor.abs().ln();
        if factor < 0.0 {
            self.sign = -self.sign;
        }
        self
    }

    /// Divide by a plain factor. Division by zero poisons the value to NaN.
    pub fn div(mut self, factor: f64) -> Self {
        if factor == 0.0 {
            self.log_abs = f64::NAN;
            return self;
        }
        if self.sign == 0 {
            return self;
        }
        self.log_abs -= factor.abs().ln();
        if factor < 0.0 {
            self.sign = -self.sign;
        }
        self
    }

    #[cfg(test)]
    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_abs.exp()
        }
    }
}

/// ∏ (x−num_k)/(x−den_k) over all indices, in log-sign form.
pub(crate) fn ratio_product(x: f64, numerators: &[f64], denominators: &[f64]) -> LogSign {
    debug_assert_eq!(numerators.len(), denominators.len());
    let mut acc = LogSign::one();
    for (&n, &d) in numerators.iter().zip(denominators) {
        acc = acc.mul(x - n).div(x - d);
    }
    acc
}

/// Same as [`ratio_product`] but omitting index `skip` from both sequences.
pub(crate) fn ratio_product_skipping(
    x: f64,
    numerators: &[f64],
    denominators: &[f64],
    skip: usize,
) -> LogSign {
    let mut acc = LogSign::one();
    for (k, (&n, &d)) in numerators.iter().zip(denominators).enumerate() {
        if k == skip {
            continue;
        }
        acc = acc.mul(x - n).div(x - d);
    }
    acc
}
