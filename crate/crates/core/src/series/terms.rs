use rug::Complex;

use crate::error::{Error, Result};
use crate::numerics::ComplexValue;

/// Running-ratio generator for `sum_k prod (a_i)_k / (k! prod (b_j)_k) z^k`.
///
/// Each step costs one complex multiply per parameter and one division;
/// Pochhammer products are never recomputed.
pub(crate) struct TermStream {
    uppers: Vec<Complex>,
    lowers: Vec<Complex>,
    lower_labels: Vec<String>,
    argument: Complex,
    k: u64,
    term: Complex,
    prec: u32,
}

impl TermStream {
    pub(crate) fn new(
        uppers: &[ComplexValue],
        lowers: &[ComplexValue],
        argument: &ComplexValue,
        prec: u32,
    ) -> Self {
        let lift = |x: &ComplexValue| Complex::with_val(prec, x.inner());
        TermStream {
            uppers: uppers.iter().map(lift).collect(),
            lowers: lowers.iter().map(lift).collect(),
            lower_labels: lowers.iter().map(|b| b.to_decimal(12)).collect(),
            argument: lift(argument),
            k: 0,
            term: Complex::with_val(prec, 1),
            prec,
        }
    }

    /// Index of the term the next call to `next_term` returns.
    pub(crate) fn index(&self) -> u64 {
        self.k
    }

    /// Returns term `k` and advances to `k + 1`. The ratio leading to a term
    /// is only formed when that term is requested, so a terminating series
    /// never touches the factors past its last term.
    pub(crate) fn next_term(&mut self) -> Result<ComplexValue> {
        if self.k > 0 {
            let prec = self.prec;
            let j = self.k - 1;
            let mut num = self.argument.clone();
            for a in &self.uppers {
                num *= Complex::with_val(prec, a + j);
            }
            let mut den = Complex::with_val(prec, j + 1);
            for (b, label) in self.lowers.iter().zip(&self.lower_labels) {
                let f = Complex::with_val(prec, b + j);
                if f.is_zero() {
                    return Err(Error::LowerPole { param: label.clone(), index: self.k });
                }
                den *= f;
            }
            self.term *= num;
            self.term /= den;
        }
        self.k += 1;
        Ok(ComplexValue::from_complex(self.term.clone()))
    }
}

impl Iterator for TermStream {
    type Item = Result<ComplexValue>;
    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_term())
    }
}
