use std::io::Write;

use super::bsm::BsmModel;
use super::{Basis, LinkSpec};
use crate::error::Result;

/// Yields `Y[m][n]` and error rates `e[m][n]` for one basis, `0 <= m,n <= cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct YieldTable {
    basis: Basis,
    cutoff: usize,
    yields: Vec<f64>,
    // Y * e, kept directly so that gains never divide by a vanishing yield.
    error_yields: Vec<f64>,
}

impl YieldTable {
    /// Builds a table from `f(m, n) = (Y, e)`.
    pub fn from_fn(basis: Basis, cutoff: usize, mut f: impl FnMut(usize, usize) -> (f64, f64)) -> Self {
        let side = cutoff + 1;
        let mut yields = Vec::with_capacity(side * side);
        let mut error_yields = Vec::with_capacity(side * side);
        for m in 0..side {
            for n in 0..side {
                let (y, e) = f(m, n);
                yields.push(y);
                error_yields.push(y * e);
            }
        }
        Self { basis, cutoff, yields, error_yields }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn idx(&self, m: usize, n: usize) -> usize {
        assert!(m <= self.cutoff && n <= self.cutoff, "({m},{n}) beyond cutoff {}", self.cutoff);
        m * (self.cutoff + 1) + n
    }

    pub fn yield_at(&self, m: usize, n: usize) -> f64 {
        self.yields[self.idx(m, n)]
    }

    /// `Y[m][n] * e[m][n]`.
    pub fn error_yield(&self, m: usize, n: usize) -> f64 {
        self.error_yields[self.idx(m, n)]
    }

    /// Error rate, defined only where the yield is positive.
    pub fn error_at(&self, m: usize, n: usize) -> Option<f64> {
        let y = self.yield_at(m, n);
        (y > 0.0).then(|| self.error_yield(m, n) / y)
    }

    /// Debug dump with columns `basis,m,n,Y,e`; `e` is empty where undefined.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["basis", "m", "n", "Y", "e"])?;
        for m in 0..=self.cutoff {
            for n in 0..=self.cutoff {
                let e = self.error_at(m, n).map(|e| format!("{e:?}")).unwrap_or_default();
                w.write_record([
                    self.basis.to_string(),
                    m.to_string(),
                    n.to_string(),
                    format!("{:?}", self.yield_at(m, n)),
                    e,
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

impl BsmModel {
    /// Yield table at per-side survival `t`. Each cell averages the four
    /// equiprobable bit pairs of the basis.
    ///
    /// Z basis: both announcements mean anti-correlated bits. X basis: `Psi-`
    /// means anti-correlated, `Psi+` correlated.
    pub fn yield_table(&self, basis: Basis, t: f64) -> YieldTable {
        YieldTable::from_fn(basis, self.cutoff(), |m, n| {
            let mut success = 0.0;
            let mut wrong = 0.0;
            for a in 0..2u8 {
                for b in 0..2u8 {
                    let o = self.outcome(basis, a, b, m, n, t);
                    success += o.success();
                    wrong += match (basis, a == b) {
                        (Basis::Z, true) => o.success(),
                        (Basis::Z, false) => 0.0,
                        (Basis::X, true) => o.psi_minus,
                        (Basis::X, false) => o.psi_plus,
                    };
                }
            }
            let y = success / 4.0;
            let e = if y > 0.0 { (wrong / 4.0) / y } else { 0.0 };
            (y, e)
        })
    }
}

/// Ground-truth yield table for a link.
pub fn yield_table(link: &LinkSpec, basis: Basis) -> Result<YieldTable> {
    let model = BsmModel::new(link)?;
    Ok(model.yield_table(basis, link.transmittance()))
}
