use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::chart::Chart;
use super::normal::NormalForm;
use super::tree::Expr;
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SAMPLES: usize = 100;

/// Outcome of a zero test.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum ZeroVerdict {
    SymbolicZero,
    NonZero { point: Vec<f64>, value: f64 },
    ProbablyZero { samples: usize, max_abs: f64 },
}

impl ZeroVerdict {
    pub fn is_symbolic_zero(&self) -> bool {
        matches!(self, ZeroVerdict::SymbolicZero)
    }

    pub fn is_nonzero(&self) -> bool {
        matches!(self, ZeroVerdict::NonZero { .. })
    }

    /// Folds verdicts of several components: any witness wins, then any
    /// numeric-only pass, otherwise symbolic zero.
    pub fn combine(self, other: ZeroVerdict) -> ZeroVerdict {
        use ZeroVerdict::*;
        match (self, other) {
            (w @ NonZero { .. }, _) | (_, w @ NonZero { .. }) => w,
            (
                ProbablyZero {
                    samples: s1,
                    max_abs: m1,
                },
                ProbablyZero {
                    samples: s2,
                    max_abs: m2,
                },
            ) => ProbablyZero {
                samples: s1.max(s2),
                max_abs: m1.max(m2),
            },
            (p @ ProbablyZero { .. }, SymbolicZero) | (SymbolicZero, p @ ProbablyZero { .. }) => p,
            (SymbolicZero, SymbolicZero) => SymbolicZero,
        }
    }
}

/// Sampling parameters for numeric zero tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroTest {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest {
            samples: DEFAULT_SAMPLES,
            tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
        }
    }
}

impl ZeroTest {
    pub fn new(samples: usize, tol: f64, seed: u64) -> Self {
        ZeroTest { samples, tol, seed }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn check(&self, e: &Expr, chart: &Chart) -> Result<ZeroVerdict> {
        self.check_normal(&NormalForm::from_expr(e)?, chart)
    }

    pub fn check_normal(&self, nf: &NormalForm, chart: &Chart) -> Result<ZeroVerdict> {
        if self.samples == 0 || !(self.tol > 0.0) {
            return Err(Error::Invalid(
                "zero test needs samples >= 1 and tol > 0".into(),
            ));
        }
        if nf.is_zero() {
            return Ok(ZeroVerdict::SymbolicZero);
        }
        let mut rng = self.rng();
        let mut taken = 0;
        let mut max_abs: f64 = 0.0;
        for _ in 0..self.samples * 20 {
            let point = chart.sample_point(&mut rng);
            let Some(value) = nf.eval(&point) else {
                continue;
            };
            if value.abs() > self.tol {
                return Ok(ZeroVerdict::NonZero { point, value });
            }
            max_abs = max_abs.max(value.abs());
            taken += 1;
            if taken == self.samples {
                break;
            }
        }
        if taken == 0 {
            return Err(Error::NoAdmissibleSamples(chart.name().to_string()));
        }
        Ok(ZeroVerdict::ProbablyZero {
            samples: taken,
            max_abs,
        })
    }
}

/// Zero test with explicit sample count and tolerance (default seed).
pub fn is_zero(e: &Expr, chart: &Chart, samples: usize, tol: f64) -> Result<ZeroVerdict> {
    ZeroTest {
        samples,
        tol,
        seed: DEFAULT_SEED,
    }
    .check(e, chart)
}
