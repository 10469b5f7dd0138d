use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sobol::{Sobol, MAX_DIMENSION};
use crate::error::{Error, Result};

/// How a [`PointStream`] produces its points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamKind {
    /// ChaCha8 pseudorandom numbers.
    Pseudorandom { seed: u64 },
    /// Sobol' sequence, starting `skip` points in.
    LowDiscrepancy { skip: u64 },
}

impl StreamKind {
    pub fn label(&self) -> &'static str {
        match self {
            StreamKind::Pseudorandom { .. } => "mc",
            StreamKind::LowDiscrepancy { .. } => "qmc",
        }
    }

    pub fn seed(&self) -> u64 {
        match *self {
            StreamKind::Pseudorandom { seed } => seed,
            StreamKind::LowDiscrepancy { skip } => skip,
        }
    }
}

/// Reproducibility record of a block of stream points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamDescriptor {
    #[serde(flatten)]
    pub kind: StreamKind,
    pub dimension: usize,
    /// Stream index of the first point of the block.
    pub start: u64,
}

/// Deterministic stream of points in `[0,1)^d`.
///
/// Point `i` is a pure function of `(kind, dimension, i)`, so blocks can be
/// generated in parallel and two streams with the same descriptor agree bit
/// for bit.
#[derive(Debug, Clone)]
pub struct PointStream {
    kind: StreamKind,
    dimension: usize,
    cursor: u64,
    sobol: Option<Sobol>,
}

const CHUNK: usize = 4096;

impl PointStream {
    pub fn new(kind: StreamKind, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("stream dimension must be >= 1".into()));
        }
        let sobol = match kind {
            StreamKind::LowDiscrepancy { .. } => Some(Sobol::new(dimension).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "low-discrepancy streams support at most {MAX_DIMENSION} dimensions, {dimension} requested"
                ))
            })?),
            StreamKind::Pseudorandom { .. } => None,
        };
        Ok(PointStream {
            kind,
            dimension,
            cursor: 0,
            sobol,
        })
    }

    pub fn pseudorandom(seed: u64, dimension: usize) -> Result<Self> {
        Self::new(StreamKind::Pseudorandom { seed }, dimension)
    }

    pub fn low_discrepancy(skip: u64, dimension: usize) -> Result<Self> {
        Self::new(StreamKind::LowDiscrepancy { skip }, dimension)
    }

    pub fn kind(&self) -> StreamKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    pub fn descriptor(&self) -> StreamDescriptor {
        StreamDescriptor {
            kind: self.kind,
            dimension: self.dimension,
            start: self.cursor,
        }
    }

    /// Writes point `index` into `out` without touching the cursor.
    pub fn point_at(&self, index: u64, out: &mut [f64]) {
        self.fill(index, out);
    }

    /// Returns `n` consecutive points (row-major) and advances the cursor.
    pub fn take(&mut self, n: usize) -> Vec<f64> {
        let d = self.dimension;
        let start = self.cursor;
        let mut out = vec![0.0; n * d];
        out.par_chunks_mut(CHUNK * d)
            .enumerate()
            .for_each(|(c, chunk)| self.fill(start + (c * CHUNK) as u64, chunk));
        self.cursor += n as u64;
        out
    }

    /// Fills `out` (a whole number of rows) with the points starting at `first`.
    fn fill(&self, first: u64, out: &mut [f64]) {
        let d = self.dimension;
        match self.kind {
            StreamKind::Pseudorandom { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                // two 32-bit words per f64
                rng.set_word_pos(first as u128 * d as u128 * 2);
                for v in out.iter_mut() {
                    *v = rng.gen::<f64>();
                }
            }
            StreamKind::LowDiscrepancy { skip } => {
                let sobol = self.sobol.as_ref().expect("sobol state");
                for (r, row) in out.chunks_mut(d).enumerate() {
                    sobol.point(skip + first + r as u64, row);
                }
            }
        }
    }
}
