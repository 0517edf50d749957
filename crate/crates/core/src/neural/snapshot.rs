//! Binary snapshot of synapse weights.
//!
//! Layout (little endian):
//!
//! ```text
//! magic    8 bytes  "BNLPSYN\0"
//! version  u32      1
//! n, k     u64, u64 parameters of the first non-explicit area
//! p, beta  f64, f64
//! seed     u64
//! areas    u32      area count   (structure check)
//! fibers   u32      fiber count  (structure check)
//! runs     u64      number of adjacency runs
//! run*     matrix u32, neuron u32, len u32, then len × (target u32, weight f64)
//! ```
//!
//! Only rows that have been sampled are written; the rest regenerate
//! identically from the seed.

use std::io::{self, Read, Write};

use super::synapse::Synapse;
use super::{Brain, NeuralError};
use crate::scalar::Weight;

const MAGIC: &[u8; 8] = b"BNLPSYN\0";
const VERSION: u32 = 1;

fn io_err(e: io::Error) -> NeuralError {
    NeuralError::Snapshot(e.to_string())
}

pub fn write_snapshot<T: Weight, W: Write>(brain: &Brain<T>, mut w: W) -> Result<(), NeuralError> {
    let reference = brain.areas.iter().find(|a| !a.explicit).or(brain.areas.first());
    let (n, k, p, beta) = reference.map_or((0, 0, 0.0, 0.0), |a| (a.params.n, a.params.k, a.params.p, a.params.beta));
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(n as u64).to_le_bytes());
    buf.extend_from_slice(&(k as u64).to_le_bytes());
    buf.extend_from_slice(&p.to_le_bytes());
    buf.extend_from_slice(&beta.to_le_bytes());
    buf.extend_from_slice(&brain.seed.to_le_bytes());
    buf.extend_from_slice(&(brain.areas.len() as u32).to_le_bytes());
    buf.extend_from_slice(&(brain.fibers.len() as u32).to_le_bytes());

    let matrices = brain.all_matrices();
    let mut runs = Vec::new();
    for (mi, m) in matrices.iter().enumerate() {
        for (row, syn) in brain.matrix(*m).materialized_rows() {
            runs.push((mi as u32, row as u32, syn));
        }
    }
    buf.extend_from_slice(&(runs.len() as u64).to_le_bytes());
    for (mi, row, syn) in runs {
        buf.extend_from_slice(&mi.to_le_bytes());
        buf.extend_from_slice(&row.to_le_bytes());
        buf.extend_from_slice(&(syn.len() as u32).to_le_bytes());
        for s in syn {
            buf.extend_from_slice(&s.target.to_le_bytes());
            buf.extend_from_slice(&s.weight.as_f64().to_le_bytes());
        }
    }
    w.write_all(&buf).map_err(io_err)
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8], NeuralError> {
        let end = self.pos.checked_add(n).filter(|e| *e <= self.data.len());
        let end = end.ok_or_else(|| NeuralError::Snapshot("truncated snapshot".into()))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u32(&mut self) -> Result<u32, NeuralError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64, NeuralError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64, NeuralError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Load weights into a brain built from the same declarations and seed.
pub fn read_snapshot<T: Weight, R: Read>(brain: &mut Brain<T>, mut r: R) -> Result<(), NeuralError> {
    let mut data = Vec::new();
    r.read_to_end(&mut data).map_err(io_err)?;
    let mut c = Cursor { data: &data, pos: 0 };
    if c.take(8)? != MAGIC {
        return Err(NeuralError::Snapshot("bad magic".into()));
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(NeuralError::Snapshot(format!("unsupported version {version}")));
    }
    let (_n, _k, _p, _beta) = (c.u64()?, c.u64()?, c.f64()?, c.f64()?);
    let seed = c.u64()?;
    let (areas, fibers) = (c.u32()? as usize, c.u32()? as usize);
    if seed != brain.seed || areas != brain.areas.len() || fibers != brain.fibers.len() {
        return Err(NeuralError::Snapshot("snapshot does not match this brain's structure".into()));
    }
    let matrices = brain.all_matrices();
    let runs = c.u64()?;
    for _ in 0..runs {
        let (mi, row, len) = (c.u32()? as usize, c.u32()? as usize, c.u32()? as usize);
        let m = *matrices.get(mi).ok_or_else(|| NeuralError::Snapshot(format!("matrix index {mi} out of range")))?;
        let mat = brain.matrix_mut(m);
        if row >= mat.pre_len() {
            return Err(NeuralError::Snapshot(format!("row {row} out of range")));
        }
        let mut syn = Vec::with_capacity(len);
        for _ in 0..len {
            let target = c.u32()?;
            let weight = T::from_f64_lossy(c.f64()?);
            if target as usize >= mat.post_len() {
                return Err(NeuralError::Snapshot(format!("target {target} out of range")));
            }
            syn.push(Synapse { target, weight });
        }
        mat.set_row(row, syn);
    }
    Ok(())
}
