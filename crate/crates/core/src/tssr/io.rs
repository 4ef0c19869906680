//! Model file: magic `TSSR`, `u16` version, `u32` m, N and K, then Ψ and Ω
//! as little-endian `f64` column-major, then labels as `u32`.

use std::fs;
use std::path::Path;

use crate::dataio::{dim_u32, put_f64s, ByteReader};
use crate::diagnostics::mutual_coherence;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::model::{default_stage1_config, ModelOptions, TssrModel};

pub const MODEL_MAGIC: &[u8; 4] = b"TSSR";
pub const MODEL_VERSION: u16 = 1;

impl TssrModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        let (m, n) = self.psi.shape();
        let mut out = Vec::with_capacity(18 + 8 * (m * n + n * n) + 4 * n);
        out.extend_from_slice(MODEL_MAGIC);
        out.extend_from_slice(&MODEL_VERSION.to_le_bytes());
        for d in [m, n, self.k] {
            out.extend_from_slice(&dim_u32(d).to_le_bytes());
        }
        put_f64s(&mut out, self.psi.as_slice());
        put_f64s(&mut out, self.omega.as_slice());
        for &l in &self.labels {
            out.extend_from_slice(&dim_u32(l).to_le_bytes());
        }
        out
    }

    /// Restore a model. Settings not stored in the file (stage-1 solver
    /// config, RIP sampling) take their defaults.
    pub fn from_bytes(bytes: &[u8]) -> Result<TssrModel> {
        let mut r = ByteReader::new(bytes);
        r.expect_magic(MODEL_MAGIC)?;
        let version = r.u16()?;
        if version != MODEL_VERSION {
            return Err(Error::parse("offset 4", format!("unsupported model version {version}")));
        }
        let m = r.u32()? as usize;
        let n = r.u32()? as usize;
        let k = r.u32()? as usize;
        let psi = Matrix::from_col_major(m, n, r.f64s(m * n)?)?;
        let omega = Matrix::from_col_major(n, n, r.f64s(n * n)?)?;
        let labels: Vec<usize> = r.u32s(n)?.into_iter().map(|l| l as usize).collect();
        r.finish()?;
        let coherence = mutual_coherence(&psi).ok();
        TssrModel::assemble(
            psi,
            omega,
            labels,
            k,
            default_stage1_config(),
            coherence,
            Vec::new(),
            &ModelOptions::new(k),
        )
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<TssrModel> {
        TssrModel::from_bytes(&fs::read(path)?)
    }
}
