//! HTGF tensor interchange files.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! 0..4     magic "HTGF"
//! u32      version = 1
//! u32      rank r
//! r × u32  dims, dims[0] = N
//! u32      id-table byte length
//! ...      N newline-separated UTF-8 sample ids
//! ...      product(dims) × f32 payload, row-major
//! [u8]     logit files only: 1 = probabilities, 0 = raw logits
//! ```
//!
//! Payloads are stored as `f32`. Values are widened to `f64` on read, so
//! read → write → read is bit-exact; writing an `f64` matrix narrows it.

use std::fs;
use std::path::{Path, PathBuf};

use super::features::{FeatureMatrix, LayerFeatureMapSet, LayerFeatureMaps, LogitMatrix};
use crate::error::{HtgError, Result};

pub const MAGIC: &[u8; 4] = b"HTGF";
pub const VERSION: u32 = 1;

/// A decoded file before it is interpreted as a domain type.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTensor {
    pub ids: Vec<String>,
    pub dims: Vec<usize>,
    pub data: Vec<f32>,
    pub trailer: Option<u8>,
}

impl RawTensor {
    pub fn encode(&self) -> Result<Vec<u8>> {
        let n = *self
            .dims
            .first()
            .ok_or_else(|| HtgError::ShapeError("rank 0 tensor".into()))?;
        if n != self.ids.len() {
            return Err(HtgError::AlignmentError(format!(
                "{} ids for first dimension {n}",
                self.ids.len()
            )));
        }
        if self.data.len() != self.dims.iter().product::<usize>() {
            return Err(HtgError::AlignmentError(
                "payload length does not match dims".into(),
            ));
        }
        if self.data.iter().any(|v| !v.is_finite()) {
            return Err(HtgError::NonFiniteData("HTGF payload".into()));
        }
        let id_table = self.ids.join("\n");
        let mut out =
            Vec::with_capacity(20 + 4 * self.dims.len() + id_table.len() + 4 * self.data.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&to_u32(self.dims.len())?.to_le_bytes());
        for &d in &self.dims {
            out.extend_from_slice(&to_u32(d)?.to_le_bytes());
        }
        out.extend_from_slice(&to_u32(id_table.len())?.to_le_bytes());
        out.extend_from_slice(id_table.as_bytes());
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        if let Some(flag) = self.trailer {
            out.push(flag);
        }
        Ok(out)
    }

    /// Decodes `bytes`; `with_trailer` selects whether exactly one trailing
    /// flag byte is expected after the payload.
    pub fn decode(bytes: &[u8], with_trailer: bool) -> Result<RawTensor> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(HtgError::FormatError("bad magic, expected HTGF".into()));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(HtgError::FormatError(format!(
                "unsupported version {version}"
            )));
        }
        let rank = r.u32()? as usize;
        if rank == 0 {
            return Err(HtgError::FormatError("rank must be at least 1".into()));
        }
        let dims = (0..rank)
            .map(|_| r.u32().map(|d| d as usize))
            .collect::<Result<Vec<_>>>()?;
        let id_len = r.u32()? as usize;
        let id_table = std::str::from_utf8(r.take(id_len)?)
            .map_err(|_| HtgError::FormatError("id table is not UTF-8".into()))?;
        let ids: Vec<String> = if id_table.is_empty() {
            Vec::new()
        } else {
            id_table.split('\n').map(str::to_string).collect()
        };
        if ids.len() != dims[0] {
            return Err(HtgError::AlignmentError(format!(
                "id table has {} entries, first dimension is {}",
                ids.len(),
                dims[0]
            )));
        }
        let count = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| HtgError::FormatError("dims overflow".into()))?;
        let payload = r.take(
            count
                .checked_mul(4)
                .ok_or_else(|| HtgError::FormatError("dims overflow".into()))?,
        )?;
        let data: Vec<f32> = payload
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(HtgError::NonFiniteData("HTGF payload".into()));
        }
        let trailer = if with_trailer {
            Some(r.take(1)?[0])
        } else {
            None
        };
        if r.pos != bytes.len() {
            return Err(HtgError::FormatError(format!(
                "{} unexpected trailing bytes",
                bytes.len() - r.pos
            )));
        }
        Ok(RawTensor {
            ids,
            dims,
            data,
            trailer,
        })
    }
}

fn to_u32(v: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| HtgError::FormatError(format!("{v} does not fit in u32")))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| HtgError::FormatError("file truncated".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }
}

fn narrow(data: &[f64]) -> Result<Vec<f32>> {
    data.iter()
        .map(|&v| {
            let x = v as f32;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(HtgError::NonFiniteData(format!("{v} overflows f32")))
            }
        })
        .collect()
}

fn widen(data: &[f32]) -> Vec<f64> {
    data.iter().map(|&v| f64::from(v)).collect()
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| HtgError::io(path, e))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| HtgError::io(path, e))
}

pub fn encode_feature_matrix(f: &FeatureMatrix) -> Result<Vec<u8>> {
    RawTensor {
        ids: f.ids().to_vec(),
        dims: vec![f.n(), f.dim()],
        data: narrow(f.data())?,
        trailer: None,
    }
    .encode()
}

pub fn decode_feature_matrix(bytes: &[u8]) -> Result<FeatureMatrix> {
    let raw = RawTensor::decode(bytes, false)?;
    if raw.dims.len() != 2 {
        return Err(HtgError::FormatError(format!(
            "feature matrix must have rank 2, got {}",
            raw.dims.len()
        )));
    }
    FeatureMatrix::new(raw.ids, widen(&raw.data), raw.dims[1])
}

pub fn encode_logits(l: &LogitMatrix) -> Result<Vec<u8>> {
    RawTensor {
        ids: l.ids().to_vec(),
        dims: vec![l.n(), l.classes()],
        data: narrow(l.data())?,
        trailer: Some(u8::from(l.is_probability())),
    }
    .encode()
}

pub fn decode_logits(bytes: &[u8]) -> Result<LogitMatrix> {
    let raw = RawTensor::decode(bytes, true)?;
    if raw.dims.len() != 2 {
        return Err(HtgError::FormatError(format!(
            "logit matrix must have rank 2, got {}",
            raw.dims.len()
        )));
    }
    let is_probability = match raw.trailer {
        Some(0) => false,
        Some(1) => true,
        other => {
            return Err(HtgError::FormatError(format!(
                "bad probability flag {other:?}"
            )))
        }
    };
    LogitMatrix::new(raw.ids, widen(&raw.data), raw.dims[1], is_probability)
}

pub fn encode_layer_maps(l: &LayerFeatureMaps) -> Result<Vec<u8>> {
    RawTensor {
        ids: l.ids().to_vec(),
        dims: l.shape().to_vec(),
        data: narrow(l.data())?,
        trailer: None,
    }
    .encode()
}

pub fn decode_layer_maps(name: &str, weight: f64, bytes: &[u8]) -> Result<LayerFeatureMaps> {
    let raw = RawTensor::decode(bytes, false)?;
    let shape: [usize; 4] = raw.dims.as_slice().try_into().map_err(|_| {
        HtgError::FormatError(format!(
            "layer maps must have rank 4, got {}",
            raw.dims.len()
        ))
    })?;
    LayerFeatureMaps::new(name, weight, raw.ids, shape, widen(&raw.data))
}

pub fn load_feature_matrix(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    decode_feature_matrix(&read_bytes(path.as_ref())?)
}

pub fn save_feature_matrix(path: impl AsRef<Path>, f: &FeatureMatrix) -> Result<()> {
    write_bytes(path.as_ref(), &encode_feature_matrix(f)?)
}

pub fn load_logits(path: impl AsRef<Path>) -> Result<LogitMatrix> {
    decode_logits(&read_bytes(path.as_ref())?)
}

pub fn save_logits(path: impl AsRef<Path>, l: &LogitMatrix) -> Result<()> {
    write_bytes(path.as_ref(), &encode_logits(l)?)
}

pub fn save_layer_maps(path: impl AsRef<Path>, l: &LayerFeatureMaps) -> Result<()> {
    write_bytes(path.as_ref(), &encode_layer_maps(l)?)
}

/// One layer file together with its name and weight.
#[derive(Debug, Clone)]
pub struct LayerSource {
    pub name: String,
    pub path: PathBuf,
    pub weight: f64,
}

pub fn load_layer_maps(sources: &[LayerSource]) -> Result<LayerFeatureMapSet> {
    let layers = sources
        .iter()
        .map(|s| decode_layer_maps(&s.name, s.weight, &read_bytes(&s.path)?))
        .collect::<Result<Vec<_>>>()?;
    LayerFeatureMapSet::new(layers)
}
