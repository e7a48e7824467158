//! FMAP: `"FMAP"`, u16 version, u32 C, u32 H, u32 W, f32 stride_px, then
//! C*H*W f32 values. All little-endian.

use std::path::Path;

use super::FeatureTensor;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"FMAP";
const VERSION: u16 = 1;
const HEADER_LEN: usize = 22;

pub fn encode_feature_tensor(tensor: &FeatureTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + tensor.values().len() * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(tensor.channels() as u32).to_le_bytes());
    out.extend_from_slice(&(tensor.height() as u32).to_le_bytes());
    out.extend_from_slice(&(tensor.width() as u32).to_le_bytes());
    out.extend_from_slice(&tensor.stride_px().to_le_bytes());
    for v in tensor.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_feature_tensor(bytes: &[u8]) -> Result<FeatureTensor> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format {
            offset: bytes.len() as u64,
            message: format!(
                "truncated header: need {HEADER_LEN} bytes, found {}",
                bytes.len()
            ),
        });
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::Format {
            offset: 0,
            message: "bad magic, expected \"FMAP\"".into(),
        });
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::Format {
            offset: 4,
            message: format!("unsupported version {version}"),
        });
    }
    let read_u32 = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    let dims = [read_u32(6), read_u32(10), read_u32(14)];
    for (i, d) in dims.iter().enumerate() {
        if *d == 0 {
            return Err(Error::Format {
                offset: 6 + 4 * i as u64,
                message: "zero dimension".into(),
            });
        }
    }
    let stride_px = f32::from_le_bytes(bytes[18..22].try_into().unwrap());
    if !(stride_px.is_finite() && stride_px >= 1.0) {
        return Err(Error::Format {
            offset: 18,
            message: format!("stride_px must be >= 1, got {stride_px}"),
        });
    }
    let count = dims.iter().map(|d| *d as u64).product::<u64>();
    let expected = HEADER_LEN as u64 + count * 4;
    if bytes.len() as u64 != expected {
        return Err(Error::Corrupt {
            expected,
            actual: bytes.len() as u64,
        });
    }
    let mut values = Vec::with_capacity(count as usize);
    for (i, chunk) in bytes[HEADER_LEN..].chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(Error::Format {
                offset: (HEADER_LEN + 4 * i) as u64,
                message: "non-finite value".into(),
            });
        }
        values.push(v);
    }
    FeatureTensor::new(
        dims[0] as usize,
        dims[1] as usize,
        dims[2] as usize,
        values,
        stride_px,
    )
}

pub fn write_feature_tensor(path: impl AsRef<Path>, tensor: &FeatureTensor) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_feature_tensor(tensor)).map_err(|e| Error::file(path, e))
}

pub fn read_feature_tensor(path: impl AsRef<Path>) -> Result<FeatureTensor> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::file(path, e))?;
    decode_feature_tensor(&bytes)
}
