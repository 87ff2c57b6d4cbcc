//! Byte-level encodings of a [`Field`].
//!
//! Binary layout (little-endian): `d: u32`, `k: u32`, `L: f64`, `n: u32`,
//! followed by `n^d` pairs of `f64` (re, im) in row-major order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{field::Field, grid::GridSpec};
use crate::error::{Error, Result};

pub const HEADER_BYTES: usize = 20;

/// Largest grid accepted by the JSON encoding.
pub const JSON_MAX_POINTS: usize = 1 << 16;

pub fn encode_binary(f: &Field) -> Vec<u8> {
    let g = f.grid();
    let mut out = Vec::with_capacity(HEADER_BYTES + 16 * g.len());
    out.extend_from_slice(&(g.d() as u32).to_le_bytes());
    out.extend_from_slice(&g.k().to_le_bytes());
    out.extend_from_slice(&g.half_period().to_le_bytes());
    out.extend_from_slice(&(g.n() as u32).to_le_bytes());
    for v in f.values() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

fn take<const N: usize>(bytes: &[u8], at: usize) -> Result<[u8; N]> {
    bytes
        .get(at..at + N)
        .and_then(|s| s.try_into().ok())
        .ok_or_else(|| Error::Decode(format!("truncated input at byte {at}")))
}

pub fn decode_binary(bytes: &[u8]) -> Result<Field> {
    let d = u32::from_le_bytes(take(bytes, 0)?) as usize;
    let k = u32::from_le_bytes(take(bytes, 4)?);
    let l = f64::from_le_bytes(take(bytes, 8)?);
    let n = u32::from_le_bytes(take(bytes, 16)?) as usize;
    let grid = GridSpec::new(d, k, l, n)?;
    let expected = HEADER_BYTES + 16 * grid.len();
    if bytes.len() != expected {
        return Err(Error::Decode(format!("expected {expected} bytes, found {}", bytes.len())));
    }
    let values = bytes[HEADER_BYTES..]
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    Field::new(grid, values)
}

#[derive(Serialize, Deserialize)]
struct JsonField {
    grid: GridSpec,
    re: Vec<f64>,
    im: Vec<f64>,
}

pub fn encode_json(f: &Field) -> Result<String> {
    if f.grid().len() > JSON_MAX_POINTS {
        return Err(Error::InvalidParameter(format!(
            "JSON encoding is limited to {JSON_MAX_POINTS} points; use the binary container"
        )));
    }
    let j = JsonField {
        grid: *f.grid(),
        re: f.values().iter().map(|v| v.re).collect(),
        im: f.values().iter().map(|v| v.im).collect(),
    };
    serde_json::to_string(&j).map_err(|e| Error::Decode(e.to_string()))
}

pub fn decode_json(s: &str) -> Result<Field> {
    let j: JsonField = serde_json::from_str(s).map_err(|e| Error::Decode(e.to_string()))?;
    if j.re.len() != j.im.len() {
        return Err(Error::Decode("re/im length mismatch".into()));
    }
    let values = j.re.into_iter().zip(j.im).map(|(r, i)| Complex64::new(r, i)).collect();
    Field::new(j.grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Field {
        let g = GridSpec::new(2, 2, 1.25, 4).unwrap();
        Field::from_fn(g, |x| Complex64::new(x[0] * 0.1 + 1.0 / 3.0, -x[1].exp()))
    }

    #[test]
    fn binary_round_trip_is_bitwise() {
        let f = sample();
        let bytes = encode_binary(&f);
        assert_eq!(bytes.len(), HEADER_BYTES + 16 * 16);
        assert_eq!(decode_binary(&bytes).unwrap(), f);
    }

    #[test]
    fn binary_rejects_truncation() {
        let bytes = encode_binary(&sample());
        assert!(decode_binary(&bytes[..bytes.len() - 1]).is_err());
        assert!(decode_binary(&bytes[..10]).is_err());
    }

    #[test]
    fn json_round_trip_is_bitwise() {
        let f = sample();
        let s = encode_json(&f).unwrap();
        assert_eq!(decode_json(&s).unwrap(), f);
    }
}
