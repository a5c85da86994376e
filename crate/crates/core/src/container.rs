//! Binary container for Gram matrices.
//!
//! Layout: the 8-byte magic `HYPISOL1`, a little-endian `u32` header length,
//! a JSON header, then the upper triangle (row by row, diagonal included) as
//! little-endian `f64`. The header lists every subset explicitly, in the
//! order used for the matrix.

use std::io::{Read, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sdp::{SdpSolution, SolveMeta};
use crate::subset::VertexSet;
use crate::subset_index::SubsetIndex;

pub const MAGIC: &[u8; 8] = b"HYPISOL1";

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    n: usize,
    r: usize,
    dim: usize,
    subsets: Vec<VertexSet>,
    meta: SolveMeta,
}

pub fn write_solution<W: Write>(sol: &SdpSolution, mut sink: W) -> Result<()> {
    let header = Header {
        n: sol.n(),
        r: sol.r(),
        dim: sol.dim(),
        subsets: sol.index().subsets(),
        meta: sol.meta.clone(),
    };
    let json = serde_json::to_vec(&header)?;
    let len = u32::try_from(json.len()).map_err(|_| Error::Format("header too large".into()))?;
    let d = sol.dim();
    let mut buf = Vec::with_capacity(12 + json.len() + 4 * d * (d + 1));
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&len.to_le_bytes());
    buf.extend_from_slice(&json);
    let g = sol.gram();
    for i in 0..d {
        for j in i..d {
            buf.extend_from_slice(&g[(i, j)].to_le_bytes());
        }
    }
    sink.write_all(&buf)?;
    Ok(())
}

pub fn read_solution<R: Read>(mut src: R) -> Result<SdpSolution> {
    let mut magic = [0u8; 8];
    src.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("not a solution container".into()));
    }
    let mut len = [0u8; 4];
    src.read_exact(&mut len)?;
    let mut json = vec![0u8; u32::from_le_bytes(len) as usize];
    src.read_exact(&mut json)?;
    let header: Header = serde_json::from_slice(&json)?;
    let index = SubsetIndex::for_relaxation(header.n, header.r)?;
    if header.dim != index.dim() || header.subsets != index.subsets() {
        return Err(Error::Format("subset list does not match the canonical order".into()));
    }
    let d = header.dim;
    let mut gram = DMatrix::zeros(d, d);
    let mut word = [0u8; 8];
    for i in 0..d {
        for j in i..d {
            src.read_exact(&mut word)?;
            let x = f64::from_le_bytes(word);
            gram[(i, j)] = x;
            gram[(j, i)] = x;
        }
    }
    SdpSolution::new(header.n, header.r, gram, header.meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{generate_planted, ModelParams};
    use crate::sdp::planted_reference_solution;

    #[test]
    fn round_trip() {
        let inst = generate_planted(ModelParams::new(7, 3, 2, 0.5), 8).unwrap();
        let sol = planted_reference_solution(&inst).unwrap();
        let mut buf = Vec::new();
        write_solution(&sol, &mut buf).unwrap();
        let back = read_solution(buf.as_slice()).unwrap();
        assert_eq!(back.gram(), sol.gram());
        assert_eq!(back.meta, sol.meta);
        assert!(read_solution(&buf[..buf.len() - 1]).is_err());
        assert!(read_solution(&b"NOTMAGIC...."[..]).is_err());
    }
}
