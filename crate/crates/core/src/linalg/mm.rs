//! Matrix Market coordinate format (1-based indices).

use super::csr::CsrMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;
use std::io::{BufRead, Write};

/// Writes `a` as `coordinate real symmetric` (lower triangle) when
/// `symmetric`, otherwise as `coordinate real general`.
pub fn write_matrix<T: Real, W: Write>(a: &CsrMatrix<T>, symmetric: bool, mut w: W) -> Result<()> {
    let kind = if symmetric { "symmetric" } else { "general" };
    writeln!(w, "%%MatrixMarket matrix coordinate real {kind}")?;
    let entries: Vec<(usize, usize, T)> = (0..a.nrows())
        .flat_map(|i| a.row(i).map(move |(j, v)| (i, j, v)))
        .filter(|&(i, j, _)| !symmetric || j <= i)
        .collect();
    writeln!(w, "{} {} {}", a.nrows(), a.ncols(), entries.len())?;
    for (i, j, v) in entries {
        writeln!(w, "{} {} {:.17e}", i + 1, j + 1, v.as_f64())?;
    }
    Ok(())
}

/// Writes a vector as an `n x 1` coordinate matrix.
pub fn write_vector<T: Real, W: Write>(b: &[T], mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} 1 {}", b.len(), b.len())?;
    for (i, v) in b.iter().enumerate() {
        writeln!(w, "{} 1 {:.17e}", i + 1, v.as_f64())?;
    }
    Ok(())
}

/// Reads a `coordinate` matrix with `real` or `integer` entries and
/// `general` or `symmetric` structure.
pub fn read_matrix<T: Real, R: BufRead>(r: R) -> Result<CsrMatrix<T>> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::MatrixMarket("empty input".into()))??;
    let h: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if h.len() != 5 || h[0] != "%%matrixmarket" || h[1] != "matrix" {
        return Err(Error::MatrixMarket(format!("bad header: {header}")));
    }
    if h[2] != "coordinate" {
        return Err(Error::MatrixMarket(format!("unsupported format {}", h[2])));
    }
    if h[3] != "real" && h[3] != "integer" {
        return Err(Error::MatrixMarket(format!("unsupported field {}", h[3])));
    }
    let symmetric = match h[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(Error::MatrixMarket(format!("unsupported symmetry {other}"))),
    };
    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for line in lines {
        let line = line?;
        let s = line.trim();
        if s.is_empty() || s.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = s.split_whitespace().collect();
        match size {
            None => {
                if f.len() != 3 {
                    return Err(Error::MatrixMarket(format!("bad size line: {s}")));
                }
                let p = |x: &str| x.parse::<usize>().map_err(|e| Error::MatrixMarket(e.to_string()));
                let sz = (p(f[0])?, p(f[1])?, p(f[2])?);
                triplets.reserve(if symmetric { 2 * sz.2 } else { sz.2 });
                size = Some(sz);
            }
            Some((m, n, _)) => {
                if f.len() != 3 {
                    return Err(Error::MatrixMarket(format!("bad entry: {s}")));
                }
                let i: usize = f[0].parse().map_err(|_| Error::MatrixMarket(format!("bad row in: {s}")))?;
                let j: usize = f[1].parse().map_err(|_| Error::MatrixMarket(format!("bad column in: {s}")))?;
                let v: f64 = f[2].parse().map_err(|_| Error::MatrixMarket(format!("bad value in: {s}")))?;
                if i == 0 || j == 0 || i > m || j > n {
                    return Err(Error::MatrixMarket(format!("index out of range: {s}")));
                }
                triplets.push((i - 1, j - 1, T::lit(v)));
                if symmetric && i != j {
                    triplets.push((j - 1, i - 1, T::lit(v)));
                }
            }
        }
    }
    let (m, n, nnz) = size.ok_or_else(|| Error::MatrixMarket("missing size line".into()))?;
    let stored = if symmetric {
        triplets.iter().filter(|t| t.0 >= t.1).count()
    } else {
        triplets.len()
    };
    if stored != nnz {
        return Err(Error::MatrixMarket(format!("expected {nnz} entries, found {stored}")));
    }
    Ok(CsrMatrix::from_triplets(m, n, triplets))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_round_trip() {
        let a = CsrMatrix::from_dense(&[vec![4.0, 1.0, 0.0], vec![1.0, 3.0, -2.5], vec![0.0, -2.5, 1e-20]]);
        let mut buf = Vec::new();
        write_matrix(&a, true, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real symmetric\n3 3 5\n"));
        let b: CsrMatrix<f64> = read_matrix(&buf[..]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn general_round_trip_and_vector() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![0.0, 3.0]]);
        let mut buf = Vec::new();
        write_matrix(&a, false, &mut buf).unwrap();
        assert_eq!(read_matrix::<f64, _>(&buf[..]).unwrap(), a);
        let mut vb = Vec::new();
        write_vector(&[1.5, -2.0], &mut vb).unwrap();
        let v: CsrMatrix<f64> = read_matrix(&vb[..]).unwrap();
        assert_eq!(v.to_dense(), vec![vec![1.5], vec![-2.0]]);
    }

    #[test]
    fn rejects_malformed_input() {
        let bad = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n";
        assert!(read_matrix::<f64, _>(bad.as_bytes()).is_err());
        let short = "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1.0\n";
        assert!(read_matrix::<f64, _>(short.as_bytes()).is_err());
        let oob = "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n";
        assert!(read_matrix::<f64, _>(oob.as_bytes()).is_err());
    }
}
