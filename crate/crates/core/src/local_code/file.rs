use crate::bits::{BitMatrix, BitVec};
use crate::error::{Error, Result};

/// Contents of a parity-check file before the code is built.
#[derive(Clone, Debug)]
pub struct ParityCheckFile {
    pub n: usize,
    pub k: usize,
    pub rows: BitMatrix,
}

/// Parses the text format
///
/// ```text
/// n k
/// <n characters from {0,1}>     (n − k lines, one parity check each)
/// ```
///
/// Blank lines are ignored. The rows must be independent; that is checked when the
/// code is assembled, not here.
pub fn parse_parity_check(text: &str) -> Result<ParityCheckFile> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedFile("empty file".into()))?;
    let mut fields = header.split_whitespace();
    let mut field = |what: &str| -> Result<usize> {
        fields
            .next()
            .ok_or_else(|| Error::MalformedFile(format!("header is missing {what}")))?
            .parse()
            .map_err(|e| Error::MalformedFile(format!("bad {what} in header: {e}")))
    };
    let n = field("n")?;
    let k = field("k")?;
    if fields.next().is_some() {
        return Err(Error::MalformedFile("header must be exactly `n k`".into()));
    }
    if n == 0 || k > n {
        return Err(Error::MalformedFile(format!("invalid dimensions n = {n}, k = {k}")));
    }

    let mut rows = BitMatrix::new(n);
    for (i, line) in lines.enumerate() {
        if line.len() != n {
            return Err(Error::MalformedFile(format!(
                "row {} has {} characters, expected {n}",
                i + 1,
                line.len()
            )));
        }
        let row = BitVec::parse(line).ok_or_else(|| {
            Error::MalformedFile(format!("row {} contains characters other than 0 and 1", i + 1))
        })?;
        rows.push_row(row);
    }
    if rows.n_rows() != n - k {
        return Err(Error::MalformedFile(format!(
            "expected {} parity rows, found {}",
            n - k,
            rows.n_rows()
        )));
    }
    Ok(ParityCheckFile { n, k, rows })
}
