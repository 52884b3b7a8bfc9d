//! SDPA sparse text format (`.dat-s`).
//!
//! The file data is taken verbatim as `(C, A_i, b)` of the primal standard
//! form `min ⟨C, X⟩ s.t. ⟨A_i, X⟩ = b_i, X ⪰ 0`; no sign conversion is applied.
//!
//! Layout: optional leading comment lines starting with `"` or `*`, then `m`,
//! the number of blocks, the block sizes (negative for diagonal blocks), the
//! `m` values of `b`, and entry lines `matno block i j value` with 1-based
//! indices. `matno = 0` is the objective. All blocks are assembled into one
//! block diagonal matrix.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Read;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::sdp::SdpProblem;

#[derive(Debug, Clone)]
pub struct ParsedSdpa {
    pub problem: SdpProblem,
    /// Non-fatal findings such as repeated entries.
    pub warnings: Vec<String>,
}

/// Reads a problem, discarding warnings.
pub fn read_sdpa_sparse<R: Read>(mut reader: R) -> Result<SdpProblem> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    Ok(parse_sdpa_sparse(&text)?.problem)
}

struct Token<'a> {
    line: usize,
    text: &'a str,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_sdpa_sparse(text: &str) -> Result<ParsedSdpa> {
    let mut tokens = Vec::new();
    let mut in_header_comments = true;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim_start();
        if in_header_comments {
            if trimmed.starts_with('"') || trimmed.starts_with('*') || trimmed.is_empty() {
                continue;
            }
            in_header_comments = false;
        }
        tokens.extend(
            raw.split(|c: char| c.is_whitespace() || "{},()".contains(c))
                .filter(|t| !t.is_empty())
                .map(|text| Token { line, text }),
        );
    }

    let mut pos = 0;
    let mut next = |what: &str| -> Result<&Token> {
        let t = tokens.get(pos).ok_or_else(|| {
            parse_err(
                last_line,
                format!("unexpected end of input, expected {what}"),
            )
        })?;
        pos += 1;
        Ok(t)
    };
    let int = |t: &Token, what: &str| -> Result<i64> {
        t.text
            .parse::<i64>()
            .or_else(|_| match t.text.parse::<f64>() {
                Ok(v) if v.fract() == 0.0 && v.abs() < 1e15 => Ok(v as i64),
                _ => Err(()),
            })
            .map_err(|_| parse_err(t.line, format!("expected {what}, found '{}'", t.text)))
    };
    let float = |t: &Token, what: &str| -> Result<f64> {
        t.text
            .parse::<f64>()
            .map_err(|_| parse_err(t.line, format!("expected {what}, found '{}'", t.text)))
    };

    let t = next("the number of constraints")?;
    let m = int(t, "the number of constraints")?;
    if m < 0 {
        return Err(parse_err(t.line, "number of constraints is negative"));
    }
    let m = m as usize;
    let t = next("the number of blocks")?;
    let nblocks = int(t, "the number of blocks")?;
    if nblocks < 1 {
        return Err(parse_err(t.line, "at least one block is required"));
    }
    let mut blocks = Vec::with_capacity(nblocks as usize);
    for _ in 0..nblocks {
        let t = next("a block size")?;
        let size = int(t, "a block size")?;
        if size == 0 {
            return Err(parse_err(t.line, "block size must be nonzero"));
        }
        blocks.push((size.unsigned_abs() as usize, size < 0));
    }
    let mut b = Vec::with_capacity(m);
    for _ in 0..m {
        let t = next("a right-hand side value")?;
        b.push(float(t, "a right-hand side value")?);
    }

    let mut offsets = Vec::with_capacity(blocks.len());
    let mut n = 0;
    for (size, _) in &blocks {
        offsets.push(n);
        n += size;
    }

    let mut mats = vec![DMatrix::<f64>::zeros(n, n); m + 1];
    let mut seen: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    let mut warnings = Vec::new();
    let rest = &tokens[pos..];
    let mut i = 0;
    while i < rest.len() {
        let line = rest[i].line;
        let group: Vec<&Token> = rest[i..].iter().take_while(|t| t.line == line).collect();
        i += group.len();
        if group.len() != 5 {
            return Err(parse_err(
                line,
                format!("entry line needs 5 fields, found {}", group.len()),
            ));
        }
        let matno = int(group[0], "a matrix number")?;
        let blk = int(group[1], "a block number")?;
        let r = int(group[2], "a row index")?;
        let c = int(group[3], "a column index")?;
        let v = float(group[4], "an entry value")?;
        if matno < 0 {
            return Err(parse_err(line, "matrix number is negative"));
        }
        let matno = matno as usize;
        if matno > m {
            return Err(Error::Index { line, matno, m });
        }
        if blk < 1 || blk > nblocks {
            return Err(parse_err(
                line,
                format!("block {blk} out of range 1..={nblocks}"),
            ));
        }
        let (size, diagonal) = blocks[blk as usize - 1];
        if r < 1 || c < 1 || r as usize > size || c as usize > size {
            return Err(parse_err(
                line,
                format!("index ({r},{c}) outside block {blk} of size {size}"),
            ));
        }
        if diagonal && r != c {
            return Err(parse_err(
                line,
                format!("off-diagonal entry ({r},{c}) in diagonal block {blk}"),
            ));
        }
        let (r, c) = (r.min(c) as usize - 1, r.max(c) as usize - 1);
        let key = (matno, blk as usize, r, c);
        if let Some(first) = seen.insert(key, line) {
            warnings.push(format!(
                "line {line}: entry ({},{}) of matrix {matno} block {blk} repeats line {first}; last value wins",
                r + 1,
                c + 1
            ));
        }
        let off = offsets[blk as usize - 1];
        mats[matno][(off + r, off + c)] = v;
        mats[matno][(off + c, off + r)] = v;
    }

    let mut sym = mats
        .into_iter()
        .map(|a| SymMatrix::new(a).expect("mirrored entries are symmetric"));
    let objective = sym.next().expect("objective is always present");
    let problem = SdpProblem::new(objective, sym.collect(), b)?;
    Ok(ParsedSdpa { problem, warnings })
}

/// Writes one dense block with the nonzero upper-triangle entries of every matrix.
pub fn write_sdpa_sparse(problem: &SdpProblem) -> String {
    let n = problem.n();
    let mut out = String::new();
    let _ = writeln!(out, "{}", problem.m());
    let _ = writeln!(out, "1");
    let _ = writeln!(out, "{n}");
    let b: Vec<String> = problem.b().iter().map(|v| format!("{v:?}")).collect();
    let _ = writeln!(out, "{}", b.join(" "));
    let mats = std::iter::once(problem.objective()).chain(problem.constraints());
    for (matno, a) in mats.enumerate() {
        for j in 0..n {
            for i in 0..=j {
                let v = a.get(i, j);
                if v != 0.0 {
                    let _ = writeln!(out, "{matno} 1 {} {} {v:?}", i + 1, j + 1);
                }
            }
        }
    }
    out
}
