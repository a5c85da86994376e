//! Sparse SDPA (`.dat-s`) rendering of the relaxation.
//!
//! The problem is written in SDPA's dual form `max F0•Y s.t. Fi•Y = ci,
//! Y ⪰ 0` with two blocks: the Gram matrix and a diagonal block holding one
//! nonnegative slack per inequality row. Union classes become explicit
//! equalities `Y_ij − Y_KK = 0`.

use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};

use super::problem::{Pin, SdpProblem, Term};

/// Structural counts of an SDPA file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdpaCounts {
    pub constraints: usize,
    pub block_sizes: Vec<i64>,
    /// Nonzero entries per matrix `F0..Fm`.
    pub entries: usize,
}

/// Counts that [`export_sdpa`] will produce for `prob`.
pub fn expected_counts(prob: &SdpProblem) -> SdpaCounts {
    let (eq, ineq, entries) = tally(prob);
    SdpaCounts {
        constraints: eq + ineq,
        block_sizes: vec![prob.dim() as i64, -(ineq as i64)],
        entries,
    }
}

fn tally(prob: &SdpProblem) -> (usize, usize, usize) {
    let pinned = prob.pins().iter().filter(|&&p| p != Pin::Free).count();
    let mut ties = 0;
    for i in 0..prob.dim() {
        for j in i + 1..prob.dim() {
            if prob.class_of(i, j).is_some() {
                ties += 1;
            }
        }
    }
    let ineq = prob.monotone_rows().len() + prob.union_bound_rows().len();
    let row_entries: usize = prob.rows().map(|r| r.terms.len() + 1).sum();
    let entries = prob.objective_cells().len() + pinned + 2 * ties + row_entries;
    (pinned + ties, ineq, entries)
}

pub fn export_sdpa<W: Write>(prob: &SdpProblem, mut sink: W) -> Result<()> {
    let (eq, ineq, _) = tally(prob);
    let d = prob.dim();
    let mut out = String::new();
    use std::fmt::Write as _;
    let mut line = |s: std::fmt::Arguments| {
        out.write_fmt(s).expect("string write");
        out.push('\n');
    };

    line(format_args!(
        "\"hypergraph relaxation n={} r={} D={} strict_pinning={}",
        prob.n(),
        prob.r(),
        d,
        prob.strict_pinning()
    ));
    line(format_args!("{}", eq + ineq));
    line(format_args!("2"));
    line(format_args!("{} {}", d, -(ineq as i64)));

    let mut rhs: Vec<f64> = Vec::with_capacity(eq + ineq);
    let mut body = String::new();
    let mut push = |m: usize, blk: usize, i: usize, j: usize, v: f64| {
        let _ = writeln!(body, "{m} {blk} {} {} {v}", i + 1, j + 1);
    };

    for &c in prob.objective_cells() {
        push(0, 1, c, c, 1.0);
    }
    let mut m = 0;
    for (c, pin) in prob.pins().iter().enumerate() {
        let value = match pin {
            Pin::Free => continue,
            Pin::One => 1.0,
            Pin::Zero => 0.0,
        };
        m += 1;
        push(m, 1, c, c, 1.0);
        rhs.push(value);
    }
    for i in 0..d {
        for j in i + 1..d {
            if let Some(k) = prob.class_of(i, j) {
                m += 1;
                push(m, 1, i, j, 0.5);
                push(m, 1, k, k, -1.0);
                rhs.push(0.0);
            }
        }
    }
    for (s, row) in prob.rows().enumerate() {
        m += 1;
        for &(t, coef) in &row.terms {
            match t {
                Term::Class(k) => push(m, 1, k, k, coef),
                Term::Cell(i, j) => push(m, 1, i, j, 0.5 * coef),
            }
        }
        push(m, 2, s, s, -1.0);
        rhs.push(-row.constant);
    }

    let c: Vec<String> = rhs.iter().map(|v| format!("{v}")).collect();
    line(format_args!("{}", c.join(" ")));
    out.push_str(&body);
    sink.write_all(out.as_bytes())?;
    Ok(())
}

/// Parses the structure of a sparse SDPA file.
pub fn read_sdpa_counts<R: BufRead>(src: R) -> Result<SdpaCounts> {
    let mut lines = src
        .lines()
        .map(|l| l.map_err(Error::from))
        .filter(|l| {
            l.as_ref()
                .map(|s| !(s.starts_with('"') || s.starts_with('*') || s.trim().is_empty()))
                .unwrap_or(true)
        });
    let mut next = |what: &str| -> Result<String> {
        lines
            .next()
            .ok_or_else(|| Error::Format(format!("missing {what}")))?
    };
    let parse_usize = |s: &str, what: &str| -> Result<usize> {
        s.trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad {what}: {s:?}")))
    };
    let constraints = parse_usize(&next("constraint count")?, "constraint count")?;
    let nblocks = parse_usize(&next("block count")?, "block count")?;
    let block_sizes: Vec<i64> = next("block sizes")?
        .split(|c: char| c.is_whitespace() || c == ',' || c == '(' || c == ')' || c == '{' || c == '}')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Format(format!("bad block size {s:?}"))))
        .collect::<Result<_>>()?;
    if block_sizes.len() != nblocks {
        return Err(Error::Format(format!(
            "{} block sizes for {nblocks} blocks",
            block_sizes.len()
        )));
    }
    let c = next("objective vector")?;
    let c_len = c.split_whitespace().count();
    if c_len != constraints {
        return Err(Error::Format(format!(
            "objective vector has {c_len} entries, expected {constraints}"
        )));
    }
    let mut entries = 0;
    for l in lines {
        let l = l?;
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 5 {
            return Err(Error::Format(format!("bad entry line {l:?}")));
        }
        let mat = parse_usize(f[0], "matrix number")?;
        let blk = parse_usize(f[1], "block number")?;
        let (i, j) = (parse_usize(f[2], "row")?, parse_usize(f[3], "column")?);
        f[4].parse::<f64>()
            .map_err(|_| Error::Format(format!("bad value in {l:?}")))?;
        let size = block_sizes
            .get(blk.wrapping_sub(1))
            .ok_or_else(|| Error::Format(format!("block {blk} out of range")))?
            .unsigned_abs() as usize;
        if mat > constraints || i == 0 || j == 0 || i > size || j > size {
            return Err(Error::Format(format!("entry out of range: {l:?}")));
        }
        entries += 1;
    }
    Ok(SdpaCounts {
        constraints,
        block_sizes,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::sdp::build_problem;

    fn render(prob: &SdpProblem) -> Vec<u8> {
        let mut buf = Vec::new();
        export_sdpa(prob, &mut buf).unwrap();
        buf
    }

    #[test]
    fn round_trip_counts() {
        let h = Hypergraph::from_lists(5, 2, &[&[0, 1], &[2, 4]]).unwrap();
        let prob = build_problem(&h).unwrap();
        let bytes = render(&prob);
        let counts = read_sdpa_counts(bytes.as_slice()).unwrap();
        assert_eq!(counts, expected_counts(&prob));
    }

    #[test]
    fn block_line_and_determinism() {
        let h = Hypergraph::from_lists(4, 2, &[&[0, 1], &[2, 3]]).unwrap();
        let prob = build_problem(&h).unwrap();
        let a = render(&prob);
        let text = String::from_utf8(a.clone()).unwrap();
        let block_line = text.lines().nth(3).unwrap();
        assert!(block_line.starts_with("14 "), "{block_line}");
        assert_eq!(a, render(&prob));
    }

    #[test]
    fn truncated_file_is_rejected() {
        assert!(read_sdpa_counts("\"c\n3\n".as_bytes()).is_err());
    }
}
