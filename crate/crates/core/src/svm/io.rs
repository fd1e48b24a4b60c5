//! Plain-text model format.
//!
//! ```text
//! svm-ovo 1
//! dimension <d>
//! gamma <γ>
//! classes <k>
//! class <name>                     (k lines)
//! pairs <m>
//! pair <low> <high> binary <n_sv> <bias>
//! <dual_coef> <x_0> … <x_{d-1}>    (n_sv lines)
//! pair <low> <high> constant <class>
//! ```
//!
//! Floats use Rust's shortest round-trip formatting, so a written model reads
//! back bit-identical. Solver diagnostics are not stored.

use std::io::{BufRead, Write};

use super::kernel::RbfKernel;
use super::ovo::{PairModel, PairwiseModel, SvmMulticlassModel};
use super::smo::{SmoDiagnostics, SvmBinaryModel};
use crate::error::{Error, Result};

const MAGIC: &str = "svm-ovo 1";

pub fn write_model<W: Write>(m: &SvmMulticlassModel, mut w: W) -> Result<()> {
    let io = |e: std::io::Error| Error::ModelFormat(e.to_string());
    writeln!(w, "{MAGIC}").map_err(io)?;
    writeln!(w, "dimension {}", m.dimension).map_err(io)?;
    writeln!(w, "gamma {}", m.kernel.gamma()).map_err(io)?;
    writeln!(w, "classes {}", m.classes.len()).map_err(io)?;
    for c in &m.classes {
        if c.is_empty() || c.contains(char::is_whitespace) {
            return Err(Error::ModelFormat(format!(
                "class name {c:?} must be non-empty without whitespace"
            )));
        }
        writeln!(w, "class {c}").map_err(io)?;
    }
    writeln!(w, "pairs {}", m.pairs.len()).map_err(io)?;
    for p in &m.pairs {
        match &p.model {
            PairModel::Constant(c) => {
                writeln!(w, "pair {} {} constant {c}", p.low, p.high).map_err(io)?;
            }
            PairModel::Binary(b) => {
                writeln!(
                    w,
                    "pair {} {} binary {} {}",
                    p.low,
                    p.high,
                    b.support_vectors.len(),
                    b.bias
                )
                .map_err(io)?;
                for (coef, sv) in b.dual_coefs.iter().zip(&b.support_vectors) {
                    let mut line = coef.to_string();
                    for v in sv {
                        line.push(' ');
                        line.push_str(&v.to_string());
                    }
                    writeln!(w, "{line}").map_err(io)?;
                }
            }
        }
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self) -> Result<String> {
        loop {
            self.line_no += 1;
            match self.inner.next() {
                None => return Err(self.err("unexpected end of model")),
                Some(Err(e)) => return Err(Error::ModelFormat(e.to_string())),
                Some(Ok(l)) if l.trim().is_empty() => continue,
                Some(Ok(l)) => return Ok(l),
            }
        }
    }

    fn err(&self, msg: impl std::fmt::Display) -> Error {
        Error::ModelFormat(format!("line {}: {msg}", self.line_no))
    }

    fn keyed(&mut self, key: &str) -> Result<String> {
        let line = self.next_line()?;
        match line.split_once(' ') {
            Some((k, rest)) if k == key => Ok(rest.trim().to_string()),
            _ => Err(self.err(format!("expected `{key} …`, found {line:?}"))),
        }
    }

    fn parse<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse().map_err(|_| self.err(format!("cannot parse {s:?}")))
    }
}

pub fn read_model<R: BufRead>(r: R) -> Result<SvmMulticlassModel> {
    let mut lines = Lines {
        inner: r.lines(),
        line_no: 0,
    };
    let magic = lines.next_line()?;
    if magic.trim() != MAGIC {
        return Err(lines.err(format!("bad header {magic:?}")));
    }
    let dimension: usize = {
        let s = lines.keyed("dimension")?;
        lines.parse(&s)?
    };
    let gamma: f64 = {
        let s = lines.keyed("gamma")?;
        lines.parse(&s)?
    };
    let kernel = RbfKernel::new(gamma)?;
    let k: usize = {
        let s = lines.keyed("classes")?;
        lines.parse(&s)?
    };
    let classes = (0..k).map(|_| lines.keyed("class")).collect::<Result<Vec<_>>>()?;
    let n_pairs: usize = {
        let s = lines.keyed("pairs")?;
        lines.parse(&s)?
    };
    let mut pairs = Vec::with_capacity(n_pairs);
    for _ in 0..n_pairs {
        let head = lines.keyed("pair")?;
        let fields: Vec<&str> = head.split_whitespace().collect();
        if fields.len() < 4 {
            return Err(lines.err("truncated pair header"));
        }
        let low: usize = lines.parse(fields[0])?;
        let high: usize = lines.parse(fields[1])?;
        if low >= high || high >= k {
            return Err(lines.err(format!("invalid class pair ({low}, {high})")));
        }
        let model = match (fields[2], fields.len()) {
            ("constant", 4) => {
                let c: usize = lines.parse(fields[3])?;
                if c != low && c != high {
                    return Err(lines.err("constant voter outside its pair"));
                }
                PairModel::Constant(c)
            }
            ("binary", 5) => {
                let n_sv: usize = lines.parse(fields[3])?;
                let bias: f64 = lines.parse(fields[4])?;
                let mut support_vectors = Vec::with_capacity(n_sv);
                let mut dual_coefs = Vec::with_capacity(n_sv);
                for _ in 0..n_sv {
                    let row = lines.next_line()?;
                    let values = row
                        .split_whitespace()
                        .map(|t| lines.parse::<f64>(t))
                        .collect::<Result<Vec<_>>>()?;
                    if values.len() != dimension + 1 {
                        return Err(lines.err(format!(
                            "support vector row has {} values, expected {}",
                            values.len(),
                            dimension + 1
                        )));
                    }
                    dual_coefs.push(values[0]);
                    support_vectors.push(values[1..].to_vec());
                }
                PairModel::Binary(SvmBinaryModel {
                    support_vectors,
                    dual_coefs,
                    bias,
                    kernel,
                    diagnostics: SmoDiagnostics::default(),
                })
            }
            _ => return Err(lines.err(format!("bad pair header {head:?}"))),
        };
        pairs.push(PairwiseModel { low, high, model });
    }
    Ok(SvmMulticlassModel {
        classes,
        dimension,
        kernel,
        pairs,
    })
}
