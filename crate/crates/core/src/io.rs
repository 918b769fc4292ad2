//! Instance files and per-iteration trace output.
//!
//! An instance file is a JSON document:
//!
//! ```json
//! { "rows": 1, "cols": 2, "A": [1.0, 1.0], "b": [1.0], "c": [1.0, 2.0],
//!   "params": { "r": 0.5, "R": 1.0 } }
//! ```
//!
//! `A` is row-major. `params` is optional and so is its `L` entry.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::lp::{LpInstance, LpParameters};
use crate::trace::{StepObserver, StepRecord};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    rows: usize,
    cols: usize,
    #[serde(rename = "A")]
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<LpParameters>,
}

/// Parse an instance document.
pub fn parse_instance(text: &str) -> Result<(LpInstance, Option<LpParameters>)> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.a.len() != file.rows * file.cols {
        return Err(Error::Parse(format!(
            "field A has {} entries, expected rows * cols = {}",
            file.a.len(),
            file.rows * file.cols
        )));
    }
    let a = DenseMatrix::new(file.rows, file.cols, file.a)?;
    Ok((LpInstance::new(a, file.b, file.c)?, file.params))
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<(LpInstance, Option<LpParameters>)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn render_instance(lp: &LpInstance, params: Option<&LpParameters>) -> String {
    let file = InstanceFile {
        rows: lp.rows(),
        cols: lp.cols(),
        a: lp.a().as_slice().to_vec(),
        b: lp.b().to_vec(),
        c: lp.c().to_vec(),
        params: params.copied(),
    };
    serde_json::to_string_pretty(&file).expect("finite numbers always serialize")
}

pub fn save_instance(path: impl AsRef<Path>, lp: &LpInstance, params: Option<&LpParameters>) -> Result<()> {
    let mut text = render_instance(lp, params);
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub const TRACE_HEADER: &str = "iter,phase,t,l2_centrality,phi,gap,update_rank,snapshot_refresh";

/// CSV trace sink. The first write error is kept and reported by
/// [`TraceWriter::finish`]; later records are dropped.
pub struct TraceWriter<W: Write> {
    out: W,
    rows: usize,
    error: Option<std::io::Error>,
}

impl TraceWriter<BufWriter<File>> {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        Self::new(BufWriter::new(File::create(path)?))
    }
}

impl<W: Write> TraceWriter<W> {
    pub fn new(mut out: W) -> Result<Self> {
        writeln!(out, "{TRACE_HEADER}")?;
        Ok(Self { out, rows: 0, error: None })
    }

    /// Data rows written so far.
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn finish(mut self) -> Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e.into());
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> StepObserver for TraceWriter<W> {
    fn record(&mut self, rec: &StepRecord<'_>) {
        if self.error.is_some() {
            return;
        }
        let phi = rec.phi.map(|p| format!("{p:.16e}")).unwrap_or_default();
        let res = writeln!(
            self.out,
            "{},{},{:.16e},{:.16e},{},{:.16e},{},{}",
            rec.iteration,
            rec.phase,
            rec.t,
            rec.l2_centrality,
            phi,
            rec.gap,
            rec.update_rank,
            u8::from(rec.snapshot_refresh)
        );
        match res {
            Ok(()) => self.rows += 1,
            Err(e) => self.error = Some(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::tests::tiny;

    #[test]
    fn round_trip_is_bit_identical() {
        let lp = tiny();
        let params = LpParameters::new(0.5, 1.0).with_lipschitz(5f64.sqrt());
        let text = render_instance(&lp, Some(&params));
        let (back, p) = parse_instance(&text).unwrap();
        assert_eq!(back, lp);
        assert_eq!(p, Some(params));
        assert_eq!(render_instance(&back, p.as_ref()), text);

        let awkward = LpInstance::new(
            DenseMatrix::from_rows(&[vec![0.1, 1.0 / 3.0, std::f64::consts::PI]]).unwrap(),
            vec![2f64.sqrt()],
            vec![1e-300, -7.0e22, 0.3],
        )
        .unwrap();
        let (back, p) = parse_instance(&render_instance(&awkward, None)).unwrap();
        assert_eq!(back, awkward);
        assert_eq!(p, None);
    }

    #[test]
    fn bad_documents() {
        assert!(matches!(parse_instance("{"), Err(Error::Parse(_))));
        let short = r#"{"rows": 1, "cols": 2, "A": [1.0], "b": [1.0], "c": [1.0, 2.0]}"#;
        assert!(matches!(parse_instance(short), Err(Error::Parse(_))));
        let wide = r#"{"rows": 2, "cols": 1, "A": [1.0, 2.0], "b": [1.0, 1.0], "c": [1.0]}"#;
        assert!(matches!(parse_instance(wide), Err(Error::Dimension(_))));
        let dup = r#"{"rows": 2, "cols": 2, "A": [1, 1, 2, 2], "b": [1, 2], "c": [1, 1]}"#;
        assert!(matches!(parse_instance(dup), Err(Error::RankDeficient)));
        let typo = r#"{"rows": 1, "cols": 1, "A": [1], "b": [1], "c": [1], "parms": {}}"#;
        let err = parse_instance(typo).unwrap_err().to_string();
        assert!(err.contains("parms") && err.contains("line 1"), "{err}");
    }

    #[test]
    fn trace_rows() {
        let x = vec![0.5, 0.5];
        let st = crate::lp::PathState::new(
            crate::lp::PrimalDualPoint::unchecked(x, vec![1.0, 2.0], vec![0.0]),
            1.0,
        )
        .unwrap();
        let mut w = TraceWriter::new(Vec::new()).unwrap();
        for (i, phi) in [(1, None), (2, Some(3.0))] {
            w.record(&StepRecord {
                iteration: i,
                phase: "phase1",
                t: 0.5,
                l2_centrality: 0.0,
                phi,
                gap: 1.5,
                update_rank: 2,
                snapshot_refresh: i == 2,
                state: &st,
            });
        }
        assert_eq!(w.rows(), 2);
        let text = String::from_utf8(w.finish().unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER);
        assert_eq!(lines[1], "1,phase1,5.0000000000000000e-1,0.0000000000000000e0,,1.5000000000000000e0,2,0");
        assert!(lines[2].ends_with(",3.0000000000000000e0,1.5000000000000000e0,2,1"));
    }

    #[test]
    fn write_errors_surface_at_finish() {
        struct Full(usize);
        impl Write for Full {
            fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
                if buf.len() > self.0 {
                    return Err(std::io::Error::other("disk full"));
                }
                self.0 -= buf.len();
                Ok(buf.len())
            }
            fn flush(&mut self) -> std::io::Result<()> {
                Ok(())
            }
        }
        let st = crate::lp::PathState::new(crate::lp::PrimalDualPoint::unchecked(vec![1.0], vec![1.0], vec![0.0]), 1.0)
            .unwrap();
        let mut w = TraceWriter::new(Full(TRACE_HEADER.len() + 1)).unwrap();
        let rec = StepRecord {
            iteration: 1,
            phase: "",
            t: 1.0,
            l2_centrality: 0.0,
            phi: None,
            gap: 1.0,
            update_rank: 0,
            snapshot_refresh: false,
            state: &st,
        };
        w.record(&rec);
        w.record(&rec);
        assert_eq!(w.rows(), 0);
        assert!(matches!(w.finish(), Err(Error::Io(_))));
    }
}
