//! Plain-text model files.
//!
//! ```text
//! memres-ridge-model v1
//! width 3
//! reg_alpha 1.0000000000000000e-3
//! solver cholesky
//! scales 1.0000000000000000e0 ...
//! intercept -2.5000000000000000e-1
//! weights
//! 1.2345678901234567e0
//! ...
//! ```
//!
//! Floats are written with 17 significant digits, which round-trips every
//! finite `f64` bit-exactly.

use std::io::{BufRead, Write};

use super::ridge::{RidgeModel, Solver};
use super::ReadoutError;

const MAGIC: &str = "memres-ridge-model v1";

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_model<W: Write>(model: &RidgeModel, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "width {}", model.width())?;
    writeln!(w, "reg_alpha {}", fmt(model.reg_alpha))?;
    let solver = match model.solver {
        Solver::Cholesky => "cholesky",
        Solver::LeastSquares => "least-squares",
    };
    writeln!(w, "solver {solver}")?;
    let scales: Vec<String> = model.scales.iter().copied().map(fmt).collect();
    writeln!(w, "scales {}", scales.join(" "))?;
    writeln!(w, "intercept {}", fmt(model.intercept))?;
    writeln!(w, "weights")?;
    for x in &model.weights {
        writeln!(w, "{}", fmt(*x))?;
    }
    Ok(())
}

fn bad(msg: impl Into<String>) -> ReadoutError {
    ReadoutError::ModelFormat(msg.into())
}

fn parse_f64(s: &str) -> Result<f64, ReadoutError> {
    s.parse().map_err(|_| bad(format!("not a number: `{s}`")))
}

fn field<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str, ReadoutError> {
    let line = line.ok_or_else(|| bad(format!("missing `{key}` line")))?;
    line.strip_prefix(key)
        .map(str::trim)
        .ok_or_else(|| bad(format!("expected `{key}`, found `{line}`")))
}

pub fn read_model<R: BufRead>(r: R) -> Result<RidgeModel, ReadoutError> {
    let lines: Vec<String> = r.lines().collect::<Result<_, _>>().map_err(|e| bad(e.to_string()))?;
    let mut it = lines.iter().map(|l| l.trim()).filter(|l| !l.is_empty());
    if it.next() != Some(MAGIC) {
        return Err(bad("missing header line"));
    }
    let width: usize = field(it.next(), "width")?
        .parse()
        .map_err(|_| bad("width is not an integer"))?;
    let reg_alpha = parse_f64(field(it.next(), "reg_alpha")?)?;
    let solver = match field(it.next(), "solver")? {
        "cholesky" => Solver::Cholesky,
        "least-squares" => Solver::LeastSquares,
        other => return Err(bad(format!("unknown solver `{other}`"))),
    };
    let scales = field(it.next(), "scales")?
        .split_whitespace()
        .map(parse_f64)
        .collect::<Result<Vec<_>, _>>()?;
    let intercept = parse_f64(field(it.next(), "intercept")?)?;
    if it.next() != Some("weights") {
        return Err(bad("missing `weights` line"));
    }
    let weights = it.map(parse_f64).collect::<Result<Vec<_>, _>>()?;
    if weights.len() != width || scales.len() != width {
        return Err(bad(format!(
            "width {width} but {} weights and {} scales",
            weights.len(),
            scales.len()
        )));
    }
    Ok(RidgeModel {
        weights,
        intercept,
        reg_alpha,
        scales,
        solver,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            weights in proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO, 0..60),
            intercept in proptest::num::f64::ANY.prop_filter("finite", |v| v.is_finite()),
            alpha in 0.0f64..1e6,
        ) {
            let model = RidgeModel {
                scales: weights.iter().map(|w| w.abs() + 1.0).collect(),
                weights,
                intercept,
                reg_alpha: alpha,
                solver: Solver::LeastSquares,
            };
            let mut buf = Vec::new();
            write_model(&model, &mut buf).unwrap();
            let back = read_model(buf.as_slice()).unwrap();
            prop_assert_eq!(back.weights.len(), model.weights.len());
            for (a, b) in back.weights.iter().zip(&model.weights) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
            prop_assert_eq!(back.intercept.to_bits(), model.intercept.to_bits());
            prop_assert_eq!(back, model);
        }
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(read_model("nonsense".as_bytes()).is_err());
        let text = format!("{MAGIC}\nwidth 2\nreg_alpha 0\nsolver cholesky\nscales 1 1\nintercept 0\nweights\n1\n");
        assert!(matches!(read_model(text.as_bytes()), Err(ReadoutError::ModelFormat(_))));
    }
}
