//! Document assembly and serialization. Floats are written with 17 significant digits,
//! which round-trips every binary64 value exactly.

use std::io::{self, Write};

use mbp_core::diffops::PolyDiffOp;
use mbp_core::polyops::MatrixPolynomial;
use mbp_core::weights::{MatrixWeightSpec, ScalarWeightSpec};
use mbp_core::Matrix;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

pub const SCHEMA: &str = "mbp/1";

/// Pretty-printed JSON with `%.16e`-style floats; non-finite values become `null`.
pub struct Digits17<'a>(PrettyFormatter<'a>);

impl Default for Digits17<'_> {
    fn default() -> Self {
        Digits17(PrettyFormatter::with_indent(b"  "))
    }
}

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_string(doc: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17::default());
    doc.serialize(&mut ser).expect("serializing a Value into memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// `f64` as a JSON number; `serde_json` maps NaN and infinities to `null` itself.
pub fn num(v: f64) -> Value {
    json!(v)
}

/// Row-major nested arrays.
pub fn matrix(m: &Matrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| num(m[(i, j)])).collect())).collect())
}

/// Coefficient matrices indexed by the power of `x`.
pub fn matpoly(p: &MatrixPolynomial) -> Value {
    Value::Array(p.coeffs().iter().map(matrix).collect())
}

/// Coefficients indexed by the order of the derivative.
pub fn operator(d: &PolyDiffOp) -> Value {
    Value::Array(d.coeffs().iter().map(matpoly).collect())
}

pub fn spec(s: &MatrixWeightSpec) -> Value {
    let rows: Vec<Value> = s
        .rows
        .iter()
        .map(|r| match *r {
            ScalarWeightSpec::Hermite { b } => json!({ "b": num(b) }),
            ScalarWeightSpec::Laguerre { alpha } => json!({ "alpha": num(alpha) }),
            ScalarWeightSpec::Jacobi { alpha, beta } => json!({ "alpha": num(alpha), "beta": num(beta) }),
        })
        .collect();
    json!({
        "family": s.family.name(),
        "n": s.size,
        "rows": rows,
        "a": s.a.iter().copied().map(num).collect::<Vec<_>>(),
        "tolerance": num(s.working_tolerance),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

/// Inverse of [`matrix`], for reading documents back.
fn parse_matrix(v: &Value) -> Option<Matrix> {
    let rows = v.as_array()?;
    let n = rows.len();
    let mut flat = Vec::with_capacity(n * n);
    for r in rows {
        let r = r.as_array()?;
        if r.len() != n {
            return None;
        }
        for x in r {
            flat.push(x.as_f64()?);
        }
    }
    Some(Matrix::from_row_slice(n, n, &flat))
}

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, -2.0, 1.0 / 3.0, 6.02214076e23, 5e-324, f64::MAX, -0.0] {
            let s = to_string(&json!([v]));
            let back: Vec<f64> = serde_json::from_str(&s).unwrap();
            assert_eq!(back[0].to_bits(), v.to_bits(), "{s}");
        }
        assert!(to_string(&json!([0.1])).contains("1.0000000000000001e-1"));
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(num(f64::NAN), Value::Null);
        let m = Matrix::from_row_slice(1, 1, &[f64::INFINITY]);
        assert!(to_string(&matrix(&m)).contains("null"));
    }

    #[test]
    fn matrix_round_trip() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.5, -3.0, 1e-300]);
        let v: Value = serde_json::from_str(&to_string(&matrix(&m))).unwrap();
        assert_eq!(parse_matrix(&v).unwrap(), m);
    }
}
