//! Report serialization. Every float is written with 17 significant digits so
//! that a report read back reproduces the exact `f64` values.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::casestudies::SweepRow;

/// Render a float in the report format: `{:.16e}`, or `null` if non-finite.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_owned()
    }
}

/// Pretty JSON formatter whose floats round-trip exactly.
struct ExactFloats<'a>(PrettyFormatter<'a>);

impl Formatter for ExactFloats<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serialize a report as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub const SWEEP_HEADER: [&str; 11] = [
    "gamma", "phi", "case", "w", "x", "y", "z", "payoff_a", "payoff_b", "difference", "simulator_discrepancy",
];

/// One CSV line per sweep row, in the order given.
pub fn sweep_csv(rows: &[SweepRow]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        let u = r.u_b;
        let mut rec = vec![fmt_f64(r.gamma), fmt_f64(r.phi), r.case.label().to_owned()];
        rec.extend(u.iter().map(|&c| fmt_f64(c)));
        rec.extend([r.payoff_a, r.payoff_b, r.difference, r.simulator_discrepancy].map(fmt_f64));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV fields are ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casestudies::sweep_point;

    #[test]
    fn floats_round_trip() {
        let values = [0.1, -25.0, std::f64::consts::PI, 1e-300, 5e-324, f64::MAX];
        let json = to_json(&values).unwrap();
        let back: Vec<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, values);
        assert!(json.contains("-2.5000000000000000e1"));
    }

    #[test]
    fn non_finite_becomes_null() {
        assert_eq!(to_json(&f64::NAN).unwrap(), "null\n");
        assert_eq!(fmt_f64(f64::INFINITY), "null");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rows = vec![sweep_point(0.0, std::f64::consts::PI).unwrap(), sweep_point(0.3, 0.2).unwrap()];
        let csv = sweep_csv(&rows).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("gamma,phi,case"));
        assert_eq!(lines[1].split(',').count(), SWEEP_HEADER.len());
    }
}
