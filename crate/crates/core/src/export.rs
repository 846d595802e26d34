//! CSV and JSON encodings.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which is
//! enough to reproduce every `f64` bit for bit. CSV uses `\n` terminators and
//! may carry leading `# ` comment lines; JSON objects keep field order.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::geometric::OscillationReport;
use crate::linear_evt::RhoEstimate;
use crate::report::{ConvergenceReport, GridPoint};

/// `x` with 17 significant digits; `nan`, `inf` and `-inf` otherwise.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => fmt17(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Renders the table, preceded by one `# ` line per comment.
    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            for line in c.lines() {
                out.push_str("# ");
                out.push_str(line);
                out.push('\n');
            }
        }
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Cell::render))
                .expect("in-memory write");
        }
        let bytes = writer.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&bytes).expect("csv output is utf-8"));
        out
    }
}

pub trait ToTable {
    fn to_table(&self) -> Table;
}

impl ToTable for ConvergenceReport {
    /// `eps,u,v,ratio` rows for ratio grids, `n,x,value` rows otherwise.
    fn to_table(&self) -> Table {
        let pairs = matches!(self.points.first(), Some(GridPoint::Pair { .. }));
        let mut table = if pairs {
            Table::new(&["eps", "u", "v", "ratio"])
        } else {
            Table::new(&[self.scale_name.as_str(), "x", "value"])
        };
        for (point, row) in self.points.iter().zip(&self.values) {
            for (&scale, &value) in self.grid.iter().zip(row) {
                let cells = match *point {
                    GridPoint::Pair { u, v } => {
                        vec![
                            Cell::Float(scale),
                            Cell::Float(u),
                            Cell::Float(v),
                            Cell::Float(value),
                        ]
                    }
                    GridPoint::Abscissa { x } => {
                        let scale = if self.scale_name == "n" {
                            Cell::UInt(scale as u64)
                        } else {
                            Cell::Float(scale)
                        };
                        vec![scale, Cell::Float(x), Cell::Float(value)]
                    }
                };
                table.push(cells);
            }
        }
        table
    }
}

impl ToTable for RhoEstimate {
    fn to_table(&self) -> Table {
        let mut table = Table::new(&["eps", "w", "estimate"]);
        for s in &self.per_scale {
            table.push(vec![
                Cell::Float(s.eps),
                Cell::Float(self.w),
                Cell::Float(s.estimate),
            ]);
        }
        table
    }
}

impl ToTable for OscillationReport {
    fn to_table(&self) -> Table {
        let mut table = Table::new(&["n", "m", "probability"]);
        for pt in &self.probe {
            table.push(vec![
                Cell::UInt(pt.n),
                Cell::Int(pt.m),
                Cell::Float(pt.probability),
            ]);
        }
        table
    }
}

/// Pretty JSON formatter that prints floats with 17 significant digits.
struct Fixed17 {
    inner: PrettyFormatter<'static>,
}

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Pretty-printed JSON with 17-digit floats and a trailing newline.
///
/// Non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let formatter = Fixed17 {
        inner: PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits utf-8"))
}
