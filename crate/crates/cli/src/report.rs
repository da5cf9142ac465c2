use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::{self, Write};

use serde::Serialize;
use trinomlab_core::{Felt, FieldCtx};

use crate::args::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ReportOnly,
}

impl Status {
    pub fn from_check(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ReportOnly => "report-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Str(String),
    List(Vec<String>),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Str(s) => s.clone(),
            Value::List(v) => format!("[{}]", v.join(",")),
        }
    }
}

pub fn num(v: impl Display) -> Value {
    Value::Str(v.to_string())
}

pub fn elem(x: Felt) -> Value {
    Value::List(x.coeffs().iter().map(|c| c.to_string()).collect())
}

/// Monic modulus `c_0..c_n`; `x` itself for prime fields.
pub fn modulus(ctx: &FieldCtx) -> Value {
    match ctx.modulus() {
        Some(m) => Value::List(m.iter().map(|c| c.to_string()).collect()),
        None => Value::List(vec!["0".into(), "1".into()]),
    }
}

pub type Map = BTreeMap<String, Value>;

#[derive(Debug, Clone, Serialize)]
pub struct ReportRecord {
    pub suite: String,
    pub params: Map,
    pub status: Status,
    pub detail: Map,
}

impl ReportRecord {
    pub fn new(suite: &str, status: Status) -> Self {
        ReportRecord {
            suite: suite.to_string(),
            params: Map::new(),
            status,
            detail: Map::new(),
        }
    }

    pub fn param(mut self, k: &str, v: Value) -> Self {
        self.params.insert(k.to_string(), v);
        self
    }

    pub fn detail(mut self, k: &str, v: Value) -> Self {
        self.detail.insert(k.to_string(), v);
        self
    }

    /// `p`, `n` and the modulus of `ctx` under keys with the given prefix.
    pub fn field(mut self, prefix: &str, ctx: &FieldCtx) -> Self {
        self.params
            .insert(format!("{prefix}p"), num(ctx.characteristic()));
        self.params.insert(format!("{prefix}n"), num(ctx.degree()));
        self.params.insert(format!("{prefix}modulus"), modulus(ctx));
        self
    }
}

pub struct Reporter {
    out: Box<dyn Write>,
    format: Format,
    csv_header_done: bool,
    pub failures: u64,
}

fn render_map(m: &Map) -> String {
    m.iter()
        .map(|(k, v)| format!("{k}={}", v.render()))
        .collect::<Vec<_>>()
        .join(" ")
}

impl Reporter {
    pub fn new(out: Box<dyn Write>, format: Format) -> Self {
        Reporter {
            out,
            format,
            csv_header_done: false,
            failures: 0,
        }
    }

    pub fn emit(&mut self, r: &ReportRecord) -> io::Result<()> {
        if r.status == Status::Fail {
            self.failures += 1;
        }
        match self.format {
            Format::Jsonl => {
                serde_json::to_writer(&mut self.out, r)?;
                writeln!(self.out)
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .has_headers(false)
                    .from_writer(Vec::new());
                if !self.csv_header_done {
                    w.write_record(["suite", "status", "params", "detail"])?;
                    self.csv_header_done = true;
                }
                let params = serde_json::to_string(&r.params)?;
                let detail = serde_json::to_string(&r.detail)?;
                w.write_record([r.suite.as_str(), r.status.as_str(), &params, &detail])?;
                let bytes = w
                    .into_inner()
                    .map_err(|e| io::Error::other(e.to_string()))?;
                self.out.write_all(&bytes)
            }
            Format::Human => writeln!(
                self.out,
                "{:<12} {:<11} {} | {}",
                r.suite,
                r.status.as_str(),
                render_map(&r.params),
                render_map(&r.detail)
            ),
        }
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::RefCell;
    use std::rc::Rc;

    #[derive(Clone, Default)]
    struct Sink(Rc<RefCell<Vec<u8>>>);

    impl Write for Sink {
        fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
            self.0.borrow_mut().extend_from_slice(buf);
            Ok(buf.len())
        }
        fn flush(&mut self) -> io::Result<()> {
            Ok(())
        }
    }

    fn sample() -> ReportRecord {
        let f = FieldCtx::new(5, 1).unwrap();
        ReportRecord::new("demo", Status::Fail)
            .field("", &f)
            .param("t", elem(f.from_int(3)))
            .detail("value", num(-12))
    }

    fn render(format: Format) -> (String, u64) {
        let sink = Sink::default();
        let mut rep = Reporter::new(Box::new(sink.clone()), format);
        rep.emit(&sample()).unwrap();
        rep.emit(&ReportRecord::new("demo", Status::ReportOnly))
            .unwrap();
        let text = String::from_utf8(sink.0.borrow().clone()).unwrap();
        (text, rep.failures)
    }

    #[test]
    fn jsonl_lines() {
        let (text, failures) = render(Format::Jsonl);
        assert_eq!(failures, 1);
        let first = text.lines().next().unwrap();
        assert_eq!(
            first,
            r#"{"suite":"demo","params":{"modulus":["0","1"],"n":"1","p":"5","t":["3"]},"status":"fail","detail":{"value":"-12"}}"#
        );
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .contains(r#""status":"report-only""#));
    }

    #[test]
    fn csv_has_one_header() {
        let (text, _) = render(Format::Csv);
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().next().unwrap(), "suite,status,params,detail");
    }

    #[test]
    fn human_is_single_line() {
        let (text, _) = render(Format::Human);
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("demo"));
        assert!(first.ends_with("| value=-12"));
        assert!(first.contains("modulus=[0,1]"));
    }
}
