use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    /// `node_a,node_b,t_start,t_end`
    Interval,
    /// `t,node_a,node_b,up|down`
    Event,
}

impl FromStr for TraceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval" | "interval-csv" => Ok(TraceFormat::Interval),
            "event" | "event-csv" => Ok(TraceFormat::Event),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// One contact between dense node ids `u < v` over `[start, end)` seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub u: usize,
    pub v: usize,
    pub start: f64,
    pub end: f64,
}

impl Contact {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// Normalized contact trace.
///
/// Contacts are sorted by pair then start time, and contacts of the same
/// pair never overlap or touch.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactTrace {
    node_ids: Vec<String>,
    contacts: Vec<Contact>,
    duration: f64,
}

impl ContactTrace {
    /// Opaque node labels, indexed by dense id.
    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn contacts(&self) -> &[Contact] {
        &self.contacts
    }

    /// End of the last contact or event, in seconds from time 0.
    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn is_empty(&self) -> bool {
        self.contacts.is_empty()
    }

    /// Writes the trace in interval form, with labels in place of dense ids.
    /// Lines are ordered by label pair then start time, so the output only
    /// depends on the labelled contacts and not on id assignment.
    pub fn write_interval_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut rows: Vec<(&str, &str, f64, f64)> = self
            .contacts
            .iter()
            .map(|c| {
                let (a, b) = (self.node_ids[c.u].as_str(), self.node_ids[c.v].as_str());
                (a.min(b), a.max(b), c.start, c.end)
            })
            .collect();
        rows.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)).then(x.2.total_cmp(&y.2)));
        for (a, b, start, end) in rows {
            writeln!(out, "{a},{b},{start},{end}")?;
        }
        Ok(())
    }
}

/// Non-fatal anomaly met while parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTrace {
    pub trace: ContactTrace,
    pub warnings: Vec<ParseWarning>,
}

/// Reads a contact trace. Blank lines and `#` comments are skipped, and the
/// first data line may be a header. Node labels get dense ids in order of
/// first appearance.
pub fn parse_contacts<R: BufRead>(input: R, format: TraceFormat) -> Result<ParsedTrace> {
    let mut builder = Builder::default();
    let mut open: HashMap<(usize, usize), (f64, usize)> = HashMap::new();
    let mut seen_data = false;
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            reason: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(parse_error(
                line_no,
                format!("expected 4 fields, found {}", fields.len()),
            ));
        }
        let first_data = !seen_data;
        seen_data = true;
        match format {
            TraceFormat::Interval => {
                let (Ok(start), Ok(end)) = (fields[2].parse::<f64>(), fields[3].parse::<f64>())
                else {
                    if first_data {
                        continue;
                    }
                    return Err(parse_error(line_no, "time fields must be numbers"));
                };
                check_time(start, line_no)?;
                check_time(end, line_no)?;
                if start >= end {
                    return Err(parse_error(
                        line_no,
                        format!("reversed or empty interval [{start}, {end})"),
                    ));
                }
                let pair = builder.pair(fields[0], fields[1], line_no)?;
                builder.push(pair, start, end);
            }
            TraceFormat::Event => {
                let Ok(t) = fields[0].parse::<f64>() else {
                    if first_data {
                        continue;
                    }
                    return Err(parse_error(line_no, "time field must be a number"));
                };
                check_time(t, line_no)?;
                let pair = builder.pair(fields[1], fields[2], line_no)?;
                builder.horizon = builder.horizon.max(t);
                match fields[3].to_ascii_lowercase().as_str() {
                    "up" => {
                        if let Entry::Vacant(slot) = open.entry(pair) {
                            slot.insert((t, line_no));
                        } else {
                            builder.warn(line_no, "repeated `up` for an open contact ignored");
                        }
                    }
                    "down" => match open.remove(&pair) {
                        Some((start, _)) if start < t => builder.push(pair, start, t),
                        Some((start, _)) if start > t => {
                            return Err(parse_error(
                                line_no,
                                format!("`down` at {t} precedes `up` at {start}"),
                            ))
                        }
                        Some(_) => builder.warn(line_no, "zero-length contact dropped"),
                        None => builder.warn(line_no, "`down` without a matching `up` ignored"),
                    },
                    other => return Err(parse_error(line_no, format!("unknown event `{other}`"))),
                }
            }
        }
    }
    let horizon = builder.horizon;
    let mut dangling: Vec<_> = open.into_iter().collect();
    dangling.sort_by_key(|&(_, (_, line))| line);
    for (pair, (start, line)) in dangling {
        builder.warn(
            line,
            format!("contact never closed; ended at trace end {horizon}"),
        );
        if start < horizon {
            builder.push(pair, start, horizon);
        }
    }
    Ok(builder.finish())
}

fn parse_error(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn check_time(t: f64, line: usize) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(parse_error(
            line,
            format!("time must be finite and non-negative, got {t}"),
        ));
    }
    Ok(())
}

#[derive(Default)]
struct Builder {
    ids: HashMap<String, usize>,
    labels: Vec<String>,
    intervals: BTreeMap<(usize, usize), Vec<(f64, f64)>>,
    horizon: f64,
    warnings: Vec<ParseWarning>,
}

impl Builder {
    fn id(&mut self, label: &str) -> usize {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.ids.insert(label.to_string(), id);
        self.labels.push(label.to_string());
        id
    }

    fn pair(&mut self, a: &str, b: &str, line: usize) -> Result<(usize, usize)> {
        if a.is_empty() || b.is_empty() {
            return Err(parse_error(line, "empty node id"));
        }
        if a == b {
            return Err(parse_error(line, format!("self-contact of node `{a}`")));
        }
        let (u, v) = (self.id(a), self.id(b));
        Ok((u.min(v), u.max(v)))
    }

    fn push(&mut self, pair: (usize, usize), start: f64, end: f64) {
        self.horizon = self.horizon.max(end);
        self.intervals.entry(pair).or_default().push((start, end));
    }

    fn warn(&mut self, line: usize, message: impl Into<String>) {
        self.warnings.push(ParseWarning {
            line,
            message: message.into(),
        });
    }

    fn finish(self) -> ParsedTrace {
        let mut contacts = Vec::new();
        for ((u, v), mut spans) in self.intervals {
            spans.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut current: Option<(f64, f64)> = None;
            for (s, e) in spans {
                current = match current {
                    Some((cs, ce)) if s <= ce => Some((cs, ce.max(e))),
                    Some((cs, ce)) => {
                        contacts.push(Contact {
                            u,
                            v,
                            start: cs,
                            end: ce,
                        });
                        Some((s, e))
                    }
                    None => Some((s, e)),
                };
            }
            if let Some((start, end)) = current {
                contacts.push(Contact { u, v, start, end });
            }
        }
        ParsedTrace {
            trace: ContactTrace {
                node_ids: self.labels,
                contacts,
                duration: self.horizon,
            },
            warnings: self.warnings,
        }
    }
}
