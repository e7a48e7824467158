//! The fixation log: one CSV row per fixation.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scanpath::{Fixation, Scanpath, Source, StopReason};

pub const FIXATION_LOG_HEADER: [&str; 8] = [
    "subject_id",
    "trial_id",
    "fixation_index",
    "x_dva",
    "y_dva",
    "duration_ms",
    "stop_reason",
    "source",
];

pub fn read_fixation_log(path: impl AsRef<Path>) -> Result<Vec<Scanpath>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    parse_fixation_log(file)
}

struct Row {
    fixation: Fixation,
    stop_reason: StopReason,
    source: Source,
    line: usize,
}

/// Scanpaths in order of first appearance, grouped by (subject, trial).
pub fn parse_fixation_log<R: Read>(reader: R) -> Result<Vec<Scanpath>> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(reader);
    let mut records = csv.records();
    match records.next() {
        None => return Ok(Vec::new()),
        Some(header) => {
            let header = header.map_err(|e| csv_error(e, 1))?;
            let found: Vec<&str> = header.iter().map(str::trim).collect();
            if found != FIXATION_LOG_HEADER {
                return Err(Error::Parse {
                    line: 1,
                    message: format!(
                        "expected header {}, got {}",
                        FIXATION_LOG_HEADER.join(","),
                        found.join(",")
                    ),
                });
            }
        }
    }

    let mut order: Vec<(String, String)> = Vec::new();
    let mut groups: HashMap<(String, String), Vec<Row>> = HashMap::new();
    for record in records {
        let record = record.map_err(|e| csv_error(e, 0))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != FIXATION_LOG_HEADER.len() {
            return Err(Error::Parse {
                line,
                message: format!(
                    "expected {} fields, got {}",
                    FIXATION_LOG_HEADER.len(),
                    record.len()
                ),
            });
        }
        let field = |i: usize| record[i].trim();
        let bad = |name: &str, detail: String| Error::Parse {
            line,
            message: format!("{name}: {detail}"),
        };
        let number = |i: usize| -> Result<f64> {
            let v: f64 = field(i).parse().map_err(|_| {
                bad(
                    FIXATION_LOG_HEADER[i],
                    format!("'{}' is not a number", field(i)),
                )
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad(FIXATION_LOG_HEADER[i], "must be finite".into()))
            }
        };
        let index: usize = field(2).parse().map_err(|_| {
            bad(
                "fixation_index",
                format!("'{}' is not a non-negative integer", field(2)),
            )
        })?;
        let duration_ms = if field(5).is_empty() {
            None
        } else {
            let d = number(5)?;
            if d < 0.0 {
                return Err(bad("duration_ms", "must be non-negative".into()));
            }
            Some(d)
        };
        let stop_reason: StopReason = field(6)
            .parse()
            .map_err(|e: Error| bad("stop_reason", e.to_string()))?;
        let source: Source = field(7)
            .parse()
            .map_err(|e: Error| bad("source", e.to_string()))?;
        if field(0).is_empty() || field(1).is_empty() {
            return Err(bad("subject_id/trial_id", "must not be empty".into()));
        }
        let key = (field(0).to_string(), field(1).to_string());
        let row = Row {
            fixation: Fixation {
                index,
                x_dva: number(3)?,
                y_dva: number(4)?,
                duration_ms,
                on_target: None,
            },
            stop_reason,
            source,
            line,
        };
        groups
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(row);
    }

    let mut out = Vec::with_capacity(order.len());
    for key in order {
        let mut rows = groups.remove(&key).expect("grouped key");
        rows.sort_by_key(|r| r.fixation.index);
        let (subject_id, trial_id) = key;
        if rows.iter().enumerate().any(|(i, r)| r.fixation.index != i) {
            let found: Vec<String> = rows.iter().map(|r| r.fixation.index.to_string()).collect();
            return Err(Error::Validation(format!(
                "trial {trial_id} (subject {subject_id}): fixation indices [{}] are not 0..{}",
                found.join(","),
                rows.len()
            )));
        }
        let first = &rows[0];
        if let Some(r) = rows
            .iter()
            .find(|r| r.stop_reason != first.stop_reason || r.source != first.source)
        {
            return Err(Error::Parse {
                line: r.line,
                message: format!(
                    "trial {trial_id}: stop_reason and source must agree across its rows"
                ),
            });
        }
        out.push(Scanpath {
            subject_id,
            trial_id,
            stop_reason: first.stop_reason,
            source: first.source,
            fixations: rows.into_iter().map(|r| r.fixation).collect(),
        });
    }
    Ok(out)
}

fn csv_error(e: csv::Error, fallback_line: usize) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line() as usize);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

pub fn write_fixation_log(path: impl AsRef<Path>, scanpaths: &[Scanpath]) -> Result<()> {
    let path = path.as_ref();
    let mut file = File::create(path).map_err(|e| Error::file(path, e))?;
    format_fixation_log(&mut file, scanpaths)?;
    file.flush().map_err(|e| Error::file(path, e))
}

/// Floats use the shortest representation that parses back exactly.
pub fn format_fixation_log<W: Write>(writer: W, scanpaths: &[Scanpath]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    csv.write_record(FIXATION_LOG_HEADER).map_err(io)?;
    for s in scanpaths {
        for f in &s.fixations {
            csv.write_record([
                s.subject_id.as_str(),
                s.trial_id.as_str(),
                &f.index.to_string(),
                &f.x_dva.to_string(),
                &f.y_dva.to_string(),
                &f.duration_ms.map(|d| d.to_string()).unwrap_or_default(),
                s.stop_reason.as_str(),
                s.source.as_str(),
            ])
            .map_err(io)?;
        }
    }
    csv.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str =
        "subject_id,trial_id,fixation_index,x_dva,y_dva,duration_ms,stop_reason,source\n";

    #[test]
    fn header_only_is_empty() {
        assert!(parse_fixation_log(HEADER.as_bytes()).unwrap().is_empty());
        assert!(parse_fixation_log("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn groups_by_subject_and_trial() {
        let mut text = HEADER.to_string();
        for s in ["s1", "s2"] {
            for t in ["a", "b"] {
                for i in 0..3 {
                    text += &format!("{s},{t},{i},{}.5,2,250,max_fixations,experimental\n", i);
                }
            }
        }
        let data = parse_fixation_log(text.as_bytes()).unwrap();
        assert_eq!(data.len(), 4);
        assert_eq!(data[1].subject_id, "s1");
        assert_eq!(data[1].trial_id, "b");
        assert_eq!(data[3].fixations[2].x_dva, 2.5);
        assert_eq!(data[0].fixations[0].duration_ms, Some(250.0));
    }

    #[test]
    fn malformed_row_reports_line() {
        let text =
            format!("{HEADER}s,t,0,1,1,,max_fixations,model\ns,t,1,abc,1,,max_fixations,model\n");
        match parse_fixation_log(text.as_bytes()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("x_dva"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gap_in_indices_names_trial() {
        let text = format!(
            "{HEADER}s,trial7,0,1,1,,max_fixations,model\ns,trial7,2,1,1,,max_fixations,model\n"
        );
        match parse_fixation_log(text.as_bytes()) {
            Err(Error::Validation(m)) => assert!(m.contains("trial7")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_header_is_rejected() {
        assert!(matches!(
            parse_fixation_log("a,b,c\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn round_trip_is_exact() {
        let mut s =
            Scanpath::from_points("m", "t1", &[(0.1, 1.0 / 3.0), (7.25, 1e-7)], Source::Model);
        s.stop_reason = StopReason::TargetFound;
        let mut e = Scanpath::from_points("h", "t,2", &[(3.0, 4.0)], Source::Experimental);
        e.fixations[0].duration_ms = Some(212.5);
        let data = vec![s, e];
        let mut buf = Vec::new();
        format_fixation_log(&mut buf, &data).unwrap();
        assert_eq!(parse_fixation_log(buf.as_slice()).unwrap(), data);
    }
}
