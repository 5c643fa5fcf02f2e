//! The one CSV schema shared by every subcommand:
//!
//! `kind,A,I,d,K,ball_mode,trials,seed,value,extra1,extra2,status`
//!
//! Unused columns stay empty. Floats are rounded to 9 significant digits
//! and printed with shortest round-trip formatting, so re-reading a file
//! and re-serializing it reproduces the bytes.

use crate::CliError;

pub const CSV_HEADER: &str = "kind,A,I,d,K,ball_mode,trials,seed,value,extra1,extra2,status";

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Row {
    pub kind: String,
    pub a: Option<usize>,
    pub i: Option<usize>,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub ball_mode: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub value: Option<f64>,
    pub extra1: Option<f64>,
    pub extra2: Option<f64>,
    pub status: String,
}

/// Round to 9 significant digits, then let the shortest round-trip
/// formatter print the result.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float reparses");
    format!("{rounded}")
}

fn opt_usize(v: &Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_u64(v: &Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_float(v: &Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

impl Row {
    pub fn to_line(&self) -> String {
        // Status text may quote error messages; keep the schema comma-free.
        let status = self.status.replace(',', ";");
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            opt_usize(&self.a),
            opt_usize(&self.i),
            opt_usize(&self.d),
            opt_usize(&self.k),
            self.ball_mode.clone().unwrap_or_default(),
            opt_u64(&self.trials),
            opt_u64(&self.seed),
            opt_float(&self.value),
            opt_float(&self.extra1),
            opt_float(&self.extra2),
            status
        )
    }
}

/// A parsed CSV document: leading `#` comments, then the header, then rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CsvDocument {
    pub comments: Vec<String>,
    pub rows: Vec<Row>,
}

impl CsvDocument {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.to_line());
            out.push('\n');
        }
        out
    }
}

fn parse_opt_usize(field: &str, what: &str) -> Result<Option<usize>, CliError> {
    if field.is_empty() {
        return Ok(None);
    }
    field.parse::<usize>().map(Some).map_err(|_| {
        CliError::InvalidArgument(format!("CSV field {what} is not an integer: '{field}'"))
    })
}

fn parse_opt_u64(field: &str, what: &str) -> Result<Option<u64>, CliError> {
    if field.is_empty() {
        return Ok(None);
    }
    field.parse::<u64>().map(Some).map_err(|_| {
        CliError::InvalidArgument(format!("CSV field {what} is not an integer: '{field}'"))
    })
}

fn parse_opt_f64(field: &str, what: &str) -> Result<Option<f64>, CliError> {
    if field.is_empty() {
        return Ok(None);
    }
    field.parse::<f64>().map(Some).map_err(|_| {
        CliError::InvalidArgument(format!("CSV field {what} is not a number: '{field}'"))
    })
}

pub fn parse_csv(text: &str) -> Result<CsvDocument, CliError> {
    let mut doc = CsvDocument::default();
    let mut saw_header = false;
    for raw in text.lines() {
        if raw.starts_with('#') && !saw_header {
            doc.comments.push(raw.to_string());
            continue;
        }
        if !saw_header {
            if raw != CSV_HEADER {
                return Err(CliError::InvalidArgument(format!(
                    "expected header '{CSV_HEADER}', found '{raw}'"
                )));
            }
            saw_header = true;
            continue;
        }
        if raw.is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 12 {
            return Err(CliError::InvalidArgument(format!(
                "CSV row has {} fields, expected 12: '{raw}'",
                fields.len()
            )));
        }
        doc.rows.push(Row {
            kind: fields[0].to_string(),
            a: parse_opt_usize(fields[1], "A")?,
            i: parse_opt_usize(fields[2], "I")?,
            d: parse_opt_usize(fields[3], "d")?,
            k: parse_opt_usize(fields[4], "K")?,
            ball_mode: if fields[5].is_empty() {
                None
            } else {
                Some(fields[5].to_string())
            },
            trials: parse_opt_u64(fields[6], "trials")?,
            seed: parse_opt_u64(fields[7], "seed")?,
            value: parse_opt_f64(fields[8], "value")?,
            extra1: parse_opt_f64(fields[9], "extra1")?,
            extra2: parse_opt_f64(fields[10], "extra2")?,
            status: fields[11].to_string(),
        });
    }
    if !saw_header {
        return Err(CliError::InvalidArgument("CSV has no header line".into()));
    }
    Ok(doc)
}
