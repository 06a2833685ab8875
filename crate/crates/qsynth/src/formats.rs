use std::fmt::Write as _;
use std::str::FromStr;

use qsynth_core::{DivergenceReport, Histogram, NoiseModel, PmfError, PmfTable, SimError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("value {index} is negative or not finite")]
    Domain { index: usize },
    #[error("input contains no values")]
    EmptyInput,
    #[error(transparent)]
    Pmf(#[from] PmfError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

fn parse_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

/// Layout of a PMF table file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PmfFormat {
    /// One decimal per line; `#` starts a comment. Commas also separate values.
    #[default]
    Lines,
    /// Header `bin,height`, then `index,value` (or bare `value`) rows.
    Csv,
}

impl PmfFormat {
    /// `.csv` files are CSV, everything else is `lines`.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => PmfFormat::Csv,
            _ => PmfFormat::Lines,
        }
    }
}

/// Content lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_height(token: &str, line: usize) -> Result<f64, FormatError> {
    token
        .trim()
        .parse::<f64>()
        .map_err(|_| parse_error(line, format!("`{}` is not a number", token.trim())))
}

pub fn parse_pmf_table(text: &str, format: PmfFormat) -> Result<PmfTable, FormatError> {
    let mut heights = Vec::new();
    match format {
        PmfFormat::Lines => {
            for (line, content) in content_lines(text) {
                for token in content.split(',').filter(|t| !t.trim().is_empty()) {
                    heights.push(parse_height(token, line)?);
                }
            }
        }
        PmfFormat::Csv => {
            let mut rows = content_lines(text);
            match rows.next() {
                Some((_, header)) if header.replace(' ', "") == "bin,height" => {}
                Some((line, _)) => return Err(parse_error(line, "expected header `bin,height`")),
                None => return Err(FormatError::EmptyInput),
            }
            for (line, row) in rows {
                let fields: Vec<&str> = row.split(',').map(str::trim).collect();
                let value = match fields.as_slice() {
                    [value] => value,
                    [index, value] => {
                        let index: usize = index
                            .parse()
                            .map_err(|_| parse_error(line, format!("`{index}` is not a bin index")))?;
                        if index != heights.len() {
                            return Err(parse_error(line, format!("expected bin {}, found {index}", heights.len())));
                        }
                        value
                    }
                    _ => return Err(parse_error(line, "expected `index,value`")),
                };
                heights.push(parse_height(value, line)?);
            }
        }
    }
    if heights.is_empty() {
        return Err(FormatError::EmptyInput);
    }
    if let Some(index) = heights.iter().position(|h| !h.is_finite() || *h < 0.0) {
        return Err(FormatError::Domain { index });
    }
    Ok(PmfTable::new(heights)?)
}

/// `lines` format. Values use the shortest decimal that reads back exactly.
pub fn serialize_pmf_table(table: &PmfTable) -> String {
    let mut out = String::new();
    for h in table.heights() {
        writeln!(out, "{h}").unwrap();
    }
    out
}

/// `state,count` rows sorted by state. Qubit 0 is the least significant bit
/// of `state`.
pub fn serialize_histogram(histogram: &Histogram) -> String {
    let mut out = String::from("state,count\n");
    for (state, count) in histogram.counts().iter().enumerate() {
        writeln!(out, "{state},{count}").unwrap();
    }
    out
}

/// Read a histogram CSV. Missing states count as zero; `num_states` fixes the
/// length, otherwise it is the number of rows rounded up to a power of two.
pub fn parse_histogram(text: &str, num_states: Option<usize>) -> Result<Histogram, FormatError> {
    let mut rows = content_lines(text);
    match rows.next() {
        Some((_, header)) if header.replace(' ', "") == "state,count" => {}
        Some((line, _)) => return Err(parse_error(line, "expected header `state,count`")),
        None => return Err(FormatError::EmptyInput),
    }
    let mut entries = Vec::new();
    for (line, row) in rows {
        let (state, count) = row.split_once(',').ok_or_else(|| parse_error(line, "expected `state,count`"))?;
        let state: usize = state.trim().parse().map_err(|_| parse_error(line, "state is not an integer"))?;
        let count: u64 = count.trim().parse().map_err(|_| parse_error(line, "count is not an integer"))?;
        entries.push((line, state, count));
    }
    let max_state = entries.iter().map(|e| e.1 + 1).max().unwrap_or(0);
    let len = num_states.unwrap_or_else(|| max_state.max(entries.len()).next_power_of_two());
    let mut counts = vec![0u64; len];
    let mut seen = vec![false; len];
    for (line, state, count) in entries {
        if state >= len {
            return Err(parse_error(line, format!("state {state} out of range for {len} states")));
        }
        if seen[state] {
            return Err(parse_error(line, format!("state {state} listed twice")));
        }
        seen[state] = true;
        counts[state] = count;
    }
    Ok(Histogram::from_counts(counts)?)
}

/// `p1`, `p2` and `readout_flip` as `key = value` lines. Missing keys are 0.
pub fn parse_noise_model(text: &str) -> Result<NoiseModel, FormatError> {
    let (mut p1, mut p2, mut readout) = (0.0, 0.0, 0.0);
    for (line, content) in content_lines(text) {
        let (key, value) = content.split_once('=').ok_or_else(|| parse_error(line, "expected `key = value`"))?;
        let value = f64::from_str(value.trim()).map_err(|_| parse_error(line, "value is not a number"))?;
        match key.trim() {
            "p1" => p1 = value,
            "p2" => p2 = value,
            "readout_flip" => readout = value,
            other => return Err(parse_error(line, format!("unknown noise parameter `{other}`"))),
        }
    }
    Ok(NoiseModel::new(p1, p2, readout)?)
}

pub fn serialize_noise_model(noise: &NoiseModel) -> String {
    format!("p1 = {}\np2 = {}\nreadout_flip = {}\n", noise.p1, noise.p2, noise.readout_flip)
}

fn format_value(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

/// One `key=value` line per report field; infinities are written `inf`.
pub fn serialize_report(report: &DivergenceReport) -> String {
    let mut out = String::new();
    for (key, value) in report.fields() {
        if key == "shots" {
            writeln!(out, "shots={}", report.shots).unwrap();
        } else {
            writeln!(out, "{key}={}", format_value(value)).unwrap();
        }
    }
    out
}

pub fn parse_report(text: &str) -> Result<DivergenceReport, FormatError> {
    let mut values = std::collections::HashMap::new();
    for (line, content) in content_lines(text) {
        let (key, value) = content.split_once('=').ok_or_else(|| parse_error(line, "expected `key=value`"))?;
        let value: f64 = value.trim().parse().map_err(|_| parse_error(line, "value is not a number"))?;
        values.insert(key.trim().to_string(), (line, value));
    }
    let get = |key: &str| {
        values
            .get(key)
            .map(|(_, v)| *v)
            .ok_or_else(|| parse_error(0, format!("missing field `{key}`")))
    };
    Ok(DivergenceReport {
        kl_theory_vs_empirical: get("kl_theory_vs_empirical")?,
        kl_empirical_vs_theory: get("kl_empirical_vs_theory")?,
        js: get("js")?,
        g_counts: get("g_counts")?,
        g_paper: get("g_paper")?,
        chi_square: get("chi_square")?,
        p_value_paper: get("p_value_paper")?,
        p_value_g: get("p_value_g")?,
        p_value_chi_square: get("p_value_chi_square")?,
        shots: get("shots")? as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_table() {
        let t = parse_pmf_table("1\n1\n1\n1\n", PmfFormat::Lines).unwrap();
        assert_eq!(t.heights(), [1.0; 4]);
    }

    #[test]
    fn tolerant_lines() {
        let t = parse_pmf_table("# heights\n\n 0.5 \n\n2 # second\n  \n", PmfFormat::Lines).unwrap();
        assert_eq!(t.heights(), [0.5, 2.0]);
        let t = parse_pmf_table("1, 31, 465, 4495\n", PmfFormat::Lines).unwrap();
        assert_eq!(t.heights(), [1.0, 31.0, 465.0, 4495.0]);
    }

    #[test]
    fn negative_value_reports_index() {
        assert_eq!(parse_pmf_table("0.5\n-0.1\n", PmfFormat::Lines), Err(FormatError::Domain { index: 1 }));
    }

    #[test]
    fn non_numeric_reports_line() {
        let err = parse_pmf_table("1\n\nabc\n", PmfFormat::Lines).unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn empty_input() {
        assert_eq!(parse_pmf_table("", PmfFormat::Lines), Err(FormatError::EmptyInput));
        assert_eq!(parse_pmf_table("# nothing\n\n", PmfFormat::Lines), Err(FormatError::EmptyInput));
        assert_eq!(parse_pmf_table("bin,height\n", PmfFormat::Csv), Err(FormatError::EmptyInput));
    }

    #[test]
    fn csv_tables() {
        let t = parse_pmf_table("bin,height\n0,1\n1,3\n2,3\n3,1\n", PmfFormat::Csv).unwrap();
        assert_eq!(t.heights(), [1.0, 3.0, 3.0, 1.0]);
        let t = parse_pmf_table("bin, height\n0.25\n0.75\n", PmfFormat::Csv).unwrap();
        assert_eq!(t.heights(), [0.25, 0.75]);
        assert!(matches!(parse_pmf_table("0,1\n1,2\n", PmfFormat::Csv), Err(FormatError::Parse { line: 1, .. })));
        assert!(matches!(
            parse_pmf_table("bin,height\n0,1\n2,2\n", PmfFormat::Csv),
            Err(FormatError::Parse { line: 3, .. })
        ));
        assert_eq!(parse_pmf_table("bin,height\n0,1\n1,-2\n", PmfFormat::Csv), Err(FormatError::Domain { index: 1 }));
    }

    #[test]
    fn histogram_csv() {
        let h = Histogram::from_counts(vec![3, 0, 5, 2]).unwrap();
        let text = serialize_histogram(&h);
        assert_eq!(text, "state,count\n0,3\n1,0\n2,5\n3,2\n");
        assert_eq!(parse_histogram(&text, None).unwrap(), h);
        // Sparse input is padded with zeros.
        let sparse = parse_histogram("state,count\n2,5\n0,3\n", Some(4)).unwrap();
        assert_eq!(sparse.counts(), [3, 0, 5, 0]);
        assert!(parse_histogram("state,count\n0,1\n0,2\n", None).is_err());
        assert!(parse_histogram("state,count\n9,1\n", Some(4)).is_err());
        assert!(parse_histogram("state,count\n0,0\n", None).is_err());
    }

    #[test]
    fn noise_config() {
        let n = parse_noise_model("# device\np1 = 0.001\np2=0.01\n readout_flip = 0.02\n").unwrap();
        assert_eq!(n, NoiseModel::new(0.001, 0.01, 0.02).unwrap());
        assert_eq!(parse_noise_model(&serialize_noise_model(&n)).unwrap(), n);
        assert_eq!(parse_noise_model("p1 = 0.5").unwrap().p2, 0.0);
        assert!(parse_noise_model("t1 = 3").is_err());
        assert!(parse_noise_model("p1 = 2").is_err());
    }

    #[test]
    fn report_round_trip_with_infinity() {
        let r = DivergenceReport {
            kl_theory_vs_empirical: f64::INFINITY,
            kl_empirical_vs_theory: 0.0005,
            js: 0.0129,
            g_counts: 35.2,
            g_paper: 0.001,
            chi_square: 30.9,
            p_value_paper: 0.9747,
            p_value_g: 0.3,
            p_value_chi_square: 0.47,
            shots: 21_000,
        };
        let text = serialize_report(&r);
        assert!(text.contains("kl_theory_vs_empirical=inf\n"));
        assert!(text.contains("shots=21000\n"));
        assert_eq!(parse_report(&text).unwrap(), r);
    }
}
