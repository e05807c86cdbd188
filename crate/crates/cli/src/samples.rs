//! Sample files: one value, or value and weight, per whitespace-separated row.
//! Blank lines and lines starting with `#` are skipped.

use robmean::SampleSet;

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSamples {
    pub values: Vec<f64>,
    pub weights: Option<Vec<f64>>,
}

/// Parses sample text. With `weighted`, every row must carry two columns;
/// without it, exactly one.
pub fn parse_samples(text: &str, weighted: bool) -> Result<ParsedSamples, String> {
    let want = if weighted { 2 } else { 1 };
    let mut values = Vec::new();
    let mut weights = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != want {
            return Err(format!(
                "line {}: expected {want} column(s), found {}{}",
                i + 1,
                fields.len(),
                if !weighted && fields.len() == 2 {
                    " (use --weighted)"
                } else {
                    ""
                }
            ));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| format!("line {}: not a number: {s:?}", i + 1))
        };
        values.push(parse(fields[0])?);
        if weighted {
            weights.push(parse(fields[1])?);
        }
    }
    Ok(ParsedSamples {
        values,
        weights: weighted.then_some(weights),
    })
}

impl ParsedSamples {
    pub fn into_sample_set(self) -> robmean::Result<SampleSet> {
        SampleSet::new(&self.values, self.weights.as_deref())
    }
}
