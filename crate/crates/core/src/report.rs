//! Experiment report rows and their CSV encoding. All non-timing fields
//! are deterministic functions of the instance parameters and seeds;
//! timings sit in dedicated trailing columns so reruns can be compared
//! byte-for-byte after stripping them.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactOutcome {
    NotRun,
    True,
    False,
    /// The strategy space exceeded the search budget; distinct from a
    /// verdict.
    Budget,
}

impl ExactOutcome {
    fn as_str(&self) -> &'static str {
        match self {
            ExactOutcome::NotRun => "",
            ExactOutcome::True => "true",
            ExactOutcome::False => "false",
            ExactOutcome::Budget => "budget",
        }
    }

    fn parse(s: &str) -> Result<Self, ReportError> {
        Ok(match s {
            "" => ExactOutcome::NotRun,
            "true" => ExactOutcome::True,
            "false" => ExactOutcome::False,
            "budget" => ExactOutcome::Budget,
            other => return Err(ReportError::Field(format!("bad exact outcome `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRow {
    pub family: String,
    pub instance: String,
    pub index: usize,
    pub seed: u64,
    pub states: usize,
    pub lower: bool,
    pub lower_rounds: u32,
    pub upper: bool,
    pub upper_rounds: u32,
    pub matched: bool,
    pub exact: ExactOutcome,
    pub gen_us: u64,
    pub lower_us: u64,
    pub upper_us: u64,
    pub exact_us: u64,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("csv line {0}: wrong number of fields")]
    Shape(usize),
    #[error("csv field error: {0}")]
    Field(String),
}

pub const CSV_HEADER: &str = "family,instance,index,seed,states,lower,lower_rounds,upper,upper_rounds,matched,exact,gen_us,lower_us,upper_us,exact_us";

impl ExperimentReport {
    pub fn match_rate(&self) -> f64 {
        if self.rows.is_empty() {
            return 1.0;
        }
        self.rows.iter().filter(|r| r.matched).count() as f64 / self.rows.len() as f64
    }

    pub fn pct_true_lower(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().filter(|r| r.lower).count() as f64 / self.rows.len() as f64
    }

    pub fn pct_true_upper(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().filter(|r| r.upper).count() as f64 / self.rows.len() as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.family,
                r.instance,
                r.index,
                r.seed,
                r.states,
                r.lower,
                r.lower_rounds,
                r.upper,
                r.upper_rounds,
                r.matched,
                r.exact.as_str(),
                r.gen_us,
                r.lower_us,
                r.upper_us,
                r.exact_us,
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<ExperimentReport, ReportError> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if i == 0 {
                if line != CSV_HEADER {
                    return Err(ReportError::Field("unexpected header".into()));
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 15 {
                return Err(ReportError::Shape(i + 1));
            }
            let parse_u64 = |s: &str| {
                s.parse::<u64>()
                    .map_err(|e| ReportError::Field(format!("{e}: `{s}`")))
            };
            let parse_bool = |s: &str| match s {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(ReportError::Field(format!("bad bool `{other}`"))),
            };
            rows.push(ExperimentRow {
                family: f[0].to_string(),
                instance: f[1].to_string(),
                index: parse_u64(f[2])? as usize,
                seed: parse_u64(f[3])?,
                states: parse_u64(f[4])? as usize,
                lower: parse_bool(f[5])?,
                lower_rounds: parse_u64(f[6])? as u32,
                upper: parse_bool(f[7])?,
                upper_rounds: parse_u64(f[8])? as u32,
                matched: parse_bool(f[9])?,
                exact: ExactOutcome::parse(f[10])?,
                gen_us: parse_u64(f[11])?,
                lower_us: parse_u64(f[12])?,
                upper_us: parse_u64(f[13])?,
                exact_us: parse_u64(f[14])?,
            });
        }
        Ok(ExperimentReport { rows })
    }

    /// CSV with the timing columns zeroed; the unit reruns compare on this.
    pub fn deterministic_csv(&self) -> String {
        let mut copy = self.clone();
        for r in &mut copy.rows {
            r.gen_us = 0;
            r.lower_us = 0;
            r.upper_us = 0;
            r.exact_us = 0;
        }
        copy.to_csv()
    }

    /// Human-readable table mirroring the experiment column layout.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<14} {:>8} {:>9} {:>6} {:>10} {:>6} {:>10} {:>6} {:>8} {:>10}\n",
            "instance", "#states", "tgen[ms]", "lower", "#iter/t[ms]", "upper", "#iter/t[ms]", "match", "exact", "texact[ms]"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<14} {:>8} {:>9.2} {:>6} {:>5}/{:<6.2} {:>6} {:>5}/{:<6.2} {:>6} {:>8} {:>10.2}\n",
                r.instance,
                r.states,
                r.gen_us as f64 / 1000.0,
                r.lower,
                r.lower_rounds,
                r.lower_us as f64 / 1000.0,
                r.upper,
                r.upper_rounds,
                r.upper_us as f64 / 1000.0,
                r.matched,
                r.exact.as_str(),
                r.exact_us as f64 / 1000.0,
            ));
        }
        out.push_str(&format!(
            "match {:.0}%   lower true {:.0}%   upper true {:.0}%\n",
            self.match_rate() * 100.0,
            self.pct_true_lower() * 100.0,
            self.pct_true_upper() * 100.0
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentReport {
        ExperimentReport {
            rows: vec![
                ExperimentRow {
                    family: "bridge".into(),
                    instance: "n=2 k=2".into(),
                    index: 0,
                    seed: 42,
                    states: 310,
                    lower: true,
                    lower_rounds: 9,
                    upper: true,
                    upper_rounds: 9,
                    matched: true,
                    exact: ExactOutcome::True,
                    gen_us: 17000,
                    lower_us: 2000,
                    upper_us: 1000,
                    exact_us: 99,
                },
                ExperimentRow {
                    family: "bridge".into(),
                    instance: "n=2 k=2".into(),
                    index: 1,
                    seed: 43,
                    states: 311,
                    lower: false,
                    lower_rounds: 4,
                    upper: false,
                    upper_rounds: 5,
                    matched: true,
                    exact: ExactOutcome::NotRun,
                    gen_us: 1,
                    lower_us: 2,
                    upper_us: 3,
                    exact_us: 0,
                },
            ],
        }
    }

    #[test]
    fn csv_round_trips_exactly() {
        let report = sample();
        let csv = report.to_csv();
        let parsed = ExperimentReport::from_csv(&csv).unwrap();
        assert_eq!(parsed.rows, report.rows);
        assert_eq!(parsed.to_csv(), csv);
    }

    #[test]
    fn aggregates() {
        let report = sample();
        assert_eq!(report.match_rate(), 1.0);
        assert_eq!(report.pct_true_lower(), 0.5);
    }
}
