//! Machine-readable experiment reports.
//!
//! Reports carry no timestamps or timings: for a fixed configuration the
//! emitted bytes are identical run to run, which is itself a verified
//! property. CSV and JSON carry the same fields under the same names.

use serde::Serialize;

/// How the master seed reached the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSource {
    Cli,
    Env,
    Config,
}

impl SeedSource {
    pub fn as_str(self) -> &'static str {
        match self {
            SeedSource::Cli => "cli",
            SeedSource::Env => "env",
            SeedSource::Config => "config",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportHeader {
    pub protocol: String,
    pub seed: u64,
    pub seed_source: SeedSource,
    pub trials: u64,
    /// Pass-rule width in standard errors; anything other than the default
    /// 5 is in plain sight here.
    pub sigma: f64,
}

/// One input's estimate. The standard error is the binomial
/// √(p̂(1−p̂)/trials); when an exact value is available the row passes only
/// if the estimate sits within `sigma` standard errors of it, with sigma
/// recorded in the report header; never a silently looser rule.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateRow {
    pub protocol: String,
    pub input_id: String,
    pub trials: u64,
    pub estimate: f64,
    pub std_err: f64,
    pub exact: Option<f64>,
    pub abs_err: Option<f64>,
    pub bits_sent: u64,
    pub qubits_sent: u64,
    pub ebits: u64,
    pub pass: bool,
}

impl EstimateRow {
    /// Applies the sigma-standard-error rule against an optional exact value.
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        protocol: &str,
        input_id: String,
        trials: u64,
        successes: u64,
        exact: Option<f64>,
        sigma: f64,
        bits_sent: u64,
        qubits_sent: u64,
        ebits: u64,
    ) -> EstimateRow {
        let estimate = successes as f64 / trials as f64;
        let std_err = (estimate * (1.0 - estimate) / trials as f64).sqrt();
        let abs_err = exact.map(|e| (estimate - e).abs());
        let pass = match abs_err {
            Some(err) => err <= sigma * std_err,
            None => true,
        };
        EstimateRow {
            protocol: protocol.to_string(),
            input_id,
            trials,
            estimate,
            std_err,
            exact,
            abs_err,
            bits_sent,
            qubits_sent,
            ebits,
            pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub header: ReportHeader,
    pub rows: Vec<EstimateRow>,
}

fn opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

impl Report {
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# protocol={} seed={} seed_source={} trials={} sigma={}\n",
            self.header.protocol,
            self.header.seed,
            self.header.seed_source.as_str(),
            self.header.trials,
            self.header.sigma
        );
        out.push_str(
            "protocol,input_id,trials,estimate,std_err,exact,abs_err,bits_sent,qubits_sent,ebits,pass\n",
        );
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                row.protocol,
                row.input_id,
                row.trials,
                row.estimate,
                row.std_err,
                opt(row.exact),
                opt(row.abs_err),
                row.bits_sent,
                row.qubits_sent,
                row.ebits,
                row.pass
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}
