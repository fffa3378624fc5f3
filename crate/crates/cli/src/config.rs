use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::args::{Cli, Command, CsvOrJson, ReportFormat, TextOrJson};

/// Resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub n: Option<usize>,
    pub p1: Option<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub workers: Option<usize>,
    pub enum_cap: usize,
    pub format: String,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli, enum_cap: usize, workers: usize) -> Self {
        let csv_json = |f: CsvOrJson| match f {
            CsvOrJson::Csv => "csv",
            CsvOrJson::Json => "json",
        };
        let mut c = RunConfig {
            command: String::new(),
            n: None,
            p1: None,
            seed: None,
            samples: None,
            workers: None,
            enum_cap,
            format: "json".into(),
            output: cli.output.clone(),
        };
        match &cli.command {
            Command::Generate(a) => {
                c.command = "generate".into();
                c.n = Some(a.n);
                c.p1 = Some(a.p1.text.clone());
                c.seed = Some(a.seed);
                c.format = match a.format {
                    TextOrJson::Text => "text".into(),
                    TextOrJson::Json => "json".into(),
                };
            }
            Command::Indices(a) => {
                c.command = "indices".into();
                c.n = a.source.n;
            }
            Command::Report(a) => {
                c.command = "report".into();
                c.n = a.nmax.or_else(|| a.n.as_ref().or(a.grid.as_ref()).and_then(|v| v.0.iter().max().copied()));
                c.p1 = Some(a.p1_values().iter().map(|p| p.text.as_str()).collect::<Vec<_>>().join(","));
                c.seed = Some(a.seed);
                c.samples = Some(a.samples);
                c.workers = Some(a.workers.unwrap_or(workers));
                c.format = match a.format {
                    ReportFormat::Json => "json".into(),
                    ReportFormat::Csv => "csv".into(),
                    ReportFormat::Pretty => "pretty".into(),
                };
            }
            Command::Distribution(a) => {
                c.command = "distribution".into();
                c.n = Some(a.n);
                c.p1 = Some(a.p1.text.clone());
                c.format = csv_json(a.format).into();
            }
            Command::Sample(a) => {
                c.command = "sample".into();
                c.n = Some(a.n);
                c.p1 = Some(a.p1.text.clone());
                c.seed = Some(a.seed);
                c.samples = Some(a.samples);
                c.workers = Some(a.workers.unwrap_or(workers));
                c.format = csv_json(a.format).into();
            }
            Command::Normality(a) => {
                c.command = "normality".into();
                c.n = Some(a.n);
                c.p1 = Some(a.p1.text.clone());
                c.seed = Some(a.seed);
                c.samples = Some(a.samples);
                c.workers = Some(a.workers.unwrap_or(workers));
            }
            Command::Matrix(a) => {
                c.command = "matrix".into();
                c.n = a.source.n;
                c.format = "csv".into();
            }
        }
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
