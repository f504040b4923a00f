use std::fmt::Write as _;

use serde::Serialize;

use crate::hilb::PipelineConfig;
use crate::poly::format_rational;
use crate::ring::RankTable;
use crate::suite::Check;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: u32,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub rel3_constant: String,
    pub eqcz_sign: String,
    pub chern_signs: String,
}

impl From<&PipelineConfig> for ConfigEcho {
    fn from(c: &PipelineConfig) -> Self {
        ConfigEcho {
            rel3_constant: format_rational(&c.rel3_constant()),
            eqcz_sign: c.eqcz_sign.to_string(),
            chern_signs: c.chern_signs.to_string(),
        }
    }
}

/// Everything a command prints. Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResultDocument {
    pub stage: String,
    pub input_name: String,
    pub dimension: usize,
    pub ranks: RankTable,
    pub generators: Vec<GeneratorEntry>,
    pub relations: Vec<String>,
    pub config: ConfigEcho,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected text or json)")),
        }
    }
}

impl ResultDocument {
    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
                s.push('\n');
                s
            }
            Format::Text => self.to_text(),
        }
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        let field = |out: &mut String, k: &str, v: &str| {
            let _ = writeln!(out, "{k:<14}{v}");
        };
        field(&mut out, "stage", &self.stage);
        field(&mut out, "input", &self.input_name);
        field(&mut out, "dimension", &self.dimension.to_string());
        field(&mut out, "rel3 constant", &self.config.rel3_constant);
        field(&mut out, "eqcz sign", &self.config.eqcz_sign);
        field(&mut out, "chern signs", &self.config.chern_signs);
        if !self.ranks.0.is_empty() {
            let _ = writeln!(out, "\n{:<8}{:>6}", "degree", "rank");
            for (k, r) in self.ranks.0.iter().enumerate() {
                let _ = writeln!(out, "{k:<8}{r:>6}");
            }
            let _ = writeln!(out, "{:<8}{:>6}", "total", self.ranks.total());
        }
        if !self.generators.is_empty() {
            let width = self.generators.iter().map(|g| g.name.chars().count()).max().unwrap_or(0);
            let _ = writeln!(out, "\ngenerators");
            for g in &self.generators {
                let _ = writeln!(out, "  {:<width$}  deg {}  {}", g.name, g.degree, g.expr);
            }
        }
        if !self.relations.is_empty() {
            let _ = writeln!(out, "\nrelations");
            for r in &self.relations {
                let _ = writeln!(out, "  {r}");
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\nchecks");
            for c in &self.checks {
                let mark = if c.pass { "pass" } else { "FAIL" };
                if c.detail.is_empty() {
                    let _ = writeln!(out, "  {mark}  {}", c.name);
                } else {
                    let _ = writeln!(out, "  {mark}  {}  [{}]", c.name, c.detail);
                }
            }
        }
        out
    }
}
