//! Command-line front end: parses arguments, runs a pipeline stage, prints a result document.
//!
//! Exit codes: 0 on success, 1 when a mathematical consistency check fails, 2 on bad input.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use hilbchow::construct::{ChernSigns, VarietyData};
use hilbchow::hilb::{
    extract_presentation, hilb2_model, hilb3_from_nested, nested_model, PipelineConfig, PushPull, Sign, XiRange,
};
use hilbchow::io::parse_expression;
use hilbchow::io::parse_ring_file;
use hilbchow::io::report::{ConfigEcho, Format, GeneratorEntry, ResultDocument};
use hilbchow::oracles::{builtin, goettsche_betti, sym_ranks, BUILTIN_NAMES};
use hilbchow::suite::{verify, Check, Stage};
use hilbchow::{Error, RankTable};

#[derive(Parser, Debug)]
#[command(name = "hilbchow", version, about = "Exact graded models of Chow rings of Hilbert schemes of 2 and 3 points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// Use 1/2 instead of 1 as the constant of the second exceptional relation.
    #[arg(long)]
    rel3_half: bool,
    /// Sign of `e` in the Chern class of the universal family's normal bundle.
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    eqcz_e_sign: Sign,
    /// Sign pattern of the Chern terms in the exceptional relations.
    #[arg(long, default_value = "literal")]
    chern_signs: ChernSigns,
    #[arg(long, default_value = "text")]
    format: Format,
}

impl ConfigArgs {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            rel3_half: self.rel3_half,
            eqcz_sign: self.eqcz_e_sign,
            chern_signs: self.chern_signs,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a stage model and summarize it.
    Build {
        /// A `.ring` file, or the name of a built-in variety.
        file: String,
        #[arg(long, default_value = "hilb3")]
        stage: Stage,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Print the rank table of a stage model.
    Ranks {
        file: String,
        #[arg(long, default_value = "hilb3")]
        stage: Stage,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Apply the push-pull operator to a class of the nested model.
    Apply {
        file: String,
        /// Expression in the slot generators (for example h0, h1, h2), e and f.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Run every consistency check that applies to the input.
    Verify {
        file: String,
        #[arg(long, default_value = "hilb3")]
        stage: Stage,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Independent rank tables.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Generators and relations of the Hilbert cube subring.
    Presentation {
        file: String,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Ranks of Hilb^n of a surface from its Betti numbers.
    Goettsche {
        #[arg(long, value_delimiter = ',')]
        betti: Vec<u64>,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Ranks of the n-th symmetric power.
    Sym {
        file: String,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value = "text")]
        format: Format,
    },
}

/// Failure of a command, carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_consistency_failure() { 1 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn load(file: &str) -> Result<VarietyData, Failure> {
    let path = Path::new(file);
    if !path.exists() && BUILTIN_NAMES.contains(&file) {
        return Ok(builtin(file)?);
    }
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {file}: {e}")))?;
    let rf = parse_ring_file(&text).map_err(|e| input_error(format!("{file}: {e}")))?;
    let x = rf.to_variety()?;
    hilbchow::construct::validate_diagonal(&x)?;
    Ok(x)
}

fn document(x: &VarietyData, stage: &str, cfg: &PipelineConfig) -> ResultDocument {
    ResultDocument {
        stage: stage.to_string(),
        input_name: x.name.clone(),
        dimension: x.dimension,
        ranks: RankTable(vec![]),
        generators: vec![],
        relations: vec![],
        config: ConfigEcho::from(cfg),
        checks: vec![],
    }
}

fn entry(name: impl Into<String>, p: &hilbchow::Polynomial) -> GeneratorEntry {
    GeneratorEntry {
        name: name.into(),
        degree: p.homogeneous_degree().unwrap_or(0),
        expr: p.to_string(),
    }
}

fn var_entries(ring: &hilbchow::QuotientRing) -> Vec<GeneratorEntry> {
    (0..ring.vars().len())
        .map(|i| entry(ring.vars().get(i).display_name(), &ring.normal_form(&ring.var(i))))
        .collect()
}

/// Build the model for `stage` and fill ranks, generators and relations.
fn build_stage(x: &VarietyData, stage: Stage, cfg: &PipelineConfig) -> Result<ResultDocument, Failure> {
    let mut doc = document(x, &stage.to_string(), cfg);
    match stage {
        Stage::Hilb2 => {
            let m = hilb2_model(x, cfg)?;
            doc.ranks = m.ranks();
            doc.generators = var_entries(m.ring());
            doc.relations = m.ring().presentation().relations.iter().map(|r| r.to_string()).collect();
        }
        Stage::Nested => {
            let m = nested_model(x, cfg)?;
            doc.ranks = m.w.ranks();
            doc.generators = var_entries(m.ring());
            doc.relations = m.named_relations().iter().map(|(role, r)| format!("{role}: {r}")).collect();
        }
        Stage::Hilb3 => {
            let h = hilb3_from_nested(nested_model(x, cfg)?, XiRange::default())?;
            doc.ranks = h.ranks();
            doc.generators = h.generators.iter().map(|(n, c)| entry(n.clone(), c)).collect();
            doc.checks.push(Check::new("image equals generated subring", true, ""));
        }
    }
    Ok(doc)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut emit = |s: String| {
        out.write_all(s.as_bytes())
            .map_err(|e| input_error(format!("cannot write output: {e}")))
    };
    match cli.command {
        Command::Build { file, stage, cfg } => {
            let x = load(&file)?;
            let doc = build_stage(&x, stage, &cfg.config())?;
            emit(doc.emit(cfg.format))?;
        }
        Command::Ranks { file, stage, cfg } => {
            let x = load(&file)?;
            let doc = build_stage(&x, stage, &cfg.config())?;
            match cfg.format {
                Format::Text => emit(format!("{}\n", doc.ranks))?,
                Format::Json => {
                    let doc = ResultDocument {
                        generators: vec![],
                        relations: vec![],
                        ..doc
                    };
                    emit(doc.emit(Format::Json))?
                }
            }
        }
        Command::Apply { file, element, cfg } => {
            let x = load(&file)?;
            let config = cfg.config();
            let m = nested_model(&x, &config)?;
            let c = parse_expression(&element, m.ring().vars()).map_err(|e| input_error(format!("--element: {e}")))?;
            let pp = PushPull::build(&m)?;
            let result = pp.apply(&m, &c)?;
            match cfg.format {
                Format::Text => emit(format!("{result}\n"))?,
                Format::Json => {
                    let mut doc = document(&x, "apply", &config);
                    doc.generators = vec![entry(format!("Π({})", m.ring().normal_form(&c)), &result)];
                    emit(doc.emit(Format::Json))?
                }
            }
        }
        Command::Verify { file, stage, cfg } => {
            let x = load(&file)?;
            let config = cfg.config();
            let mut doc = document(&x, &format!("verify {stage}"), &config);
            doc.checks = verify(&x, &config, stage);
            let ok = doc.checks.iter().all(|c| c.pass);
            emit(doc.emit(cfg.format))?;
            return Ok(if ok { 0 } else { 1 });
        }
        Command::Oracle(OracleCommand::Goettsche { betti, n, format }) => {
            let ranks = goettsche_betti(&betti, n)?;
            emit_oracle(&mut emit, format!("goettsche n={n}"), "surface", 2, ranks, format)?;
        }
        Command::Oracle(OracleCommand::Sym { file, n, format }) => {
            let x = load(&file)?;
            if !(2..=3).contains(&n) {
                return Err(input_error(format!("-n must be 2 or 3, got {n}")));
            }
            let ranks = sym_ranks(&x.ring, n)?;
            emit_oracle(&mut emit, format!("sym n={n}"), &x.name, x.dimension, ranks, format)?;
        }
        Command::Presentation { file, cfg } => {
            let x = load(&file)?;
            let config = cfg.config();
            let h = hilb3_from_nested(nested_model(&x, &config)?, XiRange::default())?;
            let chosen = h.minimal_generators();
            let p = extract_presentation(&h, &chosen)?;
            let mut doc = document(&x, "hilb3 presentation", &config);
            doc.ranks = h.ranks();
            doc.generators = p
                .ring
                .vars
                .gens()
                .iter()
                .zip(&p.images)
                .zip(&p.descriptions)
                .map(|((g, img), desc)| GeneratorEntry {
                    name: g.display_name(),
                    degree: g.degree,
                    expr: format!("{desc} = {img}"),
                })
                .collect();
            doc.relations = p.ring.relations.iter().map(|r| r.to_string()).collect();
            let q = hilbchow::QuotientRing::new(p.ring)?;
            doc.checks.push(Check::new(
                "presented ring has the subring's ranks",
                q.rank_table() == h.ranks(),
                q.rank_table().to_string(),
            ));
            emit(doc.emit(cfg.format))?;
        }
    }
    Ok(0)
}

fn emit_oracle(
    emit: &mut dyn FnMut(String) -> Result<(), Failure>,
    stage: String,
    input: &str,
    dimension: usize,
    ranks: RankTable,
    format: Format,
) -> Result<(), Failure> {
    match format {
        Format::Text => emit(format!("{ranks}\n")),
        Format::Json => emit(
            ResultDocument {
                stage,
                input_name: input.to_string(),
                dimension,
                ranks,
                generators: vec![],
                relations: vec![],
                config: ConfigEcho::from(&PipelineConfig::default()),
                checks: vec![],
            }
            .emit(Format::Json),
        ),
    }
}

/// Run with explicit output streams; returns the exit code.
pub fn run_with(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn run(argv: Vec<String>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
