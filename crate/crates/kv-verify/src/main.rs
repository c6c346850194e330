use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cohomology::Field;
use divisors::{cartier_data, h0_dim, klt_check, positivity, H0};
use exact_core::fmt_rat;
use fan::{fmt_vec, properties};
use kv_verify::format::{parse_corpus, parse_divisor, parse_fan, parse_instance, read_file, write_corpus};
use kv_verify::{
    gen_corpus, run_suite, verify_flip_diagram, verify_kv, verify_mfs, verify_mmp, Instance, KvError, Origin,
    SuiteParams, Verdict,
};
use mmp::{negative_ray, run_mmp, ContractionKind, MmpEnd};

#[derive(Parser)]
#[command(name = "kv-verify", version, about = "Exact vanishing checks for toric varieties")]
struct Cli {
    /// Print nothing on success.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fan files.
    #[command(subcommand)]
    Fan(FanCmd),
    /// Divisor files.
    #[command(subcommand)]
    Div(DivCmd),
    /// Sheaf cohomology of a divisor.
    #[command(subcommand)]
    Coh(CohCmd),
    /// Runs the D-MMP of an instance.
    #[command(subcommand)]
    Mmp(MmpCmd),
    /// Verifiers on a single instance; prints the verdict as JSON.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Writes a generated corpus to stdout.
    Corpus(CorpusArgs),
    /// Corpus, curated examples and negative controls in one report.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum FanCmd {
    Info { file: PathBuf },
}

#[derive(Subcommand)]
enum DivCmd {
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum CohCmd {
    Dims {
        file: PathBuf,
        #[arg(long, default_value = "q", value_parser = parse_field)]
        field: Field,
    },
}

#[derive(Subcommand)]
enum MmpCmd {
    Run { instance: PathBuf },
}

#[derive(Subcommand)]
enum VerifyCmd {
    Kv(VerifyArgs),
    Mmp(VerifyArgs),
    /// The instance's D must be negative on a fibration ray.
    Mfs(VerifyArgs),
    /// The instance's D must be negative on a flipping ray.
    Flip(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    /// Comma-separated fields.
    #[arg(long, value_delimiter = ',', default_values = ["q", "f2", "f3", "f5", "f7"], value_parser = parse_field)]
    fields: Vec<Field>,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    rank: usize,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 12)]
    max_rays: usize,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Ranks to generate; repeat for several.
    #[arg(long = "rank")]
    ranks: Vec<usize>,
    /// Generated instances per rank.
    #[arg(long, default_value_t = 30)]
    count: usize,
    #[arg(long, default_value_t = 12)]
    max_rays: usize,
    /// Extra instances to verify alongside the generated ones.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Where to write the JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Skip the curated examples and controls.
    #[arg(long)]
    no_curated: bool,
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse::<Field>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out { quiet: cli.quiet };
    match run(cli.command, &out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

struct Out {
    quiet: bool,
}

impl Out {
    fn line(&self, s: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", s.as_ref());
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance, KvError> {
    Ok(parse_instance(&read_file(path)?, &Origin::file(path))?)
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run(cmd: Command, out: &Out) -> Result<u8, KvError> {
    match cmd {
        Command::Fan(FanCmd::Info { file }) => {
            let f = parse_fan(&read_file(&file)?, &Origin::file(&file))?.fan;
            let p = properties(&f)?;
            out.line(format!("rank {}, {} rays, {} maximal cones", f.rank(), f.rays().len(), f.max_cones().len()));
            for (i, u) in f.rays().iter().enumerate() {
                out.line(format!("  ray {i}: {}", fmt_vec(u)));
            }
            out.line(format!(
                "simplicial {}, smooth {}, complete {}, convex support {}",
                flag(p.simplicial),
                flag(p.smooth),
                flag(p.complete),
                flag(p.support_convex)
            ));
            out.line(match p.q_gorenstein_index_of_k {
                Some(l) => format!("K is Q-Cartier of index {l}"),
                None => "K is not Q-Cartier".into(),
            });
            Ok(0)
        }
        Command::Div(DivCmd::Check { file }) => {
            let (f, d) = parse_divisor(&read_file(&file)?, &Origin::file(&file))?;
            out.line(format!("D = [{}]", d.coeffs.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")));
            match cartier_data(&f, &d) {
                Ok(c) => {
                    out.line(format!("Q-Cartier of index {}", c.index()));
                    let p = positivity(&f, &d)?;
                    out.line(format!("nef {}, ample {}, big {}", flag(p.nef), flag(p.ample), flag(p.big)));
                }
                Err(e) => out.line(format!("not Q-Cartier: {e}")),
            }
            let klt = klt_check(&f, &d);
            out.line(match klt.reason {
                None if klt.ok => "(X, D) is klt".to_string(),
                r => format!("(X, D) is not klt: {}", r.unwrap_or_default()),
            });
            out.line(match h0_dim(&f, &d)? {
                H0::Zero => "h0 = 0".to_string(),
                H0::Count(n) => format!("h0 = {n}"),
                H0::Infinite => "h0 is infinite".to_string(),
            });
            Ok(0)
        }
        Command::Coh(CohCmd::Dims { file, field }) => {
            let (f, d) = parse_divisor(&read_file(&file)?, &Origin::file(&file))?;
            let p = properties(&f)?;
            if p.complete {
                let r = cohomology::coh_dims(&f, &d, field)?;
                out.line(format!("{}: {:?}", field.key(), r.dims));
            } else if p.support_convex {
                let v = cohomology::vanishing_higher(&f, &d, field)?;
                let w = v.witness.map(|(_, i)| format!(" (H^{i} is nonzero)")).unwrap_or_default();
                out.line(format!("{}: higher cohomology vanishes: {}{w}", field.key(), flag(v.vanishes)));
            } else {
                return Err(KvError::Input("cohomology needs a complete fan or one with convex support".into()));
            }
            Ok(0)
        }
        Command::Mmp(MmpCmd::Run { instance }) => {
            let inst = load_instance(&instance)?;
            let run = run_mmp(&inst.x, &inst.d, &inst.b)?;
            for (n, s) in run.steps.iter().enumerate() {
                let kind = match s.contraction.kind {
                    ContractionKind::Divisorial { .. } => "divisorial",
                    ContractionKind::Flipping => "flip",
                    ContractionKind::Fibration => "fibration",
                };
                let v = s.certificate.violations();
                let status = if v.is_empty() { "ok".to_string() } else { v.join("; ") };
                out.line(format!("step {n}: {kind} along {} [{status}]", fmt_vec(&s.ray.direction)));
            }
            let last = run.models.last().expect("a run has a model");
            match &run.end {
                MmpEnd::Nef => out.line(format!("end: D nef on a model with {} rays", last.rays().len())),
                MmpEnd::MoriFibreSpace(c) => out.line(format!("end: Mori fibre space over rank {}", c.target.rank())),
            }
            let bad = run.steps.iter().any(|s| !s.certificate.violations().is_empty());
            Ok(u8::from(bad))
        }
        Command::Verify(v) => {
            let verdict = match v {
                VerifyCmd::Kv(a) => verify_kv(&load_instance(&a.instance)?, &a.fields)?,
                VerifyCmd::Mmp(a) => verify_mmp(&load_instance(&a.instance)?, &a.fields)?,
                VerifyCmd::Mfs(a) => {
                    let inst = load_instance(&a.instance)?;
                    let ray = first_negative(&inst)?;
                    verify_mfs(&inst.x, &inst.d, &ray, &a.fields)?
                }
                VerifyCmd::Flip(a) => {
                    let inst = load_instance(&a.instance)?;
                    let ray = first_negative(&inst)?;
                    verify_flip_diagram(&inst.x, &ray, &inst.d, 0)?
                }
            };
            print_verdict(&verdict, out);
            Ok(u8::from(!verdict.pass))
        }
        Command::Corpus(a) => {
            let c = gen_corpus(a.seed, a.rank, a.max_rays, a.count)?;
            for n in &c.notes {
                eprintln!("note: {n}");
            }
            print!("{}", write_corpus(&c.instances));
            Ok(0)
        }
        Command::Suite(a) => {
            let extra = match &a.corpus {
                Some(p) => parse_corpus(&read_file(p)?, &Origin::file(p))?,
                None => Vec::new(),
            };
            let params = SuiteParams {
                seed: a.seed,
                ranks: if a.ranks.is_empty() { vec![2, 3] } else { a.ranks },
                count: a.count,
                max_rays: a.max_rays,
                curated: !a.no_curated,
                extra,
                ..SuiteParams::default()
            };
            let report = run_suite(&params)?;
            if let Some(p) = &a.report {
                std::fs::write(p, report.to_json())
                    .map_err(|e| KvError::Input(format!("cannot write {}: {e}", p.display())))?;
            }
            if !out.quiet {
                print!("{}", report.table());
            }
            Ok(report.exit_code() as u8)
        }
    }
}

fn first_negative(inst: &Instance) -> Result<mori::ExtremalRay, KvError> {
    negative_ray(&inst.x, &inst.d)?.ok_or_else(|| KvError::Precondition("D is nef: no extremal ray is negative".into()))
}

fn print_verdict(v: &Verdict, out: &Out) {
    out.line(serde_json::to_string_pretty(v).expect("verdicts serialize"));
}
