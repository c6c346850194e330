//! The full pipeline: corpus, mode-1 variants and curated examples, verified
//! in parallel and merged in input order into a report.

use std::collections::BTreeMap;

use cohomology::Field;
use divisors::{canonical, TorusDivisor};
use exact_core::{ivec, rat};
use fan::{zoo, Fan};
use mori::{extremal_rays, intersect};
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{gen_corpus, hyp1_variant, instance_from_ample};
use crate::instance::{ample_divisor, Instance, Mode, Witness};
use crate::verify::{verify_flip_diagram, verify_kv, verify_mmp, StepRecord, Verdict};
use crate::KvError;

/// Environment variable holding the worker count hint.
pub const THREADS_VAR: &str = "KV_VERIFY_THREADS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteParams {
    pub seed: u64,
    pub ranks: Vec<usize>,
    /// Generated instances per rank.
    pub count: usize,
    pub max_rays: usize,
    pub fields: Vec<Field>,
    pub curated: bool,
    pub hyp1: bool,
    /// Instances read from a corpus file, verified in addition to the generated ones.
    pub extra: Vec<Instance>,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            seed: 42,
            ranks: vec![2, 3],
            count: 30,
            max_rays: 12,
            fields: Field::STANDARD.to_vec(),
            curated: true,
            hyp1: true,
            extra: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Expect {
    /// Generated instances must satisfy their hypothesis.
    Generated,
    /// User instances: the verdict alone decides.
    Given,
    /// Must pass with exactly these `Q` dimensions.
    Dims(Vec<u64>),
    /// Negative control: hypothesis false, higher cohomology present, exactly these `Q` dimensions.
    Fails(Vec<u64>),
}

#[derive(Debug, Clone)]
enum Job {
    Instance(Instance, Expect),
    Flip { label: String, x: Fan, d: TorusDivisor },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub label: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<u8>,
    /// `pass`, `fail` or `expected-fail`.
    pub verdict: String,
    pub hypothesis_ok: bool,
    pub dims: BTreeMap<String, Vec<u64>>,
    pub vanishing: BTreeMap<String, bool>,
    pub mmp: Vec<StepRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<String>,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub expected_fail: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub fields: Vec<String>,
    pub instances: Vec<Entry>,
    pub corpus_notes: Vec<String>,
    pub summary: Summary,
    /// The generated instances, in report order; kept for further checks, not serialized.
    #[serde(skip)]
    pub corpus: Vec<Instance>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialisable");
        s.push('\n');
        s
    }

    /// One line per entry plus a summary line.
    pub fn table(&self) -> String {
        let mut out =
            format!("{:<44} {:>4} {:<14} {:<18} {:>5}  {}\n", "label", "mode", "verdict", "dims (Q)", "steps", "end");
        for e in &self.instances {
            let dims = e.dims.get("q").map(|d| format!("{d:?}")).unwrap_or_else(|| "-".into());
            let mode = e.mode.map(|m| m.to_string()).unwrap_or_else(|| "-".into());
            let end = e.end.clone().unwrap_or_else(|| e.kind.clone());
            out.push_str(&format!(
                "{:<44} {:>4} {:<14} {:<18} {:>5}  {}\n",
                e.label,
                mode,
                e.verdict,
                dims,
                e.mmp.len(),
                end
            ));
            for f in &e.failures {
                out.push_str(&format!("    ! {f}\n"));
            }
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} entries: {} pass, {} fail, {} expected-fail\n",
            s.total, s.pass, s.fail, s.expected_fail
        ));
        out
    }
}

fn hyp2(label: &str, x: Fan, b: TorusDivisor, d: TorusDivisor) -> Instance {
    Instance { label: label.into(), x, b, d, mode: Mode::Hyp2, witness: Vec::new() }
}

fn from_ample(label: &str, x: &Fan, a: TorusDivisor) -> Instance {
    instance_from_ample(label.into(), x, &a).expect("curated ample divisor")
}

/// Hand-picked instances with known answers, and the negative control.
fn curated() -> Vec<Job> {
    let p2 = zoo::projective_space(2);
    let p1 = zoo::projective_space(1);
    let mut jobs = vec![
        Job::Instance(
            hyp2("control/P2-K", p2.clone(), TorusDivisor::zero(3), canonical(&p2)),
            Expect::Fails(vec![0, 0, 1]),
        ),
        Job::Instance(
            hyp2("curated/P2-3H", p2.clone(), TorusDivisor::zero(3), TorusDivisor::from_ints(&[0, 0, 3])),
            Expect::Dims(vec![10, 0, 0]),
        ),
        Job::Instance(
            from_ample("curated/P2-third", &p2, TorusDivisor::new(vec![rat(1, 3); 3])),
            Expect::Dims(vec![1, 0, 0]),
        ),
        Job::Instance(
            from_ample("curated/P2-to-point", &p2, TorusDivisor::from_ints(&[1, 0, 0])),
            Expect::Dims(vec![0, 0, 0]),
        ),
        Job::Instance(
            Instance {
                label: "curated/P2-mode1".into(),
                x: p2.clone(),
                b: TorusDivisor::new(vec![rat(2, 3); 3]),
                d: TorusDivisor::from_ints(&[-1, 0, 0]),
                mode: Mode::Hyp1,
                witness: vec![Witness { q: rat(1, 3), m: ivec(&[1, 1]) }],
            },
            Expect::Dims(vec![0, 0, 0]),
        ),
    ];
    // F1 with A = 3H - E/2 gives D = E: the run contracts E and ends nef on P²
    let f1 = zoo::blown_up_plane();
    let mut a = TorusDivisor::prime(4, f1.ray_index(&ivec(&[-1, -1])).expect("ray")).scaled(&rat(3, 1));
    a.coeffs[f1.ray_index(&ivec(&[1, 1])).expect("ray")] = rat(-1, 2);
    jobs.push(Job::Instance(from_ample("curated/F1-contract-E", &f1, a), Expect::Dims(vec![1, 0, 0])));
    // P1 x P1 with A of bidegree (1, 1/2): D has bidegree (-1, -1)
    let q = zoo::product(&p1, &p1);
    let mut a = TorusDivisor::zero(4);
    a.coeffs[q.ray_index(&ivec(&[1, 0])).expect("ray")] = rat(1, 1);
    a.coeffs[q.ray_index(&ivec(&[0, 1])).expect("ray")] = rat(1, 2);
    jobs.push(Job::Instance(from_ample("curated/P1xP1-to-P1", &q, a), Expect::Dims(vec![0, 0, 0])));
    // the cube fan is not simplicial; -K is ample with 7 sections
    let cube = zoo::cube_faces();
    let minus_k = canonical(&cube).scaled(&rat(-1, 1));
    jobs.push(Job::Instance(
        hyp2("curated/cube-minus-K", cube, TorusDivisor::zero(8), minus_k),
        Expect::Dims(vec![7, 0, 0, 0]),
    ));
    // a non-complete example: one side of the flip, relative to the affine cone
    let side = zoo::flip_side_a(2);
    let a = ample_divisor(&side).expect("relatively ample").scaled(&rat(1, 2));
    jobs.push(Job::Instance(from_ample("curated/flip-side-relative", &side, a), Expect::Given));
    for (label, k) in [("curated/flop-diagram", 1), ("curated/flip-diagram", 2)] {
        let x = zoo::flip_side_a(k);
        let u4 = x.ray_index(&ivec(&[1, 1, -k])).expect("ray");
        jobs.push(Job::Flip { label: label.into(), x, d: TorusDivisor::prime(4, u4).scaled(&rat(-1, 1)) });
    }
    jobs
}

fn entry_from(inst: &Instance, kind: &str, kv: Verdict, mmp: Verdict) -> Entry {
    let dims = kv.dims.iter().map(|(k, v)| (k.clone(), v[0].clone())).collect();
    let mut failures = kv.failures.clone();
    failures.extend(mmp.failures.iter().cloned());
    let mut notes = kv.hypothesis_notes.clone();
    notes.extend(kv.notes.iter().cloned());
    notes.extend(mmp.notes.iter().cloned());
    let ok = kv.pass && mmp.pass;
    Entry {
        label: inst.label.clone(),
        kind: kind.into(),
        mode: Some(inst.mode.number()),
        verdict: if ok && failures.is_empty() { "pass" } else { "fail" }.into(),
        hypothesis_ok: kv.hypothesis_ok,
        dims,
        vanishing: kv.vanishing,
        mmp: mmp.certificates,
        end: mmp.end,
        reduction: kv.reduction,
        failures,
        notes,
    }
}

fn error_entry(label: &str, kind: &str, e: KvError) -> Entry {
    Entry {
        label: label.into(),
        kind: kind.into(),
        mode: None,
        verdict: "fail".into(),
        hypothesis_ok: false,
        dims: BTreeMap::new(),
        vanishing: BTreeMap::new(),
        mmp: Vec::new(),
        end: None,
        reduction: None,
        failures: vec![format!("error: {e}")],
        notes: Vec::new(),
    }
}

fn run_instance(inst: &Instance, expect: &Expect, fields: &[Field]) -> Result<Entry, KvError> {
    let kv = verify_kv(inst, fields)?;
    let mmp = verify_mmp(inst, fields)?;
    let kind = match expect {
        Expect::Fails(_) => "control",
        Expect::Generated => "generated",
        _ => "given",
    };
    let mut e = entry_from(inst, kind, kv, mmp);
    let q = e.dims.get("q").cloned();
    match expect {
        Expect::Generated => {
            if !e.hypothesis_ok {
                e.failures.push("generated instance violates its hypothesis".into());
                e.verdict = "fail".into();
            }
        }
        Expect::Given => {}
        Expect::Dims(want) => {
            if q.as_ref() != Some(want) || !e.hypothesis_ok {
                e.failures.push(format!("expected hypothesis to hold and Q dimensions {want:?}, got {q:?}"));
                e.verdict = "fail".into();
            }
        }
        Expect::Fails(want) => {
            let as_predicted = !e.hypothesis_ok && e.vanishing.values().all(|v| !v) && q.as_ref() == Some(want);
            e.verdict = if as_predicted { "expected-fail" } else { "fail" }.into();
            if !as_predicted {
                e.failures.push(format!("control should fail with Q dimensions {want:?}, got {q:?}"));
            }
        }
    }
    Ok(e)
}

fn run_flip(label: &str, x: &Fan, d: &TorusDivisor) -> Result<Entry, KvError> {
    let ray = extremal_rays(x)?
        .into_iter()
        .find(|r| intersect(x, d, &r.walls[0]).map(|p| p.is_negative()).unwrap_or(false))
        .ok_or_else(|| KvError::Precondition("no negative extremal ray".into()))?;
    let v = verify_flip_diagram(x, &ray, d, 0)?;
    Ok(Entry {
        label: label.into(),
        kind: "flip-diagram".into(),
        mode: None,
        verdict: if v.pass { "pass" } else { "fail" }.into(),
        hypothesis_ok: v.hypothesis_ok,
        dims: BTreeMap::new(),
        vanishing: BTreeMap::new(),
        mmp: Vec::new(),
        end: None,
        reduction: None,
        failures: v.failures,
        notes: v.notes,
    })
}

fn run_job(job: &Job, fields: &[Field]) -> Entry {
    match job {
        Job::Instance(inst, expect) => {
            run_instance(inst, expect, fields).unwrap_or_else(|e| error_entry(&inst.label, "instance", e))
        }
        Job::Flip { label, x, d } => run_flip(label, x, d).unwrap_or_else(|e| error_entry(label, "flip-diagram", e)),
    }
}

/// Runs `f` on a pool sized by `KV_VERIFY_THREADS` when set.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0);
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// Generates the corpus, verifies everything and assembles the report. The
/// report depends only on the parameters, never on scheduling.
pub fn run_suite(params: &SuiteParams) -> Result<Report, KvError> {
    with_pool(|| {
        let mut jobs: Vec<Job> = Vec::new();
        let mut corpus_notes = Vec::new();
        let mut corpus = Vec::new();
        if params.curated {
            jobs.extend(curated());
        }
        for &rank in &params.ranks {
            let c = gen_corpus(params.seed, rank, params.max_rays, params.count)?;
            corpus_notes.extend(c.notes.iter().map(|n| format!("rank {rank}: {n}")));
            let variants: Vec<Instance> =
                if params.hyp1 { c.instances.iter().filter_map(hyp1_variant).collect() } else { Vec::new() };
            corpus.extend(c.instances.iter().cloned());
            corpus.extend(variants.iter().cloned());
            jobs.extend(c.instances.into_iter().map(|i| Job::Instance(i, Expect::Generated)));
            jobs.extend(variants.into_iter().map(|i| Job::Instance(i, Expect::Generated)));
        }
        jobs.extend(params.extra.iter().cloned().map(|i| Job::Instance(i, Expect::Given)));
        let instances: Vec<Entry> = jobs.par_iter().map(|j| run_job(j, &params.fields)).collect();
        let mut summary = Summary { total: instances.len(), ..Summary::default() };
        for e in &instances {
            match e.verdict.as_str() {
                "pass" => summary.pass += 1,
                "expected-fail" => summary.expected_fail += 1,
                _ => summary.fail += 1,
            }
        }
        Ok(Report {
            seed: params.seed,
            fields: params.fields.iter().map(|f| f.key()).collect(),
            instances,
            corpus_notes,
            summary,
            corpus,
        })
    })
}
