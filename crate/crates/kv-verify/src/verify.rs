use std::collections::BTreeMap;

use cohomology::{coh_dims_fields, vanishing_higher_fields, Field};
use divisors::{canonical, h0_dim, pullback, TorusDivisor, H0};
use exact_core::{fmt_rat, rat, Rat};
use fan::{fmt_vec, properties, q_factorialize, Fan};
use mmp::{contract, flip, flip_diagram, run_mmp, ContractionKind, FlipCase, MmpEnd, StepCertificate};
use mori::{intersect, ExtremalRay};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::instance::{check_hypothesis, Instance};
use crate::KvError;

/// Outcome of one verifier. `dims[field][n]` is the dimension vector of the
/// `n`-th model (a single model outside MMP runs), filled for complete fans.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub hypothesis_ok: bool,
    pub hypothesis_notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<String>,
    pub vanishing: BTreeMap<String, bool>,
    pub dims: BTreeMap<String, Vec<Vec<u64>>>,
    pub certificates: Vec<StepRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end: Option<String>,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl Verdict {
    /// `pass` is: no failed check, and a true hypothesis forces every vanishing flag.
    fn seal(mut self) -> Verdict {
        self.pass = self.failures.is_empty() && (!self.hypothesis_ok || self.vanishing.values().all(|&v| v));
        self
    }

    /// Claims made under the hypothesis are failures when it holds and notes otherwise.
    fn claim(&mut self, ok: bool, what: String) {
        if ok {
            return;
        }
        if self.hypothesis_ok {
            self.failures.push(what);
        } else {
            self.notes.push(what);
        }
    }

    /// Dimension vector of model `n` over `field`.
    pub fn dims_of(&self, field: Field, n: usize) -> Option<&[u64]> {
        self.dims.get(&field.key()).and_then(|v| v.get(n)).map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    /// `divisorial` or `flip`.
    pub kind: String,
    pub ray: String,
    pub a: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    pub violations: Vec<String>,
    /// Dimension vectors (or vanishing flags) agree before and after the step.
    pub preserved: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram_ok: Option<bool>,
}

/// The simplicial model the cohomology is computed on. For a non-simplicial
/// fan this is the Q-factorialization `μ: X' → X` with `D' = μ*D` and `B'`
/// defined by `K' + B' = μ*(K + B)`; the map is small, so `B'` is the strict
/// transform of `B`.
struct Model {
    x: Fan,
    d: TorusDivisor,
    b: Option<TorusDivisor>,
    reduction: Option<String>,
}

fn reduce(inst: &Instance) -> Result<Model, String> {
    if inst.x.is_simplicial() {
        return Ok(Model { x: inst.x.clone(), d: inst.d.clone(), b: Some(inst.b.clone()), reduction: None });
    }
    let (y, mu) = q_factorialize(&inst.x);
    let d = pullback(&mu, &inst.d).map_err(|e| format!("D cannot be pulled back: {e}"))?;
    let b = pullback(&mu, &canonical(&inst.x).plus(&inst.b)).ok().map(|kb| kb.minus(&canonical(&y)));
    let reduction = format!(
        "Q-factorialized: {} cones became {} simplicial cones, D pulled back",
        inst.x.max_cones().len(),
        y.max_cones().len()
    );
    Ok(Model { x: y, d, b, reduction: Some(reduction) })
}

/// Cohomology summary of one model: full vectors when complete, vanishing flags otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Coh {
    Complete(BTreeMap<String, Vec<u64>>),
    Relative(BTreeMap<String, bool>),
}

impl Coh {
    fn vanishing(&self) -> BTreeMap<String, bool> {
        match self {
            Coh::Complete(d) => d.iter().map(|(k, v)| (k.clone(), v[1..].iter().all(|&h| h == 0))).collect(),
            Coh::Relative(v) => v.clone(),
        }
    }
}

fn cohomology_of(x: &Fan, d: &TorusDivisor, fields: &[Field]) -> Result<Coh, KvError> {
    let p = properties(x)?;
    if p.complete {
        let reports = coh_dims_fields(x, d, fields)?;
        Ok(Coh::Complete(reports.into_iter().map(|r| (r.field.key(), r.dims)).collect()))
    } else if p.support_convex {
        let v = vanishing_higher_fields(x, d, fields)?;
        Ok(Coh::Relative(v.into_iter().map(|v| (v.field.key(), v.vanishes)).collect()))
    } else {
        Err(KvError::Input("cohomology needs a complete fan or one with convex support".into()))
    }
}

fn record_coh(v: &mut Verdict, c: &Coh) {
    if let Coh::Complete(d) = c {
        for (k, dims) in d {
            v.dims.entry(k.clone()).or_default().push(dims.clone());
        }
    }
}

/// Checks `H^i(X, O(D)) = 0` for `i > 0` over every field, re-checking the
/// hypothesis first. Non-simplicial fans are replaced by their
/// Q-factorialization with `D` pulled back.
pub fn verify_kv(inst: &Instance, fields: &[Field]) -> Result<Verdict, KvError> {
    let h = check_hypothesis(inst);
    let mut v = Verdict { hypothesis_ok: h.ok, hypothesis_notes: h.notes, ..Verdict::default() };
    let model = match reduce(inst) {
        Ok(m) => m,
        Err(why) => {
            v.claim(false, why);
            return Ok(v.seal());
        }
    };
    v.reduction = model.reduction.clone();
    let c = cohomology_of(&model.x, &model.d, fields)?;
    record_coh(&mut v, &c);
    v.vanishing = c.vanishing();
    Ok(v.seal())
}

fn certificate_record(step: usize, kind: &str, ray: &ExtremalRay, cert: &StepCertificate) -> StepRecord {
    let mut r = StepRecord {
        step,
        kind: kind.into(),
        ray: fmt_vec(&ray.direction),
        violations: cert.violations(),
        ..StepRecord::default()
    };
    match cert {
        StepCertificate::Divisorial { a } => r.a = fmt_rat(a),
        StepCertificate::Flip { a, b, c, case, .. } => {
            r.a = fmt_rat(a);
            r.b = Some(fmt_rat(b));
            r.c = Some(fmt_rat(c));
            r.case = Some(match case {
                FlipCase::Low => "low".into(),
                FlipCase::High => "high".into(),
            });
        }
    }
    r
}

/// Runs the `D`-MMP and checks that cohomology is unchanged by every step,
/// that every step certificate holds, that flip diagrams satisfy the blow-up
/// equation, and that the end model has vanishing higher cohomology (all
/// cohomology, for a Mori fibre space).
pub fn verify_mmp(inst: &Instance, fields: &[Field]) -> Result<Verdict, KvError> {
    let h = check_hypothesis(inst);
    let mut v = Verdict { hypothesis_ok: h.ok, hypothesis_notes: h.notes, ..Verdict::default() };
    let model = match reduce(inst) {
        Ok(m) => m,
        Err(why) => {
            v.claim(false, why);
            return Ok(v.seal());
        }
    };
    v.reduction = model.reduction.clone();
    let Some(b) = model.b.clone() else {
        v.claim(false, "K + B is not Q-Cartier, so the boundary has no pullback".into());
        return Ok(v.seal());
    };
    let run = match run_mmp(&model.x, &model.d, &b) {
        Ok(r) => r,
        Err(e) => {
            v.claim(false, format!("MMP failed: {e}"));
            return Ok(v.seal());
        }
    };
    let mut coh = Vec::with_capacity(run.models.len());
    for (x, d) in run.models.iter().zip(&run.divisors) {
        let c = cohomology_of(x, d, fields)?;
        record_coh(&mut v, &c);
        coh.push(c);
    }
    v.vanishing = coh[0].vanishing();
    for (n, step) in run.steps.iter().enumerate() {
        let kind = match step.contraction.kind {
            ContractionKind::Divisorial { .. } => "divisorial",
            _ => "flip",
        };
        let mut rec = certificate_record(n, kind, &step.ray, &step.certificate);
        rec.preserved = coh[n] == coh[n + 1];
        let (ok, what) = (rec.preserved, format!("step {n} ({kind}) changed the cohomology"));
        v.claim(ok, what);
        for viol in &rec.violations {
            v.failures.push(format!("step {n}: {viol}"));
        }
        if step.diagram.is_some() {
            let dv = verify_flip_diagram(&run.models[n], &step.ray, &run.divisors[n], n as u64)?;
            rec.diagram_ok = Some(dv.pass);
            v.failures.extend(dv.failures.into_iter().map(|f| format!("step {n} diagram: {f}")));
        }
        v.certificates.push(rec);
    }
    let last = run.models.len() - 1;
    let (xn, dn) = (&run.models[last], &run.divisors[last]);
    match &run.end {
        MmpEnd::Nef => {
            v.end = Some("nef".into());
            let ok = coh[last].vanishing().values().all(|&b| b);
            v.claim(ok, "the end model has nonzero higher cohomology".into());
        }
        MmpEnd::MoriFibreSpace(c) => {
            v.end = Some(format!("mori-fibre-space over rank {}", c.target.rank()));
            let ray =
                mmp::negative_ray(xn, dn)?.ok_or_else(|| KvError::Input("MFS end without a negative ray".into()))?;
            let m = verify_mfs(xn, dn, &ray, fields)?;
            if m.failures.is_empty() {
                v.notes.push(MFS_OK.into());
            }
            for f in m.failures {
                v.claim(false, format!("end model: {f}"));
            }
        }
    }
    v.notes.push(format!("{} steps", run.steps.len()));
    Ok(v.seal())
}

/// Note left by [`verify_mmp`] when the end fibration has no sections and, on a
/// complete model, no cohomology at all.
pub const MFS_OK: &str = "end fibration: no sections, and no cohomology at all when complete";

/// For a fibration `f` contracting `ray` with `D` negative on it: no global
/// sections, and on a complete total space no cohomology in any degree.
pub fn verify_mfs(x: &Fan, d: &TorusDivisor, ray: &ExtremalRay, fields: &[Field]) -> Result<Verdict, KvError> {
    let c = contract(x, ray)?;
    if !c.is_fibration() {
        return Err(KvError::Precondition(format!("{} does not give a fibration", fmt_vec(&ray.direction))));
    }
    let pairing = intersect(x, d, &ray.walls[0])?;
    if !pairing.is_negative() {
        return Err(KvError::Precondition(format!(
            "D is not negative on the fibration ray (D·C = {})",
            fmt_rat(&pairing)
        )));
    }
    let mut v = Verdict {
        hypothesis_ok: true,
        end: Some(format!("fibration onto rank {}", c.target.rank())),
        ..Verdict::default()
    };
    let h0 = h0_dim(x, d)?;
    if h0 != H0::Zero {
        v.failures.push(format!("expected no sections, found {h0:?}"));
    }
    let coh = cohomology_of(x, d, fields)?;
    record_coh(&mut v, &coh);
    match &coh {
        Coh::Complete(dims) => {
            for (k, dv) in dims {
                let zero = dv.iter().all(|&h| h == 0);
                v.vanishing.insert(k.clone(), zero);
                if !zero {
                    v.failures.push(format!("{k}: cohomology {dv:?} is not zero in every degree"));
                }
            }
        }
        Coh::Relative(flags) => v.vanishing = flags.clone(),
    }
    Ok(v.seal())
}

/// Builds the common blow-up of a flip and checks
/// `ψ*F = ψ'*F' − (F·Γ) E` on every prime divisor and five random rational
/// combinations, that `E` is the only new ray, that `Θ` is simplicial and that
/// `ψ*D − ψ'*D⁺ = c E` with `c > 0`.
pub fn verify_flip_diagram(x: &Fan, ray: &ExtremalRay, d: &TorusDivisor, seed: u64) -> Result<Verdict, KvError> {
    let c = contract(x, ray)?;
    if c.kind != ContractionKind::Flipping {
        return Err(KvError::Precondition(format!("{} is not a flipping ray", fmt_vec(&ray.direction))));
    }
    let pairing = intersect(x, d, &ray.walls[0])?;
    if !pairing.is_negative() {
        return Err(KvError::Precondition(format!("D·C = {} is not negative", fmt_rat(&pairing))));
    }
    let (xp, _) = flip(x, ray, d)?;
    let dg = flip_diagram(x, &xp, &c.target)?;
    let mut v = Verdict { hypothesis_ok: true, ..Verdict::default() };
    let theta = &dg.theta;
    let old_rays_kept = x.rays().iter().all(|u| theta.ray_index(u).is_some());
    if theta.rays().len() != x.rays().len() + 1 || !old_rays_kept || x.ray_index(&dg.e_ray).is_some() {
        v.failures.push(format!("{} is not the unique new ray", fmt_vec(&dg.e_ray)));
    }
    if !theta.is_simplicial() {
        v.failures.push("the common blow-up is not simplicial".into());
    }
    // ray i of X is ray to_plus[i] of X⁺
    let to_plus: Vec<usize> = x.rays().iter().map(|u| xp.ray_index(u).expect("a flip keeps the rays")).collect();
    let transfer = |f: &TorusDivisor| {
        let mut out = vec![Rat::zero(); f.len()];
        for (i, a) in f.coeffs.iter().enumerate() {
            out[to_plus[i]] = a.clone();
        }
        TorusDivisor::new(out)
    };
    let n = x.rays().len();
    let mut tests: Vec<(String, TorusDivisor)> =
        (0..n).map(|i| (format!("D_{}", fmt_vec(x.ray(i))), TorusDivisor::prime(n, i))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for j in 0..5 {
        let f = TorusDivisor::new((0..n).map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect());
        tests.push((format!("random combination {j}"), f));
    }
    let e = TorusDivisor::prime(theta.rays().len(), dg.e_index);
    let mut kappas = Vec::new();
    for (name, f) in &tests {
        let kappa = dg.kappa(f);
        let lhs = pullback(&dg.psi, f)?;
        let rhs = pullback(&dg.psi_prime, &transfer(f))?.minus(&e.scaled(&kappa));
        if lhs != rhs {
            v.failures.push(format!("blow-up equation fails for {name}"));
        }
        if name.starts_with("D_") {
            kappas.push(fmt_rat(&kappa));
        }
    }
    let cval = -dg.kappa(d);
    if !cval.is_positive() {
        v.failures.push(format!("c = {} is not positive", fmt_rat(&cval)));
    }
    v.notes.push(format!("F·Γ on prime divisors: [{}]; c = {}", kappas.join(", "), fmt_rat(&cval)));
    Ok(v.seal())
}
