use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::goldens;
use super::{
    internal, resolve_target, Cache, CatalogArgs, Cli, CliError, Command, IfunArgs, InvariantsArgs, PfArgs, QconnArgs,
    Target,
};
use crate::abelianization::{i_series_model, model_for_row, IScalarSeries, Model, Parts, SeriesBuilder};
use crate::homobundle::{catalog, lookup, topological_invariants, CatalogRow, Pipeline, SpecError, TopInvariants};
use crate::pfops::{annihilator_at, required_len, OreOperator, PfError, DEFAULT_GUARD};
use crate::qconn::{lefschetz_factorization, wdvv_residuals, QconnRun, SeedFile};
use crate::ratqa::{QPoly, Rational};

pub const DEFAULT_ORDER: usize = 10;
pub const DEFAULT_MAX_QDEGREE: usize = 12;
/// Order in `theta` of the Picard-Fuchs operator of a Calabi-Yau 3-fold.
pub const THETA_ORDER: usize = 4;

const MIXED: &str = "not dualizable; use qconn or P_Δ pipeline \
    (mixed S*/Q rows: No.16 reduces to No.12, No.18 goes through P_Δ, No.25 through qconn)";

/// A resolved computation.
#[derive(Debug, Clone)]
pub struct Job {
    /// The label asked for, before alias resolution.
    pub requested: String,
    pub target: Target,
    pub pipeline: Pipeline,
    pub note: Option<String>,
}

fn seed_file(label: &str) -> Option<SeedFile> {
    (label == "no25").then(SeedFile::no25)
}

/// Apply row aliases and check that `requested` can run on the target.
pub fn select_pipeline(target: Target, requested: Option<Pipeline>) -> Result<Job, CliError> {
    let label = target.label();
    let (target, note) = match target.row().and_then(|r| r.alias.clone()) {
        Some((to, why)) => {
            let row = lookup(&format!("no{to}")).map_err(internal)?;
            (Target::Row(Box::new(row)), Some(format!("{label} resolves to no{to}: {why}")))
        }
        None => (target, None),
    };
    let spec = target.spec();
    let mixed = spec.has_q() && spec.has_sdual();
    let pipeline = match requested {
        Some(p) => p,
        None => match target.row() {
            Some(r) => r.pipeline,
            None if mixed => return Err(CliError::PipelineMismatch(format!("{label}: {MIXED}"))),
            None => Pipeline::Abelianization,
        },
    };
    let no = target.row().map(|r| r.no);
    match pipeline {
        Pipeline::Abelianization if mixed => {
            return Err(CliError::PipelineMismatch(format!("{label}: {MIXED}")));
        }
        Pipeline::Pdelta if !matches!(no, Some(17 | 18)) => {
            return Err(CliError::PipelineMismatch(format!(
                "{label}: the P_Δ model covers No.17 and No.18 only"
            )));
        }
        Pipeline::Qconn if seed_file(&target.label()).is_none() => {
            return Err(CliError::PipelineMismatch(format!("{label}: no seed invariants for the qconn pipeline")));
        }
        _ => {}
    }
    Ok(Job { requested: label, target, pipeline, note })
}

fn model(job: &Job) -> Result<Model, CliError> {
    match &job.target {
        Target::Row(r) => model_for_row(r),
        Target::Inline(s) => Model::grassmann(s),
    }
    .map_err(internal)
}

fn qconn_run(job: &Job) -> Result<QconnRun, CliError> {
    let seeds = seed_file(&job.target.label())
        .ok_or_else(|| CliError::PipelineMismatch(format!("{}: no seed invariants", job.requested)))?;
    QconnRun::new(&seeds).map_err(internal)
}

/// The scalar series to order `order` by the job's pipeline.
pub fn compute_series(job: &Job, order: usize, parts: Parts) -> Result<IScalarSeries, CliError> {
    let mut s = match job.pipeline {
        Pipeline::Abelianization | Pipeline::Pdelta => i_series_model(&model(job)?, order, parts).map_err(internal)?,
        Pipeline::Qconn => qconn_run(job)?.i_series(order).map_err(internal)?,
    };
    s.target = job.requested.clone();
    Ok(s)
}

/// `P = left (1/r) R S` for the Lefschetz transform of the quantum differential operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub left: OreOperator,
    pub r: Vec<Rational>,
    pub r_text: String,
    pub r_op: OreOperator,
    pub r_op_text: String,
    pub right_remainder_zero: bool,
    pub left_remainder_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfReport {
    pub target: String,
    pub pipeline: Pipeline,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub series_terms: usize,
    pub theta_order: usize,
    pub q_degree: usize,
    pub guard: usize,
    pub operator: OreOperator,
    pub text: String,
    /// The operator annihilates every computed coefficient, guard band included.
    pub guard_clean: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorization: Option<FactorizationReport>,
}

enum Source<'a> {
    Growing(Box<SeriesBuilder<'a>>),
    Fixed(Vec<Rational>),
}

impl Source<'_> {
    /// The first `len` coefficients, or `None` when a fixed series is too short.
    fn terms(&mut self, len: usize) -> Result<Option<Vec<Rational>>, CliError> {
        match self {
            Source::Growing(b) => Ok(Some(b.extend_to(len - 1).map_err(internal)?.i0.clone())),
            Source::Fixed(v) if v.len() >= len => Ok(Some(v.clone())),
            Source::Fixed(_) => Ok(None),
        }
    }

    fn len(&self) -> usize {
        match self {
            Source::Growing(b) => b.len(),
            Source::Fixed(v) => v.len(),
        }
    }
}

/// Scan q-degrees `0..=max_qdegree` for the order-4 annihilator of `I_0`.
fn search(source: &mut Source, max_qdegree: usize) -> Result<(OreOperator, usize, Vec<Rational>), CliError> {
    let mut used = 0;
    for d in 0..=max_qdegree {
        let need = required_len(THETA_ORDER, d, DEFAULT_GUARD);
        let Some(terms) = source.terms(need)? else {
            let have = source.len();
            return Err(CliError::Underdetermined(format!(
                "q-degree {d} needs {need} series terms, have {have}; increase --order"
            )));
        };
        used = terms.len();
        match annihilator_at(&terms, THETA_ORDER, d, DEFAULT_GUARD) {
            Ok(Some(op)) => return Ok((op, d, terms)),
            Ok(None) => {}
            Err(e @ PfError::Underdetermined { .. }) => return Err(CliError::Underdetermined(e.to_string())),
            Err(e) => return Err(internal(e)),
        }
    }
    Err(CliError::Underdetermined(format!(
        "no order-{THETA_ORDER} operator with q-degree <= {max_qdegree} found from {used} terms; \
         increase --max-qdegree or --order"
    )))
}

/// Find the Picard-Fuchs operator; `order` fixes the series length, otherwise it grows with the q-degree.
pub fn pf_report(job: &Job, order: Option<usize>, max_qdegree: usize) -> Result<PfReport, CliError> {
    let (op, d, terms, factorization) = match job.pipeline {
        Pipeline::Abelianization | Pipeline::Pdelta => {
            let m = model(job)?;
            let mut source = match order {
                Some(n) => Source::Fixed(i_series_model(&m, n, Parts::I0).map_err(internal)?.i0),
                None => Source::Growing(Box::new(SeriesBuilder::new(&m, Parts::I0).map_err(internal)?)),
            };
            let (op, d, terms) = search(&mut source, max_qdegree)?;
            (op, d, terms, None)
        }
        Pipeline::Qconn => {
            let run = qconn_run(job)?;
            let n = order.unwrap_or(required_len(THETA_ORDER, max_qdegree, DEFAULT_GUARD) - 1);
            let series = run.i_series(n).map_err(internal)?;
            let (op, d, terms) = search(&mut Source::Fixed(series.i0), max_qdegree)?;
            let (left, _, _) = goldens::factorization().map_err(internal)?;
            let f = lefschetz_factorization(&run, &op, &left).map_err(internal)?;
            let rep = FactorizationReport {
                r: f.r.coeffs().to_vec(),
                r_text: f.r.render("q").replace('*', ""),
                r_op_text: f.r_op.to_string(),
                r_op: f.r_op,
                left,
                right_remainder_zero: f.remainder.is_zero(),
                left_remainder_zero: f.left_remainder.is_zero(),
            };
            (op, d, terms, Some(rep))
        }
    };
    let guard_clean = op.apply(&terms).iter().all(|c| c.is_zero());
    Ok(PfReport {
        target: job.requested.clone(),
        pipeline: job.pipeline,
        note: job.note.clone(),
        series_terms: terms.len(),
        theta_order: THETA_ORDER,
        q_degree: d,
        guard: DEFAULT_GUARD,
        text: op.to_string(),
        operator: op,
        guard_clean,
        factorization,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QconnReport {
    pub target: String,
    pub basis: Vec<String>,
    pub pairing: Vec<Vec<Rational>>,
    pub correlators: usize,
    pub wdvv_instances: usize,
    pub wdvv_vanishing: usize,
    /// Entries as coefficient lists in `q`, lowest degree first.
    pub connection: Vec<Vec<Vec<Rational>>>,
    pub qde: OreOperator,
    pub qde_text: String,
    pub series: IScalarSeries,
}

fn qconn_report(job: &Job, order: usize) -> Result<QconnReport, CliError> {
    let run = qconn_run(job)?;
    let (instances, vanishing) = wdvv_residuals(&run.basis, &run.table);
    let n = run.basis.len();
    let mut series = run.i_series(order).map_err(internal)?;
    series.target = job.requested.clone();
    Ok(QconnReport {
        target: job.requested.clone(),
        basis: run.basis.names.clone(),
        pairing: (0..n).map(|i| (0..n).map(|j| run.basis.gram.get(i, j).clone()).collect()).collect(),
        correlators: run.table.values().len(),
        wdvv_instances: instances,
        wdvv_vanishing: vanishing,
        connection: run.connection.entries.iter().map(|r| r.iter().map(|p| p.coeffs().to_vec()).collect()).collect(),
        qde_text: run.qde.to_string(),
        qde: run.qde,
        series,
    })
}

fn to_json(v: &impl Serialize) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(internal)?;
    s.push('\n');
    Ok(s)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))
}

/// Cached JSON for `key`, computing and storing it on a miss.
fn cached(cache: &Cache, key: &str, compute: impl FnOnce() -> Result<String, CliError>) -> Result<String, CliError> {
    if let Some(hit) = cache.get(key) {
        return Ok(hit);
    }
    let text = compute()?;
    cache.put(key, &text).map_err(|e| CliError::Internal(format!("cache {}: {e}", cache.dir().display())))?;
    Ok(text)
}

fn io(e: std::io::Error) -> CliError {
    internal(e)
}

fn target_of(arg: Option<&str>, default: Option<&str>) -> Result<Target, CliError> {
    match arg.or(default) {
        Some(t) => resolve_target(t),
        None => Err(CliError::Internal("a target is required".into())),
    }
}

/// Rows on `G(k, n)` for a `k,n` filter; a filter that does not parse matches nothing.
pub fn catalog_rows(grassmann: Option<&str>) -> Vec<CatalogRow> {
    let filter = grassmann.map(|g| {
        let parts: Vec<Option<usize>> = g.split(',').map(|x| x.trim().parse().ok()).collect();
        match parts.as_slice() {
            [Some(k), Some(n)] => Some([*k, *n]),
            _ => None,
        }
    });
    catalog()
        .into_iter()
        .filter(|r| match &filter {
            None => true,
            Some(Some(kn)) => r.spec.grassmann == *kn,
            Some(None) => false,
        })
        .collect()
}

fn cmd_catalog(a: &CatalogArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = catalog_rows(a.grassmann.as_deref());
    writeln!(out, "{:<5} {:<8} {:<44} {:>5} {:>5} {:>6}  {:<15} note", "No.", "G(k,n)", "bundle", "H^3", "c2.H", "c3", "pipeline")
        .map_err(io)?;
    for r in &rows {
        let [k, n] = r.spec.grassmann;
        let note = r.alias.as_ref().map(|(to, why)| format!("uses No.{to}: {why}")).unwrap_or_default();
        writeln!(
            out,
            "{:<5} {:<8} {:<44} {:>5} {:>5} {:>6}  {:<15} {}",
            r.no,
            format!("G({k},{n})"),
            r.spec.bundle_string(),
            r.h3,
            r.c2h,
            r.c3,
            r.pipeline.name(),
            note
        )
        .map_err(io)?;
    }
    if let Some(p) = &a.out {
        write_file(p, &to_json(&rows)?)?;
    }
    Ok(())
}

fn cmd_ifun(a: &IfunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let job = select_pipeline(target_of(a.target.get(), None)?, a.pipeline)?;
    if let Some(n) = &job.note {
        writeln!(err, "note: {n}").map_err(io)?;
    }
    let cache = Cache::resolve(a.cache_dir.as_deref());
    let key = super::cache_key("ifun", &(&job.requested, job.target.spec(), job.pipeline, a.order));
    let text = cached(&cache, &key, || to_json(&compute_series(&job, a.order, Parts::All)?))?;
    match &a.out {
        Some(p) => write_file(p, &text),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

fn golden_diff(label: &str, report: &PfReport) -> Result<Vec<String>, CliError> {
    let Some(golden) = goldens::operator(label) else {
        return Err(CliError::Internal(format!("no reference operator for {label}")));
    };
    let golden = golden.map_err(internal)?;
    let mut diff = Vec::new();
    if golden != report.operator {
        let (g, c) = (golden.q_major(), report.operator.q_major());
        let block = |v: &[QPoly], j: usize| OreOperator::from_q_major(&[v.get(j).cloned().unwrap_or_else(QPoly::zero)]);
        for j in 0..g.len().max(c.len()) {
            let (gb, cb) = (block(&g, j), block(&c, j));
            if gb != cb {
                diff.push(format!("q^{j}: reference {gb}, computed {cb}"));
            }
        }
    }
    if let Some(f) = &report.factorization {
        let (_, r, r_op) = goldens::factorization().map_err(internal)?;
        if f.r != r.coeffs() {
            diff.push(format!("r: reference {}, computed {}", r.render("q").replace('*', ""), f.r_text));
        }
        if f.r_op != r_op {
            diff.push(format!("R4: reference {r_op}, computed {}", f.r_op_text));
        }
    }
    Ok(diff)
}

fn cmd_pf(a: &PfArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let job = select_pipeline(target_of(a.target.get(), None)?, a.pipeline)?;
    if let Some(n) = &job.note {
        writeln!(err, "note: {n}").map_err(io)?;
    }
    let cache = Cache::resolve(a.cache_dir.as_deref());
    let key = super::cache_key("pf", &(&job.requested, job.target.spec(), job.pipeline, a.order, a.max_qdegree));
    let text = cached(&cache, &key, || to_json(&pf_report(&job, a.order, a.max_qdegree)?))?;
    let report: PfReport = serde_json::from_str(&text).map_err(internal)?;
    writeln!(
        out,
        "{} ({}): order {}, q-degree {}, {} series terms",
        report.target, report.pipeline, report.theta_order, report.q_degree, report.series_terms
    )
    .map_err(io)?;
    writeln!(out, "P = {}", report.text).map_err(io)?;
    let guard = if report.guard_clean { "clean" } else { "FAILED" };
    writeln!(out, "guard band: {} extra coefficients, {guard}", report.guard).map_err(io)?;
    if let Some(f) = &report.factorization {
        let z = |b: bool| if b { "0" } else { "nonzero" };
        writeln!(out, "Lefschetz transform = {} (1/r) R S", f.left).map_err(io)?;
        writeln!(out, "  right remainder by S: {}", z(f.right_remainder_zero)).map_err(io)?;
        writeln!(out, "  left remainder by {}: {}", f.left, z(f.left_remainder_zero)).map_err(io)?;
        writeln!(out, "  r = {}", f.r_text).map_err(io)?;
        writeln!(out, "  R = {}", f.r_op_text).map_err(io)?;
    }
    if let Some(p) = &a.out {
        write_file(p, &text)?;
    }
    if !report.guard_clean {
        return Err(CliError::Internal("operator fails on the guard band".into()));
    }
    if let Some(f) = &report.factorization {
        if !(f.right_remainder_zero && f.left_remainder_zero) {
            return Err(CliError::Internal("the Lefschetz transform does not factor".into()));
        }
    }
    if a.golden {
        let diff = golden_diff(&job.requested, &report)?;
        if diff.is_empty() {
            writeln!(out, "golden: match").map_err(io)?;
        } else {
            writeln!(out, "golden: MISMATCH").map_err(io)?;
            for l in &diff {
                writeln!(out, "  {l}").map_err(io)?;
            }
            return Err(CliError::InvariantMismatch(format!("{}: differs from the reference operator", job.requested)));
        }
    }
    Ok(())
}

fn render_poly(coeffs: &[Rational]) -> String {
    QPoly::new(coeffs.to_vec()).render("q").replace('*', "")
}

fn cmd_qconn(a: &QconnArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let job = select_pipeline(target_of(a.target.get(), Some("no25"))?, Some(Pipeline::Qconn))?;
    let cache = Cache::resolve(a.cache_dir.as_deref());
    let key = super::cache_key("qconn", &(&job.requested, crate::qconn::NO25_SEEDS, a.order));
    let text = cached(&cache, &key, || to_json(&qconn_report(&job, a.order)?))?;
    let rep: QconnReport = serde_json::from_str(&text).map_err(internal)?;
    writeln!(out, "{}: basis {}", rep.target, rep.basis.join(", ")).map_err(io)?;
    writeln!(
        out,
        "WDVV: {} correlators, {} of {} relations vanish",
        rep.correlators, rep.wdvv_vanishing, rep.wdvv_instances
    )
    .map_err(io)?;
    writeln!(out, "connection matrix:").map_err(io)?;
    for row in &rep.connection {
        let cells: Vec<String> = row.iter().map(|c| render_poly(c)).collect();
        writeln!(out, "  [{}]", cells.join(", ")).map_err(io)?;
    }
    writeln!(out, "Q = {}", rep.qde_text).map_err(io)?;
    if let Some(p) = &a.out {
        write_file(p, &text)?;
    }
    if rep.wdvv_vanishing != rep.wdvv_instances {
        return Err(CliError::Internal("WDVV residuals do not vanish".into()));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct InvariantsRow {
    target: String,
    computed: TopInvariants,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<TopInvariants>,
    ok: bool,
}

fn cmd_invariants(a: &InvariantsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let targets: Vec<Target> = match a.target.get() {
        Some(t) => vec![resolve_target(t)?],
        None => catalog().into_iter().map(|r| Target::Row(Box::new(r))).collect(),
    };
    writeln!(out, "{:<8} {:>5} {:>5} {:>6}  status", "target", "H^3", "c2.H", "c3").map_err(io)?;
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for t in &targets {
        let computed = match topological_invariants(t.spec()) {
            Ok(v) => v,
            Err(e @ SpecError::NotCalabiYau { .. }) => {
                writeln!(out, "{:<8} {e}", t.label()).map_err(io)?;
                bad.push(format!("{}: {e}", t.label()));
                continue;
            }
            Err(e) => return Err(internal(e)),
        };
        let expected = t.row().map(|r| TopInvariants { h3: r.h3, c2h: r.c2h, c3: r.c3 });
        let ok = expected.is_none_or(|e| e == computed);
        let status = match (&expected, ok) {
            (None, _) => "computed".to_string(),
            (Some(_), true) => "ok".to_string(),
            (Some(e), false) => format!("MISMATCH, table has ({}, {}, {})", e.h3, e.c2h, e.c3),
        };
        writeln!(out, "{:<8} {:>5} {:>5} {:>6}  {status}", t.label(), computed.h3, computed.c2h, computed.c3)
            .map_err(io)?;
        if !ok {
            bad.push(format!("{}: {status}", t.label()));
        }
        rows.push(InvariantsRow { target: t.label(), computed, expected, ok });
    }
    if let Some(p) = &a.out {
        write_file(p, &to_json(&rows)?)?;
    }
    if !bad.is_empty() {
        return Err(CliError::InvariantMismatch(bad.join("; ")));
    }
    Ok(())
}

/// Execute one parsed command line.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Catalog(a) => cmd_catalog(a, out),
        Command::Ifun(a) => cmd_ifun(a, out, err),
        Command::Pf(a) => cmd_pf(a, out, err),
        Command::Qconn(a) => cmd_qconn(a, out),
        Command::Invariants(a) => cmd_invariants(a, out),
    }
}
