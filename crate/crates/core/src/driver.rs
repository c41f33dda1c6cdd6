//! Per-dimension certification run.
//!
//! Every hyperplane orbit of `C^n` is represented by its sorted vector with
//! the largest entry as right-hand side. Facet patterns are axioms; every
//! other orbit gets a full [`HypCert`]. The report is deterministic: no
//! timings, orbits in canonical order.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::envelope::{CertificateEnvelope, Kind};
use crate::error::{Error, Result};
use crate::forcing::{hyp_cert, Annotations, HypCert, HypOutcome};
use crate::hyperplanes::{
    adjudicate_tables, builtin_tables, compare_families, enumerate_hn_bounded, enumerate_hn_subsets, gen_g,
    orbit_size, tables_sha256, FamilyDiff, SortedVector, TableAdjudication,
};
use crate::levels::WeightVector;
use crate::verify;

pub const MAX_N: usize = 7;
/// Coefficient bound for the bounded enumeration; completeness at `n = 7`
/// is claimed only up to it.
pub const COEFF_BOUND: u32 = 12;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Source {
    Subsets,
    Bounded,
    Builtin,
}

impl Source {
    /// Subset spans up to `n = 6`, bounded coefficients beyond.
    pub fn default_for(n: usize) -> Source {
        if n <= 6 { Source::Subsets } else { Source::Bounded }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum OrbitStatus {
    AxiomFacet,
    AxiomSkewFacet,
    Certified { cert_id: String, content_hash: String },
    Degenerate,
    Failed { reason: String },
}

impl OrbitStatus {
    pub fn is_axiom(&self) -> bool {
        matches!(self, OrbitStatus::AxiomFacet | OrbitStatus::AxiomSkewFacet)
    }

    pub fn is_settled(&self) -> bool {
        self.is_axiom() || matches!(self, OrbitStatus::Certified { .. })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitResult {
    pub vector: SortedVector,
    pub rhs_index: usize,
    pub h: WeightVector,
    pub b: i64,
    pub orbit_size: u64,
    pub status: OrbitStatus,
    pub annotations: Option<Annotations>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyCheck {
    pub certified_from: String,
    pub reference: String,
    pub diff: FamilyDiff,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub orbits: usize,
    pub axioms: usize,
    pub certified: usize,
    pub degenerate: usize,
    pub failed: usize,
    pub hyperplanes: u64,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub confirmed: bool,
    pub statement: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremReport {
    pub n: usize,
    pub source: Source,
    pub assumed_lemmas: Vec<String>,
    pub orbits: Vec<OrbitResult>,
    pub family: FamilyCheck,
    /// The transcribed table against the certified family.
    pub table_diff: FamilyDiff,
    /// Present for `n ≥ 6`, where the tables have known defects.
    pub adjudication: Option<TableAdjudication>,
    pub summary: Summary,
    pub verdict: Verdict,
    pub tool_version: String,
    pub checksums: BTreeMap<String, String>,
}

pub struct Certification {
    pub report: TheoremReport,
    /// `(id, envelope)` in orbit order.
    pub certs: Vec<(String, CertificateEnvelope)>,
}

fn check_n(n: usize) -> Result<()> {
    if !(1..=MAX_N).contains(&n) {
        return Err(Error::Precondition(format!("certification supports 1 ≤ n ≤ {MAX_N}, got {n}")));
    }
    Ok(())
}

fn h6() -> Result<BTreeSet<SortedVector>> {
    Ok(enumerate_hn_subsets(6)?.family)
}

/// G_7 together with the listed extras.
fn g7_with_extras() -> Result<BTreeSet<SortedVector>> {
    let mut f = gen_g(&h6()?)?;
    f.extend(builtin_tables().extras());
    Ok(f)
}

fn source_family(n: usize, source: Source) -> Result<(BTreeSet<SortedVector>, String)> {
    Ok(match (source, n) {
        (Source::Subsets, 7) => {
            return Err(Error::Precondition("subset-span enumeration is limited to n ≤ 6".into()));
        }
        (Source::Subsets, _) => (enumerate_hn_subsets(n)?.family, "subset-span enumeration".into()),
        (Source::Bounded, _) => (
            enumerate_hn_bounded(n, COEFF_BOUND)?,
            format!("bounded enumeration, coefficients ≤ {COEFF_BOUND}"),
        ),
        (Source::Builtin, 7) => (g7_with_extras()?, "G_7 from enumerated H_6 plus the listed extras".into()),
        (Source::Builtin, _) => (builtin_tables().family(n), "transcribed table".into()),
    })
}

/// An enumeration independent of `source`, used as the reference family.
fn reference_family(n: usize, source: Source) -> Result<(BTreeSet<SortedVector>, String)> {
    match (n, source) {
        (7, Source::Bounded) => source_family(7, Source::Builtin),
        (7, _) => source_family(7, Source::Bounded),
        (_, Source::Subsets) => source_family(n, Source::Bounded),
        _ => source_family(n, Source::Subsets),
    }
}

/// The default reference for a report of dimension `n`.
pub fn default_reference(n: usize) -> Result<BTreeSet<SortedVector>> {
    check_n(n)?;
    Ok(source_family(n, Source::default_for(n))?.0)
}

pub fn cert_id(sv: &SortedVector) -> String {
    let e: Vec<String> = sv.entries().iter().map(u32::to_string).collect();
    format!("n{}-{}", sv.n(), e.join("-"))
}

/// Certifies one orbit with entry `rhs_index` as right-hand side.
pub fn certify_orbit(sv: &SortedVector, rhs_index: usize) -> Result<(OrbitResult, Option<CertificateEnvelope>)> {
    let (h, b) = sv.representative(rhs_index)?;
    let mut annotations = None;
    let mut env = None;
    let status = if sv.is_axiom_pattern() {
        if sv.entries()[rhs_index] == 1 { OrbitStatus::AxiomFacet } else { OrbitStatus::AxiomSkewFacet }
    } else {
        match hyp_cert(&h, b) {
            Ok(HypOutcome::Certified(cert)) => {
                annotations = cert.annotations.clone();
                let e = CertificateEnvelope::seal(Kind::Hyp, sv.n(), &cert)?;
                let status = OrbitStatus::Certified {
                    cert_id: cert_id(sv),
                    content_hash: e.content_hash.clone(),
                };
                env = Some(e);
                status
            }
            Ok(HypOutcome::Degenerate) => OrbitStatus::Degenerate,
            Ok(HypOutcome::Failed { part, detail }) => OrbitStatus::Failed {
                reason: format!("{part:?}: {detail}"),
            },
            Err(e) => OrbitStatus::Failed { reason: e.to_string() },
        }
    };
    let orbit = OrbitResult {
        vector: sv.clone(),
        rhs_index,
        h,
        b,
        orbit_size: u64::try_from(orbit_size(sv)).map_err(|_| Error::Overflow)?,
        status,
        annotations,
    };
    Ok((orbit, env))
}

fn summarize(orbits: &[OrbitResult]) -> Summary {
    let mut s = Summary {
        orbits: orbits.len(),
        ..Default::default()
    };
    for o in orbits {
        s.hyperplanes += o.orbit_size;
        match o.status {
            OrbitStatus::AxiomFacet | OrbitStatus::AxiomSkewFacet => s.axioms += 1,
            OrbitStatus::Certified { .. } => s.certified += 1,
            OrbitStatus::Degenerate => s.degenerate += 1,
            OrbitStatus::Failed { .. } => s.failed += 1,
        }
    }
    s
}

fn verdict(n: usize, orbits: &[OrbitResult], diff: &FamilyDiff) -> Verdict {
    let unsettled: Vec<String> = orbits
        .iter()
        .filter(|o| !o.status.is_settled())
        .map(|o| o.vector.to_string())
        .collect();
    let mut reasons = Vec::new();
    if !unsettled.is_empty() {
        reasons.push(format!("unsettled orbits {}", unsettled.join(" ")));
    }
    if !diff.is_empty() {
        reasons.push(format!(
            "family differs from the reference ({} only certified, {} only reference)",
            diff.only_left.len(),
            diff.only_right.len()
        ));
    }
    if reasons.is_empty() {
        Verdict {
            confirmed: true,
            statement: format!("unique oriented cube confirmed at n = {n}"),
        }
    } else {
        Verdict {
            confirmed: false,
            statement: format!("not confirmed at n = {n}: {}", reasons.join("; ")),
        }
    }
}

pub fn assumed_lemmas() -> Vec<String> {
    vec![
        "Symmetry reduction: rectangles and facet cocircuits are invariant under the signed permutations of the cube \
         (checked computationally), and this invariance lets one signed cocircuit per orbit stand for the whole \
         orbit. The matroid-level reduction itself is assumed, not re-proved."
            .into(),
        "Rank: a zero set closed under rectangles and spanned by at most n of its vertices, whose closure with one \
         more vertex is the whole cube, is the zero set of a cocircuit."
            .into(),
    ]
}

/// Certifies every orbit of `H_n`. `jobs = 0` uses the default pool size.
pub fn certify_all(n: usize, source: Source, jobs: usize) -> Result<Certification> {
    check_n(n)?;
    let (family, certified_from) = source_family(n, source)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("worker pool: {e}")))?;
    let vectors: Vec<SortedVector> = family.iter().cloned().collect();
    let results: Vec<(OrbitResult, Option<CertificateEnvelope>)> =
        pool.install(|| vectors.par_iter().map(|sv| certify_orbit(sv, sv.n())).collect::<Result<_>>())?;

    let (reference, reference_name) = reference_family(n, source)?;
    let diff = compare_families(&family, &reference);

    let tables = builtin_tables();
    let (table_diff, adjudication) = if n >= 6 {
        let h6 = if n == 6 { family.clone() } else { h6()? };
        let g7 = gen_g(&h6)?;
        let adj = adjudicate_tables(&BTreeMap::from([(6, h6)]), &g7)?;
        let listed = if n == 7 {
            g7.iter().cloned().chain(tables.extras()).collect()
        } else {
            tables.family(6)
        };
        (compare_families(&listed, &family), Some(adj))
    } else {
        (compare_families(&tables.family(n), &family), None)
    };

    let mut orbits = Vec::with_capacity(results.len());
    let mut certs = Vec::new();
    for (o, env) in results {
        if let (OrbitStatus::Certified { cert_id, .. }, Some(env)) = (&o.status, env) {
            certs.push((cert_id.clone(), env));
        }
        orbits.push(o);
    }
    let report = TheoremReport {
        n,
        source,
        assumed_lemmas: assumed_lemmas(),
        summary: summarize(&orbits),
        verdict: verdict(n, &orbits, &diff),
        orbits,
        family: FamilyCheck {
            certified_from,
            reference: reference_name,
            diff,
        },
        table_diff,
        adjudication,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        checksums: BTreeMap::from([("tables.json".into(), tables_sha256())]),
    };
    Ok(Certification { report, certs })
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

pub fn report_path(store: &Path, n: usize) -> PathBuf {
    store.join("reports").join(format!("n={n}")).join("report.json")
}

pub fn cert_path(store: &Path, id: &str) -> PathBuf {
    store.join("certs").join(format!("{id}.json"))
}

/// Writes `reports/n=<k>/report.json` and `certs/<id>.json` under `store`.
/// Returns the report path.
pub fn write_store(store: &Path, c: &Certification) -> Result<PathBuf> {
    let report = report_path(store, c.report.n);
    let dirs = [report.parent().unwrap().to_path_buf(), store.join("certs")];
    for d in &dirs {
        fs::create_dir_all(d).map_err(|e| io_err(d, e))?;
    }
    for (id, env) in &c.certs {
        let p = cert_path(store, id);
        fs::write(&p, env.to_bytes()?).map_err(|e| io_err(&p, e))?;
    }
    let env = CertificateEnvelope::seal(Kind::Report, c.report.n, &c.report)?;
    fs::write(&report, env.to_bytes()?).map_err(|e| io_err(&report, e))?;
    Ok(report)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyOutcome {
    pub ok: bool,
    pub n: Option<usize>,
    pub replayed: usize,
    pub problems: Vec<String>,
    pub diff: Option<FamilyDiff>,
}

/// Store root for a report at `<store>/reports/n=<k>/report.json`.
fn store_of(report: &Path) -> PathBuf {
    report
        .parent()
        .and_then(Path::parent)
        .and_then(Path::parent)
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn check_orbit(store: &Path, o: &OrbitResult) -> std::result::Result<bool, String> {
    let e = o.vector.entries();
    let n = o.vector.n();
    let rhs = *e.get(o.rhs_index).ok_or("rhs index out of range")? as i64;
    let mut h: Vec<u32> = e.to_vec();
    h.remove(o.rhs_index);
    let total: i64 = h.iter().map(|&x| x as i64).sum();
    if o.h.weights() != h.as_slice() || total - 2 * o.b != rhs {
        return Err("representative does not match the sorted vector".into());
    }
    let axiom = e[..n - 1].iter().all(|&x| x == 0) && e[n - 1] == 1 && e[n] == 1;
    match &o.status {
        OrbitStatus::AxiomFacet | OrbitStatus::AxiomSkewFacet => {
            let facet = matches!(o.status, OrbitStatus::AxiomFacet);
            if !axiom || facet != (rhs == 1) {
                return Err("not a facet pattern".into());
            }
            Ok(false)
        }
        OrbitStatus::Certified { cert_id, content_hash } => {
            let path = cert_path(store, cert_id);
            let bytes = fs::read(&path).map_err(|err| format!("certificate {cert_id}: {err}"))?;
            let env = CertificateEnvelope::from_bytes(&bytes).map_err(|err| format!("certificate {cert_id}: {err}"))?;
            if env.kind != Kind::Hyp || env.n != n || &env.content_hash != content_hash {
                return Err(format!("certificate {cert_id}: does not match the report entry"));
            }
            let cert: HypCert = env.payload().map_err(|err| format!("certificate {cert_id}: {err}"))?;
            let coeffs: Vec<i64> = h.iter().map(|&x| x as i64).collect();
            if cert.form.coeffs != coeffs || cert.form.rhs != rhs {
                return Err(format!("certificate {cert_id}: equation is not the orbit representative"));
            }
            if verify::sorted_entries(&cert.form) != e.iter().map(|&x| x as u64).collect::<Vec<_>>() {
                return Err(format!("certificate {cert_id}: wrong orbit"));
            }
            verify::check_hyp(&cert).map_err(|err| format!("certificate {cert_id}: {err}"))?;
            Ok(true)
        }
        OrbitStatus::Degenerate => Err("degenerate".into()),
        OrbitStatus::Failed { reason } => Err(format!("failed: {reason}")),
    }
}

/// Replays every certificate named by the report and compares its family
/// with `reference` (default: a fresh enumeration of `H_n`).
pub fn verify_report(report: &Path, reference: Option<&BTreeSet<SortedVector>>) -> Result<VerifyOutcome> {
    let mut out = VerifyOutcome {
        ok: false,
        n: None,
        replayed: 0,
        problems: Vec::new(),
        diff: None,
    };
    let bytes = fs::read(report).map_err(|e| io_err(report, e))?;
    let parsed = CertificateEnvelope::from_bytes(&bytes)
        .and_then(|env| env.expect(Kind::Report)?.payload::<TheoremReport>().map(|r| (env.n, r)));
    let r = match parsed {
        Ok((n, r)) if n == r.n => r,
        Ok(_) => {
            out.problems.push("report: header and payload disagree on n".into());
            return Ok(out);
        }
        Err(e) => {
            out.problems.push(format!("report: {e}"));
            return Ok(out);
        }
    };
    out.n = Some(r.n);
    let store = store_of(report);
    for o in &r.orbits {
        if o.vector.n() != r.n {
            out.problems.push(format!("orbit {}: wrong dimension", o.vector));
            continue;
        }
        match check_orbit(&store, o) {
            Ok(replayed) => out.replayed += replayed as usize,
            Err(p) => out.problems.push(format!("orbit {}: {p}", o.vector)),
        }
    }
    let family: BTreeSet<SortedVector> = r.orbits.iter().map(|o| o.vector.clone()).collect();
    if family.len() != r.orbits.len() {
        out.problems.push("report lists an orbit twice".into());
    }
    let computed;
    let reference = match reference {
        Some(f) => f,
        None => {
            computed = default_reference(r.n)?;
            &computed
        }
    };
    let diff = compare_families(&family, reference);
    if !diff.is_empty() {
        out.problems.push(format!(
            "family differs from the reference: only in report {:?}, only in reference {:?}",
            diff.only_left.iter().map(ToString::to_string).collect::<Vec<_>>(),
            diff.only_right.iter().map(ToString::to_string).collect::<Vec<_>>()
        ));
    }
    if r.summary != summarize(&r.orbits) {
        out.problems.push("summary counts do not match the orbits".into());
    }
    let expected = r.orbits.iter().all(|o| o.status.is_settled()) && r.family.diff.is_empty();
    if r.verdict.confirmed != expected {
        out.problems.push("verdict inconsistent with the orbit statuses".into());
    }
    if !r.verdict.confirmed {
        out.problems.push(format!("verdict: {}", r.verdict.statement));
    }
    out.diff = Some(diff);
    out.ok = out.problems.is_empty();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n3_report() {
        let c = certify_all(3, Source::Subsets, 1).unwrap();
        let r = &c.report;
        assert_eq!(r.orbits.len(), 2);
        assert_eq!(r.orbits[0].vector.to_string(), "(0,0,1,1)");
        assert_eq!(r.orbits[0].status, OrbitStatus::AxiomFacet);
        assert!(matches!(r.orbits[1].status, OrbitStatus::Certified { .. }));
        assert!(r.verdict.confirmed, "{}", r.verdict.statement);
        assert_eq!(r.summary.hyperplanes, 20);
        assert_eq!(c.certs.len(), 1);
    }

    #[test]
    fn builtin_source_matches_at_small_n() {
        let r = certify_all(4, Source::Builtin, 1).unwrap().report;
        assert!(r.verdict.confirmed);
        assert!(r.table_diff.is_empty());
    }

    #[test]
    fn out_of_range() {
        assert!(certify_all(8, Source::Bounded, 1).is_err());
        assert!(certify_all(7, Source::Subsets, 1).is_err());
    }
}
