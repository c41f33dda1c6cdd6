//! Rectangle closure, orthogonality sign propagation, and the hyperplane
//! certificate built from them.
//!
//! Every rectangle is a signed circuit of every oriented cube, so a signing
//! of the cube that is a cocircuit must be orthogonal to all of them. Given a
//! zero set and a few seeded signs, the rectangle constraints often force all
//! remaining signs. That is the engine here.
//!
//! A [`HypCert`] for the hyperplane `c·x = r` with zero set `Z` holds:
//! - `c1` a closure trace showing `Z` is closed under rectangles,
//! - `c2` at most `n` vertices of `Z` whose rectangle closure covers `Z`,
//! - `c3` a seed `s ∉ Z` with `cl_R(Z ∪ {s}) = C^n`,
//! - `c4` a three-valued propagation from `s` forcing exactly the cocircuit.
//!
//! Why this suffices in an oriented cube `M` of rank `n + 1`: by `c2` the
//! closure of `Z` in `M` has rank at most `n`, so it lies in some hyperplane
//! `H` of `M` with a cocircuit `Y`. `Y` vanishes on `Z` and is orthogonal to
//! every rectangle. By `c3`, `s ∉ H` (else `H = C^n`), so `Y(s) ≠ 0` and up to
//! negation `Y(s) = +`. Propagation only draws consequences valid for every
//! such `Y` (zeros allowed outside `Z`), so `c4` pins `Y` down to the
//! cocircuit of the real cube. In particular `H = Z`.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cube::{check_dim, AffineForm, Rectangle, RectangleIndex, SignedSet, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::levels::{level, property_e_levels, embed, EVariant, WeightVector};
use crate::primitive::is_primitive;

const UNK: i8 = 2;
const RSIGN: [i8; 4] = [1, 1, -1, -1];

fn check_set(n: usize, s: &VertexSet) -> Result<()> {
    for v in s.iter() {
        Vertex::new(n, v.mask())?;
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClosureStep {
    pub rect: Rectangle,
    pub present: [Vertex; 3],
    pub added: Vertex,
}

/// Replayable run of the rectangle closure.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClosureTrace {
    pub n: usize,
    pub start: VertexSet,
    pub steps: Vec<ClosureStep>,
    pub result: VertexSet,
}

/// Least superset of `start` in which no rectangle has exactly three vertices.
fn closure_flags(idx: &RectangleIndex, start: &[u32], mut on_step: impl FnMut(usize, u32)) -> Vec<bool> {
    let mut inside = vec![false; 1 << idx.n];
    let mut count = vec![0u8; idx.len()];
    let mut queue = VecDeque::new();
    for &v in start {
        if !inside[v as usize] {
            inside[v as usize] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &k in &idx.incident[v as usize] {
            let k = k as usize;
            count[k] += 1;
            if count[k] == 3 {
                if let Some(&x) = idx.corners[k].iter().find(|&&x| !inside[x as usize]) {
                    inside[x as usize] = true;
                    queue.push_back(x);
                    on_step(k, x);
                }
            }
        }
    }
    inside
}

pub fn rect_closure(n: usize, s: &VertexSet) -> Result<ClosureTrace> {
    check_dim(n)?;
    check_set(n, s)?;
    if n < 2 {
        return Ok(ClosureTrace {
            n,
            start: s.clone(),
            steps: Vec::new(),
            result: s.clone(),
        });
    }
    let idx = RectangleIndex::get(n)?;
    let start: Vec<u32> = s.iter().map(|v| v.mask()).collect();
    let mut steps = Vec::new();
    let flags = closure_flags(&idx, &start, |k, x| {
        let rect = idx.rects[k];
        let others: Vec<Vertex> = rect.vertices().into_iter().filter(|v| v.mask() != x).collect();
        steps.push(ClosureStep {
            rect,
            present: [others[0], others[1], others[2]],
            added: Vertex::from_mask(x),
        });
    });
    Ok(ClosureTrace {
        n,
        start: s.clone(),
        steps,
        result: VertexSet::from_indicator(&flags),
    })
}

/// A small subset of `S` whose closure covers `S`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpanningCert {
    pub subset: VertexSet,
    pub trace: ClosureTrace,
}

/// Greedy search (largest closure gain, ties to the smallest vertex), then a
/// bounded backtracking search over subsets in canonical order.
pub fn spanning_subset(n: usize, s: &VertexSet, k: usize) -> Result<Option<SpanningCert>> {
    check_dim(n)?;
    check_set(n, s)?;
    if s.is_empty() || k == 0 {
        return Ok(None);
    }
    if k >= s.len() || n < 2 {
        if k < s.len() {
            return Ok(None);
        }
        let trace = rect_closure(n, s)?;
        return Ok(Some(SpanningCert { subset: s.clone(), trace }));
    }
    let idx = RectangleIndex::get(n)?;
    let members: Vec<u32> = s.iter().map(|v| v.mask()).collect();
    let covered = |flags: &[bool]| members.iter().filter(|&&m| flags[m as usize]).count();

    let mut chosen: Vec<u32> = Vec::new();
    let mut flags = vec![false; 1 << n];
    while covered(&flags) < members.len() && chosen.len() < k {
        let mut best: Option<(usize, u32, Vec<bool>)> = None;
        for &m in &members {
            if flags[m as usize] {
                continue;
            }
            let mut trial = chosen.clone();
            trial.push(m);
            let f = closure_flags(&idx, &trial, |_, _| {});
            let gain = covered(&f);
            if best.as_ref().is_none_or(|b| gain > b.0) {
                best = Some((gain, m, f));
            }
        }
        let (_, m, f) = best.expect("an uncovered member exists");
        chosen.push(m);
        flags = f;
    }
    if covered(&flags) == members.len() {
        let subset: VertexSet = chosen.iter().map(|&m| Vertex::from_mask(m)).collect();
        let trace = rect_closure(n, &subset)?;
        return Ok(Some(SpanningCert { subset, trace }));
    }

    // bounded backtracking
    let mut budget = 20_000usize;
    fn dfs(
        idx: &RectangleIndex,
        members: &[u32],
        from: usize,
        k: usize,
        cur: &mut Vec<u32>,
        budget: &mut usize,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let f = closure_flags(idx, cur, |_, _| {});
        if members.iter().all(|&m| f[m as usize]) {
            return true;
        }
        if cur.len() == k {
            return false;
        }
        for i in from..members.len() {
            if f[members[i] as usize] {
                continue;
            }
            cur.push(members[i]);
            if dfs(idx, members, i + 1, k, cur, budget) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::new();
    if dfs(&idx, &members, 0, k, &mut cur, &mut budget) {
        let subset: VertexSet = cur.iter().map(|&m| Vertex::from_mask(m)).collect();
        let trace = rect_closure(n, &subset)?;
        return Ok(Some(SpanningCert { subset, trace }));
    }
    Ok(None)
}

/// Which values vertices outside the zero set may take.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Domain {
    /// `±` only: the zero set is exactly `Z`.
    Signed,
    /// `+`, `-` or `0`: `Z` is a lower bound for the zero set.
    SignedOrZero,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SignAssignment {
    pub vertex: Vertex,
    pub sign: i8,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ForcingStep {
    pub rect: Rectangle,
    pub vertex: Vertex,
    pub sign: i8,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum ForcingStatus {
    /// Exactly one signing extends the seeds.
    Unique,
    /// At least `completions` signings; `capped` when counting stopped early.
    Ambiguous {
        free: VertexSet,
        completions: u64,
        capped: bool,
    },
    /// Propagation hit a rectangle no signing can satisfy.
    Contradiction { rect: Rectangle },
    /// Propagation was consistent but the exhaustive search found no signing.
    Infeasible,
    /// The search budget ran out before uniqueness was decided.
    Undecided { free: VertexSet, found: u64 },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchSummary {
    pub nodes: u64,
    pub completions: u64,
    pub capped: bool,
}

/// Evidence from a propagation run.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ForcingCert {
    pub n: usize,
    pub domain: Domain,
    pub zero_set: VertexSet,
    pub seeds: Vec<SignAssignment>,
    pub steps: Vec<ForcingStep>,
    #[serde(rename = "final")]
    pub final_signs: SignedSet,
    pub status: ForcingStatus,
    /// Present when propagation stalled and uniqueness came from search.
    pub search: Option<SearchSummary>,
}

enum RectState {
    Quiet,
    Force(u32, i8),
    Conflict,
}

struct Engine<'a> {
    idx: &'a RectangleIndex,
    domain: Domain,
}

impl Engine<'_> {
    fn inspect(&self, k: usize, vals: &[i8]) -> RectState {
        let c = &self.idx.corners[k];
        let mut unknown = None;
        let mut n_unknown = 0;
        let mut prod = 0i8;
        let mut mixed = false;
        for i in 0..4 {
            let x = vals[c[i] as usize];
            if x == UNK {
                n_unknown += 1;
                unknown = Some(i);
            } else if x != 0 {
                let p = x * RSIGN[i];
                if prod == 0 {
                    prod = p;
                } else if p != prod {
                    mixed = true;
                }
            }
        }
        match (n_unknown, mixed, prod) {
            (0, false, p) if p != 0 => RectState::Conflict,
            (1, false, 0) => match self.domain {
                Domain::Signed => RectState::Conflict,
                Domain::SignedOrZero => RectState::Force(c[unknown.unwrap()], 0),
            },
            (1, false, p) => {
                let i = unknown.unwrap();
                RectState::Force(c[i], -p * RSIGN[i])
            }
            _ => RectState::Quiet,
        }
    }

    /// Unit propagation to fixpoint; `Err(k)` names a violated rectangle.
    fn run(
        &self,
        vals: &mut [i8],
        queue: &mut VecDeque<u32>,
        mut record: Option<&mut Vec<(usize, u32, i8)>>,
    ) -> std::result::Result<(), usize> {
        while let Some(v) = queue.pop_front() {
            for &k in &self.idx.incident[v as usize] {
                let k = k as usize;
                match self.inspect(k, vals) {
                    RectState::Quiet => {}
                    RectState::Conflict => return Err(k),
                    RectState::Force(x, s) => {
                        vals[x as usize] = s;
                        queue.push_back(x);
                        if let Some(r) = record.as_deref_mut() {
                            r.push((k, x, s));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Counts completions of `vals` up to `cap`, keeping the first one.
    fn count(
        &self,
        vals: &[i8],
        order: &[u32],
        cap: u64,
        budget: &mut u64,
        nodes: &mut u64,
        first: &mut Option<Vec<i8>>,
    ) -> (u64, bool) {
        *nodes += 1;
        if *budget == 0 {
            return (0, true);
        }
        *budget -= 1;
        let Some(&pick) = order.iter().find(|&&v| vals[v as usize] == UNK) else {
            if first.is_none() {
                *first = Some(vals.to_vec());
            }
            return (1, false);
        };
        let choices: &[i8] = match self.domain {
            Domain::Signed => &[1, -1],
            Domain::SignedOrZero => &[1, -1, 0],
        };
        let mut total = 0;
        for &s in choices {
            let mut next = vals.to_vec();
            next[pick as usize] = s;
            let mut q = VecDeque::from([pick]);
            if self.run(&mut next, &mut q, None).is_err() {
                continue;
            }
            let (c, capped) = self.count(&next, order, cap - total, budget, nodes, first);
            total += c;
            if capped {
                return (total, true);
            }
            if total >= cap {
                return (total, false);
            }
        }
        (total, false)
    }
}

fn initial_values(n: usize, z: &VertexSet, seeds: &[SignAssignment]) -> Result<Vec<i8>> {
    check_dim(n)?;
    check_set(n, z)?;
    let mut vals = vec![UNK; 1 << n];
    for v in z.iter() {
        vals[v.index()] = 0;
    }
    for s in seeds {
        Vertex::new(n, s.vertex.mask())?;
        if s.sign != 1 && s.sign != -1 {
            return Err(Error::Seed(format!("sign of {} must be +1 or -1", s.vertex)));
        }
        match vals[s.vertex.index()] {
            0 => return Err(Error::Seed(format!("{} lies in the zero set", s.vertex))),
            UNK => vals[s.vertex.index()] = s.sign,
            x if x != s.sign => {
                return Err(Error::Seed(format!("conflicting signs for {}", s.vertex)))
            }
            _ => {}
        }
    }
    Ok(vals)
}

/// Default search budget for completion counting.
pub const SEARCH_BUDGET: u64 = 1_000_000;

/// Propagates the seeds, then (if needed) decides uniqueness by exhaustive
/// search. Branching follows `order` when given, else ascending vertices.
pub fn propagate_with(
    n: usize,
    z: &VertexSet,
    seeds: &[SignAssignment],
    domain: Domain,
    order: Option<&[Vertex]>,
) -> Result<ForcingCert> {
    let mut vals = initial_values(n, z, seeds)?;
    let idx: Arc<RectangleIndex> = RectangleIndex::get(n)?;
    let engine = Engine { idx: &idx, domain };
    let mut queue: VecDeque<u32> = (0..1u32 << n).filter(|&v| vals[v as usize] != UNK).collect();
    let mut raw = Vec::new();
    let outcome = if n >= 2 {
        engine.run(&mut vals, &mut queue, Some(&mut raw))
    } else {
        Ok(())
    };
    let steps = raw
        .into_iter()
        .map(|(k, x, s)| ForcingStep {
            rect: idx.rects[k],
            vertex: Vertex::from_mask(x),
            sign: s,
        })
        .collect();
    let finish = |vals: &[i8], status, search| ForcingCert {
        n,
        domain,
        zero_set: z.clone(),
        seeds: seeds.to_vec(),
        steps,
        final_signs: SignedSet::from_signs(n, &vals.iter().map(|&x| if x == UNK { 0 } else { x }).collect::<Vec<_>>()),
        status,
        search,
    };
    if let Err(k) = outcome {
        return Ok(finish(&vals, ForcingStatus::Contradiction { rect: idx.rects[k] }, None));
    }
    let free: VertexSet = (0..1u32 << n)
        .filter(|&v| vals[v as usize] == UNK)
        .map(Vertex::from_mask)
        .collect();
    if free.is_empty() {
        return Ok(finish(&vals, ForcingStatus::Unique, None));
    }
    let order: Vec<u32> = match order {
        Some(o) => o.iter().map(|v| v.mask()).chain(0..1u32 << n).collect(),
        None => (0..1u32 << n).collect(),
    };
    let mut budget = SEARCH_BUDGET;
    let mut nodes = 0;
    let mut first = None;
    let (count, capped) = engine.count(&vals, &order, 2, &mut budget, &mut nodes, &mut first);
    let summary = SearchSummary {
        nodes,
        completions: count,
        capped,
    };
    let (status, shown) = match (count, capped) {
        (1, false) => (ForcingStatus::Unique, first.unwrap()),
        (0, false) => (ForcingStatus::Infeasible, vals),
        (c, false) => (
            ForcingStatus::Ambiguous {
                free,
                completions: c,
                capped: true,
            },
            vals,
        ),
        (c, true) => (ForcingStatus::Undecided { free, found: c }, vals),
    };
    Ok(finish(&shown, status, Some(summary)))
}

pub fn propagate(n: usize, z: &VertexSet, seeds: &[SignAssignment], domain: Domain) -> Result<ForcingCert> {
    propagate_with(n, z, seeds, domain, None)
}

/// Number of signings (exactly `Z` zero in the signed domain) orthogonal to
/// every rectangle, counted up to `cap`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SigningCount {
    pub count: u64,
    pub capped: bool,
    pub nodes: u64,
}

pub fn count_signings(
    n: usize,
    z: &VertexSet,
    seeds: &[SignAssignment],
    domain: Domain,
    order: &[Vertex],
    cap: u64,
) -> Result<SigningCount> {
    let mut vals = initial_values(n, z, seeds)?;
    let idx = RectangleIndex::get(n)?;
    let engine = Engine { idx: &idx, domain };
    let mut queue: VecDeque<u32> = (0..1u32 << n).filter(|&v| vals[v as usize] != UNK).collect();
    if n >= 2 && engine.run(&mut vals, &mut queue, None).is_err() {
        return Ok(SigningCount {
            count: 0,
            capped: false,
            nodes: 0,
        });
    }
    let order: Vec<u32> = order.iter().map(|v| v.mask()).chain(0..1u32 << n).collect();
    let mut budget = SEARCH_BUDGET;
    let mut nodes = 0;
    let mut first = None;
    let (count, capped) = engine.count(&vals, &order, cap, &mut budget, &mut nodes, &mut first);
    Ok(SigningCount { count, capped, nodes })
}

/// `X_b = (∪_{a<b} S_a, ∪_{a>b} S_a)`.
pub fn cocircuit_of(h: &WeightVector, b: i64) -> SignedSet {
    let n = h.dim();
    let table = h.level_table();
    let signs: Vec<i8> = table.iter().map(|&l| (b - l).signum() as i8).collect();
    SignedSet::from_signs(n, &signs)
}

/// The part of a certificate that failed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CertPart {
    C1,
    C2,
    C3,
    C4,
    Oracle,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PropertyE {
    pub all: bool,
    pub interior: bool,
}

/// Informational facts about the weight vector; not used by the checks.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Annotations {
    pub primitive: bool,
    pub property_e: PropertyE,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HypCert {
    pub form: AffineForm,
    pub zero_set: VertexSet,
    pub c1: ClosureTrace,
    pub c2: SpanningCert,
    pub seed: SignAssignment,
    pub c3: ClosureTrace,
    pub c4: ForcingCert,
    /// Signed-domain signings with no seed; the pair `±X` gives 2.
    pub signings_without_seed: SigningCount,
    pub annotations: Option<Annotations>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "outcome")]
pub enum HypOutcome {
    Certified(Box<HypCert>),
    /// `cl_R(Z) = C^n`.
    Degenerate,
    Failed { part: CertPart, detail: String },
}

impl HypOutcome {
    pub fn cert(&self) -> Option<&HypCert> {
        match self {
            HypOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }
}

/// Vertices off the hyperplane ordered by distance to it, then by mask;
/// positive side first at equal distance.
fn seed_candidates(form: &AffineForm) -> Vec<SignAssignment> {
    let n = form.dim();
    let mut c: Vec<(i64, i8, Vertex)> = (0..1u32 << n)
        .map(Vertex::from_mask)
        .filter_map(|v| {
            let d = form.eval(v) - form.rhs;
            (d != 0).then(|| (d.abs(), -(d.signum() as i8), v))
        })
        .collect();
    c.sort();
    c.into_iter()
        .map(|(_, s, v)| SignAssignment { vertex: v, sign: -s })
        .collect()
}

/// Certificate for the hyperplane `form.coeffs · x = form.rhs`.
pub fn hyp_cert_form(form: &AffineForm) -> Result<HypOutcome> {
    let n = form.dim();
    let z = form.zero_set();
    if z.is_empty() {
        return Err(Error::Precondition(format!("{form} has no vertex on it")));
    }
    let full = 1usize << n;
    let failed = |part, detail: String| Ok(HypOutcome::Failed { part, detail });

    let c1 = rect_closure(n, &z)?;
    if c1.result.len() == full {
        return Ok(HypOutcome::Degenerate);
    }
    if !c1.steps.is_empty() {
        return failed(CertPart::C1, format!("closure adds {}", c1.steps[0].added));
    }
    let Some(c2) = spanning_subset(n, &z, n)? else {
        return failed(CertPart::C2, format!("no {n} vertices span the {} points", z.len()));
    };
    let candidates = seed_candidates(form);
    let mut c3 = None;
    for cand in &candidates {
        let mut s = z.clone();
        s.insert(cand.vertex);
        let t = rect_closure(n, &s)?;
        if t.result.len() == full {
            c3 = Some((*cand, t));
            break;
        }
    }
    let Some((seed, c3)) = c3 else {
        return failed(CertPart::C3, "no vertex closes with the zero set to the whole cube".into());
    };
    let target = form.cocircuit();
    let order: Vec<Vertex> = candidates.iter().map(|c| c.vertex).collect();
    let c4 = propagate_with(n, &z, &[seed], Domain::SignedOrZero, Some(&order))?;
    if c4.status != ForcingStatus::Unique {
        return failed(CertPart::C4, format!("propagation from {}: {:?}", seed.vertex, c4.status));
    }
    if c4.final_signs != target {
        return failed(CertPart::C4, format!("forced signing {} differs from the cocircuit", c4.final_signs));
    }
    let oracle = count_signings(n, &z, &[], Domain::Signed, &order, 3)?;
    if oracle.count != 2 || oracle.capped {
        return failed(
            CertPart::Oracle,
            format!("{} unseeded signings (capped: {})", oracle.count, oracle.capped),
        );
    }
    Ok(HypOutcome::Certified(Box::new(HypCert {
        form: form.clone(),
        zero_set: z,
        c1,
        c2,
        seed,
        c3,
        c4,
        signings_without_seed: oracle,
        annotations: None,
    })))
}

/// Certificate for the level hyperplane `S_b(h)`, annotated with
/// primitivity and property (E).
pub fn hyp_cert(h: &WeightVector, b: i64) -> Result<HypOutcome> {
    if level(h, b).is_empty() {
        return Err(Error::EmptyLevel {
            weights: h.to_string(),
            level: b,
        });
    }
    let form = AffineForm::new(
        h.weights().iter().map(|&x| x as i64).collect(),
        h.total() - 2 * b,
    )?;
    let mut out = hyp_cert_form(&form)?;
    if let HypOutcome::Certified(cert) = &mut out {
        cert.annotations = Some(annotations(h, b)?);
    }
    Ok(out)
}

pub fn annotations(h: &WeightVector, b: i64) -> Result<Annotations> {
    Ok(Annotations {
        primitive: is_primitive(h)?.primitive,
        property_e: PropertyE {
            all: property_e_levels(h, EVariant::All)?.contains(&b),
            interior: property_e_levels(h, EVariant::Interior)?.contains(&b),
        },
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelEmbedding {
    pub a: i64,
    pub embedded: bool,
}

/// Result of checking the extension `(h, g)` of a level hyperplane.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Thm23Report {
    pub h: WeightVector,
    pub b: i64,
    pub g: u32,
    pub extended: WeightVector,
    /// `S_a(h,g) ↪ S_b(h,g)` for every other nonempty level.
    pub embeddings: Vec<LevelEmbedding>,
    pub all_embedded: bool,
    pub hyp: HypOutcome,
    /// Levels `a` with `b < a ≤ 2b`.
    pub case1_levels: Vec<i64>,
    /// Levels `a > 2b`.
    pub case2_levels: Vec<i64>,
    pub passed: bool,
}

pub fn check_thm23(h: &WeightVector, b: i64, g: u32) -> Result<Thm23Report> {
    if !property_e_levels(h, EVariant::Interior)?.contains(&b) {
        return Err(Error::Precondition(format!(
            "(h-i) fails: not every interior level of {h} embeds in S_{b}"
        )));
    }
    if g as i64 > b {
        return Err(Error::Precondition(format!("g = {g} exceeds b = {b}")));
    }
    let ext = h.extended(g)?;
    let sizes = ext.level_sizes();
    let mut embeddings = Vec::new();
    let (mut case1, mut case2) = (Vec::new(), Vec::new());
    for (a, &sz) in sizes.iter().enumerate() {
        let a = a as i64;
        if a == b || sz == 0 {
            continue;
        }
        embeddings.push(LevelEmbedding {
            a,
            embedded: embed(&ext, a, b)?.is_some(),
        });
        if a > b && a <= 2 * b {
            case1.push(a);
        } else if a > 2 * b {
            case2.push(a);
        }
    }
    let all_embedded = embeddings.iter().all(|e| e.embedded);
    let hyp = hyp_cert(&ext, b)?;
    let passed = all_embedded && matches!(hyp, HypOutcome::Certified(_));
    Ok(Thm23Report {
        h: h.clone(),
        b,
        g,
        extended: ext,
        embeddings,
        all_embedded,
        hyp,
        case1_levels: case1,
        case2_levels: case2,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> VertexSet {
        items.iter().map(|s| s.parse::<Vertex>().unwrap()).collect()
    }

    fn w(s: &str) -> WeightVector {
        s.parse().unwrap()
    }

    #[test]
    fn closure_examples() {
        let t = rect_closure(2, &set(&["∅", "1", "2"])).unwrap();
        assert_eq!(t.result.len(), 4);
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].added.to_string(), "12");
        let t = rect_closure(3, &set(&["∅", "1", "2", "3"])).unwrap();
        assert_eq!(t.result.len(), 8);
        let t = rect_closure(3, &set(&["13"])).unwrap();
        assert!(t.steps.is_empty());
    }

    #[test]
    fn spanning_examples() {
        let facet = set(&["∅", "1", "2", "12"]);
        let c = spanning_subset(3, &facet, 3).unwrap().unwrap();
        assert_eq!(c.subset, set(&["∅", "1", "2"]));
        let c = spanning_subset(3, &facet, 4).unwrap().unwrap();
        assert_eq!(c.subset, facet);
        // S_2 of (1,1,1,2) is {12,13,23,4}: no rectangle lies inside it
        let s2 = level(&w("1,1,1,2"), 2);
        assert!(spanning_subset(4, &s2, 3).unwrap().is_none());
        assert!(spanning_subset(4, &s2, 4).unwrap().is_some());
    }

    #[test]
    fn propagate_level_of_1112() {
        let h = w("1,1,1,2");
        let z = level(&h, 2);
        let seed = SignAssignment { vertex: "1".parse().unwrap(), sign: 1 };
        let cert = propagate(4, &z, &[seed], Domain::Signed).unwrap();
        assert_eq!(cert.status, ForcingStatus::Unique);
        assert_eq!(cert.final_signs, cocircuit_of(&h, 2));
        assert_eq!(cert.final_signs.pos, set(&["∅", "1", "2", "3"]));
        assert_eq!(cert.final_signs.neg.len(), 8);
    }

    #[test]
    fn propagate_facet_of_square() {
        let z = set(&["∅", "2"]);
        let seed = SignAssignment { vertex: "1".parse().unwrap(), sign: 1 };
        let cert = propagate(2, &z, &[seed], Domain::Signed).unwrap();
        assert_eq!(cert.status, ForcingStatus::Unique);
        assert_eq!(cert.final_signs.sign("12".parse().unwrap()), 1);
    }

    #[test]
    fn propagate_contradiction_and_seed_errors() {
        let z = set(&["∅", "1", "2"]);
        let seed = SignAssignment { vertex: "12".parse().unwrap(), sign: 1 };
        let cert = propagate(2, &z, &[seed], Domain::Signed).unwrap();
        assert!(matches!(cert.status, ForcingStatus::Contradiction { .. }));
        let inside = SignAssignment { vertex: "1".parse().unwrap(), sign: 1 };
        assert!(matches!(propagate(2, &z, &[inside], Domain::Signed), Err(Error::Seed(_))));
        let a = SignAssignment { vertex: "12".parse().unwrap(), sign: 1 };
        let b = SignAssignment { vertex: "12".parse().unwrap(), sign: -1 };
        assert!(propagate(2, &VertexSet::new(), &[a, b], Domain::Signed).is_err());
    }

    #[test]
    fn ambiguous_without_constraints() {
        // n = 3, zero set a facet, no seed: the facet cocircuit pair only
        let z = set(&["∅", "1", "2", "12"]);
        let c = count_signings(3, &z, &[], Domain::Signed, &[], 10).unwrap();
        assert_eq!(c.count, 2);
        // C^2 with nothing fixed and one seed: several signings
        let seed = SignAssignment { vertex: "∅".parse().unwrap(), sign: 1 };
        let cert = propagate(2, &VertexSet::new(), &[seed], Domain::Signed).unwrap();
        assert!(matches!(cert.status, ForcingStatus::Ambiguous { .. }));
    }

    #[test]
    fn cocircuit_examples() {
        let x = cocircuit_of(&w("1,1,1,2"), 2);
        assert_eq!(x.pos, set(&["∅", "1", "2", "3"]));
        assert_eq!(x.neg.len(), 8);
        // x_1 = -1 facet: (1,0), level 1
        let f = cocircuit_of(&w("1,0"), 1);
        assert_eq!(f.pos, set(&["∅", "2"]));
        assert!(f.neg.is_empty());
        let h = w("1,1,2");
        assert_eq!(cocircuit_of(&h, 3).pos.antipode(3), cocircuit_of(&h, 1).neg);
    }

    #[test]
    fn hyp_cert_1112() {
        let out = hyp_cert(&w("1,1,1,2"), 2).unwrap();
        let cert = out.cert().expect("certified");
        assert_eq!(cert.c4.final_signs, cocircuit_of(&w("1,1,1,2"), 2));
        assert_eq!(cert.signings_without_seed.count, 2);
        let ann = cert.annotations.as_ref().unwrap();
        assert!(ann.primitive && ann.property_e.all);
    }

    #[test]
    fn facets_and_non_hyperplanes() {
        // skew-facet and facet levels certify like any other hyperplane
        assert!(hyp_cert(&w("1,1"), 1).unwrap().cert().is_some());
        assert!(hyp_cert(&w("0,1"), 0).unwrap().cert().is_some());
        // S_3(1,2,3) = {12, 3} spans only a line of C^3
        assert!(matches!(hyp_cert(&w("1,2,3"), 3).unwrap(), HypOutcome::Failed { .. }));
    }

    #[test]
    fn thm23_examples() {
        for g in 0..=2 {
            let r = check_thm23(&w("1,1,1"), 2, g).unwrap();
            assert!(r.passed, "g = {g}: {r:?}");
        }
        assert!(check_thm23(&w("1,1,1"), 2, 3).is_err());
        let e = check_thm23(&w("1,2,2,3"), 4, 1).unwrap_err();
        assert!(e.to_string().contains("(h-i)"));
    }
}
