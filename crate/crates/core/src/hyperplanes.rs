//! Hyperplanes of the real affine cube: exact recognition, two independent
//! enumerations, the recursive family `G_n`, orbit sizes and the tabulated
//! families.
//!
//! A hyperplane is recorded up to cube symmetry by its sorted vector: the
//! absolute values of the coefficients together with the absolute value of
//! the right-hand side, sorted and divided by their gcd. Any entry may play
//! the right-hand side; all choices give equivalent hyperplanes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cube::{check_dim, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::levels::WeightVector;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Ascending nonnegative `(n+1)`-vector with gcd 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct SortedVector(Vec<u32>);

impl SortedVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let bad = |reason: &str| {
            Err(Error::SortedVector {
                entries: entries.clone(),
                reason: reason.into(),
            })
        };
        if entries.len() < 2 || entries.len() > crate::cube::MAX_DIM + 1 {
            return bad("length must be n + 1 with 1 ≤ n ≤ 16");
        }
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return bad("entries must be ascending");
        }
        if entries.iter().fold(0u64, |g, &x| gcd(g, x as u64)) != 1 {
            return bad("gcd of the entries must be 1");
        }
        Ok(SortedVector(entries))
    }

    /// Sorts the absolute values of coefficients and right-hand side and
    /// divides by their gcd.
    pub fn canonical(coeffs: &[i64], rhs: i64) -> Result<Self> {
        let mut e: Vec<u64> = coeffs.iter().chain(std::iter::once(&rhs)).map(|x| x.unsigned_abs()).collect();
        let g = e.iter().fold(0, |g, &x| gcd(g, x));
        if g == 0 {
            return Err(Error::SortedVector {
                entries: vec![0; e.len()],
                reason: "all entries are zero".into(),
            });
        }
        e.sort_unstable();
        let entries = e
            .into_iter()
            .map(|x| u32::try_from(x / g).map_err(|_| Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        SortedVector::new(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Dimension `n` of the cube (one less than the length).
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    /// `(α_0, [α_1, ..., α_k])`: number of zeros, then the multiplicity of
    /// each distinct positive value.
    pub fn profile(&self) -> (usize, Vec<usize>) {
        let zeros = self.0.iter().take_while(|&&x| x == 0).count();
        let mut mult = Vec::new();
        let mut prev = None;
        for &x in &self.0[zeros..] {
            if prev == Some(x) {
                *mult.last_mut().unwrap() += 1;
            } else {
                mult.push(1);
                prev = Some(x);
            }
        }
        (zeros, mult)
    }

    /// `(h, b)` with entry `rhs_index` as right-hand side:
    /// `h·x = entries[rhs_index]` is the level `S_b(h)`, `b = (|h| - rhs)/2`.
    pub fn representative(&self, rhs_index: usize) -> Result<(WeightVector, i64)> {
        if rhs_index > self.n() {
            return Err(Error::Precondition(format!("rhs index {rhs_index} out of range for {self}")));
        }
        let mut h = self.0.clone();
        let rhs = h.remove(rhs_index) as i64;
        let h = WeightVector::new(h)?;
        let diff = h.total() - rhs;
        if diff < 0 || diff % 2 != 0 {
            return Err(Error::Precondition(format!(
                "{self} with entry {rhs_index} as rhs has no level: |h| - rhs = {diff}"
            )));
        }
        Ok((h, diff / 2))
    }

    /// The facet and skew-facet pattern `(0,…,0,1,1)`.
    pub fn is_axiom_pattern(&self) -> bool {
        let n = self.n();
        self.0[..n - 1].iter().all(|&x| x == 0) && self.0[n - 1] == 1 && self.0[n] == 1
    }
}

impl TryFrom<Vec<u32>> for SortedVector {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        SortedVector::new(v)
    }
}

impl From<SortedVector> for Vec<u32> {
    fn from(s: SortedVector) -> Self {
        s.0
    }
}

impl fmt::Display for SortedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for SortedVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::SortedVector {
                entries: vec![],
                reason: format!("{s:?} is not a list of nonnegative integers"),
            })?;
        SortedVector::new(entries)
    }
}

/// Gauss-Jordan elimination without fractions; rows are kept primitive.
/// Returns the reduced rows and their pivot columns.
fn reduce(rows: &[Vec<i64>], cols: usize) -> Result<(Vec<Vec<i128>>, Vec<usize>)> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i == r || m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[r][c], m[i][c]);
            let mut g = 0u128;
            let pivot = m[r].clone();
            for (cell, &pv) in m[i].iter_mut().zip(&pivot) {
                let x = a
                    .checked_mul(*cell)
                    .and_then(|x| b.checked_mul(pv).and_then(|y| x.checked_sub(y)))
                    .ok_or(Error::Overflow)?;
                *cell = x;
                g = gcd128(g, x.unsigned_abs());
            }
            if g > 1 {
                for x in m[i].iter_mut() {
                    *x /= g as i128;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Ok((m, pivots))
}

fn gcd128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd128(b, a % b)
    }
}

/// Rank of an integer matrix, exactly.
pub fn integer_rank(rows: &[Vec<i64>], cols: usize) -> Result<usize> {
    Ok(reduce(rows, cols)?.1.len())
}

/// Primitive integer basis of `{x : row·x = 0 for every row}`, each vector
/// with its first nonzero entry positive.
pub fn integer_nullspace(rows: &[Vec<i64>], cols: usize) -> Result<Vec<Vec<i64>>> {
    let (m, pivots) = reduce(rows, cols)?;
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let l = m
            .iter()
            .zip(&pivots)
            .fold(1u128, |l, (row, &p)| {
                let d = row[p].unsigned_abs();
                l / gcd128(l, d) * d
            }) as i128;
        let mut x = vec![0i128; cols];
        x[f] = l;
        for (row, &p) in m.iter().zip(&pivots) {
            x[p] = -row[f] * (l / row[p]);
        }
        let g = x.iter().fold(0u128, |g, v| gcd128(g, v.unsigned_abs())) as i128;
        let sign = if x.iter().find(|&&v| v != 0).copied().unwrap_or(1) < 0 { -1 } else { 1 };
        out.push(
            x.into_iter()
                .map(|v| i64::try_from(sign * v / g).map_err(|_| Error::Overflow))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(out)
}

/// Linear rank of the differences `p - p_0` (the affine dimension of the
/// span). A single point has rank 0; `k` affinely independent points have
/// rank `k - 1`. The matroid rank of the point set is this value plus one.
pub fn affine_rank(n: usize, points: &[Vertex]) -> Result<usize> {
    check_dim(n)?;
    let Some(&p0) = points.first() else {
        return Err(Error::Precondition("affine_rank of an empty point list".into()));
    };
    let rows: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| {
            Vertex::new(n, p.mask())?;
            Ok((1..=n).map(|i| (p.coord(i) - p0.coord(i)) as i64 / 2).collect())
        })
        .collect::<Result<_>>()?;
    integer_rank(&rows, n)
}

/// The points of the cube on `coeffs · x = rhs`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HyperplaneInstance {
    pub coefficients: Vec<i64>,
    pub rhs: i64,
    pub vertex_set: VertexSet,
    /// Linear rank of the differences; `n - 1` for a hyperplane.
    pub rank: usize,
}

/// Whether `(entries without rhs_index) · x = entries[rhs_index]` cuts a
/// hyperplane out of `C^n`.
pub fn is_hyperplane(sv: &SortedVector, rhs_index: usize) -> Result<(bool, HyperplaneInstance)> {
    let n = sv.n();
    if rhs_index > n {
        return Err(Error::Precondition(format!("rhs index {rhs_index} out of range for {sv}")));
    }
    let mut coeffs: Vec<i64> = sv.entries().iter().map(|&x| x as i64).collect();
    let rhs = coeffs.remove(rhs_index);
    let h = WeightVector::new(sv.entries().iter().enumerate().filter(|&(i, _)| i != rhs_index).map(|(_, &x)| x).collect())?;
    let diff = h.total() - rhs;
    let vertex_set = if diff >= 0 && diff % 2 == 0 {
        crate::levels::level(&h, diff / 2)
    } else {
        VertexSet::new()
    };
    let rank = if vertex_set.is_empty() {
        0
    } else {
        affine_rank(n, vertex_set.as_slice())?
    };
    let ok = !vertex_set.is_empty() && rank + 1 == n;
    Ok((
        ok,
        HyperplaneInstance {
            coefficients: coeffs,
            rhs,
            vertex_set,
            rank,
        },
    ))
}

/// Some entry choice as right-hand side gives a hyperplane.
pub fn defines_hyperplane(sv: &SortedVector) -> Result<bool> {
    let mut tried = BTreeSet::new();
    for i in 0..=sv.n() {
        if tried.insert(sv.entries()[i]) && is_hyperplane(sv, i)?.0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Result of the subset-span enumeration.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HnEnumeration {
    pub n: usize,
    pub family: BTreeSet<SortedVector>,
    /// Hyperplanes of `C^n` before canonicalization, per sorted vector.
    pub raw_per_orbit: BTreeMap<SortedVector, u64>,
    pub raw_hyperplanes: u64,
    /// When set, only hyperplanes through the all-plus vertex were visited
    /// and raw counts were scaled by `2^n / |F|` per orbit.
    pub through_origin_only: bool,
}

struct SpanDfs {
    n: usize,
    coords: Vec<Vec<i64>>,
}

struct Leaf {
    normal: Vec<i64>,
    rhs: i64,
    size: u32,
}

impl SpanDfs {
    fn new(n: usize) -> Self {
        let coords = (0..1u32 << n)
            .map(|m| Vertex::from_mask(m).signs(n).into_iter().map(|s| s as i64).collect())
            .collect();
        SpanDfs { n, coords }
    }

    fn dir(&self, b0: u32, y: u32) -> Vec<i64> {
        self.coords[y as usize]
            .iter()
            .zip(&self.coords[b0 as usize])
            .map(|(a, b)| (a - b) / 2)
            .collect()
    }

    /// Children of the flat spanned by `basis` are the classes of outside
    /// points with parallel projections onto the orthogonal complement.
    /// A child is visited only from its greedy basis: its smallest new point
    /// must exceed the last basis point.
    fn node(&self, basis: &mut Vec<u32>, dirs: &mut Vec<Vec<i64>>, flat: u64, out: &mut Vec<Leaf>) -> Result<()> {
        let n = self.n;
        let b0 = basis[0];
        if dirs.len() + 1 == n {
            let normal = integer_nullspace(dirs, n)?.pop().ok_or(Error::Overflow)?;
            let rhs = normal.iter().zip(&self.coords[b0 as usize]).map(|(a, b)| a * b).sum();
            out.push(Leaf {
                normal,
                rhs,
                size: flat.count_ones(),
            });
            return Ok(());
        }
        let w = if dirs.is_empty() {
            (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
        } else {
            integer_nullspace(dirs, n)?
        };
        let mut groups: HashMap<Vec<i64>, (u32, u64)> = HashMap::new();
        for y in 0..1u32 << n {
            if flat >> y & 1 == 1 {
                continue;
            }
            let d = self.dir(b0, y);
            let mut p: Vec<i64> = w.iter().map(|wv| wv.iter().zip(&d).map(|(a, b)| a * b).sum()).collect();
            let g = p.iter().fold(0u64, |g, x| gcd(g, x.unsigned_abs())) as i64;
            let s = if p.iter().find(|&&x| x != 0).copied().unwrap_or(1) < 0 { -g } else { g };
            for x in p.iter_mut() {
                *x /= s;
            }
            groups.entry(p).or_insert((y, 0)).1 |= 1 << y;
        }
        let last = *basis.last().unwrap();
        let mut children: Vec<(u32, u64)> = groups.into_values().filter(|&(m, _)| m > last).collect();
        children.sort_unstable();
        for (m, members) in children {
            basis.push(m);
            dirs.push(self.dir(b0, m));
            self.node(basis, dirs, flat | members, out)?;
            dirs.pop();
            basis.pop();
        }
        Ok(())
    }
}

/// Enumerates the hyperplanes of `C^n` spanned by cube points (`n ≤ 6`).
/// Visits every flat once through its greedy basis. With `origin_only`, only
/// flats through the all-plus vertex are visited.
pub fn enumerate_hn_subsets_with(n: usize, origin_only: bool) -> Result<HnEnumeration> {
    check_dim(n)?;
    if n > 6 {
        return Err(Error::Precondition(format!(
            "subset enumeration is limited to n ≤ 6 (got {n})"
        )));
    }
    let dfs = SpanDfs::new(n);
    let roots: Vec<u32> = if origin_only { vec![0] } else { (0..1u32 << n).collect() };
    // parallel over first two basis points
    let pairs: Vec<(u32, u32)> = roots
        .iter()
        .flat_map(|&b0| (b0 + 1..1u32 << n).map(move |y| (b0, y)))
        .collect();
    let leaves: Vec<Vec<Leaf>> = if n == 1 {
        vec![roots
            .iter()
            .map(|&b0| Leaf {
                normal: vec![1],
                rhs: dfs.coords[b0 as usize][0],
                size: 1,
            })
            .collect()]
    } else {
        pairs
            .par_iter()
            .map(|&(b0, y)| {
                let mut out = Vec::new();
                let d = dfs.dir(b0, y);
                dfs.node(&mut vec![b0, y], &mut vec![d], (1u64 << b0) | (1u64 << y), &mut out)?;
                Ok(out)
            })
            .collect::<Result<_>>()?
    };
    let mut per_orbit: BTreeMap<SortedVector, (u64, u32)> = BTreeMap::new();
    for leaf in leaves.into_iter().flatten() {
        let sv = SortedVector::canonical(&leaf.normal, leaf.rhs)?;
        let e = per_orbit.entry(sv).or_insert((0, leaf.size));
        if e.1 != leaf.size {
            return Err(Error::CheckFailed("hyperplanes of one orbit differ in size".into()));
        }
        e.0 += 1;
    }
    let mut raw_per_orbit = BTreeMap::new();
    for (sv, (count, size)) in per_orbit {
        let raw = if origin_only {
            let scaled = count << n;
            if !scaled.is_multiple_of(size as u64) {
                return Err(Error::CheckFailed(format!("orbit {sv}: 2^n·{count} not divisible by {size}")));
            }
            scaled / size as u64
        } else {
            count
        };
        raw_per_orbit.insert(sv, raw);
    }
    Ok(HnEnumeration {
        n,
        family: raw_per_orbit.keys().cloned().collect(),
        raw_hyperplanes: raw_per_orbit.values().sum(),
        raw_per_orbit,
        through_origin_only: origin_only,
    })
}

/// Full enumeration for `n ≤ 5`, through-origin enumeration for `n = 6`.
pub fn enumerate_hn_subsets(n: usize) -> Result<HnEnumeration> {
    enumerate_hn_subsets_with(n, n >= 6)
}

fn ascending_tuples(len: usize, bound: u32) -> Vec<Vec<u32>> {
    fn rec(len: usize, min: u32, bound: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in min..=bound {
            cur.push(x);
            rec(len, x, bound, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, 0, bound, &mut Vec::new(), &mut out);
    out
}

/// Ascending gcd-1 vectors with entries `≤ bound` that define a hyperplane.
/// Complete only relative to the bound.
pub fn enumerate_hn_bounded(n: usize, bound: u32) -> Result<BTreeSet<SortedVector>> {
    check_dim(n)?;
    if bound == 0 {
        return Ok(BTreeSet::new());
    }
    let found: Vec<Option<SortedVector>> = ascending_tuples(n + 1, bound)
        .into_par_iter()
        .map(|t| {
            if t.iter().fold(0u64, |g, &x| gcd(g, x as u64)) != 1 {
                return Ok(None);
            }
            let sv = SortedVector::new(t)?;
            Ok(defines_hyperplane(&sv)?.then_some(sv))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// `(n+1)! / (α_0! ⋯ α_k!) · 2^{n - α_0}`.
pub fn orbit_size(sv: &SortedVector) -> u128 {
    let n = sv.n();
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    let (zeros, mult) = sv.profile();
    let denom: u128 = fact(zeros) * mult.iter().map(|&m| fact(m)).product::<u128>();
    fact(n + 1) / denom * (1u128 << (n - zeros))
}

/// The family `G_n` generated from `H_{n-1}`.
pub fn gen_g(prev: &BTreeSet<SortedVector>) -> Result<BTreeSet<SortedVector>> {
    let mut out = BTreeSet::new();
    for h in prev {
        let e = h.entries();
        for i in 0..e.len() {
            let hi: Vec<u32> = e.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            let hw = WeightVector::new(hi.clone())?;
            let tot = hw.total();
            let diff = tot - e[i] as i64;
            if diff < 0 || diff % 2 != 0 {
                continue;
            }
            let b = diff / 2;
            let sizes = hw.level_sizes();
            for c in 0..=b {
                if sizes[c as usize] == 0 {
                    continue;
                }
                let mut g: Vec<i64> = hi.iter().map(|&x| x as i64).collect();
                g.push(b - c);
                let last = tot - b - c;
                out.insert(SortedVector::canonical(&g, last)?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyDiff {
    pub only_left: Vec<SortedVector>,
    pub only_right: Vec<SortedVector>,
    pub common: usize,
}

impl FamilyDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

pub fn compare_families(a: &BTreeSet<SortedVector>, b: &BTreeSet<SortedVector>) -> FamilyDiff {
    FamilyDiff {
        only_left: a.difference(b).cloned().collect(),
        only_right: b.difference(a).cloned().collect(),
        common: a.intersection(b).count(),
    }
}

pub const TABLES_JSON: &str = include_str!("../data/tables.json");

pub fn tables_sha256() -> String {
    format!("{:x}", Sha256::digest(TABLES_JSON.as_bytes()))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TableEntry {
    pub raw: Vec<u32>,
    /// Right length, ascending and gcd 1.
    pub well_formed: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OneEntryPair {
    pub extra: Vec<u32>,
    pub neighbour: Vec<u32>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawTables {
    tables: BTreeMap<usize, Vec<Vec<u32>>>,
    g7_count: usize,
    g7_settled: usize,
    h7_extras: Vec<Vec<u32>>,
    g7_special_parents: Vec<Vec<u32>>,
    one_entry_pairs: Vec<OneEntryPair>,
    follow_up_pairs: Vec<OneEntryPair>,
    one_entry_claimed: usize,
    last_two: Vec<Vec<u32>>,
}

/// The tabulated families as transcribed, without corrections.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BuiltinTables {
    /// `H_n` for `n = 1..=6`.
    pub tables: BTreeMap<usize, Vec<TableEntry>>,
    pub g7_count: usize,
    pub g7_settled: usize,
    /// `H_7 ∖ G_7`.
    pub h7_extras: Vec<TableEntry>,
    pub g7_special_parents: Vec<TableEntry>,
    /// Extras said to differ in one entry from a vector of `G_7`.
    pub one_entry_pairs: Vec<OneEntryPair>,
    /// Extras said to differ in one entry from an earlier extra.
    pub follow_up_pairs: Vec<OneEntryPair>,
    pub one_entry_claimed: usize,
    pub last_two: Vec<Vec<u32>>,
}

fn entry(n: usize, raw: Vec<u32>) -> TableEntry {
    let well_formed = raw.len() == n + 1 && SortedVector::new(raw.clone()).is_ok();
    TableEntry { raw, well_formed }
}

impl BuiltinTables {
    /// Well-formed rows of `H_n` (`n ≤ 6`) or the extras (`n = 7`).
    pub fn family(&self, n: usize) -> BTreeSet<SortedVector> {
        let rows = if n == 7 { Some(&self.h7_extras) } else { self.tables.get(&n) };
        rows.into_iter()
            .flatten()
            .filter(|e| e.well_formed)
            .map(|e| SortedVector(e.raw.clone()))
            .collect()
    }

    pub fn extras(&self) -> BTreeSet<SortedVector> {
        self.family(7)
    }

    pub fn malformed(&self) -> Vec<(usize, Vec<u32>)> {
        self.tables
            .iter()
            .flat_map(|(&n, rows)| rows.iter().filter(|e| !e.well_formed).map(move |e| (n, e.raw.clone())))
            .collect()
    }
}

pub fn builtin_tables() -> &'static BuiltinTables {
    static TABLES: OnceLock<BuiltinTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let raw: RawTables = serde_json::from_str(TABLES_JSON).expect("bundled tables parse");
        BuiltinTables {
            tables: raw
                .tables
                .into_iter()
                .map(|(n, rows)| (n, rows.into_iter().map(|r| entry(n, r)).collect()))
                .collect(),
            g7_count: raw.g7_count,
            g7_settled: raw.g7_settled,
            h7_extras: raw.h7_extras.into_iter().map(|r| entry(7, r)).collect(),
            g7_special_parents: raw.g7_special_parents.into_iter().map(|r| entry(6, r)).collect(),
            one_entry_pairs: raw.one_entry_pairs,
            follow_up_pairs: raw.follow_up_pairs,
            one_entry_claimed: raw.one_entry_claimed,
            last_two: raw.last_two,
        }
    })
}

/// Multiset distance: number of entries of `a` not matched in `b`.
pub fn entry_difference(a: &[u32], b: &[u32]) -> usize {
    let mut rest = b.to_vec();
    let mut unmatched = 0;
    for x in a {
        if let Some(p) = rest.iter().position(|y| y == x) {
            rest.swap_remove(p);
        } else {
            unmatched += 1;
        }
    }
    unmatched
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MalformedResolution {
    pub n: usize,
    pub raw: Vec<u32>,
    /// Enumerated vectors missing from the table that contain `raw` after
    /// inserting one entry.
    pub resolved_as: Vec<SortedVector>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PairCheck {
    pub extra: Vec<u32>,
    pub neighbour: Vec<u32>,
    pub extra_is_hyperplane: bool,
    pub extra_listed: bool,
    pub neighbour_in_g7: bool,
    pub neighbour_in_h7: bool,
    pub entries_differing: usize,
}

/// How the transcribed tables compare with what the enumerations produce.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TableAdjudication {
    pub malformed: Vec<MalformedResolution>,
    /// Table rows against the supplied reference families.
    pub diffs: BTreeMap<usize, FamilyDiff>,
    pub g7_size: usize,
    pub g7_count_stated: usize,
    pub extras_in_g7: Vec<SortedVector>,
    pub extras_not_hyperplanes: Vec<SortedVector>,
    /// Both groups of named pairs, one-entry group first.
    pub one_entry_pairs: Vec<PairCheck>,
    pub one_entry_claimed: usize,
    pub one_entry_listed: usize,
}

/// Compares the transcribed tables with `reference` (`n → H_n`) and `g7`.
pub fn adjudicate_tables(
    reference: &BTreeMap<usize, BTreeSet<SortedVector>>,
    g7: &BTreeSet<SortedVector>,
) -> Result<TableAdjudication> {
    let t = builtin_tables();
    let mut malformed = Vec::new();
    for (n, raw) in t.malformed() {
        let listed = t.family(n);
        let resolved_as = reference
            .get(&n)
            .into_iter()
            .flatten()
            .filter(|sv| !listed.contains(*sv))
            .filter(|sv| sv.entries().len() == raw.len() + 1 && entry_difference(&raw, sv.entries()) == 0)
            .cloned()
            .collect();
        malformed.push(MalformedResolution { n, raw, resolved_as });
    }
    let diffs = reference
        .iter()
        .filter(|(n, _)| t.tables.contains_key(n))
        .map(|(&n, fam)| (n, compare_families(&t.family(n), fam)))
        .collect();
    let extras = t.extras();
    let mut extras_not_hyperplanes = Vec::new();
    for e in &extras {
        if !defines_hyperplane(e)? {
            extras_not_hyperplanes.push(e.clone());
        }
    }
    let mut pairs = Vec::new();
    for p in t.one_entry_pairs.iter().chain(&t.follow_up_pairs) {
        let extra_is_hyperplane = match SortedVector::new(p.extra.clone()) {
            Ok(sv) => defines_hyperplane(&sv)?,
            Err(_) => false,
        };
        let nb = SortedVector::new(p.neighbour.clone()).ok();
        pairs.push(PairCheck {
            extra: p.extra.clone(),
            neighbour: p.neighbour.clone(),
            extra_is_hyperplane,
            extra_listed: extras.iter().any(|e| e.entries() == p.extra.as_slice()),
            neighbour_in_g7: nb.as_ref().is_some_and(|s| g7.contains(s)),
            neighbour_in_h7: nb.as_ref().is_some_and(|s| g7.contains(s) || extras.contains(s)),
            entries_differing: entry_difference(&p.extra, &p.neighbour),
        });
    }
    Ok(TableAdjudication {
        malformed,
        diffs,
        g7_size: g7.len(),
        g7_count_stated: t.g7_count,
        extras_in_g7: extras.intersection(g7).cloned().collect(),
        extras_not_hyperplanes,
        one_entry_listed: t.one_entry_pairs.len(),
        one_entry_pairs: pairs,
        one_entry_claimed: t.one_entry_claimed,
    })
}
