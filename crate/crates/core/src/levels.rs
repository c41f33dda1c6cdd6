//! Levels `S_a(h) = {v : h·v = |h| - 2a}`, numerical rectangles and embeddings.
//!
//! The level index of a vertex is the sum of the weights over its negative
//! coordinates, so `S_a` is just "vertices whose negative weight is `a`".

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cube::{check_dim, rectangle_from_points, Rectangle, RectangleIndex, Vertex, VertexSet};
use crate::error::{Error, Result};

/// A nonnegative integer weight vector `h`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        check_dim(weights.len())?;
        Ok(WeightVector(weights))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.0
    }

    /// `|h|`.
    pub fn total(&self) -> i64 {
        self.0.iter().map(|&x| x as i64).sum()
    }

    /// Level index of `v`: the weight carried by its negative coordinates.
    #[inline]
    pub fn level_of(&self, v: Vertex) -> i64 {
        let mut m = v.mask();
        let mut s = 0i64;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            s += self.0[i] as i64;
            m &= m - 1;
        }
        s
    }

    /// Level index of every vertex, indexed by mask.
    pub fn level_table(&self) -> Vec<i64> {
        let n = self.dim();
        let mut t = vec![0i64; 1 << n];
        for m in 1..(1usize << n) {
            let low = m.trailing_zeros() as usize;
            t[m] = t[m & (m - 1)] + self.0[low] as i64;
        }
        t
    }

    /// `h·v` with `v` read as a `±1` vector.
    pub fn dot(&self, v: Vertex) -> i64 {
        self.total() - 2 * self.level_of(v)
    }

    /// `(h, g)` in one more dimension.
    pub fn extended(&self, g: u32) -> Result<Self> {
        let mut w = self.0.clone();
        w.push(g);
        WeightVector::new(w)
    }

    /// `h` with coordinate `i` (1-based) deleted.
    pub fn deleted(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.dim() {
            return Err(Error::Precondition(format!("no coordinate {i} in {self}")));
        }
        let mut w = self.0.clone();
        w.remove(i - 1);
        WeightVector::new(w)
    }

    /// `|S_a|` for `a = 0..=|h|`.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.total() as usize + 1];
        for l in self.level_table() {
            sizes[l as usize] += 1;
        }
        sizes
    }
}

impl TryFrom<Vec<u32>> for WeightVector {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<u32> {
    fn from(h: WeightVector) -> Self {
        h.0
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for WeightVector {
    type Err = Error;
    /// Comma separated nonnegative integers, optional surrounding parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let weights = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::WeightVector(format!("{s:?}: {p:?} is not a nonnegative integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightVector::new(weights).map_err(|e| Error::WeightVector(format!("{s:?}: {e}")))
    }
}

/// `S_a(h)`; empty for indices outside `0..=|h|`.
pub fn level(h: &WeightVector, a: i64) -> VertexSet {
    if a < 0 || a > h.total() {
        return VertexSet::new();
    }
    h.level_table()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l == a)
        .map(|(m, _)| Vertex::from_mask(m as u32))
        .collect()
}

/// All levels `S_0 ..= S_{|h|}`.
pub fn levels(h: &WeightVector) -> Vec<VertexSet> {
    let mut out = vec![Vec::new(); h.total() as usize + 1];
    for (m, l) in h.level_table().into_iter().enumerate() {
        out[l as usize].push(Vertex::from_mask(m as u32));
    }
    out.into_iter().map(VertexSet::from_sorted_unchecked).collect()
}

/// Splits `S_a(g)` for `g = (h, g_n)` into its parts in the facets `x_n = +1`
/// and `x_n = -1`: `S_a(h)` lifted with `+1`, `S_{a-g_n}(h)` lifted with `-1`.
pub fn level_decompose(g: &WeightVector, a: i64) -> Result<(VertexSet, VertexSet)> {
    let n = g.dim();
    if n < 2 {
        return Err(Error::Precondition("level_decompose needs dimension at least 2".into()));
    }
    let h = g.deleted(n)?;
    let gn = g.weights()[n - 1] as i64;
    let top = 1u32 << (n - 1);
    let plus = level(&h, a);
    let minus: VertexSet = level(&h, a - gn)
        .iter()
        .map(|v| Vertex::from_mask(v.mask() | top))
        .collect();
    Ok((plus, minus))
}

/// A numerical rectangle `a ≤ b ≤ c ≤ d` with `d = b + c - a`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct NumRect {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl NumRect {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if !(0 <= a && a <= b && b <= c && c <= d && d == b + c - a) {
            return Err(Error::Precondition(format!(
                "({a},{b},{c},{d}) is not a numerical rectangle (need 0 ≤ a ≤ b ≤ c ≤ d = b + c - a)"
            )));
        }
        Ok(NumRect { a, b, c, d })
    }

    /// Number of distinct values among `a, b, c, d`.
    pub fn class(&self) -> u8 {
        let mut v = [self.a, self.b, self.c, self.d];
        v.sort_unstable();
        1 + v.windows(2).filter(|w| w[0] != w[1]).count() as u8
    }

    /// The numerical rectangle realized by a geometric one: the diagonal
    /// holding the extreme levels gives `a, d`, the other gives `b, c`.
    pub fn of_rectangle(table: &[i64], r: &Rectangle) -> Self {
        let [p, q, s, t] = r.vertices().map(|v| table[v.index()]);
        let (p, q) = (p.min(q), p.max(q));
        let (s, t) = (s.min(t), s.max(t));
        if p <= s {
            NumRect { a: p, b: s, c: t, d: q }
        } else {
            NumRect { a: s, b: p, c: q, d: t }
        }
    }
}

impl fmt::Display for NumRect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for NumRect {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Precondition(format!("{s:?} is not four integers")))?;
        match parts.as_slice() {
            &[a, b, c, d] => NumRect::new(a, b, c, d),
            _ => Err(Error::Precondition(format!("{s:?} is not four integers"))),
        }
    }
}

/// All numerical rectangles of `h` in the requested classes, ordered by `(a, b, c)`.
pub fn enumerate_numrects(h: &WeightVector, classes: &[u8]) -> Vec<NumRect> {
    let t = h.total();
    let mut out = Vec::new();
    for a in 0..=t {
        for b in a..=t {
            for c in b..=t {
                let d = b + c - a;
                if d > t {
                    break;
                }
                let r = NumRect { a, b, c, d };
                if classes.contains(&r.class()) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// The first rectangle (canonical order) realizing `r` across the levels of `h`.
pub fn realize(h: &WeightVector, r: &NumRect) -> Result<Option<Rectangle>> {
    let n = h.dim();
    if n < 2 {
        return Ok(None);
    }
    let idx = RectangleIndex::get(n)?;
    let table = h.level_table();
    Ok(idx
        .rects
        .iter()
        .find(|rect| NumRect::of_rectangle(&table, rect) == *r)
        .copied())
}

/// Every numerical rectangle realized by some geometric rectangle.
pub fn realized_numrects(h: &WeightVector) -> Result<HashSet<NumRect>> {
    let n = h.dim();
    if n < 2 {
        return Ok(HashSet::new());
    }
    let idx = RectangleIndex::get(n)?;
    let table = h.level_table();
    Ok(idx
        .rects
        .iter()
        .map(|r| NumRect::of_rectangle(&table, r))
        .collect())
}

/// One tree edge `{u, u'}` of an embedding, witnessed by the rectangle with
/// diagonals `uv` and `u'v'` (`u + v = u' + v'`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EmbeddingEdge {
    pub u: Vertex,
    pub u_prime: Vertex,
    pub v: Vertex,
    pub v_prime: Vertex,
}

/// Evidence for `S_a ↪ S_b`: a spanning tree of `S_a` with one witness per edge.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EmbeddingCert {
    pub h: WeightVector,
    pub a: i64,
    pub b: i64,
    pub tree_edges: Vec<EmbeddingEdge>,
}

impl EmbeddingCert {
    /// Replays the certificate from scratch.
    pub fn check(&self) -> Result<()> {
        let n = self.h.dim();
        let sa = level(&self.h, self.a);
        let fail = |msg: String| Err(Error::Precondition(msg));
        if self.a == self.b {
            return fail("embedding of a level into itself".into());
        }
        if sa.is_empty() {
            return fail(format!("S_{} is empty", self.a));
        }
        if self.tree_edges.len() + 1 != sa.len() {
            return fail(format!(
                "{} edges cannot span {} vertices",
                self.tree_edges.len(),
                sa.len()
            ));
        }
        // union-find over S_a
        let pos = |v: Vertex| sa.as_slice().binary_search(&v).ok();
        let mut parent: Vec<usize> = (0..sa.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.tree_edges {
            let (Some(i), Some(j)) = (pos(e.u), pos(e.u_prime)) else {
                return fail(format!("edge {{{},{}}} leaves S_{}", e.u, e.u_prime, self.a));
            };
            if self.h.level_of(e.v) != self.b || self.h.level_of(e.v_prime) != self.b {
                return fail(format!("witness {},{} not in S_{}", e.v, e.v_prime, self.b));
            }
            if rectangle_from_points(n, e.u, e.u_prime, e.v_prime, e.v)?.is_none() {
                return fail(format!(
                    "{} {} {} {} is not a rectangle with diagonals uv, u'v'",
                    e.u, e.u_prime, e.v_prime, e.v
                ));
            }
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri == rj {
                return fail(format!("edge {{{},{}}} closes a cycle", e.u, e.u_prime));
            }
            parent[ri] = rj;
        }
        Ok(())
    }
}

/// Decides `S_a ↪ S_b`, returning a breadth-first spanning tree from the
/// smallest vertex of `S_a` with the smallest witness per edge.
pub fn embed(h: &WeightVector, a: i64, b: i64) -> Result<Option<EmbeddingCert>> {
    if a == b {
        return Err(Error::Precondition(format!("embedding needs a ≠ b (got a = b = {a})")));
    }
    let sa = level(h, a);
    if sa.is_empty() {
        return Err(Error::EmptyLevel {
            weights: h.to_string(),
            level: a,
        });
    }
    let sb = level(h, b);
    let verts = sa.as_slice();
    let mut seen = vec![false; verts.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut edges = Vec::with_capacity(verts.len() - 1);
    while let Some(i) = queue.pop_front() {
        let u = verts[i];
        for j in 0..verts.len() {
            if seen[j] {
                continue;
            }
            let up = verts[j];
            let d = u.mask() ^ up.mask();
            // v must agree with u' on D; then v' = v⊕D lies in S_b automatically.
            if let Some(v) = sb.iter().find(|v| (v.mask() ^ up.mask()) & d == 0) {
                seen[j] = true;
                queue.push_back(j);
                edges.push(EmbeddingEdge {
                    u,
                    u_prime: up,
                    v,
                    v_prime: Vertex::from_mask(v.mask() ^ d),
                });
            }
        }
    }
    if seen.iter().all(|&s| s) {
        Ok(Some(EmbeddingCert {
            h: h.clone(),
            a,
            b,
            tree_edges: edges,
        }))
    } else {
        Ok(None)
    }
}

/// Which levels `a` property (E) quantifies over.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EVariant {
    /// Every `a ≠ b`.
    All,
    /// Only `0 < a < |h|`, `a ≠ b`.
    Interior,
}

/// Nonempty levels `b` into which every other (nonempty) level of the chosen
/// range embeds.
pub fn property_e_levels(h: &WeightVector, variant: EVariant) -> Result<Vec<i64>> {
    let t = h.total();
    let sizes = h.level_sizes();
    let mut out = Vec::new();
    for b in 0..=t {
        if sizes[b as usize] == 0 {
            continue;
        }
        let mut ok = true;
        for a in 0..=t {
            if a == b || sizes[a as usize] == 0 {
                continue;
            }
            if variant == EVariant::Interior && (a == 0 || a == t) {
                continue;
            }
            if embed(h, a, b)?.is_none() {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(b);
        }
    }
    Ok(out)
}
