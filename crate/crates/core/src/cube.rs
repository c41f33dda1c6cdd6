//! Ground objects of the affine cube over `C^n = {-1,1}^n`.
//!
//! A vertex is stored as the bitmask of its `-1` coordinates (bit `i-1` for
//! coordinate `i`), so vertex order is the order of masks read as integers.
//! Text form is subset notation: `∅`, `1`, `134`, with `a..g` standing for
//! coordinates 10..16.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported dimension; masks fit in a `u32`.
pub const MAX_DIM: usize = 16;

pub fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::Dimension(n))
    }
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn mask_notation(mask: u32) -> String {
    if mask == 0 {
        return "∅".to_string();
    }
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| {
            let c = i + 1;
            if c <= 9 {
                char::from(b'0' + c as u8)
            } else {
                char::from(b'a' + (c - 10) as u8)
            }
        })
        .collect()
}

fn parse_mask(s: &str) -> Result<u32> {
    let t = s.trim();
    if t == "∅" || t == "{}" || t == "0" || t == "-" {
        return Ok(0);
    }
    if t.is_empty() {
        return Err(Error::VertexNotation(s.to_string()));
    }
    let mut mask = 0u32;
    for ch in t.chars() {
        let c = match ch {
            '1'..='9' => ch as u32 - '0' as u32,
            'a'..='g' => ch as u32 - 'a' as u32 + 10,
            _ => return Err(Error::VertexNotation(s.to_string())),
        };
        let bit = 1u32 << (c - 1);
        if mask & bit != 0 {
            return Err(Error::VertexNotation(s.to_string()));
        }
        mask |= bit;
    }
    Ok(mask)
}

/// A vertex of the cube, identified with the set of its negative coordinates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vertex(u32);

impl Vertex {
    /// The all-plus vertex `∅`.
    pub const ORIGIN: Vertex = Vertex(0);

    pub const fn from_mask(mask: u32) -> Self {
        Vertex(mask)
    }

    /// Checked constructor: every negative coordinate must lie in `1..=n`.
    pub fn new(n: usize, mask: u32) -> Result<Self> {
        check_dim(n)?;
        if mask & !full_mask(n) != 0 {
            return Err(Error::VertexOutOfRange {
                vertex: mask_notation(mask),
                n,
            });
        }
        Ok(Vertex(mask))
    }

    /// Builds a vertex from its `±1` coordinates.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        check_dim(signs.len())?;
        let mut mask = 0;
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => mask |= 1 << i,
                _ => return Err(Error::VertexNotation(format!("{signs:?}"))),
            }
        }
        Ok(Vertex(mask))
    }

    pub fn parse_in(n: usize, s: &str) -> Result<Self> {
        let mask = parse_mask(s)?;
        Vertex::new(n, mask)
    }

    #[inline]
    pub const fn mask(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    /// Coordinate `i` (1-based) as `±1`.
    #[inline]
    pub fn coord(self, i: usize) -> i8 {
        if self.0 >> (i - 1) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn signs(self, n: usize) -> Vec<i8> {
        (1..=n).map(|i| self.coord(i)).collect()
    }

    pub fn antipode(self, n: usize) -> Self {
        Vertex(self.0 ^ full_mask(n))
    }

    /// Flips the coordinates in `coords`.
    #[inline]
    pub fn flip(self, coords: CoordSet) -> Self {
        Vertex(self.0 ^ coords.0)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&mask_notation(self.0))
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", mask_notation(self.0))
    }
}

impl FromStr for Vertex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_mask(s).map(Vertex)
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&mask_notation(self.0))
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A set of coordinate indices, same notation as vertices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CoordSet(u32);

impl CoordSet {
    pub const fn from_mask(mask: u32) -> Self {
        CoordSet(mask)
    }

    pub fn from_coords(coords: &[usize]) -> Result<Self> {
        let mut mask = 0;
        for &c in coords {
            if !(1..=MAX_DIM).contains(&c) {
                return Err(Error::VertexNotation(format!("coordinate {c}")));
            }
            mask |= 1 << (c - 1);
        }
        Ok(CoordSet(mask))
    }

    #[inline]
    pub const fn mask(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, coord: usize) -> bool {
        coord >= 1 && self.0 >> (coord - 1) & 1 == 1
    }
}

impl fmt::Display for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&mask_notation(self.0))
    }
}

impl fmt::Debug for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", mask_notation(self.0))
    }
}

impl FromStr for CoordSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_mask(s).map(CoordSet)
    }
}

impl Serialize for CoordSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&mask_notation(self.0))
    }
}

impl<'de> Deserialize<'de> for CoordSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite set of vertices, kept sorted in vertex order.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..1u32 << n).map(Vertex).collect())
    }

    pub fn from_sorted_unchecked(v: Vec<Vertex>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        VertexSet(v)
    }

    /// Collects the vertices whose flag is set in an indicator indexed by mask.
    pub fn from_indicator(flags: &[bool]) -> Self {
        VertexSet(
            flags
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| Vertex(i as u32))
                .collect(),
        )
    }

    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut flags = vec![false; 1 << n];
        for v in &self.0 {
            flags[v.index()] = true;
        }
        flags
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.0.iter().chain(other.0.iter()).copied().collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|v| other.contains(*v)).collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|v| !other.contains(*v)).collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    pub fn complement(&self, n: usize) -> VertexSet {
        (0..1u32 << n)
            .map(Vertex)
            .filter(|v| !self.contains(*v))
            .collect()
    }

    pub fn antipode(&self, n: usize) -> VertexSet {
        self.iter().map(|v| v.antipode(n)).collect()
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Ordered pair of disjoint vertex sets: circuits, cocircuits and covectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SignedSet {
    pub n: usize,
    pub pos: VertexSet,
    pub neg: VertexSet,
}

impl SignedSet {
    pub fn new(n: usize, pos: VertexSet, neg: VertexSet) -> Result<Self> {
        check_dim(n)?;
        if !pos.is_disjoint(&neg) {
            return Err(Error::Precondition(
                "positive and negative parts of a signed set must be disjoint".into(),
            ));
        }
        for v in pos.iter().chain(neg.iter()) {
            Vertex::new(n, v.mask())?;
        }
        Ok(SignedSet { n, pos, neg })
    }

    pub fn zero(n: usize) -> Self {
        SignedSet {
            n,
            pos: VertexSet::new(),
            neg: VertexSet::new(),
        }
    }

    pub fn negated(&self) -> Self {
        SignedSet {
            n: self.n,
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }

    pub fn support(&self) -> VertexSet {
        self.pos.union(&self.neg)
    }

    pub fn zero_set(&self) -> VertexSet {
        self.support().complement(self.n)
    }

    /// `+1`, `-1` or `0`.
    pub fn sign(&self, v: Vertex) -> i8 {
        if self.pos.contains(v) {
            1
        } else if self.neg.contains(v) {
            -1
        } else {
            0
        }
    }

    /// Builds a signed set from a sign per vertex (indexed by mask).
    pub fn from_signs(n: usize, signs: &[i8]) -> Self {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, &s) in signs.iter().enumerate() {
            match s.signum() {
                1 => pos.push(Vertex(i as u32)),
                -1 => neg.push(Vertex(i as u32)),
                _ => {}
            }
        }
        SignedSet {
            n,
            pos: VertexSet(pos),
            neg: VertexSet(neg),
        }
    }
}

impl fmt::Display for SignedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.pos, self.neg)
    }
}

/// Standard orthogonality of signed sets: the agreeing and disagreeing parts
/// of the common support are both empty or both nonempty.
pub fn orthogonal(x: &SignedSet, y: &SignedSet) -> bool {
    let agree = x.pos.iter().any(|v| y.pos.contains(v)) || x.neg.iter().any(|v| y.neg.contains(v));
    let disagree =
        x.pos.iter().any(|v| y.neg.contains(v)) || x.neg.iter().any(|v| y.pos.contains(v));
    agree == disagree
}

/// A geometric rectangle of the cube in canonical form `(w, A, B)`.
///
/// Its vertices are `w, w⊕A⊕B` (positive diagonal) and `w⊕A, w⊕B`
/// (negative diagonal). Canonical: `w` is the smallest of the four vertices
/// and `A < B` as masks.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Rectangle {
    pub base: Vertex,
    #[serde(rename = "setA")]
    pub set_a: CoordSet,
    #[serde(rename = "setB")]
    pub set_b: CoordSet,
}

impl Rectangle {
    /// Canonicalizes any base/side description of a rectangle.
    pub fn new(n: usize, base: Vertex, set_a: CoordSet, set_b: CoordSet) -> Result<Self> {
        Vertex::new(n, base.mask())?;
        let (a, b) = (set_a.mask(), set_b.mask());
        if a == 0 || b == 0 || a & b != 0 || (a | b) & !full_mask(n) != 0 {
            return Err(Error::Precondition(format!(
                "rectangle sides must be disjoint nonempty coordinate sets within 1..={n}, got {set_a} and {set_b}"
            )));
        }
        Ok(Self::canonical(base.mask(), a, b))
    }

    pub(crate) fn canonical(w: u32, a: u32, b: u32) -> Self {
        let base = w.min(w ^ a).min(w ^ b).min(w ^ a ^ b);
        Rectangle {
            base: Vertex(base),
            set_a: CoordSet(a.min(b)),
            set_b: CoordSet(a.max(b)),
        }
    }

    /// `[w, w⊕A⊕B, w⊕A, w⊕B]`: positive diagonal then negative diagonal.
    #[inline]
    pub fn vertices(&self) -> [Vertex; 4] {
        let (w, a, b) = (self.base.0, self.set_a.0, self.set_b.0);
        [Vertex(w), Vertex(w ^ a ^ b), Vertex(w ^ a), Vertex(w ^ b)]
    }

    /// Circuit sign of each entry of [`Rectangle::vertices`].
    pub const SIGNS: [i8; 4] = [1, 1, -1, -1];

    pub fn sign_of(&self, v: Vertex) -> Option<i8> {
        self.vertices()
            .iter()
            .position(|&x| x == v)
            .map(|i| Self::SIGNS[i])
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.sign_of(v).is_some()
    }

    /// The vertex sharing a diagonal with `v`, if `v` is a corner.
    pub fn diagonal_partner(&self, v: Vertex) -> Option<Vertex> {
        let vs = self.vertices();
        vs.iter().position(|&x| x == v).map(|i| vs[i ^ 1])
    }

    pub fn circuit(&self, n: usize) -> SignedSet {
        let [p, q, r, s] = self.vertices();
        SignedSet {
            n,
            pos: [p, q].into_iter().collect(),
            neg: [r, s].into_iter().collect(),
        }
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p, q, r, s] = self.vertices();
        write!(f, "{p}+ {q}+ {r}- {s}-")
    }
}

pub fn all_vertices(n: usize) -> Result<Vec<Vertex>> {
    check_dim(n)?;
    Ok((0..1u32 << n).map(Vertex).collect())
}

/// Every canonical rectangle of `C^n` exactly once, in canonical order.
pub fn enumerate_rectangles(n: usize) -> Result<Vec<Rectangle>> {
    check_dim(n)?;
    if n < 2 {
        return Ok(Vec::new());
    }
    let full = full_mask(n);
    // Ordered side pairs A < B, disjoint and nonempty.
    let mut sides = Vec::new();
    for a in 1..=full {
        let rest = full & !a;
        let mut b = rest;
        while b != 0 {
            if a < b {
                sides.push((a, b));
            }
            b = (b - 1) & rest;
        }
    }
    sides.sort_unstable();
    let mut out = Vec::with_capacity(rectangle_count(n) as usize);
    for w in 0..=full {
        for &(a, b) in &sides {
            // w is the minimum iff the top bits of A and B are clear in w.
            let ta = 1u32 << (31 - a.leading_zeros());
            let tb = 1u32 << (31 - b.leading_zeros());
            if w & (ta | tb) == 0 {
                out.push(Rectangle {
                    base: Vertex(w),
                    set_a: CoordSet(a),
                    set_b: CoordSet(b),
                });
            }
        }
    }
    Ok(out)
}

/// Closed form `2^n (3^n - 2·2^n + 1) / 8`.
pub fn rectangle_count(n: usize) -> u64 {
    if n < 2 {
        return 0;
    }
    let p2 = 1u64 << n;
    let p3 = 3u64.pow(n as u32);
    p2 * (p3 - 2 * p2 + 1) / 8
}

/// The canonical rectangle with diagonals `uv` and `u'v'`, if the four points
/// form one (`u + v = u' + v'` coordinatewise).
pub fn rectangle_from_points(
    n: usize,
    u: Vertex,
    u_prime: Vertex,
    v_prime: Vertex,
    v: Vertex,
) -> Result<Option<Rectangle>> {
    for x in [u, u_prime, v_prime, v] {
        Vertex::new(n, x.mask())?;
    }
    let pts = [u, u_prime, v_prime, v];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Ok(None);
            }
        }
    }
    // Sum condition per coordinate: number of -1 entries must match on both diagonals.
    for i in 0..n {
        let bit = |x: Vertex| (x.0 >> i) & 1;
        if bit(u) + bit(v) != bit(u_prime) + bit(v_prime) {
            return Ok(None);
        }
    }
    let a = u.0 ^ u_prime.0;
    let b = u.0 ^ v_prime.0;
    debug_assert_eq!(a & b, 0);
    debug_assert_eq!(u.0 ^ a ^ b, v.0);
    Ok(Some(Rectangle::canonical(u.0, a, b)))
}

/// `X_{i+} = (H_{i-}, ∅)` and `X_{i-} = (H_{i+}, ∅)` for `i = 1..n`, in that order.
pub fn facet_cocircuits(n: usize) -> Result<Vec<SignedSet>> {
    check_dim(n)?;
    let mut out = Vec::with_capacity(2 * n);
    for i in 1..=n {
        let minus: VertexSet = (0..1u32 << n)
            .map(Vertex)
            .filter(|v| v.coord(i) == -1)
            .collect();
        let plus = minus.complement(n);
        out.push(SignedSet {
            n,
            pos: minus,
            neg: VertexSet::new(),
        });
        out.push(SignedSet {
            n,
            pos: plus,
            neg: VertexSet::new(),
        });
    }
    Ok(out)
}

/// `X_{ij+} = (H_{i+}∩H_{j-}, H_{i-}∩H_{j+})` and
/// `X_{ij-} = (H_{i+}∩H_{j+}, H_{i-}∩H_{j-})` for `i < j`, in that order.
pub fn skew_facet_cocircuits(n: usize) -> Result<Vec<SignedSet>> {
    check_dim(n)?;
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for i in 1..=n {
        for j in i + 1..=n {
            let pick = |si: i8, sj: i8| -> VertexSet {
                (0..1u32 << n)
                    .map(Vertex)
                    .filter(|v| v.coord(i) == si && v.coord(j) == sj)
                    .collect()
            };
            out.push(SignedSet {
                n,
                pos: pick(1, -1),
                neg: pick(-1, 1),
            });
            out.push(SignedSet {
                n,
                pos: pick(1, 1),
                neg: pick(-1, -1),
            });
        }
    }
    Ok(out)
}

/// Rectangles of `C^n` with corner arrays and per-vertex incidence, built once
/// per dimension and shared.
#[derive(Debug)]
pub struct RectangleIndex {
    pub n: usize,
    pub rects: Vec<Rectangle>,
    pub corners: Vec<[u32; 4]>,
    /// `incident[v]` lists rectangle indices containing vertex `v`, ascending.
    pub incident: Vec<Vec<u32>>,
}

impl RectangleIndex {
    pub fn build(n: usize) -> Result<Self> {
        let rects = enumerate_rectangles(n)?;
        let corners: Vec<[u32; 4]> = rects
            .iter()
            .map(|r| r.vertices().map(|v| v.0))
            .collect();
        let mut incident = vec![Vec::new(); 1 << n];
        for (k, c) in corners.iter().enumerate() {
            for &v in c {
                incident[v as usize].push(k as u32);
            }
        }
        Ok(RectangleIndex {
            n,
            rects,
            corners,
            incident,
        })
    }

    /// Shared index for dimension `n` (cached up to dimension 10).
    pub fn get(n: usize) -> Result<Arc<RectangleIndex>> {
        check_dim(n)?;
        if n > 10 {
            return Ok(Arc::new(Self::build(n)?));
        }
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<RectangleIndex>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(idx) = cache.lock().expect("rectangle cache poisoned").get(&n) {
            return Ok(Arc::clone(idx));
        }
        let built = Arc::new(Self::build(n)?);
        let mut guard = cache.lock().expect("rectangle cache poisoned");
        Ok(Arc::clone(guard.entry(n).or_insert(built)))
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }
}

/// An element of the hyperoctahedral group: a coordinate permutation followed
/// by sign flips. `perm[i]` is the image of coordinate `i+1` (0-based).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SignedPermutation {
    perm: Vec<u8>,
    flips: CoordSet,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, flips: CoordSet) -> Result<Self> {
        let n = perm.len();
        check_dim(n)?;
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::Symmetry(format!("{perm:?} is not a permutation of 0..{n}")));
            }
            seen[p] = true;
        }
        if flips.mask() & !full_mask(n) != 0 {
            return Err(Error::Symmetry(format!("flips {flips} outside 1..={n}")));
        }
        Ok(SignedPermutation {
            perm: perm.into_iter().map(|p| p as u8).collect(),
            flips,
        })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n as u8).collect(),
            flips: CoordSet(0),
        }
    }

    pub fn flip(n: usize, flips: CoordSet) -> Result<Self> {
        Self::new((0..n).collect(), flips)
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i - 1, j - 1);
        Self::new(perm, CoordSet(0))
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> impl Iterator<Item = usize> + '_ {
        self.perm.iter().map(|&p| p as usize)
    }

    pub fn flips(&self) -> CoordSet {
        self.flips
    }

    #[inline]
    fn permute_mask(&self, mask: u32) -> u32 {
        let mut out = 0;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            out |= 1 << self.perm[i];
            m &= m - 1;
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.dim(), other.dim(), "composing symmetries of different dimension");
        SignedPermutation {
            perm: other.perm.iter().map(|&p| self.perm[p as usize]).collect(),
            flips: CoordSet(self.permute_mask(other.flips.0) ^ self.flips.0),
        }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut inv = vec![0u8; self.dim()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p as usize] = i as u8;
        }
        let inv = SignedPermutation {
            perm: inv,
            flips: CoordSet(0),
        };
        let flips = inv.permute_mask(self.flips.0);
        SignedPermutation {
            perm: inv.perm,
            flips: CoordSet(flips),
        }
    }

    /// Generators of the group: adjacent transpositions and one flip.
    pub fn generators(n: usize) -> Vec<SignedPermutation> {
        let mut gens: Vec<_> = (1..n)
            .map(|i| Self::transposition(n, i, i + 1).expect("valid transposition"))
            .collect();
        gens.push(Self::flip(n, CoordSet(1)).expect("valid flip"));
        gens
    }
}

/// Objects the hyperoctahedral group acts on.
pub trait Symmetric: Sized {
    fn act(&self, g: &SignedPermutation) -> Self;
}

impl Symmetric for Vertex {
    fn act(&self, g: &SignedPermutation) -> Self {
        Vertex(g.permute_mask(self.0) ^ g.flips.0)
    }
}

impl Symmetric for VertexSet {
    fn act(&self, g: &SignedPermutation) -> Self {
        self.iter().map(|v| v.act(g)).collect()
    }
}

impl Symmetric for SignedSet {
    fn act(&self, g: &SignedPermutation) -> Self {
        SignedSet {
            n: self.n,
            pos: self.pos.act(g),
            neg: self.neg.act(g),
        }
    }
}

impl Symmetric for Rectangle {
    fn act(&self, g: &SignedPermutation) -> Self {
        Rectangle::canonical(
            self.base.act(g).0,
            g.permute_mask(self.set_a.0),
            g.permute_mask(self.set_b.0),
        )
    }
}

/// An affine equation `coeffs · x = rhs` on `±1` vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AffineForm {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

impl AffineForm {
    pub fn new(coeffs: Vec<i64>, rhs: i64) -> Result<Self> {
        check_dim(coeffs.len())?;
        Ok(AffineForm { coeffs, rhs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// `coeffs · v` with `v` read as a `±1` vector.
    #[inline]
    pub fn eval(&self, v: Vertex) -> i64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if v.0 >> i & 1 == 1 { -c } else { c })
            .sum()
    }

    pub fn zero_set(&self) -> VertexSet {
        let n = self.dim();
        (0..1u32 << n)
            .map(Vertex)
            .filter(|&v| self.eval(v) == self.rhs)
            .collect()
    }

    /// `({v : c·v > rhs}, {v : c·v < rhs})`.
    pub fn cocircuit(&self) -> SignedSet {
        let n = self.dim();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for v in (0..1u32 << n).map(Vertex) {
            match self.eval(v).cmp(&self.rhs) {
                std::cmp::Ordering::Greater => pos.push(v),
                std::cmp::Ordering::Less => neg.push(v),
                std::cmp::Ordering::Equal => {}
            }
        }
        SignedSet {
            n,
            pos: VertexSet(pos),
            neg: VertexSet(neg),
        }
    }
}

impl Symmetric for AffineForm {
    fn act(&self, g: &SignedPermutation) -> Self {
        let mut coeffs = vec![0; self.dim()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = g.perm[i] as usize;
            coeffs[j] = if g.flips.0 >> j & 1 == 1 { -c } else { c };
        }
        AffineForm {
            coeffs,
            rhs: self.rhs,
        }
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})·x = {}", parts.join(","), self.rhs)
    }
}
