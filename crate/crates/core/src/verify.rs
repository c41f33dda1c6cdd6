//! Independent replay of certificates.
//!
//! Nothing here calls the producers in `levels`, `forcing` or
//! `hyperplanes`; only their data types and the ground types of `cube` are
//! shared. Rectangles, levels, closure, propagation and the signing search
//! are recomputed from their definitions.

use crate::cube::{AffineForm, Rectangle, Vertex, VertexSet};
use crate::forcing::{ClosureTrace, Domain, ForcingCert, ForcingStatus, HypCert};
use crate::levels::EmbeddingCert;

pub type Check = std::result::Result<(), String>;

const SIGNS: [i8; 4] = [1, 1, -1, -1];

fn corners(r: &Rectangle) -> [u32; 4] {
    let (w, a, b) = (r.base.mask(), r.set_a.mask(), r.set_b.mask());
    [w, w ^ a ^ b, w ^ a, w ^ b]
}

/// A rectangle record is valid for `C^n` when its sides are disjoint,
/// nonempty, inside `1..=n`, and the record is in canonical form.
fn valid_rect(n: usize, r: &Rectangle) -> bool {
    let full = (1u32 << n) - 1;
    let (w, a, b) = (r.base.mask(), r.set_a.mask(), r.set_b.mask());
    a != 0 && b != 0 && a & b == 0 && a < b && (w | a | b) & !full == 0 && corners(r).iter().all(|&c| c >= w)
}

/// All canonical rectangles as corner arrays, by direct search.
fn all_rects(n: usize) -> Vec<[u32; 4]> {
    let size = 1u32 << n;
    let mut out = Vec::new();
    for a in 1..size {
        for b in a + 1..size {
            if a & b != 0 {
                continue;
            }
            for w in 0..size {
                let c = [w, w ^ a ^ b, w ^ a, w ^ b];
                if c.iter().all(|&x| x >= w) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn dot(form: &AffineForm, v: u32) -> i64 {
    form.coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| if v >> i & 1 == 1 { -c } else { c })
        .sum()
}

fn set_of(flags: &[bool]) -> VertexSet {
    flags
        .iter()
        .enumerate()
        .filter(|(_, &f)| f)
        .map(|(i, _)| Vertex::from_mask(i as u32))
        .collect()
}

fn in_cube(n: usize, s: &VertexSet) -> Check {
    match s.iter().find(|v| v.mask() >> n != 0) {
        Some(v) => Err(format!("vertex {v} outside C^{n}")),
        None => Ok(()),
    }
}

/// Replays a closure trace. With `fixpoint`, also checks that no rectangle
/// has exactly three vertices in the result.
pub fn check_closure(t: &ClosureTrace, fixpoint: bool) -> Check {
    let n = t.n;
    if !(1..=16).contains(&n) {
        return Err(format!("dimension {n} out of range"));
    }
    in_cube(n, &t.start)?;
    let mut inside = vec![false; 1 << n];
    for v in t.start.iter() {
        inside[v.index()] = true;
    }
    for (i, s) in t.steps.iter().enumerate() {
        if !valid_rect(n, &s.rect) {
            return Err(format!("step {i}: invalid rectangle {:?}", s.rect));
        }
        let c = corners(&s.rect);
        let mut listed: Vec<u32> = s.present.iter().map(|v| v.mask()).chain([s.added.mask()]).collect();
        listed.sort_unstable();
        let mut cs = c.to_vec();
        cs.sort_unstable();
        if listed != cs {
            return Err(format!("step {i}: listed vertices are not the corners of {}", s.rect));
        }
        if s.present.iter().any(|v| !inside[v.index()]) {
            return Err(format!("step {i}: a listed vertex is not yet in the set"));
        }
        if inside[s.added.index()] {
            return Err(format!("step {i}: {} was already present", s.added));
        }
        inside[s.added.index()] = true;
    }
    if set_of(&inside) != t.result {
        return Err("recorded result differs from the replay".into());
    }
    if fixpoint && n >= 2 {
        for c in all_rects(n) {
            if c.iter().filter(|&&x| inside[x as usize]).count() == 3 {
                return Err(format!("result not closed: rectangle {:?} has three vertices in it", c));
            }
        }
    }
    Ok(())
}

const UNSET: i8 = 2;

/// Fixpoint of unit propagation by repeated sweeps over all rectangles.
/// Returns false on a violated rectangle.
fn sweep(rects: &[[u32; 4]], vals: &mut [i8], zero_ok: bool) -> bool {
    loop {
        let mut changed = false;
        for c in rects {
            let mut open = Vec::new();
            let mut prods = Vec::new();
            for i in 0..4 {
                match vals[c[i] as usize] {
                    UNSET => open.push(i),
                    0 => {}
                    x => prods.push(x * SIGNS[i]),
                }
            }
            let uniform = prods.windows(2).all(|w| w[0] == w[1]);
            if !uniform || open.len() > 1 {
                continue;
            }
            if open.is_empty() {
                if !prods.is_empty() {
                    return false;
                }
                continue;
            }
            let i = open[0];
            vals[c[i] as usize] = match prods.first() {
                Some(&p) => -p * SIGNS[i],
                None if zero_ok => 0,
                None => return false,
            };
            changed = true;
        }
        if !changed {
            return true;
        }
    }
}

/// Counts completions up to `cap`, branching in `order`.
fn count(rects: &[[u32; 4]], vals: &[i8], order: &[u32], zero_ok: bool, cap: u64, budget: &mut u64) -> Option<u64> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let Some(&v) = order.iter().find(|&&v| vals[v as usize] == UNSET) else {
        return Some(1);
    };
    let mut total = 0;
    let options: &[i8] = if zero_ok { &[1, -1, 0] } else { &[1, -1] };
    for &s in options {
        let mut next = vals.to_vec();
        next[v as usize] = s;
        if sweep(rects, &mut next, zero_ok) {
            total += count(rects, &next, order, zero_ok, cap - total, budget)?;
            if total >= cap {
                break;
            }
        }
    }
    Some(total)
}

fn orthogonal_to_all(rects: &[[u32; 4]], vals: &[i8]) -> Option<[u32; 4]> {
    rects.iter().copied().find(|c| {
        let mut agree = false;
        let mut disagree = false;
        for i in 0..4 {
            let p = vals[c[i] as usize] * SIGNS[i];
            agree |= p == 1;
            disagree |= p == -1;
        }
        agree != disagree
    })
}

/// Replays a forcing certificate.
pub fn check_forcing(c: &ForcingCert) -> Check {
    let n = c.n;
    if !(1..=16).contains(&n) {
        return Err(format!("dimension {n} out of range"));
    }
    in_cube(n, &c.zero_set)?;
    let zero_ok = c.domain == Domain::SignedOrZero;
    let mut vals = vec![UNSET; 1 << n];
    for v in c.zero_set.iter() {
        vals[v.index()] = 0;
    }
    for s in &c.seeds {
        if s.vertex.mask() >> n != 0 || (s.sign != 1 && s.sign != -1) {
            return Err(format!("bad seed {s:?}"));
        }
        match vals[s.vertex.index()] {
            UNSET => vals[s.vertex.index()] = s.sign,
            x if x == s.sign => {}
            _ => return Err(format!("seed {} conflicts with the zero set or another seed", s.vertex)),
        }
    }
    for (i, st) in c.steps.iter().enumerate() {
        if !valid_rect(n, &st.rect) {
            return Err(format!("step {i}: invalid rectangle"));
        }
        let cs = corners(&st.rect);
        let Some(pos) = cs.iter().position(|&x| x == st.vertex.mask()) else {
            return Err(format!("step {i}: {} is not a corner of {}", st.vertex, st.rect));
        };
        if vals[st.vertex.index()] != UNSET {
            return Err(format!("step {i}: {} already assigned", st.vertex));
        }
        let mut prods = Vec::new();
        for j in (0..4).filter(|&j| j != pos) {
            match vals[cs[j] as usize] {
                UNSET => return Err(format!("step {i}: corner {} unassigned", Vertex::from_mask(cs[j]))),
                0 => {}
                x => prods.push(x * SIGNS[j]),
            }
        }
        let expected = match prods.first() {
            None if zero_ok => 0,
            None => return Err(format!("step {i}: nothing to propagate from")),
            Some(&p) => {
                if prods.iter().any(|&q| q != p) {
                    return Err(format!("step {i}: products disagree, nothing is forced"));
                }
                -p * SIGNS[pos]
            }
        };
        if st.sign != expected {
            return Err(format!("step {i}: forced sign {} but rule gives {expected}", st.sign));
        }
        vals[st.vertex.index()] = st.sign;
    }
    if c.status != ForcingStatus::Unique {
        return Ok(());
    }
    let rects = if n >= 2 { all_rects(n) } else { Vec::new() };
    let final_vals: Vec<i8> = (0..1u32 << n).map(|v| c.final_signs.sign(Vertex::from_mask(v))).collect();
    if let Some(r) = orthogonal_to_all(&rects, &final_vals) {
        return Err(format!("final signing not orthogonal to rectangle {r:?}"));
    }
    for v in c.zero_set.iter() {
        if final_vals[v.index()] != 0 {
            return Err(format!("final signing is nonzero on {v} in the zero set"));
        }
    }
    if c.search.is_none() {
        if vals.contains(&UNSET) {
            return Err("status unique but the steps leave vertices unsigned".into());
        }
        if vals != final_vals {
            return Err("final signing differs from the replayed steps".into());
        }
        return Ok(());
    }
    // uniqueness came from search: redo it
    for (v, &x) in vals.iter().enumerate() {
        if x != UNSET && x != final_vals[v] {
            return Err("final signing contradicts the replayed steps".into());
        }
    }
    if !sweep(&rects, &mut vals, zero_ok) {
        return Err("seeds are inconsistent".into());
    }
    let order: Vec<u32> = (0..1u32 << n).collect();
    let mut budget = 2_000_000;
    match count(&rects, &vals, &order, zero_ok, 2, &mut budget) {
        Some(1) => Ok(()),
        Some(k) => Err(format!("search finds {k} completions, not exactly one")),
        None => Err("search budget exhausted".into()),
    }
}

/// Replays an embedding certificate.
pub fn check_embedding(c: &EmbeddingCert) -> Check {
    let n = c.h.dim();
    let w = c.h.weights();
    let lvl = |v: Vertex| -> i64 { (0..n).filter(|&i| v.mask() >> i & 1 == 1).map(|i| w[i] as i64).sum() };
    if c.a == c.b {
        return Err("a = b".into());
    }
    let sa: Vec<Vertex> = (0..1u32 << n).map(Vertex::from_mask).filter(|&v| lvl(v) == c.a).collect();
    if sa.is_empty() {
        return Err(format!("S_{} is empty", c.a));
    }
    if c.tree_edges.len() + 1 != sa.len() {
        return Err(format!("{} edges for {} vertices", c.tree_edges.len(), sa.len()));
    }
    let mut comp: Vec<usize> = (0..sa.len()).collect();
    for e in &c.tree_edges {
        let (Some(i), Some(j)) = (sa.iter().position(|&x| x == e.u), sa.iter().position(|&x| x == e.u_prime)) else {
            return Err(format!("edge {{{},{}}} leaves S_{}", e.u, e.u_prime, c.a));
        };
        if lvl(e.v) != c.b || lvl(e.v_prime) != c.b {
            return Err(format!("witness of {{{},{}}} leaves S_{}", e.u, e.u_prime, c.b));
        }
        let pts = [e.u, e.u_prime, e.v, e.v_prime];
        let distinct = (0..4).all(|x| (x + 1..4).all(|y| pts[x] != pts[y]));
        // diagonals uv and u'v': coordinatewise u + v = u' + v'
        let sums = (0..n).all(|i| e.u.coord(i + 1) + e.v.coord(i + 1) == e.u_prime.coord(i + 1) + e.v_prime.coord(i + 1));
        if !distinct || !sums {
            return Err(format!("{} {} {} {} is not a rectangle with diagonals uv, u'v'", e.u, e.u_prime, e.v_prime, e.v));
        }
        let (ci, cj) = (comp[i], comp[j]);
        if ci == cj {
            return Err("tree edges contain a cycle".into());
        }
        for x in comp.iter_mut() {
            if *x == ci {
                *x = cj;
            }
        }
    }
    Ok(())
}

/// Replays all four parts of a hyperplane certificate and the unseeded
/// signing count.
pub fn check_hyp(c: &HypCert) -> Check {
    let n = c.form.coeffs.len();
    if !(1..=16).contains(&n) {
        return Err(format!("dimension {n} out of range"));
    }
    let zero: VertexSet = (0..1u32 << n)
        .filter(|&v| dot(&c.form, v) == c.form.rhs)
        .map(Vertex::from_mask)
        .collect();
    if zero != c.zero_set {
        return Err("recorded zero set differs from the equation".into());
    }
    if zero.is_empty() {
        return Err("empty hyperplane".into());
    }
    let part = |name: &str, r: Check| r.map_err(|e| format!("{name}: {e}"));

    part("c1", check_closure(&c.c1, true))?;
    if c.c1.n != n || c.c1.start != zero || c.c1.result != zero {
        return Err("c1: the zero set is not shown to be closed".into());
    }

    part("c2", check_closure(&c.c2.trace, false))?;
    if c.c2.subset.len() > n || !c.c2.subset.is_subset(&zero) || c.c2.trace.start != c.c2.subset {
        return Err(format!("c2: subset of size {} does not qualify", c.c2.subset.len()));
    }
    if !zero.is_subset(&c.c2.trace.result) {
        return Err("c2: closure of the subset misses part of the zero set".into());
    }

    part("c3", check_closure(&c.c3, false))?;
    if zero.contains(c.seed.vertex) {
        return Err("c3: seed lies on the hyperplane".into());
    }
    let mut start = zero.clone();
    start.insert(c.seed.vertex);
    if c.c3.start != start || c.c3.result.len() != 1 << n {
        return Err("c3: zero set plus seed does not close to the cube".into());
    }

    part("c4", check_forcing(&c.c4))?;
    let expected_sign = (dot(&c.form, c.seed.vertex.mask()) - c.form.rhs).signum() as i8;
    if c.c4.zero_set != zero || c.c4.seeds != [c.seed] || c.seed.sign != expected_sign {
        return Err("c4: run does not start from the zero set and the c3 seed".into());
    }
    if c.c4.domain != Domain::SignedOrZero || c.c4.status != ForcingStatus::Unique {
        return Err("c4: not a unique three-valued forcing".into());
    }
    let target: Vec<i8> = (0..1u32 << n).map(|v| (dot(&c.form, v) - c.form.rhs).signum() as i8).collect();
    let forced: Vec<i8> = (0..1u32 << n).map(|v| c.c4.final_signs.sign(Vertex::from_mask(v))).collect();
    if forced != target {
        return Err("c4: forced signing is not the cocircuit of the equation".into());
    }

    // unseeded count in the signed domain, branching nearest the hyperplane first
    let rects = if n >= 2 { all_rects(n) } else { Vec::new() };
    let mut vals = vec![UNSET; 1 << n];
    for v in zero.iter() {
        vals[v.index()] = 0;
    }
    let mut order: Vec<u32> = (0..1u32 << n).collect();
    order.sort_by_key(|&v| ((dot(&c.form, v) - c.form.rhs).abs(), v));
    let mut budget = 2_000_000;
    let found = if sweep(&rects, &mut vals, false) {
        count(&rects, &vals, &order, false, 3, &mut budget)
    } else {
        Some(0)
    };
    match found {
        Some(2) if c.signings_without_seed.count == 2 => Ok(()),
        Some(k) => Err(format!(
            "oracle: {k} unseeded signings (certificate records {})",
            c.signings_without_seed.count
        )),
        None => Err("oracle: search budget exhausted".into()),
    }
}

/// Sorted absolute coefficients and rhs divided by their gcd.
pub fn sorted_entries(form: &AffineForm) -> Vec<u64> {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let mut e: Vec<u64> = form.coeffs.iter().chain([&form.rhs]).map(|x| x.unsigned_abs()).collect();
    let g = e.iter().fold(0, |g, &x| gcd(g, x)).max(1);
    e.sort_unstable();
    e.into_iter().map(|x| x / g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::rectangle_count;
    use crate::forcing::{hyp_cert, rect_closure, HypOutcome};
    use crate::levels::{embed, WeightVector};

    #[test]
    fn own_rectangles_match_count() {
        for n in 2..=6 {
            assert_eq!(all_rects(n).len() as u64, rectangle_count(n));
        }
    }

    #[test]
    fn replays_producer_output() {
        let h: WeightVector = "1,1,1,2".parse().unwrap();
        let HypOutcome::Certified(cert) = hyp_cert(&h, 2).unwrap() else { panic!() };
        check_hyp(&cert).unwrap();
        check_embedding(&embed(&h, 1, 2).unwrap().unwrap()).unwrap();
        let t = rect_closure(3, &["∅", "1", "2", "3"].iter().map(|s| s.parse().unwrap()).collect()).unwrap();
        check_closure(&t, true).unwrap();
    }

    #[test]
    fn rejects_doctored_certificates() {
        let h: WeightVector = "1,1,1,1".parse().unwrap();
        let HypOutcome::Certified(cert) = hyp_cert(&h, 1).unwrap() else { panic!() };
        let mut bad = cert.clone();
        bad.c4.steps[0].sign = -bad.c4.steps[0].sign;
        assert!(check_hyp(&bad).is_err());
        let mut bad = cert.clone();
        bad.form.rhs += 2;
        assert!(check_hyp(&bad).is_err());
        let mut bad = cert.clone();
        bad.c2.subset = bad.zero_set.clone();
        bad.c2.subset.insert(Vertex::from_mask(15));
        assert!(check_hyp(&bad).is_err());
        let mut bad = *cert;
        bad.c3.result = bad.zero_set.clone();
        assert!(check_hyp(&bad).is_err());
    }
}
