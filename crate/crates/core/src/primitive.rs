//! Primitive weight vectors: every 3- and 4-class numerical rectangle is
//! realized by a geometric rectangle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levels::{enumerate_numrects, realized_numrects, NumRect, WeightVector};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PrimitiveVerdict {
    pub h: WeightVector,
    pub primitive: bool,
    /// Unrealizable 3- and 4-rectangles, in enumeration order.
    pub counterexamples: Vec<NumRect>,
}

pub fn is_primitive(h: &WeightVector) -> Result<PrimitiveVerdict> {
    let realized = realized_numrects(h)?;
    let counterexamples: Vec<NumRect> = enumerate_numrects(h, &[3, 4])
        .into_iter()
        .filter(|r| !realized.contains(r))
        .collect();
    Ok(PrimitiveVerdict {
        h: h.clone(),
        primitive: counterexamples.is_empty(),
        counterexamples,
    })
}

/// `(h, g)` for primitive `h` and `0 ≤ g ≤ |h|/2 + 1`; the result is
/// re-checked rather than trusted.
pub fn extend_primitive(h: &WeightVector, g: u32) -> Result<WeightVector> {
    let base = is_primitive(h)?;
    if !base.primitive {
        return Err(Error::Precondition(format!(
            "{h} is not primitive ({} unrealizable rectangles, first {})",
            base.counterexamples.len(),
            base.counterexamples[0]
        )));
    }
    // exact form of g ≤ |h|/2 + 1
    if 2 * g as i64 > h.total() + 2 {
        return Err(Error::Precondition(format!(
            "g = {g} exceeds the bound |h|/2 + 1 = {}/2 for {h}",
            h.total() + 2
        )));
    }
    let ext = h.extended(g)?;
    let verdict = is_primitive(&ext)?;
    if !verdict.primitive {
        return Err(Error::CheckFailed(format!(
            "extension {ext} is not primitive: {} is not realizable",
            verdict.counterexamples[0]
        )));
    }
    Ok(ext)
}

/// Every level `S_0..S_{|h|}` is nonempty and every interior level has at
/// least two elements.
pub fn check_prop21i(h: &WeightVector) -> bool {
    let sizes = h.level_sizes();
    let t = sizes.len() - 1;
    sizes
        .iter()
        .enumerate()
        .all(|(a, &s)| s >= 1 && (a == 0 || a == t || s >= 2))
}

/// Outcome of the exhaustive sweep over small primitive vectors.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub max_dim: usize,
    pub max_total: u32,
    pub vectors_checked: usize,
    pub primitive: Vec<WeightVector>,
    pub extensions_checked: usize,
    /// `(h, g)` inside the bound that failed to be primitive.
    pub extension_failures: Vec<(WeightVector, u32)>,
    /// Primitive vectors violating the level-size property.
    pub level_failures: Vec<WeightVector>,
    /// Observation only: extensions with `g` one past the bound that are
    /// still primitive.
    pub primitive_past_bound: Vec<(WeightVector, u32)>,
}

fn sorted_vectors(n: usize, max_total: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, min: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in min..=left {
            cur.push(x);
            rec(n, x, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 0, max_total, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive check over ascending vectors with `1 ≤ n ≤ max_dim` and
/// `|h| ≤ max_total`.
pub fn prop21_sweep(max_dim: usize, max_total: u32) -> Result<SweepReport> {
    let candidates: Vec<WeightVector> = (1..=max_dim)
        .flat_map(|n| sorted_vectors(n, max_total))
        .map(WeightVector::new)
        .collect::<Result<_>>()?;
    let rows: Vec<_> = candidates
        .par_iter()
        .map(|h| -> Result<Option<_>> {
            if !is_primitive(h)?.primitive {
                return Ok(None);
            }
            let t = h.total();
            let mut failures = Vec::new();
            let mut checked = 0;
            let mut g = 0u32;
            while 2 * g as i64 <= t + 2 {
                checked += 1;
                if !is_primitive(&h.extended(g)?)?.primitive {
                    failures.push((h.clone(), g));
                }
                g += 1;
            }
            let past = if is_primitive(&h.extended(g)?)?.primitive {
                Some((h.clone(), g))
            } else {
                None
            };
            Ok(Some((h.clone(), check_prop21i(h), checked, failures, past)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SweepReport {
        max_dim,
        max_total,
        vectors_checked: candidates.len(),
        ..Default::default()
    };
    for (h, level_ok, checked, failures, past) in rows.into_iter().flatten() {
        if !level_ok {
            report.level_failures.push(h.clone());
        }
        report.extensions_checked += checked;
        report.extension_failures.extend(failures);
        report.primitive_past_bound.extend(past);
        report.primitive.push(h);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> WeightVector {
        s.parse().unwrap()
    }

    #[test]
    fn listed_primitive_vectors() {
        for s in ["1,1,1", "1,1,2", "0,1,1", "1,1"] {
            assert!(is_primitive(&h(s)).unwrap().primitive, "{s}");
        }
        let v = is_primitive(&h("1,2,2,3")).unwrap();
        assert!(!v.primitive);
        assert!(!v.counterexamples.is_empty());
    }

    #[test]
    fn extensions() {
        assert_eq!(extend_primitive(&h("1,1,1"), 2).unwrap(), h("1,1,1,2"));
        assert_eq!(extend_primitive(&h("1,1,1"), 0).unwrap(), h("1,1,1,0"));
        assert_eq!(extend_primitive(&h("1,1"), 2).unwrap(), h("1,1,2"));
        // |h| = 3: bound 5/2, so g = 3 is out even though floor(3/2)+1 = 2 < 3
        assert!(matches!(extend_primitive(&h("1,1,1"), 3), Err(Error::Precondition(_))));
        assert!(matches!(extend_primitive(&h("1,2,2,3"), 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn level_property() {
        assert!(check_prop21i(&h("1,1,1,2")));
        assert!(check_prop21i(&h("1,1")));
        assert!(check_prop21i(&h("0,1,1")));
        assert!(!check_prop21i(&h("1,3")));
    }

    #[test]
    fn sorted_vector_generation() {
        assert_eq!(sorted_vectors(2, 2), vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1]]);
    }
}
