use std::collections::BTreeSet;

use oriented_cube::cube::*;
use proptest::prelude::*;

fn v(s: &str) -> Vertex {
    s.parse().unwrap()
}

fn vs(items: &[&str]) -> VertexSet {
    items.iter().map(|s| v(s)).collect()
}

fn signed(n: usize, pos: &[&str], neg: &[&str]) -> SignedSet {
    SignedSet::new(n, vs(pos), vs(neg)).unwrap()
}

/// Brute force: 4-subsets {p,q,r,s} of C^n that split into two diagonals
/// with equal coordinate sums.
fn rectangles_by_subsets(n: usize) -> u64 {
    let size = 1u32 << n;
    let sum = |a: u32, b: u32| -> Vec<i8> {
        (0..n).map(|i| Vertex::from_mask(a).coord(i + 1) + Vertex::from_mask(b).coord(i + 1)).collect()
    };
    let mut count = 0;
    for p in 0..size {
        for q in p + 1..size {
            for r in q + 1..size {
                for s in r + 1..size {
                    let pairings = [(sum(p, q), sum(r, s)), (sum(p, r), sum(q, s)), (sum(p, s), sum(q, r))];
                    if pairings.iter().any(|(x, y)| x == y) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[test]
fn vertex_listing() {
    assert_eq!(all_vertices(1).unwrap(), vec![v("∅"), v("1")]);
    assert_eq!(all_vertices(3).unwrap().len(), 8);
    assert_eq!(all_vertices(7).unwrap().len(), 128);
    assert!(all_vertices(0).is_err());
    assert!(all_vertices(17).is_err());
}

#[test]
fn rectangle_counts_against_subset_oracle() {
    for n in 2..=5 {
        let listed = enumerate_rectangles(n).unwrap();
        let oracle = rectangles_by_subsets(n);
        assert_eq!(listed.len() as u64, oracle, "n = {n}");
        assert_eq!(rectangle_count(n), oracle, "closed form at n = {n}");
    }
    assert_eq!(enumerate_rectangles(3).unwrap().len(), 12);
    assert_eq!(enumerate_rectangles(7).unwrap().len(), 30912);
    assert!(enumerate_rectangles(1).unwrap().is_empty());
}

#[test]
fn rectangles_from_points() {
    let sq = rectangle_from_points(2, v("∅"), v("1"), v("2"), v("12")).unwrap().unwrap();
    assert_eq!(enumerate_rectangles(2).unwrap(), vec![sq]);
    assert_eq!(sq.circuit(2), signed(2, &["∅", "12"], &["1", "2"]));
    assert!(rectangle_from_points(3, v("∅"), v("1"), v("2"), v("12")).unwrap().is_some());
    assert!(rectangle_from_points(3, v("∅"), v("1"), v("2"), v("3")).unwrap().is_none());
}

#[test]
fn orthogonality_examples() {
    let square = signed(2, &["∅", "12"], &["1", "2"]);
    assert!(orthogonal(&square, &SignedSet::zero(2)));
    assert!(orthogonal(&signed(3, &["∅"], &[]), &signed(3, &["1"], &["2"])));
    // agreeing side {∅}, disagreeing side {1}
    assert!(orthogonal(&square, &signed(2, &["∅", "1"], &[])));
    assert!(!orthogonal(&square, &signed(2, &["∅"], &[])));
    assert!(!orthogonal(&square, &square));
}

#[test]
fn facets_and_skew_facets() {
    let f = facet_cocircuits(2).unwrap();
    assert_eq!(f.len(), 4);
    assert_eq!(f[0], signed(2, &["1", "12"], &[]));
    let sk = skew_facet_cocircuits(2).unwrap();
    assert_eq!(sk.len(), 2);
    assert_eq!(sk[1], signed(2, &["∅"], &["12"]));
    assert_eq!(facet_cocircuits(3).unwrap().len(), 6);
    assert_eq!(skew_facet_cocircuits(3).unwrap().len(), 6);
    for n in 2..=5 {
        let fam: Vec<_> = facet_cocircuits(n).unwrap().into_iter().chain(skew_facet_cocircuits(n).unwrap()).collect();
        for x in &fam {
            assert_eq!(x.support().len(), 1 << (n - 1));
        }
        for r in enumerate_rectangles(n).unwrap() {
            let c = r.circuit(n);
            assert!(fam.iter().all(|x| orthogonal(&c, x)), "n = {n}, {r}");
        }
    }
}

#[test]
fn flip_maps_facet_to_opposite_facet() {
    let g = SignedPermutation::flip(2, CoordSet::from_coords(&[1]).unwrap()).unwrap();
    let f = facet_cocircuits(2).unwrap();
    assert_eq!(f[0].act(&g), f[1]);
}

#[test]
fn rectangle_family_is_invariant() {
    for n in 2..=5 {
        let all: BTreeSet<Rectangle> = enumerate_rectangles(n).unwrap().into_iter().collect();
        for g in SignedPermutation::generators(n) {
            let moved: BTreeSet<Rectangle> = all.iter().map(|r| r.act(&g)).collect();
            assert_eq!(moved, all, "n = {n}");
        }
    }
    for n in [6, 7] {
        let all: BTreeSet<Rectangle> = enumerate_rectangles(n).unwrap().into_iter().collect();
        let g = SignedPermutation::transposition(n, 1, n)
            .unwrap()
            .compose(&SignedPermutation::flip(n, CoordSet::from_coords(&[2, 3]).unwrap()).unwrap());
        let moved: BTreeSet<Rectangle> = all.iter().map(|r| r.act(&g)).collect();
        assert_eq!(moved, all, "n = {n}");
    }
}

fn arb_perm(n: usize) -> impl Strategy<Value = SignedPermutation> {
    (Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), 0u32..1 << n).prop_map(move |(p, f)| {
        let flips: Vec<usize> = (0..n).filter(|i| f >> i & 1 == 1).map(|i| i + 1).collect();
        SignedPermutation::new(p, CoordSet::from_coords(&flips).unwrap()).unwrap()
    })
}

fn arb_signed(n: usize) -> impl Strategy<Value = SignedSet> {
    prop::collection::vec(-1i8..=1, 1 << n).prop_map(move |s| SignedSet::from_signs(n, &s))
}

proptest! {
    #[test]
    fn notation_round_trips(mask in 0u32..1 << 16) {
        let x = Vertex::from_mask(mask);
        prop_assert_eq!(x.to_string().parse::<Vertex>().unwrap(), x);
        prop_assert_eq!(Vertex::from_signs(&x.signs(16)).unwrap(), x);
    }

    #[test]
    fn rectangle_vertices_are_distinct_diagonals(n in 2usize..=7, seed in any::<u64>()) {
        let rects = enumerate_rectangles(n).unwrap();
        let r = rects[(seed % rects.len() as u64) as usize];
        let [w, z, x, y] = r.vertices();
        let all = [w, z, x, y];
        for i in 0..4 {
            for j in i + 1..4 {
                prop_assert_ne!(all[i], all[j]);
            }
        }
        for i in 1..=n {
            prop_assert_eq!(w.coord(i) + z.coord(i), x.coord(i) + y.coord(i));
        }
        prop_assert_eq!(Rectangle::new(n, z, r.set_b, r.set_a).unwrap(), r);
    }

    #[test]
    fn orthogonality_is_symmetric(x in arb_signed(3), y in arb_signed(3)) {
        prop_assert_eq!(orthogonal(&x, &y), orthogonal(&y, &x));
        prop_assert_eq!(orthogonal(&x, &y), orthogonal(&x.negated(), &y));
    }

    #[test]
    fn group_action_laws(g in arb_perm(5), h in arb_perm(5), mask in 0u32..32) {
        let x = Vertex::from_mask(mask);
        prop_assert_eq!(x.act(&g.compose(&h)), x.act(&h).act(&g));
        prop_assert_eq!(x.act(&g).act(&g.inverse()), x);
        prop_assert_eq!(x.act(&SignedPermutation::identity(5)), x);
    }

    #[test]
    fn symmetries_preserve_rectangles_and_orthogonality(g in arb_perm(4), i in 0usize..100, s in arb_signed(4)) {
        let r = enumerate_rectangles(4).unwrap()[i];
        let moved = r.act(&g);
        prop_assert!(enumerate_rectangles(4).unwrap().contains(&moved));
        // the canonical form may pick the other diagonal as positive
        let image = r.circuit(4).act(&g);
        prop_assert!(moved.circuit(4) == image || moved.circuit(4) == image.negated());
        prop_assert_eq!(orthogonal(&r.circuit(4), &s), orthogonal(&moved.circuit(4), &s.act(&g)));
    }
}
