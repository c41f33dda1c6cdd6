use std::fs;
use std::path::Path;

use oriented_cube::driver::*;
use oriented_cube::envelope::{canonical_bytes, CertificateEnvelope, Kind};
use oriented_cube::hyperplanes::{builtin_tables, enumerate_hn_subsets, is_hyperplane};
use proptest::prelude::*;

fn stored(n: usize) -> (tempfile::TempDir, std::path::PathBuf, Certification) {
    let dir = tempfile::tempdir().unwrap();
    let c = certify_all(n, Source::default_for(n), 2).unwrap();
    let path = write_store(dir.path(), &c).unwrap();
    (dir, path, c)
}

#[test]
fn small_dimensions_confirm() {
    let c = certify_all(3, Source::Subsets, 1).unwrap();
    let r = &c.report;
    assert_eq!(r.orbits.len(), 2);
    assert!(r.orbits[0].status.is_axiom());
    assert!(matches!(r.orbits[1].status, OrbitStatus::Certified { .. }));
    assert!(r.verdict.confirmed);
    assert_eq!(r.verdict.statement, "unique oriented cube confirmed at n = 3");
    assert_eq!(r.summary.hyperplanes, 12 + 8);

    let c = certify_all(5, Source::Subsets, 0).unwrap();
    assert_eq!(c.report.orbits.len(), 7);
    assert!(c.report.orbits.iter().all(|o| o.status.is_settled()));
    assert_eq!(c.report.summary.axioms, 1);
    assert_eq!(c.certs.len(), 6);
    assert!(c.report.verdict.confirmed);
    assert!(c.report.adjudication.is_none());
}

#[test]
fn every_source_agrees() {
    for source in [Source::Subsets, Source::Bounded, Source::Builtin] {
        let c = certify_all(4, source, 1).unwrap();
        assert!(c.report.verdict.confirmed, "{source:?}");
        assert!(c.report.family.diff.is_empty());
    }
}

#[test]
fn out_of_range_dimension() {
    assert!(certify_all(8, Source::Bounded, 1).is_err());
    assert!(certify_all(0, Source::Subsets, 1).is_err());
}

#[test]
fn reports_are_deterministic() {
    let a = certify_all(5, Source::Subsets, 1).unwrap();
    let b = certify_all(5, Source::Subsets, 4).unwrap();
    assert_eq!(canonical_bytes(&a.report).unwrap(), canonical_bytes(&b.report).unwrap());
    assert_eq!(a.certs.len(), b.certs.len());
    for ((ia, ea), (ib, eb)) in a.certs.iter().zip(&b.certs) {
        assert_eq!(ia, ib);
        assert_eq!(ea.to_bytes().unwrap(), eb.to_bytes().unwrap());
    }
}

#[test]
fn representative_choice_does_not_matter() {
    for n in 2..=5 {
        for sv in enumerate_hn_subsets(n).unwrap().family {
            let mut kinds = Vec::new();
            for i in 0..=n {
                if !is_hyperplane(&sv, i).unwrap().0 {
                    continue;
                }
                let (o, env) = certify_orbit(&sv, i).unwrap();
                assert!(o.status.is_settled(), "{sv} rhs {i}: {:?}", o.status);
                assert_eq!(env.is_some(), !o.status.is_axiom());
                kinds.push(o.status.is_axiom());
            }
            assert!(!kinds.is_empty(), "{sv}");
            assert!(kinds.iter().all(|&k| k == kinds[0]), "{sv}");
        }
    }
}

#[test]
fn axioms_are_exactly_the_facet_pattern() {
    let c = certify_all(6, Source::Subsets, 0).unwrap();
    let axioms: Vec<_> = c.report.orbits.iter().filter(|o| o.status.is_axiom()).collect();
    assert_eq!(axioms.len(), 1);
    assert_eq!(axioms[0].vector.to_string(), "(0,0,0,0,0,1,1)");
    assert!(matches!(axioms[0].status, OrbitStatus::AxiomFacet));
    assert!(c.report.verdict.confirmed);
    let adj = c.report.adjudication.as_ref().unwrap();
    assert_eq!(adj.malformed[0].resolved_as.len(), 1);
}

#[test]
fn stored_report_verifies() {
    let (_dir, path, c) = stored(4);
    assert!(path.ends_with("reports/n=4/report.json"));
    let v = verify_report(&path, None).unwrap();
    assert!(v.ok, "{:?}", v.problems);
    assert_eq!(v.n, Some(4));
    assert_eq!(v.replayed, c.certs.len());
    let env = CertificateEnvelope::from_bytes(&fs::read(&path).unwrap()).unwrap();
    assert_eq!(env.kind, Kind::Report);
    assert_eq!(env.payload::<TheoremReport>().unwrap(), c.report);
}

#[test]
fn mismatched_table_is_reported() {
    let (_dir, path, _) = stored(4);
    let wrong = builtin_tables().family(5);
    let v = verify_report(&path, Some(&wrong)).unwrap();
    assert!(!v.ok);
    let diff = v.diff.expect("diff");
    assert!(!diff.is_empty());
}

#[test]
fn missing_certificate_is_named() {
    let (dir, path, c) = stored(4);
    let id = &c.certs[0].0;
    fs::remove_file(cert_path(dir.path(), id)).unwrap();
    let v = verify_report(&path, None).unwrap();
    assert!(!v.ok);
    assert!(v.problems.iter().any(|p| p.contains(&format!("certificate {id}"))), "{:?}", v.problems);
}

fn flip(path: &Path, pos: usize, mask: u8) {
    let mut bytes = fs::read(path).unwrap();
    let i = pos % bytes.len();
    bytes[i] ^= mask;
    fs::write(path, bytes).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn any_certificate_byte_flip_is_caught(pos in any::<usize>(), mask in 1u8..=255, which in any::<usize>()) {
        let (dir, path, c) = stored(4);
        let id = &c.certs[which % c.certs.len()].0;
        flip(&cert_path(dir.path(), id), pos, mask);
        let v = verify_report(&path, None).unwrap();
        prop_assert!(!v.ok);
        let tag = format!("certificate {id}");
        prop_assert!(v.problems.iter().any(|p| p.contains(&tag)), "{:?}", v.problems);
    }

    #[test]
    fn any_report_byte_flip_is_caught(pos in any::<usize>(), mask in 1u8..=255) {
        let (_dir, path, _) = stored(3);
        flip(&path, pos, mask);
        let v = verify_report(&path, None).unwrap();
        prop_assert!(!v.ok);
    }
}
