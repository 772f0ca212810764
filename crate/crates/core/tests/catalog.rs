use knotkhi::catalog::Catalog;
use knotkhi::diagram::{Diagram, SkeinTriple};
use knotkhi::floer::{self, KhiPrediction};
use knotkhi::fox;
use knotkhi::skein::SkeinResolver;
use knotkhi::verify::{self, Check};

fn diagrams() -> Vec<(String, Diagram)> {
    Catalog::bundled().records().iter().map(|r| (r.name.clone(), r.diagram().unwrap())).collect()
}

#[test]
fn pd_roundtrip_on_the_catalog() {
    for (name, d) in diagrams() {
        assert_eq!(Diagram::parse_pd(&d.to_pd_string()).unwrap(), d, "{name}");
    }
}

#[test]
fn every_triple_changes_components_by_one() {
    for (name, d) in diagrams() {
        for t in SkeinTriple::all(&d) {
            let (r0, r1) = (t.zero.component_count(), t.plus.component_count());
            assert_eq!(r0.abs_diff(r1), 1, "{name} at {}", t.site);
            assert_eq!(t.plus.crossings()[t.site].sign().flipped(), t.minus.crossings()[t.site].sign());
        }
    }
}

#[test]
fn seifert_bound_dominates_alexander_degree() {
    let mut res = SkeinResolver::default();
    for (name, d) in diagrams() {
        let delta = res.conway(&d).conway_to_alexander().unwrap();
        let deg = delta.max_exp().unwrap() / 2;
        assert!(d.seifert_genus_bound().unwrap() as i64 >= deg, "{name}");
    }
}

#[test]
fn fox_minors_agree_on_the_catalog() {
    for (name, d) in diagrams().into_iter().filter(|(_, d)| d.crossing_count() > 0).take(12) {
        let n = d.crossing_count();
        let reference = fox::alexander_via_fox(&d).unwrap();
        for k in 0..n {
            assert_eq!(fox::alexander_via_fox_minor(&d, k, (k + 1) % n).unwrap(), reference, "{name}");
        }
    }
}

#[test]
fn predictions_roundtrip_through_json() {
    let mut res = SkeinResolver::default();
    for (name, d) in diagrams() {
        let p = floer::khi_table_with(&d, &mut res);
        let text = serde_json::to_string(&p.to_json()).unwrap();
        let back = KhiPrediction::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, p, "{name}");
    }
}

#[test]
fn triangle_sweep_on_every_catalog_crossing() {
    let mut res = SkeinResolver::default();
    let mut triples = 0;
    for (_, d) in diagrams() {
        for t in SkeinTriple::all(&d) {
            let r = floer::triangle_check_with(&t, &mut res);
            // the χ₀ term enters with the opposite sign to the literal identity
            assert!(r.flipped_residual.is_zero());
            assert_eq!(r.passed, r.chi_zero.is_zero());
            triples += 1;
        }
    }
    assert!(triples >= 150);
}

#[test]
fn sweep_without_the_triangle_check_passes() {
    let checks: Vec<Check> = Check::ALL.into_iter().filter(|c| *c != Check::Triangle).collect();
    let r = verify::sweep(&Catalog::bundled(), &checks);
    assert!(r.passed(), "{r}");
    assert_eq!(r.knots, 36);
}

#[test]
fn full_sweep_reports_the_triangle_failures() {
    let r = verify::sweep(&Catalog::bundled(), &Check::ALL);
    assert!(!r.passed());
    assert!(r.failures.iter().all(|f| f.check == Check::Triangle));
}
