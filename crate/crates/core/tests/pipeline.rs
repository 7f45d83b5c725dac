use std::collections::BTreeMap;

use p1_functors::corpus::corpus;
use p1_functors::format::{compose_spec_from_json, compose_spec_to_json, Report};
use p1_functors::functor::{
    check_exactness_on_ses, evaluate_on_sheaf, gauge_scramble, generator_h0_torsion, generator_h1, SesOfBundles,
};
use p1_functors::linalg::Field;
use p1_functors::sheaves::{CoherentSheaf, P1Point, TorsionBlock, TorsionSheaf};
use p1_functors::structure::{decompose, is_integral_transform, is_pullback, run_property_suite, Decomposition, Mode, Status};
use p1_functors::watts::{compute_w, kernel_functor};
use p1_functors::Error;

const Q: Field = Field::Rational;

fn pt(a: i64, b: i64) -> P1Point {
    P1Point::from_ints(Q, a, b).unwrap()
}

#[test]
fn kernel_of_h1_plus_point_has_h1_dimensions() {
    let t = TorsionSheaf::block(pt(2, 5), 1);
    let f = generator_h1(Q, 0, -7, 3).direct_sum(&generator_h0_torsion(Q, &t, -7, 3)).unwrap();
    let g = gauge_scramble(&f, 77);
    assert_eq!(compute_w(&g).unwrap(), t);
    let k = kernel_functor(&g).unwrap();
    for n in -7..=3 {
        assert_eq!(k.dim(n), (-n - 1).max(0) as usize, "degree {n}");
        assert_eq!(g.dim(n), k.dim(n) + 1);
    }
}

#[test]
fn point_functor_is_a_pullback() {
    let q = pt(3, 4);
    let f = gauge_scramble(&generator_h0_torsion(Q, &TorsionSheaf::block(q.clone(), 1), -5, 3), 8);
    assert!(is_integral_transform(&f, Mode::Verify).unwrap());
    assert_eq!(is_pullback(&f, Mode::Verify).unwrap(), Some(q.clone()));
    let kq = CoherentSheaf::torsion_only(TorsionSheaf::block(q, 1));
    assert_eq!(evaluate_on_sheaf(&f, &kq, 0).unwrap().dim, 1);
    let elsewhere = CoherentSheaf::torsion_only(TorsionSheaf::block(pt(1, 0), 2));
    assert_eq!(evaluate_on_sheaf(&f, &elsewhere, 0).unwrap().dim, 0);
}

#[test]
fn evaluation_on_mixed_sheaf() {
    let t = TorsionSheaf::new(vec![
        TorsionBlock { point: pt(0, 1), mult: 2 },
        TorsionBlock { point: pt(1, 1), mult: 1 },
    ]);
    let f = generator_h0_torsion(Q, &t, -5, 3);
    // H^0(O(a) (x) T) = length T, H^0(k(0)^2 (x) T) = length of the overlap = 2
    let s = CoherentSheaf::new(vec![-2, 1], TorsionSheaf::block(pt(0, 1), 3));
    assert_eq!(evaluate_on_sheaf(&f, &s, 0).unwrap().dim, 3 + 3 + 2);
    assert!(matches!(
        evaluate_on_sheaf(&f, &CoherentSheaf::line_bundle(9), 0),
        Err(Error::WindowTooSmall(_))
    ));
}

#[test]
fn h1_functor_is_not_exact_on_koszul_sequences() {
    let h = generator_h1(Q, 0, -7, 3);
    let t = generator_h0_torsion(Q, &TorsionSheaf::block(pt(1, 2), 2), -7, 3);
    let ses = SesOfBundles::koszul(0, &pt(0, 1), &pt(1, 0)).unwrap();
    assert!(!check_exactness_on_ses(&h, &ses).unwrap());
    assert!(check_exactness_on_ses(&t, &ses).unwrap());
    assert!(!is_integral_transform(&h, Mode::Verify).unwrap());
    assert_eq!(is_pullback(&h, Mode::Verify).unwrap(), None);
}

#[test]
fn spec_and_report_files_round_trip() {
    for spec in corpus(11, 6) {
        let back = compose_spec_from_json(&compose_spec_to_json(&spec)).unwrap();
        assert_eq!(back, spec);
        let f = spec.build();
        let (d, _) = decompose(&f).unwrap();
        let props = run_property_suite(&f);
        assert!(props.all_pass(), "{props:?}");
        let report = Report::new(&d, true, [f.lo(), f.hi()], &props);
        let parsed: Report = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(parsed.decomposition(Q).unwrap(), spec.decomposition);
    }
}

#[test]
fn spec_window_is_checked() {
    let text = r#"{"field":"Q","lo":-3,"hi":4,"h1":[{"i":1,"l":1}]}"#;
    assert!(matches!(compose_spec_from_json(text), Err(Error::Format(_))));
    let text = r#"{"field":"Q","lo":-4,"hi":4,"h1":[{"i":1,"l":1}],"gauge_seed":5}"#;
    let spec = compose_spec_from_json(text).unwrap();
    assert_eq!(spec.build(), spec.build());
    assert_eq!(spec.decomposition.h1_mults, BTreeMap::from([(1, 1)]));
}

#[test]
fn truncated_window_reports_inconclusive() {
    let d = Decomposition {
        torsion: TorsionSheaf::block(pt(1, 1), 1),
        h1_mults: BTreeMap::from([(-3, 1)]),
    };
    let f = d.compose(Q, -4, 2);
    let props = run_property_suite(&f);
    assert!(props.no_failures());
    assert!(props.entries.iter().any(|e| e.status == Status::Inconclusive));
    assert!(matches!(decompose(&f), Err(Error::WindowTooSmall(_))));
}
