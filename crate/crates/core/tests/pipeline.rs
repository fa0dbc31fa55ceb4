use cylpack::certifier::{lemma1_certificate, verify_packing, Mode, VerifyOptions};
use cylpack::density::{
    axis_clearance, congruence_check, covered_volume, perpendicular_density_oracle, Clearance, TiltParam,
};
use cylpack::line_families::{global_family, local_family, perpendicular_family, DEFAULT_L};
use cylpack::point_lattice::{build_set, random_separated_points, PlanarPoint};
use cylpack::Error;

#[test]
fn global_family_at_64_is_a_packing() {
    let fam = global_family(&build_set(64).unwrap(), DEFAULT_L, false).unwrap();
    let rep = verify_packing(&fam, &VerifyOptions::default()).unwrap();
    assert!(rep.is_valid());
    assert!(rep.exact_certificate);
    assert!((rep.min_distance.unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn certificate_flag_follows_slope_constant() {
    let pts = build_set(48).unwrap();
    assert!(matches!(global_family(&pts, 1.0, false), Err(Error::SlopeConstantTooSmall(_))));
    let fam = global_family(&pts, 8.0, false).unwrap();
    let rep = verify_packing(&fam, &VerifyOptions::default()).unwrap();
    assert!(!rep.exact_certificate);
    let off = global_family(&[PlanarPoint::free(40.0, 0.5)], DEFAULT_L, true).unwrap();
    assert!(off.unsafe_override && !off.exact_certificate_applies());
}

#[test]
fn sampled_verification_agrees_with_exhaustive_on_validity() {
    let fam = local_family(&build_set(40).unwrap(), 0.5, None).unwrap();
    let opts = VerifyOptions { mode: Mode::Sampled { count: 200_000, seed: 9 }, ..Default::default() };
    let sampled = verify_packing(&fam, &opts).unwrap();
    let full = verify_packing(&fam, &VerifyOptions::default()).unwrap();
    assert!(sampled.is_valid() && full.is_valid());
    assert!(sampled.min_distance.unwrap() >= full.min_distance.unwrap());
}

#[test]
fn local_construction_on_random_sets() {
    for seed in 0..5 {
        let pts = random_separated_points(40, 10.0, 1.0, seed).unwrap();
        let fam = local_family(&pts, 0.5, None).unwrap();
        assert!(verify_packing(&fam, &VerifyOptions::default()).unwrap().is_valid());
        let t = 1.0 / fam.params.eps.unwrap();
        assert!(lemma1_certificate(&pts, 0.5, t).unwrap().passed());
    }
}

#[test]
fn too_close_points_are_rejected() {
    let pts = [PlanarPoint::free(1.0, 0.0), PlanarPoint::free(1.5, 0.0)];
    assert!(matches!(perpendicular_family(&pts, 0.5), Err(Error::PointsTooClose { .. })));
}

#[test]
fn local_congruence_on_first_rings() {
    let pts = build_set(64).unwrap();
    let rep = congruence_check(&pts, 0.5, TiltParam::Eps(None), 64.0, 20_000, 42).unwrap();
    assert_eq!(rep.cylinders.len(), pts.len());
    assert!(rep.per_cylinder_ok(), "{:?}", rep.failures);
}

#[test]
fn perpendicular_estimate_matches_oracle() {
    let fam = perpendicular_family(&build_set(96).unwrap(), 0.5).unwrap();
    let est = covered_volume(&fam, 96.0, 1_000_000, 17).unwrap();
    let exact = perpendicular_density_oracle(&fam, 96.0).unwrap();
    assert!((est.density - exact).abs() <= 5.0 * est.std_error, "{} vs {exact}", est.density);
}

#[test]
fn hole_around_the_axis() {
    let fam = global_family(&build_set(64).unwrap(), DEFAULT_L, false).unwrap();
    assert_eq!(covered_volume(&fam, 20.0, 100_000, 1).unwrap().hits, 0);
    let prof = axis_clearance(&fam, 1e5, 11).unwrap();
    let vals: Vec<f64> = prof
        .clearance
        .iter()
        .map(|c| match c {
            Clearance::Finite(v) => *v,
            Clearance::Unbounded => f64::INFINITY,
        })
        .collect();
    assert!(vals[0] >= 31.5 - 1e-9);
    assert!(vals.windows(2).all(|w| w[1] > w[0]));
    assert!(vals[10] > 100.0 * vals[0]);
}
