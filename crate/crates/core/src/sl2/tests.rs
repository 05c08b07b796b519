use super::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const PI: f64 = core::f64::consts::PI;

fn pt(theta: f64) -> EllipticTorusPoint {
    EllipticTorusPoint::new(theta).unwrap()
}

#[test]
fn discrete_series_closed_form_values() {
    // (n=1, +, θ=π/2): −e^{iπ/2}/(2i sin(π/2)) = −1/2.
    let v = discrete_series_character(1, Sign::Plus, pt(PI / 2.0)).unwrap();
    assert!((v - C64::new(-0.5, 0.0)).norm() < 1e-14, "{v}");
    // (n=1, −, θ=π/2): +e^{−iπ/2}/(2i) = −1/2.
    let v = discrete_series_character(1, Sign::Minus, pt(PI / 2.0)).unwrap();
    assert!((v - C64::new(-0.5, 0.0)).norm() < 1e-14, "{v}");
}

#[test]
fn singular_theta_rejected() {
    assert!(matches!(EllipticTorusPoint::new(0.0), Err(Sl2Error::SingularTheta(_))));
    assert!(matches!(EllipticTorusPoint::new(PI), Err(Sl2Error::SingularTheta(_))));
    assert!(matches!(
        EllipticTorusPoint::new(1e-15),
        Err(Sl2Error::SingularTheta(_))
    ));
    assert!(matches!(
        EllipticTorusPoint::new(core::f64::consts::TAU),
        Err(Sl2Error::SingularTheta(_))
    ));
}

#[test]
fn stable_character_closed_form_values() {
    // n = 1: numerator equals denominator, identically −1.
    for theta in [0.3, 1.0, 2.5, 4.0, 6.0] {
        assert!((stable_character(1, pt(theta)).unwrap() + 1.0).abs() < 1e-14);
    }
    // (2, π/3): −sin(2π/3)/sin(π/3) = −1.
    assert!((stable_character(2, pt(PI / 3.0)).unwrap() + 1.0).abs() < 1e-14);
    // (3, π/2): −sin(3π/2)/sin(π/2) = 1.
    assert!((stable_character(3, pt(PI / 2.0)).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn stability_identity_random_points() {
    // Θ_{φ_n} = Θ_{π_{+n}} + Θ_{π_{−n}} on 100 random regular points.
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.random_range(1..=20u32);
        let theta = loop {
            let t: f64 = rng.random_range(0.01..core::f64::consts::TAU - 0.01);
            if t.sin().abs() > 1e-6 {
                break t;
            }
        };
        let point = pt(theta);
        let stable = stable_character(n, point).unwrap();
        let plus = discrete_series_character(n, Sign::Plus, point).unwrap();
        let minus = discrete_series_character(n, Sign::Minus, point).unwrap();
        let sum = plus + minus;
        assert!(
            (sum - C64::new(stable, 0.0)).norm() <= 1e-12,
            "n={n} θ={theta}: {sum} vs {stable}"
        );
    }
}

#[test]
fn parity_stable_invariant_discrete_swapped() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..100 {
        let n = rng.random_range(1..=15u32);
        let theta: f64 = rng.random_range(0.05..PI - 0.05);
        let p = pt(theta);
        let q = pt(core::f64::consts::TAU - theta); // t(−θ)
        // stable character is fixed under θ ↦ −θ
        let a = stable_character(n, p).unwrap();
        let b = stable_character(n, q).unwrap();
        assert!((a - b).abs() <= 1e-12);
        // the two discrete-series members are swapped, not fixed
        let plus_at_m = discrete_series_character(n, Sign::Plus, q).unwrap();
        let minus_at_p = discrete_series_character(n, Sign::Minus, p).unwrap();
        assert!((plus_at_m - minus_at_p).norm() <= 1e-12);
    }
}

#[test]
fn weyl_discriminant_values() {
    assert!((weyl_discriminant_elliptic(PI / 2.0) - 4.0).abs() < 1e-14);
    assert!(weyl_discriminant_elliptic(0.0).abs() < 1e-14);
    assert!((weyl_discriminant_elliptic(PI / 6.0) - 1.0).abs() < 1e-14);
}

#[test]
fn normalized_character_bounded_by_two() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..200 {
        let n = rng.random_range(1..=25u32);
        let theta: f64 = rng.random_range(0.02..core::f64::consts::TAU - 0.02);
        if theta.sin().abs() < 1e-6 {
            continue;
        }
        let p = pt(theta);
        let value =
            weyl_discriminant_elliptic(theta).sqrt() * stable_character(n, p).unwrap().abs();
        assert!(value <= 2.0 + 1e-12, "n={n} θ={theta}: {value}");
    }
}

#[test]
fn elliptic_inner_product_orthogonality() {
    // ⟨φ_2, φ_2⟩ = 2, ⟨φ_2, φ_3⟩ = 0 at Q = 2048 within 1e−8.
    let v = elliptic_inner_product_sl2(2, 2, 2048).unwrap();
    assert!((v - C64::new(2.0, 0.0)).norm() < 1e-8, "{v}");
    let v = elliptic_inner_product_sl2(2, 3, 2048).unwrap();
    assert!(v.norm() < 1e-8, "{v}");
}

#[test]
fn discrete_series_orthogonality() {
    let v = elliptic_inner_product_discrete(3, Sign::Plus, 3, Sign::Plus, 2048).unwrap();
    assert!((v - C64::new(1.0, 0.0)).norm() < 1e-8, "{v}");
    let v = elliptic_inner_product_discrete(3, Sign::Plus, 3, Sign::Minus, 2048).unwrap();
    assert!(v.norm() < 1e-8, "{v}");
    let v = elliptic_inner_product_discrete(3, Sign::Plus, 5, Sign::Plus, 2048).unwrap();
    assert!(v.norm() < 1e-8, "{v}");
}

#[test]
fn quadrature_converges_doubling_nodes() {
    for (n, m) in [(1u32, 1u32), (7, 7), (20, 20), (13, 20)] {
        let a = elliptic_inner_product_sl2(n, m, 1024).unwrap();
        let b = elliptic_inner_product_sl2(n, m, 2048).unwrap();
        assert!((a - b).norm() < 1e-10, "n={n} m={m}: {} vs {}", a, b);
    }
}

#[test]
fn quadrature_minimum_enforced() {
    assert!(matches!(
        elliptic_inner_product_sl2(1, 1, 32),
        Err(Sl2Error::QuadratureTooCoarse { .. })
    ));
}

#[test]
fn pseudocoefficient_closed_form() {
    // (n=1, θ=π/2, m=1): 2·|sin|·conj(−1) = −2.
    let v = pseudocoefficient_elliptic(1, pt(PI / 2.0), 1.0).unwrap();
    assert!((v - C64::new(-2.0, 0.0)).norm() < 1e-14);
    // (n=2, θ=π/2): sin(π) = 0.
    let v = pseudocoefficient_elliptic(2, pt(PI / 2.0), 1.0).unwrap();
    assert!(v.norm() < 1e-14);
    // m(γ) = 2 halves the value.
    let v = pseudocoefficient_elliptic(1, pt(PI / 2.0), 2.0).unwrap();
    assert!((v - C64::new(-1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn spectral_transfer_delta() {
    let mut discrete = BTreeMap::new();
    discrete.insert(5u32, C64::new(1.0, 0.0));
    let transform = SL2StableTransform::discrete_only(discrete, None);
    assert!(transform.validate().is_valid());
    let out = spectral_transfer_to_elliptic_torus(&transform, &ParameterMap::default()).unwrap();
    assert_eq!(out.coefficients.len(), 2);
    assert_eq!(out.coefficients[&5], C64::new(1.0, 0.0));
    assert_eq!(out.coefficients[&-5], C64::new(1.0, 0.0));
    assert!(out.dropped_zero);
}

#[test]
fn spectral_transfer_zero_input() {
    let transform = SL2StableTransform::discrete_only(BTreeMap::new(), None);
    let out = spectral_transfer_to_elliptic_torus(&transform, &ParameterMap::default()).unwrap();
    assert!(out.coefficients.is_empty());
}

#[test]
fn spectral_transfer_carries_decay() {
    #[allow(unused_imports)] use num_traits::Float;
    let cert = DecayCert { constant: 2.0, exponent: 2 };
    let mut discrete = BTreeMap::new();
    for n in 1..=8u32 {
        // e^{−n} ≤ 2(1+n)^{−2} for every n ≥ 1
        discrete.insert(n, C64::new((-(n as f64)).exp(), 0.0));
    }
    let transform = SL2StableTransform::discrete_only(discrete.clone(), Some(cert));
    assert!(transform.validate().is_valid());
    let out = spectral_transfer_to_elliptic_torus(&transform, &ParameterMap::default()).unwrap();
    assert_eq!(out.decay, Some(cert));
    for (&k, &c) in &out.coefficients {
        let expected = discrete[&(k.unsigned_abs() as u32)];
        assert_eq!(c, expected);
        let bound = cert.constant * (1.0 + k.unsigned_abs() as f64).powi(-2);
        assert!(c.norm() <= bound + 1e-12);
    }
}

#[test]
fn zero_image_configurable() {
    let mut discrete = BTreeMap::new();
    discrete.insert(2u32, C64::new(0.5, 0.0));
    let transform = SL2StableTransform::discrete_only(discrete, None);
    let map = ParameterMap { zero: Some(TargetPoint::Discrete(2)), overrides: BTreeMap::new() };
    let out = spectral_transfer_to_elliptic_torus(&transform, &map).unwrap();
    assert!(!out.dropped_zero);
    assert_eq!(out.coefficients[&0], C64::new(0.5, 0.0));
}

#[test]
fn undefined_discrete_zero_rejected() {
    let transform = SL2StableTransform::discrete_only(BTreeMap::new(), None);
    let map = ParameterMap { zero: Some(TargetPoint::Discrete(0)), overrides: BTreeMap::new() };
    assert!(matches!(
        spectral_transfer_to_elliptic_torus(&transform, &map),
        Err(Sl2Error::UndefinedParameter(_))
    ));
}

#[test]
fn odd_principal_strand_rejected_by_validate() {
    let even = GridFunction::sample(
        ComponentId::new("principal-even"),
        Side::Lambda,
        1,
        2.0,
        0.5,
        None,
        |l| C64::new(l[0], 0.0), // odd, should fail evenness
    )
    .unwrap();
    let zero = GridFunction::sample(
        ComponentId::new("principal-odd"),
        Side::Lambda,
        1,
        2.0,
        0.5,
        None,
        |_| C64::new(0.0, 0.0),
    )
    .unwrap();
    let t = SL2StableTransform::new(BTreeMap::new(), None, even, zero);
    assert!(!t.validate().is_valid());
}
