use super::*;
use crate::mat::IntMat;
use crate::functions::{eval, DecayCert};
use crate::spaces::{ComponentDescriptor, FieldKind};
use alloc::vec;

fn z_family(label: &str, basis: i64, comps: usize) -> SpaceFamily {
    let components = (0..comps)
        .map(|i| ComponentDescriptor::lattice(format!("e{i}"), IntMat::new(1, 1, vec![basis])))
        .collect();
    SpaceFamily::new(
        label,
        FieldKind::NonArchimedean { residue_cardinality: 2 },
        1,
        RealMat::identity(1),
        components,
    )
    .unwrap()
}

fn torus_pw(label: &str, comp: &str, coeffs: &[(Vec<i64>, C64)], r: f64) -> FamilyFunction {
    let mut f = FamilyFunction::new(label, FamilyClass::Pw { type_radius: r });
    f.insert(ComponentRep::Torus(TorusFunction {
        component: ComponentId::new(comp),
        fourier_coefficients: coeffs.iter().cloned().collect(),
        class: TorusClass::PaleyWiener { type_radius: r },
    }));
    f
}

fn id_map(label_src: &str, label_tgt: &str, pairs: &[(&str, &str)], tv: f64) -> PullbackData {
    PullbackData {
        source_family: label_src.into(),
        target_family: label_tgt.into(),
        component_map: pairs
            .iter()
            .map(|(a, b)| (ComponentId::new(*a), ComponentId::new(*b)))
            .collect(),
        linear_map: RealMat::new(1, 1, vec![tv]),
        growth: None,
    }
}

#[test]
fn identity_pullback_is_identity() {
    let src = z_family("s", 1, 1);
    let tgt = z_family("t", 1, 1);
    let pd = id_map("s", "t", &[("e0", "e0")], 1.0);
    assert!(validate(&pd, &src, &tgt).is_valid());
    let phi = torus_pw("t", "e0", &[(vec![2], C64::new(1.0, -0.5))], 2.0);
    let pulled = pullback(&pd, &src, &tgt, &phi).unwrap();
    let ComponentRep::Torus(t) = &pulled.components[&ComponentId::new("e0")] else {
        panic!()
    };
    assert_eq!(t.fourier_coefficients[&vec![2]], C64::new(1.0, -0.5));
}

#[test]
fn doubling_map_validates_and_halving_does_not() {
    let src = z_family("s", 1, 1);
    let tgt = z_family("t", 1, 1);
    // T_V = ×2: dual basis 2π ↦ 4π ∈ 2πZ — valid.
    let pd = id_map("s", "t", &[("e0", "e0")], 2.0);
    assert!(validate(&pd, &src, &tgt).is_valid());
    // T_V = ×1/2: 2π ↦ π ∉ 2πZ — invalid.
    let pd = id_map("s", "t", &[("e0", "e0")], 0.5);
    let rep = validate(&pd, &src, &tgt);
    assert!(!rep.is_valid());
    assert!(rep.report.violations[0].message.contains("dual lattice not preserved"));
}

#[test]
fn doubling_map_doubles_frequencies() {
    let src = z_family("s", 1, 1);
    let tgt = z_family("t", 1, 1);
    let pd = id_map("s", "t", &[("e0", "e0")], 2.0);
    let phi = torus_pw("t", "e0", &[(vec![3], C64::new(1.0, 0.0))], 3.0);
    let pulled = pullback(&pd, &src, &tgt, &phi).unwrap();
    let ComponentRep::Torus(t) = &pulled.components[&ComponentId::new("e0")] else {
        panic!()
    };
    assert_eq!(t.fourier_coefficients.len(), 1);
    assert!(t.fourier_coefficients.contains_key(&vec![6]));
    // (T*φ)(λ) = φ(2λ) pointwise.
    for l in [0.1, -0.4, 1.3] {
        let lhs = eval(&src, &pulled, &ComponentId::new("e0"), &[l]).unwrap();
        let rhs = eval(&tgt, &phi, &ComponentId::new("e0"), &[2.0 * l]).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }
}

#[test]
fn empty_component_map_gives_zero_function() {
    let src = z_family("s", 1, 2);
    let tgt = z_family("t", 1, 1);
    let pd = id_map("s", "t", &[], 1.0);
    let phi = torus_pw("t", "e0", &[(vec![1], C64::new(1.0, 0.0))], 1.0);
    let pulled = pullback(&pd, &src, &tgt, &phi).unwrap();
    assert!(pulled.components.is_empty());
    assert!(evaluates_to_zero_off_domain(&pd, &src, &pulled));
    for comp in ["e0", "e1"] {
        let v = eval(&src, &pulled, &ComponentId::new(comp), &[0.3]).unwrap();
        assert_eq!(v, C64::new(0.0, 0.0));
    }
}

#[test]
fn aliasing_accumulates_collapsing_frequencies() {
    // T_V: iV₁* → iV₂* with d₁=1, d₂=2, T_V = (1,1)ᵀ; the transpose
    // collapses (1,0) and (0,1) onto the same source frequency 1 and the
    // coefficients add exactly.
    let src = z_family("s", 1, 1);
    let tgt = SpaceFamily::new(
        "t2",
        FieldKind::NonArchimedean { residue_cardinality: 2 },
        2,
        RealMat::identity(2),
        vec![ComponentDescriptor::lattice("f0", IntMat::identity(2))],
    )
    .unwrap();
    let pd = PullbackData {
        source_family: "s".into(),
        target_family: "t2".into(),
        component_map: vec![(ComponentId::new("e0"), ComponentId::new("f0"))],
        linear_map: RealMat::new(2, 1, vec![1.0, 1.0]),
        growth: None,
    };
    assert!(validate(&pd, &src, &tgt).is_valid());
    let phi = torus_pw(
        "t2",
        "f0",
        &[
            (vec![1, 0], C64::new(0.25, 1.0)),
            (vec![0, 1], C64::new(0.75, -0.5)),
            (vec![2, -1], C64::new(0.0, 0.125)),
        ],
        3.0,
    );
    let pulled = pullback(&pd, &src, &tgt, &phi).unwrap();
    let ComponentRep::Torus(t) = &pulled.components[&ComponentId::new("e0")] else {
        panic!()
    };
    // (1,0) and (0,1) and (2,−1) all land on frequency 1.
    assert_eq!(t.fourier_coefficients.len(), 1);
    let c = t.fourier_coefficients[&vec![1]];
    assert_eq!(c, C64::new(0.25, 1.0) + C64::new(0.75, -0.5) + C64::new(0.0, 0.125));
}

#[test]
fn functoriality_of_composition() {
    let l1 = z_family("a", 1, 1);
    let l2 = z_family("b", 1, 1);
    let l3 = z_family("c", 1, 1);
    let pd1 = id_map("a", "b", &[("e0", "e0")], 2.0);
    let pd2 = id_map("b", "c", &[("e0", "e0")], 3.0);
    let composite = compose(&pd1, &pd2);
    assert!(validate(&composite, &l1, &l3).is_valid());
    let phi = torus_pw(
        "c",
        "e0",
        &[(vec![1], C64::new(1.0, 0.5)), (vec![-2], C64::new(0.0, -1.0))],
        2.0,
    );
    let direct = pullback(&composite, &l1, &l3, &phi).unwrap();
    let staged = pullback(&pd1, &l1, &l2, &pullback(&pd2, &l2, &l3, &phi).unwrap()).unwrap();
    for l in [0.0, 0.2, -0.9, 1.7] {
        let a = eval(&l1, &direct, &ComponentId::new("e0"), &[l]).unwrap();
        let b = eval(&l1, &staged, &ComponentId::new("e0"), &[l]).unwrap();
        assert!((a - b).norm() <= 1e-10);
    }
}

#[test]
fn archimedean_identity_growth() {
    let mk = |label: &str| {
        SpaceFamily::new(
            label,
            FieldKind::Archimedean,
            1,
            RealMat::identity(1),
            vec![
                ComponentDescriptor::archimedean("a", 1.0),
                ComponentDescriptor::archimedean("b", 2.0),
            ],
        )
        .unwrap()
    };
    let src = mk("s");
    let tgt = mk("t");
    let pd = PullbackData {
        source_family: "s".into(),
        target_family: "t".into(),
        component_map: vec![
            (ComponentId::new("a"), ComponentId::new("a")),
            (ComponentId::new("b"), ComponentId::new("b")),
        ],
        linear_map: RealMat::identity(1),
        growth: Some((1.0, 1.0)),
    };
    let rep = validate(&pd, &src, &tgt);
    assert!(rep.is_valid(), "{:?}", rep.report.violations);
    let (c, m) = rep.achieved_growth.unwrap();
    assert!((c - 1.0).abs() < 1e-12 && (m - 1.0).abs() < 1e-12);
}

#[test]
fn archimedean_grid_pullback_scales_argument() {
    #[allow(unused_imports)] use num_traits::Float;
    let mk = |label: &str| {
        SpaceFamily::new(
            label,
            FieldKind::Archimedean,
            1,
            RealMat::identity(1),
            vec![ComponentDescriptor::archimedean("a", 1.0)],
        )
        .unwrap()
    };
    let src = mk("s");
    let tgt = mk("t");
    let pd = PullbackData {
        source_family: "s".into(),
        target_family: "t".into(),
        component_map: vec![(ComponentId::new("a"), ComponentId::new("a"))],
        linear_map: RealMat::new(1, 1, vec![2.0]),
        growth: Some((0.5, 1.0)),
    };
    let mut phi = FamilyFunction::new(
        "t",
        FamilyClass::Schwartz { cert: DecayCert { constant: 1.0, exponent: 2 } },
    );
    phi.insert(ComponentRep::Grid(
        GridFunction::sample(ComponentId::new("a"), Side::Lambda, 1, 4.0, 0.01, None, |l| {
            C64::new((-l[0] * l[0]).exp(), 0.0)
        })
        .unwrap(),
    ));
    let pulled = pullback(&pd, &src, &tgt, &phi).unwrap();
    // (T*φ)(λ) = φ(2λ) = e^{−4λ²}
    let v = eval(&src, &pulled, &ComponentId::new("a"), &[0.5]).unwrap();
    assert!((v.re - (-1.0f64).exp()).abs() < 1e-4, "{}", v.re);

    let report = seminorm_bound_report(&pd, &src, &tgt, &phi, &[0], 2).unwrap();
    assert_eq!(report.best_n_prime, 2);
    assert!(report.ratio.is_finite() && report.ratio > 0.0);
}

#[test]
fn zero_input_gives_zero_ratio() {
    let mk = |label: &str| {
        SpaceFamily::new(
            label,
            FieldKind::Archimedean,
            1,
            RealMat::identity(1),
            vec![ComponentDescriptor::archimedean("a", 1.0)],
        )
        .unwrap()
    };
    let src = mk("s");
    let tgt = mk("t");
    let pd = PullbackData {
        source_family: "s".into(),
        target_family: "t".into(),
        component_map: vec![(ComponentId::new("a"), ComponentId::new("a"))],
        linear_map: RealMat::identity(1),
        growth: Some((1.0, 1.0)),
    };
    let mut phi = FamilyFunction::new(
        "t",
        FamilyClass::Schwartz { cert: DecayCert { constant: 1.0, exponent: 2 } },
    );
    phi.insert(ComponentRep::Grid(
        GridFunction::sample(ComponentId::new("a"), Side::Lambda, 1, 2.0, 0.1, None, |_| {
            C64::new(0.0, 0.0)
        })
        .unwrap(),
    ));
    let report = seminorm_bound_report(&pd, &src, &tgt, &phi, &[0], 1).unwrap();
    assert_eq!(report.ratio, 0.0);
    assert_eq!(report.pulled_seminorm, 0.0);
}

#[test]
fn class_certificates_preserved_on_pullback() {
    let src = z_family("s", 1, 1);
    let tgt = z_family("t", 1, 1);
    let pd = id_map("s", "t", &[("e0", "e0")], 2.0);
    let phi = torus_pw("t", "e0", &[(vec![1], C64::new(1.0, 0.0))], 1.0);
    let pulled = pullback(&pd, &src, &tgt, &phi).unwrap();
    let report = crate::functions::check_class(&src, &pulled);
    assert!(report.is_valid(), "{:?}", report.violations);
}
