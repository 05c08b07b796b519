use super::*;
use crate::mat::{IntMat, RealMat};
use crate::spaces::{ComponentDescriptor, ComponentId, FieldKind, SpaceFamily};
use alloc::vec;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn z_family() -> SpaceFamily {
    SpaceFamily::new(
        "z",
        FieldKind::NonArchimedean { residue_cardinality: 2 },
        1,
        RealMat::identity(1),
        vec![ComponentDescriptor::lattice("e0", IntMat::new(1, 1, vec![1]))],
    )
    .unwrap()
}

fn arch_family() -> SpaceFamily {
    SpaceFamily::new(
        "arch",
        FieldKind::Archimedean,
        1,
        RealMat::identity(1),
        vec![ComponentDescriptor::archimedean("a", 1.0)],
    )
    .unwrap()
}

fn torus_fn(coeffs: &[(i64, C64)], radius: f64) -> FamilyFunction {
    let mut f = FamilyFunction::new("z", FamilyClass::Pw { type_radius: radius });
    f.insert(ComponentRep::Torus(TorusFunction {
        component: ComponentId::new("e0"),
        fourier_coefficients: coeffs.iter().map(|&(k, c)| (vec![k], c)).collect(),
        class: TorusClass::PaleyWiener { type_radius: radius },
    }));
    f
}

#[test]
fn constant_torus_function_evaluates_to_one() {
    let fam = z_family();
    let f = torus_fn(&[(0, C64::new(1.0, 0.0))], 1.0);
    for l in [0.0, 0.3, -2.0, 10.0] {
        let v = eval(&fam, &f, &ComponentId::new("e0"), &[l]).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn single_frequency_kernel_value() {
    // c(1)=1, λ with coordinate π: e^{iπ} = −1.
    let fam = z_family();
    let f = torus_fn(&[(1, C64::new(1.0, 0.0))], 1.0);
    let v = eval(&fam, &f, &ComponentId::new("e0"), &[core::f64::consts::PI]).unwrap();
    assert!((v - C64::new(-1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn gaussian_grid_eval_at_origin() {
    let fam = arch_family();
    let g = GridFunction::sample(
        ComponentId::new("a"),
        Side::X,
        1,
        5.0,
        0.01,
        Some(5.0),
        |x| C64::new((-x[0] * x[0]).exp(), 0.0),
    )
    .unwrap();
    let mut f = FamilyFunction::new("arch", FamilyClass::Cc { radius: 5.0 });
    f.insert(ComponentRep::Grid(g));
    let v = eval(&fam, &f, &ComponentId::new("a"), &[0.0]).unwrap();
    assert!((v.re - 1.0).abs() < 1e-9);
}

#[test]
fn missing_component_data_evaluates_to_zero() {
    let fam = SpaceFamily::new(
        "z",
        FieldKind::NonArchimedean { residue_cardinality: 2 },
        1,
        RealMat::identity(1),
        vec![
            ComponentDescriptor::lattice("e0", IntMat::new(1, 1, vec![1])),
            ComponentDescriptor::lattice("e1", IntMat::new(1, 1, vec![1])),
        ],
    )
    .unwrap();
    let f = torus_fn(&[(0, C64::new(2.0, 0.0))], 1.0);
    let v = eval(&fam, &f, &ComponentId::new("e1"), &[0.5]).unwrap();
    assert_eq!(v, C64::new(0.0, 0.0));
    assert!(matches!(
        eval(&fam, &f, &ComponentId::new("missing"), &[0.5]),
        Err(FunctionError::UnknownComponent(_))
    ));
}

#[test]
fn torus_periodicity_random_pairs() {
    // Γ = 2Z so the dual period is π (in λ-coordinates).
    let fam = SpaceFamily::new(
        "z2",
        FieldKind::NonArchimedean { residue_cardinality: 3 },
        1,
        RealMat::identity(1),
        vec![ComponentDescriptor::lattice("e0", IntMat::new(1, 1, vec![2]))],
    )
    .unwrap();
    let mut f = FamilyFunction::new("z2", FamilyClass::Pw { type_radius: 10.0 });
    f.insert(ComponentRep::Torus(TorusFunction {
        component: ComponentId::new("e0"),
        fourier_coefficients: [
            (vec![0], C64::new(0.3, 0.0)),
            (vec![1], C64::new(1.0, -0.5)),
            (vec![-2], C64::new(0.0, 2.0)),
        ]
        .into_iter()
        .collect(),
        class: TorusClass::PaleyWiener { type_radius: 10.0 },
    }));
    let period = core::f64::consts::PI; // 2π · 1/2
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let l: f64 = rng.random_range(-20.0..20.0);
        let m: i64 = rng.random_range(-5..=5);
        let a = eval(&fam, &f, &ComponentId::new("e0"), &[l]).unwrap();
        let b = eval(&fam, &f, &ComponentId::new("e0"), &[l + m as f64 * period]).unwrap();
        assert!((a - b).norm() <= 1e-10, "periodicity broken at l={l}, m={m}");
    }
}

#[test]
fn eval_is_linear() {
    let fam = z_family();
    let f = torus_fn(&[(0, C64::new(1.0, 0.5)), (1, C64::new(-1.0, 0.0))], 2.0);
    let g = torus_fn(&[(1, C64::new(0.5, 0.5)), (-1, C64::new(2.0, 0.0))], 2.0);
    let a = C64::new(2.0, -1.0);
    let sum = add(&f, &scale(&g, a)).unwrap();
    for l in [0.0, 0.7, -1.9] {
        let lhs = eval(&fam, &sum, &ComponentId::new("e0"), &[l]).unwrap();
        let rhs = eval(&fam, &f, &ComponentId::new("e0"), &[l]).unwrap()
            + a * eval(&fam, &g, &ComponentId::new("e0"), &[l]).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

#[test]
fn schwartz_seminorm_examples() {
    let fam = z_family();
    // zero function
    let zf = torus_fn(&[], 1.0);
    let r = schwartz_seminorm(&fam, &zf, &[0], 3).unwrap();
    assert_eq!(r.value, 0.0);
    // constant 1, D=0, N=0 → 1
    let one = torus_fn(&[(0, C64::new(1.0, 0.0))], 1.0);
    let r = schwartz_seminorm(&fam, &one, &[0], 0).unwrap();
    assert!((r.value - 1.0).abs() < 1e-12);
    // f = e^{iλ}: one derivative has modulus 1 everywhere.
    let f = torus_fn(&[(1, C64::new(1.0, 0.0))], 1.0);
    let r = schwartz_seminorm(&fam, &f, &[1], 0).unwrap();
    assert!((r.value - 1.0).abs() < 1e-12, "got {}", r.value);
}

#[test]
fn pw_seminorm_examples() {
    let fam = z_family();
    let zf = torus_fn(&[], 1.0);
    let r = pw_seminorm(&fam, &zf, 2.0, 0).unwrap();
    assert_eq!(r.value, 0.0);
    assert!(!r.diverging);

    // single coefficient at x = 1 with r = 2 ≥ ‖x‖: sup = 1 at Re λ = 0.
    let f = torus_fn(&[(1, C64::new(1.0, 0.0))], 2.0);
    let r = pw_seminorm(&fam, &f, 2.0, 0).unwrap();
    assert!((r.value - 1.0).abs() < 1e-9, "got {}", r.value);
    assert!(!r.diverging);

    // coefficient at ‖x‖ = 3 > r = 2: divergence reported.
    let f = torus_fn(&[(3, C64::new(1.0, 0.0))], 2.0);
    let r = pw_seminorm(&fam, &f, 2.0, 0).unwrap();
    assert!(r.diverging);
}

#[test]
fn grid_derivative_seminorm_warns_on_coarse_step() {
    let fam = arch_family();
    let g = GridFunction::sample(
        ComponentId::new("a"),
        Side::Lambda,
        1,
        2.0,
        0.5,
        None,
        |x| C64::new((-x[0] * x[0]).exp(), 0.0),
    )
    .unwrap();
    let mut f = FamilyFunction::new(
        "arch",
        FamilyClass::Schwartz { cert: DecayCert { constant: 10.0, exponent: 1 } },
    );
    f.insert(ComponentRep::Grid(g));
    let r = schwartz_seminorm(&fam, &f, &[1], 0).unwrap();
    assert_eq!(r.step_used, Some(0.5));
    assert!(r.warning.is_some());
}

#[test]
fn reclassify_pw_as_schwartz_keeps_data_and_certifies() {
    let fam = z_family();
    let f = torus_fn(&[(0, C64::new(1.0, 0.0)), (1, C64::new(0.5, 0.0))], 1.5);
    let s = reclassify_pw_as_schwartz(&fam, &f, 2).unwrap();
    assert!(matches!(s.class, FamilyClass::Schwartz { .. }));
    let report = check_class(&fam, &s);
    assert!(report.is_valid(), "{:?}", report.violations);
    // seminorm finiteness: the certified constant bounds the seminorm
    if let FamilyClass::Schwartz { cert } = s.class {
        let r = schwartz_seminorm(&fam, &s, &[0], 2).unwrap();
        assert!(r.value <= cert.constant);
    }
}

#[test]
fn check_class_catches_support_violation() {
    let fam = z_family();
    // coefficient at ‖x‖ = 5 but declared type 1
    let f = torus_fn(&[(5, C64::new(1.0, 0.0))], 1.0);
    let report = check_class(&fam, &f);
    assert!(!report.is_valid());

    let good = torus_fn(&[(1, C64::new(1.0, 0.0))], 1.0);
    assert!(check_class(&fam, &good).is_valid());
}

#[test]
fn check_class_catches_decay_violation() {
    let fam = z_family();
    let mut f = FamilyFunction::new(
        "z",
        FamilyClass::Schwartz { cert: DecayCert { constant: 1.0, exponent: 4 } },
    );
    f.insert(ComponentRep::Lattice(LatticeFunction {
        component: ComponentId::new("e0"),
        coefficients: [(vec![4], C64::new(1.0, 0.0))].into_iter().collect(),
        // |c| = 1 > 1·(1+4)^{−4}
        decay: DecayClass::RapidDecay {
            cert: DecayCert { constant: 1.0, exponent: 4 },
            truncation_radius: 10.0,
        },
    }));
    let report = check_class(&fam, &f);
    assert!(!report.is_valid());
}

#[test]
fn zero_dimensional_component_is_a_single_number() {
    let fam = SpaceFamily::new(
        "pt",
        FieldKind::NonArchimedean { residue_cardinality: 2 },
        0,
        RealMat::zeros(0, 0),
        vec![ComponentDescriptor::lattice("p", IntMat::zeros(0, 0))],
    )
    .unwrap();
    let mut f = FamilyFunction::new("pt", FamilyClass::Pw { type_radius: 1.0 });
    f.insert(ComponentRep::Torus(TorusFunction {
        component: ComponentId::new("p"),
        fourier_coefficients: [(vec![], C64::new(2.5, 1.0))].into_iter().collect(),
        class: TorusClass::PaleyWiener { type_radius: 1.0 },
    }));
    let v = eval(&fam, &f, &ComponentId::new("p"), &[]).unwrap();
    assert_eq!(v, C64::new(2.5, 1.0));
    let r = schwartz_seminorm(&fam, &f, &[], 0).unwrap();
    assert!((r.value - v.norm()).abs() < 1e-12);
}
