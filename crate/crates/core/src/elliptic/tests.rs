use super::*;
use alloc::string::ToString;

fn block(
    gram: Vec<C64>,
    stable: Vec<Vec<u32>>,
    iota: Vec<f64>,
    weyl: Vec<u32>,
    orthogonal_mode: bool,
) -> EllipticBlock {
    let n = iota.len();
    EllipticBlock {
        label: ("z".to_string(), "mu".to_string()),
        basis_labels: (0..n).map(|i| format!("tau{i}")).collect(),
        gram: CMat::new(n, n, gram),
        stable_vectors: stable,
        iota,
        weyl_order: weyl,
        orthogonal_mode,
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[test]
fn two_dim_identity_gram_complement() {
    // stable (1,1) against the identity gram: complement (1,−1)/√2.
    let b = block(
        vec![re(1.0), re(0.0), re(0.0), re(1.0)],
        vec![vec![1, 1]],
        vec![1.0, 1.0],
        vec![1, 1],
        true,
    );
    assert!(b.validate().is_valid());
    let comp = unstable_complement(&b).unwrap();
    assert_eq!(comp.len(), 1);
    let v = &comp[0];
    let s = core::f64::consts::SQRT_2.recip();
    // up to a global sign
    let matches = ((v[0] - re(s)).norm() < 1e-12 && (v[1] + re(s)).norm() < 1e-12)
        || ((v[0] + re(s)).norm() < 1e-12 && (v[1] - re(s)).norm() < 1e-12);
    assert!(matches, "complement {v:?}");
    // gram-orthonormal and orthogonal to the stable vector
    assert!((b.norm_sq(v) - 1.0).abs() < 1e-12);
    let stable: alloc::vec::Vec<C64> = vec![re(1.0), re(1.0)];
    assert!(b.inner(v, &stable).norm() < 1e-12);
}

#[test]
fn full_stable_span_gives_empty_complement() {
    let b = block(
        vec![re(1.0), re(0.0), re(0.0), re(1.0)],
        vec![vec![1, 0], vec![0, 1]],
        vec![1.0, 1.0],
        vec![1, 1],
        true,
    );
    assert!(unstable_complement(&b).unwrap().is_empty());
}

#[test]
fn no_stable_vectors_gives_full_complement() {
    let b = block(
        vec![re(2.0), re(0.0), re(0.0), re(2.0)],
        vec![],
        vec![0.5, 0.5],
        vec![1, 1],
        true,
    );
    let comp = unstable_complement(&b).unwrap();
    assert_eq!(comp.len(), 2);
    for (i, v) in comp.iter().enumerate() {
        assert!((b.norm_sq(v) - 1.0).abs() < 1e-12);
        for w in &comp[..i] {
            assert!(b.inner(v, w).norm() < 1e-12);
        }
    }
}

#[test]
fn change_of_basis_identity_gram() {
    let b = block(
        vec![re(1.0), re(0.0), re(0.0), re(1.0)],
        vec![vec![1, 1]],
        vec![1.0, 1.0],
        vec![1, 1],
        true,
    );
    let cob = change_of_basis(&[b]).unwrap();
    assert_eq!(cob.blocks.len(), 1);
    let bc = &cob.blocks[0];
    assert!(bc.product_deviation < 1e-10);
    // first row is the stable vector (1,1)
    assert!((bc.c_b_tau[(0, 0)] - re(1.0)).norm() < 1e-12);
    assert!((bc.c_b_tau[(0, 1)] - re(1.0)).norm() < 1e-12);
    // reconstruction: τ_i = Σ_b c_{τ,b}[i][b] · b_vec[b]
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..2 {
                acc += bc.c_tau_b[(i, k)] * bc.c_b_tau[(k, j)];
            }
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((acc - re(expected)).norm() < 1e-10);
        }
    }
}

#[test]
fn scaled_gram_changes_norms() {
    // gram = 2I, stable (1,1): ‖(1,1)‖² = 4.
    let b = block(
        vec![re(2.0), re(0.0), re(0.0), re(2.0)],
        vec![vec![1, 1]],
        vec![0.5, 0.5],
        vec![1, 1],
        true,
    );
    let stable: alloc::vec::Vec<C64> = vec![re(1.0), re(1.0)];
    assert!((b.norm_sq(&stable) - 4.0).abs() < 1e-12);
    let cob = change_of_basis(&[b]).unwrap();
    assert!(cob.blocks[0].product_deviation < 1e-10);
}

#[test]
fn cross_block_entries_are_exactly_zero() {
    let b1 = block(
        vec![re(1.0), re(0.0), re(0.0), re(1.0)],
        vec![vec![1, 1]],
        vec![1.0, 1.0],
        vec![1, 1],
        true,
    );
    let mut b2 = block(
        vec![re(1.0)],
        vec![vec![2]],
        vec![1.0],
        vec![1],
        true,
    );
    b2.label = ("z2".to_string(), "mu2".to_string());
    let cob = change_of_basis(&[b1, b2]).unwrap();
    assert_eq!(cob.max_block_dim, 2);
    for (bi, bj, r, c) in [(0usize, 1usize, 0usize, 0usize), (1, 0, 0, 1)] {
        assert_eq!(cob.c_b_tau_entry(bi, r, bj, c), C64::new(0.0, 0.0));
    }
}

#[test]
fn pairing_duality_values() {
    // single label with |W| = 1, ι = 1: ⟨τ,τ⟩ = 1.
    let b = block(vec![re(1.0)], vec![], vec![1.0], vec![1], true);
    let tau: alloc::vec::Vec<C64> = vec![re(1.0)];
    let v = pseudocoefficient_pairing(&b, &tau, &tau).unwrap();
    assert!((v - re(1.0)).norm() < 1e-14);

    // orthogonal pair pairs to zero.
    let b = block(
        vec![re(1.0), re(0.0), re(0.0), re(1.0)],
        vec![],
        vec![1.0, 1.0],
        vec![1, 1],
        true,
    );
    let e0: alloc::vec::Vec<C64> = vec![re(1.0), re(0.0)];
    let e1: alloc::vec::Vec<C64> = vec![re(0.0), re(1.0)];
    assert!(pseudocoefficient_pairing(&b, &e0, &e1).unwrap().norm() < 1e-14);

    // stable (1,1) over the orthonormal gram: ‖φ‖² = packet size = 2.
    let stable: alloc::vec::Vec<C64> = vec![re(1.0), re(1.0)];
    let v = pseudocoefficient_pairing(&b, &stable, &stable).unwrap();
    assert!((v - re(2.0)).norm() < 1e-14);
}

#[test]
fn orthogonality_shape_enforced_in_orthogonal_mode() {
    // gram entry must equal |W|·ι⁻¹: 3 / (1/2) = 6.
    let good = block(vec![re(6.0)], vec![], vec![0.5], vec![3], true);
    assert!(good.validate().is_valid());
    let bad = block(vec![re(5.0)], vec![], vec![0.5], vec![3], true);
    assert!(!bad.validate().is_valid());
}

#[test]
fn dependent_stable_vectors_rejected() {
    let b = block(
        vec![re(1.0), re(0.0), re(0.0), re(1.0)],
        vec![vec![1, 1], vec![2, 2]],
        vec![1.0, 1.0],
        vec![1, 1],
        true,
    );
    let report = b.validate();
    assert!(!report.is_valid());
    assert!(report.violations[0].message.contains("dependent"));
}

#[test]
fn complex_hermitian_gram_supported() {
    // Hermitian, PD: [[2, i], [−i, 2]]
    let g = vec![re(2.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), re(2.0)];
    let b = block(g, vec![vec![1, 1]], vec![1.0, 1.0], vec![1, 1], false);
    assert!(b.validate().is_valid(), "{:?}", b.validate().violations);
    let comp = unstable_complement(&b).unwrap();
    assert_eq!(comp.len(), 1);
    let stable: alloc::vec::Vec<C64> = vec![re(1.0), re(1.0)];
    assert!(b.inner(&comp[0], &stable).norm() < 1e-11);
}

#[test]
fn pseudo_integral_profile_examples() {
    // stabiliser = whole quotient of order 2, ‖b‖² = 2, δ = 1: value 1 on
    // both cosets.
    let p = pseudo_integral_profile(&[2], &[vec![1]], 2.0, true).unwrap();
    assert_eq!(p.values, vec![1.0, 1.0]);
    assert!(p.verified);

    // δ = 0: identically zero.
    let p = pseudo_integral_profile(&[2], &[vec![1]], 2.0, false).unwrap();
    assert_eq!(p.values, vec![0.0, 0.0]);
    assert!(p.verified);

    // trivial stabiliser in a quotient of order 4, ‖b‖² = 2: value 2 at
    // the zero coset only.
    let p = pseudo_integral_profile(&[4], &[], 2.0, true).unwrap();
    assert_eq!(p.values, vec![2.0, 0.0, 0.0, 0.0]);
    assert_eq!(p.stabilizer_order, 1);
    assert!(p.verified);
}

#[test]
fn profile_rejects_wrong_rank_generators() {
    assert!(matches!(
        pseudo_integral_profile(&[2, 2], &[vec![1]], 1.0, true),
        Err(EllipticError::Abelian(AbelianError::GeneratorRank { .. }))
    ));
}
