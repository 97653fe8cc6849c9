use itertools::Itertools;
use reflectice::identities::*;
use reflectice::lattice::{dual_wavefunction, wavefunction};
use reflectice::scalar::sample_param_point;
use reflectice::vertex::{Mutation, MutationTarget};
use reflectice::{Kind, ParamPoint, Scalar};

fn assert_pass(r: &VerificationReport) {
    assert!(r.all_passed, "{}", serde_json::to_string_pretty(r).unwrap());
    assert!(r.instances > 0, "{} checked nothing", r.identity_id);
}

#[test]
fn telescoping() {
    for seed in 0..5 {
        assert_pass(&verify_telescoping_lemma(seed, 10));
    }
}

#[test]
fn one_particle_examples() {
    for seed in 0..2 {
        assert_pass(&verify_one_particle(Kind::I, false, seed, 8));
        assert_pass(&verify_one_particle(Kind::II, true, seed, 6));
    }
}

/// With all α, γ zero the closed forms reduce to the reflecting-boundary
/// models without site inhomogeneities.
#[test]
fn trivial_site_parameters() {
    for kind in [Kind::I, Kind::II] {
        let sampled = sample_param_point(4, 4, 2, kind, 15).unwrap();
        let p = ParamPoint { alpha: ParamPoint::zeros(4), gamma: ParamPoint::zeros(4), ..sampled };
        let one = p.truncated(4, 1);
        for x in 1..=4 {
            assert_eq!(wavefunction(kind, &one, &[x]).unwrap(), one_particle_closed_form(kind, &one, x).unwrap());
            assert_eq!(dual_wavefunction(kind, &one, &[x]).unwrap(), one_particle_dual_closed_form(kind, &one, x).unwrap());
        }
        for x in (1..=4).combinations(2) {
            assert_eq!(wavefunction(kind, &p, &x).unwrap(), correspondence_rhs(kind, false, &p, &x).unwrap());
            assert_eq!(dual_wavefunction(kind, &p, &x).unwrap(), correspondence_rhs(kind, true, &p, &x).unwrap());
        }
    }
}

#[test]
fn ik_examples() {
    for seed in 0..3 {
        assert_pass(&verify_ik_properties(Kind::I, false, seed, 4, 2));
        assert_pass(&verify_ik_properties(Kind::II, true, seed, 4, 2));
    }
}

/// The dual quotient is a function of `t z`; the literal `z_i -> 1/z_i`
/// leaves it fixed only through `t z_i -> 1/(t z_i)`.
#[test]
fn dual_inversion_is_in_t_z() {
    for kind in [Kind::I, Kind::II] {
        let p = sample_param_point(21, 4, 2, kind, 20).unwrap();
        let holes = [2, 4];
        let pref = |q: &ParamPoint| match kind {
            Kind::I => reflectice::symfunc::prefactor(kind, &q.z, &q.t).unwrap(),
            Kind::II => reflectice::symfunc::prefactor(kind, q.spectral(kind).unwrap(), q.u().unwrap()).unwrap(),
        };
        let cross = |q: &ParamPoint| dual_wavefunction(kind, q, &holes).unwrap() * pref(&p);
        let base = dual_wavefunction(kind, &p, &holes).unwrap();
        let good = invert_spectral(kind, true, &p, 0).unwrap();
        assert_eq!(cross(&good), &base * pref(&good));
        let literal = invert_spectral(kind, false, &p, 0).unwrap();
        assert_ne!(cross(&literal), &base * pref(&literal));
    }
}

/// The dual recursion is stated with reversed spectral order; the order
/// as given does not satisfy it.
#[test]
fn dual_recursion_needs_reversed_order() {
    for kind in [Kind::I, Kind::II] {
        let p = sample_param_point(8, 4, 2, kind, 20).unwrap();
        let (l, r) = recursion_sides(kind, true, &p, &[1, 4], true).unwrap();
        assert_eq!(l, r);
        let (l, r) = recursion_sides(kind, true, &p, &[1, 4], false).unwrap();
        assert_ne!(l, r);
    }
}

#[test]
fn main_correspondence_small_grid() {
    for kind in [Kind::I, Kind::II] {
        for dual in [false, true] {
            assert_pass(&verify_main_correspondence(kind, dual, 1, 4, 2));
        }
    }
}

#[test]
fn dwbp_examples() {
    let p = ParamPoint::type_one(Scalar::from(3), vec![Scalar::from(2)], ParamPoint::zeros(1), ParamPoint::zeros(1)).unwrap();
    assert_eq!(dwbp_closed_form(Kind::I, &p).unwrap(), Scalar::ratio(13, 2).unwrap());
    for m in 1..=4 {
        assert_pass(&verify_dwbp_factorization(Kind::I, 0, m));
        assert_pass(&verify_dwbp_factorization(Kind::II, 0, m));
    }
}

#[test]
fn dual_cauchy_examples() {
    assert_pass(&verify_dual_cauchy(Kind::I, 0, 1, 1));
    assert_pass(&verify_dual_cauchy(Kind::I, 0, 2, 3));
    assert_pass(&verify_dual_cauchy(Kind::II, 0, 2, 2));
}

#[test]
fn b_exchange_examples() {
    for m in 1..=4 {
        assert_pass(&verify_b_commutation(Kind::I, 2, m));
        assert_pass(&verify_b_commutation(Kind::II, 2, m));
    }
}

#[test]
fn local_relations_pass() {
    for r in verify_local_relations(5, 10) {
        assert_pass(&r);
    }
}

#[test]
fn corrupted_weight_is_caught() {
    let v = Verifier::with_mutation(Some(Mutation { target: MutationTarget::LGamma, row: 1, col: 1 }));
    assert!(!v.main_correspondence(Kind::I, false, 0, 3, 2).all_passed);
}

/// An off-diagonal boundary entry moves amplitude out of the fixed particle
/// sector, so no wavefunction sees it. The exchange relation on generic
/// vectors does.
#[test]
fn off_diagonal_boundary_corruption_needs_exchange_check() {
    let v = Verifier::with_mutation(Some(Mutation { target: MutationTarget::KTypeII, row: 0, col: 1 }));
    assert!(v.main_correspondence(Kind::II, true, 0, 3, 2).all_passed);
    assert!(!v.b_commutation(Kind::II, 0, 3).all_passed);
}

#[test]
fn reports_are_deterministic() {
    let budget = Budget { max_m: 2, max_n: 2 };
    let a = serde_json::to_string(&verify_all(9, budget)).unwrap();
    let b = serde_json::to_string(&verify_all(9, budget)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn report_json_shape() {
    let r = verify_dwbp_factorization(Kind::I, 0, 1);
    let v = serde_json::to_value(&r).unwrap();
    for key in ["identity_id", "passed", "instances", "failure", "seeds"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v["failure"].is_null());
}
