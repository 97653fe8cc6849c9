use itertools::Itertools;
use proptest::prelude::*;
use reflectice::identities::one_particle_closed_form;
use reflectice::lattice::*;
use reflectice::scalar::{eval_poly, interpolate_univariate, sample_param_point};
use reflectice::symfunc::complement_positions;
use reflectice::{Kind, ParamPoint, Scalar};

fn kind_of(b: bool) -> Kind {
    if b {
        Kind::II
    } else {
        Kind::I
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn streaming_matches_kronecker_assembly(seed in 0u64..10_000, m in 1usize..=4, n in 1usize..=3, two in any::<bool>()) {
        let n = n.min(m);
        let kind = kind_of(two);
        let p = sample_param_point(seed, m, n, kind, 12).unwrap();
        for x in (1..=m).combinations(n) {
            prop_assert_eq!(wavefunction(kind, &p, &x).unwrap(), brute_force_wavefunction(kind, &p, &x).unwrap());
        }
    }

    #[test]
    fn b_adds_exactly_one_particle(seed in 0u64..10_000, m in 1usize..=5, state in 0u32..32, two in any::<bool>()) {
        let kind = kind_of(two);
        let state = FockState(state & ((1 << m) - 1));
        let p = sample_param_point(seed, m, 1, kind, 12).unwrap();
        let x = p.spectral(kind).unwrap()[0].clone();
        let out = apply_double_row_b(kind, &x, &p, &StateVector::basis(m, state)).unwrap();
        for (s, _) in out.nonzero_states() {
            prop_assert_eq!(s.popcount(), state.popcount() + 1);
        }
    }
}

/// Inserting a resolution of the identity between the first `M - N` and
/// the last `N` B-operators splits the domain-wall partition function into
/// dual wavefunctions times wavefunctions.
#[test]
fn dwbp_from_completeness_splitting() {
    for kind in [Kind::I, Kind::II] {
        for m in 1..=4 {
            let p = sample_param_point(11 + m as u64, m, m, kind, 12).unwrap();
            let xs = p.spectral(kind).unwrap().to_vec();
            for n in 0..=m {
                let tail = p.with_spectral(kind, xs[m - n..].to_vec());
                let head = p.with_spectral(kind, xs[..m - n].to_vec());
                let mut total = Scalar::zero();
                for x in (1..=m).combinations(n) {
                    let holes = complement_positions(&x, m).unwrap();
                    total += dual_wavefunction(kind, &head, &holes).unwrap() * wavefunction(kind, &tail, &x).unwrap();
                }
                assert_eq!(total, dwbp(kind, &p).unwrap(), "kind {kind}, M = {m}, N = {n}");
            }
        }
    }
}

/// At `z = 1` the one-particle closed form has a zero denominator; the
/// lattice value is finite there and agrees with the Laurent polynomial
/// interpolated from regular points.
#[test]
fn lattice_is_regular_where_closed_form_is_singular() {
    let m = 3;
    let base = sample_param_point(9, m, 1, Kind::I, 12).unwrap();
    let at = |z: Scalar| ParamPoint { z: vec![z], ..base.clone() };
    let shift = (m + 2) as i64;
    let samples: Vec<(Scalar, Scalar)> = (2..2 + 2 * shift + 4)
        .map(|k| {
            let z = Scalar::from(k);
            let v = wavefunction(Kind::I, &at(z.clone()), &[2]).unwrap() * z.pow(shift).unwrap();
            (z, v)
        })
        .collect();
    let poly = interpolate_univariate(&samples).unwrap();
    let one = Scalar::one();
    assert!(one_particle_closed_form(Kind::I, &at(one.clone()), 2).is_err());
    assert_eq!(eval_poly(&poly, &one), wavefunction(Kind::I, &at(one), &[2]).unwrap());
}

#[test]
fn example_values() {
    let p = ParamPoint::type_one(Scalar::from(3), vec![Scalar::from(2)], ParamPoint::zeros(1), ParamPoint::zeros(1)).unwrap();
    let v = Scalar::ratio(13, 2).unwrap();
    assert_eq!(wavefunction(Kind::I, &p, &[1]).unwrap(), v);
    assert_eq!(dwbp(Kind::I, &p).unwrap(), v);
    assert_eq!(brute_force_wavefunction(Kind::I, &p, &[1]).unwrap(), v);
}

#[test]
fn guards() {
    let p = sample_param_point(1, 2, 1, Kind::I, 12).unwrap();
    assert!(wavefunction(Kind::I, &p, &[3]).is_err());
    assert!(wavefunction(Kind::I, &p, &[1, 2]).is_err());
    assert!(wavefunction(Kind::II, &p, &[1]).is_err());
    assert!(StateVector::from_amplitudes(2, vec![Scalar::one(); 3]).is_err());
}
