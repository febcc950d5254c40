use num_rational::BigRational;
use num_traits::{Signed, Zero};
use spikelab::dyck::EdgePath;
use spikelab::ensembles::{EnsembleSpec, EntryLaw, Field};
use spikelab::genfun::parse_rational;
use spikelab::momentlab::{
    enumerate_assignments, exact_trace_moment, path_contribution, path_length, universality_gap, MomentMethod,
    MomentReport, MomentRequest, MomentValue, PathTerm,
};

fn exact(spec: &EnsembleSpec, s: usize) -> (BigRational, Vec<PathTerm>) {
    let r: MomentReport =
        exact_trace_moment(&MomentRequest { spec: spec.clone(), power: s, method: MomentMethod::ExactEnumeration })
            .unwrap();
    match r.value {
        MomentValue::Exact { value, .. } => (value.0, r.path_terms.unwrap()),
        _ => unreachable!(),
    }
}

fn tiny_matrix() -> Vec<(EnsembleSpec, usize)> {
    let mut out = Vec::new();
    for n in 1..=2 {
        for p in n..=3 {
            for law in [EntryLaw::three_point(1.0), EntryLaw::rademacher(1.0)] {
                for field in [Field::Real, Field::Complex] {
                    for spikes in [vec![], vec![2.0]] {
                        for s in 1..=3 {
                            out.push((EnsembleSpec::white(n, p, field, law, 0).with_spikes(spikes.clone()), s));
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn two_oracles_agree_exactly() {
    for (spec, s) in tiny_matrix() {
        let (paths, _) = exact(&spec, s);
        let matrix = enumerate_assignments(&spec, s).unwrap();
        assert_eq!(paths, matrix, "{spec:?}, s = {s}");
    }
}

#[test]
fn first_moment_reproduced() {
    for (spec, _) in tiny_matrix() {
        let pi = spec.spikes.first().copied().unwrap_or(1.0);
        let want = parse_rational(&format!("{}", pi + spec.n as f64 - 1.0)).unwrap();
        assert_eq!(exact(&spec, 1).0, want);
    }
}

#[test]
fn odd_edge_multiplicities_vanish() {
    for law in [EntryLaw::three_point(1.0), EntryLaw::rademacher(1.0), EntryLaw::gaussian(1.0)] {
        for field in [Field::Real, Field::Complex] {
            let spec = EnsembleSpec::white(2, 3, field, law, 0).with_spikes(vec![2.0]);
            for path in EdgePath::all(2, 3, 3) {
                let c = path_contribution(&spec, &path).unwrap();
                if !path.is_even() {
                    assert!(c.is_zero(), "{path:?}");
                } else {
                    assert!(c.is_positive(), "{path:?}");
                }
            }
        }
    }
}

#[test]
fn spike_weights_term_by_term() {
    for field in [Field::Real, Field::Complex] {
        let white = EnsembleSpec::white(2, 3, field, EntryLaw::three_point(1.0), 0);
        let spiked = white.clone().with_spikes(vec![2.5]);
        let (_, base) = exact(&white, 3);
        let (_, weighted) = exact(&spiked, 3);
        assert_eq!(base.len(), weighted.len());
        let pi = parse_rational("5/2").unwrap();
        for (b, w) in base.iter().zip(&weighted) {
            assert_eq!((b.one_edges, b.k, b.paths), (w.one_edges, w.k, w.paths));
            assert_eq!(b.one_edges % 2, 0);
            assert_eq!(w.value.0, &b.value.0 * pi.pow((b.one_edges / 2) as i32));
        }
    }
}

#[test]
fn monte_carlo_within_four_standard_errors() {
    for field in [Field::Real, Field::Complex] {
        let spec = EnsembleSpec::white(2, 3, field, EntryLaw::three_point(1.0), 11).with_spikes(vec![2.0]);
        let (want, _) = exact(&spec, 3);
        let r = exact_trace_moment(&MomentRequest {
            spec: spec.clone(),
            power: 3,
            method: MomentMethod::MonteCarlo { trials: 20000 },
        })
        .unwrap();
        let MomentValue::Estimate { mean, std_error, .. } = r.value else { unreachable!() };
        let want: f64 = num_traits::ToPrimitive::to_f64(&want).unwrap();
        assert!((mean - want).abs() < 4.0 * std_error, "{mean} ± {std_error} vs {want}");
    }
}

#[test]
fn gap_of_identical_specs_is_zero() {
    let spec = EnsembleSpec::white(20, 40, Field::Complex, EntryLaw::gaussian(1.0), 3);
    let g = universality_gap(&spec, &spec, 6, 200).unwrap();
    assert_eq!(g.z, 0.0);
}

#[test]
fn gap_rejects_rademacher_above_transition() {
    let a = EnsembleSpec::white(20, 40, Field::Complex, EntryLaw::gaussian(1.0), 3).with_spikes(vec![3.0]);
    let b = a.clone().with_law(EntryLaw::rademacher(1.0));
    assert!(matches!(universality_gap(&a, &b, 4, 100), Err(spikelab::Error::Regime(_))));
}

#[test]
fn matched_laws_agree_above_transition() {
    let a = EnsembleSpec::white(100, 200, Field::Complex, EntryLaw::gaussian(1.0), 41).with_spikes(vec![3.0]);
    let b = a.clone().with_law(EntryLaw::three_point(1.0));
    let s = path_length(&a, 1.0);
    assert_eq!(s, 10);
    let g = universality_gap(&a, &b, s, 2000).unwrap();
    println!("gaussian vs three_point z = {:.3}", g.z);
    assert!(g.z.abs() < 4.0);
}

#[test]
fn rademacher_agrees_below_transition() {
    let a = EnsembleSpec::white(100, 400, Field::Complex, EntryLaw::gaussian(1.0), 42).with_spikes(vec![1.2]);
    let b = a.clone().with_law(EntryLaw::rademacher(1.0));
    let s = path_length(&a, 1.0);
    assert_eq!(s, 22);
    let g = universality_gap(&a, &b, s, 2000).unwrap();
    println!("gaussian vs rademacher z = {:.3}", g.z);
    assert!(g.z.abs() < 4.0);
}
