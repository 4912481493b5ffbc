use super::*;
use crate::distributions::{CanonicalModel, IdtTriplet, MixingMeasure, UnitMeanCdf};
use crate::stdf::{stdf_canonical, LevySpec, StableTailDependence, WeightVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LN2: f64 = std::f64::consts::LN_2;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn survival_z(samples: &[Vec<f64>], t: &[f64], exact: f64) -> f64 {
    let n = samples.len() as f64;
    let hits = samples.iter().filter(|y| y.iter().zip(t).all(|(a, b)| a > b)).count() as f64;
    (hits / n - exact) / (exact * (1.0 - exact) / n).sqrt()
}

fn triplet(b: f64, c: f64, f: UnitMeanCdf<f64>) -> IdtTriplet<f64> {
    IdtTriplet::new(b, c, MixingMeasure::single(f)).unwrap()
}

#[test]
fn independence_gives_iid_exponentials() {
    let m = CanonicalModel::independence();
    let ys = sample_minstable_batch(&m, 3, 100_000, 1, 1e-4, 2).unwrap();
    for k in 0..3 {
        let mean = ys.iter().map(|y| y[k]).sum::<f64>() / ys.len() as f64;
        assert!(
            (mean - 1.0).abs() <= 3.0 / (ys.len() as f64).sqrt(),
            "coord {k}: {mean}"
        );
    }
}

#[test]
fn dirac_is_comonotone() {
    let m = CanonicalModel::extremal(UnitMeanCdf::dirac1());
    let mut r = rng(2);
    for _ in 0..1000 {
        let y = sample_minstable(&m, 4, &mut r, 1e-6).unwrap();
        assert!(y.iter().all(|&v| v == y[0]));
    }
}

#[test]
fn logistic_joint_survival() {
    let m = CanonicalModel::extremal(UnitMeanCdf::frechet(0.5).unwrap());
    let ys = sample_minstable_batch(&m, 2, 100_000, 3, 1e-4, 4).unwrap();
    let z = survival_z(&ys, &[1.0, 1.0], (-(2f64.sqrt())).exp());
    assert!(z.abs() <= 4.0, "z = {z}");
}

#[test]
fn minstable_is_deterministic_across_workers() {
    let m = CanonicalModel::mixed(0.5, UnitMeanCdf::frechet(0.5).unwrap()).unwrap();
    let a = sample_minstable_batch(&m, 3, 9000, 11, 1e-3, 1).unwrap();
    let b = sample_minstable_batch(&m, 3, 9000, 11, 1e-3, 4).unwrap();
    assert_eq!(a, b);
    let c = sample_minstable_batch(&m, 3, 9000, 11, 1e-3, 1).unwrap();
    assert_eq!(a, c);
}

#[test]
fn halving_tol_only_lowers_coordinates() {
    let m = CanonicalModel::extremal(UnitMeanCdf::frechet(0.5).unwrap());
    let mut changed = 0;
    let reps = 2000;
    for seed in 0..reps {
        let loose = sample_minstable(&m, 3, &mut rng(seed), 1e-2).unwrap();
        let tight = sample_minstable(&m, 3, &mut rng(seed), 5e-3).unwrap();
        assert!(tight.iter().zip(&loose).all(|(a, b)| a <= b));
        if tight != loose {
            changed += 1;
        }
    }
    // Markov: each loose draw is wrong with probability at most 1e-2
    assert!((changed as f64) <= 0.01 * reps as f64 + 4.0 * (0.01 * reps as f64).sqrt());
}

#[test]
fn minstable_rejects_bad_input() {
    let m = CanonicalModel::<f64>::independence();
    assert!(sample_minstable(&m, 0, &mut rng(0), 1e-3).is_err());
    assert!(sample_minstable(&m, 2, &mut rng(0), 0.0).is_err());
}

#[test]
fn minstable_exhausts_budget() {
    let m = CanonicalModel::extremal(UnitMeanCdf::frechet(0.95).unwrap());
    let err = sample_minstable(&m, 1, &mut rng(0), 1e-300).unwrap_err();
    assert!(matches!(err, crate::error::Error::Resource { .. }));
}

#[test]
fn pickands_vertices_for_independence() {
    let m = CanonicalModel::independence();
    let xs = sample_pickands_batch(&m, 5, 100_000, 4, 1).unwrap();
    let mut counts = [0usize; 5];
    for x in &xs {
        let ones: Vec<usize> = (0..5).filter(|&k| x.coords[k] == 1.0).collect();
        assert_eq!(ones.len(), 1);
        assert_eq!(x.coords.iter().sum::<f64>(), 1.0);
        counts[ones[0]] += 1;
    }
    let n = xs.len() as f64;
    let se = (0.2 * 0.8 / n).sqrt();
    for c in counts {
        assert!((c as f64 / n - 0.2).abs() <= 3.0 * se);
    }
}

#[test]
fn pickands_dirac_is_barycenter() {
    let m = CanonicalModel::<f64>::extremal(UnitMeanCdf::dirac1());
    let mut r = rng(5);
    for _ in 0..100 {
        let x = sample_pickands(&m, 4, &mut r).unwrap();
        assert_eq!(x.coords, vec![0.25; 4]);
    }
}

#[test]
fn pickands_exponential_means_and_stdf() {
    let m = CanonicalModel::extremal(UnitMeanCdf::unit_exponential());
    let xs = sample_pickands_batch(&m, 3, 100_000, 6, 4).unwrap();
    let n = xs.len() as f64;
    for k in 0..3 {
        let v: Vec<f64> = xs.iter().map(|x| x.coords[k]).collect();
        let mean = v.iter().sum::<f64>() / n;
        let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!((mean - 1.0 / 3.0).abs() <= 3.0 * sd / n.sqrt());
    }
    let t = [1.0, 2.0, 3.0];
    let v: Vec<f64> = xs.iter().map(|x| 3.0 * x.weighted_max(&t)).collect();
    let mean = v.iter().sum::<f64>() / n;
    let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let exact = stdf_canonical(&m, &WeightVector::from_slice(&t).unwrap()).unwrap();
    assert!((mean - exact).abs() <= 4.0 * sd / n.sqrt(), "{mean} vs {exact}");
    for x in &xs {
        assert!((x.coords.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        assert_eq!(x.resamples, 0);
    }
}

#[test]
fn pickands_two_point_resamples_zero_normalizer() {
    // with Θ small the atom at 0 dominates, but the size-biased slot is never 0
    let m = CanonicalModel::extremal(UnitMeanCdf::two_point(0.05).unwrap());
    let mut r = rng(7);
    for _ in 0..1000 {
        let x = sample_pickands(&m, 3, &mut r).unwrap();
        assert_eq!(x.resamples, 0);
        assert!((x.coords.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn dirac_path_jumps_to_infinity_at_first_arrival() {
    let tr = triplet(0.0, 1.0, UnitMeanCdf::dirac1());
    let mut r = rng(8);
    for _ in 0..50 {
        let path = sample_idt_path(&tr, 5.0, &mut r, 1e-6).unwrap();
        let g1 = path.arrivals().next().unwrap().0;
        assert_eq!(path.pin_time(), g1);
        if g1 <= 5.0 {
            assert_eq!(path.eval(g1 * 0.999).unwrap(), 0.0);
            assert_eq!(path.eval(g1).unwrap(), f64::INFINITY);
        }
        assert_eq!(path.eval(0.0).unwrap(), 0.0);
    }
}

#[test]
fn two_point_path_laplace_transform() {
    for (b, c) in [(0.0, 1.0), (0.5, 0.5)] {
        let tr = triplet(b, c, UnitMeanCdf::two_point(LN2).unwrap());
        let vals = streams::run_blocks(100_000, 9, 4, |r, count| {
            (0..count)
                .map(|_| Ok((-sample_idt_path(&tr, 1.0, r, 1e-9)?.eval(1.0)?).exp()))
                .collect()
        })
        .unwrap();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let sd = (vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let z = (mean - (-1f64).exp()) / (sd / n.sqrt());
        assert!(z.abs() <= 4.0, "b={b}: z = {z}");
    }
}

#[test]
fn frechet_and_mixed_path_laplace_transform() {
    let mixed = MixingMeasure::new(vec![
        (0.4, UnitMeanCdf::frechet(0.5).unwrap()),
        (0.3, UnitMeanCdf::two_point(LN2).unwrap()),
        (0.3, UnitMeanCdf::unit_exponential()),
    ])
    .unwrap();
    let cases = [
        IdtTriplet::new(0.0, 1.0, MixingMeasure::single(UnitMeanCdf::frechet(0.3).unwrap())).unwrap(),
        IdtTriplet::new(0.2, 0.8, MixingMeasure::single(UnitMeanCdf::frechet(0.9).unwrap())).unwrap(),
        IdtTriplet::new(0.2, 0.8, mixed).unwrap(),
    ];
    for (k, tr) in cases.iter().enumerate() {
        for t in [0.5, 2.0] {
            let vals = streams::run_blocks(50_000, 20 + k as u64, 4, |r, count| {
                (0..count)
                    .map(|_| Ok((-sample_idt_path(tr, t, r, 1e-6)?.eval(t)?).exp()))
                    .collect()
            })
            .unwrap();
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let sd = (vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            let z = (mean - (-t).exp()) / (sd / n.sqrt());
            assert!(z.abs() <= 4.0, "case {k}, t={t}: z = {z}");
        }
    }
}

#[test]
fn two_point_path_is_poisson_staircase() {
    let tr = triplet(0.0, 1.0, UnitMeanCdf::two_point(LN2).unwrap());
    let path = sample_idt_path(&tr, 3.0, &mut rng(10), 1e-9).unwrap();
    for t in [0.3, 1.0, 2.2, 3.0] {
        let count = path.arrivals().filter(|&(g, _)| g <= 2.0 * t).count() as f64;
        assert!((path.eval(t).unwrap() - LN2 * count).abs() < 1e-12);
    }
    assert!(path.eval(3.5).is_err());
    assert!(path.truncation_bound() <= 1e-9);
}

#[test]
fn paths_are_monotone() {
    let fams = [
        UnitMeanCdf::frechet(0.5).unwrap(),
        UnitMeanCdf::two_point(LN2).unwrap(),
        UnitMeanCdf::unit_exponential(),
        UnitMeanCdf::dirac1(),
    ];
    let mut r = rng(11);
    for i in 0..100 {
        let tr = triplet(0.3, 0.7, fams[i % fams.len()].clone());
        let path = sample_idt_path(&tr, 2.0, &mut r, 1e-6).unwrap();
        let mut prev = 0.0;
        for j in 0..1000 {
            let h = path.eval(2.0 * j as f64 / 999.0).unwrap();
            assert!(h >= prev);
            prev = h;
        }
    }
}

#[test]
fn extension_keeps_prefix_and_certifies() {
    let mu = MixingMeasure::new(vec![
        (0.5, UnitMeanCdf::frechet(0.5).unwrap()),
        (0.5, UnitMeanCdf::unit_exponential()),
    ])
    .unwrap();
    let tr = IdtTriplet::new(0.0, 1.0, mu).unwrap();
    let mut r = rng(12);
    let mut path = sample_idt_path(&tr, 1.0, &mut r, 1e-4).unwrap();
    assert!(!path.is_empty());
    assert!(path.arrivals().all(|(_, f)| f.family_name() != "frechet"));
    let before: Vec<f64> = path.arrivals().map(|a| a.0).collect();
    let h_half = path.eval(0.5).unwrap();
    path.extend(4.0, &mut r).unwrap();
    let after: Vec<f64> = path.arrivals().map(|a| a.0).collect();
    assert_eq!(&after[..before.len()], &before[..]);
    assert!(path.eval(0.5).unwrap() >= h_half);
    assert!(path.truncation_bound() <= 1e-4);
    assert_eq!(path.horizon(), 4.0);
}

#[test]
fn conditional_iid_pure_drift() {
    let m = CanonicalModel::independence();
    let y = sample_conditional_iid_model(&m, 3, &mut rng(13), 1e-6).unwrap();
    let mut r = rng(13);
    let want: Vec<f64> = (0..3).map(|_| super::minstable::exp1(&mut r)).collect();
    assert_eq!(y, want);
}

#[test]
fn conditional_iid_dirac_comonotone() {
    let tr = triplet(0.0, 1.0, UnitMeanCdf::dirac1());
    let mut r = rng(14);
    for _ in 0..200 {
        let y = sample_conditional_iid(&tr, 3, &mut r, 1e-8).unwrap();
        assert!(y.iter().all(|&v| v == y[0]));
    }
}

#[test]
fn conditional_iid_two_point_survival() {
    let m = LevySpec::new(0.0, vec![(LN2, 2.0)]).unwrap().to_canonical().unwrap();
    let ys = sample_conditional_iid_batch(&m, 2, 100_000, 15, 1e-8, 4).unwrap();
    let exact = (-LevySpec::new(0.0, vec![(LN2, 2.0)])
        .unwrap()
        .stdf_at(&[1.0, 1.0])
        .unwrap())
    .exp();
    assert!((exact - (-1.5f64).exp()).abs() < 1e-12);
    let z = survival_z(&ys, &[1.0, 1.0], exact);
    assert!(z.abs() <= 4.0, "z = {z}");
}

#[test]
fn conditional_iid_rejects_unnormalized() {
    let tr = triplet(0.5, 1.0, UnitMeanCdf::dirac1());
    assert!(sample_conditional_iid(&tr, 2, &mut rng(0), 1e-6).is_err());
}

#[test]
fn single_precision_samplers() {
    let m = CanonicalModel::<f32>::mixed(0.5, UnitMeanCdf::frechet(0.5).unwrap()).unwrap();
    let y = sample_minstable(&m, 3, &mut rng(16), 1e-3).unwrap();
    assert!(y.iter().all(|&v| v > 0.0 && v.is_finite()));
    let x = sample_pickands(&m, 3, &mut rng(16)).unwrap();
    assert!((x.coords.iter().sum::<f32>() - 1.0).abs() < 1e-5);
}
