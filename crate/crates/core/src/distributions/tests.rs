use super::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LN2: f64 = std::f64::consts::LN_2;
const N: usize = 100_000;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn all_families() -> Vec<UnitMeanCdf<f64>> {
    vec![
        UnitMeanCdf::dirac1(),
        UnitMeanCdf::frechet(0.2).unwrap(),
        UnitMeanCdf::frechet(0.5).unwrap(),
        UnitMeanCdf::frechet(0.8).unwrap(),
        UnitMeanCdf::two_point(LN2).unwrap(),
        UnitMeanCdf::two_point(0.3).unwrap(),
        UnitMeanCdf::unit_exponential(),
        UnitMeanCdf::discrete(vec![(0.0, 0.25), (0.5, 0.25), (1.0, 0.25), (2.5, 0.25)]).unwrap(),
        UnitMeanCdf::unit_exponential().tilt(2.0).unwrap(),
        UnitMeanCdf::frechet(0.5).unwrap().tilt(3.0).unwrap(),
        rescale_to_unit_mean(&FiniteMeanCdf::uniform(1.0, 4.0).unwrap()).unwrap(),
        rescale_to_unit_mean(&FiniteMeanCdf::gamma(0.5, 3.0).unwrap()).unwrap(),
    ]
}

fn continuous_families() -> Vec<UnitMeanCdf<f64>> {
    vec![
        UnitMeanCdf::frechet(0.3).unwrap(),
        UnitMeanCdf::frechet(0.7).unwrap(),
        UnitMeanCdf::unit_exponential(),
        UnitMeanCdf::unit_exponential().tilt(2.0).unwrap(),
        rescale_to_unit_mean(&FiniteMeanCdf::uniform(1.0, 4.0).unwrap()).unwrap(),
        rescale_to_unit_mean(&FiniteMeanCdf::gamma(2.5, 1.0).unwrap()).unwrap(),
    ]
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

#[test]
fn cdf_examples() {
    let d = UnitMeanCdf::<f64>::dirac1();
    assert_eq!(d.cdf(0.5), 0.0);
    assert_eq!(d.cdf(1.0), 1.0);
    assert_eq!(d.cdf_left(1.0), 0.0);
    let tp = UnitMeanCdf::two_point(LN2).unwrap();
    assert!((tp.cdf(1.9) - 0.5).abs() < 1e-15);
    assert_eq!(tp.cdf(2.0), 1.0);
    assert!((tp.cdf_left(2.0) - 0.5).abs() < 1e-15);
    assert_eq!(tp.cdf_left(0.0), 0.0);
    assert!((tp.cdf(0.0) - 0.5).abs() < 1e-15);
    assert_eq!(tp.cdf(f64::INFINITY), 1.0);
}

#[test]
fn frechet_constant_and_e_inverse_point() {
    // Γ(1/2) = √π, so c_{1/2} = 1/π
    let f = UnitMeanCdf::frechet(0.5).unwrap();
    let UnitMeanCdf::Frechet(fr) = &f else { unreachable!() };
    assert!((fr.c() - 1.0 / std::f64::consts::PI).abs() < 1e-15);
    // F(x) = e^{−1} exactly where c x^{−1/α} = 1, i.e. x = c^α
    for alpha in [0.2f64, 0.5, 0.8] {
        let f = UnitMeanCdf::frechet(alpha).unwrap();
        let UnitMeanCdf::Frechet(fr) = &f else { unreachable!() };
        let x = fr.c().powf(alpha);
        assert!((f.cdf(x) - (-1f64).exp()).abs() < 1e-14);
    }
    // Γ(0.2) and Γ(0.8) from a 30-digit evaluation
    let c02 = 1.164_229_713_725_303_373_6f64.powf(-1.0 / 0.2);
    let UnitMeanCdf::Frechet(fr) = UnitMeanCdf::frechet(0.2).unwrap() else {
        unreachable!()
    };
    assert!((fr.c() - c02).abs() < 1e-12 * c02);
    let c08 = 4.590_843_711_998_803_053f64.powf(-1.0 / 0.8);
    let UnitMeanCdf::Frechet(fr) = UnitMeanCdf::frechet(0.8).unwrap() else {
        unreachable!()
    };
    assert!((fr.c() - c08).abs() < 1e-12 * c08);
}

#[test]
fn construction_errors() {
    assert!(UnitMeanCdf::frechet(0.0).is_err());
    assert!(UnitMeanCdf::frechet(1.0).is_err());
    assert!(UnitMeanCdf::two_point(0.0).is_err());
    assert!(UnitMeanCdf::two_point(-1.0).is_err());
    assert!(UnitMeanCdf::discrete(vec![(-1.0, 0.5), (3.0, 0.5)]).is_err());
    assert!(UnitMeanCdf::discrete(vec![(2.0, 1.0)]).is_err());
    assert!(UnitMeanCdf::unit_exponential().tilt(0.0).is_err());
}

#[test]
fn tail_integral_examples() {
    let d = UnitMeanCdf::<f64>::dirac1();
    assert!((d.tail_integral(0.3).unwrap() - 0.7).abs() < 1e-15);
    let e = UnitMeanCdf::<f64>::unit_exponential();
    assert!((e.tail_integral(1.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
    for f in all_families() {
        let m = f.tail_integral(0.0).unwrap();
        assert!((m - 1.0).abs() < 1e-9, "{}: {m}", f.family_name());
    }
}

#[test]
fn tail_integral_closed_forms_match_quadrature() {
    for f in all_families() {
        for a in [0.0, 0.1, 0.7, 1.0, 2.3, 10.0] {
            let c = f.tail_integral(a).unwrap();
            let q = f.tail_integral_quadrature(a).unwrap();
            assert!((c - q).abs() < 1e-8, "{} at {a}: {c} vs {q}", f.family_name());
        }
    }
}

#[test]
fn sample_examples() {
    let mut r = rng(1);
    let d = UnitMeanCdf::<f64>::dirac1();
    assert!((0..1000).all(|_| d.sample(&mut r) == 1.0));
    let tp = UnitMeanCdf::two_point(LN2).unwrap();
    let xs: Vec<f64> = (0..N).map(|_| tp.sample(&mut r)).collect();
    assert!(xs.iter().all(|&x| x == 0.0 || (x - 2.0).abs() < 1e-12));
    let freq = xs.iter().filter(|&&x| x > 0.0).count() as f64 / N as f64;
    assert!((freq - 0.5).abs() <= 3.0 * (0.25 / N as f64).sqrt());
    let e = UnitMeanCdf::<f64>::unit_exponential();
    let xs: Vec<f64> = (0..N).map(|_| e.sample(&mut r)).collect();
    let (m, _) = mean_and_se(&xs);
    assert!((m - 1.0).abs() <= 3.0 / (N as f64).sqrt());
}

#[test]
fn size_biased_examples() {
    let mut r = rng(2);
    let d = UnitMeanCdf::<f64>::dirac1();
    assert!((0..1000).all(|_| d.sample_size_biased(&mut r) == 1.0));
    let tp = UnitMeanCdf::two_point(LN2).unwrap();
    assert!((0..1000).all(|_| (tp.sample_size_biased(&mut r) - 2.0).abs() < 1e-12));
    let tp = UnitMeanCdf::two_point(0.3).unwrap();
    let UnitMeanCdf::TwoPoint(inner) = &tp else {
        unreachable!()
    };
    assert!((0..1000).all(|_| tp.sample_size_biased(&mut r) == inner.q()));
    let e = UnitMeanCdf::<f64>::unit_exponential();
    let xs: Vec<f64> = (0..N).map(|_| e.sample_size_biased(&mut r)).collect();
    let (m, se) = mean_and_se(&xs);
    assert!((m - 2.0).abs() <= 3.0 * se, "{m} ± {se}");
}

#[test]
fn size_biased_tilted_exponential() {
    // F₂(x) = (1 − e^{−1.5x})², the max of two Exp(1.5); E[X²] = 4/1.5² − 2/3² = 14/9
    let f = UnitMeanCdf::unit_exponential().tilt(2.0).unwrap();
    let mut r = rng(3);
    let xs: Vec<f64> = (0..20_000).map(|_| f.sample_size_biased(&mut r)).collect();
    let (m, se) = mean_and_se(&xs);
    assert!((m - 14.0 / 9.0).abs() <= 4.0 * se, "{m} ± {se}");
    assert!(xs.iter().all(|&x| x > 0.0));
}

#[test]
fn size_biased_discrete_and_rescaled_means() {
    let mut r = rng(4);
    let f = UnitMeanCdf::discrete(vec![(0.0, 0.25), (0.5, 0.25), (1.0, 0.25), (2.5, 0.25)]).unwrap();
    let second: f64 = 0.25 * (0.25 + 1.0 + 6.25);
    let xs: Vec<f64> = (0..N).map(|_| f.sample_size_biased(&mut r)).collect();
    let (m, se) = mean_and_se(&xs);
    assert!((m - second).abs() <= 4.0 * se);
    assert!(xs.iter().all(|&x| x > 0.0));
    // uniform on [1, 4] scaled by its mean 2.5: E[X²] = (1 + 4 + 16) / 3 / 2.5²
    let f = rescale_to_unit_mean(&FiniteMeanCdf::uniform(1.0, 4.0).unwrap()).unwrap();
    let xs: Vec<f64> = (0..N).map(|_| f.sample_size_biased(&mut r)).collect();
    let (m, se) = mean_and_se(&xs);
    assert!((m - 7.0 / 6.25).abs() <= 4.0 * se);
}

#[test]
fn tilt_examples() {
    for f in all_families() {
        let same = f.tilt(1.0).unwrap();
        for x in [0.0, 0.2, 0.9, 1.0, 1.7, 5.0] {
            assert!((same.cdf(x) - f.cdf(x)).abs() < 1e-12);
        }
    }
    assert_eq!(UnitMeanCdf::<f64>::dirac1().tilt(3.0).unwrap(), UnitMeanCdf::dirac1());
    let e = UnitMeanCdf::<f64>::unit_exponential();
    assert!((e.psi(2.0).unwrap() - 1.5).abs() < 1e-10);
    let f2 = e.tilt(2.0).unwrap();
    for x in [0.1f64, 0.5, 1.0, 3.0] {
        let want = (1.0 - (-1.5 * x).exp()).powi(2);
        assert!((f2.cdf(x) - want).abs() < 1e-10);
    }
    assert!((f2.tail_integral_quadrature(0.0).unwrap() - 1.0).abs() < 1e-8);
    let fr = UnitMeanCdf::frechet(0.4).unwrap();
    assert!((fr.psi(3.0).unwrap() - 3f64.powf(0.4)).abs() < 1e-14);
    assert_eq!(fr.tilt(3.0).unwrap(), fr);
    let tp = UnitMeanCdf::two_point(LN2).unwrap();
    assert_eq!(tp.tilt(2.0).unwrap(), UnitMeanCdf::two_point(2.0 * LN2).unwrap());
}

#[test]
fn tilt_composes_multiplicatively() {
    let e = UnitMeanCdf::<f64>::unit_exponential();
    let twice = e.tilt(2.0).unwrap().tilt(1.5).unwrap();
    let once = e.tilt(3.0).unwrap();
    for x in [0.1, 0.5, 1.0, 3.0] {
        assert!((twice.cdf(x) - once.cdf(x)).abs() < 1e-9);
    }
}

#[test]
fn tilt_preserves_unit_mean() {
    for f in all_families() {
        for z in [0.5, 2.0, 5.0] {
            let g = f.tilt(z).unwrap();
            let m = g.tail_integral_quadrature(0.0).unwrap();
            assert!((m - 1.0).abs() < 1e-8, "{} z={z}: {m}", f.family_name());
        }
    }
}

#[test]
fn rescale_examples() {
    let g = FiniteMeanCdf::point(2.0).unwrap();
    assert_eq!(rescale_to_unit_mean(&g).unwrap(), UnitMeanCdf::dirac1());
    let g = FiniteMeanCdf::exponential(3.0f64).unwrap();
    let f = rescale_to_unit_mean(&g).unwrap();
    for x in [0.1, 1.0, 4.0] {
        assert!((f.cdf(x) - g.cdf(3.0 * x)).abs() < 1e-12);
    }
    let g = FiniteMeanCdf::discrete(vec![(0.0, 0.5), (4.0, 0.5)]).unwrap();
    let f = rescale_to_unit_mean(&g).unwrap();
    let tp = UnitMeanCdf::two_point(LN2).unwrap();
    for x in [0.0, 1.0, 1.999, 2.0, 3.0] {
        assert!((f.cdf(x) - tp.cdf(x)).abs() < 1e-12);
    }
    let g = FiniteMeanCdf::gamma(2.0f64, 0.5).unwrap();
    let f = rescale_to_unit_mean(&g).unwrap();
    for x in [0.2, 1.0, 2.5] {
        assert!((f.cdf(x) - g.cdf(x)).abs() < 1e-12);
    }
    assert!((f.tail_integral(0.0).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn single_precision_distributions() {
    let f = UnitMeanCdf::<f32>::frechet(0.5).unwrap();
    assert!((f.tail_integral(0.0).unwrap() - 1.0).abs() < 1e-5);
    let e = UnitMeanCdf::<f32>::unit_exponential();
    assert!((e.psi(2.0).unwrap() - 1.5).abs() < 1e-4);
    let mut r = rng(5);
    let x: f32 = e.sample(&mut r);
    assert!(x > 0.0);
}

fn ks_statistic(f: &UnitMeanCdf<f64>, mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = f.cdf(x);
            (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn kolmogorov_smirnov_continuous_families() {
    for (k, f) in continuous_families().into_iter().enumerate() {
        let mut r = rng(100 + k as u64);
        let xs: Vec<f64> = (0..N).map(|_| f.sample(&mut r)).collect();
        let d = ks_statistic(&f, xs);
        assert!(d <= 1.63 / (N as f64).sqrt(), "{}: D = {d}", f.family_name());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cdf_monotone_and_bounded(k in 0usize..12, mut xs in prop::collection::vec(0.0f64..20.0, 2..30)) {
        let f = &all_families()[k];
        xs.sort_by(f64::total_cmp);
        let mut prev = 0.0;
        for x in xs {
            let c = f.cdf(x);
            prop_assert!((0.0..=1.0).contains(&c));
            prop_assert!(c >= prev - 1e-15);
            prop_assert!(f.cdf_left(x) <= c);
            prev = c;
        }
    }

    #[test]
    fn unit_mean_for_random_parameters(alpha in 0.05f64..0.95, theta in 0.01f64..8.0, z in 0.2f64..6.0) {
        for f in [
            UnitMeanCdf::frechet(alpha).unwrap(),
            UnitMeanCdf::two_point(theta).unwrap(),
            UnitMeanCdf::unit_exponential().tilt(z).unwrap(),
        ] {
            prop_assert!((f.tail_integral(0.0).unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn quantile_inverts_cdf(k in 0usize..6, p in 0.001f64..0.999) {
        let f = &continuous_families()[k];
        let x = f.quantile(p);
        prop_assert!((f.cdf(x) - p).abs() < 1e-8);
    }

    #[test]
    fn tilt_psi_matches_definition(z in 0.2f64..6.0, theta in 0.05f64..4.0) {
        // Ψ for TwoPoint(Θ): (1 − p₀^z) q
        let tp = UnitMeanCdf::two_point(theta).unwrap();
        let p0 = (-theta).exp();
        let want = (1.0 - p0.powf(z)) / (1.0 - p0);
        prop_assert!((tp.psi(z).unwrap() - want).abs() < 1e-12 * want.max(1.0));
    }
}
