use super::*;

fn ladder() -> EpsilonLadder {
    EpsilonLadder::default()
}

fn fit_of(f: impl Fn(f64) -> f64) -> ScalingFit {
    let l = ladder();
    let mags: Vec<f64> = l.values().iter().map(|&e| f(e)).collect();
    fit_ladder(&l, &mags, &Tolerances::default()).unwrap()
}

#[test]
fn ladder_invariants() {
    let l = ladder();
    assert_eq!(l.len(), 17);
    assert!(l.values().windows(2).all(|w| w[1] < w[0]));
    assert!(EpsilonLadder::geometric(1.0, 0.5, 7).is_err());
    assert!(EpsilonLadder::geometric(1.0, 0.9, 20).is_err());
    assert!(EpsilonLadder::geometric(2.0, 0.5, 20).is_err());
}

#[test]
fn power_laws_are_recovered_exactly() {
    for &b in &[-3.0, -1.0, 0.0, 0.5, 2.0] {
        let f = fit_of(|e| 3.0 * e.powf(b));
        assert!((f.exponent - b).abs() < 1e-10, "{b}: {}", f.exponent);
        assert!(f.residual < 1e-10);
        assert!(f.is_stable());
    }
}

#[test]
fn oscillating_prefactor_stays_near_minus_one() {
    let f = fit_of(|e| (1.0 + 0.1 * e.ln().sin()) / e);
    assert!((f.exponent + 1.0).abs() < 0.05, "{}", f.exponent);
}

#[test]
fn zeros_trigger_the_floor() {
    let f = fit_of(|_| 0.0);
    assert!(f.floor_flag);
    assert_eq!(f.exponent, f64::INFINITY);
    let l = EpsilonLadder::default();
    let samples: Vec<(f64, f64)> = l.values()[..3].iter().map(|&e| (e, e)).collect();
    assert!(matches!(
        fit_valuation(&samples),
        Err(Error::InsufficientLadder { .. })
    ));
}

#[test]
fn generalized_number_algebra() {
    let l = ladder();
    let x = GeneralizedNumber::from_fn(&l, |e| Complex64::new(e * e, 0.0));
    let y = GeneralizedNumber::from_fn(&l, |e| Complex64::new(0.0, e.powi(-1)));
    assert!((x.mul(&y).unwrap().valuation().unwrap() - 1.0).abs() < 1e-9);
    assert!((x.add(&y).unwrap().valuation().unwrap() + 1.0).abs() < 1e-3);
    assert_eq!(ultra_pseudo_norm(&x.sub(&x).unwrap()).unwrap(), 0.0);
    let other = GeneralizedNumber::from_fn(&EpsilonLadder::dyadic(1, 17).unwrap(), |_| 1.0.into());
    assert_eq!(x.add(&other), Err(Error::LadderMismatch));
}

#[test]
fn ultrametric_inequality_on_random_power_laws() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let l = ladder();
    for _ in 0..200 {
        let (a, b): (f64, f64) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let (ca, cb): (f64, f64) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let x = GeneralizedNumber::from_fn(&l, |e| Complex64::new(ca * e.powf(a), 0.0));
        let y = GeneralizedNumber::from_fn(&l, |e| Complex64::new(0.0, cb * e.powf(b)));
        let vs = x.add(&y).unwrap().valuation().unwrap();
        let bound = x.valuation().unwrap().min(y.valuation().unwrap());
        assert!(vs >= bound - 0.1, "{a} {b}: {vs} < {bound}");
    }
}

fn fits_from(exps: &[(usize, f64)]) -> BTreeMap<SeminormKey, ScalingFit> {
    exps.iter()
        .map(|&(order, b)| (SeminormKey::new(order, "K"), fit_of(|e| e.powf(b))))
        .collect()
}

#[test]
fn classification_tags() {
    let tol = Tolerances::default();
    let c = classify_net(&fits_from(&[(0, 0.0), (1, -1.0), (2, -2.0), (3, -3.0), (4, -4.0)]), &tol)
        .unwrap();
    assert_eq!(c.tag, ModerationTag::Moderate);
    assert_eq!(c.uniform_exponent, Some(4));
    let c = classify_net(&fits_from(&[(0, -2.0), (1, -2.0), (2, -2.3)]), &tol).unwrap();
    assert_eq!(c.tag, ModerationTag::Regular);
    assert_eq!(c.uniform_exponent, Some(3));
    let c = classify_net(&fits_from(&[(0, 9.0), (1, 8.5)]), &tol).unwrap();
    assert_eq!(c.tag, ModerationTag::Negligible);
    let c = classify_net(&fits_from(&[(0, -45.0)]), &tol).unwrap();
    assert_eq!(c.tag, ModerationTag::NotModerate);
}

#[test]
fn rough_fits_are_rejected() {
    let l = ladder();
    let mags: Vec<f64> =
        l.values().iter().enumerate().map(|(k, _)| if k % 2 == 0 { 1.0 } else { 1e3 }).collect();
    let fit = fit_ladder(&l, &mags, &Tolerances::default()).unwrap();
    let mut map = BTreeMap::new();
    map.insert(SeminormKey::new(0, "K"), fit);
    assert!(matches!(
        classify_net(&map, &Tolerances::default()),
        Err(Error::FitRejected { .. })
    ));
}

#[test]
fn slow_scale_examples() {
    let l = ladder();
    let tol = Tolerances::default();
    let powers = tol.slow_scale_powers.clone();
    let log: Vec<f64> = l.values().iter().map(|e| (1.0 / e).ln() + 2.0).collect();
    assert!(check_slow_scale(&l, &log, &powers, &tol).unwrap().pass);
    let inv: Vec<f64> = l.values().iter().map(|e| 1.0 / e).collect();
    assert!(!check_slow_scale(&l, &inv, &powers, &tol).unwrap().pass);
    let root: Vec<f64> = l.values().iter().map(|e| e.powf(-0.5)).collect();
    assert!(!check_slow_scale(&l, &root, &powers, &tol).unwrap().pass);
    let one = vec![1.0; l.len()];
    let cert = check_slow_scale(&l, &one, &powers, &tol).unwrap();
    assert!(cert.pass);
    assert_eq!(cert.constants[0], l.values()[0]);
}
