use super::*;
use crate::asymptotics::{EpsilonLadder, ModerationTag};
use crate::config::Tolerances;
use crate::dual::Mollifier;
use crate::expr::Expr;
use core::f64::consts::PI;

fn line() -> Grid {
    Grid::line(-PI, PI, 1 << 10).unwrap()
}

fn unit() -> Region {
    Region::interval(-1.0, 1.0)
}

fn smooth(src: &str) -> RepresentativeNet {
    RepresentativeNet::embed_smooth(line(), EpsilonLadder::default(), Expr::parse(src).unwrap()).unwrap()
}

#[test]
fn grid_validation() {
    assert!(Grid::line(0.0, 1.0, 100).is_err());
    assert!(Grid::line(0.0, 1.0, 32).is_err());
    assert!(Grid::new(3, [0.0; 2], [1.0; 2], 64).is_err());
    let g = Grid::square(-1.0, 1.0, 64).unwrap();
    assert_eq!(g.len(), 4096);
    assert_eq!(g.point(65), [-1.0 + 2.0 / 64.0, -1.0 + 2.0 / 64.0]);
}

#[test]
fn constant_and_zero_seminorms() {
    let one = smooth("1");
    assert!(one.seminorm(&SeminormSpec::compact(unit(), 0)).unwrap().iter().all(|v| *v == 1.0));
    let zero = smooth("0");
    assert!(zero.seminorm(&SeminormSpec::compact(unit(), 2)).unwrap().iter().all(|v| *v == 0.0));
    assert!(matches!(
        one.seminorm(&SeminormSpec::compact(unit(), 5)),
        Err(crate::Error::UnsupportedOrder { .. })
    ));
}

#[test]
fn oscillation_seminorm_scales_like_inverse_eps() {
    let l = EpsilonLadder::default();
    let u = RepresentativeNet::from_expr(line(), l.clone(), Expr::parse("sin(x/eps)").unwrap()).unwrap();
    let p1 = u.seminorm(&SeminormSpec::compact(unit(), 1)).unwrap();
    for (v, e) in p1.iter().zip(l.values()) {
        assert!((v * e - 1.0).abs() < 0.02, "ε = {e}: {v}");
    }
    let c = u.classify(&unit(), &Tolerances::default()).unwrap();
    assert_eq!(c.tag, ModerationTag::Moderate);
    assert_eq!(c.uniform_exponent, Some(4));
}

#[test]
fn oscillation_seminorm_from_samples_alone() {
    // grid-only path, resolved ladder points
    let l = EpsilonLadder::default();
    let u = RepresentativeNet::from_expr(line(), l.clone(), Expr::parse("sin(x/eps)").unwrap()).unwrap();
    let bare = RepresentativeNet::from_samples(line(), l.clone(), (0..l.len()).map(|k| u.samples(k).to_vec()).collect())
        .unwrap();
    let p1 = bare.seminorm(&SeminormSpec::compact(unit(), 1)).unwrap();
    for (v, e) in p1.iter().zip(l.values()) {
        if *e >= 4.0 * line().h() {
            assert!((v * e - 1.0).abs() < 0.02, "ε = {e}: {v}");
        }
    }
}

#[test]
fn smooth_embeddings_classify() {
    let tol = Tolerances::default();
    let c = smooth("exp(-x^2)").classify(&unit(), &tol).unwrap();
    assert_eq!((c.tag, c.uniform_exponent), (ModerationTag::Regular, Some(0)));
    assert_eq!(smooth("0").classify(&unit(), &tol).unwrap().tag, ModerationTag::Negligible);
    let x = smooth("x");
    assert_eq!(x.classify(&unit(), &tol).unwrap().tag, ModerationTag::Regular);
    let p = x.seminorm(&SeminormSpec::compact(unit(), 1)).unwrap();
    assert!((p[0] - 1.0).abs() < 1e-12);
    assert!(RepresentativeNet::embed_smooth(line(), EpsilonLadder::default(), Expr::parse("eps").unwrap()).is_err());
    assert!(matches!(
        RepresentativeNet::embed_smooth(line(), EpsilonLadder::default(), Expr::parse("1/x").unwrap()),
        Err(crate::Error::EvaluationError { .. })
    ));
}

#[test]
fn spectral_derivative_accuracy() {
    let l = EpsilonLadder::default();
    let s = RepresentativeNet::from_samples(
        line(),
        l.clone(),
        vec![line().all_points().iter().map(|p| p[0].sin().into()).collect(); l.len()],
    )
    .unwrap();
    let d = s.derivative(MultiIndex::d1(1)).unwrap();
    let dd = d.derivative(MultiIndex::d1(1)).unwrap();
    let d2 = s.derivative(MultiIndex::d1(2)).unwrap();
    for (k, p) in line().all_points().iter().enumerate() {
        assert!((d.samples(0)[k].re - p[0].cos()).abs() < 1e-10);
        assert!((dd.samples(0)[k] - d2.samples(0)[k]).norm() < 1e-9);
    }
    let c = RepresentativeNet::from_samples(line(), l.clone(), vec![vec![3.0.into(); 1024]; l.len()]).unwrap();
    let dc = c.derivative(MultiIndex::d1(1)).unwrap();
    assert!(dc.samples(0).iter().all(|v| v.norm() < 1e-12));
}

#[test]
fn point_values() {
    let l = EpsilonLadder::default();
    let pts: Vec<[f64; 2]> = l.values().iter().map(|e| [*e, 0.0]).collect();
    let x = smooth("x").point_value(&pts).unwrap();
    assert!((x.valuation().unwrap() - 1.0).abs() < 1e-9);
    let u = RepresentativeNet::from_expr(line(), l.clone(), Expr::parse("sin(x/eps)").unwrap()).unwrap();
    let quarter: Vec<[f64; 2]> = l.values().iter().map(|e| [PI * e / 2.0, 0.0]).collect();
    assert!(u.point_value(&quarter).unwrap().values().iter().all(|v| (v.re - 1.0).abs() < 1e-12));
    assert!(matches!(
        u.point_value(&vec![[5.0, 0.0]; l.len()]),
        Err(crate::Error::OutOfDomain { .. })
    ));
}

#[test]
fn delta_embedding_scales_like_inverse_eps() {
    let l = EpsilonLadder::default();
    let rho = Mollifier::standard(1).unwrap();
    let u = RepresentativeNet::embed_distribution(line(), l.clone(), &DistributionSpec::delta([0.0, 0.0]), &rho)
        .unwrap();
    let peak = rho.eval([0.0, 0.0]);
    let p0 = u.seminorm(&SeminormSpec::compact(unit(), 0)).unwrap();
    for (v, e) in p0.iter().zip(l.values()) {
        assert!((v * e / peak - 1.0).abs() < 1e-9);
    }
    let c = u.classify(&unit(), &Tolerances::default()).unwrap();
    assert_eq!((c.tag, c.uniform_exponent), (ModerationTag::Moderate, Some(5)));
}

#[test]
fn heaviside_embedding_is_a_smoothed_step() {
    let l = EpsilonLadder::dyadic(2, 16).unwrap();
    let rho = Mollifier::standard(1).unwrap();
    let d = DistributionSpec::density(Expr::parse("step(x)").unwrap());
    let u = RepresentativeNet::embed_distribution(line(), l.clone(), &d, &rho).unwrap();
    for k in 0..l.len() {
        for v in u.samples(k) {
            assert!(v.re > -1e-9 && v.re < 1.0 + 1e-9);
        }
    }
    let far: Vec<[f64; 2]> = l.values().iter().map(|e| [3.0 * e, 0.0]).collect();
    assert!(u.point_value(&far).unwrap().values().iter().all(|v| (v.re - 1.0).abs() < 1e-9));
}

#[test]
fn smooth_density_embedding_converges() {
    let l = EpsilonLadder::dyadic(2, 16).unwrap();
    let rho = Mollifier::standard(1).unwrap();
    let g = Expr::parse("exp(-x^2)*cos(x)").unwrap();
    let u = RepresentativeNet::embed_distribution(line(), l.clone(), &DistributionSpec::density(g.clone()), &rho)
        .unwrap();
    let s = RepresentativeNet::embed_smooth(line(), l.clone(), g).unwrap();
    let diff = u.sub(&s).unwrap();
    for order in 0..=2 {
        let p = diff.seminorm(&SeminormSpec::compact(unit(), order)).unwrap();
        let fit = crate::asymptotics::fit_ladder(&l, &p, &Tolerances::default()).unwrap();
        assert!(fit.exponent >= 1.0, "order {order}: {}", fit.exponent);
    }
}

#[test]
fn support_hint_is_verified() {
    let u = smooth("bump(x)");
    assert!(u.clone().with_support_hint(Region::interval(-1.0, 1.0)).is_ok());
    assert!(matches!(
        u.with_support_hint(Region::interval(0.0, 1.0)),
        Err(crate::Error::SupportError(_))
    ));
}
