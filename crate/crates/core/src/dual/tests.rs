use super::*;
use crate::asymptotics::EpsilonLadder;
use crate::config::Tolerances;
use crate::expr::Expr;
use crate::genfun::{Grid, MultiIndex, Region, RepresentativeNet};
use core::f64::consts::PI;
use num_complex::Complex64;

fn ladder() -> EpsilonLadder {
    EpsilonLadder::default()
}

fn line() -> Grid {
    Grid::line(-PI, PI, 1 << 10).unwrap()
}

fn net(src: &str) -> RepresentativeNet {
    RepresentativeNet::from_expr(line(), ladder(), Expr::parse(src).unwrap()).unwrap()
}

fn delta(a: f64) -> BasicFunctional {
    BasicFunctional::delta(&line(), &ladder(), [a, 0.0], MultiIndex::ZERO).unwrap()
}

fn close(a: Complex64, b: f64, tol: f64) -> bool {
    (a - b).norm() < tol
}

#[test]
fn mollifier_is_normalized() {
    for dim in [1, 2] {
        let rho = Mollifier::standard(dim).unwrap();
        let nodes = rho.nodes(if dim == 1 { 2000 } else { 400 });
        let mass = crate::quadrature::integrate(&nodes, |t| rho.eval(t));
        assert!((mass - 1.0).abs() < if dim == 1 { 1e-10 } else { 1e-6 }, "{dim}: {mass}");
    }
}

#[test]
fn actions() {
    assert!(delta(0.0).act(&net("1")).unwrap().values().iter().all(|v| close(*v, 1.0, 1e-15)));
    let wide = Grid::line(-10.0, 10.0, 1 << 10).unwrap();
    let t = BasicFunctional::integral(&wide, &ladder(), None).unwrap();
    let u = RepresentativeNet::embed_smooth(wide, ladder(), Expr::parse("exp(-x^2)").unwrap()).unwrap();
    assert!(t.act(&u).unwrap().values().iter().all(|v| close(*v, PI.sqrt(), 1e-6)));
    let l = ladder();
    let coef = l.values().iter().map(|e| Complex64::new(1.0 / e, 0.0)).collect();
    let scaled = BasicFunctional::new(
        &line(),
        &l,
        vec![Atom { coef, alpha: MultiIndex::ZERO, location: vec![[0.0, 0.0]; l.len()] }],
        vec![],
        None,
    )
    .unwrap();
    assert!((scaled.act(&net("1")).unwrap().valuation().unwrap() + 1.0).abs() < 1e-9);
}

#[test]
fn certificates() {
    let tol = Tolerances::default();
    let probes = standard_probes(&line(), &ladder(), [0.0, 0.0], 0.5).unwrap();
    let r = delta(0.0).verify_certificate(&probes, &tol).unwrap();
    assert!(r.pass && r.fitted_n.abs() < 1e-6, "{r:?}");

    let l = ladder();
    let coef = l.values().iter().map(|e| Complex64::new(e.powi(-2), 0.0)).collect();
    let cert = Certificate { region: Region::interval(-0.6, 0.6), order: 0, n: 1, eta: 1.0 };
    let strong = BasicFunctional::new(
        &line(),
        &l,
        vec![Atom { coef, alpha: MultiIndex::ZERO, location: vec![[0.0, 0.0]; l.len()] }],
        vec![],
        Some(cert.clone()),
    )
    .unwrap();
    let r = strong.verify_certificate(&probes, &tol).unwrap();
    assert!(!r.pass && (r.fitted_n - 2.0).abs() < 1e-6);

    let prime = BasicFunctional::delta(&line(), &l, [0.0, 0.0], MultiIndex::d1(1)).unwrap().with_certificate(cert);
    let slope = vec![net("x*bump(x/0.5)").with_support_hint(Region::interval(-0.5, 0.5)).unwrap()];
    assert_eq!(prime.act(&slope[0]).unwrap().values()[0].re, (-1.0f64).exp());
    assert!(matches!(prime.verify_certificate(&slope, &tol), Err(crate::Error::CertificateViolation(_))));
}

#[test]
fn parametric_action() {
    let sq = Grid::square(-PI, PI, 1 << 7).unwrap();
    let y_line = Grid::line(-PI, PI, 1 << 7).unwrap();
    let l = ladder();
    let u = RepresentativeNet::from_expr(sq.clone(), l.clone(), Expr::parse("cos(x)*exp(-y^2)*(1+y)").unwrap()).unwrap();
    let d0 = BasicFunctional::delta(&y_line, &l, [0.0, 0.0], MultiIndex::ZERO).unwrap();
    let r = d0.act_parametric(&u).unwrap();
    for (i, x) in r.grid().coords(0).iter().enumerate() {
        assert!(close(r.samples(3)[i], x.cos(), 1e-12));
    }
    let dp = BasicFunctional::delta(&y_line, &l, [0.0, 0.0], MultiIndex::d1(1)).unwrap();
    let xy = RepresentativeNet::from_expr(sq.clone(), l.clone(), Expr::parse("x*y").unwrap()).unwrap();
    let r = dp.act_parametric(&xy).unwrap();
    for (i, x) in r.grid().coords(0).iter().enumerate() {
        assert!(close(r.samples(0)[i], *x, 1e-12));
    }
    // ∫ exp(-(x-y)^2 - y^2) dy = sqrt(π/2) exp(-x^2/2)
    let k = RepresentativeNet::from_expr(sq, l.clone(), Expr::parse("exp(-(x-y)^2-y^2)").unwrap()).unwrap();
    let r = BasicFunctional::integral(&y_line, &l, None).unwrap().act_parametric(&k).unwrap();
    for (i, x) in r.grid().coords(0).iter().enumerate() {
        if x.abs() < 1.5 {
            assert!(close(r.samples(0)[i], (PI / 2.0).sqrt() * (-x * x / 2.0).exp(), 1e-6));
        }
    }
}

#[test]
fn function_convolution() {
    let u = net("bump(2*x)").with_support_hint(Region::interval(-0.5, 0.5)).unwrap();
    let same = delta(0.0).convolve_fun(&u).unwrap();
    let moved = delta(1.0).convolve_fun(&u).unwrap();
    let shifted = net("bump(2*(x-1))");
    for k in [0, 8, 16] {
        for (a, b) in same.samples(k).iter().zip(u.samples(k)) {
            assert!((a - b).norm() < 1e-10);
        }
        for (a, b) in moved.samples(k).iter().zip(shifted.samples(k)) {
            assert!((a - b).norm() < 1e-10);
        }
    }
    let rho = Mollifier::standard(1).unwrap();
    let bump = RepresentativeNet::from_expr(line(), ladder(), rho.profile().clone()).unwrap();
    let c = BasicFunctional::integral(&line(), &ladder(), None).unwrap().convolve_fun(&bump).unwrap();
    assert!(c.samples(0).iter().all(|v| close(*v, 1.0, 1e-9)));
}

#[test]
fn functional_convolution() {
    let l = ladder();
    let ab = delta(0.5).convolve(&delta(-1.25)).unwrap();
    assert_eq!(ab.atoms().len(), 1);
    assert_eq!(ab.atoms()[0].location[0], [-0.75, 0.0]);
    let prime = BasicFunctional::delta(&line(), &l, [0.0, 0.0], MultiIndex::d1(1)).unwrap();
    let p0 = prime.convolve(&delta(0.0)).unwrap();
    assert_eq!(p0.atoms()[0].alpha, MultiIndex::d1(1));
    let inv: Vec<Complex64> = l.values().iter().map(|e| Complex64::new(1.0 / e, 0.0)).collect();
    let s = delta(0.0).scale(&inv).unwrap().convolve(&delta(0.3)).unwrap();
    let c = crate::asymptotics::GeneralizedNumber::new(l.clone(), s.atoms()[0].coef.clone()).unwrap();
    assert!((c.valuation().unwrap() + 1.0).abs() < 1e-9);
    assert_eq!(s.atoms()[0].location[5], [0.3, 0.0]);
}

#[test]
fn convolution_consistency() {
    let l = ladder();
    let u = net("bump(2*x)*(1+x)").with_support_hint(Region::interval(-0.5, 0.5)).unwrap();
    let t = delta(0.7).add(&BasicFunctional::density(&line(), &l, Expr::parse("bump(x)*x").unwrap(), MultiIndex::d1(1)).unwrap()).unwrap();
    let mut emb = BasicFunctional::zero(&line(), &l);
    emb.push_density(DensityTerm { weight: u.clone(), order: MultiIndex::ZERO }).unwrap();
    let v = net("cos(x)*exp(-x^2)");
    let lhs = emb.convolve(&t).unwrap().act(&v).unwrap();
    let ut = t.convolve_fun(&u).unwrap();
    let mut pair = BasicFunctional::zero(&line(), &l);
    pair.push_density(DensityTerm { weight: ut, order: MultiIndex::ZERO }).unwrap();
    let rhs = pair.act(&v).unwrap();
    for (a, b) in lhs.values().iter().zip(rhs.values()) {
        assert!((a - b).norm() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn multiplication() {
    let l = ladder();
    let t = BasicFunctional::delta(&line(), &l, [0.25, 0.0], MultiIndex::d1(1)).unwrap();
    let v = net("sin(x)+2");
    let same = t.multiply(&net("1")).unwrap();
    assert_eq!(same.act(&v).unwrap(), t.act(&v).unwrap());
    let zero = delta(0.5).multiply(&net("x-0.5")).unwrap();
    assert!(zero.act(&v).unwrap().values().iter().all(|z| z.norm() < 1e-15));
    let phi = net("bump(x/eps)/eps");
    let dens = BasicFunctional::integral(&line(), &l, None).unwrap().multiply(&phi).unwrap();
    let mass = crate::quadrature::integrate(&crate::quadrature::interval(-1.0, 1.0, 4000), |p| Expr::parse("bump(x)").unwrap().eval_real(&crate::expr::Env::new().with(crate::Var::X, p[0])));
    for v in dens.act(&net("1")).unwrap().values() {
        assert!((v.re - mass).abs() < 1e-8, "{v} vs {mass}");
    }
}

#[test]
fn regularization_of_delta() {
    let l = ladder();
    let rho = Mollifier::standard(1).unwrap();
    let d = delta(0.0);
    let r = d.regularize(&rho, 2).unwrap();
    let pts = line().all_points();
    for k in [0, 3] {
        let e2 = l.values()[k].powi(2);
        for (i, p) in pts.iter().enumerate() {
            let expected = rho.eval([p[0] / e2, 0.0]) / e2;
            assert!((r.samples(k)[i].re - expected).abs() < 1e-9 * (1.0 + expected));
        }
    }
    let probes = standard_probes(&line(), &l, [0.1, 0.0], 0.8).unwrap();
    let tol = Tolerances::default();
    let mut previous = vec![f64::NEG_INFINITY; probes.len()];
    for q in 1..=4 {
        let rep = d.regularization_report(&rho, q, &probes[..5], &tol).unwrap();
        for (i, c) in rep.iter().enumerate() {
            assert!(c.fit.exponent >= q as f64 - 1.0, "q {q} probe {i}: {}", c.fit.exponent);
            assert!(c.fit.exponent > previous[i]);
            previous[i] = c.fit.exponent;
        }
    }
}

#[test]
fn supports() {
    let s = delta(0.0).estimate_support();
    assert!(s.contains(&cell_of(&line(), [0.0, 0.0])));
    assert!(s.len() <= 3);
    let i = BasicFunctional::integral(&line(), &ladder(), Some(Region::interval(-1.0, 1.0))).unwrap();
    let cells = i.estimate_support();
    let h = line().h();
    assert!(cells.iter().all(|c| {
        let x = line().point(c[0])[0];
        x >= -1.0 - h && x <= 1.0 + h
    }));
    assert!(cells.len() as f64 >= 2.0 / h - 2.0);
    let both = delta(-2.0).add(&BasicFunctional::integral(&line(), &ladder(), Some(Region::interval(0.0, 1.0))).unwrap()).unwrap();
    let cells = both.estimate_support();
    assert!(cells.contains(&cell_of(&line(), [-2.0, 0.0])));
    assert!(cells.contains(&cell_of(&line(), [0.5, 0.0])));
    assert!(!cells.contains(&cell_of(&line(), [-1.0, 0.0])));
    let conv = delta(-2.0).convolve(&i).unwrap().estimate_support();
    let sum: alloc::collections::BTreeSet<[usize; 2]> = cells.iter().copied().collect();
    assert!(!conv.is_empty() && !sum.is_empty());
}
