use super::*;
use crate::asymptotics::EpsilonLadder;
use crate::dual::BasicFunctional;
use crate::expr::Expr;
use crate::genfun::{Grid, MultiIndex, RepresentativeNet};
use crate::util::prelude::*;
use crate::{Complex64, Tolerances};
use core::f64::consts::PI;

fn line() -> Grid {
    Grid::line(-PI, PI, 256).unwrap()
}

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn delta_transforms_are_closed_form() {
    let ladder = EpsilonLadder::default();
    let g = line();
    let cut = CutoffSpec::new([0.0, 0.0], 1.0);
    let d = BasicFunctional::delta(&g, &ladder, [0.0, 0.0], MultiIndex::ZERO).unwrap();
    let xis = [[3.0, 0.0], [-40.0, 0.0], [1e5, 0.0]];
    for v in fourier_localized_at(&d, &cut, 0, &xis, &tol()) {
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
    // u ↦ -u'(0) is δ' as a distribution; its localized transform is iξ
    let dp = BasicFunctional::delta(&g, &ladder, [0.0, 0.0], MultiIndex::d1(1))
        .unwrap()
        .scale(&vec![Complex64::new(-1.0, 0.0); ladder.len()])
        .unwrap();
    for (xi, v) in xis.iter().zip(fourier_localized_at(&dp, &cut, 3, &xis, &tol())) {
        assert!((v - Complex64::new(0.0, xi[0])).norm() < 1e-9 * xi[0].abs());
    }
}

#[test]
fn gaussian_density_matches_its_transform() {
    let ladder = EpsilonLadder::default();
    let g = Grid::line(-10.0, 10.0, 512).unwrap();
    let x = Expr::var(crate::Var::X);
    let gauss = (-(x.clone() * x)).exp();
    let t = BasicFunctional::density(&g, &ladder, gauss, MultiIndex::ZERO).unwrap();
    let cut = CutoffSpec::new([0.0, 0.0], 9.5);
    let xis: Vec<[f64; 2]> = [0.0, 0.5, 1.0, 2.0, 5.0, -3.0].iter().map(|x| [*x, 0.0]).collect();
    for (xi, v) in xis.iter().zip(fourier_localized_at(&t, &cut, 0, &xis, &tol())) {
        let exact = PI.sqrt() * (-xi[0] * xi[0] / 4.0).exp();
        assert!((v.re - exact).abs() < 1e-6 && v.im.abs() < 1e-6, "{xi:?} {v} {exact}");
    }
}

#[test]
fn fft_and_direct_paths_agree() {
    let ladder = EpsilonLadder::default();
    let g = line();
    let x = Expr::var(crate::Var::X);
    let w = (x.clone() * Expr::constant(3.0)).sin() + Expr::constant(0.5);
    let t = BasicFunctional::density(&g, &ladder, w, MultiIndex::d1(1)).unwrap();
    let cut = CutoffSpec::new([0.4, 0.0], 0.7);
    let bins = fourier_localized_bins(&t, &cut, 0, &tol());
    let picked: Vec<([f64; 2], Complex64)> = bins.iter().step_by(bins.len() / 37).copied().collect();
    let xis: Vec<[f64; 2]> = picked.iter().map(|p| p.0).collect();
    let direct = fourier_localized_at(&t, &cut, 0, &xis, &tol());
    let scale = bins.iter().map(|b| b.1.norm()).fold(0.0, f64::max);
    for ((_, f), d) in picked.iter().zip(direct) {
        assert!((f - d).norm() < 1e-8 * scale);
    }
}

#[test]
fn closed_form_spectra_classify() {
    let ladder = EpsilonLadder::default();
    let t = tol();
    let top = |e: f64| t.xi_reach / e;
    let cone = Cone::half_line(true);
    let gauss = LocalizedSpectrum::from_fn(1, &ladder, &t, top, |xi, _| Complex64::new((-xi[0] * xi[0]).exp(), 0.0));
    assert_eq!(cone_decay_classify(&gauss, &cone, &t).unwrap().0, ConeClass::InGinf);
    let scaled =
        LocalizedSpectrum::from_fn(1, &ladder, &t, top, |xi, e| Complex64::new((-(e * xi[0]).powi(2)).exp(), 0.0));
    let (c, prof) = cone_decay_classify(&scaled, &cone, &t).unwrap();
    assert_eq!(c, ConeClass::InGOnly);
    assert!((prof.growth[3] - 8.0).abs() < 0.3, "{:?}", prof.growth);
    let flat = LocalizedSpectrum::from_fn(1, &ladder, &t, top, |_, _| Complex64::new(1.0, 0.0));
    assert_eq!(cone_decay_classify(&flat, &cone, &t).unwrap().0, ConeClass::Neither);
}

#[test]
fn growth_is_monotone_in_l() {
    let ladder = EpsilonLadder::default();
    let t = tol();
    let s = LocalizedSpectrum::from_fn(2, &ladder, &t, |e| t.xi_reach / e, |xi, e| {
        Complex64::new((-(e * e) * (xi[0] * xi[0] + xi[1] * xi[1])).exp(), 0.0)
    });
    for cone in Cone::default_grid(2) {
        let (_, p) = cone_decay_classify(&s, &cone, &t).unwrap();
        for w in p.growth.windows(2) {
            assert!(w[1] >= w[0] - 1e-6);
        }
    }
    assert!(Cone::planar(0.0, 0.0).is_err());
}

fn singular_cells(t: &BasicFunctional, mode: WfMode) -> Vec<usize> {
    let wf = wavefront(t, &WavefrontOptions::for_dim(1), &tol()).unwrap();
    project_singsupp(&wf, mode).into_iter().map(|c| c[0]).collect()
}

#[test]
fn delta_heaviside_gaussian_wave_fronts() {
    let ladder = EpsilonLadder::default();
    let g = line();
    let x = Expr::var(crate::Var::X);
    let delta = BasicFunctional::delta(&g, &ladder, [0.0, 0.0], MultiIndex::ZERO).unwrap();
    assert_eq!(singular_cells(&delta, WfMode::G), vec![8]);
    assert_eq!(singular_cells(&delta, WfMode::Ginf), vec![8]);
    let heaviside = BasicFunctional::density(&g, &ladder, x.clone().step(), MultiIndex::ZERO).unwrap();
    let wf = wavefront(&heaviside, &WavefrontOptions::for_dim(1), &tol()).unwrap();
    assert_eq!(project_singsupp(&wf, WfMode::G).into_iter().map(|c| c[0]).collect::<Vec<_>>(), vec![8]);
    let cell = wf.cell([8, 0]).unwrap();
    assert!(cell.classes.iter().all(|c| *c == WfClass::Singular));
    let gauss = BasicFunctional::density(&g, &ladder, (-(x.clone() * x)).exp(), MultiIndex::ZERO).unwrap();
    assert!(singular_cells(&gauss, WfMode::Ginf).is_empty());
}

#[test]
fn mollifier_times_integral_is_only_g_regular() {
    let ladder = EpsilonLadder::default();
    let g = line();
    let eps = Expr::var(crate::Var::Eps);
    let phi = Expr::bump(Expr::var(crate::Var::X) / eps.clone()) / eps;
    let u = RepresentativeNet::from_expr(g.clone(), ladder.clone(), phi).unwrap();
    let t = BasicFunctional::integral(&g, &ladder, None).unwrap().multiply(&u).unwrap();
    let wf = wavefront(&t, &WavefrontOptions::for_dim(1), &tol()).unwrap();
    assert!(project_singsupp(&wf, WfMode::G).is_empty());
    assert_eq!(project_singsupp(&wf, WfMode::Ginf).into_iter().map(|c| c[0]).collect::<Vec<_>>(), vec![8]);
    let c = wf.cell([8, 0]).unwrap();
    assert!(c.classes.iter().all(|c| *c == WfClass::GRegularOnly));
}

#[test]
fn projection_matches_direct_test() {
    let ladder = EpsilonLadder::default();
    let g = line();
    let x = Expr::var(crate::Var::X);
    let t = BasicFunctional::density(&g, &ladder, (x.clone() - Expr::constant(1.0)).abs(), MultiIndex::ZERO)
        .unwrap()
        .add(&BasicFunctional::delta(&g, &ladder, [-1.5, 0.0], MultiIndex::ZERO).unwrap())
        .unwrap();
    let opts = WavefrontOptions::for_dim(1);
    for mode in [WfMode::G, WfMode::Ginf] {
        let wf = wavefront(&t, &opts, &tol()).unwrap();
        let direct = singsupp_direct(&t, &opts, mode, &tol()).unwrap();
        assert_eq!(project_singsupp(&wf, mode), direct);
        assert!(!direct.is_empty());
    }
}

