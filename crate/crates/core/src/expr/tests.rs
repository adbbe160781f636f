use super::*;

fn at(x: f64) -> Env {
    Env::new().with(Var::X, x)
}

#[test]
fn parses_precedence_and_unary_minus() {
    let e = Expr::parse("-2^2 + 3*x/2").unwrap();
    assert_eq!(e.eval_real(&at(2.0)), -4.0 + 3.0);
    let e = Expr::parse("2^3^2").unwrap();
    assert_eq!(e.eval_real(&Env::new()), 512.0);
}

#[test]
fn parse_errors_carry_position() {
    match Expr::parse("x + foo") {
        Err(crate::Error::Parse { position, .. }) => assert_eq!(position, 4),
        other => panic!("unexpected {other:?}"),
    }
    assert!(Expr::parse("sin(x").is_err());
    assert!(Expr::parse("exp(x, 1)").is_err());
}

#[test]
fn derivative_of_sine_matches_cosine() {
    let e = Expr::parse("sin(x/eps)").unwrap();
    let d = e.diff(Var::X);
    let env = Env::new().with(Var::X, 0.3).with(Var::Eps, 0.01);
    let expected = (0.3f64 / 0.01).cos() / 0.01;
    assert!((d.eval_real(&env) - expected).abs() < 1e-9);
}

#[test]
fn flat_exp_derivatives_match_finite_differences() {
    for order in 0..4 {
        for &t in &[0.2, 0.5, 1.3] {
            let h = 1e-5;
            let fd = (flat_exp_derivative(order, t + h) - flat_exp_derivative(order, t - h))
                / (2.0 * h);
            let exact = flat_exp_derivative(order + 1, t);
            assert!((fd - exact).abs() < 1e-6 * (1.0 + exact.abs()), "order {order} t {t}");
        }
    }
    assert_eq!(flat_exp_derivative(3, -0.1), 0.0);
}

#[test]
fn bump_is_smooth_and_compact() {
    let b = Expr::parse("bump(x)").unwrap();
    assert_eq!(b.eval_real(&at(1.0)), 0.0);
    assert_eq!(b.eval_real(&at(-1.5)), 0.0);
    assert!((b.eval_real(&at(0.0)) - (-1.0f64).exp()).abs() < 1e-15);
    let d2 = b.diff(Var::X).diff(Var::X);
    assert_eq!(d2.eval_real(&at(1.0)), 0.0);
    assert!(d2.eval_real(&at(0.999)).is_finite());
}

#[test]
fn plateau_is_one_on_inner_ball() {
    let p = Expr::parse("plateau(x, 0.5)").unwrap();
    for &x in &[0.0, 0.1, 0.25, -0.25] {
        assert!((p.eval_real(&at(x)) - 1.0).abs() < 1e-12);
    }
    assert_eq!(p.eval_real(&at(0.5)), 0.0);
    let v = p.eval_real(&at(0.4));
    assert!(v > 0.0 && v < 1.0);
}

#[test]
fn complex_symbols_evaluate() {
    let a = Expr::parse("i*xi").unwrap();
    let v = a.eval(&Env::new().with(Var::Xi, 2.0));
    assert_eq!(v, Complex64::new(0.0, 2.0));
    let j = Expr::parse("jxi").unwrap();
    assert!((j.eval_real(&Env::new().with(Var::Xi, 1.0)) - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn substitution_translates() {
    let e = Expr::parse("x^2").unwrap();
    let shifted = e.substitute(Var::X, &(Expr::var(Var::X) - Expr::constant(1.0)));
    assert_eq!(shifted.eval_real(&at(3.0)), 4.0);
    assert!(!Expr::parse("x*y").unwrap().depends_on(Var::Eps));
}
