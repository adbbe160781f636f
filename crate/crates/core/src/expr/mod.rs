//! Closed-form scalar expressions in `x, y, ξ, ε` with complex evaluation and
//! symbolic differentiation.
//!
//! Expressions are immutable trees with shared subtrees (`Arc`), so cloning is
//! cheap and derivatives reuse the original nodes. The grammar is parsed by
//! [`Expr::parse`]; see the `parse` module for the accepted syntax.

mod diff;
mod parse;

use crate::util::prelude::*;
use alloc::sync::Arc;
use core::fmt;
use num_complex::Complex64;

/// Independent variables an expression may reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Xi,
    Xi2,
    Eps,
}

impl Var {
    pub const ALL: [Var; 5] = [Var::X, Var::Y, Var::Xi, Var::Xi2, Var::Eps];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Xi => "xi",
            Var::Xi2 => "xi2",
            Var::Eps => "eps",
        }
    }
}

/// Values of the independent variables at one evaluation point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Env(pub [f64; 5]);

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: Var, value: f64) -> Self {
        self.0[var.index()] = value;
        self
    }

    pub fn set(&mut self, var: Var, value: f64) {
        self.0[var.index()] = value;
    }

    pub fn get(&self, var: Var) -> f64 {
        self.0[var.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Unary {
    Neg,
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Abs,
    Sign,
    Step,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Binary {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug)]
pub(crate) enum Node {
    Const(Complex64),
    Var(Var),
    Unary(Unary, Expr),
    Binary(Binary, Expr, Expr),
    PowI(Expr, i32),
    /// k-th derivative of `t ↦ exp(-1/t)` for `t > 0`, zero for `t ≤ 0`.
    FlatExp(u32, Expr),
}

#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Expr {
    pub(crate) fn node(&self) -> &Node {
        &self.0
    }

    fn from_node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn constant(value: f64) -> Self {
        Self::complex(Complex64::new(value, 0.0))
    }

    pub fn complex(value: Complex64) -> Self {
        Self::from_node(Node::Const(value))
    }

    pub fn var(v: Var) -> Self {
        Self::from_node(Node::Var(v))
    }

    pub fn imaginary_unit() -> Self {
        Self::complex(Complex64::i())
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(Complex64::new(0.0, 0.0))
    }

    fn is_one(&self) -> bool {
        self.as_const() == Some(Complex64::new(1.0, 0.0))
    }

    pub(crate) fn unary(op: Unary, a: Expr) -> Self {
        if let Some(c) = a.as_const() {
            let v = eval_unary(op, c);
            if v.re.is_finite() && v.im.is_finite() {
                return Self::complex(v);
            }
        }
        if op == Unary::Neg {
            if let Node::Unary(Unary::Neg, inner) = a.node() {
                return inner.clone();
            }
        }
        Self::from_node(Node::Unary(op, a))
    }

    pub(crate) fn binary(op: Binary, a: Expr, b: Expr) -> Self {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            let v = eval_binary(op, x, y);
            if v.re.is_finite() && v.im.is_finite() {
                return Self::complex(v);
            }
        }
        match op {
            Binary::Add if a.is_zero() => return b,
            Binary::Add | Binary::Sub if b.is_zero() => return a,
            Binary::Sub if a.is_zero() => return Self::unary(Unary::Neg, b),
            Binary::Mul if a.is_zero() || b.is_zero() => return Self::constant(0.0),
            Binary::Mul if a.is_one() => return b,
            Binary::Mul | Binary::Div if b.is_one() => return a,
            Binary::Div if a.is_zero() => return Self::constant(0.0),
            Binary::Pow => {
                if let Some(c) = b.as_const() {
                    if c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() <= 64.0 {
                        return Self::powi(a, c.re as i32);
                    }
                }
            }
            _ => {}
        }
        Self::from_node(Node::Binary(op, a, b))
    }

    pub fn powi(a: Expr, n: i32) -> Self {
        match n {
            0 => Self::constant(1.0),
            1 => a,
            _ => {
                if let Some(c) = a.as_const() {
                    return Self::complex(c.powi(n));
                }
                Self::from_node(Node::PowI(a, n))
            }
        }
    }

    pub fn flat_exp(order: u32, a: Expr) -> Self {
        Self::from_node(Node::FlatExp(order, a))
    }

    pub fn exp(self) -> Self {
        Self::unary(Unary::Exp, self)
    }
    pub fn ln(self) -> Self {
        Self::unary(Unary::Log, self)
    }
    pub fn sin(self) -> Self {
        Self::unary(Unary::Sin, self)
    }
    pub fn cos(self) -> Self {
        Self::unary(Unary::Cos, self)
    }
    pub fn sqrt(self) -> Self {
        Self::unary(Unary::Sqrt, self)
    }
    pub fn abs(self) -> Self {
        Self::unary(Unary::Abs, self)
    }
    pub fn step(self) -> Self {
        Self::unary(Unary::Step, self)
    }
    pub fn pow(self, other: Expr) -> Self {
        Self::binary(Binary::Pow, self, other)
    }

    /// Smooth bump `exp(-1/(1-t²))` on `|t| < 1`, zero outside.
    pub fn bump(t: Expr) -> Self {
        Self::flat_exp(0, Self::constant(1.0) - Self::powi(t, 2))
    }

    /// Smooth cutoff in `s² = t²`: identically one for `|t| ≤ r/2`, zero for `|t| ≥ r`.
    pub fn plateau_sq(s2: Expr, r: f64) -> Self {
        let outer = Self::flat_exp(0, Self::constant(r * r) - s2.clone());
        let inner = Self::flat_exp(0, s2 - Self::constant(r * r / 4.0));
        outer.clone() / (outer + inner)
    }

    /// ⟨ξ⟩ over the dual variables `xi`, `xi2`.
    pub fn japanese_xi() -> Self {
        (Self::constant(1.0)
            + Self::powi(Self::var(Var::Xi), 2)
            + Self::powi(Self::var(Var::Xi2), 2))
        .sqrt()
    }

    pub fn eval(&self, env: &Env) -> Complex64 {
        match self.node() {
            Node::Const(c) => *c,
            Node::Var(v) => Complex64::new(env.get(*v), 0.0),
            Node::Unary(op, a) => eval_unary(*op, a.eval(env)),
            Node::Binary(op, a, b) => eval_binary(*op, a.eval(env), b.eval(env)),
            Node::PowI(a, n) => a.eval(env).powi(*n),
            Node::FlatExp(k, a) => Complex64::new(flat_exp_derivative(*k, a.eval(env).re), 0.0),
        }
    }

    pub fn eval_real(&self, env: &Env) -> f64 {
        self.eval(env).re
    }

    pub fn depends_on(&self, var: Var) -> bool {
        match self.node() {
            Node::Const(_) => false,
            Node::Var(v) => *v == var,
            Node::Unary(_, a) | Node::PowI(a, _) | Node::FlatExp(_, a) => a.depends_on(var),
            Node::Binary(_, a, b) => a.depends_on(var) || b.depends_on(var),
        }
    }

    /// Sub-expressions of the form `(v - c)/ε^q` (or `(v - c)·ε^{-q}`): the
    /// points `c` around which the expression varies on the scale `ε^q`.
    /// Returns `(variable, c, q)`.
    pub fn scale_centers(&self) -> Vec<(Var, f64, i32)> {
        let mut out = Vec::new();
        self.collect_centers(&mut out);
        out
    }

    fn collect_centers(&self, out: &mut Vec<(Var, f64, i32)>) {
        let eps_power = |e: &Expr| -> Option<i32> {
            match e.node() {
                Node::Var(Var::Eps) => Some(1),
                Node::PowI(b, n) if matches!(b.node(), Node::Var(Var::Eps)) => Some(*n),
                _ => None,
            }
        };
        let affine = |e: &Expr| -> Option<(Var, f64)> {
            let is_space = |v: &Var| matches!(v, Var::X | Var::Y);
            match e.node() {
                Node::Var(v) if is_space(v) => Some((*v, 0.0)),
                Node::Binary(op @ (Binary::Sub | Binary::Add), a, b) => match (a.node(), b.as_const()) {
                    (Node::Var(v), Some(c)) if is_space(v) && c.im == 0.0 => {
                        Some((*v, if *op == Binary::Sub { c.re } else { -c.re }))
                    }
                    _ => None,
                },
                Node::Binary(Binary::Mul, a, b) => match (a.as_const(), b.node()) {
                    (Some(_), Node::Var(v)) if is_space(v) => Some((*v, 0.0)),
                    _ => None,
                },
                _ => None,
            }
        };
        let mut push = |item: (Var, f64, i32)| {
            if !out.contains(&item) {
                out.push(item);
            }
        };
        match self.node() {
            Node::Binary(Binary::Div, a, b) => {
                if let (Some((v, c)), Some(q)) = (affine(a), eps_power(b)) {
                    if q > 0 {
                        push((v, c, q));
                    }
                }
            }
            Node::Binary(Binary::Mul, a, b) => {
                for (x, y) in [(a, b), (b, a)] {
                    if let (Some((v, c)), Some(q)) = (affine(x), eps_power(y)) {
                        if q < 0 {
                            push((v, c, -q));
                        }
                    }
                }
            }
            _ => {}
        }
        match self.node() {
            Node::Const(_) | Node::Var(_) => {}
            Node::Unary(_, a) | Node::PowI(a, _) | Node::FlatExp(_, a) => a.collect_centers(out),
            Node::Binary(_, a, b) => {
                a.collect_centers(out);
                b.collect_centers(out);
            }
        }
    }

    /// False when the tree contains `abs`, `sign` or `step`.
    pub fn is_smooth(&self) -> bool {
        match self.node() {
            Node::Const(_) | Node::Var(_) => true,
            Node::Unary(op, a) => {
                !matches!(op, Unary::Abs | Unary::Sign | Unary::Step) && a.is_smooth()
            }
            Node::PowI(a, _) | Node::FlatExp(_, a) => a.is_smooth(),
            Node::Binary(_, a, b) => a.is_smooth() && b.is_smooth(),
        }
    }

    /// Replaces every occurrence of `var` by `with`.
    pub fn substitute(&self, var: Var, with: &Expr) -> Expr {
        match self.node() {
            Node::Const(_) => self.clone(),
            Node::Var(v) => {
                if *v == var {
                    with.clone()
                } else {
                    self.clone()
                }
            }
            Node::Unary(op, a) => Self::unary(*op, a.substitute(var, with)),
            Node::Binary(op, a, b) => {
                Self::binary(*op, a.substitute(var, with), b.substitute(var, with))
            }
            Node::PowI(a, n) => Self::powi(a.substitute(var, with), *n),
            Node::FlatExp(k, a) => Self::flat_exp(*k, a.substitute(var, with)),
        }
    }

    pub fn parse(source: &str) -> crate::Result<Expr> {
        parse::parse(source)
    }
}

macro_rules! impl_op {
    ($tr:ident, $method:ident, $op:expr) => {
        impl core::ops::$tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, self, rhs)
            }
        }
    };
}
impl_op!(Add, add, Binary::Add);
impl_op!(Sub, sub, Binary::Sub);
impl_op!(Mul, mul, Binary::Mul);
impl_op!(Div, div, Binary::Div);

impl core::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::unary(Unary::Neg, self)
    }
}

fn eval_unary(op: Unary, a: Complex64) -> Complex64 {
    match op {
        Unary::Neg => -a,
        Unary::Exp => a.exp(),
        Unary::Log => a.ln(),
        Unary::Sin => a.sin(),
        Unary::Cos => a.cos(),
        Unary::Sqrt => a.sqrt(),
        Unary::Abs => Complex64::new(a.norm(), 0.0),
        Unary::Sign => Complex64::new(
            if a.re > 0.0 {
                1.0
            } else if a.re < 0.0 {
                -1.0
            } else {
                0.0
            },
            0.0,
        ),
        Unary::Step => Complex64::new(
            if a.re > 0.0 {
                1.0
            } else if a.re < 0.0 {
                0.0
            } else {
                0.5
            },
            0.0,
        ),
    }
}

fn eval_binary(op: Binary, a: Complex64, b: Complex64) -> Complex64 {
    match op {
        Binary::Add => a + b,
        Binary::Sub => a - b,
        Binary::Mul => a * b,
        Binary::Div => a / b,
        Binary::Pow => {
            if b.im == 0.0 && a.im == 0.0 && a.re >= 0.0 {
                Complex64::new(Float::powf(a.re, b.re), 0.0)
            } else {
                a.powc(b)
            }
        }
    }
}

/// `d^k/dt^k exp(-1/t)` for `t > 0`, zero otherwise.
///
/// The derivative is `exp(-1/t) · Q_k(1/t)` with `Q_0 = 1` and
/// `Q_{k+1}(u) = u² (Q_k(u) - Q_k'(u))`.
pub(crate) fn flat_exp_derivative(order: u32, t: f64) -> f64 {
    if !(t > 0.0) {
        return 0.0;
    }
    let u = 1.0 / t;
    if u > 700.0 {
        return 0.0;
    }
    let base = Float::exp(-u);
    if order == 0 {
        return base;
    }
    // coefficients of Q_k in powers of u
    let mut q: Vec<f64> = vec![1.0];
    for _ in 0..order {
        let mut next = vec![0.0; q.len() + 2];
        for (p, c) in q.iter().enumerate() {
            next[p + 2] += c;
            if p > 0 {
                next[p + 1] -= c * p as f64;
            }
        }
        q = next;
    }
    let poly = q.iter().rev().fold(0.0, |acc, c| acc * u + c);
    base * poly
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => {
                if c.im == 0.0 {
                    write!(f, "{}", c.re)
                } else if c.re == 0.0 {
                    write!(f, "{}*i", c.im)
                } else {
                    write!(f, "({}+{}*i)", c.re, c.im)
                }
            }
            Node::Var(v) => f.write_str(v.name()),
            Node::Unary(op, a) => {
                let name = match op {
                    Unary::Neg => return write!(f, "(-{a})"),
                    Unary::Exp => "exp",
                    Unary::Log => "log",
                    Unary::Sin => "sin",
                    Unary::Cos => "cos",
                    Unary::Sqrt => "sqrt",
                    Unary::Abs => "abs",
                    Unary::Sign => "sign",
                    Unary::Step => "step",
                };
                write!(f, "{name}({a})")
            }
            Node::Binary(op, a, b) => {
                let sym = match op {
                    Binary::Add => "+",
                    Binary::Sub => "-",
                    Binary::Mul => "*",
                    Binary::Div => "/",
                    Binary::Pow => "^",
                };
                write!(f, "({a}{sym}{b})")
            }
            Node::PowI(a, n) => write!(f, "({a}^{n})"),
            Node::FlatExp(k, a) => write!(f, "flatexp{k}({a})"),
        }
    }
}

#[cfg(test)]
mod tests;
