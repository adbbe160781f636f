use super::{Binary, Expr, Node, Unary, Var};

impl Expr {
    /// Symbolic partial derivative with respect to `var`.
    pub fn diff(&self, var: Var) -> Expr {
        if !self.depends_on(var) {
            return Expr::constant(0.0);
        }
        match self.node() {
            Node::Const(_) => Expr::constant(0.0),
            Node::Var(v) => Expr::constant(if *v == var { 1.0 } else { 0.0 }),
            Node::Unary(op, a) => {
                let da = a.diff(var);
                let outer = match op {
                    Unary::Neg => return -da,
                    Unary::Exp => self.clone(),
                    Unary::Log => Expr::constant(1.0) / a.clone(),
                    Unary::Sin => a.clone().cos(),
                    Unary::Cos => -a.clone().sin(),
                    Unary::Sqrt => Expr::constant(0.5) / self.clone(),
                    Unary::Abs => Expr::unary(Unary::Sign, a.clone()),
                    Unary::Sign | Unary::Step => return Expr::constant(0.0),
                };
                outer * da
            }
            Node::Binary(op, a, b) => {
                let da = a.diff(var);
                let db = b.diff(var);
                match op {
                    Binary::Add => da + db,
                    Binary::Sub => da - db,
                    Binary::Mul => da * b.clone() + a.clone() * db,
                    Binary::Div => {
                        (da * b.clone() - a.clone() * db) / Expr::powi(b.clone(), 2)
                    }
                    Binary::Pow => {
                        // a^b (b' ln a + b a'/a)
                        self.clone()
                            * (db * a.clone().ln() + b.clone() * da / a.clone())
                    }
                }
            }
            Node::PowI(a, n) => {
                Expr::constant(*n as f64) * Expr::powi(a.clone(), n - 1) * a.diff(var)
            }
            Node::FlatExp(k, a) => Expr::flat_exp(k + 1, a.clone()) * a.diff(var),
        }
    }

    /// Repeated derivative: `counts[i]` derivatives in `vars[i]`.
    pub fn diff_multi(&self, vars: &[Var], counts: &[usize]) -> Expr {
        let mut e = self.clone();
        for (v, c) in vars.iter().zip(counts) {
            for _ in 0..*c {
                e = e.diff(*v);
            }
        }
        e
    }
}
