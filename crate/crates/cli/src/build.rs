//! Turns validated object definitions into core values.

use crate::dsl::FunExpr;
use crate::validate::{Object, Plan};
use colombeau_core::genfun::{DeltaAtom, DistributionSpec, Region};
use colombeau_core::psido::apply_to_functional;
use colombeau_core::{
    BasicFunctional, Complex64, Expr, Mollifier, MultiIndex, RepresentativeNet, SymbolNet, Var,
};
use std::collections::BTreeMap;

pub enum Built {
    Net(RepresentativeNet),
    Functional(BasicFunctional),
    Symbol(SymbolNet),
}

fn multi(alpha: &[u32]) -> MultiIndex {
    match alpha.len() {
        0 => MultiIndex::ZERO,
        1 => MultiIndex::d1(alpha[0]),
        _ => MultiIndex([alpha[0], alpha[1]]),
    }
}

fn point(at: &[f64]) -> [f64; 2] {
    [at[0], at.get(1).copied().unwrap_or(0.0)]
}

fn indicator(boxes: &[[f64; 2]]) -> Expr {
    let mut e = Expr::constant(1.0);
    for (iv, var) in boxes.iter().zip([Var::X, Var::Y]) {
        let v = Expr::var(var);
        e = e * (v.clone() - Expr::constant(iv[0])).step() * (Expr::constant(iv[1]) - v).step();
    }
    e
}

fn region_of(boxes: &[[f64; 2]], dim: usize) -> Region {
    if dim == 1 {
        Region::interval(boxes[0][0], boxes[0][1])
    } else {
        Region::rect([boxes[0][0], boxes[1][0]], [boxes[0][1], boxes[1][1]])
    }
}

pub struct Builder<'a> {
    plan: &'a Plan,
    done: BTreeMap<String, std::result::Result<std::sync::Arc<Built>, String>>,
}

impl<'a> Builder<'a> {
    pub fn new(plan: &'a Plan) -> Self {
        Self { plan, done: BTreeMap::new() }
    }

    /// Builds every object, in dependency order; failures are kept per name.
    pub fn build_all(mut self) -> BTreeMap<String, std::result::Result<std::sync::Arc<Built>, String>> {
        let names: Vec<String> = self.plan.objects.keys().cloned().collect();
        for n in names {
            let _ = self.get(&n);
        }
        self.done
    }

    fn get(&mut self, name: &str) -> std::result::Result<std::sync::Arc<Built>, String> {
        if let Some(v) = self.done.get(name) {
            return v.clone();
        }
        let obj = self.plan.objects[name].clone();
        let built = self.build(&obj).map(std::sync::Arc::new);
        self.done.insert(name.to_string(), built.clone());
        built
    }

    fn build(&mut self, obj: &Object) -> std::result::Result<Built, String> {
        let p = self.plan;
        let err = |e: colombeau_core::Error| e.to_string();
        Ok(match obj {
            Object::Net(e) => Built::Net(RepresentativeNet::from_expr(p.grid.clone(), p.ladder.clone(), e.clone()).map_err(err)?),
            Object::Embed(f) => {
                let mut spec = DistributionSpec { atoms: Vec::new(), density: None };
                collect_distribution(f, &mut spec);
                let rho = Mollifier::standard(p.grid.dim()).map_err(err)?;
                Built::Net(RepresentativeNet::embed_distribution(p.grid.clone(), p.ladder.clone(), &spec, &rho).map_err(err)?)
            }
            Object::Functional(f) => Built::Functional(self.functional(f)?),
            Object::Symbol(s) => Built::Symbol(s.clone()),
        })
    }

    fn functional(&mut self, f: &FunExpr) -> std::result::Result<BasicFunctional, String> {
        let p = self.plan;
        let (g, l) = (&p.grid, &p.ladder);
        let err = |e: colombeau_core::Error| e.to_string();
        match f {
            FunExpr::Delta { at, alpha } => {
                let a = multi(alpha);
                let t = BasicFunctional::delta(g, l, point(at), a).map_err(err)?;
                if a.order() % 2 == 1 {
                    t.scale(&vec![Complex64::new(-1.0, 0.0); l.len()]).map_err(err)
                } else {
                    Ok(t)
                }
            }
            FunExpr::Integrate(boxes) => {
                let r = if boxes.is_empty() { None } else { Some(region_of(boxes, g.dim())) };
                BasicFunctional::integral(g, l, r).map_err(err)
            }
            FunExpr::Density(src) => {
                let e = Expr::parse(src).map_err(err)?;
                BasicFunctional::density(g, l, e, MultiIndex::ZERO).map_err(err)
            }
            FunExpr::Scale(pw, h) => {
                let t = self.functional(h)?;
                let c: Vec<Complex64> = l.values().iter().map(|e| Complex64::new(e.powf(*pw), 0.0)).collect();
                t.scale(&c).map_err(err)
            }
            FunExpr::Sum(hs) => {
                let mut acc = BasicFunctional::zero(g, l);
                for h in hs {
                    acc = acc.add(&self.functional(h)?).map_err(err)?;
                }
                Ok(acc)
            }
            FunExpr::Multiply(u, h) => {
                let t = self.functional(h)?;
                match &*self.get(u)? {
                    Built::Net(n) => t.multiply(n).map_err(err),
                    _ => Err(format!("'{u}' is not a net")),
                }
            }
            FunExpr::Apply(a, h) => {
                let t = self.functional(h)?;
                match &*self.get(a)? {
                    Built::Symbol(s) => apply_to_functional(s, &t, None).map_err(err),
                    _ => Err(format!("'{a}' is not a symbol")),
                }
            }
            FunExpr::Ref(n) => match &*self.get(n)? {
                Built::Functional(t) => Ok(t.clone()),
                _ => Err(format!("'{n}' is not a functional")),
            },
        }
    }
}

fn collect_distribution(f: &FunExpr, spec: &mut DistributionSpec) {
    match f {
        FunExpr::Delta { at, alpha } => {
            // an embedded atom is already the distributional derivative
            spec.atoms.push(DeltaAtom { coef: Complex64::new(1.0, 0.0), alpha: multi(alpha), location: point(at) });
        }
        FunExpr::Density(src) => add_density(spec, Expr::parse(src).expect("validated density")),
        FunExpr::Integrate(boxes) => add_density(spec, indicator(boxes)),
        FunExpr::Sum(gs) => gs.iter().for_each(|g| collect_distribution(g, spec)),
        FunExpr::Scale(_, g) => collect_distribution(g, spec),
        FunExpr::Multiply(..) | FunExpr::Apply(..) | FunExpr::Ref(_) => unreachable!("rejected by validation"),
    }
}

fn add_density(spec: &mut DistributionSpec, e: Expr) {
    spec.density = Some(match spec.density.take() {
        Some(d) => d + e,
        None => e,
    });
}
