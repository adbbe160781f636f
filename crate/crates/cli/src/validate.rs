//! Checks a parsed scenario against module preconditions before any
//! computation starts.

use crate::dsl::{self, FunExpr};
use crate::scenario::{ConeSpec, Scenario, Task, ToleranceOverrides};
use colombeau_core::genfun::Region;
use colombeau_core::{Cone, EpsilonLadder, Expr, Grid, SymbolNet, Tolerances, Var};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone)]
pub enum Object {
    Net(Expr),
    Embed(FunExpr),
    Functional(FunExpr),
    Symbol(SymbolNet),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Net(_) => "net",
            Object::Embed(_) => "embed",
            Object::Functional(_) => "functional",
            Object::Symbol(_) => "symbol",
        }
    }

    fn is_net(&self) -> bool {
        matches!(self, Object::Net(_) | Object::Embed(_))
    }
}

/// A scenario that passed validation.
#[derive(Debug, Clone)]
pub struct Plan {
    pub grid: Grid,
    pub ladder: EpsilonLadder,
    pub tol: Tolerances,
    pub objects: BTreeMap<String, Object>,
    pub tasks: Vec<Task>,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    /// `"domain"`, `"object <name>"` or `"task <id>"`.
    pub scope: String,
    pub message: String,
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.scope, self.message)
    }
}

struct Issues(Vec<Issue>);

impl Issues {
    fn push(&mut self, scope: impl Into<String>, message: impl Into<String>) {
        self.0.push(Issue { scope: scope.into(), message: message.into() });
    }
}

pub fn tolerances(o: &ToleranceOverrides) -> Tolerances {
    let mut t = Tolerances::default();
    macro_rules! set {
        ($($f:ident),*) => { $( if let Some(v) = &o.$f { t.$f = v.clone(); } )* };
    }
    set!(
        q_max,
        n_max,
        residual_gate,
        tau_regular,
        tau_wavefront,
        stability_tolerance,
        spectral_floor,
        xi_slope_gate,
        gate_octaves,
        l_grid,
        m_grid,
        slow_scale_powers,
        xi_reach,
        samples_per_octave,
        max_order
    );
    t
}

fn check_tolerances(t: &Tolerances, issues: &mut Issues) {
    let positive = [
        ("q_max", t.q_max),
        ("n_max", t.n_max),
        ("residual_gate", t.residual_gate),
        ("tau_regular", t.tau_regular),
        ("tau_wavefront", t.tau_wavefront),
        ("stability_tolerance", t.stability_tolerance),
        ("spectral_floor", t.spectral_floor),
        ("xi_slope_gate", t.xi_slope_gate),
        ("xi_reach", t.xi_reach),
    ];
    for (name, v) in positive {
        if !(v.is_finite() && v > 0.0) {
            issues.push("tolerances", format!("{name} must be positive and finite, got {v}"));
        }
    }
    for (name, grid) in [("l_grid", &t.l_grid), ("m_grid", &t.m_grid), ("slow_scale_powers", &t.slow_scale_powers)] {
        if grid.len() < 2 || grid.iter().any(|v| !v.is_finite()) {
            issues.push("tolerances", format!("{name} needs at least two finite entries"));
        }
    }
    if t.gate_octaves == 0 || t.samples_per_octave == 0 {
        issues.push("tolerances", "gate_octaves and samples_per_octave must be positive");
    }
    if t.max_order == 0 || t.max_order > 4 {
        issues.push("tolerances", "max_order must lie in 1..=4");
    }
}

pub fn region(v: &[Vec<f64>], dim: usize, grid: &Grid) -> Result<Region, String> {
    if v.len() != dim || v.iter().any(|iv| iv.len() != 2 || !(iv[1] > iv[0]) || iv.iter().any(|x| !x.is_finite())) {
        return Err(format!("region needs {dim} interval(s) [lo, hi] with lo < hi"));
    }
    let r = if dim == 1 { Region::interval(v[0][0], v[0][1]) } else { Region::rect([v[0][0], v[1][0]], [v[0][1], v[1][1]]) };
    if !grid.region().contains_region(dim, &r) {
        return Err("region leaves the domain".into());
    }
    Ok(r)
}

pub fn cone(c: &ConeSpec, dim: usize) -> Result<Cone, String> {
    match (c.kind.as_str(), dim) {
        ("full", _) => Ok(Cone::full_sphere(dim)),
        ("+", 1) => Ok(Cone::half_line(true)),
        ("-", 1) => Ok(Cone::half_line(false)),
        ("planar", 2) => match (c.angle, c.half_angle) {
            (Some(a), Some(h)) => Cone::planar(a, h).map_err(|e| e.to_string()),
            _ => Err("a planar cone needs angle and half_angle".into()),
        },
        (k, d) => Err(format!("cone kind '{k}' is not available in dimension {d}")),
    }
}

fn check_points(f: &FunExpr, dim: usize, grid: &Grid, scope: &str, issues: &mut Issues) {
    fn walk(f: &FunExpr, dim: usize, grid: &Grid, scope: &str, issues: &mut Issues) {
        match f {
            FunExpr::Delta { at, alpha } => {
                if at.len() != dim {
                    issues.push(scope, format!("point {at:?} is not {dim}-dimensional"));
                } else if !grid.contains([at[0], if dim == 2 { at[1] } else { 0.0 }]) {
                    issues.push(scope, format!("point {at:?} leaves the domain"));
                }
                if !alpha.is_empty() && alpha.len() != dim {
                    issues.push(scope, format!("derivative index {alpha:?} is not {dim}-dimensional"));
                }
                if alpha.iter().sum::<u32>() > 4 {
                    issues.push(scope, "derivative order above 4");
                }
            }
            FunExpr::Integrate(b) => {
                if !b.is_empty() {
                    let v: Vec<Vec<f64>> = b.iter().map(|iv| iv.to_vec()).collect();
                    if let Err(m) = region(&v, dim, grid) {
                        issues.push(scope, m);
                    }
                }
            }
            FunExpr::Density(e) => match Expr::parse(e) {
                Ok(e) if e.depends_on(Var::Xi) || e.depends_on(Var::Xi2) => {
                    issues.push(scope, "a density may not depend on xi")
                }
                Ok(_) => {}
                Err(err) => issues.push(scope, format!("density '{e}': {err}")),
            },
            FunExpr::Scale(_, g) | FunExpr::Multiply(_, g) | FunExpr::Apply(_, g) => walk(g, dim, grid, scope, issues),
            FunExpr::Sum(gs) => gs.iter().for_each(|g| walk(g, dim, grid, scope, issues)),
            FunExpr::Ref(_) => {}
        }
    }
    walk(f, dim, grid, scope, issues)
}

fn embeddable(f: &FunExpr) -> bool {
    match f {
        FunExpr::Delta { .. } | FunExpr::Density(_) | FunExpr::Integrate(_) => true,
        FunExpr::Sum(gs) => gs.iter().all(embeddable),
        FunExpr::Scale(p, g) => *p == 0.0 && embeddable(g),
        _ => false,
    }
}

fn parse_object(name: &str, d: &crate::scenario::ObjectDef, dim: usize, issues: &mut Issues) -> Option<Object> {
    let scope = format!("object {name}");
    let given = [d.net.is_some(), d.embed.is_some(), d.functional.is_some(), d.symbol.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        issues.push(&scope, "give exactly one of net, embed, functional, symbol");
        return None;
    }
    if d.symbol.is_none() && (d.order.is_some() || d.rho.is_some() || d.delta.is_some()) {
        issues.push(&scope, "order, rho and delta belong to symbols");
    }
    if let Some(src) = &d.net {
        return match Expr::parse(src) {
            Ok(e) if e.depends_on(Var::Xi) || e.depends_on(Var::Xi2) => {
                issues.push(&scope, "a net may not depend on xi");
                None
            }
            Ok(e) => Some(Object::Net(e)),
            Err(e) => {
                issues.push(&scope, format!("net: {e}"));
                None
            }
        };
    }
    if let Some(src) = d.embed.as_ref().or(d.functional.as_ref()) {
        return match dsl::parse(src) {
            Ok(f) if d.embed.is_some() => {
                if !embeddable(&f) {
                    issues.push(&scope, "embed takes an ε-free combination of delta, ddelta, density and integrate");
                    None
                } else {
                    Some(Object::Embed(f))
                }
            }
            Ok(f) => Some(Object::Functional(f)),
            Err(e) => {
                issues.push(&scope, format!("'{src}' {e}"));
                None
            }
        };
    }
    let src = d.symbol.as_ref()?;
    let Some(order) = d.order else {
        issues.push(&scope, "a symbol needs its order");
        return None;
    };
    let built = SymbolNet::parse(dim, src, order).and_then(|s| s.with_type(d.rho.unwrap_or(1.0), d.delta.unwrap_or(0.0)));
    match built {
        Ok(s) => Some(Object::Symbol(s)),
        Err(e) => {
            issues.push(&scope, format!("symbol: {e}"));
            None
        }
    }
}

fn check_cycles(objects: &BTreeMap<String, Object>, issues: &mut Issues) {
    fn visit(
        n: &str,
        objects: &BTreeMap<String, Object>,
        state: &mut BTreeMap<String, u8>,
        issues: &mut Issues,
    ) {
        match state.get(n) {
            Some(1) => {
                issues.push(format!("object {n}"), "definition refers to itself");
                return;
            }
            Some(_) => return,
            None => {}
        }
        state.insert(n.to_string(), 1);
        if let Some(Object::Functional(f)) = objects.get(n) {
            for r in f.references().0 {
                if objects.contains_key(&r) {
                    visit(&r, objects, state, issues);
                }
            }
        }
        state.insert(n.to_string(), 2);
    }
    let mut state = BTreeMap::new();
    for n in objects.keys() {
        visit(n, objects, &mut state, issues);
    }
}

fn require(objects: &BTreeMap<String, Object>, name: &str, want: &str, scope: &str, issues: &mut Issues) {
    match objects.get(name) {
        None => issues.push(scope, format!("undefined object '{name}'")),
        Some(o) => {
            let ok = match want {
                "net" => o.is_net(),
                "functional" => matches!(o, Object::Functional(_)),
                "symbol" => matches!(o, Object::Symbol(_)),
                _ => true,
            };
            if !ok {
                issues.push(scope, format!("'{name}' is a {}, expected a {want}", o.kind()));
            }
        }
    }
}

fn check_cells(cells: &Option<usize>, scope: &str, issues: &mut Issues) {
    if let Some(c) = cells {
        if !(2..=64).contains(c) {
            issues.push(scope, "cells must lie in 2..=64");
        }
    }
}

fn check_task(
    t: &Task,
    plan_objects: &BTreeMap<String, Object>,
    dim: usize,
    grid: &Grid,
    wf_names: &mut BTreeSet<String>,
    issues: &mut Issues,
) {
    let scope = format!("task {}", t.id());
    let s = scope.as_str();
    let region_ok = |r: &Option<Vec<Vec<f64>>>, issues: &mut Issues| {
        if let Some(r) = r {
            if let Err(m) = region(r, dim, grid) {
                issues.push(s, m);
            }
        }
    };
    match t {
        Task::Classify { object, region: r, .. } => {
            require(plan_objects, object, "net", s, issues);
            region_ok(r, issues);
        }
        Task::Wavefront { object, name, cells, .. } => {
            require(plan_objects, object, "functional", s, issues);
            check_cells(cells, s, issues);
            let n = name.clone().unwrap_or_else(|| object.clone());
            if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                issues.push(s, format!("wave front name '{n}' must be alphanumeric, '-' or '_'"));
            }
            if !wf_names.insert(n.clone()) {
                issues.push(s, format!("wave front name '{n}' is used twice"));
            }
        }
        Task::Singsupp { object, mode, cells, .. } => {
            require(plan_objects, object, "functional", s, issues);
            check_cells(cells, s, issues);
            if !["G", "Ginf", "both"].contains(&mode.as_str()) {
                issues.push(s, format!("mode '{mode}' is not G, Ginf or both"));
            }
        }
        Task::Regularize { object, q, probes, .. } => {
            require(plan_objects, object, "functional", s, issues);
            if q.is_empty() || q.iter().any(|v| *v == 0 || *v > 8) {
                issues.push(s, "q needs at least one entry in 1..=8");
            }
            if probes.is_empty() {
                issues.push(s, "at least one probe is needed");
            }
            for p in probes {
                match Expr::parse(p) {
                    Ok(e) if e.depends_on(Var::Xi) || e.depends_on(Var::Xi2) => {
                        issues.push(s, format!("probe '{p}' may not depend on xi"))
                    }
                    Ok(_) => {}
                    Err(e) => issues.push(s, format!("probe '{p}': {e}")),
                }
            }
        }
        Task::PsidoApply { symbol, object, region: r, .. } => {
            require(plan_objects, symbol, "symbol", s, issues);
            if !plan_objects.contains_key(object) {
                issues.push(s, format!("undefined object '{object}'"));
            } else if matches!(plan_objects[object], Object::Symbol(_)) {
                issues.push(s, format!("'{object}' is a symbol, expected a net or functional"));
            }
            region_ok(r, issues);
        }
        Task::CertifySymbol { symbol, check, region: r, cone: c, l, cells, .. } => {
            require(plan_objects, symbol, "symbol", s, issues);
            region_ok(r, issues);
            check_cells(cells, s, issues);
            if !["micro-ellipticity", "hypoelliptic", "class", "micro-support"].contains(&check.as_str()) {
                issues.push(s, format!("check '{check}' is not micro-ellipticity, hypoelliptic, class or micro-support"));
            }
            if let Some(c) = c {
                if let Err(m) = cone(c, dim) {
                    issues.push(s, m);
                }
            }
            if l.is_some_and(|l| !l.is_finite()) {
                issues.push(s, "l must be finite");
            }
        }
        Task::TheoremCheck { case, symbol, parametrix, object, region: r, cells, .. } => {
            check_cells(cells, s, issues);
            region_ok(r, issues);
            let need = |slot: &Option<String>, what: &str, kind: &str, issues: &mut Issues| match slot {
                Some(n) => require(plan_objects, n, kind, s, issues),
                None => issues.push(s, format!("case '{case}' needs {what}")),
            };
            match case.as_str() {
                "projection" => need(object, "object", "functional", issues),
                "pseudolocality" | "wf-op-bound" | "noncharacteristic" => {
                    need(symbol, "symbol", "symbol", issues);
                    need(object, "object", "functional", issues);
                }
                "parametrix" => {
                    need(symbol, "symbol", "symbol", issues);
                    need(parametrix, "parametrix", "symbol", issues);
                    need(object, "object", "net", issues);
                }
                _ => issues.push(
                    s,
                    format!("case '{case}' is not projection, pseudolocality, wf-op-bound, noncharacteristic or parametrix"),
                ),
            }
        }
    }
}

pub fn validate(sc: &Scenario) -> Result<Plan, Vec<Issue>> {
    let mut issues = Issues(Vec::new());
    let d = &sc.domain;
    let dim = d.dim;
    let grid = if d.lo.len() != dim || d.hi.len() != dim {
        issues.push("domain", format!("lo and hi need {dim} entries"));
        None
    } else {
        let pad = |v: &[f64]| [v[0], if dim == 2 { v[1] } else { 0.0 }];
        match Grid::new(dim, pad(&d.lo), pad(&d.hi), d.points) {
            Ok(g) => Some(g),
            Err(e) => {
                issues.push("domain", e.to_string());
                None
            }
        }
    };
    let ladder = match EpsilonLadder::dyadic(sc.ladder.k_min, sc.ladder.k_max) {
        Ok(l) => Some(l),
        Err(e) => {
            issues.push("ladder", e.to_string());
            None
        }
    };
    let tol = tolerances(&sc.tolerances);
    check_tolerances(&tol, &mut issues);
    if sc.output.is_empty() {
        issues.push("output", "output directory must not be empty");
    }
    let (Some(grid), Some(ladder)) = (grid, ladder) else {
        return Err(issues.0);
    };
    let mut objects = BTreeMap::new();
    for (name, def) in &sc.objects {
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            issues.push(format!("object {name}"), "names are alphanumeric, '-' or '_'");
            continue;
        }
        if let Some(o) = parse_object(name, def, dim, &mut issues) {
            objects.insert(name.clone(), o);
        }
    }
    for (name, o) in &objects {
        let scope = format!("object {name}");
        if let Object::Functional(f) | Object::Embed(f) = o {
            check_points(f, dim, &grid, &scope, &mut issues);
            let (fs, nets, syms) = f.references();
            for r in fs {
                if sc.objects.contains_key(&r) || objects.contains_key(&r) {
                    require(&objects, &r, "functional", &scope, &mut issues);
                } else {
                    issues.push(&scope, format!("undefined object '{r}'"));
                }
            }
            for r in nets {
                require(&objects, &r, "net", &scope, &mut issues);
            }
            for r in syms {
                require(&objects, &r, "symbol", &scope, &mut issues);
            }
        }
    }
    check_cycles(&objects, &mut issues);
    let mut ids = BTreeSet::new();
    let mut wf_names = BTreeSet::new();
    for t in &sc.tasks {
        if !ids.insert(t.id().to_string()) {
            issues.push(format!("task {}", t.id()), "duplicate task id");
        }
        if t.id().is_empty() {
            issues.push("task", "empty task id");
        }
        check_task(t, &objects, dim, &grid, &mut wf_names, &mut issues);
    }
    if issues.0.is_empty() {
        Ok(Plan { grid, ladder, tol, objects, tasks: sc.tasks.clone(), output: sc.output.clone() })
    } else {
        Err(issues.0)
    }
}
