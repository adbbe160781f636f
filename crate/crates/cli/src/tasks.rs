//! Task execution. Every task is independent and reports one [`Outcome`].

use crate::build::Built;
use crate::report::{fit_json, num, nums, FitRow, Outcome, Status};
use crate::scenario::Task;
use crate::validate::{cone, region, Plan};
use colombeau_core::genfun::Region;
use colombeau_core::microlocal::{project_singsupp, singsupp_direct, wavefront, WavefrontOptions, WaveFrontEstimate};
use colombeau_core::psido::{
    apply_to_functional, check_hypoelliptic, check_micro_ellipticity, micro_support, quantize_apply, theorem_harness,
    HarnessCase, Witness,
};
use colombeau_core::{
    BasicFunctional, Cone, Error, Expr, Mollifier, ModerationClass, RepresentativeNet, SlowScaleCertificate, SymbolNet,
    WfClass, WfMode,
};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

pub type Objects = BTreeMap<String, Result<Arc<Built>, String>>;

struct Ctx<'a> {
    plan: &'a Plan,
    objects: &'a Objects,
}

enum Fail {
    Core(Error),
    Object(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

type R<T> = Result<T, Fail>;

impl Ctx<'_> {
    fn get(&self, name: &str) -> R<&Built> {
        match &self.objects[name] {
            Ok(b) => Ok(b),
            Err(m) => Err(Fail::Object(format!("object '{name}' could not be built: {m}"))),
        }
    }

    fn net(&self, name: &str) -> R<&RepresentativeNet> {
        match self.get(name)? {
            Built::Net(n) => Ok(n),
            _ => unreachable!("validated kind"),
        }
    }

    fn functional(&self, name: &str) -> R<&BasicFunctional> {
        match self.get(name)? {
            Built::Functional(t) => Ok(t),
            _ => unreachable!("validated kind"),
        }
    }

    fn symbol(&self, name: &str) -> R<&SymbolNet> {
        match self.get(name)? {
            Built::Symbol(s) => Ok(s),
            _ => unreachable!("validated kind"),
        }
    }

    fn region(&self, r: &Option<Vec<Vec<f64>>>) -> Region {
        match r {
            Some(v) => region(v, self.plan.grid.dim(), &self.plan.grid).expect("validated region"),
            None => self.plan.grid.region(),
        }
    }

    fn options(&self, cells: Option<usize>) -> WavefrontOptions {
        let mut o = WavefrontOptions::for_dim(self.plan.grid.dim());
        if let Some(c) = cells {
            o.cells = c;
        }
        o
    }
}

pub fn run_task(t: &Task, plan: &Plan, objects: &Objects) -> Outcome {
    let ctx = Ctx { plan, objects };
    match execute(t, &ctx) {
        Ok(o) => o,
        Err(Fail::Object(m)) => Outcome::new(Status::Error, m),
        Err(Fail::Core(e)) => {
            let status = match e {
                Error::AliasingError { .. } | Error::FitRejected { .. } | Error::InsufficientLadder { .. } => {
                    Status::Degraded
                }
                _ => Status::Error,
            };
            Outcome::new(status, e.to_string())
        }
    }
}

fn region_json(r: &Region, dim: usize) -> Value {
    if dim == 1 {
        json!([[num(r.lo[0]), num(r.hi[0])]])
    } else {
        json!([[num(r.lo[0]), num(r.hi[0])], [num(r.lo[1]), num(r.hi[1])]])
    }
}

fn class_json(c: &ModerationClass) -> Value {
    let per: serde_json::Map<String, Value> =
        c.per_order_exponents.iter().map(|(k, v)| (k.to_string(), num(*v))).collect();
    json!({
        "tag": c.tag.as_str(),
        "uniform_exponent": c.uniform_exponent,
        "per_order_exponents": per,
        "floor_conflict": c.floor_conflict,
    })
}

fn cone_json(c: &Cone) -> Value {
    json!({ "angle": num(c.angle()), "half_angle": num(c.half_angle()) })
}

fn cells_json(cells: &[([usize; 2], usize)]) -> Value {
    Value::Array(cells.iter().map(|(c, k)| json!({ "cell": c, "cone": k })).collect())
}

fn witness_json(w: &Witness) -> Value {
    json!({ "x": nums(&w.x), "xi": nums(&w.xi), "eps": num(w.eps), "value": num(w.value) })
}

fn slow_json(c: &Option<SlowScaleCertificate>) -> Value {
    match c {
        None => Value::Null,
        Some(c) => json!({
            "powers": nums(&c.powers),
            "constants": nums(&c.constants),
            "tail_slopes": nums(&c.tail_slopes),
            "pass": c.pass,
        }),
    }
}

fn wf_file(name: &str, object: &str, est: &WaveFrontEstimate) -> Value {
    let cells: Vec<Value> = est
        .cells
        .iter()
        .map(|c| {
            json!({
                "index": c.index,
                "center": nums(&c.center[..est.dim]),
                "classes": c.classes.iter().map(|k| k.as_str()).collect::<Vec<_>>(),
                "radius": nums(&c.radius),
            })
        })
        .collect();
    json!({
        "name": name,
        "object": object,
        "dim": est.dim,
        "cell_width": nums(&est.cell_width[..est.dim]),
        "cones": est.cones.iter().map(cone_json).collect::<Vec<_>>(),
        "cells": cells,
    })
}

fn wf_fits(name: &str, est: &WaveFrontEstimate, l_grid: &[f64]) -> Vec<FitRow> {
    let mut out = Vec::new();
    for c in &est.cells {
        for (j, p) in c.profiles.iter().enumerate() {
            for (l, f) in l_grid.iter().zip(&p.fits) {
                if let Some(f) = f {
                    out.push(FitRow {
                        object: name.to_string(),
                        key: format!("cell={}:{} cone={} l={}", c.index[0], c.index[1], j, l),
                        fit: f.clone(),
                    });
                }
            }
        }
    }
    out
}

fn modes(mode: &str) -> Vec<WfMode> {
    match mode {
        "G" => vec![WfMode::G],
        "Ginf" => vec![WfMode::Ginf],
        _ => vec![WfMode::G, WfMode::Ginf],
    }
}

fn mode_str(m: WfMode) -> &'static str {
    match m {
        WfMode::G => "G",
        WfMode::Ginf => "Ginf",
    }
}

fn execute(t: &Task, ctx: &Ctx<'_>) -> R<Outcome> {
    let tol = &ctx.plan.tol;
    let dim = ctx.plan.grid.dim();
    Ok(match t {
        Task::Classify { object, region: r, .. } => {
            let u = ctx.net(object)?;
            let reg = ctx.region(r);
            let fits = u.seminorm_fits(&reg, tol)?;
            let class = u.classify(&reg, tol)?;
            let mut o = Outcome::new(Status::Ok, format!("{object} is {}", class.tag.as_str()))
                .with("object", json!(object))
                .with("region", region_json(&reg, dim))
                .with("class", class_json(&class));
            o.fits = fits.into_iter().map(|(k, f)| FitRow { object: object.clone(), key: k.label, fit: f }).collect();
            o
        }
        Task::Wavefront { object, name, cells, .. } => {
            let tf = ctx.functional(object)?;
            let est = wavefront(tf, &ctx.options(*cells), tol)?;
            let name = name.clone().unwrap_or_else(|| object.clone());
            let mut counts = BTreeMap::new();
            for c in &est.cells {
                for k in &c.classes {
                    *counts.entry(k.as_str()).or_insert(0usize) += 1;
                }
            }
            let singular: Vec<_> = est
                .cells
                .iter()
                .flat_map(|c| c.classes.iter().enumerate().filter(|(_, k)| **k == WfClass::Singular).map(|(j, _)| (c.index, j)))
                .collect();
            let g = est.members(WfMode::G);
            let ginf = est.members(WfMode::Ginf);
            let mut o = Outcome::new(
                Status::Ok,
                format!("{} G and {} G∞ wave front entries over {} cells", g.len(), ginf.len(), est.cells.len()),
            )
            .with("object", json!(object))
            .with("file", json!(format!("wf_{name}.json")))
            .with("class_counts", json!(counts))
            .with("wf_g", cells_json(&g))
            .with("wf_ginf", cells_json(&ginf))
            .with("singular", cells_json(&singular));
            o.fits = wf_fits(&name, &est, &tol.l_grid);
            o.wavefront = Some((name.clone(), wf_file(&name, object, &est)));
            o
        }
        Task::Singsupp { object, mode, cells, .. } => {
            let tf = ctx.functional(object)?;
            let opts = ctx.options(*cells);
            let est = wavefront(tf, &opts, tol)?;
            let mut o = Outcome::new(Status::Ok, String::new()).with("object", json!(object));
            let mut agree = true;
            let mut parts = Vec::new();
            for m in modes(mode) {
                let proj = project_singsupp(&est, m);
                let direct = singsupp_direct(tf, &opts, m, tol)?;
                agree &= proj == direct;
                parts.push(format!("{} cells in {} mode", proj.len(), mode_str(m)));
                o = o.with(
                    mode_str(m),
                    json!({ "projection": proj.iter().collect::<Vec<_>>(), "direct": direct.iter().collect::<Vec<_>>() }),
                );
            }
            o.summary = format!("singular support: {}", parts.join(", "));
            o.with("projection_matches_direct", json!(agree))
        }
        Task::Regularize { object, q, probes, .. } => {
            let tf = ctx.functional(object)?;
            let rho = Mollifier::standard(dim)?;
            let nets = probes
                .iter()
                .map(|p| RepresentativeNet::from_expr(ctx.plan.grid.clone(), ctx.plan.ladder.clone(), Expr::parse(p)?))
                .collect::<Result<Vec<_>, Error>>()?;
            let mut table = Vec::new();
            let mut fits = Vec::new();
            let mut vals: Vec<Vec<f64>> = Vec::new();
            for &qq in q {
                let rep = tf.regularization_report(&rho, qq, &nets, tol)?;
                let mut row = Vec::new();
                for (p, c) in probes.iter().zip(&rep) {
                    fits.push(FitRow { object: object.clone(), key: format!("q={qq} probe={p}"), fit: c.fit.clone() });
                    row.push(c.fit.exponent);
                }
                table.push(json!({ "q": qq, "valuations": nums(&row) }));
                vals.push(row);
            }
            let mut witnesses = Vec::new();
            for (i, &qq) in q.iter().enumerate() {
                for (j, v) in vals[i].iter().enumerate() {
                    if *v < qq as f64 - 1.2 {
                        witnesses.push(json!({ "q": qq, "probe": probes[j], "valuation": num(*v), "reason": "below q - 1.2" }));
                    }
                    if i > 0 && !(v > &vals[i - 1][j]) {
                        witnesses.push(json!({ "q": qq, "probe": probes[j], "valuation": num(*v), "reason": "not increasing in q" }));
                    }
                }
            }
            let pass = witnesses.is_empty();
            let mut o = Outcome::new(
                Status::verdict(pass),
                format!("valuation of (T_q - T)(u) for {} probe(s) and q in {:?}", probes.len(), q),
            )
            .with("object", json!(object))
            .with("table", Value::Array(table))
            .with("note", json!("convergence is checked on the listed probes only"));
            o.witnesses = witnesses;
            o.fits = fits;
            o
        }
        Task::PsidoApply { symbol, object, region: r, .. } => {
            let a = ctx.symbol(symbol)?;
            match ctx.get(object)? {
                Built::Net(u) => {
                    let v = quantize_apply(a, u)?;
                    let reg = ctx.region(r);
                    let class = v.classify(&reg, tol)?;
                    let fits = v.seminorm_fits(&reg, tol)?;
                    let mut o = Outcome::new(Status::Ok, format!("{symbol}(x, D) {object} is {}", class.tag.as_str()))
                        .with("region", region_json(&reg, dim))
                        .with("class", class_json(&class));
                    o.fits = fits
                        .into_iter()
                        .map(|(k, f)| FitRow { object: format!("{symbol}({object})"), key: k.label, fit: f })
                        .collect();
                    o
                }
                Built::Functional(tf) => {
                    let at = apply_to_functional(a, tf, None)?;
                    Outcome::new(Status::Ok, format!("{symbol}(x, D) {object} has order {}", at.order()))
                        .with("atoms", json!(at.atoms().len()))
                        .with("densities", json!(at.densities().len()))
                        .with("order", json!(at.order()))
                        .with(
                            "certificate",
                            match at.certificate() {
                                Some(c) => json!({
                                    "region": region_json(&c.region, dim),
                                    "order": c.order,
                                    "n": c.n,
                                }),
                                None => Value::Null,
                            },
                        )
                }
                Built::Symbol(_) => unreachable!("validated kind"),
            }
        }
        Task::CertifySymbol { symbol, check, region: r, cone: c, l, cells, .. } => {
            let a = ctx.symbol(symbol)?;
            let reg = ctx.region(r);
            let gamma = match c {
                Some(c) => cone(c, dim).expect("validated cone"),
                None => Cone::full_sphere(dim),
            };
            let ladder = &ctx.plan.ladder;
            match check.as_str() {
                "micro-ellipticity" => {
                    let rep = check_micro_ellipticity(a, &reg, &gamma, ladder, tol)?;
                    let mut o = Outcome::new(
                        Status::verdict(rep.pass),
                        format!("{symbol} is {}slow-scale micro-elliptic on the region and cone", if rep.pass { "" } else { "not " }),
                    )
                    .with("region", region_json(&reg, dim))
                    .with("cone", cone_json(&gamma))
                    .with("r", nums(&rep.r))
                    .with("s", nums(&rep.s))
                    .with("r_slow_scale", slow_json(&rep.r_fit))
                    .with("s_slow_scale", slow_json(&rep.s_fit));
                    o.witnesses = rep.witness.iter().map(witness_json).collect();
                    o
                }
                "hypoelliptic" => {
                    let ll = l.unwrap_or(a.order());
                    let rep = check_hypoelliptic(a, &reg, ll, ladder, tol)?;
                    let ratios: Vec<Value> = rep
                        .omega2
                        .iter()
                        .map(|(al, be, net, cert)| {
                            json!({ "alpha": al.0, "beta": be.0, "max": num(net.iter().copied().fold(0.0, f64::max)), "slow_scale": cert.pass })
                        })
                        .collect();
                    let mut o = Outcome::new(
                        Status::verdict(rep.pass),
                        format!("{symbol} is {}hypoelliptic of order {ll} on the region", if rep.pass { "" } else { "not " }),
                    )
                    .with("region", region_json(&reg, dim))
                    .with("l", num(ll))
                    .with("omega1", nums(&rep.omega1))
                    .with("omega1_fit", rep.omega1_fit.as_ref().map_or(Value::Null, fit_json))
                    .with("r", nums(&rep.r))
                    .with("r_slow_scale", slow_json(&rep.r_fit))
                    .with("ratios", Value::Array(ratios));
                    o.witnesses = rep.witness.iter().map(witness_json).collect();
                    if let Some(f) = &rep.omega1_fit {
                        o.fits.push(FitRow { object: symbol.clone(), key: "omega1".into(), fit: f.clone() });
                    }
                    o
                }
                "class" => {
                    let fits = a.class_estimate(&reg, ladder, tol)?;
                    let growth = fits.iter().map(|f| f.2.growth()).fold(f64::NEG_INFINITY, f64::max);
                    let pass = fits.iter().all(|f| f.2.floor_flag || (f.2.growth() <= tol.n_max && f.2.residual <= tol.residual_gate));
                    let rows: Vec<Value> =
                        fits.iter().map(|(al, be, f)| json!({ "alpha": al.0, "beta": be.0, "fit": fit_json(f) })).collect();
                    let mut o = Outcome::new(
                        Status::verdict(pass),
                        format!("symbol estimates of {symbol} grow at most like ε^-{}", growth.max(0.0)),
                    )
                    .with("region", region_json(&reg, dim))
                    .with("estimates", Value::Array(rows));
                    o.fits = fits
                        .into_iter()
                        .map(|(al, be, f)| FitRow { object: symbol.clone(), key: format!("alpha={:?} beta={:?}", al.0, be.0), fit: f })
                        .collect();
                    o
                }
                _ => {
                    let cones = c.as_ref().map(|_| vec![gamma]);
                    let cells = cells.unwrap_or(if dim == 1 { 16 } else { 8 });
                    let rep = micro_support(a, &ctx.plan.grid, ladder, cells, cones, tol)?;
                    let g = rep.members(WfMode::G);
                    let ginf = rep.members(WfMode::Ginf);
                    Outcome::new(Status::Ok, format!("micro-support of {symbol}: {} G and {} G∞ entries", g.len(), ginf.len()))
                        .with("cones", Value::Array(rep.cones.iter().map(cone_json).collect()))
                        .with("musupp_g", cells_json(&g))
                        .with("musupp_ginf", cells_json(&ginf))
                }
            }
        }
        Task::TheoremCheck { case, symbol, parametrix, object, region: r, cells, .. } => {
            let opts = ctx.options(*cells);
            let name = |o: &Option<String>| o.clone().expect("validated reference");
            let rep = match case.as_str() {
                "projection" => theorem_harness(&HarnessCase::Projection { t: ctx.functional(&name(object))? }, &opts, tol)?,
                "pseudolocality" => theorem_harness(
                    &HarnessCase::Pseudolocality { a: ctx.symbol(&name(symbol))?, t: ctx.functional(&name(object))?, cutoff: None },
                    &opts,
                    tol,
                )?,
                "wf-op-bound" => theorem_harness(
                    &HarnessCase::WfOpBound { a: ctx.symbol(&name(symbol))?, t: ctx.functional(&name(object))?, cutoff: None },
                    &opts,
                    tol,
                )?,
                "noncharacteristic" => theorem_harness(
                    &HarnessCase::Noncharacteristic { p: ctx.symbol(&name(symbol))?, t: ctx.functional(&name(object))?, cutoff: None },
                    &opts,
                    tol,
                )?,
                _ => theorem_harness(
                    &HarnessCase::ParametrixIdentity {
                        a: ctx.symbol(&name(symbol))?,
                        p: ctx.symbol(&name(parametrix))?,
                        u: ctx.net(&name(object))?,
                        region: ctx.region(r),
                    },
                    &opts,
                    tol,
                )?,
            };
            let mut o = Outcome::new(Status::verdict(rep.pass), format!("{} {}", rep.case, if rep.pass { "holds" } else { "fails" }))
                .with("case", json!(rep.case))
                .with("detail", json!(rep.detail));
            o.witnesses = rep.witnesses.iter().map(|(c, k)| json!({ "cell": c, "cone": k })).collect();
            o
        }
    })
}
