//! Cell-wise checks of the pseudolocality, projection, operator bound,
//! noncharacteristic regularity and parametrix statements at a fixed resolution.

use super::ellipticity::check_micro_ellipticity;
use super::functional::apply_to_functional;
use super::quantize::quantize_apply;
use super::support::micro_support;
use super::symbol::SymbolNet;
use crate::asymptotics::ModerationTag;
use crate::dual::BasicFunctional;
use crate::expr::Expr;
use crate::genfun::{Region, RepresentativeNet};
use crate::microlocal::{project_singsupp, singsupp_direct, wavefront, WavefrontOptions, WfMode};
use crate::util::prelude::*;
use crate::{Result, Tolerances};
use alloc::collections::BTreeSet;

pub type Cell = [usize; 2];
pub type MicroCell = (Cell, usize);

#[derive(Debug, Clone)]
pub enum HarnessCase<'a> {
    /// `sing supp AT ⊆ sing supp T` in both modes.
    Pseudolocality { a: &'a SymbolNet, t: &'a BasicFunctional, cutoff: Option<&'a Expr> },
    /// `π(WF(T)) = sing supp T` in both modes.
    Projection { t: &'a BasicFunctional },
    /// `WF_G(AT) ⊆ WF_G(T) ∩ μsupp_G(a)`.
    WfOpBound { a: &'a SymbolNet, t: &'a BasicFunctional, cutoff: Option<&'a Expr> },
    /// `WF_G(PT) ⊆ WF_G(T) ⊆ WF_G(PT) ∪ Ell_sc(p)^c`.
    Noncharacteristic { p: &'a SymbolNet, t: &'a BasicFunctional, cutoff: Option<&'a Expr> },
    /// Classifies `PAu - u` on the region; passes when it is Regular or Negligible.
    ParametrixIdentity { a: &'a SymbolNet, p: &'a SymbolNet, u: &'a RepresentativeNet, region: Region },
}

impl HarnessCase<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            HarnessCase::Pseudolocality { .. } => "pseudolocality",
            HarnessCase::Projection { .. } => "projection",
            HarnessCase::WfOpBound { .. } => "wf_op_bound",
            HarnessCase::Noncharacteristic { .. } => "noncharacteristic",
            HarnessCase::ParametrixIdentity { .. } => "parametrix_identity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarnessReport {
    pub case: &'static str,
    pub pass: bool,
    /// Cells (with cone index where directions matter) that violate the statement.
    pub witnesses: Vec<MicroCell>,
    pub detail: String,
}

fn dilate_cells(s: &BTreeSet<Cell>, dim: usize) -> BTreeSet<Cell> {
    let mut out = BTreeSet::new();
    for c in s {
        for di in -1i64..=1 {
            for dj in if dim == 1 { -0i64..=0 } else { -1i64..=1 } {
                let i = c[0] as i64 + di;
                let j = c[1] as i64 + dj;
                if i >= 0 && j >= 0 {
                    out.insert([i as usize, j as usize]);
                }
            }
        }
    }
    out
}

fn dilate_micro(s: &BTreeSet<MicroCell>, dim: usize) -> BTreeSet<MicroCell> {
    let mut out = BTreeSet::new();
    for (c, k) in s {
        for d in dilate_cells(&BTreeSet::from([*c]), dim) {
            out.insert((d, *k));
        }
    }
    out
}

fn fmt_cells(s: &BTreeSet<MicroCell>) -> String {
    let v: Vec<String> = s.iter().map(|(c, k)| format!("({},{})#{}", c[0], c[1], k)).collect();
    format!("{{{}}}", v.join(" "))
}

fn wf_set(t: &BasicFunctional, opts: &WavefrontOptions, mode: WfMode, tol: &Tolerances) -> Result<BTreeSet<MicroCell>> {
    Ok(wavefront(t, opts, tol)?.members(mode).into_iter().collect())
}

fn subset_report(
    name: &'static str,
    lhs: &BTreeSet<MicroCell>,
    rhs: &BTreeSet<MicroCell>,
    dim: usize,
    label: &str,
) -> (bool, Vec<MicroCell>, String) {
    let slack = dilate_micro(rhs, dim);
    let bad: Vec<MicroCell> = lhs.iter().filter(|c| !slack.contains(c)).copied().collect();
    let detail = format!("{name} {label}: lhs {} ⊆ rhs {}", fmt_cells(lhs), fmt_cells(rhs));
    (bad.is_empty(), bad, detail)
}

/// Run one harness case. Set comparisons are cell-wise with one cell of
/// slack on the right-hand side.
pub fn theorem_harness(case: &HarnessCase<'_>, opts: &WavefrontOptions, tol: &Tolerances) -> Result<HarnessReport> {
    let name = case.name();
    let mut witnesses = Vec::new();
    let mut details = Vec::new();
    let mut pass = true;
    match case {
        HarnessCase::Pseudolocality { a, t, cutoff } => {
            let at = apply_to_functional(a, t, *cutoff)?;
            for mode in [WfMode::G, WfMode::Ginf] {
                let lhs: BTreeSet<MicroCell> = project_singsupp(&wavefront(&at, opts, tol)?, mode).into_iter().map(|c| (c, 0)).collect();
                let rhs: BTreeSet<MicroCell> = project_singsupp(&wavefront(t, opts, tol)?, mode).into_iter().map(|c| (c, 0)).collect();
                let (ok, bad, d) = subset_report(name, &lhs, &rhs, t.dim(), mode_label(mode));
                pass &= ok;
                witnesses.extend(bad);
                details.push(d);
            }
        }
        HarnessCase::Projection { t } => {
            for mode in [WfMode::G, WfMode::Ginf] {
                let proj = project_singsupp(&wavefront(t, opts, tol)?, mode);
                let direct = singsupp_direct(t, opts, mode, tol)?;
                for c in proj.symmetric_difference(&direct) {
                    witnesses.push((*c, 0));
                }
                pass &= proj == direct;
                details.push(format!("projection {}: π(WF) {:?} direct {:?}", mode_label(mode), proj, direct));
            }
        }
        HarnessCase::WfOpBound { a, t, cutoff } => {
            let at = apply_to_functional(a, t, *cutoff)?;
            let lhs = wf_set(&at, opts, WfMode::G, tol)?;
            let wf_t = wf_set(t, opts, WfMode::G, tol)?;
            let mu: BTreeSet<MicroCell> = micro_support(a, t.grid(), t.ladder(), opts.cells, opts.cones.clone(), tol)?
                .members(WfMode::G)
                .into_iter()
                .collect();
            let rhs: BTreeSet<MicroCell> = wf_t.intersection(&dilate_micro(&mu, t.dim())).copied().collect();
            let (ok, bad, d) = subset_report(name, &lhs, &rhs, t.dim(), "G");
            pass &= ok;
            witnesses.extend(bad);
            details.push(d);
        }
        HarnessCase::Noncharacteristic { p, t, cutoff } => {
            let pt = apply_to_functional(p, t, *cutoff)?;
            let wf_pt = wf_set(&pt, opts, WfMode::G, tol)?;
            let wf_t = wf_set(t, opts, WfMode::G, tol)?;
            let est = wavefront(t, opts, tol)?;
            let mut ell_c = BTreeSet::new();
            for c in &est.cells {
                let half = [est.cell_width[0] / 2.0, est.cell_width[1] / 2.0];
                let region = if t.dim() == 1 {
                    Region::interval(c.center[0] - half[0], c.center[0] + half[0])
                } else {
                    Region::rect([c.center[0] - half[0], c.center[1] - half[1]], [c.center[0] + half[0], c.center[1] + half[1]])
                };
                for (j, cone) in est.cones.iter().enumerate() {
                    if !check_micro_ellipticity(p, &region, cone, t.ladder(), tol)?.pass {
                        ell_c.insert((c.index, j));
                    }
                }
            }
            let (ok1, bad1, d1) = subset_report(name, &wf_pt, &wf_t, t.dim(), "WF(PT) ⊆ WF(T)");
            let union: BTreeSet<MicroCell> = wf_pt.union(&ell_c).copied().collect();
            let (ok2, bad2, d2) = subset_report(name, &wf_t, &union, t.dim(), "WF(T) ⊆ WF(PT) ∪ Ell^c");
            pass = ok1 && ok2;
            witnesses.extend(bad1);
            witnesses.extend(bad2);
            details.push(d1);
            details.push(d2);
            details.push(format!("Ell_sc(p)^c {}", fmt_cells(&ell_c)));
        }
        HarnessCase::ParametrixIdentity { a, p, u, region } => {
            let pau = quantize_apply(p, &quantize_apply(a, u)?)?;
            let r = pau.sub(u)?;
            let class = r.classify(region, tol)?;
            pass = matches!(class.tag, ModerationTag::Regular | ModerationTag::Negligible);
            details.push(format!("PAu - u is {} (uniform N {:?})", class.tag.as_str(), class.uniform_exponent));
        }
    }
    Ok(HarnessReport { case: name, pass, witnesses, detail: details.join("; ") })
}

fn mode_label(m: WfMode) -> &'static str {
    match m {
        WfMode::G => "G",
        WfMode::Ginf => "Ginf",
    }
}
