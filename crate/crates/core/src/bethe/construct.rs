use num_complex::Complex64;

use super::actions::{g0_function, g_function};
use super::state::{operator_norm, StateVector};
use super::vacua::{left_basis_state, left_vacuum, right_vacuum, subsets, vacuum_prefactor_product};
use crate::error::{Error, Result};
use crate::functional::{abar_func, TQSolution};
use crate::gauge::{gauged_double_row_left, select_gauge_left, select_gauge_right, GaugeIndex};
use crate::model::ModelParams;
use crate::report::Report;

const DEGENERATE_NORM: f64 = 1e-12;
const OVERLAP_FLOOR: f64 = 1e-12;

/// Bethe state `Cbar_{m}(l_1) Cbar_{m+2}(l_2) ... Cbar_{m+2(N-1)}(l_N) |Omega>`
/// at the selected left gauge `(alpha, m)`, with `|Omega>` the right vacuum
/// at the selected right gauge.
pub fn bethe_state(tq: &TQSolution, p: &ModelParams) -> Result<StateVector> {
    bethe_state_from_roots(&tq.roots, p)
}

pub fn bethe_state_from_roots(roots: &[Complex64], p: &ModelParams) -> Result<StateVector> {
    p.validate()?;
    if roots.len() != p.n_sites {
        return Err(Error::Dimension(format!("{} roots for N = {}", roots.len(), p.n_sites)));
    }
    let gl = select_gauge_left(p)?;
    let (_, gr) = select_gauge_right(p)?;
    let mut psi = right_vacuum(gr.alpha, gr.m, p);
    let mut scale = psi.norm();
    for (j, &l) in roots.iter().enumerate().rev() {
        let g = gl.shifted(2 * j as i32);
        g.validate(p.eta)?;
        let ops = gauged_double_row_left(&g, l, p)?;
        let c = ops.block(1, 0);
        scale *= operator_norm(c);
        psi = psi.apply(c);
    }
    let norm = psi.norm();
    if !(norm.is_finite() && norm > DEGENERATE_NORM * scale) {
        return Err(Error::DegenerateState);
    }
    Ok(psi)
}

/// `f(theta) = -sinh(2 theta - eta) Lambda(-theta) e^{-theta} / (2 sinh(2 theta - 2 eta) sinh(theta + alpha_+) cosh(theta + beta_+))`.
fn overlap_factor(th: Complex64, lam: Complex64, p: &ModelParams) -> Complex64 {
    let eta = p.eta;
    -(th * 2.0 - eta).sinh() * lam * (-th).exp()
        / ((th * 2.0 - eta * 2.0).sinh() * 2.0 * (th + p.alpha_plus).sinh() * (th + p.beta_plus).cosh())
}

fn subset_label(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|j| j.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn rel_pair(a: Complex64, b: Complex64) -> (f64, f64) {
    ((a - b).norm(), a.norm().max(b.norm()))
}

/// Overlaps `F_S = <alpha, m; theta_S|Psi>` with the left basis at the
/// selected left gauge against the closed product in `Lambda(-theta_j)`,
/// plus the one-step recursion between `F_S` and `F_{S+j}`.
pub fn scalar_product_check(
    psi: &StateVector,
    lam_eval: &dyn Fn(Complex64) -> Result<Complex64>,
    p: &ModelParams,
) -> Result<Report> {
    p.validate()?;
    let gl = select_gauge_left(p)?;
    let n = p.n_sites;
    let all = subsets(n);
    let mut overlaps = Vec::with_capacity(all.len());
    for s in &all {
        overlaps.push(left_basis_state(&gl, s, p)?.pair_scaled(psi));
    }
    let (f0, f0_scale) = overlaps[0];
    if f0.norm() < OVERLAP_FLOOR * f0_scale {
        return Err(Error::UninformativeOverlap(f0.norm() / f0_scale));
    }
    let lam: Vec<Complex64> = p
        .inhomogeneities
        .iter()
        .map(|&th| lam_eval(-th))
        .collect::<Result<_>>()?;
    let mut report = Report::new();
    for (s, &(f, _)) in all.iter().zip(&overlaps) {
        let predicted: Complex64 = f0
            * s.iter()
                .map(|&j| overlap_factor(p.inhomogeneities[j - 1], lam[j - 1], p))
                .product::<Complex64>();
        let (r, sc) = rel_pair(f, predicted);
        report.add(
            format!("scalar_product{}", subset_label(s)),
            "F_S = F_0 Π_{j∈S} -sinh(2θ_j-η) Λ(-θ_j) e^{-θ_j} / (2 sinh(2θ_j-2η) sinh(θ_j+α₊) cosh(θ_j+β₊))",
            r,
            sc,
        );
    }
    let eta = p.eta;
    for (mask, s) in all.iter().enumerate() {
        for j in 1..=n {
            if s.contains(&j) {
                continue;
            }
            let th = p.inhomogeneities[j - 1];
            let bigger = overlaps[mask | (1 << (j - 1))].0;
            let lhs = lam[j - 1] * overlaps[mask].0;
            let rhs = bigger * (th.exp() * 2.0) * (-th * 2.0 + eta * 2.0).sinh() / (-th * 2.0 + eta).sinh()
                * (-th - p.alpha_plus).sinh()
                * (-th - p.beta_plus).cosh();
            let (r, sc) = rel_pair(lhs, rhs);
            report.add(
                format!("scalar_recursion{}+{j}", subset_label(s)),
                "Λ(-θ_j) F_S = F_{S∪j} 2e^{θ_j} sinh(-2θ_j+2η)/sinh(-2θ_j+η) sinh(-θ_j-α₊) cosh(-θ_j-β₊)",
                r,
                sc,
            );
        }
    }
    Ok(report)
}

/// `G0 = prod_j g0(l_j | m + 2(j-1))` at the selected left gauge.
pub fn g0_product(roots: &[Complex64], p: &ModelParams) -> Result<Complex64> {
    let gl = select_gauge_left(p)?;
    roots
        .iter()
        .enumerate()
        .map(|(j, &l)| g0_function(l, &gl.shifted(2 * j as i32), p))
        .product()
}

/// Reference-state conditions
/// `<alpha, m'; theta_S|Omega> = prod_{j in S} {2 e^{-theta_j} sinh(theta_j+alpha_-) cosh(theta_j+beta_-) Abar(-theta_j)} <alpha+m'|Omega>`
/// with `m' = m + 2N`. With roots, additionally checks for every subset that
/// the overlap of the Bethe state factorizes through `G0` and the g-function
/// ratios, and that `G0` is finite and nonzero.
pub fn reference_conditions_check(p: &ModelParams, roots: Option<&[Complex64]>) -> Result<Report> {
    p.validate()?;
    if p.n_sites > super::actions::ACTION_SUITE_MAX_SITES {
        return Err(Error::Size(format!(
            "reference conditions limited to N <= {}",
            super::actions::ACTION_SUITE_MAX_SITES
        )));
    }
    let n = p.n_sites;
    let gl = select_gauge_left(p)?;
    let (_, gr) = select_gauge_right(p)?;
    let omega = right_vacuum(gr.alpha, gr.m, p);
    let top = GaugeIndex::new(gl.alpha, gl.m + 2.0 * n as f64);
    let base = left_vacuum(top.alpha, top.m, p)?.pair(&omega);
    let mut report = Report::new();
    let mut top_overlaps = Vec::new();
    for s in subsets(n) {
        let lhs = left_basis_state(&top, &s, p)?.pair(&omega);
        top_overlaps.push(lhs);
        let rhs = base
            * s.iter()
                .map(|&j| {
                    let th = p.inhomogeneities[j - 1];
                    (-th).exp() * 2.0 * (th + p.alpha_minus).sinh() * (th + p.beta_minus).cosh() * abar_func(-th, p)
                })
                .product::<Complex64>();
        let (r, sc) = rel_pair(lhs, rhs);
        report.add(
            format!("reference{}", subset_label(&s)),
            "<α,m';θ_S|Ω> = Π_{j∈S} 2e^{-θ_j} sinh(θ_j+α₋) cosh(θ_j+β₋) Ā(-θ_j) <α+m'|Ω>, m' = m+2N",
            r,
            sc,
        );
    }
    if let Some(roots) = roots {
        if roots.len() != n {
            return Err(Error::Dimension(format!("{} roots for N = {n}", roots.len())));
        }
        let g0 = g0_product(roots, p)?;
        let finite = g0.re.is_finite() && g0.im.is_finite();
        report.add(
            "reference_g0[nonzero]",
            "G0 = Π_j g0(λ_j | m+2(j-1)) finite and nonzero",
            if finite && g0.norm() > 0.0 { 0.0 } else { 1.0 },
            1.0,
        );
        let psi = bethe_state_from_roots(roots, p)?;
        let p_ratio = vacuum_prefactor_product(gl.m, p) / vacuum_prefactor_product(top.m, p);
        for (s, &top_overlap) in subsets(n).iter().zip(&top_overlaps) {
            let lhs = left_basis_state(&gl, s, p)?.pair(&psi);
            let mut rhs = p_ratio * top_overlap;
            for (j, &l) in roots.iter().enumerate() {
                rhs *= g_function(l, &gl.shifted(2 * j as i32), s, p)?;
            }
            let (r, sc) = rel_pair(lhs, rhs);
            report.add(
                format!("reference_g0{}", subset_label(s)),
                "<α,m;θ_S|λ> = G0 Π_{j,p∈S} g-ratio(λ_j,θ_p) P(m)/P(m') <α,m';θ_S|Ω>",
                r,
                sc,
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DrawSpec;

    #[test]
    fn reference_conditions_at_two_sites() {
        let (p, _) = DrawSpec::new(2, 51).draw().unwrap();
        let roots = [Complex64::new(0.21, 0.13), Complex64::new(-0.37, 0.44)];
        let r = reference_conditions_check(&p, Some(&roots)).unwrap();
        assert_eq!(r.len(), 4 + 1 + 4);
        for x in &r.residuals {
            assert!(x.relative() < 1e-9, "{} {:e}", x.name, x.relative());
        }
    }

    #[test]
    fn wrong_root_count() {
        let (p, _) = DrawSpec::new(2, 52).draw().unwrap();
        assert!(matches!(
            bethe_state_from_roots(&[Complex64::new(0.1, 0.2)], &p),
            Err(Error::Dimension(_))
        ));
    }
}
