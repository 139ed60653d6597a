//! Left and right vacuum actions of the gauged operators as covector/vector
//! identities on the full quantum space.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::{CoStateVector, StateVector};
use super::vacua::{left_basis_state, left_vacuum, right_vacuum, subsets, vacuum_prefactor_product};
use crate::error::{Error, Result};
use crate::functional::abar_func;
use crate::gauge::{
    dot, gauged_double_row_left, gauged_double_row_right, gauged_left_from, gauged_one_row, gauged_right_from, gv,
    kminus_left_entries, kminus_right_entries, select_gauge_right, GaugeIndex, GaugeKind, OneRowSide,
    OPERATOR_SUITE_DRAWS,
};
use crate::model::{double_row_monodromy, ModelParams};
use crate::numerics::ComplexMatrix;
use crate::report::Report;

/// Largest chain for the action suites.
pub const ACTION_SUITE_MAX_SITES: usize = 3;

fn check_size(p: &ModelParams) -> Result<()> {
    p.validate()?;
    if p.n_sites > ACTION_SUITE_MAX_SITES {
        return Err(Error::Size(format!(
            "action suites limited to N <= {ACTION_SUITE_MAX_SITES}"
        )));
    }
    Ok(())
}

fn unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Gauge index with `sinh((m + k) eta)` bounded away from zero for `|k| <= reach`.
pub(crate) fn draw_gauge(rng: &mut ChaCha8Rng, eta: Complex64, reach: i32) -> GaugeIndex {
    loop {
        let r = unit(rng);
        let g = GaugeIndex::new(unit(rng), Complex64::new(0.5 + r.re, 0.5 * r.im));
        if (-reach..=reach).all(|k| ((g.m + f64::from(k)) * eta).sinh().norm() > 0.05) {
            return g;
        }
    }
}

fn draw_u(rng: &mut ChaCha8Rng, p: &ModelParams) -> Complex64 {
    loop {
        let u = unit(rng) * 0.6;
        let ok = p
            .inhomogeneities
            .iter()
            .flat_map(|&th| [u - th, u + th, u - th + p.eta, u + th + p.eta])
            .chain([u * 2.0 + p.eta, u])
            .all(|z| z.sinh().norm() > 0.05);
        if ok {
            return u;
        }
    }
}

/// Running covector sum with the largest term magnitude.
struct CoSum {
    value: Vec<Complex64>,
    scale: f64,
}

impl CoSum {
    fn new(dim: usize) -> Self {
        CoSum {
            value: vec![Complex64::new(0.0, 0.0); dim],
            scale: 0.0,
        }
    }

    fn add(&mut self, c: Complex64, v: &[Complex64], scale: f64) {
        self.scale = self.scale.max(c.norm() * scale);
        for (a, b) in self.value.iter_mut().zip(v) {
            *a += c * b;
        }
    }

    fn residual(&self) -> (f64, f64) {
        (self.value.iter().map(|z| z.norm()).fold(0.0, f64::max), self.scale)
    }
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `<cov| op` added with coefficient `c`, tracking the rounding scale.
fn add_left(sum: &mut CoSum, c: Complex64, cov: &CoStateVector, op: &ComplexMatrix) {
    let (v, s) = cov.apply_scaled(op);
    sum.add(c, &v.amplitudes, s);
}

fn add_right(sum: &mut CoSum, c: Complex64, op: &ComplexMatrix, v: &StateVector) {
    let mut s: f64 = 0.0;
    for i in 0..op.rows() {
        s = s.max(op.row(i).iter().zip(&v.amplitudes).map(|(a, b)| a.norm() * b.norm()).sum());
    }
    sum.add(c, &op.mul_vec(&v.amplitudes), s);
}

fn add_vec(sum: &mut CoSum, c: Complex64, v: &[Complex64]) {
    sum.add(c, v, max_abs(v));
}

fn keep_worst(slot: &mut Option<(f64, f64)>, cur: (f64, f64)) {
    let rel = |(r, s): (f64, f64)| if s > 0.0 { r / s } else { r };
    if slot.map_or(true, |old| rel(cur) >= rel(old)) {
        *slot = Some(cur);
    }
}

fn prod_sites(p: &ModelParams, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
    p.inhomogeneities.iter().map(|&th| f(th)).product()
}

/// Prefactor of the vacuum action of `Cbar_m(u)`:
/// `Kbar^-_21(m-N|u) sinh((m+2) eta)/sinh((m+2-N) eta) prod sinh(u-theta+eta) sinh(u+theta)/sinh^2 eta`.
pub fn g0_function(u: Complex64, g: &GaugeIndex, p: &ModelParams) -> Result<Complex64> {
    let (m, eta) = (g.m, p.eta);
    let n = p.n_sites as f64;
    let k21 = kminus_left_entries(m - n, g.alpha, u, p)?[1][0].0;
    let se2 = eta.sinh() * eta.sinh();
    Ok(k21 * ((m + 2.0) * eta).sinh() / ((m + 2.0 - n) * eta).sinh()
        * prod_sites(p, |th| (u - th + eta).sinh() * (u + th).sinh() / se2))
}

/// `g(u) = g0(u) prod_{p in S} sinh(u+theta_p+eta) sinh(u-theta_p) / (sinh(u-theta_p+eta) sinh(u+theta_p))`.
pub fn g_function(u: Complex64, g: &GaugeIndex, subset: &[usize], p: &ModelParams) -> Result<Complex64> {
    let eta = p.eta;
    let ratio: Complex64 = subset
        .iter()
        .map(|&j| {
            let th = p.inhomogeneities[j - 1];
            (u + th + eta).sinh() * (u - th).sinh() / ((u - th + eta).sinh() * (u + th).sinh())
        })
        .product();
    Ok(g0_function(u, g, p)? * ratio)
}

/// `P(m) / P(m + k)`: the left vacuum carries `P(m)`, so every shifted vacuum
/// on the right of an action formula is rescaled by this ratio.
fn p_ratio(m: Complex64, k: f64, p: &ModelParams) -> Complex64 {
    vacuum_prefactor_product(m, p) / vacuum_prefactor_product(m + k, p)
}

/// Right-hand side of the `Dbar_m(u)` vacuum action:
/// `Kbar^-_22 prod[..] <alpha+m| + Kbar^-_21 prod[..] P(m)/P(m+1) <alpha+m+1| Bbar_{m+1}(u)`.
fn dbar_braces(u: Complex64, g: &GaugeIndex, p: &ModelParams, sum: &mut CoSum, weight: Complex64) -> Result<()> {
    let (m, a, eta) = (g.m, g.alpha, p.eta);
    let n = p.n_sites as f64;
    let se = eta.sinh();
    let k = kminus_left_entries(m - n, a, u, p)?;
    let vac = left_vacuum(a, m, p)?;
    let prod22 = prod_sites(p, |th| (u - th + eta).sinh() * (u + th + eta).sinh() / (se * se));
    add_vec(sum, weight * k[1][1].0 * prod22, &vac.amplitudes);
    let prod21 = prod_sites(p, |th| (u - th + eta).sinh() / se);
    let shifted = left_vacuum(a, m + 1.0, p)?;
    let bbar = gauged_one_row(OneRowSide::LeftBar, m + 1.0, a, u, p)?;
    add_left(sum, weight * k[1][0].0 * prod21 * p_ratio(m, 1.0, p), &shifted, &bbar);
    Ok(())
}

/// Left vacuum actions of `Cbar`, `Dbar` and `Abar`, the `Abar`/`Dbar`
/// proportionality at `u = -theta_j`, the g-function action on basis
/// covectors and annihilation at `u = -theta_j` for `j` outside the subset.
pub fn verify_left_actions(p: &ModelParams, seed: u64) -> Result<Report> {
    check_size(p)?;
    let eta = p.eta;
    let n = p.n_sites;
    let one = Complex64::new(1.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: [Option<(f64, f64)>; 6] = [None; 6];
    let mut basis_worst: Vec<Option<(f64, f64)>> = vec![None; 1 << n];
    for _ in 0..OPERATOR_SUITE_DRAWS {
        let g = draw_gauge(&mut rng, eta, 2 * n as i32 + 3);
        let (m, a) = (g.m, g.alpha);
        let u = draw_u(&mut rng, p);
        let uu = double_row_monodromy(u, p)?;
        let ops = gauged_left_from(&uu, &g, u, eta)?;
        let vac = left_vacuum(a, m, p)?;

        let mut c_act = CoSum::new(p.dim());
        add_left(&mut c_act, one, &vac, ops.block(1, 0));
        add_vec(&mut c_act, -g0_function(u, &g, p)? * p_ratio(m, 2.0, p), &left_vacuum(a, m + 2.0, p)?.amplitudes);
        keep_worst(&mut worst[0], c_act.residual());

        let mut d_act = CoSum::new(p.dim());
        add_left(&mut d_act, one, &vac, ops.block(1, 1));
        dbar_braces(u, &g, p, &mut d_act, -one)?;
        keep_worst(&mut worst[1], d_act.residual());

        for (j, &th) in p.inhomogeneities.iter().enumerate() {
            let w = -th;
            let at = gauged_double_row_left(&g, w, p)?;
            let coef = (w * 2.0 - (m - 1.0) * eta).sinh() * eta.sinh()
                / ((w * 2.0 + eta).sinh() * ((1.0 - m) * eta).sinh());
            let mut a_act = CoSum::new(p.dim());
            add_left(&mut a_act, one, &vac, at.block(0, 0));
            dbar_braces(w, &g, p, &mut a_act, -coef)?;
            keep_worst(&mut worst[2], a_act.residual());

            let ratio = -((m - 1.0) * eta + th * 2.0).sinh() * eta.sinh()
                / (((m - 1.0) * eta).sinh() * (th * 2.0 - eta).sinh());
            let mut prop = CoSum::new(p.dim());
            add_left(&mut prop, one, &vac, at.block(0, 0));
            add_left(&mut prop, -ratio, &vac, at.block(1, 1));
            keep_worst(&mut worst[3], prop.residual());

            for s in subsets(n).iter().filter(|s| !s.contains(&(j + 1))) {
                let (v, scale) = left_basis_state(&g, s, p)?.apply_scaled(at.block(1, 0));
                keep_worst(&mut worst[4], (v.max_abs(), scale));
            }
        }

        for (k, s) in subsets(n).iter().enumerate() {
            let basis = left_basis_state(&g, s, p)?;
            let next = left_basis_state(&g.shifted(2), s, p)?;
            let mut act = CoSum::new(p.dim());
            add_left(&mut act, one, &basis, ops.block(1, 0));
            add_vec(&mut act, -g_function(u, &g, s, p)? * p_ratio(m, 2.0, p), &next.amplitudes);
            let r = act.residual();
            keep_worst(&mut basis_worst[k], r);
            keep_worst(&mut worst[5], r);
        }
    }
    let mut report = Report::new();
    let entries = [
        ("left_action[Cbar]", "<α+m| C̄_m(u) = g0(u|m) P(m)/P(m+2) <α+m+2|"),
        (
            "left_action[Dbar]",
            "<α+m| D̄_m(u) = K̄⁻22(m-N) Π sinh(u-θ+η)sinh(u+θ+η)/sinh²η <α+m| + K̄⁻21(m-N) Π sinh(u-θ+η)/sinhη P(m)/P(m+1) <α+m+1| B̄_{m+1}(u)",
        ),
        (
            "left_action[Abar]",
            "<α+m| Ā_m(-θ_j) = sinh(2u-(m-1)η) sinhη / (sinh(2u+η) sinh((1-m)η)) {D̄ action braces} at u = -θ_j",
        ),
        (
            "left_action[Abar_Dbar_ratio]",
            "<α+m| Ā_m(-θ_j) = -sinh((m-1)η+2θ_j) sinhη / (sinh((m-1)η) sinh(2θ_j-η)) <α+m| D̄_m(-θ_j)",
        ),
        ("left_action[annihilation]", "<α,m;S| C̄_m(-θ_j) = 0 for j outside S"),
        ("left_action[basis_g]", "<α,m;S| C̄_m(u) = g(u,S) P(m)/P(m+2) <α,m+2;S|"),
    ];
    for ((name, anchor), w) in entries.iter().zip(worst) {
        if let Some((r, s)) = w {
            report.add(*name, *anchor, r, s);
        }
    }
    for (s, w) in subsets(n).iter().zip(basis_worst) {
        if let Some((r, sc)) = w {
            report.add(
                format!("left_action[basis_g{s:?}]"),
                "<α,m;S| C̄_m(u) = g(u,S) P(m)/P(m+2) <α,m+2;S|",
                r,
                sc,
            );
        }
    }
    Ok(report)
}

/// Sum of `(row . col_1) op_1 (row' . col_2)`-weighted right-gauged operators
/// reproducing one left-gauged operator at `-u`.
fn expansion(
    target: &ComplexMatrix,
    right: &crate::model::AuxMonodromy,
    gl: &GaugeIndex,
    gr: &GaugeIndex,
    u: Complex64,
    col_left: [Complex64; 2],
    eta: Complex64,
) -> (f64, f64) {
    let (ml, al) = (gl.m, gl.alpha);
    let (m, ar) = (gr.m, gr.alpha);
    let xbar = gv(GaugeKind::Xbar, ml, -u, al, eta);
    let l = |kind: GaugeKind, shift: f64| dot(&xbar, &gv(kind, m + shift, -u, ar, eta));
    let r = |kind: GaugeKind| dot(&gv(kind, m, u, ar, eta), &col_left);
    let mut sum = Combination::new(target.rows());
    sum.add(Complex64::new(1.0, 0.0), target);
    sum.add(-l(GaugeKind::X, 0.0) * r(GaugeKind::Ybar), right.block(0, 0));
    sum.add(-l(GaugeKind::Y, -2.0) * r(GaugeKind::Ybar), right.block(1, 0));
    sum.add(-l(GaugeKind::X, 2.0) * r(GaugeKind::Xbar), right.block(0, 1));
    sum.add(-l(GaugeKind::Y, 0.0) * r(GaugeKind::Xbar), right.block(1, 1));
    sum.residual()
}

struct Combination {
    value: ComplexMatrix,
    scale: f64,
}

impl Combination {
    fn new(dim: usize) -> Self {
        Combination {
            value: ComplexMatrix::zeros(dim, dim),
            scale: 0.0,
        }
    }

    fn add(&mut self, c: Complex64, m: &ComplexMatrix) {
        self.scale = self.scale.max(c.norm() * m.max_abs());
        self.value.add_scaled(c, m);
    }

    fn residual(&self) -> (f64, f64) {
        (self.value.max_abs(), self.scale)
    }
}

/// Right vacuum actions of `C` and `A`, annihilation and the triangular
/// eigen-action at the selected right gauge, and the expansion of `Cbar`,
/// `Dbar` through right-gauged operators.
pub fn verify_right_actions(p: &ModelParams, seed: u64) -> Result<Report> {
    check_size(p)?;
    let eta = p.eta;
    let n = p.n_sites as f64;
    let se = eta.sinh();
    let one = Complex64::new(1.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: [Option<(f64, f64)>; 6] = [None; 6];
    let (_, gsel) = select_gauge_right(p)?;
    let omega = right_vacuum(gsel.alpha, gsel.m, p);
    for _ in 0..OPERATOR_SUITE_DRAWS {
        let g = draw_gauge(&mut rng, eta, p.n_sites as i32 + 3);
        let (m, a) = (g.m, g.alpha);
        let u = draw_u(&mut rng, p);
        let uu = double_row_monodromy(u, p)?;
        let ops = gauged_right_from(&uu, &g, u, eta)?;
        let vac = right_vacuum(a, m, p);
        let k = kminus_right_entries(m + n, a, u, p)?;

        let mut c_act = CoSum::new(p.dim());
        add_right(&mut c_act, one, ops.block(1, 0), &vac);
        let coef = k[1][0].0 * ((m + n - 1.0) * eta).sinh() / ((m - 1.0) * eta).sinh()
            * prod_sites(p, |th| (u - th).sinh() * (u + th + eta).sinh() / (se * se));
        add_vec(&mut c_act, -coef, &right_vacuum(a, m - 2.0, p).amplitudes);
        keep_worst(&mut worst[0], c_act.residual());

        let mut a_act = CoSum::new(p.dim());
        add_right(&mut a_act, one, ops.block(0, 0), &vac);
        add_vec(&mut a_act, -k[0][0].0 * abar_func(u, p), &vac.amplitudes);
        let b = gauged_one_row(OneRowSide::Right, m - 1.0, a, u, p)?;
        let w = k[1][0].0 * prod_sites(p, |th| (u + th + eta).sinh() / se);
        add_right(&mut a_act, -w, &b, &right_vacuum(a, m - 1.0, p));
        keep_worst(&mut worst[1], a_act.residual());

        let sel = gauged_double_row_right(&gsel, u, p)?;
        let mut ann = CoSum::new(p.dim());
        add_right(&mut ann, one, sel.block(1, 0), &omega);
        keep_worst(&mut worst[2], ann.residual());

        let eig = -(u.exp()) * 2.0 * (u - p.alpha_minus).sinh() * (u - p.beta_minus).cosh() * abar_func(u, p);
        let mut diag = CoSum::new(p.dim());
        add_right(&mut diag, one, sel.block(0, 0), &omega);
        add_vec(&mut diag, -eig, &omega.amplitudes);
        keep_worst(&mut worst[3], diag.residual());

        let gl = draw_gauge(&mut rng, eta, 4);
        let v = -u;
        let left = gauged_double_row_left(&gl, v, p)?;
        let right = gauged_double_row_right(&g, v, p)?;
        let xhat = gv(GaugeKind::Xhat, gl.m, u, gl.alpha, eta);
        let yhat = gv(GaugeKind::Yhat, gl.m + 2.0, u, gl.alpha, eta);
        keep_worst(&mut worst[4], expansion(left.block(1, 0), &right, &gl, &g, u, xhat, eta));
        keep_worst(&mut worst[5], expansion(left.block(1, 1), &right, &gl, &g, u, yhat, eta));
    }
    let mut report = Report::new();
    let entries = [
        (
            "right_action[C]",
            "C_m(u)|α+m> = K⁻21(m+N) sinh((m+N-1)η)/sinh((m-1)η) Π sinh(u-θ)sinh(u+θ+η)/sinh²η |α+m-2>",
        ),
        (
            "right_action[A]",
            "A_m(u)|α+m> = K⁻11(m+N) Ā(u)|α+m> + K⁻21(m+N) Π sinh(u+θ+η)/sinhη B_{m-1}(u)|α+m-1>",
        ),
        ("right_action[annihilation]", "C_{m_r}(u|α_r)|Ω> = 0"),
        ("right_action[eigen]", "A_{m_r}(u|α_r)|Ω> = -2e^u sinh(u-α₋)cosh(u-β₋) Ā(u)|Ω>"),
        (
            "right_action[expansion_Cbar]",
            "C̄_{m'}(-u) = Σ (X̄_{m'}(-u)·col) {A,C,B,D}_m(-u) (row(u)·X̂_{m'}(u))",
        ),
        (
            "right_action[expansion_Dbar]",
            "D̄_{m'}(-u) = Σ (X̄_{m'}(-u)·col) {A,C,B,D}_m(-u) (row(u)·Ŷ_{m'+2}(u))",
        ),
    ];
    for ((name, anchor), w) in entries.iter().zip(worst) {
        if let Some((r, s)) = w {
            report.add(*name, *anchor, r, s);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DrawSpec;

    #[test]
    fn left_actions_hold_at_two_sites() {
        let (p, _) = DrawSpec::new(2, 21).draw().unwrap();
        let r = verify_left_actions(&p, 5).unwrap();
        for x in &r.residuals {
            assert!(x.relative() < 1e-9, "{} {:e}", x.name, x.relative());
        }
        assert!(r.len() >= 10);
    }

    #[test]
    fn right_actions_hold_at_two_sites() {
        let (p, _) = DrawSpec::new(2, 22).draw().unwrap();
        let r = verify_right_actions(&p, 6).unwrap();
        for x in &r.residuals {
            assert!(x.relative() < 1e-9, "{} {:e}", x.name, x.relative());
        }
        assert_eq!(r.len(), 6);
    }

    #[test]
    fn size_limit() {
        let (p, _) = DrawSpec::new(4, 23).draw().unwrap();
        assert!(matches!(verify_left_actions(&p, 1), Err(Error::Size(_))));
    }
}
