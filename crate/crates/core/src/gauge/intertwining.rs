//! Face-vertex intertwining relations between the R-matrix and the gauge
//! vectors, checked as four-component identities at random arguments.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::vectors::{gv, GaugeKind, Vec2};
use crate::model::{r_array, Mat4, ModelParams};
use crate::report::Report;

/// Number of random argument draws per relation.
pub const INTERTWINING_DRAWS: usize = 100;

/// Where the two vectors of a term sit relative to `R12`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    /// `R12 v^1 w^2`, both columns.
    Columns,
    /// `v^1 w^2 R12`, both rows.
    Rows,
    /// Row in space 2, column in space 1: an operator from space 2 to space 1.
    RowTwoColumnOne,
    /// Row in space 1, column in space 2: an operator from space 1 to space 2.
    RowOneColumnTwo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Coef {
    A,
    Bm,
    Bp,
    Cp,
    Cm,
}

impl Coef {
    fn eval(self, u: Complex64, m: Complex64, eta: Complex64) -> Complex64 {
        let se = eta.sinh();
        let sm = (m * eta).sinh();
        match self {
            Coef::A => (u + eta).sinh() / se,
            Coef::Bm => u.sinh() * ((m - 1.0) * eta).sinh() / (se * sm),
            Coef::Bp => u.sinh() * ((m + 1.0) * eta).sinh() / (se * sm),
            Coef::Cp => (m * eta + u).sinh() / sm,
            Coef::Cm => (m * eta - u).sinh() / sm,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Coef::A => "sinh(u+η)/sinh η",
            Coef::Bm => "sinh u sinh(m−1)η/(sinh η sinh mη)",
            Coef::Bp => "sinh u sinh(m+1)η/(sinh η sinh mη)",
            Coef::Cp => "sinh(mη+u)/sinh mη",
            Coef::Cm => "sinh(mη−u)/sinh mη",
        }
    }
}

/// A gauge vector `kind_{m+shift}` living in auxiliary space `space`.
type Slot = (GaugeKind, i32, u8);

struct Relation {
    shape: Shape,
    lhs: [Slot; 2],
    rhs: &'static [(Coef, [Slot; 2])],
}

use GaugeKind::{Xbar as XB, Xhat as XH, Xtilde as XT, Ybar as YB, Yhat as YH, Ytilde as YT, X, Y};
use Shape::{Columns as CC, RowOneColumnTwo as R1C2, RowTwoColumnOne as R2C1, Rows as RR};

const RELATIONS: [Relation; 28] = [
    Relation { shape: CC, lhs: [(X, 2, 1), (X, 1, 2)], rhs: &[(Coef::A, [(X, 2, 2), (X, 1, 1)])] },
    Relation {
        shape: CC,
        lhs: [(X, 0, 1), (Y, -1, 2)],
        rhs: &[(Coef::Bm, [(Y, 0, 2), (X, 1, 1)]), (Coef::Cp, [(X, 0, 2), (Y, -1, 1)])],
    },
    Relation {
        shape: CC,
        lhs: [(Y, 0, 1), (X, 1, 2)],
        rhs: &[(Coef::Bp, [(X, 0, 2), (Y, -1, 1)]), (Coef::Cm, [(Y, 0, 2), (X, 1, 1)])],
    },
    Relation { shape: CC, lhs: [(Y, -2, 1), (Y, -1, 2)], rhs: &[(Coef::A, [(Y, -2, 2), (Y, -1, 1)])] },
    Relation { shape: CC, lhs: [(XH, -1, 2), (XH, 0, 1)], rhs: &[(Coef::A, [(XH, 0, 2), (XH, -1, 1)])] },
    Relation {
        shape: CC,
        lhs: [(XH, -1, 2), (YH, 2, 1)],
        rhs: &[(Coef::Bp, [(XH, -2, 2), (YH, 1, 1)]), (Coef::Cm, [(YH, 2, 2), (XH, -1, 1)])],
    },
    Relation {
        shape: CC,
        lhs: [(YH, 1, 2), (XH, -2, 1)],
        rhs: &[(Coef::Bm, [(YH, 2, 2), (XH, -1, 1)]), (Coef::Cp, [(XH, -2, 2), (YH, 1, 1)])],
    },
    Relation { shape: CC, lhs: [(YH, 1, 2), (YH, 0, 1)], rhs: &[(Coef::A, [(YH, 0, 2), (YH, 1, 1)])] },
    Relation { shape: RR, lhs: [(XB, -1, 1), (XB, -2, 2)], rhs: &[(Coef::A, [(XB, -1, 2), (XB, -2, 1)])] },
    Relation {
        shape: RR,
        lhs: [(XB, -1, 1), (YB, 0, 2)],
        rhs: &[(Coef::Bp, [(YB, 1, 2), (XB, 0, 1)]), (Coef::Cp, [(XB, -1, 2), (YB, 0, 1)])],
    },
    Relation {
        shape: RR,
        lhs: [(YB, 1, 1), (XB, 0, 2)],
        rhs: &[(Coef::Bm, [(XB, -1, 2), (YB, 0, 1)]), (Coef::Cm, [(YB, 1, 2), (XB, 0, 1)])],
    },
    Relation { shape: RR, lhs: [(YB, 1, 1), (YB, 2, 2)], rhs: &[(Coef::A, [(YB, 1, 2), (YB, 2, 1)])] },
    Relation { shape: RR, lhs: [(XT, 1, 1), (XT, 0, 2)], rhs: &[(Coef::A, [(XT, 1, 2), (XT, 0, 1)])] },
    Relation {
        shape: RR,
        lhs: [(XT, 1, 1), (YT, -2, 2)],
        rhs: &[(Coef::Bp, [(YT, -1, 2), (XT, 2, 1)]), (Coef::Cp, [(XT, 1, 2), (YT, -2, 1)])],
    },
    Relation {
        shape: RR,
        lhs: [(YT, -1, 1), (XT, 2, 2)],
        rhs: &[(Coef::Bm, [(XT, 1, 2), (YT, -2, 1)]), (Coef::Cm, [(YT, -1, 2), (XT, 2, 1)])],
    },
    Relation { shape: RR, lhs: [(YT, -1, 1), (YT, 0, 2)], rhs: &[(Coef::A, [(YT, -1, 2), (YT, 0, 1)])] },
    Relation { shape: R2C1, lhs: [(XB, 0, 2), (X, 0, 1)], rhs: &[(Coef::Bm, [(XB, -1, 2), (X, 1, 1)])] },
    Relation {
        shape: R2C1,
        lhs: [(XB, 0, 2), (Y, 0, 1)],
        rhs: &[(Coef::A, [(XB, 1, 2), (Y, 1, 1)]), (Coef::Cm, [(YB, 1, 2), (X, 1, 1)])],
    },
    Relation {
        shape: R2C1,
        lhs: [(YB, 0, 2), (X, 0, 1)],
        rhs: &[(Coef::A, [(YB, -1, 2), (X, -1, 1)]), (Coef::Cp, [(XB, -1, 2), (Y, -1, 1)])],
    },
    Relation { shape: R2C1, lhs: [(YB, 0, 2), (Y, 0, 1)], rhs: &[(Coef::Bp, [(YB, 1, 2), (Y, -1, 1)])] },
    Relation { shape: R1C2, lhs: [(XT, 1, 1), (X, 1, 2)], rhs: &[(Coef::Bp, [(X, 0, 2), (XT, 2, 1)])] },
    Relation {
        shape: R1C2,
        lhs: [(XT, 1, 1), (Y, -1, 2)],
        rhs: &[(Coef::A, [(Y, -2, 2), (XT, 0, 1)]), (Coef::Cp, [(X, 0, 2), (YT, -2, 1)])],
    },
    Relation {
        shape: R1C2,
        lhs: [(YT, -1, 1), (X, 1, 2)],
        rhs: &[(Coef::A, [(X, 2, 2), (YT, 0, 1)]), (Coef::Cm, [(Y, 0, 2), (XT, 2, 1)])],
    },
    Relation { shape: R1C2, lhs: [(YT, -1, 1), (Y, -1, 2)], rhs: &[(Coef::Bm, [(Y, 0, 2), (YT, -2, 1)])] },
    Relation { shape: R1C2, lhs: [(XB, -1, 1), (XH, -1, 2)], rhs: &[(Coef::Bp, [(XH, -2, 2), (XB, 0, 1)])] },
    Relation {
        shape: R1C2,
        lhs: [(XB, -1, 1), (YH, 1, 2)],
        rhs: &[(Coef::A, [(YH, 0, 2), (XB, -2, 1)]), (Coef::Cp, [(XH, -2, 2), (YB, 0, 1)])],
    },
    Relation {
        shape: R1C2,
        lhs: [(YB, 1, 1), (XH, -1, 2)],
        rhs: &[(Coef::A, [(XH, 0, 2), (YB, 2, 1)]), (Coef::Cm, [(YH, 2, 2), (XB, 0, 1)])],
    },
    Relation { shape: R1C2, lhs: [(YB, 1, 1), (YH, 1, 2)], rhs: &[(Coef::Bm, [(YH, 2, 2), (YB, 0, 1)])] },
];

fn slot_label((kind, shift, space): Slot) -> String {
    let idx = match shift {
        0 => "m".to_string(),
        s if s > 0 => format!("m+{s}"),
        s => format!("m{s}"),
    };
    format!("{}^{space}_{{{idx}}}(u{space})", kind.symbol())
}

fn pair_label(shape: Shape, slots: &[Slot; 2]) -> String {
    let a = slot_label(slots[0]);
    let b = slot_label(slots[1]);
    match shape {
        Shape::Columns => format!("{a} {b}"),
        Shape::Rows => format!("{a} {b}"),
        Shape::RowTwoColumnOne | Shape::RowOneColumnTwo => format!("{b} {a}"),
    }
}

impl Relation {
    fn name(&self) -> String {
        let l: Vec<String> = self
            .lhs
            .iter()
            .map(|&(k, s, sp)| {
                let sign = if s >= 0 { "+" } else { "" };
                format!("{}{sign}{s}@{sp}", kind_ascii(k))
            })
            .collect();
        format!("intertwining[{}]", l.join(","))
    }

    fn anchor(&self) -> String {
        let lhs = match self.shape {
            Shape::Columns => format!("R12(u1−u2) {}", pair_label(self.shape, &self.lhs)),
            Shape::Rows => format!("{} R12(u1−u2)", pair_label(self.shape, &self.lhs)),
            Shape::RowTwoColumnOne => format!(
                "{} R12(u1−u2) {}",
                slot_label(self.lhs[0]),
                slot_label(self.lhs[1])
            ),
            Shape::RowOneColumnTwo => format!(
                "{} R12(u1−u2) {}",
                slot_label(self.lhs[0]),
                slot_label(self.lhs[1])
            ),
        };
        let rhs: Vec<String> = self
            .rhs
            .iter()
            .map(|(c, slots)| format!("[{}] {}", c.label(), pair_label(self.shape, slots)))
            .collect();
        format!("{lhs} = {}", rhs.join(" + "))
    }
}

fn kind_ascii(k: GaugeKind) -> &'static str {
    match k {
        GaugeKind::X => "X",
        GaugeKind::Y => "Y",
        GaugeKind::Xbar => "Xbar",
        GaugeKind::Ybar => "Ybar",
        GaugeKind::Xtilde => "Xtilde",
        GaugeKind::Ytilde => "Ytilde",
        GaugeKind::Xhat => "Xhat",
        GaugeKind::Yhat => "Yhat",
    }
}

/// Signature of a gauge-vector evaluator `(kind, m, u, alpha, eta)`.
pub type VectorFn = dyn Fn(GaugeKind, Complex64, Complex64, Complex64, Complex64) -> Vec2 + Sync;

#[derive(Clone, Copy, Debug)]
struct Draw {
    u1: Complex64,
    u2: Complex64,
    m: Complex64,
    alpha: Complex64,
}

fn draw_arguments(eta: Complex64, seed: u64, count: usize) -> Vec<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = move || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u1 = unit();
        let u2 = unit();
        let alpha = unit();
        let r = unit();
        let m = Complex64::new(0.5 + r.re, 0.5 * r.im);
        let generic = (-3..=3).all(|k| ((m + f64::from(k)) * eta).sinh().norm() > 0.05);
        if generic {
            out.push(Draw { u1, u2, m, alpha });
        }
    }
    out
}

/// Evaluates one side as a flat 4-vector (or row-major 2x2 operator).
fn evaluate_pair(shape: Shape, slots: &[Slot; 2], d: &Draw, eta: Complex64, vec: &VectorFn) -> ([Vec2; 2], Shape) {
    let mut v = [[Complex64::new(0.0, 0.0); 2]; 2];
    for &(kind, shift, space) in slots {
        let u = if space == 1 { d.u1 } else { d.u2 };
        v[usize::from(space - 1)] = vec(kind, d.m + f64::from(shift), u, d.alpha, eta);
    }
    (v, shape)
}

fn product(shape: Shape, v: &[Vec2; 2]) -> [Complex64; 4] {
    let [v1, v2] = v;
    match shape {
        // kron(v1, v2)
        Shape::Columns | Shape::Rows => [v1[0] * v2[0], v1[0] * v2[1], v1[1] * v2[0], v1[1] * v2[1]],
        // [a, d] = col1_a row2_d
        Shape::RowTwoColumnOne => [v1[0] * v2[0], v1[0] * v2[1], v1[1] * v2[0], v1[1] * v2[1]],
        // [b, c] = col2_b row1_c
        Shape::RowOneColumnTwo => [v2[0] * v1[0], v2[0] * v1[1], v2[1] * v1[0], v2[1] * v1[1]],
    }
}

fn apply_r(shape: Shape, r: &Mat4, v: &[Vec2; 2]) -> ([Complex64; 4], f64) {
    let [v1, v2] = v;
    let mut out = [Complex64::new(0.0, 0.0); 4];
    let mut scale: f64 = 0.0;
    // r[(a,b)][(c,d)] with composite index 2a+b
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let rv = r[2 * a + b][2 * c + d];
                    let (slot, term) = match shape {
                        Shape::Columns => (2 * a + b, rv * v1[c] * v2[d]),
                        Shape::Rows => (2 * c + d, v1[a] * v2[b] * rv),
                        Shape::RowTwoColumnOne => (2 * a + d, v2[b] * rv * v1[c]),
                        Shape::RowOneColumnTwo => (2 * b + c, v1[a] * rv * v2[d]),
                    };
                    out[slot] += term;
                    scale = scale.max(term.norm());
                }
            }
        }
    }
    (out, scale)
}

fn relation_residual(rel: &Relation, d: &Draw, eta: Complex64, vec: &VectorFn) -> (f64, f64) {
    let u = d.u1 - d.u2;
    let r = r_array(u, eta);
    let (lv, shape) = evaluate_pair(rel.shape, &rel.lhs, d, eta, vec);
    let (lhs, mut scale) = apply_r(shape, &r, &lv);
    let mut rhs = [Complex64::new(0.0, 0.0); 4];
    for (coef, slots) in rel.rhs {
        let c = coef.eval(u, d.m, eta);
        let (v, _) = evaluate_pair(rel.shape, slots, d, eta, vec);
        for (acc, x) in rhs.iter_mut().zip(product(rel.shape, &v)) {
            let term = c * x;
            *acc += term;
            scale = scale.max(term.norm());
        }
    }
    let res = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    (res, scale)
}

/// The three inverse/completeness blocks: for each gauge matrix both
/// `M^{-1} M = 1` and `M M^{-1} = 1`, with the largest summand as scale.
fn orthonormality_residual(block: usize, d: &Draw, eta: Complex64, vec: &VectorFn) -> (f64, f64) {
    let at = |k: GaugeKind, s: f64| vec(k, d.m + s, d.u1, d.alpha, eta);
    let (cols, rows) = match block {
        0 => ([at(X, 0.0), at(Y, 0.0)], [at(YB, 0.0), at(XB, 0.0)]),
        1 => ([at(X, 1.0), at(Y, -1.0)], [at(YT, -1.0), at(XT, 1.0)]),
        _ => ([at(XH, -1.0), at(YH, 1.0)], [at(YB, 1.0), at(XB, -1.0)]),
    };
    let mut res: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let target = if i == j { 1.0 } else { 0.0 };
            let a = rows[i][0] * cols[j][0];
            let b = rows[i][1] * cols[j][1];
            res = res.max((a + b - target).norm());
            scale = scale.max(a.norm()).max(b.norm());
            let c = cols[0][i] * rows[0][j];
            let e = cols[1][i] * rows[1][j];
            res = res.max((c + e - target).norm());
            scale = scale.max(c.norm()).max(e.norm());
        }
    }
    (res, scale.max(1.0))
}

const ORTHONORMALITY: [(&str, &str); 3] = [
    (
        "orthonormality[Mbar]",
        "Ȳ_m X_m = X̄_m Y_m = 1, Ȳ_m Y_m = X̄_m X_m = 0, X_m Ȳ_m + Y_m X̄_m = 1",
    ),
    (
        "orthonormality[Mtilde]",
        "Ỹ_{m−1} X_{m+1} = X̃_{m+1} Y_{m−1} = 1, Ỹ_{m−1} Y_{m−1} = X̃_{m+1} X_{m+1} = 0, X_{m+1} Ỹ_{m−1} + Y_{m−1} X̃_{m+1} = 1",
    ),
    (
        "orthonormality[Mhat]",
        "Ȳ_{m+1} X̂_{m−1} = X̄_{m−1} Ŷ_{m+1} = 1, Ȳ_{m+1} Ŷ_{m+1} = X̄_{m−1} X̂_{m−1} = 0, X̂_{m−1} Ȳ_{m+1} + Ŷ_{m+1} X̄_{m−1} = 1",
    ),
];

fn worst(pairs: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    pairs.fold((0.0, 1.0), |best, cur| {
        let rel = |(r, s): (f64, f64)| if s > 0.0 { r / s } else { r };
        if rel(cur) > rel(best) {
            cur
        } else {
            best
        }
    })
}

/// Checks all 28 intertwining relations and the three orthonormality blocks at
/// `INTERTWINING_DRAWS` seeded random `(u1, u2, m, alpha)`. Each report entry
/// carries the draw with the largest relative residual.
pub fn verify_intertwining(p: &ModelParams, seed: u64) -> Report {
    verify_intertwining_with(p.eta, seed, INTERTWINING_DRAWS, &gv)
}

/// As [`verify_intertwining`] with an explicit `eta`, draw count and vector
/// evaluator (used for fault injection).
pub fn verify_intertwining_with(eta: Complex64, seed: u64, draws: usize, vec: &VectorFn) -> Report {
    let args = draw_arguments(eta, seed, draws);
    let relations: Vec<_> = RELATIONS
        .par_iter()
        .map(|rel| {
            let (r, s) = worst(args.iter().map(|d| relation_residual(rel, d, eta, vec)));
            (rel.name(), rel.anchor(), r, s)
        })
        .collect();
    let mut report = Report::new();
    for (name, anchor, r, s) in relations {
        report.add(name, anchor, r, s);
    }
    for (block, (name, anchor)) in ORTHONORMALITY.iter().enumerate() {
        let (r, s) = worst(args.iter().map(|d| orthonormality_residual(block, d, eta, vec)));
        report.add(*name, *anchor, r, s);
    }
    report
}
