//! Gauss–Legendre panels, composite Simpson and deterministic reductions.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::Add;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::exec::Executor;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on `P_n`.
    ///
    /// # Panics
    /// If `n == 0`.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess for the i-th root.
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let terms: Vec<f64> = self.mapped(a, b).map(|(x, w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        let terms: Vec<Complex64> = self.mapped(a, b).map(|(x, w)| f(x) * w).collect();
        pairwise_sum(&terms)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Per-panel integration rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PanelRule {
    GaussLegendrePanels,
    Simpson,
}

/// Quadrature nodes for one panel of a composite rule.
#[derive(Debug, Clone)]
pub struct PanelNodes {
    rule: PanelRule,
    gl: Option<GaussLegendre>,
    points: usize,
}

impl PanelNodes {
    /// `points` nodes per panel; Simpson rounds up to an odd count.
    pub fn new(rule: PanelRule, points: usize) -> Self {
        match rule {
            PanelRule::GaussLegendrePanels => Self { rule, gl: Some(GaussLegendre::new(points.max(1))), points },
            PanelRule::Simpson => {
                let p = points.max(3);
                Self { rule, gl: None, points: if p.is_multiple_of(2) { p + 1 } else { p } }
            }
        }
    }

    pub fn rule(&self) -> PanelRule {
        self.rule
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Visits `(x, weight)` pairs of this rule on `[a, b]`.
    pub fn for_each<F: FnMut(f64, f64)>(&self, a: f64, b: f64, mut f: F) {
        match &self.gl {
            Some(gl) => gl.mapped(a, b).for_each(|(x, w)| f(x, w)),
            None => {
                let m = self.points - 1;
                let h = (b - a) / m as f64;
                for j in 0..=m {
                    let w = if j == 0 || j == m {
                        1.0
                    } else if j % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    f(a + h * j as f64, w * h / 3.0);
                }
            }
        }
    }

    /// Integrates `f` over a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mut terms = Vec::with_capacity(self.points);
        self.for_each(a, b, |x, w| terms.push(w * f(x)));
        pairwise_sum(&terms)
    }
}

/// Splits `[a, b]` into `ceil((b - a) / width)` equal panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelGrid {
    pub a: f64,
    pub b: f64,
    pub count: usize,
}

impl PanelGrid {
    pub fn new(a: f64, b: f64, width: f64) -> Self {
        let count = libm::ceil((b - a) / width).max(1.0) as usize;
        Self { a, b, count }
    }

    pub fn width(&self) -> f64 {
        (self.b - self.a) / self.count as f64
    }

    pub fn bounds(&self, i: usize) -> (f64, f64) {
        let h = self.width();
        let lo = self.a + h * i as f64;
        let hi = if i + 1 == self.count { self.b } else { self.a + h * (i + 1) as f64 };
        (lo, hi)
    }
}

/// Composite integral of `f` over `grid`, one task per panel, plus the
/// per-panel values (in order) for refinement checks.
pub fn integrate_panels<E, F>(exec: &E, grid: PanelGrid, nodes: &PanelNodes, f: F) -> (f64, Vec<f64>)
where
    E: Executor,
    F: Fn(f64) -> f64 + Sync + Send,
{
    let panels = exec.map_indexed(grid.count, |i| {
        let (lo, hi) = grid.bounds(i);
        nodes.integrate(lo, hi, &f)
    });
    (pairwise_sum(&panels), panels)
}

/// Sequential composite Gauss–Legendre integral of a complex integrand over
/// panels of at most `width`.
pub fn composite_complex<F: FnMut(f64) -> Complex64>(gl: &GaussLegendre, a: f64, b: f64, width: f64, mut f: F) -> Complex64 {
    let grid = PanelGrid::new(a, b, width);
    let panels: Vec<Complex64> = (0..grid.count)
        .map(|i| {
            let (lo, hi) = grid.bounds(i);
            gl.integrate_complex(lo, hi, &mut f)
        })
        .collect();
    pairwise_sum(&panels)
}

/// Real counterpart of [`composite_complex`].
pub fn composite<F: FnMut(f64) -> f64>(gl: &GaussLegendre, a: f64, b: f64, width: f64, mut f: F) -> f64 {
    let grid = PanelGrid::new(a, b, width);
    let panels: Vec<f64> = (0..grid.count)
        .map(|i| {
            let (lo, hi) = grid.bounds(i);
            gl.integrate(lo, hi, &mut f)
        })
        .collect();
    pairwise_sum(&panels)
}

/// Pairwise (cascade) summation. The split points depend only on the length,
/// so the result is reproducible bit for bit.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Add<Output = T> + Default,
{
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        let mut acc = T::default();
        for &x in xs {
            acc = acc + x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
