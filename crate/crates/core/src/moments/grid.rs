use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quad::{pairwise_sum, PanelGrid, PanelNodes};
use crate::weights::phi;

use super::QuadratureSpec;

/// Flattened nodes and weights of a composite rule, plus a half-width
/// re-run of every `stride`-th panel for error estimation.
#[derive(Debug, Clone)]
pub struct MomentGrid {
    panels: usize,
    per_panel: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    sampled: Vec<usize>,
    refined_nodes: Vec<f64>,
    refined_weights: Vec<f64>,
    start: f64,
    width: f64,
    stride: usize,
    offsets: Vec<f64>,
    refined_offsets: Vec<f64>,
}

impl MomentGrid {
    pub fn new(a: f64, b: f64, width: f64, quad: &QuadratureSpec) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidArgument("empty integration range"));
        }
        let rule = PanelNodes::new(quad.rule, quad.nodes_per_panel);
        let grid = PanelGrid::new(a, b, width);
        let mut nodes = Vec::with_capacity(grid.count * rule.points());
        let mut weights = Vec::with_capacity(grid.count * rule.points());
        for i in 0..grid.count {
            let (lo, hi) = grid.bounds(i);
            rule.for_each(lo, hi, |x, w| {
                nodes.push(x);
                weights.push(w);
            });
        }
        let sampled: Vec<usize> = (0..grid.count).step_by(quad.refine_stride).collect();
        let mut refined_nodes = Vec::new();
        let mut refined_weights = Vec::new();
        for &i in &sampled {
            let (lo, hi) = grid.bounds(i);
            let mid = 0.5 * (lo + hi);
            for (x0, x1) in [(lo, mid), (mid, hi)] {
                rule.for_each(x0, x1, |x, w| {
                    refined_nodes.push(x);
                    refined_weights.push(w);
                });
            }
        }
        let h = grid.width();
        let offsets = nodes[..rule.points()].iter().map(|x| x - a).collect();
        let refined_offsets = refined_nodes[..2 * rule.points()].iter().map(|x| x - a).collect();
        Ok(Self {
            panels: grid.count,
            per_panel: rule.points(),
            nodes,
            weights,
            sampled,
            refined_nodes,
            refined_weights,
            start: a,
            width: h,
            stride: quad.refine_stride,
            offsets,
            refined_offsets,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn refined_nodes(&self) -> &[f64] {
        &self.refined_nodes
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn sampled_panels(&self) -> usize {
        self.sampled.len()
    }

    /// Left end of the first panel.
    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn panel_width(&self) -> f64 {
        self.width
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    /// Node positions inside a panel, relative to its left end.
    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// Node positions of the two half panels, relative to the left end.
    pub fn refined_offsets(&self) -> &[f64] {
        &self.refined_offsets
    }

    fn panel_sum(weights: &[f64], values: &[f64]) -> f64 {
        let mut terms = [0.0f64; 64];
        let k = weights.len();
        if k <= 64 {
            for j in 0..k {
                terms[j] = weights[j] * values[j];
            }
            pairwise_sum(&terms[..k])
        } else {
            let t: Vec<f64> = weights.iter().zip(values).map(|(w, v)| w * v).collect();
            pairwise_sum(&t)
        }
    }

    /// Integral from node values, and the extrapolated refinement estimate
    /// `(panels / sampled) · Σ |coarse - fine|` over the sampled panels.
    pub fn integrate(&self, values: &[f64], refined_values: &[f64]) -> (f64, f64) {
        let k = self.per_panel;
        let panel_values: Vec<f64> =
            (0..self.panels).map(|p| Self::panel_sum(&self.weights[p * k..(p + 1) * k], &values[p * k..(p + 1) * k])).collect();
        let value = pairwise_sum(&panel_values);
        let diffs: Vec<f64> = self
            .sampled
            .iter()
            .enumerate()
            .map(|(j, &p)| {
                let r = 2 * k * j;
                let fine = Self::panel_sum(&self.refined_weights[r..r + 2 * k], &refined_values[r..r + 2 * k]);
                (panel_values[p] - fine).abs()
            })
            .collect();
        let err = pairwise_sum(&diffs) * self.panels as f64 / self.sampled.len() as f64;
        (value, err)
    }
}

/// Fixed high-order rule for the smooth `t`-integrals against `φ(t/T)`
/// (main term, diagonal, contour term).
#[derive(Debug, Clone)]
pub struct TRule {
    pub t: f64,
    /// nodes in `(T, 2T)`
    pub nodes: Vec<f64>,
    /// quadrature weight times `φ(t/T)`
    pub weights: Vec<f64>,
}

impl TRule {
    pub const PANELS: usize = 64;
    pub const POINTS: usize = 16;

    pub fn new(t: f64) -> Self {
        let rule = PanelNodes::new(crate::quad::PanelRule::GaussLegendrePanels, Self::POINTS);
        let grid = PanelGrid::new(t, 2.0 * t, t / Self::PANELS as f64);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for i in 0..grid.count {
            let (lo, hi) = grid.bounds(i);
            rule.for_each(lo, hi, |x, w| {
                nodes.push(x);
                weights.push(w * phi(x / t));
            });
        }
        Self { t, nodes, weights }
    }

    /// `∫ f(t) φ(t/T) dt`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let terms: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }
}
