// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! One-dimensional maximization: dense grid scan plus golden-section polish.

use alloc::vec::Vec;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizer and value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Maximum {
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // The midpoint can lose to an interior probe on a flat top.
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold(Maximum { x, value: fx }, |best, (x, v)| {
            if v > best.value {
                Maximum { x, value: v }
            } else {
                best
            }
        })
}

/// Evenly spaced grid including both endpoints.
pub fn linspace(a: f64, b: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => {
            let step = (b - a) / (points - 1) as f64;
            (0..points)
                .map(|i| if i == points - 1 { b } else { a + step * i as f64 })
                .collect()
        }
    }
}

/// Global maximum over `[a, b]`: best point of a `points`-node grid, then
/// golden-section refinement inside the neighbouring grid cells.
pub fn grid_golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize, tol: f64) -> Maximum {
    let grid = linspace(a, b, points.max(3));
    let values: Vec<f64> = grid.iter().map(|&x| sanitize(f(x))).collect();
    let best = argmax(&values);
    refine(&f, &grid, &values, best, tol)
}

/// Every interior local maximum of the grid, refined, in ascending `x`.
pub fn grid_local_maxima(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize, tol: f64) -> Vec<Maximum> {
    let grid = linspace(a, b, points.max(3));
    let values: Vec<f64> = grid.iter().map(|&x| sanitize(f(x))).collect();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < grid.len() {
        // Walk across plateaus so a flat top is reported once.
        let mut j = i;
        while j + 1 < grid.len() - 1 && values[j + 1] == values[i] {
            j += 1;
        }
        if values[i] > values[i - 1] && values[j] > values[j + 1] && values[i] > 0.0 {
            out.push(refine(&f, &grid, &values, (i + j) / 2, tol));
        }
        i = j + 1;
    }
    out
}

fn refine(f: &impl Fn(f64) -> f64, grid: &[f64], values: &[f64], best: usize, tol: f64) -> Maximum {
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let polished = golden_section_max(|x| sanitize(f(x)), lo, hi, tol);
    if polished.value >= values[best] {
        polished
    } else {
        Maximum {
            x: grid[best],
            value: values[best],
        }
    }
}

fn argmax(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > values[best] { i } else { best })
}

#[inline]
fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let m = golden_section_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, -1.0, 2.0, 1e-10);
        // Flat tops pin x only to about √ε.
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!((m.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn grid_picks_global_over_local() {
        // Two bumps, the right one taller.
        let f = |x: f64| (-(x - 1.0) * (x - 1.0) * 50.0).exp() + 1.5 * (-(x - 3.0) * (x - 3.0) * 50.0).exp();
        let m = grid_golden_max(f, 0.0, 4.0, 2048, 1e-10);
        assert!((m.x - 3.0).abs() < 1e-6);
        let all = grid_local_maxima(f, 0.0, 4.0, 2048, 1e-10);
        assert_eq!(all.len(), 2);
        assert!((all[0].x - 1.0).abs() < 1e-6);
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.0, 1.0, 5);
        assert_eq!(g, alloc::vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(linspace(2.0, 3.0, 1), alloc::vec![2.0]);
        assert!(linspace(2.0, 3.0, 0).is_empty());
    }
}
