//! Second-order finite differences: central in the interior, one-sided at
//! box faces.

use num_complex::Complex64;

use super::{Field, Grid};
use crate::error::{invalid, Result};

/// `∂_axis u` at one node.
pub fn gradient_at_node(grid: &Grid, values: &[Complex64], idx: usize, axis: usize) -> Complex64 {
    let n = grid.n();
    let s = grid.stride(axis);
    let i = (idx / s) % n;
    let inv = 1.0 / (2.0 * grid.h());
    if i == 0 {
        (values[idx] * -3.0 + values[idx + s] * 4.0 - values[idx + 2 * s]) * inv
    } else if i == n - 1 {
        (values[idx] * 3.0 - values[idx - s] * 4.0 + values[idx - 2 * s]) * inv
    } else {
        (values[idx + s] - values[idx - s]) * inv
    }
}

fn second_at_node(grid: &Grid, values: &[Complex64], idx: usize, axis: usize) -> Complex64 {
    let n = grid.n();
    let s = grid.stride(axis);
    let i = (idx / s) % n;
    let inv = 1.0 / (grid.h() * grid.h());
    if i == 0 {
        (values[idx] * 2.0 - values[idx + s] * 5.0 + values[idx + 2 * s] * 4.0 - values[idx + 3 * s]) * inv
    } else if i == n - 1 {
        (values[idx] * 2.0 - values[idx - s] * 5.0 + values[idx - 2 * s] * 4.0 - values[idx - 3 * s]) * inv
    } else {
        (values[idx + s] - values[idx] * 2.0 + values[idx - s]) * inv
    }
}

/// The N partial derivatives of `u` as fields.
pub fn gradient(u: &Field) -> Vec<Field> {
    let g = *u.grid();
    (0..g.dim())
        .map(|a| {
            let v = (0..g.len()).map(|i| gradient_at_node(&g, u.values(), i, a)).collect();
            Field::from_values_unchecked(g, v)
        })
        .collect()
}

/// `∂²u/∂x_axis²`; needs at least 4 points per axis.
pub fn second_derivative(u: &Field, axis: usize) -> Result<Field> {
    let g = *u.grid();
    if g.n() < 5 {
        return Err(invalid("second-derivative stencils need n >= 5"));
    }
    let v = (0..g.len()).map(|i| second_at_node(&g, u.values(), i, axis)).collect();
    Ok(Field::from_values_unchecked(g, v))
}
