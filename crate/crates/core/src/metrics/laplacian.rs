use nalgebra::DMatrix;

use super::{MetricKind, MetricMatrix};
use crate::chain::PentagonChainGraph;
use crate::error::{Error, Result};

/// Largest vertex count the dense solve accepts by default.
pub const DEFAULT_DENSE_CAP: usize = 5000;

/// Max-norm bound on `(L + J/N)·M - I` for the computed inverse `M`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Resistance distances from the Moore–Penrose pseudoinverse of the Laplacian.
///
/// `L + J/N` is positive definite for a connected graph and its inverse `M`
/// differs from `L⁺` by `J/N`, which cancels in
/// `r(u, v) = M_uu + M_vv - 2 M_uv`.
pub fn laplacian_resistance(g: &PentagonChainGraph) -> Result<MetricMatrix<f64>> {
    laplacian_resistance_with_cap(g, DEFAULT_DENSE_CAP)
}

pub fn laplacian_resistance_with_cap(g: &PentagonChainGraph, cap: usize) -> Result<MetricMatrix<f64>> {
    let adjacency: Vec<&[usize]> = (0..g.vertex_count()).map(|v| g.neighbors(v)).collect();
    resistance_from_adjacency(&adjacency, cap)
}

pub(crate) fn resistance_from_adjacency(adjacency: &[&[usize]], cap: usize) -> Result<MetricMatrix<f64>> {
    let n = adjacency.len();
    if n > cap {
        return Err(Error::DenseCapExceeded { vertices: n, cap });
    }
    let shift = 1.0 / n as f64;
    let mut shifted = DMatrix::from_element(n, n, shift);
    for (v, nbrs) in adjacency.iter().enumerate() {
        shifted[(v, v)] += nbrs.len() as f64;
        for &w in nbrs.iter() {
            shifted[(v, w)] -= 1.0;
        }
    }
    let inverse = shifted.clone().cholesky().ok_or(Error::SingularLaplacian)?.inverse();

    let residual = (&shifted * &inverse - DMatrix::<f64>::identity(n, n)).amax();
    if !residual.is_finite() || residual > RESIDUAL_TOLERANCE {
        return Err(Error::LaplacianResidual(residual));
    }

    Ok(MetricMatrix::from_fn(n, MetricKind::Resistance, |u, v| {
        inverse[(u, u)] + inverse[(v, v)] - 2.0 * inverse[(u, v)]
    }))
}
