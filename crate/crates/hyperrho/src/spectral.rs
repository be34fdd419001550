//! Spectral radius of the adjacency tensor, computed directly from the
//! eigen-equation and independent of the weighted-incidence machinery.
//!
//! The normalization is fixed so that a single r-edge has rho = (r-1)!:
//!
//!   rho * x_v^{r-1} = (r-1)! * sum_{e: v in e} prod_{u in e, u != v} x_u
//!
//! which makes rho = (r-1)! * alpha^{-1/r} the exact dual of the
//! consistently alpha-normal weighting, and puts the extremal threshold at
//! (r-1)! * 4^{1/r}.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::hypergraph::UniformHypergraph;

/// (r-1)! as f64; exact for the small ranks used here.
pub fn rank_factorial(r: usize) -> f64 {
    (1..r).map(|k| k as f64).product()
}

/// rho = (r-1)! * alpha^{-1/r}.
pub fn rho_from_alpha(alpha: f64, r: usize) -> Result<f64> {
    if r < 2 {
        return Err(Error::InvalidParams(format!("rank {r} is below 2")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1]")));
    }
    Ok(rank_factorial(r) * alpha.powf(-1.0 / r as f64))
}

/// alpha = ((r-1)! / rho)^r, the inverse of `rho_from_alpha`.
pub fn alpha_from_rho(rho: f64, r: usize) -> Result<f64> {
    if r < 2 {
        return Err(Error::InvalidParams(format!("rank {r} is below 2")));
    }
    let fact = rank_factorial(r);
    if rho < fact {
        return Err(Error::Domain(format!(
            "rho {rho} below the single-edge minimum {fact}"
        )));
    }
    Ok((fact / rho).powi(r as i32))
}

/// The polynomial form P_H(x) = r! * sum over edges of the product of the
/// entries on the edge.
pub fn poly_form(h: &UniformHypergraph, x: &[f64]) -> Result<f64> {
    if x.len() != h.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: h.num_vertices(),
            actual: x.len(),
        });
    }
    let fact = rank_factorial(h.r()) * h.r() as f64;
    if h.r() >= 6 {
        let mut sum = Dd::new(0.0);
        for e in h.edges() {
            let mut p = Dd::new(1.0);
            for &v in e {
                p = p.mul(Dd::new(x[v]));
            }
            sum = sum.add(p);
        }
        Ok(fact * sum.value())
    } else {
        let mut sum = 0.0;
        for e in h.edges() {
            let mut p = 1.0;
            for &v in e {
                p *= x[v];
            }
            sum += p;
        }
        Ok(fact * sum)
    }
}

/// Applies the adjacency tensor: y_v = (r-1)! * sum_{e: v in e} of the
/// product over the other r-1 entries. Satisfies sum_v x_v y_v = P_H(x).
pub fn apply_tensor(h: &UniformHypergraph, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != h.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: h.num_vertices(),
            actual: x.len(),
        });
    }
    let mut y = vec![0.0; h.num_vertices()];
    accumulate_tensor(h, x, &mut y);
    Ok(y)
}

/// Leave-one-out products per edge via prefix/suffix sweeps; no divisions,
/// so zero entries are handled exactly.
fn accumulate_tensor(h: &UniformHypergraph, x: &[f64], y: &mut [f64]) {
    let r = h.r();
    let fact = rank_factorial(r);
    if r >= 6 {
        let mut prefix = vec![Dd::new(1.0); r + 1];
        let mut suffix = vec![Dd::new(1.0); r + 1];
        for e in h.edges() {
            for (i, &v) in e.iter().enumerate() {
                prefix[i + 1] = prefix[i].mul(Dd::new(x[v]));
            }
            for (i, &v) in e.iter().enumerate().rev() {
                suffix[i] = suffix[i + 1].mul(Dd::new(x[v]));
            }
            for (i, &v) in e.iter().enumerate() {
                y[v] += fact * prefix[i].mul(suffix[i + 1]).value();
            }
        }
    } else {
        let mut prefix = [1.0f64; 9];
        let mut suffix = [1.0f64; 9];
        for e in h.edges() {
            for (i, &v) in e.iter().enumerate() {
                prefix[i + 1] = prefix[i] * x[v];
            }
            suffix[r] = 1.0;
            for (i, &v) in e.iter().enumerate().rev() {
                suffix[i] = suffix[i + 1] * x[v];
            }
            for (i, &v) in e.iter().enumerate() {
                y[v] += fact * prefix[i] * suffix[i + 1];
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PowerSettings {
    pub tol: f64,
    pub max_iter: u64,
    /// Diagonal shift added as shift * x_v^{r-1}; `None` selects
    /// (r-1)! * (max degree), which keeps the iteration map increasing and
    /// aperiodic.
    pub shift: Option<f64>,
}

impl Default for PowerSettings {
    fn default() -> Self {
        PowerSettings {
            tol: 1e-12,
            max_iter: 1_000_000,
            shift: None,
        }
    }
}

/// Spectral radius estimate with its Perron vector.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub rho: f64,
    /// Strictly positive, normalized to r-norm 1.
    pub perron: Vec<f64>,
    /// max_v | rho * x_v^{r-1} - (r-1)! * sum_{e: v in e} prod_{u != v} x_u |
    pub residual: f64,
    pub iterations: u64,
    pub converged: bool,
}

/// Shifted nonnegative-tensor power iteration with Collatz-Wielandt bounds.
///
/// Each step maps x to (A x + shift * x^{r-1})^{1/(r-1)} renormalized to the
/// r-norm sphere; the ratios y_v / x_v^{r-1} sandwich rho + shift at every
/// iteration and the loop stops once their relative spread is below `tol`.
/// Deterministic: the start vector is all-ones renormalized.
///
/// ```
/// use hyperrho::{make_cycle, power_method, PowerSettings};
///
/// let c5 = make_cycle(5, 3).unwrap();
/// let res = power_method(&c5, &PowerSettings::default()).unwrap();
/// // cycles sit exactly at the (r-1)! * 4^{1/r} threshold
/// assert!((res.rho - 2.0 * 4f64.powf(1.0 / 3.0)).abs() < 1e-9);
/// ```
pub fn power_method(h: &UniformHypergraph, settings: &PowerSettings) -> Result<SpectralResult> {
    if h.num_edges() == 0 {
        return Err(Error::InvalidParams(
            "spectral radius of an edgeless hypergraph".into(),
        ));
    }
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    let r = h.r();
    let nv = h.num_vertices();
    let exponent = (r - 1) as f64;
    let fact = rank_factorial(r);
    let shift = settings
        .shift
        .unwrap_or_else(|| fact * h.vertex_degrees().iter().copied().max().unwrap_or(1) as f64);

    let mut x = vec![1.0; nv];
    normalize_r(&mut x, r);
    let mut y = vec![0.0; nv];
    let mut iterations = 0u64;
    let mut bounds = (f64::NAN, f64::NAN);

    while iterations < settings.max_iter {
        iterations += 1;
        y.iter_mut().for_each(|v| *v = 0.0);
        accumulate_tensor(h, &x, &mut y);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for v in 0..nv {
            let xp = x[v].powf(exponent);
            y[v] += shift * xp;
            let ratio = y[v] / xp;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        bounds = (lo - shift, hi - shift);
        if (hi - lo) / hi < settings.tol {
            let rho = 0.5 * (lo + hi) - shift;
            let residual = eigen_residual(h, rho, &x);
            return Ok(SpectralResult {
                rho,
                perron: x,
                residual,
                iterations,
                converged: true,
            });
        }
        for v in 0..nv {
            x[v] = y[v].powf(1.0 / exponent);
        }
        normalize_r(&mut x, r);
    }

    Err(Error::NotConverged {
        lower: bounds.0,
        upper: bounds.1,
        iterations,
    })
}

fn normalize_r(x: &mut [f64], r: usize) {
    let norm: f64 = x
        .iter()
        .map(|v| v.powi(r as i32))
        .sum::<f64>()
        .powf(1.0 / r as f64);
    x.iter_mut().for_each(|v| *v /= norm);
}

fn eigen_residual(h: &UniformHypergraph, rho: f64, x: &[f64]) -> f64 {
    let exponent = (h.r() - 1) as f64;
    let ax = apply_tensor(h, x).expect("dimensions match");
    x.iter()
        .zip(ax)
        .map(|(&xv, av)| (rho * xv.powf(exponent) - av).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(r: usize, nv: usize, edges: &[&[usize]]) -> UniformHypergraph {
        UniformHypergraph::new(r, nv, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn poly_form_single_edge_on_sphere() {
        let g = h(3, 3, &[&[0, 1, 2]]);
        let t = (1.0f64 / 3.0).powf(1.0 / 3.0);
        let p = poly_form(&g, &[t, t, t]).unwrap();
        assert!((p - 2.0).abs() < 1e-12);
        assert_eq!(poly_form(&g, &[0.0, 0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn poly_form_two_graph_path() {
        let g = h(2, 3, &[&[0, 1], &[1, 2]]);
        let t = 1.0 / 3f64.sqrt();
        let p = poly_form(&g, &[t, t, t]).unwrap();
        assert!((p - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn apply_tensor_matches_examples() {
        let g = h(3, 3, &[&[0, 1, 2]]);
        assert_eq!(
            apply_tensor(&g, &[1.0, 1.0, 1.0]).unwrap(),
            vec![2.0, 2.0, 2.0]
        );

        let p = h(2, 3, &[&[0, 1], &[1, 2]]);
        assert_eq!(
            apply_tensor(&p, &[1.0, 1.0, 1.0]).unwrap(),
            vec![1.0, 2.0, 1.0]
        );
    }

    #[test]
    fn apply_tensor_is_homogeneous() {
        let g = h(3, 5, &[&[0, 1, 2], &[2, 3, 4]]);
        let x = [0.3, 0.7, 1.1, 0.2, 0.9];
        let y1 = apply_tensor(&g, &x).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let y2 = apply_tensor(&g, &scaled).unwrap();
        for (a, b) in y1.iter().zip(y2) {
            assert!((b - a * 4.0).abs() < 1e-12); // t^{r-1} = 4
        }
    }

    #[test]
    fn rayleigh_identity() {
        let g = h(3, 5, &[&[0, 1, 2], &[2, 3, 4]]);
        let x = [0.3, 0.7, 1.1, 0.2, 0.9];
        let y = apply_tensor(&g, &x).unwrap();
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let p = poly_form(&g, &x).unwrap();
        assert!((dot - p).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let g = h(3, 3, &[&[0, 1, 2]]);
        assert!(matches!(
            poly_form(&g, &[1.0, 1.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn single_edge_rho_is_factorial() {
        for r in 2..=5 {
            let g = UniformHypergraph::new(r, r, vec![(0..r).collect()]).unwrap();
            let res = power_method(&g, &PowerSettings::default()).unwrap();
            assert!((res.rho - rank_factorial(r)).abs() < 1e-10, "r={r}");
            assert!(res.converged);
            assert!(res.residual < 1e-10);
        }
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = h(3, 6, &[&[0, 1, 2], &[3, 4, 5]]);
        assert!(matches!(
            power_method(&g, &PowerSettings::default()),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn conversions_are_inverse() {
        for (alpha, r) in [(0.25, 3), (1.0, 3), (0.3, 4), (0.5, 2)] {
            let rho = rho_from_alpha(alpha, r).unwrap();
            let back = alpha_from_rho(rho, r).unwrap();
            assert!((back - alpha).abs() < 1e-14);
        }
        // threshold value
        let rho = rho_from_alpha(0.25, 3).unwrap();
        assert!((rho - 2.0 * 4f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert_eq!(rho_from_alpha(1.0, 3).unwrap(), 2.0);
    }

    #[test]
    fn not_converged_carries_bounds() {
        let g = h(3, 5, &[&[0, 1, 2], &[2, 3, 4]]);
        let settings = PowerSettings {
            tol: 1e-15,
            max_iter: 2,
            shift: None,
        };
        match power_method(&g, &settings) {
            Err(Error::NotConverged {
                lower,
                upper,
                iterations: 2,
            }) => {
                assert!(lower <= upper);
                assert!(lower > 0.0);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }
}
