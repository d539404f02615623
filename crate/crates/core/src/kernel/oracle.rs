//! Direct quadrature of `int exp(i S(z) / hbar) dz` for cross-checking the
//! closed-form Gaussian kernel.
//!
//! Nothing here reuses the symbolic quadratic form: the stationary point and
//! Hessian come from finite differences of `S` itself, the linear algebra is
//! a local Gaussian elimination, and the integrand evaluates `S` at complex
//! points. The contour is rotated by `exp(i pi/4)` through the stationary
//! point, which turns the oscillatory integrand into a decaying one when the
//! Hessian is positive definite. A damping factor `exp(-eta (z - z*)^2)`
//! (continued along the contour) is applied for `eta` in {1e-2, 1e-3, 1e-4}
//! and the results are extrapolated to `eta = 0` by a quadratic fit.

use num_complex::Complex64;

use super::{DiscreteAction, KernelError, PathGrid};
use crate::quadrature::GaussLegendre;

const ETAS: [f64; 3] = [1e-2, 1e-3, 1e-4];
const BOX_SIGMAS: f64 = 9.0;
const POINTS: usize = 40;

/// Solves `a x = b` by elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c] == 0.0 {
            return None;
        }
        a.swap(c, piv);
        b.swap(c, piv);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn positive_definite(a: &[Vec<f64>]) -> bool {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d <= 0.0 {
                    return false;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    true
}

/// `int_{R^dim} exp(i s(z) / hbar) dz` for a quadratic phase `s` that is
/// analytic in `z`.
pub fn oscillatory_integral(
    dim: usize,
    hbar: f64,
    s: impl Fn(&[Complex64]) -> Complex64,
) -> Result<Complex64, KernelError> {
    let real = |z: &[f64]| {
        let zc: Vec<Complex64> = z.iter().map(|x| Complex64::new(*x, 0.0)).collect();
        s(&zc).re
    };
    if dim == 0 {
        return Ok(Complex64::from_polar(1.0, real(&[]) / hbar));
    }
    let unit = |i: usize, x: f64| {
        let mut z = vec![0.0; dim];
        z[i] = x;
        z
    };
    let s0 = real(&vec![0.0; dim]);
    let grad: Vec<f64> = (0..dim)
        .map(|i| 0.5 * (real(&unit(i, 1.0)) - real(&unit(i, -1.0))))
        .collect();
    let mut hess = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        hess[i][i] = real(&unit(i, 1.0)) - 2.0 * s0 + real(&unit(i, -1.0));
        for j in 0..i {
            let pt = |a: f64, b: f64| {
                let mut z = vec![0.0; dim];
                z[i] = a;
                z[j] = b;
                real(&z)
            };
            let h = 0.25 * (pt(1.0, 1.0) - pt(1.0, -1.0) - pt(-1.0, 1.0) + pt(-1.0, -1.0));
            hess[i][j] = h;
            hess[j][i] = h;
        }
    }
    if !positive_definite(&hess) {
        return Err(KernelError::Oracle(
            "contour rotation needs a positive-definite quadratic form".into(),
        ));
    }
    let neg_grad: Vec<f64> = grad.iter().map(|g| -g).collect();
    let center = solve(hess.clone(), neg_grad).ok_or(KernelError::DegenerateQuadraticForm)?;
    // Marginal widths of the rotated Gaussian exp(-u^T H u / (2 hbar)).
    let sigma: Vec<f64> = (0..dim)
        .map(|i| {
            solve(hess.clone(), unit(i, 1.0))
                .map(|col| (hbar * col[i]).sqrt())
                .ok_or(KernelError::DegenerateQuadraticForm)
        })
        .collect::<Result<_, _>>()?;

    let rule = GaussLegendre::new(POINTS);
    let axes: Vec<Vec<(f64, f64)>> = sigma
        .iter()
        .map(|sg| rule.mapped(-BOX_SIGMAS * sg, BOX_SIGMAS * sg).collect())
        .collect();
    let rot = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let jacobian = rot.powu(dim as u32);
    let i_hbar = Complex64::new(0.0, 1.0 / hbar);

    let mut sums = [Complex64::new(0.0, 0.0); ETAS.len()];
    let mut idx = vec![0usize; dim];
    let mut z = vec![Complex64::new(0.0, 0.0); dim];
    loop {
        let mut weight = 1.0;
        let mut r2 = Complex64::new(0.0, 0.0);
        for d in 0..dim {
            let (u, w) = axes[d][idx[d]];
            let du = rot * u;
            z[d] = center[d] + du;
            r2 += du * du;
            weight *= w;
        }
        let base = (i_hbar * s(&z)).exp() * weight;
        for (sum, eta) in sums.iter_mut().zip(ETAS) {
            *sum += base * (-eta * r2).exp();
        }
        // Odometer over the tensor grid.
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < POINTS {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == dim {
                let values: Vec<Complex64> = sums.iter().map(|v| v * jacobian).collect();
                return Ok(extrapolate_to_zero(&ETAS, &values));
            }
        }
    }
}

/// Value at 0 of the quadratic through three points.
fn extrapolate_to_zero(x: &[f64; 3], y: &[Complex64]) -> Complex64 {
    (0..3)
        .map(|j| {
            let w: f64 = (0..3)
                .filter(|&m| m != j)
                .map(|m| (0.0 - x[m]) / (x[j] - x[m]))
                .product();
            y[j] * w
        })
        .sum()
}

/// Kernel of `action` with the boundary data of `grid`, by quadrature over
/// the interior nodes.
pub fn kernel_by_quadrature(
    action: &DiscreteAction,
    grid: &PathGrid,
    hbar: f64,
) -> Result<Complex64, KernelError> {
    let m = grid.slices - 1;
    let base: Vec<Vec<Complex64>> = grid
        .nodes
        .iter()
        .map(|n| n.iter().map(|x| Complex64::new(*x, 0.0)).collect())
        .collect();
    oscillatory_integral(grid.interior_len(), hbar, |z| {
        let mut nodes = base.clone();
        for (c, row) in nodes.iter_mut().enumerate() {
            row[1..=m].copy_from_slice(&z[c * m..(c + 1) * m]);
        }
        action.value_complex(&nodes)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{analyze, LagrangianModel};
    use crate::kernel::{discretize_action, gaussian_kernel_eval};
    use crate::parser::parse;
    use std::f64::consts::PI;

    #[test]
    fn one_dimensional_gaussian() {
        // int exp(i (z^2 + z)) dz = sqrt(pi) e^{i pi/4} e^{-i/4}
        let got = oscillatory_integral(1, 1.0, |z| z[0] * z[0] + z[0]).unwrap();
        let want = Complex64::from_polar(PI.sqrt(), PI / 4.0 - 0.25);
        // eta-extrapolation leaves a residual of order eta1*eta2*eta3.
        assert!((got - want).norm() < 1e-8, "{got} vs {want}");
    }

    #[test]
    fn indefinite_form_rejected() {
        assert!(oscillatory_integral(1, 1.0, |z| -z[0] * z[0]).is_err());
    }

    #[test]
    fn extrapolation_is_exact_for_quadratics() {
        let y: Vec<Complex64> = ETAS
            .iter()
            .map(|e| Complex64::new(3.0 - 2.0 * e + e * e, *e))
            .collect();
        let v = extrapolate_to_zero(&ETAS, &y);
        assert!((v - Complex64::new(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn free_kernel_composes() {
        let r = analyze(&LagrangianModel::new(1, parse("1/2*a1^2", 1).unwrap()).unwrap()).unwrap();
        let (v0, v2) = (0.3, -0.7);
        let whole = PathGrid::new(0.0, 1.0, 2, vec![1], &[v0], &[v2]).unwrap();
        let direct = discretize_action(&r, &whole).unwrap();
        let k = gaussian_kernel_eval(&direct.quadratic_form(&whole).unwrap(), 1.0).unwrap();

        let left = PathGrid::new(0.0, 0.5, 1, vec![1], &[v0], &[0.0]).unwrap();
        let right = PathGrid::new(0.5, 1.0, 1, vec![1], &[0.0], &[v2]).unwrap();
        let s_left = discretize_action(&r, &left).unwrap();
        let s_right = discretize_action(&r, &right).unwrap();
        let c = |x: f64| Complex64::new(x, 0.0);
        let composed = oscillatory_integral(1, 1.0, |z| {
            s_left.value_complex(&[vec![c(v0), z[0]]]) + s_right.value_complex(&[vec![z[0], c(v2)]])
        })
        .unwrap();
        assert!((k - composed).norm() / k.norm() < 1e-6);
    }

    #[test]
    fn fixture_three_interior_nodes() {
        let text = "1/2*(a1^2 + a2^2) - 1/2*(v1^2 + v2^2) + 1/2*x3^2 + v3*a3";
        let r = analyze(&LagrangianModel::new(3, parse(text, 3).unwrap()).unwrap()).unwrap();
        let t_end = std::f64::consts::FRAC_PI_4;
        let grid = PathGrid::new(0.0, t_end, 4, vec![1], &[1.0], &[t_end.cos()]).unwrap();
        let s = discretize_action(&r, &grid).unwrap();
        let gauss = gaussian_kernel_eval(&s.quadratic_form(&grid).unwrap(), 1.0).unwrap();
        let quad = kernel_by_quadrature(&s, &grid, 1.0).unwrap();
        let rel = (gauss - quad).norm() / gauss.norm();
        assert!(rel <= 1e-6, "{rel}");
    }
}
