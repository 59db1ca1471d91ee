//! Central finite differences, used as an independent check on the
//! hand-derived backward passes.

use super::{Matrix, ParamTensor};

pub const DEFAULT_STEP: f64 = 1e-5;

/// Estimate `∂f/∂θ` for every entry of every parameter by central
/// differences. Parameters are perturbed in place and restored exactly.
pub fn finite_diff_grad<F>(mut f: F, params: &mut [ParamTensor], h: f64) -> Vec<Matrix>
where
    F: FnMut(&[ParamTensor]) -> f64,
{
    assert!(h > 0.0, "finite-difference step must be positive");
    let mut grads: Vec<Matrix> = params
        .iter()
        .map(|p| Matrix::zeros(p.value.rows(), p.value.cols()))
        .collect();
    for pi in 0..params.len() {
        for k in 0..params[pi].len() {
            let orig = params[pi].value.as_slice()[k];
            params[pi].value.as_mut_slice()[k] = orig + h;
            let up = f(params);
            params[pi].value.as_mut_slice()[k] = orig - h;
            let down = f(params);
            params[pi].value.as_mut_slice()[k] = orig;
            grads[pi].as_mut_slice()[k] = (up - down) / (2.0 * h);
        }
    }
    grads
}

/// `‖analytic − numeric‖∞ / max(1, ‖numeric‖∞)` over a whole parameter set.
pub fn relative_error(analytic: &[Matrix], numeric: &[Matrix]) -> f64 {
    assert_eq!(analytic.len(), numeric.len());
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (a, n) in analytic.iter().zip(numeric) {
        assert_eq!(a.shape(), n.shape());
        for (x, y) in a.as_slice().iter().zip(n.as_slice()) {
            diff = diff.max((x - y).abs());
            scale = scale.max(y.abs());
        }
    }
    diff / scale.max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::functions::cross_entropy;

    fn scalar(v: f64) -> ParamTensor {
        ParamTensor::new("theta", Matrix::from_vec(1, 1, vec![v]).unwrap())
    }

    #[test]
    fn square_at_three() {
        let mut p = [scalar(3.0)];
        let g = finite_diff_grad(|ps| ps[0].value[(0, 0)].powi(2), &mut p, DEFAULT_STEP);
        assert!((g[0][(0, 0)] - 6.0).abs() < 1e-6);
        assert_eq!(p[0].value[(0, 0)], 3.0);
    }

    #[test]
    fn constant_function() {
        let mut p = [scalar(-1.0), ParamTensor::new("m", Matrix::zeros(2, 3))];
        let g = finite_diff_grad(|_| 4.2, &mut p, DEFAULT_STEP);
        assert!(g.iter().all(|m| m.max_abs() < 1e-9));
    }

    #[test]
    fn linear_layer_with_cross_entropy() {
        // logits = W x + b; analytic grads are (p - y) xᵀ and (p - y).
        let x = [0.3, -1.2, 0.8];
        let w = Matrix::from_rows(&[vec![0.1, -0.4, 0.25], vec![-0.3, 0.2, 0.5]]).unwrap();
        let b = Matrix::from_vec(2, 1, vec![0.05, -0.1]).unwrap();
        let label = 1;
        let loss = |ps: &[ParamTensor]| {
            let z = ps[0].value.matvec(&x).unwrap();
            let logits = [z[0] + ps[1].value[(0, 0)], z[1] + ps[1].value[(1, 0)]];
            cross_entropy(logits, label).0
        };
        let mut params = [
            ParamTensor::new("w", w.clone()),
            ParamTensor::new("b", b.clone()),
        ];
        let numeric = finite_diff_grad(loss, &mut params, DEFAULT_STEP);

        let z = w.matvec(&x).unwrap();
        let (_, dz) = cross_entropy([z[0] + b[(0, 0)], z[1] + b[(1, 0)]], label);
        let mut dw = Matrix::zeros(2, 3);
        dw.add_outer(&dz, &x);
        let db = Matrix::from_vec(2, 1, dz.to_vec()).unwrap();
        assert!(relative_error(&[dw, db], &numeric) < 1e-5);
    }
}
