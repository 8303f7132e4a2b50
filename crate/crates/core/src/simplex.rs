//! Small deterministic Nelder-Mead simplex descent for low-dimensional
//! box-like problems (constraints handled by the objective as penalties).

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Convergence tolerance on simplex extent.
    pub x_tol: f64,
    /// Convergence tolerance on objective spread.
    pub f_tol: f64,
    pub max_iters: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions { x_tol: 1e-9, f_tol: 1e-10, max_iters: 400 }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iters: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0` with initial per-coordinate steps `step`.
///
/// Zero-dimensional problems return `x0` evaluated directly.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: &[f64],
    opts: SimplexOptions,
) -> SimplexResult {
    let dim = x0.len();
    if dim == 0 {
        let v = f(x0);
        return SimplexResult { x: vec![], f: v, iters: 0, converged: true };
    }
    assert_eq!(step.len(), dim);

    // standard coefficients
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    pts.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += if step[i] != 0.0 { step[i] } else { 1e-3 };
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();

    let mut iters = 0;
    let mut converged = false;
    while iters < opts.max_iters {
        iters += 1;
        // order: best first; stable sort keeps determinism on ties
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| pts[i].clone()).collect();
        let revals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
        pts = reordered;
        vals = revals;

        let spread = vals[dim] - vals[0];
        let extent = (0..dim)
            .map(|c| {
                let lo = pts.iter().map(|p| p[c]).fold(f64::INFINITY, f64::min);
                let hi = pts.iter().map(|p| p[c]).fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            })
            .fold(0.0_f64, f64::max);
        if spread <= opts.f_tol && extent <= opts.x_tol {
            converged = true;
            break;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0; dim];
        for p in pts.iter().take(dim) {
            for c in 0..dim {
                centroid[c] += p[c];
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let lin = |a: &[f64], b: &[f64], k: f64| -> Vec<f64> {
            (0..dim).map(|c| a[c] + k * (b[c] - a[c])).collect()
        };

        let reflected = lin(&centroid, &pts[dim], -alpha);
        let fr = f(&reflected);
        if fr < vals[0] {
            let expanded = lin(&centroid, &pts[dim], -gamma);
            let fe = f(&expanded);
            if fe < fr {
                pts[dim] = expanded;
                vals[dim] = fe;
            } else {
                pts[dim] = reflected;
                vals[dim] = fr;
            }
            continue;
        }
        if fr < vals[dim - 1] {
            pts[dim] = reflected;
            vals[dim] = fr;
            continue;
        }
        // contraction
        let (contracted, keep_outside) = if fr < vals[dim] {
            (lin(&centroid, &reflected, rho), true)
        } else {
            (lin(&centroid, &pts[dim], rho), false)
        };
        let fc = f(&contracted);
        let limit = if keep_outside { fr } else { vals[dim] };
        if fc <= limit {
            pts[dim] = contracted;
            vals[dim] = fc;
            continue;
        }
        // shrink toward the best
        for i in 1..=dim {
            pts[i] = lin(&pts[0], &pts[i], sigma);
            vals[i] = f(&pts[i]);
        }
    }

    let mut best = 0;
    for i in 1..=dim {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    SimplexResult { x: pts[best].clone(), f: vals[best], iters, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic() {
        let f = |x: &[f64]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let r = nelder_mead(f, &[0.0, 0.0], &[0.5, 0.5], SimplexOptions::default());
        assert!((r.x[0] - 1.5).abs() < 1e-6, "{:?}", r);
        assert!((r.x[1] + 0.5).abs() < 1e-6, "{:?}", r);
    }

    #[test]
    fn minimizes_piecewise_max() {
        // max of two planes, minimum along a crease
        let f = |x: &[f64]| (x[0] - 1.0).abs().max((x[0] + x[1]).abs());
        let r = nelder_mead(f, &[3.0, 3.0], &[1.0, 1.0], SimplexOptions::default());
        assert!(r.f < 1e-6, "{:?}", r);
    }

    #[test]
    fn zero_dimensional() {
        let r = nelder_mead(|_| 42.0, &[], &[], SimplexOptions::default());
        assert_eq!(r.f, 42.0);
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| x[0].powi(4) + x[1].powi(2) + 0.3 * (x[0] * x[1]).sin();
        let a = nelder_mead(f, &[2.0, -1.0], &[0.7, 0.7], SimplexOptions::default());
        let b = nelder_mead(f, &[2.0, -1.0], &[0.7, 0.7], SimplexOptions::default());
        assert_eq!(a.x, b.x);
        assert_eq!(a.f, b.f);
    }
}
