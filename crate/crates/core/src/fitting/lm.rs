//! Levenberg-Marquardt for small dense least-squares problems.

use nalgebra::{DMatrix, DVector};

pub trait LeastSquares {
    fn residuals(&self, params: &DVector<f64>) -> DVector<f64>;
    fn jacobian(&self, params: &DVector<f64>) -> DMatrix<f64>;
    fn is_feasible(&self, _params: &DVector<f64>) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Stop when every component of the step satisfies
    /// `|δᵢ| ≤ xtol·(|pᵢ| + xtol)`.
    pub xtol: f64,
    pub lambda0: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iter: 200,
            xtol: 1e-10,
            lambda0: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmReport {
    pub params: DVector<f64>,
    /// Sum of squared residuals at `params`.
    pub rss: f64,
    pub iterations: usize,
    pub converged: bool,
}

const LAMBDA_MAX: f64 = 1e16;

fn small_step(step: &DVector<f64>, p: &DVector<f64>, xtol: f64) -> bool {
    step.iter()
        .zip(p.iter())
        .all(|(d, x)| d.abs() <= xtol * (x.abs() + xtol))
}

pub fn levenberg_marquardt<P: LeastSquares + ?Sized>(problem: &P, initial: DVector<f64>, opts: &LmOptions) -> LmReport {
    let mut p = initial;
    let mut r = problem.residuals(&p);
    let mut rss = r.norm_squared();
    let mut lambda = opts.lambda0;
    for iter in 1..=opts.max_iter {
        let j = problem.jacobian(&p);
        let a = j.transpose() * &j;
        let g = j.transpose() * &r;
        loop {
            let mut m = a.clone();
            for k in 0..m.nrows() {
                m[(k, k)] += lambda * a[(k, k)].max(1e-12);
            }
            let step = match m.cholesky() {
                Some(c) => -c.solve(&g),
                None => {
                    lambda *= 10.0;
                    if lambda > LAMBDA_MAX {
                        return LmReport {
                            params: p,
                            rss,
                            iterations: iter,
                            converged: false,
                        };
                    }
                    continue;
                }
            };
            let trial = &p + &step;
            let accepted = problem.is_feasible(&trial) && {
                let r_trial = problem.residuals(&trial);
                let rss_trial = r_trial.norm_squared();
                if rss_trial.is_finite() && rss_trial <= rss {
                    r = r_trial;
                    rss = rss_trial;
                    true
                } else {
                    false
                }
            };
            if accepted {
                p = trial;
                lambda = (lambda / 10.0).max(1e-12);
                if small_step(&step, &p, opts.xtol) {
                    return LmReport {
                        params: p,
                        rss,
                        iterations: iter,
                        converged: true,
                    };
                }
                break;
            }
            if small_step(&step, &p, opts.xtol) {
                // no downhill step left at this resolution
                return LmReport {
                    params: p,
                    rss,
                    iterations: iter,
                    converged: true,
                };
            }
            lambda *= 10.0;
            if lambda > LAMBDA_MAX {
                return LmReport {
                    params: p,
                    rss,
                    iterations: iter,
                    converged: false,
                };
            }
        }
    }
    LmReport {
        params: p,
        rss,
        iterations: opts.max_iter,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rosenbrock as residuals `(1 − x, 10(y − x²))`.
    struct Rosenbrock;

    impl LeastSquares for Rosenbrock {
        fn residuals(&self, p: &DVector<f64>) -> DVector<f64> {
            DVector::from_vec(vec![1.0 - p[0], 10.0 * (p[1] - p[0] * p[0])])
        }
        fn jacobian(&self, p: &DVector<f64>) -> DMatrix<f64> {
            DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, -20.0 * p[0], 10.0])
        }
    }

    #[test]
    fn solves_rosenbrock() {
        let rep = levenberg_marquardt(&Rosenbrock, DVector::from_vec(vec![-1.2, 1.0]), &LmOptions::default());
        assert!(rep.converged);
        assert!((rep.params[0] - 1.0).abs() < 1e-9 && (rep.params[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn reports_iteration_cap() {
        let opts = LmOptions {
            max_iter: 2,
            ..LmOptions::default()
        };
        let rep = levenberg_marquardt(&Rosenbrock, DVector::from_vec(vec![-1.2, 1.0]), &opts);
        assert!(!rep.converged);
        assert_eq!(rep.iterations, 2);
    }
}
