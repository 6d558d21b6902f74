//! Quadrature rules and a one-dimensional extremum search.
//!
//! Nodes of the Gaussian rules are found by Newton iteration on the
//! orthogonal-polynomial recurrences.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

const NEWTON_EPS: f64 = 3e-14;
const NEWTON_MAXIT: usize = 100;

/// Gauss-Hermite rule for `int exp(-x^2) f(x) dx` over the real line.
pub fn gauss_hermite(n: usize) -> Result<Rule> {
    if n == 0 {
        return Err(Error::Config("Gauss-Hermite rule needs at least one node".into()));
    }
    // pi^(-1/4)
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        let mut converged = false;
        for _ in 0..NEWTON_MAXIT {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= NEWTON_EPS * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Config(format!(
                "Gauss-Hermite node {i} of {n} did not converge"
            )));
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    Ok(Rule {
        nodes: x,
        weights: w,
    })
}

/// Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Rule> {
    if n == 0 {
        return Err(Error::Config("Gauss-Legendre rule needs at least one node".into()));
    }
    let nf = n as f64;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Legendre P_n(z) and its derivative
        let legendre = |z: f64| {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            (p1, nf * (z * p1 - p2) / (z * z - 1.0))
        };
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..NEWTON_MAXIT {
            let (p, dp) = legendre(z);
            let z1 = z;
            z = z1 - p / dp;
            if (z - z1).abs() <= NEWTON_EPS {
                break;
            }
        }
        let (_, pp) = legendre(z);
        x[i] = mid - half * z;
        x[n - 1 - i] = mid + half * z;
        w[i] = 2.0 * half / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    Ok(Rule {
        nodes: x,
        weights: w,
    })
}

/// Average of `f(k / k0)` over a normalized Gaussian spectrum of relative
/// width `epsilon`, using the supplied Gauss-Hermite rule.
pub fn gaussian_average(rule: &Rule, epsilon: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let norm = PI.sqrt();
    rule.integrate(|x| f(1.0 + epsilon * std::f64::consts::SQRT_2 * x)) / norm
}

/// Composite midpoint rule with `n` cells on `[a, b]`.
///
/// Exact for trigonometric polynomials whose period divides `b - a` and
/// whose degree is below `n`.
pub fn midpoint(n: usize, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|j| f(a + (j as f64 + 0.5) * h)).sum::<f64>() * h
}

/// Rule for integrals over the real line via the substitution `y = tan t`.
///
/// The transformed integrand `f(tan t) sec^2 t` is sampled with an `n`-cell
/// midpoint rule on `(-pi/2, pi/2)`, which never touches the endpoints. The
/// returned nodes are the `y` values and the weights absorb `sec^2 t`.
pub fn tan_substitution_rule(n: usize) -> Rule {
    let h = PI / n as f64;
    let (nodes, weights) = (0..n)
        .map(|j| {
            let y = (-PI / 2.0 + (j as f64 + 0.5) * h).tan();
            (y, h * (1.0 + y * y))
        })
        .unzip();
    Rule { nodes, weights }
}

/// Integral of `f` over the real line, see [`tan_substitution_rule`].
pub fn integrate_real_line_tan(n: usize, f: impl FnMut(f64) -> f64) -> f64 {
    tan_substitution_rule(n).integrate(f)
}

/// Long-run mean of `f` for a `2 pi`-periodic signal under the Gaussian
/// envelope `exp(-epsilon^2 x^2 / 2)`.
///
/// Integrates over a symmetric window of whole periods, `[-m pi, m pi]`, wide
/// enough (`epsilon * m * pi >= 8`) for the envelope to be below `2e-14` at the
/// edges; for `epsilon = 0` one period is used. The oscillating part then
/// integrates to zero and only the mean level survives.
pub fn damped_period_mean(epsilon: f64, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::Domain(format!("relative bandwidth must be >= 0, got {epsilon}")));
    }
    let periods = if epsilon == 0.0 {
        1
    } else {
        (8.0 / (PI * epsilon)).ceil().max(1.0) as usize
    };
    let half = periods as f64 * PI;
    let rule = gauss_legendre(24, 0.0, 2.0 * PI)?;
    let total: f64 = (0..periods)
        .map(|p| {
            let start = -half + p as f64 * 2.0 * PI;
            rule.integrate(|x| f(start + x))
        })
        .sum();
    Ok(total / (2.0 * half))
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping when the
/// bracket is narrower than `tol`.
pub fn golden_section_min(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    // bracket shrinks geometrically; the cap only guards against tol = 0
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Refine an extremum of a smooth function by repeated three-point parabolic
/// vertex steps of width `h`. Works for minima and maxima alike.
pub fn parabolic_polish(mut f: impl FnMut(f64) -> f64, mut x: f64, h: f64, steps: usize) -> f64 {
    for _ in 0..steps {
        let fm = f(x - h);
        let f0 = f(x);
        let fp = f(x + h);
        let curvature = fp - 2.0 * f0 + fm;
        if curvature == 0.0 || !curvature.is_finite() {
            break;
        }
        let step = 0.5 * h * (fp - fm) / curvature;
        if !step.is_finite() || step.abs() > 4.0 * h {
            break;
        }
        x -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    x
}
