//! Extrapolated central-difference differentiation.
//!
//! Used as the independent numerical route wherever an analytic derivative
//! needs cross-checking: the kernel-derivative test oracle and the
//! reference-solution residual diagnostics. Never used inside the solver
//! itself - differentiation matrices are built from closed forms.
//!
//! The estimator evaluates an order-n central difference on a geometric
//! ladder of step sizes and extrapolates the ladder to `h -> 0` twice: once
//! with polynomial (Richardson/Neville) and once with rational
//! (Bulirsch-Stoer) extrapolation, both in powers of `h²`. Each tableau
//! tracks a Ridders-style error estimate (disagreement between neighboring
//! entries); the returned value is the candidate whose estimate is smaller.
//! The rational tableau is what keeps slowly converging cases honest -
//! e.g. third derivatives of `(c²+s²)^{1/2}` with `c` far below `|s|`,
//! where the usable step window is narrow and the error series has
//! factorially growing coefficients.

const LEVELS: usize = 16;
const RATIO: f64 = 1.13;

/// n-th derivative (n in 1..=3) of `f` at `x`.
///
/// `h0` is the largest step of the ladder; choose it around half the length
/// scale on which `f` varies. Steps shrink geometrically from there.
pub fn nth_derivative<F: Fn(f64) -> f64>(f: F, x: f64, order: u32, h0: f64) -> f64 {
    assert!((1..=3).contains(&order), "order must be 1..=3");
    assert!(h0 > 0.0 && h0.is_finite(), "step must be positive and finite");

    let mut hs = [0.0f64; LEVELS];
    let mut vals = [0.0f64; LEVELS];
    let mut h = h0;
    for i in 0..LEVELS {
        hs[i] = h;
        vals[i] = stencil(&f, x, order, h);
        h /= RATIO;
    }

    let (poly, poly_err) = extrapolate(&vals, &hs, Tableau::Polynomial);
    let (rat, rat_err) = extrapolate(&vals, &hs, Tableau::Rational);
    if rat_err < poly_err {
        rat
    } else {
        poly
    }
}

fn stencil<F: Fn(f64) -> f64>(f: &F, x: f64, order: u32, h: f64) -> f64 {
    match order {
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        _ => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h),
    }
}

enum Tableau {
    Polynomial,
    Rational,
}

/// Neville-style tableau in h²; returns the entry minimizing the local
/// disagreement with its parents, plus that disagreement as error estimate.
fn extrapolate(vals: &[f64], hs: &[f64], kind: Tableau) -> (f64, f64) {
    let n = vals.len();
    // prev = row j-1, prev2 = row j-2 of the extrapolation tableau.
    let mut prev2 = vec![0.0f64; n];
    let mut prev = vals.to_vec();
    let mut best = vals[n - 1];
    let mut best_err = f64::INFINITY;

    for j in 1..n {
        let mut row = vec![0.0f64; n - j];
        for i in 0..n - j {
            let ratio2 = (hs[i] / hs[i + j]).powi(2);
            let below = prev[i + 1];
            let left = prev[i];
            let value = match kind {
                Tableau::Polynomial => (ratio2 * below - left) / (ratio2 - 1.0),
                Tableau::Rational => {
                    // Bulirsch-Stoer recurrence toward h = 0.
                    let inner = below - prev2[i + 1];
                    if inner == 0.0 {
                        below
                    } else {
                        let den = ratio2 * (1.0 - (below - left) / inner) - 1.0;
                        if den == 0.0 {
                            below
                        } else {
                            below + (below - left) / den
                        }
                    }
                }
            };
            let err = (value - below).abs().max((value - left).abs());
            if err <= best_err {
                best_err = err;
                best = value;
            }
            row[i] = value;
        }
        prev2 = std::mem::replace(&mut prev, row);
        prev2.truncate(n - j + 1);
    }
    (best, best_err)
}
