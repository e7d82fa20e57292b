//! Built-in seven-point demo data used by the `example1` CLI command and by
//! the test suite.
//!
//! Five of the points sit close to the line `y = x`; the remaining two form
//! a cluster at high `x` with low `y` that drags a plain least-squares fit
//! almost flat. Trimmed criteria disagree about which line is better, which
//! makes this tiny set a useful end-to-end check.

use crate::regression::Dataset;

/// Predictor values of the demo points.
pub const TOY_X: [f64; 7] = [5.0, 5.5, 4.0, 3.5, 3.0, 2.5, -2.0];

/// Response values of the demo points.
pub const TOY_Y: [f64; 7] = [-0.5, -0.5, 6.0, 4.0, 2.4, 2.0, 0.5];

/// The seven demo observations as a [`Dataset`] with one predictor.
pub fn toy_line_data() -> Dataset {
    Dataset::from_columns(&[TOY_X.to_vec()], &TOY_Y).expect("demo data is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let d = toy_line_data();
        assert_eq!(d.n(), 7);
        assert_eq!(d.p(), 2);
        assert_eq!(d.predictor_row(6), &[-2.0]);
        assert_eq!(d.response(4), 2.4);
    }
}
