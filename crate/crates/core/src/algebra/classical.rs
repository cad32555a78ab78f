use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::element::Element;
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Evaluates `f` at `q = 1` with `z_a^α ↦ Z[α][a]` and `(z_a^α)* ↦ conj(Z[α][a])`.
pub fn classical_eval(f: &Element, z: &DMatrix<Complex64>) -> Result<Complex64> {
    let shape = f.shape();
    if z.nrows() != shape.m || z.ncols() != shape.n {
        return Err(Error::DimensionMismatch(shape.m, shape.n, z.nrows(), z.ncols()));
    }
    let one = Rational::from_integer(1.into());
    let mut total = Complex64::new(0.0, 0.0);
    for (mono, c) in f.terms() {
        let c1 = c.eval_rational(&one)?;
        let mut term = Complex64::new(c1.to_f64().unwrap_or(f64::NAN), 0.0);
        for g in 0..shape.gens() {
            let (a, alpha) = shape.col_row(g);
            let v = z[(alpha - 1, a - 1)];
            term *= v.powu(mono.z_exps()[g] as u32) * v.conj().powu(mono.zs_exps()[g] as u32);
        }
        total += term;
    }
    Ok(total)
}
