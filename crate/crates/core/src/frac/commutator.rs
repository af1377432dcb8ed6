use super::spectral_power;
use crate::error::{Error, Result};
use crate::grid::ScalarField;

/// `H_α(a, b) = Λ^α(ab) - b Λ^α a - a Λ^α b` with spectral `Λ^α`.
pub fn commutator_h(a: &ScalarField, b: &ScalarField, alpha: f64) -> Result<ScalarField> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", alpha, "needs alpha in (0, 1)"));
    }
    a.grid().check_same(b.grid())?;
    let ab = a.zip_with(b, |x, y| x * y);
    let l_ab = spectral_power(&ab, alpha);
    let l_a = spectral_power(a, alpha);
    let l_b = spectral_power(b, alpha);
    let samples = (0..a.samples().len())
        .map(|i| {
            // Grouping the product terms makes H exactly symmetric in (a, b).
            l_ab.samples()[i] - (b.samples()[i] * l_a.samples()[i] + a.samples()[i] * l_b.samples()[i])
        })
        .collect();
    ScalarField::new(*a.grid(), samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn vanishes_against_constants_and_is_symmetric() {
        let g = make_grid(2, 16, 2.0 * PI).unwrap();
        let a = ScalarField::from_fn(g, |p| (p[0] + p[1]).sin() + 0.2 * (3.0 * p[1]).cos());
        let b = ScalarField::from_fn(g, |p| (2.0 * p[0]).cos() * p[1].sin());
        let c = ScalarField::constant(g, 1.7);
        assert!(commutator_h(&a, &c, 0.5).unwrap().max_abs() < 1e-10);
        let ab = commutator_h(&a, &b, 0.3).unwrap();
        let ba = commutator_h(&b, &a, 0.3).unwrap();
        assert_eq!(ab.samples(), ba.samples());
    }

    #[test]
    fn closed_form_for_cosine_square() {
        let g = make_grid(1, 64, 2.0 * PI).unwrap();
        let a = ScalarField::from_fn(g, |p| p[0].cos());
        for &alpha in &[0.25, 0.5, 0.75] {
            let h = commutator_h(&a, &a, alpha).unwrap();
            let expect =
                ScalarField::from_fn(g, |p| (2f64.powf(alpha - 1.0) - 1.0) * (2.0 * p[0]).cos() - 1.0);
            assert!(h.max_abs_diff(&expect) < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_order_and_grids() {
        let g = make_grid(1, 16, 1.0).unwrap();
        let g2 = make_grid(1, 32, 1.0).unwrap();
        let a = ScalarField::zeros(g);
        assert!(commutator_h(&a, &a, 1.0).is_err());
        assert!(commutator_h(&a, &ScalarField::zeros(g2), 0.5).is_err());
    }
}
