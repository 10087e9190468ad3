use crate::error::Result;
use crate::riemann::{classify_and_solve, RiemannData};
use crate::scalar::Real;
use crate::state::{analytic_flux, Direction, GasParams, PrimState};

/// Exact Godunov flux: F of the self-similar solution at ξ = 0.
///
/// x₂ fluxes solve the problem with x₁ and x₂ exchanged.
pub fn godunov_flux<T: Real>(g: &GasParams<T>, sl: &PrimState<T>, sr: &PrimState<T>, dir: Direction) -> Result<[T; 3]> {
    if sl == sr {
        return Ok(analytic_flux(g, sl, dir));
    }
    match dir {
        Direction::X1 => {
            let fan = classify_and_solve(&RiemannData::new(*g, *sl, *sr))?;
            Ok(analytic_flux(g, &fan.sample(T::zero()), Direction::X1))
        }
        Direction::X2 => {
            let fan = classify_and_solve(&RiemannData::new(*g, sl.swapped(), sr.swapped()))?;
            Ok(analytic_flux(g, &fan.sample(T::zero()).swapped(), Direction::X2))
        }
    }
}
