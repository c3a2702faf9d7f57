//! Measures each Plancherel constant from a Gaussian: c = ‖f‖² / Σ β|𝒢f|²
//! with the frozen constant divided out of the weights β.
//!
//!     cargo run --release -p gelfand-core --example calibrate_plancherel

use gelfand_core::families::{gaussian, quadrature_axes};
use gelfand_core::pairs::{PairId, ParamRange, RangeRule};
use gelfand_core::transform::{plancherel_constant, plancherel_grid, transform_on, PlancherelSpec};

fn main() -> Result<(), gelfand_core::Error> {
    println!("{:<8} {:>14} {:>14} {:>10}", "pair", "measured", "frozen", "ratio");
    for id in [PairId::FlatR1, PairId::E2, PairId::U1C, PairId::Heis1] {
        let pair = id.descriptor();
        let (f, spec) = if id == PairId::Heis1 {
            // the fan sum decays like e^{-2k|λ|}: small |λ| needs many rays
            let lambda = ParamRange::uniform(-8.0, 8.0, 320).with_rule(RangeRule::GaussLegendre);
            (gaussian(id, quadrature_axes(id, 9.0, 80), 1.0)?, PlancherelSpec::new(lambda).rays(256))
        } else {
            let lambda = ParamRange::uniform(0.0, 12.0, 200).with_rule(RangeRule::GaussLegendre);
            (gaussian(id, quadrature_axes(id, 12.0, 200), 1.0)?, PlancherelSpec::new(lambda))
        };
        let frozen = plancherel_constant(id);
        let g = transform_on(&pair, &f, &plancherel_grid(&pair, &spec)?)?;
        let measured = frozen * f.l2_norm().powi(2) / g.weighted_norm()?.powi(2);
        println!("{:<8} {:>14.10} {:>14.10} {:>10.6}", id.to_string(), measured, frozen, measured / frozen);
    }
    Ok(())
}
