//! The library-usage snippet from the workspace README, kept compiling.

use wallach_core::algebra::AlgebraVector;
use wallach_core::{catalog, families, geodesic, metric::InvariantMetric};

fn main() -> Result<(), wallach_core::Error> {
    let space = catalog::parse_spec("stiefel_n:4")?;
    let (metric, _decimal) = InvariantMetric::parse("1,2,3")?;

    // Exact geodesic check
    let x = AlgebraVector::parse(space.algebra(), "e_12=1, e_34=2")?;
    let check = geodesic::is_geodesic_vector(&space, &metric, &x, 0.0)?;
    println!("geodesic: {}", check.ok);

    // Completion of a tangent vector
    let xm = space.project_m(&AlgebraVector::parse(space.algebra(), "e_13=1")?);
    let out = geodesic::complete(&space, &metric, &xm)?;
    println!("completion exists: {}", out.exists());

    // Exact solution families
    let report = families::enumerate(&space, &metric)?;
    println!("{} families", report.families.len());
    Ok(())
}
