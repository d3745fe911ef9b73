// Forget the midpoints of a Heronian frieze and put them back.

use num_traits::Signed;
use spherical_frieze::diamond::Sign;
use spherical_frieze::frieze::{frieze_from_polygon, frieze_lift, frieze_restrict, lift_seed, FriezeKind};
use spherical_frieze::geometry::hexagon_radius7;
use spherical_frieze::numeric::TolerancePolicy;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let pol = TolerancePolicy::exact();
    let (_, pts) = hexagon_radius7();
    let z = frieze_from_polygon(&pts, FriezeKind::Heronian, (0, 6))?;
    let cm = frieze_restrict(&z, &pol)?;

    let seed = lift_seed(&cm).ok_or("no square seed")?;
    let sign = if z.get(seed).is_some_and(|v| v.is_negative()) { Sign::Minus } else { Sign::Plus };
    println!("seed {seed}, sign {sign:?}");
    let back = frieze_lift(&cm, sign, &pol)?;
    let mirror = frieze_lift(&cm, if sign == Sign::Plus { Sign::Minus } else { Sign::Plus }, &pol)?;
    if back != z || mirror != z.negate_midpoints() {
        return Err("lift did not invert restrict".into());
    }
    println!("two lifts over {} integer entries", cm.nodes.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
