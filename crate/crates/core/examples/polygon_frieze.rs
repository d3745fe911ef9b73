// Heronian and Cayley-Menger friezes of the radius-7 hexagon.

use spherical_frieze::frieze::{frieze_from_polygon, frieze_validate, FriezeKind};
use spherical_frieze::geometry::hexagon_radius7;
use spherical_frieze::io::render_ascii;
use spherical_frieze::numeric::{q, TolerancePolicy};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (_, pts) = hexagon_radius7();
    let z = frieze_from_polygon(&pts, FriezeKind::Heronian, (0, 6))?;
    print!("{}", render_ascii(&z));

    // x13 sits two rows up from the boundary
    assert_eq!(z.z(1, 3), Some(&q(56)));
    let cm = frieze_from_polygon(&pts, FriezeKind::CayleyMenger, (0, 6))?;
    let report = frieze_validate(&cm, &TolerancePolicy::exact());
    println!("cayley-menger checks: {} of {} pass", report.items.iter().filter(|c| c.pass).count(), report.items.len());
    if !report.passed() {
        return Err("validation failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
