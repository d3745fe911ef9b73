// A Cayley-Menger frieze needs a path and its shifted copy.

use spherical_frieze::frieze::{cm_frieze_from_thickened_path, frieze_from_polygon, FriezeKind, PropagationOptions, Step, ThickenedPath};
use spherical_frieze::geometry::random_polygon;
use spherical_frieze::geometry::SphereConfig;
use spherical_frieze::numeric::q;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SphereConfig::from_radius(q(7))?;
    let pts = random_polygon(11, 7, &cfg);
    let z = frieze_from_polygon(&pts, FriezeKind::CayleyMenger, (-7, 14))?;

    let tp = ThickenedPath::extract(&z, 3, &Step::parse_word("ULULU")?)?;
    println!("{} prescribed values for n = 7", tp.len());
    let rebuilt = cm_frieze_from_thickened_path(&tp, cfg.k(), (0, 7), &PropagationOptions::default())?;
    if rebuilt != z.cropped(0, 7)? {
        return Err("thickened path did not determine the frieze".into());
    }
    println!("rebuilt {} entries", rebuilt.nodes.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
