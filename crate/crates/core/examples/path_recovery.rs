// Rebuild the whole frieze from the values along one traversing path.

use spherical_frieze::frieze::{frieze_from_path, frieze_from_polygon, FriezeKind, PropagationOptions, Step, TraversingPath};
use spherical_frieze::geometry::hexagon_radius7;
use spherical_frieze::numeric::{parse_rational, qr};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let steps = Step::parse_word("UUUU")?;
    let nodes = ["74", "-82", "50", "-528/7", "52", "-312/7", "26", "12", "70"]
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>, _>>()?;
    let lines = ["98", "74", "26", "140"].iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
    let path = TraversingPath::from_steps(6, 2, &steps, true, nodes, lines)?;

    let z = frieze_from_path(&path, &qr(1, 49), (0, 12), &PropagationOptions::default())?;
    let (_, pts) = hexagon_radius7();
    let want = frieze_from_polygon(&pts, FriezeKind::Heronian, (0, 12))?;
    println!("{} entries recovered from {} path values", z.nodes.len(), path.nodes.len() + path.lines.len());
    if z != want {
        return Err("recovered frieze differs from the hexagon's".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
