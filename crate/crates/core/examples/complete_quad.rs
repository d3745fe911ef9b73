// Distance across a quadrilateral of cities on a sphere the size of the Earth.

use spherical_frieze::cli;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::temp_dir().join(format!("complete-quad-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"a":"16698545","b":"6450827","c":"3250522","d":"4066169","e":"18213752"}"#)?;
    let k = (std::f64::consts::PI.powi(2) / 4e8).to_string();
    let out = cli::run([
        "sphfrieze",
        "complete-quad",
        path.to_str().ok_or("temp path")?,
        "--mode",
        "float",
        "--curvature",
        &k,
        "--sign",
        "+",
        "--geodesic",
    ]);
    std::fs::remove_file(&path)?;
    print!("{}", out.stdout);
    if out.code != 0 {
        return Err(out.stderr.into());
    }
    let v: serde_json::Value = serde_json::from_str(&out.stdout)?;
    let km: f64 = v["geodesic_f"].as_str().ok_or("no geodesic")?.parse()?;
    println!("second diagonal: {km:.1} km");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
