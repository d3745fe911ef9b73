// The diamond relations on a random spherical quadrilateral.

use spherical_frieze::diamond::{heronian_check, scm4, scm_partial, CayleyMengerDiamond, HeronianDiamond, PartialDirection};
use spherical_frieze::geometry::{random_polygon, s_kappa, sq_dist, SphereConfig};
use spherical_frieze::numeric::{q, TolerancePolicy};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SphereConfig::from_radius(q(5))?;
    let p = random_polygon(3, 4, &cfg);
    let x = |i: usize, j: usize| sq_dist(&p[i], &p[j]);
    let s = |i: usize, j: usize, k: usize| s_kappa(&p[i], &p[j], &p[k]);
    let v = [x(0, 3)?, x(0, 1)?, x(1, 2)?, x(2, 3)?, x(0, 2)?, x(1, 3)?, s(0, 1, 2)?, s(0, 2, 3)?, s(0, 1, 3)?, s(1, 2, 3)?];
    let d = HeronianDiamond::from_array(v.clone());
    let k = cfg.k();

    let report = heronian_check(&d, k, &TolerancePolicy::exact());
    println!("diamond residuals: {:?}", report.residuals.iter().map(|r| r.to_string()).collect::<Vec<_>>());
    let cm = CayleyMengerDiamond::from_array([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone(), v[5].clone()]);
    println!("M_4 = {}", scm4(&cm, k));
    // the right partial is -2pq
    let right = scm_partial(PartialDirection::Right, &cm, k);
    println!("dM/df = {right}, -2pq = {}", -(q(2) * &v[6] * &v[7]));
    if !report.pass || right != -(q(2) * &v[6] * &v[7]) {
        return Err("identity failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
