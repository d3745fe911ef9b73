//! Every example runs to completion.

mod polygon_frieze {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/polygon_frieze.rs"));
}
mod path_recovery {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/path_recovery.rs"));
}
mod thickened_path {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/thickened_path.rs"));
}
mod conversion {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/conversion.rs"));
}
mod complete_quad {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/complete_quad.rs"));
}
mod identities {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/identities.rs"));
}
mod laurent {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/laurent.rs"));
}

#[test]
fn polygon_frieze_runs() {
    polygon_frieze::run_example().expect("polygon_frieze");
}

#[test]
fn path_recovery_runs() {
    path_recovery::run_example().expect("path_recovery");
}

#[test]
fn thickened_path_runs() {
    thickened_path::run_example().expect("thickened_path");
}

#[test]
fn conversion_runs() {
    conversion::run_example().expect("conversion");
}

#[test]
fn complete_quad_runs() {
    complete_quad::run_example().expect("complete_quad");
}

#[test]
fn identities_runs() {
    identities::run_example().expect("identities");
}

#[test]
fn laurent_runs() {
    laurent::run_example().expect("laurent");
}
