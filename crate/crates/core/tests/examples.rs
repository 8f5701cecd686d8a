#[allow(dead_code)]
mod energy_basics {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/energy_basics.rs"));
}

#[test]
fn energy_basics_runs() {
    energy_basics::run_example().expect("energy_basics example should run");
}

#[allow(dead_code)]
mod optimize_sphere {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/optimize_sphere.rs"));
}

#[test]
fn optimize_sphere_runs() {
    optimize_sphere::run_example().expect("optimize_sphere example should run");
}

#[allow(dead_code)]
mod scaling_interval {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scaling_interval.rs"));
}

#[test]
fn scaling_interval_runs() {
    scaling_interval::run_example().expect("scaling_interval example should run");
}

#[allow(dead_code)]
mod equidistribution_torus {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/equidistribution_torus.rs"));
}

#[test]
fn equidistribution_torus_runs() {
    equidistribution_torus::run_example().expect("equidistribution_torus example should run");
}

#[allow(dead_code)]
mod separation_cube {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/separation_cube.rs"));
}

#[test]
fn separation_cube_runs() {
    separation_cube::run_example().expect("separation_cube example should run");
}

#[allow(dead_code)]
mod split_fraction {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/split_fraction.rs"));
}

#[test]
fn split_fraction_runs() {
    split_fraction::run_example().expect("split_fraction example should run");
}

#[allow(dead_code)]
mod tiling {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tiling.rs"));
}

#[test]
fn tiling_runs() {
    tiling::run_example().expect("tiling example should run");
}

#[allow(dead_code)]
mod constants_table {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/constants_table.rs"));
}

#[test]
fn constants_table_runs() {
    constants_table::run_example().expect("constants_table example should run");
}

#[allow(dead_code)]
mod stereographic {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/stereographic.rs"));
}

#[test]
fn stereographic_runs() {
    stereographic::run_example().expect("stereographic example should run");
}

#[allow(dead_code)]
mod atlas_helix {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/atlas_helix.rs"));
}

#[test]
fn atlas_helix_runs() {
    atlas_helix::run_example().expect("atlas_helix example should run");
}
