//! Shared fixtures for the criterion benchmarks.

use std::collections::BTreeMap;

use sonarforge_core::dataset::{job_scene, plan_jobs, SweepConfig};
use sonarforge_core::postproc::{Chain, NoiseSpec, PostStep, ReferenceSource};
use sonarforge_core::scene::{SeabedType, ShapeKind};
use sonarforge_core::{render, ImageBuffer, Scene};

/// One image per shape on the given seabed, with the standard
/// match-then-speckle chain.
pub fn sweep(size: usize, seabed: SeabedType) -> SweepConfig {
    let counts: BTreeMap<_, _> = [ShapeKind::Cylinder, ShapeKind::Cube, ShapeKind::Sphere]
        .into_iter()
        .map(|k| (k, 1))
        .collect();
    let mut cfg = SweepConfig::new(counts, 7);
    cfg.image_size = size;
    cfg.seabeds = vec![seabed];
    cfg.postproc = vec![
        PostStep::Match(ReferenceSource::Rayleigh { sigma: 0.25 }),
        PostStep::Noise(NoiseSpec::speckle(0.1, 0)),
    ];
    cfg
}

pub fn scene(size: usize, seabed: SeabedType) -> Scene {
    let cfg = sweep(size, seabed);
    let jobs = plan_jobs(&cfg).expect("valid sweep");
    job_scene(&cfg, &jobs[0]).expect("valid scene")
}

pub fn rendered(size: usize) -> ImageBuffer {
    render(&scene(size, SeabedType::Mud)).expect("render")
}

pub fn chain() -> Chain {
    Chain::load(&sweep(16, SeabedType::Mud).postproc).expect("valid chain")
}
