use std::time::Instant;

use sonarforge_core::dataset::{job_scene, noise_seed, plan_jobs, SweepConfig};
use sonarforge_core::postproc::Chain;
use sonarforge_core::{render, Error, Result};

use crate::report::{RunReport, Stats};

/// Renders and post-processes the first `n` jobs of the sweep (cycling if
/// the sweep is shorter), timing each stage per image.
///
/// Scene construction is timed separately from rendering. Runs on the
/// current rayon pool.
pub fn bench(cfg: &SweepConfig, n: usize) -> Result<RunReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("bench needs n >= 1".into()));
    }
    let jobs = plan_jobs(cfg)?;
    let chain = Chain::load(&cfg.postproc)?;
    let total = Instant::now();
    let (mut scene_t, mut render_t, mut post_t) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..n {
        let job = &jobs[i % jobs.len()];
        let t0 = Instant::now();
        let scene = job_scene(cfg, job)?;
        let t1 = Instant::now();
        let img = render(&scene)?;
        let t2 = Instant::now();
        let out = chain.apply(&img, |k, _| noise_seed(job.seed, k))?;
        let t3 = Instant::now();
        std::hint::black_box(out);
        scene_t.push((t1 - t0).as_secs_f64());
        render_t.push((t2 - t1).as_secs_f64());
        post_t.push((t3 - t2).as_secs_f64());
        log::info!("bench image {i}: render {:.3}s postproc {:.3}s", render_t[i], post_t[i]);
    }
    let mut report = RunReport::new("bench", rayon::current_num_threads());
    report.stage("scene", scene_t.iter().sum());
    report.stage("render", render_t.iter().sum());
    report.stage("postproc", post_t.iter().sum());
    report.stage("total", total.elapsed().as_secs_f64());
    report.render_seconds = Stats::of(&render_t);
    report.postproc_seconds = Stats::of(&post_t);
    report.images_produced = n;
    report.detail("image_size", cfg.image_size);
    report.detail("scene_seconds", Stats::of(&scene_t));
    Ok(report)
}
