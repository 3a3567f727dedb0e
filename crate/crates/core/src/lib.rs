//! Synthetic side-scan sonar imagery.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`scene`] builds a seabed heightfield (ripples, mud or rock), rests
//!    target primitives on it, and rigs a nadir camera with a low-grazing
//!    directional light tied to the camera's across-track axis.
//! 2. [`render`] ray-casts the scene; a shadow ray per hit turns the low
//!    light into long acoustic-style shadows behind each target.
//! 3. [`postproc`] converts renders to sonar-like intensity: grayscale,
//!    histogram matching, Gaussian/speckle/Poisson noise, copper colormap,
//!    and port/starboard stitching around a nadir dead-zone.
//! 4. [`dataset`] sweeps shapes, seabeds and aspect angles into labelled
//!    datasets, and [`atr`] trains and scores a HOG + linear SVM classifier.

pub mod atr;
pub mod dataset;
pub mod error;
pub mod geom;
pub mod image;
pub mod postproc;
pub mod render;
pub mod scene;
pub mod seed;

pub use error::{Error, Result};
pub use geom::{Hit, Ray, Vec3};
pub use image::ImageBuffer;
pub use render::{render, render_with_threads};
pub use scene::{
    Camera, DirectionalLight, Heightfield, Pose, Scene, SceneBuilder, SeabedSpec, SeabedType, Shape,
    ShapeKind, TargetPrimitive,
};
