//! Tester for the frame property of Gabor systems `G(g, alpha, beta)` on
//! rational lattices.
//!
//! The pipeline classifies a lattice in three ways, strongest first:
//!
//! 1. structural density check (`p > q` can never give a frame),
//! 2. exact obstruction certificates for windows that form a partition of
//!    unity (integer `beta >= 2`, and the unit-fraction family handled by
//!    [`obstructions`]), verified in exact rational arithmetic,
//! 3. a numeric scan of the smallest singular value of the Zak-sample rank
//!    matrix over a grid of `(x, xi)` points.
//!
//! Modules build on each other bottom-up: [`rational`] (exact arithmetic and
//! the `p/q` density split), [`windows`] (B-splines, characteristic windows,
//! Gaussians), [`zak`] (Zak transform evaluation), [`pmatrix`] (the `p x q`
//! rank matrix), [`ranktest`] (numeric singular values and exact rank),
//! [`obstructions`] (certificates), [`frameset`] (verdict pipeline, plane
//! scans, heatmaps), and [`cli`].

pub mod cli;
pub mod frameset;
pub mod obstructions;
pub mod pmatrix;
pub mod ranktest;
pub mod rational;
pub mod windows;
pub mod zak;

pub use rational::Rational;
