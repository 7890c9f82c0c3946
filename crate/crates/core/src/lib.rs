//! Discovery matrices from independent e-values.
//!
//! Given e-values `e_1, …, e_K` for `K` hypotheses, a discovery matrix
//! `DM_{r,j}` is an e-value for the claim that the `r` hypotheses with the
//! largest e-values contain at least `j` false nulls. This crate builds such
//! matrices from the U-statistic merging functions `U_n`, which are valid
//! for independent e-values, and provides what is needed to study them:
//!
//! - [`merge`]: `U_n` evaluators, the `U_2` power-sum identity, relative
//!   variance and the `e ↦ min(1, 1/e)` calibration;
//! - [`discovery`]: the matrix itself, with a from-scratch reference engine
//!   and an incremental `O(n·K³)` engine;
//! - [`sim`]: a seeded Gaussian study with likelihood-ratio e-values;
//! - [`baseline`]: closed testing with Simes local tests, for comparison;
//! - [`render`] and [`io`]: colour scales, SVG heatmaps and CSV.
//!
//! ```
//! use edisco::{discovery_matrix, EValueVec, UStatOrder};
//!
//! let e = EValueVec::new(vec![1.0, 2.0, 8.0])?;
//! let dm = discovery_matrix(&e, UStatOrder::MEAN);
//! assert_eq!(dm.query(3, 3)?, 1.0);
//! assert!((dm.query(1, 1)? - 11.0 / 3.0).abs() < 1e-12);
//! # Ok::<(), edisco::Error>(())
//! ```

pub mod baseline;
pub mod discovery;
mod error;
pub mod io;
pub mod merge;
pub mod render;
pub mod sim;

pub use crate::baseline::{ct_discovery_pmatrix, simes_p, PValueVec};
pub use crate::discovery::{
    build_dm_fast, build_dm_reference, discovery_matrix, dm_to_pmatrix, sort_evalues,
    DiscoveryMatrix, PMatrix, SortedEValues, TriMatrix,
};
pub use crate::error::{Error, Result};
pub use crate::merge::{
    e_to_p, rvar, u2_identity, u_stat_direct, EValueVec, UStatAccumulator, UStatOrder,
};
pub use crate::render::{compare_report, matrix_to_svg, ColorScale, Heatmap, RenderSpec};
pub use crate::sim::{gen_study, SimConfig, SimOutput};
