//! Half-region depths, their local versions, and depth-based clustering for
//! functional data.
//!
//! Curves live in a [`FunctionalDataset`] sampled on a shared [`Grid`].
//! The crate computes:
//!
//! * global half-region (HR) and modified half-region (MHR) depths ([`depth`]);
//! * local depths restricted to slabs of half-width τ ([`local_depth`]);
//! * the finite-dimensional slab form with an inclusion–exclusion check
//!   ([`finite_dim`]);
//! * pairwise depth similarities and Gower dissimilarities ([`similarity`]);
//! * Ward clustering, tree cuts and silhouettes ([`clustering`]);
//! * Monte Carlo consistency experiments ([`montecarlo`]).
//!
//! ```
//! use fdepth::{depth_all, local_depth_all, DepthMethod, FunctionalDataset, TauFunction};
//!
//! let ds = FunctionalDataset::from_rows(&[vec![1.0; 4], vec![2.0; 4], vec![3.0; 4]])?;
//! let global = depth_all(&ds, DepthMethod::Hr);
//! assert_eq!(global.ranks, vec![2, 1, 3]);
//!
//! let tau = TauFunction::constant(0.5, ds.p())?;
//! let local = local_depth_all(&ds, &tau, DepthMethod::Hr)?;
//! assert_eq!(local.values, vec![1.0 / 3.0; 3]);
//! # Ok::<(), fdepth::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod clustering;
pub mod dataset;
pub mod depth;
mod error;
pub mod finite_dim;
pub mod local_depth;
pub mod montecarlo;
pub mod similarity;
pub mod synthetic;

pub use clustering::{
    adjusted_rand_index, cut_tree, silhouette, ward_linkage, ClusterLabels, Dendrogram, Merge,
    SilhouetteReport, WardVariant,
};
pub use dataset::{
    affine_transform, load_csv, pairwise_sup_distances, read_csv, select_tau, standardize_mad,
    sup_distance, validate, write_csv, FunctionalDataset, Grid, LoadOptions, TauFunction,
    TauSelection,
};
pub use depth::{
    depth_all, depth_hr, depth_mhr, hypo_epi_proportions, length_proportions, DepthMethod,
    DepthReport,
};
pub use error::{Error, Result};
pub use finite_dim::{
    local_depth_hr_finite, local_halfspace_depth_1d, slab_region_prob_direct,
    slab_region_prob_ie, PointSample, Side,
};
pub use local_depth::{
    band_contains, local_depth_all, local_depth_hr, local_depth_mhr, local_hypo_epi_proportions,
    local_length_proportions,
};
pub use montecarlo::{
    consistency_experiment, maximizer_experiment, population_local_depth_iid, ConsistencyReport,
    IidProcessSpec, Marginal, MaximizerReport,
};
pub use similarity::{
    envelope, gower_dissimilarity, local_sim_hr, local_sim_mhr, sim_hr, similarity_matrix,
    DissimilarityMatrix, SimilarityMatrix, SimilarityMethod,
};
