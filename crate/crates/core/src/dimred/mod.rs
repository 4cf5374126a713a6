//! Dimension reduction for plotting: PCA, then exact t-SNE.

mod pca;
mod tsne;

pub use pca::{pca_fit_transform, PcaModel};
pub use tsne::{kl_divergence, tsne, Embedding2D, TsneConfig, TsneResult};
