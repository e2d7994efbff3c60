//! Full clustering pipeline: τ from the 20% distance quantile, local
//! modified half-region similarity, Gower dissimilarity, Ward linkage,
//! tree cuts and silhouettes for several group counts.

use fdepth::{
    adjusted_rand_index, cut_tree, gower_dissimilarity, select_tau, silhouette,
    similarity_matrix, synthetic, ward_linkage, SimilarityMethod, TauFunction, WardVariant,
};

fn main() -> fdepth::Result<()> {
    let (ds, truth) = synthetic::two_regimes(50, 50, 4.0, 0.3, 0)?;
    let q = select_tau(&ds, &[0.2], false)?.quantiles[0];
    let tau = TauFunction::constant(q, ds.p())?;
    let s = similarity_matrix(&ds, SimilarityMethod::LocalMhr, Some(&tau))?;
    let d = gower_dissimilarity(&s)?;
    let tree = ward_linkage(&d, WardVariant::D)?;

    let last = tree.merges.last().expect("at least one merge");
    println!("{} curves, final merge at height {:.3}", ds.n(), last.height);
    for k in 1..=4 {
        let labels = cut_tree(&tree, k)?;
        let sil = silhouette(&labels, &d)?;
        let ari = adjusted_rand_index(&labels.labels, &truth)?;
        let note = sil.warning.as_deref().unwrap_or("");
        println!("k = {k}: mean silhouette {:.3}, ARI {ari:.3} {note}", sil.mean);
    }
    Ok(())
}
