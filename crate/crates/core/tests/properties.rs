#![allow(clippy::needless_range_loop)]

mod common;

use fdepth::*;
use proptest::prelude::*;

use common::*;

/// Quarter-integer values keep every sum and difference exact.
fn quarter() -> impl Strategy<Value = f64> {
    (-12i32..=12).prop_map(|q| q as f64 / 4.0)
}

fn curves(max_n: usize, max_p: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_n, 1..=max_p).prop_flat_map(|(n, p)| {
        prop::collection::vec(prop::collection::vec(quarter(), p), n)
    })
}

fn curves_at_least(min_n: usize, max_n: usize, max_p: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (min_n..=max_n, 1..=max_p).prop_flat_map(|(n, p)| {
        prop::collection::vec(prop::collection::vec(quarter(), p), n)
    })
}

fn tau_for(p: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0i32..=12).prop_map(|q| q as f64 / 4.0), p)
}

fn with_tau(max_n: usize, max_p: usize) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
    curves(max_n, max_p).prop_flat_map(|c| {
        let p = c[0].len();
        (Just(c), tau_for(p))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn global_depths_match_enumeration(c in curves(20, 12)) {
        let ds = dataset(&c);
        let hr = depth_all(&ds, DepthMethod::Hr).values;
        let mhr = depth_all(&ds, DepthMethod::Mhr).values;
        for (i, y) in c.iter().enumerate() {
            prop_assert_eq!(hr[i], hr_depth(y, &c));
            prop_assert_eq!(mhr[i], mhr_depth_uniform(y, &c));
            prop_assert!(hr[i] <= mhr[i]);
        }
    }

    #[test]
    fn local_depths_match_enumeration((c, t) in with_tau(20, 12)) {
        let ds = dataset(&c);
        let tau = TauFunction::new(t.clone()).unwrap();
        let hr = local_depth_all(&ds, &tau, DepthMethod::Hr).unwrap().values;
        let mhr = local_depth_all(&ds, &tau, DepthMethod::Mhr).unwrap().values;
        for (i, y) in c.iter().enumerate() {
            prop_assert_eq!(hr[i], local_hr_depth(y, &c, &t));
            prop_assert_eq!(mhr[i], local_mhr_depth_uniform(y, &c, &t));
        }
    }

    #[test]
    fn univariate_hr_is_halfspace_depth(values in prop::collection::vec(quarter(), 1..40), x in quarter()) {
        let c: Vec<Vec<f64>> = values.iter().map(|v| vec![*v]).collect();
        let d = depth_hr(&[x], &dataset(&c)).unwrap();
        let huge = 1e6;
        prop_assert_eq!(d, halfspace_1d(x, &values, huge));
    }

    #[test]
    fn local_depth_vanishes_away_from_the_data((c, t) in with_tau(15, 8)) {
        let ds = dataset(&c);
        let (_, hi) = ds.value_range();
        let far: Vec<f64> = t.iter().map(|tk| hi + tk + 1.0).collect();
        let tau = TauFunction::new(t).unwrap();
        prop_assert_eq!(local_depth_hr(&far, &ds, &tau).unwrap(), 0.0);
        prop_assert_eq!(local_depth_mhr(&far, &ds, &tau).unwrap(), 0.0);
    }

    #[test]
    fn local_mhr_grows_with_tau((c, t) in with_tau(15, 8), extra in 0i32..8) {
        let ds = dataset(&c);
        let small = TauFunction::new(t.clone()).unwrap();
        let large = TauFunction::new(t.iter().map(|v| v + extra as f64 / 4.0).collect()).unwrap();
        for y in &c {
            prop_assert!(local_depth_mhr(y, &ds, &small).unwrap() <= local_depth_mhr(y, &ds, &large).unwrap());
        }
    }

    #[test]
    fn reflection_swaps_sides((c, t) in with_tau(15, 8)) {
        let ds = dataset(&c);
        let flipped = affine_transform(&ds, &[-1.0], &[0.0]).unwrap();
        let tau = TauFunction::new(t).unwrap();
        let a = local_depth_all(&ds, &tau, DepthMethod::Hr).unwrap().values;
        let b = local_depth_all(&flipped, &tau, DepthMethod::Hr).unwrap().values;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sup_distances_scale_with_affine_maps(c in curves_at_least(2, 10, 8), a in 1i32..8, b in quarter()) {
        let ds = dataset(&c);
        let scale = a as f64 / 2.0;
        let moved = affine_transform(&ds, &[scale], &[b]).unwrap();
        let before = pairwise_sup_distances(&ds).unwrap();
        let after = pairwise_sup_distances(&moved).unwrap();
        for (x, y) in before.iter().zip(&after) {
            prop_assert_eq!(x * scale, *y);
        }
    }

    #[test]
    fn tau_quantiles_are_monotone(c in curves_at_least(2, 12, 6), mut probs in prop::collection::vec(0.0f64..=1.0, 1..6)) {
        probs.sort_by(f64::total_cmp);
        let sel = select_tau(&dataset(&c), &probs, false).unwrap();
        prop_assert!(sel.quantiles.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn csv_round_trip(c in curves(10, 8), scale in 1.0f64..1e6) {
        let scaled: Vec<Vec<f64>> = c.iter().map(|r| r.iter().map(|v| v * scale / 7.0).collect()).collect();
        let ds = dataset(&scaled);
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), &LoadOptions::default()).unwrap();
        prop_assert_eq!(back.values(), ds.values());
    }

    #[test]
    fn similarity_relabeling((c, t) in with_tau(10, 6), seed in any::<u64>()) {
        let n = c.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let ds = dataset(&c);
        let shuffled = ds.select(&perm);
        let tau = TauFunction::new(t).unwrap();
        for method in [SimilarityMethod::Hr, SimilarityMethod::LocalHr, SimilarityMethod::LocalMhr] {
            let s = similarity_matrix(&ds, method, Some(&tau)).unwrap();
            let r = similarity_matrix(&shuffled, method, Some(&tau)).unwrap();
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(r.get(i, j), s.get(perm[i], perm[j]));
                }
            }
        }
    }

    #[test]
    fn local_similarities_recover_global_hr(c in curves(10, 6)) {
        let ds = dataset(&c);
        let (lo, hi) = ds.value_range();
        let tau = TauFunction::constant(hi - lo, ds.p()).unwrap();
        let global = similarity_matrix(&ds, SimilarityMethod::Hr, None).unwrap();
        let local = similarity_matrix(&ds, SimilarityMethod::LocalHr, Some(&tau)).unwrap();
        prop_assert_eq!(global.as_slice(), local.as_slice());
    }

    #[test]
    fn ward_matches_brute_force(c in curves_at_least(2, 14, 6)) {
        let ds = dataset(&c);
        let s = similarity_matrix(&ds, SimilarityMethod::Hr, None).unwrap();
        let d = gower_dissimilarity(&s).unwrap();
        let dg = ward_linkage(&d, WardVariant::D).unwrap();
        let oracle = ward_heights(d.n(), d.as_slice());
        for (m, h) in dg.merges.iter().zip(&oracle) {
            prop_assert!((m.height - h).abs() <= 1e-12 * h.abs().max(1.0));
        }
        let json = dg.to_json().unwrap();
        prop_assert_eq!(Dendrogram::from_json(&json).unwrap(), dg);
    }

    #[test]
    fn cuts_are_nested(condensed in prop::collection::vec(0.0f64..10.0, 1..=45)) {
        let n = (1..=10).find(|n| n * (n - 1) / 2 >= condensed.len()).unwrap();
        let mut cond = condensed;
        cond.resize(n * (n - 1) / 2, 1.0);
        let d = DissimilarityMatrix::from_condensed(n, &cond).unwrap();
        let dg = ward_linkage(&d, WardVariant::D).unwrap();
        for k in 2..=n {
            let fine = cut_tree(&dg, k).unwrap();
            let coarse = cut_tree(&dg, k - 1).unwrap();
            prop_assert_eq!(fine.k, k);
            for i in 0..n {
                for j in 0..n {
                    if fine.labels[i] == fine.labels[j] {
                        prop_assert_eq!(coarse.labels[i], coarse.labels[j]);
                    }
                }
            }
            let sil = silhouette(&fine, &d).unwrap();
            prop_assert!(sil.widths.iter().all(|w| (-1.0..=1.0).contains(w)));
        }
    }

    #[test]
    fn silhouette_follows_permutations(condensed in prop::collection::vec(0.1f64..10.0, 15), k in 2usize..=4) {
        let n = 6;
        let d = DissimilarityMatrix::from_condensed(n, &condensed).unwrap();
        let labels = cut_tree(&ward_linkage(&d, WardVariant::D).unwrap(), k).unwrap();
        let base = silhouette(&labels, &d).unwrap();
        let perm = [3, 0, 5, 1, 4, 2];
        let mut pd = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                pd[i * n + j] = d.get(perm[i], perm[j]);
            }
        }
        let pd = DissimilarityMatrix::new(n, pd).unwrap();
        let groups: Vec<usize> = perm.iter().map(|&i| labels.labels[i]).collect();
        let moved = silhouette(&ClusterLabels::from_groups(&groups), &pd).unwrap();
        for i in 0..n {
            prop_assert!((moved.widths[i] - base.widths[perm[i]]).abs() < 1e-12);
        }
    }
}
