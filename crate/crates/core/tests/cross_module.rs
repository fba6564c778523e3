use itertools::Itertools;
use proptest::prelude::*;

use flagtope::flags;
use flagtope::linalg;
use flagtope::lgv::{PathGraph, WeightMode};
use flagtope::matroid::GroundSet;
use flagtope::product::{self, SurveyMode, TreeCollection};
use flagtope::schubert;
use flagtope::tiling::{self, HoleyTriangle};

#[test]
fn pure_locations_tile_the_triangle() {
    for n in 2..=4 {
        for seed in 0..5 {
            let (_, tri) = product::random_regular_triangulation(n, 3, seed).unwrap();
            let check = product::locations_form_basis(&tri).unwrap();
            let h = HoleyTriangle::new(n, check.locations.clone());
            assert!(tiling::is_tileable(&h).unwrap());
            let t = tiling::find_tiling_by_sliding(&h).unwrap();
            t.validate().unwrap();
        }
    }
}

#[test]
fn path_vectors_and_flags_give_the_same_ranks() {
    let n = 4;
    let ground = GroundSet::new(n, 3).unwrap();
    let graph = PathGraph::build(n, &WeightMode::Random { seed: 17 }).unwrap();
    let (points, matrix) = graph.matrix().unwrap();
    let arr = flags::line_arrangement(&flags::random_flag_family(n, 3, 17).unwrap()).unwrap();
    for k in 1..=n {
        for idx in (0..ground.len()).combinations(k).step_by(7) {
            let cols: Vec<usize> =
                idx.iter().map(|&i| points.iter().position(|p| p == ground.point(i)).unwrap()).collect();
            let lgv_rank = linalg::rank_of(&matrix.select_columns(&cols));
            assert_eq!(lgv_rank, ground.rank(&idx));
            assert_eq!(arr.linear_rank(&idx), ground.rank(&idx));
            assert_eq!(graph.flow_rank(&ground.point_set(&idx)).unwrap(), ground.rank(&idx));
        }
    }
}

#[test]
fn reconstructed_flags_give_back_the_arrangement() {
    for (n, d) in [(2, 3), (3, 3), (3, 5)] {
        let arr = flags::line_arrangement(&flags::random_flag_family(n, d, 5).unwrap()).unwrap();
        let back = flags::line_arrangement(&flags::flags_from_arrangement(&arr).unwrap()).unwrap();
        assert!(back.same_lines(&arr));
    }
}

#[test]
fn transversal_dots_are_the_ground_set() {
    for (n, d) in [(3, 3), (4, 3), (3, 4)] {
        let ground = GroundSet::new(n, d).unwrap();
        let mut mapped: Vec<_> =
            schubert::transversal_array(n, d).iter().map(|x| schubert::dot_to_point(n, x)).collect();
        mapped.sort();
        let mut all: Vec<_> = (0..ground.len()).map(|i| ground.point(i).clone()).collect();
        all.sort();
        assert_eq!(mapped, all);
    }
}

#[test]
fn survey_and_tree_search_agree_on_the_prism() {
    let random = product::survey_conjecture(2, 3, SurveyMode::RandomSeeds, 500, 7).unwrap();
    let search = product::survey_conjecture(2, 3, SurveyMode::TreeSearch, 1_000_000, 0).unwrap();
    let realized = |r: &product::SurveyReport| r.bases.iter().map(|b| b.realized).collect::<Vec<_>>();
    assert_eq!(realized(&random), realized(&search));
    let json = serde_json::to_string(&random).unwrap();
    let back: product::SurveyReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, random);
}

#[test]
fn every_tree_search_triangulation_is_verified() {
    for tri in product::all_triangulations(2, 3, 1_000_000).unwrap() {
        let c = TreeCollection::from_trees(2, 3, &tri);
        assert!(product::verify_triangulation(&c).unwrap().valid);
        assert!(product::locations_form_basis(&tri).unwrap().is_basis);
        assert!(product::check_poset_coloring(&product::derived_coloring(&tri).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tileable_iff_basis(n in 2usize..6, raw in proptest::collection::vec(any::<u64>(), 6)) {
        let ground = GroundSet::new(n, 3).unwrap();
        let mut idx: Vec<usize> = raw.iter().map(|r| (*r as usize) % ground.len()).collect();
        idx.sort_unstable();
        idx.dedup();
        idx.truncate(n);
        prop_assume!(idx.len() == n);
        let h = HoleyTriangle::from_point_set(&ground.point_set(&idx)).unwrap();
        prop_assert_eq!(tiling::is_tileable(&h).unwrap(), ground.is_basis(&idx));
    }

    #[test]
    fn regular_triangulations_are_translation_invariant(seed in 0u64..500, shift in -1000i64..1000) {
        let (w, tri) = product::random_regular_triangulation(3, 3, seed).unwrap();
        let mut moved = w.clone();
        for row in moved.w.iter_mut() {
            for (j, x) in row.iter_mut().enumerate() {
                *x += linalg::rat(shift * (j as i64 + 1));
            }
        }
        prop_assert_eq!(product::regular_triangulation(3, 3, &moved).unwrap(), tri);
    }
}
