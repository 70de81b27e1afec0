mod common;

use proptest::prelude::*;
use swarmcov::oracle::{exhaustive_min_epochs, reference_evaluate, MinEpochs, OracleBudget};
use swarmcov::{builtin, builtin_maps, run_ga, GaConfig, Genotype, GridMap, Scenario};

/// Random grids up to 5x5 with free corners; obstacles fill at most a third.
fn arb_map() -> impl Strategy<Value = GridMap> {
    (1usize..=5, 1usize..=5)
        .prop_flat_map(|(r, c)| {
            (
                Just(r),
                Just(c),
                prop::collection::vec(prop::bool::weighted(0.3), r * c),
            )
        })
        .prop_map(|(rows, cols, mut blocked)| {
            for i in [0, cols - 1, (rows - 1) * cols, rows * cols - 1] {
                blocked[i] = false;
            }
            let mut text = format!("{rows} {cols}\n");
            for r in 0..rows {
                for c in 0..cols {
                    text.push(if blocked[r * cols + c] { '#' } else { '.' });
                }
                text.push('\n');
            }
            GridMap::parse("random", &text).expect("corners are free")
        })
}

/// Maps paired with a swarm size whose corner starts are distinct.
fn arb_case() -> impl Strategy<Value = (GridMap, usize, Vec<f64>)> {
    (arb_map(), 1usize..=4)
        .prop_filter("starts coincide", |(map, n)| {
            map.start_positions(*n).is_ok()
        })
        .prop_flat_map(|(map, n)| {
            let len = n * map.visitable_count();
            (Just(map), Just(n), prop::collection::vec(0.0f64..=1.0, len))
        })
}

fn arb_builtin_case() -> impl Strategy<Value = (GridMap, usize, Vec<f64>)> {
    (0usize..6, 1usize..=4).prop_flat_map(|(m, n)| {
        let map = builtin_maps().swap_remove(m);
        let len = n * map.visitable_count();
        (Just(map), Just(n), prop::collection::vec(0.0f64..=1.0, len))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_maps_keep_simulator_invariants((map, n, genes) in arb_case()) {
        let scenario = Scenario::new(&map, n).unwrap();
        let g = Genotype::new(genes).unwrap();
        let r = scenario.evaluate(&g).unwrap();
        prop_assert_eq!(common::check_invariants(&scenario, &g, &r), Ok(()));
    }

    #[test]
    fn random_maps_agree_with_reference((map, n, genes) in arb_case()) {
        let g = Genotype::new(genes).unwrap();
        let fast = Scenario::new(&map, n).unwrap().evaluate(&g).unwrap();
        let slow = reference_evaluate(&g, &map, n).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn builtin_maps_agree_with_reference((map, n, genes) in arb_builtin_case()) {
        let g = Genotype::new(genes).unwrap();
        let scenario = Scenario::new(&map, n).unwrap();
        let fast = scenario.evaluate(&g).unwrap();
        prop_assert_eq!(common::check_invariants(&scenario, &g, &fast), Ok(()));
        prop_assert_eq!(fast, reference_evaluate(&g, &map, n).unwrap());
    }

    #[test]
    fn both_evaluators_reject_coinciding_starts((map, n) in (arb_map(), 1usize..=4)) {
        let len = n * map.visitable_count();
        let g = Genotype::new(vec![0.5; len]).unwrap();
        let fast = Scenario::new(&map, n).is_ok();
        prop_assert_eq!(fast, reference_evaluate(&g, &map, n).is_ok());
    }

    #[test]
    fn map_text_round_trips(map in arb_map()) {
        let again = GridMap::parse("random", &map.to_text()).unwrap();
        prop_assert_eq!(again, map);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ga_best_is_legal_and_never_beats_exhaustive(map in arb_map(), seed in any::<u64>()) {
        prop_assume!(map.visitable_count() <= 6);
        let config = GaConfig {
            population_size: 30,
            generations: 15,
            seed,
            ..GaConfig::default()
        };
        let run = run_ga(&config, &map, 1).unwrap();
        let scenario = Scenario::new(&map, 1).unwrap();
        prop_assert_eq!(
            common::check_invariants(&scenario, &run.best_genotype, &run.best_sim),
            Ok(())
        );
        prop_assert!(run.fitness_history.windows(2).all(|w| w[1] <= w[0]));
        let exact = exhaustive_min_epochs(&map, 1, OracleBudget::default()).unwrap();
        match exact {
            MinEpochs::Epochs(e) => prop_assert!(run.best_fitness >= e),
            MinEpochs::Infeasible => prop_assert!(!run.best_sim.covered),
        }
    }
}

#[test]
fn lower_bound_table_for_builtin_maps() {
    let table: [(&str, [u32; 4]); 6] = [
        ("map1", [48, 24, 16, 12]),
        ("map2", [20, 10, 6, 5]),
        ("map3", [27, 13, 9, 6]),
        ("map4", [38, 19, 12, 9]),
        ("map5", [50, 25, 16, 12]),
        ("map6", [59, 29, 19, 14]),
    ];
    for (id, row) in table {
        let map = builtin(id).unwrap();
        for (i, want) in row.into_iter().enumerate() {
            assert_eq!(
                map.theoretical_min_epochs(i + 1).unwrap(),
                want,
                "{id} n={}",
                i + 1
            );
            assert_eq!(map.max_epochs(i + 1).unwrap(), 2 * want, "{id} n={}", i + 1);
        }
    }
}

#[test]
fn ga_result_replays_on_builtin_maps() {
    for map in builtin_maps() {
        for n in 1..=4 {
            let config = GaConfig {
                population_size: 40,
                generations: 5,
                seed: n as u64,
                ..GaConfig::default()
            };
            let run = run_ga(&config, &map, n).unwrap();
            let scenario = Scenario::new(&map, n).unwrap();
            common::check_invariants(&scenario, &run.best_genotype, &run.best_sim)
                .unwrap_or_else(|e| panic!("{} n={n}: {e}", map.id()));
            assert_eq!(run.best_fitness, run.best_sim.fitness);
            assert_eq!(run.fitness_history.last(), Some(&run.best_fitness));
        }
    }
}
