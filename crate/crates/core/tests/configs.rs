use swarmcov::harness::ExperimentGrid;

fn load(name: &str) -> ExperimentGrid {
    let path = format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    ExperimentGrid::from_toml(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn full_config_is_the_builtin_grid() {
    let grid = load("full.toml");
    assert_eq!(grid, ExperimentGrid::full());
    assert_eq!(grid.run_count(), 30_000);
}

#[test]
fn small_configs_parse() {
    assert_eq!(load("desk.toml").run_count(), 80);
    assert_eq!(load("map6-four.toml").run_count(), 20);
}
