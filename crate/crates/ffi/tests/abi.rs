use std::ffi::{CStr, CString};
use std::ptr;

use swarmcov_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(swarmcov_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn builtin_map(name: &str) -> *mut SwarmcovMap {
    let name = CString::new(name).unwrap();
    let mut map = ptr::null_mut();
    assert_eq!(
        unsafe { swarmcov_map_builtin(name.as_ptr(), &mut map) },
        SwarmcovStatus::Ok
    );
    map
}

#[test]
fn map_queries() {
    unsafe {
        let map = builtin_map("map6");
        assert_eq!(swarmcov_map_rows(map), 9);
        assert_eq!(swarmcov_map_cols(map), 9);
        assert_eq!(swarmcov_map_visitable_count(map), 60);
        assert!(swarmcov_map_is_blocked(map, 1, 3));
        assert!(!swarmcov_map_is_blocked(map, 0, 0));
        assert!(swarmcov_map_is_blocked(map, 9, 0));
        let mut b = 0u32;
        for (n, want) in [(1, 59), (2, 29), (3, 19), (4, 14)] {
            assert_eq!(swarmcov_map_min_epochs(map, n, &mut b), SwarmcovStatus::Ok);
            assert_eq!(b, want);
        }
        assert_eq!(swarmcov_map_max_epochs(map, 4, &mut b), SwarmcovStatus::Ok);
        assert_eq!(b, 28);
        assert_eq!(swarmcov_genotype_length(map, 4), 240);
        assert_eq!(
            swarmcov_map_min_epochs(map, 5, &mut b),
            SwarmcovStatus::InvalidArgument
        );
        assert!(!last_error().is_empty());
        swarmcov_map_free(map);
    }
}

#[test]
fn parse_errors_carry_messages() {
    unsafe {
        let text = CString::new("2 2\n.#\n#.\n").unwrap();
        let mut map = ptr::null_mut();
        let s = swarmcov_map_parse(text.as_ptr(), &mut map);
        assert_eq!(s, SwarmcovStatus::InvalidMap);
        assert!(map.is_null());
        assert!(last_error().contains("corner"), "{}", last_error());

        let s = swarmcov_map_parse(ptr::null(), &mut map);
        assert_eq!(s, SwarmcovStatus::NullPointer);

        let unknown = CString::new("map9").unwrap();
        let s = swarmcov_map_builtin(unknown.as_ptr(), &mut map);
        assert_eq!(s, SwarmcovStatus::InvalidArgument);
    }
}

#[test]
fn evaluate_strip() {
    unsafe {
        let text = CString::new("1 3\n...\n").unwrap();
        let mut map = ptr::null_mut();
        assert_eq!(
            swarmcov_map_parse(text.as_ptr(), &mut map),
            SwarmcovStatus::Ok
        );
        assert!(last_error().is_empty());
        let genes = [0.0, 0.9, 0.0];
        let mut res = ptr::null_mut();
        let s = swarmcov_evaluate(map, 1, genes.as_ptr(), genes.len(), &mut res);
        assert_eq!(s, SwarmcovStatus::Ok);
        assert!(swarmcov_result_covered(res));
        assert_eq!(swarmcov_result_fitness(res), 2);
        assert_eq!(swarmcov_result_epochs_used(res), 2);
        assert_eq!(swarmcov_result_unvisited(res), 0);
        assert_eq!(swarmcov_result_uav_count(res), 1);
        assert_eq!(swarmcov_result_path_len(res, 0), 3);
        let (mut r, mut c) = (9, 9);
        assert_eq!(
            swarmcov_result_path_cell(res, 0, 2, &mut r, &mut c),
            SwarmcovStatus::Ok
        );
        assert_eq!((r, c), (0, 2));
        assert_eq!(
            swarmcov_result_path_cell(res, 0, 3, &mut r, &mut c),
            SwarmcovStatus::OutOfRange
        );
        let mut buf = [0.0; 3];
        assert_eq!(swarmcov_result_genotype(res, ptr::null_mut(), 0), 3);
        assert_eq!(swarmcov_result_genotype(res, buf.as_mut_ptr(), 3), 3);
        assert_eq!(buf, genes);
        swarmcov_result_free(res);

        let bad = [0.0, 1.5, 0.0];
        let s = swarmcov_evaluate(map, 1, bad.as_ptr(), 3, &mut res);
        assert_eq!(s, SwarmcovStatus::InvalidArgument);
        let short = [0.0];
        let s = swarmcov_evaluate(map, 1, short.as_ptr(), 1, &mut res);
        assert_eq!(s, SwarmcovStatus::InvalidArgument);
        swarmcov_map_free(map);
    }
}

#[test]
fn solve_small_map() {
    unsafe {
        let text = CString::new("3 3\n...\n...\n...\n").unwrap();
        let mut map = ptr::null_mut();
        swarmcov_map_parse(text.as_ptr(), &mut map);
        let mut p = swarmcov_ga_params_default();
        assert!(p.mutation_rate < 0.0);
        p.population_size = 200;
        p.generations = 50;
        p.seed = 5;
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(swarmcov_solve(map, 1, &p, &mut a), SwarmcovStatus::Ok);
        assert_eq!(swarmcov_solve(map, 1, &p, &mut b), SwarmcovStatus::Ok);
        assert!(swarmcov_result_covered(a));
        assert_eq!(swarmcov_result_fitness(a), 8);
        assert_eq!(swarmcov_result_fitness(a), swarmcov_result_fitness(b));

        p.population_size = 1;
        let mut c = ptr::null_mut();
        assert_eq!(
            swarmcov_solve(map, 1, &p, &mut c),
            SwarmcovStatus::InvalidArgument
        );
        assert!(last_error().contains("population_size"));
        swarmcov_result_free(a);
        swarmcov_result_free(b);
        swarmcov_map_free(map);
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        assert_eq!(swarmcov_map_rows(ptr::null()), 0);
        assert_eq!(swarmcov_result_fitness(ptr::null()), u32::MAX);
        assert!(!swarmcov_result_covered(ptr::null()));
        swarmcov_map_free(ptr::null_mut());
        swarmcov_result_free(ptr::null_mut());
        let mut b = 0;
        assert_eq!(
            swarmcov_map_min_epochs(ptr::null(), 1, &mut b),
            SwarmcovStatus::NullPointer
        );
        let v = CStr::from_ptr(swarmcov_version());
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn header_declares_the_api() {
    let h = include_str!("../include/swarmcov.h");
    for name in [
        "swarmcov_map_parse",
        "swarmcov_map_free",
        "swarmcov_evaluate",
        "swarmcov_solve",
        "swarmcov_result_path_cell",
        "swarmcov_last_error",
        "SWARMCOV_STATUS_OK",
        "typedef struct SwarmcovMap SwarmcovMap",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}
