use std::fs;

use hamrep::cartan::build_hhat;
use hamrep::cli::cache::{cache_path, dump, induced_cached, load};
use hamrep::cli::{main_with, parse_weight, render, run, Command, Format, JobSpec};
use hamrep::induction::build_induced;
use hamrep::repstructure::Factor;

fn job(p: u32, command: Command, weight: Option<(u32, u32)>) -> JobSpec {
    JobSpec { p, command, weight, format: Format::Json, cache_dir: None, seed: 0 }
}

#[test]
fn classify_lists_p_squared_minus_p_plus_one_classes() {
    let r = run(&job(5, Command::Classify, None)).unwrap();
    assert_eq!(r.catalog.unwrap().len(), 21);
}

#[test]
fn factors_of_the_trivial_weight_at_seven() {
    let r = run(&job(7, Command::Factors, Some((0, 0)))).unwrap();
    let want = vec![Factor { weight: (0, 0), dim: 1 }, Factor { weight: (0, 6), dim: 48 }];
    assert_eq!(r.series.unwrap(), want);
}

#[test]
fn restrict_three_one_at_five() {
    let r = run(&job(5, Command::Restrict, Some((3, 1)))).unwrap();
    assert!(r.passed());
    let w = r.witt.unwrap();
    let got: Vec<(&str, u32)> = w.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    assert_eq!(got, [("0", 6), ("1", 3), ("2", 3), ("3", 3), ("4", 6)]);
}

#[test]
fn json_keys_keep_their_order_and_output_is_reproducible() {
    let j = job(5, Command::Restrict, Some((2, 0)));
    let a = render(&run(&j).unwrap(), Format::Json);
    let b = render(&run(&j).unwrap(), Format::Json);
    assert_eq!(a, b);
    let keys = ["\"prime\"", "\"command\"", "\"weight\"", "\"witt\"", "\"checks\"", "\"version\"", "\"seed\""];
    let pos: Vec<usize> = keys.iter().map(|k| a.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{a}");
}

#[test]
fn markdown_report_has_a_table() {
    let r = run(&job(5, Command::Balanced, None)).unwrap();
    let md = render(&r, Format::Markdown);
    assert!(md.contains("| balanced | pass |"), "{md}");
}

#[test]
fn weights_parse_in_signed_and_canonical_form() {
    assert_eq!(parse_weight(5, "-1,-1"), Ok((4, 4)));
    assert_eq!(parse_weight(5, "4, 4"), Ok((4, 4)));
    assert_eq!(parse_weight(7, "0,-1"), Ok((0, 6)));
    assert!(parse_weight(5, "1").is_err());
    assert!(parse_weight(5, "a,b").is_err());
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(main_with(["hamrep", "classify", "--p", "4"]), 2);
    assert_eq!(main_with(["hamrep", "classify", "--p", "3"]), 2);
    assert_eq!(main_with(["hamrep", "induce", "--p", "5"]), 2);
    assert_eq!(main_with(["hamrep", "verify", "--p", "5", "--weight", "1,1"]), 2);
    assert_eq!(main_with(["hamrep", "frobnicate", "--p", "5"]), 2);
    assert_eq!(main_with(["hamrep", "factors", "--p", "5", "--weight", "1;2"]), 2);
}

#[test]
fn successful_run_exits_with_zero() {
    assert_eq!(main_with(["hamrep", "factors", "--p", "5", "--weight", "-1,-1", "--format", "markdown"]), 0);
}

#[test]
fn cache_round_trip_is_exact() {
    let alg = build_hhat(5).unwrap();
    let z = build_induced(&alg, (0, 0)).unwrap();
    let back = load(&dump(&z), 5, (0, 0)).unwrap().unwrap();
    assert_eq!(back.module.actions(), z.module.actions());
    assert_eq!(back.module.weights(), z.module.weights());
    assert_eq!(back.module.tags(), z.module.tags());
}

#[test]
fn cache_with_another_prime_is_a_miss() {
    let alg = build_hhat(5).unwrap();
    let z = build_induced(&alg, (0, 0)).unwrap();
    assert!(load(&dump(&z), 7, (0, 0)).unwrap().is_none());
    assert!(load(&dump(&z), 5, (1, 0)).unwrap().is_none());
}

#[test]
fn truncated_cache_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let alg = build_hhat(5).unwrap();
    let fresh = induced_cached(&alg, (2, 1), Some(dir.path())).unwrap();
    let path = cache_path(dir.path(), 5, (2, 1));
    let text = fs::read_to_string(&path).unwrap();
    assert!(load(&text[..text.len() / 2], 5, (2, 1)).is_err());
    fs::write(&path, &text[..text.len() / 2]).unwrap();
    let rebuilt = induced_cached(&alg, (2, 1), Some(dir.path())).unwrap();
    assert_eq!(rebuilt.module.actions(), fresh.module.actions());
    assert_eq!(fs::read_to_string(&path).unwrap(), text);
}
