//! One line per acceptance criterion. Failing criteria fail their test;
//! the printed line shows the measured value against the pinned tolerance.
//!
//! Run with `cargo test -p lensdimer --test acceptance -- --nocapture` to see the lines.

use lensdimer::verify::{self, render_report, CheckOutcome, Suite};
use lensdimer::Execution;

fn report(o: CheckOutcome) {
    println!("{}", o.line());
    assert!(o.passed, "{}", o.line());
}

#[test]
fn c01_series_matches_integrated_free_decay() {
    report(verify::check_oracle_free(Execution::Parallel));
}

#[test]
fn c02_series_matches_integrated_driven_dynamics() {
    report(verify::check_oracle_driven(Execution::Parallel));
}

#[test]
fn c03_decoupled_limits() {
    report(verify::check_free_space_limits(Execution::Parallel));
}

#[test]
fn c04_long_time_population_is_steady_state() {
    report(verify::check_steady_state(Execution::Parallel));
}

#[test]
fn c05_peak_enhancement() {
    report(verify::check_enhancement(Execution::Parallel));
}

#[test]
fn c06_lens_fringe_visibilities() {
    report(verify::check_visibilities(Execution::Parallel));
}

#[test]
fn c07_zero_delay_correlation() {
    report(verify::check_g2_zero_delay(Execution::Parallel));
}

#[test]
fn c08_dark_fringe_correlation() {
    report(verify::check_g2_dark_fringe(Execution::Parallel));
}

#[test]
fn c09_spectral_structure() {
    report(verify::check_spectrum_structure(Execution::Parallel));
}

#[test]
fn c10_collection_fraction() {
    report(verify::check_kappa_geometry(Execution::Parallel));
}

#[test]
fn c11_full_suite_is_reproducible() {
    let first = verify::run_suite(Suite::All, Execution::Parallel);
    let second = verify::run_suite(Suite::All, Execution::Sequential);
    let (a, b) = (render_report(&first), render_report(&second));
    let total: f64 = first.iter().map(|o| o.elapsed.as_secs_f64()).sum();
    print!("{a}");
    let c11 = first.iter().find(|o| o.id == "C11").expect("C11 in full suite");
    let passed = a == b && c11.passed && total < 300.0;
    println!(
        "C11 {:<22} {}  parallel and sequential reports {}, first run {:.0} s (limit 300 s)",
        "full-suite-rerun",
        if passed { "PASS" } else { "FAIL" },
        if a == b { "identical" } else { "differ" },
        total
    );
    assert!(passed);
}
