//! The acceptance gate: one test per criterion, each printing a pass/fail
//! line. The bodies live in `cacti_cli::checks` so `cacti selftest` runs the
//! identical code.

use cacti_cli::checks::{self, Outcome};

fn gate(k: usize, out: Outcome) {
    println!("criterion {k}: {}", if out.ok { "pass" } else { "fail" });
    for line in &out.lines {
        println!("  {line}");
    }
    assert!(out.ok, "criterion {k} failed:\n{}", out.lines.join("\n"));
}

#[test]
fn criterion_01_operad_axioms_hold_exactly() {
    gate(1, checks::criterion_1());
}

#[test]
fn criterion_02_normalized_gluing_fails_associativity_concretely() {
    gate(2, checks::criterion_2());
}

#[test]
fn criterion_03_free_gluing_splits_off_the_radii() {
    gate(3, checks::criterion_3());
}

#[test]
fn criterion_04_spined_gluing_splits_off_the_angles() {
    gate(4, checks::criterion_4());
}

#[test]
fn criterion_05_small_complexes_have_the_configuration_space_homology() {
    gate(5, checks::criterion_5());
}

#[test]
fn criterion_06_completed_diagrams_are_bouquets_with_matching_fibers() {
    gate(6, checks::criterion_6());
}

#[test]
fn criterion_07_sections_retract_and_collapses_land_as_predicted() {
    gate(7, checks::criterion_7());
}

#[test]
fn criterion_08_every_view_round_trips_exactly() {
    gate(8, checks::criterion_8());
}

#[test]
fn criterion_09_corollas_close_up_and_units_behave() {
    gate(9, checks::criterion_9());
}

#[test]
fn criterion_10_the_two_cells_of_k2_draw_the_circle() {
    gate(10, checks::criterion_10());
}
