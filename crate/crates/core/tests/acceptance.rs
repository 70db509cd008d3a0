//! Acceptance suite: runs every registry check at its stated tolerance and
//! prints one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use eislat::checks::{run_check, CheckOptions, CheckReport};

fn run(id: &str) -> CheckReport {
    let report = run_check(id, &CheckOptions::default()).expect("known check id");
    println!(
        "{:4} {} ({} ms) {}",
        report.check,
        if report.passed() { "pass" } else { "FAIL" },
        report.ms,
        report.detail
    );
    report
}

macro_rules! criterion {
    ($name:ident, $id:literal) => {
        #[test]
        fn $name() {
            let report = run($id);
            assert!(report.passed(), "{} failed: {}", $id, report.detail);
        }
    };
}

criterion!(c01_ring_axioms, "C1");
criterion!(c02_smith_normal_form_contract, "C2");
criterion!(c03_discriminant_group_of_d3_is_v, "C3");
criterion!(c04_fiftyfour_roots_weyl_order_and_transitivity, "C4");
criterion!(c05_aut_d3_order_1296_kernel_and_image, "C5");
criterion!(c06_aut_v_is_sl2_f3, "C6");
criterion!(c07_aut_h_membership_norms_and_transitivity, "C7");
criterion!(c08_glue_unimodular_and_explicit_embedding, "C8");
criterion!(c09_isotropic_planes_and_blockwise_transitivity, "C9");
criterion!(c10_triflections_and_discriminant_image, "C10");
criterion!(c11_cofactor_form_and_det_identity, "C11");
criterion!(c12_j0_norm_law_and_orthogonality, "C12");
criterion!(c13_j_special_values_and_invariance, "C13");
criterion!(c14_hesse_classification, "C14");
criterion!(c15_cross_side_agreement, "C15");
