//! Runnable log of every place the implementation deviates from the
//! tabulated closed forms it is checked against, with the derived form,
//! the tabulated form and a live-computed defect where one applies.
//!
//! The recurrences, operators and constraints form a mutually consistent
//! set; the entries below record where an inherited closed-form row or a
//! transcribed equation disagrees with that set. The recurrence output is
//! normative in every case.

use crate::cli::output::fmt_f64;
use crate::recurrence::{self, RecurrenceSpec};
use crate::spectra::{self, PotentialModel};

/// One derived-versus-tabulated deviation.
#[derive(Debug, Clone)]
pub struct DiscrepancyEntry {
    /// Stable identifier, usable as a filter key.
    pub id: &'static str,
    /// Tabulated or transcribed form.
    pub tabulated: String,
    /// Form actually implemented.
    pub derived: String,
    /// Why the derived form wins, with live numbers where available.
    pub note: String,
}

/// Collect the full discrepancy log. Entries with live numbers are computed
/// on the spot at fixed witness parameters.
pub fn collect() -> Vec<DiscrepancyEntry> {
    let mut entries = vec![
        DiscrepancyEntry {
            id: "basis-ladder-listing",
            tabulated: "subspace listed as <x^0, x^2, ..., x^j>".into(),
            derived: "complete monomial ladder {x^0, x^1, ..., x^j}".into(),
            note: "the generator action J- x = 1 requires the first power; the gap in the \
                   listing is treated as a typo"
                .into(),
        },
        DiscrepancyEntry {
            id: "expansion-weights",
            tabulated: "R(x) = sum_m a_m P_m(eps) x^m with unspecified weights a_m".into(),
            derived: "eigenfunction coefficients recovered from the operator matrix; the P_m \
                      values form the adjoint (left) eigenvector"
                .into(),
            note: unit_weight_note(),
        },
        DiscrepancyEntry {
            id: "burrows-gauge-sign",
            tabulated: "prefactor exp(-Bx^2/(2*sqrt2) - Cx^3/(3*sqrt2))".into(),
            derived: "prefactor exp(+Bx^2/(2*sqrt2) + Cx^3/(3*sqrt2))".into(),
            note: "only the positive sign makes exp(g)R solve the equation with the forced \
                   slope A = -sqrt2 C(j+1); the residual check fails pointwise with the \
                   tabulated sign"
                .into(),
        },
        DiscrepancyEntry {
            id: "quartic-harmonic-potential",
            tabulated: "x-part written as A^2 x^4 + A B x^2 + 2 A alpha x".into(),
            derived: "x-part A^2 x^4 + 2 A B x^2 - 2 A alpha x".into(),
            note: "differentiating the ground exponent exp(-Ax^3/3 - Bx) forces the doubled \
                   quadratic coefficient and the negative linear sign; otherwise the ground \
                   state is not an eigenfunction"
                .into(),
        },
        DiscrepancyEntry {
            id: "separated-equation-symbols",
            tabulated: "separated equations with the axis drift constants swapped (y-drift 2By, \
                        constant x-drift 2C)"
                .into(),
            derived: "drifts differentiated from the ground exponent: x-drift 2(B + Ax^2), \
                      y-drift 2Cy"
                .into(),
            note: "the ground exponent and the operator form agree with each other and fix the \
                   drifts; the transcription is not used"
                .into(),
        },
        DiscrepancyEntry {
            id: "kummer-arguments",
            tabulated: "y-solution written with Kummer parameters in B and no prefactor on the \
                        odd branch"
                .into(),
            derived: "Q(y) = N2*1F1(-c1/(4C); 1/2; Cy^2) + N1*y*1F1(1/2 - c1/(4C); 3/2; Cy^2)"
                .into(),
            note: "the oscillator stiffness is the y^2 exponent coefficient C, and the odd \
                   solution carries an explicit factor y (k = 1 gives Q = y exactly)"
                .into(),
        },
        DiscrepancyEntry {
            id: "spectral-variable-sign",
            tabulated: "quartic-harmonic eigen-combination stated as E0 - E - c1".into(),
            derived: "x-operator eigenvalue is E - E0 - c1; the tabulated variable \
                      v = c1 - E0 + E is its negation, and E = E0 + c1 - v"
                .into(),
            note: "the k-ladder must raise the energy by 2C per rung (oracle-checked); the \
                   stated sign lowers it"
                .into(),
        },
        DiscrepancyEntry {
            id: "two-quartic-ground-energy",
            tabulated: "ground energy stated as B1^2 + B2^2".into(),
            derived: "E0 = -(B1^2 + B2^2)".into(),
            note: "direct substitution of the ground factor exp(-A1x^3/3 - B1x) gives axis \
                   energy -B1^2; the positive sign fails both axis residual checks"
                .into(),
        },
        DiscrepancyEntry {
            id: "two-quartic-factor-terms",
            tabulated: "separated two-quartic equations missing the factors R and Q on their \
                        last terms"
                .into(),
            derived: "last terms restored as (...)R and (...)Q".into(),
            note: "without the factors the expressions are not differential equations in R, Q"
                .into(),
        },
        DiscrepancyEntry {
            id: "ground-identity-sign",
            tabulated: "V0 - E0 written as W'' + F'' - (W')^2 - (F')^2 (plus cross terms)".into(),
            derived: "V0 - E0 = (W')^2 + (F')^2 - W'' - F'' for the separable case".into(),
            note: "substituting exp(-W-F) into the Hamiltonian fixes the signs; the identity \
                   is verified to 1e-12 coefficient-wise for both 2D families"
                .into(),
        },
    ];
    entries.extend(burrows_row_entries());
    entries
}

fn unit_weight_note() -> String {
    // j = 1 witness: with unit weights the differential identity fails
    let model = PotentialModel::OneDimI { b: 1.0, c: 1.0 };
    let spec = RecurrenceSpec::new(&model, 1).expect("valid model");
    let table = recurrence::generate_polynomials(&spec).expect("generates");
    let eps = 55f64.sqrt() / 3.0;
    let p1 = table.polys[1].eval(eps);
    format!(
        "unit weights would give a top coefficient {} at the root {}, while the operator \
         eigenvector needs {}; the two vectors are adjoint partners, not equal",
        fmt_f64(p1),
        fmt_f64(eps),
        fmt_f64(-3.0 / (1.0 + 3.0 * eps))
    )
}

/// The two closed-form Burrows-type rows that are inconsistent with their
/// own recurrence, with live defects and the passing self-test residuals.
fn burrows_row_entries() -> Vec<DiscrepancyEntry> {
    let mut out = Vec::new();
    let model = PotentialModel::OneDimII {
        v0: 0.0,
        b: 1.5,
        c: 1.0,
    };
    for (j, id) in [(2u32, "burrows-critical-j2"), (3u32, "burrows-critical-j3")] {
        let spec = RecurrenceSpec::new(&model, j).expect("valid model");
        let table = recurrence::generate_polynomials(&spec).expect("generates");
        let printed = recurrence::tabulated_critical(&model, j).expect("row exists");
        let prop = recurrence::proportionality_check(&table.critical, &printed, 1e-10)
            .expect("nonzero polynomials");
        let mut self_test_max = 0.0f64;
        if let Ok(roots) = spectra::real_roots(&table.critical, 1e-9) {
            for &root in &roots.real {
                if let Ok(res) = recurrence::recurrence_self_test(&spec, root) {
                    self_test_max = self_test_max.max(res);
                }
            }
        }
        out.push(DiscrepancyEntry {
            id,
            tabulated: format!("closed-form critical row at j = {j}"),
            derived: "recurrence-generated critical polynomial".into(),
            note: format!(
                "row is not proportional to the recurrence output (defect {} at B=1.5, C=1); \
                 the recurrence is normative and its roots pass the eigen-identity to {}",
                fmt_f64(prop.max_defect),
                fmt_f64(self_test_max.max(1e-16))
            ),
        });
    }
    out
}

/// Render the log as readable lines.
pub fn render(entries: &[DiscrepancyEntry]) -> String {
    let mut out = String::from("discrepancy log (derived forms are in force)\n");
    for e in entries {
        out.push_str(&format!(
            "* {}\n    tabulated: {}\n    derived:   {}\n    note:      {}\n",
            e.id, e.tabulated, e.derived, e.note
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_contains_expected_entries() {
        let entries = collect();
        let ids: Vec<&str> = entries.iter().map(|e| e.id).collect();
        for required in [
            "basis-ladder-listing",
            "expansion-weights",
            "burrows-gauge-sign",
            "burrows-critical-j2",
            "burrows-critical-j3",
            "quartic-harmonic-potential",
            "two-quartic-ground-energy",
            "spectral-variable-sign",
        ] {
            assert!(ids.contains(&required), "missing {required}");
        }
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = render(&collect());
        let b = render(&collect());
        assert_eq!(a, b);
    }
}
