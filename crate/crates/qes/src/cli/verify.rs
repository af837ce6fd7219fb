//! The aggregate invariant suite behind `qes verify`: one named check per
//! family of guarantees, each reporting a deterministic metric line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli::discrepancy;
use crate::cli::output::fmt_f64;
use crate::oracle::{self, GridSpec};
use crate::recurrence::{self, RecurrenceSpec};
use crate::separable2d;
use crate::spectra::{self, PotentialModel};
use crate::wavefunction;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Tolerances the suite runs at. Defaults are the contract values; the CLI
/// can override them (an absurd override is expected to fail the run).
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub residual_tol: f64,
    pub eigen_tol: f64,
    pub parallel: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            residual_tol: 1e-8,
            eigen_tol: 1e-10,
            parallel: false,
        }
    }
}

pub const CHECK_NAMES: [&str; 8] = [
    "commutators",
    "tabulated",
    "eigen-identity",
    "residuals",
    "gauge",
    "separation",
    "assembly2d",
    "oracle",
];

/// Run the named checks, in the fixed order of [`CHECK_NAMES`], skipping
/// any listed in `skip`. With `parallel` set the checks run on separate
/// threads; results are still reported in order (all checks are pure).
pub fn run_suite(config: &VerifyConfig, skip: &[String]) -> Vec<CheckResult> {
    let selected: Vec<&'static str> = CHECK_NAMES
        .iter()
        .copied()
        .filter(|name| !skip.iter().any(|s| s == name))
        .collect();

    if config.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = selected
                .iter()
                .map(|&name| scope.spawn(move || run_check(name, config)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("check panicked")).collect()
        })
    } else {
        selected.iter().map(|&name| run_check(name, config)).collect()
    }
}

fn run_check(name: &'static str, config: &VerifyConfig) -> CheckResult {
    let (passed, detail) = match name {
        "commutators" => check_commutators(),
        "tabulated" => check_tabulated(config),
        "eigen-identity" => check_eigen_identity(config),
        "residuals" => check_residuals(config),
        "gauge" => check_gauge(),
        "separation" => check_separation(),
        "assembly2d" => check_assembly2d(config),
        "oracle" => check_oracle(),
        other => (false, format!("unknown check {other}")),
    };
    CheckResult {
        name,
        passed,
        detail,
    }
}

fn check_commutators() -> (bool, String) {
    let mut worst = 0.0f64;
    for j in 0..=8u32 {
        match crate::algebra::commutator_report(j, 12) {
            Ok(report) => worst = worst.max(report.max_defect()),
            Err(e) => return (false, e.to_string()),
        }
    }
    (worst <= 1e-12, format!("max defect {}", fmt_f64(worst)))
}

/// Closed-form table reproduction for j ≤ 3 over randomized draws. A row
/// may fail only if it appears in the discrepancy log and every real root
/// of the generated polynomial passes the eigen-identity.
fn check_tabulated(config: &VerifyConfig) -> (bool, String) {
    let logged: Vec<&str> = discrepancy::collect().iter().map(|e| e.id).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut worst_defect = 0.0f64;
    let mut excused = 0usize;
    for j in 0..=3u32 {
        for _ in 0..5 {
            let b = rng.gen_range(0.5..3.0);
            let c = rng.gen_range(0.5..3.0);
            let models = [
                PotentialModel::OneDimI { b, c },
                PotentialModel::OneDimII { v0: 0.0, b, c },
                PotentialModel::TwoDimI { a: b, b: c, c: 1.0 },
            ];
            for model in models {
                let spec = match RecurrenceSpec::new(&model, j) {
                    Ok(s) => s,
                    Err(e) => return (false, e.to_string()),
                };
                let table = match recurrence::generate_polynomials(&spec) {
                    Ok(t) => t,
                    Err(e) => return (false, e.to_string()),
                };
                let printed = recurrence::tabulated_critical(&model, j).expect("rows j <= 3");
                let prop =
                    match recurrence::proportionality_check(&table.critical, &printed, 1e-10) {
                        Ok(p) => p,
                        Err(e) => return (false, e.to_string()),
                    };
                if prop.proportional {
                    worst_defect = worst_defect.max(prop.max_defect);
                    continue;
                }
                // failing row: excusable only when logged and self-testing
                let key = format!("{}-critical-j{j}", discrepancy_family_key(&model));
                if !logged.iter().any(|id| *id == key) {
                    return (
                        false,
                        format!(
                            "row {} j={j} fails (defect {}) and is not in the discrepancy log",
                            model.family_name(),
                            fmt_f64(prop.max_defect)
                        ),
                    );
                }
                let roots = match spectra::real_roots(&table.critical, 1e-9) {
                    Ok(r) => r,
                    Err(e) => return (false, e.to_string()),
                };
                for &root in &roots.real {
                    match recurrence::recurrence_self_test(&spec, root) {
                        Ok(res) if res <= config.eigen_tol => {}
                        Ok(res) => {
                            return (
                                false,
                                format!("excused row self-test {} exceeds tolerance", fmt_f64(res)),
                            )
                        }
                        Err(e) => return (false, e.to_string()),
                    }
                }
                excused += 1;
            }
        }
    }
    (
        true,
        format!(
            "max defect {} over matching rows; {excused} logged row instances excused",
            fmt_f64(worst_defect)
        ),
    )
}

fn discrepancy_family_key(model: &PotentialModel) -> &'static str {
    match model {
        PotentialModel::OneDimI { .. } => "cubic",
        PotentialModel::OneDimII { .. } => "burrows",
        PotentialModel::TwoDimI { .. } => "quartic-harmonic",
        PotentialModel::TwoDimII { .. } => "two-quartic",
    }
}

fn draw_models(count: usize, seed: u64) -> Vec<PotentialModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * count);
    for _ in 0..count {
        let b = rng.gen_range(0.5..3.0);
        let c = rng.gen_range(0.5..3.0);
        out.push(PotentialModel::OneDimI { b, c });
        out.push(PotentialModel::OneDimII { v0: 0.0, b, c });
    }
    out
}

fn check_eigen_identity(config: &VerifyConfig) -> (bool, String) {
    let mut worst = 0.0f64;
    let mut roots_seen = 0usize;
    for model in draw_models(20, 0x5eed_0002) {
        for j in 0..=6u32 {
            let spec = match RecurrenceSpec::new(&model, j) {
                Ok(s) => s,
                Err(e) => return (false, e.to_string()),
            };
            let table = match recurrence::generate_polynomials(&spec) {
                Ok(t) => t,
                Err(e) => return (false, e.to_string()),
            };
            let roots = match spectra::real_roots(&table.critical, 1e-9) {
                Ok(r) => r,
                Err(e) => return (false, e.to_string()),
            };
            for &root in &roots.real {
                match recurrence::recurrence_self_test(&spec, root) {
                    Ok(res) => {
                        worst = worst.max(res);
                        roots_seen += 1;
                    }
                    Err(e) => return (false, e.to_string()),
                }
            }
        }
    }
    (
        worst <= config.eigen_tol,
        format!("max residual {} over {roots_seen} roots", fmt_f64(worst)),
    )
}

fn check_residuals(config: &VerifyConfig) -> (bool, String) {
    let xs = wavefunction::default_samples();
    let mut worst = 0.0f64;
    let mut levels_seen = 0usize;
    for model in draw_models(20, 0x5eed_0002) {
        for j in 0..=6u32 {
            let levels = match wavefunction::solve_levels(&model, j) {
                Ok(l) => l,
                Err(e) => return (false, e.to_string()),
            };
            for level in levels {
                let rep = match wavefunction::schrodinger_residual(&level, &xs) {
                    Ok(r) => r,
                    Err(e) => return (false, e.to_string()),
                };
                worst = worst.max(rep.max_residual);
                levels_seen += 1;
            }
        }
    }
    if worst > config.residual_tol {
        return (
            false,
            format!("max residual {} over {levels_seen} levels", fmt_f64(worst)),
        );
    }
    // a deliberately wrong energy must break the check
    let mut level = match wavefunction::solve_levels(&PotentialModel::OneDimI { b: 1.0, c: 1.0 }, 1)
    {
        Ok(mut l) => l.remove(0),
        Err(e) => return (false, e.to_string()),
    };
    level.energy += 0.1;
    let broken = match wavefunction::schrodinger_residual(&level, &xs) {
        Ok(r) => r.max_residual,
        Err(e) => return (false, e.to_string()),
    };
    if broken <= 1e-3 {
        return (
            false,
            format!("perturbed energy went undetected (residual {})", fmt_f64(broken)),
        );
    }
    (
        true,
        format!(
            "max residual {} over {levels_seen} levels; perturbation detected at {}",
            fmt_f64(worst),
            fmt_f64(broken)
        ),
    )
}

fn check_gauge() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut models = draw_models(3, 0x5eed_0003);
    models.push(PotentialModel::OneDimI { b: 1.0, c: 1.0 });
    models.push(PotentialModel::OneDimII {
        v0: 0.0,
        b: 2.0,
        c: 1.0,
    });
    for model in models {
        for j in 0..=3u32 {
            let spectrum = match spectra::full_spectrum(&model, j) {
                Ok(s) => s,
                Err(e) => return (false, e.to_string()),
            };
            for &eps in &spectrum.eps_roots {
                match wavefunction::gauge_consistency(&model, j, eps) {
                    Ok(d) => worst = worst.max(d),
                    Err(e) => return (false, e.to_string()),
                }
            }
        }
    }
    (worst <= 1e-10, format!("max defect {}", fmt_f64(worst)))
}

fn check_separation() -> (bool, String) {
    let models = [
        PotentialModel::TwoDimI {
            a: 1.3,
            b: -0.4,
            c: 0.9,
        },
        PotentialModel::TwoDimII {
            a1: 0.8,
            a2: 1.1,
            b1: -0.6,
            b2: 0.3,
        },
    ];
    let mut worst = 0.0f64;
    for model in models {
        for (jx, jy) in [(0u32, 0u32), (1, 0), (2, 1), (3, 2)] {
            match separable2d::separation_defect(&model, jx, jy) {
                Ok(d) => worst = worst.max(d),
                Err(e) => return (false, e.to_string()),
            }
        }
        match separable2d::ground_identity_defect(&model) {
            Ok(d) => worst = worst.max(d),
            Err(e) => return (false, e.to_string()),
        }
    }
    (worst <= 1e-12, format!("max defect {}", fmt_f64(worst)))
}

fn check_assembly2d(config: &VerifyConfig) -> (bool, String) {
    // two real levels at E0 ∓ 2
    let model = PotentialModel::TwoDimI {
        a: 1.0,
        b: -1.0,
        c: 1.0,
    };
    let spectrum = match separable2d::solve_2d_model1(&model, 1, 0) {
        Ok(s) => s,
        Err(e) => return (false, e.to_string()),
    };
    if spectrum.levels.len() != 2 {
        return (false, format!("expected 2 levels, got {}", spectrum.levels.len()));
    }
    let defect = (spectrum.levels[0].e_total - (spectrum.e0 - 2.0))
        .abs()
        .max((spectrum.levels[1].e_total - (spectrum.e0 + 2.0)).abs());
    if defect > 1e-10 {
        return (false, format!("level energies off by {}", fmt_f64(defect)));
    }

    // complex pair and no real level
    let model = PotentialModel::TwoDimI {
        a: 1.0,
        b: 1.0,
        c: 1.0,
    };
    let complex = match separable2d::solve_2d_model1(&model, 1, 0) {
        Ok(s) => s,
        Err(e) => return (false, e.to_string()),
    };
    if !complex.levels.is_empty() || complex.complex_root_count != 2 {
        return (
            false,
            format!(
                "expected zero real levels and one complex pair, got {} and {}",
                complex.levels.len(),
                complex.complex_root_count
            ),
        );
    }

    // single two-quartic ground level passing both axis checks
    let model = PotentialModel::TwoDimII {
        a1: 1.0,
        a2: 1.0,
        b1: 1.0,
        b2: 1.0,
    };
    let ground = match separable2d::solve_2d_model2(&model, 0, 0) {
        Ok(s) => s,
        Err(e) => return (false, e.to_string()),
    };
    if ground.levels.len() != 1 {
        return (false, format!("expected 1 level, got {}", ground.levels.len()));
    }
    let level = &ground.levels[0];
    let res = level.residual_x.max(level.residual_y);
    if res > config.residual_tol {
        return (false, format!("axis residual {}", fmt_f64(res)));
    }
    (
        true,
        format!(
            "pair defect {}, complex pair reported, ground residual {}",
            fmt_f64(defect),
            fmt_f64(res)
        ),
    )
}

fn check_oracle() -> (bool, String) {
    let grid = match GridSpec::new(-12.0, 12.0, 4000) {
        Ok(g) => g,
        Err(e) => return (false, e.to_string()),
    };
    let mut worst = 0.0f64;
    for c in [1.0f64, 2.0] {
        let evs = match oracle::refined_eigenvalues(|y| c * c * y * y, &grid, 6) {
            Ok(e) => e,
            Err(e) => return (false, e.to_string()),
        };
        for (n, ev) in evs.iter().enumerate() {
            let exact = (2 * n + 1) as f64 * c;
            worst = worst.max((ev - exact).abs());
        }
        // separation-constant quantization against the oracle ladder
        for k in 0..=5u32 {
            let c1 = match separable2d::quantize_separation_constant(c, k) {
                Ok(v) => v,
                Err(e) => return (false, e.to_string()),
            };
            worst = worst.max((evs[k as usize] - c - c1).abs());
        }
    }
    (worst <= 1e-6, format!("max defect {}", fmt_f64(worst)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let results = run_suite(&VerifyConfig::default(), &[]);
        assert_eq!(results.len(), CHECK_NAMES.len());
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn absurd_tolerance_fails_residuals() {
        let config = VerifyConfig {
            residual_tol: 1e-20,
            ..VerifyConfig::default()
        };
        let results = run_suite(&config, &[]);
        let residuals = results.iter().find(|r| r.name == "residuals").unwrap();
        assert!(!residuals.passed);
    }

    #[test]
    fn skip_removes_checks() {
        let results = run_suite(&VerifyConfig::default(), &["oracle".to_string()]);
        assert!(results.iter().all(|r| r.name != "oracle"));
        assert_eq!(results.len(), CHECK_NAMES.len() - 1);
    }

    #[test]
    fn parallel_matches_sequential() {
        let seq = run_suite(&VerifyConfig::default(), &[]);
        let par = run_suite(
            &VerifyConfig {
                parallel: true,
                ..VerifyConfig::default()
            },
            &[],
        );
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.passed, b.passed);
            assert_eq!(a.detail, b.detail);
        }
    }
}
