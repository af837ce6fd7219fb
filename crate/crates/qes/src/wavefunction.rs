//! Full eigenfunctions ψ = e^{g(x)}·R(x): evaluation, node counting,
//! pointwise Schrödinger residuals and gauge-tail diagnostics.
//!
//! The gauge exponents of both 1D families carry a cubic term, so e^{g}
//! always diverges on one half line. The QES construction is algebraic and
//! does not promise membership in the Hermitian real-line spectrum; the
//! normalizability report states which tail diverges instead of hiding it.

use crate::algebra::{self, CoeffVector};
use crate::error::{Error, Result};
use crate::recurrence::RecurrenceSpec;
use crate::spectra::{self, PotentialModel};

/// Exponent of the wavefunction prefactor:
/// ψ-prefactor = exp(g₃x³ + g₂x² + g₁x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeFactor {
    pub g3: f64,
    pub g2: f64,
    pub g1: f64,
}

/// |exponent| beyond which exp() is clamped and the sample flagged.
/// Double precision overflows just past e^709.
pub const EXPONENT_CLAMP: f64 = 700.0;

impl GaugeFactor {
    pub fn new(g3: f64, g2: f64, g1: f64) -> Result<Self> {
        if !(g3.is_finite() && g2.is_finite() && g1.is_finite()) {
            return Err(Error::invalid("gauge coefficients must be finite"));
        }
        Ok(GaugeFactor { g3, g2, g1 })
    }

    /// Gauge exponent of a 1D family at representation index j.
    ///
    /// Cubic-quartic family: (−√C/6, B/(6√C), 3(j+1)C/(2B)).
    /// Burrows-type family: (C/(3√2), B/(2√2), 0); this is the sign that
    /// makes exp(g)·R solve the equation with the forced slope A, which the
    /// operator form and the constraint both fix.
    pub fn for_model(model: &PotentialModel, j: u32) -> Result<GaugeFactor> {
        model.validate()?;
        match *model {
            PotentialModel::OneDimI { b, c } => {
                let sc = c.sqrt();
                GaugeFactor::new(
                    -sc / 6.0,
                    b / (6.0 * sc),
                    3.0 * f64::from(j + 1) * c / (2.0 * b),
                )
            }
            PotentialModel::OneDimII { b, c, .. } => {
                let s2 = std::f64::consts::SQRT_2;
                GaugeFactor::new(c / (3.0 * s2), b / (2.0 * s2), 0.0)
            }
            _ => Err(Error::invalid(
                "1D gauge factors only; 2D axis gauges live in separable2d",
            )),
        }
    }

    pub fn exponent(&self, x: f64) -> f64 {
        ((self.g3 * x + self.g2) * x + self.g1) * x
    }

    /// dg/dx
    pub fn slope(&self, x: f64) -> f64 {
        (3.0 * self.g3 * x + 2.0 * self.g2) * x + self.g1
    }

    /// d²g/dx²
    pub fn curvature(&self, x: f64) -> f64 {
        6.0 * self.g3 * x + 2.0 * self.g2
    }

    /// Coefficients of dg/dx as a polynomial.
    pub fn slope_poly(&self) -> CoeffVector {
        CoeffVector::new(vec![self.g1, 2.0 * self.g2, 3.0 * self.g3])
    }

    /// Coefficients of d²g/dx².
    pub fn curvature_poly(&self) -> CoeffVector {
        CoeffVector::new(vec![2.0 * self.g2, 6.0 * self.g3])
    }
}

/// Tail classification of the gauge prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalizability {
    BothTailsDecay,
    OneTailDiverges,
    BothTailsDiverge,
    Undetermined,
}

impl Normalizability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Normalizability::BothTailsDecay => "both-tails-decay",
            Normalizability::OneTailDiverges => "one-tail-diverges",
            Normalizability::BothTailsDiverge => "both-tails-diverge",
            Normalizability::Undetermined => "undetermined",
        }
    }
}

/// Dominant exponent term on one tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailExponent {
    /// Power of x of the dominant term (3, 2, 1, or 0 for a flat gauge).
    pub power: u32,
    /// Signed coefficient of the dominant term as x goes to that infinity;
    /// negative means the prefactor decays.
    pub coefficient: f64,
}

impl TailExponent {
    pub fn decays(&self) -> bool {
        self.coefficient < 0.0
    }
}

/// Normalizability diagnosis of a gauge factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport {
    pub classification: Normalizability,
    pub pos_tail: TailExponent,
    pub neg_tail: TailExponent,
}

/// Sign analysis of the dominant exponent term as x → ±∞.
pub fn normalizability_report(gauge: &GaugeFactor) -> TailReport {
    let tail = |sign: f64| -> TailExponent {
        if gauge.g3 != 0.0 {
            TailExponent {
                power: 3,
                coefficient: gauge.g3 * sign,
            }
        } else if gauge.g2 != 0.0 {
            TailExponent {
                power: 2,
                coefficient: gauge.g2,
            }
        } else if gauge.g1 != 0.0 {
            TailExponent {
                power: 1,
                coefficient: gauge.g1 * sign,
            }
        } else {
            TailExponent {
                power: 0,
                coefficient: 0.0,
            }
        }
    };
    let pos = tail(1.0);
    let neg = tail(-1.0);
    let classification = match (pos.power, pos.decays(), neg.decays()) {
        (0, _, _) => Normalizability::Undetermined,
        (_, true, true) => Normalizability::BothTailsDecay,
        (_, false, false) => Normalizability::BothTailsDiverge,
        _ => Normalizability::OneTailDiverges,
    };
    TailReport {
        classification,
        pos_tail: pos,
        neg_tail: neg,
    }
}

/// One QES level with everything needed to evaluate and verify it.
#[derive(Debug, Clone)]
pub struct QesSolution {
    pub model: PotentialModel,
    pub j: u32,
    pub eps: f64,
    pub energy: f64,
    /// Eigenfunction polynomial, scaled to unit maximum coefficient.
    pub r: CoeffVector,
    pub gauge: GaugeFactor,
    pub node_count: usize,
    pub max_residual: f64,
    pub normalizable: Normalizability,
}

/// One ψ sample with the saturation flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiSample {
    pub x: f64,
    pub r_value: f64,
    pub exponent: f64,
    pub psi: f64,
    pub saturated: bool,
}

/// Evaluate ψ = exp(g(x))·R(x) with the exponent clamped at ±700.
pub fn eval_psi(solution: &QesSolution, x: f64) -> PsiSample {
    let exponent = solution.gauge.exponent(x);
    let saturated = exponent.abs() > EXPONENT_CLAMP;
    let clamped = exponent.clamp(-EXPONENT_CLAMP, EXPONENT_CLAMP);
    let r_value = solution.r.eval(x);
    PsiSample {
        x,
        r_value,
        exponent,
        psi: clamped.exp() * r_value,
        saturated,
    }
}

/// Residual report of a pointwise Schrödinger check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// max over samples of |−ψ'' + (V−E)ψ| / (1 + |ψ|)
    pub max_residual: f64,
    pub evaluated: usize,
    pub saturated_skipped: usize,
}

/// Pointwise |Hψ − Eψ| / (1 + |ψ|) for ψ = exp(g)·R against a polynomial
/// potential. ψ'' is expanded symbolically (no finite differences); each
/// sample combines Horner evaluations of R, R', R'', g', g'' and V, so the
/// only cancellation error is local round-off. Saturated samples are
/// skipped and counted.
pub fn residual_pointwise(
    gauge: &GaugeFactor,
    r: &CoeffVector,
    potential: &CoeffVector,
    energy: f64,
    xs: &[f64],
) -> ResidualReport {
    let rp = r.derivative();
    let rpp = rp.derivative();
    let mut max_residual = 0.0f64;
    let mut evaluated = 0usize;
    let mut saturated = 0usize;
    for &x in xs {
        let g = gauge.exponent(x);
        if g.abs() > EXPONENT_CLAMP {
            saturated += 1;
            continue;
        }
        let gp = gauge.slope(x);
        let gpp = gauge.curvature(x);
        let rv = r.eval(x);
        let v = potential.eval(x);
        // (Hψ − Eψ)/e^g = −R'' − 2g'R' − (g'' + g'² − V + E)R
        let p = -rpp.eval(x) - 2.0 * gp * rp.eval(x) - (gpp + gp * gp - v + energy) * rv;
        let eg = g.exp();
        let res = (eg * p).abs() / (1.0 + (eg * rv).abs());
        max_residual = max_residual.max(res);
        evaluated += 1;
    }
    ResidualReport {
        max_residual,
        evaluated,
        saturated_skipped: saturated,
    }
}

/// Schrödinger residual of a 1D QES level over the given samples, with the
/// potential built from the j-forced slope.
pub fn schrodinger_residual(solution: &QesSolution, xs: &[f64]) -> Result<ResidualReport> {
    let v = solution.model.potential_coeffs(solution.j)?;
    Ok(residual_pointwise(
        &solution.gauge,
        &solution.r,
        &v,
        solution.energy,
        xs,
    ))
}

/// Count sign changes of R on [lo, hi]: a dense scan at 10⁻³·(hi−lo)
/// resolution refined by bisection to 1e-12. Clustered roots merge.
pub fn count_nodes(r: &CoeffVector, lo: f64, hi: f64) -> Result<usize> {
    if !(lo < hi) {
        return Err(Error::invalid("node interval must satisfy lo < hi"));
    }
    if r.is_zero() {
        return Ok(0);
    }
    let steps = 1000usize;
    let width = hi - lo;
    let h = width / steps as f64;
    let mut roots: Vec<f64> = Vec::new();
    let mut prev_x = lo;
    let mut prev_v = r.eval(lo);
    for i in 1..=steps {
        let x = lo + h * i as f64;
        let v = r.eval(x);
        if prev_v == 0.0 {
            push_root(&mut roots, prev_x, width);
        } else if v != 0.0 && prev_v.signum() != v.signum() {
            let root = bisect(r, prev_x, x);
            push_root(&mut roots, root, width);
        }
        prev_x = x;
        prev_v = v;
    }
    if prev_v == 0.0 {
        push_root(&mut roots, prev_x, width);
    }
    Ok(roots.len())
}

fn push_root(roots: &mut Vec<f64>, root: f64, width: f64) {
    if roots
        .last()
        .map(|last| (root - last).abs() > 1e-9 * width)
        .unwrap_or(true)
    {
        roots.push(root);
    }
}

fn bisect(r: &CoeffVector, mut a: f64, mut b: f64) -> f64 {
    let mut fa = r.eval(a);
    for _ in 0..100 {
        if (b - a).abs() <= 1e-12 {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = r.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa.signum() != fm.signum() {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Default residual sample grid: 50 uniform points in [−3, 3].
pub fn default_samples() -> Vec<f64> {
    uniform_samples(-3.0, 3.0, 50)
}

pub fn uniform_samples(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (n as f64 - 1.0);
    (0..n).map(|i| lo + h * i as f64).collect()
}

/// Assemble every QES level of a 1D family at index j: roots, energies,
/// eigenfunction coefficients, node counts, residuals and tail diagnosis.
pub fn solve_levels(model: &PotentialModel, j: u32) -> Result<Vec<QesSolution>> {
    let spectrum = spectra::full_spectrum(model, j)?;
    let spec = RecurrenceSpec::new(model, j)?;
    let gauge = GaugeFactor::for_model(model, j)?;
    let tail = normalizability_report(&gauge).classification;
    let xs = default_samples();

    let mut out = Vec::with_capacity(spectrum.eps_roots.len());
    for (idx, &eps) in spectrum.eps_roots.iter().enumerate() {
        let lambda = spec.operator_eigenvalue(eps);
        let r = algebra::eigenvector_for_root(spec.operator(), lambda)?;
        let node_count = count_nodes(&r, -10.0, 10.0)?;
        let mut solution = QesSolution {
            model: *model,
            j,
            eps,
            energy: spectrum.energies[idx],
            r,
            gauge,
            node_count,
            max_residual: 0.0,
            normalizable: tail,
        };
        solution.max_residual = schrodinger_residual(&solution, &xs)?.max_residual;
        out.push(solution);
    }
    Ok(out)
}

/// Coefficient-level gauge identity for one level: the expansion of
/// (Hψ − Eψ)/e^g must be the zero polynomial once V carries the forced
/// slope. Returns the defect relative to the largest term coefficient.
pub fn gauge_consistency(model: &PotentialModel, j: u32, eps: f64) -> Result<f64> {
    let spec = RecurrenceSpec::new(model, j)?;
    let lambda = spec.operator_eigenvalue(eps);
    let r = algebra::eigenvector_for_root(spec.operator(), lambda)?;
    let gauge = GaugeFactor::for_model(model, j)?;
    let v = model.potential_coeffs(j)?;
    let energy = spectra::energy_map(model, j, eps, None)?;
    Ok(gauge_identity_defect(&gauge, &r, &v, energy))
}

/// Defect of −R'' − 2g'R' + (V − E − g'' − g'²)R as a dense polynomial,
/// relative to the largest coefficient among its summands.
pub fn gauge_identity_defect(
    gauge: &GaugeFactor,
    r: &CoeffVector,
    potential: &CoeffVector,
    energy: f64,
) -> f64 {
    let rp = r.derivative();
    let rpp = rp.derivative();
    let gp = gauge.slope_poly();
    let gpp = gauge.curvature_poly();

    let term_drift = gp.mul(&rp).scaled(-2.0);
    let term_v = potential.mul(r);
    let term_gauge = gpp.add(&gp.mul(&gp)).mul(r).scaled(-1.0);
    let term_energy = r.scaled(-energy);

    let lhs = rpp
        .scaled(-1.0)
        .add(&term_drift)
        .add(&term_v)
        .add(&term_gauge)
        .add(&term_energy);

    let scale = term_v
        .max_abs()
        .max(term_gauge.max_abs())
        .max(term_drift.max_abs())
        .max(term_energy.max_abs())
        .max(1.0);
    lhs.max_abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_d_i() -> PotentialModel {
        PotentialModel::OneDimI { b: 1.0, c: 1.0 }
    }

    fn one_d_ii() -> PotentialModel {
        PotentialModel::OneDimII {
            v0: 0.0,
            b: 2.0,
            c: 1.0,
        }
    }

    #[test]
    fn gauge_coefficients() {
        let g = GaugeFactor::for_model(&one_d_i(), 0).unwrap();
        assert!((g.g3 + 1.0 / 6.0).abs() < 1e-15);
        assert!((g.g2 - 1.0 / 6.0).abs() < 1e-15);
        assert!((g.g1 - 1.5).abs() < 1e-15);

        let g = GaugeFactor::for_model(&one_d_ii(), 0).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        assert!((g.g3 - 1.0 / (3.0 * s2)).abs() < 1e-15);
        assert!((g.g2 - 1.0 / s2).abs() < 1e-15);
        assert_eq!(g.g1, 0.0);
    }

    #[test]
    fn psi_at_origin_is_one_for_ground_block() {
        let levels = solve_levels(&one_d_i(), 0).unwrap();
        assert_eq!(levels.len(), 1);
        let s = eval_psi(&levels[0], 0.0);
        assert!((s.psi - 1.0).abs() < 1e-15);
        assert!(!s.saturated);
    }

    #[test]
    fn psi_vanishes_at_polynomial_nodes() {
        let levels = solve_levels(&one_d_ii(), 1).unwrap();
        let top = &levels[1];
        // R has degree 1; its single root is a node of ψ
        let root = -top.r.coeff(0) / top.r.coeff(1);
        let s = eval_psi(top, root);
        assert!(s.psi.abs() < 1e-12);
    }

    #[test]
    fn burrows_gauge_value_at_one() {
        let levels = solve_levels(&one_d_ii(), 0).unwrap();
        let s = eval_psi(&levels[0], 1.0);
        let expected = (4.0 / (3.0 * std::f64::consts::SQRT_2)).exp();
        assert!((s.psi - expected).abs() < 1e-12);
    }

    #[test]
    fn saturation_flag_far_out() {
        let levels = solve_levels(&one_d_i(), 0).unwrap();
        let s = eval_psi(&levels[0], -50.0);
        assert!(s.saturated);
        assert!(s.psi.is_finite());
    }

    #[test]
    fn residuals_within_contract() {
        let xs = default_samples();
        for (model, j) in [(one_d_i(), 0u32), (one_d_ii(), 1)] {
            for level in solve_levels(&model, j).unwrap() {
                let rep = schrodinger_residual(&level, &xs).unwrap();
                assert!(
                    rep.max_residual <= 1e-8,
                    "family {} j {j}: {:.2e}",
                    model.family_name(),
                    rep.max_residual
                );
            }
        }
    }

    #[test]
    fn wrong_energy_breaks_residual() {
        let xs = default_samples();
        let mut level = solve_levels(&one_d_i(), 0).unwrap().remove(0);
        level.energy += 0.1;
        let rep = schrodinger_residual(&level, &xs).unwrap();
        assert!(rep.max_residual > 1e-3);
    }

    #[test]
    fn node_counts() {
        assert_eq!(count_nodes(&CoeffVector::one(), -5.0, 5.0).unwrap(), 0);
        assert_eq!(
            count_nodes(&CoeffVector::new(vec![0.0, 1.0]), -5.0, 5.0).unwrap(),
            1
        );
        let levels = solve_levels(&one_d_ii(), 1).unwrap();
        let top = &levels[1];
        assert_eq!(count_nodes(&top.r, -10.0, 10.0).unwrap(), 1);
        assert!(count_nodes(&CoeffVector::one(), 2.0, 1.0).is_err());
    }

    #[test]
    fn node_count_bounded_by_j() {
        for j in 0..=5u32 {
            for level in solve_levels(&one_d_i(), j).unwrap() {
                assert!(level.node_count <= j as usize);
            }
        }
    }

    #[test]
    fn tail_reports() {
        let g = GaugeFactor::for_model(&one_d_i(), 0).unwrap();
        let rep = normalizability_report(&g);
        assert_eq!(rep.classification, Normalizability::OneTailDiverges);
        // exp(−x³/6): decays at +∞, blows up at −∞
        assert!(rep.pos_tail.decays());
        assert!(!rep.neg_tail.decays());

        let gauss = GaugeFactor::new(0.0, -0.5, 0.0).unwrap();
        assert_eq!(
            normalizability_report(&gauss).classification,
            Normalizability::BothTailsDecay
        );

        let g = GaugeFactor::for_model(&one_d_ii(), 0).unwrap();
        assert_eq!(
            normalizability_report(&g).classification,
            Normalizability::OneTailDiverges
        );

        let flat = GaugeFactor::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(
            normalizability_report(&flat).classification,
            Normalizability::Undetermined
        );
    }

    #[test]
    fn gauge_identity_holds_for_small_blocks() {
        for j in 0..=3u32 {
            for model in [one_d_i(), one_d_ii()] {
                let spectrum = spectra::full_spectrum(&model, j).unwrap();
                for &eps in &spectrum.eps_roots {
                    let defect = gauge_consistency(&model, j, eps).unwrap();
                    assert!(
                        defect <= 1e-10,
                        "family {} j {j} eps {eps}: defect {defect:.2e}",
                        model.family_name()
                    );
                }
            }
        }
    }

    #[test]
    fn clamp_keeps_value_finite_and_flagged() {
        let levels = solve_levels(&one_d_i(), 0).unwrap();
        // walk across the clamp boundary; psi stays finite, flag flips once
        let mut seen_saturated = false;
        for i in 0..200 {
            let x = -10.0 - 0.2 * i as f64;
            let s = eval_psi(&levels[0], x);
            assert!(s.psi.is_finite());
            if s.saturated {
                seen_saturated = true;
            }
        }
        assert!(seen_saturated);
    }
}
