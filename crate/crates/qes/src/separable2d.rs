//! Separable 2D double wells: the f = 0 separation framework, both 2D
//! families, the confluent hypergeometric y-solution of the
//! quartic-harmonic family, and assembly of full 2D levels.
//!
//! All separated equations are derived by differentiating the ground-state
//! exponent, never transcribed: with ψ = R(x)Q(y)·exp(−W(x)−F(y)) the factor
//! equations are
//!
//! ```text
//! −R'' + 2W'R' + (g(x) + E₀ − E + c₁)R = 0
//! −Q'' + 2F'Q' + (h(y) − c₁)Q = 0
//! ```
//!
//! where g(x) + h(y) = V − V₀ and c₁ is the separation constant. Energies
//! therefore assemble as E = E₀ + c₁ + λ with λ the x-operator eigenvalue.

use crate::algebra::{self, CoeffVector};
use crate::error::{Error, Result};
use crate::recurrence::{self, RecurrenceSpec};
use crate::spectra::{self, PotentialModel};
use crate::wavefunction::{residual_pointwise, uniform_samples, GaugeFactor, ResidualReport};

/// The two 1D problems a separable 2D well splits into.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatedProblem {
    /// 2W'(x), the x-equation drift.
    pub x_drift: CoeffVector,
    /// g(x), the x-dependent potential offset V − V₀.
    pub x_offset: CoeffVector,
    /// 2F'(y), the y-equation drift.
    pub y_drift: CoeffVector,
    /// h(y), the y-dependent potential offset.
    pub y_offset: CoeffVector,
    /// Separation constant; zero until a level fixes it.
    pub c1: f64,
    /// Ground-state energy of the family.
    pub e0: f64,
}

impl SeparatedProblem {
    pub fn with_separation_constant(mut self, c1: f64) -> Self {
        self.c1 = c1;
        self
    }
}

/// Exponents W(x), F(y) of the ground-state factor exp(−W−F) together with
/// the axis potentials of a 2D family at state parameters α = j_x+1,
/// β = j_y+1.
#[derive(Debug, Clone)]
struct AxisData {
    x_gauge: GaugeFactor,
    y_gauge: GaugeFactor,
    /// x-axis potential with the state parameter substituted.
    vx: CoeffVector,
    vy: CoeffVector,
    e0: f64,
}

fn axis_data(model: &PotentialModel, jx: u32, jy: u32) -> Result<AxisData> {
    model.validate()?;
    match *model {
        PotentialModel::TwoDimI { a, b, c } => {
            let alpha = f64::from(jx + 1);
            Ok(AxisData {
                // exp(−Ax³/3 − Bx), exp(−Cy²/2)
                x_gauge: GaugeFactor::new(-a / 3.0, 0.0, -b)?,
                y_gauge: GaugeFactor::new(0.0, -c / 2.0, 0.0)?,
                vx: CoeffVector::new(vec![0.0, -2.0 * a * alpha, 2.0 * a * b, 0.0, a * a]),
                vy: CoeffVector::new(vec![0.0, 0.0, c * c]),
                e0: c - b * b,
            })
        }
        PotentialModel::TwoDimII { a1, a2, b1, b2 } => {
            let alpha = f64::from(jx + 1);
            let beta = f64::from(jy + 1);
            Ok(AxisData {
                x_gauge: GaugeFactor::new(-a1 / 3.0, 0.0, -b1)?,
                y_gauge: GaugeFactor::new(-a2 / 3.0, 0.0, -b2)?,
                vx: CoeffVector::new(vec![0.0, -2.0 * a1 * alpha, 2.0 * a1 * b1, 0.0, a1 * a1]),
                vy: CoeffVector::new(vec![0.0, -2.0 * a2 * beta, 2.0 * a2 * b2, 0.0, a2 * a2]),
                e0: -(b1 * b1 + b2 * b2),
            })
        }
        _ => Err(Error::invalid("separation applies to the 2D families")),
    }
}

/// Split a 2D family into its two 1D factor equations at axis indices
/// (j_x, j_y). The quartic-harmonic family ignores j_y: its y-ladder is
/// labeled by the oscillator excitation k instead.
pub fn separate(model: &PotentialModel, jx: u32, jy: u32) -> Result<SeparatedProblem> {
    let data = axis_data(model, jx, jy)?;
    let (x_offset, y_offset) = match *model {
        PotentialModel::TwoDimI { a, .. } => (
            CoeffVector::new(vec![0.0, -2.0 * a * f64::from(jx)]),
            CoeffVector::zero(),
        ),
        PotentialModel::TwoDimII { a1, a2, .. } => (
            CoeffVector::new(vec![0.0, -2.0 * a1 * f64::from(jx)]),
            CoeffVector::new(vec![0.0, -2.0 * a2 * f64::from(jy)]),
        ),
        _ => unreachable!("axis_data rejects 1D families"),
    };
    Ok(SeparatedProblem {
        x_drift: data.x_gauge.slope_poly().scaled(-2.0),
        x_offset,
        y_drift: data.y_gauge.slope_poly().scaled(-2.0),
        y_offset,
        c1: 0.0,
        e0: data.e0,
    })
}

/// Coefficient defect between the separated offsets g(x), h(y) and the
/// direct difference V − V₀ of the axis potentials at their state
/// parameters versus the ground-state values.
pub fn separation_defect(model: &PotentialModel, jx: u32, jy: u32) -> Result<f64> {
    let sep = separate(model, jx, jy)?;
    let excited = axis_data(model, jx, jy)?;
    let ground = axis_data(model, 0, 0)?;
    let dx = excited.vx.sub(&ground.vx).sub(&sep.x_offset).max_abs();
    let dy = excited.vy.sub(&ground.vy).sub(&sep.y_offset).max_abs();
    Ok(dx.max(dy))
}

/// Defect of the ground-state identity V₀ − E₀ = W'² + F'² − W'' − F''
/// for the f = 0 separable form, checked coefficient by coefficient.
pub fn ground_identity_defect(model: &PotentialModel) -> Result<f64> {
    let data = axis_data(model, 0, 0)?;
    let defect_axis = |gauge: &GaugeFactor, v: &CoeffVector| -> f64 {
        // exponent is −W, so W' = −slope and W'² − W'' = slope² + curvature'
        let wp = gauge.slope_poly().scaled(-1.0);
        let rhs = wp.mul(&wp).sub(&gauge.curvature_poly().scaled(-1.0));
        // v carries no constant; match the non-constant part
        let diff = v.sub(&rhs);
        diff.coeffs()
            .iter()
            .skip(1)
            .fold(0.0f64, |a, c| a.max(c.abs()))
    };
    let dx = defect_axis(&data.x_gauge, &data.vx);
    let dy = defect_axis(&data.y_gauge, &data.vy);
    // constant bookkeeping: the axis constants must sum to −E₀
    let const_x = {
        let wp = data.x_gauge.slope_poly().scaled(-1.0);
        wp.mul(&wp).sub(&data.x_gauge.curvature_poly().scaled(-1.0)).coeff(0)
    };
    let const_y = {
        let fp = data.y_gauge.slope_poly().scaled(-1.0);
        fp.mul(&fp).sub(&data.y_gauge.curvature_poly().scaled(-1.0)).coeff(0)
    };
    let dc = (const_x + const_y + data.e0).abs();
    Ok(dx.max(dy).max(dc))
}

/// Polynomial-truncation value of the separation constant for the
/// oscillator-type y-equation −Q'' + 2cyQ' − c₁Q = 0: c₁ = 2ck, with a
/// degree-k polynomial Q.
pub fn quantize_separation_constant(c: f64, k: u32) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::domain("oscillator stiffness must be positive"));
    }
    Ok(2.0 * c * f64::from(k))
}

/// The degree-k polynomial solving −Q'' + 2cyQ' − 2ckQ = 0, monic.
pub fn q_polynomial(c: f64, k: u32) -> Result<CoeffVector> {
    if !(c > 0.0) {
        return Err(Error::domain("oscillator stiffness must be positive"));
    }
    let k = k as usize;
    let mut q = vec![0.0; k + 1];
    q[k] = 1.0;
    // matching powers: q_{n} = (n+2)(n+1) q_{n+2} / (2c(n−k)) downward
    let mut n = k as i64 - 2;
    while n >= 0 {
        let nf = n as f64;
        q[n as usize] = (nf + 2.0) * (nf + 1.0) * q[(n + 2) as usize]
            / (2.0 * c * (nf - k as f64));
        n -= 2;
    }
    Ok(CoeffVector::new(q))
}

/// Kummer series evaluation of ₁F₁(a; b; z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kummer {
    pub value: f64,
    /// False when 500 terms did not reach the 1e-16 relative cutoff; the
    /// partial sum is still returned.
    pub converged: bool,
    pub terms: usize,
}

const KUMMER_MAX_TERMS: usize = 500;
const KUMMER_EPS: f64 = 1e-16;

/// Σ (a)ₙ/(b)ₙ zⁿ/n!, term-recursive. Terminates analytically when a is a
/// non-positive integer.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<Kummer> {
    let terminating = a <= 0.0 && a.fract() == 0.0;
    if b <= 0.0 && b.fract() == 0.0 && !(terminating && a > b) {
        return Err(Error::invalid(
            "1F1 pole: b is a non-positive integer and the series does not terminate first",
        ));
    }
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    for n in 0..KUMMER_MAX_TERMS {
        let nf = n as f64;
        if terminating && a + nf == 0.0 {
            return Ok(Kummer {
                value: sum,
                converged: true,
                terms: n + 1,
            });
        }
        term *= (a + nf) / (b + nf) * z / (nf + 1.0);
        sum += term;
        if term.abs() < KUMMER_EPS * sum.abs().max(1.0) {
            return Ok(Kummer {
                value: sum,
                converged: true,
                terms: n + 2,
            });
        }
    }
    Ok(Kummer {
        value: sum,
        converged: false,
        terms: KUMMER_MAX_TERMS,
    })
}

/// Confluent-hypergeometric description of the y-factor of the
/// quartic-harmonic family. The general solution is
/// n₂·₁F₁(−c₁/(4c); 1/2; cy²) + n₁·y·₁F₁(1/2 − c₁/(4c); 3/2; cy²);
/// at quantized c₁ one branch terminates into the attached polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerQ {
    /// Oscillator stiffness c (the Gaussian exponent coefficient).
    pub c: f64,
    pub c1: f64,
    /// Weight of the odd branch y·₁F₁(1/2 − c₁/(4c); 3/2; cy²).
    pub n1: f64,
    /// Weight of the even branch ₁F₁(−c₁/(4c); 1/2; cy²).
    pub n2: f64,
}

impl KummerQ {
    pub fn eval(&self, y: f64) -> Result<f64> {
        let z = self.c * y * y;
        let even = kummer_1f1(-self.c1 / (4.0 * self.c), 0.5, z)?;
        let odd = kummer_1f1(0.5 - self.c1 / (4.0 * self.c), 1.5, z)?;
        Ok(self.n2 * even.value + self.n1 * y * odd.value)
    }
}

/// One assembled 2D level.
#[derive(Debug, Clone)]
pub struct TwoDLevel {
    /// y-quantum label: oscillator excitation k, or the c₁-root index for
    /// the two-quartic family.
    pub k: u32,
    /// Index of the x-root within this k, ascending in energy.
    pub root_index: usize,
    pub c1: f64,
    pub e_total: f64,
    pub e_x: f64,
    pub e_y: f64,
    /// x-factor polynomial.
    pub r: CoeffVector,
    /// y-factor polynomial.
    pub q: CoeffVector,
    /// Kummer description of the y-factor where one exists.
    pub q_kummer: Option<KummerQ>,
    pub x_gauge: GaugeFactor,
    pub y_gauge: GaugeFactor,
    pub residual_x: f64,
    pub residual_y: f64,
}

/// All levels of one 2D solve plus the complex-root tally.
#[derive(Debug, Clone)]
pub struct TwoDSpectrum {
    pub levels: Vec<TwoDLevel>,
    /// Complex critical-polynomial roots encountered (individuals).
    pub complex_root_count: usize,
    pub e0: f64,
}

fn check_axis_residual(report: &ResidualReport, axis: &str) -> Result<f64> {
    if report.max_residual > 1e-8 {
        return Err(Error::degenerate(format!(
            "{axis}-axis residual {:.3e} exceeds contract",
            report.max_residual
        )));
    }
    Ok(report.max_residual)
}

/// Solve the quartic-x × harmonic-y family: for each oscillator excitation
/// k ≤ k_max set c₁ = 2Ck, run the x-recurrence (tabulated variable
/// v = c₁ − E₀ + E), and keep the real roots. Energies assemble as
/// E = E₀ + c₁ − v; every level passes both axis residual checks.
pub fn solve_2d_model1(model: &PotentialModel, j: u32, k_max: u32) -> Result<TwoDSpectrum> {
    let c = match *model {
        PotentialModel::TwoDimI { c, .. } => c,
        _ => return Err(Error::invalid("expected the quartic-harmonic family")),
    };
    let data = axis_data(model, j, 0)?;
    let spec = RecurrenceSpec::new(model, j)?;
    let table = recurrence::generate_polynomials(&spec)?;
    let xs = uniform_samples(-3.0, 3.0, 50);

    let mut levels = Vec::new();
    let mut complex_root_count = 0usize;
    for k in 0..=k_max {
        let c1 = quantize_separation_constant(c, k)?;
        let roots = spectra::real_roots(&table.critical, 1e-9)?;
        complex_root_count += roots.complex_count;
        let q = q_polynomial(c, k)?;
        let e_y = c1 + c;
        let mut block: Vec<TwoDLevel> = Vec::new();
        for &v in &roots.real {
            let lambda = spec.operator_eigenvalue(v);
            let r = algebra::eigenvector_for_root(spec.operator(), lambda)?;
            let e_total = spectra::energy_map(model, j, v, Some(c1))?;
            let e_x = e_total - e_y;
            let rx = residual_pointwise(&data.x_gauge, &r, &data.vx, e_x, &xs);
            let ry = residual_pointwise(&data.y_gauge, &q, &data.vy, e_y, &xs);
            block.push(TwoDLevel {
                k,
                root_index: 0,
                c1,
                e_total,
                e_x,
                e_y,
                r,
                q: q.clone(),
                q_kummer: Some(KummerQ {
                    c,
                    c1,
                    n1: if k % 2 == 1 { 1.0 } else { 0.0 },
                    n2: if k % 2 == 0 { 1.0 } else { 0.0 },
                }),
                x_gauge: data.x_gauge,
                y_gauge: data.y_gauge,
                residual_x: check_axis_residual(&rx, "x")?,
                residual_y: check_axis_residual(&ry, "y")?,
            });
        }
        block.sort_by(|a, b| a.e_total.partial_cmp(&b.e_total).unwrap());
        for (i, level) in block.iter_mut().enumerate() {
            level.root_index = i;
        }
        levels.extend(block);
    }
    levels.sort_by(|a, b| {
        a.e_total
            .partial_cmp(&b.e_total)
            .unwrap()
            .then(a.k.cmp(&b.k))
    });
    Ok(TwoDSpectrum {
        levels,
        complex_root_count,
        e0: data.e0,
    })
}

/// Solve the two-quartic family: the y-recurrence (spectral variable c₁)
/// supplies j_y+1 admissible separation constants, the x-recurrence
/// (variable u = E − E₀ − c₁) supplies the x-roots for each, and
/// E = E₀ + c₁ + u over the cross product of real roots.
pub fn solve_2d_model2(model: &PotentialModel, jx: u32, jy: u32) -> Result<TwoDSpectrum> {
    let (a2, b2) = match *model {
        PotentialModel::TwoDimII { a2, b2, .. } => (a2, b2),
        _ => return Err(Error::invalid("expected the two-quartic family")),
    };
    model.validate()?;
    let data = axis_data(model, jx, jy)?;
    let xs = uniform_samples(-3.0, 3.0, 50);

    let y_spec = RecurrenceSpec::quartic_axis(model, a2, b2, jy)?;
    let y_table = recurrence::generate_polynomials(&y_spec)?;
    let y_roots = spectra::real_roots(&y_table.critical, 1e-9)?;

    let x_spec = RecurrenceSpec::new(model, jx)?;
    let x_table = recurrence::generate_polynomials(&x_spec)?;

    let mut levels = Vec::new();
    let mut complex_root_count = y_roots.complex_count;
    for (ky, &c1) in y_roots.real.iter().enumerate() {
        let q = algebra::eigenvector_for_root(y_spec.operator(), y_spec.operator_eigenvalue(c1))?;
        let e_y = c1 - b2 * b2;
        let x_roots = spectra::real_roots(&x_table.critical, 1e-9)?;
        complex_root_count += x_roots.complex_count;
        let mut block: Vec<TwoDLevel> = Vec::new();
        for &u in &x_roots.real {
            let r =
                algebra::eigenvector_for_root(x_spec.operator(), x_spec.operator_eigenvalue(u))?;
            let e_total = spectra::energy_map(model, jx, u, Some(c1))?;
            let e_x = e_total - e_y;
            let rx = residual_pointwise(&data.x_gauge, &r, &data.vx, e_x, &xs);
            let ry = residual_pointwise(&data.y_gauge, &q, &data.vy, e_y, &xs);
            block.push(TwoDLevel {
                k: ky as u32,
                root_index: 0,
                c1,
                e_total,
                e_x,
                e_y,
                r,
                q: q.clone(),
                q_kummer: None,
                x_gauge: data.x_gauge,
                y_gauge: data.y_gauge,
                residual_x: check_axis_residual(&rx, "x")?,
                residual_y: check_axis_residual(&ry, "y")?,
            });
        }
        block.sort_by(|a, b| a.e_total.partial_cmp(&b.e_total).unwrap());
        for (i, level) in block.iter_mut().enumerate() {
            level.root_index = i;
        }
        levels.extend(block);
    }
    levels.sort_by(|a, b| {
        a.e_total
            .partial_cmp(&b.e_total)
            .unwrap()
            .then(a.k.cmp(&b.k))
    });
    Ok(TwoDSpectrum {
        levels,
        complex_root_count,
        e0: data.e0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_d_i(a: f64, b: f64, c: f64) -> PotentialModel {
        PotentialModel::TwoDimI { a, b, c }
    }

    fn two_d_ii(a1: f64, a2: f64, b1: f64, b2: f64) -> PotentialModel {
        PotentialModel::TwoDimII { a1, a2, b1, b2 }
    }

    #[test]
    fn separation_drifts() {
        let sep = separate(&two_d_i(1.0, 1.0, 1.0), 0, 0).unwrap();
        assert_eq!(sep.x_drift.coeffs(), &[2.0, 0.0, 2.0]);
        assert_eq!(sep.y_drift.coeffs(), &[0.0, 2.0]);

        let sep = separate(&two_d_ii(1.0, 1.0, 0.0, 0.0), 0, 0).unwrap();
        assert_eq!(sep.x_drift.coeffs(), &[0.0, 0.0, 2.0]);
        assert_eq!(sep.y_drift.coeffs(), &[0.0, 0.0, 2.0]);
    }

    #[test]
    fn separation_reproduces_potential_difference() {
        for (jx, jy) in [(0u32, 0u32), (1, 0), (2, 1), (3, 2)] {
            let d = separation_defect(&two_d_i(1.3, -0.4, 0.9), jx, jy).unwrap();
            assert!(d <= 1e-12, "defect {d}");
            let d = separation_defect(&two_d_ii(0.8, 1.1, -0.6, 0.3), jx, jy).unwrap();
            assert!(d <= 1e-12, "defect {d}");
        }
    }

    #[test]
    fn ground_identity_holds() {
        assert!(ground_identity_defect(&two_d_i(1.0, 1.0, 1.0)).unwrap() <= 1e-12);
        assert!(ground_identity_defect(&two_d_ii(1.0, 2.0, 0.7, -1.3)).unwrap() <= 1e-12);
    }

    #[test]
    fn quantization_examples() {
        assert_eq!(quantize_separation_constant(1.0, 0).unwrap(), 0.0);
        assert_eq!(q_polynomial(1.0, 0).unwrap().coeffs(), &[1.0]);

        assert_eq!(quantize_separation_constant(1.0, 1).unwrap(), 2.0);
        assert_eq!(q_polynomial(1.0, 1).unwrap().coeffs(), &[0.0, 1.0]);

        assert_eq!(quantize_separation_constant(1.0, 2).unwrap(), 4.0);
        assert_eq!(q_polynomial(1.0, 2).unwrap().coeffs(), &[-0.5, 0.0, 1.0]);

        assert!(quantize_separation_constant(0.0, 1).is_err());
    }

    #[test]
    fn q_polynomials_solve_their_equation() {
        // −Q'' + 2cyQ' − 2ckQ must vanish identically
        for k in 0..=5u32 {
            let c = 1.7;
            let q = q_polynomial(c, k).unwrap();
            let qp = q.derivative();
            let qpp = qp.derivative();
            let drift = CoeffVector::new(vec![0.0, 2.0 * c]);
            let lhs = qpp
                .scaled(-1.0)
                .add(&drift.mul(&qp))
                .sub(&q.scaled(2.0 * c * f64::from(k)));
            assert!(lhs.max_abs() <= 1e-12 * q.max_abs().max(1.0), "k = {k}");
        }
    }

    #[test]
    fn kummer_values() {
        assert_eq!(kummer_1f1(0.3, 0.9, 0.0).unwrap().value, 1.0);
        for z in [-1.5, -0.3, 0.4, 2.0] {
            let k = kummer_1f1(1.0, 1.0, z).unwrap();
            assert!((k.value - z.exp()).abs() <= 1e-14 * z.exp().abs().max(1.0));
        }
        let k = kummer_1f1(-1.0, 0.5, 0.7).unwrap();
        assert!((k.value - (1.0 - 2.0 * 0.7)).abs() < 1e-15);
        assert_eq!(k.terms, 2);
    }

    #[test]
    fn kummer_terminating_series_length() {
        for n in 0..6 {
            let k = kummer_1f1(-f64::from(n), 0.8, 1.3).unwrap();
            assert!(k.converged);
            assert_eq!(k.terms, n as usize + 1);
        }
    }

    #[test]
    fn kummer_pole_detection() {
        assert!(kummer_1f1(0.5, -1.0, 0.3).is_err());
        // terminating numerator protects against the pole
        assert!(kummer_1f1(-1.0, -2.0, 0.3).is_ok());
    }

    #[test]
    fn q_polynomial_matches_terminating_kummer_branch() {
        let c = 1.4;
        for k in 0..=4u32 {
            let c1 = quantize_separation_constant(c, k).unwrap();
            let q = q_polynomial(c, k).unwrap();
            let kq = KummerQ {
                c,
                c1,
                n1: if k % 2 == 1 { 1.0 } else { 0.0 },
                n2: if k % 2 == 0 { 1.0 } else { 0.0 },
            };
            // the two solutions differ only by normalization
            let y0 = 0.9f64;
            let scale = q.eval(y0) / kq.eval(y0).unwrap();
            for y in [-2.0, -0.7, 0.3, 1.6] {
                let lhs = q.eval(y);
                let rhs = scale * kq.eval(y).unwrap();
                assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0), "k={k} y={y}");
            }
        }
    }

    #[test]
    fn model1_j1_level_pair() {
        let spectrum = solve_2d_model1(&two_d_i(1.0, -1.0, 1.0), 1, 0).unwrap();
        assert_eq!(spectrum.levels.len(), 2);
        assert_eq!(spectrum.complex_root_count, 0);
        let e0 = spectrum.e0;
        assert!((spectrum.levels[0].e_total - (e0 - 2.0)).abs() <= 1e-10);
        assert!((spectrum.levels[1].e_total - (e0 + 2.0)).abs() <= 1e-10);
    }

    #[test]
    fn model1_j1_complex_pair() {
        let spectrum = solve_2d_model1(&two_d_i(1.0, 1.0, 1.0), 1, 0).unwrap();
        assert!(spectrum.levels.is_empty());
        assert_eq!(spectrum.complex_root_count, 2);
    }

    #[test]
    fn model1_oscillator_ladder_energies() {
        let c = 1.0;
        let spectrum = solve_2d_model1(&two_d_i(1.0, -1.0, c), 0, 3).unwrap();
        // j = 0 has one x-root per k; E increases by 2C per rung
        assert_eq!(spectrum.levels.len(), 4);
        for (k, level) in spectrum.levels.iter().enumerate() {
            assert_eq!(level.k, k as u32);
            assert!((level.c1 - 2.0 * c * k as f64).abs() < 1e-12);
            assert!((level.e_total - (spectrum.e0 + level.c1)).abs() < 1e-9);
            assert!(level.residual_x <= 1e-8 && level.residual_y <= 1e-8);
        }
    }

    #[test]
    fn model2_ground_level() {
        let model = two_d_ii(1.0, 1.0, 1.0, 1.0);
        let spectrum = solve_2d_model2(&model, 0, 0).unwrap();
        assert_eq!(spectrum.levels.len(), 1);
        let level = &spectrum.levels[0];
        assert!((level.e_total - (-2.0)).abs() <= 1e-10);
        assert!(level.residual_x <= 1e-8 && level.residual_y <= 1e-8);
    }

    #[test]
    fn model2_two_x_levels() {
        let model = two_d_ii(1.0, 1.0, -1.0, 0.5);
        let spectrum = solve_2d_model2(&model, 1, 0).unwrap();
        assert_eq!(spectrum.levels.len(), 2);
        // u² + 4A₁B₁ = u² − 4: u = ∓2 around E₀ + c₁
        let mid = 0.5 * (spectrum.levels[0].e_total + spectrum.levels[1].e_total);
        assert!((spectrum.levels[1].e_total - mid - 2.0).abs() <= 1e-10);
    }

    #[test]
    fn model2_guard() {
        let model = two_d_ii(1.0, 0.0, 1.0, 1.0);
        assert!(solve_2d_model2(&model, 0, 0).is_err());
    }

    #[test]
    fn separate_rejects_1d() {
        assert!(separate(&PotentialModel::OneDimI { b: 1.0, c: 1.0 }, 0, 0).is_err());
    }
}
