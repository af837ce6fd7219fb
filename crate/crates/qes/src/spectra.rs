//! Potential families, root extraction and the ε → E energy maps.
//!
//! Each family is QES only when one potential parameter is tied to the
//! representation index j, so that parameter is an output of the
//! construction, not an input: the cubic-quartic well takes its slope A from
//! (B, C, j), the Burrows-type well takes A = −√2·C(j+1), and the 2D
//! families carry state parameters α = j+1 (and β = j_y+1).

use nalgebra::DMatrix;

use crate::algebra;
use crate::error::{Error, Result};
use crate::recurrence::{self, EpsPolynomial, RecurrenceSpec};

/// Family selector with the free real parameters of each potential.
///
/// Parameters forced by the QES construction (A of the 1D families, the
/// state parameters of the 2D families) are not stored here; they are
/// computed per j by [`qes_constraint`] and recorded on each result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialModel {
    /// V(x) = (A/2)x² − (B/3)x³ + (C/4)x⁴ with A forced by (B, C, j).
    OneDimI { b: f64, c: f64 },
    /// V(x) = V₀ − Ax + (x²/2)(B + Cx)² with A forced by (C, j).
    OneDimII { v0: f64, b: f64, c: f64 },
    /// Separable quartic-x × harmonic-y well with state parameter α = j+1.
    TwoDimI { a: f64, b: f64, c: f64 },
    /// Separable quartic-x × quartic-y well with α = j_x+1, β = j_y+1.
    TwoDimII { a1: f64, a2: f64, b1: f64, b2: f64 },
}

impl PotentialModel {
    pub fn family_name(&self) -> &'static str {
        match self {
            PotentialModel::OneDimI { .. } => "oned1",
            PotentialModel::OneDimII { .. } => "oned2",
            PotentialModel::TwoDimI { .. } => "twod1",
            PotentialModel::TwoDimII { .. } => "twod2",
        }
    }

    pub fn is_one_dimensional(&self) -> bool {
        matches!(
            self,
            PotentialModel::OneDimI { .. } | PotentialModel::OneDimII { .. }
        )
    }

    /// Check the domain guards of the family parameters.
    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("parameter {name} is not finite")))
            }
        };
        match *self {
            PotentialModel::OneDimI { b, c } => {
                finite("B", b)?;
                finite("C", c)?;
                if b == 0.0 {
                    return Err(Error::domain("B must be nonzero"));
                }
                if c <= 0.0 {
                    return Err(Error::domain("C must be positive"));
                }
            }
            PotentialModel::OneDimII { v0, b, c } => {
                finite("V0", v0)?;
                finite("B", b)?;
                finite("C", c)?;
                if c == 0.0 {
                    return Err(Error::domain("C must be nonzero"));
                }
            }
            PotentialModel::TwoDimI { a, b, c } => {
                finite("A", a)?;
                finite("B", b)?;
                finite("C", c)?;
                if a == 0.0 {
                    return Err(Error::domain("A must be nonzero"));
                }
                if c <= 0.0 {
                    return Err(Error::domain("C must be positive"));
                }
            }
            PotentialModel::TwoDimII { a1, a2, b1, b2 } => {
                finite("A1", a1)?;
                finite("A2", a2)?;
                finite("B1", b1)?;
                finite("B2", b2)?;
                if a1 == 0.0 {
                    return Err(Error::domain("A1 must be nonzero"));
                }
                if a2 == 0.0 {
                    return Err(Error::domain("A2 must be nonzero"));
                }
            }
        }
        Ok(())
    }

    /// Dense coefficients of the 1D potential with the j-forced parameter
    /// substituted.
    pub fn potential_coeffs(&self, j: u32) -> Result<algebra::CoeffVector> {
        match *self {
            PotentialModel::OneDimI { b, c } => {
                let a = forced_slope_one_d_i(b, c, j)?;
                Ok(algebra::CoeffVector::new(vec![
                    0.0,
                    0.0,
                    a / 2.0,
                    -b / 3.0,
                    c / 4.0,
                ]))
            }
            PotentialModel::OneDimII { v0, b, c } => {
                let a = forced_slope_one_d_ii(c, j)?;
                // V₀ − Ax + (B²/2)x² + BCx³ + (C²/2)x⁴
                Ok(algebra::CoeffVector::new(vec![
                    v0,
                    -a,
                    b * b / 2.0,
                    b * c,
                    c * c / 2.0,
                ]))
            }
            _ => Err(Error::invalid(
                "potential_coeffs applies to the 1D families; 2D axis potentials live in separable2d",
            )),
        }
    }
}

fn forced_slope_one_d_i(b: f64, c: f64, j: u32) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::domain("B must be nonzero"));
    }
    if c <= 0.0 {
        return Err(Error::domain("C must be positive"));
    }
    let jp1 = f64::from(j + 1);
    Ok((2.0 * b.powi(3) - 27.0 * jp1 * c.powf(2.5)) / (9.0 * b * c))
}

fn forced_slope_one_d_ii(c: f64, j: u32) -> Result<f64> {
    if c == 0.0 {
        return Err(Error::domain("C must be nonzero"));
    }
    Ok(-std::f64::consts::SQRT_2 * c * f64::from(j + 1))
}

/// The parameter value the QES construction forces at index j.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForcedParameter {
    /// Linear slope A of a 1D family.
    Slope(f64),
    /// State parameter α (or β for the y-axis) of a 2D family.
    StateParameter(u32),
}

impl ForcedParameter {
    pub fn value(&self) -> f64 {
        match *self {
            ForcedParameter::Slope(a) => a,
            ForcedParameter::StateParameter(a) => f64::from(a),
        }
    }
}

/// Parameter value forced by the QES construction at this j. For the
/// two-axis family the constraint applies to whichever axis index is passed.
pub fn qes_constraint(model: &PotentialModel, j: u32) -> Result<ForcedParameter> {
    model.validate()?;
    match *model {
        PotentialModel::OneDimI { b, c } => Ok(ForcedParameter::Slope(forced_slope_one_d_i(b, c, j)?)),
        PotentialModel::OneDimII { c, .. } => {
            Ok(ForcedParameter::Slope(forced_slope_one_d_ii(c, j)?))
        }
        PotentialModel::TwoDimI { .. } | PotentialModel::TwoDimII { .. } => {
            Ok(ForcedParameter::StateParameter(j + 1))
        }
    }
}

/// Map a spectral root to a physical energy.
///
/// The 2D maps need the separation constant: for the quartic-x × harmonic-y
/// family the tabulated spectral variable is v = c₁ − E₀ + E with the sign
/// convention of the closed-form tables, and E = E₀ + c₁ − v; for the
/// two-quartic family the x-variable is u = E − E₀ − c₁ and E = E₀ + c₁ + u.
pub fn energy_map(model: &PotentialModel, j: u32, eps: f64, c1: Option<f64>) -> Result<f64> {
    model.validate()?;
    match *model {
        PotentialModel::OneDimI { b, c } => {
            let jp1 = f64::from(j + 1);
            let sc = c.sqrt();
            Ok(eps - jp1 * b / (3.0 * sc) - (3.0 * jp1 * c / (2.0 * b)).powi(2))
        }
        PotentialModel::OneDimII { v0, b, .. } => {
            Ok(v0 + eps - f64::from(j + 1) * b / std::f64::consts::SQRT_2)
        }
        PotentialModel::TwoDimI { b, c, .. } => {
            let c1 = c1.ok_or_else(|| Error::invalid("2D energy map requires c1"))?;
            let e0 = c - b * b;
            Ok(e0 + c1 - eps)
        }
        PotentialModel::TwoDimII { b1, b2, .. } => {
            let c1 = c1.ok_or_else(|| Error::invalid("2D energy map requires c1"))?;
            let e0 = -(b1 * b1 + b2 * b2);
            Ok(e0 + c1 + eps)
        }
    }
}

/// Real roots of a spectral polynomial plus the count of complex roots.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Distinct real roots, ascending.
    pub real: Vec<f64>,
    /// Multiplicity of each entry of `real` (clustered roots merge).
    pub multiplicity: Vec<usize>,
    /// Number of roots classified as complex (individuals, not pairs).
    pub complex_count: usize,
}

impl RootSet {
    pub fn total(&self) -> usize {
        self.multiplicity.iter().sum::<usize>() + self.complex_count
    }
}

/// Real roots via balanced companion-matrix eigenvalues with one Newton
/// polish pass. Roots with |Im| ≤ tol·(1 + |Re|) are classified real,
/// deduplicated within the same scaled tolerance and sorted ascending.
pub fn real_roots(p: &EpsPolynomial, tol: f64) -> Result<RootSet> {
    let deg = p
        .degree()
        .ok_or_else(|| Error::invalid("zero polynomial has no roots"))?;
    if deg == 0 {
        return Err(Error::invalid("degree-0 polynomial has no roots"));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }

    let lead = p.coeffs()[deg];
    let monic: Vec<f64> = p.coeffs()[..deg].iter().map(|c| c / lead).collect();

    // companion matrix, subdiagonal ones, last column −monic
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for (i, c) in monic.iter().enumerate() {
        m[(i, deg - 1)] = -c;
    }
    balance_in_place(&mut m);
    let eigen = m.complex_eigenvalues();

    let pd = p.derivative();
    let mut reals: Vec<f64> = Vec::new();
    let mut complex_count = 0usize;
    for ev in eigen.iter() {
        if ev.im.abs() <= tol * (1.0 + ev.re.abs()) {
            reals.push(newton_polish(p, &pd, ev.re));
        } else {
            complex_count += 1;
        }
    }
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut real: Vec<f64> = Vec::new();
    let mut multiplicity = Vec::new();
    for r in reals {
        match real.last() {
            Some(&last) if (r - last).abs() <= tol * (1.0 + r.abs()) => {
                *multiplicity.last_mut().unwrap() += 1;
            }
            _ => {
                real.push(r);
                multiplicity.push(1);
            }
        }
    }
    Ok(RootSet {
        real,
        multiplicity,
        complex_count,
    })
}

fn newton_polish(p: &EpsPolynomial, pd: &EpsPolynomial, mut x: f64) -> f64 {
    for _ in 0..2 {
        let f = p.eval(x);
        let d = pd.eval(x);
        if d == 0.0 {
            break;
        }
        let step = f / d;
        let next = x - step;
        if !next.is_finite() || p.eval(next).abs() > f.abs() {
            break;
        }
        x = next;
    }
    x
}

/// Parlett–Reinsch balancing: scale rows/columns by powers of two so the
/// 1-norms match. Powers of two keep the transformation exact.
fn balance_in_place(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut row_norm = 0.0;
            let mut col_norm = 0.0;
            for k in 0..n {
                if k != i {
                    row_norm += m[(i, k)].abs();
                    col_norm += m[(k, i)].abs();
                }
            }
            if row_norm == 0.0 || col_norm == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let s = row_norm + col_norm;
            let mut c = col_norm;
            while c < row_norm / radix {
                f *= radix;
                c *= radix * radix;
            }
            while c > row_norm * radix {
                f /= radix;
                c /= radix * radix;
            }
            if (row_norm + c / f) / f < 0.95 * s && f != 1.0 {
                converged = false;
                for k in 0..n {
                    m[(i, k)] /= f;
                }
                for k in 0..n {
                    m[(k, i)] *= f;
                }
            }
        }
    }
}

/// One QES spectrum block: the roots at a fixed j together with the
/// constraint that makes the family QES there.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub j: u32,
    /// Distinct real roots of the critical polynomial, ascending.
    pub eps_roots: Vec<f64>,
    pub multiplicity: Vec<usize>,
    pub complex_root_count: usize,
    /// Physical energy of each entry of `eps_roots`.
    pub energies: Vec<f64>,
    pub constraint: ForcedParameter,
    /// Worst eigen-identity residual over the returned roots.
    pub self_test_max: f64,
}

/// Compose recurrence generation, root extraction, the energy map and the
/// QES constraint for a 1D family.
pub fn full_spectrum(model: &PotentialModel, j: u32) -> Result<SpectrumResult> {
    full_spectrum_with_tol(model, j, 1e-9)
}

/// [`full_spectrum`] with an explicit real/complex classification tolerance.
pub fn full_spectrum_with_tol(
    model: &PotentialModel,
    j: u32,
    root_tol: f64,
) -> Result<SpectrumResult> {
    if !model.is_one_dimensional() {
        return Err(Error::invalid(
            "full_spectrum handles the 1D families; use the separable 2D solvers",
        ));
    }
    let spec = RecurrenceSpec::new(model, j)?;
    let table = recurrence::generate_polynomials(&spec)?;
    let roots = real_roots(&table.critical, root_tol)?;

    let mut energies = Vec::with_capacity(roots.real.len());
    let mut self_test_max = 0.0f64;
    for &eps in &roots.real {
        let residual = recurrence::recurrence_self_test(&spec, eps)?;
        if residual > 1e-8 {
            return Err(Error::degenerate(format!(
                "eigen-identity residual {residual:.3e} for root {eps}"
            )));
        }
        self_test_max = self_test_max.max(residual);
        energies.push(energy_map(model, j, eps, None)?);
    }
    Ok(SpectrumResult {
        j,
        eps_roots: roots.real,
        multiplicity: roots.multiplicity,
        complex_root_count: roots.complex_count,
        energies,
        constraint: qes_constraint(model, j)?,
        self_test_max,
    })
}

/// A stationary point of the potential with its second-derivative
/// classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoint {
    pub x: f64,
    pub kind: StationaryKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StationaryKind {
    Minimum,
    Maximum,
    Inflection,
}

/// Stationary points of the j-forced 1D potential, reported as metadata.
pub fn stationary_points(model: &PotentialModel, j: u32) -> Result<Vec<StationaryPoint>> {
    let v = model.potential_coeffs(j)?;
    let vp = v.derivative();
    let vpp = vp.derivative();
    let poly = EpsPolynomial::new(vp.coeffs().to_vec());
    let roots = real_roots(&poly, 1e-9)?;
    let scale = vpp.max_abs().max(1.0);
    Ok(roots
        .real
        .iter()
        .map(|&x| {
            let curvature = vpp.eval(x);
            let kind = if curvature > 1e-9 * scale {
                StationaryKind::Minimum
            } else if curvature < -1e-9 * scale {
                StationaryKind::Maximum
            } else {
                StationaryKind::Inflection
            };
            StationaryPoint { x, kind }
        })
        .collect())
}

/// Whether the cubic-quartic well is symmetric: 2B² = 9AC with the j-forced
/// slope A. Exposed as a computed diagnostic, not asserted.
pub fn symmetry_condition(model: &PotentialModel, j: u32) -> Result<bool> {
    match *model {
        PotentialModel::OneDimI { b, c } => {
            let a = forced_slope_one_d_i(b, c, j)?;
            let lhs = 2.0 * b * b;
            let rhs = 9.0 * a * c;
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            Ok((lhs - rhs).abs() <= 1e-12 * scale)
        }
        _ => Err(Error::invalid("symmetry condition applies to the cubic-quartic family")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[f64]) -> EpsPolynomial {
        EpsPolynomial::new(coeffs.to_vec())
    }

    #[test]
    fn real_roots_linear_and_quadratic() {
        let r = real_roots(&poly(&[0.0, 1.0]), 1e-10).unwrap();
        assert_eq!(r.real, vec![0.0]);
        assert_eq!(r.complex_count, 0);

        // 9ε² − 55
        let r = real_roots(&poly(&[-55.0, 0.0, 9.0]), 1e-10).unwrap();
        let expected = 55f64.sqrt() / 3.0;
        assert_eq!(r.real.len(), 2);
        assert!((r.real[0] + expected).abs() < 1e-12);
        assert!((r.real[1] - expected).abs() < 1e-12);

        // ε² + 1
        let r = real_roots(&poly(&[1.0, 0.0, 1.0]), 1e-10).unwrap();
        assert!(r.real.is_empty());
        assert_eq!(r.complex_count, 2);
    }

    #[test]
    fn real_roots_rejects_degenerate_input() {
        assert!(real_roots(&poly(&[]), 1e-10).is_err());
        assert!(real_roots(&poly(&[3.0]), 1e-10).is_err());
    }

    #[test]
    fn real_roots_scale_invariant() {
        let base = poly(&[-55.0, 3.0, 9.0, 1.0]);
        let r1 = real_roots(&base, 1e-9).unwrap();
        let r2 = real_roots(&poly(&[-55e7, 3e7, 9e7, 1e7]), 1e-9).unwrap();
        assert_eq!(r1.real.len(), r2.real.len());
        for (a, b) in r1.real.iter().zip(&r2.real) {
            assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn constraint_values() {
        let m = PotentialModel::OneDimI { b: 1.0, c: 1.0 };
        match qes_constraint(&m, 0).unwrap() {
            ForcedParameter::Slope(a) => assert!((a + 25.0 / 9.0).abs() < 1e-12),
            _ => panic!("expected slope"),
        }
        let m = PotentialModel::OneDimII {
            v0: 0.0,
            b: 2.0,
            c: 1.0,
        };
        match qes_constraint(&m, 0).unwrap() {
            ForcedParameter::Slope(a) => {
                assert!((a + std::f64::consts::SQRT_2).abs() < 1e-12)
            }
            _ => panic!("expected slope"),
        }
        let m = PotentialModel::TwoDimI {
            a: 1.0,
            b: 1.0,
            c: 1.0,
        };
        assert_eq!(
            qes_constraint(&m, 2).unwrap(),
            ForcedParameter::StateParameter(3)
        );
    }

    #[test]
    fn energy_map_values() {
        let m = PotentialModel::OneDimI { b: 1.0, c: 1.0 };
        let e = energy_map(&m, 0, 0.0, None).unwrap();
        assert!((e - (-1.0 / 3.0 - 2.25)).abs() < 1e-12);

        let m = PotentialModel::OneDimII {
            v0: 0.0,
            b: 2.0,
            c: 1.0,
        };
        let s2 = std::f64::consts::SQRT_2;
        assert!((energy_map(&m, 0, 0.0, None).unwrap() + s2).abs() < 1e-12);
        assert!((energy_map(&m, 1, s2, None).unwrap() + s2).abs() < 1e-12);
    }

    #[test]
    fn energy_map_is_increasing_in_eps() {
        let m = PotentialModel::OneDimI { b: 1.7, c: 0.9 };
        let e1 = energy_map(&m, 3, -1.0, None).unwrap();
        let e2 = energy_map(&m, 3, -0.5, None).unwrap();
        let e3 = energy_map(&m, 3, 2.0, None).unwrap();
        assert!(e1 < e2 && e2 < e3);
    }

    #[test]
    fn full_spectrum_examples() {
        let m = PotentialModel::OneDimI { b: 1.0, c: 1.0 };
        let s = full_spectrum(&m, 0).unwrap();
        assert_eq!(s.eps_roots.len(), 1);
        assert!((s.energies[0] - (-31.0 / 12.0)).abs() < 1e-10);
        match s.constraint {
            ForcedParameter::Slope(a) => assert!((a + 25.0 / 9.0).abs() < 1e-12),
            _ => panic!(),
        }

        let s = full_spectrum(&m, 1).unwrap();
        let eps = 55f64.sqrt() / 3.0;
        assert!((s.eps_roots[1] - eps).abs() < 1e-12);
        for (r, e) in s.eps_roots.iter().zip(&s.energies) {
            assert!((e - (r - 2.0 / 3.0 - 9.0)).abs() < 1e-10);
        }

        let m = PotentialModel::OneDimII {
            v0: 0.0,
            b: 2.0,
            c: 1.0,
        };
        let s = full_spectrum(&m, 1).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        assert_eq!(s.eps_roots.len(), 2);
        assert!((s.eps_roots[0] + s2).abs() < 1e-12);
        assert!((s.eps_roots[1] - s2).abs() < 1e-12);
        // symmetric in ε about 0 at j = 1
        assert!((s.eps_roots[0] + s.eps_roots[1]).abs() < 1e-12);
    }

    #[test]
    fn root_count_accounting() {
        for j in 0..=6u32 {
            let m = PotentialModel::OneDimI { b: 1.4, c: 0.7 };
            let s = full_spectrum(&m, j).unwrap();
            let total: usize = s.multiplicity.iter().sum::<usize>() + s.complex_root_count;
            assert_eq!(total, j as usize + 1, "j = {j}");
        }
    }

    #[test]
    fn stationary_point_classification() {
        let m = PotentialModel::OneDimI { b: 1.0, c: 1.0 };
        let pts = stationary_points(&m, 0).unwrap();
        // x = 0 is always stationary for the cubic-quartic family; with the
        // j-forced slope negative it is the hump between the wells.
        let origin = pts.iter().find(|p| p.x.abs() < 1e-9).expect("origin");
        assert_eq!(origin.kind, StationaryKind::Maximum);
        assert_eq!(
            pts.iter().filter(|p| p.kind == StationaryKind::Minimum).count(),
            2
        );
    }

    #[test]
    fn symmetry_condition_is_generically_false() {
        let m = PotentialModel::OneDimI { b: 1.0, c: 1.0 };
        assert!(!symmetry_condition(&m, 0).unwrap());
    }
}
