//! Spectral polynomials Pₘ and the critical (truncation) polynomial of each
//! model family.
//!
//! Every family fits one recurrence shape indexed by m:
//!
//! ```text
//! w₋₂(m)·P₋₂ + w₋₁(m)·P₋₁ + (d(m) + σ·t)·Pₘ + w₊₁(m)·P₊₁ = 0,   P₀ = 1,
//! ```
//!
//! where t is the spectral variable and the weights are the column entries
//! of the operator matrix: w₋₂(m) = c₋₋·m(m−1), w₋₁(m) = c₋·m,
//! d(m) = c₀(m − j/2) + c_id, w₊₁(m) = c₊(m − j). The w₊₁ weight vanishes
//! exactly at m = j, so the left-hand side there is a degree-(j+1)
//! polynomial in t — the critical polynomial — whose roots form the QES
//! spectrum. The raw recurrence output is stored; agreement with the
//! denominator-cleared closed forms is established by proportionality only.

use crate::algebra::{self, AlgebraicOperator};
use crate::error::{Error, Result};
use crate::spectra::PotentialModel;

/// Dense real polynomial in the spectral variable, constant term first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EpsPolynomial {
    coeffs: Vec<f64>,
}

impl EpsPolynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        EpsPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        EpsPolynomial { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |a, c| a.max(c.abs()))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> EpsPolynomial {
        if self.coeffs.len() <= 1 {
            return EpsPolynomial::zero();
        }
        EpsPolynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| (i as f64 + 1.0) * c)
                .collect(),
        )
    }

    pub fn scaled(&self, s: f64) -> EpsPolynomial {
        EpsPolynomial::new(self.coeffs.iter().map(|c| s * c).collect())
    }

    fn add_scaled(&self, other: &EpsPolynomial, s: f64) -> EpsPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        EpsPolynomial::new((0..n).map(|i| self.coeff(i) + s * other.coeff(i)).collect())
    }

    /// t·p, a coefficient shift.
    fn shifted(&self) -> EpsPolynomial {
        if self.is_zero() {
            return EpsPolynomial::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(0.0);
        out.extend_from_slice(&self.coeffs);
        EpsPolynomial::new(out)
    }
}

impl From<Vec<f64>> for EpsPolynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        EpsPolynomial::new(coeffs)
    }
}

/// Recurrence definition for one family at one representation index.
///
/// The weights are exposed as methods rather than stored tables so the
/// truncation structure (w₊₁(j) = 0) holds exactly by construction.
#[derive(Debug, Clone)]
pub struct RecurrenceSpec {
    pub model: PotentialModel,
    pub j: u32,
    op: AlgebraicOperator,
    /// σ: sign with which the spectral variable enters the Pₘ weight.
    /// −1 for the 1D families and the two-quartic axes (roots are operator
    /// eigenvalues); +1 for the quartic-harmonic x-recurrence, whose
    /// tabulated variable is the negated eigenvalue.
    spectral_sign: f64,
}

impl RecurrenceSpec {
    pub fn new(model: &PotentialModel, j: u32) -> Result<Self> {
        model.validate()?;
        let op = algebra::build_operator(model, j)?;
        let spectral_sign = match model {
            PotentialModel::TwoDimI { .. } => 1.0,
            _ => -1.0,
        };
        Ok(RecurrenceSpec {
            model: *model,
            j,
            op,
            spectral_sign,
        })
    }

    /// Recurrence for one axis of the two-quartic family (spectral variable
    /// c₁ on the y axis, E − E₀ − c₁ on the x axis).
    pub fn quartic_axis(model: &PotentialModel, a: f64, b: f64, j: u32) -> Result<Self> {
        let op = AlgebraicOperator::quartic_axis(a, b, j)?;
        Ok(RecurrenceSpec {
            model: *model,
            j,
            op,
            spectral_sign: -1.0,
        })
    }

    pub fn operator(&self) -> &AlgebraicOperator {
        &self.op
    }

    /// Weight of P₋₂ at index m.
    pub fn weight_m2(&self, m: u32) -> f64 {
        let mf = f64::from(m);
        self.op.c_mm * mf * (mf - 1.0)
    }

    /// Weight of P₋₁ at index m.
    pub fn weight_m1(&self, m: u32) -> f64 {
        self.op.c_m * f64::from(m)
    }

    /// Spectral-variable-free part of the Pₘ weight.
    pub fn weight_diag(&self, m: u32) -> f64 {
        self.op.c_0 * (f64::from(m) - f64::from(self.j) / 2.0) + self.op.c_id
    }

    /// Weight of P₊₁ at index m; vanishes exactly at m = j.
    pub fn weight_p1(&self, m: u32) -> f64 {
        self.op.c_p * (f64::from(m) - f64::from(self.j))
    }

    /// Operator eigenvalue corresponding to a critical-polynomial root.
    pub fn operator_eigenvalue(&self, root: f64) -> f64 {
        -self.spectral_sign * root
    }
}

/// P₀..P_j plus the critical polynomial.
#[derive(Debug, Clone)]
pub struct PolynomialTable {
    pub polys: Vec<EpsPolynomial>,
    pub critical: EpsPolynomial,
}

/// Run the recurrence. Pₘ has degree m for every m; the critical polynomial
/// is the recurrence left-hand side at m = j and has degree j+1 exactly.
pub fn generate_polynomials(spec: &RecurrenceSpec) -> Result<PolynomialTable> {
    let j = spec.j as usize;
    let mut polys: Vec<EpsPolynomial> = Vec::with_capacity(j + 1);
    polys.push(EpsPolynomial::new(vec![1.0]));

    let lhs_at = |polys: &[EpsPolynomial], m: usize| -> EpsPolynomial {
        let mu = m as u32;
        let mut lhs = EpsPolynomial::zero();
        if m >= 2 {
            lhs = lhs.add_scaled(&polys[m - 2], spec.weight_m2(mu));
        }
        if m >= 1 {
            lhs = lhs.add_scaled(&polys[m - 1], spec.weight_m1(mu));
        }
        lhs = lhs.add_scaled(&polys[m], spec.weight_diag(mu));
        lhs.add_scaled(&polys[m].shifted(), spec.spectral_sign)
    };

    for m in 0..j {
        let w = spec.weight_p1(m as u32);
        if w == 0.0 || !w.is_finite() {
            return Err(Error::degenerate(format!(
                "P_(m+1) weight vanished at m = {m} before truncation"
            )));
        }
        let next = lhs_at(&polys, m).scaled(-1.0 / w);
        if next.degree() != Some(m + 1) {
            return Err(Error::degenerate(format!(
                "polynomial P_{} lost its leading coefficient",
                m + 1
            )));
        }
        polys.push(next);
    }

    let critical = lhs_at(&polys, j);
    if critical.degree() != Some(j + 1) {
        return Err(Error::degenerate(
            "critical polynomial does not reach degree j+1",
        ));
    }
    Ok(PolynomialTable { polys, critical })
}

/// Result of a single-scale proportionality comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proportionality {
    pub proportional: bool,
    /// λ with p ≈ λ·q, taken at the largest coefficient of q.
    pub scale: f64,
    /// max |p − λq| / max |p| over coefficients.
    pub max_defect: f64,
}

/// Test whether p = λq for one nonzero λ within relative tolerance.
pub fn proportionality_check(
    p: &EpsPolynomial,
    q: &EpsPolynomial,
    tol: f64,
) -> Result<Proportionality> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::invalid("proportionality test needs nonzero polynomials"));
    }
    let k = q
        .coeffs()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let scale = p.coeff(k) / q.coeff(k);
    let p_norm = p.max_abs();
    let n = p.coeffs().len().max(q.coeffs().len());
    let mut max_defect = 0.0f64;
    for i in 0..n {
        max_defect = max_defect.max((p.coeff(i) - scale * q.coeff(i)).abs());
    }
    max_defect /= p_norm;
    Ok(Proportionality {
        proportional: scale != 0.0 && scale.is_finite() && max_defect <= tol,
        scale,
        max_defect,
    })
}

/// Eigen-identity residual for one root of the critical polynomial.
///
/// Two routes are checked and the worse one returned: the recurrence values
/// Pₘ(ε) must satisfy the adjoint identity Mᵀp = λp row by row, and the
/// eigenfunction coefficients recovered from the operator matrix must
/// satisfy T·R = λR under the differential action of the generators.
pub fn recurrence_self_test(spec: &RecurrenceSpec, eps_root: f64) -> Result<f64> {
    let table = generate_polynomials(spec)?;

    // |critical(ε)| against the largest term magnitude at ε
    let term_scale = table
        .critical
        .coeffs()
        .iter()
        .enumerate()
        .fold(0.0f64, |acc, (i, c)| acc.max((c * eps_root.powi(i as i32)).abs()))
        .max(table.critical.max_abs());
    let crit_val = table.critical.eval(eps_root).abs();
    if crit_val > 1e-6 * term_scale {
        return Err(Error::invalid(format!(
            "{eps_root} is not a root of the critical polynomial (value {crit_val:.3e})"
        )));
    }

    let lambda = spec.operator_eigenvalue(eps_root);
    let pvals: Vec<f64> = table.polys.iter().map(|p| p.eval(eps_root)).collect();
    let adjoint = algebra::adjoint_residual(spec.operator(), lambda, &pvals)?;

    let r = algebra::eigenvector_for_root(spec.operator(), lambda)?;
    let image = algebra::apply_operator(spec.operator(), &r);
    let direct = image.sub(&r.scaled(lambda)).max_abs() / r.max_abs();

    Ok(adjoint.max(direct))
}

/// Closed-form critical polynomials for j ≤ 3, used as cross-checks of the
/// recurrence output. Rows are compared by proportionality; a row that fails
/// is reported against the recurrence (the recurrence is normative) through
/// the discrepancy log. The two-quartic family has no tabulated rows.
pub fn tabulated_critical(model: &PotentialModel, j: u32) -> Option<EpsPolynomial> {
    match (*model, j) {
        (PotentialModel::OneDimI { .. }, 0) => Some(EpsPolynomial::new(vec![0.0, 1.0])),
        (PotentialModel::OneDimI { b, c }, 1) => Some(EpsPolynomial::new(vec![
            -b.powi(3) - 54.0 * c.powf(2.5),
            0.0,
            9.0 * b * c,
        ])),
        (PotentialModel::OneDimI { b, c }, 2) => Some(EpsPolynomial::new(vec![
            36.0 * b * c * c,
            -4.0 * (b.powi(3) + 81.0 * c.powf(2.5)),
            0.0,
            9.0 * b * c,
        ])),
        (PotentialModel::OneDimI { b, c }, 3) => Some(EpsPolynomial::new(vec![
            b.powi(6) + 216.0 * b.powi(3) * c.powf(2.5) + 11664.0 * c.powi(5),
            216.0 * b * b * c.powi(3),
            -(10.0 * b.powi(4) * c + 1080.0 * b * c.powf(3.5)),
            0.0,
            9.0 * b * b * c * c,
        ])),
        (PotentialModel::OneDimII { .. }, 0) => Some(EpsPolynomial::new(vec![0.0, 1.0])),
        (PotentialModel::OneDimII { b, .. }, 1) => {
            Some(EpsPolynomial::new(vec![-b * b, 0.0, 2.0]))
        }
        (PotentialModel::OneDimII { b, c, .. }, 2) => {
            let s2 = std::f64::consts::SQRT_2;
            Some(EpsPolynomial::new(vec![
                -4.0 * s2 * b * c,
                -2.0 * s2 * b * b + 4.0 * c,
                0.0,
                s2,
            ]))
        }
        (PotentialModel::OneDimII { b, c, .. }, 3) => {
            let s2 = std::f64::consts::SQRT_2;
            Some(EpsPolynomial::new(vec![
                9.0 * b * b * (b * b - 4.0 * s2 * c),
                96.0 * b * c,
                -20.0 * (b * b - 2.0 * s2 * c),
                0.0,
                4.0,
            ]))
        }
        (PotentialModel::TwoDimI { .. }, 0) => Some(EpsPolynomial::new(vec![0.0, 1.0])),
        (PotentialModel::TwoDimI { a, b, .. }, 1) => {
            Some(EpsPolynomial::new(vec![4.0 * a * b, 0.0, 1.0]))
        }
        (PotentialModel::TwoDimI { a, b, .. }, 2) => Some(EpsPolynomial::new(vec![
            -16.0 * a * a,
            16.0 * a * b,
            0.0,
            1.0,
        ])),
        (PotentialModel::TwoDimI { a, b, .. }, 3) => Some(EpsPolynomial::new(vec![
            144.0 * a * a * b * b,
            -96.0 * a * a,
            40.0 * a * b,
            0.0,
            1.0,
        ])),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one_d_i(b: f64, c: f64) -> PotentialModel {
        PotentialModel::OneDimI { b, c }
    }

    fn one_d_ii(b: f64, c: f64) -> PotentialModel {
        PotentialModel::OneDimII { v0: 0.0, b, c }
    }

    #[test]
    fn initial_condition_and_degrees() {
        for j in 0..=6u32 {
            let spec = RecurrenceSpec::new(&one_d_i(1.3, 0.8), j).unwrap();
            let table = generate_polynomials(&spec).unwrap();
            assert_eq!(table.polys[0].coeffs(), &[1.0]);
            for (m, p) in table.polys.iter().enumerate() {
                assert_eq!(p.degree(), Some(m), "deg P_{m}");
            }
            assert_eq!(table.critical.degree(), Some(j as usize + 1));
        }
    }

    #[test]
    fn critical_examples() {
        // j = 0: critical ∝ ε for any valid parameters
        let spec = RecurrenceSpec::new(&one_d_i(2.1, 0.6), 0).unwrap();
        let table = generate_polynomials(&spec).unwrap();
        let r = proportionality_check(
            &table.critical,
            &EpsPolynomial::new(vec![0.0, 1.0]),
            1e-12,
        )
        .unwrap();
        assert!(r.proportional);

        // j = 1, B = C = 1: critical ∝ 9ε² − 55
        let spec = RecurrenceSpec::new(&one_d_i(1.0, 1.0), 1).unwrap();
        let table = generate_polynomials(&spec).unwrap();
        let r = proportionality_check(
            &table.critical,
            &EpsPolynomial::new(vec![-55.0, 0.0, 9.0]),
            1e-10,
        )
        .unwrap();
        assert!(r.proportional, "defect {}", r.max_defect);
        // raw critical is (9BCε² − B³ − 54C^{5/2})/(9BC^{3/2}) here
        assert!((r.scale - 1.0 / 9.0).abs() < 1e-12);

        // Burrows-type j = 1, B = 2: critical ∝ 2ε² − 4
        let spec = RecurrenceSpec::new(&one_d_ii(2.0, 1.0), 1).unwrap();
        let table = generate_polynomials(&spec).unwrap();
        let r = proportionality_check(
            &table.critical,
            &EpsPolynomial::new(vec![-4.0, 0.0, 2.0]),
            1e-10,
        )
        .unwrap();
        assert!(r.proportional);
    }

    #[test]
    fn proportionality_examples() {
        let p = EpsPolynomial::new(vec![-2.0, 0.0, 2.0]);
        let q = EpsPolynomial::new(vec![-1.0, 0.0, 1.0]);
        let r = proportionality_check(&p, &q, 1e-12).unwrap();
        assert!(r.proportional);
        assert!((r.scale - 2.0).abs() < 1e-15);

        let p = EpsPolynomial::new(vec![1.0, 0.0, 1.0]);
        let r = proportionality_check(&p, &q, 1e-12).unwrap();
        assert!(!r.proportional);

        assert!(proportionality_check(&p, &EpsPolynomial::zero(), 1e-12).is_err());
    }

    #[test]
    fn tabulated_rows_match_for_cubic_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for j in 0..=3u32 {
            for _ in 0..5 {
                let b = rng.gen_range(0.5..3.0);
                let c = rng.gen_range(0.5..3.0);
                let model = one_d_i(b, c);
                let spec = RecurrenceSpec::new(&model, j).unwrap();
                let table = generate_polynomials(&spec).unwrap();
                let printed = tabulated_critical(&model, j).unwrap();
                let r = proportionality_check(&table.critical, &printed, 1e-10).unwrap();
                assert!(r.proportional, "j={j} B={b} C={c} defect={}", r.max_defect);
            }
        }
    }

    #[test]
    fn tabulated_rows_two_and_three_of_burrows_family_disagree() {
        // Rows j = 0, 1 agree; the j = 2, 3 closed forms are inconsistent
        // with their own recurrence, so the comparison must flag them while
        // the self-test still passes for every real root.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for j in 0..=3u32 {
            let b = rng.gen_range(0.5..3.0);
            let c = rng.gen_range(0.5..3.0);
            let model = one_d_ii(b, c);
            let spec = RecurrenceSpec::new(&model, j).unwrap();
            let table = generate_polynomials(&spec).unwrap();
            let printed = tabulated_critical(&model, j).unwrap();
            let r = proportionality_check(&table.critical, &printed, 1e-10).unwrap();
            assert_eq!(r.proportional, j <= 1, "j={j} defect={}", r.max_defect);

            let roots = crate::spectra::real_roots(&table.critical, 1e-9).unwrap();
            for &root in &roots.real {
                assert!(recurrence_self_test(&spec, root).unwrap() <= 1e-10);
            }
        }
    }

    #[test]
    fn quartic_harmonic_rows_match_in_tabulated_variable() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for j in 0..=3u32 {
            for _ in 0..5 {
                let a = rng.gen_range(0.5..3.0);
                let b = rng.gen_range(0.5..3.0);
                let model = PotentialModel::TwoDimI { a, b, c: 1.0 };
                let spec = RecurrenceSpec::new(&model, j).unwrap();
                let table = generate_polynomials(&spec).unwrap();
                let printed = tabulated_critical(&model, j).unwrap();
                let r = proportionality_check(&table.critical, &printed, 1e-10).unwrap();
                assert!(r.proportional, "j={j} defect={}", r.max_defect);
            }
        }
    }

    #[test]
    fn self_test_examples() {
        let spec = RecurrenceSpec::new(&one_d_i(1.0, 1.0), 0).unwrap();
        assert!(recurrence_self_test(&spec, 0.0).unwrap() <= 1e-14);

        let spec = RecurrenceSpec::new(&one_d_i(1.0, 1.0), 1).unwrap();
        let eps = 55f64.sqrt() / 3.0;
        assert!(recurrence_self_test(&spec, eps).unwrap() <= 1e-10);

        let spec = RecurrenceSpec::new(&one_d_ii(2.0, 1.0), 1).unwrap();
        assert!(recurrence_self_test(&spec, std::f64::consts::SQRT_2).unwrap() <= 1e-10);
    }

    #[test]
    fn self_test_rejects_non_roots() {
        let spec = RecurrenceSpec::new(&one_d_i(1.0, 1.0), 1).unwrap();
        assert!(recurrence_self_test(&spec, 1.0).is_err());
    }

    #[test]
    fn self_test_over_random_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let b = rng.gen_range(0.5..3.0);
            let c = rng.gen_range(0.5..3.0);
            for j in 0..=6u32 {
                for model in [one_d_i(b, c), one_d_ii(b, c)] {
                    let spec = RecurrenceSpec::new(&model, j).unwrap();
                    let table = generate_polynomials(&spec).unwrap();
                    let roots = crate::spectra::real_roots(&table.critical, 1e-9).unwrap();
                    for &root in &roots.real {
                        let res = recurrence_self_test(&spec, root).unwrap();
                        assert!(res <= 1e-10, "family={} j={j} res={res:.2e}", model.family_name());
                    }
                }
            }
        }
    }
}
