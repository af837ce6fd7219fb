//! sl₂(R) generators realized as exact linear maps on polynomial coefficient
//! vectors, and the QES operators T built from them.
//!
//! The realization acts on monomials as
//!
//! ```text
//! J₋ xᵐ = m xᵐ⁻¹,   J₀ xᵐ = (m − j/2) xᵐ,   J₊ xᵐ = (m − j) xᵐ⁺¹,
//! ```
//!
//! so for a non-negative integer j the span of {x⁰, …, x^j} is invariant:
//! J₊ annihilates x^j. Operators are stored as coefficient tuples of
//! J₋², J₋, J₀, J₊ and the identity; application is exact up to float
//! round-off in the parameter values.

use crate::error::{Error, Result};
use crate::spectra::PotentialModel;

/// The three generators of the realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    JPlus,
    JZero,
    JMinus,
}

/// Dense real polynomial in x, constant coefficient first.
///
/// The empty vector is the zero polynomial; constructors trim trailing
/// zeros so `degree` is well defined.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoeffVector {
    coeffs: Vec<f64>,
}

impl CoeffVector {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        CoeffVector { coeffs }
    }

    pub fn zero() -> Self {
        CoeffVector { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        CoeffVector { coeffs: vec![1.0] }
    }

    /// xᵐ
    pub fn monomial(m: usize) -> Self {
        let mut coeffs = vec![0.0; m + 1];
        coeffs[m] = 1.0;
        CoeffVector { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of xⁱ, zero beyond the stored length.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// Degree ignoring trailing zeros; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |a, c| a.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> CoeffVector {
        if self.coeffs.len() <= 1 {
            return CoeffVector::zero();
        }
        CoeffVector::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| (i as f64 + 1.0) * c)
                .collect(),
        )
    }

    pub fn scaled(&self, s: f64) -> CoeffVector {
        CoeffVector::new(self.coeffs.iter().map(|c| s * c).collect())
    }

    pub fn add(&self, other: &CoeffVector) -> CoeffVector {
        let n = self.coeffs.len().max(other.coeffs.len());
        CoeffVector::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &CoeffVector) -> CoeffVector {
        self.add(&other.scaled(-1.0))
    }

    pub fn mul(&self, other: &CoeffVector) -> CoeffVector {
        if self.is_zero() || other.is_zero() {
            return CoeffVector::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (k, b) in other.coeffs.iter().enumerate() {
                out[i + k] += a * b;
            }
        }
        CoeffVector::new(out)
    }

    /// Scale so the largest coefficient magnitude is 1. The zero polynomial
    /// is returned unchanged.
    pub fn normalized(&self) -> CoeffVector {
        let m = self.max_abs();
        if m == 0.0 {
            self.clone()
        } else {
            self.scaled(1.0 / m)
        }
    }
}

impl From<Vec<f64>> for CoeffVector {
    fn from(coeffs: Vec<f64>) -> Self {
        CoeffVector::new(coeffs)
    }
}

impl std::fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            if first {
                write!(f, "{c}")?;
            } else if *c < 0.0 {
                write!(f, " - {}", -c)?;
            } else {
                write!(f, " + {c}")?;
            }
            if i == 1 {
                write!(f, "·x")?;
            } else if i > 1 {
                write!(f, "·x^{i}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Apply a single generator at representation index j.
pub fn apply_generator(gen: GeneratorKind, j: u32, p: &CoeffVector) -> CoeffVector {
    let jf = f64::from(j);
    let src = p.coeffs();
    match gen {
        GeneratorKind::JMinus => {
            if src.len() <= 1 {
                return CoeffVector::zero();
            }
            CoeffVector::new(
                src[1..]
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (i as f64 + 1.0) * c)
                    .collect(),
            )
        }
        GeneratorKind::JZero => CoeffVector::new(
            src.iter()
                .enumerate()
                .map(|(m, c)| (m as f64 - jf / 2.0) * c)
                .collect(),
        ),
        GeneratorKind::JPlus => {
            let mut out = vec![0.0; src.len() + 1];
            for (m, c) in src.iter().enumerate() {
                out[m + 1] = (m as f64 - jf) * c;
            }
            CoeffVector::new(out)
        }
    }
}

/// Largest absolute output coefficient of each commutation relation applied
/// to every monomial x⁰..x^max_degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorReport {
    /// [J₊, J₋] + 2J₀
    pub plus_minus: f64,
    /// [J₀, J₊] − J₊
    pub zero_plus: f64,
    /// [J₀, J₋] + J₋
    pub zero_minus: f64,
}

impl CommutatorReport {
    pub fn max_defect(&self) -> f64 {
        self.plus_minus.max(self.zero_plus).max(self.zero_minus)
    }
}

/// Evaluate the three commutation relations on every monomial up to
/// `max_degree`. All three defects are exactly zero for every j; any other
/// outcome indicates a broken generator implementation.
pub fn commutator_report(j: u32, max_degree: usize) -> Result<CommutatorReport> {
    if max_degree < 1 {
        return Err(Error::invalid("max_degree must be at least 1"));
    }
    use GeneratorKind::{JMinus, JPlus, JZero};
    let commute = |a: GeneratorKind, b: GeneratorKind, p: &CoeffVector| {
        apply_generator(a, j, &apply_generator(b, j, p))
            .sub(&apply_generator(b, j, &apply_generator(a, j, p)))
    };
    let mut report = CommutatorReport {
        plus_minus: 0.0,
        zero_plus: 0.0,
        zero_minus: 0.0,
    };
    for m in 0..=max_degree {
        let p = CoeffVector::monomial(m);
        let scale = 1.0; // monomial coefficients are exactly 1
        let r1 = commute(JPlus, JMinus, &p).add(&apply_generator(JZero, j, &p).scaled(2.0));
        let r2 = commute(JZero, JPlus, &p).sub(&apply_generator(JPlus, j, &p));
        let r3 = commute(JZero, JMinus, &p).add(&apply_generator(JMinus, j, &p));
        report.plus_minus = report.plus_minus.max(r1.max_abs() / scale);
        report.zero_plus = report.zero_plus.max(r2.max_abs() / scale);
        report.zero_minus = report.zero_minus.max(r3.max_abs() / scale);
    }
    Ok(report)
}

/// Operator T = c₋₋J₋² + c₋J₋ + c₀J₀ + c₊J₊ + c_id·1 at representation
/// index j.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraicOperator {
    pub c_mm: f64,
    pub c_m: f64,
    pub c_0: f64,
    pub c_p: f64,
    pub c_id: f64,
    pub j: u32,
}

impl AlgebraicOperator {
    pub fn new(c_mm: f64, c_m: f64, c_0: f64, c_p: f64, c_id: f64, j: u32) -> Result<Self> {
        for (name, v) in [
            ("c_mm", c_mm),
            ("c_m", c_m),
            ("c_0", c_0),
            ("c_p", c_p),
            ("c_id", c_id),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("operator coefficient {name} is not finite")));
            }
        }
        Ok(AlgebraicOperator {
            c_mm,
            c_m,
            c_0,
            c_p,
            c_id,
            j,
        })
    }

    /// −J₋² + 2bJ₋ + 2aJ₊, the one-axis operator of the quartic 2D families.
    pub fn quartic_axis(a: f64, b: f64, j: u32) -> Result<Self> {
        AlgebraicOperator::new(-1.0, 2.0 * b, 0.0, 2.0 * a, 0.0, j)
    }
}

/// Build the QES operator of a model family. For the 2D families this is the
/// x-axis operator; the y-axis operator of the second 2D family is
/// [`AlgebraicOperator::quartic_axis`] with (a₂, b₂, j_y).
pub fn build_operator(model: &PotentialModel, j: u32) -> Result<AlgebraicOperator> {
    model.validate()?;
    match *model {
        PotentialModel::OneDimI { b, c } => {
            let sc = c.sqrt();
            AlgebraicOperator::new(
                -1.0,
                -3.0 * f64::from(j + 1) * c / b,
                -2.0 * b / (3.0 * sc),
                sc,
                0.0,
                j,
            )
        }
        PotentialModel::OneDimII { b, c, .. } => {
            let s2 = std::f64::consts::SQRT_2;
            AlgebraicOperator::new(-1.0, 0.0, -s2 * b, -s2 * c, 0.0, j)
        }
        PotentialModel::TwoDimI { a, b, .. } => AlgebraicOperator::quartic_axis(a, b, j),
        PotentialModel::TwoDimII { a1, b1, .. } => AlgebraicOperator::quartic_axis(a1, b1, j),
    }
}

/// Apply T to a coefficient vector.
pub fn apply_operator(op: &AlgebraicOperator, p: &CoeffVector) -> CoeffVector {
    use GeneratorKind::{JMinus, JPlus, JZero};
    let jm = apply_generator(JMinus, op.j, p);
    let jmm = apply_generator(JMinus, op.j, &jm);
    let mut out = jmm.scaled(op.c_mm);
    out = out.add(&jm.scaled(op.c_m));
    out = out.add(&apply_generator(JZero, op.j, p).scaled(op.c_0));
    out = out.add(&apply_generator(JPlus, op.j, p).scaled(op.c_p));
    out.add(&p.scaled(op.c_id))
}

/// Matrix of T restricted to the invariant subspace span{x⁰..x^j},
/// row-major: entry [k][m] is the coefficient of xᵏ in T·xᵐ.
pub fn invariant_matrix(op: &AlgebraicOperator) -> Vec<Vec<f64>> {
    let n = op.j as usize + 1;
    let jf = f64::from(op.j);
    let mut mat = vec![vec![0.0; n]; n];
    for m in 0..n {
        let mf = m as f64;
        if m >= 2 {
            mat[m - 2][m] += op.c_mm * mf * (mf - 1.0);
        }
        if m >= 1 {
            mat[m - 1][m] += op.c_m * mf;
        }
        mat[m][m] += op.c_0 * (mf - jf / 2.0) + op.c_id;
        if m + 1 < n {
            // J₊ x^j vanishes, so the top column never overflows
            mat[m + 1][m] += op.c_p * (mf - jf);
        }
    }
    mat
}

/// Coefficients of the T-eigenfunction for the eigenvalue `lambda`.
///
/// The subdiagonal entries c₊(m − j) are nonzero for m < j, so fixing the
/// top coefficient and back-substituting rows j..1 determines the vector
/// deterministically; row 0 is the eigenvalue condition itself. The result
/// is scaled to unit maximum with a positive leading coefficient.
pub fn eigenvector_for_root(op: &AlgebraicOperator, lambda: f64) -> Result<CoeffVector> {
    if op.c_p == 0.0 {
        return Err(Error::degenerate(
            "operator has no raising term; eigenvector ladder cannot start",
        ));
    }
    let n = op.j as usize + 1;
    let mat = invariant_matrix(op);
    let mut v = vec![0.0; n];
    v[n - 1] = 1.0;
    for k in (1..n).rev() {
        let mut acc = -lambda * v[k];
        for (m, vm) in v.iter().enumerate().take(n).skip(k) {
            acc += mat[k][m] * vm;
        }
        v[k - 1] = -acc / mat[k][k - 1];
    }
    let out = CoeffVector::new(v);
    Ok(out.normalized())
}

/// Residual of the adjoint eigen-identity ‖Mᵀp − λp‖∞ / ‖p‖∞ for a vector of
/// recurrence-polynomial values p.
pub fn adjoint_residual(op: &AlgebraicOperator, lambda: f64, p: &[f64]) -> Result<f64> {
    let n = op.j as usize + 1;
    if p.len() != n {
        return Err(Error::invalid(format!(
            "expected {n} polynomial values, got {}",
            p.len()
        )));
    }
    let mat = invariant_matrix(op);
    let scale = p.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    if scale == 0.0 {
        return Err(Error::invalid("zero vector"));
    }
    let mut worst = 0.0f64;
    for m in 0..n {
        let mut acc = -lambda * p[m];
        for (k, pk) in p.iter().enumerate() {
            acc += mat[k][m] * pk;
        }
        worst = worst.max(acc.abs());
    }
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_act_on_monomials() {
        // J₋ x³ = 3x²
        let out = apply_generator(GeneratorKind::JMinus, 0, &CoeffVector::monomial(3));
        assert_eq!(out, CoeffVector::monomial(2).scaled(3.0));
        // J₀ 1 = −1 at j = 2
        let out = apply_generator(GeneratorKind::JZero, 2, &CoeffVector::one());
        assert_eq!(out, CoeffVector::one().scaled(-1.0));
        // J₊ x⁴ = 0 at j = 4
        let out = apply_generator(GeneratorKind::JPlus, 4, &CoeffVector::monomial(4));
        assert!(out.is_zero());
    }

    #[test]
    fn commutators_vanish() {
        for j in [0u32, 1, 5] {
            let report = commutator_report(j, 12).unwrap();
            assert_eq!(report.max_defect(), 0.0, "j = {j}");
        }
        let report = commutator_report(1, 1).unwrap();
        assert_eq!(report.max_defect(), 0.0);
    }

    #[test]
    fn commutator_report_rejects_degree_zero() {
        assert!(commutator_report(0, 0).is_err());
    }

    #[test]
    fn operator_coefficients_per_family() {
        let op = build_operator(&PotentialModel::OneDimI { b: 1.0, c: 1.0 }, 0).unwrap();
        assert_eq!(
            (op.c_mm, op.c_m, op.c_0, op.c_p, op.c_id),
            (-1.0, -3.0, -2.0 / 3.0, 1.0, 0.0)
        );

        let op = build_operator(
            &PotentialModel::OneDimII {
                v0: 0.0,
                b: 2.0,
                c: 1.0,
            },
            3,
        )
        .unwrap();
        let s2 = std::f64::consts::SQRT_2;
        assert_eq!((op.c_mm, op.c_m, op.c_0, op.c_p, op.c_id), (-1.0, 0.0, -2.0 * s2, -s2, 0.0));

        let op = build_operator(
            &PotentialModel::TwoDimI {
                a: 1.0,
                b: 1.0,
                c: 1.0,
            },
            1,
        )
        .unwrap();
        assert_eq!((op.c_mm, op.c_m, op.c_0, op.c_p, op.c_id), (-1.0, 2.0, 0.0, 2.0, 0.0));
    }

    #[test]
    fn operator_guards() {
        assert!(build_operator(&PotentialModel::OneDimI { b: 0.0, c: 1.0 }, 0).is_err());
        assert!(build_operator(&PotentialModel::OneDimI { b: 1.0, c: -1.0 }, 0).is_err());
    }

    #[test]
    fn apply_operator_zero_and_identity() {
        let p = CoeffVector::new(vec![1.0, -2.0, 0.5]);
        let zero = AlgebraicOperator::new(0.0, 0.0, 0.0, 0.0, 0.0, 3).unwrap();
        assert!(apply_operator(&zero, &p).is_zero());
        let id = AlgebraicOperator::new(0.0, 0.0, 0.0, 0.0, 1.0, 3).unwrap();
        assert_eq!(apply_operator(&id, &p), p);
    }

    #[test]
    fn model_one_kills_constant_at_j_zero() {
        let op = build_operator(&PotentialModel::OneDimI { b: 1.0, c: 1.0 }, 0).unwrap();
        assert!(apply_operator(&op, &CoeffVector::one()).is_zero());
    }

    #[test]
    fn apply_operator_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let op = build_operator(&PotentialModel::OneDimI { b: 1.3, c: 0.8 }, 4).unwrap();
        for _ in 0..20 {
            let p = CoeffVector::new((0..5).map(|_| rng.gen_range(-2.0..2.0)).collect());
            let q = CoeffVector::new((0..5).map(|_| rng.gen_range(-2.0..2.0)).collect());
            let (a, b): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let lhs = apply_operator(&op, &p.scaled(a).add(&q.scaled(b)));
            let rhs = apply_operator(&op, &p)
                .scaled(a)
                .add(&apply_operator(&op, &q).scaled(b));
            let scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
            assert!(lhs.sub(&rhs).max_abs() / scale <= 1e-12);
        }
    }

    #[test]
    fn subspace_is_invariant() {
        for j in 0..=8u32 {
            let op = build_operator(&PotentialModel::OneDimI { b: 1.0, c: 2.0 }, j).unwrap();
            for m in 0..=j as usize {
                let img = apply_operator(&op, &CoeffVector::monomial(m));
                assert!(img.degree().unwrap_or(0) <= j as usize, "j={j} m={m}");
            }
        }
    }

    #[test]
    fn eigenvector_matches_differential_action() {
        // j = 1, B = C = 1: eigenvalues ±√55/3
        let op = build_operator(&PotentialModel::OneDimI { b: 1.0, c: 1.0 }, 1).unwrap();
        let eps = 55f64.sqrt() / 3.0;
        let r = eigenvector_for_root(&op, eps).unwrap();
        let lhs = apply_operator(&op, &r);
        let defect = lhs.sub(&r.scaled(eps)).max_abs() / r.max_abs();
        assert!(defect <= 1e-12, "defect {defect}");
    }

    #[test]
    fn display_is_readable() {
        let p = CoeffVector::new(vec![1.0, 0.0, -0.5]);
        assert_eq!(p.to_string(), "1 - 0.5·x^2");
    }
}
