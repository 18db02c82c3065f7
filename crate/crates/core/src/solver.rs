//! Reconstructs the theta pullbacks from test-curve data by exact linear
//! algebra, and certifies that the test curves detect every divisor class.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, DivGenerator, DivisorClass, Moduli};
use crate::curves::{build_matrix, enumerate_test_curves, intersect, TestCurve};
use crate::error::{Error, Result};
use crate::linalg::{back_substitute, bareiss, determinant, integer_rows};
use crate::rational::{frac, int, Rational};
use crate::theta::{theta_intersection, Pairing, ThetaKind, WeightVector};

/// `matrix · x = rhs`, with labelled rows and columns for error reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl LinearSystem {
    pub fn with_columns(col_labels: Vec<String>) -> Self {
        LinearSystem { matrix: Vec::new(), rhs: Vec::new(), row_labels: Vec::new(), col_labels }
    }

    /// Unlabelled system; rows become `r0, r1, …` and columns `x0, x1, …`.
    pub fn from_parts(matrix: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Result<Self> {
        let cols = matrix.first().map_or(0, Vec::len);
        let mut system = LinearSystem::with_columns((0..cols).map(|j| format!("x{j}")).collect());
        for (k, (row, b)) in matrix.into_iter().zip(rhs).enumerate() {
            system.push_row(format!("r{k}"), row, b)?;
        }
        Ok(system)
    }

    pub fn push_row(&mut self, label: String, row: Vec<Rational>, rhs: Rational) -> Result<()> {
        if row.len() != self.col_labels.len() {
            return Err(Error::Dimension(format!(
                "row {label} has {} entries, expected {}",
                row.len(),
                self.col_labels.len()
            )));
        }
        self.matrix.push(row);
        self.rhs.push(rhs);
        self.row_labels.push(label);
        Ok(())
    }

    /// Appends the row of a test curve against the basis of `basis`.
    pub fn push_curve(&mut self, curve: &TestCurve, basis: &Basis, rhs: Rational) -> Result<()> {
        let m = basis.moduli();
        let row = basis.generators().map(|gen| intersect(curve, &gen, m)).collect();
        self.push_row(curve.label(), row, rhs)
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }
}

/// Unique exact solution of a square or consistent overdetermined system.
///
/// Fails with [`Error::Singular`] naming the first column without a pivot, or
/// [`Error::Inconsistent`] naming every redundant row whose right-hand side
/// disagrees with the others.
pub fn solve_exact(system: &LinearSystem) -> Result<Vec<Rational>> {
    let cols = system.cols();
    if system.rhs.len() != system.rows() || system.row_labels.len() != system.rows() {
        return Err(Error::Dimension("rows, right-hand sides and labels differ in length".into()));
    }
    let augmented: Vec<Vec<Rational>> = system
        .matrix
        .iter()
        .zip(&system.rhs)
        .map(|(row, b)| row.iter().cloned().chain(std::iter::once(b.clone())).collect())
        .collect();
    let (ints, _) = integer_rows(&augmented);
    let ech = bareiss(ints, cols);
    if ech.rank() < cols {
        let missing = (0..cols).find(|j| !ech.pivot_cols.contains(j)).unwrap_or(0);
        return Err(Error::Singular { column: system.col_labels[missing].clone() });
    }
    let mut bad: Vec<usize> = (ech.rank()..ech.rows.len())
        .filter(|&k| !ech.rows[k][cols].is_zero())
        .map(|k| ech.order[k])
        .collect();
    if !bad.is_empty() {
        bad.sort_unstable();
        return Err(Error::Inconsistent { rows: bad.into_iter().map(|k| system.row_labels[k].clone()).collect() });
    }
    Ok(back_substitute(&ech, cols))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub g: usize,
    pub n: usize,
    pub rank: usize,
    pub expected: usize,
    pub det_nonzero: bool,
    pub failed_rows: Vec<String>,
    #[serde(skip)]
    pub determinant: Rational,
}

impl RankReport {
    pub fn passed(&self) -> bool {
        self.rank == self.expected && self.det_nonzero
    }
}

/// Rank and determinant of the test-curve intersection matrix.
pub fn certify_basis(m: Moduli) -> Result<RankReport> {
    let matrix = build_matrix(m)?;
    let expected = matrix.rows.len();
    let (ints, _) = integer_rows(&matrix.entries);
    let ech = bareiss(ints, matrix.cols.len());
    let det = determinant(&matrix.entries);
    Ok(RankReport {
        g: m.g,
        n: m.n,
        rank: ech.rank(),
        expected,
        det_nonzero: !det.is_zero(),
        failed_rows: ech.dependent_rows().iter().map(|&k| matrix.rows[k].label()).collect(),
        determinant: det,
    })
}

fn column_labels(basis: &Basis) -> Vec<String> {
    basis.generators().map(|g| g.label()).collect()
}

/// Every test curve, paired with `[s_d^* T]` through the known intersection numbers.
pub fn t_system(basis: &Arc<Basis>, d: &WeightVector) -> Result<LinearSystem> {
    let m = basis.moduli();
    let mut system = LinearSystem::with_columns(column_labels(basis));
    for curve in enumerate_test_curves(m)? {
        let rhs = match theta_intersection(&curve, d, ThetaKind::T, m)? {
            Pairing::Known(v) => v,
            Pairing::Unavailable => unreachable!("every test curve pairs with T"),
        };
        system.push_curve(&curve, basis, rhs)?;
    }
    Ok(system)
}

/// The `Z_i` and `Z_h^P` rows for `[s_d^* Θ]`, closed off by the two
/// constraints `λ₁ = −1` and `λ₁ + 12 δ_irr = 1/2` on the remaining coefficients.
pub fn theta_system(basis: &Arc<Basis>, d: &WeightVector) -> Result<LinearSystem> {
    let m = basis.moduli();
    let mut system = LinearSystem::with_columns(column_labels(basis));
    for curve in enumerate_test_curves(m)? {
        if let Pairing::Known(rhs) = theta_intersection(&curve, d, ThetaKind::Theta, m)? {
            system.push_curve(&curve, basis, rhs)?;
        }
    }
    let lambda = basis.position(&DivGenerator::Lambda1).expect("λ₁ is a generator");
    let irr = basis.position(&DivGenerator::DeltaIrr).expect("δ_irr is a generator");

    let mut row = vec![Rational::zero(); basis.len()];
    row[lambda] = Rational::one();
    system.push_row("lambda1 coefficient".into(), row, int(-1))?;

    let mut row = vec![Rational::zero(); basis.len()];
    row[lambda] = Rational::one();
    row[irr] = int(12);
    system.push_row("elliptic tail: lambda1 + 12 delta_irr".into(), row, frac(1, 2))?;
    Ok(system)
}

pub fn solve_for_class(basis: &Arc<Basis>, system: &LinearSystem) -> Result<DivisorClass> {
    DivisorClass::from_coeffs(basis, solve_exact(system)?)
}

pub fn reconstruct_t(basis: &Arc<Basis>, d: &WeightVector) -> Result<DivisorClass> {
    solve_for_class(basis, &t_system(basis, d)?)
}

pub fn reconstruct_theta(basis: &Arc<Basis>, d: &WeightVector) -> Result<DivisorClass> {
    solve_for_class(basis, &theta_system(basis, d)?)
}
