//! Test-curve families and their intersection numbers with the divisor basis.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::basis::{canonicalize, is_stable, Basis, DivGenerator, DivisorClass, Moduli, Permutation, PointSet};
use crate::error::{Error, Result};
use crate::rational::{self, frac, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestCurve {
    /// `Z_i`: the `i`-th marking moves along a fixed generic curve.
    MovingPoint(usize),
    /// `Z_h^P`: a fixed genus-`h` curve carrying the markings in `P` is glued
    /// at a point moving along a fixed genus-`(g-h)` curve carrying `P^c`.
    /// Any stable representative with `h < g` is allowed; enumeration uses
    /// canonical ones.
    Attached { h: usize, points: PointSet },
    /// `𝓔`: a varying elliptic tail, counted with the stacky factor 1/2.
    EllipticTail,
    /// `Z_irr`: a point moving on a fixed elliptic curve, bridged by a
    /// rational curve to a fixed genus `g-2` curve.
    IrreducibleBridge,
}

impl TestCurve {
    pub fn moving_point(i: usize, m: Moduli) -> Result<Self> {
        if i == 0 || i > m.n {
            return Err(Error::MarkingOutOfRange { index: i, n: m.n });
        }
        Ok(TestCurve::MovingPoint(i))
    }

    pub fn attached(h: usize, points: PointSet, m: Moduli) -> Result<Self> {
        let curve = TestCurve::Attached { h, points };
        if h >= m.g || !is_stable(h, points, m) {
            return Err(Error::InvalidCurve(curve.label()));
        }
        // a genus-1 moving side without markings is a constant family
        if h + 1 == m.g && points == m.all_points() {
            return Err(Error::InvalidCurve(curve.label()));
        }
        Ok(curve)
    }

    pub fn label(&self) -> String {
        match self {
            TestCurve::MovingPoint(i) => format!("Z_{i}"),
            TestCurve::Attached { h, points } => format!("Z_{h}_{points}"),
            TestCurve::EllipticTail => "E".to_string(),
            TestCurve::IrreducibleBridge => "Z_irr".to_string(),
        }
    }

    pub fn permuted(&self, sigma: &Permutation) -> TestCurve {
        match *self {
            TestCurve::MovingPoint(i) => TestCurve::MovingPoint(sigma.image(i)),
            TestCurve::Attached { h, points } => TestCurve::Attached { h, points: points.permuted(sigma) },
            other => other,
        }
    }
}

impl fmt::Display for TestCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `[Z_1..Z_n] ++ [Z_h^P per canonical boundary class] ++ [𝓔, Z_irr]`.
pub fn enumerate_test_curves(m: Moduli) -> Result<Vec<TestCurve>> {
    m.require_basis_complete()?;
    let basis = Basis::new(m);
    let mut curves: Vec<TestCurve> = (1..=m.n).map(TestCurve::MovingPoint).collect();
    for b in basis.boundary() {
        curves.push(TestCurve::attached(b.h(), b.points(), m)?);
    }
    curves.push(TestCurve::EllipticTail);
    curves.push(TestCurve::IrreducibleBridge);
    Ok(curves)
}

fn is_class(h: usize, points: PointSet, gen: &DivGenerator, m: Moduli) -> bool {
    match (gen, canonicalize(h, points, m)) {
        (DivGenerator::Delta(b), Ok(c)) => *b == c,
        _ => false,
    }
}

/// Intersection number of a test curve with a basis generator.
pub fn intersect(curve: &TestCurve, gen: &DivGenerator, m: Moduli) -> Rational {
    let g = m.g as i64;
    match *curve {
        TestCurve::MovingPoint(i) => match *gen {
            DivGenerator::K(j) if j == i => int(2 * g - 2),
            DivGenerator::Delta(_) => {
                let hits = (1..=m.n)
                    .filter(|&j| j != i)
                    .filter(|&j| is_class(0, PointSet::singleton(i).with(j), gen, m))
                    .count();
                int(hits as i64)
            }
            _ => Rational::zero(),
        },
        TestCurve::Attached { h, points } => match *gen {
            DivGenerator::K(i) => {
                if h == 0 && points.contains(i) {
                    int(2 * g - 2)
                } else if h > 0 && !points.contains(i) {
                    int(1)
                } else {
                    Rational::zero()
                }
            }
            DivGenerator::Delta(_) => {
                let rest = points.complement(m.n);
                let mut value = 0i64;
                if is_class(h, points, gen, m) {
                    value += 2 - 2 * (g - h as i64) - rest.len() as i64;
                }
                value += rest.iter().filter(|&j| is_class(h, points.with(j), gen, m)).count() as i64;
                int(value)
            }
            _ => Rational::zero(),
        },
        TestCurve::EllipticTail => match *gen {
            DivGenerator::Lambda1 => frac(1, 24),
            DivGenerator::DeltaIrr => frac(1, 2),
            DivGenerator::Delta(_) if is_class(1, PointSet::EMPTY, gen, m) => frac(-1, 24),
            _ => Rational::zero(),
        },
        TestCurve::IrreducibleBridge => match *gen {
            DivGenerator::DeltaIrr => int(-1),
            DivGenerator::Delta(_) if is_class(1, PointSet::EMPTY, gen, m) => int(1),
            _ => Rational::zero(),
        },
    }
}

/// The intersection number of a test curve with an arbitrary class.
pub fn pair(curve: &TestCurve, class: &DivisorClass) -> Rational {
    let m = class.moduli();
    class.terms().map(|(gen, c)| intersect(curve, &gen, m) * c).sum()
}

/// Test curves against basis generators, both in their fixed orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    pub moduli: Moduli,
    pub rows: Vec<TestCurve>,
    pub cols: Vec<DivGenerator>,
    pub entries: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub g: usize,
    pub n: usize,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

pub fn build_matrix(m: Moduli) -> Result<IntersectionMatrix> {
    let rows = enumerate_test_curves(m)?;
    let cols: Vec<DivGenerator> = Basis::new(m).generators().collect();
    let entries = rows
        .iter()
        .map(|curve| cols.iter().map(|gen| intersect(curve, gen, m)).collect())
        .collect();
    Ok(IntersectionMatrix { moduli: m, rows, cols, entries })
}

impl IntersectionMatrix {
    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            g: self.moduli.g,
            n: self.moduli.n,
            rows: self.rows.iter().map(TestCurve::label).collect(),
            cols: self.cols.iter().map(DivGenerator::label).collect(),
            entries: self.entries.iter().map(|row| row.iter().map(rational::to_string).collect()).collect(),
        }
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Parse(e.to_string());
        let mut header = vec!["curve".to_string()];
        header.extend(self.cols.iter().map(DivGenerator::label));
        writer.write_record(&header).map_err(csv_err)?;
        for (curve, row) in self.rows.iter().zip(&self.entries) {
            let mut record = vec![curve.label()];
            record.extend(row.iter().map(rational::to_string));
            writer.write_record(&record).map_err(csv_err)?;
        }
        writer.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }
}
