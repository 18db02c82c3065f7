//! Closed-form pullbacks of the theta divisors along `s_d`, and the class of
//! the closure `D̄_d` of the locus where `Σ d_i p_i` is effective.
//!
//! Weights `d = (d_1..d_n)` of degree 0 give `[s_d^* T]`, weights of degree
//! `g - 1` give `[s_d^* Θ]` and `[D̄_d]`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{canonicalize, is_stable, Basis, BoundaryIndex, DivGenerator, DivisorClass, Moduli, Permutation, PointSet};
use crate::curves::TestCurve;
use crate::error::{Error, Result};
use crate::rational::{frac, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(weights: Vec<i64>, m: Moduli) -> Result<Self> {
        if weights.len() != m.n {
            return Err(Error::WeightLength { expected: m.n, found: weights.len() });
        }
        Ok(WeightVector(weights))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `d_i`, 1-based.
    pub fn weight(&self, i: usize) -> BigInt {
        BigInt::from(self.0[i - 1])
    }

    /// `d_P = Σ_{i ∈ P} d_i`.
    pub fn sum_over(&self, points: PointSet) -> BigInt {
        points.iter().map(|i| self.weight(i)).sum()
    }

    fn sum_of_squares_over(&self, points: PointSet) -> BigInt {
        points.iter().map(|i| self.weight(i).pow(2)).sum()
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&d| d < 0)
    }

    /// `(σ·d)_{σ(i)} = d_i`.
    pub fn permuted(&self, sigma: &Permutation) -> WeightVector {
        let mut out = vec![0; self.0.len()];
        for (k, &d) in self.0.iter().enumerate() {
            out[sigma.image(k + 1) - 1] = d;
        }
        WeightVector(out)
    }

    pub fn plus_set(&self, convention: PlusConvention) -> PointSet {
        let bits = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &d)| match convention {
                PlusConvention::NonNegative => d >= 0,
                PlusConvention::Strict => d > 0,
            })
            .fold(0u32, |acc, (k, _)| acc | (1 << k));
        PointSet::from_bits(bits)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Which markings count as nonnegative when collecting vanishing corrections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PlusConvention {
    /// `P_+ = {i : d_i >= 0}`
    #[default]
    #[serde(rename = "nonneg")]
    NonNegative,
    /// `P_+ = {i : d_i > 0}`
    #[serde(rename = "strict")]
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    /// The symmetric theta divisor on the degree-0 family, trivialized along the zero section.
    T,
    /// The universal theta divisor on the degree `g - 1` family.
    Theta,
}

impl ThetaKind {
    pub fn degree(self, m: Moduli) -> i64 {
        match self {
            ThetaKind::T => 0,
            ThetaKind::Theta => m.g as i64 - 1,
        }
    }

    pub fn check(self, d: &WeightVector, m: Moduli) -> Result<()> {
        check_degree(d, self.degree(m))
    }
}

fn check_degree(d: &WeightVector, expected: i64) -> Result<()> {
    if d.degree() != expected {
        return Err(Error::DegreeMismatch { expected, found: d.degree() });
    }
    Ok(())
}

fn half(value: BigInt) -> Rational {
    Rational::new(value, BigInt::from(2))
}

/// Coefficient of `δ_0^P`, shared by all three classes.
fn rational_tail_coeff(d: &WeightVector, points: PointSet) -> Rational {
    -half(d.sum_over(points).pow(2) - d.sum_of_squares_over(points))
}

fn theta_boundary_coeff(d_p: BigInt, h: usize) -> Rational {
    let x = d_p - BigInt::from(h);
    -half(&x * (&x + 1))
}

/// `[s_d^* T]` for `deg d = 0`:
/// `Σ d_i²/2 K_i − Σ_P (d_P² − Σ_{i∈P} d_i²)/2 δ_0^P − Σ_{h>0} d_P²/2 δ_h^P`.
pub fn class_t(basis: &Arc<Basis>, d: &WeightVector) -> Result<DivisorClass> {
    let m = basis.moduli();
    check_degree(d, 0)?;
    let mut class = DivisorClass::zero(basis);
    for i in 1..=m.n {
        class.set(DivGenerator::K(i), half(d.weight(i).pow(2)))?;
    }
    for b in basis.boundary() {
        let c = if b.h() == 0 {
            rational_tail_coeff(d, b.points())
        } else {
            -half(d.sum_over(b.points()).pow(2))
        };
        class.set(DivGenerator::Delta(*b), c)?;
    }
    Ok(class)
}

/// `[s_d^* Θ]` for `deg d = g − 1`:
/// `−λ₁ + δ_irr/8 + Σ d_i(d_i+1)/2 K_i − Σ_P (d_P² − Σ d_i²)/2 δ_0^P
///  − Σ_{h>0} (d_P−h)(d_P−h+1)/2 δ_h^P`.
pub fn class_theta(basis: &Arc<Basis>, d: &WeightVector) -> Result<DivisorClass> {
    let m = basis.moduli();
    check_degree(d, m.g as i64 - 1)?;
    let mut class = DivisorClass::zero(basis);
    class.set(DivGenerator::Lambda1, -Rational::one())?;
    class.set(DivGenerator::DeltaIrr, frac(1, 8))?;
    for i in 1..=m.n {
        let w = d.weight(i);
        class.set(DivGenerator::K(i), half(&w * (&w + 1)))?;
    }
    for b in basis.boundary() {
        let c = if b.h() == 0 {
            rational_tail_coeff(d, b.points())
        } else {
            theta_boundary_coeff(d.sum_over(b.points()), b.h())
        };
        class.set(DivGenerator::Delta(*b), c)?;
    }
    Ok(class)
}

/// A boundary component along which the theta function vanishes identically,
/// recorded through the representative `(h, P)` with `P ⊆ P_+` and `h > d_P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionTerm {
    pub h: usize,
    pub points: PointSet,
    pub class: BoundaryIndex,
    /// Vanishing order `h − d_P`.
    pub multiplicity: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionLedger {
    pub moduli: Moduli,
    pub weights: WeightVector,
    pub convention: PlusConvention,
    pub terms: Vec<CorrectionTerm>,
    /// Generic vanishing order along `δ_irr`.
    pub irr_order: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerJson {
    pub g: usize,
    pub n: usize,
    pub d: Vec<i64>,
    pub convention: PlusConvention,
    pub terms: Vec<LedgerTermJson>,
    pub delta_irr: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerTermJson {
    pub h: usize,
    #[serde(rename = "P")]
    pub points: Vec<usize>,
    pub mult: String,
}

impl CorrectionLedger {
    pub fn to_json(&self) -> LedgerJson {
        LedgerJson {
            g: self.moduli.g,
            n: self.moduli.n,
            d: self.weights.as_slice().to_vec(),
            convention: self.convention,
            terms: self
                .terms
                .iter()
                .map(|t| LedgerTermJson { h: t.h, points: t.points.to_vec(), mult: t.multiplicity.to_string() })
                .collect(),
            delta_irr: self.irr_order.to_string(),
        }
    }

    /// `Σ (h − d_P) δ_h^P + (1/8) δ_irr`.
    pub fn as_class(&self, basis: &Arc<Basis>) -> Result<DivisorClass> {
        let mut class = DivisorClass::zero(basis);
        class.set(DivGenerator::DeltaIrr, self.irr_order.clone())?;
        for t in &self.terms {
            class.add_to(DivGenerator::Delta(t.class), &Rational::from_integer(t.multiplicity.clone()))?;
        }
        Ok(class)
    }
}

fn check_mueller(d: &WeightVector, m: Moduli) -> Result<()> {
    check_degree(d, m.g as i64 - 1)?;
    if !d.has_negative() {
        return Err(Error::NoNegativeWeight);
    }
    Ok(())
}

/// Scans both representatives of every boundary class for identically
/// vanishing components.
pub fn correction_ledger(basis: &Arc<Basis>, d: &WeightVector, convention: PlusConvention) -> Result<CorrectionLedger> {
    let m = basis.moduli();
    check_mueller(d, m)?;
    let plus = d.plus_set(convention);
    let mut terms = Vec::new();
    for b in basis.boundary() {
        let qualifying: Vec<CorrectionTerm> = b
            .representatives(m)
            .into_iter()
            .filter(|&(h, p)| is_stable(h, p, m) && p.is_subset(plus))
            .filter_map(|(h, p)| {
                let order = BigInt::from(h) - d.sum_over(p);
                (order > BigInt::zero()).then_some(CorrectionTerm { h, points: p, class: *b, multiplicity: order })
            })
            .collect();
        debug_assert!(qualifying.len() <= 1, "both sides of {b} vanish");
        terms.extend(qualifying);
    }
    terms.sort_by(|a, b| (a.h, a.points.len()).cmp(&(b.h, b.points.len())).then(a.points.cmp_lex(b.points)));
    Ok(CorrectionLedger { moduli: m, weights: d.clone(), convention, terms, irr_order: frac(1, 8) })
}

/// `[D̄_d] = [s_d^* Θ] − Σ (h − d_P) δ_h^P − δ_irr/8`.
pub fn class_d_from_theta(basis: &Arc<Basis>, d: &WeightVector, convention: PlusConvention) -> Result<DivisorClass> {
    let ledger = correction_ledger(basis, d, convention)?;
    class_theta(basis, d)?.sub(&ledger.as_class(basis)?)
}

/// `[D̄_d]` from its own closed form, without going through `[s_d^* Θ]`:
/// `−λ₁ + Σ d_i(d_i+1)/2 K_i − Σ_P (d_P² − Σ d_i²)/2 δ_0^P
///  − Σ_{h>0} (d_P−h)(d_P−h+1)/2 δ_h^P − Σ_{P ⊆ P_+, h > d_P} (h − d_P) δ_h^P`.
pub fn class_d_direct(basis: &Arc<Basis>, d: &WeightVector, convention: PlusConvention) -> Result<DivisorClass> {
    let m = basis.moduli();
    check_mueller(d, m)?;
    let mut class = DivisorClass::zero(basis);
    class.set(DivGenerator::Lambda1, -Rational::one())?;
    for i in 1..=m.n {
        let w = d.weight(i);
        class.set(DivGenerator::K(i), half(&w * (&w + 1)))?;
    }
    for p in PointSet::all_subsets(m.n).filter(|p| p.len() >= 2) {
        class.add_boundary(0, p, &rational_tail_coeff(d, p))?;
    }
    for h in 1..m.g {
        for p in PointSet::all_subsets(m.n) {
            let b = canonicalize(h, p, m)?;
            // each class once, through whichever representative is canonical
            if b.h() == h && b.points() == p {
                class.add_to(DivGenerator::Delta(b), &theta_boundary_coeff(d.sum_over(p), h))?;
            }
        }
    }
    let plus = d.plus_set(convention);
    for p in plus.subsets() {
        let d_p = d.sum_over(p);
        for h in 0..=m.g {
            let order = BigInt::from(h) - &d_p;
            if order > BigInt::zero() && is_stable(h, p, m) {
                class.add_boundary(h, p, &-Rational::from_integer(order))?;
            }
        }
    }
    Ok(class)
}

/// Outcome of pairing a test curve with a theta pullback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pairing {
    Known(Rational),
    /// No closed form is available (`𝓔` and `Z_irr` against `[s_d^* Θ]`).
    Unavailable,
}

impl Pairing {
    pub fn known(self) -> Option<Rational> {
        match self {
            Pairing::Known(v) => Some(v),
            Pairing::Unavailable => None,
        }
    }
}

/// Intersection of a test curve with `[s_d^* T]` or `[s_d^* Θ]`, from the
/// Abel–Jacobi description of `s_d` restricted to the curve.
pub fn theta_intersection(curve: &TestCurve, d: &WeightVector, kind: ThetaKind, m: Moduli) -> Result<Pairing> {
    kind.check(d, m)?;
    let g = BigInt::from(m.g);
    let value = match (*curve, kind) {
        (TestCurve::MovingPoint(i), _) => d.weight(i).pow(2) * g,
        (TestCurve::Attached { h, points }, ThetaKind::T) => d.sum_over(points).pow(2) * (g - h),
        (TestCurve::Attached { h, points }, ThetaKind::Theta) => {
            (d.sum_over(points) - BigInt::from(h)).pow(2) * (g - h)
        }
        (TestCurve::EllipticTail | TestCurve::IrreducibleBridge, ThetaKind::T) => BigInt::zero(),
        (TestCurve::EllipticTail | TestCurve::IrreducibleBridge, ThetaKind::Theta) => {
            return Ok(Pairing::Unavailable)
        }
    };
    Ok(Pairing::Known(Rational::from_integer(value)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{enumerate_test_curves, pair};
    use crate::rational::int;

    fn m(g: usize, n: usize) -> Moduli {
        Moduli::new(g, n).unwrap()
    }

    fn w(d: &[i64], mm: Moduli) -> WeightVector {
        WeightVector::new(d.to_vec(), mm).unwrap()
    }

    fn coeff(class: &DivisorClass, label: &str) -> Rational {
        class.coeff(&DivGenerator::parse(label, class.moduli()).unwrap())
    }

    fn weight_vectors(n: usize, degree: i64, range: i64) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..n - 1 {
            out = out
                .into_iter()
                .flat_map(|v| (-range..=range).map(move |x| [v.clone(), vec![x]].concat()))
                .collect();
        }
        out.into_iter()
            .map(|mut v| {
                let last = degree - v.iter().sum::<i64>();
                v.push(last);
                v
            })
            .collect()
    }

    #[test]
    fn t_zero_weights() {
        let basis = Basis::new(m(4, 3));
        assert!(class_t(&basis, &w(&[0, 0, 0], m(4, 3))).unwrap().is_zero());
    }

    #[test]
    fn t_example() {
        let mm = m(3, 2);
        let basis = Basis::new(mm);
        let c = class_t(&basis, &w(&[1, -1], mm)).unwrap();
        let expect = [
            ("lambda1", frac(0, 1)),
            ("delta_irr", frac(0, 1)),
            ("K_1", frac(1, 2)),
            ("K_2", frac(1, 2)),
            ("delta_0_{1,2}", int(1)),
            ("delta_1_{}", int(0)),
            ("delta_1_{1}", frac(-1, 2)),
            ("delta_1_{2}", frac(-1, 2)),
            ("delta_1_{1,2}", int(0)),
        ];
        for (label, v) in expect {
            assert_eq!(coeff(&c, label), v, "{label}");
        }
        assert!(class_t(&basis, &w(&[1, 0], mm)).is_err());
    }

    #[test]
    fn theta_example() {
        let mm = m(3, 2);
        let basis = Basis::new(mm);
        let c = class_theta(&basis, &w(&[3, -1], mm)).unwrap();
        let expect = [
            ("lambda1", int(-1)),
            ("delta_irr", frac(1, 8)),
            ("K_1", int(6)),
            ("K_2", int(0)),
            ("delta_0_{1,2}", int(3)),
            ("delta_1_{}", int(0)),
            ("delta_1_{1}", int(-3)),
            ("delta_1_{2}", int(-1)),
            ("delta_1_{1,2}", int(-1)),
        ];
        for (label, v) in expect {
            assert_eq!(coeff(&c, label), v, "{label}");
        }
        assert!(matches!(class_theta(&basis, &w(&[1, -1], mm)), Err(Error::DegreeMismatch { expected: 2, found: 0 })));
    }

    #[test]
    fn ledger_example() {
        let mm = m(3, 2);
        let basis = Basis::new(mm);
        let ledger = correction_ledger(&basis, &w(&[3, -1], mm), PlusConvention::NonNegative).unwrap();
        let shown: Vec<(usize, Vec<usize>, String, BigInt)> = ledger
            .terms
            .iter()
            .map(|t| (t.h, t.points.to_vec(), t.class.to_string(), t.multiplicity.clone()))
            .collect();
        assert_eq!(
            shown,
            vec![
                (1, vec![], "delta_1_{}".to_string(), BigInt::from(1)),
                (2, vec![], "delta_1_{1,2}".to_string(), BigInt::from(2)),
                (3, vec![], "delta_0_{1,2}".to_string(), BigInt::from(3)),
            ]
        );
        assert!(ledger.terms.iter().all(|t| t.h > 0));
        assert!(matches!(
            correction_ledger(&basis, &w(&[1, 1], mm), PlusConvention::NonNegative),
            Err(Error::NoNegativeWeight)
        ));
    }

    #[test]
    fn d_example_both_routes() {
        let mm = m(3, 2);
        let basis = Basis::new(mm);
        let d = w(&[3, -1], mm);
        let from_theta = class_d_from_theta(&basis, &d, PlusConvention::NonNegative).unwrap();
        let direct = class_d_direct(&basis, &d, PlusConvention::NonNegative).unwrap();
        assert_eq!(from_theta, direct);
        assert_eq!(coeff(&direct, "delta_0_{1,2}"), int(0));
        assert_eq!(*direct.lambda1(), int(-1));
        assert!(direct.delta_irr().is_zero());
    }

    #[test]
    fn d_routes_agree_exhaustively_for_small_weights() {
        for (g, n) in [(3, 2), (3, 3), (4, 2), (4, 3), (5, 3), (6, 2)] {
            let mm = m(g, n);
            let basis = Basis::new(mm);
            for v in weight_vectors(n, g as i64 - 1, 4) {
                let d = w(&v, mm);
                if !d.has_negative() {
                    continue;
                }
                for conv in [PlusConvention::NonNegative, PlusConvention::Strict] {
                    let a = class_d_direct(&basis, &d, conv).unwrap();
                    let b = class_d_from_theta(&basis, &d, conv).unwrap();
                    assert_eq!(a, b, "g={g} d={d} {conv:?}");
                    assert_eq!(*a.lambda1(), int(-1));
                    assert!(a.delta_irr().is_zero());
                }
            }
        }
    }

    #[test]
    fn conventions_differ_only_with_zero_weights() {
        let mm = m(4, 3);
        let basis = Basis::new(mm);
        for v in weight_vectors(3, 3, 4) {
            let d = w(&v, mm);
            if !d.has_negative() {
                continue;
            }
            let a = correction_ledger(&basis, &d, PlusConvention::NonNegative).unwrap();
            let b = correction_ledger(&basis, &d, PlusConvention::Strict).unwrap();
            if !v.contains(&0) {
                assert_eq!(a.terms, b.terms);
            }
        }
        // d = (4, 0, -1): the zero weight lets {2} join P_+ under the default
        let d = w(&[4, 0, -1], mm);
        let a = correction_ledger(&basis, &d, PlusConvention::NonNegative).unwrap();
        let b = correction_ledger(&basis, &d, PlusConvention::Strict).unwrap();
        assert!(a.terms.len() > b.terms.len());
    }

    #[test]
    fn boundary_coefficients_agree_across_representatives() {
        for g in 3..=6 {
            for n in 1..=3 {
                let mm = m(g, n);
                let basis = Basis::new(mm);
                for (degree, kind) in [(0, ThetaKind::T), (g as i64 - 1, ThetaKind::Theta)] {
                    for v in weight_vectors(n, degree, 3) {
                        let d = w(&v, mm);
                        for b in basis.boundary().iter().filter(|b| b.h() > 0) {
                            let [(h1, p1), (h2, p2)] = b.representatives(mm);
                            let (c1, c2) = match kind {
                                ThetaKind::T => (-half(d.sum_over(p1).pow(2)), -half(d.sum_over(p2).pow(2))),
                                ThetaKind::Theta => (
                                    theta_boundary_coeff(d.sum_over(p1), h1),
                                    theta_boundary_coeff(d.sum_over(p2), h2),
                                ),
                            };
                            assert_eq!(c1, c2, "g={g} d={d} {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn relabeling_commutes_with_every_formula() {
        for (g, n) in [(3, 3), (4, 3), (4, 2)] {
            let mm = m(g, n);
            let basis = Basis::new(mm);
            let dt = if n == 3 { w(&[2, -3, 1], mm) } else { w(&[2, -2], mm) };
            let dth = {
                let mut v = vec![-1; n];
                v[0] = g as i64 - 1 + (n as i64 - 1);
                w(&v, mm)
            };
            for sigma in Permutation::all(n) {
                assert_eq!(
                    class_t(&basis, &dt.permuted(&sigma)).unwrap(),
                    class_t(&basis, &dt).unwrap().permuted(&sigma).unwrap()
                );
                assert_eq!(
                    class_theta(&basis, &dth.permuted(&sigma)).unwrap(),
                    class_theta(&basis, &dth).unwrap().permuted(&sigma).unwrap()
                );
                let conv = PlusConvention::NonNegative;
                assert_eq!(
                    class_d_direct(&basis, &dth.permuted(&sigma), conv).unwrap(),
                    class_d_direct(&basis, &dth, conv).unwrap().permuted(&sigma).unwrap()
                );
            }
        }
    }

    #[test]
    fn closed_forms_reproduce_curve_pairings() {
        for (g, n) in [(3, 1), (3, 2), (4, 3), (5, 2), (6, 2)] {
            let mm = m(g, n);
            let basis = Basis::new(mm);
            let curves = enumerate_test_curves(mm).unwrap();
            for v in weight_vectors(n, 0, 3) {
                let d = w(&v, mm);
                let class = class_t(&basis, &d).unwrap();
                for curve in &curves {
                    let expect = theta_intersection(curve, &d, ThetaKind::T, mm).unwrap().known().unwrap();
                    assert_eq!(pair(curve, &class), expect, "T g={g} d={d} {curve}");
                }
            }
            for v in weight_vectors(n, g as i64 - 1, 3) {
                let d = w(&v, mm);
                let class = class_theta(&basis, &d).unwrap();
                for curve in &curves {
                    match theta_intersection(curve, &d, ThetaKind::Theta, mm).unwrap() {
                        Pairing::Known(expect) => assert_eq!(pair(curve, &class), expect, "Θ g={g} d={d} {curve}"),
                        Pairing::Unavailable => {
                            assert!(matches!(curve, TestCurve::EllipticTail | TestCurve::IrreducibleBridge))
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn intersection_examples() {
        let mm = m(3, 2);
        let z11 = TestCurve::attached(1, PointSet::singleton(1), mm).unwrap();
        let t = |c: &TestCurve, d: &[i64]| theta_intersection(c, &w(d, mm), ThetaKind::T, mm).unwrap();
        assert_eq!(t(&TestCurve::MovingPoint(1), &[1, -1]), Pairing::Known(int(3)));
        assert_eq!(t(&z11, &[1, -1]), Pairing::Known(int(2)));
        assert_eq!(t(&TestCurve::EllipticTail, &[1, -1]), Pairing::Known(int(0)));
        let th = theta_intersection(&z11, &w(&[3, -1], mm), ThetaKind::Theta, mm).unwrap();
        assert_eq!(th, Pairing::Known(int(8)));
        let irr = theta_intersection(&TestCurve::IrreducibleBridge, &w(&[3, -1], mm), ThetaKind::Theta, mm).unwrap();
        assert_eq!(irr, Pairing::Unavailable);
    }
}
