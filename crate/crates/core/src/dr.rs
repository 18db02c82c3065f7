//! Formal expansion of the double ramification cycle `(1/g!) [s_d^* T]^g`
//! on compact type.
//!
//! The expansion is purely symbolic: monomials in the divisor generators are
//! kept as written, and no relations of the Chow ring are imposed.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, DivGenerator, DivisorClass, Moduli, Permutation};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::theta::{class_t, WeightVector};

pub const DEFAULT_MONOMIAL_CAP: u128 = 1_000_000;

/// A product of generators with positive exponents, sorted in basis order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalMonomial(Vec<(DivGenerator, u32)>);

impl FormalMonomial {
    pub fn new(mut factors: Vec<(DivGenerator, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort();
        let mut merged: Vec<(DivGenerator, u32)> = Vec::with_capacity(factors.len());
        for (gen, e) in factors {
            match merged.last_mut() {
                Some((last, acc)) if *last == gen => *acc += e,
                _ => merged.push((gen, e)),
            }
        }
        FormalMonomial(merged)
    }

    pub fn factors(&self) -> &[(DivGenerator, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }
}

impl fmt::Display for FormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (gen, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{gen}")?;
            } else {
                write!(f, "{gen}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A homogeneous polynomial in the divisor generators; zero terms are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalCycle {
    pub moduli: Moduli,
    pub degree: u32,
    terms: BTreeMap<FormalMonomial, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleJson {
    pub g: usize,
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: Vec<FactorJson>,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub gen: String,
    pub exp: u32,
}

impl FormalCycle {
    pub fn zero(moduli: Moduli, degree: u32) -> Self {
        FormalCycle { moduli, degree, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormalMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, monomial: &FormalMonomial) -> Rational {
        self.terms.get(monomial).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, monomial: FormalMonomial, c: Rational) {
        debug_assert_eq!(monomial.degree(), self.degree);
        let slot = self.terms.entry(monomial).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Relabels markings in every monomial.
    pub fn permuted(&self, sigma: &Permutation) -> FormalCycle {
        let mut out = FormalCycle::zero(self.moduli, self.degree);
        for (mono, c) in &self.terms {
            let factors = mono.0.iter().map(|(gen, e)| (gen.permuted(sigma, self.moduli), *e)).collect();
            out.add_term(FormalMonomial::new(factors), c.clone());
        }
        out
    }

    /// Exact value of the polynomial at `assignment`.
    pub fn evaluate(&self, assignment: &BTreeMap<DivGenerator, Rational>) -> Result<Rational> {
        self.terms.iter().try_fold(Rational::zero(), |acc, (mono, c)| {
            let mut value = c.clone();
            for (gen, e) in mono.factors() {
                let x = assignment.get(gen).ok_or_else(|| Error::MissingAssignment(gen.label()))?;
                value *= num_traits::pow(x.clone(), *e as usize);
            }
            Ok(acc + value)
        })
    }

    pub fn to_json(&self) -> CycleJson {
        CycleJson {
            g: self.moduli.g,
            n: self.moduli.n,
            terms: self
                .terms
                .iter()
                .map(|(mono, c)| TermJson {
                    monomial: mono.factors().iter().map(|(gen, e)| FactorJson { gen: gen.label(), exp: *e }).collect(),
                    c: rational::to_string(c),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &CycleJson) -> Result<FormalCycle> {
        let m = Moduli::new(json.g, json.n)?;
        let mut cycle = FormalCycle::zero(m, json.g as u32);
        for term in &json.terms {
            let factors = term
                .monomial
                .iter()
                .map(|f| Ok((DivGenerator::parse(&f.gen, m)?, f.exp)))
                .collect::<Result<Vec<_>>>()?;
            let mono = FormalMonomial::new(factors);
            if mono.degree() != cycle.degree {
                return Err(Error::Parse(format!("monomial {mono} is not of degree {}", cycle.degree)));
            }
            cycle.add_term(mono, rational::parse(&term.c)?);
        }
        Ok(cycle)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Parse(e.to_string());
        writer.write_record(["monomial", "c"]).map_err(csv_err)?;
        for (mono, c) in &self.terms {
            writer.write_record([mono.to_string(), rational::to_string(c)]).map_err(csv_err)?;
        }
        writer.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }
}

/// Drops `δ_irr`, which does not meet compact type.
pub fn restrict_to_compact_type(class: &DivisorClass) -> DivisorClass {
    let mut out = class.clone();
    out.set(DivGenerator::DeltaIrr, Rational::zero()).expect("δ_irr is a generator");
    out
}

/// Number of exponent vectors of total degree `degree` over `k` generators, `C(k+degree-1, degree)`.
pub fn monomial_count(k: usize, degree: u32) -> u128 {
    if k == 0 {
        return u128::from(degree == 0);
    }
    let mut count: u128 = 1;
    for i in 1..=degree as u128 {
        // count = C(k - 1 + i, i), exact at every step
        count = match count.checked_mul(k as u128 - 1 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    count
}

/// `(1/degree!) · class^degree`, expanded by the multinomial theorem:
/// the monomial `Π X_j^{e_j}` gets `Π c_j^{e_j} / e_j!`.
pub fn expand_power(class: &DivisorClass, degree: u32, cap: u128) -> Result<FormalCycle> {
    let factors: Vec<(DivGenerator, Rational)> = class.terms().map(|(g, c)| (g, c.clone())).collect();
    let count = monomial_count(factors.len(), degree);
    if count > cap {
        return Err(Error::MonomialCap { count, cap });
    }
    let mut cycle = FormalCycle::zero(class.moduli(), degree);
    if factors.is_empty() {
        return Ok(cycle);
    }
    // powers[j][e] = c_j^e / e!
    let powers: Vec<Vec<Rational>> = factors
        .iter()
        .map(|(_, c)| {
            let mut row = vec![Rational::one()];
            for e in 1..=degree {
                let next = &row[e as usize - 1] * c / Rational::from_integer(BigInt::from(e));
                row.push(next);
            }
            row
        })
        .collect();

    let mut exps = vec![0u32; factors.len()];
    fn rec(
        j: usize,
        left: u32,
        exps: &mut Vec<u32>,
        factors: &[(DivGenerator, Rational)],
        powers: &[Vec<Rational>],
        cycle: &mut FormalCycle,
    ) {
        if j + 1 == factors.len() {
            exps[j] = left;
            let c: Rational = exps.iter().enumerate().map(|(i, &e)| powers[i][e as usize].clone()).product();
            let mono = FormalMonomial::new(factors.iter().zip(exps.iter()).map(|((g, _), &e)| (*g, e)).collect());
            cycle.add_term(mono, c);
            return;
        }
        for e in (0..=left).rev() {
            exps[j] = e;
            rec(j + 1, left - e, exps, factors, powers, cycle);
        }
    }
    rec(0, degree, &mut exps, &factors, &powers, &mut cycle);
    Ok(cycle)
}

/// `(1/g!) [s_d^* T]^g` restricted to compact type, for `deg d = 0`.
pub fn dr_expansion(basis: &Arc<Basis>, d: &WeightVector, cap: u128) -> Result<FormalCycle> {
    let class = restrict_to_compact_type(&class_t(basis, d)?);
    expand_power(&class, basis.moduli().g as u32, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn m(g: usize, n: usize) -> Moduli {
        Moduli::new(g, n).unwrap()
    }

    fn w(d: &[i64], mm: Moduli) -> WeightVector {
        WeightVector::new(d.to_vec(), mm).unwrap()
    }

    fn constant(basis: &Basis, value: Rational) -> BTreeMap<DivGenerator, Rational> {
        basis.generators().map(|g| (g, value.clone())).collect()
    }

    fn factorial(k: u32) -> Rational {
        (1..=k).map(|i| int(i as i64)).product()
    }

    #[test]
    fn zero_weights_give_zero_cycle() {
        let mm = m(3, 2);
        assert!(dr_expansion(&Basis::new(mm), &w(&[0, 0], mm), DEFAULT_MONOMIAL_CAP).unwrap().is_zero());
    }

    #[test]
    fn genus_one_is_the_class_itself() {
        let mm = m(1, 3);
        let basis = Basis::new(mm);
        let d = w(&[2, -1, -1], mm);
        let class = restrict_to_compact_type(&class_t(&basis, &d).unwrap());
        let cycle = dr_expansion(&basis, &d, DEFAULT_MONOMIAL_CAP).unwrap();
        assert_eq!(cycle.len(), class.terms().count());
        for (gen, c) in class.terms() {
            assert_eq!(&cycle.coeff(&FormalMonomial::new(vec![(gen, 1)])), c);
        }
    }

    #[test]
    fn all_ones_value() {
        let mm = m(3, 2);
        let basis = Basis::new(mm);
        let cycle = dr_expansion(&basis, &w(&[1, -1], mm), DEFAULT_MONOMIAL_CAP).unwrap();
        assert_eq!(cycle.evaluate(&constant(&basis, int(1))).unwrap(), frac(1, 6));
        assert_eq!(cycle.evaluate(&constant(&basis, int(0))).unwrap(), int(0));
        // five nonzero generators, degree 3
        assert_eq!(cycle.len() as u128, monomial_count(5, 3));
        assert!(cycle.terms().all(|(mono, _)| mono.degree() == 3));
    }

    #[test]
    fn single_generator_power() {
        let basis = Basis::new(m(4, 1));
        let class = DivisorClass::generator(&basis, DivGenerator::K(1)).unwrap().scale(&frac(3, 2));
        let cycle = expand_power(&class, 4, DEFAULT_MONOMIAL_CAP).unwrap();
        let value = cycle.evaluate(&constant(&basis, int(1))).unwrap();
        assert_eq!(value, num_traits::pow(frac(3, 2), 4) / factorial(4));
    }

    #[test]
    fn restriction_drops_only_delta_irr() {
        let mm = m(3, 2);
        let basis = Basis::new(mm);
        let theta = crate::theta::class_theta(&basis, &w(&[3, -1], mm)).unwrap();
        let r = restrict_to_compact_type(&theta);
        assert!(r.delta_irr().is_zero());
        assert_eq!(r.lambda1(), theta.lambda1());
        assert_eq!(restrict_to_compact_type(&r), r);
        let t = class_t(&basis, &w(&[1, -1], mm)).unwrap();
        assert_eq!(restrict_to_compact_type(&t), t);
    }

    #[test]
    fn missing_assignment_is_reported() {
        let mm = m(3, 2);
        let basis = Basis::new(mm);
        let cycle = dr_expansion(&basis, &w(&[1, -1], mm), DEFAULT_MONOMIAL_CAP).unwrap();
        let mut a = constant(&basis, int(1));
        a.remove(&DivGenerator::K(2));
        assert_eq!(cycle.evaluate(&a), Err(Error::MissingAssignment("K_2".into())));
    }

    #[test]
    fn cap_is_enforced() {
        let mm = m(3, 2);
        let basis = Basis::new(mm);
        assert_eq!(
            dr_expansion(&basis, &w(&[1, -1], mm), 34),
            Err(Error::MonomialCap { count: 35, cap: 34 })
        );
        assert_eq!(monomial_count(3, 2), 6);
        assert_eq!(monomial_count(1, 7), 1);
        assert_eq!(monomial_count(0, 0), 1);
        assert_eq!(monomial_count(10_000, 200), u128::MAX);
    }

    #[test]
    fn json_round_trip_and_csv() {
        let mm = m(3, 2);
        let basis = Basis::new(mm);
        let cycle = dr_expansion(&basis, &w(&[1, -1], mm), DEFAULT_MONOMIAL_CAP).unwrap();
        let text = serde_json::to_string(&cycle.to_json()).unwrap();
        let back: CycleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(FormalCycle::from_json(&back).unwrap(), cycle);

        let mut buf = Vec::new();
        cycle.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 36);
        assert_eq!(text.lines().next().unwrap(), "monomial,c");
        assert!(text.contains("\"delta_0_{1,2}^3\",1/6"));
    }

    #[test]
    fn relabeling_commutes_with_expansion() {
        let mm = m(3, 3);
        let basis = Basis::new(mm);
        let d = w(&[2, -3, 1], mm);
        let cycle = dr_expansion(&basis, &d, DEFAULT_MONOMIAL_CAP).unwrap();
        for sigma in Permutation::all(3) {
            assert_eq!(dr_expansion(&basis, &d.permuted(&sigma), DEFAULT_MONOMIAL_CAP).unwrap(), cycle.permuted(&sigma));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn multinomial_identity(
            gn in prop::sample::select(vec![(3usize, 2usize), (3, 3), (4, 2), (4, 3)]),
            raw in prop::collection::vec(-4i64..=4, 3),
            vals in prop::collection::vec((-5i64..=5, 1i64..=4), 64),
        ) {
            let (g, n) = gn;
            let mm = m(g, n);
            let basis = Basis::new(mm);
            let mut d: Vec<i64> = raw[..n - 1].to_vec();
            d.push(-d.iter().sum::<i64>());
            let d = w(&d, mm);
            let class = restrict_to_compact_type(&class_t(&basis, &d).unwrap());
            let cycle = dr_expansion(&basis, &d, DEFAULT_MONOMIAL_CAP).unwrap();
            let a: BTreeMap<DivGenerator, Rational> =
                basis.generators().zip(vals.iter().cycle()).map(|(gen, &(p, q))| (gen, frac(p, q))).collect();
            let linear = class.evaluate(&a).unwrap();
            let expect = num_traits::pow(linear, g) / factorial(g as u32);
            prop_assert_eq!(cycle.evaluate(&a).unwrap(), expect);
        }
    }
}
