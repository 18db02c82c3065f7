//! The divisor basis of `Pic_Q(M̄_{g,n})` and exact class arithmetic.
//!
//! Generators are ordered as
//! `λ₁, δ_irr, K_1, …, K_n, δ_h^P…` where the boundary classes follow
//! [`enumerate_boundary`]. Every boundary class `δ_h^P = δ_{g-h}^{P^c}` is
//! stored once, under its canonical representative (see [`canonicalize`]).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest number of markings supported; point sets are stored as bitmasks.
pub const MAX_MARKINGS: usize = 24;

/// The pair `(g, n)` naming `M̄_{g,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Moduli {
    pub g: usize,
    pub n: usize,
}

impl Moduli {
    pub fn new(g: usize, n: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::Signature { g, n, reason: "genus must be at least 1" });
        }
        if n == 0 || n > MAX_MARKINGS {
            return Err(Error::Signature { g, n, reason: "number of markings must be in 1..=24" });
        }
        Ok(Moduli { g, n })
    }

    /// Basis completeness (and hence the test-curve method) is only known for g >= 3.
    pub fn require_basis_complete(self) -> Result<Self> {
        if self.g < 3 {
            return Err(Error::Signature {
                g: self.g,
                n: self.n,
                reason: "the divisor basis and test curves are only complete for g >= 3",
            });
        }
        Ok(self)
    }

    pub fn all_points(self) -> PointSet {
        PointSet::full(self.n)
    }
}

/// A subset of the markings `{1..n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PointSet(u32);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn full(n: usize) -> Self {
        PointSet(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Self {
        PointSet(1 << (i - 1))
    }

    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0u32;
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::MarkingOutOfRange { index: i, n });
            }
            bits |= 1 << (i - 1);
        }
        Ok(PointSet(bits))
    }

    pub fn from_bits(bits: u32) -> Self {
        PointSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=32).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn with(self, i: usize) -> Self {
        PointSet(self.0 | (1 << (i - 1)))
    }

    pub fn complement(self, n: usize) -> Self {
        PointSet(!self.0 & PointSet::full(n).0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Marking indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..=32).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `{1..n}`.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = PointSet> {
        (0..(1u64 << n)).map(|b| PointSet(b as u32))
    }

    /// All subsets of `self`.
    pub fn subsets(self) -> impl Iterator<Item = PointSet> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let current = next?;
            next = if current == mask { None } else { Some((current.wrapping_sub(mask)) & mask) };
            Some(PointSet(current))
        })
    }

    pub fn permuted(self, sigma: &Permutation) -> Self {
        PointSet(self.iter().fold(0, |acc, i| acc | (1 << (sigma.image(i) - 1))))
    }

    /// Lexicographic comparison of the increasing index lists.
    pub fn cmp_lex(self, other: PointSet) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Canonical representative `(h, P)` of a boundary class.
///
/// Canonical means `h <= g - h`, and when `h = g - h` the set `P` contains
/// marking 1. A class with an `h = 0` representative is therefore always
/// stored with `h = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundaryIndex {
    h: usize,
    points: PointSet,
}

impl BoundaryIndex {
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn points(&self) -> PointSet {
        self.points
    }

    /// The other representative `(g - h, P^c)`.
    pub fn mirror(&self, m: Moduli) -> (usize, PointSet) {
        (m.g - self.h, self.points.complement(m.n))
    }

    /// Both representatives, canonical one first. They coincide only when
    /// `g = 2h` and `P = P^c`, which cannot happen for `n >= 1`.
    pub fn representatives(&self, m: Moduli) -> [(usize, PointSet); 2] {
        [(self.h, self.points), self.mirror(m)]
    }

    pub fn permuted(&self, sigma: &Permutation, m: Moduli) -> BoundaryIndex {
        canonicalize(self.h, self.points.permuted(sigma), m)
            .expect("permutation preserves stability")
    }
}

impl Ord for BoundaryIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.h
            .cmp(&other.h)
            .then(self.points.len().cmp(&other.points.len()))
            .then(self.points.cmp_lex(other.points))
    }
}

impl PartialOrd for BoundaryIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BoundaryIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "delta_{}_{}", self.h, self.points)
    }
}

/// Is the representative `(h, P)` a stable two-component degeneration?
pub fn is_stable(h: usize, points: PointSet, m: Moduli) -> bool {
    if h > m.g || !points.is_subset(m.all_points()) {
        return false;
    }
    let rational_side_ok = |genus: usize, count: usize| genus > 0 || count >= 2;
    rational_side_ok(h, points.len()) && rational_side_ok(m.g - h, m.n - points.len())
}

/// Maps `(h, P)` and `(g - h, P^c)` to the same canonical [`BoundaryIndex`].
pub fn canonicalize(h: usize, points: PointSet, m: Moduli) -> Result<BoundaryIndex> {
    if h > m.g {
        return Err(Error::GenusOutOfRange { h, g: m.g });
    }
    if let Some(i) = points.iter().find(|&i| i > m.n) {
        return Err(Error::MarkingOutOfRange { index: i, n: m.n });
    }
    if !is_stable(h, points, m) {
        return Err(Error::UnstableBoundary { h, points: points.to_string() });
    }
    let mirror = (m.g - h, points.complement(m.n));
    let (h, points) = match h.cmp(&(m.g - h)) {
        Ordering::Less => (h, points),
        Ordering::Greater => mirror,
        Ordering::Equal if points.contains(1) => (h, points),
        Ordering::Equal => mirror,
    };
    Ok(BoundaryIndex { h, points })
}

/// Every boundary class of `M̄_{g,n}` exactly once, ordered by `h`, then `|P|`,
/// then lexicographically by `P`.
pub fn enumerate_boundary(m: Moduli) -> Vec<BoundaryIndex> {
    let mut out: Vec<BoundaryIndex> = (0..=m.g / 2)
        .flat_map(|h| PointSet::all_subsets(m.n).map(move |p| (h, p)))
        .filter(|&(h, p)| is_stable(h, p, m))
        .filter(|&(h, p)| 2 * h != m.g || p.contains(1))
        .map(|(h, points)| BoundaryIndex { h, points })
        .collect();
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivGenerator {
    Lambda1,
    DeltaIrr,
    /// `K_i`, 1-based.
    K(usize),
    Delta(BoundaryIndex),
}

impl DivGenerator {
    pub fn label(&self) -> String {
        match self {
            DivGenerator::Lambda1 => "lambda1".to_string(),
            DivGenerator::DeltaIrr => "delta_irr".to_string(),
            DivGenerator::K(i) => format!("K_{i}"),
            DivGenerator::Delta(b) => b.to_string(),
        }
    }

    /// Inverse of [`DivGenerator::label`]. Boundary labels may use either
    /// representative; the result is canonical.
    pub fn parse(label: &str, m: Moduli) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown generator label {label:?}"));
        match label {
            "lambda1" => return Ok(DivGenerator::Lambda1),
            "delta_irr" => return Ok(DivGenerator::DeltaIrr),
            _ => {}
        }
        if let Some(i) = label.strip_prefix("K_") {
            let i: usize = i.parse().map_err(|_| bad())?;
            if i == 0 || i > m.n {
                return Err(Error::MarkingOutOfRange { index: i, n: m.n });
            }
            return Ok(DivGenerator::K(i));
        }
        let rest = label.strip_prefix("delta_").ok_or_else(bad)?;
        let (h, set) = rest.split_once('_').ok_or_else(bad)?;
        let h: usize = h.parse().map_err(|_| bad())?;
        let inner = set.strip_prefix('{').and_then(|s| s.strip_suffix('}')).ok_or_else(bad)?;
        let indices = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        let points = PointSet::from_indices(&indices, m.n)?;
        Ok(DivGenerator::Delta(canonicalize(h, points, m)?))
    }

    pub fn permuted(&self, sigma: &Permutation, m: Moduli) -> DivGenerator {
        match *self {
            DivGenerator::K(i) => DivGenerator::K(sigma.image(i)),
            DivGenerator::Delta(b) => DivGenerator::Delta(b.permuted(sigma, m)),
            other => other,
        }
    }
}

impl fmt::Display for DivGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The ordered generator list of `Pic_Q(M̄_{g,n})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    moduli: Moduli,
    boundary: Vec<BoundaryIndex>,
    boundary_pos: HashMap<BoundaryIndex, usize>,
}

impl Basis {
    pub fn new(m: Moduli) -> Arc<Basis> {
        let boundary = enumerate_boundary(m);
        let boundary_pos = boundary.iter().enumerate().map(|(k, b)| (*b, k)).collect();
        Arc::new(Basis { moduli: m, boundary, boundary_pos })
    }

    pub fn for_signature(g: usize, n: usize) -> Result<Arc<Basis>> {
        Ok(Basis::new(Moduli::new(g, n)?))
    }

    pub fn moduli(&self) -> Moduli {
        self.moduli
    }

    pub fn boundary(&self) -> &[BoundaryIndex] {
        &self.boundary
    }

    pub fn len(&self) -> usize {
        2 + self.moduli.n + self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn generator(&self, index: usize) -> DivGenerator {
        let n = self.moduli.n;
        match index {
            0 => DivGenerator::Lambda1,
            1 => DivGenerator::DeltaIrr,
            k if k < 2 + n => DivGenerator::K(k - 1),
            k => DivGenerator::Delta(self.boundary[k - 2 - n]),
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = DivGenerator> + '_ {
        (0..self.len()).map(|k| self.generator(k))
    }

    pub fn position(&self, gen: &DivGenerator) -> Option<usize> {
        let n = self.moduli.n;
        match gen {
            DivGenerator::Lambda1 => Some(0),
            DivGenerator::DeltaIrr => Some(1),
            DivGenerator::K(i) if (1..=n).contains(i) => Some(1 + i),
            DivGenerator::K(_) => None,
            DivGenerator::Delta(b) => self.boundary_pos.get(b).map(|k| 2 + n + k),
        }
    }

    pub fn boundary_position(&self, b: &BoundaryIndex) -> usize {
        2 + self.moduli.n + self.boundary_pos[b]
    }
}

/// A permutation `σ` of the markings `{1..n}`, stored as its images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &i in &images {
            if i == 0 || i > n || seen[i] {
                return Err(Error::InvalidPermutation(n));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// All `n!` permutations in lexicographic order of their image lists.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        let mut used = vec![false; n + 1];
        fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if current.len() == n {
                out.push(Permutation { images: current.clone() });
                return;
            }
            for i in 1..=n {
                if !used[i] {
                    used[i] = true;
                    current.push(i);
                    rec(n, current, used, out);
                    current.pop();
                    used[i] = false;
                }
            }
        }
        rec(n, &mut current, &mut used, &mut out);
        out
    }
}

/// An element of `Pic_Q(M̄_{g,n})`, as a coefficient vector over [`Basis`].
#[derive(Debug, Clone)]
pub struct DivisorClass {
    basis: Arc<Basis>,
    coeffs: Vec<Rational>,
}

impl PartialEq for DivisorClass {
    fn eq(&self, other: &Self) -> bool {
        self.basis.moduli == other.basis.moduli && self.coeffs == other.coeffs
    }
}

impl Eq for DivisorClass {}

impl DivisorClass {
    pub fn zero(basis: &Arc<Basis>) -> Self {
        DivisorClass { basis: Arc::clone(basis), coeffs: vec![Rational::zero(); basis.len()] }
    }

    pub fn generator(basis: &Arc<Basis>, gen: DivGenerator) -> Result<Self> {
        let mut class = Self::zero(basis);
        class.set(gen, Rational::one())?;
        Ok(class)
    }

    pub fn from_coeffs(basis: &Arc<Basis>, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a basis of size {}",
                coeffs.len(),
                basis.len()
            )));
        }
        Ok(DivisorClass { basis: Arc::clone(basis), coeffs })
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn moduli(&self) -> Moduli {
        self.basis.moduli
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, gen: &DivGenerator) -> Rational {
        self.basis.position(gen).map(|k| self.coeffs[k].clone()).unwrap_or_else(Rational::zero)
    }

    pub fn lambda1(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn delta_irr(&self) -> &Rational {
        &self.coeffs[1]
    }

    fn slot(&mut self, gen: DivGenerator) -> Result<&mut Rational> {
        let k = self
            .basis
            .position(&gen)
            .ok_or_else(|| Error::Parse(format!("{gen} is not a generator here")))?;
        Ok(&mut self.coeffs[k])
    }

    pub fn set(&mut self, gen: DivGenerator, value: Rational) -> Result<()> {
        *self.slot(gen)? = value;
        Ok(())
    }

    pub fn add_to(&mut self, gen: DivGenerator, value: &Rational) -> Result<()> {
        *self.slot(gen)? += value;
        Ok(())
    }

    /// Adds `value` to a boundary class given by any representative.
    pub fn add_boundary(&mut self, h: usize, points: PointSet, value: &Rational) -> Result<()> {
        let b = canonicalize(h, points, self.moduli())?;
        self.add_to(DivGenerator::Delta(b), value)
    }

    /// Nonzero `(generator, coefficient)` pairs in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (DivGenerator, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.basis.generator(k), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &DivisorClass) -> Result<()> {
        let (a, b) = (self.moduli(), other.moduli());
        if a != b {
            return Err(Error::SignatureMismatch { left_g: a.g, left_n: a.n, right_g: b.g, right_n: b.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(DivisorClass { basis: Arc::clone(&self.basis), coeffs })
    }

    pub fn sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(DivisorClass { basis: Arc::clone(&self.basis), coeffs })
    }

    pub fn scale(&self, c: &Rational) -> DivisorClass {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        DivisorClass { basis: Arc::clone(&self.basis), coeffs }
    }

    /// The class `σ·D`: `K_i ↦ K_{σ(i)}`, `δ_h^P ↦ δ_h^{σ(P)}`.
    pub fn permuted(&self, sigma: &Permutation) -> Result<DivisorClass> {
        let m = self.moduli();
        if sigma.len() != m.n {
            return Err(Error::InvalidPermutation(m.n));
        }
        let mut out = DivisorClass::zero(&self.basis);
        for (gen, c) in self.terms() {
            out.set(gen.permuted(sigma, m), c.clone())?;
        }
        Ok(out)
    }

    /// Σ coeff · value over the nonzero terms. Every generator with a nonzero
    /// coefficient must be assigned.
    pub fn evaluate(&self, assignment: &BTreeMap<DivGenerator, Rational>) -> Result<Rational> {
        self.terms().try_fold(Rational::zero(), |acc, (gen, c)| {
            let v = assignment.get(&gen).ok_or_else(|| Error::MissingAssignment(gen.label()))?;
            Ok(acc + c * v)
        })
    }

    /// Rewrites the class over the basis with `ψ_i` in place of `K_i`.
    pub fn to_psi_form(&self) -> PsiForm {
        let m = self.moduli();
        let mut coeffs = self.coeffs.clone();
        for b in self.basis.boundary().iter().filter(|b| b.h() == 0) {
            let shift: Rational = b.points().iter().map(|i| &self.coeffs[1 + i]).sum();
            coeffs[self.basis.boundary_position(b)] -= shift;
        }
        debug_assert_eq!(coeffs.len(), 2 + m.n + self.basis.boundary().len());
        PsiForm { basis: Arc::clone(&self.basis), coeffs }
    }

    pub fn to_json(&self) -> ClassJson {
        let m = self.moduli();
        let n = m.n;
        ClassJson {
            g: m.g,
            n,
            coeffs: CoeffsJson {
                lambda1: rational::to_string(&self.coeffs[0]),
                delta_irr: rational::to_string(&self.coeffs[1]),
                k: self.coeffs[2..2 + n].iter().map(rational::to_string).collect(),
                boundary: self
                    .basis
                    .boundary()
                    .iter()
                    .zip(&self.coeffs[2 + n..])
                    .map(|(b, c)| BoundaryJson { h: b.h(), points: b.points().to_vec(), c: rational::to_string(c) })
                    .collect(),
            },
        }
    }

    /// Reads the class JSON schema. Boundary entries may use either
    /// representative, but each class may appear only once.
    pub fn from_json(json: &ClassJson) -> Result<DivisorClass> {
        let basis = Basis::for_signature(json.g, json.n)?;
        let m = basis.moduli();
        if json.coeffs.k.len() != m.n {
            return Err(Error::Parse(format!("expected {} K coefficients, got {}", m.n, json.coeffs.k.len())));
        }
        let mut class = DivisorClass::zero(&basis);
        class.coeffs[0] = rational::parse(&json.coeffs.lambda1)?;
        class.coeffs[1] = rational::parse(&json.coeffs.delta_irr)?;
        for (i, c) in json.coeffs.k.iter().enumerate() {
            class.coeffs[2 + i] = rational::parse(c)?;
        }
        let mut seen = vec![false; basis.boundary().len()];
        for entry in &json.coeffs.boundary {
            let b = canonicalize(entry.h, PointSet::from_indices(&entry.points, m.n)?, m)?;
            let k = basis.boundary_position(&b);
            if std::mem::replace(&mut seen[k - 2 - m.n], true) {
                return Err(Error::Parse(format!("boundary class {b} listed twice")));
            }
            class.coeffs[k] = rational::parse(&entry.c)?;
        }
        Ok(class)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (gen, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{gen}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A class written over `λ₁, δ_irr, ψ_1..ψ_n, δ_h^P…`; the `K(i)` slots hold
/// the `ψ_i` coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiForm {
    basis: Arc<Basis>,
    coeffs: Vec<Rational>,
}

impl PsiForm {
    pub fn psi(basis: &Arc<Basis>, i: usize) -> Result<PsiForm> {
        let m = basis.moduli();
        if i == 0 || i > m.n {
            return Err(Error::MarkingOutOfRange { index: i, n: m.n });
        }
        let mut coeffs = vec![Rational::zero(); basis.len()];
        coeffs[1 + i] = Rational::one();
        Ok(PsiForm { basis: Arc::clone(basis), coeffs })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Back to the `K` basis via `ψ_i = K_i + Σ_{P ∋ i, |P| >= 2} δ_0^P`.
    pub fn to_k_form(&self) -> DivisorClass {
        let n = self.basis.moduli().n;
        let mut class = DivisorClass { basis: Arc::clone(&self.basis), coeffs: self.coeffs.clone() };
        for i in 1..=n {
            let a = &self.coeffs[1 + i];
            if a.is_zero() {
                continue;
            }
            for b in self.basis.boundary().iter().filter(|b| b.h() == 0 && b.points().contains(i)) {
                class.coeffs[self.basis.boundary_position(b)] += a;
            }
        }
        class
    }
}

/// `ψ_i` expressed in the `K` basis: `K_i + Σ_{P ∋ i, |P| >= 2} δ_0^P`.
pub fn psi_in_k_basis(i: usize, basis: &Arc<Basis>) -> Result<DivisorClass> {
    let m = basis.moduli();
    if i == 0 || i > m.n {
        return Err(Error::MarkingOutOfRange { index: i, n: m.n });
    }
    let mut class = DivisorClass::generator(basis, DivGenerator::K(i))?;
    for p in PointSet::all_subsets(m.n).filter(|p| p.contains(i) && p.len() >= 2) {
        class.add_boundary(0, p, &Rational::one())?;
    }
    Ok(class)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub g: usize,
    pub n: usize,
    pub coeffs: CoeffsJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffsJson {
    pub lambda1: String,
    pub delta_irr: String,
    #[serde(rename = "K")]
    pub k: Vec<String>,
    pub boundary: Vec<BoundaryJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryJson {
    pub h: usize,
    #[serde(rename = "P")]
    pub points: Vec<usize>,
    pub c: String,
}
