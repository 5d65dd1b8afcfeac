//! Period witnesses: signed complex combinations of semi-algebraic domains
//! with a tracked upper bound on the period's degree.
//!
//! A witness holds four buckets of cells; its value is
//! `vol(re_pos) - vol(re_neg) + i*(vol(im_pos) - vol(im_neg))`. The formal
//! differences are what make the represented set of numbers a ring even
//! though single volumes are non-negative.
//!
//! Degree bounds are upper bounds only, never exact degrees. They come from
//! three sources, recorded as provenance: the dimension of an explicit
//! construction, the arithmetic laws
//! `deg(p1*p2) <= deg(p1) + deg(p2)` and `deg(p1+p2) <= max(deg(p1), deg(p2))`,
//! and a registry of sharp low-dimensional constructions (`pi*log(2)` and
//! `pi^2` both fit in three dimensions). Adding or multiplying by a non-zero
//! algebraic number never raises the bound of the other operand, so each
//! witness also carries an exact algebraic value whenever one is certifiable;
//! a bound of 1 is assigned exactly to the certified non-zero algebraic
//! witnesses and 0 to certified zeros.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactnum::{bernoulli, ComplexSurdSum, Rational, SurdSum};
use crate::semialg::{BoundingBox, Cell, Domain, Inequality, Polynomial};

/// Largest exponent accepted by `pow` and the even zeta builtins.
pub const MAX_POWER: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exponent {got} exceeds the supported maximum {MAX_POWER}")]
    PowerTooLarge { got: u32 },
}

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

/// Atomic non-rational factors that can appear in a signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    Pi,
    /// log(q) for a rational q > 1.
    Log(Rational),
    /// sqrt(d) for a square-free d > 1.
    Sqrt(u64),
}

impl Atom {
    /// Dimension of the atom's explicit construction.
    fn dimension_bound(&self) -> u32 {
        match self {
            Atom::Pi | Atom::Log(_) => 2,
            Atom::Sqrt(_) => 1,
        }
    }

    fn is_algebraic(&self) -> bool {
        matches!(self, Atom::Sqrt(_))
    }

    fn witness(&self) -> PeriodWitness {
        match self {
            Atom::Pi => PeriodWitness::pi(),
            Atom::Log(q) => PeriodWitness::log(q.clone()).expect("registry log argument > 1"),
            Atom::Sqrt(d) => PeriodWitness::make_sqrt(*d).expect("registry radicand >= 1"),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Pi => write!(f, "pi"),
            Atom::Log(q) => write!(f, "log({q})"),
            Atom::Sqrt(d) => write!(f, "sqrt({d})"),
        }
    }
}

/// Multiset of atoms: atom -> multiplicity.
pub type AtomSet = BTreeMap<Atom, u32>;

/// Structural part of a signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum SigCore {
    /// Pure scalar.
    One,
    /// Product of atoms with multiplicities.
    Atoms(AtomSet),
    /// Sum of canonical terms, sorted.
    Sum(Vec<Signature>),
    /// Product with at least one non-atomic factor, sorted.
    Product(Vec<SigCore>),
}

/// Canonical commutative-normal-form tag for a witness: a Gaussian-rational
/// scalar times a core. Registry lookups key on `Atoms` cores, so
/// `mul(pi, log(2))` and the explicit three-dimensional construction share
/// one signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Signature {
    core: SigCore,
    scalar_re: Rational,
    scalar_im: Rational,
}

impl Signature {
    fn zero() -> Self {
        Signature {
            core: SigCore::One,
            scalar_re: Rational::zero(),
            scalar_im: Rational::zero(),
        }
    }

    fn rational(q: Rational) -> Self {
        Signature {
            core: SigCore::One,
            scalar_re: q,
            scalar_im: Rational::zero(),
        }
    }

    fn atom(a: Atom) -> Self {
        let mut atoms = AtomSet::new();
        atoms.insert(a, 1);
        Signature {
            core: SigCore::Atoms(atoms),
            scalar_re: Rational::one(),
            scalar_im: Rational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.scalar_re.is_zero() && self.scalar_im.is_zero()
    }

    /// Atom multiset when the core is a pure product of atoms.
    pub(crate) fn atoms(&self) -> Option<&AtomSet> {
        match &self.core {
            SigCore::Atoms(a) => Some(a),
            _ => None,
        }
    }

    fn scale(&self, re: &Rational, im: &Rational) -> Signature {
        let new_re = &(&self.scalar_re * re) - &(&self.scalar_im * im);
        let new_im = &(&self.scalar_re * im) + &(&self.scalar_im * re);
        if new_re.is_zero() && new_im.is_zero() {
            return Signature::zero();
        }
        Signature {
            core: self.core.clone(),
            scalar_re: new_re,
            scalar_im: new_im,
        }
    }

    fn neg(&self) -> Signature {
        self.scale(&-Rational::one(), &Rational::zero())
    }

    fn mul(&self, rhs: &Signature) -> Signature {
        if self.is_zero() || rhs.is_zero() {
            return Signature::zero();
        }
        let re = &(&self.scalar_re * &rhs.scalar_re) - &(&self.scalar_im * &rhs.scalar_im);
        let im = &(&self.scalar_re * &rhs.scalar_im) + &(&self.scalar_im * &rhs.scalar_re);
        let core = match (&self.core, &rhs.core) {
            (SigCore::One, c) | (c, SigCore::One) => c.clone(),
            (SigCore::Atoms(a), SigCore::Atoms(b)) => {
                let mut merged = a.clone();
                for (atom, count) in b {
                    *merged.entry(atom.clone()).or_insert(0) += count;
                }
                SigCore::Atoms(merged)
            }
            (a, b) => {
                let mut factors = Vec::new();
                let mut push = |c: &SigCore| match c {
                    SigCore::Product(v) => factors.extend(v.iter().cloned()),
                    other => factors.push(other.clone()),
                };
                push(a);
                push(b);
                factors.sort();
                SigCore::Product(factors)
            }
        };
        Signature {
            core,
            scalar_re: re,
            scalar_im: im,
        }
    }

    fn add(&self, rhs: &Signature) -> Signature {
        let mut terms = Vec::new();
        let mut push = |s: &Signature| {
            if s.is_zero() {
                return;
            }
            match &s.core {
                SigCore::Sum(inner) => {
                    for t in inner {
                        let scaled = t.scale(&s.scalar_re, &s.scalar_im);
                        if !scaled.is_zero() {
                            terms.push(scaled);
                        }
                    }
                }
                _ => terms.push(s.clone()),
            }
        };
        push(self);
        push(rhs);
        match terms.len() {
            0 => Signature::zero(),
            1 => terms.pop().expect("one term"),
            _ => {
                terms.sort();
                Signature {
                    core: SigCore::Sum(terms),
                    scalar_re: Rational::one(),
                    scalar_im: Rational::zero(),
                }
            }
        }
    }

    fn scalar_string(&self) -> Option<String> {
        let re = &self.scalar_re;
        let im = &self.scalar_im;
        if im.is_zero() {
            if re.is_one() {
                None
            } else {
                Some(re.to_string())
            }
        } else if re.is_zero() {
            if im.is_one() {
                Some("i".to_string())
            } else {
                Some(format!("{im}i"))
            }
        } else {
            Some(format!("({re}+{im}i)"))
        }
    }
}

impl fmt::Display for SigCore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigCore::One => write!(f, "1"),
            SigCore::Atoms(atoms) => {
                let parts: Vec<String> = atoms
                    .iter()
                    .map(|(a, n)| {
                        if *n == 1 {
                            a.to_string()
                        } else {
                            format!("{a}^{n}")
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join("*"))
            }
            SigCore::Sum(terms) => {
                let parts: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            SigCore::Product(factors) => {
                let parts: Vec<String> = factors.iter().map(|c| format!("({c})")).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        match (&self.core, self.scalar_string()) {
            (SigCore::One, None) => write!(f, "1"),
            (SigCore::One, Some(s)) => write!(f, "{s}"),
            (core, None) => write!(f, "{core}"),
            (core, Some(s)) => write!(f, "{s}*{core}"),
        }
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

// ---------------------------------------------------------------------------
// Degree bounds
// ---------------------------------------------------------------------------

/// A degree-bound value: finite or infinite. Every witness this crate
/// constructs carries a finite bound; the infinite value exists for numbers
/// asserted to be non-periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BoundValue {
    Finite(u32),
    Infinite,
}

impl BoundValue {
    pub fn plus(self, rhs: BoundValue) -> BoundValue {
        match (self, rhs) {
            (BoundValue::Finite(a), BoundValue::Finite(b)) => {
                BoundValue::Finite(a.saturating_add(b))
            }
            _ => BoundValue::Infinite,
        }
    }

    pub fn times(self, k: u32) -> BoundValue {
        match self {
            BoundValue::Finite(a) => BoundValue::Finite(a.saturating_mul(k)),
            BoundValue::Infinite => BoundValue::Infinite,
        }
    }

    pub fn as_finite(self) -> Option<u32> {
        match self {
            BoundValue::Finite(v) => Some(v),
            BoundValue::Infinite => None,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Finite(v) => write!(f, "{v}"),
            BoundValue::Infinite => write!(f, "infinity"),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            BoundValue::Finite(v) => serializer.serialize_u32(*v),
            BoundValue::Infinite => serializer.serialize_str("infinity"),
        }
    }
}

/// Where a bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Dimension of an explicit construction.
    Dimension,
    /// A registry override (sharp example) applied.
    Registry,
    /// Combined from operand bounds by the degree laws.
    Arithmetic,
}

/// Upper bound on a witness's degree, with provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub value: BoundValue,
    pub provenance: Provenance,
}

impl DegreeBound {
    fn dimension(v: u32) -> Self {
        DegreeBound {
            value: BoundValue::Finite(v),
            provenance: Provenance::Dimension,
        }
    }

    fn arithmetic(v: BoundValue) -> Self {
        DegreeBound {
            value: v,
            provenance: Provenance::Arithmetic,
        }
    }

    fn registry(v: u32) -> Self {
        DegreeBound {
            value: BoundValue::Finite(v),
            provenance: Provenance::Registry,
        }
    }
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// A sharp example: an explicit construction beating the arithmetic bound.
pub struct RegistryEntry {
    pub atoms: AtomSet,
    pub bound: u32,
    builder: fn() -> PeriodWitness,
}

/// Bound improvements keyed by canonical product signatures. Read-only
/// after startup.
pub struct Registry {
    entries: Vec<RegistryEntry>,
}

impl Registry {
    /// The built-in registry: `pi*log(2) <= 3` and `pi^2 <= 3`.
    pub fn standard() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(|| {
            let mut pi_log2 = AtomSet::new();
            pi_log2.insert(Atom::Pi, 1);
            pi_log2.insert(Atom::Log(Rational::from_int(2)), 1);
            let mut pi_sq = AtomSet::new();
            pi_sq.insert(Atom::Pi, 2);
            Registry {
                entries: vec![
                    RegistryEntry {
                        atoms: pi_log2,
                        bound: 3,
                        builder: || {
                            PeriodWitness::pi_log2()
                        },
                    },
                    RegistryEntry {
                        atoms: pi_sq,
                        bound: 3,
                        builder: || {
                            PeriodWitness::pi_squared()
                        },
                    },
                ],
            }
        })
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    /// Bound for exactly this atom multiset, if registered.
    pub fn lookup_exact(&self, atoms: &AtomSet) -> Option<&RegistryEntry> {
        self.entries.iter().find(|e| &e.atoms == atoms)
    }
}

// ---------------------------------------------------------------------------
// Witnesses
// ---------------------------------------------------------------------------

/// An explicit period: four signed buckets of cells, a canonical signature,
/// a degree-bound ledger, and (when certifiable) the exact algebraic value.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodWitness {
    re_pos: Domain,
    re_neg: Domain,
    im_pos: Domain,
    im_neg: Domain,
    signature: Signature,
    bound: DegreeBound,
    exact: Option<ComplexSurdSum>,
}

impl PeriodWitness {
    pub fn re_pos(&self) -> &Domain {
        &self.re_pos
    }
    pub fn re_neg(&self) -> &Domain {
        &self.re_neg
    }
    pub fn im_pos(&self) -> &Domain {
        &self.im_pos
    }
    pub fn im_neg(&self) -> &Domain {
        &self.im_neg
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn bound(&self) -> DegreeBound {
        self.bound
    }

    /// Exact value, when the witness is certifiably algebraic.
    pub fn exact_value(&self) -> Option<&ComplexSurdSum> {
        self.exact.as_ref()
    }

    /// Certified algebraic and non-zero (the Prop-3.4 shift hypothesis).
    pub fn is_algebraic_nonzero(&self) -> bool {
        self.exact.as_ref().is_some_and(|v| !v.is_zero())
    }

    /// Certified zero value.
    pub fn is_certified_zero(&self) -> bool {
        self.exact.as_ref().is_some_and(|v| v.is_zero())
    }

    pub fn max_cell_dim(&self) -> usize {
        self.re_pos
            .max_dim()
            .max(self.re_neg.max_dim())
            .max(self.im_pos.max_dim())
            .max(self.im_neg.max_dim())
    }

    /// Number of cells across the four buckets.
    pub fn total_cells(&self) -> usize {
        self.re_pos.cells().len()
            + self.re_neg.cells().len()
            + self.im_pos.cells().len()
            + self.im_neg.cells().len()
    }

    /// The zero witness: empty buckets, bound 0.
    pub fn zero() -> Self {
        PeriodWitness {
            re_pos: Domain::empty(),
            re_neg: Domain::empty(),
            im_pos: Domain::empty(),
            im_neg: Domain::empty(),
            signature: Signature::zero(),
            bound: DegreeBound::dimension(0),
            exact: Some(ComplexSurdSum::zero()),
        }
    }

    /// Witness for a rational number: the interval [0, |q|] on the
    /// appropriate side, bound 1 (or the zero witness for q = 0).
    pub fn make_algebraic(q: Rational) -> Self {
        if q.is_zero() {
            return PeriodWitness::zero();
        }
        let cell = Cell::from_box(
            BoundingBox::new(vec![(Rational::zero(), q.abs())]).expect("|q| > 0"),
        )
        .expect("1-dimensional box cell");
        let (re_pos, re_neg) = if q.is_positive() {
            (Domain::singleton(cell), Domain::empty())
        } else {
            (Domain::empty(), Domain::singleton(cell))
        };
        PeriodWitness {
            re_pos,
            re_neg,
            im_pos: Domain::empty(),
            im_neg: Domain::empty(),
            signature: Signature::rational(q.clone()),
            bound: DegreeBound::dimension(1),
            exact: Some(ComplexSurdSum::from_rational(q)),
        }
    }

    /// Witness of value sqrt(n): the cell {x >= 0, n - x^2 >= 0}, bound 1.
    pub fn make_sqrt(n: u64) -> Result<Self, WitnessError> {
        if n == 0 || n > (1 << 40) {
            return Err(WitnessError::InvalidParameter(format!(
                "sqrt argument must be a positive integer up to 2^40, got {n}"
            )));
        }
        let x = Polynomial::var(1, 0);
        let constraint = Polynomial::constant(1, Rational::from_int(n as i64)).sub(&x.mul(&x));
        // Smallest integer upper end covering sqrt(n).
        let hi = {
            let mut s = (n as f64).sqrt() as u64;
            while s * s > n {
                s -= 1;
            }
            while (s + 1) * (s + 1) <= n {
                s += 1;
            }
            if s * s == n {
                s
            } else {
                s + 1
            }
        };
        let cell = Cell::new(
            vec![
                Inequality::non_negative(x),
                Inequality::non_negative(constraint),
            ],
            BoundingBox::from_ints(&[(0, hi as i64)]),
        )
        .expect("1-dimensional sqrt cell");
        let value = SurdSum::sqrt_of_int(n)
            .map_err(|e| WitnessError::InvalidParameter(format!("sqrt({n}): {e}")))?;
        let (square, d) = crate::exactnum::squarefree_decompose(&num_bigint::BigInt::from(n))
            .map_err(|e| WitnessError::InvalidParameter(format!("sqrt({n}): {e}")))?;
        let square = Rational::from(square);
        let signature = if d <= 1 {
            Signature::rational(square)
        } else {
            Signature::atom(Atom::Sqrt(d)).scale(&square, &Rational::zero())
        };
        Ok(PeriodWitness {
            re_pos: Domain::singleton(cell),
            re_neg: Domain::empty(),
            im_pos: Domain::empty(),
            im_neg: Domain::empty(),
            signature,
            bound: DegreeBound::dimension(1),
            exact: Some(ComplexSurdSum::real(value)),
        })
    }

    /// The unit disk: value pi, bound 2.
    pub fn pi() -> Self {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let disk = Polynomial::constant(2, Rational::one()).sub(&x.mul(&x).add(&y.mul(&y)));
        let cell = Cell::new(
            vec![Inequality::non_negative(disk)],
            BoundingBox::from_ints(&[(-1, 1), (-1, 1)]),
        )
        .expect("disk cell");
        PeriodWitness {
            re_pos: Domain::singleton(cell),
            re_neg: Domain::empty(),
            im_pos: Domain::empty(),
            im_neg: Domain::empty(),
            signature: Signature::atom(Atom::Pi),
            bound: DegreeBound::dimension(2),
            exact: None,
        }
    }

    /// The region {1 <= x <= q, x*y <= 1, y >= 0}: value log(q), bound 2.
    /// Requires q > 1.
    pub fn log(q: Rational) -> Result<Self, WitnessError> {
        if q <= Rational::one() {
            return Err(WitnessError::InvalidParameter(format!(
                "log argument must be a rational > 1, got {q}"
            )));
        }
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let one = Polynomial::constant(2, Rational::one());
        let qpoly = Polynomial::constant(2, q.clone());
        let cell = Cell::new(
            vec![
                Inequality::le(one.clone(), x.clone()),
                Inequality::le(x.clone(), qpoly),
                Inequality::non_negative(y.clone()),
                Inequality::le(x.mul(&y), one),
            ],
            BoundingBox::new(vec![
                (Rational::one(), q.clone()),
                (Rational::zero(), Rational::one()),
            ])
            .expect("log box"),
        )
        .expect("log cell");
        Ok(PeriodWitness {
            re_pos: Domain::singleton(cell),
            re_neg: Domain::empty(),
            im_pos: Domain::empty(),
            im_neg: Domain::empty(),
            signature: Signature::atom(Atom::Log(q)),
            bound: DegreeBound::dimension(2),
            exact: None,
        })
    }

    /// The three-dimensional cell {x^2+y^2 <= 1, 0 <= z*(x^2+y^2+1) <= 1}
    /// of volume pi*log(2); the sharp example behind the registry bound 3.
    pub fn pi_log2() -> Self {
        let x = Polynomial::var(3, 0);
        let y = Polynomial::var(3, 1);
        let z = Polynomial::var(3, 2);
        let r2 = x.mul(&x).add(&y.mul(&y));
        let one = Polynomial::constant(3, Rational::one());
        let inner = z.mul(&r2.add(&one));
        let cell = Cell::new(
            vec![
                Inequality::le(r2, one.clone()),
                Inequality::non_negative(inner.clone()),
                Inequality::le(inner, one),
            ],
            BoundingBox::from_ints(&[(-1, 1), (-1, 1), (0, 1)]),
        )
        .expect("pi*log2 cell");
        let mut atoms = AtomSet::new();
        atoms.insert(Atom::Pi, 1);
        atoms.insert(Atom::Log(Rational::from_int(2)), 1);
        PeriodWitness {
            re_pos: Domain::singleton(cell),
            re_neg: Domain::empty(),
            im_pos: Domain::empty(),
            im_neg: Domain::empty(),
            signature: Signature {
                core: SigCore::Atoms(atoms),
                scalar_re: Rational::one(),
                scalar_im: Rational::zero(),
            },
            bound: DegreeBound::dimension(3),
            exact: None,
        }
    }

    /// The three-dimensional cell {x^2+y^2 <= 1, 0 <= z*((x^2+y^2)^2+1) <= 4}
    /// of volume pi^2; the other sharp registry example.
    pub fn pi_squared() -> Self {
        let x = Polynomial::var(3, 0);
        let y = Polynomial::var(3, 1);
        let z = Polynomial::var(3, 2);
        let r2 = x.mul(&x).add(&y.mul(&y));
        let one = Polynomial::constant(3, Rational::one());
        let four = Polynomial::constant(3, Rational::from_int(4));
        let inner = z.mul(&r2.mul(&r2).add(&one));
        let cell = Cell::new(
            vec![
                Inequality::le(r2, one),
                Inequality::non_negative(inner.clone()),
                Inequality::le(inner, four),
            ],
            BoundingBox::from_ints(&[(-1, 1), (-1, 1), (0, 4)]),
        )
        .expect("pi^2 cell");
        let mut atoms = AtomSet::new();
        atoms.insert(Atom::Pi, 2);
        PeriodWitness {
            re_pos: Domain::singleton(cell),
            re_neg: Domain::empty(),
            im_pos: Domain::empty(),
            im_neg: Domain::empty(),
            signature: Signature {
                core: SigCore::Atoms(atoms),
                scalar_re: Rational::one(),
                scalar_im: Rational::zero(),
            },
            bound: DegreeBound::dimension(3),
            exact: None,
        }
    }

    /// zeta(2k) as `2^(2k-1) B_k / (2k)! * pi^(2k)`, built on the best
    /// available power witness for pi.
    pub fn zeta_even(arg: u32) -> Result<Self, WitnessError> {
        if arg < 2 || arg % 2 != 0 {
            return Err(WitnessError::InvalidParameter(format!(
                "zeta builtin takes a positive even integer, got {arg}"
            )));
        }
        if arg > MAX_POWER {
            return Err(WitnessError::PowerTooLarge { got: arg });
        }
        let k = arg / 2;
        let b = bernoulli(k).map_err(|e| WitnessError::InvalidParameter(e.to_string()))?;
        // 2^(2k-1) / (2k)!
        let mut factor = Rational::from_int(2).pow(arg as i32 - 1).expect("2^m");
        for i in 1..=arg as i64 {
            factor = &factor / &Rational::from_int(i);
        }
        factor = &factor * &b;
        let pi_power = PeriodWitness::pi().pow(arg)?;
        Ok(pi_power.scale(&factor, &Rational::zero()))
    }

    /// Builtin lookup by name, for the expression language.
    pub fn builtin(name: &str, params: &[Rational]) -> Result<Self, WitnessError> {
        let arity = |n: usize| -> Result<(), WitnessError> {
            if params.len() == n {
                Ok(())
            } else {
                Err(WitnessError::InvalidParameter(format!(
                    "`{name}` takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match name {
            "pi" => {
                arity(0)?;
                Ok(PeriodWitness::pi())
            }
            "pi_log2" => {
                arity(0)?;
                Ok(PeriodWitness::pi_log2())
            }
            "pi_squared" => {
                arity(0)?;
                Ok(PeriodWitness::pi_squared())
            }
            "log" => {
                arity(1)?;
                PeriodWitness::log(params[0].clone())
            }
            "sqrt" => {
                arity(1)?;
                let q = &params[0];
                if !q.is_integer() || !q.is_positive() {
                    return Err(WitnessError::InvalidParameter(format!(
                        "sqrt argument must be a positive integer, got {q}"
                    )));
                }
                let n = q
                    .numer()
                    .try_into()
                    .map_err(|_| WitnessError::InvalidParameter("sqrt argument too large".into()))?;
                PeriodWitness::make_sqrt(n)
            }
            "zeta" | "zeta_even" => {
                arity(1)?;
                let q = &params[0];
                if !q.is_integer() || !q.is_positive() {
                    return Err(WitnessError::InvalidParameter(format!(
                        "zeta argument must be a positive even integer, got {q}"
                    )));
                }
                let arg: u32 = q
                    .numer()
                    .try_into()
                    .map_err(|_| WitnessError::PowerTooLarge { got: u32::MAX })?;
                PeriodWitness::zeta_even(arg)
            }
            other => Err(WitnessError::UnknownBuiltin(other.to_string())),
        }
    }

    // -- ring operations ----------------------------------------------------

    /// Product witness: pairwise domain products routed by the complex sign
    /// rules; bound min(b1 + b2, registry, algebraic shift).
    pub fn mul(&self, rhs: &PeriodWitness) -> PeriodWitness {
        let re_pos = self
            .re_pos
            .product(&rhs.re_pos)
            .union(&self.re_neg.product(&rhs.re_neg))
            .union(&self.im_pos.product(&rhs.im_neg))
            .union(&self.im_neg.product(&rhs.im_pos));
        let re_neg = self
            .re_pos
            .product(&rhs.re_neg)
            .union(&self.re_neg.product(&rhs.re_pos))
            .union(&self.im_pos.product(&rhs.im_pos))
            .union(&self.im_neg.product(&rhs.im_neg));
        let im_pos = self
            .re_pos
            .product(&rhs.im_pos)
            .union(&self.re_neg.product(&rhs.im_neg))
            .union(&self.im_pos.product(&rhs.re_pos))
            .union(&self.im_neg.product(&rhs.re_neg));
        let im_neg = self
            .re_pos
            .product(&rhs.im_neg)
            .union(&self.re_neg.product(&rhs.im_pos))
            .union(&self.im_pos.product(&rhs.re_neg))
            .union(&self.im_neg.product(&rhs.re_pos));

        let signature = self.signature.mul(&rhs.signature);

        let exact = match (&self.exact, &rhs.exact) {
            (Some(a), Some(b)) => a.mul(b),
            (Some(a), None) if a.is_zero() => Some(ComplexSurdSum::zero()),
            (None, Some(b)) if b.is_zero() => Some(ComplexSurdSum::zero()),
            _ => None,
        };

        let bound = match &exact {
            Some(v) if v.is_zero() => DegreeBound::arithmetic(BoundValue::Finite(0)),
            Some(_) => DegreeBound::arithmetic(BoundValue::Finite(1)),
            None => {
                let mut best = DegreeBound::arithmetic(self.bound.value.plus(rhs.bound.value));
                // Multiplying by a non-zero algebraic number keeps the
                // other operand's bound.
                for (alg, other) in [(self, rhs), (rhs, self)] {
                    if alg.is_algebraic_nonzero()
                        && other.bound.value >= BoundValue::Finite(2)
                        && other.bound.value < best.value
                    {
                        best = DegreeBound::arithmetic(other.bound.value);
                    }
                }
                if let Some(atoms) = signature.atoms() {
                    if let Some(entry) = Registry::standard().lookup_exact(atoms) {
                        if BoundValue::Finite(entry.bound) <= best.value {
                            best = DegreeBound::registry(entry.bound);
                        }
                    }
                }
                best
            }
        };

        PeriodWitness {
            re_pos,
            re_neg,
            im_pos,
            im_neg,
            signature,
            bound,
            exact,
        }
    }

    /// Sum witness: bucket-wise multiset union; bound max(b1, b2), improved
    /// to the non-algebraic operand's bound when the other is certified
    /// algebraic non-zero, and to the exact value's degree when both are
    /// certified.
    pub fn add(&self, rhs: &PeriodWitness) -> PeriodWitness {
        let exact = match (&self.exact, &rhs.exact) {
            (Some(a), Some(b)) => Some(a.add(b)),
            _ => None,
        };
        let bound = match &exact {
            Some(v) if v.is_zero() => DegreeBound::arithmetic(BoundValue::Finite(0)),
            Some(_) => DegreeBound::arithmetic(BoundValue::Finite(1)),
            None => {
                let mut value = self.bound.value.max(rhs.bound.value);
                for (alg, other) in [(self, rhs), (rhs, self)] {
                    if alg.is_algebraic_nonzero() && other.bound.value >= BoundValue::Finite(2) {
                        value = value.min(other.bound.value);
                    }
                }
                DegreeBound::arithmetic(value)
            }
        };
        PeriodWitness {
            re_pos: self.re_pos.union(&rhs.re_pos),
            re_neg: self.re_neg.union(&rhs.re_neg),
            im_pos: self.im_pos.union(&rhs.im_pos),
            im_neg: self.im_neg.union(&rhs.im_neg),
            signature: self.signature.add(&rhs.signature),
            bound,
            exact,
        }
    }

    /// Negation swaps the positive and negative buckets; bound unchanged.
    pub fn negate(&self) -> PeriodWitness {
        PeriodWitness {
            re_pos: self.re_neg.clone(),
            re_neg: self.re_pos.clone(),
            im_pos: self.im_neg.clone(),
            im_neg: self.im_pos.clone(),
            signature: self.signature.neg(),
            bound: self.bound,
            exact: self.exact.as_ref().map(ComplexSurdSum::neg),
        }
    }

    /// Scale by the Gaussian rational `re + im*i`. Real scaling stretches
    /// axis 0 of every cell by |re| exactly and routes signs through the
    /// buckets; a complex scalar combines buckets by the product sign rules.
    /// The bound is unchanged for a non-zero scalar and 0 for scalar zero.
    pub fn scale(&self, re: &Rational, im: &Rational) -> PeriodWitness {
        if re.is_zero() && im.is_zero() {
            return PeriodWitness::zero();
        }
        let scale_signed = |q: &Rational, pos: &Domain, neg: &Domain| -> (Domain, Domain) {
            if q.is_zero() {
                return (Domain::empty(), Domain::empty());
            }
            let factor = q.abs();
            let stretch = |d: &Domain| {
                if factor.is_one() {
                    d.clone()
                } else {
                    d.scale_axis0(&factor).expect("cells have dim >= 1")
                }
            };
            if q.is_positive() {
                (stretch(pos), stretch(neg))
            } else {
                (stretch(neg), stretch(pos))
            }
        };
        // (re + im*i)(R + I*i) = (re*R - im*I) + (re*I + im*R)*i
        let (xr_p, xr_n) = scale_signed(re, &self.re_pos, &self.re_neg);
        let (yi_p, yi_n) = scale_signed(im, &self.im_pos, &self.im_neg);
        let (xi_p, xi_n) = scale_signed(re, &self.im_pos, &self.im_neg);
        let (yr_p, yr_n) = scale_signed(im, &self.re_pos, &self.re_neg);
        PeriodWitness {
            re_pos: xr_p.union(&yi_n),
            re_neg: xr_n.union(&yi_p),
            im_pos: xi_p.union(&yr_p),
            im_neg: xi_n.union(&yr_n),
            signature: self.signature.scale(re, im),
            bound: self.bound,
            exact: self.exact.as_ref().map(|v| v.scale(re, im)),
        }
    }

    /// m-th power witness. Certified algebraic witnesses multiply out
    /// exactly; product-of-atoms witnesses assemble the registry-optimal
    /// decomposition of the power; everything else splits recursively.
    pub fn pow(&self, m: u32) -> Result<PeriodWitness, WitnessError> {
        if m == 0 {
            return Err(WitnessError::InvalidParameter(
                "pow exponent must be a positive integer".into(),
            ));
        }
        if m > MAX_POWER {
            return Err(WitnessError::PowerTooLarge { got: m });
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let projected = (self.total_cells() as u128).checked_pow(m);
        if !matches!(projected, Some(n) if n <= 1 << 16) {
            return Err(WitnessError::InvalidParameter(format!(
                "power of a {}-cell witness by {m} produces too many cells",
                self.total_cells()
            )));
        }
        if self.exact.is_some() {
            let mut acc = self.clone();
            for _ in 1..m {
                acc = acc.mul(self);
            }
            return Ok(acc);
        }
        if let Some(atoms) = self.signature.atoms() {
            if atoms.keys().all(|a| !a.is_algebraic()) {
                return Ok(self.pow_by_cover(atoms.clone(), m));
            }
        }
        // Fallback: best binary split by resulting bound.
        let mut table: Vec<PeriodWitness> = vec![self.clone()];
        for k in 2..=m {
            let mut best: Option<PeriodWitness> = None;
            for i in 1..=k / 2 {
                let cand = table[i as usize - 1].mul(&table[(k - i) as usize - 1]);
                let better = match &best {
                    None => true,
                    Some(b) => cand.bound.value < b.bound.value,
                };
                if better {
                    best = Some(cand);
                }
            }
            table.push(best.expect("k >= 2 has a split"));
        }
        Ok(table.pop().expect("table has m entries"))
    }

    /// Assemble w^m for a pure product of non-algebraic atoms, grouping
    /// factors into registry constructions wherever that lowers the bound.
    fn pow_by_cover(&self, atoms: AtomSet, m: u32) -> PeriodWitness {
        let mut powered: AtomSet = atoms;
        for count in powered.values_mut() {
            *count *= m;
        }
        let pieces = cover_decomposition(&powered);
        let mut factors: Vec<PeriodWitness> = Vec::new();
        for piece in pieces {
            match piece {
                CoverPiece::Entry(idx) => {
                    let entry = &Registry::standard().entries()[idx];
                    factors.push((entry.builder)());
                }
                CoverPiece::Single(atom) => factors.push(atom.witness()),
            }
        }
        let mut acc = factors.pop().expect("non-empty atom product");
        for f in factors {
            acc = acc.mul(&f);
        }
        // Restore the scalar: (s * A)^m = s^m * A^m.
        let (sre, sim) = complex_pow(&self.signature.scalar_re, &self.signature.scalar_im, m);
        acc.scale(&sre, &sim)
    }

    /// Upper bound for deg(w^m), minimized by dynamic programming over the
    /// registry and the sum rule `b(i+j) <= b(i) + b(j)`. Never exceeds
    /// m * b(1).
    pub fn power_bound(&self, m: u32) -> BoundValue {
        assert!(m >= 1, "power_bound exponent must be >= 1");
        if self.is_certified_zero() {
            return BoundValue::Finite(0);
        }
        if self.is_algebraic_nonzero() {
            return BoundValue::Finite(1);
        }
        if let Some(atoms) = self.signature.atoms() {
            let mut powered = atoms.clone();
            for count in powered.values_mut() {
                *count *= m;
            }
            return BoundValue::Finite(cover_bound(&powered));
        }
        self.bound.value.times(m)
    }

    /// Bound-level distance: the ledger of `w1 - w2`. Symmetric by
    /// construction; cancellation is invisible, so d(w, w) keeps w's bound.
    pub fn distance_bound(&self, rhs: &PeriodWitness) -> DegreeBound {
        self.add(&rhs.negate()).bound
    }
}

/// Gaussian-rational power.
fn complex_pow(re: &Rational, im: &Rational, m: u32) -> (Rational, Rational) {
    let mut acc = (Rational::one(), Rational::zero());
    for _ in 0..m {
        acc = (
            &(&acc.0 * re) - &(&acc.1 * im),
            &(&acc.0 * im) + &(&acc.1 * re),
        );
    }
    acc
}

// ---------------------------------------------------------------------------
// Cover bounds over atom multisets
// ---------------------------------------------------------------------------

#[derive(Clone)]
enum CoverPiece {
    Entry(usize),
    Single(Atom),
}

/// Minimal bound for a product of atoms: cover the multiset by registry
/// entries plus singletons. Algebraic atoms are absorbed for free against a
/// non-algebraic remainder (multiplying by a non-zero algebraic number does
/// not raise the degree); a product of algebraic atoms alone has bound 1.
fn cover_bound(atoms: &AtomSet) -> u32 {
    cover_impl(atoms).0
}

fn cover_decomposition(atoms: &AtomSet) -> Vec<CoverPiece> {
    cover_impl(atoms).1
}

fn cover_impl(atoms: &AtomSet) -> (u32, Vec<CoverPiece>) {
    let non_alg: AtomSet = atoms
        .iter()
        .filter(|(a, _)| !a.is_algebraic())
        .map(|(a, n)| (a.clone(), *n))
        .collect();
    let alg: Vec<CoverPiece> = atoms
        .iter()
        .filter(|(a, _)| a.is_algebraic())
        .flat_map(|(a, n)| std::iter::repeat_n(CoverPiece::Single(a.clone()), *n as usize))
        .collect();
    if non_alg.is_empty() {
        let bound = if alg.is_empty() { 0 } else { 1 };
        return (bound, alg);
    }
    let support: Vec<Atom> = non_alg.keys().cloned().collect();
    let counts: Vec<u32> = support.iter().map(|a| non_alg[a]).collect();
    let registry = Registry::standard();
    // Registry entries projected onto the support; entries using atoms
    // outside the support can never fit.
    let entries: Vec<(usize, Vec<u32>, u32)> = registry
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.atoms.keys().all(|a| support.contains(a)))
        .map(|(idx, e)| {
            let vec: Vec<u32> = support
                .iter()
                .map(|a| e.atoms.get(a).copied().unwrap_or(0))
                .collect();
            (idx, vec, e.bound)
        })
        .collect();
    let mut memo: HashMap<Vec<u32>, (u32, Vec<CoverPiece>)> = HashMap::new();
    let (bound, mut pieces) = cover_rec(&counts, &support, &entries, &mut memo);
    pieces.extend(alg);
    (bound, pieces)
}

fn cover_rec(
    counts: &[u32],
    support: &[Atom],
    entries: &[(usize, Vec<u32>, u32)],
    memo: &mut HashMap<Vec<u32>, (u32, Vec<CoverPiece>)>,
) -> (u32, Vec<CoverPiece>) {
    if counts.iter().all(|&c| c == 0) {
        return (0, Vec::new());
    }
    if let Some(hit) = memo.get(counts) {
        return hit.clone();
    }
    // Baseline: every atom on its own.
    let mut best_bound: u32 = counts
        .iter()
        .zip(support)
        .map(|(&c, a)| c * a.dimension_bound())
        .sum();
    let mut best_pieces: Vec<CoverPiece> = support
        .iter()
        .zip(counts)
        .flat_map(|(a, &c)| std::iter::repeat_n(CoverPiece::Single(a.clone()), c as usize))
        .collect();
    for (idx, need, bound) in entries {
        if need.iter().zip(counts).all(|(n, c)| n <= c) {
            let rest: Vec<u32> = counts.iter().zip(need).map(|(c, n)| c - n).collect();
            let (sub_bound, sub_pieces) = cover_rec(&rest, support, entries, memo);
            let total = bound + sub_bound;
            if total < best_bound {
                best_bound = total;
                best_pieces = sub_pieces;
                best_pieces.push(CoverPiece::Entry(*idx));
            }
        }
    }
    let result = (best_bound, best_pieces);
    memo.insert(counts.to_vec(), result.clone());
    result
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

impl Serialize for PeriodWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Buckets<'a> {
            re_pos: &'a Domain,
            re_neg: &'a Domain,
            im_pos: &'a Domain,
            im_neg: &'a Domain,
        }
        let mut state = serializer.serialize_struct("PeriodWitness", 3)?;
        state.serialize_field("signature", &self.signature)?;
        state.serialize_field("bound", &self.bound)?;
        state.serialize_field(
            "buckets",
            &Buckets {
                re_pos: &self.re_pos,
                re_neg: &self.re_neg,
                im_pos: &self.im_pos,
                im_neg: &self.im_neg,
            },
        )?;
        state.end()
    }
}

// ---------------------------------------------------------------------------
// Transcendence reporting
// ---------------------------------------------------------------------------

/// Summary of one operand in a transcendence report.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessSummary {
    pub signature: String,
    pub bound: DegreeBound,
}

/// Conditional conclusions from the degree-difference laws.
#[derive(Debug, Clone, Serialize)]
pub struct TranscendenceReport {
    pub left: WitnessSummary,
    pub right: WitnessSummary,
    /// Exact degrees asserted by the caller, if any.
    pub asserted_degrees: Option<[u32; 2]>,
    /// Whether the conclusions are conditional on unproven exact degrees.
    pub conditional: bool,
    pub conclusions: Vec<String>,
    /// Standing observation about e + pi.
    pub note: String,
}

const E_PI_NOTE: &str = "a proof that the degree of e is at least 3, combined with \
the degree-2 witness for pi, would make e + pi transcendental by the degree-difference law";

/// Report what the degree laws allow for a pair of witnesses. With asserted
/// exact degrees that differ and both exceed 1, the sum and quotient are
/// transcendental and the pair is linearly independent over the algebraic
/// numbers; with bounds alone every statement stays conditional.
pub fn transcendence_report(
    w1: &PeriodWitness,
    w2: &PeriodWitness,
    asserted: Option<[u32; 2]>,
) -> TranscendenceReport {
    let summary = |w: &PeriodWitness| WitnessSummary {
        signature: w.signature().to_string(),
        bound: w.bound(),
    };
    let mut conclusions = Vec::new();
    let conditional;
    match asserted {
        Some([d1, d2]) => {
            conditional = false;
            if d1 == d2 {
                conclusions.push(format!(
                    "asserted degrees are equal ({d1}); the degree-difference laws give no conclusion"
                ));
            } else {
                conclusions.push(format!(
                    "asserted degrees {d1} and {d2} differ: the witnesses are linearly independent over the algebraic numbers"
                ));
                if d1 > 1 && d2 > 1 {
                    conclusions.push(
                        "both asserted degrees exceed 1: the quotient is transcendental".into(),
                    );
                    conclusions
                        .push("both asserted degrees exceed 1: the sum is transcendental".into());
                } else {
                    conclusions.push(
                        "one asserted degree is at most 1; transcendence of sum and quotient needs both to exceed 1"
                            .into(),
                    );
                }
            }
        }
        None => {
            conditional = true;
            let b1 = w1.bound().value;
            let b2 = w2.bound().value;
            if b1 != b2 {
                conclusions.push(format!(
                    "ledger bounds are {b1} and {b2}; IF the exact degrees equal these bounds, the witnesses are linearly independent over the algebraic numbers"
                ));
                if b1 >= BoundValue::Finite(2) && b2 >= BoundValue::Finite(2) {
                    conclusions.push(
                        "IF the exact degrees equal these bounds, the sum and quotient are transcendental"
                            .into(),
                    );
                }
            } else {
                conclusions.push(format!(
                    "ledger bounds are both {b1}; bounds are not exact degrees, so no conclusion follows"
                ));
            }
        }
    }
    TranscendenceReport {
        left: summary(w1),
        right: summary(w2),
        asserted_degrees: asserted,
        conditional,
        conclusions,
        note: E_PI_NOTE.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Gallery
// ---------------------------------------------------------------------------

/// One builtin in the gallery listing.
#[derive(Debug, Clone, Serialize)]
pub struct GalleryEntry {
    pub name: String,
    pub signature: String,
    pub bound: DegreeBound,
    pub construction: String,
}

/// The builtin witnesses with their constructions.
pub fn gallery() -> Vec<GalleryEntry> {
    let entry = |name: &str, w: &PeriodWitness, construction: &str| GalleryEntry {
        name: name.to_string(),
        signature: w.signature().to_string(),
        bound: w.bound(),
        construction: construction.to_string(),
    };
    vec![
        entry(
            "pi",
            &PeriodWitness::pi(),
            "area of the unit disk x^2 + y^2 <= 1",
        ),
        entry(
            "log(2)",
            &PeriodWitness::log(Rational::from_int(2)).expect("2 > 1"),
            "area of {1 <= x <= q, x*y <= 1, y >= 0}, the region under 1/x",
        ),
        entry(
            "pi_log2",
            &PeriodWitness::pi_log2(),
            "volume of the 3-dimensional cell {x^2+y^2 <= 1, 0 <= z*(x^2+y^2+1) <= 1}; beats the 4-dimensional product bound",
        ),
        entry(
            "pi_squared",
            &PeriodWitness::pi_squared(),
            "volume of the 3-dimensional cell {x^2+y^2 <= 1, 0 <= z*((x^2+y^2)^2+1) <= 4}; beats the 4-dimensional product bound",
        ),
        entry(
            "zeta(2)",
            &PeriodWitness::zeta_even(2).expect("2 is even"),
            "2^(2k-1) B_k/(2k)! * pi^(2k) with k = 1: one sixth of the pi_squared cell",
        ),
        entry(
            "zeta(4)",
            &PeriodWitness::zeta_even(4).expect("4 is even"),
            "2^(2k-1) B_k/(2k)! * pi^(2k) with k = 2, on the product of two pi_squared cells",
        ),
        entry(
            "sqrt(2)",
            &PeriodWitness::make_sqrt(2).expect("2 >= 1"),
            "length of {x >= 0, 2 - x^2 >= 0}",
        ),
        entry(
            "3/2",
            &PeriodWitness::make_algebraic(Rational::ratio(3, 2)),
            "length of the interval [0, 3/2]",
        ),
    ]
}

/// The fixed witness gallery used by the invariant suites.
pub fn gallery_witnesses() -> Vec<(String, PeriodWitness)> {
    vec![
        ("pi".into(), PeriodWitness::pi()),
        (
            "log(2)".into(),
            PeriodWitness::log(Rational::from_int(2)).expect("2 > 1"),
        ),
        (
            "log(3)".into(),
            PeriodWitness::log(Rational::from_int(3)).expect("3 > 1"),
        ),
        ("pi_log2".into(), PeriodWitness::pi_log2()),
        ("pi_squared".into(), PeriodWitness::pi_squared()),
        (
            "zeta(2)".into(),
            PeriodWitness::zeta_even(2).expect("even"),
        ),
        (
            "sqrt(2)".into(),
            PeriodWitness::make_sqrt(2).expect("positive"),
        ),
        (
            "3/2".into(),
            PeriodWitness::make_algebraic(Rational::ratio(3, 2)),
        ),
        (
            "-2".into(),
            PeriodWitness::make_algebraic(Rational::from_int(-2)),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcvol;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn fin(v: u32) -> BoundValue {
        BoundValue::Finite(v)
    }

    fn eval(w: &PeriodWitness) -> crate::mcvol::ComplexEstimate {
        mcvol::evaluate_witness(w, 200_000, 1).unwrap()
    }

    fn assert_close(est: &crate::mcvol::SignedEstimate, target: f64) {
        let tol = 3.0 * est.stderr + 1e-12;
        assert!(
            (est.mean - target).abs() <= tol,
            "estimate {} not within {tol} of {target}",
            est.mean
        );
    }

    #[test]
    fn algebraic_witnesses() {
        let w = PeriodWitness::make_algebraic(r("3/2"));
        assert_eq!(w.bound().value, fin(1));
        assert!(w.is_algebraic_nonzero());
        assert_eq!(w.re_pos().cells().len(), 1);
        assert_close(&eval(&w).re, 1.5);

        let z = PeriodWitness::make_algebraic(r("0"));
        assert_eq!(z.bound().value, fin(0));
        assert!(z.re_pos().is_empty() && z.re_neg().is_empty());

        let n = PeriodWitness::make_algebraic(r("-2"));
        assert_eq!(n.bound().value, fin(1));
        assert_eq!(n.re_neg().cells().len(), 1);
        assert_close(&eval(&n).re, -2.0);
    }

    #[test]
    fn sqrt_witnesses() {
        let w = PeriodWitness::make_sqrt(2).unwrap();
        assert_eq!(w.bound().value, fin(1));
        assert_close(&eval(&w).re, 2f64.sqrt());
        assert_eq!(w.signature().to_string(), "sqrt(2)");

        let one = PeriodWitness::make_sqrt(1).unwrap();
        assert_close(&eval(&one).re, 1.0);
        assert_eq!(one.signature().to_string(), "1");

        let four = PeriodWitness::make_sqrt(4).unwrap();
        assert_close(&eval(&four).re, 2.0);
        assert_eq!(four.signature().to_string(), "2");
        assert!(four.is_algebraic_nonzero());

        assert!(PeriodWitness::make_sqrt(0).is_err());
    }

    #[test]
    fn builtin_bounds_and_values() {
        let pi = PeriodWitness::pi();
        assert_eq!(pi.bound().value, fin(2));
        assert_eq!(pi.bound().provenance, Provenance::Dimension);
        assert_close(&eval(&pi).re, std::f64::consts::PI);

        let log2 = PeriodWitness::log(r("2")).unwrap();
        assert_eq!(log2.bound().value, fin(2));
        assert_close(&eval(&log2).re, std::f64::consts::LN_2);

        let pl = PeriodWitness::pi_log2();
        assert_eq!(pl.bound().value, fin(3));
        assert_close(&eval(&pl).re, std::f64::consts::PI * std::f64::consts::LN_2);

        let ps = PeriodWitness::pi_squared();
        assert_eq!(ps.bound().value, fin(3));
        assert_close(&eval(&ps).re, std::f64::consts::PI.powi(2));

        let z2 = PeriodWitness::zeta_even(2).unwrap();
        assert_eq!(z2.bound().value, fin(3));
        assert_close(&eval(&z2).re, std::f64::consts::PI.powi(2) / 6.0);

        let z4 = PeriodWitness::zeta_even(4).unwrap();
        assert_eq!(z4.bound().value, fin(6));
        assert_close(&eval(&z4).re, std::f64::consts::PI.powi(4) / 90.0);
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(
            PeriodWitness::builtin("nope", &[]),
            Err(WitnessError::UnknownBuiltin(_))
        ));
        assert!(PeriodWitness::log(r("1/2")).is_err());
        assert!(PeriodWitness::log(r("1")).is_err());
        assert!(PeriodWitness::zeta_even(3).is_err());
        assert!(PeriodWitness::zeta_even(0).is_err());
        assert!(matches!(
            PeriodWitness::builtin("log", &[r("2"), r("3")]),
            Err(WitnessError::InvalidParameter(_))
        ));
    }

    #[test]
    fn mul_bounds() {
        let pi = PeriodWitness::pi();
        let log2 = PeriodWitness::log(r("2")).unwrap();

        let p = pi.mul(&log2);
        assert_eq!(p.bound().value, fin(3));
        assert_eq!(p.bound().provenance, Provenance::Registry);
        assert_close(&eval(&p).re, std::f64::consts::PI * std::f64::consts::LN_2);

        let zero = pi.mul(&PeriodWitness::make_algebraic(r("0")));
        assert_eq!(zero.bound().value, fin(0));
        assert_eq!(zero.total_cells(), 0);

        let scaled = PeriodWitness::make_algebraic(r("2")).mul(&pi);
        assert_eq!(scaled.bound().value, fin(2));
        assert_close(&eval(&scaled).re, 2.0 * std::f64::consts::PI);

        let pi_sq = pi.mul(&pi);
        assert_eq!(pi_sq.bound().value, fin(3));
        assert_eq!(pi_sq.bound().provenance, Provenance::Registry);
    }

    #[test]
    fn add_bounds() {
        let pi = PeriodWitness::pi();
        let one = PeriodWitness::make_algebraic(r("1"));

        let shifted = pi.add(&one);
        assert_eq!(shifted.bound().value, fin(2));
        assert_close(&eval(&shifted).re, 1.0 + std::f64::consts::PI);

        let cancel = pi.add(&pi.negate());
        assert_eq!(cancel.bound().value, fin(2));
        assert_close(&eval(&cancel).re, 0.0);

        let logs = PeriodWitness::log(r("2")).unwrap().add(&PeriodWitness::log(r("3")).unwrap());
        assert_eq!(logs.bound().value, fin(2));
        assert_close(&eval(&logs).re, 6f64.ln());

        // Certified cancellation of algebraic values drops the bound to 0.
        let exact_cancel = one.add(&PeriodWitness::make_algebraic(r("-1")));
        assert_eq!(exact_cancel.bound().value, fin(0));
        assert!(exact_cancel.is_certified_zero());

        // sqrt(2) + sqrt(3) stays certified algebraic via multi-radicand sums.
        let surds = PeriodWitness::make_sqrt(2)
            .unwrap()
            .add(&PeriodWitness::make_sqrt(3).unwrap());
        assert_eq!(surds.bound().value, fin(1));
        assert!(surds.is_algebraic_nonzero());
    }

    #[test]
    fn negate_is_involution() {
        for (_, w) in gallery_witnesses() {
            assert_eq!(w.negate().negate(), w);
        }
        assert_eq!(PeriodWitness::zero().negate(), PeriodWitness::zero());
    }

    #[test]
    fn scale_witnesses() {
        let pi = PeriodWitness::pi();

        let z = pi.scale(&r("0"), &r("0"));
        assert_eq!(z.bound().value, fin(0));
        assert_eq!(z.total_cells(), 0);

        let sixth = PeriodWitness::pi_squared().scale(&r("1/6"), &r("0"));
        assert_eq!(sixth.bound().value, fin(3));
        assert_close(&eval(&sixth).re, std::f64::consts::PI.powi(2) / 6.0);

        let imag = pi.scale(&r("0"), &r("1"));
        assert_eq!(imag.bound().value, fin(2));
        assert!(imag.re_pos().is_empty() && imag.re_neg().is_empty());
        let est = eval(&imag);
        assert_close(&est.im, std::f64::consts::PI);
        assert_close(&est.re, 0.0);

        // i * (i * pi) = -pi
        let minus_pi = imag.scale(&r("0"), &r("1"));
        let est = eval(&minus_pi);
        assert_close(&est.re, -std::f64::consts::PI);
        assert_close(&est.im, 0.0);

        let neg_half = pi.scale(&r("-1/2"), &r("0"));
        assert_close(&eval(&neg_half).re, -std::f64::consts::PI / 2.0);
        assert_eq!(neg_half.bound().value, fin(2));
    }

    #[test]
    fn power_bounds() {
        let pi = PeriodWitness::pi();
        assert_eq!(pi.power_bound(1), fin(2));
        assert_eq!(pi.power_bound(2), fin(3));
        assert_eq!(pi.power_bound(3), fin(5));
        assert_eq!(pi.power_bound(4), fin(6));
        assert_eq!(pi.power_bound(5), fin(8));
        assert_eq!(pi.power_bound(6), fin(9));
        for m in 1..=32 {
            assert!(pi.power_bound(m) <= pi.power_bound(1).times(m));
        }
        let alg = PeriodWitness::make_algebraic(r("2"));
        for m in 1..=32 {
            assert_eq!(alg.power_bound(m), fin(1));
        }
        assert_eq!(PeriodWitness::zero().power_bound(5), fin(0));
        // Product-shaped witnesses regroup factors through the registry.
        let w = PeriodWitness::pi_log2().mul(&PeriodWitness::pi());
        assert_eq!(w.bound().value, fin(5));
        assert_eq!(w.power_bound(2), fin(9)); // two pi*log2 cells and one pi^2 cell
    }

    #[test]
    fn pow_witnesses() {
        let pi = PeriodWitness::pi();
        let p2 = pi.pow(2).unwrap();
        assert_eq!(p2.bound().value, fin(3));
        assert_eq!(p2.max_cell_dim(), 3); // the registry construction, not a product
        let p4 = pi.pow(4).unwrap();
        assert_eq!(p4.bound().value, fin(6));
        assert_close(&eval(&p4).re, std::f64::consts::PI.powi(4));

        let alg = PeriodWitness::make_algebraic(r("3"));
        let a3 = alg.pow(3).unwrap();
        assert_eq!(a3.bound().value, fin(1));
        assert_close(&eval(&a3).re, 27.0);

        assert!(pi.pow(0).is_err());
        assert!(pi.pow(65).is_err());
        // Cell-count guard: powering a multi-cell witness blows up politely.
        let two_cells = pi.add(&pi);
        assert!(two_cells.pow(32).is_err());
    }

    #[test]
    fn distance_bounds() {
        let pi = PeriodWitness::pi();
        let one = PeriodWitness::make_algebraic(r("1"));
        assert_eq!(pi.distance_bound(&pi).value, fin(2));
        assert_eq!(pi.distance_bound(&one).value, fin(2));
        assert_eq!(
            PeriodWitness::make_algebraic(r("2"))
                .distance_bound(&PeriodWitness::make_algebraic(r("3")))
                .value,
            fin(1)
        );
        // Symmetry across the gallery.
        let gallery = gallery_witnesses();
        for (_, a) in &gallery {
            for (_, b) in &gallery {
                assert_eq!(a.distance_bound(b).value, b.distance_bound(a).value);
            }
        }
    }

    #[test]
    fn transcendence_reports() {
        let pi = PeriodWitness::pi();
        let pl = PeriodWitness::pi_log2();

        let report = transcendence_report(&pi, &pl, Some([2, 3]));
        assert!(!report.conditional);
        assert!(report.conclusions.iter().any(|c| c.contains("sum is transcendental")));
        assert!(report.conclusions.iter().any(|c| c.contains("quotient is transcendental")));
        assert!(report
            .conclusions
            .iter()
            .any(|c| c.contains("linearly independent")));

        let report = transcendence_report(&pi, &pi, Some([2, 2]));
        assert!(report.conclusions.iter().any(|c| c.contains("no conclusion")));

        let report = transcendence_report(&pi, &pl, None);
        assert!(report.conditional);
        assert!(report.conclusions.iter().all(|c| !c.contains("no conclusion")));
        assert!(report.note.contains("degree of e"));
    }

    #[test]
    fn witness_json_shape() {
        let pi = PeriodWitness::pi();
        let json = serde_json::to_value(&pi).unwrap();
        assert_eq!(json["signature"], "pi");
        assert_eq!(json["bound"]["value"], 2);
        assert_eq!(json["bound"]["provenance"], "dimension");
        assert!(json["buckets"]["re_pos"].is_array());
    }

    #[test]
    fn signature_canonical_forms() {
        let pi = PeriodWitness::pi();
        let log2 = PeriodWitness::log(r("2")).unwrap();
        assert_eq!(
            pi.mul(&log2).signature(),
            PeriodWitness::pi_log2().signature()
        );
        assert_eq!(
            log2.mul(&pi).signature(),
            PeriodWitness::pi_log2().signature()
        );
        assert_eq!(
            pi.mul(&pi).signature(),
            PeriodWitness::pi_squared().signature()
        );
        assert_eq!(pi.mul(&log2).signature().to_string(), "pi*log(2)");
        assert_eq!(
            PeriodWitness::zeta_even(2).unwrap().signature().to_string(),
            "1/6*pi^2"
        );
        assert_eq!(pi.scale(&r("0"), &r("1")).signature().to_string(), "i*pi");
        assert_eq!(pi.add(&log2).signature().to_string(), "(pi + log(2))");
    }

    #[test]
    fn ledger_bound_vs_dimension() {
        // Bound >= max cell dimension unless a registry override applies.
        for (name, w) in gallery_witnesses() {
            let dim = w.max_cell_dim() as u32;
            match w.bound().value {
                BoundValue::Finite(b) => assert!(
                    b >= dim || w.bound().provenance == Provenance::Registry,
                    "{name}: bound {b} below dimension {dim} without registry"
                ),
                BoundValue::Infinite => {}
            }
        }
    }
}
