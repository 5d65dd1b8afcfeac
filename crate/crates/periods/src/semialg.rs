//! Multivariate polynomials with exact rational coefficients, semi-algebraic
//! cells and domains, and the geometric transforms behind the witness
//! algebra: cartesian products, unit-interval padding, translation, and the
//! disjoint-union materialization of a multi-cell domain.
//!
//! A `Cell` is a conjunction of polynomial inequalities `p >= 0` together
//! with a mandatory rational bounding box; the box both guarantees that the
//! described set is bounded and provides the sampling region for volume
//! estimation. A `Domain` is a finite multiset of cells whose volumes add.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("operation requires a non-empty domain")]
    EmptyDomain,
}

/// Sparse multivariate polynomial: exponent vector -> non-zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        let mut p = Polynomial::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    /// The coordinate monomial `x_axis`.
    pub fn var(vars: usize, axis: usize) -> Self {
        assert!(axis < vars);
        let mut exps = vec![0; vars];
        exps[axis] = 1;
        let mut p = Polynomial::zero(vars);
        p.add_term(exps, Rational::one());
        p
    }

    pub fn monomial(vars: usize, exps: Vec<u32>, coeff: Rational) -> Self {
        assert_eq!(exps.len(), vars);
        let mut p = Polynomial::zero(vars);
        p.add_term(exps, coeff);
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: Rational) {
        use std::collections::btree_map::Entry;
        debug_assert_eq!(exps.len(), self.vars);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = &*o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, rhs.vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Polynomial) -> Polynomial {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Polynomial {
        if q.is_zero() {
            return Polynomial::zero(self.vars);
        }
        Polynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, rhs.vars);
        let mut out = Polynomial::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exps, c1 * c2);
            }
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, point: &[Rational]) -> Result<Rational, GeomError> {
        if point.len() != self.vars {
            return Err(GeomError::DimensionMismatch {
                expected: self.vars,
                got: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    term = &term * x;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Double-precision evaluation at a float point.
    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, GeomError> {
        if point.len() != self.vars {
            return Err(GeomError::DimensionMismatch {
                expected: self.vars,
                got: point.len(),
            });
        }
        let mut acc = 0.0;
        for (exps, coeff) in &self.terms {
            let mut term = coeff.to_f64();
            for (x, &e) in point.iter().zip(exps) {
                term *= x.powi(e as i32);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Substitute `x_axis -> x_axis - offset`, exactly (binomial expansion).
    pub fn shift(&self, axis: usize, offset: &Rational) -> Result<Polynomial, GeomError> {
        if axis >= self.vars {
            return Err(GeomError::AxisOutOfRange {
                axis,
                dim: self.vars,
            });
        }
        if offset.is_zero() {
            return Ok(self.clone());
        }
        let mut out = Polynomial::zero(self.vars);
        for (exps, coeff) in &self.terms {
            let e = exps[axis];
            // (x - c)^e = sum_j C(e, j) x^j (-c)^(e-j)
            let mut pow = Rational::one(); // (-c)^(e-j), built from j = e downward
            let neg_c = -offset;
            let mut per_j: Vec<Rational> = Vec::with_capacity(e as usize + 1);
            for _ in 0..=e {
                per_j.push(pow.clone());
                pow = &pow * &neg_c;
            }
            for j in 0..=e {
                let mut new_exps = exps.clone();
                new_exps[axis] = j;
                let binom = crate::exactnum::binomial(e as u64, j as u64);
                let c = &(coeff * &binom) * &per_j[(e - j) as usize];
                out.add_term(new_exps, c);
            }
        }
        Ok(out)
    }

    /// Substitute `x_axis -> x_axis / factor` for a non-zero rational factor.
    pub fn scale_axis(&self, axis: usize, factor: &Rational) -> Result<Polynomial, GeomError> {
        if axis >= self.vars {
            return Err(GeomError::AxisOutOfRange {
                axis,
                dim: self.vars,
            });
        }
        assert!(!factor.is_zero(), "axis scale factor must be non-zero");
        let inv = factor.recip().expect("non-zero");
        let mut out = Polynomial::zero(self.vars);
        for (exps, coeff) in &self.terms {
            let mut c = coeff.clone();
            for _ in 0..exps[axis] {
                c = &c * &inv;
            }
            out.add_term(exps.clone(), c);
        }
        Ok(out)
    }

    /// Re-embed into `total` variables with this polynomial's variables
    /// starting at `at`.
    pub fn embed(&self, total: usize, at: usize) -> Polynomial {
        assert!(at + self.vars <= total);
        let mut out = Polynomial::zero(total);
        for (exps, coeff) in &self.terms {
            let mut new_exps = vec![0u32; total];
            new_exps[at..at + self.vars].copy_from_slice(exps);
            out.add_term(new_exps, coeff.clone());
        }
        out
    }

    fn term_map(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let key = e
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                (key, c.to_string())
            })
            .collect()
    }

    fn from_term_map(map: &BTreeMap<String, String>, vars: usize) -> Result<Polynomial, String> {
        let mut p = Polynomial::zero(vars);
        for (key, val) in map {
            let exps: Vec<u32> = key
                .split(',')
                .map(|s| s.trim().parse::<u32>().map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            if exps.len() != vars {
                return Err(format!(
                    "exponent vector `{key}` has length {}, expected {vars}",
                    exps.len()
                ));
            }
            let coeff: Rational = val.parse().map_err(|e| format!("{e}"))?;
            p.add_term(exps, coeff);
        }
        Ok(p)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let monomial: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{e}")
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.term_map().serialize(serializer)
    }
}

/// A polynomial constraint in canonical `poly >= 0` form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Inequality {
    poly: Polynomial,
}

impl Inequality {
    /// `poly >= 0`.
    pub fn non_negative(poly: Polynomial) -> Self {
        Inequality { poly }
    }

    /// `lhs <= rhs`, stored as `rhs - lhs >= 0`.
    pub fn le(lhs: Polynomial, rhs: Polynomial) -> Self {
        Inequality {
            poly: rhs.sub(&lhs),
        }
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }
}

/// Closed rational intervals, one per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundingBox {
    intervals: Vec<(Rational, Rational)>,
}

impl BoundingBox {
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Result<Self, GeomError> {
        for (lo, hi) in &intervals {
            if lo > hi {
                return Err(GeomError::InvalidCell(format!(
                    "box interval [{lo}, {hi}] has lo > hi"
                )));
            }
        }
        Ok(BoundingBox { intervals })
    }

    /// Box from integer endpoints, for concise construction.
    pub fn from_ints(pairs: &[(i64, i64)]) -> Self {
        BoundingBox::new(
            pairs
                .iter()
                .map(|&(lo, hi)| (Rational::from_int(lo), Rational::from_int(hi)))
                .collect(),
        )
        .expect("integer box")
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn volume(&self) -> Rational {
        let mut v = Rational::one();
        for (lo, hi) in &self.intervals {
            v = &v * &(hi - lo);
        }
        v
    }

    pub fn product(&self, rhs: &BoundingBox) -> BoundingBox {
        let mut intervals = self.intervals.clone();
        intervals.extend(rhs.intervals.iter().cloned());
        BoundingBox { intervals }
    }

    pub fn translate(&self, axis: usize, offset: &Rational) -> BoundingBox {
        let mut intervals = self.intervals.clone();
        intervals[axis] = (&intervals[axis].0 + offset, &intervals[axis].1 + offset);
        BoundingBox { intervals }
    }

    /// Scale one axis by a positive factor.
    pub fn scale_axis(&self, axis: usize, factor: &Rational) -> BoundingBox {
        assert!(factor.is_positive());
        let mut intervals = self.intervals.clone();
        intervals[axis] = (&intervals[axis].0 * factor, &intervals[axis].1 * factor);
        BoundingBox { intervals }
    }

    pub fn contains_f64(&self, point: &[f64]) -> bool {
        point.len() == self.intervals.len()
            && point.iter().zip(&self.intervals).all(|(x, (lo, hi))| {
                let (lo, hi) = (lo.to_f64(), hi.to_f64());
                *x >= lo && *x <= hi
            })
    }

    /// Exact disjointness of closed boxes: separated strictly on some axis.
    pub fn disjoint_from(&self, rhs: &BoundingBox) -> bool {
        self.intervals
            .iter()
            .zip(&rhs.intervals)
            .any(|((alo, ahi), (blo, bhi))| ahi < blo || bhi < alo)
    }
}

impl Serialize for BoundingBox {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[String; 2]> = self
            .intervals
            .iter()
            .map(|(lo, hi)| [lo.to_string(), hi.to_string()])
            .collect();
        pairs.serialize(serializer)
    }
}

/// A bounded semi-algebraic cell: `dim`, constraints `p_i >= 0`, and a box
/// declared by the constructor to contain the constrained set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    dim: usize,
    constraints: Vec<Inequality>,
    #[serde(rename = "box")]
    bbox: BoundingBox,
}

impl Cell {
    pub fn new(constraints: Vec<Inequality>, bbox: BoundingBox) -> Result<Self, GeomError> {
        let dim = bbox.dim();
        if dim == 0 {
            return Err(GeomError::InvalidCell("cell dimension must be >= 1".into()));
        }
        for c in &constraints {
            if c.poly().vars() != dim {
                return Err(GeomError::DimensionMismatch {
                    expected: dim,
                    got: c.poly().vars(),
                });
            }
        }
        Ok(Cell {
            dim,
            constraints,
            bbox,
        })
    }

    /// A box with no extra constraints (every sample accepted).
    pub fn from_box(bbox: BoundingBox) -> Result<Self, GeomError> {
        Cell::new(Vec::new(), bbox)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Inequality] {
        &self.constraints
    }

    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    /// True iff the point lies in the box and satisfies every constraint.
    pub fn contains_f64(&self, point: &[f64]) -> Result<bool, GeomError> {
        if point.len() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: point.len(),
            });
        }
        if !self.bbox.contains_f64(point) {
            return Ok(false);
        }
        for c in &self.constraints {
            if c.poly().eval_f64(point)? < 0.0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn product(&self, rhs: &Cell) -> Cell {
        let dim = self.dim + rhs.dim;
        let mut constraints: Vec<Inequality> = self
            .constraints
            .iter()
            .map(|c| Inequality::non_negative(c.poly().embed(dim, 0)))
            .collect();
        constraints.extend(
            rhs.constraints
                .iter()
                .map(|c| Inequality::non_negative(c.poly().embed(dim, self.dim))),
        );
        Cell {
            dim,
            constraints,
            bbox: self.bbox.product(&rhs.bbox),
        }
    }

    /// Append `extra` fresh coordinates ranging over [0, 1].
    pub fn pad(&self, extra: usize) -> Cell {
        if extra == 0 {
            return self.clone();
        }
        let dim = self.dim + extra;
        let constraints = self
            .constraints
            .iter()
            .map(|c| Inequality::non_negative(c.poly().embed(dim, 0)))
            .collect();
        let unit = BoundingBox::from_ints(&vec![(0, 1); extra]);
        Cell {
            dim,
            constraints,
            bbox: self.bbox.product(&unit),
        }
    }

    pub fn translate(&self, axis: usize, offset: &Rational) -> Result<Cell, GeomError> {
        if axis >= self.dim {
            return Err(GeomError::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let constraints = self
            .constraints
            .iter()
            .map(|c| Ok(Inequality::non_negative(c.poly().shift(axis, offset)?)))
            .collect::<Result<_, GeomError>>()?;
        Ok(Cell {
            dim: self.dim,
            constraints,
            bbox: self.bbox.translate(axis, offset),
        })
    }

    /// Stretch one axis by a positive rational factor (volume scales by it).
    pub fn scale_axis(&self, axis: usize, factor: &Rational) -> Result<Cell, GeomError> {
        if axis >= self.dim {
            return Err(GeomError::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let constraints = self
            .constraints
            .iter()
            .map(|c| Ok(Inequality::non_negative(c.poly().scale_axis(axis, factor)?)))
            .collect::<Result<_, GeomError>>()?;
        Ok(Cell {
            dim: self.dim,
            constraints,
            bbox: self.bbox.scale_axis(axis, factor),
        })
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct RawCell {
            dim: usize,
            constraints: Vec<BTreeMap<String, String>>,
            #[serde(rename = "box")]
            bbox: Vec<[String; 2]>,
        }
        let raw = RawCell::deserialize(deserializer)?;
        if raw.bbox.len() != raw.dim {
            return Err(D::Error::custom(format!(
                "box has {} intervals, expected {}",
                raw.bbox.len(),
                raw.dim
            )));
        }
        let mut intervals = Vec::with_capacity(raw.dim);
        for [lo, hi] in &raw.bbox {
            let lo: Rational = lo.parse().map_err(D::Error::custom)?;
            let hi: Rational = hi.parse().map_err(D::Error::custom)?;
            intervals.push((lo, hi));
        }
        let bbox = BoundingBox::new(intervals).map_err(D::Error::custom)?;
        let constraints = raw
            .constraints
            .iter()
            .map(|m| {
                Polynomial::from_term_map(m, raw.dim)
                    .map(Inequality::non_negative)
                    .map_err(D::Error::custom)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Cell::new(constraints, bbox).map_err(D::Error::custom)
    }
}

/// A finite multiset of cells; its volume is the sum of cell volumes.
/// Cells may have different dimensions until materialized.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct Domain {
    cells: Vec<Cell>,
}

impl Domain {
    pub fn empty() -> Self {
        Domain::default()
    }

    pub fn from_cells(cells: Vec<Cell>) -> Self {
        Domain { cells }
    }

    pub fn singleton(cell: Cell) -> Self {
        Domain { cells: vec![cell] }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.cells.iter().map(Cell::dim).max().unwrap_or(0)
    }

    /// Multiset union; volumes add.
    pub fn union(&self, rhs: &Domain) -> Domain {
        let mut cells = self.cells.clone();
        cells.extend(rhs.cells.iter().cloned());
        Domain { cells }
    }

    /// All pairwise cell products; volume multiplies.
    pub fn product(&self, rhs: &Domain) -> Domain {
        let mut cells = Vec::with_capacity(self.cells.len() * rhs.cells.len());
        for a in &self.cells {
            for b in &rhs.cells {
                cells.push(a.product(b));
            }
        }
        Domain { cells }
    }

    /// Pad every cell with `extra` unit-interval coordinates; volume unchanged.
    pub fn pad(&self, extra: usize) -> Domain {
        Domain {
            cells: self.cells.iter().map(|c| c.pad(extra)).collect(),
        }
    }

    pub fn translate(&self, axis: usize, offset: &Rational) -> Result<Domain, GeomError> {
        Ok(Domain {
            cells: self
                .cells
                .iter()
                .map(|c| c.translate(axis, offset))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn scale_axis0(&self, factor: &Rational) -> Result<Domain, GeomError> {
        Ok(Domain {
            cells: self
                .cells
                .iter()
                .map(|c| c.scale_axis(0, factor))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Turn a multi-cell domain into a single semi-algebraic region: pad all
    /// cells to the maximal dimension, then translate along axis 0 so their
    /// boxes are pairwise disjoint with a gap of 1 between consecutive boxes.
    /// Total volume is preserved.
    pub fn materialize_single_domain(&self) -> Result<Domain, GeomError> {
        if self.cells.is_empty() {
            return Err(GeomError::EmptyDomain);
        }
        let dim = self.max_dim();
        let mut out = Vec::with_capacity(self.cells.len());
        let mut cursor: Option<Rational> = None;
        for cell in &self.cells {
            let padded = cell.pad(dim - cell.dim());
            let lo = padded.bbox().intervals()[0].0.clone();
            let shifted = match &cursor {
                None => padded,
                Some(edge) => {
                    let offset = &(edge + &Rational::one()) - &lo;
                    padded.translate(0, &offset)?
                }
            };
            cursor = Some(shifted.bbox().intervals()[0].1.clone());
            out.push(shifted);
        }
        Ok(Domain { cells: out })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    /// x^2 + y^2 in two variables.
    fn sum_of_squares() -> Polynomial {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        x.mul(&x).add(&y.mul(&y))
    }

    /// The unit disk: 1 - x^2 - y^2 >= 0 inside [-1,1]^2.
    fn unit_disk() -> Cell {
        let p = Polynomial::constant(2, Rational::one()).sub(&sum_of_squares());
        Cell::new(
            vec![Inequality::non_negative(p)],
            BoundingBox::from_ints(&[(-1, 1), (-1, 1)]),
        )
        .unwrap()
    }

    fn unit_interval() -> Cell {
        Cell::from_box(BoundingBox::from_ints(&[(0, 1)])).unwrap()
    }

    #[test]
    fn poly_eval_examples() {
        let p = sum_of_squares();
        assert_eq!(
            p.eval_rational(&[r("1"), r("1")]).unwrap(),
            r("2")
        );
        let q = p.sub(&Polynomial::constant(2, Rational::one()));
        assert_eq!(q.eval_rational(&[r("0"), r("0")]).unwrap(), r("-1"));
        // z(x^2 + y^2 + 1) - 1 at (0, 0, 1)
        let x = Polynomial::var(3, 0);
        let y = Polynomial::var(3, 1);
        let z = Polynomial::var(3, 2);
        let inner = x
            .mul(&x)
            .add(&y.mul(&y))
            .add(&Polynomial::constant(3, Rational::one()));
        let g = z.mul(&inner).sub(&Polynomial::constant(3, Rational::one()));
        assert_eq!(
            g.eval_rational(&[r("0"), r("0"), r("1")]).unwrap(),
            r("0")
        );
        assert!(matches!(
            g.eval_rational(&[r("0"), r("0")]),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cell_contains_examples() {
        let disk = unit_disk();
        assert!(disk.contains_f64(&[0.0, 0.0]).unwrap());
        assert!(!disk.contains_f64(&[1.1, 0.0]).unwrap());
        assert!(disk.contains_f64(&[1.0, 0.0]).unwrap()); // boundary accepted

        // log(2) cell: 1 <= x <= 2, y >= 0, 1 - x*y >= 0.
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let one = Polynomial::constant(2, Rational::one());
        let two = Polynomial::constant(2, Rational::from_int(2));
        let cell = Cell::new(
            vec![
                Inequality::le(one.clone(), x.clone()),
                Inequality::le(x.clone(), two),
                Inequality::non_negative(y.clone()),
                Inequality::le(x.mul(&y), one),
            ],
            BoundingBox::from_ints(&[(1, 2), (0, 1)]),
        )
        .unwrap();
        assert!(cell.contains_f64(&[1.5, 0.5]).unwrap());
        assert!(!cell.contains_f64(&[1.5, 0.8]).unwrap()); // 1.2 > 1
        assert!(matches!(
            cell.contains_f64(&[0.5]),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn shift_examples() {
        // x^2 shifted by 1 on axis 0 -> x^2 - 2x + 1
        let x = Polynomial::var(1, 0);
        let x2 = x.mul(&x);
        let shifted = x2.shift(0, &r("1")).unwrap();
        let expect = x2
            .sub(&x.scale(&r("2")))
            .add(&Polynomial::constant(1, Rational::one()));
        assert_eq!(shifted, expect);

        // x + y shifted by 2 on axis 1 -> x + y - 2
        let p = Polynomial::var(2, 0).add(&Polynomial::var(2, 1));
        let shifted = p.shift(1, &r("2")).unwrap();
        assert_eq!(
            shifted,
            p.sub(&Polynomial::constant(2, r("2")))
        );

        // constants are unchanged
        let c = Polynomial::constant(2, r("7"));
        assert_eq!(c.shift(0, &r("5")).unwrap(), c);
    }

    #[test]
    fn shift_matches_point_substitution() {
        let mut rng = crate::stream::SplitMix::new(42);
        for _ in 0..100 {
            let p = random_poly(&mut rng, 2, 3);
            let offset = rng.rational(5);
            let q = p.shift(0, &offset).unwrap();
            let pt = [rng.rational(10), rng.rational(10)];
            let moved = [&pt[0] - &offset, pt[1].clone()];
            assert_eq!(
                q.eval_rational(&pt).unwrap(),
                p.eval_rational(&moved).unwrap()
            );
        }
    }

    fn random_poly(rng: &mut crate::stream::SplitMix, vars: usize, max_deg: u32) -> Polynomial {
        let mut p = Polynomial::zero(vars);
        for _ in 0..=rng.below(6) {
            let exps: Vec<u32> = (0..vars).map(|_| rng.below(max_deg as u64 + 1) as u32).collect();
            p = p.add(&Polynomial::monomial(vars, exps, rng.rational(9)));
        }
        p
    }

    #[test]
    fn product_and_pad_structure() {
        let disk = unit_disk();
        let a = Domain::singleton(disk.clone());
        let b = Domain::singleton(unit_interval());

        let prod = a.product(&b);
        assert_eq!(prod.cells().len(), 1);
        assert_eq!(prod.cells()[0].dim(), 3);
        assert_eq!(prod.cells()[0].bbox().volume(), r("4"));

        assert!(a.product(&Domain::empty()).is_empty());

        let padded = a.pad(1);
        assert_eq!(padded.cells()[0].dim(), 3);
        assert_eq!(a.pad(0), a);

        // Padding keeps membership on the original axes.
        assert!(padded.cells()[0].contains_f64(&[0.5, 0.5, 0.5]).unwrap());
        assert!(!padded.cells()[0].contains_f64(&[0.9, 0.9, 0.5]).unwrap());
    }

    #[test]
    fn translate_moves_membership() {
        let disk = unit_disk();
        let moved = disk.translate(0, &r("10")).unwrap();
        assert!(moved.contains_f64(&[10.0, 0.0]).unwrap());
        assert!(!moved.contains_f64(&[0.0, 0.0]).unwrap());
        assert_eq!(moved.bbox().intervals()[0], (r("9"), r("11")));
        // Offset 0 is the identity.
        assert_eq!(disk.translate(0, &r("0")).unwrap(), disk);
        assert!(Domain::empty().translate(0, &r("1")).unwrap().is_empty());
    }

    #[test]
    fn materialize_disjoint_boxes() {
        let disk = unit_disk();
        let d = Domain::from_cells(vec![disk.clone(), unit_interval()]);
        let m = d.materialize_single_domain().unwrap();
        assert_eq!(m.cells().len(), 2);
        assert!(m.cells().iter().all(|c| c.dim() == 2));
        assert!(m.cells()[0].bbox().disjoint_from(m.cells()[1].bbox()));

        // Singleton stays a single cell.
        let s = Domain::singleton(disk).materialize_single_domain().unwrap();
        assert_eq!(s.cells().len(), 1);
        assert_eq!(s.cells()[0].dim(), 2);

        assert_eq!(
            Domain::empty().materialize_single_domain(),
            Err(GeomError::EmptyDomain)
        );
    }

    #[test]
    fn cell_json_round_trip() {
        let disk = unit_disk();
        let json = serde_json::to_string(&disk).unwrap();
        assert!(json.contains("\"dim\":2"));
        assert!(json.contains("\"box\""));
        let back: Cell = serde_json::from_str(&json).unwrap();
        assert_eq!(back, disk);
        // Malformed: box length disagrees with dim.
        let bad = r#"{"dim":2,"constraints":[],"box":[["0","1"]]}"#;
        assert!(serde_json::from_str::<Cell>(bad).is_err());
    }
}
