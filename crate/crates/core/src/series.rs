//! Truncated power series over K with exact coefficients.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{ExtensionField, FieldElement};
use crate::scalar::Scalar;

/// `Σ_{d < bound} c_d X^d`, coefficients stored degree-major as one flat
/// coordinate vector of length `n * bound`.
#[derive(Debug, Clone)]
pub struct TruncSeries {
    field: Arc<ExtensionField>,
    bound: usize,
    coords: Vec<Scalar>,
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
            && self.bound == other.bound
            && self.coords == other.coords
    }
}

impl Eq for TruncSeries {}

impl TruncSeries {
    pub fn zero(field: Arc<ExtensionField>, bound: usize) -> Self {
        let coords = vec![field.base().zero(); field.degree() * bound];
        TruncSeries {
            field,
            bound,
            coords,
        }
    }

    pub fn one(field: Arc<ExtensionField>, bound: usize) -> Self {
        let mut s = TruncSeries::zero(field, bound);
        if bound > 0 {
            s.coords[0] = s.field.base().one();
        }
        s
    }

    /// `γ X^degree`.
    pub fn monomial(field: Arc<ExtensionField>, coeff: &[Scalar], degree: usize, bound: usize) -> Result<Self> {
        if degree >= bound {
            return Err(Error::InsufficientBound {
                required: degree + 1,
                found: bound,
            });
        }
        let mut s = TruncSeries::zero(field, bound);
        s.set_coeff(degree, coeff)?;
        Ok(s)
    }

    /// From per-degree coefficient vectors; the bound is their count.
    pub fn from_coeffs(field: Arc<ExtensionField>, coeffs: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = field.degree();
        let bound = coeffs.len();
        let mut coords = Vec::with_capacity(n * bound);
        for c in coeffs {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
            coords.extend(c);
        }
        Ok(TruncSeries {
            field,
            bound,
            coords,
        })
    }

    pub(crate) fn from_flat(field: Arc<ExtensionField>, coords: Vec<Scalar>) -> Self {
        let bound = coords.len() / field.degree();
        debug_assert_eq!(bound * field.degree(), coords.len());
        TruncSeries {
            field,
            bound,
            coords,
        }
    }

    pub fn field(&self) -> &Arc<ExtensionField> {
        &self.field
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Flat degree-major coordinates.
    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coeff_coords(&self, d: usize) -> &[Scalar] {
        let n = self.field.degree();
        &self.coords[d * n..(d + 1) * n]
    }

    pub fn coeff(&self, d: usize) -> FieldElement {
        FieldElement::new(self.field.clone(), self.coeff_coords(d).to_vec()).expect("length")
    }

    pub fn set_coeff(&mut self, d: usize, c: &[Scalar]) -> Result<()> {
        let n = self.field.degree();
        if c.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.len(),
            });
        }
        if d >= self.bound {
            return Err(Error::InsufficientBound {
                required: d + 1,
                found: self.bound,
            });
        }
        self.coords[d * n..(d + 1) * n].clone_from_slice(c);
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    /// Least degree with a nonzero coefficient; `None` when the series
    /// vanishes below its bound.
    pub fn valuation(&self) -> Option<usize> {
        self.coords
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| i / self.field.degree())
    }

    fn check_field(&self, other: &TruncSeries) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_field(other)?;
        let bound = self.bound.min(other.bound);
        let len = bound * self.field.degree();
        let coords = self.coords[..len]
            .iter()
            .zip(&other.coords[..len])
            .map(|(a, b)| a + b)
            .collect();
        Ok(TruncSeries {
            field: self.field.clone(),
            bound,
            coords,
        })
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_field(other)?;
        let bound = self.bound.min(other.bound);
        let len = bound * self.field.degree();
        let coords = self.coords[..len]
            .iter()
            .zip(&other.coords[..len])
            .map(|(a, b)| a - b)
            .collect();
        Ok(TruncSeries {
            field: self.field.clone(),
            bound,
            coords,
        })
    }

    pub fn scale(&self, c: &[Scalar]) -> TruncSeries {
        let m = self.field.mul_matrix(c);
        let n = self.field.degree();
        let mut coords = self.coords.clone();
        for d in 0..self.bound {
            let block = &self.coords[d * n..(d + 1) * n];
            for k in 0..n {
                let mut acc = self.field.base().zero();
                for j in 0..n {
                    if !block[j].is_zero() {
                        acc.add_mul_assign(&m[k][j], &block[j]);
                    }
                }
                coords[d * n + k] = acc;
            }
        }
        TruncSeries {
            field: self.field.clone(),
            bound: self.bound,
            coords,
        }
    }

    /// Truncated product; the result bound is the smaller of the two.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_field(other)?;
        let bound = self.bound.min(other.bound);
        let n = self.field.degree();
        let coords = mul_flat(&self.field, &self.coords[..bound * n], &other.coords[..bound * n], bound);
        Ok(TruncSeries {
            field: self.field.clone(),
            bound,
            coords,
        })
    }

    /// Multiplies by `X^shift` and re-truncates to `new_bound`. A negative
    /// shift may not drop any nonzero coefficient.
    pub fn shift_extend(&self, shift: isize, new_bound: usize) -> Result<TruncSeries> {
        if shift < 0 {
            if let Some(v) = self.valuation() {
                if (v as isize) + shift < 0 {
                    return Err(Error::ShiftDropsCoefficient { shift, degree: v });
                }
            }
        }
        let n = self.field.degree();
        let mut out = TruncSeries::zero(self.field.clone(), new_bound);
        for d in 0..self.bound {
            let target = d as isize + shift;
            if target < 0 || target as usize >= new_bound {
                continue;
            }
            let t = target as usize;
            out.coords[t * n..(t + 1) * n].clone_from_slice(&self.coords[d * n..(d + 1) * n]);
        }
        Ok(out)
    }

    pub fn truncate(&self, bound: usize) -> TruncSeries {
        self.shift_extend(0, bound).expect("non-negative shift")
    }
}

/// Product of two flat degree-major series, truncated to `bound` degrees.
/// Nonzero blocks of `b` are turned into multiplication matrices once.
pub(crate) fn mul_flat(field: &ExtensionField, a: &[Scalar], b: &[Scalar], bound: usize) -> Vec<Scalar> {
    let n = field.degree();
    let base = field.base();
    let mut out = vec![base.zero(); n * bound];
    let b_blocks: Vec<(usize, Vec<Vec<Scalar>>)> = (0..bound)
        .filter(|&e| b[e * n..(e + 1) * n].iter().any(|c| !c.is_zero()))
        .map(|e| (e, field.mul_matrix(&b[e * n..(e + 1) * n])))
        .collect();
    for d in 0..bound {
        let block = &a[d * n..(d + 1) * n];
        if block.iter().all(Scalar::is_zero) {
            continue;
        }
        for (e, m) in &b_blocks {
            let t = d + e;
            if t >= bound {
                break;
            }
            for (k, row) in m.iter().enumerate() {
                let o = &mut out[t * n + k];
                for (x, y) in row.iter().zip(block) {
                    if !x.is_zero() && !y.is_zero() {
                        o.add_mul_assign(x, y);
                    }
                }
            }
        }
    }
    out
}

/// Prints in the input grammar, e.g. `i*X^3 + X^4` or `(1 + i)*X^2 - X^5`.
impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = &self.field;
        let mut first = true;
        for d in 0..self.bound {
            let c = self.coeff_coords(d);
            if c.iter().all(Scalar::is_zero) {
                continue;
            }
            let xpow = match d {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{d}"),
            };
            let (neg, body) = if field.term_count(c) == 1 {
                let i = c.iter().position(|x| !x.is_zero()).unwrap();
                let neg = c[i].is_negative();
                let mag = if neg { -&c[i] } else { c[i].clone() };
                let label = field.basis_label(i);
                let mut parts = Vec::new();
                if !mag.is_one() || (i == 0 && d == 0) {
                    parts.push(mag.to_string());
                }
                if i != 0 {
                    parts.push(label);
                }
                if d > 0 {
                    parts.push(xpow);
                }
                (neg, parts.join("*"))
            } else if d == 0 && first {
                (false, field.format(c))
            } else {
                let inner = field.format(c);
                if d == 0 {
                    (false, format!("({inner})"))
                } else {
                    (false, format!("({inner})*{xpow}"))
                }
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            f.write_str(&body)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::BaseField;
    use proptest::prelude::*;

    const Q: BaseField = BaseField::Rationals;

    fn gaussian() -> Arc<ExtensionField> {
        let q = |v| Q.from_i64(v);
        Arc::new(
            ExtensionField::trivial(Q)
                .adjoin("i", vec![vec![q(1)], vec![q(0)], vec![q(1)]])
                .unwrap(),
        )
    }

    fn series(k: &Arc<ExtensionField>, terms: &[(usize, i64, i64)], bound: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(k.clone(), bound);
        for &(d, re, im) in terms {
            s.set_coeff(d, &[Q.from_i64(re), Q.from_i64(im)]).unwrap();
        }
        s
    }

    #[test]
    fn product_of_example_generator_with_x5() {
        let k = gaussian();
        let g = series(&k, &[(3, 0, 1), (4, 1, 0)], 20);
        let x5 = series(&k, &[(5, 1, 0)], 20);
        let expected = series(&k, &[(8, 0, 1), (9, 1, 0)], 20);
        assert_eq!(g.mul(&x5).unwrap(), expected);
        assert_eq!(g.mul(&TruncSeries::one(k.clone(), 20)).unwrap(), g);
    }

    #[test]
    fn square_of_binomial() {
        let k = gaussian();
        let s = series(&k, &[(2, 1, 0), (3, -1, 0)], 10);
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq, series(&k, &[(4, 1, 0), (5, -2, 0), (6, 1, 0)], 10));
    }

    #[test]
    fn valuation_cases() {
        let k = gaussian();
        assert_eq!(series(&k, &[(3, 0, 1), (4, 1, 0)], 10).valuation(), Some(3));
        assert_eq!(TruncSeries::zero(k, 10).valuation(), None);
    }

    #[test]
    fn shifting() {
        let k = gaussian();
        let x3 = series(&k, &[(3, 1, 0)], 10);
        assert_eq!(x3.shift_extend(2, 10).unwrap(), series(&k, &[(5, 1, 0)], 10));
        let g = series(&k, &[(3, 0, 1), (4, 1, 0)], 10);
        assert_eq!(g.shift_extend(-3, 10).unwrap(), series(&k, &[(0, 0, 1), (1, 1, 0)], 10));
        assert!(matches!(
            x3.shift_extend(-4, 10),
            Err(Error::ShiftDropsCoefficient { .. })
        ));
    }

    #[test]
    fn field_mismatch_is_rejected() {
        let k = gaussian();
        let other = Arc::new(ExtensionField::trivial(Q));
        let a = TruncSeries::one(k, 4);
        let b = TruncSeries::one(other, 4);
        assert_eq!(a.mul(&b), Err(Error::FieldMismatch));
    }

    #[test]
    fn printing() {
        let k = gaussian();
        assert_eq!(series(&k, &[(3, 0, 1), (4, 1, 0)], 10).to_string(), "i*X^3 + X^4");
        assert_eq!(series(&k, &[(2, 1, 1), (5, -1, 0)], 10).to_string(), "(1 + i)*X^2 - X^5");
        assert_eq!(series(&k, &[(0, 1, 0), (1, 0, -2)], 10).to_string(), "1 - 2*i*X");
        assert_eq!(series(&k, &[(0, 1, 1), (1, 1, 0)], 10).to_string(), "1 + i + X");
        assert_eq!(TruncSeries::zero(k, 3).to_string(), "0");
    }

    fn arb_series(bound: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((-3i64..=3, -3i64..=3), bound)
    }

    fn build(k: &Arc<ExtensionField>, c: &[(i64, i64)]) -> TruncSeries {
        TruncSeries::from_coeffs(
            k.clone(),
            c.iter().map(|&(a, b)| vec![Q.from_i64(a), Q.from_i64(b)]).collect(),
        )
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_axioms(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
            let k = gaussian();
            let (a, b, c) = (build(&k, &a), build(&k, &b), build(&k, &c));
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn valuation_is_additive(a in arb_series(8), b in arb_series(8)) {
            let k = gaussian();
            let (a, b) = (build(&k, &a), build(&k, &b));
            if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
                let p = a.mul(&b).unwrap();
                if va + vb < 8 {
                    prop_assert_eq!(p.valuation(), Some(va + vb));
                } else {
                    prop_assert_eq!(p.valuation(), None);
                }
            }
        }
    }
}
