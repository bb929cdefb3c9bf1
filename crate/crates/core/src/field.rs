//! Finite extensions K/k presented as towers of simple extensions.
//!
//! Elements are coordinate vectors over k in the power-product basis
//! induced by the tower: for generators `a` (degree 2) and `b` (degree 2)
//! the basis is `1, a, b, a*b`, with the earliest generator varying
//! fastest.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{RowReducer, Subspace};
use crate::scalar::{BaseField, Scalar};

/// One level of the tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// Coefficients of the monic minimal polynomial, constant term first,
    /// each a coordinate vector over the preceding level.
    pub min_poly: Vec<Vec<Scalar>>,
}

impl Generator {
    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionField {
    base: BaseField,
    generators: Vec<Generator>,
    degree: usize,
    /// `table[i][j]` is the coordinate vector of `e_i * e_j`.
    table: Vec<Vec<Vec<Scalar>>>,
}

impl ExtensionField {
    /// The trivial extension K = k.
    pub fn trivial(base: BaseField) -> Self {
        ExtensionField {
            base,
            generators: Vec::new(),
            degree: 1,
            table: vec![vec![vec![base.one()]]],
        }
    }

    /// Builds the whole tower at once.
    pub fn build_tower<I>(base: BaseField, tower: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Vec<Vec<Scalar>>)>,
    {
        let mut field = ExtensionField::trivial(base);
        for (name, poly) in tower {
            field = field.adjoin(&name, poly)?;
        }
        Ok(field)
    }

    /// Adjoins a root `name` of the monic polynomial `min_poly` whose
    /// coefficients (constant first) are elements of `self`.
    pub fn adjoin(&self, name: &str, min_poly: Vec<Vec<Scalar>>) -> Result<Self> {
        let bad = |reason: &str| Error::BadMinimalPolynomial {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        if !is_identifier(name) || name == "X" {
            return Err(Error::DuplicateGenerator(name.to_string()));
        }
        if self.generators.iter().any(|g| g.name == name) {
            return Err(Error::DuplicateGenerator(name.to_string()));
        }
        if min_poly.len() < 2 {
            return Err(bad("degree must be at least 1"));
        }
        if let Some(c) = min_poly.iter().find(|c| c.len() != self.degree) {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: c.len(),
            });
        }
        if *min_poly.last().unwrap() != self.one() {
            return Err(bad("polynomial is not monic"));
        }

        let d = min_poly.len() - 1;
        let n0 = self.degree;
        // g^e reduced to a polynomial of degree < d, for e < 2d - 1.
        let mut powers: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(2 * d);
        for e in 0..d {
            let mut p = vec![self.zero(); d];
            p[e] = self.one();
            powers.push(p);
        }
        while powers.len() < 2 * d - 1 {
            let prev = powers.last().unwrap();
            let mut next = vec![self.zero(); d];
            next[1..d].clone_from_slice(&prev[..d - 1]);
            let top = &prev[d - 1];
            for (j, c) in min_poly[..d].iter().enumerate() {
                let t = self.mul(top, c);
                next[j] = sub_vec(&next[j], &t);
            }
            powers.push(next);
        }

        let n = n0 * d;
        let mut table = vec![vec![Vec::new(); n]; n];
        for e1 in 0..d {
            for b1 in 0..n0 {
                for e2 in 0..d {
                    for b2 in 0..n0 {
                        let c = &self.table[b1][b2];
                        let mut out = Vec::with_capacity(n);
                        for coeff in &powers[e1 + e2] {
                            out.extend(self.mul(c, coeff));
                        }
                        table[e1 * n0 + b1][e2 * n0 + b2] = out;
                    }
                }
            }
        }

        let mut generators = self.generators.clone();
        generators.push(Generator {
            name: name.to_string(),
            min_poly,
        });
        let field = ExtensionField {
            base: self.base,
            generators,
            degree: n,
            table,
        };
        field.validate_table()?;
        Ok(field)
    }

    fn validate_table(&self) -> Result<()> {
        let n = self.degree;
        for i in 0..n {
            for j in 0..n {
                if self.table[i][j] != self.table[j][i] {
                    return Err(Error::BadStructureConstants("commutative", vec![i, j]));
                }
                for k in 0..n {
                    let left = self.mul(&self.table[i][j], &self.unit(k));
                    let right = self.mul(&self.unit(i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::BadStructureConstants("associative", vec![i, j, k]));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    /// n = dim_k K.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn zero(&self) -> Vec<Scalar> {
        vec![self.base.zero(); self.degree]
    }

    pub fn one(&self) -> Vec<Scalar> {
        self.unit(0)
    }

    pub fn unit(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.zero();
        v[i] = self.base.one();
        v
    }

    /// The element `c` of k embedded in K.
    pub fn scalar(&self, c: Scalar) -> Vec<Scalar> {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    /// Coordinates of the generator called `name`, if any.
    pub fn generator(&self, name: &str) -> Option<Vec<Scalar>> {
        let mut stride = 1;
        for g in &self.generators {
            if g.name == name {
                if g.degree() == 1 {
                    // Linear polynomial: the generator is -c_0 from the level below.
                    let mut v = self.zero();
                    for (o, c) in v.iter_mut().zip(&g.min_poly[0]) {
                        *o = -c;
                    }
                    return Some(v);
                }
                return Some(self.unit(stride));
            }
            stride *= g.degree();
        }
        None
    }

    /// Exponent vector of basis element `i` (one entry per generator).
    pub fn basis_exponents(&self, mut i: usize) -> Vec<usize> {
        self.generators
            .iter()
            .map(|g| {
                let e = i % g.degree();
                i /= g.degree();
                e
            })
            .collect()
    }

    /// Printed name of basis element `i`: `1`, `a`, `a^2*b`, ...
    pub fn basis_label(&self, i: usize) -> String {
        let parts: Vec<String> = self
            .basis_exponents(i)
            .into_iter()
            .zip(&self.generators)
            .filter(|(e, _)| *e > 0)
            .map(|(e, g)| {
                if e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn add(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        sub_vec(x, y)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_zero() {
                        o.add_mul_assign(&c, t);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `x ↦ x·y`: entry `[k][j]` is coordinate `k` of `e_j·y`.
    pub fn mul_matrix(&self, y: &[Scalar]) -> Vec<Vec<Scalar>> {
        let n = self.degree;
        let mut m = vec![self.zero(); n];
        for j in 0..n {
            let col = self.mul(&self.unit(j), y);
            for (k, c) in col.into_iter().enumerate() {
                m[k][j] = c;
            }
        }
        m
    }

    /// Inverse by solving `M_x · y = 1`.
    pub fn inv(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.iter().all(Scalar::is_zero) {
            return Err(Error::InverseOfZero);
        }
        let n = self.degree;
        let m = self.mul_matrix(x);
        // Augmented system [M | 1].
        let mut red = RowReducer::new(self.base, n + 1);
        for (k, row) in m.into_iter().enumerate() {
            let mut r = row;
            r.push(if k == 0 { self.base.one() } else { self.base.zero() });
            red.insert(r);
        }
        let sol = red.into_subspace();
        if sol.dim() != n || sol.pivots().iter().any(|&p| p >= n) {
            return Err(Error::NotAField {
                element: self.format(x),
            });
        }
        Ok(sol.rows().iter().map(|r| r[n].clone()).collect())
    }

    pub fn is_zero(&self, x: &[Scalar]) -> bool {
        x.iter().all(Scalar::is_zero)
    }

    /// Human-readable form: `1 + a - 1/2*a*b`.
    pub fn format(&self, x: &[Scalar]) -> String {
        let mut out = String::new();
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let label = self.basis_label(i);
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&label);
            } else {
                out.push_str(&format!("{mag}*{label}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Number of nonzero coordinates; 1 means a scalar multiple of a basis
    /// element, which prints without parentheses.
    pub(crate) fn term_count(&self, x: &[Scalar]) -> usize {
        x.iter().filter(|c| !c.is_zero()).count()
    }

    /// The line k·1.
    pub fn k_line(&self) -> Subspace {
        Subspace::span(self.base, self.degree, [self.one()]).expect("dimension")
    }

    /// K itself as a k-space.
    pub fn full_space(&self) -> Subspace {
        Subspace::full(self.base, self.degree)
    }

    fn check_space(&self, v: &Subspace) -> Result<()> {
        if v.ambient_dim() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: v.ambient_dim(),
            });
        }
        Ok(())
    }

    /// `(V : W) = {x ∈ K | xW ⊆ V}`: the kernel of the maps
    /// `x ↦ x·w mod V` over a basis `{w}` of `W`.
    pub fn subspace_colon(&self, v: &Subspace, w: &Subspace) -> Result<Subspace> {
        self.check_space(v)?;
        self.check_space(w)?;
        let ann = v.annihilator();
        let mut constraints = Vec::new();
        for wj in w.rows() {
            let m = self.mul_matrix(wj);
            for a in ann.rows() {
                constraints.push(row_times_matrix(a, &m, self.base));
            }
        }
        Ok(Subspace::kernel(self.base, self.degree, constraints))
    }

    /// Span of all products `v·w`.
    pub fn product_span(&self, v: &Subspace, w: &Subspace) -> Result<Subspace> {
        self.check_space(v)?;
        self.check_space(w)?;
        let mut red = RowReducer::new(self.base, self.degree);
        for a in v.rows() {
            for b in w.rows() {
                red.insert(self.mul(a, b));
                if red.is_full() {
                    return Ok(red.into_subspace());
                }
            }
        }
        Ok(red.into_subspace())
    }
}

pub(crate) fn sub_vec(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// `a^T · M` for a square matrix given row-wise.
pub(crate) fn row_times_matrix(a: &[Scalar], m: &[Vec<Scalar>], base: BaseField) -> Vec<Scalar> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut out = vec![base.zero(); ncols];
    for (ak, row) in a.iter().zip(m) {
        if ak.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.is_zero() {
                o.add_mul_assign(ak, x);
            }
        }
    }
    out
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An element of K bundled with its field.
#[derive(Debug, Clone)]
pub struct FieldElement {
    field: Arc<ExtensionField>,
    coords: Vec<Scalar>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
            && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn new(field: Arc<ExtensionField>, coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::DimensionMismatch {
                expected: field.degree(),
                found: coords.len(),
            });
        }
        Ok(FieldElement { field, coords })
    }

    pub fn zero(field: Arc<ExtensionField>) -> Self {
        let coords = field.zero();
        FieldElement { field, coords }
    }

    pub fn one(field: Arc<ExtensionField>) -> Self {
        let coords = field.one();
        FieldElement { field, coords }
    }

    pub fn field(&self) -> &Arc<ExtensionField> {
        &self.field
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.coords)
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            field: self.field.clone(),
            coords: self.field.inv(&self.coords)?,
        })
    }

    fn binary(&self, rhs: &FieldElement, f: impl Fn(&ExtensionField, &[Scalar], &[Scalar]) -> Vec<Scalar>) -> FieldElement {
        assert!(
            Arc::ptr_eq(&self.field, &rhs.field) || self.field == rhs.field,
            "elements of different fields"
        );
        FieldElement {
            field: self.field.clone(),
            coords: f(&self.field, &self.coords, &rhs.coords),
        }
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.binary(rhs, ExtensionField::add)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.binary(rhs, ExtensionField::sub)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.binary(rhs, ExtensionField::mul)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.coords))
    }
}
