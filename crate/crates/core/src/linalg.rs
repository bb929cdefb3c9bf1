//! Canonical-form linear algebra over the base field.
//!
//! Every [`Subspace`] is stored as the nonzero rows of its reduced row
//! echelon form, so two subspaces are equal exactly when their stored
//! representations are.

use crate::error::{Error, Result};
use crate::scalar::{BaseField, Scalar};

/// Incremental Gauss-Jordan elimination. Rows are kept fully reduced with
/// unit pivots at all times.
#[derive(Debug, Clone)]
pub struct RowReducer {
    base: BaseField,
    ncols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowReducer {
    pub fn new(base: BaseField, ncols: usize) -> Self {
        RowReducer {
            base,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Remainder of `v` after elimination against the current rows.
    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = -&v[p];
            for j in p..self.ncols {
                if !row[j].is_zero() {
                    v[j].add_mul_assign(&c, &row[j]);
                }
            }
        }
        v
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        let mut v = self.reduce(v);
        let Some(q) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[q].inv().expect("nonzero pivot");
        for x in v[q..].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[q].is_zero() {
                continue;
            }
            let c = -&row[q];
            for j in q..self.ncols {
                if !v[j].is_zero() {
                    row[j].add_mul_assign(&c, &v[j]);
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(q);
        true
    }

    pub fn into_subspace(self) -> Subspace {
        let mut pairs: Vec<_> = self.pivots.into_iter().zip(self.rows).collect();
        pairs.sort_by_key(|(p, _)| *p);
        let (pivots, rows) = pairs.into_iter().unzip();
        Subspace {
            base: self.base,
            ambient: self.ncols,
            rows,
            pivots,
        }
    }

    /// Basis of `{x : r·x = 0 for every inserted row r}`.
    pub fn into_kernel(self) -> Subspace {
        let base = self.base;
        let ncols = self.ncols;
        let echelon = self.into_subspace();
        let mut is_pivot = vec![false; ncols];
        for &p in &echelon.pivots {
            is_pivot[p] = true;
        }
        let mut out = RowReducer::new(base, ncols);
        for free in (0..ncols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![base.zero(); ncols];
            x[free] = base.one();
            for (row, &p) in echelon.rows.iter().zip(&echelon.pivots) {
                x[p] = -&row[free];
            }
            out.insert(x);
        }
        out.into_subspace()
    }
}

/// A k-subspace of k^m in canonical (reduced row echelon) form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    base: BaseField,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(base: BaseField, ambient: usize) -> Self {
        RowReducer::new(base, ambient).into_subspace()
    }

    pub fn full(base: BaseField, ambient: usize) -> Self {
        let mut rows = Vec::with_capacity(ambient);
        for i in 0..ambient {
            let mut v = vec![base.zero(); ambient];
            v[i] = base.one();
            rows.push(v);
        }
        Subspace {
            base,
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    /// The span of `vectors`, in canonical form.
    pub fn span<I>(base: BaseField, ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut red = RowReducer::new(base, ambient);
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
            red.insert(v);
        }
        Ok(red.into_subspace())
    }

    /// `{x : c·x = 0 for every constraint c}`.
    pub fn kernel<I>(base: BaseField, ambient: usize, constraints: I) -> Self
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut red = RowReducer::new(base, ambient);
        for c in constraints {
            red.insert(c);
            if red.is_full() {
                break;
            }
        }
        red.into_kernel()
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    fn reducer(&self) -> RowReducer {
        RowReducer {
            base: self.base,
            ncols: self.ambient,
            rows: self.rows.clone(),
            pivots: self.pivots.clone(),
        }
    }

    /// Remainder of `v` modulo this subspace; zero iff `v` is a member.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = -&v[p];
            for j in p..self.ambient {
                if !row[j].is_zero() {
                    v[j].add_mul_assign(&c, &row[j]);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        Ok(self.reduce(v).iter().all(Scalar::is_zero))
    }

    /// `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        Ok(self
            .rows
            .iter()
            .all(|r| other.reduce(r).iter().all(Scalar::is_zero)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let (big, small) = if self.dim() >= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        let mut red = big.reducer();
        for r in &small.rows {
            red.insert(r.clone());
        }
        Ok(red.into_subspace())
    }

    /// The annihilator under the standard pairing: `{y : r·y = 0 ∀ r}`.
    pub fn annihilator(&self) -> Subspace {
        self.reducer().into_kernel()
    }

    /// Intersection as the kernel of the stacked annihilator constraints.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let a = self.annihilator();
        let b = other.annihilator();
        Ok(Subspace::kernel(
            self.base,
            self.ambient,
            a.rows.into_iter().chain(b.rows),
        ))
    }

    /// Rows whose pivot lies in `cols`, restricted to `cols`. When `cols`
    /// is a suffix-closed block structure (as for degree filtrations) the
    /// result is again canonical.
    pub(crate) fn block(&self, cols: std::ops::Range<usize>) -> Subspace {
        let width = cols.len();
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if cols.contains(&p) {
                rows.push(row[cols.clone()].to_vec());
                pivots.push(p - cols.start);
            }
        }
        Subspace {
            base: self.base,
            ambient: width,
            rows,
            pivots,
        }
    }

    /// Rows with pivot at or beyond `col`. This is the canonical form of
    /// the intersection with `{x : x_j = 0 for j < col}`.
    pub(crate) fn tail_from(&self, col: usize) -> Subspace {
        let start = self.pivots.partition_point(|&p| p < col);
        Subspace {
            base: self.base,
            ambient: self.ambient,
            rows: self.rows[start..].to_vec(),
            pivots: self.pivots[start..].to_vec(),
        }
    }

    /// Embed block-wise: `parts[b]` lands in columns `b*width..(b+1)*width`.
    pub(crate) fn direct_sum(base: BaseField, parts: &[Subspace], width: usize) -> Subspace {
        let ambient = parts.len() * width;
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for (b, part) in parts.iter().enumerate() {
            debug_assert_eq!(part.ambient, width);
            for (row, &p) in part.rows.iter().zip(&part.pivots) {
                let mut v = vec![base.zero(); ambient];
                v[b * width..(b + 1) * width].clone_from_slice(row);
                rows.push(v);
                pivots.push(b * width + p);
            }
        }
        Subspace {
            base,
            ambient,
            rows,
            pivots,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: BaseField = BaseField::Rationals;

    fn vecq(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    fn unit(m: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![Q.zero(); m];
        v[i] = Q.one();
        v
    }

    #[test]
    fn sum_of_coordinate_lines() {
        let a = Subspace::span(Q, 4, [unit(4, 0)]).unwrap();
        let b = Subspace::span(Q, 4, [unit(4, 1)]).unwrap();
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
    }

    #[test]
    fn idempotence_and_identity() {
        let v = Subspace::span(Q, 3, [vecq(&[1, 2, 3]), vecq(&[0, 1, 1])]).unwrap();
        assert_eq!(v.sum(&v).unwrap(), v);
        assert_eq!(v.intersect(&Subspace::full(Q, 3)).unwrap(), v);
    }

    #[test]
    fn canonical_form_is_spanning_set_independent() {
        let a = Subspace::span(Q, 3, [vecq(&[1, 2, 3]), vecq(&[0, 1, 1])]).unwrap();
        let b = Subspace::span(Q, 3, [vecq(&[1, 3, 4]), vecq(&[2, 5, 7]), vecq(&[1, 1, 2])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows()[0], vecq(&[1, 0, 1]));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::zero(Q, 2);
        let b = Subspace::zero(Q, 3);
        assert!(a.sum(&b).is_err());
        assert!(a.intersect(&b).is_err());
        assert!(a.is_subspace_of(&b).is_err());
        assert!(a.contains(&vecq(&[1])).is_err());
    }

    #[test]
    fn kernel_of_single_constraint() {
        let k = Subspace::kernel(Q, 3, [vecq(&[1, 1, 1])]);
        assert_eq!(k.dim(), 2);
        assert!(k.contains(&vecq(&[1, -1, 0])).unwrap());
        assert!(!k.contains(&vecq(&[1, 0, 0])).unwrap());
    }

    /// Rank by plain Gaussian elimination on a copy, independent of
    /// `RowReducer`.
    fn naive_rank(mut m: Vec<Vec<Scalar>>, ncols: usize) -> usize {
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][c].inv().unwrap();
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let f = &m[r][c] * &inv;
                    for j in 0..ncols {
                        let t = &f * &m[rank][j];
                        m[r][j] = &m[r][j] - &t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn small_vectors(m: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-2i64..=2, m), 0..=m)
    }

    proptest! {
        #[test]
        fn modular_law(us in small_vectors(6), vs in small_vectors(6)) {
            let u = Subspace::span(Q, 6, us.iter().map(|r| vecq(r))).unwrap();
            let v = Subspace::span(Q, 6, vs.iter().map(|r| vecq(r))).unwrap();
            let sum_rank = naive_rank(
                us.iter().chain(&vs).map(|r| vecq(r)).collect(), 6);
            let inter = u.intersect(&v).unwrap();
            prop_assert_eq!(u.dim(), naive_rank(us.iter().map(|r| vecq(r)).collect(), 6));
            prop_assert_eq!(u.dim() + v.dim(), sum_rank + inter.dim());
            prop_assert!(inter.is_subspace_of(&u).unwrap());
            prop_assert!(inter.is_subspace_of(&v).unwrap());
        }

        #[test]
        fn prime_field_modular_law(us in small_vectors(5), vs in small_vectors(5)) {
            let f = BaseField::Prime(3);
            let conv = |r: &Vec<i64>| r.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
            let u = Subspace::span(f, 5, us.iter().map(conv)).unwrap();
            let v = Subspace::span(f, 5, vs.iter().map(conv)).unwrap();
            let s = u.sum(&v).unwrap();
            let i = u.intersect(&v).unwrap();
            prop_assert_eq!(u.dim() + v.dim(), s.dim() + i.dim());
        }
    }
}
