//! Rings `k ⊆ R ⊆ K[[X]]` and their fractional ideals, held modulo the
//! conductor `X^N K[[X]]`.
//!
//! Every fractional ideal `F` handled here satisfies
//! `X^N K[[X]] ⊆ F ⊆ K[[X]]`, so it is determined by its image in the
//! `nN`-dimensional space `K[[X]]/X^N K[[X]]` (coordinates degree-major).

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ExtensionField;
use crate::linalg::{RowReducer, Subspace};
use crate::scalar::Scalar;
use crate::series::{mul_flat, TruncSeries};

/// Degree cap for [`RingModel::build_generated`] when none is given.
pub const DEFAULT_DEGREE_CAP: usize = 512;

/// `k + X V_1 + ... + X^{N-1} V_{N-1} + X^N K[[X]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GsrSpec {
    pub field: Arc<ExtensionField>,
    /// `spaces[i]` is `V_i`; its length is `N`.
    pub spaces: Vec<Subspace>,
}

impl GsrSpec {
    pub fn conductor(&self) -> usize {
        self.spaces.len()
    }
}

/// The value semigroup `v(R) = {s_0 = 0 < s_1 < ... < s_r = c, →}` together
/// with `N = s_{r+l} = c + l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupData {
    /// `s_0, ..., s_{r+l}` (the last entry is `N`).
    pub s_list: Vec<usize>,
    pub gaps: Vec<usize>,
    /// Least `c` with `[c, ∞) ⊆ v(R)`.
    pub c: usize,
    /// The conductor exponent `N`.
    pub n: usize,
    pub r: usize,
    pub l: usize,
}

impl SemigroupData {
    /// Semigroup data from the set of values below `n`; every integer
    /// `≥ n` is assumed to be a value.
    pub fn from_values(below: &[bool], n: usize) -> Self {
        let mut c = n;
        while c > 0 && below[c - 1] {
            c -= 1;
        }
        let mut s_list: Vec<usize> = (0..n).filter(|&i| below[i]).collect();
        s_list.push(n);
        let gaps = (0..c).filter(|&i| !below[i]).collect();
        let r = s_list.iter().position(|&s| s == c).expect("c is a value");
        SemigroupData {
            s_list,
            gaps,
            c,
            n,
            r,
            l: n - c,
        }
    }

    /// `r + l`, the length of the chain `𝔞_0 ⊋ ... ⊋ 𝔞_{r+l}`.
    pub fn chain_length(&self) -> usize {
        self.s_list.len() - 1
    }

    pub fn contains(&self, x: usize) -> bool {
        x >= self.c || self.s_list.binary_search(&x).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingModel {
    field: Arc<ExtensionField>,
    conductor: usize,
    image: Subspace,
    filtration: Vec<Subspace>,
    semigroup: SemigroupData,
    n_list: Vec<usize>,
}

impl RingModel {
    /// Builds a generalized semigroup ring, checking locality and
    /// multiplicative closure of the spaces.
    pub fn build_gsr(spec: &GsrSpec) -> Result<RingModel> {
        let field = &spec.field;
        let n = field.degree();
        let big_n = spec.conductor();
        for v in &spec.spaces {
            if v.ambient_dim() != n || v.base() != field.base() {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.ambient_dim(),
                });
            }
        }
        if big_n > 0 && spec.spaces[0] != field.k_line() {
            return Err(Error::NotLocal);
        }
        for i in 1..big_n {
            if spec.spaces[i].is_zero() {
                continue;
            }
            for j in i..big_n - i {
                if spec.spaces[j].is_zero() {
                    continue;
                }
                let prod = field.product_span(&spec.spaces[i], &spec.spaces[j])?;
                if !prod.is_subspace_of(&spec.spaces[i + j])? {
                    return Err(Error::NotMultiplicativelyClosed(i, j, i + j));
                }
            }
        }
        let image = Subspace::direct_sum(field.base(), &spec.spaces, n);
        Ok(RingModel::assemble(field.clone(), big_n, image))
    }

    /// The complete subring `k[[g_1, ..., g_m]]`, found as the fixpoint of
    /// multiplying by the generators modulo `X^D`, doubling `D` until the
    /// leading spaces are all of `K` on `e` consecutive degrees (`e` the
    /// least generator valuation).
    pub fn build_generated(
        field: Arc<ExtensionField>,
        gens: &[TruncSeries],
        cap: usize,
    ) -> Result<RingModel> {
        let n = field.degree();
        let mut vals = Vec::with_capacity(gens.len());
        for (index, g) in gens.iter().enumerate() {
            if !Arc::ptr_eq(g.field(), &field) && **g.field() != *field {
                return Err(Error::FieldMismatch);
            }
            match g.valuation() {
                Some(v) if v > 0 => vals.push(v),
                valuation => return Err(Error::BadGenerator { index, valuation }),
            }
        }
        let min_bound = gens.iter().map(TruncSeries::bound).min().unwrap_or(usize::MAX);
        let effective_cap = cap.min(min_bound);
        let (Some(&e), Some(&maxv)) = (vals.iter().min(), vals.iter().max()) else {
            return Err(Error::ConductorNotFound {
                cap,
                partial: vec![1],
            });
        };

        let mut bound = (2 * (maxv + e)).min(effective_cap);
        loop {
            let closure = generated_closure(&field, gens, bound);
            let dims: Vec<usize> = (0..bound)
                .map(|i| closure.block(i * n..(i + 1) * n).dim())
                .collect();
            if let Some(big_n) = find_conductor(&dims, n, e) {
                let image = closure.block(0..big_n * n);
                return Ok(RingModel::assemble(field, big_n, image));
            }
            if bound >= effective_cap {
                if effective_cap < cap {
                    return Err(Error::InsufficientBound {
                        required: (2 * bound).min(cap),
                        found: min_bound,
                    });
                }
                return Err(Error::ConductorNotFound { cap, partial: dims });
            }
            bound = (2 * bound).min(effective_cap);
        }
    }

    /// A ring from an explicit image `W` of `R` modulo `X^N K[[X]]`.
    /// Checks `1 ∈ W`, closure under multiplication and locality; a
    /// non-minimal `N` is reduced.
    pub fn from_image(field: Arc<ExtensionField>, conductor: usize, image: Subspace) -> Result<RingModel> {
        let n = field.degree();
        if image.ambient_dim() != n * conductor {
            return Err(Error::DimensionMismatch {
                expected: n * conductor,
                found: image.ambient_dim(),
            });
        }
        if conductor > 0 {
            let mut one = vec![field.base().zero(); n * conductor];
            one[0] = field.base().one();
            if !image.contains(&one)? {
                return Err(Error::InvalidRing("1 is not in the image".into()));
            }
            if image.block(0..n) != field.k_line() {
                return Err(Error::NotLocal);
            }
        }
        let ring = RingModel::assemble(field, conductor, image);
        if !ring.is_multiplicatively_closed() {
            return Err(Error::InvalidRing("image is not closed under multiplication".into()));
        }
        Ok(ring)
    }

    fn assemble(field: Arc<ExtensionField>, conductor: usize, image: Subspace) -> RingModel {
        let n = field.degree();
        let mut big_n = conductor;
        let mut image = image;
        while big_n > 0 && image.block((big_n - 1) * n..big_n * n).is_full() {
            big_n -= 1;
            image = image.block(0..big_n * n);
        }
        let filtration: Vec<Subspace> = (0..big_n).map(|i| image.block(i * n..(i + 1) * n)).collect();
        let values: Vec<bool> = filtration.iter().map(|v| !v.is_zero()).collect();
        let semigroup = SemigroupData::from_values(&values, big_n);
        let chain = semigroup.chain_length();
        let n_list = semigroup.s_list[..chain]
            .iter()
            .map(|&s| filtration[s].dim())
            .collect();
        RingModel {
            field,
            conductor: big_n,
            image,
            filtration,
            semigroup,
            n_list,
        }
    }

    pub fn field(&self) -> &Arc<ExtensionField> {
        &self.field
    }

    /// n = dim_k K.
    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// The conductor exponent `N`.
    pub fn conductor(&self) -> usize {
        self.conductor
    }

    /// Dimension of the ambient space `K[[X]]/X^N K[[X]]`.
    pub fn ambient_dim(&self) -> usize {
        self.degree() * self.conductor
    }

    /// `W`, the image of `R`.
    pub fn image(&self) -> &Subspace {
        &self.image
    }

    pub fn semigroup(&self) -> &SemigroupData {
        &self.semigroup
    }

    /// `n_i = dim_k V_R(s_i)` for `0 ≤ i < r + l`.
    pub fn n_list(&self) -> &[usize] {
        &self.n_list
    }

    /// `V_R(i)`: leading coefficients at degree `i` of elements of `R` of
    /// valuation `≥ i`. Equal to `K` for `i ≥ N`.
    pub fn filtration_space(&self, i: usize) -> Subspace {
        self.filtration
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.full_space())
    }

    /// The spaces `V_R(0), ..., V_R(N-1)`.
    pub fn filtration(&self) -> &[Subspace] {
        &self.filtration
    }

    /// Whether `R` is itself of the form `Σ V_i X^i`.
    pub fn is_gsr(&self) -> bool {
        Subspace::direct_sum(self.field.base(), &self.filtration, self.degree()) == self.image
    }

    /// Truncated products of basis elements stay in `W`.
    pub fn is_multiplicatively_closed(&self) -> bool {
        let rows = self.image.rows();
        for (i, u) in rows.iter().enumerate() {
            for v in &rows[i..] {
                let p = mul_flat(&self.field, u, v, self.conductor);
                if !self.image.contains(&p).unwrap_or(false) {
                    return false;
                }
            }
        }
        true
    }

    /// `{z mod X^N | z·u ∈ target for every basis vector u of divisor}`.
    /// Exact whenever both spaces represent fractional ideals between
    /// `X^N K[[X]]` and `K[[X]]`: then `z·X^N K[[X]] ⊆ X^N K[[X]]` and the
    /// condition depends only on `z mod X^N`.
    fn colon_space(&self, target: &Subspace, divisor: &Subspace) -> Subspace {
        let n = self.degree();
        let big_n = self.conductor;
        let base = self.field.base();
        let ann = target.annihilator();
        let mut red = RowReducer::new(base, n * big_n);
        'outer: for u in divisor.rows() {
            let blocks: Vec<(usize, Vec<Vec<Scalar>>)> = (0..big_n)
                .filter(|&e| u[e * n..(e + 1) * n].iter().any(|c| !c.is_zero()))
                .map(|e| (e, self.field.mul_matrix(&u[e * n..(e + 1) * n])))
                .collect();
            for a in ann.rows() {
                // Row of the map z ↦ a·(z u): entry (d, j) collects
                // Σ_e Σ_k a[(d+e), k] · M(u_e)[k][j].
                let mut row = vec![base.zero(); n * big_n];
                for d in 0..big_n {
                    for (e, m) in &blocks {
                        let t = d + e;
                        if t >= big_n {
                            break;
                        }
                        let a_block = &a[t * n..(t + 1) * n];
                        for (k, ak) in a_block.iter().enumerate() {
                            if ak.is_zero() {
                                continue;
                            }
                            for j in 0..n {
                                if !m[k][j].is_zero() {
                                    row[d * n + j].add_mul_assign(ak, &m[k][j]);
                                }
                            }
                        }
                    }
                }
                red.insert(row);
                if red.is_full() {
                    break 'outer;
                }
            }
        }
        red.into_kernel()
    }

    fn wrap(&self, space: Subspace) -> FractionalIdeal<'_> {
        FractionalIdeal { ring: self, space }
    }

    /// `R` as a fractional ideal of itself.
    pub fn unit_ideal(&self) -> FractionalIdeal<'_> {
        self.wrap(self.image.clone())
    }

    /// The integral closure `K[[X]]`.
    pub fn closure_ideal(&self) -> FractionalIdeal<'_> {
        self.wrap(Subspace::full(self.field.base(), self.ambient_dim()))
    }

    /// A fractional ideal from its image, checking it is an `R`-module.
    pub fn ideal(&self, space: Subspace) -> Result<FractionalIdeal<'_>> {
        if space.ambient_dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: space.ambient_dim(),
            });
        }
        let f = self.wrap(space);
        if !f.is_module() {
            return Err(Error::InvalidRing("subspace is not an R-module".into()));
        }
        Ok(f)
    }

    /// `𝔞_i = {x ∈ R | v(x) ≥ s_i}` for `0 ≤ i ≤ r + l`.
    pub fn ideal_a(&self, i: usize) -> Result<FractionalIdeal<'_>> {
        let max = self.semigroup.chain_length();
        if i > max {
            return Err(Error::IndexOutOfRange { index: i, max });
        }
        let s = self.semigroup.s_list[i];
        Ok(self.wrap(self.image.tail_from(s * self.degree())))
    }

    /// `R : F` for `F ⊆ R`.
    pub fn colon_in_closure(&self, f: &FractionalIdeal<'_>) -> Result<FractionalIdeal<'_>> {
        if !f.space.is_subspace_of(&self.image)? {
            return Err(Error::NotContainedInRing);
        }
        Ok(self.dual(f))
    }

    /// `R : F` for any fractional ideal in this representation.
    pub fn dual(&self, f: &FractionalIdeal<'_>) -> FractionalIdeal<'_> {
        self.wrap(self.colon_space(&self.image, &f.space))
    }

    /// `ℓ_R(F/E)` for `E ⊆ F`. Every composition factor is `k`, so this is
    /// a difference of k-dimensions.
    pub fn length(&self, e: &FractionalIdeal<'_>, f: &FractionalIdeal<'_>) -> Result<usize> {
        if !e.space.is_subspace_of(&f.space)? {
            return Err(Error::NotContained);
        }
        Ok(f.space.dim() - e.space.dim())
    }

    /// The ideals `𝔞_0 ⊋ 𝔞_1 ⊋ ... ⊋ 𝔞_{r+l}` and their duals `R : 𝔞_i`.
    pub fn dual_chain(&self) -> DualChain<'_> {
        let len = self.semigroup.chain_length();
        let ideals: Vec<_> = (0..=len).map(|i| self.ideal_a(i).expect("in range")).collect();
        let duals = ideals.iter().map(|a| self.dual(a)).collect();
        DualChain { ideals, duals }
    }

    /// Embeds a series (bound ≥ N) as a vector of the ambient space.
    pub fn reduce_series(&self, x: &TruncSeries) -> Result<Vec<Scalar>> {
        if !Arc::ptr_eq(x.field(), &self.field) && **x.field() != *self.field {
            return Err(Error::FieldMismatch);
        }
        if x.bound() < self.conductor {
            return Err(Error::InsufficientBound {
                required: self.conductor,
                found: x.bound(),
            });
        }
        Ok(x.coords()[..self.ambient_dim()].to_vec())
    }

    /// The series represented by an ambient vector.
    pub fn series(&self, v: &[Scalar]) -> TruncSeries {
        TruncSeries::from_flat(self.field.clone(), v.to_vec())
    }

    /// Value-by-value description of the ring's semigroup from generators
    /// of the image only (used as an independent cross-check).
    pub fn values_from_image(&self) -> Vec<usize> {
        let n = self.degree();
        let mut vals: Vec<usize> = self.image.pivots().iter().map(|p| p / n).collect();
        vals.dedup();
        vals
    }
}

/// Fixpoint closure of `{1} ∪ gens` under multiplication by the
/// generators, modulo `X^bound`.
fn generated_closure(field: &Arc<ExtensionField>, gens: &[TruncSeries], bound: usize) -> Subspace {
    let n = field.degree();
    let base = field.base();
    let width = n * bound;
    let truncated: Vec<Vec<Scalar>> = gens.iter().map(|g| g.truncate(bound).coords().to_vec()).collect();
    let mut red = RowReducer::new(base, width);
    let mut queue: VecDeque<Vec<Scalar>> = VecDeque::new();
    let mut one = vec![base.zero(); width];
    if width > 0 {
        one[0] = base.one();
    }
    queue.push_back(one);
    queue.extend(truncated.iter().cloned());
    while let Some(v) = queue.pop_front() {
        if red.is_full() {
            break;
        }
        if red.insert(v.clone()) {
            for g in &truncated {
                let p = mul_flat(field, &v, g, bound);
                if p.iter().any(|c| !c.is_zero()) {
                    queue.push_back(p);
                }
            }
        }
    }
    red.into_subspace()
}

/// Least `N` such that degrees `N..N+e` are all full, provided the run
/// fits below the bound; fullness then propagates to every higher degree
/// because `V(j)·V(e) ⊆ V(j+e)` and `K·v = K` for `v ≠ 0`.
fn find_conductor(dims: &[usize], n: usize, e: usize) -> Option<usize> {
    let bound = dims.len();
    (0..bound)
        .filter(|&start| start + e <= bound)
        .find(|&start| dims[start..start + e].iter().all(|&d| d == n))
        .map(|start| {
            let mut big_n = start;
            while big_n > 0 && dims[big_n - 1] == n {
                big_n -= 1;
            }
            big_n
        })
}

/// `𝔞_0 ⊋ ... ⊋ 𝔞_{r+l}` and `R = 𝔞_0^{-1} ⊆ ... ⊆ 𝔞_{r+l}^{-1} = K[[X]]`.
#[derive(Debug, Clone)]
pub struct DualChain<'r> {
    pub ideals: Vec<FractionalIdeal<'r>>,
    pub duals: Vec<FractionalIdeal<'r>>,
}

/// An `R`-submodule `F` with `X^N K[[X]] ⊆ F ⊆ K[[X]]`, stored as its image.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalIdeal<'r> {
    ring: &'r RingModel,
    space: Subspace,
}

impl<'r> FractionalIdeal<'r> {
    pub fn ring(&self) -> &'r RingModel {
        self.ring
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    /// `dim_k F / X^N K[[X]]`.
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `V_F(i)` as a subspace of K.
    pub fn filtration_space(&self, i: usize) -> Subspace {
        let n = self.ring.degree();
        if i >= self.ring.conductor {
            return self.ring.field.full_space();
        }
        self.space.block(i * n..(i + 1) * n)
    }

    /// Whether `x mod X^N K[[X]]` lies in `F`.
    pub fn contains(&self, x: &TruncSeries) -> Result<bool> {
        let v = self.ring.reduce_series(x)?;
        self.space.contains(&v)
    }

    /// `R·F ⊆ F`.
    pub fn is_module(&self) -> bool {
        let field = &self.ring.field;
        let big_n = self.ring.conductor;
        self.ring.image.rows().iter().all(|w| {
            self.space
                .rows()
                .iter()
                .all(|u| self.space.contains(&mul_flat(field, w, u, big_n)).unwrap_or(false))
        })
    }

    /// Least degree from which `F` contains all of `X^d K[[X]]`.
    pub fn full_from(&self) -> usize {
        let mut d = self.ring.conductor;
        while d > 0 && self.filtration_space(d - 1).is_full() {
            d -= 1;
        }
        d
    }

    /// Basis rows of degree below [`Self::full_from`], as series truncated
    /// to that degree; together with `X^{full_from} K[[X]]` they generate
    /// `F` over k.
    pub fn lower_basis(&self) -> Vec<TruncSeries> {
        let n = self.ring.degree();
        let cut = self.full_from();
        self.space
            .rows()
            .iter()
            .zip(self.space.pivots())
            .filter(|(_, &p)| p < cut * n)
            .map(|(row, _)| TruncSeries::from_flat(self.ring.field.clone(), row[..cut * n].to_vec()))
            .collect()
    }
}
