//! Random instances and the executable invariant suite.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ExtensionField;
use crate::linalg::Subspace;
use crate::parse::parse_series_expr;
use crate::ring::{GsrSpec, RingModel};
use crate::scalar::{BaseField, Scalar};
use crate::semigroup::{semigroup_from_generators, semigroup_ts_oracle};
use crate::series::TruncSeries;
use crate::typeseq::{associated_gsr, bounds_check, classify, compare_with_gsr, type_sequence};

/// Random instances live over this prime field; small enough that towers
/// can be checked for irreducibility by exhaustive search.
pub const FUZZ_PRIME: u64 = 7;

/// Largest field degree the generator supports.
pub const MAX_FUZZ_DEGREE: usize = 6;

const GENERATOR_BOUND: usize = 128;
const GENERATED_CAP: usize = 128;
const MAX_ATTEMPTS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzMode {
    Gsr,
    Generated,
    Both,
}

impl FromStr for FuzzMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gsr" => Ok(FuzzMode::Gsr),
            "generated" => Ok(FuzzMode::Generated),
            "both" => Ok(FuzzMode::Both),
            _ => Err(Error::FuzzParams(format!("unknown mode '{s}' (expected gsr, generated or both)"))),
        }
    }
}

impl fmt::Display for FuzzMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FuzzMode::Gsr => "gsr",
            FuzzMode::Generated => "generated",
            FuzzMode::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FuzzParams {
    pub seed: u64,
    /// Bound on the field degree `n`.
    pub max_n: usize,
    /// Bound on the conductor exponent `N`.
    #[serde(rename = "max_N")]
    pub max_conductor: usize,
    pub count: usize,
    pub mode: FuzzMode,
}

impl FuzzParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_n == 0 || self.max_n > MAX_FUZZ_DEGREE {
            return Err(Error::FuzzParams(format!(
                "max-n must be between 1 and {MAX_FUZZ_DEGREE}, got {}",
                self.max_n
            )));
        }
        if self.count == 0 {
            return Err(Error::FuzzParams("count must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    Gsr,
    Generated,
}

/// The generator for instance `index` of a corpus; instances are
/// independent, so any one can be regenerated from `(seed, index)`.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

// ---------------------------------------------------------------- fields

fn f7() -> BaseField {
    BaseField::Prime(FUZZ_PRIME)
}

/// Every element of a finite field, in coordinate order.
fn elements(field: &ExtensionField) -> Vec<Vec<Scalar>> {
    let p = field.base().characteristic();
    let n = field.degree();
    let count = p.pow(n as u32);
    (0..count)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let c = idx % p;
                    idx /= p;
                    field.base().from_i64(c as i64)
                })
                .collect()
        })
        .collect()
}

fn eval(field: &ExtensionField, poly: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
    poly.iter()
        .rev()
        .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
}

/// Remainder of `a` modulo the monic `m`, over F_p with `u64` residues.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let off = r.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                r[off + i] = (r[off + i] + (p - c) * lead) % p;
            }
        }
    }
    r
}

/// Irreducibility over F_p by trial division with every monic polynomial
/// of degree at most half.
fn irreducible_fp(poly: &[u64], p: u64) -> bool {
    let d = poly.len() - 1;
    for k in 1..=d / 2 {
        for idx in 0..p.pow(k as u32) {
            let mut m: Vec<u64> = (0..k).map(|i| idx / p.pow(i as u32) % p).collect();
            m.push(1);
            if poly_rem(poly, &m, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn random_irreducible_fp(rng: &mut impl Rng, d: usize) -> Vec<u64> {
    let p = FUZZ_PRIME;
    loop {
        let mut poly: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
        poly.push(1);
        if poly[0] != 0 && irreducible_fp(&poly, p) {
            return poly;
        }
    }
}

/// A random field of degree between 1 and `max_n` over F_7. Degree 4 is
/// sometimes built as a two-step tower of quadratics.
pub fn random_field(rng: &mut impl Rng, max_n: usize) -> Arc<ExtensionField> {
    let n = rng.gen_range(1..=max_n.clamp(1, MAX_FUZZ_DEGREE));
    let k = ExtensionField::trivial(f7());
    if n == 1 {
        return Arc::new(k);
    }
    let lift = |field: &ExtensionField, poly: &[u64]| -> Vec<Vec<Scalar>> {
        poly.iter().map(|&c| field.scalar(f7().from_i64(c as i64))).collect()
    };
    if n == 4 && rng.gen_bool(0.5) {
        let a = k.adjoin("a", lift(&k, &random_irreducible_fp(rng, 2))).expect("monic");
        let all = elements(&a);
        loop {
            let poly = vec![all[rng.gen_range(0..all.len())].clone(), all[rng.gen_range(0..all.len())].clone(), a.one()];
            if all.iter().all(|x| !a.is_zero(&eval(&a, &poly, x))) {
                return Arc::new(a.adjoin("b", poly).expect("monic"));
            }
        }
    }
    Arc::new(k.adjoin("a", lift(&k, &random_irreducible_fp(rng, n))).expect("monic"))
}

/// Uniform over F_p; small integers over Q.
fn random_element(rng: &mut impl Rng, field: &ExtensionField) -> Vec<Scalar> {
    let (lo, hi) = match field.base().characteristic() {
        0 => (-3, 3),
        p => (0, p as i64 - 1),
    };
    (0..field.degree())
        .map(|_| field.base().from_i64(rng.gen_range(lo..=hi)))
        .collect()
}

fn random_nonzero(rng: &mut impl Rng, field: &ExtensionField) -> Vec<Scalar> {
    loop {
        let x = random_element(rng, field);
        if !field.is_zero(&x) {
            return x;
        }
    }
}

fn random_subspace(rng: &mut impl Rng, field: &ExtensionField, dim: usize) -> Subspace {
    let mut space = Subspace::zero(field.base(), field.degree());
    while space.dim() < dim {
        let v = Subspace::span(field.base(), field.degree(), [random_element(rng, field)]).expect("width");
        space = space.sum(&v).expect("width");
    }
    space
}

/// An element whose powers `1, γ, ..., γ^{n-1}` span `K`.
fn random_primitive(rng: &mut impl Rng, field: &ExtensionField) -> Vec<Scalar> {
    let n = field.degree();
    loop {
        let g = random_element(rng, field);
        let mut powers = vec![field.one()];
        for _ in 1..n {
            powers.push(field.mul(powers.last().unwrap(), &g));
        }
        if Subspace::span(field.base(), n, powers).expect("width").is_full() {
            return g;
        }
    }
}

// ---------------------------------------------------------- instances

/// Random seed subspaces per degree, closed upward: degree `m` absorbs
/// `V_i·V_j` for `i + j = m`, processed in increasing `m` so one pass
/// suffices.
pub fn random_gsr(params: &FuzzParams, rng: &mut impl Rng) -> GsrSpec {
    let field = random_field(rng, params.max_n);
    let n = field.degree();
    // N = 1 always collapses to the full series ring when n = 1.
    let big_n = match params.max_conductor {
        0 => 0,
        1 => 1,
        m => rng.gen_range(2..=m),
    };
    let mut spaces = Vec::with_capacity(big_n);
    if big_n > 0 {
        spaces.push(field.k_line());
    }
    for _ in 1..big_n {
        let roll = rng.gen_range(0..10);
        let v = match roll {
            0..=3 => Subspace::zero(field.base(), n),
            4..=5 => field.full_space(),
            _ if n == 1 => field.full_space(),
            _ => {
                let d = rng.gen_range(1..n);
                random_subspace(rng, &field, d)
            }
        };
        spaces.push(v);
    }
    for m in 2..big_n {
        for i in 1..=m / 2 {
            let p = field.product_span(&spaces[i], &spaces[m - i]).expect("width");
            spaces[m] = spaces[m].sum(&p).expect("width");
        }
    }
    GsrSpec { field, spaces }
}

/// 2 to 4 generators with valuations in `[2, max_N]`, the first two of
/// coprime valuation. Over a proper extension the first generator has a
/// primitive leading coefficient and every generator carries a random
/// tail; over `k` itself they are monomials.
pub fn random_generated(params: &FuzzParams, rng: &mut impl Rng) -> Vec<TruncSeries> {
    random_generated_ring(params, rng).1
}

fn random_generated_ring(params: &FuzzParams, rng: &mut impl Rng) -> (RingModel, Vec<TruncSeries>) {
    for _ in 0..MAX_ATTEMPTS {
        let field = random_field(rng, params.max_n);
        if let Some(found) = try_generated(params, &field, rng) {
            return found;
        }
    }
    // Small conductor bounds can be out of reach over a proper extension.
    let k = Arc::new(ExtensionField::trivial(f7()));
    for _ in 0..MAX_ATTEMPTS {
        if let Some(found) = try_generated(params, &k, rng) {
            return found;
        }
    }
    let x = TruncSeries::monomial(k.clone(), &k.one(), 1, GENERATOR_BOUND).expect("in range");
    let ring = RingModel::build_generated(k, std::slice::from_ref(&x), GENERATED_CAP).expect("K[[X]]");
    (ring, vec![x])
}

fn try_generated(
    params: &FuzzParams,
    field: &Arc<ExtensionField>,
    rng: &mut impl Rng,
) -> Option<(RingModel, Vec<TruncSeries>)> {
    let n = field.degree();
    let lo = if params.max_conductor >= 3 { 2 } else { 1 };
    let hi = params.max_conductor.max(lo);
    let count = rng.gen_range(2..=4);
    let a = rng.gen_range(lo..=hi);
    let b = rng.gen_range(lo..=hi);
    if a.gcd(&b) != 1 {
        return None;
    }
    let mut vals = vec![a, b];
    while vals.len() < count {
        vals.push(rng.gen_range(lo..=hi));
    }
    if semigroup_from_generators(&vals).ok()?.c > params.max_conductor {
        return None;
    }
    let gens: Vec<TruncSeries> = vals
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            let mut g = TruncSeries::zero(field.clone(), GENERATOR_BOUND);
            let lead = if n > 1 && idx == 0 {
                random_primitive(rng, field)
            } else if n > 1 {
                random_nonzero(rng, field)
            } else {
                field.one()
            };
            g.set_coeff(v, &lead).expect("in range");
            if n > 1 {
                for _ in 0..rng.gen_range(1..=2) {
                    let d = v + rng.gen_range(1..=3);
                    g.set_coeff(d, &random_nonzero(rng, field)).expect("in range");
                }
            }
            g
        })
        .collect();
    let ring = RingModel::build_generated(field.clone(), &gens, GENERATED_CAP).ok()?;
    (ring.conductor() <= params.max_conductor).then_some((ring, gens))
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub index: usize,
    pub kind: InstanceKind,
    pub ring: RingModel,
    pub generators: Option<Vec<TruncSeries>>,
}

/// Builds the corpus sequentially, one generator stream per instance.
/// In `both` mode even indices are GSRs and odd ones generated rings.
pub fn corpus(params: &FuzzParams) -> Result<Vec<CorpusEntry>> {
    params.validate()?;
    (0..params.count)
        .map(|index| {
            let mut rng = instance_rng(params.seed, index);
            let kind = match params.mode {
                FuzzMode::Gsr => InstanceKind::Gsr,
                FuzzMode::Generated => InstanceKind::Generated,
                FuzzMode::Both if index % 2 == 0 => InstanceKind::Gsr,
                FuzzMode::Both => InstanceKind::Generated,
            };
            Ok(match kind {
                InstanceKind::Gsr => CorpusEntry {
                    index,
                    kind,
                    ring: RingModel::build_gsr(&random_gsr(params, &mut rng))?,
                    generators: None,
                },
                InstanceKind::Generated => {
                    let (ring, gens) = random_generated_ring(params, &mut rng);
                    CorpusEntry {
                        index,
                        kind,
                        ring,
                        generators: Some(gens),
                    }
                }
            })
        })
        .collect()
}

// --------------------------------------------------------------- suite

/// Every check the suite runs, in report order.
pub const CHECK_REGISTRY: &[&str] = &[
    "field-canonical-form",
    "field-codim1-colon-dimension",
    "field-colon-antitone",
    "field-inverses",
    "series-ring-axioms",
    "series-valuation-additive",
    "series-print-parse-round-trip",
    "ring-unit-closed-local",
    "ring-conductor-minimal",
    "ring-semigroup-consistent",
    "ring-generator-order-independent",
    "ring-gsr-round-trip",
    "ideal-module-property",
    "ideal-chain-strict",
    "ideal-chain-endpoints",
    "ideal-divisorial",
    "dual-chain-strict",
    "dual-full-top-degree",
    "dual-top-degree-bound",
    "length-filtration-sum",
    "ts-positive",
    "n-list-positive",
    "n0-is-one",
    "ts-sum-is-length-over-ring",
    "n-sum-is-length-to-conductor",
    "ts-bounds",
    "length-inequality",
    "classification-two-routes",
    "gorenstein-self-dual",
    "semigroup-oracle-agrees",
    "gsr-almost-gorenstein-biconditional",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

type Outcome = std::result::Result<Option<String>, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(None)
    } else {
        Err(msg())
    }
}

fn vacuous(why: &str) -> Outcome {
    Ok(Some(format!("vacuous: {why}")))
}

fn from_err(e: Error) -> String {
    e.to_string()
}

pub fn run_suite(ring: &RingModel) -> SuiteReport {
    run_suite_with_generators(ring, None)
}

/// Runs every registered check on `ring`. When the generators the ring
/// was built from are known, rebuilding from them in reverse order is
/// compared against the ring.
pub fn run_suite_with_generators(ring: &RingModel, generators: Option<&[TruncSeries]>) -> SuiteReport {
    let ctx = Context::new(ring);
    let checks = CHECK_REGISTRY
        .iter()
        .map(|&name| {
            let outcome = ctx.run(name, generators);
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, Some(d)),
            };
            CheckResult { name, passed, detail }
        })
        .collect();
    SuiteReport { checks }
}

struct Context<'r> {
    ring: &'r RingModel,
    chain: crate::ring::DualChain<'r>,
    report: std::result::Result<crate::typeseq::TypeSequenceReport, String>,
}

impl<'r> Context<'r> {
    fn new(ring: &'r RingModel) -> Self {
        Context {
            ring,
            chain: ring.dual_chain(),
            report: type_sequence(ring).map_err(from_err),
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x5eed)
    }

    fn report(&self) -> std::result::Result<&crate::typeseq::TypeSequenceReport, String> {
        self.report.as_ref().map_err(|e| format!("type sequence unavailable: {e}"))
    }

    fn run(&self, name: &str, generators: Option<&[TruncSeries]>) -> Outcome {
        let ring = self.ring;
        let field = ring.field();
        let n = ring.degree();
        let big_n = ring.conductor();
        let s = ring.semigroup();
        let ideals = &self.chain.ideals;
        let duals = &self.chain.duals;
        match name {
            "field-canonical-form" => {
                let mut rng = self.rng();
                let scalars = ExtensionField::trivial(field.base());
                for _ in 0..8 {
                    let d = rng.gen_range(0..=n);
                    let u = random_subspace(&mut rng, field, d);
                    // The rows plus random combinations of them, shuffled.
                    let mut spanning: Vec<Vec<Scalar>> = u.rows().to_vec();
                    for _ in 0..3 {
                        let mut v = field.zero();
                        for row in u.rows() {
                            let c = random_element(&mut rng, &scalars).remove(0);
                            let scaled: Vec<Scalar> = row.iter().map(|x| x * &c).collect();
                            v = field.add(&v, &scaled);
                        }
                        spanning.push(v);
                    }
                    spanning.shuffle(&mut rng);
                    let again = Subspace::span(field.base(), n, spanning).map_err(from_err)?;
                    ensure(again == u, || "respanning changed the canonical form".into())?;
                }
                Ok(None)
            }
            "field-codim1-colon-dimension" => {
                let mut rng = self.rng();
                for _ in 0..6 {
                    let v = random_subspace(&mut rng, field, n - 1);
                    let d = rng.gen_range(0..=n);
                    let w = random_subspace(&mut rng, field, d);
                    let c = field.subspace_colon(&v, &w).map_err(from_err)?;
                    ensure(c.dim() + w.dim() == n, || {
                        format!("dim(V:W) + dim W = {} + {} != {n}", c.dim(), w.dim())
                    })?;
                }
                Ok(None)
            }
            "field-colon-antitone" => {
                let mut rng = self.rng();
                for _ in 0..6 {
                    let dv = rng.gen_range(0..=n);
                    let v = random_subspace(&mut rng, field, dv);
                    let d1 = rng.gen_range(0..=n);
                    let w1 = random_subspace(&mut rng, field, d1);
                    let extra = random_subspace(&mut rng, field, 1);
                    let w2 = w1.sum(&extra).map_err(from_err)?;
                    let c1 = field.subspace_colon(&v, &w1).map_err(from_err)?;
                    let c2 = field.subspace_colon(&v, &w2).map_err(from_err)?;
                    ensure(c2.is_subspace_of(&c1).map_err(from_err)?, || "W1 ⊆ W2 but (V:W2) ⊄ (V:W1)".into())?;
                }
                Ok(None)
            }
            "field-inverses" => {
                let mut rng = self.rng();
                for _ in 0..20 {
                    let x = random_nonzero(&mut rng, field);
                    let y = field.inv(&x).map_err(from_err)?;
                    ensure(field.mul(&x, &y) == field.one(), || format!("{} has a wrong inverse", field.format(&x)))?;
                }
                Ok(None)
            }
            "series-ring-axioms" => {
                let mut rng = self.rng();
                let bound = big_n.max(1) + 2;
                let rand_series = |rng: &mut ChaCha8Rng| {
                    let coeffs = (0..bound).map(|_| random_element(rng, field)).collect();
                    TruncSeries::from_coeffs(field.clone(), coeffs).expect("widths match")
                };
                for _ in 0..4 {
                    let (a, b, c) = (rand_series(&mut rng), rand_series(&mut rng), rand_series(&mut rng));
                    let m = |x: &TruncSeries, y: &TruncSeries| x.mul(y).expect("same field");
                    let p = |x: &TruncSeries, y: &TruncSeries| x.add(y).expect("same field");
                    ensure(m(&m(&a, &b), &c) == m(&a, &m(&b, &c)), || "multiplication is not associative".into())?;
                    ensure(m(&a, &p(&b, &c)) == p(&m(&a, &b), &m(&a, &c)), || "distributivity fails".into())?;
                    ensure(m(&a, &b) == m(&b, &a), || "multiplication is not commutative".into())?;
                }
                Ok(None)
            }
            "series-valuation-additive" => {
                for u in ring.image().rows() {
                    for w in ring.image().rows() {
                        let (x, y) = (ring.series(u), ring.series(w));
                        let (Some(a), Some(b)) = (x.valuation(), y.valuation()) else {
                            continue;
                        };
                        if a + b < big_n {
                            let v = x.mul(&y).map_err(from_err)?.valuation();
                            ensure(v == Some(a + b), || format!("v(xy) = {v:?}, expected {}", a + b))?;
                        }
                    }
                }
                Ok(None)
            }
            "series-print-parse-round-trip" => {
                if field.generator("X").is_some() {
                    return vacuous("field uses the series variable name");
                }
                for u in ring.image().rows() {
                    let x = ring.series(u);
                    let text = x.to_string();
                    let back = parse_series_expr(&text, field, big_n).map_err(from_err)?;
                    ensure(back == x, || format!("'{text}' reparses differently"))?;
                }
                Ok(None)
            }
            "ring-unit-closed-local" => {
                if big_n == 0 {
                    return vacuous("R is the full series ring");
                }
                let one = TruncSeries::one(field.clone(), big_n);
                ensure(ring.unit_ideal().contains(&one).map_err(from_err)?, || "1 is not in R".into())?;
                ensure(ring.filtration_space(0) == field.k_line(), || "V_R(0) is not k".into())?;
                ensure(ring.is_multiplicatively_closed(), || "image not closed under products".into())
            }
            "ring-conductor-minimal" => {
                if big_n == 0 {
                    return vacuous("R is the full series ring");
                }
                ensure(!ring.filtration_space(big_n - 1).is_full(), || {
                    format!("V_R({}) = K, so the conductor is smaller", big_n - 1)
                })
            }
            "ring-semigroup-consistent" => {
                let values: Vec<usize> = (0..big_n).filter(|&i| !ring.filtration_space(i).is_zero()).collect();
                let below: Vec<usize> = s.s_list.iter().copied().filter(|&x| x < big_n).collect();
                ensure(values == below, || "s-list differs from the nonzero leading spaces".into())?;
                let mut c = big_n;
                while c > 0 && !ring.filtration_space(c - 1).is_zero() {
                    c -= 1;
                }
                ensure(s.c == c, || format!("c = {}, expected {c}", s.c))?;
                ensure(s.l == big_n - s.c, || "l != N - c".into())?;
                ensure(s.s_list.get(s.r) == Some(&s.c), || "s_r != c".into())?;
                ensure(s.s_list.last() == Some(&big_n), || "s_(r+l) != N".into())?;
                ensure(s.gaps == (0..s.c).filter(|x| !s.contains(*x)).collect::<Vec<_>>(), || "gap list".into())
            }
            "ring-generator-order-independent" => {
                let Some(gens) = generators else {
                    return vacuous("generators unknown");
                };
                let mut rev = gens.to_vec();
                rev.reverse();
                let again = RingModel::build_generated(field.clone(), &rev, crate::ring::DEFAULT_DEGREE_CAP)
                    .map_err(from_err)?;
                ensure(&again == ring, || "reordered generators give a different ring".into())
            }
            "ring-gsr-round-trip" => {
                let g = associated_gsr(ring).map_err(from_err)?;
                ensure(g.filtration() == ring.filtration(), || "associated GSR has a different filtration".into())?;
                ensure(g.conductor() == big_n, || "associated GSR has a different conductor".into())
            }
            "ideal-module-property" => {
                for (i, a) in ideals.iter().enumerate() {
                    ensure(a.is_module(), || format!("a_{i} is not an R-module"))?;
                }
                for (i, d) in duals.iter().enumerate() {
                    ensure(d.is_module(), || format!("dual of a_{i} is not an R-module"))?;
                }
                Ok(None)
            }
            "ideal-chain-strict" => {
                for (i, w) in ideals.windows(2).enumerate() {
                    ensure(w[1].dim() < w[0].dim(), || format!("a_{} is not strictly inside a_{i}", i + 1))?;
                    ensure(w[1].space().is_subspace_of(w[0].space()).map_err(from_err)?, || {
                        format!("a_{} is not inside a_{i}", i + 1)
                    })?;
                }
                Ok(None)
            }
            "ideal-chain-endpoints" => {
                ensure(ideals[0].space() == ring.image(), || "a_0 != R".into())?;
                ensure(ideals.last().unwrap().space().is_zero(), || "last ideal is not the conductor".into())?;
                ensure(duals[0].space() == ring.image(), || "R:R != R".into())?;
                ensure(duals.last().unwrap().space().is_full(), || "R:C is not the closure".into())?;
                if ideals.len() > 1 {
                    ensure(ideals[1].dim() + 1 == ring.image().dim(), || "m does not have codimension 1".into())?;
                }
                Ok(None)
            }
            "ideal-divisorial" => {
                for (i, (a, d)) in ideals.iter().zip(duals).enumerate() {
                    let back = ring.dual(d);
                    ensure(back.space() == a.space(), || format!("R:(R:a_{i}) != a_{i}"))?;
                }
                Ok(None)
            }
            "dual-chain-strict" => {
                for (i, w) in duals.windows(2).enumerate() {
                    ensure(w[0].dim() < w[1].dim(), || format!("dual of a_{} equals dual of a_{i}", i + 1))?;
                    ensure(w[0].space().is_subspace_of(w[1].space()).map_err(from_err)?, || {
                        format!("duals of a_{i} and a_{} are not nested", i + 1)
                    })?;
                }
                Ok(None)
            }
            "dual-full-top-degree" => {
                for i in 1..duals.len() {
                    let deg = big_n - 1 - s.s_list[i - 1];
                    let d = duals[i].filtration_space(deg).dim();
                    ensure(d == n, || format!("i = {i}: dim V at degree {deg} is {d}, expected {n}"))?;
                }
                Ok(None)
            }
            "dual-top-degree-bound" => {
                let ns = ring.n_list();
                for i in 1..duals.len() {
                    let deg = big_n - 1 - s.s_list[i - 1];
                    let d = duals[i - 1].filtration_space(deg).dim();
                    ensure(d + ns[i - 1] <= n, || {
                        format!("i = {i}: dim V at degree {deg} is {d} > n - n_(i-1) = {}", n - ns[i - 1])
                    })?;
                }
                Ok(None)
            }
            "length-filtration-sum" => {
                let by_degree = |e: &crate::ring::FractionalIdeal<'_>, f: &crate::ring::FractionalIdeal<'_>| -> usize {
                    (0..big_n)
                        .map(|d| f.filtration_space(d).dim() - e.filtration_space(d).dim())
                        .sum()
                };
                let pairs = ideals
                    .windows(2)
                    .map(|w| (&w[1], &w[0]))
                    .chain(duals.windows(2).map(|w| (&w[0], &w[1])))
                    .chain([(&duals[0], duals.last().unwrap())]);
                for (e, f) in pairs {
                    let direct = ring.length(e, f).map_err(from_err)?;
                    ensure(direct == by_degree(e, f), || format!("length {direct} vs filtration sum {}", by_degree(e, f)))?;
                }
                Ok(None)
            }
            "ts-positive" => {
                let rep = self.report()?;
                ensure(rep.t_list.iter().all(|&t| t >= 1), || format!("{:?}", rep.t_list))?;
                ensure(rep.t_list.len() == s.chain_length(), || "wrong number of entries".into())
            }
            "n-list-positive" => ensure(ring.n_list().iter().all(|&x| x >= 1), || format!("{:?}", ring.n_list())),
            "n0-is-one" => {
                if ring.n_list().is_empty() {
                    return vacuous("empty chain");
                }
                ensure(ring.n_list()[0] == 1, || format!("n_0 = {}", ring.n_list()[0]))
            }
            "ts-sum-is-length-over-ring" => {
                let rep = self.report()?;
                let sum: usize = rep.t_list.iter().sum();
                ensure(sum == rep.ell_over, || format!("sum {sum} vs {}", rep.ell_over))?;
                ensure(rep.ell_over == n * big_n - ring.image().dim(), || "length of closure over R".into())
            }
            "n-sum-is-length-to-conductor" => {
                let rep = self.report()?;
                let sum: usize = ring.n_list().iter().sum();
                ensure(sum == rep.ell_rc, || format!("sum {sum} vs {}", rep.ell_rc))?;
                ensure(rep.ell_rc == ring.image().dim(), || "length of R over the conductor".into())
            }
            "ts-bounds" => {
                let rep = self.report()?;
                let table = bounds_check(rep);
                ensure(table.all_pass, || format!("{:?}", table.rows.iter().filter(|r| !r.pass).collect::<Vec<_>>()))
            }
            "length-inequality" => {
                let rep = self.report()?;
                let (t, l, rc) = (rep.cm_type, rep.ell_over, rep.ell_rc);
                if rep.t_list.is_empty() {
                    return vacuous("R is the full series ring");
                }
                ensure(rc + t - 1 <= l && l <= rc * t, || format!("{rc} + {t} - 1 <= {l} <= {rc}*{t} fails"))
            }
            "classification-two-routes" => {
                let rep = self.report()?;
                let c = classify(rep).map_err(from_err)?;
                ensure(c == rep.classification, || "reclassification differs".into())
            }
            "gorenstein-self-dual" => {
                let rep = self.report()?;
                if rep.cm_type != 1 {
                    return vacuous("type is not 1");
                }
                ensure(rep.t_list == rep.n_list, || format!("{:?} vs {:?}", rep.t_list, rep.n_list))
            }
            "semigroup-oracle-agrees" => {
                let rep = self.report()?;
                if n != 1 {
                    return vacuous("residue field extension is proper");
                }
                let oracle = semigroup_ts_oracle(s).map_err(from_err)?;
                ensure(oracle == rep.t_list, || format!("oracle {oracle:?} vs ring {:?}", rep.t_list))
            }
            "gsr-almost-gorenstein-biconditional" => {
                let cmp = compare_with_gsr(ring).map_err(from_err)?;
                ensure(cmp.biconditional_holds, || "biconditional fails".into())
            }
            other => Err(format!("unregistered check '{other}'")),
        }
    }
}

// ---------------------------------------------------------------- fuzz

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzEntryReport {
    pub index: usize,
    pub kind: InstanceKind,
    pub degree: usize,
    #[serde(rename = "N")]
    pub conductor: usize,
    pub t_list: Vec<usize>,
    pub n_list: Vec<usize>,
    pub failures: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub params: FuzzParams,
    pub instances: usize,
    pub failed_instances: usize,
    pub entries: Vec<FuzzEntryReport>,
}

impl FuzzReport {
    pub fn all_passed(&self) -> bool {
        self.failed_instances == 0
    }
}

/// Builds the corpus and runs the suite on every instance in parallel;
/// entries come back in index order whatever the scheduling.
pub fn run_fuzz(params: &FuzzParams) -> Result<FuzzReport> {
    let corpus = corpus(params)?;
    let entries: Vec<FuzzEntryReport> = corpus
        .par_iter()
        .map(|entry| {
            let suite = run_suite_with_generators(&entry.ring, entry.generators.as_deref());
            let t_list = type_sequence(&entry.ring).map(|r| r.t_list).unwrap_or_default();
            FuzzEntryReport {
                index: entry.index,
                kind: entry.kind,
                degree: entry.ring.degree(),
                conductor: entry.ring.conductor(),
                t_list,
                n_list: entry.ring.n_list().to_vec(),
                failures: suite.failures().cloned().collect(),
            }
        })
        .collect();
    let failed_instances = entries.iter().filter(|e| !e.failures.is_empty()).count();
    Ok(FuzzReport {
        params: *params,
        instances: entries.len(),
        failed_instances,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::tests::{example1, example2};
    use std::collections::HashSet;

    fn params(max_n: usize, max_conductor: usize, mode: FuzzMode) -> FuzzParams {
        FuzzParams {
            seed: 7,
            max_n,
            max_conductor,
            count: 12,
            mode,
        }
    }

    #[test]
    fn registry_is_complete_and_unique() {
        let names: HashSet<_> = CHECK_REGISTRY.iter().collect();
        assert_eq!(names.len(), CHECK_REGISTRY.len());
        assert_eq!(CHECK_REGISTRY.len(), 31);
        let report = run_suite(&example1());
        let reported: Vec<_> = report.checks.iter().map(|c| c.name).collect();
        assert_eq!(reported, CHECK_REGISTRY);
        assert!(report.checks.iter().all(|c| !c.detail.as_deref().unwrap_or("").starts_with("unregistered")));
    }

    #[test]
    fn example_rings_pass() {
        for ring in [example1(), example2()] {
            let report = run_suite(&ring);
            let bad: Vec<_> = report.failures().collect();
            assert!(bad.is_empty(), "{bad:?}");
        }
    }

    #[test]
    fn full_series_ring_passes_vacuously() {
        let k = Arc::new(ExtensionField::trivial(BaseField::Rationals));
        let r = RingModel::build_gsr(&GsrSpec { field: k, spaces: vec![] }).unwrap();
        let report = run_suite(&r);
        assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert!(report.get("ring-conductor-minimal").unwrap().detail.as_deref().unwrap().starts_with("vacuous"));
    }

    #[test]
    fn suite_reports_failures_as_entries() {
        // Generators of a different ring than the one under test.
        let r = example1();
        let k = r.field().clone();
        let x3 = TruncSeries::monomial(k.clone(), &k.one(), 3, 64).unwrap();
        let x4 = TruncSeries::monomial(k.clone(), &k.one(), 4, 64).unwrap();
        let report = run_suite_with_generators(&r, Some(&[x3, x4]));
        let bad: Vec<_> = report.failures().map(|c| c.name).collect();
        assert_eq!(bad, vec!["ring-generator-order-independent"]);
        assert_eq!(report.checks.len(), CHECK_REGISTRY.len());
    }

    #[test]
    fn irreducibility() {
        assert!(irreducible_fp(&[1, 0, 1], 7)); // x^2 + 1, -1 is not a square mod 7
        assert!(!irreducible_fp(&[6, 0, 1], 7)); // x^2 - 1
        assert!(!irreducible_fp(&[1, 0, 2, 0, 1], 7)); // (x^2 + 1)^2
        assert!(irreducible_fp(&[4, 1, 0, 1], 7) == (0..7).all(|x| (x * x * x + x + 4) % 7 != 0));
    }

    #[test]
    fn random_fields_are_fields() {
        let mut rng = instance_rng(3, 0);
        for _ in 0..20 {
            let k = random_field(&mut rng, 4);
            for _ in 0..10 {
                let x = random_nonzero(&mut rng, &k);
                assert_eq!(k.mul(&x, &k.inv(&x).unwrap()), k.one());
            }
        }
    }

    #[test]
    fn gsr_instances_validate() {
        let p = params(2, 6, FuzzMode::Gsr);
        for i in 0..30 {
            let spec = random_gsr(&p, &mut instance_rng(p.seed, i));
            let r = RingModel::build_gsr(&spec).unwrap();
            assert!(r.conductor() <= 6);
            assert!(r.is_gsr());
        }
    }

    #[test]
    fn degree_one_gsr_is_a_semigroup_ring() {
        let p = params(1, 8, FuzzMode::Gsr);
        let spec = random_gsr(&p, &mut instance_rng(p.seed, 0));
        assert!(spec.spaces.iter().all(|v| v.is_zero() || v.is_full()));
    }

    #[test]
    fn generated_instances() {
        let p = params(1, 10, FuzzMode::Generated);
        let gens = random_generated(&p, &mut instance_rng(1, 0));
        let vals: Vec<usize> = gens.iter().map(|g| g.valuation().unwrap()).collect();
        assert_eq!(vals.iter().fold(0, |a, &v| a.gcd(&v)), 1);
        assert!(gens.iter().all(|g| (0..g.bound()).filter(|&d| !g.coeff(d).is_zero()).count() == 1));

        let p = params(3, 12, FuzzMode::Generated);
        let mut saw_extension = false;
        for i in 0..10 {
            let gens = random_generated(&p, &mut instance_rng(2, i));
            assert_eq!(gens, random_generated(&p, &mut instance_rng(2, i)));
            if gens[0].field().degree() > 1 {
                saw_extension = true;
                assert!(gens.iter().any(|g| (0..g.bound()).filter(|&d| !g.coeff(d).is_zero()).count() > 1));
            }
        }
        assert!(saw_extension);
    }

    #[test]
    fn corpus_is_deterministic_and_mixed() {
        let p = params(3, 8, FuzzMode::Both);
        let a = run_fuzz(&p).unwrap();
        let b = run_fuzz(&p).unwrap();
        assert_eq!(a, b);
        assert!(a.all_passed(), "{:?}", a.entries.iter().filter(|e| !e.failures.is_empty()).collect::<Vec<_>>());
        assert!(a.entries.iter().any(|e| e.kind == InstanceKind::Gsr));
        assert!(a.entries.iter().any(|e| e.kind == InstanceKind::Generated));
        assert!(a.entries.iter().all(|e| e.conductor <= 8));
    }

    #[test]
    fn bad_params() {
        let mut p = params(0, 4, FuzzMode::Both);
        assert!(p.validate().is_err());
        p.max_n = 2;
        p.count = 0;
        assert!(p.validate().is_err());
        assert!("sideways".parse::<FuzzMode>().is_err());
        assert_eq!("both".parse::<FuzzMode>().unwrap(), FuzzMode::Both);
    }
}
