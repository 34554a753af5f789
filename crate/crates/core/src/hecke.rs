//! GL(3) coefficient families `A(m₁, m₂)` built from Satake triples with
//! nebentypus, and brute-force residuals of the coefficient relations.
//!
//! At an unramified prime `p` with triple `(α, β, γ)`, `αβγ = ψ(p)`,
//!
//! ```text
//! A(p^{k₁}, p^{k₂}) = s_{(k₁+k₂, k₁, 0)}(α, β, γ),
//! ```
//!
//! so `A(1, p) = α+β+γ` and `A(p, 1) = αβ+βγ+γα`. This indexing is the one
//! compatible with both Hecke relations when ψ is nontrivial. At `p | N` the
//! local factor is a free sequence `c_{p,k} = A(1, p^k)`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};

/// Anything that can supply coefficients `A(m₁, m₂)` together with its level
/// and nebentypus. The relation checks only see this interface.
pub trait CoefficientSource {
    fn level(&self) -> u64;
    fn nebentypus(&self) -> &DirichletCharacter;
    fn coefficient(&self, m1: i64, m2: i64) -> Result<Complex64>;
}

/// Satake parameters at an unramified prime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatakeTriple {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

impl SatakeTriple {
    pub fn elementary(&self) -> [Complex64; 3] {
        let (a, b, c) = (self.alpha, self.beta, self.gamma);
        [a + b + c, a * b + b * c + c * a, a * b * c]
    }

    pub fn reciprocal(&self) -> Self {
        Self { alpha: self.alpha.inv(), beta: self.beta.inv(), gamma: self.gamma.inv() }
    }
}

/// How the ramified sequences `c_{p,k}` are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ramified {
    /// Seeded draws in the closed unit disc.
    #[default]
    Random,
    /// `c_{p,k} = 0` for `k ≥ 1`.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelOptions {
    pub prime_bound: u64,
    /// Draw `|α| = |β| = 1`; otherwise radii are drawn in `[e^{-1/4}, e^{1/4}]`.
    pub unitary: bool,
    pub ramified: Ramified,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self { prime_bound: 10_000, unitary: true, ramified: Ramified::Random }
    }
}

/// Largest exponent stored for ramified sequences; `2^64` exceeds every index.
const MAX_EXPONENT: usize = 64;

const STREAM_SATAKE: u64 = 0;
const STREAM_RAMIFIED: u64 = 1;
const STREAM_DUAL_RAMIFIED: u64 = 2;

#[derive(Debug)]
struct LocalData {
    triple: SatakeTriple,
    /// Complete homogeneous symmetric polynomials `h_0, h_1, …`.
    h: OnceLock<Vec<Complex64>>,
}

impl LocalData {
    fn new(triple: SatakeTriple) -> Self {
        Self { triple, h: OnceLock::new() }
    }

    fn h(&self) -> &[Complex64] {
        self.h.get_or_init(|| complete_homogeneous(&self.triple, 2 * MAX_EXPONENT + 2))
    }

    /// `s_{(λ₁, λ₂, 0)}` by Jacobi–Trudi: `h_{λ₁}h_{λ₂} − h_{λ₁+1}h_{λ₂−1}`.
    fn schur(&self, l1: usize, l2: usize) -> Complex64 {
        let h = self.h();
        if l2 == 0 {
            h[l1]
        } else {
            h[l1] * h[l2] - h[l1 + 1] * h[l2 - 1]
        }
    }
}

/// `h_0..=h_k` via `h_j = e₁h_{j−1} − e₂h_{j−2} + e₃h_{j−3}`.
pub fn complete_homogeneous(t: &SatakeTriple, k: usize) -> Vec<Complex64> {
    let [e1, e2, e3] = t.elementary();
    let zero = Complex64::new(0.0, 0.0);
    let mut h = vec![Complex64::new(1.0, 0.0)];
    for j in 1..=k {
        let at = |i: usize| if j >= i { h[j - i] } else { zero };
        h.push(e1 * at(1) - e2 * at(2) + e3 * at(3));
    }
    h
}

/// Seeded coefficient model.
#[derive(Debug)]
pub struct HeckeCoefficientModel {
    level: u64,
    psi: DirichletCharacter,
    options: ModelOptions,
    seed: u64,
    /// Unramified primes up to the bound, ascending, with their local data.
    primes: Vec<u64>,
    local: Vec<LocalData>,
    ramified: BTreeMap<u64, Vec<Complex64>>,
}

fn unit_disc(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
}

fn ramified_draws(level: u64, preset: Ramified, rng: &mut ChaCha8Rng) -> Result<BTreeMap<u64, Vec<Complex64>>> {
    let mut out = BTreeMap::new();
    for p in arith::factorize(level)?.primes() {
        let mut seq = vec![Complex64::new(1.0, 0.0)];
        for _ in 1..=MAX_EXPONENT {
            let v = unit_disc(rng);
            seq.push(match preset {
                Ramified::Random => v,
                Ramified::Zero => Complex64::new(0.0, 0.0),
            });
        }
        out.insert(p, seq);
    }
    Ok(out)
}

impl HeckeCoefficientModel {
    /// Draws α, β uniformly on the unit circle (or an annulus when not unitary)
    /// and sets γ = ψ(p)/(αβ) at every prime `p ∤ N` up to the bound.
    pub fn new(psi: &DirichletCharacter, seed: u64, options: ModelOptions) -> Result<Self> {
        let level = psi.modulus();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(STREAM_SATAKE);
        let mut primes = Vec::new();
        let mut local = Vec::new();
        for p in arith::primes_up_to(options.prime_bound) {
            if level.is_multiple_of(p) {
                continue;
            }
            let mut draw = || {
                let theta = std::f64::consts::TAU * rng.gen::<f64>();
                let r = if options.unitary { 1.0 } else { (rng.gen::<f64>() * 0.5 - 0.25).exp() };
                Complex64::from_polar(r, theta)
            };
            let (alpha, beta) = (draw(), draw());
            let gamma = psi.eval(p as i64) / (alpha * beta);
            primes.push(p);
            local.push(LocalData::new(SatakeTriple { alpha, beta, gamma }));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(STREAM_RAMIFIED);
        let ramified = ramified_draws(level, options.ramified, &mut rng)?;
        Ok(Self { level, psi: psi.clone(), options, seed, primes, local, ramified })
    }

    /// The dual family: reciprocal triples, nebentypus ψ̄, fresh ramified draws.
    pub fn contragredient(&self) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(STREAM_DUAL_RAMIFIED);
        let ramified = ramified_draws(self.level, self.options.ramified, &mut rng).expect("level ≥ 1");
        Self {
            level: self.level,
            psi: self.psi.conj(),
            options: self.options,
            seed: self.seed,
            primes: self.primes.clone(),
            local: self.local.iter().map(|l| LocalData::new(l.triple.reciprocal())).collect(),
            ramified,
        }
    }

    pub fn options(&self) -> &ModelOptions {
        &self.options
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn satake(&self, p: u64) -> Option<&SatakeTriple> {
        self.primes.binary_search(&p).ok().map(|i| &self.local[i].triple)
    }

    /// The sequence `c_{p,k}` at a prime dividing the level.
    pub fn ramified(&self, p: u64) -> Option<&[Complex64]> {
        self.ramified.get(&p).map(Vec::as_slice)
    }

    /// Multiplies every `c_{p,k}` with `k ≥ 1` by `u`.
    pub fn rescale_ramified(&mut self, u: Complex64) {
        for seq in self.ramified.values_mut() {
            for c in seq.iter_mut().skip(1) {
                *c *= u;
            }
        }
    }

    fn local_factor(&self, p: u64, k1: u32, k2: u32) -> Result<Complex64> {
        if let Some(seq) = self.ramified.get(&p) {
            return Ok(seq[k2 as usize]);
        }
        let i =
            self.primes.binary_search(&p).map_err(|_| Error::PrimeOutOfRange { p, bound: self.options.prime_bound })?;
        Ok(self.local[i].schur((k1 + k2) as usize, k1 as usize))
    }
}

impl CoefficientSource for HeckeCoefficientModel {
    fn level(&self) -> u64 {
        self.level
    }

    fn nebentypus(&self) -> &DirichletCharacter {
        &self.psi
    }

    /// Multiplicative assembly; negative indices by `A(±m₁, (−1)^k m₂) = ψ(−1)^k A(m₁, m₂)`.
    fn coefficient(&self, m1: i64, m2: i64) -> Result<Complex64> {
        if m1 == 0 || m2 == 0 {
            return Err(Error::Zero);
        }
        let (a, b) = (m1.unsigned_abs(), m2.unsigned_abs());
        if arith::gcd(a, self.level) != 1 {
            return Err(Error::CoefficientDomain { m1, m2, level: self.level });
        }
        let fa = arith::factorize(a)?;
        let fb = arith::factorize(b)?;
        let mut primes: Vec<u64> = fa.primes().chain(fb.primes()).collect();
        primes.sort_unstable();
        primes.dedup();
        let mut acc = Complex64::new(1.0, 0.0);
        for p in primes {
            acc *= self.local_factor(p, fa.exponent(p), fb.exponent(p))?;
        }
        if m2 < 0 {
            acc *= f64::from(self.psi.parity());
        }
        Ok(acc)
    }
}

/// A source with one coefficient shifted by `eps` (fault injection).
pub struct Perturbed<'a> {
    pub inner: &'a dyn CoefficientSource,
    pub index: (u64, u64),
    pub eps: Complex64,
}

impl CoefficientSource for Perturbed<'_> {
    fn level(&self) -> u64 {
        self.inner.level()
    }

    fn nebentypus(&self) -> &DirichletCharacter {
        self.inner.nebentypus()
    }

    fn coefficient(&self, m1: i64, m2: i64) -> Result<Complex64> {
        let v = self.inner.coefficient(m1, m2)?;
        if (m1.unsigned_abs(), m2.unsigned_abs()) == self.index {
            let sign = if m2 < 0 { f64::from(self.nebentypus().parity()) } else { 1.0 };
            return Ok(v + sign * self.eps);
        }
        Ok(v)
    }
}

fn divides(d: u64, n: u64) -> bool {
    n.is_multiple_of(d)
}

/// `|A(n,1)A(n₂,n₁) − Σ_{abc=n, a|n₁, b|n₂} ψ(ab) A(cn₂/b, bn₁/a)|`.
pub fn hecke_relation_residual_1(src: &dyn CoefficientSource, n: u64, n1: u64, n2: u64) -> Result<f64> {
    let psi = src.nebentypus();
    let lhs = src.coefficient(n as i64, 1)? * src.coefficient(n2 as i64, n1 as i64)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for a in arith::divisors(n as i64)? {
        if !divides(a, n1) {
            continue;
        }
        for b in arith::divisors((n / a) as i64)? {
            if !divides(b, n2) {
                continue;
            }
            let c = n / a / b;
            let w = psi.eval((a * b) as i64);
            if w.norm() == 0.0 {
                continue;
            }
            rhs += w * src.coefficient((c * n2 / b) as i64, (b * n1 / a) as i64)?;
        }
    }
    Ok((lhs - rhs).norm())
}

/// `|A(1,m)A(n₂,n₁) − Σ_{abc=m, b|n₁, c|n₂} ψ(c) A(bn₂/c, an₁/b)|`.
pub fn hecke_relation_residual_2(src: &dyn CoefficientSource, m: u64, n1: u64, n2: u64) -> Result<f64> {
    let psi = src.nebentypus();
    let lhs = src.coefficient(1, m as i64)? * src.coefficient(n2 as i64, n1 as i64)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for c in arith::divisors(m as i64)? {
        if !divides(c, n2) {
            continue;
        }
        let w = psi.eval(c as i64);
        if w.norm() == 0.0 {
            continue;
        }
        for b in arith::divisors((m / c) as i64)? {
            if !divides(b, n1) {
                continue;
            }
            let a = m / c / b;
            rhs += w * src.coefficient((b * n2 / c) as i64, (a * n1 / b) as i64)?;
        }
    }
    Ok((lhs - rhs).norm())
}

/// `|A(n,1) − ψ(n)·conj(A(1,n))|`; meaningful for unitary Satake draws.
pub fn adjoint_residual(src: &dyn CoefficientSource, n: u64) -> Result<f64> {
    let lhs = src.coefficient(n as i64, 1)?;
    let rhs = src.nebentypus().eval(n as i64) * src.coefficient(1, n as i64)?.conj();
    Ok((lhs - rhs).norm())
}

/// Which cubic local factor to invert in the Euler product check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerFactor {
    /// `1 − A(1,p)χ(p)X + A(p,1)χ(p)²X² − ψ(p)χ(p)³X³`, the factor implied by the relations.
    Relation,
    /// The same with an extra `ψ(p)` on the `X²` term.
    PsiAtQuadratic,
}

/// Compares `Σ_{n ≤ n_max, (n,N)=1} A(1,n)χ(n)n^{-s}` with the Euler product
/// over `p ≤ n_max`, both expanded as Dirichlet polynomials supported on
/// `n ≤ n_max`. Returns the larger of the maximal coefficient discrepancy and
/// the discrepancy of the two polynomials evaluated at `s`.
pub fn euler_product_residual(
    src: &dyn CoefficientSource,
    chi: &DirichletCharacter,
    s: Complex64,
    n_max: u64,
    form: EulerFactor,
) -> Result<f64> {
    let level = src.level();
    let psi = src.nebentypus();
    let len = n_max as usize + 1;
    let zero = Complex64::new(0.0, 0.0);
    let mut series = vec![zero; len];
    for n in 1..=n_max {
        if arith::gcd(n, level) == 1 {
            series[n as usize] = src.coefficient(1, n as i64)? * chi.eval(n as i64);
        }
    }
    let mut product = vec![zero; len];
    product[1] = Complex64::new(1.0, 0.0);
    for p in arith::primes_up_to(n_max) {
        if level.is_multiple_of(p) {
            continue;
        }
        let x = chi.eval(p as i64);
        let t1 = src.coefficient(1, p as i64)? * x;
        let mut t2 = src.coefficient(p as i64, 1)? * x * x;
        if form == EulerFactor::PsiAtQuadratic {
            t2 *= psi.eval(p as i64);
        }
        let t3 = psi.eval(p as i64) * x * x * x;
        // coefficients of the inverse local factor: e_k = t1 e_{k-1} − t2 e_{k-2} + t3 e_{k-3}
        let mut local = vec![Complex64::new(1.0, 0.0)];
        let mut pk = p;
        while pk <= n_max {
            let k = local.len();
            let at = |i: usize| if k >= i { local[k - i] } else { zero };
            local.push(t1 * at(1) - t2 * at(2) + t3 * at(3));
            pk = pk.saturating_mul(p);
        }
        let mut next = vec![zero; len];
        for (n, &v) in product.iter().enumerate().skip(1) {
            if v == zero {
                continue;
            }
            let mut m = n as u64;
            for e in &local {
                if m > n_max {
                    break;
                }
                next[m as usize] += v * e;
                m = m.saturating_mul(p);
            }
        }
        product = next;
    }
    let mut coeff = 0.0f64;
    let mut value = zero;
    for n in 1..len {
        let d = series[n] - product[n];
        coeff = coeff.max(d.norm());
        value += d * (-s * (n as f64).ln()).exp();
    }
    Ok(coeff.max(value.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;

    fn model(q: u64, idx: usize, seed: u64) -> HeckeCoefficientModel {
        let psi = enumerate_characters(q).unwrap()[idx].clone();
        HeckeCoefficientModel::new(&psi, seed, ModelOptions { prime_bound: 200, ..Default::default() }).unwrap()
    }

    /// Oracle: Schur polynomial in three variables by enumerating semistandard tableaux.
    fn schur_ssyt(l1: usize, l2: usize, x: [Complex64; 3]) -> Complex64 {
        // rows of a two-row SSYT over {0,1,2}: row 1 weakly increasing, row 2 strictly above row 1 columnwise
        let mut total = Complex64::new(0.0, 0.0);
        let rows = |len: usize| -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            for a in 0..=len {
                for b in 0..=len - a {
                    let c = len - a - b;
                    out.push([vec![0; a], vec![1; b], vec![2; c]].concat());
                }
            }
            out
        };
        for r1 in rows(l1) {
            for r2 in rows(l2) {
                if (0..l2).all(|j| r2[j] > r1[j]) {
                    let mut term = Complex64::new(1.0, 0.0);
                    for &v in r1.iter().chain(&r2) {
                        term *= x[v];
                    }
                    total += term;
                }
            }
        }
        total
    }

    #[test]
    fn jacobi_trudi_matches_tableaux() {
        let m = model(1, 0, 3);
        for &p in &[2u64, 3, 5, 7] {
            let t = m.satake(p).unwrap();
            let l = LocalData::new(*t);
            for l1 in 0..7 {
                for l2 in 0..=l1 {
                    let want = schur_ssyt(l1, l2, [t.alpha, t.beta, t.gamma]);
                    assert!((l.schur(l1, l2) - want).norm() < 1e-12 * want.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn basic_values() {
        let m = model(3, 1, 9);
        assert_eq!(m.coefficient(1, 1).unwrap(), Complex64::new(1.0, 0.0));
        for p in [2u64, 5, 7, 11] {
            let t = m.satake(p).unwrap();
            let [e1, e2, e3] = t.elementary();
            assert!((e3 - m.psi.eval(p as i64)).norm() < 1e-12);
            assert!((m.coefficient(1, p as i64).unwrap() - e1).norm() < 1e-12);
            assert!((m.coefficient(p as i64, 1).unwrap() - e2).norm() < 1e-12);
            let app = m.coefficient(p as i64, p as i64).unwrap();
            let lhs = m.coefficient(p as i64, 1).unwrap() * m.coefficient(1, p as i64).unwrap() - app;
            assert!((lhs - m.psi.eval(p as i64)).norm() < 1e-12);
        }
        assert!(matches!(m.coefficient(3, 1), Err(Error::CoefficientDomain { .. })));
        assert!(matches!(m.coefficient(1, 211), Err(Error::PrimeOutOfRange { .. })));
        assert_eq!(m.coefficient(1, 9).unwrap(), m.ramified(3).unwrap()[2]);
    }

    #[test]
    fn trivial_level_and_determinism() {
        let a = model(1, 0, 42);
        let b = model(1, 0, 42);
        for p in [2u64, 3, 97] {
            let t = a.satake(p).unwrap();
            assert!((t.alpha * t.beta * t.gamma - 1.0).norm() < 1e-12);
            assert_eq!(t, b.satake(p).unwrap());
        }
        for n in 1..200 {
            assert_eq!(a.coefficient(n, 7).unwrap(), b.coefficient(n, 7).unwrap());
        }
        assert_ne!(model(1, 0, 43).satake(2), a.satake(2));
    }

    #[test]
    fn sign_rule_is_exact() {
        for (q, idx) in [(3u64, 1usize), (4, 1), (5, 2)] {
            let m = model(q, idx, 5);
            let parity = f64::from(m.psi.parity());
            for m1 in [1i64, 7, 11, 13] {
                for m2 in [1i64, 3, 4, 10] {
                    let v = m.coefficient(m1, m2).unwrap();
                    assert_eq!(m.coefficient(-m1, m2).unwrap(), v);
                    assert_eq!(m.coefficient(m1, -m2).unwrap(), v * parity);
                    assert_eq!(m.coefficient(-m1, -m2).unwrap(), v * parity);
                }
            }
        }
    }

    #[test]
    fn multiplicativity() {
        let m = model(5, 1, 17);
        for a in 1..60u64 {
            for b in 1..60u64 {
                for c in [1u64, 2, 3, 7, 12] {
                    for d in [1u64, 5, 11, 25] {
                        if arith::gcd(a * b, c * d) != 1 || arith::gcd(a * c, 5) != 1 {
                            continue;
                        }
                        let lhs = m.coefficient((a * c) as i64, (b * d) as i64).unwrap();
                        let rhs =
                            m.coefficient(a as i64, b as i64).unwrap() * m.coefficient(c as i64, d as i64).unwrap();
                        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn relation_examples() {
        let m = model(3, 1, 2);
        for p in [2u64, 5, 7] {
            assert!(hecke_relation_residual_1(&m, p, 1, 1).unwrap() < 1e-12);
            assert!(hecke_relation_residual_1(&m, p, 1, p).unwrap() < 1e-12);
            assert!(hecke_relation_residual_1(&m, p * p, p, p).unwrap() < 1e-10);
            assert!(hecke_relation_residual_2(&m, 1, p, p * p).unwrap() < 1e-12);
            assert!(hecke_relation_residual_2(&m, p, p, 1).unwrap() < 1e-12);
        }
        assert!(hecke_relation_residual_2(&m, 9, 1, 1).unwrap() < 1e-12);
        assert!(hecke_relation_residual_2(&m, 9 * 4, 2, 5).unwrap() < 1e-12);
    }

    #[test]
    fn relations_on_composites() {
        for (q, idx) in [(1u64, 0usize), (4, 1), (5, 1), (5, 2), (3, 1)] {
            let m = model(q, idx, 11);
            for n in 1..=36u64 {
                for n1 in 1..=12u64 {
                    for n2 in 1..=12u64 {
                        if arith::gcd(n * n1 * n2, q) != 1 {
                            continue;
                        }
                        assert!(hecke_relation_residual_1(&m, n, n1, n2).unwrap() < 1e-10);
                        assert!(hecke_relation_residual_2(&m, n, n1, n2).unwrap() < 1e-10);
                    }
                }
            }
            // ramified m in relation 2
            for n1 in 1..=12u64 {
                for k in 1..=3u32 {
                    let pm = arith::factorize(q).unwrap().primes().next().map_or(1, |p| p.pow(k));
                    if arith::gcd(n1, q) == 1 {
                        assert!(hecke_relation_residual_2(&m, pm * 6, n1, 1).unwrap() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn swapped_index_convention_breaks_relations() {
        // A(p^{k1}, p^{k2}) = s_{(k1+k2, k2, 0)} fails relation 1 as soon as ψ(p) ≠ 1
        struct Swapped(HeckeCoefficientModel);
        impl CoefficientSource for Swapped {
            fn level(&self) -> u64 {
                self.0.level()
            }
            fn nebentypus(&self) -> &DirichletCharacter {
                self.0.nebentypus()
            }
            fn coefficient(&self, m1: i64, m2: i64) -> Result<Complex64> {
                self.0.coefficient(m2, m1)
            }
        }
        let m = Swapped(model(5, 1, 1));
        assert!(hecke_relation_residual_1(&m, 2, 1, 2).unwrap() > 1e-3);
        let m = Swapped(model(1, 0, 1));
        assert!(hecke_relation_residual_1(&m, 2, 1, 2).unwrap() < 1e-12);
    }

    #[test]
    fn adjoint_relation_unitary_only() {
        let m = model(5, 1, 4);
        for n in 1..=100u64 {
            if arith::gcd(n, 5) == 1 {
                assert!(adjoint_residual(&m, n).unwrap() < 1e-10);
            }
        }
        let psi = enumerate_characters(5).unwrap()[1].clone();
        let nu =
            HeckeCoefficientModel::new(&psi, 4, ModelOptions { prime_bound: 50, unitary: false, ..Default::default() })
                .unwrap();
        assert!(adjoint_residual(&nu, 2).unwrap() > 1e-6);
        assert!(hecke_relation_residual_1(&nu, 4, 2, 2).unwrap() < 1e-10);
    }

    #[test]
    fn contragredient_relation() {
        for (q, idx) in [(1u64, 0usize), (3, 1), (5, 1), (8, 2)] {
            let m = model(q, idx, 21);
            let d = m.contragredient();
            assert_eq!(d.coefficient(1, 1).unwrap(), Complex64::new(1.0, 0.0));
            assert_eq!(d.nebentypus(), &m.nebentypus().conj());
            for a in 1..40u64 {
                for b in 1..40u64 {
                    if arith::gcd(a * b, q) != 1 {
                        continue;
                    }
                    let lhs = d.coefficient(a as i64, b as i64).unwrap();
                    let rhs = m.psi.eval((a * b) as i64).conj() * m.coefficient(b as i64, a as i64).unwrap();
                    assert!((lhs - rhs).norm() < 1e-11 * rhs.norm().max(1.0));
                    let dd = d.contragredient();
                    let back = dd.coefficient(a as i64, b as i64).unwrap();
                    assert!((back - m.coefficient(a as i64, b as i64).unwrap()).norm() < 1e-12 * back.norm().max(1.0));
                }
            }
            if q > 1 {
                let p = arith::factorize(q).unwrap().0[0].0;
                assert_ne!(d.ramified(p).unwrap()[1], m.ramified(p).unwrap()[1]);
            }
        }
    }

    #[test]
    fn euler_product() {
        for q in [1u64, 3] {
            for idx in 0..enumerate_characters(q).unwrap().len() {
                let psi = enumerate_characters(q).unwrap()[idx].clone();
                let m = HeckeCoefficientModel::new(&psi, 8, ModelOptions { prime_bound: 300, ..Default::default() })
                    .unwrap();
                for chi in enumerate_characters(5).unwrap() {
                    let s = Complex64::new(2.0, 0.5);
                    assert!(euler_product_residual(&m, &chi, s, 1, EulerFactor::Relation).unwrap() == 0.0);
                    assert!(euler_product_residual(&m, &chi, s, 2, EulerFactor::Relation).unwrap() < 1e-12);
                    assert!(euler_product_residual(&m, &chi, s, 300, EulerFactor::Relation).unwrap() < 1e-9);
                }
            }
        }
        let m = model(3, 1, 8);
        let chi = DirichletCharacter::principal(1).unwrap();
        assert!(
            euler_product_residual(&m, &chi, Complex64::new(2.0, 0.0), 50, EulerFactor::PsiAtQuadratic).unwrap() > 1e-3
        );
    }

    #[test]
    fn perturbation_shifts_one_value() {
        let m = model(1, 0, 1);
        let p = Perturbed { inner: &m, index: (1, 2), eps: Complex64::new(1e-3, 0.0) };
        assert!((p.coefficient(1, 2).unwrap() - m.coefficient(1, 2).unwrap() - 1e-3).norm() < 1e-15);
        assert_eq!(p.coefficient(2, 1).unwrap(), m.coefficient(2, 1).unwrap());
        assert!(hecke_relation_residual_1(&p, 2, 1, 1).unwrap() < 1e-15);
        assert!(hecke_relation_residual_1(&p, 2, 1, 2).unwrap() > 9e-4);
    }

    #[test]
    fn zero_ramified_preset() {
        let psi = enumerate_characters(3).unwrap()[1].clone();
        let m = HeckeCoefficientModel::new(
            &psi,
            1,
            ModelOptions { prime_bound: 50, ramified: Ramified::Zero, unitary: true },
        )
        .unwrap();
        assert_eq!(m.coefficient(2, 3).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(m.coefficient(1, 1).unwrap(), Complex64::new(1.0, 0.0));
    }
}
