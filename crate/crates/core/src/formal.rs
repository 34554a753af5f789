//! Sparse formal double Dirichlet series `Σ c·X^{-w}·Y^{-s}` with `X` a
//! positive integer and `Y` a positive rational.
//!
//! Every series records a [`Coverage`]: the region of keys on which it is
//! known to hold *all* of its terms. Products check that their factors cover
//! enough for every in-window product term to be fully accumulated.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Terms with smaller modulus are dropped after products and builders.
pub const PRUNE_EPS: f64 = 1e-15;

pub type Rational = Ratio<u64>;

/// Position of a monomial: the `X` and `Y` carriers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub x: u64,
    pub y: Rational,
}

impl Key {
    pub fn new(x: u64, num: u64, den: u64) -> Self {
        Self { x, y: Rational::new(num, den) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletMonomial {
    pub coeff: Complex64,
    pub x: u64,
    pub y: Rational,
}

impl DirichletMonomial {
    pub fn new(coeff: Complex64, x: u64, num: u64, den: u64) -> Self {
        Self { coeff, x, y: Rational::new(num, den) }
    }

    pub fn key(&self) -> Key {
        Key { x: self.x, y: self.y }
    }
}

pub fn mono_mul(a: &DirichletMonomial, b: &DirichletMonomial) -> DirichletMonomial {
    DirichletMonomial { coeff: a.coeff * b.coeff, x: a.x * b.x, y: a.y * b.y }
}

/// Truncation box: `X ≤ x_max`, `num(Y) ≤ p_max`, `den(Y) ≤ q_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Window {
    pub x_max: u64,
    pub p_max: u64,
    pub q_max: u64,
}

impl Window {
    pub fn new(x_max: u64, p_max: u64, q_max: u64) -> Result<Self> {
        if x_max == 0 || p_max == 0 || q_max == 0 {
            return Err(Error::Invalid(format!("window {x_max}:{p_max}:{q_max} must be positive")));
        }
        Ok(Self { x_max, p_max, q_max })
    }

    pub fn contains(&self, k: &Key) -> bool {
        k.x <= self.x_max && *k.y.numer() <= self.p_max && *k.y.denom() <= self.q_max
    }

    /// The window a series must cover so that its product with `m` is
    /// complete on `self`: a key `K` in `self` comes from `K / key(m)`, whose
    /// `Y` numerator is at most `P·den(Y_m)` and denominator at most `Q·num(Y_m)`.
    pub fn before_monomial(&self, m: &DirichletMonomial) -> Window {
        Window { x_max: (self.x_max / m.x).max(1), p_max: self.p_max * m.y.denom(), q_max: self.q_max * m.y.numer() }
    }
}

/// Region on which a series is complete; `None` means unbounded in that direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Coverage {
    pub x: Option<u64>,
    pub p: Option<u64>,
    pub q: Option<u64>,
}

fn at_least(have: Option<u64>, need: u64) -> bool {
    have.is_none_or(|h| h >= need)
}

impl Coverage {
    /// Complete everywhere (finite series such as monomials or the unit).
    pub const ALL: Coverage = Coverage { x: None, p: None, q: None };

    pub fn window(w: &Window) -> Self {
        Self { x: Some(w.x_max), p: Some(w.p_max), q: Some(w.q_max) }
    }

    pub fn covers(&self, w: &Window) -> bool {
        at_least(self.x, w.x_max) && at_least(self.p, w.p_max) && at_least(self.q, w.q_max)
    }

    fn contains(&self, k: &Key) -> bool {
        at_least(self.x, k.x) && at_least(self.p, *k.y.numer()) && at_least(self.q, *k.y.denom())
    }

    fn min(a: Option<u64>, b: Option<u64>) -> Option<u64> {
        match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        }
    }

    pub fn intersect(&self, other: &Coverage) -> Coverage {
        Coverage { x: Self::min(self.x, other.x), p: Self::min(self.p, other.p), q: Self::min(self.q, other.q) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries {
    terms: BTreeMap<Key, Complex64>,
    coverage: Coverage,
}

impl FormalSeries {
    /// The zero series, complete on `coverage`.
    pub fn zero(coverage: Coverage) -> Self {
        Self { terms: BTreeMap::new(), coverage }
    }

    pub fn unit() -> Self {
        Self::monomial(DirichletMonomial::new(Complex64::new(1.0, 0.0), 1, 1, 1))
    }

    pub fn monomial(m: DirichletMonomial) -> Self {
        let mut s = Self::zero(Coverage::ALL);
        s.add_term(m.key(), m.coeff);
        s
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, k: &Key) -> Complex64 {
        self.terms.get(k).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Complex64)> {
        self.terms.iter()
    }

    /// Adds `c` at `k`; keys outside the coverage are dropped.
    pub fn add_term(&mut self, k: Key, c: Complex64) {
        if self.coverage.contains(&k) {
            *self.terms.entry(k).or_default() += c;
        }
    }

    pub fn ensure_covers(&self, w: &Window, what: &str) -> Result<()> {
        if self.coverage.covers(w) {
            Ok(())
        } else {
            Err(Error::Incomplete(format!("{what}: coverage {:?} does not contain window {:?}", self.coverage, w)))
        }
    }

    /// Adds `other` term by term; the sum is complete on the common coverage.
    pub fn accumulate(&mut self, other: &FormalSeries) {
        self.coverage = self.coverage.intersect(&other.coverage);
        let cov = self.coverage;
        self.terms.retain(|k, _| cov.contains(k));
        for (k, c) in &other.terms {
            self.add_term(*k, *c);
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(), coverage: self.coverage }
    }

    /// Keeps only keys inside `w`; coverage shrinks accordingly.
    pub fn restricted(&self, w: &Window) -> Self {
        let cov = self.coverage.intersect(&Coverage::window(w));
        Self { terms: self.terms.iter().filter(|(k, _)| w.contains(k)).map(|(k, v)| (*k, *v)).collect(), coverage: cov }
    }

    pub fn prune(&mut self, eps: f64) {
        self.terms.retain(|_, c| c.norm() >= eps);
    }

    fn max_den(&self, x_max: Option<u64>) -> u64 {
        self.terms.keys().filter(|k| at_least(x_max, k.x)).map(|k| *k.y.denom()).max().unwrap_or(1)
    }

    fn max_num(&self, x_max: Option<u64>) -> u64 {
        self.terms.keys().filter(|k| at_least(x_max, k.x)).map(|k| *k.y.numer()).max().unwrap_or(1)
    }
}

/// Whether factor `f` (multiplied by `g`) has every term that can reach `target`.
fn factor_suffices(f: &FormalSeries, g: &FormalSeries, target: &Coverage) -> std::result::Result<(), String> {
    let fc = f.coverage;
    let gc = g.coverage;
    let x_ok = match target.x {
        None => fc.x.is_none(),
        Some(x) => at_least(fc.x, x),
    };
    if !x_ok {
        return Err(format!("X: factor covers {:?}, target {:?}", fc.x, target.x));
    }
    // a numerator up to P in the product may come from num(Y_f) up to P·den(Y_g)
    let p_ok = match (target.p, fc.p) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(p), Some(fp)) => gc.q.is_none() && fp >= p.saturating_mul(g.max_den(target.x)),
    };
    if !p_ok {
        return Err(format!("Y numerator: factor covers {:?}, target {:?}", fc.p, target.p));
    }
    let q_ok = match (target.q, fc.q) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(q), Some(fq)) => gc.p.is_none() && fq >= q.saturating_mul(g.max_num(target.x)),
    };
    if !q_ok {
        return Err(format!("Y denominator: factor covers {:?}, target {:?}", fc.q, target.q));
    }
    Ok(())
}

fn multiply(a: &FormalSeries, b: &FormalSeries, target: Coverage, prune_eps: f64) -> Result<FormalSeries> {
    factor_suffices(a, b, &target).map_err(|e| Error::Incomplete(format!("left factor: {e}")))?;
    factor_suffices(b, a, &target).map_err(|e| Error::Incomplete(format!("right factor: {e}")))?;
    let mut out = FormalSeries::zero(target);
    for (ka, ca) in &a.terms {
        if !at_least(target.x, ka.x) {
            break;
        }
        for (kb, cb) in &b.terms {
            let x = ka.x.saturating_mul(kb.x);
            if !at_least(target.x, x) {
                break;
            }
            out.add_term(Key { x, y: ka.y * kb.y }, ca * cb);
        }
    }
    out.prune(prune_eps);
    Ok(out)
}

/// Product truncated to `w`, with completeness guard.
pub fn series_mul(a: &FormalSeries, b: &FormalSeries, w: &Window) -> Result<FormalSeries> {
    series_mul_with(a, b, w, PRUNE_EPS)
}

/// [`series_mul`] with an explicit pruning threshold (0 disables pruning).
pub fn series_mul_with(a: &FormalSeries, b: &FormalSeries, w: &Window, prune_eps: f64) -> Result<FormalSeries> {
    multiply(a, b, Coverage::window(w), prune_eps)
}

/// Product of two series complete in `Y`, truncated only in `X`; the result stays complete in `Y`.
pub fn series_mul_slab(a: &FormalSeries, b: &FormalSeries, x_max: u64) -> Result<FormalSeries> {
    multiply(a, b, Coverage { x: Some(x_max), p: None, q: None }, PRUNE_EPS)
}

/// `m · s` truncated to `w`; `s` must cover `w.before_monomial(m)`.
pub fn monomial_mul(m: &DirichletMonomial, s: &FormalSeries, w: &Window) -> Result<FormalSeries> {
    s.ensure_covers(&w.before_monomial(m), "monomial factor")?;
    let mut out = FormalSeries::zero(Coverage::window(w));
    for (k, c) in &s.terms {
        let x = k.x.saturating_mul(m.x);
        if x > w.x_max {
            continue;
        }
        out.add_term(Key { x, y: k.y * m.y }, c * m.coeff);
    }
    Ok(out)
}

/// Largest `n` with `n^e ≤ bound`.
fn integer_root(bound: u64, e: u32) -> u64 {
    let mut n = ((bound as f64).powf(1.0 / e as f64).round() as u64).saturating_add(1);
    while n > 0 && n.checked_pow(e).is_none_or(|v| v > bound) {
        n -= 1;
    }
    n
}

/// `Σ_n f(n) n^{-(w_mult·w + s_mult·s + shift)}` over `n` passing `restriction`,
/// as monomials `(f(n)·n^{-shift}; X = n^{w_mult}, Y = n^{s_mult})`.
///
/// The index bound is the tightest of `n^{w_mult} ≤ X_max`, `n^{s_mult} ≤ P_max`
/// (when `s_mult > 0`) and `n^{|s_mult|} ≤ Q_max` (when `s_mult < 0`). The
/// series is complete in the direction of the binding carrier and unbounded in
/// the others.
pub fn build_lseries(
    coeff_fn: impl Fn(u64) -> Result<Complex64>,
    w_mult: u32,
    s_mult: i32,
    shift: i32,
    restriction: impl Fn(u64) -> bool,
    window: &Window,
) -> Result<FormalSeries> {
    let mut candidates: Vec<(u64, Coverage)> = Vec::new();
    if w_mult > 0 {
        candidates.push((integer_root(window.x_max, w_mult), Coverage { x: Some(window.x_max), ..Coverage::ALL }));
    }
    if s_mult > 0 {
        candidates
            .push((integer_root(window.p_max, s_mult as u32), Coverage { p: Some(window.p_max), ..Coverage::ALL }));
    }
    if s_mult < 0 {
        candidates
            .push((integer_root(window.q_max, (-s_mult) as u32), Coverage { q: Some(window.q_max), ..Coverage::ALL }));
    }
    let Some(&(bound, coverage)) = candidates.iter().min_by_key(|c| c.0) else {
        return Err(Error::Invalid("no carrier bounds the summation index".into()));
    };
    let mut out = FormalSeries::zero(coverage);
    for n in 1..=bound {
        if !restriction(n) {
            continue;
        }
        let c = coeff_fn(n)? * (n as f64).powi(-shift);
        let x = n.pow(w_mult);
        let y = if s_mult >= 0 {
            Rational::from_integer(n.pow(s_mult as u32))
        } else {
            Rational::new(1, n.pow((-s_mult) as u32))
        };
        out.add_term(Key { x, y }, c);
    }
    out.prune(PRUNE_EPS);
    Ok(out)
}

/// Maximum coefficient discrepancy over keys inside `window`.
pub fn compare(a: &FormalSeries, b: &FormalSeries, window: &Window) -> f64 {
    let mut worst = 0.0f64;
    for (k, c) in a.terms() {
        if window.contains(k) {
            worst = worst.max((c - b.get(k)).norm());
        }
    }
    for (k, c) in b.terms() {
        if window.contains(k) && !a.terms.contains_key(k) {
            worst = worst.max(c.norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn mono_mul_examples() {
        let a = DirichletMonomial::new(Complex64::new(2.0, 0.0), 4, 1, 2);
        let b = DirichletMonomial::new(Complex64::new(3.0, 0.0), 9, 3, 1);
        assert_eq!(mono_mul(&a, &b), DirichletMonomial::new(Complex64::new(6.0, 0.0), 36, 3, 2));
        let u = DirichletMonomial::new(one(), 1, 1, 1);
        assert_eq!(mono_mul(&a, &u), a);
        let c = DirichletMonomial::new(one(), 1, 2, 3);
        let d = DirichletMonomial::new(one(), 1, 3, 2);
        assert_eq!(mono_mul(&c, &d).y, Rational::from_integer(1));
    }

    #[test]
    fn counting_series() {
        let w = Window::new(50, 3, 3).unwrap();
        let s = build_lseries(|_| Ok(one()), 1, 0, 0, |_| true, &w).unwrap();
        assert_eq!(s.len(), 50);
        for n in 1..=50 {
            assert_eq!(s.get(&Key::new(n, 1, 1)), one());
        }
        assert!(build_lseries(|_| Ok(one()), 0, 0, 0, |_| true, &w).is_err());
    }

    #[test]
    fn inverse_l_factor_example() {
        let w = Window::new(4, 10, 10).unwrap();
        let mu = |n: u64| Ok(Complex64::new(crate::arith::mobius(n)? as f64, 0.0));
        let s = build_lseries(mu, 2, -2, 1, |_| true, &w).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.get(&Key::new(1, 1, 1)), one());
        assert_eq!(s.get(&Key::new(4, 1, 4)), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn product_example_and_identities() {
        let w = Window::new(4, 3, 3).unwrap();
        let a = build_lseries(|_| Ok(one()), 2, -1, 0, |_| true, &Window::new(4, 100, 100).unwrap()).unwrap();
        let b = build_lseries(|_| Ok(one()), 0, 1, 0, |_| true, &Window::new(1, 6, 1).unwrap()).unwrap();
        let p = series_mul(&a, &b, &w).unwrap();
        assert_eq!(p.get(&Key::new(4, 3, 2)), one());
        assert_eq!(compare(&series_mul(&a, &FormalSeries::unit(), &w).unwrap(), &a.restricted(&w), &w), 0.0);
        let e = FormalSeries::zero(Coverage::ALL);
        assert!(series_mul(&e, &b, &w).unwrap().is_empty());
    }

    #[test]
    fn guard_rejects_short_factor() {
        let w = Window::new(4, 3, 3).unwrap();
        let a = build_lseries(|_| Ok(one()), 2, -1, 0, |_| true, &Window::new(4, 100, 100).unwrap()).unwrap();
        // P = 3 but partner denominators reach 2, so the s-series must reach 6
        let b = build_lseries(|_| Ok(one()), 0, 1, 0, |_| true, &Window::new(1, 3, 1).unwrap()).unwrap();
        assert!(matches!(series_mul(&a, &b, &w), Err(Error::Incomplete(_))));
        let short = build_lseries(|_| Ok(one()), 1, 0, 0, |_| true, &Window::new(2, 1, 1).unwrap()).unwrap();
        assert!(series_mul(&short, &FormalSeries::unit(), &w).is_err());
    }

    #[test]
    fn compare_examples() {
        let w = Window::new(10, 10, 10).unwrap();
        let a = build_lseries(|n| Ok(Complex64::new(n as f64, 0.0)), 1, 1, 0, |_| true, &w).unwrap();
        assert_eq!(compare(&a, &a, &w), 0.0);
        let mut b = a.clone();
        b.add_term(Key::new(3, 3, 1), Complex64::new(1e-7, 0.0));
        assert!((compare(&a, &b, &w) - 1e-7).abs() < 1e-15);
    }

    #[test]
    fn monomial_guard() {
        let w = Window::new(10, 10, 10).unwrap();
        let m = DirichletMonomial::new(one(), 1, 3, 1);
        let need = w.before_monomial(&m);
        assert_eq!(need, Window { x_max: 10, p_max: 10, q_max: 30 });
        let s = build_lseries(|_| Ok(one()), 0, -1, 0, |_| true, &Window::new(1, 1, 29).unwrap()).unwrap();
        assert!(monomial_mul(&m, &s, &w).is_err());
        let s = build_lseries(|_| Ok(one()), 0, -1, 0, |_| true, &need).unwrap();
        let p = monomial_mul(&m, &s, &w).unwrap();
        // Y = 3/n with den ≤ 10: n ∈ {1..10} ∪ {3k : k ≤ 10}
        assert_eq!(p.get(&Key::new(1, 1, 10)), one());
        assert_eq!(p.get(&Key::new(1, 1, 9)), one());
        assert_eq!(p.len(), 10 + 10 - 3);
    }

    /// Random sparse series with multiplicative carriers, complete on its full support.
    fn arb_series() -> impl Strategy<Value = FormalSeries> {
        prop::collection::vec((1u64..6, 1u64..5, 1u64..5, -1.0f64..1.0, -1.0f64..1.0), 0..8).prop_map(|ts| {
            let mut s = FormalSeries::zero(Coverage::ALL);
            for (x, p, q, re, im) in ts {
                s.add_term(Key::new(x, p, q), Complex64::new(re, im));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn mul_commutative_associative(a in arb_series(), b in arb_series(), c in arb_series()) {
            let w = Window::new(40, 30, 30).unwrap();
            let ab = series_mul(&a, &b, &w).unwrap();
            let ba = series_mul(&b, &a, &w).unwrap();
            prop_assert!(compare(&ab, &ba, &w) < 1e-13);
            let full = |s: &FormalSeries, t: &FormalSeries| multiply(s, t, Coverage::ALL, 0.0).unwrap();
            let left = full(&full(&a, &b), &c).restricted(&w);
            let right = full(&a, &full(&b, &c)).restricted(&w);
            prop_assert!(compare(&left, &right, &w) < 1e-13);
            prop_assert!(compare(&series_mul(&full(&a, &b), &c, &w).unwrap(), &left, &w) < 1e-13);
        }

        #[test]
        fn pruning_is_invisible(a in arb_series(), b in arb_series()) {
            let w = Window::new(20, 12, 12).unwrap();
            let pruned = series_mul(&a, &b, &w).unwrap();
            let raw = series_mul_with(&a, &b, &w, 0.0).unwrap();
            prop_assert!(compare(&pruned, &raw, &w) < 1e-12);
        }

        #[test]
        fn window_guarded_products_are_exact(x in 1u64..40, p in 1u64..20, q in 1u64..20) {
            // Σ n^{-(2w-s)} · Σ m^{-s} built through the guard equals brute enumeration
            let w = Window::new(x, p, q).unwrap();
            let a = build_lseries(|n| Ok(Complex64::new(n as f64, 0.0)), 2, -1, 0, |_| true, &Window::new(x, u64::MAX, u64::MAX).unwrap()).unwrap();
            let big = p * a.max_den(Some(x));
            let b = build_lseries(|m| Ok(Complex64::new(1.0, m as f64)), 0, 1, 0, |_| true, &Window::new(1, big, 1).unwrap()).unwrap();
            let prod = series_mul(&a, &b, &w).unwrap();
            let mut brute = FormalSeries::zero(Coverage::window(&w));
            for n in 1..=10u64 {
                for m in 1..=500u64 {
                    brute.add_term(Key { x: n * n, y: Rational::new(m, n) }, Complex64::new(n as f64, 0.0) * Complex64::new(1.0, m as f64));
                }
            }
            prop_assert!(compare(&prod, &brute, &w) < 1e-12);
        }
    }
}
