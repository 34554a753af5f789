//! Coefficient-level verifiers for the double Dirichlet series identities
//! behind the Voronoi formula with level, and for the finite lemmas they use.
//!
//! Every series is a [`FormalSeries`] in `X^{-w} Y^{-s}`. Dirichlet factors map
//! to keys as follows: `n^{-(2w-s)} ↦ (n², 1/n)`, `m^{-s} ↦ (1, m)`,
//! `ℓ^{-(2w-2s+1)} ↦ (ℓ², 1/ℓ²)` with weight `1/ℓ`.
//!
//! With `c = ℓc*` the two one-variable series are
//!
//! ```text
//! H(q, ℓ) = Σ_n A(q, n) g(χ̄*, c, n) n^{-s} ℓ^{2s-1}
//! G(q, ℓ) = χ*(−N) ψ(qc) G_±(s) c^{1-3s} ℓ^{2s-1} Σ_{d | qℓ} Σ_n A_F̃(d, n)/(dn) · (d²n/q)^s · g(χ*, c, d) g(χ*, qc/d, n)
//! ```
//!
//! The factor `G_±(s)·c*^{-3s}` is common to every term of G and of the
//! functional-equation side of `Z`; builders return the series with that
//! factor removed and record its power in a [`FactoredSeries`].

use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex64;

use crate::arith;
use crate::characters::{gauss_sum, generalized_gauss_sum, DirichletCharacter};
use crate::error::{Error, Result};
use crate::formal::{
    build_lseries, compare, monomial_mul, series_mul, series_mul_slab, Coverage, DirichletMonomial, FormalSeries, Key,
    Rational, Window,
};
use crate::hecke::CoefficientSource;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Memoized `g(χ, c, m)` for one character.
struct GaussTable {
    chi: DirichletCharacter,
    cache: RefCell<HashMap<(u64, u64), Complex64>>,
}

impl GaussTable {
    fn new(chi: DirichletCharacter) -> Self {
        Self { chi, cache: RefCell::new(HashMap::new()) }
    }

    fn get(&self, c: u64, m: i64) -> Result<Complex64> {
        let r = arith::reduce(m, c);
        if let Some(v) = self.cache.borrow().get(&(c, r)) {
            return Ok(*v);
        }
        let v = generalized_gauss_sum(&self.chi, c, r as i64)?;
        self.cache.borrow_mut().insert((c, r), v);
        Ok(v)
    }
}

/// Memoized coefficient source.
struct Memo<'a> {
    inner: &'a dyn CoefficientSource,
    cache: RefCell<HashMap<(i64, i64), Complex64>>,
}

impl<'a> Memo<'a> {
    fn new(inner: &'a dyn CoefficientSource) -> Self {
        Self { inner, cache: RefCell::new(HashMap::new()) }
    }

    fn get(&self, m1: u64, m2: u64) -> Result<Complex64> {
        let key = (m1 as i64, m2 as i64);
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(*v);
        }
        let v = self.inner.coefficient(key.0, key.1)?;
        self.cache.borrow_mut().insert(key, v);
        Ok(v)
    }
}

/// A series together with the powers of the stripped factors `G_±(s)` and `c*^{-3s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredSeries {
    pub series: FormalSeries,
    pub g_pm_power: u32,
    pub cstar_power: u32,
}

impl FactoredSeries {
    fn empty(window: &Window, g_pm_power: u32, cstar_power: u32) -> Self {
        Self { series: FormalSeries::zero(Coverage::window(window)), g_pm_power, cstar_power }
    }

    /// Adds `other`, which must carry the same stripped factors.
    fn accumulate(&mut self, other: &FactoredSeries) -> Result<()> {
        self.same_factors(other)?;
        self.series.accumulate(&other.series);
        Ok(())
    }

    fn same_factors(&self, other: &FactoredSeries) -> Result<()> {
        if (self.g_pm_power, self.cstar_power) != (other.g_pm_power, other.cstar_power) {
            return Err(Error::Structural(format!(
                "stripped factor powers differ: G_± {} vs {}, c*^(-3s) {} vs {}",
                self.g_pm_power, other.g_pm_power, self.cstar_power, other.cstar_power
            )));
        }
        Ok(())
    }
}

/// Data shared by the series identities: the form `F`, its dual `F̃`, a
/// primitive χ* modulo `c*` and the first index `q`.
pub struct IdentityCase<'a> {
    model: Memo<'a>,
    dual: Memo<'a>,
    psi: DirichletCharacter,
    level: u64,
    chi: DirichletCharacter,
    q: u64,
    window: Window,
    star: GaussTable,
    bar: GaussTable,
}

impl<'a> IdentityCase<'a> {
    /// Checks `χ*` primitive, `gcd(q, N) = gcd(c*, N) = 1` and that `dual` has nebentypus ψ̄.
    pub fn new(
        model: &'a dyn CoefficientSource,
        dual: &'a dyn CoefficientSource,
        chi: &DirichletCharacter,
        q: u64,
        window: Window,
    ) -> Result<Self> {
        let level = model.level();
        if !chi.is_primitive() {
            return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: chi.conductor() });
        }
        if q == 0 || arith::gcd(q, level) != 1 {
            return Err(Error::Coprimality(format!("q = {q} and N = {level}")));
        }
        if arith::gcd(chi.modulus(), level) != 1 {
            return Err(Error::Coprimality(format!("c* = {} and N = {level}", chi.modulus())));
        }
        if dual.level() != level || *dual.nebentypus() != model.nebentypus().conj() {
            return Err(Error::Invalid("dual source must have the same level and nebentypus ψ̄".into()));
        }
        Ok(Self {
            model: Memo::new(model),
            dual: Memo::new(dual),
            psi: model.nebentypus().clone(),
            level,
            chi: chi.clone(),
            q,
            window,
            star: GaussTable::new(chi.clone()),
            bar: GaussTable::new(chi.conj()),
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    fn cstar(&self) -> u64 {
        self.chi.modulus()
    }

    fn coprime_to_level(&self, n: u64) -> bool {
        arith::gcd(n, self.level) == 1
    }

    fn psi(&self, n: u64) -> Complex64 {
        self.psi.eval(n as i64)
    }

    fn chi(&self, n: i64) -> Complex64 {
        self.chi.eval(n)
    }

    fn check_modulus(&self, qq: u64, ell: u64) -> Result<()> {
        if !self.coprime_to_level(qq) || !self.coprime_to_level(ell) {
            return Err(Error::Coprimality(format!("indices {qq}, {ell} and N = {}", self.level)));
        }
        Ok(())
    }

    /// `H(q', ℓ)` (modulus `c = ℓc*`) on `window`.
    ///
    /// Terms sit at `Y = n/ℓ²` with weight `A(q', n) g(χ̄*, c, n)/ℓ`. Writing
    /// `h = gcd(n, ℓ²)` and `n = hk`, the key is `k/(ℓ²/h)` in lowest terms, so
    /// the in-window indices are exactly `h | ℓ²`, `ℓ²/h ≤ Q`, `k ≤ P`,
    /// `gcd(k, ℓ²/h) = 1`.
    pub fn build_h(&self, qq: u64, ell: u64, window: &Window) -> Result<FormalSeries> {
        self.check_modulus(qq, ell)?;
        let c = ell * self.cstar();
        let l2 = ell * ell;
        let mut out = FormalSeries::zero(Coverage { x: None, p: Some(window.p_max), q: Some(window.q_max) });
        for h in arith::divisors(l2 as i64)? {
            let den = l2 / h;
            if den > window.q_max {
                continue;
            }
            for k in 1..=window.p_max {
                if arith::gcd(k, den) != 1 {
                    continue;
                }
                let n = h * k;
                let g = self.bar.get(c, n as i64)?;
                if g == ZERO {
                    continue;
                }
                let a = self.model.get(qq, n)?;
                out.add_term(Key { x: 1, y: Rational::new(k, den) }, a * g / ell as f64);
            }
        }
        Ok(out)
    }

    /// `G(q', ℓ)` on `window`, without `G_±(s)·c*^{-3s}`.
    ///
    /// Terms sit at `Y = ℓq'/(d²n)` for `d | q'ℓ` with weight
    /// `c*·χ*(−N)ψ(q'c)·A_F̃(d, n) g(χ*, c, d) g(χ*, q'c/d, n)/(dn)`. With
    /// `M = ℓq'` and `h = gcd(d²n, M)`, the key is `(M/h)/k` where `d²n = hk`,
    /// `gcd(k, M/h) = 1`; so `n` is enumerated through `h | M`, `k ≤ Q`, `d² | hk`.
    pub fn build_g(&self, qq: u64, ell: u64, window: &Window) -> Result<FactoredSeries> {
        self.check_modulus(qq, ell)?;
        let cstar = self.cstar();
        let c = ell * cstar;
        let big_m = ell * qq;
        let pref = self.chi(-(self.level as i64)) * self.psi(qq * c) * cstar as f64;
        let mut out = FormalSeries::zero(Coverage { x: None, p: Some(window.p_max), q: Some(window.q_max) });
        if pref != ZERO {
            let divs = arith::divisors(big_m as i64)?;
            for &d in &divs {
                let gd = self.star.get(c, d as i64)?;
                if gd == ZERO {
                    continue;
                }
                let d2 = d * d;
                for &h in &divs {
                    let num = big_m / h;
                    if num > window.p_max {
                        continue;
                    }
                    for k in 1..=window.q_max {
                        if arith::gcd(k, num) != 1 || (h * k) % d2 != 0 {
                            continue;
                        }
                        let n = h * k / d2;
                        let gn = self.star.get(qq * c / d, n as i64)?;
                        if gn == ZERO {
                            continue;
                        }
                        let a = self.dual.get(d, n)?;
                        out.add_term(Key { x: 1, y: Rational::new(num, k) }, pref * a * gd * gn / (d * n) as f64);
                    }
                }
            }
        }
        Ok(FactoredSeries { series: out, g_pm_power: 1, cstar_power: 1 })
    }

    /// Index triples `(d₁, d₂, ℓ)` of the expansion `Σ_{(d₁,N)=1} Σ_{d₂|q} Σ_{(ℓ,N)=1}`,
    /// with the monomial `ψ(d₂)χ*(d₁d₂)/τ(χ̄*) · X^{(d₁ℓ)²} Y^{d₂}`; `(d₁ℓ)² ≤ X_max` bounds both sums.
    fn expansion_terms(&self) -> Result<Vec<(u64, u64, DirichletMonomial)>> {
        let tau_bar = gauss_sum(&self.chi.conj());
        let mut out = Vec::new();
        let root = (1..).take_while(|r: &u64| r * r <= self.window.x_max).last().unwrap_or(1);
        for d1 in 1..=root {
            if !self.coprime_to_level(d1) {
                continue;
            }
            for ell in 1..=root / d1 {
                if !self.coprime_to_level(ell) {
                    continue;
                }
                for d2 in arith::divisors(self.q as i64)? {
                    let w = self.psi(d2) * self.chi((d1 * d2) as i64) / tau_bar;
                    if w == ZERO {
                        continue;
                    }
                    let x = (d1 * ell) * (d1 * ell);
                    out.push((self.q * d1 / d2, ell, DirichletMonomial::new(w, x, d2, 1)));
                }
            }
        }
        Ok(out)
    }

    /// `Z(s,w) = L_q^{(N)}(2w−s, F)·L(s, F×χ*)·L^{(N)}(2w−2s+1, χ̄*)^{-1}` on the window.
    pub fn z_product(&self) -> Result<FormalSeries> {
        let w = self.window;
        let slab_window = Window { x_max: w.x_max, p_max: u64::MAX, q_max: u64::MAX };
        let lq = build_lseries(|n| self.model.get(self.q, n), 2, -1, 0, |n| self.coprime_to_level(n), &slab_window)?;
        let chibar = self.chi.conj();
        let inv = build_lseries(
            |l| Ok(chibar.eval(l as i64) * f64::from(arith::mobius(l)?)),
            2,
            -2,
            1,
            |l| self.coprime_to_level(l),
            &slab_window,
        )?;
        let slab = series_mul_slab(&lq, &inv, w.x_max)?;
        // Y-numerators up to P·(largest slab denominator) can reach the window
        let dmax = slab.terms().map(|(k, _)| *k.y.denom()).max().unwrap_or(1);
        let lf_window = Window { x_max: 1, p_max: w.p_max * dmax, q_max: 1 };
        let lf = build_lseries(|m| Ok(self.model.get(1, m)? * self.chi(m as i64)), 0, 1, 0, |_| true, &lf_window)?;
        series_mul(&slab, &lf, &w)
    }

    /// `Σ_{d₁,d₂,ℓ} ψ(d₂)χ*(d₁d₂)/τ(χ̄*) · d₁^{-2w} ℓ^{-2w} d₂^{-s} H(qd₁/d₂, ℓ)`.
    pub fn z_expansion(&self) -> Result<FormalSeries> {
        let w = self.window;
        let mut out = FormalSeries::zero(Coverage::window(&w));
        for (qq, ell, mono) in self.expansion_terms()? {
            let h = self.build_h(qq, ell, &w.before_monomial(&mono))?;
            out.accumulate(&monomial_mul(&mono, &h, &w)?);
        }
        Ok(out)
    }

    /// Residual of `Z = Σ … H(qd₁/d₂, ℓ)`.
    pub fn verify_z_expansion(&self) -> Result<f64> {
        let lhs = self.z_product()?;
        let rhs = self.z_expansion()?;
        lhs.ensure_covers(&self.window, "Z product")?;
        rhs.ensure_covers(&self.window, "H expansion")?;
        Ok(compare(&lhs, &rhs, &self.window))
    }

    /// `Z` after the functional equation, without `G_±(s)c*^{-3s}`:
    /// `ψ(c*)χ*(N)τ(χ*)³ Σ_{(n,N)=1} Σ_{d₁|q} Σ_{d₀} A_F̃(nd₁, qd₀/d₁) ψ(nq) χ̄*(d₀d₁)/(d₀d₁)`
    /// at `X = n²`, `Y = 1/(nd₀d₁)`. `n² ≤ X` and `nd₀d₁ ≤ Q` bound the sums.
    pub fn fe_side(&self) -> Result<FactoredSeries> {
        let w = self.window;
        let cstar = self.cstar();
        let pref = self.psi(cstar) * self.chi(self.level as i64) * gauss_sum(&self.chi).powi(3);
        let mut out = FactoredSeries::empty(&w, 1, 1);
        let chibar = self.chi.conj();
        for n in (1..).take_while(|n: &u64| n * n <= w.x_max) {
            if !self.coprime_to_level(n) {
                continue;
            }
            let pn = self.psi(n * self.q);
            for d1 in arith::divisors(self.q as i64)? {
                for d0 in (1..).take_while(|d0: &u64| n * d0 * d1 <= w.q_max) {
                    let a = self.dual.get(n * d1, self.q * d0 / d1)?;
                    let c = pref * a * pn * chibar.eval((d0 * d1) as i64) / (d0 * d1) as f64;
                    out.series.add_term(Key { x: n * n, y: Rational::new(1, n * d0 * d1) }, c);
                }
            }
        }
        Ok(out)
    }

    /// `Σ_{d₁,d₂,ℓ} ψ(d₂)χ*(d₁d₂)/τ(χ̄*) · d₁^{-2w} ℓ^{-2w} d₂^{-s} G(qd₁/d₂, ℓ)`, stripped.
    pub fn g_expansion(&self) -> Result<FactoredSeries> {
        let w = self.window;
        let mut out = FactoredSeries::empty(&w, 1, 1);
        for (qq, ell, mono) in self.expansion_terms()? {
            let g = self.build_g(qq, ell, &w.before_monomial(&mono))?;
            let term = FactoredSeries { series: monomial_mul(&mono, &g.series, &w)?, ..g };
            out.accumulate(&term)?;
        }
        Ok(out)
    }

    /// Residual between the functional-equation side of `Z` and its G expansion.
    ///
    /// Both sides carry `G_±(s)c*^{-3s}` exactly once per term (checked), and the
    /// two Gauss-sum normalizations are tied by `τ(χ*)τ(χ̄*) = χ*(−1)c*`, which
    /// is asserted before comparing.
    pub fn verify_fe_rearrangement(&self) -> Result<f64> {
        let tau = gauss_sum(&self.chi);
        let tau_bar = gauss_sum(&self.chi.conj());
        let expected = self.chi(-1) * self.cstar() as f64;
        if (tau * tau_bar - expected).norm() > 1e-9 {
            return Err(Error::Structural(format!(
                "τ(χ*)τ(χ̄*) = {} differs from χ*(−1)c* = {}",
                tau * tau_bar,
                expected
            )));
        }
        let lhs = self.fe_side()?;
        let rhs = self.g_expansion()?;
        lhs.same_factors(&rhs)?;
        if lhs.g_pm_power != 1 {
            return Err(Error::Structural(format!("G_± occurs to power {}", lhs.g_pm_power)));
        }
        lhs.series.ensure_covers(&self.window, "functional-equation side")?;
        rhs.series.ensure_covers(&self.window, "G expansion")?;
        Ok(compare(&lhs.series, &rhs.series, &self.window))
    }

    /// `Σ_{d₂|q'} Σ_{d₁ℓ=m} ψ(d₂)χ*(d₁d₂) d₂^{-s} S(q'd₁/d₂, ℓ)` for `S = H` or `S = G`.
    fn bold<F>(&self, qq: u64, m: u64, window: &Window, build: F) -> Result<FormalSeries>
    where
        F: Fn(u64, u64, &Window) -> Result<FormalSeries>,
    {
        let mut out = FormalSeries::zero(Coverage::window(window));
        for d2 in arith::divisors(qq as i64)? {
            for d1 in arith::divisors(m as i64)? {
                let w = self.psi(d2) * self.chi((d1 * d2) as i64);
                if w == ZERO {
                    continue;
                }
                let mono = DirichletMonomial::new(w, 1, d2, 1);
                let s = build(qq * d1 / d2, m / d1, &window.before_monomial(&mono))?;
                out.accumulate(&monomial_mul(&mono, &s, window)?);
            }
        }
        Ok(out)
    }

    /// `Σ_{e₀|m} Σ_{e₁|qe₀} μ(e₀)μ(e₁)χ*(e₀e₁)ψ(e₁) e₁^{-s} B(qe₀/e₁, m/e₀)`.
    fn moebius_assembly<F>(&self, m: u64, window: &Window, bold: F) -> Result<FormalSeries>
    where
        F: Fn(u64, u64, &Window) -> Result<FormalSeries>,
    {
        let mut out = FormalSeries::zero(Coverage::window(window));
        for e0 in arith::divisors(m as i64)? {
            let mu0 = arith::mobius(e0)?;
            if mu0 == 0 {
                continue;
            }
            for e1 in arith::divisors((self.q * e0) as i64)? {
                let mu1 = arith::mobius(e1)?;
                let w = self.chi((e0 * e1) as i64) * self.psi(e1) * f64::from(mu0 * mu1);
                if w == ZERO {
                    continue;
                }
                let mono = DirichletMonomial::new(w, 1, e1, 1);
                let b = bold(self.q * e0 / e1, m / e0, &window.before_monomial(&mono))?;
                out.accumulate(&monomial_mul(&mono, &b, window)?);
            }
        }
        Ok(out)
    }

    /// Möbius inversion recovering `H(q, m)` and `G(q, m)` from their bold
    /// convolutions; returns the larger of the two residuals (s-only windows, `X = 1`).
    pub fn verify_moebius_assembly(&self, m: u64) -> Result<f64> {
        if !self.coprime_to_level(m) {
            return Err(Error::Coprimality(format!("m = {m} and N = {}", self.level)));
        }
        let w = Window { x_max: 1, ..self.window };
        let h = |qq: u64, l: u64, win: &Window| self.build_h(qq, l, win);
        let g = |qq: u64, l: u64, win: &Window| self.build_g(qq, l, win).map(|f| f.series);
        let direct_h = self.build_h(self.q, m, &w)?;
        let assembled_h = self.moebius_assembly(m, &w, |qq, mm, win| self.bold(qq, mm, win, h))?;
        let direct_g = self.build_g(self.q, m, &w)?.series;
        let assembled_g = self.moebius_assembly(m, &w, |qq, mm, win| self.bold(qq, mm, win, g))?;
        Ok(compare(&direct_h, &assembled_h, &w).max(compare(&direct_g, &assembled_g, &w)))
    }
}

/// Coefficientized generating function of non-primitive Gauss sums: for
/// every `ℓ ≤ ℓ_max` prime to `N`,
/// `Σ_{ℓ₁ℓ₂=ℓ} g(χ*, ℓ₁c*, m) χ*(ℓ₂) = [ℓ | m] τ(χ*) χ̄*(m/ℓ) ℓ`.
///
/// This is `Σ_{(ℓ,N)=1} g(χ*, ℓc*, m) ℓ^{-s} = τ(χ*) Σ_{ℓ|m, (ℓ,N)=1} χ̄*(m/ℓ) ℓ^{1-s} / L^{(N)}(s, χ*)`
/// multiplied through by `L^{(N)}(s, χ*)` and read off coefficient by coefficient.
pub fn ramanujan_lemma_residual(chi: &DirichletCharacter, m: i64, level: u64, ell_max: u64) -> Result<f64> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: chi.conductor() });
    }
    let cstar = chi.modulus();
    if arith::gcd(cstar, level) != 1 {
        return Err(Error::Coprimality(format!("c* = {cstar} and N = {level}")));
    }
    let tau = gauss_sum(chi);
    let table = GaussTable::new(chi.clone());
    let mut worst = 0.0f64;
    for ell in 1..=ell_max {
        if arith::gcd(ell, level) != 1 {
            continue;
        }
        let mut lhs = ZERO;
        for l1 in arith::divisors(ell as i64)? {
            lhs += table.get(l1 * cstar, m)? * chi.eval((ell / l1) as i64);
        }
        let rhs = if m % ell as i64 == 0 { tau * chi.eval(m / ell as i64).conj() * ell as f64 } else { ZERO };
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Stand-in dual for computations that only touch H.
struct NoCoefficients {
    level: u64,
    psi: DirichletCharacter,
}

impl CoefficientSource for NoCoefficients {
    fn level(&self) -> u64 {
        self.level
    }

    fn nebentypus(&self) -> &DirichletCharacter {
        &self.psi
    }

    fn coefficient(&self, _: i64, _: i64) -> Result<Complex64> {
        Err(Error::Invalid("no dual coefficients available".into()))
    }
}

/// Reconstruction of additive twists from character twists: for each unit
/// `a` mod `c` and `n ≤ sample`,
/// `Σ_{χ mod c} χ̄(a)·[n-coefficient of ℓ^{1-2s}H_χ(q, ℓ)] = φ(c) A(q, n) e(ān/c)`,
/// where `H_χ` is built from the primitive part of χ with `ℓ = c/c*`.
pub fn verify_orthogonality_equivalence(model: &dyn CoefficientSource, c: u64, q: u64, sample: u64) -> Result<f64> {
    let level = model.level();
    if arith::gcd(c, level) != 1 || arith::gcd(q, level) != 1 {
        return Err(Error::Coprimality(format!("c = {c}, q = {q} and N = {level}")));
    }
    let dual = NoCoefficients { level, psi: model.nebentypus().conj() };
    let chars = crate::characters::enumerate_characters(c)?;
    let phi = chars.len() as f64;
    // n-coefficients A(q, n) g(χ̄*, c, n) per character
    let mut columns = Vec::with_capacity(chars.len());
    for chi in &chars {
        let star = chi.primitive_part();
        let ell = c / star.modulus();
        let w = Window::new(1, sample, ell * ell)?;
        let case = IdentityCase::new(model, &dual, &star, q, w)?;
        let h = case.build_h(q, ell, &w)?;
        let col: Vec<Complex64> =
            (1..=sample).map(|n| h.get(&Key { x: 1, y: Rational::new(n, ell * ell) }) * ell as f64).collect();
        columns.push(col);
    }
    let mut worst = 0.0f64;
    for a in 1..=c {
        if arith::gcd(a, c) != 1 {
            continue;
        }
        let abar = arith::mod_inverse(a as i64, c)?;
        for n in 1..=sample {
            let lhs: Complex64 =
                chars.iter().zip(&columns).map(|(chi, col)| chi.eval(a as i64).conj() * col[n as usize - 1]).sum();
            let rhs = phi
                * model.coefficient(q as i64, n as i64)?
                * crate::characters::cis_turn(arith::mul_mod(abar, n, c), c);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}
