//! The registered checks and their default sweeps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use gl3_voronoi::arith;
use gl3_voronoi::characters::{enumerate_characters, gauss_sum, primitive_characters};
use gl3_voronoi::expsums::{additive_collapse_residual, char_kloosterman_reduction_residuals, KloostermanTable};
use gl3_voronoi::hecke::{
    adjoint_residual, euler_product_residual, hecke_relation_residual_1, hecke_relation_residual_2, EulerFactor,
    Perturbed,
};
use gl3_voronoi::identities::{ramanujan_lemma_residual, verify_orthogonality_equivalence};
use gl3_voronoi::special::{fourier_bessel_identity_residual, fourier_integral, kappa, xi_factor, GammaData};
use gl3_voronoi::{
    CoefficientSource, Complex64, DirichletCharacter, HeckeCoefficientModel, IdentityCase, ModelOptions, Window,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Grid, SuiteConfig};
use crate::report::VerificationReport;

/// Index and size of the coefficient shift applied by fault injection.
pub const FAULT_INDEX: (u64, u64) = (1, 2);
pub const FAULT_EPS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckName {
    AdditiveCollapse,
    BesselIdentity,
    EulerProduct,
    FeRearrangement,
    GammaUnitarity,
    GaussModulus,
    HeckeRelations,
    KloostermanReduction,
    KloostermanSymmetry,
    MoebiusAssembly,
    Orthogonality,
    RamanujanLemma,
    ZExpansion,
}

pub const ALL_CHECKS: [CheckName; 13] = [
    CheckName::AdditiveCollapse,
    CheckName::BesselIdentity,
    CheckName::EulerProduct,
    CheckName::FeRearrangement,
    CheckName::GammaUnitarity,
    CheckName::GaussModulus,
    CheckName::HeckeRelations,
    CheckName::KloostermanReduction,
    CheckName::KloostermanSymmetry,
    CheckName::MoebiusAssembly,
    CheckName::Orthogonality,
    CheckName::RamanujanLemma,
    CheckName::ZExpansion,
];

impl CheckName {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::AdditiveCollapse => "additive-collapse",
            CheckName::BesselIdentity => "bessel-identity",
            CheckName::EulerProduct => "euler-product",
            CheckName::FeRearrangement => "fe-rearrangement",
            CheckName::GammaUnitarity => "gamma-unitarity",
            CheckName::GaussModulus => "gauss-modulus",
            CheckName::HeckeRelations => "hecke-relations",
            CheckName::KloostermanReduction => "kloosterman-reduction",
            CheckName::KloostermanSymmetry => "kloosterman-symmetry",
            CheckName::MoebiusAssembly => "moebius-assembly",
            CheckName::Orthogonality => "orthogonality",
            CheckName::RamanujanLemma => "ramanujan-lemma",
            CheckName::ZExpansion => "z-expansion",
        }
    }

    /// One-line description for help output and the README table.
    pub fn summary(self) -> &'static str {
        match self {
            CheckName::AdditiveCollapse => "character sum of e(−nā/c) collapses to a twisted Gauss sum",
            CheckName::BesselIdentity => "Fourier transform of (u²+1)^(−s)u^k against the K-Bessel closed form",
            CheckName::EulerProduct => "A(1,n)χ(n) series equals the product of inverted cubic local factors",
            CheckName::FeRearrangement => "functional-equation side of Z rearranged into the G series",
            CheckName::GammaUnitarity => "|Ξ(1/2+it)| = 1 for tempered data; α+β+γ = 0 exactly",
            CheckName::GaussModulus => "|τ(χ)| = √c for primitive χ",
            CheckName::HeckeRelations => "both Hecke relations and the adjoint relation of the coefficient model",
            CheckName::KloostermanReduction => "character average of Kloosterman sums as a product of Gauss sums",
            CheckName::KloostermanSymmetry => "Kloosterman sums are real, symmetric and obey the Weil bound",
            CheckName::MoebiusAssembly => "Möbius inversion recovers H and G from their divisor convolutions",
            CheckName::Orthogonality => "additive twists recovered from character twists by orthogonality",
            CheckName::RamanujanLemma => "generating function of non-primitive Gauss sums",
            CheckName::ZExpansion => "Z(s,w) expanded as a sum of H series",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ALL_CHECKS.iter().copied().find(|c| c.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = ALL_CHECKS.iter().map(|c| c.as_str()).collect();
            format!("unknown check `{s}` (expected one of: {})", names.join(", "))
        })
    }
}

/// Running maximum over a sweep. Errors count as failures with residual `f64::MAX`.
#[derive(Debug, Clone, Default)]
struct Sweep {
    worst: f64,
    cases: u64,
    error: Option<String>,
}

impl Sweep {
    fn one(r: gl3_voronoi::Result<f64>) -> Self {
        match r {
            Ok(v) if v.is_nan() => Sweep { worst: f64::MAX, cases: 1, error: Some("NaN residual".into()) },
            Ok(v) => Sweep { worst: v, cases: 1, error: None },
            Err(e) => Sweep { worst: f64::MAX, cases: 1, error: Some(e.to_string()) },
        }
    }

    fn merge(mut self, other: Sweep) -> Sweep {
        self.worst = self.worst.max(other.worst);
        self.cases += other.cases;
        // keep the smallest message so parallel merges stay deterministic
        self.error = match (self.error, other.error) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    fn record(&mut self, r: gl3_voronoi::Result<f64>) {
        *self = std::mem::take(self).merge(Sweep::one(r));
    }
}

fn sweep_par<T: Sync>(cases: &[T], f: impl Fn(&T) -> Sweep + Sync + Send) -> Sweep {
    cases.par_iter().map(f).reduce(Sweep::default, Sweep::merge)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

struct Reporter<'a> {
    config: &'a SuiteConfig,
    start: Instant,
    out: Vec<VerificationReport>,
}

impl<'a> Reporter<'a> {
    fn new(config: &'a SuiteConfig) -> Self {
        Self { config, start: Instant::now(), out: Vec::new() }
    }

    fn push(&mut self, name: &str, default_tol: f64, params: &[(&str, String)], sweep: Sweep) {
        let elapsed = self.start.elapsed().as_millis() as u64;
        self.start = Instant::now();
        if sweep.cases == 0 {
            return;
        }
        let mut map: BTreeMap<String, String> = params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        map.insert("cases".into(), sweep.cases.to_string());
        if self.config.inject_fault {
            map.insert("inject_fault".into(), "true".into());
        }
        if let Some(e) = sweep.error {
            map.insert("error".into(), e);
        }
        let tol = self.config.tolerance_for(name, default_tol);
        self.out.push(VerificationReport::new(name, map, sweep.worst, tol, elapsed));
    }
}

/// A model, or the model with one coefficient shifted by [`FAULT_EPS`].
enum Source<'a> {
    Plain(&'a HeckeCoefficientModel),
    Faulty(Perturbed<'a>),
}

impl Source<'_> {
    fn as_ref(&self) -> &dyn CoefficientSource {
        match self {
            Source::Plain(m) => *m,
            Source::Faulty(p) => p,
        }
    }
}

fn faulty(m: &HeckeCoefficientModel, fault: bool) -> Source<'_> {
    if fault {
        Source::Faulty(Perturbed { inner: m, index: FAULT_INDEX, eps: Complex64::new(FAULT_EPS, 0.0) })
    } else {
        Source::Plain(m)
    }
}

fn model(psi: &DirichletCharacter, seed: u64, prime_bound: u64) -> gl3_voronoi::Result<HeckeCoefficientModel> {
    HeckeCoefficientModel::new(psi, seed, ModelOptions { prime_bound, ..Default::default() })
}

/// Runs one registered check and returns its reports (none for an empty sweep).
pub fn run_check(check: CheckName, config: &SuiteConfig) -> Vec<VerificationReport> {
    let mut rep = Reporter::new(config);
    match check {
        CheckName::AdditiveCollapse => additive_collapse(&mut rep),
        CheckName::BesselIdentity => bessel_identity(&mut rep),
        CheckName::EulerProduct => euler_product(&mut rep),
        CheckName::FeRearrangement => series_identity(&mut rep, false),
        CheckName::GammaUnitarity => gamma_unitarity(&mut rep),
        CheckName::GaussModulus => gauss_modulus(&mut rep),
        CheckName::HeckeRelations => hecke_relations(&mut rep),
        CheckName::KloostermanReduction => kloosterman_reduction(&mut rep),
        CheckName::KloostermanSymmetry => kloosterman_symmetry(&mut rep),
        CheckName::MoebiusAssembly => moebius_assembly(&mut rep),
        CheckName::Orthogonality => orthogonality(&mut rep),
        CheckName::RamanujanLemma => ramanujan_lemma(&mut rep),
        CheckName::ZExpansion => series_identity(&mut rep, true),
    }
    rep.out
}

fn gauss_modulus(rep: &mut Reporter) {
    let c_max = rep.config.params.c_max.unwrap_or(50);
    let mut s = Sweep::default();
    for c in 1..=c_max {
        match primitive_characters(c) {
            Ok(chars) => {
                for chi in chars {
                    s.record(Ok((gauss_sum(&chi).norm() - (c as f64).sqrt()).abs()));
                }
            }
            Err(e) => s.record(Err(e)),
        }
    }
    rep.push("gauss-modulus", 1e-9, &[("c_max", c_max.to_string())], s);
}

fn kloosterman_symmetry(rep: &mut Reporter) {
    let c_max = rep.config.params.c_max.unwrap_or(200);
    let moduli: Vec<u64> = (1..=c_max).collect();
    let per_modulus = |&c: &u64| -> (Sweep, Sweep) {
        let table = match KloostermanTable::new(c) {
            Ok(t) => t,
            Err(e) => return (Sweep::one(Err(e.clone())), Sweep::one(Err(e))),
        };
        let n = c as usize;
        let values: Vec<Complex64> = (0..n * n).map(|i| table.sum((i / n) as i64, (i % n) as i64)).collect();
        let mut sym = Sweep::default();
        let mut weil = Sweep::default();
        let prime = arith::is_prime(c);
        for a in 0..n {
            for b in 0..n {
                let v = values[a * n + b];
                let mut r = v.im.abs().max((v - values[b * n + a]).norm());
                if arith::gcd(a as u64, c) == 1 {
                    // S(a, b; c) = S(1, ab; c) for a unit a
                    let ab = arith::mul_mod(a as u64, b as u64, c) as usize;
                    r = r.max((v - values[(1 % n) * n + ab]).norm());
                }
                sym.record(Ok(r));
                if prime && a > 0 && b > 0 {
                    weil.record(Ok((v.norm() - 2.0 * (c as f64).sqrt()).max(0.0)));
                }
            }
        }
        (sym, weil)
    };
    let (sym, weil) = moduli
        .par_iter()
        .map(per_modulus)
        .reduce(|| (Sweep::default(), Sweep::default()), |x, y| (x.0.merge(y.0), x.1.merge(y.1)));
    rep.push("kloosterman-symmetry", 1e-9, &[("c_max", c_max.to_string())], sym);
    rep.push("kloosterman-weil-bound", 1e-9, &[("p_max", c_max.to_string())], weil);
}

fn kloosterman_reduction(rep: &mut Reporter) {
    let p = &rep.config.params;
    let c_max = p.c_max.unwrap_or(40);
    let m_set = p.m_set.clone().unwrap_or_else(|| vec![1, 2, 6]);
    let m2_max = p.m2_max.unwrap_or(12);
    let mut ms: Vec<i64> = m_set.iter().flat_map(|&m| [m.abs(), -m.abs()]).collect();
    ms.sort_unstable();
    ms.dedup();
    let moduli: Vec<u64> = if ms.is_empty() { Vec::new() } else { (1..=c_max).collect() };
    let s = sweep_par(&moduli, |&c| {
        let chars = match enumerate_characters(c) {
            Ok(x) => x,
            Err(e) => return Sweep::one(Err(e)),
        };
        let mut s = Sweep::default();
        for &m in &ms {
            let divs = match arith::divisors(c as i64 * m) {
                Ok(d) => d,
                Err(e) => return Sweep::one(Err(e)),
            };
            for m1 in divs {
                for m2 in -m2_max..=m2_max {
                    match char_kloosterman_reduction_residuals(&chars, c, m, m1, m2) {
                        Ok(rs) => rs.into_iter().for_each(|r| s.record(Ok(r))),
                        Err(e) => s.record(Err(e)),
                    }
                }
            }
        }
        s
    });
    let params = [("c_max", c_max.to_string()), ("m_set", join(&m_set)), ("m2_max", m2_max.to_string())];
    rep.push("kloosterman-reduction", 1e-8, &params, s);
}

fn additive_collapse(rep: &mut Reporter) {
    let c_max = rep.config.params.c_max.unwrap_or(36);
    let moduli: Vec<u64> = (1..=c_max).collect();
    let s = sweep_par(&moduli, |&c| {
        let chars = match enumerate_characters(c) {
            Ok(x) => x,
            Err(e) => return Sweep::one(Err(e)),
        };
        let mut s = Sweep::default();
        for psi in &chars {
            for chi in &chars {
                if !psi.multiply(chi).is_primitive() {
                    continue;
                }
                for n in 0..c as i64 {
                    s.record(additive_collapse_residual(psi, chi, n));
                }
            }
        }
        s
    });
    rep.push("additive-collapse", 1e-9, &[("c_max", c_max.to_string())], s);
}

fn characters_for_levels(levels: &[u64]) -> Vec<(u64, DirichletCharacter)> {
    levels
        .iter()
        .flat_map(|&n| enumerate_characters(n).unwrap_or_default().into_iter().map(move |psi| (n, psi)))
        .collect()
}

fn hecke_relations(rep: &mut Reporter) {
    let p = &rep.config.params;
    let levels = p.level.clone().unwrap_or_else(|| vec![1, 2, 3, 5]);
    let prime_bound = p.prime_bound.unwrap_or(13);
    let power_bound = p.power_bound.unwrap_or(4);
    let trials = p.trials.unwrap_or(50);
    let (seed, fault) = (rep.config.seed, rep.config.inject_fault);
    let mut cases = Vec::new();
    for (level, psi) in characters_for_levels(&levels) {
        for t in 0..trials {
            cases.push((level, psi.clone(), seed.wrapping_add(t)));
        }
    }
    let primes = arith::primes_up_to(prime_bound);
    let s = sweep_par(&cases, |(level, psi, seed)| {
        let m = match model(psi, *seed, prime_bound.max(*level)) {
            Ok(m) => m,
            Err(e) => return Sweep::one(Err(e)),
        };
        let src = faulty(&m, fault);
        let src = src.as_ref();
        let mut s = Sweep::default();
        let powers = |p: u64| (0..=power_bound).map(move |e| p.pow(e)).collect::<Vec<_>>();
        for &p in primes.iter().filter(|&&p| level % p != 0) {
            let pw = powers(p);
            for &n in &pw {
                s.record(adjoint_residual(src, n));
                for &n1 in &pw {
                    for &n2 in &pw {
                        s.record(hecke_relation_residual_1(src, n, n1, n2));
                        s.record(hecke_relation_residual_2(src, n, n1, n2));
                    }
                }
            }
            // relation 2 with ramified primes in the second index
            for r in arith::factorize(*level).map(|f| f.primes().collect::<Vec<_>>()).unwrap_or_default() {
                for j in 1..=power_bound {
                    for &pe in &pw {
                        for &n1 in &pw {
                            for &n2 in &pw {
                                s.record(hecke_relation_residual_2(src, r.pow(j) * pe, n1, n2));
                            }
                        }
                    }
                }
            }
        }
        s
    });
    let params = [
        ("level", join(&levels)),
        ("prime_bound", prime_bound.to_string()),
        ("power_bound", power_bound.to_string()),
        ("trials", trials.to_string()),
        ("seed", seed.to_string()),
    ];
    rep.push("hecke-relations", 1e-10, &params, s);
}

fn euler_product(rep: &mut Reporter) {
    let p = &rep.config.params;
    let levels = p.level.clone().unwrap_or_else(|| vec![1, 3]);
    let moduli = p.cstar.clone().unwrap_or_else(|| vec![5]);
    let n_max = p.n_max.unwrap_or(300);
    let trials = p.trials.unwrap_or(1);
    let (seed, fault) = (rep.config.seed, rep.config.inject_fault);
    let s_point = Complex64::new(1.5, 2.0);
    let mut cases = Vec::new();
    for (_, psi) in characters_for_levels(&levels) {
        for &c in &moduli {
            for chi in enumerate_characters(c).unwrap_or_default() {
                for t in 0..trials {
                    cases.push((psi.clone(), chi.clone(), seed.wrapping_add(t)));
                }
            }
        }
    }
    let run = |form: EulerFactor| {
        sweep_par(&cases, |(psi, chi, seed)| {
            let m = match model(psi, *seed, n_max.max(2)) {
                Ok(m) => m,
                Err(e) => return Sweep::one(Err(e)),
            };
            Sweep::one(euler_product_residual(faulty(&m, fault).as_ref(), chi, s_point, n_max, form))
        })
    };
    let main = run(EulerFactor::Relation);
    let variant = run(EulerFactor::PsiAtQuadratic);
    let params = [
        ("level", join(&levels)),
        ("chi_moduli", join(&moduli)),
        ("n_max", n_max.to_string()),
        ("s", format!("{s_point}")),
        ("seed", seed.to_string()),
        ("psi_at_quadratic_residual", format!("{:.3e}", variant.worst)),
    ];
    rep.push("euler-product", 1e-9, &params, main);
}

fn ramanujan_lemma(rep: &mut Reporter) {
    let p = &rep.config.params;
    let moduli = p.cstar.clone().unwrap_or_else(|| vec![3, 4, 5, 7, 8]);
    let levels = p.level.clone().unwrap_or_else(|| vec![1, 2, 3]);
    let m_max = p.m_max.unwrap_or(24);
    let ell_max = p.ell_max.unwrap_or(48);
    let mut s = Sweep::default();
    for &c in &moduli {
        let chars = match primitive_characters(c) {
            Ok(x) => x,
            Err(e) => {
                s.record(Err(e));
                continue;
            }
        };
        for &level in levels.iter().filter(|&&n| arith::gcd(c, n) == 1) {
            for chi in &chars {
                for m in 1..=m_max as i64 {
                    s.record(ramanujan_lemma_residual(chi, m, level, ell_max));
                }
            }
        }
    }
    let params = [
        ("cstar", join(&moduli)),
        ("level", join(&levels)),
        ("m_max", m_max.to_string()),
        ("ell_max", ell_max.to_string()),
    ];
    rep.push("ramanujan-lemma", 1e-9, &params, s);
}

/// `(N, ψ, χ*, q, seed)` with the coprimality hypotheses respected.
fn identity_cases(
    rep: &Reporter,
    default_q: Vec<u64>,
    default_cstar: Vec<u64>,
    default_levels: Vec<u64>,
    default_trials: u64,
) -> Vec<(DirichletCharacter, DirichletCharacter, u64, u64)> {
    let p = &rep.config.params;
    let qs = p.q.clone().unwrap_or(default_q);
    let cstars = p.cstar.clone().unwrap_or(default_cstar);
    let levels = p.level.clone().unwrap_or(default_levels);
    let trials = p.trials.unwrap_or(default_trials);
    let mut out = Vec::new();
    for (level, psi) in characters_for_levels(&levels) {
        for &c in cstars.iter().filter(|&&c| arith::gcd(c, level) == 1) {
            for chi in primitive_characters(c).unwrap_or_default() {
                for &q in qs.iter().filter(|&&q| arith::gcd(q, level) == 1) {
                    for t in 0..trials {
                        out.push((psi.clone(), chi.clone(), q, rep.config.seed.wrapping_add(t)));
                    }
                }
            }
        }
    }
    out
}

fn identity_params(
    rep: &Reporter,
    window: &Window,
    defaults: (&[u64], &[u64], &[u64], u64),
) -> Vec<(&'static str, String)> {
    let p = &rep.config.params;
    vec![
        ("q", join(p.q.as_deref().unwrap_or(defaults.0))),
        ("cstar", join(p.cstar.as_deref().unwrap_or(defaults.1))),
        ("level", join(p.level.as_deref().unwrap_or(defaults.2))),
        ("trials", p.trials.unwrap_or(defaults.3).to_string()),
        ("window", format!("{}:{}:{}", window.x_max, window.p_max, window.q_max)),
        ("seed", rep.config.seed.to_string()),
    ]
}

fn series_identity(rep: &mut Reporter, z_side: bool) {
    let (dq, dc, dl, dt) = (vec![1, 2, 3, 6], vec![3, 4, 5], vec![1, 2], 5);
    let window = rep.config.params.window.unwrap_or(Window { x_max: 144, p_max: 48, q_max: 48 });
    let cases = identity_cases(rep, dq.clone(), dc.clone(), dl.clone(), dt);
    let fault = rep.config.inject_fault;
    let s = sweep_par(&cases, |(psi, chi, q, seed)| {
        let m = match model(psi, *seed, 10_000) {
            Ok(m) => m,
            Err(e) => return Sweep::one(Err(e)),
        };
        let dual = m.contragredient();
        let src = faulty(&m, fault);
        let case = match IdentityCase::new(src.as_ref(), &dual, chi, *q, window) {
            Ok(c) => c,
            Err(e) => return Sweep::one(Err(e)),
        };
        Sweep::one(if z_side { case.verify_z_expansion() } else { case.verify_fe_rearrangement() })
    });
    let params = identity_params(rep, &window, (&dq, &dc, &dl, dt));
    rep.push(if z_side { "z-expansion" } else { "fe-rearrangement" }, 1e-8, &params, s);
}

fn moebius_assembly(rep: &mut Reporter) {
    let (dq, dc, dl, dt) = (vec![1, 2, 3, 4, 5, 6], vec![3, 5], vec![1], 1);
    let window = rep.config.params.window.unwrap_or(Window { x_max: 1, p_max: 48, q_max: 48 });
    let m_max = rep.config.params.m_max.unwrap_or(12);
    let cases = identity_cases(rep, dq.clone(), dc.clone(), dl.clone(), dt);
    let fault = rep.config.inject_fault;
    let s = sweep_par(&cases, |(psi, chi, q, seed)| {
        let m = match model(psi, *seed, 10_000) {
            Ok(m) => m,
            Err(e) => return Sweep::one(Err(e)),
        };
        let dual = m.contragredient();
        let src = faulty(&m, fault);
        let case = match IdentityCase::new(src.as_ref(), &dual, chi, *q, window) {
            Ok(c) => c,
            Err(e) => return Sweep::one(Err(e)),
        };
        let mut s = Sweep::default();
        for mm in (1..=m_max).filter(|&mm| arith::gcd(mm, psi.modulus()) == 1) {
            s.record(case.verify_moebius_assembly(mm));
        }
        s
    });
    let mut params = identity_params(rep, &window, (&dq, &dc, &dl, dt));
    params.push(("m_max", m_max.to_string()));
    rep.push("moebius-assembly", 1e-10, &params, s);
}

fn orthogonality(rep: &mut Reporter) {
    let p = &rep.config.params;
    let c_max = p.c_max.unwrap_or(12);
    let qs = p.q.clone().unwrap_or_else(|| vec![1, 2, 3]);
    let levels = p.level.clone().unwrap_or_else(|| vec![1, 5]);
    let n_max = p.n_max.unwrap_or(24);
    let (seed, fault) = (rep.config.seed, rep.config.inject_fault);
    let mut cases = Vec::new();
    for (level, psi) in characters_for_levels(&levels) {
        for c in (1..=c_max).filter(|&c| arith::gcd(c, level) == 1) {
            for &q in qs.iter().filter(|&&q| arith::gcd(q, level) == 1) {
                cases.push((psi.clone(), c, q));
            }
        }
    }
    let s = sweep_par(&cases, |(psi, c, q)| {
        let m = match model(psi, seed, 10_000) {
            Ok(m) => m,
            Err(e) => return Sweep::one(Err(e)),
        };
        Sweep::one(verify_orthogonality_equivalence(faulty(&m, fault).as_ref(), *c, *q, n_max))
    });
    let params = [
        ("c_max", c_max.to_string()),
        ("q", join(&qs)),
        ("level", join(&levels)),
        ("n_max", n_max.to_string()),
        ("seed", seed.to_string()),
    ];
    rep.push("orthogonality", 1e-9, &params, s);
}

/// `(s, k, y)` triples of the Fourier–Bessel sweep.
pub fn bessel_grid(grid: Grid) -> Vec<(Complex64, u32, f64)> {
    let mut out = Vec::new();
    for s in [0.8, 1.0, 1.7] {
        for k in [0u32, 1] {
            if k == 1 && s <= 1.0 {
                continue;
            }
            for y in [1.0, -1.0, 2.5, -2.5] {
                out.push((Complex64::new(s, 0.0), k, y));
            }
        }
    }
    if grid == Grid::Extended {
        for (s, k, y) in [((1.2, 0.8), 0, 0.7), ((2.0, -1.5), 1, -1.3), ((0.9, 3.0), 0, 3.0), ((3.0, 0.0), 1, 0.4)] {
            out.push((Complex64::new(s.0, s.1), k, y));
        }
    }
    out
}

fn bessel_identity(rep: &mut Reporter) {
    let grid = rep.config.params.grid.unwrap_or_default();
    let points = bessel_grid(grid);
    let s = sweep_par(&points, |&(s, k, y)| Sweep::one(fourier_bessel_identity_residual(s, k, y)));
    let name = if grid == Grid::Default { "default" } else { "extended" };
    rep.push("bessel-identity", 1e-6, &[("grid", name.to_string())], s);
    let want = std::f64::consts::PI * (-2.0 * std::f64::consts::PI).exp();
    let spot = Sweep::one(fourier_integral(Complex64::new(1.0, 0.0), 0, 1.0).map(|v| (v - want).norm()));
    rep.push("bessel-spot-value", 1e-8, &[("s", "1".into()), ("k", "0".into()), ("y", "1".into())], spot);
}

fn gamma_unitarity(rep: &mut Reporter) {
    let p = &rep.config.params;
    let mut rng = ChaCha8Rng::seed_from_u64(rep.config.seed);
    let data: Vec<GammaData> = match (p.nu1, p.nu2) {
        (None, None) => {
            (0..3).map(|_| GammaData::tempered(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))).collect()
        }
        (a, b) => {
            let third = Complex64::new(1.0 / 3.0, 0.0);
            vec![GammaData::level_one(a.unwrap_or(third), b.unwrap_or(third))]
        }
    };
    let moduli = p.cstar.clone().unwrap_or_else(|| vec![3, 4, 5, 7]);
    let mut s = Sweep::default();
    for &c in &moduli {
        let Ok(all) = enumerate_characters(c) else { continue };
        for chi in all.iter().filter(|x| x.is_primitive()) {
            for psi in &all {
                let theta = psi.multiply(chi);
                if !theta.is_primitive() {
                    continue;
                }
                let (tau_theta, tau_chi) = (gauss_sum(&theta), gauss_sum(chi));
                for g in &data {
                    for t in [0.0, 1.0, 2.3] {
                        let xi = xi_factor(Complex64::new(0.5, t), g, kappa(theta.parity()), tau_theta, tau_chi, c);
                        s.record(xi.map(|v| (v.norm() - 1.0).abs()));
                    }
                }
            }
        }
    }
    let nus: Vec<String> = data.iter().map(|g| format!("({};{})", g.nu1, g.nu2)).collect();
    rep.push("gamma-unitarity", 1e-8, &[("nu", nus.join(" ")), ("cstar", join(&moduli))], s);
    let mut exact = Sweep::default();
    for _ in 0..100 {
        let mut draw = || Complex64::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let g = GammaData::level_one(draw(), draw());
        exact.record(Ok(g.param_sum().norm()));
    }
    rep.push("gamma-parameter-sum", 0.0, &[("draws", "100".into()), ("seed", rep.config.seed.to_string())], exact);
}
