//! Dirichlet characters stored by exponents against CRT unit-group generators.
//!
//! A character of modulus `q` sends the generator `g_j` (of order `r_j`) to
//! `e(x_j / r_j)`. Values are assembled as an exact fraction of a full turn and
//! passed through one `sin_cos` per evaluation.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::arith::{self, LocalGenerator};
use crate::error::{Error, Result};

/// `e(num/den) = exp(2πi·num/den)` from a reduced turn fraction.
pub fn cis_turn(num: u64, den: u64) -> Complex64 {
    let num = num % den;
    if num == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // fold into [0, 1/2] before the transcendental call
    if 2 * num == den {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * num == den {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * num == 3 * den {
        return Complex64::new(0.0, -1.0);
    }
    let (sign, n) = if 2 * num > den { (-1.0, den - num) } else { (1.0, num) };
    let (s, c) = (std::f64::consts::TAU * n as f64 / den as f64).sin_cos();
    Complex64::new(c, sign * s)
}

/// `e(x)` for a signed integer numerator.
pub fn cis_signed(num: i64, den: u64) -> Complex64 {
    cis_turn(arith::reduce(num, den), den)
}

/// Generators and a lazily built discrete-log index for one modulus.
#[derive(Debug)]
struct UnitGroup {
    modulus: u64,
    gens: Vec<LocalGenerator>,
    /// For each residue mod q, the exponent vector w.r.t. `gens` (units only).
    dlog: OnceLock<Vec<Option<Box<[u64]>>>>,
}

impl UnitGroup {
    fn new(q: u64) -> Result<Self> {
        Ok(Self { modulus: q, gens: arith::local_generators(q)?, dlog: OnceLock::new() })
    }

    fn dlog(&self) -> &[Option<Box<[u64]>>] {
        self.dlog.get_or_init(|| {
            let q = self.modulus;
            let mut table: Vec<Option<Box<[u64]>>> = vec![None; q as usize];
            let r = self.gens.len();
            let mut ks = vec![0u64; r];
            let mut value = 1 % q;
            table[value as usize] = Some(ks.clone().into_boxed_slice());
            // odometer walk over the exponent box
            'walk: loop {
                let mut j = 0;
                loop {
                    if j == r {
                        break 'walk;
                    }
                    ks[j] += 1;
                    value = arith::mul_mod(value, self.gens[j].generator, q);
                    if ks[j] < self.gens[j].order {
                        break;
                    }
                    ks[j] = 0;
                    // g_j^{order} = 1, so `value` is already back in place
                    j += 1;
                }
                table[value as usize] = Some(ks.clone().into_boxed_slice());
            }
            table
        })
    }
}

/// A Dirichlet character modulo `q`.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    exponents: Vec<u64>,
    /// Order of the character; values are powers of `e(1/den)`.
    den: u64,
    conductor: u64,
    table: Arc<OnceLock<Vec<Option<u64>>>>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus())
            .field("exponents", &self.exponents)
            .field("conductor", &self.conductor)
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

fn v_p(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

impl DirichletCharacter {
    fn build(group: Arc<UnitGroup>, exponents: Vec<u64>) -> Self {
        let gens = &group.gens;
        let exponents: Vec<u64> = exponents.iter().zip(gens).map(|(&x, g)| x % g.order).collect();
        let den = exponents.iter().zip(gens).map(|(&x, g)| g.order / arith::gcd(x, g.order)).fold(1, arith::lcm);
        // conductor, one prime power at a time
        let mut conductor = 1u64;
        let mut i = 0;
        while i < gens.len() {
            let g = &gens[i];
            let p = g.prime;
            let local_order = |k: usize| gens[k].order / arith::gcd(exponents[k], gens[k].order);
            if p == 2 && i + 1 < gens.len() && gens[i + 1].prime == 2 {
                // (−1, 5) pair of 2^e with e ≥ 3
                let o5 = local_order(i + 1);
                conductor *= if o5 > 1 {
                    1 << (2 + v_p(o5, 2))
                } else if exponents[i] != 0 {
                    4
                } else {
                    1
                };
                i += 2;
                continue;
            }
            let o = local_order(i);
            if o > 1 {
                conductor *= if p == 2 { 4 } else { p.pow(1 + v_p(o, p)) };
            }
            i += 1;
        }
        Self { group, exponents, den, conductor, table: Arc::new(OnceLock::new()) }
    }

    /// Character with the given exponents against [`generators`](Self::generators).
    pub fn from_exponents(q: u64, exponents: &[u64]) -> Result<Self> {
        let group = Arc::new(UnitGroup::new(q)?);
        if exponents.len() != group.gens.len() {
            return Err(Error::Invalid(format!(
                "modulus {q} has {} generators, got {} exponents",
                group.gens.len(),
                exponents.len()
            )));
        }
        Ok(Self::build(group, exponents.to_vec()))
    }

    pub fn principal(q: u64) -> Result<Self> {
        let group = Arc::new(UnitGroup::new(q)?);
        let r = group.gens.len();
        Ok(Self::build(group, vec![0; r]))
    }

    pub fn trivial() -> Self {
        Self::principal(1).expect("modulus 1")
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// `(generator, order)` pairs the exponents refer to.
    pub fn generators(&self) -> Vec<(u64, u64)> {
        self.group.gens.iter().map(|g| (g.generator, g.order)).collect()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus()
    }

    pub fn is_principal(&self) -> bool {
        self.den == 1
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        self.den
    }

    /// χ(−1) as ±1.
    pub fn parity(&self) -> i8 {
        match self.angle(-1) {
            Some(0) => 1,
            Some(_) => -1,
            None => unreachable!("−1 is always a unit"),
        }
    }

    /// Numerator of χ(n) as a fraction of a full turn over [`order`](Self::order); `None` off the units.
    pub fn angle(&self, n: i64) -> Option<u64> {
        self.angle_of_residue(arith::reduce(n, self.modulus()))
    }

    /// [`angle`](Self::angle) for an already reduced residue.
    #[inline]
    pub fn angle_of_residue(&self, r: u64) -> Option<u64> {
        self.table()[r as usize]
    }

    fn table(&self) -> &[Option<u64>] {
        self.table.get_or_init(|| {
            let weights: Vec<u64> = self
                .exponents
                .iter()
                .zip(&self.group.gens)
                .map(|(&x, g)| ((x as u128 * self.den as u128 / g.order as u128) % self.den as u128) as u64)
                .collect();
            self.group
                .dlog()
                .iter()
                .map(|ks| {
                    ks.as_ref().map(|ks| {
                        ks.iter()
                            .zip(&weights)
                            .fold(0u64, |acc, (&k, &w)| (acc + arith::mul_mod(k, w, self.den)) % self.den)
                    })
                })
                .collect()
        })
    }

    /// χ(n); zero when `gcd(n, q) > 1`.
    pub fn eval(&self, n: i64) -> Complex64 {
        match self.angle(n) {
            Some(a) => cis_turn(a, self.den),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn conj(&self) -> Self {
        let exps = self.exponents.iter().zip(&self.group.gens).map(|(&x, g)| (g.order - x) % g.order).collect();
        Self::build(self.group.clone(), exps)
    }

    /// Character of modulus `q` agreeing with `self` on its generators' images, given as turn fractions.
    fn from_generator_angles(group: Arc<UnitGroup>, angles: &[(u64, u64)]) -> Self {
        let exps = group
            .gens
            .iter()
            .zip(angles)
            .map(|(g, &(num, den))| {
                // e(num/den) = e(x/order)
                debug_assert_eq!((num as u128 * g.order as u128) % den as u128, 0);
                ((num as u128 * g.order as u128 / den as u128) % g.order as u128) as u64
            })
            .collect();
        Self::build(group, exps)
    }

    /// The character of modulus `q` (a multiple of the modulus) induced by `self`.
    pub fn lift(&self, q: u64) -> Result<Self> {
        if !q.is_multiple_of(self.modulus()) {
            return Err(Error::NotDivisor { divisor: self.modulus() as i64, n: q as i64 });
        }
        let group = Arc::new(UnitGroup::new(q)?);
        let angles: Vec<(u64, u64)> =
            group.gens.iter().map(|g| (self.angle(g.generator as i64).expect("unit"), self.den)).collect();
        Ok(Self::from_generator_angles(group, &angles))
    }

    /// Pointwise product, as a character modulo `lcm(q₁, q₂)`.
    pub fn multiply(&self, other: &Self) -> Self {
        let q = arith::lcm(self.modulus(), other.modulus());
        let group = Arc::new(UnitGroup::new(q).expect("positive modulus"));
        let den = arith::lcm(self.den, other.den);
        let angles: Vec<(u64, u64)> = group
            .gens
            .iter()
            .map(|g| {
                let a = self.angle(g.generator as i64).expect("unit") * (den / self.den);
                let b = other.angle(g.generator as i64).expect("unit") * (den / other.den);
                ((a + b) % den, den)
            })
            .collect();
        Self::from_generator_angles(group, &angles)
    }

    /// The primitive character χ* modulo the conductor that induces `self`.
    pub fn primitive_part(&self) -> Self {
        if self.is_primitive() {
            return self.clone();
        }
        let d = self.conductor;
        let q = self.modulus();
        let group = Arc::new(UnitGroup::new(d).expect("positive conductor"));
        let angles: Vec<(u64, u64)> = group
            .gens
            .iter()
            .map(|g| {
                // any unit mod q congruent to the generator mod d; χ is constant on the class
                let a = (0..)
                    .map(|k| g.generator + k * d)
                    .find(|&a| arith::gcd(a, q) == 1)
                    .expect("Dirichlet: a unit exists in every unit class");
                (self.angle(a as i64).expect("unit"), self.den)
            })
            .collect();
        Self::from_generator_angles(group, &angles)
    }
}

/// All φ(q) characters modulo `q`, principal first.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    let group = Arc::new(UnitGroup::new(q)?);
    let orders: Vec<u64> = group.gens.iter().map(|g| g.order).collect();
    let mut out = Vec::new();
    let mut xs = vec![0u64; orders.len()];
    loop {
        out.push(DirichletCharacter::build(group.clone(), xs.clone()));
        let mut j = 0;
        loop {
            if j == xs.len() {
                return Ok(out);
            }
            xs[j] += 1;
            if xs[j] < orders[j] {
                break;
            }
            xs[j] = 0;
            j += 1;
        }
    }
}

/// Primitive characters modulo `q`.
pub fn primitive_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(enumerate_characters(q)?.into_iter().filter(DirichletCharacter::is_primitive).collect())
}

/// τ(χ) = Σ_{u mod q} χ(u) e(u/q).
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    twisted_sum(chi, chi.modulus(), 1)
}

/// g(χ, c, m) = Σ_{u mod c, (u,c)=1} χ(u) e(um/c).
///
/// χ may be any character whose modulus divides `c`; the primitive case is
/// the one used by the identities.
pub fn generalized_gauss_sum(chi: &DirichletCharacter, c: u64, m: i64) -> Result<Complex64> {
    if c == 0 || !c.is_multiple_of(chi.modulus()) {
        return Err(Error::NotDivisor { divisor: chi.modulus() as i64, n: c as i64 });
    }
    Ok(twisted_sum(chi, c, m))
}

fn twisted_sum(chi: &DirichletCharacter, c: u64, m: i64) -> Complex64 {
    let q = chi.modulus();
    let den = chi.order();
    let big = arith::lcm(den, c);
    let (sa, sb) = (big / den, big / c);
    let m = arith::reduce(m, c);
    let mut acc = Complex64::new(0.0, 0.0);
    for u in 0..c {
        if arith::gcd(u, c) != 1 {
            continue;
        }
        let Some(a) = chi.angle_of_residue(u % q) else { continue };
        let num = (a as u128 * sa as u128 + (arith::mul_mod(u, m, c) as u128) * sb as u128) % big as u128;
        acc += cis_turn(num as u64, big);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EPS: f64 = 1e-12;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    /// Oracle: the conductor straight from its definition.
    fn conductor_scan(chi: &DirichletCharacter) -> u64 {
        let q = chi.modulus();
        arith::divisors(q as i64)
            .unwrap()
            .into_iter()
            .find(|&d| {
                (1..q).filter(|&a| arith::gcd(a, q) == 1 && a % d == 1 % d).all(|a| chi.angle(a as i64) == Some(0))
            })
            .unwrap()
    }

    #[test]
    fn cis_turn_quadrants() {
        assert!(close(cis_turn(1, 3), Complex64::new(-0.5, 3f64.sqrt() / 2.0), EPS));
        assert!(close(cis_turn(5, 6), Complex64::new(0.5, -(3f64.sqrt()) / 2.0), EPS));
        assert_eq!(cis_turn(3, 4), Complex64::new(0.0, -1.0));
        assert!(close(cis_signed(-1, 3), cis_turn(2, 3), 0.0));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_characters(1).unwrap().len(), 1);
        let c5 = enumerate_characters(5).unwrap();
        assert_eq!(c5.len(), 4);
        assert_eq!(c5.iter().filter(|c| c.is_primitive()).count(), 3);
        assert_eq!(enumerate_characters(8).unwrap().len(), 4);
        for q in 1..=120 {
            let chars = enumerate_characters(q).unwrap();
            assert_eq!(chars.len() as u64, arith::euler_phi(q).unwrap());
            assert!(chars[0].is_principal());
            // distinct value tables
            let tables: std::collections::BTreeSet<Vec<Option<u64>>> = chars
                .iter()
                .map(|c| (0..q as i64).map(|n| c.angle(n).map(|a| a * 720720 / c.order())).collect())
                .collect();
            assert_eq!(tables.len(), chars.len(), "q = {q}");
        }
    }

    #[test]
    fn evaluation_examples() {
        let p6 = DirichletCharacter::principal(6).unwrap();
        assert_eq!(p6.eval(5), Complex64::new(1.0, 0.0));
        for chi in enumerate_characters(12).unwrap() {
            assert_eq!(chi.eval(12), Complex64::new(0.0, 0.0));
            assert_eq!(chi.eval(-12), Complex64::new(0.0, 0.0));
        }
        let quad3 = &enumerate_characters(3).unwrap()[1];
        assert!(close(quad3.eval(2), Complex64::new(-1.0, 0.0), EPS));
        assert_eq!(quad3.parity(), -1);
    }

    #[test]
    fn complete_multiplicativity_and_unit_modulus() {
        for q in 1..=60u64 {
            for chi in enumerate_characters(q).unwrap() {
                for a in 0..q as i64 {
                    let va = chi.eval(a);
                    let unit = arith::gcd(a as u64, q) == 1;
                    assert_eq!(va.norm() > 0.5, unit);
                    if unit {
                        assert!((va.norm() - 1.0).abs() < EPS);
                    }
                    for b in 0..q as i64 {
                        assert!(close(chi.eval(a * b), va * chi.eval(b), 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality() {
        for q in 1..=60u64 {
            let chars = enumerate_characters(q).unwrap();
            for a in 2..q {
                if arith::gcd(a, q) != 1 {
                    continue;
                }
                let s: Complex64 = chars.iter().map(|c| c.eval(a as i64)).sum();
                assert!(s.norm() < 1e-10, "q = {q}, a = {a}");
            }
            for chi in chars.iter().skip(1) {
                let s: Complex64 = (0..q as i64).map(|u| chi.eval(u)).sum();
                assert!(s.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn conductor_matches_definition() {
        for q in 1..=200u64 {
            for chi in enumerate_characters(q).unwrap() {
                assert_eq!(chi.conductor(), conductor_scan(&chi), "q = {q}, {:?}", chi.exponents());
            }
        }
    }

    #[test]
    fn conductor_examples() {
        assert_eq!(DirichletCharacter::principal(12).unwrap().conductor(), 1);
        let quad3 = enumerate_characters(3).unwrap()[1].clone();
        let lifted = quad3.lift(6).unwrap();
        assert_eq!(lifted.conductor(), 3);
        assert_eq!(lifted.primitive_part(), quad3);
        for p in [5u64, 7, 11, 13] {
            for chi in enumerate_characters(p).unwrap().into_iter().skip(1) {
                assert_eq!(chi.conductor(), p);
            }
        }
    }

    #[test]
    fn primitive_part_induces() {
        for q in 1..=150u64 {
            for chi in enumerate_characters(q).unwrap() {
                let star = chi.primitive_part();
                assert!(star.is_primitive());
                assert_eq!(star.modulus(), chi.conductor());
                assert_eq!(star.primitive_part(), star);
                for n in 0..q as i64 {
                    if arith::gcd(n as u64, q) == 1 {
                        assert!(close(chi.eval(n), star.eval(n), 1e-12));
                    }
                }
            }
        }
        assert_eq!(DirichletCharacter::principal(10).unwrap().primitive_part().modulus(), 1);
    }

    #[test]
    fn multiply_examples() {
        for chi in enumerate_characters(15).unwrap() {
            let id = chi.multiply(&DirichletCharacter::principal(15).unwrap());
            assert_eq!(id, chi);
            assert!(chi.multiply(&chi.conj()).is_principal());
        }
        let q3 = enumerate_characters(3).unwrap()[1].clone();
        let q4 = enumerate_characters(4).unwrap()[1].clone();
        let prod = q3.multiply(&q4);
        assert_eq!(prod.modulus(), 12);
        assert!(close(prod.eval(5), Complex64::new(-1.0, 0.0), EPS));
        for n in 0..12 {
            assert!(close(prod.eval(n), q3.eval(n) * q4.eval(n), EPS));
        }
    }

    #[test]
    fn gauss_sum_examples() {
        let quad5 = enumerate_characters(5).unwrap().into_iter().find(|c| c.order() == 2).unwrap();
        assert!(close(gauss_sum(&quad5), Complex64::new(5f64.sqrt(), 0.0), 1e-12));
        let quad3 = enumerate_characters(3).unwrap()[1].clone();
        assert!(close(gauss_sum(&quad3), Complex64::new(0.0, 3f64.sqrt()), 1e-12));
        assert_eq!(gauss_sum(&DirichletCharacter::trivial()), Complex64::new(1.0, 0.0));
        assert!(close(generalized_gauss_sum(&quad5, 5, 1).unwrap(), gauss_sum(&quad5), 1e-12));
        assert!(generalized_gauss_sum(&quad5, 5, 0).unwrap().norm() < 1e-12);
        let g10 = generalized_gauss_sum(&quad5, 10, 1).unwrap();
        assert!(close(g10, -quad5.eval(2) * gauss_sum(&quad5), 1e-12));
        assert!(generalized_gauss_sum(&quad5, 12, 1).is_err());
    }

    #[test]
    fn gauss_modulus_primitive() {
        for q in 1..=50u64 {
            for chi in primitive_characters(q).unwrap() {
                assert!((gauss_sum(&chi).norm() - (q as f64).sqrt()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn unit_shift_evaluation() {
        // g(χ̄, c, m) = τ(χ̄) χ(m) for χ primitive mod c and (m, c) = 1
        for c in 1..=40u64 {
            for chi in primitive_characters(c).unwrap() {
                let bar = chi.conj();
                let tau = gauss_sum(&bar);
                for m in -20i64..=20 {
                    if arith::gcd(m.unsigned_abs(), c) != 1 {
                        continue;
                    }
                    let g = generalized_gauss_sum(&bar, c, m).unwrap();
                    assert!(close(g, tau * chi.eval(m), 1e-9));
                }
            }
        }
    }

    #[test]
    fn vanishing_for_nonunit_shift() {
        // primitive χ mod c and gcd(m, c) > 1 gives g(χ, c, m) = 0
        for c in 2..=40u64 {
            for chi in primitive_characters(c).unwrap() {
                for m in 0..c as i64 {
                    if arith::gcd(m as u64, c) > 1 {
                        assert!(generalized_gauss_sum(&chi, c, m).unwrap().norm() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn lazy_table_is_shared_across_threads() {
        let chi = enumerate_characters(97).unwrap()[5].clone();
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let c = chi.clone();
                std::thread::spawn(move || (0..97).map(|n| c.angle(n)).collect::<Vec<_>>())
            })
            .collect();
        let first = chi.clone();
        for h in handles {
            assert_eq!(h.join().unwrap(), (0..97).map(|n| first.angle(n)).collect::<Vec<_>>());
        }
    }

    proptest! {
        #[test]
        fn conj_inverts(q in 1u64..300, idx in 0usize..1000, n in any::<i32>()) {
            let chars = enumerate_characters(q).unwrap();
            let chi = &chars[idx % chars.len()];
            let v = chi.eval(n as i64) * chi.conj().eval(n as i64);
            let unit = arith::gcd((n as i64).unsigned_abs(), q) == 1;
            let expected = if unit { 1.0 } else { 0.0 };
            prop_assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-12);
        }

        #[test]
        fn conductor_of_primitive_part(q in 1u64..400, idx in 0usize..1000) {
            let chars = enumerate_characters(q).unwrap();
            let chi = &chars[idx % chars.len()];
            prop_assert_eq!(chi.primitive_part().conductor(), chi.conductor());
            prop_assert_eq!(q % chi.conductor(), 0);
        }
    }
}
