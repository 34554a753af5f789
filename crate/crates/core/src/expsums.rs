//! Kloosterman sums, Ramanujan sums and the character averages that turn
//! Kloosterman sums into products of Gauss sums.

use num_complex::Complex64;

use crate::arith;
use crate::characters::{cis_turn, gauss_sum, generalized_gauss_sum, DirichletCharacter};
use crate::error::{Error, Result};

/// Units of `c` with their inverses and the table of `e(k/c)`.
#[derive(Debug, Clone)]
pub struct KloostermanTable {
    c: u64,
    units: Vec<(u64, u64)>,
    roots: Vec<Complex64>,
}

impl KloostermanTable {
    pub fn new(c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::Zero);
        }
        let units = (0..c)
            .filter(|&x| arith::gcd(x, c) == 1)
            .map(|x| (x, arith::mod_inverse(x as i64, c).expect("unit")))
            .collect();
        let roots = (0..c).map(|k| cis_turn(k, c)).collect();
        Ok(Self { c, units, roots })
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    /// S(a, b; c) = Σ_{x mod c, (x,c)=1} e((a x + b x̄)/c).
    pub fn sum(&self, a: i64, b: i64) -> Complex64 {
        let c = self.c;
        let (a, b) = (arith::reduce(a, c), arith::reduce(b, c));
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, xinv) in &self.units {
            let k = (arith::mul_mod(a, x, c) + arith::mul_mod(b, xinv, c)) % c;
            acc += self.roots[k as usize];
        }
        acc
    }
}

/// S(a, b; c) by direct enumeration; S(a, b; 1) = 1.
pub fn kloosterman(a: i64, b: i64, c: u64) -> Result<Complex64> {
    Ok(KloostermanTable::new(c)?.sum(a, b))
}

/// c_c(m) = Σ_{u mod c, (u,c)=1} e(um/c).
pub fn ramanujan_sum(c: u64, m: i64) -> Result<Complex64> {
    generalized_gauss_sum(&DirichletCharacter::principal(1)?, c, m)
}

/// Right-hand side of the character average of Kloosterman sums:
/// `g(χ̄*, c, sgn(m)·m₁)·g(χ̄*, |cm|/m₁, m₂)` when `c*·m₁ | c·|m|`, and 0 otherwise
/// (`c*` the conductor of χ). For primitive χ and `m > 0` the condition is `m₁ | m`.
pub fn char_kloosterman_rhs(chi: &DirichletCharacter, m: i64, m1: u64, m2: i64) -> Result<Complex64> {
    let c = chi.modulus();
    let cm = c * m.unsigned_abs();
    if m == 0 || m1 == 0 || !cm.is_multiple_of(m1) {
        return Err(Error::NotDivisor { divisor: m1 as i64, n: c as i64 * m });
    }
    let star = chi.primitive_part().conj();
    if !cm.is_multiple_of(star.modulus() * m1) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let g1 = generalized_gauss_sum(&star, c, m.signum() * m1 as i64)?;
    let g2 = generalized_gauss_sum(&star, cm / m1, m2)?;
    Ok(g1 * g2)
}

/// Residuals `|Σ_{a mod c} χ̄(a) S(am, m₂; |cm|/m₁) − RHS|` for a family of
/// characters of the same modulus `c`, sharing the Kloosterman sums.
pub fn char_kloosterman_reduction_residuals(
    chars: &[DirichletCharacter],
    c: u64,
    m: i64,
    m1: u64,
    m2: i64,
) -> Result<Vec<f64>> {
    if chars.iter().any(|chi| chi.modulus() != c) {
        return Err(Error::Invalid(format!("all characters must have modulus {c}")));
    }
    let cm = c * m.unsigned_abs();
    if m == 0 || m1 == 0 || !cm.is_multiple_of(m1) {
        return Err(Error::NotDivisor { divisor: m1 as i64, n: c as i64 * m });
    }
    let table = KloostermanTable::new(cm / m1)?;
    let sums: Vec<(u64, Complex64)> =
        (0..c).filter(|&a| arith::gcd(a, c) == 1).map(|a| (a, table.sum(a as i64 * m, m2))).collect();
    chars
        .iter()
        .map(|chi| {
            let lhs: Complex64 = sums.iter().map(|&(a, s)| chi.eval(a as i64).conj() * s).sum();
            Ok((lhs - char_kloosterman_rhs(chi, m, m1, m2)?).norm())
        })
        .collect()
}

/// Single-character form of [`char_kloosterman_reduction_residuals`].
pub fn char_kloosterman_reduction_residual(chi: &DirichletCharacter, c: u64, m: i64, m1: u64, m2: i64) -> Result<f64> {
    Ok(char_kloosterman_reduction_residuals(std::slice::from_ref(chi), c, m, m1, m2)?[0])
}

/// Residual of the additive collapse for θ = ψχ primitive modulo `c`:
/// `Σ_{a mod c} θ̄(a) e(−n ā/c) = g(θ, c, −n) = (−1)^κ τ(θ) θ̄(n)`, with `(−1)^κ = θ(−1)`.
/// Returns the larger of the two discrepancies.
pub fn additive_collapse_residual(psi: &DirichletCharacter, chi: &DirichletCharacter, n: i64) -> Result<f64> {
    let c = chi.modulus();
    if !c.is_multiple_of(psi.modulus()) {
        return Err(Error::NotDivisor { divisor: psi.modulus() as i64, n: c as i64 });
    }
    let theta = psi.multiply(chi);
    if !theta.is_primitive() {
        return Err(Error::NotPrimitive { modulus: theta.modulus(), conductor: theta.conductor() });
    }
    let mut lhs = Complex64::new(0.0, 0.0);
    let nr = arith::reduce(n, c);
    for a in 0..c {
        if arith::gcd(a, c) != 1 {
            continue;
        }
        let abar = arith::mod_inverse(a as i64, c)?;
        let k = (c - arith::mul_mod(nr, abar, c)) % c;
        lhs += theta.eval(a as i64).conj() * cis_turn(k, c);
    }
    let g = generalized_gauss_sum(&theta, c, -n)?;
    let kappa_sign = f64::from(theta.parity());
    let closed = kappa_sign * gauss_sum(&theta) * theta.eval(n).conj();
    Ok((lhs - g).norm().max((lhs - closed).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_characters, primitive_characters};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn kloosterman_examples() {
        assert_eq!(kloosterman(1, 1, 1).unwrap(), Complex64::new(1.0, 0.0));
        assert!(close(kloosterman(1, 1, 3).unwrap(), Complex64::new(-1.0, 0.0), 1e-12));
        assert!(close(kloosterman(2, 1, 3).unwrap(), Complex64::new(2.0, 0.0), 1e-12));
        assert!(close(kloosterman(-1, 1, 3).unwrap(), kloosterman(2, 1, 3).unwrap(), 1e-12));
    }

    #[test]
    fn ramanujan_examples() {
        assert!(close(ramanujan_sum(5, 0).unwrap(), Complex64::new(4.0, 0.0), 1e-12));
        assert!(close(ramanujan_sum(5, 1).unwrap(), Complex64::new(-1.0, 0.0), 1e-12));
        assert!(close(ramanujan_sum(4, 2).unwrap(), Complex64::new(-2.0, 0.0), 1e-12));
    }

    #[test]
    fn ramanujan_matches_von_sterneck() {
        // c_c(m) = μ(c/g) φ(c) / φ(c/g), g = gcd(c, m)
        for c in 1..=120u64 {
            for m in -30i64..=30 {
                let g = arith::gcd(c, m.unsigned_abs());
                let v = arith::mobius(c / g).unwrap() as f64 * arith::euler_phi(c).unwrap() as f64
                    / arith::euler_phi(c / g).unwrap() as f64;
                assert!(close(ramanujan_sum(c, m).unwrap(), Complex64::new(v, 0.0), 1e-9));
                assert!(close(kloosterman(0, m, c).unwrap(), Complex64::new(v, 0.0), 1e-9));
            }
        }
    }

    #[test]
    fn reality_symmetry() {
        for c in 1..=200u64 {
            let t = KloostermanTable::new(c).unwrap();
            for a in 0..c.min(25) as i64 {
                for b in 0..c.min(25) as i64 {
                    let s = t.sum(a, b);
                    assert!(s.im.abs() < 1e-9);
                    assert!((s - t.sum(b, a)).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn weil_bound() {
        for p in arith::primes_up_to(200) {
            let t = KloostermanTable::new(p).unwrap();
            for a in 1..p as i64 {
                for b in [1, 2, (p - 1) as i64] {
                    if !(b as u64).is_multiple_of(p) {
                        assert!(t.sum(a, b).norm() <= 2.0 * (p as f64).sqrt() + 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn twisted_multiplicativity_oracle() {
        // S(a, b; c₁c₂) = S(a c̄₂, b c̄₂; c₁) S(a c̄₁, b c̄₁; c₂) for coprime moduli
        for c1 in 1..=15u64 {
            for c2 in 1..=15u64 {
                if arith::gcd(c1, c2) != 1 {
                    continue;
                }
                let i2 = arith::mod_inverse(c2 as i64, c1).unwrap() as i64;
                let i1 = arith::mod_inverse(c1 as i64, c2).unwrap() as i64;
                for (a, b) in [(1i64, 1i64), (2, 5), (-3, 7), (0, 4)] {
                    let lhs = kloosterman(a, b, c1 * c2).unwrap();
                    let rhs = kloosterman(a * i2, b * i2, c1).unwrap() * kloosterman(a * i1, b * i1, c2).unwrap();
                    assert!(close(lhs, rhs, 1e-9));
                }
            }
        }
    }

    #[test]
    fn reduction_examples() {
        let quad3 = enumerate_characters(3).unwrap()[1].clone();
        assert!(char_kloosterman_reduction_residual(&quad3, 3, 1, 1, 1).unwrap() < 1e-12);
        let rhs = char_kloosterman_rhs(&quad3, 1, 1, 1).unwrap();
        assert!(close(rhs, Complex64::new(-3.0, 0.0), 1e-12));
        for c in 1..=12u64 {
            let p = DirichletCharacter::principal(c).unwrap();
            for m2 in -3..=3 {
                assert!(char_kloosterman_reduction_residual(&p, c, 1, c, m2).unwrap() < 1e-10);
            }
        }
        let prim4 = primitive_characters(4).unwrap()[0].clone();
        assert_eq!(char_kloosterman_rhs(&prim4, 1, 2, 3).unwrap(), Complex64::new(0.0, 0.0));
        assert!(char_kloosterman_reduction_residual(&prim4, 4, 1, 2, 3).unwrap() < 1e-12);
        assert!(char_kloosterman_reduction_residual(&prim4, 4, 1, 3, 3).is_err());
    }

    /// LHS by brute force, with no shared tables.
    fn lhs_brute(chi: &DirichletCharacter, m: i64, m1: u64, m2: i64) -> Complex64 {
        let c = chi.modulus();
        let big = c * m.unsigned_abs() / m1;
        (0..c as i64)
            .map(|a| {
                let s: Complex64 = (0..big)
                    .filter(|&d| arith::gcd(d, big) == 1)
                    .map(|d| {
                        let dbar = arith::mod_inverse(d as i64, big).unwrap() as i64;
                        let k = a as i128 * m as i128 * d as i128 + m2 as i128 * dbar as i128;
                        cis_turn(k.rem_euclid(big as i128) as u64, big)
                    })
                    .sum();
                chi.eval(a).conj() * s
            })
            .sum()
    }

    #[test]
    fn reduction_against_brute_force() {
        for c in 1..=14u64 {
            let chars = enumerate_characters(c).unwrap();
            for m in [1i64, -1, 2, -2, 6, -6] {
                for m1 in arith::divisors(c as i64 * m).unwrap() {
                    for m2 in [-4i64, -1, 0, 1, 3] {
                        let rs = char_kloosterman_reduction_residuals(&chars, c, m, m1, m2).unwrap();
                        for (chi, r) in chars.iter().zip(rs) {
                            assert!(r < 1e-9, "c={c} m={m} m1={m1} m2={m2} {:?}", chi.exponents());
                            let direct = lhs_brute(chi, m, m1, m2);
                            assert!(close(direct, char_kloosterman_rhs(chi, m, m1, m2).unwrap(), 1e-9));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn literal_vanishing_branch_for_primitive() {
        // for primitive χ and m > 0 the support condition is exactly m₁ | m
        for c in 2..=20u64 {
            for chi in primitive_characters(c).unwrap() {
                for m in [1i64, 2, 6] {
                    for m1 in arith::divisors(c as i64 * m).unwrap() {
                        let rhs = char_kloosterman_rhs(&chi, m, m1, 1).unwrap();
                        if !(m as u64).is_multiple_of(m1) {
                            assert_eq!(rhs, Complex64::new(0.0, 0.0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn additive_collapse_examples() {
        let quad3 = enumerate_characters(3).unwrap()[1].clone();
        let triv = DirichletCharacter::trivial();
        assert!(additive_collapse_residual(&triv, &quad3, 1).unwrap() < 1e-12);
        assert!(additive_collapse_residual(&triv, &quad3, 3).unwrap() < 1e-12);
        let p5 = DirichletCharacter::principal(5).unwrap();
        for psi in primitive_characters(5).unwrap() {
            for n in 0..5 {
                assert!(additive_collapse_residual(&psi, &p5, n).unwrap() < 1e-12);
            }
        }
        assert!(matches!(additive_collapse_residual(&triv, &p5, 1), Err(Error::NotPrimitive { .. })));
    }

    #[test]
    fn intro_sign_variant() {
        // Σ θ̄(a) e(+nā/c) = τ(θ) θ̄(n): the a ↦ −a relabelling of the collapse
        for c in 3..=20u64 {
            for theta in primitive_characters(c).unwrap() {
                for n in 1..c as i64 {
                    let s: Complex64 = (1..c)
                        .filter(|&a| arith::gcd(a, c) == 1)
                        .map(|a| {
                            let abar = arith::mod_inverse(a as i64, c).unwrap();
                            theta.eval(a as i64).conj() * cis_turn(arith::mul_mod(n as u64, abar, c), c)
                        })
                        .sum();
                    assert!(close(s, gauss_sum(&theta) * theta.eval(n).conj(), 1e-9));
                }
            }
        }
    }
}
