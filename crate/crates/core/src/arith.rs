//! Integer utilities: factorization, divisors, Möbius, inverses and the
//! structure of (Z/qZ)^×.

use crate::error::{Error, Result};

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(pub Vec<(u64, u32)>);

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// Exponent of `p`, zero when absent.
    pub fn exponent(&self, p: u64) -> u32 {
        self.0.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }
}

/// Trial-division factorization.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    let mut p = 5u64;
    while p.saturating_mul(p) <= m {
        push(p, &mut m);
        push(p + 2, &mut m);
        p += 6;
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(Factorization(out))
}

/// Positive divisors of `|n|` in ascending order.
pub fn divisors(n: i64) -> Result<Vec<u64>> {
    let f = factorize(n.unsigned_abs())?;
    let mut ds = vec![1u64];
    for &(p, e) in &f.0 {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    Ok(ds)
}

pub fn mobius(n: u64) -> Result<i8> {
    let f = factorize(n)?;
    if f.0.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if f.0.len() % 2 == 0 { 1 } else { -1 })
}

pub fn euler_phi(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    Ok(f.0.iter().fold(n, |acc, &(p, _)| acc / p * (p - 1)))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Least nonnegative residue of `a` modulo `c`.
pub fn reduce(a: i64, c: u64) -> u64 {
    (a as i128).rem_euclid(c as i128) as u64
}

/// Inverse of `a` modulo `c` in `[1, c)`; `c = 1` yields 0.
pub fn mod_inverse(a: i64, c: u64) -> Result<u64> {
    if c == 0 {
        return Err(Error::Zero);
    }
    if c == 1 {
        return Ok(0);
    }
    let (mut r0, mut r1) = (c as i128, reduce(a, c) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { a, c });
    }
    Ok(t0.rem_euclid(c as i128) as u64)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Smallest primitive root modulo an odd prime power `p^e`.
fn primitive_root_odd(p: u64, e: u32) -> u64 {
    let pe = p.pow(e);
    let order = pe / p * (p - 1);
    let qs: Vec<u64> = factorize(order).expect("nonzero").primes().collect();
    (2..pe).find(|&g| g % p != 0 && qs.iter().all(|&r| pow_mod(g, order / r, pe) != 1)).unwrap_or(1)
}

/// One local factor of (Z/qZ)^×: generators of the `p^e` component, each
/// lifted by CRT to a residue mod `q` that is 1 on every other component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGenerator {
    pub prime: u64,
    pub prime_power: u64,
    /// Generator as a residue modulo `q`.
    pub generator: u64,
    /// Generator as a residue modulo `prime_power`.
    pub local_generator: u64,
    pub order: u64,
}

/// Generators of (Z/qZ)^× with their orders; the product of orders is φ(q).
pub fn unit_group_generators(q: u64) -> Result<Vec<(u64, u64)>> {
    Ok(local_generators(q)?.into_iter().map(|g| (g.generator, g.order)).collect())
}

pub fn local_generators(q: u64) -> Result<Vec<LocalGenerator>> {
    let f = factorize(q)?;
    let mut out = Vec::new();
    for &(p, e) in &f.0 {
        let pe = p.pow(e);
        let rest = q / pe;
        // CRT lift: x ≡ g (mod pe), x ≡ 1 (mod rest)
        let lift = |g: u64| -> u64 {
            if rest == 1 {
                return g % q;
            }
            let inv = mod_inverse(rest as i64, pe).expect("coprime components");
            let t = mul_mod((g + pe - 1) % pe, inv, pe);
            (1 + (t as u128 * rest as u128 % q as u128) as u64) % q
        };
        let mut push = |g: u64, order: u64| {
            out.push(LocalGenerator { prime: p, prime_power: pe, generator: lift(g), local_generator: g, order })
        };
        if p == 2 {
            match e {
                1 => {}
                2 => push(3, 2),
                _ => {
                    push(pe - 1, 2);
                    push(5, pe / 4);
                }
            }
        } else {
            push(primitive_root_odd(p, e), pe / p * (p - 1));
        }
    }
    Ok(out)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).map(|f| f.0 == [(n, 1)]).unwrap_or(false)
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}
