//! Modular arithmetic and four-square enumeration.
//!
//! Everything here works on `u64` moduli with `u128` intermediates. Moduli in
//! this crate stay far below `2^32`, so products never overflow.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// An element of `Z/mZ` stored as its least nonnegative representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(invalid("modulus must be at least 1"));
        }
        Ok(Self {
            value: reduce(value, modulus),
            modulus,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// Least nonnegative residue of a signed integer.
pub fn reduce(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Legendre symbol `(a / q)` for an odd prime `q`.
pub fn legendre(a: i64, q: u64) -> Result<i8> {
    if q % 2 == 0 || !is_prime(q) {
        return Err(invalid(format!("{q} is not an odd prime")));
    }
    let a = reduce(a, q);
    if a == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(a, (q - 1) / 2, q) == 1 { 1 } else { -1 })
}

/// Some square root of a nonzero quadratic residue `a` modulo an odd prime.
fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut s = p - 1;
    let mut e = 0;
    while s % 2 == 0 {
        s /= 2;
        e += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut x = pow_mod(a, s.div_ceil(2), p);
    let mut b = pow_mod(a, s, p);
    let mut g = pow_mod(z, s, p);
    let mut r = e;
    loop {
        let mut t = b;
        let mut m = 0;
        while t != 1 {
            t = mul_mod(t, t, p);
            m += 1;
        }
        if m == 0 {
            return Some(x);
        }
        let gs = pow_mod(g, 1 << (r - m - 1), p);
        g = mul_mod(gs, gs, p);
        x = mul_mod(x, gs, p);
        b = mul_mod(b, g, p);
        r = m;
    }
}

/// Square root of `a` modulo `p^e` (odd prime `p`), the smaller of `{r, p^e - r}`.
fn sqrt_prime_power(a: u64, p: u64, e: u32) -> Option<u64> {
    let pe = p.pow(e);
    let a = a % pe;
    if a == 0 {
        return Some(0);
    }
    let mut v = 0;
    let mut u = a;
    while u % p == 0 {
        u /= p;
        v += 1;
    }
    if v % 2 == 1 {
        return None;
    }
    // y^2 = u mod p^(e - v), then x = p^(v/2) y.
    let target = p.pow(e - v);
    let mut y = tonelli_shanks(u % p, p)?;
    let mut cur = p;
    while cur < target {
        cur = cur.saturating_mul(cur).min(target);
        let u_cur = u % cur;
        let err = (mul_mod(y, y, cur) + cur - u_cur) % cur;
        let step = mul_mod(err, inv_mod(2 * y % cur, cur)?, cur);
        y = (y + cur - step) % cur;
    }
    let x = mul_mod(p.pow(v / 2), y, pe);
    Some(x.min(pe - x) % pe)
}

/// A square root of `a` modulo odd `m`.
///
/// Roots are chosen per prime power as the smaller of the two negatives, then
/// glued with the Chinese remainder theorem, so the answer is deterministic.
pub fn sqrt_mod(a: i64, m: u64) -> Result<Option<Residue>> {
    if m == 0 || m % 2 == 0 {
        return Err(invalid(format!("sqrt_mod needs an odd modulus, got {m}")));
    }
    let a = reduce(a, m);
    let mut acc = 0u64;
    let mut acc_mod = 1u64;
    for (p, e) in factorize(m) {
        let pe = p.pow(e);
        let Some(r) = sqrt_prime_power(a % pe, p, e) else {
            return Ok(None);
        };
        // acc + acc_mod * t = r (mod pe)
        let inv = inv_mod(acc_mod % pe, pe).expect("coprime prime powers");
        let t = mul_mod((r + pe - acc % pe) % pe, inv, pe);
        acc += acc_mod * t;
        acc_mod *= pe;
    }
    Ok(Some(Residue {
        value: acc % m,
        modulus: m,
    }))
}

/// An integral quaternion `x0 + x1 i + x2 j + x3 k` of prime norm `p` with
/// `x0 > 0` odd and `x1, x2, x3` even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuaternionSolution {
    pub x: [i64; 4],
    pub p: u64,
}

impl QuaternionSolution {
    pub fn conjugate(&self) -> Self {
        let [a, b, c, d] = self.x;
        Self {
            x: [a, -b, -c, -d],
            p: self.p,
        }
    }

    pub fn norm(&self) -> u64 {
        self.x.iter().map(|v| (v * v) as u64).sum()
    }
}

/// The `p + 1` normalized solutions of `x0^2 + x1^2 + x2^2 + x3^2 = p`.
pub fn enumerate_generator_solutions(p: u64) -> Result<Vec<QuaternionSolution>> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(invalid(format!("{p} is not a prime congruent to 1 mod 4")));
    }
    let bound = isqrt(p) as i64;
    let evens = || (-bound..=bound).filter(|v| v % 2 == 0);
    let mut out = Vec::new();
    for x1 in evens() {
        for x2 in evens() {
            for x3 in evens() {
                let s = (x1 * x1 + x2 * x2 + x3 * x3) as u64;
                if s >= p {
                    continue;
                }
                let x0 = isqrt(p - s);
                if x0 * x0 == p - s && x0 % 2 == 1 {
                    out.push(QuaternionSolution {
                        x: [x0 as i64, x1, x2, x3],
                        p,
                    });
                }
            }
        }
    }
    debug_assert_eq!(out.len() as u64, p + 1);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Odd,
    Even,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Positive,
    NonNegative,
    Any,
}

/// Constraint on one coordinate: divisible by `modulus`, with the given parity and sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoordinateConstraint {
    pub modulus: u64,
    pub parity: Parity,
    pub sign: Sign,
}

impl CoordinateConstraint {
    pub const FREE: Self = Self {
        modulus: 1,
        parity: Parity::Any,
        sign: Sign::Any,
    };

    pub fn new(modulus: u64, parity: Parity, sign: Sign) -> Self {
        Self { modulus, parity, sign }
    }

    pub fn admits(&self, v: i64) -> bool {
        let parity_ok = match self.parity {
            Parity::Odd => v % 2 != 0,
            Parity::Even => v % 2 == 0,
            Parity::Any => true,
        };
        let sign_ok = match self.sign {
            Sign::Positive => v > 0,
            Sign::NonNegative => v >= 0,
            Sign::Any => true,
        };
        parity_ok && sign_ok && v.unsigned_abs() % self.modulus == 0
    }

    /// Admissible values with `|v| <= bound`, ordered by absolute value.
    fn candidates(&self, bound: u64) -> Vec<i64> {
        let step = match self.parity {
            Parity::Even if self.modulus % 2 == 1 => 2 * self.modulus,
            _ => self.modulus,
        };
        let mut out = Vec::new();
        let mut v = 0u64;
        while v <= bound {
            let signed: &[i64] = if v == 0 { &[0] } else { &[v as i64, -(v as i64)] };
            out.extend(signed.iter().copied().filter(|&s| self.admits(s)));
            v += step;
        }
        out
    }
}

/// Divisibility, parity and sign constraints on `(a, b, c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CongruencePattern {
    pub coords: [CoordinateConstraint; 4],
    /// At least one of `b, c, d` must be nonzero.
    pub require_nonzero_bcd: bool,
}

impl CongruencePattern {
    pub const FREE: Self = Self {
        coords: [CoordinateConstraint::FREE; 4],
        require_nonzero_bcd: false,
    };

    fn validate(&self) -> Result<()> {
        if self.coords.iter().any(|c| c.modulus == 0) {
            return Err(invalid("pattern modulus must be at least 1"));
        }
        Ok(())
    }

    pub fn admits(&self, t: [i64; 4]) -> bool {
        self.coords.iter().zip(t).all(|(c, v)| c.admits(v))
            && (!self.require_nonzero_bcd || t[1..].iter().any(|&v| v != 0))
    }
}

/// Every `(a, b, c, d)` with `a^2 + b^2 + c^2 + d^2 = n` admitted by `pattern`.
///
/// Three coordinates are enumerated from their admissible values and the one
/// with the weakest divisibility constraint is solved for. `budget` caps the
/// number of enumerated triples; exceeding it is an error, so an `Ok` result
/// is always complete and an empty list certifies that no solution exists.
pub fn four_squares_with_pattern(n: u64, pattern: &CongruencePattern, budget: u64) -> Result<Vec<[i64; 4]>> {
    pattern.validate()?;
    let bound = isqrt(n);
    let solved = (0..4)
        .min_by_key(|&i| pattern.coords[i].modulus)
        .expect("four coordinates");
    let others: Vec<usize> = (0..4).filter(|&i| i != solved).collect();
    let lists: Vec<Vec<i64>> = others.iter().map(|&i| pattern.coords[i].candidates(bound)).collect();

    let mut out = Vec::new();
    let mut work = 0u64;
    let sq = |v: i64| (v * v) as u64;
    for &u in &lists[0] {
        let su = sq(u);
        if su > n {
            continue;
        }
        for &v in &lists[1] {
            let sv = su + sq(v);
            if sv > n {
                continue;
            }
            for &w in &lists[2] {
                work += 1;
                if work > budget {
                    return Err(Error::Resource(format!(
                        "four-square enumeration for {n} exceeded budget {budget}"
                    )));
                }
                let sw = sv + sq(w);
                if sw > n {
                    continue;
                }
                let rest = n - sw;
                let r = isqrt(rest);
                if r * r != rest {
                    continue;
                }
                let roots: &[i64] = if r == 0 { &[0] } else { &[r as i64, -(r as i64)] };
                for &x in roots {
                    let mut t = [0i64; 4];
                    t[solved] = x;
                    t[others[0]] = u;
                    t[others[1]] = v;
                    t[others[2]] = w;
                    if pattern.admits(t) {
                        out.push(t);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}
