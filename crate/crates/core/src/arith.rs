//! Rational-integer helpers: primality, factorization, modular arithmetic.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// `ℓ`-adic valuation of a nonzero integer.
pub fn int_val(n: &BigInt, l: u64) -> i64 {
    assert!(!n.is_zero(), "valuation of zero");
    let l = BigInt::from(l);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&l);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `ℓ`-adic valuation of a nonzero rational.
pub fn rat_val(x: &BigRational, l: u64) -> i64 {
    int_val(x.numer(), l) - int_val(x.denom(), l)
}

/// Reduce a rational with `ℓ`-integral value modulo `modulus` (a power of `ℓ`).
pub fn rat_mod(x: &BigRational, modulus: &BigInt) -> BigInt {
    let d = x.denom().mod_floor(modulus);
    let inv = mod_inverse(&d, modulus).expect("denominator not invertible modulo prime power");
    (x.numer() * inv).mod_floor(modulus)
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, m: u64) -> u64 {
    let r = mod_inverse(&BigInt::from(a), &BigInt::from(m)).expect("not invertible");
    r.to_u64().unwrap()
}

pub fn bigmod_u64(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

fn miller_rabin_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return miller_rabin_u64(small);
    }
    // strong probable-prime test with fixed bases above 2^64
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x).mod_floor(n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    miller_rabin_u64(n)
}

fn pollard_rho(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c).mod_floor(n);
        let mut x = BigInt::from(2);
        let mut y = x.clone();
        let mut d = BigInt::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization of `|n|` as sorted `(prime, exponent)` pairs.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut n = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, out: &mut Vec<(BigInt, u32)>| {
        if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
            e.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for p in 2u64..1000 {
        let bp = BigInt::from(p);
        while (&n % &bp).is_zero() {
            n /= &bp;
            push(bp.clone(), &mut out);
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            push(m, &mut out);
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    out
}

/// Primes dividing numerator or denominator of a nonzero rational.
pub fn rat_support(x: &BigRational) -> Vec<BigInt> {
    let mut ps: Vec<BigInt> = Vec::new();
    for n in [x.numer(), x.denom()] {
        if !n.abs().is_one() {
            ps.extend(factor(n).into_iter().map(|(p, _)| p));
        }
    }
    ps.sort();
    ps.dedup();
    ps
}

pub fn is_squarefree(n: &BigInt) -> bool {
    factor(n).iter().all(|(_, e)| *e == 1)
}

/// Kronecker symbol `(d | ℓ)` for a prime `ℓ`.
pub fn kronecker(d: &BigInt, l: u64) -> i32 {
    if l == 2 {
        if d.is_even() {
            return 0;
        }
        let r = bigmod_u64(d, 8);
        return if r == 1 || r == 7 { 1 } else { -1 };
    }
    let r = bigmod_u64(d, l);
    if r == 0 {
        return 0;
    }
    if powmod(r, (l - 1) / 2, l) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli–Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// A square root of `d` in `ℤ/ℓ^k` congruent to `r0` mod `ℓ` (odd `ℓ`), or mod 8 data for `ℓ = 2`.
pub fn hensel_sqrt(d: &BigInt, l: u64, k: u32, r0: &BigInt) -> BigInt {
    let lk = BigInt::from(l).pow(k);
    if l == 2 {
        // d ≡ 1 mod 8; lift bit by bit, keeping r ≡ r0 mod 4
        let mut r = r0.mod_floor(&BigInt::from(4));
        for j in 3..=k + 1 {
            let m = BigInt::from(2).pow(j);
            if !((&r * &r - d).mod_floor(&m)).is_zero() {
                r += BigInt::from(2).pow(j - 2);
            }
        }
        return r.mod_floor(&lk);
    }
    let mut r = r0.mod_floor(&lk);
    let two = BigInt::from(2);
    let mut prec = 1u32;
    while prec < k {
        prec = (prec * 2).min(k);
        let m = BigInt::from(l).pow(prec);
        let f = (&r * &r - d).mod_floor(&m);
        let inv = mod_inverse(&(&two * &r), &m).unwrap();
        r = (&r - f * inv).mod_floor(&m);
    }
    r.mod_floor(&lk)
}

pub fn isqrt(n: &BigInt) -> BigInt {
    if n.is_negative() {
        panic!("isqrt of negative");
    }
    BigUint::try_from(n.clone()).unwrap().sqrt().into()
}

pub fn is_square_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = isqrt(n);
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Exact `k`-th root of a rational, if it exists.
pub fn rat_root(x: &BigRational, k: u32) -> Option<BigRational> {
    let root = |n: &BigInt| -> Option<BigInt> {
        let neg = n.is_negative();
        if neg && k % 2 == 0 {
            return None;
        }
        let r = BigUint::try_from(n.abs()).unwrap().nth_root(k);
        let r = BigInt::from(r);
        let r = if neg { -r } else { r };
        if &r.pow(k) == n {
            Some(r)
        } else {
            None
        }
    };
    Some(BigRational::new(root(x.numer())?, root(x.denom())?))
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let mut sieve = vec![true; (n + 1) as usize];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i as usize] {
            let mut j = i * i;
            while j <= n {
                sieve[j as usize] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k as usize]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_small() {
        assert_eq!(factor(&big(360)), vec![(big(2), 3), (big(3), 2), (big(5), 1)]);
        let n = big(1_000_003) * big(999_983);
        assert_eq!(factor(&n), vec![(big(999_983), 1), (big(1_000_003), 1)]);
    }

    #[test]
    fn kronecker_matches_euler() {
        assert_eq!(kronecker(&big(-47), 11), -1);
        assert_eq!(kronecker(&big(-79), 2), 1);
        assert_eq!(kronecker(&big(-79), 79), 0);
        assert_eq!(kronecker(&big(2), 7), 1);
    }

    #[test]
    fn hensel_sqrt_lifts() {
        let d = big(-47);
        let r = hensel_sqrt(&d, 3, 10, &big(1));
        let m = big(3).pow(10);
        assert!(((&r * &r - &d) % &m).is_zero());
        let d = big(17);
        let r = hensel_sqrt(&d, 2, 20, &big(1));
        let m = big(2).pow(20);
        assert!(((&r * &r - &d).mod_floor(&m)).is_zero());
    }

    #[test]
    fn tonelli() {
        for p in [7u64, 13, 17, 41, 97] {
            for a in 1..p {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!(mulmod(r, r, p), a);
                }
            }
        }
    }
}
