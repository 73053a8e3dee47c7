//! Integer helpers and dense polynomials over a prime field GF(p).
//!
//! Polynomials are stored low-degree-first and kept trimmed, so the zero
//! polynomial is the empty vector.

/// Distinct prime divisors in increasing order.
pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Writes `q = p^l`, or returns `None` when `q` is not a prime power.
pub(crate) fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = prime_divisors(q)[0];
    let (mut rest, mut l) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        l += 1;
    }
    (rest == 1).then_some((p, l))
}

fn pow_mod_int(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn inv_mod_prime(c: u32, p: u32) -> u32 {
    pow_mod_int(c as u64, p as u64 - 2, p as u64) as u32
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo a nonzero `f`.
pub(crate) fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = inv_mod_prime(f[df], p) as u64;
    let p64 = p as u64;
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top] as u64 * lead_inv % p64;
        let shift = top - df;
        for (i, &fc) in f.iter().enumerate() {
            let sub = c * fc as u64 % p64;
            r[shift + i] = ((r[shift + i] as u64 + p64 - sub) % p64) as u32;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    rem(&prod, f, p)
}

pub(crate) fn pow_mod(base: &[u32], mut exp: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut acc = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let mut out: Vec<u32> = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin's irreducibility test for a monic `f` of degree ≥ 1.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    let x = rem(&[0, 1], f, p);
    // frob[i] = x^(p^i) mod f
    let mut frob = vec![x.clone()];
    for i in 1..=d {
        let next = pow_mod(&frob[i - 1], p as u64, f, p);
        frob.push(next);
    }
    if frob[d] != x {
        return false;
    }
    prime_divisors(d as u64).into_iter().all(|r| {
        let h = sub(&frob[d / r as usize], &x, p);
        gcd(&h, f, p).len() == 1
    })
}

/// The lexicographically smallest monic irreducible polynomial of degree `d`,
/// comparing coefficients from the constant term upwards.
pub(crate) fn smallest_irreducible(p: u32, d: u32) -> Option<Vec<u32>> {
    let d = d as usize;
    let count = (p as u64).checked_pow(d as u32)?;
    (0..count).find_map(|t| {
        let mut f = vec![0u32; d + 1];
        f[d] = 1;
        let mut rest = t;
        // the constant coefficient is the most significant digit of t
        for i in (0..d).rev() {
            f[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        is_irreducible(&f, p).then_some(f)
    })
}

pub(crate) fn digits_of(code: u32, p: u32, d: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(d as usize);
    let mut rest = code;
    for _ in 0..d {
        out.push(rest % p);
        rest /= p;
    }
    trim(&mut out);
    out
}

pub(crate) fn code_of(poly: &[u32], p: u32) -> u32 {
    poly.iter().rev().fold(0, |acc, &c| acc * p + c)
}
