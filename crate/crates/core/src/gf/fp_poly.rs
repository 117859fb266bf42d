//! Dense polynomial helpers over a prime field, used only while constructing
//! field contexts (modulus search, primitive-element search).
//!
//! Coefficients are stored lowest degree first and kept trimmed.

pub(crate) type Poly = Vec<u64>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime and a != 0 mod p
    pow_mod_u64(a % p, p - 2, p)
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo `f` (f nonzero).
pub(crate) fn rem(a: &[u64], f: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while r.len() > df {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        let shift = dr - df;
        for (i, &fc) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * fc % p) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn pow_mod(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Poly {
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

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or irreducibility test for a monic `f` of degree >= 1.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    let mut xp = rem(&x, f, p);
    for _ in 1..=deg / 2 {
        xp = pow_mod(&xp, p, f, p);
        let g = gcd(f, &sub(&xp, &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Digits of `enc` in base `p`, exactly `len` of them.
pub(crate) fn digits(mut enc: u64, p: u64, len: usize) -> Poly {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(enc % p);
        enc /= p;
    }
    out
}

pub(crate) fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}

/// The monic irreducible of degree `m` whose non-leading coefficients encode
/// to the smallest integer `sum c_i p^i`. Returned lowest degree first,
/// including the leading 1.
pub(crate) fn minimal_irreducible(p: u64, m: u32) -> Poly {
    let m = m as usize;
    let count = p.pow(m as u32);
    for enc in 0..count {
        let mut f = digits(enc, p, m);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn has_root(f: &[u64], p: u64) -> bool {
        (0..p).any(|x| f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0)
    }

    #[test]
    fn quadratic_irreducibility_matches_root_absence() {
        for p in [2u64, 3, 5, 7] {
            for enc in 0..p * p {
                let mut f = digits(enc, p, 2);
                f.push(1);
                assert_eq!(is_irreducible(&f, p), !has_root(&f, p), "p={p} f={f:?}");
            }
        }
    }

    #[test]
    fn counts_of_irreducibles_match_necklace_formula() {
        // number of monic irreducibles of degree 4 over F_2 is (16 - 4) / 4 = 3,
        // over F_3 degree 3 is (27 - 3) / 3 = 8
        let count = |p: u64, m: usize| {
            (0..p.pow(m as u32))
                .filter(|&e| {
                    let mut f = digits(e, p, m);
                    f.push(1);
                    is_irreducible(&f, p)
                })
                .count()
        };
        assert_eq!(count(2, 4), 3);
        assert_eq!(count(3, 3), 8);
        assert_eq!(count(2, 6), 9);
    }

    #[test]
    fn gcd_and_rem() {
        let p = 5;
        // (x+1)(x+2) and (x+1)(x+3)
        let a = mul(&[1, 1], &[2, 1], p);
        let b = mul(&[1, 1], &[3, 1], p);
        assert_eq!(gcd(&a, &b, p).len(), 2);
        assert!(rem(&a, &[1, 1], p).is_empty());
    }
}
