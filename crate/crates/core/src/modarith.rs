//! Scalar arithmetic modulo a word-sized prime.

#[inline(always)]
pub fn add_mod(a: u32, b: u32, q: u32) -> u32 {
    let s = a as u64 + b as u64;
    (if s >= q as u64 { s - q as u64 } else { s }) as u32
}

#[inline(always)]
pub fn sub_mod(a: u32, b: u32, q: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + q as u64 - b as u64) as u32
    }
}

#[inline(always)]
pub fn neg_mod(a: u32, q: u32) -> u32 {
    if a == 0 {
        0
    } else {
        q - a
    }
}

#[inline(always)]
pub fn mul_mod(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 * b as u64) % q as u64) as u32
}

pub fn pow_mod(base: u32, mut exp: u64, q: u32) -> u32 {
    let q64 = q as u64;
    let mut acc = 1 % q64;
    let mut b = base as u64 % q64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % q64;
        }
        b = b * b % q64;
        exp >>= 1;
    }
    acc as u32
}

/// Inverse modulo a prime `q`, or `None` for zero.
pub fn inv_mod(a: u32, q: u32) -> Option<u32> {
    if a.is_multiple_of(q) {
        None
    } else {
        Some(pow_mod(a, q as u64 - 2, q))
    }
}

/// Reduces a signed integer into `[0, q)`.
#[inline]
pub fn from_signed(v: i64, q: u32) -> u32 {
    v.rem_euclid(q as i64) as u32
}

/// Centered lift of a residue into `[-q/2, q/2)`.
#[inline]
pub fn centered(a: u32, q: u32) -> i64 {
    let a = a as i64;
    let q = q as i64;
    if a >= q - q / 2 {
        a - q
    } else {
        a
    }
}

/// Deterministic Miller-Rabin, exact for all 32-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
