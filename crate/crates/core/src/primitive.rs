//! Deterministic primitive-polynomial search over GF(2).

/// Distinct prime factors of `n` by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mulmod(a: u64, b: u64, modulus: u64, degree: u32) -> u64 {
    let (mut a, mut b, mut r) = (a, b, 0u64);
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> degree) & 1 == 1 {
            a ^= modulus;
        }
    }
    r
}

fn powmod(base: u64, mut k: u64, modulus: u64, degree: u32) -> u64 {
    let mut acc = 1u64;
    let mut b = base;
    while k > 0 {
        if k & 1 == 1 {
            acc = mulmod(acc, b, modulus, degree);
        }
        b = mulmod(b, b, modulus, degree);
        k >>= 1;
    }
    acc
}

/// Whether `modulus` (bit `i` = coefficient of `x^i`, degree `degree`) is
/// primitive, i.e. `x` has order exactly `2^degree - 1` modulo it.
///
/// A reducible polynomial cannot pass: its quotient ring has fewer than
/// `2^degree - 1` units.
pub fn is_primitive(modulus: u64, degree: u32) -> bool {
    if degree == 0 || degree > 62 || modulus >> degree != 1 || modulus & 1 == 0 {
        return false;
    }
    let order = (1u64 << degree) - 1;
    let x = if degree == 1 { modulus & 1 } else { 2 };
    if powmod(x, order, modulus, degree) != 1 {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|p| powmod(x, order / p, modulus, degree) != 1)
}

/// The lexicographically smallest primitive polynomial of the given degree,
/// comparing coefficient sequences from the constant term upward.
///
/// The constant and leading coefficients are forced to 1, so candidates are
/// enumerated by the middle coefficients with `x^1` as the most significant
/// digit.
pub fn smallest_primitive(degree: u32) -> u64 {
    assert!((2..=62).contains(&degree));
    let middle = degree - 1;
    for t in 0u64..(1u64 << middle) {
        let mut f = 1 | (1u64 << degree);
        for j in 1..degree {
            if (t >> (middle - j)) & 1 == 1 {
                f |= 1 << j;
            }
        }
        if is_primitive(f, degree) {
            return f;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}
