//! Minimal dense polynomials over a prime field, used to pick field moduli.
//!
//! Coefficient vectors are little-endian (`v[i]` multiplies `x^i`) with
//! trailing zeros trimmed.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1;
        let c = r[k] * lead_inv % p;
        for i in 0..=dm {
            r[k - dm + i] = (r[k - dm + i] + (p - c) * m[i]) % p;
        }
        trim(&mut r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(&prod, m, p)
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: `f` of degree `n` is irreducible iff `gcd(f, x^{p^i} - x) = 1`
/// for every `1 ≤ i ≤ n/2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    let x = rem(&[0, 1], f, p);
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        // h <- h^p mod f
        let mut acc = vec![1u64];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, f, p);
            }
            base = mul_mod(&base, &base, f, p);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if gcd(f, &diff, p).len() != 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible of degree `n` over `F_p`, ordering candidates
/// lexicographically by `(c_0, c_1, …, c_{n-1})`. Returns `c_0..c_n`.
pub(crate) fn first_irreducible(p: u32, n: usize) -> Vec<u32> {
    let p64 = p as u64;
    let mut tail = vec![0u64; n];
    loop {
        let mut f = tail.clone();
        f.push(1);
        if is_irreducible(&f, p64) {
            return f.into_iter().map(|c| c as u32).collect();
        }
        // increment with c_{n-1} as the fastest digit
        let mut k = n;
        loop {
            assert!(k > 0, "no irreducible polynomial of degree {n} over F_{p}");
            k -= 1;
            tail[k] += 1;
            if tail[k] < p64 {
                break;
            }
            tail[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn has_root(f: &[u64], p: u64) -> bool {
        (0..p).any(|x| f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0)
    }

    #[test]
    fn low_degree_matches_root_test() {
        for p in [2u64, 3, 5, 7] {
            for c0 in 0..p {
                for c1 in 0..p {
                    let quad = [c0, c1, 1];
                    assert_eq!(is_irreducible(&quad, p), !has_root(&quad, p));
                    for c2 in 0..p {
                        let cubic = [c0, c1, c2, 1];
                        assert_eq!(is_irreducible(&cubic, p), !has_root(&cubic, p));
                    }
                }
            }
        }
    }

    #[test]
    fn counts_of_irreducible_quartics_over_f2() {
        // x^4+x+1, x^4+x^3+1, x^4+x^3+x^2+x+1
        let mut count = 0;
        for bits in 0..16u64 {
            let f: Vec<u64> = (0..4).map(|i| (bits >> i) & 1).chain([1]).collect();
            if is_irreducible(&f, 2) {
                count += 1;
            }
        }
        assert_eq!(count, 3);
    }

    #[test]
    fn ordering_is_constant_term_first() {
        assert_eq!(first_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(first_irreducible(3, 2), vec![1, 0, 1]);
        // (1,0,0,0) is x^4+1 = (x+1)^4; (1,0,0,1) is x^4+x^3+1
        assert_eq!(first_irreducible(2, 4), vec![1, 0, 0, 1, 1]);
    }
}
