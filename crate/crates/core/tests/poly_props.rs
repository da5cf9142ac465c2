use proptest::prelude::*;
use trinomlab_core::field::FieldCtx;
use trinomlab_core::poly::{cubic_discriminant, PolyFq};

fn monic_cubic(f: &FieldCtx, b: u32, c: u32, d: u32) -> PolyFq {
    PolyFq::new(f, vec![f.element(d), f.element(c), f.element(b), f.one()]).unwrap()
}

fn has_repeated_root(f: &FieldCtx, g: &PolyFq) -> bool {
    let dg = g.derivative(f);
    if dg.is_zero() {
        return true;
    }
    g.gcd(f, &dg).unwrap().degree() != Some(0)
}

#[test]
fn discriminant_vanishes_exactly_on_repeated_roots() {
    for (p, n) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
        let f = FieldCtx::new(p, n).unwrap();
        let q = f.order() as u32;
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let g = monic_cubic(&f, b, c, d);
                    let disc = cubic_discriminant(&f, f.element(b), f.element(c), f.element(d));
                    assert_eq!(
                        disc.is_zero(),
                        has_repeated_root(&f, &g),
                        "q={q} {b} {c} {d}"
                    );
                }
            }
        }
    }
}

#[test]
fn discriminant_matches_root_differences_in_splitting_field() {
    // every cubic over F_7 splits in F_{7^6}; F_7 sits inside as the prime field
    let small = FieldCtx::new(7, 1).unwrap();
    let big = FieldCtx::new(7, 6).unwrap();
    let lift = |x: trinomlab_core::Felt| big.from_int(small.prime_value(x).unwrap() as i64);
    let mut checked = 0;
    for code in (0..343u32).step_by(5) {
        let (b, c, d) = (code / 49, (code / 7) % 7, code % 7);
        let g = monic_cubic(&small, b, c, d);
        let disc = cubic_discriminant(&small, small.element(b), small.element(c), small.element(d));
        let lifted = PolyFq::new(&big, g.coeffs().iter().map(|&x| lift(x)).collect()).unwrap();
        let roots = lifted.find_roots(&big).unwrap();
        if roots.len() < 3 {
            assert!(disc.is_zero(), "{b} {c} {d}");
        } else {
            let mut prod = big.one();
            for i in 0..3 {
                for j in i + 1..3 {
                    let diff = big.sub(roots[i], roots[j]);
                    prod = big.mul(prod, big.mul(diff, diff));
                }
            }
            assert_eq!(prod, lift(disc));
        }
        checked += 1;
    }
    assert!(checked > 60);
}

#[test]
fn irreducibility_agrees_with_root_and_factor_search() {
    // a quartic over F_3 is reducible iff it has a root or a monic quadratic factor
    let f = FieldCtx::new(3, 1).unwrap();
    let quadratics: Vec<PolyFq> = (0..9u32)
        .map(|k| PolyFq::new(&f, vec![f.element(k % 3), f.element(k / 3), f.one()]).unwrap())
        .collect();
    for code in 0..81u32 {
        let cs: Vec<_> = (0..4)
            .map(|i| f.element((code / 3u32.pow(i)) % 3))
            .collect();
        let mut all = cs.clone();
        all.push(f.one());
        let g = PolyFq::new(&f, all).unwrap();
        let has_root = !g.find_roots(&f).unwrap().is_empty();
        let has_quad = quadratics.iter().any(|h| g.rem(&f, h).unwrap().is_zero());
        assert_eq!(
            g.is_irreducible(&f).unwrap(),
            !(has_root || has_quad),
            "{code}"
        );
    }
}

proptest! {
    #[test]
    fn division_identity(a in proptest::collection::vec(0u32..25, 1..12), b in proptest::collection::vec(0u32..25, 1..6)) {
        let f = FieldCtx::new(5, 2).unwrap();
        let pa = PolyFq::new(&f, a.iter().map(|&i| f.element(i)).collect()).unwrap();
        let pb = PolyFq::new(&f, b.iter().map(|&i| f.element(i)).collect()).unwrap();
        prop_assume!(!pb.is_zero());
        let (quo, rem) = pa.div_rem(&f, &pb).unwrap();
        let back = quo.mul(&f, &pb).unwrap().add(&f, &rem).unwrap();
        prop_assert_eq!(back, pa);
        if let Some(dr) = rem.degree() {
            prop_assert!(dr < pb.degree().unwrap());
        }
    }

    #[test]
    fn roots_really_vanish(a in proptest::collection::vec(0u32..49, 2..8)) {
        let f = FieldCtx::new(7, 2).unwrap();
        let g = PolyFq::new(&f, a.iter().map(|&i| f.element(i)).collect()).unwrap();
        prop_assume!(g.degree().unwrap_or(0) >= 1);
        let roots = g.find_roots(&f).unwrap();
        for x in f.elements() {
            prop_assert_eq!(g.eval(&f, x).unwrap().is_zero(), roots.contains(&x));
        }
    }
}

#[test]
fn cubic_discriminant_closed_form_on_the_curve() {
    // D(u^3 - u^2 + (2-2tσ)/(σ²-4) u + 2/(σ²-4)) = -16(σ+5t)²/(σ²-4)³ once t² = -2
    let mut off_curve_failures = 0;
    for (p, n) in [(3u64, 2u32), (11, 1), (17, 1), (5, 2)] {
        let f = FieldCtx::new(p, n).unwrap();
        let k = |v: i64| f.from_int(v);
        for sigma in f.elements() {
            let den = f.sub(f.mul(sigma, sigma), k(4));
            let Ok(inv) = f.inv(den) else { continue };
            for t in f.elements() {
                let c = f.mul(f.sub(k(2), f.mul(k(2), f.mul(t, sigma))), inv);
                let disc = cubic_discriminant(&f, k(-1), c, f.mul(k(2), inv));
                let lin = f.add(sigma, f.mul(k(5), t));
                let expect = f.mul(f.mul(k(-16), f.mul(lin, lin)), f.pow(inv, 3).unwrap());
                if f.mul(t, t) == k(-2) {
                    assert_eq!(disc, expect, "q={} σ={sigma} t={t}", f.order());
                } else if disc != expect {
                    off_curve_failures += 1;
                }
            }
        }
    }
    assert!(off_curve_failures > 0);
}
