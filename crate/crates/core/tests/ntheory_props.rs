use proptest::prelude::*;
use rama_core::ntheory::*;

fn brute_squares(m: u64) -> Vec<bool> {
    let mut sq = vec![false; m as usize];
    for x in 0..m {
        sq[mul_mod(x, x, m) as usize] = true;
    }
    sq
}

#[test]
fn legendre_matches_exhaustive_squares() {
    for q in (3..=101u64).filter(|&q| is_prime(q)) {
        let sq = brute_squares(q);
        for a in 0..q {
            let want = if a == 0 {
                0
            } else if sq[a as usize] {
                1
            } else {
                -1
            };
            assert_eq!(legendre(a as i64, q).unwrap(), want, "a={a} q={q}");
        }
    }
}

#[test]
fn generator_solutions_count() {
    for p in [5u64, 13, 17, 29, 37, 41] {
        let sols = enumerate_generator_solutions(p).unwrap();
        assert_eq!(sols.len() as u64, p + 1, "p={p}");
        for s in &sols {
            assert_eq!(s.norm(), p);
            assert!(s.x[0] > 0 && s.x[0] % 2 == 1);
            assert!(s.x[1..].iter().all(|v| v % 2 == 0));
            assert!(sols.contains(&s.conjugate()));
        }
    }
}

fn brute_four_squares(n: u64) -> usize {
    let b = isqrt(n) as i64;
    let mut count = 0;
    for a in -b..=b {
        for c in -b..=b {
            for d in -b..=b {
                let rest = n as i64 - a * a - c * c - d * d;
                if rest < 0 {
                    continue;
                }
                let r = isqrt(rest as u64) as i64;
                if r * r == rest {
                    count += if r == 0 { 1 } else { 2 };
                }
            }
        }
    }
    count
}

#[test]
fn four_squares_free_count_matches_brute_force() {
    for n in 0..=200u64 {
        let got = four_squares_with_pattern(n, &CongruencePattern::FREE, u64::MAX).unwrap();
        assert_eq!(got.len(), brute_four_squares(n), "n={n}");
    }
}

#[test]
fn jacobi_four_square_count() {
    // r_4(n) = 8 * sum of divisors of n not divisible by 4.
    for n in 1..=300u64 {
        let want: u64 = 8 * (1..=n).filter(|d| n % d == 0 && d % 4 != 0).sum::<u64>();
        let got = four_squares_with_pattern(n, &CongruencePattern::FREE, u64::MAX).unwrap();
        assert_eq!(got.len() as u64, want, "n={n}");
    }
}

proptest! {
    #[test]
    fn sqrt_mod_agrees_with_exhaustive(m in (1u64..1000).prop_map(|h| 2 * h + 1), a in 0i64..4000) {
        let sq = brute_squares(m);
        let r = sqrt_mod(a, m).unwrap();
        let target = reduce(a, m);
        prop_assert_eq!(r.is_some(), sq[target as usize]);
        if let Some(r) = r {
            prop_assert_eq!(mul_mod(r.value(), r.value(), m), target);
        }
    }

    #[test]
    fn sqrt_mod_is_deterministic(m in (1u64..500).prop_map(|h| 2 * h + 1), a in -500i64..500) {
        prop_assert_eq!(sqrt_mod(a, m).unwrap(), sqrt_mod(a, m).unwrap());
    }

    #[test]
    fn pattern_results_are_admissible_and_complete(
        n in 0u64..400,
        m in prop::array::uniform4(1u64..6),
        odd_first in any::<bool>(),
    ) {
        let mut pattern = CongruencePattern::FREE;
        for (c, &mi) in pattern.coords.iter_mut().zip(&m) {
            c.modulus = mi;
        }
        if odd_first {
            pattern.coords[0] = CoordinateConstraint::new(m[0], Parity::Odd, Sign::Positive);
        }
        let got = four_squares_with_pattern(n, &pattern, u64::MAX).unwrap();
        let all = four_squares_with_pattern(n, &CongruencePattern::FREE, u64::MAX).unwrap();
        let want: Vec<[i64; 4]> = all.into_iter().filter(|t| pattern.admits(*t)).collect();
        for t in &got {
            prop_assert_eq!(t.iter().map(|v| (v * v) as u64).sum::<u64>(), n);
        }
        let mut got_sorted = got.clone();
        got_sorted.sort_unstable();
        let mut want_sorted = want;
        want_sorted.sort_unstable();
        prop_assert_eq!(got_sorted, want_sorted);
    }

    #[test]
    fn inverse_mod_roundtrip(m in 2u64..5000, a in 0u64..5000) {
        match inv_mod(a % m, m) {
            Some(inv) => prop_assert_eq!(mul_mod(a % m, inv, m), 1 % m),
            None => prop_assert!(gcd(a % m, m) != 1),
        }
    }

    #[test]
    fn factorize_multiplies_back(n in 1u64..1_000_000) {
        let f = factorize(n);
        prop_assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
        prop_assert!(f.iter().all(|&(p, _)| is_prime(p)));
    }
}
