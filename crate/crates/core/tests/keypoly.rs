use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use valkey_core::family::*;
use valkey_core::keypoly::*;
use valkey_core::valgroup::{rat, Rat};
use valkey_core::valuation::HahnValuation;
use valkey_core::{GValue, HahnApprox, HahnPoint, KElem, PolyK};

fn random_laurent(rng: &mut ChaCha8Rng, p: u32, terms: usize) -> KElem {
    (0..terms).fold(KElem::zero(p), |acc, _| {
        let e = rat(rng.gen_range(-4..=8), [1, p as i64, (p * p) as i64][rng.gen_range(0..3)]);
        acc.add(&KElem::monomial(p, rng.gen_range(1..p as i64 + 1), e))
    })
}

#[test]
fn epsilon_equals_delta_on_products_of_linear_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut cases = 0;
    for p in [2u32, 3, 5] {
        for _ in 0..70 {
            let deg = rng.gen_range(1..=4);
            let roots: Vec<KElem> = (0..deg)
                .map(|_| {
                    let terms = rng.gen_range(1..=3);
                    random_laurent(&mut rng, p, terms)
                })
                .collect();
            let point = HahnPoint::series(random_laurent(&mut rng, p, 4).numerator().clone());
            let rd = RootData::new(from_roots(p, &roots), roots.into_iter().map(Element::K).collect()).unwrap();
            let r = check_eps_eq_delta(&rd, &point).unwrap();
            assert!(r.equal(), "p={p} f={} point={point}: ε={} δ={}", rd.poly, r.epsilon.value, r.delta.value);
            cases += 1;
        }
    }
    assert!(cases >= 200);
}

#[test]
fn epsilon_equals_delta_at_algebraic_points() {
    for p in [2, 3] {
        let roots: Vec<_> = phi_omega_roots(p).into_iter().map(Element::Point).collect();
        let rd = RootData::new(phi_omega(p), roots).unwrap();
        for g in [rat(1, 3), rat(1, 2), rat(2, 1), rat(5, 7)] {
            let r = check_eps_eq_delta(&rd, &eta_prime(p, g.clone())).unwrap();
            assert_eq!(r.delta.value, GValue::Finite(g));
            assert!(r.equal());
        }
    }
}

fn random_sequence(rng: &mut ChaCha8Rng, p: u32) -> Vec<KElem> {
    let len = rng.gen_range(3..=6);
    let mut acc = KElem::zero(p);
    let mut e = rng.gen_range(-6..0);
    (0..len)
        .map(|_| {
            // mostly increasing exponents, sometimes a step back or a repeat
            e += rng.gen_range(-1..=2);
            if rng.gen_bool(0.8) {
                acc = acc.add(&KElem::monomial(p, 1, Rat::from_integer(e.into())));
            }
            acc.clone()
        })
        .collect()
}

#[test]
fn pcs_conditions_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..400 {
        let p = [2, 3][rng.gen_range(0..2)];
        let prefix = PcsPrefix::from_k(random_sequence(&mut rng, p)).unwrap();
        let r = pcs_check(&prefix).unwrap();
        assert_eq!(r.increasing, r.triples, "{:?}", prefix.diffs);
        if r.increasing {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 20 && no > 20);
}

#[test]
fn first_chain_stages_are_key_and_minimal() {
    let p = 2;
    let g = rat(1, 3);
    let reference = HahnValuation::new(eta_prime(p, g.clone()));
    let mut pool: Vec<PolyK> = coefficient_pool(p, 6).iter().map(PolyK::linear).collect();
    pool.push(PolyK::one(p));
    let points: Vec<(Element, u32)> = coefficient_pool(p, 6).into_iter().map(|c| (Element::K(c), 1)).collect();
    for n in 1..=4u32 {
        let q = phi(p, n + 1);
        assert_eq!(is_key_sampled(&reference, &q, &pool).unwrap().verdict, Verdict::NotFalsified);
        let d = delta(&RootData::linear(partial_sum(p, n)), &eta_prime(p, g.clone())).unwrap();
        let query = MinimalPairQuery { a: Element::K(partial_sum(p, n)), degree: 1, delta: d.value, pool: points.clone() };
        assert_eq!(is_minimal_pair_sampled(&query).unwrap().verdict, Verdict::NotFalsified);
    }
    let report = is_key_sampled(&reference, &phi_omega(p), &pool).unwrap();
    assert_eq!(report.verdict, Verdict::NotFalsified);
    assert_eq!(report.eps_q, GValue::Finite(g.clone()));
    let query = MinimalPairQuery { a: Element::Point(eta(p)), degree: p, delta: GValue::Finite(g), pool: points.clone() };
    assert_eq!(is_minimal_pair_sampled(&query).unwrap().verdict, Verdict::NotFalsified);
    let negative = MinimalPairQuery { delta: GValue::from_ratio(-1, 4), ..query };
    assert_eq!(
        is_minimal_pair_sampled(&negative).unwrap().verdict,
        Verdict::Falsified(Element::K(partial_sum(p, 1)))
    );
}

#[test]
fn limit_key_polynomial_satisfies_truncation_drop() {
    let p = 2;
    let nu = nu_omega_plus_one(p, GValue::zero(), DEFAULT_CAP).unwrap();
    for n in 1..=6 {
        let r = alpha_psi_sampled(&nu, &phi(p, n), &[phi_omega(p)]).unwrap();
        let (_, truncated, value) = &r.entries[0];
        assert!(truncated < value && *truncated < GValue::zero(), "n={n}");
        assert_eq!(r.psi, vec![phi_omega(p)]);
    }
}

#[test]
fn classification_along_the_first_prefix() {
    for p in [2, 3] {
        let prefix = PcsPrefix::from_k((1..=6).map(|n| partial_sum(p, n)).collect()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
        let pool = coefficient_pool(p, 4);
        for _ in 0..60 {
            let deg = rng.gen_range(0..p as usize);
            let coeffs = (0..=deg).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
            let f = PolyK::new(p, coeffs);
            if f.is_zero() {
                continue;
            }
            assert!(matches!(classify_along_pcs(&prefix, &f).unwrap(), Classification::Stabilized { .. }), "{f}");
        }
    }
}

#[test]
fn keypolys_and_pcs_round_trip_on_the_first_chain() {
    for p in [2, 3] {
        let stages: Vec<_> = (1..=6).map(|n| RootData::linear(partial_sum(p, n))).collect();
        let prefix = pcs_from_keypolys(&stages, &eta_prime(p, rat(1, 3))).unwrap();
        assert_eq!(keypolys_from_pcs(&prefix).unwrap(), (2..=7).map(|i| phi(p, i)).collect::<Vec<_>>());
    }
    let t_stages: Vec<_> = (1..=4).map(|n| RootData::linear(KElem::y_pow(2, n, 1))).collect();
    let prefix = pcs_from_keypolys(&t_stages, &HahnPoint::series(HahnApprox::zero(2))).unwrap();
    assert_eq!(prefix.diffs, (1..4).map(|n| GValue::from_ratio(n, 1)).collect::<Vec<_>>());
}
