use valkey_core::family::coefficient_pool;
use valkey_core::sample::Sampler;
use valkey_core::PolyK;

#[test]
fn hasse_product_rule() {
    for (k, p) in [2u32, 3, 5].into_iter().enumerate() {
        let mut s = Sampler::new(p, coefficient_pool(p, 3), 50 + k as u64);
        for _ in 0..70 {
            let (f, g) = (s.poly(4), s.poly(4));
            let fg = f.mul(&g);
            for b in 0..=6 {
                let rhs = (0..=b).fold(PolyK::zero(p), |acc, i| {
                    acc.add(&f.hasse_derivative(i).mul(&g.hasse_derivative(b - i)))
                });
                assert_eq!(fg.hasse_derivative(b), rhs, "p={p} b={b} f={f} g={g}");
            }
        }
    }
}

#[test]
fn pth_root_round_trip() {
    for p in [2u32, 3, 5] {
        let mut s = Sampler::new(p, coefficient_pool(p, 4), 60);
        for _ in 0..100 {
            let a = s.pick();
            assert_eq!(a.pth_root().pow(p as i64).unwrap(), a);
            assert_eq!(a.pow(p as i64).unwrap().pth_root(), a);
        }
    }
}

#[test]
fn q_expansion_round_trip() {
    for (k, p) in [2u32, 3].into_iter().enumerate() {
        let mut s = Sampler::new(p, coefficient_pool(p, 4), 70 + k as u64);
        for _ in 0..250 {
            let f = s.poly(2 * p as usize + 2);
            let q = s.monic(1, p as usize);
            let e = f.q_expand(&q).unwrap();
            assert!(e.digits.iter().all(|d| d.is_zero() || d.deg0() < q.deg0()));
            assert_eq!(e.reconstruct(), f);
        }
    }
}
