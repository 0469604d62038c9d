use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use rabi_moments::basis::{decode_index, encode_label, label_at, scaled_hamiltonian, symmetric_hamiltonian};
use rabi_moments::moments::krylov_moments_with_basis;
use rabi_moments::report::{moments_csv, parse_moments_csv, CsvTable};
use rabi_moments::scalar::ten_pow_neg;
use rabi_moments::{
    connected_moments, krylov_moments, rrk_all_roots, HighPrecisionReal, ModelParams, Precision, RationalMatrix,
    Real, RealMatrix,
};

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..9).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn params() -> impl Strategy<Value = ModelParams> {
    (rational(), 1i64..40, 1i64..9, rational()).prop_map(|(w0, wp, wq, g)| {
        ModelParams::new(w0.abs(), BigRational::new(wp.into(), wq.into()), g).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn index_round_trip(n in 1i64..100_000) {
        let label = decode_index(n).unwrap();
        prop_assert_eq!(encode_label(label.spin, label.bosons) as i64, n);
        prop_assert_eq!(label_at(label.position()), label);
    }

    /// The symmetric and scaled forms are similar through D = diag(√k!):
    /// their products along any path from the first state agree, so
    /// (H_sym)_{ij} (H_sym)_{ji} = (H_sc)_{ij} (H_sc)_{ji}.
    #[test]
    fn forms_share_off_diagonal_products(p in params(), half_n in 1usize..30) {
        let n = 2 * half_n;
        let prec = Precision(40);
        let sc: RationalMatrix = scaled_hamiltonian(&p, n).unwrap();
        let sy: RealMatrix = symmetric_hamiltonian(&p, n, prec).unwrap();
        prop_assert!(sy.is_symmetric());
        let tol = HighPrecisionReal::from_rational_at(&ten_pow_neg(30), prec);
        for (i, j, v) in sc.entries() {
            let want = v * sc.get(j, i);
            let got = sy.get(i, j) * sy.get(j, i);
            let want = HighPrecisionReal::from_rational_at(&want, prec);
            let scale = want.abs().max_of(want.lift_int(1));
            prop_assert!((got - want).abs() < tol.clone() * scale);
        }
    }

    #[test]
    fn moments_ignore_the_truncation(p in params(), j in 1usize..12, extra in 0usize..20) {
        let small = krylov_moments_with_basis(&p, j, 2 * j + 2).unwrap();
        let large = krylov_moments_with_basis(&p, j, 2 * j + 2 + 2 * extra).unwrap();
        prop_assert_eq!(small.mu(), large.mu());
    }

    /// Rebuild μ from I through μ_{j+1} = Σ_i C(j,i) I_{i+1} μ_{j-i}.
    #[test]
    fn connected_moments_invert(p in params()) {
        let t = krylov_moments(&p, 10).unwrap();
        let i = t.connected();
        let mut mu = vec![BigRational::one()];
        for j in 0..10 {
            let mut s = BigRational::zero();
            let mut c = BigInt::one();
            for k in 0..=j {
                s += BigRational::from_integer(c.clone()) * &i[k] * &mu[j - k];
                c = c * BigInt::from(j - k) / BigInt::from(k + 1);
            }
            mu.push(s);
        }
        prop_assert_eq!(&mu[..], t.mu());
        prop_assert_eq!(connected_moments(&mu).unwrap(), i.to_vec());
    }

    #[test]
    fn moments_csv_round_trips(p in params(), j in 1usize..15) {
        let t = krylov_moments(&p, j).unwrap();
        let text = moments_csv(&t, vec![("g".into(), "x".into())]).render();
        let back = CsvTable::parse(&text).unwrap();
        prop_assert_eq!(back.render(), text);
        let rows = parse_moments_csv(&back).unwrap();
        for r in rows {
            prop_assert_eq!(&r.mu, &t.mu()[r.j]);
            if r.j > 0 {
                prop_assert_eq!(r.connected.as_ref().unwrap(), t.connected_at(r.j));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Ritz values of successive orders interlace and the lowest decreases.
    #[test]
    fn ritz_values_interlace(p in params().prop_filter("coupled", |p| !p.is_decoupled())) {
        let t = krylov_moments(&p, 9).unwrap();
        let tol = HighPrecisionReal::from_rational_at(&ten_pow_neg(10), Precision(20));
        let mut prev: Option<Vec<HighPrecisionReal>> = None;
        for n in 1..=5 {
            let roots = match rrk_all_roots(t.mu(), n, 12) {
                Ok(r) => r,
                Err(_) => break,
            };
            prop_assert!(roots.windows(2).all(|w| w[0] <= w[1]));
            if let Some(prev) = &prev {
                for k in 0..prev.len() {
                    prop_assert!(roots[k] <= prev[k].clone() + tol.clone());
                    prop_assert!(prev[k] <= roots[k + 1].clone() + tol.clone());
                }
            }
            prev = Some(roots);
        }
    }
}
